//! Small dense complex-matrix helpers used throughout the crate.
//!
//! Superoperators act on column-stacked density matrices: vec(A X B) = (B^T (x) A) vec(X).

use ndarray::{Array1, Array2};
use num_complex::Complex64;

pub type CMat = Array2<Complex64>;
pub type CVec = Array1<Complex64>;

pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const C_I: Complex64 = Complex64::new(0.0, 1.0);

/// Conjugate transpose.
pub fn dagger(a: &CMat) -> CMat {
    a.t().mapv(|v| v.conj())
}

/// [a, b] = ab - ba
pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a.dot(b) - b.dot(a)
}

/// {a, b} = ab + ba
pub fn anticommutator(a: &CMat, b: &CMat) -> CMat {
    a.dot(b) + b.dot(a)
}

pub fn trace(a: &CMat) -> Complex64 {
    a.diag().sum()
}

pub fn frobenius_norm(a: &CMat) -> f64 {
    a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// max_ij |a_ij - b_ij|
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn is_hermitian(a: &CMat, tol: f64) -> bool {
    let n = a.nrows();
    if n != a.ncols() {
        return false;
    }
    for i in 0..n {
        for j in i..n {
            if (a[(i, j)] - a[(j, i)].conj()).norm() > tol {
                return false;
            }
        }
    }
    true
}

/// (a + a†)/2, the Hermitian part.
pub fn hermitian_part(a: &CMat) -> CMat {
    let ad = dagger(a);
    (a + &ad).mapv(|v| 0.5 * v)
}

/// Column-stacking vectorization: out[j*d + i] = m[(i, j)].
pub fn vec_col(m: &CMat) -> CVec {
    let d = m.nrows();
    let mut v = Array1::from_elem(d * d, C_ZERO);
    for j in 0..d {
        for i in 0..d {
            v[j * d + i] = m[(i, j)];
        }
    }
    v
}

/// Inverse of `vec_col`.
pub fn unvec_col(v: &CVec, d: usize) -> CMat {
    let mut m = Array2::from_elem((d, d), C_ZERO);
    for j in 0..d {
        for i in 0..d {
            m[(i, j)] = v[j * d + i];
        }
    }
    m
}

/// Kronecker product, (a (x) b)[(i*rb + k, j*cb + l)] = a[(i,j)] b[(k,l)].
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let mut out = Array2::from_elem((ra * rb, ca * cb), C_ZERO);
    for i in 0..ra {
        for j in 0..ca {
            let aij = a[(i, j)];
            if aij == C_ZERO {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out[(i * rb + k, j * cb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Tr[a rho]
pub fn expectation(a: &CMat, rho: &CMat) -> Complex64 {
    // trace of the product without forming it
    let mut acc = C_ZERO;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * rho[(k, i)];
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sample(seed: u64, d: usize) -> CMat {
        // cheap deterministic pseudo-random fill
        let mut s = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        Array2::from_shape_fn((d, d), |_| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let re = ((s >> 32) as f64 / 2f64.powi(32)) - 0.5;
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let im = ((s >> 32) as f64 / 2f64.powi(32)) - 0.5;
            Complex64::new(re, im)
        })
    }

    #[test]
    fn test_vec_kron_convention() {
        // vec(A X B) = (B^T (x) A) vec(X) under column stacking
        let d = 4;
        let (a, b, x) = (sample(1, d), sample(2, d), sample(3, d));
        let lhs = vec_col(&a.dot(&x).dot(&b));
        let sup = kron(&b.t().to_owned(), &a);
        let rhs = sup.dot(&vec_col(&x));
        for (u, v) in lhs.iter().zip(rhs.iter()) {
            assert_relative_eq!(u.re, v.re, epsilon = 1e-12);
            assert_relative_eq!(u.im, v.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn test_unvec_roundtrip() {
        let m = sample(7, 5);
        let back = unvec_col(&vec_col(&m), 5);
        assert!(max_abs_diff(&m, &back) == 0.0);
    }

    #[test]
    fn test_commutator_trace_vanishes() {
        let (a, b) = (sample(11, 6), sample(12, 6));
        let c = commutator(&a, &b);
        assert!(trace(&c).norm() < 1e-12);
    }

    #[test]
    fn test_hermitian_part_is_hermitian() {
        let a = sample(21, 5);
        assert!(is_hermitian(&hermitian_part(&a), 1e-14));
    }

    #[test]
    fn test_expectation_matches_product_trace() {
        let (a, r) = (sample(31, 5), sample(32, 5));
        let direct = trace(&a.dot(&r));
        let fast = expectation(&a, &r);
        assert!((direct - fast).norm() < 1e-12);
    }
}
