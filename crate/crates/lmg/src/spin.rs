//! Collective spin-S operators and the Lipkin-Meshkov-Glick Hamiltonian.
//!
//! Basis: Sz eigenstates ordered by descending magnetic quantum number,
//! index i <-> m = S - i, dimension d = 2S + 1. Ladder matrix elements
//! <m+1|S+|m> = sqrt(S(S+1) - m(m+1)).
//!
//! H = -(Lambda/2S) Sx^2 - Sz, so the energy per spin h = H/S stays order
//! one as S grows; Lambda = 1 separates the symmetric and broken phases.

use crate::error::{LmgError, Result};
use crate::matrix::{dagger, CMat, C_ZERO};
use ndarray::Array2;
use num_complex::Complex64;

/// The five spin matrices for one collective spin quantum number.
pub struct SpinOperators {
    pub s: f64,
    pub dim: usize,
    pub sx: CMat,
    pub sy: CMat,
    pub sz: CMat,
    pub sp: CMat,
    pub sm: CMat,
}

impl SpinOperators {
    /// Build for spin quantum number s (positive integer or half-integer).
    pub fn new(s: f64) -> Result<Self> {
        let two_s = 2.0 * s;
        if !(s > 0.0) || (two_s - two_s.round()).abs() > 1e-9 {
            return Err(LmgError::InvalidParameter(format!(
                "spin quantum number must be a positive half-integer, got {s}"
            )));
        }
        let dim = two_s.round() as usize + 1;
        let mut sp: CMat = Array2::from_elem((dim, dim), C_ZERO);
        let mut sz: CMat = Array2::from_elem((dim, dim), C_ZERO);
        for i in 0..dim {
            let m = s - i as f64;
            sz[(i, i)] = Complex64::new(m, 0.0);
            if i > 0 {
                // raises m -> m+1, one step up the descending index
                sp[(i - 1, i)] = Complex64::new((s * (s + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
            }
        }
        let sm = dagger(&sp);
        let sx = (&sp + &sm).mapv(|v| v * 0.5);
        let sy = (&sp - &sm).mapv(|v| v * Complex64::new(0.0, -0.5));
        Ok(SpinOperators {
            s,
            dim,
            sx,
            sy,
            sz,
            sp,
            sm,
        })
    }
}

/// H = -(lambda/2S) Sx^2 - Sz.
pub fn lmg_hamiltonian(ops: &SpinOperators, lambda: f64) -> CMat {
    let sx2 = ops.sx.dot(&ops.sx);
    sx2.mapv(|v| v * (-lambda / (2.0 * ops.s))) - &ops.sz
}

/// Sx^2 + Sy^2 + Sz^2; equals S(S+1) times the identity.
pub fn casimir(ops: &SpinOperators) -> CMat {
    ops.sx.dot(&ops.sx) + ops.sy.dot(&ops.sy) + ops.sz.dot(&ops.sz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{commutator, is_hermitian, max_abs_diff, C_I};
    use approx::assert_relative_eq;
    use ndarray_linalg::{Eigh, UPLO};

    #[test]
    fn test_spin_half_is_pauli_over_two() {
        let ops = SpinOperators::new(0.5).unwrap();
        assert_eq!(ops.dim, 2);
        assert_relative_eq!(ops.sx[(0, 1)].re, 0.5);
        assert_relative_eq!(ops.sx[(1, 0)].re, 0.5);
        assert_relative_eq!(ops.sy[(0, 1)].im, -0.5);
        assert_relative_eq!(ops.sy[(1, 0)].im, 0.5);
        assert_relative_eq!(ops.sz[(0, 0)].re, 0.5);
        assert_relative_eq!(ops.sz[(1, 1)].re, -0.5);
    }

    #[test]
    fn test_spin_one_ladder_elements() {
        let ops = SpinOperators::new(1.0).unwrap();
        let r2 = 2.0_f64.sqrt();
        assert_relative_eq!(ops.sp[(0, 1)].re, r2, epsilon = 1e-15);
        assert_relative_eq!(ops.sp[(1, 2)].re, r2, epsilon = 1e-15);
        assert_relative_eq!(ops.sp[(0, 2)].re, 0.0);
    }

    #[test]
    fn test_su2_commutators() {
        let ops = SpinOperators::new(2.5).unwrap();
        let isz = ops.sz.mapv(|v| v * C_I);
        let isx = ops.sx.mapv(|v| v * C_I);
        let isy = ops.sy.mapv(|v| v * C_I);
        assert!(max_abs_diff(&commutator(&ops.sx, &ops.sy), &isz) < 1e-13);
        assert!(max_abs_diff(&commutator(&ops.sy, &ops.sz), &isx) < 1e-13);
        assert!(max_abs_diff(&commutator(&ops.sz, &ops.sx), &isy) < 1e-13);
    }

    #[test]
    fn test_casimir_is_s_s_plus_one() {
        let ops = SpinOperators::new(10.0).unwrap();
        let c = casimir(&ops);
        for i in 0..ops.dim {
            for j in 0..ops.dim {
                let expect = if i == j { 110.0 } else { 0.0 };
                assert_relative_eq!(c[(i, j)].re, expect, epsilon = 1e-11);
                assert_relative_eq!(c[(i, j)].im, 0.0, epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn test_components_hermitian_ladder_adjoint() {
        let ops = SpinOperators::new(3.5).unwrap();
        assert!(is_hermitian(&ops.sx, 1e-14));
        assert!(is_hermitian(&ops.sy, 1e-14));
        assert!(is_hermitian(&ops.sz, 1e-14));
        assert!(max_abs_diff(&dagger(&ops.sp), &ops.sm) < 1e-15);
        let h = lmg_hamiltonian(&ops, 1.3);
        assert!(is_hermitian(&h, 1e-13));
    }

    #[test]
    fn test_free_hamiltonian_spectrum_is_minus_sz() {
        let ops = SpinOperators::new(3.0).unwrap();
        let h = lmg_hamiltonian(&ops, 0.0);
        let (vals, _) = h.eigh(UPLO::Lower).unwrap();
        let expect = [-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0];
        for (v, e) in vals.iter().zip(expect.iter()) {
            assert_relative_eq!(v, e, epsilon = 1e-13);
        }
    }

    #[test]
    fn test_broken_phase_ground_energy_approaches_classical() {
        // classical ground energy per spin is -(lambda + 1/lambda)/2 = -1.25
        let ops = SpinOperators::new(20.0).unwrap();
        let h = lmg_hamiltonian(&ops, 2.0);
        let (vals, _) = h.eigh(UPLO::Lower).unwrap();
        let e0_per_spin = vals[0] / ops.s;
        assert!((e0_per_spin - (-1.25)).abs() < 0.1);
    }

    #[test]
    fn test_rejects_invalid_spin() {
        assert!(SpinOperators::new(0.0).is_err());
        assert!(SpinOperators::new(-1.0).is_err());
        assert!(SpinOperators::new(0.3).is_err());
    }
}
