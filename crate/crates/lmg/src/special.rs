//! Complete elliptic integrals, Jacobi elliptic functions, and the digamma
//! function.
//!
//! K and E use the arithmetic-geometric mean, sn/cn/dn the descending Landen
//! transformation (Numerical Recipes, sncndn) tightened to double precision,
//! and digamma the asymptotic Bernoulli series after upward recurrence.
//! Parameter convention throughout: m = k^2 (the parameter, not the modulus).

use crate::error::{LmgError, Result};

/// K(m) = int_0^{pi/2} (1 - m sin^2 t)^{-1/2} dt for m < 1.
pub fn complete_elliptic_k(m: f64) -> Result<f64> {
    Ok(complete_elliptic_ke(m)?.0)
}

/// E(m) = int_0^{pi/2} (1 - m sin^2 t)^{1/2} dt for m <= 1; E(1) = 1.
pub fn complete_elliptic_e(m: f64) -> Result<f64> {
    if m == 1.0 {
        return Ok(1.0);
    }
    Ok(complete_elliptic_ke(m)?.1)
}

/// Both integrals from one AGM sweep: K = pi/(2 a_N),
/// E = K (1 - sum 2^{n-1} c_n^2) with c_0 = sqrt(m).
pub fn complete_elliptic_ke(m: f64) -> Result<(f64, f64)> {
    if !m.is_finite() || m >= 1.0 {
        return Err(LmgError::Domain(format!(
            "complete elliptic integral K diverges for parameter m = {m} (need m < 1)"
        )));
    }
    let mut a = 1.0_f64;
    let mut b = (1.0 - m).sqrt();
    // c_0^2 = m enters the E sum with weight 1/2
    let mut csum = 0.5 * m;
    let mut pow2 = 0.5;
    for _ in 0..60 {
        let c = 0.5 * (a - b);
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        pow2 *= 2.0;
        csum += pow2 * c * c;
        if c.abs() < 1e-17 * a {
            break;
        }
    }
    let k = std::f64::consts::FRAC_PI_2 / a;
    Ok((k, k * (1.0 - csum)))
}

/// Jacobi sn, cn, dn at argument u and parameter m >= 0.
///
/// m in [0,1) by descending Landen; m = 1 is the hyperbolic limit; m > 1 via
/// the reciprocal-modulus map sn(u,m) = sn(u sqrt m, 1/m)/sqrt m,
/// cn(u,m) = dn(u sqrt m, 1/m), dn(u,m) = cn(u sqrt m, 1/m).
pub fn jacobi_sncndn(u: f64, m: f64) -> Result<(f64, f64, f64)> {
    if !m.is_finite() || m < 0.0 {
        return Err(LmgError::Domain(format!(
            "Jacobi elliptic functions need parameter m >= 0, got {m}"
        )));
    }
    if (1.0 - m).abs() < 1e-12 {
        // sn -> tanh, cn = dn -> sech
        let sech = 1.0 / u.cosh();
        return Ok((u.tanh(), sech, sech));
    }
    if m > 1.0 {
        let rm = m.sqrt();
        let (sn1, cn1, dn1) = sncndn_core(u * rm, 1.0 / m);
        return Ok((sn1 / rm, dn1, cn1));
    }
    Ok(sncndn_core(u, m))
}

/// cn(u, m); see [`jacobi_sncndn`].
pub fn jacobi_cn(u: f64, m: f64) -> Result<f64> {
    Ok(jacobi_sncndn(u, m)?.1)
}

/// Descending Landen for 0 <= m < 1. Stops when the AGM legs agree to CA;
/// the backward pass then reconstructs dn through the ladder.
fn sncndn_core(u: f64, m: f64) -> (f64, f64, f64) {
    const CA: f64 = 1e-9;
    if m == 0.0 {
        return (u.sin(), u.cos(), 1.0);
    }
    let mut emc = 1.0 - m;
    let mut a = 1.0_f64;
    let mut dn = 1.0_f64;
    let mut em = [0.0_f64; 16];
    let mut en = [0.0_f64; 16];
    let mut l = 0;
    let mut c = 0.0;
    for i in 0..16 {
        l = i;
        em[i] = a;
        emc = emc.sqrt();
        en[i] = emc;
        c = 0.5 * (a + emc);
        if (a - emc).abs() <= CA * a {
            break;
        }
        emc *= a;
        a = c;
    }
    let uu = u * c;
    let mut sn = uu.sin();
    let mut cn = uu.cos();
    if sn != 0.0 {
        a = cn / sn;
        c *= a;
        for i in (0..=l).rev() {
            let b = em[i];
            a *= c;
            c *= dn;
            dn = (en[i] + a) / (b + a);
            a = c / b;
        }
        a = 1.0 / (c * c + 1.0).sqrt();
        sn = if sn >= 0.0 { a } else { -a };
        cn = c * sn;
    }
    (sn, cn, dn)
}

// Bernoulli-series coefficients of psi(x) ~ ln x - 1/(2x) - sum_k C[k] x^{-2k}
const DIGAMMA_TAIL: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
];

/// psi(x) = d/dx ln Gamma(x) for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(LmgError::Domain(format!(
            "digamma requires x > 0, got {x}"
        )));
    }
    // recur upward until the asymptotic series converges fast
    let mut shift = 0.0;
    let mut z = x;
    while z < 8.0 {
        shift -= 1.0 / z;
        z += 1.0;
    }
    let inv2 = 1.0 / (z * z);
    let mut tail = 0.0;
    for &c in DIGAMMA_TAIL.iter().rev() {
        tail = (tail + c) * inv2;
    }
    Ok(shift + z.ln() - 0.5 / z - tail)
}
