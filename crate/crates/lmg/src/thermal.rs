//! Thermal and coherent states of the collective spin.
//!
//! The Gibbs state is built for the intensive Hamiltonian h = H/S at inverse
//! temperature beta_tilde,
//!
//! ```text
//!     rho = exp(-beta_tilde h) / Z,
//! ```
//!
//! which is the natural stationary candidate when the bath temperature scales
//! extensively (beta_tilde = 1/Ttilde) and, with beta_tilde = S/T, the
//! ordinary canonical state at intensive temperature T. Weights are computed
//! with the ground-state energy shifted out, so construction is stable at
//! arbitrarily large beta_tilde; beta_tilde = infinity yields the projector
//! onto the (possibly degenerate) ground space.
//!
//! Spin coherent states |theta, phi> are the SU(2) rotations of the highest
//! weight state |s, s>, with amplitudes
//!
//! ```text
//!     <s, m | theta, phi> = sqrt(C(2s, s-m)) cos(theta/2)^(s+m)
//!                           sin(theta/2)^(s-m) e^{i (s-m) phi},
//! ```
//!
//! the closest quantum analogue of the classical spin direction
//! (sin theta cos phi, sin theta sin phi, cos theta). Binomial weights are
//! accumulated in log space so large s loses no precision.

use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64;

use crate::error::{LmgError, Result};
use crate::matrix::{dagger, expectation, CMat, CVec};
use crate::spin::{lmg_hamiltonian, SpinOperators};

/// Eigenvalue splittings below this count as degenerate when forming the
/// beta_tilde = infinity ground projector.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Canonical state of an intensive Hamiltonian at inverse temperature
/// beta_tilde.
#[derive(Clone, Debug)]
pub struct GibbsState {
    pub beta_tilde: f64,
    /// Density matrix, Hermitian with unit trace.
    pub rho: CMat,
    /// Partition sum with the ground energy shifted out:
    /// z = sum_i exp(-beta_tilde (h_i - h_min)). Equals the dimension at
    /// beta_tilde = 0 and the ground degeneracy at beta_tilde = infinity.
    pub z: f64,
    /// Eigenvalues of h, ascending.
    pub h_eigenvalues: Vec<f64>,
    /// Normalized populations of the eigenstates, summing to one.
    pub weights: Vec<f64>,
}

impl GibbsState {
    /// Diagonalize the Hermitian matrix `h` and populate its eigenstates
    /// with Boltzmann weights at inverse temperature `beta_tilde` (which may
    /// be infinite).
    pub fn new(h: &CMat, beta_tilde: f64) -> Result<Self> {
        if beta_tilde.is_nan() || beta_tilde < 0.0 {
            return Err(LmgError::InvalidParameter(format!(
                "inverse temperature must be nonnegative, got {beta_tilde}"
            )));
        }
        let (evals, vecs) = h.eigh(UPLO::Lower)?;
        let h_min = evals[0];
        let weights: Vec<f64> = if beta_tilde.is_infinite() {
            evals
                .iter()
                .map(|&e| if e - h_min < DEGENERACY_TOL { 1.0 } else { 0.0 })
                .collect()
        } else {
            evals.iter().map(|&e| (-beta_tilde * (e - h_min)).exp()).collect()
        };
        let z: f64 = weights.iter().sum();
        let weights: Vec<f64> = weights.iter().map(|w| w / z).collect();
        // rho = V diag(w) V^dag, assembled column by column.
        let mut scaled = vecs.clone();
        for (j, &w) in weights.iter().enumerate() {
            let wc = Complex64::new(w, 0.0);
            scaled.column_mut(j).mapv_inplace(|e| e * wc);
        }
        let rho = scaled.dot(&dagger(&vecs));
        Ok(GibbsState {
            beta_tilde,
            rho,
            z,
            h_eigenvalues: evals.to_vec(),
            weights,
        })
    }

    /// Gibbs state of the LMG model at coupling `lambda`, built from the
    /// intensive Hamiltonian h = H/S.
    pub fn lmg(ops: &SpinOperators, lambda: f64, beta_tilde: f64) -> Result<Self> {
        let inv_s = Complex64::new(1.0 / ops.s, 0.0);
        let h = lmg_hamiltonian(ops, lambda).mapv(|e| e * inv_s);
        Self::new(&h, beta_tilde)
    }

    /// Thermal mean of h, directly from the spectral weights.
    pub fn mean_energy(&self) -> f64 {
        self.h_eigenvalues
            .iter()
            .zip(&self.weights)
            .map(|(e, w)| e * w)
            .sum()
    }

    /// Thermal mean of an arbitrary Hermitian observable.
    pub fn expectation(&self, a: &CMat) -> Result<f64> {
        real_expectation(a, &self.rho)
    }
}

/// Tr[A rho] for a Hermitian observable, with the imaginary part checked to
/// vanish at working precision (relative to the magnitude of the result).
/// A surviving imaginary part indicates a non-Hermitian input or a corrupted
/// state and is reported rather than silently discarded.
pub fn real_expectation(a: &CMat, rho: &CMat) -> Result<f64> {
    let v = expectation(a, rho);
    if v.im.abs() > 1e-12 * v.re.abs().max(1.0) {
        return Err(LmgError::ContractViolation(format!(
            "expectation of a Hermitian observable came out complex: {v}"
        )));
    }
    Ok(v.re)
}

/// Spin coherent state |theta, phi> as a normalized vector in the descending
/// m basis (index i holds m = s - i). theta = 0 gives |s, s>, theta = pi
/// gives |s, -s>.
pub fn coherent_state(s: f64, theta: f64, phi: f64) -> Result<CVec> {
    let two_s = 2.0 * s;
    if !(s > 0.0) || (two_s - two_s.round()).abs() > 1e-9 {
        return Err(LmgError::InvalidParameter(format!(
            "spin s must be a positive half-integer, got {s}"
        )));
    }
    if !(0.0..=std::f64::consts::PI).contains(&theta) || !phi.is_finite() {
        return Err(LmgError::Domain(format!(
            "coherent state angles need theta in [0, pi] and finite phi, got ({theta}, {phi})"
        )));
    }
    let n = two_s.round() as usize;
    let ln_cos = (0.5 * theta).cos().ln();
    let ln_sin = (0.5 * theta).sin().ln();
    let mut psi = CVec::zeros(n + 1);
    // ln C(n, i) accumulated incrementally: C(n, i) = C(n, i-1) (n-i+1)/i.
    let mut ln_binom = 0.0;
    for i in 0..=n {
        if i > 0 {
            ln_binom += ((n - i + 1) as f64).ln() - (i as f64).ln();
        }
        // Exponents of cos and sin halves; a zero base with zero exponent
        // contributes a factor one (theta at the poles).
        let pc = (n - i) as f64;
        let ps = i as f64;
        let ln_mag = 0.5 * ln_binom
            + if pc == 0.0 { 0.0 } else { pc * ln_cos }
            + if ps == 0.0 { 0.0 } else { ps * ln_sin };
        let mag = ln_mag.exp();
        if mag > 0.0 {
            psi[i] = Complex64::from_polar(mag, ps * phi);
        }
    }
    // Binomial identity guarantees unit norm; renormalize the roundoff.
    let norm = psi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    Ok(psi.mapv(|c| c / norm))
}

/// Rank-one density matrix |psi><psi| of a normalized pure state.
pub fn pure_density(psi: &CVec) -> CMat {
    let d = psi.len();
    CMat::from_shape_fn((d, d), |(i, j)| psi[i] * psi[j].conj())
}

/// Expectation <psi|A|psi> in a pure state.
pub fn pure_expectation(a: &CMat, psi: &CVec) -> Complex64 {
    let apsi = a.dot(psi);
    psi.iter().zip(apsi.iter()).map(|(c, v)| c.conj() * v).sum()
}

/// Coherent state in the phi = 0 meridian whose energy density <h> matches
/// `h_target`, found by a grid scan over theta followed by bisection.
/// Returns the polar angle and the state. The energy <h>(theta) runs from
/// -1 - lambda/4S at the north pole to +1 - lambda/4S at the south pole,
/// dipping to the broken-phase ground energy near cos(theta) = 1/lambda when
/// lambda > 1; targets outside the attainable range are rejected.
pub fn coherent_state_for_energy(
    ops: &SpinOperators,
    lambda: f64,
    h_target: f64,
) -> Result<(f64, CVec)> {
    let inv_s = Complex64::new(1.0 / ops.s, 0.0);
    let h = lmg_hamiltonian(ops, lambda).mapv(|e| e * inv_s);
    let energy = |theta: f64| -> Result<f64> {
        let psi = coherent_state(ops.s, theta, 0.0)?;
        let v = pure_expectation(&h, &psi);
        Ok(v.re)
    };
    let n_grid = 400;
    let thetas: Vec<f64> = (0..=n_grid)
        .map(|i| std::f64::consts::PI * i as f64 / n_grid as f64)
        .collect();
    let mut f_prev = energy(thetas[0])? - h_target;
    let mut f_min = f_prev;
    let mut f_max = f_prev;
    for w in thetas.windows(2) {
        let f_next = energy(w[1])? - h_target;
        f_min = f_min.min(f_next);
        f_max = f_max.max(f_next);
        if f_prev == 0.0 {
            return Ok((w[0], coherent_state(ops.s, w[0], 0.0)?));
        }
        if f_prev * f_next < 0.0 {
            // Bisect to machine precision on the bracketing cell.
            let (mut lo, mut hi) = (w[0], w[1]);
            let mut f_lo = f_prev;
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                let f_mid = energy(mid)? - h_target;
                if f_mid == 0.0 {
                    lo = mid;
                    break;
                }
                if f_lo * f_mid < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    f_lo = f_mid;
                }
            }
            let theta = 0.5 * (lo + hi);
            return Ok((theta, coherent_state(ops.s, theta, 0.0)?));
        }
        f_prev = f_next;
    }
    if f_prev == 0.0 {
        let theta = *thetas.last().unwrap();
        return Ok((theta, coherent_state(ops.s, theta, 0.0)?));
    }
    Err(LmgError::Domain(format!(
        "no phi = 0 coherent state reaches <h> = {h_target}; attainable range is [{:.6}, {:.6}]",
        f_min + h_target,
        f_max + h_target
    )))
}
