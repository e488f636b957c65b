//! Two-timing reduction of the damped spin dynamics.
//!
//! On the fast scale the motion is conservative anharmonic oscillation
//! x0(tau) = a cn(Omega tau + u, k^2); damping acts on the slow scale
//! s = gamma t through the period-averaged law dh0/ds = -A(h0). The
//! elliptic parameters follow from the energy h0:
//!
//!   a^2 = 2(-1 - h0 L + sqrt(L^2 + 2 h0 L + 1))/L^2,
//!   Omega^2 = a^2 L^2/2 + h0 L + 1 = sqrt(L^2 + 2 h0 L + 1),
//!   k^2 = a^2 L^2 / (4 Omega^2),      (L = lambda)
//!
//! with k^2 < 1 above the separatrix energy h0 = -1, k^2 > 1 below it
//! (broken phase only), and k^2 = 1 on it, where the period diverges.
//! Near-equilibrium, A(eps) vanishes linearly with slope 1 (lambda < 1),
//! 4/3 (lambda = 1) or 1/lambda (lambda > 1), the per-gamma decay rate of
//! the energy.

use crate::error::{LmgError, Result};
use crate::ode::{solve_to_grid, AdaptiveOptions};
use crate::semiclassical::ground_energy;
use crate::special::{complete_elliptic_ke, jacobi_cn};

/// Elliptic data of the fast orbit at slow energy h0.
#[derive(Clone, Copy, Debug)]
pub struct SlowFlowState {
    pub h0: f64,
    pub lambda: f64,
    /// Squared oscillation amplitude a^2.
    pub a2: f64,
    /// Fast frequency scale Omega.
    pub omega: f64,
    /// Elliptic parameter k^2 = a^2 lambda^2/(4 Omega^2); infinite when
    /// Omega = 0 (the broken-phase ground energy).
    pub k2: f64,
    /// Phase constant of the fast solution; set to 0 and never evolved
    /// (period averaging removes any dependence on it).
    pub u: f64,
}

impl SlowFlowState {
    /// The fast orbit x0(tau) = a cn(Omega tau + u, k^2).
    pub fn fast_solution(&self, tau: f64) -> Result<f64> {
        if self.a2 == 0.0 {
            return Ok(0.0);
        }
        if !self.k2.is_finite() {
            // Omega = 0: frozen at the broken-phase equilibrium amplitude
            return Ok(self.a2.sqrt());
        }
        Ok(self.a2.sqrt() * jacobi_cn(self.omega * tau + self.u, self.k2)?)
    }
}

/// Width of the band around k^2 = 1 treated as exactly the separatrix.
const SEPARATRIX_EXACT: f64 = 1e-12;
/// Band around k^2 = 1 where K and E switch to their logarithmic
/// asymptotics to avoid loss of precision.
const SEPARATRIX_ASYMPTOTIC: f64 = 1e-6;

/// Map a slow energy to the fast-orbit elliptic parameters.
///
/// h0 must lie in the spectral range [ground_energy(lambda), 1].
pub fn elliptic_parameters(h0: f64, lambda: f64) -> Result<SlowFlowState> {
    if !(lambda > 0.0) {
        return Err(LmgError::InvalidParameter(format!(
            "coupling lambda must be positive, got {lambda}"
        )));
    }
    let eps_g = ground_energy(lambda);
    if h0 < eps_g - 1e-12 || h0 > 1.0 + 1e-12 {
        return Err(LmgError::Domain(format!(
            "h0 = {h0} outside the spectral range [{eps_g}, 1] for lambda = {lambda}"
        )));
    }
    let h0c = h0.clamp(eps_g, 1.0);
    let disc = (lambda * lambda + 2.0 * h0c * lambda + 1.0).max(0.0);
    let sqrt_disc = disc.sqrt();
    let one_plus = 1.0 + h0c * lambda;
    // two algebraically equal forms; pick the one free of cancellation
    let a2 = if one_plus <= 0.0 {
        2.0 * (sqrt_disc - one_plus) / (lambda * lambda)
    } else {
        2.0 * (1.0 - h0c * h0c) / (sqrt_disc + one_plus)
    }
    .max(0.0);
    let k2 = if sqrt_disc == 0.0 {
        f64::INFINITY
    } else {
        a2 * lambda * lambda / (4.0 * sqrt_disc)
    };
    Ok(SlowFlowState {
        h0: h0c,
        lambda,
        a2,
        omega: sqrt_disc.sqrt(),
        k2,
        u: 0.0,
    })
}

/// Period of the fast orbit; infinite on the separatrix.
pub fn oscillation_period(state: &SlowFlowState) -> f64 {
    if state.a2 == 0.0 {
        // harmonic limit, T = 4 K(0)/Omega
        return 2.0 * std::f64::consts::PI / state.omega;
    }
    if (state.k2 - 1.0).abs() < SEPARATRIX_EXACT {
        return f64::INFINITY;
    }
    if state.k2 < 1.0 {
        let k = complete_elliptic_ke(state.k2).expect("k^2 < 1 on the range").0;
        4.0 * k / state.omega
    } else {
        // 2 K(1/k^2)/(Omega k) with Omega k = a lambda / 2 exactly
        let om2 = state.omega * state.omega;
        let m = 4.0 * om2 / (state.a2 * state.lambda * state.lambda);
        let k = complete_elliptic_ke(m).expect("1/k^2 < 1 below the separatrix").0;
        4.0 * k / (state.a2.sqrt() * state.lambda)
    }
}

/// K(m) and E(m) from the m -> 1 logarithmic asymptotics, m1 = 1 - m.
fn elliptic_ke_near_one(m1: f64) -> (f64, f64) {
    let lam = (4.0 / m1.sqrt()).ln();
    (
        lam + 0.25 * m1 * (lam - 1.0),
        1.0 + 0.5 * m1 * (lam - 0.5),
    )
}

/// Period-averaged squared velocity A(h0) = <(dx0/dtau)^2>; the slow-flow
/// dissipation coefficient. Zero exactly at a^2 = 0 and on the separatrix.
pub fn dissipation_a(h0: f64, lambda: f64) -> Result<f64> {
    let st = elliptic_parameters(h0, lambda)?;
    Ok(dissipation_a_of(&st))
}

/// A evaluated from precomputed elliptic parameters.
pub fn dissipation_a_of(state: &SlowFlowState) -> f64 {
    let a2 = state.a2;
    let lambda = state.lambda;
    let om2 = state.omega * state.omega;
    if a2 == 0.0 {
        return 0.0;
    }
    let k2 = state.k2;
    if k2.is_finite() && (k2 - 1.0).abs() < SEPARATRIX_EXACT {
        return 0.0;
    }
    let a = if k2 < 1.0 {
        // A = (a^2 Omega^2 / 3k^2) [(1-k^2) + (2k^2-1) E/K]
        if k2 < 1e-8 {
            // series of the bracket over k^2: 3/2 - (15/16) k^2 + O(k^4)
            a2 * om2 / 3.0 * (1.5 - 0.9375 * k2)
        } else {
            let (k, e) = if 1.0 - k2 < SEPARATRIX_ASYMPTOTIC {
                elliptic_ke_near_one(1.0 - k2)
            } else {
                complete_elliptic_ke(k2).expect("parameter below 1")
            };
            a2 * om2 / (3.0 * k2) * ((1.0 - k2) + (2.0 * k2 - 1.0) * e / k)
        }
    } else {
        // m = 1/k^2 computed directly from a and Omega, finite at Omega = 0
        let m = 4.0 * om2 / (a2 * lambda * lambda);
        if m < 1e-5 {
            // deep below the separatrix the bracket is 3m/8 + O(m^3):
            // A -> Omega^4/(2 lambda^2), exact in the Omega -> 0 limit
            om2 * om2 / (2.0 * lambda * lambda)
        } else {
            // A = (a^2 Omega^2 / 3) [2(m-1) + (2-m) E/K] / m
            let (k, e) = if 1.0 - m < SEPARATRIX_ASYMPTOTIC {
                elliptic_ke_near_one(1.0 - m)
            } else {
                complete_elliptic_ke(m).expect("reciprocal parameter below 1")
            };
            a2 * om2 / 3.0 * (2.0 * (m - 1.0) + (2.0 - m) * e / k) / m
        }
    };
    a.max(0.0)
}

/// Near-equilibrium energy decay rate in units of gamma: the slope of A
/// at the ground energy.
pub fn dissipation_rate(lambda: f64) -> f64 {
    if lambda < 1.0 {
        1.0
    } else if lambda == 1.0 {
        4.0 / 3.0
    } else {
        1.0 / lambda
    }
}

/// Integrate the slow eigenvalue flow d(eps)/ds = -A(eps) from eps0,
/// sampling at the given slow times (s = gamma t, grid from 0).
///
/// Trajectories starting above the separatrix stall at eps = -1 (the
/// averaged equations treat it as a fixed point); trajectories below it
/// relax to the ground energy.
pub fn eigenvalue_flow(eps0: f64, lambda: f64, s_grid: &[f64]) -> Result<Vec<f64>> {
    let eps_g = ground_energy(lambda);
    if eps0 < eps_g - 1e-12 || eps0 > 1.0 + 1e-12 {
        return Err(LmgError::Domain(format!(
            "eps0 = {eps0} outside the spectral range [{eps_g}, 1]"
        )));
    }
    let eps0 = eps0.clamp(eps_g, 1.0);
    // basin floor: the separatrix for starts above it, else the ground energy
    let floor = if eps0 >= -1.0 { (-1.0_f64).max(eps_g) } else { eps_g };
    let rhs = move |_s: f64, y: &[f64], dy: &mut [f64]| {
        let eps = y[0].clamp(floor, 1.0);
        dy[0] = -dissipation_a(eps, lambda).expect("clamped into range");
    };
    let sol = solve_to_grid(
        rhs,
        0.0,
        &[eps0],
        s_grid,
        AdaptiveOptions {
            rtol: 1e-10,
            atol: 1e-12,
            ..Default::default()
        },
    )?;
    Ok(sol.into_iter().map(|y| y[0].clamp(floor, 1.0)).collect())
}

/// Result of fitting a decaying-exponential tail h(t) = eps_g + C e^{-rate t}.
#[derive(Clone, Copy, Debug)]
pub struct TailFit {
    /// Fitted decay rate (physical time units).
    pub rate: f64,
    /// rate / gamma, comparable to [`dissipation_rate`].
    pub rate_per_gamma: f64,
    /// Fitted |C|.
    pub amplitude: f64,
    /// Root-mean-square residual of the log-linear fit; 0 for an exact
    /// exponential approach to the ground energy.
    pub offset: f64,
    pub r_squared: f64,
}

const TAIL_FIT_MIN_R2: f64 = 0.98;

/// Least-squares fit of log|h - eps_g| against t over the near-equilibrium
/// window |h - eps_g| <= 0.1. Rejects series that are not yet in the
/// log-linear regime (R^2 below 0.98).
pub fn exponential_tail(t: &[f64], h: &[f64], lambda: f64, gamma: f64) -> Result<TailFit> {
    if t.len() != h.len() {
        return Err(LmgError::InvalidParameter(format!(
            "time and energy series lengths differ: {} vs {}",
            t.len(),
            h.len()
        )));
    }
    if !(gamma > 0.0) {
        return Err(LmgError::InvalidParameter(format!(
            "tail fit needs gamma > 0, got {gamma}"
        )));
    }
    let eps_g = ground_energy(lambda);
    let pts: Vec<(f64, f64)> = t
        .iter()
        .zip(h.iter())
        .filter_map(|(&ti, &hi)| {
            let d = (hi - eps_g).abs();
            if d > 1e-13 && d <= 0.1 {
                Some((ti, d.ln()))
            } else {
                None
            }
        })
        .collect();
    if pts.len() < 4 {
        return Err(LmgError::FitQuality {
            r_squared: 0.0,
            required: TAIL_FIT_MIN_R2,
        });
    }
    let n = pts.len() as f64;
    let (st, sy): (f64, f64) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (tm, ym) = (st / n, sy / n);
    let (mut stt, mut sty, mut syy) = (0.0, 0.0, 0.0);
    for (ti, yi) in &pts {
        stt += (ti - tm) * (ti - tm);
        sty += (ti - tm) * (yi - ym);
        syy += (yi - ym) * (yi - ym);
    }
    if stt == 0.0 {
        return Err(LmgError::InvalidParameter(
            "tail fit needs at least two distinct times in the window".into(),
        ));
    }
    let slope = sty / stt;
    let intercept = ym - slope * tm;
    // residuals summed directly; the covariance shortcut loses all digits
    // when the fit is nearly exact
    let ss_res: f64 = pts
        .iter()
        .map(|(ti, yi)| (yi - intercept - slope * ti).powi(2))
        .sum();
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    if r_squared < TAIL_FIT_MIN_R2 {
        return Err(LmgError::FitQuality {
            r_squared,
            required: TAIL_FIT_MIN_R2,
        });
    }
    Ok(TailFit {
        rate: -slope,
        rate_per_gamma: -slope / gamma,
        amplitude: intercept.exp(),
        offset: (ss_res / n as f64).sqrt(),
        r_squared,
    })
}
