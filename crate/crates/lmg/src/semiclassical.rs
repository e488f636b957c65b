//! Large-S classical limit: damped spin precession on the unit sphere.
//!
//! Rescaled observables x = <Sx>/S, y = <Sy>/S, z = <Sz>/S obey
//!
//!   dx/dt = y,  dy/dt = (lambda z - 1) x - gamma z y,  dz/dt = -lambda x y + gamma y^2,
//!
//! which conserve x^2 + y^2 + z^2 and dissipate the energy per spin
//! h = -(lambda/2) x^2 - z at the rate dh/dt = -gamma (dx/dt)^2.

use crate::error::{LmgError, Result};
use crate::ode::{solve_to_grid, AdaptiveOptions, Dopri5};
use num_complex::Complex64;

/// Point on (or near) the unit sphere in rescaled spin components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassicalState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl ClassicalState {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        ClassicalState { x, y, z }
    }

    pub fn norm_squared(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    /// Energy per spin h = -(lambda/2) x^2 - z.
    pub fn energy(&self, lambda: f64) -> f64 {
        -0.5 * lambda * self.x * self.x - self.z
    }

    fn normalized(&self) -> Self {
        let r = self.norm_squared().sqrt();
        ClassicalState {
            x: self.x / r,
            y: self.y / r,
            z: self.z / r,
        }
    }
}

/// Reduced one-degree-of-freedom data (h, x, dx/dt) of the conservative
/// fast motion; on shell, (dx/dt)^2 = 1 - (lambda x^2/2 + h)^2 - x^2.
#[derive(Clone, Copy, Debug)]
pub struct EnergyState {
    pub h: f64,
    pub x: f64,
    pub xdot: f64,
}

impl EnergyState {
    /// Place x on the energy shell h with the velocity sign requested.
    pub fn on_shell(h: f64, x: f64, lambda: f64, positive_velocity: bool) -> Result<Self> {
        let v2 = 1.0 - (0.5 * lambda * x * x + h).powi(2) - x * x;
        if v2 < -1e-12 {
            return Err(LmgError::Domain(format!(
                "point x = {x} is not reachable on the shell h = {h} (velocity^2 = {v2:.3e})"
            )));
        }
        let xdot = v2.max(0.0).sqrt();
        Ok(EnergyState {
            h,
            x,
            xdot: if positive_velocity { xdot } else { -xdot },
        })
    }

    /// (dx/dt)^2 + (lambda x^2/2 + h)^2 + x^2 - 1; zero on shell.
    pub fn constraint_residual(&self, lambda: f64) -> f64 {
        self.xdot * self.xdot + (0.5 * lambda * self.x * self.x + self.h).powi(2)
            + self.x * self.x
            - 1.0
    }
}

/// Time derivative of the rescaled spin components.
pub fn eom_rhs(state: &ClassicalState, lambda: f64, gamma: f64) -> ClassicalState {
    let ClassicalState { x, y, z } = *state;
    ClassicalState {
        x: y,
        y: (lambda * z - 1.0) * x - gamma * z * y,
        z: -lambda * x * y + gamma * y * y,
    }
}

/// Classical ground energy per spin: -1 for lambda <= 1,
/// -(lambda + 1/lambda)/2 above the transition.
pub fn ground_energy(lambda: f64) -> f64 {
    if lambda <= 1.0 {
        -1.0
    } else {
        -0.5 * (lambda + 1.0 / lambda)
    }
}

/// Late-time attractor expectations (x^2, z, y).
pub fn equilibrium_expectations(lambda: f64) -> (f64, f64, f64) {
    let x2 = (1.0 - 1.0 / (lambda * lambda)).max(0.0);
    let z = (1.0 / lambda).min(1.0);
    (x2, z, 0.0)
}

const SPHERE_DRIFT_LIMIT: f64 = 1e-10;

/// Integrate the equations of motion, sampling at t_grid (starting at 0).
///
/// The sphere radius is monitored after every accepted step and the state
/// renormalized when |r^2 - 1| exceeds 1e-10, keeping the trajectory within
/// the 1e-9 constraint budget over long runs.
pub fn integrate_classical(
    state0: &ClassicalState,
    lambda: f64,
    gamma: f64,
    t_grid: &[f64],
) -> Result<Vec<ClassicalState>> {
    if gamma < 0.0 {
        return Err(LmgError::InvalidParameter(format!(
            "damping gamma must be nonnegative, got {gamma}"
        )));
    }
    if (state0.norm_squared() - 1.0).abs() > 1e-9 {
        return Err(LmgError::InvalidParameter(format!(
            "initial state must lie on the unit sphere, |r^2 - 1| = {:.3e}",
            (state0.norm_squared() - 1.0).abs()
        )));
    }
    for w in t_grid.windows(2) {
        if w[1] <= w[0] {
            return Err(LmgError::InvalidParameter(
                "time grid must be strictly increasing".into(),
            ));
        }
    }
    let rhs = move |_t: f64, y: &[f64], dy: &mut [f64]| {
        let s = ClassicalState::new(y[0], y[1], y[2]);
        let d = eom_rhs(&s, lambda, gamma);
        dy[0] = d.x;
        dy[1] = d.y;
        dy[2] = d.z;
    };
    let opts = AdaptiveOptions {
        rtol: 1e-12,
        atol: 1e-13,
        ..Default::default()
    };
    let y0 = [state0.x, state0.y, state0.z];
    let mut stepper = Dopri5::new(rhs, 0.0, &y0, opts);
    let mut out = Vec::with_capacity(t_grid.len());
    let mut buf = [0.0; 3];
    for &tq in t_grid {
        if tq == 0.0 {
            out.push(*state0);
            continue;
        }
        while stepper.t() < tq {
            stepper.step()?;
            // project between samples only, so dense output stays usable
            if stepper.t() < tq {
                let s = ClassicalState::new(stepper.y()[0], stepper.y()[1], stepper.y()[2]);
                if (s.norm_squared() - 1.0).abs() > SPHERE_DRIFT_LIMIT {
                    let p = s.normalized();
                    stepper = Dopri5::new(rhs, stepper.t(), &[p.x, p.y, p.z], opts);
                }
            }
        }
        if stepper.t() == tq {
            let y = stepper.y();
            out.push(ClassicalState::new(y[0], y[1], y[2]));
        } else {
            stepper.interpolate(tq, &mut buf);
            out.push(ClassicalState::new(buf[0], buf[1], buf[2]));
        }
    }
    Ok(out)
}

/// Stability class of a fixed point by tangent-plane linearization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Unstable,
    Saddle,
    /// Some eigenvalue has |Re| below the hyperbolicity threshold 1e-10.
    NonHyperbolic,
}

/// A stationary point of the flow with its linearization data.
#[derive(Clone, Copy, Debug)]
pub struct FixedPoint {
    pub state: ClassicalState,
    pub eigenvalues: [Complex64; 2],
    pub stability: Stability,
}

fn classify(mu: [Complex64; 2]) -> Stability {
    const THRESHOLD: f64 = 1e-10;
    if mu.iter().any(|m| m.re.abs() <= THRESHOLD) {
        Stability::NonHyperbolic
    } else if mu.iter().all(|m| m.re < 0.0) {
        Stability::Stable
    } else if mu.iter().all(|m| m.re > 0.0) {
        Stability::Unstable
    } else {
        Stability::Saddle
    }
}

/// Roots of mu^2 + b mu + c = 0.
fn quadratic_roots(b: f64, c: f64) -> [Complex64; 2] {
    let disc = b * b - 4.0 * c;
    if disc >= 0.0 {
        let r = disc.sqrt();
        [
            Complex64::new(0.5 * (-b + r), 0.0),
            Complex64::new(0.5 * (-b - r), 0.0),
        ]
    } else {
        let r = (-disc).sqrt();
        [
            Complex64::new(-0.5 * b, 0.5 * r),
            Complex64::new(-0.5 * b, -0.5 * r),
        ]
    }
}

/// All fixed points of the flow: the poles, plus the symmetry-broken pair
/// at (+-sqrt(1 - 1/lambda^2), 0, 1/lambda) once lambda > 1.
pub fn fixed_points(lambda: f64, gamma: f64) -> Vec<FixedPoint> {
    let mut pts = Vec::new();
    // north pole: tangent dynamics mu^2 + gamma mu - (lambda - 1) = 0
    let mu_n = quadratic_roots(gamma, 1.0 - lambda);
    pts.push(FixedPoint {
        state: ClassicalState::new(0.0, 0.0, 1.0),
        eigenvalues: mu_n,
        stability: classify(mu_n),
    });
    // south pole: mu^2 - gamma mu + (lambda + 1) = 0
    let mu_s = quadratic_roots(-gamma, lambda + 1.0);
    pts.push(FixedPoint {
        state: ClassicalState::new(0.0, 0.0, -1.0),
        eigenvalues: mu_s,
        stability: classify(mu_s),
    });
    if lambda > 1.0 {
        let x2 = 1.0 - 1.0 / (lambda * lambda);
        let xs = x2.sqrt();
        // broken pair: mu^2 + (gamma/lambda) mu + lambda^2 x*^2 = 0
        let mu_b = quadratic_roots(gamma / lambda, lambda * lambda * x2);
        for sign in [1.0, -1.0] {
            pts.push(FixedPoint {
                state: ClassicalState::new(sign * xs, 0.0, 1.0 / lambda),
                eigenvalues: mu_b,
                stability: classify(mu_b),
            });
        }
    }
    pts
}

/// Convenience wrapper over the shared adaptive integrator for scalar
/// second-order oscillator problems d^2x/dt^2 = f(x); used by tests and
/// period-measurement oracles.
pub fn integrate_oscillator<F: Fn(f64) -> f64>(
    f: F,
    x0: f64,
    v0: f64,
    t_grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let sol = solve_to_grid(
        |_t, y, dy| {
            dy[0] = y[1];
            dy[1] = f(y[0]);
        },
        0.0,
        &[x0, v0],
        t_grid,
        AdaptiveOptions {
            rtol: 1e-12,
            atol: 1e-13,
            ..Default::default()
        },
    )?;
    Ok(sol.into_iter().map(|y| (y[0], y[1])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_unit_state(rng: &mut ChaCha8Rng) -> ClassicalState {
        loop {
            let s = ClassicalState::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let r2 = s.norm_squared();
            if r2 > 1e-3 {
                return s.normalized();
            }
        }
    }

    #[test]
    fn test_north_pole_is_stationary() {
        let d = eom_rhs(&ClassicalState::new(0.0, 0.0, 1.0), 0.7, 0.05);
        assert_eq!((d.x, d.y, d.z), (0.0, 0.0, 0.0));
    }

    #[test]
    fn test_broken_pair_is_stationary() {
        let xs = 3.0_f64.sqrt() / 2.0;
        for sign in [1.0, -1.0] {
            let d = eom_rhs(&ClassicalState::new(sign * xs, 0.0, 0.5), 2.0, 0.03);
            assert!(d.x.abs() < 1e-15 && d.y.abs() < 1e-15 && d.z.abs() < 1e-15);
        }
    }

    #[test]
    fn test_radial_derivative_vanishes_identically() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let s = random_unit_state(&mut rng);
            let lambda = rng.gen_range(0.1..4.0);
            let gamma = rng.gen_range(0.0..0.2);
            let d = eom_rhs(&s, lambda, gamma);
            let radial = s.x * d.x + s.y * d.y + s.z * d.z;
            assert!(radial.abs() < 1e-14, "radial drift {radial}");
        }
    }

    #[test]
    fn test_closed_dynamics_conserves_energy() {
        let s0 = ClassicalState::new(0.6, 0.0, 0.8);
        let grid: Vec<f64> = (0..=100).map(|i| i as f64).collect();
        let traj = integrate_classical(&s0, 1.5, 0.0, &grid).unwrap();
        let h0 = s0.energy(1.5);
        for s in &traj {
            assert!((s.energy(1.5) - h0).abs() < 1e-9);
            assert!((s.norm_squared() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn test_symmetric_phase_relaxes_to_north_pole() {
        let s0 = ClassicalState::new(0.5, 0.3, 0.8124038404635959);
        let grid: Vec<f64> = (0..=80).map(|i| i as f64 * 10.0).collect();
        let traj = integrate_classical(&s0, 0.5, 0.05, &grid).unwrap();
        let last = traj.last().unwrap();
        assert!((last.x.abs()) < 1e-5);
        assert!((last.z - 1.0).abs() < 1e-5);
        assert!((last.energy(0.5) + 1.0).abs() < 1e-5);
    }

    #[test]
    fn test_broken_phase_relaxes_to_equilibrium_triple() {
        // start below the separatrix energy h = -1
        let s0 = ClassicalState::new(0.9, 0.0, 0.43588989435406733);
        assert!(s0.energy(2.0) < -1.0);
        let grid: Vec<f64> = (0..=80).map(|i| i as f64 * 10.0).collect();
        let traj = integrate_classical(&s0, 2.0, 0.05, &grid).unwrap();
        let last = traj.last().unwrap();
        assert!((last.energy(2.0) - ground_energy(2.0)).abs() < 1e-5);
        assert!((last.x * last.x - 0.75).abs() < 1e-5);
        assert!((last.z - 0.5).abs() < 1e-5);
        let (x2, z, y) = equilibrium_expectations(2.0);
        assert_relative_eq!(x2, 0.75);
        assert_relative_eq!(z, 0.5);
        assert_relative_eq!(y, 0.0);
    }

    #[test]
    fn test_energy_dissipation_law_pathwise() {
        // h(t2) - h(t1) = -gamma int xdot^2 dt, with xdot = y
        let s0 = ClassicalState::new(0.2, -0.4, (1.0_f64 - 0.04 - 0.16).sqrt());
        let n = 4000;
        let t_max = 20.0;
        let grid: Vec<f64> = (0..=n).map(|i| i as f64 * t_max / n as f64).collect();
        let (lambda, gamma) = (2.0, 0.08);
        let traj = integrate_classical(&s0, lambda, gamma, &grid).unwrap();
        // composite Simpson over the densely sampled trajectory
        let dt = t_max / n as f64;
        let f: Vec<f64> = traj.iter().map(|s| s.y * s.y).collect();
        let mut integral = f[0] + f[n];
        for (i, fi) in f.iter().enumerate().take(n).skip(1) {
            integral += if i % 2 == 1 { 4.0 * fi } else { 2.0 * fi };
        }
        integral *= dt / 3.0;
        let dh = traj[n].energy(lambda) - traj[0].energy(lambda);
        assert!((dh + gamma * integral).abs() < 1e-6, "mismatch {dh} vs {}", -gamma * integral);
        // h never increases
        for w in traj.windows(2) {
            assert!(w[1].energy(lambda) <= w[0].energy(lambda) + 1e-10);
        }
    }

    #[test]
    fn test_fixed_point_classification_both_phases() {
        let pts = fixed_points(0.5, 0.05);
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0].stability, Stability::Stable); // north
        assert_eq!(pts[1].stability, Stability::Unstable); // south

        let pts = fixed_points(2.0, 0.05);
        assert_eq!(pts.len(), 4);
        assert_eq!(pts[0].stability, Stability::Saddle); // north above transition
        assert_eq!(pts[1].stability, Stability::Unstable);
        assert_eq!(pts[2].stability, Stability::Stable); // broken pair
        assert_eq!(pts[3].stability, Stability::Stable);

        // gamma = 0: poles become centers in the symmetric phase
        let pts = fixed_points(0.5, 0.0);
        assert_eq!(pts[0].stability, Stability::NonHyperbolic);
        assert_eq!(pts[1].stability, Stability::NonHyperbolic);
    }

    #[test]
    fn test_ground_energy_branches() {
        assert_relative_eq!(ground_energy(0.5), -1.0);
        assert_relative_eq!(ground_energy(1.0), -1.0);
        assert_relative_eq!(ground_energy(2.0), -1.25);
        // continuity at the transition
        assert_relative_eq!(ground_energy(1.0 + 1e-12), -1.0, epsilon = 1e-11);
    }

    #[test]
    fn test_on_shell_energy_state() {
        let es = EnergyState::on_shell(-0.5, 0.3, 2.0, true).unwrap();
        assert!(es.constraint_residual(2.0).abs() < 1e-12);
        assert!(es.xdot > 0.0);
        // turning point of the h = 1 shell is x = 0 only
        assert!(EnergyState::on_shell(1.0, 0.5, 0.5, true).is_err());
    }

    #[test]
    fn test_rejects_unnormalized_start() {
        let bad = ClassicalState::new(0.5, 0.5, 0.5);
        assert!(integrate_classical(&bad, 1.0, 0.0, &[1.0]).is_err());
    }
}
