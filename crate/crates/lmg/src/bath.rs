//! Ohmic bath model and the Kossakowski coefficients it induces.
//!
//! The collective spin couples through Sx to a continuum of harmonic
//! oscillators with Drude-regularized Ohmic spectral density
//!
//! ```text
//!     J(w) = (w / pi) wc^2 / (wc^2 + w^2),
//! ```
//!
//! held in a Gibbs state at temperature T. In the Born-Markov weak-coupling
//! limit (Breuer & Petruccione, ch. 3) the bath enters the master equation
//! only through the 2x2 Kossakowski matrix
//!
//! ```text
//!     kappa = (gamma / 2S) [ 4T         2 nu1 - i ]
//!             ------------ [ 2 nu1 + i  0         ],
//! ```
//!
//! where nu1 = int_0^inf nu(tau) tau dtau is the first moment of the
//! symmetric bath correlation kernel, with closed form
//!
//! ```text
//!     nu1 = T/wc - [psi(beta wc / 2 pi + 1) - psi(1)] / pi.
//! ```
//!
//! The raw matrix has det kappa = -|kappa_xy|^2 < 0, outside the completely
//! positive cone. Positivity is restored by the minimal-norm repair
//! kappa_yy -> |kappa_xy|^2 / kappa_xx, which makes kappa singular positive
//! semidefinite (one Lindblad jump operator, Breuer & Petruccione sec. 3.6.2).
//! The repair term is O(gamma/S T), small at weak coupling.
//!
//! Temperature enters in two conventions: intensive T (fixed as S grows, the
//! dissipator is O(1/S) and the classical limit is the gamma-damped flow) and
//! extensive T = S*Ttilde with the cutoff co-scaling (wc -> S wc), which keeps
//! kappa_xx = 2 gamma Ttilde and nu1 finite as S -> infinity and makes the
//! Gibbs state of h = H/S stationary at inverse temperature 1/Ttilde.

use num_complex::Complex64;

use crate::error::{LmgError, Result};
use crate::matrix::CMat;
use crate::special::digamma;
use crate::spin::SpinOperators;

use std::f64::consts::PI;

/// Bath temperature convention.
///
/// `Intensive(t)` holds the physical temperature fixed as S grows; the
/// dissipative coefficients then scale as 1/S. `Extensive(t_tilde)` scales
/// the physical temperature as T = S * t_tilde (with the cutoff co-scaling
/// wc -> S wc), so the coefficients stay O(1) and the spin thermalizes to the
/// Gibbs state of the intensive Hamiltonian h at temperature t_tilde.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Temperature {
    Intensive(f64),
    Extensive(f64),
}

impl Temperature {
    /// The temperature parameter itself: T if intensive, Ttilde if extensive.
    pub fn value(&self) -> f64 {
        match *self {
            Temperature::Intensive(t) | Temperature::Extensive(t) => t,
        }
    }

    pub fn is_extensive(&self) -> bool {
        matches!(self, Temperature::Extensive(_))
    }
}

/// Full parameter set for the open LMG model.
#[derive(Clone, Copy, Debug)]
pub struct ModelParams {
    /// Ferromagnetic coupling Lambda of the LMG Hamiltonian.
    pub lambda: f64,
    /// System-bath coupling strength; the weak-coupling derivation assumes
    /// gamma small against the Hamiltonian scales.
    pub gamma: f64,
    /// Total spin quantum number (positive half-integer).
    pub s: f64,
    /// Bath temperature and its scaling convention.
    pub temperature: Temperature,
    /// Drude cutoff frequency of the spectral density.
    pub omega_c: f64,
    /// Optional replacement for the kernel moment nu1, bypassing the closed
    /// form. Used for sensitivity studies; the physical value is recovered
    /// with `None`.
    pub nu1_override: Option<f64>,
}

impl ModelParams {
    /// Check parameter ranges: gamma >= 0, temperature >= 0, omega_c > 0 and
    /// finite, s a positive half-integer.
    pub fn validate(&self) -> Result<()> {
        if !self.lambda.is_finite() || self.lambda <= 0.0 {
            return Err(LmgError::InvalidParameter(format!(
                "coupling lambda must be positive and finite, got {}",
                self.lambda
            )));
        }
        if !self.gamma.is_finite() || self.gamma < 0.0 {
            return Err(LmgError::InvalidParameter(format!(
                "bath coupling gamma must be nonnegative and finite, got {}",
                self.gamma
            )));
        }
        let two_s = 2.0 * self.s;
        if !(self.s > 0.0) || (two_s - two_s.round()).abs() > 1e-9 {
            return Err(LmgError::InvalidParameter(format!(
                "spin s must be a positive half-integer, got {}",
                self.s
            )));
        }
        let t = self.temperature.value();
        if !t.is_finite() || t < 0.0 {
            return Err(LmgError::InvalidParameter(format!(
                "temperature must be nonnegative and finite, got {t}"
            )));
        }
        if !self.omega_c.is_finite() || self.omega_c <= 0.0 {
            return Err(LmgError::InvalidParameter(format!(
                "cutoff omega_c must be positive and finite, got {}",
                self.omega_c
            )));
        }
        if let Some(v) = self.nu1_override {
            if !v.is_finite() {
                return Err(LmgError::InvalidParameter(format!(
                    "nu1 override must be finite, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Diffusion coefficient kappa_xx: 2 gamma T / S intensive, 2 gamma
    /// Ttilde extensive (S-independent by construction).
    pub fn kappa_xx(&self) -> f64 {
        match self.temperature {
            Temperature::Intensive(t) => 2.0 * self.gamma * t / self.s,
            Temperature::Extensive(t_tilde) => 2.0 * self.gamma * t_tilde,
        }
    }

    /// Effective temperature governing the kernel moment nu1: T intensive,
    /// Ttilde extensive. In the extensive convention beta*wc is invariant
    /// under (T, wc) -> (S T, S wc), so evaluating the closed form at Ttilde
    /// gives the S-independent limit directly.
    pub fn nu1_temperature(&self) -> f64 {
        self.temperature.value()
    }

    /// Inverse temperature of the intensive Hamiltonian h = H/S: S/T
    /// intensive, 1/Ttilde extensive. Infinite at T = 0.
    pub fn beta_tilde(&self) -> f64 {
        match self.temperature {
            Temperature::Intensive(t) => self.s / t,
            Temperature::Extensive(t_tilde) => 1.0 / t_tilde,
        }
    }
}

/// Drude-regularized Ohmic spectral density J(w) = (w/pi) wc^2/(wc^2 + w^2).
/// Linear in w below the cutoff, decaying as 1/w above it.
pub fn spectral_density(omega: f64, omega_c: f64) -> f64 {
    omega / PI * omega_c * omega_c / (omega_c * omega_c + omega * omega)
}

/// Antisymmetric bath correlation kernel eta(tau) = int_0^inf J(w) sin(w tau)
/// dw = (wc^2 / 2) e^{-wc |tau|} sgn(tau). Temperature-independent; sets the
/// bath memory time 1/wc.
pub fn noise_kernel(tau: f64, omega_c: f64) -> f64 {
    0.5 * omega_c * omega_c * (-omega_c * tau.abs()).exp() * tau.signum()
}

/// First moment nu1 = int_0^inf nu(tau) tau dtau of the symmetric bath
/// kernel, via the closed form T/wc - [psi(beta wc/2pi + 1) - psi(1)]/pi.
///
/// Positive at high temperature (beta wc small, classical diffusion),
/// negative at low temperature where the quantum part of the kernel
/// dominates; it vanishes near beta wc ~ 4.8. Errors at T = 0, where the
/// moment diverges logarithmically with the infrared scale. An explicit
/// `nu1_override` takes precedence over the closed form.
pub fn nu1(params: &ModelParams) -> Result<f64> {
    if let Some(v) = params.nu1_override {
        return Ok(v);
    }
    let t = params.nu1_temperature();
    if t <= 0.0 {
        return Err(LmgError::Domain(
            "kernel moment nu1 diverges at zero temperature".into(),
        ));
    }
    let x = params.omega_c / (2.0 * PI * t);
    Ok(t / params.omega_c - (digamma(x + 1.0)? - digamma(1.0)?) / PI)
}

/// Decay time of the bath correlation functions: max(1/wc, beta/2pi). The
/// thermal time beta/2pi governs the Matsubara tail of the symmetric kernel;
/// at T = 0 the correlation time is infinite and the Markov approximation
/// fails.
pub fn bath_correlation_time(params: &ModelParams) -> f64 {
    let t = params.nu1_temperature();
    let thermal = if t > 0.0 {
        1.0 / (2.0 * PI * t)
    } else {
        f64::INFINITY
    };
    (1.0 / params.omega_c).max(thermal)
}

/// Dimensionless Markovianity parameter gamma * tau_B. The Born-Markov
/// derivation requires it to be small; values approaching 1 signal that the
/// Lindblad description is leaving its regime of validity.
pub fn markov_parameter(params: &ModelParams) -> f64 {
    params.gamma * bath_correlation_time(params)
}

/// Threshold on gamma * tau_B above which callers should warn that the
/// Markov approximation is strained.
pub const MARKOV_WARN_THRESHOLD: f64 = 0.1;

/// Kossakowski matrix in the (Sx, Sy) coupling basis,
/// [[kxx, kxy], [conj(kxy), kyy]]. Hermitian by construction.
#[derive(Clone, Copy, Debug)]
pub struct KappaMatrix {
    pub kxx: f64,
    pub kyy: f64,
    pub kxy: Complex64,
    /// Whether kyy has been repaired to the positive-semidefinite value
    /// |kxy|^2 / kxx. The raw Born-Markov matrix has kyy = 0.
    pub repaired: bool,
}

impl KappaMatrix {
    /// Lower off-diagonal entry kappa_yx = conj(kappa_xy); its imaginary
    /// part gamma/2S drives the deterministic damping.
    pub fn kyx(&self) -> Complex64 {
        self.kxy.conj()
    }

    /// Determinant kxx kyy - |kxy|^2; negative raw, zero after repair.
    pub fn determinant(&self) -> f64 {
        self.kxx * self.kyy - self.kxy.norm_sqr()
    }

    /// Eigenvalues of the Hermitian 2x2 matrix, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let tr = self.kxx + self.kyy;
        let disc = ((self.kxx - self.kyy).powi(2) + 4.0 * self.kxy.norm_sqr()).sqrt();
        [0.5 * (tr - disc), 0.5 * (tr + disc)]
    }

    /// The matrix as a dense 2x2 array.
    pub fn as_array(&self) -> CMat {
        let mut m = CMat::zeros((2, 2));
        m[(0, 0)] = Complex64::new(self.kxx, 0.0);
        m[(0, 1)] = self.kxy;
        m[(1, 0)] = self.kxy.conj();
        m[(1, 1)] = Complex64::new(self.kyy, 0.0);
        m
    }
}

/// Kossakowski matrix for the given parameters.
///
/// With `repair` the yy entry is replaced by |kxy|^2/kxx, the smallest value
/// restoring positive semidefiniteness (the repaired matrix is singular, so
/// the dissipator has a single jump operator). gamma = 0 yields the zero
/// matrix. A zero-temperature bath with gamma > 0 has kxx = 0 and no
/// positivity repair exists; that case is rejected.
pub fn kappa_matrix(params: &ModelParams, repair: bool) -> Result<KappaMatrix> {
    params.validate()?;
    if params.gamma == 0.0 {
        return Ok(KappaMatrix {
            kxx: 0.0,
            kyy: 0.0,
            kxy: Complex64::new(0.0, 0.0),
            repaired: repair,
        });
    }
    let kxx = params.kappa_xx();
    if kxx <= 0.0 {
        return Err(LmgError::DegenerateTemperature);
    }
    let n1 = nu1(params)?;
    let kxy = params.gamma / (2.0 * params.s) * Complex64::new(2.0 * n1, -1.0);
    let kyy = if repair { kxy.norm_sqr() / kxx } else { 0.0 };
    Ok(KappaMatrix {
        kxx,
        kyy,
        kxy,
        repaired: repair,
    })
}

/// Lindblad jump operator of the repaired single-jump dissipator,
/// L = sqrt(kxx) (Sx + (kappa_yx / kxx) Sy), normalized so that the
/// double-commutator form with coefficients (kxx, kyy, kxy) is reproduced
/// exactly by L rho L^dag - {L^dag L, rho}/2.
pub fn jump_operator(ops: &SpinOperators, kappa: &KappaMatrix) -> Result<CMat> {
    if !kappa.repaired {
        return Err(LmgError::ContractViolation(
            "jump operator requires the positivity-repaired Kossakowski matrix".into(),
        ));
    }
    if kappa.kxx <= 0.0 {
        return Err(LmgError::DegenerateTemperature);
    }
    let root = Complex64::new(kappa.kxx.sqrt(), 0.0);
    let c = kappa.kyx() / kappa.kxx;
    Ok(ops.sx.mapv(|e| e * root) + ops.sy.mapv(|e| e * (c * root)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{dagger, trace};
    use crate::quad::{integrate, integrate_geometric};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn params(gamma: f64, s: f64, temperature: Temperature, omega_c: f64) -> ModelParams {
        ModelParams {
            lambda: 1.0,
            gamma,
            s,
            temperature,
            omega_c,
            nu1_override: None,
        }
    }

    /// Symmetric kernel nu(tau) from its pole + Matsubara series
    /// representation: (wc^2/2) e^{-wc tau} cot(beta wc / 2)
    /// - (wc^2/pi) sum_n n e^{-2 pi n tau / beta} / ((beta wc/2pi)^2 - n^2).
    /// Valid away from the poles beta wc = 2 pi n.
    fn symmetric_kernel_series(tau: f64, beta: f64, omega_c: f64) -> f64 {
        let x = beta * omega_c / (2.0 * PI);
        let pole = 0.5 * omega_c * omega_c * (-omega_c * tau).exp() / (0.5 * beta * omega_c).tan();
        let mut sum = 0.0;
        let mut n = 1.0_f64;
        loop {
            let term = n * (-2.0 * PI * tau * n / beta).exp() / (x * x - n * n);
            sum += term;
            if n > 8.0 && term.abs() < 1e-14 * sum.abs().max(1e-300) {
                break;
            }
            n += 1.0;
            assert!(n < 2e7, "kernel series failed to converge at tau = {tau}");
        }
        pole - omega_c * omega_c / PI * sum
    }

    #[test]
    fn nu1_closed_form_at_resonant_cutoffs() {
        // beta wc = 2 pi: psi(2) - psi(1) = 1, so nu1 = 1/2pi - 1/pi.
        let p = params(0.1, 10.0, Temperature::Intensive(1.0), 2.0 * PI);
        assert_relative_eq!(nu1(&p).unwrap(), -1.0 / (2.0 * PI), epsilon = 1e-14);
        // beta wc = pi: psi(3/2) - psi(1) = 2 - 2 ln 2.
        let p = params(0.1, 10.0, Temperature::Intensive(1.0), PI);
        assert_relative_eq!(
            nu1(&p).unwrap(),
            (2.0 * 2.0_f64.ln() - 1.0) / PI,
            epsilon = 1e-14
        );
    }

    #[test]
    fn nu1_approaches_classical_value_at_high_temperature() {
        // beta wc -> 0: the digamma term is O(beta wc), so nu1 -> T/wc.
        let p = params(0.1, 10.0, Temperature::Intensive(1000.0), 1.0);
        let v = nu1(&p).unwrap();
        assert_relative_eq!(v, 1000.0, max_relative = 1e-4);
    }

    #[test]
    fn nu1_matches_kernel_moment_quadrature() {
        // Independent check of the closed form against int_0^inf nu(tau) tau
        // dtau with nu summed from its Matsubara series. At beta wc = pi the
        // pole term carries cot(pi/2) = 0 and the series is pole-free.
        let beta = 1.0;
        let omega_c = PI;
        let oracle = integrate_geometric(
            |tau| tau * symmetric_kernel_series(tau, beta, omega_c),
            1e-5,
            40.0,
            80,
            20,
        );
        // Dropped head int_0^1e-5 tau nu dtau = O(tau^2 ln tau) ~ 1e-9.
        let p = params(0.1, 10.0, Temperature::Intensive(1.0 / beta), omega_c);
        assert_relative_eq!(nu1(&p).unwrap(), oracle, max_relative = 1e-6);
    }

    #[test]
    fn nu1_diverges_at_zero_temperature_unless_overridden() {
        let p = params(0.1, 10.0, Temperature::Intensive(0.0), 10.0);
        assert!(matches!(nu1(&p), Err(LmgError::Domain(_))));
        let p = ModelParams {
            nu1_override: Some(0.25),
            ..p
        };
        assert_eq!(nu1(&p).unwrap(), 0.25);
    }

    #[test]
    fn nu1_extensive_uses_scaled_temperature() {
        // Extensive convention: nu1 is evaluated at Ttilde and is therefore
        // independent of S.
        let p5 = params(0.1, 5.0, Temperature::Extensive(2.0), 10.0);
        let p40 = params(0.1, 40.0, Temperature::Extensive(2.0), 10.0);
        let expected = nu1(&params(0.1, 1.0, Temperature::Intensive(2.0), 10.0)).unwrap();
        assert_eq!(nu1(&p5).unwrap(), expected);
        assert_eq!(nu1(&p40).unwrap(), expected);
    }

    #[test]
    fn spectral_density_ohmic_profile() {
        assert_eq!(spectral_density(0.0, 10.0), 0.0);
        // At the cutoff J(wc) = wc / 2 pi.
        assert_relative_eq!(spectral_density(10.0, 10.0), 10.0 / (2.0 * PI), epsilon = 1e-15);
        // Linear below the cutoff ...
        assert_relative_eq!(spectral_density(1e-4, 10.0), 1e-4 / PI, max_relative = 1e-6);
        // ... and 1/w above it.
        assert_relative_eq!(
            spectral_density(1e6, 10.0),
            100.0 / (PI * 1e6),
            max_relative = 1e-6
        );
    }

    #[test]
    fn noise_kernel_matches_sine_transform_of_spectral_density() {
        // eta(tau) = int_0^inf J(w) sin(w tau) dw, evaluated by splitting off
        // the exact int_0^inf sin(w tau)/w dw = pi/2:
        //   eta = (wc^2/pi) [pi/2 - wc^2 I2],
        //   I2 = int_0^inf sin(w tau) / (w (w^2 + wc^2)) dw,
        // where I2 converges absolutely (1/w^3 tail).
        let omega_c: f64 = 10.0;
        let tau = 1.0 / omega_c;
        let i2 = integrate(
            |w| {
                if w < 1e-14 {
                    tau / (omega_c * omega_c)
                } else {
                    (w * tau).sin() / (w * (w * w + omega_c * omega_c))
                }
            },
            0.0,
            1.0e5,
            4000,
            20,
        );
        let oracle = omega_c * omega_c / PI * (0.5 * PI - omega_c * omega_c * i2);
        assert_abs_diff_eq!(noise_kernel(tau, omega_c), oracle, epsilon = 1e-8);
        // Odd in tau.
        assert_eq!(noise_kernel(-tau, omega_c), -noise_kernel(tau, omega_c));
    }

    #[test]
    fn kappa_entries_and_damping_coefficient() {
        let p = params(0.1, 10.0, Temperature::Intensive(1.0), 2.0 * PI);
        let k = kappa_matrix(&p, false).unwrap();
        // kxx = 2 gamma T / S.
        assert_relative_eq!(k.kxx, 2.0 * 0.1 * 1.0 / 10.0, epsilon = 1e-15);
        // Im(kyx) = gamma / 2S exactly; this coefficient alone sets the
        // deterministic damping in the classical limit.
        assert_eq!(k.kyx().im, 0.1 / 20.0);
        assert_eq!(k.kxy.im, -0.1 / 20.0);
        assert_relative_eq!(
            k.kxy.re,
            0.1 / 20.0 * 2.0 * (-1.0 / (2.0 * PI)),
            epsilon = 1e-14
        );
        assert!(!k.repaired);
    }

    #[test]
    fn kappa_raw_is_indefinite_and_repair_is_minimal_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let gamma = rng.gen_range(0.01..0.1);
            let t = rng.gen_range(0.1..5.0);
            let s = 0.5 * rng.gen_range(1..=80) as f64;
            let omega_c = rng.gen_range(1.0..50.0);
            let temperature = if rng.gen_bool(0.5) {
                Temperature::Intensive(t)
            } else {
                Temperature::Extensive(t)
            };
            let p = params(gamma, s, temperature, omega_c);

            let raw = kappa_matrix(&p, false).unwrap();
            assert!(raw.determinant() < 0.0);
            assert_relative_eq!(
                raw.determinant(),
                -raw.kxy.norm_sqr(),
                epsilon = 1e-15
            );

            let rep = kappa_matrix(&p, true).unwrap();
            let scale = rep.kxx * rep.kyy;
            // Singular PSD after repair: det = 0 at working precision, both
            // eigenvalues nonnegative.
            assert_abs_diff_eq!(rep.determinant(), 0.0, epsilon = 1e-14 * scale.max(1e-30));
            let [lo, hi] = rep.eigenvalues();
            assert!(lo >= -1e-14 * hi);
            assert!(hi > 0.0);
            // Only the yy entry moved.
            assert_eq!(rep.kxx, raw.kxx);
            assert_eq!(rep.kxy, raw.kxy);
        }
    }

    #[test]
    fn kappa_extensive_diffusion_is_size_independent() {
        for s in [5.0, 50.0] {
            let p = params(0.1, s, Temperature::Extensive(1.0), 10.0);
            let k = kappa_matrix(&p, true).unwrap();
            assert_eq!(k.kxx, 0.2);
        }
    }

    #[test]
    fn kappa_vanishes_without_coupling() {
        let p = params(0.0, 10.0, Temperature::Intensive(1.0), 10.0);
        let k = kappa_matrix(&p, true).unwrap();
        assert_eq!(k.kxx, 0.0);
        assert_eq!(k.kyy, 0.0);
        assert_eq!(k.kxy, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn kappa_rejects_zero_temperature_with_coupling() {
        let p = params(0.1, 10.0, Temperature::Intensive(0.0), 10.0);
        assert!(matches!(
            kappa_matrix(&p, true),
            Err(LmgError::DegenerateTemperature)
        ));
    }

    #[test]
    fn jump_operator_reproduces_kossakowski_weights() {
        // Tr[L^dag L] = kxx Tr[Sx^2] + kyy Tr[Sy^2] since Tr[Sx Sy] = 0;
        // ties the single-jump form to the two-index coefficients.
        let s = 2.0;
        let ops = SpinOperators::new(s).unwrap();
        let p = params(0.08, s, Temperature::Intensive(0.7), 15.0);
        let k = kappa_matrix(&p, true).unwrap();
        let l = jump_operator(&ops, &k).unwrap();
        let ldl = dagger(&l).dot(&l);
        let tr_sx2 = trace(&ops.sx.dot(&ops.sx)).re;
        let tr_sy2 = trace(&ops.sy.dot(&ops.sy)).re;
        assert_relative_eq!(
            trace(&ldl).re,
            k.kxx * tr_sx2 + k.kyy * tr_sy2,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(trace(&ldl).im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn jump_operator_requires_repaired_matrix() {
        let s = 2.0;
        let ops = SpinOperators::new(s).unwrap();
        let p = params(0.08, s, Temperature::Intensive(0.7), 15.0);
        let raw = kappa_matrix(&p, false).unwrap();
        assert!(matches!(
            jump_operator(&ops, &raw),
            Err(LmgError::ContractViolation(_))
        ));
    }

    #[test]
    fn correlation_time_tracks_slowest_bath_scale() {
        // Cold bath: thermal time beta/2pi dominates.
        let p = params(0.05, 10.0, Temperature::Intensive(1.0), 10.0);
        assert_relative_eq!(bath_correlation_time(&p), 1.0 / (2.0 * PI), epsilon = 1e-15);
        // Hot bath: cutoff memory 1/wc dominates.
        let p = params(0.05, 10.0, Temperature::Intensive(100.0), 10.0);
        assert_eq!(bath_correlation_time(&p), 0.1);
        assert_relative_eq!(markov_parameter(&p), 0.005, epsilon = 1e-15);
        // Zero temperature: infinite memory.
        let p = params(0.05, 10.0, Temperature::Intensive(0.0), 10.0);
        assert_eq!(bath_correlation_time(&p), f64::INFINITY);
    }

    #[test]
    fn validate_rejects_bad_parameters() {
        let good = params(0.1, 10.0, Temperature::Intensive(1.0), 10.0);
        assert!(good.validate().is_ok());
        assert!(params(-0.1, 10.0, Temperature::Intensive(1.0), 10.0)
            .validate()
            .is_err());
        assert!(params(0.1, 10.3, Temperature::Intensive(1.0), 10.0)
            .validate()
            .is_err());
        assert!(params(0.1, 10.0, Temperature::Intensive(-1.0), 10.0)
            .validate()
            .is_err());
        assert!(params(0.1, 10.0, Temperature::Intensive(1.0), 0.0)
            .validate()
            .is_err());
        let mut bad = good;
        bad.lambda = -2.0;
        assert!(bad.validate().is_err());
        let mut bad = good;
        bad.nu1_override = Some(f64::NAN);
        assert!(bad.validate().is_err());
    }

    #[test]
    fn beta_tilde_conventions() {
        let p = params(0.1, 10.0, Temperature::Intensive(2.0), 10.0);
        assert_eq!(p.beta_tilde(), 5.0);
        let p = params(0.1, 10.0, Temperature::Extensive(2.0), 10.0);
        assert_eq!(p.beta_tilde(), 0.5);
        let p = params(0.1, 10.0, Temperature::Intensive(0.0), 10.0);
        assert_eq!(p.beta_tilde(), f64::INFINITY);
    }
}
