//! Bath diagnostics: Drude-regularized Ohmic spectral density, the
//! dissipation kernel, the thermal kernel moment nu1, and the diffusion
//! matrix kappa with its positivity repair.
//!
//! The raw second-order coefficients form an indefinite 2x2 matrix; the
//! repair adds the smallest diagonal completion that makes it positive
//! semidefinite (rank one, det = 0), which is what the completely
//! positive generator uses.

use lmg::bath::{
    bath_correlation_time, kappa_matrix, markov_parameter, noise_kernel, nu1, spectral_density,
    ModelParams, Temperature, MARKOV_WARN_THRESHOLD,
};

fn main() -> Result<(), lmg::LmgError> {
    let omega_c = 10.0;
    println!("spectral density J(w), cutoff omega_c = {omega_c}");
    for w in [0.5, 2.0, 10.0, 40.0] {
        println!("  J({w:>4}) = {:.9}   (ohmic w/pi below cutoff, decay above)", spectral_density(w, omega_c));
    }
    println!("dissipation kernel eta(tau), odd in tau");
    for tau in [0.05, 0.2, 0.5] {
        println!(
            "  eta({tau}) = {:+.6}, eta(-{tau}) = {:+.6}",
            noise_kernel(tau, omega_c),
            noise_kernel(-tau, omega_c)
        );
    }

    println!("kernel moment nu1 against temperature (omega_c = {omega_c})");
    for t in [0.25, 1.0, 4.0, 16.0] {
        let params = ModelParams {
            lambda: 0.5,
            gamma: 0.05,
            s: 20.0,
            temperature: Temperature::Extensive(t),
            omega_c,
            nu1_override: None,
        };
        // high-T asymptote nu1 -> T/wc - psi-series correction
        println!("  Ttilde = {t:>5}: nu1 = {:+.9}", nu1(&params)?);
    }

    let params = ModelParams {
        lambda: 2.0,
        gamma: 0.05,
        s: 20.0,
        temperature: Temperature::Extensive(0.5),
        omega_c: 20.0,
        nu1_override: None,
    };
    let raw = kappa_matrix(&params, false)?;
    let fixed = kappa_matrix(&params, true)?;
    println!("diffusion matrix at Ttilde = 0.5, gamma = 0.05, omega_c = 20");
    for (label, k) in [("raw", &raw), ("repaired", &fixed)] {
        let ev = k.eigenvalues();
        println!(
            "  {label:>8}: kxx = {:.6e}, kxy = {:+.6e} {:+.6e} i, kyy = {:.6e}, eigs = ({:+.3e}, {:+.3e}), det = {:+.3e}",
            k.kxx, k.kxy.re, k.kxy.im, k.kyy, ev[0], ev[1], k.determinant()
        );
    }

    let tb = bath_correlation_time(&params);
    let mk = markov_parameter(&params);
    println!(
        "bath correlation time = {tb:.4}, gamma tau_B = {mk:.4e} (Markov regime below {MARKOV_WARN_THRESHOLD})"
    );
    Ok(())
}
