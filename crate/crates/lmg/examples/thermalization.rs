//! Extensive-temperature thermalization: relaxation of the intensive
//! energy to the Gibbs value, and the finite-size scaling of the Gibbs
//! stationarity defect.
//!
//! With kappa_xx = 2 gamma Ttilde held fixed as S grows, the generator
//! drives any initial state to a stationary state that approaches the
//! Gibbs state of h at inverse temperature 1/Ttilde; the Frobenius
//! residual |L rho_G| decays with S because the leading orders cancel.

use lmg::bath::{ModelParams, Temperature};
use lmg::lindblad::{build_lindbladian, stationarity_residual, DensityMatrix, SpectralEvolver};
use lmg::spin::{lmg_hamiltonian, SpinOperators};
use lmg::thermal::{coherent_state_for_energy, GibbsState};
use num_complex::Complex64;

fn main() -> Result<(), lmg::LmgError> {
    let (lambda, gamma, s, ttilde) = (2.0, 0.05, 12.0, 0.5);
    let ops = SpinOperators::new(s)?;
    let params = ModelParams {
        lambda,
        gamma,
        s,
        temperature: Temperature::Extensive(ttilde),
        omega_c: 20.0,
        nu1_override: None,
    };
    let sup = build_lindbladian(&ops, &params)?;
    let evolver = SpectralEvolver::new(&sup)?;
    let gibbs = GibbsState::lmg(&ops, lambda, 1.0 / ttilde)?;
    let inv_s = Complex64::new(1.0 / s, 0.0);
    let h_op = lmg_hamiltonian(&ops, lambda).mapv(|e| e * inv_s);

    println!("lambda = {lambda}, Ttilde = {ttilde}, S = {s}");
    println!("Gibbs <h> = {:+.6}", gibbs.mean_energy());
    let gamma_ts: Vec<f64> = (0..=6).map(|i| 10.0 * i as f64).collect();
    let ts: Vec<f64> = gamma_ts.iter().map(|gt| gt / gamma).collect();
    for h0 in [-1.1, -0.5, 0.4] {
        let (_, psi) = coherent_state_for_energy(&ops, lambda, h0)?;
        let rho0 = DensityMatrix::from_pure(&psi)?;
        let series = evolver.expectation_series(&rho0, &h_op, &ts)?;
        let cells: Vec<String> = series.iter().map(|h| format!("{h:+.4}")).collect();
        println!("  from h0 = {h0:+.2}: {}", cells.join("  "));
    }
    let stat = evolver.stationary_state()?;
    println!(
        "stationary <h> = {:+.6} (finite-size offset from Gibbs: {:+.2e})",
        stat.expectation(&h_op)?,
        stat.expectation(&h_op)? - gibbs.mean_energy()
    );

    println!("Gibbs stationarity residual vs size (beta_tilde = {}):", 1.0 / ttilde);
    for s_i in [8.0, 16.0, 32.0] {
        let ops_i = SpinOperators::new(s_i)?;
        let params_i = ModelParams { s: s_i, ..params };
        let sup_i = build_lindbladian(&ops_i, &params_i)?;
        let g = GibbsState::lmg(&ops_i, lambda, 1.0 / ttilde)?;
        println!("  S = {s_i:>4}: |L rho_G|/|rho_G| = {:.6e}", stationarity_residual(&sup_i, &g.rho));
    }
    Ok(())
}
