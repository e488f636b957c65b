//! Liouvillian spectrum and the dissipative gap.
//!
//! In the extensive-temperature regime the gap (the slowest nonzero
//! relaxation rate) stays essentially flat as S grows, so
//! thermalization times do not scale with system size. Without
//! dissipation the whole spectrum collapses onto the imaginary axis and
//! the gap closes.

use lmg::bath::{ModelParams, Temperature};
use lmg::lindblad::{build_lindbladian, liouvillian_spectrum, spectral_gap};
use lmg::spin::SpinOperators;

fn main() -> Result<(), lmg::LmgError> {
    let (lambda, ttilde) = (0.5, 1.0);
    let base = ModelParams {
        lambda,
        gamma: 0.05,
        s: 6.0,
        temperature: Temperature::Extensive(ttilde),
        omega_c: 10.0,
        nu1_override: None,
    };

    // leading spectrum at a small size
    let ops = SpinOperators::new(base.s)?;
    let sup = build_lindbladian(&ops, &base)?;
    let top = liouvillian_spectrum(&sup, 6)?;
    println!("leading Liouvillian eigenvalues at S = {} (Re, Im):", base.s);
    for l in top.iter() {
        println!("  {:+.6e} {:+.6e} i", l.re, l.im);
    }

    println!("gap vs size, lambda = {lambda}, Ttilde = {ttilde}:");
    let mut gaps = Vec::new();
    for s in [3.0, 6.0, 9.0, 12.0] {
        let ops = SpinOperators::new(s)?;
        let params = ModelParams { s, ..base };
        let sup = build_lindbladian(&ops, &params)?;
        let g = spectral_gap(&sup)?;
        gaps.push(g.gap);
        println!(
            "  S = {s:>4}: gap = {:.6e}, lambda_1 = {:+.4e} {:+.4e} i",
            g.gap, g.lambda1.re, g.lambda1.im
        );
    }
    let (min, max) = gaps.iter().fold((f64::INFINITY, 0.0_f64), |(lo, hi), &g| (lo.min(g), hi.max(g)));
    println!("  flatness max/min = {:.4}", max / min);

    // control: no dissipation, no gap
    let ops = SpinOperators::new(6.0)?;
    let unitary = ModelParams { gamma: 0.0, ..base };
    let sup0 = build_lindbladian(&ops, &unitary)?;
    let g0 = spectral_gap(&sup0)?;
    println!("gamma = 0 control: gap = {:.3e}", g0.gap);
    Ok(())
}
