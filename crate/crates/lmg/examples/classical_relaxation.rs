//! Damped semiclassical flow on the unit sphere: fixed points with
//! their linear stability, and a trajectory relaxing to the stable
//! equilibrium.
//!
//! The drift conserves nothing but the sphere; the gamma terms bleed
//! energy until the state reaches (x, y, z) with x^2 = max(0, 1-1/L^2)
//! and z = min(1/L, 1). Below the transition that is the north pole;
//! above it the two symmetry-broken wells.

use lmg::semiclassical::{
    equilibrium_expectations, fixed_points, ground_energy, integrate_classical, ClassicalState,
};

fn main() -> Result<(), lmg::LmgError> {
    let gamma = 0.05;
    for lambda in [0.5, 2.0] {
        println!("lambda = {lambda}, gamma = {gamma}");
        for fp in fixed_points(lambda, gamma) {
            println!(
                "  fixed point ({:+.4}, {:+.4}, {:+.4})  eigs {:+.4}{:+.4}i, {:+.4}{:+.4}i  {:?}",
                fp.state.x,
                fp.state.y,
                fp.state.z,
                fp.eigenvalues[0].re,
                fp.eigenvalues[0].im,
                fp.eigenvalues[1].re,
                fp.eigenvalues[1].im,
                fp.stability
            );
        }
    }

    // relax a tilted state under the broken-phase flow
    let lambda = 2.0;
    let theta: f64 = 2.4;
    let s0 = ClassicalState::new(theta.sin(), 0.0, theta.cos());
    let gamma_ts: Vec<f64> = (0..=8).map(|i| 5.0 * i as f64).collect();
    let ts: Vec<f64> = gamma_ts.iter().map(|gt| gt / gamma).collect();
    let states = integrate_classical(&s0, lambda, gamma, &ts)?;
    let (x2_eq, z_eq, _) = equilibrium_expectations(lambda);
    println!("trajectory, lambda = {lambda} (equilibrium x^2 = {x2_eq}, z = {z_eq}, ground h = {})", ground_energy(lambda));
    println!("  {:>7} {:>9} {:>9} {:>9} {:>10}", "gamma_t", "x^2", "y", "z", "h");
    for (gt, st) in gamma_ts.iter().zip(&states) {
        println!(
            "  {gt:>7.1} {:>9.5} {:>9.5} {:>9.5} {:>10.6}",
            st.x * st.x,
            st.y,
            st.z,
            st.energy(lambda)
        );
    }
    Ok(())
}
