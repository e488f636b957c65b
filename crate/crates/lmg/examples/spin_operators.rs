//! Collective spin operators and the LMG Hamiltonian across the
//! transition.
//!
//! Builds the (2S+1)-dimensional angular momentum matrices, checks the
//! su(2) algebra and the Casimir numerically, and prints the intensive
//! spectrum h = H/S for couplings on both sides of Lambda = 1. The
//! ground energy approaches -1 below the transition and
//! -(Lambda + 1/Lambda)/2 above it as S grows.

use lmg::matrix::{commutator, max_abs_diff, CMat, C_I};
use lmg::spin::{casimir, lmg_hamiltonian, SpinOperators};
use ndarray_linalg::Eigh;

fn main() -> Result<(), lmg::LmgError> {
    let s = 12.0;
    let ops = SpinOperators::new(s)?;
    println!("spin S = {s}, dimension {}", ops.dim);

    // [Sx, Sy] = i Sz and cyclic permutations
    let pairs = [
        ("[Sx,Sy] - i Sz", commutator(&ops.sx, &ops.sy) - ops.sz.mapv(|e| e * C_I)),
        ("[Sy,Sz] - i Sx", commutator(&ops.sy, &ops.sz) - ops.sx.mapv(|e| e * C_I)),
        ("[Sz,Sx] - i Sy", commutator(&ops.sz, &ops.sx) - ops.sy.mapv(|e| e * C_I)),
    ];
    for (label, residual) in &pairs {
        println!("  |{label}|_max = {:.3e}", max_abs_diff(residual, &CMat::zeros(residual.dim())));
    }

    // S^2 = S(S+1) I
    let c = casimir(&ops);
    let expected = s * (s + 1.0);
    println!("  Casimir diagonal = {:.12} (expected {expected})", c[(0, 0)].re);

    // intensive spectrum across the transition
    for lambda in [0.5, 1.0, 2.0] {
        let h = lmg_hamiltonian(&ops, lambda).mapv(|e| e / s);
        let (evals, _) = h.eigh(ndarray_linalg::UPLO::Lower)?;
        let eg = if lambda <= 1.0 { -1.0 } else { -0.5 * (lambda + 1.0 / lambda) };
        println!(
            "lambda = {lambda}: h spectrum in [{:+.6}, {:+.6}], large-S ground {:+.6}",
            evals[0],
            evals[evals.len() - 1],
            eg
        );
        // low-lying levels pair up in the broken phase (parity doublets)
        let gaps: Vec<f64> = evals.iter().take(4).zip(evals.iter().skip(1)).map(|(a, b)| b - a).collect();
        println!("  lowest level spacings: {:?}", gaps.iter().map(|g| format!("{g:.4}")).collect::<Vec<_>>());
    }
    Ok(())
}
