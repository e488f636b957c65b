//! The special-function kit behind the slow-flow formulas: complete
//! elliptic integrals by the arithmetic-geometric mean, Jacobi elliptic
//! functions by descending Landen transformation, and the digamma
//! function by recurrence plus asymptotic series.
//!
//! Prints each against a classical identity: Legendre's relation for
//! K and E, the sn^2 + cn^2 = 1 constraint on the Jacobi pair, and the
//! digamma reflection formula.

use lmg::special::{complete_elliptic_e, complete_elliptic_k, digamma, jacobi_sncndn};
use std::f64::consts::PI;

fn main() -> Result<(), lmg::LmgError> {
    println!("complete elliptic integrals");
    println!(
        "  m = 0: K = {:.12}, E = {:.12} (both pi/2 = {:.12})",
        complete_elliptic_k(0.0)?,
        complete_elliptic_e(0.0)?,
        PI / 2.0
    );
    for m in [0.25, 0.5, 0.75] {
        let k = complete_elliptic_k(m)?;
        let e = complete_elliptic_e(m)?;
        let k1 = complete_elliptic_k(1.0 - m)?;
        let e1 = complete_elliptic_e(1.0 - m)?;
        // Legendre: E K' + E' K - K K' = pi/2
        let legendre = e * k1 + e1 * k - k * k1;
        println!(
            "  m = {m:<5}: K = {k:.12}, E = {e:.12}, Legendre residual = {:+.3e}",
            legendre - PI / 2.0
        );
    }
    println!(
        "  m = 0.9999: K = {:.9} (logarithmic growth), E = {:.9} (-> 1)",
        complete_elliptic_k(0.9999)?,
        complete_elliptic_e(0.9999)?
    );

    println!("jacobi elliptic functions at m = 0.7");
    let m = 0.7;
    let quarter = complete_elliptic_k(m)?;
    for u in [0.0, 0.5, 1.0, quarter] {
        let (sn, cn, dn) = jacobi_sncndn(u, m)?;
        println!(
            "  u = {u:.6}: sn = {sn:+.9}, cn = {cn:+.9}, dn = {dn:+.9}, sn^2+cn^2-1 = {:+.2e}",
            sn * sn + cn * cn - 1.0
        );
    }
    println!("  cn(K(m)) = 0 at the quarter period");

    println!("digamma");
    for x in [0.3, 1.0, 4.7] {
        println!("  psi({x}) = {:+.12}", digamma(x)?);
    }
    // Euler's constant: psi(1) = -gamma
    println!("  psi(1) + 0.5772156649015329 = {:+.3e}", digamma(1.0)? + 0.577_215_664_901_532_9);
    // reflection at x = 0.3: psi(0.7) - psi(0.3) = pi cot(0.3 pi)
    let lhs = digamma(0.7)? - digamma(0.3)?;
    let rhs = PI / (0.3 * PI).tan();
    println!("  reflection residual at x = 0.3: {:+.3e}", lhs - rhs);
    Ok(())
}
