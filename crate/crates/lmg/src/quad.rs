//! Gauss-Legendre quadrature on panel subdivisions.
//!
//! Nodes and weights by Newton iteration on the Legendre recurrence
//! (Numerical Recipes, gauleg). An n-point rule integrates polynomials of
//! degree 2n-1 exactly; panels handle long intervals and mild endpoint layers.

/// Nodes and weights of the n-point rule on [-1, 1].
pub fn gauss_legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Integrate f over [a, b] with `panels` uniform panels of an n-point rule.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize, n: usize) -> f64 {
    let (x, w) = gauss_legendre_nodes(n);
    let dp = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * dp;
        let half = 0.5 * dp;
        let mid = lo + half;
        let mut s = 0.0;
        for (xi, wi) in x.iter().zip(w.iter()) {
            s += wi * f(mid + half * xi);
        }
        total += s * half;
    }
    total
}

/// Integrate f over [a, b], a > 0, with geometrically spaced panels.
///
/// Panel widths grow by a constant ratio from a to b; resolves integrands
/// that vary rapidly near the lower endpoint (e.g. log singularities cut
/// off at a).
pub fn integrate_geometric<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    panels: usize,
    n: usize,
) -> f64 {
    assert!(a > 0.0 && b > a);
    let (x, w) = gauss_legendre_nodes(n);
    let ratio = (b / a).powf(1.0 / panels as f64);
    let mut total = 0.0;
    let mut lo = a;
    for _ in 0..panels {
        let hi = lo * ratio;
        let half = 0.5 * (hi - lo);
        let mid = lo + half;
        let mut s = 0.0;
        for (xi, wi) in x.iter().zip(w.iter()) {
            s += wi * f(mid + half * xi);
        }
        total += s * half;
        lo = hi;
    }
    total
}
