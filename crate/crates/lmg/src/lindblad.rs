//! Lindblad dynamics of the dissipatively coupled collective spin.
//!
//! The Born-Markov reduction of the Sx bath coupling leaves the master
//! equation d rho/dt = L rho with the generator
//!
//! ```text
//!     L rho = i[rho, H] - i Im(k_yx) [Sx, {Sy, rho}]
//!             - (k_xx / 2) [Sx, [Sx, rho]] - k_yy [Sy, [Sy, rho]]
//!             + 2 Re(k_xy) [Sy, [Sx, rho]],
//! ```
//!
//! where k is the positivity-repaired Kossakowski matrix (k_yy =
//! |k_xy|^2 / k_xx) and Im(k_yx) = gamma/2S drives the deterministic
//! damping. Observables evolve in the Heisenberg picture under the exact
//! trace dual,
//!
//! ```text
//!     L' A  = i[H, A] + i Im(k_yx) {Sy, [Sx, A]}
//!             - (k_xx / 2) [Sx, [Sx, A]] - k_yy [Sy, [Sy, A]]
//!             + 2 Re(k_xy) [Sx, [Sy, A]],
//! ```
//!
//! with Tr[A (L rho)] = Tr[(L' A) rho]. Both generators preserve trace and
//! Hermiticity, and L' annihilates the identity exactly.
//!
//! Superoperators are stored as sums of sandwich terms c * A . B. One
//! representation serves three uses: matrix-free application (a handful of
//! d x d multiplies), dense assembly through vec(A X B) = (B^T kron A) with
//! column stacking, and assembly restricted to a parity block. The LMG
//! Hamiltonian couples only states two m-quanta apart and every dissipative
//! term carries an even number of single-flip operators, so the product
//! parity (-1)^{i+j} of a matrix element rho_ij is conserved; the vectorized
//! generator splits into two invariant blocks of about half the dimension
//! each, which quarters the cost of dense eigendecompositions (Lapack zgeev
//! via ndarray-linalg).

use ndarray_linalg::{Eig, EigVals, Inverse, UPLO};
use num_complex::Complex64;

use crate::bath::{kappa_matrix, KappaMatrix, ModelParams};
use crate::error::{LmgError, Result};
use crate::matrix::{frobenius_norm, hermitian_part, is_hermitian, trace, CMat, CVec};
use crate::ode::{solve_to_grid, AdaptiveOptions};
use crate::spin::{lmg_hamiltonian, SpinOperators};

/// Largest Hilbert-space dimension for which a superoperator may be built
/// (S = 100); beyond this even matrix-free application is out of desk scale.
pub const MAX_SUPEROP_DIM: usize = 201;

/// Largest Hilbert-space dimension for the full dense Liouvillian (S = 25,
/// a 2601 x 2601 complex matrix). Larger problems must go through the
/// parity blocks.
pub const MAX_DENSE_DIM: usize = 51;

/// Largest parity-block size for eigendecomposition (reached at S = 40,
/// where the even block is 3281 x 3281 and zgeev takes minutes).
pub const MAX_SPECTRAL_BLOCK: usize = 3281;

const C_I: Complex64 = Complex64::new(0.0, 1.0);

struct Sandwich {
    coeff: Complex64,
    /// None stands for the identity and skips the multiply.
    left: Option<CMat>,
    right: Option<CMat>,
}

/// A superoperator on d x d matrices, stored as a sum of sandwich terms
/// c * A X B.
pub struct Superoperator {
    dim: usize,
    terms: Vec<Sandwich>,
}

impl Superoperator {
    fn new(dim: usize) -> Self {
        Superoperator {
            dim,
            terms: Vec::new(),
        }
    }

    fn push(&mut self, coeff: Complex64, left: Option<&CMat>, right: Option<&CMat>) {
        if coeff == Complex64::new(0.0, 0.0) {
            return;
        }
        self.terms.push(Sandwich {
            coeff,
            left: left.cloned(),
            right: right.cloned(),
        });
    }

    /// Hilbert-space dimension d the superoperator acts on.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Apply to a matrix: sum of c * A X B evaluated with dense multiplies.
    pub fn apply(&self, x: &CMat) -> CMat {
        let mut out = CMat::zeros((self.dim, self.dim));
        for t in &self.terms {
            let prod = match (&t.left, &t.right) {
                (Some(a), Some(b)) => a.dot(x).dot(b),
                (Some(a), None) => a.dot(x),
                (None, Some(b)) => x.dot(b),
                (None, None) => x.clone(),
            };
            let c = t.coeff;
            out.zip_mut_with(&prod, |o, v| *o += c * v);
        }
        out
    }

    /// Entries of the vectorized generator restricted to a subset of vec
    /// indices (column stacking: entry (i, j) sits at index i + d*j). With
    /// all indices this is the dense matrix; with one parity class it is an
    /// invariant block. Spin operators are band matrices, so the assembly
    /// walks only nonzero entries.
    fn assemble(&self, idx: &[usize]) -> CMat {
        let d = self.dim;
        let mut pos = vec![usize::MAX; d * d];
        for (b, &v) in idx.iter().enumerate() {
            pos[v] = b;
        }
        let nb = idx.len();
        let zero = Complex64::new(0.0, 0.0);
        let mut m = CMat::zeros((nb, nb));
        for t in &self.terms {
            match (&t.left, &t.right) {
                (Some(a), Some(b)) => {
                    for (bi, &vi) in idx.iter().enumerate() {
                        let (i, j) = (vi % d, vi / d);
                        for k in 0..d {
                            let av = a[(i, k)];
                            if av == zero {
                                continue;
                            }
                            for l in 0..d {
                                let bv = b[(l, j)];
                                if bv == zero {
                                    continue;
                                }
                                let bj = pos[k + d * l];
                                if bj != usize::MAX {
                                    m[(bi, bj)] += t.coeff * av * bv;
                                }
                            }
                        }
                    }
                }
                (Some(a), None) => {
                    for (bi, &vi) in idx.iter().enumerate() {
                        let (i, j) = (vi % d, vi / d);
                        for k in 0..d {
                            let av = a[(i, k)];
                            if av == zero {
                                continue;
                            }
                            let bj = pos[k + d * j];
                            if bj != usize::MAX {
                                m[(bi, bj)] += t.coeff * av;
                            }
                        }
                    }
                }
                (None, Some(b)) => {
                    for (bi, &vi) in idx.iter().enumerate() {
                        let (i, j) = (vi % d, vi / d);
                        for l in 0..d {
                            let bv = b[(l, j)];
                            if bv == zero {
                                continue;
                            }
                            let bj = pos[i + d * l];
                            if bj != usize::MAX {
                                m[(bi, bj)] += t.coeff * bv;
                            }
                        }
                    }
                }
                (None, None) => {
                    for bi in 0..nb {
                        m[(bi, bi)] += t.coeff;
                    }
                }
            }
        }
        m
    }

    /// Dense matrix of the vectorized generator, (d^2) x (d^2) with column
    /// stacking. Guarded by `MAX_DENSE_DIM`.
    pub fn dense(&self) -> Result<CMat> {
        if self.dim > MAX_DENSE_DIM {
            return Err(LmgError::ResourceLimit(format!(
                "dense Liouvillian at d = {} needs a {} x {} matrix; use the parity blocks",
                self.dim,
                self.dim * self.dim,
                self.dim * self.dim
            )));
        }
        let idx: Vec<usize> = (0..self.dim * self.dim).collect();
        Ok(self.assemble(&idx))
    }

    /// The two parity-invariant blocks of the vectorized generator, with
    /// their vec-index sets. Even block first (it carries the identity and
    /// hence the stationary state).
    pub fn parity_blocks(&self) -> [(Vec<usize>, CMat); 2] {
        let [even, odd] = parity_indices(self.dim);
        let me = self.assemble(&even);
        let mo = self.assemble(&odd);
        [(even, me), (odd, mo)]
    }
}

/// Vec-space indices of the even and odd product-parity classes
/// (-1)^{i+j} for entries (i, j), column stacking.
pub fn parity_indices(d: usize) -> [Vec<usize>; 2] {
    let mut even = Vec::with_capacity(d * d / 2 + 1);
    let mut odd = Vec::with_capacity(d * d / 2 + 1);
    for v in 0..d * d {
        let (i, j) = (v % d, v / d);
        if (i + j) % 2 == 0 {
            even.push(v);
        } else {
            odd.push(v);
        }
    }
    [even, odd]
}

fn check_build(ops: &SpinOperators, params: &ModelParams) -> Result<KappaMatrix> {
    params.validate()?;
    if (ops.s - params.s).abs() > 1e-12 {
        return Err(LmgError::InvalidParameter(format!(
            "spin operators are for s = {} but parameters say s = {}",
            ops.s, params.s
        )));
    }
    if ops.dim > MAX_SUPEROP_DIM {
        return Err(LmgError::ResourceLimit(format!(
            "S = {} exceeds the superoperator cap S <= {}",
            ops.s,
            (MAX_SUPEROP_DIM - 1) / 2
        )));
    }
    kappa_matrix(params, true)
}

/// Schroedinger-picture generator L (see module docs) with the
/// positivity-repaired Kossakowski matrix.
pub fn build_lindbladian(ops: &SpinOperators, params: &ModelParams) -> Result<Superoperator> {
    let kappa = check_build(ops, params)?;
    let h = lmg_hamiltonian(ops, params.lambda);
    let sxsy = ops.sx.dot(&ops.sy);
    let sysx = ops.sy.dot(&ops.sx);
    let sx2 = ops.sx.dot(&ops.sx);
    let sy2 = ops.sy.dot(&ops.sy);
    let c1 = Complex64::new(kappa.kyx().im, 0.0);
    let kxx = Complex64::new(kappa.kxx, 0.0);
    let kyy = Complex64::new(kappa.kyy, 0.0);
    let r2 = Complex64::new(2.0 * kappa.kxy.re, 0.0);

    let mut sup = Superoperator::new(ops.dim);
    // i[rho, H]
    sup.push(C_I, None, Some(&h));
    sup.push(-C_I, Some(&h), None);
    // -i Im(k_yx) [Sx, {Sy, rho}]
    sup.push(-C_I * c1, Some(&sxsy), None);
    sup.push(-C_I * c1, Some(&ops.sx), Some(&ops.sy));
    sup.push(C_I * c1, Some(&ops.sy), Some(&ops.sx));
    sup.push(C_I * c1, None, Some(&sysx));
    // -(k_xx/2) [Sx, [Sx, rho]]
    sup.push(-0.5 * kxx, Some(&sx2), None);
    sup.push(kxx, Some(&ops.sx), Some(&ops.sx));
    sup.push(-0.5 * kxx, None, Some(&sx2));
    // -k_yy [Sy, [Sy, rho]]
    sup.push(-kyy, Some(&sy2), None);
    sup.push(2.0 * kyy, Some(&ops.sy), Some(&ops.sy));
    sup.push(-kyy, None, Some(&sy2));
    // +2 Re(k_xy) [Sy, [Sx, rho]]
    sup.push(r2, Some(&sysx), None);
    sup.push(-r2, Some(&ops.sy), Some(&ops.sx));
    sup.push(-r2, Some(&ops.sx), Some(&ops.sy));
    sup.push(r2, None, Some(&sxsy));
    Ok(sup)
}

/// Heisenberg-picture generator, the exact trace dual of
/// `build_lindbladian` for the same parameters.
pub fn build_adjoint_lindbladian(
    ops: &SpinOperators,
    params: &ModelParams,
) -> Result<Superoperator> {
    let kappa = check_build(ops, params)?;
    let h = lmg_hamiltonian(ops, params.lambda);
    let sxsy = ops.sx.dot(&ops.sy);
    let sysx = ops.sy.dot(&ops.sx);
    let sx2 = ops.sx.dot(&ops.sx);
    let sy2 = ops.sy.dot(&ops.sy);
    let c1 = Complex64::new(kappa.kyx().im, 0.0);
    let kxx = Complex64::new(kappa.kxx, 0.0);
    let kyy = Complex64::new(kappa.kyy, 0.0);
    let r2 = Complex64::new(2.0 * kappa.kxy.re, 0.0);

    let mut sup = Superoperator::new(ops.dim);
    // i[H, A]
    sup.push(C_I, Some(&h), None);
    sup.push(-C_I, None, Some(&h));
    // +i Im(k_yx) {Sy, [Sx, A]}
    sup.push(C_I * c1, Some(&sysx), None);
    sup.push(-C_I * c1, Some(&ops.sy), Some(&ops.sx));
    sup.push(C_I * c1, Some(&ops.sx), Some(&ops.sy));
    sup.push(-C_I * c1, None, Some(&sxsy));
    // -(k_xx/2) [Sx, [Sx, A]]
    sup.push(-0.5 * kxx, Some(&sx2), None);
    sup.push(kxx, Some(&ops.sx), Some(&ops.sx));
    sup.push(-0.5 * kxx, None, Some(&sx2));
    // -k_yy [Sy, [Sy, A]]
    sup.push(-kyy, Some(&sy2), None);
    sup.push(2.0 * kyy, Some(&ops.sy), Some(&ops.sy));
    sup.push(-kyy, None, Some(&sy2));
    // +2 Re(k_xy) [Sx, [Sy, A]]
    sup.push(r2, Some(&sxsy), None);
    sup.push(-r2, Some(&ops.sx), Some(&ops.sy));
    sup.push(-r2, Some(&ops.sy), Some(&ops.sx));
    sup.push(r2, None, Some(&sysx));
    Ok(sup)
}

/// Canonical GKSL dissipator for a Kossakowski matrix over the operator pair
/// (Sx, Sy): sum_ab k_ab (S_a rho S_b - {S_b S_a, rho}/2), the index order
/// under which a rank-one k = v v^dag factorizes into a single jump operator
/// L = v_x Sx + v_y Sy. For the repaired (singular PSD) matrix this equals
/// the dissipator of `bath::jump_operator` identically.
pub fn gksl_dissipator(ops: &SpinOperators, kappa: &KappaMatrix) -> Superoperator {
    let sxsy = ops.sx.dot(&ops.sy);
    let sysx = ops.sy.dot(&ops.sx);
    let sx2 = ops.sx.dot(&ops.sx);
    let sy2 = ops.sy.dot(&ops.sy);
    let kxx = Complex64::new(kappa.kxx, 0.0);
    let kyy = Complex64::new(kappa.kyy, 0.0);
    let kxy = kappa.kxy;
    let kyx = kappa.kyx();

    let mut sup = Superoperator::new(ops.dim);
    sup.push(kxx, Some(&ops.sx), Some(&ops.sx));
    sup.push(-0.5 * kxx, Some(&sx2), None);
    sup.push(-0.5 * kxx, None, Some(&sx2));
    sup.push(kyy, Some(&ops.sy), Some(&ops.sy));
    sup.push(-0.5 * kyy, Some(&sy2), None);
    sup.push(-0.5 * kyy, None, Some(&sy2));
    sup.push(kxy, Some(&ops.sx), Some(&ops.sy));
    sup.push(-0.5 * kxy, Some(&sysx), None);
    sup.push(-0.5 * kxy, None, Some(&sysx));
    sup.push(kyx, Some(&ops.sy), Some(&ops.sx));
    sup.push(-0.5 * kyx, Some(&sxsy), None);
    sup.push(-0.5 * kyx, None, Some(&sxsy));
    sup
}

/// Density matrix with validated invariants: Hermitian at working precision
/// and unit trace. Positivity is not enforced on construction (Lindblad
/// evolution at finite tolerance can graze small negative eigenvalues);
/// check it explicitly with `min_eigenvalue`.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    pub matrix: CMat,
}

impl DensityMatrix {
    pub fn new(matrix: CMat) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(LmgError::InvalidParameter(
                "density matrix must be square".into(),
            ));
        }
        let scale = matrix.iter().map(|c| c.norm()).fold(1.0_f64, f64::max);
        if !is_hermitian(&matrix, 1e-12 * scale) {
            return Err(LmgError::ContractViolation(
                "density matrix is not Hermitian at working precision".into(),
            ));
        }
        let tr = trace(&matrix);
        if (tr - Complex64::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(LmgError::ContractViolation(format!(
                "density matrix trace is {tr}, not 1"
            )));
        }
        Ok(DensityMatrix { matrix })
    }

    /// Rank-one projector onto a normalized pure state.
    pub fn from_pure(psi: &CVec) -> Result<Self> {
        Self::new(crate::thermal::pure_density(psi))
    }

    /// Tr[rho^2], 1 for pure states and 1/d for the maximally mixed state.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Smallest eigenvalue; negative beyond tolerance means the state has
    /// left the physical cone.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        use ndarray_linalg::Eigh;
        let (evals, _) = self.matrix.eigh(UPLO::Lower)?;
        Ok(evals[0])
    }

    pub fn expectation(&self, a: &CMat) -> Result<f64> {
        crate::thermal::real_expectation(a, &self.matrix)
    }
}

fn mat_to_real(m: &CMat, out: &mut [f64]) {
    let n2 = m.len();
    for (k, v) in m.iter().enumerate() {
        out[k] = v.re;
        out[k + n2] = v.im;
    }
}

fn real_to_mat(y: &[f64], d: usize) -> CMat {
    let n2 = d * d;
    CMat::from_shape_fn((d, d), |(i, j)| {
        let k = i * d + j;
        Complex64::new(y[k], y[k + n2])
    })
}

fn evolve_matrix(sup: &Superoperator, m0: &CMat, ts: &[f64]) -> Result<Vec<CMat>> {
    let d = sup.dim;
    if m0.nrows() != d || m0.ncols() != d {
        return Err(LmgError::InvalidParameter(format!(
            "operator is {} x {} but the generator acts on {} x {}",
            m0.nrows(),
            m0.ncols(),
            d,
            d
        )));
    }
    if ts.is_empty() {
        return Ok(Vec::new());
    }
    let mut y0 = vec![0.0; 2 * d * d];
    mat_to_real(m0, &mut y0);
    let f = |_t: f64, y: &[f64], dy: &mut [f64]| {
        let m = real_to_mat(y, d);
        let lm = sup.apply(&m);
        mat_to_real(&lm, dy);
    };
    let opts = AdaptiveOptions {
        rtol: 1e-8,
        atol: 1e-10,
        ..Default::default()
    };
    let rows = solve_to_grid(f, ts[0], &y0, ts, opts)?;
    Ok(rows.iter().map(|y| real_to_mat(y, d)).collect())
}

/// Integrate d rho/dt = L rho through the sample times `ts` (strictly
/// increasing; `rho0` is the state at `ts[0]`). Embedded Runge-Kutta at
/// rtol 1e-8 / atol 1e-10; outputs are re-Hermitized against roundoff and
/// revalidated, so a genuine trace or Hermiticity drift is an error, never
/// a silent renormalization.
pub fn evolve_state(
    sup: &Superoperator,
    rho0: &DensityMatrix,
    ts: &[f64],
) -> Result<Vec<DensityMatrix>> {
    evolve_matrix(sup, &rho0.matrix, ts)?
        .iter()
        .map(|m| DensityMatrix::new(hermitian_part(m)))
        .collect()
}

/// Integrate the Heisenberg equation dA/dt = L' A for a Hermitian
/// observable through the sample times `ts`.
pub fn evolve_observable(adjoint: &Superoperator, a0: &CMat, ts: &[f64]) -> Result<Vec<CMat>> {
    Ok(evolve_matrix(adjoint, a0, ts)?
        .iter()
        .map(hermitian_part)
        .collect())
}

/// Frobenius-norm stationarity defect ||L rho||_F / ||rho||_F; zero exactly
/// on stationary states.
pub fn stationarity_residual(sup: &Superoperator, rho: &CMat) -> f64 {
    frobenius_norm(&sup.apply(rho)) / frobenius_norm(rho)
}

struct SpectralBlock {
    indices: Vec<usize>,
    eigenvalues: CVec,
    vectors: CMat,
    inverse: CMat,
}

/// Eigendecomposition of the vectorized generator, parity block by parity
/// block: L = V diag(lambda) V^{-1}. Built once, it evaluates rho(t) and
/// expectation-value time series at arbitrary times for the cost of a few
/// matrix-vector products, which is what makes slow relaxation (gamma t of
/// order 10^2) affordable at large S.
///
/// Weakly dissipative generators degrade the eigenbasis conditioning: at
/// intensive temperature the diffusion scale falls off as 1/S, and near
/// S = 40 the eigenvector matrix becomes numerically defective.
/// Construction fails loudly on the reconstruction residual in that regime
/// rather than returning silently wrong series; `evolve_state` has no
/// eigenbasis and stays robust there.
pub struct SpectralEvolver {
    dim: usize,
    blocks: Vec<SpectralBlock>,
}

impl SpectralEvolver {
    pub fn new(sup: &Superoperator) -> Result<Self> {
        let d = sup.dim;
        let classes = parity_indices(d);
        if classes[0].len() > MAX_SPECTRAL_BLOCK {
            return Err(LmgError::ResourceLimit(format!(
                "parity block of size {} exceeds the eigendecomposition cap {} (reached at S = 40)",
                classes[0].len(),
                MAX_SPECTRAL_BLOCK
            )));
        }
        let mut blocks = Vec::with_capacity(2);
        for indices in classes {
            if indices.is_empty() {
                continue;
            }
            let m = sup.assemble(&indices);
            let (eigenvalues, vectors) = m.eig()?;
            let inverse = vectors.inv().map_err(|_| {
                LmgError::Numerical(
                    "Liouvillian eigenbasis is numerically defective (singular eigenvector matrix)"
                        .into(),
                )
            })?;
            // Probe the decomposition: L w must match V (lambda (V^{-1} w)).
            let n = indices.len();
            let w = CVec::from_shape_fn(n, |i| {
                Complex64::new(((i * 2654435761) % 1000) as f64 / 1000.0 - 0.5, 0.3)
            });
            let direct = m.dot(&w);
            let mut c = inverse.dot(&w);
            for (ci, li) in c.iter_mut().zip(eigenvalues.iter()) {
                *ci *= li;
            }
            let recon = vectors.dot(&c);
            let scale = eigenvalues
                .iter()
                .map(|l| l.norm())
                .fold(1e-300, f64::max)
                * w.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            let resid = (&direct - &recon)
                .iter()
                .map(|v| v.norm_sqr())
                .sum::<f64>()
                .sqrt();
            if resid > 1e-6 * scale {
                return Err(LmgError::Numerical(format!(
                    "Liouvillian eigendecomposition residual {:.3e} exceeds 1e-6 of scale {:.3e}",
                    resid, scale
                )));
            }
            blocks.push(SpectralBlock {
                indices,
                eigenvalues,
                vectors,
                inverse,
            });
        }
        Ok(SpectralEvolver { dim: d, blocks })
    }

    /// All eigenvalues of the generator (union over parity blocks).
    pub fn eigenvalues(&self) -> CVec {
        let total: usize = self.blocks.iter().map(|b| b.eigenvalues.len()).sum();
        let mut out = CVec::zeros(total);
        let mut k = 0;
        for b in &self.blocks {
            for &l in b.eigenvalues.iter() {
                out[k] = l;
                k += 1;
            }
        }
        out
    }

    fn restrict(&self, m: &CMat, indices: &[usize]) -> CVec {
        let d = self.dim;
        CVec::from_shape_fn(indices.len(), |r| {
            let v = indices[r];
            m[(v % d, v / d)]
        })
    }

    /// State at time t from the spectral sum rho(t) = V e^{lambda t} V^{-1}
    /// vec(rho0), re-Hermitized.
    pub fn state_at(&self, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
        let d = self.dim;
        if rho0.matrix.nrows() != d {
            return Err(LmgError::InvalidParameter(
                "state dimension does not match the generator".into(),
            ));
        }
        let mut full = CMat::zeros((d, d));
        for b in &self.blocks {
            let r0 = self.restrict(&rho0.matrix, &b.indices);
            let mut c = b.inverse.dot(&r0);
            for (ci, li) in c.iter_mut().zip(b.eigenvalues.iter()) {
                *ci *= (li * t).exp();
            }
            let rt = b.vectors.dot(&c);
            for (r, &v) in b.indices.iter().enumerate() {
                full[(v % d, v / d)] = rt[r];
            }
        }
        DensityMatrix::new(hermitian_part(&full))
    }

    /// Time series of Tr[A rho(t)] over `ts` for a fixed initial state,
    /// evaluated from precomputed spectral amplitudes: Tr[A rho(t)] =
    /// sum_j g_j c_j e^{lambda_j t}.
    pub fn expectation_series(
        &self,
        rho0: &DensityMatrix,
        a: &CMat,
        ts: &[f64],
    ) -> Result<Vec<f64>> {
        let d = self.dim;
        if rho0.matrix.nrows() != d || a.nrows() != d || a.ncols() != d {
            return Err(LmgError::InvalidParameter(
                "operator dimensions do not match the generator".into(),
            ));
        }
        // Tr[A rho] = sum_I vec(A^T)_I vec(rho)_I.
        let at = a.t().to_owned();
        let mut amps: Vec<(Complex64, Complex64)> = Vec::new();
        let mut amp_scale = 1.0_f64;
        for b in &self.blocks {
            let c = b.inverse.dot(&self.restrict(&rho0.matrix, &b.indices));
            let g = self.restrict(&at, &b.indices).dot(&b.vectors);
            for ((&gj, &cj), &lj) in g.iter().zip(c.iter()).zip(b.eigenvalues.iter()) {
                let amp = gj * cj;
                amp_scale += amp.norm();
                if amp.norm() > 0.0 {
                    amps.push((amp, lj));
                }
            }
        }
        let mut out = Vec::with_capacity(ts.len());
        for &t in ts {
            let v: Complex64 = amps.iter().map(|&(a, l)| a * (l * t).exp()).sum();
            // The amplitudes pass through the eigenvector inverse of a
            // strongly non-normal generator, so their roundoff is eps
            // amplified by the eigenbasis condition number; 1e-6 of the
            // amplitude mass stays far below any genuine complex leak,
            // which would show up at the scale of the real part itself.
            if v.im.abs() > 1e-6 * amp_scale {
                return Err(LmgError::ContractViolation(format!(
                    "expectation series of a Hermitian observable came out complex at t = {t}: {v}"
                )));
            }
            out.push(v.re);
        }
        Ok(out)
    }

    /// The stationary state: eigenvector of the eigenvalue closest to zero,
    /// normalized to unit trace. Errors if that eigenvalue is not zero at
    /// working precision or its eigenvector is traceless (no stationary
    /// density matrix in this block).
    pub fn stationary_state(&self) -> Result<DensityMatrix> {
        let d = self.dim;
        let scale = self
            .eigenvalues()
            .iter()
            .map(|l| l.norm())
            .fold(1e-300, f64::max);
        let mut best: Option<(f64, usize, usize)> = None;
        for (bi, b) in self.blocks.iter().enumerate() {
            for (j, l) in b.eigenvalues.iter().enumerate() {
                if best.is_none() || l.norm() < best.unwrap().0 {
                    best = Some((l.norm(), bi, j));
                }
            }
        }
        let (lnorm, bi, j) = best.ok_or_else(|| {
            LmgError::Numerical("spectral evolver holds no eigenvalues".into())
        })?;
        if lnorm > 1e-8 * scale {
            return Err(LmgError::ContractViolation(format!(
                "smallest Liouvillian eigenvalue has |lambda| = {lnorm:.3e}, not a stationary mode"
            )));
        }
        let b = &self.blocks[bi];
        let mut full = CMat::zeros((d, d));
        for (r, &v) in b.indices.iter().enumerate() {
            full[(v % d, v / d)] = b.vectors[(r, j)];
        }
        let full = hermitian_part(&full);
        let tr = trace(&full);
        if tr.norm() < 1e-8 * frobenius_norm(&full) {
            return Err(LmgError::ContractViolation(
                "stationary eigenvector is traceless; no stationary state in this block".into(),
            ));
        }
        DensityMatrix::new(full.mapv(|e| e / tr))
    }
}

/// Leading part of the generator's spectrum, sorted by descending real part
/// (ties broken by ascending |Im|), computed block by block without
/// eigenvectors. `count = 0` returns the full spectrum.
pub fn liouvillian_spectrum(sup: &Superoperator, count: usize) -> Result<CVec> {
    let mut all: Vec<Complex64> = Vec::with_capacity(sup.dim * sup.dim);
    for indices in parity_indices(sup.dim) {
        if indices.is_empty() {
            continue;
        }
        if indices.len() > MAX_SPECTRAL_BLOCK {
            return Err(LmgError::ResourceLimit(format!(
                "parity block of size {} exceeds the eigendecomposition cap {}",
                indices.len(),
                MAX_SPECTRAL_BLOCK
            )));
        }
        let m = sup.assemble(&indices);
        let evs = m.eigvals()?;
        all.extend(evs.iter().copied());
    }
    all.sort_by(|a, b| {
        b.re.partial_cmp(&a.re)
            .unwrap()
            .then(a.im.abs().partial_cmp(&b.im.abs()).unwrap())
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    let n = if count == 0 { all.len() } else { count.min(all.len()) };
    Ok(CVec::from_vec(all[..n].to_vec()))
}

/// Spectral gap of the generator: the dissipative mode that survives after
/// removing the stationary eigenvalue.
#[derive(Clone, Copy, Debug)]
pub struct SpectralGap {
    /// -max Re over the non-stationary spectrum; 0 without dissipation.
    pub gap: f64,
    /// The stationary eigenvalue itself (zero at working precision).
    pub lambda0: Complex64,
    /// The slowest decaying non-stationary eigenvalue.
    pub lambda1: Complex64,
}

/// Locate the stationary eigenvalue and the slowest relaxation rate. The
/// eigenvalue nearest zero must be zero at working precision relative to the
/// spectral radius, and no eigenvalue may lie meaningfully in the right half
/// plane; both conditions are enforced, not assumed.
pub fn spectral_gap(sup: &Superoperator) -> Result<SpectralGap> {
    let spectrum = liouvillian_spectrum(sup, 0)?;
    if spectrum.len() < 2 {
        return Err(LmgError::InvalidParameter(
            "spectral gap needs at least a 2-dimensional generator".into(),
        ));
    }
    let scale = spectrum.iter().map(|l| l.norm()).fold(1e-300, f64::max);
    let mut i0 = 0;
    for (i, l) in spectrum.iter().enumerate() {
        if l.norm() < spectrum[i0].norm() {
            i0 = i;
        }
    }
    let lambda0 = spectrum[i0];
    if lambda0.norm() > 1e-8 * scale {
        return Err(LmgError::ContractViolation(format!(
            "eigenvalue nearest zero is {lambda0}, larger than 1e-8 of the spectral radius {scale:.3e}"
        )));
    }
    // The max-Re eigenvalue must be the stationary mode (up to degeneracy of
    // the real part): nothing grows.
    let max_re = spectrum.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
    if max_re - lambda0.re > 1e-8 * scale {
        return Err(LmgError::ContractViolation(format!(
            "spectrum reaches Re = {max_re:.3e} above the stationary mode; generator is unstable"
        )));
    }
    let mut lambda1 = Complex64::new(f64::NEG_INFINITY, 0.0);
    for (i, l) in spectrum.iter().enumerate() {
        if i != i0 && l.re > lambda1.re {
            lambda1 = *l;
        }
    }
    Ok(SpectralGap {
        gap: -lambda1.re,
        lambda0,
        lambda1,
    })
}
