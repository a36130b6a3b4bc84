//! Dressed-state spectroscopy of the effective Hamiltonian.
//!
//! The effective Hamiltonian conserves excitation number, so it splits into
//! manifolds `n = 0, 1, 2, ...` that are diagonalised independently. Each
//! manifold is non-Hermitian; we keep both right and left eigenvectors,
//! normalised so that `<L_i|R_j> = δ_ij`.

mod analytic;
mod ladder;

pub use analytic::{
    analytic_n1, analytic_n2_lossless, perturbative_shift, N1Eigenvalues, PerturbativeShift,
    ShiftBranch,
};
pub use ladder::{
    anharmonicity, blockade_figure, kerr_shift_numeric, BlockadeReport, DressedLadder, ShiftModel,
};

use faer::linalg::solvers::DenseSolveCore;
use faer::Mat;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hilbert::{collective_sigma, creator, inner, normalize, BasisLabel, Operator};
use crate::model::{excitation_of, ModelParams};

/// Relative tolerance for grouping numerically degenerate eigenvalues.
pub const DEGENERACY_TOL: f64 = 1e-8;
/// Minimum overlap with the analytic trapping state for identification.
pub const TRAPPING_MIN_OVERLAP: f64 = 0.8;
/// Two candidates above this overlap make the identification ambiguous.
pub const TRAPPING_AMBIGUOUS_OVERLAP: f64 = 0.9;

/// Restriction of an operator to one excitation-number manifold.
#[derive(Clone, Debug)]
pub struct ManifoldBlock {
    pub n: usize,
    /// Full-space basis indices spanning the manifold, ascending.
    pub indices: Vec<usize>,
    pub labels: Vec<BasisLabel>,
    pub matrix: Mat<C64>,
}

impl ManifoldBlock {
    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    /// Restricts a full-space vector to this block.
    pub fn restrict(&self, v: &[C64]) -> Vec<C64> {
        self.indices.iter().map(|&i| v[i]).collect()
    }

    /// Embeds a block vector into the full space of dimension `dim`.
    pub fn embed(&self, v: &[C64], dim: usize) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); dim];
        for (&i, &x) in self.indices.iter().zip(v) {
            out[i] = x;
        }
        out
    }
}

/// Extracts the `N_exc = n` block of a (drive-free) effective Hamiltonian.
pub fn manifold_block(h_eff: &Operator, n: usize) -> Result<ManifoldBlock> {
    let space = *h_eff.space();
    if n > space.n_max() {
        return Err(Error::OutOfRange(format!(
            "manifold n={n} exceeds the Fock cutoff {}",
            space.n_max()
        )));
    }
    let exc: Vec<usize> = (0..space.dim()).map(|i| excitation_of(&space, i)).collect();
    let indices: Vec<usize> = (0..space.dim()).filter(|&i| exc[i] == n).collect();
    if indices.is_empty() {
        return Err(Error::EmptyManifold { n });
    }
    if h_eff
        .matrix()
        .triplets()
        .any(|(i, j, _)| (exc[i] == n) != (exc[j] == n))
    {
        return Err(Error::ManifoldLeak { n });
    }
    let dense = h_eff.matrix();
    let matrix = Mat::from_fn(indices.len(), indices.len(), |r, c| {
        dense.get(indices[r], indices[c])
    });
    Ok(ManifoldBlock {
        n,
        labels: indices.iter().map(|&i| space.label(i)).collect(),
        indices,
        matrix,
    })
}

/// Bi-orthogonal eigensystem of one manifold.
#[derive(Clone, Debug)]
pub struct ManifoldSpectrum {
    pub n: usize,
    /// Sorted by real part, then imaginary part.
    pub eigenvalues: Vec<C64>,
    /// Unit-norm right eigenvectors as columns (block coordinates).
    pub right: Mat<C64>,
    /// Left eigenvectors as columns, scaled so `left^H right = I`.
    pub left: Mat<C64>,
    pub indices: Vec<usize>,
    pub labels: Vec<BasisLabel>,
}

impl ManifoldSpectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn right_vector(&self, i: usize) -> Vec<C64> {
        (0..self.dim()).map(|r| self.right[(r, i)]).collect()
    }

    pub fn left_vector(&self, i: usize) -> Vec<C64> {
        (0..self.dim()).map(|r| self.left[(r, i)]).collect()
    }

    /// Right eigenvector `i` embedded in the full space.
    pub fn embed_right(&self, i: usize, dim: usize) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); dim];
        for (r, &idx) in self.indices.iter().enumerate() {
            out[idx] = self.right[(r, i)];
        }
        out
    }

    /// `<L_i | x>` for a full-space vector `x`.
    pub fn left_component(&self, i: usize, x: &[C64]) -> C64 {
        self.indices
            .iter()
            .enumerate()
            .map(|(r, &idx)| self.left[(r, i)].conj() * x[idx])
            .sum()
    }

    /// `max |<L_i|R_j> - δ_ij|`.
    pub fn biorthogonality_error(&self) -> f64 {
        let g = self.left.adjoint() * &self.right;
        let mut err: f64 = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let target = if i == j { 1.0 } else { 0.0 };
                err = err.max((g[(i, j)] - C64::new(target, 0.0)).norm());
            }
        }
        err
    }

    /// `|<v|R_i>|` for every eigenvector, `v` a unit full-space vector.
    pub fn overlaps(&self, v: &[C64]) -> Vec<f64> {
        let restricted: Vec<C64> = self.indices.iter().map(|&i| v[i]).collect();
        (0..self.dim())
            .map(|i| inner(&restricted, &self.right_vector(i)).norm())
            .collect()
    }

    /// Index of the eigenstate that best matches the reference vector.
    pub fn identify(&self, reference: &[C64]) -> Result<usize> {
        let ov = self.overlaps(reference);
        let (best, &max) = ov
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .ok_or_else(|| Error::TrappingState("empty manifold".into()))?;
        if max < TRAPPING_MIN_OVERLAP {
            return Err(Error::TrappingState(format!(
                "best overlap {max:.4} below {TRAPPING_MIN_OVERLAP} in manifold n={}",
                self.n
            )));
        }
        let strong = ov.iter().filter(|&&o| o > TRAPPING_AMBIGUOUS_OVERLAP).count();
        if strong > 1 {
            return Err(Error::TrappingState(format!(
                "{strong} candidates with overlap above {TRAPPING_AMBIGUOUS_OVERLAP} in manifold n={}",
                self.n
            )));
        }
        Ok(best)
    }
}

fn sort_key(z: &C64) -> (f64, f64) {
    (z.re, z.im)
}

/// Full bi-orthogonal diagonalisation of a manifold block.
///
/// Right vectors come from the block, left vectors from its adjoint; the two
/// sets are paired by conjugate eigenvalue and re-normalised cluster by
/// cluster so degenerate eigenspaces stay bi-orthonormal.
pub fn diagonalize_manifold(block: &ManifoldBlock) -> Result<ManifoldSpectrum> {
    let dim = block.dim();
    let fail = |reason: String| Error::EigenSolver { dim, reason };
    let right_evd = block
        .matrix
        .eigen()
        .map_err(|e| fail(format!("right eigenproblem did not converge: {e:?}")))?;
    let adj = block.matrix.adjoint().to_owned();
    let left_evd = adj
        .eigen()
        .map_err(|e| fail(format!("adjoint eigenproblem did not converge: {e:?}")))?;

    let rvals: Vec<C64> = right_evd.S().column_vector().iter().copied().collect();
    let lvals: Vec<C64> = left_evd.S().column_vector().iter().map(|z| z.conj()).collect();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| {
        let (ka, kb) = (sort_key(&rvals[a]), sort_key(&rvals[b]));
        ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
    });
    let eigenvalues: Vec<C64> = order.iter().map(|&i| rvals[i]).collect();

    let mut right = Mat::<C64>::from_fn(dim, dim, |r, c| right_evd.U()[(r, order[c])]);
    for c in 0..dim {
        let norm = right.col(c).norm_l2();
        if norm == 0.0 || !norm.is_finite() {
            return Err(fail(format!("degenerate right eigenvector {c}")));
        }
        for r in 0..dim {
            right[(r, c)] /= norm;
        }
    }

    let scale = eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tol = DEGENERACY_TOL * scale.max(1e-300);
    let clusters = cluster(&eigenvalues, tol);

    // assign each adjoint eigenpair to the closest right cluster
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); clusters.len()];
    for (li, lv) in lvals.iter().enumerate() {
        let (best, _) = clusters
            .iter()
            .enumerate()
            .map(|(ci, c)| {
                let d = c
                    .iter()
                    .map(|&k| (eigenvalues[k] - lv).norm())
                    .fold(f64::INFINITY, f64::min);
                (ci, d)
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("at least one cluster");
        members[best].push(li);
    }

    let mut left = Mat::<C64>::zeros(dim, dim);
    for (cl, lset) in clusters.iter().zip(&members) {
        if cl.len() != lset.len() {
            return Err(fail(format!(
                "left/right pairing mismatch near eigenvalue {:.6e}: {} right vs {} left vectors",
                eigenvalues[cl[0]],
                cl.len(),
                lset.len()
            )));
        }
        let k = cl.len();
        let rc = Mat::<C64>::from_fn(dim, k, |r, c| right[(r, cl[c])]);
        let lc = Mat::<C64>::from_fn(dim, k, |r, c| left_evd.U()[(r, lset[c])]);
        let overlap = lc.adjoint() * &rc;
        let sv = overlap
            .singular_values()
            .map_err(|e| fail(format!("svd of pairing matrix failed: {e:?}")))?;
        let (smax, smin) = (sv[0], sv[sv.len() - 1]);
        if !(smin > 1e-12 * smax) {
            return Err(fail(format!(
                "near-defective cluster at {:.6e}: pairing condition number {:.3e}",
                eigenvalues[cl[0]],
                smax / smin
            )));
        }
        // L_new = L M^{-H} so that L_new^H R = I
        let inv = overlap.partial_piv_lu().inverse();
        let lnew = &lc * inv.adjoint();
        for (c, &col) in cl.iter().enumerate() {
            for r in 0..dim {
                left[(r, col)] = lnew[(r, c)];
            }
        }
    }

    let spectrum = ManifoldSpectrum {
        n: block.n,
        eigenvalues,
        right,
        left,
        indices: block.indices.clone(),
        labels: block.labels.clone(),
    };
    let err = spectrum.biorthogonality_error();
    if !(err <= 1e-6) {
        return Err(fail(format!("bi-orthogonality error {err:.3e}")));
    }
    Ok(spectrum)
}

fn cluster(values: &[C64], tol: f64) -> Vec<Vec<usize>> {
    let mut assigned = vec![false; values.len()];
    let mut out = Vec::new();
    for i in 0..values.len() {
        if assigned[i] {
            continue;
        }
        assigned[i] = true;
        let mut group = vec![i];
        let mut head = 0;
        while head < group.len() {
            let g = group[head];
            for j in 0..values.len() {
                if !assigned[j] && (values[j] - values[g]).norm() <= tol {
                    assigned[j] = true;
                    group.push(j);
                }
            }
            head += 1;
        }
        group.sort_unstable();
        out.push(group);
    }
    out
}

/// Cavity-EIT trapping state of manifold `n`:
/// `(a† − (g13/Ω) Σ_k σ21^k)^n |0>`, normalised.
///
/// `n = 1` is the single trapping excitation; `n = 2` two trapping
/// excitations. Requires `omega > 0` and `n <= n_max`.
pub fn trapping_state(p: &ModelParams, space: &crate::hilbert::HilbertSpace, n: usize) -> Result<Vec<C64>> {
    if p.omega <= 0.0 {
        return Err(Error::param("omega", "trapping state needs omega > 0"));
    }
    if n > space.n_max() {
        return Err(Error::OutOfRange(format!(
            "trapping state n={n} needs n_max >= {n}"
        )));
    }
    let raise = &creator(space) - &(&collective_sigma(space, 2, 1)? * (p.g13 / p.omega));
    let mut v = space.ground_vector();
    for _ in 0..n {
        v = raise.apply(&v);
    }
    normalize(&mut v);
    Ok(v)
}

/// One CSV row of a spectrum dump.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumRow {
    pub n: usize,
    pub index: usize,
    pub re_eps: f64,
    pub im_eps: f64,
    pub overlap_eit: f64,
}

/// Rows `(n, index, re, im, overlap with trapping state)`; the overlap is NaN
/// when no trapping state is defined for the manifold.
pub fn spectrum_rows(spec: &ManifoldSpectrum, trapping: Option<&[C64]>) -> Vec<SpectrumRow> {
    let ov = trapping.map(|v| spec.overlaps(v));
    spec.eigenvalues
        .iter()
        .enumerate()
        .map(|(i, e)| SpectrumRow {
            n: spec.n,
            index: i,
            re_eps: e.re,
            im_eps: e.im,
            overlap_eit: ov.as_ref().map_or(f64::NAN, |o| o[i]),
        })
        .collect()
}
