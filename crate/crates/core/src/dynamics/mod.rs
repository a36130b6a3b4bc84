//! Driven Lindblad dynamics: Liouvillian, steady state, propagation and
//! photon correlations.
//!
//! Density matrices are vectorised by stacking columns,
//! `vec(ρ)[i + D j] = ρ_ij`, so that `vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ)`.

pub mod expm;

use faer::linalg::solvers::Solve;
use faer::{Mat, Side};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hilbert::{annihilator, photon_number, HilbertSpace, Operator};
use crate::model::{hermitian_hamiltonian, jump_operators, ModelParams};
use crate::sparse::CsrMatrix;
use expm::{expm as dense_expm, KrylovExp, SparseShiftInvert, Stepper};

/// Largest superoperator dimension accepted by default.
pub const DEFAULT_SUPEROP_CAP: usize = 100_000;
/// Up to this superoperator dimension `exp(tL)` is formed densely.
pub const DENSE_PROPAGATION_LIMIT: usize = 1024;
/// Steady states whose bordered system has `‖B⁻¹‖` above this are rejected
/// as non-unique.
const DEGENERACY_INVERSE_NORM: f64 = 1e11;
/// Shift used by the rational Krylov propagator.
const KRYLOV_SHIFT: f64 = 1.0;
/// Photon numbers below this make g² undefined.
const MIN_PHOTONS: f64 = 1e-12;

const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, Debug)]
pub struct Liouvillian {
    space: HilbertSpace,
    matrix: CsrMatrix,
}

impl Liouvillian {
    /// Assembles `L` from a Hamiltonian and jump operators:
    /// `L = −i(I⊗H − Hᵀ⊗I) + Σ_c [c̄⊗c − ½ I⊗c†c − ½ (c†c)ᵀ⊗I]`.
    pub fn from_parts(h: &Operator, jumps: &[Operator]) -> Result<Self> {
        Self::from_parts_with_cap(h, jumps, DEFAULT_SUPEROP_CAP)
    }

    pub fn from_parts_with_cap(h: &Operator, jumps: &[Operator], cap: usize) -> Result<Self> {
        let space = *h.space();
        let d = space.dim();
        if d * d > cap {
            return Err(Error::DimensionCap { dim: d * d, cap });
        }
        let id = CsrMatrix::identity(d);
        let hm = h.matrix();
        let mut l = id
            .kron(hm)
            .add_scaled(&hm.transpose().kron(&id), C64::new(-1.0, 0.0))?
            .scale(-I);
        for c in jumps {
            let cm = c.matrix();
            let cdc = cm.adjoint().matmul(cm)?;
            l = l.add_scaled(&cm.conj().kron(cm), C64::new(1.0, 0.0))?;
            l = l.add_scaled(&id.kron(&cdc), C64::new(-0.5, 0.0))?;
            l = l.add_scaled(&cdc.transpose().kron(&id), C64::new(-0.5, 0.0))?;
        }
        Ok(Liouvillian { space, matrix: l })
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    /// Superoperator dimension D².
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Mat<C64> {
        let out = self.matrix.matvec(&rho.to_vec());
        unvec(&out, self.space.dim())
    }

    /// `‖L vec(ρ)‖₂`.
    pub fn residual(&self, rho: &DensityMatrix) -> f64 {
        norm2(&self.matrix.matvec(&rho.to_vec()))
    }
}

/// Liouvillian of the driven system described by `p`.
pub fn build_liouvillian(p: &ModelParams, space: &HilbertSpace) -> Result<Liouvillian> {
    let h = hermitian_hamiltonian(p, space, true)?;
    let jumps = jump_operators(p, space)?;
    Liouvillian::from_parts(&h, &jumps)
}

fn unvec(v: &[C64], d: usize) -> Mat<C64> {
    Mat::from_fn(d, d, |i, j| v[i + d * j])
}

fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[derive(Clone, Debug)]
pub struct DensityMatrix {
    space: HilbertSpace,
    data: Mat<C64>,
}

impl DensityMatrix {
    /// Wraps a matrix without normalising it.
    pub fn from_matrix(space: HilbertSpace, data: Mat<C64>) -> Result<Self> {
        if data.nrows() != space.dim() || data.ncols() != space.dim() {
            return Err(Error::DimensionMismatch { left: data.nrows(), right: space.dim() });
        }
        Ok(DensityMatrix { space, data })
    }

    pub fn from_vec(space: HilbertSpace, v: &[C64]) -> Result<Self> {
        let d = space.dim();
        if v.len() != d * d {
            return Err(Error::DimensionMismatch { left: v.len(), right: d * d });
        }
        Ok(DensityMatrix { space, data: unvec(v, d) })
    }

    /// `|ψ><ψ|` for a normalised `ψ`.
    pub fn pure(space: HilbertSpace, psi: &[C64]) -> Result<Self> {
        let d = space.dim();
        if psi.len() != d {
            return Err(Error::DimensionMismatch { left: psi.len(), right: d });
        }
        Ok(DensityMatrix { space, data: Mat::from_fn(d, d, |i, j| psi[i] * psi[j].conj()) })
    }

    /// Vacuum with every atom in |1>.
    pub fn ground(space: HilbertSpace) -> Self {
        Self::pure(space, &space.ground_vector()).expect("ground vector has the space dimension")
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &Mat<C64> {
        &self.data
    }

    pub fn to_vec(&self) -> Vec<C64> {
        let d = self.space.dim();
        (0..d * d).map(|k| self.data[(k % d, k / d)]).collect()
    }

    pub fn trace(&self) -> C64 {
        (0..self.space.dim()).map(|i| self.data[(i, i)]).sum()
    }

    /// `max |ρ − ρ†|`.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.space.dim();
        let mut err: f64 = 0.0;
        for i in 0..d {
            for j in 0..=i {
                err = err.max((self.data[(i, j)] - self.data[(j, i)].conj()).norm());
            }
        }
        err
    }

    fn hermitian_part(&self) -> Mat<C64> {
        let d = self.space.dim();
        Mat::from_fn(d, d, |i, j| (self.data[(i, j)] + self.data[(j, i)].conj()) * 0.5)
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let d = self.space.dim();
        self.hermitian_part()
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::EigenSolver { dim: d, reason: format!("{e:?}") })
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?[0])
    }

    /// `Tr(A ρ)`.
    pub fn expect(&self, op: &Operator) -> C64 {
        op.matrix().triplets().map(|(i, j, a)| a * self.data[(j, i)]).sum()
    }

    /// `½ Σ |λ(ρ − σ)|`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        let d = self.space.dim();
        if other.space.dim() != d {
            return Err(Error::DimensionMismatch { left: d, right: other.space.dim() });
        }
        let diff = DensityMatrix {
            space: self.space,
            data: Mat::from_fn(d, d, |i, j| self.data[(i, j)] - other.data[(i, j)]),
        };
        Ok(0.5 * diff.eigenvalues()?.iter().map(|x| x.abs()).sum::<f64>())
    }

    fn hermitize_normalized(mut self) -> Result<Self> {
        let tr = self.trace();
        if !(tr.norm() > 0.0) || !tr.re.is_finite() {
            return Err(Error::LinearSolve(format!("state has trace {tr}")));
        }
        let h = self.hermitian_part();
        let d = self.space.dim();
        self.data = Mat::from_fn(d, d, |i, j| h[(i, j)] / tr.re);
        Ok(self)
    }
}

/// Unique steady state from the bordered system in which the `ρ_00`
/// equation is replaced by `Tr ρ = 1`.
pub fn steady_state(l: &Liouvillian) -> Result<DensityMatrix> {
    let d = l.space.dim();
    let n = d * d;
    let bordered = CsrMatrix::from_triplets(
        n,
        n,
        l.matrix
            .triplets()
            .filter(|&(i, _, _)| i != 0)
            .chain((0..d).map(|k| (0, k + d * k, C64::new(1.0, 0.0)))),
    );
    let sparse = bordered.to_faer()?;
    // faer panics on an exactly zero pivot instead of reporting it
    let lu = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| sparse.sp_lu()))
        .map_err(|_| Error::DegenerateSteadyState("zero pivot in the bordered system".into()))?
        .map_err(|e| Error::DegenerateSteadyState(format!("bordered system is singular: {e:?}")))?;
    let solve = |rhs: &[C64]| -> Vec<C64> {
        let mut x = Mat::from_fn(n, 1, |i, _| rhs[i]);
        lu.solve_in_place(x.as_mut());
        (0..n).map(|i| x[(i, 0)]).collect()
    };

    // a few random probes bound ‖B⁻¹‖ from below; a second steady state makes it blow up
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..3 {
        let b: Vec<C64> = (0..n)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let x = solve(&b);
        let gain = norm2(&x) / norm2(&b);
        if !gain.is_finite() || gain > DEGENERACY_INVERSE_NORM {
            return Err(Error::DegenerateSteadyState(format!(
                "inverse norm estimate {gain:.3e} of the bordered system"
            )));
        }
    }

    let mut e0 = vec![C64::new(0.0, 0.0); n];
    e0[0] = C64::new(1.0, 0.0);
    let mut x = solve(&e0);
    // one step of iterative refinement
    let bx = bordered.matvec(&x);
    let r: Vec<C64> = e0.iter().zip(&bx).map(|(a, b)| a - b).collect();
    x.iter_mut().zip(solve(&r)).for_each(|(a, b)| *a += b);
    if x.iter().any(|z| !z.is_finite()) {
        return Err(Error::DegenerateSteadyState("non-finite solution".into()));
    }
    let rho = DensityMatrix::from_vec(l.space, &x)?.hermitize_normalized()?;
    let res = l.residual(&rho);
    if !(res <= 1e-6) {
        return Err(Error::LinearSolve(format!("steady-state residual {res:.3e}")));
    }
    Ok(rho)
}

/// `exp(tL) v` for each time of a non-decreasing grid.
pub fn evolve(l: &Liouvillian, v: &[C64], times: &[f64]) -> Result<Vec<Vec<C64>>> {
    if let Some(&t) = times.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
        return Err(Error::OutOfRange(format!("propagation time {t} must be finite and >= 0")));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::OutOfRange("time grid must be non-decreasing".into()));
    }
    if l.dim() <= DENSE_PROPAGATION_LIMIT {
        let dense = l.matrix.to_dense();
        let mut stepper = Stepper::new(&dense);
        let mut y = v.to_vec();
        let mut t_prev = 0.0;
        let mut out = Vec::with_capacity(times.len());
        for &t in times {
            y = stepper.advance(&y, t - t_prev)?;
            t_prev = t;
            out.push(y.clone());
        }
        return Ok(out);
    }
    let op = SparseShiftInvert::new(&l.matrix, KRYLOV_SHIFT)?;
    let probes = probe_times(times);
    let krylov = KrylovExp::new(&op, KRYLOV_SHIFT, v, &probes)?;
    krylov.apply_grid(times)
}

/// A handful of representative times used to test Krylov convergence.
fn probe_times(times: &[f64]) -> Vec<f64> {
    let positive: Vec<f64> = times.iter().copied().filter(|&t| t > 0.0).collect();
    let (Some(&lo), Some(&hi)) = (positive.first(), positive.last()) else {
        return Vec::new();
    };
    let mut probes = vec![lo, hi];
    let mut t = hi / 10.0;
    while t > lo {
        probes.push(t);
        t /= 10.0;
    }
    probes
}

/// `ρ(t) = exp(tL) ρ0`.
pub fn propagate(l: &Liouvillian, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    let out = evolve(l, &rho0.to_vec(), &[t])?;
    DensityMatrix::from_vec(l.space, &out[0])
}

/// Dense `exp(tL)` applied to `ρ0` regardless of size; for cross-checks.
pub fn propagate_dense(l: &Liouvillian, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    let a = l.matrix.to_dense();
    let e = dense_expm(&Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * t))?;
    let v = rho0.to_vec();
    let out: Vec<C64> = (0..v.len())
        .map(|i| (0..v.len()).map(|j| e[(i, j)] * v[j]).sum())
        .collect();
    DensityMatrix::from_vec(l.space, &out)
}

/// `<a†a>` in the state.
pub fn mean_photon(rho: &DensityMatrix) -> f64 {
    rho.expect(&photon_number(rho.space())).re
}

/// `Tr(a†²a² ρ) / Tr(a†a ρ)²`.
pub fn g2_zero(rho: &DensityMatrix) -> Result<f64> {
    let n = mean_photon(rho);
    if !(n > MIN_PHOTONS) {
        return Err(Error::UndefinedStatistic(format!("<a+a> = {n:.3e} (vacuum state)")));
    }
    let a = annihilator(rho.space());
    let ad = a.adjoint();
    let pairs = &(&ad * &ad) * &(&a * &a);
    Ok(rho.expect(&pairs).re / (n * n))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationSeries {
    pub tau: Vec<f64>,
    pub g2: Vec<f64>,
    pub mean_photon: f64,
}

/// `g²(τ)` on a non-decreasing grid from the quantum regression theorem,
/// `G²(τ) = Tr[a†a exp(Lτ)(a ρ a†)]`.
pub fn g2_tau_from(l: &Liouvillian, rho_ss: &DensityMatrix, tau: &[f64]) -> Result<CorrelationSeries> {
    let n = mean_photon(rho_ss);
    if !(n > MIN_PHOTONS) {
        return Err(Error::UndefinedStatistic(format!("<a+a> = {n:.3e} (vacuum state)")));
    }
    let space = *l.space();
    let a = annihilator(&space);
    let am = a.matrix().to_dense();
    let kicked = &am * rho_ss.matrix() * am.adjoint();
    let v = DensityMatrix::from_matrix(space, kicked)?.to_vec();
    let num = photon_number(&space);
    let g2 = evolve(l, &v, tau)?
        .into_iter()
        .map(|x| DensityMatrix::from_vec(space, &x).map(|r| r.expect(&num).re / (n * n)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(CorrelationSeries { tau: tau.to_vec(), g2, mean_photon: n })
}

/// Builds the model, finds its steady state and evaluates `g²(τ)`.
pub fn g2_tau(p: &ModelParams, tau: &[f64]) -> Result<CorrelationSeries> {
    p.validate_dissipative()?;
    let space = p.space()?;
    let l = build_liouvillian(p, &space)?;
    let rho = steady_state(&l)?;
    g2_tau_from(&l, &rho, tau)
}
