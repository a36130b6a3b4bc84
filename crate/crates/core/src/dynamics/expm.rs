//! Matrix exponentials: dense Padé scaling-and-squaring and the action of
//! `exp(tL)` on a vector through a shift-and-invert Krylov space.

use faer::linalg::solvers::{DenseSolveCore, Solve};
use faer::Mat;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// Induced 1-norm of a dense matrix.
pub fn norm_one(a: &Mat<C64>) -> f64 {
    (0..a.ncols())
        .map(|j| (0..a.nrows()).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn combine(terms: &[(f64, &Mat<C64>)], identity: f64) -> Mat<C64> {
    let n = terms[0].1.nrows();
    Mat::from_fn(n, n, |i, j| {
        let mut s: C64 = terms.iter().map(|(c, m)| m[(i, j)] * *c).sum();
        if i == j {
            s += identity;
        }
        s
    })
}

/// `exp(A)` by 13th-order Padé approximation with scaling and squaring.
pub fn expm(a: &Mat<C64>) -> Result<Mat<C64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionMismatch { left: n, right: a.ncols() });
    }
    let norm = norm_one(a);
    if !norm.is_finite() {
        return Err(Error::Propagation("matrix exponential of a non-finite matrix".into()));
    }
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let scale = 0.5f64.powi(s);
    let a = Mat::from_fn(n, n, |i, j| a[(i, j)] * scale);
    let b = &PADE13;
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = &a6 * combine(&[(b[13], &a6), (b[11], &a4), (b[9], &a2)], 0.0);
    let u = &a * combine(&[(1.0, &inner_u), (b[7], &a6), (b[5], &a4), (b[3], &a2)], b[1]);
    let inner_v = &a6 * combine(&[(b[12], &a6), (b[10], &a4), (b[8], &a2)], 0.0);
    let v = combine(&[(1.0, &inner_v), (b[6], &a6), (b[4], &a4), (b[2], &a2)], b[0]);
    let p = combine(&[(1.0, &v), (1.0, &u)], 0.0);
    let q = combine(&[(1.0, &v), (-1.0, &u)], 0.0);
    let mut r = q.partial_piv_lu().solve(&p);
    for _ in 0..s {
        r = &r * &r;
    }
    if r.col_iter().any(|c| c.iter().any(|z| !z.is_finite())) {
        return Err(Error::Propagation("matrix exponential overflowed".into()));
    }
    Ok(r)
}

fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn dot(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn mat_vec(m: &Mat<C64>, v: &[C64]) -> Vec<C64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

/// Anything that can apply `(I − γL)⁻¹` to a vector.
pub trait ShiftInvert {
    fn dim(&self) -> usize;
    fn solve(&self, rhs: &[C64]) -> Result<Vec<C64>>;
}

/// Sparse LU of `I − γL`.
pub struct SparseShiftInvert {
    n: usize,
    lu: faer::sparse::linalg::solvers::Lu<usize, C64>,
}

impl SparseShiftInvert {
    pub fn new(l: &CsrMatrix, gamma: f64) -> Result<Self> {
        let n = l.nrows();
        let m = CsrMatrix::identity(n).add_scaled(l, C64::new(-gamma, 0.0))?;
        let lu = m
            .to_faer()?
            .sp_lu()
            .map_err(|e| Error::LinearSolve(format!("factorising I - gL: {e:?}")))?;
        Ok(SparseShiftInvert { n, lu })
    }
}

impl ShiftInvert for SparseShiftInvert {
    fn dim(&self) -> usize {
        self.n
    }

    fn solve(&self, rhs: &[C64]) -> Result<Vec<C64>> {
        let mut x = Mat::from_fn(self.n, 1, |i, _| rhs[i]);
        self.lu.solve_in_place(x.as_mut());
        let out: Vec<C64> = (0..self.n).map(|i| x[(i, 0)]).collect();
        if out.iter().any(|z| !z.is_finite()) {
            return Err(Error::LinearSolve("shift-invert solve produced non-finite values".into()));
        }
        Ok(out)
    }
}

/// Rational Krylov approximation `exp(tL)v ≈ β V exp(t A) e₁` with
/// `A = (I − H⁻¹)/γ`, `H` the Arnoldi matrix of `(I − γL)⁻¹`.
///
/// One basis serves every time `t`, which makes it cheap to sample a whole
/// correlation curve.
pub struct KrylovExp {
    basis: Vec<Vec<C64>>,
    a: Mat<C64>,
    beta: f64,
}

/// Basis sizes tried in turn until successive approximations agree.
const KRYLOV_SIZES: [usize; 5] = [20, 40, 80, 160, 320];
const KRYLOV_TOL: f64 = 1e-9;

impl KrylovExp {
    /// Builds a basis that resolves `exp(tL)v` for every `t` in `probe_times`.
    pub fn new<S: ShiftInvert>(op: &S, gamma: f64, v: &[C64], probe_times: &[f64]) -> Result<Self> {
        let n = op.dim();
        let beta = norm2(v);
        if beta == 0.0 {
            return Ok(KrylovExp {
                basis: vec![vec![C64::new(0.0, 0.0); n]],
                a: Mat::zeros(1, 1),
                beta: 0.0,
            });
        }
        let mut basis = vec![v.iter().map(|z| z / beta).collect::<Vec<_>>()];
        let mut h: Vec<Vec<C64>> = Vec::new(); // column j holds h[0..=j+1][j]
        let mut previous: Option<Vec<Vec<C64>>> = None;
        let cap = n.min(*KRYLOV_SIZES.last().unwrap());
        let mut checkpoints = KRYLOV_SIZES.iter().map(|&m| m.min(cap)).collect::<Vec<_>>();
        checkpoints.dedup();
        let mut next = 0;
        loop {
            let j = basis.len() - 1;
            let mut w = op.solve(&basis[j])?;
            let mut col = vec![C64::new(0.0, 0.0); j + 2];
            for _ in 0..2 {
                for (i, q) in basis.iter().enumerate() {
                    let c = dot(q, &w);
                    col[i] += c;
                    w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
                }
            }
            let hn = norm2(&w);
            col[j + 1] = C64::new(hn, 0.0);
            h.push(col);
            let m = h.len();
            let breakdown = hn <= 1e-13 * h[j].iter().map(|z| z.norm()).fold(0.0, f64::max);
            if !breakdown {
                basis.push(w.into_iter().map(|z| z / hn).collect());
            }
            if breakdown || m >= checkpoints[next] {
                let a = projected(&h, m, gamma)?;
                let coeffs = probe_times
                    .iter()
                    .map(|&t| Ok(mat_vec(&expm(&scaled(&a, t))?, &unit(m))))
                    .collect::<Result<Vec<_>>>()?;
                let change = previous.as_ref().map(|prev| {
                    coeffs
                        .iter()
                        .zip(prev)
                        .map(|(c, p)| {
                            c.iter()
                                .enumerate()
                                .map(|(i, z)| (z - p.get(i).copied().unwrap_or_default()).norm_sqr())
                                .sum::<f64>()
                                .sqrt()
                        })
                        .fold(0.0, f64::max)
                });
                log::debug!("krylov m={m}: change {change:?}");
                let converged = breakdown || change.is_some_and(|d| d <= KRYLOV_TOL);
                if converged || m >= n {
                    basis.truncate(m);
                    return Ok(KrylovExp { basis, a, beta });
                }
                next += 1;
                if next == checkpoints.len() {
                    return Err(Error::Propagation(format!(
                        "shift-invert Krylov space did not converge with {m} vectors"
                    )));
                }
                previous = Some(coeffs);
            }
        }
    }

    pub fn krylov_dim(&self) -> usize {
        self.a.nrows()
    }

    fn lift(&self, y: &[C64]) -> Vec<C64> {
        let n = self.basis[0].len();
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (q, &c) in self.basis.iter().zip(y) {
            let c = c * self.beta;
            out.iter_mut().zip(q).for_each(|(o, x)| *o += c * x);
        }
        out
    }

    /// `exp(tL)v`.
    pub fn apply(&self, t: f64) -> Result<Vec<C64>> {
        let m = self.krylov_dim();
        Ok(self.lift(&mat_vec(&expm(&scaled(&self.a, t))?, &unit(m))))
    }

    /// `exp(tL)v` on a non-decreasing grid of times.
    pub fn apply_grid(&self, times: &[f64]) -> Result<Vec<Vec<C64>>> {
        let m = self.krylov_dim();
        let mut stepper = Stepper::new(&self.a);
        let mut y = unit(m);
        let mut t_prev = 0.0;
        let mut out = Vec::with_capacity(times.len());
        for &t in times {
            y = stepper.advance(&y, t - t_prev)?;
            t_prev = t;
            out.push(self.lift(&y));
        }
        Ok(out)
    }
}

fn unit(m: usize) -> Vec<C64> {
    let mut e = vec![C64::new(0.0, 0.0); m];
    e[0] = C64::new(1.0, 0.0);
    e
}

fn scaled(a: &Mat<C64>, t: f64) -> Mat<C64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * t)
}

fn projected(h: &[Vec<C64>], m: usize, gamma: f64) -> Result<Mat<C64>> {
    let hm = Mat::from_fn(m, m, |i, j| h[j].get(i).copied().unwrap_or_default());
    let inv = hm.partial_piv_lu().inverse();
    if inv.col_iter().any(|c| c.iter().any(|z| !z.is_finite())) {
        return Err(Error::Propagation("singular Krylov projection".into()));
    }
    Ok(Mat::from_fn(m, m, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        (C64::new(id, 0.0) - inv[(i, j)]) / gamma
    }))
}

/// Advances `y ← exp(Δt A) y`, reusing the exponential while the step size
/// stays the same.
pub(crate) struct Stepper<'a> {
    a: &'a Mat<C64>,
    cached: Option<(f64, Mat<C64>)>,
}

impl<'a> Stepper<'a> {
    pub(crate) fn new(a: &'a Mat<C64>) -> Self {
        Stepper { a, cached: None }
    }

    pub(crate) fn advance(&mut self, y: &[C64], dt: f64) -> Result<Vec<C64>> {
        if dt < 0.0 {
            return Err(Error::OutOfRange(format!("time grid must be non-decreasing (step {dt})")));
        }
        if dt == 0.0 {
            return Ok(y.to_vec());
        }
        let reuse = matches!(&self.cached, Some((h, _)) if (h - dt).abs() <= 1e-12 * dt);
        if !reuse {
            self.cached = Some((dt, expm(&scaled(self.a, dt))?));
        }
        let e = &self.cached.as_ref().expect("cached above").1;
        Ok(mat_vec(e, y))
    }
}
