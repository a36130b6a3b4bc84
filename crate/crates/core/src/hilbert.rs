//! Tensor-product state space of one cavity mode and `N` four-level atoms.
//!
//! Basis ordering is fixed: the photon number is the slowest index, followed
//! by atom 1, atom 2, ..., atom N (fastest). Atomic levels are labelled
//! 1..=4. Index `0` is the global ground state `|0; 1 1 ... 1>`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

pub const DEFAULT_DIM_CAP: usize = 10_000;

/// Number of internal levels per atom.
pub const LEVELS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HilbertSpace {
    n_atoms: usize,
    n_max: usize,
    dim: usize,
}

/// Photon number and the level (1..=4) of every atom.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub photons: usize,
    pub levels: Vec<u8>,
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{};", self.photons)?;
        for l in &self.levels {
            write!(f, "{l}")?;
        }
        write!(f, ">")
    }
}

/// Builds the space with the default dimension cap.
pub fn build_space(n_atoms: usize, n_max: usize) -> Result<HilbertSpace> {
    HilbertSpace::with_cap(n_atoms, n_max, DEFAULT_DIM_CAP)
}

impl HilbertSpace {
    pub fn with_cap(n_atoms: usize, n_max: usize, cap: usize) -> Result<Self> {
        if n_atoms == 0 {
            return Err(Error::param("n_atoms", "must be at least 1"));
        }
        let dim = u32::try_from(n_atoms)
            .ok()
            .and_then(|n| LEVELS.checked_pow(n))
            .and_then(|atoms| atoms.checked_mul(n_max + 1))
            .ok_or(Error::DimensionCap {
                dim: usize::MAX,
                cap,
            })?;
        if dim > cap {
            return Err(Error::DimensionCap { dim, cap });
        }
        Ok(HilbertSpace { n_atoms, n_max, dim })
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the atomic factor, `4^N`.
    pub fn atomic_dim(&self) -> usize {
        self.dim / (self.n_max + 1)
    }

    /// Index stride of atom `k` (1-based).
    fn atom_stride(&self, k: usize) -> usize {
        LEVELS.pow((self.n_atoms - k) as u32)
    }

    pub fn label(&self, index: usize) -> BasisLabel {
        assert!(index < self.dim, "basis index {index} out of range");
        let atomic = self.atomic_dim();
        let photons = index / atomic;
        let mut rest = index % atomic;
        let levels = (1..=self.n_atoms)
            .map(|k| {
                let s = self.atom_stride(k);
                let l = rest / s;
                rest %= s;
                (l + 1) as u8
            })
            .collect();
        BasisLabel { photons, levels }
    }

    pub fn index(&self, label: &BasisLabel) -> Option<usize> {
        if label.photons > self.n_max || label.levels.len() != self.n_atoms {
            return None;
        }
        let mut idx = label.photons * self.atomic_dim();
        for (k, &l) in label.levels.iter().enumerate() {
            if !(1..=LEVELS as u8).contains(&l) {
                return None;
            }
            idx += (l as usize - 1) * self.atom_stride(k + 1);
        }
        Some(idx)
    }

    pub fn labels(&self) -> impl Iterator<Item = BasisLabel> + '_ {
        (0..self.dim).map(move |i| self.label(i))
    }

    /// Level of atom `k` (1-based) in basis state `index`.
    pub fn level_of(&self, index: usize, k: usize) -> u8 {
        let within = index % self.atomic_dim();
        ((within / self.atom_stride(k)) % LEVELS) as u8 + 1
    }

    pub fn photons_of(&self, index: usize) -> usize {
        index / self.atomic_dim()
    }

    /// Unit vector for a basis label.
    pub fn basis_vector(&self, label: &BasisLabel) -> Option<Vec<C64>> {
        let i = self.index(label)?;
        let mut v = vec![C64::new(0.0, 0.0); self.dim];
        v[i] = C64::new(1.0, 0.0);
        Some(v)
    }

    /// `|0; 1 ... 1>`.
    pub fn ground_vector(&self) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); self.dim];
        v[0] = C64::new(1.0, 0.0);
        v
    }
}

/// Sparse operator on a [`HilbertSpace`].
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    space: HilbertSpace,
    matrix: CsrMatrix,
}

impl Operator {
    pub fn from_matrix(space: HilbertSpace, matrix: CsrMatrix) -> Result<Self> {
        if matrix.nrows() != space.dim() || matrix.ncols() != space.dim() {
            return Err(Error::DimensionMismatch {
                left: space.dim(),
                right: matrix.nrows(),
            });
        }
        Ok(Operator { space, matrix })
    }

    pub fn zero(space: &HilbertSpace) -> Self {
        Operator {
            space: *space,
            matrix: CsrMatrix::zeros(space.dim(), space.dim()),
        }
    }

    pub fn identity(space: &HilbertSpace) -> Self {
        Operator {
            space: *space,
            matrix: CsrMatrix::identity(space.dim()),
        }
    }

    fn from_entries<I>(space: &HilbertSpace, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, C64)>,
    {
        Operator {
            space: *space,
            matrix: CsrMatrix::from_triplets(space.dim(), space.dim(), entries),
        }
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn nnz(&self) -> usize {
        self.matrix.nnz()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix.get(row, col)
    }

    pub fn adjoint(&self) -> Operator {
        Operator {
            space: self.space,
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        self.matrix.matvec(v)
    }

    pub fn commutator(&self, other: &Operator) -> Operator {
        &(self * other) - &(other * self)
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.max_abs()
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        self.matrix.max_abs_diff(&other.matrix)
    }

    /// Largest entry of `A - A†`.
    pub fn hermiticity_error(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    fn check_space(&self, other: &Operator) {
        assert_eq!(
            self.space, other.space,
            "operators live on different Hilbert spaces"
        );
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        self.check_space(rhs);
        Operator {
            space: self.space,
            matrix: self
                .matrix
                .add_scaled(&rhs.matrix, C64::new(1.0, 0.0))
                .expect("same space"),
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        self.check_space(rhs);
        Operator {
            space: self.space,
            matrix: self
                .matrix
                .add_scaled(&rhs.matrix, C64::new(-1.0, 0.0))
                .expect("same space"),
        }
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.check_space(rhs);
        Operator {
            space: self.space,
            matrix: self.matrix.matmul(&rhs.matrix).expect("same space"),
        }
    }
}

impl Mul<C64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: C64) -> Operator {
        Operator {
            space: self.space,
            matrix: self.matrix.scale(rhs),
        }
    }
}

impl Mul<f64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: f64) -> Operator {
        self * C64::new(rhs, 0.0)
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self * -1.0
    }
}

/// Cavity annihilation operator `a`; the top Fock level is truncated.
pub fn annihilator(space: &HilbertSpace) -> Operator {
    let atomic = space.atomic_dim();
    let entries = (atomic..space.dim()).map(|col| {
        let n = space.photons_of(col);
        (col - atomic, col, C64::new((n as f64).sqrt(), 0.0))
    });
    Operator::from_entries(space, entries)
}

pub fn creator(space: &HilbertSpace) -> Operator {
    annihilator(space).adjoint()
}

/// Diagonal photon-number operator `a†a`.
pub fn photon_number(space: &HilbertSpace) -> Operator {
    let entries = (0..space.dim())
        .filter_map(|i| {
            let n = space.photons_of(i);
            (n > 0).then(|| (i, i, C64::new(n as f64, 0.0)))
        })
        .collect::<Vec<_>>();
    Operator::from_entries(space, entries)
}

/// `|i><j|` acting on atom `k` (1-based), identity on every other factor.
pub fn atomic_sigma(space: &HilbertSpace, i: u8, j: u8, k: usize) -> Result<Operator> {
    let valid = 1..=LEVELS as u8;
    if !valid.contains(&i) || !valid.contains(&j) {
        return Err(Error::OutOfRange(format!(
            "atomic levels ({i},{j}) must lie in 1..=4"
        )));
    }
    if k == 0 || k > space.n_atoms() {
        return Err(Error::OutOfRange(format!(
            "atom index {k} not in 1..={}",
            space.n_atoms()
        )));
    }
    let stride = space.atom_stride(k);
    let shift = (i as isize - j as isize) * stride as isize;
    let entries = (0..space.dim())
        .filter(|&col| space.level_of(col, k) == j)
        .map(|col| ((col as isize + shift) as usize, col, C64::new(1.0, 0.0)))
        .collect::<Vec<_>>();
    Ok(Operator::from_entries(space, entries))
}

/// `Σ_k σ_ij^k` over all atoms.
pub fn collective_sigma(space: &HilbertSpace, i: u8, j: u8) -> Result<Operator> {
    let mut total = Operator::zero(space);
    for k in 1..=space.n_atoms() {
        total = &total + &atomic_sigma(space, i, j, k)?;
    }
    Ok(total)
}

/// Normalizes a state vector in place and returns the original norm.
pub fn normalize(v: &mut [C64]) -> f64 {
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

/// `<u|v>` with `u` conjugated.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}
