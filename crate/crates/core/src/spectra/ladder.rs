//! The dressed n=0,1,2 ladder: anharmonicity, blockade rates and numerical
//! Kerr shifts.

use num_complex::Complex64 as C64;

use super::{diagonalize_manifold, manifold_block, trapping_state, ManifoldSpectrum};
use crate::error::{Error, Result};
use crate::hilbert::{build_space, creator, HilbertSpace, Operator};
use crate::model::{effective_hamiltonian, kerr_effective_hamiltonian, ModelParams};

/// Drive matrix elements smaller than this (relative to the largest) count
/// as forbidden transitions.
const FORBIDDEN_REL: f64 = 1e-8;

/// Diagonalised n=1 and n=2 manifolds with the trapping state identified.
///
/// Built on an `n_max = 2` space; the blocks do not depend on the cutoff.
#[derive(Clone, Debug)]
pub struct DressedLadder {
    pub params: ModelParams,
    pub space: HilbertSpace,
    pub one: ManifoldSpectrum,
    pub two: ManifoldSpectrum,
    /// Index of the trapping state within `one`.
    pub eit: usize,
    /// `|<R_eit|trapping>|`.
    pub eit_overlap: f64,
    creator: Operator,
}

impl DressedLadder {
    pub fn new(p: &ModelParams) -> Result<Self> {
        let params = ModelParams { n_max: 2, ..*p };
        let space = build_space(params.n_atoms, 2)?;
        let h = effective_hamiltonian(&params, &space)?;
        let one = diagonalize_manifold(&manifold_block(&h, 1)?)?;
        let two = diagonalize_manifold(&manifold_block(&h, 2)?)?;
        let dark = trapping_state(&params, &space, 1)?;
        let eit = one.identify(&dark)?;
        let eit_overlap = one.overlaps(&dark)[eit];
        Ok(DressedLadder {
            params,
            space,
            one,
            two,
            eit,
            eit_overlap,
            creator: creator(&space),
        })
    }

    pub fn eit_eigenvalue(&self) -> C64 {
        self.one.eigenvalues[self.eit]
    }

    /// `<L_eit| a† |0>`.
    pub fn ground_amplitude(&self) -> C64 {
        let up = self.creator.apply(&self.space.ground_vector());
        self.one.left_component(self.eit, &up)
    }

    /// `<L_f| a† |R_eit>` for every n=2 eigenstate `f`.
    pub fn second_photon_amplitudes(&self) -> Vec<C64> {
        let r = self.one.embed_right(self.eit, self.space.dim());
        let up = self.creator.apply(&r);
        (0..self.two.dim())
            .map(|f| self.two.left_component(f, &up))
            .collect()
    }

    /// n=2 states reachable from the trapping state by one more photon.
    pub fn allowed_targets(&self) -> Vec<usize> {
        let amps = self.second_photon_amplitudes();
        let scale = amps.iter().map(|a| a.norm()).fold(0.0, f64::max);
        (0..amps.len())
            .filter(|&f| amps[f].norm() > FORBIDDEN_REL * scale)
            .collect()
    }

    /// `|Re ε*₂ − 2 Re ε_eit|` over the allowed n=2 states.
    pub fn anharmonicity(&self) -> Result<f64> {
        let target = 2.0 * self.eit_eigenvalue().re;
        self.allowed_targets()
            .into_iter()
            .map(|f| (self.two.eigenvalues[f].re - target).abs())
            .min_by(f64::total_cmp)
            .ok_or_else(|| Error::TrappingState("no n=2 state reachable from the trapping state".into()))
    }
}

/// Anharmonicity of the dressed ladder seen from the trapping state.
pub fn anharmonicity(p: &ModelParams) -> Result<f64> {
    DressedLadder::new(p)?.anharmonicity()
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockadeReport {
    /// `Σ_f W_{1→2f} / W_{0→1}`.
    pub p: f64,
    /// `(n=2 eigenstate index, W_{1→2f})` for every n=2 state.
    pub rates: Vec<(usize, f64)>,
    pub w01: f64,
    pub anharmonicity: f64,
}

/// Weak-drive Lorentzian rate into a final state of complex energy `ef`
/// from an initial energy `ei`.
fn golden_rule(eps_p: f64, omega_drive: f64, ei: f64, ef: C64, amp: C64) -> f64 {
    let width = -2.0 * ef.im;
    let detuning = omega_drive - (ef.re - ei);
    eps_p * eps_p * amp.norm_sqr() * width / (detuning * detuning + width * width / 4.0)
}

impl DressedLadder {
    /// Golden-rule rates for a weak drive of strength `eps_p` tuned to the
    /// trapping line.
    pub fn blockade(&self, eps_p: f64) -> Result<BlockadeReport> {
        if !(eps_p > 0.0) {
            return Err(Error::param("eps_p", "blockade metric needs a nonzero drive"));
        }
        let e1 = self.eit_eigenvalue();
        if !(e1.im < 0.0) {
            return Err(Error::Premise(format!(
                "trapping state has no linewidth (eps = {e1}); the ground-state rate diverges"
            )));
        }
        let omega_drive = e1.re;
        let w01 = golden_rule(eps_p, omega_drive, 0.0, e1, self.ground_amplitude());
        if !(w01 > 0.0) {
            return Err(Error::Premise("trapping state is not driven from the ground state".into()));
        }
        let rates: Vec<(usize, f64)> = self
            .second_photon_amplitudes()
            .into_iter()
            .enumerate()
            .map(|(f, amp)| (f, golden_rule(eps_p, omega_drive, e1.re, self.two.eigenvalues[f], amp)))
            .collect();
        let total: f64 = rates.iter().map(|r| r.1).sum();
        Ok(BlockadeReport {
            p: total / w01,
            rates,
            w01,
            anharmonicity: self.anharmonicity()?,
        })
    }
}

/// Blockade figure of merit with the drive resonant on the trapping line.
pub fn blockade_figure(p: &ModelParams) -> Result<BlockadeReport> {
    if !(p.eps_p > 0.0) {
        return Err(Error::param("eps_p", "blockade metric needs a nonzero drive"));
    }
    DressedLadder::new(p)?.blockade(p.eps_p)
}

/// Which Hamiltonian the numerical shift is taken from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftModel {
    /// Full four-level model with level |4> at detuning Δ.
    FourLevel,
    /// Adiabatically eliminated |4>: `−χ a†a Σ σ22`.
    Kerr,
}

/// Numerical level shift of the two-trapping-excitation state caused by
/// the g24 arm: `Re ε(g24) − Re ε(g24 = 0)`, each `ε` being the n=2
/// eigenvalue whose eigenvector best matches the normalised two-excitation
/// trapping state.
///
/// With cavity loss and `δ ≠ 0` that state is not an exact eigenvector and
/// its level already sits away from zero, so the reference is the
/// unperturbed eigenvalue rather than the bare expectation value.
pub fn kerr_shift_numeric(p: &ModelParams, model: ShiftModel) -> Result<f64> {
    let params = ModelParams { n_max: 2, ..*p };
    let space = build_space(params.n_atoms, 2)?;
    let v = trapping_state(&params, &space, 2)?;
    let level = |h: &Operator| -> Result<f64> {
        let spec = diagonalize_manifold(&manifold_block(h, 2)?)?;
        Ok(spec.eigenvalues[spec.identify(&v)?].re)
    };
    let h = match model {
        ShiftModel::FourLevel => effective_hamiltonian(&params, &space)?,
        ShiftModel::Kerr => kerr_effective_hamiltonian(&params, &space)?,
    };
    let unperturbed = effective_hamiltonian(&ModelParams { g24: 0.0, ..params }, &space)?;
    Ok(level(&h)? - level(&unperturbed)?)
}
