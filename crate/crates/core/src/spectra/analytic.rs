//! Closed-form eigenvalues and level shifts used as oracles for the
//! numerical manifolds.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Approximate n=1 eigenvalues: the trapping state and the two bright
/// polaritons.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct N1Eigenvalues {
    pub trapping: C64,
    pub lower: C64,
    pub upper: C64,
}

impl N1Eigenvalues {
    pub fn as_array(&self) -> [C64; 3] {
        [self.lower, self.trapping, self.upper]
    }
}

/// n=1 eigenvalues for vanishing atomic damping and detuning:
/// `ε0 = −iκ/(1+α)`, `ε± = −iκ/2 ± Ω √(1 + α − (κ/2Ω)²)`.
pub fn analytic_n1(p: &ModelParams) -> Result<N1Eigenvalues> {
    let alpha = p.alpha()?;
    let k = p.kappa;
    let arg = C64::new(1.0 + alpha - (k / (2.0 * p.omega)).powi(2), 0.0);
    let split = arg.sqrt() * p.omega;
    let half = C64::new(0.0, -k / 2.0);
    Ok(N1Eigenvalues {
        trapping: C64::new(0.0, -k / (1.0 + alpha)),
        lower: half - split,
        upper: half + split,
    })
}

/// Exact n=2 eigenvalues of the lossless, resonant single-atom system,
/// ascending: `±√(G²/2 ± √(G⁴/4 − 2 g13² g24²))` with
/// `G² = g24² + Ω² + 2 g13²`.
pub fn analytic_n2_lossless(p: &ModelParams) -> Result<[f64; 4]> {
    p.validate()?;
    if p.n_atoms != 1 {
        return Err(Error::param("n_atoms", "closed-form n=2 spectrum needs a single atom"));
    }
    for (key, v) in [
        ("kappa", p.kappa),
        ("gamma31", p.gamma31),
        ("gamma32", p.gamma32),
        ("gamma4", p.gamma4),
        ("delta", p.delta),
        ("big_delta", p.big_delta),
    ] {
        if v != 0.0 {
            return Err(Error::param(key, "closed-form n=2 spectrum needs zero losses and detunings"));
        }
    }
    let g2 = p.g24 * p.g24 + p.omega * p.omega + 2.0 * p.g13 * p.g13;
    let disc = (g2 * g2 / 4.0 - 2.0 * (p.g13 * p.g24).powi(2)).max(0.0).sqrt();
    let inner = (g2 / 2.0 - disc).max(0.0).sqrt();
    let outer = (g2 / 2.0 + disc).sqrt();
    Ok([-outer, -inner, inner, outer])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftBranch {
    /// One atom: `−χ 2α/(1+2α)`.
    SingleAtom,
    /// Several atoms with the probe detuned from the bright states:
    /// `−2χ α/(1+α)²`.
    MultiAtom,
    /// Several atoms at `δ ≈ 0`, where degenerate states mix: 3/2 of the
    /// multi-atom value.
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PerturbativeShift {
    pub value: f64,
    pub branch: ShiftBranch,
    /// False when `|Δ| < 10 g24`, i.e. outside the dispersive regime.
    pub premise_holds: bool,
}

/// Dispersive level shift of the two-trapping-excitation state.
pub fn perturbative_shift(p: &ModelParams) -> Result<PerturbativeShift> {
    let chi = p.chi()?;
    let alpha = p.alpha()?;
    let premise_holds = p.big_delta.abs() >= 10.0 * p.g24;
    if !premise_holds {
        log::warn!(
            "perturbative shift requested with |big_delta| = {} < 10 g24 = {}",
            p.big_delta.abs(),
            10.0 * p.g24
        );
    }
    let (value, branch) = if p.n_atoms == 1 {
        (-chi * 2.0 * alpha / (1.0 + 2.0 * alpha), ShiftBranch::SingleAtom)
    } else {
        let multi = -2.0 * chi * alpha / (1.0 + alpha).powi(2);
        if p.delta.abs() > 10.0 * multi.abs() {
            (multi, ShiftBranch::MultiAtom)
        } else {
            (1.5 * multi, ShiftBranch::Degenerate)
        }
    };
    Ok(PerturbativeShift {
        value,
        branch,
        premise_holds,
    })
}
