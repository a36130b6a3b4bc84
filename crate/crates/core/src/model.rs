//! Physical parameters and the operators of the driven, damped cavity-EIT
//! system.
//!
//! All rates and detunings are in units of the cavity decay rate κ. The
//! interaction picture removes every absolute frequency, leaving the
//! detunings `delta` (|3> vs cavity) and `big_delta` (|4> vs |2> + photon).

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{
    annihilator, atomic_sigma, build_space, photon_number, HilbertSpace, Operator,
};

const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n_atoms: usize,
    /// Fock-space cutoff.
    pub n_max: usize,
    pub g13: f64,
    pub g24: f64,
    /// Half the coupling-field Rabi frequency.
    pub omega: f64,
    pub kappa: f64,
    pub gamma31: f64,
    pub gamma32: f64,
    pub gamma4: f64,
    pub delta: f64,
    pub big_delta: f64,
    pub eps_p: f64,
}

/// Default Fock cutoff for weak drive: 4 photons for one atom, 3 otherwise.
pub fn default_n_max(n_atoms: usize) -> usize {
    if n_atoms <= 1 {
        4
    } else {
        3
    }
}

impl ModelParams {
    /// Single-atom parameter set of the antibunching figure: g = 7.5κ,
    /// γ = 0.325κ, Ω = 2.5 γ31, ε_p = 0.1κ, on resonance.
    pub fn fig2() -> Self {
        ModelParams {
            n_atoms: 1,
            n_max: default_n_max(1),
            g13: 7.5,
            g24: 7.5,
            omega: 2.5 * 0.325,
            kappa: 1.0,
            gamma31: 0.325,
            gamma32: 0.325,
            gamma4: 0.325,
            delta: 0.0,
            big_delta: 0.0,
            eps_p: 0.1,
        }
    }

    /// Two-atom detuning-scan set: same rates as [`ModelParams::fig2`],
    /// Δ = 0 and ε_p = 0.01κ.
    pub fn fig3(delta: f64) -> Self {
        ModelParams {
            n_atoms: 2,
            n_max: default_n_max(2),
            delta,
            eps_p: 0.01,
            ..Self::fig2()
        }
    }

    /// Copy with every loss channel switched off (κ = γ = 0).
    pub fn lossless(&self) -> Self {
        ModelParams {
            kappa: 0.0,
            gamma31: 0.0,
            gamma32: 0.0,
            gamma4: 0.0,
            ..*self
        }
    }

    /// Checks the field invariants. κ = 0 is accepted here so that lossless
    /// spectral limits can be analysed; dynamics require κ > 0 separately.
    pub fn validate(&self) -> Result<()> {
        if self.n_atoms == 0 {
            return Err(Error::param("n_atoms", "must be at least 1"));
        }
        let rates = [
            ("g13", self.g13),
            ("g24", self.g24),
            ("omega", self.omega),
            ("kappa", self.kappa),
            ("gamma31", self.gamma31),
            ("gamma32", self.gamma32),
            ("gamma4", self.gamma4),
            ("eps_p", self.eps_p),
        ];
        for (key, v) in rates {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::param(key, format!("rate must be finite and >= 0, got {v}")));
            }
        }
        for (key, v) in [("delta", self.delta), ("big_delta", self.big_delta)] {
            if !v.is_finite() {
                return Err(Error::param(key, "must be finite"));
            }
        }
        Ok(())
    }

    /// Stricter validation used for driven-dissipative dynamics.
    pub fn validate_dissipative(&self) -> Result<()> {
        self.validate()?;
        if self.kappa <= 0.0 {
            return Err(Error::param("kappa", "must be > 0 for dissipative dynamics"));
        }
        Ok(())
    }

    /// `α = N g13² / Ω²`.
    pub fn alpha(&self) -> Result<f64> {
        if self.omega <= 0.0 {
            return Err(Error::param("omega", "must be > 0 (alpha undefined)"));
        }
        Ok(self.n_atoms as f64 * self.g13 * self.g13 / (self.omega * self.omega))
    }

    /// Kerr coefficient `χ = g24² / Δ`.
    pub fn chi(&self) -> Result<f64> {
        if self.big_delta == 0.0 {
            return Err(Error::ChiUndefined);
        }
        Ok(self.g24 * self.g24 / self.big_delta)
    }

    pub fn space(&self) -> Result<HilbertSpace> {
        self.validate()?;
        build_space(self.n_atoms, self.n_max)
    }

    fn check_space(&self, space: &HilbertSpace) -> Result<()> {
        if space.n_atoms() != self.n_atoms {
            return Err(Error::param(
                "n_atoms",
                format!("space has {} atoms, params {}", space.n_atoms(), self.n_atoms),
            ));
        }
        Ok(())
    }
}

fn sigma(space: &HilbertSpace, i: u8, j: u8, k: usize) -> Operator {
    atomic_sigma(space, i, j, k).expect("levels and atom index in range")
}

/// Hermitian Hamiltonian H₀ (in units of ħκ), optionally with the coherent
/// drive `i ε_p (a† − a)`.
pub fn hermitian_hamiltonian(p: &ModelParams, space: &HilbertSpace, with_drive: bool) -> Result<Operator> {
    p.validate()?;
    p.check_space(space)?;
    let a = annihilator(space);
    let ad = a.adjoint();
    let mut h = Operator::zero(space);
    for k in 1..=p.n_atoms {
        let s33 = sigma(space, 3, 3, k);
        let s44 = sigma(space, 4, 4, k);
        let control = &sigma(space, 3, 2, k) + &sigma(space, 2, 3, k);
        let probe = &(&a * &sigma(space, 3, 1, k)) + &(&ad * &sigma(space, 1, 3, k));
        let kerr_arm = &(&a * &sigma(space, 4, 2, k)) + &(&ad * &sigma(space, 2, 4, k));
        h = &h + &(&s33 * p.delta);
        h = &h + &(&s44 * p.big_delta);
        h = &h + &(&control * p.omega);
        h = &h + &(&probe * p.g13);
        h = &h + &(&kerr_arm * p.g24);
    }
    if with_drive {
        h = &h + &(&(&ad - &a) * (I * p.eps_p));
    }
    Ok(h)
}

/// Lindblad jump operators: cavity `√(2κ) a`, then per atom
/// `√γ31 σ13`, `√γ32 σ23`, `√γ4 σ24`. Zero-rate channels are omitted.
///
/// Level |4> is assumed to decay entirely to |2>.
pub fn jump_operators(p: &ModelParams, space: &HilbertSpace) -> Result<Vec<Operator>> {
    p.validate()?;
    p.check_space(space)?;
    let mut jumps = Vec::new();
    if p.kappa > 0.0 {
        jumps.push(&annihilator(space) * (2.0 * p.kappa).sqrt());
    }
    for k in 1..=p.n_atoms {
        for (rate, lower, upper) in [(p.gamma31, 1, 3), (p.gamma32, 2, 3), (p.gamma4, 2, 4)] {
            if rate > 0.0 {
                jumps.push(&sigma(space, lower, upper, k) * rate.sqrt());
            }
        }
    }
    Ok(jumps)
}

/// `Σ_c c†c` over all jump operators.
pub fn decay_operator(p: &ModelParams, space: &HilbertSpace) -> Result<Operator> {
    let mut total = Operator::zero(space);
    for c in jump_operators(p, space)? {
        total = &total + &(&c.adjoint() * &c);
    }
    Ok(total)
}

/// Non-Hermitian effective Hamiltonian `H₀ − (i/2) Σ c†c` (drive off).
pub fn effective_hamiltonian(p: &ModelParams, space: &HilbertSpace) -> Result<Operator> {
    let h0 = hermitian_hamiltonian(p, space, false)?;
    let decay = decay_operator(p, space)?;
    Ok(&h0 - &(&decay * (0.5 * I)))
}

/// Effective Hamiltonian with the g24 arm replaced by the dispersive Kerr
/// term `−χ a†a Σ σ22`.
pub fn kerr_effective_hamiltonian(p: &ModelParams, space: &HilbertSpace) -> Result<Operator> {
    let kerr = kerr_perturbation(p, space)?;
    let linear = ModelParams { g24: 0.0, ..*p };
    Ok(&effective_hamiltonian(&linear, space)? + &kerr)
}

/// Excitation number `a†a + Σ_k (σ22 + σ33 + 2 σ44)`; diagonal.
pub fn excitation_number(space: &HilbertSpace) -> Operator {
    let mut n = photon_number(space);
    for k in 1..=space.n_atoms() {
        n = &n + &sigma(space, 2, 2, k);
        n = &n + &sigma(space, 3, 3, k);
        n = &n + &(&sigma(space, 4, 4, k) * 2.0);
    }
    n
}

/// Excitation number of a single basis index, without building operators.
pub fn excitation_of(space: &HilbertSpace, index: usize) -> usize {
    let atomic: usize = (1..=space.n_atoms())
        .map(|k| match space.level_of(index, k) {
            1 => 0,
            2 | 3 => 1,
            _ => 2,
        })
        .sum();
    space.photons_of(index) + atomic
}

/// Dispersive photon–photon interaction `−χ a†a Σ_k σ22^k`.
pub fn kerr_perturbation(p: &ModelParams, space: &HilbertSpace) -> Result<Operator> {
    let chi = p.chi()?;
    p.check_space(space)?;
    let mut s22 = Operator::zero(space);
    for k in 1..=p.n_atoms {
        s22 = &s22 + &sigma(space, 2, 2, k);
    }
    Ok(&(&photon_number(space) * &s22) * -chi)
}
