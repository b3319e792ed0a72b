//! Step-traced LOCC protocols.
//!
//! A protocol runs on a register of labelled sites, each owned by Alice or
//! Bob. Unitaries and measurements may only touch sites owned by the acting
//! party; a site may change hands only through the classical channel, which
//! accepts a subsystem only when the global state is already invariant under
//! dephasing it in the computational basis. The channel then dephases it
//! again, which is idempotent on admissible inputs.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmat::{digits, von_neumann_entropy, ComplexMatrix, C64};

mod complementarity;
mod concentration;
mod extraction;
mod teleport;

pub use complementarity::{
    check_tradeoff, complementarity_check, complementarity_check_resource, Bound,
    ComplementarityReport, Extraction, PureResource,
};
pub use concentration::{
    asymptotic_rate, concentration_outcomes, fit_gap_constant, tradeoff_ledger, AsymptoticRate,
    ConcentrationOutcome, TradeoffLedger,
};
pub use extraction::singlet_extraction;
pub use teleport::teleport;

/// Off-diagonal weight tolerated on a subsystem handed to the classical channel.
pub const CLASSICAL_CHANNEL_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Actor {
    Alice,
    Bob,
}

impl Actor {
    pub fn other(self) -> Self {
        match self {
            Actor::Alice => Actor::Bob,
            Actor::Bob => Actor::Alice,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    LocalUnitary,
    LocalMeasurement,
    Dephase,
    SendClassical,
    SendDephasedQubit,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Payload {
    Operator { name: String, sites: Vec<usize>, matrix: ComplexMatrix },
    /// Unitary on `target` selected by the computational-basis value of the
    /// classical registers `controls`.
    Conditioned { name: String, controls: Vec<usize>, target: Vec<usize> },
    Basis { name: String, site: usize },
    Message { sites: Vec<usize>, bits: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProtocolStep {
    pub label: String,
    pub actor: Actor,
    pub kind: StepKind,
    pub payload: Payload,
    pub state_after: ComplexMatrix,
    pub entropy_after: f64,
    /// Entropy handed to the environment by this step (bits).
    pub entropy_delta_environment: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Site {
    pub name: String,
    pub dim: usize,
    pub initial_owner: Actor,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TraceDeltas {
    pub classical_bits_gained: f64,
    pub singlets_gained: f64,
    pub singlets_spent: f64,
    pub bits_dephased: f64,
    pub message_bits: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProtocolTrace {
    pub protocol: String,
    pub sites: Vec<Site>,
    pub initial: ComplexMatrix,
    pub steps: Vec<ProtocolStep>,
    pub final_state: ComplexMatrix,
    pub deltas: TraceDeltas,
    pub notes: Vec<String>,
}

impl ProtocolTrace {
    pub fn final_reduced(&self, keep: &[usize]) -> ComplexMatrix {
        self.final_state.partial_trace(keep).expect("trace sites are valid")
    }

    pub fn step(&self, label: &str) -> Option<&ProtocolStep> {
        self.steps.iter().find(|s| s.label == label)
    }

    /// Largest off-diagonal residue left on any transmitted subsystem, taken
    /// over every send step. Zero for a faithful LOCC run.
    pub fn channel_violation(&self) -> f64 {
        let mut worst = 0.0f64;
        let mut before = &self.initial;
        for step in &self.steps {
            if let (StepKind::SendClassical | StepKind::SendDephasedQubit, Payload::Message { sites, .. }) =
                (step.kind, &step.payload)
            {
                for &site in sites {
                    worst = worst.max(coherence_on(before, site).unwrap_or(f64::INFINITY));
                }
            }
            before = &step.state_after;
        }
        worst
    }

    /// Largest deviation of any intermediate trace from one.
    pub fn trace_drift(&self) -> f64 {
        self.steps
            .iter()
            .map(|s| (s.state_after.trace() - C64::new(1.0, 0.0)).norm())
            .fold(0.0, f64::max)
    }
}

fn computational_basis(dim: usize) -> DMatrix<C64> {
    DMatrix::identity(dim, dim)
}

/// max |ρ − D_site(ρ)|, the coherence carried by one subsystem.
fn coherence_on(state: &ComplexMatrix, site: usize) -> Result<f64> {
    let dim = state.dims()[site];
    let dephased = state.dephase(site, &computational_basis(dim))?;
    Ok(state.max_abs_diff(&dephased))
}

/// Executes local steps on a register and records the trace.
pub(crate) struct LoccRun {
    sites: Vec<Site>,
    owners: Vec<Actor>,
    announced: Vec<bool>,
    initial: ComplexMatrix,
    state: ComplexMatrix,
    entropy: f64,
    steps: Vec<ProtocolStep>,
}

impl LoccRun {
    pub fn new(sites: Vec<Site>, initial: ComplexMatrix) -> Result<Self> {
        let dims: Vec<usize> = sites.iter().map(|s| s.dim).collect();
        let initial = initial.with_dims(&dims)?;
        let entropy = von_neumann_entropy(&initial)?;
        Ok(Self {
            owners: sites.iter().map(|s| s.initial_owner).collect(),
            announced: vec![false; sites.len()],
            sites,
            state: initial.clone(),
            initial,
            entropy,
            steps: Vec::new(),
        })
    }

    pub fn dims(&self) -> Vec<usize> {
        self.sites.iter().map(|s| s.dim).collect()
    }

    pub fn state(&self) -> &ComplexMatrix {
        &self.state
    }

    fn require_owned(&self, actor: Actor, sites: &[usize]) -> Result<()> {
        for &s in sites {
            if self.owners.get(s) != Some(&actor) {
                return Err(Error::LoccViolation(format!(
                    "{actor:?} acts on site {} held by {:?}",
                    self.sites.get(s).map_or("?", |x| x.name.as_str()),
                    self.owners.get(s)
                )));
            }
        }
        Ok(())
    }

    fn record(
        &mut self,
        label: &str,
        actor: Actor,
        kind: StepKind,
        payload: Payload,
        next: ComplexMatrix,
    ) -> Result<()> {
        let entropy = von_neumann_entropy(&next)?;
        let delta = entropy - self.entropy;
        // Unitaries and idempotent channel dephasing leave the entropy fixed;
        // report exact zero rather than eigensolver noise.
        let delta = match kind {
            StepKind::Dephase | StepKind::LocalMeasurement => delta,
            _ => 0.0,
        };
        self.steps.push(ProtocolStep {
            label: label.to_string(),
            actor,
            kind,
            payload,
            state_after: next.clone(),
            entropy_after: entropy,
            entropy_delta_environment: delta,
        });
        self.state = next;
        self.entropy = entropy;
        Ok(())
    }

    pub fn unitary(
        &mut self,
        label: &str,
        actor: Actor,
        name: &str,
        op: &ComplexMatrix,
        sites: &[usize],
    ) -> Result<()> {
        self.require_owned(actor, sites)?;
        let full = op.embed(sites, &self.dims())?;
        let next = &(&full * &self.state) * &full.dagger();
        let payload =
            Payload::Operator { name: name.to_string(), sites: sites.to_vec(), matrix: op.clone() };
        self.record(label, actor, StepKind::LocalUnitary, payload, next)
    }

    /// Dephases a site in the computational basis. `kind` distinguishes a
    /// plain decoherence step from a measurement whose record is kept.
    pub fn dephase(&mut self, label: &str, actor: Actor, site: usize, kind: StepKind) -> Result<()> {
        self.require_owned(actor, &[site])?;
        let dim = self.sites[site].dim;
        let next = self.state.dephase(site, &computational_basis(dim))?;
        let payload = Payload::Basis { name: "computational".into(), site };
        self.record(label, actor, kind, payload, next)
    }

    fn channel(&self, from: Actor, sites: &[usize]) -> Result<ComplexMatrix> {
        self.require_owned(from, sites)?;
        let mut next = self.state.clone();
        for &site in sites {
            let residue = coherence_on(&next, site)?;
            if residue > CLASSICAL_CHANNEL_TOL {
                return Err(Error::LoccViolation(format!(
                    "site {} carries coherence {residue:e} into the classical channel",
                    self.sites[site].name
                )));
            }
            next = next.dephase(site, &computational_basis(self.sites[site].dim))?;
        }
        Ok(next)
    }

    /// Hands a dephased subsystem to the other party.
    pub fn send_qubit(&mut self, label: &str, from: Actor, site: usize) -> Result<()> {
        let next = self.channel(from, &[site])?;
        self.owners[site] = from.other();
        let bits = (self.sites[site].dim as f64).log2();
        let payload = Payload::Message { sites: vec![site], bits };
        self.record(label, from, StepKind::SendDephasedQubit, payload, next)
    }

    /// Announces the values of classical registers to the other party; the
    /// registers stay where they are.
    pub fn send_classical(&mut self, label: &str, from: Actor, sites: &[usize]) -> Result<()> {
        let next = self.channel(from, sites)?;
        for &s in sites {
            self.announced[s] = true;
        }
        let bits = sites.iter().map(|&s| (self.sites[s].dim as f64).log2()).sum();
        let payload = Payload::Message { sites: sites.to_vec(), bits };
        self.record(label, from, StepKind::SendClassical, payload, next)
    }

    /// Applies `branch(values)` to `target`, where `values` are the announced
    /// classical contents of `controls`.
    pub fn conditioned<F>(
        &mut self,
        label: &str,
        actor: Actor,
        name: &str,
        controls: &[usize],
        target: &[usize],
        branch: F,
    ) -> Result<()>
    where
        F: Fn(&[usize]) -> ComplexMatrix,
    {
        self.require_owned(actor, target)?;
        for &c in controls {
            let known = self.owners[c] == actor || self.announced[c];
            if !known {
                return Err(Error::LoccViolation(format!(
                    "{actor:?} conditions on unannounced register {}",
                    self.sites[c].name
                )));
            }
            let residue = coherence_on(&self.state, c)?;
            if residue > CLASSICAL_CHANNEL_TOL {
                return Err(Error::LoccViolation(format!(
                    "control register {} is not classical ({residue:e})",
                    self.sites[c].name
                )));
            }
        }
        let dims = self.dims();
        let control_dims: Vec<usize> = controls.iter().map(|&c| dims[c]).collect();
        let target_dim: usize = target.iter().map(|&t| dims[t]).product();
        let control_dim: usize = control_dims.iter().product();
        let mut op = DMatrix::zeros(control_dim * target_dim, control_dim * target_dim);
        for m in 0..control_dim {
            let values = digits(m, &control_dims);
            let u = branch(&values);
            if u.dim() != target_dim {
                return Err(Error::DimensionMismatch(format!(
                    "branch operator of dimension {} for target of dimension {target_dim}",
                    u.dim()
                )));
            }
            op.view_mut((m * target_dim, m * target_dim), (target_dim, target_dim))
                .copy_from(u.data());
        }
        let mut sites = controls.to_vec();
        sites.extend_from_slice(target);
        let full = ComplexMatrix::plain(op).embed(&sites, &dims)?;
        let next = &(&full * &self.state) * &full.dagger();
        let payload = Payload::Conditioned {
            name: name.to_string(),
            controls: controls.to_vec(),
            target: target.to_vec(),
        };
        self.record(label, actor, StepKind::LocalUnitary, payload, next)
    }

    pub fn finish(self, protocol: &str, deltas: TraceDeltas, notes: Vec<String>) -> ProtocolTrace {
        ProtocolTrace {
            protocol: protocol.to_string(),
            sites: self.sites,
            initial: self.initial,
            steps: self.steps,
            final_state: self.state,
            deltas,
            notes,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::hadamard;
    use crate::qmat::basis_ket;

    fn two_sites() -> Vec<Site> {
        vec![
            Site { name: "A".into(), dim: 2, initial_owner: Actor::Alice },
            Site { name: "B".into(), dim: 2, initial_owner: Actor::Bob },
        ]
    }

    #[test]
    fn foreign_site_is_rejected() {
        let init = ComplexMatrix::projector(&basis_ket(4, 0), &[2, 2]).unwrap();
        let mut run = LoccRun::new(two_sites(), init).unwrap();
        let err = run.unitary("x", Actor::Alice, "H", &hadamard(), &[1]);
        assert!(matches!(err, Err(Error::LoccViolation(_))));
    }

    #[test]
    fn coherent_qubit_cannot_enter_channel() {
        let init = ComplexMatrix::projector(&basis_ket(4, 0), &[2, 2]).unwrap();
        let mut run = LoccRun::new(two_sites(), init).unwrap();
        run.unitary("h", Actor::Alice, "H", &hadamard(), &[0]).unwrap();
        assert!(matches!(run.send_qubit("s", Actor::Alice, 0), Err(Error::LoccViolation(_))));
        run.dephase("d", Actor::Alice, 0, StepKind::Dephase).unwrap();
        run.send_qubit("s", Actor::Alice, 0).unwrap();
        // Bob now owns both sites.
        run.unitary("h2", Actor::Bob, "H", &hadamard(), &[0]).unwrap();
    }

    #[test]
    fn conditioning_requires_announcement() {
        let init = ComplexMatrix::projector(&basis_ket(4, 2), &[2, 2]).unwrap();
        let mut run = LoccRun::new(two_sites(), init).unwrap();
        let flip = |v: &[usize]| if v[0] == 1 { crate::ops::sigma_x() } else { crate::ops::identity2() };
        assert!(run.conditioned("c", Actor::Bob, "X", &[0], &[1], flip).is_err());
        run.send_classical("m", Actor::Alice, &[0]).unwrap();
        run.conditioned("c", Actor::Bob, "X", &[0], &[1], flip).unwrap();
        assert!((run.state().get(3, 3).re - 1.0).abs() < 1e-15);
    }
}
