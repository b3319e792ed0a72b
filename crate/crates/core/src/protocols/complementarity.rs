//! Complementarity inequalities between extracted singlets and extracted
//! classical information, for pure resources.
//!
//! For a pure resource E_f = E_D = S_A and I_c = n − S_A, so all entropic
//! forms reduce to closed expressions in (n, S_A, log₂ d).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ledger::pure_state_quantities;
use crate::qmat::{binary_entropy, BipartiteState};

use super::TradeoffLedger;

/// Tolerance on every complementarity margin.
pub const MARGIN_TOL: f64 = 1e-9;

/// A pure bipartite resource (possibly many copies) described by its
/// information content.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PureResource {
    /// Total number of qubits n.
    pub qubits: f64,
    /// E_D = E_f = S_A.
    pub entanglement: f64,
    /// log₂ of the smaller local dimension.
    pub log2_local_dim: f64,
}

impl PureResource {
    pub fn of_state(s: &BipartiteState) -> Result<Self> {
        if !s.is_pure() {
            return Err(Error::MixedStateUnsupported);
        }
        let q = pure_state_quantities(s)?;
        let [da, db] = s.dims();
        Ok(Self {
            qubits: ((da * db) as f64).log2(),
            entanglement: q.e_d,
            log2_local_dim: (da.min(db) as f64).log2(),
        })
    }

    /// `n` copies of √a2|00⟩ + √(1−a2)|11⟩.
    pub fn copies(n: usize, a2: f64) -> Self {
        Self {
            qubits: 2.0 * n as f64,
            entanglement: n as f64 * binary_entropy(a2),
            log2_local_dim: n as f64,
        }
    }

    pub fn i_c(&self) -> f64 {
        self.qubits - self.entanglement
    }

    pub fn i_lo(&self) -> f64 {
        self.qubits - 2.0 * self.entanglement
    }

    pub fn delta_c(&self) -> f64 {
        self.i_c() - self.i_lo()
    }
}

/// What a process 𝒫 extracted: singlets E_D(𝒫) and classical bits I_c(𝒫).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Extraction {
    pub e_d: f64,
    pub i_c: f64,
}

impl From<&TradeoffLedger> for Extraction {
    fn from(l: &TradeoffLedger) -> Self {
        Self { e_d: l.e_d_p, i_c: l.classical() }
    }
}

/// One inequality `lhs ≤ rhs` (or `lhs ≥ rhs`), with the signed slack.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bound {
    pub lhs: f64,
    pub rhs: f64,
    /// Nonnegative when the inequality holds.
    pub margin: f64,
    pub holds: bool,
}

impl Bound {
    fn at_most(lhs: f64, rhs: f64) -> Self {
        let margin = rhs - lhs;
        Self { lhs, rhs, margin, holds: margin >= -MARGIN_TOL }
    }

    fn at_least(lhs: f64, rhs: f64) -> Self {
        let margin = lhs - rhs;
        Self { lhs, rhs, margin, holds: margin >= -MARGIN_TOL }
    }

    pub fn saturated(&self, tol: f64) -> bool {
        self.margin.abs() <= tol
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplementarityReport {
    pub resource: PureResource,
    pub extraction: Extraction,
    /// I_c(𝒫) − I_LO
    pub i_cor: f64,
    /// n − I_c(𝒫)
    pub h_locc: f64,
    /// E_f − E_D(𝒫)
    pub h_b: f64,
    /// E_D(𝒫) + I_c(𝒫) ≤ I_c
    pub total: Bound,
    /// E_D(𝒫) + I_cor(𝒫) ≤ Δ_c
    pub correlations: Bound,
    /// E_D(𝒫) + I_cor(𝒫) ≤ log₂ d
    pub constant: Bound,
    /// H_LOCC + H_B ≥ n + E_f − I_c
    pub entropic: Bound,
    /// H_LOCC + H_B ≥ 2 E_D
    pub entropic_pure: Bound,
}

impl ComplementarityReport {
    pub fn all_hold(&self) -> bool {
        [self.total, self.correlations, self.constant, self.entropic, self.entropic_pure]
            .iter()
            .all(|b| b.holds)
    }
}

pub fn complementarity_check_resource(r: &PureResource, x: Extraction) -> ComplementarityReport {
    let i_cor = x.i_c - r.i_lo();
    let h_locc = r.qubits - x.i_c;
    let h_b = r.entanglement - x.e_d;
    ComplementarityReport {
        resource: *r,
        extraction: x,
        i_cor,
        h_locc,
        h_b,
        total: Bound::at_most(x.e_d + x.i_c, r.i_c()),
        correlations: Bound::at_most(x.e_d + i_cor, r.delta_c()),
        constant: Bound::at_most(x.e_d + i_cor, r.log2_local_dim),
        entropic: Bound::at_least(h_locc + h_b, r.qubits + r.entanglement - r.i_c()),
        entropic_pure: Bound::at_least(h_locc + h_b, 2.0 * r.entanglement),
    }
}

/// Checks a process outcome against a single pure state.
pub fn complementarity_check(psi: &BipartiteState, x: Extraction) -> Result<ComplementarityReport> {
    Ok(complementarity_check_resource(&PureResource::of_state(psi)?, x))
}

/// Checks a concentration ledger against n copies of its source state.
pub fn check_tradeoff(l: &TradeoffLedger) -> ComplementarityReport {
    complementarity_check_resource(&PureResource::copies(l.n, l.a2), Extraction::from(l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::tradeoff_ledger;
    use approx::assert_abs_diff_eq;

    #[test]
    fn singlet_teleport_choice_saturates_constant_bound() {
        let r = complementarity_check(&BipartiteState::singlet(), Extraction { e_d: 1.0, i_c: 0.0 })
            .unwrap();
        assert_abs_diff_eq!(r.constant.lhs, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r.constant.rhs, 1.0, epsilon = 1e-9);
        assert!(r.constant.saturated(1e-9));
        assert!(r.all_hold());
    }

    #[test]
    fn singlet_extraction_choice_saturates_total_bound() {
        let r = complementarity_check(&BipartiteState::singlet(), Extraction { e_d: 0.0, i_c: 1.0 })
            .unwrap();
        assert_abs_diff_eq!(r.total.rhs, 1.0, epsilon = 1e-9);
        assert!(r.total.saturated(1e-9));
        assert!(r.all_hold());
    }

    #[test]
    fn violation_is_reported() {
        let r = complementarity_check(&BipartiteState::singlet(), Extraction { e_d: 1.0, i_c: 1.0 })
            .unwrap();
        assert!(!r.total.holds);
        assert!(!r.all_hold());
    }

    #[test]
    fn mixed_input_unsupported() {
        let s = BipartiteState::maximally_mixed([2, 2]);
        let r = complementarity_check(&s, Extraction { e_d: 0.0, i_c: 0.0 });
        assert_eq!(r, Err(Error::MixedStateUnsupported));
    }

    #[test]
    fn concentration_margin_matches_closed_form() {
        let l = tradeoff_ledger(9, 0.3, &[2, 4, 5]).unwrap();
        let r = check_tradeoff(&l);
        let closed = (2.0 * 9.0 - l.closed_form) - 9.0 * binary_entropy(0.3);
        assert_abs_diff_eq!(r.total.margin, closed, epsilon = 1e-10);
        assert!(r.all_hold());
    }
}
