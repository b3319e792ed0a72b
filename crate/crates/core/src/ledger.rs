//! Information ledger of a bipartite state: total, local and mutual
//! information, the LO/LOCC-extractable amounts and the two deficits.
//!
//! The LOCC-extractable information `i_c` is known in closed form only for
//! pure states (`n − S_A`). Mixed states get the certified interval
//! `[I_A + I_B, n − max(S_A, S_B)]`; the upper end rests on a conjectured
//! bound and is flagged as such.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmat::{shannon_entropy, von_neumann_entropy, BipartiteState, Party};

/// An exactly known value or an interval known to contain it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Quantity {
    Exact { value: f64 },
    Interval { lower: f64, upper: f64 },
}

impl Quantity {
    pub fn exact(value: f64) -> Self {
        Quantity::Exact { value }
    }

    pub fn lower(&self) -> f64 {
        match *self {
            Quantity::Exact { value } => value,
            Quantity::Interval { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> f64 {
        match *self {
            Quantity::Exact { value } => value,
            Quantity::Interval { upper, .. } => upper,
        }
    }

    pub fn value(&self) -> Option<f64> {
        match *self {
            Quantity::Exact { value } => Some(value),
            Quantity::Interval { .. } => None,
        }
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        x >= self.lower() - tol && x <= self.upper() + tol
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InfoLedger {
    /// log₂ of the total dimension (number of qubits for qubit systems).
    pub n: f64,
    pub n_a: f64,
    pub n_b: f64,
    pub s_ab: f64,
    pub s_a: f64,
    pub s_b: f64,
    #[serde(rename = "I")]
    pub total: f64,
    #[serde(rename = "I_A")]
    pub local_a: f64,
    #[serde(rename = "I_B")]
    pub local_b: f64,
    #[serde(rename = "I_M")]
    pub mutual: f64,
    /// Information reachable with local operations only, I_A + I_B.
    pub i_lo: f64,
    pub i_c: Quantity,
    pub delta_c: Quantity,
    pub delta_q: Quantity,
    pub e_d: Option<f64>,
    pub e_f: Option<f64>,
    /// True when the upper end of `i_c` relies on the conjectured bound.
    pub conjectural_upper_bound: bool,
}

impl InfoLedger {
    /// |I − (I_A + I_B + I_M)|
    pub fn decomposition_error(&self) -> f64 {
        (self.total - (self.local_a + self.local_b + self.mutual)).abs()
    }

    /// |I_M − (Δ_c + Δ_q)| when both deficits are exact.
    pub fn deficit_sum_error(&self) -> Option<f64> {
        Some((self.mutual - (self.delta_c.value()? + self.delta_q.value()?)).abs())
    }

    /// Slack in 0 ≤ I_M ≤ 2 log₂ min(d_A, d_B).
    pub fn mutual_bound_margin(&self, dims: [usize; 2]) -> f64 {
        let cap = 2.0 * (dims[0].min(dims[1]) as f64).log2();
        (cap - self.mutual).min(self.mutual)
    }
}

/// Quantities fixed by purity: E_D = E_f = S_A and I_c = n − E_D.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PureQuantities {
    pub e_d: f64,
    pub e_f: f64,
    pub i_c: f64,
    pub delta_c: f64,
    pub delta_q: f64,
}

struct Entropies {
    n: f64,
    n_a: f64,
    n_b: f64,
    s_ab: f64,
    s_a: f64,
    s_b: f64,
}

fn entropies(s: &BipartiteState) -> Result<Entropies> {
    let [da, db] = s.dims();
    let s_ab = if s.ket().is_some() { 0.0 } else { von_neumann_entropy(s.matrix())? };
    Ok(Entropies {
        n: ((da * db) as f64).log2(),
        n_a: (da as f64).log2(),
        n_b: (db as f64).log2(),
        s_ab,
        s_a: von_neumann_entropy(&s.reduced(Party::A))?,
        s_b: von_neumann_entropy(&s.reduced(Party::B))?,
    })
}

pub fn ledger(s: &BipartiteState) -> Result<InfoLedger> {
    let e = entropies(s)?;
    let total = e.n - e.s_ab;
    let local_a = e.n_a - e.s_a;
    let local_b = e.n_b - e.s_b;
    let mutual = e.s_a + e.s_b - e.s_ab;
    let i_lo = local_a + local_b;

    let (i_c, delta_c, delta_q, e_d, e_f, conjectural) = if s.is_pure() {
        let q = pure_quantities_from(&e, i_lo);
        (
            Quantity::exact(q.i_c),
            Quantity::exact(q.delta_c),
            Quantity::exact(q.delta_q),
            Some(q.e_d),
            Some(q.e_f),
            false,
        )
    } else {
        let upper = e.n - e.s_a.max(e.s_b);
        (
            Quantity::Interval { lower: i_lo, upper },
            Quantity::Interval { lower: 0.0, upper: upper - i_lo },
            Quantity::Interval { lower: total - upper, upper: total - i_lo },
            None,
            None,
            true,
        )
    };

    Ok(InfoLedger {
        n: e.n,
        n_a: e.n_a,
        n_b: e.n_b,
        s_ab: e.s_ab,
        s_a: e.s_a,
        s_b: e.s_b,
        total,
        local_a,
        local_b,
        mutual,
        i_lo,
        i_c,
        delta_c,
        delta_q,
        e_d,
        e_f,
        conjectural_upper_bound: conjectural,
    })
}

fn pure_quantities_from(e: &Entropies, i_lo: f64) -> PureQuantities {
    let e_d = e.s_a;
    let i_c = e.n - e_d;
    PureQuantities { e_d, e_f: e_d, i_c, delta_c: i_c - i_lo, delta_q: (e.n - e.s_ab) - i_c }
}

pub fn pure_state_quantities(s: &BipartiteState) -> Result<PureQuantities> {
    if !s.is_pure() {
        return Err(Error::MixedStateUnsupported);
    }
    let e = entropies(s)?;
    let i_lo = (e.n_a - e.s_a) + (e.n_b - e.s_b);
    Ok(pure_quantities_from(&e, i_lo))
}

/// Interval `[I_A + I_B, n − max(S_A, S_B)]` for `i_c`. For a pure input the
/// interval collapses onto the exact value `n − S_A`.
pub fn mixed_state_bounds(s: &BipartiteState) -> Result<Quantity> {
    let e = entropies(s)?;
    if s.is_pure() {
        let point = e.n - e.s_a;
        return Ok(Quantity::Interval { lower: point, upper: point });
    }
    let i_lo = (e.n_a - e.s_a) + (e.n_b - e.s_b);
    Ok(Quantity::Interval { lower: i_lo, upper: e.n - e.s_a.max(e.s_b) })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassicalBoundReport {
    pub mutual: f64,
    /// Shannon entropy of the diagonal.
    pub shannon: f64,
    pub log2_min_dim: f64,
    /// H − I_M
    pub entropy_margin: f64,
    /// log₂ min(d_A, d_B) − I_M
    pub dimension_margin: f64,
}

impl ClassicalBoundReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.entropy_margin >= -tol && self.dimension_margin >= -tol
    }
}

const DIAGONAL_TOL: f64 = 1e-12;

/// Checks I_M ≤ H and I_M ≤ log₂ min(d_A, d_B) for a state that is diagonal
/// in the product computational basis.
pub fn classical_bound_check(s: &BipartiteState) -> Result<ClassicalBoundReport> {
    let off = s.matrix().max_off_diagonal();
    if off > DIAGONAL_TOL {
        return Err(Error::InvalidArgument(format!(
            "not a classical state: off-diagonal entry of modulus {off:e}"
        )));
    }
    let m = s.matrix();
    let diag: Vec<f64> = (0..m.dim()).map(|i| m.get(i, i).re.max(0.0)).collect();
    let shannon = shannon_entropy(&diag)?;
    let l = ledger(s)?;
    let [da, db] = s.dims();
    let log2_min_dim = (da.min(db) as f64).log2();
    Ok(ClassicalBoundReport {
        mutual: l.mutual,
        shannon,
        log2_min_dim,
        entropy_margin: shannon - l.mutual,
        dimension_margin: log2_min_dim - l.mutual,
    })
}

/// S(ρ_AB) − I_M for any state. Classical states keep this nonnegative;
/// entangled pure states drive it negative.
pub fn entropy_minus_mutual(s: &BipartiteState) -> Result<f64> {
    let l = ledger(s)?;
    Ok(l.s_ab - l.mutual)
}
