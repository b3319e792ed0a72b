//! Ledger-level simulation of entanglement concentration on n copies of
//! a|00⟩ + b|11⟩, and the split of its outcomes between singlet extraction
//! and classical extraction.
//!
//! Alice's type measurement yields outcome k with probability
//! p_k = C(n,k) a^{2k} b^{2(n−k)}, leaving a maximally entangled state of
//! Schmidt rank d_k = C(n,k). Only (p_k, log₂ d_k) enter the ledger, so the
//! 2n-qubit state is never built here. Probabilities are evaluated in log
//! space, which keeps them finite up to n ≈ 10⁴ and beyond.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmat::{binary_entropy, shannon_entropy};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConcentrationOutcome {
    pub k: usize,
    pub p_k: f64,
    /// log₂ C(n, k)
    pub log2_rank: f64,
}

impl ConcentrationOutcome {
    /// C(n, k) when it fits in a u128.
    pub fn rank(&self, n: usize) -> Option<u128> {
        let k = self.k.min(n - self.k);
        let mut acc: u128 = 1;
        for i in 0..k {
            acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
        }
        Some(acc)
    }
}

fn check_a2(a2: f64) -> Result<()> {
    if !(a2 > 0.0 && a2 < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "squared Schmidt coefficient {a2} outside (0, 1)"
        )));
    }
    Ok(())
}

/// Outcomes k = 0..=n for `n` copies of √a2|00⟩ + √(1−a2)|11⟩.
pub fn concentration_outcomes(n: usize, a2: f64) -> Result<Vec<ConcentrationOutcome>> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one copy".into()));
    }
    check_a2(a2)?;
    let ln_a2 = a2.ln();
    let ln_b2 = (1.0 - a2).ln();
    let mut ln_binom = 0.0f64;
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        if k > 0 {
            ln_binom += ((n - k + 1) as f64).ln() - (k as f64).ln();
        }
        let ln_p = ln_binom + k as f64 * ln_a2 + (n - k) as f64 * ln_b2;
        out.push(ConcentrationOutcome {
            k,
            p_k: ln_p.exp(),
            log2_rank: ln_binom / std::f64::consts::LN_2,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TradeoffLedger {
    pub n: usize,
    pub a2: f64,
    /// Outcomes routed to singlet concentration.
    pub k_q: Vec<usize>,
    /// Outcomes routed to direct classical extraction.
    pub k_c: Vec<usize>,
    pub e_d_p: f64,
    pub i_c1_p: f64,
    pub i_c2_p: f64,
    /// Erasure cost H({p_k}).
    pub i_er: f64,
    pub i_total: f64,
    /// 2n − Σ p_k log₂ d_k − H(p), the partition-independent closed form.
    pub closed_form: f64,
}

impl TradeoffLedger {
    pub fn identity_error(&self) -> f64 {
        (self.i_total - self.closed_form).abs()
    }

    /// Net classical information I_c1 + I_c2 − I_er.
    pub fn classical(&self) -> f64 {
        self.i_c1_p + self.i_c2_p - self.i_er
    }
}

pub fn tradeoff_ledger(n: usize, a2: f64, k_q: &[usize]) -> Result<TradeoffLedger> {
    if let Some(&bad) = k_q.iter().find(|&&k| k > n) {
        return Err(Error::InvalidArgument(format!("outcome {bad} not in 0..={n}")));
    }
    let outcomes = concentration_outcomes(n, a2)?;
    let mut quantum = vec![false; n + 1];
    for &k in k_q {
        quantum[k] = true;
    }
    let two_n = 2.0 * n as f64;
    let (mut e_d, mut c1, mut c2, mut avg_log_rank) = (0.0, 0.0, 0.0, 0.0);
    for o in &outcomes {
        avg_log_rank += o.p_k * o.log2_rank;
        if quantum[o.k] {
            e_d += o.p_k * o.log2_rank;
            c1 += o.p_k * (two_n - 2.0 * o.log2_rank);
        } else {
            c2 += o.p_k * (two_n - o.log2_rank);
        }
    }
    let probs: Vec<f64> = outcomes.iter().map(|o| o.p_k).collect();
    let i_er = shannon_entropy(&probs)?;
    Ok(TradeoffLedger {
        n,
        a2,
        k_q: (0..=n).filter(|&k| quantum[k]).collect(),
        k_c: (0..=n).filter(|&k| !quantum[k]).collect(),
        e_d_p: e_d,
        i_c1_p: c1,
        i_c2_p: c2,
        i_er,
        i_total: e_d + c1 + c2 - i_er,
        closed_form: two_n - avg_log_rank - i_er,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AsymptoticRate {
    pub n: usize,
    pub a2: f64,
    /// I(𝒫)/n
    pub rate: f64,
    /// 2 − S_A
    pub target: f64,
    /// |rate − target|
    pub gap: f64,
    /// H({p_k}) / n, the per-copy erasure cost.
    pub erasure_per_copy: f64,
}

pub fn asymptotic_rate(n: usize, a2: f64) -> Result<AsymptoticRate> {
    let ledger = tradeoff_ledger(n, a2, &[])?;
    let rate = ledger.i_total / n as f64;
    let target = 2.0 - binary_entropy(a2);
    Ok(AsymptoticRate {
        n,
        a2,
        rate,
        target,
        gap: (rate - target).abs(),
        erasure_per_copy: ledger.i_er / n as f64,
    })
}

/// Smallest C with gap ≤ C·log₂(n)/n over the given points (n ≥ 2).
pub fn fit_gap_constant(points: &[AsymptoticRate]) -> f64 {
    points
        .iter()
        .filter(|p| p.n >= 2)
        .map(|p| p.gap * p.n as f64 / (p.n as f64).log2())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn two_copies_half_weight() {
        let o = concentration_outcomes(2, 0.5).unwrap();
        let p: Vec<f64> = o.iter().map(|x| x.p_k).collect();
        assert_abs_diff_eq!(p[0], 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(p[1], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p[2], 0.25, epsilon = 1e-15);
        let d: Vec<u128> = o.iter().map(|x| x.rank(2).unwrap()).collect();
        assert_eq!(d, vec![1, 2, 1]);
    }

    #[test]
    fn single_copy_outcomes_are_products() {
        for a2 in [0.1, 0.37, 0.9] {
            let o = concentration_outcomes(1, a2).unwrap();
            assert_abs_diff_eq!(o[0].p_k, 1.0 - a2, epsilon = 1e-15);
            assert_abs_diff_eq!(o[1].p_k, a2, epsilon = 1e-15);
            assert_eq!(o[0].log2_rank, 0.0);
            assert_abs_diff_eq!(o[1].log2_rank, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn normalization_large_n() {
        let s: f64 = concentration_outcomes(200, 0.3).unwrap().iter().map(|o| o.p_k).sum();
        assert_abs_diff_eq!(s, 1.0, epsilon = 1e-9);
        let s: f64 = concentration_outcomes(10_000, 0.3).unwrap().iter().map(|o| o.p_k).sum();
        assert_abs_diff_eq!(s, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(concentration_outcomes(3, 0.0).is_err());
        assert!(concentration_outcomes(3, 1.0).is_err());
        assert!(tradeoff_ledger(2, 0.5, &[3]).is_err());
    }

    #[test]
    fn tradeoff_example() {
        let l = tradeoff_ledger(2, 0.5, &[1]).unwrap();
        assert_abs_diff_eq!(l.e_d_p, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(l.i_c1_p, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(l.i_c2_p, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(l.i_er, 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(l.i_total, 2.0, epsilon = 1e-12);
        assert_eq!(l.k_c, vec![0, 2]);

        let empty = tradeoff_ledger(2, 0.5, &[]).unwrap();
        assert_eq!(empty.e_d_p, 0.0);
        assert_abs_diff_eq!(empty.i_total, l.i_total, epsilon = 1e-12);
    }

    #[test]
    fn rate_examples() {
        for n in [1, 7, 64] {
            assert!(asymptotic_rate(n, 0.5).unwrap().gap < 1e-9);
        }
        let r = asymptotic_rate(1, 0.3).unwrap();
        assert_abs_diff_eq!(r.rate, 2.0 - binary_entropy(0.3), epsilon = 1e-12);
    }
}
