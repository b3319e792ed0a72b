//! Local measurement of O′₁ by alternating one-sided projective
//! measurements and classical messages.
//!
//! b1  Bob: {|2⟩, rest}, tells Alice.
//! a1  Alice (Bob had |2⟩): {|0+1⟩, |0−1⟩, |2⟩} → ψ1, ψ2, ψ10.
//! a1′ Alice (otherwise): {|0⟩, rest}, tells Bob.
//! b2  Bob (Alice had |0⟩): {|0+1⟩, |0−1⟩, |2⟩} → ψ3, ψ4.
//! b2′ Bob (otherwise): {|0⟩, |1⟩, |2⟩}, tells Alice.
//! a2  Alice: {|1+2⟩, |1−2⟩, |0⟩} → ψ5, ψ6 after Bob's |0⟩, or
//!     {|1⟩, |2⟩, |0⟩} → ψ7, ψ11 after Bob's |1⟩.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmat::{ComplexMatrix, C64};

use super::{e, minus, plus, state};

const CERTAIN: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Alice,
    Bob,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Round {
    pub step: &'static str,
    pub actor: Side,
    /// Names of the one-sided projectors, in outcome order.
    pub projectors: Vec<&'static str>,
    pub outcome: &'static str,
    pub probability: f64,
    pub message: Option<&'static str>,
}

impl Round {
    /// The round's projectors on the full 3⊗3 space, in outcome order.
    pub fn lifted_projectors(&self) -> Vec<ComplexMatrix> {
        measurement(&self.projectors)
            .iter()
            .map(|(_, p)| ComplexMatrix::new(lift(self.actor, p), super::DIMS.to_vec()).expect("9x9"))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PingPongTranscript {
    pub input: usize,
    pub rounds: Vec<Round>,
    pub verdict: usize,
    /// The verdict (ψ10 or ψ11) resolves more than O₁ asks for.
    pub surplus_flag: bool,
}

impl PingPongTranscript {
    /// Actors alternate, starting with Bob.
    pub fn alternates(&self) -> bool {
        self.rounds.iter().enumerate().all(|(i, r)| {
            r.actor == if i % 2 == 0 { Side::Bob } else { Side::Alice }
        })
    }
}

fn rank_one(v: &DVector<C64>) -> DMatrix<C64> {
    v * v.adjoint()
}

/// Named projectors on one 3-level side; the last may be "rest".
fn measurement(names: &[&'static str]) -> Vec<(&'static str, DMatrix<C64>)> {
    names
        .iter()
        .map(|&n| {
            let p = match n {
                "|0>" => rank_one(&e(0)),
                "|1>" => rank_one(&e(1)),
                "|2>" => rank_one(&e(2)),
                "|0+1>" => rank_one(&plus(0, 1)),
                "|0-1>" => rank_one(&minus(0, 1)),
                "|1+2>" => rank_one(&plus(1, 2)),
                "|1-2>" => rank_one(&minus(1, 2)),
                "rest of |0>" => DMatrix::identity(3, 3) - rank_one(&e(0)),
                "rest of |2>" => DMatrix::identity(3, 3) - rank_one(&e(2)),
                other => unreachable!("unknown projector {other}"),
            };
            (n, p)
        })
        .collect()
}

/// One-sided projector lifted to the full space.
fn lift(side: Side, p: &DMatrix<C64>) -> DMatrix<C64> {
    let id = DMatrix::<C64>::identity(3, 3);
    match side {
        Side::Alice => p.kronecker(&id),
        Side::Bob => id.kronecker(p),
    }
}

struct Runner {
    ket: DVector<C64>,
    rounds: Vec<Round>,
}

impl Runner {
    fn measure(
        &mut self,
        step: &'static str,
        actor: Side,
        names: &[&'static str],
        message: bool,
    ) -> Result<&'static str> {
        let ops = measurement(names);
        let probs: Vec<f64> = ops
            .iter()
            .map(|(_, p)| (lift(actor, p) * &self.ket).norm_squared())
            .collect();
        let (k, &prob) = probs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty measurement");
        if prob < 1.0 - CERTAIN {
            return Err(Error::Precondition(format!(
                "step {step} has no certain outcome (probabilities {probs:?})"
            )));
        }
        let (name, p) = &ops[k];
        let after = lift(actor, p) * &self.ket;
        self.ket = after.unscale(prob.sqrt());
        self.rounds.push(Round {
            step,
            actor,
            projectors: names.to_vec(),
            outcome: name,
            probability: prob,
            message: message.then_some(*name),
        });
        Ok(name)
    }
}

/// Runs the protocol on ψ_label, for labels in {1..7, 10, 11}.
pub fn ping_pong(label: usize) -> Result<PingPongTranscript> {
    if !matches!(label, 1..=7 | 10 | 11) {
        return Err(Error::InvalidArgument(format!("ψ{label} is not an eigenstate of O′₁")));
    }
    let mut r = Runner { ket: state(label)?.ket(), rounds: Vec::new() };
    let verdict = if r.measure("b1", Side::Bob, &["|2>", "rest of |2>"], true)? == "|2>" {
        match r.measure("a1", Side::Alice, &["|0+1>", "|0-1>", "|2>"], false)? {
            "|0+1>" => 1,
            "|0-1>" => 2,
            _ => 10,
        }
    } else if r.measure("a1'", Side::Alice, &["|0>", "rest of |0>"], true)? == "|0>" {
        match r.measure("b2", Side::Bob, &["|0+1>", "|0-1>", "|2>"], false)? {
            "|0+1>" => 3,
            "|0-1>" => 4,
            o => return Err(Error::Precondition(format!("unexpected outcome {o} at b2"))),
        }
    } else {
        match r.measure("b2'", Side::Bob, &["|0>", "|1>", "|2>"], true)? {
            "|0>" => match r.measure("a2", Side::Alice, &["|1+2>", "|1-2>", "|0>"], false)? {
                "|1+2>" => 5,
                "|1-2>" => 6,
                o => return Err(Error::Precondition(format!("unexpected outcome {o} at a2"))),
            },
            "|1>" => match r.measure("a2", Side::Alice, &["|1>", "|2>", "|0>"], false)? {
                "|1>" => 7,
                "|2>" => 11,
                o => return Err(Error::Precondition(format!("unexpected outcome {o} at a2"))),
            },
            o => return Err(Error::Precondition(format!("unexpected outcome {o} at b2'"))),
        }
    };
    Ok(PingPongTranscript { input: label, rounds: r.rounds, verdict, surplus_flag: verdict >= 10 })
}
