//! Nine orthogonal product states on 3⊗3 and two observables built on them
//! that commute globally but not once O₁ is replaced by a locally
//! measurable implementation.
//!
//! | label | Alice   | Bob     |
//! |-------|---------|---------|
//! | ψ1    | \|0+1⟩  | \|2⟩    |
//! | ψ2    | \|0−1⟩  | \|2⟩    |
//! | ψ3    | \|0⟩    | \|0+1⟩  |
//! | ψ4    | \|0⟩    | \|0−1⟩  |
//! | ψ5    | \|1+2⟩  | \|0⟩    |
//! | ψ6    | \|1−2⟩  | \|0⟩    |
//! | ψ7    | \|1⟩    | \|1⟩    |
//! | ψ8    | \|2⟩    | \|1+2⟩  |
//! | ψ9    | \|2⟩    | \|1−2⟩  |
//! | ψ10   | \|2⟩    | \|2⟩    |
//! | ψ11   | \|2⟩    | \|1⟩    |
//!
//! with |i±j⟩ = (|i⟩±|j⟩)/√2.

mod pingpong;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::commutators::{kron_factorize, Factorization, ImplementationFamily};
use crate::error::{Error, Result};
use crate::qmat::{basis_ket, negativity_of, schmidt, ComplexMatrix, C64};
use crate::random::{haar_ket, seeded};

pub use pingpong::{ping_pong, PingPongTranscript, Round, Side};

pub const DIMS: [usize; 2] = [3, 3];

#[derive(Clone, Debug, PartialEq)]
pub struct ProductKet {
    pub label: usize,
    pub alice: DVector<C64>,
    pub bob: DVector<C64>,
}

impl ProductKet {
    pub fn ket(&self) -> DVector<C64> {
        self.alice.kronecker(&self.bob)
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::projector(&self.ket(), &DIMS).expect("3x3")
    }
}

fn e(i: usize) -> DVector<C64> {
    basis_ket(3, i)
}

fn plus(i: usize, j: usize) -> DVector<C64> {
    (e(i) + e(j)).unscale(std::f64::consts::SQRT_2)
}

fn minus(i: usize, j: usize) -> DVector<C64> {
    (e(i) - e(j)).unscale(std::f64::consts::SQRT_2)
}

/// Any of ψ1..ψ11.
pub fn state(label: usize) -> Result<ProductKet> {
    let (alice, bob) = match label {
        1 => (plus(0, 1), e(2)),
        2 => (minus(0, 1), e(2)),
        3 => (e(0), plus(0, 1)),
        4 => (e(0), minus(0, 1)),
        5 => (plus(1, 2), e(0)),
        6 => (minus(1, 2), e(0)),
        7 => (e(1), e(1)),
        8 => (e(2), plus(1, 2)),
        9 => (e(2), minus(1, 2)),
        10 => (e(2), e(2)),
        11 => (e(2), e(1)),
        _ => return Err(Error::InvalidArgument(format!("no state ψ{label}"))),
    };
    Ok(ProductKet { label, alice, bob })
}

/// ψ1..ψ9.
pub fn build_nine_states() -> Vec<ProductKet> {
    (1..=9).map(|l| state(l).expect("in table")).collect()
}

/// ψ1..ψ7, ψ10, ψ11: the eigenbasis of O′₁.
pub fn modified_basis() -> Vec<ProductKet> {
    [1, 2, 3, 4, 5, 6, 7, 10, 11].into_iter().map(|l| state(l).expect("in table")).collect()
}

/// Largest |⟨ψ_i|ψ_j⟩ − δ_ij| over a list of kets.
pub fn gram_deviation(states: &[ProductKet]) -> f64 {
    let kets: Vec<_> = states.iter().map(ProductKet::ket).collect();
    let mut worst = 0.0f64;
    for (i, a) in kets.iter().enumerate() {
        for (j, b) in kets.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((a.dotc(b) - C64::new(target, 0.0)).norm());
        }
    }
    worst
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BobPauli {
    X,
    Y,
    Z,
}

/// Pauli matrix acting on Bob's span{|1⟩, |2⟩}, zero on |0⟩.
pub fn bob_pauli(which: BobPauli) -> ComplexMatrix {
    let mut m = DMatrix::zeros(3, 3);
    match which {
        BobPauli::X => {
            m[(1, 2)] = C64::new(1.0, 0.0);
            m[(2, 1)] = C64::new(1.0, 0.0);
        }
        BobPauli::Y => {
            m[(1, 2)] = C64::new(0.0, -1.0);
            m[(2, 1)] = C64::new(0.0, 1.0);
        }
        BobPauli::Z => {
            m[(1, 1)] = C64::new(1.0, 0.0);
            m[(2, 2)] = C64::new(-1.0, 0.0);
        }
    }
    ComplexMatrix::new(m, vec![3]).expect("3x3")
}

/// |2⟩⟨2| ⊗ σ on Bob's {|1⟩, |2⟩} block.
pub fn alice_two_times(which: BobPauli) -> ComplexMatrix {
    ComplexMatrix::projector(&e(2), &[3]).expect("3").tensor(&bob_pauli(which))
}

/// factor · |2⟩⟨2| ⊗ σ_y
pub fn surplus_commutator(factor: C64) -> ComplexMatrix {
    alice_two_times(BobPauli::Y).scale(factor)
}

/// Value O₁ assigns to ψ_label: the label itself on ψ1..ψ7, zero on the
/// complement (ψ8..ψ11).
pub fn o1_eigenvalue(label: usize) -> f64 {
    if (1..=7).contains(&label) { label as f64 } else { 0.0 }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SausageOperators {
    pub o1: ComplexMatrix,
    pub o2: ComplexMatrix,
    pub o1_prime: ComplexMatrix,
    pub o2_prime: ComplexMatrix,
}

pub fn build_operators() -> SausageOperators {
    let mut o1 = ComplexMatrix::zeros(&DIMS);
    for l in 1..=7 {
        o1 = &o1 + &state(l).expect("in table").projector().scale(C64::new(o1_eigenvalue(l), 0.0));
    }
    let o2 = alice_two_times(BobPauli::X);
    let o1_prime = &o1 + &alice_two_times(BobPauli::Z);
    SausageOperators { o1, o2_prime: o2.clone(), o2, o1_prime }
}

/// Largest ‖O′₁ψ − λψ‖ over ψ1..ψ7 (λ = 1..7), ψ10 (λ = −1) and ψ11 (λ = +1).
pub fn o1_prime_eigen_residual(ops: &SausageOperators) -> f64 {
    modified_basis()
        .iter()
        .map(|s| {
            let lambda = match s.label {
                10 => -1.0,
                11 => 1.0,
                l => o1_eigenvalue(l),
            };
            let k = s.ket();
            (ops.o1_prime.apply(&k) - k.scale(lambda)).norm()
        })
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparabilityReport {
    pub factorization: Factorization,
    pub trials: usize,
    pub seed: u64,
    pub zero_outputs: usize,
    pub max_negativity: f64,
    pub max_schmidt_rank: usize,
    /// Images with negativity above 1e-10 or Schmidt rank above one.
    pub entangled: usize,
}

const NEGATIVITY_TOL: f64 = 1e-10;

/// Applies a product operator to random product kets and records how
/// entangled the images are.
pub fn product_commutator_separability(k: &ComplexMatrix, trials: usize, seed: u64) -> Result<SeparabilityReport> {
    let factorization = kron_factorize(k, DIMS)?;
    if !factorization.is_product() {
        return Err(Error::Precondition("operator is not a product".into()));
    }
    let mut rng = seeded(seed);
    let mut report = SeparabilityReport {
        factorization,
        trials,
        seed,
        zero_outputs: 0,
        max_negativity: 0.0,
        max_schmidt_rank: 0,
        entangled: 0,
    };
    for _ in 0..trials {
        let ket = haar_ket(3, &mut rng).kronecker(&haar_ket(3, &mut rng));
        let out = k.apply(&ket);
        let norm = out.norm();
        if norm <= 1e-12 {
            report.zero_outputs += 1;
            continue;
        }
        let out = out.unscale(norm);
        let rank = schmidt(&out, DIMS)?.rank;
        let neg = negativity_of(&ComplexMatrix::projector(&out, &DIMS)?)?;
        report.max_negativity = report.max_negativity.max(neg);
        report.max_schmidt_rank = report.max_schmidt_rank.max(rank);
        if rank > 1 || neg > NEGATIVITY_TOL {
            report.entangled += 1;
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivalenceReport {
    /// √⟨ψ_i|P_i|ψ_i⟩ with P_i the O′₁ eigenspace projector for eigenvalue i.
    pub overlaps: Vec<f64>,
    /// Dimension of each of those eigenspaces.
    pub multiplicities: Vec<usize>,
    pub eigen_residual: f64,
    /// Ping-pong verdict on ψ_i gives O₁-eigenvalue i for i = 1..7.
    pub verdicts_match: bool,
    /// Bob's {|1+2⟩, |1−2⟩} projectors give ψ8 and ψ9 distinct, certain outcomes.
    pub o2_distinguishes: bool,
}

impl EquivalenceReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.overlaps.iter().all(|o| (o - 1.0).abs() <= tol)
            && self.eigen_residual <= tol
            && self.verdicts_match
            && self.o2_distinguishes
    }
}

/// Outcome probabilities of Bob's {|1+2⟩, |1−2⟩, |0⟩} measurement.
pub fn o2_measurement(ket: &DVector<C64>) -> [f64; 3] {
    let id = DMatrix::<C64>::identity(3, 3);
    [plus(1, 2), minus(1, 2), e(0)].map(|b| {
        let p = ComplexMatrix::plain(id.kronecker(&(&b * b.adjoint())));
        p.expectation(ket).re
    })
}

pub fn o1_measurement_equivalence() -> Result<EquivalenceReport> {
    let ops = build_operators();
    let spec = ops.o1_prime.eigh();
    let mut overlaps = Vec::new();
    let mut multiplicities = Vec::new();
    for l in 1..=7 {
        let lambda = o1_eigenvalue(l);
        let p = spec.eigenspace_projector(lambda, 1e-8);
        let k = state(l)?.ket();
        overlaps.push((k.dotc(&(&p * &k))).re.max(0.0).sqrt());
        multiplicities.push(spec.eigenvalues.iter().filter(|v| (*v - lambda).abs() <= 1e-8).count());
    }
    let mut verdicts_match = true;
    for l in 1..=7 {
        let t = ping_pong(l)?;
        verdicts_match &= !t.surplus_flag && o1_eigenvalue(t.verdict) == l as f64;
    }
    let p8 = o2_measurement(&state(8)?.ket());
    let p9 = o2_measurement(&state(9)?.ket());
    let o2_distinguishes = (p8[0] - 1.0).abs() < 1e-12 && (p9[1] - 1.0).abs() < 1e-12;
    Ok(EquivalenceReport {
        overlaps,
        multiplicities,
        eigen_residual: o1_prime_eigen_residual(&ops),
        verdicts_match,
        o2_distinguishes,
    })
}

/// Implementations of O₁ that keep ψ1..ψ7 and attach distinct integer
/// labels (e10, e11) to ψ10 and ψ11, paired with O₂. The commutator is
/// i(e11 − e10)|2⟩⟨2|⊗σ_y.
pub struct SurplusLabelFamily {
    pub lo: i32,
    pub hi: i32,
}

impl SurplusLabelFamily {
    pub fn o1_with_labels(e10: f64, e11: f64) -> ComplexMatrix {
        let o1 = build_operators().o1;
        let p10 = state(10).expect("in table").projector().scale(C64::new(e10, 0.0));
        let p11 = state(11).expect("in table").projector().scale(C64::new(e11, 0.0));
        &(&o1 + &p10) + &p11
    }
}

impl ImplementationFamily for SurplusLabelFamily {
    fn name(&self) -> &str {
        "sausage-surplus-labels"
    }

    fn bounds(&self) -> Vec<(f64, f64)> {
        vec![(self.lo as f64, self.hi as f64); 2]
    }

    fn discrete(&self) -> bool {
        true
    }

    fn implement(&self, params: &[f64]) -> Option<(ComplexMatrix, ComplexMatrix)> {
        let (e10, e11) = (params[0], params[1]);
        // Equal labels would merge the two outcomes the protocol separates.
        (e10 != e11).then(|| (Self::o1_with_labels(e10, e11), build_operators().o2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commutators::restricted_commutator_min;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gram_is_identity() {
        assert!(gram_deviation(&build_nine_states()) <= 1e-12);
        assert!(gram_deviation(&modified_basis()) <= 1e-12);
        for s in build_nine_states() {
            assert_eq!(schmidt(&s.ket(), DIMS).unwrap().rank, 1);
        }
    }

    #[test]
    fn operators() {
        let ops = build_operators();
        assert!(ops.o1.commutator(&ops.o2).unwrap().max_abs() <= 1e-12);
        let k = ops.o1_prime.commutator(&ops.o2_prime).unwrap();
        assert!(k.max_abs_diff(&surplus_commutator(C64::new(0.0, 2.0))) <= 1e-12);
        assert!(o1_prime_eigen_residual(&ops) <= 1e-12);
        let k3 = state(3).unwrap().ket();
        assert!((ops.o1_prime.apply(&k3) - k3.scale(3.0)).norm() <= 1e-12);
    }

    #[test]
    fn separability_examples() {
        let ops = build_operators();
        let k = ops.o1_prime.commutator(&ops.o2_prime).unwrap();
        assert_eq!(k.apply(&basis_ket(9, 0)).norm(), 0.0);
        let out = k.apply(&e(2).kronecker(&e(1)));
        assert_eq!(schmidt(&out, DIMS).unwrap().rank, 1);
        let r = product_commutator_separability(&k, 200, 3).unwrap();
        assert_eq!(r.entangled, 0);
        assert!(r.max_negativity <= 1e-10);
        assert!(product_commutator_separability(&ops.o1, 1, 0).is_err());
    }

    #[test]
    fn equivalence() {
        let r = o1_measurement_equivalence().unwrap();
        assert!(r.holds(1e-10), "{r:?}");
        assert_eq!(r.multiplicities[0], 2);
        assert!(r.multiplicities[1..].iter().all(|&m| m == 1));
    }

    #[test]
    fn surplus_family_minimum() {
        let m = restricted_commutator_min(&SurplusLabelFamily { lo: -8, hi: 8 }).unwrap();
        assert_abs_diff_eq!(m.min_norm, std::f64::consts::SQRT_2, epsilon = 1e-12);
        let k = SurplusLabelFamily::o1_with_labels(-1.0, 1.0);
        let ops = build_operators();
        assert!(k.max_abs_diff(&ops.o1_prime) <= 1e-12);
    }
}
