//! Concentration ledgers against a brute-force simulation on the full
//! 2n-qubit state, and the tradeoff identity under random partitions.

use locc_core::protocols::{
    asymptotic_rate, check_tradeoff, concentration_outcomes, tradeoff_ledger,
};
use locc_core::qmat::{binary_entropy, schmidt};
use locc_core::C64;
use nalgebra::DVector;
use proptest::prelude::*;

/// n copies of √a2|00⟩ + √(1−a2)|11⟩ with Alice's n qubits first.
fn copies(n: usize, a2: f64) -> DVector<C64> {
    let dim = 1usize << (2 * n);
    let (a, b) = (a2.sqrt(), (1.0 - a2).sqrt());
    // Only x_A = x_B survives; bit value 0 carries amplitude a.
    DVector::from_fn(dim, |idx, _| {
        let (alice, bob) = (idx >> n, idx & ((1 << n) - 1));
        if alice != bob {
            return C64::new(0.0, 0.0);
        }
        let ones = alice.count_ones() as i32;
        C64::new(a.powi(n as i32 - ones) * b.powi(ones), 0.0)
    })
}

#[test]
fn type_measurement_matches_brute_force() {
    for n in 1..=6 {
        for a2 in [0.1, 0.35, 0.5, 0.8] {
            let psi = copies(n, a2);
            let outcomes = concentration_outcomes(n, a2).unwrap();
            for o in &outcomes {
                // Outcome k counts Alice's zeros, i.e. factors of a².
                let projected = DVector::from_fn(psi.len(), |idx, _| {
                    let zeros = n - (idx >> n).count_ones() as usize;
                    if zeros == o.k { psi[idx] } else { C64::new(0.0, 0.0) }
                });
                let p = projected.norm_squared();
                assert!((p - o.p_k).abs() <= 1e-12, "n={n} a2={a2} k={}", o.k);
                let form = schmidt(&projected.unscale(p.sqrt()), [1 << n, 1 << n]).unwrap();
                let rank = o.rank(n).unwrap() as usize;
                assert_eq!(form.rank, rank);
                assert!((form.entropy() - o.log2_rank).abs() <= 1e-9);
                let level = 1.0 / rank as f64;
                assert!(form.squared()[..rank].iter().all(|w| (w - level).abs() <= 1e-10));
            }
        }
    }
}

#[test]
fn average_rank_plus_outcome_entropy_is_n_copies_of_entanglement() {
    for n in [1, 2, 5, 12, 40, 200] {
        for a2 in [0.1, 0.3, 0.5, 0.9] {
            let l = tradeoff_ledger(n, a2, &[]).unwrap();
            let avg: f64 = concentration_outcomes(n, a2)
                .unwrap()
                .iter()
                .map(|o| o.p_k * o.log2_rank)
                .sum();
            assert!((avg + l.i_er - n as f64 * binary_entropy(a2)).abs() <= 1e-9);
            let r = asymptotic_rate(n, a2).unwrap();
            assert!(r.gap <= 1e-9);
        }
    }
}

fn partition(n: usize) -> impl Strategy<Value = (usize, Vec<usize>)> {
    (Just(n), proptest::sample::subsequence((0..=n).collect::<Vec<_>>(), 0..=n + 1))
}

proptest! {
    #[test]
    fn tradeoff_identity_holds(
        (n, kq) in (1usize..=200).prop_flat_map(partition),
        a2 in 0.01f64..0.99,
    ) {
        let l = tradeoff_ledger(n, a2, &kq).unwrap();
        prop_assert!(l.identity_error() <= 1e-9);
        let report = check_tradeoff(&l);
        prop_assert!(report.all_hold());
        prop_assert!(report.total.margin.abs() <= 1e-9);
    }
}
