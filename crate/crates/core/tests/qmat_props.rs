use locc_core::ledger::{ledger, mixed_state_bounds};
use locc_core::qmat::{negativity, schmidt, von_neumann_entropy};
use locc_core::random::{haar_ket, random_mixed_state, seeded};
use locc_core::{BipartiteState, ComplexMatrix, Party, C64};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn dims() -> impl Strategy<Value = [usize; 2]> {
    (2usize..=3, 2usize..=3).prop_map(|(a, b)| [a, b])
}

/// Reduced state by explicit index sums, independent of `partial_trace`.
fn reduce_alice(m: &DMatrix<C64>, [da, db]: [usize; 2]) -> DMatrix<C64> {
    DMatrix::from_fn(da, da, |i, j| (0..db).map(|k| m[(i * db + k, j * db + k)]).sum())
}

fn reduce_bob(m: &DMatrix<C64>, [da, db]: [usize; 2]) -> DMatrix<C64> {
    DMatrix::from_fn(db, db, |i, j| (0..da).map(|k| m[(k * db + i, k * db + j)]).sum())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_trace_matches_index_sums(d in dims(), ancilla in 1usize..=3, seed in any::<u64>()) {
        let s = random_mixed_state(d, ancilla, &mut seeded(seed));
        let a = s.reduced(Party::A);
        let b = s.reduced(Party::B);
        let oa = ComplexMatrix::plain(reduce_alice(s.matrix().data(), d));
        let ob = ComplexMatrix::plain(reduce_bob(s.matrix().data(), d));
        prop_assert!(a.max_abs_diff(&oa) <= 1e-12);
        prop_assert!(b.max_abs_diff(&ob) <= 1e-12);
        prop_assert!((a.trace().re - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn ledger_decomposes(d in dims(), ancilla in 1usize..=4, seed in any::<u64>()) {
        let s = random_mixed_state(d, ancilla, &mut seeded(seed));
        let l = ledger(&s).unwrap();
        prop_assert!(l.decomposition_error() <= 1e-9);
        prop_assert!(l.mutual >= -1e-9);
        prop_assert!(l.mutual_bound_margin(d) >= -1e-9);
        prop_assert!(l.s_a >= -1e-12 && l.s_b >= -1e-12 && l.s_ab >= -1e-12);
        let bounds = mixed_state_bounds(&s).unwrap();
        prop_assert!(bounds.lower() <= bounds.upper() + 1e-9);
    }

    #[test]
    fn pure_states_have_equal_marginal_entropies(d in dims(), seed in any::<u64>()) {
        let ket = haar_ket(d[0] * d[1], &mut seeded(seed));
        let s = BipartiteState::from_ket(ket.clone(), d).unwrap();
        let sa = von_neumann_entropy(&s.reduced(Party::A)).unwrap();
        let sb = von_neumann_entropy(&s.reduced(Party::B)).unwrap();
        prop_assert!((sa - sb).abs() <= 1e-9);
        let form = schmidt(&ket, d).unwrap();
        prop_assert!((form.entropy() - sa).abs() <= 1e-9);
        prop_assert!((&form.reconstruct() - &ket).norm() <= 1e-10);
        let l = ledger(&s).unwrap();
        prop_assert!((l.mutual - 2.0 * sa).abs() <= 1e-9);
    }

    #[test]
    fn product_states_are_ppt(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let ket = haar_ket(2, &mut rng).kronecker(&haar_ket(3, &mut rng));
        let s = BipartiteState::from_ket(ket, [2, 3]).unwrap();
        prop_assert!(negativity(&s) <= 1e-10);
    }

    #[test]
    fn eigh_reconstructs(d in 2usize..=6, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let g = DMatrix::from_fn(d, d, |_, _| haar_ket(1, &mut rng)[0] * C64::new(1.7, 0.0));
        let h = ComplexMatrix::plain(&g + g.adjoint());
        let spec = h.eigh();
        prop_assert!(spec.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(ComplexMatrix::plain(spec.reconstruct()).max_abs_diff(&h) <= 1e-10);
    }
}

#[test]
fn negativity_of_singlet_is_half() {
    assert!((negativity(&BipartiteState::singlet()) - 0.5).abs() <= 1e-12);
}
