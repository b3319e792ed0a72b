use locc_core::commutators::{kron_factorize, Factorization};
use locc_core::ops::sigma_x;
use locc_core::sausage::{
    build_operators, ping_pong, product_commutator_separability, surplus_commutator,
    Side, SurplusLabelFamily,
};
use locc_core::{ComplexMatrix, C64};
use nalgebra::DMatrix;

#[test]
fn commutator_is_an_exact_product() {
    let ops = build_operators();
    let k = ops.o1_prime.commutator(&ops.o2_prime).unwrap();
    match kron_factorize(&k, [3, 3]).unwrap() {
        Factorization::Product { reconstruction_error, scale, .. } => {
            assert!(reconstruction_error <= 1e-12);
            // 2i|2⟩⟨2|⊗σ_y has Frobenius norm 2√2.
            assert!((scale - 2.0 * 2f64.sqrt()).abs() <= 1e-12);
        }
        other => panic!("{other:?}"),
    }
    assert!(k.max_abs_diff(&surplus_commutator(C64::new(0.0, 2.0))) <= 1e-12);
}

#[test]
fn family_commutator_scales_with_label_gap() {
    let o2 = build_operators().o2;
    for (e10, e11) in [(0.0, 1.0), (3.0, -2.0), (-1.0, 1.0)] {
        let k = SurplusLabelFamily::o1_with_labels(e10, e11).commutator(&o2).unwrap();
        let expected = surplus_commutator(C64::new(0.0, e11 - e10));
        assert!(k.max_abs_diff(&expected) <= 1e-12);
    }
}

#[test]
fn transcripts_are_local() {
    let id = ComplexMatrix::identity(&[3]);
    for l in [1, 2, 3, 4, 5, 6, 7, 10, 11] {
        let t = ping_pong(l).unwrap();
        for r in &t.rounds {
            assert!((r.probability - 1.0).abs() <= 1e-12);
            let projectors = r.lifted_projectors();
            let sum = projectors.iter().skip(1).fold(projectors[0].clone(), |acc, p| &acc + p);
            assert!(sum.max_abs_diff(&ComplexMatrix::identity(&[3, 3])) <= 1e-12);
            for p in &projectors {
                let Factorization::Product { left, right, .. } = kron_factorize(p, [3, 3]).unwrap() else {
                    panic!("joint projector in round {}", r.step);
                };
                let idle = if r.actor == Side::Alice { right } else { left };
                let s = C64::new(1.0 / 3f64.sqrt(), 0.0);
                assert!(idle.max_abs_diff(&id.scale(s)) <= 1e-12, "round {}", r.step);
            }
        }
        assert_eq!(t.verdict, l);
    }
}

#[test]
fn random_product_images_stay_separable() {
    let ops = build_operators();
    let k = ops.o1_prime.commutator(&ops.o2_prime).unwrap();
    let r = product_commutator_separability(&k, 1000, 42).unwrap();
    assert_eq!(r.trials, 1000);
    assert_eq!(r.entangled, 0);
    assert!(r.max_negativity <= 1e-10);
    assert_eq!(r.max_schmidt_rank, 1);
    assert_eq!(r, product_commutator_separability(&k, 1000, 42).unwrap());
}

#[test]
fn bob_sigma_x_block_is_embedded_pauli() {
    let o2 = build_operators().o2;
    let block = DMatrix::from_fn(2, 2, |i, j| o2.get(2 * 3 + 1 + i, 2 * 3 + 1 + j));
    assert_eq!(&block, sigma_x().data());
}
