use locc_core::ledger::ledger;
use locc_core::protocols::{singlet_extraction, teleport, StepKind};
use locc_core::qmat::{fidelity_pure, von_neumann_entropy};
use locc_core::random::{haar_ket, seeded};
use locc_core::{BipartiteState, ComplexMatrix, C64};

#[test]
fn teleportation_of_haar_random_inputs() {
    let mut rng = seeded(2024);
    let quarter = ComplexMatrix::identity(&[2, 2]).scale(C64::new(0.25, 0.0));
    for _ in 0..100 {
        let psi = haar_ket(2, &mut rng);
        let t = teleport(&psi).unwrap();
        assert!(fidelity_pure(&psi, &t.final_reduced(&[2])) >= 1.0 - 1e-9);
        let residual = t.final_reduced(&[0, 1]);
        assert!(residual.max_abs_diff(&quarter) <= 1e-9);
        let l = ledger(&BipartiteState::from_density(residual).unwrap()).unwrap();
        assert!(l.total.abs() <= 1e-9);
        assert!(t.trace_drift() <= 1e-12);
        assert!(t.channel_violation() <= 1e-10);
    }
}

#[test]
fn extraction_environment_accounting() {
    let t = singlet_extraction();
    let dephasing: Vec<_> = t.steps.iter().filter(|s| s.kind == StepKind::Dephase).collect();
    assert_eq!(dephasing.len(), 1);
    assert!((dephasing[0].entropy_delta_environment - 1.0).abs() <= 1e-9);
    // Unitary and transfer steps leave the environment untouched.
    let rest: f64 = t
        .steps
        .iter()
        .filter(|s| s.kind != StepKind::Dephase)
        .map(|s| s.entropy_delta_environment.abs())
        .sum();
    assert!(rest <= 1e-12);
    assert!(von_neumann_entropy(&t.final_reduced(&[2])).unwrap() <= 1e-9);
}
