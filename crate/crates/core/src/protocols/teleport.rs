//! Teleportation of one qubit over a singlet with a Bell measurement and
//! classically conditioned Pauli corrections.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::ops::{cnot, hadamard, identity2, sigma_x, sigma_z};
use crate::qmat::{BipartiteState, ComplexMatrix, C64};

use super::{Actor, LoccRun, ProtocolTrace, Site, StepKind, TraceDeltas};

const INPUT: usize = 0;
const ALICE: usize = 1;
const BOB: usize = 2;

/// Bob's correction for outcome (m_in, m_a): Z^{m_in} X^{m_a} Z X.
///
/// After the Bell measurement Bob holds X Z X^{m_a} Z^{m_in} ψ up to phase,
/// the leading X Z being the local map taking |Φ⁺⟩ to the singlet.
fn correction(values: &[usize]) -> ComplexMatrix {
    let pow = |m: usize, p: ComplexMatrix| if m == 1 { p } else { identity2() };
    let zx = &sigma_z() * &sigma_x();
    &(&pow(values[0], sigma_z()) * &pow(values[1], sigma_x())) * &zx
}

pub fn teleport(psi: &DVector<C64>) -> Result<ProtocolTrace> {
    if psi.len() != 2 {
        return Err(Error::DimensionMismatch(format!("input has length {}", psi.len())));
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidArgument(format!("input ket has norm {norm}")));
    }
    let sites = vec![
        Site { name: "A'".into(), dim: 2, initial_owner: Actor::Alice },
        Site { name: "A".into(), dim: 2, initial_owner: Actor::Alice },
        Site { name: "B".into(), dim: 2, initial_owner: Actor::Bob },
    ];
    let input = ComplexMatrix::projector(psi, &[2])?;
    let initial = input.tensor(BipartiteState::singlet().matrix());

    let mut run = LoccRun::new(sites, initial)?;
    run.unitary("bell-cnot", Actor::Alice, "CNOT", &cnot(), &[INPUT, ALICE])?;
    run.unitary("bell-h", Actor::Alice, "H", &hadamard(), &[INPUT])?;
    run.dephase("measure-input", Actor::Alice, INPUT, StepKind::LocalMeasurement)?;
    run.dephase("measure-alice", Actor::Alice, ALICE, StepKind::LocalMeasurement)?;
    run.send_classical("announce", Actor::Alice, &[INPUT, ALICE])?;
    run.conditioned("correct", Actor::Bob, "Z^m1 X^m2 Z X", &[INPUT, ALICE], &[BOB], correction)?;

    let bits_dephased = run.steps.iter().map(|s| s.entropy_delta_environment).sum();
    let residual = run.state().partial_trace(&[INPUT, ALICE])?;
    let residual = BipartiteState::from_density(residual)?;
    let residual_info = crate::ledger::ledger(&residual)?.total;
    let deltas = TraceDeltas {
        classical_bits_gained: residual_info,
        singlets_gained: 0.0,
        singlets_spent: 1.0,
        bits_dephased,
        message_bits: 2.0,
    };
    Ok(run.finish("teleport", deltas, Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{basis_ket, fidelity_pure};

    fn residual_is_quarter_identity(t: &ProtocolTrace) -> f64 {
        let quarter = ComplexMatrix::identity(&[2, 2]).scale(C64::new(0.25, 0.0));
        t.final_reduced(&[INPUT, ALICE]).max_abs_diff(&quarter)
    }

    #[test]
    fn teleports_zero() {
        let psi = basis_ket(2, 0);
        let t = teleport(&psi).unwrap();
        assert!((fidelity_pure(&psi, &t.final_reduced(&[BOB])) - 1.0).abs() < 1e-9);
        assert!(residual_is_quarter_identity(&t) < 1e-9);
        assert!(t.deltas.classical_bits_gained.abs() < 1e-9);
        assert_eq!(t.deltas.message_bits, 2.0);
        assert!((t.deltas.bits_dephased - 2.0).abs() < 1e-9);
    }

    #[test]
    fn teleports_complex_superposition() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = DVector::from_vec(vec![C64::new(s, 0.0), C64::new(0.0, s)]);
        let t = teleport(&psi).unwrap();
        assert!((fidelity_pure(&psi, &t.final_reduced(&[BOB])) - 1.0).abs() < 1e-9);
        assert!(residual_is_quarter_identity(&t) < 1e-9);
        assert_eq!(t.channel_violation(), 0.0);
    }

    #[test]
    fn rejects_unnormalized_input() {
        let psi = DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]);
        assert!(matches!(teleport(&psi), Err(Error::InvalidArgument(_))));
    }
}
