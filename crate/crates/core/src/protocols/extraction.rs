//! One classical bit from a singlet: Alice copies her qubit into a measuring
//! qubit, decoheres it, lends it to Bob who uses it to purify his half, and
//! takes it back to reset it.

use crate::error::Result;
use crate::ledger::ledger;
use crate::ops::cnot;
use crate::qmat::{real_ket, von_neumann_entropy, BipartiteState, ComplexMatrix};

use super::{Actor, LoccRun, ProtocolTrace, Site, StepKind, TraceDeltas};

const ALICE: usize = 0;
const METER: usize = 1;
const BOB: usize = 2;

/// Local information I_A + I_B of the A|B pair, ignoring the meter.
fn local_information(state: &ComplexMatrix) -> Result<f64> {
    let pair = BipartiteState::from_density(state.partial_trace(&[ALICE, BOB])?)?;
    let l = ledger(&pair)?;
    Ok(l.local_a + l.local_b)
}

pub fn singlet_extraction() -> ProtocolTrace {
    run().expect("the extraction protocol is a fixed, valid LOCC sequence")
}

fn run() -> Result<ProtocolTrace> {
    let sites = vec![
        Site { name: "A".into(), dim: 2, initial_owner: Actor::Alice },
        Site { name: "M".into(), dim: 2, initial_owner: Actor::Alice },
        Site { name: "B".into(), dim: 2, initial_owner: Actor::Bob },
    ];
    // singlet on (A, B), meter in |0⟩; index = 4a + 2m + b
    let mut amps = [0.0; 8];
    amps[0b001] = 1.0;
    amps[0b100] = -1.0;
    let ket = real_ket(&amps).unscale(2f64.sqrt());
    let initial = ComplexMatrix::projector(&ket, &[2, 2, 2])?;
    let info_before = local_information(&initial)?;

    let mut run = LoccRun::new(sites, initial)?;
    let cx = cnot();
    run.unitary("a", Actor::Alice, "CNOT", &cx, &[ALICE, METER])?;
    run.dephase("b", Actor::Alice, METER, StepKind::Dephase)?;
    run.send_qubit("c", Actor::Alice, METER)?;
    run.unitary("d", Actor::Bob, "CNOT", &cx, &[METER, BOB])?;
    run.send_qubit("e", Actor::Bob, METER)?;
    run.unitary("f", Actor::Alice, "CNOT", &cx, &[ALICE, METER])?;

    let final_state = run.state().clone();
    let gained = local_information(&final_state)? - info_before;
    let bob = final_state.partial_trace(&[BOB])?;
    let mut notes = Vec::new();
    if von_neumann_entropy(&bob)? < 1e-9 {
        let which = if bob.get(0, 0).re > 0.5 { "|0⟩" } else { "|1⟩" };
        notes.push(format!("Bob's qubit ends pure in {which}"));
    } else {
        notes.push("Bob's qubit ends mixed".into());
    }
    let dephased = run_dephased(&run);
    let deltas = TraceDeltas {
        classical_bits_gained: gained,
        singlets_gained: 0.0,
        singlets_spent: 1.0,
        bits_dephased: dephased,
        message_bits: 2.0,
    };
    Ok(run.finish("singlet_extraction", deltas, notes))
}

fn run_dephased(run: &LoccRun) -> f64 {
    run.steps.iter().map(|s| s.entropy_delta_environment).sum()
}
