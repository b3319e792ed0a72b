//! All acceptance checks in one seeded report. Check names are prefixed
//! with their criterion number (`c1_…` to `c9_…`).

use locc_core::commutators::{
    commutator, expected_locc_commutator, kron_factorize, locc_implementation, parity_phase_pair,
    proposition1_search, Factorization, Which,
};
use locc_core::ledger::ledger;
use locc_core::protocols::{
    asymptotic_rate, check_tradeoff, complementarity_check, complementarity_check_resource,
    singlet_extraction, teleport, tradeoff_ledger, Extraction, PureResource,
};
use locc_core::qmat::{basis_ket, fidelity_pure, von_neumann_entropy};
use locc_core::random::{haar_ket, seeded};
use locc_core::sausage::{
    build_nine_states, build_operators, gram_deviation, ping_pong, product_commutator_separability,
    surplus_commutator,
};
use locc_core::{BipartiteState, ComplexMatrix, C64};
use nalgebra::DMatrix;
use serde::Serialize;
use serde_json::{json, Value};

use crate::commands::{partitions, tradeoff_row, LEDGER_TOL};
use crate::report::{Check, Report};
use crate::CliError;

pub const TITLES: [&str; 10] = [
    "singlet ledger",
    "singlet extraction trace",
    "teleportation residue",
    "tradeoff identity",
    "complementarity",
    "asymptotic rate",
    "commutator identities",
    "kronecker factorization and canonical form",
    "sausage suite",
    "report determinism",
];

pub const A2_GRID: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
pub const MAX_N: usize = 200;
pub const ALPHA_GRID: [f64; 7] = [-3.0, -1.0, -0.5, 0.25, 1.0, 2.0, 5.0];

struct Section {
    checks: Vec<Check>,
    results: Value,
}

fn c1() -> Result<Section, CliError> {
    let l = ledger(&BipartiteState::singlet())?;
    Ok(Section {
        checks: vec![
            Check::within("c1_I", (l.total - 2.0).abs(), LEDGER_TOL),
            Check::within("c1_I_A", l.local_a.abs(), LEDGER_TOL),
            Check::within("c1_I_B", l.local_b.abs(), LEDGER_TOL),
            Check::within("c1_I_M", (l.mutual - 2.0).abs(), LEDGER_TOL),
        ],
        results: json!({ "I": l.total, "I_A": l.local_a, "I_B": l.local_b, "I_M": l.mutual }),
    })
}

fn c2() -> Result<Section, CliError> {
    let t = singlet_extraction();
    let half = ComplexMatrix::diagonal(&[0.5, 0.5], &[2])?;
    let dephasing = t.step("b").map_or(f64::NAN, |s| s.entropy_delta_environment);
    let alice = t.final_reduced(&[0]).max_abs_diff(&half);
    let bob = von_neumann_entropy(&t.final_reduced(&[2]))?;
    let meter = 1.0 - fidelity_pure(&basis_ket(2, 0), &t.final_reduced(&[1]));
    Ok(Section {
        checks: vec![
            Check::within("c2_net_gain", (t.deltas.classical_bits_gained - 1.0).abs(), LEDGER_TOL),
            Check::within("c2_dephasing_entropy", (dephasing - 1.0).abs(), LEDGER_TOL),
            Check::within("c2_alice_maximally_mixed", alice, LEDGER_TOL),
            Check::within("c2_bob_pure", bob, LEDGER_TOL),
            Check::within("c2_meter_restored", meter, LEDGER_TOL),
        ],
        results: json!({
            "net_gain": t.deltas.classical_bits_gained,
            "dephasing_entropy": dephasing,
            "bob_entropy": bob,
            "notes": t.notes,
        }),
    })
}

fn c3(seed: u64) -> Result<Section, CliError> {
    let mut rng = seeded(seed);
    let quarter = ComplexMatrix::identity(&[2, 2]).scale(C64::new(0.25, 0.0));
    let (mut fid, mut dev, mut info) = (1.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let psi = haar_ket(2, &mut rng);
        let t = teleport(&psi)?;
        let residual = t.final_reduced(&[0, 1]);
        fid = fid.min(fidelity_pure(&psi, &t.final_reduced(&[2])));
        dev = dev.max(residual.max_abs_diff(&quarter));
        info = info.max(ledger(&BipartiteState::from_density(residual)?)?.total.abs());
    }
    Ok(Section {
        checks: vec![
            Check::slack("c3_fidelity", fid - (1.0 - 1e-9), 0.0),
            Check::within("c3_residual_maximally_mixed", dev, LEDGER_TOL),
            Check::within("c3_residual_information", info, LEDGER_TOL),
        ],
        results: json!({ "trials": 100, "min_fidelity": fid, "max_residual_deviation": dev, "max_residual_information": info }),
    })
}

/// Criteria 4 and 5 share one sweep over (n, a², K_q).
fn c4_c5(seed: u64) -> Result<(Section, Section), CliError> {
    let (mut ledgers, mut worst_identity, mut worst_margin, mut bounds_hold) = (0usize, 0.0f64, f64::INFINITY, true);
    for a2 in A2_GRID {
        for n in 1..=MAX_N {
            for kq in partitions(n, seed) {
                let l = tradeoff_ledger(n, a2, &kq)?;
                worst_identity = worst_identity.max(l.identity_error());
                worst_margin = worst_margin.min(tradeoff_row(&l).margin_eq12);
                let c = check_tradeoff(&l);
                bounds_hold &= c.entropic.holds && c.entropic_pure.holds && c.total.holds;
                ledgers += 1;
            }
        }
    }
    let c4 = Section {
        checks: vec![Check::within("c4_identity", worst_identity, LEDGER_TOL)],
        results: json!({ "ledgers": ledgers, "max_identity_error": worst_identity }),
    };

    let singlet = BipartiteState::singlet();
    let teleport_choice = complementarity_check(&singlet, Extraction { e_d: 1.0, i_c: 0.0 })?;
    let extraction_choice = complementarity_check(&singlet, Extraction { e_d: 0.0, i_c: 1.0 })?;
    // Entropic forms on random pure states, at both extreme choices.
    let mut rng = seeded(seed.wrapping_add(5));
    let mut worst_entropic = f64::INFINITY;
    for dims in [[2, 2], [2, 3], [3, 3]] {
        for _ in 0..20 {
            let s = BipartiteState::from_ket(haar_ket(dims[0] * dims[1], &mut rng), dims)?;
            let res = PureResource::of_state(&s)?;
            for x in [Extraction { e_d: res.entanglement, i_c: 0.0 }, Extraction { e_d: 0.0, i_c: res.i_c() }] {
                let r = complementarity_check_resource(&res, x);
                worst_entropic = worst_entropic.min(r.entropic.margin).min(r.entropic_pure.margin);
            }
        }
    }
    let c5 = Section {
        checks: vec![
            Check::slack("c5_margin_over_sweep", worst_margin, LEDGER_TOL),
            Check::within("c5_teleport_choice_lhs", (teleport_choice.constant.lhs - 1.0).abs(), LEDGER_TOL),
            Check::within("c5_teleport_choice_saturates", teleport_choice.constant.margin.abs(), LEDGER_TOL),
            Check::within("c5_extraction_choice_lhs", (extraction_choice.total.lhs - 1.0).abs(), LEDGER_TOL),
            Check::within("c5_extraction_choice_saturates", extraction_choice.total.margin.abs(), LEDGER_TOL),
            Check::slack("c5_entropic_forms_pure", worst_entropic, LEDGER_TOL),
            Check::holds("c5_sweep_bounds_hold", bounds_hold),
        ],
        results: json!({
            "min_margin": worst_margin,
            "teleport_choice": teleport_choice,
            "extraction_choice": extraction_choice,
            "min_entropic_margin": worst_entropic,
        }),
    };
    Ok((c4, c5))
}

fn c6() -> Result<Section, CliError> {
    let mut checks = Vec::new();
    let mut points = Vec::new();
    for a2 in [0.1, 0.3, 0.5] {
        for n in [20, 50, 100, 200] {
            let r = asymptotic_rate(n, a2)?;
            let bound = 2.0 * (n as f64).log2() / n as f64;
            checks.push(Check::within(format!("c6_gap_n{n}_a2_{a2}"), r.gap, bound));
            points.push(r);
        }
    }
    let half = (1..=MAX_N).map(|n| asymptotic_rate(n, 0.5).map(|r| r.gap)).collect::<Result<Vec<_>, _>>()?;
    let worst_half = half.iter().copied().fold(0.0, f64::max);
    checks.push(Check::within("c6_gap_zero_at_half", worst_half, LEDGER_TOL));
    Ok(Section { checks, results: json!({ "points": points, "max_gap_at_half": worst_half }) })
}

fn c7() -> Result<Section, CliError> {
    let (sz, sx) = parity_phase_pair();
    let global = commutator(&sx, &sz)?.frobenius_norm;
    let mut worst = 0.0f64;
    for ax in ALPHA_GRID {
        for az in ALPHA_GRID {
            let k = commutator(&locc_implementation(Which::Phase, ax).matrix, &locc_implementation(Which::Parity, az).matrix)?;
            worst = worst.max(k.commutator.max_abs_diff(&expected_locc_commutator(ax, az)));
        }
    }
    let k = commutator(&locc_implementation(Which::Phase, 1.0).matrix, &locc_implementation(Which::Parity, 1.0).matrix)?
        .with_entangling(&basis_ket(4, 0), [2, 2])?;
    let entropy = k.entangling.as_ref().map_or(f64::NAN, |d| d.entropy);
    Ok(Section {
        checks: vec![
            Check::within("c7_global_commutator", global, 1e-14),
            Check::within("c7_local_expansion", worst, 1e-12),
            Check::within("c7_entangling_entropy", (entropy - 1.0).abs(), LEDGER_TOL),
        ],
        results: json!({ "global_norm": global, "max_expansion_error": worst, "entangling_entropy": entropy }),
    })
}

fn random_block(d: usize, rng: &mut impl rand::Rng) -> ComplexMatrix {
    let v = haar_ket(d * d, rng);
    ComplexMatrix::plain(DMatrix::from_fn(d, d, |i, j| v[i * d + j]))
}

fn c8(seed: u64) -> Result<Section, CliError> {
    let mut rng = seeded(seed.wrapping_add(8));
    let mut worst_round_trip = 0.0f64;
    for i in 0..1000 {
        let (d1, d2) = (2 + i % 2, 2 + (i / 2) % 2);
        let m = random_block(d1, &mut rng).tensor(&random_block(d2, &mut rng));
        worst_round_trip = worst_round_trip.max(match kron_factorize(&m, [d1, d2])? {
            Factorization::Product { reconstruction_error, .. } => reconstruction_error,
            Factorization::NotProduct { .. } => f64::INFINITY,
        });
    }
    let s = proposition1_search(10_000, 1000, seed)?;
    let again = proposition1_search(10_000, 1000, seed)?;
    Ok(Section {
        checks: vec![
            Check::within("c8_round_trip", worst_round_trip, 1e-10),
            Check::holds("c8_dressed_certified", s.dressed.certified == 1000),
            Check::within("c8_dressing_recovered", s.dressed.max_dressing_mismatch, 1e-8),
            Check::holds("c8_no_false_commuters", s.generic.tested == 10_000 && s.generic.false_commuters == 0),
            Check::holds("c8_reproducible", s == again),
        ],
        results: json!({ "max_round_trip_error": worst_round_trip, "search": s }),
    })
}

#[derive(Serialize)]
struct Verdict {
    input: usize,
    verdict: usize,
    rounds: usize,
}

fn c9(seed: u64) -> Result<Section, CliError> {
    let ops = build_operators();
    let gram = gram_deviation(&build_nine_states());
    let o12 = ops.o1.commutator(&ops.o2)?.max_abs();
    let k = ops.o1_prime.commutator(&ops.o2_prime)?;
    let stated = k.max_abs_diff(&surplus_commutator(C64::new(0.0, -1.0)));
    let mut verdicts = Vec::new();
    let mut identified = true;
    for l in [1, 2, 3, 4, 5, 6, 7, 10, 11] {
        let t = ping_pong(l)?;
        identified &= t.verdict == l && t.alternates() && t == ping_pong(l)?;
        verdicts.push(Verdict { input: l, verdict: t.verdict, rounds: t.rounds.len() });
    }
    let sep = product_commutator_separability(&k, 1000, seed)?;
    Ok(Section {
        checks: vec![
            Check::within("c9_gram", gram, 1e-12),
            Check::within("c9_o1_o2_commute", o12, 1e-12),
            Check::within("c9_o1p_o2p_minus_i_proj_sigma_y", stated, 1e-12),
            Check::holds("c9_ping_pong", identified),
            Check::within("c9_image_negativity", sep.max_negativity, 1e-10),
        ],
        results: json!({
            "gram_deviation": gram,
            "commutator_deviation_from_minus_i_form": stated,
            "commutator_deviation_from_2i_form": k.max_abs_diff(&surplus_commutator(C64::new(0.0, 2.0))),
            "verdicts": verdicts,
            "max_negativity": sep.max_negativity,
        }),
    })
}

#[derive(Serialize)]
struct CriterionSummary {
    criterion: usize,
    title: &'static str,
    passed: bool,
}

pub fn suite(seed: u64) -> Result<Report, CliError> {
    let mut r = Report::new("suite", Some(seed));
    let (s4, s5) = c4_c5(seed)?;
    let sections = [c1()?, c2()?, c3(seed)?, s4, s5, c6()?, c7()?, c8(seed)?, c9(seed)?];
    let mut summary = Vec::new();
    for (i, s) in sections.into_iter().enumerate() {
        summary.push(CriterionSummary {
            criterion: i + 1,
            title: TITLES[i],
            passed: s.checks.iter().all(|c| c.passed),
        });
        r.result(&format!("c{}", i + 1), s.results);
        s.checks.into_iter().for_each(|c| {
            r.check(c);
        });
    }
    r.result("c10", "rerun with the same seed and compare bytes");
    r.result("criteria", summary);
    Ok(r)
}
