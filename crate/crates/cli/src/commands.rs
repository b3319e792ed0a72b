use locc_core::commutators::{
    bell_basis, commutator, expected_locc_commutator, locc_implementation, parity_phase_infimum_trend,
    parity_phase_pair, proposition1_certify, proposition1_search, restricted_commutator_min,
    BlochObservable, ParityPhaseFamily, ProductObservable, Which,
};
use locc_core::ledger::{classical_bound_check, ledger, mixed_state_bounds, pure_state_quantities};
use locc_core::ops::{sigma_x, sigma_y};
use locc_core::protocols::{
    asymptotic_rate, check_tradeoff, complementarity_check, concentration_outcomes, singlet_extraction,
    teleport, tradeoff_ledger, Extraction, TradeoffLedger,
};
use locc_core::qmat::{basis_ket, binary_entropy, fidelity_pure, ket_pairs, von_neumann_entropy};
use locc_core::random::{haar_ket, seeded};
use locc_core::sausage::{
    build_nine_states, build_operators, gram_deviation, modified_basis, o1_measurement_equivalence,
    ping_pong, product_commutator_separability, surplus_commutator, SurplusLabelFamily,
};
use locc_core::{BipartiteState, ComplexMatrix, C64};
use rand::Rng;
use serde::Serialize;

use crate::args::Opts;
use crate::report::{format_float, Check, Report};
use crate::state_spec::parse_state;
use crate::CliError;

pub const DEFAULT_SEED: u64 = 0;
pub const LEDGER_TOL: f64 = 1e-9;
pub const COMMUTATOR_TOL: f64 = 1e-12;
/// Exhaustive partition sweeps up to this many copies.
pub const EXHAUSTIVE_MAX_N: usize = 12;
pub const RANDOM_PARTITIONS: usize = 100;

fn require<T: Copy>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for this subcommand")))
}

pub fn info(opts: &Opts) -> Result<Report, CliError> {
    let spec = opts.state.as_deref().unwrap_or("singlet");
    let s = parse_state(spec)?;
    let mut r = Report::new("info", None);
    r.input("state", spec).input("dims", s.dims());
    let l = ledger(&s)?;
    r.check(Check::within("decomposition", l.decomposition_error(), LEDGER_TOL));
    r.check(Check::slack("mutual_in_range", l.mutual_bound_margin(s.dims()), LEDGER_TOL));
    if let Some(e) = l.deficit_sum_error() {
        r.check(Check::within("deficits_sum_to_mutual", e, LEDGER_TOL));
    }
    r.result("ledger", &l).result("pure", s.is_pure()).result("i_c_bounds", mixed_state_bounds(&s)?);
    if s.is_pure() {
        r.result("pure_quantities", pure_state_quantities(&s)?);
    }
    if let Ok(cb) = classical_bound_check(&s) {
        r.check(Check::slack("classical_mutual_below_entropy", cb.entropy_margin, LEDGER_TOL));
        r.check(Check::slack("classical_mutual_below_log_dim", cb.dimension_margin, LEDGER_TOL));
        r.result("classical_bound", cb);
    }
    Ok(r)
}

fn maximally_mixed_qubit() -> ComplexMatrix {
    ComplexMatrix::diagonal(&[0.5, 0.5], &[2]).expect("qubit")
}

pub fn singlet_demo(_: &Opts) -> Result<Report, CliError> {
    let mut r = Report::new("singlet-demo", None);
    let t = singlet_extraction();
    let dephasing = t.step("b").map_or(f64::NAN, |s| s.entropy_delta_environment);
    r.check(Check::within("net_local_gain_one_bit", (t.deltas.classical_bits_gained - 1.0).abs(), LEDGER_TOL));
    r.check(Check::within("dephasing_environment_one_bit", (dephasing - 1.0).abs(), LEDGER_TOL));
    r.check(Check::within(
        "alice_maximally_mixed",
        t.final_reduced(&[0]).max_abs_diff(&maximally_mixed_qubit()),
        LEDGER_TOL,
    ));
    r.check(Check::within("bob_pure", von_neumann_entropy(&t.final_reduced(&[2]))?, LEDGER_TOL));
    r.check(Check::within(
        "meter_restored",
        1.0 - fidelity_pure(&basis_ket(2, 0), &t.final_reduced(&[1])),
        LEDGER_TOL,
    ));
    r.check(Check::within("classical_channel_faithful", t.channel_violation(), 1e-10));

    let singlet = BipartiteState::singlet();
    let teleport_choice = complementarity_check(&singlet, Extraction { e_d: 1.0, i_c: 0.0 })?;
    let extraction_choice = complementarity_check(&singlet, Extraction { e_d: 0.0, i_c: 1.0 })?;
    r.check(Check::within("teleport_choice_saturates", teleport_choice.constant.margin.abs(), LEDGER_TOL));
    r.check(Check::within("extraction_choice_saturates", extraction_choice.total.margin.abs(), LEDGER_TOL));
    r.result("trace", &t)
        .result("teleport_choice", teleport_choice)
        .result("extraction_choice", extraction_choice);
    Ok(r)
}

#[derive(Serialize)]
struct TeleportStats {
    trials: usize,
    min_fidelity: f64,
    max_residual_deviation: f64,
    max_residual_information: f64,
}

pub fn teleport_demo(opts: &Opts) -> Result<Report, CliError> {
    let seed = opts.seed.unwrap_or(DEFAULT_SEED);
    let trials = opts.trials.unwrap_or(1).max(1);
    let mut r = Report::new("teleport-demo", Some(seed));
    r.input("trials", trials);
    let mut rng = seeded(seed);
    let quarter = ComplexMatrix::identity(&[2, 2]).scale(C64::new(0.25, 0.0));
    let mut stats = TeleportStats { trials, min_fidelity: 1.0, max_residual_deviation: 0.0, max_residual_information: 0.0 };
    for i in 0..trials {
        let psi = haar_ket(2, &mut rng);
        let t = teleport(&psi)?;
        let residual = t.final_reduced(&[0, 1]);
        let info = ledger(&BipartiteState::from_density(residual.clone())?)?.total;
        stats.min_fidelity = stats.min_fidelity.min(fidelity_pure(&psi, &t.final_reduced(&[2])));
        stats.max_residual_deviation = stats.max_residual_deviation.max(residual.max_abs_diff(&quarter));
        stats.max_residual_information = stats.max_residual_information.max(info.abs());
        if i == 0 {
            r.result("input", ket_pairs(&psi)).result("trace", &t);
        }
    }
    r.check(Check::slack("bob_fidelity", stats.min_fidelity - (1.0 - 1e-9), 0.0));
    r.check(Check::within("residual_maximally_mixed", stats.max_residual_deviation, LEDGER_TOL));
    r.check(Check::within("residual_information_zero", stats.max_residual_information, LEDGER_TOL));
    r.result("stats", stats);
    Ok(r)
}

fn gap_bound(n: usize) -> f64 {
    2.0 * (n as f64).log2() / n as f64
}

pub fn concentrate(opts: &Opts) -> Result<Report, CliError> {
    let n = require(opts.n, "n")?;
    let a2 = require(opts.a2, "a2")?;
    let mut r = Report::new("concentrate", None);
    r.input("n", n).input("a2", a2);
    let outcomes = concentration_outcomes(n, a2)?;
    let total: f64 = outcomes.iter().map(|o| o.p_k).sum();
    let l = tradeoff_ledger(n, a2, &[])?;
    let avg: f64 = outcomes.iter().map(|o| o.p_k * o.log2_rank).sum();
    let margin = avg + l.i_er - n as f64 * binary_entropy(a2);
    let rate = asymptotic_rate(n, a2)?;
    r.check(Check::within("probabilities_sum_to_one", (total - 1.0).abs(), LEDGER_TOL));
    r.check(Check::slack("entanglement_not_exceeded", margin, LEDGER_TOL));
    if n >= 2 {
        r.check(Check::within("gap_within_log_bound", rate.gap, gap_bound(n)));
    }
    r.result("outcomes", outcomes)
        .result("mean_log2_rank", avg)
        .result("outcome_entropy", l.i_er)
        .result("complementarity_margin", margin)
        .result("asymptotic", rate);
    Ok(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct TradeoffRow {
    pub n: usize,
    pub a2: f64,
    pub kq_mask: String,
    pub e_d: f64,
    pub i_c1: f64,
    pub i_c2: f64,
    pub i_er: f64,
    pub i_total: f64,
    pub margin_eq12: f64,
    pub gap_asymptotic: f64,
}

/// Hex mask of the outcomes in `k_q`, bit k for outcome k.
pub fn kq_mask(n: usize, k_q: &[usize]) -> String {
    let mut bits = vec![false; n + 1];
    k_q.iter().for_each(|&k| bits[k] = true);
    let nibbles: Vec<u8> = bits
        .chunks(4)
        .map(|c| c.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | ((b as u8) << i)))
        .collect();
    let digits: String = nibbles.iter().rev().map(|v| format!("{v:x}")).collect();
    let trimmed = digits.trim_start_matches('0');
    format!("0x{}", if trimmed.is_empty() { "0" } else { trimmed })
}

pub fn tradeoff_row(l: &TradeoffLedger) -> TradeoffRow {
    let n = l.n as f64;
    let s_a = binary_entropy(l.a2);
    TradeoffRow {
        n: l.n,
        a2: l.a2,
        kq_mask: kq_mask(l.n, &l.k_q),
        e_d: l.e_d_p,
        i_c1: l.i_c1_p,
        i_c2: l.i_c2_p,
        i_er: l.i_er,
        i_total: l.i_total,
        margin_eq12: (2.0 * n - l.closed_form) - n * s_a,
        gap_asymptotic: (l.i_total / n - (2.0 - s_a)).abs(),
    }
}

pub fn parse_kq(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| CliError::Usage(format!("--kq: {t:?} is not a nonnegative integer"))))
        .collect()
}

/// Every partition for small n, otherwise `RANDOM_PARTITIONS` seeded ones.
pub fn partitions(n: usize, seed: u64) -> Vec<Vec<usize>> {
    if n <= EXHAUSTIVE_MAX_N {
        (0u32..1 << (n + 1))
            .map(|mask| (0..=n).filter(|&k| mask >> k & 1 == 1).collect())
            .collect()
    } else {
        let mut rng = seeded(seed ^ n as u64);
        (0..RANDOM_PARTITIONS)
            .map(|_| (0..=n).filter(|_| rng.random_bool(0.5)).collect())
            .collect()
    }
}

pub struct Tradeoff {
    pub report: Report,
    pub rows: Vec<TradeoffRow>,
}

pub fn tradeoff(opts: &Opts) -> Result<Tradeoff, CliError> {
    let n = require(opts.n, "n")?;
    let a2 = require(opts.a2, "a2")?;
    let seed = opts.seed.unwrap_or(DEFAULT_SEED);
    let sweep = opts.kq.is_none();
    let mut r = Report::new("tradeoff", sweep.then_some(seed));
    r.input("n", n).input("a2", a2);
    let parts = match &opts.kq {
        Some(text) => vec![parse_kq(text)?],
        None => partitions(n, seed),
    };
    let mut rows = Vec::with_capacity(parts.len());
    let (mut worst_identity, mut worst_margin, mut all_hold) = (0.0f64, f64::INFINITY, true);
    for kq in &parts {
        let l = tradeoff_ledger(n, a2, kq)?;
        let c = check_tradeoff(&l);
        worst_identity = worst_identity.max(l.identity_error());
        all_hold &= c.all_hold();
        let row = tradeoff_row(&l);
        worst_margin = worst_margin.min(row.margin_eq12);
        if !sweep {
            r.input("kq", &l.k_q).result("ledger", &l).result("complementarity", c);
        }
        rows.push(row);
    }
    r.check(Check::within("identity", worst_identity, LEDGER_TOL));
    r.check(Check::slack("complementarity_margin", worst_margin, LEDGER_TOL));
    r.check(Check::holds("complementarity_bounds", all_hold));
    r.result("partitions", rows.len()).result("rows", &rows);
    Ok(Tradeoff { report: r, rows })
}

pub fn rows_to_csv(rows: &[TradeoffRow]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "a2", "kq_mask", "e_d", "i_c1", "i_c2", "i_er", "i_total", "margin_eq12", "gap_asymptotic"])
        .map_err(|e| CliError::Io(e.to_string()))?;
    for row in rows {
        let f = format_float;
        w.write_record([
            row.n.to_string(),
            f(row.a2),
            row.kq_mask.clone(),
            f(row.e_d),
            f(row.i_c1),
            f(row.i_c2),
            f(row.i_er),
            f(row.i_total),
            f(row.margin_eq12),
            f(row.gap_asymptotic),
        ])
        .map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Serialize)]
struct BellRow {
    state: &'static str,
    sigma_z: f64,
    sigma_x: f64,
}

/// Entanglement entropy of K|00⟩ ∝ |10⟩ + α|01⟩.
fn entangling_entropy_oracle(alpha: f64) -> f64 {
    binary_entropy(1.0 / (1.0 + alpha * alpha))
}

pub fn commutator_cmd(opts: &Opts) -> Result<Report, CliError> {
    let alpha = opts.alpha.unwrap_or(1.0);
    let mut r = Report::new("commutator", None);
    r.input("alpha_x", alpha).input("alpha_z", 1.0);
    let (sz, sx) = parity_phase_pair();
    let global = commutator(&sx, &sz)?;
    let other = commutator(&sigma_x().tensor(&sigma_y()), &sz)?;
    let bell: Vec<BellRow> = bell_basis()
        .into_iter()
        .map(|(state, k)| BellRow { state, sigma_z: sz.expectation(&k).re, sigma_x: sx.expectation(&k).re })
        .collect();

    let x = locc_implementation(Which::Phase, alpha);
    let z = locc_implementation(Which::Parity, 1.0);
    let local = commutator(&x.matrix, &z.matrix)?.with_entangling(&basis_ket(4, 0), [2, 2])?;
    let expected = expected_locc_commutator(alpha, 1.0);
    let entropy = local.entangling.as_ref().map_or(f64::NAN, |d| d.entropy);
    let minimum = restricted_commutator_min(&ParityPhaseFamily { lo: 0.1, hi: 10.0 })?;
    let trend = parity_phase_infimum_trend(&[0.5, 0.2, 0.1, 0.05, 0.01], 10.0)?;

    r.check(Check::within("global_commutator_zero", global.frobenius_norm, 1e-14));
    r.check(Check::within("other_pair_commutes", other.frobenius_norm, 1e-14));
    r.check(Check::within("local_commutator_expansion", local.commutator.max_abs_diff(&expected), COMMUTATOR_TOL));
    r.check(Check::within("anti_hermitian", local.anti_hermiticity_error, COMMUTATOR_TOL));
    r.check(Check::within("entangling_entropy", (entropy - entangling_entropy_oracle(alpha)).abs(), LEDGER_TOL));
    r.check(Check::slack("restricted_minimum_at_least_four", minimum.min_norm - 4.0, 0.0));

    r.result("bit_legend", "eigenvalue +1 is bit 0, eigenvalue -1 is bit 1")
        .result("bell_expectations", bell)
        .result("global", global)
        .result("other_pair", other)
        .result("implementations", [&x, &z])
        .result("local", local)
        .result("restricted_minimum", minimum)
        .result("infimum_trend", trend);
    Ok(r)
}

pub fn prop1(opts: &Opts) -> Result<Report, CliError> {
    let seed = opts.seed.unwrap_or(DEFAULT_SEED);
    let samples = opts.samples.unwrap_or(1000);
    if samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let mut r = Report::new("prop1", Some(seed));
    r.input("dressed_samples", samples).input("generic_samples", 10 * samples);
    let s = proposition1_search(10 * samples, samples, seed)?;
    let canonical = proposition1_certify(
        &ProductObservable::new(BlochObservable::z(), BlochObservable::z()),
        &ProductObservable::new(BlochObservable::x(), BlochObservable::x()),
    )?;
    let shifted = proposition1_certify(
        &ProductObservable::new(BlochObservable::new(0.3, [0.0, 0.0, 1.0]), BlochObservable::z()),
        &ProductObservable::new(BlochObservable::x(), BlochObservable::x()),
    );
    r.check(Check::holds("canonical_certified", canonical.certificate().is_some()));
    r.check(Check::holds("shifted_rejected", shifted.is_err()));
    r.check(Check::holds("no_false_commuters", s.generic.false_commuters == 0));
    r.check(Check::holds("generic_rejected", s.generic.rejected == s.generic.tested));
    r.check(Check::holds("dressed_all_certified", s.dressed.certified == s.dressed.tested));
    r.check(Check::within("canonical_residual", s.dressed.max_canonical_residual, 1e-8));
    r.check(Check::within("dressing_recovered", s.dressed.max_dressing_mismatch, 1e-8));
    r.result("search", &s)
        .result("canonical", canonical)
        .result("shifted", shifted.map_err(|e| e.to_string()).err());
    Ok(r)
}

pub fn parse_label(text: &str) -> Result<usize, CliError> {
    let digits = text.trim().trim_start_matches("psi").trim_start_matches('ψ');
    digits.parse().map_err(|_| CliError::Usage(format!("--input: {text:?} is not a state label like psi3")))
}

pub fn sausage(opts: &Opts) -> Result<Report, CliError> {
    let seed = opts.seed.unwrap_or(DEFAULT_SEED);
    let trials = opts.trials.unwrap_or(1000);
    let mut r = Report::new("sausage", Some(seed));
    r.input("trials", trials);
    let ops = build_operators();
    let k = ops.o1_prime.commutator(&ops.o2_prime)?;
    let expected = surplus_commutator(C64::new(0.0, 2.0));
    let stated = surplus_commutator(C64::new(0.0, -1.0));
    r.check(Check::within("gram_nine", gram_deviation(&build_nine_states()), COMMUTATOR_TOL));
    r.check(Check::within("gram_modified", gram_deviation(&modified_basis()), COMMUTATOR_TOL));
    r.check(Check::within("o1_o2_commute", ops.o1.commutator(&ops.o2)?.max_abs(), COMMUTATOR_TOL));
    r.check(Check::within("o1p_o2p_is_2i_proj_sigma_y", k.max_abs_diff(&expected), COMMUTATOR_TOL));

    let transcripts = match &opts.input {
        Some(label) => vec![ping_pong(parse_label(label)?)?],
        None => [1, 2, 3, 4, 5, 6, 7, 10, 11].into_iter().map(ping_pong).collect::<Result<_, _>>()?,
    };
    r.input("labels", transcripts.iter().map(|t| t.input).collect::<Vec<_>>());
    r.check(Check::holds(
        "ping_pong_identifies",
        transcripts.iter().all(|t| t.verdict == t.input && t.alternates()),
    ));
    let eq = o1_measurement_equivalence()?;
    r.check(Check::holds("o1_prime_implements_o1", eq.holds(1e-10)));
    let sep = product_commutator_separability(&k, trials, seed)?;
    r.check(Check::holds("images_separable", sep.entangled == 0));
    r.check(Check::within("image_negativity", sep.max_negativity, 1e-10));
    let family = restricted_commutator_min(&SurplusLabelFamily { lo: -8, hi: 8 })?;
    r.check(Check::within("restricted_minimum_sqrt2", (family.min_norm - std::f64::consts::SQRT_2).abs(), COMMUTATOR_TOL));

    r.result("commutator", &k)
        .result("commutator_norm", k.frobenius_norm())
        .result("deviation_from_minus_i_form", k.max_abs_diff(&stated))
        .result("transcripts", transcripts)
        .result("equivalence", eq)
        .result("separability", sep)
        .result("restricted_minimum", family);
    Ok(r)
}
