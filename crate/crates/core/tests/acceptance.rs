//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_RED` are evaluated exactly like the others and
//! reported as FAIL, but do not fail the run (see the decisions ledger). Set
//! `ACCEPTANCE_STRICT=1` to make any FAIL fatal.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cvmem::conditional::Outcome;
use cvmem::experiments::{
    accumulation_curve, accumulation_curve_with, accumulation_sweep, calibrate_tau_aux, evolve_point,
    integer_tau_probe, jitter_study, oracle_check, overlap_scan, readout_experiment, readout_experiment_with,
    sweep, vee_sequence, Grid, JitterConfig, JitterPoint, MetricsRecord, SweepConfig, CALIBRATED_TAU_AUX,
    READOUT_TOLERANCE,
};
use cvmem::metrics::lambda_delta_gamma_with;
use cvmem::{default_cutoff, MediatorSpec, PhaseConvention, TruncationPolicy};

const KNOWN_RED: &[usize] = &[5, 11];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn within_time(elapsed: Duration, limit: Duration) -> bool {
    elapsed < limit
}

fn max_entropy_at(records: &[MetricsRecord]) -> &MetricsRecord {
    records.iter().max_by(|a, b| a.entropy.total_cmp(&b.entropy)).expect("nonempty")
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let curve = accumulation_curve(1.0, 0.8, 2).unwrap();
    let elapsed = start.elapsed();
    let (s1, s2) = (curve[0].entropy, curve[1].entropy);
    let pass = (s1 - 0.633).abs() <= 0.005 && (s2 - 0.994).abs() <= 0.005 && within_time(elapsed, Duration::from_secs(1));
    verdict(pass, format!("S1={s1:.4} S2={s2:.4} (targets 0.633/0.994 ±0.005) in {elapsed:.2?}"))
}

fn criterion_2() -> Verdict {
    let start = Instant::now();
    let cal = calibrate_tau_aux(1.0, 0.8).unwrap();
    let e1 = readout_experiment(1.0, 0.8, 1, cal.chosen.tau_aux).unwrap().negativity.unwrap();
    let e2 = readout_experiment(1.0, 0.8, 2, cal.chosen.tau_aux).unwrap().negativity.unwrap();
    let elapsed = start.elapsed();
    let literal: Vec<String> = cal
        .literal
        .iter()
        .map(|c| format!("{}→{:.3}/{:.3}", c.label, c.one_passage, c.two_passages))
        .collect();
    let pass = (e1 - 0.55).abs() <= READOUT_TOLERANCE
        && (e2 - 0.87).abs() <= READOUT_TOLERANCE
        && cal.chosen.tau_aux == CALIBRATED_TAU_AUX
        && within_time(elapsed, Duration::from_secs(5));
    verdict(
        pass,
        format!(
            "E1={e1:.4} E2={e2:.4} with {} (rejected: {}) in {elapsed:.2?}",
            cal.chosen.label,
            literal.join(", ")
        ),
    )
}

/// Criterion-3 grid and the point chosen from it: smallest tau among points
/// with `S >= 0.99` and `P >= 0.45`, highest probability at that tau.
fn criterion_3_search() -> (Vec<MetricsRecord>, Vec<MetricsRecord>, Option<MetricsRecord>, Duration) {
    let start = Instant::now();
    let config = SweepConfig::new(Grid::new(0.2, 10.0, 50).unwrap(), Grid::new(0.5, 3.0, 50).unwrap(), vec![Outcome::Positive]);
    let records = sweep(&config).unwrap();
    let vacuum = sweep(&SweepConfig::new(Grid::new(0.2, 10.0, 50).unwrap(), Grid::point(0.0), vec![Outcome::Positive])).unwrap();
    let elapsed = start.elapsed();
    let chosen = records
        .iter()
        .filter(|r| r.entropy >= 0.99 && r.last_conditional_probability >= 0.45)
        .min_by(|a, b| a.tau.total_cmp(&b.tau).then(b.last_conditional_probability.total_cmp(&a.last_conditional_probability)))
        .cloned();
    (records, vacuum, chosen, elapsed)
}

fn criterion_3(records: &[MetricsRecord], vacuum: &[MetricsRecord], chosen: &Option<MetricsRecord>, elapsed: Duration) -> Verdict {
    let hits = records.iter().filter(|r| r.entropy >= 0.99 && r.last_conditional_probability >= 0.45).count();
    let vacuum_zero = vacuum.iter().all(|r| r.entropy == 0.0 && r.joint_probability == 0.0);
    let pass = chosen.is_some() && vacuum_zero && within_time(elapsed, Duration::from_secs(120));
    let at = chosen
        .as_ref()
        .map(|c| format!("first at tau={:.3} alpha={:.3} S={:.4} P={:.4}", c.tau, c.alpha, c.entropy, c.last_conditional_probability))
        .unwrap_or_else(|| "none".into());
    verdict(pass, format!("{hits} of 2500 points with S>=0.99 & P>=0.45, {at}; alpha=0 row all zero: {vacuum_zero}; {elapsed:.2?}"))
}

/// Passage-2 and passage-3 maxima over the criterion-4 window, with their
/// locations.
fn criterion_4_search() -> ((f64, f64, f64), (f64, f64, f64), Duration) {
    let start = Instant::now();
    let curves =
        accumulation_sweep(Grid::new(5.0, 20.0, 301).unwrap(), Grid::new(2.0, 3.0, 51).unwrap(), 3, PhaseConvention::MinusI)
            .unwrap();
    let elapsed = start.elapsed();
    let best = |k: usize| {
        let c = curves.iter().max_by(|a, b| a[k].entropy.total_cmp(&b[k].entropy)).unwrap();
        (c[k].entropy, c[k].tau, c[k].alpha)
    };
    (best(1), best(2), elapsed)
}

fn criterion_4(two: (f64, f64, f64), three: (f64, f64, f64), elapsed: Duration) -> Verdict {
    let pass = two.0 >= 1.8 && (2.3..=2.7).contains(&three.0) && within_time(elapsed, Duration::from_secs(600));
    verdict(
        pass,
        format!(
            "max S2={:.4} at (tau {:.2}, alpha {:.2}); max S3={:.4} at (tau {:.2}, alpha {:.2}); {elapsed:.2?}",
            two.0, two.1, two.2, three.0, three.1, three.2
        ),
    )
}

fn criterion_5() -> Verdict {
    let np = vec![Outcome::Negative, Outcome::Positive];
    let short = sweep(&SweepConfig::new(Grid::new(0.0, 0.2, 21).unwrap(), Grid::point(1.0), np.clone())).unwrap();
    let short_max = max_entropy_at(&short);
    let grid = sweep(&SweepConfig::new(Grid::new(0.2, 20.0, 199).unwrap(), Grid::new(0.5, 3.0, 26).unwrap(), np)).unwrap();
    let best = max_entropy_at(&grid);
    let pass = short_max.entropy < 0.05 && best.entropy > 1.0 && best.entropy < 1.4;
    verdict(
        pass,
        format!(
            "max S over tau<=0.2 at alpha=1: {:.4} (tau {:.2}); grid max S={:.4} at (tau {:.2}, alpha {:.2}), want (1.0, 1.4)",
            short_max.entropy, short_max.tau, best.entropy, best.tau, best.alpha
        ),
    )
}

fn criterion_6() -> Verdict {
    let r = &integer_tau_probe(0.01).unwrap()[0];
    let pass = r.tau == 1.0 && r.entropy > 0.0 && r.last_conditional_probability < 1e-3;
    verdict(pass, format!("tau=1 alpha=0.01: S={:.4e} P={:.3e}", r.entropy, r.last_conditional_probability))
}

fn criterion_7() -> Verdict {
    let reports: Vec<_> = [(3, 11), (8, 7)].iter().map(|&(n, seed)| oracle_check(n, 10, seed).unwrap()).collect();
    let two = reports.iter().map(|r| r.max_deviation_two_level).fold(0.0, f64::max);
    let vee = reports.iter().map(|r| r.max_deviation_vee).fold(0.0, f64::max);
    verdict(two < 1e-10 && vee < 1e-10, format!("n_cut 3 and 8, 10 draws each: two-level {two:.2e}, vee {vee:.2e}"))
}

fn criterion_8(points: &[(f64, f64, usize)]) -> Verdict {
    let mut worst: f64 = 0.0;
    for &(tau, alpha, n) in points {
        let spec = MediatorSpec::default();
        let base = accumulation_curve_with(tau, alpha, n, &spec, PhaseConvention::MinusI, None).unwrap();
        let raised = accumulation_curve_with(tau, alpha, n, &spec, PhaseConvention::MinusI, Some(default_cutoff(alpha, n) + 10))
            .unwrap();
        worst = worst.max((base[n - 1].entropy - raised[n - 1].entropy).abs());
    }
    verdict(worst < 1e-6, format!("max |dS| over {} points with n_cut+10: {worst:.2e}", points.len()))
}

fn criterion_9() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut track = |a: f64, b: f64| worst = worst.max((a - b).abs());
    let phases = [PhaseConvention::MinusI, PhaseConvention::PlusI];
    let spec = MediatorSpec::default();
    for &(tau, alpha) in &[(1.0, 0.8), (0.6, 2.7), (13.95, 2.18), (2.3, 1.1)] {
        let policy = TruncationPolicy::for_run(alpha, 3);
        let per: Vec<Vec<MetricsRecord>> = phases
            .iter()
            .map(|&ph| {
                [vec![Outcome::Positive; 3], vec![Outcome::Negative, Outcome::Positive]]
                    .iter()
                    .map(|o| evolve_point(tau, &vec![tau; o.len()], alpha, o, &spec, &policy, ph).unwrap().1)
                    .chain([1, 2].iter().map(|&n| readout_experiment_with(tau, alpha, n, CALIBRATED_TAU_AUX, ph, None).unwrap()))
                    .chain(std::iter::once(vee_sequence(tau, alpha, 2, ph, None).unwrap()))
                    .collect()
            })
            .collect();
        for (a, b) in per[0].iter().zip(&per[1]) {
            track(a.entropy, b.entropy);
            track(a.joint_probability, b.joint_probability);
            track(a.negativity.unwrap_or(0.0), b.negativity.unwrap_or(0.0));
        }
        let o: Vec<_> = phases.iter().map(|&ph| lambda_delta_gamma_with(tau, alpha, &policy, ph).unwrap()).collect();
        track(o[0].gamma_lambda.norm(), o[1].gamma_lambda.norm());
        track(o[0].delta_gamma.norm(), o[1].delta_gamma.norm());
        track(o[0].delta_lambda.norm(), o[1].delta_lambda.norm());
        track(o[0].gamma_lambda_signed, o[1].gamma_lambda_signed);
    }
    verdict(worst < 1e-10, format!("max deviation under the ±i swap: {worst:.2e}"))
}

const JITTER_SEED: u64 = 20_240_601;

fn jitter_relative_shift(c: &MetricsRecord) -> f64 {
    let point = JitterPoint::new(c.alpha, vec![Outcome::Positive]);
    let s = jitter_study(&point, &JitterConfig::new(c.tau, 0.05, 200, JITTER_SEED).unwrap()).unwrap();
    (s.mean_entropy - s.noiseless_entropy).abs() / s.noiseless_entropy
}

fn criterion_10(chosen: &Option<MetricsRecord>, grid: &[MetricsRecord]) -> Verdict {
    let Some(c) = chosen else {
        return verdict(false, "no criterion-3 point available".into());
    };
    let point = JitterPoint::new(c.alpha, vec![Outcome::Positive]);
    let jitter = JitterConfig::new(c.tau, 0.05, 200, JITTER_SEED).unwrap();
    let first = jitter_study(&point, &jitter).unwrap();
    let second = jitter_study(&point, &jitter).unwrap();
    let rel = (first.mean_entropy - first.noiseless_entropy).abs() / first.noiseless_entropy;
    let identical = first == second;
    // Informational: how many qualifying grid points would pass on their own.
    let qualifying: Vec<&MetricsRecord> =
        grid.iter().filter(|r| r.entropy >= 0.99 && r.last_conditional_probability >= 0.45).collect();
    let robust = qualifying.iter().filter(|r| jitter_relative_shift(r) <= 0.10).count();
    verdict(
        rel <= 0.10 && identical,
        format!(
            "tau={:.3} alpha={:.3}: noiseless {:.4}, mean {:.4} ± {:.4} (rel {:.2}%), rerun identical: {identical}; \
             {robust}/{} qualifying points within 10%",
            c.tau,
            c.alpha,
            first.noiseless_entropy,
            first.mean_entropy,
            first.std_entropy,
            100.0 * rel,
            qualifying.len()
        ),
    )
}

fn criterion_11() -> Verdict {
    let scan = overlap_scan(6.0, Grid::new(1.0, 3.0, 201).unwrap()).unwrap();
    let (ex, ga) = (&scan.exact_crossings, &scan.gaussian_crossings);
    let worst = ex.iter().zip(ga).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let pass = ex.len() == ga.len() && worst <= 0.01;
    let head = |v: &[f64]| v.iter().take(3).map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(",");
    verdict(
        pass,
        format!(
            "{} exact vs {} closed-form crossings, max paired gap {worst:.3}; first exact [{}] closed-form [{}]",
            ex.len(),
            ga.len(),
            head(ex),
            head(ga)
        ),
    )
}

fn criterion_12() -> Verdict {
    let e: Vec<f64> =
        (0..=2).map(|n| readout_experiment(1.0, 0.8, n, CALIBRATED_TAU_AUX).unwrap().negativity.unwrap()).collect();
    verdict(e[0] < e[1] && e[1] < e[2], format!("E(n=0,1,2) = {:.4}, {:.4}, {:.4}", e[0], e[1], e[2]))
}

fn main() -> ExitCode {
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let (grid3, vacuum3, chosen3, t3) = criterion_3_search();
    let (two4, three4, t4) = criterion_4_search();
    let convergence_points = [(1.0, 0.8, 1), (1.0, 0.8, 2), (two4.1, two4.2, 2), (three4.1, three4.2, 3)];

    let results: Vec<(usize, &str, Verdict)> = vec![
        (1, "point reproduction", criterion_1()),
        (2, "readout reproduction", criterion_2()),
        (3, "region reproduction", criterion_3(&grid3, &vacuum3, &chosen3, t3)),
        (4, "accumulation", criterion_4(two4, three4, t4)),
        (5, "negative-positive sequence", criterion_5()),
        (6, "integer-tau anomaly", criterion_6()),
        (7, "oracle equivalence", criterion_7()),
        (8, "convergence", criterion_8(&convergence_points)),
        (9, "phase-convention invariance", criterion_9()),
        (10, "jitter robustness", criterion_10(&chosen3, &grid3)),
        (11, "gaussian-overlap shape", criterion_11()),
        (12, "monotone readout", criterion_12()),
    ];

    let mut unexpected = Vec::new();
    for (id, name, v) in &results {
        let status = if v.pass { "PASS" } else { "FAIL" };
        let note = if !v.pass && KNOWN_RED.contains(id) { " [known red]" } else { "" };
        println!("criterion {id:>2} {status}{note} {name}: {}", v.detail);
        if !v.pass && (strict || !KNOWN_RED.contains(id)) {
            unexpected.push(*id);
        }
    }
    let passed = results.iter().filter(|(_, _, v)| v.pass).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected failures {unexpected:?}");
        ExitCode::FAILURE
    }
}
