//! Parameter sweeps, accumulation curves, the auxiliary-qubit readout and
//! Monte Carlo robustness under interaction-time jitter.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::conditional::{vee_passage, EffectiveOperator, MediatorSpec, Outcome};
use crate::error::{Error, Result};
use crate::fock::{coherent_amplitudes, default_cutoff, product_state, JointState, TruncationPolicy};
use crate::jc::{JcBlocks, PhaseConvention, VeePropagator};
use crate::metrics::{
    aux_readout_with, fit_scale, lambda_delta_gamma_with, negativity_measure, state_entropy, zero_crossings,
    OverlapReport,
};
use crate::oracle::{spec_operator_oracle, vee_exp_oracle};
use crate::C64;

/// Name of the generator behind [`jitter_study`], recorded in manifests.
pub const JITTER_GENERATOR: &str = "ChaCha8Rng::seed_from_u64";

/// Auxiliary-qubit interaction time that reproduces the readout values
/// `0.55` (one passage) and `0.87` (two passages) at `tau = 1`,
/// `alpha = 0.8`; see [`calibrate_tau_aux`].
pub const CALIBRATED_TAU_AUX: f64 = 0.5;
pub const CALIBRATED_TAU_AUX_LABEL: &str = "calibrated-scan:0.50 (literal 0.6 and 0.6*pi rejected)";

/// Evenly spaced values from `min` to `max` inclusive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        if steps < 1 || !(min.is_finite() && max.is_finite()) || min > max {
            return Err(Error::InvalidParameter(format!("invalid grid ({min}, {max}, {steps})")));
        }
        Ok(Self { min, max, steps })
    }

    pub fn point(value: f64) -> Self {
        Self { min: value, max: value, steps: 1 }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let h = (self.max - self.min) / (self.steps - 1) as f64;
        (0..self.steps).map(|k| if k + 1 == self.steps { self.max } else { self.min + h * k as f64 }).collect()
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub tau: Grid,
    pub alpha: Grid,
    pub outcomes: Vec<Outcome>,
    pub spec: MediatorSpec,
    /// Fixed cutoff; `None` uses [`default_cutoff`] per point.
    pub cutoff: Option<usize>,
    pub record_overlaps: bool,
    pub phase: PhaseConvention,
}

impl SweepConfig {
    pub fn new(tau: Grid, alpha: Grid, outcomes: Vec<Outcome>) -> Self {
        Self {
            tau,
            alpha,
            outcomes,
            spec: MediatorSpec::default(),
            cutoff: None,
            record_overlaps: false,
            phase: PhaseConvention::default(),
        }
    }

    /// Grid points in canonical order: `tau` outer, `alpha` inner.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let alphas = self.alpha.values();
        self.tau.values().into_iter().flat_map(|t| alphas.iter().map(move |&a| (t, a))).collect()
    }

    fn policy(&self, alpha: f64) -> Result<TruncationPolicy> {
        match self.cutoff {
            Some(n) => TruncationPolicy::with_cutoff(n),
            None => Ok(TruncationPolicy::for_run(alpha, self.outcomes.len())),
        }
    }
}

/// Metrics of one parameter point.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricsRecord {
    pub tau: f64,
    pub alpha: f64,
    pub n_passages: usize,
    pub entropy: f64,
    pub joint_probability: f64,
    pub last_conditional_probability: f64,
    pub conditional_probabilities: Vec<f64>,
    pub overlaps: Option<OverlapReport>,
    pub negativity: Option<f64>,
    /// Passage at which the requested outcome became impossible.
    pub zero_probability_at: Option<usize>,
    pub n_cut: usize,
}

impl MetricsRecord {
    fn empty(tau: f64, alpha: f64, n_passages: usize, n_cut: usize) -> Self {
        Self {
            tau,
            alpha,
            n_passages,
            entropy: 0.0,
            joint_probability: 1.0,
            last_conditional_probability: 1.0,
            conditional_probabilities: Vec::new(),
            overlaps: None,
            negativity: None,
            zero_probability_at: None,
            n_cut,
        }
    }

    fn mark_impossible(&mut self, passage: usize) {
        self.entropy = 0.0;
        self.joint_probability = 0.0;
        self.last_conditional_probability = 0.0;
        self.zero_probability_at = Some(passage);
    }

    pub fn is_flagged(&self) -> bool {
        self.zero_probability_at.is_some()
    }
}

/// State of the register after a sequence of passages from `|alpha, alpha>`.
/// `taus_b[k]` is the cavity-b time of passage `k`; cavity a always uses
/// `tau_a`. Zero-probability outcomes are flagged in the record and leave the
/// returned state at its last valid value.
pub fn evolve_point(
    tau_a: f64,
    taus_b: &[f64],
    alpha: f64,
    outcomes: &[Outcome],
    spec: &MediatorSpec,
    policy: &TruncationPolicy,
    phase: PhaseConvention,
) -> Result<(JointState, MetricsRecord)> {
    assert_eq!(taus_b.len(), outcomes.len(), "one cavity-b time per passage");
    let coherent = coherent_amplitudes(alpha, policy)?;
    let mut state = product_state(&coherent, &coherent)?;
    let mut record = MetricsRecord::empty(tau_a, alpha, outcomes.len(), policy.n_cut());
    let blocks_a = JcBlocks::new(tau_a, policy, phase)?;
    let mut cached_b: Option<JcBlocks> = None;
    for (k, (&outcome, &tau_b)) in outcomes.iter().zip(taus_b).enumerate() {
        if cached_b.as_ref().is_none_or(|b| b.tau() != tau_b) {
            cached_b = Some(JcBlocks::new(tau_b, policy, phase)?);
        }
        let blocks_b = cached_b.as_ref().expect("set above");
        let op = EffectiveOperator::for_outcome(spec, outcome, &blocks_a, blocks_b)?;
        let raw = JointState::from_coeffs(op.apply(state.coeffs())?);
        let p = raw.norm_sq();
        if p < crate::ZERO_PROBABILITY {
            record.conditional_probabilities.push(p);
            record.mark_impossible(k);
            return Ok((state, record));
        }
        state = raw.normalize()?;
        record.conditional_probabilities.push(p);
        record.joint_probability *= p;
        record.last_conditional_probability = p;
    }
    if !outcomes.is_empty() {
        record.entropy = state_entropy(&state)?;
    }
    Ok((state, record))
}

fn evaluate(config: &SweepConfig, tau: f64, alpha: f64) -> Result<MetricsRecord> {
    let policy = config.policy(alpha)?;
    let taus_b = vec![tau; config.outcomes.len()];
    let (_, mut record) = evolve_point(tau, &taus_b, alpha, &config.outcomes, &config.spec, &policy, config.phase)?;
    if config.record_overlaps && alpha > 0.0 {
        record.overlaps = Some(lambda_delta_gamma_with(tau, alpha, &policy, config.phase)?);
    }
    Ok(record)
}

/// One record per grid point in canonical order. Impossible outcomes are
/// flagged in their record; any other failure (e.g. a cutoff that is too
/// small) aborts the sweep.
pub fn sweep(config: &SweepConfig) -> Result<Vec<MetricsRecord>> {
    if config.outcomes.is_empty() {
        return Err(Error::InvalidParameter("outcome sequence must not be empty".into()));
    }
    config.points().into_par_iter().map(|(tau, alpha)| evaluate(config, tau, alpha)).collect()
}

/// Single grid point.
pub fn point(config: &SweepConfig, tau: f64, alpha: f64) -> Result<MetricsRecord> {
    evaluate(config, tau, alpha)
}

/// Records after each of `1..=max_passages` positive passages.
pub fn accumulation_curve(tau: f64, alpha: f64, max_passages: usize) -> Result<Vec<MetricsRecord>> {
    accumulation_curve_with(tau, alpha, max_passages, &MediatorSpec::default(), PhaseConvention::default(), None)
}

pub fn accumulation_curve_with(
    tau: f64,
    alpha: f64,
    max_passages: usize,
    spec: &MediatorSpec,
    phase: PhaseConvention,
    cutoff: Option<usize>,
) -> Result<Vec<MetricsRecord>> {
    if max_passages < 1 {
        return Err(Error::InvalidParameter("max_passages must be >= 1".into()));
    }
    let policy = match cutoff {
        Some(n) => TruncationPolicy::with_cutoff(n)?,
        None => TruncationPolicy::for_run(alpha, max_passages),
    };
    let coherent = coherent_amplitudes(alpha, &policy)?;
    let mut state = product_state(&coherent, &coherent)?;
    let blocks = JcBlocks::new(tau, &policy, phase)?;
    let op = EffectiveOperator::for_outcome(spec, Outcome::Positive, &blocks, &blocks)?;
    let mut curve = Vec::with_capacity(max_passages);
    let mut record = MetricsRecord::empty(tau, alpha, 0, policy.n_cut());
    for n in 1..=max_passages {
        record.n_passages = n;
        if record.is_flagged() {
            curve.push(record.clone());
            continue;
        }
        let raw = JointState::from_coeffs(op.apply(state.coeffs())?);
        let p = raw.norm_sq();
        record.conditional_probabilities.push(p);
        if p < crate::ZERO_PROBABILITY {
            record.mark_impossible(n - 1);
        } else {
            state = raw.normalize()?;
            record.joint_probability *= p;
            record.last_conditional_probability = p;
            record.entropy = state_entropy(&state)?;
        }
        curve.push(record.clone());
    }
    Ok(curve)
}

/// [`accumulation_curve`] at every point of a grid, canonical order.
pub fn accumulation_sweep(tau: Grid, alpha: Grid, max_passages: usize, phase: PhaseConvention) -> Result<Vec<Vec<MetricsRecord>>> {
    let config = SweepConfig::new(tau, alpha, vec![Outcome::Positive; max_passages]);
    config
        .points()
        .into_par_iter()
        .map(|(t, a)| accumulation_curve_with(t, a, max_passages, &MediatorSpec::default(), phase, None))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JitterConfig {
    pub tau_a: f64,
    /// Relative spread of the cavity-b time, `δτ/τ`.
    pub sigma_rel: f64,
    pub samples: usize,
    pub seed: u64,
}

impl JitterConfig {
    pub fn new(tau_a: f64, sigma_rel: f64, samples: usize, seed: u64) -> Result<Self> {
        if sigma_rel.is_nan() || sigma_rel < 0.0 || samples < 1 || tau_a.is_nan() || tau_a < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "invalid jitter config (tau_a {tau_a}, sigma_rel {sigma_rel}, samples {samples})"
            )));
        }
        Ok(Self { tau_a, sigma_rel, samples, seed })
    }
}

/// Fixed part of a jitter study: everything except the interaction times.
#[derive(Clone, Debug)]
pub struct JitterPoint {
    pub alpha: f64,
    pub outcomes: Vec<Outcome>,
    pub spec: MediatorSpec,
    pub phase: PhaseConvention,
    pub cutoff: Option<usize>,
}

impl JitterPoint {
    pub fn new(alpha: f64, outcomes: Vec<Outcome>) -> Self {
        Self { alpha, outcomes, spec: MediatorSpec::default(), phase: PhaseConvention::default(), cutoff: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JitterSummary {
    pub noiseless_entropy: f64,
    pub mean_entropy: f64,
    pub std_entropy: f64,
    pub mean_probability: f64,
    /// Samples whose outcome sequence was impossible (counted as zeros).
    pub impossible_samples: usize,
    pub samples: usize,
    pub seed: u64,
}

/// Cavity-b times, one per passage per sample, drawn up front from
/// `Normal(tau_a, (sigma_rel tau_a)²)`; negative draws are redrawn.
pub fn draw_tau_b(jitter: &JitterConfig, n_passages: usize) -> Result<Vec<Vec<f64>>> {
    let normal = Normal::new(jitter.tau_a, jitter.sigma_rel * jitter.tau_a)
        .map_err(|e| Error::InvalidParameter(format!("jitter distribution: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(jitter.seed);
    let mut draw = || loop {
        let t = normal.sample(&mut rng);
        if t >= 0.0 {
            break t;
        }
    };
    Ok((0..jitter.samples).map(|_| (0..n_passages).map(|_| draw()).collect()).collect())
}

pub fn jitter_study(point: &JitterPoint, jitter: &JitterConfig) -> Result<JitterSummary> {
    let policy = match point.cutoff {
        Some(n) => TruncationPolicy::with_cutoff(n)?,
        None => TruncationPolicy::for_run(point.alpha, point.outcomes.len()),
    };
    let run = |taus_b: &[f64]| {
        evolve_point(jitter.tau_a, taus_b, point.alpha, &point.outcomes, &point.spec, &policy, point.phase)
            .map(|(_, r)| r)
    };
    let noiseless = run(&vec![jitter.tau_a; point.outcomes.len()])?;
    let draws = draw_tau_b(jitter, point.outcomes.len())?;
    let records: Vec<MetricsRecord> = draws.par_iter().map(|t| run(t)).collect::<Result<_>>()?;

    let n = records.len() as f64;
    let mean_entropy = records.iter().map(|r| r.entropy).sum::<f64>() / n;
    let var = records.iter().map(|r| (r.entropy - mean_entropy).powi(2)).sum::<f64>() / n;
    let mean_probability = records.iter().map(|r| r.joint_probability).sum::<f64>() / n;
    Ok(JitterSummary {
        noiseless_entropy: noiseless.entropy,
        mean_entropy,
        std_entropy: var.sqrt(),
        mean_probability,
        impossible_samples: records.iter().filter(|r| r.is_flagged()).count(),
        samples: records.len(),
        seed: jitter.seed,
    })
}

/// `n_passages` positive passages followed by the auxiliary-qubit readout.
pub fn readout_experiment(tau: f64, alpha: f64, n_passages: usize, tau_aux: f64) -> Result<MetricsRecord> {
    readout_experiment_with(tau, alpha, n_passages, tau_aux, PhaseConvention::default(), None)
}

pub fn readout_experiment_with(
    tau: f64,
    alpha: f64,
    n_passages: usize,
    tau_aux: f64,
    phase: PhaseConvention,
    cutoff: Option<usize>,
) -> Result<MetricsRecord> {
    let policy = match cutoff {
        Some(n) => TruncationPolicy::with_cutoff(n)?,
        None => TruncationPolicy::for_run(alpha, n_passages),
    };
    let outcomes = vec![Outcome::Positive; n_passages];
    let taus_b = vec![tau; n_passages];
    let (state, mut record) = evolve_point(tau, &taus_b, alpha, &outcomes, &MediatorSpec::default(), &policy, phase)?;
    if !record.is_flagged() {
        record.negativity = Some(negativity_measure(&aux_readout_with(&state, tau_aux, phase)?));
    }
    Ok(record)
}

/// Points at `tau = 1, 2, 3` for a tiny input amplitude.
pub fn integer_tau_probe(alpha: f64) -> Result<Vec<MetricsRecord>> {
    if !(alpha > 0.0 && alpha <= 0.05) {
        return Err(Error::InvalidParameter(format!("probe amplitude must lie in (0, 0.05], got {alpha}")));
    }
    let config = SweepConfig::new(Grid::new(1.0, 3.0, 3)?, Grid::point(alpha), vec![Outcome::Positive]);
    sweep(&config)
}

/// Readout values the calibration aims for, one and two passages.
pub const READOUT_TARGETS: (f64, f64) = (0.55, 0.87);
pub const READOUT_TOLERANCE: f64 = 0.02;

#[derive(Clone, Debug, PartialEq)]
pub struct CalibrationCandidate {
    pub label: String,
    pub tau_aux: f64,
    pub one_passage: f64,
    pub two_passages: f64,
}

impl CalibrationCandidate {
    pub fn error(&self) -> f64 {
        (self.one_passage - READOUT_TARGETS.0).abs() + (self.two_passages - READOUT_TARGETS.1).abs()
    }

    pub fn within_tolerance(&self) -> bool {
        (self.one_passage - READOUT_TARGETS.0).abs() <= READOUT_TOLERANCE
            && (self.two_passages - READOUT_TARGETS.1).abs() <= READOUT_TOLERANCE
    }
}

#[derive(Clone, Debug)]
pub struct TauAuxCalibration {
    pub chosen: CalibrationCandidate,
    /// The two literal readings of the auxiliary interaction time.
    pub literal: Vec<CalibrationCandidate>,
}

/// Pick the auxiliary interaction time that reproduces [`READOUT_TARGETS`]
/// at `(tau, alpha)`. The literal readings `0.6` and `0.6π` are tried first;
/// if neither lands within tolerance, `tau_aux` is scanned over
/// `0.01..=2.00` in steps of `0.01`.
pub fn calibrate_tau_aux(tau: f64, alpha: f64) -> Result<TauAuxCalibration> {
    let policy = TruncationPolicy::for_run(alpha, 2);
    let spec = MediatorSpec::default();
    let phase = PhaseConvention::default();
    let (one, r1) = evolve_point(tau, &[tau], alpha, &[Outcome::Positive], &spec, &policy, phase)?;
    let (two, r2) = evolve_point(tau, &[tau; 2], alpha, &[Outcome::Positive; 2], &spec, &policy, phase)?;
    if r1.is_flagged() || r2.is_flagged() {
        return Err(Error::ZeroProbabilityOutcome { passage: 0, probability: 0.0 });
    }
    let candidate = |label: String, tau_aux: f64| -> Result<CalibrationCandidate> {
        Ok(CalibrationCandidate {
            label,
            tau_aux,
            one_passage: negativity_measure(&aux_readout_with(&one, tau_aux, phase)?),
            two_passages: negativity_measure(&aux_readout_with(&two, tau_aux, phase)?),
        })
    };
    let literal = vec![candidate("literal:0.6".into(), 0.6)?, candidate("literal:0.6pi".into(), 0.6 * PI)?];
    let best_literal = literal
        .iter()
        .filter(|c| c.within_tolerance())
        .min_by(|a, b| a.error().total_cmp(&b.error()))
        .cloned();
    let chosen = match best_literal {
        Some(c) => c,
        None => {
            let scanned = (1..=200)
                .map(|k| {
                    let t = k as f64 / 100.0;
                    candidate(format!("calibrated-scan:{t:.2}"), t)
                })
                .collect::<Result<Vec<_>>>()?;
            scanned.into_iter().min_by(|a, b| a.error().total_cmp(&b.error())).expect("nonempty scan")
        }
    };
    Ok(TauAuxCalibration { chosen, literal })
}

/// Exact `<Γ|Λ>(tau)` against its large-amplitude closed form.
#[derive(Clone, Debug)]
pub struct OverlapScan {
    pub alpha: f64,
    pub taus: Vec<f64>,
    pub exact: Vec<f64>,
    pub gaussian: Vec<f64>,
    /// Least-squares constant multiplying the closed form.
    pub scale: f64,
    pub exact_crossings: Vec<f64>,
    pub gaussian_crossings: Vec<f64>,
    pub reports: Vec<OverlapReport>,
}

pub fn overlap_scan(alpha: f64, tau: Grid) -> Result<OverlapScan> {
    let policy = TruncationPolicy::for_run(alpha, 0);
    let taus = tau.values();
    let reports = taus
        .par_iter()
        .map(|&t| lambda_delta_gamma_with(t, alpha, &policy, PhaseConvention::default()))
        .collect::<Result<Vec<_>>>()?;
    let exact: Vec<f64> = reports.iter().map(|r| r.gamma_lambda_signed).collect();
    let gaussian: Vec<f64> = reports.iter().map(|r| r.gaussian_gamma_lambda).collect();
    Ok(OverlapScan {
        alpha,
        scale: fit_scale(&exact, &gaussian),
        exact_crossings: zero_crossings(&taus, &exact),
        gaussian_crossings: zero_crossings(&taus, &gaussian),
        taus,
        exact,
        gaussian,
        reports,
    })
}

/// `n_passages` vee passages, each post-selected on the mediator ground state.
pub fn vee_sequence(tau: f64, alpha: f64, n_passages: usize, phase: PhaseConvention, cutoff: Option<usize>) -> Result<MetricsRecord> {
    let policy = match cutoff {
        Some(n) => TruncationPolicy::with_cutoff(n)?,
        None => TruncationPolicy::for_run(alpha, n_passages),
    };
    let coherent = coherent_amplitudes(alpha, &policy)?;
    let mut state = product_state(&coherent, &coherent)?;
    let prop = VeePropagator::new(tau, &policy, phase)?;
    let mut record = MetricsRecord::empty(tau, alpha, n_passages, policy.n_cut());
    for k in 0..n_passages {
        match vee_passage(&state, &prop) {
            Ok((next, outcome)) => {
                state = next;
                let p = outcome.conditional_probability;
                record.conditional_probabilities.push(p);
                record.joint_probability *= p;
                record.last_conditional_probability = p;
            }
            Err(Error::ZeroProbabilityOutcome { probability, .. }) => {
                record.conditional_probabilities.push(probability);
                record.mark_impossible(k);
                return Ok(record);
            }
            Err(e) => return Err(e),
        }
    }
    if n_passages > 0 {
        record.entropy = state_entropy(&state)?;
    }
    Ok(record)
}

/// Largest entrywise deviation between the structured propagators and the
/// brute-force references over random draws.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleReport {
    pub n_cut: usize,
    pub samples: usize,
    pub seed: u64,
    pub max_deviation_two_level: f64,
    pub max_deviation_vee: f64,
}

impl OracleReport {
    pub fn max_deviation(&self) -> f64 {
        self.max_deviation_two_level.max(self.max_deviation_vee)
    }
}

/// Random `(tau_a, tau_b, MediatorSpec, outcome)` draws compared against
/// [`crate::oracle`], plus the vee propagator at each drawn `tau_a`.
pub fn oracle_check(n_cut: usize, samples: usize, seed: u64) -> Result<OracleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let policy = TruncationPolicy::with_cutoff(n_cut)?;
    let mut report =
        OracleReport { n_cut, samples, seed, max_deviation_two_level: 0.0, max_deviation_vee: 0.0 };
    for _ in 0..samples {
        let tau_a = rng.gen_range(0.0..4.0);
        let tau_b = rng.gen_range(0.0..4.0);
        let mix: f64 = rng.gen_range(0.0..FRAC_PI_2);
        let c_g = C64::from_polar(mix.cos(), rng.gen_range(0.0..2.0 * PI));
        let c_e = C64::new(mix.sin(), 0.0);
        let spec = MediatorSpec::new(c_g, c_e, rng.gen_range(0.0..=FRAC_PI_2), rng.gen_range(0.0..2.0 * PI))?;
        let positive: bool = rng.gen();
        for phase in [PhaseConvention::MinusI, PhaseConvention::PlusI] {
            let ba = JcBlocks::new(tau_a, &policy, phase)?;
            let bb = JcBlocks::new(tau_b, &policy, phase)?;
            let outcome = if positive { Outcome::Positive } else { Outcome::Negative };
            let op = EffectiveOperator::for_outcome(&spec, outcome, &ba, &bb)?;
            let reference = spec_operator_oracle(&spec, positive, tau_a, tau_b, n_cut, phase)?;
            report.max_deviation_two_level = report.max_deviation_two_level.max((op.to_dense() - reference).camax());
            let vee = VeePropagator::new(tau_a, &policy, phase)?.assemble();
            let vee_ref = vee_exp_oracle(tau_a, n_cut, phase)?;
            report.max_deviation_vee = report.max_deviation_vee.max((vee - vee_ref).camax());
        }
    }
    Ok(report)
}

/// Maximum entropy over a set of records, with the record attaining it.
pub fn max_entropy(records: &[MetricsRecord]) -> Option<&MetricsRecord> {
    records.iter().max_by(|a, b| a.entropy.total_cmp(&b.entropy))
}

/// Default cutoff for a run, re-exported for callers sizing policies.
pub fn cutoff_for(alpha: f64, n_passages: usize) -> usize {
    default_cutoff(alpha, n_passages)
}
