//! Command-line front end. [`dispatch`] parses `argv`, runs one experiment
//! and returns the process exit code.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::conditional::{parse_outcomes, MediatorSpec, Outcome};
use crate::error::{Error, Result};
use crate::experiments::{
    accumulation_curve_with, evolve_point, jitter_study, oracle_check, overlap_scan, readout_experiment_with,
    sweep, vee_sequence, Grid, JitterConfig, JitterPoint, MetricsRecord, SweepConfig, CALIBRATED_TAU_AUX,
    CALIBRATED_TAU_AUX_LABEL, JITTER_GENERATOR,
};
use crate::fock::TruncationPolicy;
use crate::io::{format_g9, read_config, render_csv, write_csv, write_heatmap, HeatmapField, RunManifest};
use crate::jc::PhaseConvention;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ZERO_PROBABILITY: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "cvmem", version, about = "Entanglement accumulation in a two-mode register via post-selected mediators")]
struct Cli {
    /// Plain `key=value` file with parameter defaults; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Sign in the propagator exponent.
    #[arg(long, global = true, value_enum)]
    phase: Option<PhaseArg>,

    /// Fixed Fock cutoff; by default chosen from alpha and the passage count.
    #[arg(long, global = true)]
    cutoff: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PhaseArg {
    #[value(name = "minus-i")]
    MinusI,
    #[value(name = "plus-i")]
    PlusI,
}

impl From<PhaseArg> for PhaseConvention {
    fn from(p: PhaseArg) -> Self {
        match p {
            PhaseArg::MinusI => PhaseConvention::MinusI,
            PhaseArg::PlusI => PhaseConvention::PlusI,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Format {
    Csv,
    Pgm,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Entropy and success probability over a (tau, alpha) grid.
    Sweep(SweepArgs),
    /// A single (tau, alpha) point.
    Point(PointArgs),
    /// Entropy after each of 1..=passages positive passages.
    Accumulate(PointArgs),
    /// An explicit outcome sequence, optionally with a different cavity-b time.
    Sequence(SequenceArgs),
    /// Monte Carlo study of cavity-b interaction-time jitter.
    Jitter(JitterArgs),
    /// Auxiliary-qubit readout of the register entanglement.
    Readout(ReadoutArgs),
    /// Overlap diagnostics against the large-amplitude closed form.
    Overlaps(OverlapArgs),
    /// Passages of a vee-type three-level mediator.
    Vee(PointArgs),
    /// Compare the structured propagators with brute-force references.
    OracleCheck(OracleArgs),
}

#[derive(Args, Debug)]
struct Output {
    /// Output file; results go to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Heat-map field: entropy, probability (= prob_joint), prob_joint or prob_last.
    #[arg(long)]
    field: Option<String>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    tau_min: Option<f64>,
    #[arg(long)]
    tau_max: Option<f64>,
    #[arg(long)]
    tau_steps: Option<usize>,
    #[arg(long)]
    alpha_min: Option<f64>,
    #[arg(long)]
    alpha_max: Option<f64>,
    #[arg(long)]
    alpha_steps: Option<usize>,
    /// Outcome sequence, e.g. `P`, `PP`, `NP`.
    #[arg(long)]
    outcomes: Option<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct PointArgs {
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long)]
    passages: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SequenceArgs {
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<f64>,
    /// Cavity-b interaction time; defaults to `--tau`.
    #[arg(long, allow_hyphen_values = true)]
    tau_b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long)]
    outcomes: Option<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct JitterArgs {
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long)]
    outcomes: Option<String>,
    /// Relative spread of the cavity-b time.
    #[arg(long)]
    sigma_rel: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct ReadoutArgs {
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long)]
    passages: Option<usize>,
    /// Auxiliary interaction time; defaults to the calibrated value.
    #[arg(long)]
    tau_aux: Option<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct OverlapArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    tau_min: Option<f64>,
    #[arg(long)]
    tau_max: Option<f64>,
    #[arg(long)]
    tau_steps: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    n_cut: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

/// Flag value, else config entry, else default.
struct Params {
    config: BTreeMap<String, String>,
    path: PathBuf,
}

impl Params {
    fn get<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.config.get(key) {
            Some(raw) => raw.parse().map_err(|e| Error::Parse {
                path: self.path.clone(),
                line: 0,
                message: format!("{key}: {e}"),
            }),
            None => Ok(default),
        }
    }

    fn outcomes(&self, flag: Option<String>, default: &str) -> Result<Vec<Outcome>> {
        parse_outcomes(&self.get(flag, "outcomes", default.to_string())?)
    }
}

struct Context {
    params: Params,
    phase: PhaseConvention,
    cutoff: Option<usize>,
    command_line: String,
}

impl Context {
    fn manifest(&self, truncation: String) -> RunManifest {
        RunManifest {
            command_line: self.command_line.clone(),
            truncation,
            phase_convention: self.phase.to_string(),
            ..RunManifest::default()
        }
    }

    fn truncation(&self, alpha: f64, n_passages: usize) -> String {
        match self.cutoff {
            Some(n) => n.to_string(),
            None => format!("{} (default for alpha={}, passages={})", TruncationPolicy::for_run(alpha, n_passages).n_cut(), format_g9(alpha), n_passages),
        }
    }
}

/// Runs the CLI on `argv` (including the program name).
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let command_line = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect::<Vec<_>>().join(" ");
    let mut stdout = std::io::stdout().lock();
    match run(cli, command_line, &mut stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ZeroProbabilityOutcome { .. } => EXIT_ZERO_PROBABILITY,
        Error::InvalidParameter(_) | Error::Parse { .. } | Error::NotNormalized { .. } => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

fn run(cli: Cli, command_line: String, out: &mut dyn std::io::Write) -> Result<()> {
    let (config, path) = match &cli.config {
        Some(p) => (read_config(p)?, p.clone()),
        None => (BTreeMap::new(), PathBuf::new()),
    };
    let params = Params { config, path };
    let phase = match cli.phase {
        Some(p) => p.into(),
        None => match params.config.get("phase").map(String::as_str) {
            None | Some("minus-i") | Some("-i") => PhaseConvention::MinusI,
            Some("plus-i") | Some("+i") => PhaseConvention::PlusI,
            Some(other) => return Err(Error::InvalidParameter(format!("unknown phase convention {other:?}"))),
        },
    };
    let cutoff = match cli.cutoff {
        Some(n) => Some(n),
        None => params.config.get("cutoff").map(|v| v.parse()).transpose().map_err(|e| {
            Error::InvalidParameter(format!("cutoff: {e}"))
        })?,
    };
    let ctx = Context { params, phase, cutoff, command_line };
    let text = match cli.command {
        Command::Sweep(a) => cmd_sweep(&ctx, a)?,
        Command::Point(a) => cmd_point(&ctx, a)?,
        Command::Accumulate(a) => cmd_accumulate(&ctx, a)?,
        Command::Sequence(a) => cmd_sequence(&ctx, a)?,
        Command::Jitter(a) => cmd_jitter(&ctx, a)?,
        Command::Readout(a) => cmd_readout(&ctx, a)?,
        Command::Overlaps(a) => cmd_overlaps(&ctx, a)?,
        Command::Vee(a) => cmd_vee(&ctx, a)?,
        Command::OracleCheck(a) => cmd_oracle(&ctx, a)?,
    };
    out.write_all(text.as_bytes()).map_err(|source| Error::Io { path: PathBuf::from("<stdout>"), source })
}

/// Writes records to `--out` (CSV or PGM) with a manifest, or renders them as
/// CSV text for stdout.
fn emit(records: &[MetricsRecord], output: &Output, mut manifest: RunManifest) -> Result<String> {
    let format = output.format.unwrap_or(match &output.out {
        Some(p) if p.extension().is_some_and(|e| e == "pgm") => Format::Pgm,
        _ => Format::Csv,
    });
    let Some(path) = &output.out else {
        if format == Format::Pgm {
            return Err(Error::InvalidParameter("--format pgm requires --out".into()));
        }
        return Ok(render_csv(records));
    };
    match format {
        Format::Csv => write_csv(path, records)?,
        Format::Pgm => {
            let field = parse_field(output.field.as_deref().unwrap_or("entropy"))?;
            let max = write_heatmap(path, records, field)?;
            manifest.field_max = Some((field.name().to_string(), max));
        }
    }
    let m = manifest.write_for(path)?;
    Ok(format!("wrote {} ({} records)\nwrote {}\n", path.display(), records.len(), m.display()))
}

fn parse_field(s: &str) -> Result<HeatmapField> {
    if s == "probability" {
        Ok(HeatmapField::JointProbability)
    } else {
        s.parse()
    }
}

fn describe(r: &MetricsRecord) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "tau={} alpha={} passages={} n_cut={}", format_g9(r.tau), format_g9(r.alpha), r.n_passages, r.n_cut);
    let _ = writeln!(s, "entropy={}", format_g9(r.entropy));
    let _ = writeln!(s, "prob_joint={}", format_g9(r.joint_probability));
    let _ = writeln!(s, "prob_last={}", format_g9(r.last_conditional_probability));
    let probs: Vec<String> = r.conditional_probabilities.iter().map(|&p| format_g9(p)).collect();
    let _ = writeln!(s, "conditional_probabilities={}", probs.join(","));
    if let Some(e) = r.negativity {
        let _ = writeln!(s, "negativity={}", format_g9(e));
    }
    s
}

/// Turns a flagged record of a point query into an error.
fn require_possible(r: &MetricsRecord) -> Result<()> {
    match r.zero_probability_at {
        Some(passage) => Err(Error::ZeroProbabilityOutcome {
            passage,
            probability: r.conditional_probabilities.get(passage).copied().unwrap_or(0.0),
        }),
        None => Ok(()),
    }
}

fn point_output(records: &[MetricsRecord], output: &Output, manifest: RunManifest) -> Result<String> {
    if output.out.is_some() {
        emit(records, output, manifest)
    } else {
        Ok(records.iter().map(describe).collect::<Vec<_>>().join("\n"))
    }
}

fn cmd_sweep(ctx: &Context, a: SweepArgs) -> Result<String> {
    let p = &ctx.params;
    let tau = Grid::new(p.get(a.tau_min, "tau_min", 0.0)?, p.get(a.tau_max, "tau_max", 20.0)?, p.get(a.tau_steps, "tau_steps", 101)?)?;
    let alpha = Grid::new(
        p.get(a.alpha_min, "alpha_min", 0.0)?,
        p.get(a.alpha_max, "alpha_max", 3.5)?,
        p.get(a.alpha_steps, "alpha_steps", 36)?,
    )?;
    let outcomes = p.outcomes(a.outcomes, "P")?;
    let mut config = SweepConfig::new(tau, alpha, outcomes.clone());
    config.cutoff = ctx.cutoff;
    config.phase = ctx.phase;
    let records = sweep(&config)?;
    let truncation = match ctx.cutoff {
        Some(n) => n.to_string(),
        None => format!("default per alpha (max {})", TruncationPolicy::for_run(alpha.max, outcomes.len()).n_cut()),
    };
    let mut manifest = ctx.manifest(truncation);
    manifest.extra.push(("outcomes".into(), outcome_string(&outcomes)));
    emit(&records, &a.output, manifest)
}

fn outcome_string(outcomes: &[Outcome]) -> String {
    outcomes.iter().map(|o| o.letter()).collect()
}

fn point_params(ctx: &Context, a: &PointArgs, default_passages: usize) -> Result<(f64, f64, usize)> {
    let p = &ctx.params;
    let tau = p.get(a.tau, "tau", 1.0)?;
    let alpha = p.get(a.alpha, "alpha", 0.8)?;
    let n = p.get(a.passages, "passages", default_passages)?;
    Ok((tau, alpha, n))
}

fn cmd_point(ctx: &Context, a: PointArgs) -> Result<String> {
    let (tau, alpha, n) = point_params(ctx, &a, 1)?;
    if n < 1 {
        return Err(Error::InvalidParameter("--passages must be >= 1".into()));
    }
    let mut config = SweepConfig::new(Grid::point(tau), Grid::point(alpha), vec![Outcome::Positive; n]);
    config.cutoff = ctx.cutoff;
    config.phase = ctx.phase;
    let record = crate::experiments::point(&config, tau, alpha)?;
    require_possible(&record)?;
    point_output(&[record], &a.output, ctx.manifest(ctx.truncation(alpha, n)))
}

fn cmd_accumulate(ctx: &Context, a: PointArgs) -> Result<String> {
    let (tau, alpha, n) = point_params(ctx, &a, 3)?;
    let curve = accumulation_curve_with(tau, alpha, n, &MediatorSpec::default(), ctx.phase, ctx.cutoff)?;
    if let Some(last) = curve.last() {
        require_possible(last)?;
    }
    point_output(&curve, &a.output, ctx.manifest(ctx.truncation(alpha, n)))
}

fn cmd_sequence(ctx: &Context, a: SequenceArgs) -> Result<String> {
    let p = &ctx.params;
    let tau = p.get(a.tau, "tau", 1.0)?;
    let tau_b = p.get(a.tau_b, "tau_b", tau)?;
    let alpha = p.get(a.alpha, "alpha", 0.8)?;
    let outcomes = p.outcomes(a.outcomes, "NP")?;
    let policy = match ctx.cutoff {
        Some(n) => TruncationPolicy::with_cutoff(n)?,
        None => TruncationPolicy::for_run(alpha, outcomes.len()),
    };
    let taus_b = vec![tau_b; outcomes.len()];
    let (_, record) = evolve_point(tau, &taus_b, alpha, &outcomes, &MediatorSpec::default(), &policy, ctx.phase)?;
    require_possible(&record)?;
    let mut manifest = ctx.manifest(policy.n_cut().to_string());
    manifest.extra.push(("outcomes".into(), outcome_string(&outcomes)));
    manifest.extra.push(("tau_b".into(), format_g9(tau_b)));
    let mut text = point_output(&[record], &a.output, manifest)?;
    if a.output.out.is_none() {
        text = format!("outcomes={}\n{text}", outcome_string(&outcomes));
    }
    Ok(text)
}

fn cmd_jitter(ctx: &Context, a: JitterArgs) -> Result<String> {
    let p = &ctx.params;
    let tau = p.get(a.tau, "tau", 1.0)?;
    let alpha = p.get(a.alpha, "alpha", 0.8)?;
    let outcomes = p.outcomes(a.outcomes, "P")?;
    let jitter = JitterConfig::new(
        tau,
        p.get(a.sigma_rel, "sigma_rel", 0.05)?,
        p.get(a.samples, "samples", 200)?,
        p.get(a.seed, "seed", 0)?,
    )?;
    let mut point = JitterPoint::new(alpha, outcomes.clone());
    point.phase = ctx.phase;
    point.cutoff = ctx.cutoff;
    let s = jitter_study(&point, &jitter)?;
    let text = format!(
        "tau={} alpha={} outcomes={} sigma_rel={} samples={} seed={}\nnoiseless_entropy={}\nmean_entropy={}\nstd_entropy={}\nmean_probability={}\nimpossible_samples={}\n",
        format_g9(tau),
        format_g9(alpha),
        outcome_string(&outcomes),
        format_g9(jitter.sigma_rel),
        s.samples,
        s.seed,
        format_g9(s.noiseless_entropy),
        format_g9(s.mean_entropy),
        format_g9(s.std_entropy),
        format_g9(s.mean_probability),
        s.impossible_samples,
    );
    if let Some(path) = &a.output.out {
        std::fs::write(path, &text).map_err(|source| Error::Io { path: path.clone(), source })?;
        let mut manifest = ctx.manifest(ctx.truncation(alpha, outcomes.len()));
        manifest.seed = Some(jitter.seed);
        manifest.generator = Some(JITTER_GENERATOR.into());
        manifest.write_for(path)?;
    }
    Ok(text)
}

fn cmd_readout(ctx: &Context, a: ReadoutArgs) -> Result<String> {
    let p = &ctx.params;
    let tau = p.get(a.tau, "tau", 1.0)?;
    let alpha = p.get(a.alpha, "alpha", 0.8)?;
    let n = p.get(a.passages, "passages", 1)?;
    let tau_aux = p.get(a.tau_aux, "tau_aux", CALIBRATED_TAU_AUX)?;
    let record = readout_experiment_with(tau, alpha, n, tau_aux, ctx.phase, ctx.cutoff)?;
    require_possible(&record)?;
    let mut manifest = ctx.manifest(ctx.truncation(alpha, n));
    let label = if tau_aux == CALIBRATED_TAU_AUX { CALIBRATED_TAU_AUX_LABEL.to_string() } else { format!("explicit:{}", format_g9(tau_aux)) };
    manifest.tau_aux = Some(label.clone());
    let text = point_output(&[record], &a.output, manifest)?;
    Ok(if a.output.out.is_none() { format!("tau_aux={label}\n{text}") } else { text })
}

fn cmd_overlaps(ctx: &Context, a: OverlapArgs) -> Result<String> {
    let p = &ctx.params;
    let alpha = p.get(a.alpha, "alpha", 6.0)?;
    let grid = Grid::new(p.get(a.tau_min, "tau_min", 1.0)?, p.get(a.tau_max, "tau_max", 3.0)?, p.get(a.tau_steps, "tau_steps", 201)?)?;
    let scan = overlap_scan(alpha, grid)?;
    let mut text = String::from("tau,abs_gamma_lambda,abs_delta_gamma,abs_delta_lambda,gamma_lambda_signed,gaussian\n");
    for r in &scan.reports {
        let _ = writeln!(
            text,
            "{},{},{},{},{},{}",
            format_g9(r.tau),
            format_g9(r.gamma_lambda.norm()),
            format_g9(r.delta_gamma.norm()),
            format_g9(r.delta_lambda.norm()),
            format_g9(r.gamma_lambda_signed),
            format_g9(r.gaussian_gamma_lambda)
        );
    }
    let crossings = |xs: &[f64]| xs.iter().map(|&x| format_g9(x)).collect::<Vec<_>>().join(" ");
    let summary = format!(
        "alpha={} scale={}\nexact_crossings={}\ngaussian_crossings={}\n",
        format_g9(alpha),
        format_g9(scan.scale),
        crossings(&scan.exact_crossings),
        crossings(&scan.gaussian_crossings)
    );
    match &a.output.out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|source| Error::Io { path: path.clone(), source })?;
            ctx.manifest(ctx.truncation(alpha, 0)).write_for(path)?;
            Ok(summary)
        }
        None => Ok(text + &summary),
    }
}

fn cmd_vee(ctx: &Context, a: PointArgs) -> Result<String> {
    let (tau, alpha, n) = point_params(ctx, &a, 1)?;
    let record = vee_sequence(tau, alpha, n, ctx.phase, ctx.cutoff)?;
    require_possible(&record)?;
    point_output(&[record], &a.output, ctx.manifest(ctx.truncation(alpha, n)))
}

fn cmd_oracle(ctx: &Context, a: OracleArgs) -> Result<String> {
    let p = &ctx.params;
    let n_cut = p.get(a.n_cut, "n_cut", 8)?;
    let samples = p.get(a.samples, "samples", 10)?;
    let seed = p.get(a.seed, "seed", 0)?;
    let r = oracle_check(n_cut, samples, seed)?;
    Ok(format!(
        "n_cut={} samples={} seed={}\nmax_deviation_two_level={:.3e}\nmax_deviation_vee={:.3e}\nmax_deviation={:.3e}\n",
        r.n_cut,
        r.samples,
        r.seed,
        r.max_deviation_two_level,
        r.max_deviation_vee,
        r.max_deviation()
    ))
}
