//! CSV and PGM output, run manifests and `key=value` configuration files.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::experiments::MetricsRecord;

pub const CSV_HEADER: &str = "tau,alpha,n_passages,entropy,prob_joint,prob_last";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

/// `printf("%.9g")`-style formatting: nine significant digits, trailing zeros
/// trimmed, exponent notation outside `1e-4 ..= 1e9`.
pub fn format_g9(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let m = trim_zeros(mantissa.to_string());
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Records as CSV text (LF line endings). The `negativity` column is added
/// when any record carries one.
pub fn render_csv(records: &[MetricsRecord]) -> String {
    let mut out = String::new();
    let with_neg = records.iter().any(|r| r.negativity.is_some());
    out.push_str(CSV_HEADER);
    if with_neg {
        out.push_str(",negativity");
    }
    out.push('\n');
    for r in records {
        let fields = [
            format_g9(r.tau),
            format_g9(r.alpha),
            r.n_passages.to_string(),
            format_g9(r.entropy),
            format_g9(r.joint_probability),
            format_g9(r.last_conditional_probability),
        ];
        out.push_str(&fields.join(","));
        if with_neg {
            out.push(',');
            if let Some(e) = r.negativity {
                out.push_str(&format_g9(e));
            }
        }
        out.push('\n');
    }
    out
}

pub fn write_csv(path: &Path, records: &[MetricsRecord]) -> Result<()> {
    fs::write(path, render_csv(records)).map_err(io_err(path))
}

/// One parsed CSV row.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub tau: f64,
    pub alpha: f64,
    pub n_passages: usize,
    pub entropy: f64,
    pub prob_joint: f64,
    pub prob_last: f64,
    pub negativity: Option<f64>,
}

pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let mut lines = text.lines().enumerate();
    let parse_err = |line: usize, message: String| Error::Parse { path: path.to_path_buf(), line, message };
    let header = lines.next().map(|(_, l)| l).unwrap_or_default();
    let with_neg = match header {
        h if h == CSV_HEADER => false,
        h if h == format!("{CSV_HEADER},negativity") => true,
        h => return Err(parse_err(1, format!("unexpected header {h:?}"))),
    };
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        let expected = if with_neg { 7 } else { 6 };
        if cols.len() != expected {
            return Err(parse_err(i + 1, format!("expected {expected} columns, found {}", cols.len())));
        }
        let f = |k: usize| cols[k].parse::<f64>().map_err(|e| parse_err(i + 1, format!("column {k}: {e}")));
        rows.push(CsvRow {
            tau: f(0)?,
            alpha: f(1)?,
            n_passages: cols[2].parse().map_err(|e| parse_err(i + 1, format!("column 2: {e}")))?,
            entropy: f(3)?,
            prob_joint: f(4)?,
            prob_last: f(5)?,
            negativity: if with_neg && !cols[6].is_empty() { Some(f(6)?) } else { None },
        });
    }
    Ok(rows)
}

/// Field rendered into a heat map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeatmapField {
    Entropy,
    JointProbability,
    LastProbability,
}

impl HeatmapField {
    pub fn value(self, r: &MetricsRecord) -> f64 {
        match self {
            Self::Entropy => r.entropy,
            Self::JointProbability => r.joint_probability,
            Self::LastProbability => r.last_conditional_probability,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Entropy => "entropy",
            Self::JointProbability => "prob_joint",
            Self::LastProbability => "prob_last",
        }
    }
}

impl std::str::FromStr for HeatmapField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "entropy" => Ok(Self::Entropy),
            "prob_joint" => Ok(Self::JointProbability),
            "prob_last" => Ok(Self::LastProbability),
            _ => Err(Error::InvalidParameter(format!("unknown field {s:?}"))),
        }
    }
}

/// Grayscale image of a sweep in canonical (`tau`-major) order: one column
/// per `tau`, one row per `alpha`, intensity scaled to the field maximum.
/// Returns the maximum used for scaling.
pub fn heatmap_pixels(records: &[MetricsRecord], field: HeatmapField) -> Result<(usize, usize, Vec<u8>, f64)> {
    let n_alpha = records.iter().take_while(|r| r.tau == records[0].tau).count();
    if records.is_empty() || !records.len().is_multiple_of(n_alpha) {
        return Err(Error::IncompleteGrid);
    }
    let n_tau = records.len() / n_alpha;
    for (k, r) in records.iter().enumerate() {
        let (i, j) = (k / n_alpha, k % n_alpha);
        if r.tau != records[i * n_alpha].tau || r.alpha != records[j].alpha {
            return Err(Error::IncompleteGrid);
        }
    }
    let max = records.iter().map(|r| field.value(r)).fold(0.0, f64::max);
    let mut pixels = vec![0u8; n_tau * n_alpha];
    for (k, r) in records.iter().enumerate() {
        let (i, j) = (k / n_alpha, k % n_alpha);
        let v = if max > 0.0 { (255.0 * field.value(r) / max).round().clamp(0.0, 255.0) as u8 } else { 0 };
        pixels[j * n_tau + i] = v;
    }
    Ok((n_tau, n_alpha, pixels, max))
}

/// Binary PGM (`P5`) heat map; returns the scaling maximum.
pub fn write_heatmap(path: &Path, records: &[MetricsRecord], field: HeatmapField) -> Result<f64> {
    let (w, h, pixels, max) = heatmap_pixels(records, field)?;
    let mut f = fs::File::create(path).map_err(io_err(path))?;
    write!(f, "P5\n{w} {h}\n255\n").map_err(io_err(path))?;
    f.write_all(&pixels).map_err(io_err(path))?;
    Ok(max)
}

/// Everything needed to reproduce an output file.
#[derive(Clone, Debug, Default)]
pub struct RunManifest {
    pub command_line: String,
    pub seed: Option<u64>,
    pub truncation: String,
    pub phase_convention: String,
    pub tau_aux: Option<String>,
    pub generator: Option<String>,
    pub field_max: Option<(String, f64)>,
    pub extra: Vec<(String, String)>,
}

impl RunManifest {
    pub fn path_for(output: &Path) -> PathBuf {
        let mut s = output.as_os_str().to_owned();
        s.push(".manifest.txt");
        PathBuf::from(s)
    }

    pub fn render(&self) -> String {
        let mut lines = vec![
            format!("version={}", env!("CARGO_PKG_VERSION")),
            format!("revision={}", option_env!("CVMEM_REVISION").unwrap_or("unknown")),
            format!("command_line={}", self.command_line),
            format!("timestamp={}", chrono::Utc::now().format("%Y-%m-%dT%H:%M:%SZ")),
            format!("truncation={}", self.truncation),
            format!("phase_convention={}", self.phase_convention),
        ];
        if let Some(seed) = self.seed {
            lines.push(format!("seed={seed}"));
        }
        if let Some(g) = &self.generator {
            lines.push(format!("generator={g}"));
        }
        if let Some(t) = &self.tau_aux {
            lines.push(format!("tau_aux={t}"));
        }
        if let Some((name, max)) = &self.field_max {
            lines.push(format!("field={name}"));
            lines.push(format!("field_max={}", format_g9(*max)));
        }
        for (k, v) in &self.extra {
            lines.push(format!("{k}={v}"));
        }
        lines.join("\n") + "\n"
    }

    /// Writes next to `output` as `<output>.manifest.txt`.
    pub fn write_for(&self, output: &Path) -> Result<PathBuf> {
        let path = Self::path_for(output);
        fs::write(&path, self.render()).map_err(io_err(&path))?;
        Ok(path)
    }
}

/// `key = value` lines; `#` starts a comment, blank lines are ignored.
pub fn parse_config(text: &str, path: &Path) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message: format!("expected key=value, found {line:?}"),
        })?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

pub fn read_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_config(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn record(tau: f64, alpha: f64, entropy: f64) -> MetricsRecord {
        MetricsRecord {
            tau,
            alpha,
            n_passages: 1,
            entropy,
            joint_probability: 0.5,
            last_conditional_probability: 0.5,
            conditional_probabilities: vec![0.5],
            overlaps: None,
            negativity: None,
            zero_probability_at: None,
            n_cut: 10,
        }
    }

    #[test]
    fn g9_matches_printf() {
        assert_eq!(format_g9(0.0), "0");
        assert_eq!(format_g9(1.0), "1");
        assert_eq!(format_g9(0.633123456789), "0.633123457");
        assert_eq!(format_g9(123456789.0), "123456789");
        assert_eq!(format_g9(1234567890.0), "1.23456789e+09");
        assert_eq!(format_g9(0.0001), "0.0001");
        assert_eq!(format_g9(0.00001234), "1.234e-05");
        assert_eq!(format_g9(-2.5), "-2.5");
    }

    #[test]
    fn heatmap_layout() {
        let rs = vec![record(1.0, 0.5, 1.0), record(1.0, 0.7, 0.0), record(2.0, 0.5, 0.5), record(2.0, 0.7, 2.0)];
        let (w, h, px, max) = heatmap_pixels(&rs, HeatmapField::Entropy).unwrap();
        assert_eq!((w, h, max), (2, 2, 2.0));
        // Row 0 is alpha = 0.5: tau = 1 then tau = 2.
        assert_eq!(px, vec![128, 64, 0, 255]);
    }

    #[test]
    fn ragged_grid_rejected() {
        let rs = vec![record(1.0, 0.5, 1.0), record(1.0, 0.7, 0.0), record(2.0, 0.5, 0.5)];
        assert!(matches!(heatmap_pixels(&rs, HeatmapField::Entropy), Err(Error::IncompleteGrid)));
        assert!(matches!(heatmap_pixels(&[], HeatmapField::Entropy), Err(Error::IncompleteGrid)));
    }

    #[test]
    fn config_parsing() {
        let m = parse_config("# c\ntau = 1.5\n\nalpha=2 # amp\n", Path::new("x")).unwrap();
        assert_eq!(m["tau"], "1.5");
        assert_eq!(m["alpha"], "2");
        assert!(parse_config("nonsense\n", Path::new("x")).is_err());
    }

    #[test]
    fn manifest_path() {
        assert_eq!(RunManifest::path_for(Path::new("/tmp/a.csv")), PathBuf::from("/tmp/a.csv.manifest.txt"));
    }

    proptest! {
        #[test]
        fn g9_round_trips_to_nine_digits(x in -1e12f64..1e12) {
            let y: f64 = format_g9(x).parse().unwrap();
            prop_assert!((x - y).abs() <= 1e-8 * x.abs().max(1e-300) || x == y);
        }

        #[test]
        fn csv_round_trip(values in proptest::collection::vec((0.0f64..20.0, 0.0f64..3.0, 0.0f64..5.0), 1..20)) {
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("out.csv");
            let rs: Vec<_> = values.iter().map(|&(t, a, e)| record(t, a, e)).collect();
            write_csv(&path, &rs).unwrap();
            let back = read_csv(&path).unwrap();
            prop_assert_eq!(back.len(), rs.len());
            for (r, b) in rs.iter().zip(&back) {
                prop_assert!((r.tau - b.tau).abs() <= 1e-8 * r.tau.abs().max(1e-12));
                prop_assert!((r.entropy - b.entropy).abs() <= 1e-8 * r.entropy.abs().max(1e-12));
                prop_assert_eq!(b.n_passages, 1);
            }
        }
    }
}
