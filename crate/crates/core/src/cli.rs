//! Command-line front end: CSV ingestion and the simulate / fit / test /
//! compare / diagnose workflows.
//!
//! Structured output is one JSON record `{command, inputs, results, warnings}`
//! (or `{command, inputs, error, warnings}` on failure) with every number
//! rounded to 12 significant digits.

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::estimation::{bootstrap_se, fit, sample_moments, FitResult, Method};
use crate::inference::{empirical_dispersion, lrt, TestResult};
use crate::model::{CountPair, ModelParams, Sample, SubmodelKind};
use crate::sampler::{sample_bivariate, Seed};
use crate::select::{compare_models, ComparisonReport, ModelCard};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Draw a sample and write it as CSV.
    Simulate,
    /// Fit one model by moments or maximum likelihood.
    Fit,
    /// Likelihood-ratio test of a submodel against the full model.
    Test,
    /// AIC comparison of the original and mirrored models.
    Compare,
    /// Empirical dispersion indices and correlation.
    Diagnose,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Fit => "fit",
            Command::Test => "test",
            Command::Compare => "compare",
            Command::Diagnose => "diagnose",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Full,
    EqualRates,
    ZeroIntercept,
    Independence,
}

impl From<ModelArg> for SubmodelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Full => SubmodelKind::Full,
            ModelArg::EqualRates => SubmodelKind::EqualRates,
            ModelArg::ZeroIntercept => SubmodelKind::ZeroIntercept,
            ModelArg::Independence => SubmodelKind::Independence,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Mom,
    Mle,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Mom => Method::Moment,
            MethodArg::Mle => Method::Mle,
        }
    }
}

/// Bivariate Pseudo-Poisson toolkit.
#[derive(Debug, Clone, Parser)]
#[command(name = "pseudo-poisson", version)]
pub struct CliConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// CSV file with two nonnegative integer columns.
    #[arg(long = "input")]
    pub input_path: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long = "output")]
    pub output_path: Option<PathBuf>,
    #[arg(long = "format", value_enum, default_value_t = OutputFormat::Json)]
    pub output_format: OutputFormat,
    /// Seed for simulation and bootstrap resampling.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// Number of bootstrap replicates for standard errors.
    #[arg(long = "bootstrap")]
    pub bootstrap_b: Option<usize>,
    /// Parameters as `lambda1,lambda2,lambda3`.
    #[arg(long, value_parser = parse_params)]
    pub params: Option<ModelParams>,
    /// Sample size for `simulate`.
    #[arg(long)]
    pub n: Option<usize>,
    /// The input CSV starts with a header row.
    #[arg(long)]
    pub header: bool,
}

impl CliConfig {
    /// Configuration for `command` with every option unset.
    pub fn new(command: Command) -> Self {
        CliConfig {
            command,
            input_path: None,
            output_path: None,
            output_format: OutputFormat::Json,
            seed: None,
            model: None,
            method: None,
            bootstrap_b: None,
            params: None,
            n: None,
            header: false,
        }
    }
}

pub fn parse_params(s: &str) -> std::result::Result<ModelParams, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected lambda1,lambda2,lambda3, got '{s}'"));
    }
    let mut vals = [0.0; 3];
    for (slot, part) in vals.iter_mut().zip(&parts) {
        *slot = part
            .parse::<f64>()
            .map_err(|e| format!("invalid number '{part}': {e}"))?;
    }
    ModelParams::new(vals[0], vals[1], vals[2]).map_err(|e| e.to_string())
}

/// Parse a two-column CSV of nonnegative integers.
pub fn read_csv(path: &Path, header: bool) -> Result<Sample> {
    let file = File::open(path)
        .map_err(|e| Error::domain(format!("cannot open {}: {e}", path.display())))?;
    read_csv_from(file, header)
}

pub fn read_csv_from<R: Read>(reader: R, header: bool) -> Result<Sample> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut pairs = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let fallback_row = i as u64 + 1 + header as u64;
        let record = record.map_err(|e| Error::Parse {
            row: e.position().map_or(fallback_row, |p| p.line()),
            message: e.to_string(),
        })?;
        let row = record.position().map_or(fallback_row, |p| p.line());
        if record.len() != 2 {
            return Err(Error::Parse {
                row,
                message: format!("expected 2 fields, found {}", record.len()),
            });
        }
        let field = |k: usize| -> Result<u64> {
            let raw = &record[k];
            if raw.is_empty() {
                return Err(Error::Parse {
                    row,
                    message: format!("field {} is missing", k + 1),
                });
            }
            if raw.parse::<i64>().is_ok_and(|v| v < 0) {
                return Err(Error::Parse {
                    row,
                    message: format!("field {} is negative ({raw})", k + 1),
                });
            }
            raw.parse::<u64>().map_err(|_| Error::Parse {
                row,
                message: format!("field {} is not a nonnegative integer ({raw:?})", k + 1),
            })
        };
        pairs.push(CountPair::new(field(0)?, field(1)?));
    }
    if pairs.is_empty() {
        return Err(Error::domain("input contains no data rows"));
    }
    Sample::new(pairs)
}

/// CSV with an `x1,x2` header.
pub fn write_csv<W: Write>(sample: &Sample, mut out: W) -> io::Result<()> {
    let mut buf = String::with_capacity(sample.len() * 8 + 6);
    buf.push_str("x1,x2\n");
    for p in sample {
        buf.push_str(&p.x1.to_string());
        buf.push(',');
        buf.push_str(&p.x2.to_string());
        buf.push('\n');
    }
    out.write_all(buf.as_bytes())
}

/// Round to 12 significant digits; non-finite values become strings.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
        json!(rounded)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn triple(v: [f64; 3]) -> Value {
    json!({"lambda1": num(v[0]), "lambda2": num(v[1]), "lambda3": num(v[2])})
}

pub fn fit_json(f: &FitResult) -> Value {
    json!({
        "model": f.model.as_str(),
        "method": f.method.as_str(),
        "estimates": triple(f.estimates.as_array()),
        "raw": triple(f.raw),
        "se": f.se.map(triple).unwrap_or(Value::Null),
        "loglik": num(f.loglik),
        "minus_two_loglik": num(f.deviance()),
        "converged": f.converged,
        "boundary": f.boundary,
        "corr_hat": num(f.corr_hat),
    })
}

pub fn test_json(t: &TestResult) -> Value {
    json!({
        "hypothesis": t.hypothesis.as_str(),
        "stat": num(t.stat),
        "pvalue": num(t.pvalue),
        "df": t.df,
        "boundary_caution": t.boundary_caution,
        "restricted_fit": fit_json(&t.restricted_fit),
        "full_fit": fit_json(&t.full_fit),
    })
}

fn card_json(c: &ModelCard) -> Value {
    json!({
        "name": c.name.label(),
        "mirrored": c.mirrored,
        "submodel": c.submodel.as_str(),
        "nparams": c.nparams,
        "feasible": c.feasible,
        "aic": c.aic.map(num).unwrap_or(Value::Null),
        "fit": c.fit.as_ref().map(fit_json).unwrap_or(Value::Null),
        "reason": c.reason.clone().map(Value::String).unwrap_or(Value::Null),
    })
}

pub fn report_json(r: &ComparisonReport) -> Value {
    json!({
        "cards": r.cards.iter().map(card_json).collect::<Vec<_>>(),
        "independence": card_json(&r.independence),
        "best": r.best.label(),
    })
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub exit_code: i32,
    /// Report text (JSON, table or CSV).
    pub output: String,
    /// Human-readable messages for stderr.
    pub diagnostics: Vec<String>,
}

struct Report {
    results: Value,
    table: String,
    warnings: Vec<String>,
}

fn inputs_json(cfg: &CliConfig) -> Value {
    let mut m = Map::new();
    m.insert(
        "input".into(),
        cfg.input_path
            .as_ref()
            .map(|p| json!(p.display().to_string()))
            .unwrap_or(Value::Null),
    );
    m.insert("header".into(), json!(cfg.header));
    m.insert("seed".into(), cfg.seed.map(|s| json!(s)).unwrap_or(Value::Null));
    m.insert(
        "model".into(),
        cfg.model
            .map(|k| json!(SubmodelKind::from(k).as_str()))
            .unwrap_or(Value::Null),
    );
    m.insert(
        "method".into(),
        cfg.method
            .map(|k| json!(Method::from(k).as_str()))
            .unwrap_or(Value::Null),
    );
    m.insert(
        "bootstrap".into(),
        cfg.bootstrap_b.map(|b| json!(b)).unwrap_or(Value::Null),
    );
    m.insert(
        "params".into(),
        cfg.params
            .map(|p| triple(p.as_array()))
            .unwrap_or(Value::Null),
    );
    m.insert("n".into(), cfg.n.map(|n| json!(n)).unwrap_or(Value::Null));
    Value::Object(m)
}

fn seed_or_default(cfg: &CliConfig, warnings: &mut Vec<String>) -> Seed {
    match cfg.seed {
        Some(s) => Seed(s),
        None => {
            warnings.push("no --seed given; using seed 0".into());
            Seed(0)
        }
    }
}

fn load_input(cfg: &CliConfig) -> Result<Sample> {
    let path = cfg
        .input_path
        .as_ref()
        .ok_or_else(|| Error::domain(format!("{} requires --input", cfg.command.as_str())))?;
    read_csv(path, cfg.header)
}

fn fit_warnings(f: &FitResult, warnings: &mut Vec<String>) {
    if f.boundary {
        warnings.push(format!(
            "boundary estimate for the {} model ({}): lambda2 = {} and lambda3 = {}; raw values {:?}",
            f.model,
            f.method,
            f.estimates.lambda2(),
            f.estimates.lambda3(),
            f.raw
        ));
    }
    if !f.loglik.is_finite() {
        warnings.push(format!(
            "the {} estimates give the data zero likelihood",
            f.model
        ));
    }
}

fn fit_table(f: &FitResult) -> String {
    let names = ["lambda1", "lambda2", "lambda3"];
    let est = f.estimates.as_array();
    let mut out = format!(
        "{} model, {} estimates\n{:<10} {:>14} {:>14}\n",
        f.model, f.method, "Parameter", "Estimate", "SE"
    );
    for k in 0..3 {
        let se = f
            .se
            .map(|s| format!("{:.6}", s[k]))
            .unwrap_or_else(|| "-".into());
        out.push_str(&format!("{:<10} {:>14.6} {:>14}\n", names[k], est[k], se));
    }
    out.push_str(&format!("{:<10} {:>14.6}\n", "rho", f.corr_hat));
    out.push_str(&format!("-2 log L = {:.3}\n", f.deviance()));
    if f.boundary {
        out.push_str("(boundary estimate)\n");
    }
    out
}

fn run_fit(cfg: &CliConfig) -> Result<Report> {
    let sample = load_input(cfg)?;
    let model = cfg.model.map(SubmodelKind::from).unwrap_or(SubmodelKind::Full);
    let method = cfg.method.map(Method::from).unwrap_or(Method::Mle);
    let mut warnings = Vec::new();
    let mut result = fit(&sample, model, method)?;
    let mut bootstrap = Value::Null;
    if let Some(b) = cfg.bootstrap_b {
        let seed = seed_or_default(cfg, &mut warnings);
        let bs = bootstrap_se(&sample, model, method, b, seed)?;
        if bs.failed > 0 {
            warnings.push(format!(
                "{} of {} bootstrap replicates failed to fit and were excluded",
                bs.failed, b
            ));
        }
        result.se = Some(bs.se);
        bootstrap = json!({"replicates": bs.replicates, "failed": bs.failed});
    }
    fit_warnings(&result, &mut warnings);
    let mut results = fit_json(&result);
    results["n"] = json!(sample.len());
    results["bootstrap"] = bootstrap;
    Ok(Report {
        table: fit_table(&result),
        results,
        warnings,
    })
}

fn run_test(cfg: &CliConfig) -> Result<Report> {
    let sample = load_input(cfg)?;
    let hypothesis = cfg
        .model
        .map(SubmodelKind::from)
        .ok_or_else(|| Error::domain("test requires --model (equal-rates, zero-intercept or independence)"))?;
    let t = lrt(&sample, hypothesis)?;
    let mut warnings = Vec::new();
    if t.boundary_caution {
        warnings.push(
            "H0: lambda3 = 0 lies on the boundary of the parameter space; the chi-square(1) \
             reference is approximate (the large-sample null is a mixture)"
                .into(),
        );
    }
    fit_warnings(&t.full_fit, &mut warnings);
    let table = format!(
        "H0: {} model\n-2 log Lambda = {:.6}\ndf = {}\np-value = {:.6e}\n",
        t.hypothesis, t.stat, t.df, t.pvalue
    );
    Ok(Report {
        results: test_json(&t),
        table,
        warnings,
    })
}

fn run_compare(cfg: &CliConfig) -> Result<Report> {
    let sample = load_input(cfg)?;
    let report = compare_models(&sample)?;
    let mut warnings = Vec::new();
    for card in &report.cards {
        if let Some(reason) = &card.reason {
            warnings.push(format!("BPP {} not fitted: {reason}", card.name.label()));
        }
        if let Some(f) = &card.fit {
            if f.boundary {
                warnings.push(format!("BPP {} has a boundary estimate", card.name.label()));
            }
        }
    }
    Ok(Report {
        results: report_json(&report),
        table: report.to_table(),
        warnings,
    })
}

fn run_diagnose(cfg: &CliConfig) -> Result<Report> {
    let sample = load_input(cfg)?;
    let (d1, d2) = empirical_dispersion(&sample)?;
    let m = sample_moments(&sample);
    let corr = m.correlation();
    let results = json!({
        "n": sample.len(),
        "mean": [num(m.m1), num(m.m2)],
        "covariance": num(m.s12),
        "dispersion_index": [num(d1), num(d2)],
        "correlation": num(corr),
    });
    let mut warnings = Vec::new();
    let near_one = |d: f64| (d - 1.0).abs() <= 0.1;
    if !(near_one(d1) && d2 > 1.0) && !(near_one(d2) && d1 > 1.0) {
        warnings.push(
            "neither margin pairs an equi-dispersed count with an over-dispersed one".into(),
        );
    } else if near_one(d2) && d1 > 1.0 && !near_one(d1) {
        warnings.push("x2 looks equi-dispersed and x1 over-dispersed; consider the mirrored model".into());
    }
    let table = format!(
        "n = {}\nmeans = ({:.6}, {:.6})\ndispersion index x1 = {:.6}\ndispersion index x2 = {:.6}\ncorrelation = {:.6}\n",
        sample.len(),
        m.m1,
        m.m2,
        d1,
        d2,
        corr
    );
    Ok(Report {
        results,
        table,
        warnings,
    })
}

fn run_simulate(cfg: &CliConfig) -> Result<(String, Vec<String>)> {
    let params = cfg
        .params
        .ok_or_else(|| Error::domain("simulate requires --params"))?;
    let n = cfg.n.ok_or_else(|| Error::domain("simulate requires --n"))?;
    let mut warnings = Vec::new();
    let seed = seed_or_default(cfg, &mut warnings);
    let sample = sample_bivariate(&params, n, seed)?;
    let mut buf = Vec::new();
    write_csv(&sample, &mut buf)?;
    Ok((String::from_utf8(buf).expect("csv is ascii"), warnings))
}

fn render(cfg: &CliConfig, outcome: Result<Report>) -> (i32, String, Vec<String>) {
    let command = cfg.command.as_str();
    match outcome {
        Ok(report) => {
            let text = match cfg.output_format {
                OutputFormat::Json => {
                    let v = json!({
                        "command": command,
                        "inputs": inputs_json(cfg),
                        "results": report.results,
                        "warnings": report.warnings,
                    });
                    serde_json::to_string_pretty(&v).expect("json") + "\n"
                }
                OutputFormat::Table => {
                    let mut t = report.table;
                    for w in &report.warnings {
                        t.push_str(&format!("warning: {w}\n"));
                    }
                    t
                }
            };
            (0, text, report.warnings)
        }
        Err(e) => {
            let msg = format!("{command}: {e}");
            let text = match cfg.output_format {
                OutputFormat::Json => {
                    let v = json!({
                        "command": command,
                        "inputs": inputs_json(cfg),
                        "error": {"kind": e.kind(), "message": e.to_string()},
                        "warnings": Vec::<String>::new(),
                    });
                    serde_json::to_string_pretty(&v).expect("json") + "\n"
                }
                OutputFormat::Table => format!("error: {msg}\n"),
            };
            (e.exit_code(), text, vec![msg])
        }
    }
}

/// Execute one command. Nothing is written to disk unless `output_path` is
/// set; the caller prints `output` otherwise.
pub fn run(cfg: &CliConfig) -> RunOutcome {
    let (exit_code, text, diagnostics) = match cfg.command {
        Command::Simulate => match run_simulate(cfg) {
            Ok((csv, warnings)) => (0, csv, warnings),
            Err(e) => render(cfg, Err(e)),
        },
        Command::Fit => render(cfg, run_fit(cfg)),
        Command::Test => render(cfg, run_test(cfg)),
        Command::Compare => render(cfg, run_compare(cfg)),
        Command::Diagnose => render(cfg, run_diagnose(cfg)),
    };
    let mut outcome = RunOutcome {
        exit_code,
        output: text,
        diagnostics,
    };
    if let Some(path) = &cfg.output_path {
        if let Err(e) = std::fs::write(path, &outcome.output) {
            outcome.exit_code = 2;
            outcome
                .diagnostics
                .push(format!("cannot write {}: {e}", path.display()));
        }
    }
    outcome
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_header_and_rows() {
        let s = read_csv_from("x1,x2\n0,1\n2,3".as_bytes(), true).unwrap();
        assert_eq!(s.pairs(), &[CountPair::new(0, 1), CountPair::new(2, 3)]);
    }

    #[test]
    fn rejects_negative_with_row() {
        let err = read_csv_from("-1,0".as_bytes(), false).unwrap_err();
        match err {
            Error::Parse { row, message } => {
                assert_eq!(row, 1);
                assert!(message.contains("negative"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tolerates_whitespace_and_crlf() {
        let s = read_csv_from("3, 4\r\n0,0\r\n".as_bytes(), false).unwrap();
        assert_eq!(s.pairs(), &[CountPair::new(3, 4), CountPair::new(0, 0)]);
    }

    #[test]
    fn reports_bad_rows() {
        let err = read_csv_from("1,2\n3\n".as_bytes(), false).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 2, .. }));
        let err = read_csv_from("x1,x2\n1,2\n3,a\n".as_bytes(), true).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 3, .. }));
        let err = read_csv_from("1,\n".as_bytes(), false).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 1, .. }));
        assert!(matches!(
            read_csv_from("".as_bytes(), false),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            read_csv_from("x1,x2\n".as_bytes(), true),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn params_flag() {
        let p = parse_params("1, 3,4").unwrap();
        assert_eq!(p.as_array(), [1.0, 3.0, 4.0]);
        assert!(parse_params("1,3").is_err());
        assert!(parse_params("0,3,4").is_err());
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(num(1.0 / 3.0), json!(0.333333333333));
        assert_eq!(num(f64::NEG_INFINITY), json!("-inf"));
        assert_eq!(num(32772.08), json!(32772.08));
    }

    #[test]
    fn simulate_requires_params() {
        let mut cfg = CliConfig::new(Command::Simulate);
        cfg.n = Some(5);
        let out = run(&cfg);
        assert_eq!(out.exit_code, 2);
    }
}
