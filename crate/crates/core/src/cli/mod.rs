//! The `normlab` command-line front end.
//!
//! Exit codes: 0 success, 1 internal error, 2 usage or precondition
//! failure, 3 non-convergence, 4 a property or preservation check failed.

mod suites;

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{map_preservation_analysis, MapAnalysis};
use crate::derivatives::{
    rho_lambda, rho_lambda_upsilon, rho_milicic, rho_minus, rho_plus, FunctionalValue,
};
use crate::error::Error;
use crate::orthogonality::{relation_compare, Relation, SamplerConfig, SearchOutcome};
use crate::rho_infinity::{rho_inf_with, rho_n, InfMethod, QuadratureConfig};
use crate::spaces::{CVector, NormSpec};
use crate::text::{format_complex, CMatrix};

pub use suites::{run_suite, CheckRecord, Suite, SuiteParams, NONCONVERGED_ASSERTION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NONCONVERGED: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
    #[value(alias = "json_lines")]
    Jsonl,
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Norm spec, e.g. `lp:p=1.5:dim=4`, `wl1:w=1,2:dim=2`, `pd:gram=I:dim=3`,
    /// `poly:f=1,0;0,1;1,1:dim=2`.
    #[arg(long = "norm", global = true)]
    pub norm_spec_text: Option<String>,
    /// Dimension for suites run with their default norm.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub dim: Option<u64>,
    #[arg(long, global = true, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, global = true, env = "NORMLAB_SEED", default_value_t = 42)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1e-6, value_parser = parse_tol)]
    pub tol: f64,
    #[arg(long = "format", global = true, value_enum, default_value_t = OutputFormat::Table)]
    pub output_format: OutputFormat,
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err("tol must be a positive number".into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Functional {
    RhoPlus,
    RhoMinus,
    Rho,
    RhoLambda,
    RhoLambdaUpsilon,
    RhoN,
    RhoInf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Auto,
    Closed,
    Smooth,
    Quadrature,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Evaluate a functional at a pair of vectors.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, value_enum)]
        functional: Functional,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        n: Option<usize>,
        /// Route for rho_inf.
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Run a named property suite.
    Check {
        #[arg(long)]
        suite: String,
    },
    /// Search for pairs in relation `a` but not in relation `b`.
    Search {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Also write the witnesses as JSON lines to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Test whether a matrix preserves rho_inf-orthogonality.
    AnalyzeMap {
        /// Row-major complex matrix, one row per line.
        #[arg(long)]
        matrix: PathBuf,
        /// Codomain norm; defaults to the domain norm.
        #[arg(long)]
        cod_norm: Option<String>,
    },
    /// Run every suite with its default norm.
    Report,
}

#[derive(Debug, Parser)]
#[command(
    name = "normlab",
    version,
    about = "Norm derivatives, rho_inf and orthogonality in complex normed spaces"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

enum Failure {
    Lib(Error),
    Usage(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

type CliResult = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{e}");
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        // a closed downstream pipe is not an error of ours
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INTERNAL
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Nonconverged { .. } => EXIT_NONCONVERGED,
        _ => EXIT_USAGE,
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> CliResult {
    let cfg = &cli.config;
    match &cli.command {
        Command::Eval {
            x,
            y,
            functional,
            lambda,
            k,
            n,
            method,
        } => cmd_eval(cfg, x, y, *functional, *lambda, *k, *n, *method, out),
        Command::Check { suite } => {
            let suite: Suite = suite.parse()?;
            let records = run_suite(suite, &suite_params(cfg)?)?;
            write_records(cfg.output_format, &records, out)?;
            Ok(records_exit_code(&records))
        }
        Command::Report => {
            let params = SuiteParams {
                spec: None,
                ..suite_params(cfg)?
            };
            let mut records = Vec::new();
            for suite in Suite::ALL {
                records.extend(run_suite(suite, &params)?);
            }
            write_records(cfg.output_format, &records, out)?;
            Ok(records_exit_code(&records))
        }
        Command::Search { a, b, out: file } => cmd_search(cfg, a, b, file.as_ref(), out),
        Command::AnalyzeMap { matrix, cod_norm } => {
            cmd_analyze_map(cfg, matrix, cod_norm.as_deref(), out)
        }
    }
}

fn require_norm(cfg: &RunConfig) -> std::result::Result<NormSpec, Failure> {
    let text = cfg
        .norm_spec_text
        .as_deref()
        .ok_or_else(|| Failure::Usage("--norm is required for this command".into()))?;
    Ok(text.parse()?)
}

fn suite_params(cfg: &RunConfig) -> std::result::Result<SuiteParams, Failure> {
    let spec = match &cfg.norm_spec_text {
        Some(t) => Some(t.parse::<NormSpec>()?),
        None => None,
    };
    Ok(SuiteParams {
        spec,
        dim: cfg.dim.map(|d| d as usize),
        samples: cfg.samples as usize,
        seed: cfg.seed,
        tol: cfg.tol,
    })
}

fn records_exit_code(records: &[CheckRecord]) -> i32 {
    let failed: Vec<&CheckRecord> = records.iter().filter(|r| !r.pass).collect();
    if failed.is_empty() {
        EXIT_OK
    } else if failed.iter().all(|r| r.assertion == NONCONVERGED_ASSERTION) {
        EXIT_NONCONVERGED
    } else {
        EXIT_VIOLATION
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn jsonl<T: Serialize>(out: &mut dyn Write, value: &T) -> std::result::Result<(), Failure> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_eval(
    cfg: &RunConfig,
    x: &str,
    y: &str,
    functional: Functional,
    lambda: Option<f64>,
    k: Option<u32>,
    n: Option<usize>,
    method: Method,
    out: &mut dyn Write,
) -> CliResult {
    let spec = require_norm(cfg)?;
    let x: CVector = x.parse()?;
    let y: CVector = y.parse()?;
    let need = |name: &str| Failure::Usage(format!("--{name} is required for this functional"));
    let result = match functional {
        Functional::RhoPlus => rho_plus(&spec, &x, &y),
        Functional::RhoMinus => rho_minus(&spec, &x, &y),
        Functional::Rho => rho_milicic(&spec, &x, &y),
        Functional::RhoLambda => rho_lambda(&spec, &x, &y, lambda.ok_or_else(|| need("lambda"))?),
        Functional::RhoLambdaUpsilon => rho_lambda_upsilon(
            &spec,
            &x,
            &y,
            lambda.ok_or_else(|| need("lambda"))?,
            k.ok_or_else(|| need("k"))?,
        ),
        Functional::RhoN => rho_n(&spec, &x, &y, n.ok_or_else(|| need("n"))?),
        Functional::RhoInf => {
            let m = match method {
                Method::Auto => InfMethod::Auto,
                Method::Closed => InfMethod::ClosedForm,
                Method::Smooth => InfMethod::SmoothFastPath,
                Method::Quadrature => InfMethod::Quadrature,
            };
            rho_inf_with(&spec, &x, &y, m, QuadratureConfig::default()).map(|(v, _)| v)
        }
    };
    let name = functional
        .to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string();
    match result {
        Ok(v) => {
            write_value(cfg.output_format, &name, &v, true, out)?;
            Ok(EXIT_OK)
        }
        Err(e) => match e.estimate() {
            Some(est) => {
                write_value(cfg.output_format, &name, est, false, out)?;
                Err(Failure::Lib(e))
            }
            None => Err(Failure::Lib(e)),
        },
    }
}

#[derive(Serialize)]
struct ValueRecord<'a> {
    functional: &'a str,
    value: String,
    abs_error: f64,
    path: &'static str,
    converged: bool,
}

fn write_value(
    format: OutputFormat,
    functional: &str,
    v: &FunctionalValue,
    converged: bool,
    out: &mut dyn Write,
) -> std::result::Result<(), Failure> {
    let value = format_complex(v.value);
    match format {
        OutputFormat::Table => {
            writeln!(out, "{value} ({})", v.path.as_str())?;
            writeln!(out, "abs_error: {:e}", v.abs_error)?;
            if !converged {
                writeln!(out, "converged: false")?;
            }
        }
        OutputFormat::Csv => {
            writeln!(out, "functional,value,abs_error,path,converged")?;
            writeln!(
                out,
                "{functional},{value},{:e},{},{converged}",
                v.abs_error,
                v.path.as_str()
            )?;
        }
        OutputFormat::Jsonl => jsonl(
            out,
            &ValueRecord {
                functional,
                value,
                abs_error: v.abs_error,
                path: v.path.as_str(),
                converged,
            },
        )?,
    }
    Ok(())
}

fn write_records(
    format: OutputFormat,
    records: &[CheckRecord],
    out: &mut dyn Write,
) -> std::result::Result<(), Failure> {
    match format {
        OutputFormat::Table => {
            let width = records
                .iter()
                .map(|r| r.assertion.len())
                .max()
                .unwrap_or(9)
                .max(9);
            let swidth = records
                .iter()
                .map(|r| r.suite.len())
                .max()
                .unwrap_or(5)
                .max(5);
            writeln!(
                out,
                "{:<swidth$}  {:<width$}  {:>13}  {:>13}  result",
                "suite", "assertion", "lhs", "rhs"
            )?;
            for r in records {
                writeln!(
                    out,
                    "{:<swidth$}  {:<width$}  {:>13.6e}  {:>13.6e}  {}",
                    r.suite,
                    r.assertion,
                    r.lhs,
                    r.rhs,
                    if r.pass { "PASS" } else { "FAIL" }
                )?;
            }
            let passed = records.iter().filter(|r| r.pass).count();
            writeln!(out, "{passed}/{} assertions passed", records.len())?;
        }
        OutputFormat::Csv => {
            writeln!(out, "suite,assertion,lhs,rhs,tol,pass,seed")?;
            for r in records {
                writeln!(
                    out,
                    "{},{},{:e},{:e},{:e},{},{}",
                    r.suite,
                    csv_field(&r.assertion),
                    r.lhs,
                    r.rhs,
                    r.tol,
                    r.pass,
                    r.seed
                )?;
            }
        }
        OutputFormat::Jsonl => {
            for r in records {
                jsonl(out, r)?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct WitnessRecord<'a> {
    relation_a: Relation,
    relation_b: Relation,
    index: u64,
    seed: u64,
    x: &'a CVector,
    y: &'a CVector,
    residual_a: f64,
    residual_b: f64,
}

fn witness_records(o: &SearchOutcome) -> Vec<WitnessRecord<'_>> {
    o.witnesses
        .iter()
        .map(|w| WitnessRecord {
            relation_a: o.relation_a,
            relation_b: o.relation_b,
            index: w.index,
            seed: w.seed,
            x: &w.x,
            y: &w.y,
            residual_a: w.residual_a,
            residual_b: w.residual_b,
        })
        .collect()
}

fn cmd_search(
    cfg: &RunConfig,
    a: &str,
    b: &str,
    file: Option<&PathBuf>,
    out: &mut dyn Write,
) -> CliResult {
    let spec = require_norm(cfg)?;
    let a: Relation = a.parse()?;
    let b: Relation = b.parse()?;
    let sampler = SamplerConfig {
        tol: cfg.tol,
        ..SamplerConfig::new(spec.dim(), cfg.samples as usize, cfg.seed)
    };
    let outcome = relation_compare(&spec, a, b, &sampler)?;
    let records = witness_records(&outcome);
    match cfg.output_format {
        OutputFormat::Table => {
            writeln!(
                out,
                "search {a} -> {b} on {spec}: samples {}, seed {}, satisfied {}, unknown {}, witnesses {}",
                outcome.samples,
                outcome.seed,
                outcome.satisfied,
                outcome.unknown,
                outcome.witnesses.len()
            )?;
            for w in &outcome.witnesses {
                writeln!(
                    out,
                    "index {}  x={}  y={}  residual_{a}={:.6e}  residual_{b}={:.6e}",
                    w.index, w.x, w.y, w.residual_a, w.residual_b
                )?;
            }
        }
        OutputFormat::Csv => {
            writeln!(
                out,
                "relation_a,relation_b,index,seed,x,y,residual_a,residual_b"
            )?;
            for w in &outcome.witnesses {
                writeln!(
                    out,
                    "{a},{b},{},{},{},{},{:e},{:e}",
                    w.index,
                    w.seed,
                    csv_field(&w.x.to_string()),
                    csv_field(&w.y.to_string()),
                    w.residual_a,
                    w.residual_b
                )?;
            }
        }
        OutputFormat::Jsonl => {
            for r in &records {
                jsonl(out, r)?;
            }
        }
    }
    if let Some(path) = file {
        let mut f = io::BufWriter::new(std::fs::File::create(path)?);
        for r in &records {
            jsonl(&mut f, r)?;
        }
        f.flush()?;
    }
    Ok(EXIT_OK)
}

fn cmd_analyze_map(
    cfg: &RunConfig,
    matrix: &PathBuf,
    cod: Option<&str>,
    out: &mut dyn Write,
) -> CliResult {
    let dom = require_norm(cfg)?;
    let cod: NormSpec = match cod {
        Some(t) => t.parse()?,
        None => dom.clone(),
    };
    let text = std::fs::read_to_string(matrix)
        .map_err(|e| Failure::Usage(format!("cannot read `{}`: {e}", matrix.display())))?;
    let t: CMatrix = text.parse()?;
    let a = map_preservation_analysis(&dom, &cod, &t, cfg.samples as usize, cfg.seed, cfg.tol)?;
    write_map(cfg.output_format, &a, out)?;
    Ok(if a.preserves { EXIT_OK } else { EXIT_VIOLATION })
}

fn write_map(
    format: OutputFormat,
    a: &MapAnalysis,
    out: &mut dyn Write,
) -> std::result::Result<(), Failure> {
    match format {
        OutputFormat::Table => {
            writeln!(out, "operator_norm_est      {:.12e}", a.operator_norm_est)?;
            writeln!(out, "isometry_defect        {:.6e}", a.isometry_defect)?;
            writeln!(
                out,
                "scale_identity_defect  {:.6e}",
                a.scale_identity_defect
            )?;
            writeln!(out, "orthogonal_pairs       {}", a.orthogonal_pairs)?;
            writeln!(out, "nonconverged           {}", a.nonconverged)?;
            writeln!(out, "samples                {}", a.samples)?;
            writeln!(out, "seed                   {}", a.seed)?;
            writeln!(out, "tol                    {:e}", a.tol)?;
            writeln!(out, "witnesses              {}", a.witnesses.len())?;
            writeln!(out, "preserves              {}", a.preserves)?;
            for w in &a.witnesses {
                writeln!(
                    out,
                    "witness index {}  x={}  y={}  Tx={}  Ty={}  residual_image={:.6e}",
                    w.index, w.x, w.y, w.image_x, w.image_y, w.residual_image
                )?;
            }
        }
        OutputFormat::Csv => {
            writeln!(
                out,
                "operator_norm_est,isometry_defect,scale_identity_defect,orthogonal_pairs,witnesses,preserves,samples,seed,tol"
            )?;
            writeln!(
                out,
                "{:e},{:e},{:e},{},{},{},{},{},{:e}",
                a.operator_norm_est,
                a.isometry_defect,
                a.scale_identity_defect,
                a.orthogonal_pairs,
                a.witnesses.len(),
                a.preserves,
                a.samples,
                a.seed,
                a.tol
            )?;
        }
        OutputFormat::Jsonl => jsonl(out, a)?,
    }
    Ok(())
}
