//! `sec`: plan degrees, sample certified families, compute exponents and the threshold table.

mod manifest;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use sec_core::arith::Rational;
use sec_core::constraints::{ConstraintError, Recipe, DEFAULT_PRIME_BUDGET};
use sec_core::exponents::{
    discrepancy_grid, exponent_report, point_case_exponents, threshold_N, CConvention, ExponentError, ThresholdLedger,
    ThresholdOptions, DEFAULT_B_CAP, PUBLISHED_THRESHOLDS,
};
use sec_core::pipeline::{prepare, run_sample, PipelineError};
use sec_core::planner::{plan_degrees_md, plan_point_case_md, Curve, CurveFile, PlanError};

use manifest::RunManifest;

#[derive(Parser)]
#[command(name = "sec", version, about = "Degree-n points on superelliptic curves y^m = f(x)")]
struct Cli {
    /// Print elapsed wall-clock time to standard error.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degree plan for (m, d, n).
    Plan {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        n: u64,
        /// Plan the family through a rational point at infinity.
        #[arg(long)]
        point: bool,
    },
    /// Draw seeded specializations and certify each one.
    Sample {
        /// JSON file `{"m": 2, "f": [c0, ..., cd]}`.
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        n: u64,
        /// short-cycle-L, a-transitive, a-long, b-transitive, b-long, c-irred, c-long or point-long.
        #[arg(long)]
        recipe: String,
        #[arg(long, default_value_t = 100)]
        count: u64,
        /// Box height, an integer or fraction.
        #[arg(long = "Y", default_value = "10")]
        y: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Primes tried when collecting Dedekind evidence.
        #[arg(long, default_value_t = 500)]
        prime_budget: u64,
        /// Search budget for the recipe primes.
        #[arg(long, default_value_t = DEFAULT_PRIME_BUDGET)]
        search_budget: u64,
        /// Skip Galois certification and only check polygons.
        #[arg(long)]
        polygons_only: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exponents c and c_n for one (m, d, n), or the discrepancy report over a grid.
    Exponents {
        #[arg(long, required_unless_present = "grid")]
        m: Option<u64>,
        #[arg(long, required_unless_present = "grid")]
        d: Option<u64>,
        #[arg(long, required_unless_present = "grid")]
        n: Option<u64>,
        #[arg(long)]
        point: bool,
        /// Report every printed-formula mismatch over 2 <= m <= m-max, m <= d <= d-max, n <= n-max.
        #[arg(long)]
        grid: bool,
        #[arg(long, default_value_t = 6)]
        m_max: u64,
        #[arg(long, default_value_t = 12)]
        d_max: u64,
        #[arg(long, default_value_t = 200)]
        n_max: u64,
    },
    /// Threshold table: CSV `m,d,n0,N` plus a JSON ledger and discrepancy report.
    Table1 {
        #[arg(long, value_enum, default_value_t = Rows::Default)]
        rows: Rows,
        /// Cells for `--rows custom`, e.g. `2:3,3:100`.
        #[arg(long, value_delimiter = ',')]
        cells: Vec<String>,
        /// CSV destination (standard output if absent).
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON ledger destination.
        #[arg(long)]
        ledger: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        tail_multiplier: u64,
        /// Scan every integer n, not just multiples of gcd(m, d).
        #[arg(long)]
        all_n: bool,
        #[arg(long, value_enum, default_value_t = Convention::UnitR)]
        convention: Convention,
        #[arg(long, default_value_t = DEFAULT_B_CAP)]
        b_cap: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Rows {
    Default,
    Custom,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    UnitR,
    PlanExact,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    name: String,
    message: String,
}

impl Failure {
    fn validation(name: &str, message: impl Into<String>) -> Self {
        Self { code: 2, name: name.into(), message: message.into() }
    }
}

/// The variant identifier of an error enum, from its Debug form.
fn variant_name(e: &impl std::fmt::Debug) -> String {
    let s = format!("{e:?}");
    let s = s.trim_start_matches(|c: char| !c.is_alphanumeric());
    let inner = ["Plan(", "Constraint(", "Family(", "Arith("]
        .iter()
        .find_map(|p| s.strip_prefix(p))
        .unwrap_or(s);
    inner.split(|c: char| !c.is_alphanumeric() && c != '_').next().unwrap_or("Error").to_string()
}

impl From<PlanError> for Failure {
    fn from(e: PlanError) -> Self {
        Self { code: 2, name: variant_name(&e), message: e.to_string() }
    }
}

impl From<ExponentError> for Failure {
    fn from(e: ExponentError) -> Self {
        let code = if matches!(e, ExponentError::Invariant(_)) { 4 } else { 2 };
        Self { code, name: variant_name(&e), message: e.to_string() }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let code = match &e {
            PipelineError::Constraint(ConstraintError::SearchBudgetExceeded { .. }) => 3,
            _ => 2,
        };
        Self { code, name: variant_name(&e), message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self { code: 2, name: "Io".into(), message: e.to_string() }
    }
}

fn precision_bits() -> Result<u32, Failure> {
    match std::env::var("SEC_PRECISION_BITS") {
        Err(_) => Ok(128),
        Ok(v) => match v.trim().parse::<u32>() {
            Ok(b) if (32..=65536).contains(&b) => Ok(b),
            _ => Err(Failure::validation("BadPrecision", format!("SEC_PRECISION_BITS must be an integer in [32, 65536], got {v:?}"))),
        },
    }
}

fn to_json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("outputs serialize")
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_plan(man: RunManifest, m: u64, d: u64, n: u64, point: bool) -> Result<(), Failure> {
    let plan = if point {
        serde_json::to_value(plan_point_case_md(m, d, n)?)
    } else {
        serde_json::to_value(plan_degrees_md(m, d, n)?)
    }
    .expect("plans serialize");
    emit(None, &(to_json(&json!({ "manifest": man, "plan": plan })) + "\n"))
}

fn read_curve(path: &Path) -> Result<(CurveFile, Curve), Failure> {
    let text = fs::read_to_string(path)?;
    let file: CurveFile = serde_json::from_str(&text).map_err(|e| Failure::validation("CurveParse", format!("{}: {e}", path.display())))?;
    let curve = Curve::try_from(file.clone())?;
    Ok((file, curve))
}

#[derive(Serialize)]
struct SampleSummary {
    count: u64,
    errors: u64,
    rejected: u64,
    polygon_matches: u64,
    certified: u64,
    certified_fraction: f64,
}

#[allow(clippy::too_many_arguments)]
fn cmd_sample(
    mut man: RunManifest,
    curve_path: &Path,
    n: u64,
    recipe: &str,
    count: u64,
    y: &str,
    seed: u64,
    prime_budget: u64,
    search_budget: u64,
    polygons_only: bool,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let (file, curve) = read_curve(curve_path)?;
    man.seed = Some(seed);
    man.curve = Some(file);
    let recipe: Recipe = recipe.parse().map_err(|e: String| Failure::validation("BadRecipe", e))?;
    let y: Rational = y.parse().map_err(|_| Failure::validation("BadHeight", format!("Y must be an integer or fraction, got {y:?}")))?;
    if y < Rational::from_integer(1.into()) {
        return Err(Failure::validation("BadHeight", "Y must be at least 1"));
    }
    let budget = (!polygons_only).then_some(prime_budget);

    let prep = match prepare(&curve, n, recipe, &y, search_budget) {
        Ok(p) => Ok(p),
        Err(PipelineError::Constraint(e @ ConstraintError::Unsatisfiable { .. })) => Err(e),
        Err(e) => return Err(e.into()),
    };
    let lines: Vec<Value> = (0..count)
        .into_par_iter()
        .map(|index| {
            let prep = match &prep {
                Ok(p) => p,
                Err(e) => return json!({ "index": index, "error": variant_name(e), "message": e.to_string() }),
            };
            match run_sample(prep, seed, index, budget) {
                Ok(rec) => serde_json::to_value(&rec).expect("records serialize"),
                Err(e) => json!({ "index": index, "error": variant_name(&e), "message": e.to_string() }),
            }
        })
        .collect();

    let mut summary = SampleSummary { count, errors: 0, rejected: 0, polygon_matches: 0, certified: 0, certified_fraction: 0.0 };
    let mut text = String::new();
    for line in &lines {
        if line.get("error").is_some() {
            summary.errors += 1;
        } else if !line["rejected"].is_null() {
            summary.rejected += 1;
        } else {
            if line["polygon_matches"] == true {
                summary.polygon_matches += 1;
            }
            if line["verdict"]["status"] == "certified-sn" {
                summary.certified += 1;
            }
        }
        text.push_str(&serde_json::to_string(line).expect("json"));
        text.push('\n');
    }
    if count > 0 {
        summary.certified_fraction = summary.certified as f64 / count as f64;
    }
    let prep_json = prep.as_ref().ok().map(|p| serde_json::to_value(p).expect("prepared serializes"));
    text.push_str(&serde_json::to_string(&json!({ "summary": summary, "prepared": prep_json, "manifest": man })).expect("json"));
    text.push('\n');
    emit(out, &text)
}

fn cmd_exponents(man: RunManifest, args: (Option<u64>, Option<u64>, Option<u64>), point: bool, grid: Option<(u64, u64, u64)>) -> Result<(), Failure> {
    let body = if let Some((m_max, d_max, n_max)) = grid {
        let rep = discrepancy_grid(2, m_max, d_max, n_max)?;
        json!({ "manifest": man, "grid": rep })
    } else {
        let (m, d, n) = (args.0.unwrap(), args.1.unwrap(), args.2.unwrap());
        let rep = if point { point_case_exponents(m, d, n)? } else { exponent_report(m, d, n)? };
        json!({ "manifest": man, "report": rep })
    };
    emit(None, &(to_json(&body) + "\n"))
}

fn parse_cells(cells: &[String]) -> Result<Vec<(u64, u64)>, Failure> {
    cells
        .iter()
        .map(|c| {
            let bad = || Failure::validation("BadCell", format!("expected m:d, got {c:?}"));
            let (m, d) = c.split_once(':').ok_or_else(bad)?;
            let (m, d) = (m.trim().parse::<u64>().map_err(|_| bad())?, d.trim().parse::<u64>().map_err(|_| bad())?);
            if m < 2 || d < m {
                return Err(Failure::validation("BadCell", format!("need 2 <= m <= d, got {c:?}")));
            }
            Ok((m, d))
        })
        .collect()
}

#[derive(Serialize)]
struct CellDiscrepancy<'a> {
    m: u64,
    d: u64,
    published: (u64, u64),
    computed: (u64, u64),
    ledger: &'a ThresholdLedger,
}

#[allow(clippy::too_many_arguments)]
fn cmd_table1(
    man: RunManifest,
    rows: Rows,
    cells: &[String],
    out: Option<&Path>,
    ledger_path: Option<&Path>,
    tail_multiplier: u64,
    all_n: bool,
    convention: Convention,
    b_cap: u64,
    bits: u32,
) -> Result<(), Failure> {
    let cells = match rows {
        Rows::Default => PUBLISHED_THRESHOLDS.iter().map(|&(m, d, _, _)| (m, d)).collect(),
        Rows::Custom => {
            if cells.is_empty() {
                return Err(Failure::validation("BadCell", "--rows custom needs --cells"));
            }
            parse_cells(cells)?
        }
    };
    if tail_multiplier == 0 {
        return Err(Failure::validation("BadMultiplier", "--tail-multiplier must be positive"));
    }
    let opts = ThresholdOptions {
        tail_multiplier,
        all_n,
        b_cap,
        convention: match convention {
            Convention::UnitR => CConvention::UnitR,
            Convention::PlanExact => CConvention::PlanExact,
        },
        precision_bits: bits,
    };
    let ledgers: Vec<ThresholdLedger> = cells.par_iter().map(|&(m, d)| threshold_N(m, d, &opts)).collect();

    let mut csv = String::from("m,d,n0,N\n");
    for l in &ledgers {
        csv.push_str(&format!("{},{},{},{}\n", l.row.m, l.row.d, l.row.n0, l.row.big_n));
    }
    emit(out, &csv)?;

    let discrepancies: Vec<CellDiscrepancy> = ledgers
        .iter()
        .filter(|l| l.matches_published == Some(false))
        .map(|l| {
            let p = l.published.unwrap();
            CellDiscrepancy { m: l.row.m, d: l.row.d, published: (p.n0, p.big_n), computed: (l.row.n0, l.row.big_n), ledger: l }
        })
        .collect();
    let attempted = ledgers.iter().filter(|l| l.published.is_some()).count();
    let matched = ledgers.iter().filter(|l| l.matches_published == Some(true)).count();
    let mut err = io::stderr().lock();
    writeln!(err, "matched {matched}/{attempted} published cells")?;
    for c in &discrepancies {
        let gap = c.ledger.last_failure.as_ref().map(|e| e.exact_gap.to_string()).unwrap_or_else(|| "-".into());
        writeln!(
            err,
            "mismatch ({},{}): computed (n0={}, N={}), published (n0={}, N={}); last failing n = {:?}, exact gap {}",
            c.m,
            c.d,
            c.computed.0,
            c.computed.1,
            c.published.0,
            c.published.1,
            c.ledger.last_failure.as_ref().map(|e| e.n),
            gap
        )?;
    }
    if let Some(path) = ledger_path {
        let body = json!({
            "manifest": man,
            "options": opts,
            "matched": matched,
            "attempted": attempted,
            "discrepancies": discrepancies,
            "cells": ledgers,
        });
        fs::write(path, to_json(&body) + "\n")?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let bits = precision_bits()?;
    let start = std::time::Instant::now();
    let man = |name: &str| RunManifest::new(name, bits);
    let result = match cli.command {
        Command::Plan { m, d, n, point } => cmd_plan(man("plan"), m, d, n, point),
        Command::Sample { curve, n, recipe, count, y, seed, prime_budget, search_budget, polygons_only, out } => cmd_sample(
            man("sample"),
            &curve,
            n,
            &recipe,
            count,
            &y,
            seed,
            prime_budget,
            search_budget,
            polygons_only,
            out.as_deref(),
        ),
        Command::Exponents { m, d, n, point, grid, m_max, d_max, n_max } => {
            cmd_exponents(man("exponents"), (m, d, n), point, grid.then_some((m_max, d_max, n_max)))
        }
        Command::Table1 { rows, cells, out, ledger, tail_multiplier, all_n, convention, b_cap } => cmd_table1(
            man("table1"),
            rows,
            &cells,
            out.as_deref(),
            ledger.as_deref(),
            tail_multiplier,
            all_n,
            convention,
            b_cap,
            bits,
        ),
    };
    if cli.timing {
        eprintln!("elapsed_ms {}", start.elapsed().as_millis());
    }
    result
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = std::panic::catch_unwind(|| run(cli));
    match outcome {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(f)) => {
            eprintln!("error: {}: {}", f.name, f.message);
            ExitCode::from(f.code)
        }
        Err(_) => {
            eprintln!("error: InternalInvariant: the computation panicked");
            ExitCode::from(4)
        }
    }
}
