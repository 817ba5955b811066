use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};

use gcdsum_core::arith::RealExponent;
use gcdsum_core::scalar::Value;
use gcdsum_core::asymptotic::{sweep_grid, ErrorTermEngine, TheoremId};
use gcdsum_core::gcdsum::{verify_identity, FSpec};
use gcdsum_core::meansquare::{
    mean_square_report_with, series_constant_with, MeanSquareTheorem, SeriesKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Command, RunConfig};
use crate::error::CliError;

/// Relative tolerance for identity rows evaluated in floating point.
pub const REAL_IDENTITY_TOL: f64 = 1e-9;

pub const IDENTITY_HEADER: &str = "x,lhs,rhs,discrepancy";
pub const ERROR_TERM_HEADER: &str = "x,exact,main,K,K_formula,residual";
pub const MEAN_SQUARE_HEADER: &str = "T,integral,prediction,ratio";
pub const CONSTANTS_HEADER: &str = "kind,a,form,N,value,tail_bound";
pub const TABULATE_HEADER: &str = "n,value,partial_sum";

/// Outcome of a run that produced its table.
#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Ok,
    /// A hard invariant failed (exit code 2).
    Violation(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub csv: String,
    pub status: Status,
}

/// Reals with 17 significant digits.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_value(v: &Value) -> String {
    v.to_string()
}

fn required<'a>(v: &'a Option<String>, what: &str, cfg: &RunConfig) -> Result<&'a str, CliError> {
    v.as_deref()
        .ok_or_else(|| CliError::Config(format!("{} needs --{what}", cfg.command)))
}

/// Build the CSV for `cfg` without touching the filesystem.
pub fn render(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    match cfg.command {
        Command::VerifyIdentity => verify(cfg),
        Command::ErrorTerm => error_term(cfg),
        Command::MeanSquare => mean_square(cfg),
        Command::Constants => constants(cfg),
        Command::Tabulate => tabulate(cfg),
    }
}

/// Render and write to the configured output (stdout when absent).
pub fn run(cfg: &RunConfig) -> Result<Status, CliError> {
    let out = render(cfg)?;
    match &cfg.output {
        Some(path) => fs::write(path, out.csv.as_bytes())?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(out.csv.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(out.status)
}

fn verify(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let selector: FSpec = required(&cfg.f, "f", cfg)?.parse()?;
    if !(cfg.x_max >= 1.0) {
        return Err(CliError::Config("x_max must be at least 1".into()));
    }
    let n = cfg.x_max.floor() as usize;
    let backend = cfg.backend.unwrap_or_else(|| selector.natural_backend());
    let table = selector.materialize(n.max(2), backend)?;
    let rows = verify_identity(&table, cfg.r, cfg.s, n)?;
    let mut csv = String::from(IDENTITY_HEADER);
    csv.push('\n');
    let mut bad = Vec::new();
    for row in &rows {
        writeln!(
            csv,
            "{},{},{},{}",
            row.x,
            fmt_value(&row.lhs),
            fmt_value(&row.rhs),
            fmt_value(&row.discrepancy)
        )
        .expect("write to string");
        if !row.holds(REAL_IDENTITY_TOL) {
            bad.push(row.x);
        }
    }
    let status = if bad.is_empty() {
        Status::Ok
    } else {
        Status::Violation(format!("identity fails at x = {bad:?}"))
    };
    Ok(RunOutput { csv, status })
}

/// Sweep grid plus `samples` seeded uniform points, sorted.
pub fn error_term_grid(cfg: &RunConfig) -> Vec<f64> {
    let mut xs = sweep_grid(cfg.x_min, cfg.x_max, cfg.points, cfg.window);
    if cfg.samples > 0 && cfg.x_max > cfg.x_min {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        xs.extend((0..cfg.samples).map(|_| rng.gen_range(cfg.x_min..cfg.x_max)));
        xs.sort_by(f64::total_cmp);
        xs.dedup();
    }
    xs
}

fn error_term(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let id: TheoremId = required(&cfg.theorem, "theorem", cfg)?.parse()?;
    let params = id.params(cfg.r, cfg.s, cfg.a)?;
    if !(cfg.x_min >= 1.0 && cfg.x_max >= cfg.x_min) {
        return Err(CliError::Config("need 1 <= x_min <= x_max".into()));
    }
    let xs = error_term_grid(cfg);
    let engine = ErrorTermEngine::new(id, params, cfg.x_max.floor() as usize)?;
    let samples = engine.sample_many(&xs)?;
    let mut csv = String::from(ERROR_TERM_HEADER);
    csv.push('\n');
    let mut status = Status::Ok;
    for e in &samples {
        writeln!(
            csv,
            "{},{},{},{},{},{}",
            fmt_real(e.x),
            fmt_real(e.exact),
            fmt_real(e.main),
            fmt_real(e.k),
            fmt_real(e.k_formula),
            fmt_real(e.residual)
        )
        .expect("write to string");
        if !e.residual.is_finite() && status == Status::Ok {
            status = Status::Violation(format!("non-finite residual at x = {}", e.x));
        }
    }
    Ok(RunOutput { csv, status })
}

fn mean_square(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let th: MeanSquareTheorem = required(&cfg.theorem, "theorem", cfg)?.parse()?;
    let rep = mean_square_report_with(th, cfg.r, cfg.a, &cfg.t_list, cfg.series_terms, cfg.form)?;
    let mut csv = String::from(MEAN_SQUARE_HEADER);
    csv.push('\n');
    let mut prev = 0.0;
    let mut status = Status::Ok;
    for row in &rep.rows {
        writeln!(
            csv,
            "{},{},{},{}",
            fmt_real(row.t),
            fmt_real(row.integral),
            fmt_real(row.prediction),
            fmt_real(row.ratio)
        )
        .expect("write to string");
        if !(row.integral >= prev) && status == Status::Ok {
            status = Status::Violation(format!("integral decreased at T = {}", row.t));
        }
        prev = row.integral;
    }
    Ok(RunOutput { csv, status })
}

fn constants(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let kinds: Vec<SeriesKind> = match &cfg.kinds {
        Some(list) => list
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(str::parse)
            .collect::<Result<_, _>>()?,
        None if cfg.a.is_some() => vec![
            SeriesKind::C2,
            SeriesKind::C3,
            SeriesKind::C4,
            SeriesKind::D1,
            SeriesKind::D2,
            SeriesKind::Kmean,
        ],
        None => vec![SeriesKind::D1, SeriesKind::D2],
    };
    let mut csv = String::from(CONSTANTS_HEADER);
    csv.push('\n');
    for kind in kinds {
        let c = series_constant_with(kind, cfg.a, cfg.series_terms, cfg.form)?;
        writeln!(
            csv,
            "{},{},{},{},{},{}",
            c.kind,
            c.a.map(|a: RealExponent| fmt_real(a.get())).unwrap_or_default(),
            c.form,
            c.n,
            fmt_real(c.value),
            fmt_real(c.tail_bound)
        )
        .expect("write to string");
    }
    Ok(RunOutput {
        csv,
        status: Status::Ok,
    })
}

fn tabulate(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let selector: FSpec = required(&cfg.f, "f", cfg)?.parse()?;
    let backend = cfg.backend.unwrap_or_else(|| selector.natural_backend());
    let n = cfg.table_limit.max(2);
    let table = selector.materialize(n, backend)?;
    let sums = table.prefix_sums();
    let mut csv = String::from(TABULATE_HEADER);
    csv.push('\n');
    for k in 1..=n {
        let cell = |v: Value| match v {
            Value::Real(r) => fmt_real(r),
            exact => exact.to_string(),
        };
        writeln!(csv, "{k},{},{}", cell(table.get(k)), cell(sums.get(k))).expect("write to string");
    }
    Ok(RunOutput {
        csv,
        status: Status::Ok,
    })
}
