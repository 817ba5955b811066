//! Run configuration: command-line flags layered over an optional
//! `key = value` file.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use gcdsum_core::arith::Backend;
use gcdsum_core::meansquare::CoefficientForm;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "gcdsum", version, about = "Weighted gcd-sum identities, error terms and mean squares")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Check the exact identity for M_r^(s)(x; f) at every integer x.
    VerifyIdentity(Flags),
    /// Sample K = exact - main against its weighted-Delta representation.
    ErrorTerm(Flags),
    /// Integrate K^2 and compare with the predicted leading term.
    MeanSquare(Flags),
    /// Print truncated series constants with tail bounds.
    Constants(Flags),
    /// Tabulate an arithmetic function with its running sums.
    Tabulate(Flags),
}

impl CommandArgs {
    pub fn split(self) -> (Command, Flags) {
        match self {
            CommandArgs::VerifyIdentity(f) => (Command::VerifyIdentity, f),
            CommandArgs::ErrorTerm(f) => (Command::ErrorTerm, f),
            CommandArgs::MeanSquare(f) => (Command::MeanSquare, f),
            CommandArgs::Constants(f) => (Command::Constants, f),
            CommandArgs::Tabulate(f) => (Command::Tabulate, f),
        }
    }
}

/// Every flag is optional so that a config file can supply it.
#[derive(Debug, Default, Clone, Args)]
pub struct Flags {
    /// key = value file; flags given on the command line take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long)]
    pub s: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// f selector, e.g. phi, psi_2, sigma_-0.3, tau*id_2
    #[arg(long)]
    pub f: Option<String>,
    /// theorem selector, e.g. Th1, Th6(tau), Cor-phi_s, Th3, Delta_a
    #[arg(long)]
    pub theorem: Option<String>,
    #[arg(long)]
    pub x_min: Option<f64>,
    #[arg(long)]
    pub x_max: Option<f64>,
    /// comma-separated T values
    #[arg(long)]
    pub t_list: Option<String>,
    #[arg(long)]
    pub table_limit: Option<usize>,
    /// CSV destination; stdout when absent
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// extra uniformly random abscissas drawn from the seed
    #[arg(long)]
    pub samples: Option<usize>,
    /// log-spaced grid points
    #[arg(long)]
    pub points: Option<usize>,
    /// half-width of the integer windows
    #[arg(long)]
    pub window: Option<u32>,
    #[arg(long)]
    pub series_terms: Option<usize>,
    /// displayed | symmetric
    #[arg(long)]
    pub form: Option<String>,
    /// comma-separated series kinds for `constants`
    #[arg(long)]
    pub kinds: Option<String>,
    /// exact | real
    #[arg(long)]
    pub backend: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    VerifyIdentity,
    ErrorTerm,
    MeanSquare,
    Constants,
    Tabulate,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::VerifyIdentity => "verify-identity",
            Command::ErrorTerm => "error-term",
            Command::MeanSquare => "mean-square",
            Command::Constants => "constants",
            Command::Tabulate => "tabulate",
        })
    }
}

/// A fully resolved run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub r: u32,
    pub s: u32,
    pub a: Option<f64>,
    pub f: Option<String>,
    pub theorem: Option<String>,
    pub x_min: f64,
    pub x_max: f64,
    pub t_list: Vec<f64>,
    pub table_limit: usize,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub samples: usize,
    pub points: usize,
    pub window: u32,
    pub series_terms: usize,
    pub form: CoefficientForm,
    pub kinds: Option<String>,
    pub backend: Option<Backend>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            r: 1,
            s: 1,
            a: None,
            f: None,
            theorem: None,
            x_min: 10.0,
            x_max: 100.0,
            t_list: vec![1e3, 1e4],
            table_limit: 1000,
            output: None,
            seed: 0,
            samples: 0,
            points: 200,
            window: 10,
            series_terms: 100_000,
            form: CoefficientForm::Displayed,
            kinds: None,
            backend: None,
        }
    }

    /// Defaults, then the config file named by `--config`, then flags.
    pub fn resolve(command: Command, flags: &Flags) -> Result<Self, CliError> {
        let mut cfg = RunConfig::new(command);
        if let Some(path) = &flags.config {
            for (k, v) in read_config_file(path)? {
                cfg.set(&k, &v)?;
            }
        }
        cfg.apply_flags(flags)?;
        Ok(cfg)
    }

    fn apply_flags(&mut self, f: &Flags) -> Result<(), CliError> {
        if let Some(v) = f.r {
            self.r = v;
        }
        if let Some(v) = f.s {
            self.s = v;
        }
        if f.a.is_some() {
            self.a = f.a;
        }
        if f.f.is_some() {
            self.f = f.f.clone();
        }
        if f.theorem.is_some() {
            self.theorem = f.theorem.clone();
        }
        if let Some(v) = f.x_min {
            self.x_min = v;
        }
        if let Some(v) = f.x_max {
            self.x_max = v;
        }
        if let Some(v) = &f.t_list {
            self.t_list = parse_list(v)?;
        }
        if let Some(v) = f.table_limit {
            self.table_limit = v;
        }
        if f.output.is_some() {
            self.output = f.output.clone();
        }
        if let Some(v) = f.seed {
            self.seed = v;
        }
        if let Some(v) = f.samples {
            self.samples = v;
        }
        if let Some(v) = f.points {
            self.points = v;
        }
        if let Some(v) = f.window {
            self.window = v;
        }
        if let Some(v) = f.series_terms {
            self.series_terms = v;
        }
        if let Some(v) = &f.form {
            self.form = v.parse()?;
        }
        if f.kinds.is_some() {
            self.kinds = f.kinds.clone();
        }
        if let Some(v) = &f.backend {
            self.backend = Some(v.parse()?);
        }
        Ok(())
    }

    /// Set one field from its config-file spelling (`x_max` or `x-max`).
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let key = key.trim().replace('-', "_");
        let v = value.trim();
        match key.as_str() {
            "r" => self.r = num(&key, v)?,
            "s" => self.s = num(&key, v)?,
            "a" => self.a = Some(num(&key, v)?),
            "f" => self.f = Some(v.to_string()),
            "theorem" => self.theorem = Some(v.to_string()),
            "x_min" => self.x_min = num(&key, v)?,
            "x_max" => self.x_max = num(&key, v)?,
            "t_list" => self.t_list = parse_list(v)?,
            "table_limit" => self.table_limit = num(&key, v)?,
            "output" => self.output = Some(PathBuf::from(v)),
            "seed" => self.seed = num(&key, v)?,
            "samples" => self.samples = num(&key, v)?,
            "points" => self.points = num(&key, v)?,
            "window" => self.window = num(&key, v)?,
            "series_terms" => self.series_terms = num(&key, v)?,
            "form" => self.form = v.parse()?,
            "kinds" => self.kinds = Some(v.to_string()),
            "backend" => self.backend = Some(v.parse()?),
            _ => return Err(CliError::Config(format!("unknown config key `{key}`"))),
        }
        Ok(())
    }
}

fn num<T: FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse()
        .map_err(|_| CliError::Config(format!("cannot parse `{v}` for `{key}`")))
}

/// Comma-separated reals; accepts `1e3` and `10^3`.
pub fn parse_list(v: &str) -> Result<Vec<f64>, CliError> {
    v.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse_real(t.trim()))
        .collect()
}

fn parse_real(t: &str) -> Result<f64, CliError> {
    if let Some((b, e)) = t.split_once('^') {
        let b: f64 = num("list", b)?;
        let e: f64 = num("list", e)?;
        return Ok(b.powf(e));
    }
    num("list", t)
}

/// `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", i + 1)))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "# sweep\nr = 3\na = -0.2\nx-max = 500\nt_list = 10^3, 1e4\n").unwrap();
        let flags = Flags {
            config: Some(path),
            r: Some(2),
            ..Flags::default()
        };
        let cfg = RunConfig::resolve(Command::ErrorTerm, &flags).unwrap();
        assert_eq!(cfg.r, 2);
        assert_eq!(cfg.a, Some(-0.2));
        assert_eq!(cfg.x_max, 500.0);
        assert_eq!(cfg.t_list, vec![1000.0, 10000.0]);
    }

    #[test]
    fn bad_lines_are_config_errors() {
        assert!(parse_config("r 3").is_err());
        let mut cfg = RunConfig::new(Command::Tabulate);
        assert!(cfg.set("radius", "3").is_err());
        assert!(cfg.set("r", "three").is_err());
    }
}
