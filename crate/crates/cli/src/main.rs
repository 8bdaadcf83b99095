//! `maxcurve`: point counts, Artin values, quotients and covering-degree feasibility.
//!
//! Exit codes: 0 success, 2 verification failure, 1 usage or budget error.

mod commands;
mod output;

use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};
use maxcurve_core::arith::{checked_pow, prime_power};
use maxcurve_core::curves::Family;

use output::Format;

/// Default for `--budget` when neither the flag nor `MAXCURVE_BUDGET` is set.
pub const DEFAULT_BUDGET: u64 = 1 << 20;

#[derive(Debug, Parser)]
#[command(name = "maxcurve", version, about = "Maximal curves covered by the Hermitian curve")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub args: Args,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Count rational points of a curve.
    Count,
    /// Count points and fail (exit 2) unless the curve is maximal.
    Maximality,
    /// Artin values of stabilizer elements or of a unitary matrix.
    Isigma,
    /// Quotient of the Hermitian curve by a subgroup of order d.
    Quotient,
    /// Ramification profiles compatible with a degree and a genus.
    Profile,
    /// Feasible degrees of a Galois covering of a maximal curve.
    Feasible,
    /// Check one of the main theorems.
    Theorem,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Args {
    /// Base parameter q (a prime power).
    #[arg(long, global = true)]
    pub q: Option<u64>,
    /// Extension parameter n (odd, >= 3 for ggk and xn).
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// Hermitian parameter Q; must equal q^n when both are given.
    #[arg(long = "Q", global = true)]
    pub big_q: Option<u64>,
    #[arg(long, global = true, value_parser = parse_family)]
    pub family: Option<Family>,
    /// Target genus, overriding the family genus.
    #[arg(long, global = true)]
    pub genus: Option<u64>,
    /// Degree or subgroup order.
    #[arg(long, global = true)]
    pub d: Option<u64>,
    /// Theorem id: 1.1, 1.2 or 1.3.
    #[arg(long, global = true)]
    pub id: Option<String>,
    /// Stabilizer element as JSON: {"a": [..], "b": [..], "c": [..]} (coefficient vectors).
    #[arg(long, global = true)]
    pub element: Option<String>,
    /// Element of PGU(3, Q) as a JSON 3x3 array of coefficient vectors.
    #[arg(long, global = true)]
    pub matrix: Option<String>,
    /// Only profiles without fixed-point-free elements.
    #[arg(long, global = true)]
    pub no_fixed_point_free: bool,
    /// Only profiles of groups fixing a point.
    #[arg(long, global = true)]
    pub in_stabilizer: bool,
    /// Only profiles passing the orbit-count test.
    #[arg(long, global = true)]
    pub orbit: bool,
    /// Cap on any enumeration (field or group elements, profiles, generator pairs).
    #[arg(long, global = true, env = "MAXCURVE_BUDGET", value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: Option<u64>,
    /// Worker threads for counting and enumeration.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..1025))]
    pub workers: Option<u64>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: maxcurve_core::Error| e.to_string())
}

impl Args {
    pub fn budget(&self) -> u64 {
        self.budget.unwrap_or(DEFAULT_BUDGET)
    }

    pub fn workers(&self) -> usize {
        self.workers
            .map(|w| w as usize)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }

    /// Hermitian parameter from `--Q`, or `q^n` (`n` defaults to 1).
    pub fn hermitian_q(&self) -> Result<u64> {
        match (self.big_q, self.q) {
            (Some(big_q), _) => Ok(big_q),
            (None, Some(q)) => Ok(checked_pow(q, self.n.unwrap_or(1))?),
            (None, None) => bail!("usage: --Q or --q is required"),
        }
    }

    pub fn require_q(&self) -> Result<u64> {
        self.q.ok_or_else(|| anyhow::anyhow!("usage: --q is required"))
    }

    pub fn require_n(&self) -> Result<u32> {
        self.n.ok_or_else(|| anyhow::anyhow!("usage: --n is required"))
    }

    pub fn require_d(&self) -> Result<u64> {
        self.d.ok_or_else(|| anyhow::anyhow!("usage: --d is required"))
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(q) = self.q {
            prime_power(q).map_err(|_| anyhow::anyhow!("usage: q = {q} is not a prime power"))?;
        }
        if let Some(big_q) = self.big_q {
            prime_power(big_q).map_err(|_| anyhow::anyhow!("usage: Q = {big_q} is not a prime power"))?;
        }
        if let (Some(big_q), Some(q)) = (self.big_q, self.q) {
            let n = self.n.unwrap_or(1);
            if checked_pow(q, n).ok() != Some(big_q) {
                bail!("usage: Q = {big_q} differs from q^n = {q}^{n}");
            }
        }
        if matches!(self.family, Some(Family::Ggk | Family::Xn)) {
            if let Some(n) = self.n {
                if n < 3 || n % 2 == 0 {
                    bail!("usage: n must be odd and >= 3 for this family, got {n}");
                }
            }
        }
        if self.d == Some(0) {
            bail!("usage: d must be positive");
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok((text, ok)) => {
            print!("{text}");
            ExitCode::from(if ok { 0 } else { 2 })
        }
        Err(e) => {
            eprintln!("{}", describe(&e));
            ExitCode::from(1)
        }
    }
}

fn describe(e: &anyhow::Error) -> String {
    match e.downcast_ref::<maxcurve_core::Error>() {
        Some(err @ maxcurve_core::Error::BudgetExceeded { .. }) => format!("budget exceeded: {err}"),
        Some(err) => format!("invalid parameters: {err}"),
        None => format!("error: {e:#}"),
    }
}

/// Output text and whether verification passed.
fn run(cli: &Cli) -> Result<(String, bool)> {
    let args = &cli.args;
    args.validate()?;
    rayon::ThreadPoolBuilder::new().num_threads(args.workers()).build_global()?;
    let (rendered, ok) = match cli.command {
        Command::Count => commands::count(args, false)?,
        Command::Maximality => commands::count(args, true)?,
        Command::Isigma => commands::isigma(args)?,
        Command::Quotient => commands::quotient(args)?,
        Command::Profile => commands::profile(args)?,
        Command::Feasible => commands::feasible(args)?,
        Command::Theorem => commands::theorem(args)?,
    };
    Ok((rendered.emit(args.format)?, ok))
}
