use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;

use modsurf::curve::DEFAULT_J_TOLERANCE;
use modsurf::gamma::build_gamma_k_with_budget;
use modsurf::report::{analyze, curve_report, GammaKReport};
use modsurf::subgroup::{SubgroupInput, DEFAULT_COSET_BUDGET};
use modsurf::surface::extremal_model;
use modsurf::svg::fundamental_domain_svg;
use modsurf::Error;

#[derive(Parser)]
#[command(name = "modsurf", version, about = "Subgroups of PSL(2,Z) and their real elliptic modular surfaces")]
struct Cli {
    /// Maximum number of cosets during enumeration.
    #[arg(long, global = true, env = "MODSURF_COSET_BUDGET", default_value_t = DEFAULT_COSET_BUDGET)]
    budget: usize,

    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants and fiber lifts of a subgroup given in a JSON file.
    Analyze { file: PathBuf },
    /// The extremal model over Γ_k.
    GammaK {
        #[arg(long)]
        k: u32,
        /// Also write the fundamental domain as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Checks every claimed invariant of X_k for k in a range.
    Verify {
        #[arg(long)]
        from: u32,
        #[arg(long)]
        to: u32,
    },
    /// j-invariant and real classification of C/(Z + τZ).
    Curve {
        #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true)]
        tau: Vec<String>,
    },
}

/// Exit status classes.
enum Failure {
    Verification(anyhow::Error),
    Input(anyhow::Error),
    Budget(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Verification(_) => 1,
            Self::Input(_) => 2,
            Self::Budget(_) => 3,
        }
    }

    fn error(&self) -> &anyhow::Error {
        match self {
            Self::Verification(e) | Self::Input(e) | Self::Budget(e) => e,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::IndexBoundExceeded { .. } => Self::Budget(e.into()),
            Error::Inconsistent(_) | Error::InequalityViolated(_) | Error::NonIntegralChi(_) => {
                Self::Verification(e.into())
            }
            _ => Self::Input(e.into()),
        }
    }
}

fn emit<T: Serialize + std::fmt::Display>(value: &T, json: bool) -> Result<(), Failure> {
    let text = if json {
        let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::Input(e.into()))?;
        s.push('\n');
        s
    } else {
        value.to_string()
    };
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Input(e.into())),
        _ => Ok(()),
    }
}

fn parse_rational(s: &str) -> anyhow::Result<Rational64> {
    if let Ok(r) = s.parse::<Rational64>() {
        return Ok(r);
    }
    let x: f64 = s.parse().with_context(|| format!("not a number: {s:?}"))?;
    Rational64::approximate_float(x).with_context(|| format!("cannot represent {s} as a rational"))
}

fn parse_real(s: &str) -> anyhow::Result<f64> {
    if let Ok(r) = s.parse::<Rational64>() {
        return Ok(*r.numer() as f64 / *r.denom() as f64);
    }
    s.parse().with_context(|| format!("not a number: {s:?}"))
}

#[derive(Serialize)]
struct VerifyReport {
    from: u32,
    to: u32,
    ok: bool,
    models: Vec<GammaKReport>,
    failures: Vec<String>,
}

impl std::fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for m in &self.models {
            writeln!(
                f,
                "k={:>3}  mu={:>4}  chi_O={:>3}  h11={:>4}  h1={:>4}  h1_alg={:>4}  {}",
                m.k, m.mu, m.chi_o, m.h11, m.h1, m.h1_alg, m.type_tag
            )?;
        }
        for failure in &self.failures {
            writeln!(f, "FAIL {failure}")?;
        }
        writeln!(f, "{}", if self.ok { "all checks passed" } else { "verification failed" })
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze { file } => {
            let text = std::fs::read_to_string(&file)
                .with_context(|| format!("reading {}", file.display()))
                .map_err(Failure::Input)?;
            let input: SubgroupInput = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", file.display()))
                .map_err(Failure::Input)?;
            let rep = input.into_representation(cli.budget)?;
            emit(&analyze(&rep)?, cli.json)
        }
        Command::GammaK { k, svg } => {
            let group = build_gamma_k_with_budget(k, cli.budget)?;
            if let Some(path) = svg {
                std::fs::write(&path, fundamental_domain_svg(&group))
                    .with_context(|| format!("writing {}", path.display()))
                    .map_err(Failure::Input)?;
            }
            let report = GammaKReport::new(&extremal_model(group)?);
            emit(&report, cli.json)?;
            let failures = report.failures();
            if failures.is_empty() {
                Ok(())
            } else {
                Err(Failure::Verification(anyhow::anyhow!(failures.join("; "))))
            }
        }
        Command::Verify { from, to } => {
            if from < 2 || to < from {
                return Err(Failure::Input(anyhow::anyhow!(
                    "need 2 ≤ from ≤ to, got {from}..{to}"
                )));
            }
            let results: Vec<Result<GammaKReport, Error>> = (from..=to)
                .into_par_iter()
                .map(|k| {
                    let group = build_gamma_k_with_budget(k, cli.budget)?;
                    Ok(GammaKReport::new(&extremal_model(group)?))
                })
                .collect();
            let mut models = Vec::new();
            let mut failures = Vec::new();
            for (k, r) in (from..=to).zip(results) {
                match r {
                    Ok(report) => {
                        failures.extend(report.failures());
                        models.push(report);
                    }
                    Err(e @ Error::IndexBoundExceeded { .. }) => return Err(e.into()),
                    Err(e) => failures.push(format!("k={k}: {e}")),
                }
            }
            let report = VerifyReport {
                from,
                to,
                ok: failures.is_empty(),
                models,
                failures,
            };
            emit(&report, cli.json)?;
            if report.ok {
                Ok(())
            } else {
                Err(Failure::Verification(anyhow::anyhow!("{} check(s) failed", report.failures.len())))
            }
        }
        Command::Curve { tau } => {
            let re = parse_rational(&tau[0]).map_err(Failure::Input)?;
            let im = parse_real(&tau[1]).map_err(Failure::Input)?;
            emit(&curve_report(re, im, DEFAULT_J_TOLERANCE)?, cli.json)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error());
            ExitCode::from(f.code())
        }
    }
}
