//! Command-line front end. Each subcommand becomes a [`tasks::Task`], whose
//! run is wrapped in a [`bundle::CertificateBundle`] that `verify` can replay.
//!
//! Exit codes: 0 when every verdict passes, 1 on a failed verdict or a
//! bundle that does not replay, 2 on usage or precondition errors.

pub mod bundle;
pub mod config;
pub mod tasks;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use bundle::{verify, CertificateBundle};
use config::Config;
use tasks::{LegendreSource, Task};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] cyclounits::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bundle schema: {0}")]
    Schema(String),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "cyclounits", version, about = "Certified computations with cyclotomic units")]
pub struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the certificate bundle to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub emit: Emit,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the nine relations F - G = k H.
    Identities,
    /// Enumerate relations among super-cyclotomic polynomials.
    Search {
        #[arg(long)]
        max_degree: Option<u64>,
        #[arg(long)]
        k_max: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, default_value_t = u32::MAX)]
        max_factors: u32,
        /// Resumable JSON-lines checkpoint.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Stream every relation found to this JSON-lines file.
        #[arg(long)]
        relations: Option<PathBuf>,
    },
    /// Solution of eps + delta = k from the univariate relations.
    Sunit {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        level: Option<u32>,
    },
    /// Unit solution E + F = 1 at (zeta^i, zeta^j).
    UnitEq {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        i: i64,
        #[arg(long)]
        j: i64,
        #[arg(long)]
        level: Option<u32>,
    },
    /// Solution in the Z_5-extension, k in {1, 2, 4}.
    Q5 {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        level: Option<u32>,
    },
    /// Solution in the Z_7-extension.
    Q7 {
        #[arg(long)]
        level: Option<u32>,
    },
    /// Legendre curves E_n, E_m at eps_n, eps_m.
    Legendre {
        /// `q5`, or `identity` with `--ell`.
        #[arg(long, default_value = "q5")]
        source: String,
        #[arg(long)]
        ell: Option<u64>,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
    },
    /// Hyperelliptic model D_n.
    Curve {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        genus: u64,
        #[arg(long)]
        level: u32,
        /// Factors of X(X-1)(X+1) to adjoin, comma separated.
        #[arg(long, value_delimiter = ',')]
        h: Vec<String>,
    },
    /// Cross-ratio certificate that D_n and D_m are not isomorphic.
    Noniso {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        genus: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        /// Also run the full root-permutation search (degree <= 6).
        #[arg(long)]
        oracle: bool,
    },
    /// Parity obstruction to isogenies between the Jacobians of D_n and D_m.
    Obstruction {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
    },
    /// Elementary number-theoretic scans.
    #[command(subcommand)]
    Scan(ScanCommand),
    /// Replay a certificate bundle.
    Verify { bundle: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum ScanCommand {
    SafePrimes {
        #[arg(long, default_value_t = 509)]
        max: u64,
    },
    CountLemma {
        #[arg(long, default_value_t = 11)]
        min: u64,
        #[arg(long, default_value_t = 317)]
        max: u64,
    },
    Inert {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',')]
        ells: Vec<u64>,
    },
    Totient {
        #[arg(long, default_value_t = 31)]
        lo: u64,
        #[arg(long, default_value_t = 10000)]
        hi: u64,
    },
    Module {
        #[arg(long, default_value_t = 13)]
        max: u64,
    },
}

fn level_or(cfg: &Config, ell: u64, given: Option<u32>, fallback: u32) -> u32 {
    given.or_else(|| cfg.level_for(ell)).unwrap_or(fallback)
}

fn build_task(cmd: &Command, cfg: &Config) -> Result<Task, CliError> {
    Ok(match cmd {
        Command::Identities => Task::Identities,
        Command::Search {
            max_degree,
            k_max,
            workers,
            max_factors,
            ..
        } => Task::Search {
            max_degree: max_degree.unwrap_or(cfg.max_degree),
            k_max: k_max.unwrap_or(cfg.k_max),
            workers: workers.unwrap_or(cfg.workers),
            max_factors: *max_factors,
        },
        Command::Sunit { ell, k, level } => {
            let (base, _) = cyclounits::sunit::identity_route(*ell, *k)?;
            let min = cyclounits::sunit::identity_min_level(*ell, base)?;
            Task::Sunit {
                ell: *ell,
                k: *k,
                level: level.unwrap_or(min),
            }
        }
        Command::UnitEq { ell, i, j, level } => Task::UnitEq {
            ell: *ell,
            i: *i,
            j: *j,
            level: level_or(cfg, *ell, *level, 2),
        },
        Command::Q5 { k, level } => Task::Q5 {
            k: *k,
            level: level_or(cfg, 5, *level, 2),
        },
        Command::Q7 { level } => Task::Q7 {
            level: level_or(cfg, 7, *level, 2),
        },
        Command::Legendre { source, ell, n, m } => {
            let source = match (source.as_str(), ell) {
                ("q5", _) => LegendreSource::Q5,
                ("identity", Some(ell)) => LegendreSource::Identity { ell: *ell },
                ("identity", None) => {
                    return Err(CliError::Usage("--source identity needs --ell".into()))
                }
                (other, _) => return Err(CliError::Usage(format!("unknown source {other:?}"))),
            };
            Task::Legendre {
                source,
                n: *n,
                m: *m,
            }
        }
        Command::Curve {
            ell,
            genus,
            level,
            h,
        } => Task::Curve {
            ell: *ell,
            genus: *genus,
            level: *level,
            h: h.iter().map(|s| s.parse()).collect::<Result<_, _>>()?,
        },
        Command::Noniso {
            ell,
            genus,
            n,
            m,
            oracle,
        } => Task::Noniso {
            ell: *ell,
            genus: *genus,
            n: *n,
            m: *m,
            oracle: *oracle,
        },
        Command::Obstruction { ell, n, m } => Task::Obstruction {
            ell: *ell,
            n: *n,
            m: *m,
        },
        Command::Scan(s) => match s {
            ScanCommand::SafePrimes { max } => Task::ScanSafePrimes { max: *max },
            ScanCommand::CountLemma { min, max } => Task::ScanCountLemma {
                min: *min,
                max: *max,
            },
            ScanCommand::Inert { p, ells } => Task::ScanInert {
                p: *p,
                ells: ells.clone(),
            },
            ScanCommand::Totient { lo, hi } => Task::ScanTotient { lo: *lo, hi: *hi },
            ScanCommand::Module { max } => Task::ScanModule { max: *max },
        },
        Command::Verify { .. } => unreachable!("handled before task construction"),
    })
}

/// Reject solutions whose words exceed the configured exponent mass.
fn mass_guard(b: &CertificateBundle, limit: u128) -> Result<(), CliError> {
    let Some(sol) = b.results.get("solution") else {
        return Ok(());
    };
    for key in ["eps", "delta"] {
        let word: cyclounits::unitlattice::UnitWord = serde_json::from_value(sol[key].clone())?;
        if word.mass() > limit {
            return Err(cyclounits::Error::MassGuard {
                mass: word.mass(),
                limit,
            }
            .into());
        }
    }
    Ok(())
}

fn write_bundle(b: &CertificateBundle, path: &Path) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, serde_json::to_string_pretty(b)?)?;
    Ok(())
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Command::Verify { bundle } = &cli.command {
        let text = std::fs::read_to_string(bundle)?;
        let b = CertificateBundle::from_json(&text)?;
        let report = match verify(&b) {
            Ok(r) => r,
            Err(e) => {
                println!("{}: replay failed: {e}", b.command);
                return Ok(EXIT_FAIL);
            }
        };
        match cli.emit {
            Emit::Json => println!("{}", serde_json::to_string_pretty(&report)?),
            Emit::Text => {
                println!("{}: math {}", b.command, if report.math_ok { "ok" } else { "FAILED" });
                if !report.metadata_ok {
                    println!("warning: metadata mismatch");
                }
                for m in &report.mismatches {
                    println!("  {m}");
                }
            }
        }
        return Ok(if report.math_ok { EXIT_OK } else { EXIT_FAIL });
    }
    let task = build_task(&cli.command, &cfg)?;
    let (checkpoint, relations) = match &cli.command {
        Command::Search {
            checkpoint,
            relations,
            ..
        } => (checkpoint.as_deref(), relations.as_deref()),
        _ => (None, None),
    };
    let b = CertificateBundle::run_with(task, checkpoint, relations)?;
    mass_guard(&b, cfg.mass_limit)?;
    let out = cli.out.clone().or_else(|| {
        cfg.output_dir
            .as_ref()
            .map(|d| d.join(format!("{}.json", b.command.replace(' ', "-"))))
    });
    if let Some(path) = &out {
        write_bundle(&b, path)?;
    }
    match cli.emit {
        Emit::Json => println!("{}", serde_json::to_string_pretty(&b)?),
        Emit::Text => {
            println!(
                "{}: {} ({} ms)\n  {}",
                b.command,
                if b.verdict { "pass" } else { "FAIL" },
                b.elapsed_ms,
                b.summary
            );
        }
    }
    Ok(if b.verdict { EXIT_OK } else { EXIT_FAIL })
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
