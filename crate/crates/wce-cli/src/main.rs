//! `wce` - analyze, verify, and generate weighted conditional expectation
//! operator scenarios.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;
use wce_cli::generate::{generate_instance, GeneratorConfig, Regime};
use wce_cli::report::analyze;
use wce_cli::scenario::Scenario;
use wce_cli::suites::run_verify;
use wce_core::Config;

#[derive(Parser)]
#[command(
    name = "wce",
    about = "Weighted conditional expectation operators on finite measure spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone)]
struct AnalysisFlags {
    /// Norm sequences are sampled for n = 1..=horizon.
    #[arg(long, default_value_t = 64)]
    horizon: usize,
    /// Relative pivot tolerance for rank decisions.
    #[arg(long = "tol-rank", default_value_t = 1e-8)]
    tol_rank: f64,
    /// Chain reports cover powers 0..=k-max.
    #[arg(long = "k-max", default_value_t = 6)]
    k_max: usize,
}

impl AnalysisFlags {
    fn config(&self) -> Result<Config, String> {
        if self.horizon < 16 {
            return Err("[bad-flag] --horizon must be at least 16".into());
        }
        if self.k_max < 3 {
            return Err("[bad-flag] --k-max must be at least 3".into());
        }
        if !(self.tol_rank > 0.0 && self.tol_rank.is_finite()) {
            return Err("[bad-flag] --tol-rank must be a positive number".into());
        }
        Ok(Config {
            rank_tol: self.tol_rank,
            k_max: self.k_max,
            horizon: self.horizon,
            ..Config::default()
        })
    }
}

#[derive(Args, Clone)]
struct GeneratorFlags {
    /// Root seed of the deterministic instance stream.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Instance regime.
    #[arg(long, default_value = "free")]
    regime: Regime,
    /// Exponent p of the L^p space (1 <= p < infinity).
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Largest number of atoms.
    #[arg(long = "max-points", default_value_t = 12)]
    max_points: usize,
    /// Probability of an exact-zero weight entry.
    #[arg(long, default_value_t = 0.2)]
    sparsity: f64,
}

impl GeneratorFlags {
    fn config(&self) -> Result<GeneratorConfig, String> {
        if self.max_points < 1 {
            return Err("[bad-flag] --max-points must be at least 1".into());
        }
        if !(0.0..1.0).contains(&self.sparsity) {
            return Err("[bad-flag] --sparsity must lie in [0, 1)".into());
        }
        if !(self.p >= 1.0 && self.p.is_finite()) {
            return Err("[bad-flag] --p must be a finite number >= 1".into());
        }
        Ok(GeneratorConfig {
            seed: self.seed,
            max_points: self.max_points,
            regime: self.regime,
            sparsity: self.sparsity,
            p: self.p,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run every applicable analysis on a scenario file.
    Analyze {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        analysis: AnalysisFlags,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate instances and run the full theorem suites.
    Verify {
        #[command(flatten)]
        generator: GeneratorFlags,
        /// Number of instances.
        #[arg(long, default_value_t = 100)]
        instances: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        analysis: AnalysisFlags,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the closed-form weights of T^n for a scenario.
    Power {
        path: PathBuf,
        /// Power to compute (n >= 1).
        #[arg(short, long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a scenario file from the seeded generator.
    Generate {
        #[command(flatten)]
        generator: GeneratorFlags,
        /// Instance index within the seed's stream.
        #[arg(long, default_value_t = 0)]
        index: u64,
        /// Scenario name to embed.
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: String, out: Option<PathBuf>) -> Result<(), String> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(&path, text).map_err(|e| format!("[io] {e}")),
    }
}

fn run() -> Result<u8, String> {
    match Cli::parse().command {
        Command::Analyze {
            path,
            format,
            analysis,
            out,
        } => {
            let scenario = Scenario::load(&path).map_err(|e| e.to_string())?;
            let op = scenario.to_operator().map_err(|e| e.to_string())?;
            let report = analyze(&op, scenario.name.clone(), &analysis.config()?);
            let text = match format {
                Format::Json => report.to_json() + "\n",
                Format::Text => report.to_text(),
            };
            emit(text, out)?;
            Ok(if report.has_failures_or_discrepancies() {
                2
            } else {
                0
            })
        }
        Command::Verify {
            generator,
            instances,
            format,
            analysis,
            out,
        } => {
            if instances == 0 {
                return Err("[bad-flag] --instances must be at least 1".into());
            }
            let summary = run_verify(&generator.config()?, instances, &analysis.config()?);
            let text = match format {
                Format::Json => summary.to_json() + "\n",
                Format::Text => summary.to_text(),
            };
            emit(text, out)?;
            Ok(if summary.all_pass { 0 } else { 2 })
        }
        Command::Power {
            path,
            n,
            format,
            out,
        } => {
            if n == 0 {
                return Err("[bad-flag] --n must be at least 1".into());
            }
            let scenario = Scenario::load(&path).map_err(|e| e.to_string())?;
            let op = scenario.to_operator().map_err(|e| e.to_string())?;
            let power = op.power_closed_form(n);
            let text = match format {
                Format::Json => {
                    let pairs = |f: &wce_core::Fun| -> Vec<[f64; 2]> {
                        f.values().iter().map(|z| [z.re, z.im]).collect()
                    };
                    serde_json::to_string_pretty(&serde_json::json!({
                        "n": n,
                        "outer_weight": pairs(power.outer()),
                        "inner_weight": pairs(power.inner_weight()),
                        "euw_power": pairs(power.euw()),
                    }))
                    .expect("weights serialize")
                        + "\n"
                }
                Format::Text => {
                    let mut s = format!("T^{n} = M_g E M_u with\n");
                    s += "  g (outer weight):\n";
                    for z in power.outer().values() {
                        s += &format!("    {:+.12e} {:+.12e}i\n", z.re, z.im);
                    }
                    s += "  u (inner weight):\n";
                    for z in power.inner_weight().values() {
                        s += &format!("    {:+.12e} {:+.12e}i\n", z.re, z.im);
                    }
                    s
                }
            };
            emit(text, out)?;
            Ok(0)
        }
        Command::Generate {
            generator,
            index,
            name,
            out,
        } => {
            let mut scenario = generate_instance(&generator.config()?, index);
            if name.is_some() {
                scenario.name = name;
            }
            emit(scenario.to_json() + "\n", out)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
