use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_traits::ToPrimitive;

use super::{gen_instance, write_atomic, GeneratorKind, GeneratorSpec};
use crate::analysis::{
    approx_ratio, approx_ratio_sampled, deviation_gain, deviation_gain_sampled, estimate_moments, exact_distribution,
    DEFAULT_SUBSET_CAP,
};
use crate::error::Error;
use crate::graph::{parse_instance, serialize_instance, utilities, Instance};
use crate::mechanisms::{run, MechanismConfig, MechanismKind, DEFAULT_EPSILON};

/// Ratios above 2 by more than this fail an exact `approx` run.
const RATIO_TOLERANCE: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(
    name = "kex-sim",
    version,
    about = "Simulate mechanisms for the pairwise kidney exchange game"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate an instance and write it as KEX.
    Gen {
        #[arg(long, value_parser = parse_kind)]
        kind: GeneratorKind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 0.3)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a mechanism once and print the matching and utilities.
    Run {
        #[command(flatten)]
        mech: MechanismArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Per-agent utility mean and variance, as CSV.
    Stats {
        #[command(flatten)]
        mech: MechanismArgs,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Best hiding strategy for one agent, as CSV.
    Deviate {
        #[command(flatten)]
        mech: MechanismArgs,
        #[arg(long)]
        agent: usize,
        #[arg(long, default_value_t = DEFAULT_SUBSET_CAP)]
        cap: usize,
        /// Estimate expectations from this many trials instead of enumerating.
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare the mechanism's expected matching size to the optimum.
    Approx {
        #[command(flatten)]
        mech: MechanismArgs,
        #[command(flatten)]
        mode: ModeArgs,
    },
}

#[derive(Args, Debug)]
struct MechanismArgs {
    /// mix, modified, multilayer, det, or baseline:<agent>
    #[arg(long, value_parser = parse_mechanism)]
    mechanism: MechanismKind,
    #[arg(long)]
    instance: PathBuf,
    /// Multilayer depth.
    #[arg(long, conflicts_with = "epsilon")]
    k: Option<u32>,
    /// Variance slack used to derive the multilayer depth.
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Args, Debug)]
struct ModeArgs {
    /// Enumerate the mechanism's randomness exactly.
    #[arg(long, conflicts_with = "trials", required_unless_present = "trials")]
    exact: bool,
    /// Estimate from this many Monte Carlo trials.
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_kind(s: &str) -> Result<GeneratorKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mechanism(s: &str) -> Result<MechanismKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) => Failure::Violation(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read_instance(path: &Path) -> Result<Instance, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

impl MechanismArgs {
    fn load(&self, seed: u64) -> Result<(Instance, MechanismConfig), Failure> {
        let inst = read_instance(&self.instance)?;
        let mut config = MechanismConfig::new(self.mechanism)
            .with_seed(seed)
            .with_epsilon(self.epsilon.unwrap_or(DEFAULT_EPSILON));
        config.layers = self.k;
        config.validate()?;
        if let MechanismKind::Baseline { against } = self.mechanism {
            inst.check_agent(against)?;
        }
        Ok((inst, config))
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Gen {
            kind,
            n,
            m,
            p,
            seed,
            out: path,
        } => {
            let base = match kind {
                GeneratorKind::Figure1 => GeneratorSpec::figure1(),
                GeneratorKind::Example1 => GeneratorSpec::example1(0),
                GeneratorKind::Random => GeneratorSpec::random(0, 0, p, seed),
            };
            let spec = GeneratorSpec {
                n: n.unwrap_or(base.n),
                m: m.unwrap_or(base.m),
                p,
                seed,
                ..base
            };
            let inst = gen_instance(&spec)?;
            write_atomic(&path, serialize_instance(&inst).as_bytes())?;
        }
        Command::Run { mech, seed } => {
            let (inst, config) = mech.load(seed)?;
            let m = run(&inst, &config)?;
            m.validate(&inst).map_err(|e| Failure::Violation(e.to_string()))?;
            writeln!(out, "matching {m}")?;
            for (a, u) in utilities(&inst, &m).iter().enumerate() {
                writeln!(out, "agent {} utility {u}", a + 1)?;
            }
            writeln!(out, "welfare {}", m.welfare())?;
        }
        Command::Stats { mech, mode, out: path } => {
            let (inst, config) = mech.load(mode.seed)?;
            let mut csv = String::from("agent,mean,variance,se_mean,se_var,trials\n");
            match mode.trials {
                None => {
                    let d = exact_distribution(&inst, &config)?;
                    for a in 1..=inst.agent_count() {
                        let (mean, var) = (
                            d.mean(a).to_f64().unwrap_or(f64::NAN),
                            d.variance(a).to_f64().unwrap_or(f64::NAN),
                        );
                        writeln!(csv, "{a},{mean},{var},0,0,exact").unwrap();
                    }
                }
                Some(trials) => {
                    let report = estimate_moments(&inst, &config, trials, mode.seed)?;
                    for (a, s) in report.agents.iter().enumerate() {
                        writeln!(
                            csv,
                            "{},{},{},{},{},{}",
                            a + 1,
                            s.mean,
                            opt(s.variance),
                            opt(s.se_mean),
                            opt(s.se_var),
                            s.trials
                        )
                        .unwrap();
                    }
                }
            }
            write_atomic(&path, csv.as_bytes())?;
        }
        Command::Deviate {
            mech,
            agent,
            cap,
            trials,
            seed,
            out: path,
        } => {
            let (inst, config) = mech.load(seed)?;
            let report = match trials {
                None => deviation_gain(&inst, agent, &config, cap)?,
                Some(t) => deviation_gain_sampled(&inst, agent, &config, cap, t, seed)?,
            };
            let hidden: Vec<String> = report.hidden.iter().map(|v| v.to_string()).collect();
            let csv = format!(
                "agent,hidden_set,truthful_eu,deviating_eu,gain\n{},{},{},{},{}\n",
                report.agent,
                hidden.join(";"),
                report.truthful,
                report.deviating,
                report.gain
            );
            write_atomic(&path, csv.as_bytes())?;
        }
        Command::Approx { mech, mode } => {
            let (inst, config) = mech.load(mode.seed)?;
            let (report, limit) = match mode.trials {
                None => (approx_ratio(&inst, &config)?, 2.0 + RATIO_TOLERANCE),
                Some(t) => {
                    let r = approx_ratio_sampled(&inst, &config, t, mode.seed)?;
                    let limit = 2.0 + 3.0 * r.ratio_se.unwrap_or(0.0);
                    (r, limit)
                }
            };
            writeln!(out, "opt_edges {}", report.optimum_edges)?;
            writeln!(out, "expected_edges {}", report.expected_edges)?;
            writeln!(out, "ratio {}", report.ratio)?;
            if report.ratio > limit {
                return Err(Failure::Violation(format!("ratio {} exceeds {limit}", report.ratio)));
            }
        }
    }
    Ok(())
}

/// Runs the command line `args` (program name first). Returns the exit code:
/// 0 on success, 1 on usage or I/O errors, 2 when an invariant is violated.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Violation(msg)) => {
            let _ = writeln!(err, "violation: {msg}");
            2
        }
    }
}
