//! The `rmt` command: file formats, reports and subcommands.
//!
//! Every subcommand prints one JSON [`Report`] on standard output. Exit
//! statuses are listed in [`exit`].

mod commands;
pub mod format;
mod report;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

pub use commands::{
    cmd_algebra, cmd_check, cmd_gen, cmd_run, cmd_verify, AlgebraOp, Model, Outcome, Suite,
    VerifyOptions,
};
pub use report::{Report, Timing};

use crate::cuts::DEFAULT_SIZE_LIMIT;
use crate::engine::{AdversaryFamily, GeneratorSpec, StrategyKind, StrategySpace, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::protocol::MessageValue;
use crate::topology::{NodeId, NodeSet};

/// Process exit statuses.
pub mod exit {
    /// Success; for `run`, the receiver delivered the sender's value.
    pub const OK: i32 = 0;
    /// Bad input, I/O failure or any other error.
    pub const ERROR: i32 = 1;
    /// Command-line usage error.
    pub const USAGE: i32 = 2;
    /// `run`: the receiver never decided.
    pub const UNDECIDED: i32 = 10;
    /// `run`: the receiver decided a wrong value.
    pub const UNSAFE: i32 = 11;
    /// `run`: corrupted set outside the structure, or containing an
    /// endpoint, without `--allow-inadmissible`.
    pub const INADMISSIBLE: i32 = 12;
    /// `verify`: at least one instance failed.
    pub const VERIFY_FAILED: i32 = 13;
}

/// Flags accepted by every subcommand.
#[derive(Clone, Debug, PartialEq, Eq, Args)]
pub struct Options {
    /// Largest instance (in nodes) the exhaustive cut searches accept.
    #[arg(long, global = true, default_value_t = DEFAULT_SIZE_LIMIT)]
    pub size_limit: usize,
    /// Seed for instance generation.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Run corrupted sets outside the structure, or containing an endpoint.
    #[arg(long, global = true)]
    pub allow_inadmissible: bool,
    /// Round cap for runs and searches (default: number of nodes).
    #[arg(long, global = true)]
    pub horizon: Option<usize>,
    /// Values the adversary may send, comma separated.
    #[arg(long, global = true, value_delimiter = ',', default_value = "0,1")]
    pub alphabet: Vec<MessageValue>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            size_limit: DEFAULT_SIZE_LIMIT,
            seed: 0,
            allow_inadmissible: false,
            horizon: None,
            alphabet: vec![MessageValue(0), MessageValue(1)],
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "rmt", version, about = "Reliable message transmission toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub options: Options,
    #[command(subcommand)]
    pub command: Command,
}

/// Generator parameters; any flag given overrides the spec file.
#[derive(Clone, Debug, Default, PartialEq, Args)]
pub struct GenArgs {
    /// JSON generator spec.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub min_nodes: Option<usize>,
    #[arg(long)]
    pub max_nodes: Option<usize>,
    #[arg(long)]
    pub edge_probability: Option<f64>,
    /// Use the threshold family with this `t` instead of random antichains.
    #[arg(long, conflicts_with_all = ["max_sets", "max_size"])]
    pub threshold: Option<usize>,
    #[arg(long)]
    pub max_sets: Option<usize>,
    #[arg(long)]
    pub max_size: Option<usize>,
}

impl GenArgs {
    pub fn resolve(&self) -> Result<GeneratorSpec> {
        let mut spec = match &self.spec {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                serde_json::from_str(&text).map_err(|e| {
                    Error::Parse(format!(
                        "{}:{}:{}: {e}",
                        path.display(),
                        e.line(),
                        e.column()
                    ))
                })?
            }
            None => GeneratorSpec::default(),
        };
        if let Some(v) = self.count {
            spec.count = v;
        }
        if let Some(v) = self.min_nodes {
            spec.min_nodes = v;
        }
        if let Some(v) = self.max_nodes {
            spec.max_nodes = v;
        }
        if let Some(v) = self.edge_probability {
            spec.edge_probability = v;
        }
        if let Some(t) = self.threshold {
            spec.adversary = AdversaryFamily::Threshold { t };
        } else if self.max_sets.is_some() || self.max_size.is_some() {
            let (mut sets, mut size) = match spec.adversary {
                AdversaryFamily::RandomAntichain { max_sets, max_size } => (max_sets, max_size),
                AdversaryFamily::Threshold { .. } => (3, 2),
            };
            sets = self.max_sets.unwrap_or(sets);
            size = self.max_size.unwrap_or(size);
            spec.adversary = AdversaryFamily::RandomAntichain {
                max_sets: sets,
                max_size: size,
            };
        }
        Ok(spec)
    }
}

fn parse_set(s: &str) -> std::result::Result<NodeSet, String> {
    Ok(s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(NodeId::from)
        .collect())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search an instance for a Z-pp cut or an RMT-cut.
    Check {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "zpp")]
        model: Model,
    },
    /// Run Z-CPA once against a named strategy.
    Run {
        instance: PathBuf,
        #[arg(long, default_value = "0")]
        value: MessageValue,
        /// silent | constant_lie:V | equivocate:NODE=V,... | delayed_lie:ROUND:V
        #[arg(long, default_value = "silent")]
        strategy: StrategyKind,
        /// Corrupted nodes, comma separated.
        #[arg(long, default_value = "", value_parser = parse_set)]
        corrupted: NodeSet,
    },
    /// Check cut predictions against exhaustive search on a suite.
    Verify {
        /// Use the built-in path, two-path and three-path instances.
        #[arg(long, conflicts_with = "spec")]
        named: bool,
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long, default_value = "0")]
        value: MessageValue,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Restrict the adversary to one fixed choice per edge.
        #[arg(long = "static")]
        static_space: bool,
        /// Worker threads (0: one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Directory for reproducer files of failing instances.
        #[arg(long, default_value = "rmt-failures")]
        dump_dir: PathBuf,
    },
    /// Adversary-structure algebra on structure files.
    Algebra {
        #[command(subcommand)]
        op: AlgebraCommand,
        /// Also write a structure result to this file.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Generate a seeded instance suite.
    Gen {
        #[command(flatten)]
        gen: GenArgs,
        /// Write instance files here instead of embedding them.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum AlgebraCommand {
    Join {
        left: PathBuf,
        right: PathBuf,
    },
    Geq {
        left: PathBuf,
        right: PathBuf,
    },
    Restrict {
        structure: PathBuf,
        #[arg(long, value_parser = parse_set)]
        set: NodeSet,
    },
    Member {
        structure: PathBuf,
        #[arg(long, value_parser = parse_set, default_value = "")]
        set: NodeSet,
    },
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let opts = &cli.options;
    match &cli.command {
        Command::Check { instance, model } => cmd_check(instance, *model, opts),
        Command::Run {
            instance,
            value,
            strategy,
            corrupted,
        } => cmd_run(instance, *value, strategy, corrupted, opts),
        Command::Verify {
            named,
            gen,
            value,
            budget,
            static_space,
            jobs,
            dump_dir,
        } => {
            let suite = if *named {
                Suite::Named
            } else {
                Suite::Generated(gen.resolve()?)
            };
            let vopts = VerifyOptions {
                value: *value,
                budget: *budget,
                space: if *static_space {
                    StrategySpace::Static
                } else {
                    StrategySpace::Adaptive
                },
                jobs: *jobs,
                dump_dir: dump_dir.clone(),
            };
            cmd_verify(&suite, &vopts, opts)
        }
        Command::Algebra { op, out } => {
            let op = match op {
                AlgebraCommand::Join { left, right } => {
                    AlgebraOp::Join(left.clone(), right.clone())
                }
                AlgebraCommand::Geq { left, right } => AlgebraOp::Geq(left.clone(), right.clone()),
                AlgebraCommand::Restrict { structure, set } => {
                    AlgebraOp::Restrict(structure.clone(), set.clone())
                }
                AlgebraCommand::Member { structure, set } => {
                    AlgebraOp::Member(structure.clone(), set.clone())
                }
            };
            cmd_algebra(&op, out.as_deref())
        }
        Command::Gen { gen, out_dir } => cmd_gen(&gen.resolve()?, out_dir.as_deref(), opts),
    }
}

fn error_status(e: &Error) -> i32 {
    match e {
        Error::Inadmissible(_) | Error::NonStandard => exit::INADMISSIBLE,
        _ => exit::ERROR,
    }
}

/// Parses `args` (program name first) and runs the command. On error the
/// message is returned instead of a report.
pub fn execute<I, T>(args: I) -> std::result::Result<Outcome, (i32, String)>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(&args).map_err(|e| {
        let status = if e.use_stderr() {
            exit::USAGE
        } else {
            exit::OK
        };
        (status, e.render().to_string())
    })?;
    let start = Instant::now();
    let mut outcome = dispatch(&cli).map_err(|e| (error_status(&e), format!("error: {e}\n")))?;
    outcome.report.command = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    outcome.report.timing.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(outcome)
}

/// Entry point of the `rmt` binary; returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match execute(args) {
        Ok(outcome) => {
            print!("{}", outcome.report.to_json());
            outcome.status
        }
        Err((status, message)) => {
            if status == exit::OK {
                print!("{message}");
            } else {
                eprint!("{message}");
            }
            status
        }
    }
}
