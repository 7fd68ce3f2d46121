//! Argument parsing and dispatch.
//!
//! Exit status: 0 when every check in the emitted document passed, 1 when
//! some check failed, 2 for usage, input and IO errors. A JSON document is
//! written in every case (an `error` document for status 2).

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::{self, Outcome, MAX_STAGES, PAD};
use crate::docs::{self, EngineInput};
use crate::WorkbenchError;

#[derive(Debug, Parser)]
#[command(
    name = "varietas",
    version,
    about = "Projection-algebra varieties and free-family workbench"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the document here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlanSource {
    /// Number of stages of the default plan.
    #[arg(long, default_value_t = 20, value_parser = stage_count)]
    pub stages: usize,
    /// Read the plan from a file written by `varietas plan` instead.
    #[arg(long, alias = "from", conflicts_with = "stages")]
    pub plan: Option<PathBuf>,
}

fn stage_count(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n > MAX_STAGES {
        return Err(format!("at most {MAX_STAGES} stages are supported"));
    }
    Ok(n)
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit a stage plan (or re-emit one read with --plan).
    Plan {
        #[command(flatten)]
        source: PlanSource,
        #[command(flatten)]
        output: Output,
    },
    /// Build a collapse model (--m) or the generic model (--generic) and verify it.
    Model {
        #[command(flatten)]
        source: PlanSource,
        /// Identify c(0,0) with d(M).
        #[arg(long, required_unless_present = "generic", conflicts_with = "generic")]
        m: Option<u32>,
        #[arg(long)]
        generic: bool,
        #[arg(long, default_value_t = PAD)]
        pad: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Finite witness report: free factors for small J, obstructions for m ≤ --m.
    #[command(name = "cp1-report")]
    Cp1Report {
        #[command(flatten)]
        source: PlanSource,
        /// Largest collapse model in the family.
        #[arg(long, default_value_t = 5)]
        m: u32,
        #[arg(long, default_value_t = 2)]
        j_max: usize,
        #[arg(long, default_value_t = PAD)]
        pad: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Subalgebra generated by tuples in a product of models.
    Closure {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1 << 16)]
        limit: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Free-factor search for H inside the subalgebra generated by L.
    FreeFactor {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1 << 16)]
        limit: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Subalgebra membership, decided by every available procedure.
    Membership {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Freeness of a set family, with a transversal or a Hall violator.
    Transversal {
        #[arg(long)]
        input: PathBuf,
        /// Also decide almost freeness.
        #[arg(long)]
        almost_free: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Validate a tree system or a based family.
    TreeValidate {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Run the seeded property and oracle suites.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[command(flatten)]
        output: Output,
    },
}

impl Command {
    fn output(&self) -> &Output {
        match self {
            Command::Plan { output, .. }
            | Command::Model { output, .. }
            | Command::Cp1Report { output, .. }
            | Command::Closure { output, .. }
            | Command::FreeFactor { output, .. }
            | Command::Membership { output, .. }
            | Command::Transversal { output, .. }
            | Command::TreeValidate { output, .. }
            | Command::Selftest { output, .. } => output,
        }
    }
}

fn plan_of(source: &PlanSource) -> Result<varietas_core::StagePlan, WorkbenchError> {
    commands::load_plan(source.plan.as_deref(), source.stages)
}

fn engine_input(path: &Path) -> Result<EngineInput, WorkbenchError> {
    docs::read_json(path)
}

/// Runs a parsed command and returns its documented outcome.
pub fn execute(command: &Command) -> Result<Outcome, WorkbenchError> {
    match command {
        Command::Plan { source, .. } => Ok(commands::cmd_plan(&plan_of(source)?)),
        Command::Model { source, m, pad, .. } => commands::cmd_model(&plan_of(source)?, *m, *pad),
        Command::Cp1Report {
            source,
            m,
            j_max,
            pad,
            ..
        } => commands::cmd_cp1_report(&plan_of(source)?, *m, *j_max, *pad),
        Command::Closure { input, limit, .. } => commands::cmd_closure(&engine_input(input)?, *limit),
        Command::FreeFactor { input, limit, .. } => commands::cmd_free_factor(&engine_input(input)?, *limit),
        Command::Membership { input, .. } => commands::cmd_membership(&engine_input(input)?),
        Command::Transversal {
            input, almost_free, ..
        } => Ok(commands::cmd_transversal(&docs::read_json(input)?, *almost_free)),
        Command::TreeValidate { input, .. } => {
            commands::cmd_tree_validate(&docs::read_text(input)?, &input.display().to_string())
        }
        Command::Selftest { seed, cases, .. } => Ok(commands::cmd_selftest(*seed, *cases)),
    }
}

fn emit(output: &Output, body: &str) -> Result<(), WorkbenchError> {
    match &output.out {
        Some(path) => std::fs::write(path, body).map_err(|source| WorkbenchError::Write {
            path: path.clone(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| WorkbenchError::Write {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

/// Executes and writes the result; returns the exit status.
pub fn run(cli: &Cli) -> u8 {
    let output = cli.command.output();
    let (body, status) = match execute(&cli.command) {
        Ok(outcome) => {
            let body = match output.format {
                Format::Json => docs::render(&outcome.document),
                Format::Text => outcome.text,
            };
            (body, if outcome.ok { 0 } else { 1 })
        }
        Err(error) => {
            log::error!("{error}");
            let body = match output.format {
                Format::Json => docs::render(&docs::error_document(&error)),
                Format::Text => match error.hint() {
                    Some(hint) => format!("error: {error}\nhint: {hint}\n"),
                    None => format!("error: {error}\n"),
                },
            };
            (body, 2)
        }
    };
    match emit(output, &body) {
        Ok(()) => status,
        Err(error) => {
            eprintln!("error: {error}");
            2
        }
    }
}
