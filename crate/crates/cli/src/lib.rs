//! The `dgkit` command line: loads workspace files, runs a checker or a
//! construction and renders a report.

pub mod commands;
pub mod report;
pub mod shipped;
pub mod workspace;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dgkit::search::Budget;

pub use commands::CommandError;
pub use report::{Finding, Report, WitnessData};
pub use workspace::{Workspace, WorkspaceError};

/// Exit code for unreadable, malformed or inconsistent input.
pub const INPUT_ERROR: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "dgkit", version, about = "Exact checks and constructions for finite dg categories")]
pub struct Cli {
    /// Seed for randomized searches.
    #[arg(long, global = true, env = "DGKIT_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Budget override, repeatable: max_summands, shift_range, random_trials, height, exhaustive_cap.
    #[arg(long = "budget", global = true, value_name = "KEY=VALUE")]
    pub budget: Vec<String>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
    /// Write the entities a command constructs to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
}

#[derive(Debug, Args)]
pub struct Inputs {
    /// Workspace files.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check units, the Leibniz rule and associativity of categories, and functor axioms.
    Validate {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        category: Option<String>,
    },
    /// Cohomology of hom complexes.
    Cohomology {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        category: Option<String>,
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        to: Option<String>,
        /// Endomorphisms of one object.
        #[arg(long, conflicts_with_all = ["from", "to"])]
        at: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        deg: Option<i32>,
    },
    /// The homotopy category: dimensions of H^0 and its composition laws.
    H0 {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        category: Option<String>,
    },
    /// Tensor product of two categories.
    Tensor {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        name: Option<String>,
    },
    /// Opposite category.
    Op {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        category: Option<String>,
        #[arg(long)]
        name: Option<String>,
    },
    /// Whether a functor is a DK-equivalence.
    DkCheck {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        functor: Option<String>,
        /// Use the independent check through the graded homotopy category.
        #[arg(long)]
        graded: bool,
    },
    /// Whether every hom map of a functor is a quasi-isomorphism.
    EmbedCheck {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        functor: Option<String>,
    },
    /// Cone of a closed degree-0 morphism of twisted complexes.
    Cone {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        morphism: Option<String>,
        #[arg(long)]
        name: Option<String>,
    },
    /// Shift of a twisted complex.
    Shift {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        twisted: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
        by: i32,
        #[arg(long)]
        name: Option<String>,
    },
    /// The module of a twisted complex.
    Alpha {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        twisted: Option<String>,
        #[arg(long)]
        name: Option<String>,
    },
    /// Zero object, shifts and cones up to H^0-isomorphism.
    PretrCheck {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        category: Option<String>,
        /// Objects whose shifts and cones are tested; all when absent.
        #[arg(long)]
        probe: Vec<String>,
        /// Check the budgeted twisted-complex closure instead of the category itself.
        #[arg(long)]
        closure: bool,
    },
    /// TR1, TR2 and TR3 on the budgeted twisted complexes of a category.
    TrAxioms {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        category: Option<String>,
        #[arg(long)]
        probe: Vec<String>,
    },
    /// Module axioms, and optionally weak representability.
    ModuleValidate {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        module: Option<String>,
        #[arg(long)]
        representable: bool,
    },
    /// The module of a cell presentation.
    CellRealize {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        presentation: Option<String>,
        #[arg(long)]
        name: Option<String>,
    },
    /// Homotopy-retract certificates.
    RetractVerify {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        retract: Option<String>,
    },
    /// Morita certificates: a DK-embedding plus a retract certificate per target object.
    MoritaVerify {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        certificate: Option<String>,
    },
    /// Every check on every file of a corpus directory, against its expected.json.
    CorpusRun {
        #[arg(long, default_value = "corpus")]
        dir: PathBuf,
    },
}

/// What a run prints and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Cli {
    pub fn budget(&self) -> Result<Budget, CommandError> {
        let mut b = Budget::with_seed(self.seed);
        for kv in &self.budget {
            let (k, v) =
                kv.split_once('=').ok_or_else(|| CommandError::Usage(format!("budget {kv:?} is not KEY=VALUE")))?;
            b.set(k.trim(), v.trim()).map_err(CommandError::Usage)?;
        }
        Ok(b)
    }
}

/// Parses a command line and runs it.
pub fn run<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { INPUT_ERROR } else { 0 };
            let text = e.render().to_string();
            return if e.use_stderr() {
                RunOutput { code, stdout: String::new(), stderr: text }
            } else {
                RunOutput { code, stdout: text, stderr: String::new() }
            };
        }
    };
    run_cli(&cli)
}

pub fn run_cli(cli: &Cli) -> RunOutput {
    let started = std::time::Instant::now();
    let report = cli.budget().and_then(|b| commands::execute(&cli.command, &b));
    let report = match report {
        Ok(r) => r,
        Err(e) => return RunOutput { code: INPUT_ERROR, stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    let mut stderr = String::new();
    if let (Some(path), Some(out)) = (&cli.out, &report.output) {
        if let Err(e) = std::fs::write(path, dgkit::format::to_canonical_json(out)) {
            return RunOutput {
                code: INPUT_ERROR,
                stdout: String::new(),
                stderr: format!("error: {}: {e}\n", path.display()),
            };
        }
    } else if cli.out.is_some() {
        stderr.push_str("note: the command constructs nothing; --out ignored\n");
    }
    let stdout = match cli.format {
        OutputFormat::Json => report.to_json(),
        OutputFormat::Table => {
            stderr.push_str(&format!("time: {} ms\n", started.elapsed().as_millis()));
            report.to_table()
        }
    };
    RunOutput { code: report.verdict.exit_code(), stdout, stderr }
}
