mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gradedlie::scalars::FieldSpec;

use report::{CliError, Report};

#[derive(Parser, Debug)]
#[command(name = "gradedlie", version, about = "Exact computations with finitely presented N-graded Lie algebras")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Config {
    /// Ground field, `Q` or `Fp:<prime>`; overrides the field named in input files.
    #[arg(long, global = true)]
    pub field: Option<FieldSpec>,
    /// Weight truncation N.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_degree: Option<u32>,
    /// Homological truncation I.
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    pub hom_bound: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for randomized suites; recorded in every report.
    #[arg(long, global = true, default_value_t = gradedlie::selftest::DEFAULT_SEED)]
    pub seed: u64,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Maximum number of elimination steps for one-relator decompositions.
    #[arg(long, global = true, default_value_t = gradedlie::onerelator::DEFAULT_CAP)]
    pub cap: usize,
}

impl Config {
    pub fn max_degree_or(&self, default: u32) -> u32 {
        self.max_degree.unwrap_or(default)
    }

    pub fn field_or_default(&self) -> FieldSpec {
        self.field.unwrap_or(FieldSpec::Rationals)
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hall basis of a free Lie algebra.
    Hall {
        /// Generators as `x,y` or with weights as `x:1,y:2`.
        #[arg(long)]
        gens: String,
    },
    /// Dimensions of the graded components.
    Dims { file: PathBuf },
    /// Hilbert series of the enveloping algebra.
    Hilbert { file: PathBuf },
    /// Chevalley-Eilenberg homology with trivial coefficients.
    Homology { file: PathBuf },
    /// H_1 and H_2 from the presentation.
    Hopf { file: PathBuf },
    /// Presentation of the subalgebra generated by the given elements.
    Infer {
        file: PathBuf,
        /// Subalgebra generator as `name=expression`; repeatable.
        #[arg(long = "gen", required = true)]
        gens: Vec<String>,
    },
    /// Graphs of Lie algebras.
    Graph {
        #[command(subcommand)]
        action: GraphAction,
    },
    /// One-relator algebras.
    Onerelator {
        #[command(subcommand)]
        action: OneRelatorAction,
    },
    /// Right-angled Artin Lie algebras.
    Raag {
        #[command(subcommand)]
        action: RaagAction,
    },
    /// Worked examples.
    Example {
        #[command(subcommand)]
        action: ExampleAction,
    },
    /// Runs every release check on the built-in corpus.
    Selftest,
}

#[derive(Subcommand, Debug)]
enum GraphAction {
    /// Exactness of the induced-module sequence for the fundamental algebra.
    Verify {
        file: PathBuf,
        /// Weight bound for the Euler identity; defaults to the weight truncation.
        #[arg(long)]
        euler_degree: Option<u32>,
    },
}

#[derive(Subcommand, Debug)]
enum OneRelatorAction {
    /// Iterated HNN decomposition with its verification report.
    Decompose { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum RaagAction {
    /// Chordality with a perfect elimination ordering or an induced cycle.
    Chordal { file: PathBuf },
    /// The clique resolution of the trivial module and its checks.
    Resolve {
        file: PathBuf,
        /// Weight bound for the clique-polynomial identity; defaults to the weight truncation.
        #[arg(long)]
        euler_degree: Option<u32>,
    },
    /// Coherence of the enveloping algebra with its certificate.
    Verdict { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum ExampleAction {
    /// The subalgebra generated by a, b, [x,a], [x,b] in <a, b, x | [a,b]>.
    Subalgebra,
}

fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    let c = &cli.config;
    match &cli.command {
        Command::Hall { gens } => commands::hall(c, gens),
        Command::Dims { file } => commands::dims(c, file),
        Command::Hilbert { file } => commands::hilbert(c, file),
        Command::Homology { file } => commands::homology(c, file),
        Command::Hopf { file } => commands::hopf(c, file),
        Command::Infer { file, gens } => commands::infer(c, file, gens),
        Command::Graph { action: GraphAction::Verify { file, euler_degree } } => commands::graph_verify(c, file, *euler_degree),
        Command::Onerelator { action: OneRelatorAction::Decompose { file } } => commands::onerelator(c, file),
        Command::Raag { action: RaagAction::Chordal { file } } => commands::raag_chordal(c, file),
        Command::Raag { action: RaagAction::Resolve { file, euler_degree } } => commands::raag_resolve(c, file, *euler_degree),
        Command::Raag { action: RaagAction::Verdict { file } } => commands::raag_verdict(c, file),
        Command::Example { action: ExampleAction::Subalgebra } => commands::example_subalgebra(c),
        Command::Selftest => commands::selftest(c),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli).and_then(|r| r.emit(&cli.config)) {
        Ok(passed) => ExitCode::from(if passed { 0 } else { 1 }),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
