//! `twistbench`: checks, constructions and searches over finite algebras
//! given as `.alg` specs or JSON documents.
//!
//! Exit codes: 0 when the check passes or nothing was found, 1 on a suite
//! failure or a witness, 2 on unreadable input or a usage error.

mod commands;
mod input;
mod outcome;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use twistbench_core::{Mode, SuiteId, DEFAULT_RAW_MAX_SIZE};

use crate::outcome::Outcome;

#[derive(Debug, Parser)]
#[command(name = "twistbench", version, about = "Finite-algebra workbench for twist structures")]
struct Cli {
    /// Print the report as canonical JSON.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check an algebra against an axiom suite.
    Check(CheckArgs),
    /// Build the twist K(A) of a Gödel or Heyting-family algebra.
    Twist(BuildArgs),
    /// Build the center C(T) of a centered Nelson-family algebra.
    Center(BuildArgs),
    /// Build K and C both ways and verify α and β.
    Equiv(FileArgs),
    /// Enumerate the congruence lattice.
    Congruences(CongruenceArgs),
    /// Verify that θ ↦ γ_θ is an isomorphism Con(A) ≅ Con(K(A)).
    ConIso(FileArgs),
    /// Search for quantifiers or counterexamples.
    #[command(subcommand)]
    Search(SearchCommand),
    /// Enumerate every monadic Gödel algebra up to a size and assert a
    /// suite on each.
    Corpus(CorpusArgs),
    /// Print the algebra in canonical form.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
struct FileArgs {
    file: PathBuf,
    /// Keep going when the declared kind fails its suite.
    #[arg(long)]
    lenient: bool,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    input: FileArgs,
    #[arg(long, value_parser = parse_suite)]
    suite: SuiteId,
    /// Collect every falsifying assignment of every failing clause.
    #[arg(long)]
    all_witnesses: bool,
    /// Also check opt-in clauses.
    #[arg(long)]
    opt_in: bool,
    /// Evaluate a clause at a given assignment, e.g. `n3:x=(x,0);y=(0,x)`.
    #[arg(long = "probe", value_name = "CLAUSE:VAR=LABEL;...")]
    probes: Vec<String>,
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[command(flatten)]
    input: FileArgs,
    /// Write the result here: `.alg` as a spec, anything else as JSON.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CongruenceArgs {
    #[command(flatten)]
    input: FileArgs,
    /// Cross-check against brute-force partition filtering.
    #[arg(long)]
    oracle: bool,
}

#[derive(Debug, Subcommand)]
enum SearchCommand {
    /// Enumerate quantifier pairs passing a suite.
    Quantifiers(QuantifierArgs),
    /// Look for an assignment falsifying a formula.
    Counterexample(CounterexampleArgs),
}

#[derive(Debug, Args)]
struct QuantifierArgs {
    #[command(flatten)]
    input: FileArgs,
    #[arg(long, value_parser = parse_mode)]
    mode: Mode,
    #[arg(long, value_parser = parse_suite)]
    filter: SuiteId,
    /// Largest carrier raw mode will enumerate.
    #[arg(long, env = "TWISTBENCH_MAX_SIZE", default_value_t = DEFAULT_RAW_MAX_SIZE)]
    max_size: usize,
}

#[derive(Debug, Args)]
struct CounterexampleArgs {
    #[command(flatten)]
    input: FileArgs,
    #[arg(long)]
    formula: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    /// The twist of each corpus algebra.
    Twist,
    /// The corpus algebra itself.
    Base,
}

#[derive(Debug, Args)]
struct CorpusArgs {
    #[arg(long)]
    max_size: usize,
    #[arg(long = "assert", value_parser = parse_suite)]
    suite: SuiteId,
    /// Which algebra of each entry the suite is checked on.
    #[arg(long, value_enum, default_value_t = Target::Twist)]
    on: Target,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Alg,
}

#[derive(Debug, Args)]
struct ExportArgs {
    #[command(flatten)]
    input: FileArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn parse_suite(s: &str) -> Result<SuiteId, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(a) => commands::check(a),
        Command::Twist(a) => commands::twist(a),
        Command::Center(a) => commands::center(a),
        Command::Equiv(a) => commands::equiv(a),
        Command::Congruences(a) => commands::congruences(a),
        Command::ConIso(a) => commands::con_iso(a),
        Command::Search(SearchCommand::Quantifiers(a)) => commands::quantifiers(a),
        Command::Search(SearchCommand::Counterexample(a)) => commands::counterexample(a),
        Command::Corpus(a) => commands::corpus(a),
        Command::Export(a) => commands::export(a),
    };
    match result {
        Ok(outcome) => outcome.emit(cli.json),
        Err(e) => match e.downcast_ref::<input::SpecFileError>().and_then(|e| e.kind_failure()) {
            // a declared kind failing its suite is a suite failure, not bad input
            Some(report) => {
                eprintln!("error: {e}");
                Outcome::report(report).emit(cli.json)
            }
            None => {
                eprintln!("error: {e:#}");
                Outcome::input_error()
            }
        },
    }
}
