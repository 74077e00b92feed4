use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod input;

#[derive(Parser, Debug)]
#[command(name = "aspirrel", version, about = "Answer sets, verified abstractions and justification trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Program file (`.lp`).
    #[arg(long, env = "ASPIRREL_PROGRAM", value_name = "FILE")]
    pub program: Option<PathBuf>,

    /// Instance family file (`.chi`).
    #[arg(long, env = "ASPIRREL_INSTANCES", value_name = "FILE")]
    pub instances: Option<PathBuf>,

    /// Built-in domain supplying the program, instances and mapping files
    /// not given explicitly.
    #[arg(long, env = "ASPIRREL_DOMAIN", value_name = "NAME")]
    pub domain: Option<String>,

    /// Select one instance of the family.
    #[arg(long, env = "ASPIRREL_INSTANCE", value_name = "NAME")]
    pub instance: Option<String>,

    #[arg(long, env = "ASPIRREL_FORMAT", value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Maximum number of ground rules.
    #[arg(long, env = "ASPIRREL_GROUND_CAP", value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    pub ground_cap: Option<u64>,

    /// Maximum number of search nodes per solver call.
    #[arg(long, env = "ASPIRREL_NODE_BUDGET", value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    pub node_budget: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct MappingArg {
    /// Mapping file (`.map`); with --domain, a bundled file name such as
    /// `reference.map` also works.
    #[arg(long, env = "ASPIRREL_MAPPING", value_name = "FILE")]
    pub mapping: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the answer sets of the program with the selected instance.
    Solve {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Check a mapping against every instance of the family.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        mapping: MappingArg,
    },
    /// Discover removals and clusters that verify on the family.
    Abstract {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Print the mapped ground program.
    Apply {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        mapping: MappingArg,
    },
    /// Justification tree for an atom, and its abstracted counterpart.
    Explain {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        mapping: MappingArg,
        #[arg(long, env = "ASPIRREL_QUERY", value_name = "ATOM")]
        query: Option<String>,
        /// Index of the answer set to explain, in canonical order.
        #[arg(long, env = "ASPIRREL_MODEL", value_name = "K")]
        model: Option<usize>,
    },
    /// Tree size reductions per instance.
    Stats {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        mapping: MappingArg,
        #[arg(long, env = "ASPIRREL_QUERY", value_name = "ATOM")]
        query: Option<String>,
    },
    /// Built-in domains.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Regenerate the fixture files.
    Fixtures {
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum CorpusAction {
    /// List domains and the provenance of their files.
    List,
    /// Write a domain's files into a directory.
    Extract {
        name: String,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve { input } => commands::solve(&input),
        Command::Verify { input, mapping } => commands::verify(&input, &mapping),
        Command::Abstract { input } => commands::abstract_(&input),
        Command::Apply { input, mapping } => commands::apply(&input, &mapping),
        Command::Explain { input, mapping, query, model } => commands::explain(&input, &mapping, query.as_deref(), model),
        Command::Stats { input, mapping, query } => commands::stats(&input, &mapping, query.as_deref()),
        Command::Corpus { action: CorpusAction::List } => commands::corpus_list(),
        Command::Corpus { action: CorpusAction::Extract { name, out } } => commands::corpus_extract(&name, &out),
        Command::Fixtures { out } => commands::fixtures(&out),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
