use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use prodcell::cli::{self, Format, GraphSource, Output, RunConfig};
use prodcell::Error;

/// Prodsimplicial homology of digraphs and double occurrence word graphs.
#[derive(Parser, Debug)]
#[command(name = "prodcell", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Highest cell dimension to build.
    #[arg(long, global = true, default_value_t = 3)]
    max_dim: usize,

    /// Output format. Graph commands default to dot, the rest to table.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Wall-clock budget in seconds.
    #[arg(long, global = true)]
    budget: Option<f64>,

    /// Seed for sampled runs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write results here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Dot,
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the ascending-order form of a double occurrence word.
    Normalize { word: String },
    /// List the maximal factors and immediate successors of a word.
    Successors { word: String },
    /// Export a word graph or another graph source.
    Graph(SourceArgs),
    /// Betti numbers and torsion of a graph's prodsimplicial complex.
    Homology(SourceArgs),
    /// Betti numbers for the tangled cords t_2 .. t_N.
    Table { n_max: usize },
    /// Export a generator graph, e.g. `construct lantern 4`.
    Construct { name: String, params: Vec<usize> },
    /// Run seeded invariant suites.
    Verify {
        /// all, boundary, reverse, product, snf, euler or corrupted.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Random cases per suite.
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

#[derive(Args, Debug)]
struct SourceArgs {
    /// Root word of a rooted word graph.
    word: Option<String>,
    /// Global word graph on all words of size at most N.
    #[arg(long, value_name = "N", conflicts_with_all = ["word", "construct", "graph"])]
    global: Option<usize>,
    /// Named construction followed by its parameters.
    #[arg(long, num_args = 1.., value_name = "NAME PARAMS", conflicts_with_all = ["word", "graph"])]
    construct: Option<Vec<String>>,
    /// Graph file in {"vertices": [...], "edges": [[u, v], ...]} form.
    #[arg(long, value_name = "FILE", conflicts_with = "word")]
    graph: Option<PathBuf>,
}

impl SourceArgs {
    fn source(&self) -> Result<GraphSource, Error> {
        if let Some(n) = self.global {
            return Ok(GraphSource::Global(n));
        }
        if let Some(parts) = &self.construct {
            let params = parts[1..]
                .iter()
                .map(|p| {
                    p.parse::<usize>().map_err(|_| {
                        Error::GraphFormat(format!(
                            "construction parameter {p:?} is not a nonnegative integer"
                        ))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(GraphSource::Construct(parts[0].clone(), params));
        }
        if let Some(path) = &self.graph {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::GraphFormat(format!("{}: {e}", path.display())))?;
            return Ok(GraphSource::Json(text));
        }
        match &self.word {
            Some(w) => Ok(GraphSource::Word(w.clone())),
            None => Err(Error::GraphFormat(
                "give a WORD, --global N, --construct NAME PARAMS or --graph FILE".into(),
            )),
        }
    }
}

const EXIT_ERROR: u8 = 1;
const EXIT_PARTIAL: u8 = 3;
const EXIT_VERIFY_FAILED: u8 = 4;

fn run(cli: &Cli) -> Result<(Output, u8), Error> {
    let format_or = |default: Format| match cli.format {
        Some(FormatArg::Dot) => Format::Dot,
        Some(FormatArg::Json) => Format::Json,
        Some(FormatArg::Table) => Format::Table,
        None => default,
    };
    let cfg = RunConfig {
        max_dim: cli.max_dim,
        format: format_or(Format::Table),
        budget: cli.budget,
        seed: cli.seed,
    };
    cfg.validate()?;
    let done = |text: String| Ok((Output::done(text), 0));
    match &cli.command {
        Command::Normalize { word } => done(cli::cmd_normalize(word)? + "\n"),
        Command::Successors { word } => done(cli::cmd_successors(word, cfg.format)?),
        Command::Graph(src) => done(cli::cmd_graph(&src.source()?, format_or(Format::Dot))?),
        Command::Construct { name, params } => {
            done(cli::cmd_construct(name, params, format_or(Format::Dot))?)
        }
        Command::Homology(src) => done(cli::cmd_homology(&src.source()?, &cfg)?),
        Command::Table { n_max } => {
            let mut progress = |msg: &str| eprintln!("{msg}");
            let out = cli::cmd_table(*n_max, &cfg, &mut progress)?;
            let code = if out.complete { 0 } else { EXIT_PARTIAL };
            Ok((out, code))
        }
        Command::Verify { suite, cases } => {
            let out = cli::cmd_verify(&cli::parse_suites(suite)?, cfg.seed, *cases);
            let code = if out.complete { 0 } else { EXIT_VERIFY_FAILED };
            Ok((out, code))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, code)) => {
            let written = match &cli.output {
                Some(path) => fs::write(path, &out.text),
                None => std::io::stdout().write_all(out.text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(EXIT_ERROR);
            }
            if !out.complete && code == EXIT_PARTIAL {
                eprintln!("error: {}", Error::BudgetExceeded);
            }
            ExitCode::from(code)
        }
        Err(Error::BudgetExceeded) => {
            eprintln!("error: {}", Error::BudgetExceeded);
            ExitCode::from(EXIT_PARTIAL)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
