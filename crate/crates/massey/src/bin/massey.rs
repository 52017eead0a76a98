//! Command-line front end: definition-DSL and dump loading, cohomology
//! queries, Massey product decisions, and the truncation / extension /
//! dualization constructions.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 on internal
//! invariant failures.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use massey::constructions;
use massey::corpus;
use massey::dsl;
use massey::engine::{self, DecideOptions, Triviality};
use massey::error::MasseyError;
use massey::field::FieldDescriptor;
use massey::gca::Dga;
use massey::json;
use massey::solve::SolveConfig;

#[derive(Parser)]
#[command(
    name = "massey",
    about = "Exact cohomology and Massey products for graded-commutative dgas",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a basis of H^k of the algebra.
    Cohomology {
        /// A definition file, a structure dump, or a corpus id.
        input: String,
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        json: bool,
    },
    /// Decide well-definedness and triviality of a Massey product.
    Massey {
        input: String,
        /// Comma-separated bracketed class expressions, e.g. "[eta1],[eta3*eta4],[eta2]".
        #[arg(long)]
        classes: String,
        /// Decide over the extension by the square root of this rational.
        #[arg(long, value_name = "Q", allow_hyphen_values = true)]
        adjoin_sqrt: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Quotient by everything of degree >= N and write the structure dump.
    Truncate {
        input: String,
        n: u32,
        #[command(flatten)]
        out: OutArg,
    },
    /// Poincaré dualization; defaults to n = 2·(top degree) + 1.
    Dualize {
        input: String,
        #[arg(long)]
        n: Option<u32>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Extend scalars by the square root of a rational and write the dump.
    Extend {
        input: String,
        #[arg(long, value_name = "Q", allow_hyphen_values = true)]
        adjoin_sqrt: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Check d^2 = 0 and connectivity.
    Check { input: String },
    /// Corpus utilities.
    Corpus {
        #[command(subcommand)]
        command: CorpusCommand,
    },
}

#[derive(Subcommand)]
enum CorpusCommand {
    /// List the built-in algebras.
    List,
}

#[derive(Args)]
struct OutArg {
    /// Output path; `-` writes to stdout.
    #[arg(short, long)]
    out: PathBuf,
}

fn load_input(input: &str) -> Result<Dga> {
    if corpus::is_corpus_ref(input) {
        return Ok(corpus::build_from_ref(input)?);
    }
    let text = std::fs::read_to_string(input)
        .with_context(|| format!("cannot read `{input}` (not a corpus id or readable file)"))?;
    if text.trim_start().starts_with('{') {
        Ok(json::load_dump(&text)?)
    } else {
        Ok(dsl::parse_document(&text)?)
    }
}

fn solve_config_from_env() -> Result<SolveConfig> {
    let mut config = SolveConfig::default();
    if let Ok(height) = std::env::var("MASSEY_SEARCH_HEIGHT") {
        config.search_height = height
            .parse()
            .map_err(|_| anyhow!("MASSEY_SEARCH_HEIGHT must be a nonnegative integer"))?;
    }
    Ok(config)
}

fn write_output(out: &OutArg, text: &str) -> Result<()> {
    if out.out.as_os_str() == "-" {
        println!("{text}");
    } else {
        std::fs::write(&out.out, text)
            .with_context(|| format!("cannot write {}", out.out.display()))?;
        eprintln!("wrote {}", out.out.display());
    }
    Ok(())
}

fn run() -> Result<()> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            // usage errors exit 1; --help and --version print and exit 0
            eprint!("{e}");
            std::process::exit(1);
        }
        Err(e) => {
            print!("{e}");
            return Ok(());
        }
    };
    match cli.command {
        Command::Cohomology { input, degree, json: as_json } => {
            let dga = load_input(&input)?;
            let info = json::cohomology_json(&dga, degree);
            if as_json {
                println!("{}", serde_json::to_string_pretty(&info)?);
            } else {
                println!("H^{} has dimension {}", info.degree, info.dimension);
                for rep in &info.representatives {
                    println!("  [{rep}]");
                }
            }
        }
        Command::Massey {
            input,
            classes,
            adjoin_sqrt,
            json: as_json,
        } => {
            let dga = load_input(&input)?;
            let class_list = dsl::parse_class_list(&dga, &classes)?;
            let field = match adjoin_sqrt {
                None => dga.descriptor().clone(),
                Some(q) => {
                    let theta = dsl::parse_rational(&q)?;
                    let target = FieldDescriptor::quadratic(theta)?;
                    if dga.descriptor().is_extension() && dga.descriptor() != &target {
                        bail!("the algebra is already over {}", dga.descriptor());
                    }
                    target
                }
            };
            let options = DecideOptions {
                parametric_diagonals: false,
                solve: solve_config_from_env()?,
            };
            let outcome = engine::decide_with_options(&dga, &class_list, &field, &options)?;
            if as_json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json::verdict_json(&outcome))?
                );
            } else {
                println!(
                    "well-defined: {}",
                    if outcome.well_defined { "yes" } else { "no" }
                );
                println!("trivial: {}", outcome.trivial.as_str());
                if let Some(witness) = &outcome.witness {
                    let nonzero: Vec<_> =
                        witness.iter().filter(|(_, v)| !v.is_zero()).collect();
                    if nonzero.is_empty() {
                        println!("witness: all parameters zero");
                    } else {
                        println!("witness (other parameters zero):");
                        for (k, v) in nonzero {
                            println!("  {k} = {v}");
                        }
                    }
                }
                if let Some(o) = &outcome.obstruction {
                    match &o.equation {
                        Some(eq) => println!("obstruction ({}): {eq} — {}", o.kind, o.detail),
                        None => println!("obstruction ({}): {}", o.kind, o.detail),
                    }
                    for line in &o.reduced_system {
                        println!("  {line}");
                    }
                }
                if outcome.trivial == Triviality::Unknown {
                    println!("note: raise MASSEY_SEARCH_HEIGHT to widen the witness search");
                }
            }
        }
        Command::Truncate { input, n, out } => {
            let dga = Arc::new(load_input(&input)?);
            let (quotient, _) = constructions::truncate(&dga, n)?;
            write_output(&out, &json::dump_to_string(&quotient))?;
        }
        Command::Dualize { input, n, out } => {
            let dga = load_input(&input)?;
            let n = match n {
                Some(n) => n,
                None => constructions::default_dualization_degree(&dga)?,
            };
            let dual = constructions::poincare_dualize(&dga, n)?;
            write_output(&out, &json::dump_to_string(dual.algebra()))?;
        }
        Command::Extend {
            input,
            adjoin_sqrt,
            out,
        } => {
            let dga = load_input(&input)?;
            let theta = dsl::parse_rational(&adjoin_sqrt)?;
            let field = FieldDescriptor::quadratic(theta)?;
            let extended = constructions::extend_scalars(&dga, &field)?;
            write_output(&out, &json::dump_to_string(&extended))?;
        }
        Command::Check { input } => {
            let dga = load_input(&input)?;
            let d2 = dga.check_d_squared();
            let connected = dga.is_connected();
            println!("d^2 = 0: {}", if d2 { "ok" } else { "FAILED" });
            println!("connected: {}", if connected { "ok" } else { "FAILED" });
            if !d2 || !connected {
                bail!("structural checks failed");
            }
        }
        Command::Corpus {
            command: CorpusCommand::List,
        } => {
            for (id, description) in corpus::list() {
                println!("{id:20} {description}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let internal = e
                .downcast_ref::<MasseyError>()
                .map_or(false, |m| matches!(m, MasseyError::Internal(_)));
            if internal {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
