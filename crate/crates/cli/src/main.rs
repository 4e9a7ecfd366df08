use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use momentkit_cli::scenario::Pipeline;
use momentkit_cli::{context_from_env, emit, from_json, parse_scenario_bytes, run_all, select, Document, Format, RunOptions, Scenario};

/// Lagrangian orbit certification and search for compact group actions.
///
/// Tolerances can be overridden with MOMENTKIT_TOL_OVERRIDE, e.g.
/// `rank=1e-9,lagrangian=1e-7`. Overrides are echoed into every report;
/// prefer the defaults.
#[derive(Parser)]
#[command(name = "momentkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Output {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Record wall time per scenario (makes output non-deterministic).
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario in a file with its own pipeline.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Search for a Lagrangian point of the scenario's group and space.
    Search {
        file: PathBuf,
        #[arg(long)]
        starts: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        max_iters: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Built-in scenarios.
    Registry {
        #[command(subcommand)]
        command: RegistryCommand,
    },
    /// Re-render a JSON report.
    Report {
        /// JSON report file; `-` reads stdin.
        #[arg(default_value = "-")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Subcommand)]
enum RegistryCommand {
    /// List scenario names, pipelines and sources.
    List { filter: Option<String> },
    /// Run scenarios whose names match a glob.
    Run {
        filter: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Write every scenario as a `.scn` file into a directory.
    Export { dir: PathBuf },
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("momentkit: {msg}");
    ExitCode::from(2)
}

fn load(path: &Path) -> Result<Scenario, String> {
    let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_scenario_bytes(&bytes).map_err(|e| {
        e.0.iter()
            .map(|x| format!("{}:{x}", path.display()))
            .collect::<Vec<_>>()
            .join("\n")
    })
}

fn finish(doc: &Document, format: Format) -> ExitCode {
    print!("{}", emit(doc, format));
    ExitCode::from(doc.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = match context_from_env() {
        Ok(c) => c,
        Err(e) => return fail(format!("bad {}: {e}", momentkit_cli::TOL_OVERRIDE_ENV)),
    };
    match cli.command {
        Command::Verify { file, out } => {
            let sc = match load(&file) {
                Ok(s) => s,
                Err(e) => return fail(e),
            };
            let opts = RunOptions {
                timings: out.timings,
                search: None,
            };
            finish(&Document::new(&ctx, run_all(&ctx, &[sc], opts)), out.format)
        }
        Command::Search {
            file,
            starts,
            seed,
            max_iters,
            out,
        } => {
            let mut sc = match load(&file) {
                Ok(s) => s,
                Err(e) => return fail(e),
            };
            if sc.pipeline == Pipeline::Verdict {
                sc.pipeline = Pipeline::Search;
            }
            let mut params = sc.search.unwrap_or_default();
            params.starts = starts.unwrap_or(params.starts);
            params.rng_seed = seed.unwrap_or(params.rng_seed);
            params.max_iters = max_iters.unwrap_or(params.max_iters);
            if let Err(e) = params.validate() {
                return fail(e);
            }
            let opts = RunOptions {
                timings: out.timings,
                search: Some(params),
            };
            finish(&Document::new(&ctx, run_all(&ctx, &[sc], opts)), out.format)
        }
        Command::Registry { command } => match command {
            RegistryCommand::List { filter } => match select(filter.as_deref()) {
                Ok(list) => {
                    for s in list {
                        println!("{:<34} {:<11} {}", s.name, s.pipeline, s.citation.as_deref().unwrap_or(""));
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            },
            RegistryCommand::Run { filter, out } => match select(filter.as_deref()) {
                Ok(list) if list.is_empty() => fail("no scenario matches the filter"),
                Ok(list) => {
                    let opts = RunOptions {
                        timings: out.timings,
                        search: None,
                    };
                    finish(&Document::new(&ctx, run_all(&ctx, &list, opts)), out.format)
                }
                Err(e) => fail(e),
            },
            RegistryCommand::Export { dir } => {
                if let Err(e) = std::fs::create_dir_all(&dir) {
                    return fail(format!("{}: {e}", dir.display()));
                }
                for s in momentkit_cli::registry() {
                    let path = dir.join(format!("{}.scn", s.name));
                    if let Err(e) = std::fs::write(&path, s.to_text()) {
                        return fail(format!("{}: {e}", path.display()));
                    }
                }
                ExitCode::SUCCESS
            }
        },
        Command::Report { input, format } => {
            let mut text = String::new();
            let read = if input.as_os_str() == "-" {
                std::io::stdin().read_to_string(&mut text).map(|_| ())
            } else {
                std::fs::read_to_string(&input).map(|t| text = t)
            };
            if let Err(e) = read {
                return fail(format!("{}: {e}", input.display()));
            }
            match from_json(&text) {
                Ok(doc) => finish(&doc, format),
                Err(e) => fail(format!("not a momentkit report: {e}")),
            }
        }
    }
}
