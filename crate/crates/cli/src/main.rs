use std::collections::HashMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};

use emult::Filtration;
use emult_cli::corpus::{all_graded_pass, format_table, run_fixtures};
use emult_cli::report::{run_task, write_file};
use emult_cli::scenario::DEFAULT_WINDOW;
use emult_cli::{builtin_filtration, run_scenario, Format, Scenario, TaskSpec, BUILTIN_NAMES};

#[derive(Parser)]
#[command(name = "emult", version, about = "Epsilon multiplicity and related invariants of monomial filtrations")]
struct Cli {
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Output file (single commands) or directory (`run`); stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Scenario file whose named filtrations the arguments refer to.
    #[arg(long)]
    scenario: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print I_1, ..., I_N.
    Eval {
        filtration: String,
        #[arg(long, default_value_t = 10)]
        n_max: u64,
        #[command(flatten)]
        source: Source,
    },
    /// Length sequence and epsilon estimate.
    Epsilon {
        filtration: String,
        #[arg(long, default_value_t = 100)]
        n_max: u64,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: usize,
        #[command(flatten)]
        source: Source,
    },
    /// Check property A(c) up to N.
    Acheck {
        filtration: String,
        #[arg(long)]
        c: u64,
        #[arg(long, default_value_t = 50)]
        n_max: u64,
        #[command(flatten)]
        source: Source,
    },
    /// Analytic spread tests.
    Spread {
        filtration: String,
        #[arg(long, default_value_t = 20)]
        n_max: u64,
        #[arg(long, default_value_t = 4)]
        r_max: u64,
        #[command(flatten)]
        source: Source,
    },
    /// Compare the integral closures of two Rees algebras degree by degree.
    ClosureCompare {
        left: String,
        right: String,
        #[arg(long, default_value_t = 10)]
        n_max: u64,
        #[arg(long, default_value_t = 4)]
        r_max: u64,
        #[command(flatten)]
        source: Source,
    },
    /// Sum of localized multiplicities over the minimal primes of I_1.
    Es {
        filtration: String,
        #[arg(long, default_value_t = 100)]
        n_max: u64,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: usize,
        #[command(flatten)]
        source: Source,
    },
    /// Epsilon estimates of the truncations I[1], ..., I[levels].
    TruncateSweep {
        filtration: String,
        #[arg(long, default_value_t = 4)]
        levels: u64,
        #[arg(long, default_value_t = 100)]
        n_max: u64,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: usize,
        #[command(flatten)]
        source: Source,
    },
    /// Check epsilon(J) = epsilon(I) + limit of the middle quotient.
    DiffCheck {
        larger: String,
        smaller: String,
        #[arg(long, default_value_t = 100)]
        n_max: u64,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: usize,
        #[command(flatten)]
        source: Source,
    },
    /// Run the fixture corpus, or one fixture by id.
    Fixtures {
        #[arg(long)]
        id: Option<String>,
        /// List fixture ids and exit.
        #[arg(long)]
        list: bool,
    },
    /// Run every task of a scenario file.
    Run { scenario: PathBuf },
}

fn resolve(names: &[&str], source: &Source) -> anyhow::Result<HashMap<String, Filtration>> {
    let scenario = match &source.scenario {
        Some(path) => {
            let s = Scenario::load(path)?;
            let ctx = s.context()?;
            Some(s.build_filtrations(&ctx)?)
        }
        None => None,
    };
    names
        .iter()
        .map(|&name| {
            let f = match &scenario {
                Some(map) => map.get(name).cloned(),
                None => builtin_filtration(name),
            };
            let f = f.ok_or_else(|| match &scenario {
                Some(_) => anyhow!("no filtration `{name}` in the scenario"),
                None => {
                    anyhow!("unknown filtration `{name}`; built-ins are {} and tau:<expr>", BUILTIN_NAMES.join(", "))
                }
            })?;
            Ok((name.to_string(), f))
        })
        .collect()
}

fn single(task: TaskSpec, source: &Source, format: Format, out: Option<PathBuf>) -> anyhow::Result<()> {
    let map = resolve(&task.filtrations(), source)?;
    let name = task.kind().to_string();
    let report = run_task(&task, &name, &|n: &str| map[n].clone())?;
    let bytes = report.render(format)?;
    match out {
        Some(path) => write_file(&path, &bytes)?,
        None => std::io::stdout().write_all(&bytes).context("writing to stdout")?,
    }
    Ok(())
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn real_main() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            bail!("--jobs must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().context("starting the worker pool")?;
    }
    let format = cli.format.unwrap_or(Format::Csv);
    let out = cli.out;
    let task = match cli.command {
        Command::Run { scenario } => {
            let outputs = run_scenario(&scenario, out.as_deref(), cli.format)?;
            for o in outputs {
                for f in o.files {
                    println!("{}: {}", o.name, f.display());
                }
            }
            return Ok(ExitCode::SUCCESS);
        }
        Command::Fixtures { id, list } => {
            if list {
                for id in emult_cli::corpus::fixture_ids() {
                    println!("{id}");
                }
                return Ok(ExitCode::SUCCESS);
            }
            let results = run_fixtures(id.as_deref())?;
            match (&out, cli.format) {
                (Some(path), _) => {
                    let mut bytes = serde_json::to_vec_pretty(&results)?;
                    bytes.push(b'\n');
                    write_file(path, &bytes)?;
                    print!("{}", format_table(&results));
                }
                (None, Some(Format::Json)) => println!("{}", serde_json::to_string_pretty(&results)?),
                (None, _) => print!("{}", format_table(&results)),
            }
            return Ok(if all_graded_pass(&results) { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
        Command::Eval { filtration, n_max, source } => (TaskSpec::Eval { name: None, filtration, n_max }, source),
        Command::Epsilon { filtration, n_max, window, source } => {
            (TaskSpec::Epsilon { name: None, filtration, n_max, window }, source)
        }
        Command::Acheck { filtration, c, n_max, source } => {
            (TaskSpec::Acheck { name: None, filtration, c, n_max }, source)
        }
        Command::Spread { filtration, n_max, r_max, source } => {
            (TaskSpec::Spread { name: None, filtration, n_max, r_max }, source)
        }
        Command::ClosureCompare { left, right, n_max, r_max, source } => {
            (TaskSpec::ClosureCompare { name: None, left, right, n_max, r_max }, source)
        }
        Command::Es { filtration, n_max, window, source } => {
            (TaskSpec::Es { name: None, filtration, n_max, window }, source)
        }
        Command::TruncateSweep { filtration, levels, n_max, window, source } => {
            (TaskSpec::TruncationSweep { name: None, filtration, levels, n_max, window }, source)
        }
        Command::DiffCheck { larger, smaller, n_max, window, source } => {
            (TaskSpec::DifferenceCheck { name: None, larger, smaller, n_max, window }, source)
        }
    };
    single(task.0, &task.1, format, out)?;
    Ok(ExitCode::SUCCESS)
}
