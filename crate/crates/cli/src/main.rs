//! `lensmassey`: build models, compute homology and Massey products, and
//! verify the nontrivial Massey product of the `(7, 2)` configuration space.
//!
//! Exit codes: 0 success, 1 verdict mismatch, 2 budget refusal, 3 input error.

mod cache;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cache::{Cache, Entry};
use commands::{CliError, Output};

/// Worker threads for parallel stages; default is the available parallelism.
const WORKERS_ENV: &str = "LENSMASSEY_WORKERS";

#[derive(Parser, Debug)]
#[command(
    name = "lensmassey",
    version,
    about = "Exact Massey products on lens-space configuration spaces"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Coefficient ring: Z, Q or Fp:<p>.
    #[arg(long, global = true)]
    ring: Option<String>,
    /// Maximum top simplices for model builds; cells per certificate for `verify`.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON document here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    no_cache: bool,
    /// Allow builds beyond the budget.
    #[arg(long, global = true)]
    long_running_override: bool,
    /// Print the JSON document instead of the summary.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ModelKind {
    SubdividedJoin,
    JoinOfSubdivisions,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every verdict of the (7,2) computation; other (m,q) run the trivial comparison.
    Verify {
        #[arg(long = "m", visible_alias = "modulus", default_value_t = 7)]
        m: u32,
        #[arg(long = "q", visible_alias = "twist", default_value_t = 2)]
        q: u32,
        /// Replace the indeterminacy by {a4∪ι, a2∪ι}; the run must then fail.
        #[arg(long)]
        sabotage_indeterminacy: bool,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// The S³ model with its action and the lens-space quotient; `--complement` adds the diagonal complement.
    Model {
        #[arg(long, default_value_t = 7)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        q: usize,
        #[arg(long, value_enum, default_value_t = ModelKind::SubdividedJoin)]
        model: ModelKind,
        #[arg(long)]
        complement: bool,
    },
    /// Homology of a fixture (torus33, rp2, sphere:<n>, s3join:<m>, lens:<m>:<q>, split:<m>) or a complex file.
    Homology {
        #[arg(long, conflicts_with = "file")]
        fixture: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Triple Massey products of a DGA file.
    Massey {
        #[arg(long)]
        dga: PathBuf,
        #[arg(long, num_args = 3, default_values_t = [1, 1, 1])]
        degrees: Vec<usize>,
        /// Three basis names whose classes to use; default sweeps basis classes.
        #[arg(long, num_args = 3)]
        classes: Option<Vec<String>>,
    },
    /// Which membranes A_k, A_j meet off the diagonals.
    Pattern {
        #[arg(long, default_value_t = 7)]
        m: u32,
        #[arg(long, default_value_t = 2)]
        q: u32,
    },
    /// Poincaré polynomial, H² rank and π₁ bookkeeping.
    Formulas {
        #[arg(long, default_value_t = 7)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

fn default_cache_dir() -> Option<PathBuf> {
    if let Some(x) = std::env::var_os("XDG_CACHE_HOME") {
        return Some(PathBuf::from(x).join("lensmassey"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("lensmassey"))
}

fn configure_workers() -> Result<(), CliError> {
    let Ok(v) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| CliError::Input(format!("{WORKERS_ENV}={v} is not a count")))?;
    // A second initialisation (tests) is harmless.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn run(cli: Cli) -> Result<Output, CliError> {
    configure_workers()?;
    let g = cli.global.clone();
    let cache = Cache::new(if g.no_cache {
        None
    } else {
        g.cache_dir.clone().or_else(default_cache_dir)
    });
    let cached = |name: &str,
                  params: serde_json::Value,
                  files: Vec<Vec<u8>>,
                  f: &dyn Fn() -> Result<Output, CliError>| {
        let key = Cache::key(name, &params, &files);
        if let Some(e) = cache.get(&key) {
            return Ok(Output {
                document: e.document,
                summary: e.summary,
                status: e.status,
            });
        }
        let out = f()?;
        let entry = Entry {
            document: out.document.clone(),
            summary: out.summary.clone(),
            status: out.status,
        };
        if let Err(e) = cache.put(&key, &entry) {
            eprintln!("warning: cache write failed: {e}");
        }
        Ok(out)
    };
    let params = |v: serde_json::Value| {
        serde_json::json!({
            "args": v,
            "ring": g.ring,
            "budget": g.budget,
            "seed": g.seed,
            "long_running_override": g.long_running_override,
        })
    };
    match cli.command {
        Command::Verify {
            m,
            q,
            sabotage_indeterminacy,
            samples,
        } => commands::verify(&g, m, q, sabotage_indeterminacy, samples),
        Command::Model {
            m,
            q,
            model,
            complement,
        } => cached(
            "model",
            params(serde_json::json!([m, q, format!("{model:?}"), complement])),
            vec![],
            &|| commands::model(&g, m, q, model, complement),
        ),
        Command::Homology { fixture, file } => {
            let (label, bytes) = match (&fixture, &file) {
                (Some(f), None) => (f.clone(), vec![]),
                (None, Some(p)) => (
                    p.display().to_string(),
                    vec![std::fs::read(p)
                        .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?],
                ),
                _ => {
                    return Err(CliError::Input(
                        "give exactly one of --fixture or --file".into(),
                    ))
                }
            };
            let is_file = file.is_some();
            cached(
                "homology",
                params(serde_json::json!([label, is_file])),
                bytes.clone(),
                &|| commands::homology(&g, &label, is_file.then(|| bytes[0].as_slice())),
            )
        }
        Command::Massey {
            dga,
            degrees,
            classes,
        } => {
            let text = std::fs::read(&dga)
                .map_err(|e| CliError::Input(format!("{}: {e}", dga.display())))?;
            let degrees: [usize; 3] = degrees
                .try_into()
                .map_err(|_| CliError::Input("need three degrees".into()))?;
            cached(
                "massey",
                params(serde_json::json!([degrees, classes])),
                vec![text.clone()],
                &|| commands::massey(&g, &text, degrees, classes.as_deref()),
            )
        }
        Command::Pattern { m, q } => cached(
            "pattern",
            params(serde_json::json!([m, q])),
            vec![],
            &|| commands::pattern(&g, m, q),
        ),
        Command::Formulas { m, n } => cached(
            "formulas",
            params(serde_json::json!([m, n])),
            vec![],
            &|| commands::formulas(&g, m, n),
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (out, json) = (cli.global.out.clone(), cli.global.json);
    match run(cli) {
        Ok(o) => {
            if let Some(path) = out {
                let text = serde_json::to_string_pretty(&o.document).expect("documents serialize");
                if let Err(e) = std::fs::write(&path, text + "\n") {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(3);
                }
            }
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&o.document).expect("documents serialize")
                );
            } else {
                print!("{}", o.summary);
            }
            ExitCode::from(o.status as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
