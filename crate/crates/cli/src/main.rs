//! `ramsey`: checks, constructions, degree searches and certificate replay.
//!
//! Exit codes: 0 pass, 1 fail, 2 budget refusal, 64 usage.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ramsey_core::engine::{Mode, SearchBudget};
use ramsey_core::Error;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_REFUSED: u8 = 2;
pub const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "ramsey",
    version,
    about = "Pigeonhole checks and Ramsey witnesses for finite categories"
)]
pub struct Cli {
    /// Worker threads for the engine (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Print construction traces and per-morphism counterexamples.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a witness for the condition (P) or (FP).
    Verify {
        #[arg(value_enum)]
        condition: Condition,
        #[command(flatten)]
        sel: Selector,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        c: String,
        #[arg(long)]
        r: u64,
        /// (FP) only: `;`-separated morphisms of the finite set s.
        #[arg(long)]
        s: Option<String>,
        /// (FP) only.
        #[arg(long = "f-prime")]
        f_prime: Option<String>,
        /// (FP) only.
        #[arg(long = "g-prime")]
        g_prime: Option<String>,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a witness with one of the catalogued constructions and check it.
    Construct {
        #[arg(long)]
        theorem: String,
        #[command(flatten)]
        params: ConstructParams,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ramsey degree over a candidate pool, optionally next to the image-size
    /// bound of a functor.
    Degree {
        #[command(flatten)]
        sel: Selector,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        r: u32,
        /// `lo..hi` (inclusive) or a `;`-separated list of objects.
        #[arg(long)]
        pool: Option<String>,
        /// Also compute the bound from the words in `--delta`.
        #[arg(long)]
        bound: bool,
        #[arg(long)]
        delta: Option<String>,
        #[arg(long = "word-cap", default_value_t = 3)]
        word_cap: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate file.
    Replay {
        path: PathBuf,
        /// Replace the stored budget by the one given on the command line.
        #[arg(long = "override")]
        override_budget: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Condition {
    P,
    Fp,
}

#[derive(Args, Debug, Clone)]
struct Selector {
    /// `R`, `P`, `Pm`, `T`, `HJ<k0>` or `Prod<...>`.
    #[arg(long)]
    category: Option<String>,
    /// Functor word such as `dR^2`; defaults to the category's own `∂`.
    #[arg(long)]
    functor: Option<String>,
}

#[derive(Args, Debug, Clone, Default)]
struct ConstructParams {
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    r: Option<String>,
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    l: Option<String>,
    #[arg(long)]
    k1: Option<String>,
    #[arg(long)]
    k0: Option<String>,
    #[arg(long)]
    v: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    s: Option<String>,
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    times: Option<String>,
    #[arg(long)]
    category: Option<String>,
    #[arg(long)]
    orientation: Option<String>,
}

#[derive(Args, Debug, Clone, Default)]
struct BudgetArgs {
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long = "max-hom")]
    max_hom: Option<u64>,
    #[arg(long = "max-colorings")]
    max_colorings: Option<u64>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sampled,
    Auto,
}

impl BudgetArgs {
    fn given(&self) -> bool {
        self.mode.is_some()
            || self.max_hom.is_some()
            || self.max_colorings.is_some()
            || self.samples.is_some()
            || self.seed.is_some()
    }

    /// Flags first, then `RAMSEY_*` variables, then library defaults.
    fn resolve(&self, default_mode: Mode) -> Result<SearchBudget, CliError> {
        let mut b = SearchBudget::default();
        b.max_hom_size = pick(self.max_hom, "RAMSEY_MAX_HOM", b.max_hom_size)?;
        b.max_colorings = pick(self.max_colorings, "RAMSEY_MAX_COLORINGS", b.max_colorings)?;
        b.sample_count = pick(self.samples, "RAMSEY_SAMPLES", b.sample_count)?;
        b.seed = pick(self.seed, "RAMSEY_SEED", b.seed)?;
        b.mode = match self.mode {
            Some(ModeArg::Exhaustive) => Mode::Exhaustive,
            Some(ModeArg::Sampled) => Mode::Sampled,
            Some(ModeArg::Auto) => Mode::Auto,
            None => default_mode,
        };
        Ok(b)
    }
}

fn pick(flag: Option<u64>, var: &str, default: u64) -> Result<u64, CliError> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match std::env::var(var) {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{var}={text} is not a natural number"))),
        Err(_) => Ok(default),
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Core(e) => match e {
                Error::BudgetRefused(_) | Error::CapExceeded { .. } | Error::Overflow(_) => EXIT_REFUSED,
                Error::Stale(_) | Error::ConstructionAbort { .. } => EXIT_FAIL,
                _ => EXIT_USAGE,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS });
        }
    };
    let run = || commands::run(&cli);
    let result = match cli.jobs {
        Some(0) => Err(CliError::Usage("--jobs must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(run),
            Err(e) => Err(CliError::Usage(e.to_string())),
        },
        None => run(),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, CliError::Usage(_)) || e.code() == EXIT_USAGE {
                eprintln!("run `ramsey --help` for usage");
            }
            ExitCode::from(e.code())
        }
    }
}
