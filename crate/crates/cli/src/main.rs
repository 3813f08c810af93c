//! `knotgroup`: knot group presentations, invariant reports and certificate management.

mod commands;
mod document;
mod error;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use knotgroup::certify::Budget;

#[derive(Parser, Debug)]
#[command(
    name = "knotgroup",
    version,
    about = "Knot groups, 2-knot groups and certified algebraic unknotting bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Emit the versioned JSON document instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads (default: logical cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Knot catalog JSON file replacing the built-in one.
    #[arg(long, global = true)]
    pub catalog: Option<PathBuf>,
    /// Certificate cache directory (overrides KNOTGROUP_CACHE_DIR).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Do not read or write the certificate cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub max_cosets: usize,
    #[arg(long, global = true, default_value_t = 6)]
    pub max_word_length: usize,
    #[arg(long, global = true, default_value_t = 200_000)]
    pub max_candidates: usize,
    /// Seconds per certification.
    #[arg(long, global = true, default_value_t = 300)]
    pub time_limit: u64,
}

impl GlobalArgs {
    pub fn budget(&self) -> Budget {
        Budget {
            max_cosets: self.max_cosets,
            max_word_length: self.max_word_length,
            max_candidates: self.max_candidates,
            time_limit: Duration::from_secs(self.time_limit),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the presentation of a knot spec.
    Group { spec: String },
    /// Certified bounds on m, a, a_st, a_fw and mu-1.
    Invariants {
        spec: String,
        /// Largest number of witness relators searched for.
        #[arg(long, default_value_t = 2)]
        c_max: usize,
    },
    /// Run a verification pipeline over a parameter grid.
    Verify {
        #[command(subcommand)]
        theorem: Theorem,
    },
    /// Manage the certificate cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum Theorem {
    /// Nontrivial quotients of <a1, a2 | a1^p1, a2^p2, g^2> for every
    /// alternating g, and optionally a_fw >= 2 for a sum of two knots.
    Algadd {
        #[arg(long, default_value_t = 3)]
        p1: u32,
        #[arg(long, default_value_t = 5)]
        p2: u32,
        /// Largest syllable length of g (default: --max-word-length).
        #[arg(long)]
        length: Option<usize>,
        /// Two knot specs whose connected sum gets the a_fw >= 2 sweep.
        #[arg(long, num_args = 2, value_names = ["K1", "K2"])]
        knots: Option<Vec<String>>,
    },
    /// One combined relator abelianizes a sum of twist spins with coprime indices.
    Nonadd {
        /// Classical knots k_i; the summands are tspin(k_i, j_i).
        #[arg(long, value_delimiter = ',', required = true)]
        knots: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        js: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        c_max: usize,
    },
    /// a_st <= n on random ribbon presentations with n fusions.
    Fusion {
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Number of seeds, starting at --seed.
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Length of each random conjugator.
        #[arg(long, default_value_t = 3)]
        length: usize,
    },
    /// Chain consistency of invariant reports (default: catalog and twist spins).
    Inequalities { specs: Vec<String> },
}

#[derive(Subcommand, Debug)]
pub enum CacheAction {
    List,
    /// Remove entries at least this many seconds old.
    Gc {
        #[arg(long, default_value_t = 30 * 24 * 3600)]
        max_age: u64,
    },
    /// Replay every stored certificate.
    Verify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match cli.command {
        Command::Group { spec } => commands::group(&cli.global, &spec),
        Command::Invariants { spec, c_max } => commands::invariants(&cli.global, &spec, c_max),
        Command::Verify { theorem } => commands::verify(&cli.global, theorem),
        Command::Cache { action } => commands::cache(&cli.global, action),
    };
    match result {
        Ok(status) => ExitCode::from(status.exit_code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
