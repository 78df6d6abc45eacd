mod cache;
mod commands;
mod input;
mod report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{emit_json, Outcome, EXIT_INPUT};

#[derive(Parser)]
#[command(name = "fraisse", version, about = "Finite structural Ramsey theory toolkit")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Worker threads for the searches (0: one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Result cache directory.
    #[arg(long, global = true, env = "FRAISSE_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Ignore the cache even when a directory is configured.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

pub fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// Limit-prefix construction settings.
#[derive(Args, Clone)]
pub struct PrefixArgs {
    #[arg(long, default_value_t = 20, value_parser = positive)]
    pub steps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest C among the inclusion pairs B ⊆ C.
    #[arg(long, default_value_t = 3, value_parser = positive)]
    pub pair_bound: usize,
    /// Size cap for the prefix.
    #[arg(long, default_value_t = 40, value_parser = positive)]
    pub max_size: usize,
}

#[derive(Args, Clone)]
pub struct ArrowArgs {
    #[arg(long = "C")]
    pub c: String,
    #[arg(long = "B")]
    pub b: String,
    #[arg(long = "A")]
    pub a: String,
    #[arg(short = 'r', value_parser = positive)]
    pub r: usize,
    #[arg(short = 'k', value_parser = positive)]
    pub k: usize,
    /// Color copies of A instead of embeddings.
    #[arg(long)]
    pub structural: bool,
}

#[derive(Subcommand)]
pub enum Cmd {
    /// Members of a class of a given size, up to isomorphism.
    Gen {
        #[arg(long)]
        class: String,
        #[arg(long)]
        size: usize,
        /// All sizes from 0 to --size.
        #[arg(long)]
        up_to: bool,
    },
    /// Embeddings and copies of A in B.
    Emb {
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: String,
    },
    /// Automorphisms of A.
    Aut {
        #[arg(long = "A")]
        a: String,
    },
    /// Class membership with a forbidden-substructure witness.
    Member {
        #[arg(long)]
        class: String,
        #[arg(long = "A")]
        a: String,
    },
    /// Inhabited sizes and joint embedding up to a bound.
    CheckAge {
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = 4, value_parser = positive)]
        bound: usize,
    },
    /// Amalgamation over all triples up to a bound.
    CheckAp {
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = 3, value_parser = positive)]
        triple_bound: usize,
        #[arg(long, default_value_t = 6, value_parser = positive)]
        amalgam_bound: usize,
    },
    /// Build a limit prefix by repeated amalgamation.
    Flim {
        #[arg(long)]
        class: String,
        #[command(flatten)]
        prefix: PrefixArgs,
    },
    /// Extension-property coverage of a limit prefix.
    ExtProp {
        #[arg(long)]
        class: String,
        #[command(flatten)]
        prefix: PrefixArgs,
        /// Largest C checked.
        #[arg(long, default_value_t = 3, value_parser = positive)]
        s: usize,
        /// Also run back-and-forth from partial isomorphisms to this depth.
        #[arg(long, default_value_t = 0)]
        depth: usize,
    },
    /// Exact check of C ↪ (B)^A_{r,k}.
    Arrow {
        #[command(flatten)]
        q: ArrowArgs,
    },
    /// Ramsey degree evidence for A in a class.
    Degree {
        #[arg(long)]
        class: String,
        #[arg(long = "A")]
        a: String,
        /// Target for the lower evidence (default: a limit prefix).
        #[arg(long)]
        top: Option<String>,
        #[command(flatten)]
        prefix: PrefixArgs,
        #[arg(long, default_value_t = 3, value_parser = positive)]
        r_max: usize,
        #[arg(long, value_parser = positive)]
        b_bound: Option<usize>,
        #[arg(long, default_value_t = 6, value_parser = positive)]
        witness_bound: usize,
        #[arg(long, default_value_t = 3, value_parser = positive)]
        s: usize,
    },
    /// Is a set of embeddings of A thick at horizon s?
    Thick {
        #[command(flatten)]
        set: SetArgs,
    },
    /// Is a set of embeddings of A syndetic at horizon s?
    Syndetic {
        #[command(flatten)]
        set: SetArgs,
    },
    /// DIMACS CNF whose models are the bad colorings.
    CnfExport {
        #[command(flatten)]
        q: ArrowArgs,
        /// Write the CNF here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Read a SAT solver's answer to an exported CNF.
    ImportModel {
        #[command(flatten)]
        q: ArrowArgs,
        #[arg(long)]
        model: String,
    },
    /// Expansions of A, with optional reasonableness and precompactness checks.
    Expansions {
        #[arg(long)]
        expansion: String,
        #[arg(long = "A")]
        a: String,
        #[arg(long, value_parser = positive)]
        reasonable: Option<usize>,
        #[arg(long, value_parser = positive)]
        precompact: Option<usize>,
    },
    /// Expansion property up to bounds.
    CheckExpp {
        #[arg(long)]
        expansion: String,
        #[arg(long, default_value_t = 3, value_parser = positive)]
        star_bound: usize,
        #[arg(long, default_value_t = 3, value_parser = positive)]
        bound: usize,
    },
    /// Number of expansions of A against its degree evidence.
    Consistency {
        #[arg(long)]
        expansion: String,
        #[arg(long = "A")]
        a: String,
        #[command(flatten)]
        prefix: PrefixArgs,
        #[arg(long, default_value_t = 3, value_parser = positive)]
        r_max: usize,
        #[arg(long, default_value_t = 6, value_parser = positive)]
        witness_bound: usize,
        #[arg(long, default_value_t = 3, value_parser = positive)]
        s: usize,
    },
    /// Expansions of the first m points reachable under partial isomorphisms.
    LogicAction {
        #[arg(long)]
        expansion: String,
        /// Expanded structure to act on (default: a limit prefix of the
        /// extended class).
        #[arg(long)]
        top_star: Option<String>,
        #[command(flatten)]
        prefix: PrefixArgs,
        #[arg(long, default_value_t = 1, value_parser = positive)]
        m: usize,
    },
    /// Tree of bad colorings over initial segments of a target.
    Tree {
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: String,
        #[arg(long)]
        top: String,
        #[arg(long, value_parser = positive)]
        depth: usize,
        #[arg(short = 'r', value_parser = positive)]
        r: usize,
        #[arg(short = 'k', value_parser = positive)]
        k: usize,
        #[arg(long, default_value_t = 1 << 20)]
        limit: usize,
    },
    /// Re-check the certificates in a saved JSON report.
    Verify {
        report: String,
    },
}

#[derive(Args, Clone)]
pub struct SetArgs {
    #[arg(long)]
    pub class: String,
    #[arg(long = "A")]
    pub a: String,
    /// Target (default: a limit prefix).
    #[arg(long)]
    pub top: Option<String>,
    #[command(flatten)]
    pub prefix: PrefixArgs,
    /// Keep embeddings with this order pattern, as 1-based ranks like 2,1
    /// (default: all embeddings).
    #[arg(long)]
    pub pattern: Option<String>,
    /// Use the complement of the set.
    #[arg(long)]
    pub complement: bool,
    #[arg(long, default_value_t = 3, value_parser = positive)]
    pub s: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INPUT as u8) } else { ExitCode::SUCCESS };
        }
    };
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
            eprintln!("warning: could not size the worker pool: {e}");
        }
    }
    let dir = if cli.no_cache { None } else { cli.cache_dir.clone() };
    let mut cache = cache::Cache::new(dir);
    let result = commands::run(&cli.cmd, &mut cache);
    for line in &cache.log {
        eprintln!("{line}");
    }
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            if cli.format == Format::Json {
                let o = Outcome::new(commands::name(&cli.cmd), "error", EXIT_INPUT, serde_json::json!({ "error": e.0 }), String::new());
                print!("{}", emit_json(&o.report));
            }
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    match cli.format {
        Format::Json => print!("{}", emit_json(&outcome.report)),
        Format::Text => print!("{}", outcome.text),
    }
    ExitCode::from(outcome.report.exit_code as u8)
}
