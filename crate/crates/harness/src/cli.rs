//! Command-line interface.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use streamdfs::stream::{ingest_edge_list, random_graph, Enforcement, GraphInput};
use streamdfs::tree::TreeError;
use streamdfs::{run, validate_dfs, AlgoConfig, Algorithm, DfsTree};
use thiserror::Error;

use crate::experiment::{run_experiment, ExperimentSpec, SweepAxis};
use crate::rows::{write_csv, Line, ResultRow};

#[derive(Debug, Parser)]
#[command(
    name = "streamdfs",
    version,
    about = "Semi-streaming DFS tree construction"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one algorithm on one graph and print a CSV row.
    Run(RunArgs),
    /// Sweep n, m or k over random graphs and write CSV with summaries.
    Experiment(ExperimentArgs),
    /// Check that a tree file is a DFS tree of a graph file.
    Validate(ValidateArgs),
}

/// `n,m,seed` for a random `G(n, m)` graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
}

impl FromStr for RandomSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [n, m, seed] = parts[..] else {
            return Err(format!("expected n,m,seed, got {s:?}"));
        };
        let num = |x: &str| x.parse::<u64>().map_err(|e| format!("{x:?}: {e}"));
        Ok(RandomSpec {
            n: num(n)? as usize,
            m: num(m)? as usize,
            seed: num(seed)?,
        })
    }
}

#[derive(Debug, Args)]
pub struct AlgoArgs {
    /// Space parameter k.
    #[arg(short = 'k', default_value_t = 1)]
    pub k: usize,
    /// Budget multiplier c (c·n·k stored edges for klev, c·n for the simple algorithms).
    #[arg(long, default_value_t = AlgoConfig::DEFAULT_SPACE_MULT)]
    pub space_mult: usize,
    /// Do not check the space budget.
    #[arg(long)]
    pub no_enforce: bool,
}

impl AlgoArgs {
    fn enforcement(&self) -> Enforcement {
        if self.no_enforce {
            Enforcement::Off
        } else {
            Enforcement::Warn
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub algo: Algorithm,
    /// Edge-list file (whitespace separated, `%` or `#` comments).
    #[arg(long, conflicts_with = "random", required_unless_present = "random")]
    pub input: Option<PathBuf>,
    /// Random graph `n,m,seed`.
    #[arg(long)]
    pub random: Option<RandomSpec>,
    #[command(flatten)]
    pub algo_args: AlgoArgs,
    /// Validate the output tree; exit 1 on failure.
    #[arg(long)]
    pub validate: bool,
    /// Write the tree as `vertex parent level` lines.
    #[arg(long)]
    pub tree_out: Option<PathBuf>,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long, value_enum)]
    pub sweep: SweepAxis,
    /// Comma-separated algorithms.
    #[arg(long, value_delimiter = ',', default_values_t = [Algorithm::Simp, Algorithm::Imprv, Algorithm::KPath, Algorithm::KLev])]
    pub algo: Vec<Algorithm>,
    /// Vertex count for the m and k sweeps.
    #[arg(short = 'n', default_value_t = 1000)]
    pub n: usize,
    /// Edge count for the n and k sweeps (default ⌈n ln n⌉).
    #[arg(short = 'm')]
    pub m: Option<usize>,
    /// Space parameter for the n and m sweeps.
    #[arg(short = 'k', default_value_t = 10)]
    pub k: usize,
    /// Comma-separated values of the swept axis, replacing the built-in ones.
    #[arg(long, value_delimiter = ',')]
    pub points: Option<Vec<usize>>,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    /// Base seed; trial i uses seed + i.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: available cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, default_value_t = AlgoConfig::DEFAULT_SPACE_MULT)]
    pub space_mult: usize,
    #[arg(long)]
    pub no_enforce: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Edge-list file the tree was built from.
    pub graph: PathBuf,
    /// Tree file as written by `run --tree-out`.
    pub tree: PathBuf,
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn load_graph(path: &Path) -> Result<GraphInput, GraphFileError> {
    let bytes = std::fs::read(path).map_err(|e| GraphFileError::Io(path.to_path_buf(), e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    ingest_edge_list(&bytes, &name)
        .map_err(|e| GraphFileError::Format(path.to_path_buf(), e.to_string()))
}

/// Returns the process exit code.
pub fn cmd_run(args: &RunArgs) -> Result<u8> {
    let (g, seed) = match (&args.input, args.random) {
        (Some(p), _) => (load_graph(p)?, None),
        (None, Some(r)) => (random_graph(r.n, r.m, r.seed)?, Some(r.seed)),
        (None, None) => bail!("one of --input or --random is required"),
    };
    let cfg = AlgoConfig {
        space_mult: args.algo_args.space_mult,
        enforcement: args.algo_args.enforcement(),
        ..AlgoConfig::new(args.algo, args.algo_args.k)
    };
    let out = run(&g, &cfg)?;
    if let Some(p) = &args.tree_out {
        std::fs::write(p, out.tree.to_text())
            .with_context(|| format!("writing {}", p.display()))?;
    }
    let row = ResultRow::new(&g, args.algo, args.algo_args.k, seed, &out);
    write_csv(open_out(args.out.as_deref())?, &[Line::Trial(row)])?;
    if args.validate {
        let v = validate_dfs(&g, &out.tree)?;
        if let Some(e) = v.first_violation {
            eprintln!("invalid DFS tree: edge {e} is a cross edge");
            return Ok(1);
        }
        log::info!("tree is a valid DFS tree");
    }
    Ok(0)
}

pub fn cmd_experiment(args: &ExperimentArgs) -> Result<u8> {
    let spec = ExperimentSpec {
        axis: args.sweep,
        n: args.n,
        m: args.m,
        k: args.k,
        points: args.points.clone(),
        trials: args.trials,
        base_seed: args.seed,
        algorithms: args.algo.clone(),
        space_mult: args.space_mult,
        enforcement: if args.no_enforce {
            Enforcement::Off
        } else {
            Enforcement::Warn
        },
    };
    let jobs = args
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let lines = run_experiment(&spec, jobs)?;
    write_csv(open_out(args.out.as_deref())?, &lines)?;
    Ok(0)
}

#[derive(Debug, Error)]
pub enum GraphFileError {
    #[error("reading {0}: {1}")]
    Io(PathBuf, io::Error),
    #[error("{0}: {1}")]
    Format(PathBuf, String),
}

#[derive(Debug, Error)]
pub enum TreeFileError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("tree has {0} roots, expected one")]
    Roots(usize),
    #[error("vertex {0} is outside the graph")]
    OutOfRange(usize),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Parses `vertex parent level` lines; the level column is ignored.
pub fn parse_tree(text: &str, n_aug: usize) -> Result<DfsTree, TreeFileError> {
    let mut parents = vec![None; n_aug];
    let mut roots = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let bad = |reason: &str| TreeFileError::Parse {
            line: i + 1,
            reason: reason.to_string(),
        };
        let mut f = line.split_whitespace();
        let v: usize = f
            .next()
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| bad("invalid vertex"))?;
        let p: i64 = f
            .next()
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| bad("invalid parent"))?;
        if v >= n_aug {
            return Err(TreeFileError::OutOfRange(v));
        }
        match usize::try_from(p) {
            Ok(p) if p >= n_aug => return Err(TreeFileError::OutOfRange(p)),
            Ok(p) => parents[v] = Some(p),
            Err(_) if p == -1 => roots.push(v),
            Err(_) => return Err(bad("parent must be a vertex or -1")),
        }
    }
    let [root] = roots[..] else {
        return Err(TreeFileError::Roots(roots.len()));
    };
    Ok(DfsTree::from_parents(root, &parents)?)
}

pub const EXIT_INVALID: u8 = 1;
pub const EXIT_FORMAT: u8 = 2;
pub const EXIT_NOT_SPANNING: u8 = 3;

pub fn cmd_validate(args: &ValidateArgs) -> u8 {
    let g = match load_graph(&args.graph) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_FORMAT;
        }
    };
    let text = match std::fs::read_to_string(&args.tree) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("reading {}: {e}", args.tree.display());
            return EXIT_FORMAT;
        }
    };
    let verdict = parse_tree(&text, g.n_aug()).and_then(|t| Ok(validate_dfs(&g, &t)?));
    match verdict {
        Ok(v) => match v.first_violation {
            None => {
                println!("valid");
                0
            }
            Some(e) => {
                println!("invalid: edge {e} is a cross edge");
                EXIT_INVALID
            }
        },
        Err(TreeFileError::Tree(e @ (TreeError::NotSpanning(_) | TreeError::AlreadyInTree(_)))) => {
            println!("not spanning: {e}");
            EXIT_NOT_SPANNING
        }
        Err(e) => {
            eprintln!("{}: {e}", args.tree.display());
            EXIT_FORMAT
        }
    }
}
