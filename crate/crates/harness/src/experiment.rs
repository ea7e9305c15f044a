//! Parameter sweeps over random graphs.

use rayon::prelude::*;
use streamdfs::stream::{max_edges, n_log_n_edges, random_graph, Enforcement, InputError};
use streamdfs::{run, AlgoConfig, AlgoError, Algorithm};
use thiserror::Error;

use crate::rows::{Line, ResultRow, Summary};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepAxis {
    N,
    M,
    K,
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("trial count must be at least 1")]
    NoTrials,
    #[error("no algorithms selected")]
    NoAlgorithms,
    #[error("sweep has no points")]
    NoPoints,
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("{algorithm} on {dataset}: {source}")]
    Run {
        algorithm: Algorithm,
        dataset: String,
        source: AlgoError,
    },
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

/// Graph size and space parameter of one sweep point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Point {
    pub n: usize,
    pub m: usize,
    pub k: usize,
}

#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub axis: SweepAxis,
    /// Vertex count for the m and k sweeps.
    pub n: usize,
    /// Edge count for the n and k sweeps; `⌈n ln n⌉` when unset.
    pub m: Option<usize>,
    /// Space parameter for the n and m sweeps.
    pub k: usize,
    /// Overrides the built-in values of the swept axis.
    pub points: Option<Vec<usize>>,
    pub trials: usize,
    pub base_seed: u64,
    pub algorithms: Vec<Algorithm>,
    pub space_mult: usize,
    pub enforcement: Enforcement,
}

impl ExperimentSpec {
    pub fn new(axis: SweepAxis) -> Self {
        ExperimentSpec {
            axis,
            n: 1000,
            m: None,
            k: 10,
            points: None,
            trials: 10,
            base_seed: 0,
            algorithms: vec![
                Algorithm::Simp,
                Algorithm::Imprv,
                Algorithm::KPath,
                Algorithm::KLev,
            ],
            space_mult: AlgoConfig::DEFAULT_SPACE_MULT,
            enforcement: Enforcement::Warn,
        }
    }

    fn edges_for(&self, n: usize) -> usize {
        self.m.unwrap_or_else(|| n_log_n_edges(n))
    }

    pub fn points(&self) -> Vec<Point> {
        match self.axis {
            SweepAxis::N => {
                let ns = self.points.clone().unwrap_or_else(n_sweep);
                ns.into_iter()
                    .map(|n| Point {
                        n,
                        m: self.edges_for(n),
                        k: self.k,
                    })
                    .collect()
            }
            SweepAxis::M => {
                let ms = self.points.clone().unwrap_or_else(|| m_sweep(self.n));
                ms.into_iter()
                    .map(|m| Point {
                        n: self.n,
                        m,
                        k: self.k,
                    })
                    .collect()
            }
            SweepAxis::K => {
                let ks = self.points.clone().unwrap_or_else(|| k_sweep(self.n));
                ks.into_iter()
                    .map(|k| Point {
                        n: self.n,
                        m: self.edges_for(self.n),
                        k,
                    })
                    .collect()
            }
        }
    }
}

/// `100, 200, .., 1000`.
pub fn n_sweep() -> Vec<usize> {
    (1..=10).map(|i| 100 * i).collect()
}

/// 32 log-spaced edge counts from `n` to `n(n-1)/2`.
pub fn m_sweep(n: usize) -> Vec<usize> {
    let (lo, hi) = (n.max(1) as f64, max_edges(n) as f64);
    if hi <= lo {
        return vec![max_edges(n) as usize];
    }
    let mut ms: Vec<usize> = (0..32)
        .map(|i| (lo * (hi / lo).powf(i as f64 / 31.0)).round() as usize)
        .collect();
    ms.dedup();
    ms
}

/// Fibonacci-like values `1, 2, 3, 5, 8, ..` below `n`, then `n`.
pub fn k_sweep(n: usize) -> Vec<usize> {
    let mut ks = Vec::new();
    let (mut a, mut b) = (1, 2);
    while a < n {
        ks.push(a);
        (a, b) = (b, a + b);
    }
    ks.push(n.max(1));
    ks
}

/// Runs every trial of `spec` on a pool of `jobs` threads. Trial rows come out
/// grouped by point, then algorithm, then trial, each group followed by its
/// summary, independent of completion order.
pub fn run_experiment(spec: &ExperimentSpec, jobs: usize) -> Result<Vec<Line>, ExperimentError> {
    if spec.trials == 0 {
        return Err(ExperimentError::NoTrials);
    }
    if spec.algorithms.is_empty() {
        return Err(ExperimentError::NoAlgorithms);
    }
    let points = spec.points();
    if points.is_empty() {
        return Err(ExperimentError::NoPoints);
    }
    let tasks: Vec<(Point, usize)> = points
        .iter()
        .flat_map(|&p| (0..spec.trials).map(move |t| (p, t)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    let results: Vec<Result<Vec<ResultRow>, ExperimentError>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(p, trial)| run_trial(spec, p, trial))
            .collect()
    });

    let mut per_task = Vec::with_capacity(results.len());
    for r in results {
        per_task.push(r?);
    }
    let mut lines = Vec::new();
    for (pi, _) in points.iter().enumerate() {
        let block = &per_task[pi * spec.trials..(pi + 1) * spec.trials];
        for (ai, _) in spec.algorithms.iter().enumerate() {
            let rows: Vec<ResultRow> = block.iter().map(|trial| trial[ai].clone()).collect();
            let summary = Summary::of(&rows);
            lines.extend(rows.into_iter().map(Line::Trial));
            lines.push(Line::Summary(summary));
        }
    }
    Ok(lines)
}

fn run_trial(
    spec: &ExperimentSpec,
    p: Point,
    trial: usize,
) -> Result<Vec<ResultRow>, ExperimentError> {
    let seed = spec.base_seed + trial as u64;
    let g = random_graph(p.n, p.m, seed)?;
    let mut rows = Vec::with_capacity(spec.algorithms.len());
    for &algorithm in &spec.algorithms {
        let cfg = AlgoConfig {
            space_mult: spec.space_mult,
            enforcement: spec.enforcement,
            ..AlgoConfig::new(algorithm, p.k)
        };
        let out = run(&g, &cfg).map_err(|source| ExperimentError::Run {
            algorithm,
            dataset: g.name.clone(),
            source,
        })?;
        log::debug!("{} trial {trial}: {} passes", g.name, out.stats.passes);
        rows.push(ResultRow::new(&g, algorithm, p.k, Some(seed), &out));
    }
    Ok(rows)
}
