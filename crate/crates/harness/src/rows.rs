//! CSV result rows and per-point summaries.

use std::io::Write;

use streamdfs::{Algorithm, GraphInput, RunOutput};

pub const HEADER: [&str; 11] = [
    "dataset",
    "n",
    "m",
    "algorithm",
    "k",
    "passes",
    "peak_stored_edges",
    "tree_height",
    "edges_scanned",
    "seed",
    "wall_time",
];

/// One algorithm run. `k` is empty for algorithms without a space parameter,
/// `seed` is empty for file inputs. `wall_time` is in seconds.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub dataset: String,
    pub n: usize,
    pub m: usize,
    pub algorithm: Algorithm,
    pub k: Option<usize>,
    pub passes: usize,
    pub peak_stored_edges: usize,
    pub tree_height: usize,
    pub edges_scanned: u64,
    pub seed: Option<u64>,
    pub wall_time: f64,
}

impl ResultRow {
    pub fn new(
        g: &GraphInput,
        algorithm: Algorithm,
        k: usize,
        seed: Option<u64>,
        out: &RunOutput,
    ) -> Self {
        ResultRow {
            dataset: g.name.clone(),
            n: g.n_original,
            m: g.m(),
            algorithm,
            k: algorithm.uses_k().then_some(k),
            passes: out.stats.passes,
            peak_stored_edges: out.stats.peak_stored_edges,
            tree_height: out.stats.tree_height,
            edges_scanned: out.stats.edges_scanned,
            seed,
            wall_time: out.stats.wall_time.as_secs_f64(),
        }
    }

    fn record(&self) -> [String; 11] {
        [
            self.dataset.clone(),
            self.n.to_string(),
            self.m.to_string(),
            self.algorithm.to_string(),
            opt(self.k),
            self.passes.to_string(),
            self.peak_stored_edges.to_string(),
            self.tree_height.to_string(),
            self.edges_scanned.to_string(),
            opt(self.seed),
            format!("{:.6}", self.wall_time),
        ]
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Mean and standard deviation over the trials of one point and algorithm.
#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub dataset: String,
    pub n: usize,
    pub m: usize,
    pub algorithm: Algorithm,
    pub k: Option<usize>,
    pub trials: usize,
    /// passes, peak_stored_edges, tree_height, edges_scanned, wall_time
    pub mean: [f64; 5],
    pub std: [f64; 5],
}

impl Summary {
    /// Summarizes rows that share dataset parameters and algorithm.
    pub fn of(rows: &[ResultRow]) -> Summary {
        let first = rows.first().expect("at least one trial");
        let cols: Vec<[f64; 5]> = rows
            .iter()
            .map(|r| {
                [
                    r.passes as f64,
                    r.peak_stored_edges as f64,
                    r.tree_height as f64,
                    r.edges_scanned as f64,
                    r.wall_time,
                ]
            })
            .collect();
        let t = rows.len() as f64;
        let mut mean = [0.0; 5];
        let mut std = [0.0; 5];
        for i in 0..5 {
            mean[i] = cols.iter().map(|c| c[i]).sum::<f64>() / t;
            if rows.len() > 1 {
                let ss: f64 = cols.iter().map(|c| (c[i] - mean[i]).powi(2)).sum();
                std[i] = (ss / (t - 1.0)).sqrt();
            }
        }
        Summary {
            dataset: first.dataset.clone(),
            n: first.n,
            m: first.m,
            algorithm: first.algorithm,
            k: first.k,
            trials: rows.len(),
            mean,
            std,
        }
    }

    fn records(&self) -> [[String; 11]; 2] {
        let row = |label: &str, v: &[f64; 5]| {
            [
                self.dataset.clone(),
                self.n.to_string(),
                self.m.to_string(),
                self.algorithm.to_string(),
                opt(self.k),
                format!("{:.4}", v[0]),
                format!("{:.4}", v[1]),
                format!("{:.4}", v[2]),
                format!("{:.4}", v[3]),
                label.to_string(),
                format!("{:.6}", v[4]),
            ]
        };
        [row("mean", &self.mean), row("std", &self.std)]
    }
}

/// A trial row or a summary, in output order.
#[derive(Clone, Debug, PartialEq)]
pub enum Line {
    Trial(ResultRow),
    Summary(Summary),
}

pub fn write_csv<W: Write>(out: W, lines: &[Line]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for line in lines {
        match line {
            Line::Trial(r) => w.write_record(r.record())?,
            Line::Summary(s) => {
                for rec in s.records() {
                    w.write_record(rec)?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}
