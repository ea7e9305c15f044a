//! Acceptance suite. Prints one `PASS`, `FAIL` or `SKIP` line per criterion
//! and exits nonzero if any criterion fails.

mod common;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use streamdfs::dsu::components_and_spanning_forest;
use streamdfs::restructure::{
    collect_new_cross_edges, find_path_vertex_v, maintain_dfs, reverse_and_rehang, EdgePool,
    PathSplit, SubgraphH,
};
use streamdfs::stream::{ingest_edge_list, max_edges, n_log_n_edges, random_graph, Edge};
use streamdfs::{run, validate_dfs, AlgoConfig, Algorithm, DfsTree, GraphInput, RunOutput};

use common::*;

enum Outcome {
    Pass,
    Fail,
    Skip,
}

struct Suite {
    failed: usize,
}

impl Suite {
    fn report(&mut self, id: u32, name: &str, outcome: Outcome, detail: String, took: Duration) {
        let tag = match outcome {
            Outcome::Pass => "PASS",
            Outcome::Fail => {
                self.failed += 1;
                "FAIL"
            }
            Outcome::Skip => "SKIP",
        };
        println!("{tag} {id} {name}: {detail} [{:.1}s]", took.as_secs_f64());
    }
}

fn outcome(ok: bool) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn is_valid(g: &GraphInput, t: &DfsTree) -> bool {
    validate_dfs(g, t).map(|v| v.valid).unwrap_or(false)
}

fn exec(g: &GraphInput, a: Algorithm, k: usize) -> RunOutput {
    run(g, &AlgoConfig::new(a, k)).unwrap_or_else(|e| panic!("{a} k={k} on {}: {e}", g.name))
}

const SWEEP_N: [usize; 4] = [10, 50, 100, 500];
const SWEEP_K: [usize; 4] = [1, 2, 5, 10];

/// The 200 instances of the validity, pass-law and space suites.
fn sweep_instances() -> Vec<GraphInput> {
    (0..200u64)
        .map(|i| {
            let n = SWEEP_N[i as usize % 4];
            let cap = max_edges(n) as usize;
            let m = match (i as usize / 4) % 4 {
                0 => n / 2,
                1 => n,
                2 => n_log_n_edges(n),
                _ => ((n as f64).powf(1.5).ceil() as usize).min(cap),
            };
            random_graph(n, m.min(cap), i).unwrap()
        })
        .collect()
}

#[derive(Default)]
struct SweepTally {
    runs: usize,
    invalid: Vec<String>,
    law: Vec<String>,
    space: Vec<String>,
}

fn sweep(instances: &[GraphInput]) -> SweepTally {
    let mut t = SweepTally::default();
    for g in instances {
        let n = g.n_original;
        let check = |a: Algorithm, k: usize, out: &RunOutput, t: &mut SweepTally| {
            t.runs += 1;
            if !is_valid(g, &out.tree) {
                t.invalid.push(format!("{a} k={k} {}", g.name));
            }
        };
        let simpo = exec(g, Algorithm::SimpO, 1);
        check(Algorithm::SimpO, 1, &simpo, &mut t);
        if simpo.stats.passes != n {
            t.law
                .push(format!("simpo {} passes on {}", simpo.stats.passes, g.name));
        }
        let simp = exec(g, Algorithm::Simp, 1);
        check(Algorithm::Simp, 1, &simp, &mut t);
        let imprv = exec(g, Algorithm::Imprv, 1);
        check(Algorithm::Imprv, 1, &imprv, &mut t);
        if imprv.stats.passes != imprv.stats.tree_height {
            t.law.push(format!(
                "imprv {} passes, height {} on {}",
                imprv.stats.passes, imprv.stats.tree_height, g.name
            ));
        }
        for k in SWEEP_K {
            let kp = exec(g, Algorithm::KPath, k);
            check(Algorithm::KPath, k, &kp, &mut t);
            if kp.stats.passes > 1 + n.div_ceil(k) {
                t.law.push(format!(
                    "kpath k={k} {} passes on {}",
                    kp.stats.passes, g.name
                ));
            }
            if kp.stats.peak_stored_edges > n * k + n {
                t.space.push(format!(
                    "kpath k={k} peak {} on {}",
                    kp.stats.peak_stored_edges, g.name
                ));
            }
            let lo = exec(g, Algorithm::KLevO, k);
            check(Algorithm::KLevO, k, &lo, &mut t);
            let h = lo.stats.tree_height;
            if lo.stats.passes > 1 + h.div_ceil(k) {
                t.law.push(format!(
                    "klevo k={k} {} passes, height {h} on {}",
                    lo.stats.passes, g.name
                ));
            }
            let lv = exec(g, Algorithm::KLev, k);
            check(Algorithm::KLev, k, &lv, &mut t);
            if lv.stats.passes > lo.stats.passes {
                t.law.push(format!(
                    "klev k={k} {} > klevo {} on {}",
                    lv.stats.passes, lo.stats.passes, g.name
                ));
            }
            for (a, out) in [(Algorithm::KLevO, &lo), (Algorithm::KLev, &lv)] {
                if out.stats.peak_stored_edges > 4 * n * k {
                    t.space.push(format!(
                        "{a} k={k} peak {} on {}",
                        out.stats.peak_stored_edges, g.name
                    ));
                }
            }
        }
    }
    t
}

fn first(v: &[String]) -> String {
    v.first()
        .map(|s| format!(", first: {s}"))
        .unwrap_or_default()
}

fn min_height(s: &mut Suite) {
    let start = Instant::now();
    let (mut graphs, mut short, mut aux, mut short_paths) = (0, Vec::new(), 0, Vec::new());
    let mut seed = 0u64;
    while graphs < 50 {
        seed += 1;
        let n = [50, 100, 200][seed as usize % 3];
        let m = n * (2 + seed as usize % 5);
        let g = random_graph(n, m, seed).unwrap();
        let active: Vec<bool> = (0..g.n_aug()).map(|v| v > 0).collect();
        if components_and_spanning_forest(g.edges.iter().copied(), &active).count() != 1 {
            continue;
        }
        graphs += 1;
        for a in Algorithm::ALL {
            for k in if a.uses_k() { &[1, 2, 5][..] } else { &[1][..] } {
                let out = run(&g, &AlgoConfig::new(a, *k).checked()).unwrap();
                // The dummy root adds one level above the component.
                if (out.stats.tree_height - 1) * n < m {
                    short.push(format!(
                        "{a} k={k} height {} on {}",
                        out.stats.tree_height, g.name
                    ));
                }
                if a == Algorithm::KPath {
                    aux += out.diagnostics.aux_trees;
                    if out.diagnostics.min_aux_path.is_some_and(|p| p < *k) {
                        short_paths.push(format!("k={k} on {}", g.name));
                    }
                }
            }
        }
    }
    let ok = short.is_empty() && short_paths.is_empty() && aux > 0;
    let detail = format!(
        "{graphs} connected graphs, {} trees below m/n, {aux} full-buffer auxiliary trees, {} paths shorter than k{}",
        short.len(),
        short_paths.len(),
        first(&short)
    );
    s.report(
        4,
        "min-height property",
        outcome(ok),
        detail,
        start.elapsed(),
    );
}

fn monotonic_fall(s: &mut Suite) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut calls, mut fell, mut broken) = (0, 0, 0);
    while calls < 1000 {
        let n = rng.gen_range(10..=100);
        let mut t = DfsTree::new(n, 0);
        for v in 1..n {
            t.attach(v, rng.gen_range(0..v)).unwrap();
        }
        let mut h = SubgraphH::new(n);
        for _ in 0..rng.gen_range(1..60) {
            let e = Edge::new(rng.gen_range(0..n), rng.gen_range(0..n));
            if e.u == e.v || t.parent(e.u) == Some(e.v) || t.parent(e.v) == Some(e.u) {
                continue;
            }
            let Some(id) = h.insert(e) else { continue };
            let before: Vec<usize> = (0..n).map(|v| t.level(v)).collect();
            maintain_dfs(&mut t, &mut h, id);
            calls += 1;
            fell += (0..n).filter(|&v| t.level(v) < before[v]).count();
            let stored: Vec<(usize, usize)> = h.edges().map(|e| (e.u, e.v)).collect();
            let mut all = stored;
            all.extend(
                (1..n)
                    .map(|v| (v, t.parent(v).unwrap()))
                    .filter(|&(_, p)| p != 0),
            );
            if !is_valid(&graph(n - 1, &all), &t) {
                broken += 1;
            }
        }
    }
    let mut klev_runs = 0;
    let mut diag_fail = Vec::new();
    for seed in 0..30u64 {
        let n = [50, 100, 300][seed as usize % 3];
        let g = random_graph(n, n_log_n_edges(n), seed).unwrap();
        for a in [Algorithm::KLevO, Algorithm::KLev] {
            for k in [1, 2, 5] {
                let out = run(&g, &AlgoConfig::new(a, k).checked()).unwrap();
                klev_runs += 1;
                let d = &out.diagnostics;
                if d.monotonic_violations + d.stored_cross_edges > 0 || !is_valid(&g, &out.tree) {
                    diag_fail.push(format!("{a} k={k} on {}", g.name));
                }
            }
        }
    }
    let ok = fell == 0 && broken == 0 && diag_fail.is_empty();
    let detail = format!(
        "{calls} maintain_dfs calls: {fell} level decreases, {broken} invalid (H, T); {klev_runs} checked level runs: {} with violations{}",
        diag_fail.len(),
        first(&diag_fail)
    );
    s.report(5, "monotonic fall", outcome(ok), detail, start.elapsed());
}

fn oracles(s: &mut Suite) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut dsu_bad = 0;
    for i in 0..100u64 {
        let n = rng.gen_range(2..=200);
        let m = rng.gen_range(0..=(2 * n).min(max_edges(n) as usize));
        let g = random_graph(n, m, 1000 + i).unwrap();
        let active: Vec<bool> = (0..g.n_aug()).map(|v| v > 0 && rng.gen_bool(0.9)).collect();
        let c = components_and_spanning_forest(g.edges.iter().copied(), &active);
        let oracle = bfs_components(g.n_aug(), &g.edges, &active);
        let same = (0..g.n_aug()).all(|u| {
            (0..g.n_aug()).all(|v| {
                !active[u] || !active[v] || (c.label[u] == c.label[v]) == (oracle[u] == oracle[v])
            })
        });
        if !same {
            dsu_bad += 1;
        }
    }
    let (mut reversals, mut cross_bad) = (0, 0);
    while reversals < 100 {
        let n = rng.gen_range(4..=80);
        let mut t = DfsTree::new(n, 0);
        for v in 1..n {
            t.attach(v, rng.gen_range(0..v)).unwrap();
        }
        let mut h = SubgraphH::new(n);
        for _ in 0..3 * n {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a != b
                && t.parent(a) != Some(b)
                && t.parent(b) != Some(a)
                && naive_is_dfs(&t, [Edge::new(a, b)])
            {
                let _ = h.insert(Edge::new(a, b));
            }
        }
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a == b {
            continue;
        }
        let (x, y, PathSplit::Cross { v, .. }) = find_path_vertex_v(&t, a, b) else {
            continue;
        };
        let moved = reverse_and_rehang(&mut t, x, y, v);
        reversals += 1;
        let mut found = collect_new_cross_edges(&t, &mut h, &moved, &mut EdgePool::default());
        found.sort_unstable();
        let oracle: Vec<_> = h
            .ids()
            .filter(|&id| !naive_is_dfs(&t, [h.edge(id)]))
            .collect();
        if found != oracle {
            cross_bad += 1;
        }
    }
    let detail = format!(
        "DSU vs BFS: {dsu_bad} of 100 partitions differ; cross-edge collection vs full scan: {cross_bad} of {reversals} reversals differ"
    );
    s.report(
        6,
        "oracle equivalence",
        outcome(dsu_bad == 0 && cross_bad == 0),
        detail,
        start.elapsed(),
    );
}

fn mean(v: &[usize]) -> f64 {
    v.iter().sum::<usize>() as f64 / v.len() as f64
}

fn random_reproduction(s: &mut Suite) {
    let start = Instant::now();
    let n = 1000;
    let m = n_log_n_edges(n);
    let (mut kpath, mut klev, mut invalid) = (Vec::new(), Vec::new(), 0);
    for seed in 0..20 {
        let g = random_graph(n, m, seed).unwrap();
        for (a, passes) in [(Algorithm::KPath, &mut kpath), (Algorithm::KLev, &mut klev)] {
            let out = exec(&g, a, 10);
            if !is_valid(&g, &out.tree) {
                invalid += 1;
            }
            passes.push(out.stats.passes);
        }
    }
    let took = start.elapsed();
    let (mk, ml) = (mean(&kpath), mean(&klev));
    let ok = (2.0..=3.5).contains(&mk)
        && (3.0..=4.5).contains(&ml)
        && invalid == 0
        && took < Duration::from_secs(60);
    let detail = format!(
        "n={n} m={m} k=10, 20 trials: mean kpath passes {mk:.2} (want 2..3.5), mean klev passes {ml:.2} (want 3..4.5), {invalid} invalid trees"
    );
    s.report(7, "random-graph reproduction", outcome(ok), detail, took);
}

fn workspace_file(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(rel)
}

fn load(path: &PathBuf) -> Option<GraphInput> {
    let bytes = std::fs::read(path).ok()?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    ingest_edge_list(&bytes, &name).ok()
}

fn real_graph(s: &mut Suite) {
    let start = Instant::now();
    let path = std::env::var_os("DFS_STREAM_CU")
        .map(PathBuf::from)
        .unwrap_or_else(|| workspace_file("data/cu.txt"));
    let Some(g) = load(&path) else {
        let detail = format!(
            "dataset not found at {} (set DFS_STREAM_CU)",
            path.display()
        );
        s.report(
            8,
            "real-graph spot check",
            Outcome::Skip,
            detail,
            start.elapsed(),
        );
        return;
    };
    let kp = exec(&g, Algorithm::KPath, 5);
    let kl = exec(&g, Algorithm::KLev, 1);
    let valid = is_valid(&g, &kp.tree) && is_valid(&g, &kl.tree);
    let ok = kp.stats.passes <= 3 && kl.stats.passes <= 4 && valid;
    let detail = format!(
        "{} n={} m={}: kpath k=5 {} passes (want <= 3), klev k=1 {} passes (want <= 4), valid {valid}",
        g.name,
        g.n_original,
        g.m(),
        kp.stats.passes,
        kl.stats.passes
    );
    s.report(
        8,
        "real-graph spot check",
        outcome(ok),
        detail,
        start.elapsed(),
    );
}

fn large_smoke(s: &mut Suite) {
    let start = Instant::now();
    let mut graphs = vec![random_graph(2000, n_log_n_edges(2000), 9).unwrap()];
    if let Some(list) = std::env::var_os("DFS_STREAM_GRAPHS") {
        for p in std::env::split_paths(&list) {
            match load(&p) {
                Some(g) if g.n_original > 1000 => graphs.push(g),
                Some(_) => {}
                None => println!("     cannot read {}", p.display()),
            }
        }
    }
    let mut ok = true;
    let mut parts = Vec::new();
    for g in &graphs {
        let simp = exec(g, Algorithm::Simp, 1).stats.passes;
        let kp = exec(g, Algorithm::KPath, 10);
        let kl = exec(g, Algorithm::KLev, 10);
        let valid = is_valid(g, &kp.tree) && is_valid(g, &kl.tree);
        ok &= valid && kp.stats.passes * 10 <= simp && kl.stats.passes * 10 <= simp;
        parts.push(format!(
            "{}: simp {simp}, kpath {}, klev {} (want <= {})",
            g.name,
            kp.stats.passes,
            kl.stats.passes,
            simp / 10
        ));
    }
    s.report(
        9,
        "large-graph smoke run, k=10",
        outcome(ok),
        parts.join("; "),
        start.elapsed(),
    );
}

fn main() -> ExitCode {
    let mut s = Suite { failed: 0 };

    let start = Instant::now();
    let instances = sweep_instances();
    let t = sweep(&instances);
    let took = start.elapsed();
    s.report(
        1,
        "validity suite",
        outcome(t.invalid.is_empty()),
        format!(
            "{} runs on {} instances, {} invalid{}",
            t.runs,
            instances.len(),
            t.invalid.len(),
            first(&t.invalid)
        ),
        took,
    );
    s.report(
        2,
        "pass-law suite",
        outcome(t.law.is_empty()),
        format!("{} violations{}", t.law.len(), first(&t.law)),
        took,
    );
    s.report(
        3,
        "space suite",
        outcome(t.space.is_empty()),
        format!("{} violations{}", t.space.len(), first(&t.space)),
        took,
    );
    min_height(&mut s);
    monotonic_fall(&mut s);
    oracles(&mut s);
    random_reproduction(&mut s);
    real_graph(&mut s);
    large_smoke(&mut s);

    if s.failed == 0 {
        println!("acceptance: all criteria met");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", s.failed);
        ExitCode::FAILURE
    }
}
