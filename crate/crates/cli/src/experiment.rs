//! Experiment sweeps: deterministic data series written as CSV plus a
//! gnuplot-friendly `.dat` file and a replayable manifest.
//!
//! `results.csv` carries the fixed columns `n,e,bound,ratio,seed,wall_ms`.
//! Everything except `wall_ms` is a pure function of (suite, seed, scale);
//! the timing column is measured and therefore excluded from the
//! byte-determinism contract, which `results.dat` and `manifest.json`
//! satisfy in full.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Result};
use num_traits::ToPrimitive;

use boxdim::bounds::bound_value;
use boxdim::constructions::{dyadic_k22free_generator, lines3d_generator};
use boxdim::graph::incidence_graph;
use boxdim::random::{random_matching_free_instance, rng_from_seed};

use crate::manifest::RunManifest;
use crate::write_atomic;

pub const SUITES: &[&str] = &["dyadic-density", "lines-density", "numedges-soundness"];

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub n: usize,
    pub e: usize,
    pub bound: String,
    pub ratio: f64,
    pub seed: u64,
    pub wall_ms: u128,
}

#[derive(Debug)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub csv_path: PathBuf,
    pub dat_path: PathBuf,
    pub manifest_path: PathBuf,
}

/// Runs a named suite and writes `results.csv`, `results.dat` and
/// `manifest.json` into `out_dir`.
pub fn run_sweep(
    suite: &str,
    seed: u64,
    max_scale: Option<usize>,
    out_dir: &Path,
) -> Result<SweepOutput> {
    std::fs::create_dir_all(out_dir)?;
    let rows = match suite {
        "dyadic-density" => dyadic_density_rows(seed, max_scale.unwrap_or(10))?,
        "lines-density" => lines_density_rows(seed, max_scale.unwrap_or(6)),
        "numedges-soundness" => numedges_rows(seed, max_scale.unwrap_or(256)),
        other => bail!("unknown suite {other:?} (expected one of {SUITES:?})"),
    };

    let csv_path = out_dir.join("results.csv");
    let mut csv = String::from("n,e,bound,ratio,seed,wall_ms\n");
    for r in &rows {
        writeln!(
            csv,
            "{},{},{},{:.6},{},{}",
            r.n, r.e, r.bound, r.ratio, r.seed, r.wall_ms
        )
        .expect("string write");
    }
    write_atomic(&csv_path, csv.as_bytes())?;

    let dat_path = out_dir.join("results.dat");
    let mut dat = format!("# suite: {suite}\n# columns: n e bound ratio\n");
    for r in &rows {
        writeln!(dat, "{} {} {} {:.6}", r.n, r.e, r.bound, r.ratio).expect("string write");
    }
    write_atomic(&dat_path, dat.as_bytes())?;

    let manifest_path = out_dir.join("manifest.json");
    let mut manifest = RunManifest::new("experiment sweep")
        .param("suite", suite)
        .seed(seed)
        .output(&csv_path)
        .output(&dat_path);
    if let Some(s) = max_scale {
        manifest = manifest.param("max_scale", s);
    }
    manifest.write(&manifest_path)?;

    Ok(SweepOutput {
        rows,
        csv_path,
        dat_path,
        manifest_path,
    })
}

/// Dyadic generator density curve: the generator re-verifies
/// K_{2,2}-freeness on every call, so a row existing means the scale passed.
/// `bound` is `n * ceil(log2 n)` and `ratio = e / bound`.
fn dyadic_density_rows(seed: u64, max_m: usize) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for m in 1..=max_m {
        let start = Instant::now();
        let config = dyadic_k22free_generator(m)?;
        let g = incidence_graph(&config);
        let n = config.points.len() + config.rects.len();
        let e = g.edge_count();
        let bound = n * boxdim::bounds::ceil_log2(n) as usize;
        rows.push(SweepRow {
            n,
            e,
            bound: bound.to_string(),
            ratio: e as f64 / bound as f64,
            seed,
            wall_ms: start.elapsed().as_millis(),
        });
    }
    Ok(rows)
}

/// Skew-lines construction: `e` against the `n^(4/3)` reference curve.
fn lines_density_rows(seed: u64, max_k: usize) -> Vec<SweepRow> {
    let mut rows = Vec::new();
    for k in 2..=max_k {
        let start = Instant::now();
        let (_, g) = lines3d_generator(k);
        let n = g.n();
        let e = g.edge_count();
        let reference = (n as f64).powf(4.0 / 3.0);
        rows.push(SweepRow {
            n,
            e,
            bound: format!("{reference:.3}"),
            ratio: e as f64 / reference,
            seed,
            wall_ms: start.elapsed().as_millis(),
        });
    }
    rows
}

/// Randomized counterexample search against the certified closed form for
/// d = 2, t = 2: every generated valid instance must stay under the bound.
fn numedges_rows(seed: u64, max_n: usize) -> Vec<SweepRow> {
    let mut rows = Vec::new();
    let mut n = 16usize;
    while n <= max_n.max(16) {
        for inst in 0..10u64 {
            let inst_seed = seed
                .wrapping_mul(0x9e37_79b9_7f4a_7c15)
                .wrapping_add((n as u64) << 8)
                .wrapping_add(inst);
            let start = Instant::now();
            let mut rng = rng_from_seed(inst_seed);
            let (_, g) = random_matching_free_instance(&mut rng, n, 2, 2, 3 * n);
            let e = g.edge_count();
            let bound = bound_value(n, 2, 2);
            let ratio = e as f64 / bound.to_f64().unwrap_or(f64::INFINITY);
            rows.push(SweepRow {
                n,
                e,
                bound: bound.to_string(),
                ratio,
                seed: inst_seed,
                wall_ms: start.elapsed().as_millis(),
            });
        }
        n *= 2;
    }
    rows
}
