use std::path::PathBuf;

use kdescan::simulation::{run_table1, Table1Run, WeightedParams, TABLE1_HEADER};
use kdescan::{DbscanParams, KMeansParams, Steepness};
use rayon::prelude::*;

use super::{mixture_spec, MixtureFlags, SeedList};
use crate::config::Resolver;
use crate::error::{io_error, CliError};
use crate::Table1Args;

pub fn run(a: Table1Args) -> Result<(), CliError> {
    let mut r = Resolver::new("table1", a.common.config.as_deref())?;
    let output = PathBuf::from(r.required::<String>("output", a.output)?);
    let seeds = r.value("seeds", a.seeds, SeedList((1..=20).collect()))?;
    let eps = r.value("eps", a.eps, 0.3)?;
    let min_pts = r.value("min-pts", a.min_pts, 6usize)?;
    let steepness = r.value("steepness", a.steepness, Steepness::default())?;
    let k = r.value("k", a.k, 4usize)?;
    let restarts = r.value("kmeans-restarts", a.kmeans_restarts, 1usize)?;
    let max_iters = r.value("kmeans-max-iters", a.kmeans_max_iters, 100usize)?;
    let flags = MixtureFlags {
        per_component: a.per_component,
        sigma_wide: a.sigma_wide,
        sigma_tight: a.sigma_tight,
        side: a.side,
    };
    // Validate the mixture once up front; each seed gets its own copy.
    let template = mixture_spec(&mut r, flags, 0)?;
    r.finish()?;

    let db = DbscanParams::spatial(eps, min_pts)?;
    let weighted = WeightedParams {
        dbscan: db,
        steepness,
    };
    KMeansParams::new(k, max_iters, restarts, 0)?;

    let mut runs: Vec<Table1Run> = seeds
        .0
        .par_iter()
        .map(|&seed| {
            let spec = kdescan::simulation::MixtureSpec {
                seed,
                ..template.clone()
            };
            let km = KMeansParams::new(k, max_iters, restarts, seed)?;
            run_table1(&spec, &db, &weighted, &km)
        })
        .collect::<Result<_, _>>()?;
    runs.sort_by_key(|run| run.seed);

    let mut text = format!("{TABLE1_HEADER}\n");
    for run in &runs {
        for row in run.csv_rows() {
            text.push_str(&row);
            text.push('\n');
        }
    }
    std::fs::write(&output, text).map_err(io_error(&output))?;
    r.manifest.write_beside(&output)?;

    let n = runs.len();
    let count = |f: &dyn Fn(&Table1Run) -> bool| runs.iter().filter(|run| f(run)).count();
    let rate = |c: usize| format!("{c}/{n} ({:.0}%)", 100.0 * c as f64 / n as f64);
    println!("seeds={n} rows={}", 3 * n);
    println!(
        "weighted fewer outliers than dbscan: {}",
        rate(count(&|r| r.weighted.outliers < r.dbscan.outliers))
    );
    println!(
        "weighted more correct than dbscan: {}",
        rate(count(&|r| r.weighted.correct > r.dbscan.correct))
    );
    println!(
        "weighted better on both: {}",
        rate(count(&|r| r.weighted.outliers < r.dbscan.outliers && r.weighted.correct > r.dbscan.correct))
    );
    println!(
        "weighted more correct than kmeans: {}",
        rate(count(&|r| r.weighted.correct > r.kmeans.correct))
    );
    Ok(())
}
