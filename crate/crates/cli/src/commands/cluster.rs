use std::path::PathBuf;

use kdescan::clustering::knn_distance_profile;
use kdescan::ingestion::write_geojson;
use kdescan::{dbscan, pairwise_temporal, DbscanParams, Steepness};

use super::{kdegrid, spatial_matrix, weighted_matrix, write_csv, Mode};
use crate::config::Resolver;
use crate::error::CliError;
use crate::input::{read_points, Coords};
use crate::ClusterArgs;

pub fn run(a: ClusterArgs) -> Result<(), CliError> {
    let mut r = Resolver::new("cluster", a.common.config.as_deref())?;
    let input = PathBuf::from(r.required::<String>("input", a.input)?);
    let output = PathBuf::from(r.required::<String>("output", a.output)?);
    let mode = r.value("mode", a.mode, Mode::Weighted)?;
    let eps1 = r.required("eps1", a.eps1)?;
    let eps2 = r.optional("eps2", a.eps2)?;
    let min_pts = r.required("min-pts", a.min_pts)?;
    let steepness = match mode {
        Mode::Weighted => Some(r.value("steepness", a.steepness, Steepness::default())?),
        Mode::Vanilla => None,
    };
    let normalize = r.value("normalize-series", a.normalize_series.then_some(true), false)?;
    let geojson = r.optional::<String>("geojson", a.geojson)?.map(PathBuf::from);
    let grid_path = r.optional::<String>("density-grid", a.density_grid)?.map(PathBuf::from);
    let grid_size = match grid_path {
        Some(_) => r.value("grid-size", a.grid_size, 100usize)?,
        None => 0,
    };
    let knn_path = r.optional::<String>("knn-output", a.knn_output)?.map(PathBuf::from);
    let knn_k = match knn_path {
        Some(_) => r.value("knn-k", a.knn_k, min_pts.max(2) - 1)?,
        None => 0,
    };
    r.finish()?;
    r.manifest.digest("input", &input)?;

    let params = DbscanParams::new(eps1, eps2, min_pts)?;
    let table = read_points(&input)?;
    if geojson.is_some() && !table.coords.is_geographic() {
        return Err(CliError::usage("--geojson needs geographic (latitude/longitude) input"));
    }
    let temporal = match eps2 {
        Some(_) if table.series.is_empty() => {
            return Err(CliError::usage(format!(
                "--eps2 needs series columns, but {} has none",
                input.display()
            )))
        }
        Some(_) => Some(pairwise_temporal(&table.series, normalize)?),
        None => None,
    };

    let spatial = spatial_matrix(&table.coords)?;
    let mut curve = None;
    let matrix = match steepness {
        Some(st) => {
            let (m, cfg) = weighted_matrix(&table.coords, &spatial, st)?;
            curve = Some(cfg);
            m
        }
        None => spatial,
    };
    let clustering = dbscan(&matrix, temporal.as_ref(), &params)?;

    write_csv(
        &output,
        &["id", "cluster", "role"],
        (0..clustering.len()).map(|i| {
            [
                table.ids[i].clone(),
                clustering.labels()[i].to_string(),
                clustering.roles()[i].as_str().to_string(),
            ]
        }),
    )?;
    if let (Some(path), Coords::Geographic(locations)) = (&geojson, &table.coords) {
        write_geojson(&table.ids, locations, &clustering, path)?;
    }
    if let Some(path) = &grid_path {
        kdegrid::write_grid(&table.coords, grid_size, 3.0, path)?;
    }
    if let Some(path) = &knn_path {
        let profile = knn_distance_profile(&matrix, knn_k)?;
        super::knn::write_profile(&profile, path)?;
    }
    r.manifest.write_beside(&output)?;

    let mut summary = format!(
        "clusters={} outliers={} points={} mode={mode}",
        clustering.cluster_count(),
        clustering.noise_count(),
        clustering.len()
    );
    if temporal.is_some() {
        summary.push_str(" temporal=dtw");
    }
    if let Some(cfg) = curve {
        summary.push_str(&format!(" steepness={} midpoint={}", cfg.steepness(), cfg.midpoint()));
    }
    println!("{summary}");
    Ok(())
}
