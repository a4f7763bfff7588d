use std::path::{Path, PathBuf};

use kdescan::clustering::{eps_for_noise_fraction, knn_distance_profile, suggest_eps};
use kdescan::{pairwise_temporal, Steepness};

use super::{spatial_matrix, weighted_matrix, write_csv, Matrix};
use crate::config::Resolver;
use crate::error::CliError;
use crate::input::read_points;
use crate::KnnArgs;

pub fn run(a: KnnArgs) -> Result<(), CliError> {
    let mut r = Resolver::new("knn", a.common.config.as_deref())?;
    let input = PathBuf::from(r.required::<String>("input", a.input)?);
    let output = PathBuf::from(r.required::<String>("output", a.output)?);
    let k = r.value("k", a.k, 3usize)?;
    let which = r.value("matrix", a.matrix, Matrix::Spatial)?;
    let steepness = match which {
        Matrix::Weighted => Some(r.value("steepness", a.steepness, Steepness::default())?),
        _ => None,
    };
    let normalize = match which {
        Matrix::Temporal => r.value("normalize-series", a.normalize_series.then_some(true), false)?,
        _ => false,
    };
    let noise_fraction = r.optional("noise-fraction", a.noise_fraction)?;
    r.finish()?;
    r.manifest.digest("input", &input)?;

    let table = read_points(&input)?;
    let matrix = match which {
        Matrix::Spatial => spatial_matrix(&table.coords)?,
        Matrix::Weighted => {
            let spatial = spatial_matrix(&table.coords)?;
            weighted_matrix(&table.coords, &spatial, steepness.unwrap_or_default())?.0
        }
        Matrix::Temporal => {
            if table.series.is_empty() {
                return Err(CliError::usage(format!("{} has no series columns", input.display())));
            }
            pairwise_temporal(&table.series, normalize)?
        }
    };
    let profile = knn_distance_profile(&matrix, k)?;
    write_profile(&profile, &output)?;
    r.manifest.write_beside(&output)?;

    let mut summary = format!("points={} k={k} knee={}", profile.len(), suggest_eps(&profile)?);
    if let Some(f) = noise_fraction {
        summary.push_str(&format!(" eps_at_noise_fraction={}", eps_for_noise_fraction(&profile, f)?));
    }
    println!("{summary}");
    Ok(())
}

pub fn write_profile(profile: &[f64], path: &Path) -> Result<(), CliError> {
    write_csv(
        path,
        &["rank", "distance"],
        profile.iter().enumerate().map(|(i, d)| [(i + 1).to_string(), d.to_string()]),
    )
}
