pub mod cluster;
pub mod eval;
pub mod ingest;
pub mod kdegrid;
pub mod knn;
pub mod simulate;
pub mod table1;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use kdescan::simulation::{square_centers, MixtureSpec};
use kdescan::{pairwise_spatial, point_densities, weight_matrix, DistanceMatrix, PointDensities};
use kdescan::{Steepness, WeightConfig};

use crate::config::Resolver;
use crate::error::{csv_error, io_error, CliError};
use crate::input::Coords;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Vanilla,
    Weighted,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "vanilla" => Ok(Mode::Vanilla),
            "weighted" => Ok(Mode::Weighted),
            _ => Err(format!("expected `vanilla` or `weighted`, got {s:?}")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Vanilla => "vanilla",
            Mode::Weighted => "weighted",
        })
    }
}

/// Which distance matrix a k-distance profile is taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Matrix {
    Spatial,
    Weighted,
    Temporal,
}

impl FromStr for Matrix {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "spatial" => Ok(Matrix::Spatial),
            "weighted" => Ok(Matrix::Weighted),
            "temporal" => Ok(Matrix::Temporal),
            _ => Err(format!("expected `spatial`, `weighted` or `temporal`, got {s:?}")),
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Matrix::Spatial => "spatial",
            Matrix::Weighted => "weighted",
            Matrix::Temporal => "temporal",
        })
    }
}

/// Sorted, deduplicated seeds written as ranges and lists (`1-20`, `3,7,10-12`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedList(pub Vec<u64>);

impl FromStr for SeedList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut seeds = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let bad = || format!("bad seed item {part:?}; expected N or A-B");
            match part.split_once('-') {
                Some((a, b)) => {
                    let (a, b): (u64, u64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
                    if a > b {
                        return Err(format!("empty seed range {part:?}"));
                    }
                    seeds.extend(a..=b);
                }
                None => seeds.push(part.parse().map_err(|_| bad())?),
            }
        }
        seeds.sort_unstable();
        seeds.dedup();
        if seeds.is_empty() {
            return Err("no seeds given".into());
        }
        Ok(SeedList(seeds))
    }
}

impl fmt::Display for SeedList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let start = self.0[i];
            let mut end = start;
            while i + 1 < self.0.len() && self.0[i + 1] == end + 1 {
                i += 1;
                end += 1;
            }
            parts.push(if start == end { start.to_string() } else { format!("{start}-{end}") });
            i += 1;
        }
        f.write_str(&parts.join(","))
    }
}

/// Mixture parameters shared by `simulate` and `table1`.
fn mixture_spec(r: &mut Resolver, a: MixtureFlags, seed: u64) -> Result<MixtureSpec, CliError> {
    let d = MixtureSpec::with_seed(seed);
    let side = r.value("side", a.side, 6.0)?;
    if !side.is_finite() || side < 0.0 {
        return Err(CliError::usage(format!("side must be finite and nonnegative, got {side}")));
    }
    let spec = MixtureSpec {
        centers: square_centers(side),
        per_component: r.value("per-component", a.per_component, d.per_component)?,
        sigma_wide: r.value("sigma-wide", a.sigma_wide, d.sigma_wide)?,
        sigma_tight: r.value("sigma-tight", a.sigma_tight, d.sigma_tight)?,
        seed,
    };
    spec.validate()?;
    Ok(spec)
}

pub struct MixtureFlags {
    pub per_component: Option<usize>,
    pub sigma_wide: Option<f64>,
    pub sigma_tight: Option<f64>,
    pub side: Option<f64>,
}

fn spatial_matrix(coords: &Coords) -> Result<DistanceMatrix, CliError> {
    Ok(match coords {
        Coords::Planar(p) => pairwise_spatial(p)?,
        Coords::Geographic(p) => pairwise_spatial(p)?,
    })
}

fn densities(coords: &Coords) -> Result<PointDensities, CliError> {
    Ok(match coords {
        Coords::Planar(p) => point_densities(p)?.1,
        Coords::Geographic(p) => point_densities(p)?.1,
    })
}

/// Weighted matrix plus the resolved curve.
fn weighted_matrix(
    coords: &Coords,
    spatial: &DistanceMatrix,
    steepness: Steepness,
) -> Result<(DistanceMatrix, WeightConfig), CliError> {
    let dens = densities(coords)?;
    let cfg = WeightConfig::for_densities(&dens, steepness)?;
    Ok((weight_matrix(spatial, &dens, &cfg)?, cfg))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>, CliError> {
    let file = std::fs::File::create(path).map_err(io_error(path))?;
    Ok(csv::Writer::from_writer(file))
}

/// Writes a header and rows to a CSV file.
fn write_csv<I, R>(path: &Path, header: &[&str], rows: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv_writer(path)?;
    w.write_record(header).map_err(csv_error(path))?;
    for row in rows {
        w.write_record(row).map_err(csv_error(path))?;
    }
    w.flush().map_err(io_error(path))
}
