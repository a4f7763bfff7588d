use std::path::{Path, PathBuf};

use kdescan::kde::{BBox, DensityField};

use super::write_csv;
use crate::config::Resolver;
use crate::error::CliError;
use crate::input::{read_points, Coords};
use crate::KdegridArgs;

pub fn run(a: KdegridArgs) -> Result<(), CliError> {
    let mut r = Resolver::new("kdegrid", a.common.config.as_deref())?;
    let input = PathBuf::from(r.required::<String>("input", a.input)?);
    let output = PathBuf::from(r.required::<String>("output", a.output)?);
    let grid_size = r.value("grid-size", a.grid_size, 100usize)?;
    let padding = r.value("padding", a.padding, 3.0)?;
    r.finish()?;
    r.manifest.digest("input", &input)?;

    let table = read_points(&input)?;
    let h = write_grid(&table.coords, grid_size, padding, &output)?;
    r.manifest.write_beside(&output)?;
    println!("cells={} bandwidth={h}", grid_size * grid_size);
    Ok(())
}

/// Fits the field, writes a `grid_size` x `grid_size` grid covering the data
/// plus `padding` bandwidths, and returns the bandwidth.
pub fn write_grid(coords: &Coords, grid_size: usize, padding: f64, path: &Path) -> Result<f64, CliError> {
    if !padding.is_finite() || padding < 0.0 {
        return Err(CliError::usage(format!("padding must be finite and nonnegative, got {padding}")));
    }
    let (field, header) = match coords {
        Coords::Planar(p) => (DensityField::fit_locations(p)?, ["x", "y", "density"]),
        Coords::Geographic(p) => (DensityField::fit_locations(p)?, ["lon", "lat", "density"]),
    };
    let h = field.bandwidth();
    let mut min = [f64::INFINITY; 2];
    let mut max = [f64::NEG_INFINITY; 2];
    for z in field.standardized_sample() {
        for d in 0..2 {
            min[d] = min[d].min(z[d] - padding * h);
            max[d] = max[d].max(z[d] + padding * h);
        }
    }
    let bbox = BBox {
        min: field.unstandardize(min),
        max: field.unstandardize(max),
    };
    let grid = field.density_grid(bbox, [grid_size, grid_size])?;
    write_csv(
        path,
        &header,
        grid.iter().map(|(x, y, v)| [x.to_string(), y.to_string(), v.to_string()]),
    )?;
    Ok(h)
}
