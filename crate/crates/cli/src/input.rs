//! Reading point tables and label files.

use std::path::Path;

use kdescan::{Error, GeoPoint, PlanarPoint, Series};

use crate::error::{csv_error, io_error, CliError};

const ID_COLUMNS: [&str; 5] = ["id", "practice", "practicecode", "practice_code", "code"];
const IGNORED_COLUMNS: [&str; 3] = ["postcode", "truth", "name"];

#[derive(Debug, Clone, PartialEq)]
pub enum Coords {
    Planar(Vec<PlanarPoint>),
    Geographic(Vec<GeoPoint>),
}

impl Coords {
    pub fn is_geographic(&self) -> bool {
        matches!(self, Coords::Geographic(_))
    }
}

/// Sites with identifiers, coordinates and (possibly empty) monthly series.
#[derive(Debug, Clone, PartialEq)]
pub struct PointTable {
    pub ids: Vec<String>,
    pub coords: Coords,
    pub series_columns: Vec<String>,
    pub series: Vec<Series>,
}

fn reader(path: &Path) -> Result<csv::Reader<std::fs::File>, CliError> {
    let file = std::fs::File::open(path).map_err(io_error(path))?;
    Ok(csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file))
}

fn find(headers: &[String], names: &[&str]) -> Option<usize> {
    headers.iter().position(|h| names.contains(&h.as_str()))
}

fn parse_f64(path: &Path, row: usize, column: &str, raw: &str) -> Result<f64, CliError> {
    raw.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| {
            CliError::Core(Error::Parse {
                path: path.to_path_buf(),
                row,
                column: column.to_string(),
                reason: format!("{raw:?} is not a finite number"),
            })
        })
}

/// Planar input has `x` and `y` columns; geographic input has `lat`/`latitude`
/// and `lon`/`lng`/`longitude`. An `id`-like column names the rows; every
/// other column except postcode, truth and name is one month of the series.
pub fn read_points(path: &Path) -> Result<PointTable, CliError> {
    let mut rdr = reader(path)?;
    let original: Vec<String> = rdr.headers().map_err(csv_error(path))?.iter().map(str::to_string).collect();
    let headers: Vec<String> = original.iter().map(|h| h.to_lowercase()).collect();

    let planar = (find(&headers, &["x"]), find(&headers, &["y"]));
    let geo = (
        find(&headers, &["lat", "latitude"]),
        find(&headers, &["lon", "lng", "longitude"]),
    );
    let (a, b, geographic) = match (planar, geo) {
        ((Some(_), Some(_)), (Some(_), Some(_))) => {
            return Err(CliError::usage(format!(
                "{}: has both x/y and latitude/longitude columns",
                path.display()
            )))
        }
        ((Some(x), Some(y)), _) => (x, y, false),
        (_, (Some(lat), Some(lon))) => (lat, lon, true),
        _ => {
            return Err(CliError::Core(Error::MissingColumn {
                path: path.to_path_buf(),
                column: "x,y or latitude,longitude".into(),
            }))
        }
    };
    let id_col = find(&headers, &ID_COLUMNS);
    let series_idx: Vec<usize> = (0..headers.len())
        .filter(|&i| i != a && i != b && Some(i) != id_col && !IGNORED_COLUMNS.contains(&headers[i].as_str()))
        .collect();

    let mut ids = Vec::new();
    let mut planar_pts = Vec::new();
    let mut geo_pts = Vec::new();
    let mut series = Vec::new();
    for (n, record) in rdr.records().enumerate() {
        let record = record.map_err(csv_error(path))?;
        let row = record.position().map_or(n + 2, |p| p.line() as usize);
        let field = |i: usize| record.get(i).unwrap_or("");
        let va = parse_f64(path, row, &original[a], field(a))?;
        let vb = parse_f64(path, row, &original[b], field(b))?;
        let located = |e: Error| {
            CliError::Core(Error::Parse {
                path: path.to_path_buf(),
                row,
                column: format!("{},{}", original[a], original[b]),
                reason: e.to_string(),
            })
        };
        if geographic {
            geo_pts.push(GeoPoint::new(va, vb).map_err(located)?);
        } else {
            planar_pts.push(PlanarPoint::new(va, vb).map_err(located)?);
        }
        ids.push(id_col.map_or_else(|| n.to_string(), |i| field(i).to_string()));
        if !series_idx.is_empty() {
            let values = series_idx
                .iter()
                .map(|&i| parse_f64(path, row, &original[i], field(i)))
                .collect::<Result<Vec<_>, _>>()?;
            series.push(Series::new(values).map_err(|e| {
                CliError::Core(Error::Parse {
                    path: path.to_path_buf(),
                    row,
                    column: "series".into(),
                    reason: e.to_string(),
                })
            })?);
        }
    }
    if ids.is_empty() {
        return Err(CliError::Core(Error::Empty("input table has no rows")));
    }
    Ok(PointTable {
        ids,
        coords: if geographic {
            Coords::Geographic(geo_pts)
        } else {
            Coords::Planar(planar_pts)
        },
        series_columns: series_idx.iter().map(|&i| original[i].clone()).collect(),
        series,
    })
}

/// Reads `(id, value)` pairs from the `id` column and `column`.
pub fn read_labels(path: &Path, column: &str) -> Result<Vec<(String, u32)>, CliError> {
    let mut rdr = reader(path)?;
    let headers: Vec<String> = rdr.headers().map_err(csv_error(path))?.iter().map(|h| h.to_lowercase()).collect();
    let missing = |c: &str| {
        CliError::Core(Error::MissingColumn {
            path: path.to_path_buf(),
            column: c.to_string(),
        })
    };
    let id = find(&headers, &["id"]).ok_or_else(|| missing("id"))?;
    let col = find(&headers, &[column]).ok_or_else(|| missing(column))?;
    let mut out = Vec::new();
    for (n, record) in rdr.records().enumerate() {
        let record = record.map_err(csv_error(path))?;
        let row = record.position().map_or(n + 2, |p| p.line() as usize);
        let raw = record.get(col).unwrap_or("");
        let value = raw.parse::<u32>().map_err(|_| {
            CliError::Core(Error::Parse {
                path: path.to_path_buf(),
                row,
                column: column.to_string(),
                reason: format!("{raw:?} is not a nonnegative integer label"),
            })
        })?;
        out.push((record.get(id).unwrap_or("").to_string(), value));
    }
    Ok(out)
}
