//! Point types and spatial distance matrices.
//!
//! Geographic distances are great-circle distances in kilometres, so a
//! clustering radius of `8.0` reads directly as 8 km. Planar distances are
//! plain Euclidean distances in the units of the input.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Mean Earth radius in kilometres (IUGG).
pub const EARTH_RADIUS_KM: f64 = 6371.0088;

/// A site location in decimal degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoPoint {
    lat: f64,
    lon: f64,
}

impl GeoPoint {
    pub fn new(lat: f64, lon: f64) -> Result<Self> {
        if !lat.is_finite() || !lon.is_finite() {
            return Err(Error::NonFinite {
                what: "geographic coordinate",
            });
        }
        if !(-90.0..=90.0).contains(&lat) {
            return Err(Error::OutOfRange {
                what: "latitude",
                value: lat,
                range: "[-90, 90]",
            });
        }
        if !(-180.0..=180.0).contains(&lon) {
            return Err(Error::OutOfRange {
                what: "longitude",
                value: lon,
                range: "[-180, 180]",
            });
        }
        Ok(Self { lat, lon })
    }

    pub fn lat(&self) -> f64 {
        self.lat
    }

    pub fn lon(&self) -> f64 {
        self.lon
    }
}

/// A point in the unitless simulation plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarPoint {
    pub x: f64,
    pub y: f64,
}

impl PlanarPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::NonFinite {
                what: "planar coordinate",
            });
        }
        Ok(Self { x, y })
    }
}

/// Haversine great-circle distance in km on a sphere of radius [`EARTH_RADIUS_KM`].
pub fn great_circle_km(a: &GeoPoint, b: &GeoPoint) -> f64 {
    let (phi1, phi2) = (a.lat.to_radians(), b.lat.to_radians());
    let dphi = phi2 - phi1;
    let dlambda = (b.lon - a.lon).to_radians();
    let h = (dphi / 2.0).sin().powi(2) + phi1.cos() * phi2.cos() * (dlambda / 2.0).sin().powi(2);
    // h can drift a hair above 1 for antipodes.
    2.0 * EARTH_RADIUS_KM * h.sqrt().min(1.0).asin()
}

pub fn euclidean(a: &PlanarPoint, b: &PlanarPoint) -> f64 {
    (a.x - b.x).hypot(a.y - b.y)
}

/// A location type with a pairwise distance.
pub trait Location: Sync {
    fn distance(&self, other: &Self) -> f64;

    /// Coordinates fed to the density estimator, in a fixed axis order.
    fn coords(&self) -> [f64; 2];
}

impl Location for GeoPoint {
    fn distance(&self, other: &Self) -> f64 {
        great_circle_km(self, other)
    }

    /// `[lon, lat]`, i.e. x then y on an unprojected map.
    fn coords(&self) -> [f64; 2] {
        [self.lon, self.lat]
    }
}

impl Location for PlanarPoint {
    fn distance(&self, other: &Self) -> f64 {
        euclidean(self, other)
    }

    fn coords(&self) -> [f64; 2] {
        [self.x, self.y]
    }
}

/// Symmetric n×n matrix of nonnegative dissimilarities with a zero diagonal.
///
/// Used for raw spatial distances, density-weighted distances and DTW
/// dissimilarities alike.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

/// Temporal (DTW) dissimilarities share the spatial matrix representation.
pub type TemporalDistanceMatrix = DistanceMatrix;

impl DistanceMatrix {
    /// Builds a matrix from a symmetric dissimilarity, evaluating each unordered pair once.
    ///
    /// Rows are computed in parallel; every entry depends only on its own pair, so
    /// the result does not depend on the thread count.
    pub fn from_pairs<F>(n: usize, dist: F) -> Self
    where
        F: Fn(usize, usize) -> f64 + Sync,
    {
        let upper: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| ((i + 1)..n).map(|j| dist(i, j)).collect())
            .collect();
        let mut entries = vec![0.0; n * n];
        for (i, row) in upper.iter().enumerate() {
            for (offset, &d) in row.iter().enumerate() {
                let j = i + 1 + offset;
                entries[i * n + j] = d;
                entries[j * n + i] = d;
            }
        }
        Self { n, entries }
    }

    /// Validates and wraps a row-major buffer.
    pub fn from_row_major(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                what: "row-major matrix buffer",
                expected: n * n,
                got: entries.len(),
            });
        }
        let m = Self { n, entries };
        m.validate()?;
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "matrix row",
                    expected: n,
                    got: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::from_row_major(n, entries)
    }

    /// Checks symmetry, zero diagonal and nonnegativity.
    pub fn validate(&self) -> Result<()> {
        for i in 0..self.n {
            if self.get(i, i) != 0.0 {
                return Err(Error::InvalidMatrix {
                    i,
                    j: i,
                    reason: "nonzero diagonal",
                });
            }
            for j in (i + 1)..self.n {
                let d = self.get(i, j);
                if !(d >= 0.0) {
                    return Err(Error::InvalidMatrix {
                        i,
                        j,
                        reason: "negative or NaN entry",
                    });
                }
                if d != self.get(j, i) {
                    return Err(Error::InvalidMatrix {
                        i,
                        j,
                        reason: "asymmetric",
                    });
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }
}

/// Pairwise distance matrix over homogeneous locations.
pub fn pairwise_spatial<P: Location>(points: &[P]) -> Result<DistanceMatrix> {
    if points.is_empty() {
        return Err(Error::Empty("pairwise_spatial points"));
    }
    Ok(DistanceMatrix::from_pairs(points.len(), |i, j| {
        points[i].distance(&points[j])
    }))
}
