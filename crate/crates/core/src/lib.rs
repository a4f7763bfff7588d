//! Density-weighted spatio-temporal clustering.
//!
//! The pipeline estimates a Gaussian KDE over site locations, turns each
//! site's density into a logistic weight centred on the mean density, and
//! rescales the spatial distance matrix with those weights before running
//! DBSCAN or its dual-radius spatio-temporal variant. Dense regions get
//! stretched distances and sparse regions compressed ones, so a single
//! global radius works across both.
//!
//! ```
//! use kdescan::{dbscan, pairwise_spatial, point_densities, weight_matrix};
//! use kdescan::{DbscanParams, PlanarPoint, Steepness, WeightConfig};
//!
//! let points: Vec<PlanarPoint> = (0..40)
//!     .map(|i| PlanarPoint::new((i % 8) as f64 * 0.2, (i / 8) as f64 * 0.2 + (i % 3) as f64).unwrap())
//!     .collect();
//! let spatial = pairwise_spatial(&points)?;
//! let (_, densities) = point_densities(&points)?;
//! let cfg = WeightConfig::for_densities(&densities, Steepness::default())?;
//! let weighted = weight_matrix(&spatial, &densities, &cfg)?;
//! let clustering = dbscan(&weighted, None, &DbscanParams::spatial(0.3, 4)?)?;
//! assert_eq!(clustering.len(), 40);
//! # Ok::<(), kdescan::Error>(())
//! ```

pub mod clustering;
pub mod dtw;
mod error;
pub mod geometry;
pub mod ingestion;
pub mod kde;
pub mod simulation;
pub mod weighting;

pub use clustering::{dbscan, kmeans, Clustering, DbscanParams, KMeansParams, Role};
pub use dtw::{dtw_distance, pairwise_temporal, Series};
pub use error::{Error, Result};
pub use geometry::{
    euclidean, great_circle_km, pairwise_spatial, DistanceMatrix, GeoPoint, Location, PlanarPoint,
    TemporalDistanceMatrix,
};
pub use kde::{point_densities, scott_bandwidth, DensityField, PointDensities};
pub use weighting::{
    default_steepness, logistic_weight, weight_matrix, Steepness, WeightConfig,
    DEFAULT_RELATIVE_STEEPNESS,
};
