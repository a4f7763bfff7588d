//! Synthetic varying-density benchmark and the three-way method comparison.
//!
//! Each mixture component is a pair of concentric isotropic Gaussians: a wide
//! one (default σ = 1) and a tight one (default σ = 0.1) with the same mean,
//! giving clusters with a dense core and a sparse surround.
//!
//! Samples come from ChaCha8 seeded with `seed`. For every center, in order,
//! `per_component` wide draws and then `per_component` tight draws are taken;
//! each draw consumes two standard normals (x then y).

mod assignment;
mod eval;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::clustering::{dbscan, kmeans, DbscanParams, KMeansParams};
use crate::error::{Error, Result};
use crate::geometry::{pairwise_spatial, PlanarPoint};
use crate::kde::point_densities;
use crate::weighting::{weight_matrix, Steepness, WeightConfig};

pub use assignment::max_weight_matching;
pub use eval::{adjusted_rand_index, contingency, evaluate, EvalReport};

#[derive(Debug, Clone, PartialEq)]
pub struct MixtureSpec {
    pub centers: Vec<PlanarPoint>,
    pub per_component: usize,
    pub sigma_wide: f64,
    pub sigma_tight: f64,
    pub seed: u64,
}

impl MixtureSpec {
    /// Four clusters on the corners of a square of side 6, 300 + 300 points each.
    pub fn with_seed(seed: u64) -> Self {
        Self {
            centers: square_centers(6.0),
            per_component: 300,
            sigma_wide: 1.0,
            sigma_tight: 0.1,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.centers.is_empty() {
            return Err(Error::invalid("centers", "need at least one center"));
        }
        if self.per_component == 0 {
            return Err(Error::invalid("per_component", "must be at least 1"));
        }
        for (name, s) in [("sigma_wide", self.sigma_wide), ("sigma_tight", self.sigma_tight)] {
            if !(s > 0.0) || !s.is_finite() {
                return Err(Error::invalid(name, format!("must be positive and finite, got {s}")));
            }
        }
        Ok(())
    }

    pub fn total_points(&self) -> usize {
        self.centers.len() * self.per_component * 2
    }
}

impl Default for MixtureSpec {
    fn default() -> Self {
        Self::with_seed(0)
    }
}

/// Corners of an axis-aligned square with one corner at the origin.
pub fn square_centers(side: f64) -> Vec<PlanarPoint> {
    [(0.0, 0.0), (side, 0.0), (0.0, side), (side, side)]
        .iter()
        .map(|&(x, y)| PlanarPoint { x, y })
        .collect()
}

/// Points with their generating component (`1..=C`).
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub points: Vec<PlanarPoint>,
    pub truth: Vec<u32>,
}

impl LabeledDataset {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub fn generate(spec: &MixtureSpec) -> Result<LabeledDataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.total_points();
    let mut points = Vec::with_capacity(n);
    let mut truth = Vec::with_capacity(n);
    for (c, center) in spec.centers.iter().enumerate() {
        for sigma in [spec.sigma_wide, spec.sigma_tight] {
            for _ in 0..spec.per_component {
                let zx: f64 = StandardNormal.sample(&mut rng);
                let zy: f64 = StandardNormal.sample(&mut rng);
                points.push(PlanarPoint::new(center.x + sigma * zx, center.y + sigma * zy)?);
                truth.push(c as u32 + 1);
            }
        }
    }
    Ok(LabeledDataset { points, truth })
}

/// Parameters of the density-weighted DBSCAN pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedParams {
    pub dbscan: DbscanParams,
    pub steepness: Steepness,
}

impl Default for WeightedParams {
    /// `eps = 0.3`, `min_pts = 6` and the default steepness.
    fn default() -> Self {
        Self {
            dbscan: DbscanParams::spatial(0.3, 6).expect("valid defaults"),
            steepness: Steepness::default(),
        }
    }
}

/// The three compared methods, in output order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Dbscan,
    Weighted,
    KMeans,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Dbscan, Method::Weighted, Method::KMeans];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Dbscan => "dbscan",
            Method::Weighted => "weighted",
            Method::KMeans => "kmeans",
        }
    }
}

/// Reports for one generated dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Table1Run {
    pub seed: u64,
    pub dbscan: EvalReport,
    pub weighted: EvalReport,
    pub kmeans: EvalReport,
}

impl Table1Run {
    pub fn report(&self, method: Method) -> &EvalReport {
        match method {
            Method::Dbscan => &self.dbscan,
            Method::Weighted => &self.weighted,
            Method::KMeans => &self.kmeans,
        }
    }

    /// CSV rows `seed,method,outliers,correct,incorrect,ari`; k-means outliers are `NA`.
    pub fn csv_rows(&self) -> Vec<String> {
        Method::ALL
            .iter()
            .map(|&m| {
                let r = self.report(m);
                let outliers = if m == Method::KMeans {
                    "NA".to_string()
                } else {
                    r.outliers.to_string()
                };
                format!("{},{},{},{},{},{:.6}", self.seed, m.as_str(), outliers, r.correct, r.incorrect, r.ari)
            })
            .collect()
    }
}

pub const TABLE1_HEADER: &str = "seed,method,outliers,correct,incorrect,ari";

/// Density-weighted DBSCAN over planar points: fit KDE, weight distances, cluster.
pub fn weighted_dbscan(points: &[PlanarPoint], params: &WeightedParams) -> Result<crate::Clustering> {
    let spatial = pairwise_spatial(points)?;
    let (_, densities) = point_densities(points)?;
    let cfg = WeightConfig::for_densities(&densities, params.steepness)?;
    let weighted = weight_matrix(&spatial, &densities, &cfg)?;
    dbscan(&weighted, None, &params.dbscan)
}

/// Generates one dataset and scores DBSCAN, weighted DBSCAN and k-means on it.
pub fn run_table1(
    spec: &MixtureSpec,
    dbscan_params: &DbscanParams,
    weighted: &WeightedParams,
    kmeans_params: &KMeansParams,
) -> Result<Table1Run> {
    let data = generate(spec)?;
    let spatial = pairwise_spatial(&data.points)?;
    let vanilla = dbscan(&spatial, None, dbscan_params)?;

    let (_, densities) = point_densities(&data.points)?;
    let cfg = WeightConfig::for_densities(&densities, weighted.steepness)?;
    let adapted = dbscan(&weight_matrix(&spatial, &densities, &cfg)?, None, &weighted.dbscan)?;

    let km = kmeans(&data.points, kmeans_params)?;

    Ok(Table1Run {
        seed: spec.seed,
        dbscan: evaluate(&vanilla, &data.truth)?,
        weighted: evaluate(&adapted, &data.truth)?,
        kmeans: evaluate(&km.clustering, &data.truth)?,
    })
}
