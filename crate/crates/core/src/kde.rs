//! Gaussian kernel density estimation over 2-D locations.
//!
//! Inputs are z-scored per dimension before estimation and the bandwidth is
//! Scott's rule `n^(-1/(p+4))` in that standardized space. Densities returned
//! by [`DensityField::density_at`] are densities of the standardized sample;
//! they integrate to one over standardized coordinates.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Location;

const DIMS: usize = 2;

/// Scott's rule bandwidth for `n` samples in `p` dimensions.
pub fn scott_bandwidth(n: usize, p: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewSamples {
            what: "bandwidth selection",
            needed: 2,
            got: n,
        });
    }
    if p == 0 {
        return Err(Error::invalid("p", "dimension count must be at least 1"));
    }
    Ok((n as f64).powf(-1.0 / (p as f64 + 4.0)))
}

/// Fully normalized isotropic Gaussian kernel at squared distance `sq_dist`.
#[inline]
pub fn gaussian_kernel(sq_dist: f64, h: f64, dims: usize) -> f64 {
    let h2 = h * h;
    (2.0 * PI * h2).powf(-(dims as f64) / 2.0) * (-sq_dist / (2.0 * h2)).exp()
}

/// A fitted, immutable density estimate.
#[derive(Debug, Clone)]
pub struct DensityField {
    sample: Vec<[f64; DIMS]>,
    mean: [f64; DIMS],
    std: [f64; DIMS],
    h: f64,
    norm: f64,
}

/// Axis-aligned bounding box in original coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub min: [f64; DIMS],
    pub max: [f64; DIMS],
}

/// Densities evaluated on a regular grid, row-major with `x` varying fastest.
#[derive(Debug, Clone)]
pub struct DensityGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub values: Vec<f64>,
}

impl DensityGrid {
    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.xs.len() + ix]
    }

    /// `(x, y, density)` triples in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let nx = self.xs.len();
        self.values
            .iter()
            .enumerate()
            .map(move |(k, &v)| (self.xs[k % nx], self.ys[k / nx], v))
    }
}

/// Per-point densities of the fitted sample and their mean.
#[derive(Debug, Clone, PartialEq)]
pub struct PointDensities {
    values: Vec<f64>,
    mean: f64,
}

impl PointDensities {
    /// Wraps externally computed densities; they must be finite and positive.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty("point densities"));
        }
        if values.iter().any(|d| !d.is_finite()) {
            return Err(Error::NonFinite { what: "density" });
        }
        if let Some(&d) = values.iter().find(|&&d| d <= 0.0) {
            return Err(Error::OutOfRange {
                what: "density",
                value: d,
                range: "(0, inf)",
            });
        }
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        Ok(Self { values, mean })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Population standard deviation of the densities.
    pub fn std_dev(&self) -> f64 {
        let n = self.values.len() as f64;
        let var = self.values.iter().map(|d| (d - self.mean).powi(2)).sum::<f64>() / n;
        var.sqrt()
    }
}

impl DensityField {
    /// Fits a field to raw 2-D coordinates.
    pub fn fit(points: &[[f64; DIMS]]) -> Result<Self> {
        let n = points.len();
        if n < 2 {
            return Err(Error::TooFewSamples {
                what: "density estimation",
                needed: 2,
                got: n,
            });
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "density sample",
            });
        }
        let mut mean = [0.0; DIMS];
        let mut std = [0.0; DIMS];
        for dim in 0..DIMS {
            let m = points.iter().map(|p| p[dim]).sum::<f64>() / n as f64;
            let var = points.iter().map(|p| (p[dim] - m).powi(2)).sum::<f64>() / (n - 1) as f64;
            if !(var > 0.0) {
                return Err(Error::ZeroVariance { dim });
            }
            mean[dim] = m;
            std[dim] = var.sqrt();
        }
        let sample = points
            .iter()
            .map(|p| std::array::from_fn(|d| (p[d] - mean[d]) / std[d]))
            .collect();
        let h = scott_bandwidth(n, DIMS)?;
        Ok(Self {
            sample,
            mean,
            std,
            h,
            norm: gaussian_kernel(0.0, h, DIMS),
        })
    }

    /// Fits a field to any [`Location`] type using its density coordinates.
    pub fn fit_locations<P: Location>(points: &[P]) -> Result<Self> {
        let coords: Vec<_> = points.iter().map(Location::coords).collect();
        Self::fit(&coords)
    }

    pub fn bandwidth(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.sample.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sample.is_empty()
    }

    pub fn dims(&self) -> usize {
        DIMS
    }

    pub fn mean(&self) -> [f64; DIMS] {
        self.mean
    }

    pub fn std_dev(&self) -> [f64; DIMS] {
        self.std
    }

    pub fn standardized_sample(&self) -> &[[f64; DIMS]] {
        &self.sample
    }

    pub fn standardize(&self, p: [f64; DIMS]) -> [f64; DIMS] {
        std::array::from_fn(|d| (p[d] - self.mean[d]) / self.std[d])
    }

    pub fn unstandardize(&self, z: [f64; DIMS]) -> [f64; DIMS] {
        std::array::from_fn(|d| z[d] * self.std[d] + self.mean[d])
    }

    /// Density at a location given in original coordinates.
    pub fn density_at(&self, y: [f64; DIMS]) -> Result<f64> {
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "density query",
            });
        }
        Ok(self.density_at_standardized(self.standardize(y)))
    }

    /// Density at a location already in standardized coordinates.
    pub fn density_at_standardized(&self, z: [f64; DIMS]) -> f64 {
        let inv_two_h2 = 1.0 / (2.0 * self.h * self.h);
        let sum: f64 = self
            .sample
            .iter()
            .map(|x| {
                let sq = (x[0] - z[0]).powi(2) + (x[1] - z[1]).powi(2);
                (-sq * inv_two_h2).exp()
            })
            .sum();
        self.norm * sum / self.sample.len() as f64
    }

    /// Densities at each of the fitted points (each point's own kernel included).
    pub fn point_densities(&self) -> Result<PointDensities> {
        let values = self
            .sample
            .par_iter()
            .map(|&z| self.density_at_standardized(z))
            .collect();
        PointDensities::new(values)
    }

    /// Evaluates the field on a regular grid spanning `bbox` (edges inclusive).
    pub fn density_grid(&self, bbox: BBox, resolution: [usize; DIMS]) -> Result<DensityGrid> {
        for d in 0..DIMS {
            if resolution[d] < 2 {
                return Err(Error::invalid("resolution", "need at least 2 cells per dimension"));
            }
            if !bbox.min[d].is_finite() || !bbox.max[d].is_finite() {
                return Err(Error::NonFinite { what: "bounding box" });
            }
            if bbox.min[d] >= bbox.max[d] {
                return Err(Error::invalid(
                    "bbox",
                    format!("min {} is not below max {} in dimension {d}", bbox.min[d], bbox.max[d]),
                ));
            }
        }
        let axis = |d: usize| -> Vec<f64> {
            let step = (bbox.max[d] - bbox.min[d]) / (resolution[d] - 1) as f64;
            (0..resolution[d]).map(|i| bbox.min[d] + step * i as f64).collect()
        };
        let (xs, ys) = (axis(0), axis(1));
        let values = (0..xs.len() * ys.len())
            .into_par_iter()
            .map(|k| {
                let p = [xs[k % xs.len()], ys[k / xs.len()]];
                self.density_at_standardized(self.standardize(p))
            })
            .collect();
        Ok(DensityGrid { xs, ys, values })
    }
}

/// Fits a field to `points` and returns the densities at those points.
pub fn point_densities<P: Location>(points: &[P]) -> Result<(DensityField, PointDensities)> {
    let field = DensityField::fit_locations(points)?;
    let densities = field.point_densities()?;
    Ok((field, densities))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn scott_examples() {
        assert!((scott_bandwidth(2400, 2).unwrap() - 0.2733).abs() < 1e-3);
        assert!((scott_bandwidth(980, 2).unwrap() - 0.3172).abs() < 1e-3);
        assert!(scott_bandwidth(1, 2).is_err());
        assert!(scott_bandwidth(10, 0).is_err());
    }

    #[test]
    fn kernel_peak_value() {
        assert!((gaussian_kernel(0.0, 1.0, 2) - 1.0 / (2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn rejects_constant_dimension() {
        let pts = [[1.0, 0.0], [1.0, 2.0], [1.0, 5.0]];
        assert!(matches!(DensityField::fit(&pts), Err(Error::ZeroVariance { dim: 0 })));
        assert!(DensityField::fit(&[[0.0, 0.0]]).is_err());
    }

    #[test]
    fn two_point_hand_evaluation() {
        // Sample (-1,0),(1,0) in standardized space with h = 1, queried at the origin.
        let field = DensityField {
            sample: vec![[-1.0, 0.0], [1.0, 0.0]],
            mean: [0.0, 0.0],
            std: [1.0, 1.0],
            h: 1.0,
            norm: gaussian_kernel(0.0, 1.0, 2),
        };
        let expected = 0.5 * 2.0 * (1.0 / (2.0 * PI)) * (-0.5f64).exp();
        let got = field.density_at([0.0, 0.0]).unwrap();
        assert!((got - expected).abs() < 1e-15);
        assert!((got - 0.0965).abs() < 1e-4);
    }

    #[test]
    fn far_query_decays() {
        let pts: Vec<[f64; 2]> = (0..20).map(|i| [i as f64 * 0.1, (i % 4) as f64]).collect();
        let field = DensityField::fit(&pts).unwrap();
        let peak = field.point_densities().unwrap().values().iter().cloned().fold(0.0, f64::max);
        let far = field.density_at_standardized([10.0 * field.bandwidth() + 5.0, 0.0]);
        assert!(far < 1e-8 * peak);
        assert!(field.density_at([f64::NAN, 0.0]).is_err());
    }

    #[test]
    fn symmetric_pair_has_equal_densities() {
        let field = DensityField::fit(&[[0.0, 1.0], [2.0, 3.0]]).unwrap();
        let d = field.point_densities().unwrap();
        assert_eq!(d.values()[0], d.values()[1]);
        assert_eq!(d.mean(), d.values().iter().sum::<f64>() / 2.0);
    }

    #[test]
    fn grid_mirror_symmetry_and_decay() {
        let field = DensityField::fit(&[[-1.0, -1.0], [1.0, 1.0]]).unwrap();
        let bbox = BBox {
            min: [-2.0, -2.0],
            max: [2.0, 2.0],
        };
        let grid = field.density_grid(bbox, [2, 2]).unwrap();
        assert_eq!(grid.get(0, 0), grid.get(1, 1));
        assert_eq!(grid.get(1, 0), grid.get(0, 1));

        // A cell on a sample point beats one ten bandwidths away.
        let z = field.standardized_sample()[0];
        let far = field.unstandardize([z[0] - 10.0 * field.bandwidth(), z[1]]);
        let near = field.unstandardize(z);
        let bbox = BBox {
            min: [far[0], near[1] - 1.0],
            max: [near[0], near[1]],
        };
        let grid = field.density_grid(bbox, [2, 2]).unwrap();
        assert!(grid.get(1, 1) >= grid.get(0, 1));
    }

    #[test]
    fn grid_rejects_bad_arguments() {
        let field = DensityField::fit(&[[-1.0, -1.0], [1.0, 1.0]]).unwrap();
        let inverted = BBox {
            min: [1.0, 0.0],
            max: [0.0, 1.0],
        };
        assert!(field.density_grid(inverted, [4, 4]).is_err());
        let ok = BBox {
            min: [0.0, 0.0],
            max: [1.0, 1.0],
        };
        assert!(field.density_grid(ok, [1, 4]).is_err());
    }

    #[test]
    fn riemann_sum_integrates_to_one() {
        let pts: Vec<[f64; 2]> = (0..40)
            .map(|i| {
                let t = i as f64;
                [(t * 0.7).sin() * 3.0 + t * 0.05, (t * 1.3).cos() * 2.0]
            })
            .collect();
        let field = DensityField::fit(&pts).unwrap();
        let h = field.bandwidth();
        let z = field.standardized_sample();
        let lo = [0, 1].map(|d| z.iter().map(|p| p[d]).fold(f64::INFINITY, f64::min) - 6.0 * h);
        let hi = [0, 1].map(|d| z.iter().map(|p| p[d]).fold(f64::NEG_INFINITY, f64::max) + 6.0 * h);
        let res = 200;
        let cell = [0, 1].map(|d| (hi[d] - lo[d]) / (res - 1) as f64);
        let mut total = 0.0;
        for iy in 0..res {
            for ix in 0..res {
                let q = [lo[0] + ix as f64 * cell[0], lo[1] + iy as f64 * cell[1]];
                total += field.density_at_standardized(q);
            }
        }
        total *= cell[0] * cell[1];
        assert!((total - 1.0).abs() < 2e-2, "{total}");
    }

    proptest! {
        #[test]
        fn shift_leaves_point_densities_unchanged(
            pts in prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 3..30),
            dx in -500.0..500.0f64,
            dy in -500.0..500.0f64,
        ) {
            let raw: Vec<[f64; 2]> = pts.iter().map(|&(x, y)| [x, y]).collect();
            let Ok(field) = DensityField::fit(&raw) else { return Ok(()) };
            let base = field.point_densities().unwrap();
            let shifted: Vec<[f64; 2]> = raw.iter().map(|p| [p[0] + dx, p[1] + dy]).collect();
            let moved = DensityField::fit(&shifted).unwrap().point_densities().unwrap();
            for (a, b) in base.values().iter().zip(moved.values()) {
                prop_assert!((a - b).abs() <= 1e-9 * a.abs());
            }
        }

        #[test]
        fn permutation_permutes_densities(
            pts in prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 3..30),
            rot in 0usize..30,
        ) {
            let raw: Vec<[f64; 2]> = pts.iter().map(|&(x, y)| [x, y]).collect();
            let Ok(field) = DensityField::fit(&raw) else { return Ok(()) };
            let base = field.point_densities().unwrap();
            let k = rot % raw.len();
            let mut rotated = raw.clone();
            rotated.rotate_left(k);
            let perm = DensityField::fit(&rotated).unwrap().point_densities().unwrap();
            for i in 0..raw.len() {
                let j = (i + raw.len() - k) % raw.len();
                prop_assert!((base.values()[i] - perm.values()[j]).abs() <= 1e-12 * base.values()[i]);
            }
            prop_assert!((base.mean() - perm.mean()).abs() <= 1e-12 * base.mean());
            prop_assert!(base.values().iter().all(|&d| d > 0.0));
        }
    }
}
