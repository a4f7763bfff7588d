//! Logistic density weights and distance-matrix rescaling.
//!
//! Each point gets a weight `f(d) = 2 / (1 + exp(-k (d - mean)))` from its
//! density `d`. A pair's distance is multiplied by the mean of the two
//! endpoint weights, so distances inside dense regions grow (towards twice
//! their length) and distances in sparse regions shrink (towards zero).

use crate::error::{Error, Result};
use crate::geometry::DistanceMatrix;
use crate::kde::PointDensities;

/// Upper asymptote of the logistic weight.
pub const MAX_WEIGHT: f64 = 2.0;

/// Multiplier of `1 / std(d_i)` used by [`Steepness::default`].
///
/// With the full `1 / std` the sparsest points of a mixture with long tails
/// get weights near 0.2, which shrinks the gaps between clusters enough to
/// chain them together. Half that keeps the minimum weight near 0.5.
pub const DEFAULT_RELATIVE_STEEPNESS: f64 = 0.5;

/// Steepness of the logistic curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Steepness {
    /// `1 / std(d_i)` of the densities being weighted.
    Auto,
    /// `c / std(d_i)`.
    Relative(f64),
    Fixed(f64),
}

impl Default for Steepness {
    fn default() -> Self {
        Steepness::Relative(DEFAULT_RELATIVE_STEEPNESS)
    }
}

impl Steepness {
    pub fn resolve(self, densities: &PointDensities) -> Result<f64> {
        match self {
            Steepness::Auto => default_steepness(densities),
            Steepness::Relative(c) => {
                check_steepness(c)?;
                let k = c * default_steepness(densities)?;
                check_steepness(k)?;
                Ok(k)
            }
            Steepness::Fixed(k) => {
                check_steepness(k)?;
                Ok(k)
            }
        }
    }
}

impl std::fmt::Display for Steepness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Steepness::Auto => f.write_str("auto"),
            Steepness::Relative(c) => write!(f, "auto*{c}"),
            Steepness::Fixed(k) => write!(f, "{k}"),
        }
    }
}

impl std::str::FromStr for Steepness {
    type Err = String;

    /// `auto`, `auto*C` or a positive number.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Steepness::Auto);
        }
        let (relative, num) = match s.get(..5) {
            Some(p) if p.eq_ignore_ascii_case("auto*") => (true, &s[5..]),
            _ => (false, s),
        };
        let k: f64 = num
            .trim()
            .parse()
            .map_err(|_| format!("expected \"auto\", \"auto*C\" or a positive number, got {s:?}"))?;
        if !(k > 0.0) || !k.is_finite() {
            return Err(format!("steepness must be positive and finite, got {k}"));
        }
        Ok(if relative { Steepness::Relative(k) } else { Steepness::Fixed(k) })
    }
}

/// Parameters of the logistic curve: steepness and midpoint (the mean density).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightConfig {
    k: f64,
    midpoint: f64,
}

impl WeightConfig {
    pub fn new(k: f64, midpoint: f64) -> Result<Self> {
        check_steepness(k)?;
        if !midpoint.is_finite() {
            return Err(Error::NonFinite {
                what: "weight midpoint",
            });
        }
        Ok(Self { k, midpoint })
    }

    /// Curve centred on the mean of `densities`.
    pub fn for_densities(densities: &PointDensities, steepness: Steepness) -> Result<Self> {
        Self::new(steepness.resolve(densities)?, densities.mean())
    }

    pub fn steepness(&self) -> f64 {
        self.k
    }

    pub fn midpoint(&self) -> f64 {
        self.midpoint
    }

    pub fn weight(&self, density: f64) -> f64 {
        logistic(density, self.midpoint, self.k)
    }
}

fn check_steepness(k: f64) -> Result<()> {
    if !k.is_finite() || k <= 0.0 {
        return Err(Error::invalid("k", format!("steepness must be positive and finite, got {k}")));
    }
    Ok(())
}

#[inline]
fn logistic(d: f64, d_bar: f64, k: f64) -> f64 {
    MAX_WEIGHT / (1.0 + (-k * (d - d_bar)).exp())
}

/// Logistic weight of a point with density `d` against the mean density `d_bar`.
///
/// Returns exactly 1 at `d == d_bar` and lies in (0, 2). Far in the tails
/// (|k (d - d_bar)| beyond roughly 37) the result saturates to the f64
/// nearest the asymptote.
pub fn logistic_weight(d: f64, d_bar: f64, k: f64) -> Result<f64> {
    check_steepness(k)?;
    if !d.is_finite() || !d_bar.is_finite() {
        return Err(Error::NonFinite { what: "density" });
    }
    Ok(logistic(d, d_bar, k))
}

/// `1 / std(d_i)`: a point one standard deviation above the mean gets weight ≈ 1.462.
pub fn default_steepness(densities: &PointDensities) -> Result<f64> {
    if densities.len() < 2 {
        return Err(Error::TooFewSamples {
            what: "default steepness",
            needed: 2,
            got: densities.len(),
        });
    }
    let s = densities.std_dev();
    if !(s > 0.0) {
        return Err(Error::invalid(
            "k",
            "densities have zero variance; set the steepness explicitly",
        ));
    }
    Ok(1.0 / s)
}

/// Rescales `spatial` by the mean logistic weight of each pair's endpoints.
pub fn weight_matrix(
    spatial: &DistanceMatrix,
    densities: &PointDensities,
    cfg: &WeightConfig,
) -> Result<DistanceMatrix> {
    if spatial.len() != densities.len() {
        return Err(Error::DimensionMismatch {
            what: "densities vs distance matrix",
            expected: spatial.len(),
            got: densities.len(),
        });
    }
    let weights: Vec<f64> = densities.values().iter().map(|&d| cfg.weight(d)).collect();
    Ok(DistanceMatrix::from_pairs(spatial.len(), |i, j| {
        spatial.get(i, j) * ((weights[i] + weights[j]) / 2.0)
    }))
}
