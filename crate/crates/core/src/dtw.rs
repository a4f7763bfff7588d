//! Dynamic time warping between univariate series.
//!
//! Unconstrained DTW with squared local cost, steps (1,0), (0,1), (1,1),
//! both endpoints aligned, and the square root taken of the minimal total
//! cost. With this convention the DTW distance never exceeds the lock-step
//! Euclidean distance of equal-length series. Distances are not normalized
//! by path length, so clustering radii are in the units of the raw counts.

use crate::error::{Error, Result};
use crate::geometry::{DistanceMatrix, TemporalDistanceMatrix};

/// A nonempty series of finite, nonnegative values.
#[derive(Debug, Clone, PartialEq)]
pub struct Series(Vec<f64>);

impl Series {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty("series"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { what: "series value" });
        }
        if let Some(&v) = values.iter().find(|&&v| v < 0.0) {
            return Err(Error::OutOfRange {
                what: "series value",
                value: v,
                range: "[0, inf)",
            });
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Z-normalized copy of the values. A constant series maps to all zeros.
    ///
    /// The result may be negative, so it is returned as a plain vector rather
    /// than a [`Series`].
    pub fn z_normalized(&self) -> Vec<f64> {
        let n = self.0.len() as f64;
        let mean = self.0.iter().sum::<f64>() / n;
        let sd = (self.0.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
        if sd > 0.0 {
            self.0.iter().map(|v| (v - mean) / sd).collect()
        } else {
            vec![0.0; self.0.len()]
        }
    }
}

/// DTW distance between two raw value slices.
pub fn dtw(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("dtw input series"));
    }
    // Rolling rows over `b`; prev[j] holds the cumulative cost at (i-1, j).
    let mut prev = vec![f64::INFINITY; b.len()];
    let mut curr = vec![0.0; b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            let cost = (x - y) * (x - y);
            let best = match (i, j) {
                (0, 0) => 0.0,
                (0, _) => curr[j - 1],
                (_, 0) => prev[0],
                _ => prev[j].min(curr[j - 1]).min(prev[j - 1]),
            };
            curr[j] = cost + best;
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    Ok(prev[b.len() - 1].sqrt())
}

pub fn dtw_distance(a: &Series, b: &Series) -> f64 {
    dtw(a.values(), b.values()).expect("series are nonempty")
}

/// Lock-step Euclidean distance of equal-length slices.
pub fn euclidean_lockstep(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            what: "lock-step series",
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt())
}

/// Pairwise DTW matrix over equal-length series.
///
/// With `normalize` each series is z-normalized first.
pub fn pairwise_temporal(series: &[Series], normalize: bool) -> Result<TemporalDistanceMatrix> {
    let first = series.first().ok_or(Error::Empty("pairwise_temporal series"))?;
    let t = first.len();
    if let Some((index, s)) = series.iter().enumerate().find(|(_, s)| s.len() != t) {
        return Err(Error::LengthMismatch {
            index,
            expected: t,
            got: s.len(),
        });
    }
    let prepared: Vec<Vec<f64>> = if normalize {
        series.iter().map(Series::z_normalized).collect()
    } else {
        series.iter().map(|s| s.values().to_vec()).collect()
    };
    Ok(DistanceMatrix::from_pairs(series.len(), |i, j| {
        dtw(&prepared[i], &prepared[j]).expect("series are nonempty")
    }))
}

#[cfg(test)]
pub(crate) mod oracle {
    /// Minimal squared cost over every monotone warping path, by exhaustive recursion.
    pub fn brute_force_dtw(a: &[f64], b: &[f64]) -> f64 {
        fn walk(a: &[f64], b: &[f64], i: usize, j: usize, acc: f64, best: &mut f64) {
            let acc = acc + (a[i] - b[j]).powi(2);
            if i + 1 == a.len() && j + 1 == b.len() {
                *best = best.min(acc);
                return;
            }
            if i + 1 < a.len() {
                walk(a, b, i + 1, j, acc, best);
            }
            if j + 1 < b.len() {
                walk(a, b, i, j + 1, acc, best);
            }
            if i + 1 < a.len() && j + 1 < b.len() {
                walk(a, b, i + 1, j + 1, acc, best);
            }
        }
        let mut best = f64::INFINITY;
        walk(a, b, 0, 0, 0.0, &mut best);
        best.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::oracle::brute_force_dtw;
    use super::*;
    use proptest::prelude::*;

    fn s(v: &[f64]) -> Series {
        Series::new(v.to_vec()).unwrap()
    }

    #[test]
    fn identity_is_zero() {
        let a = s(&[3.0, 1.0, 4.0, 1.0, 5.0]);
        assert_eq!(dtw_distance(&a, &a), 0.0);
    }

    #[test]
    fn shifted_peak_aligns() {
        let (a, b) = (s(&[0.0, 1.0, 0.0, 0.0]), s(&[0.0, 0.0, 1.0, 0.0]));
        assert_eq!(brute_force_dtw(a.values(), b.values()), 0.0);
        assert_eq!(dtw_distance(&a, &b), 0.0);
        assert_eq!(euclidean_lockstep(a.values(), b.values()).unwrap(), 2f64.sqrt());
    }

    #[test]
    fn constant_offset() {
        let d = dtw_distance(&s(&[0.0, 0.0]), &s(&[1.0, 1.0]));
        assert_eq!(brute_force_dtw(&[0.0, 0.0], &[1.0, 1.0]), 2f64.sqrt());
        assert_eq!(d, 2f64.sqrt());
    }

    #[test]
    fn unequal_lengths_are_supported_pairwise() {
        assert_eq!(dtw(&[1.0, 2.0, 3.0], &[1.0, 3.0]).unwrap(), 1.0);
        assert!(dtw(&[], &[1.0]).is_err());
    }

    #[test]
    fn series_validation() {
        assert!(Series::new(vec![]).is_err());
        assert!(Series::new(vec![1.0, -0.5]).is_err());
        assert!(Series::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn pairwise_cases() {
        let m = pairwise_temporal(&[s(&[1.0, 2.0])], false).unwrap();
        assert_eq!(m.as_slice(), &[0.0]);

        let series = [s(&[1.0, 5.0, 2.0]), s(&[1.0, 5.0, 2.0]), s(&[9.0, 0.0, 4.0])];
        let m = pairwise_temporal(&series, false).unwrap();
        assert_eq!(m.get(0, 1), 0.0);
        assert!(m.get(0, 2) > 0.0);

        let err = pairwise_temporal(&[s(&[1.0, 2.0]), s(&[1.0, 2.0]), s(&[1.0])], false);
        assert!(matches!(err, Err(Error::LengthMismatch { index: 2, .. })));
    }

    #[test]
    fn normalized_series_ignore_scale() {
        let series = [s(&[1.0, 2.0, 3.0, 2.0]), s(&[10.0, 20.0, 30.0, 20.0])];
        let m = pairwise_temporal(&series, true).unwrap();
        assert!(m.get(0, 1) < 1e-12);
        assert!(pairwise_temporal(&series, false).unwrap().get(0, 1) > 1.0);
    }

    #[test]
    fn six_random_series_match_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let series: Vec<Series> = (0..6)
            .map(|_| s(&(0..8).map(|_| rng.gen_range(0.0..10.0)).collect::<Vec<_>>()))
            .collect();
        let m = pairwise_temporal(&series, false).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let expected = brute_force_dtw(series[i].values(), series[j].values());
                assert!((m.get(i, j) - expected).abs() <= 1e-12 * expected.max(1.0));
            }
        }
    }

    proptest! {
        #[test]
        fn matches_path_enumeration(
            a in prop::collection::vec(0.0..100.0f64, 1..=7),
            b in prop::collection::vec(0.0..100.0f64, 1..=7),
        ) {
            let fast = dtw(&a, &b).unwrap();
            let slow = brute_force_dtw(&a, &b);
            prop_assert!((fast - slow).abs() <= 1e-12 * slow.max(1e-300));
            prop_assert_eq!(fast, dtw(&b, &a).unwrap());
        }

        #[test]
        fn bounded_by_lockstep(pair in (1usize..40).prop_flat_map(|t| (
            prop::collection::vec(0.0..1e3f64, t),
            prop::collection::vec(0.0..1e3f64, t),
        ))) {
            let (a, b) = pair;
            prop_assert!(dtw(&a, &b).unwrap() <= euclidean_lockstep(&a, &b).unwrap());
        }

        #[test]
        fn shifted_impulse_is_free(t in 4usize..30, pos in 0usize..28) {
            // Impulse strictly inside the padding so both endpoints stay zero.
            let pos = 1 + pos % (t - 3);
            let mut a = vec![0.0; t];
            let mut b = vec![0.0; t];
            a[pos] = 1.0;
            b[pos + 1] = 1.0;
            prop_assert_eq!(dtw(&a, &b).unwrap(), 0.0);
            prop_assert!(euclidean_lockstep(&a, &b).unwrap() > 0.0);
        }
    }
}
