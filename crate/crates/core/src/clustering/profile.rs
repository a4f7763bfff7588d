use crate::error::{Error, Result};
use crate::geometry::DistanceMatrix;

/// Each point's distance to its `k`-th nearest other point, sorted descending.
///
/// This is the sorted k-distance plot used to pick a DBSCAN radius: the
/// radius sits near the knee where the curve flattens.
pub fn knn_distance_profile(m: &DistanceMatrix, k: usize) -> Result<Vec<f64>> {
    let n = m.len();
    if k == 0 || k >= n {
        return Err(Error::invalid("k", format!("need 1 <= k < n = {n}, got {k}")));
    }
    let mut profile: Vec<f64> = (0..n)
        .map(|i| {
            let mut row: Vec<f64> = m
                .row(i)
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &d)| d)
                .collect();
            let (_, kth, _) = row.select_nth_unstable_by(k - 1, f64::total_cmp);
            *kth
        })
        .collect();
    profile.sort_by(|a, b| b.total_cmp(a));
    Ok(profile)
}

/// Knee of a descending k-distance profile: the value farthest below the
/// chord joining its first and last entries.
pub fn suggest_eps(profile: &[f64]) -> Result<f64> {
    let (&first, &last) = match (profile.first(), profile.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::Empty("k-distance profile")),
    };
    if profile.len() < 3 || first == last {
        return Ok(profile[profile.len() / 2]);
    }
    let span = (profile.len() - 1) as f64;
    let (mut best, mut best_gap) = (profile.len() / 2, f64::NEG_INFINITY);
    for (i, &v) in profile.iter().enumerate() {
        let t = i as f64 / span;
        let chord = first + (last - first) * t;
        let gap = chord - v;
        if gap > best_gap {
            best = i;
            best_gap = gap;
        }
    }
    Ok(profile[best])
}

/// Radius for which roughly `noise_fraction` of the points have fewer than
/// `k` neighbours: the profile value at that rank.
pub fn eps_for_noise_fraction(profile: &[f64], noise_fraction: f64) -> Result<f64> {
    if profile.is_empty() {
        return Err(Error::Empty("k-distance profile"));
    }
    if !(0.0..1.0).contains(&noise_fraction) {
        return Err(Error::OutOfRange {
            what: "noise fraction",
            value: noise_fraction,
            range: "[0, 1)",
        });
    }
    Ok(profile[(noise_fraction * profile.len() as f64) as usize])
}
