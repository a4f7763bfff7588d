use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::PlanarPoint;

use super::{Clustering, Role};

/// Lloyd's k-means settings. Every restart draws fresh initial centroids from
/// a single seeded stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KMeansParams {
    pub k: usize,
    pub max_iters: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl KMeansParams {
    pub fn new(k: usize, max_iters: usize, restarts: usize, seed: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k", "must be at least 1"));
        }
        if max_iters == 0 {
            return Err(Error::invalid("max_iters", "must be at least 1"));
        }
        if restarts == 0 {
            return Err(Error::invalid("restarts", "must be at least 1"));
        }
        Ok(Self {
            k,
            max_iters,
            restarts,
            seed,
        })
    }
}

#[derive(Debug, Clone)]
pub struct KMeansResult {
    /// Labels `1..=k`; no point is noise.
    pub clustering: Clustering,
    pub centroids: Vec<PlanarPoint>,
    /// Within-cluster sum of squares of the returned solution.
    pub wss: f64,
    /// WSS after each assignment step of the winning restart.
    pub wss_history: Vec<f64>,
}

fn sq_dist(a: &PlanarPoint, b: &PlanarPoint) -> f64 {
    (a.x - b.x).powi(2) + (a.y - b.y).powi(2)
}

fn nearest(p: &PlanarPoint, centroids: &[PlanarPoint]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, centroid) in centroids.iter().enumerate() {
        let d = sq_dist(p, centroid);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

struct Run {
    assignment: Vec<usize>,
    centroids: Vec<PlanarPoint>,
    wss: f64,
    history: Vec<f64>,
}

fn lloyd(points: &[PlanarPoint], mut centroids: Vec<PlanarPoint>, max_iters: usize) -> Run {
    let k = centroids.len();
    let mut assignment = vec![usize::MAX; points.len()];
    let mut history = Vec::new();
    let mut wss = f64::INFINITY;

    for _ in 0..max_iters {
        let mut changed = false;
        wss = 0.0;
        for (p, slot) in points.iter().zip(assignment.iter_mut()) {
            let (c, d) = nearest(p, &centroids);
            changed |= *slot != c;
            *slot = c;
            wss += d;
        }
        history.push(wss);
        if !changed {
            break;
        }

        let mut sums = vec![(0.0, 0.0, 0usize); k];
        for (p, &c) in points.iter().zip(&assignment) {
            sums[c].0 += p.x;
            sums[c].1 += p.y;
            sums[c].2 += 1;
        }
        for (c, &(sx, sy, count)) in sums.iter().enumerate() {
            if count > 0 {
                centroids[c] = PlanarPoint {
                    x: sx / count as f64,
                    y: sy / count as f64,
                };
            }
        }
        // Re-seed each empty cluster at the point farthest from its own centroid.
        for c in 0..k {
            if sums[c].2 > 0 {
                continue;
            }
            let far = (0..points.len())
                .filter(|&i| sums[assignment[i]].2 > 1)
                .max_by(|&a, &b| {
                    let da = sq_dist(&points[a], &centroids[assignment[a]]);
                    let db = sq_dist(&points[b], &centroids[assignment[b]]);
                    da.total_cmp(&db).then(b.cmp(&a))
                });
            if let Some(i) = far {
                sums[assignment[i]].2 -= 1;
                sums[c].2 = 1;
                assignment[i] = c;
                centroids[c] = points[i];
            }
        }
    }

    // Final WSS against the final centroids for the final assignment.
    let final_wss: f64 = points
        .iter()
        .zip(&assignment)
        .map(|(p, &c)| sq_dist(p, &centroids[c]))
        .sum();
    if final_wss < wss {
        history.push(final_wss);
    }
    Run {
        assignment,
        centroids,
        wss: final_wss.min(wss),
        history,
    }
}

/// Best-of-restarts Lloyd's k-means with uniform initial centroids drawn
/// without replacement from the data.
pub fn kmeans(points: &[PlanarPoint], params: &KMeansParams) -> Result<KMeansResult> {
    let n = points.len();
    if params.k > n {
        return Err(Error::invalid(
            "k",
            format!("cannot form {} clusters from {n} points", params.k),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut best: Option<Run> = None;
    for _ in 0..params.restarts {
        let init = index::sample(&mut rng, n, params.k)
            .into_iter()
            .map(|i| points[i])
            .collect();
        let run = lloyd(points, init, params.max_iters);
        if best.as_ref().map_or(true, |b| run.wss < b.wss) {
            best = Some(run);
        }
    }
    let best = best.expect("at least one restart");
    let labels = best.assignment.iter().map(|&c| c as u32 + 1).collect::<Vec<_>>();
    let roles = vec![Role::Core; n];
    Ok(KMeansResult {
        clustering: Clustering::from_parts(labels, roles),
        centroids: best.centroids,
        wss: best.wss,
        wss_history: best.history,
    })
}

/// Best WSS for each `k` in `ks`, for elbow plots.
pub fn wss_profile(
    points: &[PlanarPoint],
    ks: std::ops::RangeInclusive<usize>,
    params: &KMeansParams,
) -> Result<Vec<(usize, f64)>> {
    if ks.is_empty() || *ks.start() == 0 || *ks.end() > points.len() {
        return Err(Error::invalid(
            "k range",
            format!("{ks:?} must lie within 1..={}", points.len()),
        ));
    }
    ks.map(|k| {
        let p = KMeansParams { k, ..*params };
        kmeans(points, &p).map(|r| (k, r.wss))
    })
    .collect()
}
