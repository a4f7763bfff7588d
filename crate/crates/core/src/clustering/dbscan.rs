use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::geometry::{DistanceMatrix, TemporalDistanceMatrix};

use super::{Clustering, Role};

/// Radii and core threshold for DBSCAN, or ST-DBSCAN when `eps2` is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DbscanParams {
    eps1: f64,
    eps2: Option<f64>,
    min_pts: usize,
}

impl DbscanParams {
    pub fn new(eps1: f64, eps2: Option<f64>, min_pts: usize) -> Result<Self> {
        if !(eps1 > 0.0) {
            return Err(Error::invalid("eps1", format!("must be positive, got {eps1}")));
        }
        if let Some(e) = eps2 {
            if !(e > 0.0) {
                return Err(Error::invalid("eps2", format!("must be positive, got {e}")));
            }
        }
        if min_pts == 0 {
            return Err(Error::invalid("min_pts", "must be at least 1"));
        }
        Ok(Self { eps1, eps2, min_pts })
    }

    /// Spatial-only DBSCAN.
    pub fn spatial(eps: f64, min_pts: usize) -> Result<Self> {
        Self::new(eps, None, min_pts)
    }

    pub fn eps1(&self) -> f64 {
        self.eps1
    }

    pub fn eps2(&self) -> Option<f64> {
        self.eps2
    }

    pub fn min_pts(&self) -> usize {
        self.min_pts
    }
}

/// Spatial matrix plus the optional temporal matrix, checked for consistency.
#[derive(Debug, Clone, Copy)]
pub struct Matrices<'a> {
    spatial: &'a DistanceMatrix,
    temporal: Option<&'a TemporalDistanceMatrix>,
}

impl<'a> Matrices<'a> {
    pub fn new(
        spatial: &'a DistanceMatrix,
        temporal: Option<&'a TemporalDistanceMatrix>,
        params: &DbscanParams,
    ) -> Result<Self> {
        match (params.eps2, temporal) {
            (Some(_), None) => {
                return Err(Error::invalid("eps2", "temporal radius set but no temporal matrix given"))
            }
            (None, Some(_)) => {
                return Err(Error::invalid("eps2", "temporal matrix given without a temporal radius"))
            }
            (_, Some(t)) if t.len() != spatial.len() => {
                return Err(Error::DimensionMismatch {
                    what: "temporal vs spatial matrix",
                    expected: spatial.len(),
                    got: t.len(),
                })
            }
            _ => {}
        }
        Ok(Self { spatial, temporal })
    }

    pub fn len(&self) -> usize {
        self.spatial.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spatial.is_empty()
    }

    #[inline]
    fn within(&self, i: usize, j: usize, params: &DbscanParams) -> bool {
        self.spatial.get(i, j) <= params.eps1
            && match (self.temporal, params.eps2) {
                (Some(t), Some(eps2)) => t.get(i, j) <= eps2,
                _ => true,
            }
    }

    fn neighbors_into(&self, i: usize, params: &DbscanParams, out: &mut Vec<usize>) {
        out.clear();
        out.extend((0..self.len()).filter(|&j| self.within(i, j, params)));
    }
}

/// Indices within both radii of point `i`, in ascending order, `i` included.
pub fn neighborhood(
    i: usize,
    spatial: &DistanceMatrix,
    temporal: Option<&TemporalDistanceMatrix>,
    params: &DbscanParams,
) -> Result<Vec<usize>> {
    let m = Matrices::new(spatial, temporal, params)?;
    if i >= m.len() {
        return Err(Error::IndexOutOfRange { index: i, n: m.len() });
    }
    let mut out = Vec::new();
    m.neighbors_into(i, params, &mut out);
    Ok(out)
}

/// DBSCAN over precomputed matrices.
///
/// Points are scanned in index order and cluster ids are handed out in order
/// of discovery. A border point reachable from several clusters stays in the
/// first one that reaches it.
pub fn dbscan(
    spatial: &DistanceMatrix,
    temporal: Option<&TemporalDistanceMatrix>,
    params: &DbscanParams,
) -> Result<Clustering> {
    let m = Matrices::new(spatial, temporal, params)?;
    let n = m.len();
    let mut labels = vec![0u32; n];
    let mut roles = vec![Role::Noise; n];
    let mut visited = vec![false; n];
    let mut neighbors = Vec::new();
    let mut queue = VecDeque::new();
    let mut next_label = 0u32;

    for start in 0..n {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        m.neighbors_into(start, params, &mut neighbors);
        if neighbors.len() < params.min_pts {
            continue;
        }
        next_label += 1;
        labels[start] = next_label;
        roles[start] = Role::Core;
        queue.extend(neighbors.iter().copied().filter(|&j| j != start));

        while let Some(q) = queue.pop_front() {
            if labels[q] == 0 {
                labels[q] = next_label;
                roles[q] = Role::Border;
            }
            if visited[q] {
                continue;
            }
            visited[q] = true;
            if labels[q] != next_label {
                // Already a border point of an earlier cluster; it cannot be core.
                continue;
            }
            m.neighbors_into(q, params, &mut neighbors);
            if neighbors.len() >= params.min_pts {
                roles[q] = Role::Core;
                queue.extend(neighbors.iter().copied().filter(|&j| !visited[j] || labels[j] == 0));
            }
        }
    }

    Ok(Clustering::from_parts(labels, roles))
}

/// Re-checks the core/border/noise invariants of `clustering` against the matrices.
pub fn audit(
    clustering: &Clustering,
    spatial: &DistanceMatrix,
    temporal: Option<&TemporalDistanceMatrix>,
    params: &DbscanParams,
) -> std::result::Result<(), String> {
    let m = Matrices::new(spatial, temporal, params).map_err(|e| e.to_string())?;
    let n = m.len();
    if clustering.len() != n {
        return Err(format!("clustering has {} points, matrices {n}", clustering.len()));
    }
    let mut neighbors = Vec::new();
    let mut core = vec![false; n];
    for (i, is_core) in core.iter_mut().enumerate() {
        m.neighbors_into(i, params, &mut neighbors);
        *is_core = neighbors.len() >= params.min_pts;
    }
    for i in 0..n {
        let (label, role) = (clustering.labels()[i], clustering.roles()[i]);
        let expected_core = core[i];
        match role {
            Role::Core if !expected_core => return Err(format!("point {i} marked core but is not")),
            Role::Core if label == 0 => return Err(format!("core point {i} has noise label")),
            Role::Border | Role::Noise if expected_core => {
                return Err(format!("point {i} satisfies the core condition but is {role:?}"))
            }
            Role::Border => {
                let ok = (0..n).any(|j| {
                    core[j] && clustering.labels()[j] == label && m.within(j, i, params)
                });
                if !ok {
                    return Err(format!("border point {i} has no core neighbor in cluster {label}"));
                }
            }
            Role::Noise => {
                if label != 0 {
                    return Err(format!("noise point {i} has label {label}"));
                }
                if let Some(j) = (0..n).find(|&j| core[j] && m.within(j, i, params)) {
                    return Err(format!("noise point {i} lies in the neighborhood of core point {j}"));
                }
            }
            Role::Core => {}
        }
    }
    let c = clustering.cluster_count();
    let mut seen = vec![false; c as usize];
    for &l in clustering.labels() {
        if l > c {
            return Err(format!("label {l} exceeds cluster count {c}"));
        }
        if l > 0 {
            seen[l as usize - 1] = true;
        }
    }
    if seen.iter().any(|s| !s) {
        return Err("labels are not contiguous".into());
    }
    Ok(())
}
