//! Density-based and partitional clustering over precomputed distances.

mod dbscan;
mod kmeans;
mod profile;

pub use dbscan::{audit, dbscan, neighborhood, DbscanParams, Matrices};
pub use kmeans::{kmeans, wss_profile, KMeansParams, KMeansResult};
pub use profile::{eps_for_noise_fraction, knn_distance_profile, suggest_eps};

/// How a point participates in its cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    /// Satisfies the core point condition (or, for k-means, any assigned point).
    Core,
    /// Reachable from a core point without being core itself.
    Border,
    Noise,
}

impl Role {
    pub fn as_str(&self) -> &'static str {
        match self {
            Role::Core => "core",
            Role::Border => "border",
            Role::Noise => "noise",
        }
    }
}

impl std::str::FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "core" => Ok(Role::Core),
            "border" => Ok(Role::Border),
            "noise" => Ok(Role::Noise),
            other => Err(format!("unknown role {other:?}")),
        }
    }
}

/// Per-point cluster labels: `0` is noise, clusters are numbered `1..=C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    labels: Vec<u32>,
    roles: Vec<Role>,
    clusters: u32,
}

impl Clustering {
    pub(crate) fn from_parts(labels: Vec<u32>, roles: Vec<Role>) -> Self {
        let clusters = labels.iter().copied().max().unwrap_or(0);
        Self {
            labels,
            roles,
            clusters,
        }
    }

    /// Builds a clustering from labels alone; label 0 becomes noise and every
    /// other point is treated as a core member.
    pub fn from_labels(labels: Vec<u32>) -> Self {
        let roles = labels
            .iter()
            .map(|&l| if l == 0 { Role::Noise } else { Role::Core })
            .collect();
        Self::from_parts(labels, roles)
    }

    /// Builds a clustering from labels and explicit roles.
    pub fn with_roles(labels: Vec<u32>, roles: Vec<Role>) -> crate::Result<Self> {
        if labels.len() != roles.len() {
            return Err(crate::Error::DimensionMismatch {
                what: "roles vs labels",
                expected: labels.len(),
                got: roles.len(),
            });
        }
        Ok(Self::from_parts(labels, roles))
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn cluster_count(&self) -> u32 {
        self.clusters
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn noise_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l == 0).count()
    }

    /// Number of points in each cluster, indexed by `label - 1`.
    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.clusters as usize];
        for &l in &self.labels {
            if l > 0 {
                sizes[l as usize - 1] += 1;
            }
        }
        sizes
    }
}
