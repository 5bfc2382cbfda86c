//! Per-slice clustering.
//!
//! Cluster ids are contiguous and numbered by the first member (in input
//! order) that belongs to each cluster, so every clusterer is deterministic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid_param, Result};
use crate::geometry::{KdTree, PointCloud};

/// Disjoint-set forest with path compression and union by rank.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Returns false when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.rank[a] < self.rank[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        if self.rank[a] == self.rank[b] {
            self.rank[a] += 1;
        }
        true
    }

    /// Component label per element, numbered by first appearance.
    pub fn labels(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut id_of_root = vec![usize::MAX; n];
        let mut next = 0;
        let labels = (0..n)
            .map(|i| {
                let r = self.find(i);
                if id_of_root[r] == usize::MAX {
                    id_of_root[r] = next;
                    next += 1;
                }
                id_of_root[r]
            })
            .collect();
        (labels, next)
    }
}

/// Cluster label (or noise) for each member of one slice, in member order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterAssignment {
    pub labels: Vec<Option<usize>>,
    pub cluster_count: usize,
}

impl ClusterAssignment {
    pub fn noise_count(&self) -> usize {
        self.labels.iter().filter(|l| l.is_none()).count()
    }

    /// Member positions grouped by cluster id.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.cluster_count];
        for (pos, label) in self.labels.iter().enumerate() {
            if let Some(c) = label {
                groups[*c].push(pos);
            }
        }
        groups
    }
}

/// Connected components of the Rips graph at scale `delta` on the given
/// members (pairs at distance `<= delta` are linked).
pub fn single_linkage(cloud: &PointCloud, members: &[usize], delta: f64) -> ClusterAssignment {
    let sub = cloud.subset(members);
    let mut uf = UnionFind::new(members.len());
    if !members.is_empty() {
        let tree = KdTree::new(&sub);
        for i in 0..sub.len() {
            tree.within_radius(sub.point(i), delta, |j, _| {
                if j > i {
                    uf.union(i, j);
                }
            });
        }
    }
    let (labels, cluster_count) = uf.labels();
    ClusterAssignment {
        labels: labels.into_iter().map(Some).collect(),
        cluster_count,
    }
}

/// DBSCAN where a point is core when the total weight within `eps`
/// (itself included) reaches `min_weight`. Border points join the
/// lowest-numbered cluster among their core neighbours; the rest are noise.
pub fn weighted_dbscan(
    cloud: &PointCloud,
    members: &[usize],
    weights: &[f64],
    eps: f64,
    min_weight: f64,
) -> ClusterAssignment {
    assert_eq!(members.len(), weights.len(), "one weight per member");
    let sub = cloud.subset(members);
    let m = members.len();
    if m == 0 {
        return ClusterAssignment {
            labels: Vec::new(),
            cluster_count: 0,
        };
    }
    let tree = KdTree::new(&sub);
    let neighborhoods: Vec<Vec<usize>> = (0..m).map(|i| tree.radius_indices(sub.point(i), eps)).collect();
    let core: Vec<bool> = neighborhoods
        .iter()
        .map(|nb| nb.iter().map(|&j| weights[j]).sum::<f64>() >= min_weight)
        .collect();

    let mut uf = UnionFind::new(m);
    for i in (0..m).filter(|&i| core[i]) {
        for &j in &neighborhoods[i] {
            if j > i && core[j] {
                uf.union(i, j);
            }
        }
    }
    let mut id_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut labels = vec![None; m];
    for i in (0..m).filter(|&i| core[i]) {
        let root = uf.find(i);
        let next = id_of_root.len();
        labels[i] = Some(*id_of_root.entry(root).or_insert(next));
    }
    for i in (0..m).filter(|&i| !core[i]) {
        labels[i] = neighborhoods[i]
            .iter()
            .filter(|&&j| core[j])
            .filter_map(|&j| labels[j])
            .min();
    }
    ClusterAssignment {
        labels,
        cluster_count: id_of_root.len(),
    }
}

/// A slice clustering strategy.
pub trait Clusterer: Send + Sync {
    fn name(&self) -> &'static str;

    /// Clusters `members` (point indices into `cloud`). `weights` carries one
    /// kernel weight per member; strategies that ignore weights may disregard it.
    fn cluster(&self, cloud: &PointCloud, members: &[usize], weights: &[f64]) -> ClusterAssignment;

    /// Distance at which two points count as linked; used to split overlaps
    /// into connected pieces when building multinerve edges.
    fn linkage_radius(&self) -> f64;
}

/// The built-in clusterers, selectable by name.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum ClustererSpec {
    SingleLinkage { delta: f64 },
    Dbscan { eps: f64, min_weight: f64 },
}

impl ClustererSpec {
    pub fn single_linkage(delta: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(invalid_param(format!("single-linkage delta must be positive, got {delta}")));
        }
        Ok(ClustererSpec::SingleLinkage { delta })
    }

    pub fn dbscan(eps: f64, min_weight: f64) -> Result<Self> {
        if !(eps > 0.0) || !(min_weight > 0.0) {
            return Err(invalid_param(format!(
                "dbscan needs eps > 0 and min_weight > 0, got eps = {eps}, min_weight = {min_weight}"
            )));
        }
        Ok(ClustererSpec::Dbscan { eps, min_weight })
    }

    /// Builds a clusterer from a strategy name and a parameter map
    /// (`delta` for single-linkage; `eps` and `min_weight` for dbscan).
    pub fn from_params(name: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let get = |key: &str| {
            params
                .get(key)
                .copied()
                .ok_or_else(|| invalid_param(format!("clusterer `{name}` needs parameter `{key}`")))
        };
        match name {
            "single-linkage" => Self::single_linkage(get("delta")?),
            "dbscan" => Self::dbscan(get("eps")?, get("min_weight")?),
            other => Err(invalid_param(format!(
                "unknown clusterer `{other}` (expected single-linkage or dbscan)"
            ))),
        }
    }
}

impl Clusterer for ClustererSpec {
    fn name(&self) -> &'static str {
        match self {
            ClustererSpec::SingleLinkage { .. } => "single-linkage",
            ClustererSpec::Dbscan { .. } => "dbscan",
        }
    }

    fn cluster(&self, cloud: &PointCloud, members: &[usize], weights: &[f64]) -> ClusterAssignment {
        match *self {
            ClustererSpec::SingleLinkage { delta } => single_linkage(cloud, members, delta),
            ClustererSpec::Dbscan { eps, min_weight } => weighted_dbscan(cloud, members, weights, eps, min_weight),
        }
    }

    fn linkage_radius(&self) -> f64 {
        match *self {
            ClustererSpec::SingleLinkage { delta } => delta,
            ClustererSpec::Dbscan { eps, .. } => eps,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> PointCloud {
        PointCloud::new(xs.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    #[test]
    fn single_linkage_threshold_is_inclusive() {
        let cloud = line(&[0.0, 3.0]);
        assert_eq!(single_linkage(&cloud, &[0, 1], 2.0).cluster_count, 2);
        assert_eq!(single_linkage(&cloud, &[0, 1], 3.0).cluster_count, 1);
    }

    #[test]
    fn single_linkage_chains() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64 * 0.9).collect();
        let cloud = line(&xs);
        let members: Vec<usize> = (0..20).collect();
        let a = single_linkage(&cloud, &members, 1.0);
        assert_eq!(a.cluster_count, 1);
        assert!(a.labels.iter().all(|l| *l == Some(0)));
    }

    #[test]
    fn single_linkage_labels_follow_member_order() {
        let cloud = line(&[10.0, 0.0, 10.5, 0.5]);
        let a = single_linkage(&cloud, &[0, 1, 2, 3], 1.0);
        assert_eq!(a.labels, vec![Some(0), Some(1), Some(0), Some(1)]);
    }

    #[test]
    fn dbscan_isolated_point_is_noise() {
        let cloud = line(&[0.0]);
        let a = weighted_dbscan(&cloud, &[0], &[1.0], 1.0, 2.0);
        assert_eq!(a.labels, vec![None]);
        assert_eq!(a.cluster_count, 0);
    }

    #[test]
    fn dbscan_border_points_join_lowest_cluster() {
        // cores at 0 and 2 (min_weight 2 with neighbours), border point at 1
        let cloud = line(&[0.0, -0.5, 1.0, 2.0, 2.5]);
        let a = weighted_dbscan(&cloud, &[0, 1, 2, 3, 4], &[1.0; 5], 0.6, 2.0);
        assert_eq!(a.cluster_count, 2);
        assert_eq!(a.labels[0], Some(0));
        assert_eq!(a.labels[3], Some(1));
        // point 2 (x = 1.0) has no neighbour within 0.6, so it is noise
        assert_eq!(a.labels[2], None);
    }

    #[test]
    fn dbscan_weights_change_core_status() {
        let cloud = line(&[0.0, 0.1, 0.2]);
        let members = [0, 1, 2];
        let heavy = weighted_dbscan(&cloud, &members, &[1.0; 3], 0.15, 2.0);
        assert_eq!(heavy.cluster_count, 1);
        let light = weighted_dbscan(&cloud, &members, &[0.3; 3], 0.15, 2.0);
        assert_eq!(light.cluster_count, 0);
    }

    #[test]
    fn clusterer_from_params() {
        let mut p = BTreeMap::new();
        p.insert("delta".to_string(), 0.5);
        assert_eq!(
            ClustererSpec::from_params("single-linkage", &p).unwrap(),
            ClustererSpec::SingleLinkage { delta: 0.5 }
        );
        assert!(ClustererSpec::from_params("dbscan", &p).is_err());
        assert!(ClustererSpec::from_params("hdbscan", &p).is_err());
    }
}
