//! Point-cloud primitives: the sample cloud, its lens values, exact k-nearest
//! neighbours, and the metric quantities used to check convergence hypotheses
//! (directed Hausdorff distance, modulus of continuity).
//!
//! The metric is Euclidean throughout.

mod kdtree;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid_param, Error, Result};

pub use kdtree::KdTree;

/// Squared Euclidean distance, accumulated in coordinate order.
#[inline]
pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    sq_dist(a, b).sqrt()
}

/// A finite sample of points in `R^d`, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidData("point cloud needs at least one point".into()))?;
        let mut coords = Vec::with_capacity(dim * points.len());
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::InvalidData(format!(
                    "point {i} has dimension {}, expected {dim}",
                    p.len()
                )));
            }
            coords.extend_from_slice(p);
        }
        Self::from_flat(dim, coords)
    }

    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidData("dimension must be at least 1".into()));
        }
        if coords.is_empty() || coords.len() % dim != 0 {
            return Err(Error::InvalidData(format!(
                "{} coordinates do not form whole points of dimension {dim}",
                coords.len()
            )));
        }
        if let Some(pos) = coords.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidData(format!(
                "non-finite coordinate in point {}",
                pos / dim
            )));
        }
        Ok(PointCloud { dim, coords })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.coords
    }

    /// A new cloud holding the given points in the given order.
    pub fn subset(&self, indices: &[usize]) -> PointCloud {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        PointCloud {
            dim: self.dim,
            coords,
        }
    }

    /// (min, max) of coordinate `axis` over all points.
    pub fn axis_range(&self, axis: usize) -> (f64, f64) {
        self.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p[axis]), hi.max(p[axis]))
        })
    }
}

/// Lens (Morse-type function) values, one per point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LensMap {
    values: Vec<f64>,
    lo: f64,
    hi: f64,
}

impl LensMap {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidData("lens needs at least one value".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidData(format!("non-finite lens value at point {i}")));
        }
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(LensMap { values, lo, hi })
    }

    /// Projection of the cloud onto one coordinate axis.
    pub fn from_axis(cloud: &PointCloud, axis: usize) -> Result<Self> {
        if axis >= cloud.dim() {
            return Err(invalid_param(format!(
                "axis {axis} out of range for dimension {}",
                cloud.dim()
            )));
        }
        Self::new(cloud.iter().map(|p| p[axis]).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub(crate) fn check_matches(&self, cloud: &PointCloud) -> Result<()> {
        if self.len() != cloud.len() {
            return Err(Error::InvalidData(format!(
                "lens has {} values but the cloud has {} points",
                self.len(),
                cloud.len()
            )));
        }
        Ok(())
    }
}

/// The `k` nearest neighbours of every point, each list sorted by distance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborGraph {
    k: usize,
    neighbors: Vec<Vec<usize>>,
}

impl NeighborGraph {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }
}

/// Exact k-nearest neighbours of every point (self excluded, ties broken by
/// lower index).
pub fn knn(cloud: &PointCloud, k: usize) -> Result<NeighborGraph> {
    let n = cloud.len();
    if k == 0 || k >= n {
        return Err(invalid_param(format!(
            "k must satisfy 1 <= k < n (k = {k}, n = {n})"
        )));
    }
    let tree = KdTree::new(cloud);
    let neighbors = (0..n)
        .into_par_iter()
        .map(|i| tree.knn(cloud.point(i), k, Some(i)))
        .collect();
    Ok(NeighborGraph { k, neighbors })
}

/// Largest distance from a point of `from` to its nearest point of `to`.
pub fn directed_hausdorff(from: &PointCloud, to: &PointCloud) -> Result<f64> {
    if from.dim() != to.dim() {
        return Err(invalid_param(format!(
            "dimension mismatch: {} vs {}",
            from.dim(),
            to.dim()
        )));
    }
    let tree = KdTree::new(to);
    let worst = from
        .iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|p| {
            let j = tree.knn(p, 1, None)[0];
            sq_dist(p, to.point(j))
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst.sqrt())
}

/// Symmetric Hausdorff distance between a sample and a dense reference
/// sample that stands in for the underlying space.
pub fn hausdorff_estimate(sample: &PointCloud, reference: &PointCloud) -> Result<f64> {
    let a = directed_hausdorff(sample, reference)?;
    let b = directed_hausdorff(reference, sample)?;
    Ok(a.max(b))
}

/// Largest lens difference over pairs of points within ambient distance
/// `delta`; zero when no pair qualifies.
pub fn modulus_of_continuity(cloud: &PointCloud, lens: &LensMap, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(invalid_param(format!("delta must be positive, got {delta}")));
    }
    lens.check_matches(cloud)?;
    let tree = KdTree::new(cloud);
    let omega = (0..cloud.len())
        .into_par_iter()
        .map(|i| {
            let ti = lens.get(i);
            let mut worst: f64 = 0.0;
            tree.within_radius(cloud.point(i), delta, |j, _| {
                worst = worst.max((ti - lens.get(j)).abs());
            });
            worst
        })
        .reduce(|| 0.0, f64::max);
    Ok(omega)
}

/// Edges `(i, j)`, `i < j`, of the Rips graph at scale `delta` (pairs with
/// distance `<= delta`), sorted lexicographically.
pub fn rips_edges(cloud: &PointCloud, delta: f64) -> Vec<(usize, usize)> {
    let tree = KdTree::new(cloud);
    let per_point: Vec<Vec<(usize, usize)>> = (0..cloud.len())
        .into_par_iter()
        .map(|i| {
            tree.radius_indices(cloud.point(i), delta)
                .into_iter()
                .filter(|&j| j > i)
                .map(|j| (i, j))
                .collect()
        })
        .collect();
    per_point.into_iter().flatten().collect()
}
