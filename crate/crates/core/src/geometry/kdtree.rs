//! A static k-d tree over a [`PointCloud`], used for exact nearest-neighbour,
//! radius and box queries.
//!
//! Splits are taken at the median of the widest dimension. Leaves hold up to
//! [`LEAF_SIZE`] points. All distance comparisons use squared Euclidean
//! distance accumulated in coordinate order, so results are bit-identical to
//! a brute-force scan computing distances the same way.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{sq_dist, PointCloud};

const LEAF_SIZE: usize = 16;

#[derive(Debug, Clone)]
enum Node {
    Leaf {
        start: usize,
        end: usize,
    },
    Split {
        axis: usize,
        value: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone)]
pub struct KdTree<'a> {
    cloud: &'a PointCloud,
    order: Vec<usize>,
    nodes: Vec<Node>,
}

/// Heap entry ordered lexicographically by (squared distance, index).
#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    d2: f64,
    index: usize,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.d2
            .total_cmp(&other.d2)
            .then(self.index.cmp(&other.index))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> KdTree<'a> {
    pub fn new(cloud: &'a PointCloud) -> Self {
        let mut tree = KdTree {
            cloud,
            order: (0..cloud.len()).collect(),
            nodes: Vec::new(),
        };
        if !cloud.is_empty() {
            tree.build(0, cloud.len());
        }
        tree
    }

    pub fn cloud(&self) -> &PointCloud {
        self.cloud
    }

    fn build(&mut self, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        if end - start <= LEAF_SIZE {
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        let dim = self.cloud.dim();
        let mut axis = 0;
        let mut widest = f64::NEG_INFINITY;
        for d in 0..dim {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for &i in &self.order[start..end] {
                let x = self.cloud.point(i)[d];
                lo = lo.min(x);
                hi = hi.max(x);
            }
            if hi - lo > widest {
                widest = hi - lo;
                axis = d;
            }
        }
        let mid = start + (end - start) / 2;
        let cloud = self.cloud;
        self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            cloud.point(a)[axis].total_cmp(&cloud.point(b)[axis])
        });
        let value = cloud.point(self.order[mid])[axis];
        // placeholder, patched once both children exist
        self.nodes.push(Node::Leaf { start, end });
        let left = self.build(start, mid);
        let right = self.build(mid, end);
        self.nodes[id] = Node::Split {
            axis,
            value,
            left,
            right,
        };
        id
    }

    /// The `k` points closest to `query`, excluding `exclude`, sorted by
    /// (distance, index). Ties are broken by lower index.
    pub fn knn(&self, query: &[f64], k: usize, exclude: Option<usize>) -> Vec<usize> {
        if k == 0 || self.nodes.is_empty() {
            return Vec::new();
        }
        let mut heap = BinaryHeap::with_capacity(k + 1);
        self.knn_rec(0, query, k, exclude, &mut heap);
        let mut out = heap.into_vec();
        out.sort();
        out.into_iter().map(|c| c.index).collect()
    }

    fn knn_rec(
        &self,
        node: usize,
        query: &[f64],
        k: usize,
        exclude: Option<usize>,
        heap: &mut BinaryHeap<Candidate>,
    ) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.order[start..end] {
                    if Some(i) == exclude {
                        continue;
                    }
                    let cand = Candidate {
                        d2: sq_dist(query, self.cloud.point(i)),
                        index: i,
                    };
                    if heap.len() < k {
                        heap.push(cand);
                    } else if cand < *heap.peek().expect("heap is full") {
                        heap.pop();
                        heap.push(cand);
                    }
                }
            }
            Node::Split {
                axis,
                value,
                left,
                right,
            } => {
                let diff = query[axis] - value;
                let (near, far) = if diff < 0.0 { (left, right) } else { (right, left) };
                self.knn_rec(near, query, k, exclude, heap);
                // ties at the bound may still hold a lower index, so compare with <=
                let visit_far = heap.len() < k || diff * diff <= heap.peek().map_or(f64::INFINITY, |c| c.d2);
                if visit_far {
                    self.knn_rec(far, query, k, exclude, heap);
                }
            }
        }
    }

    /// Calls `visit(index, squared_distance)` for every point within `radius`
    /// (inclusive) of `query`.
    pub fn within_radius(&self, query: &[f64], radius: f64, mut visit: impl FnMut(usize, f64)) {
        if self.nodes.is_empty() {
            return;
        }
        let r2 = radius * radius;
        self.radius_rec(0, query, r2, &mut visit);
    }

    fn radius_rec(&self, node: usize, query: &[f64], r2: f64, visit: &mut impl FnMut(usize, f64)) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.order[start..end] {
                    let d2 = sq_dist(query, self.cloud.point(i));
                    if d2 <= r2 {
                        visit(i, d2);
                    }
                }
            }
            Node::Split {
                axis,
                value,
                left,
                right,
            } => {
                let diff = query[axis] - value;
                let (near, far) = if diff < 0.0 { (left, right) } else { (right, left) };
                self.radius_rec(near, query, r2, visit);
                if diff * diff <= r2 {
                    self.radius_rec(far, query, r2, visit);
                }
            }
        }
    }

    /// Indices of points within `radius` of `query`, sorted ascending.
    pub fn radius_indices(&self, query: &[f64], radius: f64) -> Vec<usize> {
        let mut out = Vec::new();
        self.within_radius(query, radius, |i, _| out.push(i));
        out.sort_unstable();
        out
    }

    /// Calls `visit(index)` for every point `p` with `|p[d] - query[d]| < half[d]`
    /// for all dimensions `d`, or `p[d] == query[d]` when `half[d] == 0`.
    pub fn within_box(&self, query: &[f64], half: &[f64], mut visit: impl FnMut(usize)) {
        if self.nodes.is_empty() {
            return;
        }
        self.box_rec(0, query, half, &mut visit);
    }

    fn box_rec(&self, node: usize, query: &[f64], half: &[f64], visit: &mut impl FnMut(usize)) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.order[start..end] {
                    let p = self.cloud.point(i);
                    let inside = p.iter().zip(query).zip(half).all(|((&x, &q), &h)| {
                        let gap = (x - q).abs();
                        if h > 0.0 {
                            gap < h
                        } else {
                            gap == 0.0
                        }
                    });
                    if inside {
                        visit(i);
                    }
                }
            }
            Node::Split {
                axis,
                value,
                left,
                right,
            } => {
                let q = query[axis];
                let h = half[axis];
                // left holds coordinates <= value, right holds coordinates >= value
                if q - h <= value {
                    self.box_rec(left, query, half, visit);
                }
                if q + h >= value {
                    self.box_rec(right, query, half, visit);
                }
            }
        }
    }
}
