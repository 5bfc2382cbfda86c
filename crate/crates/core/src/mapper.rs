//! Density-based Mapper graph assembly.
//!
//! Points are assigned to kerneled sets, each set is clustered, clusters
//! become vertices, and consecutive sets sharing points produce edges. In
//! multinerve mode every connected piece of a shared region yields its own
//! edge; otherwise one edge per cluster pair is emitted.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cluster::{single_linkage, ClusterAssignment, Clusterer, ClustererSpec, UnionFind};
use crate::cover::GomicCover;
use crate::density::{DensityProfile, WidthScaler};
use crate::error::{Error, Result};
use crate::geometry::{rips_edges, LensMap, PointCloud};
use crate::kernel::{build_kerneled_cover, KernelSpec, KerneledSet};

/// How shared points contribute to edge weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightMode {
    /// 1 per shared point.
    #[default]
    Count,
    /// `min(K_i(x), K_{i+1}(x))` per shared point.
    Kernel,
}

impl std::str::FromStr for WeightMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "count" => Ok(WeightMode::Count),
            "kernel" => Ok(WeightMode::Kernel),
            other => Err(Error::InvalidParameter(format!(
                "unknown weight mode `{other}` (expected count or kernel)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapperVertex {
    pub interval_index: usize,
    pub cluster_id: usize,
    /// Sorted point indices.
    pub members: Vec<usize>,
    /// Midpoint of the member lens range.
    pub fbar: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapperEdge {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapperGraph {
    pub vertices: Vec<MapperVertex>,
    pub edges: Vec<MapperEdge>,
    pub is_multigraph: bool,
}

impl MapperGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Connected component count.
    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.vertices.len());
        for e in &self.edges {
            uf.union(e.source, e.target);
        }
        uf.labels().1
    }

    /// `(b0, b1)` of the graph; parallel edges count towards `b1`.
    pub fn betti(&self) -> (usize, usize) {
        let c = self.component_count();
        (c, self.edges.len() + c - self.vertices.len())
    }

    /// Endpoint pairs of all edges, in order.
    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e.source, e.target)).collect()
    }

    /// `fbar` of every vertex.
    pub fn fbar(&self) -> Vec<f64> {
        self.vertices.iter().map(|v| v.fbar).collect()
    }

    /// Number of vertices per interval index, up to `interval_count`.
    pub fn vertices_per_interval(&self, interval_count: usize) -> Vec<usize> {
        let mut counts = vec![0; interval_count];
        for v in &self.vertices {
            if v.interval_index < interval_count {
                counts[v.interval_index] += 1;
            }
        }
        counts
    }
}

/// Everything besides the data and the cover that determines a Mapper graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapperParams {
    pub kernel: KernelSpec,
    pub scaler: WidthScaler,
    /// Neighbour count for the density estimate.
    pub k: usize,
    pub clusterer: ClustererSpec,
    pub weight_mode: WeightMode,
    /// Pass kernel values to the clusterer as point weights.
    pub use_kernel_weights: bool,
    pub multinerve: bool,
}

impl MapperParams {
    /// Square kernel, no density scaling, single-linkage at `delta`.
    pub fn standard(delta: f64) -> Result<Self> {
        Ok(MapperParams {
            kernel: KernelSpec::square(),
            scaler: WidthScaler::standard(),
            k: 15,
            clusterer: ClustererSpec::single_linkage(delta)?,
            weight_mode: WeightMode::Count,
            use_kernel_weights: false,
            multinerve: false,
        })
    }
}

/// A Mapper graph together with the intermediate results that produced it.
#[derive(Debug, Clone)]
pub struct MapperRun {
    pub graph: MapperGraph,
    pub sets: Vec<KerneledSet>,
    pub multipliers: Vec<f64>,
    /// `None` when the width scaler is trivial and density was skipped.
    pub profile: Option<DensityProfile>,
}

pub fn build_mapper(cloud: &PointCloud, lens: &LensMap, cover: &GomicCover, params: &MapperParams) -> Result<MapperGraph> {
    Ok(build_mapper_detailed(cloud, lens, cover, params)?.graph)
}

pub fn build_mapper_detailed(
    cloud: &PointCloud,
    lens: &LensMap,
    cover: &GomicCover,
    params: &MapperParams,
) -> Result<MapperRun> {
    lens.check_matches(cloud)?;
    if cover.is_empty() {
        return Err(Error::DegenerateCover("cover has no intervals".into()));
    }
    let (multipliers, profile) = if params.scaler.is_trivial() {
        (vec![1.0; cloud.len()], None)
    } else {
        let profile = DensityProfile::compute(cloud, lens, params.k)?;
        (profile.multipliers(&params.scaler), Some(profile))
    };
    let sets = build_kerneled_cover(lens, cover, &params.kernel, &multipliers)?;
    let graph = build_from_sets(cloud, lens, &sets, params);
    Ok(MapperRun {
        graph,
        sets,
        multipliers,
        profile,
    })
}

/// Clusters prebuilt cover sets (ordered by interval) and connects them.
/// Only `clusterer`, `weight_mode`, `use_kernel_weights` and `multinerve`
/// are read from `params`.
pub fn build_from_sets(cloud: &PointCloud, lens: &LensMap, sets: &[KerneledSet], params: &MapperParams) -> MapperGraph {
    let assignments: Vec<ClusterAssignment> = sets
        .par_iter()
        .map(|set| {
            let weights = if params.use_kernel_weights {
                set.weights()
            } else {
                vec![1.0; set.len()]
            };
            params.clusterer.cluster(cloud, &set.index_vec(), &weights)
        })
        .collect();

    let mut vertices = Vec::new();
    // per set: vertex id of each member position
    let mut vertex_of: Vec<Vec<Option<usize>>> = Vec::with_capacity(sets.len());
    for (slice, (set, assignment)) in sets.iter().zip(&assignments).enumerate() {
        if assignment.cluster_count == 0 {
            log::debug!("slice {slice} has no clusters");
        }
        let base = vertices.len();
        for (cluster_id, group) in assignment.groups().into_iter().enumerate() {
            let members: Vec<usize> = group.iter().map(|&pos| set.members[pos].0).collect();
            let (lo, hi) = members
                .iter()
                .map(|&i| lens.get(i))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), t| (lo.min(t), hi.max(t)));
            vertices.push(MapperVertex {
                interval_index: set.interval_index,
                cluster_id,
                members,
                fbar: lo + (hi - lo) / 2.0,
            });
        }
        vertex_of.push(assignment.labels.iter().map(|l| l.map(|c| base + c)).collect());
    }

    let edges: Vec<MapperEdge> = (0..sets.len().saturating_sub(1))
        .into_par_iter()
        .map(|i| slice_pair_edges(cloud, &sets[i], &sets[i + 1], &vertex_of[i], &vertex_of[i + 1], params))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();

    MapperGraph {
        vertices,
        edges,
        is_multigraph: params.multinerve,
    }
}

fn slice_pair_edges(
    cloud: &PointCloud,
    left: &KerneledSet,
    right: &KerneledSet,
    left_vertex: &[Option<usize>],
    right_vertex: &[Option<usize>],
    params: &MapperParams,
) -> Vec<MapperEdge> {
    // shared points grouped by the vertex pair they connect, in point order
    let mut shared: BTreeMap<(usize, usize), Vec<(usize, f64)>> = BTreeMap::new();
    let (mut a, mut b) = (0, 0);
    while a < left.members.len() && b < right.members.len() {
        let (pa, wa) = left.members[a];
        let (pb, wb) = right.members[b];
        match pa.cmp(&pb) {
            std::cmp::Ordering::Less => a += 1,
            std::cmp::Ordering::Greater => b += 1,
            std::cmp::Ordering::Equal => {
                if let (Some(u), Some(v)) = (left_vertex[a], right_vertex[b]) {
                    let w = match params.weight_mode {
                        WeightMode::Count => 1.0,
                        WeightMode::Kernel => wa.min(wb),
                    };
                    shared.entry((u, v)).or_default().push((pa, w));
                }
                a += 1;
                b += 1;
            }
        }
    }

    let mut edges = Vec::new();
    for ((u, v), points) in shared {
        if !params.multinerve {
            edges.push(MapperEdge {
                source: u,
                target: v,
                weight: points.iter().map(|&(_, w)| w).sum(),
                multiplicity: 1,
            });
            continue;
        }
        let idx: Vec<usize> = points.iter().map(|&(p, _)| p).collect();
        let pieces = single_linkage(cloud, &idx, params.clusterer.linkage_radius());
        let mut weights = vec![0.0; pieces.cluster_count];
        for (label, &(_, w)) in pieces.labels.iter().zip(&points) {
            weights[label.expect("single linkage labels every point")] += w;
        }
        edges.extend(weights.into_iter().map(|weight| MapperEdge {
            source: u,
            target: v,
            weight,
            multiplicity: 1,
        }));
    }
    edges
}

/// Merges parallel edges, summing weights and multiplicities.
pub fn collapse_multigraph(g: &MapperGraph) -> MapperGraph {
    let mut merged: BTreeMap<(usize, usize), (f64, usize)> = BTreeMap::new();
    let mut order = Vec::new();
    for e in &g.edges {
        let key = (e.source.min(e.target), e.source.max(e.target));
        let entry = merged.entry(key).or_insert_with(|| {
            order.push(key);
            (0.0, 0)
        });
        entry.0 += e.weight;
        entry.1 += e.multiplicity;
    }
    let edges = order
        .into_iter()
        .map(|key| {
            let (weight, multiplicity) = merged[&key];
            MapperEdge {
                source: key.0,
                target: key.1,
                weight,
                multiplicity,
            }
        })
        .collect();
    MapperGraph {
        vertices: g.vertices.clone(),
        edges,
        is_multigraph: false,
    }
}

/// Rips edges at scale `delta` whose lens span contains the whole overlap of
/// two consecutive cover intervals.
pub fn find_intersection_crossing_edges(
    cloud: &PointCloud,
    lens: &LensMap,
    delta: f64,
    cover: &GomicCover,
) -> Result<Vec<(usize, usize)>> {
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
    }
    lens.check_matches(cloud)?;
    let overlaps: Vec<(f64, f64)> = (0..cover.len().saturating_sub(1)).filter_map(|i| cover.overlap(i)).collect();
    Ok(rips_edges(cloud, delta)
        .into_iter()
        .filter(|&(i, j)| {
            let (a, b) = (lens.get(i), lens.get(j));
            let (lo, hi) = (a.min(b), a.max(b));
            overlaps.iter().any(|&(o_lo, o_hi)| lo <= o_lo && o_hi <= hi)
        })
        .collect())
}
