//! Exact Reeb graph of the Rips 2-complex of a point cloud under the
//! piecewise-linear extension of the lens.
//!
//! Let `c_0 < ... < c_m` be the distinct lens values. Between two consecutive
//! values the preimage of the open slab `(c_k, c_{k+1})` is a product, so each
//! of its connected components is one arc of the Reeb graph. Components are
//! found by union-find over the edges spanning the slab; a triangle spanning
//! the slab joins its long edge with whichever short edge also spans it.
//!
//! At a level `c_k` the arcs just below, the arcs just above and the data
//! points with value `c_k` are glued along the edges meeting that level. Each
//! resulting class is a level-set component. Classes containing no data
//! point are regular (one arc in, one arc out) and are spliced away.

use crate::cluster::UnionFind;
use crate::error::{Error, Result};
use crate::geometry::{rips_edges, LensMap, PointCloud};
use crate::mapper::{MapperEdge, MapperGraph, MapperVertex};

const NONE: usize = usize::MAX;

struct Triangle {
    /// Edge joining the lowest and highest vertex.
    long: usize,
    /// Edge joining the lowest and middle vertex.
    lower: usize,
    /// Edge joining the middle and highest vertex.
    upper: usize,
    lo: usize,
    mid: usize,
    hi: usize,
}

fn triangles(edges: &[(usize, usize)], level: &[usize], n: usize) -> Vec<Triangle> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (e, &(a, b)) in edges.iter().enumerate() {
        adj[a].push((b, e));
    }
    let mut out = Vec::new();
    for (e_ab, &(a, b)) in edges.iter().enumerate() {
        let (na, nb) = (&adj[a], &adj[b]);
        let (mut i, mut j) = (0, 0);
        while i < na.len() && j < nb.len() {
            let (ca, e_ac) = na[i];
            let (cb, e_bc) = nb[j];
            if ca <= b || ca < cb {
                i += 1;
            } else if cb < ca {
                j += 1;
            } else {
                // vertices a, b, c = ca with edges ab, ac, bc
                let mut vs = [(level[a], a), (level[b], b), (level[ca], ca)];
                vs.sort_unstable();
                let edge = |u: usize, v: usize| {
                    let key = (u.min(v), u.max(v));
                    if key == (a, b) {
                        e_ab
                    } else if key == (a, ca) {
                        e_ac
                    } else {
                        e_bc
                    }
                };
                out.push(Triangle {
                    long: edge(vs[0].1, vs[2].1),
                    lower: edge(vs[0].1, vs[1].1),
                    upper: edge(vs[1].1, vs[2].1),
                    lo: vs[0].0,
                    mid: vs[1].0,
                    hi: vs[2].0,
                });
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Reeb graph of the Rips complex at scale `delta` (2-skeleton), returned as
/// a multigraph. Each vertex is a critical level-set component; its
/// `interval_index` is the level rank, `fbar` the lens value, and `members`
/// the data points lying in that component. Each edge is one arc.
pub fn reeb_oracle(cloud: &PointCloud, lens: &LensMap, delta: f64) -> Result<MapperGraph> {
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
    }
    lens.check_matches(cloud)?;
    let mut levels: Vec<f64> = lens.values().to_vec();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    if levels.len() < 2 {
        return Err(Error::InvalidData("lens needs at least two distinct values".into()));
    }
    let m = levels.len();
    let n = cloud.len();
    let level: Vec<usize> = lens
        .values()
        .iter()
        .map(|t| levels.binary_search_by(|c| c.total_cmp(t)).expect("lens value is a level"))
        .collect();
    let edges = rips_edges(cloud, delta);
    // endpoints ordered by level
    let ends: Vec<(usize, usize)> = edges
        .iter()
        .map(|&(a, b)| if level[a] <= level[b] { (a, b) } else { (b, a) })
        .collect();
    let span = |e: usize| (level[ends[e].0], level[ends[e].1]);
    let tris = triangles(&edges, &level, n);

    let mut points_at: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (p, &k) in level.iter().enumerate() {
        points_at[k].push(p);
    }
    let mut edges_from: Vec<Vec<usize>> = vec![Vec::new(); m];
    for e in 0..edges.len() {
        edges_from[span(e).0].push(e);
    }
    let mut tris_from: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (t, tri) in tris.iter().enumerate() {
        if tri.hi > tri.lo {
            tris_from[tri.lo].push(t);
        }
    }

    let mut node_members: Vec<Vec<usize>> = Vec::new();
    let mut node_level: Vec<usize> = Vec::new();
    // arcs as (lower node, upper node)
    let mut arcs: Vec<(usize, usize)> = Vec::new();

    // arc id of each edge spanning the previous / current slab
    let mut prev_arc = vec![NONE; edges.len()];
    let mut cur_arc = vec![NONE; edges.len()];
    let mut local = vec![NONE; edges.len()];
    let mut vertex_slot = vec![NONE; n];
    let mut prev_edges: Vec<usize> = Vec::new();
    let mut prev_tris: Vec<usize> = Vec::new();
    let (mut prev_base, mut prev_count) = (0, 0);

    for k in 0..m {
        // slab (c_k, c_{k+1})
        let cur_edges: Vec<usize> = prev_edges
            .iter()
            .chain(&edges_from[k])
            .copied()
            .filter(|&e| span(e).1 > k)
            .collect();
        let cur_tris: Vec<usize> = prev_tris.iter().chain(&tris_from[k]).copied().filter(|&t| tris[t].hi > k).collect();
        for (i, &e) in cur_edges.iter().enumerate() {
            local[e] = i;
        }
        let mut slab = UnionFind::new(cur_edges.len());
        for &t in &cur_tris {
            let tri = &tris[t];
            let side = if k < tri.mid { tri.lower } else { tri.upper };
            slab.union(local[tri.long], local[side]);
        }
        let (labels, cur_count) = slab.labels();
        let cur_base = arcs.len();
        for (i, &e) in cur_edges.iter().enumerate() {
            cur_arc[e] = cur_base + labels[i];
            local[e] = NONE;
        }
        arcs.extend(std::iter::repeat((NONE, NONE)).take(cur_count));

        // level c_k: previous arcs, then current arcs, then points
        for (i, &p) in points_at[k].iter().enumerate() {
            vertex_slot[p] = prev_count + cur_count + i;
        }
        let below = |e: usize| prev_arc[e] - prev_base;
        let above = |e: usize| prev_count + cur_arc[e] - cur_base;
        let mut glue = UnionFind::new(prev_count + cur_count + points_at[k].len());
        for &e in &prev_edges {
            if span(e).1 > k {
                glue.union(below(e), above(e));
            } else {
                glue.union(below(e), vertex_slot[ends[e].1]);
            }
        }
        for &e in &edges_from[k] {
            let (a, b) = ends[e];
            if span(e).1 > k {
                glue.union(above(e), vertex_slot[a]);
            } else {
                glue.union(vertex_slot[a], vertex_slot[b]);
            }
        }
        let (classes, class_count) = glue.labels();
        let node_base = node_members.len();
        node_members.extend(std::iter::repeat(Vec::new()).take(class_count));
        node_level.extend(std::iter::repeat(k).take(class_count));
        for &p in &points_at[k] {
            node_members[node_base + classes[vertex_slot[p]]].push(p);
            vertex_slot[p] = NONE;
        }
        for j in 0..prev_count {
            arcs[prev_base + j].1 = node_base + classes[j];
        }
        for j in 0..cur_count {
            arcs[cur_base + j].0 = node_base + classes[prev_count + j];
        }

        for &e in &prev_edges {
            prev_arc[e] = NONE;
        }
        std::mem::swap(&mut prev_arc, &mut cur_arc);
        prev_edges = cur_edges;
        prev_tris = cur_tris;
        prev_base = cur_base;
        prev_count = cur_count;
    }
    debug_assert!(prev_edges.is_empty());

    splice_regular_nodes(&node_members, &node_level, &levels, &arcs)
}

fn splice_regular_nodes(
    node_members: &[Vec<usize>],
    node_level: &[usize],
    levels: &[f64],
    arcs: &[(usize, usize)],
) -> Result<MapperGraph> {
    let node_count = node_members.len();
    let mut up: Vec<Vec<usize>> = vec![Vec::new(); node_count];
    let mut down_degree = vec![0; node_count];
    for (a, &(lo, hi)) in arcs.iter().enumerate() {
        up[lo].push(a);
        down_degree[hi] += 1;
    }
    let keep: Vec<bool> = (0..node_count)
        .map(|v| !(node_members[v].is_empty() && down_degree[v] == 1 && up[v].len() == 1))
        .collect();

    let mut new_id = vec![NONE; node_count];
    let mut vertices: Vec<MapperVertex> = Vec::new();
    for v in (0..node_count).filter(|&v| keep[v]) {
        new_id[v] = vertices.len();
        let level = node_level[v];
        let cluster_id = vertices.iter().rev().take_while(|x| x.interval_index == level).count();
        let mut members = node_members[v].clone();
        members.sort_unstable();
        vertices.push(MapperVertex {
            interval_index: level,
            cluster_id,
            members,
            fbar: levels[level],
        });
    }

    let mut edges = Vec::new();
    for &(lo, mut hi) in arcs {
        if !keep[lo] {
            // interior of a spliced chain; emitted from its lower end
            continue;
        }
        while !keep[hi] {
            hi = arcs[up[hi][0]].1;
        }
        edges.push(MapperEdge {
            source: new_id[lo],
            target: new_id[hi],
            weight: 1.0,
            multiplicity: 1,
        });
    }
    edges.sort_by_key(|e| (e.source, e.target));
    Ok(MapperGraph {
        vertices,
        edges,
        is_multigraph: true,
    })
}
