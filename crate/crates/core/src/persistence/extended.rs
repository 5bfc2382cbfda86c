//! Extended persistence of a vertex-valued graph by boundary-matrix reduction.
//!
//! The extended filtration is encoded as an ordinary filtration of the cone
//! over the graph. The cone apex comes first, then the graph itself in
//! ascending order (each vertex followed by the edges it completes), then the
//! cone over every vertex and edge in descending order. Vertices with equal
//! values are ordered by index.
//!
//! Pairs translate to diagram points as follows:
//!
//! | creator       | destroyer      | kind |
//! |---------------|----------------|------|
//! | vertex        | edge           | Ord0 |
//! | vertex        | cone edge      | Ext0 |
//! | edge          | cone triangle  | Ext1 |
//! | cone edge     | cone triangle  | Rel1 |
//!
//! Ord0 and Rel1 pairs with zero persistence are dropped.

use std::collections::HashMap;

use super::{PersistenceDiagram, PersistencePoint, PointKind};
use crate::mapper::MapperGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cell {
    Apex,
    Vertex,
    Edge,
    ConeVertex,
    ConeEdge,
}

/// Extended persistence diagram of a graph with `vertex_count` vertices,
/// the given edges (parallel edges allowed, self-loops ignored) and one value
/// per vertex.
pub fn extended_persistence(vertex_count: usize, edges: &[(usize, usize)], values: &[f64]) -> PersistenceDiagram {
    assert_eq!(values.len(), vertex_count, "one value per vertex");
    let edges: Vec<(usize, usize)> = edges.iter().copied().filter(|(a, b)| a != b).collect();

    let mut order: Vec<usize> = (0..vertex_count).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut rank = vec![0; vertex_count];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }

    // edges keyed by their upper and lower endpoint in the vertex order
    let mut by_upper: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
    let mut by_lower: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
    for (e, &(a, b)) in edges.iter().enumerate() {
        let (lo, hi) = if rank[a] < rank[b] { (a, b) } else { (b, a) };
        by_upper[hi].push(e);
        by_lower[lo].push(e);
    }
    let other = |e: usize, v: usize| if edges[e].0 == v { edges[e].1 } else { edges[e].0 };
    for v in 0..vertex_count {
        by_upper[v].sort_by_key(|&e| (rank[other(e, v)], e));
        by_lower[v].sort_by_key(|&e| (std::cmp::Reverse(rank[other(e, v)]), e));
    }

    let total = 1 + 2 * vertex_count + 2 * edges.len();
    let mut kind = Vec::with_capacity(total);
    let mut value = Vec::with_capacity(total);
    let mut columns: Vec<Vec<usize>> = Vec::with_capacity(total);
    let mut vertex_cell = vec![0; vertex_count];
    let mut edge_cell = vec![0; edges.len()];
    let mut cone_vertex_cell = vec![0; vertex_count];

    kind.push(Cell::Apex);
    value.push(f64::NEG_INFINITY);
    columns.push(Vec::new());
    for &v in &order {
        vertex_cell[v] = columns.len();
        kind.push(Cell::Vertex);
        value.push(values[v]);
        columns.push(Vec::new());
        for &e in &by_upper[v] {
            edge_cell[e] = columns.len();
            kind.push(Cell::Edge);
            value.push(values[v]);
            let mut col = vec![vertex_cell[edges[e].0], vertex_cell[edges[e].1]];
            col.sort_unstable();
            columns.push(col);
        }
    }
    for &v in order.iter().rev() {
        cone_vertex_cell[v] = columns.len();
        kind.push(Cell::ConeVertex);
        value.push(values[v]);
        columns.push(vec![0, vertex_cell[v]]);
        for &e in &by_lower[v] {
            let (a, b) = edges[e];
            let mut col = vec![edge_cell[e], cone_vertex_cell[a], cone_vertex_cell[b]];
            col.sort_unstable();
            kind.push(Cell::ConeEdge);
            value.push(values[v]);
            columns.push(col);
        }
    }

    let mut points = Vec::new();
    let mut pivot_owner: HashMap<usize, usize> = HashMap::new();
    for j in 0..columns.len() {
        let mut col = std::mem::take(&mut columns[j]);
        while let Some(&low) = col.last() {
            match pivot_owner.get(&low) {
                Some(&k) => col = symmetric_difference(&col, &columns[k]),
                None => break,
            }
        }
        if let Some(&low) = col.last() {
            pivot_owner.insert(low, j);
            let (birth, death) = (value[low], value[j]);
            let point = match (kind[low], kind[j]) {
                (Cell::Vertex, Cell::Edge) => Some(PointKind::Ord0),
                (Cell::Vertex, Cell::ConeVertex) => Some(PointKind::Ext0),
                (Cell::Edge, Cell::ConeEdge) => Some(PointKind::Ext1),
                (Cell::ConeVertex, Cell::ConeEdge) => Some(PointKind::Rel1),
                (a, b) => unreachable!("unexpected pair {a:?} / {b:?}"),
            };
            if let Some(kind) = point {
                let trivial = matches!(kind, PointKind::Ord0 | PointKind::Rel1) && birth == death;
                if !trivial {
                    points.push(PersistencePoint::new(birth, death, kind));
                }
            }
        }
        columns[j] = col;
    }
    PersistenceDiagram::new(points)
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Extended persistence of a Mapper graph under its vertex values `fbar`.
pub fn graph_diagram(g: &MapperGraph) -> PersistenceDiagram {
    extended_persistence(g.vertices.len(), &g.edge_pairs(), &g.fbar())
}
