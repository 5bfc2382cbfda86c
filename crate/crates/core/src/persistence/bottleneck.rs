//! Exact bottleneck distance and one-sided diagram containment.
//!
//! Points are only matched to points of the same kind. Every point may also
//! be sent to the diagonal at cost `|birth - death| / 2`.

use super::{PersistenceDiagram, PersistencePoint, PointKind};

/// Coordinate tolerance used by [`diagram_gap`].
pub const DIAGRAM_TOLERANCE: f64 = 1e-9;

fn linf(a: &PersistencePoint, b: &PersistencePoint) -> f64 {
    (a.birth - b.birth).abs().max((a.death - b.death).abs())
}

fn diagonal_cost(p: &PersistencePoint) -> f64 {
    (p.birth - p.death).abs() / 2.0
}

/// Kuhn's augmenting-path bipartite matching; returns the matching size.
fn max_matching(left: usize, right: usize, adj: &[Vec<usize>]) -> usize {
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].map_or(true, |w| augment(w, adj, seen, owner)) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; right];
    let mut seen = vec![false; right];
    let mut size = 0;
    for u in 0..left {
        seen.iter_mut().for_each(|s| *s = false);
        if augment(u, adj, &mut seen, &mut owner) {
            size += 1;
        }
    }
    size
}

/// Whether `a` and `b` admit a partial matching of cost at most `t`.
fn feasible(a: &[PersistencePoint], b: &[PersistencePoint], t: f64) -> bool {
    // left: a points then one diagonal slot per b point
    // right: b points then one diagonal slot per a point
    let (n, m) = (a.len(), b.len());
    let mut adj = vec![Vec::new(); n + m];
    for (i, p) in a.iter().enumerate() {
        for (j, q) in b.iter().enumerate() {
            if linf(p, q) <= t {
                adj[i].push(j);
            }
        }
        if diagonal_cost(p) <= t {
            adj[i].push(m + i);
        }
    }
    for (j, q) in b.iter().enumerate() {
        if diagonal_cost(q) <= t {
            adj[n + j].push(j);
        }
        adj[n + j].extend(m..m + n);
    }
    max_matching(n + m, n + m, &adj) == n + m
}

fn bottleneck_points(a: &[PersistencePoint], b: &[PersistencePoint]) -> f64 {
    let mut candidates: Vec<f64> = vec![0.0];
    candidates.extend(a.iter().chain(b).map(diagonal_cost));
    for p in a {
        candidates.extend(b.iter().map(|q| linf(p, q)));
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(a, b, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Bottleneck distance restricted to each point kind.
pub fn bottleneck_by_kind(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> Vec<(PointKind, f64)> {
    PointKind::ALL
        .iter()
        .map(|&k| (k, bottleneck_points(&d1.of_kind(k), &d2.of_kind(k))))
        .collect()
}

/// Bottleneck distance between two diagrams.
pub fn bottleneck(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> f64 {
    bottleneck_by_kind(d1, d2).into_iter().map(|(_, d)| d).fold(0.0, f64::max)
}

/// Largest persistence among points of `reference` left unmatched by the
/// best one-to-one matching into `candidate`, where two points match when
/// they share a kind and both coordinates agree within `tol`. Zero when
/// every reference point is matched.
pub fn diagram_gap_within(reference: &PersistenceDiagram, candidate: &PersistenceDiagram, tol: f64) -> f64 {
    let mut worst: f64 = 0.0;
    for kind in PointKind::ALL {
        let refs = reference.of_kind(kind);
        let cands = candidate.of_kind(kind);
        let adj: Vec<Vec<usize>> = refs
            .iter()
            .map(|p| (0..cands.len()).filter(|&j| linf(p, &cands[j]) <= tol).collect())
            .collect();
        // smallest threshold such that every point above it can be matched
        let mut levels: Vec<f64> = refs.iter().map(PersistencePoint::persistence).collect();
        levels.push(0.0);
        levels.sort_by(f64::total_cmp);
        levels.dedup();
        let fits = |level: f64| {
            let must: Vec<usize> = (0..refs.len()).filter(|&i| refs[i].persistence() > level).collect();
            let sub: Vec<Vec<usize>> = must.iter().map(|&i| adj[i].clone()).collect();
            max_matching(must.len(), cands.len(), &sub) == must.len()
        };
        let (mut lo, mut hi) = (0, levels.len() - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if fits(levels[mid]) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        worst = worst.max(levels[lo]);
    }
    worst
}

/// [`diagram_gap_within`] at tolerance [`DIAGRAM_TOLERANCE`].
pub fn diagram_gap(reference: &PersistenceDiagram, candidate: &PersistenceDiagram) -> f64 {
    diagram_gap_within(reference, candidate, DIAGRAM_TOLERANCE)
}
