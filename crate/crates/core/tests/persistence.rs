use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dbmapper::persistence::{bottleneck, diagram_gap, extended_persistence, reeb_oracle};
use dbmapper::synthgen::{gen_genus1, SynthSpec};
use dbmapper::{PersistenceDiagram, PersistencePoint, PointKind};

/// Zero-dimensional persistence of the sublevel (`up`) or superlevel filtration
/// by the elder rule, plus the (min, max) span of every component.
fn sweep(n: usize, edges: &[(usize, usize)], values: &[f64], up: bool) -> (Vec<(f64, f64)>, Vec<(f64, f64)>) {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    if !up {
        order.reverse();
    }
    let mut pos = vec![0; n];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    // the root of each set is its oldest vertex
    fn find(p: &mut Vec<usize>, mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    let mut merges = Vec::new();
    for &v in &order {
        for &(a, b) in edges {
            let u = if a == v { b } else if b == v { a } else { continue };
            if u == v || pos[u] > pos[v] {
                continue;
            }
            let (ra, rb) = (find(&mut parent, u), find(&mut parent, v));
            if ra == rb {
                continue;
            }
            let (old, young) = if pos[ra] < pos[rb] { (ra, rb) } else { (rb, ra) };
            parent[young] = old;
            if values[young] != values[v] {
                merges.push((values[young], values[v]));
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
    let mut spans = Vec::new();
    for r in (0..n).filter(|&r| roots[r] == r) {
        let members: Vec<usize> = (0..n).filter(|&x| roots[x] == r).collect();
        let lo = members.iter().map(|&x| values[x]).fold(f64::INFINITY, f64::min);
        let hi = members.iter().map(|&x| values[x]).fold(f64::NEG_INFINITY, f64::max);
        spans.push((lo, hi));
    }
    merges.sort_by(|a, b| a.partial_cmp(b).unwrap());
    spans.sort_by(|a, b| a.partial_cmp(b).unwrap());
    (merges, spans)
}

fn coords(dg: &PersistenceDiagram, kind: PointKind) -> Vec<(f64, f64)> {
    let mut v: Vec<(f64, f64)> = dg.of_kind(kind).iter().map(|p| (p.birth, p.death)).collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

fn random_graph(rng: &mut ChaCha8Rng) -> (usize, Vec<(usize, usize)>, Vec<f64>) {
    let n = rng.gen_range(1..=20);
    let m = rng.gen_range(0..=2 * n);
    let edges = (0..m)
        .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
        .filter(|(a, b)| a != b)
        .collect();
    let values = (0..n).map(|_| rng.gen_range(0..6) as f64).collect();
    (n, edges, values)
}

#[test]
fn extended_persistence_matches_union_find_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..200 {
        let (n, edges, values) = random_graph(&mut rng);
        let dg = extended_persistence(n, &edges, &values);
        let (ord0, spans) = sweep(n, &edges, &values, true);
        let (rel1, _) = sweep(n, &edges, &values, false);
        assert_eq!(coords(&dg, PointKind::Ord0), ord0);
        assert_eq!(coords(&dg, PointKind::Ext0), spans);
        assert_eq!(coords(&dg, PointKind::Rel1), rel1);
        assert_eq!(dg.count(PointKind::Ext1), edges.len() + spans.len() - n);
    }
}

#[test]
fn four_cycle_pairs_its_saddles() {
    let dg = extended_persistence(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], &[0.0, 1.0, 2.0, 1.0]);
    assert_eq!(coords(&dg, PointKind::Ext0), vec![(0.0, 2.0)]);
    // the loop is born at its top vertex and dies at its bottom one
    assert_eq!(coords(&dg, PointKind::Ext1), vec![(2.0, 0.0)]);
    assert_eq!(dg.len(), 2);
}

#[test]
fn two_paths_give_two_ext0_points() {
    let dg = extended_persistence(6, &[(0, 1), (1, 2), (3, 4), (4, 5)], &[0.0, 2.0, 1.0, 3.0, 5.0, 4.0]);
    assert_eq!(coords(&dg, PointKind::Ext0), vec![(0.0, 2.0), (3.0, 5.0)]);
    assert_eq!(dg.count(PointKind::Ext1), 0);
}

fn brute_bottleneck(a: &[PersistencePoint], b: &[PersistencePoint]) -> f64 {
    let n = a.len() + b.len();
    let cost = |i: usize, j: usize| -> f64 {
        match (i < a.len(), j < b.len()) {
            (true, true) if a[i].kind == b[j].kind => {
                (a[i].birth - b[j].birth).abs().max((a[i].death - b[j].death).abs())
            }
            (true, true) => f64::INFINITY,
            (true, false) if j - b.len() == i => (a[i].birth - a[i].death).abs() / 2.0,
            (false, true) if i - a.len() == j => (b[j].birth - b[j].death).abs() / 2.0,
            (false, false) => 0.0,
            _ => f64::INFINITY,
        }
    };
    let mut best = f64::INFINITY;
    let mut perm: Vec<usize> = (0..n).collect();
    // Heap's algorithm over all assignments
    fn heap(k: usize, perm: &mut Vec<usize>, best: &mut f64, cost: &dyn Fn(usize, usize) -> f64) {
        if k <= 1 {
            let c = perm.iter().enumerate().map(|(i, &j)| cost(i, j)).fold(0.0, f64::max);
            *best = best.min(c);
            return;
        }
        for i in 0..k {
            heap(k - 1, perm, best, cost);
            let j = if k % 2 == 0 { i } else { 0 };
            perm.swap(j, k - 1);
        }
    }
    heap(n, &mut perm, &mut best, &cost);
    best
}

fn random_diagram(rng: &mut ChaCha8Rng, size: usize, kinds: usize) -> PersistenceDiagram {
    PersistenceDiagram::new(
        (0..size)
            .map(|_| {
                let b = rng.gen_range(0..20) as f64 / 4.0;
                let d = rng.gen_range(0..20) as f64 / 4.0;
                PersistencePoint::new(b, d, PointKind::ALL[rng.gen_range(0..kinds)])
            })
            .collect(),
    )
}

#[test]
fn bottleneck_matches_factorial_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let sa = rng.gen_range(0..=3);
        let a = random_diagram(&mut rng, sa, 2);
        let b = random_diagram(&mut rng, 6 - sa, 2);
        assert_eq!(bottleneck(&a, &b), brute_bottleneck(&a.points, &b.points));
    }
}

#[test]
fn diagram_gap_counts_unmatched_reference_points() {
    let p = |b, d| PersistencePoint::new(b, d, PointKind::Ext0);
    let reference = PersistenceDiagram::new(vec![p(0.0, 4.0), p(1.0, 2.0)]);
    assert_eq!(diagram_gap(&reference, &reference), 0.0);
    let superset = PersistenceDiagram::new(vec![p(1.0, 2.0), p(0.0, 4.0), p(5.0, 8.0)]);
    assert_eq!(diagram_gap(&reference, &superset), 0.0);
    let missing = PersistenceDiagram::new(vec![p(0.0, 4.0), p(5.0, 8.0)]);
    assert_eq!(diagram_gap(&reference, &missing), 1.0);
    let extra = PersistenceDiagram::new(vec![p(0.0, 4.0), p(1.0, 2.0), p(0.0, 0.3)]);
    assert_eq!(diagram_gap(&extra, &reference), 0.3);
    let shifted = PersistenceDiagram::new(vec![p(0.0, 4.0 + 1e-10), p(1.0, 2.0)]);
    assert_eq!(diagram_gap(&reference, &shifted), 0.0);
}

#[test]
fn jsonl_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let dg = random_diagram(&mut rng, 10, 4);
    let mut buf = Vec::new();
    dg.write_jsonl(&mut buf).unwrap();
    assert_eq!(PersistenceDiagram::read_jsonl(buf.as_slice()).unwrap(), dg);
}

#[test]
fn genus1_reeb_graph_has_one_loop_and_two_components() {
    let (cloud, lens) = gen_genus1(&SynthSpec::genus1(42)).unwrap();
    assert_eq!(reeb_oracle(&cloud, &lens, 0.3).unwrap().betti(), (2, 1));
}

fn diagram_strategy() -> impl Strategy<Value = PersistenceDiagram> {
    prop::collection::vec((0u8..12, 0u8..12, 0usize..2), 0..5).prop_map(|pts| {
        PersistenceDiagram::new(
            pts.into_iter()
                .map(|(b, d, k)| PersistencePoint::new(b as f64 / 2.0, d as f64 / 2.0, PointKind::ALL[k]))
                .collect(),
        )
    })
}

proptest! {
    #[test]
    fn bottleneck_is_a_pseudometric(a in diagram_strategy(), b in diagram_strategy(), c in diagram_strategy()) {
        prop_assert_eq!(bottleneck(&a, &a), 0.0);
        prop_assert_eq!(bottleneck(&a, &b), bottleneck(&b, &a));
        prop_assert!(bottleneck(&a, &c) <= bottleneck(&a, &b) + bottleneck(&b, &c) + 1e-12);
    }

    #[test]
    fn ext_counts_match_topology(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (n, edges, values) = random_graph(&mut rng);
        let dg = extended_persistence(n, &edges, &values);
        let (_, spans) = sweep(n, &edges, &values, true);
        prop_assert_eq!(dg.count(PointKind::Ext0), spans.len());
        prop_assert_eq!(dg.count(PointKind::Ext1), edges.len() + spans.len() - n);
    }
}
