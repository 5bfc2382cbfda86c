//! Graph serialisation: DOT, JSON, GraphML and a simple SVG layout.

use std::fmt::Write as _;

use crate::error::Result;
use crate::geometry::PointCloud;
use crate::mapper::MapperGraph;

pub fn to_dot(g: &MapperGraph) -> String {
    let mut s = String::from(if g.is_multigraph { "graph mapper {\n" } else { "strict graph mapper {\n" });
    for (i, v) in g.vertices.iter().enumerate() {
        let _ = writeln!(
            s,
            "  {i} [label=\"{}:{}\", fbar={}, size={}];",
            v.interval_index,
            v.cluster_id,
            v.fbar,
            v.members.len()
        );
    }
    for e in &g.edges {
        let _ = writeln!(s, "  {} -- {} [weight={}, multiplicity={}];", e.source, e.target, e.weight, e.multiplicity);
    }
    s.push_str("}\n");
    s
}

pub fn to_json(g: &MapperGraph) -> Result<String> {
    Ok(serde_json::to_string_pretty(g)?)
}

pub fn to_graphml(g: &MapperGraph) -> String {
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    s.push_str("  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n");
    s.push_str("  <key id=\"fbar\" for=\"node\" attr.name=\"fbar\" attr.type=\"double\"/>\n");
    s.push_str("  <key id=\"size\" for=\"node\" attr.name=\"size\" attr.type=\"int\"/>\n");
    s.push_str("  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n");
    s.push_str("  <key id=\"multiplicity\" for=\"edge\" attr.name=\"multiplicity\" attr.type=\"int\"/>\n");
    s.push_str("  <graph id=\"mapper\" edgedefault=\"undirected\">\n");
    for (i, v) in g.vertices.iter().enumerate() {
        let _ = writeln!(
            s,
            "    <node id=\"n{i}\"><data key=\"label\">{}:{}</data><data key=\"fbar\">{}</data><data key=\"size\">{}</data></node>",
            v.interval_index,
            v.cluster_id,
            v.fbar,
            v.members.len()
        );
    }
    for (i, e) in g.edges.iter().enumerate() {
        let _ = writeln!(
            s,
            "    <edge id=\"e{i}\" source=\"n{}\" target=\"n{}\"><data key=\"weight\">{}</data><data key=\"multiplicity\">{}</data></edge>",
            e.source, e.target, e.weight, e.multiplicity
        );
    }
    s.push_str("  </graph>\n</graphml>\n");
    s
}

/// Mean position of each vertex's members over the first two coordinates
/// (the second is 0 for one-dimensional data).
pub fn layout(g: &MapperGraph, cloud: &PointCloud) -> Vec<[f64; 2]> {
    g.vertices
        .iter()
        .map(|v| {
            let mut acc = [0.0, 0.0];
            for &i in &v.members {
                let p = cloud.point(i);
                acc[0] += p[0];
                acc[1] += p.get(1).copied().unwrap_or(0.0);
            }
            let n = v.members.len().max(1) as f64;
            [acc[0] / n, acc[1] / n]
        })
        .collect()
}

/// SVG group drawing `g` inside the box `(x, y, w, h)`, y axis pointing up.
pub fn svg_group(g: &MapperGraph, cloud: &PointCloud, frame: (f64, f64, f64, f64)) -> String {
    let pos = layout(g, cloud);
    let (x0, y0, w, h) = frame;
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &pos {
        for d in 0..2 {
            lo[d] = lo[d].min(p[d]);
            hi[d] = hi[d].max(p[d]);
        }
    }
    let pad = 0.08;
    let span = |d: usize| if hi[d] > lo[d] { hi[d] - lo[d] } else { 1.0 };
    let scale = ((1.0 - 2.0 * pad) * w / span(0)).min((1.0 - 2.0 * pad) * h / span(1));
    let place = |p: &[f64; 2]| {
        (
            x0 + w / 2.0 + (p[0] - (lo[0] + hi[0]) / 2.0) * scale,
            y0 + h / 2.0 - (p[1] - (lo[1] + hi[1]) / 2.0) * scale,
        )
    };
    let mut s = String::from("<g>\n");
    for e in &g.edges {
        let (a, b) = (place(&pos[e.source]), place(&pos[e.target]));
        let _ = writeln!(
            s,
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#555\" stroke-width=\"1\"/>",
            a.0, a.1, b.0, b.1
        );
    }
    for p in &pos {
        let (x, y) = place(p);
        let _ = writeln!(s, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"2.5\" fill=\"#1f5fa8\"/>");
    }
    s.push_str("</g>\n");
    s
}

/// Standalone SVG of one graph.
pub fn to_svg(g: &MapperGraph, cloud: &PointCloud, width: f64, height: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
        svg_group(g, cloud, (0.0, 0.0, width, height))
    )
}
