//! Checks a density-based Mapper graph against the Reeb graph of the Rips
//! complex: `d_B <= r + 2 omega(delta)` and diagram inclusion up to `r`.

use serde::{Deserialize, Serialize};

use dbmapper::cover::kerneled_resolution;
use dbmapper::geometry::{hausdorff_estimate, modulus_of_continuity};
use dbmapper::mapper::{build_mapper_detailed, find_intersection_crossing_edges};
use dbmapper::persistence::{bottleneck, diagram_gap_within, graph_diagram, reeb_oracle, DIAGRAM_TOLERANCE};
use dbmapper::{GomicCover, LensMap, MapperParams, PointCloud};

use crate::error::CliResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub delta: f64,
    /// Kerneled resolution.
    pub r: f64,
    pub omega: f64,
    pub bound: f64,
    pub bottleneck: f64,
    /// Largest persistence of a Mapper point with no Reeb partner.
    pub gap: f64,
    pub crossing_edges: usize,
    /// Hausdorff distance to the reference sample, when one was given.
    pub hausdorff: Option<f64>,
    pub mapper_betti: (usize, usize),
    pub reeb_betti: (usize, usize),
    pub hypotheses_hold: bool,
    pub bound_holds: bool,
    pub inclusion_holds: bool,
    pub pass: bool,
}

impl VerifyReport {
    pub fn summary(&self) -> String {
        format!(
            "r={:.6} omega={:.6} bound={:.6} d_B={:.6} gap={:.6} crossing={} d_H={} -> {}",
            self.r,
            self.omega,
            self.bound,
            self.bottleneck,
            self.gap,
            self.crossing_edges,
            self.hausdorff.map_or("n/a".to_string(), |h| format!("{h:.6}")),
            if self.pass { "pass" } else { "FAIL" }
        )
    }
}

/// Builds the Mapper graph, the Reeb oracle at `delta` and both diagrams.
///
/// Hypotheses: no intersection-crossing edges on `cover`, and `4 d_H <= delta`
/// against `reference` when one is supplied. Matching for the inclusion check
/// uses coordinate tolerance `r`, since Mapper vertex values sit at slice
/// midpoints and never coincide with Reeb critical values exactly.
pub fn verify_bound(
    cloud: &PointCloud,
    lens: &LensMap,
    reference: Option<&PointCloud>,
    cover: &GomicCover,
    params: &MapperParams,
    delta: f64,
) -> CliResult<VerifyReport> {
    let run = build_mapper_detailed(cloud, lens, cover, params)?;
    let r = kerneled_resolution(&run.sets, lens)?;
    let omega = modulus_of_continuity(cloud, lens, delta)?;
    let crossing_edges = find_intersection_crossing_edges(cloud, lens, delta, cover)?.len();
    let hausdorff = reference.map(|rf| hausdorff_estimate(cloud, rf)).transpose()?;

    let reeb = reeb_oracle(cloud, lens, delta)?;
    let dm = graph_diagram(&run.graph);
    let dr = graph_diagram(&reeb);
    let d_b = bottleneck(&dm, &dr);
    let gap = diagram_gap_within(&dr, &dm, r);
    let bound = r + 2.0 * omega;

    let hypotheses_hold = crossing_edges == 0 && hausdorff.map_or(true, |h| 4.0 * h <= delta);
    let bound_holds = d_b <= bound + DIAGRAM_TOLERANCE;
    let inclusion_holds = gap <= r;
    Ok(VerifyReport {
        delta,
        r,
        omega,
        bound,
        bottleneck: d_b,
        gap,
        crossing_edges,
        hausdorff,
        mapper_betti: run.graph.betti(),
        reeb_betti: reeb.betti(),
        hypotheses_hold,
        bound_holds,
        inclusion_holds,
        pass: hypotheses_hold && bound_holds && inclusion_holds,
    })
}
