//! Extended persistence of graphs, bottleneck distance, and an exact Reeb
//! graph for Rips complexes.

mod bottleneck;
mod extended;
mod reeb;

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub use bottleneck::{bottleneck, bottleneck_by_kind, diagram_gap, diagram_gap_within, DIAGRAM_TOLERANCE};
pub use extended::{extended_persistence, graph_diagram};
pub use reeb::reeb_oracle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PointKind {
    Ord0,
    Ext0,
    Ext1,
    Rel1,
}

impl PointKind {
    pub const ALL: [PointKind; 4] = [PointKind::Ord0, PointKind::Ext0, PointKind::Ext1, PointKind::Rel1];
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PersistencePoint {
    pub birth: f64,
    pub death: f64,
    pub kind: PointKind,
}

impl PersistencePoint {
    pub fn new(birth: f64, death: f64, kind: PointKind) -> Self {
        PersistencePoint { birth, death, kind }
    }

    /// `|birth - death|`.
    pub fn persistence(&self) -> f64 {
        (self.birth - self.death).abs()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    pub points: Vec<PersistencePoint>,
}

impl PersistenceDiagram {
    pub fn new(points: Vec<PersistencePoint>) -> Self {
        PersistenceDiagram { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn count(&self, kind: PointKind) -> usize {
        self.points.iter().filter(|p| p.kind == kind).count()
    }

    pub fn of_kind(&self, kind: PointKind) -> Vec<PersistencePoint> {
        self.points.iter().copied().filter(|p| p.kind == kind).collect()
    }

    /// Points ordered by kind, then birth, then death.
    pub fn sorted(&self) -> Vec<PersistencePoint> {
        let mut pts = self.points.clone();
        pts.sort_by(|a, b| {
            a.kind
                .cmp(&b.kind)
                .then(a.birth.total_cmp(&b.birth))
                .then(a.death.total_cmp(&b.death))
        });
        pts
    }

    /// One JSON object per line.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for p in &self.points {
            serde_json::to_writer(&mut out, p)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn read_jsonl<R: BufRead>(input: R) -> Result<Self> {
        let mut points = Vec::new();
        for line in input.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            points.push(serde_json::from_str(&line)?);
        }
        Ok(PersistenceDiagram { points })
    }
}
