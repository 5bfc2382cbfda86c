//! `(N, g)` grid sweeps comparing standard and density-based Mapper.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use dbmapper::export::svg_group;
use dbmapper::mapper::collapse_multigraph;
use dbmapper::{LensMap, MapperGraph, PointCloud};

use crate::config::RunConfig;
use crate::error::{validation, CliResult};
use crate::pipeline::execute;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellOutcome {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub betti0: usize,
    pub betti1: usize,
    pub correct: bool,
    pub runtime_ms: u128,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub n: usize,
    pub g: f64,
    pub standard: CellOutcome,
    pub density: CellOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config: RunConfig,
    pub n_values: Vec<usize>,
    pub g_values: Vec<f64>,
    pub expected: (usize, usize),
    /// Row-major: all `g` values for the first `N`, then the next `N`.
    pub cells: Vec<SweepCell>,
    pub standard_correct: usize,
    pub density_correct: usize,
}

impl SweepReport {
    pub fn cell(&self, ni: usize, gi: usize) -> &SweepCell {
        &self.cells[ni * self.g_values.len() + gi]
    }

    /// Plain-text table of correct flags, `S` standard and `D` density.
    pub fn table(&self) -> String {
        let mut s = String::from("N \\ g ");
        for g in &self.g_values {
            let _ = write!(s, "{g:>7.2}");
        }
        s.push('\n');
        for (ni, n) in self.n_values.iter().enumerate() {
            let _ = write!(s, "{n:>6}");
            for gi in 0..self.g_values.len() {
                let c = self.cell(ni, gi);
                let mark = |o: &CellOutcome, ch| if o.correct { ch } else { '.' };
                let _ = write!(s, "     {}{}", mark(&c.standard, 'S'), mark(&c.density, 'D'));
            }
            s.push('\n');
        }
        let _ = writeln!(
            s,
            "correct: standard {}/{}, density {}/{}",
            self.standard_correct,
            self.cells.len(),
            self.density_correct,
            self.cells.len()
        );
        s
    }
}

/// A sweep report together with the graphs it was computed from.
#[derive(Debug, Clone)]
pub struct SweepRun {
    pub report: SweepReport,
    /// `(standard, density)` collapsed graphs, in cell order.
    pub graphs: Vec<(Option<MapperGraph>, Option<MapperGraph>)>,
}

fn worker_count() -> CliResult<usize> {
    match std::env::var(crate::WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(validation(format!("{} must be a positive integer, got `{v}`", crate::WORKERS_ENV))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn run_cell(
    config: &RunConfig,
    cloud: &PointCloud,
    lens: &LensMap,
    expected: (usize, usize),
) -> (CellOutcome, Option<MapperGraph>) {
    let start = Instant::now();
    match execute(config, cloud, lens) {
        Ok((run, _)) => {
            let graph = collapse_multigraph(&run.graph);
            let (betti0, betti1) = graph.betti();
            let outcome = CellOutcome {
                vertex_count: graph.vertex_count(),
                edge_count: graph.edge_count(),
                betti0,
                betti1,
                correct: (betti0, betti1) == expected,
                runtime_ms: start.elapsed().as_millis(),
                error: None,
            };
            (outcome, Some(graph))
        }
        Err(e) => {
            log::warn!("cell N={} g={} failed: {e}", config.n_checkpoints, config.overlap);
            let outcome = CellOutcome {
                vertex_count: 0,
                edge_count: 0,
                betti0: 0,
                betti1: 0,
                correct: false,
                runtime_ms: start.elapsed().as_millis(),
                error: Some(e.to_string()),
            };
            (outcome, None)
        }
    }
}

/// Runs every `(N, g)` cell in standard (`s = 0`) and density-based mode.
/// Correctness is an exact match of the collapsed graph's Betti numbers.
pub fn sweep_grid(
    config: &RunConfig,
    cloud: &PointCloud,
    lens: &LensMap,
    n_values: &[usize],
    g_values: &[f64],
    expected: (usize, usize),
) -> CliResult<SweepRun> {
    if n_values.is_empty() {
        return Err(validation("sweep needs at least one N value"));
    }
    if g_values.is_empty() {
        return Err(validation("sweep needs at least one g value"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count()?)
        .build()
        .map_err(|e| validation(format!("worker pool: {e}")))?;

    let grid: Vec<(usize, f64)> = n_values
        .iter()
        .flat_map(|&n| g_values.iter().map(move |&g| (n, g)))
        .collect();
    let standard = config.standard();
    let results: Vec<_> = pool.install(|| {
        grid.par_iter()
            .map(|&(n, g)| {
                let at = |c: &RunConfig| RunConfig {
                    n_checkpoints: n,
                    overlap: g,
                    ..c.clone()
                };
                let s = run_cell(&at(&standard), cloud, lens, expected);
                let d = run_cell(&at(config), cloud, lens, expected);
                (n, g, s, d)
            })
            .collect()
    });

    let mut cells = Vec::with_capacity(results.len());
    let mut graphs = Vec::with_capacity(results.len());
    for (n, g, (s, sg), (d, dg)) in results {
        cells.push(SweepCell {
            n,
            g,
            standard: s,
            density: d,
        });
        graphs.push((sg, dg));
    }
    let report = SweepReport {
        config: config.clone(),
        n_values: n_values.to_vec(),
        g_values: g_values.to_vec(),
        expected,
        standard_correct: cells.iter().filter(|c| c.standard.correct).count(),
        density_correct: cells.iter().filter(|c| c.density.correct).count(),
        cells,
    };
    Ok(SweepRun { report, graphs })
}

impl SweepRun {
    /// Two grids of laid-out graphs, standard on the left and density-based
    /// on the right, with correct cells outlined in green.
    pub fn to_svg(&self, cloud: &PointCloud) -> String {
        let cell = 160.0;
        let pad = 30.0;
        let rows = self.report.n_values.len();
        let cols = self.report.g_values.len();
        let panel = cols as f64 * cell;
        let width = 2.0 * panel + 3.0 * pad;
        let height = rows as f64 * cell + 2.0 * pad;
        let mut s = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        );
        for (side, title) in ["standard", "density"].iter().enumerate() {
            let x0 = pad + side as f64 * (panel + pad);
            let _ = writeln!(s, "<text x=\"{x0}\" y=\"{:.0}\">{title}</text>", pad - 10.0);
            for ni in 0..rows {
                for gi in 0..cols {
                    let idx = ni * cols + gi;
                    let (x, y) = (x0 + gi as f64 * cell, pad + ni as f64 * cell);
                    let c = &self.report.cells[idx];
                    let (outcome, graph) = if side == 0 {
                        (&c.standard, &self.graphs[idx].0)
                    } else {
                        (&c.density, &self.graphs[idx].1)
                    };
                    let stroke = if outcome.correct { "#2ca02c\" stroke-width=\"4" } else { "#bbbbbb\" stroke-width=\"1" };
                    let _ = writeln!(
                        s,
                        "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"none\" stroke=\"{stroke}\"/>",
                        x + 2.0,
                        y + 2.0,
                        cell - 4.0,
                        cell - 4.0
                    );
                    let _ = writeln!(s, "<text x=\"{:.1}\" y=\"{:.1}\">N={} g={}</text>", x + 8.0, y + 16.0, c.n, c.g);
                    if let Some(graph) = graph {
                        s.push_str(&svg_group(graph, cloud, (x + 10.0, y + 22.0, cell - 20.0, cell - 32.0)));
                    }
                }
            }
        }
        s.push_str("</svg>\n");
        s
    }
}
