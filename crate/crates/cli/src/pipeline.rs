use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use dbmapper::cover::kerneled_resolution;
use dbmapper::io::read_csv_path;
use dbmapper::mapper::{build_mapper_detailed, MapperRun};
use dbmapper::{export, LensMap, PointCloud};

use crate::config::{ExportFormat, RunConfig};
use crate::error::{validation, CliResult};

/// Everything a run used and produced, minus the graph itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: RunConfig,
    pub point_count: usize,
    pub dim: usize,
    pub lens_range: (f64, f64),
    /// Mean of the smoothed inverse density; absent for standard Mapper.
    pub mu: Option<f64>,
    pub sigma: Option<f64>,
    pub cover_resolution: f64,
    /// `None` if some kerneled set came out empty.
    pub kerneled_resolution: Option<f64>,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub betti: (usize, usize),
    pub artifacts: Vec<String>,
}

pub fn load_input(config: &RunConfig) -> CliResult<(PointCloud, LensMap)> {
    let path = config
        .input
        .as_ref()
        .ok_or_else(|| validation("no input given; pass --input or set `input` in the config file"))?;
    Ok(read_csv_path(path, config.lens_column.as_deref())?)
}

/// Runs density, cover, kernel, cluster and graph stages in memory.
pub fn execute(config: &RunConfig, cloud: &PointCloud, lens: &LensMap) -> CliResult<(MapperRun, RunManifest)> {
    let cover = config.build_cover(lens, config.n_checkpoints, config.overlap)?;
    let params = config.mapper_params()?;
    let run = build_mapper_detailed(cloud, lens, &cover, &params)?;
    let manifest = RunManifest {
        config: config.clone(),
        point_count: cloud.len(),
        dim: cloud.dim(),
        lens_range: (lens.lo(), lens.hi()),
        mu: run.profile.as_ref().map(|p| p.mean_mu),
        sigma: run.profile.as_ref().map(|p| p.std_sigma),
        cover_resolution: cover.resolution(),
        kerneled_resolution: kerneled_resolution(&run.sets, lens).ok(),
        vertex_count: run.graph.vertex_count(),
        edge_count: run.graph.edge_count(),
        betti: run.graph.betti(),
        artifacts: Vec::new(),
    };
    Ok((run, manifest))
}

fn write(dir: &Path, name: &str, contents: &str, artifacts: &mut Vec<String>) -> CliResult<()> {
    fs::write(dir.join(name), contents)?;
    artifacts.push(name.to_string());
    Ok(())
}

/// Loads the input, runs the pipeline and writes the requested exports plus
/// `manifest.json` into the output directory.
pub fn run_pipeline(config: &RunConfig) -> CliResult<(MapperRun, RunManifest, PathBuf)> {
    let (cloud, lens) = load_input(config)?;
    let (run, mut manifest) = execute(config, &cloud, &lens)?;
    let dir = config.out_dir.clone();
    fs::create_dir_all(&dir)?;
    let g = &run.graph;
    for format in &config.format {
        match format {
            ExportFormat::Dot => write(&dir, "graph.dot", &export::to_dot(g), &mut manifest.artifacts)?,
            ExportFormat::Json => write(&dir, "graph.json", &export::to_json(g)?, &mut manifest.artifacts)?,
            ExportFormat::Graphml => write(&dir, "graph.graphml", &export::to_graphml(g), &mut manifest.artifacts)?,
            ExportFormat::Svg => write(&dir, "graph.svg", &export::to_svg(g, &cloud, 600.0, 600.0), &mut manifest.artifacts)?,
        }
    }
    let path = dir.join("manifest.json");
    fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    log::info!("wrote {} artifacts to {}", manifest.artifacts.len() + 1, dir.display());
    Ok((run, manifest, path))
}
