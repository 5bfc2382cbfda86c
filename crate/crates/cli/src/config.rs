//! Run configuration: a flat TOML file whose keys mirror the command-line
//! flags. Flags override file values; anything unset falls back to defaults.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use dbmapper::cover::{data_spaced_cover, morse_spaced_cover};
use dbmapper::{ClustererSpec, GomicCover, KernelShape, KernelSpec, LensMap, MapperParams, WeightMode, WidthScaler};

use crate::error::{validation, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CoverKind {
    Morse,
    Data,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ClustererKind {
    SingleLinkage,
    Dbscan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum KernelArg {
    Square,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum WeightArg {
    Count,
    Kernel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Dot,
    Json,
    Graphml,
    Svg,
}

/// Pipeline options, shared by the command line and the config file.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct PipelineOptions {
    /// Input CSV (header row required).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Column holding the lens; defaults to `lens`, else the last column.
    #[arg(long)]
    pub lens_column: Option<String>,
    #[arg(long, value_enum)]
    pub cover: Option<CoverKind>,
    /// Number of cover intervals [default: 10]
    #[arg(long)]
    pub n_checkpoints: Option<usize>,
    /// Overlap g in (0, 1) [default: 0.5]
    #[arg(long)]
    pub overlap: Option<f64>,
    #[arg(long, value_enum)]
    pub kernel: Option<KernelArg>,
    /// Kernel threshold in (0, 1) [default: 0.1]
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Neighbours for the density estimate [default: 15]
    #[arg(long)]
    pub k: Option<usize>,
    /// Largest kernel width multiplier [default: 3.0]
    #[arg(long)]
    pub c_max: Option<f64>,
    /// Exponent on the width multiplier; 0 gives standard Mapper [default: 1.0]
    #[arg(long)]
    pub rate_sensitivity: Option<f64>,
    #[arg(long, value_enum)]
    pub clusterer: Option<ClustererKind>,
    /// Single-linkage scale
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub dbscan_eps: Option<f64>,
    #[arg(long)]
    pub dbscan_min_weight: Option<f64>,
    /// Pass kernel values to the clusterer as weights [default: false]
    #[arg(long)]
    pub use_kernel_weights: Option<bool>,
    #[arg(long, value_enum)]
    pub weight_mode: Option<WeightArg>,
    /// Keep one edge per connected overlap piece [default: false]
    #[arg(long)]
    pub multinerve: Option<bool>,
    /// Output directory [default: dbmapper-out]
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Comma-separated export formats [default: json]
    #[arg(long, value_enum, value_delimiter = ',')]
    pub format: Option<Vec<ExportFormat>>,
}

macro_rules! overlay {
    ($self:ident, $other:ident, $($field:ident),*) => {
        PipelineOptions { $($field: $self.$field.or($other.$field),)* }
    };
}

impl PipelineOptions {
    /// Values from `self`, falling back to `file`.
    pub fn over(self, file: PipelineOptions) -> PipelineOptions {
        let this = self;
        overlay!(
            this, file, input, lens_column, cover, n_checkpoints, overlap, kernel, epsilon, k, c_max,
            rate_sensitivity, clusterer, delta, dbscan_eps, dbscan_min_weight, use_kernel_weights,
            weight_mode, multinerve, out_dir, format
        )
    }

    pub fn from_file(path: &Path) -> CliResult<PipelineOptions> {
        let text = std::fs::read_to_string(path)?;
        Ok(toml::from_str(&text)?)
    }

    /// Merges an optional config file under these options and resolves defaults.
    pub fn resolve(self, config: Option<&Path>) -> CliResult<RunConfig> {
        let merged = match config {
            Some(path) => self.over(PipelineOptions::from_file(path)?),
            None => self,
        };
        RunConfig::from_options(merged)
    }
}

/// Fully resolved pipeline parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub lens_column: Option<String>,
    pub cover: CoverKind,
    pub n_checkpoints: usize,
    pub overlap: f64,
    pub kernel: KernelShape,
    pub epsilon: f64,
    pub k: usize,
    pub c_max: f64,
    pub rate_sensitivity: f64,
    pub clusterer: ClustererSpec,
    pub use_kernel_weights: bool,
    pub weight_mode: WeightMode,
    pub multinerve: bool,
    pub out_dir: PathBuf,
    pub format: Vec<ExportFormat>,
}

impl RunConfig {
    pub fn from_options(o: PipelineOptions) -> CliResult<RunConfig> {
        let clusterer = match o.clusterer.unwrap_or(ClustererKind::SingleLinkage) {
            ClustererKind::SingleLinkage => {
                let delta = o
                    .delta
                    .ok_or_else(|| validation("single-linkage clustering needs --delta (or `delta` in the config file)"))?;
                ClustererSpec::single_linkage(delta)?
            }
            ClustererKind::Dbscan => {
                let (Some(eps), Some(min_weight)) = (o.dbscan_eps, o.dbscan_min_weight) else {
                    return Err(validation("dbscan clustering needs --dbscan-eps and --dbscan-min-weight"));
                };
                ClustererSpec::dbscan(eps, min_weight)?
            }
        };
        let config = RunConfig {
            input: o.input,
            lens_column: o.lens_column,
            cover: o.cover.unwrap_or(CoverKind::Morse),
            n_checkpoints: o.n_checkpoints.unwrap_or(10),
            overlap: o.overlap.unwrap_or(0.5),
            kernel: match o.kernel.unwrap_or(KernelArg::Square) {
                KernelArg::Square => KernelShape::Square,
                KernelArg::Gaussian => KernelShape::Gaussian,
            },
            epsilon: o.epsilon.unwrap_or(0.1),
            k: o.k.unwrap_or(15),
            c_max: o.c_max.unwrap_or(3.0),
            rate_sensitivity: o.rate_sensitivity.unwrap_or(1.0),
            clusterer,
            use_kernel_weights: o.use_kernel_weights.unwrap_or(false),
            weight_mode: match o.weight_mode.unwrap_or(WeightArg::Count) {
                WeightArg::Count => WeightMode::Count,
                WeightArg::Kernel => WeightMode::Kernel,
            },
            multinerve: o.multinerve.unwrap_or(false),
            out_dir: o.out_dir.unwrap_or_else(|| PathBuf::from("dbmapper-out")),
            format: o.format.unwrap_or_else(|| vec![ExportFormat::Json]),
        };
        config.mapper_params()?;
        if config.n_checkpoints == 0 {
            return Err(validation("--n-checkpoints must be at least 1"));
        }
        if !(config.overlap > 0.0 && config.overlap < 1.0) {
            return Err(validation(format!("--overlap must lie in (0, 1), got {}", config.overlap)));
        }
        Ok(config)
    }

    pub fn mapper_params(&self) -> CliResult<MapperParams> {
        Ok(MapperParams {
            kernel: KernelSpec::new(self.kernel, self.epsilon)?,
            scaler: WidthScaler::new(self.c_max, self.rate_sensitivity)?,
            k: self.k,
            clusterer: self.clusterer,
            weight_mode: self.weight_mode,
            use_kernel_weights: self.use_kernel_weights,
            multinerve: self.multinerve,
        })
    }

    /// Same parameters with density scaling switched off.
    pub fn standard(&self) -> RunConfig {
        RunConfig {
            rate_sensitivity: 0.0,
            ..self.clone()
        }
    }

    pub fn build_cover(&self, lens: &LensMap, n: usize, g: f64) -> CliResult<GomicCover> {
        Ok(match self.cover {
            CoverKind::Morse => morse_spaced_cover(lens.lo(), lens.hi(), n, g)?,
            CoverKind::Data => data_spaced_cover(lens, n, g)?,
        })
    }
}
