//! Command-line surface for density-based Mapper: the pipeline runner, the
//! `(N, g)` sweep harness and the convergence-bound verifier.

pub mod config;
pub mod error;
pub mod pipeline;
pub mod sweep;
pub mod verify;

pub use config::{PipelineOptions, RunConfig};
pub use error::{CliError, CliResult};
pub use pipeline::{execute, run_pipeline, RunManifest};
pub use sweep::{sweep_grid, SweepReport};
pub use verify::{verify_bound, VerifyReport};

/// Environment variable bounding the sweep worker pool.
pub const WORKERS_ENV: &str = "DBMAPPER_WORKERS";
