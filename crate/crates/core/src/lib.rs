//! Density-based Mapper.
//!
//! Mapper builds a graph summary of a point cloud from a scalar lens: the lens
//! range is covered by overlapping intervals, each slice is clustered, and
//! clusters sharing points are joined. This crate replaces the hard interval
//! pullbacks with kernels whose width grows where the data is sparse in lens
//! space, and ships the tooling to check the result against the Reeb graph:
//! extended persistence, bottleneck distance and an exact Reeb oracle.
//!
//! ```
//! use dbmapper::{synthgen, cover, mapper};
//!
//! let (cloud, lens) = synthgen::gen_circle(300, 1.0, 0.01, 7).unwrap();
//! let cover = cover::morse_spaced_cover(lens.lo(), lens.hi(), 6, 0.5).unwrap();
//! let params = mapper::MapperParams::standard(0.2).unwrap();
//! let graph = mapper::build_mapper(&cloud, &lens, &cover, &params).unwrap();
//! assert_eq!(graph.betti(), (1, 1));
//! ```

pub mod cluster;
pub mod cover;
pub mod density;
pub mod error;
pub mod export;
pub mod geometry;
pub mod io;
pub mod kernel;
pub mod mapper;
pub mod persistence;
pub mod synthgen;

pub use cluster::{ClusterAssignment, Clusterer, ClustererSpec};
pub use cover::{GomicCover, Interval};
pub use density::{DensityProfile, WidthScaler};
pub use error::{Error, Result};
pub use geometry::{LensMap, NeighborGraph, PointCloud};
pub use kernel::{KernelShape, KernelSpec, KerneledSet};
pub use mapper::{MapperEdge, MapperGraph, MapperParams, MapperVertex, WeightMode};
pub use persistence::{PersistenceDiagram, PersistencePoint, PointKind};
