//! Simulation-ready 3D asset toolkit.
//!
//! * [`voxel`]: mesh voxelization, part decomposition and z-slicing
//! * [`codec`]: template run-length encoding of part volumes as plain text
//! * [`asset`]: the tree-structured physical asset and its text format
//! * [`urdf`]: URDF export and structural validation
//! * [`metrics`]: geometry, scale, kinematic and correlation metrics
//! * [`bench`]: judge-score validation and benchmark aggregation
//! * [`cli`]: the `simasset` command line

pub mod asset;
pub mod bench;
pub mod bits;
pub mod cli;
pub mod codec;
pub mod fixtures;
pub mod geom;
pub mod kvtext;
pub mod mesh;
pub mod metrics;
pub mod urdf;
pub mod voxel;

pub use codec::{CodecError, CodeStats, LayerCode, PartCode, RunList};
pub use mesh::TriangleMesh;
pub use voxel::{PartGrid, SliceMask, VoxelError, VoxelGrid};
