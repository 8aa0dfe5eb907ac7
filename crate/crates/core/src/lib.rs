//! Ray-traced MIMO radar simulation kernels.
//!
//! This crate holds the pure-math core of the simulator: triangle-mesh
//! scenes with BVH-accelerated ray queries, an alpha-blended
//! diffuse/specular scattering model, stepped-frequency (SFCW) baseband
//! synthesis by coherent summation over ray paths, and matched-filter
//! back-projection imaging onto a voxel grid.
//!
//! The crate is `no_std` (with `alloc`). Everything here is deterministic
//! for a fixed master seed, independent of worker count or execution
//! order: each parallel work unit derives its own counter-based random
//! stream, and all reductions run in a fixed order. File formats, the
//! scenario CLI, and the rayon drivers live in the companion `raydar`
//! crate.

#![no_std]
#![deny(unsafe_code)]
// Under the unit-test harness std is linked and f64 gains inherent math

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod baseband;
mod fmath;
pub mod geom;
pub mod imaging;
pub mod material;
pub mod rfconfig;
pub mod rng;
pub mod scene;
pub mod tracer;

pub use geom::{Ray, Transform, Vec3};
pub use rfconfig::{ArrayGeometry, VoxelGrid, Waveform, SPEED_OF_LIGHT};
pub use scene::{Scene, TriangleMesh};
pub use tracer::{ChannelRecords, PathRecord, TraceConfig};
