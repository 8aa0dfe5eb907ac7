//! Rough single-thread throughput probe for the back-projection kernel.
//!
//! Run with `cargo run --release -p raydar-core --example bench_backprojection`.

use std::time::Instant;

use raydar_core::baseband::{synthesize_cube, Amplitude};
use raydar_core::geom::Vec3;
use raydar_core::imaging::Backprojector;
use raydar_core::rfconfig::{ArrayGeometry, VoxelGrid, Waveform};
use raydar_core::tracer::{ChannelRecords, PathRecord};

fn main() {
    let array = ArrayGeometry::square(47, 3e-3, 0.0);
    let waveform = Waveform::from_band(72e9, 82e9, 128).unwrap();
    let target = Vec3::new(0.0, 0.0, 0.30);
    let mut records = Vec::new();
    for (tx, &pt) in array.tx_positions().iter().enumerate() {
        for (rx, &pr) in array.rx_positions().iter().enumerate() {
            records.push(PathRecord {
                tx: tx as u32,
                rx: rx as u32,
                length_d: pt.distance(target) + pr.distance(target),
                bounces: 1,
            });
        }
    }
    let records = ChannelRecords::from_records(array.n_tx(), array.n_rx(), records).unwrap();
    let t0 = Instant::now();
    let cube = synthesize_cube(&records, &waveform, &array, Amplitude::Unit).unwrap();
    println!("synthesis: {:.2} s", t0.elapsed().as_secs_f64());

    let grid = VoxelGrid::new(
        Vec3::new(-0.02, -0.02, 0.28),
        Vec3::new(0.02, 0.02, 0.32),
        [0.5e-3; 3],
    )
    .unwrap();
    let [nx, ny, nz] = grid.counts();
    println!("grid: {nx} x {ny} x {nz} = {} voxels", grid.len());

    let t1 = Instant::now();
    let projector = Backprojector::new(&cube);
    let mut scratch = projector.make_scratch();
    // Time a z-slab and extrapolate.
    let slab = 2usize;
    let mut checksum = 0.0f64;
    for k in 0..slab {
        for j in 0..ny {
            for i in 0..nx {
                checksum += projector.voxel(grid.center(i, j, k), &mut scratch).norm_sqr();
            }
        }
    }
    let dt = t1.elapsed().as_secs_f64();
    let per_voxel = dt / (slab * nx * ny) as f64;
    println!(
        "kernel: {:.1} us/voxel, projected single-thread full grid {:.0} s (checksum {:.3e})",
        per_voxel * 1e6,
        per_voxel * grid.len() as f64,
        checksum
    );
}
