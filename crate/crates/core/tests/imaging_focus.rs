//! Matched-filter focusing checks on small instances, plus the
//! optimized-vs-naive equivalence at the full tested scale.

use num_complex::Complex64;
use rand::Rng;
use raydar_core::baseband::{synthesize_cube, Amplitude, BasebandCube};
use raydar_core::geom::Vec3;
use raydar_core::imaging::{backproject, backproject_naive, max_project};
use raydar_core::rfconfig::{ArrayGeometry, VoxelGrid, Waveform};
use raydar_core::rng::derive_stream;
use raydar_core::tracer::{ChannelRecords, PathRecord};

/// Exact two-leg records for a point scatterer seen by every channel.
fn point_scatterer_records(array: &ArrayGeometry, target: Vec3) -> ChannelRecords {
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
    ChannelRecords::from_records(array.n_tx(), array.n_rx(), records).unwrap()
}

fn point_scatterer_cube(array: ArrayGeometry, waveform: Waveform, target: Vec3) -> BasebandCube {
    let records = point_scatterer_records(&array, target);
    synthesize_cube(&records, &waveform, &array, Amplitude::Unit).unwrap()
}

#[test]
fn point_scatterer_focuses_at_its_location() {
    let array = ArrayGeometry::square(6, 0.024, 0.0);
    let waveform = Waveform::from_band(72e9, 82e9, 16).unwrap();
    let target = Vec3::new(0.0, 0.0, 0.30);
    let cube = point_scatterer_cube(array.clone(), waveform, target);
    let grid = VoxelGrid::new(
        Vec3::new(-0.006, -0.006, 0.294),
        Vec3::new(0.006, 0.006, 0.306),
        [1.5e-3; 3],
    )
    .unwrap();
    let volume = backproject(&cube, &grid);
    let (i, j, k) = volume.argmax();
    assert!((grid.center(i, j, k) - target).norm() < 1e-12, "peak off target");
    // With exact two-leg lengths every phasor aligns at the true voxel.
    let peak = volume.value(i, j, k).norm();
    let coherent = (array.n_tx() * array.n_rx() * waveform.n_f()) as f64;
    assert!(peak >= 0.99 * coherent, "peak {peak} vs coherent sum {coherent}");
    // The projected image peaks at the same pixel and depth.
    let image = max_project(&volume);
    assert_eq!(image.amplitude_at(i, j), peak);
    assert!((image.depth_at(i, j) - 0.30).abs() < 1e-12);
}

#[test]
fn optimized_backprojection_matches_naive_at_tested_scale() {
    // An instance at the upper end of the oracle scale
    // (voxels x channels x frequencies ~ 1e5) with random cube contents.
    let array = ArrayGeometry::from_positions(
        vec![Vec3::new(-0.03, 0.0, 0.0), Vec3::new(0.03, 0.0, 0.0)],
        vec![Vec3::new(0.0, -0.03, 0.0), Vec3::new(0.0, 0.03, 0.0)],
    )
    .unwrap();
    let waveform = Waveform::from_band(72e9, 82e9, 5).unwrap();
    let mut rng = derive_stream(606, &[0]);
    let samples: Vec<Complex64> = (0..array.n_tx() * array.n_rx() * waveform.n_f())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let cube = BasebandCube::from_samples(waveform, array, samples).unwrap();
    let grid = VoxelGrid::new(
        Vec3::new(-0.02, -0.02, 0.08),
        Vec3::new(0.02, 0.02, 0.12),
        [2.5e-3; 3],
    )
    .unwrap();
    assert_eq!(grid.len() * 4 * 5, 98260); // within the 1e5 product budget
    let fast = backproject(&cube, &grid);
    let naive = backproject_naive(&cube, &grid);
    let scale = naive.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    for (a, b) in fast.values().iter().zip(naive.values()) {
        assert!((*a - *b).norm() <= 1e-9 * scale, "mismatch beyond 1e-9 relative");
    }
}

#[test]
fn off_grid_scatterer_peaks_at_nearest_voxel() {
    let array = ArrayGeometry::square(5, 0.03, 0.0);
    let waveform = Waveform::from_band(72e9, 82e9, 12).unwrap();
    // 0.4 mm off the lattice in x, a third of a voxel.
    let target = Vec3::new(0.0004, 0.0, 0.25);
    let cube = point_scatterer_cube(array, waveform, target);
    let grid = VoxelGrid::new(
        Vec3::new(-0.0048, -0.0048, 0.2452),
        Vec3::new(0.0048, 0.0048, 0.2548),
        [1.2e-3; 3],
    )
    .unwrap();
    let volume = backproject(&cube, &grid);
    let (i, j, k) = volume.argmax();
    let peak = grid.center(i, j, k);
    assert!((peak.x - 0.0).abs() < 1.3e-3);
    assert!((peak.y - 0.0).abs() < 1.3e-3);
    assert!((peak.z - 0.25).abs() < 1.3e-3);
}
