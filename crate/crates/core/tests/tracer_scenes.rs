//! Scene-level tracing checks: analytic path lengths, specular lobe
//! geometry, determinism, and the record invariants.

mod common;

use common::{cube_mesh, plate_mesh};
use raydar_core::geom::{Transform, Vec3};
use raydar_core::material::MaterialParams;
use raydar_core::rfconfig::ArrayGeometry;
use raydar_core::scene::Scene;
use raydar_core::tracer::{trace_all, trace_tx, TraceConfig};
use raydar_core::TriangleMesh;

/// A millimeter-scale facet at (0, 0, 0.3) facing the origin.
fn small_facet() -> Scene {
    let mesh = TriangleMesh::new(
        vec![
            Vec3::new(1e-3, 0.0, 0.3),
            Vec3::new(-1e-3, 1e-3, 0.3),
            Vec3::new(-1e-3, -1e-3, 0.3),
        ],
        vec![[0, 2, 1]],
    )
    .unwrap();
    let scene = Scene::new(mesh);
    assert!(scene.mesh().face_normal(0).z < 0.0, "facet must face the array");
    scene
}

#[test]
fn coaxial_facet_returns_two_leg_paths() {
    let scene = small_facet();
    let array = ArrayGeometry::from_positions(
        vec![Vec3::new(0.0, 0.0, 0.0)],
        vec![Vec3::new(1e-3, 0.0, 0.0)],
    )
    .unwrap();
    let config = TraceConfig {
        rays_per_triangle: 256,
        rx_radius: 5e-3,
        master_seed: 42,
        ..Default::default()
    };
    let records = trace_all(&scene, &array, MaterialParams::SPECULAR, &config);
    assert!(!records.is_empty(), "boresight specular return must be captured");
    for r in records.records() {
        assert_eq!(r.bounces, 1);
        assert!((r.length_d - 0.6).abs() < config.rx_radius, "length {}", r.length_d);
    }
}

fn tilted_plate_scene() -> Scene {
    let transform = Transform::from_euler_deg(1.0, [45.0, 0.0, 0.0], Vec3::new(0.0, 0.0, 0.3));
    Scene::new(plate_mesh(0.2, 0.2, &transform))
}

fn small_square_array() -> ArrayGeometry {
    ArrayGeometry::square(4, 0.02, 0.0)
}

#[test]
fn tilted_plate_has_no_specular_returns_in_the_array_plane() {
    let scene = tilted_plate_scene();
    let array = small_square_array();
    for seed in 0..10 {
        let config = TraceConfig {
            rays_per_triangle: 512,
            max_bounces: 1,
            rx_radius: 5e-3,
            master_seed: seed,
            ..Default::default()
        };
        let records = trace_all(&scene, &array, MaterialParams::SPECULAR, &config);
        assert!(records.is_empty(), "seed {seed} produced {} records", records.len());
    }
}

#[test]
fn diffuse_scattering_reaches_off_specular_receivers() {
    let scene = tilted_plate_scene();
    let array = small_square_array();
    for seed in 0..10 {
        let config = TraceConfig {
            rays_per_triangle: 512,
            max_bounces: 1,
            rx_radius: 5e-3,
            master_seed: seed,
            ..Default::default()
        };
        let diffuse = trace_all(&scene, &array, MaterialParams::DIFFUSE, &config);
        let specular = trace_all(&scene, &array, MaterialParams::SPECULAR, &config);
        assert!(diffuse.len() > specular.len(), "seed {seed}: {} vs {}", diffuse.len(), specular.len());
        assert!(!diffuse.is_empty());
    }
}

#[test]
fn specular_beats_diffuse_on_the_boresight_receiver() {
    // A facet-sized plate far from the array: in this beam-like regime the
    // mirror lobe concentrates all returns near the Tx-Rx midpoints, so
    // adding diffusion can only leak captures away from the boresight.
    // (A plate comparable to the standoff behaves differently: a broadened
    // lobe gathers returns from the whole surface.)
    let transform = Transform::from_euler_deg(1.0, [0.0, 0.0, 0.0], Vec3::new(0.0, 0.0, 0.3));
    let scene = Scene::new(plate_mesh(0.05, 0.05, &transform));
    let array = ArrayGeometry::square(4, 0.01, 0.0);
    // The receiver nearest the z axis.
    let boresight = array
        .rx_positions()
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            (a.x * a.x + a.y * a.y).total_cmp(&(b.x * b.x + b.y * b.y))
        })
        .map(|(i, _)| i)
        .unwrap();
    let mut totals = [0usize; 3];
    for seed in 0..10 {
        for (slot, alpha) in [0.0, 0.5, 1.0].into_iter().enumerate() {
            let config = TraceConfig {
                rays_per_triangle: 4096,
                max_bounces: 1,
                rx_radius: 5e-3,
                master_seed: seed,
                ..Default::default()
            };
            let records =
                trace_all(&scene, &array, MaterialParams::new(alpha).unwrap(), &config);
            totals[slot] += (0..array.n_tx())
                .map(|tx| records.channel(tx, boresight).len())
                .sum::<usize>();
        }
    }
    assert!(totals[0] > 0, "normal-incidence plate must return on boresight");
    assert!(totals[0] >= totals[1], "alpha 0 {} vs alpha 0.5 {}", totals[0], totals[1]);
    assert!(totals[0] >= totals[2], "alpha 0 {} vs alpha 1 {}", totals[0], totals[2]);
}

#[test]
fn trace_is_deterministic_and_order_independent() {
    let scene = Scene::new(cube_mesh(Vec3::new(0.0, 0.0, 0.35), 0.05));
    let array = small_square_array();
    let config = TraceConfig {
        rays_per_triangle: 64,
        rx_radius: 1e-2,
        master_seed: 7,
        ..Default::default()
    };
    let material = MaterialParams::new(0.5).unwrap();
    let first = trace_all(&scene, &array, material, &config);
    let second = trace_all(&scene, &array, material, &config);
    assert_eq!(first, second);
    // Concatenating per-tx traces in tx order reproduces the global
    // record list (the per-tx sort is a refinement of the global one).
    let mut concatenated = Vec::new();
    for tx in 0..array.n_tx() {
        concatenated.extend(trace_tx(&scene, &array, material, &config, tx));
    }
    assert_eq!(first.records(), concatenated.as_slice());
}

#[test]
fn record_count_respects_the_counting_bound() {
    let scene = Scene::new(cube_mesh(Vec3::new(0.0, 0.0, 0.35), 0.05));
    let array = small_square_array();
    let config = TraceConfig {
        rays_per_triangle: 16,
        max_bounces: 1,
        rx_radius: 2e-2,
        master_seed: 3,
        ..Default::default()
    };
    let records = trace_all(&scene, &array, MaterialParams::DIFFUSE, &config);
    let bound = array.n_tx()
        * scene.mesh().face_count()
        * config.rays_per_triangle as usize
        * array.n_rx();
    assert!(records.len() <= bound);
}

#[test]
fn record_lengths_have_geometric_lower_bounds() {
    let center = Vec3::new(0.0, 0.0, 0.35);
    let half = 0.05;
    let scene = Scene::new(cube_mesh(center, half));
    let array = small_square_array();
    let config = TraceConfig {
        rays_per_triangle: 64,
        rx_radius: 1e-2,
        master_seed: 11,
        ..Default::default()
    };
    let records = trace_all(&scene, &array, MaterialParams::new(0.5).unwrap(), &config);
    assert!(!records.is_empty());
    // Distance from a point to the cube's bounding box.
    let box_distance = |p: Vec3| {
        let d = Vec3::new(
            (p.x - center.x).abs() - half,
            (p.y - center.y).abs() - half,
            (p.z - center.z).abs() - half,
        );
        Vec3::new(d.x.max(0.0), d.y.max(0.0), d.z.max(0.0)).norm()
    };
    for r in records.records() {
        assert!(r.bounces >= 1 && r.bounces <= config.max_bounces);
        let tx = array.tx_positions()[r.tx as usize];
        let rx = array.rx_positions()[r.rx as usize];
        let lower = (box_distance(tx) + box_distance(rx)).max(tx.distance(rx));
        assert!(
            r.length_d >= lower - 1e-9,
            "record length {} below geometric bound {lower}",
            r.length_d
        );
    }
}
