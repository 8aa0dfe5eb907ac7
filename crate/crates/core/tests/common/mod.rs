//! Shared geometry builders and independent oracles for integration tests.

#![allow(dead_code)]

use rand::Rng;
use raydar_core::geom::{Ray, Transform, Vec3};
use raydar_core::scene::TriangleMesh;

/// Axis-aligned cube with outward-facing windings.
pub fn cube_mesh(center: Vec3, half: f64) -> TriangleMesh {
    let h = half;
    let vertices = vec![
        center + Vec3::new(-h, -h, -h),
        center + Vec3::new(h, -h, -h),
        center + Vec3::new(h, h, -h),
        center + Vec3::new(-h, h, -h),
        center + Vec3::new(-h, -h, h),
        center + Vec3::new(h, -h, h),
        center + Vec3::new(h, h, h),
        center + Vec3::new(-h, h, h),
    ];
    let faces = vec![
        [0, 2, 1],
        [0, 3, 2],
        [4, 5, 6],
        [4, 6, 7],
        [0, 1, 5],
        [0, 5, 4],
        [2, 3, 7],
        [2, 7, 6],
        [0, 4, 7],
        [0, 7, 3],
        [1, 2, 6],
        [1, 6, 5],
    ];
    TriangleMesh::new(vertices, faces).unwrap()
}

/// Rectangular plate in the z = 0 plane, normal facing -z, optionally
/// transformed into place.
pub fn plate_mesh(width: f64, height: f64, transform: &Transform) -> TriangleMesh {
    let (hw, hh) = (width / 2.0, height / 2.0);
    let vertices = vec![
        Vec3::new(-hw, -hh, 0.0),
        Vec3::new(hw, -hh, 0.0),
        Vec3::new(hw, hh, 0.0),
        Vec3::new(-hw, hh, 0.0),
    ];
    let faces = vec![[0, 3, 2], [0, 2, 1]];
    TriangleMesh::new(vertices, faces)
        .unwrap()
        .transformed(transform)
        .unwrap()
}

/// Random triangle soup with non-degenerate faces.
pub fn triangle_soup<R: Rng>(faces: usize, extent: f64, rng: &mut R) -> TriangleMesh {
    let mut vertices = Vec::with_capacity(faces * 3);
    let mut indices = Vec::with_capacity(faces);
    while indices.len() < faces {
        let base = vertices.len() as u32;
        let a = random_point(extent, rng);
        let b = random_point(extent, rng);
        let c = random_point(extent, rng);
        if (b - a).cross(c - a).norm() / 2.0 < 1e-9 {
            continue;
        }
        vertices.push(a);
        vertices.push(b);
        vertices.push(c);
        indices.push([base, base + 1, base + 2]);
    }
    TriangleMesh::new(vertices, indices).unwrap()
}

pub fn random_point<R: Rng>(extent: f64, rng: &mut R) -> Vec3 {
    Vec3::new(
        rng.gen_range(-extent..extent),
        rng.gen_range(-extent..extent),
        rng.gen_range(-extent..extent),
    )
}

pub fn random_direction<R: Rng>(rng: &mut R) -> Vec3 {
    loop {
        let v = random_point(1.0, rng);
        let n2 = v.norm_sq();
        if n2 > 1e-6 && n2 <= 1.0 {
            return v / n2.sqrt();
        }
    }
}

/// Brute-force nearest hit over every face, via an algorithm independent
/// of the library's Moller-Trumbore path: plane intersection followed by
/// a barycentric inside test. Ties resolve to the lowest face id.
pub fn brute_force_intersect(
    mesh: &TriangleMesh,
    ray: &Ray,
    t_min: f64,
    t_max: f64,
) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for f in 0..mesh.face_count() {
        let [a, b, c] = mesh.face_vertices(f);
        let n = (b - a).cross(c - a);
        let denom = n.dot(ray.direction);
        if denom.abs() < 1e-12 {
            continue;
        }
        let t = n.dot(a - ray.origin) / denom;
        if !(t > t_min && t <= t_max) {
            continue;
        }
        let p = ray.at(t);
        let v0 = b - a;
        let v1 = c - a;
        let v2 = p - a;
        let d00 = v0.dot(v0);
        let d01 = v0.dot(v1);
        let d11 = v1.dot(v1);
        let d20 = v2.dot(v0);
        let d21 = v2.dot(v1);
        let inv = 1.0 / (d00 * d11 - d01 * d01);
        let u = (d11 * d20 - d01 * d21) * inv;
        let v = (d00 * d21 - d01 * d20) * inv;
        if u < 0.0 || v < 0.0 || u + v > 1.0 {
            continue;
        }
        let closer = match best {
            None => true,
            Some((bf, bt)) => t < bt || (t == bt && f < bf),
        };
        if closer {
            best = Some((f, t));
        }
    }
    best
}
