//! Bounding volume hierarchy over mesh triangles.
//!
//! Queries through the BVH return exactly what brute-force testing of
//! every face would return; ties on hit distance resolve to the lowest
//! face id so traversal order can never change the result.

use alloc::vec::Vec;


use super::{Hit, TriangleMesh, INTERSECTION_EPSILON};
use crate::geom::{Ray, Vec3};

const MAX_LEAF_SIZE: usize = 4;

/// Rejection threshold for the Moller-Trumbore determinant; rays closer
/// to parallel than this report no hit.
const PARALLEL_EPSILON: f64 = 1e-12;

#[derive(Clone, Copy, Debug)]
struct Aabb {
    min: Vec3,
    max: Vec3,
}

impl Aabb {
    fn empty() -> Aabb {
        Aabb {
            min: Vec3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY),
            max: Vec3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    fn grow(&mut self, p: Vec3) {
        self.min = self.min.min_components(p);
        self.max = self.max.max_components(p);
    }

    /// Slab test against the interval `[t_min, t_max]`.
    fn hit(&self, origin: Vec3, inv_dir: Vec3, t_min: f64, t_max: f64) -> bool {
        let mut lo = t_min;
        let mut hi = t_max;
        for axis in 0..3 {
            let inv = inv_dir.axis(axis);
            let o = origin.axis(axis);
            let mut t0 = (self.min.axis(axis) - o) * inv;
            let mut t1 = (self.max.axis(axis) - o) * inv;
            if inv < 0.0 {
                core::mem::swap(&mut t0, &mut t1);
            }
            lo = lo.max(t0);
            hi = hi.min(t1);
            if lo > hi {
                return false;
            }
        }
        true
    }
}

/// Triangle pre-arranged for intersection tests.
#[derive(Clone, Copy, Debug)]
struct Tri {
    a: Vec3,
    edge_ab: Vec3,
    edge_ac: Vec3,
    normal: Vec3,
    face_id: u32,
}

impl Tri {
    fn centroid_axis(&self, axis: usize) -> f64 {
        (self.a + (self.edge_ab + self.edge_ac) / 3.0).axis(axis)
    }

    /// Moller-Trumbore intersection; returns the distance when the ray
    /// hits inside the triangle with `t` in `(t_min, t_max]`.
    fn intersect(&self, ray: &Ray, t_min: f64, t_max: f64) -> Option<f64> {
        let pvec = ray.direction.cross(self.edge_ac);
        let det = self.edge_ab.dot(pvec);
        if det.abs() < PARALLEL_EPSILON {
            return None;
        }
        let inv_det = 1.0 / det;
        let tvec = ray.origin - self.a;
        let u = tvec.dot(pvec) * inv_det;
        if !(0.0..=1.0).contains(&u) {
            return None;
        }
        let qvec = tvec.cross(self.edge_ab);
        let v = ray.direction.dot(qvec) * inv_det;
        if v < 0.0 || u + v > 1.0 {
            return None;
        }
        let t = self.edge_ac.dot(qvec) * inv_det;
        if t > t_min && t <= t_max {
            Some(t)
        } else {
            None
        }
    }
}

/// One node. `len > 0` marks a leaf covering `len` triangles starting at
/// `index` in the reordered triangle array. For inner nodes `len == 0`,
/// the left child sits directly after the node and `index` points at the
/// right child.
#[derive(Clone, Copy, Debug)]
struct Node {
    aabb: Aabb,
    index: u32,
    len: u32,
}

/// Binary BVH built by median splits over triangle centroids.
#[derive(Clone, Debug)]
pub struct Bvh {
    nodes: Vec<Node>,
    tris: Vec<Tri>,
}

impl Bvh {
    /// Build the hierarchy. An empty mesh yields a structure that
    /// reports no hit for every query.
    pub fn build(mesh: &TriangleMesh) -> Bvh {
        let mut tris: Vec<Tri> = (0..mesh.face_count())
            .map(|f| {
                let [a, b, c] = mesh.face_vertices(f);
                Tri {
                    a,
                    edge_ab: b - a,
                    edge_ac: c - a,
                    normal: mesh.face_normal(f),
                    face_id: f as u32,
                }
            })
            .collect();
        let mut nodes = Vec::new();
        if !tris.is_empty() {
            nodes.reserve(2 * tris.len());
            build_node(&mut nodes, &mut tris, 0);
        }
        Bvh { nodes, tris }
    }

    /// Nearest hit with distance in `(t_min, t_max]`, or `None`.
    ///
    /// The returned normal is oriented against the ray direction.
    pub fn intersect(&self, ray: &Ray, t_min: f64, t_max: f64) -> Option<Hit> {
        if self.nodes.is_empty() {
            return None;
        }
        let inv_dir = Vec3::new(
            1.0 / ray.direction.x,
            1.0 / ray.direction.y,
            1.0 / ray.direction.z,
        );
        let mut best: Option<(f64, u32, Vec3)> = None;
        let mut stack = [0u32; 64];
        let mut depth = 1usize;
        while depth > 0 {
            depth -= 1;
            let slot = stack[depth];
            let node = self.nodes[slot as usize];
            let limit = best.map_or(t_max, |(t, _, _)| t.min(t_max));
            if !node.aabb.hit(ray.origin, inv_dir, t_min, limit) {
                continue;
            }
            if node.len > 0 {
                for tri in &self.tris[node.index as usize..(node.index + node.len) as usize] {
                    if let Some(t) = tri.intersect(ray, t_min, limit) {
                        let closer = match best {
                            None => true,
                            Some((bt, bf, _)) => t < bt || (t == bt && tri.face_id < bf),
                        };
                        if closer {
                            best = Some((t, tri.face_id, tri.normal));
                        }
                    }
                }
            } else {
                stack[depth] = slot + 1;
                stack[depth + 1] = node.index;
                depth += 2;
            }
        }
        best.map(|(t, face, n)| {
            let normal = if n.dot(ray.direction) < 0.0 { n } else { -n };
            Hit { face_id: face as usize, point: ray.at(t), distance: t, normal }
        })
    }

    /// Any-hit test over the open segment `(a, b)` with an epsilon margin
    /// at both endpoints.
    pub fn occluded(&self, a: Vec3, b: Vec3) -> bool {
        if self.nodes.is_empty() {
            return false;
        }
        let length = a.distance(b);
        let hi = length - INTERSECTION_EPSILON;
        if hi <= INTERSECTION_EPSILON {
            return false;
        }
        let ray = Ray::new(a, b - a);
        let inv_dir = Vec3::new(
            1.0 / ray.direction.x,
            1.0 / ray.direction.y,
            1.0 / ray.direction.z,
        );
        let mut stack = [0u32; 64];
        let mut depth = 1usize;
        while depth > 0 {
            depth -= 1;
            let slot = stack[depth];
            let node = self.nodes[slot as usize];
            if !node.aabb.hit(ray.origin, inv_dir, INTERSECTION_EPSILON, hi) {
                continue;
            }
            if node.len > 0 {
                for tri in &self.tris[node.index as usize..(node.index + node.len) as usize] {
                    // Strict interior: a hit exactly at the far margin is out.
                    if let Some(t) = tri.intersect(&ray, INTERSECTION_EPSILON, hi) {
                        if t < hi {
                            return true;
                        }
                    }
                }
            } else {
                stack[depth] = slot + 1;
                stack[depth + 1] = node.index;
                depth += 2;
            }
        }
        false
    }
}

fn build_node(nodes: &mut Vec<Node>, tris: &mut [Tri], offset: usize) -> u32 {
    let mut aabb = Aabb::empty();
    for tri in tris.iter() {
        aabb.grow(tri.a);
        aabb.grow(tri.a + tri.edge_ab);
        aabb.grow(tri.a + tri.edge_ac);
    }
    let slot = nodes.len() as u32;
    nodes.push(Node { aabb, index: offset as u32, len: tris.len() as u32 });
    if tris.len() <= MAX_LEAF_SIZE {
        return slot;
    }
    // Median split along the widest axis of the centroid bounds. Splitting
    // at the midpoint by count keeps the tree balanced even when many
    // centroids coincide.
    let mut cmin = Vec3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
    let mut cmax = Vec3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for tri in tris.iter() {
        let c = tri.a + (tri.edge_ab + tri.edge_ac) / 3.0;
        cmin = cmin.min_components(c);
        cmax = cmax.max_components(c);
    }
    let span = cmax - cmin;
    let axis = if span.x >= span.y && span.x >= span.z {
        0
    } else if span.y >= span.z {
        1
    } else {
        2
    };
    tris.sort_unstable_by(|p, q| {
        p.centroid_axis(axis)
            .total_cmp(&q.centroid_axis(axis))
            .then(p.face_id.cmp(&q.face_id))
    });
    let mid = tris.len() / 2;
    let (left, right) = tris.split_at_mut(mid);
    build_node(nodes, left, offset);
    let right_slot = build_node(nodes, right, offset + mid);
    nodes[slot as usize].index = right_slot;
    nodes[slot as usize].len = 0;
    slot
}
