//! Triangle-mesh scenes: validated construction, per-face flat normals,
//! uniform point sampling on faces, and ray queries through a BVH.

mod bvh;

pub use bvh::Bvh;

use alloc::vec::Vec;

use rand::Rng;

use crate::geom::{Ray, Transform, Vec3};

/// Minimum accepted hit distance, meters. Guards against rays
/// re-intersecting the surface they just left.
pub const INTERSECTION_EPSILON: f64 = 1e-6;

/// Faces below this area (square meters) are rejected at load.
pub const DEGENERATE_AREA: f64 = 1e-12;

/// Errors raised while validating mesh geometry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeshError {
    /// A face references a vertex index outside the vertex list.
    FaceIndexOutOfBounds { face: usize, index: u32, vertex_count: usize },
    /// Faces whose area is below [`DEGENERATE_AREA`], by face index.
    DegenerateFaces(Vec<usize>),
}

impl core::fmt::Display for MeshError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            MeshError::FaceIndexOutOfBounds { face, index, vertex_count } => write!(
                f,
                "face {face} references vertex {index} but the mesh has {vertex_count} vertices"
            ),
            MeshError::DegenerateFaces(faces) => {
                write!(f, "degenerate (zero-area) faces at indices {faces:?}")
            }
        }
    }
}

impl core::error::Error for MeshError {}

/// An intersection between a ray and a mesh face.
///
/// The stored normal is the face normal flipped, if necessary, so that it
/// faces the incoming ray: `dot(normal, ray.direction) < 0`.
#[derive(Clone, Copy, Debug)]
pub struct Hit {
    pub face_id: usize,
    pub point: Vec3,
    pub distance: f64,
    pub normal: Vec3,
}

/// Indexed triangle mesh with flat per-face unit normals.
///
/// Normals are always recomputed from the winding order of each face;
/// degenerate faces are rejected rather than dropped so that geometry
/// never silently disappears from a simulation.
#[derive(Clone, Debug)]
pub struct TriangleMesh {
    vertices: Vec<Vec3>,
    faces: Vec<[u32; 3]>,
    face_normals: Vec<Vec3>,
    face_areas: Vec<f64>,
}

impl TriangleMesh {
    /// Validate and build a mesh. An empty mesh (no faces) is valid and
    /// represents an empty scene.
    pub fn new(vertices: Vec<Vec3>, faces: Vec<[u32; 3]>) -> Result<TriangleMesh, MeshError> {
        let mut face_normals = Vec::with_capacity(faces.len());
        let mut face_areas = Vec::with_capacity(faces.len());
        let mut degenerate = Vec::new();
        for (fi, face) in faces.iter().enumerate() {
            for &index in face {
                if index as usize >= vertices.len() {
                    return Err(MeshError::FaceIndexOutOfBounds {
                        face: fi,
                        index,
                        vertex_count: vertices.len(),
                    });
                }
            }
            let a = vertices[face[0] as usize];
            let b = vertices[face[1] as usize];
            let c = vertices[face[2] as usize];
            let cross = (b - a).cross(c - a);
            let doubled_area = cross.norm();
            let area = 0.5 * doubled_area;
            if area < DEGENERATE_AREA {
                degenerate.push(fi);
                face_normals.push(Vec3::ZERO);
            } else {
                face_normals.push(cross / doubled_area);
            }
            face_areas.push(area);
        }
        if !degenerate.is_empty() {
            return Err(MeshError::DegenerateFaces(degenerate));
        }
        Ok(TriangleMesh { vertices, faces, face_normals, face_areas })
    }

    /// Apply a rigid transform with uniform scale; normals are recomputed
    /// from the transformed vertices.
    pub fn transformed(self, transform: &Transform) -> Result<TriangleMesh, MeshError> {
        let vertices = self.vertices.into_iter().map(|v| transform.apply(v)).collect();
        TriangleMesh::new(vertices, self.faces)
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[u32; 3]] {
        &self.faces
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn face_vertices(&self, face: usize) -> [Vec3; 3] {
        let [i, j, k] = self.faces[face];
        [self.vertices[i as usize], self.vertices[j as usize], self.vertices[k as usize]]
    }

    pub fn face_normal(&self, face: usize) -> Vec3 {
        self.face_normals[face]
    }

    pub fn face_normals(&self) -> &[Vec3] {
        &self.face_normals
    }

    pub fn face_area(&self, face: usize) -> f64 {
        self.face_areas[face]
    }

    pub fn total_area(&self) -> f64 {
        self.face_areas.iter().sum()
    }

    pub fn face_centroid(&self, face: usize) -> Vec3 {
        let [a, b, c] = self.face_vertices(face);
        (a + b + c) / 3.0
    }

    /// One point drawn uniformly over the face via barycentric folding.
    pub fn sample_face_point<R: Rng + ?Sized>(&self, face: usize, rng: &mut R) -> Vec3 {
        let [a, b, c] = self.face_vertices(face);
        let mut u: f64 = rng.gen();
        let mut v: f64 = rng.gen();
        if u + v > 1.0 {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        a + (b - a) * u + (c - a) * v
    }

    /// `count` points drawn uniformly over the face.
    pub fn sample_face_points<R: Rng + ?Sized>(
        &self,
        face: usize,
        count: usize,
        rng: &mut R,
    ) -> Vec<Vec3> {
        (0..count).map(|_| self.sample_face_point(face, rng)).collect()
    }
}

/// A mesh paired with its acceleration structure.
///
/// Immutable after construction; shared read-only queries from any number
/// of workers are safe.
#[derive(Clone, Debug)]
pub struct Scene {
    mesh: TriangleMesh,
    bvh: Bvh,
}

impl Scene {
    pub fn new(mesh: TriangleMesh) -> Scene {
        let bvh = Bvh::build(&mesh);
        Scene { mesh, bvh }
    }

    pub fn mesh(&self) -> &TriangleMesh {
        &self.mesh
    }

    pub fn bvh(&self) -> &Bvh {
        &self.bvh
    }

    /// Nearest hit with distance in `(t_min, t_max]`, if any.
    pub fn intersect(&self, ray: &Ray, t_min: f64, t_max: f64) -> Option<Hit> {
        self.bvh.intersect(ray, t_min, t_max)
    }

    /// True when any face blocks the open segment between `a` and `b`
    /// (with an [`INTERSECTION_EPSILON`] margin at both ends, so points
    /// lying exactly on a surface do not occlude themselves).
    pub fn occluded(&self, a: Vec3, b: Vec3) -> bool {
        self.bvh.occluded(a, b)
    }
}
