//! Ray launching, bounce tracing, and Rx capture.
//!
//! Primary rays are aimed from each Tx antenna at uniformly sampled
//! points on every front-facing mesh triangle. At each surface
//! interaction the outgoing direction is drawn from the material model,
//! the segment toward the next surface (or to infinity) is tested for
//! capture by every Rx antenna, and the ray continues until it escapes
//! the scene or reaches the bounce limit.
//!
//! Each (tx, face, ray) triple owns a derived random stream, so the
//! record multiset is a pure function of (scene, array, material,
//! config) no matter how work is scheduled.

use alloc::vec::Vec;


use crate::geom::{Ray, Vec3};
use crate::material::{self, MaterialParams};
use crate::rfconfig::ArrayGeometry;
use crate::rng::derive_stream;
use crate::scene::{Scene, INTERSECTION_EPSILON};

/// Tracing parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceConfig {
    /// Primary rays aimed at each triangle (the per-face mean when
    /// `area_weighted` is set).
    pub rays_per_triangle: u32,
    /// Distribute the total ray budget over faces in proportion to face
    /// area, with a minimum of one ray per face.
    pub area_weighted: bool,
    /// Maximum number of surface interactions per ray.
    pub max_bounces: u32,
    /// Capture sphere radius around each Rx antenna, meters.
    pub rx_radius: f64,
    /// Master seed; all per-ray streams derive from it.
    pub master_seed: u64,
}

impl Default for TraceConfig {
    fn default() -> TraceConfig {
        TraceConfig {
            rays_per_triangle: 32,
            area_weighted: false,
            max_bounces: 3,
            rx_radius: 2e-3,
            master_seed: 0,
        }
    }
}

/// One received ray path: channel indices, total traveled length, and
/// the number of surface interactions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathRecord {
    pub tx: u32,
    pub rx: u32,
    pub length_d: f64,
    pub bounces: u32,
}

impl PathRecord {
    /// Canonical global ordering: `(tx, rx, length_d, bounces)`.
    pub fn canonical_cmp(&self, other: &PathRecord) -> core::cmp::Ordering {
        self.tx
            .cmp(&other.tx)
            .then(self.rx.cmp(&other.rx))
            .then(self.length_d.total_cmp(&other.length_d))
            .then(self.bounces.cmp(&other.bounces))
    }
}

/// Sort records into the canonical global order.
pub fn sort_records(records: &mut [PathRecord]) {
    records.sort_unstable_by(PathRecord::canonical_cmp);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceError {
    /// A record carries a channel index outside the array.
    ChannelOutOfRange { tx: u32, rx: u32 },
}

impl core::fmt::Display for TraceError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let TraceError::ChannelOutOfRange { tx, rx } = self;
        write!(f, "record channel ({tx}, {rx}) lies outside the array")
    }
}

impl core::error::Error for TraceError {}

/// Path records grouped by (tx, rx) channel, in canonical order.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelRecords {
    n_tx: usize,
    n_rx: usize,
    records: Vec<PathRecord>,
    /// Start of each channel's slice; length `n_tx * n_rx + 1`.
    offsets: Vec<usize>,
}

impl ChannelRecords {
    /// Sort `records` into canonical order and index them by channel.
    pub fn from_records(
        n_tx: usize,
        n_rx: usize,
        mut records: Vec<PathRecord>,
    ) -> Result<ChannelRecords, TraceError> {
        for r in &records {
            if r.tx as usize >= n_tx || r.rx as usize >= n_rx {
                return Err(TraceError::ChannelOutOfRange { tx: r.tx, rx: r.rx });
            }
        }
        sort_records(&mut records);
        let mut offsets = Vec::with_capacity(n_tx * n_rx + 1);
        let mut cursor = 0usize;
        for channel in 0..n_tx * n_rx {
            offsets.push(cursor);
            let (tx, rx) = ((channel / n_rx) as u32, (channel % n_rx) as u32);
            while cursor < records.len()
                && records[cursor].tx == tx
                && records[cursor].rx == rx
            {
                cursor += 1;
            }
        }
        offsets.push(cursor);
        Ok(ChannelRecords { n_tx, n_rx, records, offsets })
    }

    pub fn n_tx(&self) -> usize {
        self.n_tx
    }

    pub fn n_rx(&self) -> usize {
        self.n_rx
    }

    /// All records in canonical order.
    pub fn records(&self) -> &[PathRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Records of one channel, ascending in length.
    pub fn channel(&self, tx: usize, rx: usize) -> &[PathRecord] {
        let c = tx * self.n_rx + rx;
        &self.records[self.offsets[c]..self.offsets[c + 1]]
    }
}

/// Per-face primary-ray budget.
///
/// Flat mode gives every face `rays_per_triangle`. Area-weighted mode
/// spreads `rays_per_triangle * face_count` rays proportionally to face
/// area, never below one ray per face.
pub fn face_ray_budget(scene: &Scene, config: &TraceConfig) -> Vec<u32> {
    let mesh = scene.mesh();
    let faces = mesh.face_count();
    if !config.area_weighted {
        return alloc::vec![config.rays_per_triangle; faces];
    }
    let total_rays = config.rays_per_triangle as f64 * faces as f64;
    let total_area = mesh.total_area();
    (0..faces)
        .map(|f| {
            let share = total_rays * mesh.face_area(f) / total_area;
            (crate::fmath::round(share) as u32).max(1)
        })
        .collect()
}

/// Rx capture test along one outgoing segment.
///
/// An Rx is captured when its perpendicular distance to the segment line
/// is at most `rx_radius`, the closest approach falls within the segment
/// extent, and the path from the interaction point to the antenna is not
/// occluded. The returned length is the distance from the segment start
/// (the interaction point) to the antenna center.
pub fn capture_rx(
    start: Vec3,
    direction: Vec3,
    segment_len: f64,
    array: &ArrayGeometry,
    scene: &Scene,
    rx_radius: f64,
) -> Vec<(u32, f64)> {
    let mut out = Vec::new();
    capture_rx_into(start, direction, segment_len, array, scene, rx_radius, &mut out);
    out
}

fn capture_rx_into(
    start: Vec3,
    direction: Vec3,
    segment_len: f64,
    array: &ArrayGeometry,
    scene: &Scene,
    rx_radius: f64,
    out: &mut Vec<(u32, f64)>,
) {
    let radius_sq = rx_radius * rx_radius;
    for (rx, &pos) in array.rx_positions().iter().enumerate() {
        let to_rx = pos - start;
        let along = to_rx.dot(direction);
        if along < 0.0 || along > segment_len {
            continue;
        }
        let perp_sq = (to_rx - direction * along).norm_sq();
        if perp_sq > radius_sq {
            continue;
        }
        if scene.occluded(start, pos) {
            continue;
        }
        out.push((rx as u32, to_rx.norm()));
    }
}

/// Trace every primary ray of one (tx, face) work unit.
///
/// `ray_budget` is this face's entry from [`face_ray_budget`]. Output
/// order is the generation order; callers sort.
pub fn trace_unit(
    scene: &Scene,
    array: &ArrayGeometry,
    material: MaterialParams,
    config: &TraceConfig,
    ray_budget: u32,
    tx: usize,
    face: usize,
) -> Vec<PathRecord> {
    let mesh = scene.mesh();
    let tx_pos = array.tx_positions()[tx];
    let mut records = Vec::new();
    // Faces backfacing the Tx never receive primary rays. The sign of
    // dot(normal, p - tx) is constant over the face plane, so the
    // centroid decides for every target point.
    let normal = mesh.face_normal(face);
    if normal.dot(mesh.face_centroid(face) - tx_pos) >= 0.0 {
        return records;
    }
    let mut captures = Vec::new();
    for ray_index in 0..ray_budget {
        let mut stream =
            derive_stream(config.master_seed, &[tx as u64, face as u64, ray_index as u64]);
        let target = mesh.sample_face_point(face, &mut stream);
        if (target - tx_pos).norm() == 0.0 {
            continue;
        }
        let mut ray = Ray::from_points(tx_pos, target);
        let mut path_len = 0.0;
        let mut hit = match scene.intersect(&ray, INTERSECTION_EPSILON, f64::INFINITY) {
            Some(h) => h,
            None => continue,
        };
        path_len += hit.distance;
        for bounce in 1..=config.max_bounces {
            let outgoing = material::scatter(ray.direction, hit.normal, material, &mut stream);
            let next = scene.intersect(
                &Ray::new(hit.point, outgoing),
                INTERSECTION_EPSILON,
                f64::INFINITY,
            );
            let segment_len = next.as_ref().map_or(f64::INFINITY, |h| h.distance);
            captures.clear();
            capture_rx_into(
                hit.point,
                outgoing,
                segment_len,
                array,
                scene,
                config.rx_radius,
                &mut captures,
            );
            for &(rx, capture_len) in &captures {
                records.push(PathRecord {
                    tx: tx as u32,
                    rx,
                    length_d: path_len + capture_len,
                    bounces: bounce,
                });
            }
            match next {
                Some(h) if bounce < config.max_bounces => {
                    path_len += h.distance;
                    ray = Ray::new(hit.point, outgoing);
                    hit = h;
                }
                _ => break,
            }
        }
    }
    records
}

/// All records produced by one Tx antenna, sorted by `(rx, length_d)`.
pub fn trace_tx(
    scene: &Scene,
    array: &ArrayGeometry,
    material: MaterialParams,
    config: &TraceConfig,
    tx: usize,
) -> Vec<PathRecord> {
    let budgets = face_ray_budget(scene, config);
    let mut records = Vec::new();
    for face in 0..scene.mesh().face_count() {
        records.extend(trace_unit(scene, array, material, config, budgets[face], tx, face));
    }
    records.sort_unstable_by(|a, b| {
        a.rx.cmp(&b.rx)
            .then(a.length_d.total_cmp(&b.length_d))
            .then(a.bounces.cmp(&b.bounces))
    });
    records
}

/// Trace every Tx antenna serially and group the records by channel.
///
/// Equals the merge of [`trace_unit`] over all (tx, face) pairs in any
/// order; the companion crate's parallel driver produces bit-identical
/// output.
pub fn trace_all(
    scene: &Scene,
    array: &ArrayGeometry,
    material: MaterialParams,
    config: &TraceConfig,
) -> ChannelRecords {
    let budgets = face_ray_budget(scene, config);
    let mut records = Vec::new();
    for tx in 0..array.n_tx() {
        for face in 0..scene.mesh().face_count() {
            records.extend(trace_unit(scene, array, material, config, budgets[face], tx, face));
        }
    }
    ChannelRecords::from_records(array.n_tx(), array.n_rx(), records)
        .expect("trace_unit emits in-range channels")
}
