//! MIMO array geometry, the stepped-frequency waveform grid, and the
//! reconstruction voxel grid.

use alloc::vec::Vec;


use crate::geom::Vec3;

/// Propagation speed, fixed at the vacuum speed of light (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Two antenna positions closer than this (meters) count as coincident.
pub const MIN_ANTENNA_SEPARATION: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub enum RfConfigError {
    /// Two antennas (indices into the concatenated Tx then Rx list) are
    /// closer than [`MIN_ANTENNA_SEPARATION`].
    CoincidentAntennas { first: usize, second: usize },
    /// The frequency band is empty or inverted.
    EmptyBand { f_start: f64, f_stop: f64 },
    /// Fewer than two frequency steps.
    TooFewSteps { n_f: usize },
    /// Frequencies must be positive and the step strictly positive.
    InvalidFrequency,
    /// Grid extent must be strictly positive along every axis.
    EmptyGridAxis { axis: usize },
    /// Voxel edge lengths must be strictly positive and finite.
    InvalidVoxelEdge { axis: usize },
}

impl core::fmt::Display for RfConfigError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            RfConfigError::CoincidentAntennas { first, second } => {
                write!(f, "antennas {first} and {second} are closer than {MIN_ANTENNA_SEPARATION} m")
            }
            RfConfigError::EmptyBand { f_start, f_stop } => {
                write!(f, "frequency band is empty: start {f_start} Hz, stop {f_stop} Hz")
            }
            RfConfigError::TooFewSteps { n_f } => {
                write!(f, "waveform needs at least 2 frequency steps, got {n_f}")
            }
            RfConfigError::InvalidFrequency => write!(f, "frequencies must be positive"),
            RfConfigError::EmptyGridAxis { axis } => {
                write!(f, "grid extent along axis {axis} is not positive")
            }
            RfConfigError::InvalidVoxelEdge { axis } => {
                write!(f, "voxel edge along axis {axis} is not positive")
            }
        }
    }
}

impl core::error::Error for RfConfigError {}

/// Positions of all Tx and Rx antennas, meters.
#[derive(Clone, Debug, PartialEq)]
pub struct ArrayGeometry {
    tx: Vec<Vec3>,
    rx: Vec<Vec3>,
}

impl ArrayGeometry {
    /// Validate explicit antenna lists: every pair of positions (across
    /// both lists) must be separated by at least [`MIN_ANTENNA_SEPARATION`].
    pub fn from_positions(tx: Vec<Vec3>, rx: Vec<Vec3>) -> Result<ArrayGeometry, RfConfigError> {
        let all: Vec<Vec3> = tx.iter().chain(rx.iter()).copied().collect();
        for i in 0..all.len() {
            for j in (i + 1)..all.len() {
                if all[i].distance(all[j]) <= MIN_ANTENNA_SEPARATION {
                    return Err(RfConfigError::CoincidentAntennas { first: i, second: j });
                }
            }
        }
        Ok(ArrayGeometry { tx, rx })
    }

    /// Square frame layout: Tx elements along the two horizontal edges
    /// (y = +/- side/2), Rx elements along the two vertical edges. The Rx
    /// edges are pushed outward by half a spacing (x = +/-(side + spacing)/2)
    /// so no Tx and Rx element can coincide at a corner; the layout stays
    /// point-symmetric through the array center. The frame side length is
    /// `(elements_per_side - 1) * spacing`.
    pub fn square(elements_per_side: usize, spacing: f64, plane_z: f64) -> ArrayGeometry {
        assert!(elements_per_side >= 2, "need at least 2 elements per side");
        assert!(spacing > 0.0 && spacing.is_finite(), "spacing must be positive");
        let n = elements_per_side;
        let half = (n - 1) as f64 * spacing / 2.0;
        let grid = |i: usize| (i as f64 - (n - 1) as f64 / 2.0) * spacing;
        let mut tx = Vec::with_capacity(2 * n);
        for &y in &[half, -half] {
            for i in 0..n {
                tx.push(Vec3::new(grid(i), y, plane_z));
            }
        }
        let mut rx = Vec::with_capacity(2 * n);
        for &x in &[-(half + spacing / 2.0), half + spacing / 2.0] {
            for i in 0..n {
                rx.push(Vec3::new(x, grid(i), plane_z));
            }
        }
        ArrayGeometry { tx, rx }
    }

    pub fn tx_positions(&self) -> &[Vec3] {
        &self.tx
    }

    pub fn rx_positions(&self) -> &[Vec3] {
        &self.rx
    }

    pub fn n_tx(&self) -> usize {
        self.tx.len()
    }

    pub fn n_rx(&self) -> usize {
        self.rx.len()
    }

    /// Coordinate span over all antennas, per axis.
    pub fn spans(&self) -> Vec3 {
        let mut min = Vec3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
        let mut max = Vec3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in self.tx.iter().chain(self.rx.iter()) {
            min = min.min_components(*p);
            max = max.max_components(*p);
        }
        if self.tx.is_empty() && self.rx.is_empty() {
            return Vec3::ZERO;
        }
        max - min
    }

    /// Aperture extent: the maximum coordinate span over all antennas, meters.
    pub fn aperture(&self) -> f64 {
        self.spans().max_component()
    }
}

/// Stepped-frequency waveform: `n_f` carriers starting at `f0` with step
/// `delta_f`. The carrier of step `n` is `f0 + n * delta_f`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Waveform {
    f0: f64,
    delta_f: f64,
    n_f: usize,
}

impl Waveform {
    pub fn new(f0: f64, delta_f: f64, n_f: usize) -> Result<Waveform, RfConfigError> {
        if n_f < 2 {
            return Err(RfConfigError::TooFewSteps { n_f });
        }
        if !(f0 > 0.0 && delta_f > 0.0 && f0.is_finite() && delta_f.is_finite()) {
            return Err(RfConfigError::InvalidFrequency);
        }
        Ok(Waveform { f0, delta_f, n_f })
    }

    /// Build from a band `[f_start, f_stop]` swept in `n_f` steps, so that
    /// step 0 sits at `f_start` and step `n_f - 1` at `f_stop`.
    pub fn from_band(f_start: f64, f_stop: f64, n_f: usize) -> Result<Waveform, RfConfigError> {
        if !(f_stop > f_start) {
            return Err(RfConfigError::EmptyBand { f_start, f_stop });
        }
        if n_f < 2 {
            return Err(RfConfigError::TooFewSteps { n_f });
        }
        Waveform::new(f_start, (f_stop - f_start) / (n_f - 1) as f64, n_f)
    }

    pub fn f0(&self) -> f64 {
        self.f0
    }

    pub fn delta_f(&self) -> f64 {
        self.delta_f
    }

    pub fn n_f(&self) -> usize {
        self.n_f
    }

    /// Carrier frequency of step `n`.
    pub fn frequency(&self, n: usize) -> f64 {
        self.f0 + n as f64 * self.delta_f
    }

    /// Swept bandwidth `delta_f * (n_f - 1)`.
    pub fn bandwidth(&self) -> f64 {
        self.delta_f * (self.n_f - 1) as f64
    }

    pub fn center_frequency(&self) -> f64 {
        self.f0 + self.bandwidth() / 2.0
    }

    /// Unambiguous range `c / (2 * delta_f)` of the frequency comb.
    pub fn unambiguous_range(&self) -> f64 {
        SPEED_OF_LIGHT / (2.0 * self.delta_f)
    }
}

/// Resolution figures implied by a waveform and an imaging geometry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivedMetrics {
    /// Swept bandwidth, Hz.
    pub bandwidth: f64,
    /// Range resolution `c / (2B)`, meters.
    pub range_resolution: f64,
    /// Predicted lateral resolution `lambda_c * standoff / (2 * aperture)`,
    /// meters, with `lambda_c` at the center frequency.
    pub lateral_resolution: f64,
}

pub fn derived_metrics(waveform: &Waveform, standoff: f64, aperture: f64) -> DerivedMetrics {
    let bandwidth = waveform.bandwidth();
    let lambda_c = SPEED_OF_LIGHT / waveform.center_frequency();
    DerivedMetrics {
        bandwidth,
        range_resolution: SPEED_OF_LIGHT / (2.0 * bandwidth),
        lateral_resolution: lambda_c * standoff / (2.0 * aperture),
    }
}

/// Axis-aligned reconstruction lattice.
///
/// Sample positions (voxel centers) lie at `min + i * edge` per axis with
/// both corners included, so an axis spanning `s` at pitch `e` carries
/// `round(s / e) + 1` voxels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VoxelGrid {
    min: Vec3,
    max: Vec3,
    edge: [f64; 3],
    counts: [usize; 3],
}

impl VoxelGrid {
    pub fn new(min: Vec3, max: Vec3, edge: [f64; 3]) -> Result<VoxelGrid, RfConfigError> {
        let span = max - min;
        let mut counts = [0usize; 3];
        for axis in 0..3 {
            if !(span.axis(axis) > 0.0) {
                return Err(RfConfigError::EmptyGridAxis { axis });
            }
            if !(edge[axis] > 0.0 && edge[axis].is_finite()) {
                return Err(RfConfigError::InvalidVoxelEdge { axis });
            }
            counts[axis] = crate::fmath::round(span.axis(axis) / edge[axis]) as usize + 1;
        }
        Ok(VoxelGrid { min, max, edge, counts })
    }

    pub fn min(&self) -> Vec3 {
        self.min
    }

    pub fn max(&self) -> Vec3 {
        self.max
    }

    pub fn edge(&self) -> [f64; 3] {
        self.edge
    }

    /// Voxel counts per axis `[nx, ny, nz]`.
    pub fn counts(&self) -> [usize; 3] {
        self.counts
    }

    /// Total voxel count.
    pub fn len(&self) -> usize {
        self.counts[0] * self.counts[1] * self.counts[2]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x_coord(&self, i: usize) -> f64 {
        self.min.x + i as f64 * self.edge[0]
    }

    pub fn y_coord(&self, j: usize) -> f64 {
        self.min.y + j as f64 * self.edge[1]
    }

    pub fn z_coord(&self, k: usize) -> f64 {
        self.min.z + k as f64 * self.edge[2]
    }

    pub fn center(&self, i: usize, j: usize, k: usize) -> Vec3 {
        Vec3::new(self.x_coord(i), self.y_coord(j), self.z_coord(k))
    }

    /// Linear index with x fastest, then y, then z.
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.counts[1] + j) * self.counts[0] + i
    }

    /// Inverse of [`VoxelGrid::index`].
    pub fn coords_of(&self, index: usize) -> (usize, usize, usize) {
        let nx = self.counts[0];
        let ny = self.counts[1];
        (index % nx, (index / nx) % ny, index / (nx * ny))
    }
}
