//! Stepped-frequency baseband synthesis by coherent path summation.
//!
//! Every received path of round-trip length `d` contributes one phasor
//! `w(d) * exp(-j 2 pi f_n d / c)` per frequency step `n`; a channel's
//! sample is the sum over its records. Per-channel accumulation runs in
//! ascending path-length order so sums reproduce bit-for-bit.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::fmath;
use crate::rfconfig::{ArrayGeometry, Waveform, SPEED_OF_LIGHT};
use crate::rng::derive_stream;
use crate::tracer::{ChannelRecords, PathRecord};

/// Per-path amplitude weighting. Paths carry unit amplitude by default;
/// `InverseDistance` applies a `1/d` spherical-spreading weight.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Amplitude {
    #[default]
    Unit,
    InverseDistance,
}

impl Amplitude {
    pub fn weight(self, length_d: f64) -> f64 {
        match self {
            Amplitude::Unit => 1.0,
            Amplitude::InverseDistance => 1.0 / length_d,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasebandError {
    /// Record channel counts disagree with the array geometry.
    DimensionMismatch {
        records_tx: usize,
        records_rx: usize,
        array_tx: usize,
        array_rx: usize,
    },
    /// Sample buffer length disagrees with `n_tx * n_rx * n_f`.
    SampleCount { expected: usize, got: usize },
}

impl core::fmt::Display for BasebandError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            BasebandError::DimensionMismatch { records_tx, records_rx, array_tx, array_rx } => {
                write!(
                    f,
                    "records cover {records_tx}x{records_rx} channels but the array has {array_tx}x{array_rx}"
                )
            }
            BasebandError::SampleCount { expected, got } => {
                write!(f, "expected {expected} cube samples, got {got}")
            }
        }
    }
}

impl core::error::Error for BasebandError {}

/// Complex baseband samples indexed (tx, rx, n) with n fastest, plus the
/// waveform and array geometry they were synthesized for.
#[derive(Clone, Debug, PartialEq)]
pub struct BasebandCube {
    waveform: Waveform,
    array: ArrayGeometry,
    samples: Vec<Complex64>,
}

impl BasebandCube {
    pub fn zeros(waveform: Waveform, array: ArrayGeometry) -> BasebandCube {
        let len = array.n_tx() * array.n_rx() * waveform.n_f();
        BasebandCube { waveform, array, samples: vec![Complex64::new(0.0, 0.0); len] }
    }

    /// Wrap an existing sample buffer (tx slowest, n fastest).
    pub fn from_samples(
        waveform: Waveform,
        array: ArrayGeometry,
        samples: Vec<Complex64>,
    ) -> Result<BasebandCube, BasebandError> {
        let expected = array.n_tx() * array.n_rx() * waveform.n_f();
        if samples.len() != expected {
            return Err(BasebandError::SampleCount { expected, got: samples.len() });
        }
        Ok(BasebandCube { waveform, array, samples })
    }

    pub fn waveform(&self) -> &Waveform {
        &self.waveform
    }

    pub fn array(&self) -> &ArrayGeometry {
        &self.array
    }

    pub fn n_tx(&self) -> usize {
        self.array.n_tx()
    }

    pub fn n_rx(&self) -> usize {
        self.array.n_rx()
    }

    pub fn n_f(&self) -> usize {
        self.waveform.n_f()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn channel(&self, tx: usize, rx: usize) -> &[Complex64] {
        let n_f = self.n_f();
        let start = (tx * self.n_rx() + rx) * n_f;
        &self.samples[start..start + n_f]
    }

    fn channel_mut(&mut self, tx: usize, rx: usize) -> &mut [Complex64] {
        let n_f = self.n_f();
        let n_rx = self.n_rx();
        let start = (tx * n_rx + rx) * n_f;
        &mut self.samples[start..start + n_f]
    }

    pub fn sample(&self, tx: usize, rx: usize, n: usize) -> Complex64 {
        self.channel(tx, rx)[n]
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|s| s.norm()).fold(0.0, f64::max)
    }
}

/// Synthesize one channel from its records.
///
/// Sample `n` is the sum over records of
/// `weight(d) * exp(-j 2 pi (f0 + n delta_f) d / c)`, accumulated in the
/// order the records appear (callers pass channels in ascending-length
/// order). An empty record list yields the all-zero vector.
pub fn synthesize_channel(
    records: &[PathRecord],
    waveform: &Waveform,
    amplitude: Amplitude,
) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); waveform.n_f()];
    for record in records {
        let weight = amplitude.weight(record.length_d);
        let delay = record.length_d / SPEED_OF_LIGHT;
        for (n, sample) in out.iter_mut().enumerate() {
            let phase = -core::f64::consts::TAU * waveform.frequency(n) * delay;
            let (sin, cos) = fmath::sin_cos(phase);
            *sample += Complex64::new(weight * cos, weight * sin);
        }
    }
    out
}

/// Synthesize the full cube; channels without records stay zero.
pub fn synthesize_cube(
    records: &ChannelRecords,
    waveform: &Waveform,
    array: &ArrayGeometry,
    amplitude: Amplitude,
) -> Result<BasebandCube, BasebandError> {
    if records.n_tx() != array.n_tx() || records.n_rx() != array.n_rx() {
        return Err(BasebandError::DimensionMismatch {
            records_tx: records.n_tx(),
            records_rx: records.n_rx(),
            array_tx: array.n_tx(),
            array_rx: array.n_rx(),
        });
    }
    let mut cube = BasebandCube::zeros(*waveform, array.clone());
    for tx in 0..array.n_tx() {
        for rx in 0..array.n_rx() {
            let channel = records.channel(tx, rx);
            if channel.is_empty() {
                continue;
            }
            let synthesized = synthesize_channel(channel, waveform, amplitude);
            cube.channel_mut(tx, rx).copy_from_slice(&synthesized);
        }
    }
    Ok(cube)
}

/// Add complex white Gaussian noise of the given total power (variance
/// per complex sample) on top of the cube. Each channel draws from its
/// own derived stream, so the result is independent of scheduling.
pub fn add_awgn(cube: &mut BasebandCube, power: f64, seed: u64) {
    if power <= 0.0 {
        return;
    }
    let sigma = fmath::sqrt(power / 2.0);
    let (n_tx, n_rx, n_f) = (cube.n_tx(), cube.n_rx(), cube.n_f());
    for tx in 0..n_tx {
        for rx in 0..n_rx {
            let mut stream = derive_stream(seed, &[0x6e6f_6973_6500, tx as u64, rx as u64]);
            let channel = cube.channel_mut(tx, rx);
            for sample in channel.iter_mut().take(n_f) {
                let (g0, g1) = gaussian_pair(&mut stream);
                *sample += Complex64::new(sigma * g0, sigma * g1);
            }
        }
    }
}

/// Box-Muller transform; returns two independent standard normals.
fn gaussian_pair<R: rand::Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    let u1: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
    let u2: f64 = rng.gen();
    let radius = fmath::sqrt(-2.0 * fmath::ln(u1));
    let angle = core::f64::consts::TAU * u2;
    let (sin, cos) = fmath::sin_cos(angle);
    (radius * cos, radius * sin)
}
