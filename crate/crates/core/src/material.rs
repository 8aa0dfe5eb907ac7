//! Alpha-blended diffuse/specular surface scattering.
//!
//! The model mixes two limits with a single parameter `alpha`: mirror
//! reflection at `alpha = 0` and Lambertian (cosine-weighted) scattering
//! at `alpha = 1`. In between, the outgoing direction is the renormalized
//! convex blend of one diffuse draw and the mirror direction.

use rand::Rng;

use crate::geom::Vec3;

/// Blends shorter than this carry no usable direction and are resampled.
const BLEND_MIN_NORM: f64 = 1e-6;

/// Bound on diffuse resampling before falling back to pure specular.
const MAX_DIFFUSE_RETRIES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MaterialError {
    AlphaOutOfRange(f64),
}

impl core::fmt::Display for MaterialError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let MaterialError::AlphaOutOfRange(alpha) = self;
        write!(f, "alpha must lie in [0, 1], got {alpha}")
    }
}

impl core::error::Error for MaterialError {}

/// Mixing weight between specular (`0`) and diffuse (`1`) scattering.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaterialParams {
    alpha: f64,
}

impl MaterialParams {
    pub const SPECULAR: MaterialParams = MaterialParams { alpha: 0.0 };
    pub const DIFFUSE: MaterialParams = MaterialParams { alpha: 1.0 };

    pub fn new(alpha: f64) -> Result<MaterialParams, MaterialError> {
        if alpha.is_finite() && (0.0..=1.0).contains(&alpha) {
            Ok(MaterialParams { alpha })
        } else {
            Err(MaterialError::AlphaOutOfRange(alpha))
        }
    }

    pub fn alpha(self) -> f64 {
        self.alpha
    }
}

/// Uniform direction on the unit sphere, by rejection from the unit ball.
pub fn sample_unit_sphere<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    loop {
        let v = Vec3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n2 = v.norm_sq();
        if n2 > 1e-12 && n2 <= 1.0 {
            return v / crate::fmath::sqrt(n2);
        }
    }
}

/// Cosine-weighted direction about `normal`: the normalized sum of the
/// normal and a uniform point on the unit sphere. The antipodal draw
/// (sum shorter than [`BLEND_MIN_NORM`]) is rejected and redrawn.
pub fn sample_diffuse<R: Rng + ?Sized>(normal: Vec3, rng: &mut R) -> Vec3 {
    loop {
        let sum = normal + sample_unit_sphere(rng);
        let n = sum.norm();
        if n >= BLEND_MIN_NORM {
            return sum / n;
        }
    }
}

/// Mirror reflection: `incident - 2 (incident . normal) normal`.
///
/// `incident` points into the surface (`dot(incident, normal) < 0`).
pub fn reflect_specular(incident: Vec3, normal: Vec3) -> Vec3 {
    incident - 2.0 * incident.dot(normal) * normal
}

/// Renormalized convex blend `alpha * diffuse + (1 - alpha) * specular`.
///
/// Returns `None` when the blend is too short to define a direction,
/// which can only happen when the two inputs nearly cancel.
pub fn blend_directions(diffuse: Vec3, specular: Vec3, alpha: f64) -> Option<Vec3> {
    let blend = diffuse * alpha + specular * (1.0 - alpha);
    let n = blend.norm();
    if n < BLEND_MIN_NORM {
        None
    } else {
        Some(blend / n)
    }
}

/// Draw one outgoing direction for a surface interaction.
///
/// At `alpha = 0` this is the mirror direction, deterministically, and the
/// generator is not consumed. At `alpha = 1` it is exactly a diffuse draw.
/// Blends that degenerate or fall below the surface are redrawn a bounded
/// number of times, then the mirror direction is used.
pub fn scatter<R: Rng + ?Sized>(
    incident: Vec3,
    normal: Vec3,
    params: MaterialParams,
    rng: &mut R,
) -> Vec3 {
    let specular = reflect_specular(incident, normal);
    if params.alpha() == 0.0 {
        return specular;
    }
    for _ in 0..MAX_DIFFUSE_RETRIES {
        let diffuse = sample_diffuse(normal, rng);
        if let Some(out) = blend_directions(diffuse, specular, params.alpha()) {
            if out.dot(normal) > 0.0 {
                return out;
            }
        }
    }
    specular
}
