//! Named coefficient presets the experiment configs refer to.

use std::sync::Arc;

use super::coeffs::CoefficientSet;
use super::density::JumpDensity;
use crate::error::{Error, Result};

/// Resolve a preset by name. Unknown names are a configuration error so the
/// CLI can exit with a usage failure.
pub fn coefficient_preset(name: &str, alpha: f64) -> Result<CoefficientSet> {
    match name {
        "fractional-laplacian" => fractional_laplacian(alpha),
        "fractional-laplacian-observed" => fractional_laplacian_observed(alpha, 0.4),
        "kim-form" => kim_form(alpha),
        "half-sphere-degenerate" => half_sphere_degenerate(alpha),
        "heat" => heat(1.0),
        other => Err(Error::config("preset", format!("unknown coefficient preset `{other}`"))),
    }
}

/// Pure fractional Laplacian: unit jump density, no observation noise.
pub fn fractional_laplacian(alpha: f64) -> Result<CoefficientSet> {
    let mut c = CoefficientSet::new(
        alpha,
        1,
        JumpDensity::constant(1.0),
        JumpDensity::zero(),
        JumpDensity::constant(1.0),
    )?;
    c.ellipticity = 1.0;
    Ok(c)
}

/// Fractional Laplacian generator with a constant observed-jump density
/// `l = level`; superparabolic with margin `m0 = 1 - level`.
pub fn fractional_laplacian_observed(alpha: f64, level: f64) -> Result<CoefficientSet> {
    if !(0.0..1.0).contains(&level) {
        return Err(Error::config("level", format!("observation level must lie in [0,1), got {level}")));
    }
    let mut c = CoefficientSet::new(
        alpha,
        1,
        JumpDensity::constant(1.0),
        JumpDensity::constant(level),
        JumpDensity::constant(1.0 - level),
    )?;
    c.ellipticity = (1.0 - level) * 2.0 * 0.5;
    Ok(c)
}

/// Time-scaled fractional Laplacian `m(t, y) = a(t)` with `a` bounded away
/// from zero; the mark-noise configuration with no transport noise.
pub fn kim_form(alpha: f64) -> Result<CoefficientSet> {
    let a = |t: f64| 1.0 + 0.25 * (2.0 * std::f64::consts::PI * t).cos();
    let mut c = CoefficientSet::new(
        alpha,
        1,
        JumpDensity::time_scaled(a),
        JumpDensity::zero(),
        JumpDensity::constant(0.5),
    )?;
    c.ellipticity = 0.5;
    Ok(c)
}

/// Degree-zero density vanishing on half the sphere; admissible away from
/// order one (where the odd sphere moment must cancel).
pub fn half_sphere_degenerate(alpha: f64) -> Result<CoefficientSet> {
    if (alpha - 1.0).abs() < 1e-9 {
        return Err(Error::config(
            "alpha",
            "half-sphere density violates the order-one odd-moment cancellation",
        ));
    }
    let ang = |w: [f64; 2]| if w[0] > 0.0 { 1.5 } else { 0.0 };
    let mut c = CoefficientSet::new(
        alpha,
        1,
        JumpDensity::angular(ang),
        JumpDensity::zero(),
        JumpDensity::angular(ang),
    )?;
    c.ellipticity = 1.0;
    Ok(c)
}

/// Order-two heat preset: `B = delta I`, no gradient noise.
pub fn heat(delta: f64) -> Result<CoefficientSet> {
    let mut c = CoefficientSet::new(
        2.0,
        1,
        JumpDensity::zero(),
        JumpDensity::zero(),
        JumpDensity::zero(),
    )?;
    c.diffusion = Arc::new(move |_| [[delta, 0.0], [0.0, delta]]);
    c.ellipticity = delta;
    Ok(c)
}
