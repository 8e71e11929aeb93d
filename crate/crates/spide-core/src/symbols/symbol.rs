//! Generator symbols and compensator exponents on the frequency lattice.
//!
//! All exponents here are *normalized*: the reference jump measure is
//! `nu_alpha(dy) = dy / (levy_normalization(alpha, d) |y|^{d+alpha})`, chosen
//! so a unit density yields exactly the fractional-derivative multiplier
//! `-|xi|^alpha`. One convention feeds every consumer (generator, noise
//! compensators, mixed norms, transport-defect integrals); mixing raw and
//! normalized measures would silently break the parabolic balance between
//! the drift and the sampled jumps.

use num_complex::Complex64;
use rayon::prelude::*;

use super::coeffs::{CoefficientSet, GeneratorVariant};
use super::density::JumpDensity;
use super::radial::{
    levy_normalization, radial_centering_moment, radial_exponent_closed_form, radial_levy_integral,
    radial_tail_mass, sphere_rule, Centering, RadialQuadrature, RayProfile,
};
use crate::error::{Error, Result};
use crate::grid::{Field, SpectralGrid};

/// Reference outer radius; jump cutoffs must stay well inside it.
pub const R_MAX_REFERENCE: f64 = 1e4;

/// Which evaluation route an exponent should take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Closed-form radial integral; requires a degree-zero homogeneous density.
    ClosedForm,
    /// Adaptive panel quadrature; works for any bounded measurable density.
    Quadrature,
    /// Closed form when legal, quadrature otherwise.
    Auto,
}

fn ray_profile<'a>(
    density: &'a JumpDensity,
    t: f64,
    w: [f64; 2],
) -> RayProfile<'a, impl Fn(f64) -> f64 + 'a> {
    RayProfile {
        eval: move |r: f64| density.eval_ray(t, w, r),
        breaks: density.radial_breaks(),
        constant_beyond: density.constant_beyond(),
    }
}

/// Normalized Lévy exponent
/// `(1/K) integral_{lo<|y|<hi} (e^{i(xi,y)} - 1 - i chi (xi,y)) rho(t,y) dy/|y|^{d+alpha}`.
pub fn levy_exponent(
    density: &JumpDensity,
    t: f64,
    xi: [f64; 2],
    alpha: f64,
    d: usize,
    centering: Centering,
    lo: f64,
    hi: f64,
    quad: &RadialQuadrature,
    route: Route,
) -> Result<Complex64> {
    if density.is_zero() {
        return Ok(Complex64::default());
    }
    let closed_legal = density.is_homogeneous()
        && lo == 0.0
        && hi.is_infinite()
        && centering == Centering::for_alpha(alpha);
    let use_closed = match route {
        Route::ClosedForm => {
            if !closed_legal {
                return Err(Error::Contract(
                    "closed-form exponent needs a homogeneous density, zero cutoff and the canonical centering".into(),
                ));
            }
            true
        }
        Route::Quadrature => false,
        Route::Auto => closed_legal,
    };
    let norm = levy_normalization(alpha, d);
    let mut acc = Complex64::default();
    for (w, weight) in sphere_rule(d, quad.angular_nodes) {
        let theta = xi[0] * w[0] + xi[1] * w[1];
        if theta == 0.0 {
            continue;
        }
        let ray = if use_closed {
            radial_exponent_closed_form(alpha, theta) * density.eval_ray(t, w, 1.0)
        } else {
            let profile = ray_profile(density, t, w);
            radial_levy_integral(&profile, theta, alpha, centering, lo, hi, quad)
        };
        acc += ray * weight;
    }
    Ok(acc / norm)
}

/// Closed-form symbol of the homogeneous-coefficient generator: the
/// degree-zero density route for `alpha` in `(0,2)`, the drift term at
/// `alpha = 1`, and `-delta |xi|^2 / 2` at `alpha = 2`.
///
/// At `alpha = 1` a density whose sphere odd moment does not cancel is
/// rejected: without that cancellation the operator is not well defined.
pub fn symbol_homogeneous(coeffs: &CoefficientSet, t: f64, xi: [f64; 2]) -> Result<Complex64> {
    let alpha = coeffs.alpha;
    if alpha == 2.0 {
        let q = xi[0] * xi[0] + xi[1] * xi[1];
        return Ok(Complex64::new(-0.5 * coeffs.ellipticity * q, 0.0));
    }
    if !coeffs.m0.is_homogeneous() {
        return Err(Error::Contract("closed-form symbol needs a homogeneous base density".into()));
    }
    if alpha == 1.0 {
        let rule = sphere_rule(coeffs.dim, coeffs.quadrature.angular_nodes);
        let odd: f64 = rule
            .iter()
            .map(|(w, wt)| wt * coeffs.m0.eval_ray(t, *w, 1.0) * w[0])
            .sum::<f64>()
            .abs()
            .max(
                rule.iter()
                    .map(|(w, wt)| wt * coeffs.m0.eval_ray(t, *w, 1.0) * w[1])
                    .sum::<f64>()
                    .abs(),
            );
        if odd > 1e-9 * coeffs.bound.max(1.0) {
            return Err(Error::Contract(format!(
                "order-one symbol needs the sphere odd moment to cancel; residual {odd:.3e}"
            )));
        }
    }
    let mut psi = levy_exponent(
        &coeffs.m0,
        t,
        xi,
        alpha,
        coeffs.dim,
        Centering::for_alpha(alpha),
        0.0,
        f64::INFINITY,
        &coeffs.quadrature,
        Route::ClosedForm,
    )?;
    if alpha == 1.0 {
        let b = (coeffs.drift)(t);
        psi += Complex64::new(0.0, b[0] * xi[0] + b[1] * xi[1]);
    }
    Ok(psi)
}

/// Quadrature symbol of the full generator for `alpha` in `(0,2)`: adaptive
/// radial-angular integration of the jump part plus the drift term at
/// `alpha = 1`. Verifies convergence under panel doubling when
/// `check_refinement` is set.
pub fn symbol_quadrature(
    coeffs: &CoefficientSet,
    t: f64,
    xi: [f64; 2],
    check_refinement: bool,
) -> Result<Complex64> {
    let alpha = coeffs.alpha;
    if alpha == 2.0 {
        return generator_symbol(coeffs, GeneratorVariant::Standard, t, xi);
    }
    let centering = Centering::for_alpha(alpha);
    let mut psi = levy_exponent(
        &coeffs.m,
        t,
        xi,
        alpha,
        coeffs.dim,
        centering,
        0.0,
        f64::INFINITY,
        &coeffs.quadrature,
        Route::Quadrature,
    )?;
    if check_refinement {
        let fine = levy_exponent(
            &coeffs.m,
            t,
            xi,
            alpha,
            coeffs.dim,
            centering,
            0.0,
            f64::INFINITY,
            &coeffs.quadrature.refined(),
            Route::Quadrature,
        )?;
        let scale = psi.norm().max(fine.norm()).max(1e-12);
        if (psi - fine).norm() / scale > 1e-5 {
            return Err(Error::numeric(
                format!("symbol_quadrature at xi=({:.3},{:.3})", xi[0], xi[1]),
                format!("refinement check failed: coarse {psi}, fine {fine}"),
            ));
        }
        psi = fine;
    }
    if alpha == 1.0 {
        let b = (coeffs.drift)(t);
        psi += Complex64::new(0.0, b[0] * xi[0] + b[1] * xi[1]);
    }
    Ok(psi)
}

/// Symbol of the generator under a coefficient variant.
pub fn generator_symbol(
    coeffs: &CoefficientSet,
    variant: GeneratorVariant,
    t: f64,
    xi: [f64; 2],
) -> Result<Complex64> {
    let alpha = coeffs.alpha;
    if alpha == 2.0 {
        let b = (coeffs.diffusion)(t);
        let mut quad_form = 0.0;
        for i in 0..coeffs.dim {
            for j in 0..coeffs.dim {
                let mut bij = b[i][j];
                if matches!(variant, GeneratorVariant::Correlated) {
                    bij -= 0.5 * coeffs.sigma_product(t, i, j);
                }
                quad_form += bij * xi[i] * xi[j];
            }
        }
        return Ok(Complex64::new(-0.5 * quad_form, 0.0));
    }
    let centering = Centering::for_alpha(alpha);
    let mut psi = match variant {
        GeneratorVariant::Standard => levy_exponent(
            &coeffs.m,
            t,
            xi,
            alpha,
            coeffs.dim,
            centering,
            0.0,
            f64::INFINITY,
            &coeffs.quadrature,
            Route::Auto,
        )?,
        GeneratorVariant::Correlated => levy_exponent(
            &coeffs.m.minus(&coeffs.l),
            t,
            xi,
            alpha,
            coeffs.dim,
            centering,
            0.0,
            f64::INFINITY,
            &coeffs.quadrature,
            Route::Auto,
        )?,
        GeneratorVariant::CorrelatedTruncated(cut) => {
            let full = levy_exponent(
                &coeffs.m,
                t,
                xi,
                alpha,
                coeffs.dim,
                centering,
                0.0,
                f64::INFINITY,
                &coeffs.quadrature,
                Route::Auto,
            )?;
            let observed = levy_exponent(
                &coeffs.l,
                t,
                xi,
                alpha,
                coeffs.dim,
                centering,
                cut,
                f64::INFINITY,
                &coeffs.quadrature,
                Route::Quadrature,
            )?;
            full - observed
        }
    };
    if alpha == 1.0 {
        let b = (coeffs.drift)(t);
        psi += Complex64::new(0.0, b[0] * xi[0] + b[1] * xi[1]);
    }
    Ok(psi)
}

/// Compensated-measure exponent `integral_{|y|>cut} (e^{i(xi,y)} - 1) rho nu_alpha(dy)`.
/// This is the drift the solver subtracts while retained jumps act at events.
pub fn compensator_exponent(
    density: &JumpDensity,
    t: f64,
    xi: [f64; 2],
    alpha: f64,
    d: usize,
    cut: f64,
    quad: &RadialQuadrature,
) -> Result<Complex64> {
    if !(cut > 0.0) {
        return Err(Error::config("cut", "compensator cutoff must be positive"));
    }
    levy_exponent(density, t, xi, alpha, d, Centering::None, cut, f64::INFINITY, quad, Route::Quadrature)
}

/// Total normalized jump rate `integral_{|y|>cut} rho(t,y) nu_alpha(dy)`.
pub fn truncated_jump_rate(
    density: &JumpDensity,
    t: f64,
    alpha: f64,
    d: usize,
    cut: f64,
    quad: &RadialQuadrature,
) -> f64 {
    if density.is_zero() {
        return 0.0;
    }
    let norm = levy_normalization(alpha, d);
    let mut acc = 0.0;
    for (w, weight) in sphere_rule(d, quad.angular_nodes) {
        let profile = ray_profile(density, t, w);
        acc += weight * radial_tail_mass(&profile, alpha, cut, quad);
    }
    acc / norm
}

/// Centering-drift vector `integral_{|y|>cut} y chi(y) rho nu_alpha(dy)`.
pub fn centering_drift_vector(
    density: &JumpDensity,
    t: f64,
    alpha: f64,
    d: usize,
    cut: f64,
    quad: &RadialQuadrature,
) -> Result<[f64; 2]> {
    if density.is_zero() || Centering::for_alpha(alpha) == Centering::None {
        return Ok([0.0, 0.0]);
    }
    let norm = levy_normalization(alpha, d);
    let mut v = [0.0, 0.0];
    for (w, weight) in sphere_rule(d, quad.angular_nodes) {
        let profile = ray_profile(density, t, w);
        let moment =
            radial_centering_moment(&profile, alpha, Centering::for_alpha(alpha), cut, quad)?;
        v[0] += weight * moment * w[0];
        v[1] += weight * moment * w[1];
    }
    Ok([v[0] / norm, v[1] / norm])
}

/// The bookkeeping behind small-jump truncation at radius `cut`.
#[derive(Debug, Clone, Copy)]
pub struct TruncationSplit {
    /// Chi-centered exponent of the discarded small jumps.
    pub small_centered: Complex64,
    /// Exponent of the retained jumps, `integral_{|y|>cut}(e^{i(xi,y)}-1) rho nu`.
    pub retained: Complex64,
    /// Drift the solver adds so retained events stay compensated (`-retained`).
    pub compensator_drift: Complex64,
    /// `-i (xi, d)` with `d` the retained centering moment; closes the
    /// reassembly identity `small + retained + centering = full exponent`.
    pub centering_drift: Complex64,
}

/// Split the chi-centered exponent of `density` at jump radius `cut`.
pub fn truncation_split(
    density: &JumpDensity,
    t: f64,
    xi: [f64; 2],
    alpha: f64,
    d: usize,
    cut: f64,
    quad: &RadialQuadrature,
) -> Result<TruncationSplit> {
    if !(cut > 0.0) || cut >= R_MAX_REFERENCE {
        return Err(Error::config(
            "cut",
            format!("jump cutoff must lie in (0, {R_MAX_REFERENCE}), got {cut}"),
        ));
    }
    let centering = Centering::for_alpha(alpha);
    let small = levy_exponent(density, t, xi, alpha, d, centering, 0.0, cut, quad, Route::Quadrature)?;
    let retained = compensator_exponent(density, t, xi, alpha, d, cut, quad)?;
    let drift = centering_drift_vector(density, t, alpha, d, cut, quad)?;
    let centering_drift = Complex64::new(0.0, -(xi[0] * drift[0] + xi[1] * drift[1]));
    Ok(TruncationSplit {
        small_centered: small,
        retained,
        compensator_drift: -retained,
        centering_drift,
    })
}

/// Sample a per-frequency table over the grid in parallel (Nyquist rows zeroed).
pub fn spectral_table<F>(grid: &SpectralGrid, f: F) -> Result<Vec<Complex64>>
where
    F: Fn([f64; 2]) -> Result<Complex64> + Sync,
{
    (0..grid.len())
        .into_par_iter()
        .map(|i| {
            if grid.is_nyquist(i) {
                Ok(Complex64::default())
            } else {
                f(grid.xi(i))
            }
        })
        .collect()
}

/// Apply the generator to a field by spectral multiplication with its symbol.
pub fn apply_generator(
    field: &Field,
    t: f64,
    coeffs: &CoefficientSet,
    variant: GeneratorVariant,
) -> Result<Field> {
    if !coeffs.is_validated() {
        return Err(Error::Contract(
            "apply_generator requires coefficients that passed validation".into(),
        ));
    }
    let table = spectral_table(field.grid(), |xi| generator_symbol(coeffs, variant, t, xi))?;
    Ok(field.apply_table(&table))
}
