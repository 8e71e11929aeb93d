//! Equation coefficients and their admissibility validation.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use super::density::JumpDensity;
use super::radial::{sphere_rule, RadialQuadrature};
use crate::error::{Error, Result};

pub type DriftFn = Arc<dyn Fn(f64) -> [f64; 2] + Send + Sync>;
pub type DiffusionFn = Arc<dyn Fn(f64) -> [[f64; 2]; 2] + Send + Sync>;
/// Per Wiener mode, the gradient-coupling vector `sigma_m(t)` in `R^d`.
pub type SigmaFn = Arc<dyn Fn(f64) -> Vec<[f64; 2]> + Send + Sync>;

/// Which operator a symbol request refers to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorVariant {
    /// The equation's own generator (density `m`; matrix `B` at order 2).
    Standard,
    /// Noise-corrected generator: density `m - l`, matrix `B - sigma sigma^T / 2`.
    Correlated,
    /// `m`-generator minus the chi-centered observed exponent restricted to
    /// jumps above the cutoff; the generator of the shift-reduced problem at
    /// finite jump truncation.
    CorrelatedTruncated(f64),
}

/// All equation coefficients plus the discretization-relevant constants.
///
/// Immutable after construction; `validate` flips an interior flag that the
/// solver and generator check.
pub struct CoefficientSet {
    pub alpha: f64,
    pub dim: usize,
    /// Generator jump density `m(t, y)`.
    pub m: JumpDensity,
    /// Observation jump density `l(t, y)` (drives the transport noise).
    pub l: JumpDensity,
    /// Lower-bound density `m0(t, y)`, homogeneous of degree zero.
    pub m0: JumpDensity,
    /// Drift `b(t)`, active at `alpha = 1`.
    pub drift: DriftFn,
    /// Diffusion matrix `B(t)`, active at `alpha = 2`.
    pub diffusion: DiffusionFn,
    /// Wiener gradient couplings, active at `alpha = 2`.
    pub sigma: SigmaFn,
    /// Default damping for experiments.
    pub lambda: f64,
    /// Uniform bound `K` on every coefficient.
    pub bound: f64,
    /// Ellipticity constant `delta`.
    pub ellipticity: f64,
    /// Time horizon `T`.
    pub horizon: f64,
    /// Wiener-space truncation (number of scalar modes).
    pub modes: usize,
    pub quadrature: RadialQuadrature,
    validated: AtomicBool,
}

impl std::fmt::Debug for CoefficientSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CoefficientSet")
            .field("alpha", &self.alpha)
            .field("dim", &self.dim)
            .field("lambda", &self.lambda)
            .field("bound", &self.bound)
            .field("ellipticity", &self.ellipticity)
            .field("horizon", &self.horizon)
            .field("validated", &self.is_validated())
            .finish()
    }
}

impl CoefficientSet {
    /// Bare constructor with zero drift, zero diffusion and no Wiener coupling.
    pub fn new(alpha: f64, dim: usize, m: JumpDensity, l: JumpDensity, m0: JumpDensity) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::config("alpha", format!("order must lie in (0, 2], got {alpha}")));
        }
        if dim != 1 && dim != 2 {
            return Err(Error::config("d", format!("dimension must be 1 or 2, got {dim}")));
        }
        Ok(CoefficientSet {
            alpha,
            dim,
            m,
            l,
            m0,
            drift: Arc::new(|_| [0.0, 0.0]),
            diffusion: Arc::new(|_| [[0.0, 0.0], [0.0, 0.0]]),
            sigma: Arc::new(|_| Vec::new()),
            lambda: 0.0,
            bound: 2.0,
            ellipticity: 0.5,
            horizon: 1.0,
            modes: 16,
            quadrature: RadialQuadrature::default(),
            validated: AtomicBool::new(false),
        })
    }

    pub fn is_validated(&self) -> bool {
        self.validated.load(Ordering::Relaxed)
    }

    /// `sigma^i(t) . sigma^j(t)`, the Wiener-space inner product of the
    /// gradient couplings.
    pub fn sigma_product(&self, t: f64, i: usize, j: usize) -> f64 {
        (self.sigma)(t).iter().map(|s| s[i] * s[j]).sum()
    }

    fn time_samples(&self) -> Vec<f64> {
        let n = 17;
        (0..n).map(|k| self.horizon * k as f64 / (n - 1) as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clause {
    DensityBound,
    Homogeneity,
    OddMomentCancellation,
    SphereEllipticity,
    CoefficientBound,
    DriftCancellation,
    Superparabolicity,
}

#[derive(Debug, Clone)]
pub struct Violation {
    pub clause: Clause,
    pub t: f64,
    pub location: Vec<f64>,
    pub value: f64,
}

/// Outcome of an assumption check; `passed` iff no violations.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, clause: Clause, t: f64, location: &[f64], value: f64) {
        self.violations.push(Violation { clause, t, location: location.to_vec(), value });
    }
}

fn finite_or_eval_error(v: f64, t: f64, point: &[f64]) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Eval { t, point: point.to_vec(), msg: format!("evaluator returned {v}") })
    }
}

/// Check the base-density conditions: bound and degree-zero homogeneity,
/// the sphere odd-moment cancellation at order one, and the spectral
/// lower bound (ellipticity) of the sphere integral.
pub fn validate_base_density(
    m0: &JumpDensity,
    alpha: f64,
    delta: f64,
    bound: f64,
    horizon: f64,
    dim: usize,
    quad: &RadialQuadrature,
) -> Result<ValidationReport> {
    let mut report = ValidationReport::default();
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::config("alpha", format!("base density is defined for alpha in (0,2), got {alpha}")));
    }
    let rule = sphere_rule(dim, quad.angular_nodes);
    let times: Vec<f64> = (0..9).map(|k| horizon * k as f64 / 8.0).collect();
    let tol = 1e-9 * bound.max(1.0);

    for &t in &times {
        // (i) bound and homogeneity.
        for (w, _) in &rule {
            for &r in &[0.5f64, 1.0, 2.0] {
                let y = [r * w[0], r * w[1]];
                let v = finite_or_eval_error(m0.eval(t, y), t, &y)?;
                if !(0.0..=bound + 1e-12).contains(&v) {
                    report.record(Clause::DensityBound, t, &y, v);
                }
            }
            let base = m0.eval_ray(t, *w, 1.0);
            for &c in &[0.5f64, 2.0] {
                let v = m0.eval_ray(t, *w, c);
                if (v - base).abs() > tol {
                    report.record(Clause::Homogeneity, t, &[w[0] * c, w[1] * c], v - base);
                }
            }
        }
        // (ii) odd-moment cancellation at order one.
        if (alpha - 1.0).abs() < 1e-12 {
            let mut odd = [0.0f64; 2];
            for (w, weight) in &rule {
                let v = m0.eval_ray(t, *w, 1.0);
                odd[0] += weight * v * w[0];
                odd[1] += weight * v * w[1];
            }
            let worst = odd[0].abs().max(odd[1].abs());
            if worst > tol {
                report.record(Clause::OddMomentCancellation, t, &[], worst);
            }
        }
        // (iii) sphere integral bounded below by delta, uniformly in the
        // unit direction.
        let directions: Vec<[f64; 2]> = match dim {
            1 => vec![[1.0, 0.0], [-1.0, 0.0]],
            _ => (0..quad.angular_nodes)
                .map(|i| {
                    let phi = i as f64 * 2.0 * std::f64::consts::PI / quad.angular_nodes as f64;
                    [phi.cos(), phi.sin()]
                })
                .collect(),
        };
        for xi in directions {
            let mut s = 0.0;
            for (w, weight) in &rule {
                let dot = (w[0] * xi[0] + w[1] * xi[1]).abs();
                s += weight * dot.powf(alpha) * m0.eval_ray(t, *w, 1.0);
            }
            if s < delta * (1.0 - 1e-12) {
                report.record(Clause::SphereEllipticity, t, &xi, s);
            }
        }
    }
    Ok(report)
}

/// Check the full coefficient assumptions: the uniform bound, the order-one
/// annulus drift cancellation, and superparabolicity (`m - l >= m0` below
/// order 2, `B - sigma sigma^T / 2 >= delta I` at order 2). A passing report
/// marks the set usable by the generator and solver.
pub fn validate_coefficients(coeffs: &CoefficientSet) -> Result<ValidationReport> {
    let mut report = ValidationReport::default();
    let rule = sphere_rule(coeffs.dim, coeffs.quadrature.angular_nodes);
    let radii = [0.3f64, 1.0, 3.0];
    let k = coeffs.bound;

    for &t in &coeffs.time_samples() {
        // Uniform bound on the jump densities.
        for (w, _) in &rule {
            for &r in &radii {
                let y = [r * w[0], r * w[1]];
                for (name, density) in [("m", &coeffs.m), ("l", &coeffs.l)] {
                    let v = finite_or_eval_error(density.eval(t, y), t, &y)?;
                    let _ = name;
                    if !(0.0..=k + 1e-12).contains(&v) {
                        report.record(Clause::CoefficientBound, t, &y, v);
                    }
                }
            }
        }
        // Bound on drift, diffusion and Wiener couplings.
        let b = (coeffs.drift)(t);
        for i in 0..coeffs.dim {
            if b[i].abs() > k + 1e-12 {
                report.record(Clause::CoefficientBound, t, &[i as f64], b[i]);
            }
        }
        let bm = (coeffs.diffusion)(t);
        for i in 0..coeffs.dim {
            for j in 0..coeffs.dim {
                if bm[i][j].abs() > k + 1e-12 {
                    report.record(Clause::CoefficientBound, t, &[i as f64, j as f64], bm[i][j]);
                }
                if (bm[i][j] - bm[j][i]).abs() > 1e-12 {
                    report.record(Clause::CoefficientBound, t, &[i as f64, j as f64], bm[i][j] - bm[j][i]);
                }
            }
        }
        for i in 0..coeffs.dim {
            let norm: f64 = (coeffs.sigma)(t).iter().map(|s| s[i] * s[i]).sum::<f64>().sqrt();
            if norm > k + 1e-12 {
                report.record(Clause::CoefficientBound, t, &[i as f64], norm);
            }
        }

        if coeffs.alpha < 2.0 {
            // Order-one annulus drift cancellation for m.
            if (coeffs.alpha - 1.0).abs() < 1e-12 && !coeffs.m.is_zero() {
                for &(r0, r1) in &[(0.1f64, 1.0f64), (0.5, 2.0), (1.0, 10.0)] {
                    let mut v = [0.0f64; 2];
                    let panels = 64;
                    for p in 0..panels {
                        let a = r0 * (r1 / r0).powf(p as f64 / panels as f64);
                        let b2 = r0 * (r1 / r0).powf((p + 1) as f64 / panels as f64);
                        let mid = (a * b2).sqrt();
                        for (w, weight) in &rule {
                            let rho = coeffs.m.eval_ray(t, *w, mid);
                            v[0] += weight * rho * w[0] * (b2 - a) / mid;
                            v[1] += weight * rho * w[1] * (b2 - a) / mid;
                        }
                    }
                    let worst = v[0].abs().max(v[1].abs());
                    if worst > 1e-8 * k.max(1.0) {
                        report.record(Clause::DriftCancellation, t, &[r0, r1], worst);
                    }
                }
            }
            // Superparabolicity below order two.
            for (w, _) in &rule {
                for &r in &radii {
                    let y = [r * w[0], r * w[1]];
                    let margin = coeffs.m.eval(t, y) - coeffs.l.eval(t, y) - coeffs.m0.eval(t, y);
                    if margin < -1e-10 {
                        report.record(Clause::Superparabolicity, t, &y, margin);
                    }
                }
            }
        } else {
            // Superparabolicity at order two via the smallest eigenvalue.
            let mut a = [[0.0f64; 2]; 2];
            for i in 0..coeffs.dim {
                for j in 0..coeffs.dim {
                    a[i][j] = bm[i][j] - 0.5 * coeffs.sigma_product(t, i, j);
                }
            }
            let eig_min = if coeffs.dim == 1 {
                a[0][0]
            } else {
                let tr = a[0][0] + a[1][1];
                let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
                0.5 * (tr - (tr * tr - 4.0 * det).max(0.0).sqrt())
            };
            if eig_min < coeffs.ellipticity - 1e-10 {
                report.record(Clause::Superparabolicity, t, &[], eig_min);
            }
        }
    }

    // The base density itself must be admissible below order two.
    if coeffs.alpha < 2.0 {
        let base = validate_base_density(
            &coeffs.m0,
            coeffs.alpha,
            coeffs.ellipticity,
            coeffs.bound,
            coeffs.horizon,
            coeffs.dim,
            &coeffs.quadrature,
        )?;
        report.violations.extend(base.violations);
    }

    if report.passed() {
        coeffs.validated.store(true, Ordering::Relaxed);
    }
    Ok(report)
}
