//! Input-function plumbing for the mild solver: the deterministic forcing,
//! the jump integrand `g`, the mark integrand `Phi`, and the Wiener
//! integrand `h`, each as a small trait so tests can feed either separable
//! closures or precomputed per-interval slices.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Field, SpectralGrid};
use crate::noise::MarkMeasure;
use crate::symbols::{JumpDensity, LevyNodeRule, RadialQuadrature, R_MAX_REFERENCE};

/// Deterministic space-time input sampled per mesh interval (left endpoint).
pub trait TimeInput: Send + Sync {
    fn slice(&self, interval: usize, t: f64, grid: &Arc<SpectralGrid>) -> Result<Field>;
}

/// `f(t, x) = amp(t) shape(x)`.
pub struct SeparableTimeInput {
    pub shape: Field,
    pub amp: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl TimeInput for SeparableTimeInput {
    fn slice(&self, _interval: usize, t: f64, _grid: &Arc<SpectralGrid>) -> Result<Field> {
        Ok(self.shape.scale(Complex64::new((self.amp)(t), 0.0)))
    }
}

/// Arbitrary precomputed slices, one per mesh interval.
pub struct PerIntervalInput {
    pub slices: Vec<Field>,
}

impl TimeInput for PerIntervalInput {
    fn slice(&self, interval: usize, _t: f64, _grid: &Arc<SpectralGrid>) -> Result<Field> {
        self.slices
            .get(interval)
            .cloned()
            .ok_or_else(|| Error::Shape(format!("no forcing slice for interval {interval}")))
    }
}

/// Jump integrand: what is added at a transport event and the drift that
/// compensates the retained jumps.
pub trait JumpForcing: Send + Sync {
    /// Spectral field added at an event with mark `y` (after the transport
    /// factor in the full equation form).
    fn event_add(&self, mesh_index: usize, t: f64, y: [f64; 2], grid: &Arc<SpectralGrid>) -> Result<Field>;
    /// Spectral compensator drift `integral_{|y|>eps} g(t, ., y) l nu(dy)`,
    /// sampled per mesh interval.
    fn compensator_slice(&self, interval: usize, t: f64, grid: &Arc<SpectralGrid>) -> Result<Field>;
}

/// Separable jump integrand `g(t, x, y) = sum_k shape_k(x) factor_k(t, y)`,
/// with its compensator against the observed weight precomputed as a node
/// rule.
pub struct SeparableJump {
    terms: Vec<(Field, Arc<dyn Fn(f64, [f64; 2]) -> f64 + Send + Sync>)>,
    rule: Option<LevyNodeRule>,
}

impl SeparableJump {
    /// `observed` is the weight density of the compensator (the measure that
    /// drives the transport noise); pass `None` when the compensator is
    /// handled elsewhere.
    pub fn new(
        terms: Vec<(Field, Arc<dyn Fn(f64, [f64; 2]) -> f64 + Send + Sync>)>,
        observed: Option<(&JumpDensity, f64, usize, f64, &RadialQuadrature)>,
    ) -> Self {
        let rule = observed.map(|(l, alpha, dim, eps, quad)| {
            LevyNodeRule::build(l, 0.0, alpha, dim, eps, R_MAX_REFERENCE, quad)
        });
        SeparableJump { terms, rule }
    }

    pub fn terms(
        &self,
    ) -> &[(Field, Arc<dyn Fn(f64, [f64; 2]) -> f64 + Send + Sync>)] {
        &self.terms
    }
}

impl JumpForcing for SeparableJump {
    fn event_add(&self, _k: usize, t: f64, y: [f64; 2], grid: &Arc<SpectralGrid>) -> Result<Field> {
        let mut out = Field::zeros(grid, crate::grid::Domain::Spectral);
        for (shape, factor) in &self.terms {
            out = out.add_scaled(&shape.to_spectral(), Complex64::new(factor(t, y), 0.0))?;
        }
        Ok(out)
    }

    fn compensator_slice(&self, _k: usize, t: f64, grid: &Arc<SpectralGrid>) -> Result<Field> {
        let mut out = Field::zeros(grid, crate::grid::Domain::Spectral);
        if let Some(rule) = &self.rule {
            for (shape, factor) in &self.terms {
                let c = rule.integrate(|y| factor(t, y));
                out = out.add_scaled(&shape.to_spectral(), Complex64::new(c, 0.0))?;
            }
        }
        Ok(out)
    }
}

/// Fully precomputed jump input: explicit event adds (keyed by mesh index)
/// and per-interval compensator slices. Used by the shift-reduction harness.
pub struct PrecomputedJump {
    pub event_adds: std::collections::HashMap<usize, Field>,
    pub compensators: Vec<Field>,
}

impl JumpForcing for PrecomputedJump {
    fn event_add(&self, mesh_index: usize, _t: f64, _y: [f64; 2], grid: &Arc<SpectralGrid>) -> Result<Field> {
        Ok(self
            .event_adds
            .get(&mesh_index)
            .cloned()
            .unwrap_or_else(|| Field::zeros(grid, crate::grid::Domain::Spectral)))
    }

    fn compensator_slice(&self, interval: usize, _t: f64, _grid: &Arc<SpectralGrid>) -> Result<Field> {
        self.compensators
            .get(interval)
            .cloned()
            .ok_or_else(|| Error::Shape(format!("no jump compensator for interval {interval}")))
    }
}

/// Mark integrand over the finite mark measure.
pub trait MarkForcing: Send + Sync {
    fn measure(&self) -> &MarkMeasure;
    fn event_add(&self, t: f64, atom: usize, grid: &Arc<SpectralGrid>) -> Result<Field>;
    /// `sum_atoms weight Phi(t, ., atom)`, the continuous compensator.
    fn compensator_slice(&self, t: f64, grid: &Arc<SpectralGrid>) -> Result<Field>;
}

/// `Phi(t, x, atom) = shape(x) factor(t, atom)`.
pub struct SeparableMark {
    pub measure: MarkMeasure,
    pub shape: Field,
    pub factor: Arc<dyn Fn(f64, usize) -> f64 + Send + Sync>,
}

impl MarkForcing for SeparableMark {
    fn measure(&self) -> &MarkMeasure {
        &self.measure
    }

    fn event_add(&self, t: f64, atom: usize, _grid: &Arc<SpectralGrid>) -> Result<Field> {
        if atom >= self.measure.weights.len() {
            return Err(Error::Eval {
                t,
                point: vec![atom as f64],
                msg: "mark outside the integrand's support".into(),
            });
        }
        Ok(self.shape.scale(Complex64::new((self.factor)(t, atom), 0.0)))
    }

    fn compensator_slice(&self, t: f64, _grid: &Arc<SpectralGrid>) -> Result<Field> {
        let c: f64 = self
            .measure
            .weights
            .iter()
            .enumerate()
            .map(|(a, w)| w * (self.factor)(t, a))
            .sum();
        Ok(self.shape.scale(Complex64::new(c, 0.0)))
    }
}

/// Wiener integrand: one spatial field per mode, time-scaled.
pub trait WienerForcing: Send + Sync {
    fn modes(&self) -> usize;
    fn mode_slice(&self, t: f64, mode: usize, grid: &Arc<SpectralGrid>) -> Result<Field>;
}

/// `h_m(t, x) = amp_m(t) shape(x)`.
pub struct SeparableWiener {
    pub shape: Field,
    pub amps: Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>,
}

impl WienerForcing for SeparableWiener {
    fn modes(&self) -> usize {
        (self.amps)(0.0).len()
    }

    fn mode_slice(&self, t: f64, mode: usize, _grid: &Arc<SpectralGrid>) -> Result<Field> {
        let amps = (self.amps)(t);
        let a = amps.get(mode).copied().unwrap_or(0.0);
        Ok(self.shape.scale(Complex64::new(a, 0.0)))
    }
}
