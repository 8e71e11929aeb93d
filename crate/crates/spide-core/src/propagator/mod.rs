//! Fundamental solution, solution operators, the event-driven mild solver
//! and its weak-form residual check.
//!
//! Coefficients are constant in space, so each Fourier mode evolves by a
//! scalar jump ODE/SDE that is integrated exactly between mesh points
//! (exponential integrator with the phi-function Duhamel update); events act
//! as instantaneous spectral updates. The only discretization errors are the
//! piecewise-constant time sampling of coefficients and inputs and the
//! small-jump truncation, both swept in the acceptance suite.

mod inputs;
mod mild;
mod stochconv;
mod transport;

pub use inputs::{
    PerIntervalInput, PrecomputedJump, SeparableJump, SeparableMark, SeparableTimeInput,
    SeparableWiener, JumpForcing, MarkForcing, TimeInput, WienerForcing,
};
pub use mild::{solve_mild, weak_residual, EquationForm, MildInputs, SolutionBundle, SolverOptions};
pub use stochconv::{stoch_conv_poisson, stoch_conv_wiener, wiener_isometry_second_moment};
pub use transport::{transport_defect, transport_defect_limit, transported_slices, TransportDefectSweep};

use num_complex::Complex64;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{Field, SpectralGrid};
use crate::symbols::{generator_symbol, spectral_table, CoefficientSet, GeneratorVariant};

/// `(e^w - 1) / w`, stable near zero.
pub(crate) fn phi1(w: Complex64) -> Complex64 {
    if w.norm() < 1e-6 {
        1.0 + w / 2.0 * (1.0 + w / 3.0 * (1.0 + w / 4.0))
    } else {
        (w.exp() - 1.0) / w
    }
}

/// `(e^w - 1 - w) / w^2`, stable near zero.
pub(crate) fn phi2(w: Complex64) -> Complex64 {
    if w.norm() < 1e-4 {
        0.5 + w / 6.0 * (1.0 + w / 4.0 * (1.0 + w / 5.0))
    } else {
        (w.exp() - 1.0 - w) / (w * w)
    }
}

/// Spectral table of the fundamental solution between two times:
/// `exp( integral_s^t psi0(r, xi) dr - lambda (t - s) )` per lattice frequency.
pub struct Kernel {
    grid: Arc<SpectralGrid>,
    pub s: f64,
    pub t: f64,
    pub lambda: f64,
    table: Vec<Complex64>,
}

impl Kernel {
    pub fn table(&self) -> &[Complex64] {
        &self.table
    }

    /// Convolve: spectral multiply of the field by the kernel table.
    pub fn apply(&self, field: &Field) -> Field {
        field.apply_table(&self.table)
    }

    /// The kernel itself as a field (inverse transform of the table).
    pub fn physical(&self) -> Field {
        Field::from_values(&self.grid, crate::grid::Domain::Spectral, self.table.clone())
            .expect("table built on this grid")
            .to_physical()
    }

    /// Physical mass `h^d sum G`; equals the zero-frequency table entry.
    pub fn mass(&self) -> f64 {
        self.physical().mass().re
    }

    /// Smallest physical value (discretization dips slightly below zero).
    pub fn min_value(&self) -> f64 {
        self.physical().values().iter().map(|v| v.re).fold(f64::INFINITY, f64::min)
    }
}

/// Build the fundamental kernel from the homogeneous-coefficient symbol by
/// the midpoint rule in time (exact for piecewise-constant coefficients).
pub fn fundamental_kernel(
    grid: &Arc<SpectralGrid>,
    s: f64,
    t: f64,
    lambda: f64,
    coeffs: &CoefficientSet,
) -> Result<Kernel> {
    if !(s >= 0.0 && s < t && t <= coeffs.horizon + 1e-12) {
        return Err(Error::config("s,t", format!("need 0 <= s < t <= horizon, got ({s}, {t})")));
    }
    let panels = if coeffs.m0.is_time_constant() { 1 } else { 256 };
    let dt = (t - s) / panels as f64;
    let table = spectral_table(grid, |xi| {
        let mut acc = Complex64::default();
        for k in 0..panels {
            let mid = s + (k as f64 + 0.5) * dt;
            acc += crate::symbols::symbol_homogeneous(coeffs, mid, xi)? * dt;
        }
        Ok((acc - lambda * (t - s)).exp())
    })?;
    Ok(Kernel { grid: grid.clone(), s, t, lambda, table })
}

/// Semigroup action `u0 -> kernel(0, t) * u0`; identity at `t = 0`.
pub fn semigroup_apply(
    u0: &Field,
    t: f64,
    lambda: f64,
    coeffs: &CoefficientSet,
) -> Result<Field> {
    if t == 0.0 {
        return Ok(u0.clone());
    }
    Ok(fundamental_kernel(u0.grid(), 0.0, t, lambda, coeffs)?.apply(u0))
}

/// Damped Duhamel integral of a forcing sampled per mesh interval: the exact
/// per-mode update `u <- e^{z dt} u + dt phi1(z dt) f` with
/// `z = psi0 - lambda`. Returns one slice per mesh point (zero at the start).
pub fn duhamel(
    forcing: &dyn TimeInput,
    times: &[f64],
    lambda: f64,
    coeffs: &CoefficientSet,
    grid: &Arc<SpectralGrid>,
) -> Result<Vec<Field>> {
    if times.len() < 2 {
        return Err(Error::Shape("duhamel needs at least one interval".into()));
    }
    let time_const = coeffs.m0.is_time_constant();
    let mut z_row: Option<Vec<Complex64>> = None;
    let mut u = Field::zeros(grid, crate::grid::Domain::Spectral);
    let mut out = vec![u.clone()];
    for k in 0..times.len() - 1 {
        let (t, dt) = (times[k], times[k + 1] - times[k]);
        if z_row.is_none() || !time_const {
            z_row = Some(spectral_table(grid, |xi| {
                Ok(crate::symbols::symbol_homogeneous(coeffs, t, xi)? - lambda)
            })?);
        }
        let row = z_row.as_ref().unwrap();
        let f_slice = forcing.slice(k, t, grid)?.to_spectral();
        let mut next = u.clone();
        for (i, v) in next.values_mut().iter_mut().enumerate() {
            let w = row[i] * dt;
            *v = *v * w.exp() + dt * phi1(w) * f_slice.values()[i];
        }
        u = next;
        out.push(u.clone());
    }
    Ok(out)
}

/// Symbol row for the solver: generator symbol under `variant` at time `t`.
pub(crate) fn generator_row(
    grid: &Arc<SpectralGrid>,
    coeffs: &CoefficientSet,
    variant: GeneratorVariant,
    t: f64,
) -> Result<Vec<Complex64>> {
    spectral_table(grid, |xi| generator_symbol(coeffs, variant, t, xi))
}
