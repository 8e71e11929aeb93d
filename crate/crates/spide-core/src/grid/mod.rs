//! Periodic lattice, discrete Fourier transform pair and the elementary
//! Fourier multipliers every other module consumes.
//!
//! The box is `[-L, L)^d` with `N` nodes per axis (`N` a power of two), so the
//! frequency lattice is `xi_k = pi k / L`, `k = -N/2 .. N/2 - 1`. The forward
//! transform approximates the continuum integral transform on the torus
//! (`Fu(xi) = integral e^{-i xi x} u dx`, rectangle rule, spectrally accurate
//! for smooth fields) and the inverse carries the `(2L)^{-d}` series weight,
//! so multiplier calculus matches the whole-space conventions exactly on
//! represented frequencies.
//!
//! The unmatched `-N/2` mode has no conjugate partner on the lattice; every
//! multiplier zeroes it so that real fields stay real.

mod field;
mod lp;
mod snapshot;

pub use field::{Domain, Field};
pub use lp::LpFilterBank;
pub use snapshot::{read_snapshot, write_snapshot};

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Periodic spectral grid in dimension 1 or 2.
pub struct SpectralGrid {
    d: usize,
    n: usize,
    l: f64,
    h: f64,
    /// Per-axis frequencies in FFT storage order (`0..N/2-1, -N/2..-1` scaled by `pi/L`).
    freq: Vec<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("d", &self.d)
            .field("n", &self.n)
            .field("l", &self.l)
            .finish()
    }
}

impl SpectralGrid {
    pub fn new(d: usize, n: usize, l: f64) -> Result<Arc<Self>> {
        if d != 1 && d != 2 {
            return Err(Error::config("d", format!("dimension must be 1 or 2, got {d}")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::config("N", format!("nodes per axis must be a power of two >= 8, got {n}")));
        }
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::config("L", format!("half-width must be positive, got {l}")));
        }
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let freq = (0..n)
            .map(|k| {
                let ks = if k < n / 2 { k as i64 } else { k as i64 - n as i64 };
                std::f64::consts::PI * ks as f64 / l
            })
            .collect();
        Ok(Arc::new(SpectralGrid { d, n, l, h: 2.0 * l / n as f64, freq, fwd, inv }))
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn nodes_per_axis(&self) -> usize {
        self.n
    }

    pub fn half_width(&self) -> f64 {
        self.l
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    /// Total number of lattice nodes (`N^d`).
    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest represented frequency magnitude along one axis.
    pub fn max_axis_freq(&self) -> f64 {
        std::f64::consts::PI * (self.n as f64 / 2.0 - 1.0) / self.l
    }

    /// Physical coordinate of a flat index.
    pub fn x(&self, idx: usize) -> [f64; 2] {
        match self.d {
            1 => [-self.l + self.h * idx as f64, 0.0],
            _ => {
                let (i, j) = (idx / self.n, idx % self.n);
                [-self.l + self.h * i as f64, -self.l + self.h * j as f64]
            }
        }
    }

    /// Frequency vector of a flat spectral index.
    pub fn xi(&self, idx: usize) -> [f64; 2] {
        match self.d {
            1 => [self.freq[idx], 0.0],
            _ => [self.freq[idx / self.n], self.freq[idx % self.n]],
        }
    }

    pub fn xi_norm(&self, idx: usize) -> f64 {
        let v = self.xi(idx);
        (v[0] * v[0] + v[1] * v[1]).sqrt()
    }

    /// True on the unmatched `-N/2` rows that every multiplier zeroes.
    pub fn is_nyquist(&self, idx: usize) -> bool {
        let ny = self.n / 2;
        match self.d {
            1 => idx == ny,
            _ => idx / self.n == ny || idx % self.n == ny,
        }
    }

    /// Signed parity factor `(-1)^{k_1 + .. + k_d}` translating FFT order to
    /// the `[-L, L)` node origin.
    fn parity(&self, idx: usize) -> f64 {
        let s = match self.d {
            1 => idx,
            _ => idx / self.n + idx % self.n,
        };
        if s % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    fn fft_axis(&self, data: &mut [Complex64], inverse: bool) {
        let plan = if inverse { &self.inv } else { &self.fwd };
        match self.d {
            1 => plan.process(data),
            _ => {
                // Rows, then columns via a transpose round trip.
                for row in data.chunks_exact_mut(self.n) {
                    plan.process(row);
                }
                let mut col = vec![Complex64::default(); self.n];
                for j in 0..self.n {
                    for i in 0..self.n {
                        col[i] = data[i * self.n + j];
                    }
                    plan.process(&mut col);
                    for i in 0..self.n {
                        data[i * self.n + j] = col[i];
                    }
                }
            }
        }
    }

    /// Forward transform of raw storage (physical, node origin `-L`) into the
    /// continuum-scaled spectrum.
    pub(crate) fn forward_raw(&self, data: &mut [Complex64]) {
        self.fft_axis(data, false);
        let scale = self.h.powi(self.d as i32);
        for (k, v) in data.iter_mut().enumerate() {
            *v *= scale * self.parity(k);
        }
    }

    /// Inverse of [`forward_raw`].
    pub(crate) fn inverse_raw(&self, data: &mut [Complex64]) {
        let scale = 1.0 / (2.0 * self.l).powi(self.d as i32);
        for (k, v) in data.iter_mut().enumerate() {
            *v *= scale * self.parity(k);
        }
        self.fft_axis(data, true);
    }
}

impl PartialEq for SpectralGrid {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.n == other.n && self.l == other.l
    }
}

/// Bessel potential `(I - Laplace)^{beta/2}`: spectral weight `(1 + |xi|^2)^{beta/2}`.
pub fn bessel_potential(field: &Field, beta: f64) -> Result<Field> {
    if !beta.is_finite() {
        return Err(Error::config("beta", format!("regularity order must be finite, got {beta}")));
    }
    Ok(field.apply_multiplier(|xi| {
        let q = 1.0 + xi[0] * xi[0] + xi[1] * xi[1];
        Complex64::new(q.powf(beta / 2.0), 0.0)
    }))
}

/// Fractional derivative of order `alpha` in `(0, 2]`: spectral weight `-|xi|^alpha`.
pub fn fractional_derivative(field: &Field, alpha: f64) -> Result<Field> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::config("alpha", format!("order must lie in (0, 2], got {alpha}")));
    }
    Ok(field.apply_multiplier(|xi| {
        let r = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
        Complex64::new(-r.powf(alpha), 0.0)
    }))
}

/// Exact periodic shift by an arbitrary displacement: spectral weight `e^{i (xi, y)}`.
pub fn shift_field(field: &Field, y: [f64; 2]) -> Field {
    field.apply_multiplier(|xi| Complex64::from_polar(1.0, xi[0] * y[0] + xi[1] * y[1]))
}
