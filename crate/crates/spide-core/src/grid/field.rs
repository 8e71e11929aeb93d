use std::sync::Arc;

use num_complex::Complex64;

use super::SpectralGrid;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Physical,
    Spectral,
}

/// One scalar lattice function (a space slice of `u`, `u0`, `f`, `h`, ...),
/// stored complex with a domain tag. Values are immutable by convention:
/// operations return new fields.
#[derive(Debug, Clone)]
pub struct Field {
    grid: Arc<SpectralGrid>,
    domain: Domain,
    data: Vec<Complex64>,
}

impl Field {
    pub fn zeros(grid: &Arc<SpectralGrid>, domain: Domain) -> Field {
        Field { grid: grid.clone(), domain, data: vec![Complex64::default(); grid.len()] }
    }

    pub fn from_values(grid: &Arc<SpectralGrid>, domain: Domain, data: Vec<Complex64>) -> Result<Field> {
        if data.len() != grid.len() {
            return Err(Error::Shape(format!(
                "field has {} values, grid has {} nodes",
                data.len(),
                grid.len()
            )));
        }
        Ok(Field { grid: grid.clone(), domain, data })
    }

    /// Sample a physical-space function on the lattice.
    pub fn from_fn(grid: &Arc<SpectralGrid>, f: impl Fn([f64; 2]) -> f64) -> Field {
        let data = (0..grid.len()).map(|i| Complex64::new(f(grid.x(i)), 0.0)).collect();
        Field { grid: grid.clone(), domain: Domain::Physical, data }
    }

    /// Build a spectral field directly from a multiplier-style closure
    /// (Nyquist rows zeroed).
    pub fn from_spectral_fn(grid: &Arc<SpectralGrid>, f: impl Fn([f64; 2]) -> Complex64) -> Field {
        let data = (0..grid.len())
            .map(|i| if grid.is_nyquist(i) { Complex64::default() } else { f(grid.xi(i)) })
            .collect();
        Field { grid: grid.clone(), domain: Domain::Spectral, data }
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn values(&self) -> &[Complex64] {
        &self.data
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn to_spectral(&self) -> Field {
        match self.domain {
            Domain::Spectral => self.clone(),
            Domain::Physical => {
                let mut data = self.data.clone();
                self.grid.forward_raw(&mut data);
                Field { grid: self.grid.clone(), domain: Domain::Spectral, data }
            }
        }
    }

    pub fn to_physical(&self) -> Field {
        match self.domain {
            Domain::Physical => self.clone(),
            Domain::Spectral => {
                let mut data = self.data.clone();
                self.grid.inverse_raw(&mut data);
                Field { grid: self.grid.clone(), domain: Domain::Physical, data }
            }
        }
    }

    /// Apply a spectral multiplier; the unmatched Nyquist rows are zeroed.
    /// Physical input is transformed first and the result stays spectral.
    pub fn apply_multiplier(&self, m: impl Fn([f64; 2]) -> Complex64) -> Field {
        let mut out = self.to_spectral();
        for (k, v) in out.data.iter_mut().enumerate() {
            if out.grid.is_nyquist(k) {
                *v = Complex64::default();
            } else {
                *v *= m(out.grid.xi(k));
            }
        }
        out
    }

    /// Multiply by a precomputed per-index spectral table (Nyquist rows zeroed).
    pub fn apply_table(&self, table: &[Complex64]) -> Field {
        debug_assert_eq!(table.len(), self.grid.len());
        let mut out = self.to_spectral();
        for (k, v) in out.data.iter_mut().enumerate() {
            if out.grid.is_nyquist(k) {
                *v = Complex64::default();
            } else {
                *v *= table[k];
            }
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Field {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v *= c;
        }
        out
    }

    /// `self + c * other`; both fields are aligned to `self`'s domain.
    pub fn add_scaled(&self, other: &Field, c: Complex64) -> Result<Field> {
        if self.grid.as_ref() != other.grid.as_ref() {
            return Err(Error::Shape("fields live on different grids".into()));
        }
        let other = match self.domain {
            Domain::Spectral => other.to_spectral(),
            Domain::Physical => other.to_physical(),
        };
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(other.data.iter()) {
            *v += c * w;
        }
        Ok(out)
    }

    /// Real part of the physical values.
    pub fn real_physical(&self) -> Vec<f64> {
        self.to_physical().data.iter().map(|v| v.re).collect()
    }

    /// Largest imaginary magnitude of the physical values; a realness check.
    pub fn max_imag(&self) -> f64 {
        self.to_physical().data.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    /// Lattice `L_p` norm of the physical magnitude (`h^d`-weighted sum).
    pub fn lp_norm(&self, p: f64) -> f64 {
        let hd = self.grid.spacing().powi(self.grid.dim() as i32);
        let phys = self.to_physical();
        if p == 2.0 {
            (hd * phys.data.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
        } else {
            (hd * phys.data.iter().map(|v| v.norm().powf(p)).sum::<f64>()).powf(1.0 / p)
        }
    }

    /// Max-norm of the difference of physical values.
    pub fn linf_distance(&self, other: &Field) -> f64 {
        let a = self.to_physical();
        let b = other.to_physical();
        a.data
            .iter()
            .zip(b.data.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// Physical-space mass `h^d * sum(values)`.
    pub fn mass(&self) -> Complex64 {
        let hd = self.grid.spacing().powi(self.grid.dim() as i32);
        self.to_physical().data.iter().sum::<Complex64>() * hd
    }

    /// Largest spectral asymmetry `|conj(F(-xi)) - F(xi)|` over represented
    /// frequencies; zero (to rounding) for real physical fields.
    pub fn conjugate_asymmetry(&self) -> f64 {
        let s = self.to_spectral();
        let n = self.grid.nodes_per_axis();
        let mirror = |k: usize| (n - k) % n;
        let mut worst: f64 = 0.0;
        for idx in 0..self.grid.len() {
            if self.grid.is_nyquist(idx) {
                continue;
            }
            let midx = match self.grid.dim() {
                1 => mirror(idx),
                _ => mirror(idx / n) * n + mirror(idx % n),
            };
            if self.grid.is_nyquist(midx) {
                continue;
            }
            worst = worst.max((s.data[midx].conj() - s.data[idx]).norm());
        }
        worst
    }
}
