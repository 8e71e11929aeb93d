use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use super::{Field, SpectralGrid};

/// Dyadic (Littlewood-Paley style) filter bank on a grid.
///
/// The generating profile is built from the standard `exp(-1/(s(1-s)))` bump:
/// `rho(r)` equals 1 for `r <= 1`, 0 for `r >= 2` and a smoothstep in between,
/// and block `j >= 1` carries the multiplier `rho(2^{-j}|xi|) - rho(2^{-j+1}|xi|)`,
/// supported in `2^{j-1} <= |xi| <= 2^{j+1}`. Block 0 is the complement
/// `rho(|xi|)`, so the bank telescopes to exactly 1 at every represented
/// frequency the top level covers.
pub struct LpFilterBank {
    grid: Arc<SpectralGrid>,
    /// `bank[j][idx]`: sampled real multiplier of block `j`, in `[0, 1]`.
    bank: Vec<Vec<f64>>,
}

const SMOOTHSTEP_PANELS: usize = 4096;

/// Normalized integral of the compact bump, tabulated once with Simpson's rule.
fn smoothstep_table() -> &'static Vec<f64> {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let bump = |s: f64| {
            if s <= 0.0 || s >= 1.0 {
                0.0
            } else {
                (-1.0 / (s * (1.0 - s))).exp()
            }
        };
        let n = SMOOTHSTEP_PANELS;
        let dx = 1.0 / n as f64;
        let mut acc = vec![0.0; n + 1];
        for i in 0..n {
            let a = i as f64 * dx;
            let simpson = dx / 6.0 * (bump(a) + 4.0 * bump(a + 0.5 * dx) + bump(a + dx));
            acc[i + 1] = acc[i] + simpson;
        }
        let total = acc[n];
        for v in acc.iter_mut() {
            *v /= total;
        }
        acc
    })
}

fn smoothstep(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let table = smoothstep_table();
    let pos = t * SMOOTHSTEP_PANELS as f64;
    let i = (pos as usize).min(SMOOTHSTEP_PANELS - 1);
    let frac = pos - i as f64;
    table[i] + frac * (table[i + 1] - table[i])
}

/// `rho(r)`: 1 on `[0,1]`, smooth descent on `(1,2)`, 0 beyond.
fn rho(r: f64) -> f64 {
    if r <= 1.0 {
        1.0
    } else if r >= 2.0 {
        0.0
    } else {
        smoothstep(2.0 - r)
    }
}

impl LpFilterBank {
    /// Build the bank for a grid; `j_max` is the smallest level whose dilated
    /// profile already covers the whole represented lattice.
    pub fn new(grid: &Arc<SpectralGrid>) -> LpFilterBank {
        let xi_max = grid.max_axis_freq() * (grid.dim() as f64).sqrt();
        let j_max = xi_max.max(1.0).log2().ceil() as usize;
        let len = grid.len();
        let mut rho_prev: Vec<f64> = (0..len)
            .map(|i| if grid.is_nyquist(i) { 0.0 } else { rho(grid.xi_norm(i)) })
            .collect();
        let mut bank = vec![rho_prev.clone()];
        for j in 1..=j_max {
            let scale = (0.5f64).powi(j as i32);
            let mut block = vec![0.0; len];
            for i in 0..len {
                if grid.is_nyquist(i) {
                    continue;
                }
                let r = rho(scale * grid.xi_norm(i));
                block[i] = r - rho_prev[i];
                rho_prev[i] = r;
            }
            bank.push(block);
        }
        LpFilterBank { grid: grid.clone(), bank }
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    /// Largest dyadic level in the bank.
    pub fn j_max(&self) -> usize {
        self.bank.len() - 1
    }

    pub fn multiplier(&self, j: usize) -> &[f64] {
        &self.bank[j]
    }

    /// Apply block `j` to a field (spectral multiply).
    pub fn apply(&self, field: &Field, j: usize) -> Field {
        let mut out = field.to_spectral();
        for (k, v) in out.values_mut().iter_mut().enumerate() {
            *v *= self.bank[j][k];
        }
        out
    }

    /// Worst deviation of the bank sum from 1 over represented nonzero
    /// frequencies.
    pub fn partition_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.grid.len() {
            if self.grid.is_nyquist(i) || self.grid.xi_norm(i) == 0.0 {
                continue;
            }
            let sum: f64 = self.bank.iter().map(|b| b[i]).sum();
            worst = worst.max((sum - 1.0).abs());
        }
        worst
    }

    /// Spectral multiplier table of block `j` as complex values, for reuse in
    /// kernel compositions.
    pub fn table(&self, j: usize) -> Vec<Complex64> {
        self.bank[j].iter().map(|&v| Complex64::new(v, 0.0)).collect()
    }
}
