//! Mollification and adapted backward-window smoothing.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Field;

const BUMP_PANELS: usize = 512;

fn bump(r: f64) -> f64 {
    if r >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - r * r)).exp()
    }
}

fn bump_mass_1d() -> f64 {
    static MASS: OnceLock<f64> = OnceLock::new();
    *MASS.get_or_init(|| {
        let dx = 1.0 / BUMP_PANELS as f64;
        2.0 * (0..BUMP_PANELS)
            .map(|i| {
                let a = i as f64 * dx;
                dx / 6.0 * (bump(a) + 4.0 * bump(a + 0.5 * dx) + bump(a + dx))
            })
            .sum::<f64>()
    })
}

fn bump_mass_2d() -> f64 {
    static MASS: OnceLock<f64> = OnceLock::new();
    *MASS.get_or_init(|| {
        let dr = 1.0 / BUMP_PANELS as f64;
        2.0 * std::f64::consts::PI
            * (0..BUMP_PANELS)
                .map(|i| {
                    let a = i as f64 * dr;
                    let f = |r: f64| bump(r) * r;
                    dr / 6.0 * (f(a) + 4.0 * f(a + 0.5 * dr) + f(a + dr))
                })
                .sum::<f64>()
    })
}

/// Fourier transform of the normalized unit bump at frequency magnitude `s`.
fn bump_transform(d: usize, s: f64) -> f64 {
    let dx = 1.0 / BUMP_PANELS as f64;
    match d {
        1 => {
            // Even kernel: 2 integral_0^1 cos(s x) bump(x) dx, normalized.
            let f = |x: f64| (s * x).cos() * bump(x);
            let mut acc = 0.0;
            for i in 0..BUMP_PANELS {
                let a = i as f64 * dx;
                acc += dx / 6.0 * (f(a) + 4.0 * f(a + 0.5 * dx) + f(a + dx));
            }
            2.0 * acc / bump_mass_1d()
        }
        _ => {
            // Radial kernel: 2 pi integral_0^1 J_0(s r) bump(r) r dr, normalized.
            let f = |r: f64| libm::j0(s * r) * bump(r) * r;
            let mut acc = 0.0;
            for i in 0..BUMP_PANELS {
                let a = i as f64 * dx;
                acc += dx / 6.0 * (f(a) + 4.0 * f(a + 0.5 * dx) + f(a + dx));
            }
            2.0 * std::f64::consts::PI * acc / bump_mass_2d()
        }
    }
}

/// Convolve with the rescaled unit-mass bump of radius `eps` (spectral
/// multiplication by its transform). Preserves constants and contracts
/// every translation-invariant norm.
pub fn mollify(field: &Field, eps: f64) -> Result<Field> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::config("eps", format!("mollifier radius must lie in (0,1), got {eps}")));
    }
    let d = field.grid().dim();
    // One transform value per distinct |xi| via a small cache.
    let mut cache: std::collections::HashMap<u64, f64> = std::collections::HashMap::new();
    let mut out = field.to_spectral();
    let grid = field.grid().clone();
    for (k, v) in out.values_mut().iter_mut().enumerate() {
        if grid.is_nyquist(k) {
            *v = Complex64::default();
            continue;
        }
        let s = eps * grid.xi_norm(k);
        let key = s.to_bits();
        let m = *cache.entry(key).or_insert_with(|| bump_transform(d, s));
        *v *= m;
    }
    Ok(out)
}

/// Backward-window smoothing of a space-time input:
/// `g_n(t) = n integral_{(t - 1/n) or 0}^{t} (g(s) * bump_{1/n}) ds`
/// by the trapezoid rule on the mesh (linear interpolation at the window's
/// left edge). Uses only past slices, so the output stays adapted.
pub fn steklov_smooth(slices: &[Field], times: &[f64], n: usize) -> Result<Vec<Field>> {
    if slices.is_empty() || slices.len() != times.len() {
        return Err(Error::Shape("steklov_smooth needs matching slices and times".into()));
    }
    if n < 1 {
        return Err(Error::config("n", "smoothing rate must be >= 1"));
    }
    let window = 1.0 / n as f64;
    let dt_max = times
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(0.0f64, f64::max);
    if dt_max > window + 1e-12 {
        return Err(Error::config(
            "n",
            format!("time mesh (max dt {dt_max:.3e}) does not resolve the window 1/{n}"),
        ));
    }
    let mollified: Vec<Field> =
        slices.iter().map(|f| mollify(f, window.min(0.999))).collect::<Result<_>>()?;

    let zero = Field::zeros(slices[0].grid(), crate::grid::Domain::Spectral);
    let mut out = Vec::with_capacity(slices.len());
    for (k, &t) in times.iter().enumerate() {
        let t_lo = (t - window).max(times[0]);
        if t - t_lo <= 0.0 {
            out.push(zero.clone());
            continue;
        }
        // Trapezoid over mesh points in (t_lo, t], plus the interpolated
        // left-edge value.
        let mut acc = Field::zeros(slices[0].grid(), crate::grid::Domain::Spectral);
        let mut lo_idx = k;
        while lo_idx > 0 && times[lo_idx - 1] >= t_lo - 1e-15 {
            lo_idx -= 1;
        }
        // Interior full trapezoids.
        for j in lo_idx..k {
            let dt = times[j + 1] - times[j];
            acc = acc.add_scaled(&mollified[j], Complex64::new(0.5 * dt, 0.0))?;
            acc = acc.add_scaled(&mollified[j + 1], Complex64::new(0.5 * dt, 0.0))?;
        }
        // Partial left cell if the window edge falls inside (times[lo_idx-1], times[lo_idx]).
        if times[lo_idx] > t_lo + 1e-15 && lo_idx > 0 {
            let a = times[lo_idx - 1];
            let b = times[lo_idx];
            let frac = (times[lo_idx] - t_lo) / (b - a);
            let edge = mollified[lo_idx - 1]
                .scale(Complex64::new(1.0 - (t_lo - a) / (b - a), 0.0))
                .add_scaled(&mollified[lo_idx], Complex64::new((t_lo - a) / (b - a), 0.0))?;
            let dt = frac * (b - a);
            acc = acc.add_scaled(&edge, Complex64::new(0.5 * dt, 0.0))?;
            acc = acc.add_scaled(&mollified[lo_idx], Complex64::new(0.5 * dt, 0.0))?;
        }
        out.push(acc.scale(Complex64::new(n as f64, 0.0)));
    }
    Ok(out)
}
