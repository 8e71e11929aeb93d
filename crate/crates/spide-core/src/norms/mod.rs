//! Fractional function-space norms on lattice fields: Bessel-potential
//! (Sobolev), dyadic-block (Besov), the jump-weighted mixed families, and
//! their space-time and Monte Carlo wrappers.
//!
//! Lattice `L_p` means the `h^d`-weighted sum; time integrals are
//! left-endpoint sums, matching the solver's predictable convention. The
//! dyadic sum is truncated at the bank's top level — higher blocks vanish
//! identically on the lattice.

mod smoothing;

pub use smoothing::{mollify, steklov_smooth};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{bessel_potential, Field, LpFilterBank};
use crate::symbols::LevyNodeRule;

/// Norm family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormFamily {
    /// Bessel-potential (Sobolev) scale.
    Sobolev,
    /// Dyadic-block (Besov) scale with equal inner/outer exponent.
    Besov,
    /// Jump-weighted Sobolev: inner `L_r` against the observed Lévy weight.
    MixedSobolev,
    /// Jump-weighted Besov.
    MixedBesov,
}

/// Full specification of a norm evaluation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormSpec {
    pub family: NormFamily,
    pub beta: f64,
    pub p: f64,
    /// Inner-jump integrability for the mixed families.
    pub r: Option<f64>,
    /// Space-only or space-time evaluation.
    pub space_time: bool,
    /// Monte Carlo averaged over paths or a single deterministic value.
    pub monte_carlo: bool,
}

impl NormSpec {
    pub fn space(family: NormFamily, beta: f64, p: f64) -> NormSpec {
        NormSpec { family, beta, p, r: None, space_time: false, monte_carlo: false }
    }

    fn check(&self) -> Result<()> {
        if !(self.p >= 1.0) {
            return Err(Error::config("p", format!("integrability must be >= 1, got {}", self.p)));
        }
        if let Some(r) = self.r {
            if !(r >= 1.0) {
                return Err(Error::config("r", format!("inner integrability must be >= 1, got {r}")));
            }
        }
        if !self.beta.is_finite() {
            return Err(Error::config("beta", "smoothness order must be finite"));
        }
        Ok(())
    }
}

/// A computed norm with optional Monte Carlo standard error.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormValue {
    pub spec: NormSpec,
    pub value: f64,
    pub mc_stderr: Option<f64>,
}

/// Bessel-potential norm `|J^beta f|_{L_p}`.
pub fn sobolev_norm(field: &Field, beta: f64, p: f64) -> Result<NormValue> {
    let spec = NormSpec::space(NormFamily::Sobolev, beta, p);
    spec.check()?;
    let value = bessel_potential(field, beta)?.lp_norm(p);
    Ok(NormValue { spec, value, mc_stderr: None })
}

/// Dyadic-block norm `(sum_j 2^{j beta p} |block_j f|_p^p)^{1/p}`.
pub fn besov_norm(bank: &LpFilterBank, field: &Field, beta: f64, p: f64) -> Result<NormValue> {
    let spec = NormSpec::space(NormFamily::Besov, beta, p);
    spec.check()?;
    let mut acc = 0.0;
    for j in 0..=bank.j_max() {
        let block = bank.apply(field, j).lp_norm(p);
        acc += (2.0f64).powf(j as f64 * beta * p) * block.powf(p);
    }
    Ok(NormValue { spec, value: acc.powf(1.0 / p), mc_stderr: None })
}

/// Square-function form of the Bessel scale,
/// `( integral ( sum_j 2^{2 beta j} |block_j f|^2 )^{p/2} )^{1/p}`;
/// kept as an equivalence cross-check against [`sobolev_norm`].
pub fn equivalent_sobolev_norm(
    bank: &LpFilterBank,
    field: &Field,
    beta: f64,
    p: f64,
) -> Result<NormValue> {
    let spec = NormSpec::space(NormFamily::Sobolev, beta, p);
    spec.check()?;
    let grid = field.grid();
    let mut square = vec![0.0f64; grid.len()];
    for j in 0..=bank.j_max() {
        let block = bank.apply(field, j).to_physical();
        let w = (2.0f64).powf(2.0 * beta * j as f64);
        for (acc, v) in square.iter_mut().zip(block.values()) {
            *acc += w * v.norm_sqr();
        }
    }
    let hd = grid.spacing().powi(grid.dim() as i32);
    let value = (hd * square.iter().map(|s| s.powf(p / 2.0)).sum::<f64>()).powf(1.0 / p);
    Ok(NormValue { spec, value, mc_stderr: None })
}

/// Mixed jump norm of `g(t, x, y)` supplied as one field per node of the
/// observed-weight rule: the spatial smoothing acts per jump slice, then the
/// inner `L_r` against the Lévy weight, then lattice `L_p`.
pub fn mixed_jump_norm(
    bank: &LpFilterBank,
    slices: &[Field],
    rule: &LevyNodeRule,
    family: NormFamily,
    beta: f64,
    p: f64,
    r: f64,
) -> Result<NormValue> {
    let spec = NormSpec { family, beta, p, r: Some(r), space_time: false, monte_carlo: false };
    spec.check()?;
    if slices.len() != rule.len() {
        return Err(Error::Shape(format!(
            "{} jump slices for a {}-node rule",
            slices.len(),
            rule.len()
        )));
    }
    if slices.is_empty() {
        return Ok(NormValue { spec, value: 0.0, mc_stderr: None });
    }
    let grid = slices[0].grid().clone();
    let hd = grid.spacing().powi(grid.dim() as i32);

    // Pointwise-in-x inner r-integral of already-smoothed slices.
    let inner = |smoothed: &[Field]| -> Vec<f64> {
        let mut acc = vec![0.0f64; grid.len()];
        for (field, w) in smoothed.iter().zip(rule.weights.iter()) {
            let phys = field.to_physical();
            for (a, v) in acc.iter_mut().zip(phys.values()) {
                *a += w * v.norm().powf(r);
            }
        }
        acc.iter().map(|a| a.powf(1.0 / r)).collect()
    };

    let value = match family {
        NormFamily::MixedSobolev => {
            let smoothed: Vec<Field> =
                slices.iter().map(|f| bessel_potential(f, beta)).collect::<Result<_>>()?;
            let point = inner(&smoothed);
            (hd * point.iter().map(|v| v.powf(p)).sum::<f64>()).powf(1.0 / p)
        }
        NormFamily::MixedBesov => {
            let mut acc = 0.0;
            for j in 0..=bank.j_max() {
                let blocks: Vec<Field> = slices.iter().map(|f| bank.apply(f, j)).collect();
                let point = inner(&blocks);
                let lp = (hd * point.iter().map(|v| v.powf(p)).sum::<f64>()).powf(1.0 / p);
                acc += (2.0f64).powf(j as f64 * beta * p) * lp.powf(p);
            }
            acc.powf(1.0 / p)
        }
        _ => {
            return Err(Error::Contract("mixed_jump_norm needs a mixed family".into()));
        }
    };
    Ok(NormValue { spec, value, mc_stderr: None })
}

/// Left-endpoint space-time composition of per-slice norms over a mesh:
/// `( sum_k dt_k v_k^p )^{1/p}` with `times` the mesh breakpoints
/// (`times.len() == slice_norms.len() + 1`).
pub fn spacetime_norm(slice_norms: &[f64], times: &[f64], p: f64) -> Result<f64> {
    if slice_norms.is_empty() || times.len() != slice_norms.len() + 1 {
        return Err(Error::Shape(format!(
            "{} slice norms need {} mesh points, got {}",
            slice_norms.len(),
            slice_norms.len() + 1,
            times.len()
        )));
    }
    let mut acc = 0.0;
    for (k, v) in slice_norms.iter().enumerate() {
        acc += (times[k + 1] - times[k]) * v.powf(p);
    }
    Ok(acc.powf(1.0 / p))
}

/// Monte Carlo expectation of a norm: averages `v^p` over paths, takes the
/// p-th root and reports a delta-method standard error. Deterministic inputs
/// (equal samples) give stderr 0.
pub fn monte_carlo_norm(samples: &[f64], p: f64, spec: NormSpec) -> Result<NormValue> {
    if samples.is_empty() {
        return Err(Error::Shape("monte_carlo_norm needs at least one sample".into()));
    }
    let n = samples.len() as f64;
    let powers: Vec<f64> = samples.iter().map(|v| v.powf(p)).collect();
    let mean = powers.iter().sum::<f64>() / n;
    let var = if samples.len() > 1 {
        powers.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let stderr_mean = (var / n).sqrt();
    let value = mean.powf(1.0 / p);
    let stderr = if mean > 0.0 { stderr_mean / (p * mean.powf((p - 1.0) / p)) } else { 0.0 };
    Ok(NormValue { spec, value, mc_stderr: Some(stderr) })
}
