//! Seed-reproducible sampling of the driving noises: the stable jump measure
//! (thinned against its constant dominating density), the finite-mass Poisson
//! mark measure, and truncated cylindrical Wiener increments; plus
//! compensated-integral evaluation with testable second-moment identities.
//!
//! Sub-streams are keyed by `(seed, path id, source tag)` on a counter-based
//! generator, so adding one noise source never perturbs the draws of another,
//! and a `(seed, config)` pair maps to a bit-identical path.

use rand::distributions::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Poisson, StandardNormal};

use crate::error::{Error, Result};
use crate::symbols::{levy_normalization, JumpDensity, LevyNodeRule, RadialQuadrature};

/// One realized jump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableJump {
    pub time: f64,
    pub y: [f64; 2],
}

/// One realized Poisson mark (an atom index of the mark measure).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MarkJump {
    pub atom: usize,
}

/// Finite mark measure on an atom list.
#[derive(Debug, Clone)]
pub struct MarkMeasure {
    pub weights: Vec<f64>,
}

impl MarkMeasure {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|w| !(*w > 0.0)) || weights.iter().sum::<f64>() <= 0.0
        {
            return Err(Error::config("mark_measure", "mark measure needs positive finite mass"));
        }
        Ok(MarkMeasure { weights })
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// What happens at one mesh point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeshEvent {
    Stable([f64; 2]),
    Mark(usize),
}

/// Sampling configuration for one noise path.
#[derive(Debug, Clone)]
pub struct NoiseConfig {
    pub alpha: f64,
    pub dim: usize,
    pub horizon: f64,
    /// Uniform base steps; event times are inserted, never rounded.
    pub steps: usize,
    /// Wiener modes.
    pub modes: usize,
    /// Small-jump truncation radius.
    pub eps_cut: f64,
    /// Dominating constant for thinning the stable jumps.
    pub density_bound: f64,
}

impl NoiseConfig {
    pub fn new(alpha: f64, dim: usize, horizon: f64, steps: usize) -> Self {
        NoiseConfig {
            alpha,
            dim,
            horizon,
            steps,
            modes: 16,
            eps_cut: 0.02,
            density_bound: 2.0,
        }
    }
}

/// One realized draw of all noise sources on `[0, T]`, attached to the event
/// mesh the solver steps over.
#[derive(Debug, Clone)]
pub struct NoisePath {
    /// Mesh points: the uniform grid with event times inserted.
    pub times: Vec<f64>,
    /// Event at each mesh point, if any.
    pub events: Vec<Option<MeshEvent>>,
    /// Per mesh interval, the `modes` Wiener increments.
    pub wiener: Vec<Vec<f64>>,
    pub seed: u64,
    pub path_id: u64,
    pub eps_cut: f64,
}

fn substream(seed: u64, path_id: u64, tag: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    // Distinct stream per (path, source); the generator guarantees
    // independence across streams.
    rng.set_stream(path_id.wrapping_mul(64).wrapping_add(tag));
    rng
}

/// Closed-form mass of the dominating measure `K nu_alpha` above radius `eps`.
pub fn dominating_tail_mass(bound: f64, alpha: f64, dim: usize, eps: f64) -> f64 {
    let sphere = if dim == 1 { 2.0 } else { 2.0 * std::f64::consts::PI };
    bound * sphere * eps.powf(-alpha) / (alpha * levy_normalization(alpha, dim))
}

/// Thinning sampler for the stable jump measure with intensity
/// `density(t,y) nu_alpha(dy) dt` above `|y| > eps`: propose from the
/// constant dominating measure (exact radial inverse transform), accept with
/// ratio `density / bound`. Returns a time-sorted list.
pub fn sample_stable_jumps(
    density: &JumpDensity,
    cfg: &NoiseConfig,
    rng: &mut ChaCha12Rng,
) -> Result<Vec<StableJump>> {
    if density.is_zero() {
        return Ok(Vec::new());
    }
    if !(cfg.eps_cut > 0.0) {
        return Err(Error::config("eps_cut", "jump truncation radius must be positive"));
    }
    let rate = dominating_tail_mass(cfg.density_bound, cfg.alpha, cfg.dim, cfg.eps_cut);
    let count = Poisson::new(rate * cfg.horizon)
        .map_err(|e| Error::config("eps_cut", format!("invalid proposal rate: {e}")))?
        .sample(rng) as usize;
    let mut jumps = Vec::with_capacity(count / 2);
    for _ in 0..count {
        let t = rng.gen_range(0.0..cfg.horizon);
        let radius = cfg.eps_cut * rng.gen_range(0.0f64..1.0).max(1e-300).powf(-1.0 / cfg.alpha);
        let y = match cfg.dim {
            1 => {
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                [sign * radius, 0.0]
            }
            _ => {
                let phi = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
                [radius * phi.cos(), radius * phi.sin()]
            }
        };
        let rho = density.eval(t, y);
        if rho > cfg.density_bound * (1.0 + 1e-12) {
            return Err(Error::Contract(format!(
                "jump density {rho} exceeds its declared bound {} at t={t}, y={y:?}",
                cfg.density_bound
            )));
        }
        if rng.gen_range(0.0..1.0) < rho / cfg.density_bound {
            jumps.push(StableJump { time: t, y });
        }
    }
    jumps.sort_by(|a, b| a.time.total_cmp(&b.time));
    jumps.dedup_by(|a, b| a.time == b.time);
    Ok(jumps)
}

/// Poisson sampler for the finite mark measure; times that collide with the
/// supplied stable-jump times at float resolution are redrawn, so the two
/// sources never share a jump time.
pub fn sample_poisson_marks(
    measure: &MarkMeasure,
    horizon: f64,
    forbidden: &[f64],
    rng: &mut ChaCha12Rng,
) -> Result<Vec<(f64, MarkJump)>> {
    let mass = measure.total_mass();
    let count = Poisson::new(mass * horizon)
        .map_err(|e| Error::config("mark_measure", format!("invalid rate: {e}")))?
        .sample(rng) as usize;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut t = rng.gen_range(0.0..horizon);
        while forbidden.binary_search_by(|p| p.total_cmp(&t)).is_ok()
            || out.iter().any(|(s, _)| *s == t)
        {
            t = rng.gen_range(0.0..horizon);
        }
        let mut u = rng.gen_range(0.0..mass);
        let mut atom = measure.weights.len() - 1;
        for (i, w) in measure.weights.iter().enumerate() {
            if u < *w {
                atom = i;
                break;
            }
            u -= w;
        }
        out.push((t, MarkJump { atom }));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

impl NoisePath {
    /// Sample every source and assemble the event mesh. `observed` drives the
    /// stable transport noise; pass the zero density to disable it. `marks`
    /// likewise may be `None`.
    pub fn sample(
        cfg: &NoiseConfig,
        observed: &JumpDensity,
        marks: Option<&MarkMeasure>,
        seed: u64,
        path_id: u64,
    ) -> Result<NoisePath> {
        let mut rng_stable = substream(seed, path_id, 1);
        let stable = sample_stable_jumps(observed, cfg, &mut rng_stable)?;
        let stable_times: Vec<f64> = stable.iter().map(|j| j.time).collect();

        let mut rng_marks = substream(seed, path_id, 2);
        let mark_events = match marks {
            Some(measure) => sample_poisson_marks(measure, cfg.horizon, &stable_times, &mut rng_marks)?,
            None => Vec::new(),
        };

        // Mesh: uniform grid with event times inserted.
        let mut times: Vec<f64> =
            (0..=cfg.steps).map(|k| cfg.horizon * k as f64 / cfg.steps as f64).collect();
        times.extend(stable_times.iter().copied());
        times.extend(mark_events.iter().map(|(t, _)| *t));
        times.sort_by(f64::total_cmp);
        times.dedup();

        let mut events = vec![None; times.len()];
        for jump in &stable {
            let idx = times.binary_search_by(|p| p.total_cmp(&jump.time)).unwrap();
            events[idx] = Some(MeshEvent::Stable(jump.y));
        }
        for (t, mark) in &mark_events {
            let idx = times.binary_search_by(|p| p.total_cmp(t)).unwrap();
            events[idx] = Some(MeshEvent::Mark(mark.atom));
        }

        let mut rng_wiener = substream(seed, path_id, 3);
        let wiener = times
            .windows(2)
            .map(|w| {
                let sd = (w[1] - w[0]).sqrt();
                (0..cfg.modes)
                    .map(|_| sd * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng_wiener))
                    .collect()
            })
            .collect();

        Ok(NoisePath { times, events, wiener, seed, path_id, eps_cut: cfg.eps_cut })
    }

    pub fn horizon(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn stable_jumps(&self) -> impl Iterator<Item = StableJump> + '_ {
        self.times.iter().zip(self.events.iter()).filter_map(|(t, e)| match e {
            Some(MeshEvent::Stable(y)) => Some(StableJump { time: *t, y: *y }),
            _ => None,
        })
    }

    pub fn mark_jumps(&self) -> impl Iterator<Item = (f64, usize)> + '_ {
        self.times.iter().zip(self.events.iter()).filter_map(|(t, e)| match e {
            Some(MeshEvent::Mark(a)) => Some((*t, *a)),
            _ => None,
        })
    }

    /// Pathwise coupling across truncation levels: keep only stable jumps
    /// above `eps` (which must not be below the sampled cutoff). Mesh points
    /// and Wiener increments are left untouched so solutions at different
    /// cutoffs share every other source of randomness.
    pub fn restrict_to_cut(&self, eps: f64) -> Result<NoisePath> {
        if eps < self.eps_cut {
            return Err(Error::config("eps", format!("cannot un-truncate below {}", self.eps_cut)));
        }
        let mut out = self.clone();
        out.eps_cut = eps;
        for e in out.events.iter_mut() {
            if let Some(MeshEvent::Stable(y)) = e {
                if (y[0] * y[0] + y[1] * y[1]).sqrt() <= eps {
                    *e = None;
                }
            }
        }
        Ok(out)
    }
}

/// Realized compensated integral `sum_events f(t_i, y_i) -
/// integral_0^T integral_{|y| > eps} f(t, y) density nu_alpha(dy) dt`,
/// the time integral by left-endpoint interval sampling.
pub fn compensated_stable_integral(
    f: impl Fn(f64, [f64; 2]) -> f64,
    path: &NoisePath,
    density: &JumpDensity,
    alpha: f64,
    dim: usize,
    quad: &RadialQuadrature,
) -> f64 {
    let jump_sum: f64 = path.stable_jumps().map(|j| f(j.time, j.y)).sum();
    if density.is_zero() {
        return jump_sum;
    }
    let hi = crate::symbols::R_MAX_REFERENCE;
    let mut compensator = 0.0;
    if density.is_time_constant() {
        let rule = LevyNodeRule::build(density, 0.0, alpha, dim, path.eps_cut, hi, quad);
        for w in path.times.windows(2) {
            compensator += (w[1] - w[0]) * rule.integrate(|y| f(w[0], y));
        }
    } else {
        for w in path.times.windows(2) {
            let rule = LevyNodeRule::build(density, w[0], alpha, dim, path.eps_cut, hi, quad);
            compensator += (w[1] - w[0]) * rule.integrate(|y| f(w[0], y));
        }
    }
    jump_sum - compensator
}

/// Realized compensated integral against the mark measure.
pub fn compensated_mark_integral(
    f: impl Fn(f64, usize) -> f64,
    path: &NoisePath,
    measure: &MarkMeasure,
) -> f64 {
    let jump_sum: f64 = path.mark_jumps().map(|(t, atom)| f(t, atom)).sum();
    let mut compensator = 0.0;
    for w in path.times.windows(2) {
        let rate: f64 =
            measure.weights.iter().enumerate().map(|(a, wt)| wt * f(w[0], a)).sum();
        compensator += (w[1] - w[0]) * rate;
    }
    jump_sum - compensator
}
