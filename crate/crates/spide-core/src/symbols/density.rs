use std::sync::Arc;

type DensityFn = Arc<dyn Fn(f64, [f64; 2]) -> f64 + Send + Sync>;

/// A jump-intensity density `rho(t, y)` against the reference measure
/// `nu_alpha(dy) = dy / (norm_const * |y|^{d+alpha})`.
///
/// Carries the metadata the quadrature engine needs: whether the density is
/// homogeneous of degree zero in `y` (closed-form radial integrals apply),
/// whether it depends on time, radial breakpoints along rays, and the radius
/// past which each ray is constant.
#[derive(Clone)]
pub struct JumpDensity {
    eval: DensityFn,
    homogeneous: bool,
    time_constant: bool,
    radial_breaks: Vec<f64>,
    constant_beyond: f64,
    zero: bool,
}

impl std::fmt::Debug for JumpDensity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("JumpDensity")
            .field("homogeneous", &self.homogeneous)
            .field("time_constant", &self.time_constant)
            .field("zero", &self.zero)
            .finish()
    }
}

impl JumpDensity {
    pub fn zero() -> Self {
        JumpDensity {
            eval: Arc::new(|_, _| 0.0),
            homogeneous: true,
            time_constant: true,
            radial_breaks: Vec::new(),
            constant_beyond: 0.0,
            zero: true,
        }
    }

    pub fn constant(c: f64) -> Self {
        JumpDensity {
            eval: Arc::new(move |_, _| c),
            homogeneous: true,
            time_constant: true,
            radial_breaks: Vec::new(),
            constant_beyond: 0.0,
            zero: c == 0.0,
        }
    }

    /// `rho(t, y) = a(t)`, constant in `y`.
    pub fn time_scaled(a: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        JumpDensity {
            eval: Arc::new(move |t, _| a(t)),
            homogeneous: true,
            time_constant: false,
            radial_breaks: Vec::new(),
            constant_beyond: 0.0,
            zero: false,
        }
    }

    /// Homogeneous of degree zero: `rho(t, y) = value(y/|y|)`.
    pub fn angular(value: impl Fn([f64; 2]) -> f64 + Send + Sync + 'static) -> Self {
        JumpDensity {
            eval: Arc::new(move |_, y| {
                let r = (y[0] * y[0] + y[1] * y[1]).sqrt();
                if r == 0.0 {
                    0.0
                } else {
                    value([y[0] / r, y[1] / r])
                }
            }),
            homogeneous: true,
            time_constant: true,
            radial_breaks: Vec::new(),
            constant_beyond: 0.0,
            zero: false,
        }
    }

    /// Fully general measurable density with quadrature hints.
    pub fn general(
        eval: impl Fn(f64, [f64; 2]) -> f64 + Send + Sync + 'static,
        time_constant: bool,
        radial_breaks: Vec<f64>,
        constant_beyond: f64,
    ) -> Self {
        JumpDensity {
            eval: Arc::new(eval),
            homogeneous: false,
            time_constant,
            radial_breaks,
            constant_beyond,
            zero: false,
        }
    }

    pub fn eval(&self, t: f64, y: [f64; 2]) -> f64 {
        (self.eval)(t, y)
    }

    /// Evaluate along the ray `r -> r w`.
    pub fn eval_ray(&self, t: f64, w: [f64; 2], r: f64) -> f64 {
        (self.eval)(t, [r * w[0], r * w[1]])
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    pub fn is_time_constant(&self) -> bool {
        self.time_constant
    }

    pub fn radial_breaks(&self) -> &[f64] {
        &self.radial_breaks
    }

    pub fn constant_beyond(&self) -> f64 {
        self.constant_beyond
    }

    /// Pointwise difference `self - other`, used for the correlated-noise
    /// generator variant. Metadata is merged conservatively.
    pub fn minus(&self, other: &JumpDensity) -> JumpDensity {
        if other.zero {
            return self.clone();
        }
        let a = self.eval.clone();
        let b = other.eval.clone();
        let mut breaks = self.radial_breaks.clone();
        breaks.extend_from_slice(&other.radial_breaks);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        JumpDensity {
            eval: Arc::new(move |t, y| a(t, y) - b(t, y)),
            homogeneous: self.homogeneous && other.homogeneous,
            time_constant: self.time_constant && other.time_constant,
            radial_breaks: breaks,
            constant_beyond: self.constant_beyond.max(other.constant_beyond),
            zero: self.zero && other.zero,
        }
    }

    /// Pointwise sum, same merging rules as [`minus`].
    pub fn plus(&self, other: &JumpDensity) -> JumpDensity {
        if other.zero {
            return self.clone();
        }
        if self.zero {
            return other.clone();
        }
        let a = self.eval.clone();
        let b = other.eval.clone();
        let mut breaks = self.radial_breaks.clone();
        breaks.extend_from_slice(&other.radial_breaks);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        JumpDensity {
            eval: Arc::new(move |t, y| a(t, y) + b(t, y)),
            homogeneous: self.homogeneous && other.homogeneous,
            time_constant: self.time_constant && other.time_constant,
            radial_breaks: breaks,
            constant_beyond: self.constant_beyond.max(other.constant_beyond),
            zero: false,
        }
    }

    /// Density `y -> rho(t, -y)`, as needed by the filtering equation.
    pub fn reflected(&self) -> JumpDensity {
        let a = self.eval.clone();
        JumpDensity {
            eval: Arc::new(move |t, y| a(t, [-y[0], -y[1]])),
            ..self.clone()
        }
    }
}
