use super::density::JumpDensity;
use super::radial::{levy_normalization, sphere_rule, RadialQuadrature};

const GL4_NODES: [f64; 4] =
    [-0.861_136_311_594_052_6, -0.339_981_043_584_856_3, 0.339_981_043_584_856_3, 0.861_136_311_594_052_6];
const GL4_WEIGHTS: [f64; 4] =
    [0.347_854_845_137_453_84, 0.652_145_154_862_546_1, 0.652_145_154_862_546_1, 0.347_854_845_137_453_84];

/// Explicit node/weight rule for integrals
/// `integral_{lo<|y|<hi} F(y) rho(t,y) nu_alpha(dy)`
/// against a fixed weight density `rho` at a fixed time. Nodes are the
/// Gauss-Legendre points of log-spaced radial panels crossed with the sphere
/// rule; weights already carry `rho`, the singular kernel and the global
/// normalization. Smooth `F` only; oscillatory integrands go through the
/// symbol engine instead.
#[derive(Debug, Clone)]
pub struct LevyNodeRule {
    pub nodes: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
}

impl LevyNodeRule {
    pub fn build(
        weight_density: &JumpDensity,
        t: f64,
        alpha: f64,
        d: usize,
        lo: f64,
        hi: f64,
        quad: &RadialQuadrature,
    ) -> LevyNodeRule {
        assert!(lo > 0.0 && hi > lo && hi.is_finite(), "node rule needs 0 < lo < hi < inf");
        let norm = levy_normalization(alpha, d);
        let mut breakpoints: Vec<f64> = Vec::new();
        let decades = (hi / lo).log10();
        let panels = ((decades * quad.panels_per_decade as f64).ceil() as usize).max(1);
        let ratio = (hi / lo).powf(1.0 / panels as f64);
        let mut r = lo;
        for _ in 0..panels {
            breakpoints.push(r);
            r *= ratio;
        }
        breakpoints.push(hi);
        for &b in weight_density.radial_breaks() {
            if b > lo && b < hi {
                breakpoints.push(b);
            }
        }
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();

        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for (w, ang_weight) in sphere_rule(d, quad.angular_nodes) {
            for win in breakpoints.windows(2) {
                let c = 0.5 * (win[0] + win[1]);
                let hw = 0.5 * (win[1] - win[0]);
                for (gx, gw) in GL4_NODES.iter().zip(GL4_WEIGHTS.iter()) {
                    let radius = c + hw * gx;
                    let y = [radius * w[0], radius * w[1]];
                    let rho = weight_density.eval(t, y);
                    let wt = ang_weight * gw * hw * rho * radius.powf(-1.0 - alpha) / norm;
                    if wt != 0.0 {
                        nodes.push(y);
                        weights.push(wt);
                    }
                }
            }
        }
        LevyNodeRule { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrate a scalar function of the jump mark.
    pub fn integrate(&self, f: impl Fn([f64; 2]) -> f64) -> f64 {
        self.nodes.iter().zip(self.weights.iter()).map(|(y, w)| w * f(*y)).sum()
    }

    /// Total mass of the rule (`F = 1`).
    pub fn mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}
