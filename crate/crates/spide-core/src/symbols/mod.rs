//! Equation coefficients, admissibility validation, and the generator's
//! Fourier symbol by two independent routes (closed form for homogeneous
//! densities, adaptive quadrature for measurable ones), together with the
//! compensator bookkeeping that small-jump truncation needs.

mod coeffs;
mod density;
mod noderule;
pub mod presets;
pub mod radial;
mod symbol;

pub use coeffs::{
    validate_base_density, validate_coefficients, Clause, CoefficientSet, GeneratorVariant,
    ValidationReport, Violation,
};
pub use density::JumpDensity;
pub use noderule::LevyNodeRule;
pub use radial::{levy_normalization, sphere_moment, Centering, RadialQuadrature};
pub use symbol::{
    apply_generator, centering_drift_vector, compensator_exponent, generator_symbol,
    levy_exponent, spectral_table, symbol_homogeneous, symbol_quadrature, truncated_jump_rate,
    truncation_split, Route, TruncationSplit, R_MAX_REFERENCE,
};
