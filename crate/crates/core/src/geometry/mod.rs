//! The chart atlas on the two constant-curvature 3-spaces.
//!
//! Four charts are supported: cylindrical coordinates on H3 and S3, the
//! horospherical chart on H3, and the complex horospherical chart on S3,
//! which is parameterized by the real triple `(a, b, phi)`. Curvature radius
//! is fixed to 1, so every coordinate is dimensionless.

mod chart;
mod complex;
mod metric;

pub use chart::{
    embed, embed_coords, unembed, AmbientPoint, ChartId, ChartPoint, Space, Unembedded, AMBIENT_TOLERANCE,
};
pub use complex::{
    complexify, constraint_residual, metric_in_variables, rrstar_metric, unit_modulus_residual, zzstar_metric,
    ComplexHoroPair,
};
pub use metric::{
    closed_form_metric, pullback_metric, pullback_metric_with_error, MetricTensor, Pullback, VariableSet,
    DEFAULT_PULLBACK_STEP,
};
