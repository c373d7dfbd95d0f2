//! Deterministic numerical primitives shared by the geometric modules.

mod diff;
mod extrapolation;
mod fit;
mod quadrature;
mod series;

pub use diff::central_diff;
pub use extrapolation::{richardson_limit, Extrapolation};
pub use fit::{fit_log_log_slope, SlopeFit};
pub use quadrature::{integrate_radial, QuadValue, Quadrature, QuadratureResult, Upper};
pub use series::{sum_series, sum_series_capped, INDEX_CAP};
