//! Zeta-regularized determinants and zeta-function singularity structure for
//! self-adjoint extensions of the Laplacian on a bounded generalized cone.
//!
//! The numeric core is generic over [`Real`]; the aliases below fix `f64`.

pub mod det;
pub mod error;
pub mod expo_poly;
pub mod extension;
pub mod linalg;
pub mod quadrature;
pub mod scalar;
pub mod secular;
pub mod series;
pub mod special;

pub use det::{compute_det, det_neumann, det_oned, DetOptions, Method, RegularPart};
pub use error::{Error, ErrorClass, Result};
pub use expo_poly::{build_p, leading_data, ExpoKey};
pub use extension::{make_friedrichs, make_neumann, make_scale_invariant, random_lagrangian};
pub use scalar::Real;
pub use secular::{contour_det_oracle, find_eigenvalues};
pub use series::{analyze, log_expand};

pub type Complex64 = num_complex::Complex<f64>;
pub type CMatrix = linalg::CMatrix<f64>;
pub type BaseSpectrum = extension::BaseSpectrum<f64>;
pub type Lagrangian = extension::Lagrangian<f64>;
pub type ValidationReport = extension::ValidationReport<f64>;
pub type ExpoPoly = expo_poly::ExpoPoly<f64>;
pub type LeadingData = expo_poly::LeadingData<f64>;
pub type LogSeries = series::LogSeries<f64>;
pub type SingularityReport = series::SingularityReport<f64>;
pub type SeriesConfig = special::SeriesConfig<f64>;
pub type SecularContext = secular::SecularContext<f64>;
pub type SpectrumSlice = secular::SpectrumSlice<f64>;
pub type OracleResult = secular::OracleResult<f64>;
pub type DetResult = det::DetResult<f64>;
