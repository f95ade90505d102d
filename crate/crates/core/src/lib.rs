//! Numerical evaluation of trigonometric series with logarithmic
//! coefficients, the digamma closed forms they sum to, two Frullani-type
//! integrals with hyperbolic kernels, and the infinite products that follow.
//!
//! Each identity in the catalog is evaluated twice: once through a series,
//! integral or product, and once through its closed form. The harness sweeps
//! the catalog over parameter grids and reports the residuals.
//!
//! ```
//! use logtrig_core::{identities, IdentityId, NuValue};
//!
//! let nu = NuValue::new(0.25).unwrap();
//! let lhs = identities::lhs_series(IdentityId::Series2, nu, 1e-10).unwrap();
//! let rhs = identities::rhs_closed(IdentityId::Series2, nu).unwrap();
//! assert!((lhs.re() - rhs.re()).abs() < 1e-10);
//! assert!((rhs.re() - std::f64::consts::FRAC_PI_2.ln()).abs() < 1e-14);
//! ```

// Parameter checks are written `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod harness;
pub mod identities;
pub mod products;
pub mod quadrature;
pub mod series_engine;
pub mod special_fn;

pub use error::{Error, Result};
pub use harness::{
    emit_report, sweep, verify_identity, ReportFormat, SweepConfig, VerificationRecord,
};
pub use identities::{IdentityId, IdentitySpec, Point};
pub use num_complex::Complex64;
pub use products::RationalProductSpec;
pub use quadrature::{FrullaniIntegrand, QuadratureConfig};
pub use series_engine::{EvalResult, Method, NuValue, Oscillation, SeriesSpec, Value};
pub use special_fn::{digamma, log_gamma, EULER_GAMMA};
