//! Certified enclosures of the Hausdorff dimension of the Apollonian gasket.
//!
//! The dimension is the parameter `s` at which the leading eigenvalue of a
//! transfer operator built from an infinite, uniformly contracting induced
//! iterated function system equals one. The operator is discretised by tensor
//! Chebyshev interpolation, its infinite sum over the system's maps is
//! accelerated with Euler–Maclaurin quadrature at complex nodes, and a
//! candidate dimension is validated with a min-max eigenvalue argument in
//! interval arithmetic.
//!
//! Module map:
//! - [`rigor`]: MPFR-backed real/complex intervals.
//! - [`ifs`]: Möbius matrices, the induced maps `G_n^±` and Jacobians `J_n^±`.
//! - [`chebyshev`]: nodes, transforms, Bernstein ellipses, Hardy-norm bounds.
//! - [`euler_maclaurin`]: quadrature plans and certified accelerated sums.
//! - [`operator`]: the transfer operator (matrix assembly and certified pointwise evaluation).
//! - [`spectral`]: power iteration and the secant search for `λ(s) = 1`.
//! - [`certify`]: the min-max enclosure and [`certify::DimensionCertificate`].
//! - [`apriori`]: box-subdivision verification of the analytic constants.

pub mod apriori;
pub mod certify;
pub mod chebyshev;
pub mod error;
pub mod euler_maclaurin;
pub mod ifs;
pub mod operator;
pub mod rigor;
pub mod spectral;

pub use error::{Error, Result};

/// Leading digits of the dimension as published for the full-scale run.
pub const PUBLISHED_DIGITS: &str = "1.30568672804987718464";

/// McMullen's historical estimate.
pub const MCMULLEN_ESTIMATE: &str = "1.305688";

/// Boyd's rigorous bracket `(1.300197, 1.314534)`.
pub const BOYD_BRACKET: (&str, &str) = ("1.300197", "1.314534");
