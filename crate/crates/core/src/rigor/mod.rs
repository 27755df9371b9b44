//! Arbitrary-precision scalars and outward-rounded real/complex intervals.
//!
//! Endpoints are MPFR floats. Every operation rounds the lower endpoint down
//! and the upper endpoint up, so results always contain the exact image of
//! the inputs. Complex intervals are axis-aligned rectangles.

mod complex;
mod interval;

pub use complex::CInterval;
pub use interval::Interval;

/// Working scalar of the non-rigorous stage.
pub type BigScalar = rug::Float;

/// Smallest precision any computation context may use.
pub const MIN_PRECISION: u32 = 64;

/// Default working precision for a target `eps = 2^-eps_bits`.
pub fn default_precision(eps_bits: u32) -> u32 {
    (2 * eps_bits).max(MIN_PRECISION)
}

/// Complex power `base^s` with the logarithm branch pinned at `anchor`.
///
/// The argument is measured as `arg(anchor) + Arg(base / anchor)` with the
/// principal `Arg`, so the branch is the one reached from the anchor along any
/// path on which `base / anchor` avoids the negative real axis.
pub fn complex_pow_real_exponent(
    base: &CInterval,
    s: &Interval,
    branch_anchor: &CInterval,
) -> crate::Result<CInterval> {
    base.pow_real_anchored(s, branch_anchor)
}
