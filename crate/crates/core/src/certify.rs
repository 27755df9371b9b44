//! Certified stage: validates a candidate eigenfunction with the min-max
//! argument and turns it into an enclosure of the dimension.

use std::time::Instant;

use log::info;
use rug::float::Round;
use rug::{Float, Integer};

use crate::apriori::VerifiedConstants;
use crate::chebyshev::{hardy_norm_bound, lebesgue_bound, projection_error, sup_inf_bounds, ChebCoeffs2D};
use crate::error::{Error, Result};
use crate::euler_maclaurin::PlanOverrides;
use crate::operator::{apply_to_nodes, chebyshev_order, AprioriConstants, OperatorParams, CERTIFIED_S_RANGE};
use crate::rigor::{default_precision, Interval};
use crate::spectral::find_dimension;

/// Outcome of the sup/inf test on `𝒜_s φ − λφ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadiusVerdict {
    /// `𝒜_s φ < λφ` everywhere, so `ρ(𝒜_s) < λ`.
    UpperConfirmed,
    /// `𝒜_s φ > λφ` everywhere, so `ρ(𝒜_s) > λ`.
    LowerConfirmed,
    Inconclusive,
}

/// Certified quantities describing how close `φ` is to an eigenfunction.
#[derive(Clone, Debug)]
pub struct Discrepancy {
    /// `(φ⁻, φ⁺)` with `0 < φ⁻ ≤ φ ≤ φ⁺` on `[-1,1]²`.
    pub phi_bounds: (Float, Float),
    /// Bound on `‖φ‖` over the `r_A` ellipse.
    pub vnorm: Float,
    /// `(e⁻, e⁺)` bracketing `P_K χ − λφ` on `[-1,1]²`.
    pub e_bounds: (Float, Float),
    /// Euler–Maclaurin error at each node.
    pub pointwise_err: Float,
    /// `W·vnorm·E_{2,K}(R_A) + Λ_K²·pointwise_err`.
    pub approx_error: Float,
}

/// Chebyshev coefficients of the node values `values`, rounded to exact
/// points; under `y_even` the odd-`k2` coefficients are set to exactly zero.
/// The returned polynomial *is* the test function from here on.
pub fn phi_from_values(params: &OperatorParams, values: &[Float]) -> ChebCoeffs2D {
    let k = params.k;
    let raw = params.basis.grid_to_coeffs_point(values);
    let mut c = ChebCoeffs2D::zeros(k, params.prec());
    for k1 in 0..k {
        for k2 in 0..k {
            if params.y_even && k2 % 2 == 1 {
                continue;
            }
            c.set(k1, k2, Interval::point(raw[k1 * k + k2].clone()));
        }
    }
    c
}

fn up(x: Interval) -> Float {
    x.hi().clone()
}

/// Computes every certified quantity needed by the min-max theorems.
pub fn discrepancy(params: &OperatorParams, phi: &ChebCoeffs2D, lambda: &Interval) -> Result<Discrepancy> {
    let p = params.prec();
    let (phi_lo, phi_hi) = sup_inf_bounds(phi);
    if !phi_lo.is_sign_positive() || phi_lo.is_zero() {
        return Err(Error::PositivityFailure(format!("certified inf φ = {} is not positive", phi_lo.to_f64())));
    }
    let vnorm = hardy_norm_bound(phi, params.constants.r_small);
    let t = Instant::now();
    let (chi, pointwise_err) = apply_to_nodes(params, phi, &vnorm)?;
    info!("pointwise evaluation at {} nodes took {:.1?}", params.k * params.half(), t.elapsed());
    let chi_hat = params.basis.grid_to_coeffs(&chi);
    let diff = chi_hat.sub_scaled(lambda, phi)?;
    let (e_lo, e_hi) = sup_inf_bounds(&diff);
    let proj = Interval::point(projection_error(2, params.k, params.constants.r_big, p)?);
    let leb = Interval::point(lebesgue_bound(params.k, p));
    let w = AprioriConstants::exact(params.constants.w, p);
    let approx = &(&(&w * &Interval::point(vnorm.clone())) * &proj) + &(&leb.sqr() * &Interval::point(pointwise_err.clone()));
    Ok(Discrepancy {
        phi_bounds: (phi_lo, phi_hi),
        vnorm,
        e_bounds: (e_lo, e_hi),
        pointwise_err,
        approx_error: up(approx),
    })
}

/// Decides `ρ(𝒜_s) ≶ λ` from a positive test function.
pub fn spectral_radius_bounds(params: &OperatorParams, phi: &ChebCoeffs2D, lambda: &Float) -> Result<(RadiusVerdict, Discrepancy)> {
    let p = params.prec();
    let d = discrepancy(params, phi, &Interval::point(Float::with_val(p, lambda)))?;
    let err = Interval::point(d.approx_error.clone());
    let sup = &Interval::point(d.e_bounds.1.clone()) + &err;
    let inf = &Interval::point(d.e_bounds.0.clone()) - &err;
    let v = if sup.is_negative() {
        RadiusVerdict::UpperConfirmed
    } else if inf.is_positive() {
        RadiusVerdict::LowerConfirmed
    } else {
        RadiusVerdict::Inconclusive
    };
    Ok((v, d))
}

/// Bracket of the root of `ρ(𝒜_s) = λ` from data at `s₀`.
///
/// With `a = e⁻ − err` and `b = e⁺ + err`, integrating the linear-response
/// bounds `−D⁻ sup ψ ≤ ∂_s 𝒜_s ψ ≤ −D⁺ inf ψ` on the side where each inequality
/// is needed gives
/// `s_lo = s₀ + a/(D⁺φ⁻)` if `a < 0`, else `s₀ + a/(D⁻φ⁺)`;
/// `s_hi = s₀ + b/(D⁺φ⁻)` if `b > 0`, else `s₀ + b/(D⁻φ⁺)`.
/// All quotients are rounded outward.
pub fn min_max_enclosure(
    s0: &Float,
    e_bounds: (&Float, &Float),
    err: &Float,
    phi_bounds: (&Float, &Float),
    d_plus: f64,
    d_minus: f64,
) -> Result<(Float, Float)> {
    let p = s0.prec();
    let (phi_lo, phi_hi) = phi_bounds;
    if !(phi_lo.is_sign_positive() && !phi_lo.is_zero()) || phi_lo > phi_hi {
        return Err(Error::InvalidBounds(format!("need 0 < φ⁻ ≤ φ⁺ (φ⁻ = {}, φ⁺ = {})", phi_lo.to_f64(), phi_hi.to_f64())));
    }
    if e_bounds.0 > e_bounds.1 {
        return Err(Error::InvalidBounds("e⁻ > e⁺".into()));
    }
    if err.is_sign_negative() && !err.is_zero() {
        return Err(Error::InvalidBounds("negative approximation error".into()));
    }
    let pt = |x: &Float| Interval::point(Float::with_val(p.max(x.prec()), x));
    let err_i = pt(err);
    let a = &pt(e_bounds.0) - &err_i;
    let b = &pt(e_bounds.1) + &err_i;
    let slow = &AprioriConstants::exact(d_plus, p) * &pt(phi_lo);
    let fast = &AprioriConstants::exact(d_minus, p) * &pt(phi_hi);
    let s0i = pt(s0);
    let lo_step = if a.lo().is_sign_negative() && !a.lo().is_zero() { a.div(&slow)? } else { a.div(&fast)? };
    let hi_step = if b.hi().is_sign_positive() && !b.hi().is_zero() { b.div(&slow)? } else { b.div(&fast)? };
    let lo = &s0i + &lo_step;
    let hi = &s0i + &hi_step;
    Ok((lo.lo().clone(), hi.hi().clone()))
}

/// Largest `d` such that `s_lo` and `s_hi` truncated to `d` decimals agree, and
/// that common truncation.
pub fn certified_digits(s_lo: &Float, s_hi: &Float) -> (usize, String) {
    let max_d = ((s_lo.prec().min(s_hi.prec()) as f64) * std::f64::consts::LOG10_2) as usize;
    let trunc = |x: &Float, d: usize| -> Integer {
        let scale = Integer::from(Integer::u_pow_u(10, d as u32));
        let prod = Float::with_val(x.prec() + 4 * d as u32 + 8, x * &scale);
        prod.to_integer_round(Round::Down).map(|(i, _)| i).unwrap_or_default()
    };
    let mut best = 0;
    for d in 0..=max_d {
        if trunc(s_lo, d) == trunc(s_hi, d) {
            best = d;
        } else {
            break;
        }
    }
    let t = trunc(s_lo, best).to_string();
    let digits = if best == 0 {
        t
    } else {
        let (int, frac) = t.split_at(t.len() - best);
        format!("{int}.{frac}")
    };
    (best, digits)
}

/// Inputs of [`certify_dimension`].
#[derive(Clone, Debug)]
pub struct CertifyConfig {
    pub eps_bits: u32,
    pub precision: Option<u32>,
    pub k: Option<usize>,
    pub overrides: PlanOverrides,
    pub y_even: bool,
    pub max_secant_iter: usize,
}

impl CertifyConfig {
    pub fn new(eps_bits: u32) -> Self {
        CertifyConfig {
            eps_bits,
            precision: None,
            k: None,
            overrides: PlanOverrides::default(),
            y_even: true,
            max_secant_iter: 30,
        }
    }

    pub fn epsilon(&self) -> f64 {
        2f64.powi(-(self.eps_bits as i32))
    }

    pub fn precision(&self) -> u32 {
        self.precision.unwrap_or_else(|| default_precision(self.eps_bits))
    }

    pub fn order(&self, constants: &AprioriConstants) -> usize {
        self.k.unwrap_or_else(|| chebyshev_order(self.epsilon(), constants.r_big))
    }

    /// Operator at `s = 1.305`, the template from which the secant search starts.
    pub fn template(&self, constants: &AprioriConstants) -> Result<OperatorParams> {
        if self.eps_bits < 21 {
            return Err(Error::Parameter(format!("eps-bits must be at least 21, got {}", self.eps_bits)));
        }
        let k = self.order(constants);
        if k < 2 {
            return Err(Error::Parameter(format!("K must be at least 2, got {k}")));
        }
        let p = self.precision();
        let s = Interval::from_decimal(p, "1.305")?;
        OperatorParams::build(&s, k, self.epsilon(), *constants, self.y_even, p, &self.overrides)
    }
}

/// Non-rigorous estimate of the dimension.
#[derive(Clone, Debug)]
pub struct Estimate {
    pub s_star: Float,
    pub lambda: Float,
    pub iterations: usize,
    pub history: Vec<(Float, Float)>,
    pub eigen: crate::spectral::EigenPair,
    pub params: OperatorParams,
}

/// Secant search at the configured parameters.
pub fn estimate_dimension(cfg: &CertifyConfig, constants: &AprioriConstants) -> Result<Estimate> {
    let template = cfg.template(constants)?;
    let p = template.prec();
    let mut eps = Float::with_val(p, 1);
    eps >>= cfg.eps_bits as i32;
    let t = Instant::now();
    let out = find_dimension(&template, &eps, cfg.max_secant_iter)?;
    info!("secant search: {} steps, {:.1?}", out.state.iterations, t.elapsed());
    let params = template.with_s(&Interval::point(out.s_star.clone()))?;
    Ok(Estimate {
        s_star: out.s_star,
        lambda: out.lambda,
        iterations: out.state.iterations,
        history: out.state.history,
        eigen: out.payload,
        params,
    })
}

/// Everything recorded about a certified enclosure.
#[derive(Clone, Debug, PartialEq)]
pub struct DimensionCertificate {
    pub s_lo: Float,
    pub s_hi: Float,
    pub eps_bits: u32,
    pub precision: u32,
    pub k: usize,
    pub n: u64,
    pub l: usize,
    pub m: usize,
    pub mp: usize,
    pub y_even: bool,
    pub constants: AprioriConstants,
    pub s0: Float,
    pub lambda_s0: Float,
    pub secant_iterations: usize,
    pub phi_bounds: (Float, Float),
    pub discrepancy: (Float, Float),
    pub pointwise_err: Float,
    pub approx_error: Float,
    pub vnorm: Float,
    pub certified_digits: usize,
    pub digits: String,
    pub convention: String,
    pub timestamp: String,
    pub toolchain: String,
}

/// Text describing the bracket formula, stored with every certificate.
pub const BRACKET_CONVENTION: &str =
    "a=e_lo-err, b=e_hi+err; s_lo=s0+a/(D_plus*phi_lo) if a<0 else s0+a/(D_minus*phi_hi); s_hi=s0+b/(D_plus*phi_lo) if b>0 else s0+b/(D_minus*phi_hi)";

impl DimensionCertificate {
    pub fn width(&self) -> Float {
        Float::with_val_round(self.s_hi.prec(), &self.s_hi - &self.s_lo, Round::Up).0
    }

    pub fn contains_decimal(&self, digits: &str) -> bool {
        let p = self.s_lo.prec();
        let x = Interval::from_decimal(p, digits).expect("decimal string");
        *x.lo() >= self.s_lo && *x.hi() <= self.s_hi
    }
}

/// Runs the full pipeline: secant search, pointwise certified evaluation and
/// the min-max bracket. Requires verified a priori constants.
pub fn certify_dimension(cfg: &CertifyConfig, verified: &VerifiedConstants) -> Result<DimensionCertificate> {
    let constants = *verified.constants();
    let est = estimate_dimension(cfg, &constants)?;
    certify_from_estimate(cfg, verified, &est)
}

/// Certified stage only, from an existing estimate.
pub fn certify_from_estimate(cfg: &CertifyConfig, verified: &VerifiedConstants, est: &Estimate) -> Result<DimensionCertificate> {
    let constants = *verified.constants();
    if est.params.constants != constants {
        return Err(Error::Unverified("estimate was computed with different constants".into()));
    }
    let params = &est.params;
    let phi = phi_from_values(params, &est.eigen.phi_values);
    let d = discrepancy(params, &phi, &Interval::one(params.prec()))?;
    let (s_lo, s_hi) = min_max_enclosure(
        &est.s_star,
        (&d.e_bounds.0, &d.e_bounds.1),
        &d.approx_error,
        (&d.phi_bounds.0, &d.phi_bounds.1),
        constants.d_plus,
        constants.d_minus,
    )?;
    if s_lo >= s_hi {
        return Err(Error::InconsistentBracket(format!("s_lo = {} ≥ s_hi = {}", s_lo.to_f64(), s_hi.to_f64())));
    }
    let (a, b) = CERTIFIED_S_RANGE;
    let p = params.prec();
    if s_lo < *AprioriConstants::exact(a, p).hi() || s_hi > *AprioriConstants::exact(b, p).lo() {
        return Err(Error::InconsistentBracket(format!(
            "bracket [{}, {}] leaves the verified range [{a}, {b}]",
            s_lo.to_f64(),
            s_hi.to_f64()
        )));
    }
    // Everything recorded is rounded outward to the working precision, so the
    // certificate is uniform in precision.
    let down = |x: &Float| Float::with_val_round(p, x, Round::Down).0;
    let up = |x: &Float| Float::with_val_round(p, x, Round::Up).0;
    let (s_lo, s_hi) = (down(&s_lo), up(&s_hi));
    let (nd, digits) = certified_digits(&s_lo, &s_hi);
    let plan = &params.plan;
    Ok(DimensionCertificate {
        s_lo,
        s_hi,
        eps_bits: cfg.eps_bits,
        precision: p,
        k: params.k,
        n: plan.n,
        l: plan.l,
        m: plan.m,
        mp: plan.mp,
        y_even: params.y_even,
        constants,
        s0: Float::with_val(p, &est.s_star),
        lambda_s0: Float::with_val(p, &est.lambda),
        secant_iterations: est.iterations,
        phi_bounds: (down(&d.phi_bounds.0), up(&d.phi_bounds.1)),
        discrepancy: (down(&d.e_bounds.0), up(&d.e_bounds.1)),
        pointwise_err: up(&d.pointwise_err),
        approx_error: up(&d.approx_error),
        vnorm: up(&d.vnorm),
        certified_digits: nd,
        digits,
        convention: BRACKET_CONVENTION.to_string(),
        timestamp: String::new(),
        toolchain: toolchain(),
    })
}

/// Library and backend versions.
pub fn toolchain() -> String {
    use gmp_mpfr_sys::mpfr;
    let v = mpfr::VERSION;
    format!("gasket-core {}; MPFR {}.{}.{}", env!("CARGO_PKG_VERSION"), v >> 16, (v >> 8) & 0xff, v & 0xff)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    fn f(x: f64) -> Float {
        Float::with_val(P, x)
    }

    #[test]
    fn degenerate_bracket() {
        let (lo, hi) = min_max_enclosure(&f(1.305), (&f(0.0), &f(0.0)), &f(0.0), (&f(1.0), &f(1.0)), 0.59, 3.3).unwrap();
        assert_eq!(lo, f(1.305));
        assert_eq!(hi, f(1.305));
    }

    #[test]
    fn symmetric_bracket() {
        let (d, e) = (1e-6, 1e-7);
        let (lo, hi) = min_max_enclosure(&f(1.305), (&f(-d), &f(d)), &f(e), (&f(1.0), &f(1.0)), 0.59, 3.3).unwrap();
        let expect = (d + e) / 0.59;
        assert!((1.305 - lo.to_f64() - expect).abs() < 1e-15);
        assert!((hi.to_f64() - 1.305 - expect).abs() < 1e-15);
        let (lo2, _) = min_max_enclosure(&f(1.305), (&f(2e-6), &f(3e-6)), &f(0.0), (&f(1.0), &f(1.0)), 0.59, 3.3).unwrap();
        assert!((lo2.to_f64() - 1.305 - 2e-6 / 3.3).abs() < 1e-15);
    }

    #[test]
    fn invalid_inputs() {
        assert!(matches!(
            min_max_enclosure(&f(1.3), (&f(0.0), &f(0.0)), &f(0.0), (&f(0.0), &f(1.0)), 0.59, 3.3),
            Err(Error::InvalidBounds(_))
        ));
        assert!(matches!(
            min_max_enclosure(&f(1.3), (&f(1.0), &f(0.0)), &f(0.0), (&f(1.0), &f(1.0)), 0.59, 3.3),
            Err(Error::InvalidBounds(_))
        ));
    }

    #[test]
    fn digit_agreement() {
        let lo = Float::with_val(P, Float::parse("1.30568672804987").unwrap());
        let hi = Float::with_val(P, Float::parse("1.30568672805001").unwrap());
        let (d, s) = certified_digits(&lo, &hi);
        assert_eq!(d, 10);
        assert_eq!(s, "1.3056867280");
    }
}
