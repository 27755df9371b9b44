//! Certified stage at desk-scale tolerances. Constants are taken as verified
//! here; the box verification itself is exercised in `apriori.rs` and by the
//! acceptance run.

use gasket_core::apriori::{Claim, VerificationReport, VerifiedConstants};
use gasket_core::certify::*;
use gasket_core::operator::AprioriConstants;
use gasket_core::rigor::Interval;
use gasket_core::spectral::eigen_at;
use gasket_core::{Error, BOYD_BRACKET, PUBLISHED_DIGITS};
use rug::Float;

fn verified() -> VerifiedConstants {
    VerifiedConstants::unchecked(AprioriConstants::default())
}

fn parse(p: u32, s: &str) -> Float {
    Float::with_val(p, Float::parse(s).unwrap())
}

#[test]
fn certificate_at_40_bits() {
    let t = std::time::Instant::now();
    let cfg = CertifyConfig::new(40);
    let est = estimate_dimension(&cfg, &AprioriConstants::default()).unwrap();
    let cert = certify_from_estimate(&cfg, &verified(), &est).unwrap();
    eprintln!("eps 2^-40 certificate in {:.1?}: width {:e}", t.elapsed(), cert.width().to_f64());
    assert!(cert.s_lo < cert.s_hi);
    assert!(cert.contains_decimal(PUBLISHED_DIGITS));
    let p = cert.precision;
    assert!(cert.s_lo > parse(p, BOYD_BRACKET.0) && cert.s_hi < parse(p, BOYD_BRACKET.1));
    // The bracket at s₀ = s* contains s* itself.
    assert!(cert.s_lo <= cert.s0 && cert.s0 <= cert.s_hi);
    assert!(cert.phi_bounds.0.is_sign_positive() && !cert.phi_bounds.0.is_zero());
    assert!(cert.width().to_f64() < 2f64.powi(-24));
    assert!(cert.digits.len() >= cert.certified_digits);
    let floats = [&cert.s_lo, &cert.s_hi, &cert.s0, &cert.lambda_s0, &cert.phi_bounds.0, &cert.phi_bounds.1];
    let more = [&cert.discrepancy.0, &cert.discrepancy.1, &cert.pointwise_err, &cert.approx_error, &cert.vnorm];
    assert!(floats.iter().chain(more.iter()).all(|x| x.prec() == p));

    // Cross-validation: just outside the bracket the sup/inf test decides.
    let delta = parse(p, "1e-6");
    let above = Float::with_val(p, &cert.s_hi + &delta);
    let below = Float::with_val(p, &cert.s_lo - &delta);
    let one = Float::with_val(p, 1);
    for (s, want) in [(above, RadiusVerdict::UpperConfirmed), (below, RadiusVerdict::LowerConfirmed)] {
        let e = eigen_at(&est.params, &s, Some(&est.eigen)).unwrap();
        let params = est.params.with_s(&Interval::point(s.clone())).unwrap();
        let phi = phi_from_values(&params, &e.phi_values);
        let (v, _) = spectral_radius_bounds(&params, &phi, &one).unwrap();
        assert_eq!(v, want, "s = {}", s.to_f64());
    }
}

#[test]
fn radius_bounds_at_range_ends() {
    let cfg = CertifyConfig { k: Some(16), ..CertifyConfig::new(40) };
    let c = AprioriConstants::default();
    let template = cfg.template(&c).unwrap();
    let p = template.prec();
    // Range ends rounded inward, so s stays in the verified range.
    let lo = AprioriConstants::exact(1.30, p).hi().clone();
    let hi = AprioriConstants::exact(1.31, p).lo().clone();
    for (s, lambda, want) in [
        (hi, 1.0, RadiusVerdict::UpperConfirmed),
        (lo, 1.0, RadiusVerdict::LowerConfirmed),
        (parse(p, "1.305"), 10.0, RadiusVerdict::UpperConfirmed),
    ] {
        let e = eigen_at(&template, &s, None).unwrap();
        let params = template.with_s(&Interval::point(s.clone())).unwrap();
        let phi = phi_from_values(&params, &e.phi_values);
        let l = Float::with_val(p, lambda);
        let (v, d) = spectral_radius_bounds(&params, &phi, &l).unwrap();
        assert_eq!(v, want, "s = {}, λ = {lambda}", s.to_f64());
        assert!(d.approx_error.is_finite() && d.phi_bounds.0 > 0);
    }
}

#[test]
fn non_positive_test_function_is_rejected() {
    let cfg = CertifyConfig { k: Some(4), ..CertifyConfig::new(30) };
    let params = cfg.template(&AprioriConstants::default()).unwrap();
    let p = params.prec();
    // φ = T_1(x): changes sign on the square.
    let phi = gasket_core::chebyshev::ChebCoeffs2D::unit(4, p, 1, 0);
    let r = spectral_radius_bounds(&params, &phi, &Float::with_val(p, 1));
    assert!(matches!(r, Err(Error::PositivityFailure(_))));
}

#[test]
fn failed_reports_block_certification() {
    let c = AprioriConstants::default();
    let mk = |claim, passed| VerificationReport {
        claim,
        n_range: String::new(),
        boxes: 1,
        slack: if passed { 0.1 } else { f64::NAN },
        passed,
        constants: c,
        subdivision: 40,
        prec: 64,
        message: String::new(),
    };
    let good: Vec<_> = Claim::ALL.iter().map(|&cl| mk(cl, true)).collect();
    assert!(VerifiedConstants::from_reports(c, &good).is_ok());
    let mut bad = good.clone();
    bad[2] = mk(Claim::OperatorNorm, false);
    assert!(matches!(VerifiedConstants::from_reports(c, &bad), Err(Error::Unverified(_))));
    let other = AprioriConstants { w: 2.0, ..c };
    assert!(VerifiedConstants::from_reports(other, &good).is_err());
    assert!(VerifiedConstants::from_reports(c, &good[..3]).is_err());
}

#[test]
fn config_rejects_tiny_precision_targets() {
    let cfg = CertifyConfig::new(10);
    assert!(cfg.template(&AprioriConstants::default()).is_err());
    // K = 1 has no interpolation error bound.
    let cfg = CertifyConfig { k: Some(1), ..CertifyConfig::new(200) };
    assert_eq!(cfg.order(&AprioriConstants::default()), 1);
    assert!(matches!(cfg.template(&AprioriConstants::default()), Err(Error::Parameter(_))));
}
