//! Box verification of the analytic constants: single claims at modest
//! subdivision, and tightened constants that must fail.

use gasket_core::apriori::*;
use gasket_core::ifs::{Ifs, Sign};
use gasket_core::operator::AprioriConstants;
use gasket_core::rigor::Interval;
use gasket_core::Error;

fn base() -> AprioriConstants {
    AprioriConstants::default()
}

#[test]
fn inclusion_at_n0_coarse_grid_passes() {
    let r = verify_ellipse_inclusion_at(&base(), &AprioriConfig::with_subdivision(30), 0).unwrap();
    assert!(r.passed && r.slack > 0.0);
    assert_eq!(r.claim, Claim::EllipseInclusion);
}

#[test]
fn inclusion_refinement_is_monotone() {
    for n in [1u64, 7] {
        let a = verify_ellipse_inclusion_at(&base(), &AprioriConfig::with_subdivision(20), n).unwrap();
        let b = verify_ellipse_inclusion_at(&base(), &AprioriConfig::with_subdivision(40), n).unwrap();
        assert!(a.passed && b.passed);
    }
}

#[test]
fn small_target_ellipse_fails() {
    let c = AprioriConstants { r_small: 0.5, ..base() };
    let r = verify_ellipse_inclusion_at(&c, &AprioriConfig::with_subdivision(10), 0);
    assert!(matches!(r, Err(Error::VerificationFailed(_))), "{r:?}");
}

#[test]
fn radius_09_fails_at_n0() {
    // The image of the 1.4 ellipse under G_0 reaches radius ≈ 0.922.
    let c = AprioriConstants { r_small: 0.9, ..base() };
    let r = verify_ellipse_inclusion_at(&c, &AprioriConfig::default(), 0);
    assert!(matches!(r, Err(Error::VerificationFailed(_))), "{r:?}");
}

#[test]
fn single_box_is_too_coarse() {
    let r = verify_ellipse_inclusion_at(&base(), &AprioriConfig::with_subdivision(1), 0);
    assert!(matches!(r, Err(Error::SubdivisionTooCoarse(_))), "{r:?}");
}

#[test]
fn jacobian_maximum_at_n5() {
    let (max, r) = jacobian_max(&base(), &AprioriConfig::with_subdivision(30), 5).unwrap();
    assert!(r.passed);
    assert!(max.to_f64() <= 1.44);
    // 3/24 < 36/25, so the bound at n = 5 is 1.44.
    assert!(jacobian_bound(5, 64).contains_interval(&Interval::from_ratio(64, 36, 25)));
    assert!(jacobian_bound(0, 64).contains_f64(0.75));
    assert!((jacobian_bound(100, 64).mid_f64() - 3.0 / 404.0).abs() < 1e-15);
}

#[test]
fn jacobians_are_below_one_on_the_square() {
    // Hence every term log|J|·|J|^s of the response sum is negative.
    let p = 64;
    let ifs = Ifs::new(p);
    for n in 0..=30i64 {
        for i in 0..=20 {
            for j in 0..=20 {
                let x = Interval::from_f64(p, -1.0 + 0.1 * i as f64);
                let y = Interval::from_f64(p, -1.0 + 0.1 * j as f64);
                for sign in Sign::BOTH {
                    let jac = ifs.j_real(sign, &Interval::from_i64(p, n), &x, &y).unwrap();
                    assert!(jac.hi().to_f64() < 1.0, "n = {n}, ({x}, {y})");
                }
            }
        }
    }
}

#[test]
fn scaled_jacobian_limit_at_origin() {
    // n²J(0,0) → 16(2 − √3)/3 as n → ∞.
    let p = 128;
    let ifs = Ifs::new(p);
    let z = Interval::zero(p);
    let want = 16.0 * (2.0 - 3f64.sqrt()) / 3.0;
    for sign in Sign::BOTH {
        let v = ifs.scaled_jacobian_real_t(sign, &z, &z, &z).unwrap();
        assert!((v.mid_f64() - want).abs() < 1e-14);
        assert!(v.hi().to_f64() <= 6.8);
    }
}

#[test]
fn operator_norm_target_two_fails() {
    let c = AprioriConstants { w: 2.0, ..base() };
    let r = verify_w(&c, &AprioriConfig::with_subdivision(20));
    assert!(matches!(r, Err(Error::VerificationFailed(_))), "{r:?}");
}

#[test]
fn response_bounds_pass_and_tightened_d_plus_fails() {
    let r = verify_d_bounds(&base(), &AprioriConfig::default()).unwrap();
    assert!(r.passed && r.slack > 0.0);
    let c = AprioriConstants { d_plus: 1.5, ..base() };
    let r = verify_d_bounds(&c, &AprioriConfig::with_subdivision(10));
    assert!(matches!(r, Err(Error::VerificationFailed(_))), "{r:?}");
}

#[test]
fn claim_ids_round_trip() {
    for c in Claim::ALL {
        assert_eq!(Claim::from_id(c.id()), Some(c));
    }
    assert_eq!(Claim::from_id("nope"), None);
}

#[test]
fn invalid_configuration_is_rejected() {
    let cfg = AprioriConfig { subdivision: 0, ..Default::default() };
    assert!(matches!(verify_d_bounds(&base(), &cfg), Err(Error::Parameter(_))));
}
