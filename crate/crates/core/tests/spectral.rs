use gasket_core::chebyshev::{hardy_norm_bound, projection_error};
use gasket_core::certify::phi_from_values;
use gasket_core::euler_maclaurin::PlanOverrides;
use gasket_core::operator::{AprioriConstants, OperatorParams, TransferMatrix};
use gasket_core::rigor::{default_precision, Interval};
use gasket_core::spectral::*;
use gasket_core::Error;
use rug::Float;

const P: u32 = 128;

fn matrix(rows: &[&[f64]]) -> TransferMatrix {
    let dim = rows.len();
    TransferMatrix {
        k: 1,
        y_even: false,
        dim,
        prec: P,
        data: rows.iter().flat_map(|r| r.iter().map(|&x| Float::with_val(P, x))).collect(),
    }
}

#[test]
fn power_iteration_on_small_matrices() {
    let e = leading_eig(&matrix(&[&[2.0, 1.0], &[1.0, 2.0]]), None, &PowerOptions::for_precision(P)).unwrap();
    assert!((e.lambda.to_f64() - 3.0).abs() < 1e-25);
    assert!((e.vector[0].to_f64() - e.vector[1].to_f64()).abs() < 1e-25);

    let d = matrix(&[&[5.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 0.1]]);
    let e = leading_eig(&d, None, &PowerOptions::for_precision(P)).unwrap();
    assert!((e.lambda.to_f64() - 5.0).abs() < 1e-25);
    assert_eq!(e.vector[0].to_f64(), 1.0);
    assert!(e.vector[1].to_f64() < 1e-25 && e.vector[2].to_f64() < 1e-25);
}

#[test]
fn power_iteration_reports_missing_gap() {
    let swap = matrix(&[&[0.0, 1.0], &[1.0, 0.0]]);
    let start = [Float::with_val(P, 1), Float::with_val(P, 2)];
    let opts = PowerOptions { max_iter: 50, ..PowerOptions::for_precision(P) };
    assert!(matches!(leading_eig(&swap, Some(&start), &opts), Err(Error::NoConvergence(_))));
}

#[test]
fn secant_on_linear_map_is_exact() {
    let f = |s: &Float, _: Option<&()>| -> gasket_core::Result<(Float, ())> {
        Ok((Float::with_val(P, 2) - Float::with_val(P, s / 1.3), ()))
    };
    let eps = Float::with_val(P, 1e-30);
    let out = secant_search(f, Float::with_val(P, 1.30), Float::with_val(P, 1.31), &eps, 20).unwrap();
    assert!((out.s_star.to_f64() - 1.3).abs() < 1e-30);
    assert!(out.state.iterations <= 4);
}

#[test]
fn secant_rejects_increasing_lambda() {
    let f = |s: &Float, _: Option<&()>| -> gasket_core::Result<(Float, ())> { Ok((Float::with_val(P, s / 1.305), ())) };
    let eps = Float::with_val(P, 1e-30);
    let r = secant_search(f, Float::with_val(P, 1.30), Float::with_val(P, 1.31), &eps, 20);
    assert!(matches!(r, Err(Error::MonotonicityViolation(_))), "{r:?}");
}

fn template(k: usize, eps_bits: u32) -> OperatorParams {
    let p = default_precision(eps_bits);
    let s = Interval::from_decimal(p, "1.305").unwrap();
    OperatorParams::build(&s, k, 2f64.powi(-(eps_bits as i32)), AprioriConstants::default(), true, p, &PlanOverrides::default()).unwrap()
}

#[test]
fn assembled_operator_has_unit_eigenvalue_at_the_dimension() {
    let t = template(16, 40);
    let s = Float::with_val(t.prec(), Float::parse("1.3056867").unwrap());
    let e = eigen_at(&t, &s, None).unwrap();
    assert!((e.lambda.to_f64() - 1.0).abs() < 1e-4, "λ = {}", e.lambda.to_f64());
    assert!(e.phi_values.iter().all(|v| v.is_sign_positive() && !v.is_zero()));
    let sup = e.phi_values.iter().map(|v| v.to_f64()).fold(0.0, f64::max);
    assert!((sup - 1.0).abs() < 1e-12);
}

#[test]
fn lambda_decreases_in_s() {
    let t = template(8, 40);
    let p = t.prec();
    let mut last = f64::INFINITY;
    for s in ["1.30", "1.303", "1.306", "1.31"] {
        let l = eigen_at(&t, &Float::with_val(p, Float::parse(s).unwrap()), None).unwrap().lambda.to_f64();
        assert!(l < last, "λ({s}) = {l} not below {last}");
        last = l;
    }
}

#[test]
fn discretisation_consistency() {
    let c = AprioriConstants::default();
    for k in [8usize, 16] {
        let lo = template(k, 40);
        let hi = template(2 * k, 40);
        let s = Float::with_val(lo.prec(), Float::parse("1.3056").unwrap());
        let a = eigen_at(&lo, &s, None).unwrap();
        let b = eigen_at(&hi, &s, None).unwrap();
        let params = lo.with_s(&Interval::point(s.clone())).unwrap();
        let hardy = hardy_norm_bound(&phi_from_values(&params, &a.phi_values), c.r_small).to_f64();
        let bound = 2.0 * c.w * projection_error(2, k, c.r_big, 64).unwrap().to_f64() * hardy;
        let diff = (a.lambda.to_f64() - b.lambda.to_f64()).abs();
        assert!(diff <= bound, "K = {k}: |λ_K − λ_2K| = {diff:e} > {bound:e}");
    }
}

#[test]
fn secant_search_converges_quickly() {
    let t = template(20, 40);
    let eps = Float::with_val(t.prec(), Float::parse("1e-12").unwrap());
    let out = find_dimension(&t, &eps, 30).unwrap();
    assert!(out.state.iterations <= 10);
    let published: f64 = gasket_core::PUBLISHED_DIGITS.parse().unwrap();
    assert!((out.s_star.to_f64() - published).abs() < 1e-10, "s* = {}", out.s_star.to_f64());
    out.state.check_monotone().unwrap();
}
