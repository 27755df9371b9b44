//! Interpolation error against the `E_{2,K}(R)` bound for functions whose
//! sup on the Bernstein ellipse is known in closed form.

use gasket_core::chebyshev::*;
use gasket_core::rigor::Interval;
use proptest::prelude::*;

const P: u32 = 160;
const R: f64 = 1.4;

struct TestFn {
    name: &'static str,
    f: fn(&Interval, &Interval) -> Interval,
    /// Upper bound of `|f|` on `E_R^{2,2}`.
    hardy: fn(f64) -> f64,
}

fn three() -> Interval {
    Interval::from_i64(P, 3)
}

// 1/(3 − x): sup at ρ₁ = R, z₁ = cosh R.
fn pole_x(x: &Interval, _y: &Interval) -> Interval {
    Interval::one(P).div(&(&three() - x)).unwrap()
}

// e^{x+y}: Re z ≤ cosh ρ, and cosh(R cos α) + cosh(R sin α) peaks at α = 0.
fn exp_sum(x: &Interval, y: &Interval) -> Interval {
    (x + y).exp()
}

// e^x/(3 − y): product of the two one-dimensional sups.
fn mixed(x: &Interval, y: &Interval) -> Interval {
    x.exp().div(&(&three() - y)).unwrap()
}

fn fns() -> Vec<TestFn> {
    vec![
        TestFn { name: "1/(3-x)", f: pole_x, hardy: |r| 1.0 / (3.0 - r.cosh()) },
        TestFn { name: "exp(x+y)", f: exp_sum, hardy: |r| (r.cosh() + 1.0).exp() },
        TestFn { name: "exp(x)/(3-y)", f: mixed, hardy: |r| r.cosh().exp() / (3.0 - r.cosh()) },
    ]
}

fn interpolate(k: usize, f: fn(&Interval, &Interval) -> Interval) -> ChebCoeffs2D {
    let grid = ChebGrid2D::from_fn(k, P, f);
    grid_to_coeffs(&grid)
}

#[test]
fn projection_error_dominates_measured_error() {
    let pts: Vec<Interval> = (0..200).map(|i| Interval::from_f64(P, -1.0 + 2.0 * (i as f64 + 0.5) / 200.0)).collect();
    for tf in fns() {
        for k in [8usize, 16, 32] {
            let c = interpolate(k, tf.f);
            let bound = projection_error(2, k, R, P).unwrap().to_f64() * (tf.hardy)(R);
            let mut worst = 0f64;
            for x in &pts {
                for y in &pts {
                    let e = (&eval_poly_real(&c, x, y) - &(tf.f)(x, y)).mag().to_f64();
                    worst = worst.max(e);
                }
            }
            assert!(worst <= bound, "{} K={k}: measured {worst:e} > bound {bound:e}", tf.name);
        }
    }
}

#[test]
fn computed_coefficients_obey_decay_bound() {
    for tf in fns() {
        for k in [8usize, 16, 32] {
            let c = interpolate(k, tf.f);
            let h = (tf.hardy)(R);
            for k1 in 0..k {
                for k2 in 0..k {
                    let got = c.get(k1, k2).mag().to_f64();
                    let bound = coeff_decay_bound(k1, k2, R, h);
                    assert!(got <= bound, "{} K={k} ({k1},{k2}): |c| = {got:e} > {bound:e}", tf.name);
                }
            }
        }
    }
}

#[test]
fn hardy_bound_dominates_sup_on_ellipse_boundary() {
    // The coefficient-sum bound must exceed |p| at sampled points of ∂E_r.
    let k = 12;
    let c = interpolate(k, mixed);
    let r = 0.95;
    let h = hardy_norm_bound(&c, r).to_f64();
    for i in 0..24 {
        let a = std::f64::consts::PI * i as f64 / 23.0;
        for j in 0..12 {
            let th = std::f64::consts::PI * j as f64 / 11.0;
            let z = |kappa: f64| {
                gasket_core::rigor::CInterval::new(
                    Interval::from_f64(P, th.cos() * kappa.cosh()),
                    Interval::from_f64(P, -th.sin() * kappa.sinh()),
                )
            };
            let v = eval_poly(&c, &z(r * a.cos()), &z(r * a.sin()));
            assert!(v.abs().hi().to_f64() <= h);
        }
    }
}

#[test]
fn sup_inf_bounds_bracket_samples() {
    let c = interpolate(10, exp_sum);
    let (lo, hi) = sup_inf_bounds(&c);
    for i in 0..21 {
        for j in 0..21 {
            let x = Interval::from_f64(P, -1.0 + 0.1 * i as f64);
            let y = Interval::from_f64(P, -1.0 + 0.1 * j as f64);
            // At (1, 1) every T_k is 1 and the bound is attained.
            let v = eval_poly_real(&c, &x, &y).mid_f64();
            assert!(v >= lo.to_f64() - 1e-30 && v <= hi.to_f64() + 1e-30);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transform_round_trip(k in 2usize..9, seed in proptest::collection::vec(-1.0f64..1.0, 81)) {
        let mut c = ChebCoeffs2D::zeros(k, P);
        for k1 in 0..k {
            for k2 in 0..k {
                c.set(k1, k2, Interval::from_f64(P, seed[k1 * 9 + k2]));
            }
        }
        let back = grid_to_coeffs(&coeffs_to_grid(&c));
        for k1 in 0..k {
            for k2 in 0..k {
                prop_assert!((back.get(k1, k2) - c.get(k1, k2)).mag().to_f64() < 1e-40);
            }
        }
    }

    #[test]
    fn ellipse_radius_contains_point_value(th in 0.0f64..3.14, kappa in 0.0f64..2.0) {
        let w = gasket_core::rigor::CInterval::new(
            Interval::from_f64(P, th.cos() * kappa.cosh()),
            Interval::from_f64(P, -th.sin() * kappa.sinh()),
        );
        let r = ellipse_radius(&w);
        prop_assert!(r.lo().to_f64() <= kappa + 1e-12 && r.hi().to_f64() >= kappa - 1e-12);
    }
}
