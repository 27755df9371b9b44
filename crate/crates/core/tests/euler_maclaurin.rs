use gasket_core::euler_maclaurin::oracles::{basel, brute_force_enclosures, em_enclosure, Family};
use gasket_core::euler_maclaurin::*;
use gasket_core::rigor::{CInterval, Interval};
use proptest::prelude::*;
use rug::{Float, Integer, Rational};

const P: u32 = 128;

fn plan(eps_bits: i32, s: f64) -> EMPlan {
    make_plan(2f64.powi(-eps_bits), 10.0, &Interval::from_f64(P, s), P).unwrap()
}

#[test]
fn basel_sum_at_eps_60() {
    let plan = plan(60, 1.0);
    assert!(plan.err_budget.to_f64() <= 2f64.powi(-50), "budget {}", plan.err_budget);
    let v = basel(&plan).unwrap();
    let pi2_6 = Interval::pi(P).sqr().div(&Interval::from_i64(P, 6)).unwrap();
    assert!(v.contains_interval(&pi2_6), "{v:?}");
    assert!(v.width().to_f64() < 1e-15);
}

#[test]
fn brute_force_families() {
    for s in [1.0, 1.3, 1.5] {
        let plan = plan(60, s);
        for a in [1, 2] {
            let bfs = brute_force_enclosures(&Family::ALL, s, a, 1_000_000, 64).unwrap();
            for (fam, bf) in Family::ALL.into_iter().zip(bfs) {
                let em = em_enclosure(fam, s, a, &plan).unwrap();
                assert!(em.overlaps(&bf), "{} s={s} a={a}: em {em:?} brute {bf:?}", fam.name());
            }
        }
    }
}

#[test]
fn derivative_term_matches_symbolic_odd_derivatives() {
    // ψ(z) = z^{-2}, ψ^{(k)}(z) = (−1)^k (k+1)! z^{−k−2}
    let s = Interval::from_f64(P, 1.0);
    let (_, l, m, mp) = plan_parameters(2f64.powi(-60), 10.0).unwrap();
    let plan = EMPlan::with_params(20, l, m, mp, 10.0, &s, P).unwrap();
    let psi = |z: &CInterval| z.sqr().recip();
    let c = Float::with_val(P, 0.01);
    let d = derivative_term(psi, &plan, &c).unwrap();
    let bern = BernoulliTable::new(2 * plan.l);
    let mut exact = Rational::new();
    for ll in 1..=plan.l {
        let k = 2 * ll as u32 - 1;
        let num = Rational::from(Integer::from(Integer::factorial(k + 1))) * bern.even(ll);
        let den = Rational::from(Integer::from(Integer::factorial(2 * ll as u32)))
            * Rational::from(Integer::from(Integer::u_pow_u(20, k + 2)));
        exact -= num / den;
    }
    let ex = Interval::from_rational(P, &exact);
    assert!(d.re.contains_interval(&ex), "{d:?} vs {ex:?}");
    assert!(d.im.contains_zero());
}

#[test]
fn derivative_term_of_constant_contains_zero() {
    let plan = plan(60, 1.3);
    let d = derivative_term(|z: &CInterval| Ok(CInterval::one(z.prec())), &plan, &Float::with_val(P, 1)).unwrap();
    assert!(d.contains_zero());
}

#[test]
fn derivative_error_scales_with_m() {
    let s = Interval::from_f64(P, 1.3);
    let a = EMPlan::with_params(20, 6, 12, 40, 10.0, &s, P).unwrap();
    let b = EMPlan::with_params(20, 6, 16, 40, 10.0, &s, P).unwrap();
    let one = Float::with_val(P, 1);
    let r = a.derivative_error(&one).unwrap().to_f64() / b.derivative_error(&one).unwrap().to_f64();
    assert!((r / 4f64.exp() - 1.0).abs() < 0.05, "ratio {r}");
}

#[test]
fn integral_term_closed_forms() {
    let s = 1.3;
    let si = Interval::from_f64(P, s);
    let plan = EMPlan::with_params(20, 6, 12, 40, 10.0, &si, P).unwrap();
    let one = Float::with_val(P, 1);
    let n = Interval::from_i64(P, 20);
    let two_s = si.mul_2si(1);
    // φ ≡ 1
    let i1 = integral_term(|z: &CInterval| Ok(CInterval::one(z.prec())), &plan, &one).unwrap();
    let ex1 = n.pow(&(&Interval::one(P) - &two_s)).unwrap().div(&(&two_s - &Interval::one(P))).unwrap();
    assert!(i1.re.contains_interval(&ex1));
    // φ(w) = w
    let ct = Float::with_val(P, 0.1);
    let i2 = integral_term(|z: &CInterval| z.recip(), &plan, &ct).unwrap();
    let ex2 = n.pow(&-&two_s).unwrap().div(&two_s).unwrap();
    assert!(i2.re.contains_interval(&ex2), "{i2:?} vs {ex2:?}");
    // the bound shrinks by about (ν/N)² per extra node pair
    let b = EMPlan::with_params(20, 6, 12, 42, 10.0, &si, P).unwrap();
    let r = b.integral_error(&one).unwrap().to_f64() / plan.integral_error(&one).unwrap().to_f64();
    assert!((r / 0.25 - 1.0).abs() < 1e-6, "ratio {r}");
}

#[test]
fn taylor_derivative_examples() {
    let c = Float::with_val(P, 10);
    let v = taylor_derivative_estimate(
        |z: &CInterval| (&CInterval::one(z.prec()) - z).recip(),
        &CInterval::zero(P),
        &Interval::from_f64(P, 0.3),
        4,
        24,
        &Interval::from_f64(P, 0.9),
        &c,
    )
    .unwrap();
    assert!(v.contains_f64(24.0, 0.0));
    // ψ = z^M aliases exactly onto k = 0 with magnitude τ^M (sign −1 from the half shift).
    let m = 8;
    let tau = Interval::from_f64(P, 0.5);
    let v = taylor_derivative_estimate(
        |z: &CInterval| Ok(z.sqr().sqr().sqr()),
        &CInterval::zero(P),
        &tau,
        0,
        m,
        &Interval::from_f64(P, 1.0),
        &Float::with_val(P, 1),
    )
    .unwrap();
    let alias = -tau.powi(m as u32).mid_f64();
    assert!(v.re.contains_f64(alias));
    let half = v.re.width().to_f64() / 2.0;
    let predicted = 0.5f64.powi(8) / (1.0 - 0.5f64.powi(8));
    assert!((half / predicted - 1.0).abs() < 1e-9);
}

#[test]
fn remainder_near_optimal_l() {
    let one = Float::with_val(P, 1);
    let best = (1..200).min_by(|&a, &b| {
        remainder_bound(a, 60, 10.0, &one).unwrap().partial_cmp(&remainder_bound(b, 60, 10.0, &one).unwrap()).unwrap()
    });
    let b = best.unwrap();
    let at = |l| remainder_bound(l, 60, 10.0, &one).unwrap().to_f64();
    assert!(at(b) < at(b + 3) && at(b) < at(b - 3));
    assert!((b as f64 - std::f64::consts::PI * 50.0).abs() < 3.0, "best L {b}");
}

#[test]
fn nodes_conjugate_and_real_summand_has_real_sum() {
    let plan = plan(60, 1.3);
    for k in 0..plan.m {
        assert!(plan.z_m[k].overlaps_conj(&plan.z_m[plan.m - 1 - k]));
        assert!(plan.c_m[k].overlaps_conj(&plan.c_m[plan.m - 1 - k]));
    }
    for k in 0..plan.mp {
        assert!(plan.zp_k[k].overlaps_conj(&plan.zp_k[plan.mp - 1 - k]));
        assert!(plan.cp_k[k].overlaps_conj(&plan.cp_k[plan.mp - 1 - k]));
    }
    let s = Interval::from_f64(P, 1.3);
    let m2s = -&s.mul_2si(1);
    let psi = |z: &CInterval| (z + &CInterval::one(P)).pow_real(&m2s);
    let pt = |z: &CInterval| (&CInterval::one(P) + &z.recip()?).pow_real(&m2s);
    let v = accelerated_sum_complex(psi, pt, &plan, &Float::with_val(P, 1), &Float::with_val(P, 2)).unwrap();
    assert!(v.im.contains_zero());
}

// Known false: N is a ceiling in ln ε, so the budget is a staircase that
// drops by roughly e^{2π} once per unit step of N and stays flat in between.
#[test]
#[ignore = "staircase parameter rules; see err_budget_monotone_and_tracks_eps"]
fn err_budget_halves_with_eps() {
    let mut failures = Vec::new();
    for bits in 30..90 {
        let a = plan(bits, 1.3).err_budget.to_f64();
        let b = plan(bits + 1, 1.3).err_budget.to_f64();
        if b > a / 2.0 {
            failures.push((bits, a, b));
        }
    }
    assert!(failures.is_empty(), "halving eps did not halve err_budget at {failures:?}");
}

#[test]
fn err_budget_monotone_and_tracks_eps() {
    let mut prev = f64::INFINITY;
    let mut worst = 0f64;
    for bits in 30..160 {
        let pl = plan(bits, 1.3);
        let b = pl.err_budget.to_f64();
        assert!(b <= prev, "budget increased at {bits}");
        let r = b / 2f64.powi(-bits);
        // The derivative-error prefactor grows linearly in N − ν.
        let per_sigma = r / (pl.n as f64 - pl.nu);
        worst = worst.max(per_sigma);
        assert!(per_sigma <= 16.0, "budget {b:e} at {bits}");
        prev = b;
    }
    eprintln!("worst err_budget/(eps·(N−ν)) = {worst:.2}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn plan_invariants(bits in 21i32..300, nu in 1u32..20) {
        let eps = 2f64.powi(-bits);
        let plan = make_plan(eps, nu as f64, &Interval::from_f64(P, 1.3), P).unwrap();
        prop_assert!(2.0 * plan.l as f64 - 1.0 < 2.0 * std::f64::consts::E * std::f64::consts::PI * (plan.n as f64 - plan.nu));
        prop_assert!(plan.m >= 2 * plan.l && plan.n as f64 > plan.nu && plan.mp >= 1);
        prop_assert!(plan.err_budget.is_finite());
    }
}
