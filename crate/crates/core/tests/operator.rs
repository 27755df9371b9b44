use gasket_core::chebyshev::{cheb_nodes_interval, hardy_norm_bound, ChebCoeffs2D, ChebGrid2D};
use gasket_core::euler_maclaurin::PlanOverrides;
use gasket_core::ifs::{Ifs, Sign};
use gasket_core::operator::*;
use gasket_core::rigor::{default_precision, Interval};
use rug::Float;

const EPS_BITS: u32 = 34;

fn params(k: usize, y_even: bool, s: &str) -> OperatorParams {
    let p = default_precision(EPS_BITS);
    let s = Interval::from_decimal(p, s).unwrap();
    OperatorParams::build(&s, k, 2f64.powi(-(EPS_BITS as i32)), AprioriConstants::default(), y_even, p, &PlanOverrides::default())
        .unwrap()
}

fn constant(k: usize, p: u32, c: i64) -> ChebCoeffs2D {
    let mut phi = ChebCoeffs2D::zeros(k, p);
    phi.set(0, 0, Interval::from_i64(p, c));
    phi
}

fn tol(x: &Interval, err: &Float) -> f64 {
    x.width().to_f64() + err.to_f64()
}

#[test]
fn row_sums_equal_constant_function_values() {
    // Σ_k ℓ_k ≡ 1, so each row sums to (𝒜_s 1)(x_j).
    let k = 5;
    let pr = params(k, false, "1.305");
    let p = pr.prec();
    let a = assemble_matrix(&pr).unwrap();
    let one = constant(k, p, 1);
    let h = Float::with_val(p, 1);
    let nodes = cheb_nodes_interval(k, p);
    let err = pointwise_error(&pr, &h).unwrap();
    for (r, &(j1, j2)) in pr.row_nodes().iter().enumerate() {
        let sum = Float::with_val(p, Float::sum(a.row(r).iter())).to_f64();
        let v = apply_pointwise(&pr, &one, &nodes[j1], &nodes[j2], &h).unwrap();
        assert!((sum - v.mid_f64()).abs() <= tol(&v, &err) + 1e-12, "row {r}: {sum} vs {}", v.mid_f64());
    }
}

/// `Σ_{n≥0} Σ_± J_n^±(0,0)^s`: a long partial sum, plus the tail bracketed by
/// `n²J ∈ c` for `n > n0` and integral comparison.
fn brute_force_at_origin(s: f64, n0: u64, p: u32) -> Interval {
    let ifs = Ifs::new(p);
    let si = Interval::from_f64(p, s);
    let z = Interval::zero(p);
    let mut total = Interval::zero(p);
    for n in 0..=n0 {
        for sign in Sign::BOTH {
            let j = ifs.j_real(sign, &Interval::from_i64(p, n as i64), &z, &z).unwrap();
            total = &total + &j.pow(&si).unwrap();
        }
    }
    let t = Interval::from_bounds(Float::new(p), Interval::one(p).div(&Interval::from_i64(p, n0 as i64 + 1)).unwrap().hi().clone());
    let beta = &si.mul_2si(1) - &Interval::one(p);
    for sign in Sign::BOTH {
        let c = ifs.scaled_jacobian_real_t(sign, &t, &z, &z).unwrap();
        let cs = c.pow(&si).unwrap();
        // Σ_{n>n0} n^{−2s} ∈ [(n0+1)^{−β}/β, n0^{−β}/β].
        let lo = Interval::from_i64(p, n0 as i64 + 1).pow(&-&beta).unwrap().div(&beta).unwrap();
        let hi = Interval::from_i64(p, n0 as i64).pow(&-&beta).unwrap().div(&beta).unwrap();
        let tail = Interval::from_bounds((&Interval::point(cs.lo().clone()) * &lo).lo().clone(), (&Interval::point(cs.hi().clone()) * &hi).hi().clone());
        total = &total + &tail;
    }
    total
}

#[test]
fn order_one_matrix_matches_brute_force_sum() {
    let pr = params(1, false, "1.305");
    let p = pr.prec();
    let a = assemble_matrix(&pr).unwrap();
    let one = constant(1, p, 1);
    let h = Float::with_val(p, 1);
    let z = Interval::zero(p);
    let v = apply_pointwise(&pr, &one, &z, &z, &h).unwrap();
    let brute = brute_force_at_origin(1.305, 20_000, p);
    assert!(v.overlaps(&brute), "EM {v} vs brute force {brute}");
    let entry = a.get(0, 0).to_f64();
    assert!((entry - brute.mid_f64()).abs() <= brute.width().to_f64() + v.width().to_f64());
}

#[test]
fn y_even_matrix_matches_symmetrised_full_matrix() {
    let k = 5;
    let full = assemble_matrix(&params(k, false, "1.305")).unwrap();
    let even = assemble_matrix(&params(k, true, "1.305")).unwrap();
    let p = full.prec;
    let h = k.div_ceil(2);
    let v: Vec<Float> = (0..k * k)
        .map(|i| {
            let (j1, j2) = (i / k, i % k);
            let jj = j2.min(k - 1 - j2);
            Float::with_val(p, 1.0 + 0.1 * j1 as f64 + 0.37 * jj as f64)
        })
        .collect();
    let half: Vec<Float> = (0..k).flat_map(|j1| (0..h).map(move |j2| (j1, j2))).map(|(j1, j2)| v[j1 * k + j2].clone()).collect();
    let af = full.matvec(&v);
    let ae = even.matvec(&half);
    for j1 in 0..k {
        for j2 in 0..h {
            let d = (af[j1 * k + j2].to_f64() - ae[j1 * h + j2].to_f64()).abs();
            assert!(d < 1e-20, "({j1},{j2}): {d:e}");
        }
    }
}

#[test]
fn grid_application_is_consistent_linear_and_positive() {
    let k = 4;
    let pr = params(k, true, "1.305");
    let p = pr.prec();
    let ones = ChebGrid2D::from_fn(k, p, |_, _| Interval::one(p));
    let g1 = apply_to_grid(&pr, &ones).unwrap();
    let nodes = cheb_nodes_interval(k, p);
    let one = constant(k, p, 1);
    let h = hardy_norm_bound(&one, pr.constants.r_small);
    for j1 in 0..k {
        for j2 in 0..k {
            let v = apply_pointwise(&pr, &one, &nodes[j1], &nodes[j2], &h).unwrap();
            assert!(v.overlaps(g1.get(j1, j2)));
            assert!(g1.get(j1, j2).is_positive());
        }
    }
    // A y-even positive function: 2 + x + y².
    let f = ChebGrid2D::from_fn(k, p, |x, y| &(&Interval::from_i64(p, 2) + x) + &y.sqr());
    let three_f = ChebGrid2D { k, values: f.values.iter().map(|v| v.mul_f64(3.0)).collect() };
    let a = apply_to_grid(&pr, &f).unwrap();
    let b = apply_to_grid(&pr, &three_f).unwrap();
    for (x, y) in a.values.iter().zip(&b.values) {
        assert!(x.mul_f64(3.0).overlaps(y));
        assert!(x.is_positive());
    }
}

#[test]
fn response_to_s_is_within_linear_bounds() {
    let k = 4;
    let (s0, s1) = ("1.302", "1.308");
    let a0 = params(k, false, s0);
    let a1 = params(k, false, s1);
    let p = a0.prec();
    let one = constant(k, p, 1);
    let h = Float::with_val(p, 1);
    let c = AprioriConstants::default();
    let ds = 0.006;
    for (x, y) in [(0.0, 0.0), (0.5, -0.3), (-0.9, 0.9), (0.99, 0.1)] {
        let (xi, yi) = (Interval::from_f64(p, x), Interval::from_f64(p, y));
        let v0 = apply_pointwise(&a0, &one, &xi, &yi, &h).unwrap();
        let v1 = apply_pointwise(&a1, &one, &xi, &yi, &h).unwrap();
        let slack = v0.width().to_f64() + v1.width().to_f64();
        assert!(v1.hi().to_f64() <= v0.hi().to_f64() - c.d_plus * ds + slack, "decrease too small at ({x},{y})");
        assert!(v1.lo().to_f64() >= v0.lo().to_f64() - c.d_minus * ds - slack, "decrease too large at ({x},{y})");
    }
}

#[test]
fn s_outside_verified_range_is_rejected() {
    let pr = params(2, false, "1.32");
    let p = pr.prec();
    let z = Interval::zero(p);
    assert!(apply_pointwise(&pr, &constant(2, p, 1), &z, &z, &Float::with_val(p, 1)).is_err());
}

#[test]
fn order_from_epsilon() {
    assert_eq!(chebyshev_order(2f64.powi(-60), 1.4), 30);
    assert_eq!(chebyshev_order(2f64.powi(-40), 1.4), 20);
}
