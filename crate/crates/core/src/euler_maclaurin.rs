//! Euler–Maclaurin acceleration of `Σ_{n≥0} ψ(n)` with certified error bounds.
//!
//! The sum is split as
//!
//! ```text
//! Σ_{n≥0} ψ(n) = Σ_{n<N} ψ(n) + ½ψ(N) + ∫_N^∞ ψ − D(L,N) + R(L,N),
//! D(L,N) = Σ_{l=1}^{L} B_{2l}/(2l)! · ψ^{(2l−1)}(N).
//! ```
//!
//! The odd derivatives are read off from `M` samples on a circle of radius
//! `τ = (N−ν)/e` around `N`; the integral from `Mp` samples on the circle
//! `|z| = N` of `ψ̃(z) = z^{2s}ψ(z)`, which is analytic at infinity. Both
//! become weighted point sums with precomputed nodes and weights.

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::rigor::{CInterval, Interval};

/// Exact Bernoulli numbers `B_0, …, B_{max}`.
#[derive(Clone, Debug)]
pub struct BernoulliTable {
    values: Vec<Rational>,
}

impl BernoulliTable {
    /// Standard recurrence `Σ_{j≤m} C(m+1, j) B_j = 0`.
    pub fn new(max: usize) -> Self {
        let mut values: Vec<Rational> = Vec::with_capacity(max + 1);
        values.push(Rational::from(1));
        for m in 1..=max {
            if m > 1 && m % 2 == 1 {
                values.push(Rational::new());
                continue;
            }
            let mut acc = Rational::new();
            for (j, b) in values.iter().enumerate() {
                if b.cmp0() == std::cmp::Ordering::Equal {
                    continue;
                }
                let c = Integer::from(Integer::binomial_u(m as u32 + 1, j as u32));
                acc += Rational::from(c) * b;
            }
            let b = -acc / Rational::from(m as u32 + 1);
            values.push(b);
        }
        BernoulliTable { values }
    }

    pub fn b(&self, k: usize) -> &Rational {
        &self.values[k]
    }

    /// `B_{2l}`.
    pub fn even(&self, l: usize) -> &Rational {
        &self.values[2 * l]
    }

    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }
}

/// Precomputed quadrature for one `(N, L, M, Mp, ν, s)`.
///
/// Index conventions: `z_m`, `c_m` for `m = 1..M` are stored at `m − 1`;
/// `zp_k`, `cp_k` for `k = 0..Mp−1`. Both node sets come in conjugate pairs
/// (`m ↔ M+1−m`, `k ↔ Mp−1−k`) with conjugate weights.
#[derive(Clone, Debug)]
pub struct EMPlan {
    pub n: u64,
    pub l: usize,
    pub m: usize,
    pub mp: usize,
    pub nu: f64,
    pub s: Interval,
    pub prec: u32,
    pub tau: Interval,
    pub z_m: Vec<CInterval>,
    pub c_m: Vec<CInterval>,
    pub zp_k: Vec<CInterval>,
    pub cp_k: Vec<CInterval>,
    /// Total of remainder, derivative and integral bounds for unit `C` and `C̃`.
    pub err_budget: Float,
}

/// Parameter choice `(N, L, M, Mp)` for target `ε` and radius `ν`.
pub fn plan_parameters(epsilon: f64, nu: f64) -> Result<(u64, usize, usize, usize)> {
    if !(epsilon > 0.0 && epsilon < 2f64.powi(-20)) {
        return Err(Error::Parameter(format!("epsilon must lie in (0, 2^-20), got {epsilon:e}")));
    }
    if !(nu >= 1.0) {
        return Err(Error::Parameter(format!("nu must be ≥ 1, got {nu}")));
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let ln_eps = epsilon.ln();
    let n = (nu - ln_eps / two_pi).ceil();
    let l = ((two_pi * (n - nu) - 1.0) / 2.0).floor();
    let mp = 2.0 * (-ln_eps / (2.0 * (n / nu).ln())).ceil();
    Ok((n as u64, l as usize, 2 * l as usize, mp as usize))
}

/// Builds the plan from the parameter rules.
pub fn make_plan(epsilon: f64, nu: f64, s: &Interval, prec: u32) -> Result<EMPlan> {
    let (n, l, m, mp) = plan_parameters(epsilon, nu)?;
    EMPlan::with_params(n, l, m, mp, nu, s, prec)
}

/// Optional replacements for individual plan parameters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PlanOverrides {
    pub n: Option<u64>,
    pub l: Option<usize>,
    pub m: Option<usize>,
    pub mp: Option<usize>,
}

/// [`make_plan`] with any overridden parameters substituted.
///
/// Overriding `L` alone keeps `M = 2L`.
pub fn make_plan_with(epsilon: f64, nu: f64, s: &Interval, prec: u32, o: &PlanOverrides) -> Result<EMPlan> {
    let (n, l, m, mp) = plan_parameters(epsilon, nu)?;
    let l2 = o.l.unwrap_or(l);
    let m2 = o.m.unwrap_or(if o.l.is_some() { 2 * l2 } else { m });
    EMPlan::with_params(o.n.unwrap_or(n), l2, m2, o.mp.unwrap_or(mp), nu, s, prec)
}

impl EMPlan {
    /// Builds a plan with explicit parameters (used for overrides).
    pub fn with_params(n: u64, l: usize, m: usize, mp: usize, nu: f64, s: &Interval, prec: u32) -> Result<EMPlan> {
        let sigma_f = n as f64 - nu;
        if !(sigma_f > 0.0) {
            return Err(Error::Parameter(format!("need N > nu (N={n}, nu={nu})")));
        }
        if l < 1 || m < 2 * l || mp < 1 {
            return Err(Error::Parameter(format!("need L ≥ 1, M ≥ 2L, Mp ≥ 1 (L={l}, M={m}, Mp={mp})")));
        }
        if m % 2 != 0 || mp % 2 != 0 {
            return Err(Error::Parameter(format!("M and Mp must be even for conjugate pairing (M={m}, Mp={mp})")));
        }
        let lhs = 2.0 * l as f64 - 1.0;
        if !(lhs < 2.0 * std::f64::consts::E * std::f64::consts::PI * sigma_f) {
            return Err(Error::Parameter(format!("2L−1 < 2eπ(N−ν) fails (L={l}, N={n}, nu={nu})")));
        }
        if !(*s.lo() > 0.5) {
            return Err(Error::Parameter("exponent s must exceed 1/2".into()));
        }
        let prec = prec.max(crate::rigor::MIN_PRECISION);
        let s = s.with_prec(prec);
        let pi = Interval::pi(prec);
        let nu_i = Interval::from_f64(prec, nu);
        let n_i = Interval::from_i64(prec, n as i64);
        let sigma = &n_i - &nu_i;
        let tau = sigma.div(&Interval::one(prec).exp())?;

        // angle(j) = π·j/M, reduced mod 2M.
        let angle = |j: i64, den: usize| -> Interval {
            let j = j.rem_euclid(2 * den as i64);
            (&pi * &Interval::from_i64(prec, j)).div(&Interval::from_i64(prec, den as i64)).expect("den > 0")
        };

        let bern = BernoulliTable::new(2 * l);
        let mut z_m = Vec::with_capacity(m);
        let mut c_m = Vec::with_capacity(m);
        let inv_tau = tau.recip()?;
        let inv_tau_sq = inv_tau.sqr();
        for mm in 1..=m {
            let e = CInterval::cis(&angle(2 * mm as i64 - 1, m));
            z_m.push(&CInterval::real(n_i.clone()) + &e.mul_real(&tau));
            let mut acc = CInterval::zero(prec);
            let mut tpow = inv_tau.clone();
            for ll in 1..=l {
                let coef = Interval::from_rational(prec, bern.even(ll)).div(&Interval::from_i64(prec, 2 * ll as i64))?;
                let w = &coef * &tpow;
                let ang = angle(-((2 * ll as i64 - 1) * (2 * mm as i64 - 1)), m);
                acc = &acc + &CInterval::cis(&ang).mul_real(&w);
                tpow = &tpow * &inv_tau_sq;
            }
            c_m.push(acc);
        }

        let two_s_m1 = &s.mul_2si(1) - &Interval::one(prec);
        let n_pow = n_i.pow(&(&Interval::one(prec) - &s.mul_2si(1)))?;
        let inv_p: Vec<Interval> = (0..mp)
            .map(|p| Interval::one(prec).div(&(&Interval::from_i64(prec, p as i64) + &two_s_m1)))
            .collect::<Result<_>>()?;
        let mut zp_k = Vec::with_capacity(mp);
        let mut cp_k = Vec::with_capacity(mp);
        for k in 0..mp {
            let th = 2 * k as i64 + 1;
            let e = CInterval::cis(&angle(-th, mp));
            zp_k.push(e.mul_real(&n_i));
            let mut acc = CInterval::zero(prec);
            for (p, ip) in inv_p.iter().enumerate() {
                let ang = angle(-(p as i64) * th, mp);
                acc = &acc + &CInterval::cis(&ang).mul_real(ip);
            }
            cp_k.push(acc.mul_real(&n_pow));
        }

        let mut plan = EMPlan {
            n,
            l,
            m,
            mp,
            nu,
            s,
            prec,
            tau,
            z_m,
            c_m,
            zp_k,
            cp_k,
            err_budget: Float::new(prec),
        };
        let one = Float::with_val(prec, 1);
        let r = remainder_bound(l, n, nu, &one)?;
        let d = plan.derivative_error(&one)?;
        let i = plan.integral_error(&one)?;
        plan.err_budget = (&Interval::point(r) + &Interval::point(d) + Interval::point(i)).hi().clone();
        Ok(plan)
    }

    /// `|z_m − N|`, which equals `τ = (N−ν)/e`.
    pub fn sigma(&self) -> Interval {
        &Interval::from_i64(self.prec, self.n as i64) - &Interval::from_f64(self.prec, self.nu)
    }

    /// Error of the node sum for `D(L,N)` when `|ψ| ≤ c` on `Re z ≥ ν`.
    ///
    /// The larger of the closed-form bound and the direct sum
    /// `c/(e^M − 1)·Σ_l |B_{2l}|/(2l·σ^{2l−1})` is returned; the latter is the
    /// lemma's bound term by term, the former is kept for comparison.
    pub fn derivative_error(&self, c: &Float) -> Result<Float> {
        let p = self.prec;
        let sigma = self.sigma();
        let c_i = Interval::point(Float::with_val(p, c));
        let em1 = &Interval::from_i64(p, self.m as i64).exp() - &Interval::one(p);
        let bern = BernoulliTable::new(2 * self.l);
        let mut sum = Interval::zero(p);
        let inv_s = sigma.recip()?;
        let inv_s2 = inv_s.sqr();
        let mut pw = inv_s.clone();
        for ll in 1..=self.l {
            let b = Interval::from_rational(p, bern.even(ll)).abs();
            sum = &sum + &(&b * &pw).div(&Interval::from_i64(p, 2 * ll as i64))?;
            pw = &pw * &inv_s2;
        }
        let direct = (&c_i * &sum).div(&em1)?;
        let pi = Interval::pi(p);
        let e = Interval::one(p).exp();
        let ratio = (&(&pi.mul_2si(1) * &e) * &sigma).div(&Interval::from_i64(p, 2 * self.l as i64 - 1))?;
        let den = &ratio.sqr() - &Interval::one(p);
        let closed = if den.is_positive() {
            let pre = (&(&pi.sqr() * &e) * &sigma).div(&Interval::from_i64(p, 6))?;
            (&pre.div(&den)? * &c_i).div(&em1)?
        } else {
            Interval::point(Float::with_val(p, rug::float::Special::Infinity))
        };
        Ok(if closed.hi() > direct.hi() && closed.hi().is_finite() {
            closed.hi().clone()
        } else {
            direct.hi().clone()
        })
    }

    /// Error of the node sum for `∫_N^∞ ψ` when `|ψ̃(1/w)| ≤ c̃` on `|w| < 1/ν`.
    pub fn integral_error(&self, c_tilde: &Float) -> Result<Float> {
        let p = self.prec;
        let n_i = Interval::from_i64(p, self.n as i64);
        let q = Interval::from_f64(p, self.nu).div(&n_i)?;
        let one = Interval::one(p);
        let two_s_m1 = &self.s.mul_2si(1) - &one;
        let n_pow = n_i.pow(&(&one - &self.s.mul_2si(1)))?;
        let geo = &one.div(&q)?.powi(self.mp as u32) - &one;
        let num = (&n_pow * &Interval::point(Float::with_val(p, c_tilde))).mul_2si(1);
        let den = &(&two_s_m1 * &(&one - &q)) * &geo;
        Ok(num.div(&den)?.hi().clone())
    }
}

/// `ζ(m) ≤ 1 + 2^{−m} + 2^{1−m}/(m−1)` for `m ≥ 2`.
fn zeta_upper(m: u32, prec: u32) -> Interval {
    let one = Interval::one(prec);
    let a = one.mul_2si(-(m as i32));
    let b = one.mul_2si(1 - m as i32).div(&Interval::from_i64(prec, m as i64 - 1)).expect("m ≥ 2");
    &(&one + &a) + &b
}

/// Bound on `R(L,N)` for `|ψ| ≤ c` on `Re z ≥ ν`:
/// `ζ(2L+1)·(2L+1)!·c / (L·(2π)^{2L+1}·(N−ν)^{2L})`, rounded upward.
///
/// The `ζ(2L+1)` factor comes from `sup|B̃_{2L+1}|/(2L+1)! ≤ 2ζ(2L+1)/(2π)^{2L+1}`
/// and is at most `1.25` as bounded here.
pub fn remainder_bound(l: usize, n: u64, nu: f64, c: &Float) -> Result<Float> {
    if l < 1 {
        return Err(Error::Parameter("L must be ≥ 1".into()));
    }
    if !((n as f64) > nu) {
        return Err(Error::Parameter(format!("need N > nu (N={n}, nu={nu})")));
    }
    let p = c.prec().max(crate::rigor::MIN_PRECISION).max(128);
    let sigma = &Interval::from_i64(p, n as i64) - &Interval::from_f64(p, nu);
    let k = 2 * l as u32 + 1;
    let fact = Interval::from_rational(p, &Rational::from(Integer::from(Integer::factorial(k))));
    let two_pi = Interval::pi(p).mul_2si(1);
    let den = &(&Interval::from_i64(p, l as i64) * &two_pi.powi(k)) * &sigma.powi(2 * l as u32);
    let v = (&(&fact * &zeta_upper(k, p)) * &Interval::point(Float::with_val(p, c))).div(&den)?;
    Ok(Float::with_val(c.prec().max(p), v.hi()))
}

/// Signature of summand handles.
pub trait Summand: Fn(&CInterval) -> Result<CInterval> + Sync {}
impl<F: Fn(&CInterval) -> Result<CInterval> + Sync> Summand for F {}

/// `ψ^{(k)}(z0)` from `M` samples on `|z − z0| = τ`, widened by the aliasing
/// bound `c·τ^M·k!/(σ^k(σ^M − τ^M))` valid when `|ψ| ≤ c` on `|z − z0| < σ`.
pub fn taylor_derivative_estimate(
    psi: impl Summand,
    z0: &CInterval,
    tau: &Interval,
    k: usize,
    m: usize,
    sigma: &Interval,
    c: &Float,
) -> Result<CInterval> {
    if m <= k {
        return Err(Error::Parameter(format!("need M > k (M={m}, k={k})")));
    }
    if !(tau.hi() < sigma.lo()) {
        return Err(Error::Parameter("need tau < sigma".into()));
    }
    let p = z0.prec().max(tau.prec());
    let pi = Interval::pi(p);
    let mut acc = CInterval::zero(p);
    for mm in 1..=m {
        let ang = |j: i64| {
            let j = j.rem_euclid(2 * m as i64);
            (&pi * &Interval::from_i64(p, j)).div(&Interval::from_i64(p, m as i64)).expect("m > 0")
        };
        let z = z0 + &CInterval::cis(&ang(2 * mm as i64 - 1)).mul_real(tau);
        let w = CInterval::cis(&ang(-(k as i64) * (2 * mm as i64 - 1)));
        acc = &acc + &(&w * &psi(&z)?);
    }
    let kf = Interval::from_rational(p, &Rational::from(Integer::from(Integer::factorial(k as u32))));
    let scale = kf.div(&(&Interval::from_i64(p, m as i64) * &tau.powi(k as u32)))?;
    let est = acc.mul_real(&scale);
    let tm = tau.powi(m as u32);
    let err = (&(&Interval::point(Float::with_val(p, c)) * &tm) * &kf)
        .div(&(&sigma.powi(k as u32) * &(&sigma.powi(m as u32) - &tm)))?;
    Ok(widen(&est, err.hi()))
}

/// Encloses `D(L,N)`, widened by [`EMPlan::derivative_error`] with bound `c`.
pub fn derivative_term(psi: impl Summand, plan: &EMPlan, c: &Float) -> Result<CInterval> {
    let mut acc = CInterval::zero(plan.prec);
    for (z, w) in plan.z_m.iter().zip(&plan.c_m) {
        acc = &acc + &(w * &psi(z)?);
    }
    let v = acc.mul_real(&Interval::one(plan.prec).div(&Interval::from_i64(plan.prec, plan.m as i64))?);
    Ok(widen(&v, &plan.derivative_error(c)?))
}

/// Encloses `∫_N^∞ ψ` from samples of `ψ̃(z) = z^{2s}ψ(z)` at the nodes `zp_k`,
/// widened by [`EMPlan::integral_error`] with bound `c_tilde`.
pub fn integral_term(psi_tilde: impl Summand, plan: &EMPlan, c_tilde: &Float) -> Result<CInterval> {
    let mut acc = CInterval::zero(plan.prec);
    for (z, w) in plan.zp_k.iter().zip(&plan.cp_k) {
        acc = &acc + &(w * &psi_tilde(z)?);
    }
    let v = acc.mul_real(&Interval::one(plan.prec).div(&Interval::from_i64(plan.prec, plan.mp as i64))?);
    Ok(widen(&v, &plan.integral_error(c_tilde)?))
}

/// Encloses `Σ_{n≥0} ψ(n)` as a complex rectangle.
pub fn accelerated_sum_complex(
    psi: impl Summand,
    psi_tilde: impl Summand,
    plan: &EMPlan,
    c: &Float,
    c_tilde: &Float,
) -> Result<CInterval> {
    let p = plan.prec;
    let mut head = CInterval::zero(p);
    for n in 0..plan.n {
        head = &head + &psi(&CInterval::from_i64(p, n as i64))?;
    }
    let half = psi(&CInterval::from_i64(p, plan.n as i64))?.mul_2si(-1);
    let d = derivative_term(&psi, plan, c)?;
    let i = integral_term(&psi_tilde, plan, c_tilde)?;
    let total = &(&(&head + &half) + &i) - &d;
    Ok(widen(&total, &remainder_bound(plan.l, plan.n, plan.nu, c)?))
}

/// Real part of [`accelerated_sum_complex`]; for summands real on the real
/// axis the imaginary part only carries the error bounds.
pub fn accelerated_sum(
    psi: impl Summand,
    psi_tilde: impl Summand,
    plan: &EMPlan,
    c: &Float,
    c_tilde: &Float,
) -> Result<Interval> {
    Ok(accelerated_sum_complex(psi, psi_tilde, plan, c, c_tilde)?.re)
}

/// Widens both components by `r ≥ 0`.
pub fn widen(z: &CInterval, r: &Float) -> CInterval {
    CInterval::new(z.re.inflate(r), z.im.inflate(r))
}

/// Closed-form and brute-force reference sums used to validate the scheme.
pub mod oracles {
    use super::*;

    /// Summand families `ψ(n) = (n+a)^{−2s}·r(n)` with `r` rational.
    #[derive(Clone, Copy, Debug, PartialEq, Eq)]
    pub enum Family {
        /// `r ≡ 1`.
        Pure,
        /// `r(n) = (n+3)/(n+2)`.
        Shifted,
        /// `r(n) = 1 + (n+a)^{−2}`.
        Bumped,
    }

    impl Family {
        pub const ALL: [Family; 3] = [Family::Pure, Family::Shifted, Family::Bumped];

        pub fn name(self) -> &'static str {
            match self {
                Family::Pure => "(n+a)^-2s",
                Family::Shifted => "(n+a)^-2s*(n+3)/(n+2)",
                Family::Bumped => "(n+a)^-2s*(1+(n+a)^-2)",
            }
        }

        /// `r(z)`.
        fn factor(self, z: &CInterval, a: &CInterval) -> Result<CInterval> {
            let p = z.prec();
            let one = CInterval::one(p);
            Ok(match self {
                Family::Pure => one,
                Family::Shifted => (z + &CInterval::from_i64(p, 3)).div(&(z + &CInterval::from_i64(p, 2)))?,
                Family::Bumped => &one + &(z + a).sqr().recip()?,
            })
        }

        /// `r(1/w)` written in `w`, analytic for `|w| < 1/ν`.
        fn factor_w(self, w: &CInterval, a: &CInterval) -> Result<CInterval> {
            let p = w.prec();
            let one = CInterval::one(p);
            Ok(match self {
                Family::Pure => one,
                Family::Shifted => (&one + &w.mul_real(&Interval::from_i64(p, 3)))
                    .div(&(&one + &w.mul_real(&Interval::from_i64(p, 2))))?,
                Family::Bumped => &one + &w.sqr().div(&(&one + &(w * a)).sqr())?,
            })
        }

        /// Upper bound of `|r|` on `Re z ≥ ν` (for `a ≥ 0`).
        fn factor_bound(self, a: f64, nu: f64) -> f64 {
            match self {
                Family::Pure => 1.0,
                Family::Shifted => 1.0 + 1.0 / (nu + 2.0),
                Family::Bumped => 1.0 + 1.0 / (nu + a).powi(2),
            }
        }

        /// Upper bound of `|r(1/w)|` on `|w| < 1/ν`.
        fn factor_w_bound(self, a: f64, nu: f64) -> f64 {
            match self {
                Family::Pure => 1.0,
                Family::Shifted => (1.0 + 3.0 / nu) / (1.0 - 2.0 / nu),
                Family::Bumped => 1.0 + 1.0 / (nu * nu * (1.0 - a / nu).powi(2)),
            }
        }
    }

    /// Certified accelerated sum of a family member.
    pub fn em_enclosure(family: Family, s: f64, a: i64, plan: &EMPlan) -> Result<Interval> {
        let p = plan.prec;
        let si = Interval::from_f64(p, s);
        if !plan.s.contains_interval(&si) {
            return Err(Error::Parameter(format!("plan exponent does not match s = {s}")));
        }
        let m2s = -&si.mul_2si(1);
        let ac = CInterval::from_i64(p, a);
        let psi = |z: &CInterval| -> Result<CInterval> {
            let base = z + &ac;
            Ok(&base.pow_real(&m2s)? * &family.factor(z, &ac)?)
        };
        let psi_tilde = |z: &CInterval| -> Result<CInterval> {
            // z^{2s}(z+a)^{−2s} = (1 + a/z)^{−2s}
            let w = z.recip()?;
            let base = &CInterval::one(p) + &(&w * &ac);
            Ok(&base.pow_real(&m2s)? * &family.factor_w(&w, &ac)?)
        };
        let nu = plan.nu;
        let af = a as f64;
        // Rounded bounds are padded by a relative 1e-12 to stay above the exact values.
        let c = (nu + af).powf(-2.0 * s) * family.factor_bound(af, nu) * (1.0 + 1e-12);
        let ct = (1.0 - af / nu).powf(-2.0 * s) * family.factor_w_bound(af, nu) * (1.0 + 1e-12);
        accelerated_sum(psi, psi_tilde, plan, &Float::with_val(p, c), &Float::with_val(p, ct))
    }

    /// `Σ_{n<terms} ψ(n)` plus an enclosure of the tail from monotone integral
    /// comparison: `∫_T^∞ g ≤ Σ_{n≥T} ψ(n) ≤ sup r·(g(T) + ∫_T^∞ g)` with
    /// `g(x) = (x+a)^{−2s}`. One entry per requested family.
    ///
    /// The partial sum runs in correctly rounded point arithmetic; each term
    /// carries at most four roundings and each addition one, so the sum is
    /// widened by `(terms + 8)·2^{1−prec}·|sum|`.
    pub fn brute_force_enclosures(families: &[Family], s: f64, a: i64, terms: u64, prec: u32) -> Result<Vec<Interval>> {
        let m2s = Float::with_val(prec, -2.0 * s);
        let mut sums = vec![Float::new(prec); families.len()];
        for n in 0..terms {
            let x = Float::with_val(prec, n as i64 + a);
            let g = Float::with_val(prec, rug::ops::Pow::pow(&x, &m2s));
            for (fam, acc) in families.iter().zip(sums.iter_mut()) {
                let term = match fam {
                    Family::Pure => g.clone(),
                    Family::Shifted => g.clone() * (n + 3) / (n + 2),
                    Family::Bumped => {
                        let x2 = Float::with_val(prec, &x * &x);
                        let r = Float::with_val(prec, 1) + Float::with_val(prec, x2.recip_ref());
                        g.clone() * r
                    }
                };
                *acc += term;
            }
        }
        let si = Interval::from_f64(prec, s);
        let ai = Interval::from_i64(prec, a);
        let one = Interval::one(prec);
        let t = &Interval::from_i64(prec, terms as i64) + &ai;
        let two_s_m1 = &si.mul_2si(1) - &one;
        let integral = t.pow(&(&one - &si.mul_2si(1)))?.div(&two_s_m1)?;
        let g_t = t.pow(&-&si.mul_2si(1))?;
        let mut out = Vec::with_capacity(families.len());
        for (fam, sum) in families.iter().zip(sums) {
            let r_sup = match fam {
                Family::Pure => one.clone(),
                Family::Shifted => &one + &(&Interval::from_i64(prec, terms as i64) + &Interval::from_i64(prec, 2)).recip()?,
                Family::Bumped => &one + &t.sqr().recip()?,
            };
            let upper = &r_sup * &(&g_t + &integral);
            let tail = Interval::new(integral.lo().clone(), upper.hi().clone())?;
            let mut rad = Float::with_val(prec, sum.abs_ref());
            rad *= terms + 8;
            rad >>= prec as i32 - 1;
            let head = Interval::point(sum).inflate(&rad);
            out.push(&head + &tail);
        }
        Ok(out)
    }

    /// Single-family form of [`brute_force_enclosures`].
    pub fn brute_force_enclosure(family: Family, s: f64, a: i64, terms: u64, prec: u32) -> Result<Interval> {
        Ok(brute_force_enclosures(&[family], s, a, terms, prec)?.remove(0))
    }

    /// `π²/6` enclosure from `ψ(n) = (n+1)^{−2}` and the plan's `ε`.
    pub fn basel(plan: &EMPlan) -> Result<Interval> {
        em_enclosure(Family::Pure, 1.0, 1, plan)
    }
}
