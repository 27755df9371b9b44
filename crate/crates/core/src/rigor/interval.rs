use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::{Constant, Round};
use rug::ops::{AddAssignRound, AssignRound};
use rug::{Float, Rational};

use crate::error::{Error, Result};

/// Closed real interval `[lo, hi]` with MPFR endpoints.
#[derive(Clone, PartialEq)]
pub struct Interval {
    lo: Float,
    hi: Float,
}

#[inline]
fn down<T>(prec: u32, val: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, val, Round::Down).0
}

#[inline]
fn up<T>(prec: u32, val: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(prec, val, Round::Up).0
}

fn min_f(a: Float, b: Float) -> Float {
    if b < a {
        b
    } else {
        a
    }
}

fn max_f(a: Float, b: Float) -> Float {
    if b > a {
        b
    } else {
        a
    }
}

/// Applies a rounded MPFR unary function; the input is copied exactly first and any
/// final narrowing rounds in the same direction, so the result stays outward.
fn round_unary(x: &Float, prec: u32, round: Round, f: fn(&mut Float, Round) -> Ordering) -> Float {
    let mut y = Float::with_val(prec.max(x.prec()), x);
    f(&mut y, round);
    if y.prec() != prec {
        y.set_prec_round(prec, round);
    }
    y
}

impl Interval {
    /// Builds `[lo, hi]`; fails on NaN endpoints or `lo > hi`.
    pub fn new(lo: Float, hi: Float) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() {
            return Err(Error::Domain("NaN interval endpoint".into()));
        }
        if lo > hi {
            return Err(Error::InvalidBounds(format!("lo {lo} > hi {hi}")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(x: Float) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn zero(prec: u32) -> Self {
        Self::point(Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::point(Float::with_val(prec, 1))
    }

    pub fn from_i64(prec: u32, v: i64) -> Self {
        Interval { lo: down(prec, v), hi: up(prec, v) }
    }

    /// Encloses the binary64 value `v` (exact when `prec >= 53`).
    pub fn from_f64(prec: u32, v: f64) -> Self {
        Interval { lo: down(prec, v), hi: up(prec, v) }
    }

    /// Encloses `num / den`.
    pub fn from_ratio(prec: u32, num: i64, den: i64) -> Self {
        Self::from_rational(prec, &Rational::from((num, den)))
    }

    pub fn from_rational(prec: u32, q: &Rational) -> Self {
        Interval { lo: down(prec, q), hi: up(prec, q) }
    }

    /// Encloses the exact value of a decimal literal such as `"1.4"` or `"-2.5e-3"`.
    pub fn from_decimal(prec: u32, s: &str) -> Result<Self> {
        let bad = |e| Error::Parameter(format!("bad decimal {s:?}: {e}"));
        let lo = down(prec, Float::parse(s.trim()).map_err(bad)?);
        let hi = up(prec, Float::parse(s.trim()).map_err(bad)?);
        Self::new(lo, hi)
    }

    /// Encloses both values; the result is `[min, max]`.
    pub fn from_bounds(a: Float, b: Float) -> Self {
        if b < a {
            Interval { lo: b, hi: a }
        } else {
            Interval { lo: a, hi: b }
        }
    }

    pub fn pi(prec: u32) -> Self {
        Interval { lo: down(prec, Constant::Pi), hi: up(prec, Constant::Pi) }
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn into_bounds(self) -> (Float, Float) {
        (self.lo, self.hi)
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    fn prec2(&self, o: &Interval) -> u32 {
        self.prec().max(o.prec())
    }

    /// Copy at a new precision, rounding outward.
    pub fn with_prec(&self, prec: u32) -> Self {
        Interval { lo: down(prec, &self.lo), hi: up(prec, &self.hi) }
    }

    /// Midpoint rounded to nearest.
    pub fn mid(&self) -> Float {
        let p = self.prec();
        let mut m = Float::with_val(p + 1, &self.lo + &self.hi);
        m /= 2;
        Float::with_val(p, &m)
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    /// Upper bound on `hi - lo`.
    pub fn width(&self) -> Float {
        up(self.prec(), &self.hi - &self.lo)
    }

    /// Upper bound on `max |x|`.
    pub fn mag(&self) -> Float {
        let a = Float::with_val(self.prec(), self.lo.abs_ref());
        let b = Float::with_val(self.prec(), self.hi.abs_ref());
        max_f(a, b)
    }

    /// Lower bound on `min |x|`.
    pub fn mig(&self) -> Float {
        if self.contains_zero() {
            Float::new(self.prec())
        } else if self.lo > 0 {
            self.lo.clone()
        } else {
            Float::with_val(self.prec(), -&self.hi)
        }
    }

    pub fn contains(&self, x: &Float) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        self.lo <= x && self.hi >= x
    }

    pub fn contains_interval(&self, o: &Interval) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0 && self.hi >= 0
    }

    pub fn is_positive(&self) -> bool {
        self.lo > 0
    }

    pub fn is_negative(&self) -> bool {
        self.hi < 0
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn overlaps(&self, o: &Interval) -> bool {
        !(self.hi < o.lo || o.hi < self.lo)
    }

    pub fn hull(&self, o: &Interval) -> Interval {
        let p = self.prec2(o);
        Interval {
            lo: min_f(down(p, &self.lo), down(p, &o.lo)),
            hi: max_f(up(p, &self.hi), up(p, &o.hi)),
        }
    }

    /// Widen by `r >= 0` on both sides.
    pub fn inflate(&self, r: &Float) -> Interval {
        let p = self.prec();
        let r = up(p, r.abs_ref());
        Interval { lo: down(p, &self.lo - &r), hi: up(p, &self.hi + &r) }
    }

    /// Splits at the midpoint.
    pub fn bisect(&self) -> (Interval, Interval) {
        let m = self.mid();
        (Interval { lo: self.lo.clone(), hi: m.clone() }, Interval { lo: m, hi: self.hi.clone() })
    }

    /// Splits into `n` consecutive pieces whose union covers `self`.
    pub fn subdivide(&self, n: usize) -> Vec<Interval> {
        assert!(n >= 1);
        let p = self.prec();
        let w = Float::with_val(p, &self.hi - &self.lo);
        let mut cuts = Vec::with_capacity(n + 1);
        cuts.push(self.lo.clone());
        for i in 1..n {
            let mut c = Float::with_val(p, &w * (i as u32));
            c /= n as u32;
            c += &self.lo;
            cuts.push(c);
        }
        cuts.push(self.hi.clone());
        cuts.windows(2)
            .map(|c| Interval::from_bounds(c[0].clone(), c[1].clone()))
            .collect()
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0 {
            self.clone()
        } else if self.hi <= 0 {
            -self
        } else {
            Interval { lo: Float::new(self.prec()), hi: self.mag() }
        }
    }

    pub fn sqr(&self) -> Interval {
        let p = self.prec();
        if self.lo >= 0 {
            Interval { lo: down(p, self.lo.square_ref()), hi: up(p, self.hi.square_ref()) }
        } else if self.hi <= 0 {
            Interval { lo: down(p, self.hi.square_ref()), hi: up(p, self.lo.square_ref()) }
        } else {
            let m = self.mag();
            Interval { lo: Float::new(p), hi: up(p, m.square_ref()) }
        }
    }

    /// Product with an exact scalar.
    pub fn mul_f64(&self, c: f64) -> Interval {
        self * &Interval::from_f64(self.prec(), c)
    }

    /// Product with an exact power of two.
    pub fn mul_2si(&self, k: i32) -> Interval {
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        lo <<= k;
        hi <<= k;
        Interval { lo, hi }
    }

    pub fn recip(&self) -> Result<Interval> {
        if self.contains_zero() {
            return Err(Error::DivisorContainsZero);
        }
        let p = self.prec();
        let mut lo = Float::with_val(p, &self.hi);
        lo.recip_round(Round::Down);
        let mut hi = Float::with_val(p, &self.lo);
        hi.recip_round(Round::Up);
        Ok(Interval { lo, hi })
    }

    pub fn div(&self, o: &Interval) -> Result<Interval> {
        if o.contains_zero() {
            return Err(Error::DivisorContainsZero);
        }
        let p = self.prec2(o);
        let (a, b) = (&self.lo, &self.hi);
        let (c, d) = (&o.lo, &o.hi);
        let r = if *c > 0 {
            if *a >= 0 {
                (down(p, a / d), up(p, b / c))
            } else if *b <= 0 {
                (down(p, a / c), up(p, b / d))
            } else {
                (down(p, a / c), up(p, b / c))
            }
        } else if *a >= 0 {
            (down(p, b / d), up(p, a / c))
        } else if *b <= 0 {
            (down(p, b / c), up(p, a / d))
        } else {
            (down(p, b / d), up(p, a / d))
        };
        Ok(Interval { lo: r.0, hi: r.1 })
    }

    pub fn sqrt(&self) -> Result<Interval> {
        if self.lo < 0 {
            return Err(Error::Domain(format!("sqrt of interval with lo = {}", self.lo)));
        }
        let p = self.prec();
        Ok(Interval {
            lo: round_unary(&self.lo, p, Round::Down, Float::sqrt_round),
            hi: round_unary(&self.hi, p, Round::Up, Float::sqrt_round),
        })
    }

    pub fn exp(&self) -> Interval {
        let p = self.prec();
        Interval {
            lo: round_unary(&self.lo, p, Round::Down, Float::exp_round),
            hi: round_unary(&self.hi, p, Round::Up, Float::exp_round),
        }
    }

    pub fn ln(&self) -> Result<Interval> {
        if self.lo <= 0 {
            return Err(Error::Domain(format!("log of interval with lo = {}", self.lo)));
        }
        let p = self.prec();
        Ok(Interval {
            lo: round_unary(&self.lo, p, Round::Down, Float::ln_round),
            hi: round_unary(&self.hi, p, Round::Up, Float::ln_round),
        })
    }

    /// `self^e = exp(e·ln self)` for a positive base.
    pub fn pow(&self, e: &Interval) -> Result<Interval> {
        Ok((&self.ln()? * e).exp())
    }

    pub fn powi(&self, k: u32) -> Interval {
        let mut acc = Interval::one(self.prec());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    pub fn sinh(&self) -> Interval {
        let p = self.prec();
        Interval {
            lo: round_unary(&self.lo, p, Round::Down, Float::sinh_round),
            hi: round_unary(&self.hi, p, Round::Up, Float::sinh_round),
        }
    }

    pub fn asinh(&self) -> Interval {
        let p = self.prec();
        Interval {
            lo: round_unary(&self.lo, p, Round::Down, Float::asinh_round),
            hi: round_unary(&self.hi, p, Round::Up, Float::asinh_round),
        }
    }

    pub fn cosh(&self) -> Interval {
        let p = self.prec();
        let c = |x: &Float, r| round_unary(x, p, r, Float::cosh_round);
        if self.contains_zero() {
            Interval { lo: Float::with_val(p, 1), hi: max_f(c(&self.lo, Round::Up), c(&self.hi, Round::Up)) }
        } else if self.lo > 0 {
            Interval { lo: c(&self.lo, Round::Down), hi: c(&self.hi, Round::Up) }
        } else {
            Interval { lo: c(&self.hi, Round::Down), hi: c(&self.lo, Round::Up) }
        }
    }

    /// Inverse hyperbolic cosine; requires `lo >= 1`.
    pub fn acosh(&self) -> Result<Interval> {
        if self.lo < 1 {
            return Err(Error::Domain(format!("acosh of interval with lo = {}", self.lo)));
        }
        let p = self.prec();
        Ok(Interval {
            lo: round_unary(&self.lo, p, Round::Down, Float::acosh_round),
            hi: round_unary(&self.hi, p, Round::Up, Float::acosh_round),
        })
    }

    pub fn cos(&self) -> Interval {
        let p = self.prec();
        let full = Interval { lo: Float::with_val(p, -1), hi: Float::with_val(p, 1) };
        if !self.lo.is_finite() || !self.hi.is_finite() {
            return full;
        }
        let pi = Interval::pi(p);
        let two_pi_lo = Float::with_val(p, &pi.lo * 2u32);
        if self.width() >= two_pi_lo || self.mag() > 1e15 {
            return full;
        }
        let c = |x: &Float, r| round_unary(x, p, r, Float::cos_round);
        let mut lo = min_f(c(&self.lo, Round::Down), c(&self.hi, Round::Down));
        let mut hi = max_f(c(&self.lo, Round::Up), c(&self.hi, Round::Up));
        // Integers k with kπ possibly inside [self.lo, self.hi].
        let a = Interval::point(self.lo.clone()).div(&pi).expect("pi > 0");
        let b = Interval::point(self.hi.clone()).div(&pi).expect("pi > 0");
        let k0 = a.lo.to_f64_round(Round::Down).ceil() as i64;
        let k1 = b.hi.to_f64_round(Round::Up).floor() as i64;
        for k in k0..=k1 {
            if k.rem_euclid(2) == 0 {
                hi = Float::with_val(p, 1);
            } else {
                lo = Float::with_val(p, -1);
            }
        }
        if lo < -1 {
            lo = Float::with_val(p, -1);
        }
        if hi > 1 {
            hi = Float::with_val(p, 1);
        }
        Interval { lo, hi }
    }

    pub fn sin(&self) -> Interval {
        let half_pi = Interval::pi(self.prec()).mul_2si(-1);
        (self - &half_pi).cos()
    }

    /// `atan2(y, x)`, the principal argument of the rectangle `x + iy`.
    ///
    /// Fails if the rectangle meets the cut `(-∞, 0]`.
    pub fn atan2(y: &Interval, x: &Interval) -> Result<Interval> {
        if x.lo <= 0 && y.contains_zero() {
            return Err(Error::BranchCutCrossed("arg"));
        }
        let p = y.prec2(x);
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for yy in [&y.lo, &y.hi] {
            for xx in [&x.lo, &x.hi] {
                let mut l = Float::with_val(p, yy);
                l.atan2_round(xx, Round::Down);
                let mut h = Float::with_val(p, yy);
                h.atan2_round(xx, Round::Up);
                lo = Some(match lo {
                    Some(v) => min_f(v, l),
                    None => l,
                });
                hi = Some(match hi {
                    Some(v) => max_f(v, h),
                    None => h,
                });
            }
        }
        Ok(Interval { lo: lo.unwrap(), hi: hi.unwrap() })
    }

    pub fn max(&self, o: &Interval) -> Interval {
        let p = self.prec2(o);
        Interval { lo: max_f(down(p, &self.lo), down(p, &o.lo)), hi: max_f(up(p, &self.hi), up(p, &o.hi)) }
    }

    pub fn min(&self, o: &Interval) -> Interval {
        let p = self.prec2(o);
        Interval { lo: min_f(down(p, &self.lo), down(p, &o.lo)), hi: min_f(up(p, &self.hi), up(p, &o.hi)) }
    }

    /// In-place `self += a * b` with outward rounding.
    pub fn add_mul_assign(&mut self, a: &Interval, b: &Interval) {
        let prod = a * b;
        self.lo.add_assign_round(&prod.lo, Round::Down);
        self.hi.add_assign_round(&prod.hi, Round::Up);
    }

    pub fn add_assign_ref(&mut self, o: &Interval) {
        let p = self.prec2(o);
        if self.lo.prec() < p {
            self.lo.set_prec_round(p, Round::Down);
            self.hi.set_prec_round(p, Round::Up);
        }
        let lo = down(p, &self.lo + &o.lo);
        let hi = up(p, &self.hi + &o.hi);
        self.lo = lo;
        self.hi = hi;
    }
}

fn mul_endpoints(a: &Interval, b: &Interval, p: u32) -> (Float, Float) {
    let (al, ah, bl, bh) = (&a.lo, &a.hi, &b.lo, &b.hi);
    if *al >= 0 {
        if *bl >= 0 {
            (down(p, al * bl), up(p, ah * bh))
        } else if *bh <= 0 {
            (down(p, ah * bl), up(p, al * bh))
        } else {
            (down(p, ah * bl), up(p, ah * bh))
        }
    } else if *ah <= 0 {
        if *bl >= 0 {
            (down(p, al * bh), up(p, ah * bl))
        } else if *bh <= 0 {
            (down(p, ah * bh), up(p, al * bl))
        } else {
            (down(p, al * bh), up(p, al * bl))
        }
    } else if *bl >= 0 {
        (down(p, al * bh), up(p, ah * bh))
    } else if *bh <= 0 {
        (down(p, ah * bl), up(p, al * bl))
    } else {
        (
            min_f(down(p, al * bh), down(p, ah * bl)),
            max_f(up(p, al * bl), up(p, ah * bh)),
        )
    }
}

impl<'a> Add<&'a Interval> for &'a Interval {
    type Output = Interval;
    fn add(self, o: &Interval) -> Interval {
        let p = self.prec2(o);
        Interval { lo: down(p, &self.lo + &o.lo), hi: up(p, &self.hi + &o.hi) }
    }
}

impl<'a> Sub<&'a Interval> for &'a Interval {
    type Output = Interval;
    fn sub(self, o: &Interval) -> Interval {
        let p = self.prec2(o);
        Interval { lo: down(p, &self.lo - &o.hi), hi: up(p, &self.hi - &o.lo) }
    }
}

impl<'a> Mul<&'a Interval> for &'a Interval {
    type Output = Interval;
    fn mul(self, o: &Interval) -> Interval {
        let (lo, hi) = mul_endpoints(self, o, self.prec2(o));
        Interval { lo, hi }
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: Float::with_val(self.hi.prec(), -&self.hi), hi: Float::with_val(self.lo.prec(), -&self.lo) }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Interval> for Interval {
            type Output = Interval;
            fn $m(self, o: Interval) -> Interval {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Interval> for Interval {
            type Output = Interval;
            fn $m(self, o: &Interval) -> Interval {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<Interval> for &'a Interval {
            type Output = Interval;
            fn $m(self, o: Interval) -> Interval {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo.to_string_radix(10, Some(20)), self.hi.to_string_radix(10, Some(20)))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(Float::with_val(P, a), Float::with_val(P, b)).unwrap()
    }

    #[test]
    fn endpoint_addition_is_exact() {
        let s = &iv(1.0, 2.0) + &iv(3.0, 4.0);
        assert_eq!(s, iv(4.0, 6.0));
    }

    #[test]
    fn sqrt_of_exact_square() {
        let r = iv(4.0, 4.0).sqrt().unwrap();
        assert!(r.contains_f64(2.0));
        let bound = Float::with_val(P, Float::i_exp(1, 2 - P as i32));
        assert!(r.width() <= bound);
    }

    #[test]
    fn division_by_interval_straddling_zero_fails() {
        assert_eq!(iv(-1.0, 1.0).div(&iv(0.0, 1.0)), Err(Error::DivisorContainsZero));
    }

    #[test]
    fn multiplication_sign_cases() {
        let cases = [(-2.0, 3.0), (1.0, 2.0), (-3.0, -1.0), (0.0, 0.0), (-1.0, 0.0)];
        for &(a, b) in &cases {
            for &(c, d) in &cases {
                let r = &iv(a, b) * &iv(c, d);
                let prods = [a * c, a * d, b * c, b * d];
                let lo = prods.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = prods.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                assert_eq!(r, iv(lo, hi), "[{a},{b}]*[{c},{d}]");
            }
        }
    }

    #[test]
    fn cos_picks_up_interior_extrema() {
        let r = iv(-0.5, 0.5).cos();
        assert_eq!(*r.hi(), 1);
        let r = iv(3.0, 3.5).cos();
        assert_eq!(*r.lo(), -1);
        let r = iv(0.1, 0.2).cos();
        assert!(r.contains_f64(0.15f64.cos()));
        assert!(*r.hi() < 1);
    }

    #[test]
    fn decimal_enclosure_brackets_the_literal() {
        let r = Interval::from_decimal(P, "1.4").unwrap();
        assert!(r.lo() < r.hi());
        let q = Rational::from((7, 5));
        assert!(*r.lo() <= q && *r.hi() >= q);
    }

    #[test]
    fn atan2_rejects_cut() {
        assert!(Interval::atan2(&iv(-0.1, 0.1), &iv(-1.0, -0.5)).is_err());
        let a = Interval::atan2(&iv(1.0, 1.0), &iv(1.0, 1.0)).unwrap();
        assert!(a.overlaps(&Interval::pi(P).mul_2si(-2)));
        assert!(a.width() < 1e-35);
    }
}
