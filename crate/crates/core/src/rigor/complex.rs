use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Float;

use super::Interval;
use crate::error::{Error, Result};

/// Axis-aligned complex rectangle `re + i·im`.
#[derive(Clone, PartialEq)]
pub struct CInterval {
    pub re: Interval,
    pub im: Interval,
}

impl CInterval {
    pub fn new(re: Interval, im: Interval) -> Self {
        CInterval { re, im }
    }

    pub fn real(re: Interval) -> Self {
        let p = re.prec();
        CInterval { re, im: Interval::zero(p) }
    }

    pub fn zero(prec: u32) -> Self {
        Self::real(Interval::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::real(Interval::one(prec))
    }

    pub fn i(prec: u32) -> Self {
        CInterval { re: Interval::zero(prec), im: Interval::one(prec) }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        CInterval { re: Interval::from_f64(prec, re), im: Interval::from_f64(prec, im) }
    }

    pub fn from_i64(prec: u32, re: i64) -> Self {
        Self::real(Interval::from_i64(prec, re))
    }

    /// Encloses `e^{iθ}` for an interval angle.
    pub fn cis(theta: &Interval) -> Self {
        CInterval { re: theta.cos(), im: theta.sin() }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        CInterval { re: self.re.with_prec(prec), im: self.im.with_prec(prec) }
    }

    pub fn conj(&self) -> Self {
        CInterval { re: self.re.clone(), im: -&self.im }
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        CInterval { re: -&self.im, im: self.re.clone() }
    }

    /// Division by `i`.
    pub fn div_i(&self) -> Self {
        CInterval { re: self.im.clone(), im: -&self.re }
    }

    pub fn mul_real(&self, r: &Interval) -> Self {
        CInterval { re: &self.re * r, im: &self.im * r }
    }

    pub fn mul_2si(&self, k: i32) -> Self {
        CInterval { re: self.re.mul_2si(k), im: self.im.mul_2si(k) }
    }

    pub fn sqr(&self) -> Self {
        let re = self.re.sqr() - self.im.sqr();
        let im = (&self.re * &self.im).mul_2si(1);
        CInterval { re, im }
    }

    /// Enclosure of `|z|²`.
    pub fn norm_sqr(&self) -> Interval {
        self.re.sqr() + self.im.sqr()
    }

    /// Enclosure of `|z|`.
    pub fn abs(&self) -> Interval {
        self.norm_sqr().sqrt().expect("sum of squares is nonnegative")
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn contains(&self, re: &Float, im: &Float) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn contains_f64(&self, re: f64, im: f64) -> bool {
        self.re.contains_f64(re) && self.im.contains_f64(im)
    }

    pub fn contains_cinterval(&self, o: &CInterval) -> bool {
        self.re.contains_interval(&o.re) && self.im.contains_interval(&o.im)
    }

    /// True when `self` and `conj(o)` intersect.
    pub fn overlaps_conj(&self, o: &CInterval) -> bool {
        self.re.overlaps(&o.re) && self.im.overlaps(&-&o.im)
    }

    pub fn hull(&self, o: &CInterval) -> CInterval {
        CInterval { re: self.re.hull(&o.re), im: self.im.hull(&o.im) }
    }

    /// Componentwise midpoint.
    pub fn mid(&self) -> (Float, Float) {
        (self.re.mid(), self.im.mid())
    }

    pub fn recip(&self) -> Result<Self> {
        let d = self.norm_sqr();
        if d.contains_zero() {
            return Err(Error::DivisorContainsZero);
        }
        Ok(CInterval { re: self.re.div(&d)?, im: (-&self.im).div(&d)? })
    }

    pub fn div(&self, o: &CInterval) -> Result<Self> {
        let d = o.norm_sqr();
        if d.contains_zero() {
            return Err(Error::DivisorContainsZero);
        }
        let num = self * &o.conj();
        Ok(CInterval { re: num.re.div(&d)?, im: num.im.div(&d)? })
    }

    pub fn exp(&self) -> Self {
        let m = self.im_exp_scale();
        CInterval { re: &m * &self.im.cos(), im: &m * &self.im.sin() }
    }

    fn im_exp_scale(&self) -> Interval {
        self.re.exp()
    }

    /// Principal argument; fails if the rectangle meets `(-∞, 0]`.
    pub fn arg(&self) -> Result<Interval> {
        Interval::atan2(&self.im, &self.re)
    }

    /// Principal logarithm; fails if the rectangle meets `(-∞, 0]`.
    pub fn ln(&self) -> Result<Self> {
        let arg = self.arg().map_err(|_| Error::BranchCutCrossed("log"))?;
        let ln_abs = self.norm_sqr().ln()?.mul_2si(-1);
        Ok(CInterval { re: ln_abs, im: arg })
    }

    /// `self^s` on the principal branch.
    pub fn pow_real(&self, s: &Interval) -> Result<Self> {
        Ok(self.ln()?.mul_real(s).exp())
    }

    /// `self^s` with the logarithm continued from `anchor`.
    pub fn pow_real_anchored(&self, s: &Interval, anchor: &CInterval) -> Result<Self> {
        if self.contains_zero() {
            return Err(Error::Domain("power of a rectangle containing 0".into()));
        }
        let a = anchor.mid();
        let p = anchor.prec();
        let a = CInterval::new(Interval::point(a.0), Interval::point(a.1)).with_prec(p);
        let a_arg = a.arg().or_else(|_| {
            // Anchor on the negative axis: the argument is π.
            if a.re.is_negative() {
                Ok(Interval::pi(p))
            } else {
                Err(Error::BranchCutCrossed("anchor"))
            }
        })?;
        let rel = self.div(&a)?.arg().map_err(|_| Error::BranchCutCrossed("power"))?;
        let ln_abs = self.norm_sqr().ln()?.mul_2si(-1);
        let log = CInterval { re: ln_abs, im: a_arg + rel };
        Ok(log.mul_real(s).exp())
    }

    /// Splits along the wider axis.
    pub fn bisect(&self) -> (CInterval, CInterval) {
        if self.re.width() >= self.im.width() {
            let (a, b) = self.re.bisect();
            (CInterval::new(a, self.im.clone()), CInterval::new(b, self.im.clone()))
        } else {
            let (a, b) = self.im.bisect();
            (CInterval::new(self.re.clone(), a), CInterval::new(self.re.clone(), b))
        }
    }
}

impl<'a> Add<&'a CInterval> for &'a CInterval {
    type Output = CInterval;
    fn add(self, o: &CInterval) -> CInterval {
        CInterval { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a CInterval> for &'a CInterval {
    type Output = CInterval;
    fn sub(self, o: &CInterval) -> CInterval {
        CInterval { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a CInterval> for &'a CInterval {
    type Output = CInterval;
    fn mul(self, o: &CInterval) -> CInterval {
        let re = &(&self.re * &o.re) - &(&self.im * &o.im);
        let im = &(&self.re * &o.im) + &(&self.im * &o.re);
        CInterval { re, im }
    }
}

impl Neg for &CInterval {
    type Output = CInterval;
    fn neg(self) -> CInterval {
        CInterval { re: -&self.re, im: -&self.im }
    }
}

impl Neg for CInterval {
    type Output = CInterval;
    fn neg(self) -> CInterval {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CInterval> for CInterval {
            type Output = CInterval;
            fn $m(self, o: CInterval) -> CInterval {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a CInterval> for CInterval {
            type Output = CInterval;
            fn $m(self, o: &CInterval) -> CInterval {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<CInterval> for &'a CInterval {
            type Output = CInterval;
            fn $m(self, o: CInterval) -> CInterval {
                self.$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Debug for CInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + i{:?}", self.re, self.im)
    }
}
