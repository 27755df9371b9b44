//! Tensor-product Chebyshev machinery on `[-1,1]²`.
//!
//! Nodes are first-kind, `x_j = cos(π(2j+1)/2K)` for `j = 0..K−1`, so they
//! decrease in `j`. Grids and coefficient arrays are stored row-major with the
//! first coordinate (`x`, index `j1` or `k1`) as the slow index.

use rug::float::Round;
use rug::Float;

use crate::error::{Error, Result};
use crate::rigor::{CInterval, Interval};

/// Values at the `K×K` tensor nodes; entry `j1*K + j2` is at `(x_{j1}, x_{j2})`.
#[derive(Clone, Debug)]
pub struct ChebGrid2D {
    pub k: usize,
    pub values: Vec<Interval>,
}

/// Coefficients of `Σ c_{k1,k2} T_{k1}(z1) T_{k2}(z2)`; entry `k1*K + k2`.
#[derive(Clone, Debug)]
pub struct ChebCoeffs2D {
    pub k: usize,
    pub coeffs: Vec<Interval>,
}

impl ChebGrid2D {
    pub fn get(&self, j1: usize, j2: usize) -> &Interval {
        &self.values[j1 * self.k + j2]
    }

    pub fn from_fn(k: usize, prec: u32, f: impl Fn(&Interval, &Interval) -> Interval) -> Self {
        let nodes = cheb_nodes_interval(k, prec);
        let mut values = Vec::with_capacity(k * k);
        for x in &nodes {
            for y in &nodes {
                values.push(f(x, y));
            }
        }
        ChebGrid2D { k, values }
    }
}

impl ChebCoeffs2D {
    pub fn zeros(k: usize, prec: u32) -> Self {
        ChebCoeffs2D { k, coeffs: vec![Interval::zero(prec); k * k] }
    }

    pub fn get(&self, k1: usize, k2: usize) -> &Interval {
        &self.coeffs[k1 * self.k + k2]
    }

    pub fn set(&mut self, k1: usize, k2: usize, v: Interval) {
        self.coeffs[k1 * self.k + k2] = v;
    }

    /// Single basis polynomial `T_{(k1,k2)}`.
    pub fn unit(k: usize, prec: u32, k1: usize, k2: usize) -> Self {
        let mut c = Self::zeros(k, prec);
        c.set(k1, k2, Interval::one(prec));
        c
    }

    pub fn prec(&self) -> u32 {
        self.coeffs.first().map(|c| c.prec()).unwrap_or(crate::rigor::MIN_PRECISION)
    }

    /// Coefficientwise difference.
    pub fn sub(&self, o: &ChebCoeffs2D) -> Result<ChebCoeffs2D> {
        if self.k != o.k {
            return Err(Error::Parameter(format!("order mismatch {} vs {}", self.k, o.k)));
        }
        Ok(ChebCoeffs2D { k: self.k, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() })
    }

    /// Coefficientwise `self − λ·o`.
    pub fn sub_scaled(&self, lambda: &Interval, o: &ChebCoeffs2D) -> Result<ChebCoeffs2D> {
        if self.k != o.k {
            return Err(Error::Parameter(format!("order mismatch {} vs {}", self.k, o.k)));
        }
        Ok(ChebCoeffs2D {
            k: self.k,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - &(lambda * b)).collect(),
        })
    }

    /// True when every odd-`k2` coefficient is exactly zero, so the polynomial is even in `y`.
    pub fn is_y_even(&self) -> bool {
        (0..self.k).all(|k1| (1..self.k).step_by(2).all(|k2| {
            let c = self.get(k1, k2);
            c.is_point() && c.lo().is_zero()
        }))
    }
}

/// `cos(π(2j+1)/2K)`, `j = 0..K−1`, rounded to nearest.
pub fn cheb_nodes(k: usize, prec: u32) -> Vec<Float> {
    cheb_nodes_interval(k, prec).iter().map(|x| x.mid()).collect()
}

/// Certified enclosures of the nodes.
pub fn cheb_nodes_interval(k: usize, prec: u32) -> Vec<Interval> {
    assert!(k >= 1, "order must be positive");
    let pi = Interval::pi(prec);
    (0..k)
        .map(|j| {
            if 2 * j + 1 == k {
                return Interval::zero(prec);
            }
            let ang = (&pi * &Interval::from_i64(prec, (2 * j + 1) as i64))
                .div(&Interval::from_i64(prec, 2 * k as i64))
                .expect("nonzero");
            ang.cos()
        })
        .collect()
}

/// Cached node values and the cosine table `T_k(x_j) = cos(kπ(2j+1)/2K)`.
#[derive(Clone, Debug)]
pub struct ChebBasis {
    pub k: usize,
    pub prec: u32,
    pub nodes: Vec<Interval>,
    /// `table[k*K + j] = T_k(x_j)`.
    pub table: Vec<Interval>,
    pub nodes_f: Vec<Float>,
    pub table_f: Vec<Float>,
}

impl ChebBasis {
    pub fn new(k: usize, prec: u32) -> Self {
        let nodes = cheb_nodes_interval(k, prec);
        let pi = Interval::pi(prec);
        let mut table = Vec::with_capacity(k * k);
        for kk in 0..k {
            for j in 0..k {
                let m = kk * (2 * j + 1);
                // Exact values where the angle is a multiple of π/2.
                let v = if m % (2 * k) == 0 {
                    let q = m / (2 * k);
                    Interval::from_i64(prec, if q % 2 == 0 { 1 } else { -1 })
                } else if m % k == 0 {
                    Interval::zero(prec)
                } else {
                    let ang = (&pi * &Interval::from_i64(prec, m as i64))
                        .div(&Interval::from_i64(prec, 2 * k as i64))
                        .expect("nonzero");
                    ang.cos()
                };
                table.push(v);
            }
        }
        let nodes_f = nodes.iter().map(|x| x.mid()).collect();
        let table_f = table.iter().map(|x| x.mid()).collect();
        ChebBasis { k, prec, nodes, table, nodes_f, table_f }
    }

    /// `T_k(x_j)`.
    pub fn t(&self, k: usize, j: usize) -> &Interval {
        &self.table[k * self.k + j]
    }

    fn weight(&self, k: usize) -> Interval {
        // (2 − δ_{k0}) / K
        let num = if k == 0 { 1 } else { 2 };
        Interval::from_ratio(self.prec, num, self.k as i64)
    }

    /// Direct `O(K³)` transform from node values to coefficients, in interval arithmetic.
    pub fn grid_to_coeffs(&self, g: &ChebGrid2D) -> ChebCoeffs2D {
        assert_eq!(g.k, self.k);
        let k = self.k;
        // h[j1][k2] = w_{k2} Σ_{j2} f[j1][j2] T_{k2}(x_{j2})
        let mut h = Vec::with_capacity(k * k);
        for j1 in 0..k {
            for k2 in 0..k {
                let mut acc = Interval::zero(self.prec);
                for j2 in 0..k {
                    acc.add_mul_assign(g.get(j1, j2), self.t(k2, j2));
                }
                h.push(&acc * &self.weight(k2));
            }
        }
        let mut c = Vec::with_capacity(k * k);
        for k1 in 0..k {
            let w = self.weight(k1);
            for k2 in 0..k {
                let mut acc = Interval::zero(self.prec);
                for j1 in 0..k {
                    acc.add_mul_assign(&h[j1 * k + k2], self.t(k1, j1));
                }
                c.push(&acc * &w);
            }
        }
        ChebCoeffs2D { k, coeffs: c }
    }

    /// Evaluates the polynomial at the tensor nodes.
    pub fn coeffs_to_grid(&self, c: &ChebCoeffs2D) -> ChebGrid2D {
        assert_eq!(c.k, self.k);
        let k = self.k;
        // h[k1][j2] = Σ_{k2} c[k1][k2] T_{k2}(x_{j2})
        let mut h = Vec::with_capacity(k * k);
        for k1 in 0..k {
            for j2 in 0..k {
                let mut acc = Interval::zero(self.prec);
                for k2 in 0..k {
                    acc.add_mul_assign(c.get(k1, k2), self.t(k2, j2));
                }
                h.push(acc);
            }
        }
        let mut v = Vec::with_capacity(k * k);
        for j1 in 0..k {
            for j2 in 0..k {
                let mut acc = Interval::zero(self.prec);
                for k1 in 0..k {
                    acc.add_mul_assign(&h[k1 * k + j2], self.t(k1, j1));
                }
                v.push(acc);
            }
        }
        ChebGrid2D { k, values: v }
    }

    /// Point version of [`grid_to_coeffs`](Self::grid_to_coeffs) for the non-rigorous stage.
    pub fn grid_to_coeffs_point(&self, values: &[Float]) -> Vec<Float> {
        let k = self.k;
        assert_eq!(values.len(), k * k);
        let p = self.prec;
        let mut h = vec![Float::new(p); k * k];
        for j1 in 0..k {
            for k2 in 0..k {
                let acc = &mut h[j1 * k + k2];
                for j2 in 0..k {
                    *acc += &values[j1 * k + j2] * &self.table_f[k2 * k + j2];
                }
                *acc *= if k2 == 0 { 1u32 } else { 2u32 };
                *acc /= k as u32;
            }
        }
        let mut c = vec![Float::new(p); k * k];
        for k1 in 0..k {
            for k2 in 0..k {
                let acc = &mut c[k1 * k + k2];
                for j1 in 0..k {
                    *acc += &h[j1 * k + k2] * &self.table_f[k1 * k + j1];
                }
                *acc *= if k1 == 0 { 1u32 } else { 2u32 };
                *acc /= k as u32;
            }
        }
        c
    }
}

/// Transform with a basis built for the grid's order and precision.
pub fn grid_to_coeffs(g: &ChebGrid2D) -> ChebCoeffs2D {
    let prec = g.values.first().map(|v| v.prec()).unwrap_or(64);
    ChebBasis::new(g.k, prec).grid_to_coeffs(g)
}

pub fn coeffs_to_grid(c: &ChebCoeffs2D) -> ChebGrid2D {
    ChebBasis::new(c.k, c.prec()).coeffs_to_grid(c)
}

/// `T_0(z), …, T_{K−1}(z)` by the three-term recurrence.
pub fn cheb_t_values(z: &CInterval, k: usize) -> Vec<CInterval> {
    let prec = z.prec();
    let mut t = Vec::with_capacity(k);
    if k == 0 {
        return t;
    }
    t.push(CInterval::one(prec));
    if k == 1 {
        return t;
    }
    t.push(z.clone());
    let two_z = z.mul_2si(1);
    for i in 2..k {
        let next = &(&two_z * &t[i - 1]) - &t[i - 2];
        t.push(next);
    }
    t
}

/// Real version of [`cheb_t_values`].
pub fn cheb_t_values_real(x: &Interval, k: usize) -> Vec<Interval> {
    let prec = x.prec();
    let mut t = Vec::with_capacity(k);
    if k == 0 {
        return t;
    }
    t.push(Interval::one(prec));
    if k == 1 {
        return t;
    }
    t.push(x.clone());
    let two_x = x.mul_2si(1);
    for i in 2..k {
        let next = &(&two_x * &t[i - 1]) - &t[i - 2];
        t.push(next);
    }
    t
}

fn is_exact_zero(c: &Interval) -> bool {
    c.is_point() && c.lo().is_zero()
}

/// Encloses `Σ c_{k1,k2} T_{k1}(z1) T_{k2}(z2)`; exact-zero coefficients are skipped.
pub fn eval_poly(c: &ChebCoeffs2D, z1: &CInterval, z2: &CInterval) -> CInterval {
    let k = c.k;
    let t1 = cheb_t_values(z1, k);
    let t2 = cheb_t_values(z2, k);
    let prec = c.prec().max(z1.prec());
    let mut total = CInterval::zero(prec);
    for k2 in 0..k {
        let mut inner_re = Interval::zero(prec);
        let mut inner_im = Interval::zero(prec);
        let mut any = false;
        for k1 in 0..k {
            let ck = c.get(k1, k2);
            if is_exact_zero(ck) {
                continue;
            }
            any = true;
            inner_re.add_mul_assign(ck, &t1[k1].re);
            inner_im.add_mul_assign(ck, &t1[k1].im);
        }
        if any {
            total = &total + &(&CInterval::new(inner_re, inner_im) * &t2[k2]);
        }
    }
    total
}

/// Real-argument version of [`eval_poly`].
pub fn eval_poly_real(c: &ChebCoeffs2D, x: &Interval, y: &Interval) -> Interval {
    let k = c.k;
    let t1 = cheb_t_values_real(x, k);
    let t2 = cheb_t_values_real(y, k);
    let mut total = Interval::zero(c.prec().max(x.prec()));
    for k1 in 0..k {
        for k2 in 0..k {
            let ck = c.get(k1, k2);
            if is_exact_zero(ck) {
                continue;
            }
            total.add_mul_assign(ck, &(&t1[k1] * &t2[k2]));
        }
    }
    total
}

/// One-dimensional aliasing of `T_k` on `K` first-kind nodes: `T_k ≡ sign·T_r`.
fn alias_1d(k: usize, kk: usize) -> (usize, i8) {
    let m = (k + kk) / (2 * kk);
    let r = (k as i64 - (2 * m * kk) as i64).unsigned_abs() as usize;
    if r == kk {
        (r, 0)
    } else {
        (r, if m % 2 == 0 { 1 } else { -1 })
    }
}

/// Index and sign with `P_K T_k = c·T_{m_K(k)}`; `c = 0` when some component is
/// an odd multiple of `K`.
pub fn alias_index(k: (usize, usize), order: usize) -> ((usize, usize), i8) {
    let (r1, s1) = alias_1d(k.0, order);
    let (r2, s2) = alias_1d(k.1, order);
    ((r1, r2), s1 * s2)
}

/// `E_{d,K}(x)`, rounded upward.
pub fn projection_error(d: u32, k: usize, x: f64, prec: u32) -> Result<Float> {
    if !(x > 0.0) || k < 2 || d == 0 {
        return Err(Error::Parameter(format!("projection_error needs x > 0, K ≥ 2, d ≥ 1 (d={d}, K={k}, x={x})")));
    }
    let xi = Interval::from_f64(prec, x);
    let ki = Interval::from_i64(prec, k as i64);
    let decay = (-(&Interval::from_i64(prec, k as i64 - 1) * &xi)).exp();
    let kx = &ki * &xi;
    let one = Interval::one(prec);
    let v = match d {
        1 => decay.mul_f64(8.0).div(&xi)?,
        2 => (&decay * &(&one + &kx)).mul_f64(16.0).div(&xi.sqr())?,
        3 => {
            let poly = &(&Interval::from_i64(prec, 2) + &kx.mul_2si(1)) + &kx.sqr();
            (&decay * &poly).mul_f64(48.0).div(&xi.powi(3))?
        }
        _ => {
            if (d as f64) >= (k as f64) * x {
                return Err(Error::Parameter(format!("E_{{d,K}} for d ≥ 4 needs d < Kx (d={d}, Kx={})", k as f64 * x)));
            }
            let e1 = (&one - &(&Interval::from_i64(prec, k as i64 - 1) * &xi)).exp();
            let dd = Interval::from_i64(prec, d as i64);
            let v = &(&e1 * &dd.sqr()) * &ki.powi(d - 1);
            v.mul_2si(d as i32).div(&xi)?
        }
    };
    Ok(v.hi().clone())
}

/// Bound `(2/π)·ln K + 1` on the Lebesgue constant of `K` first-kind nodes, rounded upward.
pub fn lebesgue_bound(k: usize, prec: u32) -> Float {
    if k <= 1 {
        return Float::with_val(prec, 1);
    }
    let ln_k = Interval::from_i64(prec, k as i64).ln().expect("K > 0");
    let v = &(&ln_k.mul_2si(1)).div(&Interval::pi(prec)).expect("π ≠ 0") + &Interval::one(prec);
    v.hi().clone()
}

/// A `d`-dimensional Bernstein ellipse `cos(ℝ^d + i·Ball_r^{d,p})`; `p = ∞` is allowed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllipseSpec {
    pub d: usize,
    pub p: f64,
    pub r: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Outside,
    Unknown,
}

/// `S = sinh²ρ` at the point `(X, Y) = (x², y²)`: the positive root of
/// `S² + S(1 − X − Y) − Y = 0`, written without cancellation.
fn sinh_sq_radius(x2: &Interval, y2: &Interval) -> Interval {
    let prec = x2.prec();
    let a = &(x2 + y2) - &Interval::one(prec);
    let root = (&a.sqr() + &y2.mul_2si(2)).sqrt().expect("nonnegative");
    if a.hi() <= &0 {
        let den = &root - &a;
        if den.lo() > &0 {
            return y2.mul_2si(1).div(&den).expect("positive denominator");
        }
    }
    (&a + &root).mul_2si(-1)
}

/// Encloses `ρ(w) = |Im arccos w|`, the Bernstein-ellipse parameter of `w`.
///
/// `w = x+iy` lies on the ellipse with semi-axes `cosh ρ`, `sinh ρ`, so
/// `S = sinh²ρ` solves `S² + S(1 − x² − y²) − y² = 0`. `S` is nondecreasing
/// in both `x²` and `y²`, so its range over a rectangle is attained at the
/// two extreme corners; this avoids the blow-up of `acosh((|w−1|+|w+1|)/2)`
/// near the foci.
pub fn ellipse_radius(w: &CInterval) -> Interval {
    let prec = w.prec();
    let x2 = w.re.sqr();
    let y2 = w.im.sqr();
    let pt = |v: &Float| Interval::point(v.clone());
    let lo = sinh_sq_radius(&pt(x2.lo()), &pt(y2.lo()));
    let hi = sinh_sq_radius(&pt(x2.hi()), &pt(y2.hi()));
    let zero = Float::new(prec);
    let l = if *lo.lo() < 0 { zero.clone() } else { lo.lo().clone() };
    let h = if *hi.hi() < 0 { zero } else { hi.hi().clone() };
    Interval::new(l, h).expect("ordered").sqrt().expect("nonnegative").asinh()
}

/// `‖(ρ(w_1), …, ρ(w_d))‖_p` as an interval.
pub fn ellipse_norm(e: &EllipseSpec, w: &[CInterval]) -> Interval {
    assert_eq!(w.len(), e.d, "point dimension mismatch");
    let radii: Vec<Interval> = w.iter().map(ellipse_radius).collect();
    if e.p.is_infinite() {
        return radii.iter().skip(1).fold(radii[0].clone(), |a, b| a.max(b));
    }
    if e.p == 2.0 {
        let s = radii.iter().skip(1).fold(radii[0].sqr(), |a, b| &a + &b.sqr());
        return s.sqrt().expect("nonnegative");
    }
    let prec = radii[0].prec();
    let pi = Interval::from_f64(prec, e.p);
    let mut s = Interval::zero(prec);
    for r in &radii {
        if !r.contains_zero() {
            s = &s + &r.pow(&pi).expect("positive");
        } else {
            // 0 ≤ ρ^p ≤ hi^p
            let hi = Interval::point(r.hi().clone());
            let top = if r.hi().is_zero() { Interval::zero(prec) } else { hi.pow(&pi).expect("positive") };
            s = &s + &Interval::new(Float::new(prec), top.hi().clone()).expect("ordered");
        }
    }
    if s.hi().is_zero() {
        return s;
    }
    let inv = Interval::one(prec).div(&pi).expect("p > 0");
    let lo = if s.lo().is_zero() { Interval::zero(prec) } else { Interval::point(s.lo().clone()).pow(&inv).expect("positive") };
    let hi = Interval::point(s.hi().clone()).pow(&inv).expect("positive");
    Interval::new(lo.lo().clone(), hi.hi().clone()).expect("ordered")
}

/// Certified membership of `w` in the open ellipse `E_r^{d,p}`.
pub fn ellipse_contains(e: &EllipseSpec, w: &[CInterval]) -> Membership {
    let n = ellipse_norm(e, w);
    if *n.hi() < e.r {
        Membership::Inside
    } else if *n.lo() > e.r {
        Membership::Outside
    } else {
        Membership::Unknown
    }
}

/// Upward-rounded `Σ_k e^{r‖k‖₂}·|c_k|`, a bound on the sup of the polynomial over `E_r^{2,2}`.
pub fn hardy_norm_bound(c: &ChebCoeffs2D, r: f64) -> Float {
    let prec = c.prec();
    let ri = Interval::from_f64(prec, r);
    let mut total = Interval::zero(prec);
    for k1 in 0..c.k {
        for k2 in 0..c.k {
            let ck = c.get(k1, k2);
            if is_exact_zero(ck) {
                continue;
            }
            let norm = Interval::from_i64(prec, (k1 * k1 + k2 * k2) as i64).sqrt().expect("≥ 0");
            let w = (&norm * &ri).exp();
            let mag = Interval::point(ck.mag());
            total = &total + &(&w * &mag);
        }
    }
    total.hi().clone()
}

/// `(c_0 − Σ_{k≠0}|c_k|, c_0 + Σ_{k≠0}|c_k|)` with outward rounding; brackets the
/// polynomial on `[-1,1]²` since `|T_k| ≤ 1` there.
pub fn sup_inf_bounds(c: &ChebCoeffs2D) -> (Float, Float) {
    let prec = c.prec();
    let mut tail = Float::new(prec);
    for (i, ck) in c.coeffs.iter().enumerate() {
        if i == 0 {
            continue;
        }
        tail.add_assign_round_up(&ck.mag());
    }
    let c0 = &c.coeffs[0];
    let mut lo = Float::with_val(prec, c0.lo());
    lo.sub_assign_round_down(&tail);
    let mut hi = Float::with_val(prec, c0.hi());
    hi.add_assign_round_up(&tail);
    (lo, hi)
}

trait DirectedAssign {
    fn add_assign_round_up(&mut self, x: &Float);
    fn sub_assign_round_down(&mut self, x: &Float);
}

impl DirectedAssign for Float {
    fn add_assign_round_up(&mut self, x: &Float) {
        use rug::ops::AddAssignRound;
        self.add_assign_round(x, Round::Up);
    }
    fn sub_assign_round_down(&mut self, x: &Float) {
        use rug::ops::SubAssignRound;
        self.sub_assign_round(x, Round::Down);
    }
}

/// `t_k = Π_j (2 − δ_{k_j,0})`.
pub fn coeff_weight(k1: usize, k2: usize) -> u32 {
    (if k1 == 0 { 1 } else { 2 }) * (if k2 == 0 { 1 } else { 2 })
}

/// Upper bound `t_k e^{−R‖k‖₂} H` on `|c_k|` for a function with Hardy norm `H` on `E_R^{2,2}`.
pub fn coeff_decay_bound(k1: usize, k2: usize, r: f64, hardy: f64) -> f64 {
    coeff_weight(k1, k2) as f64 * (-r * ((k1 * k1 + k2 * k2) as f64).sqrt()).exp() * hardy
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    #[test]
    fn nodes_small_orders() {
        let n1 = cheb_nodes_interval(1, P);
        assert!(n1[0].contains_f64(0.0));
        let n2 = cheb_nodes(2, P);
        assert!((n2[0].to_f64() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-16);
        assert!((n2[1].to_f64() + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-16);
        let n5 = cheb_nodes_interval(5, P);
        for j in 0..5 {
            assert!((&n5[j] + &n5[4 - j]).contains_zero());
        }
        for w in cheb_nodes(9, P).windows(2) {
            assert!(w[0] > w[1]);
        }
    }

    #[test]
    fn unit_modes_transform_to_unit_vectors() {
        let k = 8;
        let b = ChebBasis::new(k, P);
        let c = ChebCoeffs2D::unit(k, P, 2, 3);
        let g = b.coeffs_to_grid(&c);
        let back = b.grid_to_coeffs(&g);
        for k1 in 0..k {
            for k2 in 0..k {
                let v = back.get(k1, k2);
                if (k1, k2) == (2, 3) {
                    assert!(v.contains_f64(1.0));
                } else {
                    assert!(v.contains_zero());
                }
                assert!(v.width() < 1e-30);
            }
        }
    }

    #[test]
    fn aliasing_table() {
        assert_eq!(alias_index((2, 3), 8), ((2, 3), 1));
        assert_eq!(alias_index((8, 0), 8).1, 0);
        assert_eq!(alias_index((16, 0), 8), ((0, 0), -1));
        assert_eq!(alias_index((10, 1), 8), ((6, 1), -1));
    }

    #[test]
    fn clenshaw_examples() {
        let c = ChebCoeffs2D::unit(4, P, 1, 1);
        let v = eval_poly(&c, &CInterval::from_f64(P, 0.5, 0.0), &CInterval::from_f64(P, 0.25, 0.0));
        assert!(v.contains_f64(0.125, 0.0));
        let c = ChebCoeffs2D::unit(4, P, 3, 0);
        let v = eval_poly(&c, &CInterval::from_f64(P, 2.0, 0.0), &CInterval::zero(P));
        assert!(v.contains_f64(26.0, 0.0));
    }

    #[test]
    fn e2k_reference_value() {
        let v = projection_error(2, 10, 1.4, P).unwrap().to_f64();
        let expected = 16.0 * (-12.6f64).exp() * 15.0 / 1.96;
        assert!((v / expected - 1.0).abs() < 1e-14);
        assert!(projection_error(4, 2, 1.0, P).is_err());
    }

    #[test]
    fn ellipse_examples() {
        let e = EllipseSpec { d: 1, p: 2.0, r: 0.5 };
        assert_eq!(ellipse_contains(&e, &[CInterval::from_f64(P, 0.3, 0.0)]), Membership::Inside);
        let w = CInterval::from_f64(P, 0.6f64.cosh(), 0.0);
        assert_eq!(ellipse_contains(&e, &[w]), Membership::Outside);
    }

    #[test]
    fn hardy_and_sup_inf_examples() {
        let k = 6;
        let r = 0.7;
        let c = ChebCoeffs2D::unit(k, P, 0, 0);
        assert!((hardy_norm_bound(&c, r).to_f64() - 1.0).abs() < 1e-30);
        let c = ChebCoeffs2D::unit(k, P, 3, 4);
        assert!((hardy_norm_bound(&c, r).to_f64() / (5.0 * r).exp() - 1.0).abs() < 1e-15);
        let mut c = ChebCoeffs2D::unit(k, P, 1, 0);
        c.set(0, 1, Interval::one(P));
        assert!((hardy_norm_bound(&c, r).to_f64() / (2.0 * r.exp()) - 1.0).abs() < 1e-15);
        let (lo, hi) = sup_inf_bounds(&ChebCoeffs2D::unit(k, P, 1, 0));
        assert_eq!((lo.to_f64(), hi.to_f64()), (-1.0, 1.0));
    }
}
