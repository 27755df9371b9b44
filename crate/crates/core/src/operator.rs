//! The transfer operator `(𝒜_s φ)(x) = Σ_{±} Σ_{n≥0} J_n^±(x)^s φ(G_n^±(x))`.
//!
//! Every evaluation at a real point `(x, y)` is a finite weighted sum over the
//! Euler–Maclaurin quadrature points of an [`EMPlan`]: integer indices
//! `n = 0..N` (weight 1, and ½ at `N`) and complex indices on the two circles.
//! The same list of `(weight·J^s, G)` pairs feeds both the certified pointwise
//! evaluation and the non-rigorous matrix assembly.

use rayon::prelude::*;
use rug::Float;

use crate::chebyshev::{eval_poly, eval_poly_real, hardy_norm_bound, ChebBasis, ChebCoeffs2D, ChebGrid2D};
use crate::error::{Error, Result};
use crate::euler_maclaurin::{make_plan_with, remainder_bound, EMPlan, PlanOverrides};
use crate::ifs::{BranchSelector, Ifs, Sign};
use crate::rigor::{CInterval, Interval};

/// Analytic constants of the induced system.
///
/// `r_small` defaults to 0.95: the inclusion of the image of the `R = 1.4`
/// ellipse in the `0.9` ellipse fails at `n = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AprioriConstants {
    pub r_big: f64,
    pub r_small: f64,
    pub nu: f64,
    pub w: f64,
    pub c_a: f64,
    pub d_plus: f64,
    pub d_minus: f64,
}

impl Default for AprioriConstants {
    fn default() -> Self {
        AprioriConstants { r_big: 1.4, r_small: 0.95, nu: 10.0, w: 3.0, c_a: 0.068, d_plus: 0.59, d_minus: 3.3 }
    }
}

impl AprioriConstants {
    /// Enclosure of the decimal constant `v` as written (shortest round-trip form).
    pub fn exact(v: f64, prec: u32) -> Interval {
        Interval::from_decimal(prec, &format!("{v}")).expect("finite constant")
    }

    /// `C_A·ν²`, the bound on `|n²J|` for `|n| ≥ ν`.
    pub fn scaled_jacobian_bound(&self, prec: u32) -> Interval {
        &Self::exact(self.c_a, prec) * &Self::exact(self.nu, prec).sqr()
    }

    pub fn fields(&self) -> [(&'static str, f64); 7] {
        [
            ("R_A", self.r_big),
            ("r_A", self.r_small),
            ("nu_A", self.nu),
            ("W_A", self.w),
            ("C_A", self.c_a),
            ("D_plus", self.d_plus),
            ("D_minus", self.d_minus),
        ]
    }
}

/// `K = 2⌈−ln ε / (2R)⌉`.
pub fn chebyshev_order(epsilon: f64, r_big: f64) -> usize {
    2 * (-epsilon.ln() / (2.0 * r_big)).ceil() as usize
}

/// Lower and upper limits of `s` on which the constants are verified.
pub const CERTIFIED_S_RANGE: (f64, f64) = (1.30, 1.31);

/// Everything needed to evaluate `𝒜_s`.
#[derive(Clone, Debug)]
pub struct OperatorParams {
    pub s: Interval,
    pub k: usize,
    pub plan: EMPlan,
    pub constants: AprioriConstants,
    pub y_even: bool,
    pub ifs: Ifs,
    pub basis: ChebBasis,
    bary: Vec<Float>,
}

impl OperatorParams {
    pub fn new(s: Interval, k: usize, plan: EMPlan, constants: AprioriConstants, y_even: bool) -> Result<Self> {
        if k < 1 {
            return Err(Error::Parameter("K must be positive".into()));
        }
        if plan.nu != constants.nu {
            return Err(Error::Parameter(format!("plan ν = {} differs from ν_A = {}", plan.nu, constants.nu)));
        }
        if !plan.s.contains_interval(&s) {
            return Err(Error::Parameter("plan exponent does not enclose s".into()));
        }
        let prec = plan.prec;
        let basis = ChebBasis::new(k, prec);
        let pi = Interval::pi(prec);
        let bary = (0..k)
            .map(|j| {
                let th = (&pi * &Interval::from_i64(prec, 2 * j as i64 + 1))
                    .div(&Interval::from_i64(prec, 2 * k as i64))
                    .expect("K > 0");
                let v = th.sin().mid();
                if j % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .collect();
        Ok(OperatorParams { s, k, plan, constants, y_even, ifs: Ifs::new(prec), basis, bary })
    }

    /// Builds the plan for `s` from `ε` (and overrides) and wraps it.
    pub fn build(
        s: &Interval,
        k: usize,
        epsilon: f64,
        constants: AprioriConstants,
        y_even: bool,
        prec: u32,
        overrides: &PlanOverrides,
    ) -> Result<Self> {
        let plan = make_plan_with(epsilon, constants.nu, s, prec, overrides)?;
        Self::new(s.with_prec(plan.prec), k, plan, constants, y_even)
    }

    pub fn prec(&self) -> u32 {
        self.plan.prec
    }

    /// Same operator at a different `s` (new plan with identical parameters).
    pub fn with_s(&self, s: &Interval) -> Result<Self> {
        let p = &self.plan;
        let plan = EMPlan::with_params(p.n, p.l, p.m, p.mp, p.nu, s, p.prec)?;
        Self::new(s.with_prec(p.prec), self.k, plan, self.constants, self.y_even)
    }

    fn check_certified_range(&self) -> Result<()> {
        let (a, b) = CERTIFIED_S_RANGE;
        let lo = AprioriConstants::exact(a, self.prec());
        let hi = AprioriConstants::exact(b, self.prec());
        if self.s.lo() < lo.hi() || self.s.hi() > hi.lo() {
            return Err(Error::Parameter(format!("s = {} is outside the verified range [{a}, {b}]", self.s)));
        }
        Ok(())
    }

    /// Number of retained second-coordinate indices (`⌈K/2⌉` under `y_even`).
    pub fn half(&self) -> usize {
        if self.y_even {
            self.k.div_ceil(2)
        } else {
            self.k
        }
    }

    /// Grid indices `(j1, j2)` of the matrix rows; also the column basis indices.
    pub fn row_nodes(&self) -> Vec<(usize, usize)> {
        let h = self.half();
        (0..self.k).flat_map(|j1| (0..h).map(move |j2| (j1, j2))).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum QuadKind {
    Real,
    Derivative,
    Integral,
}

#[derive(Clone, Debug)]
struct QuadPoint {
    kind: QuadKind,
    n: CInterval,
    t: CInterval,
    weight: CInterval,
    /// `n^{−2s}` for derivative nodes.
    n_pow: Option<CInterval>,
}

fn quadrature(params: &OperatorParams) -> Result<Vec<QuadPoint>> {
    let plan = &params.plan;
    let p = plan.prec;
    let mut out = Vec::new();
    for n in 0..=plan.n {
        let w = if n == plan.n { Interval::from_ratio(p, 1, 2) } else { Interval::one(p) };
        let nc = CInterval::from_i64(p, n as i64);
        out.push(QuadPoint { kind: QuadKind::Real, t: CInterval::zero(p), n: nc, weight: CInterval::real(w), n_pow: None });
    }
    // Conjugate pairs: keep the first half of each node set and double the weight;
    // only real parts are used.
    let m2s = -&params.s.mul_2si(1);
    let dm = Interval::from_i64(p, plan.m as i64);
    for (z, c) in plan.z_m.iter().zip(&plan.c_m).take(plan.m / 2) {
        let w = c.mul_real(&Interval::from_i64(p, -2).div(&dm)?);
        let n_pow = z.pow_real(&m2s)?;
        out.push(QuadPoint { kind: QuadKind::Derivative, t: z.recip()?, n: z.clone(), weight: w, n_pow: Some(n_pow) });
    }
    let dmp = Interval::from_i64(p, plan.mp as i64);
    for (z, c) in plan.zp_k.iter().zip(&plan.cp_k).take(plan.mp / 2) {
        let w = c.mul_real(&Interval::from_i64(p, 2).div(&dmp)?);
        out.push(QuadPoint { kind: QuadKind::Integral, t: z.recip()?, n: z.clone(), weight: w, n_pow: None });
    }
    Ok(out)
}

/// `weight·J^s` (or `weight·(n²J)^s` on the integral circle) and the image point.
#[derive(Clone, Debug)]
pub struct NodeTerm {
    pub coeff: CInterval,
    pub u: CInterval,
    pub v: CInterval,
    pub real: bool,
}

/// All terms at the real point `(x, y)`; the sum `Σ Re(coeff·φ(u, v))` is the
/// quadrature part of `(𝒜_s φ)(x, y)`.
pub fn node_terms(params: &OperatorParams, x: &Interval, y: &Interval) -> Result<Vec<NodeTerm>> {
    let quad = quadrature(params)?;
    node_terms_with(params, &quad, x, y)
}

fn node_terms_with(params: &OperatorParams, quad: &[QuadPoint], x: &Interval, y: &Interval) -> Result<Vec<NodeTerm>> {
    let ifs = &params.ifs;
    let s = &params.s;
    let xc = CInterval::real(x.clone());
    let yc = CInterval::real(y.clone());
    let mut out = Vec::with_capacity(2 * quad.len());
    for sign in Sign::BOTH {
        let anchor = BranchSelector::at(ifs, sign, &xc, &yc)?;
        for q in quad {
            match q.kind {
                QuadKind::Real => {
                    let j = ifs.j_real(sign, &q.n.re, x, y)?;
                    let (u, v) = ifs.g_real(sign, &q.n.re, x, y)?;
                    let js = j.pow(s)?;
                    out.push(NodeTerm {
                        coeff: CInterval::real(&js * &q.weight.re),
                        u: CInterval::real(u),
                        v: CInterval::real(v),
                        real: true,
                    });
                }
                QuadKind::Derivative | QuadKind::Integral => {
                    let nj = ifs.scaled_jacobian_t(sign, &q.t, &xc, &yc)?;
                    let mut js = nj.pow_real_anchored(s, &anchor.anchor_value)?;
                    if let Some(np) = &q.n_pow {
                        js = &js * np;
                    }
                    let (u, v) = ifs.g_t(sign, &q.t, &xc, &yc)?;
                    out.push(NodeTerm { coeff: &js * &q.weight, u, v, real: false });
                }
            }
        }
    }
    Ok(out)
}

/// Total Euler–Maclaurin error for a summand built from `φ` with `‖φ‖ ≤ hardy`
/// on the `r_A` ellipse: `C = 2·C_A^s·hardy`, `C̃ = 2·(C_A ν²)^s·hardy`.
pub fn pointwise_error(params: &OperatorParams, hardy: &Float) -> Result<Float> {
    let p = params.prec();
    let h = Interval::point(Float::with_val(p, hardy));
    let c_a = AprioriConstants::exact(params.constants.c_a, p);
    let c = (&c_a.pow(&params.s)? * &h).mul_2si(1);
    let ct = (&params.constants.scaled_jacobian_bound(p).pow(&params.s)? * &h).mul_2si(1);
    let c_hi = c.hi().clone();
    let ct_hi = ct.hi().clone();
    let plan = &params.plan;
    let r = remainder_bound(plan.l, plan.n, plan.nu, &c_hi)?;
    let d = plan.derivative_error(&c_hi)?;
    let i = plan.integral_error(&ct_hi)?;
    Ok((Interval::point(r) + Interval::point(d) + Interval::point(i)).hi().clone())
}

fn sum_terms(terms: &[NodeTerm], phi: &ChebCoeffs2D) -> Interval {
    let p = phi.prec();
    let mut acc = Interval::zero(p);
    for t in terms {
        if t.real {
            acc.add_mul_assign(&t.coeff.re, &eval_poly_real(phi, &t.u.re, &t.v.re));
        } else {
            let f = eval_poly(phi, &t.u, &t.v);
            acc.add_mul_assign(&t.coeff.re, &f.re);
            acc.add_mul_assign(&-&t.coeff.im, &f.im);
        }
    }
    acc
}

/// Certified enclosure of `(𝒜_s φ)(x, y)`.
///
/// `phi_hardy_norm` must bound `φ` on the `r_A` ellipse (see
/// [`hardy_norm_bound`]); `s` must lie in the verified range.
pub fn apply_pointwise(
    params: &OperatorParams,
    phi: &ChebCoeffs2D,
    x: &Interval,
    y: &Interval,
    phi_hardy_norm: &Float,
) -> Result<Interval> {
    params.check_certified_range()?;
    let terms = node_terms(params, x, y)?;
    let err = pointwise_error(params, phi_hardy_norm)?;
    Ok(sum_terms(&terms, phi).inflate(&err))
}

/// Certified values at every tensor node, with the common error bound `Err`
/// returned separately (the values are *not* widened by it).
///
/// Under `y_even` only rows `j2 < ⌈K/2⌉` are evaluated and the rest mirrored,
/// which is exact because `𝒜_s` maps `y`-even functions to `y`-even functions
/// and `x_{K−1−j} = −x_j`.
pub fn apply_to_nodes(params: &OperatorParams, phi: &ChebCoeffs2D, phi_hardy_norm: &Float) -> Result<(ChebGrid2D, Float)> {
    params.check_certified_range()?;
    if params.y_even && !phi.is_y_even() {
        return Err(Error::Parameter("y_even operator applied to a function that is not y-even".into()));
    }
    let quad = quadrature(params)?;
    let k = params.k;
    let nodes = &params.basis.nodes;
    let rows = params.row_nodes();
    let vals: Vec<Interval> = rows
        .par_iter()
        .map(|&(j1, j2)| {
            let terms = node_terms_with(params, &quad, &nodes[j1], &nodes[j2])?;
            Ok(sum_terms(&terms, phi))
        })
        .collect::<Result<_>>()?;
    let h = params.half();
    let mut values = Vec::with_capacity(k * k);
    for j1 in 0..k {
        for j2 in 0..k {
            let jj = if j2 < h { j2 } else { k - 1 - j2 };
            values.push(vals[j1 * h + jj].clone());
        }
    }
    Ok((ChebGrid2D { k, values }, pointwise_error(params, phi_hardy_norm)?))
}

/// Certified `𝒜_s φ` on the grid, from node values of `φ`; every value is
/// widened by `Err`.
pub fn apply_to_grid(params: &OperatorParams, phi_values: &ChebGrid2D) -> Result<ChebGrid2D> {
    let mut c = params.basis.grid_to_coeffs(phi_values);
    if params.y_even {
        for k1 in 0..c.k {
            for k2 in (1..c.k).step_by(2) {
                if !c.get(k1, k2).contains_zero() {
                    return Err(Error::Parameter("grid is not y-even".into()));
                }
                c.set(k1, k2, Interval::zero(params.prec()));
            }
        }
    }
    let hardy = hardy_norm_bound(&c, params.constants.r_small);
    let (mut g, err) = apply_to_nodes(params, &c, &hardy)?;
    for v in &mut g.values {
        *v = v.inflate(&err);
    }
    Ok(g)
}

/// Point complex number for the non-rigorous assembly.
#[derive(Clone, Debug)]
struct Cf {
    re: Float,
    im: Float,
}

impl Cf {
    fn mid(z: &CInterval) -> Cf {
        let (re, im) = z.mid();
        Cf { re, im }
    }
    fn mul(&self, o: &Cf) -> Cf {
        let p = self.re.prec();
        let mut re = Float::with_val(p, &self.re * &o.re);
        re -= &self.im * &o.im;
        let mut im = Float::with_val(p, &self.re * &o.im);
        im += &self.im * &o.re;
        Cf { re, im }
    }
    fn recip(&self) -> Cf {
        let p = self.re.prec();
        let mut d = Float::with_val(p, self.re.square_ref());
        d += &self.im * &self.im;
        let mut im = Float::with_val(p, &self.im / &d);
        im = -im;
        Cf { re: Float::with_val(p, &self.re / &d), im }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

/// `ℓ_k(z)`, `k = 0..K−1`, by the barycentric formula for first-kind nodes.
fn lagrange_complex(params: &OperatorParams, z: &Cf) -> Vec<Cf> {
    let k = params.k;
    let p = params.prec();
    let nodes = &params.basis.nodes_f;
    let mut terms = Vec::with_capacity(k);
    for j in 0..k {
        let d = Cf { re: Float::with_val(p, &z.re - &nodes[j]), im: z.im.clone() };
        if d.is_zero() {
            return (0..k)
                .map(|i| Cf { re: Float::with_val(p, if i == j { 1 } else { 0 }), im: Float::new(p) })
                .collect();
        }
        let r = d.recip();
        terms.push(Cf { re: Float::with_val(p, &r.re * &params.bary[j]), im: Float::with_val(p, &r.im * &params.bary[j]) });
    }
    let mut s = Cf { re: Float::new(p), im: Float::new(p) };
    for t in &terms {
        s.re += &t.re;
        s.im += &t.im;
    }
    let inv = s.recip();
    terms.iter().map(|t| t.mul(&inv)).collect()
}

fn lagrange_real(params: &OperatorParams, x: &Float) -> Vec<Float> {
    let k = params.k;
    let p = params.prec();
    let nodes = &params.basis.nodes_f;
    let mut terms = Vec::with_capacity(k);
    for j in 0..k {
        let d = Float::with_val(p, x - &nodes[j]);
        if d.is_zero() {
            return (0..k).map(|i| Float::with_val(p, if i == j { 1 } else { 0 })).collect();
        }
        terms.push(Float::with_val(p, &params.bary[j] / &d));
    }
    let s = Float::with_val(p, Float::sum(terms.iter()));
    terms.into_iter().map(|t| t / &s).collect()
}

/// Folds `ℓ_k` into the `y`-even column basis `ℓ_k + ℓ_{K−1−k}` (middle index once).
fn symmetrize<T: Clone>(v: Vec<T>, half: usize, add: impl Fn(&T, &T) -> T) -> Vec<T> {
    let k = v.len();
    if half == k {
        return v;
    }
    (0..half).map(|j| if k - 1 - j == j { v[j].clone() } else { add(&v[j], &v[k - 1 - j]) }).collect()
}

/// Dense non-rigorous discretisation: entry `(r, c)` approximates
/// `(𝒜_s b_c)(x_r)` for the Lagrange (or `y`-even symmetrised) basis `b_c`.
#[derive(Clone, Debug)]
pub struct TransferMatrix {
    pub k: usize,
    pub y_even: bool,
    pub dim: usize,
    pub prec: u32,
    pub data: Vec<Float>,
}

impl TransferMatrix {
    pub fn get(&self, r: usize, c: usize) -> &Float {
        &self.data[r * self.dim + c]
    }

    pub fn row(&self, r: usize) -> &[Float] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    /// `A·v`, rows in parallel.
    pub fn matvec(&self, v: &[Float]) -> Vec<Float> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .into_par_iter()
            .map(|r| Float::with_val(self.prec, Float::dot(self.row(r).iter().zip(v))))
            .collect()
    }

    /// Expands a vector of retained node values to all `K²` nodes.
    pub fn to_full_grid(&self, v: &[Float]) -> Vec<Float> {
        let k = self.k;
        let h = self.dim / k;
        let mut out = Vec::with_capacity(k * k);
        for j1 in 0..k {
            for j2 in 0..k {
                let jj = if j2 < h { j2 } else { k - 1 - j2 };
                out.push(v[j1 * h + jj].clone());
            }
        }
        out
    }
}

/// Assembles the matrix at the midpoint of `params.s` (no interval bounds).
pub fn assemble_matrix(params: &OperatorParams) -> Result<TransferMatrix> {
    let quad = quadrature(params)?;
    let rows = params.row_nodes();
    let dim = rows.len();
    let k = params.k;
    let h = params.half();
    let p = params.prec();
    let mid = Interval::point(params.s.mid()).with_prec(p);
    let point_params;
    let params = if params.s.is_point() {
        params
    } else {
        point_params = OperatorParams { s: mid, ..params.clone() };
        &point_params
    };
    let nodes = &params.basis.nodes;
    let data_rows: Vec<Vec<Float>> = rows
        .par_iter()
        .map(|&(j1, j2)| -> Result<Vec<Float>> {
            let terms = node_terms_with(params, &quad, &nodes[j1], &nodes[j2])?;
            let mut row = vec![Float::new(p); dim];
            for t in &terms {
                if t.real {
                    let a = t.coeff.re.mid();
                    let lu = lagrange_real(params, &t.u.re.mid());
                    let lv = symmetrize(lagrange_real(params, &t.v.re.mid()), h, |x, y| Float::with_val(p, x + y));
                    for (k1, l1) in lu.iter().enumerate() {
                        let a1 = Float::with_val(p, &a * l1);
                        let out = &mut row[k1 * h..(k1 + 1) * h];
                        for (o, l2) in out.iter_mut().zip(&lv) {
                            *o += &a1 * l2;
                        }
                    }
                } else {
                    let a = Cf::mid(&t.coeff);
                    let lu = lagrange_complex(params, &Cf::mid(&t.u));
                    let lv = symmetrize(lagrange_complex(params, &Cf::mid(&t.v)), h, |x, y| Cf {
                        re: Float::with_val(p, &x.re + &y.re),
                        im: Float::with_val(p, &x.im + &y.im),
                    });
                    for (k1, l1) in lu.iter().enumerate() {
                        let a1 = a.mul(l1);
                        let out = &mut row[k1 * h..(k1 + 1) * h];
                        for (o, l2) in out.iter_mut().zip(&lv) {
                            *o += &a1.re * &l2.re;
                            *o -= &a1.im * &l2.im;
                        }
                    }
                }
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let mut data = Vec::with_capacity(dim * dim);
    for r in data_rows {
        data.extend(r);
    }
    debug_assert_eq!(dim, k * h);
    Ok(TransferMatrix { k, y_even: params.y_even, dim, prec: p, data })
}
