//! The parabolic generator, the induced uniformly contracting system
//! `{G_n^±}` on `[-1,1]²`, and its Jacobians, for real or complex index `n`.
//!
//! With `A = ((√3−1, 1), (−1, √3+1))` the powers have the closed form
//! `A^n = ((√3−n, n), (−n, n+√3))`, which is affine in `n`. The induced map
//! on the rescaled square is `g_n^± = S⁻¹·A·diag(ω^±, 1)·A^n·S` with
//! `S: w ↦ (w+1)/4` and `ω^± = e^{±2πi/3}`, so its matrix is
//! `P^± + n·Q^±`. Dividing by `n` gives `Q^± + t·P^±` with `t = 1/n`, which is
//! regular at `n = ∞`.
//!
//! The two-variable lift pairs `g^σ` at `w = z1 + i z2` with `g^{−σ}` at
//! `w' = z1 − i z2` (same `n`). Because `det(g^+)·det(g^-) = 81` exactly, the
//! Jacobian is the rational function `J = 9 / (q^σ(w)·q^{−σ}(w'))`, where
//! `q(w) = c·w + d`; no square root is evaluated.

use rug::Float;

use crate::error::{Error, Result};
use crate::rigor::{CInterval, Interval};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Map label `(σ, n)`; `n` is a nonnegative integer in head sums and complex
/// on quadrature circles.
#[derive(Clone, Debug)]
pub struct MapIndex {
    pub sign: Sign,
    pub n: CInterval,
}

impl MapIndex {
    pub fn new(sign: Sign, n: CInterval) -> Self {
        MapIndex { sign, n }
    }

    pub fn integer(sign: Sign, n: u64, prec: u32) -> Self {
        MapIndex { sign, n: CInterval::from_i64(prec, n as i64) }
    }
}

/// Projective 2×2 complex matrix acting as `z ↦ (az+b)/(cz+d)`.
#[derive(Clone, Debug)]
pub struct MoebiusMap {
    pub a: CInterval,
    pub b: CInterval,
    pub c: CInterval,
    pub d: CInterval,
}

impl MoebiusMap {
    pub fn new(a: CInterval, b: CInterval, c: CInterval, d: CInterval) -> Self {
        MoebiusMap { a, b, c, d }
    }

    fn real(prec: u32, m: [[&Interval; 2]; 2]) -> Self {
        let _ = prec;
        MoebiusMap {
            a: CInterval::real(m[0][0].clone()),
            b: CInterval::real(m[0][1].clone()),
            c: CInterval::real(m[1][0].clone()),
            d: CInterval::real(m[1][1].clone()),
        }
    }

    pub fn identity(prec: u32) -> Self {
        MoebiusMap {
            a: CInterval::one(prec),
            b: CInterval::zero(prec),
            c: CInterval::zero(prec),
            d: CInterval::one(prec),
        }
    }

    pub fn det(&self) -> CInterval {
        &self.a * &self.d - &self.b * &self.c
    }

    /// Denominator `cz + d`.
    pub fn denom(&self, z: &CInterval) -> CInterval {
        &self.c * z + &self.d
    }

    /// `(az+b)/(cz+d)`; a denominator enclosure containing 0 is a domain error.
    pub fn apply(&self, z: &CInterval) -> Result<CInterval> {
        let num = &self.a * z + &self.b;
        let den = self.denom(z);
        num.div(&den).map_err(|_| Error::Domain("Möbius pole meets the argument".into()))
    }

    /// `(ad − bc)/(cz + d)²`.
    pub fn derivative(&self, z: &CInterval) -> Result<CInterval> {
        let den = self.denom(z).sqr();
        self.det().div(&den).map_err(|_| Error::Domain("Möbius pole meets the argument".into()))
    }

    /// Mean-value enclosure `m(c) + m'(z)·(z − c)` with `c` the midpoint of `z`.
    /// Much tighter than [`MoebiusMap::apply`] on wide boxes: `z` occurs once.
    pub fn apply_centered(&self, z: &CInterval) -> Result<CInterval> {
        let (re, im) = z.mid();
        let c = CInterval::new(Interval::point(re), Interval::point(im));
        let at_c = self.apply(&c)?;
        let slope = self.derivative(z)?;
        Ok(&at_c + &(&slope * &(z - &c)))
    }

    /// Matrix product; as maps, `self ∘ o`.
    pub fn compose(&self, o: &MoebiusMap) -> MoebiusMap {
        MoebiusMap {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn scale(&self, k: &CInterval) -> MoebiusMap {
        MoebiusMap { a: &self.a * k, b: &self.b * k, c: &self.c * k, d: &self.d * k }
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> MoebiusMap {
        MoebiusMap { a: self.a.conj(), b: self.b.conj(), c: self.c.conj(), d: self.d.conj() }
    }

    /// `self + t·o` entrywise.
    pub fn add_scaled(&self, t: &CInterval, o: &MoebiusMap) -> MoebiusMap {
        MoebiusMap {
            a: &self.a + &(t * &o.a),
            b: &self.b + &(t * &o.b),
            c: &self.c + &(t * &o.c),
            d: &self.d + &(t * &o.d),
        }
    }

    /// True unless the enclosures certify the matrices are not proportional.
    pub fn projectively_equal(&self, o: &MoebiusMap) -> bool {
        let e = [&self.a, &self.b, &self.c, &self.d];
        let f = [&o.a, &o.b, &o.c, &o.d];
        (0..4).all(|i| (0..4).all(|j| (e[i] * f[j] - e[j] * f[i]).contains_zero()))
    }
}

/// Precomputed constant matrices of the induced system at a fixed precision.
#[derive(Clone, Debug)]
pub struct Ifs {
    prec: u32,
    /// `P^σ` and `Q^σ` in `g_n^σ = P^σ + n·Q^σ`, indexed by `Sign as usize`.
    p: [MoebiusMap; 2],
    q: [MoebiusMap; 2],
    nine: Interval,
}

fn idx(s: Sign) -> usize {
    match s {
        Sign::Plus => 0,
        Sign::Minus => 1,
    }
}

/// `A_•` with matrix `((√3−1, 1), (−1, √3+1))`.
pub fn apollonian_generator(prec: u32) -> MoebiusMap {
    let r3 = sqrt3(prec);
    let one = Interval::one(prec);
    MoebiusMap::real(prec, [[&(&r3 - &one), &one], [&(-&one), &(&r3 + &one)]])
}

/// `A_•^n = ((√3−n, n), (−n, n+√3))`, valid for complex `n`.
pub fn apollonian_power(n: &CInterval) -> MoebiusMap {
    let prec = n.prec();
    let r3 = CInterval::real(sqrt3(prec));
    MoebiusMap { a: &r3 - n, b: n.clone(), c: -n, d: n + &r3 }
}

/// Rotation `z ↦ e^{±2πi/3} z`.
pub fn rotation(sign: Sign, prec: u32) -> MoebiusMap {
    let mut m = MoebiusMap::identity(prec);
    m.a = omega(sign, prec);
    m
}

/// `e^{±2πi/3} = −1/2 ± i√3/2`.
pub fn omega(sign: Sign, prec: u32) -> CInterval {
    let half = Interval::from_ratio(prec, 1, 2);
    let im = sqrt3(prec).mul_2si(-1);
    CInterval::new(
        -&half,
        match sign {
            Sign::Plus => im,
            Sign::Minus => -im,
        },
    )
}

pub(crate) fn sqrt3(prec: u32) -> Interval {
    Interval::from_i64(prec, 3).sqrt().expect("3 > 0")
}

/// `w ↦ (w+1)/4` and its inverse `w ↦ 4w − 1`.
pub fn rescale(prec: u32) -> (MoebiusMap, MoebiusMap) {
    let one = Interval::one(prec);
    let zero = Interval::zero(prec);
    let four = Interval::from_i64(prec, 4);
    let quarter = Interval::from_ratio(prec, 1, 4);
    let s = MoebiusMap::real(prec, [[&one, &one], [&zero, &four]]);
    let s_inv = MoebiusMap::real(prec, [[&one, &(-&quarter)], [&zero, &quarter]]);
    (s, s_inv)
}

/// Matrix of the induced map `g_n^σ` for the given index.
pub fn induced_map_matrix(idx: &MapIndex) -> MoebiusMap {
    let prec = idx.n.prec();
    let (s, s_inv) = rescale(prec);
    s_inv
        .compose(&apollonian_generator(prec))
        .compose(&rotation(idx.sign, prec))
        .compose(&apollonian_power(&idx.n))
        .compose(&s)
}

impl Ifs {
    pub fn new(prec: u32) -> Self {
        let zero = CInterval::zero(prec);
        let one = CInterval::one(prec);
        let mk = |sign: Sign| {
            let p = induced_map_matrix(&MapIndex::new(sign, zero.clone()));
            let p_plus_q = induced_map_matrix(&MapIndex::new(sign, one.clone()));
            let q = MoebiusMap {
                a: &p_plus_q.a - &p.a,
                b: &p_plus_q.b - &p.b,
                c: &p_plus_q.c - &p.c,
                d: &p_plus_q.d - &p.d,
            };
            (p, q)
        };
        let (pp, qp) = mk(Sign::Plus);
        let (pm, qm) = mk(Sign::Minus);
        Ifs { prec, p: [pp, pm], q: [qp, qm], nine: Interval::from_i64(prec, 9) }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// `P^σ`, the `n = 0` matrix.
    pub fn p_matrix(&self, sign: Sign) -> &MoebiusMap {
        &self.p[idx(sign)]
    }

    /// `Q^σ`, the rank-one limit of `g_n^σ / n`.
    pub fn q_matrix(&self, sign: Sign) -> &MoebiusMap {
        &self.q[idx(sign)]
    }

    /// `g_n^σ = P^σ + n·Q^σ`.
    pub fn matrix(&self, sign: Sign, n: &CInterval) -> MoebiusMap {
        self.p[idx(sign)].add_scaled(n, &self.q[idx(sign)])
    }

    /// `g_n^σ / n = Q^σ + t·P^σ` with `t = 1/n`; `t = 0` is the limit map.
    pub fn matrix_t(&self, sign: Sign, t: &CInterval) -> MoebiusMap {
        self.q[idx(sign)].add_scaled(t, &self.p[idx(sign)])
    }

    /// The lift `(½(a+b), (a−b)/2i)` with `a = m_σ(z1+iz2)`, `b = m_{−σ}(z1−iz2)`.
    pub fn lift(
        m_sigma: &MoebiusMap,
        m_flip: &MoebiusMap,
        z1: &CInterval,
        z2: &CInterval,
    ) -> Result<(CInterval, CInterval)> {
        let iz2 = z2.mul_i();
        let a = m_sigma.apply(&(z1 + &iz2))?;
        let b = m_flip.apply(&(z1 - &iz2))?;
        Ok(((&a + &b).mul_2si(-1), (&a - &b).div_i().mul_2si(-1)))
    }

    /// [`Ifs::lift`] through [`MoebiusMap::apply_centered`], for wide boxes.
    pub fn lift_centered(
        m_sigma: &MoebiusMap,
        m_flip: &MoebiusMap,
        z1: &CInterval,
        z2: &CInterval,
    ) -> Result<(CInterval, CInterval)> {
        let iz2 = z2.mul_i();
        let a = m_sigma.apply_centered(&(z1 + &iz2))?;
        let b = m_flip.apply_centered(&(z1 - &iz2))?;
        Ok(((&a + &b).mul_2si(-1), (&a - &b).div_i().mul_2si(-1)))
    }

    /// `9 / (q_σ(z1+iz2)·q_{−σ}(z1−iz2))`: `J` for true matrices, `n²J` for `t`-scaled ones.
    pub fn jacobian_from(
        &self,
        m_sigma: &MoebiusMap,
        m_flip: &MoebiusMap,
        z1: &CInterval,
        z2: &CInterval,
    ) -> Result<CInterval> {
        let iz2 = z2.mul_i();
        let qa = m_sigma.denom(&(z1 + &iz2));
        let qb = m_flip.denom(&(z1 - &iz2));
        CInterval::real(self.nine.clone())
            .div(&(&qa * &qb))
            .map_err(|_| Error::Domain("Möbius pole meets the argument".into()))
    }

    /// `G_n^σ(z1, z2)`.
    pub fn g(&self, idx: &MapIndex, z1: &CInterval, z2: &CInterval) -> Result<(CInterval, CInterval)> {
        let ms = self.matrix(idx.sign, &idx.n);
        let mf = self.matrix(idx.sign.flip(), &idx.n);
        Self::lift(&ms, &mf, z1, z2)
    }

    /// `J_n^σ(z1, z2)`, positive on the real square for real `n ≥ 0`.
    pub fn j(&self, idx: &MapIndex, z1: &CInterval, z2: &CInterval) -> Result<CInterval> {
        let ms = self.matrix(idx.sign, &idx.n);
        let mf = self.matrix(idx.sign.flip(), &idx.n);
        self.jacobian_from(&ms, &mf, z1, z2)
    }

    /// `n²·J_n^σ(z1, z2)`, evaluated through `t = 1/n` so it stays accurate for large `|n|`.
    pub fn scaled_jacobian(&self, idx: &MapIndex, z1: &CInterval, z2: &CInterval) -> Result<CInterval> {
        if idx.n.contains_zero() {
            let j = self.j(idx, z1, z2)?;
            return Ok(&idx.n.sqr() * &j);
        }
        let t = idx.n.recip()?;
        self.scaled_jacobian_t(idx.sign, &t, z1, z2)
    }

    /// `n²J` as a function of `t = 1/n`.
    pub fn scaled_jacobian_t(&self, sign: Sign, t: &CInterval, z1: &CInterval, z2: &CInterval) -> Result<CInterval> {
        let ms = self.matrix_t(sign, t);
        let mf = self.matrix_t(sign.flip(), t);
        self.jacobian_from(&ms, &mf, z1, z2)
    }

    /// `G` as a function of `t = 1/n` (projective rescaling leaves the map unchanged).
    pub fn g_t(&self, sign: Sign, t: &CInterval, z1: &CInterval, z2: &CInterval) -> Result<(CInterval, CInterval)> {
        let ms = self.matrix_t(sign, t);
        let mf = self.matrix_t(sign.flip(), t);
        Self::lift(&ms, &mf, z1, z2)
    }

    /// Real-index, real-point fast path: `G = (Re a, Im a)` with `a = g^σ(x+iy)`,
    /// since the flipped factor is the complex conjugate there.
    pub fn g_real(&self, sign: Sign, n: &Interval, x: &Interval, y: &Interval) -> Result<(Interval, Interval)> {
        let m = self.matrix(sign, &CInterval::real(n.clone()));
        let a = m.apply(&CInterval::new(x.clone(), y.clone()))?;
        Ok((a.re, a.im))
    }

    /// Real-index, real-point Jacobian `9 / |q_σ(x+iy)|²`.
    pub fn j_real(&self, sign: Sign, n: &Interval, x: &Interval, y: &Interval) -> Result<Interval> {
        let m = self.matrix(sign, &CInterval::real(n.clone()));
        let q = m.denom(&CInterval::new(x.clone(), y.clone()));
        self.nine.div(&q.norm_sqr()).map_err(|_| Error::Domain("Möbius pole meets the argument".into()))
    }

    /// Real-point `n²J` through `t = 1/n` for a real interval of `t`.
    pub fn scaled_jacobian_real_t(&self, sign: Sign, t: &Interval, x: &Interval, y: &Interval) -> Result<Interval> {
        let m = self.matrix_t(sign, &CInterval::real(t.clone()));
        let q = m.denom(&CInterval::new(x.clone(), y.clone()));
        self.nine.div(&q.norm_sqr()).map_err(|_| Error::Domain("Möbius pole meets the argument".into()))
    }

    /// Real-point `G` through `t = 1/n`.
    pub fn g_real_t(&self, sign: Sign, t: &Interval, x: &Interval, y: &Interval) -> Result<(Interval, Interval)> {
        let m = self.matrix_t(sign, &CInterval::real(t.clone()));
        let a = m.apply(&CInterval::new(x.clone(), y.clone()))?;
        Ok((a.re, a.im))
    }
}

/// Branch anchor for `s`-powers of `n²J` at a fixed point: the value at `n = ∞`.
#[derive(Clone, Debug)]
pub struct BranchSelector {
    pub sign: Sign,
    pub anchor_value: CInterval,
}

impl BranchSelector {
    pub fn at(ifs: &Ifs, sign: Sign, z1: &CInterval, z2: &CInterval) -> Result<Self> {
        let t0 = CInterval::zero(ifs.prec());
        let anchor_value = ifs.scaled_jacobian_t(sign, &t0, z1, z2)?;
        if anchor_value.contains_zero() {
            return Err(Error::Domain("branch anchor encloses 0".into()));
        }
        Ok(BranchSelector { sign, anchor_value })
    }
}

/// `G_n^σ(z1, z2)` at the index precision.
#[allow(non_snake_case)]
pub fn G(idx: &MapIndex, z1: &CInterval, z2: &CInterval) -> Result<(CInterval, CInterval)> {
    Ifs::new(idx.n.prec()).g(idx, z1, z2)
}

/// `J_n^σ(z1, z2)` at the index precision.
#[allow(non_snake_case)]
pub fn J(idx: &MapIndex, z1: &CInterval, z2: &CInterval) -> Result<CInterval> {
    Ifs::new(idx.n.prec()).j(idx, z1, z2)
}

/// `n²·J_n^σ(z1, z2)` at the index precision.
pub fn scaled_jacobian(idx: &MapIndex, z1: &CInterval, z2: &CInterval) -> Result<CInterval> {
    Ifs::new(idx.n.prec()).scaled_jacobian(idx, z1, z2)
}

/// Closed form of `lim n²J(0,0) = 16(2−√3)/3`.
pub fn scaled_jacobian_limit_at_origin(prec: u32) -> Interval {
    let r3 = sqrt3(prec);
    (&Interval::from_i64(prec, 2) - &r3) * Interval::from_ratio(prec, 16, 3)
}

/// Midpoint of a real interval as a binary64 value, for diagnostics.
pub fn approx(x: &Interval) -> f64 {
    x.mid_f64()
}

/// `Float` convenience for tests and callers that hold point data.
pub fn point(prec: u32, x: f64) -> CInterval {
    CInterval::real(Interval::point(Float::with_val(prec, x)))
}
