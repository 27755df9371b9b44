//! Computer-assisted verification of the analytic constants by box subdivision.
//!
//! Each claim is reduced to finitely many interval evaluations:
//!
//! - the maps and Jacobians are analytic on the Bernstein ellipse `E_{R_A}`, so
//!   their extremal values are attained on its boundary
//!   `cos([0,π]² + i·{κ : |κ| = R_A})`, which is covered by boxes in
//!   `(θ₁, θ₂, α)` with `κ = R_A(cos α, sin α)`;
//! - mirror symmetry `G⁻(z₁,z₂) = (u,−v)` for `G⁺(z₁,−z₂) = (u,v)` and
//!   conjugation symmetry `G(z̄) = conj G(z)` reduce this to the `+` maps and
//!   `θ₁, θ₂, α ∈ [0,π]`;
//! - all `n > n_max` are handled at once through `t = 1/n ∈ [0, 1/(n_max+1)]`;
//! - for complex `|n| ≥ ν` the functions are analytic in `t` on the disk
//!   `|t| ≤ 1/ν` (certified by excluding poles), so subharmonic quantities are
//!   bounded by their values on the circle `|t| = 1/ν`.
//!
//! Boxes whose outcome is undecided are bisected up to a fixed depth. A box
//! that certifies a violation makes the claim fail; an undecided box at the
//! depth limit makes the subdivision too coarse.

use std::fmt;

use rayon::prelude::*;
use rug::float::Round;
use rug::Float;

use crate::chebyshev::{ellipse_norm, EllipseSpec};
use crate::error::{Error, Result};
use crate::ifs::{Ifs, MoebiusMap, Sign};
use crate::operator::{AprioriConstants, CERTIFIED_S_RANGE};
use crate::rigor::{CInterval, Interval};

/// The four verified statements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Claim {
    /// `G_n^±(E_{R_A}) ⊂ E_{r_A}` for `n ∈ ℕ`, and `G_n^±([-1,1]²) ⊂ E_{r_A}` for `|n| ≥ ν_A`.
    EllipseInclusion,
    /// `|J_n^±| ≤ max{3/(4(n+1)), 36/n²}` on `E_{R_A}` and `|n²J_n^±| ≤ C_A ν_A²` on the square for `|n| ≥ ν_A`.
    JacobianBounds,
    /// `sup_{E_{R_A}} Σ_{n,±} |J_n^±|^s ≤ W_A` for `s` in the certified range.
    OperatorNorm,
    /// `Σ_{n,±} log|J_n^±|·|J_n^±|^s ∈ [−D⁻, −D⁺]` on the square.
    LinearResponse,
}

impl Claim {
    pub const ALL: [Claim; 4] = [Claim::EllipseInclusion, Claim::JacobianBounds, Claim::OperatorNorm, Claim::LinearResponse];

    pub fn id(self) -> &'static str {
        match self {
            Claim::EllipseInclusion => "ellipse_inclusion",
            Claim::JacobianBounds => "jacobian_bounds",
            Claim::OperatorNorm => "operator_norm_W",
            Claim::LinearResponse => "linear_response_D",
        }
    }

    pub fn from_id(s: &str) -> Option<Claim> {
        Claim::ALL.into_iter().find(|c| c.id() == s)
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Subdivision and precision controls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AprioriConfig {
    /// Cells per axis of the initial grid.
    pub subdivision: usize,
    /// Integer indices checked one by one; larger ones go through `t = 1/n`.
    pub n_max: u64,
    /// Head/tail split of the linear-response sum.
    pub n_switch: u64,
    /// Maximum number of bisections applied to an undecided box.
    pub max_depth: u32,
    pub prec: u32,
}

impl Default for AprioriConfig {
    fn default() -> Self {
        AprioriConfig { subdivision: 40, n_max: 30, n_switch: 30, max_depth: 6, prec: 64 }
    }
}

impl AprioriConfig {
    pub fn with_subdivision(subdivision: usize) -> Self {
        AprioriConfig { subdivision, ..Default::default() }
    }

    fn check(&self) -> Result<()> {
        if self.subdivision == 0 || self.n_max < 1 || self.n_switch < 1 || self.prec < 32 {
            return Err(Error::Parameter(format!("invalid a priori configuration {self:?}")));
        }
        Ok(())
    }
}

/// Outcome of one verified claim.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub claim: Claim,
    /// Human-readable description of the index range covered.
    pub n_range: String,
    /// Number of leaf boxes evaluated.
    pub boxes: usize,
    /// Certified distance from the worst box to the claimed constant, rounded down.
    pub slack: f64,
    pub passed: bool,
    pub constants: AprioriConstants,
    pub subdivision: usize,
    pub prec: u32,
    /// Failure reason, empty on success.
    pub message: String,
}

/// A priori constants whose four claims have been verified.
#[derive(Clone, Debug)]
pub struct VerifiedConstants {
    constants: AprioriConstants,
}

impl VerifiedConstants {
    pub fn constants(&self) -> &AprioriConstants {
        &self.constants
    }

    /// Accepts `constants` only if every claim has a passing report for exactly these values.
    pub fn from_reports(constants: AprioriConstants, reports: &[VerificationReport]) -> Result<Self> {
        for claim in Claim::ALL {
            let Some(r) = reports.iter().find(|r| r.claim == claim) else {
                return Err(Error::Unverified(format!("no report for {claim}")));
            };
            if r.constants != constants {
                return Err(Error::Unverified(format!("report for {claim} was produced for other constants")));
            }
            if !r.passed || r.slack.is_nan() || r.slack <= 0.0 {
                return Err(Error::Unverified(format!("{claim} did not pass: {}", r.message)));
            }
        }
        Ok(VerifiedConstants { constants })
    }

    /// Skips verification. For tests and diagnostics only; nothing built from
    /// this value is a proof.
    #[doc(hidden)]
    pub fn unchecked(constants: AprioriConstants) -> Self {
        VerifiedConstants { constants }
    }
}

// ---------------------------------------------------------------------------
// Box engine

#[derive(Clone, Debug)]
enum BoxCheck {
    /// `excess < 0` is the (negated) margin of the box; `value` is a
    /// claim-specific quantity aggregated by maximum.
    Pass { excess: Float, value: Float },
    Fail(String),
    Unknown,
}

#[derive(Clone, Debug, Default)]
struct Sweep {
    leaves: usize,
    excess: Option<Float>,
    value: Option<Float>,
    failure: Option<String>,
    unknown: usize,
    first_unknown: Option<String>,
}

fn fmax(a: Option<Float>, b: Option<Float>) -> Option<Float> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if b > a { b } else { a }),
        (a, None) => a,
        (None, b) => b,
    }
}

impl Sweep {
    fn merge(mut self, o: Sweep) -> Sweep {
        self.leaves += o.leaves;
        self.excess = fmax(self.excess, o.excess);
        self.value = fmax(self.value, o.value);
        if self.failure.is_none() {
            self.failure = o.failure;
        }
        self.unknown += o.unknown;
        if self.first_unknown.is_none() {
            self.first_unknown = o.first_unknown;
        }
        self
    }

    /// Converts to `Ok(slack)` or the appropriate error.
    fn verdict(&self, what: &str) -> Result<f64> {
        if let Some(f) = &self.failure {
            return Err(Error::VerificationFailed(format!("{what}: {f}")));
        }
        if self.unknown > 0 {
            return Err(Error::SubdivisionTooCoarse(format!(
                "{what}: {} undecided boxes, first at {}",
                self.unknown,
                self.first_unknown.as_deref().unwrap_or("?")
            )));
        }
        let e = self.excess.as_ref().ok_or_else(|| Error::Parameter(format!("{what}: empty sweep")))?;
        Ok(Float::with_val(e.prec(), -e).to_f64_round(Round::Down))
    }
}

fn describe(b: &[Interval]) -> String {
    let parts: Vec<String> = b.iter().map(|x| format!("[{:.6}, {:.6}]", x.lo().to_f64(), x.hi().to_f64())).collect();
    parts.join(" × ")
}

fn refine<F>(cell: Vec<Interval>, scales: &[f64], depth: u32, max_depth: u32, check: &F) -> Sweep
where
    F: Fn(&[Interval]) -> BoxCheck + Sync,
{
    match check(&cell) {
        BoxCheck::Pass { excess, value } => Sweep { leaves: 1, excess: Some(excess), value: Some(value), ..Default::default() },
        BoxCheck::Fail(why) => Sweep { leaves: 1, failure: Some(format!("{why} on {}", describe(&cell))), ..Default::default() },
        BoxCheck::Unknown if depth >= max_depth => {
            Sweep { leaves: 1, unknown: 1, first_unknown: Some(describe(&cell)), ..Default::default() }
        }
        BoxCheck::Unknown => {
            // Bisect the dimension that is widest relative to its initial cell width.
            let mut best = None;
            let mut best_w = 0.0;
            for (i, x) in cell.iter().enumerate() {
                if scales[i] > 0.0 {
                    let w = x.width().to_f64() / scales[i];
                    if w > best_w {
                        best_w = w;
                        best = Some(i);
                    }
                }
            }
            let Some(i) = best else {
                return Sweep { leaves: 1, unknown: 1, first_unknown: Some(describe(&cell)), ..Default::default() };
            };
            let (a, b) = cell[i].bisect();
            let mut left = cell.clone();
            left[i] = a;
            let mut right = cell;
            right[i] = b;
            refine(left, scales, depth + 1, max_depth, check).merge(refine(right, scales, depth + 1, max_depth, check))
        }
    }
}

/// Runs `check` over the product grid of `axes[i]` split into `counts[i]` cells,
/// bisecting undecided boxes. Aggregation is in grid order, independent of
/// the thread count.
fn sweep<F>(axes: &[Interval], counts: &[usize], max_depth: u32, check: F) -> Sweep
where
    F: Fn(&[Interval]) -> BoxCheck + Sync,
{
    let pieces: Vec<Vec<Interval>> = axes.iter().zip(counts).map(|(a, &c)| a.subdivide(c)).collect();
    let scales: Vec<f64> = pieces.iter().map(|p| p[0].width().to_f64()).collect();
    let total: usize = counts.iter().product();
    let cells: Vec<Vec<Interval>> = (0..total)
        .map(|mut idx| {
            let mut cell = vec![Interval::zero(axes[0].prec()); axes.len()];
            for d in (0..axes.len()).rev() {
                cell[d] = pieces[d][idx % counts[d]].clone();
                idx /= counts[d];
            }
            cell
        })
        .collect();
    cells
        .into_par_iter()
        .map(|c| refine(c, &scales, 0, max_depth, &check))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Sweep::default(), Sweep::merge)
}

/// `value ≤ bound` check: pass with excess `value.hi − bound.lo`, fail if
/// `value.lo > bound.hi`.
fn upper_check(value: &Interval, bound: &Interval, what: &str) -> BoxCheck {
    if value.hi() < bound.lo() {
        BoxCheck::Pass { excess: (value - bound).hi().clone(), value: value.hi().clone() }
    } else if value.lo() > bound.hi() {
        BoxCheck::Fail(format!("{what} ≥ {} exceeds {}", value.lo().to_f64(), bound.hi().to_f64()))
    } else {
        BoxCheck::Unknown
    }
}

fn combine(a: BoxCheck, b: BoxCheck) -> BoxCheck {
    match (a, b) {
        (BoxCheck::Fail(w), _) | (_, BoxCheck::Fail(w)) => BoxCheck::Fail(w),
        (BoxCheck::Unknown, _) | (_, BoxCheck::Unknown) => BoxCheck::Unknown,
        (BoxCheck::Pass { excess: e1, value: v1 }, BoxCheck::Pass { excess: e2, value: v2 }) => BoxCheck::Pass {
            excess: fmax(Some(e1), Some(e2)).expect("both present"),
            value: fmax(Some(v1), Some(v2)).expect("both present"),
        },
    }
}

// ---------------------------------------------------------------------------
// Geometry helpers

/// `cos(θ + iκ) = cos θ cosh κ − i sin θ sinh κ`.
fn ccos(theta: &Interval, kappa: &Interval) -> CInterval {
    CInterval::new(&theta.cos() * &kappa.cosh(), -(&theta.sin() * &kappa.sinh()))
}

/// Boundary point of `E_R^{2,2}` for `(θ₁, θ₂, α)`.
fn boundary_point(theta1: &Interval, theta2: &Interval, alpha: &Interval, r: &Interval) -> (CInterval, CInterval) {
    let k1 = r * &alpha.cos();
    let k2 = r * &alpha.sin();
    (ccos(theta1, &k1), ccos(theta2, &k2))
}

/// `t = e^{−iα}/ν`, the circle `|n| = ν`.
fn circle_t(alpha: &Interval, nu: &Interval) -> Result<CInterval> {
    Ok(CInterval::new(alpha.cos().div(nu)?, -alpha.sin().div(nu)?))
}

fn pi_interval(prec: u32) -> Interval {
    Interval::pi(prec)
}

fn hull0(prec: u32, hi: &Interval) -> Interval {
    Interval::from_bounds(Float::new(prec), hi.hi().clone())
}

fn real(x: &Interval) -> CInterval {
    CInterval::real(x.clone())
}

/// The `+` map and its mirror partner for integer `n`.
fn integer_maps(ifs: &Ifs, n: u64) -> (MoebiusMap, MoebiusMap) {
    let nc = CInterval::from_i64(ifs.prec(), n as i64);
    (ifs.matrix(Sign::Plus, &nc), ifs.matrix(Sign::Minus, &nc))
}

fn t_maps(ifs: &Ifs, t: &CInterval) -> (MoebiusMap, MoebiusMap) {
    (ifs.matrix_t(Sign::Plus, t), ifs.matrix_t(Sign::Minus, t))
}

/// `Q + tP` written as `w ↦ κ + (αw + β)/(γw + δ)` with `κ ⊇ a_Q/c_Q`.
///
/// `Q` has rank one, so `α = (a_Q − κc_Q) + t(a_P − κc_P)` and
/// `β = (b_Q − κd_Q) + t(b_P − κd_P)` are `O(t)`; evaluating the plain
/// quotient over a `t` interval instead loses everything to cancellation.
struct TailMap {
    kappa: CInterval,
    alpha: CInterval,
    beta: CInterval,
    gamma: CInterval,
    delta: CInterval,
}

impl TailMap {
    fn new(ifs: &Ifs, sign: Sign, t: &CInterval) -> Result<Self> {
        let q = ifs.q_matrix(sign);
        let p = ifs.p_matrix(sign);
        let kappa = q.a.div(&q.c)?;
        let alpha = &(&q.a - &(&kappa * &q.c)) + &(t * &(&p.a - &(&kappa * &p.c)));
        let beta = &(&q.b - &(&kappa * &q.d)) + &(t * &(&p.b - &(&kappa * &p.d)));
        let gamma = &q.c + &(t * &p.c);
        let delta = &q.d + &(t * &p.d);
        Ok(TailMap { kappa, alpha, beta, gamma, delta })
    }

    /// Mean-value form in `w` around the midpoint `c`:
    /// `κ + h(c) + h'(w)(w − c)` with `h = (αw+β)/(γw+δ)`, `h' = (αδ−βγ)/(γw+δ)²`.
    fn apply(&self, w: &CInterval) -> Result<CInterval> {
        let (re, im) = w.mid();
        let c = CInterval::new(Interval::point(re), Interval::point(im));
        let h = (&(&self.alpha * &c) + &self.beta).div(&(&(&self.gamma * &c) + &self.delta))?;
        let det = &(&self.alpha * &self.delta) - &(&self.beta * &self.gamma);
        let den = &(&self.gamma * w) + &self.delta;
        let slope = det.div(&den.sqr())?;
        Ok(&(&self.kappa + &h) + &(&slope * &(w - &c)))
    }
}

/// `G` for `t` in an interval around the limit, through [`TailMap`].
fn tail_lift(ifs: &Ifs, t: &CInterval, z1: &CInterval, z2: &CInterval) -> Result<(CInterval, CInterval)> {
    let ms = TailMap::new(ifs, Sign::Plus, t)?;
    let mf = TailMap::new(ifs, Sign::Minus, t)?;
    let iz2 = z2.mul_i();
    let a = ms.apply(&(z1 + &iz2))?;
    let b = mf.apply(&(z1 - &iz2))?;
    Ok(((&a + &b).mul_2si(-1), (&a - &b).div_i().mul_2si(-1)))
}

/// `|J| = 9/(|q_σ(z1+iz2)|·|q_{−σ}(z1−iz2)|)`; only the modulus is needed,
/// which avoids a rectangular complex division.
fn jacobian(ifs: &Ifs, ms: &MoebiusMap, mf: &MoebiusMap, z1: &CInterval, z2: &CInterval) -> Option<Interval> {
    let p = ifs.prec();
    let iz2 = z2.mul_i();
    let qa = ms.denom(&(z1 + &iz2)).abs();
    let qb = mf.denom(&(z1 - &iz2)).abs();
    Interval::from_i64(p, 9).div(&(&qa * &qb)).ok()
}

fn ellipse_value(ms: &MoebiusMap, mf: &MoebiusMap, z1: &CInterval, z2: &CInterval, r: f64) -> Option<Interval> {
    let (u, v) = Ifs::lift_centered(ms, mf, z1, z2).ok()?;
    Some(ellipse_norm(&EllipseSpec { d: 2, p: 2.0, r }, &[u, v]))
}

/// Boundary boxes of `E_{R_A}` with cached images under `cos`, shared by all `n`.
struct BoundaryGrid {
    cells: Vec<Vec<Interval>>,
    z: Vec<(CInterval, CInterval)>,
    scales: Vec<f64>,
    rb: Interval,
}

impl BoundaryGrid {
    fn new(c: &AprioriConstants, cfg: &AprioriConfig) -> Self {
        let p = cfg.prec;
        let rb = AprioriConstants::exact(c.r_big, p);
        let pieces = boundary_axes(p).map(|a| a.subdivide(cfg.subdivision));
        let mut cells = Vec::with_capacity(cfg.subdivision.pow(3));
        for a in &pieces[0] {
            for b in &pieces[1] {
                for g in &pieces[2] {
                    cells.push(vec![a.clone(), b.clone(), g.clone()]);
                }
            }
        }
        let z = cells.par_iter().map(|b| boundary_point(&b[0], &b[1], &b[2], &rb)).collect();
        let scales = pieces.iter().map(|p| p[0].width().to_f64()).collect();
        BoundaryGrid { cells, z, scales, rb }
    }

    /// Runs `check(z1, z2, t)` over the boundary (and over `t` if given), bisecting undecided boxes.
    fn sweep<F>(&self, t: Option<&Interval>, max_depth: u32, check: F) -> Sweep
    where
        F: Fn(&CInterval, &CInterval, Option<&Interval>) -> BoxCheck + Sync,
    {
        // A `t` axis adds a fourth dimension to bisect, so allow a few more levels.
        let max_depth = if t.is_some() { max_depth + 4 } else { max_depth };
        let mut scales = self.scales.clone();
        if let Some(t) = t {
            scales.push(t.width().to_f64());
        }
        let full = |b: &[Interval]| {
            let (z1, z2) = boundary_point(&b[0], &b[1], &b[2], &self.rb);
            check(&z1, &z2, b.get(3))
        };
        (0..self.cells.len())
            .into_par_iter()
            .map(|i| {
                let (z1, z2) = &self.z[i];
                match check(z1, z2, t) {
                    BoxCheck::Pass { excess, value } => {
                        Sweep { leaves: 1, excess: Some(excess), value: Some(value), ..Default::default() }
                    }
                    _ => {
                        let mut cell = self.cells[i].clone();
                        if let Some(t) = t {
                            cell.push(t.clone());
                        }
                        refine(cell, &scales, 0, max_depth, &full)
                    }
                }
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(Sweep::default(), Sweep::merge)
    }
}

fn boundary_axes(prec: u32) -> [Interval; 3] {
    let pi = pi_interval(prec);
    let a = Interval::from_bounds(Float::new(prec), pi.hi().clone());
    [a.clone(), a.clone(), a]
}

fn square_axes(prec: u32) -> [Interval; 2] {
    let one = Interval::from_bounds(Float::with_val(prec, -1), Float::with_val(prec, 1));
    [one.clone(), one]
}

/// Index block `a < n ≤ b` (`b = ∞` for the last) of the tail `n > n_max`,
/// with `t = 1/n` enclosed by `t`.
struct TailBlock {
    t: Interval,
    a: u64,
    b: Option<u64>,
}

/// Doubling blocks `(a, 2a]` from `n_max` up to `16·n_max`, then `(16·n_max, ∞)`.
/// Near `t = 0` the tail maps vary fast enough that one `t` interval is too wide.
fn tail_blocks(prec: u32, n_max: u64) -> Result<Vec<TailBlock>> {
    let one = Interval::one(prec);
    let mut out = Vec::new();
    let mut a = n_max;
    while a < 16 * n_max {
        let b = 2 * a;
        let lo = one.div(&Interval::from_i64(prec, b as i64))?;
        let hi = one.div(&Interval::from_i64(prec, a as i64 + 1))?;
        out.push(TailBlock { t: Interval::from_bounds(lo.lo().clone(), hi.hi().clone()), a, b: Some(b) });
        a = b;
    }
    let hi = one.div(&Interval::from_i64(prec, a as i64 + 1))?;
    out.push(TailBlock { t: hull0(prec, &hi), a, b: None });
    Ok(out)
}

/// `[0, 1/(n_max+1)]`.
fn tail_t(prec: u32, n_max: u64) -> Result<Interval> {
    Ok(hull0(prec, &Interval::one(prec).div(&Interval::from_i64(prec, n_max as i64 + 1))?))
}

fn timed<T>(what: &str, f: impl FnOnce() -> T) -> T {
    let t = std::time::Instant::now();
    let out = f();
    log::debug!("{what}: {:.1?}", t.elapsed());
    out
}

fn gather(parts: Vec<(String, Sweep)>) -> Result<(f64, usize)> {
    let mut slack = f64::INFINITY;
    let mut boxes = 0;
    for (what, s) in &parts {
        boxes += s.leaves;
        slack = slack.min(s.verdict(what)?);
    }
    Ok((slack, boxes))
}

/// Poles of `G` and `J` in `t` stay outside the closed disk `|t| ≤ 1/ν` for
/// every point of the square.
fn pole_exclusion(ifs: &Ifs, nu: &Interval, cfg: &AprioriConfig) -> Result<Sweep> {
    let p = ifs.prec();
    let tmax = Interval::one(p).div(nu)?;
    let t_axis = Interval::from_bounds((-&tmax).lo().clone(), tmax.hi().clone());
    let [x, y] = square_axes(p);
    let g = (cfg.subdivision / 4).max(1);
    Ok(sweep(&[x, y, t_axis.clone(), t_axis], &[g, g, 4, 4], cfg.max_depth + 4, |b| {
        let t = CInterval::new(b[2].clone(), b[3].clone());
        let tabs = t.abs();
        if tabs.lo() > tmax.hi() {
            return BoxCheck::Pass { excess: Float::with_val(p, -1), value: Float::new(p) };
        }
        let (ms, mf) = t_maps(ifs, &t);
        let w = CInterval::new(b[0].clone(), b[1].clone());
        let q1 = ms.denom(&w);
        let q2 = mf.denom(&w.conj());
        if q1.contains_zero() || q2.contains_zero() {
            return BoxCheck::Unknown;
        }
        let m = q1.abs().min(&q2.abs());
        BoxCheck::Pass { excess: (-m.lo().clone()), value: Float::new(p) }
    }))
}

// ---------------------------------------------------------------------------
// (a) ellipse inclusion

fn inclusion_boundary(grid: &BoundaryGrid, ifs: &Ifs, n: Option<u64>, c: &AprioriConstants, cfg: &AprioriConfig, t: Option<&Interval>) -> Sweep {
    let rs = AprioriConstants::exact(c.r_small, ifs.prec());
    let fixed = n.map(|n| integer_maps(ifs, n));
    grid.sweep(t, cfg.max_depth, |z1, z2, t| {
        let value = match (&fixed, t) {
            (Some((ms, mf)), _) => ellipse_value(ms, mf, z1, z2, c.r_small),
            (None, Some(t)) => tail_lift(ifs, &real(t), z1, z2)
                .ok()
                .map(|(u, v)| ellipse_norm(&EllipseSpec { d: 2, p: 2.0, r: c.r_small }, &[u, v])),
            (None, None) => None,
        };
        match value {
            Some(v) => upper_check(&v, &rs, "ellipse norm"),
            None => BoxCheck::Unknown,
        }
    })
}

/// Inclusion `G_n^±(∂E_{R_A}) ⊂ E_{r_A}` for a single integer `n`.
pub fn verify_ellipse_inclusion_at(constants: &AprioriConstants, cfg: &AprioriConfig, n: u64) -> Result<VerificationReport> {
    cfg.check()?;
    let ifs = Ifs::new(cfg.prec);
    let grid = BoundaryGrid::new(constants, cfg);
    let sw = inclusion_boundary(&grid, &ifs, Some(n), constants, cfg, None);
    let (slack, boxes) = gather(vec![(format!("n = {n}"), sw)])?;
    Ok(report(Claim::EllipseInclusion, format!("n = {n}"), boxes, slack, constants, cfg))
}

/// Full inclusion claim: integers `0..=n_max`, the tail `n > n_max`, and the
/// square for `|n| ≥ ν` (circle `|n| = ν`, limit `n = ∞`, pole exclusion).
pub fn verify_ellipse_inclusion(constants: &AprioriConstants, cfg: &AprioriConfig) -> Result<VerificationReport> {
    cfg.check()?;
    let p = cfg.prec;
    let ifs = Ifs::new(p);
    let grid = BoundaryGrid::new(constants, cfg);
    let mut parts = Vec::new();
    for n in 0..=cfg.n_max {
        parts.push((format!("n = {n}"), timed(&format!("incl {n}"), || inclusion_boundary(&grid, &ifs, Some(n), constants, cfg, None))));
    }
    for blk in tail_blocks(p, cfg.n_max)? {
        let what = match blk.b {
            Some(b) => format!("{} < n <= {b}", blk.a),
            None => format!("n > {}", blk.a),
        };
        let sw = timed(&what, || inclusion_boundary(&grid, &ifs, None, constants, cfg, Some(&blk.t)));
        parts.push((what, sw));
    }
    let nu = AprioriConstants::exact(constants.nu, p);
    parts.push(("|n| = ν".into(), timed("circle", || square_circle(&ifs, constants, cfg, &nu, true))?));
    parts.push(("n = ∞".into(), square_limit(&ifs, constants, cfg, true)));
    parts.push(("poles in |n| ≥ ν".into(), timed("poles", || pole_exclusion(&ifs, &nu, cfg))?));
    let (slack, boxes) = gather(parts)?;
    let range = format!("0..={} integer, n > {} via t = 1/n, complex |n| >= {} on the square", cfg.n_max, cfg.n_max, constants.nu);
    Ok(report(Claim::EllipseInclusion, range, boxes, slack, constants, cfg))
}

/// On the square and the circle `|n| = ν`: the image lies in `E_{r_A}`
/// (`inclusion`) or `|n²J| ≤ C_A ν²` (otherwise).
fn square_circle(ifs: &Ifs, c: &AprioriConstants, cfg: &AprioriConfig, nu: &Interval, inclusion: bool) -> Result<Sweep> {
    let p = ifs.prec();
    let [x, y] = square_axes(p);
    let pi = pi_interval(p);
    let alpha = Interval::from_bounds(Float::new(p), pi.hi().clone());
    let rs = AprioriConstants::exact(c.r_small, p);
    let cap = c.scaled_jacobian_bound(p);
    let s = cfg.subdivision;
    Ok(sweep(&[x, y, alpha], &[s, s, s], cfg.max_depth, |b| {
        let Ok(t) = circle_t(&b[2], nu) else { return BoxCheck::Unknown };
        square_eval(ifs, &t, &b[0], &b[1], c, &rs, &cap, inclusion)
    }))
}

fn square_limit(ifs: &Ifs, c: &AprioriConstants, cfg: &AprioriConfig, inclusion: bool) -> Sweep {
    let p = ifs.prec();
    let [x, y] = square_axes(p);
    let rs = AprioriConstants::exact(c.r_small, p);
    let cap = c.scaled_jacobian_bound(p);
    let s = cfg.subdivision;
    let t = CInterval::zero(p);
    sweep(&[x, y], &[s, s], cfg.max_depth, |b| square_eval(ifs, &t, &b[0], &b[1], c, &rs, &cap, inclusion))
}

#[allow(clippy::too_many_arguments)]
fn square_eval(
    ifs: &Ifs,
    t: &CInterval,
    x: &Interval,
    y: &Interval,
    c: &AprioriConstants,
    rs: &Interval,
    cap: &Interval,
    inclusion: bool,
) -> BoxCheck {
    let (ms, mf) = t_maps(ifs, t);
    let (z1, z2) = (real(x), real(y));
    if inclusion {
        match ellipse_value(&ms, &mf, &z1, &z2, c.r_small) {
            Some(v) => upper_check(&v, rs, "ellipse norm"),
            None => BoxCheck::Unknown,
        }
    } else {
        match jacobian(ifs, &ms, &mf, &z1, &z2) {
            Some(j) => upper_check(&j, cap, "|n²J|"),
            None => BoxCheck::Unknown,
        }
    }
}

// ---------------------------------------------------------------------------
// (b), (c) Jacobian bounds

/// Certified suprema of `|J_n^±|` on `E_{R_A}`, found while checking the bounds.
#[derive(Clone, Debug)]
pub struct JacobianSummary {
    /// `sup |J_n|` for `n = 0..=n_max`.
    pub maxima: Vec<Float>,
    /// `sup |n²J_n|` over `n > n_max`.
    pub tail_scaled_max: Float,
    pub n_max: u64,
    pub constants: AprioriConstants,
}

/// `max{3/(4(n+1)), 36/n²}` for `n ≥ 1`; at `n = 0` the first term `3/4` alone.
pub fn jacobian_bound(n: u64, prec: u32) -> Interval {
    let a = Interval::from_ratio(prec, 3, 4 * (n as i64 + 1));
    if n == 0 {
        return a;
    }
    let b = Interval::from_ratio(prec, 36, (n * n) as i64);
    a.max(&b)
}

/// Lower bound of `n²·max{3/(4(n+1)), 36/n²} = max{3/(4t(1+t)), 36}` over `t = 1/n ∈ t`.
fn scaled_jacobian_bound_t(t: &Interval) -> Interval {
    let p = t.prec();
    let th = Interval::point(t.hi().clone());
    let first = Interval::from_ratio(p, 3, 4).div(&(&th * &(&th + &Interval::one(p)))).unwrap_or_else(|_| Interval::zero(p));
    let lower = Interval::point(first.lo().clone());
    lower.max(&Interval::from_i64(p, 36))
}

fn jacobian_boundary(grid: &BoundaryGrid, ifs: &Ifs, n: Option<u64>, cfg: &AprioriConfig, t: Option<&Interval>) -> Sweep {
    let p = ifs.prec();
    let fixed = n.map(|n| (integer_maps(ifs, n), jacobian_bound(n, p)));
    grid.sweep(t, cfg.max_depth, |z1, z2, t| match (&fixed, t) {
        (Some(((ms, mf), bound)), _) => match jacobian(ifs, ms, mf, z1, z2) {
            Some(j) => upper_check(&j, bound, "|J|"),
            None => BoxCheck::Unknown,
        },
        (None, Some(t)) => {
            // t-scaled matrices give n²J directly.
            let (ms, mf) = t_maps(ifs, &real(t));
            match jacobian(ifs, &ms, &mf, z1, z2) {
                Some(j) => upper_check(&j, &scaled_jacobian_bound_t(t), "|n²J|"),
                None => BoxCheck::Unknown,
            }
        }
        (None, None) => BoxCheck::Unknown,
    })
}

/// Certified `sup |J_n|` on `E_{R_A}` for a single integer `n`, and whether
/// the closed-form bound holds there.
pub fn jacobian_max(constants: &AprioriConstants, cfg: &AprioriConfig, n: u64) -> Result<(Float, VerificationReport)> {
    cfg.check()?;
    let ifs = Ifs::new(cfg.prec);
    let grid = BoundaryGrid::new(constants, cfg);
    let sw = jacobian_boundary(&grid, &ifs, Some(n), cfg, None);
    let max = sw.value.clone().ok_or_else(|| Error::Parameter("empty sweep".into()))?;
    let (slack, boxes) = gather(vec![(format!("n = {n}"), sw)])?;
    Ok((max, report(Claim::JacobianBounds, format!("n = {n}"), boxes, slack, constants, cfg)))
}

/// Full Jacobian claim, returning the suprema needed for the operator norm.
pub fn verify_jacobian_bounds(constants: &AprioriConstants, cfg: &AprioriConfig) -> Result<(VerificationReport, JacobianSummary)> {
    cfg.check()?;
    let p = cfg.prec;
    let ifs = Ifs::new(p);
    let grid = BoundaryGrid::new(constants, cfg);
    let mut parts = Vec::new();
    let mut maxima = Vec::new();
    for n in 0..=cfg.n_max {
        let sw = jacobian_boundary(&grid, &ifs, Some(n), cfg, None);
        maxima.push(sw.value.clone().unwrap_or_else(|| Float::with_val(p, f64::INFINITY)));
        parts.push((format!("n = {n}"), sw));
    }
    let tail = tail_blocks(p, cfg.n_max)?
        .iter()
        .map(|blk| jacobian_boundary(&grid, &ifs, None, cfg, Some(&blk.t)))
        .fold(Sweep::default(), Sweep::merge);
    let tail_scaled_max = tail.value.clone().unwrap_or_else(|| Float::with_val(p, f64::INFINITY));
    parts.push((format!("n > {}", cfg.n_max), tail));
    let nu = AprioriConstants::exact(constants.nu, p);
    parts.push(("|n| = ν".into(), square_circle(&ifs, constants, cfg, &nu, false)?));
    parts.push(("n = ∞".into(), square_limit(&ifs, constants, cfg, false)));
    parts.push(("poles in |n| ≥ ν".into(), pole_exclusion(&ifs, &nu, cfg)?));
    let (slack, boxes) = gather(parts)?;
    let range = format!(
        "0..={} integer, n > {} via t = 1/n, complex |n| >= {} on the square",
        cfg.n_max, cfg.n_max, constants.nu
    );
    let summary = JacobianSummary { maxima, tail_scaled_max, n_max: cfg.n_max, constants: *constants };
    Ok((report(Claim::JacobianBounds, range, boxes, slack, constants, cfg), summary))
}

// ---------------------------------------------------------------------------
// W: operator-norm budget

/// `Σ_{n,±} |J_n^±(z)|^s` over a boundary box, for all `s` in the certified range.
///
/// The head `n ≤ n_max` is summed term by term. A tail block `a < n ≤ b` with
/// `c_lo ≤ |n²J| ≤ c_hi` on the box contributes at most
/// `max_s c_hi^s·∫_a^b n^{−2s_lo} dn` and at least `min_s c_lo^s·∫_{a+1}^{b+1} n^{−2s_hi} dn`.
struct NormSum {
    heads: Vec<(MoebiusMap, MoebiusMap)>,
    /// Maps at `t` over the block, and the lower and upper integral weights.
    tails: Vec<((MoebiusMap, MoebiusMap), Interval, Interval)>,
    s: Interval,
}

impl NormSum {
    fn new(ifs: &Ifs, n_max: u64) -> Result<Self> {
        let p = ifs.prec();
        let (s_lo, s_hi) = s_range(p);
        let one = Interval::one(p);
        let beta_lo = &s_lo.mul_2si(1) - &one;
        let beta_hi = &s_hi.mul_2si(1) - &one;
        let decay = |n: u64, beta: &Interval| Interval::from_i64(p, n as i64).pow(&(-beta));
        let mut tails = Vec::new();
        for blk in tail_blocks(p, n_max)? {
            let (upper, lower) = match blk.b {
                Some(b) => (&decay(blk.a, &beta_lo)? - &decay(b, &beta_lo)?, &decay(blk.a + 1, &beta_hi)? - &decay(b + 1, &beta_hi)?),
                None => (decay(blk.a, &beta_lo)?, decay(blk.a + 1, &beta_hi)?),
            };
            tails.push((t_maps(ifs, &real(&blk.t)), lower.div(&beta_hi)?, upper.div(&beta_lo)?));
        }
        Ok(NormSum {
            heads: (0..=n_max).map(|n| integer_maps(ifs, n)).collect(),
            tails,
            s: s_lo.hull(&s_hi),
        })
    }

    fn eval(&self, ifs: &Ifs, z1: &CInterval, z2: &CInterval) -> Option<Interval> {
        let p = ifs.prec();
        let lower = |x: &Interval| Interval::point(x.lo().clone());
        let upper = |x: &Interval| Interval::point(x.hi().clone());
        let mut lo = Interval::zero(p);
        let mut hi = Interval::zero(p);
        for (ms, mf) in &self.heads {
            for j in [jacobian(ifs, ms, mf, z1, z2)?, jacobian(ifs, mf, ms, z1, z2)?] {
                let t = j.pow(&self.s).ok()?;
                lo = &lo + &lower(&t);
                hi = &hi + &upper(&t);
            }
        }
        for ((ms, mf), w_lo, w_hi) in &self.tails {
            for c in [jacobian(ifs, ms, mf, z1, z2)?, jacobian(ifs, mf, ms, z1, z2)?] {
                let cs = c.pow(&self.s).ok()?;
                lo = &lo + &(&lower(&cs) * &lower(w_lo));
                hi = &hi + &(&upper(&cs) * &upper(w_hi));
            }
        }
        Some(Interval::from_bounds(lo.lo().clone(), hi.hi().clone()))
    }
}

/// Operator-norm claim: `sup_{∂E_{R_A}} Σ_{n,±} |J_n^±|^s ≤ W_A` for `s ∈ [1.30, 1.31]`.
/// Each `|J|^s` is plurisubharmonic, so the supremum over `E_{R_A}` is attained on
/// the boundary.
pub fn verify_w(constants: &AprioriConstants, cfg: &AprioriConfig) -> Result<VerificationReport> {
    cfg.check()?;
    let p = cfg.prec;
    let ifs = Ifs::new(p);
    let grid = BoundaryGrid::new(constants, cfg);
    let sum = NormSum::new(&ifs, cfg.n_max)?;
    let w = AprioriConstants::exact(constants.w, p);
    let sw = timed("W", || {
        grid.sweep(None, cfg.max_depth, |z1, z2, _| match sum.eval(&ifs, z1, z2) {
            Some(v) => upper_check(&v, &w, "Σ|J|^s"),
            None => BoxCheck::Unknown,
        })
    });
    let (slack, boxes) = gather(vec![("operator norm".into(), sw)])?;
    let range = format!(
        "0..={} integer, n > {} by t = 1/n blocks, s in [{}, {}]",
        cfg.n_max, cfg.n_max, CERTIFIED_S_RANGE.0, CERTIFIED_S_RANGE.1
    );
    Ok(report(Claim::OperatorNorm, range, boxes, slack, constants, cfg))
}

// ---------------------------------------------------------------------------
// D±: linear response

fn s_range(prec: u32) -> (Interval, Interval) {
    (AprioriConstants::exact(CERTIFIED_S_RANGE.0, prec), AprioriConstants::exact(CERTIFIED_S_RANGE.1, prec))
}

/// Enclosure of `{J^s ln J : J ∈ j, s ∈ s}`, using that the expression
/// increases in `s` and, in `J`, decreases below `e^{−1/s}` and increases above.
pub fn response_term(j: &Interval, s_lo: &Interval, s_hi: &Interval) -> Result<Interval> {
    let p = j.prec();
    if !j.is_positive() {
        return Err(Error::Domain("Jacobian enclosure is not positive".into()));
    }
    let f = |x: &Interval, e: &Interval| -> Result<Interval> { Ok(&x.pow(e)? * &x.ln()?) };
    let thr = |s: &Interval| -> Result<Interval> { Ok((-Interval::one(p).div(s)?).exp()) };
    let jl = Interval::point(j.lo().clone());
    let jh = Interval::point(j.hi().clone());
    if j.hi() < thr(s_lo)?.lo() {
        let lo = f(&jh, s_lo)?;
        let hi = f(&jl, s_hi)?;
        Ok(Interval::from_bounds(lo.lo().clone(), hi.hi().clone()))
    } else if j.lo() > thr(s_hi)?.hi() {
        let lo = f(&jl, s_lo)?;
        let hi = f(&jh, s_hi)?;
        Ok(Interval::from_bounds(lo.lo().clone(), hi.hi().clone()))
    } else {
        let s = Interval::from_bounds(s_lo.lo().clone(), s_hi.hi().clone());
        f(j, &s)
    }
}

/// `∫_A^∞ n^{−2s}(2 ln n − ln c) dn = A^{−β}(2 ln A/β + 2/β² − ln c/β)`, `β = 2s−1`.
fn log_tail_integral(a: &Interval, c: &Interval, s: &Interval) -> Result<Interval> {
    let p = a.prec();
    let beta = &s.mul_2si(1) - &Interval::one(p);
    let la = a.ln()?;
    let inner = &(&la.mul_2si(1) - &c.ln()?).div(&beta)? + &Interval::from_i64(p, 2).div(&beta.sqr())?;
    Ok(&a.pow(&(-&beta))? * &inner)
}

/// Enclosure of `Σ_{n>n₀} J_n^s ln J_n` given `n²J_n ∈ [a, b]` for all `n > n₀`.
pub fn response_tail(n0: u64, scaled: &Interval, s_lo: &Interval, s_hi: &Interval) -> Result<Interval> {
    let p = scaled.prec();
    if !scaled.is_positive() {
        return Err(Error::Domain("scaled Jacobian enclosure is not positive".into()));
    }
    let a = Interval::point(scaled.lo().clone());
    let b = Interval::point(scaled.hi().clone());
    let n0i = Interval::from_i64(p, n0 as i64);
    let n1i = Interval::from_i64(p, n0 as i64 + 1);
    // n ↦ n^{−2s}(2 ln n − ln c) must be positive and decreasing on [n₀, ∞):
    // 2 ln n₀ − ln b > 1/s_lo; and b/(n₀+1)² must lie in the decreasing range of J^s ln J.
    let gap = &n0i.ln()?.mul_2si(1) - &b.ln()?;
    if !(gap.lo() > Interval::one(p).div(s_lo)?.hi()) {
        return Err(Error::Domain("tail start too small for the integral comparison".into()));
    }
    let jmax = b.div(&n1i.sqr())?;
    if !(jmax.hi() < (-Interval::one(p).div(s_lo)?).exp().lo()) {
        return Err(Error::Domain("tail Jacobian outside the monotone range".into()));
    }
    let lo = -(&b.pow(s_lo)? * &log_tail_integral(&n0i, &b, s_lo)?);
    let hi = -(&a.pow(s_hi)? * &log_tail_integral(&n1i, &a, s_hi)?);
    Ok(Interval::from_bounds(lo.lo().clone(), hi.hi().clone()))
}

/// Enclosure of `Σ_{n,±} J^s ln J` over a box of the square.
pub fn response_sum(ifs: &Ifs, heads: &[(MoebiusMap, MoebiusMap)], n_switch: u64, x: &Interval, y: &Interval) -> Result<Interval> {
    let p = ifs.prec();
    let (s_lo, s_hi) = s_range(p);
    let nine = Interval::from_i64(p, 9);
    let w = CInterval::new(x.clone(), y.clone());
    let jac = |m: &MoebiusMap| -> Result<Interval> { nine.div(&m.denom(&w).norm_sqr()) };
    let mut total = Interval::zero(p);
    for (mp, mm) in heads {
        total = &total + &response_term(&jac(mp)?, &s_lo, &s_hi)?;
        total = &total + &response_term(&jac(mm)?, &s_lo, &s_hi)?;
    }
    let t = real(&tail_t(p, n_switch)?);
    for sign in [Sign::Plus, Sign::Minus] {
        let scaled = jac(&ifs.matrix_t(sign, &t))?;
        total = &total + &response_tail(n_switch, &scaled, &s_lo, &s_hi)?;
    }
    Ok(total)
}

/// Linear-response claim `Σ J^s ln J ∈ [−D⁻, −D⁺]` on `[-1,1]²`; by mirror
/// symmetry of the `±` pair only `y ≥ 0` is needed.
pub fn verify_d_bounds(constants: &AprioriConstants, cfg: &AprioriConfig) -> Result<VerificationReport> {
    cfg.check()?;
    let p = cfg.prec;
    let ifs = Ifs::new(p);
    let heads: Vec<_> = (0..=cfg.n_switch).map(|n| integer_maps(&ifs, n)).collect();
    let neg_dp = -AprioriConstants::exact(constants.d_plus, p);
    let neg_dm = -AprioriConstants::exact(constants.d_minus, p);
    let x = Interval::from_bounds(Float::with_val(p, -1), Float::with_val(p, 1));
    let y = Interval::from_bounds(Float::new(p), Float::with_val(p, 1));
    let s = cfg.subdivision;
    let sw = sweep(&[x, y], &[s, s.div_ceil(2)], cfg.max_depth, |b| {
        let Ok(sum) = response_sum(&ifs, &heads, cfg.n_switch, &b[0], &b[1]) else { return BoxCheck::Unknown };
        if sum.lo() > neg_dp.hi() {
            return BoxCheck::Fail(format!("response sum ≥ {} above −D⁺", sum.lo().to_f64()));
        }
        if sum.hi() < neg_dm.lo() {
            return BoxCheck::Fail(format!("response sum ≤ {} below −D⁻", sum.hi().to_f64()));
        }
        let upper = upper_check(&sum, &neg_dp, "response sum");
        let lower = upper_check(&(-&sum), &(-&neg_dm), "negated response sum");
        combine(upper, lower)
    });
    let (slack, boxes) = gather(vec![("response".into(), sw)])?;
    let range = format!("0..={} by boxes, n > {} by integral comparison", cfg.n_switch, cfg.n_switch);
    Ok(report(Claim::LinearResponse, range, boxes, slack, constants, cfg))
}

fn report(claim: Claim, n_range: String, boxes: usize, slack: f64, c: &AprioriConstants, cfg: &AprioriConfig) -> VerificationReport {
    VerificationReport {
        claim,
        n_range,
        boxes,
        slack,
        passed: slack > 0.0,
        constants: *c,
        subdivision: cfg.subdivision,
        prec: cfg.prec,
        message: String::new(),
    }
}

/// A failed claim as a report (for display and caching).
pub fn failed_report(claim: Claim, err: &Error, c: &AprioriConstants, cfg: &AprioriConfig) -> VerificationReport {
    VerificationReport {
        claim,
        n_range: String::new(),
        boxes: 0,
        slack: f64::NAN,
        passed: false,
        constants: *c,
        subdivision: cfg.subdivision,
        prec: cfg.prec,
        message: err.to_string(),
    }
}

/// Runs all four claims; failures are returned as failing reports.
pub fn verify_all(constants: &AprioriConstants, cfg: &AprioriConfig) -> Vec<VerificationReport> {
    let mut out = Vec::with_capacity(4);
    out.push(verify_ellipse_inclusion(constants, cfg).unwrap_or_else(|e| failed_report(Claim::EllipseInclusion, &e, constants, cfg)));
    match verify_jacobian_bounds(constants, cfg) {
        Ok((r, _)) => {
            out.push(r);
            out.push(verify_w(constants, cfg).unwrap_or_else(|e| failed_report(Claim::OperatorNorm, &e, constants, cfg)));
        }
        Err(e) => {
            out.push(failed_report(Claim::JacobianBounds, &e, constants, cfg));
            let dep = Error::Unverified("Jacobian bounds failed".into());
            out.push(failed_report(Claim::OperatorNorm, &dep, constants, cfg));
        }
    }
    out.push(verify_d_bounds(constants, cfg).unwrap_or_else(|e| failed_report(Claim::LinearResponse, &e, constants, cfg)));
    out
}

/// Verifies every claim and returns the verified constants.
pub fn verify_constants(constants: &AprioriConstants, cfg: &AprioriConfig) -> Result<(VerifiedConstants, Vec<VerificationReport>)> {
    let reports = verify_all(constants, cfg);
    let v = VerifiedConstants::from_reports(*constants, &reports)?;
    Ok((v, reports))
}
