//! Non-rigorous stage: dominant eigenpair of the assembled matrix and the
//! secant search for `λ(s) = 1`.

use log::debug;
use rug::Float;

use crate::chebyshev::ChebGrid2D;
use crate::error::{Error, Result};
use crate::operator::{assemble_matrix, OperatorParams, TransferMatrix};
use crate::rigor::Interval;

/// Dominant eigenvalue and eigenvector (node values, sup-normalised to 1).
#[derive(Clone, Debug)]
pub struct EigenPair {
    pub lambda: Float,
    /// Retained coordinates (half grid under `y_even`).
    pub vector: Vec<Float>,
    /// Values at all `K²` nodes.
    pub phi_values: Vec<Float>,
    pub k: usize,
    pub iterations: usize,
}

impl EigenPair {
    /// Node values as a grid of point intervals.
    pub fn phi_grid(&self) -> ChebGrid2D {
        ChebGrid2D { k: self.k, values: self.phi_values.iter().map(|v| Interval::point(v.clone())).collect() }
    }
}

/// Power-iteration controls.
#[derive(Clone, Debug)]
pub struct PowerOptions {
    /// Relative width of the Collatz–Wielandt bracket at which to stop.
    pub tol: Float,
    pub max_iter: usize,
}

impl PowerOptions {
    /// Tolerance `2^{16−prec}`, a little above the rounding floor.
    pub fn for_precision(prec: u32) -> Self {
        let mut tol = Float::with_val(prec, 1);
        tol >>= prec as i32 - 16;
        PowerOptions { tol, max_iter: 5000 }
    }
}

fn sup_normalise(v: &mut [Float]) -> Result<()> {
    let mut big = v[0].clone();
    for x in v.iter() {
        if x.clone().abs() > big.clone().abs() {
            big = x.clone();
        }
    }
    if big.is_zero() || !big.is_finite() {
        return Err(Error::NoConvergence("iterate vanished or overflowed".into()));
    }
    for x in v.iter_mut() {
        *x /= &big;
    }
    Ok(())
}

/// `λ = (Av)_i` at the index where the sup-normalised `v` equals 1, if
/// `‖Av − λv‖_∞ ≤ tol·|λ|`.
fn residual_converged(v: &[Float], w: &[Float], tol: &Float) -> Option<Float> {
    let i = v.iter().position(|x| *x == 1)?;
    let lambda = w[i].clone();
    let p = lambda.prec();
    let mut res = Float::new(p);
    for (a, b) in w.iter().zip(v) {
        let d = Float::with_val(p, a - Float::with_val(p, &lambda * b)).abs();
        if d > res {
            res = d;
        }
    }
    let scale = Float::with_val(p, tol * &lambda).abs();
    (res <= scale && !lambda.is_zero()).then_some(lambda)
}

/// Power iteration. Stops on a small residual `‖Av − λv‖_∞`, or, once the
/// iterate is positive, when the Collatz–Wielandt bracket
/// `min_i (Av)_i/v_i ≤ λ ≤ max_i (Av)_i/v_i` is narrower than `tol·λ`.
pub fn leading_eig(matrix: &TransferMatrix, start: Option<&[Float]>, opts: &PowerOptions) -> Result<EigenPair> {
    let p = matrix.prec;
    let mut v: Vec<Float> = match start {
        Some(s) if s.len() == matrix.dim => s.iter().map(|x| Float::with_val(p, x)).collect(),
        _ => vec![Float::with_val(p, 1); matrix.dim],
    };
    sup_normalise(&mut v)?;
    for it in 1..=opts.max_iter {
        let w = matrix.matvec(&v);
        if let Some(lambda) = residual_converged(&v, &w, &opts.tol) {
            let mut vec = w;
            sup_normalise(&mut vec)?;
            let phi_values = matrix.to_full_grid(&vec);
            debug!("power iteration converged (residual) after {it} steps, λ ≈ {}", lambda.to_f64());
            return Ok(EigenPair { lambda, vector: vec, phi_values, k: matrix.k, iterations: it });
        }
        if v.iter().all(|x| x.is_sign_positive() && !x.is_zero()) {
            let mut lo: Option<Float> = None;
            let mut hi: Option<Float> = None;
            for (a, b) in w.iter().zip(&v) {
                let r = Float::with_val(p, a / b);
                if lo.as_ref().map_or(true, |l| r < *l) {
                    lo = Some(r.clone());
                }
                if hi.as_ref().map_or(true, |h| r > *h) {
                    hi = Some(r);
                }
            }
            let (lo, hi) = (lo.unwrap(), hi.unwrap());
            let gap = Float::with_val(p, &hi - &lo);
            let mut scale = Float::with_val(p, &opts.tol * &hi);
            scale = scale.abs();
            if gap <= scale {
                let mut lambda = Float::with_val(p, &lo + &hi);
                lambda /= 2;
                let mut vec = w;
                sup_normalise(&mut vec)?;
                let phi_values = matrix.to_full_grid(&vec);
                debug!("power iteration converged after {it} steps, λ ≈ {}", lambda.to_f64());
                return Ok(EigenPair { lambda, vector: vec, phi_values, k: matrix.k, iterations: it });
            }
        }
        v = w;
        sup_normalise(&mut v)?;
    }
    Err(Error::NoConvergence(format!("power iteration did not converge in {} steps", opts.max_iter)))
}

/// History of secant iterates.
#[derive(Clone, Debug, Default)]
pub struct SecantState {
    pub history: Vec<(Float, Float)>,
    pub iterations: usize,
}

impl SecantState {
    /// Fails unless `λ` strictly decreases with `s` over all evaluated points.
    pub fn check_monotone(&self) -> Result<()> {
        let mut h = self.history.clone();
        h.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
        for w in h.windows(2) {
            if w[0].0 < w[1].0 && w[1].1 >= w[0].1 {
                return Err(Error::MonotonicityViolation(format!(
                    "λ({}) = {} is not below λ({}) = {}",
                    w[1].0.to_f64(),
                    w[1].1.to_f64(),
                    w[0].0.to_f64(),
                    w[0].1.to_f64()
                )));
            }
        }
        Ok(())
    }
}

/// Result of [`secant_search`].
#[derive(Clone, Debug)]
pub struct SecantOutcome<T> {
    pub s_star: Float,
    pub lambda: Float,
    pub payload: T,
    pub state: SecantState,
}

/// Secant iteration for `λ(s) = 1` from `s0, s1`; stops once
/// `|λ_{t−1} − 1|·|λ_{t−2} − 1| ≤ ε`, then takes one more secant step and
/// evaluates there. `eval` receives the previous payload for warm starts.
pub fn secant_search<T, F>(mut eval: F, s0: Float, s1: Float, epsilon: &Float, max_iter: usize) -> Result<SecantOutcome<T>>
where
    F: FnMut(&Float, Option<&T>) -> Result<(Float, T)>,
{
    let p = s0.prec().max(s1.prec());
    let one = Float::with_val(p, 1);
    let mut state = SecantState::default();
    let (l0, t0) = eval(&s0, None)?;
    state.history.push((s0.clone(), l0.clone()));
    let (l1, t1) = eval(&s1, Some(&t0))?;
    state.history.push((s1.clone(), l1.clone()));
    let (mut sa, mut la) = (s0, l0);
    let (mut sb, mut lb, mut payload) = (s1, l1, t1);
    for it in 1..=max_iter {
        let denom = Float::with_val(p, &lb - &la);
        if denom.is_zero() {
            return Err(Error::NoConvergence("secant denominator vanished".into()));
        }
        let step = Float::with_val(p, &lb - &one) * Float::with_val(p, &sb - &sa) / denom;
        let sc = Float::with_val(p, &sb - &step);
        let prod = Float::with_val(p, &la - &one).abs() * Float::with_val(p, &lb - &one).abs();
        let done = prod <= *epsilon;
        let (lc, tc) = eval(&sc, Some(&payload))?;
        state.history.push((sc.clone(), lc.clone()));
        state.iterations = it;
        debug!("secant step {it}: s = {}, λ − 1 = {:e}", sc.to_f64(), Float::with_val(p, &lc - &one).to_f64());
        if done {
            state.check_monotone()?;
            return Ok(SecantOutcome { s_star: sc, lambda: lc, payload: tc, state });
        }
        sa = sb;
        la = lb;
        sb = sc;
        lb = lc;
        payload = tc;
    }
    Err(Error::NoConvergence(format!("secant search did not converge in {max_iter} steps")))
}

/// `λ(s)` and eigenvector for the operator at `s`, warm-started from `start`.
pub fn eigen_at(template: &OperatorParams, s: &Float, start: Option<&EigenPair>) -> Result<EigenPair> {
    let params = template.with_s(&Interval::point(s.clone()).with_prec(template.prec()))?;
    let m = assemble_matrix(&params)?;
    leading_eig(&m, start.map(|e| e.vector.as_slice()), &PowerOptions::for_precision(template.prec()))
}

/// Secant search over the operator family, started at `1.30` and `1.31`.
pub fn find_dimension(template: &OperatorParams, epsilon: &Float, max_iter: usize) -> Result<SecantOutcome<EigenPair>> {
    let p = template.prec();
    let s0 = Float::with_val(p, Float::parse("1.30").expect("literal"));
    let s1 = Float::with_val(p, Float::parse("1.31").expect("literal"));
    find_dimension_from(template, epsilon, s0, s1, max_iter)
}

/// [`find_dimension`] with custom starting points.
pub fn find_dimension_from(
    template: &OperatorParams,
    epsilon: &Float,
    s0: Float,
    s1: Float,
    max_iter: usize,
) -> Result<SecantOutcome<EigenPair>> {
    secant_search(|s, prev: Option<&EigenPair>| {
        let e = eigen_at(template, s, prev)?;
        Ok((e.lambda.clone(), e))
    }, s0, s1, epsilon, max_iter)
}
