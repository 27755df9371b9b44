//! Oracle comparisons for the accelerated sums.

use gasket_core::euler_maclaurin::make_plan;
use gasket_core::euler_maclaurin::oracles::{basel, brute_force_enclosures, em_enclosure, Family};
use gasket_core::rigor::Interval;
use gasket_core::Result;

#[derive(Clone, Debug)]
pub struct OracleOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct EmCheckConfig {
    pub eps_bits: u32,
    /// Terms of the brute-force partial sums.
    pub terms: u64,
    pub prec: u32,
}

impl Default for EmCheckConfig {
    fn default() -> Self {
        EmCheckConfig { eps_bits: 60, terms: 1_000_000, prec: 128 }
    }
}

const NU: f64 = 10.0;
pub const EXPONENTS: [f64; 3] = [1.0, 1.3, 1.5];
pub const SHIFTS: [i64; 2] = [1, 2];

/// `Σ (n+1)^{-2}` against `π²/6`, then every family against its brute-force
/// enclosure for each `(s, a)`.
pub fn run(cfg: &EmCheckConfig) -> Result<Vec<OracleOutcome>> {
    let p = cfg.prec;
    let eps = 2f64.powi(-(cfg.eps_bits as i32));
    let mut out = Vec::new();

    let plan = make_plan(eps, NU, &Interval::from_f64(p, 1.0), p)?;
    let budget = plan.err_budget.to_f64();
    let budget_ok = budget <= eps * 1024.0;
    out.push(OracleOutcome {
        name: "err_budget".into(),
        passed: budget_ok,
        detail: format!("{budget:e} (limit 2^-{})", cfg.eps_bits.saturating_sub(10)),
    });
    let v = basel(&plan)?;
    let exact = Interval::pi(p).sqr().div(&Interval::from_i64(p, 6))?;
    out.push(OracleOutcome {
        name: "basel".into(),
        passed: v.contains_interval(&exact),
        detail: format!("[{}, {}] width {:e}", v.lo().to_f64(), v.hi().to_f64(), v.width().to_f64()),
    });

    for s in EXPONENTS {
        let plan = make_plan(eps, NU, &Interval::from_f64(p, s), p)?;
        for a in SHIFTS {
            let brute = brute_force_enclosures(&Family::ALL, s, a, cfg.terms, 64)?;
            for (fam, bf) in Family::ALL.into_iter().zip(brute) {
                let em = em_enclosure(fam, s, a, &plan)?;
                out.push(OracleOutcome {
                    name: format!("{} s={s} a={a}", fam.name()),
                    passed: em.overlaps(&bf),
                    detail: format!("em width {:e}, brute width {:e}", em.width().to_f64(), bf.width().to_f64()),
                });
            }
        }
    }
    Ok(out)
}
