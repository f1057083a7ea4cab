//! Fridy's slope condition and a construction showing it cannot be weakened.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::RunConfig;
use crate::convergence::sequence::{Formula, SlopeReport};
use crate::convergence::{stat_limit, Outcome, SymbolicSequence};
use crate::error::{Error, Result};
use crate::num::{floor_nat, fmt_q, nat, q, q_int, Nat, QJson, Q};
use crate::sets::{BlockScheme, Bound, Schedule, TentGeometry};

impl SymbolicSequence {
    /// An index in `[lo, hi]` where `|x_n|` is largest, with a certified
    /// lower bound for `|x_n|` there. `None` when `x = 0` on the range.
    pub fn peak_on(&self, lo: &Nat, hi: &Nat) -> Result<Option<(Nat, Q)>> {
        if lo > hi || lo.is_zero() {
            return Err(Error::Precondition("peak search needs 1 ≤ lo ≤ hi".into()));
        }
        let at = |n: Nat| -> Result<Option<(Nat, Q)>> {
            let (a, b) = self.value_bounds(&n)?;
            let v = if a.is_negative() && b.is_positive() { Q::zero() } else { a.abs().min(b.abs()) };
            Ok((!v.is_zero()).then_some((n, v)))
        };
        match self {
            SymbolicSequence::Constant(_) | SymbolicSequence::Formula(_) => at(lo.clone()),
            SymbolicSequence::Indicator(a) => {
                if a.count_range(lo, hi)?.is_zero() {
                    return Ok(None);
                }
                // first member at or after lo, by bisection on counts
                let (mut l, mut h) = (lo.clone(), hi.clone());
                while l < h {
                    let mid: Nat = (&l + &h) / 2u32;
                    if a.count_range(lo, &mid)?.is_zero() {
                        l = mid + 1u32;
                    } else {
                        h = mid;
                    }
                }
                at(l)
            }
            SymbolicSequence::BlockConstant { scheme, .. } => {
                let mut best: Option<(Nat, Q)> = None;
                let mut k = scheme.block_of(lo)?;
                let mut start = lo.clone();
                loop {
                    if let Some((n, v)) = at(start.clone())? {
                        if best.as_ref().is_none_or(|(_, b)| &v > b) {
                            best = Some((n, v));
                        }
                    }
                    match scheme.a(k)? {
                        Bound::Fin(end) if &end < hi => {
                            start = end + 1u32;
                            k += 1;
                        }
                        _ => break,
                    }
                }
                Ok(best)
            }
            SymbolicSequence::Tent(g) => {
                let mut best: Option<(Nat, Q)> = None;
                for (_, t) in g.tents_upto(hi) {
                    let end = t.end();
                    if &end < lo {
                        continue;
                    }
                    let peak = &t.start + &t.half_width;
                    let mut cands = vec![std::cmp::max(lo, &t.start).clone(), std::cmp::min(hi, &end).clone()];
                    if &peak >= lo && &peak <= hi {
                        cands.push(peak);
                    }
                    for n in cands {
                        if let Some((n, v)) = at(n)? {
                            if best.as_ref().is_none_or(|(_, b)| &v > b) {
                                best = Some((n, v));
                            }
                        }
                    }
                }
                Ok(best)
            }
        }
    }
}

/// `|x_n| ≥ s/2` on the window after a peak, as the slope bound forces.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowEvidence {
    pub n: String,
    pub value: QJson,
    pub width: String,
    pub eps: QJson,
    pub hits: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FridyReport {
    pub sequence: String,
    pub d: QJson,
    pub horizon: u64,
    pub slope: SlopeReport,
    /// The slope condition holds up to the horizon.
    pub applicable: bool,
    pub stat_limit_zero: Outcome,
    /// Largest certified `|x_n|` for `n ∈ [H/2, H]`.
    pub tail_peak: Option<QJson>,
    pub window: Option<WindowEvidence>,
    pub limsup_abs: Option<QJson>,
    pub contradiction: Option<String>,
}

/// Statistical convergence to 0 with `|x_{n+1} − x_n| ≤ d/n` forces `x_n → 0`.
pub fn fridy_check(x: &SymbolicSequence, d: &Q, cfg: &RunConfig) -> Result<FridyReport> {
    let h = cfg.horizon;
    let slope = x.slope_check(d, h)?;
    let applicable = slope.holds();
    let stat = stat_limit(x, &Q::zero(), cfg)?.outcome;
    let limsup = x.limsup_abs();
    let mut contradiction = None;
    let mut tail_peak = None;
    let mut window = None;
    if applicable {
        if let Some((n, v)) = x.peak_on(&nat(h / 2), &nat(h))? {
            tail_peak = Some(QJson(v.clone()));
            // |x_{N+i} − x_N| ≤ Σ d/(N+j) ≤ d·w/N ≤ v/2 for w = ⌊vN/(2d)⌋
            let w = floor_nat(&(&v * q_int(&n) / (q(2, 1) * d)));
            let eps = &v / q(2, 1);
            let end = &n + &w;
            let dset = x.deviation_set(&Q::zero(), &eps)?;
            let hits = dset.count_range(&n, &end)?;
            let ok = hits == &w + 1u32;
            if !ok {
                contradiction = Some(format!("window [{n}, {end}] leaves D_ε, contradicting the slope bound"));
            }
            window = Some(WindowEvidence {
                n: n.to_string(),
                value: QJson(v),
                width: w.to_string(),
                eps: QJson(eps),
                hits: hits.to_string(),
                ok,
            });
        }
        if slope.global && stat == Outcome::CertifiedConverges && limsup.as_ref().is_some_and(|l| l.is_positive()) {
            contradiction = Some("statistically null and slowly varying, yet limsup |x_n| > 0".into());
        }
    }
    Ok(FridyReport {
        sequence: x.to_json(),
        d: QJson(d.clone()),
        horizon: h,
        slope,
        applicable,
        stat_limit_zero: stat,
        tail_peak,
        window,
        limsup_abs: limsup.map(QJson),
        contradiction,
    })
}

/// Seeded sequences satisfying `|x_{n+1} − x_n| ≤ d/n` with `d = 2`.
pub fn fridy_corpus(seed: u64, count: usize) -> Result<Vec<SymbolicSequence>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let s = match rng.gen_range(0..5) {
            0 => {
                let p = rng.gen_range(1..=3u32);
                // c·p ≤ 2
                let c = q(rng.gen_range(1..=20), 10 * p as i64);
                SymbolicSequence::Formula(Formula::InvPower { c, p })
            }
            1 => SymbolicSequence::Constant(q(rng.gen_range(-10..=10), rng.gen_range(1..=10))),
            2 => SymbolicSequence::Formula(Formula::InvLog),
            3 => SymbolicSequence::Tent(TentGeometry::fit(Schedule::Const(q(rng.gen_range(30..=40), 20)))?),
            _ => {
                // factorial blocks, jumps at a_k bounded by 2/k!
                let len = rng.gen_range(1..=6usize);
                let mut vals = vec![Q::zero()];
                for k in 1..len {
                    let step = q(rng.gen_range(-2..=2), 1) / q_int(&crate::num::factorial(k as u64));
                    let next = vals.last().unwrap() + step;
                    vals.push(next);
                }
                let last = vals.pop().unwrap();
                SymbolicSequence::BlockConstant { scheme: BlockScheme::Factorial, prefix: vals, cycle: vec![last] }
            }
        };
        out.push(s);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SharpnessReport {
    pub schedule: String,
    pub horizon: u64,
    pub feasible: bool,
    pub reason: String,
    pub sequence: Option<String>,
    pub ratio: Option<u64>,
    pub base: Option<u64>,
    pub tents_checked: usize,
    pub slope_ok: bool,
    pub stat_limit_zero: Option<Outcome>,
    /// An index `≤ H` with `x_n = 1/2`.
    pub peak: Option<String>,
}

/// Builds tents of height `1/2` whose slope stays below `d_n/n` and checks,
/// with the engine, that the result is statistically null.
pub fn sharpness_search(schedule: Schedule, cfg: &RunConfig) -> Result<SharpnessReport> {
    let h = cfg.horizon;
    let name = match &schedule {
        Schedule::Log => "ln n".to_string(),
        Schedule::Const(d) => fmt_q(d),
    };
    let mut report = SharpnessReport {
        schedule: name,
        horizon: h,
        feasible: false,
        reason: String::new(),
        sequence: None,
        ratio: None,
        base: None,
        tents_checked: 0,
        slope_ok: false,
        stat_limit_zero: None,
        peak: None,
    };
    let g = match TentGeometry::fit(schedule.clone()) {
        Ok(g) => g,
        Err(e) => {
            report.reason = e.to_string();
            return Ok(report);
        }
    };
    report.ratio = Some(g.ratio);
    report.base = Some(g.base);
    let first = g.tent(g.first);
    let first_peak = &first.start + &first.half_width;
    if first_peak > nat(h) {
        return Err(Error::Infeasible(format!("horizon {h} ends before the first peak at {first_peak}")));
    }
    let x = SymbolicSequence::Tent(g.clone());
    report.sequence = Some(x.to_json());
    // inside tent j the step s_j satisfies s_j·n ≤ s_j·(end − 1) ≤ m(N_j) ≤ m(n) ≤ d_n
    let tents = g.tents_upto(&nat(h));
    report.tents_checked = tents.len();
    report.slope_ok = tents
        .iter()
        .all(|(_, t)| t.half_width.is_zero() || q_int(&(t.end() - 1u32)) * &t.step <= schedule.minorant(&t.start));
    report.peak = Some(first_peak.to_string());
    let peak_value = g.value(&first_peak);
    let stat = stat_limit(&x, &Q::zero(), cfg)?.outcome;
    report.stat_limit_zero = Some(stat);
    if !report.slope_ok {
        report.reason = "slope budget exceeded".into();
    } else if peak_value != q(1, 2) {
        report.reason = "no peak of height 1/2 below the horizon".into();
    } else if stat != Outcome::CertifiedConverges {
        report.reason = format!("statistical limit 0 not certified ({stat:?}); the tents carry positive density");
    } else {
        report.feasible = true;
        report.reason = "slope ≤ d_n/n, statistically null, x = 1/2 at the peak".into();
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn cfg() -> RunConfig {
        RunConfig::with_horizon(1_000_000)
    }

    #[test]
    fn examples() {
        let c = cfg();
        let r = fridy_check(&SymbolicSequence::parse("inv-log").unwrap(), &Q::one(), &c).unwrap();
        assert!(r.applicable && r.contradiction.is_none());
        assert_eq!(r.stat_limit_zero, Outcome::CertifiedConverges);
        let r = fridy_check(&SymbolicSequence::parse("indicator:factorial").unwrap(), &Q::one(), &c).unwrap();
        assert!(!r.applicable && r.contradiction.is_none());
        let r = fridy_check(&SymbolicSequence::parse("constant:0").unwrap(), &q(5, 1), &c).unwrap();
        assert!(r.applicable && r.contradiction.is_none() && r.tail_peak.is_none());
    }

    #[test]
    fn sharpness() {
        let c = cfg();
        let r = sharpness_search(Schedule::Log, &c).unwrap();
        assert!(r.feasible, "{}", r.reason);
        let r = sharpness_search(Schedule::Const(q(2, 1)), &c).unwrap();
        assert!(!r.feasible);
        assert!(sharpness_search(Schedule::Log, &RunConfig::with_horizon(10)).is_err());
    }

    #[test]
    fn seeded_corpus_is_slope_compliant() {
        let c = RunConfig::with_horizon(100_000);
        for x in fridy_corpus(7, 20).unwrap() {
            let r = fridy_check(&x, &q(2, 1), &c).unwrap();
            assert!(r.applicable, "{}", x.describe());
            assert!(r.contradiction.is_none(), "{}", x.describe());
        }
    }
}
