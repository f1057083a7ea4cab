//! Symbolic real sequences with exact deviation sets.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{exp_bounds, floor_exp, fmt_q, nat, q, q_int, Nat, QJson, Q};
use crate::sets::json::{ScheduleSpec, SchemeSpec, SetSpec};
use crate::sets::{BlockScheme, Bound, Generator, Schedule, SymbolicSet, TentGeometry};

/// Closed-form sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    /// `x_n = 1/ln(n + 1)`.
    InvLog,
    /// `x_n = c/n^p` with `c > 0`, `p ≥ 1`.
    InvPower { c: Q, p: u32 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum SymbolicSequence {
    Constant(Q),
    /// `x_n = 1_A(n)`.
    Indicator(SymbolicSet),
    /// Constant on each block `A_k = (a_{k−1}, a_k]`; block `k` takes
    /// `prefix[k−1]`, then the cycle repeats.
    BlockConstant {
        scheme: BlockScheme,
        prefix: Vec<Q>,
        cycle: Vec<Q>,
    },
    Formula(Formula),
    /// Tents rising to `1/2` with slope at most `d_n/n`.
    Tent(TentGeometry),
}

/// First index where the slope bound `|x_{n+1} − x_n| ≤ d/n` fails.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeViolation {
    pub n: String,
    pub jump: QJson,
    pub bound: QJson,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeReport {
    pub d: QJson,
    pub horizon: u64,
    /// Holds for every `n`, not only below the horizon.
    pub global: bool,
    pub violation: Option<SlopeViolation>,
    pub basis: String,
}

impl SlopeReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

impl SymbolicSequence {
    pub fn indicator(a: SymbolicSet) -> Self {
        SymbolicSequence::Indicator(a)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SymbolicSequence::BlockConstant { scheme, cycle, .. } => {
                if cycle.is_empty() {
                    return Err(Error::Validation("block values need a nonempty cycle".into()));
                }
                if scheme.len().is_some() {
                    return Err(Error::Validation("block-constant sequences need an infinite named scheme".into()));
                }
                Ok(())
            }
            SymbolicSequence::Formula(Formula::InvPower { c, p }) => {
                if !c.is_positive() || *p == 0 {
                    return Err(Error::Validation("inv-power needs c > 0 and p ≥ 1".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            SymbolicSequence::Constant(c) => format!("constant {}", fmt_q(c)),
            SymbolicSequence::Indicator(a) => format!("indicator of {}", a.describe()),
            SymbolicSequence::BlockConstant { scheme, prefix, cycle } => format!(
                "block-constant over {} (prefix [{}], cycle [{}])",
                scheme.name().unwrap_or("explicit"),
                prefix.iter().map(fmt_q).collect::<Vec<_>>().join(", "),
                cycle.iter().map(fmt_q).collect::<Vec<_>>().join(", ")
            ),
            SymbolicSequence::Formula(Formula::InvLog) => "1/ln(n+1)".into(),
            SymbolicSequence::Formula(Formula::InvPower { c, p }) => format!("{}/n^{p}", fmt_q(c)),
            SymbolicSequence::Tent(g) => format!(
                "tents with slope budget {}",
                match &g.schedule {
                    Schedule::Log => "ln n".to_string(),
                    Schedule::Const(d) => fmt_q(d),
                }
            ),
        }
    }

    fn block_value(prefix: &[Q], cycle: &[Q], k: u64) -> Q {
        let i = (k - 1) as usize;
        if i < prefix.len() {
            prefix[i].clone()
        } else {
            cycle[(i - prefix.len()) % cycle.len()].clone()
        }
    }

    /// `x_n` exactly; fails for irrational values.
    pub fn value(&self, n: &Nat) -> Result<Q> {
        if n.is_zero() {
            return Err(Error::Precondition("sequences are indexed from 1".into()));
        }
        match self {
            SymbolicSequence::Constant(c) => Ok(c.clone()),
            SymbolicSequence::Indicator(a) => Ok(if a.contains(n)? { Q::one() } else { Q::zero() }),
            SymbolicSequence::BlockConstant { scheme, prefix, cycle } => {
                Ok(Self::block_value(prefix, cycle, scheme.block_of(n)?))
            }
            SymbolicSequence::Formula(Formula::InvPower { c, p }) => Ok(c / q_int(&n.pow(*p))),
            SymbolicSequence::Formula(Formula::InvLog) => {
                Err(Error::NotCertifiable("1/ln(n+1) is irrational; use value_bounds".into()))
            }
            SymbolicSequence::Tent(g) => Ok(g.value(n)),
        }
    }

    /// Rational enclosure of `x_n`.
    pub fn value_bounds(&self, n: &Nat) -> Result<(Q, Q)> {
        match self {
            SymbolicSequence::Formula(Formula::InvLog) => {
                let (lo, hi) = ln_bounds(&(n + 1u32));
                Ok((hi.recip(), lo.recip()))
            }
            _ => {
                let v = self.value(n)?;
                Ok((v.clone(), v))
            }
        }
    }

    /// Values taken by the sequence, when finitely many.
    pub fn finite_values(&self) -> Option<Vec<Q>> {
        let mut v = match self {
            SymbolicSequence::Constant(c) => vec![c.clone()],
            SymbolicSequence::Indicator(_) => vec![Q::zero(), Q::one()],
            SymbolicSequence::BlockConstant { prefix, cycle, .. } => prefix.iter().chain(cycle).cloned().collect(),
            _ => return None,
        };
        v.sort();
        v.dedup();
        Some(v)
    }

    /// The ordinary limit, when structurally known.
    pub fn ordinary_limit(&self) -> Option<Q> {
        match self {
            SymbolicSequence::Constant(c) => Some(c.clone()),
            SymbolicSequence::Formula(_) => Some(Q::zero()),
            SymbolicSequence::BlockConstant { cycle, .. } => {
                let first = &cycle[0];
                cycle.iter().all(|v| v == first).then(|| first.clone())
            }
            SymbolicSequence::Indicator(a) => {
                let p = crate::functionals::profile(a);
                if p.finite == Some(true) {
                    Some(Q::zero())
                } else if p.cofinite == Some(true) {
                    Some(Q::one())
                } else {
                    None
                }
            }
            SymbolicSequence::Tent(_) => None,
        }
    }

    /// `limsup |x_n|`, when structurally known.
    pub fn limsup_abs(&self) -> Option<Q> {
        match self {
            SymbolicSequence::Tent(_) => Some(q(1, 2)),
            SymbolicSequence::Indicator(a) => {
                let p = crate::functionals::profile(a);
                p.finite.map(|f| if f { Q::zero() } else { Q::one() })
            }
            SymbolicSequence::BlockConstant { cycle, .. } => cycle.iter().map(|v| v.abs()).max(),
            _ => self.ordinary_limit().map(|l| l.abs()),
        }
    }

    /// `D_ε = {n : |x_n − ℓ| ≥ ε}` for `ε > 0`.
    pub fn deviation_set(&self, limit: &Q, eps: &Q) -> Result<SymbolicSet> {
        if !eps.is_positive() {
            return Err(Error::Precondition("ε must be positive".into()));
        }
        let hi = limit + eps;
        let lo = limit - eps;
        match self {
            SymbolicSequence::Constant(_) | SymbolicSequence::Indicator(_) | SymbolicSequence::BlockConstant { .. } => {
                let far = |v: &Q| (v - limit).abs() >= *eps;
                Ok(match self {
                    SymbolicSequence::Constant(c) => {
                        if far(c) {
                            SymbolicSet::all()
                        } else {
                            SymbolicSet::empty()
                        }
                    }
                    SymbolicSequence::Indicator(a) => match (far(&Q::one()), far(&Q::zero())) {
                        (true, true) => SymbolicSet::all(),
                        (true, false) => a.clone(),
                        (false, true) => a.clone().complement(),
                        (false, false) => SymbolicSet::empty(),
                    },
                    SymbolicSequence::BlockConstant { scheme, prefix, cycle } => {
                        let pre: Vec<bool> = prefix.iter().map(far).collect();
                        let cyc: Vec<bool> = cycle.iter().map(far).collect();
                        if pre.iter().chain(&cyc).all(|b| !b) {
                            SymbolicSet::empty()
                        } else if pre.iter().chain(&cyc).all(|b| *b) {
                            SymbolicSet::all()
                        } else {
                            SymbolicSet::intervals(Generator::Blocks {
                                scheme: scheme.clone(),
                                prefix: pre,
                                cycle: cyc,
                            })?
                        }
                    }
                    _ => unreachable!(),
                })
            }
            SymbolicSequence::Formula(f) => {
                // x_n decreases strictly to 0 from x_1
                let upper = self.first_below(f, &hi, true)?;
                let mut parts = Vec::new();
                if let Some(end) = upper {
                    if !end.is_zero() {
                        parts.push(SymbolicSet::intervals(Generator::Explicit(vec![(nat(1), end.clone())]))?);
                    }
                }
                if lo.is_positive() {
                    // {n : x_n ≤ lo} is a tail
                    let start = self.first_below(f, &lo, false)?.expect("x_n → 0");
                    let head = if start > Nat::one() {
                        SymbolicSet::intervals(Generator::Explicit(vec![(nat(1), start - 1u32)]))?
                    } else {
                        SymbolicSet::empty()
                    };
                    parts.push(head.complement());
                }
                Ok(SymbolicSet::union(parts))
            }
            SymbolicSequence::Tent(g) => {
                let mut parts = Vec::new();
                if hi.is_positive() {
                    parts.push(SymbolicSet::intervals(Generator::TentLevel {
                        geometry: g.clone(),
                        threshold: hi.clone(),
                        strict: false,
                    })?);
                } else {
                    return Ok(SymbolicSet::all());
                }
                if !lo.is_negative() {
                    parts.push(
                        SymbolicSet::intervals(Generator::TentLevel {
                            geometry: g.clone(),
                            threshold: lo,
                            strict: true,
                        })?
                        .complement(),
                    );
                }
                Ok(SymbolicSet::union(parts))
            }
        }
    }

    /// `{n : x_n ≠ ℓ}`, the union of all deviation sets.
    pub fn support_set(&self, limit: &Q) -> Result<Option<SymbolicSet>> {
        Ok(match self {
            SymbolicSequence::Tent(g) if limit.is_zero() => Some(SymbolicSet::intervals(Generator::TentLevel {
                geometry: g.clone(),
                threshold: Q::zero(),
                strict: true,
            })?),
            SymbolicSequence::Tent(_) => None,
            SymbolicSequence::Formula(_) if limit.is_zero() => Some(SymbolicSet::all()),
            SymbolicSequence::Formula(_) => None,
            _ => {
                let vals = self.finite_values().expect("finite-valued");
                match vals.iter().filter(|v| *v != limit).map(|v| (v - limit).abs()).min() {
                    Some(m) => Some(self.deviation_set(limit, &m)?),
                    None => Some(SymbolicSet::empty()),
                }
            }
        })
    }

    /// For `below = true`: the largest `n` with `x_n ≥ t` (None when all
    /// `x_n ≥ t` is impossible to bound, i.e. `t ≤ 0`). For `below = false`:
    /// the first `n` with `x_n ≤ t`.
    fn first_below(&self, f: &Formula, t: &Q, below: bool) -> Result<Option<Nat>> {
        if !t.is_positive() {
            return Ok(None);
        }
        match f {
            Formula::InvLog => {
                // 1/ln(n+1) ≥ t ⇔ n + 1 ≤ e^{1/t}; e^{1/t} is never an integer
                let e = floor_exp(&t.recip());
                Ok(Some(if below {
                    if e >= nat(1) {
                        e - 1u32
                    } else {
                        Nat::zero()
                    }
                } else {
                    e
                }))
            }
            Formula::InvPower { c, p } => {
                // c/n^p ≥ t ⇔ n^p ≤ c/t
                let bound = c / t;
                let last = largest_pow_at_most(&bound, *p);
                if below {
                    Ok(Some(last))
                } else {
                    // c/n^p ≤ t ⇔ n^p ≥ c/t
                    let exact = q_int(&last.pow(*p)) == bound;
                    Ok(Some(if exact { last } else { last + 1u32 }))
                }
            }
        }
    }

    /// Checks `|x_{n+1} − x_n| ≤ d/n` for `n < h`, structurally where possible.
    pub fn slope_check(&self, d: &Q, h: u64) -> Result<SlopeReport> {
        if !d.is_positive() {
            return Err(Error::Precondition("slope constant must be positive".into()));
        }
        let viol =
            |n: &Nat, jump: Q| SlopeViolation { n: n.to_string(), bound: QJson(d / q_int(n)), jump: QJson(jump) };
        let report = |global: bool, violation: Option<SlopeViolation>, basis: &str| SlopeReport {
            d: QJson(d.clone()),
            horizon: h,
            global,
            violation,
            basis: basis.into(),
        };
        match self {
            SymbolicSequence::Constant(_) => Ok(report(true, None, "constant")),
            SymbolicSequence::Indicator(a) => {
                // jumps of size 1 at run boundaries; 1 ≤ d/n fails once n > d
                for (l, r) in a.runs(h)? {
                    for n in [l.saturating_sub(1), r] {
                        if n >= 1 && n < h && q(n as i64, 1) > *d {
                            return Ok(report(false, Some(viol(&nat(n), Q::one())), "jump at a run boundary"));
                        }
                    }
                }
                Ok(report(false, None, "run boundaries below the horizon"))
            }
            SymbolicSequence::BlockConstant { scheme, prefix, cycle } => {
                let mut k = 1u64;
                loop {
                    let Bound::Fin(a) = scheme.a(k)? else { break };
                    if a >= nat(h) {
                        break;
                    }
                    let jump = (Self::block_value(prefix, cycle, k + 1) - Self::block_value(prefix, cycle, k)).abs();
                    if jump > d / q_int(&a) {
                        return Ok(report(false, Some(viol(&a, jump)), "jump at a block boundary"));
                    }
                    k += 1;
                }
                let flat = cycle.iter().all(|v| v == &cycle[0]);
                Ok(report(flat, None, "block boundaries below the horizon"))
            }
            SymbolicSequence::Formula(Formula::InvPower { c, p }) => {
                // mean value theorem: x_n − x_{n+1} ≤ c p / n^{p+1} ≤ c p / n
                if c * Q::from_integer(BigInt::from(*p)) <= *d {
                    return Ok(report(true, None, "c·p ≤ d"));
                }
                for n in 1..h.min(SLOPE_SCAN) {
                    let n = nat(n);
                    let jump = self.value(&n)? - self.value(&(&n + 1u32))?;
                    if jump > d / q_int(&n) {
                        return Ok(report(false, Some(viol(&n, jump)), "exact differences"));
                    }
                }
                Ok(report(false, None, "exact differences up to the scan limit"))
            }
            SymbolicSequence::Formula(Formula::InvLog) => {
                // x_n − x_{n+1} ≤ 1/((n+1) ln²(n+1)) ≤ (1/ln²(n+1)) / n
                let mut n = 1u64;
                while n < h {
                    let (lo, _) = ln_bounds(&nat(n + 1));
                    if (&lo * &lo).recip() <= *d {
                        return Ok(report(true, None, "1/ln²(n+1) ≤ d from here on, checked enclosures below"));
                    }
                    let jump_upper = self.value_bounds(&nat(n))?.1 - self.value_bounds(&nat(n + 1))?.0;
                    if jump_upper > d / q(n as i64, 1) {
                        return Err(Error::NotCertifiable(format!("slope at n = {n} not settled by enclosures")));
                    }
                    n += 1;
                }
                Ok(report(false, None, "enclosures below the horizon"))
            }
            SymbolicSequence::Tent(g) => {
                // inside tent j the jumps are at most s_j and occur up to its end
                for (_, t) in g.tents_upto(&nat(h)) {
                    if t.half_width.is_zero() {
                        continue;
                    }
                    let last = t.end() - 1u32;
                    let last = last.min(nat(h.saturating_sub(1)));
                    if q_int(&last) * &t.step > *d {
                        // first index in the tent where the step exceeds d/n
                        let n0 = crate::num::floor_nat(&(d / &t.step)) + 1u32;
                        let n = n0.max(t.start.clone());
                        let k = &n - &t.start;
                        let jump = (t.value_at(&(&k + 1u32)) - t.value_at(&k)).abs();
                        return Ok(report(false, Some(viol(&n, jump)), "tent step exceeds d/n"));
                    }
                }
                let global = match &g.schedule {
                    Schedule::Const(m) => m <= d,
                    Schedule::Log => false,
                };
                Ok(report(global, None, "tent steps s_j ≤ m(N_j)/n on [N_j, R·N_j]"))
            }
        }
    }
}

/// Largest index scanned term by term in slope checks.
const SLOPE_SCAN: u64 = 100_000;

/// Largest `n` with `n^p ≤ x`.
fn largest_pow_at_most(x: &Q, p: u32) -> Nat {
    let f = crate::num::floor_nat(x);
    let mut r = num_integer::Roots::nth_root(&f, p);
    while q_int(&(&r + 1u32).pow(p)) <= *x {
        r += 1u32;
    }
    while !r.is_zero() && q_int(&r.pow(p)) > *x {
        r -= 1u32;
    }
    r
}

/// Rationals `lo < ln m < hi` for `m ≥ 2`, within about `2^{-30}`.
pub fn ln_bounds(m: &Nat) -> (Q, Q) {
    assert!(m > &Nat::one(), "ln bounds need m ≥ 2");
    let target = q_int(m);
    let bits = m.bits() as i64;
    let mut lo = crate::num::ln_lower(m);
    let mut hi = q(6932, 10000) * q(bits, 1);
    let tol = q(1, 1 << 40);
    for _ in 0..34 {
        let mid = (&lo + &hi) / q(2, 1);
        let (e_lo, e_hi) = exp_bounds(&mid, &tol);
        if e_hi < target {
            lo = mid;
        } else if e_lo > target {
            hi = mid;
        } else {
            break;
        }
    }
    (lo, hi)
}

/// Wire format for sequences.
///
/// ```text
/// {"kind":"indicator","set":{...}}
/// {"kind":"constant","value":"3"}
/// {"kind":"block-constant","scheme":"factorial","prefix":["1"],"cycle":["0"]}
/// {"kind":"inv-log"}   {"kind":"inv-power","c":"1","p":1}
/// {"kind":"tent","schedule":"log"}
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SeqSpec {
    Indicator {
        set: SetSpec,
    },
    Constant {
        value: QJson,
    },
    BlockConstant {
        scheme: SchemeSpec,
        #[serde(default)]
        prefix: Vec<QJson>,
        cycle: Vec<QJson>,
    },
    InvLog {},
    InvPower {
        c: QJson,
        p: u32,
    },
    Tent {
        schedule: ScheduleSpec,
    },
}

impl SeqSpec {
    pub fn build(&self) -> Result<SymbolicSequence> {
        let s = match self {
            SeqSpec::Indicator { set } => SymbolicSequence::Indicator(set.build()?),
            SeqSpec::Constant { value } => SymbolicSequence::Constant(value.0.clone()),
            SeqSpec::BlockConstant { scheme, prefix, cycle } => SymbolicSequence::BlockConstant {
                scheme: scheme.build()?,
                prefix: prefix.iter().map(|x| x.0.clone()).collect(),
                cycle: cycle.iter().map(|x| x.0.clone()).collect(),
            },
            SeqSpec::InvLog {} => SymbolicSequence::Formula(Formula::InvLog),
            SeqSpec::InvPower { c, p } => SymbolicSequence::Formula(Formula::InvPower { c: c.0.clone(), p: *p }),
            SeqSpec::Tent { schedule } => SymbolicSequence::Tent(TentGeometry::fit(schedule.build()?)?),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn of(s: &SymbolicSequence) -> Self {
        match s {
            SymbolicSequence::Indicator(a) => SeqSpec::Indicator { set: SetSpec::of(a) },
            SymbolicSequence::Constant(c) => SeqSpec::Constant { value: QJson(c.clone()) },
            SymbolicSequence::BlockConstant { scheme, prefix, cycle } => SeqSpec::BlockConstant {
                scheme: SchemeSpec::of(scheme),
                prefix: prefix.iter().cloned().map(QJson).collect(),
                cycle: cycle.iter().cloned().map(QJson).collect(),
            },
            SymbolicSequence::Formula(Formula::InvLog) => SeqSpec::InvLog {},
            SymbolicSequence::Formula(Formula::InvPower { c, p }) => SeqSpec::InvPower { c: QJson(c.clone()), p: *p },
            SymbolicSequence::Tent(g) => SeqSpec::Tent { schedule: ScheduleSpec::of(&g.schedule) },
        }
    }
}

impl SymbolicSequence {
    /// Parses JSON or a shorthand: `indicator:<generator|evens|odds|json>`,
    /// `constant:<q>`, `inv-log`, `inv-power:<c>:<p>`, `tent:log`, `tent:<d>`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('{') {
            let v: serde_json::Value = serde_json::from_str(t).map_err(|e| Error::Parse(format!("sequence: {e}")))?;
            return Self::from_value(&v);
        }
        let (head, rest) = t.split_once(':').unwrap_or((t, ""));
        match head {
            "indicator" => Ok(SymbolicSequence::Indicator(named_set(rest)?)),
            "constant" => Ok(SymbolicSequence::Constant(crate::num::parse_q(rest)?)),
            "inv-log" => Ok(SymbolicSequence::Formula(Formula::InvLog)),
            "inv-power" => {
                let (c, p) = rest.split_once(':').unwrap_or((rest, "1"));
                let p: u32 = p.parse().map_err(|_| Error::Parse(format!("bad exponent `{p}`")))?;
                let s = SymbolicSequence::Formula(Formula::InvPower { c: crate::num::parse_q(c)?, p });
                s.validate()?;
                Ok(s)
            }
            "tent" => {
                let schedule = if rest == "log" { Schedule::Log } else { Schedule::Const(crate::num::parse_q(rest)?) };
                Ok(SymbolicSequence::Tent(TentGeometry::fit(schedule)?))
            }
            _ => Err(Error::Parse(format!("unknown sequence `{t}`"))),
        }
    }

    pub fn from_value(v: &serde_json::Value) -> Result<Self> {
        let spec: SeqSpec = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("sequence: {e}")))?;
        spec.build()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SeqSpec::of(self)).expect("sequence serializes")
    }
}

/// Named sets for shorthands: generator names, `evens`, `odds`, `N`, or JSON.
pub fn named_set(name: &str) -> Result<SymbolicSet> {
    let n = name.trim();
    if n.starts_with('{') {
        return SymbolicSet::from_json(n);
    }
    match n {
        "evens" => SymbolicSet::residue(2, 0),
        "odds" => SymbolicSet::residue(2, 1),
        "N" | "all" => Ok(SymbolicSet::all()),
        "empty" => Ok(SymbolicSet::empty()),
        _ => SymbolicSet::from_json(&format!(r#"{{"kind":"intervals","gen":"{n}"}}"#)),
    }
}

/// `true` when `|x_n| ≤ t` is certain from an enclosure.
pub fn abs_at_most(bounds: &(Q, Q), t: &Q) -> bool {
    bounds.0.abs().max(bounds.1.abs()) <= *t
}

/// Convenience for tests and reports.
pub fn approx(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(x: &SymbolicSequence, l: &Q, e: &Q, h: u64) -> Vec<u64> {
        (1..=h).filter(|n| (x.value(&nat(*n)).unwrap() - l).abs() >= *e).collect()
    }

    fn members(s: &SymbolicSet, h: u64) -> Vec<u64> {
        (1..=h).filter(|n| s.contains_u64(*n).unwrap()).collect()
    }

    #[test]
    fn deviation_sets_match_brute_force() {
        let seqs = [
            SymbolicSequence::parse("indicator:factorial").unwrap(),
            SymbolicSequence::parse("constant:1/3").unwrap(),
            SymbolicSequence::parse("inv-power:3:2").unwrap(),
            SymbolicSequence::parse(
                r#"{"kind":"block-constant","scheme":"factorial","prefix":["1"],"cycle":["0","1/2","1"]}"#,
            )
            .unwrap(),
            SymbolicSequence::parse("tent:log").unwrap(),
        ];
        for x in &seqs {
            for l in [q(0, 1), q(1, 3), q(1, 1)] {
                for e in [q(1, 10), q(1, 3), q(1, 2), q(1, 1)] {
                    let d = x.deviation_set(&l, &e).unwrap();
                    assert_eq!(members(&d, 800), brute(x, &l, &e, 800), "{} ℓ={l} ε={e}", x.describe());
                }
            }
        }
    }

    #[test]
    fn inv_log_deviation() {
        let x = SymbolicSequence::Formula(Formula::InvLog);
        // 1/ln(n+1) ≥ 1/2 ⇔ n + 1 ≤ e² ≈ 7.39
        let d = x.deviation_set(&Q::zero(), &q(1, 2)).unwrap();
        assert_eq!(members(&d, 50), (1..=6).collect::<Vec<_>>());
        let (lo, hi) = ln_bounds(&nat(7));
        assert!(q(19459, 10000) < lo && hi < q(19460, 10000));
        assert!(x.slope_check(&Q::one(), 10_000).unwrap().holds());
    }

    #[test]
    fn slopes() {
        let a = SymbolicSequence::parse("indicator:factorial").unwrap();
        let r = a.slope_check(&Q::one(), 1000).unwrap();
        assert_eq!(r.violation.unwrap().n, "6");
        let t = SymbolicSequence::parse("tent:2").unwrap();
        let r = t.slope_check(&q(2, 1), 1 << 30).unwrap();
        assert!(r.holds() && r.global);
        let tl = SymbolicSequence::parse("tent:log").unwrap();
        assert!(!tl.slope_check(&q(2, 1), 1 << 40).unwrap().holds());
    }

    #[test]
    fn round_trip() {
        for s in ["indicator:squares", "constant:3", "inv-log", "inv-power:1/2:3", "tent:log", "indicator:evens"] {
            let x = SymbolicSequence::parse(s).unwrap();
            assert_eq!(SymbolicSequence::parse(&x.to_json()).unwrap(), x);
        }
    }
}
