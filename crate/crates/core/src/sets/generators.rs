//! Monotone interval generators.
//!
//! Every generator emits closed integer intervals `[l_m, r_m]` with
//! `r_m < l_{m+1}`. Intervals are produced on demand and memoized behind a
//! mutex, so a family can be shared between threads; the memo never changes
//! the observable membership function.

use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::scheme::{check_queryable, BlockScheme, Bound, QUERY_LIMIT_BITS};
use crate::error::{Error, Result};
use crate::num::{ceil_nat, floor_nat, ln_lower, nat, q, q_frac, q_int, Nat, Q};

/// Slope budget `d_n` for the tent construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Schedule {
    /// `d_n = ln n`, used through the rational minorant `(693/1000)⌊log₂ n⌋`.
    Log,
    /// `d_n = d`.
    Const(Q),
}

impl Schedule {
    /// Rational `m(n) ≤ d_n`, nondecreasing in `n`.
    pub fn minorant(&self, n: &Nat) -> Q {
        match self {
            Schedule::Log => ln_lower(n),
            Schedule::Const(d) => d.clone(),
        }
    }

    pub fn unbounded(&self) -> bool {
        matches!(self, Schedule::Log)
    }
}

/// Layout of symmetric tents: tent `j ≥ j0` starts at `N_j = B^j`, climbs with
/// constant step `s_j = m(N_j)/(R·N_j)` up to `1/2`, and descends again, staying
/// inside `[N_j, R·N_j]`. Tents never overlap because `B > R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TentGeometry {
    pub schedule: Schedule,
    pub ratio: u64,
    pub base: u64,
    pub first: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tent {
    pub start: Nat,
    pub step: Q,
    pub half_width: Nat,
}

impl Tent {
    /// Value at `start + k`, `0 ≤ k ≤ 2W`.
    pub fn value_at(&self, k: &Nat) -> Q {
        let two_w = &self.half_width * 2u32;
        if k > &two_w {
            return Q::zero();
        }
        let d = std::cmp::min(k.clone(), &two_w - k);
        std::cmp::min(q_int(&d) * &self.step, q(1, 2))
    }

    pub fn end(&self) -> Nat {
        &self.start + &self.half_width * 2u32
    }
}

impl TentGeometry {
    /// Picks the smallest ratio `R ∈ {2,4,…,2^12}` and first index so that each
    /// tent fits in `[N_j, R·N_j]`. Fails when the slope budget cannot lift the
    /// sequence to `1/2` inside any such window.
    pub fn fit(schedule: Schedule) -> Result<Self> {
        for r_exp in 1..=12u32 {
            let ratio = 1u64 << r_exp;
            let base = 2 * ratio;
            for first in 1..=40u32 {
                let g = TentGeometry { schedule: schedule.clone(), ratio, base, first };
                let t = g.tent(first);
                // need m(N) > 0 and N + 2W ≤ R N
                if schedule.minorant(&t.start) <= Q::zero() {
                    continue;
                }
                if t.end() <= &t.start * ratio {
                    return Ok(g);
                }
            }
        }
        Err(Error::Infeasible("no tent geometry fits: the slope budget cannot raise 0 to 1/2 within [N, R·N]".into()))
    }

    pub fn tent(&self, j: u32) -> Tent {
        let start = Nat::from(self.base).pow(j);
        let m = self.schedule.minorant(&start);
        let step = &m / (q_int(&start) * Q::from_integer(BigInt::from(self.ratio)));
        let half_width = if step.is_zero() { Nat::zero() } else { ceil_nat(&(q(1, 2) / &step)) };
        Tent { start, step, half_width }
    }

    /// Value of the tent sequence at `n ≥ 1`.
    pub fn value(&self, n: &Nat) -> Q {
        if n < &Nat::from(self.base).pow(self.first) {
            return Q::zero();
        }
        // j = floor(log_B n)
        let mut j = self.first;
        let mut next = Nat::from(self.base).pow(j + 1);
        while &next <= n {
            j += 1;
            next *= self.base;
        }
        let t = self.tent(j);
        t.value_at(&(n - &t.start))
    }

    /// Tents whose start is at most `h`.
    pub fn tents_upto(&self, h: &Nat) -> Vec<(u32, Tent)> {
        let mut out = Vec::new();
        let mut j = self.first;
        loop {
            let t = self.tent(j);
            if &t.start > h {
                break;
            }
            out.push((j, t));
            j += 1;
        }
        out
    }
}

/// Named monotone interval generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    /// `[a_{2m}, a_{2m+1}]`, `m ≥ 1`; `"factorial"` is this over `a_n = n!`,
    /// `"tower"` over the power tower.
    Alternating(BlockScheme),
    /// `{m²}` as singletons.
    Squares,
    /// `{2^k : k ≥ 1}` as singletons.
    Pow2,
    /// `[m!, 2·m!]`, `m ≥ 3`.
    FactorialDouble,
    /// `[4^j, 4^j + 2^j]`, `j ≥ 1`.
    SqrtWindows,
    /// `[b^m, b^m + ⌊θ b^m⌋]` for `m ≥ start`, with `0 < θ < b − 1`.
    Geometric { base: u64, theta: Q, start: u32 },
    /// Union of blocks `A_k = (a_{k−1}, a_k]` selected by an eventually periodic pattern.
    Blocks { scheme: BlockScheme, prefix: Vec<bool>, cycle: Vec<bool> },
    /// `{n : x_n ≥ t}` (or `> t` when strict) for the tent sequence, `t > 0` (or `t ≥ 0` strict).
    TentLevel { geometry: TentGeometry, threshold: Q, strict: bool },
    /// Finitely many explicit intervals.
    Explicit(Vec<(Nat, Nat)>),
}

impl Generator {
    pub fn validate(&self) -> Result<()> {
        match self {
            Generator::Geometric { base, theta, start } => {
                if *base < 2 {
                    return Err(Error::Validation("geometric base must be ≥ 2".into()));
                }
                if theta <= &Q::zero() || theta >= &q((*base as i64) - 1, 1) {
                    return Err(Error::Validation("geometric theta must satisfy 0 < θ < base − 1".into()));
                }
                if *start == 0 {
                    return Err(Error::Validation("geometric start must be ≥ 1".into()));
                }
                Ok(())
            }
            Generator::Blocks { scheme, cycle, .. } => {
                if cycle.is_empty() {
                    return Err(Error::Validation("block pattern cycle must be nonempty".into()));
                }
                if scheme.len().is_some() {
                    return Err(Error::Validation("block unions need an infinite named scheme".into()));
                }
                Ok(())
            }
            Generator::Alternating(scheme) => {
                if scheme.len().is_some() {
                    return Err(Error::Validation("alternating families need an infinite named scheme".into()));
                }
                Ok(())
            }
            Generator::TentLevel { threshold, strict, .. } => {
                let ok = if *strict { threshold >= &Q::zero() } else { threshold > &Q::zero() };
                if !ok {
                    return Err(Error::Validation("tent level threshold must be positive".into()));
                }
                Ok(())
            }
            Generator::Explicit(iv) => {
                for (l, r) in iv {
                    if l.is_zero() || l > r {
                        return Err(Error::Validation(format!("bad interval [{l}, {r}]")));
                    }
                }
                for w in iv.windows(2) {
                    if w[0].1 >= w[1].0 {
                        return Err(Error::Validation(format!(
                            "intervals must be increasing and disjoint: [{}, {}] then [{}, {}]",
                            w[0].0, w[0].1, w[1].0, w[1].1
                        )));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Generator::Alternating(BlockScheme::Factorial) => "factorial".into(),
            Generator::Alternating(BlockScheme::Tower) => "tower".into(),
            Generator::Alternating(_) => "alternating".into(),
            Generator::Squares => "squares".into(),
            Generator::Pow2 => "pow2".into(),
            Generator::FactorialDouble => "factorial-double".into(),
            Generator::SqrtWindows => "sqrt-windows".into(),
            Generator::Geometric { .. } => "geometric".into(),
            Generator::Blocks { .. } => "blocks".into(),
            Generator::TentLevel { .. } => "tent-level".into(),
            Generator::Explicit(_) => "explicit".into(),
        }
    }

    fn select(prefix: &[bool], cycle: &[bool], k: u64) -> bool {
        let i = (k - 1) as usize;
        if i < prefix.len() {
            prefix[i]
        } else {
            cycle[(i - prefix.len()) % cycle.len()]
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum End {
    /// No further intervals exist.
    Finite,
    /// The next interval starts above the query limit.
    Beyond,
}

#[derive(Debug, Default)]
struct Memo {
    lo: Vec<Nat>,
    hi: Vec<Bound>,
    /// `cum[m]` = total length of intervals `0..m` (finite ones only).
    cum: Vec<Nat>,
    cursor: u64,
    end: Option<End>,
}

/// A generator together with its interval memo.
#[derive(Clone, Debug)]
pub struct IntervalFamily {
    gen: Generator,
    memo: Arc<Mutex<Memo>>,
}

impl PartialEq for IntervalFamily {
    fn eq(&self, other: &Self) -> bool {
        self.gen == other.gen
    }
}

impl IntervalFamily {
    pub fn new(gen: Generator) -> Result<Self> {
        gen.validate()?;
        Ok(IntervalFamily { gen, memo: Arc::new(Mutex::new(Memo { cum: vec![Nat::zero()], ..Default::default() })) })
    }

    pub fn generator(&self) -> &Generator {
        &self.gen
    }

    /// Emits the next raw interval in order, advancing the generator cursor.
    fn produce(&self, m: &mut Memo) -> Result<Option<(Nat, Bound)>> {
        let idx = m.cursor;
        m.cursor += 1;
        let out = match &self.gen {
            Generator::Alternating(s) => {
                let l = s.a(2 * (idx + 1))?;
                let r = s.a(2 * (idx + 1) + 1)?;
                match l {
                    Bound::Fin(l) => Some((l, r)),
                    Bound::Beyond => {
                        m.end = Some(End::Beyond);
                        None
                    }
                }
            }
            Generator::Squares => {
                let v = nat(idx + 1).pow(2);
                Some((v.clone(), Bound::Fin(v)))
            }
            Generator::Pow2 => {
                let v = Nat::one() << (idx + 1);
                Some((v.clone(), Bound::Fin(v)))
            }
            Generator::FactorialDouble => {
                let f = crate::num::factorial(idx + 3);
                let r = &f * 2u32;
                Some((f, Bound::Fin(r)))
            }
            Generator::SqrtWindows => {
                let j = idx + 1;
                let l = Nat::one() << (2 * j);
                let r = &l + (Nat::one() << j);
                Some((l, Bound::Fin(r)))
            }
            Generator::Geometric { base, theta, start } => {
                let l = Nat::from(*base).pow(*start + idx as u32);
                let r = &l + floor_nat(&(theta * q_int(&l)));
                Some((l, Bound::Fin(r)))
            }
            Generator::Blocks { scheme, prefix, cycle } => {
                // advance to the next selected block, then absorb following selected blocks
                let tail_has_true = cycle.iter().any(|b| *b);
                let mut k = idx + 1;
                loop {
                    if !tail_has_true && (k as usize) > prefix.len() {
                        m.end = Some(End::Finite);
                        return Ok(None);
                    }
                    if Generator::select(prefix, cycle, k) {
                        break;
                    }
                    k += 1;
                }
                let l = match scheme.a(k - 1)? {
                    Bound::Fin(v) => v + 1u32,
                    Bound::Beyond => {
                        m.end = Some(End::Beyond);
                        return Ok(None);
                    }
                };
                let all_true = cycle.iter().all(|b| *b);
                let mut kk = k;
                while Generator::select(prefix, cycle, kk + 1) {
                    if all_true && (kk as usize) >= prefix.len() {
                        // cofinite tail: one unbounded interval
                        m.end = Some(End::Finite);
                        return Ok(Some((l, Bound::Beyond)));
                    }
                    if scheme.a(kk + 1)? == Bound::Beyond {
                        break;
                    }
                    kk += 1;
                }
                let r = scheme.a(kk)?;
                m.cursor = kk; // next search starts at block kk + 1
                Some((l, r))
            }
            Generator::TentLevel { geometry, threshold, strict } => {
                let j = geometry.first + idx as u32;
                let t = geometry.tent(j);
                if t.start.bits() > QUERY_LIMIT_BITS {
                    m.end = Some(End::Beyond);
                    return Ok(None);
                }
                let half = q(1, 2);
                let empty = if *strict { threshold >= &half } else { threshold > &half };
                if empty {
                    m.end = Some(End::Finite);
                    return Ok(None);
                }
                let ratio = threshold / &t.step;
                let k0 = if *strict { floor_nat(&ratio) + 1u32 } else { ceil_nat(&ratio) };
                let k0 = if k0 > t.half_width { t.half_width.clone() } else { k0 };
                let two_w = &t.half_width * 2u32;
                let l = &t.start + &k0;
                let r = &t.start + (&two_w - &k0);
                Some((l, Bound::Fin(r)))
            }
            Generator::Explicit(iv) => match iv.get(idx as usize) {
                Some((l, r)) => Some((l.clone(), Bound::Fin(r.clone()))),
                None => {
                    m.end = Some(End::Finite);
                    None
                }
            },
        };
        if let Some((l, _)) = &out {
            if l.bits() > QUERY_LIMIT_BITS {
                m.end = Some(End::Beyond);
                return Ok(None);
            }
        }
        Ok(out)
    }

    /// Generates intervals until one starts above `n` or the family ends.
    fn ensure(&self, m: &mut Memo, n: &Nat) -> Result<()> {
        loop {
            if let Some(last) = m.lo.last() {
                if last > n {
                    return Ok(());
                }
            }
            if let Some(end) = &m.end {
                if *end == End::Beyond {
                    check_queryable(n)?;
                }
                return Ok(());
            }
            if let Some((l, r)) = self.produce(m)? {
                let len = match &r {
                    Bound::Fin(r) => r - &l + 1u32,
                    Bound::Beyond => Nat::zero(),
                };
                let c = m.cum.last().cloned().unwrap_or_default() + len;
                m.lo.push(l);
                m.hi.push(r);
                m.cum.push(c);
            } else if m.end.is_none() {
                m.end = Some(End::Finite);
            }
        }
    }

    pub fn contains(&self, n: &Nat) -> Result<bool> {
        match &self.gen {
            Generator::Squares => {
                let r = n.sqrt();
                return Ok(&(&r * &r) == n);
            }
            Generator::Pow2 => return Ok(n.count_ones() == 1 && n > &Nat::one()),
            _ => {}
        }
        let mut m = self.memo.lock().expect("interval memo poisoned");
        self.ensure(&mut m, n)?;
        // last interval with lo <= n
        let idx = m.lo.partition_point(|l| l <= n);
        if idx == 0 {
            return Ok(false);
        }
        Ok(m.hi[idx - 1].cmp_nat(n) != std::cmp::Ordering::Less)
    }

    /// `|A ∩ [1, n]|`.
    pub fn count(&self, n: &Nat) -> Result<Nat> {
        match &self.gen {
            Generator::Squares => return Ok(n.sqrt()),
            Generator::Pow2 => return Ok(if n.is_zero() { Nat::zero() } else { nat(n.bits() - 1) }),
            _ => {}
        }
        let mut m = self.memo.lock().expect("interval memo poisoned");
        self.ensure(&mut m, n)?;
        let idx = m.lo.partition_point(|l| l <= n);
        if idx == 0 {
            return Ok(Nat::zero());
        }
        let last = idx - 1;
        let clipped = m.hi[last].min_nat(n) - &m.lo[last] + 1u32;
        Ok(m.cum[last].clone() + clipped)
    }

    /// Intervals meeting `[1, h]`, clipped to `h`.
    pub fn intervals_upto(&self, h: &Nat) -> Result<Vec<(Nat, Nat)>> {
        let mut m = self.memo.lock().expect("interval memo poisoned");
        self.ensure(&mut m, h)?;
        let mut out = Vec::new();
        for i in 0..m.lo.len() {
            if &m.lo[i] > h {
                break;
            }
            out.push((m.lo[i].clone(), m.hi[i].min_nat(h)));
        }
        Ok(out)
    }

    /// The first `k` intervals with unclipped right endpoints (fewer if the
    /// family is finite or reaches the query limit).
    pub fn first_intervals(&self, k: usize) -> Result<Vec<(Nat, Bound)>> {
        let mut m = self.memo.lock().expect("interval memo poisoned");
        while m.lo.len() < k && m.end.is_none() {
            if let Some((l, r)) = self.produce(&mut m)? {
                let len = match &r {
                    Bound::Fin(r) => r - &l + 1u32,
                    Bound::Beyond => Nat::zero(),
                };
                let c = m.cum.last().cloned().unwrap_or_default() + len;
                m.lo.push(l);
                m.hi.push(r);
                m.cum.push(c);
            }
        }
        Ok(m.lo.iter().cloned().zip(m.hi.iter().cloned()).take(k).collect())
    }

    /// Whether the family is finite (known structurally).
    pub fn is_finite(&self) -> bool {
        match &self.gen {
            Generator::Explicit(_) => true,
            Generator::Blocks { cycle, .. } => !cycle.iter().any(|b| *b),
            Generator::TentLevel { threshold, strict, .. } => {
                let half = q(1, 2);
                if *strict {
                    threshold >= &half
                } else {
                    threshold > &half
                }
            }
            _ => false,
        }
    }
}

/// Returns `|{k ∈ [lo, hi]}|` for `lo ≤ hi + 1`.
pub fn span(lo: &Nat, hi: &Nat) -> Nat {
    if hi < lo {
        Nat::zero()
    } else {
        hi - lo + 1u32
    }
}

/// Exact λ-style ratio helper.
pub fn ratio(num: &Nat, den: &Nat) -> Q {
    q_frac(num, den)
}
