//! Symbolic subsets of the positive integers with exact membership and
//! prefix counting.

pub mod generators;
pub mod json;
pub mod scheme;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::num::{nat, Nat};
pub use generators::{Generator, IntervalFamily, Schedule, Tent, TentGeometry};
pub use scheme::{BlockScheme, Bound};

/// Largest period tracked by [`SymbolicSet::periodic_form`].
pub const MAX_PERIOD: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq)]
pub enum SymbolicSet {
    /// Sorted, deduplicated positive integers. The empty list is `∅`.
    Finite(Vec<Nat>),
    /// `{n ≥ 1 : n ≡ residue (mod modulus)}`.
    Residue {
        modulus: Nat,
        residue: Nat,
    },
    Intervals(IntervalFamily),
    /// `{n : ν₂(n) = k}`.
    Fiber2(u32),
    Union(Vec<SymbolicSet>),
    Intersection(Vec<SymbolicSet>),
    Complement(Box<SymbolicSet>),
}

/// Tail description of an eventually periodic set: for `n > threshold`,
/// `n ∈ A` iff `mask[n mod period]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Periodic {
    pub threshold: Nat,
    pub period: u64,
    pub mask: Vec<bool>,
}

impl Periodic {
    pub fn members_per_period(&self) -> u64 {
        self.mask.iter().filter(|b| **b).count() as u64
    }

    fn lift(&self, period: u64) -> Vec<bool> {
        (0..period).map(|i| self.mask[(i % self.period) as usize]).collect()
    }
}

impl SymbolicSet {
    pub fn empty() -> Self {
        SymbolicSet::Finite(Vec::new())
    }

    /// **N**, represented as the complement of `∅`.
    pub fn all() -> Self {
        SymbolicSet::Complement(Box::new(SymbolicSet::empty()))
    }

    pub fn finite<I: IntoIterator<Item = u64>>(elems: I) -> Result<Self> {
        Self::finite_nat(elems.into_iter().map(nat).collect())
    }

    pub fn finite_nat(mut elems: Vec<Nat>) -> Result<Self> {
        if elems.iter().any(|e| e.is_zero()) {
            return Err(Error::Validation("finite sets hold positive integers".into()));
        }
        elems.sort();
        elems.dedup();
        Ok(SymbolicSet::Finite(elems))
    }

    pub fn residue(modulus: u64, residue: u64) -> Result<Self> {
        Self::residue_nat(nat(modulus), nat(residue))
    }

    pub fn residue_nat(modulus: Nat, residue: Nat) -> Result<Self> {
        if modulus.is_zero() {
            return Err(Error::Validation("modulus must be ≥ 1".into()));
        }
        if residue >= modulus {
            return Err(Error::Validation(format!("residue {residue} not in [0, {modulus})")));
        }
        Ok(SymbolicSet::Residue { modulus, residue })
    }

    pub fn intervals(gen: Generator) -> Result<Self> {
        Ok(SymbolicSet::Intervals(IntervalFamily::new(gen)?))
    }

    /// `⋃[(2m)!, (2m+1)!]`.
    pub fn factorial_set() -> Self {
        Self::intervals(Generator::Alternating(BlockScheme::Factorial)).expect("valid generator")
    }

    pub fn squares() -> Self {
        Self::intervals(Generator::Squares).expect("valid generator")
    }

    pub fn union(children: Vec<SymbolicSet>) -> Self {
        SymbolicSet::Union(children)
    }

    pub fn intersection(children: Vec<SymbolicSet>) -> Self {
        SymbolicSet::Intersection(children)
    }

    pub fn complement(self) -> Self {
        SymbolicSet::Complement(Box::new(self))
    }

    pub fn is_empty_literal(&self) -> bool {
        matches!(self, SymbolicSet::Finite(v) if v.is_empty())
    }

    /// `n ∈ A`, for `n ≥ 1`.
    pub fn contains(&self, n: &Nat) -> Result<bool> {
        if n.is_zero() {
            return Err(Error::Precondition("membership is defined for n ≥ 1".into()));
        }
        self.contains_unchecked(n)
    }

    pub fn contains_u64(&self, n: u64) -> Result<bool> {
        self.contains(&nat(n))
    }

    fn contains_unchecked(&self, n: &Nat) -> Result<bool> {
        Ok(match self {
            SymbolicSet::Finite(v) => v.binary_search(n).is_ok(),
            SymbolicSet::Residue { modulus, residue } => &(n % modulus) == residue,
            SymbolicSet::Intervals(f) => f.contains(n)?,
            SymbolicSet::Fiber2(k) => crate::num::nu2(n) == u64::from(*k),
            SymbolicSet::Union(cs) => {
                for c in cs {
                    if c.contains_unchecked(n)? {
                        return Ok(true);
                    }
                }
                false
            }
            SymbolicSet::Intersection(cs) => {
                for c in cs {
                    if !c.contains_unchecked(n)? {
                        return Ok(false);
                    }
                }
                true
            }
            SymbolicSet::Complement(c) => !c.contains_unchecked(n)?,
        })
    }

    /// `|A ∩ [1, n]|`, exact. `count(A, 0) = 0`.
    pub fn count(&self, n: &Nat) -> Result<Nat> {
        if n.is_zero() {
            return Ok(Nat::zero());
        }
        match self {
            SymbolicSet::Finite(v) => Ok(nat(v.partition_point(|e| e <= n) as u64)),
            SymbolicSet::Residue { modulus, residue } => Ok(residue_count(modulus, residue, n)),
            SymbolicSet::Intervals(f) => f.count(n),
            SymbolicSet::Fiber2(k) => {
                let (m, r) = fiber_as_residue(*k);
                Ok(residue_count(&m, &r, n))
            }
            SymbolicSet::Complement(c) => Ok(n - c.count(n)?),
            SymbolicSet::Union(cs) => {
                // |X ∪ Y| = |X| + |Y| − |X ∩ Y|, folded left to right
                let mut acc: Option<SymbolicSet> = None;
                let mut total = Nat::zero();
                for c in cs {
                    match acc {
                        None => {
                            total = c.count(n)?;
                            acc = Some(c.clone());
                        }
                        Some(prev) => {
                            let both = count_intersection(&[&prev, c], n)?;
                            total = total + c.count(n)? - both;
                            acc = Some(SymbolicSet::Union(vec![prev, c.clone()]));
                        }
                    }
                }
                Ok(total)
            }
            SymbolicSet::Intersection(cs) => {
                if cs.is_empty() {
                    return Ok(n.clone());
                }
                let refs: Vec<&SymbolicSet> = cs.iter().collect();
                count_intersection(&refs, n)
            }
        }
    }

    pub fn count_u64(&self, n: u64) -> Result<u64> {
        Ok(self.count(&nat(n))?.to_u64().expect("count ≤ n fits u64"))
    }

    /// `|A ∩ [lo, hi]|` for `1 ≤ lo`.
    pub fn count_range(&self, lo: &Nat, hi: &Nat) -> Result<Nat> {
        if hi < lo {
            return Ok(Nat::zero());
        }
        Ok(self.count(hi)? - self.count(&(lo - 1u32))?)
    }

    /// Maximal runs of consecutive members inside `[1, h]`, in increasing order.
    pub fn runs(&self, h: u64) -> Result<Vec<(u64, u64)>> {
        if h == 0 {
            return Ok(Vec::new());
        }
        let raw: Vec<(u64, u64)> = match self {
            SymbolicSet::Finite(v) => v.iter().filter_map(|e| e.to_u64()).filter(|e| *e <= h).map(|e| (e, e)).collect(),
            SymbolicSet::Residue { modulus, residue } => {
                let m = modulus.to_u64().unwrap_or(u64::MAX);
                if m == 1 {
                    vec![(1, h)]
                } else {
                    let r = residue.to_u64().expect("residue < modulus");
                    let first = if r == 0 { m } else { r };
                    let mut out = Vec::new();
                    let mut x = first;
                    while x <= h {
                        out.push((x, x));
                        match x.checked_add(m) {
                            Some(y) => x = y,
                            None => break,
                        }
                    }
                    out
                }
            }
            SymbolicSet::Fiber2(k) => {
                let base = 1u64.checked_shl(*k).unwrap_or(u64::MAX);
                let mut out = Vec::new();
                let mut odd = 1u64;
                while let Some(x) = base.checked_mul(odd) {
                    if x > h {
                        break;
                    }
                    out.push((x, x));
                    odd += 2;
                }
                out
            }
            SymbolicSet::Intervals(f) => f
                .intervals_upto(&nat(h))?
                .into_iter()
                .map(|(l, r)| (l.to_u64().expect("≤ h"), r.to_u64().expect("≤ h")))
                .collect(),
            SymbolicSet::Complement(c) => {
                let inner = c.runs(h)?;
                let mut out = Vec::new();
                let mut next = 1u64;
                for (l, r) in inner {
                    if l > next {
                        out.push((next, l - 1));
                    }
                    next = r + 1;
                }
                if next <= h {
                    out.push((next, h));
                }
                out
            }
            SymbolicSet::Union(cs) => {
                let mut all = Vec::new();
                for c in cs {
                    all.extend(c.runs(h)?);
                }
                all.sort_unstable();
                all
            }
            SymbolicSet::Intersection(cs) => {
                let mut acc = vec![(1u64, h)];
                for c in cs {
                    acc = intersect_runs(&acc, &c.runs(h)?);
                    if acc.is_empty() {
                        break;
                    }
                }
                acc
            }
        };
        Ok(merge_runs(raw))
    }

    /// Exact eventually-periodic tail, when the set is built only from finite
    /// sets, residue classes, and 2-adic fibers with a period ≤ [`MAX_PERIOD`].
    pub fn periodic_form(&self) -> Option<Periodic> {
        match self {
            SymbolicSet::Finite(v) => {
                Some(Periodic { threshold: v.last().cloned().unwrap_or_default(), period: 1, mask: vec![false] })
            }
            SymbolicSet::Residue { modulus, residue } => {
                let p = modulus.to_u64().filter(|p| *p <= MAX_PERIOD)?;
                let r = residue.to_u64()?;
                let mut mask = vec![false; p as usize];
                mask[r as usize] = true;
                Some(Periodic { threshold: Nat::zero(), period: p, mask })
            }
            SymbolicSet::Fiber2(k) => {
                let (m, r) = fiber_as_residue(*k);
                SymbolicSet::Residue { modulus: m, residue: r }.periodic_form()
            }
            SymbolicSet::Intervals(f) => {
                if let Generator::Explicit(iv) = f.generator() {
                    let elems = iv.last().map(|(_, r)| r.clone()).unwrap_or_default();
                    Some(Periodic { threshold: elems, period: 1, mask: vec![false] })
                } else {
                    None
                }
            }
            SymbolicSet::Complement(c) => {
                let p = c.periodic_form()?;
                Some(Periodic { threshold: p.threshold, period: p.period, mask: p.mask.iter().map(|b| !b).collect() })
            }
            SymbolicSet::Union(cs) | SymbolicSet::Intersection(cs) => {
                let is_union = matches!(self, SymbolicSet::Union(_));
                let mut acc = Periodic { threshold: Nat::zero(), period: 1, mask: vec![!is_union] };
                for c in cs {
                    let p = c.periodic_form()?;
                    let period = acc.period.lcm(&p.period);
                    if period > MAX_PERIOD {
                        return None;
                    }
                    let a = acc.lift(period);
                    let b = p.lift(period);
                    let mask =
                        a.iter().zip(b.iter()).map(|(x, y)| if is_union { *x || *y } else { *x && *y }).collect();
                    acc = Periodic { threshold: std::cmp::max(acc.threshold, p.threshold), period, mask };
                }
                Some(acc)
            }
        }
    }

    /// The finite element list, when the set is structurally finite and small enough to list.
    /// Elements of a literally finite set: finite lists, explicit intervals
    /// and unions of these, up to `2^20` elements.
    pub fn finite_elements(&self) -> Option<Vec<Nat>> {
        let mut out = match self {
            SymbolicSet::Finite(v) => return Some(v.clone()),
            SymbolicSet::Intervals(f) => match f.generator() {
                Generator::Explicit(iv) => {
                    let total: u64 = iv.iter().map(|(l, r)| (r - l + 1u32).to_u64().unwrap_or(u64::MAX)).sum();
                    if total > 1 << 20 {
                        return None;
                    }
                    iv.iter().flat_map(|(l, r)| num_iter_range(l, r)).collect::<Vec<_>>()
                }
                _ => return None,
            },
            SymbolicSet::Union(cs) => {
                let mut all = Vec::new();
                for c in cs {
                    all.extend(c.finite_elements()?);
                    if all.len() > 1 << 20 {
                        return None;
                    }
                }
                all
            }
            _ => return None,
        };
        out.sort();
        out.dedup();
        Some(out)
    }

    pub fn describe(&self) -> String {
        match self {
            SymbolicSet::Finite(v) if v.is_empty() => "∅".into(),
            SymbolicSet::Finite(v) => format!("finite({} elements)", v.len()),
            SymbolicSet::Residue { modulus, residue } => format!("{residue} mod {modulus}"),
            SymbolicSet::Intervals(f) => format!("intervals:{}", f.generator().name()),
            SymbolicSet::Fiber2(k) => format!("fiber2({k})"),
            SymbolicSet::Union(cs) => {
                format!("union({})", cs.iter().map(|c| c.describe()).collect::<Vec<_>>().join(", "))
            }
            SymbolicSet::Intersection(cs) => {
                format!("intersection({})", cs.iter().map(|c| c.describe()).collect::<Vec<_>>().join(", "))
            }
            SymbolicSet::Complement(c) if c.is_empty_literal() => "N".into(),
            SymbolicSet::Complement(c) => format!("complement({})", c.describe()),
        }
    }
}

fn fiber_as_residue(k: u32) -> (Nat, Nat) {
    (Nat::one() << (k + 1), Nat::one() << k)
}

fn residue_count(modulus: &Nat, residue: &Nat, n: &Nat) -> Nat {
    if residue.is_zero() {
        n / modulus
    } else if n < residue {
        Nat::zero()
    } else {
        (n - residue) / modulus + 1u32
    }
}

/// Chinese-remainder intersection of two residue classes over positive integers.
fn crt(m1: &Nat, r1: &Nat, m2: &Nat, r2: &Nat) -> Option<(Nat, Nat)> {
    use num_bigint::BigInt;
    let a = BigInt::from(m1.clone());
    let b = BigInt::from(m2.clone());
    let g = a.extended_gcd(&b);
    let diff = BigInt::from(r2.clone()) - BigInt::from(r1.clone());
    if !(&diff % &g.gcd).is_zero() {
        return None;
    }
    let l = &a / &g.gcd * &b;
    // x = r1 + m1 * ((diff/g) * inv(m1/g) mod (m2/g))
    let t = (&diff / &g.gcd * &g.x).mod_floor(&(&b / &g.gcd));
    let x = (BigInt::from(r1.clone()) + &a * t).mod_floor(&l);
    Some((l.to_biguint().expect("positive"), x.to_biguint().expect("reduced")))
}

/// `|X₁ ∩ … ∩ X_k ∩ [1, n]|` by structural recursion.
fn count_intersection(items: &[&SymbolicSet], n: &Nat) -> Result<Nat> {
    if n.is_zero() {
        return Ok(Nat::zero());
    }
    if items.is_empty() {
        return Ok(n.clone());
    }
    if items.len() == 1 {
        return items[0].count(n);
    }
    // flatten nested intersections
    if let Some(i) = items.iter().position(|s| matches!(s, SymbolicSet::Intersection(_))) {
        let mut rest: Vec<&SymbolicSet> = items.to_vec();
        let SymbolicSet::Intersection(cs) = rest.remove(i) else { unreachable!() };
        rest.extend(cs.iter());
        return count_intersection(&rest, n);
    }
    // a finite member bounds everything
    if let Some(i) = items.iter().position(|s| matches!(s, SymbolicSet::Finite(_))) {
        let SymbolicSet::Finite(v) = items[i] else { unreachable!() };
        let mut c = Nat::zero();
        'outer: for e in v.iter().take_while(|e| *e <= n) {
            for (j, s) in items.iter().enumerate() {
                if j != i && !s.contains_unchecked(e)? {
                    continue 'outer;
                }
            }
            c += 1u32;
        }
        return Ok(c);
    }
    // X ∩ Zᶜ = X − (X ∩ Z)
    if let Some(i) = items.iter().position(|s| matches!(s, SymbolicSet::Complement(_))) {
        let mut rest: Vec<&SymbolicSet> = items.to_vec();
        let SymbolicSet::Complement(z) = rest.remove(i) else { unreachable!() };
        let base = count_intersection(&rest, n)?;
        rest.push(z);
        let sub = count_intersection(&rest, n)?;
        return Ok(base - sub);
    }
    // X ∩ (U₁ ∪ U₂ ∪ …) by inclusion–exclusion on the first split
    if let Some(i) = items.iter().position(|s| matches!(s, SymbolicSet::Union(_))) {
        let mut rest: Vec<&SymbolicSet> = items.to_vec();
        let SymbolicSet::Union(us) = rest.remove(i) else { unreachable!() };
        if us.is_empty() {
            return Ok(Nat::zero());
        }
        let head = &us[0];
        let tail = SymbolicSet::Union(us[1..].to_vec());
        let mut with_head = rest.clone();
        with_head.push(head);
        let mut with_tail = rest.clone();
        with_tail.push(&tail);
        let mut with_both = rest;
        with_both.push(head);
        with_both.push(&tail);
        let a = count_intersection(&with_head, n)?;
        let b = count_intersection(&with_tail, n)?;
        let c = count_intersection(&with_both, n)?;
        return Ok(a + b - c);
    }
    // two interval families: sweep them into one explicit family
    let fams: Vec<usize> =
        items.iter().enumerate().filter(|(_, s)| matches!(s, SymbolicSet::Intervals(_))).map(|(i, _)| i).collect();
    if fams.len() >= 2 {
        let (SymbolicSet::Intervals(f), SymbolicSet::Intervals(g)) = (items[fams[0]], items[fams[1]]) else {
            unreachable!()
        };
        let (a, b) = (f.intervals_upto(n)?, g.intervals_upto(n)?);
        let (mut i, mut j) = (0, 0);
        let mut both = Vec::new();
        while i < a.len() && j < b.len() {
            let l = (&a[i].0).max(&b[j].0);
            let r = (&a[i].1).min(&b[j].1);
            if l <= r {
                both.push((l.clone(), r.clone()));
            }
            if a[i].1 < b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        if both.is_empty() {
            return Ok(Nat::zero());
        }
        let merged = SymbolicSet::Intervals(IntervalFamily::new(Generator::Explicit(both))?);
        let mut rest: Vec<&SymbolicSet> =
            items.iter().enumerate().filter(|(k, _)| *k != fams[0] && *k != fams[1]).map(|(_, s)| *s).collect();
        rest.push(&merged);
        return count_intersection(&rest, n);
    }
    // sum over intervals of an interval family
    if let Some(i) = items.iter().position(|s| matches!(s, SymbolicSet::Intervals(_))) {
        let mut rest: Vec<&SymbolicSet> = items.to_vec();
        let SymbolicSet::Intervals(f) = rest.remove(i) else { unreachable!() };
        let mut c = Nat::zero();
        for (l, r) in f.intervals_upto(n)? {
            let hi = count_intersection(&rest, &r)?;
            let lo = count_intersection(&rest, &(&l - 1u32))?;
            c += hi - lo;
        }
        return Ok(c);
    }
    // only residue classes and fibers remain
    let mut m = Nat::one();
    let mut r = Nat::zero();
    for s in items {
        let (m2, r2) = match s {
            SymbolicSet::Residue { modulus, residue } => (modulus.clone(), residue.clone()),
            SymbolicSet::Fiber2(k) => fiber_as_residue(*k),
            _ => unreachable!("all other variants handled above"),
        };
        match crt(&m, &r, &m2, &r2) {
            Some((mm, rr)) => {
                m = mm;
                r = rr;
            }
            None => return Ok(Nat::zero()),
        }
    }
    Ok(residue_count(&m, &r, n))
}

fn merge_runs(mut runs: Vec<(u64, u64)>) -> Vec<(u64, u64)> {
    runs.sort_unstable();
    let mut out: Vec<(u64, u64)> = Vec::with_capacity(runs.len());
    for (l, r) in runs {
        if let Some(last) = out.last_mut() {
            if l <= last.1.saturating_add(1) {
                last.1 = last.1.max(r);
                continue;
            }
        }
        out.push((l, r));
    }
    out
}

fn intersect_runs(a: &[(u64, u64)], b: &[(u64, u64)]) -> Vec<(u64, u64)> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        let l = a[i].0.max(b[j].0);
        let r = a[i].1.min(b[j].1);
        if l <= r {
            out.push((l, r));
        }
        if a[i].1 < b[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

fn num_iter_range(l: &Nat, r: &Nat) -> impl Iterator<Item = Nat> {
    let (l, r) = (l.clone(), r.clone());
    std::iter::successors(Some(l), move |x| (x < &r).then(|| x + 1u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(a: &SymbolicSet, n: u64) -> u64 {
        (1..=n).filter(|k| a.contains_u64(*k).unwrap()).count() as u64
    }

    #[test]
    fn spec_examples() {
        let evens = SymbolicSet::residue(2, 0).unwrap();
        assert!(evens.contains_u64(10).unwrap());
        assert_eq!(evens.count_u64(10).unwrap(), 5);
        let f = SymbolicSet::factorial_set();
        assert!(!f.contains_u64(7).unwrap());
        assert_eq!(f.count_u64(6).unwrap(), 5);
        assert_eq!(f.count_u64(30).unwrap(), 12);
        assert!(SymbolicSet::Fiber2(2).contains_u64(12).unwrap());
        assert!(!SymbolicSet::Fiber2(2).contains_u64(8).unwrap());
    }

    #[test]
    fn zero_is_rejected() {
        assert!(SymbolicSet::all().contains(&Nat::zero()).is_err());
    }

    #[test]
    fn combos_match_brute_force() {
        let f = SymbolicSet::factorial_set();
        let sets = vec![
            SymbolicSet::union(vec![SymbolicSet::residue(3, 1).unwrap(), f.clone()]),
            SymbolicSet::intersection(vec![SymbolicSet::residue(2, 0).unwrap(), f.clone()]),
            SymbolicSet::intersection(vec![SymbolicSet::residue(4, 1).unwrap(), SymbolicSet::residue(6, 3).unwrap()]),
            SymbolicSet::intersection(vec![SymbolicSet::residue(4, 1).unwrap(), SymbolicSet::residue(6, 2).unwrap()]),
            SymbolicSet::intersection(vec![
                SymbolicSet::union(vec![SymbolicSet::squares(), SymbolicSet::Fiber2(1)]),
                f.clone().complement(),
            ]),
            SymbolicSet::union(vec![
                SymbolicSet::finite([3, 5, 700]).unwrap(),
                SymbolicSet::Fiber2(0),
                SymbolicSet::squares(),
            ]),
            SymbolicSet::intersection(vec![SymbolicSet::Fiber2(1), SymbolicSet::finite([2, 4, 6, 10, 12]).unwrap()]),
        ];
        for s in &sets {
            let mut c = 0;
            for n in 1..=800u64 {
                if s.contains_u64(n).unwrap() {
                    c += 1;
                }
                assert_eq!(s.count_u64(n).unwrap(), c, "{} at {n}", s.describe());
            }
        }
    }

    #[test]
    fn runs_cover_members() {
        let s = SymbolicSet::union(vec![SymbolicSet::factorial_set(), SymbolicSet::residue(5, 0).unwrap()]);
        let runs = s.runs(200).unwrap();
        let total: u64 = runs.iter().map(|(l, r)| r - l + 1).sum();
        assert_eq!(total, brute(&s, 200));
        let comp = s.clone().complement().runs(200).unwrap();
        let ctotal: u64 = comp.iter().map(|(l, r)| r - l + 1).sum();
        assert_eq!(total + ctotal, 200);
    }

    #[test]
    fn periodic_tail() {
        let s = SymbolicSet::union(vec![SymbolicSet::residue(2, 0).unwrap(), SymbolicSet::finite([3]).unwrap()]);
        let p = s.periodic_form().unwrap();
        assert_eq!(p.period, 2);
        assert_eq!(p.members_per_period(), 1);
        assert_eq!(p.threshold, nat(3));
        assert!(SymbolicSet::factorial_set().periodic_form().is_none());
    }

    #[test]
    fn big_counts_are_exact() {
        let f = SymbolicSet::factorial_set();
        let n = crate::num::factorial(31);
        let c = f.count(&n).unwrap();
        // the last interval [30!, 31!] is fully counted
        let prev = f.count(&(crate::num::factorial(30) - 1u32)).unwrap();
        assert_eq!(c - prev, crate::num::factorial(31) - crate::num::factorial(30) + 1u32);
    }
}
