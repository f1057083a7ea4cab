//! Certified asymptotic facts about a [`SymbolicSet`]: finiteness, bounds on
//! upper and lower asymptotic density, summability of reciprocals, and
//! finiteness of the 2-adic fibers `{n ∈ A : ν₂(n) = k}`.
//!
//! Facts are derived structurally. Each named generator has a hand-checked
//! table entry; combinators propagate bounds with the usual inequalities for
//! unions, intersections and complements.

use num_traits::{One, Zero};
use serde_json::json;

use crate::num::{fmt_q, q, Q};
use crate::sets::{Generator, Periodic, Schedule, SymbolicSet};

/// Closed interval `[lo, hi] ⊆ [0, 1]` known to contain a density.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub lo: Q,
    pub hi: Q,
}

impl Bounds {
    pub fn exact(v: Q) -> Self {
        Bounds { lo: v.clone(), hi: v }
    }

    pub fn unknown() -> Self {
        Bounds { lo: Q::zero(), hi: Q::one() }
    }

    pub fn new(lo: Q, hi: Q) -> Self {
        Bounds { lo, hi }
    }

    pub fn value(&self) -> Option<&Q> {
        (self.lo == self.hi).then_some(&self.lo)
    }

    pub fn meet(&self, other: &Bounds) -> Bounds {
        Bounds { lo: self.lo.clone().max(other.lo.clone()), hi: self.hi.clone().min(other.hi.clone()) }
    }

    fn one_minus(&self) -> Bounds {
        Bounds { lo: Q::one() - &self.hi, hi: Q::one() - &self.lo }
    }

    fn scale(&self, r: &Q) -> Bounds {
        Bounds { lo: &self.lo * r, hi: &self.hi * r }
    }

    pub fn render(&self) -> String {
        match self.value() {
            Some(v) => fmt_q(v),
            None => format!("[{}, {}]", fmt_q(&self.lo), fmt_q(&self.hi)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SetProfile {
    pub finite: Option<bool>,
    pub cofinite: Option<bool>,
    /// Upper asymptotic density.
    pub upper: Bounds,
    /// Lower asymptotic density.
    pub lower: Bounds,
    /// `Σ_{a ∈ A} 1/a < ∞`.
    pub summable: Option<bool>,
    /// Every fiber `{n ∈ A : ν₂(n) = k}` is finite.
    pub fibers_finite: Option<bool>,
    /// Some `c > 1` with `[n, c·n] ⊆ A` for infinitely many `n`.
    pub dilation: Option<Q>,
    pub basis: Vec<String>,
}

impl SetProfile {
    pub fn unknown() -> Self {
        SetProfile {
            finite: None,
            cofinite: None,
            upper: Bounds::unknown(),
            lower: Bounds::unknown(),
            summable: None,
            fibers_finite: None,
            dilation: None,
            basis: Vec::new(),
        }
    }

    pub fn finite_set(why: &str) -> Self {
        let mut p = SetProfile::unknown();
        p.finite = Some(true);
        p.basis.push(why.to_string());
        p.settle();
        p
    }

    pub fn cofinite_set(why: &str) -> Self {
        let mut p = SetProfile::unknown();
        p.cofinite = Some(true);
        p.basis.push(why.to_string());
        p.settle();
        p
    }

    pub fn with(basis: &str) -> Self {
        let mut p = SetProfile::unknown();
        p.basis.push(basis.to_string());
        p
    }

    /// Closes the profile under the implications between its fields.
    pub fn settle(&mut self) {
        for _ in 0..3 {
            if let Some(c) = &self.dilation {
                let lb = Q::one() - Q::one() / c;
                if lb > self.upper.lo {
                    self.upper.lo = lb;
                }
            }
            if self.upper.lo > Q::zero() {
                self.finite = Some(false);
                self.summable = Some(false);
                self.fibers_finite = Some(false);
            }
            if self.summable == Some(true) || self.fibers_finite == Some(true) {
                self.upper.hi = Q::zero();
                self.lower.hi = Q::zero();
            }
            if self.finite == Some(true) {
                self.upper = Bounds::exact(Q::zero());
                self.lower = Bounds::exact(Q::zero());
                self.summable = Some(true);
                self.fibers_finite = Some(true);
                self.cofinite = Some(false);
            }
            if self.cofinite == Some(true) {
                self.upper = Bounds::exact(Q::one());
                self.lower = Bounds::exact(Q::one());
                self.finite = Some(false);
                if self.dilation.is_none() {
                    self.dilation = Some(q(2, 1));
                }
            }
            if self.lower.hi < Q::one() {
                self.cofinite = Some(false);
            }
            if self.summable == Some(false) || self.fibers_finite == Some(false) {
                self.finite = Some(false);
            }
            if self.lower.lo > self.upper.lo {
                self.upper.lo = self.lower.lo.clone();
            }
            if self.upper.hi < self.lower.hi {
                self.lower.hi = self.upper.hi.clone();
            }
        }
        debug_assert!(self.upper.lo <= self.upper.hi, "inconsistent upper density {:?}", self);
        debug_assert!(self.lower.lo <= self.lower.hi, "inconsistent lower density {:?}", self);
    }

    /// Intersects the knowledge of two profiles of the same set.
    pub fn merge(&self, other: &SetProfile) -> SetProfile {
        fn pick(a: Option<bool>, b: Option<bool>) -> Option<bool> {
            a.or(b)
        }
        let mut p = SetProfile {
            finite: pick(self.finite, other.finite),
            cofinite: pick(self.cofinite, other.cofinite),
            upper: self.upper.meet(&other.upper),
            lower: self.lower.meet(&other.lower),
            summable: pick(self.summable, other.summable),
            fibers_finite: pick(self.fibers_finite, other.fibers_finite),
            dilation: match (&self.dilation, &other.dilation) {
                (Some(a), Some(b)) => Some(a.clone().max(b.clone())),
                (a, b) => a.clone().or(b.clone()),
            },
            basis: self.basis.iter().chain(other.basis.iter()).cloned().collect(),
        };
        p.settle();
        p
    }

    pub fn to_json(&self) -> serde_json::Value {
        fn tri(v: Option<bool>) -> serde_json::Value {
            match v {
                Some(b) => json!(b),
                None => json!("unknown"),
            }
        }
        json!({
            "finite": tri(self.finite),
            "cofinite": tri(self.cofinite),
            "upper_density": self.upper.render(),
            "lower_density": self.lower.render(),
            "summable": tri(self.summable),
            "fibers_finite": tri(self.fibers_finite),
            "basis": self.basis,
        })
    }
}

/// Profile of an eventually periodic set.
pub fn periodic_profile(p: &Periodic) -> SetProfile {
    let m = p.members_per_period();
    let rho = q(m as i64, p.period as i64);
    let mut out = SetProfile::with(&format!("eventually periodic with period {}, {} residues", p.period, m));
    if m == 0 {
        out.finite = Some(true);
    } else if m == p.period {
        out.cofinite = Some(true);
    } else {
        out.upper = Bounds::exact(rho.clone());
        out.lower = Bounds::exact(rho);
    }
    out.settle();
    out
}

/// Whether every bounded window `[1, n]` meets the set in `o(n)` maximal runs.
/// Closed under the Boolean operations; periodic sets of density strictly
/// between 0 and 1 do not qualify.
pub fn few_runs(a: &SymbolicSet) -> bool {
    match a {
        SymbolicSet::Finite(_) => true,
        SymbolicSet::Residue { modulus, .. } => modulus.is_one(),
        SymbolicSet::Fiber2(_) => false,
        SymbolicSet::Intervals(_) => true,
        SymbolicSet::Complement(c) => few_runs(c),
        SymbolicSet::Union(cs) | SymbolicSet::Intersection(cs) => cs.iter().all(few_runs),
    }
}

pub fn profile(a: &SymbolicSet) -> SetProfile {
    if let Some(p) = a.periodic_form() {
        return periodic_profile(&p);
    }
    let mut p = match a {
        SymbolicSet::Finite(_) => SetProfile::finite_set("finite list"),
        SymbolicSet::Residue { modulus, .. } => {
            let mut p = SetProfile::with("residue class");
            let rho = Q::new(1.into(), num_bigint::BigInt::from(modulus.clone()));
            p.upper = Bounds::exact(rho.clone());
            p.lower = Bounds::exact(rho);
            p
        }
        SymbolicSet::Fiber2(k) => {
            let mut p = SetProfile::with("2-adic fiber");
            let rho = Q::new(1.into(), num_bigint::BigInt::from(2u32).pow(k + 1));
            p.upper = Bounds::exact(rho.clone());
            p.lower = Bounds::exact(rho);
            p
        }
        SymbolicSet::Intervals(f) => generator_profile(f.generator()),
        SymbolicSet::Complement(c) => complement_profile(&profile(c)),
        SymbolicSet::Union(cs) => union_profile(cs),
        SymbolicSet::Intersection(cs) => intersection_profile(cs),
    };
    p.settle();
    p
}

fn complement_profile(c: &SetProfile) -> SetProfile {
    let mut p = SetProfile::with("complement");
    p.finite = c.cofinite;
    p.cofinite = c.finite;
    p.upper = c.lower.one_minus();
    p.lower = c.upper.one_minus();
    p
}

fn union_profile(cs: &[SymbolicSet]) -> SetProfile {
    if cs.is_empty() {
        return SetProfile::finite_set("empty union");
    }
    let ps: Vec<SetProfile> = cs.iter().map(profile).collect();
    let mut p = SetProfile::with("union");
    p.finite = if ps.iter().all(|c| c.finite == Some(true)) {
        Some(true)
    } else if ps.iter().any(|c| c.finite == Some(false)) {
        Some(false)
    } else {
        None
    };
    if ps.iter().any(|c| c.cofinite == Some(true)) {
        p.cofinite = Some(true);
    }
    p.summable = all_any(&ps, |c| c.summable);
    p.fibers_finite = all_any(&ps, |c| c.fibers_finite);
    let sum_hi: Q = ps.iter().map(|c| c.upper.hi.clone()).sum();
    p.upper = Bounds::new(ps.iter().map(|c| c.upper.lo.clone()).max().unwrap(), sum_hi.clone().min(Q::one()));
    let lower_hi = ps.iter().map(|c| &c.lower.hi + (&sum_hi - &c.upper.hi)).min().unwrap().min(Q::one());
    p.lower = Bounds::new(ps.iter().map(|c| c.lower.lo.clone()).max().unwrap(), lower_hi);
    p.dilation = ps.iter().filter_map(|c| c.dilation.clone()).max();
    p.settle();
    // A ∪ B = (Aᶜ ∩ Bᶜ)ᶜ, which lets the periodic splitting below apply.
    if let Some(split) = split_periodic(&cs.iter().map(|c| c.clone().complement()).collect::<Vec<_>>()) {
        return p.merge(&complement_profile(&split));
    }
    p
}

fn intersection_profile(cs: &[SymbolicSet]) -> SetProfile {
    if cs.is_empty() {
        return SetProfile::cofinite_set("empty intersection");
    }
    let mut p = intersect_profiles(&cs.iter().map(profile).collect::<Vec<_>>());
    if let Some(split) = split_periodic(cs) {
        p = p.merge(&split);
    }
    p
}

/// Profile of `X₁ ∩ … ∩ X_k` from the profiles of the `X_i` alone.
pub fn intersect_profiles(ps: &[SetProfile]) -> SetProfile {
    if ps.is_empty() {
        return SetProfile::cofinite_set("empty intersection");
    }
    let k = Q::from_integer((ps.len() as i64 - 1).into());
    let mut p = SetProfile::with("intersection");
    if ps.iter().any(|c| c.finite == Some(true)) {
        p.finite = Some(true);
    }
    if ps.iter().all(|c| c.cofinite == Some(true)) {
        p.cofinite = Some(true);
    }
    if ps.iter().any(|c| c.summable == Some(true)) {
        p.summable = Some(true);
    }
    if ps.iter().any(|c| c.fibers_finite == Some(true)) {
        p.fibers_finite = Some(true);
    }
    let lower_lo_sum: Q = ps.iter().map(|c| c.lower.lo.clone()).sum();
    let upper_lo = ps.iter().map(|c| &c.upper.lo + (&lower_lo_sum - &c.lower.lo) - &k).max().unwrap().max(Q::zero());
    p.upper = Bounds::new(upper_lo, ps.iter().map(|c| c.upper.hi.clone()).min().unwrap());
    p.lower = Bounds::new((&lower_lo_sum - &k).max(Q::zero()), ps.iter().map(|c| c.lower.hi.clone()).min().unwrap());
    if ps.iter().all(|c| c.cofinite == Some(true) || c.dilation.is_some()) {
        let non_cofinite: Vec<&SetProfile> = ps.iter().filter(|c| c.cofinite != Some(true)).collect();
        if non_cofinite.len() <= 1 {
            p.dilation = non_cofinite.first().and_then(|c| c.dilation.clone()).or(Some(q(2, 1)));
        }
    }
    p.settle();
    p
}

/// `X ∩ R` with `R` eventually periodic of density `ρ` and `X` a set with
/// `o(n)` runs: each run of `X` sees `R` in proportion `ρ` up to `O(period)`,
/// so both densities of the intersection are `ρ` times those of `X`.
fn split_periodic(cs: &[SymbolicSet]) -> Option<SetProfile> {
    let mut flat = Vec::new();
    flatten_intersection(cs, &mut flat);
    let (periodic, rest): (Vec<&SymbolicSet>, Vec<&SymbolicSet>) =
        flat.into_iter().partition(|c| c.periodic_form().is_some());
    if periodic.is_empty() || rest.is_empty() || !rest.iter().all(|c| few_runs(c)) {
        return None;
    }
    let r = SymbolicSet::Intersection(periodic.into_iter().cloned().collect()).periodic_form()?;
    let rho = q(r.members_per_period() as i64, r.period as i64);
    let x = if rest.len() == 1 {
        profile(rest[0])
    } else {
        intersection_profile(&rest.iter().map(|c| (*c).clone()).collect::<Vec<_>>())
    };
    let mut p = SetProfile::with(&format!("few-run set against a periodic set of density {}", fmt_q(&rho)));
    p.upper = x.upper.scale(&rho);
    p.lower = x.lower.scale(&rho);
    if rho.is_zero() {
        p.finite = Some(true);
    }
    if let [SymbolicSet::Intervals(f)] = rest.as_slice() {
        if let Some(inf) = sparse_hits_residues(f.generator(), &r) {
            p.finite = Some(!inf);
            p.basis.push(format!(
                "{} meets the periodic part {}",
                f.generator().name(),
                if inf { "infinitely often" } else { "finitely often" }
            ));
        }
    }
    p.settle();
    Some(p)
}

fn flatten_intersection<'a>(cs: &'a [SymbolicSet], out: &mut Vec<&'a SymbolicSet>) {
    for c in cs {
        match c {
            SymbolicSet::Intersection(inner) => flatten_intersection(inner, out),
            other => out.push(other),
        }
    }
}

/// Whether squares or powers of two fall into the periodic set infinitely often:
/// `(x + kP)² ≡ x²` and `2^j mod P` is eventually periodic with preperiod ≤ log₂ P.
fn sparse_hits_residues(g: &Generator, r: &Periodic) -> Option<bool> {
    let p = r.period;
    match g {
        Generator::Squares => Some((0..p).any(|x| r.mask[((x as u128 * x as u128) % p as u128) as usize])),
        Generator::Pow2 => {
            let from = r.threshold.bits().max(21);
            let mut v = 1u64 % p;
            let mut hit = false;
            for j in 0..from + p {
                if j >= from && r.mask[v as usize] {
                    hit = true;
                    break;
                }
                v = (v * 2) % p;
            }
            Some(hit)
        }
        _ => None,
    }
}

fn all_any(ps: &[SetProfile], f: impl Fn(&SetProfile) -> Option<bool>) -> Option<bool> {
    if ps.iter().all(|c| f(c) == Some(true)) {
        Some(true)
    } else if ps.iter().any(|c| f(c) == Some(false)) {
        Some(false)
    } else {
        None
    }
}

/// Table of hand-checked facts for the named generators.
pub fn generator_profile(g: &Generator) -> SetProfile {
    let zero = Q::zero;
    let mut p = SetProfile::with(&format!("generator {}", g.name()));
    match g {
        Generator::Alternating(s) => {
            // λ at a_{2m+1} is at least 1 − a_{2m}/a_{2m+1} → 1; at a_{2m} − 1 at most a_{2m−1}/a_{2m} → 0.
            if s.ratio_tends_to_zero() {
                p.upper = Bounds::exact(Q::one());
                p.lower = Bounds::exact(zero());
                p.dilation = Some(q(2, 1));
                p.basis.push("block ratio a_n/a_{n+1} → 0".into());
            }
        }
        Generator::Squares => {
            p.finite = Some(false);
            p.summable = Some(true);
            // odd squares lie in the fiber ν₂ = 0
            p.fibers_finite = Some(false);
        }
        Generator::Pow2 => {
            p.finite = Some(false);
            p.summable = Some(true);
            p.fibers_finite = Some(true);
        }
        Generator::FactorialDouble => {
            // at 2·m!, count = m!(1 + O(1/m)); at m! − 1, count = O((m−1)!)
            p.upper = Bounds::exact(q(1, 2));
            p.lower = Bounds::exact(zero());
            p.dilation = Some(q(2, 1));
        }
        Generator::SqrtWindows => {
            p.finite = Some(false);
            p.summable = Some(true);
            // 4^j + 1 is odd
            p.fibers_finite = Some(false);
        }
        Generator::Geometric { base, theta, .. } => {
            let b = Q::from_integer((*base as i64).into());
            let one = Q::one();
            p.upper = Bounds::exact(theta * &b / ((&b - &one) * (&one + theta)));
            p.lower = Bounds::exact(theta / (&b - &one));
            p.dilation = Some(&one + theta / q(2, 1));
        }
        Generator::Blocks { scheme, prefix: _, cycle } => {
            let any_true = cycle.iter().any(|b| *b);
            let any_false = cycle.iter().any(|b| !*b);
            if !any_true {
                p.finite = Some(true);
            } else if !any_false {
                p.cofinite = Some(true);
            } else if scheme.ratio_tends_to_zero() {
                p.upper = Bounds::exact(Q::one());
                p.lower = Bounds::exact(zero());
                p.dilation = Some(q(2, 1));
            }
        }
        Generator::TentLevel { geometry, threshold, strict } => {
            let half = q(1, 2);
            let empty = if *strict { threshold >= &half } else { threshold > &half };
            if empty {
                p.finite = Some(true);
            } else {
                let t = threshold.clone();
                let peaks_only = !*strict && t == half;
                match &geometry.schedule {
                    Schedule::Log => {
                        // tent j covers O(N_j / log N_j) integers inside [N_j, R·N_j]
                        p.upper = Bounds::exact(zero());
                        p.finite = Some(false);
                        if peaks_only {
                            p.summable = Some(true);
                        } else {
                            // harmonic mass per tent ≈ (1 − 2t)/m(N_j), m(N_j) linear in j
                            p.summable = Some(false);
                            p.fibers_finite = Some(false);
                        }
                    }
                    Schedule::Const(d) => {
                        p.finite = Some(false);
                        if peaks_only {
                            p.summable = Some(true);
                        } else {
                            let r = Q::from_integer((geometry.ratio as i64).into());
                            let b = Q::from_integer((geometry.base as i64).into());
                            let width = (Q::one() - &t * q(2, 1)) / d;
                            let one = Q::one();
                            p.upper = Bounds::new(width.clone(), (&width * &r * &b / (&b - &one)).min(one.clone()));
                            p.lower = Bounds::new(zero(), (&width * &r / (&b - &one)).min(one));
                        }
                    }
                }
            }
        }
        Generator::Explicit(_) => {
            p.finite = Some(true);
        }
    }
    p.settle();
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(json: &str) -> SymbolicSet {
        SymbolicSet::from_json(json).unwrap()
    }

    #[test]
    fn residue_and_finite() {
        let p = profile(&set(r#"{"kind":"residue","mod":3,"res":1}"#));
        assert_eq!(p.upper, Bounds::exact(q(1, 3)));
        assert_eq!(p.summable, Some(false));
        let f = profile(&set(r#"{"kind":"finite","elems":[5,9]}"#));
        assert_eq!(f.upper, Bounds::exact(Q::zero()));
        assert_eq!(f.finite, Some(true));
    }

    #[test]
    fn factorial_and_complement() {
        let a = SymbolicSet::factorial_set();
        let p = profile(&a);
        assert_eq!(p.upper.value(), Some(&Q::one()));
        assert_eq!(p.lower.value(), Some(&Q::zero()));
        let c = profile(&a.complement());
        assert_eq!(c.upper.value(), Some(&Q::one()));
        assert_eq!(c.summable, Some(false));
    }

    #[test]
    fn periodic_splitting() {
        let evens = SymbolicSet::residue(2, 0).unwrap();
        let a = SymbolicSet::factorial_set();
        let i = profile(&SymbolicSet::intersection(vec![a.clone(), evens.clone()]));
        assert_eq!(i.upper.value(), Some(&q(1, 2)));
        assert_eq!(i.lower.value(), Some(&Q::zero()));
        let u = profile(&SymbolicSet::union(vec![a, evens]));
        assert_eq!(u.upper.value(), Some(&Q::one()));
        assert_eq!(u.lower.value(), Some(&q(1, 2)));
    }

    #[test]
    fn geometric_densities() {
        let g = set(r#"{"kind":"intervals","gen":{"name":"geometric","base":2,"theta":"1/2","start":1}}"#);
        let p = profile(&g);
        // θb/((b−1)(1+θ)) = 1/(3/2) = 2/3, θ/(b−1) = 1/2
        assert_eq!(p.upper.value(), Some(&q(2, 3)));
        assert_eq!(p.lower.value(), Some(&q(1, 2)));
    }

    #[test]
    fn sparse_sets() {
        assert_eq!(profile(&SymbolicSet::squares()).fibers_finite, Some(false));
        let pow2 = profile(&set(r#"{"kind":"intervals","gen":"pow2"}"#));
        assert_eq!(pow2.fibers_finite, Some(true));
        assert_eq!(pow2.upper.value(), Some(&Q::zero()));
    }
}
