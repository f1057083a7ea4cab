//! Level sets `L_δ(μ, D) = {n : μ_n(D) ≥ δ}` with certified structure.

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::crossing::{inverse_floor, periodic_level_set, scan_level_set, SCAN_LIMIT};
use super::density::upper_density;
use super::profile::{intersect_profiles, profile, Bounds, SetProfile};
use super::submeasure::{Kernel, Submeasure};
use crate::error::Result;
use crate::num::{fmt_q, nat, q, Nat, Q};
use crate::sets::{BlockScheme, Bound, Generator, SymbolicSet};

/// Blocks evaluated exactly before the aligned tail takes over.
const MAX_EARLY_BLOCKS: u64 = 200;

#[derive(Clone, Debug)]
pub struct LevelSet {
    /// The level set itself, when it has a finite symbolic description.
    pub exact: Option<SymbolicSet>,
    pub profile: SetProfile,
    pub basis: String,
}

impl LevelSet {
    fn exact(set: SymbolicSet, basis: impl Into<String>) -> Self {
        let profile = profile(&set);
        LevelSet { exact: Some(set), profile, basis: basis.into() }
    }

    fn profiled(profile: SetProfile, basis: impl Into<String>) -> Self {
        LevelSet { exact: None, profile, basis: basis.into() }
    }

    pub fn describe(&self) -> String {
        match &self.exact {
            Some(s) => s.describe(),
            None => {
                let p = &self.profile;
                match (p.finite, p.cofinite) {
                    (Some(true), _) => "finite".into(),
                    (_, Some(true)) => "cofinite".into(),
                    _ => format!("upper density {}, lower density {}", p.upper.render(), p.lower.render()),
                }
            }
        }
    }
}

/// Behaviour of `L_δ` as `δ → 0⁺`.
#[derive(Clone, Debug)]
pub enum SmallDelta {
    /// Every `L_δ` with `δ > 0` is finite.
    Vanishing,
    /// `L_δ` differs from this set by finitely many indices for every small `δ > 0`.
    Eventually(SymbolicSet),
    Unknown,
}

/// Per-block kinds `(a_n ∈ D, (a_n, a_{n+1}) ⊆ D)` of a set aligned with a
/// block scheme, repeating with period `kinds.len()` from block `start`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlignedTail {
    pub start: u64,
    pub kinds: Vec<(bool, bool)>,
}

impl AlignedTail {
    fn kind(&self, n: u64) -> (bool, bool) {
        self.kinds[((n - self.start) % self.kinds.len() as u64) as usize]
    }

    fn constant(scheme: &BlockScheme, threshold: &Nat, member: bool) -> Result<Self> {
        let start = if threshold.is_zero() { 1 } else { scheme.block_of(threshold)? + 1 };
        Ok(AlignedTail { start, kinds: vec![(member, member)] })
    }

    fn map(self, f: impl Fn((bool, bool)) -> (bool, bool)) -> Self {
        AlignedTail { start: self.start, kinds: self.kinds.into_iter().map(f).collect() }
    }

    fn combine(parts: Vec<AlignedTail>, union: bool) -> Self {
        let start = parts.iter().map(|p| p.start).max().unwrap_or(1);
        let len = parts.iter().fold(1usize, |acc, p| num_integer::lcm(acc, p.kinds.len()));
        let kinds = (0..len as u64)
            .map(|j| {
                let n = start + j;
                parts.iter().fold((!union, !union), |acc, p| {
                    let k = p.kind(n);
                    if union {
                        (acc.0 || k.0, acc.1 || k.1)
                    } else {
                        (acc.0 && k.0, acc.1 && k.1)
                    }
                })
            })
            .collect();
        AlignedTail { start, kinds }
    }

    /// `{n ≥ start : kind(n) satisfies f}` as a union of residue classes.
    fn residues(&self, from: u64, f: impl Fn((bool, bool)) -> bool) -> Result<SymbolicSet> {
        let len = self.kinds.len() as u64;
        let mut parts = Vec::new();
        for j in 0..len {
            let n = from + j;
            if f(self.kind(n)) {
                parts.push(SymbolicSet::residue(len, n % len)?);
            }
        }
        if parts.is_empty() {
            return Ok(SymbolicSet::empty());
        }
        let tail = SymbolicSet::union(parts);
        Ok(if from <= 1 { tail } else { SymbolicSet::intersection(vec![tail, prefix_set(from - 1)?.complement()]) })
    }
}

fn prefix_set(n: u64) -> Result<SymbolicSet> {
    if n == 0 {
        return Ok(SymbolicSet::empty());
    }
    SymbolicSet::intervals(Generator::Explicit(vec![(Nat::one(), nat(n))]))
}

/// Recognises sets built from interval families whose endpoints are the
/// scheme's own block endpoints.
pub fn aligned_tail(scheme: &BlockScheme, d: &SymbolicSet) -> Result<Option<AlignedTail>> {
    if let Some(p) = d.periodic_form() {
        let m = p.members_per_period();
        if m == 0 || m == p.period {
            return Ok(Some(AlignedTail::constant(scheme, &p.threshold, m != 0)?));
        }
        return Ok(None);
    }
    Ok(match d {
        SymbolicSet::Intervals(f) => match f.generator() {
            Generator::Alternating(s) if s == scheme => {
                // [a_{2m}, a_{2m+1}]: even blocks lie inside, odd blocks only touch at a_n
                Some(AlignedTail { start: 2, kinds: vec![(true, true), (true, false)] })
            }
            Generator::Blocks { scheme: s, prefix, cycle } if s == scheme => {
                let len = cycle.len();
                Some(AlignedTail {
                    start: prefix.len() as u64 + 1,
                    kinds: (0..len).map(|j| (cycle[j], cycle[(j + 1) % len])).collect(),
                })
            }
            _ => None,
        },
        SymbolicSet::Complement(c) => aligned_tail(scheme, c)?.map(|t| t.map(|(a, b)| (!a, !b))),
        SymbolicSet::Union(cs) | SymbolicSet::Intersection(cs) => {
            let mut parts = Vec::new();
            for c in cs {
                match aligned_tail(scheme, c)? {
                    Some(t) => parts.push(t),
                    None => return Ok(None),
                }
            }
            Some(AlignedTail::combine(parts, matches!(d, SymbolicSet::Union(_))))
        }
        _ => None,
    })
}

fn block_len(scheme: &BlockScheme, n: u64) -> Result<Option<Nat>> {
    Ok(match (scheme.a(n)?, scheme.a(n + 1)?) {
        (Bound::Fin(a), Bound::Fin(b)) => Some(b - a),
        _ => None,
    })
}

/// Level set of the lacunary means against an aligned set. Past block `n*`,
/// where `L_n δ > 1` and `L_n (1 − δ) > 1`, membership depends only on the kind.
fn lacunary_aligned(scheme: &BlockScheme, d: &SymbolicSet, tail: &AlignedTail, delta: &Q) -> Result<Option<LevelSet>> {
    let mu = Submeasure::Lacunary(scheme.clone());
    let mut early = Vec::new();
    let mut n = 1;
    loop {
        if n > MAX_EARLY_BLOCKS {
            return Ok(None);
        }
        let Some(len) = block_len(scheme, n)? else { return Ok(None) };
        let len = Q::from_integer(len.into());
        let settled =
            n >= tail.start && &len * delta > Q::one() && (delta >= &Q::one() || &len * (Q::one() - delta) > Q::one());
        if settled {
            break;
        }
        if mu.eval_full(n, d)? >= *delta {
            early.push(n);
        }
        n += 1;
    }
    let below_one = delta < &Q::one();
    let rest = tail.residues(n, |(a, b)| (a && b) || (b && below_one))?;
    let set = SymbolicSet::union(vec![SymbolicSet::finite(early)?, rest]);
    Ok(Some(LevelSet::exact(
        set,
        format!("block kinds repeat with period {} from block {}", tail.kinds.len(), tail.start),
    )))
}

/// Profile of `L_δ` from bounds on `limsup μ_n(D)` and `liminf μ_n(D)`.
fn from_bounds(limsup: &Bounds, liminf: &Bounds, delta: &Q, dilation: bool) -> SetProfile {
    let mut p = SetProfile::unknown();
    if limsup.hi < *delta {
        p.finite = Some(true);
        p.basis.push(format!("limsup ≤ {} < δ", fmt_q(&limsup.hi)));
    }
    if liminf.lo > *delta {
        p.cofinite = Some(true);
        p.basis.push(format!("liminf ≥ {} > δ", fmt_q(&liminf.lo)));
    }
    if limsup.lo > *delta {
        p.finite = Some(false);
        p.basis.push(format!("limsup ≥ {} > δ", fmt_q(&limsup.lo)));
        if dilation {
            // λ_n ≥ u' at n forces λ_k ≥ δ on [n, (u'/δ) n]
            let u = (&limsup.lo + delta) / q(2, 1);
            p.dilation = Some(u / delta);
        }
    }
    if liminf.hi < *delta {
        p.cofinite = Some(false);
    }
    p.settle();
    p
}

fn uniform_level_set(d: &SymbolicSet, delta: &Q) -> Result<LevelSet> {
    if let Some(per) = d.periodic_form() {
        if let Some(set) = periodic_level_set(d, &per, delta)? {
            return Ok(LevelSet::exact(set, "eventually periodic set, exceptions listed exactly"));
        }
    }
    if delta == &Q::one() {
        // λ_n = 1 exactly on [1, min Dᶜ − 1]
        let runs = d.runs(1 << 20)?;
        match runs.first() {
            Some((1, r)) if *r < (1 << 20) => {
                return Ok(LevelSet::exact(prefix_set(*r)?, "λ_n = 1 before the first gap"))
            }
            Some((1, _)) => {}
            _ => return Ok(LevelSet::exact(SymbolicSet::empty(), "1 ∉ D")),
        }
    }
    let p = profile(d);
    let lp = from_bounds(&p.upper, &p.lower, delta, true);
    Ok(LevelSet::profiled(lp, "density bounds of D"))
}

/// `L_δ = {n : μ_n(D) ≥ δ}`.
pub fn level_set(mu: &Submeasure, d: &SymbolicSet, delta: &Q) -> Result<LevelSet> {
    if !delta.is_positive() {
        return Ok(LevelSet::exact(SymbolicSet::all(), "δ ≤ 0"));
    }
    match mu {
        Submeasure::Uniform | Submeasure::Matrix(Kernel::Cesaro) => uniform_level_set(d, delta),
        Submeasure::Lacunary(s) => {
            if s.ratio_tends_to_zero() {
                if let Some(tail) = aligned_tail(s, d)? {
                    if let Some(l) = lacunary_aligned(s, d, &tail, delta)? {
                        return Ok(l);
                    }
                }
            }
            if let (BlockScheme::Factorial, Some(per)) = (s, d.periodic_form()) {
                // P | n! and P | n·n! once n ≥ P, so each later block holds exactly ρ L_n members
                let t_block = if per.threshold.is_zero() { 1 } else { s.block_of(&per.threshold)? + 1 };
                let n1 = t_block.max(per.period);
                if n1 <= 64 {
                    let rho = Q::new(per.members_per_period().into(), per.period.into());
                    let early = scan_level_set(n1 - 1, delta, |n| mu.eval_full(n, d))?;
                    let mut parts = vec![SymbolicSet::finite(early)?];
                    if rho >= *delta {
                        parts.push(prefix_set(n1 - 1)?.complement());
                    }
                    return Ok(LevelSet::exact(
                        SymbolicSet::union(parts),
                        format!("μ_n = {} exactly for n ≥ {n1}", fmt_q(&rho)),
                    ));
                }
            }
            let p = profile(d);
            let (sup, inf) = if s.ratio_tends_to_zero() {
                (Bounds::new(Q::zero(), p.upper.hi.clone()), Bounds::new(p.lower.lo.clone(), Q::one()))
            } else {
                (Bounds::unknown(), Bounds::unknown())
            };
            Ok(LevelSet::profiled(from_bounds(&sup, &inf, delta, false), "block means against density bounds"))
        }
        Submeasure::UpperDensity => {
            let b = upper_density_bounds(d)?;
            if b.lo >= *delta {
                Ok(LevelSet::exact(SymbolicSet::all(), format!("μ_n = d*(D) ≥ {} for every n", fmt_q(&b.lo))))
            } else if b.hi < *delta {
                Ok(LevelSet::exact(SymbolicSet::empty(), format!("μ_n = d*(D) ≤ {} for every n", fmt_q(&b.hi))))
            } else {
                Ok(LevelSet::profiled(SetProfile::unknown(), "d*(D) not pinned relative to δ"))
            }
        }
        Submeasure::Matrix(Kernel::Decaying) => match inverse_floor(delta).filter(|m| *m <= SCAN_LIMIT) {
            Some(m) => {
                let hits = scan_level_set(m, delta, |n| mu.eval_full(n, d))?;
                Ok(LevelSet::exact(SymbolicSet::finite(hits)?, format!("μ_n ≤ 1/n, so only n ≤ {m} can qualify")))
            }
            None => Ok(LevelSet::profiled(SetProfile::finite_set("μ_n ≤ 1/n"), "μ_n ≤ 1/n")),
        },
        Submeasure::Matrix(Kernel::Rows(rows)) => {
            let hits = scan_level_set(rows.len() as u64, delta, |n| mu.eval_full(n, d))?;
            Ok(LevelSet::exact(SymbolicSet::finite(hits)?, "rows beyond the list vanish"))
        }
        Submeasure::Matrix(k @ Kernel::UniformPrefix { .. }) => prefix_level_set(k, d, delta),
        Submeasure::Masked { inner, on } => {
            let li = level_set(inner, d, delta)?;
            Ok(match li.exact {
                Some(s) => LevelSet::exact(
                    SymbolicSet::intersection(vec![s, on.clone()]),
                    format!("{} restricted to the mask", li.basis),
                ),
                None => LevelSet::profiled(intersect_profiles(&[li.profile, profile(on)]), li.basis),
            })
        }
        Submeasure::Zero => Ok(LevelSet::exact(SymbolicSet::empty(), "μ = 0")),
    }
}

/// `μ_n = λ_{ι_n}`, so `L_δ` is the preimage of the uniform level set under `ι`.
fn prefix_level_set(k: &Kernel, d: &SymbolicSet, delta: &Q) -> Result<LevelSet> {
    let lu = uniform_level_set(d, delta)?;
    let preimage = |targets: &[Nat]| -> Result<Option<Vec<u64>>> {
        let top = targets.last().cloned().unwrap_or_default();
        let mut out = Vec::new();
        let mut n = 1;
        loop {
            let i = k.iota(n).expect("prefix kernel");
            if i > top {
                return Ok(Some(out));
            }
            if n > SCAN_LIMIT {
                return Ok(None);
            }
            if targets.binary_search(&i).is_ok() {
                out.push(n);
            }
            n += 1;
        }
    };
    if let Some(exact) = &lu.exact {
        let (inner, complemented) = match exact {
            SymbolicSet::Complement(c) => (c.as_ref(), true),
            other => (other, false),
        };
        if let Some(list) = inner.finite_elements() {
            if let Some(idx) = preimage(&list)? {
                let f = SymbolicSet::finite(idx)?;
                return Ok(LevelSet::exact(if complemented { f.complement() } else { f }, "preimage under ι"));
            }
        }
    }
    let mut p = SetProfile::with("preimage under ι of the uniform level set");
    p.finite = lu.profile.finite;
    p.cofinite = lu.profile.cofinite;
    if let Some(c) = &lu.profile.dilation {
        // ι_n ∈ [m, cm] on an index window of ratio ≈ c^{1/β} ≥ c
        p.dilation = Some((c + Q::one()) / q(2, 1));
    }
    p.settle();
    Ok(LevelSet::profiled(p, "preimage under ι"))
}

fn upper_density_bounds(d: &SymbolicSet) -> Result<Bounds> {
    let r = upper_density(d, 1000)?;
    Ok(match r.exact().filter(|_| r.is_certified()) {
        Some(v) => Bounds::exact(v.clone()),
        None => Bounds::new(r.lower_bound.0, r.upper_bound.0),
    })
}

/// Bounds on `limsup_n μ_n(D)`.
pub fn limsup_bounds(mu: &Submeasure, d: &SymbolicSet) -> Result<Bounds> {
    Ok(match mu {
        Submeasure::Uniform | Submeasure::UpperDensity => upper_density_bounds(d)?,
        Submeasure::Matrix(Kernel::Cesaro) | Submeasure::Matrix(Kernel::UniformPrefix { .. }) => {
            upper_density_bounds(d)?
        }
        Submeasure::Lacunary(s) => {
            if !s.ratio_tends_to_zero() {
                Bounds::unknown()
            } else if let Some(t) = aligned_tail(s, d)? {
                Bounds::exact(if t.kinds.iter().any(|k| k.1) { Q::one() } else { Q::zero() })
            } else {
                let p = profile(d);
                Bounds::new(p.lower.lo.clone(), p.upper.hi.clone())
            }
        }
        Submeasure::Matrix(Kernel::Decaying) | Submeasure::Matrix(Kernel::Rows(_)) | Submeasure::Zero => {
            Bounds::exact(Q::zero())
        }
        Submeasure::Masked { inner, on } => {
            if profile(on).finite == Some(true) {
                Bounds::exact(Q::zero())
            } else {
                let b = limsup_bounds(inner, d)?;
                Bounds::new(Q::zero(), b.hi)
            }
        }
    })
}

/// How `L_δ` behaves as `δ → 0⁺`.
pub fn small_delta(mu: &Submeasure, d: &SymbolicSet) -> Result<SmallDelta> {
    Ok(match mu {
        Submeasure::Uniform | Submeasure::Matrix(Kernel::Cesaro) | Submeasure::Matrix(Kernel::UniformPrefix { .. }) => {
            let p = profile(d);
            if p.upper.hi.is_zero() {
                SmallDelta::Vanishing
            } else if p.lower.lo.is_positive() {
                SmallDelta::Eventually(SymbolicSet::all())
            } else {
                SmallDelta::Unknown
            }
        }
        Submeasure::Lacunary(s) => {
            if !s.ratio_tends_to_zero() {
                SmallDelta::Unknown
            } else if let Some(t) = aligned_tail(s, d)? {
                let rest = t.residues(t.start, |(_, b)| b)?;
                if rest.is_empty_literal() {
                    SmallDelta::Vanishing
                } else {
                    SmallDelta::Eventually(rest)
                }
            } else {
                let p = profile(d);
                if p.upper.hi.is_zero() {
                    SmallDelta::Vanishing
                } else if p.lower.lo.is_positive() {
                    SmallDelta::Eventually(SymbolicSet::all())
                } else {
                    SmallDelta::Unknown
                }
            }
        }
        Submeasure::UpperDensity => {
            let b = upper_density_bounds(d)?;
            if b.hi.is_zero() {
                SmallDelta::Vanishing
            } else if b.lo.is_positive() {
                SmallDelta::Eventually(SymbolicSet::all())
            } else {
                SmallDelta::Unknown
            }
        }
        Submeasure::Matrix(Kernel::Decaying) | Submeasure::Matrix(Kernel::Rows(_)) | Submeasure::Zero => {
            SmallDelta::Vanishing
        }
        Submeasure::Masked { inner, on } => match small_delta(inner, d)? {
            SmallDelta::Vanishing => SmallDelta::Vanishing,
            SmallDelta::Eventually(s) => SmallDelta::Eventually(SymbolicSet::intersection(vec![s, on.clone()])),
            SmallDelta::Unknown => SmallDelta::Unknown,
        },
    })
}

/// A threshold at which `L_δ` is certified infinite, when one is known.
pub fn probe_delta(mu: &Submeasure, d: &SymbolicSet) -> Result<Option<Q>> {
    let b = limsup_bounds(mu, d)?;
    Ok(b.lo.is_positive().then(|| b.lo / q(2, 1)).filter(|x| x.to_f64().is_some()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn members(l: &LevelSet, h: u64) -> Vec<u64> {
        let s = l.exact.as_ref().expect("exact level set");
        (1..=h).filter(|n| s.contains_u64(*n).unwrap()).collect()
    }

    fn brute(mu: &Submeasure, d: &SymbolicSet, delta: &Q, h: u64) -> Vec<u64> {
        (1..=h).filter(|n| mu.eval_full(*n, d).unwrap() >= *delta).collect()
    }

    #[test]
    fn lacunary_alternating() {
        let mu = Submeasure::Lacunary(BlockScheme::Factorial);
        let a = SymbolicSet::factorial_set();
        for (set, delta) in
            [(a.clone(), q(1, 2)), (a.clone().complement(), q(1, 2)), (a.clone(), q(1, 100)), (a.clone(), Q::one())]
        {
            let l = level_set(&mu, &set, &delta).unwrap();
            assert_eq!(members(&l, 14), brute(&mu, &set, &delta, 14), "{} at {}", set.describe(), delta);
        }
        assert!(matches!(small_delta(&mu, &a).unwrap(), SmallDelta::Eventually(_)));
        assert_eq!(limsup_bounds(&mu, &a).unwrap(), Bounds::exact(Q::one()));
    }

    #[test]
    fn lacunary_periodic_factorial() {
        let mu = Submeasure::Lacunary(BlockScheme::Factorial);
        let d = SymbolicSet::residue(3, 1).unwrap();
        for delta in [q(1, 3), q(1, 2), q(1, 4)] {
            let l = level_set(&mu, &d, &delta).unwrap();
            assert_eq!(members(&l, 12), brute(&mu, &d, &delta, 12));
        }
    }

    #[test]
    fn upper_density_example() {
        let l = level_set(&Submeasure::UpperDensity, &SymbolicSet::factorial_set(), &q(1, 2)).unwrap();
        assert_eq!(l.describe(), "N");
    }

    #[test]
    fn uniform_factorial_profiles() {
        let a = SymbolicSet::factorial_set();
        let l = level_set(&Submeasure::Uniform, &a, &q(1, 2)).unwrap();
        assert_eq!(l.profile.finite, Some(false));
        assert!(l.profile.upper.lo.is_positive());
        assert!(matches!(small_delta(&Submeasure::Uniform, &SymbolicSet::squares()).unwrap(), SmallDelta::Vanishing));
    }

    #[test]
    fn matrix_level_sets() {
        let d = SymbolicSet::residue(2, 0).unwrap();
        let mu = Submeasure::Matrix(Kernel::Decaying);
        let l = level_set(&mu, &d, &q(1, 20)).unwrap();
        assert_eq!(members(&l, 100), brute(&mu, &d, &q(1, 20), 100));
        let pre = Submeasure::Matrix(Kernel::UniformPrefix { b: q(1, 1), beta: q(1, 2) });
        let f = SymbolicSet::finite([1, 2, 3]).unwrap();
        let l = level_set(&pre, &f, &q(1, 2)).unwrap();
        assert_eq!(members(&l, 100), brute(&pre, &f, &q(1, 2), 100));
        let masked = Submeasure::masked(Submeasure::Uniform, SymbolicSet::residue(2, 1).unwrap());
        let l = level_set(&masked, &d, &q(1, 2)).unwrap();
        assert_eq!(members(&l, 100), brute(&masked, &d, &q(1, 2), 100));
    }
}
