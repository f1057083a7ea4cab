//! Membership oracles for ideals on **N**.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::functionals::density::{summable_verdict, upper_density};
use crate::functionals::levelset::{level_set, limsup_bounds, probe_delta, small_delta, LevelSet, SmallDelta};
use crate::functionals::profile::{profile, SetProfile};
use crate::functionals::submeasure::{Kernel, Submeasure};
use crate::num::{floor_scaled_power, fmt_q, nat, Q};
use crate::sets::SymbolicSet;
use crate::verdict::Verdict;

/// Fibers `ν₂ = k` examined when looking for an infinite fiber.
const FIBERS_PROBED: u32 = 8;

#[derive(Clone, Debug, PartialEq)]
pub enum Ideal {
    Fin,
    /// Sets of asymptotic density zero.
    Zeta,
    /// `{A : Σ_{a∈A} 1/a < ∞}`.
    Summable,
    /// Sets whose 2-adic fibers `{n ∈ A : ν₂(n) = k}` are all finite.
    EmptyTimesFin,
    /// `{A : limsup μ_n(A) = 0}`.
    ZMu(Submeasure),
    /// `J(I, μ) = {A : μ_n(A) →_I 0}`.
    JOf(Box<Ideal>, Submeasure),
    /// The ideal generated by `G` and the finite sets: `A \ G` finite.
    GeneratedBy(SymbolicSet),
}

/// One `δ` row of a `J(I, μ)` decision.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaEntry {
    /// A rational threshold, or `"0+"` for the small-δ limit.
    pub delta: String,
    pub level_set: String,
    pub basis: String,
    #[serde(flatten)]
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JDecision {
    pub entries: Vec<DeltaEntry>,
    #[serde(skip)]
    pub verdict: Verdict,
}

impl Ideal {
    pub fn j_of(inner: Ideal, mu: Submeasure) -> Ideal {
        Ideal::JOf(Box::new(inner), mu)
    }

    pub fn name(&self) -> String {
        match self {
            Ideal::Fin => "fin".into(),
            Ideal::Zeta => "zeta".into(),
            Ideal::Summable => "summable".into(),
            Ideal::EmptyTimesFin => "empty-times-fin".into(),
            Ideal::ZMu(mu) => format!("zmu:{}", mu.to_json()),
            Ideal::JOf(i, mu) => format!("j-of:{}:{}", i.name(), mu.to_json()),
            Ideal::GeneratedBy(g) => format!("generated-by:{}", g.to_json()),
        }
    }

    /// Parses `fin`, `zeta`, `summable`, `empty-times-fin`, `zmu:<json>`,
    /// `j-of:<ideal>:<json>` and `generated-by:<set json>`.
    pub fn parse(text: &str) -> Result<Ideal> {
        let t = text.trim();
        match t {
            "fin" => return Ok(Ideal::Fin),
            "zeta" => return Ok(Ideal::Zeta),
            "summable" => return Ok(Ideal::Summable),
            "empty-times-fin" => return Ok(Ideal::EmptyTimesFin),
            _ => {}
        }
        if let Some(rest) = t.strip_prefix("zmu:") {
            return Ok(Ideal::ZMu(Submeasure::from_json(rest)?));
        }
        if let Some(rest) = t.strip_prefix("generated-by:") {
            return Ok(Ideal::GeneratedBy(SymbolicSet::from_json(rest)?));
        }
        if let Some(rest) = t.strip_prefix("j-of:") {
            // the submeasure is the trailing JSON object; the inner ideal may itself contain ':'
            let mut depth = 0i32;
            let bytes = rest.as_bytes();
            for (i, ch) in rest.char_indices().rev() {
                match ch {
                    '}' => depth += 1,
                    '{' => {
                        depth -= 1;
                        if depth == 0 {
                            if i == 0 || bytes[i - 1] != b':' {
                                break;
                            }
                            let inner = Ideal::parse(&rest[..i - 1])?;
                            return Ok(Ideal::j_of(inner, Submeasure::from_json(&rest[i..])?));
                        }
                    }
                    _ => {}
                }
            }
            return Err(Error::Parse(format!("j-of needs `j-of:<ideal>:<submeasure json>`, got `{t}`")));
        }
        Err(Error::Parse(format!("unknown ideal `{t}`")))
    }

    /// Verdict on `A ∈ I`.
    pub fn decide(&self, a: &SymbolicSet, cfg: &RunConfig) -> Result<Verdict> {
        let direct = self.decide_direct(a, cfg)?;
        if direct.is_certified() {
            return Ok(direct);
        }
        Ok(self.closure(a, cfg)?.unwrap_or(direct))
    }

    /// Ideal axioms: finite sets are in, unions of members are in, subsets
    /// of members are in, supersets of non-members are out.
    fn closure(&self, a: &SymbolicSet, cfg: &RunConfig) -> Result<Option<Verdict>> {
        if profile(a).finite == Some(true) {
            return Ok(Some(Verdict::inside("finite set")));
        }
        match a {
            SymbolicSet::Union(cs) if !cs.is_empty() => {
                let vs: Vec<Verdict> = cs.iter().map(|c| self.decide(c, cfg)).collect::<Result<_>>()?;
                if vs.iter().all(|v| v.is_in()) {
                    return Ok(Some(Verdict::inside("finite union of members")));
                }
                if let Some(i) = vs.iter().position(|v| v.is_out()) {
                    return Ok(Some(Verdict::outside(format!("contains the non-member {}", cs[i].describe()))));
                }
            }
            SymbolicSet::Intersection(cs) => {
                for c in cs {
                    if self.decide(c, cfg)?.is_in() {
                        return Ok(Some(Verdict::inside(format!("subset of the member {}", c.describe()))));
                    }
                }
            }
            _ => {}
        }
        Ok(None)
    }

    fn decide_direct(&self, a: &SymbolicSet, cfg: &RunConfig) -> Result<Verdict> {
        let h = cfg.horizon;
        match self {
            Ideal::Fin => {
                let p = profile(a);
                Ok(match p.finite {
                    Some(true) => Verdict::inside(format!("finite: {}", p.basis.join("; "))),
                    Some(false) => Verdict::outside(format!("infinite: {}", p.basis.join("; "))),
                    None => Verdict::undecided(h, format!("|A ∩ [1, {h}]| = {}", a.count_u64(h)?)),
                })
            }
            Ideal::Zeta => {
                let d = upper_density(a, h)?;
                let lo = &d.lower_bound.0;
                let hi = &d.upper_bound.0;
                let detail = serde_json::to_string(&d.certificate).expect("certificate serializes");
                Ok(if hi.is_zero() {
                    Verdict::inside(format!("d* = 0; {detail}"))
                } else if lo.is_positive() {
                    Verdict::outside(format!("d* ≥ {}; {detail}", fmt_q(lo)))
                } else {
                    Verdict::undecided(h, format!("d* ∈ [{}, {}]; {detail}", fmt_q(lo), fmt_q(hi)))
                })
            }
            Ideal::Summable => summable_verdict(a, h),
            Ideal::EmptyTimesFin => {
                let p = profile(a);
                match p.fibers_finite {
                    Some(true) => {
                        return Ok(Verdict::inside(format!("every 2-adic fiber is finite: {}", p.basis.join("; "))))
                    }
                    Some(false) => {
                        return Ok(Verdict::outside(format!("some 2-adic fiber is infinite: {}", p.basis.join("; "))))
                    }
                    None => {}
                }
                for k in 0..FIBERS_PROBED {
                    let fiber = SymbolicSet::intersection(vec![a.clone(), SymbolicSet::Fiber2(k)]);
                    if profile(&fiber).finite == Some(false) {
                        return Ok(Verdict::outside(format!("the fiber ν₂ = {k} is infinite")));
                    }
                }
                Ok(Verdict::undecided(h, "fiber finiteness not settled structurally"))
            }
            Ideal::ZMu(mu) => {
                let b = limsup_bounds(mu, a)?;
                Ok(if b.hi.is_zero() {
                    Verdict::inside(format!("limsup μ_n(A) = 0 for μ = {}", mu.name()))
                } else if b.lo.is_positive() {
                    Verdict::outside(format!("limsup μ_n(A) ≥ {} for μ = {}", fmt_q(&b.lo), mu.name()))
                } else {
                    Verdict::undecided(h, format!("limsup μ_n(A) ∈ [{}, {}]", fmt_q(&b.lo), fmt_q(&b.hi)))
                })
            }
            Ideal::JOf(inner, mu) => Ok(decide_j(inner, mu, a, cfg)?.verdict),
            Ideal::GeneratedBy(g) => {
                let rest = SymbolicSet::intersection(vec![a.clone(), g.clone().complement()]);
                let v = Ideal::Fin.decide_direct(&rest, cfg)?;
                Ok(match v {
                    Verdict::CertifiedIn { .. } => Verdict::inside(format!("A \\ G is finite, G = {}", g.describe())),
                    Verdict::CertifiedOut { .. } => {
                        Verdict::outside(format!("A \\ G is infinite, G = {}", g.describe()))
                    }
                    u => u,
                })
            }
        }
    }

    /// Verdict from certified structure alone.
    fn decide_profile(&self, p: &SetProfile, h: u64) -> Verdict {
        if p.finite == Some(true) {
            return Verdict::inside("finite");
        }
        let yes_no = |v: Option<bool>, yes: &str, no: &str| match v {
            Some(true) => Verdict::inside(yes),
            Some(false) => Verdict::outside(no),
            None => Verdict::undecided(h, "profile does not settle membership"),
        };
        match self {
            Ideal::Fin => yes_no(p.finite, "finite", "infinite"),
            Ideal::Zeta => {
                if p.upper.hi.is_zero() {
                    Verdict::inside("density zero")
                } else if p.upper.lo.is_positive() {
                    Verdict::outside(format!("upper density ≥ {}", fmt_q(&p.upper.lo)))
                } else {
                    Verdict::undecided(h, "density not settled")
                }
            }
            Ideal::Summable => yes_no(p.summable, "reciprocals summable", "reciprocals not summable"),
            Ideal::EmptyTimesFin => yes_no(p.fibers_finite, "2-adic fibers finite", "an infinite 2-adic fiber"),
            Ideal::ZMu(Submeasure::Uniform) | Ideal::ZMu(Submeasure::Matrix(Kernel::Cesaro)) => {
                Ideal::Zeta.decide_profile(p, h)
            }
            _ if p.cofinite == Some(true) && self.is_proper_structurally() => Verdict::outside("cofinite"),
            _ => Verdict::undecided(h, "no structural rule for this ideal"),
        }
    }

    fn is_proper_structurally(&self) -> bool {
        matches!(self, Ideal::Fin | Ideal::Zeta | Ideal::Summable | Ideal::EmptyTimesFin)
    }

    /// Verdict on a level set, from its exact form when known.
    pub fn decide_level(&self, l: &LevelSet, cfg: &RunConfig) -> Result<Verdict> {
        let from_profile = self.decide_profile(&l.profile, cfg.horizon);
        if from_profile.is_certified() {
            return Ok(from_profile);
        }
        match &l.exact {
            Some(s) => self.decide(s, cfg),
            None => Ok(from_profile),
        }
    }
}

/// Decides `μ_n(A) →_I 0`, i.e. `{n : μ_n(A) ≥ δ} ∈ I` for every `δ > 0`.
///
/// The δ grid can refute. Certification needs the small-δ limit: either
/// every level set is finite, or all small level sets agree with one set
/// up to finitely many indices, which is then tested once.
pub fn decide_j(inner: &Ideal, mu: &Submeasure, a: &SymbolicSet, cfg: &RunConfig) -> Result<JDecision> {
    let mut entries = Vec::new();
    let mut deltas = cfg.deltas();
    if let Some(p) = probe_delta(mu, a)? {
        if !deltas.contains(&p) {
            deltas.insert(0, p);
        }
    }
    for delta in &deltas {
        let l = level_set(mu, a, delta)?;
        let v = inner.decide_level(&l, cfg)?;
        entries.push(DeltaEntry { delta: fmt_q(delta), level_set: l.describe(), basis: l.basis.clone(), verdict: v });
    }
    let small = match small_delta(mu, a)? {
        SmallDelta::Vanishing => DeltaEntry {
            delta: "0+".into(),
            level_set: "finite for every δ > 0".into(),
            basis: "μ_n(A) → 0".into(),
            verdict: Verdict::inside("every level set is finite"),
        },
        SmallDelta::Eventually(s) => {
            let v = inner.decide(&s, cfg)?;
            DeltaEntry {
                delta: "0+".into(),
                level_set: s.describe(),
                basis: "level sets agree up to finitely many indices for all small δ".into(),
                verdict: v,
            }
        }
        SmallDelta::Unknown => DeltaEntry {
            delta: "0+".into(),
            level_set: "unknown".into(),
            basis: "no structural description for small δ".into(),
            verdict: Verdict::undecided(cfg.horizon, "small-δ level sets not described"),
        },
    };
    entries.push(small);
    let verdict = if let Some(e) = entries.iter().find(|e| e.verdict.is_out()) {
        Verdict::outside(format!("level set at δ = {} is not in {}", e.delta, inner.name()))
    } else if entries.last().is_some_and(|e| e.verdict.is_in()) {
        Verdict::inside(format!("level sets lie in {} for every δ > 0", inner.name()))
    } else {
        Verdict::Undecided {
            horizon: cfg.horizon,
            trace: entries.iter().map(|e| format!("δ = {}: {}", e.delta, e.verdict.tag())).collect(),
        }
    };
    Ok(JDecision { entries, verdict })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Properness {
    Proper,
    Improper,
    Undecided,
}

/// `J(I, μ)` is proper iff `μ_n(N)` does not `I`-converge to 0, i.e. `N ∉ J`.
pub fn proper_check(ideal: &Ideal, cfg: &RunConfig) -> Result<(Properness, Verdict)> {
    let v = ideal.decide(&SymbolicSet::all(), cfg)?;
    let p = match &v {
        Verdict::CertifiedIn { .. } => Properness::Improper,
        Verdict::CertifiedOut { .. } => Properness::Proper,
        Verdict::Undecided { .. } => Properness::Undecided,
    };
    Ok((p, v))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntervalCheck {
    pub n: u64,
    pub end: String,
    pub contained: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThickReport {
    pub ideal: String,
    pub alpha: String,
    pub c: String,
    pub intervals: Vec<IntervalCheck>,
    pub all_contained: bool,
    pub membership: Verdict,
    /// `A` holds the intervals yet is certified in the ideal.
    pub refutes_thickness: bool,
    pub structural: Option<String>,
}

/// Checks `N ∩ [n, n + c n^α] ⊆ A` for the given `n` and reports the
/// ideal's verdict on `A`.
pub fn alpha_thick_check(
    ideal: &Ideal,
    alpha: &Q,
    c: &Q,
    a: &SymbolicSet,
    ns: &[u64],
    cfg: &RunConfig,
) -> Result<ThickReport> {
    if !alpha.is_positive() || !c.is_positive() {
        return Err(Error::Precondition("thickness needs α > 0 and c > 0".into()));
    }
    let mut intervals = Vec::new();
    for &n in ns {
        if n == 0 {
            return Err(Error::Precondition("interval starts must be ≥ 1".into()));
        }
        let start = nat(n);
        let end = &start + floor_scaled_power(c, &start, alpha);
        let contained = a.count_range(&start, &end)? == &end - &start + 1u32;
        intervals.push(IntervalCheck { n, end: end.to_string(), contained });
    }
    let all_contained = !intervals.is_empty() && intervals.iter().all(|i| i.contained);
    let membership = ideal.decide(a, cfg)?;
    let refutes_thickness = all_contained && membership.is_in();
    Ok(ThickReport {
        ideal: ideal.name(),
        alpha: fmt_q(alpha),
        c: fmt_q(c),
        intervals,
        all_contained,
        membership,
        refutes_thickness,
        structural: structural_thickness(ideal, alpha),
    })
}

/// Thickness known from the ideal's definition.
pub fn structural_thickness(ideal: &Ideal, alpha: &Q) -> Option<String> {
    match ideal {
        Ideal::Fin => Some("Fin: any set holding infinitely many nonempty intervals is infinite".into()),
        Ideal::Zeta if alpha >= &Q::one() => Some(
            "𝒵: [n, n + c n] ⊆ A gives λ_{n+cn}(A) ≥ c/(1+c) infinitely often, so d*(A) > 0 (and α-thick implies β-thick for β ≥ α)"
                .into(),
        ),
        Ideal::Summable | Ideal::EmptyTimesFin if alpha >= &Q::one() => {
            Some("contained in 𝒵, which is 1-thick; thickness passes to smaller ideals".into())
        }
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InclusionReport {
    pub smaller: String,
    pub larger: String,
    pub checked: usize,
    /// Names of corpus sets in the first ideal but certified outside the second.
    pub refutations: Vec<String>,
    pub undecided: Vec<String>,
    pub note: String,
}

/// Looks for `A ∈ I₁` with `A ∉ I₂` among the given sets.
pub fn inclusion_probe(
    i1: &Ideal,
    i2: &Ideal,
    corpus: &[(String, SymbolicSet)],
    cfg: &RunConfig,
) -> Result<InclusionReport> {
    let mut refutations = Vec::new();
    let mut undecided = Vec::new();
    for (name, a) in corpus {
        let v1 = i1.decide(a, cfg)?;
        let v2 = i2.decide(a, cfg)?;
        if v1.is_in() && v2.is_out() {
            refutations.push(name.clone());
        } else if !v1.is_certified() || !v2.is_certified() {
            undecided.push(name.clone());
        }
    }
    let note = if refutations.is_empty() {
        "no refutation found; this is evidence, not a proof of inclusion".to_string()
    } else {
        "inclusion refuted".to_string()
    };
    Ok(InclusionReport { smaller: i1.name(), larger: i2.name(), checked: corpus.len(), refutations, undecided, note })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::q;

    fn cfg() -> RunConfig {
        RunConfig::with_horizon(10_000)
    }

    fn set(json: &str) -> SymbolicSet {
        SymbolicSet::from_json(json).unwrap()
    }

    #[test]
    fn named_ideals() {
        let c = cfg();
        let fact = SymbolicSet::factorial_set();
        assert!(Ideal::Zeta.decide(&fact, &c).unwrap().is_out());
        assert!(Ideal::Summable.decide(&SymbolicSet::residue(2, 0).unwrap(), &c).unwrap().is_out());
        let pow2 = set(r#"{"kind":"intervals","gen":"pow2"}"#);
        assert!(Ideal::EmptyTimesFin.decide(&pow2, &c).unwrap().is_in());
        let odd_squares = SymbolicSet::intersection(vec![SymbolicSet::squares(), SymbolicSet::residue(2, 1).unwrap()]);
        assert!(Ideal::EmptyTimesFin.decide(&odd_squares, &c).unwrap().is_out());
        assert!(Ideal::Fin.decide(&SymbolicSet::empty(), &c).unwrap().is_in());
        assert!(Ideal::Summable.decide(&fact, &c).unwrap().is_out());
    }

    #[test]
    fn j_of_fin_uniform() {
        let c = cfg();
        let j = Ideal::j_of(Ideal::Fin, Submeasure::Uniform);
        assert!(j.decide(&SymbolicSet::squares(), &c).unwrap().is_in());
        assert!(j.decide(&SymbolicSet::factorial_set(), &c).unwrap().is_out());
    }

    #[test]
    fn properness() {
        let c = cfg();
        let (p, _) = proper_check(&Ideal::j_of(Ideal::Fin, Submeasure::Uniform), &c).unwrap();
        assert_eq!(p, Properness::Proper);
        let evens = SymbolicSet::residue(2, 0).unwrap();
        let masked = Submeasure::masked(Submeasure::Uniform, evens.clone());
        let (p, _) = proper_check(&Ideal::j_of(Ideal::GeneratedBy(evens), masked), &c).unwrap();
        assert_eq!(p, Properness::Improper);
        let (p, _) = proper_check(&Ideal::j_of(Ideal::Fin, Submeasure::Matrix(Kernel::Decaying)), &c).unwrap();
        assert_eq!(p, Properness::Improper);
    }

    #[test]
    fn parse_names() {
        for name in ["fin", "zeta", "summable", "empty-times-fin", r#"zmu:{"kind":"uniform"}"#] {
            let i = Ideal::parse(name).unwrap();
            assert_eq!(Ideal::parse(&i.name()).unwrap(), i);
        }
        let j = Ideal::parse(r#"j-of:zmu:{"kind":"uniform"}:{"kind":"lacunary","scheme":"factorial"}"#).unwrap();
        assert_eq!(
            j,
            Ideal::j_of(Ideal::ZMu(Submeasure::Uniform), Submeasure::Lacunary(crate::sets::BlockScheme::Factorial))
        );
        assert!(Ideal::parse("bogus").is_err());
    }

    #[test]
    fn thickness() {
        let c = cfg();
        let fd = set(r#"{"kind":"intervals","gen":"factorial-double"}"#);
        let ns: Vec<u64> = (3..=8).map(|m| (1..=m).product()).collect();
        let r = alpha_thick_check(&Ideal::Zeta, &Q::one(), &Q::one(), &fd, &ns, &c).unwrap();
        assert!(r.all_contained && r.membership.is_out() && !r.refutes_thickness);
        let sw = set(r#"{"kind":"intervals","gen":"sqrt-windows"}"#);
        let ns: Vec<u64> = (1..=10).map(|j| 1u64 << (2 * j)).collect();
        let r = alpha_thick_check(&Ideal::Zeta, &q(1, 2), &Q::one(), &sw, &ns, &c).unwrap();
        assert!(r.refutes_thickness);
    }
}
