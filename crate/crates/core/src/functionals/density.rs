//! Uniform densities `λ_n(A) = |A ∩ [1, n]| / n`, upper density, and
//! harmonic sums.

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::profile::{profile, Bounds, SetProfile};
use crate::error::{Error, Result};
use crate::num::{fmt_q, nat, q_frac, Nat, NatJson, QJson, Q};
use crate::sets::{Bound, SymbolicSet};
use crate::verdict::Verdict;

/// Largest horizon for which running maxima are computed from exact runs.
const EXACT_RUN_LIMIT: u64 = 1 << 21;
/// Intervals per family inspected when building witness subsequences.
const WITNESS_INTERVALS: usize = 8;
/// Endpoints beyond this many bits are skipped when sampling witnesses.
const WITNESS_BITS: u64 = 1 << 16;

pub fn uniform_eval(a: &SymbolicSet, n: &Nat) -> Result<Q> {
    if n.is_zero() {
        return Err(Error::Precondition("λ_n needs n ≥ 1".into()));
    }
    Ok(q_frac(&a.count(n)?, n))
}

pub fn uniform_eval_u64(a: &SymbolicSet, n: u64) -> Result<Q> {
    uniform_eval(a, &nat(n))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessPoint {
    pub n: NatJson,
    pub lambda: QJson,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DensityCertificate {
    ClosedForm { period: u64, members: u64, threshold: NatJson },
    LimsupAlongWitness { basis: Vec<String>, witness: Vec<WitnessPoint> },
    Structural { basis: Vec<String> },
    HorizonEstimate { horizon: u64, value_at_horizon: QJson, running_max: QJson },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityResult {
    pub value: Option<QJson>,
    pub lower_bound: QJson,
    pub upper_bound: QJson,
    pub certificate: DensityCertificate,
}

impl DensityResult {
    pub fn is_certified(&self) -> bool {
        self.value.is_some() && !matches!(self.certificate, DensityCertificate::HorizonEstimate { .. })
    }

    pub fn exact(&self) -> Option<&Q> {
        self.value.as_ref().map(|v| &v.0)
    }
}

/// `d*(A) = limsup λ_n(A)`.
///
/// Eventually periodic sets get a closed form. Sets whose profile pins the
/// value exactly get a structural certificate, with a witness subsequence
/// sampled at interval endpoints when the set is built from interval
/// families. Anything else falls back to an estimate at `horizon`.
pub fn upper_density(a: &SymbolicSet, horizon: u64) -> Result<DensityResult> {
    if let Some(p) = a.periodic_form() {
        let m = p.members_per_period();
        let v = Q::new(m.into(), p.period.into());
        return Ok(DensityResult {
            value: Some(QJson(v.clone())),
            lower_bound: QJson(v.clone()),
            upper_bound: QJson(v),
            certificate: DensityCertificate::ClosedForm {
                period: p.period,
                members: m,
                threshold: NatJson(p.threshold),
            },
        });
    }
    let prof = profile(a);
    from_profile(a, &prof.upper, &prof, horizon)
}

fn from_profile(a: &SymbolicSet, b: &Bounds, prof: &SetProfile, horizon: u64) -> Result<DensityResult> {
    if let Some(v) = b.value() {
        let witness = witness_points(a)?;
        let certificate = if witness.is_empty() {
            DensityCertificate::Structural { basis: prof.basis.clone() }
        } else {
            DensityCertificate::LimsupAlongWitness { basis: prof.basis.clone(), witness }
        };
        return Ok(DensityResult {
            value: Some(QJson(v.clone())),
            lower_bound: QJson(v.clone()),
            upper_bound: QJson(v.clone()),
            certificate,
        });
    }
    let h = horizon.max(1);
    let (running_max, _) = running_max(a, h)?;
    Ok(DensityResult {
        value: None,
        lower_bound: QJson(b.lo.clone()),
        upper_bound: QJson(b.hi.clone()),
        certificate: DensityCertificate::HorizonEstimate {
            horizon: h,
            value_at_horizon: QJson(uniform_eval_u64(a, h)?),
            running_max: QJson(running_max),
        },
    })
}

/// Endpoints of the first few intervals of every interval family in `a`.
pub fn family_endpoints(a: &SymbolicSet) -> Result<Vec<(Nat, Nat)>> {
    let mut out = Vec::new();
    collect_endpoints(a, &mut out)?;
    out.sort();
    out.dedup();
    Ok(out)
}

fn collect_endpoints(a: &SymbolicSet, out: &mut Vec<(Nat, Nat)>) -> Result<()> {
    match a {
        SymbolicSet::Intervals(f) => {
            for (l, r) in f.first_intervals(WITNESS_INTERVALS)? {
                if let Bound::Fin(r) = r {
                    if r.bits() <= WITNESS_BITS {
                        out.push((l, r));
                    }
                }
            }
        }
        SymbolicSet::Complement(c) => collect_endpoints(c, out)?,
        SymbolicSet::Union(cs) | SymbolicSet::Intersection(cs) => {
            for c in cs {
                collect_endpoints(c, out)?;
            }
        }
        _ => {}
    }
    Ok(())
}

/// For each family interval `[l, r]`, the better of `λ_r` and `λ_{l−1}`.
/// On a set built from long intervals these points realise the limsup.
pub fn witness_points(a: &SymbolicSet) -> Result<Vec<WitnessPoint>> {
    let mut out = Vec::new();
    for (l, r) in family_endpoints(a)? {
        let mut best: Option<(Nat, Q)> = None;
        let mut cands = vec![r.clone()];
        if l > Nat::one() {
            cands.push(&l - 1u32);
        }
        for n in cands {
            let v = uniform_eval(a, &n)?;
            if best.as_ref().is_none_or(|(_, b)| v > *b) {
                best = Some((n, v));
            }
        }
        if let Some((n, v)) = best {
            out.push(WitnessPoint { n: NatJson(n), lambda: QJson(v) });
        }
    }
    Ok(out)
}

/// `max_{n ≤ h} λ_n(A)` and a maximiser. Exact from runs when `h` is
/// moderate (within a run `λ` is nondecreasing, so run ends suffice);
/// otherwise sampled on a geometric grid plus family endpoints.
pub fn running_max(a: &SymbolicSet, h: u64) -> Result<(Q, u64)> {
    let mut pts: Vec<u64> = Vec::new();
    if h <= EXACT_RUN_LIMIT {
        pts.extend(a.runs(h)?.into_iter().map(|(_, r)| r));
    } else {
        pts.extend(geometric_grid(h, 11, 10));
        for (l, r) in family_endpoints(a)? {
            for x in [l.to_u64(), r.to_u64()].into_iter().flatten() {
                if (1..=h).contains(&x) {
                    pts.push(x);
                }
            }
        }
    }
    pts.push(h);
    let mut best = (Q::zero(), 1);
    for n in pts {
        let v = uniform_eval_u64(a, n)?;
        if v > best.0 {
            best = (v, n);
        }
    }
    Ok(best)
}

/// Points `1, 2, …` growing by ratio `num/den` (at least by 1) up to `h`.
pub fn geometric_grid(h: u64, num: u64, den: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut x: u64 = 1;
    while x <= h {
        out.push(x);
        let next = (x as u128 * num as u128 / den as u128) as u64;
        x = next.max(x + 1);
    }
    out
}

/// `Σ_{k=l}^{r} 1/k` as an exact fraction by binary splitting.
fn harmonic_range(l: u64, r: u64) -> (Nat, Nat) {
    if l == r {
        return (Nat::one(), nat(l));
    }
    if r - l < 16 {
        let mut num = Nat::zero();
        let mut den = Nat::one();
        for k in l..=r {
            num = num * k + &den;
            den *= k;
        }
        return (num, den);
    }
    let m = l + (r - l) / 2;
    let (a, b) = harmonic_range(l, m);
    let (c, d) = harmonic_range(m + 1, r);
    (a * &d + c * &b, b * d)
}

/// `Σ_{a ∈ A, a ≤ n} 1/a`, exact.
pub fn harmonic_partial(a: &SymbolicSet, n: u64) -> Result<Q> {
    let mut acc = Q::zero();
    for (l, r) in a.runs(n)? {
        let (num, den) = harmonic_range(l, r);
        acc += q_frac(&num, &den);
    }
    Ok(acc)
}

fn harmonic_float(a: &SymbolicSet, n: u64) -> Result<f64> {
    let mut s = 0.0f64;
    for (l, r) in a.runs(n)? {
        if r - l > 1000 {
            // ln((r + 1/2)/(l − 1/2)) is within 1/(24 l²) of the block sum
            s += ((r as f64 + 0.5) / (l as f64 - 0.5)).ln();
        } else {
            for k in l..=r {
                s += 1.0 / k as f64;
            }
        }
    }
    Ok(s)
}

/// Membership of `A` in the summable ideal `{A : Σ_{a∈A} 1/a < ∞}`.
pub fn summable_verdict(a: &SymbolicSet, horizon: u64) -> Result<Verdict> {
    let prof = profile(a);
    match prof.summable {
        Some(true) => Ok(Verdict::inside(format!("Σ 1/a converges: {}", prof.basis.join("; ")))),
        Some(false) => {
            let why = if prof.upper.lo > Q::zero() {
                format!("upper density ≥ {} > 0", fmt_q(&prof.upper.lo))
            } else {
                "harmonic mass bounded below on infinitely many blocks".to_string()
            };
            Ok(Verdict::outside(format!("{why}: {}", prof.basis.join("; "))))
        }
        None => {
            let mut trace = Vec::new();
            let mut n = 10u64;
            while n <= horizon.min(EXACT_RUN_LIMIT * 8) {
                trace.push(format!("Σ_{{a ≤ {n}}} 1/a ≈ {:.6}", harmonic_float(a, n)?));
                n = n.saturating_mul(10);
            }
            Ok(Verdict::Undecided { horizon, trace })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::q;

    #[test]
    fn uniform_examples() {
        let evens = SymbolicSet::residue(2, 0).unwrap();
        assert_eq!(uniform_eval_u64(&evens, 10).unwrap(), q(1, 2));
        assert_eq!(uniform_eval_u64(&SymbolicSet::factorial_set(), 6).unwrap(), q(5, 6));
        assert_eq!(uniform_eval_u64(&SymbolicSet::empty(), 7).unwrap(), Q::zero());
        assert!(uniform_eval_u64(&evens, 0).is_err());
    }

    #[test]
    fn closed_forms() {
        let d = upper_density(&SymbolicSet::residue(2, 0).unwrap(), 1000).unwrap();
        assert_eq!(d.exact(), Some(&q(1, 2)));
        assert!(matches!(d.certificate, DensityCertificate::ClosedForm { .. }));
        let d = upper_density(&SymbolicSet::finite([5, 9]).unwrap(), 1000).unwrap();
        assert_eq!(d.exact(), Some(&Q::zero()));
    }

    #[test]
    fn factorial_witnesses() {
        let a = SymbolicSet::factorial_set();
        let d = upper_density(&a, 1000).unwrap();
        assert_eq!(d.exact(), Some(&Q::one()));
        let DensityCertificate::LimsupAlongWitness { witness, .. } = d.certificate else { panic!() };
        assert!(witness.len() >= 6);
        assert_eq!(witness[1].n.0, nat(120));
        let c = upper_density(&a.complement(), 1000).unwrap();
        assert_eq!(c.exact(), Some(&Q::one()));
    }

    #[test]
    fn harmonic() {
        let f = SymbolicSet::finite([1, 2, 3]).unwrap();
        assert_eq!(harmonic_partial(&f, 3).unwrap(), q(11, 6));
        let all = SymbolicSet::all();
        let mut h = Q::zero();
        for k in 1..=100 {
            h += q(1, k);
        }
        assert_eq!(harmonic_partial(&all, 100).unwrap(), h);
    }

    #[test]
    fn summability() {
        let pow2 = SymbolicSet::from_json(r#"{"kind":"intervals","gen":"pow2"}"#).unwrap();
        assert!(summable_verdict(&pow2, 1000).unwrap().is_in());
        assert!(summable_verdict(&SymbolicSet::residue(2, 0).unwrap(), 1000).unwrap().is_out());
        assert!(summable_verdict(&SymbolicSet::factorial_set(), 1000).unwrap().is_out());
    }

    #[test]
    fn running_max_matches_scan() {
        let a = SymbolicSet::factorial_set();
        let (m, _) = running_max(&a, 200).unwrap();
        let mut best = Q::zero();
        for n in 1..=200 {
            best = best.max(uniform_eval_u64(&a, n).unwrap());
        }
        assert_eq!(m, best);
    }
}
