//! Exact crossing analysis for `L = {n : λ_n(D) ≥ δ}`.
//!
//! Between membership changes of `D` the running mean is monotone: on a run
//! of members it is nondecreasing, on a gap it is decreasing. Each run or gap
//! therefore meets `L` in a single interval whose endpoint solves a linear
//! inequality in `n`.

use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::num::Q;
use crate::sets::{Generator, Periodic, SymbolicSet};

/// Largest index scanned element by element when listing exceptional indices.
pub const SCAN_LIMIT: u64 = 10_000_000;

/// `δ = p/q` as a pair of machine integers, for the run solver.
fn small_ratio(delta: &Q) -> Result<(u128, u128)> {
    let p = delta.numer().to_u64().filter(|_| !delta.is_negative());
    let q = delta.denom().to_u64();
    match (p, q) {
        (Some(p), Some(q)) if p < (1 << 60) && q < (1 << 60) => Ok((p as u128, q as u128)),
        _ => Err(Error::Precondition("threshold must be a nonnegative rational with small terms".into())),
    }
}

/// Maximal runs of `{n ≤ h : λ_n(D) ≥ δ}`.
pub fn level_set_runs(d: &SymbolicSet, delta: &Q, h: u64) -> Result<Vec<(u64, u64)>> {
    if h == 0 {
        return Ok(Vec::new());
    }
    if !delta.is_positive() {
        return Ok(vec![(1, h)]);
    }
    let (p, q) = small_ratio(delta)?;
    let mut out: Vec<(u64, u64)> = Vec::new();
    let mut push = |lo: u64, hi: u64| {
        if lo > hi {
            return;
        }
        match out.last_mut() {
            Some(last) if last.1 + 1 >= lo => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    };
    let mut count: u128 = 0;
    let mut next: u64 = 1;
    let gap = |from: u64, to: u64, c: u128, push: &mut dyn FnMut(u64, u64)| {
        // C/n ≥ p/q  ⇔  n ≤ qC/p
        if from > to {
            return;
        }
        let top = (q * c / p).min(to as u128) as u64;
        push(from, top);
    };
    for (l, r) in d.runs(h)? {
        gap(next, l - 1, count, &mut push);
        // (C0 + n − l + 1)/n ≥ p/q  ⇔  (q − p) n ≥ q (l − 1 − C0)
        let missing = (l as u128 - 1) - count;
        if p < q {
            let need = (q * missing).div_ceil(q - p);
            let lo = need.max(l as u128);
            if lo <= r as u128 {
                push(lo as u64, r);
            }
        } else if p == q && missing == 0 {
            push(l, r);
        }
        count += (r - l + 1) as u128;
        next = r + 1;
    }
    gap(next, h, count, &mut push);
    Ok(out)
}

/// Number of indices in a run list.
pub fn runs_len(runs: &[(u64, u64)]) -> u64 {
    runs.iter().map(|(l, r)| r - l + 1).sum()
}

/// Materialises `{n : λ_n(D) ≥ δ}` exactly for an eventually periodic `D`,
/// provided the exceptional indices lie below [`SCAN_LIMIT`].
///
/// With `ρ` the tail density, `count(n) = ρ n + e(n)` where `e` is periodic
/// past the threshold and bounded by `E`. If `ρ ≠ δ` the answer is settled
/// for `n > E/|ρ − δ|`; if `ρ = δ` it is `e(n) ≥ 0`, a periodic condition.
pub fn periodic_level_set(d: &SymbolicSet, per: &Periodic, delta: &Q) -> Result<Option<SymbolicSet>> {
    let Some(t) = per.threshold.to_u64() else { return Ok(None) };
    let period = per.period;
    if t.saturating_add(period) > SCAN_LIMIT {
        return Ok(None);
    }
    let m = per.members_per_period() as u128;
    let pp = period as u128;
    // E·P = max |count(n)·P − m n| over one period past the threshold
    let dev = |n: u64, c: u128| -> i128 { (c * pp) as i128 - (m * n as u128) as i128 };
    let mut c = d.count_u64(t)? as u128;
    let mut e_max: u128 = 0;
    let mut tail_hits = Vec::new();
    for n in t + 1..=t + period {
        c += per.mask[(n % period) as usize] as u128;
        e_max = e_max.max(dev(n, c).unsigned_abs());
        if dev(n, c) >= 0 {
            tail_hits.push(n % period);
        }
    }
    let rho = Q::new((m as u64).into(), period.into());
    let explicit = |runs: Vec<(u64, u64)>| -> Result<SymbolicSet> {
        if runs.is_empty() {
            return Ok(SymbolicSet::empty());
        }
        SymbolicSet::intervals(Generator::Explicit(runs.into_iter().map(|(l, r)| (l.into(), r.into())).collect()))
    };
    if &rho == delta {
        // λ_n ≥ ρ is e(n) ≥ 0, periodic past the threshold
        let early = explicit(level_set_runs(d, delta, t)?)?;
        let residues: Vec<SymbolicSet> =
            tail_hits.iter().map(|r| SymbolicSet::residue(period, *r)).collect::<Result<_>>()?;
        let tail = if residues.is_empty() {
            SymbolicSet::empty()
        } else if t == 0 {
            SymbolicSet::union(residues)
        } else {
            SymbolicSet::intersection(vec![
                SymbolicSet::union(residues),
                SymbolicSet::intervals(Generator::Explicit(vec![(1u32.into(), t.into())]))?.complement(),
            ])
        };
        return Ok(Some(SymbolicSet::union(vec![early, tail])));
    }
    let gap = (&rho - delta).abs();
    // n > E/|ρ − δ| settles the comparison
    let bound = Q::new((e_max as u64).into(), period.into()) / gap;
    let n0 = bound.floor().to_integer().to_u64().unwrap_or(u64::MAX).max(t + period);
    if n0 > SCAN_LIMIT {
        return Ok(None);
    }
    let inside = level_set_runs(d, delta, n0)?;
    if rho > *delta {
        let mut gaps = Vec::new();
        let mut next = 1;
        for (l, r) in inside {
            if l > next {
                gaps.push((next, l - 1));
            }
            next = r + 1;
        }
        if next <= n0 {
            gaps.push((next, n0));
        }
        Ok(Some(explicit(gaps)?.complement()))
    } else {
        Ok(Some(explicit(inside)?))
    }
}

/// `{n ≤ h : f(n) ≥ δ}` by direct evaluation.
pub fn scan_level_set(h: u64, delta: &Q, mut f: impl FnMut(u64) -> Result<Q>) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for n in 1..=h {
        if f(n)? >= *delta {
            out.push(n);
        }
    }
    Ok(out)
}

/// `1/δ` rounded down, the largest `n` with `1/n ≥ δ`.
pub fn inverse_floor(delta: &Q) -> Option<u64> {
    if !delta.is_positive() {
        return None;
    }
    (Q::one() / delta).floor().to_integer().to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::q;
    use proptest::prelude::*;

    fn brute(d: &SymbolicSet, delta: &Q, h: u64) -> Vec<u64> {
        let mut c = 0u64;
        let mut out = Vec::new();
        for n in 1..=h {
            c += d.contains_u64(n).unwrap() as u64;
            if Q::new(c.into(), n.into()) >= *delta {
                out.push(n);
            }
        }
        out
    }

    fn expand(runs: &[(u64, u64)]) -> Vec<u64> {
        runs.iter().flat_map(|(l, r)| *l..=*r).collect()
    }

    #[test]
    fn factorial_runs() {
        let a = SymbolicSet::factorial_set();
        let d = q(1, 2);
        assert_eq!(expand(&level_set_runs(&a, &d, 2000).unwrap()), brute(&a, &d, 2000));
    }

    #[test]
    fn periodic_sets() {
        let cases = [
            (SymbolicSet::residue(2, 0).unwrap(), q(1, 2)),
            (SymbolicSet::residue(2, 1).unwrap(), q(1, 2)),
            (SymbolicSet::residue(3, 1).unwrap(), q(1, 4)),
            (SymbolicSet::residue(3, 2).unwrap(), q(1, 2)),
            (
                SymbolicSet::union(vec![SymbolicSet::residue(4, 1).unwrap(), SymbolicSet::finite([2, 6]).unwrap()]),
                q(1, 4),
            ),
            (SymbolicSet::finite([1, 2, 3]).unwrap(), q(1, 10)),
            (SymbolicSet::finite([1, 2, 3]).unwrap().complement(), q(9, 10)),
        ];
        for (d, delta) in cases {
            let per = d.periodic_form().unwrap();
            let l = periodic_level_set(&d, &per, &delta).unwrap().unwrap();
            let got: Vec<u64> = (1..=500).filter(|n| l.contains_u64(*n).unwrap()).collect();
            assert_eq!(got, brute(&d, &delta, 500), "{} at {}", d.describe(), delta);
        }
    }

    proptest! {
        #[test]
        fn runs_match_brute_force(res in 0u64..5, modulus in 1u64..6, p in 1i64..10, qq in 1i64..10, extra in proptest::collection::vec(1u64..300, 0..6)) {
            let d = SymbolicSet::union(vec![
                SymbolicSet::residue(modulus, res % modulus).unwrap(),
                SymbolicSet::finite(extra).unwrap(),
                SymbolicSet::factorial_set(),
            ]);
            let delta = q(p.min(qq), qq);
            prop_assert_eq!(expand(&level_set_runs(&d, &delta, 400).unwrap()), brute(&d, &delta, 400));
        }
    }
}
