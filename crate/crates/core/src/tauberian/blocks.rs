//! Block means of 0/1 block sequences and the running-mean picture around
//! one block triple.

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::convergence::SymbolicSequence;
use crate::error::{Error, Result};
use crate::functionals::crossing::level_set_runs;
use crate::num::{fmt_q, q, q_frac, Nat, QJson, Q};
use crate::sets::{BlockScheme, Bound, Generator, SymbolicSet};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockMeanRow {
    pub n: u64,
    pub a_n: String,
    pub value: QJson,
    pub mean: QJson,
    pub deviation: QJson,
    pub bound: QJson,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockMeanReport {
    pub scheme: String,
    pub sequence: String,
    pub horizon: String,
    pub rows: Vec<BlockMeanRow>,
    pub violations: usize,
    pub pass: bool,
}

/// Values of a block-constant 0/1 sequence, block by block.
fn block_values(x: &SymbolicSequence) -> Result<(&BlockScheme, &[Q], &[Q])> {
    match x {
        SymbolicSequence::BlockConstant { scheme, prefix, cycle } => {
            if prefix.iter().chain(cycle).any(|v| !v.is_zero() && v != &Q::from_integer(1.into())) {
                return Err(Error::Precondition("block values must be 0 or 1".into()));
            }
            Ok((scheme, prefix, cycle))
        }
        _ => Err(Error::Precondition("a block-constant sequence is required".into())),
    }
}

fn value_of(prefix: &[Q], cycle: &[Q], k: u64) -> Q {
    let i = (k - 1) as usize;
    if i < prefix.len() {
        prefix[i].clone()
    } else {
        cycle[(i - prefix.len()) % cycle.len()].clone()
    }
}

/// Checks the block shape: `x` vanishes on every `A_{3n}` and agrees on
/// `A_{3n−2}` and `A_{3n−1}`.
pub fn check_shape(x: &SymbolicSequence) -> Result<()> {
    let (_, prefix, cycle) = block_values(x)?;
    // the pattern repeats with period 3·|cycle| once the prefix is used up
    let span = (prefix.len() + 3 * cycle.len() + 3) as u64;
    for k in 1..=span {
        let v = value_of(prefix, cycle, k);
        if k % 3 == 0 && !v.is_zero() {
            return Err(Error::Precondition(format!("x must vanish on block A_{k}")));
        }
        if k % 3 == 1 && v != value_of(prefix, cycle, k + 1) {
            return Err(Error::Precondition(format!("x must agree on A_{k} and A_{}", k + 1)));
        }
    }
    Ok(())
}

/// `|x_{a_n} − (1/a_n) Σ_{i ≤ a_n} x_i|` for a 0/1 block sequence.
pub fn block_deviation(scheme: &BlockScheme, prefix: &[Q], cycle: &[Q], n: u64) -> Result<(Nat, Q, Q)> {
    let mut sum = Nat::zero();
    let mut prev = Nat::zero();
    let mut a_n = Nat::zero();
    for k in 1..=n {
        let Bound::Fin(a) = scheme.a(k)? else {
            return Err(Error::GeneratorExhausted(format!("a_{k} is beyond the query limit")));
        };
        if !value_of(prefix, cycle, k).is_zero() {
            sum += &a - &prev;
        }
        prev = a.clone();
        a_n = a;
    }
    let mean = q_frac(&sum, &a_n);
    let v = value_of(prefix, cycle, n);
    let dev = (&v - &mean).abs();
    Ok((a_n, mean, dev))
}

/// Verifies `|x_{a_n} − mean_{a_n}| ≤ 2 a_{n−1}/a_n` for every `n ≥ 2` with `a_n ≤ H`.
pub fn blockmean_check(x: &SymbolicSequence, horizon: &Nat) -> Result<BlockMeanReport> {
    check_shape(x)?;
    let (scheme, prefix, cycle) = block_values(x)?;
    let mut rows = Vec::new();
    let mut n = 2u64;
    loop {
        let Bound::Fin(a) = scheme.a(n)? else { break };
        if &a > horizon {
            break;
        }
        let Bound::Fin(prev) = scheme.a(n - 1)? else { break };
        let (_, mean, dev) = block_deviation(scheme, prefix, cycle, n)?;
        let bound = q_frac(&(prev * 2u32), &a);
        rows.push(BlockMeanRow {
            n,
            a_n: a.to_string(),
            value: QJson(value_of(prefix, cycle, n)),
            ok: dev <= bound,
            mean: QJson(mean),
            deviation: QJson(dev),
            bound: QJson(bound),
        });
        n += 1;
    }
    let violations = rows.iter().filter(|r| !r.ok).count();
    Ok(BlockMeanReport {
        scheme: scheme.name().unwrap_or("explicit").into(),
        sequence: x.to_json(),
        horizon: horizon.to_string(),
        rows,
        violations,
        pass: violations == 0,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Figure1 {
    pub scheme: String,
    pub u: u64,
    pub eps: QJson,
    /// First and last index of `A_{3u−2} ∪ A_{3u−1} ∪ A_{3u}`.
    pub range: (u64, u64),
    pub series: Vec<(u64, QJson)>,
    /// Maximal runs of `{n in range : mean_n ≥ ε}`.
    pub crossing: Vec<(u64, u64)>,
}

impl Figure1 {
    /// `n,mean,mean_decimal` rows.
    pub fn csv(&self) -> String {
        let mut out = String::from("n,mean,mean_decimal\n");
        for (n, m) in &self.series {
            out.push_str(&format!("{n},{},{:.12}\n", fmt_q(&m.0), m.0.to_f64().unwrap_or(f64::NAN)));
        }
        out
    }
}

/// The 0/1 sequence equal to 1 on `A_{3k−2} ∪ A_{3k−1}` and 0 on `A_{3k}`.
pub fn figure1_set(scheme: &BlockScheme) -> Result<SymbolicSet> {
    SymbolicSet::intervals(Generator::Blocks {
        scheme: scheme.clone(),
        prefix: Vec::new(),
        cycle: vec![true, true, false],
    })
}

/// Running means of [`figure1_set`] across blocks `3u−2 … 3u`, sampled every
/// `resolution` indices, with the exact set where the mean is at least `ε`.
pub fn figure1_emit(scheme: &BlockScheme, u: u64, eps: &Q, resolution: u64) -> Result<Figure1> {
    if u == 0 || resolution == 0 {
        return Err(Error::Precondition("u and the resolution must be positive".into()));
    }
    let end = |k: u64| -> Result<u64> {
        match scheme.a(k)? {
            Bound::Fin(a) => a.to_u64().ok_or_else(|| Error::Precondition(format!("a_{k} exceeds 64 bits"))),
            Bound::Beyond => Err(Error::Precondition(format!("a_{k} is beyond the query limit"))),
        }
    };
    let lo = end(3 * u - 3)? + 1;
    let hi = end(3 * u)?;
    let d = figure1_set(scheme)?;
    let mut points: Vec<u64> = (lo..=hi).step_by(resolution as usize).collect();
    for k in 3 * u - 2..=3 * u {
        points.push(end(k)?);
    }
    points.sort_unstable();
    points.dedup();
    let mut series = Vec::with_capacity(points.len());
    for n in points {
        let c = d.count_u64(n)?;
        series.push((n, QJson(q(c as i64, n as i64))));
    }
    let crossing = if eps > &Q::from_integer(1.into()) {
        Vec::new()
    } else {
        level_set_runs(&d, eps, hi)?.into_iter().filter(|&(_, r)| r >= lo).map(|(l, r)| (l.max(lo), r)).collect()
    };
    Ok(Figure1 {
        scheme: scheme.name().unwrap_or("explicit").into(),
        u,
        eps: QJson(eps.clone()),
        range: (lo, hi),
        series,
        crossing,
    })
}
