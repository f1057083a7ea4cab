//! Finite-horizon checks of the Tauberian estimates.

pub mod blocks;
pub mod fridy;

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::config::RunConfig;
use crate::convergence::{ideal_limit, imu_limit, HarnessReport, SymbolicSequence};
use crate::error::{Error, Result};
use crate::functionals::submeasure::{alpha_flat_check, FlatCheck, Submeasure};
use crate::ideals::{structural_thickness, Ideal};
use crate::num::{factorial, floor_scaled_power, fmt_q, le_times_power, nat, q, QJson, Q};
use crate::sets::SymbolicSet;
pub use blocks::{block_deviation, blockmean_check, figure1_emit, BlockMeanReport, Figure1};
pub use fridy::{fridy_check, fridy_corpus, sharpness_search, FridyReport, SharpnessReport};

/// Largest window summed term by term for submeasures without a run structure.
pub const DIRECT_WINDOW: u64 = 20_000;
/// Fixed-point precision of the enclosure used for long uniform windows.
const FIXED_BITS: u32 = 64;

/// `κ = d/(1 − α)` for `α < 1` and `κ = d` for `α = 1`.
pub fn kappa(alpha: &Q, d: &Q) -> Result<Q> {
    if !alpha.is_positive() || alpha > &Q::one() {
        return Err(Error::Precondition(format!("α = {} must lie in (0, 1]", fmt_q(alpha))));
    }
    if !d.is_positive() {
        return Err(Error::Precondition("d must be positive".into()));
    }
    Ok(if alpha == &Q::one() { d.clone() } else { d / (Q::one() - alpha) })
}

/// `{2^k} ∪ {k!} ∪` run endpoints of `s` (when there are few), within `[lo, hi]`.
pub fn sample_grid(s: Option<&SymbolicSet>, lo: u64, hi: u64) -> Result<Vec<u64>> {
    let mut v: Vec<u64> = (0..64).map(|k| 1u64 << k).take_while(|&n| n <= hi).collect();
    for k in 1..=20u64 {
        match factorial(k).to_u64() {
            Some(f) if f <= hi => v.push(f),
            _ => break,
        }
    }
    if let Some(s) = s {
        let runs = s.runs(hi.min(1 << 24))?;
        if runs.len() <= 64 {
            for (l, r) in runs {
                v.extend([l, r]);
            }
        }
    }
    v.retain(|&n| n >= lo && n <= hi);
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

/// Certificate that `μ` is `α`-flat with constant `d` on `S`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Flatness {
    pub structural: Option<String>,
    pub check: Option<FlatCheck>,
}

impl Flatness {
    pub fn holds(&self) -> bool {
        self.structural.is_some() || self.check.as_ref().is_some_and(|c| c.holds())
    }
}

/// For `λ`: `|λ_{n+1}(A) − λ_n(A)| ≤ 1/(n+1) ≤ d/n^α` when `d ≥ 1`, `α ≤ 1`.
pub fn flatness(mu: &Submeasure, s: &SymbolicSet, alpha: &Q, d: &Q, upto: u64) -> Result<Flatness> {
    if matches!(mu, Submeasure::Uniform) && d >= &Q::one() && alpha <= &Q::one() {
        return Ok(Flatness { structural: Some("|λ_{n+1} − λ_n| ≤ 1/(n+1) ≤ d/n^α".into()), check: None });
    }
    Ok(Flatness { structural: None, check: Some(alpha_flat_check(mu, s, alpha, d, upto.max(2))?) })
}

/// `Σ_{m=from}^{to−1} |μ_m(S) − μ_{m+1}(S)|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Variation {
    /// Exact when `exact`, otherwise a rigorous upper bound.
    pub upper: QJson,
    pub lower: QJson,
    pub exact: bool,
    pub pieces: u64,
}

/// Membership runs of `S` with cumulative lengths, for repeated window queries.
struct CountIndex {
    runs: Vec<(u64, u64)>,
    cum: Vec<u64>,
}

impl CountIndex {
    fn new(s: &SymbolicSet, h: u64) -> Result<Self> {
        let runs = s.runs(h)?;
        let mut cum = Vec::with_capacity(runs.len() + 1);
        cum.push(0);
        for (l, r) in &runs {
            cum.push(cum.last().unwrap() + (r - l + 1));
        }
        Ok(CountIndex { runs, cum })
    }

    /// Indices in `(from, to)` where the sign of `λ_{m+1} − λ_m` can change.
    fn breakpoints(&self, from: u64, to: u64) -> Vec<u64> {
        let start = self.runs.partition_point(|&(_, r)| r < from.saturating_sub(1));
        let mut pts = Vec::new();
        for &(l, r) in &self.runs[start..] {
            if l > to {
                break;
            }
            for m in [l - 1, r] {
                if m > from && m < to {
                    pts.push(m);
                }
            }
        }
        pts
    }

    fn count(&self, n: u64) -> u64 {
        let i = self.runs.partition_point(|&(l, _)| l <= n);
        if i == 0 {
            return 0;
        }
        let (_, r) = self.runs[i - 1];
        self.cum[i] - r.saturating_sub(n)
    }
}

fn uniform_variation(idx: &CountIndex, from: u64, to: u64) -> Variation {
    let mut pts = vec![from];
    pts.extend(idx.breakpoints(from, to));
    pts.push(to);
    pts.dedup();
    let pieces = (pts.len() - 1) as u64;
    let lam = |n: u64| (idx.count(n) as u128, n as u128);
    if pieces <= 512 {
        let mut sum = Q::zero();
        for w in pts.windows(2) {
            let (ca, a) = lam(w[0]);
            let (cb, b) = lam(w[1]);
            sum +=
                (Q::new((ca as u64).into(), (a as u64).into()) - Q::new((cb as u64).into(), (b as u64).into())).abs();
        }
        return Variation { upper: QJson(sum.clone()), lower: QJson(sum), exact: true, pieces };
    }
    // Σ |c_a b − c_b a|/(ab), each term rounded outward to a multiple of 2^{-64}
    let mut lo: u128 = 0;
    let mut hi: u128 = 0;
    for w in pts.windows(2) {
        let (ca, a) = lam(w[0]);
        let (cb, b) = lam(w[1]);
        let num = (ca * b).abs_diff(cb * a);
        let den = a * b;
        let scaled = BigUint::from(num) << FIXED_BITS;
        let fl = (&scaled / den).to_u128().expect("bounded by 2^64 times a ratio ≤ 1");
        lo += fl;
        hi += fl + u128::from(&scaled % den != BigUint::zero());
    }
    let unit = Q::new(One::one(), num_bigint::BigInt::one() << FIXED_BITS);
    let to_q = |x: u128| Q::from_integer(x.into()) * &unit;
    Variation { upper: QJson(to_q(hi)), lower: QJson(to_q(lo)), exact: false, pieces }
}

fn direct_variation(mu: &Submeasure, s: &SymbolicSet, from: u64, to: u64) -> Result<Variation> {
    if to - from > DIRECT_WINDOW {
        return Err(Error::NotCertifiable(format!("window of {} terms exceeds the direct-sum limit", to - from)));
    }
    let mut sum = Q::zero();
    let mut prev = mu.eval_full(from, s)?;
    for m in from + 1..=to {
        let cur = mu.eval_full(m, s)?;
        sum += (&cur - &prev).abs();
        prev = cur;
    }
    Ok(Variation { upper: QJson(sum.clone()), lower: QJson(sum), exact: true, pieces: to - from })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Claim1Sample {
    pub n: u64,
    pub window: u64,
    pub lhs: Variation,
    pub slack: QJson,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub submeasure: String,
    pub set: String,
    pub alpha: QJson,
    pub d: QJson,
    pub c: QJson,
    pub kappa: QJson,
    pub rhs: QJson,
    pub flatness: Flatness,
    pub samples: Vec<Claim1Sample>,
    pub max_lhs: QJson,
    pub min_slack: QJson,
    pub pass: bool,
}

/// Checks `Σ_{i=1}^{⌊c n^α⌋} |μ_{n+i}(S) − μ_{n+i+1}(S)| ≤ κ c` at each `n`.
pub fn claim1_bound_check(
    mu: &Submeasure,
    s: &SymbolicSet,
    alpha: &Q,
    d: &Q,
    c: &Q,
    ns: &[u64],
) -> Result<BoundReport> {
    let k = kappa(alpha, d)?;
    if !c.is_positive() {
        return Err(Error::Precondition("c must be positive".into()));
    }
    let windows: Vec<(u64, u64)> = ns
        .iter()
        .map(|&n| {
            let w = floor_scaled_power(c, &nat(n), alpha)
                .to_u64()
                .ok_or_else(|| Error::Precondition("window too large".into()))?;
            Ok((n, w))
        })
        .collect::<Result<_>>()?;
    let top = windows.iter().map(|(n, w)| n + w + 1).max().unwrap_or(2);
    let flat = flatness(mu, s, alpha, d, top.min(DIRECT_WINDOW))?;
    if !flat.holds() {
        return Err(Error::Precondition(format!("μ is not {}-flat with d = {} on this set", fmt_q(alpha), fmt_q(d))));
    }
    let rhs = &k * c;
    let index = if matches!(mu, Submeasure::Uniform) { Some(CountIndex::new(s, top)?) } else { None };
    let mut samples = Vec::new();
    for (n, w) in windows {
        let lhs = if w == 0 {
            Variation { upper: QJson(Q::zero()), lower: QJson(Q::zero()), exact: true, pieces: 0 }
        } else {
            match &index {
                Some(idx) => uniform_variation(idx, n + 1, n + w + 1),
                None => direct_variation(mu, s, n + 1, n + w + 1)?,
            }
        };
        let ok = lhs.upper.0 <= rhs;
        samples.push(Claim1Sample { n, window: w, slack: QJson(&rhs - &lhs.upper.0), ok, lhs });
    }
    let max_lhs = samples.iter().map(|s| s.lhs.upper.0.clone()).max().unwrap_or_else(Q::zero);
    let min_slack = samples.iter().map(|s| s.slack.0.clone()).min().unwrap_or_else(|| rhs.clone());
    Ok(BoundReport {
        submeasure: mu.name(),
        set: s.describe(),
        alpha: QJson(alpha.clone()),
        d: QJson(d.clone()),
        c: QJson(c.clone()),
        kappa: QJson(k),
        rhs: QJson(rhs),
        flatness: flat,
        pass: samples.iter().all(|s| s.ok),
        samples,
        max_lhs: QJson(max_lhs),
        min_slack: QJson(min_slack),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowSample {
    pub n: u64,
    pub width: u64,
    /// `max_{m ≤ width} |μ_{n+m}(S) − μ_n(S)|`.
    pub max_deviation: QJson,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Claim2Report {
    pub submeasure: String,
    pub set: String,
    pub delta: QJson,
    pub alpha: QJson,
    pub d: QJson,
    pub kappa: QJson,
    pub c: QJson,
    pub n0: u64,
    pub recipe: String,
    pub windows: Vec<WindowSample>,
    pub pass: bool,
}

/// `(c, n₀)` with `κ c ≤ δ/2` and `d/n₀^α ≤ δ/2`, the smallest such `n₀`.
pub fn claim2_recipe(delta: &Q, alpha: &Q, d: &Q) -> Result<(Q, u64)> {
    let k = kappa(alpha, d)?;
    if !delta.is_positive() {
        return Err(Error::Precondition("δ must be positive".into()));
    }
    let c = delta / (q(2, 1) * &k);
    // d/n^α ≤ δ/2  ⇔  2d/δ ≤ n^α
    let need = q(2, 1) * d / delta;
    let ok = |n: u64| le_times_power(&need, &Q::one(), &nat(n), alpha);
    let mut hi = 1u64;
    while !ok(hi) {
        hi = hi.checked_mul(2).ok_or_else(|| Error::Infeasible("n₀ exceeds the machine range".into()))?;
    }
    let mut lo = hi / 2;
    // invariant: ok(hi), !ok(lo) or lo = 0
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((c, hi))
}

/// Verifies `|μ_{n+m}(S) − μ_n(S)| ≤ δ` for `0 ≤ m ≤ ⌊c n^α⌋` at each `n`.
pub fn claim2_windows(
    mu: &Submeasure,
    s: &SymbolicSet,
    delta: &Q,
    alpha: &Q,
    c: &Q,
    ns: &[u64],
) -> Result<Vec<WindowSample>> {
    let widths: Vec<(u64, u64)> = ns
        .iter()
        .map(|&n| {
            Ok((
                n,
                floor_scaled_power(c, &nat(n), alpha)
                    .to_u64()
                    .ok_or_else(|| Error::Precondition("window too large".into()))?,
            ))
        })
        .collect::<Result<_>>()?;
    let top = widths.iter().map(|(n, w)| n + w).max().unwrap_or(1);
    let mut out = Vec::new();
    if matches!(mu, Submeasure::Uniform) {
        let idx = CountIndex::new(s, top)?;
        for (n, w) in widths {
            // extremes of λ on [n, n + w] sit at piece endpoints
            let mut pts = vec![n];
            pts.extend(idx.breakpoints(n, n + w));
            pts.push(n + w);
            let cn = idx.count(n) as u128;
            let mut best = (0u128, 1u128);
            for p in pts {
                let cp = idx.count(p) as u128;
                // |c_p/p − c_n/n| = |c_p n − c_n p| / (p n)
                let num = (cp * n as u128).abs_diff(cn * p as u128);
                let den = p as u128 * n as u128;
                if num * best.1 > best.0 * den {
                    best = (num, den);
                }
            }
            let dev = Q::new(BigUint::from(best.0).into(), BigUint::from(best.1).into());
            out.push(WindowSample { n, width: w, ok: dev <= *delta, max_deviation: QJson(dev) });
        }
    } else {
        for (n, w) in widths {
            if w > DIRECT_WINDOW {
                return Err(Error::NotCertifiable(format!("window of {w} terms exceeds the direct limit")));
            }
            let base = mu.eval_full(n, s)?;
            let mut dev = Q::zero();
            for m in 1..=w {
                dev = dev.max((mu.eval_full(n + m, s)? - &base).abs());
            }
            out.push(WindowSample { n, width: w, ok: dev <= *delta, max_deviation: QJson(dev) });
        }
    }
    Ok(out)
}

/// Picks `(c, n₀)` by the recipe and verifies the windows at sampled `n ≥ n₀`.
pub fn claim2_window_check(
    mu: &Submeasure,
    s: &SymbolicSet,
    delta: &Q,
    alpha: &Q,
    d: &Q,
    n_max: u64,
) -> Result<Claim2Report> {
    let (c, n0) = claim2_recipe(delta, alpha, d)?;
    let k = kappa(alpha, d)?;
    let flat = flatness(mu, s, alpha, d, n_max.min(DIRECT_WINDOW))?;
    if !flat.holds() {
        return Err(Error::Precondition("flatness precondition fails".into()));
    }
    if n0 > n_max {
        return Err(Error::Infeasible(format!("recipe needs n₀ = {n0} beyond the sampling range {n_max}")));
    }
    let ns = sample_grid(Some(s), n0, n_max)?;
    let windows = if delta >= &Q::one() && mu.is_probability() {
        ns.iter().map(|&n| WindowSample { n, width: 0, max_deviation: QJson(Q::zero()), ok: true }).collect()
    } else {
        claim2_windows(mu, s, delta, alpha, &c, &ns)?
    };
    Ok(Claim2Report {
        submeasure: mu.name(),
        set: s.describe(),
        delta: QJson(delta.clone()),
        alpha: QJson(alpha.clone()),
        d: QJson(d.clone()),
        kappa: QJson(k),
        c: QJson(c),
        n0,
        recipe: "κc ≤ δ/2 and d/n₀^α ≤ δ/2".into(),
        pass: windows.iter().all(|w| w.ok),
        windows,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharacterReport {
    pub nu: String,
    pub mu: String,
    pub alpha: QJson,
    pub d: QJson,
    pub thickness: Option<String>,
    pub flat_sets: usize,
    pub flat_failures: Vec<String>,
    pub harness: HarnessReport,
}

/// Compares `Z_μ`-convergence with `(Z_ν, μ)`-convergence over a corpus.
#[allow(clippy::too_many_arguments)]
pub fn character_harness(
    nu: &Submeasure,
    mu: &Submeasure,
    alpha: &Q,
    d: &Q,
    flat_sets: &[SymbolicSet],
    seqs: &[SymbolicSequence],
    limits: &[Q],
    cfg: &RunConfig,
) -> Result<CharacterReport> {
    if !alpha.is_positive() || alpha > &Q::one() {
        return Err(Error::Precondition(format!("α = {} outside (0, 1] is not supported", fmt_q(alpha))));
    }
    let zeta_like = matches!(nu, Submeasure::Uniform);
    let target = if zeta_like { Ideal::Zeta } else { Ideal::ZMu(nu.clone()) };
    let thickness = structural_thickness(&target, alpha);
    let mut flat_failures = Vec::new();
    for s in flat_sets {
        if !flatness(mu, s, alpha, d, 2_000)?.holds() {
            flat_failures.push(s.describe());
        }
    }
    let mut harness = HarnessReport {
        harness: format!("Z_μ vs (Z_ν, μ): ν = {}, μ = {}", nu.name(), mu.name()),
        checked: 0,
        confirmed: 0,
        vacuous: 0,
        undecided: 0,
        falsifications: Vec::new(),
    };
    for x in seqs {
        for l in limits {
            let a = ideal_limit(x, &Ideal::ZMu(mu.clone()), l, cfg)?.outcome;
            let b = imu_limit(x, &Ideal::ZMu(nu.clone()), mu, l, cfg)?.outcome;
            harness.checked += 1;
            if a.is_certified() && b.is_certified() {
                if a == b {
                    harness.confirmed += 1;
                } else {
                    harness.falsifications.push(crate::convergence::Falsification {
                        sequence: x.to_json(),
                        limit: fmt_q(l),
                        detail: format!("Z_μ: {a:?}, (Z_ν, μ): {b:?}"),
                    });
                }
            } else {
                harness.undecided += 1;
            }
        }
    }
    Ok(CharacterReport {
        nu: nu.name(),
        mu: mu.name(),
        alpha: QJson(alpha.clone()),
        d: QJson(d.clone()),
        thickness,
        flat_sets: flat_sets.len(),
        flat_failures,
        harness,
    })
}
