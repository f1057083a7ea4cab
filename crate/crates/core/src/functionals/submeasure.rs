//! Sequences of submeasures `μ = (μ_n)` on **N**.

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::density::upper_density;
use crate::error::{Error, Result};
use crate::num::{floor_scaled_power, fmt_q, le_over_power, le_times_power, nat, q_frac, q_int, Nat, QJson, Q};
use crate::sets::json::SchemeSpec;
use crate::sets::{BlockScheme, Bound, Generator, SymbolicSet};

/// Row kernels `r_{n,k} ≥ 0` with finitely many nonzero entries per row.
#[derive(Clone, Debug, PartialEq)]
pub enum Kernel {
    /// `r_{n,k} = 1/n` for `k ≤ n`.
    Cesaro,
    /// `r_{n,k} = 1/n²` for `k ≤ n`.
    Decaying,
    /// Uniform on `[1, ι_n]` with `ι_n = max(1, ⌊b·n^β⌋)`.
    UniformPrefix { b: Q, beta: Q },
    /// Rows `1, 2, …, len` listed explicitly as sorted `(k, r_{n,k})`; later rows are zero.
    Rows(Vec<Vec<(u64, Q)>>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Submeasure {
    /// `λ_n(A) = |A ∩ [1, n]| / n`.
    Uniform,
    /// Uniform probability on `[a_n, a_{n+1})`.
    Lacunary(BlockScheme),
    Matrix(Kernel),
    /// Every `μ_n` equal to `d*`.
    UpperDensity,
    /// `μ_n = inner_n` for `n ∈ on`, the zero measure otherwise.
    Masked {
        inner: Box<Submeasure>,
        on: SymbolicSet,
    },
    Zero,
}

/// One row of a matrix kernel.
enum Row<'a> {
    /// Weight `w` on each of `1..=len`.
    Flat {
        len: Nat,
        weight: Q,
    },
    Listed(&'a [(u64, Q)]),
}

impl Kernel {
    pub fn validate(&self) -> Result<()> {
        match self {
            Kernel::UniformPrefix { b, beta } => {
                if !b.is_positive() {
                    return Err(Error::Validation("uniform-prefix needs b > 0".into()));
                }
                if !beta.is_positive() || beta > &Q::one() {
                    return Err(Error::Validation("uniform-prefix needs β ∈ (0, 1]".into()));
                }
            }
            Kernel::Rows(rows) => {
                for (i, row) in rows.iter().enumerate() {
                    for w in row.windows(2) {
                        if w[0].0 >= w[1].0 {
                            return Err(Error::Validation(format!("row {} columns not strictly increasing", i + 1)));
                        }
                    }
                    for (k, r) in row {
                        if *k == 0 {
                            return Err(Error::Validation(format!("row {} has column 0", i + 1)));
                        }
                        if r.is_negative() {
                            return Err(Error::Validation(format!("row {} has a negative entry", i + 1)));
                        }
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// `ι_n` for the prefix kernels.
    pub fn iota(&self, n: u64) -> Option<Nat> {
        match self {
            Kernel::Cesaro | Kernel::Decaying => Some(nat(n)),
            Kernel::UniformPrefix { b, beta } => Some(floor_scaled_power(b, &nat(n), beta).max(Nat::one())),
            Kernel::Rows(rows) => match rows.get((n - 1) as usize) {
                Some(r) => Some(nat(r.iter().rev().find(|(_, w)| !w.is_zero()).map_or(0, |(k, _)| *k))),
                None => Some(Nat::zero()),
            },
        }
    }

    fn row(&self, n: u64) -> Row<'_> {
        match self {
            Kernel::Cesaro => Row::Flat { len: nat(n), weight: Q::new(1.into(), n.into()) },
            Kernel::Decaying => Row::Flat { len: nat(n), weight: Q::new(1.into(), (n as u128 * n as u128).into()) },
            Kernel::UniformPrefix { .. } => {
                let len = self.iota(n).expect("prefix kernel");
                let weight = q_frac(&Nat::one(), &len);
                Row::Flat { len, weight }
            }
            Kernel::Rows(rows) => Row::Listed(rows.get((n - 1) as usize).map_or(&[], |r| r.as_slice())),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Kernel::Cesaro => "cesaro".into(),
            Kernel::Decaying => "decaying".into(),
            Kernel::UniformPrefix { b, beta } => format!("uniform-prefix(b={}, β={})", fmt_q(b), fmt_q(beta)),
            Kernel::Rows(rows) => format!("rows({})", rows.len()),
        }
    }
}

fn block_endpoints(s: &BlockScheme, n: u64) -> Result<(Nat, Nat)> {
    match (s.a(n)?, s.a(n + 1)?) {
        (Bound::Fin(lo), Bound::Fin(next)) => Ok((lo, next - 1u32)),
        _ => Err(Error::Precondition(format!("block {n} lies beyond the queryable range"))),
    }
}

impl Submeasure {
    pub fn masked(inner: Submeasure, on: SymbolicSet) -> Self {
        Submeasure::Masked { inner: Box::new(inner), on }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Submeasure::Matrix(k) => k.validate(),
            Submeasure::Masked { inner, .. } => inner.validate(),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Submeasure::Uniform => "uniform".into(),
            Submeasure::Lacunary(s) => format!("lacunary({})", s.name().unwrap_or("explicit")),
            Submeasure::Matrix(k) => format!("matrix({})", k.name()),
            Submeasure::UpperDensity => "upper-density".into(),
            Submeasure::Masked { inner, on } => format!("masked({}, on {})", inner.name(), on.describe()),
            Submeasure::Zero => "zero".into(),
        }
    }

    /// Whether every `μ_n` is a probability measure on its support.
    pub fn is_probability(&self) -> bool {
        matches!(
            self,
            Submeasure::Uniform
                | Submeasure::Lacunary(_)
                | Submeasure::Matrix(Kernel::Cesaro)
                | Submeasure::Matrix(Kernel::UniformPrefix { .. })
        )
    }

    /// Lower semicontinuity of each `μ_n`; `d*` is not.
    pub fn is_lsc(&self) -> bool {
        match self {
            Submeasure::UpperDensity => false,
            Submeasure::Masked { inner, .. } => inner.is_lsc(),
            _ => true,
        }
    }

    /// The support `I_n` as an interval `[lo, hi]`, when finite.
    pub fn support(&self, n: u64) -> Result<Option<(Nat, Nat)>> {
        Ok(match self {
            Submeasure::Uniform => Some((Nat::one(), nat(n))),
            Submeasure::Lacunary(s) => Some(block_endpoints(s, n)?),
            Submeasure::Matrix(Kernel::Rows(rows)) => {
                let row = rows.get((n - 1) as usize);
                match row.and_then(|r| Some((r.first()?.0, r.last()?.0))) {
                    Some((lo, hi)) => Some((nat(lo), nat(hi))),
                    None => Some((Nat::one(), Nat::one())),
                }
            }
            Submeasure::Matrix(k) => Some((Nat::one(), k.iota(n).expect("prefix kernel"))),
            Submeasure::UpperDensity => None,
            Submeasure::Masked { inner, .. } => inner.support(n)?,
            Submeasure::Zero => Some((Nat::one(), Nat::one())),
        })
    }

    pub fn support_set(&self, n: u64) -> Result<SymbolicSet> {
        Ok(match self.support(n)? {
            Some((lo, hi)) => SymbolicSet::intervals(Generator::Explicit(vec![(lo, hi)]))?,
            None => SymbolicSet::all(),
        })
    }

    /// `μ_n(A ∩ [1, H])`. Finite-support instances need `H` to cover `I_n`;
    /// beyond that the value no longer depends on `H`. `UpperDensity` ignores `H`.
    pub fn eval(&self, n: u64, a: &SymbolicSet, h: &Nat) -> Result<Q> {
        if n == 0 {
            return Err(Error::Precondition("submeasure index must be ≥ 1".into()));
        }
        if let Some((_, hi)) = self.support(n)? {
            if h < &hi {
                return Err(Error::Precondition(format!("horizon {h} below the support of μ_{n}, which reaches {hi}")));
            }
        }
        self.eval_clipped(n, a, None)
    }

    /// `μ_n(A)`.
    pub fn eval_full(&self, n: u64, a: &SymbolicSet) -> Result<Q> {
        self.eval_clipped(n, a, None)
    }

    /// `μ_n(A ∩ [1, cap])` without the support precondition.
    pub fn eval_clipped(&self, n: u64, a: &SymbolicSet, cap: Option<&Nat>) -> Result<Q> {
        if n == 0 {
            return Err(Error::Precondition("submeasure index must be ≥ 1".into()));
        }
        let clip = |hi: Nat| -> Nat {
            match cap {
                Some(c) if c < &hi => c.clone(),
                _ => hi,
            }
        };
        match self {
            Submeasure::Uniform => Ok(q_frac(&a.count(&clip(nat(n)))?, &nat(n))),
            Submeasure::Lacunary(s) => {
                let (lo, hi) = block_endpoints(s, n)?;
                let len = &hi - &lo + 1u32;
                let top = clip(hi);
                Ok(q_frac(&a.count_range(&lo, &top)?, &len))
            }
            Submeasure::Matrix(k) => match k.row(n) {
                Row::Flat { len, weight } => Ok(q_int(&a.count(&clip(len))?) * weight),
                Row::Listed(entries) => {
                    let mut acc = Q::zero();
                    for (col, r) in entries {
                        if cap.is_some_and(|c| &nat(*col) > c) {
                            break;
                        }
                        if a.contains_u64(*col)? {
                            acc += r;
                        }
                    }
                    Ok(acc)
                }
            },
            Submeasure::UpperDensity => {
                let d = upper_density(a, 1000)?;
                d.exact()
                    .filter(|_| d.is_certified())
                    .cloned()
                    .ok_or_else(|| Error::NotCertifiable(format!("upper density of {} is not certified", a.describe())))
            }
            Submeasure::Masked { inner, on } => {
                if on.contains_u64(n)? {
                    inner.eval_clipped(n, a, cap)
                } else {
                    Ok(Q::zero())
                }
            }
            Submeasure::Zero => Ok(Q::zero()),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum MuSpec {
    Uniform,
    Lacunary {
        scheme: SchemeSpec,
    },
    Matrix {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kernel: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        b: Option<QJson>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        beta: Option<QJson>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rows: Option<Vec<Vec<(u64, QJson)>>>,
    },
    UpperDensity,
    Masked {
        inner: Box<MuSpec>,
        on: SymbolicSet,
    },
    Zero,
}

impl MuSpec {
    fn build(self) -> Result<Submeasure> {
        let mu = match self {
            MuSpec::Uniform => Submeasure::Uniform,
            MuSpec::Lacunary { scheme } => Submeasure::Lacunary(scheme.build()?),
            MuSpec::Matrix { kernel, b, beta, rows } => {
                let k = match (kernel.as_deref(), rows) {
                    (Some("cesaro"), None) => Kernel::Cesaro,
                    (Some("decaying"), None) => Kernel::Decaying,
                    (Some("uniform-prefix"), None) => Kernel::UniformPrefix {
                        b: b.ok_or_else(|| Error::Schema("uniform-prefix needs `b`".into()))?.0,
                        beta: beta.ok_or_else(|| Error::Schema("uniform-prefix needs `beta`".into()))?.0,
                    },
                    (None, Some(rows)) => {
                        Kernel::Rows(rows.into_iter().map(|r| r.into_iter().map(|(k, v)| (k, v.0)).collect()).collect())
                    }
                    (Some(other), None) => return Err(Error::Schema(format!("unknown kernel `{other}`"))),
                    _ => return Err(Error::Schema("matrix needs exactly one of `kernel` or `rows`".into())),
                };
                Submeasure::Matrix(k)
            }
            MuSpec::UpperDensity => Submeasure::UpperDensity,
            MuSpec::Masked { inner, on } => Submeasure::masked(inner.build()?, on),
            MuSpec::Zero => Submeasure::Zero,
        };
        mu.validate()?;
        Ok(mu)
    }

    fn of(mu: &Submeasure) -> MuSpec {
        match mu {
            Submeasure::Uniform => MuSpec::Uniform,
            Submeasure::Lacunary(s) => MuSpec::Lacunary { scheme: SchemeSpec::of(s) },
            Submeasure::Matrix(k) => {
                let (kernel, b, beta, rows) = match k {
                    Kernel::Cesaro => (Some("cesaro".to_string()), None, None, None),
                    Kernel::Decaying => (Some("decaying".to_string()), None, None, None),
                    Kernel::UniformPrefix { b, beta } => {
                        (Some("uniform-prefix".to_string()), Some(QJson(b.clone())), Some(QJson(beta.clone())), None)
                    }
                    Kernel::Rows(rows) => (
                        None,
                        None,
                        None,
                        Some(rows.iter().map(|r| r.iter().map(|(k, v)| (*k, QJson(v.clone()))).collect()).collect()),
                    ),
                };
                MuSpec::Matrix { kernel, b, beta, rows }
            }
            Submeasure::UpperDensity => MuSpec::UpperDensity,
            Submeasure::Masked { inner, on } => MuSpec::Masked { inner: Box::new(MuSpec::of(inner)), on: on.clone() },
            Submeasure::Zero => MuSpec::Zero,
        }
    }
}

impl Serialize for Submeasure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MuSpec::of(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Submeasure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        MuSpec::deserialize(d)?.build().map_err(serde::de::Error::custom)
    }
}

impl Submeasure {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(format!("submeasure JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("submeasure serializes")
    }

    /// JSON, or one of `uniform`, `upper-density`, `zero`, `lacunary:<scheme>`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('{') {
            return Self::from_json(t);
        }
        match t.split_once(':') {
            Some(("lacunary", scheme)) => Ok(Submeasure::Lacunary(BlockScheme::named(scheme)?)),
            None if t == "uniform" => Ok(Submeasure::Uniform),
            None if t == "upper-density" => Ok(Submeasure::UpperDensity),
            None if t == "zero" => Ok(Submeasure::Zero),
            _ => Err(Error::Parse(format!("unknown submeasure `{t}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Smoothness {
    CertifiedSmooth,
    RefutedAt { item: String },
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmoothnessReport {
    pub submeasure: String,
    pub verdict: Smoothness,
    pub s1: String,
    pub s2: String,
    pub s3: String,
    /// `max_{n ≤ K} μ_n(N)`.
    pub s3_max: QJson,
    pub horizon: u64,
}

/// Checks smoothness: (s1) nonempty supports, (s2) `μ_n({k}) → 0`,
/// (s3) `limsup μ_n(N) > 0`. Certification is a table of closed forms;
/// numeric evidence is `max_{n ≤ K} μ_n(N)`.
pub fn smoothness_check(mu: &Submeasure, k: u64) -> Result<SmoothnessReport> {
    let k = k.max(1);
    let all = SymbolicSet::all();
    let mut s3_max = Q::zero();
    let cap = k.min(1 << 16);
    for n in 1..=cap {
        let v = match mu {
            Submeasure::Uniform | Submeasure::Lacunary(_) | Submeasure::UpperDensity => Q::one(),
            _ => mu.eval_full(n, &all)?,
        };
        s3_max = s3_max.max(v);
    }
    let s1 = match mu {
        Submeasure::UpperDensity => "support N".to_string(),
        _ => "supports are nonempty intervals".to_string(),
    };
    let (verdict, s2, s3) = match mu {
        Submeasure::Uniform => (Smoothness::CertifiedSmooth, "λ_n({k}) = 1/n → 0".into(), "λ_n(N) = 1".into()),
        Submeasure::Lacunary(s) if s.len().is_none() => {
            (Smoothness::CertifiedSmooth, "μ_n({k}) = 0 once a_n > k".into(), "probability measures".into())
        }
        Submeasure::Lacunary(_) => {
            (Smoothness::Inconclusive, "finite explicit scheme".into(), "finite explicit scheme".into())
        }
        Submeasure::UpperDensity => (Smoothness::CertifiedSmooth, "d*({k}) = 0".into(), "d*(N) = 1".into()),
        Submeasure::Matrix(Kernel::Cesaro) => {
            (Smoothness::CertifiedSmooth, "r_{n,k} = 1/n → 0".into(), "rows sum to 1".into())
        }
        Submeasure::Matrix(Kernel::UniformPrefix { .. }) => {
            (Smoothness::CertifiedSmooth, "r_{n,k} ≤ 1/ι_n → 0".into(), "rows sum to 1".into())
        }
        Submeasure::Matrix(Kernel::Decaying) => {
            (Smoothness::RefutedAt { item: "s3".into() }, "r_{n,k} = 1/n² → 0".into(), "μ_n(N) = 1/n → 0".into())
        }
        Submeasure::Matrix(Kernel::Rows(rows)) => (
            Smoothness::RefutedAt { item: "s3".into() },
            "rows vanish after the list".into(),
            format!("μ_n(N) = 0 for n > {}", rows.len()),
        ),
        Submeasure::Masked { inner, on } => {
            let inner_rep = smoothness_check(inner, k)?;
            let on_finite = on.periodic_form().map(|p| p.members_per_period() == 0).unwrap_or(false)
                || super::profile::profile(on).finite == Some(true);
            let on_infinite = super::profile::profile(on).finite == Some(false);
            if on_finite {
                (
                    Smoothness::RefutedAt { item: "s3".into() },
                    inner_rep.s2,
                    "the mask is finite, so μ_n = 0 eventually".into(),
                )
            } else if on_infinite && inner_rep.verdict == Smoothness::CertifiedSmooth && inner.is_probability() {
                (
                    Smoothness::CertifiedSmooth,
                    format!("{} (masking only lowers values)", inner_rep.s2),
                    "probability measures on an infinite index set".into(),
                )
            } else {
                (Smoothness::Inconclusive, inner_rep.s2, "unknown".into())
            }
        }
        Submeasure::Zero => (Smoothness::RefutedAt { item: "s3".into() }, "μ_n = 0".into(), "μ_n(N) = 0".into()),
    };
    Ok(SmoothnessReport { submeasure: mu.name(), verdict, s1, s2, s3, s3_max: QJson(s3_max), horizon: k })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum FlatCheck {
    Holds { up_to: u64 },
    Violation { n: u64, mu_n: QJson, mu_next: QJson, bound: String },
}

impl FlatCheck {
    pub fn holds(&self) -> bool {
        matches!(self, FlatCheck::Holds { .. })
    }
}

/// Checks `|μ_{n+1}(A) − μ_n(A)| ≤ d/n^α` for all `n < N`, exactly.
pub fn alpha_flat_check(mu: &Submeasure, a: &SymbolicSet, alpha: &Q, d: &Q, n_max: u64) -> Result<FlatCheck> {
    if !alpha.is_positive() || !d.is_positive() {
        return Err(Error::Precondition("α-flatness needs α > 0 and d > 0".into()));
    }
    if n_max < 2 {
        return Err(Error::Precondition("α-flatness check needs N ≥ 2".into()));
    }
    let mut seq = FlatSeq::new(mu, a)?;
    let mut prev = seq.next()?;
    for n in 1..n_max {
        let next = seq.next()?;
        let gap = (&next - &prev).abs();
        if !le_over_power(&gap, d, &nat(n), alpha) {
            return Ok(FlatCheck::Violation {
                n,
                mu_n: QJson(prev),
                mu_next: QJson(next),
                bound: format!("{}/{}^{}", fmt_q(d), n, fmt_q(alpha)),
            });
        }
        prev = next;
    }
    Ok(FlatCheck::Holds { up_to: n_max })
}

/// Streams `μ_1(A), μ_2(A), …`, counting incrementally for `λ`.
struct FlatSeq<'a> {
    mu: &'a Submeasure,
    a: &'a SymbolicSet,
    n: u64,
    count: u64,
}

impl<'a> FlatSeq<'a> {
    fn new(mu: &'a Submeasure, a: &'a SymbolicSet) -> Result<Self> {
        Ok(FlatSeq { mu, a, n: 0, count: 0 })
    }

    fn next(&mut self) -> Result<Q> {
        self.n += 1;
        match self.mu {
            Submeasure::Uniform => {
                if self.a.contains_u64(self.n)? {
                    self.count += 1;
                }
                Ok(Q::new(self.count.into(), self.n.into()))
            }
            mu => mu.eval_full(self.n, self.a),
        }
    }
}

/// `max_{k ≤ H} μ_k((A \ [1, n]) ∩ [1, H])`, a truncation of
/// `φ_μ(A \ [1, n])` with `φ_μ = sup_k μ_k`.
pub fn exh_tail(mu: &Submeasure, a: &SymbolicSet, n: u64, h: u64) -> Result<Q> {
    if !mu.is_lsc() {
        return Err(Error::Precondition(format!("{} is not lower semicontinuous", mu.name())));
    }
    if h <= n {
        return Ok(Q::zero());
    }
    if let Submeasure::Uniform = mu {
        // λ_k of the tail is nondecreasing along each run, so run ends suffice.
        let mut best_num: u64 = 0;
        let mut best_den: u64 = 1;
        let mut seen: u64 = 0;
        for (l, r) in a.runs(h)? {
            if r <= n {
                continue;
            }
            let l = l.max(n + 1);
            seen += r - l + 1;
            if (seen as u128) * (best_den as u128) > (best_num as u128) * (r as u128) {
                best_num = seen;
                best_den = r;
            }
        }
        return Ok(Q::new(best_num.into(), best_den.into()));
    }
    let tail = if n == 0 {
        a.clone()
    } else {
        SymbolicSet::intersection(vec![
            a.clone(),
            SymbolicSet::intervals(Generator::Explicit(vec![(Nat::one(), nat(n))]))?.complement(),
        ])
    };
    let cap = nat(h);
    let mut best = Q::zero();
    for k in 1..=h {
        if let Some((lo, _)) = mu.support(k)? {
            if lo > cap {
                break;
            }
        }
        best = best.max(mu.eval_clipped(k, &tail, Some(&cap))?);
    }
    Ok(best)
}

/// Growth parameters of a prefix-supported probability kernel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatParams {
    pub b: QJson,
    pub beta: QJson,
    pub c: QJson,
    pub gamma: QJson,
    pub d: QJson,
    pub delta: QJson,
    pub e: QJson,
    pub eta: QJson,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlphaFlatFamily {
    pub mu: Submeasure,
    pub alpha: Q,
    /// `d(A) ≤ b·d + c·e` works for every `A`.
    pub constant: Q,
    pub checked_up_to: u64,
}

/// Builds a matrix submeasure from a probability kernel supported on
/// `[1, ι_n]` and validates the growth conditions for `n < N`:
/// `ι_n ≤ b n^β`, `ι_{n+1} − ι_n ≤ c n^γ`, `|r_{n+1,k} − r_{n,k}| ≤ d/n^δ`
/// for `k ≤ ι_n`, and `r_{n+1,k} ≤ e/n^η` for the entering columns
/// `ι_n < k ≤ ι_{n+1}`. Summing these over a set gives
/// `|μ_{n+1}(A) − μ_n(A)| ≤ b d n^{β−δ} + c e n^{γ−η}`, so the result is
/// tagged `α = min(δ − β, η − γ)`.
pub fn alpha_flat_family(kernel: Kernel, p: &FlatParams, n_max: u64) -> Result<AlphaFlatFamily> {
    kernel.validate()?;
    let alpha = (&p.delta.0 - &p.beta.0).min(&p.eta.0 - &p.gamma.0);
    if !alpha.is_positive() {
        return Err(Error::Validation(format!("min(δ − β, η − γ) = {} is not positive", fmt_q(&alpha))));
    }
    for (name, v) in [("b", &p.b), ("c", &p.c), ("d", &p.d), ("e", &p.e)] {
        if !v.0.is_positive() {
            return Err(Error::Validation(format!("{name} must be positive")));
        }
    }
    for (name, v) in [("β", &p.beta), ("γ", &p.gamma), ("δ", &p.delta), ("η", &p.eta)] {
        if v.0.is_negative() || v.0.numer().to_u32().is_none() || v.0.denom().to_u32().is_none() {
            return Err(Error::Validation(format!("{name} must be a small nonnegative rational")));
        }
    }
    let fail = |item: &str, n: u64, detail: String| Error::Validation(format!("({item}) fails at n = {n}: {detail}"));
    let weights = |n: u64| -> Result<(Nat, Vec<(Nat, Q)>)> {
        // (ι_n, piecewise-constant weights as (last column, weight))
        match kernel.row(n) {
            Row::Flat { len, weight } => Ok((len.clone(), vec![(len, weight)])),
            Row::Listed(entries) => {
                let mut total = Q::zero();
                let mut out = Vec::new();
                for (i, (k, r)) in entries.iter().enumerate() {
                    if *k != i as u64 + 1 {
                        return Err(fail("support", n, format!("row does not cover [1, ι_n] at column {}", i + 1)));
                    }
                    total += r;
                    out.push((nat(*k), r.clone()));
                }
                if total != Q::one() {
                    return Err(fail("probability", n, format!("row sums to {}", fmt_q(&total))));
                }
                Ok((nat(entries.len() as u64), out))
            }
        }
    };
    let weight_at =
        |w: &[(Nat, Q)], k: &Nat| -> Q { w.iter().find(|(last, _)| k <= last).map_or(Q::zero(), |(_, r)| r.clone()) };
    let (mut iota, mut w) = weights(1)?;
    if iota.is_zero() {
        return Err(fail("support", 1, "empty row".into()));
    }
    for n in 1..n_max {
        let nn = nat(n);
        if !le_times_power(&q_int(&iota), &p.b.0, &nn, &p.beta.0) {
            return Err(fail("i", n, format!("ι_n = {iota}")));
        }
        let (iota2, w2) = weights(n + 1)?;
        if iota2 < iota {
            return Err(fail("support", n, "ι_n decreases".into()));
        }
        let step = q_int(&(&iota2 - &iota));
        if !le_times_power(&step, &p.c.0, &nn, &p.gamma.0) {
            return Err(fail("ii", n, format!("ι_(n+1) − ι_n = {}", fmt_q(&step))));
        }
        // breakpoints of both step functions on [1, ι_n]
        let mut cuts: Vec<Nat> = w.iter().chain(w2.iter()).map(|(k, _)| k.clone()).filter(|k| k <= &iota).collect();
        cuts.sort();
        cuts.dedup();
        for k in &cuts {
            let gap = (weight_at(&w2, k) - weight_at(&w, k)).abs();
            if !le_over_power(&gap, &p.d.0, &nn, &p.delta.0) {
                return Err(fail("iii", n, format!("column {k} moves by {}", fmt_q(&gap))));
            }
        }
        let mut entering: Vec<Nat> = w2.iter().map(|(k, _)| k.clone()).filter(|k| k > &iota).collect();
        if iota2 > iota {
            entering.push(&iota + 1u32);
        }
        for k in &entering {
            let r = weight_at(&w2, k);
            if !le_over_power(&r, &p.e.0, &nn, &p.eta.0) {
                return Err(fail("iv", n, format!("entering column {k} has weight {}", fmt_q(&r))));
            }
        }
        iota = iota2;
        w = w2;
    }
    let constant = &p.b.0 * &p.d.0 + &p.c.0 * &p.e.0;
    Ok(AlphaFlatFamily { mu: Submeasure::Matrix(kernel), alpha, constant, checked_up_to: n_max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::q;

    fn qj(n: i64, d: i64) -> QJson {
        QJson(q(n, d))
    }

    #[test]
    fn eval_examples() {
        let evens = SymbolicSet::residue(2, 0).unwrap();
        assert_eq!(Submeasure::Uniform.eval(10, &evens, &nat(10)).unwrap(), q(1, 2));
        let lac = Submeasure::Lacunary(BlockScheme::Factorial);
        assert_eq!(lac.eval(2, &evens, &nat(24)).unwrap(), q(1, 2));
        assert!(lac.eval(3, &evens, &nat(10)).is_err());
        let rows =
            Submeasure::Matrix(Kernel::Rows(vec![vec![], vec![], vec![(1, q(1, 3)), (2, q(1, 3)), (3, q(1, 3))]]));
        assert_eq!(rows.eval(3, &SymbolicSet::finite([2]).unwrap(), &nat(3)).unwrap(), q(1, 3));
        assert_eq!(rows.eval_full(9, &SymbolicSet::all()).unwrap(), Q::zero());
        let ud = Submeasure::UpperDensity;
        assert_eq!(ud.eval(1, &SymbolicSet::factorial_set(), &nat(1)).unwrap(), Q::one());
    }

    #[test]
    fn json_forms() {
        for text in [
            r#"{"kind":"uniform"}"#,
            r#"{"kind":"lacunary","scheme":"factorial"}"#,
            r#"{"kind":"upper-density"}"#,
            r#"{"kind":"zero"}"#,
            r#"{"kind":"matrix","kernel":"cesaro"}"#,
            r#"{"kind":"matrix","kernel":"uniform-prefix","b":{"num":"1","den":"1"},"beta":{"num":"1","den":"2"}}"#,
            r#"{"kind":"masked","inner":{"kind":"uniform"},"on":{"kind":"residue","mod":2,"res":1}}"#,
        ] {
            let mu = Submeasure::from_json(text).unwrap();
            assert_eq!(Submeasure::from_json(&mu.to_json()).unwrap(), mu);
        }
        let m = Submeasure::from_json(r#"{"kind":"matrix","rows":[[[1,"1/2"],[2,"1/2"]]]}"#).unwrap();
        assert_eq!(m, Submeasure::Matrix(Kernel::Rows(vec![vec![(1, q(1, 2)), (2, q(1, 2))]])));
        assert!(Submeasure::from_json(r#"{"kind":"matrix","kernel":"bogus"}"#).is_err());
        assert!(Submeasure::from_json(r#"{"kind":"matrix","kernel":"uniform-prefix","b":1,"beta":2}"#).is_err());
    }

    #[test]
    fn smoothness_table() {
        let v = |mu: Submeasure| smoothness_check(&mu, 100).unwrap().verdict;
        assert_eq!(v(Submeasure::Uniform), Smoothness::CertifiedSmooth);
        assert_eq!(v(Submeasure::UpperDensity), Smoothness::CertifiedSmooth);
        assert_eq!(v(Submeasure::Zero), Smoothness::RefutedAt { item: "s3".into() });
        assert_eq!(v(Submeasure::Matrix(Kernel::Decaying)), Smoothness::RefutedAt { item: "s3".into() });
        let odd = SymbolicSet::residue(2, 1).unwrap();
        assert_eq!(v(Submeasure::masked(Submeasure::Uniform, odd)), Smoothness::CertifiedSmooth);
        let fin = SymbolicSet::finite([1, 2]).unwrap();
        assert_eq!(v(Submeasure::masked(Submeasure::Uniform, fin)), Smoothness::RefutedAt { item: "s3".into() });
    }

    #[test]
    fn flatness() {
        let evens = SymbolicSet::residue(2, 0).unwrap();
        assert!(alpha_flat_check(&Submeasure::Uniform, &evens, &Q::one(), &Q::one(), 10_000).unwrap().holds());
        let parity = Submeasure::masked(Submeasure::Uniform, SymbolicSet::residue(2, 1).unwrap());
        let r = alpha_flat_check(&parity, &SymbolicSet::all(), &Q::one(), &Q::one(), 3).unwrap();
        assert!(matches!(r, FlatCheck::Violation { n: 2, .. }));
    }

    #[test]
    fn exh_examples() {
        let evens = SymbolicSet::residue(2, 0).unwrap();
        let u = Submeasure::Uniform;
        assert_eq!(exh_tail(&u, &SymbolicSet::finite([5]).unwrap(), 5, 100).unwrap(), Q::zero());
        assert_eq!(exh_tail(&u, &evens, 0, 100).unwrap(), q(1, 2));
        assert_eq!(exh_tail(&u, &evens, 50, 100).unwrap(), q(1, 4));
        assert!(exh_tail(&Submeasure::UpperDensity, &evens, 0, 10).is_err());
        let c = Submeasure::Matrix(Kernel::Cesaro);
        assert_eq!(exh_tail(&c, &evens, 50, 100).unwrap(), q(1, 4));
    }

    #[test]
    fn alpha_flat_families() {
        let p = FlatParams {
            b: qj(1, 1),
            beta: qj(1, 1),
            c: qj(1, 1),
            gamma: qj(0, 1),
            d: qj(1, 1),
            delta: qj(2, 1),
            e: qj(1, 1),
            eta: qj(1, 1),
        };
        let fam = alpha_flat_family(Kernel::Cesaro, &p, 500).unwrap();
        assert_eq!(fam.alpha, Q::one());
        // ι_n = ⌊√n⌋: entering weight 1/ι ≤ 2/√n, step ≤ 1, moves ≤ 1/(ι(ι+1)) ≤ 2/n
        let half = FlatParams {
            b: qj(1, 1),
            beta: qj(1, 2),
            c: qj(1, 1),
            gamma: qj(0, 1),
            d: qj(2, 1),
            delta: qj(1, 1),
            e: qj(2, 1),
            eta: qj(1, 2),
        };
        let k = Kernel::UniformPrefix { b: q(1, 1), beta: q(1, 2) };
        let fam = alpha_flat_family(k.clone(), &half, 2000).unwrap();
        assert_eq!(fam.alpha, q(1, 2));
        let mut bad = half.clone();
        bad.delta = qj(3, 2);
        assert!(alpha_flat_family(k, &bad, 2000).unwrap_err().to_string().contains("(iii)"));
    }
}
