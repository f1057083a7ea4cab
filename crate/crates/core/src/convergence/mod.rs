//! Verdicts for ideal, ideal-statistical and `(I, μ)` convergence.
//!
//! Every ideal supported here contains the finite sets, and every supported
//! submeasure sequence sends finite sets to 0, so an ordinarily convergent
//! sequence converges in every mode.

pub mod sequence;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::Result;
use crate::functionals::submeasure::Submeasure;
use crate::ideals::{decide_j, DeltaEntry, Ideal};
use crate::num::{fmt_q, Q};
use crate::sets::SymbolicSet;
use crate::verdict::Verdict;
pub use sequence::{Formula, SeqSpec, SymbolicSequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Ideal,
    Istat,
    Imu,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    CertifiedConverges,
    CertifiedDiverges,
    Undecided,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::CertifiedConverges => 0,
            Outcome::CertifiedDiverges => 1,
            Outcome::Undecided => 2,
        }
    }

    pub fn is_certified(self) -> bool {
        self != Outcome::Undecided
    }
}

/// Why an `ε` row is present.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    /// A configured grid value.
    Grid,
    /// A value of `|x_n − ℓ|`; for finitely-valued sequences these cover every `ε`.
    Deviation,
    /// `{n : x_n ≠ ℓ}`, which contains every deviation set.
    Support,
    /// `x_n → ℓ`, so every deviation set is finite.
    Ordinary,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpsEntry {
    pub eps: String,
    pub role: Role,
    pub deviation_set: String,
    #[serde(flatten)]
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub deltas: Vec<DeltaEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub mode: Mode,
    pub sequence: String,
    pub ideal: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub submeasure: Option<String>,
    pub limit: String,
    pub horizon: u64,
    pub eps_grid: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub delta_grid: Vec<String>,
    pub entries: Vec<EpsEntry>,
    pub outcome: Outcome,
}

impl ConvergenceReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The row for a given `ε`, if present.
    pub fn entry(&self, eps: &Q) -> Option<&EpsEntry> {
        let key = fmt_q(eps);
        self.entries.iter().find(|e| e.eps == key)
    }
}

type Decider<'a> = dyn FnMut(&SymbolicSet) -> Result<(Verdict, Vec<DeltaEntry>)> + 'a;

struct Cache<'a> {
    seen: Vec<(SymbolicSet, (Verdict, Vec<DeltaEntry>))>,
    decide: &'a mut Decider<'a>,
}

impl<'a> Cache<'a> {
    fn get(&mut self, d: &SymbolicSet) -> Result<(Verdict, Vec<DeltaEntry>)> {
        if let Some((_, r)) = self.seen.iter().find(|(s, _)| s == d) {
            return Ok(r.clone());
        }
        let r = (self.decide)(d)?;
        self.seen.push((d.clone(), r.clone()));
        Ok(r)
    }
}

fn evaluate<'a>(
    x: &SymbolicSequence,
    limit: &Q,
    cfg: &RunConfig,
    decide: &'a mut Decider<'a>,
) -> Result<(Vec<EpsEntry>, Outcome)> {
    let mut cache = Cache { seen: Vec::new(), decide };
    let mut entries = Vec::new();
    let grid = cfg.eps();
    for eps in &grid {
        let d = x.deviation_set(limit, eps)?;
        let (verdict, deltas) = cache.get(&d)?;
        entries.push(EpsEntry { eps: fmt_q(eps), role: Role::Grid, deviation_set: d.describe(), verdict, deltas });
    }
    let mut covered = false;
    if let Some(values) = x.finite_values() {
        let mut devs: Vec<Q> = values.iter().map(|v| (v - limit).abs()).filter(|v| v.is_positive()).collect();
        devs.sort();
        devs.dedup();
        for v in &devs {
            if !grid.contains(v) {
                let d = x.deviation_set(limit, v)?;
                let (verdict, deltas) = cache.get(&d)?;
                entries.push(EpsEntry {
                    eps: fmt_q(v),
                    role: Role::Deviation,
                    deviation_set: d.describe(),
                    verdict,
                    deltas,
                });
            }
        }
        covered = devs.iter().all(|v| entries.iter().any(|e| e.eps == fmt_q(v) && e.verdict.is_in()));
    }
    if x.ordinary_limit().as_ref() == Some(limit) {
        entries.push(EpsEntry {
            eps: "all".into(),
            role: Role::Ordinary,
            deviation_set: "finite for every ε".into(),
            verdict: Verdict::inside(format!("x_n → {}", fmt_q(limit))),
            deltas: Vec::new(),
        });
        covered = true;
    }
    if let Some(s) = x.support_set(limit)? {
        let (verdict, deltas) = cache.get(&s)?;
        // a support outside the ideal says nothing about the individual D_ε
        let verdict = match verdict {
            Verdict::CertifiedOut { witness } => {
                Verdict::undecided(cfg.horizon, format!("support not in the ideal ({witness}); not decisive"))
            }
            v => v,
        };
        covered |= verdict.is_in();
        entries.push(EpsEntry { eps: "0+".into(), role: Role::Support, deviation_set: s.describe(), verdict, deltas });
    }
    let diverges = entries.iter().any(|e| matches!(e.role, Role::Grid | Role::Deviation) && e.verdict.is_out());
    let outcome = if diverges {
        Outcome::CertifiedDiverges
    } else if covered {
        Outcome::CertifiedConverges
    } else {
        Outcome::Undecided
    };
    Ok((entries, outcome))
}

fn grid_strings(g: &[Q]) -> Vec<String> {
    g.iter().map(fmt_q).collect()
}

/// `x →_I ℓ`: every `D_ε = {n : |x_n − ℓ| ≥ ε}` lies in `I`.
pub fn ideal_limit(x: &SymbolicSequence, ideal: &Ideal, limit: &Q, cfg: &RunConfig) -> Result<ConvergenceReport> {
    let mut decide = |d: &SymbolicSet| Ok((ideal.decide(d, cfg)?, Vec::new()));
    let (entries, outcome) = evaluate(x, limit, cfg, &mut decide)?;
    Ok(ConvergenceReport {
        mode: Mode::Ideal,
        sequence: x.to_json(),
        ideal: ideal.name(),
        submeasure: None,
        limit: fmt_q(limit),
        horizon: cfg.horizon,
        eps_grid: grid_strings(&cfg.eps()),
        delta_grid: Vec::new(),
        entries,
        outcome,
    })
}

/// `(I, μ)`-convergence: `{n : μ_n(D_ε) ≥ δ} ∈ I` for all `ε, δ > 0`.
pub fn imu_limit(
    x: &SymbolicSequence,
    ideal: &Ideal,
    mu: &Submeasure,
    limit: &Q,
    cfg: &RunConfig,
) -> Result<ConvergenceReport> {
    let mut decide = |d: &SymbolicSet| {
        let j = decide_j(ideal, mu, d, cfg)?;
        Ok((j.verdict, j.entries))
    };
    let (entries, outcome) = evaluate(x, limit, cfg, &mut decide)?;
    Ok(ConvergenceReport {
        mode: Mode::Imu,
        sequence: x.to_json(),
        ideal: ideal.name(),
        submeasure: Some(mu.to_json()),
        limit: fmt_q(limit),
        horizon: cfg.horizon,
        eps_grid: grid_strings(&cfg.eps()),
        delta_grid: grid_strings(&cfg.deltas()),
        entries,
        outcome,
    })
}

/// `I`-statistical convergence: `(I, λ)`-convergence for the uniform densities.
pub fn istat_limit(x: &SymbolicSequence, ideal: &Ideal, limit: &Q, cfg: &RunConfig) -> Result<ConvergenceReport> {
    let mut r = imu_limit(x, ideal, &Submeasure::Uniform, limit, cfg)?;
    r.mode = Mode::Istat;
    r.submeasure = None;
    Ok(r)
}

/// Statistical convergence.
pub fn stat_limit(x: &SymbolicSequence, limit: &Q, cfg: &RunConfig) -> Result<ConvergenceReport> {
    istat_limit(x, &Ideal::Fin, limit, cfg)
}

/// One sequence/limit pair where a harness found a contradiction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Falsification {
    pub sequence: String,
    pub limit: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarnessReport {
    pub harness: String,
    pub checked: usize,
    /// Both sides certified and consistent.
    pub confirmed: usize,
    /// The hypothesis side did not certify convergence.
    pub vacuous: usize,
    pub undecided: usize,
    pub falsifications: Vec<Falsification>,
}

impl HarnessReport {
    fn new(name: impl Into<String>) -> Self {
        HarnessReport {
            harness: name.into(),
            checked: 0,
            confirmed: 0,
            vacuous: 0,
            undecided: 0,
            falsifications: Vec::new(),
        }
    }

    /// Records `premise ⇒ conclusion` for convergence outcomes.
    fn implication(&mut self, x: &SymbolicSequence, limit: &Q, premise: Outcome, conclusion: Outcome, what: &str) {
        self.checked += 1;
        match (premise, conclusion) {
            (Outcome::CertifiedConverges, Outcome::CertifiedConverges) => self.confirmed += 1,
            (Outcome::CertifiedConverges, Outcome::CertifiedDiverges) => self.falsifications.push(Falsification {
                sequence: x.to_json(),
                limit: fmt_q(limit),
                detail: what.into(),
            }),
            (Outcome::CertifiedConverges, Outcome::Undecided) => self.undecided += 1,
            _ => self.vacuous += 1,
        }
    }

    /// Records agreement of two certified outcomes.
    fn agreement(&mut self, x: &SymbolicSequence, limit: &Q, a: Outcome, b: Outcome, what: &str) {
        self.checked += 1;
        if a.is_certified() && b.is_certified() {
            if a == b {
                self.confirmed += 1;
            } else {
                self.falsifications.push(Falsification {
                    sequence: x.to_json(),
                    limit: fmt_q(limit),
                    detail: format!("{what}: {a:?} vs {b:?}"),
                });
            }
        } else {
            self.undecided += 1;
        }
    }

    pub fn passed(&self) -> bool {
        self.falsifications.is_empty()
    }
}

/// `Z_μ`-convergence implies `(Z_ν, μ)`-convergence.
pub fn implication_harness(
    corpus: &[SymbolicSequence],
    mu: &Submeasure,
    nu: &Submeasure,
    limits: &[Q],
    cfg: &RunConfig,
) -> Result<HarnessReport> {
    let mut r = HarnessReport::new(format!("z-mu implies (z-nu, mu): mu = {}, nu = {}", mu.name(), nu.name()));
    for x in corpus {
        for l in limits {
            let a = ideal_limit(x, &Ideal::ZMu(mu.clone()), l, cfg)?.outcome;
            if a != Outcome::CertifiedConverges {
                r.implication(x, l, a, Outcome::Undecided, "");
                continue;
            }
            let b = imu_limit(x, &Ideal::ZMu(nu.clone()), mu, l, cfg)?.outcome;
            r.implication(x, l, a, b, "Z_μ-convergent but (Z_ν, μ)-divergent");
        }
    }
    Ok(r)
}

/// `I ⊆ J` gives `(I, μ)`-convergence ⇒ `(J, μ)`-convergence.
pub fn monotonicity_harness(
    corpus: &[SymbolicSequence],
    smaller: &Ideal,
    larger: &Ideal,
    mu: &Submeasure,
    limits: &[Q],
    cfg: &RunConfig,
) -> Result<HarnessReport> {
    let mut r = HarnessReport::new(format!("{} ⊆ {} under {}", smaller.name(), larger.name(), mu.name()));
    for x in corpus {
        for l in limits {
            let a = imu_limit(x, smaller, mu, l, cfg)?.outcome;
            if a != Outcome::CertifiedConverges {
                r.implication(x, l, a, Outcome::Undecided, "");
                continue;
            }
            let b = imu_limit(x, larger, mu, l, cfg)?.outcome;
            r.implication(x, l, a, b, "convergent for the smaller ideal, divergent for the larger");
        }
    }
    Ok(r)
}

/// `ν_n ≤ μ_n` gives `(I, μ)`-convergence ⇒ `(I, ν)`-convergence. The
/// domination is checked on every deviation set of the grid for `n ≤ check_upto`.
pub fn domination_harness(
    corpus: &[SymbolicSequence],
    ideal: &Ideal,
    mu: &Submeasure,
    nu: &Submeasure,
    limits: &[Q],
    check_upto: u64,
    cfg: &RunConfig,
) -> Result<HarnessReport> {
    let mut r = HarnessReport::new(format!("{} dominates {} for {}", mu.name(), nu.name(), ideal.name()));
    for x in corpus {
        for l in limits {
            for eps in cfg.eps() {
                let d = x.deviation_set(l, &eps)?;
                for n in 1..=check_upto {
                    let big = crate::num::nat(1u64 << 20);
                    if nu.eval_clipped(n, &d, Some(&big))? > mu.eval_clipped(n, &d, Some(&big))? {
                        r.falsifications.push(Falsification {
                            sequence: x.to_json(),
                            limit: fmt_q(l),
                            detail: format!("ν_{n} > μ_{n} on D_{}: domination hypothesis fails", fmt_q(&eps)),
                        });
                        return Ok(r);
                    }
                }
            }
            let a = imu_limit(x, ideal, mu, l, cfg)?.outcome;
            if a != Outcome::CertifiedConverges {
                r.implication(x, l, a, Outcome::Undecided, "");
                continue;
            }
            let b = imu_limit(x, ideal, nu, l, cfg)?.outcome;
            r.implication(x, l, a, b, "(I, μ)-convergent but (I, ν)-divergent");
        }
    }
    Ok(r)
}

/// `(I, μ)`-convergence agrees with `J(I, μ)`-convergence.
pub fn equivalence_harness(
    corpus: &[SymbolicSequence],
    ideal: &Ideal,
    mu: &Submeasure,
    limits: &[Q],
    cfg: &RunConfig,
) -> Result<HarnessReport> {
    let j = Ideal::j_of(ideal.clone(), mu.clone());
    let mut r = HarnessReport::new(format!("(I, μ) vs J(I, μ): I = {}, μ = {}", ideal.name(), mu.name()));
    for x in corpus {
        for l in limits {
            let a = imu_limit(x, ideal, mu, l, cfg)?.outcome;
            let b = ideal_limit(x, &j, l, cfg)?.outcome;
            r.agreement(x, l, a, b, "imu vs J-convergence");
        }
    }
    Ok(r)
}

/// `I`-statistical convergence agrees with statistical convergence.
pub fn statistical_agreement_harness(
    corpus: &[SymbolicSequence],
    ideal: &Ideal,
    limits: &[Q],
    cfg: &RunConfig,
) -> Result<HarnessReport> {
    let mut r = HarnessReport::new(format!("{}-statistical vs statistical", ideal.name()));
    for x in corpus {
        for l in limits {
            let a = istat_limit(x, ideal, l, cfg)?.outcome;
            let b = stat_limit(x, l, cfg)?.outcome;
            r.agreement(x, l, a, b, "istat vs stat");
        }
    }
    Ok(r)
}

/// No sequence converges to two different limits under a proper ideal.
pub fn uniqueness_harness(
    corpus: &[SymbolicSequence],
    ideal: &Ideal,
    limits: &[Q],
    cfg: &RunConfig,
) -> Result<HarnessReport> {
    let mut r = HarnessReport::new(format!("limit uniqueness under {}", ideal.name()));
    for x in corpus {
        let conv: Vec<&Q> = limits
            .iter()
            .filter(|l| matches!(ideal_limit(x, ideal, l, cfg).map(|r| r.outcome), Ok(Outcome::CertifiedConverges)))
            .collect();
        r.checked += 1;
        if conv.len() > 1 {
            r.falsifications.push(Falsification {
                sequence: x.to_json(),
                limit: conv.iter().map(|l| fmt_q(l)).collect::<Vec<_>>().join(", "),
                detail: "converges to several limits".into(),
            });
        } else {
            r.confirmed += 1;
        }
    }
    Ok(r)
}

/// `limit` as `0` for convenience in callers that sweep `{0, 1}`.
pub fn zero_one() -> Vec<Q> {
    vec![Q::zero(), Q::from_integer(1.into())]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::q;

    fn cfg() -> RunConfig {
        RunConfig::with_horizon(10_000)
    }

    fn seq(s: &str) -> SymbolicSequence {
        SymbolicSequence::parse(s).unwrap()
    }

    #[test]
    fn ideal_mode() {
        let c = cfg();
        let sq = seq("indicator:squares");
        assert_eq!(ideal_limit(&sq, &Ideal::Fin, &q(0, 1), &c).unwrap().outcome, Outcome::CertifiedDiverges);
        assert_eq!(ideal_limit(&sq, &Ideal::Zeta, &q(0, 1), &c).unwrap().outcome, Outcome::CertifiedConverges);
        assert_eq!(
            ideal_limit(&seq("constant:3"), &Ideal::Fin, &q(3, 1), &c).unwrap().outcome,
            Outcome::CertifiedConverges
        );
        let fact = seq("indicator:factorial");
        assert_eq!(ideal_limit(&fact, &Ideal::Zeta, &q(0, 1), &c).unwrap().outcome, Outcome::CertifiedDiverges);
    }

    #[test]
    fn statistical_modes() {
        let c = cfg();
        let fact = seq("indicator:factorial");
        for l in [q(0, 1), q(1, 1)] {
            assert_eq!(stat_limit(&fact, &l, &c).unwrap().outcome, Outcome::CertifiedDiverges);
            assert_eq!(istat_limit(&fact, &Ideal::Zeta, &l, &c).unwrap().outcome, Outcome::CertifiedDiverges);
        }
        let sq = seq("indicator:squares");
        assert_eq!(stat_limit(&sq, &q(0, 1), &c).unwrap().outcome, Outcome::CertifiedConverges);
        assert_eq!(stat_limit(&seq("tent:log"), &q(0, 1), &c).unwrap().outcome, Outcome::CertifiedConverges);
        assert_eq!(stat_limit(&seq("tent:2"), &q(0, 1), &c).unwrap().outcome, Outcome::CertifiedDiverges);
        assert_eq!(stat_limit(&seq("inv-log"), &q(0, 1), &c).unwrap().outcome, Outcome::CertifiedConverges);
    }

    #[test]
    fn upper_density_level_set_is_everything() {
        let c = cfg();
        let fact = seq("indicator:factorial");
        let r = imu_limit(&fact, &Ideal::Fin, &Submeasure::UpperDensity, &q(1, 1), &c).unwrap();
        let e = r.entry(&q(1, 2)).unwrap();
        let row = e.deltas.iter().find(|d| d.delta == "1/2").unwrap();
        assert_eq!(row.level_set, "N");
        assert_eq!(r.outcome, Outcome::CertifiedDiverges);
    }
}
