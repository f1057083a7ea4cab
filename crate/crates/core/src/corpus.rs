//! Named sets and sequences persisted as versioned JSON.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::convergence::sequence::{Formula, SeqSpec};
use crate::convergence::SymbolicSequence;
use crate::error::{Error, Result};
use crate::num::{nat, q};
use crate::sets::json::SetSpec;
use crate::sets::{BlockScheme, Generator, Schedule, SymbolicSet, TentGeometry};

pub const SCHEMA: &str = "idealstat-corpus/1";
pub const DEFAULT_SEED: u64 = 1;
pub const RANDOM_FAMILIES: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Set(SymbolicSet),
    Sequence(SymbolicSequence),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub name: String,
    pub item: Item,
}

impl Entry {
    fn set(name: &str, s: SymbolicSet) -> Self {
        Entry { name: name.into(), item: Item::Set(s) }
    }

    fn seq(name: &str, s: SymbolicSequence) -> Self {
        Entry { name: name.into(), item: Item::Sequence(s) }
    }

    /// Sets enter sequence sweeps as their indicators.
    pub fn sequence(&self) -> SymbolicSequence {
        match &self.item {
            Item::Set(s) => SymbolicSequence::Indicator(s.clone()),
            Item::Sequence(x) => x.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Corpus {
    pub seed: u64,
    pub entries: Vec<Entry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CorpusFile {
    schema: String,
    seed: u64,
    entries: Vec<serde_json::Value>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
enum EntryFile {
    Set { name: String, set: SetSpec },
    Sequence { name: String, sequence: SeqSpec },
}

impl Corpus {
    pub fn get(&self, name: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn sets(&self) -> Vec<(String, SymbolicSet)> {
        self.entries
            .iter()
            .filter_map(|e| match &e.item {
                Item::Set(s) => Some((e.name.clone(), s.clone())),
                Item::Sequence(_) => None,
            })
            .collect()
    }

    pub fn sequences(&self) -> Vec<(String, SymbolicSequence)> {
        self.entries.iter().map(|e| (e.name.clone(), e.sequence())).collect()
    }

    pub fn to_json(&self) -> String {
        let entries = self
            .entries
            .iter()
            .map(|e| {
                let f = match &e.item {
                    Item::Set(s) => EntryFile::Set { name: e.name.clone(), set: SetSpec::of(s) },
                    Item::Sequence(x) => EntryFile::Sequence { name: e.name.clone(), sequence: SeqSpec::of(x) },
                };
                serde_json::to_value(f).expect("entries serialize")
            })
            .collect();
        let file = CorpusFile { schema: SCHEMA.into(), seed: self.seed, entries };
        let mut out = serde_json::to_string_pretty(&file).expect("corpus serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CorpusFile = serde_json::from_str(text).map_err(|e| Error::Schema(format!("corpus: {e}")))?;
        if file.schema != SCHEMA {
            return Err(Error::Schema(format!("unsupported corpus schema `{}` (expected `{SCHEMA}`)", file.schema)));
        }
        let mut entries = Vec::with_capacity(file.entries.len());
        for (i, v) in file.entries.into_iter().enumerate() {
            let label = v.get("name").and_then(|n| n.as_str()).map(str::to_owned).unwrap_or_else(|| format!("#{i}"));
            let bad = |e: String| Error::Schema(format!("entry {i} (`{label}`): {e}"));
            let f: EntryFile = serde_json::from_value(v).map_err(|e| bad(e.to_string()))?;
            entries.push(match f {
                EntryFile::Set { name, set } => {
                    Entry { name, item: Item::Set(set.build().map_err(|e| bad(e.to_string()))?) }
                }
                EntryFile::Sequence { name, sequence } => {
                    Entry { name, item: Item::Sequence(sequence.build().map_err(|e| bad(e.to_string()))?) }
                }
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        for e in &entries {
            if !seen.insert(e.name.as_str()) {
                return Err(Error::Schema(format!("duplicate entry name `{}`", e.name)));
            }
        }
        Ok(Corpus { seed: file.seed, entries })
    }

    /// The corpus shipped with the crate (`data/corpus.json`).
    pub fn shipped() -> Result<Self> {
        Self::from_json(include_str!("../data/corpus.json"))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    /// The default corpus: fixed named sets and sequences plus seeded random
    /// interval families, residues and finite sets (50 entries).
    pub fn generate(seed: u64) -> Result<Self> {
        let mut e = fixed()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in 0..RANDOM_FAMILIES {
            e.push(Entry::set(&format!("random-family-{i}"), random_family(&mut rng, i)?));
        }
        for i in 0..4 {
            let m = rng.gen_range(2..=12u64);
            let r = rng.gen_range(0..m);
            e.push(Entry::set(&format!("random-residue-{i}"), SymbolicSet::residue(m, r)?));
        }
        for i in 0..3 {
            let len = rng.gen_range(1..=8usize);
            let elems: Vec<u64> = (0..len).map(|_| rng.gen_range(1..=10_000u64)).collect();
            e.push(Entry::set(&format!("random-finite-{i}"), SymbolicSet::finite(elems)?));
        }
        Ok(Corpus { seed, entries: e })
    }
}

fn ints(v: &[i64]) -> Vec<crate::num::Q> {
    v.iter().map(|&x| q(x, 1)).collect()
}

fn fixed() -> Result<Vec<Entry>> {
    let evens = SymbolicSet::residue(2, 0)?;
    let fact = SymbolicSet::factorial_set();
    let tent = |s: Schedule, t| -> Result<SymbolicSet> {
        SymbolicSet::intervals(Generator::TentLevel { geometry: TentGeometry::fit(s)?, threshold: t, strict: false })
    };
    let blocks = |scheme: BlockScheme, cycle: Vec<bool>| -> Result<SymbolicSet> {
        SymbolicSet::intervals(Generator::Blocks { scheme, prefix: Vec::new(), cycle })
    };
    Ok(vec![
        Entry::set("squares", SymbolicSet::squares()),
        Entry::set("evens", evens.clone()),
        Entry::set("odds", SymbolicSet::residue(2, 1)?),
        Entry::set("factorial-A", fact.clone()),
        Entry::set("factorial-A-complement", fact.clone().complement()),
        Entry::set("tower-A", SymbolicSet::intervals(Generator::Alternating(BlockScheme::Tower))?),
        Entry::set("tower-blocks", blocks(BlockScheme::Tower, vec![true, true, false])?),
        Entry::set("factorial-blocks", blocks(BlockScheme::Factorial, vec![true, true, false])?),
        Entry::set("pow2", SymbolicSet::intervals(Generator::Pow2)?),
        Entry::set("factorial-double", SymbolicSet::intervals(Generator::FactorialDouble)?),
        Entry::set("sqrt-windows", SymbolicSet::intervals(Generator::SqrtWindows)?),
        Entry::set("nu2-fiber-0", SymbolicSet::Fiber2(0)),
        Entry::set("nu2-fiber-1", SymbolicSet::Fiber2(1)),
        Entry::set("nu2-fiber-2", SymbolicSet::Fiber2(2)),
        Entry::set("nu2-fiber-3", SymbolicSet::Fiber2(3)),
        Entry::set("first-ten", SymbolicSet::finite(1..=10)?),
        Entry::set("empty", SymbolicSet::empty()),
        Entry::set("all", SymbolicSet::all()),
        Entry::set("residue-3-1", SymbolicSet::residue(3, 1)?),
        Entry::set(
            "squares-or-pow2",
            SymbolicSet::union(vec![SymbolicSet::squares(), SymbolicSet::intervals(Generator::Pow2)?]),
        ),
        Entry::set("evens-in-factorial-A", SymbolicSet::intersection(vec![evens, fact])),
        Entry::set("tent-log-level", tent(Schedule::Log, q(1, 4))?),
        Entry::set("tent-const-level", tent(Schedule::Const(q(2, 1)), q(1, 4))?),
        Entry::seq("zero", SymbolicSequence::Constant(q(0, 1))),
        Entry::seq("half", SymbolicSequence::Constant(q(1, 2))),
        Entry::seq("inv-log", SymbolicSequence::Formula(Formula::InvLog)),
        Entry::seq("inv-n", SymbolicSequence::Formula(Formula::InvPower { c: q(1, 1), p: 1 })),
        Entry::seq("three-over-n-squared", SymbolicSequence::Formula(Formula::InvPower { c: q(3, 1), p: 2 })),
        Entry::seq("tent-log", SymbolicSequence::Tent(TentGeometry::fit(Schedule::Log)?)),
        Entry::seq("tent-const", SymbolicSequence::Tent(TentGeometry::fit(Schedule::Const(q(2, 1)))?)),
        Entry::seq(
            "factorial-110",
            SymbolicSequence::BlockConstant {
                scheme: BlockScheme::Factorial,
                prefix: Vec::new(),
                cycle: ints(&[1, 1, 0]),
            },
        ),
        Entry::seq(
            "factorial-half-zero",
            SymbolicSequence::BlockConstant {
                scheme: BlockScheme::Factorial,
                prefix: Vec::new(),
                cycle: vec![q(1, 2), q(0, 1)],
            },
        ),
        Entry::seq(
            "tower-10",
            SymbolicSequence::BlockConstant { scheme: BlockScheme::Tower, prefix: Vec::new(), cycle: ints(&[1, 0]) },
        ),
    ])
}

fn random_family(rng: &mut ChaCha8Rng, i: usize) -> Result<SymbolicSet> {
    let gen = match i % 3 {
        0 => {
            let base = rng.gen_range(2..=4u64);
            let num = rng.gen_range(1..8i64);
            Generator::Geometric { base, theta: q(num, 8), start: rng.gen_range(1..=4) }
        }
        1 => {
            let scheme = if rng.gen_bool(0.5) { BlockScheme::Factorial } else { BlockScheme::Tower };
            let prefix: Vec<bool> = (0..rng.gen_range(0..=3)).map(|_| rng.gen_bool(0.5)).collect();
            let cycle: Vec<bool> = (0..rng.gen_range(1..=4)).map(|_| rng.gen_bool(0.5)).collect();
            Generator::Blocks { scheme, prefix, cycle }
        }
        _ => {
            let mut at = 0u64;
            let iv = (0..rng.gen_range(1..=5))
                .map(|_| {
                    let l = at + rng.gen_range(1..=500u64);
                    let r = l + rng.gen_range(0..=200u64);
                    at = r + 1;
                    (nat(l), nat(r))
                })
                .collect();
            Generator::Explicit(iv)
        }
    };
    SymbolicSet::intervals(gen)
}
