//! Wire format for [`SymbolicSet`].
//!
//! ```text
//! {"kind":"residue","mod":2,"res":0}
//! {"kind":"intervals","gen":"factorial"}
//! {"kind":"intervals","gen":{"name":"geometric","base":3,"theta":"1/2","start":1}}
//! {"kind":"intervals","endpoints":[[2,6],[24,120]]}
//! {"kind":"fiber2","k":2}
//! {"kind":"union","of":[...]}   {"kind":"intersection","of":[...]}
//! {"kind":"complement","of":{...}}
//! {"kind":"finite","elems":[5,9]}
//! ```

use serde::{Deserialize, Serialize};

use super::generators::{Generator, IntervalFamily, Schedule, TentGeometry};
use super::scheme::BlockScheme;
use super::SymbolicSet;
use crate::error::{Error, Result};
use crate::num::{NatJson, QJson};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SetSpec {
    Residue {
        #[serde(rename = "mod")]
        modulus: NatJson,
        res: NatJson,
    },
    Intervals {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gen: Option<GenSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        endpoints: Option<Vec<(NatJson, NatJson)>>,
    },
    Fiber2 {
        k: u32,
    },
    Union {
        of: Vec<SetSpec>,
    },
    Intersection {
        of: Vec<SetSpec>,
    },
    Complement {
        of: Box<SetSpec>,
    },
    Finite {
        elems: Vec<NatJson>,
    },
}

/// Block schemes travel as `"factorial"`, `"tower"`, or an explicit list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SchemeSpec {
    Named(String),
    Explicit(Vec<NatJson>),
}

impl SchemeSpec {
    pub fn build(&self) -> Result<BlockScheme> {
        match self {
            SchemeSpec::Named(n) => BlockScheme::named(n),
            SchemeSpec::Explicit(v) => BlockScheme::explicit(v.iter().map(|x| x.0.clone()).collect()),
        }
    }

    pub fn of(s: &BlockScheme) -> Self {
        match s {
            BlockScheme::Explicit(v) => SchemeSpec::Explicit(v.iter().cloned().map(NatJson).collect()),
            named => SchemeSpec::Named(named.name().expect("named scheme").to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScheduleSpec {
    Named(String),
    Const {
        #[serde(rename = "const")]
        d: QJson,
    },
}

impl ScheduleSpec {
    pub fn build(&self) -> Result<Schedule> {
        match self {
            ScheduleSpec::Named(n) if n == "log" => Ok(Schedule::Log),
            ScheduleSpec::Named(n) => Err(Error::Validation(format!("unknown schedule `{n}`"))),
            ScheduleSpec::Const { d } => Ok(Schedule::Const(d.0.clone())),
        }
    }

    pub fn of(s: &Schedule) -> Self {
        match s {
            Schedule::Log => ScheduleSpec::Named("log".into()),
            Schedule::Const(d) => ScheduleSpec::Const { d: QJson(d.clone()) },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GenSpec {
    Named(String),
    Param(GenParams),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GenParams {
    Alternating {
        scheme: SchemeSpec,
    },
    Geometric {
        base: u64,
        theta: QJson,
        start: u32,
    },
    Blocks {
        scheme: SchemeSpec,
        #[serde(default)]
        prefix: Vec<bool>,
        cycle: Vec<bool>,
    },
    TentLevel {
        schedule: ScheduleSpec,
        threshold: QJson,
        #[serde(default)]
        strict: bool,
    },
}

impl GenSpec {
    pub fn build(&self) -> Result<Generator> {
        match self {
            GenSpec::Named(n) => match n.as_str() {
                "factorial" => Ok(Generator::Alternating(BlockScheme::Factorial)),
                "tower" => Ok(Generator::Alternating(BlockScheme::Tower)),
                "squares" => Ok(Generator::Squares),
                "pow2" => Ok(Generator::Pow2),
                "factorial-double" => Ok(Generator::FactorialDouble),
                "sqrt-windows" => Ok(Generator::SqrtWindows),
                other => Err(Error::Validation(format!("unknown generator `{other}`"))),
            },
            GenSpec::Param(p) => match p {
                GenParams::Alternating { scheme } => Ok(Generator::Alternating(scheme.build()?)),
                GenParams::Geometric { base, theta, start } => {
                    Ok(Generator::Geometric { base: *base, theta: theta.0.clone(), start: *start })
                }
                GenParams::Blocks { scheme, prefix, cycle } => {
                    Ok(Generator::Blocks { scheme: scheme.build()?, prefix: prefix.clone(), cycle: cycle.clone() })
                }
                GenParams::TentLevel { schedule, threshold, strict } => Ok(Generator::TentLevel {
                    geometry: TentGeometry::fit(schedule.build()?)?,
                    threshold: threshold.0.clone(),
                    strict: *strict,
                }),
            },
        }
    }

    fn of(g: &Generator) -> Option<Self> {
        Some(match g {
            Generator::Alternating(BlockScheme::Factorial) => GenSpec::Named("factorial".into()),
            Generator::Alternating(BlockScheme::Tower) => GenSpec::Named("tower".into()),
            Generator::Alternating(s) => GenSpec::Param(GenParams::Alternating { scheme: SchemeSpec::of(s) }),
            Generator::Squares => GenSpec::Named("squares".into()),
            Generator::Pow2 => GenSpec::Named("pow2".into()),
            Generator::FactorialDouble => GenSpec::Named("factorial-double".into()),
            Generator::SqrtWindows => GenSpec::Named("sqrt-windows".into()),
            Generator::Geometric { base, theta, start } => {
                GenSpec::Param(GenParams::Geometric { base: *base, theta: QJson(theta.clone()), start: *start })
            }
            Generator::Blocks { scheme, prefix, cycle } => GenSpec::Param(GenParams::Blocks {
                scheme: SchemeSpec::of(scheme),
                prefix: prefix.clone(),
                cycle: cycle.clone(),
            }),
            Generator::TentLevel { geometry, threshold, strict } => GenSpec::Param(GenParams::TentLevel {
                schedule: ScheduleSpec::of(&geometry.schedule),
                threshold: QJson(threshold.clone()),
                strict: *strict,
            }),
            Generator::Explicit(_) => return None,
        })
    }
}

impl SetSpec {
    pub fn build(&self) -> Result<SymbolicSet> {
        match self {
            SetSpec::Residue { modulus, res } => SymbolicSet::residue_nat(modulus.0.clone(), res.0.clone()),
            SetSpec::Intervals { gen, endpoints } => match (gen, endpoints) {
                (Some(g), None) => SymbolicSet::intervals(g.build()?),
                (None, Some(e)) => SymbolicSet::intervals(Generator::Explicit(
                    e.iter().map(|(l, r)| (l.0.clone(), r.0.clone())).collect(),
                )),
                _ => Err(Error::Schema("intervals need exactly one of `gen` or `endpoints`".into())),
            },
            SetSpec::Fiber2 { k } => Ok(SymbolicSet::Fiber2(*k)),
            SetSpec::Union { of } => Ok(SymbolicSet::Union(of.iter().map(|s| s.build()).collect::<Result<_>>()?)),
            SetSpec::Intersection { of } => {
                Ok(SymbolicSet::Intersection(of.iter().map(|s| s.build()).collect::<Result<_>>()?))
            }
            SetSpec::Complement { of } => Ok(SymbolicSet::Complement(Box::new(of.build()?))),
            SetSpec::Finite { elems } => SymbolicSet::finite_nat(elems.iter().map(|e| e.0.clone()).collect()),
        }
    }

    pub fn of(s: &SymbolicSet) -> Self {
        match s {
            SymbolicSet::Finite(v) => SetSpec::Finite { elems: v.iter().cloned().map(NatJson).collect() },
            SymbolicSet::Residue { modulus, residue } => {
                SetSpec::Residue { modulus: NatJson(modulus.clone()), res: NatJson(residue.clone()) }
            }
            SymbolicSet::Intervals(f) => interval_spec(f),
            SymbolicSet::Fiber2(k) => SetSpec::Fiber2 { k: *k },
            SymbolicSet::Union(cs) => SetSpec::Union { of: cs.iter().map(SetSpec::of).collect() },
            SymbolicSet::Intersection(cs) => SetSpec::Intersection { of: cs.iter().map(SetSpec::of).collect() },
            SymbolicSet::Complement(c) => SetSpec::Complement { of: Box::new(SetSpec::of(c)) },
        }
    }
}

fn interval_spec(f: &IntervalFamily) -> SetSpec {
    match GenSpec::of(f.generator()) {
        Some(g) => SetSpec::Intervals { gen: Some(g), endpoints: None },
        None => {
            let Generator::Explicit(iv) = f.generator() else { unreachable!() };
            SetSpec::Intervals {
                gen: None,
                endpoints: Some(iv.iter().map(|(l, r)| (NatJson(l.clone()), NatJson(r.clone()))).collect()),
            }
        }
    }
}

impl Serialize for SymbolicSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SetSpec::of(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymbolicSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        SetSpec::deserialize(d)?.build().map_err(serde::de::Error::custom)
    }
}

impl SymbolicSet {
    /// Parses the JSON form. Errors name the offending node as a JSON pointer
    /// (or the line and column for syntax errors).
    pub fn from_json(text: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("set JSON: {e}")))?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &serde_json::Value) -> Result<Self> {
        build_at(v, "")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("set serialization is infallible")
    }
}

fn build_at(v: &serde_json::Value, path: &str) -> Result<SymbolicSet> {
    let at = |e: String| Error::Parse(format!("set JSON at `{}`: {e}", if path.is_empty() { "/" } else { path }));
    let kind = v.get("kind").and_then(|k| k.as_str()).ok_or_else(|| at("missing string field `kind`".into()))?;
    match kind {
        "union" | "intersection" => {
            let of = v.get("of").and_then(|o| o.as_array()).ok_or_else(|| at("`of` must be an array".into()))?;
            let children = of
                .iter()
                .enumerate()
                .map(|(i, c)| build_at(c, &format!("{path}/of/{i}")))
                .collect::<Result<Vec<_>>>()?;
            Ok(if kind == "union" { SymbolicSet::Union(children) } else { SymbolicSet::Intersection(children) })
        }
        "complement" => {
            let of = v.get("of").ok_or_else(|| at("missing field `of`".into()))?;
            Ok(SymbolicSet::Complement(Box::new(build_at(of, &format!("{path}/of"))?)))
        }
        _ => {
            let spec: SetSpec = serde_json::from_value(v.clone()).map_err(|e| at(e.to_string()))?;
            spec.build().map_err(|e| at(e.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn documented_forms_parse() {
        for text in [
            r#"{"kind":"residue","mod":2,"res":0}"#,
            r#"{"kind":"intervals","gen":"factorial"}"#,
            r#"{"kind":"intervals","endpoints":[[2,6],[24,120]]}"#,
            r#"{"kind":"fiber2","k":2}"#,
            r#"{"kind":"union","of":[{"kind":"fiber2","k":0},{"kind":"finite","elems":[2]}]}"#,
            r#"{"kind":"complement","of":{"kind":"finite","elems":[]}}"#,
            r#"{"kind":"finite","elems":[5,9]}"#,
            r#"{"kind":"intervals","gen":{"name":"geometric","base":3,"theta":{"num":"1","den":"2"},"start":1}}"#,
            r#"{"kind":"intervals","gen":{"name":"blocks","scheme":"tower","cycle":[true,false]}}"#,
            r#"{"kind":"intervals","gen":{"name":"tent-level","schedule":"log","threshold":"1/4"}}"#,
        ] {
            let s = SymbolicSet::from_json(text).unwrap();
            let again = SymbolicSet::from_json(&s.to_json()).unwrap();
            assert_eq!(s, again, "{text}");
        }
    }

    #[test]
    fn explicit_endpoints_count() {
        let s = SymbolicSet::from_json(r#"{"kind":"intervals","endpoints":[[2,6],[24,120]]}"#).unwrap();
        assert_eq!(s.count_u64(30).unwrap(), 12);
    }

    #[test]
    fn malformed_inputs_name_location() {
        let e = SymbolicSet::from_json(r#"{"kind":"union","of":[{"kind":"fiber2","k":1},{"kind":"residue","mod":2}]}"#)
            .unwrap_err();
        assert!(e.to_string().contains("/of/1"), "{e}");
        let e = SymbolicSet::from_json(r#"{"kind":"residue","mod":2"#).unwrap_err();
        assert!(e.to_string().contains("column"), "{e}");
        assert!(SymbolicSet::from_json(r#"{"kind":"residue","mod":2,"res":3}"#).is_err());
        assert!(SymbolicSet::from_json(r#"{"kind":"intervals"}"#).is_err());
        assert!(SymbolicSet::from_json(r#"{"kind":"finite","elems":[0]}"#).is_err());
        assert!(SymbolicSet::from_json(r#"{"kind":"intervals","gen":"primes"}"#).is_err());
    }

    fn leaf() -> impl Strategy<Value = SymbolicSet> {
        prop_oneof![
            (1u64..40, 0u64..40).prop_map(|(m, r)| SymbolicSet::residue(m, r % m).unwrap()),
            (0u32..6).prop_map(SymbolicSet::Fiber2),
            proptest::collection::vec(1u64..500, 0..6).prop_map(|v| SymbolicSet::finite(v).unwrap()),
            Just(SymbolicSet::factorial_set()),
            Just(SymbolicSet::squares()),
        ]
    }

    fn tree() -> impl Strategy<Value = SymbolicSet> {
        leaf().prop_recursive(3, 16, 3, |inner| {
            prop_oneof![
                proptest::collection::vec(inner.clone(), 1..3).prop_map(SymbolicSet::Union),
                proptest::collection::vec(inner.clone(), 1..3).prop_map(SymbolicSet::Intersection),
                inner.prop_map(|s| s.complement()),
            ]
        })
    }

    proptest! {
        #[test]
        fn json_round_trip_is_stable(s in tree()) {
            let text = s.to_json();
            let back = SymbolicSet::from_json(&text).unwrap();
            prop_assert_eq!(&back, &s);
            prop_assert_eq!(back.to_json(), text);
        }
    }
}
