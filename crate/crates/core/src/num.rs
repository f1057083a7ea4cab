//! Exact arithmetic helpers: big naturals, big rationals, and their JSON forms.
//!
//! Rationals travel through JSON as `{"num":"…","den":"…"}` with decimal
//! strings so that no value ever passes through a float.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Nat = BigUint;
pub type Q = BigRational;

pub fn nat(n: u64) -> Nat {
    Nat::from(n)
}

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn q_int(n: &Nat) -> Q {
    Q::from_integer(BigInt::from_biguint(Sign::Plus, n.clone()))
}

/// `num / den` for naturals; `den` must be nonzero.
pub fn q_frac(num: &Nat, den: &Nat) -> Q {
    Q::new(BigInt::from_biguint(Sign::Plus, num.clone()), BigInt::from_biguint(Sign::Plus, den.clone()))
}

pub fn to_int(n: &Nat) -> BigInt {
    BigInt::from_biguint(Sign::Plus, n.clone())
}

/// Floor of a nonnegative rational as a natural; negative inputs clamp to 0.
pub fn floor_nat(x: &Q) -> Nat {
    if x.is_negative() {
        return Nat::zero();
    }
    x.floor().to_integer().to_biguint().unwrap_or_default()
}

/// Ceiling of a rational as a natural; negative inputs clamp to 0.
pub fn ceil_nat(x: &Q) -> Nat {
    if x.is_negative() {
        return Nat::zero();
    }
    x.ceil().to_integer().to_biguint().unwrap_or_default()
}

/// `⌊c · n^α⌋` for rational `c ≥ 0` and `α = p/q > 0`, computed exactly.
pub fn floor_scaled_power(c: &Q, n: &Nat, alpha: &Q) -> Nat {
    if c.is_zero() || n.is_zero() {
        return Nat::zero();
    }
    let p = alpha.numer().to_u32().expect("alpha numerator fits u32");
    let qd = alpha.denom().to_u32().expect("alpha denominator fits u32");
    // floor(c n^{p/q}) = floor( (c^q n^p)^{1/q} ) = iroot_q(floor(c^q n^p))
    let inner = pow_q(c, qd) * q_int(&n.pow(p));
    floor_nat(&inner).nth_root(qd)
}

pub fn pow_q(x: &Q, e: u32) -> Q {
    let mut acc = Q::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Exact test of `value ≤ d / n^α` for `value, d ≥ 0` and rational `α = p/q`.
pub fn le_over_power(value: &Q, d: &Q, n: &Nat, alpha: &Q) -> bool {
    let p = alpha.numer().to_u32().expect("alpha numerator fits u32");
    let qd = alpha.denom().to_u32().expect("alpha denominator fits u32");
    // value^q * n^p <= d^q
    pow_q(value, qd) * q_int(&n.pow(p)) <= pow_q(d, qd)
}

/// Exact test of `value ≤ b · n^β` for `value, b ≥ 0` and rational `β = p/q ≥ 0`.
pub fn le_times_power(value: &Q, b: &Q, n: &Nat, beta: &Q) -> bool {
    let p = beta.numer().to_u32().expect("beta numerator fits u32");
    let qd = beta.denom().to_u32().expect("beta denominator fits u32");
    pow_q(value, qd) <= pow_q(b, qd) * q_int(&n.pow(p))
}

/// `d / n^α` rendered as a float, for reports only.
pub fn approx_over_power(d: &Q, n: &Nat, alpha: &Q) -> f64 {
    let nf = n.to_f64().unwrap_or(f64::INFINITY);
    to_f64(d) / nf.powf(to_f64(alpha))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"3"`, `"-1/2"`, or `"7/10"` into an exact rational.
pub fn parse_q(text: &str) -> Result<Q> {
    let t = text.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(n).map_err(|_| Error::Parse(format!("bad rational `{text}`")))?;
    let den = BigInt::from_str(d).map_err(|_| Error::Parse(format!("bad rational `{text}`")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{text}`")));
    }
    Ok(Q::new(num, den))
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// lcm of two positive naturals.
pub fn lcm(a: &Nat, b: &Nat) -> Nat {
    a.lcm(b)
}

/// 2-adic valuation of a positive integer.
pub fn nu2(n: &Nat) -> u64 {
    n.trailing_zeros().unwrap_or(0)
}

pub fn factorial(n: u64) -> Nat {
    (1..=n).fold(Nat::one(), |acc, k| acc * k)
}

/// Rational bounds `lo ≤ e^x ≤ hi` for rational `x ≥ 0`, with `hi − lo ≤ tol`.
pub fn exp_bounds(x: &Q, tol: &Q) -> (Q, Q) {
    assert!(!x.is_negative());
    // Taylor series with a geometric tail bound once terms start shrinking.
    let mut sum = Q::zero();
    let mut term = Q::one();
    let mut k: u64 = 0;
    loop {
        sum += &term;
        k += 1;
        term = &term * x / Q::from_integer(BigInt::from(k));
        let ratio = x / Q::from_integer(BigInt::from(k + 1));
        if ratio < q(1, 2) {
            // tail <= term / (1 - ratio) <= 2 term
            let tail = &term * Q::from_integer(BigInt::from(2));
            if tail <= *tol {
                return (sum.clone(), sum + tail);
            }
        }
    }
}

/// `⌊e^x⌋` for rational `x ≥ 0`, exact (e^x is never an integer for rational x > 0).
pub fn floor_exp(x: &Q) -> Nat {
    if x.is_zero() {
        return Nat::one();
    }
    let mut tol = q(1, 1 << 20);
    loop {
        let (lo, hi) = exp_bounds(x, &tol);
        let a = floor_nat(&lo);
        let b = floor_nat(&hi);
        if a == b {
            return a;
        }
        tol *= q(1, 1 << 16);
    }
}

/// Lower bound `ln 2 > 693/1000`, used to build rational minorants of `ln n`.
pub fn ln2_lower() -> Q {
    q(693, 1000)
}

/// Rational `m(n) ≤ ln n`: `(693/1000)·⌊log₂ n⌋`.
pub fn ln_lower(n: &Nat) -> Q {
    if n.is_zero() {
        return Q::zero();
    }
    ln2_lower() * Q::from_integer(BigInt::from(n.bits() - 1))
}

/// JSON wrapper for an exact rational.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QJson(pub Q);

impl From<Q> for QJson {
    fn from(x: Q) -> Self {
        QJson(x)
    }
}

impl fmt::Display for QJson {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_q(&self.0))
    }
}

impl Serialize for QJson {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Rational", 2)?;
        st.serialize_field("num", &self.0.numer().to_string())?;
        st.serialize_field("den", &self.0.denom().to_string())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for QJson {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Obj { num: IntText, den: IntText },
            Text(String),
            Int(i64),
        }
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum IntText {
            Text(String),
            Int(i64),
        }
        fn big(v: IntText) -> std::result::Result<BigInt, String> {
            match v {
                IntText::Int(i) => Ok(BigInt::from(i)),
                IntText::Text(s) => BigInt::from_str(s.trim()).map_err(|_| format!("bad integer `{s}`")),
            }
        }
        match Raw::deserialize(d)? {
            Raw::Obj { num, den } => {
                let n = big(num).map_err(de::Error::custom)?;
                let m = big(den).map_err(de::Error::custom)?;
                if m.is_zero() {
                    return Err(de::Error::custom("zero denominator"));
                }
                Ok(QJson(Q::new(n, m)))
            }
            Raw::Text(s) => parse_q(&s).map(QJson).map_err(de::Error::custom),
            Raw::Int(i) => Ok(QJson(Q::from_integer(BigInt::from(i)))),
        }
    }
}

/// JSON wrapper for a natural: a plain number when it fits `u64`, else a decimal string.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NatJson(pub Nat);

impl Serialize for NatJson {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_u64() {
            Some(v) => s.serialize_u64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for NatJson {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = NatJson;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a nonnegative integer or decimal string")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<NatJson, E> {
                Ok(NatJson(Nat::from(v)))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<NatJson, E> {
                u64::try_from(v).map(|v| NatJson(Nat::from(v))).map_err(|_| E::custom("negative integer"))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<NatJson, E> {
                Nat::from_str(v.trim()).map(NatJson).map_err(|_| E::custom(format!("bad natural `{v}`")))
            }
        }
        d.deserialize_any(V)
    }
}
