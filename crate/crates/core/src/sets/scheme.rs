use std::cmp::Ordering;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::num::{nat, Nat};

/// Largest bit length of an integer the engine will ever compare against a
/// generated endpoint. Endpoints above `2^(2^26)` are kept symbolic.
pub const QUERY_LIMIT_BITS: u64 = 1 << 26;

/// An endpoint that is either a concrete natural or known to exceed every
/// queryable integer (more than [`QUERY_LIMIT_BITS`] bits).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    Fin(Nat),
    Beyond,
}

impl Bound {
    pub fn fin(&self) -> Option<&Nat> {
        match self {
            Bound::Fin(n) => Some(n),
            Bound::Beyond => None,
        }
    }

    pub fn cmp_nat(&self, n: &Nat) -> Ordering {
        match self {
            Bound::Fin(v) => v.cmp(n),
            Bound::Beyond => Ordering::Greater,
        }
    }

    pub fn min_nat(&self, n: &Nat) -> Nat {
        match self {
            Bound::Fin(v) if v < n => v.clone(),
            _ => n.clone(),
        }
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bound {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Bound::Fin(a), Bound::Fin(b)) => a.cmp(b),
            (Bound::Fin(_), Bound::Beyond) => Ordering::Less,
            (Bound::Beyond, Bound::Fin(_)) => Ordering::Greater,
            (Bound::Beyond, Bound::Beyond) => Ordering::Equal,
        }
    }
}

pub fn check_queryable(n: &Nat) -> Result<()> {
    if n.bits() > QUERY_LIMIT_BITS {
        return Err(Error::GeneratorExhausted(format!(
            "query with {} bits exceeds the {}-bit endpoint limit",
            n.bits(),
            QUERY_LIMIT_BITS
        )));
    }
    Ok(())
}

fn factorial_memo(n: usize) -> Nat {
    static MEMO: OnceLock<Mutex<Vec<Nat>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(vec![Nat::one()]));
    let mut v = memo.lock().expect("factorial memo poisoned");
    while v.len() <= n {
        let k = v.len();
        let next = &v[k - 1] * nat(k as u64);
        v.push(next);
    }
    v[n].clone()
}

/// A strictly increasing sequence `a_1 < a_2 < …` with `a_0 := 0`, cutting
/// **N** into blocks `A_n = (a_{n−1}, a_n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockScheme {
    /// `a_n = n!`
    Factorial,
    /// `a_1 = 1`, `a_{n+1} = 2^{a_n}`
    Tower,
    Explicit(Vec<Nat>),
}

impl BlockScheme {
    pub fn named(name: &str) -> Result<Self> {
        match name {
            "factorial" => Ok(BlockScheme::Factorial),
            "tower" => Ok(BlockScheme::Tower),
            other => Err(Error::Validation(format!("unknown block scheme `{other}`"))),
        }
    }

    pub fn explicit(values: Vec<Nat>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Validation("explicit block scheme is empty".into()));
        }
        if values[0].is_zero() {
            return Err(Error::Validation("block scheme entries must be positive".into()));
        }
        for w in values.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Validation(format!("block scheme not strictly increasing: {} then {}", w[0], w[1])));
            }
        }
        Ok(BlockScheme::Explicit(values))
    }

    pub fn name(&self) -> Option<&'static str> {
        match self {
            BlockScheme::Factorial => Some("factorial"),
            BlockScheme::Tower => Some("tower"),
            BlockScheme::Explicit(_) => None,
        }
    }

    /// `a_n`, with `a_0 = 0`.
    pub fn a(&self, n: u64) -> Result<Bound> {
        if n == 0 {
            return Ok(Bound::Fin(Nat::zero()));
        }
        match self {
            BlockScheme::Factorial => Ok(Bound::Fin(factorial_memo(n as usize))),
            BlockScheme::Tower => {
                let mut a = Nat::one();
                for _ in 1..n {
                    if a.bits() > 32 || a > nat(QUERY_LIMIT_BITS) {
                        return Ok(Bound::Beyond);
                    }
                    let e = u64::try_from(&a).expect("checked above");
                    a = Nat::one() << e;
                }
                Ok(Bound::Fin(a))
            }
            BlockScheme::Explicit(v) => v
                .get((n - 1) as usize)
                .cloned()
                .map(Bound::Fin)
                .ok_or_else(|| Error::GeneratorExhausted(format!("explicit scheme has no a_{n}"))),
        }
    }

    /// Number of terms, if the scheme is finite.
    pub fn len(&self) -> Option<u64> {
        match self {
            BlockScheme::Explicit(v) => Some(v.len() as u64),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Whether `a_n / a_{n+1} → 0` holds by construction.
    pub fn ratio_tends_to_zero(&self) -> bool {
        matches!(self, BlockScheme::Factorial | BlockScheme::Tower)
    }

    /// The block index `k ≥ 1` with `a_{k−1} < n ≤ a_k`.
    pub fn block_of(&self, n: &Nat) -> Result<u64> {
        if n.is_zero() {
            return Err(Error::Precondition("block_of needs n ≥ 1".into()));
        }
        check_queryable(n)?;
        let mut k = 1;
        loop {
            match self.a(k)? {
                Bound::Beyond => return Ok(k),
                Bound::Fin(v) if &v >= n => return Ok(k),
                _ => k += 1,
            }
        }
    }

    /// Block lengths `|A_k| = a_k − a_{k−1}`.
    pub fn block_len(&self, k: u64) -> Result<Bound> {
        let hi = self.a(k)?;
        let lo = self.a(k - 1)?;
        Ok(match (hi, lo) {
            (Bound::Fin(h), Bound::Fin(l)) => Bound::Fin(h - l),
            _ => Bound::Beyond,
        })
    }

    /// The first `count` terms `a_1..a_count` (stops early at a symbolic term).
    pub fn prefix(&self, count: u64) -> Result<Vec<Bound>> {
        let mut out = Vec::new();
        for k in 1..=count {
            let v = self.a(k)?;
            let stop = v == Bound::Beyond;
            out.push(v);
            if stop {
                break;
            }
        }
        Ok(out)
    }
}
