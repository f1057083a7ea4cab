//! Test-side oracles, written against the textbook definitions and sharing no
//! code with the engine beyond the JSON wire format.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use idealstat::SymbolicSet;

#[derive(Clone, Debug)]
pub enum Shape {
    Residue(u64, u64),
    Squares,
    Pow2,
    /// `⋃ [(2k)!, (2k+1)!]`
    FactorialA,
    /// `⋃ [a_{2k}, a_{2k+1}]` over the power tower
    TowerA,
    FactorialDouble,
    SqrtWindows,
    Geometric {
        base: u64,
        num: u64,
        den: u64,
        start: u32,
    },
    Blocks {
        tower: bool,
        prefix: Vec<bool>,
        cycle: Vec<bool>,
    },
    Fiber2(u32),
    Finite(Vec<u64>),
    Explicit(Vec<(u64, u64)>),
    Union(Vec<Shape>),
    Intersection(Vec<Shape>),
    Complement(Box<Shape>),
}

/// `a_0 = 0, a_1 = 1, a_2 = 2, a_3 = 4, a_4 = 16, a_5 = 65536`.
pub const TOWER: [u64; 6] = [0, 1, 2, 4, 16, 65536];

fn fact(k: u64) -> u64 {
    (1..=k).product()
}

/// `a_k` of the named scheme, `a_0 = 0`; `None` past `u64`.
pub fn scheme_a(tower: bool, k: u64) -> Option<u64> {
    if tower {
        TOWER.get(k as usize).copied()
    } else if k == 0 {
        Some(0)
    } else {
        (1..=k).try_fold(1u64, |acc, i| acc.checked_mul(i))
    }
}

fn mark(bits: &mut [bool], l: u64, r: u64) {
    let n = bits.len() as u64 - 1;
    for i in l.max(1)..=r.min(n) {
        bits[i as usize] = true;
    }
}

impl Shape {
    /// Membership of `1..=n` (index 0 unused).
    pub fn bitmap(&self, n: u64) -> Vec<bool> {
        let mut b = vec![false; n as usize + 1];
        match self {
            Shape::Residue(m, r) => (1..=n).filter(|i| i % m == *r).for_each(|i| b[i as usize] = true),
            Shape::Squares => (1..).map(|k: u64| k * k).take_while(|&s| s <= n).for_each(|s| b[s as usize] = true),
            Shape::Pow2 => (1..63).map(|k| 1u64 << k).take_while(|&s| s <= n).for_each(|s| b[s as usize] = true),
            Shape::FactorialA => {
                for k in 1..=9 {
                    mark(&mut b, fact(2 * k), fact(2 * k + 1));
                }
            }
            Shape::TowerA => {
                mark(&mut b, TOWER[2], TOWER[3]);
                mark(&mut b, TOWER[4], TOWER[5]);
            }
            Shape::FactorialDouble => {
                for m in 3..=19 {
                    mark(&mut b, fact(m), 2 * fact(m));
                }
            }
            Shape::SqrtWindows => {
                for j in 1..31 {
                    mark(&mut b, 1u64 << (2 * j), (1u64 << (2 * j)) + (1u64 << j));
                }
            }
            Shape::Geometric { base, num, den, start } => {
                let mut p = base.pow(*start);
                while p <= n {
                    mark(&mut b, p, p + p * num / den);
                    p *= base;
                }
            }
            Shape::Blocks { tower, prefix, cycle } => {
                let mut k = 1u64;
                while let (Some(lo), Some(hi)) = (scheme_a(*tower, k - 1), scheme_a(*tower, k)) {
                    let i = (k - 1) as usize;
                    let on = if i < prefix.len() { prefix[i] } else { cycle[(i - prefix.len()) % cycle.len()] };
                    if on {
                        mark(&mut b, lo + 1, hi);
                    }
                    if hi >= n {
                        break;
                    }
                    k += 1;
                }
            }
            Shape::Fiber2(k) => (1..=n).filter(|i| i.trailing_zeros() == *k).for_each(|i| b[i as usize] = true),
            Shape::Finite(v) => v.iter().filter(|&&x| x <= n).for_each(|&x| b[x as usize] = true),
            Shape::Explicit(iv) => iv.iter().for_each(|&(l, r)| mark(&mut b, l, r)),
            Shape::Union(cs) => {
                for c in cs {
                    for (x, y) in b.iter_mut().zip(c.bitmap(n)) {
                        *x |= y;
                    }
                }
            }
            Shape::Intersection(cs) => {
                b.iter_mut().for_each(|x| *x = true);
                for c in cs {
                    for (x, y) in b.iter_mut().zip(c.bitmap(n)) {
                        *x &= y;
                    }
                }
            }
            Shape::Complement(c) => {
                b = c.bitmap(n).into_iter().map(|x| !x).collect();
            }
        }
        b[0] = false;
        b
    }

    pub fn to_json(&self) -> Value {
        match self {
            Shape::Residue(m, r) => json!({"kind": "residue", "mod": m, "res": r}),
            Shape::Squares => json!({"kind": "intervals", "gen": "squares"}),
            Shape::Pow2 => json!({"kind": "intervals", "gen": "pow2"}),
            Shape::FactorialA => json!({"kind": "intervals", "gen": "factorial"}),
            Shape::TowerA => json!({"kind": "intervals", "gen": "tower"}),
            Shape::FactorialDouble => json!({"kind": "intervals", "gen": "factorial-double"}),
            Shape::SqrtWindows => json!({"kind": "intervals", "gen": "sqrt-windows"}),
            Shape::Geometric { base, num, den, start } => json!({"kind": "intervals", "gen": {
                "name": "geometric", "base": base, "theta": format!("{num}/{den}"), "start": start}}),
            Shape::Blocks { tower, prefix, cycle } => json!({"kind": "intervals", "gen": {
                "name": "blocks", "scheme": if *tower { "tower" } else { "factorial" }, "prefix": prefix, "cycle": cycle}}),
            Shape::Fiber2(k) => json!({"kind": "fiber2", "k": k}),
            Shape::Finite(v) => json!({"kind": "finite", "elems": v}),
            Shape::Explicit(iv) => json!({"kind": "intervals", "endpoints": iv}),
            Shape::Union(cs) => json!({"kind": "union", "of": cs.iter().map(Shape::to_json).collect::<Vec<_>>()}),
            Shape::Intersection(cs) => {
                json!({"kind": "intersection", "of": cs.iter().map(Shape::to_json).collect::<Vec<_>>()})
            }
            Shape::Complement(c) => json!({"kind": "complement", "of": c.to_json()}),
        }
    }

    pub fn build(&self) -> SymbolicSet {
        SymbolicSet::from_value(&self.to_json()).unwrap_or_else(|e| panic!("{}: {e}", self.to_json()))
    }
}

fn leaf(rng: &mut ChaCha8Rng) -> Shape {
    match rng.gen_range(0..12) {
        0 => {
            let m = rng.gen_range(1..=30u64);
            Shape::Residue(m, rng.gen_range(0..m))
        }
        1 => Shape::Squares,
        2 => Shape::Pow2,
        3 => Shape::FactorialA,
        4 => Shape::TowerA,
        5 => Shape::FactorialDouble,
        6 => Shape::SqrtWindows,
        7 => {
            let base = rng.gen_range(2..=5u64);
            let den = rng.gen_range(2..=8u64);
            let num = rng.gen_range(1..den * (base - 1));
            Shape::Geometric { base, num, den, start: rng.gen_range(1..=3) }
        }
        8 => {
            let prefix = (0..rng.gen_range(0..=4)).map(|_| rng.gen_bool(0.5)).collect();
            let cycle = (0..rng.gen_range(1..=4)).map(|_| rng.gen_bool(0.5)).collect();
            Shape::Blocks { tower: rng.gen_bool(0.4), prefix, cycle }
        }
        9 => Shape::Fiber2(rng.gen_range(0..6)),
        10 => Shape::Finite((0..rng.gen_range(0..10)).map(|_| rng.gen_range(1..=12_000u64)).collect()),
        _ => {
            let mut at = 0;
            Shape::Explicit(
                (0..rng.gen_range(1..=6))
                    .map(|_| {
                        let l = at + rng.gen_range(1..=2_000u64);
                        let r = l + rng.gen_range(0..=1_500u64);
                        at = r + 1;
                        (l, r)
                    })
                    .collect(),
            )
        }
    }
}

pub fn random_shape(rng: &mut ChaCha8Rng, depth: u32) -> Shape {
    if depth == 0 || rng.gen_bool(0.55) {
        return leaf(rng);
    }
    match rng.gen_range(0..3) {
        0 => Shape::Union((0..rng.gen_range(2..=3)).map(|_| random_shape(rng, depth - 1)).collect()),
        1 => Shape::Intersection((0..rng.gen_range(2..=3)).map(|_| random_shape(rng, depth - 1)).collect()),
        _ => Shape::Complement(Box::new(random_shape(rng, depth - 1))),
    }
}

pub fn seeded_shapes(seed: u64, count: usize) -> Vec<Shape> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_shape(&mut rng, 2)).collect()
}
