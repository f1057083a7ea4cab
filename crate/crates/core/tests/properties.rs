mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use idealstat::corpus::Corpus;
use idealstat::functionals::density::uniform_eval_u64;
use idealstat::functionals::submeasure::Submeasure;
use idealstat::num::q;
use idealstat::sets::BlockScheme;
use idealstat::{Ideal, RunConfig, SymbolicSet};

use common::{random_shape, Shape};

fn shape() -> impl Strategy<Value = Shape> {
    any::<u64>().prop_map(|seed| random_shape(&mut ChaCha8Rng::seed_from_u64(seed), 2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn count_is_monotone_with_unit_steps(s in shape(), n in 1u64..5_000) {
        let set = s.build();
        let a = set.count_u64(n - 1).unwrap();
        let b = set.count_u64(n).unwrap();
        prop_assert!(b == a || b == a + 1);
        prop_assert_eq!(b - a == 1, s.bitmap(n)[n as usize]);
    }

    #[test]
    fn union_and_complement_identities(s in shape(), t in shape(), n in 1u64..5_000) {
        let (x, y) = (s.build(), t.build());
        let u = SymbolicSet::from_value(&json!({"kind": "union", "of": [s.to_json(), t.to_json()]})).unwrap();
        let i = SymbolicSet::from_value(&json!({"kind": "intersection", "of": [s.to_json(), t.to_json()]})).unwrap();
        let c = SymbolicSet::from_value(&json!({"kind": "complement", "of": s.to_json()})).unwrap();
        let cu = |z: &SymbolicSet| z.count_u64(n).unwrap();
        prop_assert_eq!(cu(&u) + cu(&i), cu(&x) + cu(&y));
        prop_assert_eq!(cu(&c) + cu(&x), n);
        let (bs, bt) = (s.bitmap(n), t.bitmap(n));
        let both = (1..=n as usize).filter(|&k| bs[k] && bt[k]).count() as u64;
        prop_assert_eq!(cu(&i), both);
    }

    #[test]
    fn uniform_density_stays_in_unit_interval(s in shape(), n in 1u64..5_000) {
        let v = uniform_eval_u64(&s.build(), n).unwrap();
        prop_assert!(v >= q(0, 1) && v <= q(1, 1));
    }

    #[test]
    fn certified_verdicts_survive_a_longer_horizon(idx in 0usize..40, which in 0usize..3) {
        let corpus = Corpus::shipped().unwrap();
        let sets = corpus.sets();
        let (_, set) = &sets[idx % sets.len()];
        let ideal = [Ideal::Fin, Ideal::Summable, Ideal::Zeta][which].clone();
        let short = ideal.decide(set, &RunConfig::with_horizon(100_000)).unwrap();
        let long = ideal.decide(set, &RunConfig::with_horizon(200_000)).unwrap();
        if short.is_certified() {
            prop_assert_eq!(short.is_in(), long.is_in());
            prop_assert!(long.is_certified());
        }
    }

    #[test]
    fn j_of_fin_matches_zmu(idx in 0usize..40, lacunary in any::<bool>()) {
        let corpus = Corpus::shipped().unwrap();
        let sets = corpus.sets();
        let (_, set) = &sets[idx % sets.len()];
        let mu = if lacunary { Submeasure::Lacunary(BlockScheme::Factorial) } else { Submeasure::Uniform };
        let cfg = RunConfig::default();
        let j = Ideal::j_of(Ideal::Fin, mu.clone()).decide(set, &cfg).unwrap();
        let z = Ideal::ZMu(mu).decide(set, &cfg).unwrap();
        if j.is_certified() && z.is_certified() {
            prop_assert_eq!(j.is_in(), z.is_in());
        }
    }
}

#[test]
fn corpus_round_trips_through_json() {
    for seed in [1, 2, 99] {
        let c = Corpus::generate(seed).unwrap();
        let text = c.to_json();
        let back = Corpus::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
    }
}
