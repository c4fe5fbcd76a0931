use std::collections::BTreeSet;

use dsctl::ops::JointReach;
use dsctl::{disabled_events, is_controllable, is_nonblocking, language_subset, meet, supremal_controllable, Generator};
use dsctl_testkit::{brute_supcon, marked_words, random_alphabet, random_plant, random_spec, rng, Rng};
use proptest::prelude::*;

fn draw(seed: u64, max_states: usize, max_events: usize) -> (Generator, Generator) {
    let mut r = rng(seed);
    let n = r.gen_range(1..=max_events);
    let alphabet = random_alphabet(&mut r, n);
    let plant = random_plant(&mut r, &alphabet, max_states);
    let spec = random_spec(&mut r, &alphabet, max_states);
    (plant, spec)
}

/// `p` restricted to the states in `keep`, reachable part only.
fn restrict(p: &Generator, keep: &BTreeSet<usize>) -> Generator {
    let alphabet = p.alphabet().clone();
    let trans: Vec<(usize, String, usize)> = p
        .transitions()
        .filter(|(s, _, d)| keep.contains(s) && keep.contains(d))
        .map(|(s, e, d)| (s, alphabet.label(e).to_string(), d))
        .collect();
    let marked: Vec<usize> = p.marked_states().filter(|x| keep.contains(x)).collect();
    Generator::new("R", alphabet, p.state_count(), marked, trans.iter().map(|(s, l, d)| (*s, l.as_str(), *d)))
        .unwrap()
        .canonical()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn supervisor_is_controllable_and_nonblocking(seed in any::<u64>()) {
        let (plant, spec) = draw(seed, 8, 6);
        let res = supremal_controllable(&spec, &plant).unwrap();
        let sup = &res.supervisor;
        prop_assert!(is_controllable(sup, &plant).unwrap());
        prop_assert!(sup.is_empty_generator() || is_nonblocking(sup));
        prop_assert!(language_subset(sup, &meet(&spec, &plant).unwrap()).unwrap());
        if !sup.is_empty_generator() {
            prop_assert_eq!(&res.disabled, &disabled_events(sup, &plant).unwrap());
            for (x, d) in res.disabled.iter().enumerate() {
                for l in d {
                    let e = sup.alphabet().index_of(l).unwrap();
                    prop_assert!(sup.alphabet().is_controllable(e));
                    prop_assert!(sup.next(x, e).is_none());
                }
            }
        }
    }

    #[test]
    fn adding_back_a_deleted_state_fails(seed in any::<u64>()) {
        let (plant, spec) = draw(seed, 5, 4);
        let sup = supremal_controllable(&spec, &plant).unwrap().supervisor;
        let product = meet(&spec, &plant).unwrap();
        let kept: BTreeSet<usize> = if sup.is_empty_generator() {
            BTreeSet::new()
        } else {
            JointReach::new(&sup, &product).unwrap().partners.iter().flatten().copied().collect()
        };
        let frontier: BTreeSet<usize> = if kept.is_empty() {
            BTreeSet::from([0])
        } else {
            product
                .transitions()
                .filter(|(s, _, d)| kept.contains(s) && !kept.contains(d))
                .map(|(_, _, d)| d)
                .collect()
        };
        for d in frontier {
            let mut grown = kept.clone();
            grown.insert(d);
            let g = restrict(&product, &grown);
            let ok = is_controllable(&g, &plant).unwrap() && is_nonblocking(&g);
            prop_assert!(!ok, "state {} can be added back", d);
        }
    }
}

#[test]
fn agrees_with_string_level_fixpoint() {
    for seed in 0..40u64 {
        let (plant, spec) = draw(seed, 5, 3);
        let sup = supremal_controllable(&spec, &plant).unwrap().supervisor;
        let expected: BTreeSet<_> = brute_supcon(&spec, &plant, 14).into_iter().filter(|w| w.len() <= 10).collect();
        assert_eq!(marked_words(&sup, 10), expected, "seed {seed}");
    }
}

#[test]
fn full_specification_returns_plant() {
    for seed in 0..30u64 {
        let (plant, _) = draw(seed, 8, 5);
        let sup = supremal_controllable(&plant, &plant).unwrap().supervisor;
        assert!(dsctl::language_equal(&sup, &plant).unwrap());
    }
}
