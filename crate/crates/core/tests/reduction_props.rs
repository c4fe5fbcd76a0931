use dsctl::{
    compute_profile, control_consistent, is_control_equivalent, is_normal_reduction, language_equal,
    reduce_supervisor, ControlPartition, Error,
};
use dsctl_testkit::instance;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn plain_reduction_is_sound(seed in any::<u64>()) {
        let inst = instance(seed, 8, 6, 4);
        let red = reduce_supervisor(&inst.sup, &inst.plant, None, None).unwrap();
        prop_assert!(is_normal_reduction(&red, &inst.sup).unwrap());
        prop_assert!(red.state_count() <= inst.sup.state_count());
        prop_assert!(is_control_equivalent(&inst.plant, &inst.sup, &[red]).unwrap());
    }

    #[test]
    fn block_reduction_is_sound(seed in any::<u64>()) {
        let inst = instance(seed, 8, 6, 4);
        for k in 0..inst.partition.len() {
            let red = reduce_supervisor(&inst.sup, &inst.plant, Some(&inst.partition), Some(k)).unwrap();
            prop_assert!(is_normal_reduction(&red, &inst.sup).unwrap());
            prop_assert!(red.state_count() <= inst.sup.state_count());
        }
    }

    #[test]
    fn one_block_partition_matches_plain(seed in any::<u64>()) {
        let inst = instance(seed, 8, 6, 4);
        let single = ControlPartition::single(inst.sup.alphabet()).unwrap();
        let plain = reduce_supervisor(&inst.sup, &inst.plant, None, None).unwrap();
        let block = reduce_supervisor(&inst.sup, &inst.plant, Some(&single), Some(0)).unwrap();
        prop_assert_eq!(plain, block);
    }

    #[test]
    fn consistency_is_symmetric_and_reflexive(seed in any::<u64>()) {
        let inst = instance(seed, 8, 6, 4);
        let prof = compute_profile(&inst.sup, &inst.plant, Some(&inst.partition)).unwrap();
        for x in 0..prof.state_count() {
            prop_assert!(control_consistent(&prof, x, x, None));
            for y in 0..prof.state_count() {
                prop_assert_eq!(control_consistent(&prof, x, y, None), control_consistent(&prof, y, x, None));
                // Block consistency only looks at part of D, so it is weaker.
                if control_consistent(&prof, x, y, None) {
                    for k in 0..inst.partition.len() {
                        prop_assert!(control_consistent(&prof, x, y, Some(k)));
                    }
                }
            }
        }
    }
}

#[test]
fn reduced_supervisor_keeps_the_closed_loop() {
    for seed in 0..100u64 {
        let inst = instance(seed, 8, 6, 4);
        let red = reduce_supervisor(&inst.sup, &inst.plant, None, None).unwrap();
        let loop_ = dsctl::meet(&inst.plant, &red).unwrap();
        assert!(language_equal(&loop_, &inst.sup).unwrap(), "seed {seed}");
    }
}

#[test]
fn reducing_twice_keeps_size() {
    let (mut checked, mut shrunk) = (0, 0);
    for seed in 0..200u64 {
        let inst = instance(seed, 8, 6, 4);
        let once = reduce_supervisor(&inst.sup, &inst.plant, None, None).unwrap();
        shrunk += usize::from(once.state_count() < inst.sup.state_count());
        match reduce_supervisor(&once, &inst.plant, None, None) {
            Ok(twice) => {
                assert_eq!(twice.state_count(), once.state_count(), "seed {seed}");
                checked += 1;
            }
            // A reduced supervisor may accept strings the plant does not.
            Err(Error::NotContained { .. }) => {}
            Err(e) => panic!("seed {seed}: {e}"),
        }
    }
    eprintln!("reduce twice: {checked} checked, {shrunk} shrunk");
    assert!(checked >= 50 && shrunk >= 20);
}
