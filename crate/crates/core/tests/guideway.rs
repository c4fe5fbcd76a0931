use dsctl::report::disablement_counts;
use dsctl::{
    gen_guideway, is_control_equivalent, is_local_controller_within, is_nonblocking,
    is_normal_reduction, localize, supremal_controllable, verify_proposition1,
};

#[test]
fn supervisor_disablement_pattern() {
    let gw = gen_guideway();
    let res = supremal_controllable(&gw.spec, &gw.plant).unwrap();
    assert!(is_nonblocking(&res.supervisor));
    assert!(!res.supervisor.is_empty_generator());
    let counts = disablement_counts(&res.supervisor, &res.disabled);
    let expected = [("11", 2), ("10", 0), ("13", 2), ("12", 0), ("15", 0), ("21", 2), ("20", 0), ("23", 2), ("22", 0), ("25", 0)];
    for (label, n) in counts {
        let want = expected.iter().find(|(l, _)| *l == label).map(|p| p.1).unwrap();
        assert_eq!(n, want, "event {label}");
    }
}

#[test]
fn per_event_localization() {
    let gw = gen_guideway();
    let sup = supremal_controllable(&gw.spec, &gw.plant).unwrap().supervisor;
    let p = &gw.partitions["per-event"];
    let set = localize(&sup, &gw.plant, p).unwrap();
    assert_eq!(set.reduced.len(), 5);
    assert_eq!(set.reduced[4].state_count(), 1);
    assert!(is_control_equivalent(&gw.plant, &sup, &set.reduced).unwrap());
    assert!(verify_proposition1(&gw.plant, &sup, &set.locals).unwrap());
    for (i, (loc, red)) in set.locals.iter().zip(&set.reduced).enumerate() {
        let block = p.block(i).unwrap();
        assert!(is_local_controller_within(loc, &gw.plant, &sup, block).unwrap());
        assert!(is_local_controller_within(red, &gw.plant, &sup, block).unwrap());
        assert!(red.state_count() <= loc.state_count());
    }
    assert!(is_normal_reduction(&set.reduced[4], &sup).is_ok());
}

#[test]
fn per_component_localization() {
    let gw = gen_guideway();
    let sup = supremal_controllable(&gw.spec, &gw.plant).unwrap().supervisor;
    let comp = localize(&sup, &gw.plant, &gw.partitions["per-component"]).unwrap();
    let event = localize(&sup, &gw.plant, &gw.partitions["per-event"]).unwrap();
    assert!(is_control_equivalent(&gw.plant, &sup, &comp.reduced).unwrap());
    // Per-event controllers are never larger than the per-component controller
    // owning the same events.
    for (i, label) in ["11", "13", "21", "23"].iter().enumerate() {
        let owner = comp.partition.block_of(label).unwrap();
        assert!(event.reduced[i].state_count() <= comp.reduced[owner].state_count());
    }
    assert_eq!(sup.state_count(), 28);
}
