use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dsctl::format::parse_automaton;

fn dsctl(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dsctl")).args(args).current_dir(cwd).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/guideway")
}

/// Generates the guideway files and the monolithic supervisor in `dir`.
fn guideway(dir: &Path) {
    assert_eq!(code(&dsctl(&["gen", "guideway", "-o", "gw"], dir)), 0);
    let out = dsctl(&["supcon", "gw/plant.aut", "gw/spec.aut", "-o", "gw/sup.aut"], dir);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

const PLANT: &str = "automaton G\nstates 3\nmarked 2\nevents\na c\nu u\ntrans\n0 a 1\n1 u 2\nend\n";
const ONLY_A: &str = "automaton K\nstates 2\nmarked 1\nevents\na c\nu u\ntrans\n0 a 1\nend\n";

#[test]
fn shipped_fixtures_match_the_generator() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(code(&dsctl(&["gen", "guideway", "-o", "gw"], tmp.path())), 0);
    for name in ["v1.aut", "v2.aut", "plant.aut", "spec.aut", "per_event.part", "per_component.part"] {
        let shipped = fs::read(fixtures().join(name)).unwrap();
        assert_eq!(fs::read(tmp.path().join("gw").join(name)).unwrap(), shipped, "{name}");
    }
    for v in ["v1.aut", "v2.aut"] {
        let g = parse_automaton(&fs::read_to_string(fixtures().join(v)).unwrap()).unwrap();
        assert_eq!(g.state_count(), 6);
    }
}

#[test]
fn localize_then_equiv_holds() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    guideway(dir);
    for part in ["per_event", "per_component"] {
        let out_dir = format!("loc_{part}");
        let part_file = format!("gw/{part}.part");
        let out = dsctl(&["localize", "gw/sup.aut", "gw/plant.aut", "--partition", &part_file, "-o", &out_dir], dir);
        assert_eq!(code(&out), 0);
        let mut args = vec!["check".to_string(), "equiv".into(), "gw/plant.aut".into(), "gw/sup.aut".into()];
        let mut reduced: Vec<String> = fs::read_dir(dir.join(&out_dir))
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .filter(|n| n.ends_with(".reduced.aut"))
            .map(|n| format!("{out_dir}/{n}"))
            .collect();
        reduced.sort();
        args.extend(reduced);
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = dsctl(&args, dir);
        assert_eq!(code(&out), 0);
        assert_eq!(String::from_utf8_lossy(&out.stdout), "true\n");
    }
}

#[test]
fn outputs_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        guideway(dir);
        let args = ["localize", "gw/sup.aut", "gw/plant.aut", "--partition", "gw/per_event.part", "-o", "loc", "--dot"];
        assert_eq!(code(&dsctl(&args, dir)), 0);
    }
    let names: Vec<_> = fs::read_dir(a.path().join("loc")).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert!(names.len() >= 21);
    for n in names {
        assert_eq!(fs::read(a.path().join("loc").join(&n)).unwrap(), fs::read(b.path().join("loc").join(&n)).unwrap());
    }
    assert_eq!(fs::read(a.path().join("gw/sup.aut")).unwrap(), fs::read(b.path().join("gw/sup.aut")).unwrap());
}

#[test]
fn report_lists_guideway_disablements() {
    let tmp = tempfile::tempdir().unwrap();
    guideway(tmp.path());
    let args = ["localize", "gw/sup.aut", "gw/plant.aut", "--partition", "gw/per_event.part", "-o", "loc"];
    assert_eq!(code(&dsctl(&args, tmp.path())), 0);
    let report = fs::read_to_string(tmp.path().join("loc/report.txt")).unwrap();
    for line in [
        "event 11 disabled at 2 states",
        "event 13 disabled at 2 states",
        "event 21 disabled at 2 states",
        "event 23 disabled at 2 states",
        "event 15 disabled at 0 states",
        "event 25 disabled at 0 states",
        "block 4 15 25 local states 28 reduced states 1",
    ] {
        assert!(report.lines().any(|l| l == line), "missing `{line}` in\n{report}");
    }
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write(dir, "g.aut", PLANT);
    write(dir, "k.aut", ONLY_A);
    write(dir, "bad.aut", "automaton B\nstates 1\nmarked 0\nevents\na c\ntrans\n0 a 5\nend\n");
    write(dir, "junk.aut", "automaton B\nstates x\n");

    assert_eq!(code(&dsctl(&["check", "controllable", "g.aut", "g.aut"], dir)), 0);
    assert_eq!(code(&dsctl(&["check", "controllable", "k.aut", "g.aut"], dir)), 1);
    assert_eq!(code(&dsctl(&["check", "nonblocking", "k.aut"], dir)), 0);
    assert_eq!(code(&dsctl(&["check", "frobnicate"], dir)), 2);
    assert_eq!(code(&dsctl(&["supcon", "g.aut"], dir)), 2);
    let out = dsctl(&["check", "nonblocking", "bad.aut"], dir);
    assert_eq!(code(&out), 3);
    let out = dsctl(&["check", "nonblocking", "junk.aut"], dir);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(code(&dsctl(&["check", "nonblocking", "missing.aut"], dir)), 3);
    assert_eq!(code(&dsctl(&["project", "g.aut", "--keep", "zz", "-o", "p.aut"], dir)), 3);
}

#[test]
fn decompose_without_hidden_events_is_a_hypothesis_failure() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    guideway(dir);
    let all = "11,10,13,12,15,21,20,23,22,25";
    let out = dsctl(
        &["decompose", "gw/sup.aut", "gw/plant.aut", "--partition", "gw/per_component.part", "--observable", all, "-o", "d"],
        dir,
    );
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("no unobservable controllable witness"));
}

#[test]
fn decompose_writes_channel_controllers() {
    // Two independent one-shot events, each controllable and unobservable to the
    // other channel, plus an observable uncontrollable completion event.
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write(
        dir,
        "g.aut",
        "automaton G\nstates 4\nmarked 3\nevents\na c\nb c\ntrans\n0 a 1\n0 b 2\n1 b 3\n2 a 3\nend\n",
    );
    write(dir, "p.part", "partition p\nblock: a\nblock: b\n");
    let out = dsctl(&["decompose", "g.aut", "g.aut", "--partition", "p.part", "--observable", "", "-o", "d"], dir);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = fs::read_to_string(dir.join("d/report.txt")).unwrap();
    assert!(report.contains("channel 0 witness a hides b"));
    assert!(report.contains("channel 1 witness b hides a"));
    let out = dsctl(&["check", "decomposable", "g.aut", "g.aut", "--partition", "p.part", "--observable", ""], dir);
    assert_eq!(code(&out), 0);
}

#[test]
fn project_lift_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    write(dir, "k.aut", ONLY_A);
    assert_eq!(code(&dsctl(&["lift", "k.aut", "--add", "b:c,v:u", "-o", "l.aut"], dir)), 0);
    let lifted = parse_automaton(&fs::read_to_string(dir.join("l.aut")).unwrap()).unwrap();
    assert_eq!(lifted.alphabet().len(), 4);
    assert_eq!(code(&dsctl(&["project", "l.aut", "--keep", "a,u", "-o", "p.aut"], dir)), 0);
    let back = parse_automaton(&fs::read_to_string(dir.join("p.aut")).unwrap()).unwrap();
    let k = parse_automaton(ONLY_A).unwrap();
    assert!(dsctl::language_equal(&back, &k).unwrap());
    assert_eq!(code(&dsctl(&["lift", "k.aut", "--add", "a:c", "-o", "x.aut"], dir)), 3);
    assert_eq!(code(&dsctl(&["lift", "k.aut", "--add", "b:q", "-o", "x.aut"], dir)), 3);
}

#[test]
fn compose_meet_trim_reduce() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    guideway(dir);
    assert_eq!(code(&dsctl(&["compose", "p.aut", "gw/v1.aut", "gw/v2.aut"], dir)), 0);
    let load = |n: &str| parse_automaton(&fs::read_to_string(dir.join(n)).unwrap()).unwrap();
    assert!(dsctl::language_equal(&load("p.aut"), &load("gw/plant.aut")).unwrap());
    assert_eq!(code(&dsctl(&["meet", "m.aut", "gw/plant.aut", "gw/spec.aut"], dir)), 0);
    assert_eq!(code(&dsctl(&["trim", "m.aut", "-o", "t.aut"], dir)), 0);
    assert_eq!(code(&dsctl(&["check", "nonblocking", "t.aut"], dir)), 0);
    let out = dsctl(&["reduce", "gw/sup.aut", "gw/plant.aut", "-o", "r.aut"], dir);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&dsctl(&["check", "equiv", "gw/plant.aut", "gw/sup.aut", "r.aut"], dir)), 0);
    let args = ["reduce", "gw/sup.aut", "gw/plant.aut", "--partition", "gw/per_event.part", "--block", "4", "-o", "r4.aut"];
    assert_eq!(code(&dsctl(&args, dir)), 0);
    let r4 = parse_automaton(&fs::read_to_string(dir.join("r4.aut")).unwrap()).unwrap();
    assert_eq!(r4.state_count(), 1);
    assert_eq!(code(&dsctl(&["reduce", "gw/sup.aut", "gw/plant.aut", "--block", "1", "-o", "x.aut"], dir)), 2);
}

#[test]
fn observation_checks_and_distribute() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    guideway(dir);
    let obs = "11,10,13,12,15,21,20,23,22,25";
    for prop in ["normal", "paranormal", "relobs"] {
        let out = dsctl(&["check", prop, "gw/sup.aut", "gw/plant.aut", "--observable", obs], dir);
        assert_eq!(code(&out), 0, "{prop}");
    }
    let out = dsctl(&["feasible", "gw/sup.aut", "gw/plant.aut", "--observable", obs, "-o", "f.aut"], dir);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&dsctl(&["check", "equiv", "gw/plant.aut", "gw/sup.aut", "f.aut"], dir)), 0);
    let out = dsctl(&["distribute", "gw/sup.aut", "gw/plant.aut", "--partition", "gw/per_component.part", "-o", "dist"], dir);
    assert_eq!(code(&out), 0);
    let out = dsctl(&["check", "equiv", "gw/plant.aut", "gw/sup.aut", "dist/loc_0.reduced.aut", "dist/loc_1.reduced.aut"], dir);
    assert_eq!(code(&out), 0);
    let out = dsctl(
        &["check", "local", "dist/loc_0.reduced.aut", "gw/plant.aut", "--block", "11,13,15", "--within", "gw/sup.aut"],
        dir,
    );
    assert_eq!(code(&out), 0);
    let out = dsctl(
        &["check", "coparanormal", "gw/sup.aut", "gw/plant.aut", "dist/loc_0.aut", "dist/loc_1.aut", "--channel", obs, "--channel", obs],
        dir,
    );
    assert_eq!(code(&out), 0);
    let out = dsctl(&["check", "conormal", "gw/sup.aut", "gw/plant.aut", "--channel", obs], dir);
    assert_eq!(code(&out), 0);
}
