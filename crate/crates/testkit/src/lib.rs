//! Seeded random instances and brute-force string-level oracles used by the
//! test suites of the workspace.

use std::collections::{BTreeSet, HashSet};

use dsctl::{Alphabet, ControlPartition, EventDecl, Generator, ProjectionSpec};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Word = Vec<usize>;

pub use rand::Rng;
pub use rand_chacha::ChaCha8Rng as TestRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` events named `e0..`, each controllable with probability one half, at least
/// one controllable.
pub fn random_alphabet(r: &mut ChaCha8Rng, n: usize) -> Alphabet {
    let mut flags: Vec<bool> = (0..n).map(|_| r.gen_bool(0.5)).collect();
    if !flags.iter().any(|&c| c) {
        let i = r.gen_range(0..n);
        flags[i] = true;
    }
    Alphabet::new(flags.iter().enumerate().map(|(i, &c)| EventDecl::new(format!("e{i}"), c))).unwrap()
}

/// Random deterministic generator, canonical (reachable part only).
pub fn random_generator(
    r: &mut ChaCha8Rng,
    name: &str,
    alphabet: &Alphabet,
    states: usize,
    density: f64,
    mark_p: f64,
) -> Generator {
    let marked: Vec<usize> = (0..states).filter(|_| r.gen_bool(mark_p)).collect();
    let mut trans: Vec<(usize, String, usize)> = Vec::new();
    for s in 0..states {
        for e in alphabet.iter() {
            if r.gen_bool(density) {
                trans.push((s, e.label.clone(), r.gen_range(0..states)));
            }
        }
    }
    Generator::new(
        name,
        alphabet.clone(),
        states,
        marked,
        trans.iter().map(|(s, l, d)| (*s, l.as_str(), *d)),
    )
    .unwrap()
    .canonical()
}

/// Nonempty trim plant with at most `max_states` states.
pub fn random_plant(r: &mut ChaCha8Rng, alphabet: &Alphabet, max_states: usize) -> Generator {
    loop {
        let n = r.gen_range(1..=max_states);
        let g = dsctl::trim(&random_generator(r, "G", alphabet, n, 0.5, 0.4));
        if !g.is_empty_generator() {
            return g;
        }
    }
}

pub fn random_spec(r: &mut ChaCha8Rng, alphabet: &Alphabet, max_states: usize) -> Generator {
    let n = r.gen_range(1..=max_states);
    random_generator(r, "E", alphabet, n, 0.7, 0.6)
}

/// Random partition of the controllable events into 1..=`max_blocks` nonempty blocks.
pub fn random_partition(r: &mut ChaCha8Rng, alphabet: &Alphabet, max_blocks: usize) -> ControlPartition {
    let mut ctrl: Vec<String> = alphabet.controllable_labels().into_iter().collect();
    ctrl.shuffle(r);
    let k = r.gen_range(1..=max_blocks.min(ctrl.len()));
    let mut blocks = vec![BTreeSet::new(); k];
    for (i, l) in ctrl.into_iter().enumerate() {
        let b = if i < k { i } else { r.gen_range(0..k) };
        blocks[b].insert(l);
    }
    ControlPartition::new("rand", blocks).unwrap()
}

pub fn random_observation(r: &mut ChaCha8Rng, alphabet: &Alphabet) -> ProjectionSpec {
    random_observation_with(r, alphabet, 0.6)
}

/// Each event observable with probability `p`.
pub fn random_observation_with(r: &mut ChaCha8Rng, alphabet: &Alphabet, p: f64) -> ProjectionSpec {
    ProjectionSpec::new(alphabet.iter().filter(|_| r.gen_bool(p)).map(|e| e.label.clone()))
}

/// A plant, a specification and their nonempty supremal controllable supervisor.
pub struct Instance {
    pub plant: Generator,
    pub spec: Generator,
    pub sup: Generator,
    pub partition: ControlPartition,
}

pub fn instance(seed: u64, max_states: usize, max_events: usize, max_blocks: usize) -> Instance {
    let mut r = rng(seed);
    loop {
        let n_events = r.gen_range(1..=max_events);
        let alphabet = random_alphabet(&mut r, n_events);
        let plant = random_plant(&mut r, &alphabet, max_states);
        let spec = random_spec(&mut r, &alphabet, max_states);
        let sup = dsctl::supremal_controllable(&spec, &plant).unwrap().supervisor;
        if sup.is_empty_generator() {
            continue;
        }
        let partition = random_partition(&mut r, &alphabet, max_blocks);
        return Instance {
            plant,
            spec,
            sup,
            partition,
        };
    }
}

/// Closed-language strings of `g` up to length `n`, as event-index words.
pub fn closed_words(g: &Generator, n: usize) -> BTreeSet<Word> {
    words(g, n, false)
}

/// Marked-language strings of `g` up to length `n`.
pub fn marked_words(g: &Generator, n: usize) -> BTreeSet<Word> {
    words(g, n, true)
}

fn words(g: &Generator, n: usize, marked_only: bool) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    let mut frontier = vec![(Vec::new(), 0usize)];
    for len in 0..=n {
        let mut next = Vec::new();
        for (w, s) in frontier {
            if !marked_only || g.is_marked(s) {
                out.insert(w.clone());
            }
            if len == n {
                continue;
            }
            for e in 0..g.alphabet().len() {
                if let Some(t) = g.next(s, e) {
                    let mut w2 = w.clone();
                    w2.push(e);
                    next.push((w2, t));
                }
            }
        }
        frontier = next;
    }
    out
}

pub fn run(g: &Generator, w: &[usize]) -> Option<usize> {
    w.iter().try_fold(0, |s, &e| g.next(s, e))
}

pub fn prefixes(set: &BTreeSet<Word>) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for w in set {
        for i in 0..=w.len() {
            out.insert(w[..i].to_vec());
        }
    }
    out
}

/// Product states `(E, G)` from which a state marked in both is reachable.
fn coreachable_pairs(e: &Generator, g: &Generator) -> HashSet<(usize, usize)> {
    let mut all = HashSet::new();
    let mut stack = vec![(0usize, 0usize)];
    all.insert((0, 0));
    let mut edges = Vec::new();
    while let Some((x, q)) = stack.pop() {
        for ev in 0..g.alphabet().len() {
            if let (Some(x2), Some(q2)) = (e.next(x, ev), g.next(q, ev)) {
                edges.push(((x, q), (x2, q2)));
                if all.insert((x2, q2)) {
                    stack.push((x2, q2));
                }
            }
        }
    }
    let mut co: HashSet<(usize, usize)> = all.iter().copied().filter(|&(x, q)| e.is_marked(x) && g.is_marked(q)).collect();
    loop {
        let before = co.len();
        for &(a, b) in &edges {
            if co.contains(&b) {
                co.insert(a);
            }
        }
        if co.len() == before {
            return co;
        }
    }
}

/// Brute-force supremal controllable sublanguage on strings up to `horizon`.
///
/// Starts from the strings of `Lm(E) ∩ Lm(G)` and repeatedly deletes every string
/// with a prefix `t` such that `tu ∈ L(G)` for an uncontrollable `u` while `tu` is
/// not a prefix of a kept string. Strings of length exactly `horizon` are not
/// judged: they count as kept prefixes whenever some marked string of both
/// generators extends them. Results are exact on strings well below the horizon.
pub fn brute_supcon(e: &Generator, g: &Generator, horizon: usize) -> BTreeSet<Word> {
    let alphabet = g.alphabet();
    let co = coreachable_pairs(e, g);
    let both = |w: &Word| Some((run(e, w)?, run(g, w)?));
    let candidates: Vec<Word> = closed_words(g, horizon).into_iter().filter(|w| both(w).is_some()).collect();
    let mut k: BTreeSet<Word> = candidates
        .iter()
        .filter(|w| both(w).is_some_and(|(x, q)| e.is_marked(x) && g.is_marked(q)))
        .cloned()
        .collect();
    let mut frontier: BTreeSet<Word> = candidates
        .iter()
        .filter(|w| w.len() == horizon && both(w).is_some_and(|p| co.contains(&p)))
        .cloned()
        .collect();
    loop {
        let closure = prefixes(&k.union(&frontier).cloned().collect());
        let bad_prefix = |t: &Word| {
            if t.len() >= horizon {
                return false;
            }
            let q = run(g, t).expect("candidate strings are in L(G)");
            (0..alphabet.len()).any(|u| {
                !alphabet.is_controllable(u) && g.next(q, u).is_some() && {
                    let mut tu = t.clone();
                    tu.push(u);
                    !closure.contains(&tu)
                }
            })
        };
        let bad: HashSet<Word> = closure.iter().filter(|t| bad_prefix(t)).cloned().collect();
        let clean = |w: &Word| (0..=w.len()).all(|i| !bad.contains(&w[..i]));
        let before = k.len() + frontier.len();
        k.retain(clean);
        frontier.retain(clean);
        if k.len() + frontier.len() == before {
            return k;
        }
    }
}

pub fn project_word(w: &[usize], observable: &[bool]) -> Word {
    w.iter().copied().filter(|&e| observable[e]).collect()
}

/// Bounded relative observability: all pairs `s ∈ K̄`, `s' ∈ C̄` up to length `n`
/// with equal projections are checked against both conditions.
pub fn brute_relative_observable(k: &Generator, c: &Generator, g: &Generator, p: &ProjectionSpec, n: usize) -> bool {
    let obs = p.mask(g.alphabet()).unwrap();
    let k = dsctl::trim(k);
    let c = dsctl::trim(c);
    let kc = closed_words(&k, n);
    let cc = closed_words(&c, n);
    for s in &kc {
        let ps = project_word(s, &obs);
        for s2 in &cc {
            if project_word(s2, &obs) != ps {
                continue;
            }
            let q2 = run(g, s2).unwrap();
            for e in 0..g.alphabet().len() {
                let mut se = s.clone();
                se.push(e);
                let mut s2e = s2.clone();
                s2e.push(e);
                if run(&k, &se).is_some() && g.next(q2, e).is_some() && run(&k, &s2e).is_none() {
                    return false;
                }
            }
            let s_marked = run(&k, s).is_some_and(|x| k.is_marked(x));
            let s2_in_k = run(&k, s2).is_some_and(|x| k.is_marked(x));
            if s_marked && g.is_marked(q2) && !s2_in_k {
                return false;
            }
        }
    }
    true
}

/// Controllable events enabled by `sup` after `w`.
pub fn control_pattern(sup: &Generator, w: &[usize]) -> Option<Vec<usize>> {
    let x = run(sup, w)?;
    Some(
        (0..sup.alphabet().len())
            .filter(|&e| sup.alphabet().is_controllable(e) && sup.next(x, e).is_some())
            .collect(),
    )
}

/// Every pair of closed-loop strings up to length `n` with equal projections
/// receives the same control pattern.
pub fn brute_feasible(sup: &Generator, g: &Generator, p: &ProjectionSpec, n: usize) -> bool {
    let obs = p.mask(g.alphabet()).unwrap();
    let loop_words: Vec<Word> = closed_words(&dsctl::meet(sup, g).unwrap(), n).into_iter().collect();
    for (i, s) in loop_words.iter().enumerate() {
        for s2 in &loop_words[i + 1..] {
            if project_word(s, &obs) == project_word(s2, &obs) && control_pattern(sup, s) != control_pattern(sup, s2) {
                return false;
            }
        }
    }
    true
}

/// An instance satisfying the decomposition hypotheses.
pub struct DecompositionInstance {
    pub plant: Generator,
    pub sup: Generator,
    pub observation: ProjectionSpec,
    pub partition: ControlPartition,
}

/// Alphabet with two unobservable controllable events `h0`, `h1` plus `extra`
/// random events; the partition puts `h0` in block 0 and `h1` in block 1 and the
/// other controllable events anywhere.
fn two_block_setup(r: &mut ChaCha8Rng, extra: usize) -> (Alphabet, ControlPartition, ProjectionSpec) {
    let mut decls = vec![EventDecl::controllable("h0"), EventDecl::controllable("h1")];
    let mut blocks = vec![BTreeSet::from(["h0".to_string()]), BTreeSet::from(["h1".to_string()])];
    let mut observable = Vec::new();
    for i in 0..extra {
        let label = format!("e{i}");
        let c = r.gen_bool(0.5);
        if c {
            blocks[r.gen_range(0..2)].insert(label.clone());
        }
        if r.gen_bool(0.7) {
            observable.push(label.clone());
        }
        decls.push(EventDecl::new(label, c));
    }
    let alphabet = Alphabet::new(decls).unwrap();
    let partition = ControlPartition::new("two", blocks).unwrap();
    (alphabet, partition, ProjectionSpec::new(observable))
}

/// Draws until the supremal controllable supervisor is nonempty and satisfies
/// `accept` (typically an observability requirement).
pub fn two_block_instance(
    seed: u64,
    max_states: usize,
    mut accept: impl FnMut(&Generator, &Generator, &ProjectionSpec) -> bool,
) -> DecompositionInstance {
    let mut r = rng(seed);
    loop {
        let extra = r.gen_range(1..=3);
        let (alphabet, partition, observation) = two_block_setup(&mut r, extra);
        let plant = random_plant(&mut r, &alphabet, max_states);
        let spec = random_spec(&mut r, &alphabet, max_states);
        let sup = dsctl::supremal_controllable(&spec, &plant).unwrap().supervisor;
        if sup.is_empty_generator() || !accept(&sup, &plant, &observation) {
            continue;
        }
        return DecompositionInstance {
            plant,
            sup,
            observation,
            partition,
        };
    }
}

/// `{P(s) : s ∈ L(a)}` restricted to projected strings of length at most `cap`.
///
/// Explores (projected prefix, state) pairs, so unobservable cycles terminate and
/// no bound on the source string length is needed.
pub fn projected_words(a: &Generator, observable: &[bool], cap: usize) -> BTreeSet<Word> {
    let mut seen: HashSet<(Word, usize)> = HashSet::new();
    let mut stack = vec![(Vec::new(), 0usize)];
    while let Some((pw, s)) = stack.pop() {
        if !seen.insert((pw.clone(), s)) {
            continue;
        }
        for (e, &obs) in observable.iter().enumerate() {
            if let Some(t) = a.next(s, e) {
                let mut w2 = pw.clone();
                if obs {
                    if pw.len() == cap {
                        continue;
                    }
                    w2.push(e);
                }
                stack.push((w2, t));
            }
        }
    }
    seen.into_iter().map(|(w, _)| w).collect()
}
