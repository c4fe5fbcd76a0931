//! Natural projection and partial-observation properties.
//!
//! Projections are computed by subset construction over uncertainty cells: a cell
//! is a set of source states closed under unobservable transitions. On top of that
//! this module checks normality, paranormality and relative observability, and
//! builds the feasible supervisor whose decisions depend only on observations.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::alphabet::{Alphabet, EventDecl};
use crate::error::{Error, Result};
use crate::generator::{explore, Generator};
use crate::ops::{
    is_nonblocking, language_equal, marked_subset, meet, require_closed_contained, trim, JointReach,
};
use crate::synthesis::{disabled_indices, is_controllable};

/// The observable event set of a natural projection.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProjectionSpec {
    pub observable: BTreeSet<String>,
}

impl ProjectionSpec {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Self {
        ProjectionSpec {
            observable: labels.into_iter().map(Into::into).collect(),
        }
    }

    /// Every event of `alphabet` observable.
    pub fn identity(alphabet: &Alphabet) -> Self {
        ProjectionSpec {
            observable: alphabet.labels(),
        }
    }

    pub fn is_observable(&self, label: &str) -> bool {
        self.observable.contains(label)
    }

    /// Observability mask over `alphabet`; every observable label must be declared.
    pub fn mask(&self, alphabet: &Alphabet) -> Result<Vec<bool>> {
        alphabet.mask(&self.observable)
    }

    /// Events of `alphabet` that are not observable.
    pub fn unobservable(&self, alphabet: &Alphabet) -> BTreeSet<String> {
        alphabet
            .labels()
            .into_iter()
            .filter(|l| !self.observable.contains(l))
            .collect()
    }
}

/// Projection of `a` together with the uncertainty cell behind each result state.
#[derive(Debug, Clone)]
pub struct Projected {
    pub generator: Generator,
    /// Sorted source-state sets, indexed like the states of `generator`.
    pub cells: Vec<Vec<usize>>,
}

fn unobservable_closure(a: &Generator, observable: &[bool], seed: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    let mut stack: Vec<usize> = Vec::new();
    for s in seed {
        if seen.insert(s) {
            stack.push(s);
        }
    }
    while let Some(s) = stack.pop() {
        for (e, &obs) in observable.iter().enumerate() {
            if obs {
                continue;
            }
            if let Some(t) = a.next(s, e) {
                if seen.insert(t) {
                    stack.push(t);
                }
            }
        }
    }
    seen.into_iter().collect()
}

/// Natural projection of `a` onto the observable events, with uncertainty cells.
pub fn project_with_cells(a: &Generator, p: &ProjectionSpec) -> Result<Projected> {
    let observable = p.mask(a.alphabet())?;
    let sub = a.alphabet().restrict(&p.observable);
    let to_source: Vec<usize> = sub.iter().map(|e| a.alphabet().index_of(&e.label).unwrap()).collect();
    let init = unobservable_closure(a, &observable, [0]);
    let (cells, delta) = explore(init, sub.len(), |cell, e| {
        let src_e = to_source[e];
        let succ: Vec<usize> = cell.iter().filter_map(|&x| a.next(x, src_e)).collect();
        (!succ.is_empty()).then(|| unobservable_closure(a, &observable, succ))
    });
    let marked = cells.iter().map(|c| c.iter().any(|&x| a.is_marked(x))).collect();
    Ok(Projected {
        generator: Generator::from_raw(format!("P_{}", a.name()), sub, marked, delta),
        cells,
    })
}

/// Natural projection: `L(result) = P(L(a))`, `Lm(result) = P(Lm(a))`.
pub fn project(a: &Generator, p: &ProjectionSpec) -> Result<Generator> {
    Ok(project_with_cells(a, p)?.generator)
}

/// Inverse projection of `b` into the larger alphabet `target`: every event of
/// `target` missing from `b` becomes a self-loop at every state.
pub fn inverse_project(b: &Generator, target: &Alphabet) -> Result<Generator> {
    for e in b.alphabet().iter() {
        match target.index_of(&e.label) {
            Some(i) if target.is_controllable(i) == e.controllable => {}
            _ => {
                return Err(Error::AlphabetMismatch(format!(
                    "event `{}` of `{}` is not in the target alphabet",
                    e.label,
                    b.name()
                )))
            }
        }
    }
    let extra: Vec<EventDecl> = target
        .iter()
        .filter(|e| !b.alphabet().contains(&e.label))
        .cloned()
        .collect();
    b.selfloop(&extra)?.reorder_alphabet(target)
}

/// `P⁻¹P(K̄) ∩ L(G) = K̄`. Marking is ignored.
pub fn is_normal(k: &Generator, g: &Generator, p: &ProjectionSpec) -> Result<bool> {
    k.alphabet().align(g.alphabet())?;
    require_closed_contained(k, g)?;
    let closure = k.mark_all();
    let lifted = inverse_project(&project(&closure, p)?, k.alphabet())?;
    let lhs = meet(&lifted, &g.mark_all())?;
    language_equal(&lhs, &closure)
}

/// `K̄(Σ − Σo) ∩ L(G) ⊆ K̄`: controllability with the unobservable events in the
/// role of the uncontrollable ones.
pub fn is_paranormal(k: &Generator, g: &Generator, p: &ProjectionSpec) -> Result<bool> {
    let joint = JointReach::new(k, g)?;
    let observable = p.mask(k.alphabet())?;
    let ok = joint.pairs().all(|(x, q)| {
        observable
            .iter()
            .enumerate()
            .filter(|(_, &obs)| !obs)
            .all(|(e, _)| g.next(q, joint.event_map[e]).is_none() || k.next(x, e).is_some())
    });
    Ok(ok)
}

/// Relative observability of `K` with respect to the ambient `C̄`, `G` and `P`.
///
/// Decided on a twin machine that tracks a string `s ∈ K̄` and a look-alike
/// `s' ∈ C̄` with `P(s) = P(s')`: observable events advance both, unobservable
/// events advance one side. Each reachable tuple is checked against both
/// conditions of the definition.
pub fn is_relative_observable(
    k: &Generator,
    c: &Generator,
    g: &Generator,
    p: &ProjectionSpec,
) -> Result<bool> {
    k.alphabet().align(g.alphabet())?;
    c.alphabet().align(g.alphabet())?;
    if !marked_subset(k, &c.reorder_alphabet(k.alphabet())?)? {
        return Err(Error::ContainmentViolated(format!(
            "Lm({}) is not contained in Lm({})",
            k.name(),
            c.name()
        )));
    }
    if !marked_subset(c, &g.reorder_alphabet(c.alphabet())?)? {
        return Err(Error::ContainmentViolated(format!(
            "Lm({}) is not contained in Lm({})",
            c.name(),
            g.name()
        )));
    }
    // Work in G's event order.
    let k = trim(&k.reorder_alphabet(g.alphabet())?);
    let c = trim(&c.reorder_alphabet(g.alphabet())?);
    if k.marked_states().next().is_none() {
        // K̄ is empty, nothing to check.
        return Ok(true);
    }
    let observable = p.mask(g.alphabet())?;
    let n_events = observable.len();

    type Tuple = (usize, Option<usize>, usize, usize);
    let violates = |&(k1, k2, _c2, g2): &Tuple| -> bool {
        let cond_i = (0..n_events).any(|e| {
            k.next(k1, e).is_some()
                && g.next(g2, e).is_some()
                && !k2.is_some_and(|k2| k.next(k2, e).is_some())
        });
        let cond_ii = k.is_marked(k1) && g.is_marked(g2) && !k2.is_some_and(|k2| k.is_marked(k2));
        cond_i || cond_ii
    };

    let init: Tuple = (0, Some(0), 0, 0);
    let mut seen: HashSet<Tuple> = HashSet::from([init]);
    let mut queue = VecDeque::from([init]);
    while let Some(t) = queue.pop_front() {
        if violates(&t) {
            return Ok(false);
        }
        let (k1, k2, c2, g2) = t;
        let mut push = |n: Tuple| {
            if seen.insert(n) {
                queue.push_back(n);
            }
        };
        for (e, &obs) in observable.iter().enumerate() {
            let advance_primed = || -> Option<(Option<usize>, usize, usize)> {
                let c2n = c.next(c2, e)?;
                let g2n = g.next(g2, e).expect("C̄ is contained in L(G)");
                Some((k2.and_then(|k2| k.next(k2, e)), c2n, g2n))
            };
            if obs {
                if let (Some(k1n), Some((k2n, c2n, g2n))) = (k.next(k1, e), advance_primed()) {
                    push((k1n, k2n, c2n, g2n));
                }
            } else {
                if let Some(k1n) = k.next(k1, e) {
                    push((k1n, k2, c2, g2));
                }
                if let Some((k2n, c2n, g2n)) = advance_primed() {
                    push((k1, k2n, c2n, g2n));
                }
            }
        }
    }
    Ok(true)
}

/// Plain observability: relative observability with `C = K`.
pub fn is_observable(k: &Generator, g: &Generator, p: &ProjectionSpec) -> Result<bool> {
    is_relative_observable(k, k, g, p)
}

/// A supervisor whose control action depends only on the observed string.
#[derive(Debug, Clone)]
pub struct FeasibleSupervisor {
    pub supervisor: Generator,
    /// Uncertainty cell (states of the original supervisor) behind each state.
    pub cells: Vec<Vec<usize>>,
    /// The closed loop with the plant blocks. Coreachability is not enforced.
    pub blocking: bool,
}

/// Builds the feasible supervisor from the projected supervisor over uncertainty
/// cells.
///
/// For a cell `y` and event `σ`: if some state of `y` disables `σ` the observable
/// transition is removed; if `σ` is unobservable, enabled at some state of `y`, and
/// either uncontrollable or disabled at no state of `y`, a self-loop is added.
pub fn build_feasible_supervisor(
    sup: &Generator,
    plant: &Generator,
    p: &ProjectionSpec,
) -> Result<FeasibleSupervisor> {
    sup.alphabet().align(plant.alphabet())?;
    require_closed_contained(sup, plant)?;
    if !is_controllable(sup, plant)? {
        return Err(Error::NotControllable(sup.name().to_string()));
    }
    let alphabet = sup.alphabet();
    let observable = p.mask(alphabet)?;
    let joint = JointReach::new(sup, plant)?;
    let disabled = disabled_indices(sup, &joint, plant);
    let is_disabled = |x: usize, e: usize| alphabet.is_controllable(e) && disabled[x].contains(&e);

    let projected = project_with_cells(sup, p)?;
    let ps = &projected.generator;
    let ps_index: Vec<Option<usize>> = alphabet.iter().map(|e| ps.alphabet().index_of(&e.label)).collect();

    let mut delta = Vec::with_capacity(projected.cells.len());
    for (y, cell) in projected.cells.iter().enumerate() {
        let row = (0..alphabet.len())
            .map(|e| {
                let forbidden = cell.iter().any(|&x| is_disabled(x, e));
                if forbidden {
                    return None;
                }
                if observable[e] {
                    ps.next(y, ps_index[e].expect("observable event in projection"))
                } else {
                    cell.iter().any(|&x| sup.next(x, e).is_some()).then_some(y)
                }
            })
            .collect();
        delta.push(row);
    }
    let marked = (0..ps.state_count()).map(|y| ps.is_marked(y)).collect();
    let raw = Generator::from_raw(format!("{}_f", sup.name()), alphabet.clone(), marked, delta);
    let (supervisor, order) = raw.restrict_canonical_with_map(&vec![true; raw.state_count()]);
    let cells = order.iter().map(|&y| projected.cells[y].clone()).collect();
    let blocking = !is_nonblocking(&meet(&supervisor, plant)?);
    Ok(FeasibleSupervisor {
        supervisor,
        cells,
        blocking,
    })
}
