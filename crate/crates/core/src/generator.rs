//! Deterministic finite-state generators.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use crate::alphabet::{is_token, Alphabet, EventDecl};
use crate::error::{Error, Result};

/// A deterministic generator over an attributed alphabet.
///
/// States are `0..state_count()`, the initial state is always `0`. The transition
/// function is stored densely as one row per state indexed by event position in the
/// alphabet. Generators are immutable values: every operation returns a new one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    name: String,
    alphabet: Alphabet,
    marked: Vec<bool>,
    delta: Vec<Vec<Option<usize>>>,
}

impl Generator {
    /// Builds a generator from explicit parts, validating ranges and determinism.
    pub fn new<'a>(
        name: &str,
        alphabet: Alphabet,
        states: usize,
        marked: impl IntoIterator<Item = usize>,
        transitions: impl IntoIterator<Item = (usize, &'a str, usize)>,
    ) -> Result<Self> {
        if !is_token(name) {
            return Err(Error::Semantic(format!("invalid generator name `{name}`")));
        }
        if states == 0 {
            return Err(Error::Semantic("a generator needs at least one state".into()));
        }
        let mut mark = vec![false; states];
        for m in marked {
            if m >= states {
                return Err(Error::StateOutOfRange { state: m, states });
            }
            mark[m] = true;
        }
        let mut delta = vec![vec![None; alphabet.len()]; states];
        for (src, label, dst) in transitions {
            for s in [src, dst] {
                if s >= states {
                    return Err(Error::StateOutOfRange { state: s, states });
                }
            }
            let e = alphabet.require(label)?;
            match delta[src][e] {
                Some(old) if old != dst => {
                    return Err(Error::Nondeterministic {
                        state: src,
                        label: label.to_string(),
                    })
                }
                _ => delta[src][e] = Some(dst),
            }
        }
        Ok(Generator {
            name: name.to_string(),
            alphabet,
            marked: mark,
            delta,
        })
    }

    /// Convenience constructor taking `(label, controllable)` pairs.
    pub fn from_parts(
        name: &str,
        events: &[(&str, bool)],
        states: usize,
        marked: &[usize],
        transitions: &[(usize, &str, usize)],
    ) -> Result<Self> {
        let alphabet = Alphabet::new(events.iter().map(|&(l, c)| EventDecl::new(l, c)))?;
        Self::new(name, alphabet, states, marked.iter().copied(), transitions.iter().copied())
    }

    pub(crate) fn from_raw(
        name: String,
        alphabet: Alphabet,
        marked: Vec<bool>,
        delta: Vec<Vec<Option<usize>>>,
    ) -> Self {
        debug_assert_eq!(marked.len(), delta.len());
        debug_assert!(delta.iter().all(|row| row.len() == alphabet.len()));
        debug_assert!(delta
            .iter()
            .flatten()
            .flatten()
            .all(|&t| t < marked.len()));
        Generator {
            name,
            alphabet,
            marked,
            delta,
        }
    }

    /// The canonical empty generator: one unmarked state, no transitions.
    pub fn empty(name: &str, alphabet: Alphabet) -> Self {
        let n = alphabet.len();
        Generator::from_raw(name.to_string(), alphabet, vec![false], vec![vec![None; n]])
    }

    /// One marked state with a self-loop on every event.
    pub fn universal(name: &str, alphabet: Alphabet) -> Self {
        let n = alphabet.len();
        Generator::from_raw(name.to_string(), alphabet, vec![true], vec![vec![Some(0); n]])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn is_marked(&self, state: usize) -> bool {
        self.marked[state]
    }

    pub fn marked_states(&self) -> impl Iterator<Item = usize> + '_ {
        self.marked
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
    }

    /// Successor of `state` on the event at alphabet position `event`.
    pub fn next(&self, state: usize, event: usize) -> Option<usize> {
        self.delta[state][event]
    }

    pub fn next_label(&self, state: usize, label: &str) -> Option<usize> {
        self.alphabet.index_of(label).and_then(|e| self.next(state, e))
    }

    pub fn transition_count(&self) -> usize {
        self.delta.iter().flatten().filter(|t| t.is_some()).count()
    }

    /// All transitions as `(src, event index, dst)`, sorted by source then event order.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.delta.iter().enumerate().flat_map(|(s, row)| {
            row.iter()
                .enumerate()
                .filter_map(move |(e, t)| t.map(|d| (s, e, d)))
        })
    }

    /// The state reached by a string of labels, if defined.
    pub fn run<S: AsRef<str>>(&self, word: &[S]) -> Option<usize> {
        let mut s = 0;
        for l in word {
            s = self.next_label(s, l.as_ref())?;
        }
        Some(s)
    }

    pub fn accepts<S: AsRef<str>>(&self, word: &[S]) -> bool {
        self.run(word).is_some_and(|s| self.marked[s])
    }

    pub fn is_empty_generator(&self) -> bool {
        self.state_count() == 1 && !self.marked[0] && self.delta[0].iter().all(|t| t.is_none())
    }

    /// Same structure with every state marked, so the marked language equals the
    /// closed language.
    pub fn mark_all(&self) -> Generator {
        let mut g = self.clone();
        g.marked.iter_mut().for_each(|m| *m = true);
        g
    }

    /// States reachable from the initial state.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(s) = stack.pop() {
            for &t in self.delta[s].iter().flatten() {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// States from which some marked state is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let n = self.state_count();
        let mut preds = vec![Vec::new(); n];
        for (s, _, d) in self.transitions() {
            preds[d].push(s);
        }
        let mut seen = self.marked.clone();
        let mut stack: Vec<usize> = self.marked_states().collect();
        while let Some(s) = stack.pop() {
            for &p in &preds[s] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Renumbers the reachable part in canonical breadth-first order, restricted to
    /// the states allowed by `keep`. Returns EMPTY when the initial state is dropped.
    pub(crate) fn restrict_canonical(&self, keep: &[bool]) -> Generator {
        self.restrict_canonical_with_map(keep).0
    }

    /// Like `restrict_canonical`, also returning the old index of every new state.
    pub(crate) fn restrict_canonical_with_map(&self, keep: &[bool]) -> (Generator, Vec<usize>) {
        if !keep[0] {
            return (Generator::empty(&self.name, self.alphabet.clone()), vec![0]);
        }
        let (states, delta) = explore(0usize, self.alphabet.len(), |&s, e| {
            self.delta[s][e].filter(|&t| keep[t])
        });
        let marked = states.iter().map(|&s| self.marked[s]).collect();
        (
            Generator::from_raw(self.name.clone(), self.alphabet.clone(), marked, delta),
            states,
        )
    }

    /// Reachable part in canonical numbering.
    pub fn canonical(&self) -> Generator {
        self.restrict_canonical(&vec![true; self.state_count()])
    }

    /// Adds each new event to the alphabet and a self-loop on it at every state.
    pub fn selfloop(&self, events: &[EventDecl]) -> Result<Generator> {
        let mut alphabet = self.alphabet.clone();
        for e in events {
            if alphabet.contains(&e.label) {
                return Err(Error::LabelCollision(e.label.clone()));
            }
            alphabet.push(e.clone())?;
        }
        let extra = events.len();
        let delta = self
            .delta
            .iter()
            .enumerate()
            .map(|(s, row)| {
                let mut row = row.clone();
                row.extend(std::iter::repeat_n(Some(s), extra));
                row
            })
            .collect();
        Ok(Generator::from_raw(
            self.name.clone(),
            alphabet,
            self.marked.clone(),
            delta,
        ))
    }

    /// Adds a self-loop on `event` at `state`. The event must be undefined there.
    pub(crate) fn add_selfloop(&mut self, state: usize, event: usize) {
        debug_assert!(self.delta[state][event].is_none());
        self.delta[state][event] = Some(state);
    }

    /// Reorders the alphabet to `order` (same events), keeping the state numbering.
    pub fn reorder_alphabet(&self, order: &Alphabet) -> Result<Generator> {
        let map = order.align(&self.alphabet)?;
        let delta = self
            .delta
            .iter()
            .map(|row| map.iter().map(|&j| row[j]).collect())
            .collect();
        Ok(Generator::from_raw(
            self.name.clone(),
            order.clone(),
            self.marked.clone(),
            delta,
        ))
    }

    /// Writes a Graphviz rendering. Carries no format guarantee.
    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph {} {{\n  rankdir=LR;\n  init [shape=point];\n", self.name);
        for s in 0..self.state_count() {
            let shape = if self.marked[s] { "doublecircle" } else { "circle" };
            out.push_str(&format!("  {s} [shape={shape}];\n"));
        }
        out.push_str("  init -> 0;\n");
        for (s, e, d) in self.transitions() {
            let style = if self.alphabet.is_controllable(e) { "" } else { ", style=dashed" };
            out.push_str(&format!("  {s} -> {d} [label=\"{}\"{style}];\n", self.alphabet.label(e)));
        }
        out.push_str("}\n");
        out
    }
}

/// Breadth-first exploration of an implicitly defined deterministic automaton.
///
/// Starting from `init`, successors are requested for every event index in order;
/// states are numbered by discovery. Returns the discovered keys and the dense
/// transition table.
pub(crate) fn explore<K, F>(init: K, events: usize, mut step: F) -> (Vec<K>, Vec<Vec<Option<usize>>>)
where
    K: Clone + Eq + Hash,
    F: FnMut(&K, usize) -> Option<K>,
{
    let mut index: HashMap<K, usize> = HashMap::new();
    let mut keys = vec![init.clone()];
    index.insert(init, 0);
    let mut delta: Vec<Vec<Option<usize>>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let mut row = vec![None; events];
        for (e, slot) in row.iter_mut().enumerate() {
            let Some(next) = step(&keys[i], e) else {
                continue;
            };
            let j = match index.get(&next) {
                Some(&j) => j,
                None => {
                    let j = keys.len();
                    index.insert(next.clone(), j);
                    keys.push(next);
                    queue.push_back(j);
                    j
                }
            };
            *slot = Some(j);
        }
        if delta.len() <= i {
            delta.resize(i + 1, Vec::new());
        }
        delta[i] = row;
    }
    (keys, delta)
}
