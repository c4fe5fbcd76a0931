//! Language-level operations on generators: products, trimming and inclusion.

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::generator::{explore, Generator};

fn product_name(a: &Generator, b: &Generator) -> String {
    format!("{}_{}", a.name(), b.name())
}

/// Synchronous product. Shared events synchronize, private events interleave.
/// The result is the reachable part, canonically numbered.
pub fn sync_product(a: &Generator, b: &Generator) -> Result<Generator> {
    let alphabet = a.alphabet().union(b.alphabet())?;
    let in_a: Vec<Option<usize>> = alphabet.iter().map(|e| a.alphabet().index_of(&e.label)).collect();
    let in_b: Vec<Option<usize>> = alphabet.iter().map(|e| b.alphabet().index_of(&e.label)).collect();
    let (states, delta) = explore((0usize, 0usize), alphabet.len(), |&(x, y), e| {
        let nx = match in_a[e] {
            Some(ea) => a.next(x, ea)?,
            None => x,
        };
        let ny = match in_b[e] {
            Some(eb) => b.next(y, eb)?,
            None => y,
        };
        Some((nx, ny))
    });
    let marked = states.iter().map(|&(x, y)| a.is_marked(x) && b.is_marked(y)).collect();
    Ok(Generator::from_raw(product_name(a, b), alphabet, marked, delta))
}

/// Intersection of languages over one alphabet.
pub fn meet(a: &Generator, b: &Generator) -> Result<Generator> {
    let map = a.alphabet().align(b.alphabet())?;
    let (states, delta) = explore((0usize, 0usize), a.alphabet().len(), |&(x, y), e| {
        Some((a.next(x, e)?, b.next(y, map[e])?))
    });
    let marked = states.iter().map(|&(x, y)| a.is_marked(x) && b.is_marked(y)).collect();
    Ok(Generator::from_raw(product_name(a, b), a.alphabet().clone(), marked, delta))
}

/// Meet of a non-empty sequence of generators, folded left to right.
pub fn meet_all<'a>(gens: impl IntoIterator<Item = &'a Generator>) -> Result<Generator> {
    let mut it = gens.into_iter();
    let first = it
        .next()
        .ok_or(Error::ArityMismatch { expected: 1, found: 0 })?;
    let mut acc = first.canonical();
    for g in it {
        acc = meet(&acc, g)?;
    }
    Ok(acc)
}

/// Union of languages over one alphabet (closed and marked), via the completed product.
pub fn union(a: &Generator, b: &Generator) -> Result<Generator> {
    let map = a.alphabet().align(b.alphabet())?;
    let (states, delta) = explore((Some(0usize), Some(0usize)), a.alphabet().len(), |&(x, y), e| {
        let nx = x.and_then(|x| a.next(x, e));
        let ny = y.and_then(|y| b.next(y, map[e]));
        (nx.is_some() || ny.is_some()).then_some((nx, ny))
    });
    let marked = states
        .iter()
        .map(|&(x, y)| x.is_some_and(|x| a.is_marked(x)) || y.is_some_and(|y| b.is_marked(y)))
        .collect();
    Ok(Generator::from_raw(
        format!("{}_or_{}", a.name(), b.name()),
        a.alphabet().clone(),
        marked,
        delta,
    ))
}

/// Keeps exactly the states that are reachable and coreachable.
pub fn trim(a: &Generator) -> Generator {
    let reach = a.reachable();
    let coreach = a.coreachable();
    let keep: Vec<bool> = reach.iter().zip(&coreach).map(|(&r, &c)| r && c).collect();
    a.restrict_canonical(&keep)
}

/// Every reachable state can reach a marked state.
pub fn is_nonblocking(a: &Generator) -> bool {
    let reach = a.reachable();
    let coreach = a.coreachable();
    reach.iter().zip(&coreach).all(|(&r, &c)| !r || c)
}

/// `L(a) <= L(b)` and `Lm(a) <= Lm(b)`, decided by a product with the completed `b`.
pub fn language_subset(a: &Generator, b: &Generator) -> Result<bool> {
    Ok(subset_witness(a, b)?.is_none())
}

/// Shortest string witnessing a failure of `language_subset`, as event labels.
pub fn subset_witness(a: &Generator, b: &Generator) -> Result<Option<Vec<String>>> {
    let map = a.alphabet().align(b.alphabet())?;
    let (states, delta) = explore((0usize, Some(0usize)), a.alphabet().len(), |&(x, y), e| {
        let nx = a.next(x, e)?;
        Some((nx, y.and_then(|y| b.next(y, map[e]))))
    });
    let bad = |&(x, y): &(usize, Option<usize>)| match y {
        None => true,
        Some(y) => a.is_marked(x) && !b.is_marked(y),
    };
    let Some(target) = states.iter().position(bad) else {
        return Ok(None);
    };
    Ok(Some(path_to(&delta, target, a.alphabet())))
}

/// Shortest label path from state 0 to `target` in a BFS-numbered table.
pub(crate) fn path_to(delta: &[Vec<Option<usize>>], target: usize, alphabet: &Alphabet) -> Vec<String> {
    let n = delta.len();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(s) = queue.pop_front() {
        if s == target {
            break;
        }
        for (e, t) in delta[s].iter().enumerate() {
            if let Some(t) = *t {
                if !seen[t] {
                    seen[t] = true;
                    parent[t] = Some((s, e));
                    queue.push_back(t);
                }
            }
        }
    }
    let mut word = Vec::new();
    let mut cur = target;
    while let Some((p, e)) = parent[cur] {
        word.push(alphabet.label(e).to_string());
        cur = p;
    }
    word.reverse();
    word
}

/// Closed and marked languages coincide.
pub fn language_equal(a: &Generator, b: &Generator) -> Result<bool> {
    Ok(language_subset(a, b)? && language_subset(b, a)?)
}

/// Marked languages coincide; closed languages are not compared.
pub fn marked_language_equal(a: &Generator, b: &Generator) -> Result<bool> {
    language_equal(&trim(a), &trim(b))
}

/// `Lm(a) <= Lm(b)` only.
pub fn marked_subset(a: &Generator, b: &Generator) -> Result<bool> {
    language_subset(&trim(a), &trim(b))
}

/// Pairs of states reachable together in `a` and `b` by strings in `L(a) ∩ L(b)`,
/// grouped by the state of `a`.
///
/// This is the annotation from which disablement, plant-marking and similar
/// per-state predicates are read: an existential quantifier over strings reaching
/// a state of `a` becomes a test over the set of partner states of `b`.
#[derive(Debug, Clone)]
pub struct JointReach {
    /// For each state of `a`, the sorted states of `b` reached jointly with it.
    pub partners: Vec<Vec<usize>>,
    /// Event map from `a`'s alphabet positions to `b`'s.
    pub event_map: Vec<usize>,
}

impl JointReach {
    pub fn new(a: &Generator, b: &Generator) -> Result<Self> {
        let map = a.alphabet().align(b.alphabet())?;
        let (pairs, _) = explore((0usize, 0usize), a.alphabet().len(), |&(x, y), e| {
            Some((a.next(x, e)?, b.next(y, map[e])?))
        });
        let mut partners = vec![Vec::new(); a.state_count()];
        for (x, y) in pairs {
            partners[x].push(y);
        }
        partners.iter_mut().for_each(|p| p.sort_unstable());
        Ok(JointReach {
            partners,
            event_map: map,
        })
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.partners
            .iter()
            .enumerate()
            .flat_map(|(x, ys)| ys.iter().map(move |&y| (x, y)))
    }

    /// Some partner of `x` has `event` (an index in `a`'s alphabet) defined in `b`.
    pub fn enabled_in_partner(&self, b: &Generator, x: usize, event: usize) -> bool {
        self.partners[x]
            .iter()
            .any(|&y| b.next(y, self.event_map[event]).is_some())
    }
}

/// `L(a) <= L(b)`, ignoring marking.
pub fn closed_subset(a: &Generator, b: &Generator) -> Result<bool> {
    language_subset(&a.mark_all(), &b.mark_all())
}

/// Errors with `NotContained` unless `L(inner) <= L(outer)`.
pub fn require_closed_contained(inner: &Generator, outer: &Generator) -> Result<()> {
    if closed_subset(inner, outer)? {
        Ok(())
    } else {
        Err(Error::NotContained {
            inner: inner.name().to_string(),
            outer: outer.name().to_string(),
        })
    }
}

/// Errors with `NotContained` unless `L(inner) <= L(outer)` and `Lm(inner) <= Lm(outer)`.
pub fn require_contained(inner: &Generator, outer: &Generator) -> Result<()> {
    if language_subset(inner, outer)? {
        Ok(())
    } else {
        Err(Error::NotContained {
            inner: inner.name().to_string(),
            outer: outer.name().to_string(),
        })
    }
}
