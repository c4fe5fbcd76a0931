//! Controllability and supremal controllable sublanguage synthesis.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::generator::{explore, Generator};
use crate::ops::{require_closed_contained, JointReach};

/// A synthesized supervisor together with its disablement table.
#[derive(Debug, Clone)]
pub struct SynthesisResult {
    /// Trim recognizer of the supremal controllable sublanguage.
    pub supervisor: Generator,
    /// For each supervisor state, the controllable events it disables. For an EMPTY
    /// supervisor the uncontrollable events it would cut are omitted.
    pub disabled: Vec<BTreeSet<String>>,
}

/// `K̄Σu ∩ L(G) ⊆ K̄`, checked over jointly reachable state pairs.
///
/// The EMPTY generator denotes the empty language and is always controllable.
pub fn is_controllable(k: &Generator, g: &Generator) -> Result<bool> {
    let joint = JointReach::new(k, g)?;
    if k.is_empty_generator() {
        return Ok(true);
    }
    let alphabet = k.alphabet();
    let ok = joint.pairs().all(|(x, q)| {
        (0..alphabet.len())
            .filter(|&e| !alphabet.is_controllable(e))
            .all(|e| g.next(q, joint.event_map[e]).is_none() || k.next(x, e).is_some())
    });
    Ok(ok)
}

/// Supremal controllable sublanguage of `Lm(E) ∩ Lm(G)` with respect to `L(G)`.
///
/// Works on the product `E × G`: states where the plant can fire an uncontrollable
/// event that the product cannot follow are deleted, then the result is trimmed,
/// and the two steps repeat until nothing changes.
pub fn supremal_controllable(spec: &Generator, plant: &Generator) -> Result<SynthesisResult> {
    let map = spec.alphabet().align(plant.alphabet())?;
    let alphabet = spec.alphabet();
    let n_events = alphabet.len();
    let (pairs, delta) = explore((0usize, 0usize), n_events, |&(x, q), e| {
        Some((spec.next(x, e)?, plant.next(q, map[e])?))
    });
    let n = pairs.len();
    let product_marked: Vec<bool> = pairs
        .iter()
        .map(|&(x, q)| spec.is_marked(x) && plant.is_marked(q))
        .collect();
    let uncontrollable: Vec<usize> = (0..n_events).filter(|&e| !alphabet.is_controllable(e)).collect();

    let mut good = vec![true; n];
    loop {
        let mut changed = false;
        for i in 0..n {
            if !good[i] {
                continue;
            }
            let q = pairs[i].1;
            let bad = uncontrollable.iter().any(|&e| {
                plant.next(q, map[e]).is_some() && !delta[i][e].is_some_and(|t| good[t])
            });
            if bad {
                good[i] = false;
                changed = true;
            }
        }
        let keep = live_states(&delta, &product_marked, &good);
        for i in 0..n {
            if good[i] && !keep[i] {
                good[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let product = Generator::from_raw(
        format!("sup_{}_{}", spec.name(), plant.name()),
        alphabet.clone(),
        product_marked,
        delta,
    );
    let supervisor = product.restrict_canonical(&good);
    let disabled = disabled_events(&supervisor, plant)?
        .into_iter()
        .map(|d| {
            d.into_iter()
                .filter(|l| alphabet.index_of(l).is_some_and(|e| alphabet.is_controllable(e)))
                .collect()
        })
        .collect();
    Ok(SynthesisResult {
        supervisor,
        disabled,
    })
}

/// States both reachable and coreachable within the `allowed` subgraph.
fn live_states(delta: &[Vec<Option<usize>>], marked: &[bool], allowed: &[bool]) -> Vec<bool> {
    let n = delta.len();
    let mut reach = vec![false; n];
    if allowed[0] {
        reach[0] = true;
        let mut stack = vec![0];
        while let Some(s) = stack.pop() {
            for &t in delta[s].iter().flatten() {
                if allowed[t] && !reach[t] {
                    reach[t] = true;
                    stack.push(t);
                }
            }
        }
    }
    let mut preds = vec![Vec::new(); n];
    for (s, row) in delta.iter().enumerate() {
        if !reach[s] {
            continue;
        }
        for &t in row.iter().flatten() {
            if reach[t] {
                preds[t].push(s);
            }
        }
    }
    let mut co = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&s| reach[s] && marked[s]).collect();
    for &s in &stack {
        co[s] = true;
    }
    while let Some(s) = stack.pop() {
        for &p in &preds[s] {
            if !co[p] {
                co[p] = true;
                stack.push(p);
            }
        }
    }
    co
}

/// Per-state event indices that the plant could execute but the supervisor does not.
pub(crate) fn disabled_indices(sup: &Generator, joint: &JointReach, plant: &Generator) -> Vec<Vec<usize>> {
    (0..sup.state_count())
        .map(|x| {
            (0..sup.alphabet().len())
                .filter(|&e| sup.next(x, e).is_none() && joint.enabled_in_partner(plant, x, e))
                .collect()
        })
        .collect()
}

/// `D(x)`: events undefined at supervisor state `x` although the plant can execute
/// them after some string reaching `x`.
pub fn disabled_events(sup: &Generator, plant: &Generator) -> Result<Vec<BTreeSet<String>>> {
    require_closed_contained(sup, plant)?;
    let joint = JointReach::new(sup, plant)?;
    Ok(disabled_indices(sup, &joint, plant)
        .into_iter()
        .map(|es| es.into_iter().map(|e| sup.alphabet().label(e).to_string()).collect())
        .collect())
}
