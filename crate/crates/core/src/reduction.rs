//! Supervisor reduction by control congruence.
//!
//! States of a supervisor are lumped into cells when they are control consistent:
//! nothing enabled at one is disabled at the other, and they agree on marking
//! whenever the plant agrees on marking. Cells must also be closed under
//! successors, so the quotient is again deterministic.

use std::collections::BTreeSet;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::localization::ControlPartition;
use crate::ops::{language_equal, meet_all, require_contained, JointReach};
use crate::synthesis::disabled_indices;

/// Per-state control data of a supervisor relative to a plant.
#[derive(Debug, Clone)]
pub struct ReductionProfile {
    alphabet: Alphabet,
    /// `E(x)`: events defined at `x`.
    pub enabled: Vec<Vec<bool>>,
    /// `D(x)`: events the plant could execute after a string reaching `x` but the
    /// supervisor does not.
    pub disabled: Vec<Vec<bool>>,
    /// `D^k(x)`: `D(x)` restricted to the controllable events of block `k`.
    /// Empty rows when no partition was supplied.
    pub disabled_by_block: Vec<Vec<Vec<bool>>>,
    /// `M(x)`: `x` is marked in the supervisor.
    pub marked_in_sup: Vec<bool>,
    /// `T(x)`: some plant state reached jointly with `x` is marked.
    pub marked_in_plant: Vec<bool>,
}

fn labels_of(alphabet: &Alphabet, mask: &[bool]) -> BTreeSet<String> {
    mask.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(e, _)| alphabet.label(e).to_string())
        .collect()
}

impl ReductionProfile {
    pub fn state_count(&self) -> usize {
        self.enabled.len()
    }

    pub fn block_count(&self) -> usize {
        self.disabled_by_block.first().map_or(0, Vec::len)
    }

    pub fn enabled_labels(&self, x: usize) -> BTreeSet<String> {
        labels_of(&self.alphabet, &self.enabled[x])
    }

    pub fn disabled_labels(&self, x: usize) -> BTreeSet<String> {
        labels_of(&self.alphabet, &self.disabled[x])
    }

    pub fn disabled_by_block_labels(&self, x: usize, block: usize) -> BTreeSet<String> {
        labels_of(&self.alphabet, &self.disabled_by_block[x][block])
    }

    fn disabled_row(&self, x: usize, block: Option<usize>) -> &[bool] {
        match block {
            Some(k) => &self.disabled_by_block[x][k],
            None => &self.disabled[x],
        }
    }
}

/// Computes `E, D, D^k, M, T` from the joint reachability of `sup` and `plant`.
///
/// Requires `L(sup) ⊆ L(plant)` and `Lm(sup) ⊆ Lm(plant)`.
pub fn compute_profile(
    sup: &Generator,
    plant: &Generator,
    partition: Option<&ControlPartition>,
) -> Result<ReductionProfile> {
    sup.alphabet().align(plant.alphabet())?;
    require_contained(sup, plant)?;
    profile_unchecked(sup, plant, partition)
}

/// Profile without the containment precondition. Used for self-looped local
/// controllers, whose closed language may leave the plant's.
pub(crate) fn profile_unchecked(
    sup: &Generator,
    plant: &Generator,
    partition: Option<&ControlPartition>,
) -> Result<ReductionProfile> {
    let alphabet = sup.alphabet();
    let joint = JointReach::new(sup, plant)?;
    let n_events = alphabet.len();
    let block_masks = match partition {
        Some(p) => {
            p.validate(alphabet)?;
            p.blocks()
                .iter()
                .map(|b| alphabet.mask(b))
                .collect::<Result<Vec<_>>>()?
        }
        None => Vec::new(),
    };
    let disabled_idx = disabled_indices(sup, &joint, plant);
    let mut enabled = Vec::with_capacity(sup.state_count());
    let mut disabled = Vec::with_capacity(sup.state_count());
    let mut by_block = Vec::with_capacity(sup.state_count());
    for (x, dis) in disabled_idx.iter().enumerate() {
        enabled.push((0..n_events).map(|e| sup.next(x, e).is_some()).collect::<Vec<_>>());
        let mut d = vec![false; n_events];
        for &e in dis {
            d[e] = true;
        }
        by_block.push(
            block_masks
                .iter()
                .map(|m| d.iter().zip(m).map(|(&a, &b)| a && b).collect())
                .collect(),
        );
        disabled.push(d);
    }
    let marked_in_sup = (0..sup.state_count()).map(|x| sup.is_marked(x)).collect();
    let marked_in_plant = joint
        .partners
        .iter()
        .map(|ys| ys.iter().any(|&q| plant.is_marked(q)))
        .collect();
    Ok(ReductionProfile {
        alphabet: alphabet.clone(),
        enabled,
        disabled,
        disabled_by_block: by_block,
        marked_in_sup,
        marked_in_plant,
    })
}

/// Control consistency of two states, with `D` replaced by `D^k` when a block is given.
pub fn control_consistent(profile: &ReductionProfile, x: usize, y: usize, block: Option<usize>) -> bool {
    let clash = |a: usize, b: usize| {
        profile.enabled[a]
            .iter()
            .zip(profile.disabled_row(b, block))
            .any(|(&en, &dis)| en && dis)
    };
    if clash(x, y) || clash(y, x) {
        return false;
    }
    profile.marked_in_plant[x] != profile.marked_in_plant[y]
        || profile.marked_in_sup[x] == profile.marked_in_sup[y]
}

/// Pairwise-disjoint cells indexed by their smallest member.
#[derive(Debug, Clone)]
struct Congruence {
    cell_of: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl Congruence {
    fn discrete(n: usize) -> Self {
        Congruence {
            cell_of: (0..n).collect(),
            members: (0..n).map(|x| vec![x]).collect(),
        }
    }

    /// Merges the cells of `a` and `b` and, transitively, all successor cells the
    /// merge forces together. Fails if any forced pair is inconsistent.
    fn try_merge(&self, sup: &Generator, consistent: &[Vec<bool>], a: usize, b: usize) -> Option<Congruence> {
        let mut c = self.clone();
        let mut stack = vec![(a, b)];
        while let Some((x, y)) = stack.pop() {
            let (cx, cy) = (c.cell_of[x], c.cell_of[y]);
            if cx == cy {
                continue;
            }
            for &u in &c.members[cx] {
                for &v in &c.members[cy] {
                    if !consistent[u][v] {
                        return None;
                    }
                }
            }
            let (keep, gone) = if cx < cy { (cx, cy) } else { (cy, cx) };
            let moved = std::mem::take(&mut c.members[gone]);
            for &m in &moved {
                c.cell_of[m] = keep;
            }
            c.members[keep].extend(moved);
            for e in 0..sup.alphabet().len() {
                let mut succ = c.members[keep].iter().filter_map(|&m| sup.next(m, e));
                if let Some(first) = succ.next() {
                    for other in succ {
                        if c.cell_of[other] != c.cell_of[first] {
                            stack.push((first, other));
                        }
                    }
                }
            }
        }
        Some(c)
    }
}

/// Greedy control congruence: each state, in canonical order, joins the first
/// earlier cell it can be merged with (successor closure included).
fn greedy_congruence(sup: &Generator, profile: &ReductionProfile, block: Option<usize>) -> Congruence {
    let n = sup.state_count();
    let consistent: Vec<Vec<bool>> = (0..n)
        .map(|x| (0..n).map(|y| control_consistent(profile, x, y, block)).collect())
        .collect();
    let mut cells = Congruence::discrete(n);
    for x in 0..n {
        if cells.cell_of[x] != x {
            continue;
        }
        for target in 0..x {
            if cells.cell_of[target] != target || cells.members[target].is_empty() {
                continue;
            }
            if let Some(next) = cells.try_merge(sup, &consistent, x, target) {
                cells = next;
                break;
            }
        }
    }
    cells
}

/// Builds the quotient generator of a congruence and checks the cover conditions.
fn induced(sup: &Generator, profile: &ReductionProfile, cells: &Congruence, block: Option<usize>) -> Result<Generator> {
    let ids: Vec<usize> = (0..cells.members.len()).filter(|&i| !cells.members[i].is_empty()).collect();
    let mut position = vec![usize::MAX; cells.members.len()];
    for (p, &i) in ids.iter().enumerate() {
        position[i] = p;
    }
    let n_events = sup.alphabet().len();
    let mut delta = Vec::with_capacity(ids.len());
    let mut marked = Vec::with_capacity(ids.len());
    for &i in &ids {
        let members = &cells.members[i];
        for (a, &u) in members.iter().enumerate() {
            for &v in &members[a + 1..] {
                if !control_consistent(profile, u, v, block) {
                    return Err(Error::CoverViolation(format!("states {u} and {v} share a cell")));
                }
            }
        }
        let mut row = vec![None; n_events];
        for (e, slot) in row.iter_mut().enumerate() {
            let mut target = None;
            for &m in members {
                if let Some(t) = sup.next(m, e) {
                    let c = cells.cell_of[t];
                    match target {
                        Some(prev) if prev != c => {
                            return Err(Error::CoverViolation(format!(
                                "cell {i} has successors in two cells on `{}`",
                                sup.alphabet().label(e)
                            )))
                        }
                        _ => target = Some(c),
                    }
                }
            }
            *slot = target.map(|c| position[c]);
        }
        delta.push(row);
        marked.push(members.iter().any(|&m| sup.is_marked(m)));
    }
    let raw = Generator::from_raw(
        format!("{}_red", sup.name()),
        sup.alphabet().clone(),
        marked,
        delta,
    );
    debug_assert_eq!(position[cells.cell_of[0]], 0);
    Ok(raw.canonical())
}

pub(crate) fn reduce_with_profile(sup: &Generator, profile: &ReductionProfile, block: Option<usize>) -> Result<Generator> {
    if let Some(k) = block {
        let blocks = profile.block_count();
        if k >= blocks {
            return Err(Error::BadBlockIndex { index: k, blocks });
        }
    }
    let cells = greedy_congruence(sup, profile, block);
    induced(sup, profile, &cells, block)
}

/// Reduces `sup` by a greedy control congruence relative to `plant`.
///
/// With a partition and block index, consistency uses only the disablements of
/// that block. The result is control equivalent to `sup` with respect to the
/// plant; it is not claimed to be minimal.
pub fn reduce_supervisor(
    sup: &Generator,
    plant: &Generator,
    partition: Option<&ControlPartition>,
    block: Option<usize>,
) -> Result<Generator> {
    if block.is_some() && partition.is_none() {
        return Err(Error::BadBlockIndex {
            index: block.unwrap_or_default(),
            blocks: 0,
        });
    }
    let profile = compute_profile(sup, plant, partition)?;
    reduce_with_profile(sup, &profile, block)
}

/// The three conditions under which a reduced generator is "normal" with respect
/// to the supervisor it came from: every state is reached by a supervisor string,
/// every transition is taken by one, and every marked state is reached by a
/// marked one.
pub fn is_normal_reduction(reduced: &Generator, sup: &Generator) -> Result<bool> {
    let joint = JointReach::new(reduced, sup)?;
    for z in 0..reduced.state_count() {
        let partners = &joint.partners[z];
        if partners.is_empty() {
            return Ok(false);
        }
        for e in 0..reduced.alphabet().len() {
            if reduced.next(z, e).is_some()
                && !partners.iter().any(|&x| sup.next(x, joint.event_map[e]).is_some())
            {
                return Ok(false);
            }
        }
        if reduced.is_marked(z) && !partners.iter().any(|&x| sup.is_marked(x)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Lm(G) ∩ ⋂ Lm(Ci) = Lm(SUP)` and `L(G) ∩ ⋂ L(Ci) = L(SUP)`.
pub fn is_control_equivalent(plant: &Generator, sup: &Generator, controllers: &[Generator]) -> Result<bool> {
    let joint = meet_all(std::iter::once(plant).chain(controllers))?;
    language_equal(&joint, sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::{is_nonblocking, language_equal};
    use crate::synthesis::supremal_controllable;

    const EV: [(&str, bool); 2] = [("a", true), ("u", false)];

    #[test]
    fn one_state_supervisor_is_fixed() {
        let g = Generator::from_parts("G", &EV, 1, &[0], &[(0, "a", 0), (0, "u", 0)]).unwrap();
        let r = reduce_supervisor(&g, &g, None, None).unwrap();
        assert_eq!(r.state_count(), 1);
        assert!(language_equal(&r, &g).unwrap());
    }

    #[test]
    fn total_merge_to_one_state() {
        // a chain a·a·a fully allowed by a plant that allows exactly that chain
        let g = Generator::from_parts(
            "G",
            &EV,
            4,
            &[0, 1, 2, 3],
            &[(0, "a", 1), (1, "a", 2), (2, "a", 3)],
        )
        .unwrap();
        let r = reduce_supervisor(&g, &g, None, None).unwrap();
        assert_eq!(r.state_count(), 1);
        assert!(is_control_equivalent(&g, &g, &[r]).unwrap());
    }

    #[test]
    fn profile_of_au_supervisor() {
        let g = Generator::from_parts("G", &EV, 3, &[2], &[(0, "a", 1), (1, "u", 2)]).unwrap();
        let p = compute_profile(&g, &g, None).unwrap();
        assert_eq!(p.enabled_labels(0), BTreeSet::from(["a".to_string()]));
        assert_eq!(p.enabled_labels(1), BTreeSet::from(["u".to_string()]));
        assert!(p.enabled_labels(2).is_empty());
        assert!((0..3).all(|x| p.disabled_labels(x).is_empty()));
        assert_eq!(p.marked_in_plant, vec![false, false, true]);
        assert_eq!(p.marked_in_sup, p.marked_in_plant);
    }

    #[test]
    fn consistency_cases() {
        // Plant: 0 -a-> 1, both marked, a self-loop at 1. Supervisor marks only 1 and stops there.
        let g = Generator::from_parts("G", &EV, 2, &[0, 1], &[(0, "a", 1), (1, "a", 1)]).unwrap();
        let s = Generator::from_parts("S", &EV, 2, &[1], &[(0, "a", 1)]).unwrap();
        let p = profile_unchecked(&s, &g, None).unwrap();
        assert!(control_consistent(&p, 0, 0, None));
        // 0 enables a, 1 disables a
        assert!(!control_consistent(&p, 0, 1, None));

        // Failing only on marking: supervisor marks 1 but not 0, plant marks both,
        // nothing disabled.
        let g2 = Generator::from_parts("G", &EV, 2, &[0, 1], &[(0, "u", 1)]).unwrap();
        let s2 = Generator::from_parts("S", &EV, 2, &[1], &[(0, "u", 1)]).unwrap();
        let p2 = compute_profile(&s2, &g2, None).unwrap();
        assert!(p2.disabled.iter().flatten().all(|&d| !d));
        assert!(!control_consistent(&p2, 0, 1, None));
    }

    #[test]
    fn reduction_keeps_control_equivalence() {
        let ev = [("a", true), ("b", true), ("u", false)];
        let g = Generator::from_parts(
            "G",
            &ev,
            4,
            &[0, 3],
            &[(0, "a", 1), (1, "u", 2), (2, "b", 0), (0, "b", 3), (3, "a", 0), (1, "b", 3)],
        )
        .unwrap();
        let e = Generator::from_parts(
            "E",
            &ev,
            2,
            &[0],
            &[(0, "a", 1), (1, "u", 1), (1, "b", 0), (0, "b", 0)],
        )
        .unwrap();
        let sup = supremal_controllable(&e, &g).unwrap().supervisor;
        assert!(is_nonblocking(&sup));
        let r = reduce_supervisor(&sup, &g, None, None).unwrap();
        assert!(r.state_count() <= sup.state_count());
        assert!(is_normal_reduction(&r, &sup).unwrap());
        assert!(is_control_equivalent(&g, &sup, &[r]).unwrap());
    }

    #[test]
    fn block_without_partition_is_rejected() {
        let g = Generator::from_parts("G", &EV, 1, &[0], &[]).unwrap();
        assert!(matches!(
            reduce_supervisor(&g, &g, None, Some(0)),
            Err(Error::BadBlockIndex { .. })
        ));
    }
}
