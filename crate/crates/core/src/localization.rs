//! Localization of a monolithic supervisor over an arbitrary partition of the
//! controllable events.
//!
//! For each block a self-looped copy of the supervisor is built in which every
//! controllable event of the other blocks is re-enabled (as a self-loop) where the
//! supervisor had disabled it. Each copy can therefore only disable events of its
//! own block; each is then reduced with the block-relaxed consistency relation.

use std::collections::BTreeSet;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::ops::{language_equal, meet, meet_all, require_contained, JointReach};
use crate::reduction::{profile_unchecked, reduce_with_profile};

/// Pairwise-disjoint blocks of controllable events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlPartition {
    name: String,
    blocks: Vec<BTreeSet<String>>,
}

impl ControlPartition {
    /// Checks that blocks are nonempty and pairwise disjoint. Coverage of the
    /// controllable events is checked against an alphabet by [`validate`](Self::validate).
    pub fn new(name: &str, blocks: Vec<BTreeSet<String>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (i, b) in blocks.iter().enumerate() {
            if b.is_empty() {
                return Err(Error::InvalidPartition(format!("block {i} is empty")));
            }
            for l in b {
                if !seen.insert(l.clone()) {
                    return Err(Error::InvalidPartition(format!("event `{l}` is in two blocks")));
                }
            }
        }
        Ok(ControlPartition {
            name: name.to_string(),
            blocks,
        })
    }

    pub fn from_labels(name: &str, blocks: &[&[&str]]) -> Result<Self> {
        Self::new(
            name,
            blocks
                .iter()
                .map(|b| b.iter().map(|l| l.to_string()).collect())
                .collect(),
        )
    }

    /// The one-block partition of all controllable events.
    pub fn single(alphabet: &Alphabet) -> Result<Self> {
        Self::new("single", vec![alphabet.controllable_labels()])
    }

    /// One block per controllable event, in alphabet order.
    pub fn per_event(alphabet: &Alphabet) -> Result<Self> {
        Self::new(
            "per_event",
            alphabet
                .controllable_labels()
                .into_iter()
                .map(|l| BTreeSet::from([l]))
                .collect(),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn blocks(&self) -> &[BTreeSet<String>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block(&self, i: usize) -> Result<&BTreeSet<String>> {
        self.blocks.get(i).ok_or(Error::BadBlockIndex {
            index: i,
            blocks: self.blocks.len(),
        })
    }

    /// Index of the block containing `label`.
    pub fn block_of(&self, label: &str) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(label))
    }

    /// Every label is a declared controllable event and the blocks cover all of them.
    pub fn validate(&self, alphabet: &Alphabet) -> Result<()> {
        for b in &self.blocks {
            for l in b {
                let e = alphabet.require(l)?;
                if !alphabet.is_controllable(e) {
                    return Err(Error::InvalidPartition(format!("event `{l}` is uncontrollable")));
                }
            }
        }
        for l in alphabet.controllable_labels() {
            if self.block_of(&l).is_none() {
                return Err(Error::InvalidPartition(format!(
                    "controllable event `{l}` is in no block"
                )));
            }
        }
        Ok(())
    }
}

/// Self-looped supervisor copy for block `i`.
///
/// Keeps every transition of `sup`; for each controllable event outside block `i`
/// that is undefined at a state but executable by the plant after some string
/// reaching it, adds a self-loop there.
pub fn build_selflooped(
    sup: &Generator,
    plant: &Generator,
    partition: &ControlPartition,
    i: usize,
) -> Result<Generator> {
    require_contained(sup, plant)?;
    selflooped_unchecked(sup, plant, partition, i)
}

fn selflooped_unchecked(
    sup: &Generator,
    plant: &Generator,
    partition: &ControlPartition,
    i: usize,
) -> Result<Generator> {
    let alphabet = sup.alphabet();
    partition.validate(alphabet)?;
    let own = alphabet.mask(partition.block(i)?)?;
    let joint = JointReach::new(sup, plant)?;
    let mut out = sup.clone().with_name(&format!("{}_loc{i}", sup.name()));
    for x in 0..sup.state_count() {
        for (e, &mine) in own.iter().enumerate() {
            if alphabet.is_controllable(e)
                && !mine
                && sup.next(x, e).is_none()
                && joint.enabled_in_partner(plant, x, e)
            {
                out.add_selfloop(x, e);
            }
        }
    }
    Ok(out)
}

/// Local controllers for every block of a partition.
#[derive(Debug, Clone)]
pub struct LocalControllerSet {
    pub partition: ControlPartition,
    /// Self-looped supervisor copies, one per block.
    pub locals: Vec<Generator>,
    /// Reduced local controllers, parallel to `locals`.
    pub reduced: Vec<Generator>,
}

/// Reduces the block-`i` local controller with `D^i`-relaxed consistency.
pub fn reduce_local(local: &Generator, plant: &Generator, partition: &ControlPartition, i: usize) -> Result<Generator> {
    local.alphabet().align(plant.alphabet())?;
    partition.block(i)?;
    let profile = profile_unchecked(local, plant, Some(partition))?;
    reduce_with_profile(local, &profile, Some(i))
}

/// Builds and reduces one local controller per block.
pub fn localize(sup: &Generator, plant: &Generator, partition: &ControlPartition) -> Result<LocalControllerSet> {
    require_contained(sup, plant)?;
    partition.validate(sup.alphabet())?;
    let locals = (0..partition.len())
        .map(|i| selflooped_unchecked(sup, plant, partition, i))
        .collect::<Result<Vec<_>>>()?;
    let reduced = locals
        .iter()
        .enumerate()
        .map(|(i, l)| reduce_local(l, plant, partition, i).map(|r| r.with_name(&format!("{}_red", l.name()))))
        .collect::<Result<Vec<_>>>()?;
    Ok(LocalControllerSet {
        partition: partition.clone(),
        locals,
        reduced,
    })
}

fn disables_only(
    loc: &Generator,
    plant: &Generator,
    context: Option<&Generator>,
    block: &BTreeSet<String>,
) -> Result<bool> {
    let to_plant = loc.alphabet().align(plant.alphabet())?;
    let to_ctx = match context {
        Some(c) => Some(loc.alphabet().align(c.alphabet())?),
        None => None,
    };
    let allowed = loc.alphabet().mask(block.iter().filter(|l| loc.alphabet().contains(l)))?;
    for l in block {
        loc.alphabet().require(l)?;
    }
    let n_events = loc.alphabet().len();
    let mut seen = std::collections::HashSet::new();
    let init = (0usize, 0usize, 0usize);
    seen.insert(init);
    let mut stack = vec![init];
    while let Some((l, q, c)) = stack.pop() {
        for e in 0..n_events {
            let Some(qn) = plant.next(q, to_plant[e]) else {
                continue;
            };
            let Some(ln) = loc.next(l, e) else {
                if !allowed[e] {
                    return Ok(false);
                }
                continue;
            };
            let cn = match (context, &to_ctx) {
                (Some(ctx), Some(m)) => match ctx.next(c, m[e]) {
                    Some(cn) => cn,
                    None => continue,
                },
                _ => 0,
            };
            if seen.insert((ln, qn, cn)) {
                stack.push((ln, qn, cn));
            }
        }
    }
    Ok(true)
}

/// `loc` can disable only events of `block`: whenever the plant can execute an
/// event after a string accepted by both, and `loc` cannot, the event is in `block`.
pub fn is_local_controller(loc: &Generator, plant: &Generator, block: &BTreeSet<String>) -> Result<bool> {
    disables_only(loc, plant, None, block)
}

/// The same property, restricted to strings that also lie in `L(sup)`, i.e. to the
/// behaviour actually reachable in closed loop with the monolithic supervisor.
pub fn is_local_controller_within(
    loc: &Generator,
    plant: &Generator,
    sup: &Generator,
    block: &BTreeSet<String>,
) -> Result<bool> {
    disables_only(loc, plant, Some(sup), block)
}

/// `⋂ (Lm(Si) ∩ Lm(G)) = Lm(SUP)` and `⋂ (L(Si) ∩ L(G)) = L(SUP)`.
pub fn verify_proposition1(plant: &Generator, sup: &Generator, locals: &[Generator]) -> Result<bool> {
    let with_plant = locals
        .iter()
        .map(|l| meet(l, plant))
        .collect::<Result<Vec<_>>>()?;
    let joint = meet_all(&with_plant)?;
    language_equal(&joint, &meet(sup, plant)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_validation() {
        assert!(matches!(
            ControlPartition::from_labels("p", &[&["a"], &["a", "b"]]),
            Err(Error::InvalidPartition(_))
        ));
        assert!(matches!(
            ControlPartition::from_labels("p", &[&[]]),
            Err(Error::InvalidPartition(_))
        ));
        let g = Generator::from_parts("G", &[("a", true), ("b", true), ("u", false)], 1, &[0], &[]).unwrap();
        let partial = ControlPartition::from_labels("p", &[&["a"]]).unwrap();
        assert!(matches!(partial.validate(g.alphabet()), Err(Error::InvalidPartition(_))));
        let unc = ControlPartition::from_labels("p", &[&["a", "b", "u"]]).unwrap();
        assert!(matches!(unc.validate(g.alphabet()), Err(Error::InvalidPartition(_))));
        let ok = ControlPartition::from_labels("p", &[&["a"], &["b"]]).unwrap();
        assert!(ok.validate(g.alphabet()).is_ok());
        assert!(matches!(ok.block(2), Err(Error::BadBlockIndex { .. })));
    }

    fn toy() -> (Generator, Generator) {
        // Plant: a and b each once in any order. Supervisor: a must come before b.
        let ev = [("a", true), ("b", true)];
        let g = Generator::from_parts(
            "G",
            &ev,
            4,
            &[3],
            &[(0, "a", 1), (0, "b", 2), (1, "b", 3), (2, "a", 3)],
        )
        .unwrap();
        let sup = Generator::from_parts("S", &ev, 3, &[2], &[(0, "a", 1), (1, "b", 2)]).unwrap();
        (g, sup)
    }

    #[test]
    fn selfloop_rules() {
        let (g, sup) = toy();
        let single = ControlPartition::single(g.alphabet()).unwrap();
        assert_eq!(build_selflooped(&sup, &g, &single, 0).unwrap().with_name("S"), sup);

        let p = ControlPartition::from_labels("p", &[&["a"], &["b"]]).unwrap();
        // block {a}: b is re-enabled at state 0
        let s0 = build_selflooped(&sup, &g, &p, 0).unwrap();
        assert_eq!(s0.next_label(0, "b"), Some(0));
        assert_eq!(s0.transition_count(), 3);
        // block {b}: nothing of a is disabled
        let s1 = build_selflooped(&sup, &g, &p, 1).unwrap();
        assert_eq!(s1.transition_count(), 2);
        assert!(is_local_controller(&s1, &g, p.block(1).unwrap()).unwrap());
        assert!(verify_proposition1(&g, &sup, &[s0, s1]).unwrap());
    }

    #[test]
    fn local_controller_examples() {
        let (g, sup) = toy();
        let uni = Generator::universal("U", g.alphabet().clone());
        assert!(is_local_controller(&uni, &g, &BTreeSet::new()).unwrap());
        assert!(is_local_controller(&sup, &g, &g.alphabet().controllable_labels()).unwrap());
        assert!(!is_local_controller(&sup, &g, &BTreeSet::from(["a".to_string()])).unwrap());
    }

    #[test]
    fn localize_toy() {
        let (g, sup) = toy();
        let p = ControlPartition::from_labels("p", &[&["a"], &["b"]]).unwrap();
        let set = localize(&sup, &g, &p).unwrap();
        assert_eq!(set.reduced.len(), 2);
        assert!(crate::reduction::is_control_equivalent(&g, &sup, &set.reduced).unwrap());
        // Block {a} disables nothing, but the states after `a` and after `ab` must
        // stay apart: both see a marked plant state and only one of them is marked.
        assert_eq!(set.reduced[0].state_count(), 2);
        assert!(set.reduced[0].state_count() <= set.locals[0].state_count());
    }
}
