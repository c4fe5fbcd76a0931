//! Distribution of a supervisor under partial observation.
//!
//! Covers coparanormality of a family of local languages, decomposability and
//! conormality against a family of projections, the feasible local controllers
//! built from a feasible supervisor, and the decomposition of a relatively
//! observable supervisor along two unobservable controllable witnesses.

use std::collections::BTreeSet;

use crate::alphabet::Alphabet;
use crate::error::{Error, Hypothesis, Result};
use crate::generator::Generator;
use crate::localization::ControlPartition;
use crate::observation::{
    build_feasible_supervisor, inverse_project, is_paranormal, is_relative_observable, project,
    FeasibleSupervisor, ProjectionSpec,
};
use crate::ops::{marked_language_equal, marked_subset, meet, meet_all, union};

/// One projection per block of a partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionFamily {
    pub specs: Vec<ProjectionSpec>,
}

impl ProjectionFamily {
    pub fn new(specs: Vec<ProjectionSpec>) -> Self {
        ProjectionFamily { specs }
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }

    /// `Σ^i = Σ − ⋃_{j≠i} H_j`: each channel loses the `hidden` events of every
    /// other block.
    pub fn excluding_others(alphabet: &Alphabet, hidden: &[BTreeSet<String>]) -> Self {
        let specs = (0..hidden.len())
            .map(|i| {
                let mut obs = alphabet.labels();
                for (j, h) in hidden.iter().enumerate() {
                    if j != i {
                        obs.retain(|l| !h.contains(l));
                    }
                }
                ProjectionSpec { observable: obs }
            })
            .collect();
        ProjectionFamily { specs }
    }

    /// Channel `i` sees everything except the controllable events of other blocks.
    pub fn from_partition(alphabet: &Alphabet, partition: &ControlPartition) -> Self {
        Self::excluding_others(alphabet, partition.blocks())
    }

    /// Channel `i` sees everything except the unobservable controllable events of
    /// other blocks.
    pub fn from_partition_observation(
        alphabet: &Alphabet,
        partition: &ControlPartition,
        observation: &ProjectionSpec,
    ) -> Self {
        let hidden: Vec<BTreeSet<String>> = partition
            .blocks()
            .iter()
            .map(|b| b.iter().filter(|l| !observation.is_observable(l)).cloned().collect())
            .collect();
        Self::excluding_others(alphabet, &hidden)
    }
}

/// Feasible local controller for block `i`: the feasible supervisor with every
/// controllable event of other blocks self-looped wherever it is undefined.
///
/// The self-loops are added whether or not the plant can execute the event there,
/// so these events become self-loops at every state.
pub fn build_feasible_local(
    supf: &Generator,
    plant: &Generator,
    partition: &ControlPartition,
    i: usize,
) -> Result<Generator> {
    supf.alphabet().align(plant.alphabet())?;
    let alphabet = supf.alphabet();
    partition.validate(alphabet)?;
    let own = alphabet.mask(partition.block(i)?)?;
    let mut out = supf.clone().with_name(&format!("{}_loc{i}", supf.name()));
    for x in 0..out.state_count() {
        for (e, &mine) in own.iter().enumerate() {
            if alphabet.is_controllable(e) && !mine && out.next(x, e).is_none() {
                out.add_selfloop(x, e);
            }
        }
    }
    Ok(out)
}

/// Each `locals[k]` is paranormal for channel `k`, and the local languages met
/// with the plant intersect exactly to `Lm(K)`.
pub fn is_coparanormal(
    k: &Generator,
    plant: &Generator,
    family: &ProjectionFamily,
    locals: &[Generator],
) -> Result<bool> {
    if locals.len() != family.len() {
        return Err(Error::ArityMismatch {
            expected: family.len(),
            found: locals.len(),
        });
    }
    k.alphabet().align(plant.alphabet())?;
    for (loc, spec) in locals.iter().zip(&family.specs) {
        if !is_paranormal(loc, plant, spec)? {
            return Ok(false);
        }
    }
    let with_plant = locals
        .iter()
        .map(|l| meet(l, plant))
        .collect::<Result<Vec<_>>>()?;
    marked_language_equal(&meet_all(&with_plant)?, k)
}

fn lifted_projections(k: &Generator, family: &ProjectionFamily) -> Result<Vec<Generator>> {
    family
        .specs
        .iter()
        .map(|p| inverse_project(&project(k, p)?, k.alphabet()))
        .collect()
}

fn require_marked_contained(k: &Generator, plant: &Generator) -> Result<()> {
    k.alphabet().align(plant.alphabet())?;
    if marked_subset(k, &plant.reorder_alphabet(k.alphabet())?)? {
        Ok(())
    } else {
        Err(Error::NotContained {
            inner: k.name().to_string(),
            outer: plant.name().to_string(),
        })
    }
}

/// `Lm(K) = ⋂_k P_k⁻¹P_k(Lm(K)) ∩ Lm(G)`.
pub fn is_decomposable(k: &Generator, plant: &Generator, family: &ProjectionFamily) -> Result<bool> {
    require_marked_contained(k, plant)?;
    if family.is_empty() {
        return Err(Error::ArityMismatch { expected: 1, found: 0 });
    }
    let mut parts = lifted_projections(k, family)?;
    parts.push(plant.reorder_alphabet(k.alphabet())?);
    marked_language_equal(&meet_all(&parts)?, k)
}

/// `Lm(K) = (⋃_k P_k⁻¹P_k(Lm(K))) ∩ Lm(G)`.
pub fn is_conormal(k: &Generator, plant: &Generator, family: &ProjectionFamily) -> Result<bool> {
    require_marked_contained(k, plant)?;
    let lifted = lifted_projections(k, family)?;
    let Some((first, rest)) = lifted.split_first() else {
        return Err(Error::ArityMismatch { expected: 1, found: 0 });
    };
    let mut acc = first.clone();
    for l in rest {
        acc = union(&acc, l)?;
    }
    let rhs = meet(&acc, &plant.reorder_alphabet(k.alphabet())?)?;
    marked_language_equal(&rhs, k)
}

/// Unobservable controllable events of each block, in alphabet order.
fn unobservable_controllable(
    alphabet: &Alphabet,
    partition: &ControlPartition,
    observation: &ProjectionSpec,
) -> Vec<Vec<String>> {
    partition
        .blocks()
        .iter()
        .map(|b| {
            alphabet
                .iter()
                .filter(|e| b.contains(&e.label) && !observation.is_observable(&e.label))
                .map(|e| e.label.clone())
                .collect()
        })
        .collect()
}

/// True iff every event labelled `label` is a self-loop at every state of `g`.
fn selflooped_everywhere(g: &Generator, label: &str) -> bool {
    (0..g.state_count()).all(|x| g.next_label(x, label) == Some(x))
}

fn require_observable(
    sup: &Generator,
    plant: &Generator,
    observation: &ProjectionSpec,
    ambient: Option<&Generator>,
) -> Result<()> {
    let c = ambient.unwrap_or(sup);
    if is_relative_observable(sup, c, plant, observation)? {
        Ok(())
    } else {
        Err(Error::HypothesisUnmet(Hypothesis::RelativeObservability))
    }
}

/// Feasible supervisor and its local controllers for every block.
fn feasible_locals(
    sup: &Generator,
    plant: &Generator,
    observation: &ProjectionSpec,
    partition: &ControlPartition,
) -> Result<(FeasibleSupervisor, Vec<Generator>)> {
    partition.validate(sup.alphabet())?;
    let feasible = build_feasible_supervisor(sup, plant, observation)?;
    let locals = (0..partition.len())
        .map(|i| build_feasible_local(&feasible.supervisor, plant, partition, i))
        .collect::<Result<Vec<_>>>()?;
    Ok((feasible, locals))
}

/// Every unobservable controllable event of block `i` is a self-loop at every
/// state of every feasible local controller `j ≠ i`.
///
/// Requires the supervisor to be observable (relative observability with
/// `C = SUP`); otherwise fails with `HypothesisUnmet`.
pub fn check_lemma1(
    sup: &Generator,
    plant: &Generator,
    observation: &ProjectionSpec,
    partition: &ControlPartition,
) -> Result<bool> {
    require_observable(sup, plant, observation, None)?;
    let (_, locals) = feasible_locals(sup, plant, observation, partition)?;
    Ok(lemma1_scan(sup.alphabet(), partition, observation, &locals))
}

fn lemma1_scan(
    alphabet: &Alphabet,
    partition: &ControlPartition,
    observation: &ProjectionSpec,
    locals: &[Generator],
) -> bool {
    let hidden = unobservable_controllable(alphabet, partition, observation);
    hidden.iter().enumerate().all(|(i, events)| {
        locals
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .all(|(_, s)| events.iter().all(|l| selflooped_everywhere(s, l)))
    })
}

/// Output of [`decompose_by_theorem1`].
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// The projection channels, one per block.
    pub family: ProjectionFamily,
    /// Chosen unobservable controllable event of each block.
    pub witnesses: Vec<String>,
    /// The feasible supervisor the local controllers were derived from.
    pub feasible: FeasibleSupervisor,
    /// Feasible local controllers, one per block, over the full alphabet.
    pub feasible_locals: Vec<Generator>,
    /// `P_i⁻¹P_i` of each feasible local controller: what channel `i` can implement.
    pub locals: Vec<Generator>,
}

/// Decomposes a relatively observable supervisor over two blocks that each hold
/// an unobservable controllable event.
///
/// With `generalized` unset the partition must have exactly two blocks and
/// channel `i` loses only the witness of the other block. With `generalized` set
/// any number of blocks is accepted and channel `i` loses every unobservable
/// controllable event of the other blocks. `ambient` is the language relative to
/// which observability is required; by default the supervisor itself.
///
/// The result is verified: if the supervisor is not decomposable with respect to
/// the returned family, `DecompositionFailed` is returned.
pub fn decompose_by_theorem1(
    sup: &Generator,
    plant: &Generator,
    observation: &ProjectionSpec,
    partition: &ControlPartition,
    generalized: bool,
    ambient: Option<&Generator>,
) -> Result<Decomposition> {
    sup.alphabet().align(plant.alphabet())?;
    partition.validate(sup.alphabet())?;
    if !generalized && partition.len() != 2 {
        return Err(Error::HypothesisUnmet(Hypothesis::BlockCount {
            expected: 2,
            found: partition.len(),
        }));
    }
    let alphabet = sup.alphabet();
    let hidden = unobservable_controllable(alphabet, partition, observation);
    if let Some(block) = hidden.iter().position(|h| h.is_empty()) {
        return Err(Error::HypothesisUnmet(Hypothesis::NoWitness { block }));
    }
    require_observable(sup, plant, observation, ambient)?;

    let witnesses: Vec<String> = hidden.iter().map(|h| h[0].clone()).collect();
    let family = if generalized {
        let sets: Vec<BTreeSet<String>> = hidden.iter().map(|h| h.iter().cloned().collect()).collect();
        ProjectionFamily::excluding_others(alphabet, &sets)
    } else {
        let sets: Vec<BTreeSet<String>> = witnesses.iter().map(|w| BTreeSet::from([w.clone()])).collect();
        ProjectionFamily::excluding_others(alphabet, &sets)
    };

    let (feasible, feasible_locals) = feasible_locals(sup, plant, observation, partition)?;
    let locals = feasible_locals
        .iter()
        .zip(&family.specs)
        .enumerate()
        .map(|(i, (s, p))| {
            Ok(inverse_project(&project(s, p)?, alphabet)?.with_name(&format!("{}_ch{i}", sup.name())))
        })
        .collect::<Result<Vec<_>>>()?;

    if !is_decomposable(sup, plant, &family)? {
        return Err(Error::DecompositionFailed(format!(
            "`{}` is not decomposable for channels hiding {}",
            sup.name(),
            witnesses.join(", ")
        )));
    }
    Ok(Decomposition {
        family,
        witnesses,
        feasible,
        feasible_locals,
        locals,
    })
}

/// Structural scan of a decomposition's feasible local controllers: each
/// unobservable controllable event is a self-loop everywhere outside its own block.
pub fn lemma1_holds(
    decomposition: &Decomposition,
    partition: &ControlPartition,
    observation: &ProjectionSpec,
) -> bool {
    match decomposition.feasible_locals.first() {
        Some(first) => lemma1_scan(first.alphabet(), partition, observation, &decomposition.feasible_locals),
        None => true,
    }
}
