//! The two-vehicle guideway.
//!
//! Two vehicles travel from station A to station B over a single one-way track of
//! four sections. Vehicle `i` has states 0 (at A), 1–4 (in section 1–4) and 5 (at
//! B), and events `i1` (enter section 1, controllable), `i0` (section 1 to 2,
//! uncontrollable), `i3` (2 to 3, controllable), `i2` (3 to 4, uncontrollable) and
//! `i5` (4 to B, controllable). Arrival at B is the marked state.
//!
//! The specification forbids both vehicles from occupying one section at once.

use std::collections::BTreeMap;

use crate::alphabet::{Alphabet, EventDecl};
use crate::generator::Generator;
use crate::localization::ControlPartition;
use crate::ops::{meet_all, sync_product};

/// Plant, specification and the named partitions of the guideway.
#[derive(Debug, Clone)]
pub struct Guideway {
    pub vehicles: [Generator; 2],
    pub plant: Generator,
    pub spec: Generator,
    pub partitions: BTreeMap<String, ControlPartition>,
}

/// `(event suffix, controllable, source, target)` of a vehicle's moves.
const MOVES: [(&str, bool, usize, usize); 5] = [
    ("1", true, 0, 1),
    ("0", false, 1, 2),
    ("3", true, 2, 3),
    ("2", false, 3, 4),
    ("5", true, 4, 5),
];

/// Event that moves vehicle `i` into section `j` (and out of section `j − 1`).
fn entering(i: usize, j: usize) -> String {
    format!("{i}{}", MOVES[j - 1].0)
}

fn vehicle(i: usize) -> Generator {
    let events: Vec<(String, bool)> = MOVES.iter().map(|&(s, c, _, _)| (format!("{i}{s}"), c)).collect();
    let decls: Vec<(&str, bool)> = events.iter().map(|(l, c)| (l.as_str(), *c)).collect();
    let trans: Vec<(usize, &str, usize)> = MOVES
        .iter()
        .zip(&events)
        .map(|(&(_, _, s, d), (l, _))| (s, l.as_str(), d))
        .collect();
    Generator::from_parts(&format!("V{i}"), &decls, 6, &[5], &trans).expect("vehicle model")
}

/// Section `j` free (state 0) or occupied (state 1) over the whole plant alphabet.
fn exclusion(j: usize, alphabet: &Alphabet) -> Generator {
    let enter = [entering(1, j), entering(2, j)];
    let leave = [entering(1, j + 1), entering(2, j + 1)];
    let mut trans: Vec<(usize, &str, usize)> = Vec::new();
    for e in alphabet.iter() {
        let l = e.label.as_str();
        if enter.iter().any(|x| x == l) {
            trans.push((0, l, 1));
        } else if leave.iter().any(|x| x == l) {
            trans.push((1, l, 0));
        } else {
            trans.push((0, l, 0));
            trans.push((1, l, 1));
        }
    }
    Generator::new(&format!("SEC{j}"), alphabet.clone(), 2, [0, 1], trans).expect("section model")
}

/// Builds the guideway plant `V1 ∥ V2`, the mutual exclusion specification and the
/// partitions `per-component` and `per-event`.
pub fn gen_guideway() -> Guideway {
    let v1 = vehicle(1);
    let v2 = vehicle(2);
    let plant = sync_product(&v1, &v2).expect("disjoint alphabets").with_name("GW");
    let sections: Vec<Generator> = (1..=4).map(|j| exclusion(j, plant.alphabet())).collect();
    let spec = meet_all(&sections).expect("common alphabet").with_name("SPEC");

    let label = |s: &[&str]| -> Vec<String> { s.iter().map(|x| x.to_string()).collect() };
    let mut partitions = BTreeMap::new();
    let per_component = ControlPartition::new(
        "per_component",
        vec![
            label(&["11", "13", "15"]).into_iter().collect(),
            label(&["21", "23", "25"]).into_iter().collect(),
        ],
    )
    .expect("valid partition");
    let per_event = ControlPartition::new(
        "per_event",
        vec![
            label(&["11"]).into_iter().collect(),
            label(&["13"]).into_iter().collect(),
            label(&["21"]).into_iter().collect(),
            label(&["23"]).into_iter().collect(),
            label(&["15", "25"]).into_iter().collect(),
        ],
    )
    .expect("valid partition");
    partitions.insert("per-component".to_string(), per_component);
    partitions.insert("per-event".to_string(), per_event);

    Guideway {
        vehicles: [v1, v2],
        plant,
        spec,
        partitions,
    }
}

/// Alphabet of the guideway plant.
pub fn guideway_alphabet() -> Alphabet {
    Alphabet::new((1..=2).flat_map(|i| MOVES.iter().map(move |&(s, c, _, _)| EventDecl::new(format!("{i}{s}"), c))))
        .expect("distinct labels")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::is_nonblocking;

    #[test]
    fn plant_shape() {
        let gw = gen_guideway();
        assert_eq!(gw.vehicles[0].state_count(), 6);
        assert_eq!(gw.plant.state_count(), 36);
        assert!(is_nonblocking(&gw.plant));
        assert!(gw.plant.alphabet().same_events(&guideway_alphabet()));
        for p in gw.partitions.values() {
            p.validate(gw.plant.alphabet()).unwrap();
        }
    }
}
