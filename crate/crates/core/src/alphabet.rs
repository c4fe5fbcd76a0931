//! Event declarations and ordered alphabets.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};

/// A single event: a label plus its controllability attribute.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EventDecl {
    pub label: String,
    pub controllable: bool,
}

impl EventDecl {
    pub fn new(label: impl Into<String>, controllable: bool) -> Self {
        EventDecl {
            label: label.into(),
            controllable,
        }
    }

    pub fn controllable(label: impl Into<String>) -> Self {
        Self::new(label, true)
    }

    pub fn uncontrollable(label: impl Into<String>) -> Self {
        Self::new(label, false)
    }
}

/// Labels and generator names are tokens: non-empty, ASCII alphanumeric or underscore.
pub fn is_token(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Ordered set of events. Iteration follows declaration order, which is also the
/// order used for canonical state numbering.
#[derive(Debug, Clone, Default)]
pub struct Alphabet {
    events: Vec<EventDecl>,
    lookup: HashMap<String, usize>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.events == other.events
    }
}

impl Eq for Alphabet {}

impl Alphabet {
    pub fn new(events: impl IntoIterator<Item = EventDecl>) -> Result<Self> {
        let mut alphabet = Alphabet::default();
        for e in events {
            alphabet.push(e)?;
        }
        Ok(alphabet)
    }

    pub(crate) fn push(&mut self, e: EventDecl) -> Result<usize> {
        if !is_token(&e.label) {
            return Err(Error::InvalidLabel(e.label));
        }
        if self.lookup.contains_key(&e.label) {
            return Err(Error::DuplicateLabel(e.label));
        }
        let idx = self.events.len();
        self.lookup.insert(e.label.clone(), idx);
        self.events.push(e);
        Ok(idx)
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &EventDecl> {
        self.events.iter()
    }

    pub fn events(&self) -> &[EventDecl] {
        &self.events
    }

    pub fn get(&self, idx: usize) -> &EventDecl {
        &self.events[idx]
    }

    pub fn label(&self, idx: usize) -> &str {
        &self.events[idx].label
    }

    pub fn is_controllable(&self, idx: usize) -> bool {
        self.events[idx].controllable
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.lookup.get(label).copied()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.lookup.contains_key(label)
    }

    pub fn labels(&self) -> BTreeSet<String> {
        self.events.iter().map(|e| e.label.clone()).collect()
    }

    pub fn controllable_labels(&self) -> BTreeSet<String> {
        self.events
            .iter()
            .filter(|e| e.controllable)
            .map(|e| e.label.clone())
            .collect()
    }

    /// Index of `label`, or `UnknownLabel`.
    pub fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Indices of a set of labels, all of which must be declared here.
    pub fn indices<'a>(&self, labels: impl IntoIterator<Item = &'a String>) -> Result<Vec<usize>> {
        labels.into_iter().map(|l| self.require(l)).collect()
    }

    /// Membership mask over event indices.
    pub fn mask<'a>(&self, labels: impl IntoIterator<Item = &'a String>) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.len()];
        for i in self.indices(labels)? {
            mask[i] = true;
        }
        Ok(mask)
    }

    /// Same set of (label, controllable) pairs, regardless of order.
    pub fn same_events(&self, other: &Alphabet) -> bool {
        self.len() == other.len()
            && self.events.iter().all(|e| {
                other
                    .index_of(&e.label)
                    .is_some_and(|j| other.events[j].controllable == e.controllable)
            })
    }

    /// Map from each of our event indices to the index of the same label in `other`.
    /// Fails unless both alphabets declare the same events.
    pub(crate) fn align(&self, other: &Alphabet) -> Result<Vec<usize>> {
        if !self.same_events(other) {
            return Err(Error::AlphabetMismatch(format!(
                "{{{}}} vs {{{}}}",
                self.describe(),
                other.describe()
            )));
        }
        Ok(self
            .events
            .iter()
            .map(|e| other.lookup[&e.label])
            .collect())
    }

    /// Our events followed by the events of `other` not already present.
    pub fn union(&self, other: &Alphabet) -> Result<Alphabet> {
        let mut out = self.clone();
        for e in &other.events {
            match self.index_of(&e.label) {
                Some(i) if self.events[i].controllable != e.controllable => {
                    return Err(Error::ControllabilityMismatch {
                        label: e.label.clone(),
                    })
                }
                Some(_) => {}
                None => {
                    out.push(e.clone())?;
                }
            }
        }
        Ok(out)
    }

    /// Sub-alphabet keeping only events whose labels are in `keep`, in our order.
    pub fn restrict(&self, keep: &BTreeSet<String>) -> Alphabet {
        let mut out = Alphabet::default();
        for e in self.events.iter().filter(|e| keep.contains(&e.label)) {
            out.push(e.clone()).expect("sub-alphabet of a valid alphabet");
        }
        out
    }

    fn describe(&self) -> String {
        self.events
            .iter()
            .map(|e| format!("{}:{}", e.label, if e.controllable { 'c' } else { 'u' }))
            .collect::<Vec<_>>()
            .join(",")
    }
}
