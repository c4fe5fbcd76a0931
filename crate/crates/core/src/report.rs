//! Disablement reports: which controllable events a supervisor disables where.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::generator::Generator;

/// Number of states disabling each controllable event, in alphabet order.
/// Events disabled nowhere are listed with a zero count.
pub fn disablement_counts(sup: &Generator, disabled: &[BTreeSet<String>]) -> Vec<(String, usize)> {
    sup.alphabet()
        .iter()
        .filter(|e| e.controllable)
        .map(|e| {
            let n = disabled.iter().filter(|d| d.contains(&e.label)).count();
            (e.label.clone(), n)
        })
        .collect()
}

/// Text report: one line per state with a nonempty disablement set, then one
/// count line per controllable event.
pub fn disablement_report(sup: &Generator, disabled: &[BTreeSet<String>]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "supervisor {} states {}", sup.name(), sup.state_count());
    for (x, d) in disabled.iter().enumerate() {
        if d.is_empty() {
            continue;
        }
        let ordered: Vec<&str> = sup
            .alphabet()
            .iter()
            .filter(|e| d.contains(&e.label))
            .map(|e| e.label.as_str())
            .collect();
        let _ = writeln!(out, "state {x} disables {}", ordered.join(" "));
    }
    for (label, n) in disablement_counts(sup, disabled) {
        let _ = writeln!(out, "event {label} disabled at {n} states");
    }
    out
}
