//! Plain-text formats for generators and control partitions.
//!
//! An automaton file:
//!
//! ```text
//! automaton NAME
//! states N
//! marked 0 3
//! events
//! a c
//! u u
//! trans
//! 0 a 1
//! 1 u 3
//! end
//! ```
//!
//! A partition file has a `partition NAME` header followed by one
//! `block: label label ...` line per block.
//!
//! Blank lines and lines starting with `#` are ignored on input. Output uses LF
//! line endings, single spaces, and the canonical state numbering, with
//! transitions sorted by source state and then alphabet order.

use std::collections::BTreeSet;

use crate::alphabet::{is_token, Alphabet, EventDecl};
use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::localization::ControlPartition;

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        message: message.into(),
    }
}

/// Non-blank, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_index(line: usize, tok: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| syntax(line, format!("expected a state index, found `{tok}`")))
}

fn keyword<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    expected: &str,
    last: usize,
) -> Result<(usize, Vec<&'a str>)> {
    let (n, l) = lines
        .next()
        .ok_or_else(|| syntax(last + 1, format!("expected `{expected}`, found end of input")))?;
    let mut toks: Vec<&str> = l.split_whitespace().collect();
    if toks.first() != Some(&expected) {
        return Err(syntax(n, format!("expected `{expected}`")));
    }
    toks.remove(0);
    Ok((n, toks))
}

/// Parses an automaton file.
pub fn parse_automaton(text: &str) -> Result<Generator> {
    let mut lines = content_lines(text).peekable();

    let (n, toks) = keyword(&mut lines, "automaton", 0)?;
    let [name] = toks[..] else {
        return Err(syntax(n, "expected `automaton NAME`"));
    };
    if !is_token(name) {
        return Err(syntax(n, format!("invalid name `{name}`")));
    }

    let (n, toks) = keyword(&mut lines, "states", n)?;
    let [count] = toks[..] else {
        return Err(syntax(n, "expected `states N`"));
    };
    let states = parse_index(n, count)?;
    if states == 0 {
        return Err(Error::Semantic("`states` must be at least 1".into()));
    }

    let (mut n, toks) = keyword(&mut lines, "marked", n)?;
    let marked = toks
        .iter()
        .map(|t| parse_index(n, t))
        .collect::<Result<Vec<_>>>()?;

    let (m, toks) = keyword(&mut lines, "events", n)?;
    n = m;
    if !toks.is_empty() {
        return Err(syntax(n, "unexpected tokens after `events`"));
    }
    let mut events = Vec::new();
    loop {
        let Some(&(m, l)) = lines.peek() else {
            return Err(syntax(n + 1, "expected `trans`, found end of input"));
        };
        if l == "trans" {
            break;
        }
        lines.next();
        n = m;
        let toks: Vec<&str> = l.split_whitespace().collect();
        let [label, kind] = toks[..] else {
            return Err(syntax(n, "expected `label c|u`"));
        };
        let controllable = match kind {
            "c" => true,
            "u" => false,
            _ => return Err(syntax(n, format!("expected `c` or `u`, found `{kind}`"))),
        };
        if !is_token(label) {
            return Err(syntax(n, format!("invalid event label `{label}`")));
        }
        events.push(EventDecl::new(label, controllable));
    }
    let alphabet = Alphabet::new(events).map_err(semantic)?;

    let (m, _) = keyword(&mut lines, "trans", n)?;
    n = m;
    let mut transitions: Vec<(usize, String, usize)> = Vec::new();
    let mut ended = false;
    for (m, l) in lines.by_ref() {
        n = m;
        if l == "end" {
            ended = true;
            break;
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        let [src, label, dst] = toks[..] else {
            return Err(syntax(n, "expected `src label dst`"));
        };
        transitions.push((parse_index(n, src)?, label.to_string(), parse_index(n, dst)?));
    }
    if !ended {
        return Err(syntax(n + 1, "expected `end`, found end of input"));
    }
    if let Some((m, _)) = lines.next() {
        return Err(syntax(m, "content after `end`"));
    }
    Generator::new(
        name,
        alphabet,
        states,
        marked,
        transitions.iter().map(|(s, l, d)| (*s, l.as_str(), *d)),
    )
    .map_err(semantic)
}

/// Lifts model-level validation failures into `Semantic` errors for file input.
fn semantic(e: Error) -> Error {
    match e {
        Error::Syntax { .. } | Error::Semantic(_) => e,
        other => Error::Semantic(other.to_string()),
    }
}

/// Canonical text of `g`. Unreachable states are not written.
pub fn serialize_automaton(g: &Generator) -> String {
    let g = g.canonical();
    let mut out = String::new();
    out.push_str(&format!("automaton {}\n", g.name()));
    out.push_str(&format!("states {}\n", g.state_count()));
    out.push_str("marked");
    for m in g.marked_states() {
        out.push_str(&format!(" {m}"));
    }
    out.push_str("\nevents\n");
    for e in g.alphabet().iter() {
        out.push_str(&format!("{} {}\n", e.label, if e.controllable { "c" } else { "u" }));
    }
    out.push_str("trans\n");
    for (s, e, d) in g.transitions() {
        out.push_str(&format!("{s} {} {d}\n", g.alphabet().label(e)));
    }
    out.push_str("end\n");
    out
}

/// Parses a partition file. Labels are not checked against any alphabet here.
pub fn parse_partition(text: &str) -> Result<ControlPartition> {
    let mut lines = content_lines(text);
    let (n, toks) = keyword(&mut lines, "partition", 0)?;
    let [name] = toks[..] else {
        return Err(syntax(n, "expected `partition NAME`"));
    };
    if !is_token(name) {
        return Err(syntax(n, format!("invalid name `{name}`")));
    }
    let mut blocks = Vec::new();
    for (n, l) in lines {
        if l == "end" {
            break;
        }
        let Some(rest) = l.strip_prefix("block:") else {
            return Err(syntax(n, "expected `block: label ...`"));
        };
        let mut block = BTreeSet::new();
        for tok in rest.split_whitespace() {
            if !is_token(tok) {
                return Err(syntax(n, format!("invalid event label `{tok}`")));
            }
            if !block.insert(tok.to_string()) {
                return Err(Error::Semantic(format!("line {n}: `{tok}` repeated in a block")));
            }
        }
        blocks.push(block);
    }
    ControlPartition::new(name, blocks).map_err(semantic)
}

/// Text of a partition. Labels inside a block are listed in `alphabet` order when
/// one is given, otherwise lexicographically.
pub fn serialize_partition(p: &ControlPartition, alphabet: Option<&Alphabet>) -> String {
    let mut out = format!("partition {}\n", p.name());
    for b in p.blocks() {
        let labels: Vec<&str> = match alphabet {
            Some(a) => a
                .iter()
                .filter(|e| b.contains(&e.label))
                .map(|e| e.label.as_str())
                .collect(),
            None => b.iter().map(String::as_str).collect(),
        };
        out.push_str("block:");
        for l in labels {
            out.push(' ');
            out.push_str(l);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "automaton G\nstates 3\nmarked 2\nevents\na c\nu u\ntrans\n0 a 1\n1 u 2\nend\n";

    #[test]
    fn round_trip() {
        let g = parse_automaton(SAMPLE).unwrap();
        assert_eq!(g.state_count(), 3);
        assert_eq!(serialize_automaton(&g), SAMPLE);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# plant\nautomaton G\n\nstates 1\nmarked\nevents\ntrans\nend\n";
        let g = parse_automaton(text).unwrap();
        assert!(g.alphabet().is_empty());
        assert_eq!(g.marked_states().count(), 0);
    }

    #[test]
    fn errors_carry_lines() {
        let bad = SAMPLE.replace("0 a 1", "0 a");
        assert_eq!(parse_automaton(&bad).unwrap_err(), syntax(8, "expected `src label dst`"));
        let bad = SAMPLE.replace("a c", "a x");
        assert!(matches!(parse_automaton(&bad), Err(Error::Syntax { line: 5, .. })));
        let bad = SAMPLE.replace("end\n", "");
        assert!(matches!(parse_automaton(&bad), Err(Error::Syntax { .. })));
        let bad = SAMPLE.replace("1 u 2", "1 u 3");
        assert!(matches!(parse_automaton(&bad), Err(Error::Semantic(_))));
        let bad = SAMPLE.replace("u u", "a u");
        assert!(matches!(parse_automaton(&bad), Err(Error::Semantic(_))));
    }

    #[test]
    fn partitions() {
        let text = "partition p\nblock: a b\nblock: c\n";
        let p = parse_partition(text).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(serialize_partition(&p, None), text);
        assert!(matches!(
            parse_partition("partition p\nblock: a\nblock: a\n"),
            Err(Error::Semantic(_))
        ));
        assert!(matches!(
            parse_partition("partition p\nblocks a\n"),
            Err(Error::Syntax { line: 2, .. })
        ));
    }
}
