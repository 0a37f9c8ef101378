//! Graphviz export.

use std::fmt::Write;

use crate::contagion::CascadeTrace;
use crate::order::Poset;
use crate::subset;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One node per element, one edge per cover pair, drawn bottom to top.
pub fn poset_dot(p: &Poset) -> String {
    let mut out = String::from("digraph poset {\n  rankdir=BT;\n");
    for x in p.elements() {
        let _ = writeln!(out, "  n{x} [label={}];", quote(&p.label(x)));
    }
    for (x, y) in p.hasse_cover() {
        let _ = writeln!(out, "  n{x} -> n{y};");
    }
    out.push_str("}\n");
    out
}

/// One layer per cascade step, top to bottom.
pub fn trace_dot(ground: &[String], trace: &CascadeTrace) -> String {
    let mut out = String::from("digraph cascade {\n  rankdir=TB;\n  node [shape=box];\n");
    for (t, &state) in trace.states.iter().enumerate() {
        let label = format!("t={t}: {}", subset::display(ground, state));
        let _ = writeln!(out, "  t{t} [label={}];", quote(&label));
    }
    for t in 1..trace.states.len() {
        let _ = writeln!(out, "  t{} -> t{t};", t - 1);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(s: &str, needle: &str) -> usize {
        s.matches(needle).count()
    }

    #[test]
    fn diamond_and_point() {
        let d = poset_dot(&Poset::powerset(vec!["A".into(), "B".into()]).unwrap());
        assert_eq!(count(&d, "[label="), 4);
        assert_eq!(count(&d, " -> "), 4);
        let p = poset_dot(&Poset::point());
        assert_eq!((count(&p, "[label="), count(&p, " -> ")), (1, 0));
    }

    #[test]
    fn trace_layers() {
        let g = vec!["A".to_string(), "B".to_string()];
        let t = CascadeTrace { states: vec![0, 1, 3], converged_at: 2 };
        let d = trace_dot(&g, &t);
        assert!(d.contains("t=0: ∅") && d.contains("t=1: {A}") && d.contains("t=2: {A,B}"));
        assert_eq!(count(&d, " -> "), 2);
    }

    #[test]
    fn labels_are_escaped() {
        let p = Poset::from_fn(vec!["say \"hi\"".into()], |_, _| true).unwrap();
        assert!(poset_dot(&p).contains(r#"label="say \"hi\"""#));
    }
}
