//! Transition graph export in Graphviz DOT.
//!
//! White circles are states, blue circles are `(state, action)` decision
//! nodes. Black edges go from a state to its actions, blue edges from an
//! action to each outcome state labeled `"p, r"`.

use std::fmt::Write as _;

use crate::mdp::{fmt_num, Mdp};

pub fn export_transition_graph(mdp: &Mdp) -> String {
    let mut out = String::new();
    out.push_str("digraph mdp {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=circle, style=filled];\n");
    for s in mdp.states() {
        let _ = writeln!(
            out,
            "  s{} [label={}, fillcolor=white];",
            s.0,
            quote(mdp.state_label(s))
        );
    }
    for (s, a) in mdp.pairs() {
        let _ = writeln!(
            out,
            "  s{}a{} [label={}, fillcolor=lightblue];",
            s.0,
            a.0,
            quote(mdp.action_label(s, a))
        );
    }
    for (s, a) in mdp.pairs() {
        let _ = writeln!(out, "  s{0} -> s{0}a{1} [color=black];", s.0, a.0);
    }
    for (s, a) in mdp.pairs() {
        for t in mdp.transitions(s, a) {
            let label = format!("{}, {}", fmt_num(t.probability), fmt_num(t.reward));
            let _ = writeln!(
                out,
                "  s{}a{} -> s{} [label={}, color=blue];",
                s.0,
                a.0,
                t.next.0,
                quote(&label)
            );
        }
    }
    out.push_str("}\n");
    out
}

fn quote(s: &str) -> String {
    let mut q = String::with_capacity(s.len() + 2);
    q.push('"');
    for c in s.chars() {
        match c {
            '"' => q.push_str("\\\""),
            '\\' => q.push_str("\\\\"),
            '\n' => q.push_str("\\n"),
            _ => q.push(c),
        }
    }
    q.push('"');
    q
}
