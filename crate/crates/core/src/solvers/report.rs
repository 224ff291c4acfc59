use std::fmt::Write as _;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::{SolveMethod, SolveReport};
use crate::mdp::{DeterministicPolicy, Mdp};

/// State label to action label.
pub type PolicyDocument = IndexMap<String, String>;

/// Label-keyed JSON form of a [`SolveReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReportDocument {
    pub method: SolveMethod,
    pub iterations: usize,
    pub residual: f64,
    pub gamma: f64,
    pub states: Vec<StateReport>,
    pub optimal_policies: Vec<PolicyDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateReport {
    pub state: String,
    pub q: IndexMap<String, f64>,
    pub value: f64,
    pub optimal: Vec<String>,
}

impl SolveReportDocument {
    pub fn new(mdp: &Mdp, report: &SolveReport) -> Self {
        let states = mdp
            .states()
            .map(|s| StateReport {
                state: mdp.state_label(s).to_string(),
                q: mdp
                    .actions(s)
                    .map(|a| (mdp.action_label(s, a).to_string(), report.q.get(s, a)))
                    .collect(),
                value: report.state_value(s),
                optimal: report.optimal_actions[s.0]
                    .iter()
                    .map(|&a| mdp.action_label(s, a).to_string())
                    .collect(),
            })
            .collect();
        Self {
            method: report.method,
            iterations: report.iterations,
            residual: report.residual,
            gamma: report.q.gamma_used(),
            states,
            optimal_policies: report
                .optimal_policies
                .iter()
                .map(|pi| policy_document(mdp, pi))
                .collect(),
        }
    }

    /// Human table: one line per action, optimal actions starred.
    pub fn to_text(&self) -> String {
        let width = self
            .states
            .iter()
            .flat_map(|s| s.q.keys())
            .map(String::len)
            .max()
            .unwrap_or(0);
        let mut out = String::new();
        for st in &self.states {
            let _ = writeln!(out, "{}", st.state);
            for (action, value) in &st.q {
                let star = if st.optimal.contains(action) { "*" } else { " " };
                let _ = writeln!(out, "  {star} {action:<width$}  {value:>14.6}");
            }
        }
        let _ = writeln!(
            out,
            "method {:?}, iterations {}, residual {:.3e}",
            self.method, self.iterations, self.residual
        );
        out
    }
}

pub(crate) fn policy_document(mdp: &Mdp, pi: &DeterministicPolicy) -> PolicyDocument {
    mdp.states()
        .map(|s| {
            (
                mdp.state_label(s).to_string(),
                mdp.action_label(s, pi.action(s)).to_string(),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recycling::{build_recycling_mdp, preset};
    use crate::solvers::{enumerate_optimal, SolverConfig};

    #[test]
    fn json_is_label_keyed() {
        let mdp = build_recycling_mdp(&preset("exp4").unwrap().fixed).unwrap();
        let report = enumerate_optimal(&mdp, &SolverConfig::default()).unwrap();
        let doc = SolveReportDocument::new(&mdp, &report);
        let json = serde_json::to_value(&doc).unwrap();
        assert_eq!(json["method"], "enumeration");
        assert_eq!(json["states"][1]["optimal"][0], "recharge_L");
        assert_eq!(json["optimal_policies"][0]["High"], "search_H");
        let text = doc.to_text();
        assert!(text.contains("* recharge_L"));
        assert!(text.contains("  wait_L"));
    }
}
