use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use qstar_core::mdp::Violation;
use qstar_core::solvers::{PolicyDocument, ReturnEstimate};
use qstar_core::{DeterministicPolicy, Mdp, QTable};

/// Outcome of `validate`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidateDocument {
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub states: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transitions: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<Violation>,
}

impl ValidateDocument {
    pub fn valid(mdp: &Mdp) -> Self {
        Self {
            valid: true,
            states: Some(mdp.num_states()),
            pairs: Some(mdp.num_pairs()),
            transitions: Some(mdp.num_transitions()),
            violations: Vec::new(),
        }
    }

    pub fn invalid(violations: Vec<Violation>) -> Self {
        Self { valid: false, states: None, pairs: None, transitions: None, violations }
    }
}

/// `q_pi` for a fixed policy, label-keyed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalDocument {
    pub gamma: f64,
    pub policy: PolicyDocument,
    pub residual: f64,
    pub states: Vec<EvalState>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalState {
    pub state: String,
    pub q: IndexMap<String, f64>,
    pub value: f64,
}

impl EvalDocument {
    pub fn new(mdp: &Mdp, pi: &DeterministicPolicy, q: &QTable, residual: f64) -> Self {
        Self {
            gamma: mdp.gamma(),
            policy: policy_labels(mdp, pi),
            residual,
            states: mdp
                .states()
                .map(|s| EvalState {
                    state: mdp.state_label(s).to_string(),
                    q: mdp
                        .actions(s)
                        .map(|a| (mdp.action_label(s, a).to_string(), q.get(s, a)))
                        .collect(),
                    value: q.get(s, pi.action(s)),
                })
                .collect(),
        }
    }

    /// Table with the policy's action marked `>`.
    pub fn to_text(&self) -> String {
        let width = self.states.iter().flat_map(|s| s.q.keys()).map(String::len).max().unwrap_or(0);
        let mut out = String::new();
        for st in &self.states {
            out.push_str(&st.state);
            out.push('\n');
            let chosen = &self.policy[&st.state];
            for (action, value) in &st.q {
                let mark = if action == chosen { ">" } else { " " };
                out.push_str(&format!("  {mark} {action:<width$}  {value:>14.6}\n"));
            }
        }
        out.push_str(&format!("residual {:.3e}\n", self.residual));
        out
    }
}

/// One sampled pair next to its exact value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McCheck {
    pub state: String,
    pub action: String,
    pub exact: f64,
    pub mean: f64,
    pub half_width_95: f64,
    pub seed: u64,
    pub within: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McCheckDocument {
    pub policy: PolicyDocument,
    pub episodes: usize,
    pub horizon: usize,
    pub checks: Vec<McCheck>,
}

impl McCheck {
    pub fn new(state: &str, action: &str, exact: f64, est: &ReturnEstimate, seed: u64) -> Self {
        Self {
            state: state.to_string(),
            action: action.to_string(),
            exact,
            mean: est.mean,
            half_width_95: est.half_width_95,
            seed,
            within: est.contains(exact),
        }
    }
}

impl McCheckDocument {
    pub fn to_text(&self) -> String {
        let mut out = format!("episodes {}, horizon {}\n", self.episodes, self.horizon);
        for c in &self.checks {
            out.push_str(&format!(
                "{:<8} {:<12} exact {:>12.6}  mc {:>12.6} ± {:<10.6} {}\n",
                c.state,
                c.action,
                c.exact,
                c.mean,
                c.half_width_95,
                if c.within { "ok" } else { "outside" }
            ));
        }
        out
    }
}

pub fn policy_labels(mdp: &Mdp, pi: &DeterministicPolicy) -> PolicyDocument {
    mdp.states()
        .map(|s| (mdp.state_label(s).to_string(), mdp.action_label(s, pi.action(s)).to_string()))
        .collect()
}
