use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use super::{fmt_num, Mdp};

/// Absolute tolerance on `sum p(s', r | s, a) = 1`.
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;

/// One violated model rule, located at a state and optionally an action.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub action: Option<String>,
    pub message: String,
}

impl Violation {
    fn global(message: String) -> Self {
        Self { state: None, action: None, message }
    }

    fn at_state(state: &str, message: String) -> Self {
        Self { state: Some(state.to_string()), action: None, message }
    }

    fn at_pair(state: &str, action: &str, message: String) -> Self {
        Self {
            state: Some(state.to_string()),
            action: Some(action.to_string()),
            message,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.state, &self.action) {
            (Some(s), Some(a)) => write!(f, "{} at ({s}, {a})", self.message),
            (Some(s), None) => write!(f, "{} at {s}", self.message),
            _ => f.write_str(&self.message),
        }
    }
}

/// Checks every model rule and returns all violations. An empty list means
/// the model is valid.
pub fn validate(mdp: &Mdp) -> Vec<Violation> {
    let mut out = Vec::new();

    let gamma = mdp.gamma();
    if !(gamma.is_finite() && (0.0..1.0).contains(&gamma)) {
        out.push(Violation::global(format!(
            "gamma {} outside [0, 1)",
            fmt_num(gamma)
        )));
    }
    if mdp.num_states() == 0 {
        out.push(Violation::global("model has no states".into()));
    }

    let mut seen = HashSet::new();
    for label in mdp.state_labels() {
        if !seen.insert(label.as_str()) {
            out.push(Violation::at_state(label, "duplicate state label".into()));
        }
    }

    let mut seen_actions = HashSet::new();
    for s in mdp.states() {
        let state = mdp.state_label(s);
        if mdp.num_actions(s) == 0 {
            out.push(Violation::at_state(state, "state has no actions".into()));
        }
        for a in mdp.actions(s) {
            let action = mdp.action_label(s, a);
            if !seen_actions.insert(action) {
                out.push(Violation::at_pair(state, action, "duplicate action label".into()));
            }
            let row = mdp.transitions(s, a);
            if row.is_empty() {
                out.push(Violation::at_pair(state, action, "no transitions".into()));
                continue;
            }
            for t in row {
                let next = mdp.state_label(t.next);
                if !(t.probability.is_finite() && (0.0..=1.0).contains(&t.probability)) {
                    out.push(Violation::at_pair(
                        state,
                        action,
                        format!(
                            "probability {} to {next} outside [0, 1]",
                            fmt_num(t.probability)
                        ),
                    ));
                }
                if !t.reward.is_finite() {
                    out.push(Violation::at_pair(
                        state,
                        action,
                        format!("non-finite reward to {next}"),
                    ));
                }
            }
            for w in row.windows(2) {
                if w[0].next == w[1].next && w[0].reward == w[1].reward {
                    out.push(Violation::at_pair(
                        state,
                        action,
                        format!(
                            "duplicate transition to {} with reward {}",
                            mdp.state_label(w[0].next),
                            fmt_num(w[0].reward)
                        ),
                    ));
                }
            }
            let sum: f64 = row.iter().map(|t| t.probability).sum();
            #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN sums must fail
            if !((sum - 1.0).abs() <= PROBABILITY_TOLERANCE) {
                out.push(Violation::at_pair(
                    state,
                    action,
                    format!("probabilities sum to {}", fmt_num(sum)),
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::{StateId, Transition};

    fn two_outcome(p_stay: f64, p_leave: f64) -> Mdp {
        Mdp::from_parts(
            vec!["High".into(), "Low".into()],
            vec![vec!["search_H".into()], vec!["recharge_L".into()]],
            vec![
                vec![vec![
                    Transition::new(StateId(0), p_stay, 1.0),
                    Transition::new(StateId(1), p_leave, 1.0),
                ]],
                vec![vec![Transition::new(StateId(0), 1.0, 0.0)]],
            ],
            0.9,
        )
        .unwrap()
    }

    #[test]
    fn valid_split() {
        assert!(validate(&two_outcome(0.3, 1.0 - 0.3)).is_empty());
    }

    #[test]
    fn mistyped_probability_is_located() {
        let v = validate(&two_outcome(0.3, 0.6));
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].to_string(), "probabilities sum to 0.9 at (High, search_H)");
    }

    #[test]
    fn degenerate_deterministic_row() {
        assert!(validate(&two_outcome(1.0, 0.0)).is_empty());
    }

    #[test]
    fn collects_several_violations() {
        let m = Mdp::from_parts(
            vec!["x".into(), "x".into()],
            vec![vec!["a".into()], vec!["a".into(), "b".into()]],
            vec![
                vec![vec![Transition::new(StateId(0), 1.5, f64::NAN)]],
                vec![vec![Transition::new(StateId(1), 1.0, 0.0)], vec![]],
            ],
            1.0,
        )
        .unwrap();
        let v = validate(&m);
        let text: Vec<String> = v.iter().map(ToString::to_string).collect();
        assert!(text.iter().any(|t| t.starts_with("gamma 1 outside")));
        assert!(text.iter().any(|t| t.contains("duplicate state label")));
        assert!(text.iter().any(|t| t.contains("duplicate action label")));
        assert!(text.iter().any(|t| t.contains("outside [0, 1]")));
        assert!(text.iter().any(|t| t.contains("non-finite reward")));
        assert!(text.iter().any(|t| t == "no transitions at (x, b)"));
    }
}
