use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::{validate, Mdp, StateId, Transition};
use crate::error::{Error, Result};

/// Serialized MDP. Field names are part of the file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MdpDocument {
    pub gamma: f64,
    pub states: Vec<String>,
    pub actions: IndexMap<String, Vec<String>>,
    pub transitions: Vec<TransitionRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionRow {
    pub state: String,
    pub action: String,
    pub next: String,
    pub p: f64,
    pub r: f64,
}

impl MdpDocument {
    pub fn from_mdp(mdp: &Mdp) -> Self {
        let actions = mdp
            .states()
            .map(|s| (mdp.state_label(s).to_string(), mdp.action_labels(s).to_vec()))
            .collect();
        let transitions = mdp
            .pairs()
            .flat_map(|(s, a)| {
                mdp.transitions(s, a).iter().map(move |t| TransitionRow {
                    state: mdp.state_label(s).to_string(),
                    action: mdp.action_label(s, a).to_string(),
                    next: mdp.state_label(t.next).to_string(),
                    p: t.probability,
                    r: t.reward,
                })
            })
            .collect();
        Self {
            gamma: mdp.gamma(),
            states: mdp.state_labels().to_vec(),
            actions,
            transitions,
        }
    }

    /// Resolves labels and builds the model without semantic validation.
    pub fn to_mdp(&self) -> Result<Mdp> {
        let state_index = |label: &str| {
            self.states
                .iter()
                .position(|s| s == label)
                .map(StateId)
                .ok_or_else(|| Error::Schema(format!("unknown state `{label}`")))
        };
        for key in self.actions.keys() {
            state_index(key)?;
        }
        let actions: Vec<Vec<String>> = self
            .states
            .iter()
            .map(|s| {
                self.actions
                    .get(s)
                    .cloned()
                    .ok_or_else(|| Error::Schema(format!("no action list for state `{s}`")))
            })
            .collect::<Result<_>>()?;
        let mut table: Vec<Vec<Vec<Transition>>> =
            actions.iter().map(|a| vec![Vec::new(); a.len()]).collect();
        for row in &self.transitions {
            let s = state_index(&row.state)?;
            let a = actions[s.0].iter().position(|x| *x == row.action).ok_or_else(|| {
                Error::Schema(format!(
                    "unknown action `{}` in state `{}`",
                    row.action, row.state
                ))
            })?;
            let next = state_index(&row.next)?;
            table[s.0][a].push(Transition::new(next, row.p, row.r));
        }
        Mdp::from_parts(self.states.clone(), actions, table, self.gamma)
    }
}

/// Reads an MDP document and returns a validated model.
///
/// Rows repeating the same `(state, action, next, r)` are merged by summing
/// their probabilities.
pub fn parse_mdp(document: &str) -> Result<Mdp> {
    let doc: MdpDocument =
        serde_json::from_str(document).map_err(|e| Error::Schema(e.to_string()))?;
    let mdp = doc.to_mdp()?;
    let gamma = mdp.gamma();
    if !(gamma.is_finite() && (0.0..1.0).contains(&gamma)) {
        return Err(Error::Domain(format!("gamma {gamma} outside [0, 1)")));
    }
    let violations = validate(&mdp);
    if !violations.is_empty() {
        return Err(Error::Validation(violations));
    }
    Ok(mdp)
}

/// Writes the canonical document: states and actions in declaration order,
/// transitions sorted by `(next, reward)` within each pair.
pub fn serialize_mdp(mdp: &Mdp) -> String {
    let mut out = serde_json::to_string_pretty(&MdpDocument::from_mdp(mdp))
        .expect("MDP documents always serialize");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::ActionId;
    use crate::recycling::{build_recycling_mdp, preset};

    #[test]
    fn recycling_document_shape() {
        let mdp = build_recycling_mdp(&preset("exp4").unwrap().fixed).unwrap();
        let parsed = parse_mdp(&serialize_mdp(&mdp)).unwrap();
        assert_eq!(parsed.num_states(), 2);
        assert_eq!(parsed.num_pairs(), 5);
        assert_eq!(parsed.num_transitions(), 7);
        assert_eq!(parsed, mdp);
    }

    #[test]
    fn gamma_one_is_domain_error() {
        let doc = r#"{"gamma":1.0,"states":["s"],"actions":{"s":["a"]},
            "transitions":[{"state":"s","action":"a","next":"s","p":1.0,"r":1.0}]}"#;
        assert!(matches!(parse_mdp(doc), Err(Error::Domain(_))));
    }

    #[test]
    fn repeated_rows_merge() {
        let doc = r#"{"gamma":0.9,"states":["High","Low"],
            "actions":{"High":["wait_H"],"Low":["search_L"]},
            "transitions":[
              {"state":"High","action":"wait_H","next":"High","p":1.0,"r":0.0},
              {"state":"Low","action":"search_L","next":"Low","p":0.05,"r":1.0},
              {"state":"Low","action":"search_L","next":"Low","p":0.05,"r":1.0},
              {"state":"Low","action":"search_L","next":"High","p":0.9,"r":-3.0}]}"#;
        let mdp = parse_mdp(doc).unwrap();
        let row = mdp.transitions(StateId(1), ActionId(0));
        assert_eq!(row.len(), 2);
        let low = row.iter().find(|t| t.next == StateId(1)).unwrap();
        assert!((low.probability - 0.1).abs() < 1e-15);
    }

    #[test]
    fn one_row_document() {
        let mdp = crate::mdp::tests::self_loop(1.0, 0.9);
        let doc: MdpDocument = serde_json::from_str(&serialize_mdp(&mdp)).unwrap();
        assert_eq!(doc.transitions.len(), 1);
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(parse_mdp("{"), Err(Error::Schema(_))));
        let unknown = r#"{"gamma":0.5,"states":["s"],"actions":{"s":["a"]},
            "transitions":[{"state":"s","action":"b","next":"s","p":1.0,"r":0.0}]}"#;
        assert!(matches!(parse_mdp(unknown), Err(Error::Schema(_))));
        let extra = r#"{"gamma":0.5,"states":["s"],"actions":{"s":["a"]},"x":1,
            "transitions":[{"state":"s","action":"a","next":"s","p":1.0,"r":0.0}]}"#;
        assert!(matches!(parse_mdp(extra), Err(Error::Schema(_))));
    }

    #[test]
    fn bad_sum_is_validation_error() {
        let doc = r#"{"gamma":0.9,"states":["High","Low"],
            "actions":{"High":["search_H"],"Low":["recharge_L"]},
            "transitions":[
              {"state":"High","action":"search_H","next":"High","p":0.3,"r":1.0},
              {"state":"High","action":"search_H","next":"Low","p":0.6,"r":1.0},
              {"state":"Low","action":"recharge_L","next":"High","p":1.0,"r":0.0}]}"#;
        match parse_mdp(doc) {
            Err(Error::Validation(v)) => {
                assert_eq!(v[0].to_string(), "probabilities sum to 0.9 at (High, search_H)")
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }
}
