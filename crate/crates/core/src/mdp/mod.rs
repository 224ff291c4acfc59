//! Finite MDP data model.
//!
//! An [`Mdp`] owns ordered state labels, per-state action lists and, for
//! every `(state, action)` pair, a list of [`Transition`]s carrying
//! `p(s', r | s, a)`. Rewards live on transitions, so one `(s, a, s')` may
//! appear several times with different rewards.
//!
//! Construction only checks structure (shapes and index bounds). Semantic
//! rules such as probability sums and the discount range are reported by
//! [`validate`], which never fails on a structurally sound model.

mod json;
mod policy;
mod qtable;
mod validate;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use json::{parse_mdp, serialize_mdp, MdpDocument, TransitionRow};
pub use policy::DeterministicPolicy;
pub use qtable::{QKind, QTable};
pub use validate::{validate, Violation, PROBABILITY_TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateId(pub usize);

/// Index of an action inside `A(s)` of its owning state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ActionId(pub usize);

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

impl fmt::Display for ActionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub next: StateId,
    pub probability: f64,
    pub reward: f64,
}

impl Transition {
    pub fn new(next: StateId, probability: f64, reward: f64) -> Self {
        Self { next, probability, reward }
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.next
            .cmp(&other.next)
            .then_with(|| self.reward.total_cmp(&other.reward))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mdp {
    states: Vec<String>,
    actions: Vec<Vec<String>>,
    transitions: Vec<Vec<Vec<Transition>>>,
    gamma: f64,
}

impl Mdp {
    /// Builds an MDP from its parts.
    ///
    /// `transitions[s][a]` lists the outcomes of action `a` in state `s`.
    /// Transitions are sorted by `(next, reward)` and rows sharing both are
    /// merged by summing their probabilities, so two models that differ only
    /// in row order compare equal.
    pub fn from_parts(
        states: Vec<String>,
        actions: Vec<Vec<String>>,
        transitions: Vec<Vec<Vec<Transition>>>,
        gamma: f64,
    ) -> Result<Self> {
        if actions.len() != states.len() {
            return Err(Error::Schema(format!(
                "{} states but {} action lists",
                states.len(),
                actions.len()
            )));
        }
        if transitions.len() != states.len() {
            return Err(Error::Schema(format!(
                "{} states but transition table has {} rows",
                states.len(),
                transitions.len()
            )));
        }
        let n = states.len();
        let mut canonical = Vec::with_capacity(n);
        for (s, (acts, rows)) in actions.iter().zip(transitions).enumerate() {
            if rows.len() != acts.len() {
                return Err(Error::Schema(format!(
                    "state `{}` has {} actions but {} transition lists",
                    states[s],
                    acts.len(),
                    rows.len()
                )));
            }
            let mut per_action = Vec::with_capacity(rows.len());
            for row in rows {
                if let Some(t) = row.iter().find(|t| t.next.0 >= n) {
                    return Err(Error::Schema(format!(
                        "transition from `{}` targets state index {} (only {n} states)",
                        states[s], t.next.0
                    )));
                }
                per_action.push(canonicalize(row));
            }
            canonical.push(per_action);
        }
        Ok(Self { states, actions, transitions: canonical, gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Same model with another discount factor. The result is not validated.
    pub fn with_gamma(&self, gamma: f64) -> Self {
        Self { gamma, ..self.clone() }
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> impl ExactSizeIterator<Item = StateId> + '_ {
        (0..self.states.len()).map(StateId)
    }

    pub fn state_labels(&self) -> &[String] {
        &self.states
    }

    pub fn state_label(&self, s: StateId) -> &str {
        &self.states[s.0]
    }

    pub fn num_actions(&self, s: StateId) -> usize {
        self.actions[s.0].len()
    }

    pub fn actions(&self, s: StateId) -> impl ExactSizeIterator<Item = ActionId> + '_ {
        (0..self.actions[s.0].len()).map(ActionId)
    }

    pub fn action_labels(&self, s: StateId) -> &[String] {
        &self.actions[s.0]
    }

    pub fn action_label(&self, s: StateId, a: ActionId) -> &str {
        &self.actions[s.0][a.0]
    }

    /// All `(state, action)` pairs in declaration order.
    pub fn pairs(&self) -> impl Iterator<Item = (StateId, ActionId)> + '_ {
        self.states().flat_map(move |s| self.actions(s).map(move |a| (s, a)))
    }

    pub fn num_pairs(&self) -> usize {
        self.actions.iter().map(Vec::len).sum()
    }

    pub fn transitions(&self, s: StateId, a: ActionId) -> &[Transition] {
        &self.transitions[s.0][a.0]
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.iter().flatten().map(Vec::len).sum()
    }

    pub fn state_id(&self, label: &str) -> Option<StateId> {
        self.states.iter().position(|l| l == label).map(StateId)
    }

    pub fn action_id(&self, s: StateId, label: &str) -> Option<ActionId> {
        self.actions[s.0].iter().position(|l| l == label).map(ActionId)
    }

    /// Resolves a globally unique action label to its owning state.
    pub fn find_action(&self, label: &str) -> Option<(StateId, ActionId)> {
        self.pairs().find(|&(s, a)| self.action_label(s, a) == label)
    }

    pub fn resolve_state(&self, label: &str) -> Result<StateId> {
        self.state_id(label)
            .ok_or_else(|| Error::UnknownState(label.to_string()))
    }

    pub fn resolve_action(&self, s: StateId, label: &str) -> Result<ActionId> {
        self.action_id(s, label).ok_or_else(|| Error::UnknownAction {
            state: self.state_label(s).to_string(),
            action: label.to_string(),
        })
    }

    /// Number of deterministic policies, saturating at `u128::MAX`.
    pub fn num_policies(&self) -> u128 {
        self.actions
            .iter()
            .fold(1u128, |acc, a| acc.saturating_mul(a.len() as u128))
    }

    /// Expected immediate reward `sum p * r` of taking `a` in `s`.
    pub fn expected_reward(&self, s: StateId, a: ActionId) -> f64 {
        self.transitions(s, a)
            .iter()
            .map(|t| t.probability * t.reward)
            .sum()
    }

    pub fn max_abs_reward(&self) -> f64 {
        self.transitions
            .iter()
            .flatten()
            .flatten()
            .map(|t| t.reward.abs())
            .fold(0.0, f64::max)
    }

    /// Applies `f` to every reward, keeping the structure.
    pub fn map_rewards(&self, f: impl Fn(f64) -> f64) -> Self {
        let transitions = self
            .transitions
            .iter()
            .map(|per_state| {
                per_state
                    .iter()
                    .map(|row| {
                        canonicalize(
                            row.iter()
                                .map(|t| Transition { reward: f(t.reward), ..*t })
                                .collect(),
                        )
                    })
                    .collect()
            })
            .collect();
        Self { transitions, ..self.clone() }
    }

    /// Same structure with new labels. Panics if the label shapes differ.
    pub fn relabel(&self, states: Vec<String>, actions: Vec<Vec<String>>) -> Self {
        assert_eq!(states.len(), self.states.len());
        for (old, new) in self.actions.iter().zip(&actions) {
            assert_eq!(old.len(), new.len());
        }
        Self { states, actions, ..self.clone() }
    }
}

fn canonicalize(mut row: Vec<Transition>) -> Vec<Transition> {
    row.sort_by(Transition::canonical_cmp);
    let mut out: Vec<Transition> = Vec::with_capacity(row.len());
    for t in row {
        match out.last_mut() {
            Some(last) if last.next == t.next && last.reward == t.reward => {
                last.probability += t.probability;
            }
            _ => out.push(t),
        }
    }
    out
}

/// Formats a number with at most 12 decimals and no trailing zeros.
pub(crate) fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}
