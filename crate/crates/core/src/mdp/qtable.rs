use serde::Serialize;

use super::{ActionId, DeterministicPolicy, Mdp, StateId};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "policy")]
pub enum QKind {
    Evaluated(DeterministicPolicy),
    Optimal,
}

/// Action values for every `(state, action)` pair of one model.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable {
    values: Vec<Vec<f64>>,
    gamma_used: f64,
    kind: QKind,
}

impl QTable {
    pub fn new(values: Vec<Vec<f64>>, gamma_used: f64, kind: QKind) -> Self {
        Self { values, gamma_used, kind }
    }

    pub fn zeros(mdp: &Mdp, kind: QKind) -> Self {
        let values = mdp.states().map(|s| vec![0.0; mdp.num_actions(s)]).collect();
        Self::new(values, mdp.gamma(), kind)
    }

    pub fn get(&self, s: StateId, a: ActionId) -> f64 {
        self.values[s.0][a.0]
    }

    pub fn set(&mut self, s: StateId, a: ActionId, value: f64) {
        self.values[s.0][a.0] = value;
    }

    pub fn state_values(&self, s: StateId) -> &[f64] {
        &self.values[s.0]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn num_states(&self) -> usize {
        self.values.len()
    }

    pub fn gamma_used(&self) -> f64 {
        self.gamma_used
    }

    pub fn kind(&self) -> &QKind {
        &self.kind
    }

    pub(crate) fn with_kind(mut self, kind: QKind) -> Self {
        self.kind = kind;
        self
    }

    /// `max_a q(s, a)`.
    pub fn max(&self, s: StateId) -> f64 {
        self.values[s.0].iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Greedy state values `v(s) = max_a q(s, a)`.
    pub fn state_value_vector(&self) -> Vec<f64> {
        (0..self.values.len()).map(|s| self.max(StateId(s))).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().flatten().all(|v| v.is_finite())
    }

    /// Sup-norm distance. Tables must share a shape.
    pub fn sup_distance(&self, other: &QTable) -> f64 {
        assert_eq!(self.values.len(), other.values.len(), "q-table shapes differ");
        self.values
            .iter()
            .zip(&other.values)
            .flat_map(|(a, b)| {
                assert_eq!(a.len(), b.len(), "q-table shapes differ");
                a.iter().zip(b).map(|(x, y)| (x - y).abs())
            })
            .fold(0.0, f64::max)
    }

    pub fn fits(&self, mdp: &Mdp) -> bool {
        self.values.len() == mdp.num_states()
            && mdp.states().all(|s| self.values[s.0].len() == mdp.num_actions(s))
    }

    /// Greedy policy with lowest-index tie breaking.
    pub fn greedy_policy(&self) -> DeterministicPolicy {
        let choice = self
            .values
            .iter()
            .map(|row| {
                let mut best = 0;
                for (i, &v) in row.iter().enumerate() {
                    if v > row[best] {
                        best = i;
                    }
                }
                ActionId(best)
            })
            .collect();
        DeterministicPolicy::from_choice_unchecked(choice)
    }
}
