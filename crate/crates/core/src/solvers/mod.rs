//! Solvers for the Bellman expectation and optimality equations.
//!
//! [`enumerate_optimal`] is the ground truth: it evaluates every
//! deterministic policy with an exact linear solve and keeps the ones that
//! satisfy the optimality condition. [`value_iteration`] and
//! [`policy_iteration`] must agree with it wherever enumeration is feasible.

mod dominance;
mod enumerate;
mod evaluate;
mod monte_carlo;
mod policy_iteration;
mod report;
mod value_iteration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mdp::{ActionId, DeterministicPolicy, Mdp, QKind, QTable, StateId};

pub use dominance::{check_dominance, DominanceCheck, DominanceWitness};
pub use enumerate::enumerate_optimal;
pub use evaluate::{bellman_expectation_residual, evaluate_policy};
pub use monte_carlo::{estimate_return, truncation_horizon, ReturnEstimate};
pub use policy_iteration::policy_iteration;
pub use report::{PolicyDocument, SolveReportDocument, StateReport};
pub use value_iteration::value_iteration;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Sup-norm tolerance on q for iterative methods.
    pub value_tolerance: f64,
    /// Actions within this distance of the best value count as optimal.
    pub tie_epsilon: f64,
    pub max_iterations: usize,
    /// Largest number of deterministic policies enumeration will visit.
    pub enumeration_cap: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            value_tolerance: 1e-12,
            tie_epsilon: 1e-9,
            max_iterations: 100_000,
            enumeration_cap: 1_000_000,
        }
    }
}

impl SolverConfig {
    pub fn check(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.value_tolerance) {
            return Err(Error::InvalidConfig("value_tolerance must be > 0".into()));
        }
        if !positive(self.tie_epsilon) {
            return Err(Error::InvalidConfig("tie_epsilon must be > 0".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be > 0".into()));
        }
        if self.enumeration_cap == 0 {
            return Err(Error::InvalidConfig("enumeration_cap must be > 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    ValueIteration,
    PolicyIteration,
    Enumeration,
}

/// Optimal action values together with every optimal policy.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub q: QTable,
    /// Per state, every action within `tie_epsilon` of the best (ascending).
    pub optimal_actions: Vec<Vec<ActionId>>,
    /// Cartesian product of `optimal_actions`.
    pub optimal_policies: Vec<DeterministicPolicy>,
    pub method: SolveMethod,
    pub iterations: usize,
    /// Sup-norm Bellman optimality residual `|q - T q|`.
    pub residual: f64,
}

impl SolveReport {
    pub(crate) fn assemble(
        mdp: &Mdp,
        q: QTable,
        method: SolveMethod,
        iterations: usize,
        cfg: &SolverConfig,
    ) -> Self {
        let q = q.with_kind(QKind::Optimal);
        let optimal_actions = extract_optimal_actions(&q, cfg.tie_epsilon);
        let optimal_policies = cartesian_policies(&optimal_actions, cfg.enumeration_cap);
        let residual = bellman_optimality_residual(mdp, &q);
        Self { q, optimal_actions, optimal_policies, method, iterations, residual }
    }

    /// Optimal policy with lowest-index tie breaking.
    pub fn representative_policy(&self) -> DeterministicPolicy {
        DeterministicPolicy::from_choice_unchecked(
            self.optimal_actions.iter().map(|set| set[0]).collect(),
        )
    }

    pub fn is_optimal(&self, s: StateId, a: ActionId) -> bool {
        self.optimal_actions[s.0].contains(&a)
    }

    /// `v*(s) = max_a q*(s, a)`.
    pub fn state_value(&self, s: StateId) -> f64 {
        self.q.max(s)
    }
}

/// Per state, all actions whose value is within `tie_epsilon` of the best.
/// Never empty for a complete table.
pub fn extract_optimal_actions(q: &QTable, tie_epsilon: f64) -> Vec<Vec<ActionId>> {
    (0..q.num_states())
        .map(|s| {
            let row = q.state_values(StateId(s));
            let best = q.max(StateId(s));
            row.iter()
                .enumerate()
                .filter(|(_, &v)| v >= best - tie_epsilon)
                .map(|(a, _)| ActionId(a))
                .collect()
        })
        .collect()
}

fn cartesian_policies(sets: &[Vec<ActionId>], cap: u64) -> Vec<DeterministicPolicy> {
    let mut out: Vec<Vec<ActionId>> = vec![Vec::with_capacity(sets.len())];
    for set in sets {
        let mut grown = Vec::with_capacity(out.len() * set.len());
        'outer: for prefix in &out {
            for &a in set {
                if grown.len() as u64 >= cap {
                    break 'outer;
                }
                let mut p = prefix.clone();
                p.push(a);
                grown.push(p);
            }
        }
        out = grown;
    }
    out.into_iter()
        .map(DeterministicPolicy::from_choice_unchecked)
        .collect()
}

/// One application of the optimality operator:
/// `(T q)(s, a) = sum p (r + gamma max_a' q(s', a'))`.
pub fn bellman_backup(mdp: &Mdp, q: &QTable) -> QTable {
    let v = q.state_value_vector();
    backup_with_values(mdp, &v, QKind::Optimal)
}

pub(crate) fn backup_with_values(mdp: &Mdp, v: &[f64], kind: QKind) -> QTable {
    let gamma = mdp.gamma();
    let values = mdp
        .states()
        .map(|s| {
            mdp.actions(s)
                .map(|a| {
                    mdp.transitions(s, a)
                        .iter()
                        .map(|t| t.probability * (t.reward + gamma * v[t.next.0]))
                        .sum()
                })
                .collect()
        })
        .collect();
    QTable::new(values, gamma, kind)
}

pub fn bellman_optimality_residual(mdp: &Mdp, q: &QTable) -> f64 {
    q.sup_distance(&bellman_backup(mdp, q))
}

/// Exact solve: enumeration while the policy count is under the cap,
/// value iteration beyond it.
pub fn solve_exact(mdp: &Mdp, cfg: &SolverConfig) -> Result<SolveReport> {
    if mdp.num_policies() <= cfg.enumeration_cap as u128 {
        enumerate_optimal(mdp, cfg)
    } else {
        value_iteration(mdp, cfg)
    }
}
