use crate::error::{Error, Result};
use crate::linalg;
use crate::mdp::{DeterministicPolicy, Mdp, QKind, QTable};

use super::backup_with_values;

/// Exact `q_pi` of a deterministic policy.
///
/// Solves `(I - gamma P_pi) v = r_pi` for the state values, then expands
/// them into action values with one expectation backup.
pub fn evaluate_policy(mdp: &Mdp, pi: &DeterministicPolicy) -> Result<QTable> {
    let n = mdp.num_states();
    let gamma = mdp.gamma();
    let mut a = vec![vec![0.0; n]; n];
    let mut b = vec![0.0; n];
    for s in mdp.states() {
        a[s.0][s.0] += 1.0;
        for t in mdp.transitions(s, pi.action(s)) {
            a[s.0][t.next.0] -= gamma * t.probability;
            b[s.0] += t.probability * t.reward;
        }
    }
    let v = linalg::solve(a, b).ok_or(Error::Singular)?;
    Ok(backup_with_values(mdp, &v, QKind::Evaluated(pi.clone())))
}

/// Sup-norm residual of the Bellman expectation equation for `pi`:
/// `q(s,a) - sum p (r + gamma q(s', pi(s')))`.
pub fn bellman_expectation_residual(mdp: &Mdp, pi: &DeterministicPolicy, q: &QTable) -> f64 {
    let v: Vec<f64> = mdp.states().map(|s| q.get(s, pi.action(s))).collect();
    q.sup_distance(&backup_with_values(mdp, &v, QKind::Evaluated(pi.clone())))
}
