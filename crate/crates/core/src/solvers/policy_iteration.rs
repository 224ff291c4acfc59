use crate::error::{Error, Result};
use crate::mdp::{ActionId, DeterministicPolicy, Mdp};

use super::{evaluate_policy, SolveMethod, SolveReport, SolverConfig};

/// Howard's policy iteration starting from the first-action policy.
///
/// Evaluation is an exact linear solve, so the result is exact once the
/// policy is stable. The current action is kept whenever it is within
/// `tie_epsilon` of the greedy value, which rules out cycling between tied
/// policies. `iterations` counts improvement sweeps including the final one
/// that finds no change.
pub fn policy_iteration(mdp: &Mdp, cfg: &SolverConfig) -> Result<SolveReport> {
    policy_iteration_from(mdp, DeterministicPolicy::first_actions(mdp), cfg)
}

pub(crate) fn policy_iteration_from(
    mdp: &Mdp,
    initial: DeterministicPolicy,
    cfg: &SolverConfig,
) -> Result<SolveReport> {
    cfg.check()?;
    let mut pi = initial;
    for round in 1..=cfg.max_iterations {
        let q = evaluate_policy(mdp, &pi)?;
        let mut changed = false;
        let choice: Vec<ActionId> = mdp
            .states()
            .map(|s| {
                let current = pi.action(s);
                let best = q.max(s);
                if q.get(s, current) >= best - cfg.tie_epsilon {
                    return current;
                }
                changed = true;
                mdp.actions(s)
                    .find(|&a| q.get(s, a) == best)
                    .expect("a maximizing action exists")
            })
            .collect();
        if !changed {
            return Ok(SolveReport::assemble(mdp, q, SolveMethod::PolicyIteration, round, cfg));
        }
        pi = DeterministicPolicy::new(mdp, choice)?;
    }
    Err(Error::IterationLimit { iterations: cfg.max_iterations, change: f64::NAN })
}
