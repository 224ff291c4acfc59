use serde::Serialize;

use crate::error::Result;
use crate::mdp::{ActionId, DeterministicPolicy, Mdp, StateId};

use super::enumerate::ensure_under_cap;
use super::{evaluate_policy, SolveReport, SolverConfig};

/// A policy whose value beats the report at one pair by more than
/// `tie_epsilon`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceWitness {
    pub policy: DeterministicPolicy,
    pub state: StateId,
    pub action: ActionId,
    pub report_value: f64,
    pub policy_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceCheck {
    pub dominates: bool,
    pub policies_checked: usize,
    pub witness: Option<DominanceWitness>,
}

/// Verifies `report.q(s, a) >= q_pi'(s, a) - tie_epsilon` for every
/// deterministic `pi'` and every pair. Stops at the first violation.
pub fn check_dominance(
    mdp: &Mdp,
    report: &SolveReport,
    cfg: &SolverConfig,
) -> Result<DominanceCheck> {
    ensure_under_cap(mdp, cfg)?;
    let mut checked = 0;
    for pi in DeterministicPolicy::enumerate(mdp) {
        let q = evaluate_policy(mdp, &pi)?;
        checked += 1;
        for (s, a) in mdp.pairs() {
            let ours = report.q.get(s, a);
            if ours < q.get(s, a) - cfg.tie_epsilon {
                return Ok(DominanceCheck {
                    dominates: false,
                    policies_checked: checked,
                    witness: Some(DominanceWitness {
                        policy: pi,
                        state: s,
                        action: a,
                        report_value: ours,
                        policy_value: q.get(s, a),
                    }),
                });
            }
        }
    }
    Ok(DominanceCheck { dominates: true, policies_checked: checked, witness: None })
}
