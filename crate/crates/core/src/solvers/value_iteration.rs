use crate::error::{Error, Result};
use crate::mdp::{Mdp, QKind, QTable};

use super::{bellman_backup, SolveMethod, SolveReport, SolverConfig};

/// Iterates the optimality operator from `q = 0`.
///
/// The operator is a `gamma`-contraction, so once successive iterates are
/// `delta` apart the fixed point is within `gamma / (1 - gamma) * delta`.
/// Iteration stops when that bound drops to `value_tolerance`, or when the
/// change reaches the floating-point noise floor of the current values.
pub fn value_iteration(mdp: &Mdp, cfg: &SolverConfig) -> Result<SolveReport> {
    cfg.check()?;
    let gamma = mdp.gamma();
    let step_target = if gamma == 0.0 {
        f64::INFINITY
    } else {
        cfg.value_tolerance * (1.0 - gamma) / gamma
    };

    let mut q = QTable::zeros(mdp, QKind::Optimal);
    let mut change = f64::INFINITY;
    for iteration in 1..=cfg.max_iterations {
        let next = bellman_backup(mdp, &q);
        change = next.sup_distance(&q);
        q = next;
        let scale = q.rows().iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
        let noise_floor = 8.0 * f64::EPSILON * scale;
        if change <= step_target.max(noise_floor) {
            return Ok(SolveReport::assemble(
                mdp,
                q,
                SolveMethod::ValueIteration,
                iteration,
                cfg,
            ));
        }
    }
    Err(Error::IterationLimit { iterations: cfg.max_iterations, change })
}
