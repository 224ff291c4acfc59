use crate::error::{Error, Result};
use crate::mdp::{DeterministicPolicy, Mdp, QTable};

use super::{evaluate_policy, SolveMethod, SolveReport, SolverConfig};

/// Brute-force oracle: evaluates every deterministic policy exactly and
/// returns the value of the first one satisfying
/// `q_pi(s, pi(s)) >= q_pi(s, a) - tie_epsilon` for all `(s, a)`.
///
/// `iterations` is the number of policies evaluated.
pub fn enumerate_optimal(mdp: &Mdp, cfg: &SolverConfig) -> Result<SolveReport> {
    cfg.check()?;
    ensure_under_cap(mdp, cfg)?;
    let mut evaluated = 0;
    let mut best: Option<QTable> = None;
    for pi in DeterministicPolicy::enumerate(mdp) {
        let q = evaluate_policy(mdp, &pi)?;
        evaluated += 1;
        if best.is_none() && satisfies_optimality(mdp, &pi, &q, cfg.tie_epsilon) {
            best = Some(q);
        }
    }
    let q = best.ok_or(Error::NoOptimalPolicy)?;
    Ok(SolveReport::assemble(mdp, q, SolveMethod::Enumeration, evaluated, cfg))
}

pub(crate) fn ensure_under_cap(mdp: &Mdp, cfg: &SolverConfig) -> Result<()> {
    let count = mdp.num_policies();
    if count > cfg.enumeration_cap as u128 {
        return Err(Error::CapExceeded { count, cap: cfg.enumeration_cap });
    }
    Ok(())
}

fn satisfies_optimality(mdp: &Mdp, pi: &DeterministicPolicy, q: &QTable, eps: f64) -> bool {
    mdp.states().all(|s| q.get(s, pi.action(s)) >= q.max(s) - eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdp::{ActionId, StateId, Transition};
    use crate::recycling::{build_recycling_mdp, preset};

    #[test]
    fn recycling_unique_optimum() {
        let mdp = build_recycling_mdp(&preset("exp4").unwrap().fixed).unwrap();
        let report = enumerate_optimal(&mdp, &SolverConfig::default()).unwrap();
        assert_eq!(report.iterations, 6);
        assert_eq!(report.optimal_policies.len(), 1);
        assert_eq!(report.optimal_policies[0].labels(&mdp), vec!["search_H", "recharge_L"]);
    }

    #[test]
    fn tie_at_wait_boundary() {
        let mut p = preset("exp4").unwrap().fixed;
        // wait_L ties recharge_L when r_wait / (1 - gamma) = gamma v(High),
        // with v(High) = 1 / 0.163
        p.r_wait = 0.1 * 0.9 / 0.163;
        let mdp = build_recycling_mdp(&p).unwrap();
        let report = enumerate_optimal(&mdp, &SolverConfig::default()).unwrap();
        assert_eq!(report.optimal_actions[1], vec![ActionId(1), ActionId(2)]);
        assert_eq!(report.optimal_policies.len(), 2);
    }

    #[test]
    fn identical_actions_are_both_optimal() {
        let row = vec![Transition::new(StateId(0), 1.0, 2.0)];
        let mdp = Mdp::from_parts(
            vec!["s".into()],
            vec![vec!["left".into(), "right".into()]],
            vec![vec![row.clone(), row]],
            0.5,
        )
        .unwrap();
        let report = enumerate_optimal(&mdp, &SolverConfig::default()).unwrap();
        assert_eq!(report.optimal_policies.len(), 2);
    }

    #[test]
    fn cap_exceeded_names_count() {
        let mdp = build_recycling_mdp(&preset("exp4").unwrap().fixed).unwrap();
        let cfg = SolverConfig { enumeration_cap: 5, ..Default::default() };
        match enumerate_optimal(&mdp, &cfg) {
            Err(Error::CapExceeded { count, cap }) => assert_eq!((count, cap), (6, 5)),
            other => panic!("{other:?}"),
        }
    }
}
