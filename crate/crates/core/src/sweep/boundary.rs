use serde::{Deserialize, Serialize};

use super::solve_at;
use crate::error::{Error, Result};
use crate::recycling::{build_recycling_mdp, RecyclingParams};
use crate::solvers::{extract_optimal_actions, SolverConfig};

pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-8;
const PRESCAN_POINTS: usize = 64;
const MAX_BISECTIONS: usize = 200;

fn default_tol() -> f64 {
    DEFAULT_BOUNDARY_TOL
}

/// Where does `q*(state, a1) - q*(state, a2)` change sign as `parameter`
/// moves through `interval`?
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryRequest {
    pub base: RecyclingParams,
    pub parameter: String,
    pub state: String,
    pub actions: [String; 2],
    pub interval: [f64; 2],
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub solver: SolverConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryResult {
    pub parameter: String,
    pub state: String,
    pub action_pair: [String; 2],
    pub location: f64,
    /// Final bracket; `delta_at_bracket` holds the value difference at each
    /// end and their product is never positive.
    pub bracket: [f64; 2],
    pub delta_at_bracket: [f64; 2],
    pub tolerance: f64,
    /// Both actions are optimal at `location` within ten times the tie
    /// tolerance.
    pub certified: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Bisection on the optimal value difference of two actions.
///
/// A 64-point pre-scan looks for sign changes first. If it finds more than
/// one, the first bracket is refined and a warning is attached. Bisection
/// runs until the bracket is narrower than `tol` and the difference at the
/// midpoint is within the solver's tie tolerance (or the bracket cannot
/// shrink further).
pub fn find_boundary(req: &BoundaryRequest) -> Result<BoundaryResult> {
    let [lo, hi] = req.interval;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidSweep(format!("interval [{lo}, {hi}] needs lo < hi")));
    }
    if !(req.tol.is_finite() && req.tol > 0.0) {
        return Err(Error::InvalidSweep("tol must be > 0".into()));
    }
    req.solver.check()?;
    req.base.get(&req.parameter)?;

    // Labels do not depend on parameter values; resolve them once.
    let probe = build_recycling_mdp(&req.base.with(&req.parameter, lo)?)?;
    let s = probe.resolve_state(&req.state)?;
    let a1 = probe.resolve_action(s, &req.actions[0])?;
    let a2 = probe.resolve_action(s, &req.actions[1])?;

    let delta = |x: f64| -> Result<f64> {
        let (_, report) = solve_at(&req.base, &[(&req.parameter, x)], &req.solver)?;
        Ok(report.q.get(s, a1) - report.q.get(s, a2))
    };

    // Differences inside the tie tolerance are exact crossings.
    let eps = req.solver.tie_epsilon;
    let snap = |d: f64| if d.abs() <= eps { 0.0 } else { d };
    let d_lo = snap(delta(lo)?);
    let d_hi = snap(delta(hi)?);
    if d_lo * d_hi > 0.0 {
        return Err(Error::NoSignChange {
            a1: req.actions[0].clone(),
            a2: req.actions[1].clone(),
            lo,
            hi,
            dq_lo: d_lo,
            dq_hi: d_hi,
        });
    }

    let mut warnings = Vec::new();
    let xs: Vec<f64> = (0..PRESCAN_POINTS)
        .map(|i| {
            if i == PRESCAN_POINTS - 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (PRESCAN_POINTS - 1) as f64
            }
        })
        .collect();
    let mut ds = Vec::with_capacity(xs.len());
    ds.push(d_lo);
    for &x in &xs[1..PRESCAN_POINTS - 1] {
        ds.push(snap(delta(x)?));
    }
    ds.push(d_hi);

    let brackets: Vec<usize> = (0..PRESCAN_POINTS - 1)
        .filter(|&i| ds[i] == 0.0 || ds[i] * ds[i + 1] < 0.0)
        .collect();
    let first = match brackets.first() {
        Some(&i) => i,
        // Only the right endpoint is an exact root.
        None => PRESCAN_POINTS - 2,
    };
    if brackets.len() > 1 {
        warnings.push(format!(
            "difference changes sign {} times on the pre-scan; using the first crossing",
            brackets.len()
        ));
    }

    let (mut a, mut b) = (xs[first], xs[first + 1]);
    let (mut fa, mut fb) = (ds[first], ds[first + 1]);
    if fa == 0.0 {
        b = a;
        fb = fa;
    }
    let mut location = None;
    let mut steps = 0;
    while a < b && steps < MAX_BISECTIONS {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = delta(mid)?;
        if fm == 0.0 {
            (a, b, fa, fb) = (mid, mid, fm, fm);
            break;
        }
        if (fm > 0.0) == (fa > 0.0) {
            (a, fa) = (mid, fm);
        } else {
            (b, fb) = (mid, fm);
        }
        steps += 1;
        if b - a <= req.tol && fm.abs() <= req.solver.tie_epsilon {
            location = Some(mid);
            break;
        }
    }
    let location = location.unwrap_or(0.5 * (a + b));

    let (mdp, report) = solve_at(&req.base, &[(&req.parameter, location)], &req.solver)?;
    let wide = extract_optimal_actions(&report.q, 10.0 * req.solver.tie_epsilon);
    let certified = wide[s.0].contains(&a1) && wide[s.0].contains(&a2);
    if !certified {
        warnings.push(format!(
            "{} and {} are not both optimal in {} at the located point",
            mdp.action_label(s, a1),
            mdp.action_label(s, a2),
            mdp.state_label(s)
        ));
    }

    Ok(BoundaryResult {
        parameter: req.parameter.clone(),
        state: req.state.clone(),
        action_pair: req.actions.clone(),
        location,
        bracket: [a, b],
        delta_at_bracket: [fa, fb],
        tolerance: req.tol,
        certified,
        warnings,
    })
}
