use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::boundary::{find_boundary, BoundaryRequest, DEFAULT_BOUNDARY_TOL};
use super::SweepResult;
use crate::error::{Error, Result};

/// Maximal interval with one optimal action set per state in scope.
/// A single grid point sitting exactly on a tie becomes a zero-width region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalRegion {
    pub lo: f64,
    pub hi: f64,
    pub optimal: Vec<Vec<String>>,
    /// First and last grid cell of the region.
    pub cells: [usize; 2],
}

impl IntervalRegion {
    pub fn is_interior(&self) -> bool {
        self.hi > self.lo
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionBoundary {
    pub location: f64,
    /// State whose optimal set changes here (first one in scope order).
    pub state: String,
    /// Actions bisected on; absent when the boundary sits on a tie cell.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actions: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// 4-connected set of grid cells sharing one labeling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRegion {
    pub optimal: Vec<Vec<String>>,
    pub cells: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Regions {
    Intervals {
        parameter: String,
        states: Vec<String>,
        regions: Vec<IntervalRegion>,
        boundaries: Vec<RegionBoundary>,
    },
    Cells {
        parameters: [String; 2],
        states: Vec<String>,
        regions: Vec<CellRegion>,
    },
}

impl Regions {
    /// Optimal sets of the regions with positive width, in order.
    pub fn interior_sequence(&self) -> Vec<Vec<Vec<String>>> {
        match self {
            Regions::Intervals { regions, .. } => regions
                .iter()
                .filter(|r| r.is_interior())
                .map(|r| r.optimal.clone())
                .collect(),
            Regions::Cells { regions, .. } => regions.iter().map(|r| r.optimal.clone()).collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            Regions::Intervals { parameter, states, regions, .. } => {
                let _ = writeln!(out, "{parameter}");
                for r in regions {
                    let _ = write!(out, "  [{:.6}, {:.6}]", r.lo, r.hi);
                    for (s, set) in states.iter().zip(&r.optimal) {
                        let _ = write!(out, "  {s}: {}", set.join("|"));
                    }
                    out.push('\n');
                }
            }
            Regions::Cells { parameters, states, regions } => {
                let _ = writeln!(out, "{} x {}", parameters[0], parameters[1]);
                for r in regions {
                    let _ = write!(out, "  {} cells", r.cells.len());
                    for (s, set) in states.iter().zip(&r.optimal) {
                        let _ = write!(out, "  {s}: {}", set.join("|"));
                    }
                    out.push('\n');
                }
            }
        }
        out
    }
}

/// Merges adjacent cells with identical optimal sets.
///
/// `state = None` classifies the joint policy over all states. In 1D the
/// boundary between two regions is refined by bisection on a pair of actions
/// that is optimal on one side only; in 2D regions are connected components.
pub fn classify_regions(result: &SweepResult, state: Option<&str>) -> Result<Regions> {
    let scope: Vec<usize> = match state {
        Some(label) => vec![result.state_index(label)?],
        None => (0..result.states.len()).collect(),
    };
    let keys: Vec<Vec<Vec<String>>> = result
        .cells
        .iter()
        .map(|c| scope.iter().map(|&s| c.optimal[s].clone()).collect())
        .collect();
    let states: Vec<String> = scope.iter().map(|&s| result.states[s].clone()).collect();

    match result.spec.axes.len() {
        1 => intervals(result, &scope, &keys, states),
        2 => Ok(components(result, &keys, states)),
        n => Err(Error::InvalidSweep(format!("cannot classify a {n}-axis sweep"))),
    }
}

fn intervals(
    result: &SweepResult,
    scope: &[usize],
    keys: &[Vec<Vec<String>>],
    states: Vec<String>,
) -> Result<Regions> {
    let axis = &result.spec.axes[0];
    let xs: Vec<f64> = result.cells.iter().map(|c| c.params[0]).collect();

    // Runs of identical keys as [first, last] cell indices.
    let mut runs: Vec<[usize; 2]> = Vec::new();
    for i in 0..keys.len() {
        match runs.last_mut() {
            Some(run) if keys[run[1]] == keys[i] => run[1] = i,
            _ => runs.push([i, i]),
        }
    }

    let mut boundaries = Vec::with_capacity(runs.len().saturating_sub(1));
    for pair in runs.windows(2) {
        let (left, right) = (pair[0][1], pair[1][0]);
        let k = (0..scope.len())
            .find(|&k| keys[left][k] != keys[right][k])
            .expect("adjacent runs differ");
        let l = &keys[left][k];
        let r = &keys[right][k];
        let only_left = l.iter().find(|a| !r.contains(a));
        let only_right = r.iter().find(|a| !l.contains(a));
        let state_label = result.states[scope[k]].clone();
        let boundary = match (only_left, only_right) {
            (Some(a1), Some(a2)) => {
                let found = find_boundary(&BoundaryRequest {
                    base: result.spec.base,
                    parameter: axis.param.clone(),
                    state: state_label.clone(),
                    actions: [a1.clone(), a2.clone()],
                    interval: [xs[left], xs[right]],
                    tol: DEFAULT_BOUNDARY_TOL,
                    solver: result.spec.solver,
                })?;
                RegionBoundary {
                    location: found.location,
                    state: state_label,
                    actions: Some([a1.clone(), a2.clone()]),
                    warnings: found.warnings,
                }
            }
            // One side is a superset: it holds the tie, so the switch is at
            // that grid point.
            (Some(_), None) => RegionBoundary {
                location: xs[left],
                state: state_label,
                actions: None,
                warnings: Vec::new(),
            },
            (None, _) => RegionBoundary {
                location: xs[right],
                state: state_label,
                actions: None,
                warnings: Vec::new(),
            },
        };
        boundaries.push(boundary);
    }

    let regions = runs
        .iter()
        .enumerate()
        .map(|(i, run)| IntervalRegion {
            lo: if i == 0 { axis.min } else { boundaries[i - 1].location },
            hi: if i + 1 == runs.len() { axis.max } else { boundaries[i].location },
            optimal: keys[run[0]].clone(),
            cells: *run,
        })
        .collect();

    Ok(Regions::Intervals { parameter: axis.param.clone(), states, regions, boundaries })
}

fn components(result: &SweepResult, keys: &[Vec<Vec<String>>], states: Vec<String>) -> Regions {
    let cols = result.spec.axes[1].steps;
    let rows = result.spec.axes[0].steps;
    let mut region_of = vec![usize::MAX; keys.len()];
    let mut regions = Vec::new();
    for start in 0..keys.len() {
        if region_of[start] != usize::MAX {
            continue;
        }
        let id = regions.len();
        let mut members = Vec::new();
        let mut stack = vec![start];
        region_of[start] = id;
        while let Some(c) = stack.pop() {
            members.push(c);
            let (i, j) = (c / cols, c % cols);
            let mut neighbours = Vec::with_capacity(4);
            if i > 0 {
                neighbours.push(c - cols);
            }
            if i + 1 < rows {
                neighbours.push(c + cols);
            }
            if j > 0 {
                neighbours.push(c - 1);
            }
            if j + 1 < cols {
                neighbours.push(c + 1);
            }
            for n in neighbours {
                if region_of[n] == usize::MAX && keys[n] == keys[start] {
                    region_of[n] = id;
                    stack.push(n);
                }
            }
        }
        members.sort_unstable();
        regions.push(CellRegion { optimal: keys[start].clone(), cells: members });
    }
    let parameters = [result.spec.axes[0].param.clone(), result.spec.axes[1].param.clone()];
    Regions::Cells { parameters, states, regions }
}
