//! One- and two-parameter sweeps of the recycling model.
//!
//! Every grid cell is an independent exact solve. Cells are computed in
//! parallel and assembled in row-major order (first axis outermost), so the
//! result does not depend on scheduling.

mod boundary;
mod export;
mod regions;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mdp::Mdp;
use crate::recycling::{build_recycling_mdp, ExperimentPreset, RecyclingParams};
use crate::solvers::{solve_exact, SolveReport, SolverConfig};

pub use boundary::{find_boundary, BoundaryRequest, BoundaryResult, DEFAULT_BOUNDARY_TOL};
pub use export::sweep_to_csv;
pub use regions::{classify_regions, CellRegion, IntervalRegion, RegionBoundary, Regions};

pub const DEFAULT_STEPS_1D: usize = 101;
pub const DEFAULT_STEPS_2D: usize = 51;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub param: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    /// Evenly spaced grid; the last value is exactly `max`.
    pub fn values(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub base: RecyclingParams,
    pub axes: Vec<Axis>,
    #[serde(default)]
    pub solver: SolverConfig,
}

impl SweepSpec {
    /// Spec over a preset's swept ranges, one step count per axis.
    pub fn from_preset(preset: &ExperimentPreset, steps: &[usize]) -> Result<Self> {
        if steps.len() != preset.swept.len() {
            return Err(Error::InvalidSweep(format!(
                "preset {} sweeps {} parameters, got {} step counts",
                preset.name,
                preset.swept.len(),
                steps.len()
            )));
        }
        let axes = preset
            .swept
            .iter()
            .zip(steps)
            .map(|(r, &steps)| Axis { param: r.param.clone(), min: r.min, max: r.max, steps })
            .collect();
        Ok(Self { base: preset.fixed, axes, solver: SolverConfig::default() })
    }

    pub fn num_cells(&self) -> usize {
        self.axes.iter().map(|a| a.steps).product()
    }

    pub fn check(&self, dims: usize) -> Result<()> {
        if self.axes.len() != dims {
            return Err(Error::InvalidSweep(format!(
                "expected {dims} axis(es), got {}",
                self.axes.len()
            )));
        }
        for axis in &self.axes {
            self.base.get(&axis.param)?;
            if axis.steps < 2 {
                return Err(Error::InvalidSweep(format!(
                    "axis {} needs at least 2 steps",
                    axis.param
                )));
            }
            if !(axis.min.is_finite() && axis.max.is_finite() && axis.min < axis.max) {
                return Err(Error::InvalidSweep(format!(
                    "axis {} needs finite min < max",
                    axis.param
                )));
            }
        }
        if dims == 2 && self.axes[0].param == self.axes[1].param {
            return Err(Error::InvalidSweep("axis parameters must differ".into()));
        }
        if self
            .axes
            .iter()
            .try_fold(1usize, |acc, a| acc.checked_mul(a.steps))
            .is_none()
        {
            return Err(Error::InvalidSweep("grid size overflows".into()));
        }
        self.solver.check()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    /// Swept parameter values, in axis order.
    pub params: Vec<f64>,
    /// `q*(s, a)` aligned with [`SweepResult::actions`].
    pub q: Vec<Vec<f64>>,
    /// Optimal action labels per state, ties included.
    pub optimal: Vec<Vec<String>>,
    pub residual: f64,
}

/// Per-state labeling of a 2D grid: `labels[cell]` indexes `legend`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionMap {
    pub state: String,
    pub legend: Vec<Vec<String>>,
    pub labels: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub states: Vec<String>,
    pub actions: Vec<Vec<String>>,
    pub cells: Vec<SweepCell>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub regions: Vec<RegionMap>,
}

impl SweepResult {
    pub fn state_index(&self, label: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s == label)
            .ok_or_else(|| Error::UnknownState(label.to_string()))
    }

    pub fn q_value(&self, cell: usize, state: &str, action: &str) -> Result<f64> {
        let s = self.state_index(state)?;
        let a = self.actions[s].iter().position(|x| x == action).ok_or_else(|| {
            Error::UnknownAction { state: state.to_string(), action: action.to_string() }
        })?;
        Ok(self.cells[cell].q[s][a])
    }

    pub fn is_optimal(&self, cell: usize, state: &str, action: &str) -> Result<bool> {
        let s = self.state_index(state)?;
        Ok(self.cells[cell].optimal[s].iter().any(|a| a == action))
    }
}

pub fn sweep_1d(spec: &SweepSpec) -> Result<SweepResult> {
    spec.check(1)?;
    run_grid(spec)
}

/// Full 2D grid plus a per-state region labeling of the cells.
pub fn sweep_2d(spec: &SweepSpec) -> Result<SweepResult> {
    spec.check(2)?;
    let mut result = run_grid(spec)?;
    result.regions = (0..result.states.len())
        .map(|s| {
            let mut legend: Vec<Vec<String>> = Vec::new();
            let labels = result
                .cells
                .iter()
                .map(|c| match legend.iter().position(|l| *l == c.optimal[s]) {
                    Some(i) => i,
                    None => {
                        legend.push(c.optimal[s].clone());
                        legend.len() - 1
                    }
                })
                .collect();
            RegionMap { state: result.states[s].clone(), legend, labels }
        })
        .collect();
    Ok(result)
}

pub(crate) fn solve_at(
    base: &RecyclingParams,
    assignments: &[(&str, f64)],
    cfg: &SolverConfig,
) -> Result<(Mdp, SolveReport)> {
    let mut p = *base;
    for (name, value) in assignments {
        p.set(name, *value)?;
    }
    let mdp = build_recycling_mdp(&p)?;
    let report = solve_exact(&mdp, cfg)?;
    Ok((mdp, report))
}

fn grid_points(spec: &SweepSpec) -> Vec<Vec<f64>> {
    let values: Vec<Vec<f64>> = spec.axes.iter().map(Axis::values).collect();
    let mut points = vec![Vec::new()];
    for axis in &values {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    points
}

fn run_grid(spec: &SweepSpec) -> Result<SweepResult> {
    let points = grid_points(spec);
    let solved: Vec<Result<(Mdp, SweepCell)>> = points
        .into_par_iter()
        .enumerate()
        .map(|(index, params)| solve_cell(spec, params).map_err(|e| Error::Cell { index, source: Box::new(e) }))
        .collect();

    let mut cells = Vec::with_capacity(solved.len());
    let mut shape: Option<(Vec<String>, Vec<Vec<String>>)> = None;
    for item in solved {
        let (mdp, cell) = item?;
        if shape.is_none() {
            shape = Some((
                mdp.state_labels().to_vec(),
                mdp.states().map(|s| mdp.action_labels(s).to_vec()).collect(),
            ));
        }
        cells.push(cell);
    }
    let (states, actions) = shape.expect("grid has at least four cells");
    Ok(SweepResult { spec: spec.clone(), states, actions, cells, regions: Vec::new() })
}

fn solve_cell(spec: &SweepSpec, params: Vec<f64>) -> Result<(Mdp, SweepCell)> {
    let assignments: Vec<(&str, f64)> = spec
        .axes
        .iter()
        .zip(&params)
        .map(|(a, &v)| (a.param.as_str(), v))
        .collect();
    let (mdp, report) = solve_at(&spec.base, &assignments, &spec.solver)?;
    let cell = SweepCell {
        params,
        q: report.q.rows().to_vec(),
        optimal: mdp
            .states()
            .map(|s| {
                report.optimal_actions[s.0]
                    .iter()
                    .map(|&a| mdp.action_label(s, a).to_string())
                    .collect()
            })
            .collect(),
        residual: report.residual,
    };
    Ok((mdp, cell))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recycling::preset;

    #[test]
    fn axis_values_hit_endpoints() {
        let axis = Axis { param: "r_wait".into(), min: -2.0, max: 2.0, steps: 101 };
        let v = axis.values();
        assert_eq!(v.len(), 101);
        assert_eq!(v[0], -2.0);
        assert_eq!(v[100], 2.0);
        assert_eq!(v[75], 1.0);
    }

    #[test]
    fn spec_checks() {
        let p = preset("exp4").unwrap();
        let mut spec = SweepSpec::from_preset(&p, &[1]).unwrap();
        assert!(matches!(sweep_1d(&spec), Err(Error::InvalidSweep(_))));
        spec.axes[0].steps = 5;
        spec.axes[0].min = 3.0;
        assert!(matches!(sweep_1d(&spec), Err(Error::InvalidSweep(_))));
        spec.axes[0].min = -2.0;
        spec.axes[0].param = "r_wiat".into();
        assert!(matches!(sweep_1d(&spec), Err(Error::UnknownParameter(_))));
        assert!(SweepSpec::from_preset(&p, &[3, 3]).is_err());
        let two = SweepSpec::from_preset(&preset("exp2").unwrap(), &[3, 3]).unwrap();
        assert!(sweep_1d(&two).is_err());
        let mut same = two.clone();
        same.axes[1].param = "alpha".into();
        assert!(sweep_2d(&same).is_err());
    }

    #[test]
    fn degenerate_range() {
        let mut spec = SweepSpec::from_preset(&preset("exp4").unwrap(), &[2]).unwrap();
        spec.axes[0].min = 0.3;
        spec.axes[0].max = 0.3 + 1e-12;
        let r = sweep_1d(&spec).unwrap();
        assert_eq!(r.cells.len(), 2);
        assert_eq!(r.cells[0].optimal, r.cells[1].optimal);
        assert!((r.cells[0].q[0][0] - r.cells[1].q[0][0]).abs() < 1e-9);
    }

    #[test]
    fn out_of_domain_cell_reports_index() {
        let mut spec = SweepSpec::from_preset(&preset("exp2").unwrap(), &[3, 3]).unwrap();
        spec.axes[1].max = 1.5;
        match sweep_2d(&spec) {
            Err(Error::Cell { index, source }) => {
                assert_eq!(index, 2);
                assert!(matches!(*source, Error::Domain(_)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn two_dimensional_region_labels() {
        let spec = SweepSpec::from_preset(&preset("exp2").unwrap(), &[5, 5]).unwrap();
        let r = sweep_2d(&spec).unwrap();
        assert_eq!(r.cells.len(), 25);
        assert_eq!(r.regions.len(), 2);
        assert_eq!(r.regions[0].legend, vec![vec!["search_H".to_string()]]);
        assert!(r.regions[1].labels.iter().all(|&l| l < r.regions[1].legend.len()));
        assert_eq!(r.cells[7].params, vec![0.25, 0.5]);
    }
}
