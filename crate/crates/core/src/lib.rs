//! Exact solution of finite Markov decision processes and tools for
//! studying how the optimal policy responds to changes in rewards and
//! transition probabilities.
//!
//! * [`mdp`]: the model, its validation rules and its JSON format.
//! * [`solvers`]: exact policy evaluation, value and policy iteration, a
//!   brute-force enumeration oracle, dominance checks and a Monte Carlo
//!   cross-check.
//! * [`recycling`]: the two-state recycling robot and its experiment presets.
//! * [`graph`]: DOT export of transition graphs.
//! * [`sweep`]: parameter sweeps, policy-switch boundaries and regions.

pub mod error;
pub mod graph;
mod linalg;
pub mod mdp;
pub mod problem;
pub mod recycling;
pub mod solvers;
pub mod sweep;

pub use error::{Error, Result};
pub use graph::export_transition_graph;
pub use mdp::{
    parse_mdp, serialize_mdp, validate, ActionId, DeterministicPolicy, Mdp, QKind, QTable,
    StateId, Transition, Violation,
};
pub use recycling::{build_recycling_mdp, preset, presets, ExperimentPreset, RecyclingParams};
pub use solvers::{
    check_dominance, enumerate_optimal, estimate_return, evaluate_policy,
    extract_optimal_actions, policy_iteration, solve_exact, value_iteration, ReturnEstimate,
    SolveMethod, SolveReport, SolverConfig,
};
pub use sweep::{
    classify_regions, find_boundary, sweep_1d, sweep_2d, sweep_to_csv, BoundaryRequest,
    BoundaryResult, Regions, SweepResult, SweepSpec,
};
