//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use qstar_core::recycling::{HIGH, LOW};
use qstar_core::solvers::truncation_horizon;
use qstar_core::sweep::{sweep_1d, sweep_2d, SweepSpec};
use qstar_core::{
    build_recycling_mdp, check_dominance, classify_regions, enumerate_optimal, estimate_return,
    evaluate_policy, find_boundary, policy_iteration, preset, value_iteration, BoundaryRequest,
    DeterministicPolicy, SolverConfig,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let elapsed = start.elapsed();
    o.detail = format!("{} ({:.3} s)", o.detail, elapsed.as_secs_f64());
    if let Some(limit) = limit {
        if elapsed >= limit {
            o.pass = false;
            o.detail.push_str(&format!(" exceeds {:.0} s", limit.as_secs_f64()));
        }
    }
    o
}

fn boundary(name: &str, param: &str, state: &str, pair: [&str; 2], interval: [f64; 2]) -> f64 {
    find_boundary(&BoundaryRequest {
        base: preset(name).unwrap().fixed,
        parameter: param.into(),
        state: state.into(),
        actions: pair.map(String::from),
        interval,
        tol: 1e-8,
        solver: SolverConfig::default(),
    })
    .expect("boundary")
    .location
}

fn boundary_exp3() -> Outcome {
    let x = boundary("exp3", "r_rescue", "Low", ["search_L", "recharge_L"], [-2.5, 0.0]);
    outcome((x - -0.6718).abs() <= 5e-4, format!("location {x:.7}, want -0.6718 +- 5e-4"))
}

fn boundary_exp4_low() -> Outcome {
    let x = boundary("exp4", "r_wait", "Low", ["wait_L", "recharge_L"], [0.0, 1.0]);
    outcome((x - 0.552147).abs() <= 5e-4, format!("location {x:.7}, want 0.552147 +- 5e-4"))
}

fn boundary_exp4_high() -> Outcome {
    let x = boundary("exp4", "r_wait", "High", ["wait_H", "search_H"], [0.9, 1.1]);
    outcome((x - 1.0).abs() <= 1e-6, format!("location {x:.9}, want 1 +- 1e-6"))
}

fn region_sequence_exp4() -> Outcome {
    let spec = SweepSpec::from_preset(&preset("exp4").unwrap(), &[101]).unwrap();
    let regions = classify_regions(&sweep_1d(&spec).unwrap(), None).unwrap();
    let got: Vec<String> = regions
        .interior_sequence()
        .iter()
        .map(|sets| sets.iter().map(|s| s.join("|")).collect::<Vec<_>>().join(","))
        .collect();
    let want = ["search_H,recharge_L", "search_H,wait_L", "wait_H,wait_L"];
    outcome(got == want, format!("sequence [{}]", got.join(" -> ")))
}

fn exp1_properties() -> Outcome {
    let spec = SweepSpec::from_preset(&preset("exp1").unwrap(), &[51, 51]).unwrap();
    let result = sweep_2d(&spec).unwrap();
    let mut bad_high = 0;
    let mut search_low = 0;
    for (i, cell) in result.cells.iter().enumerate() {
        let (r_wait, r_search) = (cell.params[0], cell.params[1]);
        let high = &cell.optimal[HIGH.0];
        if r_search > r_wait + 1e-6 && *high != ["search_H"] {
            bad_high += 1;
        }
        if r_wait > r_search + 1e-6 && *high != ["wait_H"] {
            bad_high += 1;
        }
        if result.is_optimal(i, "Low", "search_L").unwrap() {
            search_low += 1;
        }
    }
    outcome(
        bad_high == 0 && search_low == 0,
        format!(
            "{} cells, {bad_high} High cells against the larger reward, search_L optimal in {search_low}",
            result.cells.len()
        ),
    )
}

fn exp2_properties() -> Outcome {
    let spec = SweepSpec::from_preset(&preset("exp2").unwrap(), &[33, 33]).unwrap();
    let result = sweep_2d(&spec).unwrap();
    let mut below = 0;
    let mut search_high_beta = false;
    let mut recharge_low_beta = false;
    for (i, cell) in result.cells.iter().enumerate() {
        let beta = cell.params[1];
        let search = result.q_value(i, "High", "search_H").unwrap();
        let wait = result.q_value(i, "High", "wait_H").unwrap();
        if search < wait {
            below += 1;
        }
        if beta >= 0.9 && result.is_optimal(i, "Low", "search_L").unwrap() {
            search_high_beta = true;
        }
        if beta <= 0.1 && result.is_optimal(i, "Low", "recharge_L").unwrap() {
            recharge_low_beta = true;
        }
    }
    outcome(
        below == 0 && search_high_beta && recharge_low_beta,
        format!(
            "search_H below wait_H in {below} cells; search_L at beta>=0.9: {search_high_beta}; \
             recharge_L at beta<=0.1: {recharge_low_beta}"
        ),
    )
}

fn oracle_equivalence() -> Outcome {
    let cfg = SolverConfig::default();
    let failures: Vec<u64> = (0..200u64)
        .into_par_iter()
        .filter(|&seed| {
            let gamma = 0.95 * (seed as f64 / 199.0);
            let mdp = common::random_mdp(0xACCE_0000 + seed, gamma);
            let oracle = enumerate_optimal(&mdp, &cfg).unwrap();
            let vi = value_iteration(&mdp, &cfg).unwrap();
            let pi = policy_iteration(&mdp, &cfg).unwrap();
            !(vi.q.sup_distance(&oracle.q) <= 1e-8
                && pi.q.sup_distance(&oracle.q) <= 1e-8
                && vi.optimal_actions == oracle.optimal_actions
                && pi.optimal_actions == oracle.optimal_actions)
        })
        .collect();
    outcome(failures.is_empty(), format!("{} of 200 MDPs disagree {failures:?}", failures.len()))
}

fn dominance() -> Outcome {
    let cfg = SolverConfig::default();
    let mut failing = Vec::new();
    for name in ["exp1", "exp2", "exp3", "exp4"] {
        let mdp = build_recycling_mdp(&preset(name).unwrap().fixed).unwrap();
        let report = enumerate_optimal(&mdp, &cfg).unwrap();
        let check = check_dominance(&mdp, &report, &cfg).unwrap();
        if !check.dominates || check.policies_checked != 6 {
            failing.push(name);
        }
    }
    outcome(failing.is_empty(), format!("failing presets {failing:?}"))
}

fn monte_carlo() -> Outcome {
    let mdp = build_recycling_mdp(&preset("exp4").unwrap().fixed).unwrap();
    let cfg = SolverConfig::default();
    let pi = enumerate_optimal(&mdp, &cfg).unwrap().representative_policy();
    let recharge = mdp.action_id(LOW, "recharge_L").unwrap();
    let exact = evaluate_policy(&mdp, &pi).unwrap().get(LOW, recharge);
    let horizon = truncation_horizon(&mdp, 1e-6);
    let hits = (0..100u64)
        .into_par_iter()
        .filter(|&seed| {
            estimate_return(&mdp, &pi, LOW, recharge, 100_000, horizon, seed)
                .unwrap()
                .contains(exact)
        })
        .count();
    outcome(hits >= 93, format!("{hits}/100 seeds cover {exact:.6} (horizon {horizon})"))
}

fn exactness_anchor() -> Outcome {
    let mdp = build_recycling_mdp(&preset("exp4").unwrap().fixed.with("r_wait", 0.0).unwrap())
        .unwrap();
    let report = enumerate_optimal(&mdp, &SolverConfig::default()).unwrap();
    let (vh, vl) = (report.state_value(HIGH), report.state_value(LOW));
    let policy = DeterministicPolicy::from_labels(&mdp, &["search_H", "recharge_L"]).unwrap();
    outcome(
        (vh - 6.134969).abs() <= 1e-6
            && (vl - 5.521472).abs() <= 1e-6
            && report.optimal_policies == [policy],
        format!("v*(High) = {vh:.7}, v*(Low) = {vl:.7}"),
    )
}

type Criterion = (&'static str, Option<u64>, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("boundary exp3 r_rescue (Low search_L/recharge_L)", Some(1), boundary_exp3),
        ("boundary exp4 r_wait (Low wait_L/recharge_L)", Some(1), boundary_exp4_low),
        ("boundary exp4 r_wait (High wait_H/search_H)", Some(1), boundary_exp4_high),
        ("region sequence exp4 r_wait in [-2, 2]", None, region_sequence_exp4),
        ("exp1 51x51 High follows larger reward, search_L never optimal", Some(5), exp1_properties),
        ("exp2 33x33 search_H dominates, beta drives Low", Some(3), exp2_properties),
        ("oracle equivalence on 200 random MDPs", None, oracle_equivalence),
        ("dominance over all policies for every preset", None, dominance),
        ("Monte Carlo return within 95% half-width, >= 93/100 seeds", None, monte_carlo),
        ("exactness anchor v*(High), v*(Low) under exp4 r_wait = 0", None, exactness_anchor),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let o = timed(limit.map(Duration::from_secs), run);
        if !o.pass {
            failed += 1;
        }
        println!("[{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
