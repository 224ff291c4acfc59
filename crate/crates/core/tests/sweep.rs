use qstar_core::solvers::solve_exact;
use qstar_core::sweep::{sweep_1d, sweep_2d, Regions, SweepSpec};
use qstar_core::{
    build_recycling_mdp, classify_regions, extract_optimal_actions, find_boundary, preset,
    sweep_to_csv, BoundaryRequest, SolverConfig,
};

fn spec(name: &str, steps: &[usize]) -> SweepSpec {
    SweepSpec::from_preset(&preset(name).unwrap(), steps).unwrap()
}

#[test]
fn cells_match_individual_solves() {
    let s = spec("exp2", &[7, 5]);
    let result = sweep_2d(&s).unwrap();
    // reverse order, one at a time
    for (i, cell) in result.cells.iter().enumerate().rev() {
        let mut p = s.base;
        p.alpha = cell.params[0];
        p.beta = cell.params[1];
        let report = solve_exact(&build_recycling_mdp(&p).unwrap(), &s.solver).unwrap();
        assert_eq!(report.q.rows(), cell.q.as_slice(), "cell {i}");
    }
    assert_eq!(sweep_2d(&s).unwrap(), result);
    assert_eq!(
        serde_json::to_string(&sweep_2d(&s).unwrap()).unwrap(),
        serde_json::to_string(&result).unwrap()
    );
}

#[test]
fn residuals_are_small() {
    let result = sweep_1d(&spec("exp3", &[41])).unwrap();
    assert!(result.cells.iter().all(|c| c.residual <= 1e-11));
}

#[test]
fn exp3_low_switches_once() {
    let result = sweep_1d(&spec("exp3", &[101])).unwrap();
    let low: Vec<&Vec<String>> = result.cells.iter().map(|c| &c.optimal[1]).collect();
    assert_eq!(low[0], &vec!["recharge_L".to_string()]);
    assert_eq!(low[100], &vec!["search_L".to_string()]);
    let switches = low.windows(2).filter(|w| w[0] != w[1]).count();
    assert_eq!(switches, 1);
}

#[test]
fn exp4_high_searches_below_one() {
    let result = sweep_1d(&spec("exp4", &[101])).unwrap();
    for c in &result.cells {
        if c.params[0] < 1.0 {
            assert_eq!(c.optimal[0], vec!["search_H".to_string()], "{}", c.params[0]);
        }
    }
}

#[test]
fn intervals_partition_the_range() {
    for (name, state) in [("exp3", Some("Low")), ("exp4", None), ("exp4", Some("Low"))] {
        let s = spec(name, &[101]);
        let regions = classify_regions(&sweep_1d(&s).unwrap(), state).unwrap();
        let Regions::Intervals { regions, .. } = regions else { panic!() };
        assert_eq!(regions.first().unwrap().lo, s.axes[0].min);
        assert_eq!(regions.last().unwrap().hi, s.axes[0].max);
        for w in regions.windows(2) {
            assert_eq!(w[0].hi, w[1].lo);
            assert!(w[0].lo <= w[0].hi);
        }
    }
}

#[test]
fn refinement_keeps_labels() {
    let coarse = classify_regions(&sweep_1d(&spec("exp4", &[101])).unwrap(), None).unwrap();
    let fine = classify_regions(&sweep_1d(&spec("exp4", &[201])).unwrap(), None).unwrap();
    assert_eq!(coarse.interior_sequence(), fine.interior_sequence());
    let (Regions::Intervals { boundaries: a, .. }, Regions::Intervals { boundaries: b, .. }) =
        (&coarse, &fine)
    else {
        panic!()
    };
    let interior = |v: &[qstar_core::sweep::RegionBoundary]| {
        let mut locs: Vec<f64> = v.iter().map(|b| b.location).collect();
        locs.dedup();
        locs
    };
    for (x, y) in interior(a).iter().zip(interior(b)) {
        assert!((x - y).abs() < 0.04, "{x} vs {y}");
    }
}

#[test]
fn boundary_certificate_holds_on_re_solve() {
    let cfg = SolverConfig::default();
    let cases = [
        ("exp3", "r_rescue", "Low", ["search_L", "recharge_L"], [-2.5, 0.0]),
        ("exp4", "r_wait", "Low", ["wait_L", "recharge_L"], [0.0, 1.0]),
        ("exp4", "r_wait", "High", ["wait_H", "search_H"], [0.9, 1.1]),
    ];
    for (name, param, state, pair, interval) in cases {
        let base = preset(name).unwrap().fixed;
        let r = find_boundary(&BoundaryRequest {
            base,
            parameter: param.into(),
            state: state.into(),
            actions: pair.map(String::from),
            interval,
            tol: 1e-8,
            solver: cfg,
        })
        .unwrap();
        let mdp = build_recycling_mdp(&base.with(param, r.location).unwrap()).unwrap();
        let report = solve_exact(&mdp, &cfg).unwrap();
        let s = mdp.state_id(state).unwrap();
        let wide = extract_optimal_actions(&report.q, 10.0 * cfg.tie_epsilon);
        for a in pair {
            assert!(wide[s.0].contains(&mdp.action_id(s, a).unwrap()), "{name} {a}");
        }
    }
}

#[test]
fn csv_has_one_row_per_cell() {
    let result = sweep_2d(&spec("exp1", &[4, 3])).unwrap();
    let csv = sweep_to_csv(&result).unwrap();
    assert_eq!(csv.lines().count(), 13);
    assert!(csv.lines().next().unwrap().starts_with("r_wait,r_search,"));
}
