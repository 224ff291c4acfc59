#![allow(dead_code)]

use qstar_core::{Mdp, StateId, Transition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Small random MDP: 1..=4 states, 1..=3 actions each, 1..=3 outcomes per
/// pair with random rewards in [-2, 2].
pub fn random_mdp(seed: u64, gamma: f64) -> Mdp {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=4usize);
    let states: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let mut actions = Vec::new();
    let mut table = Vec::new();
    for s in 0..n {
        let k = rng.random_range(1..=3usize);
        actions.push((0..k).map(|a| format!("s{s}a{a}")).collect::<Vec<_>>());
        let mut rows = Vec::new();
        for _ in 0..k {
            let outcomes = rng.random_range(1..=3usize);
            let weights: Vec<f64> = (0..outcomes).map(|_| rng.random_range(0.05..1.0)).collect();
            let total: f64 = weights.iter().sum();
            let mut row: Vec<Transition> = weights
                .iter()
                .map(|w| {
                    Transition::new(
                        StateId(rng.random_range(0..n)),
                        w / total,
                        rng.random_range(-2.0..2.0),
                    )
                })
                .collect();
            // absorb rounding so the row sums to 1 exactly in floating point
            let sum: f64 = row.iter().map(|t| t.probability).sum();
            row[0].probability += 1.0 - sum;
            rows.push(row);
        }
        table.push(rows);
    }
    Mdp::from_parts(states, actions, table, gamma).unwrap()
}
