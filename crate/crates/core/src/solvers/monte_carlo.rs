use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mdp::{ActionId, DeterministicPolicy, Mdp, StateId, Transition};

/// Sample mean of truncated discounted returns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReturnEstimate {
    pub mean: f64,
    /// `1.96 * sd / sqrt(n)`; infinite for a single episode.
    pub half_width_95: f64,
    pub episodes: usize,
    pub horizon: usize,
}

impl ReturnEstimate {
    pub fn contains(&self, value: f64) -> bool {
        (self.mean - value).abs() <= self.half_width_95
    }
}

/// Smallest horizon `H >= 1` with `gamma^H * r_max / (1 - gamma) <= bias`,
/// the largest possible contribution of the discarded tail.
pub fn truncation_horizon(mdp: &Mdp, bias: f64) -> usize {
    let gamma = mdp.gamma();
    let r_max = mdp.max_abs_reward();
    if gamma == 0.0 || r_max == 0.0 {
        return 1;
    }
    let bound = |h: i32| gamma.powi(h) * r_max / (1.0 - gamma);
    let mut h = ((bias * (1.0 - gamma) / r_max).ln() / gamma.ln()).ceil().max(1.0) as i32;
    while bound(h) > bias {
        h += 1;
    }
    while h > 1 && bound(h - 1) <= bias {
        h -= 1;
    }
    h as usize
}

/// Monte Carlo estimate of `q_pi(s, a)`: start in `s`, take `a`, then follow
/// `pi` for the rest of `horizon` steps. Fully determined by `seed`.
pub fn estimate_return(
    mdp: &Mdp,
    pi: &DeterministicPolicy,
    s: StateId,
    a: ActionId,
    episodes: usize,
    horizon: usize,
    seed: u64,
) -> Result<ReturnEstimate> {
    if episodes == 0 || horizon == 0 {
        return Err(Error::Domain("episodes and horizon must be at least 1".into()));
    }
    if s.0 >= mdp.num_states() || a.0 >= mdp.num_actions(s) {
        return Err(Error::InvalidPolicy(format!("no pair ({s}, {a}) in model")));
    }
    let gamma = mdp.gamma();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Welford running mean / variance.
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for n in 1..=episodes {
        let mut state = s;
        let mut action = a;
        let mut discount = 1.0;
        let mut ret = 0.0;
        for _ in 0..horizon {
            let t = sample(mdp.transitions(state, action), &mut rng);
            ret += discount * t.reward;
            discount *= gamma;
            state = t.next;
            action = pi.action(state);
        }
        let delta = ret - mean;
        mean += delta / n as f64;
        m2 += delta * (ret - mean);
    }

    let half_width_95 = if episodes > 1 {
        let sd = (m2 / (episodes - 1) as f64).sqrt();
        1.96 * sd / (episodes as f64).sqrt()
    } else {
        f64::INFINITY
    };
    Ok(ReturnEstimate { mean, half_width_95, episodes, horizon })
}

fn sample<'a>(row: &'a [Transition], rng: &mut ChaCha8Rng) -> &'a Transition {
    if row.len() == 1 {
        return &row[0];
    }
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for t in row {
        acc += t.probability;
        if u < acc {
            return t;
        }
    }
    row.iter().rev().find(|t| t.probability > 0.0).unwrap_or(&row[row.len() - 1])
}
