//! The two-state recycling robot and its experiment presets.
//!
//! States are battery levels `High` and `Low`. Searching may drain the
//! battery (`alpha`, `beta` are the probabilities of staying at the same
//! level), waiting keeps the level, and recharging is only offered when low.
//! Searching with a low battery can deplete it, which costs `r_rescue` and
//! returns the robot to `High`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mdp::{Mdp, StateId, Transition};

pub const HIGH: StateId = StateId(0);
pub const LOW: StateId = StateId(1);

/// Names accepted by [`RecyclingParams::get`] and [`RecyclingParams::set`].
pub const PARAMETER_NAMES: [&str; 7] =
    ["alpha", "beta", "r_search", "r_wait", "r_recharge", "r_rescue", "gamma"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecyclingParams {
    pub alpha: f64,
    pub beta: f64,
    pub r_search: f64,
    pub r_wait: f64,
    pub r_recharge: f64,
    pub r_rescue: f64,
    pub gamma: f64,
}

impl Default for RecyclingParams {
    /// Fixed values of the waiting-reward experiment with `r_wait = 0`.
    fn default() -> Self {
        Self {
            alpha: 0.3,
            beta: 0.1,
            r_search: 1.0,
            r_wait: 0.0,
            r_recharge: 0.0,
            r_rescue: -3.0,
            gamma: 0.9,
        }
    }
}

impl RecyclingParams {
    pub fn get(&self, name: &str) -> Result<f64> {
        Ok(match name {
            "alpha" => self.alpha,
            "beta" => self.beta,
            "r_search" => self.r_search,
            "r_wait" => self.r_wait,
            "r_recharge" => self.r_recharge,
            "r_rescue" => self.r_rescue,
            "gamma" => self.gamma,
            _ => return Err(Error::UnknownParameter(name.to_string())),
        })
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let slot = match name {
            "alpha" => &mut self.alpha,
            "beta" => &mut self.beta,
            "r_search" => &mut self.r_search,
            "r_wait" => &mut self.r_wait,
            "r_recharge" => &mut self.r_recharge,
            "r_rescue" => &mut self.r_rescue,
            "gamma" => &mut self.gamma,
            _ => return Err(Error::UnknownParameter(name.to_string())),
        };
        *slot = value;
        Ok(())
    }

    pub fn with(mut self, name: &str, value: f64) -> Result<Self> {
        self.set(name, value)?;
        Ok(self)
    }

    pub fn check(&self) -> Result<()> {
        for (name, p) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Domain(format!("{name} = {p} outside [0, 1]")));
            }
        }
        if !(self.gamma.is_finite() && (0.0..1.0).contains(&self.gamma)) {
            return Err(Error::Domain(format!("gamma = {} outside [0, 1)", self.gamma)));
        }
        for name in ["r_search", "r_wait", "r_recharge", "r_rescue"] {
            let r = self.get(name)?;
            if !r.is_finite() {
                return Err(Error::Domain(format!("{name} = {r} is not finite")));
            }
        }
        Ok(())
    }
}

/// Builds the seven-row dynamics table. Zero-probability rows at the edges of
/// `[0, 1]` are kept so the structure is the same everywhere.
pub fn build_recycling_mdp(p: &RecyclingParams) -> Result<Mdp> {
    p.check()?;
    let t = Transition::new;
    Mdp::from_parts(
        vec!["High".into(), "Low".into()],
        vec![
            vec!["search_H".into(), "wait_H".into()],
            vec!["search_L".into(), "wait_L".into(), "recharge_L".into()],
        ],
        vec![
            vec![
                vec![t(HIGH, p.alpha, p.r_search), t(LOW, 1.0 - p.alpha, p.r_search)],
                vec![t(HIGH, 1.0, p.r_wait)],
            ],
            vec![
                vec![t(HIGH, 1.0 - p.beta, p.r_rescue), t(LOW, p.beta, p.r_search)],
                vec![t(LOW, 1.0, p.r_wait)],
                vec![t(HIGH, 1.0, p.r_recharge)],
            ],
        ],
        p.gamma,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweptRange {
    pub param: String,
    pub min: f64,
    pub max: f64,
}

/// One experiment: the values held fixed and the parameters it varies.
/// Swept parameters also carry a base value in `fixed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPreset {
    pub name: String,
    pub description: String,
    pub fixed: RecyclingParams,
    pub swept: Vec<SweptRange>,
}

impl ExperimentPreset {
    pub fn swept_range(&self, param: &str) -> Option<&SweptRange> {
        self.swept.iter().find(|s| s.param == param)
    }
}

const PRESET_SOURCES: [(&str, &str); 4] = [
    ("exp1", include_str!("../../../data/presets/exp1.json")),
    ("exp2", include_str!("../../../data/presets/exp2.json")),
    ("exp3", include_str!("../../../data/presets/exp3.json")),
    ("exp4", include_str!("../../../data/presets/exp4.json")),
];

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESET_SOURCES.iter().map(|(n, _)| *n)
}

pub fn preset(name: &str) -> Result<ExperimentPreset> {
    let (_, src) = PRESET_SOURCES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))?;
    Ok(serde_json::from_str(src).expect("bundled presets are well formed"))
}

pub fn presets() -> Vec<ExperimentPreset> {
    preset_names().map(|n| preset(n).expect("bundled")).collect()
}
