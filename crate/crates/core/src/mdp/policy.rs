use serde::{Deserialize, Serialize};

use super::{ActionId, Mdp, StateId};
use crate::error::{Error, Result};

/// One action per state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DeterministicPolicy {
    choice: Vec<ActionId>,
}

impl DeterministicPolicy {
    pub fn new(mdp: &Mdp, choice: Vec<ActionId>) -> Result<Self> {
        if choice.len() != mdp.num_states() {
            return Err(Error::InvalidPolicy(format!(
                "policy covers {} states, model has {}",
                choice.len(),
                mdp.num_states()
            )));
        }
        for (s, a) in choice.iter().enumerate() {
            if a.0 >= mdp.num_actions(StateId(s)) {
                return Err(Error::InvalidPolicy(format!(
                    "action index {} not available in state `{}`",
                    a.0,
                    mdp.state_label(StateId(s))
                )));
            }
        }
        Ok(Self { choice })
    }

    pub(crate) fn from_choice_unchecked(choice: Vec<ActionId>) -> Self {
        Self { choice }
    }

    /// Policy taking the first declared action everywhere.
    pub fn first_actions(mdp: &Mdp) -> Self {
        Self { choice: vec![ActionId(0); mdp.num_states()] }
    }

    /// Builds a policy from action labels, one per state, in any order.
    pub fn from_labels<S: AsRef<str>>(mdp: &Mdp, labels: &[S]) -> Result<Self> {
        let mut choice: Vec<Option<ActionId>> = vec![None; mdp.num_states()];
        for label in labels {
            let label = label.as_ref();
            let (s, a) = mdp
                .find_action(label)
                .ok_or_else(|| Error::InvalidPolicy(format!("unknown action `{label}`")))?;
            if choice[s.0].replace(a).is_some() {
                return Err(Error::InvalidPolicy(format!(
                    "state `{}` is assigned twice",
                    mdp.state_label(s)
                )));
            }
        }
        let choice = choice
            .into_iter()
            .enumerate()
            .map(|(s, a)| {
                a.ok_or_else(|| {
                    Error::InvalidPolicy(format!(
                        "no action given for state `{}`",
                        mdp.state_label(StateId(s))
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { choice })
    }

    pub fn action(&self, s: StateId) -> ActionId {
        self.choice[s.0]
    }

    pub fn choices(&self) -> &[ActionId] {
        &self.choice
    }

    pub fn labels<'m>(&self, mdp: &'m Mdp) -> Vec<&'m str> {
        self.choice
            .iter()
            .enumerate()
            .map(|(s, &a)| mdp.action_label(StateId(s), a))
            .collect()
    }

    /// Every deterministic policy of `mdp` in mixed-radix order (last state
    /// varies fastest).
    pub fn enumerate(mdp: &Mdp) -> impl Iterator<Item = DeterministicPolicy> + '_ {
        let radix: Vec<usize> = mdp.states().map(|s| mdp.num_actions(s)).collect();
        let mut next = if radix.iter().all(|&r| r > 0) {
            Some(vec![ActionId(0); radix.len()])
        } else {
            None
        };
        std::iter::from_fn(move || {
            let current = next.take()?;
            let mut succ = current.clone();
            let mut carry = true;
            for (slot, &r) in succ.iter_mut().zip(&radix).rev() {
                slot.0 += 1;
                if slot.0 < r {
                    carry = false;
                    break;
                }
                slot.0 = 0;
            }
            if !carry {
                next = Some(succ);
            }
            Some(DeterministicPolicy { choice: current })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recycling::{build_recycling_mdp, RecyclingParams};

    #[test]
    fn enumerates_all_six_recycling_policies() {
        let mdp = build_recycling_mdp(&RecyclingParams::default()).unwrap();
        let all: Vec<_> = DeterministicPolicy::enumerate(&mdp).collect();
        assert_eq!(all.len(), 6);
        let mut dedup = all.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 6);
    }

    #[test]
    fn labels_resolve_to_states() {
        let mdp = build_recycling_mdp(&RecyclingParams::default()).unwrap();
        let pi = DeterministicPolicy::from_labels(&mdp, &["recharge_L", "search_H"]).unwrap();
        assert_eq!(pi.labels(&mdp), vec!["search_H", "recharge_L"]);
        assert!(DeterministicPolicy::from_labels(&mdp, &["search_H"]).is_err());
        assert!(DeterministicPolicy::from_labels(&mdp, &["search_H", "wait_H"]).is_err());
        assert!(DeterministicPolicy::new(&mdp, vec![ActionId(2), ActionId(0)]).is_err());
    }
}
