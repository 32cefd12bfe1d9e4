//! Points in DoF space: one rational coordinate per message subset.

use std::collections::BTreeMap;

use num::Zero;

use super::{CoreError, Rat, UserSubset};

/// A joint DoF tuple for K users: d_S for each nonempty S, sparse over the
/// nonzero entries. Absent subsets read as zero, so two points are equal
/// exactly when their nonzero coordinates agree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DofPoint {
    k: u8,
    values: BTreeMap<UserSubset, Rat>,
}

impl DofPoint {
    pub fn new(k: u8) -> DofPoint {
        DofPoint {
            k,
            values: BTreeMap::new(),
        }
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    /// Sets d_S, dropping the entry when the value is zero.
    pub fn set(&mut self, subset: UserSubset, value: Rat) -> Result<(), CoreError> {
        if subset.is_empty() {
            return Err(CoreError::BadParam("empty subset has no DoF variable".into()));
        }
        if subset.members().iter().any(|&u| u > self.k) {
            return Err(CoreError::BadParam(format!(
                "subset {subset:?} mentions users beyond K={}",
                self.k
            )));
        }
        if value.is_zero() {
            self.values.remove(&subset);
        } else {
            self.values.insert(subset, value);
        }
        Ok(())
    }

    pub fn with(mut self, subset: UserSubset, value: Rat) -> DofPoint {
        self.set(subset, value).expect("subset valid for this K");
        self
    }

    pub fn get(&self, subset: UserSubset) -> Rat {
        self.values.get(&subset).cloned().unwrap_or_else(Rat::zero)
    }

    /// Nonzero coordinates in subset order.
    pub fn entries(&self) -> impl Iterator<Item = (&UserSubset, &Rat)> {
        self.values.iter()
    }

    pub fn sum(&self) -> Rat {
        self.values.values().fold(Rat::zero(), |acc, v| acc + v)
    }
}
