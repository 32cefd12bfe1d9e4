//! Transmitter-side channel knowledge, per slot and per user.
//!
//! Three states: the transmitter learns a user's channel vector instantly
//! (perfect), one slot later (delayed), or never. A configuration assigns a
//! state to every (slot, user) cell; the static mixed model gives the first
//! K_P users perfect state and the rest delayed state in every slot.

use std::fmt;

use super::CoreError;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CsitState {
    Perfect,
    Delayed,
    None,
}

impl CsitState {
    pub fn letter(self) -> char {
        match self {
            CsitState::Perfect => 'P',
            CsitState::Delayed => 'D',
            CsitState::None => 'N',
        }
    }

    pub fn from_letter(c: char) -> Option<CsitState> {
        match c {
            'P' => Some(CsitState::Perfect),
            'D' => Some(CsitState::Delayed),
            'N' => Some(CsitState::None),
            _ => None,
        }
    }
}

impl fmt::Display for CsitState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Full slot-by-user grid of CSIT states.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CsitConfig {
    k: u8,
    slots: u8,
    states: Vec<Vec<CsitState>>,
}

impl CsitConfig {
    /// Builds a config from a full grid: `states[t-1][u-1]` is slot t, user u.
    pub fn new(k: u8, slots: u8, states: Vec<Vec<CsitState>>) -> Result<CsitConfig, CoreError> {
        if k == 0 || slots == 0 {
            return Err(CoreError::BadParam("need at least one user and one slot".into()));
        }
        if states.len() != slots as usize || states.iter().any(|row| row.len() != k as usize) {
            return Err(CoreError::BadParam(format!(
                "state grid must be {slots} slots x {k} users"
            )));
        }
        Ok(CsitConfig { k, slots, states })
    }

    /// Static mixed model: users 1..=k_p perfect, users k_p+1..=k delayed,
    /// identical in every slot.
    pub fn hybrid(k: u8, k_p: u8, slots: u8) -> Result<CsitConfig, CoreError> {
        if k_p > k {
            return Err(CoreError::BadParam(format!(
                "perfect-CSIT user count {k_p} exceeds K={k}"
            )));
        }
        let row: Vec<CsitState> = (1..=k)
            .map(|u| {
                if u <= k_p {
                    CsitState::Perfect
                } else {
                    CsitState::Delayed
                }
            })
            .collect();
        CsitConfig::new(k, slots, vec![row; slots as usize])
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn slots(&self) -> u8 {
        self.slots
    }

    /// State for slot `t` (1-based) and user `u` (1-based).
    pub fn state(&self, t: u8, u: u8) -> Option<CsitState> {
        if t == 0 || t > self.slots || u == 0 || u > self.k {
            return None;
        }
        Some(self.states[t as usize - 1][u as usize - 1])
    }

    /// Per-slot rows as letter strings, e.g. `PDD`.
    pub fn slot_letters(&self, t: u8) -> Option<String> {
        if t == 0 || t > self.slots {
            return None;
        }
        Some(
            self.states[t as usize - 1]
                .iter()
                .map(|s| s.letter())
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hybrid_grid_splits_perfect_then_delayed() {
        let cfg = CsitConfig::hybrid(3, 1, 6).unwrap();
        assert_eq!(cfg.state(1, 1), Some(CsitState::Perfect));
        assert_eq!(cfg.state(6, 2), Some(CsitState::Delayed));
        assert_eq!(cfg.state(6, 3), Some(CsitState::Delayed));
        assert_eq!(cfg.slot_letters(4).unwrap(), "PDD");
        assert_eq!(cfg.state(7, 1), None);
        assert_eq!(cfg.state(1, 4), None);
    }

    #[test]
    fn hybrid_extremes() {
        let all_p = CsitConfig::hybrid(2, 2, 3).unwrap();
        assert_eq!(all_p.slot_letters(1).unwrap(), "PP");
        let all_d = CsitConfig::hybrid(2, 0, 3).unwrap();
        assert_eq!(all_d.slot_letters(3).unwrap(), "DD");
        assert!(CsitConfig::hybrid(2, 3, 1).is_err());
    }

    #[test]
    fn grid_dimensions_are_checked() {
        let short = vec![vec![CsitState::Perfect; 3]];
        assert!(CsitConfig::new(3, 2, short).is_err());
        let ragged = vec![vec![CsitState::Perfect; 2], vec![CsitState::Perfect; 3]];
        assert!(CsitConfig::new(3, 2, ragged).is_err());
    }

    #[test]
    fn letters_round_trip() {
        for s in [CsitState::Perfect, CsitState::Delayed, CsitState::None] {
            assert_eq!(CsitState::from_letter(s.letter()), Some(s));
        }
        assert_eq!(CsitState::from_letter('x'), None);
    }
}
