//! Nonempty subsets of receivers, stored as bitmasks.
//!
//! Users are numbered 1..=K. A joint message intended for the group S of
//! receivers carries one DoF variable d_S, so subsets double as variable
//! names throughout the bound and polytope code.

use std::fmt;

use super::{CoreError, MAX_USERS};

/// A set of users out of 1..=K, bit `u-1` set iff user `u` is a member.
/// Subsets order by cardinality first and bitmask second, matching the
/// canonical variable order, so sorted containers iterate canonically.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct UserSubset(u16);

impl Ord for UserSubset {
    fn cmp(&self, other: &UserSubset) -> std::cmp::Ordering {
        (self.len(), self.0).cmp(&(other.len(), other.0))
    }
}

impl PartialOrd for UserSubset {
    fn partial_cmp(&self, other: &UserSubset) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl UserSubset {
    pub const EMPTY: UserSubset = UserSubset(0);

    pub fn from_mask(mask: u16) -> UserSubset {
        UserSubset(mask)
    }

    /// Builds a subset from 1-based user numbers.
    pub fn from_users(users: &[u8]) -> Result<UserSubset, CoreError> {
        let mut mask = 0u16;
        for &u in users {
            if u == 0 || u > MAX_USERS {
                return Err(CoreError::BadParam(format!(
                    "user {u} outside 1..={MAX_USERS}"
                )));
            }
            mask |= 1 << (u - 1);
        }
        Ok(UserSubset(mask))
    }

    pub fn singleton(user: u8) -> UserSubset {
        debug_assert!(user >= 1 && user <= MAX_USERS);
        UserSubset(1 << (user - 1))
    }

    pub fn mask(self) -> u16 {
        self.0
    }

    pub fn contains(self, user: u8) -> bool {
        user >= 1 && user <= MAX_USERS && self.0 & (1 << (user - 1)) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn union(self, other: UserSubset) -> UserSubset {
        UserSubset(self.0 | other.0)
    }

    pub fn minus(self, other: UserSubset) -> UserSubset {
        UserSubset(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: UserSubset) -> bool {
        self.0 & !other.0 == 0
    }

    /// Member users in ascending order.
    pub fn members(self) -> Vec<u8> {
        (1..=MAX_USERS).filter(|&u| self.contains(u)).collect()
    }

    /// Variable name for export: `d_1`, `d_23`, `d_123`. Members are joined
    /// bare while all fit in one digit, and with `_` once any user is >= 10.
    pub fn label(self) -> String {
        let members = self.members();
        let sep = if members.iter().any(|&u| u >= 10) { "_" } else { "" };
        let body: Vec<String> = members.iter().map(|u| u.to_string()).collect();
        format!("d_{}", body.join(sep))
    }

    /// Parses a label as produced by [`UserSubset::label`].
    pub fn parse_label(text: &str) -> Result<UserSubset, CoreError> {
        let bad = || CoreError::BadParam(format!("cannot parse subset label {text:?}"));
        let body = text.strip_prefix("d_").ok_or_else(bad)?;
        if body.is_empty() {
            return Err(bad());
        }
        let users: Vec<u8> = if body.contains('_') {
            body.split('_')
                .map(|p| p.parse().map_err(|_| bad()))
                .collect::<Result<_, _>>()?
        } else {
            body.chars()
                .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(bad))
                .collect::<Result<_, _>>()?
        };
        UserSubset::from_users(&users)
    }
}

impl fmt::Debug for UserSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, u) in self.members().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{u}")?;
        }
        write!(f, "}}")
    }
}

/// All nonempty subsets of 1..=K, ordered by cardinality and then by bitmask.
/// This is the variable order for every region and every exported point.
pub fn canonical_subsets(k: u8) -> Result<Vec<UserSubset>, CoreError> {
    if k == 0 || k > MAX_USERS {
        return Err(CoreError::BadParam(format!(
            "user count {k} outside 1..={MAX_USERS}"
        )));
    }
    let mut subsets: Vec<UserSubset> = (1..1u32 << k)
        .map(|m| UserSubset::from_mask(m as u16))
        .collect();
    subsets.sort();
    Ok(subsets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_for_three_users() {
        let subsets = canonical_subsets(3).unwrap();
        let labels: Vec<String> = subsets.iter().map(|s| s.label()).collect();
        assert_eq!(
            labels,
            vec!["d_1", "d_2", "d_3", "d_12", "d_13", "d_23", "d_123"]
        );
    }

    #[test]
    fn canonical_count_is_full_power_set() {
        for k in 1..=8 {
            let subsets = canonical_subsets(k).unwrap();
            assert_eq!(subsets.len(), (1usize << k) - 1);
        }
        assert_eq!(canonical_subsets(16).unwrap().len(), 65_535);
        assert!(canonical_subsets(0).is_err());
        assert!(canonical_subsets(17).is_err());
    }

    #[test]
    fn mask_round_trip_covers_all_subsets() {
        for mask in 1..1u32 << 10 {
            let s = UserSubset::from_mask(mask as u16);
            assert_eq!(UserSubset::from_users(&s.members()).unwrap(), s);
        }
    }

    #[test]
    fn set_algebra() {
        let s12 = UserSubset::from_users(&[1, 2]).unwrap();
        let s23 = UserSubset::from_users(&[2, 3]).unwrap();
        assert_eq!(s12.union(s23).members(), vec![1, 2, 3]);
        assert_eq!(s12.minus(s23).members(), vec![1]);
        assert!(s12.minus(s23).is_subset_of(s12));
        assert!(!s12.is_subset_of(s23));
        assert!(UserSubset::EMPTY.is_subset_of(s23));
        assert!(s12.contains(2) && !s12.contains(3));
    }

    #[test]
    fn labels_round_trip_including_wide_users() {
        for mask in 1..1u16 << 5 {
            let s = UserSubset::from_mask(mask);
            assert_eq!(UserSubset::parse_label(&s.label()).unwrap(), s);
        }
        let wide = UserSubset::from_users(&[1, 11]).unwrap();
        assert_eq!(wide.label(), "d_1_11");
        assert_eq!(UserSubset::parse_label("d_1_11").unwrap(), wide);
        assert!(UserSubset::parse_label("d_").is_err());
        assert!(UserSubset::parse_label("x_1").is_err());
    }

    #[test]
    fn rejects_out_of_range_users() {
        assert!(UserSubset::from_users(&[0]).is_err());
        assert!(UserSubset::from_users(&[17]).is_err());
    }
}
