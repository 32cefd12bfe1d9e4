//! Outer-bound generation for the K-user broadcast channel where the
//! transmitter has M >= K antennas, perfect CSIT for users 1..=K_P and
//! delayed CSIT for the rest.
//!
//! One inequality per choice of a nonempty delayed subset E_D and a pair of
//! orderings (one over the perfect users, one over E_D). Writing E_P for
//! {1..K_P} and n for |E_D|, the bound reads
//!
//!   sum_{i=1..K_P} 1/(K_P+n-i+1) * sum[d_S : S owns pi_P(i), avoids later perfect users]
//! + sum_{i=1..n}   1/(n-i+1)     * sum[d_S : S subset of E_P+E_D, owns pi_D(i), avoids later delayed users]
//! <= 1.
//!
//! Each d_S collects exactly one 1/j coefficient (at the last position of S
//! in the relevant ordering), so coefficients are always unit fractions.
//! Together with the box constraints 0 <= d_S <= 1 these cut out the full
//! outer-bound polytope; no redundancy elimination happens here.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use num::bigint::BigInt;
use num::{One, Signed, Zero};
use thiserror::Error;

use crate::core::{canonical_subsets, format_rational, CoreError, Rat, UserSubset, MAX_USERS};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("perfect-CSIT user count {k_p} exceeds K={k}")]
    BadSplit { k: u8, k_p: u8 },
    #[error("region is empty: constants alone violate {0}")]
    EmptyRegion(String),
}

/// Where an inequality came from.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Provenance {
    /// Converse bound for delayed subset `e_d` under orderings `pi_p`, `pi_d`.
    Bound {
        e_d: UserSubset,
        pi_p: Vec<u8>,
        pi_d: Vec<u8>,
    },
    /// d_S <= 1.
    BoxUpper { subset: UserSubset },
    /// d_S >= 0, stored as -d_S <= 0.
    Nonneg { subset: UserSubset },
    /// Caller-supplied row.
    Added { note: String },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Bound { e_d, pi_p, pi_d } => {
                let join = |users: &[u8]| {
                    users
                        .iter()
                        .map(|u| u.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                write!(
                    f,
                    "bound E_D={{{}}} piP=({}) piD=({})",
                    join(&e_d.members()),
                    join(pi_p),
                    join(pi_d)
                )
            }
            Provenance::BoxUpper { subset } => write!(f, "box {}", subset.label()),
            Provenance::Nonneg { subset } => write!(f, "nonneg {}", subset.label()),
            Provenance::Added { note } => write!(f, "added {note}"),
        }
    }
}

/// A linear inequality `sum coeffs[S] * d_S <= rhs`, stored at its natural
/// scale (the converse rows keep their unit-fraction coefficients). Only
/// nonzero coefficients are stored. Equality is halfspace equality: rows
/// compare through an integer-cleared, gcd-1 canonical key, so provenance
/// and scaling do not affect `==`.
#[derive(Clone, Debug)]
pub struct Inequality {
    coeffs: BTreeMap<UserSubset, Rat>,
    rhs: Rat,
    provenance: Provenance,
}

/// Integer-cleared coefficient vector: the row scaled by the unique
/// positive rational making all coefficients integers with gcd 1.
type DirectionKey = Vec<(u16, BigInt)>;

impl Inequality {
    pub fn new(coeffs: BTreeMap<UserSubset, Rat>, rhs: Rat, provenance: Provenance) -> Inequality {
        let mut ineq = Inequality {
            coeffs,
            rhs,
            provenance,
        };
        ineq.coeffs.retain(|_, c| !c.is_zero());
        ineq
    }

    pub fn coeff(&self, subset: UserSubset) -> Rat {
        self.coeffs.get(&subset).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<UserSubset, Rat> {
        &self.coeffs
    }

    pub fn rhs(&self) -> &Rat {
        &self.rhs
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn is_trivial(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Direction key plus the rhs under the same scaling. Two rows with the
    /// same direction key bound the same halfspace direction; the smaller
    /// scaled rhs is the tighter bound.
    fn cleared(&self) -> (DirectionKey, Rat) {
        // rational gcd of the coefficients: gcd of numerators over lcm of
        // denominators (gcd(0/1, n/d) = n/d, so fold from zero)
        let mut g = Rat::zero();
        for c in self.coeffs.values() {
            let num = num::integer::gcd(g.numer().abs(), c.numer().abs());
            let den = num::integer::lcm(g.denom().clone(), c.denom().clone());
            g = Rat::new_raw(num, den);
        }
        if g.is_zero() {
            return (Vec::new(), self.rhs.clone());
        }
        let factor = g.recip();
        let key = self
            .coeffs
            .iter()
            .map(|(s, c)| {
                let scaled = c.clone() * &factor;
                debug_assert!(scaled.is_integer());
                (s.mask(), scaled.to_integer())
            })
            .collect();
        (key, self.rhs.clone() * factor)
    }

    /// Left-hand side at a coordinate assignment; absent subsets read zero.
    pub fn eval(&self, at: impl Fn(UserSubset) -> Rat) -> Rat {
        self.coeffs
            .iter()
            .fold(Rat::zero(), |acc, (s, c)| acc + c.clone() * at(*s))
    }

    /// Substitutes fixed values for some variables, moving constants to the
    /// rhs. Returns None when every variable was fixed and the row holds
    /// trivially; errors when the constants alone violate it.
    fn substitute(
        &self,
        fixes: &BTreeMap<UserSubset, Rat>,
    ) -> Result<Option<Inequality>, BoundsError> {
        let mut coeffs = BTreeMap::new();
        let mut rhs = self.rhs.clone();
        for (s, c) in &self.coeffs {
            match fixes.get(s) {
                Some(v) => rhs -= c.clone() * v.clone(),
                None => {
                    coeffs.insert(*s, c.clone());
                }
            }
        }
        if coeffs.is_empty() {
            return if rhs.is_negative() {
                Err(BoundsError::EmptyRegion(self.to_string()))
            } else {
                Ok(None)
            };
        }
        Ok(Some(Inequality::new(coeffs, rhs, self.provenance.clone())))
    }
}

impl PartialEq for Inequality {
    fn eq(&self, other: &Inequality) -> bool {
        self.cleared() == other.cleared()
    }
}

impl Eq for Inequality {}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // lone nonnegativity rows read better in >= form
        if self.coeffs.len() == 1 && self.rhs.is_zero() {
            let (s, c) = self.coeffs.iter().next().unwrap();
            if *c == -Rat::one() {
                return write!(f, "{} >= 0", s.label());
            }
        }
        if self.coeffs.is_empty() {
            return write!(f, "0 <= {}", format_rational(&self.rhs));
        }
        for (i, (s, c)) in self.coeffs.iter().enumerate() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            if mag == Rat::one() {
                write!(f, "{}", s.label())?;
            } else {
                write!(f, "{} {}", format_rational(&mag), s.label())?;
            }
        }
        write!(f, " <= {}", format_rational(&self.rhs))
    }
}

/// A system of inequalities over an ordered set of DoF variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Region {
    k: u8,
    variables: Vec<UserSubset>,
    inequalities: Vec<Inequality>,
}

impl Region {
    /// Assembles a region: drops rows that hold trivially, rejects rows
    /// whose constants alone are violated, and among rows sharing a
    /// coefficient direction keeps only the tightest (first on ties).
    pub fn new(
        k: u8,
        variables: Vec<UserSubset>,
        inequalities: Vec<Inequality>,
    ) -> Result<Region, BoundsError> {
        let mut kept: Vec<(Inequality, Rat)> = Vec::new();
        let mut by_direction: BTreeMap<DirectionKey, usize> = BTreeMap::new();
        for ineq in inequalities {
            let (key, scaled_rhs) = ineq.cleared();
            if key.is_empty() {
                if scaled_rhs.is_negative() {
                    return Err(BoundsError::EmptyRegion(ineq.to_string()));
                }
                continue;
            }
            match by_direction.get(&key) {
                Some(&idx) => {
                    if scaled_rhs < kept[idx].1 {
                        kept[idx] = (ineq, scaled_rhs);
                    }
                }
                None => {
                    by_direction.insert(key, kept.len());
                    kept.push((ineq, scaled_rhs));
                }
            }
        }
        Ok(Region {
            k,
            variables,
            inequalities: kept.into_iter().map(|(i, _)| i).collect(),
        })
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn variables(&self) -> &[UserSubset] {
        &self.variables
    }

    pub fn inequalities(&self) -> &[Inequality] {
        &self.inequalities
    }

    pub fn dim(&self) -> usize {
        self.variables.len()
    }

    /// Region with some variables pinned to fixed values; the fixed
    /// variables leave the variable list. Errors when a row's constants
    /// alone become violated (the region sliced away to nothing).
    pub fn substitute(&self, fixes: &BTreeMap<UserSubset, Rat>) -> Result<Region, BoundsError> {
        let mut rows = Vec::new();
        for ineq in &self.inequalities {
            if let Some(row) = ineq.substitute(fixes)? {
                rows.push(row);
            }
        }
        let variables: Vec<UserSubset> = self
            .variables
            .iter()
            .copied()
            .filter(|v| !fixes.contains_key(v))
            .collect();
        Region::new(self.k, variables, rows)
    }

    /// Appends caller-supplied rows (used by redundancy tests).
    pub fn with_added(&self, extra: Vec<Inequality>) -> Result<Region, BoundsError> {
        let mut rows = self.inequalities.clone();
        rows.extend(extra);
        Region::new(self.k, self.variables.clone(), rows)
    }

    /// Replaces the inequality list, keeping the variable order.
    pub(crate) fn with_rows(&self, rows: Vec<Inequality>) -> Region {
        Region {
            k: self.k,
            variables: self.variables.clone(),
            inequalities: rows,
        }
    }
}

/// The converse-bound family for K users with perfect CSIT for the first
/// k_p. Empty when k_p = K (no delayed users). Row order is deterministic:
/// delayed subsets by ascending bitmask, orderings lexicographically,
/// duplicates dropped.
///
/// Cost grows factorially in K - k_p; intended for small K.
pub fn outer_bound_inequalities(k: u8, k_p: u8) -> Result<Vec<Inequality>, BoundsError> {
    if k == 0 || k > MAX_USERS {
        return Err(CoreError::BadParam(format!("user count {k} outside 1..={MAX_USERS}")).into());
    }
    if k_p > k {
        return Err(BoundsError::BadSplit { k, k_p });
    }
    let perfect: Vec<u8> = (1..=k_p).collect();
    let delayed: Vec<u8> = (k_p + 1..=k).collect();
    let e_p = UserSubset::from_users(&perfect)?;

    let mut out: Vec<Inequality> = Vec::new();
    let mut seen: BTreeSet<(DirectionKey, Rat)> = BTreeSet::new();
    for e_d_mask in 1u32..1u32 << delayed.len() {
        let e_d_users: Vec<u8> = delayed
            .iter()
            .enumerate()
            .filter(|(i, _)| e_d_mask >> i & 1 == 1)
            .map(|(_, &u)| u)
            .collect();
        let e_d = UserSubset::from_users(&e_d_users)?;
        let n_d = e_d_users.len();
        for pi_p in perfect.iter().copied().permutations(perfect.len()) {
            for pi_d in e_d_users.iter().copied().permutations(n_d) {
                let mut coeffs: BTreeMap<UserSubset, Rat> = BTreeMap::new();
                let mut add_terms = |coeff: Rat, pivot: u8, allowed: UserSubset| {
                    // all S with pivot in S and S a subset of allowed
                    let rest = allowed.minus(UserSubset::singleton(pivot)).mask();
                    let mut sub = rest;
                    loop {
                        let s = UserSubset::from_mask(sub | UserSubset::singleton(pivot).mask());
                        *coeffs.entry(s).or_insert_with(Rat::zero) += &coeff;
                        if sub == 0 {
                            break;
                        }
                        sub = (sub - 1) & rest;
                    }
                };
                for (i, &pivot) in pi_p.iter().enumerate() {
                    let denom = k_p as i64 + n_d as i64 - i as i64;
                    let later = UserSubset::from_users(&pi_p[i + 1..])?;
                    add_terms(Rat::new(1.into(), denom.into()), pivot, e_p.minus(later));
                }
                for (i, &pivot) in pi_d.iter().enumerate() {
                    let denom = n_d as i64 - i as i64;
                    let later = UserSubset::from_users(&pi_d[i + 1..])?;
                    add_terms(
                        Rat::new(1.into(), denom.into()),
                        pivot,
                        e_p.union(e_d).minus(later),
                    );
                }
                let ineq = Inequality::new(
                    coeffs,
                    Rat::one(),
                    Provenance::Bound {
                        e_d,
                        pi_p: pi_p.clone(),
                        pi_d: pi_d.clone(),
                    },
                );
                if seen.insert(ineq.cleared()) {
                    out.push(ineq);
                }
            }
        }
    }
    Ok(out)
}

/// Complete outer-bound region: converse rows plus 0 <= d_S <= 1 for every
/// nonempty subset, deduplicated, over the canonical variable order.
pub fn full_region(k: u8, k_p: u8) -> Result<Region, BoundsError> {
    let mut rows = outer_bound_inequalities(k, k_p)?;
    for s in canonical_subsets(k)? {
        rows.push(Inequality::new(
            BTreeMap::from([(s, Rat::one())]),
            Rat::one(),
            Provenance::BoxUpper { subset: s },
        ));
        rows.push(Inequality::new(
            BTreeMap::from([(s, -Rat::one())]),
            Rat::zero(),
            Provenance::Nonneg { subset: s },
        ));
    }
    Region::new(k, canonical_subsets(k)?, rows)
}

/// Projection to private messages only: every d_S with |S| >= 2 pinned to
/// zero and removed from the variable list.
pub fn restrict_private(region: &Region) -> Result<Region, BoundsError> {
    let fixes: BTreeMap<UserSubset, Rat> = region
        .variables()
        .iter()
        .filter(|s| s.len() >= 2)
        .map(|s| (*s, Rat::zero()))
        .collect();
    region.substitute(&fixes)
}

// ---- export ----

/// One CSV row per inequality: coefficient per variable column, then the
/// rhs and a provenance tag (written without commas, so the file parses
/// with a naive splitter).
pub fn region_to_csv(region: &Region) -> String {
    let mut out = String::new();
    let headers: Vec<String> = region
        .variables()
        .iter()
        .map(|s| s.label())
        .chain(["rhs".to_string(), "provenance".to_string()])
        .collect();
    out.push_str(&headers.join(","));
    out.push('\n');
    for ineq in region.inequalities() {
        let mut fields: Vec<String> = region
            .variables()
            .iter()
            .map(|s| format_rational(&ineq.coeff(*s)))
            .collect();
        fields.push(format_rational(ineq.rhs()));
        fields.push(ineq.provenance().to_string());
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn region_to_json(region: &Region) -> serde_json::Value {
    serde_json::json!({
        "users": region.k(),
        "variables": region.variables().iter().map(|s| s.label()).collect::<Vec<_>>(),
        "inequalities": region.inequalities().iter().map(|i| {
            serde_json::json!({
                "coeffs": region.variables().iter()
                    .map(|s| format_rational(&i.coeff(*s)))
                    .collect::<Vec<_>>(),
                "rhs": format_rational(i.rhs()),
                "display": i.to_string(),
                "provenance": i.provenance().to_string(),
            })
        }).collect::<Vec<_>>(),
    })
}

pub fn region_to_text(region: &Region) -> String {
    let mut out = String::new();
    for ineq in region.inequalities() {
        out.push_str(&format!("{ineq}    [{}]\n", ineq.provenance()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::rat;

    fn s(users: &[u8]) -> UserSubset {
        UserSubset::from_users(users).unwrap()
    }

    fn row(coeffs: &[(&[u8], Rat)], rhs: Rat) -> Inequality {
        let map = coeffs
            .iter()
            .map(|(users, c)| (s(users), c.clone()))
            .collect();
        Inequality::new(
            map,
            rhs,
            Provenance::Added {
                note: "test".into(),
            },
        )
    }

    /// Expected three-user, one-perfect-user listing, exact.
    fn three_user_expected() -> Vec<Inequality> {
        vec![
            row(
                &[(&[1], rat(1, 2)), (&[2], rat(1, 1)), (&[1, 2], rat(1, 1))],
                rat(1, 1),
            ),
            row(
                &[(&[1], rat(1, 2)), (&[3], rat(1, 1)), (&[1, 3], rat(1, 1))],
                rat(1, 1),
            ),
            row(
                &[
                    (&[1], rat(1, 3)),
                    (&[2], rat(1, 2)),
                    (&[1, 2], rat(1, 2)),
                    (&[3], rat(1, 1)),
                    (&[1, 3], rat(1, 1)),
                    (&[2, 3], rat(1, 1)),
                    (&[1, 2, 3], rat(1, 1)),
                ],
                rat(1, 1),
            ),
            row(
                &[
                    (&[1], rat(1, 3)),
                    (&[3], rat(1, 2)),
                    (&[1, 3], rat(1, 2)),
                    (&[2], rat(1, 1)),
                    (&[1, 2], rat(1, 1)),
                    (&[2, 3], rat(1, 1)),
                    (&[1, 2, 3], rat(1, 1)),
                ],
                rat(1, 1),
            ),
        ]
    }

    #[test]
    fn three_user_one_perfect_matches_known_listing() {
        let rows = outer_bound_inequalities(3, 1).unwrap();
        let expected = three_user_expected();
        assert_eq!(rows.len(), 4);
        for e in &expected {
            assert!(rows.contains(e), "missing inequality {e}");
        }
    }

    #[test]
    fn two_user_one_perfect_is_a_single_row() {
        let rows = outer_bound_inequalities(2, 1).unwrap();
        assert_eq!(rows.len(), 1);
        let expected = row(
            &[(&[1], rat(1, 2)), (&[2], rat(1, 1)), (&[1, 2], rat(1, 1))],
            rat(1, 1),
        );
        assert_eq!(rows[0], expected);
    }

    #[test]
    fn all_perfect_yields_no_converse_rows() {
        assert!(outer_bound_inequalities(3, 3).unwrap().is_empty());
        assert!(outer_bound_inequalities(1, 1).unwrap().is_empty());
    }

    #[test]
    fn split_and_range_are_validated() {
        assert!(outer_bound_inequalities(3, 4).is_err());
        assert!(outer_bound_inequalities(0, 0).is_err());
        assert!(outer_bound_inequalities(17, 0).is_err());
    }

    #[test]
    fn full_region_three_one_has_eighteen_rows() {
        let region = full_region(3, 1).unwrap();
        assert_eq!(region.dim(), 7);
        assert_eq!(region.inequalities().len(), 18);
        let boxes = region
            .inequalities()
            .iter()
            .filter(|i| matches!(i.provenance(), Provenance::BoxUpper { .. }))
            .count();
        let nonneg = region
            .inequalities()
            .iter()
            .filter(|i| matches!(i.provenance(), Provenance::Nonneg { .. }))
            .count();
        assert_eq!((boxes, nonneg), (7, 7));
    }

    #[test]
    fn full_region_single_user_is_unit_interval() {
        let region = full_region(1, 1).unwrap();
        assert_eq!(region.dim(), 1);
        assert_eq!(region.inequalities().len(), 2);
    }

    #[test]
    fn two_user_all_delayed_region() {
        // converse rows d_1 <= 1 and d_2 <= 1 collapse into the box rows
        let region = full_region(2, 0).unwrap();
        assert_eq!(region.inequalities().len(), 8);
        let expected_mixed = [
            row(
                &[(&[1], rat(1, 2)), (&[2], rat(1, 1)), (&[1, 2], rat(1, 1))],
                rat(1, 1),
            ),
            row(
                &[(&[2], rat(1, 2)), (&[1], rat(1, 1)), (&[1, 2], rat(1, 1))],
                rat(1, 1),
            ),
        ];
        for e in &expected_mixed {
            assert!(region.inequalities().contains(e));
        }
    }

    #[test]
    fn coefficients_are_unit_fractions() {
        for (k, k_p) in [(3, 0), (3, 1), (3, 2), (4, 1), (4, 2), (5, 3)] {
            for ineq in outer_bound_inequalities(k, k_p).unwrap() {
                for c in ineq.coeffs().values() {
                    assert_eq!(c.numer(), &BigInt::from(1), "in {ineq}");
                }
                assert_eq!(ineq.rhs(), &rat(1, 1));
            }
        }
    }

    #[test]
    fn private_restriction_of_three_one_matches_known_listing() {
        let region = restrict_private(&full_region(3, 1).unwrap()).unwrap();
        assert_eq!(region.variables(), &[s(&[1]), s(&[2]), s(&[3])]);
        let expected = [
            row(&[(&[1], rat(1, 1))], rat(1, 1)),
            row(&[(&[2], rat(1, 1))], rat(1, 1)),
            row(&[(&[3], rat(1, 1))], rat(1, 1)),
            row(&[(&[1], rat(1, 2)), (&[2], rat(1, 1))], rat(1, 1)),
            row(&[(&[1], rat(1, 2)), (&[3], rat(1, 1))], rat(1, 1)),
            row(
                &[(&[1], rat(1, 3)), (&[2], rat(1, 2)), (&[3], rat(1, 1))],
                rat(1, 1),
            ),
            row(
                &[(&[1], rat(1, 3)), (&[2], rat(1, 1)), (&[3], rat(1, 2))],
                rat(1, 1),
            ),
        ];
        let upper: Vec<&Inequality> = region
            .inequalities()
            .iter()
            .filter(|i| !matches!(i.provenance(), Provenance::Nonneg { .. }))
            .collect();
        assert_eq!(upper.len(), expected.len());
        for e in &expected {
            assert!(
                upper.iter().any(|r| *r == e),
                "missing inequality {e}"
            );
        }
        let nonneg = region.inequalities().len() - upper.len();
        assert_eq!(nonneg, 3);
    }

    #[test]
    fn private_restriction_is_idempotent() {
        let region = restrict_private(&full_region(3, 1).unwrap()).unwrap();
        assert_eq!(restrict_private(&region).unwrap(), region);
    }

    #[test]
    fn relabeling_delayed_users_permutes_the_row_set() {
        // swapping users 2 and 3 maps the (3,1) family onto itself
        let rows = outer_bound_inequalities(3, 1).unwrap();
        let swap = |s_in: UserSubset| {
            let users: Vec<u8> = s_in
                .members()
                .iter()
                .map(|&u| match u {
                    2 => 3,
                    3 => 2,
                    other => other,
                })
                .collect();
            UserSubset::from_users(&users).unwrap()
        };
        for ineq in &rows {
            let mapped = Inequality::new(
                ineq.coeffs()
                    .iter()
                    .map(|(sub, c)| (swap(*sub), c.clone()))
                    .collect(),
                ineq.rhs().clone(),
                Provenance::Added {
                    note: "swap 2,3".into(),
                },
            );
            assert!(rows.contains(&mapped), "swap image of {ineq} missing");
        }
    }

    #[test]
    fn equality_ignores_scale_and_provenance() {
        let a = row(&[(&[1], rat(1, 2)), (&[2], rat(1, 1))], rat(1, 1));
        let b = row(&[(&[1], rat(1, 1)), (&[2], rat(2, 1))], rat(2, 1));
        let c = row(&[(&[1], rat(1, 2)), (&[2], rat(1, 1))], rat(2, 1));
        assert_eq!(a, b);
        assert_ne!(a, c);
        let boxed = Inequality::new(
            BTreeMap::from([(s(&[1]), rat(1, 1))]),
            rat(1, 1),
            Provenance::BoxUpper { subset: s(&[1]) },
        );
        assert_eq!(boxed, row(&[(&[1], rat(3, 1))], rat(3, 1)));
    }

    #[test]
    fn region_drops_trivial_rows_and_keeps_tightest_duplicate() {
        let rows = vec![
            row(&[(&[1], rat(1, 1))], rat(1, 1)),
            row(&[(&[1], rat(1, 1))], rat(1, 2)),
            row(&[], rat(3, 1)),
        ];
        let region = Region::new(1, vec![s(&[1])], rows).unwrap();
        assert_eq!(region.inequalities().len(), 1);
        assert_eq!(region.inequalities()[0].rhs(), &rat(1, 2));
        let bad = Region::new(1, vec![s(&[1])], vec![row(&[], rat(-1, 1))]);
        assert!(matches!(bad, Err(BoundsError::EmptyRegion(_))));
    }

    #[test]
    fn substitute_detects_emptied_region() {
        let region = full_region(2, 1).unwrap();
        let fixes = BTreeMap::from([(s(&[1]), rat(3, 1))]);
        assert!(matches!(
            region.substitute(&fixes),
            Err(BoundsError::EmptyRegion(_))
        ));
    }

    #[test]
    fn display_renders_unit_fractions_and_sign() {
        let ineq = row(
            &[(&[1], rat(1, 3)), (&[2], rat(1, 2)), (&[3], rat(1, 1))],
            rat(1, 1),
        );
        assert_eq!(ineq.to_string(), "1/3 d_1 + 1/2 d_2 + d_3 <= 1");
        let nn = row(&[(&[2], rat(-1, 1))], rat(0, 1));
        assert_eq!(nn.to_string(), "d_2 >= 0");
        let mixed = row(&[(&[1], rat(-1, 2)), (&[2], rat(1, 1))], rat(0, 1));
        assert_eq!(mixed.to_string(), "-1/2 d_1 + d_2 <= 0");
    }

    #[test]
    fn csv_export_shape() {
        let region = restrict_private(&full_region(3, 1).unwrap()).unwrap();
        let csv = region_to_csv(&region);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "d_1,d_2,d_3,rhs,provenance");
        assert_eq!(lines.len(), 1 + region.inequalities().len());
        for line in &lines[1..] {
            assert_eq!(line.split(',').count(), 5, "bad row {line}");
        }
        assert!(csv.contains("1/3,1/2,1,1,"));
    }
}
