//! Queries against an inequality-described DoF region: membership, slicing,
//! vertex enumeration, linear maximization, schedule-extension feasibility,
//! and redundancy removal. All arithmetic is exact.

mod simplex;

pub use simplex::{maximize_lp, LpResult};

use std::collections::BTreeMap;

use num::{One, Zero};
use thiserror::Error;

use crate::bounds::{outer_bound_inequalities, BoundsError, Inequality, Region};
use crate::core::{DofPoint, Rat, UserSubset};

#[derive(Debug, Error)]
pub enum PolytopeError {
    #[error("{0}")]
    Bounds(#[from] BoundsError),
    #[error("point has a nonzero value on {0}, which is not a variable of this region")]
    ForeignCoordinate(String),
    #[error("{0} is not a variable of this region")]
    UnknownVariable(String),
    #[error("vertex enumeration supports dimension <= {limit}, region has {dim}")]
    DimensionTooLarge { dim: usize, limit: usize },
    #[error("vertex enumeration would visit {subsets} hyperplane subsets (limit {limit})")]
    TooManySubsets { subsets: u128, limit: u128 },
    #[error("weights length {got} does not match region dimension {want}")]
    WeightsDim { got: usize, want: usize },
    #[error("region is infeasible")]
    Infeasible,
    #[error("objective is unbounded over this region")]
    Unbounded,
}

/// Outcome of a membership test. `tight` and `violated` index into the
/// region's inequality list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipVerdict {
    pub feasible: bool,
    pub tight: Vec<usize>,
    pub violated: Vec<usize>,
}

/// Per-user stream counts demanded from a candidate schedule extension:
/// `cardinalities[S]` independent order-|S| combinations over `slots` slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualDemand {
    pub cardinalities: BTreeMap<UserSubset, u64>,
    pub slots: u64,
}

/// One converse row evaluated against a residual demand.
#[derive(Clone, Debug)]
pub struct ExtensionRow {
    pub inequality: Inequality,
    pub lhs: Rat,
    pub tight: bool,
    pub violated: bool,
}

#[derive(Clone, Debug)]
pub struct ExtensionVerdict {
    pub feasible: bool,
    pub slots: u64,
    pub rows: Vec<ExtensionRow>,
}

/// Tests whether a DoF point satisfies every inequality of the region.
/// The point may only use the region's variables.
pub fn contains(region: &Region, point: &DofPoint) -> Result<MembershipVerdict, PolytopeError> {
    for (s, _) in point.entries() {
        if !region.variables().contains(s) {
            return Err(PolytopeError::ForeignCoordinate(s.label()));
        }
    }
    let mut tight = Vec::new();
    let mut violated = Vec::new();
    for (i, ineq) in region.inequalities().iter().enumerate() {
        let lhs = ineq.eval(|s| point.get(s));
        if lhs == *ineq.rhs() {
            tight.push(i);
        } else if lhs > *ineq.rhs() {
            violated.push(i);
        }
    }
    Ok(MembershipVerdict {
        feasible: violated.is_empty(),
        tight,
        violated,
    })
}

/// Pins some variables to fixed values and drops them from the region.
/// Substituted rows that become trivially true disappear; a row whose
/// constants alone are violated surfaces as the empty-region error.
pub fn slice(
    region: &Region,
    fixes: &BTreeMap<UserSubset, Rat>,
) -> Result<Region, PolytopeError> {
    for s in fixes.keys() {
        if !region.variables().contains(s) {
            return Err(PolytopeError::UnknownVariable(s.label()));
        }
    }
    Ok(region.substitute(fixes)?)
}

const VERTEX_DIM_LIMIT: usize = 4;
const VERTEX_SUBSET_LIMIT: u128 = 1_000_000;

/// All vertices of a low-dimensional region, lexicographically sorted by
/// the region's variable order. Every dim-subset of inequalities is
/// intersected as equalities; nonsingular intersection points that satisfy
/// the whole system are vertices.
pub fn vertices(region: &Region) -> Result<Vec<Vec<Rat>>, PolytopeError> {
    let dim = region.dim();
    let m = region.inequalities().len();
    if dim > VERTEX_DIM_LIMIT {
        return Err(PolytopeError::DimensionTooLarge {
            dim,
            limit: VERTEX_DIM_LIMIT,
        });
    }
    let subsets = binomial(m as u128, dim as u128);
    if subsets > VERTEX_SUBSET_LIMIT {
        return Err(PolytopeError::TooManySubsets {
            subsets,
            limit: VERTEX_SUBSET_LIMIT,
        });
    }

    if dim == 0 {
        // fully sliced region: a single point with no free coordinates
        return Ok(vec![Vec::new()]);
    }
    if m < dim {
        return Ok(Vec::new());
    }

    let rows = lp_rows(region);
    let mut found: std::collections::BTreeSet<Vec<Rat>> = std::collections::BTreeSet::new();
    let mut choice: Vec<usize> = (0..dim).collect();
    loop {
        let a: Vec<Vec<Rat>> = choice.iter().map(|&i| rows[i].0.clone()).collect();
        let b: Vec<Rat> = choice.iter().map(|&i| rows[i].1.clone()).collect();
        if let Some(x) = solve_square(a, b) {
            let feasible = rows.iter().all(|(coeffs, rhs)| {
                let lhs = coeffs
                    .iter()
                    .zip(&x)
                    .fold(Rat::zero(), |acc, (c, v)| acc + c.clone() * v);
                lhs <= *rhs
            });
            if feasible {
                found.insert(x);
            }
        }
        if !advance(&mut choice, m) {
            break;
        }
    }
    Ok(found.into_iter().collect())
}

/// Next lexicographic dim-combination out of 0..m; false when exhausted.
fn advance(choice: &mut [usize], m: usize) -> bool {
    let dim = choice.len();
    let mut i = dim;
    while i > 0 {
        i -= 1;
        if choice[i] < m - (dim - i) {
            choice[i] += 1;
            for j in i + 1..dim {
                choice[j] = choice[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Gaussian elimination on a square exact system; None when singular.
fn solve_square(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].clone().recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        b[col] *= &inv;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c2 in 0..n {
                let delta = f.clone() * &a[col][c2];
                a[r][c2] -= delta;
            }
            let delta = f * &b[col];
            b[r] -= delta;
        }
    }
    Some(b)
}

fn lp_rows(region: &Region) -> Vec<(Vec<Rat>, Rat)> {
    region
        .inequalities()
        .iter()
        .map(|ineq| {
            (
                region.variables().iter().map(|v| ineq.coeff(*v)).collect(),
                ineq.rhs().clone(),
            )
        })
        .collect()
}

/// Maximizes `weights . d` over the region. Returns the optimum and the
/// lexicographically smallest optimal vertex (ties in the optimal face are
/// broken by minimizing each coordinate in variable order).
pub fn maximize(region: &Region, weights: &[Rat]) -> Result<(Rat, Vec<Rat>), PolytopeError> {
    let dim = region.dim();
    if weights.len() != dim {
        return Err(PolytopeError::WeightsDim {
            got: weights.len(),
            want: dim,
        });
    }
    let mut rows = lp_rows(region);
    let value = match maximize_lp(&rows, weights) {
        LpResult::Optimal { value, .. } => value,
        LpResult::Infeasible => return Err(PolytopeError::Infeasible),
        LpResult::Unbounded => return Err(PolytopeError::Unbounded),
    };
    // pin the objective at its optimum, then minimize coordinates in order
    let neg_w: Vec<Rat> = weights.iter().map(|w| -w.clone()).collect();
    rows.push((neg_w, -value.clone()));
    let mut point = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut obj = vec![Rat::zero(); dim];
        obj[j] = -Rat::one();
        let coord = match maximize_lp(&rows, &obj) {
            LpResult::Optimal { value, .. } => -value,
            LpResult::Infeasible => return Err(PolytopeError::Infeasible),
            LpResult::Unbounded => return Err(PolytopeError::Unbounded),
        };
        let mut pin = vec![Rat::zero(); dim];
        pin[j] = Rat::one();
        rows.push((pin.clone(), coord.clone()));
        pin[j] = -Rat::one();
        rows.push((pin, -coord.clone()));
        point.push(coord);
    }
    Ok((value, point))
}

/// Evaluates every converse row for (k, k_p) against integer stream counts
/// over `demand.slots` slots: the per-slot bound scales to
/// `sum coeff[S] * cardinality[S] <= slots`.
pub fn extension_feasibility(
    k: u8,
    k_p: u8,
    demand: &ResidualDemand,
) -> Result<ExtensionVerdict, PolytopeError> {
    let rows = outer_bound_inequalities(k, k_p)?;
    let slots = Rat::from_integer(demand.slots.into());
    let mut out = Vec::with_capacity(rows.len());
    let mut feasible = true;
    for inequality in rows {
        let lhs = inequality.eval(|s| {
            demand
                .cardinalities
                .get(&s)
                .map(|&n| Rat::from_integer(n.into()))
                .unwrap_or_else(Rat::zero)
        });
        let tight = lhs == slots;
        let violated = lhs > slots;
        feasible &= !violated;
        out.push(ExtensionRow {
            inequality,
            lhs,
            tight,
            violated,
        });
    }
    Ok(ExtensionVerdict {
        feasible,
        slots: demand.slots,
        rows: out,
    })
}

/// Drops every inequality whose removal leaves the feasible set unchanged:
/// the row is redundant when maximizing its own left-hand side over the
/// remaining rows cannot exceed its rhs. Rows are tested in order and
/// removals are permanent, so one of two mutually redundant rows survives.
pub fn remove_redundant(region: &Region) -> Result<Region, PolytopeError> {
    let mut kept: Vec<Inequality> = region.inequalities().to_vec();
    let mut i = 0;
    while i < kept.len() {
        let probe = region.with_rows(
            kept.iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, r)| r.clone())
                .collect(),
        );
        let obj: Vec<Rat> = region
            .variables()
            .iter()
            .map(|v| kept[i].coeff(*v))
            .collect();
        let redundant = match maximize_lp(&lp_rows(&probe), &obj) {
            LpResult::Optimal { value, .. } => value <= *kept[i].rhs(),
            LpResult::Unbounded => false,
            LpResult::Infeasible => return Err(PolytopeError::Infeasible),
        };
        if redundant {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(region.with_rows(kept))
}
