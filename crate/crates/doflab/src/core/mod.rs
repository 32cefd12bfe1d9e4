//! Shared domain types: exact rationals, user subsets, DoF points, CSIT grids.

mod csit;
mod dof;
mod rational;
mod subset;

pub use csit::{CsitConfig, CsitState};
pub use dof::DofPoint;
pub use rational::{format_rational, parse_rational, rat, rational_reduce, Rat};
pub use subset::{canonical_subsets, UserSubset};

use thiserror::Error;

/// Upper limit on the number of users; subsets are stored as 16-bit masks.
pub const MAX_USERS: u8 = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoreError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse {0:?} as a rational")]
    BadRational(String),
    #[error("{0}")]
    BadParam(String),
}
