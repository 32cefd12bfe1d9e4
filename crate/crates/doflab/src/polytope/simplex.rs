//! Exact two-phase simplex over arbitrary-precision rationals.
//!
//! Solves max c.x subject to A.x <= b with x unrestricted in sign; the
//! caller encodes nonnegativity as explicit rows. Free variables are split
//! as x = u - v internally. Entering and leaving choices follow Bland's
//! rule, so the method terminates on degenerate inputs too.

use num::{One, Signed, Zero};

use crate::core::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult {
    Optimal { value: Rat, point: Vec<Rat> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    // rows[r] holds the constraint coefficients, rhs last
    rows: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rat {
        &self.rows[r][self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].clone().recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let factor = self.rows[i][c].clone();
            for j in 0..=self.cols {
                let delta = factor.clone() * &self.rows[r][j];
                self.rows[i][j] -= delta;
            }
        }
        self.basis[r] = c;
    }

    /// Runs simplex iterations for the given cost vector (maximization).
    /// `allowed` masks columns permitted to enter. Returns false when the
    /// objective is unbounded.
    fn optimize(&mut self, cost: &[Rat], allowed: &[bool]) -> bool {
        loop {
            let reduced = self.reduced_costs(cost);
            // Bland: smallest-index improving column
            let entering = (0..self.cols).find(|&j| allowed[j] && reduced[j].is_positive());
            let Some(e) = entering else {
                return true;
            };
            let mut leave: Option<usize> = None;
            let mut best: Option<Rat> = None;
            for r in 0..self.rows.len() {
                if !self.rows[r][e].is_positive() {
                    continue;
                }
                let ratio = self.rhs(r).clone() / &self.rows[r][e];
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b || (ratio == *b && self.basis[r] < self.basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(r);
                }
            }
            let Some(r) = leave else {
                return false;
            };
            self.pivot(r, e);
        }
    }

    fn reduced_costs(&self, cost: &[Rat]) -> Vec<Rat> {
        // c_j - c_B . column_j, using the tableau's canonical basis columns
        let mut out = cost.to_vec();
        for r in 0..self.rows.len() {
            let cb = &cost[self.basis[r]];
            if cb.is_zero() {
                continue;
            }
            for j in 0..self.cols {
                let delta = cb.clone() * &self.rows[r][j];
                out[j] -= delta;
            }
        }
        out
    }

    fn basic_value(&self, col: usize) -> Rat {
        for r in 0..self.rows.len() {
            if self.basis[r] == col {
                return self.rhs(r).clone();
            }
        }
        Rat::zero()
    }
}

/// Maximizes `objective . x` over `{x : rows[i].coeffs . x <= rows[i].rhs}`.
pub fn maximize_lp(rows: &[(Vec<Rat>, Rat)], objective: &[Rat]) -> LpResult {
    let n = objective.len();
    let m = rows.len();
    debug_assert!(rows.iter().all(|(a, _)| a.len() == n));

    // columns: u_0..u_{n-1}, v_0..v_{n-1}, slack_0..slack_{m-1}, then one
    // artificial per negative-rhs row
    let negated: Vec<bool> = rows.iter().map(|(_, b)| b.is_negative()).collect();
    let n_art = negated.iter().filter(|&&x| x).count();
    let cols = 2 * n + m + n_art;

    let mut t = Tableau {
        rows: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        cols,
    };
    let mut art_idx = 2 * n + m;
    for (r, (a, b)) in rows.iter().enumerate() {
        let sign = if negated[r] { -Rat::one() } else { Rat::one() };
        let mut row = vec![Rat::zero(); cols + 1];
        for (j, c) in a.iter().enumerate() {
            row[j] = sign.clone() * c;
            row[n + j] = -sign.clone() * c;
        }
        row[2 * n + r] = sign.clone();
        row[cols] = sign.clone() * b;
        if negated[r] {
            row[art_idx] = Rat::one();
            t.basis.push(art_idx);
            art_idx += 1;
        } else {
            t.basis.push(2 * n + r);
        }
        t.rows.push(row);
    }

    if n_art > 0 {
        // phase 1: drive the artificials to zero
        let mut cost = vec![Rat::zero(); cols];
        for j in 2 * n + m..cols {
            cost[j] = -Rat::one();
        }
        let allowed = vec![true; cols];
        let bounded = t.optimize(&cost, &allowed);
        debug_assert!(bounded, "phase-1 objective is bounded by construction");
        let infeasibility: Rat = (2 * n + m..cols).map(|j| t.basic_value(j)).sum();
        if !infeasibility.is_zero() {
            return LpResult::Infeasible;
        }
        // pivot leftover zero-level artificials out of the basis; a row with
        // no eligible column is redundant and can be dropped
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= 2 * n + m {
                match (0..2 * n + m).find(|&j| !t.rows[r][j].is_zero()) {
                    Some(j) => t.pivot(r, j),
                    None => {
                        t.rows.remove(r);
                        t.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    // phase 2 over structural and slack columns only
    let mut cost = vec![Rat::zero(); cols];
    for j in 0..n {
        cost[j] = objective[j].clone();
        cost[n + j] = -objective[j].clone();
    }
    let mut allowed = vec![true; cols];
    for flag in allowed.iter_mut().skip(2 * n + m) {
        *flag = false;
    }
    if !t.optimize(&cost, &allowed) {
        return LpResult::Unbounded;
    }

    let point: Vec<Rat> = (0..n)
        .map(|j| t.basic_value(j) - t.basic_value(n + j))
        .collect();
    let value = objective
        .iter()
        .zip(&point)
        .fold(Rat::zero(), |acc, (c, x)| acc + c.clone() * x);
    LpResult::Optimal { value, point }
}
