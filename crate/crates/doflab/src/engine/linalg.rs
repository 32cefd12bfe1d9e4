//! Dense elimination routines shared by every scalar mode. Floats pick the
//! largest-magnitude pivot and test entries against the matrix scale; exact
//! modes take the first nonzero pivot.

use super::scalar::Scalar;

fn matrix_scale<S: Scalar>(rows: &[Vec<S>]) -> f64 {
    rows.iter()
        .flat_map(|r| r.iter())
        .map(Scalar::mag)
        .fold(0.0, f64::max)
}

/// Rank via forward elimination with partial pivoting.
pub fn rank<S: Scalar>(rows: &[Vec<S>]) -> usize {
    let mut m: Vec<Vec<S>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let scale = matrix_scale(&m);
    let mut r = 0;
    for c in 0..cols {
        let pivot = (r..m.len())
            .filter(|&i| !m[i][c].is_negligible(scale))
            .max_by(|&i, &j| m[i][c].mag().total_cmp(&m[j][c].mag()));
        let Some(p) = pivot else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for i in r + 1..m.len() {
            if m[i][c].is_negligible(scale) {
                continue;
            }
            let factor = m[i][c].mul(&inv);
            for j in c..cols {
                let delta = factor.mul(&m[r][j]);
                m[i][j] = m[i][j].sub(&delta);
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Basis of the right null space of a matrix with `cols` columns, one
/// vector per free column of its reduced echelon form. Empty input yields
/// the standard basis.
pub fn null_space<S: Scalar>(rows: &[Vec<S>], cols: usize) -> Vec<Vec<S>> {
    let mut m: Vec<Vec<S>> = rows.iter().filter(|r| !r.is_empty()).cloned().collect();
    assert!(m.iter().all(|r| r.len() == cols), "ragged matrix");
    let scale = matrix_scale(&m);
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let pivot = (r..m.len())
            .filter(|&i| !m[i][c].is_negligible(scale))
            .max_by(|&i, &j| m[i][c].mag().total_cmp(&m[j][c].mag()));
        let Some(p) = pivot else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for j in c..cols {
            m[r][j] = m[r][j].mul(&inv);
        }
        for i in 0..m.len() {
            if i == r || m[i][c].is_negligible(scale) {
                continue;
            }
            let factor = m[i][c].clone();
            for j in c..cols {
                let delta = factor.mul(&m[r][j]);
                m[i][j] = m[i][j].sub(&delta);
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![S::zero(); cols];
        v[free] = S::one();
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = m[row][free].neg();
        }
        basis.push(v);
    }
    basis
}

/// Inner product without conjugation; zero-forcing is bilinear in every
/// mode so one routine serves fields, rationals and complex doubles.
pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    assert_eq!(a.len(), b.len());
    let mut acc = S::zero();
    for (x, y) in a.iter().zip(b) {
        acc = acc.add(&x.mul(y));
    }
    acc
}
