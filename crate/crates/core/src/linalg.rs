//! Dense exact linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::poly::Rational;

/// General solution `particular + span(nullspace)` of a linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<Rational>,
    pub nullspace: Vec<Vec<Rational>>,
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Rational>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let inv = Rational::one() / &rows[r][col];
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{v : A v = 0}` where `A` has `ncols` columns.
pub fn nullspace(a: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut rows = a.to_vec();
    let pivots = rref(&mut rows, ncols);
    free_columns(&pivots, ncols)
        .map(|free| {
            let mut v = vec![Rational::zero(); ncols];
            v[free] = Rational::one();
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = -row[free].clone();
            }
            v
        })
        .collect()
}

/// Solves `A v = b`; `None` when inconsistent. Free variables of the
/// particular solution are zero.
pub fn solve(a: &[Vec<Rational>], b: &[Rational], ncols: usize) -> Option<Solution> {
    assert_eq!(a.len(), b.len());
    let mut rows: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut rows, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut particular = vec![Rational::zero(); ncols];
    for (row, &pc) in rows.iter().zip(&pivots) {
        particular[pc] = row[ncols].clone();
    }
    Some(Solution {
        particular,
        nullspace: nullspace(a, ncols),
    })
}

/// Row-space basis in reduced echelon form.
pub fn row_basis(vectors: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut rows = vectors.to_vec();
    rref(&mut rows, ncols);
    rows
}

/// Basis of `span(a) ∩ span(b)` in reduced echelon form.
pub fn intersect(a: &[Vec<Rational>], b: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // columns: coefficients on a's vectors, then on b's; rows: coordinates
    let k = a.len() + b.len();
    let system: Vec<Vec<Rational>> = (0..ncols)
        .map(|c| {
            a.iter()
                .map(|v| v[c].clone())
                .chain(b.iter().map(|v| -v[c].clone()))
                .collect()
        })
        .collect();
    let combos = nullspace(&system, k);
    let vectors: Vec<Vec<Rational>> = combos
        .iter()
        .map(|combo| {
            let mut v = vec![Rational::zero(); ncols];
            for (coef, basis) in combo.iter().zip(a) {
                if coef.is_zero() {
                    continue;
                }
                for (slot, x) in v.iter_mut().zip(basis) {
                    *slot += coef * x;
                }
            }
            v
        })
        .collect();
    row_basis(&vectors, ncols)
}

fn free_columns(pivots: &[usize], ncols: usize) -> impl Iterator<Item = usize> + '_ {
    (0..ncols).filter(move |c| !pivots.contains(c))
}
