//! Essential sets by brute-force vertex enumeration, independent of the simplex code.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{EssentialSet, MatrixGame};

/// Largest dimension the enumeration accepts.
pub const ORACLE_MAX_DIM: usize = 6;

/// Solves a square system by Gaussian elimination; `None` if singular.
pub(crate) fn solve_square<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone() / &a[col][col];
            for c in col..n {
                let t = f.clone() * &a[col][c];
                a[r][c] -= &t;
            }
            let t = f * &b[col];
            b[r] -= &t;
        }
    }
    Some((0..n).map(|i| b[i].clone() / &a[i][i]).collect())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == k {
            out.push((0..n).filter(|i| mask >> i & 1 == 1).collect());
        }
    }
    out
}

/// Essential actions of the row player of `payoff` (row-major `m x n`, row maximizes).
fn row_side<T: Scalar>(m: usize, n: usize, payoff: &dyn Fn(usize, usize) -> T) -> (T, BTreeSet<usize>) {
    let mut best: Option<T> = None;
    let mut support = BTreeSet::new();
    for k in 1..=m.min(n) {
        for s in subsets(m, k) {
            for t in subsets(n, k) {
                // unknowns p_s (k) and v; equations: tight columns and the simplex
                let mut a = Vec::with_capacity(k + 1);
                let mut b = Vec::with_capacity(k + 1);
                for &j in &t {
                    let mut row: Vec<T> = s.iter().map(|&i| payoff(i, j)).collect();
                    row.push(-T::one());
                    a.push(row);
                    b.push(T::zero());
                }
                let mut row = vec![T::one(); k];
                row.push(T::zero());
                a.push(row);
                b.push(T::one());
                let Some(x) = solve_square(a, b) else { continue };
                if x[..k].iter().any(|p| p.is_negative()) {
                    continue;
                }
                let guarantee = (0..n)
                    .map(|j| s.iter().zip(&x).fold(T::zero(), |acc, (&i, p)| acc + payoff(i, j) * p))
                    .min()
                    .expect("at least one column");
                let supp = s.iter().zip(&x).filter(|(_, p)| p.is_positive()).map(|(&i, _)| i);
                match &best {
                    Some(v) if guarantee < *v => {}
                    Some(v) if guarantee == *v => support.extend(supp),
                    _ => {
                        best = Some(guarantee);
                        support = supp.collect();
                    }
                }
            }
        }
    }
    (best.expect("some vertex exists"), support)
}

/// Reference essential set: unions supports of all optimal vertices, found by
/// solving every square support system. Exponential; dimensions up to 6.
pub fn essential_set_oracle<T: Scalar>(g: &MatrixGame<T>) -> Result<EssentialSet> {
    if g.rows() > ORACLE_MAX_DIM || g.cols() > ORACLE_MAX_DIM {
        return Err(Error::input(format!(
            "oracle supports games up to {ORACLE_MAX_DIM}x{ORACLE_MAX_DIM}"
        )));
    }
    let (_, rows) = row_side(g.rows(), g.cols(), &|i, j| g.payoff(i, j).clone());
    // the column player maximizes the negated transpose
    let (_, cols) = row_side(g.cols(), g.rows(), &|j, i| -g.payoff(i, j).clone());
    Ok(EssentialSet { rows, cols })
}

/// Game value from the same enumeration.
pub fn game_value_oracle<T: Scalar>(g: &MatrixGame<T>) -> Result<T> {
    if g.rows() > ORACLE_MAX_DIM || g.cols() > ORACLE_MAX_DIM {
        return Err(Error::input(format!(
            "oracle supports games up to {ORACLE_MAX_DIM}x{ORACLE_MAX_DIM}"
        )));
    }
    Ok(row_side(g.rows(), g.cols(), &|i, j| g.payoff(i, j).clone()).0)
}
