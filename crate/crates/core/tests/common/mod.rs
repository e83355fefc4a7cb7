//! Independent oracles and instance samplers shared by integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use incgames::reductions::{CnfFormula, SetCoverInstance};
use incgames::Rational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Determinant by Laplace expansion along the first row.
pub fn cofactor_determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut det = Rational::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Rational>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = &m[0][j] * &cofactor_determinant(&minor);
        if j % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

/// Some choice of at most `k` subsets covers the universe.
pub fn has_cover(inst: &SetCoverInstance) -> bool {
    let n = inst.subsets.len();
    (0u32..1 << n).any(|mask| {
        if mask.count_ones() as usize > inst.k {
            return false;
        }
        let covered: BTreeSet<usize> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .flat_map(|i| inst.subsets[i].iter().copied())
            .collect();
        covered.len() == inst.universe.len()
    })
}

pub fn satisfiable(num_vars: usize, clauses: &[Vec<i32>]) -> bool {
    (0u32..1 << num_vars).any(|mask| {
        clauses.iter().all(|c| {
            c.iter().any(|&l| {
                let v = l.unsigned_abs() - 1;
                (mask >> v & 1 == 1) == (l > 0)
            })
        })
    })
}

pub fn assignments(num_vars: usize) -> Vec<Vec<bool>> {
    (0u32..1 << num_vars)
        .map(|mask| (0..num_vars).map(|v| mask >> v & 1 == 1).collect())
        .collect()
}

/// Random CNF with 1..=max_vars variables and 1..=max_clauses clauses of 1..=3 literals.
pub fn random_cnf<R: Rng>(rng: &mut R, max_vars: usize, max_clauses: usize) -> CnfFormula {
    let n = rng.gen_range(1..=max_vars);
    let m = rng.gen_range(1..=max_clauses);
    let clauses = (0..m)
        .map(|_| {
            let len = rng.gen_range(1..=3);
            (0..len)
                .map(|_| {
                    let v = rng.gen_range(1..=n as i32);
                    if rng.gen_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect();
    CnfFormula::new(n, clauses).unwrap()
}

/// Random 3-CNF with `m` clauses over `n` variables, each variable at most once per clause.
pub fn random_eligible_3cnf<R: Rng>(rng: &mut R, n: usize, m: usize) -> CnfFormula {
    let clauses = (0..m)
        .map(|_| {
            let len = rng.gen_range(1..=n.min(3));
            let mut vars: Vec<i32> = (1..=n as i32).collect();
            let mut clause = Vec::new();
            for _ in 0..len {
                let v = vars.remove(rng.gen_range(0..vars.len()));
                clause.push(if rng.gen_bool(0.5) { v } else { -v });
            }
            clause
        })
        .collect();
    CnfFormula::new(n, clauses).unwrap()
}

pub fn random_set_cover<R: Rng>(rng: &mut R, max_sets: usize, max_universe: usize) -> SetCoverInstance {
    let u = rng.gen_range(1..=max_universe);
    let n = rng.gen_range(1..=max_sets);
    let subsets = (0..n)
        .map(|_| (0..u).filter(|_| rng.gen_bool(0.4)).collect())
        .collect();
    let k = rng.gen_range(1..=n);
    SetCoverInstance::new((1..=u).map(|i| format!("e{i}")).collect(), subsets, k).unwrap()
}

pub fn sum(xs: &[Rational]) -> Rational {
    xs.iter().fold(Rational::zero(), |a, b| a + b)
}

pub fn is_distribution(xs: &[Rational]) -> bool {
    xs.iter().all(|x| !x.is_negative()) && sum(xs).is_one()
}

/// Solves the square system `a x = b` by Gauss-Jordan elimination; `None` if singular.
pub fn gauss_solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for k in col..n {
            a[col][k] = &a[col][k] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in col..n {
                    let t = &f * &a[col][k];
                    a[r][k] -= t;
                }
                let t = &f * &b[col];
                b[r] -= t;
            }
        }
    }
    Some(b)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Small LP in the form `max/min c·x`, `rows`, `x >= 0`.
#[derive(Debug, Clone)]
pub struct SmallLp {
    pub maximize: bool,
    pub c: Vec<i64>,
    /// `(coefficients, relation, rhs)` with relation -1 for `<=`, 0 for `=`, 1 for `>=`.
    pub rows: Vec<(Vec<i64>, i8, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    Optimal(Rational),
    Infeasible,
    Unbounded,
}

fn best_vertex(n: usize, planes: &[(Vec<Rational>, i8, Rational)], c: &[Rational], maximize: bool) -> Option<Rational> {
    let mut best: Option<Rational> = None;
    for basis in subsets(planes.len(), n) {
        let a = basis.iter().map(|&r| planes[r].0.clone()).collect();
        let b = basis.iter().map(|&r| planes[r].2.clone()).collect();
        let Some(x) = gauss_solve(a, b) else { continue };
        let feasible = planes.iter().all(|(coef, rel, rhs)| {
            let lhs: Rational = coef.iter().zip(&x).map(|(a, b)| a * b).fold(Rational::zero(), |s, t| s + t);
            match rel {
                -1 => lhs <= *rhs,
                0 => lhs == *rhs,
                _ => lhs >= *rhs,
            }
        });
        if !feasible {
            continue;
        }
        let v: Rational = c.iter().zip(&x).map(|(a, b)| a * b).fold(Rational::zero(), |s, t| s + t);
        let better = match &best {
            None => true,
            Some(b) => (maximize && v > *b) || (!maximize && v < *b),
        };
        if better {
            best = Some(v);
        }
    }
    best
}

/// Optimum by enumerating every basic solution. Unboundedness shows up as a better
/// vertex once every variable is boxed far beyond any vertex of the original region.
pub fn lp_oracle(lp: &SmallLp) -> OracleOutcome {
    let n = lp.c.len();
    let mut planes: Vec<(Vec<Rational>, i8, Rational)> = lp
        .rows
        .iter()
        .map(|(a, rel, b)| (a.iter().map(|&v| Rational::from(v)).collect(), *rel, Rational::from(*b)))
        .collect();
    for i in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[i] = Rational::one();
        planes.push((e, 1, Rational::zero()));
    }
    let c: Vec<Rational> = lp.c.iter().map(|&v| Rational::from(v)).collect();
    let Some(best) = best_vertex(n, &planes, &c, lp.maximize) else {
        return OracleOutcome::Infeasible;
    };
    let big = Rational::from(1_000_000_000_000i64);
    for i in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[i] = Rational::one();
        planes.push((e, -1, big.clone()));
    }
    let boxed = best_vertex(n, &planes, &c, lp.maximize).expect("boxing keeps the region nonempty");
    if boxed == best {
        OracleOutcome::Optimal(best)
    } else {
        OracleOutcome::Unbounded
    }
}

pub fn random_small_lp<R: Rng>(rng: &mut R) -> SmallLp {
    let n = rng.gen_range(1..=5);
    let m = rng.gen_range(1..=5);
    SmallLp {
        maximize: rng.gen_bool(0.5),
        c: (0..n).map(|_| rng.gen_range(-4..=4)).collect(),
        rows: (0..m)
            .map(|_| {
                let rel = match rng.gen_range(0..6) {
                    0..=2 => -1,
                    3 => 0,
                    _ => 1,
                };
                ((0..n).map(|_| rng.gen_range(-3..=3)).collect(), rel, rng.gen_range(-4..=8))
            })
            .collect(),
    }
}

pub fn random_matrix<R: Rng>(rng: &mut R, m: usize, n: usize, lo: i64, hi: i64) -> Vec<Vec<Rational>> {
    (0..m).map(|_| (0..n).map(|_| Rational::from(rng.gen_range(lo..=hi))).collect()).collect()
}

/// Random antisymmetric matrix with entries in `lo..=hi` above the diagonal.
pub fn random_symmetric_matrix<R: Rng>(rng: &mut R, n: usize, lo: i64, hi: i64) -> Vec<Vec<Rational>> {
    let mut m = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = Rational::from(rng.gen_range(lo..=hi));
            m[j][i] = -&v;
            m[i][j] = v;
        }
    }
    m
}

/// `g` with `m(i,j) = z` and `m(j,i) = -z`.
pub fn with_symmetric_pair(g: &incgames::Game, i: usize, j: usize, z: Rational) -> incgames::Game {
    let mut rows = g.to_rows();
    rows[j][i] = -&z;
    rows[i][j] = z;
    incgames::matrix::MatrixGame::new_symmetric(rows)
        .unwrap()
        .with_labels(g.row_labels().to_vec(), g.col_labels().to_vec())
        .unwrap()
}

/// Random incomplete game with at most `max_free` entries drawn from small sets.
pub fn random_incomplete_game<R: Rng>(rng: &mut R, symmetric: bool, max_free: usize) -> incgames::incomplete::IncompleteMatrixGame {
    use incgames::incomplete::{Entry, IncompleteMatrixGame};
    let m = rng.gen_range(2..=4);
    let n = if symmetric { m } else { rng.gen_range(2..=4) };
    let mut e: Vec<Vec<Entry>> = (0..m).map(|_| (0..n).map(|_| Entry::value(rng.gen_range(-2..=2i64))).collect()).collect();
    if symmetric {
        for i in 0..m {
            e[i][i] = Entry::value(0i64);
            for j in 0..i {
                let v = match &e[i][j] {
                    Entry::Value(v) => v.clone(),
                    _ => unreachable!(),
                };
                e[j][i] = Entry::Value(-v);
            }
        }
    }
    let coords: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !symmetric || i > j)
        .collect();
    let free = rng.gen_range(1..=max_free.min(coords.len()));
    for _ in 0..free {
        let (i, j) = coords[rng.gen_range(0..coords.len())];
        let set = Entry::set((0..rng.gen_range(2..=3)).map(|_| Rational::from(rng.gen_range(-2..=2i64)))).unwrap();
        if symmetric {
            e[j][i] = set.negated();
        }
        e[i][j] = set;
    }
    if symmetric {
        IncompleteMatrixGame::new_symmetric(e).unwrap()
    } else {
        IncompleteMatrixGame::new(e).unwrap()
    }
}
