use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::tournament::{Digraph, Edge, IncompleteTournament, IncompleteWeakTournament, Tournament, WeakTournament};

use super::tournaments::{b_k_edges, cyclone_edges};

/// Truth value per variable, indexed from 0.
pub type Assignment = Vec<bool>;

/// CNF over variables `1..=num_vars`; literals are signed DIMACS-style integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        for (j, c) in clauses.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::input(format!("clause {} is empty", j + 1)));
            }
            if let Some(l) = c.iter().find(|l| **l == 0 || l.unsigned_abs() as usize > num_vars) {
                return Err(Error::input(format!(
                    "clause {} has literal {l} outside variables 1..={num_vars}",
                    j + 1
                )));
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn is_satisfied_by(&self, alpha: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| alpha[l.unsigned_abs() as usize - 1] == (l > 0)))
    }

    fn check_assignment(&self, alpha: &[bool]) -> Result<()> {
        if alpha.len() != self.num_vars {
            return Err(Error::input(format!(
                "assignment covers {} variables, formula has {}",
                alpha.len(),
                self.num_vars
            )));
        }
        Ok(())
    }
}

/// Brings a 3-CNF into the shape the tournament reduction needs: repeated literals
/// are merged, clauses holding a variable in both polarities are dropped, an even
/// clause count is made odd by repeating the last clause. A formula left without
/// clauses gets a fresh variable and a unit clause on it.
pub fn normalize_3cnf(phi: &CnfFormula) -> Result<(CnfFormula, Vec<String>)> {
    let mut report = Vec::new();
    let mut num_vars = phi.num_vars;
    let mut clauses = Vec::new();
    for (j, c) in phi.clauses.iter().enumerate() {
        let mut lits = c.clone();
        lits.sort_by_key(|l| (l.unsigned_abs(), *l));
        let before = lits.len();
        lits.dedup();
        if lits.len() < before {
            report.push(format!("clause {}: removed repeated literals", j + 1));
        }
        if lits.windows(2).any(|w| w[0] == -w[1]) {
            report.push(format!("clause {}: dropped, contains a variable in both polarities", j + 1));
            continue;
        }
        if lits.len() > 3 {
            return Err(Error::input(format!("clause {} has {} literals; expected at most 3", j + 1, lits.len())));
        }
        clauses.push(lits);
    }
    if clauses.is_empty() {
        num_vars += 1;
        clauses.push(vec![num_vars as i32]);
        report.push(format!("no clauses left: added variable {num_vars} and unit clause ({num_vars})"));
    }
    if clauses.len() % 2 == 0 {
        clauses.push(clauses[clauses.len() - 1].clone());
        report.push(format!("clause count made odd: repeated clause {}", clauses.len() - 1));
    }
    Ok((CnfFormula::new(num_vars, clauses)?, report))
}

/// Instances whose completions are indexed by truth assignments.
pub trait SatReduction {
    type Completion;
    fn formula(&self) -> &CnfFormula;
    fn complete_by_assignment(&self, alpha: &[bool]) -> Result<Self::Completion>;
}

pub fn complete_by_assignment<R: SatReduction>(instance: &R, alpha: &[bool]) -> Result<R::Completion> {
    instance.complete_by_assignment(alpha)
}

/// Weak tournament `W_φ` (and optionally `Ŵ_φ` with `d'`).
#[derive(Debug, Clone)]
pub struct SatWeakTournament {
    pub tournament: IncompleteWeakTournament,
    pub formula: CnfFormula,
    /// `x_i^1..x_i^6` per variable.
    pub blocks: Vec<[usize; 6]>,
    pub clauses: Vec<usize>,
    pub d: usize,
    pub d_prime: Option<usize>,
}

impl SatWeakTournament {
    /// The distinguished vertex: `d'` when present, otherwise `d`.
    pub fn target(&self) -> usize {
        self.d_prime.unwrap_or(self.d)
    }
}

impl SatReduction for SatWeakTournament {
    type Completion = WeakTournament;

    fn formula(&self) -> &CnfFormula {
        &self.formula
    }

    /// `true` orients `x_i^1 ≻ x_i^4`, `false` the reverse.
    fn complete_by_assignment(&self, alpha: &[bool]) -> Result<WeakTournament> {
        self.formula.check_assignment(alpha)?;
        let choices: Vec<_> = self
            .blocks
            .iter()
            .zip(alpha)
            .map(|(b, &t)| ((b[0], b[3]), if t { Edge::Win } else { Edge::Loss }))
            .collect();
        self.tournament.complete(&choices)
    }
}

fn build_weak(phi: &CnfFormula, with_d_prime: bool) -> SatWeakTournament {
    let n = phi.num_vars;
    let m = phi.clauses.len();
    let mut names = Vec::with_capacity(6 * n + m + 2);
    for i in 1..=n {
        names.extend((1..=6).map(|k| format!("x{i}^{k}")));
    }
    names.extend((1..=m).map(|j| format!("c{j}")));
    names.push("d".into());
    if with_d_prime {
        names.push("d'".into());
    }
    let mut g = Digraph::new(names);
    let blocks: Vec<[usize; 6]> = (0..n).map(|i| std::array::from_fn(|k| 6 * i + k)).collect();
    let clauses: Vec<usize> = (0..m).map(|j| 6 * n + j).collect();
    let d = 6 * n + m;
    for b in &blocks {
        for k in 0..6 {
            g.set_win(b[k], b[(k + 1) % 6]);
        }
        g.set(b[0], b[3], Edge::Unspecified);
    }
    for (j, clause) in phi.clauses.iter().enumerate() {
        let c = clauses[j];
        for &l in clause {
            let b = &blocks[l.unsigned_abs() as usize - 1];
            if l > 0 {
                g.set_win(c, b[2]).set_win(b[4], c);
            } else {
                g.set_win(c, b[5]).set_win(b[1], c);
            }
        }
        g.set_win(c, d);
    }
    let d_prime = with_d_prime.then(|| {
        g.set_win(d, d + 1);
        d + 1
    });
    SatWeakTournament {
        tournament: IncompleteWeakTournament::new(g).expect("construction is a legal incomplete weak tournament"),
        formula: phi.clone(),
        blocks,
        clauses,
        d,
        d_prime,
    }
}

/// `W_φ`: `d` is a possible ES action iff `φ` is satisfiable.
pub fn sat_to_weak_tournament(phi: &CnfFormula) -> SatWeakTournament {
    build_weak(phi, false)
}

/// `Ŵ_φ`: `d'` is a necessary ES action iff `φ` is unsatisfiable.
pub fn sat_to_necessary_weak_tournament(phi: &CnfFormula) -> SatWeakTournament {
    build_weak(phi, true)
}

/// Incomplete tournament `T_φ` or `T̂_φ` over a normalized 3-CNF.
#[derive(Debug, Clone)]
pub struct SatTournament {
    pub tournament: IncompleteTournament,
    /// The normalized formula the construction encodes.
    pub formula: CnfFormula,
    pub normalization: Vec<String>,
    /// `N = m + 3n + 1`.
    pub big_n: usize,
    /// `K = ⌈N log₂ N⌉`, the depth of the nested component.
    pub k: usize,
    pub clauses: Vec<usize>,
    pub d: usize,
    pub d_prime: usize,
    pub x_pos: Vec<usize>,
    pub x_neg: Vec<usize>,
    /// `x*, a1, b1, …, aK, bK`.
    pub nested: Vec<usize>,
    /// `x_{n+2}, …, x_{2n+1}`.
    pub singles: Vec<usize>,
    /// Edges at `d` are reversed.
    pub reversed_d: bool,
}

impl SatTournament {
    /// Every vertex of `X`.
    pub fn x_vertices(&self) -> BTreeSet<usize> {
        self.x_pos
            .iter()
            .chain(&self.x_neg)
            .chain(&self.nested)
            .chain(&self.singles)
            .copied()
            .collect()
    }
}

impl SatReduction for SatTournament {
    type Completion = Tournament;

    fn formula(&self) -> &CnfFormula {
        &self.formula
    }

    /// `true` orients `x_i^+ ≻ x_i^-`, `false` the reverse.
    fn complete_by_assignment(&self, alpha: &[bool]) -> Result<Tournament> {
        self.formula.check_assignment(alpha)?;
        let choices: Vec<_> = alpha
            .iter()
            .enumerate()
            .map(|(i, &t)| ((self.x_pos[i], self.x_neg[i]), if t { Edge::Win } else { Edge::Loss }))
            .collect();
        self.tournament.complete(&choices)
    }
}

/// Smallest `K` with `2^K ≥ N^N`, i.e. `⌈N log₂ N⌉`.
fn nested_depth(big_n: usize) -> usize {
    let target = BigUint::from(big_n).pow(big_n as u32);
    let mut k = 0;
    let mut p = BigUint::one();
    while p < target {
        p <<= 1;
        k += 1;
    }
    k
}

fn build_strict(phi: &CnfFormula, reverse_d: bool) -> Result<SatTournament> {
    let (phi, normalization) = normalize_3cnf(phi)?;
    let n = phi.num_vars;
    let m = phi.clauses.len();
    let big_n = m + 3 * n + 1;
    let k = nested_depth(big_n);

    let mut names: Vec<String> = (1..=m).map(|j| format!("c{j}")).collect();
    names.push("d".into());
    names.push("d'".into());
    for i in 1..=n {
        names.push(format!("x{i}+"));
        names.push(format!("x{i}-"));
    }
    names.push("x*".into());
    for i in 1..=k {
        names.push(format!("a{i}"));
        names.push(format!("b{i}"));
    }
    names.extend((n + 2..=2 * n + 1).map(|i| format!("x{i}")));

    let clauses: Vec<usize> = (0..m).collect();
    let d = m;
    let d_prime = m + 1;
    let x_pos: Vec<usize> = (0..n).map(|i| m + 2 + 2 * i).collect();
    let x_neg: Vec<usize> = x_pos.iter().map(|v| v + 1).collect();
    let nested: Vec<usize> = (m + 2 + 2 * n..m + 2 + 2 * n + 2 * k + 1).collect();
    let singles: Vec<usize> = (nested[nested.len() - 1] + 1..names.len()).collect();
    let mut g = Digraph::new(names);

    cyclone_edges(&mut g, &clauses);
    for &c in &clauses {
        g.set_win(d, c).set_win(d_prime, c);
    }
    g.set_win(d, d_prime);

    // X_1..X_{2n+1} as components joined by a cyclone
    let mut components: Vec<Vec<usize>> = (0..n).map(|i| vec![x_pos[i], x_neg[i]]).collect();
    components.push(nested.clone());
    components.extend(singles.iter().map(|&s| vec![s]));
    let count = components.len();
    for a in 0..count {
        for step in 1..=(count - 1) / 2 {
            let b = (a + step) % count;
            for &u in &components[a] {
                for &v in &components[b] {
                    g.set_win(u, v);
                }
            }
        }
    }
    for i in 0..n {
        g.set(x_pos[i], x_neg[i], Edge::Unspecified);
    }
    b_k_edges(&mut g, &nested);

    // d beats the singles and a_i; d' beats X_1..X_n and b_i
    let (a_side, b_side): (Vec<usize>, Vec<usize>) = (1..=k).map(|l| (nested[2 * l - 1], nested[2 * l])).unzip();
    let literal_vertices: Vec<usize> = x_pos.iter().chain(&x_neg).copied().collect();
    for &v in singles.iter().chain(&a_side) {
        g.set_win(d, v);
        g.set_win(v, d_prime);
    }
    for &v in literal_vertices.iter().chain(&b_side) {
        g.set_win(v, d);
        g.set_win(d_prime, v);
    }
    g.set_win(nested[0], d).set_win(nested[0], d_prime);

    for (j, clause) in phi.clauses.iter().enumerate() {
        let c = clauses[j];
        for i in 0..n {
            match clause.iter().find(|l| l.unsigned_abs() as usize == i + 1) {
                Some(&l) if l > 0 => {
                    g.set_win(x_pos[i], c).set_win(c, x_neg[i]);
                }
                Some(_) => {
                    g.set_win(x_neg[i], c).set_win(c, x_pos[i]);
                }
                None => {
                    g.set_win(c, x_pos[i]).set_win(c, x_neg[i]);
                }
            }
        }
        for &v in &nested {
            g.set_win(c, v);
        }
        for &v in &singles {
            g.set_win(v, c);
        }
    }

    if reverse_d {
        for v in 0..g.len() {
            if v != d {
                let e = g.edge(d, v);
                g.set(d, v, e.reversed());
            }
        }
    }

    Ok(SatTournament {
        tournament: IncompleteTournament::new(g)?,
        formula: phi,
        normalization,
        big_n,
        k,
        clauses,
        d,
        d_prime,
        x_pos,
        x_neg,
        nested,
        singles,
        reversed_d: reverse_d,
    })
}

/// `T_φ`: `d` is a necessary BP action iff `φ` is unsatisfiable.
pub fn threesat_to_tournament(phi: &CnfFormula) -> Result<SatTournament> {
    build_strict(phi, false)
}

/// `T̂_φ`: `d` is a possible BP action iff `φ` is satisfiable.
pub fn threesat_to_possible_tournament(phi: &CnfFormula) -> Result<SatTournament> {
    build_strict(phi, true)
}
