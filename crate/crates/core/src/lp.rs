//! Exact linear programming: a dense two-phase tableau simplex with Bland's rule.

use std::mem;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    /// Exact check of `lhs REL rhs`.
    pub fn holds<T: Ord>(self, lhs: &T, rhs: &T) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }

    fn flipped(self) -> Relation {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Eq => Relation::Eq,
            Relation::Ge => Relation::Le,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub relation: Relation,
    pub rhs: T,
}

/// Per-variable bounds; `None` means unbounded on that side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds<T> {
    pub lower: Option<T>,
    pub upper: Option<T>,
}

impl<T: Scalar> Bounds<T> {
    pub fn non_negative() -> Self {
        Bounds {
            lower: Some(T::zero()),
            upper: None,
        }
    }

    pub fn free() -> Self {
        Bounds {
            lower: None,
            upper: None,
        }
    }

    pub fn between(lower: T, upper: T) -> Self {
        Bounds {
            lower: Some(lower),
            upper: Some(upper),
        }
    }

    pub fn contains(&self, x: &T) -> bool {
        self.lower.as_ref().map_or(true, |l| x >= l) && self.upper.as_ref().map_or(true, |u| x <= u)
    }
}

/// A linear program over an exact scalar type.
///
/// Variables are non-negative unless their bounds are changed with
/// [`LinearProgram::set_bounds`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram<T> {
    pub sense: Sense,
    pub objective: Vec<T>,
    pub constraints: Vec<Constraint<T>>,
    pub bounds: Vec<Bounds<T>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome<T> {
    Optimal { solution: Vec<T>, objective: T },
    Infeasible,
    Unbounded,
}

impl<T> LpOutcome<T> {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }
}

impl<T: Scalar> LinearProgram<T> {
    pub fn new(sense: Sense, objective: Vec<T>) -> Self {
        let n = objective.len();
        LinearProgram {
            sense,
            objective,
            constraints: Vec::new(),
            bounds: vec![Bounds::non_negative(); n],
        }
    }

    pub fn maximize(objective: Vec<T>) -> Self {
        Self::new(Sense::Maximize, objective)
    }

    pub fn minimize(objective: Vec<T>) -> Self {
        Self::new(Sense::Minimize, objective)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coeffs: Vec<T>, relation: Relation, rhs: T) -> &mut Self {
        self.constraints.push(Constraint { coeffs, relation, rhs });
        self
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<T>, upper: Option<T>) -> &mut Self {
        self.bounds[var] = Bounds { lower, upper };
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(Error::input(format!(
                "{} bounds given for {} variables",
                self.bounds.len(),
                n
            )));
        }
        for (k, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(Error::input(format!(
                    "constraint {k} has {} coefficients, expected {n}",
                    c.coeffs.len()
                )));
            }
        }
        for (k, b) in self.bounds.iter().enumerate() {
            if let (Some(l), Some(u)) = (&b.lower, &b.upper) {
                if l > u {
                    return Err(Error::input(format!("variable {k}: lower bound {l} exceeds upper bound {u}")));
                }
            }
        }
        Ok(())
    }

    /// Exact feasibility check of a candidate point.
    pub fn is_feasible_point(&self, x: &[T]) -> bool {
        x.len() == self.num_vars()
            && self.bounds.iter().zip(x).all(|(b, v)| b.contains(v))
            && self.constraints.iter().all(|c| c.relation.holds(&dot(&c.coeffs, x), &c.rhs))
    }

    pub fn objective_value(&self, x: &[T]) -> T {
        dot(&self.objective, x)
    }
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            let mut t = x.clone();
            t *= y;
            acc += &t;
        }
    }
    acc
}

/// How an original variable is expressed through non-negative tableau columns.
enum ColumnMap<T> {
    /// x = lower + y
    Shifted { col: usize, lower: T },
    /// x = upper - y
    Mirrored { col: usize, upper: T },
    /// x = y+ - y-
    Split { pos: usize, neg: usize },
}

/// Solves `lp` exactly.
///
/// On `Optimal` the returned point is a basic feasible solution of the
/// standard-form transformation and satisfies every constraint and bound.
pub fn solve_lp<T: Scalar>(lp: &LinearProgram<T>) -> Result<LpOutcome<T>> {
    lp.validate()?;
    let n = lp.num_vars();

    // Standard form: structural columns y >= 0.
    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0;
    for b in &lp.bounds {
        match (&b.lower, &b.upper) {
            (Some(l), _) => {
                maps.push(ColumnMap::Shifted { col: ncols, lower: l.clone() });
                ncols += 1;
            }
            (None, Some(u)) => {
                maps.push(ColumnMap::Mirrored { col: ncols, upper: u.clone() });
                ncols += 1;
            }
            (None, None) => {
                maps.push(ColumnMap::Split { pos: ncols, neg: ncols + 1 });
                ncols += 2;
            }
        }
    }

    let mut rows: Vec<(Vec<T>, Relation, T)> = Vec::with_capacity(lp.constraints.len() + n);
    for c in &lp.constraints {
        let mut coeffs = vec![T::zero(); ncols];
        let mut rhs = c.rhs.clone();
        for (k, a) in c.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            match &maps[k] {
                ColumnMap::Shifted { col, lower } => {
                    coeffs[*col] = a.clone();
                    if !lower.is_zero() {
                        let mut t = a.clone();
                        t *= lower;
                        rhs -= &t;
                    }
                }
                ColumnMap::Mirrored { col, upper } => {
                    coeffs[*col] = -a.clone();
                    let mut t = a.clone();
                    t *= upper;
                    rhs -= &t;
                }
                ColumnMap::Split { pos, neg } => {
                    coeffs[*pos] = a.clone();
                    coeffs[*neg] = -a.clone();
                }
            }
        }
        rows.push((coeffs, c.relation, rhs));
    }
    for (k, b) in lp.bounds.iter().enumerate() {
        if let (Some(l), Some(u)) = (&b.lower, &b.upper) {
            if let ColumnMap::Shifted { col, .. } = maps[k] {
                let mut coeffs = vec![T::zero(); ncols];
                coeffs[col] = T::one();
                rows.push((coeffs, Relation::Le, u.clone() - l));
            }
        }
    }

    // Minimization costs on structural columns.
    let negate = lp.sense == Sense::Maximize;
    let mut cost = vec![T::zero(); ncols];
    for (k, c) in lp.objective.iter().enumerate() {
        let c = if negate { -c.clone() } else { c.clone() };
        match &maps[k] {
            ColumnMap::Shifted { col, .. } => cost[*col] = c,
            ColumnMap::Mirrored { col, .. } => cost[*col] = -c,
            ColumnMap::Split { pos, neg } => {
                cost[*neg] = -c.clone();
                cost[*pos] = c;
            }
        }
    }

    let y = match Tableau::build(rows, ncols).solve(&cost)? {
        Phase::Optimal(y) => y,
        Phase::Infeasible => return Ok(LpOutcome::Infeasible),
        Phase::Unbounded => return Ok(LpOutcome::Unbounded),
    };

    let solution: Vec<T> = maps
        .iter()
        .map(|m| match m {
            ColumnMap::Shifted { col, lower } => lower.clone() + &y[*col],
            ColumnMap::Mirrored { col, upper } => upper.clone() - &y[*col],
            ColumnMap::Split { pos, neg } => y[*pos].clone() - &y[*neg],
        })
        .collect();
    let objective = lp.objective_value(&solution);
    debug_assert!(lp.is_feasible_point(&solution));
    Ok(LpOutcome::Optimal { solution, objective })
}

enum Phase<T> {
    Optimal(Vec<T>),
    Infeasible,
    Unbounded,
}

struct Tableau<T> {
    /// Constraint rows; the last entry of each row is the right-hand side.
    rows: Vec<Vec<T>>,
    /// Reduced-cost row; the last entry is minus the objective value.
    obj: Vec<T>,
    basis: Vec<usize>,
    structural: usize,
    /// First artificial column; artificial columns run to the end.
    first_artificial: usize,
    width: usize,
}

impl<T: Scalar> Tableau<T> {
    fn build(rows: Vec<(Vec<T>, Relation, T)>, structural: usize) -> Self {
        let mut normalized = Vec::with_capacity(rows.len());
        for (mut coeffs, mut rel, mut rhs) in rows {
            // a zero-rhs `≥` row flips to `≤` so its slack can start basic
            if rhs.is_negative() || (rhs.is_zero() && rel == Relation::Ge) {
                for a in coeffs.iter_mut() {
                    *a = -mem::replace(a, T::zero());
                }
                rhs = -rhs;
                rel = rel.flipped();
            }
            normalized.push((coeffs, rel, rhs));
        }
        let slacks = normalized.iter().filter(|r| r.1 != Relation::Eq).count();
        let artificials = normalized.iter().filter(|r| r.1 != Relation::Le).count();
        let first_artificial = structural + slacks;
        let width = first_artificial + artificials;

        let mut tab_rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let (mut next_slack, mut next_art) = (structural, first_artificial);
        for (coeffs, rel, rhs) in normalized {
            let mut row = coeffs;
            row.resize(width + 1, T::zero());
            row[width] = rhs;
            match rel {
                Relation::Le => {
                    row[next_slack] = T::one();
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -T::one();
                    next_slack += 1;
                    row[next_art] = T::one();
                    basis.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = T::one();
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            tab_rows.push(row);
        }
        Tableau {
            rows: tab_rows,
            obj: vec![T::zero(); width + 1],
            basis,
            structural,
            first_artificial,
            width,
        }
    }

    fn solve(mut self, cost: &[T]) -> Result<Phase<T>> {
        if self.first_artificial < self.width {
            // Phase 1: minimize the sum of artificials.
            let mut obj = vec![T::zero(); self.width + 1];
            for (row, &b) in self.rows.iter().zip(&self.basis) {
                if b >= self.first_artificial {
                    for (o, a) in obj.iter_mut().zip(row) {
                        if !a.is_zero() {
                            *o -= a;
                        }
                    }
                }
            }
            for o in &mut obj[self.first_artificial..self.width] {
                *o = T::zero();
            }
            self.obj = obj;
            if !self.run(self.width)? {
                // phase 1 is bounded below by zero
                unreachable!("phase one objective unbounded");
            }
            if self.obj[self.width].is_negative() {
                return Ok(Phase::Infeasible);
            }
            self.expel_artificials();
        }

        // Phase 2 over non-artificial columns.
        let mut obj = vec![T::zero(); self.width + 1];
        obj[..self.structural].clone_from_slice(cost);
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = if b < self.structural { &cost[b] } else { continue };
            if cb.is_zero() {
                continue;
            }
            for (o, a) in obj.iter_mut().zip(row) {
                if !a.is_zero() {
                    let mut t = a.clone();
                    t *= cb;
                    *o -= &t;
                }
            }
        }
        self.obj = obj;
        if !self.run(self.first_artificial)? {
            return Ok(Phase::Unbounded);
        }
        let mut y = vec![T::zero(); self.structural];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.structural {
                y[b] = row[self.width].clone();
            }
        }
        Ok(Phase::Optimal(y))
    }

    /// Bland's-rule simplex over columns `< limit`. Returns false on unboundedness.
    fn run(&mut self, limit: usize) -> Result<bool> {
        loop {
            let Some(enter) = (0..limit).find(|&j| self.obj[j].is_negative()) else {
                return Ok(true);
            };
            let mut leave: Option<(usize, T)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = &row[enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = row[self.width].clone() / a;
                let better = match &leave {
                    None => true,
                    Some((r, best)) => match ratio.cmp(best) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Equal => self.basis[i] < self.basis[*r],
                        std::cmp::Ordering::Greater => false,
                    },
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return Ok(false),
            }
        }
    }

    /// Pivots zero-level artificials out of the basis, dropping redundant rows.
    fn expel_artificials(&mut self) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.first_artificial {
                match (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(j) => {
                        self.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        self.rows.remove(i);
                        self.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let mut prow = mem::take(&mut self.rows[r]);
        let piv = prow[c].clone();
        if !piv.is_one() {
            for v in prow.iter_mut() {
                if !v.is_zero() {
                    *v /= &piv;
                }
            }
        }
        let nz: Vec<usize> = (0..prow.len()).filter(|&k| !prow[k].is_zero()).collect();
        let eliminate = |row: &mut Vec<T>| {
            let f = row[c].clone();
            if f.is_zero() {
                return;
            }
            for &k in &nz {
                let mut t = prow[k].clone();
                t *= &f;
                row[k] -= &t;
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.rows[r] = prow;
        self.basis[r] = c;
    }
}
