//! Exact node presolve: turns a model plus branching bounds into a smaller LP.
//!
//! Every reduction preserves the set of feasible points of the relaxation
//! (projected onto the remaining variables), except integer bound rounding,
//! which only cuts off fractional points.

use crate::lp::{Bounds, LinearProgram, Relation};
use crate::scalar::Scalar;

use super::MipModel;

#[derive(Debug, Clone)]
struct Row<T> {
    terms: Vec<(usize, T)>,
    relation: Relation,
    rhs: T,
}

impl<T: Scalar> Row<T> {
    fn coeff(&self, v: usize) -> Option<&T> {
        self.terms.binary_search_by_key(&v, |t| t.0).ok().map(|k| &self.terms[k].1)
    }

    /// Replaces `v` by `constant + Σ terms`.
    fn substitute(&mut self, v: usize, constant: &T, expr: &[(usize, T)]) {
        let Ok(k) = self.terms.binary_search_by_key(&v, |t| t.0) else { return };
        let (_, c) = self.terms.remove(k);
        if !constant.is_zero() {
            let t = c.clone() * constant;
            self.rhs -= &t;
        }
        for (w, a) in expr {
            add_term(&mut self.terms, *w, c.clone() * a);
        }
    }
}

fn add_term<T: Scalar>(terms: &mut Vec<(usize, T)>, v: usize, a: T) {
    match terms.binary_search_by_key(&v, |t| t.0) {
        Ok(k) => {
            terms[k].1 += &a;
            if terms[k].1.is_zero() {
                terms.remove(k);
            }
        }
        Err(k) => {
            if !a.is_zero() {
                terms.insert(k, (v, a));
            }
        }
    }
}

/// How an eliminated variable is recovered.
#[derive(Debug, Clone)]
enum Elim<T> {
    Fixed(usize, T),
    Affine { var: usize, constant: T, terms: Vec<(usize, T)> },
}

/// The LP left after presolve and the recipe to map its solutions back.
#[derive(Debug, Clone)]
pub(crate) struct Reduced<T> {
    pub lp: LinearProgram<T>,
    /// LP column → model variable.
    pub columns: Vec<usize>,
    pub objective_constant: T,
    elims: Vec<Elim<T>>,
    num_vars: usize,
}

impl<T: Scalar> Reduced<T> {
    /// Expands an LP solution to a full model point.
    pub fn postsolve(&self, lp_solution: &[T]) -> Vec<T> {
        let mut x = vec![T::zero(); self.num_vars];
        for (col, &v) in self.columns.iter().enumerate() {
            x[v] = lp_solution[col].clone();
        }
        for e in self.elims.iter().rev() {
            match e {
                Elim::Fixed(v, val) => x[*v] = val.clone(),
                Elim::Affine { var, constant, terms } => {
                    let mut acc = constant.clone();
                    for (w, a) in terms {
                        acc += a.clone() * &x[*w];
                    }
                    x[*var] = acc;
                }
            }
        }
        x
    }
}

struct State<T> {
    rows: Vec<Option<Row<T>>>,
    lo: Vec<Option<T>>,
    hi: Vec<Option<T>>,
    integer: Vec<bool>,
    active: Vec<bool>,
    obj: Vec<T>,
    obj_const: T,
    elims: Vec<Elim<T>>,
}

struct Infeasible;

type Step = Result<bool, Infeasible>;

fn is_integral<T: Scalar>(x: &T) -> bool {
    x.is_integer()
}

fn floor<T: Scalar>(x: &T) -> T {
    x.floor()
}

fn ceil<T: Scalar>(x: &T) -> T {
    x.ceil()
}

impl<T: Scalar> State<T> {
    /// Tightens the lower bound; returns whether it changed.
    fn tighten_lo(&mut self, v: usize, mut b: T) -> Step {
        if self.integer[v] {
            b = ceil(&b);
        }
        if self.lo[v].as_ref().is_some_and(|l| *l >= b) {
            return Ok(false);
        }
        if self.hi[v].as_ref().is_some_and(|h| *h < b) {
            return Err(Infeasible);
        }
        self.lo[v] = Some(b);
        Ok(true)
    }

    fn tighten_hi(&mut self, v: usize, mut b: T) -> Step {
        if self.integer[v] {
            b = floor(&b);
        }
        if self.hi[v].as_ref().is_some_and(|h| *h <= b) {
            return Ok(false);
        }
        if self.lo[v].as_ref().is_some_and(|l| *l > b) {
            return Err(Infeasible);
        }
        self.hi[v] = Some(b);
        Ok(true)
    }

    fn eliminate(&mut self, v: usize, constant: T, expr: Vec<(usize, T)>) {
        self.active[v] = false;
        for row in self.rows.iter_mut().flatten() {
            row.substitute(v, &constant, &expr);
        }
        let c = std::mem::replace(&mut self.obj[v], T::zero());
        if !c.is_zero() {
            self.obj_const += c.clone() * &constant;
            for (w, a) in &expr {
                let t = c.clone() * a;
                self.obj[*w] += &t;
            }
        }
        if expr.is_empty() {
            self.elims.push(Elim::Fixed(v, constant));
        } else {
            self.elims.push(Elim::Affine { var: v, constant, terms: expr });
        }
    }

    fn fix_settled(&mut self) -> Step {
        let mut changed = false;
        for v in 0..self.active.len() {
            if !self.active[v] {
                continue;
            }
            if let (Some(l), Some(h)) = (&self.lo[v], &self.hi[v]) {
                if l == h {
                    let val = l.clone();
                    self.eliminate(v, val, Vec::new());
                    changed = true;
                }
            }
        }
        Ok(changed)
    }

    fn process_rows(&mut self) -> Step {
        let mut changed = false;
        for r in 0..self.rows.len() {
            let Some(row) = self.rows[r].as_ref() else { continue };
            match row.terms.len() {
                0 => {
                    if !row.relation.holds(&T::zero(), &row.rhs) {
                        return Err(Infeasible);
                    }
                    self.rows[r] = None;
                    changed = true;
                }
                1 => {
                    let (v, a) = row.terms[0].clone();
                    let bound = row.rhs.clone() / &a;
                    let rel = if a.is_negative() { flip(row.relation) } else { row.relation };
                    self.rows[r] = None;
                    changed = true;
                    match rel {
                        Relation::Eq => {
                            if self.integer[v] && !is_integral(&bound) {
                                return Err(Infeasible);
                            }
                            self.tighten_lo(v, bound.clone())?;
                            self.tighten_hi(v, bound)?;
                        }
                        Relation::Le => {
                            self.tighten_hi(v, bound)?;
                        }
                        Relation::Ge => {
                            self.tighten_lo(v, bound)?;
                        }
                    }
                }
                2 if row.relation == Relation::Eq => {
                    if self.aggregate_doubleton(r)? {
                        changed = true;
                    }
                }
                _ => {}
            }
        }
        Ok(changed)
    }

    /// Eliminates one variable of `a x + b y = c` when integrality survives.
    fn aggregate_doubleton(&mut self, r: usize) -> Step {
        let row = self.rows[r].as_ref().expect("live row");
        let (v0, a0) = row.terms[0].clone();
        let (v1, a1) = row.terms[1].clone();
        let rhs = row.rhs.clone();
        // prefer eliminating the later variable
        for (x, a, y, b) in [(v1, a1.clone(), v0, a0.clone()), (v0, a0, v1, a1)] {
            let constant = rhs.clone() / &a;
            let k = -(b / &a);
            if self.integer[x] && !(self.integer[y] && is_integral(&k) && is_integral(&constant)) {
                continue;
            }
            // carry x's bounds over to y
            let (lo_x, hi_x) = (self.lo[x].clone(), self.hi[x].clone());
            for (bound, is_lower) in [(lo_x, true), (hi_x, false)] {
                let Some(bound) = bound else { continue };
                let t = (bound - &constant) / &k;
                if is_lower == k.is_positive() {
                    self.tighten_lo(y, t)?;
                } else {
                    self.tighten_hi(y, t)?;
                }
            }
            self.rows[r] = None;
            self.eliminate(x, constant, vec![(y, k)]);
            return Ok(true);
        }
        Ok(false)
    }

    /// `x ≤ rhs / a` from equality rows with non-negative terms over non-negative variables.
    fn implied_bounds(&mut self) -> Step {
        let mut changed = false;
        for r in 0..self.rows.len() {
            let Some(row) = self.rows[r].as_ref() else { continue };
            if row.relation != Relation::Eq || row.rhs.is_negative() {
                continue;
            }
            let ok = row
                .terms
                .iter()
                .all(|(v, a)| a.is_positive() && self.lo[*v].as_ref().is_some_and(|l| !l.is_negative()));
            if !ok {
                continue;
            }
            let updates: Vec<(usize, T)> = row.terms.iter().map(|(v, a)| (*v, row.rhs.clone() / a)).collect();
            for (v, b) in updates {
                changed |= self.tighten_hi(v, b)?;
            }
        }
        Ok(changed)
    }

    /// Minimum of `constant + Σ terms` over the current bound box.
    fn box_min(&self, constant: &T, terms: &[(usize, T)]) -> Option<T> {
        let mut acc = constant.clone();
        for (v, a) in terms {
            let b = if a.is_positive() { self.lo[*v].as_ref()? } else { self.hi[*v].as_ref()? };
            acc += a.clone() * b;
        }
        Some(acc)
    }

    /// Replaces a continuous variable that is only bounded from below by its
    /// unique non-dominated lower bound.
    fn envelopes(&mut self) -> Step {
        let mut changed = false;
        for z in 0..self.active.len() {
            if !self.active[z] || self.integer[z] || self.hi[z].is_some() || !self.obj[z].is_zero() {
                continue;
            }
            // lower-bound candidates: (row index or None for the variable bound, constant, terms)
            let mut cands: Vec<(Option<usize>, T, Vec<(usize, T)>)> = Vec::new();
            let mut eligible = true;
            for (r, row) in self.rows.iter().enumerate() {
                let Some(row) = row else { continue };
                let Some(c) = row.coeff(z) else { continue };
                let lower = match row.relation {
                    Relation::Eq => {
                        eligible = false;
                        break;
                    }
                    Relation::Ge => c.is_positive(),
                    Relation::Le => c.is_negative(),
                };
                if lower {
                    let constant = row.rhs.clone() / c;
                    let terms = row
                        .terms
                        .iter()
                        .filter(|(v, _)| *v != z)
                        .map(|(v, a)| (*v, -(a.clone() / c)))
                        .collect();
                    cands.push((Some(r), constant, terms));
                }
            }
            if !eligible {
                continue;
            }
            if let Some(l) = &self.lo[z] {
                cands.push((None, l.clone(), Vec::new()));
            }
            if cands.is_empty() {
                continue;
            }
            let mut dropped = vec![false; cands.len()];
            for s in 0..cands.len() {
                for r in 0..cands.len() {
                    if r == s || dropped[r] {
                        continue;
                    }
                    // does L_r - L_s ≥ 0 hold on the whole box?
                    let mut diff = cands[r].2.clone();
                    for (v, a) in &cands[s].2 {
                        add_term(&mut diff, *v, -a.clone());
                    }
                    let constant = cands[r].1.clone() - &cands[s].1;
                    if self.box_min(&constant, &diff).is_some_and(|m| !m.is_negative()) {
                        dropped[s] = true;
                        break;
                    }
                }
            }
            for (k, cand) in cands.iter().enumerate() {
                if dropped[k] {
                    changed = true;
                    match cand.0 {
                        Some(r) => self.rows[r] = None,
                        None => self.lo[z] = None,
                    }
                }
            }
            let live: Vec<usize> = (0..cands.len()).filter(|&k| !dropped[k]).collect();
            if live.len() == 1 {
                let (row, constant, terms) = cands.swap_remove(live[0]);
                if let Some(r) = row {
                    self.rows[r] = None;
                }
                self.lo[z] = None;
                self.eliminate(z, constant, terms);
                changed = true;
            }
        }
        Ok(changed)
    }
}

fn flip(r: Relation) -> Relation {
    match r {
        Relation::Le => Relation::Ge,
        Relation::Eq => Relation::Eq,
        Relation::Ge => Relation::Le,
    }
}

/// Presolves `model` under the given bounds; `None` if the node is infeasible.
pub(crate) fn presolve<T: Scalar>(model: &MipModel<T>, lo: Vec<Option<T>>, hi: Vec<Option<T>>) -> Option<Reduced<T>> {
    let n = model.num_vars();
    let mut st = State {
        rows: model
            .constraints
            .iter()
            .map(|c| {
                let mut terms = Vec::with_capacity(c.terms.len());
                for (v, a) in &c.terms {
                    add_term(&mut terms, *v, a.clone());
                }
                Some(Row {
                    terms,
                    relation: c.relation,
                    rhs: c.rhs.clone(),
                })
            })
            .collect(),
        lo,
        hi,
        integer: model.vars.iter().map(|v| v.integer).collect(),
        active: vec![true; n],
        obj: model.objective.clone(),
        obj_const: T::zero(),
        elims: Vec::new(),
    };
    for v in 0..n {
        if st.integer[v] {
            if let Some(l) = st.lo[v].clone() {
                st.lo[v] = Some(ceil(&l));
            }
            if let Some(h) = st.hi[v].clone() {
                st.hi[v] = Some(floor(&h));
            }
        }
        if let (Some(l), Some(h)) = (&st.lo[v], &st.hi[v]) {
            if l > h {
                return None;
            }
        }
    }
    loop {
        let step = (|| -> Step {
            let mut c = st.fix_settled()?;
            c |= st.process_rows()?;
            if !c {
                c |= st.implied_bounds()?;
            }
            if !c {
                c |= st.envelopes()?;
            }
            Ok(c)
        })();
        match step {
            Err(Infeasible) => return None,
            Ok(false) => break,
            Ok(true) => {}
        }
    }

    let columns: Vec<usize> = (0..n).filter(|&v| st.active[v]).collect();
    let mut index = vec![usize::MAX; n];
    for (c, &v) in columns.iter().enumerate() {
        index[v] = c;
    }
    let mut lp = LinearProgram::new(model.sense, columns.iter().map(|&v| st.obj[v].clone()).collect());
    for (c, &v) in columns.iter().enumerate() {
        lp.bounds[c] = Bounds {
            lower: st.lo[v].clone(),
            upper: st.hi[v].clone(),
        };
    }
    for row in st.rows.into_iter().flatten() {
        let mut coeffs = vec![T::zero(); columns.len()];
        for (v, a) in row.terms {
            coeffs[index[v]] = a;
        }
        lp.add_constraint(coeffs, row.relation, row.rhs);
    }
    Some(Reduced {
        lp,
        columns,
        objective_constant: st.obj_const,
        elims: st.elims,
        num_vars: n,
    })
}
