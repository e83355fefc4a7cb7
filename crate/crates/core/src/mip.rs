//! Mixed-integer models for possible/necessary winners in (weak) tournament games.
//!
//! Binary pair `x⁺ᵢⱼ, x⁻ᵢⱼ` encodes `w(i,j) = x⁺ᵢⱼ − x⁻ᵢⱼ`, `pⱼ` is the column
//! player's equilibrium mix and `zᵢⱼ` linearizes `w(i,j)·pⱼ` with big-M 2.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::incomplete::{CompletionAssignment, QueryResult, QueryStats};
use crate::lp::{Relation, Sense};
use crate::matrix::{is_quasi_strict, EquilibriumResult, Player, Strategy};
use crate::rational::Rational;
use crate::scalar::Scalar;
use crate::tournament::{Digraph, Edge, IncompleteTournament, IncompleteWeakTournament};

mod bnb;
mod presolve;

pub use bnb::{branch_and_bound, BnbOptions, Branch, BranchAndBoundResult, NodeRecord};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MipVar<T> {
    pub name: String,
    pub lower: Option<T>,
    pub upper: Option<T>,
    pub integer: bool,
}

/// Sparse linear constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MipConstraint<T> {
    pub name: String,
    pub terms: Vec<(usize, T)>,
    pub relation: Relation,
    pub rhs: T,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MipModel<T> {
    pub sense: Sense,
    pub objective: Vec<T>,
    pub vars: Vec<MipVar<T>>,
    pub constraints: Vec<MipConstraint<T>>,
}

impl<T: Scalar> MipModel<T> {
    pub fn new(sense: Sense) -> Self {
        MipModel {
            sense,
            objective: Vec::new(),
            vars: Vec::new(),
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn add_var(&mut self, name: impl Into<String>, lower: Option<T>, upper: Option<T>, integer: bool) -> usize {
        self.vars.push(MipVar {
            name: name.into(),
            lower,
            upper,
            integer,
        });
        self.objective.push(T::zero());
        self.vars.len() - 1
    }

    pub fn add_binary(&mut self, name: impl Into<String>) -> usize {
        self.add_var(name, Some(T::zero()), Some(T::one()), true)
    }

    pub fn add_constraint(&mut self, name: impl Into<String>, terms: Vec<(usize, T)>, relation: Relation, rhs: T) {
        self.constraints.push(MipConstraint {
            name: name.into(),
            terms,
            relation,
            rhs,
        });
    }

    pub fn validate(&self) -> Result<()> {
        if self.objective.len() != self.vars.len() {
            return Err(Error::input("objective length differs from variable count"));
        }
        for c in &self.constraints {
            if c.terms.iter().any(|(v, _)| *v >= self.vars.len()) {
                return Err(Error::input(format!("constraint {} references an unknown variable", c.name)));
            }
        }
        for v in &self.vars {
            if let (Some(l), Some(u)) = (&v.lower, &v.upper) {
                if l > u {
                    return Err(Error::input(format!("variable {} has lower bound above upper bound", v.name)));
                }
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, x: &[T]) -> T {
        self.objective.iter().zip(x).fold(T::zero(), |acc, (c, v)| acc + c.clone() * v)
    }

    /// Exact feasibility, including integrality.
    pub fn is_feasible(&self, x: &[T]) -> bool {
        if x.len() != self.vars.len() {
            return false;
        }
        let bounds_ok = self.vars.iter().zip(x).all(|(v, xv)| {
            v.lower.as_ref().map_or(true, |l| xv >= l)
                && v.upper.as_ref().map_or(true, |u| xv <= u)
                && (!v.integer || xv.is_integer())
        });
        bounds_ok
            && self.constraints.iter().all(|c| {
                let lhs = c.terms.iter().fold(T::zero(), |acc, (v, a)| acc + a.clone() * &x[*v]);
                c.relation.holds(&lhs, &c.rhs)
            })
    }

    /// Plain-text dump: one variable and one constraint per line, exact rationals.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let sense = match self.sense {
            Sense::Maximize => "maximize",
            Sense::Minimize => "minimize",
        };
        let _ = write!(s, "{sense}");
        for (v, c) in self.objective.iter().enumerate() {
            if !c.is_zero() {
                let _ = write!(s, " {c} {}", self.vars[v].name);
            }
        }
        s.push('\n');
        for v in &self.vars {
            let fmt_bound = |b: &Option<T>| b.as_ref().map_or("inf".to_string(), |x| x.to_string());
            let lo = v.lower.as_ref().map_or("-inf".to_string(), |x| x.to_string());
            let kind = if v.integer { "integer" } else { "continuous" };
            let _ = writeln!(s, "var {} {kind} {lo} {}", v.name, fmt_bound(&v.upper));
        }
        for c in &self.constraints {
            let _ = write!(s, "subject to {}:", c.name);
            for (v, a) in &c.terms {
                let _ = write!(s, " {a} {}", self.vars[*v].name);
            }
            let rel = match c.relation {
                Relation::Le => "<=",
                Relation::Eq => "=",
                Relation::Ge => ">=",
            };
            let _ = writeln!(s, " {rel} {}", c.rhs);
        }
        s
    }
}

/// Variable layout of a tournament model on `n` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TournamentLayout {
    pub n: usize,
    pub target: usize,
}

impl TournamentLayout {
    fn pair(&self, i: usize, j: usize) -> usize {
        debug_assert!(i != j);
        i * (self.n - 1) + if j < i { j } else { j - 1 }
    }

    pub fn num_binaries(&self) -> usize {
        2 * self.n * (self.n - 1)
    }

    pub fn xpos(&self, i: usize, j: usize) -> usize {
        2 * self.pair(i, j)
    }

    pub fn xneg(&self, i: usize, j: usize) -> usize {
        2 * self.pair(i, j) + 1
    }

    pub fn p(&self, j: usize) -> usize {
        self.num_binaries() + j
    }

    pub fn z(&self, i: usize, j: usize) -> usize {
        self.num_binaries() + self.n + i * self.n + j
    }
}

/// A built model together with its layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TournamentMip {
    pub model: MipModel<Rational>,
    pub layout: TournamentLayout,
    /// Number of binaries not fixed by a specified entry.
    pub free_binaries: usize,
}

fn build(d: &Digraph, target: usize, sense: Sense, strict: bool) -> Result<TournamentMip> {
    let n = d.len();
    if target >= n {
        return Err(Error::input(format!("vertex index {} out of range", target + 1)));
    }
    let lay = TournamentLayout { n, target };
    let one = || Rational::from(1);
    let two = || Rational::from(2);
    let mut m = MipModel::new(sense);
    let name = |v: usize| d.label(v).to_string();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                m.add_binary(format!("xpos[{},{}]", name(i), name(j)));
                m.add_binary(format!("xneg[{},{}]", name(i), name(j)));
            }
        }
    }
    for j in 0..n {
        m.add_var(format!("p[{}]", name(j)), Some(Rational::from(0)), None, false);
    }
    for i in 0..n {
        for j in 0..n {
            m.add_var(format!("z[{},{}]", name(i), name(j)), None, None, false);
        }
    }
    m.objective[lay.p(target)] = one();

    let mut free_binaries = 0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let tag = format!("{},{}", name(i), name(j));
            m.add_constraint(
                format!("sym[{tag}]"),
                vec![(lay.xneg(i, j), one()), (lay.xpos(j, i), -one())],
                Relation::Eq,
                Rational::from(0),
            );
            m.add_constraint(
                format!("excl[{tag}]"),
                vec![(lay.xpos(i, j), one()), (lay.xneg(i, j), one())],
                if strict { Relation::Eq } else { Relation::Le },
                one(),
            );
            match d.edge(i, j) {
                Edge::Win => m.add_constraint(format!("fix[{tag}]"), vec![(lay.xpos(i, j), one())], Relation::Eq, one()),
                Edge::Loss => m.add_constraint(format!("fix[{tag}]"), vec![(lay.xneg(i, j), one())], Relation::Eq, one()),
                Edge::Tie => {
                    if strict {
                        return Err(Error::input(format!("tie between {} and {} in a tournament", name(i), name(j))));
                    }
                    m.add_constraint(format!("fixpos[{tag}]"), vec![(lay.xpos(i, j), one())], Relation::Eq, Rational::from(0));
                    m.add_constraint(format!("fixneg[{tag}]"), vec![(lay.xneg(i, j), one())], Relation::Eq, Rational::from(0));
                }
                Edge::Unspecified => free_binaries += 2,
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let tag = format!("{},{}", name(i), name(j));
            let z = lay.z(i, j);
            let p = lay.p(j);
            // z ≥ p − 2(1 − x⁺),  z ≥ −p − 2(1 − x⁻),  z ≥ −2x⁺ − 2x⁻; the diagonal has x = 0
            let (mut r1, mut r2, mut r3) = (
                vec![(z, one()), (p, -one())],
                vec![(z, one()), (p, one())],
                vec![(z, one())],
            );
            if i != j {
                r1.push((lay.xpos(i, j), -two()));
                r2.push((lay.xneg(i, j), -two()));
                r3.push((lay.xpos(i, j), two()));
                r3.push((lay.xneg(i, j), two()));
            }
            m.add_constraint(format!("zpos[{tag}]"), r1, Relation::Ge, -two());
            m.add_constraint(format!("zneg[{tag}]"), r2, Relation::Ge, -two());
            m.add_constraint(format!("zzero[{tag}]"), r3, Relation::Ge, Rational::from(0));
        }
    }
    for i in 0..n {
        m.add_constraint(
            format!("row[{}]", name(i)),
            (0..n).map(|j| (lay.z(i, j), one())).collect(),
            Relation::Le,
            Rational::from(0),
        );
    }
    m.add_constraint("simplex", (0..n).map(|j| (lay.p(j), one())).collect(), Relation::Eq, one());
    Ok(TournamentMip {
        model: m,
        layout: lay,
        free_binaries,
    })
}

/// Maximize `p_k` over completions of `w` and their equilibria.
pub fn build_weak_tournament_mip(w: &IncompleteWeakTournament, k: usize) -> Result<TournamentMip> {
    build(w.as_digraph(), k, Sense::Maximize, false)
}

/// The tournament variant with exclusivity as equalities.
pub fn build_tournament_mip(t: &IncompleteTournament, k: usize, sense: Sense) -> Result<TournamentMip> {
    build(t.as_digraph(), k, sense, true)
}

/// Decoded incumbent: completion and equilibrium mix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecodedSolution {
    /// `w(i,j)` for every ordered pair.
    pub payoffs: Vec<Vec<i64>>,
    pub p: Vec<Rational>,
}

impl TournamentMip {
    pub fn decode(&self, x: &[Rational]) -> DecodedSolution {
        let n = self.layout.n;
        let lay = &self.layout;
        let payoffs = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            0
                        } else {
                            let w = x[lay.xpos(i, j)].clone() - &x[lay.xneg(i, j)];
                            debug_assert!(w.is_integer());
                            w.to_i64().expect("integral incumbent")
                        }
                    })
                    .collect()
            })
            .collect();
        DecodedSolution {
            payoffs,
            p: (0..n).map(|j| x[lay.p(j)].clone()).collect(),
        }
    }
}

/// Options for the MIP-backed queries.
#[derive(Debug, Clone, Default)]
pub struct MipQueryOptions {
    /// Solve to the exact optimum instead of stopping once the sign is known.
    pub exact_optimum: bool,
    pub deadline: Option<Instant>,
}

impl MipQueryOptions {
    pub fn with_timeout(timeout: Duration) -> Self {
        MipQueryOptions {
            exact_optimum: false,
            deadline: Some(Instant::now() + timeout),
        }
    }
}

/// Outcome of a MIP query, with the exact optimum when it was computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MipQueryResult {
    pub query: QueryResult,
    pub optimum: Option<Rational>,
    pub decoded: Option<DecodedSolution>,
}

fn run_query(mip: &TournamentMip, d: &Digraph, opts: &MipQueryOptions) -> Result<MipQueryResult> {
    let start = Instant::now();
    let bnb_opts = BnbOptions {
        threshold: if opts.exact_optimum { None } else { Some(Rational::from(0)) },
        deadline: opts.deadline,
        trace: false,
    };
    let res = branch_and_bound(&mip.model, &bnb_opts)?;
    let positive = res.objective.as_ref().is_some_and(|o| o.is_positive());
    let answer = match mip.model.sense {
        // possible: some integral solution with p_k > 0
        Sense::Maximize => positive,
        // necessary: no integral solution with p_k ≤ 0
        Sense::Minimize => res.objective.is_none() || positive,
    };
    let decoded = res.incumbent.as_ref().map(|x| mip.decode(x));
    // the witness is the incumbent on the side that decides the answer
    let witness_side = match mip.model.sense {
        Sense::Maximize => answer,
        Sense::Minimize => !answer,
    };
    let (witness, equilibrium) = match (&decoded, witness_side) {
        (Some(dec), true) => (Some(assignment_from(d, dec)), Some(equilibrium_from(dec)?)),
        _ => (None, None),
    };
    Ok(MipQueryResult {
        query: QueryResult {
            answer,
            witness,
            equilibrium,
            stats: QueryStats {
                completions: 0,
                lp_solves: res.lp_solves,
                bnb_nodes: res.nodes,
                wall: start.elapsed(),
            },
        },
        optimum: if res.proven_optimal { res.objective } else { None },
        decoded,
    })
}

fn assignment_from(d: &Digraph, dec: &DecodedSolution) -> CompletionAssignment {
    let mut a = CompletionAssignment::default();
    let n = d.len();
    for i in 0..n {
        for j in 0..i {
            if d.edge(i, j) == Edge::Unspecified {
                a.choices.push(((i, j), Rational::from(dec.payoffs[i][j])));
            }
        }
    }
    a
}

fn equilibrium_from(dec: &DecodedSolution) -> Result<EquilibriumResult<Rational>> {
    let rows: Vec<Vec<Rational>> = dec
        .payoffs
        .iter()
        .map(|r| r.iter().map(|&x| Rational::from(x)).collect())
        .collect();
    let g = crate::matrix::MatrixGame::new_symmetric(rows)?;
    let row = Strategy {
        player: Player::Row,
        probabilities: dec.p.clone(),
    };
    let column = Strategy {
        player: Player::Column,
        probabilities: dec.p.clone(),
    };
    let value = Rational::from(0);
    let quasi_strict = is_quasi_strict(&g, &row, &column, &value);
    Ok(EquilibriumResult {
        value,
        row,
        column,
        quasi_strict,
    })
}

/// Possible ES winner in an incomplete weak tournament via the MIP.
pub fn mip_possible_es(w: &IncompleteWeakTournament, k: usize, opts: &MipQueryOptions) -> Result<MipQueryResult> {
    let mip = build_weak_tournament_mip(w, k)?;
    run_query(&mip, w.as_digraph(), opts)
}

/// Not available: the model ranges over all equilibria, so `min p_k = 0`
/// does not refute membership in the quasi-strict support.
pub fn mip_necessary_es(_w: &IncompleteWeakTournament, _k: usize, _opts: &MipQueryOptions) -> Result<MipQueryResult> {
    Err(Error::unsupported(NECESSARY_ES_REASON))
}

pub const NECESSARY_ES_REASON: &str = "necessary ES winners in weak tournaments cannot be decided by the MIP: \
     weak tournaments may have several equilibria, some not quasi-strict, and the MIP optimizes over all of them, \
     so a completion with p_k = 0 does not show that k is avoidable; use the brute-force method";

/// Possible BP winner in an incomplete tournament (maximize `p_k`).
pub fn mip_possible_bp(t: &IncompleteTournament, k: usize, opts: &MipQueryOptions) -> Result<MipQueryResult> {
    let mip = build_tournament_mip(t, k, Sense::Maximize)?;
    run_query(&mip, t.as_digraph(), opts)
}

/// Necessary BP winner in an incomplete tournament (minimize `p_k`).
pub fn mip_necessary_bp(t: &IncompleteTournament, k: usize, opts: &MipQueryOptions) -> Result<MipQueryResult> {
    let mip = build_tournament_mip(t, k, Sense::Minimize)?;
    run_query(&mip, t.as_digraph(), opts)
}
