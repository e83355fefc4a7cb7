//! Depth-first branch and bound over exact LP relaxations.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::lp::{solve_lp, LpOutcome, Sense};
use crate::scalar::Scalar;

use super::presolve::presolve;
use super::MipModel;

#[derive(Debug, Clone, Default)]
pub struct BnbOptions<T> {
    /// Decision mode: stop once the sign question relative to this value is settled.
    pub threshold: Option<T>,
    pub deadline: Option<Instant>,
    /// Record every evaluated node.
    pub trace: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeRecord<T> {
    pub id: usize,
    pub parent: Option<usize>,
    /// Branching decisions along the path from the root.
    pub branches: Vec<Branch>,
    /// LP relaxation optimum; `None` if infeasible.
    pub bound: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchAndBoundResult<T> {
    /// Best integral objective found.
    pub objective: Option<T>,
    /// Best integral point found.
    pub incumbent: Option<Vec<T>>,
    /// The search finished without a threshold cut, so `objective` is the optimum
    /// (or the model is infeasible when it is `None`).
    pub proven_optimal: bool,
    /// The threshold was crossed and the search stopped early.
    pub early_exit: bool,
    pub nodes: u64,
    pub lp_solves: u64,
    pub trace: Vec<NodeRecord<T>>,
}

/// `var ≤ value` (down) or `var ≥ value` (up).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Branch {
    pub var: usize,
    pub value: i64,
    pub up: bool,
}

struct Node {
    id: usize,
    parent: Option<usize>,
    branches: Vec<Branch>,
}

fn better<T: Scalar>(sense: Sense, a: &T, b: &T) -> bool {
    match sense {
        Sense::Maximize => a > b,
        Sense::Minimize => a < b,
    }
}

/// Exact optimum over integral values of the integer variables.
///
/// Branching picks the most fractional integer variable (lowest index on ties)
/// and explores the upper branch first.
pub fn branch_and_bound<T: Scalar>(model: &MipModel<T>, opts: &BnbOptions<T>) -> Result<BranchAndBoundResult<T>> {
    model.validate()?;
    let sense = model.sense;
    let mut result = BranchAndBoundResult {
        objective: None,
        incumbent: None,
        proven_optimal: true,
        early_exit: false,
        nodes: 0,
        lp_solves: 0,
        trace: Vec::new(),
    };
    let mut next_id = 1;
    let mut stack = vec![Node {
        id: 0,
        parent: None,
        branches: Vec::new(),
    }];
    while let Some(node) = stack.pop() {
        if opts.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(Error::Timeout);
        }
        result.nodes += 1;
        let mut lo: Vec<Option<T>> = model.vars.iter().map(|v| v.lower.clone()).collect();
        let mut hi: Vec<Option<T>> = model.vars.iter().map(|v| v.upper.clone()).collect();
        for b in &node.branches {
            if b.up {
                lo[b.var] = Some(T::from_int(b.value));
            } else {
                hi[b.var] = Some(T::from_int(b.value));
            }
        }
        let evaluated = match presolve(model, lo, hi) {
            None => None,
            Some(reduced) => {
                result.lp_solves += 1;
                match solve_lp(&reduced.lp)? {
                    LpOutcome::Optimal { solution, objective } => {
                        Some((reduced.postsolve(&solution), objective + &reduced.objective_constant))
                    }
                    LpOutcome::Infeasible => None,
                    LpOutcome::Unbounded => {
                        return Err(Error::unsupported("LP relaxation is unbounded; branch and bound needs bounded relaxations"))
                    }
                }
            }
        };
        if opts.trace {
            result.trace.push(NodeRecord {
                id: node.id,
                parent: node.parent,
                branches: node.branches.clone(),
                bound: evaluated.as_ref().map(|e| e.1.clone()),
            });
        }
        let Some((x, bound)) = evaluated else { continue };

        // prune by threshold or incumbent
        if let Some(t) = &opts.threshold {
            let hopeless = match sense {
                Sense::Maximize => bound <= *t,
                Sense::Minimize => bound > *t,
            };
            if hopeless {
                result.proven_optimal = false;
                continue;
            }
        }
        if let Some(best) = &result.objective {
            if !better(sense, &bound, best) {
                continue;
            }
        }

        let branch_var = most_fractional(model, &x);
        match branch_var {
            None => {
                result.objective = Some(bound.clone());
                result.incumbent = Some(x);
                if let Some(t) = &opts.threshold {
                    let decided = match sense {
                        Sense::Maximize => bound > *t,
                        Sense::Minimize => bound <= *t,
                    };
                    if decided {
                        result.early_exit = true;
                        result.proven_optimal = stack.is_empty();
                        return Ok(result);
                    }
                }
            }
            Some(v) => {
                let down = x[v].floor().to_i64().expect("integer variable within i64 range");
                // pushed last, popped first: the upper branch
                for (value, up) in [(down, false), (down + 1, true)] {
                    let mut branches = node.branches.clone();
                    branches.push(Branch { var: v, value, up });
                    stack.push(Node {
                        id: next_id,
                        parent: Some(node.id),
                        branches,
                    });
                    next_id += 1;
                }
            }
        }
    }
    Ok(result)
}

fn most_fractional<T: Scalar>(model: &MipModel<T>, x: &[T]) -> Option<usize> {
    let half = T::one() / T::from_int(2);
    let mut best: Option<(usize, T)> = None;
    for (v, var) in model.vars.iter().enumerate() {
        if !var.integer {
            continue;
        }
        let frac = x[v].clone() - x[v].floor();
        if frac.is_zero() {
            continue;
        }
        let dist = if frac > half { T::one() - &frac } else { frac };
        if best.as_ref().map_or(true, |(_, d)| dist > *d) {
            best = Some((v, dist));
        }
    }
    best.map(|b| b.0)
}
