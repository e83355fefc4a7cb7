//! Complete two-player zero-sum matrix games.
//!
//! Equilibrium quantities are computed through exact linear programs:
//! the value and maximin strategies from the usual maximin LP, essential-set
//! membership from one "maximize the action's probability over the optimal
//! strategy polytope" LP per action, and quasi-strict equilibria by combining
//! those solutions with a slack-maximizing LP.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::{solve_lp, LinearProgram, LpOutcome, Relation};
use crate::scalar::Scalar;

pub mod oracle;

pub use oracle::essential_set_oracle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Row,
    Column,
}

/// A pure action of one of the two players.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    Row(usize),
    Column(usize),
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Row(i) => write!(f, "row {}", i + 1),
            Action::Column(j) => write!(f, "column {}", j + 1),
        }
    }
}

/// Payoff matrix for the row player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixGame<T> {
    rows: usize,
    cols: usize,
    payoff: Vec<T>,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    symmetric: bool,
}

pub(crate) fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

impl<T: Scalar> MatrixGame<T> {
    pub fn new(payoffs: Vec<Vec<T>>) -> Result<Self> {
        let rows = payoffs.len();
        if rows == 0 {
            return Err(Error::input("matrix game needs at least one row"));
        }
        let cols = payoffs[0].len();
        if cols == 0 {
            return Err(Error::input("matrix game needs at least one column"));
        }
        if let Some(i) = payoffs.iter().position(|r| r.len() != cols) {
            return Err(Error::input(format!(
                "row {} has {} entries, expected {cols}",
                i + 1,
                payoffs[i].len()
            )));
        }
        Ok(MatrixGame {
            rows,
            cols,
            payoff: payoffs.into_iter().flatten().collect(),
            row_labels: default_labels(rows),
            col_labels: default_labels(cols),
            symmetric: false,
        })
    }

    /// Builds a game flagged symmetric, checking `payoff(i,j) = -payoff(j,i)`.
    pub fn new_symmetric(payoffs: Vec<Vec<T>>) -> Result<Self> {
        let mut g = Self::new(payoffs)?;
        if g.rows != g.cols {
            return Err(Error::input(format!(
                "symmetric game must be square, got {}x{}",
                g.rows, g.cols
            )));
        }
        for i in 0..g.rows {
            for j in i..g.cols {
                if *g.payoff(i, j) != -g.payoff(j, i).clone() {
                    return Err(Error::input(format!(
                        "symmetry violated at ({}, {}): {} vs {}",
                        i + 1,
                        j + 1,
                        g.payoff(i, j),
                        g.payoff(j, i)
                    )));
                }
            }
        }
        g.symmetric = true;
        Ok(g)
    }

    pub fn with_labels(mut self, row_labels: Vec<String>, col_labels: Vec<String>) -> Result<Self> {
        if row_labels.len() != self.rows || col_labels.len() != self.cols {
            return Err(Error::input("label count does not match game dimensions"));
        }
        if self.symmetric && row_labels != col_labels {
            return Err(Error::input("symmetric game needs identical row and column labels"));
        }
        self.row_labels = row_labels;
        self.col_labels = col_labels;
        Ok(self)
    }

    /// Unchecked constructor for callers that already enforce the invariants.
    pub(crate) fn from_parts(
        rows: usize,
        cols: usize,
        payoff: Vec<T>,
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        symmetric: bool,
    ) -> Self {
        debug_assert_eq!(payoff.len(), rows * cols);
        MatrixGame { rows, cols, payoff, row_labels, col_labels, symmetric }
    }

    /// Looks up an action by label; see [`resolve_action`].
    pub fn action(&self, label: &str) -> Result<Action> {
        resolve_action(&self.row_labels, &self.col_labels, self.symmetric, label)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn payoff(&self, i: usize, j: usize) -> &T {
        &self.payoff[i * self.cols + j]
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn label(&self, action: Action) -> &str {
        match action {
            Action::Row(i) => &self.row_labels[i],
            Action::Column(j) => &self.col_labels[j],
        }
    }

    /// Payoff matrix as nested rows.
    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.payoff.chunks(self.cols).map(|r| r.to_vec()).collect()
    }

    /// Row player's expected payoff for pure row `i` against column mix `q`.
    pub fn row_payoff(&self, i: usize, q: &[T]) -> T {
        crate::lp::dot(&self.payoff[i * self.cols..(i + 1) * self.cols], q)
    }

    /// Row player's expected payoff for row mix `p` against pure column `j`.
    pub fn col_payoff(&self, p: &[T], j: usize) -> T {
        let mut acc = T::zero();
        for (i, pi) in p.iter().enumerate() {
            let a = self.payoff(i, j);
            if !pi.is_zero() && !a.is_zero() {
                let mut t = pi.clone();
                t *= a;
                acc += &t;
            }
        }
        acc
    }

    pub fn expected_payoff(&self, p: &[T], q: &[T]) -> T {
        let mut acc = T::zero();
        for (i, pi) in p.iter().enumerate() {
            if !pi.is_zero() {
                let mut t = self.row_payoff(i, q);
                t *= pi;
                acc += &t;
            }
        }
        acc
    }

    pub fn num_actions(&self, player: Player) -> usize {
        match player {
            Player::Row => self.rows,
            Player::Column => self.cols,
        }
    }
}

/// Resolves an action label. `row:` and `col:` prefixes select a side, and
/// plain labels must be unambiguous; in symmetric games they mean the row action.
pub fn resolve_action(row_labels: &[String], col_labels: &[String], symmetric: bool, label: &str) -> Result<Action> {
    if let Some(l) = label.strip_prefix("row:") {
        return row_labels
            .iter()
            .position(|x| x == l)
            .map(Action::Row)
            .ok_or_else(|| Error::input(format!("unknown row action '{l}'")));
    }
    if let Some(l) = label.strip_prefix("col:") {
        return col_labels
            .iter()
            .position(|x| x == l)
            .map(Action::Column)
            .ok_or_else(|| Error::input(format!("unknown column action '{l}'")));
    }
    let row = row_labels.iter().position(|x| x == label);
    if symmetric {
        return row.map(Action::Row).ok_or_else(|| Error::input(format!("unknown action '{label}'")));
    }
    let col = col_labels.iter().position(|x| x == label);
    match (row, col) {
        (Some(i), None) => Ok(Action::Row(i)),
        (None, Some(j)) => Ok(Action::Column(j)),
        (Some(_), Some(_)) => Err(Error::input(format!(
            "action '{label}' names both a row and a column; prefix it with row: or col:"
        ))),
        (None, None) => Err(Error::input(format!("unknown action '{label}'"))),
    }
}

/// A mixed strategy of one player.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Strategy<T> {
    pub player: Player,
    pub probabilities: Vec<T>,
}

impl<T: Scalar> Strategy<T> {
    pub fn new(player: Player, probabilities: Vec<T>) -> Result<Self> {
        if probabilities.iter().any(|p| p.is_negative()) {
            return Err(Error::input("strategy has a negative probability"));
        }
        let total = probabilities.iter().fold(T::zero(), |acc, p| acc + p);
        if !total.is_one() {
            return Err(Error::input(format!("strategy probabilities sum to {total}, not 1")));
        }
        Ok(Strategy { player, probabilities })
    }

    pub fn pure(player: Player, n: usize, action: usize) -> Self {
        let mut probabilities = vec![T::zero(); n];
        probabilities[action] = T::one();
        Strategy { player, probabilities }
    }

    pub fn uniform(player: Player, n: usize) -> Self {
        let p = T::one() / T::from_int(n as i64);
        Strategy {
            player,
            probabilities: vec![p; n],
        }
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.probabilities
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_positive())
            .map(|(i, _)| i)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquilibriumResult<T> {
    pub value: T,
    pub row: Strategy<T>,
    pub column: Strategy<T>,
    pub quasi_strict: bool,
}

/// Essential actions of each player.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct EssentialSet {
    pub rows: BTreeSet<usize>,
    pub cols: BTreeSet<usize>,
}

impl EssentialSet {
    pub fn contains(&self, action: Action) -> bool {
        match action {
            Action::Row(i) => self.rows.contains(&i),
            Action::Column(j) => self.cols.contains(&j),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquilibriumCheck {
    Yes,
    /// A pure deviation that strictly improves on the profile.
    No { violating: Action },
}

/// Counts LP solves for callers that report work statistics.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Work {
    pub lp_solves: u64,
}

fn solve_counted<T: Scalar>(lp: &LinearProgram<T>, work: &mut Work) -> LpOutcome<T> {
    work.lp_solves += 1;
    solve_lp(lp).expect("internally built LP is well formed")
}

fn expect_optimal<T>(out: LpOutcome<T>, what: &str) -> (Vec<T>, T) {
    match out {
        LpOutcome::Optimal { solution, objective } => (solution, objective),
        other => panic!("{what}: LP not optimal ({})", outcome_name(&other)),
    }
}

fn outcome_name<T>(o: &LpOutcome<T>) -> &'static str {
    match o {
        LpOutcome::Optimal { .. } => "optimal",
        LpOutcome::Infeasible => "infeasible",
        LpOutcome::Unbounded => "unbounded",
    }
}

/// Maximin LP for `player`; returns (strategy, value).
fn maximin_lp<T: Scalar>(g: &MatrixGame<T>, player: Player, work: &mut Work) -> (Vec<T>, T) {
    let k = g.num_actions(player);
    // variables: strategy (k), then the value unless it is known to be 0
    let free_value = !g.symmetric;
    let width = k + usize::from(free_value);
    let mut obj = vec![T::zero(); width];
    if free_value {
        obj[k] = T::one();
    }
    let mut lp = match player {
        Player::Row => LinearProgram::maximize(obj),
        Player::Column => LinearProgram::minimize(obj),
    };
    if free_value {
        lp.set_bounds(k, None, None);
    }
    let (lines, rel) = match player {
        Player::Row => (g.cols, Relation::Ge),
        Player::Column => (g.rows, Relation::Le),
    };
    for l in 0..lines {
        let mut c: Vec<T> = match player {
            Player::Row => (0..g.rows).map(|i| g.payoff(i, l).clone()).collect(),
            Player::Column => (0..g.cols).map(|j| g.payoff(l, j).clone()).collect(),
        };
        if free_value {
            c.push(-T::one());
        }
        lp.add_constraint(c, rel, T::zero());
    }
    let mut ones = vec![T::one(); k];
    ones.resize(width, T::zero());
    lp.add_constraint(ones, Relation::Eq, T::one());
    let (mut sol, value) = expect_optimal(solve_counted(&lp, work), "maximin");
    sol.truncate(k);
    (sol, value)
}

pub(crate) fn value_counted<T: Scalar>(g: &MatrixGame<T>, work: &mut Work) -> T {
    if g.symmetric {
        return T::zero();
    }
    maximin_lp(g, Player::Row, work).1
}

/// Exact value of the game.
pub fn game_value<T: Scalar>(g: &MatrixGame<T>) -> T {
    value_counted(g, &mut Work::default())
}

/// A strategy guaranteeing the value against every opponent pure action.
pub fn maximin_strategy<T: Scalar>(g: &MatrixGame<T>, player: Player) -> Strategy<T> {
    let (probabilities, _) = maximin_lp(g, player, &mut Work::default());
    Strategy { player, probabilities }
}

/// Optimal-strategy polytope of `player` at value `v`, maximizing the probability of `action`.
fn max_probability_lp<T: Scalar>(g: &MatrixGame<T>, player: Player, action: usize, v: &T) -> LinearProgram<T> {
    let k = g.num_actions(player);
    let mut obj = vec![T::zero(); k];
    obj[action] = T::one();
    let mut lp = LinearProgram::maximize(obj);
    match player {
        Player::Row => {
            for j in 0..g.cols {
                let c = (0..g.rows).map(|i| g.payoff(i, j).clone()).collect();
                lp.add_constraint(c, Relation::Ge, v.clone());
            }
        }
        Player::Column => {
            for i in 0..g.rows {
                let c = (0..g.cols).map(|j| g.payoff(i, j).clone()).collect();
                lp.add_constraint(c, Relation::Le, v.clone());
            }
        }
    }
    lp.add_constraint(vec![T::one(); k], Relation::Eq, T::one());
    lp
}

/// Whether a single action is essential, given the game value.
pub(crate) fn is_essential_with_value<T: Scalar>(g: &MatrixGame<T>, action: Action, v: &T, work: &mut Work) -> bool {
    let (player, idx) = match action {
        Action::Row(i) => (Player::Row, i),
        // in a symmetric game the column side mirrors the row side
        Action::Column(j) if g.symmetric => (Player::Row, j),
        Action::Column(j) => (Player::Column, j),
    };
    let lp = max_probability_lp(g, player, idx, v);
    let (_, best) = expect_optimal(solve_counted(&lp, work), "essential action");
    best.is_positive()
}

/// Whether `action` is played with positive probability in some equilibrium.
pub fn is_essential<T: Scalar>(g: &MatrixGame<T>, action: Action) -> Result<bool> {
    check_action(g, action)?;
    let mut work = Work::default();
    let v = value_counted(g, &mut work);
    Ok(is_essential_with_value(g, action, &v, &mut work))
}

pub(crate) fn check_action<T: Scalar>(g: &MatrixGame<T>, action: Action) -> Result<()> {
    let ok = match action {
        Action::Row(i) => i < g.rows,
        Action::Column(j) => j < g.cols,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::input(format!("{action} is out of range for a {}x{} game", g.rows, g.cols)))
    }
}

/// Essential actions of one player together with one maximizing solution per discovery.
fn essential_side<T: Scalar>(g: &MatrixGame<T>, player: Player, v: &T, work: &mut Work) -> (BTreeSet<usize>, Vec<Vec<T>>) {
    let k = g.num_actions(player);
    let mut essential = BTreeSet::new();
    let mut witnesses = Vec::new();
    for a in 0..k {
        if essential.contains(&a) {
            continue;
        }
        let lp = max_probability_lp(g, player, a, v);
        let (sol, best) = expect_optimal(solve_counted(&lp, work), "essential set");
        if best.is_positive() {
            essential.extend(sol.iter().enumerate().filter(|(_, p)| p.is_positive()).map(|(i, _)| i));
            witnesses.push(sol);
        }
    }
    (essential, witnesses)
}

pub(crate) fn essential_set_counted<T: Scalar>(g: &MatrixGame<T>, work: &mut Work) -> EssentialSet {
    let v = value_counted(g, work);
    let (rows, _) = essential_side(g, Player::Row, &v, work);
    let (cols, _) = essential_side(g, Player::Column, &v, work);
    EssentialSet { rows, cols }
}

/// The essential set, computed one LP per undiscovered action.
pub fn essential_set<T: Scalar>(g: &MatrixGame<T>) -> EssentialSet {
    essential_set_counted(g, &mut Work::default())
}

fn average<T: Scalar>(vectors: &[Vec<T>]) -> Vec<T> {
    let k = vectors[0].len();
    let count = T::from_int(vectors.len() as i64);
    (0..k)
        .map(|i| vectors.iter().fold(T::zero(), |acc, v| acc + &v[i]) / &count)
        .collect()
}

/// Maximizes the minimum strict gap on the opponent's inessential actions.
fn slack_lp<T: Scalar>(
    g: &MatrixGame<T>,
    player: Player,
    own_support: &BTreeSet<usize>,
    opp_essential: &BTreeSet<usize>,
    v: &T,
    work: &mut Work,
) -> Option<Vec<T>> {
    let k = g.num_actions(player);
    let opp = match player {
        Player::Row => g.cols,
        Player::Column => g.rows,
    };
    if opp_essential.len() == opp {
        return None;
    }
    // variables: strategy (k), gap
    let mut obj = vec![T::zero(); k + 1];
    obj[k] = T::one();
    let mut lp = LinearProgram::maximize(obj);
    lp.set_bounds(k, Some(T::zero()), Some(T::one()));
    for a in 0..k {
        if !own_support.contains(&a) {
            lp.set_bounds(a, Some(T::zero()), Some(T::zero()));
        }
    }
    for b in 0..opp {
        let mut c: Vec<T> = (0..k)
            .map(|a| match player {
                Player::Row => g.payoff(a, b).clone(),
                Player::Column => g.payoff(b, a).clone(),
            })
            .collect();
        let strict = !opp_essential.contains(&b);
        match player {
            Player::Row => {
                c.push(if strict { -T::one() } else { T::zero() });
                lp.add_constraint(c, Relation::Ge, v.clone());
            }
            Player::Column => {
                c.push(if strict { T::one() } else { T::zero() });
                lp.add_constraint(c, Relation::Le, v.clone());
            }
        }
    }
    let mut ones = vec![T::one(); k];
    ones.push(T::zero());
    lp.add_constraint(ones, Relation::Eq, T::one());
    let (mut sol, gap) = expect_optimal(solve_counted(&lp, work), "quasi-strict slack");
    debug_assert!(gap.is_positive(), "quasi-strict equilibria always exist");
    sol.truncate(k);
    Some(sol)
}

pub(crate) fn quasi_strict_counted<T: Scalar>(g: &MatrixGame<T>, work: &mut Work) -> EquilibriumResult<T> {
    let v = value_counted(g, work);
    let (es_rows, row_sols) = essential_side(g, Player::Row, &v, work);
    let (es_cols, col_sols) = essential_side(g, Player::Column, &v, work);
    let half = T::one() / T::from_int(2);
    let mix = |base: Vec<T>, slack: Option<Vec<T>>| match slack {
        None => base,
        Some(s) => base.iter().zip(&s).map(|(a, b)| (a.clone() + b) * &half).collect(),
    };
    let sigma = mix(average(&row_sols), slack_lp(g, Player::Row, &es_rows, &es_cols, &v, work));
    let tau = mix(average(&col_sols), slack_lp(g, Player::Column, &es_cols, &es_rows, &v, work));
    let row = Strategy { player: Player::Row, probabilities: sigma };
    let column = Strategy { player: Player::Column, probabilities: tau };
    let quasi_strict = is_quasi_strict(g, &row, &column, &v);
    EquilibriumResult { value: v, row, column, quasi_strict }
}

/// An equilibrium whose supports are exactly the essential sets, with every
/// unplayed action strictly worse than the value.
pub fn quasi_strict_equilibrium<T: Scalar>(g: &MatrixGame<T>) -> EquilibriumResult<T> {
    quasi_strict_counted(g, &mut Work::default())
}

pub(crate) fn is_quasi_strict<T: Scalar>(g: &MatrixGame<T>, row: &Strategy<T>, col: &Strategy<T>, v: &T) -> bool {
    if !matches!(is_equilibrium(g, row, col), Ok(EquilibriumCheck::Yes)) {
        return false;
    }
    let rs = row.support();
    let cs = col.support();
    (0..g.cols).filter(|j| !cs.contains(j)).all(|j| g.col_payoff(&row.probabilities, j) > *v)
        && (0..g.rows).filter(|i| !rs.contains(i)).all(|i| g.row_payoff(i, &col.probabilities) < *v)
}

/// Exact check of `u(σ,j) ≥ u(σ,τ) ≥ u(i,τ)` for all pure deviations.
pub fn is_equilibrium<T: Scalar>(g: &MatrixGame<T>, sigma: &Strategy<T>, tau: &Strategy<T>) -> Result<EquilibriumCheck> {
    if sigma.probabilities.len() != g.rows || tau.probabilities.len() != g.cols {
        return Err(Error::input(format!(
            "strategy dimensions {}x{} do not match a {}x{} game",
            sigma.probabilities.len(),
            tau.probabilities.len(),
            g.rows,
            g.cols
        )));
    }
    let u = g.expected_payoff(&sigma.probabilities, &tau.probabilities);
    for j in 0..g.cols {
        if g.col_payoff(&sigma.probabilities, j) < u {
            return Ok(EquilibriumCheck::No { violating: Action::Column(j) });
        }
    }
    for i in 0..g.rows {
        if g.row_payoff(i, &tau.probabilities) > u {
            return Ok(EquilibriumCheck::No { violating: Action::Row(i) });
        }
    }
    Ok(EquilibriumCheck::Yes)
}
