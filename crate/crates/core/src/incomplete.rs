//! Incompletely specified matrix games and exhaustive possible/necessary queries.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{
    self, default_labels, is_essential_with_value, quasi_strict_counted, value_counted, Action,
    EquilibriumResult, MatrixGame, Work,
};
use crate::rational::Rational;
use crate::Game;

/// Default enumeration guard: 2^32 completions.
pub const DEFAULT_COMPLETION_LIMIT: u64 = 1 << 32;

/// One payoff entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Entry {
    Value(Rational),
    /// Sorted, deduplicated, nonempty.
    Set(Vec<Rational>),
    /// Closed interval `[lo, hi]`.
    Interval(Rational, Rational),
}

impl Entry {
    pub fn value(v: impl Into<Rational>) -> Self {
        Entry::Value(v.into())
    }

    pub fn set(values: impl IntoIterator<Item = Rational>) -> Result<Self> {
        let mut v: Vec<Rational> = values.into_iter().collect();
        v.sort();
        v.dedup();
        if v.is_empty() {
            return Err(Error::input("payoff set must be nonempty"));
        }
        Ok(Entry::Set(v))
    }

    pub fn interval(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::input(format!("interval [{lo}, {hi}] has lo > hi")));
        }
        Ok(Entry::Interval(lo, hi))
    }

    /// `{-1, 0, 1}`.
    pub fn unknown_weak() -> Self {
        Entry::Set(vec![Rational::from(-1), Rational::zero(), Rational::one()])
    }

    /// `{-1, 1}`.
    pub fn unknown_strict() -> Self {
        Entry::Set(vec![Rational::from(-1), Rational::one()])
    }

    pub fn is_specified(&self) -> bool {
        matches!(self, Entry::Value(_))
    }

    pub fn contains(&self, x: &Rational) -> bool {
        match self {
            Entry::Value(v) => v == x,
            Entry::Set(s) => s.binary_search(x).is_ok(),
            Entry::Interval(lo, hi) => lo <= x && x <= hi,
        }
    }

    pub fn negated(&self) -> Entry {
        match self {
            Entry::Value(v) => Entry::Value(-v),
            Entry::Set(s) => Entry::Set(s.iter().rev().map(|x| -x).collect()),
            Entry::Interval(lo, hi) => Entry::Interval(-hi, -lo),
        }
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::Value(v) => write!(f, "{v}"),
            Entry::Set(s) => {
                write!(f, "{{")?;
                for (k, x) in s.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "}}")
            }
            Entry::Interval(lo, hi) => write!(f, "[{lo},{hi}]"),
        }
    }
}

/// A chosen value per unspecified coordinate.
///
/// For symmetric games each unordered pair appears once, keyed by its
/// lower-triangle coordinate `(i, j)` with `i > j`; the mirror is implied.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct CompletionAssignment {
    pub choices: Vec<((usize, usize), Rational)>,
}

impl CompletionAssignment {
    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    /// The chosen payoff at `(i, j)`, following the mirror for symmetric pairs.
    pub fn get(&self, i: usize, j: usize) -> Option<Rational> {
        for ((a, b), v) in &self.choices {
            if (*a, *b) == (i, j) {
                return Some(v.clone());
            }
        }
        for ((a, b), v) in &self.choices {
            if (*a, *b) == (j, i) {
                return Some(-v);
            }
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncompleteMatrixGame {
    rows: usize,
    cols: usize,
    entries: Vec<Entry>,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    symmetric: bool,
}

impl IncompleteMatrixGame {
    pub fn new(entries: Vec<Vec<Entry>>) -> Result<Self> {
        let rows = entries.len();
        if rows == 0 || entries[0].is_empty() {
            return Err(Error::input("game needs at least one row and one column"));
        }
        let cols = entries[0].len();
        if let Some(i) = entries.iter().position(|r| r.len() != cols) {
            return Err(Error::input(format!("row {} has {} entries, expected {cols}", i + 1, entries[i].len())));
        }
        let entries: Vec<Entry> = entries.into_iter().flatten().collect();
        for (k, e) in entries.iter().enumerate() {
            let bad = match e {
                Entry::Set(s) => s.is_empty() || s.windows(2).any(|w| w[0] >= w[1]),
                Entry::Interval(lo, hi) => lo > hi,
                Entry::Value(_) => false,
            };
            if bad {
                return Err(Error::input(format!(
                    "malformed entry at ({}, {}): {e}",
                    k / cols + 1,
                    k % cols + 1
                )));
            }
        }
        Ok(IncompleteMatrixGame {
            rows,
            cols,
            entries,
            row_labels: default_labels(rows),
            col_labels: default_labels(cols),
            symmetric: false,
        })
    }

    /// Builds a symmetric game; requires `entry(j,i) = -entry(i,j)` and a zero diagonal.
    pub fn new_symmetric(entries: Vec<Vec<Entry>>) -> Result<Self> {
        let mut g = Self::new(entries)?;
        if g.rows != g.cols {
            return Err(Error::input(format!("symmetric game must be square, got {}x{}", g.rows, g.cols)));
        }
        for i in 0..g.rows {
            if g.entry(i, i) != &Entry::Value(Rational::zero()) {
                return Err(Error::input(format!("symmetric game needs 0 on the diagonal at ({0}, {0})", i + 1)));
            }
            for j in i + 1..g.cols {
                if g.entry(j, i) != &g.entry(i, j).negated() {
                    return Err(Error::input(format!(
                        "symmetry violated at ({}, {}): {} vs {}",
                        i + 1,
                        j + 1,
                        g.entry(i, j),
                        g.entry(j, i)
                    )));
                }
            }
        }
        g.symmetric = true;
        Ok(g)
    }

    pub fn from_game(g: &Game) -> Self {
        IncompleteMatrixGame {
            rows: g.rows(),
            cols: g.cols(),
            entries: g.to_rows().into_iter().flatten().map(Entry::Value).collect(),
            row_labels: g.row_labels().to_vec(),
            col_labels: g.col_labels().to_vec(),
            symmetric: g.is_symmetric(),
        }
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

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn entry(&self, i: usize, j: usize) -> &Entry {
        &self.entries[i * self.cols + j]
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn action(&self, label: &str) -> Result<Action> {
        matrix::resolve_action(&self.row_labels, &self.col_labels, self.symmetric, label)
    }

    pub fn label(&self, action: Action) -> &str {
        match action {
            Action::Row(i) => &self.row_labels[i],
            Action::Column(j) => &self.col_labels[j],
        }
    }

    pub fn has_intervals(&self) -> bool {
        self.entries.iter().any(|e| matches!(e, Entry::Interval(..)))
    }

    /// Coordinates the enumeration ranges over, in enumeration order.
    pub fn free_coordinates(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.symmetric && i <= j {
                    continue;
                }
                if !self.entry(i, j).is_specified() {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Number of (symmetric) completions; errors on interval entries.
    pub fn completion_count(&self) -> Result<BigUint> {
        self.require_finite()?;
        let mut count = BigUint::one();
        for (i, j) in self.free_coordinates() {
            if let Entry::Set(s) = self.entry(i, j) {
                count *= s.len();
            }
        }
        Ok(count)
    }

    fn require_finite(&self) -> Result<()> {
        if self.has_intervals() {
            return Err(Error::input(
                "game has interval entries; apply canonicalize_intervals before enumerating completions",
            ));
        }
        Ok(())
    }

    fn choice_lists(&self) -> Result<Vec<((usize, usize), &[Rational])>> {
        self.require_finite()?;
        Ok(self
            .free_coordinates()
            .into_iter()
            .map(|(i, j)| match self.entry(i, j) {
                Entry::Set(s) => ((i, j), s.as_slice()),
                _ => unreachable!("free coordinates hold sets"),
            })
            .collect())
    }

    /// The completion selected by `assignment`.
    pub fn complete(&self, assignment: &CompletionAssignment) -> Result<Game> {
        let mut payoff: Vec<Option<Rational>> = self
            .entries
            .iter()
            .map(|e| match e {
                Entry::Value(v) => Some(v.clone()),
                _ => None,
            })
            .collect();
        for ((i, j), v) in &assignment.choices {
            let (i, j) = (*i, *j);
            if i >= self.rows || j >= self.cols || (self.symmetric && i <= j) {
                return Err(Error::input(format!("assignment coordinate ({}, {}) is not a free entry", i + 1, j + 1)));
            }
            if self.entry(i, j).is_specified() {
                return Err(Error::input(format!("entry ({}, {}) is already specified", i + 1, j + 1)));
            }
            if !self.entry(i, j).contains(v) {
                return Err(Error::input(format!("value {v} is outside entry ({}, {})", i + 1, j + 1)));
            }
            payoff[i * self.cols + j] = Some(v.clone());
            if self.symmetric {
                payoff[j * self.cols + i] = Some(-v);
            }
        }
        let payoff = payoff
            .into_iter()
            .enumerate()
            .map(|(k, v)| {
                v.ok_or_else(|| Error::input(format!("entry ({}, {}) left unassigned", k / self.cols + 1, k % self.cols + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.game_from_payoff(payoff))
    }

    fn game_from_payoff(&self, payoff: Vec<Rational>) -> Game {
        MatrixGame::from_parts(
            self.rows,
            self.cols,
            payoff,
            self.row_labels.clone(),
            self.col_labels.clone(),
            self.symmetric,
        )
    }

    /// Every completion exactly once, lexicographic in coordinate then value order.
    pub fn enumerate_completions(&self) -> Result<Completions<'_>> {
        let choices = self.choice_lists()?;
        let base: Vec<Rational> = self
            .entries
            .iter()
            .map(|e| match e {
                Entry::Value(v) => v.clone(),
                _ => Rational::zero(),
            })
            .collect();
        Ok(Completions {
            game: self,
            indices: vec![0; choices.len()],
            choices,
            base,
            done: false,
        })
    }

    /// Maps every `[-1,1]` interval to `{-1,0,1}`; only valid in weak-tournament shape.
    pub fn canonicalize_intervals(&self) -> Result<Self> {
        if !self.has_intervals() {
            return Ok(self.clone());
        }
        if !self.symmetric {
            return Err(Error::unsupported(
                "interval canonicalization is only sound for symmetric weak-tournament games",
            ));
        }
        let unit = |x: &Rational| x.is_zero() || x.abs().is_one();
        let mut out = self.clone();
        for (k, e) in self.entries.iter().enumerate() {
            out.entries[k] = match e {
                Entry::Interval(lo, hi) if *lo == Rational::from(-1) && hi.is_one() => Entry::unknown_weak(),
                Entry::Interval(lo, hi) => {
                    return Err(Error::unsupported(format!(
                        "interval [{lo},{hi}] at ({}, {}); only [-1,1] can be canonicalized",
                        k / self.cols + 1,
                        k % self.cols + 1
                    )))
                }
                Entry::Value(v) if !unit(v) => {
                    return Err(Error::unsupported(format!(
                        "payoff {v} at ({}, {}) is outside {{-1,0,1}}",
                        k / self.cols + 1,
                        k % self.cols + 1
                    )))
                }
                Entry::Set(s) if !s.iter().all(unit) => {
                    return Err(Error::unsupported(format!(
                        "payoff set at ({}, {}) is not within {{-1,0,1}}",
                        k / self.cols + 1,
                        k % self.cols + 1
                    )))
                }
                other => other.clone(),
            };
        }
        Ok(out)
    }
}

/// Iterator over completions; see [`IncompleteMatrixGame::enumerate_completions`].
pub struct Completions<'a> {
    game: &'a IncompleteMatrixGame,
    choices: Vec<((usize, usize), &'a [Rational])>,
    indices: Vec<usize>,
    base: Vec<Rational>,
    done: bool,
}

impl Completions<'_> {
    fn current(&self) -> (CompletionAssignment, Game) {
        let cols = self.game.cols;
        let mut payoff = self.base.clone();
        let mut assignment = CompletionAssignment::default();
        for (((i, j), vals), &k) in self.choices.iter().zip(&self.indices) {
            let v = vals[k].clone();
            if self.game.symmetric {
                payoff[j * cols + i] = -&v;
            }
            payoff[i * cols + j] = v.clone();
            assignment.choices.push(((*i, *j), v));
        }
        (assignment, self.game.game_from_payoff(payoff))
    }

    fn advance(&mut self) {
        for pos in (0..self.indices.len()).rev() {
            self.indices[pos] += 1;
            if self.indices[pos] < self.choices[pos].1.len() {
                return;
            }
            self.indices[pos] = 0;
        }
        self.done = true;
    }
}

impl Iterator for Completions<'_> {
    type Item = (CompletionAssignment, Game);

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let item = self.current();
        self.advance();
        Some(item)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QueryMode {
    Possible,
    Necessary,
}

impl fmt::Display for QueryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QueryMode::Possible => "possible",
            QueryMode::Necessary => "necessary",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct QueryStats {
    pub completions: u64,
    pub lp_solves: u64,
    pub bnb_nodes: u64,
    #[serde(serialize_with = "ser_millis")]
    pub wall: Duration,
}

fn ser_millis<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u128(d.as_millis())
}

/// Decision answer with the completion that decides it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueryResult {
    pub answer: bool,
    pub witness: Option<CompletionAssignment>,
    pub equilibrium: Option<EquilibriumResult<Rational>>,
    pub stats: QueryStats,
}

#[derive(Debug, Clone)]
pub struct QueryOptions {
    /// Search even when the completion count exceeds `limit`.
    pub force: bool,
    pub limit: u64,
    /// Partition the search by the first free entry and run partitions on the rayon pool.
    pub parallel: bool,
    pub deadline: Option<Instant>,
}

impl Default for QueryOptions {
    fn default() -> Self {
        QueryOptions {
            force: false,
            limit: DEFAULT_COMPLETION_LIMIT,
            parallel: false,
            deadline: None,
        }
    }
}

impl QueryOptions {
    pub fn with_timeout(timeout: Duration) -> Self {
        QueryOptions {
            deadline: Some(Instant::now() + timeout),
            ..Default::default()
        }
    }
}

/// Whether `action` is in the ES of the complete game `g`.
pub(crate) fn in_essential_set(g: &Game, action: Action, work: &mut Work) -> bool {
    let v = value_counted(g, work);
    is_essential_with_value(g, action, &v, work)
}

struct Hit {
    assignment: CompletionAssignment,
    game: Game,
}

struct SearchOutcome {
    hit: Option<Hit>,
    completions: u64,
    lp_solves: u64,
}

/// Scans the remaining completions, stopping at the first one on which membership equals `stop_on`.
fn scan(
    it: &mut Completions<'_>,
    action: Action,
    stop_on: bool,
    deadline: Option<Instant>,
    abort: &dyn Fn() -> bool,
) -> Result<SearchOutcome> {
    let mut work = Work::default();
    let mut completions = 0;
    while !it.done {
        if abort() {
            break;
        }
        if deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(Error::Timeout);
        }
        let (assignment, game) = it.current();
        completions += 1;
        if in_essential_set(&game, action, &mut work) == stop_on {
            return Ok(SearchOutcome {
                hit: Some(Hit { assignment, game }),
                completions,
                lp_solves: work.lp_solves,
            });
        }
        it.advance();
    }
    Ok(SearchOutcome {
        hit: None,
        completions,
        lp_solves: work.lp_solves,
    })
}

fn guard(g: &IncompleteMatrixGame, opts: &QueryOptions) -> Result<()> {
    let count = g.completion_count()?;
    if !opts.force && count > BigUint::from(opts.limit) {
        return Err(Error::TooManyCompletions {
            count: count.to_string(),
            limit: opts.limit,
        });
    }
    Ok(())
}

/// Exhaustive possible/necessary decision with early exit.
pub fn query_action(g: &IncompleteMatrixGame, action: Action, mode: QueryMode, opts: &QueryOptions) -> Result<QueryResult> {
    let start = Instant::now();
    guard(g, opts)?;
    let in_range = match action {
        Action::Row(i) => i < g.rows,
        Action::Column(j) => j < g.cols,
    };
    if !in_range {
        return Err(Error::input(format!("{action} is out of range for a {}x{} game", g.rows, g.cols)));
    }
    let stop_on = mode == QueryMode::Possible;
    let outcome = if opts.parallel && !g.free_coordinates().is_empty() {
        scan_parallel(g, action, stop_on, opts)?
    } else {
        let mut it = g.enumerate_completions()?;
        scan(&mut it, action, stop_on, opts.deadline, &|| false)?
    };
    let mut stats = QueryStats {
        completions: outcome.completions,
        lp_solves: outcome.lp_solves,
        bnb_nodes: 0,
        wall: Duration::ZERO,
    };
    let (answer, witness, equilibrium) = match outcome.hit {
        Some(hit) => {
            let mut work = Work::default();
            let eq = quasi_strict_counted(&hit.game, &mut work);
            stats.lp_solves += work.lp_solves;
            (stop_on, Some(hit.assignment), Some(eq))
        }
        None => (!stop_on, None, None),
    };
    stats.wall = start.elapsed();
    Ok(QueryResult {
        answer,
        witness,
        equilibrium,
        stats,
    })
}

fn scan_parallel(g: &IncompleteMatrixGame, action: Action, stop_on: bool, opts: &QueryOptions) -> Result<SearchOutcome> {
    let width = g.choice_lists()?[0].1.len();
    let first_hit = AtomicUsize::new(usize::MAX);
    let parts: Vec<Result<SearchOutcome>> = (0..width)
        .into_par_iter()
        .map(|part| {
            let mut it = g.enumerate_completions()?;
            // pin the first digit of the odometer to this partition
            it.choices[0].1 = &it.choices[0].1[part..part + 1];
            let abort = || first_hit.load(Ordering::Relaxed) < part;
            let out = scan(&mut it, action, stop_on, opts.deadline, &abort)?;
            if out.hit.is_some() {
                first_hit.fetch_min(part, Ordering::Relaxed);
            }
            Ok(out)
        })
        .collect();
    let mut completions = 0;
    let mut lp_solves = 0;
    let mut hit = None;
    for part in parts {
        let part = part?;
        completions += part.completions;
        lp_solves += part.lp_solves;
        if hit.is_none() {
            hit = part.hit;
        }
    }
    Ok(SearchOutcome { hit, completions, lp_solves })
}

/// Is `action` in the ES of some completion?
pub fn possible_action(g: &IncompleteMatrixGame, action: Action) -> Result<QueryResult> {
    query_action(g, action, QueryMode::Possible, &QueryOptions::default())
}

/// Is `action` in the ES of every completion?
pub fn necessary_action(g: &IncompleteMatrixGame, action: Action) -> Result<QueryResult> {
    query_action(g, action, QueryMode::Necessary, &QueryOptions::default())
}

/// Completion count as `u64`, if it fits.
pub fn completion_count_u64(g: &IncompleteMatrixGame) -> Option<u64> {
    g.completion_count().ok()?.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn r(x: i64) -> Rational {
        Rational::from(x)
    }

    fn v(x: i64) -> Entry {
        Entry::value(x)
    }

    fn labels(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    pub(crate) fn four_action_game() -> IncompleteMatrixGame {
        let u = Entry::unknown_weak;
        IncompleteMatrixGame::new_symmetric(vec![
            vec![v(0), v(1), v(0), u()],
            vec![v(-1), v(0), v(1), v(0)],
            vec![v(0), v(-1), v(0), v(1)],
            vec![u(), v(0), v(-1), v(0)],
        ])
        .unwrap()
        .with_labels(labels(&["a", "b", "c", "d"]), labels(&["a", "b", "c", "d"]))
        .unwrap()
    }

    fn asymmetric_four_action_game() -> IncompleteMatrixGame {
        IncompleteMatrixGame::new(vec![vec![v(-2), v(1)], vec![Entry::unknown_strict(), v(0)]])
            .unwrap()
            .with_labels(labels(&["t", "b"]), labels(&["l", "r"]))
            .unwrap()
    }

    #[test]
    fn completion_counts() {
        let g = four_action_game();
        assert_eq!(g.enumerate_completions().unwrap().count(), 3);
        let rps = IncompleteMatrixGame::new(vec![
            vec![v(0), v(1), v(-1)],
            vec![v(-1), v(0), v(1)],
            vec![v(1), v(-1), v(0)],
        ])
        .unwrap();
        let all: Vec<_> = rps.enumerate_completions().unwrap().collect();
        assert_eq!(all.len(), 1);
        assert!(all[0].0.is_empty());
        let two = IncompleteMatrixGame::new(vec![vec![Entry::unknown_strict(), Entry::unknown_strict()]]).unwrap();
        assert_eq!(two.enumerate_completions().unwrap().count(), 4);
    }

    #[test]
    fn four_action_queries() {
        let g = four_action_game();
        let a = g.action("a").unwrap();
        let res = possible_action(&g, a).unwrap();
        assert!(res.answer);
        let w = res.witness.unwrap();
        assert_eq!(w.get(0, 3), Some(r(1)));
        let eq = res.equilibrium.unwrap();
        assert_eq!(eq.row.support(), BTreeSet::from([0, 2]));

        let res = possible_action(&g, g.action("b").unwrap()).unwrap();
        assert!(res.answer);
        assert_eq!(res.witness.unwrap().get(0, 3), Some(r(-1)));

        let h = asymmetric_four_action_game();
        let res = necessary_action(&h, h.action("t").unwrap()).unwrap();
        assert!(!res.answer);
        assert_eq!(res.witness.unwrap().get(1, 0), Some(r(-1)));
    }

    #[test]
    fn witness_side_only() {
        let g = four_action_game();
        let res = necessary_action(&g, g.action("a").unwrap()).unwrap();
        assert!(res.answer);
        assert!(res.witness.is_none());
        assert_eq!(res.stats.completions, 3);
    }

    #[test]
    fn parallel_matches_sequential() {
        let g = four_action_game();
        for label in ["a", "b", "c", "d"] {
            for mode in [QueryMode::Possible, QueryMode::Necessary] {
                let a = g.action(label).unwrap();
                let seq = query_action(&g, a, mode, &QueryOptions::default()).unwrap();
                let par = query_action(&g, a, mode, &QueryOptions { parallel: true, ..Default::default() }).unwrap();
                assert_eq!(seq.answer, par.answer);
                assert_eq!(seq.witness, par.witness);
            }
        }
    }

    #[test]
    fn guard_and_intervals() {
        let g = four_action_game();
        let opts = QueryOptions { limit: 2, ..Default::default() };
        assert!(matches!(
            query_action(&g, Action::Row(0), QueryMode::Possible, &opts),
            Err(Error::TooManyCompletions { .. })
        ));
        let iv = || Entry::interval(r(-1), r(1)).unwrap();
        let h = IncompleteMatrixGame::new_symmetric(vec![vec![v(0), iv()], vec![iv(), v(0)]]).unwrap();
        assert!(h.enumerate_completions().is_err());
        let c = h.canonicalize_intervals().unwrap();
        assert_eq!(c.enumerate_completions().unwrap().count(), 3);
        let bad = IncompleteMatrixGame::new_symmetric(vec![
            vec![v(0), Entry::interval(r(0), r(1)).unwrap()],
            vec![Entry::interval(r(-1), r(0)).unwrap(), v(0)],
        ])
        .unwrap();
        assert!(matches!(bad.canonicalize_intervals(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(IncompleteMatrixGame::new_symmetric(vec![vec![v(0), v(1)], vec![v(1), v(0)]]).is_err());
        assert!(Entry::set(Vec::new()).is_err());
        assert!(four_action_game().action("zz").is_err());
    }
}
