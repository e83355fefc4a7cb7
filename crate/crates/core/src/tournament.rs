//! Weak tournaments and tournaments as dense digraphs, with conversions to games.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::incomplete::{Entry, IncompleteMatrixGame};
use crate::matrix::{maximin_strategy, MatrixGame, Player};
use crate::rational::Rational;
use crate::Game;

/// Relation of the row vertex to the column vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Edge {
    Win,
    Loss,
    Tie,
    Unspecified,
}

impl Edge {
    pub fn reversed(self) -> Edge {
        match self {
            Edge::Win => Edge::Loss,
            Edge::Loss => Edge::Win,
            other => other,
        }
    }

    pub fn payoff(self) -> Option<i64> {
        match self {
            Edge::Win => Some(1),
            Edge::Loss => Some(-1),
            Edge::Tie => Some(0),
            Edge::Unspecified => None,
        }
    }

    pub fn from_payoff(x: &Rational) -> Option<Edge> {
        if x.is_zero() {
            Some(Edge::Tie)
        } else if x.is_one() {
            Some(Edge::Win)
        } else if *x == Rational::from(-1) {
            Some(Edge::Loss)
        } else {
            None
        }
    }
}

/// Which structural rules apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    WeakTournament,
    Tournament,
    IncompleteWeakTournament,
    IncompleteTournament,
}

impl Kind {
    fn allows_ties(self) -> bool {
        matches!(self, Kind::WeakTournament | Kind::IncompleteWeakTournament)
    }

    fn allows_unspecified(self) -> bool {
        matches!(self, Kind::IncompleteWeakTournament | Kind::IncompleteTournament)
    }
}

/// A structural invariant violation, with 0-based vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Violation {
    /// Diagonal entry other than a tie.
    Diagonal { vertex: usize },
    /// `relation(i,j)` is not the reverse of `relation(j,i)`.
    Asymmetry { i: usize, j: usize },
    /// Off-diagonal tie in a tournament.
    IllegalTie { i: usize, j: usize },
    /// Unspecified on one side of the pair only.
    UnspecifiedAsymmetry { i: usize, j: usize },
    /// Unspecified pair in a complete instance.
    Unspecified { i: usize, j: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Diagonal { vertex } => write!(f, "diagonal entry of vertex {} is not a tie", vertex + 1),
            Violation::Asymmetry { i, j } => write!(f, "asymmetry violation at ({}, {})", i + 1, j + 1),
            Violation::IllegalTie { i, j } => write!(f, "illegal tie at ({}, {})", i + 1, j + 1),
            Violation::UnspecifiedAsymmetry { i, j } => {
                write!(f, "unspecified on one side only at ({}, {})", i + 1, j + 1)
            }
            Violation::Unspecified { i, j } => write!(f, "unspecified pair ({}, {}) in a complete instance", i + 1, j + 1),
        }
    }
}

/// Labeled vertices with a dense relation matrix. Unvalidated building block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    labels: Vec<String>,
    edges: Vec<Edge>,
}

impl Digraph {
    /// All pairs tied.
    pub fn new(labels: Vec<String>) -> Self {
        let n = labels.len();
        Digraph {
            labels,
            edges: vec![Edge::Tie; n * n],
        }
    }

    pub fn with_size(n: usize) -> Self {
        Self::new((1..=n).map(|i| i.to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::input(format!("unknown vertex '{label}'")))
    }

    pub fn edge(&self, i: usize, j: usize) -> Edge {
        self.edges[i * self.len() + j]
    }

    /// `i ≻ j`.
    pub fn beats(&self, i: usize, j: usize) -> bool {
        self.edge(i, j) == Edge::Win
    }

    /// Sets `relation(i,j)` and its mirror.
    pub fn set(&mut self, i: usize, j: usize, e: Edge) -> &mut Self {
        let n = self.len();
        assert!(i != j || e == Edge::Tie, "diagonal must be a tie");
        self.edges[i * n + j] = e;
        self.edges[j * n + i] = e.reversed();
        self
    }

    /// Sets `i ≻ j`.
    pub fn set_win(&mut self, i: usize, j: usize) -> &mut Self {
        self.set(i, j, Edge::Win)
    }

    /// Sets a single cell without touching its mirror (for building invalid inputs).
    pub fn set_raw(&mut self, i: usize, j: usize, e: Edge) -> &mut Self {
        let n = self.len();
        self.edges[i * n + j] = e;
        self
    }

    /// Every structural violation under `kind`'s rules, each pair reported once.
    pub fn validate(&self, kind: Kind) -> Vec<Violation> {
        let n = self.len();
        let mut out = Vec::new();
        for v in 0..n {
            if self.edge(v, v) != Edge::Tie {
                out.push(Violation::Diagonal { vertex: v });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (self.edge(i, j), self.edge(j, i));
                if (a == Edge::Unspecified) != (b == Edge::Unspecified) {
                    out.push(Violation::UnspecifiedAsymmetry { i, j });
                    continue;
                }
                if a == Edge::Unspecified {
                    if !kind.allows_unspecified() {
                        out.push(Violation::Unspecified { i, j });
                    }
                    continue;
                }
                if b != a.reversed() {
                    out.push(Violation::Asymmetry { i, j });
                    continue;
                }
                if a == Edge::Tie && !kind.allows_ties() {
                    out.push(Violation::IllegalTie { i, j });
                }
            }
        }
        out
    }

    fn checked(self, kind: Kind) -> Result<Self> {
        let v = self.validate(kind);
        if v.is_empty() {
            Ok(self)
        } else {
            let msgs: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            Err(Error::input(msgs.join("; ")))
        }
    }

    /// `{b ∈ B : a ≻ b}`.
    pub fn dominion(&self, a: usize, within: &BTreeSet<usize>) -> Result<BTreeSet<usize>> {
        self.check_vertices(a, within)?;
        Ok(within.iter().copied().filter(|&b| self.beats(a, b)).collect())
    }

    /// `{b ∈ B : b ≻ a}`.
    pub fn dominators(&self, a: usize, within: &BTreeSet<usize>) -> Result<BTreeSet<usize>> {
        self.check_vertices(a, within)?;
        Ok(within.iter().copied().filter(|&b| self.beats(b, a)).collect())
    }

    fn check_vertices(&self, a: usize, within: &BTreeSet<usize>) -> Result<()> {
        let n = self.len();
        if a >= n || within.iter().any(|&b| b >= n) {
            return Err(Error::input("vertex index out of range"));
        }
        Ok(())
    }

    /// Unordered unspecified pairs `(i, j)`, `i < j`.
    pub fn unspecified_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.edge(i, j) == Edge::Unspecified {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Induced subgraph on `vertices`, in the given order.
    pub fn restrict(&self, vertices: &[usize]) -> Digraph {
        let mut out = Digraph::new(vertices.iter().map(|&v| self.labels[v].clone()).collect());
        for (a, &i) in vertices.iter().enumerate() {
            for (b, &j) in vertices.iter().enumerate() {
                out.edges[a * vertices.len() + b] = self.edge(i, j);
            }
        }
        out
    }

    fn payoffs(&self) -> Vec<Rational> {
        self.edges
            .iter()
            .map(|e| Rational::from(e.payoff().expect("complete relation")))
            .collect()
    }

    fn to_game(&self) -> Game {
        let n = self.len();
        MatrixGame::from_parts(n, n, self.payoffs(), self.labels.clone(), self.labels.clone(), true)
    }

    fn to_incomplete(&self, unknown: fn() -> Entry) -> IncompleteMatrixGame {
        let n = self.len();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match self.edge(i, j).payoff() {
                        Some(x) => Entry::value(x),
                        None => unknown(),
                    })
                    .collect()
            })
            .collect();
        IncompleteMatrixGame::new_symmetric(rows)
            .and_then(|g| g.with_labels(self.labels.clone(), self.labels.clone()))
            .expect("validated relation is a symmetric game")
    }

    fn from_game(g: &Game) -> Result<Digraph> {
        if g.rows() != g.cols() {
            return Err(Error::input("tournament game must be square"));
        }
        let n = g.rows();
        let mut d = Digraph::new(g.row_labels().to_vec());
        for i in 0..n {
            for j in 0..n {
                let e = Edge::from_payoff(g.payoff(i, j))
                    .ok_or_else(|| Error::input(format!("payoff at ({}, {}) is not in {{-1,0,1}}", i + 1, j + 1)))?;
                d.edges[i * n + j] = e;
            }
        }
        Ok(d)
    }
}

macro_rules! tournament_type {
    ($(#[$m:meta])* $name:ident, $kind:expr) => {
        $(#[$m])*
        #[derive(Debug, Clone, PartialEq, Eq, Hash)]
        pub struct $name(Digraph);

        impl $name {
            pub const KIND: Kind = $kind;

            /// Validates `d` against this type's rules.
            pub fn new(d: Digraph) -> Result<Self> {
                d.checked(Self::KIND).map($name)
            }

            pub fn as_digraph(&self) -> &Digraph {
                &self.0
            }

            pub fn into_digraph(self) -> Digraph {
                self.0
            }
        }

        impl Deref for $name {
            type Target = Digraph;

            fn deref(&self) -> &Digraph {
                &self.0
            }
        }

        impl TryFrom<Digraph> for $name {
            type Error = Error;

            fn try_from(d: Digraph) -> Result<Self> {
                Self::new(d)
            }
        }
    };
}

tournament_type!(
    /// Complete relation with ties allowed.
    WeakTournament,
    Kind::WeakTournament
);
tournament_type!(
    /// Complete relation without off-diagonal ties.
    Tournament,
    Kind::Tournament
);
tournament_type!(
    /// Pairs may be unspecified; completions range over `{-1,0,1}`.
    IncompleteWeakTournament,
    Kind::IncompleteWeakTournament
);
tournament_type!(
    /// Pairs may be unspecified; completions range over `{-1,1}`.
    IncompleteTournament,
    Kind::IncompleteTournament
);

impl WeakTournament {
    pub fn to_matrix_game(&self) -> Game {
        self.0.to_game()
    }

    pub fn from_matrix_game(g: &Game) -> Result<Self> {
        Self::new(Digraph::from_game(g)?)
    }

    pub fn restrict(&self, vertices: &[usize]) -> WeakTournament {
        WeakTournament(self.0.restrict(vertices))
    }
}

impl Tournament {
    pub fn to_matrix_game(&self) -> Game {
        self.0.to_game()
    }

    pub fn from_matrix_game(g: &Game) -> Result<Self> {
        Self::new(Digraph::from_game(g)?)
    }

    pub fn restrict(&self, vertices: &[usize]) -> Tournament {
        Tournament(self.0.restrict(vertices))
    }
}

impl TryFrom<WeakTournament> for Tournament {
    type Error = Error;

    fn try_from(w: WeakTournament) -> Result<Self> {
        Tournament::new(w.0)
    }
}

impl From<Tournament> for WeakTournament {
    fn from(t: Tournament) -> Self {
        WeakTournament(t.0)
    }
}

impl From<WeakTournament> for IncompleteWeakTournament {
    fn from(w: WeakTournament) -> Self {
        IncompleteWeakTournament(w.0)
    }
}

impl From<Tournament> for IncompleteTournament {
    fn from(t: Tournament) -> Self {
        IncompleteTournament(t.0)
    }
}

impl IncompleteWeakTournament {
    pub fn to_incomplete_game(&self) -> IncompleteMatrixGame {
        self.0.to_incomplete(Entry::unknown_weak)
    }

    /// Fills unspecified pairs; `choices` gives `relation(i,j)` for each listed pair.
    pub fn complete(&self, choices: &[((usize, usize), Edge)]) -> Result<WeakTournament> {
        WeakTournament::new(fill(&self.0, choices)?)
    }

    pub fn from_incomplete_game(g: &IncompleteMatrixGame) -> Result<Self> {
        Self::new(digraph_from_incomplete(g, false)?)
    }
}

impl IncompleteTournament {
    pub fn to_incomplete_game(&self) -> IncompleteMatrixGame {
        self.0.to_incomplete(Entry::unknown_strict)
    }

    pub fn complete(&self, choices: &[((usize, usize), Edge)]) -> Result<Tournament> {
        Tournament::new(fill(&self.0, choices)?)
    }

    pub fn from_incomplete_game(g: &IncompleteMatrixGame) -> Result<Self> {
        Self::new(digraph_from_incomplete(g, true)?)
    }
}

fn fill(d: &Digraph, choices: &[((usize, usize), Edge)]) -> Result<Digraph> {
    let mut out = d.clone();
    for &((i, j), e) in choices {
        if i >= d.len() || j >= d.len() || d.edge(i, j) != Edge::Unspecified {
            return Err(Error::input(format!("pair ({}, {}) is not unspecified", i + 1, j + 1)));
        }
        if e == Edge::Unspecified {
            return Err(Error::input("completion must specify every chosen pair"));
        }
        out.set(i, j, e);
    }
    if let Some((i, j)) = out.unspecified_pairs().first() {
        return Err(Error::input(format!("pair ({}, {}) left unspecified", i + 1, j + 1)));
    }
    Ok(out)
}

fn digraph_from_incomplete(g: &IncompleteMatrixGame, strict: bool) -> Result<Digraph> {
    if !g.is_symmetric() {
        return Err(Error::input("tournament instances must be symmetric games"));
    }
    let n = g.rows();
    let mut d = Digraph::new(g.row_labels().to_vec());
    let unknown = if strict { Entry::unknown_strict() } else { Entry::unknown_weak() };
    for i in 0..n {
        for j in 0..n {
            let e = match g.entry(i, j) {
                Entry::Value(v) => Edge::from_payoff(v),
                e if *e == unknown => Some(Edge::Unspecified),
                _ => None,
            }
            .ok_or_else(|| {
                Error::input(format!(
                    "entry ({}, {}) is {}; expected a value in {{-1,0,1}} or {unknown}",
                    i + 1,
                    j + 1,
                    g.entry(i, j)
                ))
            })?;
            d.edges[i * n + j] = e;
        }
    }
    Ok(d)
}

/// A probability distribution over the vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TournamentDistribution {
    pub probabilities: Vec<Rational>,
}

impl TournamentDistribution {
    pub fn support(&self) -> BTreeSet<usize> {
        self.probabilities
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// Total probability of `set`.
    pub fn mass<'a>(&self, set: impl IntoIterator<Item = &'a usize>) -> Rational {
        set.into_iter().map(|&i| &self.probabilities[i]).sum()
    }
}

/// The unique equilibrium of a tournament game and its support, the bipartisan set.
pub fn bipartisan_set(t: &Tournament) -> (BTreeSet<usize>, TournamentDistribution) {
    let s = maximin_strategy(&t.to_matrix_game(), Player::Row);
    let dist = TournamentDistribution {
        probabilities: s.probabilities,
    };
    (dist.support(), dist)
}
