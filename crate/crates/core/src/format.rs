//! Text formats: game files, DIMACS CNF and set-cover instances.
//!
//! A game file is whitespace separated. `#` starts a comment. The header line is
//! `KIND M N` with `KIND` one of `matrix`, `symmetric`, `weaktournament`,
//! `tournament`. Optional `rows:` and `cols:` lines carry labels (`labels:` sets
//! both). Then follow `M` lines of `N` entries each:
//!
//! ```text
//! RAT | {RAT,RAT,...} | [RAT,RAT]        RAT = INT | INT/POSINT
//! ```
//!
//! ```
//! use incgames::format::{parse_game, Instance};
//! let inst = parse_game("symmetric 3 3\n0 1 -1\n-1 0 {-1,1}\n1 {-1,1} 0\n").unwrap();
//! assert!(matches!(inst, Instance::Matrix(_)));
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::incomplete::{Entry, IncompleteMatrixGame};
use crate::rational::Rational;
use crate::reductions::{CnfFormula, SetCoverInstance};
use crate::tournament::{IncompleteTournament, IncompleteWeakTournament};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameKind {
    Matrix,
    Symmetric,
    WeakTournament,
    Tournament,
}

impl GameKind {
    pub fn name(self) -> &'static str {
        match self {
            GameKind::Matrix => "matrix",
            GameKind::Symmetric => "symmetric",
            GameKind::WeakTournament => "weaktournament",
            GameKind::Tournament => "tournament",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "matrix" => GameKind::Matrix,
            "symmetric" => GameKind::Symmetric,
            "weaktournament" => GameKind::WeakTournament,
            "tournament" => GameKind::Tournament,
            _ => return None,
        })
    }
}

/// A parsed game file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    /// `matrix` or `symmetric`.
    Matrix(IncompleteMatrixGame),
    WeakTournament(IncompleteWeakTournament),
    Tournament(IncompleteTournament),
}

impl Instance {
    pub fn kind(&self) -> GameKind {
        match self {
            Instance::Matrix(g) if g.is_symmetric() => GameKind::Symmetric,
            Instance::Matrix(_) => GameKind::Matrix,
            Instance::WeakTournament(_) => GameKind::WeakTournament,
            Instance::Tournament(_) => GameKind::Tournament,
        }
    }

    /// The underlying incomplete matrix game.
    pub fn game(&self) -> IncompleteMatrixGame {
        match self {
            Instance::Matrix(g) => g.clone(),
            Instance::WeakTournament(w) => w.to_incomplete_game(),
            Instance::Tournament(t) => t.to_incomplete_game(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    text: String,
    line: usize,
    column: usize,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Splits a line into tokens; `{...}` and `[...]` groups may contain spaces.
fn tokenize(line: &str, lineno: usize) -> Result<Vec<Token>> {
    let line = line.split('#').next().unwrap_or("");
    let chars: Vec<char> = line.chars().collect();
    let mut tokens = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        if chars[k].is_whitespace() {
            k += 1;
            continue;
        }
        let start = k;
        let close = match chars[k] {
            '{' => Some('}'),
            '[' => Some(']'),
            _ => None,
        };
        let mut text = String::new();
        match close {
            Some(close) => {
                while k < chars.len() && chars[k] != close {
                    if !chars[k].is_whitespace() {
                        text.push(chars[k]);
                    }
                    k += 1;
                }
                if k == chars.len() {
                    return Err(parse_err(lineno, start + 1, format!("unterminated '{}'", chars[start])));
                }
                text.push(close);
                k += 1;
            }
            None => {
                while k < chars.len() && !chars[k].is_whitespace() {
                    text.push(chars[k]);
                    k += 1;
                }
            }
        }
        tokens.push(Token {
            text,
            line: lineno,
            column: start + 1,
        });
    }
    Ok(tokens)
}

fn parse_rational(s: &str, tok: &Token) -> Result<Rational> {
    s.parse()
        .map_err(|_| parse_err(tok.line, tok.column, format!("expected a rational like 3, -2 or 1/3, got '{s}'")))
}

fn parse_entry(tok: &Token) -> Result<Entry> {
    let t = tok.text.as_str();
    let err = |m: String| parse_err(tok.line, tok.column, m);
    if let Some(inner) = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
        let mut values = Vec::new();
        for part in inner.split(',') {
            values.push(parse_rational(part, tok)?);
        }
        return Entry::set(values).map_err(|e| err(e.to_string()));
    }
    if let Some(inner) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != 2 {
            return Err(err(format!("interval needs exactly two bounds, got '{t}'")));
        }
        let lo = parse_rational(parts[0], tok)?;
        let hi = parse_rational(parts[1], tok)?;
        if lo > hi {
            return Err(err(format!("interval '{t}' has lower bound above upper bound")));
        }
        return Ok(Entry::Interval(lo, hi));
    }
    Ok(Entry::Value(parse_rational(t, tok)?))
}

fn parse_dim(tok: Option<&Token>, line: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| parse_err(line, 1, format!("header is missing the {what}")))?;
    match tok.text.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(parse_err(tok.line, tok.column, format!("{what} must be a positive integer, got '{}'", tok.text))),
    }
}

/// Parses a game file and applies the kind's validators.
pub fn parse_game(text: &str) -> Result<Instance> {
    let mut lines = Vec::new();
    for (k, l) in text.lines().enumerate() {
        let toks = tokenize(l, k + 1)?;
        if !toks.is_empty() {
            lines.push(toks);
        }
    }
    let mut it = lines.into_iter();
    let header = it.next().ok_or_else(|| parse_err(1, 1, "empty game file"))?;
    let kind = GameKind::parse(&header[0].text).ok_or_else(|| {
        parse_err(
            header[0].line,
            header[0].column,
            format!(
                "unknown kind '{}'; expected matrix, symmetric, weaktournament or tournament",
                header[0].text
            ),
        )
    })?;
    let m = parse_dim(header.get(1), header[0].line, "row count")?;
    let n = parse_dim(header.get(2), header[0].line, "column count")?;
    if let Some(extra) = header.get(3) {
        return Err(parse_err(extra.line, extra.column, "unexpected token after the header"));
    }
    let square = kind != GameKind::Matrix;
    if square && m != n {
        return Err(parse_err(header[0].line, header[0].column, format!("{} games must be square, got {m}x{n}", kind.name())));
    }

    let mut rest: Vec<Vec<Token>> = it.collect();
    let mut row_labels = None;
    let mut col_labels = None;
    while let Some(first) = rest.first().map(|l| l[0].text.clone()) {
        let (target, expected): (Vec<&mut Option<Vec<String>>>, usize) = match first.as_str() {
            "rows:" => (vec![&mut row_labels], m),
            "cols:" => (vec![&mut col_labels], n),
            "labels:" => (vec![&mut row_labels, &mut col_labels], m),
            _ => break,
        };
        let line = rest.remove(0);
        let names: Vec<String> = line[1..].iter().map(|t| t.text.clone()).collect();
        if names.len() != expected {
            return Err(parse_err(line[0].line, line[0].column, format!("expected {expected} labels, got {}", names.len())));
        }
        let distinct: BTreeSet<&String> = names.iter().collect();
        if distinct.len() != names.len() {
            return Err(parse_err(line[0].line, line[0].column, "labels must be distinct"));
        }
        for slot in target {
            *slot = Some(names.clone());
        }
    }
    if square && row_labels.is_some() && col_labels.is_some() && row_labels != col_labels {
        return Err(parse_err(1, 1, format!("{} games need identical row and column labels", kind.name())));
    }

    if rest.len() != m {
        let (line, col) = rest.get(m).map_or((header[0].line, 1), |l| (l[0].line, l[0].column));
        return Err(parse_err(line, col, format!("expected {m} payoff rows, got {}", rest.len())));
    }
    let mut grid: Vec<Vec<Entry>> = Vec::with_capacity(m);
    let mut pos: Vec<Vec<(usize, usize)>> = Vec::with_capacity(m);
    for line in &rest {
        if line.len() != n {
            return Err(parse_err(line[0].line, line[0].column, format!("expected {n} entries, got {}", line.len())));
        }
        grid.push(line.iter().map(parse_entry).collect::<Result<_>>()?);
        pos.push(line.iter().map(|t| (t.line, t.column)).collect());
    }
    validate_kind(kind, &grid, &pos)?;

    let labels = square.then(|| row_labels.clone().or_else(|| col_labels.clone())).flatten();
    let (rl, cl) = match labels {
        Some(l) => (l.clone(), l),
        None => (
            row_labels.unwrap_or_else(|| (1..=m).map(|i| i.to_string()).collect()),
            col_labels.unwrap_or_else(|| (1..=n).map(|j| j.to_string()).collect()),
        ),
    };
    let mut game = if square {
        IncompleteMatrixGame::new_symmetric(grid)?
    } else {
        IncompleteMatrixGame::new(grid)?
    }
    .with_labels(rl, cl)?;
    if kind == GameKind::WeakTournament {
        // `[-1,1]` and `{-1,0,1}` are the same entry in a weak tournament
        game = game.canonicalize_intervals()?;
    }
    Ok(match kind {
        GameKind::Matrix | GameKind::Symmetric => Instance::Matrix(game),
        GameKind::WeakTournament => Instance::WeakTournament(IncompleteWeakTournament::from_incomplete_game(&game)?),
        GameKind::Tournament => Instance::Tournament(IncompleteTournament::from_incomplete_game(&game)?),
    })
}

fn validate_kind(kind: GameKind, grid: &[Vec<Entry>], pos: &[Vec<(usize, usize)>]) -> Result<()> {
    if kind == GameKind::Matrix {
        return Ok(());
    }
    let at = |i: usize, j: usize, msg: String| parse_err(pos[i][j].0, pos[i][j].1, msg);
    let n = grid.len();
    for i in 0..n {
        if grid[i][i] != Entry::Value(Rational::zero()) {
            return Err(at(i, i, format!("diagonal entry ({0}, {0}) must be 0, got {1}", i + 1, grid[i][i])));
        }
        for j in 0..n {
            if i < j && grid[j][i] != grid[i][j].negated() {
                return Err(at(
                    j,
                    i,
                    format!(
                        "symmetry violated: entry ({}, {}) is {} but ({}, {}) is {}",
                        j + 1,
                        i + 1,
                        grid[j][i],
                        i + 1,
                        j + 1,
                        grid[i][j]
                    ),
                ));
            }
            if i == j || kind == GameKind::Symmetric {
                continue;
            }
            let (legal, unknown) = match kind {
                GameKind::WeakTournament => (vec![-Rational::one(), Rational::zero(), Rational::one()], Entry::unknown_weak()),
                _ => (vec![-Rational::one(), Rational::one()], Entry::unknown_strict()),
            };
            let ok = match &grid[i][j] {
                Entry::Value(v) => legal.contains(v),
                Entry::Interval(lo, hi) => kind == GameKind::WeakTournament && *lo == -Rational::one() && hi.is_one(),
                e => *e == unknown,
            };
            if !ok {
                let msg = if kind == GameKind::Tournament && grid[i][j] == Entry::Value(Rational::zero()) {
                    format!("illegal tie at ({}, {}): tournaments need 1 or -1 off the diagonal", i + 1, j + 1)
                } else {
                    let legal: Vec<String> = legal.iter().map(Rational::to_string).collect();
                    format!("entry ({}, {}) is {}; expected one of {} or {unknown}", i + 1, j + 1, grid[i][j], legal.join(", "))
                };
                return Err(at(i, j, msg));
            }
        }
    }
    Ok(())
}

/// Writes `inst` in the game file format; `parse_game` reads it back unchanged.
pub fn emit_game(inst: &Instance) -> String {
    let g = inst.game();
    let kind = inst.kind();
    let mut out = format!("{} {} {}\n", kind.name(), g.rows(), g.cols());
    if kind == GameKind::Matrix {
        let _ = writeln!(out, "rows: {}", g.row_labels().join(" "));
        let _ = writeln!(out, "cols: {}", g.col_labels().join(" "));
    } else {
        let _ = writeln!(out, "labels: {}", g.row_labels().join(" "));
    }
    let cells: Vec<Vec<String>> = (0..g.rows())
        .map(|i| (0..g.cols()).map(|j| g.entry(i, j).to_string()).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

/// Parses DIMACS CNF: `c` comment lines, a `p cnf VARS CLAUSES` line, then
/// zero-terminated clauses.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let lineno = k + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('%') {
            continue;
        }
        if trimmed.starts_with('p') {
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["p", "cnf", v, c] => v.parse().ok().zip(c.parse().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or_else(|| parse_err(lineno, 1, "expected 'p cnf VARS CLAUSES'"))?);
            continue;
        }
        let (vars, _) = header.ok_or_else(|| parse_err(lineno, 1, "clause before the 'p cnf' header"))?;
        let mut column = 1;
        for tok in line.split_whitespace() {
            column = line[column - 1..].find(tok).map_or(column, |o| column + o);
            let lit: i32 = tok
                .parse()
                .map_err(|_| parse_err(lineno, column, format!("expected an integer literal, got '{tok}'")))?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(parse_err(lineno, column, "empty clause"));
                }
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() as usize > vars {
                return Err(parse_err(lineno, column, format!("literal {lit} exceeds the declared {vars} variables")));
            } else {
                current.push(lit);
            }
            column += tok.len();
        }
    }
    let (vars, count) = header.ok_or_else(|| parse_err(1, 1, "missing 'p cnf' header"))?;
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != count {
        return Err(parse_err(1, 1, format!("header declares {count} clauses, found {}", clauses.len())));
    }
    CnfFormula::new(vars, clauses)
}

pub fn emit_dimacs(phi: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", phi.num_vars(), phi.clauses().len());
    for c in phi.clauses() {
        let lits: Vec<String> = c.iter().map(i32::to_string).collect();
        let _ = writeln!(out, "{} 0", lits.join(" "));
    }
    out
}

/// Parses `universe: e1 e2 ...`, one `subset: ...` line per subset (possibly
/// empty) and `budget: K`. `#` starts a comment.
pub fn parse_set_cover(text: &str) -> Result<SetCoverInstance> {
    let mut universe: Option<Vec<String>> = None;
    let mut index = BTreeMap::new();
    let mut subsets = Vec::new();
    let mut budget = None;
    for (k, raw) in text.lines().enumerate() {
        let toks = tokenize(raw, k + 1)?;
        let Some((head, rest)) = toks.split_first() else { continue };
        match head.text.as_str() {
            "universe:" => {
                let names: Vec<String> = rest.iter().map(|t| t.text.clone()).collect();
                for (e, name) in names.iter().enumerate() {
                    if index.insert(name.clone(), e).is_some() {
                        return Err(parse_err(rest[e].line, rest[e].column, format!("element '{name}' listed twice")));
                    }
                }
                universe = Some(names);
            }
            "subset:" => {
                if universe.is_none() {
                    return Err(parse_err(head.line, head.column, "subset before the universe line"));
                }
                let mut s = BTreeSet::new();
                for t in rest {
                    let e = index
                        .get(&t.text)
                        .ok_or_else(|| parse_err(t.line, t.column, format!("'{}' is not in the universe", t.text)))?;
                    s.insert(*e);
                }
                subsets.push(s);
            }
            "budget:" => {
                let t = rest.first().ok_or_else(|| parse_err(head.line, head.column, "budget needs a value"))?;
                budget = Some(t.text.parse::<usize>().map_err(|_| {
                    parse_err(t.line, t.column, format!("budget must be a positive integer, got '{}'", t.text))
                })?);
            }
            other => {
                return Err(parse_err(
                    head.line,
                    head.column,
                    format!("unknown line '{other}'; expected universe:, subset: or budget:"),
                ))
            }
        }
    }
    let universe = universe.ok_or_else(|| parse_err(1, 1, "missing universe line"))?;
    let k = budget.ok_or_else(|| parse_err(1, 1, "missing budget line"))?;
    SetCoverInstance::new(universe, subsets, k)
}

pub fn emit_set_cover(inst: &SetCoverInstance) -> String {
    let mut out = format!("universe: {}\n", inst.universe.join(" "));
    for s in &inst.subsets {
        let names: Vec<&str> = s.iter().map(|&e| inst.universe[e].as_str()).collect();
        let _ = writeln!(out, "subset: {}", names.join(" "));
    }
    let _ = writeln!(out, "budget: {}", inst.k);
    out
}
