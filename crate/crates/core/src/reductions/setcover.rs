use std::collections::BTreeSet;

use num_traits::One;

use crate::error::{Error, Result};
use crate::incomplete::{Entry, IncompleteMatrixGame};
use crate::matrix::Action;
use crate::rational::Rational;

use super::alternating::alternating_entry;
use super::labels;

/// Subsets are index sets into `universe`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverInstance {
    pub universe: Vec<String>,
    pub subsets: Vec<BTreeSet<usize>>,
    pub k: usize,
}

impl SetCoverInstance {
    pub fn new(universe: Vec<String>, subsets: Vec<BTreeSet<usize>>, k: usize) -> Result<Self> {
        let inst = SetCoverInstance { universe, subsets, k };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        if self.subsets.is_empty() {
            return Err(Error::input("set cover instance needs at least one subset"));
        }
        if self.k < 1 || self.k > self.subsets.len() {
            return Err(Error::input(format!(
                "budget k = {} must lie in 1..={}",
                self.k,
                self.subsets.len()
            )));
        }
        let distinct: BTreeSet<&String> = self.universe.iter().collect();
        if distinct.len() != self.universe.len() {
            return Err(Error::input("universe elements must be distinct"));
        }
        for (i, s) in self.subsets.iter().enumerate() {
            if let Some(e) = s.iter().find(|&&e| e >= self.universe.len()) {
                return Err(Error::input(format!("subset {} refers to element {e} outside the universe", i + 1)));
            }
        }
        Ok(())
    }

    fn fresh_element(&mut self) -> usize {
        let mut t = self.universe.len() + 1;
        while self.universe.iter().any(|u| *u == format!("u{t}")) {
            t += 1;
        }
        self.universe.push(format!("u{t}"));
        self.universe.len() - 1
    }

    /// An element outside every subset makes the instance trivially uncoverable, a
    /// case the constructions do not encode; such instances become a fixed no-instance.
    fn with_coverable_elements(&self, normalization: &mut Vec<String>) -> SetCoverInstance {
        let missing: Vec<&str> = (0..self.universe.len())
            .filter(|e| self.subsets.iter().all(|s| !s.contains(e)))
            .map(|e| self.universe[e].as_str())
            .collect();
        if missing.is_empty() {
            return self.clone();
        }
        normalization.push(format!(
            "element(s) {} lie in no subset: replaced by the uncoverable instance U = {{u1, u2}}, S1 = {{u1}}, S2 = {{u2}}, k = 1",
            missing.join(", ")
        ));
        SetCoverInstance {
            universe: vec!["u1".into(), "u2".into()],
            subsets: vec![BTreeSet::from([0]), BTreeSet::from([1])],
            k: 1,
        }
    }

    /// Adds a singleton subset of a fresh element and raises the budget by one.
    fn pad_singleton(&mut self) {
        let e = self.fresh_element();
        self.subsets.push(BTreeSet::from([e]));
        self.k += 1;
    }
}

/// Derived constants of the SetCover games.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverConstants {
    /// Number of columns of the alternating block `L`.
    pub big_n: usize,
    pub h: Rational,
    pub p_min: Rational,
    pub p_max: Rational,
    pub y: Rational,
    pub x: Rational,
    /// `1/n⁴`; only used by the necessary construction.
    pub v: Rational,
    pub epsilon: Rational,
    pub g: Rational,
}

impl SetCoverConstants {
    fn new(n: usize, big_n: usize) -> Self {
        let nn = Rational::from(big_n as i64);
        let n3 = nn.pow(3);
        let h = Rational::from((big_n as i64 - 1).pow(2)) * &n3;
        let two = Rational::from(2);
        let p_min = nn.recip() - &two / &n3;
        let p_max = nn.recip() + &two / &n3;
        let y = Rational::from(2 * n as i64) / &p_min;
        let x = -(&two / &p_max);
        let v = Rational::from(n as i64).pow(4).recip();
        let epsilon = (nn.pow(2) * (&y + &x) + Rational::one()).recip();
        let g = &two * &h / &epsilon;
        SetCoverConstants {
            big_n,
            h,
            p_min,
            p_max,
            y,
            x,
            v,
            epsilon,
            g,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SetCoverGame {
    pub game: IncompleteMatrixGame,
    /// The distinguished row (`r_star` or `r_prime`).
    pub action: Action,
    /// The instance after padding; the game encodes this one.
    pub instance: SetCoverInstance,
    pub constants: SetCoverConstants,
    /// Human-readable description of each padding step.
    pub normalization: Vec<String>,
}

/// Rows `S{i}_1, S{i}_2` for each subset, then `extra` rows `x{i}`, then the special row.
/// Columns `c1..cN` then `s1..s|U|`.
fn build(
    inst: &SetCoverInstance,
    extra: usize,
    c: &SetCoverConstants,
    diag_set: Entry,
    r_values: (&Rational, &Rational),
    special: (&str, Rational, Rational),
) -> Result<IncompleteMatrixGame> {
    let n = inst.subsets.len();
    let big_n = c.big_n;
    debug_assert_eq!(big_n, n + extra);
    let zero = Rational::from(0);
    let mut rows = Vec::with_capacity(2 * n + extra + 1);
    let mut row_labels = Vec::with_capacity(rows.capacity());
    let l_row = |idx: usize, diag: Entry| -> Vec<Entry> {
        (0..big_n)
            .map(|col| {
                if col == idx {
                    diag.clone()
                } else {
                    Entry::Value(alternating_entry(idx, col, &c.h))
                }
            })
            .collect()
    };
    for (i, s) in inst.subsets.iter().enumerate() {
        for (copy, diag, r) in [(1, Entry::value(0), r_values.0), (2, diag_set.clone(), r_values.1)] {
            let mut row = l_row(i, diag);
            row.extend((0..inst.universe.len()).map(|e| Entry::Value(if s.contains(&e) { r.clone() } else { zero.clone() })));
            rows.push(row);
            row_labels.push(format!("S{}_{copy}", i + 1));
        }
    }
    for t in 0..extra {
        let mut row = l_row(n + t, Entry::value(-1));
        row.extend(std::iter::repeat(Entry::Value(zero.clone())).take(inst.universe.len()));
        rows.push(row);
        row_labels.push(format!("x{}", t + 1));
    }
    let (name, on_l, off_l) = special;
    let mut row: Vec<Entry> = vec![Entry::Value(on_l); big_n];
    row.extend(std::iter::repeat(Entry::Value(off_l)).take(inst.universe.len()));
    rows.push(row);
    row_labels.push(name.to_string());
    let mut col_labels = labels("c", 1..=big_n);
    col_labels.extend(labels("s", 1..=inst.universe.len()));
    IncompleteMatrixGame::new(rows)?.with_labels(row_labels, col_labels)
}

/// Game in which `r_star` is a necessary equilibrium action iff no cover of size `k` exists.
///
/// An even budget is made odd by adding a singleton of a fresh element; an alternating
/// block of size 1 is widened by two more such singletons.
pub fn setcover_to_necessary_game(inst: &SetCoverInstance) -> Result<SetCoverGame> {
    inst.validate()?;
    let mut normalization = Vec::new();
    let mut inst = inst.with_coverable_elements(&mut normalization);
    if inst.k % 2 == 0 {
        inst.pad_singleton();
        normalization.push(format!("budget made odd: added singleton subset S{} and raised k to {}", inst.subsets.len(), inst.k));
    }
    if 2 * inst.subsets.len() - inst.k < 3 {
        inst.pad_singleton();
        inst.pad_singleton();
        normalization.push(format!(
            "alternating block widened: added two singleton subsets and raised k to {}",
            inst.k
        ));
    }
    let n = inst.subsets.len();
    let big_n = 2 * n - inst.k;
    let c = SetCoverConstants::new(n, big_n);
    let game = build(
        &inst,
        n - inst.k,
        &c,
        Entry::unknown_strict(),
        (&c.y, &c.x),
        ("r_star", -c.v.clone(), c.g.clone()),
    )?;
    Ok(SetCoverGame {
        action: Action::Row(game.rows() - 1),
        game,
        instance: inst,
        constants: c,
        normalization,
    })
}

/// Game in which `r_prime` is a possible equilibrium action iff a cover of size `k` exists.
///
/// When `n + k` is even an empty subset is added.
pub fn setcover_to_possible_game(inst: &SetCoverInstance) -> Result<SetCoverGame> {
    inst.validate()?;
    let mut normalization = Vec::new();
    let mut inst = inst.with_coverable_elements(&mut normalization);
    if (inst.subsets.len() + inst.k) % 2 == 0 {
        inst.subsets.push(BTreeSet::new());
        normalization.push(format!("n + k made odd: added empty subset S{}", inst.subsets.len()));
    }
    let n = inst.subsets.len();
    let big_n = n + inst.k;
    let c = SetCoverConstants::new(n, big_n);
    let game = build(
        &inst,
        inst.k,
        &c,
        Entry::unknown_strict(),
        (&c.x, &c.y),
        ("r_prime", Rational::from(0), -c.g.clone()),
    )?;
    Ok(SetCoverGame {
        action: Action::Row(game.rows() - 1),
        game,
        instance: inst,
        constants: c,
        normalization,
    })
}
