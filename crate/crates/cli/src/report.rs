//! Result documents and their text and JSON renderings.

use std::fmt::Write as _;

use incgames::bench::BenchReport;
use incgames::incomplete::{IncompleteMatrixGame, QueryMode, QueryResult};
use incgames::matrix::{EquilibriumResult, EssentialSet, Strategy};
use incgames::{Game, Rational};
use serde::Serialize;

#[derive(Serialize)]
pub struct Probability {
    pub action: String,
    pub probability: Rational,
}

#[derive(Serialize)]
pub struct EquilibriumDoc {
    pub value: Rational,
    pub row: Vec<Probability>,
    pub column: Vec<Probability>,
    pub quasi_strict: bool,
}

impl EquilibriumDoc {
    fn new(rows: &[String], cols: &[String], eq: &EquilibriumResult<Rational>) -> Self {
        let side = |labels: &[String], s: &Strategy<Rational>| {
            labels
                .iter()
                .zip(&s.probabilities)
                .map(|(l, p)| Probability {
                    action: l.clone(),
                    probability: p.clone(),
                })
                .collect()
        };
        EquilibriumDoc {
            value: eq.value.clone(),
            row: side(rows, &eq.row),
            column: side(cols, &eq.column),
            quasi_strict: eq.quasi_strict,
        }
    }

    fn write_text(&self, out: &mut String) {
        let side = |ps: &[Probability]| ps.iter().map(|p| format!("{}={}", p.action, p.probability)).collect::<Vec<_>>().join(" ");
        let _ = writeln!(out, "value: {}", self.value);
        let _ = writeln!(out, "row strategy: {}", side(&self.row));
        let _ = writeln!(out, "column strategy: {}", side(&self.column));
        let _ = writeln!(out, "quasi-strict: {}", self.quasi_strict);
    }
}

#[derive(Serialize)]
pub struct EssentialDoc {
    pub rows: Vec<String>,
    pub columns: Vec<String>,
}

#[derive(Serialize)]
pub struct SolveDoc {
    pub kind: String,
    pub equilibrium: EquilibriumDoc,
    pub essential_set: EssentialDoc,
}

impl SolveDoc {
    pub fn new(kind: &str, g: &Game, eq: &EquilibriumResult<Rational>, es: &EssentialSet) -> Self {
        let pick = |labels: &[String], set: &std::collections::BTreeSet<usize>| set.iter().map(|&i| labels[i].clone()).collect();
        SolveDoc {
            kind: kind.to_string(),
            equilibrium: EquilibriumDoc::new(g.row_labels(), g.col_labels(), eq),
            essential_set: EssentialDoc {
                rows: pick(g.row_labels(), &es.rows),
                columns: pick(g.col_labels(), &es.cols),
            },
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("kind: {}\n", self.kind);
        self.equilibrium.write_text(&mut out);
        let _ = writeln!(out, "essential rows: {}", self.essential_set.rows.join(" "));
        let _ = writeln!(out, "essential columns: {}", self.essential_set.columns.join(" "));
        out
    }
}

#[derive(Serialize)]
pub struct WitnessEntry {
    pub row: String,
    pub column: String,
    pub value: Rational,
}

#[derive(Serialize)]
pub struct StatsDoc {
    pub completions: u64,
    pub lp_solves: u64,
    pub bnb_nodes: u64,
    pub wall_ms: u128,
}

#[derive(Serialize)]
pub struct QueryDoc {
    pub query: QueryMode,
    pub method: String,
    pub action: String,
    pub answer: bool,
    pub witness: Option<Vec<WitnessEntry>>,
    pub equilibrium: Option<EquilibriumDoc>,
    pub stats: StatsDoc,
}

impl QueryDoc {
    pub fn new(g: &IncompleteMatrixGame, mode: QueryMode, method: &str, action: &str, r: &QueryResult) -> Self {
        let (rows, cols) = (g.row_labels(), g.col_labels());
        // symmetric pairs are reported above the diagonal
        let witness = r.witness.as_ref().map(|w| {
            w.choices
                .iter()
                .map(|&((i, j), ref v)| {
                    let (i, j, v) = if g.is_symmetric() && i > j { (j, i, -v) } else { (i, j, v.clone()) };
                    WitnessEntry {
                        row: rows[i].clone(),
                        column: cols[j].clone(),
                        value: v,
                    }
                })
                .collect()
        });
        QueryDoc {
            query: mode,
            method: method.to_string(),
            action: action.to_string(),
            answer: r.answer,
            witness,
            equilibrium: r.equilibrium.as_ref().map(|eq| EquilibriumDoc::new(rows, cols, eq)),
            stats: StatsDoc {
                completions: r.stats.completions,
                lp_solves: r.stats.lp_solves,
                bnb_nodes: r.stats.bnb_nodes,
                wall_ms: r.stats.wall.as_millis(),
            },
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "query: {} {}", self.query, self.action);
        let _ = writeln!(out, "method: {}", self.method);
        let _ = writeln!(out, "answer: {}", self.answer);
        if let Some(w) = &self.witness {
            let _ = writeln!(out, "witness:");
            for e in w {
                let _ = writeln!(out, "  ({}, {}) = {}", e.row, e.column, e.value);
            }
        }
        if let Some(eq) = &self.equilibrium {
            eq.write_text(&mut out);
        }
        let s = &self.stats;
        let _ = writeln!(
            out,
            "stats: completions={} lp_solves={} bnb_nodes={} wall_ms={}",
            s.completions, s.lp_solves, s.bnb_nodes, s.wall_ms
        );
        out
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn summary_table(report: &BenchReport) -> String {
    let mut out = format!(
        "{:>4} {:>4} {:>6} {:>7} {:>7} {:>9} {:>12} {:>12} {:>14} {:>10}\n",
        "n", "u", "method", "solved", "timeout", "trials", "mean_ms", "median_ms", "completions", "nodes"
    );
    for r in &report.summary {
        let _ = writeln!(
            out,
            "{:>4} {:>4} {:>6} {:>7} {:>7} {:>9} {:>12.2} {:>12.2} {:>14.1} {:>10.1}",
            r.n,
            r.unspecified,
            r.method.name(),
            r.solved,
            r.timeouts,
            r.trials,
            r.mean_ms,
            r.median_ms,
            r.mean_completions,
            r.mean_bnb_nodes
        );
    }
    for (m, n) in &report.cut_off {
        let _ = writeln!(out, "{} cut off after n = {n}", m.name());
    }
    out
}
