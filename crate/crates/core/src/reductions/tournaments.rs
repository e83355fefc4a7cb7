use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::tournament::{Digraph, Tournament};

use super::labels;

/// Cyclone on `a1..an`: `a_i ≻ a_j` iff `(j − i) mod n ∈ {1, …, (n−1)/2}`.
pub fn cyclone(n: usize) -> Result<Tournament> {
    if n % 2 == 0 {
        return Err(Error::input(format!("cyclone size must be odd, got {n}")));
    }
    let mut d = Digraph::new(labels("a", 1..=n));
    cyclone_edges(&mut d, &(0..n).collect::<Vec<_>>());
    Tournament::new(d)
}

/// Orients `vertices` (odd count) as a cyclone in the given order.
pub(super) fn cyclone_edges(d: &mut Digraph, vertices: &[usize]) {
    let n = vertices.len();
    for i in 0..n {
        for step in 1..=(n - 1) / 2 {
            d.set_win(vertices[i], vertices[(i + step) % n]);
        }
    }
}

/// `B_k` on `x*, a1, b1, …, ak, bk`.
pub fn b_k(k: usize) -> Tournament {
    let mut names = vec!["x*".to_string()];
    for i in 1..=k {
        names.push(format!("a{i}"));
        names.push(format!("b{i}"));
    }
    let mut d = Digraph::new(names);
    b_k_edges(&mut d, &(0..=2 * k).collect::<Vec<_>>());
    Tournament::new(d).expect("B_k is a tournament")
}

/// Orients `vertices = [x*, a1, b1, …]` as `B_k`.
pub(super) fn b_k_edges(d: &mut Digraph, vertices: &[usize]) {
    let k = (vertices.len() - 1) / 2;
    for level in 1..=k {
        let (a, b) = (vertices[2 * level - 1], vertices[2 * level]);
        for &inner in &vertices[..2 * level - 1] {
            d.set_win(inner, a);
            d.set_win(b, inner);
        }
        d.set_win(a, b);
    }
}

/// Product `Π(T̃, T_1, …, T_k)`: components replace the summary's vertices.
#[derive(Debug, Clone)]
pub struct TournamentProductSpec {
    pub summary: Tournament,
    pub components: Vec<Tournament>,
}

impl TournamentProductSpec {
    pub fn new(summary: Tournament, components: Vec<Tournament>) -> Result<Self> {
        if summary.len() != components.len() {
            return Err(Error::input(format!(
                "summary has {} vertices but {} components were given",
                summary.len(),
                components.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for c in &components {
            if c.is_empty() {
                return Err(Error::input("components must be nonempty"));
            }
            for l in c.labels() {
                if !seen.insert(l.clone()) {
                    return Err(Error::input(format!("vertex '{l}' appears in two components")));
                }
            }
        }
        Ok(TournamentProductSpec { summary, components })
    }

    /// Component index of every vertex of the product, in product order.
    pub fn block_of(&self) -> Vec<usize> {
        self.components
            .iter()
            .enumerate()
            .flat_map(|(i, c)| std::iter::repeat(i).take(c.len()))
            .collect()
    }
}

pub fn product_tournament(spec: &TournamentProductSpec) -> Result<Tournament> {
    let spec = TournamentProductSpec::new(spec.summary.clone(), spec.components.clone())?;
    let names = spec.components.iter().flat_map(|c| c.labels().iter().cloned()).collect();
    let block = spec.block_of();
    let mut local = Vec::with_capacity(block.len());
    for c in &spec.components {
        local.extend(0..c.len());
    }
    let mut d = Digraph::new(names);
    for u in 0..block.len() {
        for v in u + 1..block.len() {
            let e = if block[u] == block[v] {
                spec.components[block[u]].edge(local[u], local[v])
            } else {
                spec.summary.edge(block[u], block[v])
            };
            d.set(u, v, e);
        }
    }
    Tournament::new(d)
}
