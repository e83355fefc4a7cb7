use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tournament::{Digraph, Edge, IncompleteTournament, IncompleteWeakTournament, Tournament};

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Draws every pair in order from `choices`, then marks `u` distinct pairs unspecified.
fn sample_digraph(n: usize, u: usize, seed: u64, choices: &[Edge]) -> Result<Digraph> {
    let all = pairs(n);
    if u > all.len() {
        return Err(Error::input(format!(
            "cannot leave {u} pairs unspecified among {} pairs",
            all.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = Digraph::with_size(n);
    for &(i, j) in &all {
        d.set(i, j, choices[rng.gen_range(0..choices.len())]);
    }
    let mut picked = sample(&mut rng, all.len(), u).into_vec();
    picked.sort_unstable();
    for k in picked {
        let (i, j) = all[k];
        d.set(i, j, Edge::Unspecified);
    }
    Ok(d)
}

/// Each pair uniform over win/tie/loss, then `u` pairs chosen uniformly without
/// replacement left unspecified. ChaCha8 seeded from `seed`.
pub fn random_incomplete_weak_tournament(n: usize, u: usize, seed: u64) -> Result<IncompleteWeakTournament> {
    IncompleteWeakTournament::new(sample_digraph(n, u, seed, &[Edge::Loss, Edge::Tie, Edge::Win])?)
}

/// As [`random_incomplete_weak_tournament`] with every specified pair a win or a loss.
pub fn random_incomplete_tournament(n: usize, u: usize, seed: u64) -> Result<IncompleteTournament> {
    IncompleteTournament::new(sample_digraph(n, u, seed, &[Edge::Loss, Edge::Win])?)
}

pub fn random_tournament<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Tournament {
    let mut d = Digraph::with_size(n);
    for (i, j) in pairs(n) {
        d.set(i, j, if rng.gen_bool(0.5) { Edge::Win } else { Edge::Loss });
    }
    Tournament::new(d).expect("every pair oriented")
}
