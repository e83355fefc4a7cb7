//! Instance generators: alternating games, structured tournaments, random
//! instances and the hardness reductions from SetCover, SAT and 3SAT.

mod alternating;
mod random;
mod sat;
mod setcover;
mod tournaments;

pub use alternating::{alternating_determinant, alternating_game, AlternatingGameSpec};
pub use random::{random_incomplete_tournament, random_incomplete_weak_tournament, random_tournament};
pub use sat::{
    complete_by_assignment, normalize_3cnf, sat_to_necessary_weak_tournament, sat_to_weak_tournament,
    threesat_to_possible_tournament, threesat_to_tournament, Assignment, CnfFormula, SatReduction,
    SatTournament, SatWeakTournament,
};
pub use setcover::{setcover_to_necessary_game, setcover_to_possible_game, SetCoverConstants, SetCoverGame, SetCoverInstance};
pub use tournaments::{b_k, cyclone, product_tournament, TournamentProductSpec};

fn labels(prefix: &str, range: std::ops::RangeInclusive<usize>) -> Vec<String> {
    range.map(|i| format!("{prefix}{i}")).collect()
}
