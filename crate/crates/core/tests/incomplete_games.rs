mod common;

use std::collections::BTreeSet;

use common::{q, random_incomplete_game, with_symmetric_pair};
use incgames::incomplete::{
    necessary_action, possible_action, query_action, CompletionAssignment, Entry, IncompleteMatrixGame, QueryMode, QueryOptions,
};
use incgames::matrix::{essential_set, is_equilibrium, Action, EquilibriumCheck, MatrixGame};
use incgames::reductions::{sat_to_weak_tournament, CnfFormula};
use incgames::{Error, Rational};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn v(x: i64) -> Entry {
    Entry::value(x)
}

fn labels(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// a ≻ b ≻ c ≻ d, a ~ c, b ~ d, and the pair (a, d) unknown in {-1, 0, 1}.
fn four_actions() -> IncompleteMatrixGame {
    let u = Entry::unknown_weak();
    IncompleteMatrixGame::new_symmetric(vec![
        vec![v(0), v(1), v(0), u.clone()],
        vec![v(-1), v(0), v(1), v(0)],
        vec![v(0), v(-1), v(0), v(1)],
        vec![u, v(0), v(-1), v(0)],
    ])
    .unwrap()
    .with_labels(labels(&["a", "b", "c", "d"]), labels(&["a", "b", "c", "d"]))
    .unwrap()
}

/// Rows t, b and columns l, r with `u(b, l)` in {-1, 1}.
fn two_by_two() -> IncompleteMatrixGame {
    IncompleteMatrixGame::new(vec![vec![v(-2), v(1)], vec![Entry::unknown_strict(), v(0)]])
        .unwrap()
        .with_labels(labels(&["t", "b"]), labels(&["l", "r"]))
        .unwrap()
}

fn rps() -> IncompleteMatrixGame {
    IncompleteMatrixGame::new_symmetric(vec![vec![v(0), v(1), v(-1)], vec![v(-1), v(0), v(1)], vec![v(1), v(-1), v(0)]]).unwrap()
}

fn set(xs: &[usize]) -> BTreeSet<usize> {
    xs.iter().copied().collect()
}

#[test]
fn four_action_game_has_three_completions() {
    let g = four_actions();
    assert_eq!(g.enumerate_completions().unwrap().count(), 3);
    assert_eq!(g.completion_count().unwrap(), 3u32.into());
}

#[test]
fn completion_counts() {
    assert_eq!(rps().enumerate_completions().unwrap().count(), 1);
    let (a, _) = rps().enumerate_completions().unwrap().next().unwrap();
    assert!(a.is_empty());
    let g = IncompleteMatrixGame::new(vec![vec![Entry::unknown_strict(), v(0)], vec![v(0), Entry::unknown_strict()]]).unwrap();
    assert_eq!(g.enumerate_completions().unwrap().count(), 4);
}

#[test]
fn enumeration_order_is_lexicographic_and_ascending() {
    let g = IncompleteMatrixGame::new(vec![vec![Entry::unknown_strict(), Entry::set([q(1, 2), q(-1, 2)]).unwrap()]]).unwrap();
    let seen: Vec<Vec<Rational>> = g
        .enumerate_completions()
        .unwrap()
        .map(|(a, _)| a.choices.into_iter().map(|(_, x)| x).collect())
        .collect();
    let want = vec![
        vec![q(-1, 1), q(-1, 2)],
        vec![q(-1, 1), q(1, 2)],
        vec![q(1, 1), q(-1, 2)],
        vec![q(1, 1), q(1, 2)],
    ];
    assert_eq!(seen, want);
}

#[test]
fn intervals_must_be_canonicalized_before_enumeration() {
    let g = IncompleteMatrixGame::new_symmetric(vec![
        vec![v(0), Entry::interval(q(-1, 1), q(1, 1)).unwrap()],
        vec![Entry::interval(q(-1, 1), q(1, 1)).unwrap(), v(0)],
    ])
    .unwrap();
    assert!(matches!(g.enumerate_completions(), Err(Error::Input(_))));
    let c = g.canonicalize_intervals().unwrap();
    assert_eq!(*c.entry(0, 1), Entry::unknown_weak());
    assert_eq!(c.enumerate_completions().unwrap().count(), 3);
}

#[test]
fn canonicalization_scope() {
    assert_eq!(four_actions().canonicalize_intervals().unwrap(), four_actions());
    let wide = Entry::interval(q(-2, 1), q(2, 1)).unwrap();
    let g = IncompleteMatrixGame::new_symmetric(vec![vec![v(0), wide.clone()], vec![wide, v(0)]]).unwrap();
    assert!(matches!(g.canonicalize_intervals(), Err(Error::Unsupported(_))));
    let asym = IncompleteMatrixGame::new(vec![vec![Entry::interval(q(-1, 1), q(1, 1)).unwrap()]]).unwrap();
    assert!(matches!(asym.canonicalize_intervals(), Err(Error::Unsupported(_))));
    let unit = Entry::interval(q(-1, 1), q(1, 1)).unwrap();
    let big = IncompleteMatrixGame::new_symmetric(vec![
        vec![v(0), unit.clone(), v(2)],
        vec![unit, v(0), v(0)],
        vec![v(-2), v(0), v(0)],
    ])
    .unwrap();
    assert!(matches!(big.canonicalize_intervals(), Err(Error::Unsupported(_))));
}

#[test]
fn possible_a_via_the_positive_completion() {
    let g = four_actions();
    let a = g.action("a").unwrap();
    let res = possible_action(&g, a).unwrap();
    assert!(res.answer);
    let w = res.witness.unwrap();
    // stored below the diagonal: m(d, a) = -1, i.e. m(a, d) = 1
    assert_eq!(w.get(0, 3), Some(q(1, 1)));
    let completion = g.complete(&w).unwrap();
    let es = essential_set(&completion);
    assert_eq!(es.rows, set(&[0, 2]));
    assert_eq!(res.equilibrium.unwrap().row.support(), set(&[0, 2]));
}

#[test]
fn possible_b_via_the_negative_completion() {
    let g = four_actions();
    let res = possible_action(&g, g.action("b").unwrap()).unwrap();
    assert!(res.answer);
    let w = res.witness.unwrap();
    assert_eq!(w.get(0, 3), Some(q(-1, 1)));
    assert!(essential_set(&g.complete(&w).unwrap()).rows.contains(&1));
    assert_eq!(res.stats.completions, 3);
}

#[test]
fn necessary_t_fails_on_the_negative_completion() {
    let g = two_by_two();
    let res = necessary_action(&g, g.action("t").unwrap()).unwrap();
    assert!(!res.answer);
    let w = res.witness.unwrap();
    assert_eq!(w.get(1, 0), Some(q(-1, 1)));
    let eq = res.equilibrium.unwrap();
    assert_eq!(eq.row.probabilities, vec![q(0, 1), q(1, 1)]);

    let positive = g
        .complete(&CompletionAssignment {
            choices: vec![((1, 0), q(1, 1))],
        })
        .unwrap();
    let eq = incgames::matrix::quasi_strict_equilibrium(&positive);
    assert_eq!(eq.row.probabilities[0], q(1, 4));
    assert_eq!(eq.column.probabilities[0], q(1, 4));
}

#[test]
fn complete_games_answer_by_their_essential_set() {
    let g = rps();
    let rock = Action::Row(0);
    assert!(possible_action(&g, rock).unwrap().answer);
    let nec = necessary_action(&g, rock).unwrap();
    assert!(nec.answer);
    assert!(nec.witness.is_none());
}

#[test]
fn bad_actions_are_input_errors() {
    assert!(matches!(four_actions().action("z"), Err(Error::Input(_))));
    assert!(matches!(possible_action(&rps(), Action::Row(7)), Err(Error::Input(_))));
}

#[test]
fn completion_guard() {
    let g = four_actions();
    let tight = QueryOptions {
        limit: 2,
        ..Default::default()
    };
    assert!(matches!(
        query_action(&g, Action::Row(0), QueryMode::Possible, &tight),
        Err(Error::TooManyCompletions { .. })
    ));
    let forced = QueryOptions { force: true, ..tight };
    assert!(query_action(&g, Action::Row(0), QueryMode::Possible, &forced).unwrap().answer);
}

/// Every completion's ES, without early exit.
fn reference(g: &IncompleteMatrixGame, a: Action) -> (bool, bool) {
    let memberships: Vec<bool> = g
        .enumerate_completions()
        .unwrap()
        .map(|(_, game)| essential_set(&game).contains(a))
        .collect();
    (memberships.iter().any(|&x| x), memberships.iter().all(|&x| x))
}

fn check_against_reference(g: &IncompleteMatrixGame) -> Result<(), TestCaseError> {
    let actions: Vec<Action> = (0..g.rows()).map(Action::Row).chain((0..g.cols()).map(Action::Column)).collect();
    for a in actions {
        let (any, all) = reference(g, a);
        for parallel in [false, true] {
            let opts = QueryOptions {
                parallel,
                ..Default::default()
            };
            let pos = query_action(g, a, QueryMode::Possible, &opts).unwrap();
            let nec = query_action(g, a, QueryMode::Necessary, &opts).unwrap();
            prop_assert_eq!(pos.answer, any);
            prop_assert_eq!(nec.answer, all);
            // witnesses exist exactly on the deciding side and reproduce the claim
            prop_assert_eq!(pos.witness.is_some(), any);
            prop_assert_eq!(nec.witness.is_some(), !all);
            if let Some(w) = &pos.witness {
                prop_assert!(essential_set(&g.complete(w).unwrap()).contains(a));
            }
            if let Some(w) = &nec.witness {
                let game = g.complete(w).unwrap();
                prop_assert!(!essential_set(&game).contains(a));
                let eq = nec.equilibrium.as_ref().unwrap();
                prop_assert_eq!(is_equilibrium(&game, &eq.row, &eq.column).unwrap(), EquilibriumCheck::Yes);
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn queries_match_the_no_early_exit_reference(seed in any::<u64>(), symmetric in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_incomplete_game(&mut rng, symmetric, 2);
        prop_assume!(g.completion_count().unwrap() <= 6u32.into());
        check_against_reference(&g)?;
    }

    #[test]
    fn symmetric_completions_stay_symmetric(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_incomplete_game(&mut rng, true, 3);
        for (_, game) in g.enumerate_completions().unwrap() {
            prop_assert!(game.is_symmetric());
            prop_assert!(MatrixGame::new_symmetric(game.to_rows()).is_ok());
        }
    }
}

#[test]
fn each_completion_appears_once() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let g = random_incomplete_game(&mut rng, false, 3);
        let all: Vec<_> = g.enumerate_completions().unwrap().map(|(a, _)| a).collect();
        let distinct: BTreeSet<String> = all.iter().map(|a| format!("{a:?}")).collect();
        assert_eq!(distinct.len(), all.len());
        assert_eq!(num_bigint::BigUint::from(all.len()), g.completion_count().unwrap());
    }
}

/// On a variable block of the SAT weak tournament, any positive value on the
/// unknown pair acts like 1 and any negative value like -1.
#[test]
fn interior_values_act_like_their_sign() {
    let phi = CnfFormula::new(1, vec![vec![1]]).unwrap();
    let w = sat_to_weak_tournament(&phi);
    let block = w.blocks[0].to_vec();
    let block_game = w.tournament.as_digraph().restrict(&block);
    let inc = incgames::tournament::IncompleteWeakTournament::new(block_game).unwrap().to_incomplete_game();
    let full = w.tournament.to_incomplete_game();
    for (g, (i, j)) in [(inc, (0usize, 3usize)), (full, (w.blocks[0][0], w.blocks[0][3]))] {
        let base = g.complete(&CompletionAssignment { choices: vec![((j, i), q(0, 1))] }).unwrap();
        for sign in [1i64, -1] {
            let reference = essential_set(&with_symmetric_pair(&base, i, j, q(sign, 1)));
            for z in [q(1, 4), q(1, 2), q(3, 4), q(1, 1), q(1, 3), q(2, 3), q(1, 5), q(4, 5), q(1, 8), q(7, 8)] {
                let z = &z * &Rational::from(sign);
                assert_eq!(essential_set(&with_symmetric_pair(&base, i, j, z)), reference);
            }
        }
    }
}
