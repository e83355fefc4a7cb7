mod common;

use common::{lp_oracle, q, random_small_lp, OracleOutcome, SmallLp};
use incgames::lp::{solve_lp, LinearProgram, LpOutcome, Relation, Sense};
use incgames::Rational;
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn r(v: i64) -> Rational {
    Rational::from(v)
}

fn to_lp(s: &SmallLp) -> LinearProgram<Rational> {
    let c = s.c.iter().map(|&v| r(v)).collect();
    let mut lp = LinearProgram::new(if s.maximize { Sense::Maximize } else { Sense::Minimize }, c);
    for (a, rel, b) in &s.rows {
        let rel = match rel {
            -1 => Relation::Le,
            0 => Relation::Eq,
            _ => Relation::Ge,
        };
        lp.add_constraint(a.iter().map(|&v| r(v)).collect(), rel, r(*b));
    }
    lp
}

#[test]
fn two_constraint_example() {
    let mut lp = LinearProgram::maximize(vec![r(1), r(1)]);
    lp.add_constraint(vec![r(1), r(2)], Relation::Le, r(4));
    lp.add_constraint(vec![r(1), r(0)], Relation::Le, r(3));
    match solve_lp(&lp).unwrap() {
        LpOutcome::Optimal { solution, objective } => {
            assert_eq!(objective, q(7, 2));
            assert_eq!(solution, vec![r(3), q(1, 2)]);
        }
        other => panic!("expected optimal, got {other:?}"),
    }
}

#[test]
fn contradictory_bounds_are_infeasible() {
    let mut lp = LinearProgram::maximize(vec![r(1)]);
    lp.add_constraint(vec![r(1)], Relation::Le, r(-1));
    assert_eq!(solve_lp(&lp).unwrap(), LpOutcome::Infeasible);
}

#[test]
fn unconstrained_maximum_is_unbounded() {
    let lp = LinearProgram::maximize(vec![r(1)]);
    assert_eq!(solve_lp(&lp).unwrap(), LpOutcome::Unbounded);
}

#[test]
fn dimension_mismatch_is_an_input_error() {
    let mut lp = LinearProgram::maximize(vec![r(1), r(1)]);
    lp.add_constraint(vec![r(1)], Relation::Le, r(1));
    assert!(matches!(solve_lp(&lp), Err(incgames::Error::Input(_))));
}

#[test]
fn free_and_boxed_variables() {
    // min x s.t. x >= -5 given as a bound, x free otherwise
    let mut lp = LinearProgram::minimize(vec![r(1), r(0)]);
    lp.set_bounds(0, Some(r(-5)), None);
    lp.set_bounds(1, None, None);
    lp.add_constraint(vec![r(1), r(1)], Relation::Eq, r(0));
    match solve_lp(&lp).unwrap() {
        LpOutcome::Optimal { solution, objective } => {
            assert_eq!(objective, r(-5));
            assert_eq!(solution, vec![r(-5), r(5)]);
        }
        other => panic!("expected optimal, got {other:?}"),
    }
    let mut lp = LinearProgram::maximize(vec![r(1)]);
    lp.set_bounds(0, Some(q(1, 3)), Some(q(2, 3)));
    assert!(matches!(solve_lp(&lp).unwrap(), LpOutcome::Optimal { objective, .. } if objective == q(2, 3)));
}

/// Beale's example cycles under the textbook largest-coefficient rule.
#[test]
fn beale_cycling_example_terminates() {
    let mut lp = LinearProgram::maximize(vec![q(3, 4), r(-150), q(1, 50), r(-6)]);
    lp.add_constraint(vec![q(1, 4), r(-60), q(-1, 25), r(9)], Relation::Le, r(0));
    lp.add_constraint(vec![q(1, 2), r(-90), q(-1, 50), r(3)], Relation::Le, r(0));
    lp.add_constraint(vec![r(0), r(0), r(1), r(0)], Relation::Le, r(1));
    match solve_lp(&lp).unwrap() {
        LpOutcome::Optimal { objective, .. } => assert_eq!(objective, q(1, 20)),
        other => panic!("expected optimal, got {other:?}"),
    }
}

#[test]
fn highly_degenerate_vertex_terminates() {
    // many constraints through the origin
    let mut lp = LinearProgram::maximize(vec![r(1), r(1), r(1)]);
    for (a, b, c) in [(1, -1, 0), (0, 1, -1), (-1, 0, 1), (1, 1, -2), (2, -1, -1)] {
        lp.add_constraint(vec![r(a), r(b), r(c)], Relation::Le, r(0));
    }
    lp.add_constraint(vec![r(1), r(1), r(1)], Relation::Le, r(3));
    match solve_lp(&lp).unwrap() {
        LpOutcome::Optimal { objective, solution } => {
            assert_eq!(objective, r(3));
            assert!(lp.is_feasible_point(&solution));
        }
        other => panic!("expected optimal, got {other:?}"),
    }
}

#[test]
fn random_lps_match_basic_solution_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut counts = [0usize; 3];
    for _ in 0..200 {
        let s = random_small_lp(&mut rng);
        let lp = to_lp(&s);
        let got = solve_lp(&lp).unwrap();
        let want = lp_oracle(&s);
        match (&got, &want) {
            (LpOutcome::Optimal { solution, objective }, OracleOutcome::Optimal(v)) => {
                assert_eq!(objective, v, "{s:?}");
                assert!(lp.is_feasible_point(solution), "{s:?}");
                assert_eq!(lp.objective_value(solution), *objective);
                counts[0] += 1;
            }
            (LpOutcome::Infeasible, OracleOutcome::Infeasible) => counts[1] += 1,
            (LpOutcome::Unbounded, OracleOutcome::Unbounded) => counts[2] += 1,
            _ => panic!("solver {got:?} vs oracle {want:?} on {s:?}"),
        }
    }
    // the sample exercises every outcome
    assert!(counts.iter().all(|&c| c > 0), "{counts:?}");
}

#[test]
fn solving_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let lp = to_lp(&random_small_lp(&mut rng));
        assert_eq!(solve_lp(&lp).unwrap(), solve_lp(&lp).unwrap());
    }
}

/// The solver is generic: other exact scalars give the same optimum.
#[test]
fn scalar_backends_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..30 {
        let s = random_small_lp(&mut rng);
        let sense = if s.maximize { Sense::Maximize } else { Sense::Minimize };
        let mut small = LinearProgram::<Ratio<i128>>::new(sense, s.c.iter().map(|&v| Ratio::from_integer(v as i128)).collect());
        let mut big = LinearProgram::<BigRational>::new(sense, s.c.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect());
        for (a, rel, b) in &s.rows {
            let rel = match rel {
                -1 => Relation::Le,
                0 => Relation::Eq,
                _ => Relation::Ge,
            };
            small.add_constraint(a.iter().map(|&v| Ratio::from_integer(v as i128)).collect(), rel, Ratio::from_integer(*b as i128));
            big.add_constraint(a.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect(), rel, BigRational::from_integer(BigInt::from(*b)));
        }
        let exact = solve_lp(&to_lp(&s)).unwrap();
        let project = |o: LpOutcome<Rational>| match o {
            LpOutcome::Optimal { objective, .. } => Some(Some(objective.to_string())),
            LpOutcome::Infeasible => None,
            LpOutcome::Unbounded => Some(None),
        };
        let small = match solve_lp(&small).unwrap() {
            LpOutcome::Optimal { objective, .. } => Some(Some(objective.to_string())),
            LpOutcome::Infeasible => None,
            LpOutcome::Unbounded => Some(None),
        };
        let big = match solve_lp(&big).unwrap() {
            LpOutcome::Optimal { objective, .. } => Some(Some(objective.to_string())),
            LpOutcome::Infeasible => None,
            LpOutcome::Unbounded => Some(None),
        };
        let exact = project(exact);
        assert_eq!(small, exact);
        assert_eq!(big, exact);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn optimal_points_are_feasible_and_match_the_oracle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_small_lp(&mut rng);
        let lp = to_lp(&s);
        match (solve_lp(&lp).unwrap(), lp_oracle(&s)) {
            (LpOutcome::Optimal { solution, objective }, OracleOutcome::Optimal(v)) => {
                prop_assert!(lp.is_feasible_point(&solution));
                prop_assert_eq!(objective, v);
            }
            (LpOutcome::Infeasible, OracleOutcome::Infeasible) | (LpOutcome::Unbounded, OracleOutcome::Unbounded) => {}
            (got, want) => prop_assert!(false, "solver {:?} vs oracle {:?}", got, want),
        }
    }
}
