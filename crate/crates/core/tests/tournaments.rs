mod common;

use std::collections::BTreeSet;

use common::{is_distribution, q};
use incgames::matrix::essential_set;
use incgames::reductions::{b_k, cyclone, product_tournament, random_tournament, TournamentProductSpec};
use incgames::tournament::{bipartisan_set, Digraph, Edge, Kind, Tournament, Violation};
use incgames::Rational;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cycle3() -> Tournament {
    let mut d = Digraph::new(vec!["a".into(), "b".into(), "c".into()]);
    d.set_win(0, 1).set_win(1, 2).set_win(2, 0);
    Tournament::new(d).unwrap()
}

fn set(xs: &[usize]) -> BTreeSet<usize> {
    xs.iter().copied().collect()
}

fn half() -> Rational {
    q(1, 2)
}

fn all(n: usize) -> BTreeSet<usize> {
    (0..n).collect()
}

fn relabel(t: &Tournament, prefix: &str) -> Tournament {
    let n = t.len();
    let mut d = Digraph::new((1..=n).map(|i| format!("{prefix}{i}")).collect());
    for i in 0..n {
        for j in i + 1..n {
            d.set(i, j, t.edge(i, j));
        }
    }
    Tournament::new(d).unwrap()
}

#[test]
fn matrix_views() {
    let m = cycle3().to_matrix_game().to_rows();
    let one = Rational::one();
    assert_eq!(m[0], vec![Rational::zero(), one.clone(), -&one]);
    let single = Tournament::new(Digraph::with_size(1)).unwrap();
    assert_eq!(single.to_matrix_game().to_rows(), vec![vec![Rational::zero()]]);
    let c7 = cyclone(7).unwrap();
    for i in 0..7 {
        for j in 0..7 {
            if i != j {
                assert_eq!(c7.beats(i, j), (j + 7 - i) % 7 <= 3, "({i}, {j})");
            }
        }
    }
}

#[test]
fn bipartisan_set_examples() {
    let (bp, p) = bipartisan_set(&cycle3());
    assert_eq!(bp, all(3));
    assert_eq!(p.probabilities, vec![q(1, 3); 3]);

    let t = b_k(2);
    let (bp, p) = bipartisan_set(&t);
    assert_eq!(bp, all(5));
    assert_eq!(p.probabilities, vec![q(1, 9), q(1, 9), q(1, 9), q(1, 3), q(1, 3)]);
    assert_eq!(t.labels(), ["x*", "a1", "b1", "a2", "b2"]);

    let mut d = Digraph::with_size(4);
    d.set_win(2, 0).set_win(2, 1).set_win(2, 3).set_win(0, 1).set_win(1, 3).set_win(3, 0);
    let (bp, p) = bipartisan_set(&Tournament::new(d).unwrap());
    assert_eq!(bp, set(&[2]));
    assert!(p.probabilities[2].is_one());
}

#[test]
fn dominion_examples() {
    let t = cycle3();
    assert_eq!(t.dominion(0, &all(3)).unwrap(), set(&[1]));
    assert_eq!(t.dominators(0, &all(3)).unwrap(), set(&[2]));
    let b1 = b_k(1);
    assert_eq!(b1.dominion(0, &all(3)).unwrap(), set(&[1]));
    assert!(t.dominion(0, &BTreeSet::new()).unwrap().is_empty());
    assert!(t.dominion(5, &all(3)).is_err());
}

#[test]
fn validation_diagnostics() {
    assert!(cyclone(7).unwrap().validate(Kind::Tournament).is_empty());
    let mut d = cyclone(7).unwrap().into_digraph();
    d.set_raw(1, 2, Edge::Win).set_raw(2, 1, Edge::Win);
    let v = d.validate(Kind::Tournament);
    assert_eq!(v.len(), 1);
    assert!(matches!(v[0], Violation::Asymmetry { .. }));
    let mut d = cyclone(7).unwrap().into_digraph();
    d.set(0, 4, Edge::Tie);
    assert_eq!(d.validate(Kind::Tournament), vec![Violation::IllegalTie { i: 0, j: 4 }]);
    assert!(Tournament::new(d).is_err());
}

#[test]
fn cyclones_have_uniform_equilibria() {
    for n in [3, 5, 7, 9] {
        let (bp, p) = bipartisan_set(&cyclone(n).unwrap());
        assert_eq!(bp, all(n));
        assert!(p.probabilities.iter().all(|x| *x == q(1, n as i64)));
    }
    assert!(cyclone(4).is_err());
}

#[test]
fn nested_tournaments_decay_geometrically() {
    for k in 0..=5usize {
        let (_, p) = bipartisan_set(&b_k(k));
        let third = |e: usize| Rational::one() / Rational::from(3i64.pow(e as u32));
        assert_eq!(p.probabilities[0], third(k));
        for i in 1..=k {
            assert_eq!(p.probabilities[2 * i - 1], third(k - i + 1), "a{i} in B_{k}");
            assert_eq!(p.probabilities[2 * i], third(k - i + 1), "b{i} in B_{k}");
        }
    }
}

#[test]
fn products_of_single_vertices_are_the_summary() {
    let c3 = cyclone(3).unwrap();
    let parts: Vec<Tournament> = (1..=3)
        .map(|i| Tournament::new(Digraph::new(vec![format!("v{i}")])).unwrap())
        .collect();
    let p = product_tournament(&TournamentProductSpec::new(c3.clone(), parts).unwrap()).unwrap();
    assert_eq!(p.to_matrix_game().to_rows(), c3.to_matrix_game().to_rows());
}

#[test]
fn product_spec_rejects_overlapping_labels() {
    let c3 = cyclone(3).unwrap();
    let dup = vec![cycle3(), cycle3(), cycle3()];
    assert!(TournamentProductSpec::new(c3, dup).is_err());
}

fn check_lemmas(t: &Tournament) -> Result<(), TestCaseError> {
    let n = t.len();
    let (bp, p) = bipartisan_set(t);
    prop_assert!(is_distribution(&p.probabilities));
    prop_assert_eq!(bp.len() % 2, 1);
    let es = essential_set(&t.to_matrix_game());
    prop_assert_eq!(&bp, &es.rows);
    let everyone = all(n);
    for a in 0..n {
        let dom = t.dominion(a, &everyone).unwrap();
        let doms = t.dominators(a, &everyone).unwrap();
        let (pd, pdbar) = (p.mass(&dom), p.mass(&doms));
        prop_assert!(pd <= half());
        prop_assert_eq!(pd == pdbar, bp.contains(&a));
        if n == 1 {
            continue;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| v != a).collect();
        let sub = t.restrict(&rest);
        let (sub_bp, sub_p) = bipartisan_set(&sub);
        // D(a) in the restricted tournament's indices
        let dom_sub: Vec<usize> = rest.iter().enumerate().filter(|(_, v)| dom.contains(v)).map(|(k, _)| k).collect();
        prop_assert_eq!(sub_p.mass(&dom_sub) > half(), bp.contains(&a));
        if !bp.contains(&a) {
            let lifted: BTreeSet<usize> = sub_bp.iter().map(|&k| rest[k]).collect();
            prop_assert_eq!(&lifted, &bp);
        }
    }
    // every positive probability exceeds 1/n^n (n = 1 is the equality case)
    if n == 1 {
        return Ok(());
    }
    let floor = Rational::from_bigints(BigInt::one(), BigInt::from(n).pow(n as u32));
    for x in &p.probabilities {
        prop_assert!(x.is_zero() || *x > floor);
    }
    Ok(())
}

#[test]
fn structural_lemmas_on_fifty_random_tournaments() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let n = rng.gen_range(1..=9);
        check_lemmas(&random_tournament(n, &mut rng)).unwrap();
    }
}

#[test]
fn composition_consistency_on_random_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..40 {
        let k = rng.gen_range(1..=4);
        let summary = random_tournament(k, &mut rng);
        let parts: Vec<Tournament> = (0..k)
            .map(|i| relabel(&random_tournament(rng.gen_range(1..=3), &mut rng), &format!("t{i}_")))
            .collect();
        let spec = TournamentProductSpec::new(summary.clone(), parts.clone()).unwrap();
        let product = product_tournament(&spec).unwrap();
        let (_, p) = bipartisan_set(&product);
        let (_, ps) = bipartisan_set(&summary);
        let block = spec.block_of();
        let mut seen = vec![0; k];
        for (v, &b) in block.iter().enumerate() {
            let local = seen[b];
            seen[b] += 1;
            let (_, pi) = bipartisan_set(&parts[b]);
            assert_eq!(p.probabilities[v], &ps.probabilities[b] * &pi.probabilities[local]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lemmas_hold_on_small_tournaments(seed in any::<u64>(), n in 1usize..=7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        check_lemmas(&random_tournament(n, &mut rng))?;
    }
}
