use std::collections::BTreeMap;
use std::time::Duration;

use incgames::bench::{query_vertex, run_benchmark, BenchConfig, Method, TrialRecord, UnspecifiedRule};
use incgames::incomplete::possible_action;
use incgames::matrix::Action;
use incgames::reductions::random_incomplete_weak_tournament;

fn config(sizes: Vec<usize>, trials: usize) -> BenchConfig {
    BenchConfig {
        sizes,
        trials,
        base_seed: 7,
        ..BenchConfig::default()
    }
}

/// Records without their wall times.
fn work(records: &[TrialRecord]) -> Vec<(usize, Method, usize, u64, Option<bool>, Option<u64>, Option<u64>, Option<u64>)> {
    records
        .iter()
        .map(|r| (r.n, r.method, r.trial, r.seed, r.answer, r.completions, r.lp_solves, r.bnb_nodes))
        .collect()
}

#[test]
fn tiny_run_times_both_methods_and_they_agree() {
    let report = run_benchmark(&config(vec![4], 3)).unwrap();
    assert_eq!(report.records.len(), 6);
    let mut by_trial: BTreeMap<usize, Vec<bool>> = BTreeMap::new();
    for r in &report.records {
        assert!(!r.timed_out);
        by_trial.entry(r.trial).or_default().push(r.answer.unwrap());
    }
    assert_eq!(by_trial.len(), 3);
    assert!(by_trial.values().all(|a| a.len() == 2 && a[0] == a[1]));
    assert_eq!(report.summary.len(), 2);
    for s in &report.summary {
        assert_eq!(s.solved + s.timeouts, s.trials);
        assert_eq!(s.trials, 3);
    }
}

#[test]
fn brute_force_work_is_bounded_by_three_to_the_u() {
    for rule in [UnspecifiedRule::Half, UnspecifiedRule::Full] {
        let cfg = BenchConfig {
            rule,
            methods: vec![Method::Brute],
            ..config(vec![4, 5, 6], 6)
        };
        let report = run_benchmark(&cfg).unwrap();
        for r in &report.records {
            let ceiling = 3u64.pow(r.unspecified as u32);
            assert_eq!(r.unspecified, rule.count(r.n));
            let c = r.completions.unwrap();
            assert!(c <= ceiling);
            if r.answer == Some(false) {
                assert_eq!(c, ceiling);
            }
        }
    }
}

#[test]
fn records_replay_the_instance_stream() {
    let report = run_benchmark(&config(vec![5], 4)).unwrap();
    for r in report.records.iter().filter(|r| r.method == Method::Brute) {
        assert_eq!(r.seed, 7 + r.trial as u64);
        let w = random_incomplete_weak_tournament(r.n, r.unspecified, r.seed).unwrap();
        let k = query_vertex(r.n, r.seed);
        assert_eq!(possible_action(&w.to_incomplete_game(), Action::Row(k)).unwrap().answer, r.answer.unwrap());
    }
}

#[test]
fn runs_are_deterministic() {
    let a = run_benchmark(&config(vec![4, 5], 3)).unwrap();
    let b = run_benchmark(&config(vec![4, 5], 3)).unwrap();
    assert_eq!(work(&a.records), work(&b.records));
    let par = run_benchmark(&BenchConfig {
        parallel: true,
        ..config(vec![4, 5], 3)
    })
    .unwrap();
    assert_eq!(work(&a.records), work(&par.records));
}

#[test]
fn timeouts_are_accounted_without_answers() {
    let cfg = BenchConfig {
        timeout: Duration::from_nanos(1),
        methods: vec![Method::Brute],
        ..config(vec![7], 2)
    };
    let report = run_benchmark(&cfg).unwrap();
    for r in &report.records {
        assert!(r.timed_out);
        assert_eq!(r.answer, None);
    }
    let s = &report.summary[0];
    assert_eq!((s.solved, s.timeouts), (0, 2));
    // the mean exceeded the cutoff, so larger sizes were not attempted
    assert_eq!(report.cut_off, vec![(Method::Brute, 7)]);
}

#[test]
fn cutoff_stops_escalation() {
    let cfg = BenchConfig {
        cutoff: Some(Duration::ZERO),
        methods: vec![Method::Brute],
        ..config(vec![4, 5, 6], 2)
    };
    let report = run_benchmark(&cfg).unwrap();
    assert!(report.records.iter().all(|r| r.n == 4));
    assert_eq!(report.cut_off, vec![(Method::Brute, 4)]);
}

#[test]
fn csv_has_the_documented_columns() {
    let report = run_benchmark(&config(vec![4], 2)).unwrap();
    let csv = report.records_csv().unwrap();
    let header = csv.lines().next().unwrap();
    assert_eq!(
        header,
        "n,unspecified,method,trial,seed,answer,wall_ms,completions,lp_solves,bnb_nodes,timed_out"
    );
    assert_eq!(csv.lines().count(), 1 + 4);
    assert!(csv.lines().nth(1).unwrap().starts_with("4,4,brute,0,7,"));
    let summary = report.summary_csv().unwrap();
    assert!(summary.starts_with("n,unspecified,method,trials,solved,timeouts"));
}

#[test]
fn invalid_configs_are_rejected() {
    assert!(run_benchmark(&config(vec![4], 0)).is_err());
    assert!(run_benchmark(&BenchConfig {
        timeout: Duration::ZERO,
        ..config(vec![4], 1)
    })
    .is_err());
    assert!(run_benchmark(&BenchConfig {
        methods: vec![],
        ..config(vec![4], 1)
    })
    .is_err());
    assert!(run_benchmark(&config(vec![1], 1)).is_err());
}
