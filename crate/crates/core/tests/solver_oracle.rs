use std::collections::{HashMap, HashSet, VecDeque};

use fast_robber::baseline::{GreedyPursuer, Stationary};
use fast_robber::evasion::HierarchicalRobber;
use fast_robber::hierarchy::{HierarchyParams, Mode};
use fast_robber::solver::{
    cop_number, solve, verify_strategy_against_table, CopNumber, SolverError, SolverInstance, Subject, TableCops,
    TableRobber, Verdict, WinTable, DEFAULT_BUDGET,
};
use fast_robber::{run_match, Coord, GridSpec, MatchConfig, Outcome};

type Pos = (i64, i64);

/// Straightforward fixed point over ordered cop tuples, with its own move
/// generation. Returns depths for (cops, robber) with cops or robber to move.
struct Naive {
    cop_depth: HashMap<(Vec<Pos>, Pos), u16>,
    robber_depth: HashMap<(Vec<Pos>, Pos), u16>,
}

fn naive(n: i64, speed: i64, c: usize) -> Naive {
    let squares: Vec<Pos> = (1..=n).flat_map(|x| (1..=n).map(move |y| (x, y))).collect();
    let mut tuples: Vec<Vec<Pos>> = vec![vec![]];
    for _ in 0..c {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                squares.iter().map(move |&s| {
                    let mut t = t.clone();
                    t.push(s);
                    t
                })
            })
            .collect();
    }
    let inside = |p: Pos| (1..=n).contains(&p.0) && (1..=n).contains(&p.1);
    let steps = |p: Pos| -> Vec<Pos> {
        [(0, 0), (0, 1), (0, -1), (1, 0), (-1, 0)].iter().map(|d| (p.0 + d.0, p.1 + d.1)).filter(|&q| inside(q)).collect()
    };
    let successors = |cops: &Vec<Pos>| -> Vec<Vec<Pos>> {
        let mut out: Vec<Vec<Pos>> = vec![vec![]];
        for &p in cops {
            out = out
                .into_iter()
                .flat_map(|t| {
                    steps(p).into_iter().map(move |q| {
                        let mut t = t.clone();
                        t.push(q);
                        t
                    })
                })
                .collect();
        }
        out
    };
    let reach = |cops: &Vec<Pos>, r: Pos| -> HashSet<Pos> {
        let mut seen = HashSet::from([r]);
        let mut queue = VecDeque::from([(r, 0)]);
        while let Some((p, d)) = queue.pop_front() {
            if d == speed {
                continue;
            }
            for q in steps(p) {
                if !cops.contains(&q) && seen.insert(q) {
                    queue.push_back((q, d + 1));
                }
            }
        }
        seen
    };
    let mut cop_depth = HashMap::new();
    let mut robber_depth = HashMap::new();
    for t in &tuples {
        for &r in t {
            robber_depth.insert((t.clone(), r), 0u16);
        }
    }
    let mut d = 0u16;
    loop {
        d += 1;
        let mut fresh_cop = Vec::new();
        for t in &tuples {
            for &r in &squares {
                if cop_depth.contains_key(&(t.clone(), r)) {
                    continue;
                }
                if successors(t).iter().any(|s| robber_depth.contains_key(&(s.clone(), r))) {
                    fresh_cop.push((t.clone(), r));
                }
            }
        }
        for key in &fresh_cop {
            cop_depth.insert(key.clone(), d);
        }
        let mut fresh_robber = Vec::new();
        for t in &tuples {
            for &r in &squares {
                if robber_depth.contains_key(&(t.clone(), r)) {
                    continue;
                }
                if reach(t, r).iter().all(|&q| cop_depth.contains_key(&(t.clone(), q))) {
                    fresh_robber.push((t.clone(), r));
                }
            }
        }
        for key in &fresh_robber {
            robber_depth.insert(key.clone(), d);
        }
        if fresh_cop.is_empty() && fresh_robber.is_empty() {
            return Naive { cop_depth, robber_depth };
        }
    }
}

fn coords(t: &[Pos]) -> Vec<Coord> {
    t.iter().map(|&(x, y)| Coord::new(x, y)).collect()
}

fn table(n: i64, speed: i64, c: usize) -> WinTable {
    solve(SolverInstance::new(n, speed, c).unwrap(), DEFAULT_BUDGET).unwrap()
}

#[test]
fn table_matches_naive_fixed_point() {
    for (n, speed, c) in [(2, 1, 1), (2, 1, 2), (2, 3, 2), (3, 1, 1), (3, 1, 2), (3, 2, 2), (3, 4, 2), (4, 1, 1)] {
        let t = table(n, speed, c);
        let oracle = naive(n, speed, c);
        let squares: Vec<Pos> = (1..=n).flat_map(|x| (1..=n).map(move |y| (x, y))).collect();
        let mut tuples: Vec<Vec<Pos>> = vec![vec![]];
        for _ in 0..c {
            tuples = tuples.into_iter().flat_map(|t| squares.iter().map(move |&s| [t.clone(), vec![s]].concat())).collect();
        }
        for cops in &tuples {
            for &r in &squares {
                let key = (cops.clone(), r);
                let rc = Coord::new(r.0, r.1);
                assert_eq!(
                    t.cops_to_move(&coords(cops), rc).unwrap(),
                    oracle.cop_depth.get(&key).copied(),
                    "n {n} R {speed} cops {cops:?} robber {r:?} cops to move"
                );
                assert_eq!(
                    t.robber_to_move(&coords(cops), rc).unwrap(),
                    oracle.robber_depth.get(&key).copied(),
                    "n {n} R {speed} cops {cops:?} robber {r:?} robber to move"
                );
            }
        }
        assert!(t.is_fixed_point());
    }
}

#[test]
fn cop_number_examples() {
    assert_eq!(cop_number(3, 1, 3, DEFAULT_BUDGET).unwrap(), CopNumber::Exact(2));
    assert_eq!(cop_number(4, 1, 3, DEFAULT_BUDGET).unwrap(), CopNumber::Exact(2));
    assert_eq!(cop_number(2, 3, 2, DEFAULT_BUDGET).unwrap(), CopNumber::Exact(2));
    let err = cop_number(6, 2, 3, 10_000).unwrap_err();
    assert!(matches!(err, SolverError::Budget { .. }));
}

#[test]
fn two_by_two_positions() {
    let t = table(2, 1, 2);
    let diagonal = coords(&[(1, 1), (2, 2)]);
    for r in [(1, 2), (2, 1)] {
        assert!(t.cops_to_move(&diagonal, Coord::new(r.0, r.1)).unwrap().is_some());
    }
    for speed in 1..=5 {
        let t = table(2, speed, 1);
        assert_eq!(t.cops_to_move(&coords(&[(1, 1)]), Coord::new(2, 2)).unwrap(), None);
        assert!(t.robber_to_move(&coords(&[(1, 1)]), Coord::new(1, 1)).unwrap().is_some());
    }
}

#[test]
fn more_cops_never_lose_a_won_position() {
    for n in 2..=3 {
        for speed in 1..=2 {
            let small = table(n, speed, 1);
            let big = table(n, speed, 2);
            for m in 0..small.multiset_count() {
                let cops = small.unrank(m);
                for x in 1..=n {
                    for y in 1..=n {
                        let r = Coord::new(x, y);
                        if small.cops_to_move(&cops, r).unwrap().is_none() {
                            continue;
                        }
                        for ex in 1..=n {
                            for ey in 1..=n {
                                let more = [cops.clone(), vec![Coord::new(ex, ey)]].concat();
                                assert!(big.cops_to_move(&more, r).unwrap().is_some());
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn cop_order_does_not_matter() {
    let t = table(3, 2, 3);
    let a = coords(&[(1, 1), (3, 2), (2, 3)]);
    let b = coords(&[(2, 3), (1, 1), (3, 2)]);
    for x in 1..=3 {
        for y in 1..=3 {
            let r = Coord::new(x, y);
            assert_eq!(t.cops_to_move(&a, r).unwrap(), t.cops_to_move(&b, r).unwrap());
        }
    }
}

#[test]
fn table_players() {
    let t = table(4, 1, 2);
    let cfg = MatchConfig { spec: GridSpec::new(4, 1).unwrap(), cop_count: 2, max_rounds: 100, seed: 0, diagnostics: false };
    let rep = run_match(&cfg, &mut TableCops::new(&t), &mut TableRobber::new(&t)).unwrap();
    assert_eq!(rep.outcome, Outcome::Capture);

    // against a single greedy cop the optimal robber on 4x4 survives
    let t1 = table(4, 1, 1);
    let cfg1 = MatchConfig { cop_count: 1, ..cfg };
    let rep = run_match(&cfg1, &mut GreedyPursuer, &mut TableRobber::new(&t1)).unwrap();
    assert_eq!(rep.outcome, Outcome::Survived);
}

#[test]
fn verifying_strategies() {
    let t = table(4, 2, 2);
    let cfg = MatchConfig { spec: GridSpec::new(4, 2).unwrap(), cop_count: 2, max_rounds: 100, seed: 0, diagnostics: false };
    let rep = verify_strategy_against_table(&t, Subject::Robber(&mut Stationary), &cfg).unwrap();
    assert_eq!(rep.outcome, Some(Outcome::Capture));
    assert_eq!(rep.verdict, Verdict::NotWinning);

    let params = HierarchyParams::new(40, 128, 6401, 1, Mode::Relaxed);
    let mut hier = HierarchicalRobber::new(&params).unwrap();
    let rep = verify_strategy_against_table(&t, Subject::Robber(&mut hier), &cfg).unwrap();
    assert!(matches!(rep.verdict, Verdict::NotApplicable(_)));
    assert_eq!(rep.outcome, None);

    let mut greedy = GreedyPursuer;
    let wrong = MatchConfig { cop_count: 3, ..cfg };
    assert!(matches!(
        verify_strategy_against_table(&t, Subject::Cops(&mut greedy), &wrong),
        Err(SolverError::Mismatch(_))
    ));

    // one greedy cop on 3x3 never starts in a won position
    let t1 = table(3, 1, 1);
    let cfg1 = MatchConfig { spec: GridSpec::new(3, 1).unwrap(), cop_count: 1, ..cfg };
    let rep = verify_strategy_against_table(&t1, Subject::Cops(&mut greedy), &cfg1).unwrap();
    assert_eq!(rep.verdict, Verdict::NotWinning);
    assert_eq!(rep.outcome, Some(Outcome::Survived));
}

#[test]
fn export_round_trips() {
    let t = table(3, 1, 2);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.bin");
    t.write_binary(std::fs::File::create(&path).unwrap()).unwrap();
    let back = WinTable::read_binary(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(back.winning_placements(), t.winning_placements());
    let summary = t.summary_json();
    assert_eq!(summary["n"], 3);
    assert_eq!(summary["copWin"].as_array().unwrap().len(), t.multiset_count());
}
