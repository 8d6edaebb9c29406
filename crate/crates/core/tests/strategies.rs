use fast_robber::baseline::{
    AmbushScript, GreedyEvader, GreedyPursuer, RandomCop, RandomEvader, ShadowPursuer, Stationary, StationaryCops,
};
use fast_robber::registry::{cop_strategy, robber_strategy, StrategyOptions, COP_STRATEGIES, ROBBER_STRATEGIES};
use fast_robber::runner::AbortReason;
use fast_robber::sweep::{sweep_cop_count, LineSweep, Wall};
use fast_robber::trace::{Actor, Event, Segment, TraceRecord, WalkRepr};
use fast_robber::{replay, run_match, Coord, CopStrategy, GridSpec, MatchConfig, Outcome, RobberStrategy};

fn cfg(n: i64, speed: i64, cops: usize, rounds: u64, seed: u64) -> MatchConfig {
    MatchConfig { spec: GridSpec::new(n, speed).unwrap(), cop_count: cops, max_rounds: rounds, seed, diagnostics: false }
}

#[test]
fn baselines_are_legal_over_many_matches() {
    let mut played = 0;
    for seed in 0..1000u64 {
        let n = 3 + (seed % 8) as i64;
        let speed = 1 + (seed % 4) as i64;
        let cops_n = 1 + (seed % 3) as usize;
        let mut cops: Box<dyn CopStrategy> = match seed % 4 {
            0 => Box::new(GreedyPursuer),
            1 => Box::new(ShadowPursuer),
            2 => Box::new(RandomCop),
            _ => Box::new(AmbushScript::default()),
        };
        let mut robber: Box<dyn RobberStrategy> = match (seed / 4) % 3 {
            0 => Box::new(GreedyEvader),
            1 => Box::new(RandomEvader),
            _ => Box::new(Stationary),
        };
        let c = cfg(n, speed, cops_n, 60, seed);
        let rep = run_match(&c, cops.as_mut(), robber.as_mut())
            .unwrap_or_else(|e| panic!("seed {seed}: {} vs {}: {e}", cops.name(), robber.name()));
        replay(c.spec, &rep.trace.records).unwrap();
        played += 1;
    }
    assert_eq!(played, 1000);
}

#[test]
fn stationary_players_survive_the_cap() {
    let rep = run_match(&cfg(6, 1, 1, 10, 0), &mut StationaryCops, &mut Stationary).unwrap();
    assert_eq!(rep.outcome, Outcome::Survived);
    assert_eq!(rep.rounds, 10);
}

#[test]
fn greedy_cop_catches_stationary_robber_on_two_by_two() {
    let rep = run_match(&cfg(2, 1, 1, 10, 0), &mut GreedyPursuer, &mut Stationary).unwrap();
    assert_eq!(rep.outcome, Outcome::Capture);
    assert!(rep.rounds <= 2);
}

#[test]
fn illegal_script_aborts_with_cops_blamed() {
    let script = AmbushScript::parse("[[1,1]]\n[[3,1]]\n").unwrap();
    let mut cops = script;
    let err = run_match(&cfg(5, 1, 1, 10, 0), &mut cops, &mut Stationary).unwrap_err();
    assert_eq!(err.side, Actor::Cops);
    assert!(matches!(err.reason, AbortReason::Illegal(_)));
}

#[test]
fn same_seed_same_trace() {
    let play = || {
        run_match(&cfg(12, 2, 2, 200, 7), &mut RandomCop, &mut RandomEvader).unwrap().trace.to_jsonl_bytes()
    };
    assert_eq!(play(), play());
}

#[test]
fn replay_rejects_tampering() {
    let c = cfg(8, 2, 1, 20, 3);
    let rep = run_match(&c, &mut GreedyPursuer, &mut GreedyEvader).unwrap();
    let mut recs = rep.trace.records.clone();
    // a cop jumping two squares
    let i = recs.iter().position(|r| r.actor == Actor::Cops && r.event == Event::Move).unwrap();
    let cop = recs[i].cops[0];
    recs[i].cops[0] = Coord::new(if cop.x > 2 { cop.x - 2 } else { cop.x + 2 }, cop.y);
    assert_eq!(replay(c.spec, &recs).unwrap_err().index, i);

    // a robber walk through a cop
    let spec = GridSpec::new(8, 64).unwrap();
    let rec = |round, actor, cop: Coord, robber: Option<Coord>, walk, event| TraceRecord {
        round,
        actor,
        cops: vec![cop],
        robber,
        walk,
        event,
        diag: None,
    };
    let recs = vec![
        rec(0, Actor::Cops, Coord::new(4, 1), None, None, Event::Placement),
        rec(0, Actor::Robber, Coord::new(4, 1), Some(Coord::new(4, 4)), None, Event::Placement),
        rec(0, Actor::Cops, Coord::new(4, 2), Some(Coord::new(4, 4)), None, Event::Move),
        rec(
            1,
            Actor::Robber,
            Coord::new(4, 2),
            Some(Coord::new(4, 1)),
            Some(WalkRepr::Segments(vec![Segment { from: Coord::new(4, 4), to: Coord::new(4, 1) }])),
            Event::Move,
        ),
    ];
    assert_eq!(replay(spec, &recs[..3]).unwrap().records, 3);
    assert_eq!(replay(spec, &recs).unwrap_err().index, 3);
}

#[test]
fn sweep_catches_small_evaders() {
    for n in [7i64, 12, 20] {
        for speed in 1..=3 {
            let Ok(cops) = sweep_cop_count(n, speed) else { continue };
            for seed in 0..3 {
                let c = cfg(n, speed, cops, 10 * (n * n) as u64, seed);
                let rep = run_match(&c, &mut LineSweep::new(None), &mut RandomEvader).unwrap();
                assert_eq!(rep.outcome, Outcome::Capture, "n {n} R {speed}");
                let rep = run_match(&c, &mut LineSweep::new(None), &mut GreedyEvader).unwrap();
                assert_eq!(rep.outcome, Outcome::Capture, "n {n} R {speed}");
            }
        }
    }
}

#[test]
fn sweep_rejects_wrong_cop_count() {
    let err = run_match(&cfg(20, 2, 3, 10, 0), &mut LineSweep::new(None), &mut Stationary).unwrap_err();
    assert_eq!(err.side, Actor::Cops);
    assert!(matches!(err.reason, AbortReason::Fault(_)));
}

#[test]
fn wall_catches_everyone() {
    for speed in 1..=4 {
        let rep = run_match(&cfg(6, speed, 6, 100, 1), &mut Wall, &mut GreedyEvader).unwrap();
        assert_eq!(rep.outcome, Outcome::Capture);
        assert!(rep.rounds <= 6);
    }
}

#[test]
fn registry_names_play() {
    let opts = StrategyOptions::default();
    for name in COP_STRATEGIES {
        let mut cops = cop_strategy(name, &opts).unwrap();
        let mut robber = robber_strategy(ROBBER_STRATEGIES[0], &opts).unwrap();
        let (n, count) = match name {
            "line-sweep" => (7, 5),
            "wall" => (7, 7),
            _ => (7, 2),
        };
        let rep = run_match(&cfg(n, 1, count, 50, 0), cops.as_mut(), robber.as_mut()).unwrap();
        replay(GridSpec::new(n, 1).unwrap(), &rep.trace.records).unwrap();
    }
}
