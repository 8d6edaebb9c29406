//! Simple adversaries with fixed, documented tie-breaking.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{Coord, GameState, GridSpec, ReachTree, Walk};
use crate::runner::{CopStrategy, MatchRng, RobberStrategy, StrategyError};

fn fault(msg: impl Into<String>) -> StrategyError {
    StrategyError::Fault(msg.into())
}

fn robber_of(state: &GameState) -> Result<Coord, StrategyError> {
    state.robber().ok_or_else(|| fault("robber is not placed"))
}

/// Cops spread along the main diagonal at `(i+1) n / (c+1)`.
pub fn diagonal_placement(spec: &GridSpec, count: usize) -> Vec<Coord> {
    let c = count as i64;
    (0..c)
        .map(|i| {
            let v = ((i + 1) * spec.n / (c + 1)).clamp(1, spec.n);
            Coord::new(v, v)
        })
        .collect()
}

/// Minimum grid distance to any cop; `i64::MAX` with no cops.
pub fn cop_distance(cops: &[Coord], p: Coord) -> i64 {
    cops.iter().map(|&c| c.l1(p)).min().unwrap_or(i64::MAX)
}

/// One step toward `to`: vertical first, then left, then right.
pub fn greedy_step(from: Coord, to: Coord) -> Coord {
    if to.y != from.y {
        Coord::new(from.x, from.y + (to.y - from.y).signum())
    } else if to.x != from.x {
        Coord::new(from.x + (to.x - from.x).signum(), from.y)
    } else {
        from
    }
}

/// One step toward `to`: horizontal first, then vertical.
pub fn shadow_step(from: Coord, to: Coord) -> Coord {
    if to.x != from.x {
        Coord::new(from.x + (to.x - from.x).signum(), from.y)
    } else if to.y != from.y {
        Coord::new(from.x, from.y + (to.y - from.y).signum())
    } else {
        from
    }
}

#[derive(Clone, Debug, Default)]
pub struct GreedyPursuer;

impl CopStrategy for GreedyPursuer {
    fn name(&self) -> &str {
        "greedy-pursuer"
    }

    fn place(&mut self, spec: &GridSpec, count: usize, _rng: &mut MatchRng) -> Result<Vec<Coord>, StrategyError> {
        Ok(diagonal_placement(spec, count))
    }

    fn step(&mut self, state: &GameState, _rng: &mut MatchRng) -> Result<Vec<Coord>, StrategyError> {
        let r = robber_of(state)?;
        Ok(state.cops().iter().map(|&c| greedy_step(c, r)).collect())
    }
}

#[derive(Clone, Debug, Default)]
pub struct ShadowPursuer;

impl CopStrategy for ShadowPursuer {
    fn name(&self) -> &str {
        "shadow-pursuer"
    }

    fn place(&mut self, spec: &GridSpec, count: usize, _rng: &mut MatchRng) -> Result<Vec<Coord>, StrategyError> {
        Ok(diagonal_placement(spec, count))
    }

    fn step(&mut self, state: &GameState, _rng: &mut MatchRng) -> Result<Vec<Coord>, StrategyError> {
        let r = robber_of(state)?;
        Ok(state.cops().iter().map(|&c| shadow_step(c, r)).collect())
    }
}

/// Each cop stays or steps to a uniformly chosen legal neighbour.
#[derive(Clone, Debug, Default)]
pub struct RandomCop;

impl CopStrategy for RandomCop {
    fn name(&self) -> &str {
        "random-cop"
    }

    fn place(&mut self, spec: &GridSpec, count: usize, rng: &mut MatchRng) -> Result<Vec<Coord>, StrategyError> {
        Ok((0..count).map(|_| Coord::new(rng.gen_range(1..=spec.n), rng.gen_range(1..=spec.n))).collect())
    }

    fn step(&mut self, state: &GameState, rng: &mut MatchRng) -> Result<Vec<Coord>, StrategyError> {
        let spec = *state.spec();
        Ok(state
            .cops()
            .iter()
            .map(|&c| {
                let mut options = vec![c];
                options.extend(c.neighbours().into_iter().filter(|&p| spec.contains(p)));
                *options.choose(rng).expect("staying is always an option")
            })
            .collect())
    }
}

#[derive(Debug, Error)]
pub enum ScriptError {
    #[error("line {line}: {source}")]
    Parse { line: usize, source: serde_json::Error },
}

/// Cops replaying fixed positions: the first line is the placement, each
/// later line the positions after one cop turn. Once the script runs out
/// the cops hold position. Moves are not checked here; the runner rejects
/// illegal ones.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbushScript {
    pub lines: Vec<Vec<Coord>>,
    #[serde(skip)]
    cursor: usize,
}

impl AmbushScript {
    pub fn new(lines: Vec<Vec<Coord>>) -> Self {
        AmbushScript { lines, cursor: 0 }
    }

    /// Parses JSON lines such as `[[3,4],[10,2]]`.
    pub fn parse(text: &str) -> Result<Self, ScriptError> {
        let mut lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            if raw.trim().is_empty() {
                continue;
            }
            let cops: Vec<Coord> = serde_json::from_str(raw).map_err(|source| ScriptError::Parse { line: i + 1, source })?;
            lines.push(cops);
        }
        Ok(AmbushScript::new(lines))
    }
}

impl CopStrategy for AmbushScript {
    fn name(&self) -> &str {
        "ambush-script"
    }

    fn place(&mut self, spec: &GridSpec, count: usize, _rng: &mut MatchRng) -> Result<Vec<Coord>, StrategyError> {
        self.cursor = 1;
        Ok(self.lines.first().cloned().unwrap_or_else(|| diagonal_placement(spec, count)))
    }

    fn step(&mut self, state: &GameState, _rng: &mut MatchRng) -> Result<Vec<Coord>, StrategyError> {
        let next = self.lines.get(self.cursor).cloned().unwrap_or_else(|| state.cops().to_vec());
        self.cursor += 1;
        Ok(next)
    }
}

/// Square maximising the distance to the nearest cop, smallest coordinate
/// first among ties. Large grids are scanned on a lattice of about 10^6
/// points.
pub fn far_square(spec: &GridSpec, cops: &[Coord]) -> Coord {
    let stride = (spec.n / 1000).max(1);
    let mut best = (i64::MIN, Coord::new(1, 1));
    let mut x = 1;
    while x <= spec.n {
        let mut y = 1;
        while y <= spec.n {
            let p = Coord::new(x, y);
            let d = cop_distance(cops, p);
            if !cops.contains(&p) && d > best.0 {
                best = (d, p);
            }
            y += stride;
        }
        x += stride;
    }
    best.1
}

/// Moves to the reachable square farthest from the cops; stays unless some
/// square is strictly better, otherwise takes the smallest best square.
#[derive(Clone, Debug, Default)]
pub struct GreedyEvader;

impl RobberStrategy for GreedyEvader {
    fn name(&self) -> &str {
        "greedy-evader"
    }

    fn place(&mut self, state: &GameState, _rng: &mut MatchRng) -> Result<Coord, StrategyError> {
        Ok(far_square(state.spec(), state.cops()))
    }

    fn step(&mut self, state: &GameState, _rng: &mut MatchRng) -> Result<Walk, StrategyError> {
        let r = robber_of(state)?;
        let tree = ReachTree::build(state.spec(), state.cops(), r);
        let here = cop_distance(state.cops(), r);
        let mut best: Option<(i64, Coord)> = None;
        for p in tree.endpoints() {
            let d = cop_distance(state.cops(), p);
            if best.is_none_or(|(bd, _)| d > bd) {
                best = Some((d, p));
            }
        }
        match best {
            Some((d, p)) if d > here => Ok(tree.walk_to(p).expect("endpoint is reachable")),
            _ => Ok(Walk::stay(r)),
        }
    }
}

/// Walks to a uniformly chosen reachable square.
#[derive(Clone, Debug, Default)]
pub struct RandomEvader;

impl RobberStrategy for RandomEvader {
    fn name(&self) -> &str {
        "random-evader"
    }

    fn place(&mut self, state: &GameState, rng: &mut MatchRng) -> Result<Coord, StrategyError> {
        let n = state.spec().n;
        for _ in 0..10_000 {
            let p = Coord::new(rng.gen_range(1..=n), rng.gen_range(1..=n));
            if !state.cops().contains(&p) {
                return Ok(p);
            }
        }
        Ok(far_square(state.spec(), state.cops()))
    }

    fn step(&mut self, state: &GameState, rng: &mut MatchRng) -> Result<Walk, StrategyError> {
        let r = robber_of(state)?;
        let tree = ReachTree::build(state.spec(), state.cops(), r);
        let ends: Vec<Coord> = tree.endpoints().collect();
        let target = *ends.choose(rng).expect("the robber's own square is reachable");
        Ok(tree.walk_to(target).expect("endpoint is reachable"))
    }
}

/// Places far from the cops and never moves.
#[derive(Clone, Debug, Default)]
pub struct Stationary;

impl RobberStrategy for Stationary {
    fn name(&self) -> &str {
        "stationary"
    }

    fn place(&mut self, state: &GameState, _rng: &mut MatchRng) -> Result<Coord, StrategyError> {
        Ok(far_square(state.spec(), state.cops()))
    }

    fn step(&mut self, state: &GameState, _rng: &mut MatchRng) -> Result<Walk, StrategyError> {
        Ok(Walk::stay(robber_of(state)?))
    }
}

/// Cops that never move.
#[derive(Clone, Debug, Default)]
pub struct StationaryCops;

impl CopStrategy for StationaryCops {
    fn name(&self) -> &str {
        "stationary-cops"
    }

    fn place(&mut self, spec: &GridSpec, count: usize, _rng: &mut MatchRng) -> Result<Vec<Coord>, StrategyError> {
        Ok(diagonal_placement(spec, count))
    }

    fn step(&mut self, state: &GameState, _rng: &mut MatchRng) -> Result<Vec<Coord>, StrategyError> {
        Ok(state.cops().to_vec())
    }
}
