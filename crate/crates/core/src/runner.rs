//! Strategy interface and the match runner.
//!
//! The runner owns the position. It asks one side for a move, validates it,
//! applies it and records it, then asks the other side.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::game::{Coord, GameState, GridSpec, MoveError, Walk};
use crate::trace::{Actor, Event, Trace, TraceRecord, WalkRepr};

pub type MatchRng = ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("robber resigns")]
    Resign,
    /// A strategy's own runtime check failed.
    #[error("{0}")]
    Fault(String),
}

pub trait CopStrategy {
    fn name(&self) -> &str;
    fn place(&mut self, spec: &GridSpec, count: usize, rng: &mut MatchRng) -> Result<Vec<Coord>, StrategyError>;
    fn step(&mut self, state: &GameState, rng: &mut MatchRng) -> Result<Vec<Coord>, StrategyError>;
}

pub trait RobberStrategy {
    fn name(&self) -> &str;
    fn place(&mut self, state: &GameState, rng: &mut MatchRng) -> Result<Coord, StrategyError>;
    fn step(&mut self, state: &GameState, rng: &mut MatchRng) -> Result<Walk, StrategyError>;

    /// Per-turn diagnostics attached to the robber's trace record.
    fn diagnostics(&self) -> Option<serde_json::Value> {
        None
    }

    /// Whether the strategy's hypotheses can hold for this grid and cop count.
    fn applicable(&self, _spec: &GridSpec, _cops: usize) -> Result<(), String> {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Capture,
    Survived,
    RobberResigned,
}

#[derive(Debug, Clone)]
pub struct MatchReport {
    pub outcome: Outcome,
    pub rounds: u64,
    pub trace: Trace,
    pub final_state: GameState,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbortReason {
    #[error("illegal move: {0}")]
    Illegal(#[from] MoveError),
    #[error("strategy fault: {0}")]
    Fault(String),
}

#[derive(Debug, Clone, Error)]
#[error("{side:?} aborted the match in round {round}: {reason}")]
pub struct MatchAbort {
    pub side: Actor,
    pub round: u64,
    pub reason: AbortReason,
    pub trace: Trace,
}

#[derive(Debug, Clone, Copy)]
pub struct MatchConfig {
    pub spec: GridSpec,
    pub cop_count: usize,
    pub max_rounds: u64,
    pub seed: u64,
    /// Attach robber diagnostics to trace records.
    pub diagnostics: bool,
}

fn side_rngs(seed: u64) -> (MatchRng, MatchRng) {
    let mut cops = ChaCha8Rng::seed_from_u64(seed);
    cops.set_stream(0);
    let mut robber = ChaCha8Rng::seed_from_u64(seed);
    robber.set_stream(1);
    (cops, robber)
}

fn record(state: &GameState, actor: Actor, walk: Option<&Walk>, event: Event) -> TraceRecord {
    TraceRecord {
        round: state.round(),
        actor,
        cops: state.cops().to_vec(),
        robber: state.robber(),
        walk: walk.map(WalkRepr::from),
        event,
        diag: None,
    }
}

/// Plays one match: cops place, the robber places, then cops and robber
/// alternate until capture or until `max_rounds` robber moves are made.
pub fn run_match(
    cfg: &MatchConfig,
    cops: &mut dyn CopStrategy,
    robber: &mut dyn RobberStrategy,
) -> Result<MatchReport, MatchAbort> {
    let (mut cop_rng, mut robber_rng) = side_rngs(cfg.seed);
    let mut trace = Trace::default();
    let mut state = GameState::new(cfg.spec);

    macro_rules! abort {
        ($side:expr, $reason:expr) => {
            return Err(MatchAbort { side: $side, round: state.round(), reason: $reason, trace })
        };
    }

    let placement = match cops.place(&cfg.spec, cfg.cop_count, &mut cop_rng) {
        Ok(p) => p,
        Err(e) => abort!(Actor::Cops, AbortReason::Fault(e.to_string())),
    };
    if placement.len() != cfg.cop_count {
        abort!(
            Actor::Cops,
            AbortReason::Illegal(MoveError::WrongArity { expected: cfg.cop_count, found: placement.len() })
        );
    }
    state = match state.place_cops(placement) {
        Ok(s) => s,
        Err(e) => abort!(Actor::Cops, e.into()),
    };
    trace.push(record(&state, Actor::Cops, None, Event::Placement));

    let at = match robber.place(&state, &mut robber_rng) {
        Ok(at) => at,
        Err(StrategyError::Resign) => {
            return Ok(MatchReport { outcome: Outcome::RobberResigned, rounds: 0, trace, final_state: state })
        }
        Err(e) => abort!(Actor::Robber, AbortReason::Fault(e.to_string())),
    };
    state = match state.place_robber(at) {
        Ok(s) => s,
        Err(e) => abort!(Actor::Robber, e.into()),
    };
    let mut rec = record(&state, Actor::Robber, None, Event::Placement);
    if cfg.diagnostics {
        rec.diag = robber.diagnostics();
    }
    trace.push(rec);

    loop {
        if state.round() >= cfg.max_rounds {
            let rounds = state.round();
            return Ok(MatchReport { outcome: Outcome::Survived, rounds, trace, final_state: state });
        }
        let dests = match cops.step(&state, &mut cop_rng) {
            Ok(d) => d,
            Err(e) => abort!(Actor::Cops, AbortReason::Fault(e.to_string())),
        };
        state = match state.apply_cop_move(&dests) {
            Ok(s) => s,
            Err(e) => abort!(Actor::Cops, e.into()),
        };
        if state.is_captured() {
            trace.push(record(&state, Actor::Cops, None, Event::Capture));
            // the capturing cop move opens round `round + 1`
            let rounds = state.round() + 1;
            return Ok(MatchReport { outcome: Outcome::Capture, rounds, trace, final_state: state });
        }
        trace.push(record(&state, Actor::Cops, None, Event::Move));

        let walk = match robber.step(&state, &mut robber_rng) {
            Ok(w) => w,
            Err(StrategyError::Resign) => {
                let rounds = state.round();
                return Ok(MatchReport { outcome: Outcome::RobberResigned, rounds, trace, final_state: state });
            }
            Err(e) => abort!(Actor::Robber, AbortReason::Fault(e.to_string())),
        };
        state = match state.apply_robber_walk(&walk) {
            Ok(s) => s,
            Err(e) => abort!(Actor::Robber, e.into()),
        };
        let mut rec = record(&state, Actor::Robber, Some(&walk), Event::Move);
        if cfg.diagnostics {
            rec.diag = robber.diagnostics();
        }
        trace.push(rec);
    }
}
