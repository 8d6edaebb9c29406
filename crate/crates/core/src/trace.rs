//! JSON-lines match traces and the replay validator.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{Coord, GameState, GridSpec, MoveError, Phase, Walk};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Actor {
    Cops,
    Robber,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Event {
    Placement,
    Move,
    Capture,
}

/// One straight run of a walk; `from == to` encodes the stay walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub from: Coord,
    pub to: Coord,
}

/// Walk encoding on the wire: straight segments, or plain unit-step squares.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WalkRepr {
    Segments(Vec<Segment>),
    Squares(Vec<Coord>),
}

impl From<&Walk> for WalkRepr {
    fn from(walk: &Walk) -> Self {
        if walk.is_stay() {
            let p = walk.start();
            return WalkRepr::Segments(vec![Segment { from: p, to: p }]);
        }
        WalkRepr::Segments(walk.segments().map(|(from, to)| Segment { from, to }).collect())
    }
}

impl WalkRepr {
    pub fn to_walk(&self) -> Result<Walk, MoveError> {
        match self {
            WalkRepr::Squares(squares) => Walk::from_squares(squares),
            WalkRepr::Segments(segs) => {
                let first = segs.first().ok_or(MoveError::EmptyWalk)?;
                let mut points = vec![first.from];
                for (i, seg) in segs.iter().enumerate() {
                    if i > 0 && seg.from != points[points.len() - 1] {
                        return Err(MoveError::NotAdjacent { from: points[points.len() - 1], to: seg.from });
                    }
                    if seg.from.x != seg.to.x && seg.from.y != seg.to.y {
                        return Err(MoveError::Diagonal { from: seg.from, to: seg.to });
                    }
                    if seg.from == seg.to && segs.len() > 1 {
                        return Err(MoveError::NotAdjacent { from: seg.from, to: seg.to });
                    }
                    points.push(seg.to);
                }
                Walk::from_waypoints(points)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub round: u64,
    pub actor: Actor,
    pub cops: Vec<Coord>,
    pub robber: Option<Coord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub walk: Option<WalkRepr>,
    pub event: Event,
    /// Strategy diagnostics; not part of the game record proper.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diag: Option<serde_json::Value>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trace {
    pub records: Vec<TraceRecord>,
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {source}")]
    Parse { line: usize, source: serde_json::Error },
}

impl Trace {
    pub fn push(&mut self, record: TraceRecord) {
        self.records.push(record);
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<(), TraceError> {
        for rec in &self.records {
            serde_json::to_writer(&mut out, rec).map_err(|e| TraceError::Io(e.into()))?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_jsonl_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to memory cannot fail");
        buf
    }

    pub fn read_jsonl<R: BufRead>(input: R) -> Result<Self, TraceError> {
        let mut records = Vec::new();
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec = serde_json::from_str(&line).map_err(|source| TraceError::Parse { line: i + 1, source })?;
            records.push(rec);
        }
        Ok(Trace { records })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("record {index}: {reason}")]
pub struct ReplayError {
    pub index: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplaySummary {
    pub records: usize,
    pub rounds: u64,
    pub captured: bool,
}

/// Re-executes a trace through the move validators.
pub fn replay(spec: GridSpec, records: &[TraceRecord]) -> Result<ReplaySummary, ReplayError> {
    let mut state = GameState::new(spec);
    for (index, rec) in records.iter().enumerate() {
        let fail = |reason: String| ReplayError { index, reason };
        let expected_actor = match state.phase() {
            Phase::CopsPlacing | Phase::CopsToMove => Actor::Cops,
            Phase::RobberPlacing | Phase::RobberToMove => Actor::Robber,
            Phase::Captured => return Err(fail("record after capture".into())),
        };
        if rec.actor != expected_actor {
            return Err(fail(format!("expected actor {expected_actor:?}, found {:?}", rec.actor)));
        }
        let next = match state.phase() {
            Phase::CopsPlacing => {
                if rec.event != Event::Placement || rec.robber.is_some() {
                    return Err(fail("cop placement must have event placement and no robber".into()));
                }
                state.place_cops(rec.cops.clone())
            }
            Phase::RobberPlacing => {
                if rec.event != Event::Placement {
                    return Err(fail("robber placement must have event placement".into()));
                }
                let at = rec.robber.ok_or_else(|| fail("robber placement without a square".into()))?;
                state.place_robber(at)
            }
            Phase::CopsToMove => state.apply_cop_move(&rec.cops),
            Phase::RobberToMove => {
                let walk = rec.walk.as_ref().ok_or_else(|| fail("robber move without a walk".into()))?;
                let walk = walk.to_walk().map_err(|e| fail(e.to_string()))?;
                state.apply_robber_walk(&walk)
            }
            Phase::Captured => unreachable!(),
        }
        .map_err(|e| fail(e.to_string()))?;

        if next.cops() != rec.cops.as_slice() {
            return Err(fail("cop list does not match the replayed position".into()));
        }
        if next.robber() != rec.robber {
            return Err(fail("robber square does not match the replayed position".into()));
        }
        if next.round() != rec.round {
            return Err(fail(format!("round {} but replay is at {}", rec.round, next.round())));
        }
        let is_capture = next.is_captured();
        match (state.phase(), rec.event) {
            (Phase::CopsToMove, Event::Capture) if is_capture => {}
            (Phase::CopsToMove, Event::Move) if !is_capture => {}
            (Phase::CopsToMove, ev) => return Err(fail(format!("event {ev:?} inconsistent with capture={is_capture}"))),
            (Phase::RobberToMove, Event::Move) => {}
            (Phase::RobberToMove, ev) => return Err(fail(format!("robber event {ev:?}, expected move"))),
            _ => {}
        }
        state = next;
    }
    Ok(ReplaySummary { records: records.len(), rounds: state.round(), captured: state.is_captured() })
}
