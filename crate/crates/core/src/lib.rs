//! Cops and a fast robber on square grids.
//!
//! The crate provides the game rules and a match runner ([`game`],
//! [`runner`], [`trace`]), the recursive cell hierarchy ([`hierarchy`]), a
//! hierarchical robber strategy ([`evasion`]), the line-sweep cop strategy
//! ([`sweep`]), simple adversaries ([`baseline`]) and an exact solver for
//! tiny grids ([`solver`]).

pub mod baseline;
pub mod evasion;
pub mod game;
pub mod hierarchy;
pub mod registry;
pub mod runner;
pub mod solver;
pub mod sweep;
pub mod trace;

pub use game::{adjacent, Coord, GameState, GridSpec, MoveError, Phase, Walk};
pub use runner::{run_match, CopStrategy, MatchConfig, MatchReport, Outcome, RobberStrategy};
pub use trace::{replay, Trace, TraceRecord};
