//! The line-sweep cop strategy: a row of `2L+1` cops that tracks the
//! robber's column and steps down whenever the robber cannot slip past.

use serde::Serialize;
use thiserror::Error;

use crate::game::{Coord, GameState, GridSpec};
use crate::runner::{CopStrategy, MatchRng, StrategyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error("a formation of {cops} cops does not fit on a grid of side {n}")]
    TooSmall { cops: i64, n: i64 },
    #[error("half-width must be nonnegative, got {0}")]
    BadHalfWidth(i64),
}

/// `L = ceil(n(R-1)/(2R-1) + 2)`, computed exactly.
pub fn sweep_half_width(n: i64, speed: i64) -> i64 {
    let den = 2 * speed - 1;
    let num = n * (speed - 1) + 2 * den;
    (num + den - 1).div_euclid(den)
}

/// `2L + 1` for the default half-width.
pub fn sweep_cop_count(n: i64, speed: i64) -> Result<usize, SweepError> {
    let cops = 2 * sweep_half_width(n, speed) + 1;
    if cops > n {
        return Err(SweepError::TooSmall { cops, n });
    }
    Ok(cops as usize)
}

/// Cops on the top row, flush left, centre at column `L + 1`.
pub fn sweep_place(n: i64, half_width: i64) -> Result<Vec<Coord>, SweepError> {
    if half_width < 0 {
        return Err(SweepError::BadHalfWidth(half_width));
    }
    let cops = 2 * half_width + 1;
    if cops > n {
        return Err(SweepError::TooSmall { cops, n });
    }
    Ok((1..=cops).map(|x| Coord::new(x, n)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMove {
    Down,
    Left,
    Right,
}

/// The formation's rule. The right edge is the centre position at which the
/// formation covers column `n`, namely `n - L`.
pub fn sweep_decision(n: i64, half_width: i64, speed: i64, x_c: i64, x_r: i64) -> SweepMove {
    let l = half_width;
    if (x_c - x_r).abs() <= speed || (x_c == l + 1 && x_r < x_c - speed) || (x_c == n - l && x_r > x_c + speed) {
        SweepMove::Down
    } else if x_c > x_r {
        SweepMove::Left
    } else {
        SweepMove::Right
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepState {
    pub half_width: i64,
    pub x_c: i64,
    pub y_c: i64,
    pub descended: bool,
    /// `x_c - x_r` at the previous decision.
    pub prev_diff: Option<i64>,
    pub prev_down: bool,
    pub descents: u64,
}

/// The line-sweep cops, with an optional half-width override.
#[derive(Clone, Debug, Default)]
pub struct LineSweep {
    half_width: Option<i64>,
    state: Option<SweepState>,
}

impl LineSweep {
    pub fn new(half_width: Option<i64>) -> Self {
        LineSweep { half_width, state: None }
    }

    pub fn state(&self) -> Option<&SweepState> {
        self.state.as_ref()
    }
}

fn fault(msg: impl Into<String>) -> StrategyError {
    StrategyError::Fault(msg.into())
}

impl CopStrategy for LineSweep {
    fn name(&self) -> &str {
        "line-sweep"
    }

    fn place(&mut self, spec: &GridSpec, count: usize, _rng: &mut MatchRng) -> Result<Vec<Coord>, StrategyError> {
        let l = self.half_width.unwrap_or_else(|| sweep_half_width(spec.n, spec.speed));
        let cops = sweep_place(spec.n, l).map_err(|e| fault(e.to_string()))?;
        if cops.len() != count {
            return Err(fault(format!("line sweep with L = {l} needs {} cops, got {count}", cops.len())));
        }
        self.state = Some(SweepState {
            half_width: l,
            x_c: l + 1,
            y_c: spec.n,
            descended: false,
            prev_diff: None,
            prev_down: false,
            descents: 0,
        });
        Ok(cops)
    }

    fn step(&mut self, state: &GameState, _rng: &mut MatchRng) -> Result<Vec<Coord>, StrategyError> {
        let spec = *state.spec();
        let s = self.state.as_mut().ok_or_else(|| fault("line sweep was not placed"))?;
        let l = s.half_width;
        let expected: Vec<Coord> = (s.x_c - l..=s.x_c + l).map(|x| Coord::new(x, s.y_c)).collect();
        if state.cops() != expected.as_slice() {
            return Err(fault("formation is broken"));
        }
        let r = state.robber().ok_or_else(|| fault("robber is not placed"))?;
        if s.descended && r.y >= s.y_c {
            return Err(fault(format!("robber at row {} is not below the formation at row {}", r.y, s.y_c)));
        }
        let diff = s.x_c - r.x;
        let mv = sweep_decision(spec.n, l, spec.speed, s.x_c, r.x);
        if let Some(prev) = s.prev_diff {
            if prev.signum() * diff.signum() < 0 && !s.prev_down && mv != SweepMove::Down {
                return Err(fault("robber crossed the centre column without a step down"));
            }
        }
        let (dx, dy) = match mv {
            SweepMove::Down => {
                if s.y_c == 1 {
                    return Err(fault("step down requested on the bottom row"));
                }
                (0, -1)
            }
            SweepMove::Left => (-1, 0),
            SweepMove::Right => (1, 0),
        };
        if s.x_c + dx - l < 1 || s.x_c + dx + l > spec.n {
            return Err(fault("formation would leave the grid"));
        }
        s.x_c += dx;
        s.y_c += dy;
        if mv == SweepMove::Down {
            s.descended = true;
            s.descents += 1;
        }
        s.prev_diff = Some(diff);
        s.prev_down = mv == SweepMove::Down;
        Ok(state.cops().iter().map(|c| Coord::new(c.x + dx, c.y + dy)).collect())
    }
}

/// `n` cops on the bottom row marching up one row per turn.
#[derive(Clone, Debug, Default)]
pub struct Wall;

impl CopStrategy for Wall {
    fn name(&self) -> &str {
        "wall"
    }

    fn place(&mut self, spec: &GridSpec, count: usize, _rng: &mut MatchRng) -> Result<Vec<Coord>, StrategyError> {
        if count as i64 != spec.n {
            return Err(fault(format!("a wall needs {} cops, got {count}", spec.n)));
        }
        Ok((1..=spec.n).map(|x| Coord::new(x, 1)).collect())
    }

    fn step(&mut self, state: &GameState, _rng: &mut MatchRng) -> Result<Vec<Coord>, StrategyError> {
        let n = state.spec().n;
        Ok(state.cops().iter().map(|c| Coord::new(c.x, (c.y + 1).min(n))).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(sweep_half_width(50, 2), 19);
        assert_eq!(sweep_cop_count(50, 2).unwrap(), 39);
        assert_eq!(sweep_cop_count(100, 2).unwrap(), 73);
        for n in 7..40 {
            assert_eq!(sweep_cop_count(n, 1).unwrap(), 5);
        }
        assert!(sweep_cop_count(5, 2).is_err());
    }

    #[test]
    fn placements() {
        let p = sweep_place(9, 3).unwrap();
        assert_eq!(p.len(), 7);
        assert_eq!(p[3], Coord::new(4, 9));
        assert_eq!(sweep_place(7, 3).unwrap().last(), Some(&Coord::new(7, 7)));
        assert!(sweep_place(6, 3).is_err());
    }

    #[test]
    fn decisions() {
        assert_eq!(sweep_decision(100, 19, 3, 20, 22), SweepMove::Down);
        assert_eq!(sweep_decision(100, 19, 2, 20, 1), SweepMove::Down);
        assert_eq!(sweep_decision(100, 19, 2, 20, 40), SweepMove::Right);
        assert_eq!(sweep_decision(100, 19, 2, 40, 20), SweepMove::Left);
        // right edge
        assert_eq!(sweep_decision(50, 19, 2, 31, 50), SweepMove::Down);
    }
}
