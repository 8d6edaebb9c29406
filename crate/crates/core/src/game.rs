//! Rules of the cops-and-fast-robber game on an `n x n` grid.
//!
//! Positions are sparse: a [`GameState`] stores coordinates only, never a
//! board, so very large grids cost nothing extra.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A grid square, 1-based, with `(1, 1)` at the bottom left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(i64, i64)", into = "(i64, i64)")]
pub struct Coord {
    pub x: i64,
    pub y: i64,
}

impl Coord {
    pub const fn new(x: i64, y: i64) -> Self {
        Coord { x, y }
    }

    pub fn l1(self, other: Coord) -> i64 {
        (self.x - other.x).abs() + (self.y - other.y).abs()
    }

    /// The four edge neighbours in the fixed order down, up, left, right.
    pub fn neighbours(self) -> [Coord; 4] {
        [
            Coord::new(self.x, self.y - 1),
            Coord::new(self.x, self.y + 1),
            Coord::new(self.x - 1, self.y),
            Coord::new(self.x + 1, self.y),
        ]
    }
}

impl From<(i64, i64)> for Coord {
    fn from((x, y): (i64, i64)) -> Self {
        Coord { x, y }
    }
}

impl From<Coord> for (i64, i64) {
    fn from(c: Coord) -> Self {
        (c.x, c.y)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Two squares are adjacent iff they share an edge.
pub fn adjacent(a: Coord, b: Coord) -> bool {
    a.l1(b) == 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: i64,
    /// Robber speed: the maximum number of edges in one walk.
    pub speed: i64,
}

impl GridSpec {
    pub fn new(n: i64, speed: i64) -> Result<Self, MoveError> {
        if n < 2 || speed < 1 {
            return Err(MoveError::BadGrid { n, speed });
        }
        Ok(GridSpec { n, speed })
    }

    pub fn contains(&self, c: Coord) -> bool {
        (1..=self.n).contains(&c.x) && (1..=self.n).contains(&c.y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("invalid grid n={n} speed={speed}: need n >= 2 and speed >= 1")]
    BadGrid { n: i64, speed: i64 },
    #[error("expected phase {expected:?}, state is in {found:?}")]
    WrongPhase { expected: Phase, found: Phase },
    #[error("expected {expected} cop destinations, got {found}")]
    WrongArity { expected: usize, found: usize },
    #[error("cop {index} cannot move from {from} to {to}")]
    CopStep { index: usize, from: Coord, to: Coord },
    #[error("square {0} is outside the grid")]
    OutOfBounds(Coord),
    #[error("walk starts at {found} but the robber is at {expected}")]
    WalkStart { expected: Coord, found: Coord },
    #[error("walk of length {len} exceeds speed {speed}")]
    TooLong { len: i64, speed: i64 },
    #[error("walk passes through cop square {0}")]
    ThroughCop(Coord),
    #[error("robber cannot be placed on cop square {0}")]
    PlacedOnCop(Coord),
    #[error("walk segment {from} -> {to} is not axis aligned")]
    Diagonal { from: Coord, to: Coord },
    #[error("walk squares {from} and {to} are not adjacent")]
    NotAdjacent { from: Coord, to: Coord },
    #[error("a walk needs at least one square")]
    EmptyWalk,
}

/// A robber walk stored as waypoints joined by straight axis-aligned runs.
///
/// A single waypoint is the stay walk. Consecutive waypoints are distinct and
/// share a row or a column; every square on the run between them is visited.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Walk {
    points: Vec<Coord>,
}

fn direction(a: Coord, b: Coord) -> (i64, i64) {
    ((b.x - a.x).signum(), (b.y - a.y).signum())
}

impl Walk {
    pub fn stay(at: Coord) -> Self {
        Walk { points: vec![at] }
    }

    /// Builds a walk from unit steps.
    pub fn from_squares(squares: &[Coord]) -> Result<Self, MoveError> {
        if squares.is_empty() {
            return Err(MoveError::EmptyWalk);
        }
        for pair in squares.windows(2) {
            if !adjacent(pair[0], pair[1]) {
                return Err(MoveError::NotAdjacent { from: pair[0], to: pair[1] });
            }
        }
        Walk::from_waypoints(squares.to_vec())
    }

    /// Builds a walk from waypoints; repeated points are dropped and
    /// consecutive runs in the same direction are merged.
    pub fn from_waypoints(points: Vec<Coord>) -> Result<Self, MoveError> {
        let mut out: Vec<Coord> = Vec::with_capacity(points.len());
        for p in points {
            if let Some(&last) = out.last() {
                if last == p {
                    continue;
                }
                if last.x != p.x && last.y != p.y {
                    return Err(MoveError::Diagonal { from: last, to: p });
                }
                if out.len() >= 2 {
                    let prev = out[out.len() - 2];
                    if direction(prev, last) == direction(last, p) {
                        out.pop();
                    }
                }
            }
            out.push(p);
        }
        if out.is_empty() {
            return Err(MoveError::EmptyWalk);
        }
        Ok(Walk { points: out })
    }

    pub fn waypoints(&self) -> &[Coord] {
        &self.points
    }

    pub fn start(&self) -> Coord {
        self.points[0]
    }

    pub fn end(&self) -> Coord {
        *self.points.last().expect("walk is never empty")
    }

    /// Number of edges traversed.
    pub fn len(&self) -> i64 {
        self.points.windows(2).map(|w| w[0].l1(w[1])).sum()
    }

    pub fn is_stay(&self) -> bool {
        self.points.len() == 1
    }

    pub fn segments(&self) -> impl Iterator<Item = (Coord, Coord)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }

    /// Whether the walk visits `c`.
    pub fn visits(&self, c: Coord) -> bool {
        if self.points.len() == 1 {
            return self.points[0] == c;
        }
        self.segments().any(|(a, b)| on_segment(a, b, c))
    }

    /// Every visited square in order, including the start.
    pub fn squares(&self) -> Vec<Coord> {
        let mut out = vec![self.points[0]];
        for (a, b) in self.segments() {
            let (dx, dy) = direction(a, b);
            let mut cur = a;
            while cur != b {
                cur = Coord::new(cur.x + dx, cur.y + dy);
                out.push(cur);
            }
        }
        out
    }
}

/// Whether `c` lies on the axis-aligned segment from `a` to `b`.
pub fn on_segment(a: Coord, b: Coord, c: Coord) -> bool {
    if a.x == b.x {
        c.x == a.x && c.y >= a.y.min(b.y) && c.y <= a.y.max(b.y)
    } else {
        c.y == a.y && c.x >= a.x.min(b.x) && c.x <= a.x.max(b.x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    CopsPlacing,
    RobberPlacing,
    CopsToMove,
    RobberToMove,
    Captured,
}

/// A full game position. Cops keep their order so moves can be attributed
/// to individual cops; as a set of positions the cops form a multiset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameState {
    spec: GridSpec,
    cops: Vec<Coord>,
    robber: Option<Coord>,
    phase: Phase,
    round: u64,
}

impl GameState {
    pub fn new(spec: GridSpec) -> Self {
        GameState { spec, cops: Vec::new(), robber: None, phase: Phase::CopsPlacing, round: 0 }
    }

    /// Assembles a mid-game position, checking the structural invariants.
    pub fn from_parts(
        spec: GridSpec,
        cops: Vec<Coord>,
        robber: Coord,
        phase: Phase,
        round: u64,
    ) -> Result<Self, MoveError> {
        for &c in cops.iter().chain(std::iter::once(&robber)) {
            if !spec.contains(c) {
                return Err(MoveError::OutOfBounds(c));
            }
        }
        let captured = cops.contains(&robber);
        let phase = match phase {
            Phase::CopsToMove | Phase::RobberToMove if captured => Phase::Captured,
            Phase::Captured if !captured => Phase::CopsToMove,
            p => p,
        };
        Ok(GameState { spec, cops, robber: Some(robber), phase, round })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn cops(&self) -> &[Coord] {
        &self.cops
    }

    pub fn robber(&self) -> Option<Coord> {
        self.robber
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn is_captured(&self) -> bool {
        self.phase == Phase::Captured
    }

    fn expect_phase(&self, expected: Phase) -> Result<(), MoveError> {
        if self.phase != expected {
            return Err(MoveError::WrongPhase { expected, found: self.phase });
        }
        Ok(())
    }

    pub fn place_cops(&self, cops: Vec<Coord>) -> Result<GameState, MoveError> {
        self.expect_phase(Phase::CopsPlacing)?;
        if let Some(&bad) = cops.iter().find(|c| !self.spec.contains(**c)) {
            return Err(MoveError::OutOfBounds(bad));
        }
        Ok(GameState { cops, phase: Phase::RobberPlacing, ..self.clone() })
    }

    pub fn place_robber(&self, at: Coord) -> Result<GameState, MoveError> {
        self.expect_phase(Phase::RobberPlacing)?;
        if !self.spec.contains(at) {
            return Err(MoveError::OutOfBounds(at));
        }
        if self.cops.contains(&at) {
            return Err(MoveError::PlacedOnCop(at));
        }
        Ok(GameState { robber: Some(at), phase: Phase::CopsToMove, ..self.clone() })
    }

    /// Checks a cop move without applying it.
    pub fn check_cop_move(&self, dests: &[Coord]) -> Result<(), MoveError> {
        self.expect_phase(Phase::CopsToMove)?;
        if dests.len() != self.cops.len() {
            return Err(MoveError::WrongArity { expected: self.cops.len(), found: dests.len() });
        }
        for (index, (&from, &to)) in self.cops.iter().zip(dests).enumerate() {
            if !self.spec.contains(to) {
                return Err(MoveError::OutOfBounds(to));
            }
            if from != to && !adjacent(from, to) {
                return Err(MoveError::CopStep { index, from, to });
            }
        }
        Ok(())
    }

    pub fn apply_cop_move(&self, dests: &[Coord]) -> Result<GameState, MoveError> {
        self.check_cop_move(dests)?;
        let robber = self.robber.expect("robber is placed once cops move");
        let phase = if dests.contains(&robber) { Phase::Captured } else { Phase::RobberToMove };
        Ok(GameState { cops: dests.to_vec(), phase, ..self.clone() })
    }

    /// Checks a robber walk without applying it.
    pub fn check_robber_walk(&self, walk: &Walk) -> Result<(), MoveError> {
        self.expect_phase(Phase::RobberToMove)?;
        let robber = self.robber.expect("robber is placed once it moves");
        if walk.start() != robber {
            return Err(MoveError::WalkStart { expected: robber, found: walk.start() });
        }
        for &p in walk.waypoints() {
            if !self.spec.contains(p) {
                return Err(MoveError::OutOfBounds(p));
            }
        }
        let len = walk.len();
        if len > self.spec.speed {
            return Err(MoveError::TooLong { len, speed: self.spec.speed });
        }
        if let Some(&cop) = self.cops.iter().find(|&&c| walk.visits(c)) {
            return Err(MoveError::ThroughCop(cop));
        }
        Ok(())
    }

    pub fn apply_robber_walk(&self, walk: &Walk) -> Result<GameState, MoveError> {
        self.check_robber_walk(walk)?;
        Ok(GameState {
            robber: Some(walk.end()),
            phase: Phase::CopsToMove,
            round: self.round + 1,
            ..self.clone()
        })
    }

    /// All squares the robber can end a legal walk on.
    pub fn reachable_set(&self) -> Result<BTreeSet<Coord>, MoveError> {
        self.expect_phase(Phase::RobberToMove)?;
        let robber = self.robber.expect("robber is placed once it moves");
        Ok(ReachTree::build(&self.spec, &self.cops, robber).endpoints().collect())
    }
}

/// Breadth-first tree of robber walks from one square, cops blocking,
/// truncated at the robber's speed.
#[derive(Debug, Clone)]
pub struct ReachTree {
    root: Coord,
    parent: HashMap<Coord, Coord>,
}

impl ReachTree {
    pub fn build(spec: &GridSpec, cops: &[Coord], root: Coord) -> Self {
        let mut parent = HashMap::new();
        parent.insert(root, root);
        let mut queue = VecDeque::from([(root, 0i64)]);
        while let Some((cur, depth)) = queue.pop_front() {
            if depth == spec.speed {
                continue;
            }
            for next in cur.neighbours() {
                if !spec.contains(next) || cops.contains(&next) || parent.contains_key(&next) {
                    continue;
                }
                parent.insert(next, cur);
                queue.push_back((next, depth + 1));
            }
        }
        ReachTree { root, parent }
    }

    pub fn contains(&self, c: Coord) -> bool {
        self.parent.contains_key(&c)
    }

    /// Reachable squares in ascending coordinate order.
    pub fn endpoints(&self) -> impl Iterator<Item = Coord> {
        let mut all: Vec<Coord> = self.parent.keys().copied().collect();
        all.sort();
        all.into_iter()
    }

    /// A shortest legal walk to `target`, if reachable.
    pub fn walk_to(&self, target: Coord) -> Option<Walk> {
        if !self.contains(target) {
            return None;
        }
        let mut squares = vec![target];
        let mut cur = target;
        while cur != self.root {
            cur = self.parent[&cur];
            squares.push(cur);
        }
        squares.reverse();
        Some(Walk::from_squares(&squares).expect("tree edges are unit steps"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: i64, y: i64) -> Coord {
        Coord::new(x, y)
    }

    fn robber_turn(n: i64, speed: i64, cops: Vec<Coord>, robber: Coord) -> GameState {
        GameState::from_parts(GridSpec::new(n, speed).unwrap(), cops, robber, Phase::RobberToMove, 0)
            .unwrap()
    }

    #[test]
    fn adjacency() {
        assert!(adjacent(c(2, 2), c(2, 3)));
        assert!(!adjacent(c(2, 2), c(3, 3)));
        assert!(!adjacent(c(2, 2), c(2, 2)));
    }

    #[test]
    fn cop_moves() {
        let spec = GridSpec::new(9, 2).unwrap();
        let s = GameState::from_parts(spec, vec![c(1, 1)], c(5, 5), Phase::CopsToMove, 0).unwrap();
        assert_eq!(s.apply_cop_move(&[c(1, 2)]).unwrap().phase(), Phase::RobberToMove);
        assert!(matches!(s.apply_cop_move(&[c(3, 1)]), Err(MoveError::CopStep { .. })));
        assert!(matches!(s.apply_cop_move(&[c(1, 0)]), Err(MoveError::OutOfBounds(_))));
        assert!(matches!(s.apply_cop_move(&[]), Err(MoveError::WrongArity { .. })));

        let s = GameState::from_parts(spec, vec![c(4, 5)], c(5, 5), Phase::CopsToMove, 0).unwrap();
        let t = s.apply_cop_move(&[c(5, 5)]).unwrap();
        assert_eq!(t.phase(), Phase::Captured);
        assert!(matches!(t.apply_cop_move(&[c(5, 5)]), Err(MoveError::WrongPhase { .. })));
    }

    #[test]
    fn robber_walks() {
        let s = robber_turn(5, 3, vec![c(1, 2)], c(1, 1));
        let stayed = s.apply_robber_walk(&Walk::stay(c(1, 1))).unwrap();
        assert_eq!(stayed.robber(), Some(c(1, 1)));
        assert_eq!(stayed.round(), 1);
        assert_eq!(stayed.phase(), Phase::CopsToMove);

        let through = Walk::from_squares(&[c(1, 1), c(1, 2), c(1, 3)]).unwrap();
        assert_eq!(s.apply_robber_walk(&through), Err(MoveError::ThroughCop(c(1, 2))));

        let s = robber_turn(5, 2, vec![], c(1, 1));
        let long = Walk::from_squares(&[c(1, 1), c(2, 1), c(3, 1), c(4, 1)]).unwrap();
        assert!(matches!(s.apply_robber_walk(&long), Err(MoveError::TooLong { len: 3, .. })));
        let wrong_start = Walk::stay(c(2, 2));
        assert!(matches!(s.apply_robber_walk(&wrong_start), Err(MoveError::WalkStart { .. })));
        let outside = Walk::from_squares(&[c(1, 1), c(0, 1)]).unwrap();
        assert!(matches!(s.apply_robber_walk(&outside), Err(MoveError::OutOfBounds(_))));
    }

    #[test]
    fn walk_construction() {
        assert!(Walk::from_squares(&[c(1, 1), c(2, 2)]).is_err());
        assert!(Walk::from_waypoints(vec![c(1, 1), c(3, 4)]).is_err());
        let w = Walk::from_waypoints(vec![c(1, 1), c(1, 3), c(1, 5), c(4, 5), c(4, 5)]).unwrap();
        assert_eq!(w.waypoints(), &[c(1, 1), c(1, 5), c(4, 5)]);
        assert_eq!(w.len(), 7);
        assert_eq!(w.squares().len(), 8);
        // back-and-forth runs are kept apart
        let w = Walk::from_waypoints(vec![c(1, 1), c(1, 3), c(1, 2)]).unwrap();
        assert_eq!(w.len(), 3);
    }

    #[test]
    fn reachable_examples() {
        let s = robber_turn(3, 1, vec![], c(2, 2));
        let got: Vec<_> = s.reachable_set().unwrap().into_iter().collect();
        let mut want = vec![c(2, 2), c(1, 2), c(3, 2), c(2, 1), c(2, 3)];
        want.sort();
        assert_eq!(got, want);

        let s = robber_turn(3, 9, vec![], c(1, 1));
        assert_eq!(s.reachable_set().unwrap().len(), 9);

        let s = robber_turn(3, 2, vec![c(1, 2), c(2, 1)], c(1, 1));
        assert_eq!(s.reachable_set().unwrap().into_iter().collect::<Vec<_>>(), vec![c(1, 1)]);

        let s = GameState::from_parts(GridSpec::new(3, 1).unwrap(), vec![], c(1, 1), Phase::CopsToMove, 0)
            .unwrap();
        assert!(s.reachable_set().is_err());
    }

    #[test]
    fn placement() {
        let s = GameState::new(GridSpec::new(4, 1).unwrap());
        let s = s.place_cops(vec![c(1, 1), c(1, 1)]).unwrap();
        assert_eq!(s.place_robber(c(1, 1)), Err(MoveError::PlacedOnCop(c(1, 1))));
        let s = s.place_robber(c(4, 4)).unwrap();
        assert_eq!(s.phase(), Phase::CopsToMove);
    }
}
