//! Recursive traversal of one k-cell into the entry landing zone of its
//! neighbour, driven one robber turn at a time.

use std::collections::VecDeque;

use serde::Serialize;

use super::dash::{base_dash, DashReport};
use super::frame::{Dir, Frame};
use super::EvasionError;
use crate::game::{Coord, Walk};
use crate::hierarchy::{subdivision, zone_offsets, CellCoord, Geometry, SafetyContext, Side};

/// Everything a traversal may look at on the robber's turn.
#[derive(Clone, Copy, Debug)]
pub struct TurnContext<'a> {
    pub geom: &'a Geometry,
    pub cops: &'a [Coord],
    pub robber: Coord,
    pub speed: i64,
}

impl<'a> TurnContext<'a> {
    fn safety(&self) -> SafetyContext<'a> {
        SafetyContext::new(self.cops, self.geom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Leg {
    First,
    Second,
}

/// The one permitted detour of a traversal, in canonical relative cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Detour {
    pub from: (i64, i64),
    pub blocked: (i64, i64),
    pub rejoin: (i64, i64),
    pub left_ring: bool,
    pub cells: Vec<(i64, i64)>,
}

/// Summary of one finished traversal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraversalStats {
    pub level: u32,
    pub cell: CellCoord,
    pub exit: Dir,
    pub start: Side,
    pub rounds: u64,
    pub first_leg_rounds: u64,
    pub second_leg_rounds: u64,
    pub detours: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub second_path: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dash: Option<DashReport>,
}

/// One robber turn produced by a traversal.
#[derive(Clone, Debug)]
pub struct TurnOutput {
    pub walk: Walk,
    /// This walk ends the traversal.
    pub completes: bool,
}

/// Diagnostic view of one active level.
#[derive(Clone, Debug, Serialize)]
pub struct LevelView {
    pub k: u32,
    pub cell: (i64, i64),
    pub exit: Dir,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub leg: Option<Leg>,
    pub detour: bool,
}

/// The persistent plan of a level-k traversal of cell `x` toward its
/// neighbour in direction `exit`.
#[derive(Clone, Debug)]
pub struct TraversalPlan {
    level: u32,
    x: CellCoord,
    exit: Dir,
    frame: Frame,
    started: bool,
    start: Side,
    leg: Leg,
    /// Canonical relative index of the robber's (k-1)-cell.
    cur: (i64, i64),
    /// Cells still to visit, in order.
    route: VecDeque<(i64, i64)>,
    detour: Option<Detour>,
    /// A detour ring is being run.
    in_detour: bool,
    second_path: Option<usize>,
    child: Option<Box<TraversalPlan>>,
    child_target: (i64, i64),
    rounds: u64,
    first_leg_rounds: u64,
}

/// Chebyshev distance between two relative cells.
fn cheb(a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

fn add(a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
    (a.0 + b.0, a.1 + b.1)
}

/// Next cell along the Chebyshev-2 ring around the origin, counterclockwise.
fn ring_ccw(v: (i64, i64)) -> (i64, i64) {
    let (x, y) = v;
    if y == -2 && x < 2 {
        (x + 1, y)
    } else if x == 2 && y < 2 {
        (x, y + 1)
    } else if y == 2 && x > -2 {
        (x - 1, y)
    } else {
        (x, y - 1)
    }
}

fn ring_cw(v: (i64, i64)) -> (i64, i64) {
    let (x, y) = v;
    if x == -2 && y < 2 {
        (x, y + 1)
    } else if y == 2 && x < 2 {
        (x + 1, y)
    } else if x == 2 && y > -2 {
        (x, y - 1)
    } else {
        (x - 1, y)
    }
}

/// The ring of cells from `p` around the blocked cell `q` to `rejoin`,
/// stepping sideways by `lat` first and then going forward around `q`.
/// Excludes `p`, includes `rejoin`.
pub fn detour_ring(p: (i64, i64), q: (i64, i64), rejoin: (i64, i64), lat: (i64, i64)) -> Vec<(i64, i64)> {
    let f = (q.0 - p.0, q.1 - p.1);
    let mut cells = vec![add(p, lat), add(p, (2 * lat.0, 2 * lat.1))];
    let rel = |c: (i64, i64)| (c.0 - q.0, c.1 - q.1);
    let mut v = rel(cells[1]);
    let step: fn((i64, i64)) -> (i64, i64) = if {
        let n = ring_ccw(v);
        (n.0 - v.0, n.1 - v.1) == f
    } {
        ring_ccw
    } else {
        ring_cw
    };
    let target = rel(rejoin);
    // the ring has 16 cells; bail out rather than loop forever
    for _ in 0..16 {
        if v == target {
            break;
        }
        v = step(v);
        cells.push((q.0 + v.0, q.1 + v.1));
    }
    cells
}

/// The five second-leg paths from `f` (column `m`, row `r`) to the entry
/// zone of the cell above, in preference order. `h` is the subdivision.
pub fn second_leg_paths(h: i64, f: (i64, i64)) -> Vec<Vec<(i64, i64)>> {
    let (m, r) = f;
    let mut out = Vec::new();
    out.push((r + 1..=h).map(|y| (m, y)).collect());
    for s in [-1i64, 1] {
        let mut p = vec![(m + s, r), (m + 2 * s, r)];
        p.extend((r + 1..=h).map(|y| (m + 2 * s, y)));
        p.push((m + s, h));
        p.push((m, h));
        out.push(p);
    }
    for s in [-1i64, 1] {
        let mut p: Vec<_> = (1..=4).map(|d| (m + d * s, r)).collect();
        p.extend((r + 1..=h + 2).map(|y| (m + 4 * s, y)));
        p.extend((0..=3).rev().map(|d| (m + d * s, h + 2)));
        out.push(p);
    }
    out
}

impl TraversalPlan {
    pub fn new(level: u32, x: CellCoord, exit: Dir) -> Self {
        assert_eq!(level, x.k, "plan level matches its cell");
        TraversalPlan {
            level,
            x,
            exit,
            frame: Frame::new(exit),
            started: false,
            start: Side::Bottom,
            leg: Leg::First,
            cur: (0, 0),
            route: VecDeque::new(),
            detour: None,
            in_detour: false,
            second_path: None,
            child: None,
            child_target: (0, 0),
            rounds: 0,
            first_leg_rounds: 0,
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn cell(&self) -> CellCoord {
        self.x
    }

    pub fn exit(&self) -> Dir {
        self.exit
    }

    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    /// Active levels from this one down.
    pub fn view(&self) -> Vec<LevelView> {
        let mut out = vec![LevelView {
            k: self.level,
            cell: (self.x.i, self.x.j),
            exit: self.exit,
            leg: (self.level > 1).then_some(self.leg),
            detour: self.in_detour,
        }];
        if let Some(child) = &self.child {
            out.extend(child.view());
        }
        out
    }

    pub fn in_detour_anywhere(&self) -> bool {
        self.in_detour || self.child.as_ref().is_some_and(|c| c.in_detour_anywhere())
    }

    fn h(&self) -> i64 {
        subdivision(self.level)
    }

    fn target_cell(&self) -> CellCoord {
        let (dx, dy) = self.exit.vector();
        CellCoord::new(self.level, self.x.i + dx, self.x.j + dy)
    }

    /// Global (k-1)-cell of a canonical relative index (may lie in the
    /// neighbour above).
    fn global(&self, rel: (i64, i64)) -> CellCoord {
        let h = self.h();
        let (a, b) = self.frame.to_global(rel, h);
        CellCoord::new(self.level - 1, self.x.i * h + a, self.x.j * h + b)
    }

    fn canonical(&self, c: CellCoord) -> (i64, i64) {
        let h = self.h();
        self.frame.to_canonical((c.i - self.x.i * h, c.j - self.x.j * h), h)
    }

    fn hyp(&self, clause: &str) -> EvasionError {
        EvasionError::Hypothesis { level: self.level, clause: clause.to_string() }
    }

    fn fail(&self, clause: String) -> EvasionError {
        EvasionError::Assertion { level: self.level, clause }
    }

    /// Checks the entry hypotheses and lays out the first-leg route.
    fn begin(&mut self, ctx: &TurnContext) -> Result<(), EvasionError> {
        let geom = ctx.geom;
        let safety = ctx.safety();
        let k = self.level;
        if !geom.contains(self.x, ctx.robber) {
            return Err(self.hyp("robber is not inside the cell"));
        }
        if !safety.is_k_safe(ctx.robber, k) {
            return Err(self.hyp("robber square is not k-safe"));
        }
        if !geom.is_k_landing_square(ctx.robber, k) {
            return Err(self.hyp("robber square is not k-landing"));
        }
        if !safety.is_safe_for(self.target_cell(), 2 * geom.t(k) + 1) {
            return Err(self.hyp("target cell is not safe for 2T+1 steps"));
        }
        let sub = geom.cell_of(ctx.robber, k - 1);
        let side = geom.zone_side(sub).ok_or_else(|| self.hyp("robber is in no landing zone"))?;
        self.start = self.frame.side_to_canonical(side);
        self.started = true;
        if k == 1 {
            return Ok(());
        }
        self.cur = self.canonical(sub);
        let h = self.h();
        let m = (h - 1) / 2;
        let (c0, r0) = self.cur;
        let mut route = VecDeque::new();
        match self.start {
            Side::Bottom => route.extend((r0 + 1..h).map(|y| (m, y))),
            Side::Top => {}
            Side::Left => {
                route.extend((c0 + 1..=m).map(|x| (x, m)));
                route.extend((m + 1..h).map(|y| (m, y)));
            }
            Side::Right => {
                route.extend((m..c0).rev().map(|x| (x, m)));
                route.extend((m + 1..h).map(|y| (m, y)));
            }
        }
        self.route = route;
        debug_assert!(zone_offsets(k, self.start).contains(&self.cur));
        Ok(())
    }

    fn in_top_zone(&self) -> bool {
        let h = self.h();
        let m = (h - 1) / 2;
        self.cur.0 == m && self.cur.1 >= h - 3
    }

    /// Chooses the next (k-1)-cell and creates the child plan for it.
    fn plan_next(&mut self, ctx: &TurnContext) -> Result<(), EvasionError> {
        let geom = ctx.geom;
        let safety = ctx.safety();
        let k = self.level;
        let t = geom.t(k - 1);
        let h = self.h();
        if self.leg == Leg::First && self.in_top_zone() {
            self.leg = Leg::Second;
            self.in_detour = false;
            self.first_leg_rounds = self.rounds;
            let limit = match self.start {
                Side::Bottom | Side::Top => (h + 3) * t,
                Side::Left | Side::Right => (h + 5) * t,
            };
            if self.rounds as i64 > limit {
                return Err(self.fail(format!("first leg took {} rounds, limit {limit}", self.rounds)));
            }
            let paths = second_leg_paths(h, self.cur);
            let threshold = 14 * t + 1;
            let choice = paths
                .iter()
                .position(|p| p.iter().all(|&c| safety.is_safe_for(self.global(c), threshold)))
                .ok_or_else(|| self.fail("no second-leg path is safe for 14T+1 steps".into()))?;
            self.second_path = Some(choice);
            self.route = paths[choice].iter().copied().collect();
        }
        if self.leg == Leg::First {
            if self.in_detour && self.detour.as_ref().is_some_and(|d| d.rejoin == self.cur) {
                self.in_detour = false;
            }
            let next = *self.route.front().ok_or_else(|| self.fail("first-leg route ran out".into()))?;
            // ring cells were vetted with a wider margin when the ring was chosen
            if !self.in_detour && !safety.is_safe_for(self.global(next), 2 * t + 1) {
                self.start_detour(ctx)?;
            }
        }
        let next = self.route.pop_front().ok_or_else(|| self.fail("route is empty".into()))?;
        let d = (next.0 - self.cur.0, next.1 - self.cur.1);
        let dir = Dir::from_vector(self.frame.vec_to_global(d))
            .ok_or_else(|| self.fail(format!("route step {:?} -> {:?} is not a unit move", self.cur, next)))?;
        let here = self.global(self.cur);
        self.child = Some(Box::new(TraversalPlan::new(k - 1, here, dir)));
        self.child_target = next;
        Ok(())
    }

    fn start_detour(&mut self, ctx: &TurnContext) -> Result<(), EvasionError> {
        if self.detour.is_some() {
            return Err(self.fail("a second detour was needed".into()));
        }
        let geom = ctx.geom;
        let safety = ctx.safety();
        let t = geom.t(self.level - 1);
        let h = self.h();
        let p = self.cur;
        let q = self.route[0];
        let idx = self
            .route
            .iter()
            .position(|&c| cheb(c, q) == 2)
            .ok_or_else(|| self.fail("no separated cell beyond the blocked one".into()))?;
        let rejoin = self.route[idx];
        let f = (q.0 - p.0, q.1 - p.1);
        let left = (-f.1, f.0);
        let right = (f.1, -f.0);
        for (lat, left_ring) in [(left, true), (right, false)] {
            let ring = detour_ring(p, q, rejoin, lat);
            if ring.last() != Some(&rejoin) {
                continue;
            }
            if !ring.iter().all(|&(a, b)| (0..h).contains(&a) && (0..h).contains(&b)) {
                continue;
            }
            let threshold = (ring.len() as i64 + 1) * t + 1;
            if ring.iter().all(|&c| safety.is_safe_for(self.global(c), threshold)) {
                let rest: Vec<_> = self.route.iter().skip(idx + 1).copied().collect();
                self.route = ring.iter().copied().chain(rest).collect();
                self.detour = Some(Detour { from: p, blocked: q, rejoin, left_ring, cells: ring });
                self.in_detour = true;
                return Ok(());
            }
        }
        Err(self.fail("neither detour ring is safe".into()))
    }

    /// Produces the robber's walk for this turn.
    pub fn step(&mut self, ctx: &TurnContext, log: &mut Vec<TraversalStats>) -> Result<TurnOutput, EvasionError> {
        if !self.started {
            self.begin(ctx)?;
        }
        if self.level == 1 {
            let (walk, report) = base_dash(ctx.geom, ctx.cops, ctx.robber, ctx.speed, self.x, self.exit)?;
            self.rounds = 1;
            log.push(TraversalStats {
                level: 1,
                cell: self.x,
                exit: self.exit,
                start: self.start,
                rounds: 1,
                first_leg_rounds: 0,
                second_leg_rounds: 1,
                detours: 0,
                second_path: None,
                dash: Some(report),
            });
            return Ok(TurnOutput { walk, completes: true });
        }
        if self.child.is_none() {
            self.plan_next(ctx)?;
        }
        let child = self.child.as_mut().expect("a child plan was just made");
        let out = child.step(ctx, log)?;
        self.rounds += 1;
        if !out.completes {
            return Ok(TurnOutput { walk: out.walk, completes: false });
        }
        self.child = None;
        self.cur = self.child_target;
        let done = self.leg == Leg::Second && self.route.is_empty();
        if done {
            self.finish(ctx, &out.walk, log)?;
        }
        Ok(TurnOutput { walk: out.walk, completes: done })
    }

    fn finish(&mut self, ctx: &TurnContext, last: &Walk, log: &mut Vec<TraversalStats>) -> Result<(), EvasionError> {
        let geom = ctx.geom;
        let k = self.level;
        let t = geom.t(k - 1);
        let second = self.rounds - self.first_leg_rounds;
        if second as i64 > 13 * t {
            return Err(self.fail(format!("second leg took {second} rounds, limit {}", 13 * t)));
        }
        if self.rounds as i64 > geom.t(k) {
            return Err(self.fail(format!("traversal took {} rounds, limit {}", self.rounds, geom.t(k))));
        }
        let end = last.end();
        if !geom.contains(self.target_cell(), end) || !geom.is_k_landing_square(end, k) {
            return Err(self.fail("arrival is not a landing square of the target cell".into()));
        }
        if !ctx.safety().is_completely_k_safe(end, k) {
            return Err(self.fail("arrival square is not completely k-safe".into()));
        }
        log.push(TraversalStats {
            level: k,
            cell: self.x,
            exit: self.exit,
            start: self.start,
            rounds: self.rounds,
            first_leg_rounds: self.first_leg_rounds,
            second_leg_rounds: second,
            detours: u32::from(self.detour.is_some()),
            second_path: self.second_path,
            dash: None,
        });
        Ok(())
    }
}
