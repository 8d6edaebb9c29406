//! The level-1 move: a single long walk from a 0-cell of one 1-cell into the
//! entry landing zone of the neighbouring 1-cell.

use serde::Serialize;

use super::frame::{Dir, Frame};
use super::EvasionError;
use crate::game::{Coord, Walk};
use crate::hierarchy::{CellCoord, Geometry, SafetyContext};

/// A square in the canonical frame of a 1-cell, 0-based from its corner.
pub type Local = (i64, i64);

/// The `n` vertex-disjoint connector paths from 0-cell `p` to 0-cell `q`,
/// as waypoint lists. Cell indices are canonical (exit up) and relative to
/// the 1-cell containing `p`; `q` must lie strictly above `p`.
///
/// Path `i` leaves `p` through column `i` of its top row, climbs to a
/// turning row, crosses to column `i` of `q` and climbs into `q`. Turning
/// rows are staggered so that the horizontal runs never cross.
pub fn path_family(n: i64, p: (i64, i64), q: (i64, i64)) -> Vec<Vec<Local>> {
    let p_top = p.1 * n + n - 1;
    let q_bottom = q.1 * n;
    let px = p.0 * n;
    let qx = q.0 * n;
    let dx = q.0 - p.0;
    (0..n)
        .map(|i| {
            if dx == 0 {
                vec![(px + i, p_top), (qx + i, q_bottom)]
            } else {
                let turn = if dx > 0 { p_top + 1 + (n - 1 - i) } else { p_top + 1 + i };
                vec![(px + i, p_top), (px + i, turn), (qx + i, turn), (qx + i, q_bottom)]
            }
        })
        .collect()
}

/// Every square on a waypoint path, in order.
pub fn path_squares(points: &[Local]) -> Vec<Local> {
    let mut out = vec![points[0]];
    for w in points.windows(2) {
        let (mut a, b) = (w[0], w[1]);
        let step = ((b.0 - a.0).signum(), (b.1 - a.1).signum());
        while a != b {
            a = (a.0 + step.0, a.1 + step.1);
            out.push(a);
        }
    }
    out
}

pub fn path_length(points: &[Local]) -> i64 {
    points.windows(2).map(|w| (w[1].0 - w[0].0).abs() + (w[1].1 - w[0].1).abs()).sum()
}

/// The full dash for connector `i`: from the robber's square to the top row
/// of `p`, along the connector, then inside `q` to `target`.
pub fn dash_waypoints(n: i64, robber: Local, p: (i64, i64), q: (i64, i64), i: i64, target: Local) -> Vec<Local> {
    let p_top = p.1 * n + n - 1;
    let family = path_family(n, p, q);
    let path = &family[i as usize];
    let mut pts = vec![robber, (robber.0, p_top)];
    pts.extend_from_slice(path);
    let end = *path.last().expect("paths are nonempty");
    pts.push((target.0, end.1));
    pts.push(target);
    pts
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DashReport {
    pub target: CellCoord,
    pub path_index: usize,
    pub length: i64,
}

/// Plans the dash out of 1-cell `x` in direction `exit`, checking every
/// hypothesis the move relies on.
pub fn base_dash(
    geom: &Geometry,
    cops: &[Coord],
    robber: Coord,
    speed: i64,
    x: CellCoord,
    exit: Dir,
) -> Result<(Walk, DashReport), EvasionError> {
    let hyp = |clause: &str| EvasionError::Hypothesis { level: 1, clause: clause.to_string() };
    let fail = |clause: String| EvasionError::Assertion { level: 1, clause };
    if x.k != 1 {
        return Err(hyp("dash needs a 1-cell"));
    }
    let ctx = SafetyContext::new(cops, geom);
    let (ex, ey) = exit.vector();
    let y = CellCoord::new(1, x.i + ex, x.j + ey);
    if !geom.contains(x, robber) {
        return Err(hyp("robber is not inside the cell"));
    }
    if !ctx.is_k_safe(robber, 1) {
        return Err(hyp("robber square is not 1-safe"));
    }
    let p_global = geom.cell_of(robber, 0);
    if geom.zone_side(p_global).is_none() {
        return Err(hyp("robber is not on a landing square"));
    }
    let t1 = geom.t(1);
    if !ctx.is_safe_for(y, 2 * t1 + 1) {
        return Err(hyp("target cell is not safe for 2T+1 steps"));
    }
    let zone = geom.landing_zone(y, exit.entry_side())?;
    let q_global = if ctx.is_safe_for(zone[0], 2) {
        zone[0]
    } else if ctx.is_safe_for(zone[2], 2) {
        zone[2]
    } else {
        return Err(fail("neither separated entry cell is safe for 2 steps".into()));
    };

    let n = geom.base();
    let h = crate::hierarchy::subdivision(1);
    let s = geom.side(1);
    let frame = Frame::new(exit);
    let origin = geom.origin(x);
    let rel = |c: CellCoord| (c.i - x.i * h, c.j - x.j * h);
    let p = frame.to_canonical(rel(p_global), h);
    let q = frame.to_canonical(rel(q_global), h);
    let local = |c: Coord| frame.to_canonical((c.x - origin.x, c.y - origin.y), s);
    let to_global = |l: Local| {
        let (gx, gy) = frame.to_global(l, s);
        Coord::new(gx + origin.x, gy + origin.y)
    };
    let robber_l = local(robber);
    let target_l = local(geom.center(q_global));

    let limit = speed.min(36 * n);
    for i in 0..n {
        let pts: Vec<Coord> = dash_waypoints(n, robber_l, p, q, i, target_l).into_iter().map(to_global).collect();
        let walk = Walk::from_waypoints(pts).map_err(|e| fail(format!("malformed dash: {e}")))?;
        if cops.iter().any(|&c| walk.visits(c)) {
            continue;
        }
        if walk.len() > limit {
            return Err(fail(format!("dash of length {} exceeds {limit}", walk.len())));
        }
        if !ctx.is_completely_k_safe(walk.end(), 1) {
            return Err(fail("arrival square is not completely 1-safe".into()));
        }
        let report = DashReport { target: q_global, path_index: i as usize, length: walk.len() };
        return Ok((walk, report));
    }
    Err(fail("every connector path is blocked".into()))
}
