use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::params::HierarchyParams;
use super::sequences::{level_product, time_budget};
use super::HierarchyError;
use crate::game::Coord;

/// One k-cell of the tiling anchored at square `(1, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellCoord {
    pub k: u32,
    pub i: i64,
    pub j: i64,
}

impl CellCoord {
    pub const fn new(k: u32, i: i64, j: i64) -> Self {
        CellCoord { k, i, j }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Bottom,
    Top,
    Left,
    Right,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Bottom, Side::Top, Side::Left, Side::Right];
}

/// Separated cells share neither an edge nor a corner.
pub fn is_separated(a: CellCoord, b: CellCoord) -> Result<bool, HierarchyError> {
    if a.k != b.k {
        return Err(HierarchyError::LevelMismatch(a.k, b.k));
    }
    Ok((a.i - b.i).abs().max((a.j - b.j).abs()) >= 2)
}

/// `(2k+1)^2`, the number of (k-1)-cells along each side of a k-cell.
pub fn subdivision(k: u32) -> i64 {
    let s = 2 * k as i64 + 1;
    s * s
}

/// Relative (k-1)-cell indices of a landing zone of a k-cell, ordered from
/// the cell's edge inward.
pub fn zone_offsets(k: u32, side: Side) -> [(i64, i64); 3] {
    let h = subdivision(k);
    let m = (h - 1) / 2;
    match side {
        Side::Bottom => [(m, 0), (m, 1), (m, 2)],
        Side::Top => [(m, h - 1), (m, h - 2), (m, h - 3)],
        Side::Left => [(0, m), (1, m), (2, m)],
        Side::Right => [(h - 1, m), (h - 2, m), (h - 3, m)],
    }
}

/// Cell arithmetic for concrete parameters that fit in machine integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Geometry {
    n: i64,
    c: u64,
    k_max: u32,
    sides: Vec<i64>,
    budgets: Vec<i64>,
}

impl Geometry {
    /// Builds the geometry for levels `0..=k_max`, failing if any cell side or
    /// time budget overflows `i64`.
    pub fn new(n: i64, c: u64, k_max: u32) -> Result<Self, HierarchyError> {
        if n < 1 {
            return Err(HierarchyError::NotRunnable(format!("N = {n} must be positive")));
        }
        let mut sides = Vec::new();
        let mut budgets = Vec::new();
        for k in 0..=k_max {
            let side = (level_product(k) * n as u64)
                .to_i64()
                .ok_or_else(|| HierarchyError::NotRunnable(format!("side of a {k}-cell overflows")))?;
            let t = time_budget(k, c)
                .to_i64()
                .ok_or_else(|| HierarchyError::NotRunnable(format!("T_{k} overflows")))?;
            sides.push(side);
            budgets.push(t);
        }
        Ok(Geometry { n, c, k_max, sides, budgets })
    }

    pub fn from_params(p: &HierarchyParams) -> Result<Self, HierarchyError> {
        let n = p.n.to_i64().ok_or_else(|| HierarchyError::NotRunnable(format!("N = {} overflows", p.n)))?;
        Geometry::new(n, p.c, p.k_max)
    }

    pub fn base(&self) -> i64 {
        self.n
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    /// `N L_k`.
    pub fn side(&self, k: u32) -> i64 {
        self.sides[k as usize]
    }

    /// `T_k`.
    pub fn t(&self, k: u32) -> i64 {
        self.budgets[k as usize]
    }

    pub fn cell_of(&self, p: Coord, k: u32) -> CellCoord {
        let s = self.side(k);
        CellCoord { k, i: (p.x - 1).div_euclid(s), j: (p.y - 1).div_euclid(s) }
    }

    /// Inclusive square bounds `(x0, x1, y0, y1)`.
    pub fn bounds(&self, c: CellCoord) -> (i64, i64, i64, i64) {
        let s = self.side(c.k);
        (c.i * s + 1, (c.i + 1) * s, c.j * s + 1, (c.j + 1) * s)
    }

    pub fn contains(&self, c: CellCoord, p: Coord) -> bool {
        self.cell_of(p, c.k) == c
    }

    /// Bottom-left square of a cell.
    pub fn origin(&self, c: CellCoord) -> Coord {
        let (x0, _, y0, _) = self.bounds(c);
        Coord::new(x0, y0)
    }

    /// Centre square, rounding down.
    pub fn center(&self, c: CellCoord) -> Coord {
        let (x0, x1, y0, y1) = self.bounds(c);
        Coord::new(x0 + (x1 - x0) / 2, y0 + (y1 - y0) / 2)
    }

    /// Grid distance from a square to the nearest square of a cell.
    pub fn cell_distance(&self, p: Coord, c: CellCoord) -> i64 {
        let (x0, x1, y0, y1) = self.bounds(c);
        let dx = (x0 - p.x).max(0).max(p.x - x1);
        let dy = (y0 - p.y).max(0).max(p.y - y1);
        dx + dy
    }

    pub fn parent(&self, c: CellCoord) -> CellCoord {
        let h = subdivision(c.k + 1);
        CellCoord { k: c.k + 1, i: c.i.div_euclid(h), j: c.j.div_euclid(h) }
    }

    /// Index of a (k-1)-cell inside its parent k-cell.
    pub fn relative(&self, c: CellCoord) -> (i64, i64) {
        let h = subdivision(c.k + 1);
        (c.i.rem_euclid(h), c.j.rem_euclid(h))
    }

    pub fn child(&self, parent: CellCoord, rel: (i64, i64)) -> CellCoord {
        let h = subdivision(parent.k);
        CellCoord { k: parent.k - 1, i: parent.i * h + rel.0, j: parent.j * h + rel.1 }
    }

    pub fn landing_zone(&self, c: CellCoord, side: Side) -> Result<[CellCoord; 3], HierarchyError> {
        if c.k == 0 {
            return Err(HierarchyError::NoLandingZone);
        }
        Ok(zone_offsets(c.k, side).map(|rel| self.child(c, rel)))
    }

    /// Which landing zone of its parent a (k-1)-cell lies in, if any.
    pub fn zone_side(&self, sub: CellCoord) -> Option<Side> {
        let rel = self.relative(sub);
        Side::ALL.into_iter().find(|&s| zone_offsets(sub.k + 1, s).contains(&rel))
    }

    /// In the landing zone of each k'-cell containing it for `1 <= k' <= k`.
    pub fn is_k_landing_square(&self, p: Coord, k: u32) -> bool {
        (1..=k).all(|kk| self.zone_side(self.cell_of(p, kk - 1)).is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom() -> Geometry {
        Geometry::new(128, 40, 2).unwrap()
    }

    #[test]
    fn cell_of_examples() {
        let g = geom();
        assert_eq!(g.cell_of(Coord::new(1, 1), 0), CellCoord::new(0, 0, 0));
        assert_eq!(g.cell_of(Coord::new(129, 1), 0), CellCoord::new(0, 1, 0));
        assert_eq!(g.cell_of(Coord::new(1153, 1), 1), CellCoord::new(1, 1, 0));
        assert_eq!(g.cell_of(Coord::new(1152, 1), 1), CellCoord::new(1, 0, 0));
    }

    #[test]
    fn landing_zone_examples() {
        let g = geom();
        let rel = |c: CellCoord, side| g.landing_zone(c, side).unwrap().map(|s| g.relative(s));
        let x = CellCoord::new(1, 0, 0);
        assert_eq!(rel(x, Side::Bottom), [(4, 0), (4, 1), (4, 2)]);
        assert_eq!(rel(x, Side::Top), [(4, 8), (4, 7), (4, 6)]);
        assert_eq!(rel(CellCoord::new(2, 0, 0), Side::Bottom), [(12, 0), (12, 1), (12, 2)]);
        assert!(g.landing_zone(CellCoord::new(0, 0, 0), Side::Top).is_err());
    }

    #[test]
    fn landing_squares() {
        let g = geom();
        assert!(g.is_k_landing_square(Coord::new(1, 1), 0));
        // relative 0-cell (4,0) of its 1-cell
        assert!(g.is_k_landing_square(Coord::new(4 * 128 + 7, 3), 1));
        assert!(!g.is_k_landing_square(Coord::new(1, 1), 1));
    }

    #[test]
    fn separation() {
        let a = CellCoord::new(0, 0, 0);
        assert!(!is_separated(a, CellCoord::new(0, 0, 1)).unwrap());
        assert!(!is_separated(a, CellCoord::new(0, 1, 1)).unwrap());
        assert!(is_separated(a, CellCoord::new(0, 0, 2)).unwrap());
        assert!(is_separated(a, CellCoord::new(1, 0, 2)).is_err());
    }

    #[test]
    fn distances() {
        let g = geom();
        let c = CellCoord::new(0, 1, 1);
        assert_eq!(g.cell_distance(Coord::new(200, 200), c), 0);
        assert_eq!(g.cell_distance(Coord::new(128, 200), c), 1);
        assert_eq!(g.cell_distance(Coord::new(128, 128), c), 2);
        assert_eq!(g.cell_distance(Coord::new(1, 200), c), 128);
        assert_eq!(g.cell_distance(Coord::new(1, 300), c), 172);
    }

    #[test]
    fn separated_siblings_are_far_apart() {
        let g = geom();
        let x = CellCoord::new(1, 0, 0);
        let p = g.child(x, (2, 2));
        for q_rel in [(4, 2), (2, 4), (4, 4), (0, 0), (8, 8)] {
            let q = g.child(x, q_rel);
            assert!(is_separated(p, q).unwrap());
            let (x0, x1, y0, y1) = g.bounds(p);
            // the rectangle distance is attained at a corner or edge of p
            let min = [x0, x1]
                .iter()
                .flat_map(|&x| [y0, y1].map(|y| Coord::new(x, y)))
                .chain((x0..=x1).flat_map(|x| [Coord::new(x, y0), Coord::new(x, y1)]))
                .chain((y0..=y1).flat_map(|y| [Coord::new(x0, y), Coord::new(x1, y)]))
                .map(|s| g.cell_distance(s, q))
                .min()
                .unwrap();
            assert!(min >= 128 + 1, "{q_rel:?}: {min}");
        }
    }

    #[test]
    fn overflow_is_not_runnable() {
        let p = HierarchyParams::canonical(3);
        assert!(matches!(Geometry::from_params(&p), Err(HierarchyError::NotRunnable(_))));
    }
}
