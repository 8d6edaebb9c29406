use serde::Serialize;

use super::cells::{is_separated, CellCoord, Geometry};
use super::HierarchyError;
use crate::game::Coord;

/// Cop positions together with the geometry they are judged against.
#[derive(Clone, Copy, Debug)]
pub struct SafetyContext<'a> {
    pub cops: &'a [Coord],
    pub geom: &'a Geometry,
}

/// Which of two separated cells passed the safety test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Selection {
    First,
    Second,
    Both,
}

impl<'a> SafetyContext<'a> {
    pub fn new(cops: &'a [Coord], geom: &'a Geometry) -> Self {
        SafetyContext { cops, geom }
    }

    /// Number of cops within distance `t` of the cell.
    pub fn cops_near(&self, c: CellCoord, t: i64) -> usize {
        self.cops.iter().filter(|&&p| self.geom.cell_distance(p, c) <= t).count()
    }

    /// Fewer than `2^k` cops within distance `t` of a k-cell.
    pub fn is_safe_for(&self, c: CellCoord, t: i64) -> bool {
        let limit = 1usize.checked_shl(c.k).unwrap_or(usize::MAX);
        self.cops_near(c, t) < limit
    }

    pub fn is_k_safe(&self, p: Coord, k: u32) -> bool {
        (0..=k).all(|kk| self.is_safe_for(self.geom.cell_of(p, kk), self.geom.t(kk)))
    }

    /// k-safe with one extra step of margin, i.e. still k-safe after any
    /// single cop move.
    pub fn is_completely_k_safe(&self, p: Coord, k: u32) -> bool {
        (0..=k).all(|kk| self.is_safe_for(self.geom.cell_of(p, kk), self.geom.t(kk) + 1))
    }

    /// For separated sibling cells inside a k-cell that is safe for `t`
    /// steps, at least one of them is safe for `t` steps.
    pub fn pick_safe_sibling(
        &self,
        pc: CellCoord,
        qc: CellCoord,
        t: i64,
    ) -> Result<Selection, HierarchyError> {
        if !is_separated(pc, qc)? {
            return Err(HierarchyError::Precondition("cells are not separated".into()));
        }
        let x = self.geom.parent(pc);
        if self.geom.parent(qc) != x {
            return Err(HierarchyError::Precondition("cells have different parents".into()));
        }
        if 2 * t >= self.geom.side(pc.k) {
            return Err(HierarchyError::Precondition(format!("2t = {} is not below the cell side", 2 * t)));
        }
        if !self.is_safe_for(x, t) {
            return Err(HierarchyError::Precondition("parent cell is not safe".into()));
        }
        match (self.is_safe_for(pc, t), self.is_safe_for(qc, t)) {
            (true, true) => Ok(Selection::Both),
            (true, false) => Ok(Selection::First),
            (false, true) => Ok(Selection::Second),
            (false, false) => Err(HierarchyError::Precondition("neither cell is safe".into())),
        }
    }
}
