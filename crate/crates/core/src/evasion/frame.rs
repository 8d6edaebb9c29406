//! Dihedral frames: every traversal is planned with the exit pointing up and
//! rotated into place.

use serde::{Deserialize, Serialize};

use crate::hierarchy::Side;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dir {
    Up,
    Right,
    Down,
    Left,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::Up, Dir::Right, Dir::Down, Dir::Left];

    pub fn vector(self) -> (i64, i64) {
        match self {
            Dir::Up => (0, 1),
            Dir::Right => (1, 0),
            Dir::Down => (0, -1),
            Dir::Left => (-1, 0),
        }
    }

    pub fn from_vector(v: (i64, i64)) -> Option<Dir> {
        Dir::ALL.into_iter().find(|d| d.vector() == v)
    }

    /// The side of the destination cell a move in this direction enters by.
    pub fn entry_side(self) -> Side {
        match self {
            Dir::Up => Side::Bottom,
            Dir::Right => Side::Left,
            Dir::Down => Side::Top,
            Dir::Left => Side::Right,
        }
    }

    /// The side of a cell facing this direction.
    pub fn facing_side(self) -> Side {
        match self {
            Dir::Up => Side::Top,
            Dir::Right => Side::Right,
            Dir::Down => Side::Bottom,
            Dir::Left => Side::Left,
        }
    }

    pub fn from_facing_side(side: Side) -> Dir {
        match side {
            Side::Top => Dir::Up,
            Side::Right => Dir::Right,
            Side::Bottom => Dir::Down,
            Side::Left => Dir::Left,
        }
    }
}

/// The rotation carrying the canonical frame (exit up) onto a frame whose
/// exit is `exit`. Coordinates are relative to a square box of extent `s`;
/// points outside the box map by the same affine formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Frame {
    pub exit: Dir,
}

impl Frame {
    pub fn new(exit: Dir) -> Self {
        Frame { exit }
    }

    pub fn to_global(&self, (a, b): (i64, i64), s: i64) -> (i64, i64) {
        match self.exit {
            Dir::Up => (a, b),
            Dir::Right => (b, s - 1 - a),
            Dir::Down => (s - 1 - a, s - 1 - b),
            Dir::Left => (s - 1 - b, a),
        }
    }

    pub fn to_canonical(&self, (x, y): (i64, i64), s: i64) -> (i64, i64) {
        match self.exit {
            Dir::Up => (x, y),
            Dir::Right => (s - 1 - y, x),
            Dir::Down => (s - 1 - x, s - 1 - y),
            Dir::Left => (y, s - 1 - x),
        }
    }

    pub fn vec_to_global(&self, (da, db): (i64, i64)) -> (i64, i64) {
        match self.exit {
            Dir::Up => (da, db),
            Dir::Right => (db, -da),
            Dir::Down => (-da, -db),
            Dir::Left => (-db, da),
        }
    }

    pub fn vec_to_canonical(&self, (dx, dy): (i64, i64)) -> (i64, i64) {
        match self.exit {
            Dir::Up => (dx, dy),
            Dir::Right => (-dy, dx),
            Dir::Down => (-dx, -dy),
            Dir::Left => (dy, -dx),
        }
    }

    pub fn dir_to_global(&self, d: Dir) -> Dir {
        Dir::from_vector(self.vec_to_global(d.vector())).expect("rotations preserve unit vectors")
    }

    pub fn side_to_canonical(&self, side: Side) -> Side {
        let d = Dir::from_vector(self.vec_to_canonical(Dir::from_facing_side(side).vector()))
            .expect("rotations preserve unit vectors");
        d.facing_side()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_up_maps_to_exit() {
        for exit in Dir::ALL {
            let f = Frame::new(exit);
            assert_eq!(f.dir_to_global(Dir::Up), exit);
        }
    }

    #[test]
    fn point_maps_invert_and_agree_with_vectors() {
        let s = 9;
        for exit in Dir::ALL {
            let f = Frame::new(exit);
            for a in -3..12 {
                for b in -3..20 {
                    let g = f.to_global((a, b), s);
                    assert_eq!(f.to_canonical(g, s), (a, b));
                    let g2 = f.to_global((a + 1, b), s);
                    assert_eq!((g2.0 - g.0, g2.1 - g.1), f.vec_to_global((1, 0)));
                }
            }
            for a in 0..s {
                for b in 0..s {
                    let (x, y) = f.to_global((a, b), s);
                    assert!((0..s).contains(&x) && (0..s).contains(&y));
                }
            }
        }
    }

    #[test]
    fn sides_rotate() {
        let f = Frame::new(Dir::Right);
        assert_eq!(f.side_to_canonical(Side::Right), Side::Top);
        assert_eq!(f.side_to_canonical(Side::Bottom), Side::Right);
        assert_eq!(Frame::new(Dir::Up).side_to_canonical(Side::Left), Side::Left);
    }
}
