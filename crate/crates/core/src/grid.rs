//! Grid geometry: 1-based coordinates, compass directions, and moves.

use serde::{Deserialize, Serialize};
use std::fmt;

/// 1-based grid coordinate; `(1, 1)` is the southwest corner, columns grow
/// east and rows grow north.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridCoord {
    pub col: u32,
    pub row: u32,
}

impl GridCoord {
    pub fn new(col: u32, row: u32) -> GridCoord {
        GridCoord { col, row }
    }

    pub fn manhattan(self, other: GridCoord) -> u32 {
        self.col.abs_diff(other.col) + self.row.abs_diff(other.row)
    }

    /// Coordinate shifted by `(dx, dy)`; `None` when the result would leave
    /// the 1-based quadrant (bounds against a grid are checked separately).
    pub fn offset(self, dx: i32, dy: i32) -> Option<GridCoord> {
        let col = self.col as i64 + dx as i64;
        let row = self.row as i64 + dy as i64;
        if col < 1 || row < 1 || col > u32::MAX as i64 || row > u32::MAX as i64 {
            None
        } else {
            Some(GridCoord::new(col as u32, row as u32))
        }
    }

    pub fn step(self, dir: Direction) -> Option<GridCoord> {
        let (dx, dy) = dir.delta();
        self.offset(dx, dy)
    }
}

impl fmt::Debug for GridCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.col, self.row)
    }
}

impl fmt::Display for GridCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.col, self.row)
    }
}

// Row-major order so sorted placement lists read south to north, west to east.
impl Ord for GridCoord {
    fn cmp(&self, other: &GridCoord) -> std::cmp::Ordering {
        (self.row, self.col).cmp(&(other.row, other.col))
    }
}

impl PartialOrd for GridCoord {
    fn partial_cmp(&self, other: &GridCoord) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Compass direction; also names the four grid edges.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    North,
    South,
    East,
    West,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::North,
        Direction::South,
        Direction::East,
        Direction::West,
    ];

    pub fn delta(self) -> (i32, i32) {
        match self {
            Direction::North => (0, 1),
            Direction::South => (0, -1),
            Direction::East => (1, 0),
            Direction::West => (-1, 0),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Direction::North => "North",
            Direction::South => "South",
            Direction::East => "East",
            Direction::West => "West",
        };
        f.write_str(name)
    }
}

/// Movement action of a transition.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Move {
    GoNorth,
    GoSouth,
    GoEast,
    GoWest,
    Stay,
}

impl Move {
    pub fn direction(self) -> Option<Direction> {
        match self {
            Move::GoNorth => Some(Direction::North),
            Move::GoSouth => Some(Direction::South),
            Move::GoEast => Some(Direction::East),
            Move::GoWest => Some(Direction::West),
            Move::Stay => None,
        }
    }

    pub fn toward(dir: Direction) -> Move {
        match dir {
            Direction::North => Move::GoNorth,
            Direction::South => Move::GoSouth,
            Direction::East => Move::GoEast,
            Direction::West => Move::GoWest,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Move::GoNorth => "goNorth",
            Move::GoSouth => "goSouth",
            Move::GoEast => "goEast",
            Move::GoWest => "goWest",
            Move::Stay => "stay",
        };
        f.write_str(name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manhattan_distance() {
        assert_eq!(GridCoord::new(1, 1).manhattan(GridCoord::new(4, 3)), 5);
        assert_eq!(GridCoord::new(2, 2).manhattan(GridCoord::new(2, 2)), 0);
    }

    #[test]
    fn offsets_clip_at_quadrant() {
        assert_eq!(GridCoord::new(1, 1).step(Direction::West), None);
        assert_eq!(GridCoord::new(1, 1).step(Direction::South), None);
        assert_eq!(
            GridCoord::new(1, 1).step(Direction::East),
            Some(GridCoord::new(2, 1))
        );
    }

    #[test]
    fn row_major_order() {
        let mut coords = vec![
            GridCoord::new(2, 1),
            GridCoord::new(1, 2),
            GridCoord::new(1, 1),
        ];
        coords.sort();
        assert_eq!(
            coords,
            vec![
                GridCoord::new(1, 1),
                GridCoord::new(2, 1),
                GridCoord::new(1, 2),
            ]
        );
    }
}
