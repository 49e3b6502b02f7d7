//! Local configurations of a single rhombus.

use serde::{Deserialize, Serialize};

use crate::geometry::{Corner, Side};

/// Which pair of opposite sides a straight crossing joins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    /// Sides 3 and 1 (left to right).
    LeftRight,
    /// Sides 0 and 2 (bottom to top).
    BottomTop,
}

/// One strand segment inside a rhombus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Move {
    Arc(Corner),
    Straight(Axis),
}

impl Move {
    /// The segment joining two distinct sides.
    pub fn between(a: Side, b: Side) -> Move {
        debug_assert_ne!(a, b);
        if b == a.opposite() {
            if a.0.is_multiple_of(2) {
                Move::Straight(Axis::BottomTop)
            } else {
                Move::Straight(Axis::LeftRight)
            }
        } else if b == a.prev() {
            Move::Arc(Corner::from_index(a.0))
        } else {
            Move::Arc(Corner::from_index(b.0))
        }
    }

    pub fn sides(self) -> (Side, Side) {
        match self {
            Move::Arc(c) => c.sides(),
            Move::Straight(Axis::BottomTop) => (Side::BOTTOM, Side::TOP),
            Move::Straight(Axis::LeftRight) => (Side::LEFT, Side::RIGHT),
        }
    }
}

/// Weight label of a non-empty plaquette; the discriminant indexes monomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WeightKind {
    U1 = 0,
    U2 = 1,
    V = 2,
    W1 = 3,
    W2 = 4,
}

impl WeightKind {
    pub const ALL: [WeightKind; 5] = [WeightKind::U1, WeightKind::U2, WeightKind::V, WeightKind::W1, WeightKind::W2];

    pub fn name(self) -> &'static str {
        match self {
            WeightKind::U1 => "u1",
            WeightKind::U2 => "u2",
            WeightKind::V => "v",
            WeightKind::W1 => "w1",
            WeightKind::W2 => "w2",
        }
    }
}

/// The nine admissible configurations of a rhombus. Corner names refer to the
/// corner an arc surrounds; SW/NE have angle theta, SE/NW have `pi - theta`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PlaquetteState {
    #[default]
    Empty,
    ArcSW,
    ArcSE,
    ArcNE,
    ArcNW,
    /// Straight crossing between the left and right sides.
    StraightA,
    /// Straight crossing between the bottom and top sides.
    StraightB,
    /// Arcs around both theta corners (SW and NE).
    DoubleArcTheta,
    /// Arcs around both `pi - theta` corners (SE and NW).
    DoubleArcPiMinusTheta,
}

impl PlaquetteState {
    pub const ALL: [PlaquetteState; 9] = [
        PlaquetteState::Empty,
        PlaquetteState::ArcSW,
        PlaquetteState::ArcSE,
        PlaquetteState::ArcNE,
        PlaquetteState::ArcNW,
        PlaquetteState::StraightA,
        PlaquetteState::StraightB,
        PlaquetteState::DoubleArcTheta,
        PlaquetteState::DoubleArcPiMinusTheta,
    ];

    fn arc(c: Corner) -> PlaquetteState {
        match c {
            Corner::SW => PlaquetteState::ArcSW,
            Corner::SE => PlaquetteState::ArcSE,
            Corner::NE => PlaquetteState::ArcNE,
            Corner::NW => PlaquetteState::ArcNW,
        }
    }

    /// State after adding `mv`, or `None` when the result is not admissible.
    pub fn with(self, mv: Move) -> Option<PlaquetteState> {
        use PlaquetteState::*;
        match (self, mv) {
            (Empty, Move::Arc(c)) => Some(Self::arc(c)),
            (Empty, Move::Straight(Axis::LeftRight)) => Some(StraightA),
            (Empty, Move::Straight(Axis::BottomTop)) => Some(StraightB),
            (ArcSW, Move::Arc(Corner::NE)) | (ArcNE, Move::Arc(Corner::SW)) => Some(DoubleArcTheta),
            (ArcSE, Move::Arc(Corner::NW)) | (ArcNW, Move::Arc(Corner::SE)) => Some(DoubleArcPiMinusTheta),
            _ => None,
        }
    }

    /// Segments present in the rhombus.
    pub fn moves(self) -> &'static [Move] {
        use PlaquetteState::*;
        match self {
            Empty => &[],
            ArcSW => &[Move::Arc(Corner::SW)],
            ArcSE => &[Move::Arc(Corner::SE)],
            ArcNE => &[Move::Arc(Corner::NE)],
            ArcNW => &[Move::Arc(Corner::NW)],
            StraightA => &[Move::Straight(Axis::LeftRight)],
            StraightB => &[Move::Straight(Axis::BottomTop)],
            DoubleArcTheta => &[Move::Arc(Corner::SW), Move::Arc(Corner::NE)],
            DoubleArcPiMinusTheta => &[Move::Arc(Corner::SE), Move::Arc(Corner::NW)],
        }
    }

    pub fn weight_kind(self) -> Option<WeightKind> {
        use PlaquetteState::*;
        match self {
            Empty => None,
            ArcSW | ArcNE => Some(WeightKind::U1),
            ArcSE | ArcNW => Some(WeightKind::U2),
            StraightA | StraightB => Some(WeightKind::V),
            DoubleArcTheta => Some(WeightKind::W1),
            DoubleArcPiMinusTheta => Some(WeightKind::W2),
        }
    }

    /// Whether side `s` is touched by a segment.
    pub fn occupies(self, s: Side) -> bool {
        self.moves().iter().any(|m| {
            let (a, b) = m.sides();
            a == s || b == s
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_moves() -> Vec<Move> {
        let mut v: Vec<Move> = Corner::ALL.iter().map(|&c| Move::Arc(c)).collect();
        v.push(Move::Straight(Axis::LeftRight));
        v.push(Move::Straight(Axis::BottomTop));
        v
    }

    #[test]
    fn reachable_states_are_exactly_nine() {
        let mut seen = vec![PlaquetteState::Empty];
        let mut frontier = vec![PlaquetteState::Empty];
        while let Some(s) = frontier.pop() {
            for m in all_moves() {
                if let Some(t) = s.with(m) {
                    if !seen.contains(&t) {
                        seen.push(t);
                        frontier.push(t);
                    }
                }
            }
        }
        seen.sort();
        assert_eq!(seen, PlaquetteState::ALL.to_vec());
    }

    #[test]
    fn straight_excludes_everything_else() {
        for s in [PlaquetteState::StraightA, PlaquetteState::StraightB] {
            for m in all_moves() {
                assert_eq!(s.with(m), None);
            }
        }
    }

    #[test]
    fn second_arc_only_around_opposite_corner() {
        for c in Corner::ALL {
            let single = PlaquetteState::Empty.with(Move::Arc(c)).unwrap();
            for m in all_moves() {
                let ok = m == Move::Arc(c.opposite());
                assert_eq!(single.with(m).is_some(), ok, "{single:?} + {m:?}");
            }
        }
    }

    #[test]
    fn equal_angle_arcs_share_a_weight() {
        use PlaquetteState::*;
        assert_eq!(ArcSW.weight_kind(), ArcNE.weight_kind());
        assert_eq!(ArcSE.weight_kind(), ArcNW.weight_kind());
        assert_ne!(ArcSW.weight_kind(), ArcSE.weight_kind());
        assert_eq!(Empty.weight_kind(), None);
    }

    #[test]
    fn move_between_sides_round_trips() {
        for a in 0..4 {
            for b in 0..4 {
                if a == b {
                    continue;
                }
                let m = Move::between(Side(a), Side(b));
                let (x, y) = m.sides();
                assert!((x == Side(a) && y == Side(b)) || (x == Side(b) && y == Side(a)));
            }
        }
    }
}
