//! The skewed square lattice with rhombic faces.
//!
//! Vertices sit at `i * e1 + j * e2` with `e1 = (1, 0)` and
//! `e2 = (cos theta, sin theta)`. Everything combinatorial is kept in exact
//! integer coordinates; the angle only enters when embedding into the plane
//! or when a winding is turned into radians.
//!
//! Rhombus `R(i, j)` has corners `(i, j)`, `(i+1, j)`, `(i+1, j+1)`, `(i, j+1)`
//! (named SW, SE, NE, NW). Its sides are numbered counter-clockwise starting
//! from the bottom: side 0 is `H(i, j)`, side 1 is `V(i+1, j)`, side 2 is
//! `H(i, j+1)`, side 3 is `V(i, j)`. Corner `k` sits between sides `k-1` and `k`.
//! The SW and NE corners carry the angle theta, SE and NW carry `pi - theta`.

use std::f64::consts::{FRAC_PI_3, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack applied when checking `theta` against `[pi/3, 2pi/3]`, so that
/// literals such as `1.0471976` are accepted.
const ANGLE_SLACK: f64 = 1e-6;

/// Opening angle of the lattice, restricted to `[pi/3, 2pi/3]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct LatticeAngle(f64);

impl LatticeAngle {
    pub fn new(theta: f64) -> Result<Self> {
        if !theta.is_finite() || !(FRAC_PI_3 - ANGLE_SLACK..=2.0 * FRAC_PI_3 + ANGLE_SLACK).contains(&theta) {
            return Err(Error::AngleOutOfRange(theta));
        }
        Ok(LatticeAngle(theta))
    }

    /// `pi * numer / denom`.
    pub fn pi_fraction(numer: i32, denom: i32) -> Result<Self> {
        Self::new(PI * f64::from(numer) / f64::from(denom))
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// `pi - theta`, the angle of the obtuse-or-acute partner corner.
    pub fn supplement(self) -> Self {
        LatticeAngle(PI - self.0)
    }

    /// `count` evenly spaced angles covering `[pi/3, 2pi/3]` inclusive.
    pub fn grid(count: usize) -> Vec<Self> {
        match count {
            0 => Vec::new(),
            1 => vec![LatticeAngle(PI / 2.0)],
            _ => (0..count)
                .map(|k| LatticeAngle(FRAC_PI_3 + FRAC_PI_3 * k as f64 / (count - 1) as f64))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Orient {
    /// Edge from vertex `(i, j)` to `(i+1, j)`.
    H,
    /// Edge from vertex `(i, j)` to `(i, j+1)`.
    V,
}

/// Midpoint of a lattice edge, identified canonically by `(i, j, orient)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MidEdge {
    pub i: i32,
    pub j: i32,
    pub orient: Orient,
}

impl MidEdge {
    pub const fn h(i: i32, j: i32) -> Self {
        MidEdge { i, j, orient: Orient::H }
    }

    pub const fn v(i: i32, j: i32) -> Self {
        MidEdge { i, j, orient: Orient::V }
    }

    /// Position in the plane.
    pub fn embed(self, theta: LatticeAngle) -> (f64, f64) {
        let (c, s) = (theta.0.cos(), theta.0.sin());
        let (x, y) = match self.orient {
            Orient::H => (f64::from(self.i) + 0.5, f64::from(self.j)),
            Orient::V => (f64::from(self.i), f64::from(self.j) + 0.5),
        };
        (x + y * c, y * s)
    }

    /// Inverse of [`MidEdge::embed`]: the mid-edge nearest to a point.
    pub fn nearest(point: (f64, f64), theta: LatticeAngle) -> Self {
        let (c, s) = (theta.0.cos(), theta.0.sin());
        // lattice coordinates of the point
        let y = point.1 / s;
        let x = point.0 - y * c;
        // H midpoints have x in Z + 1/2, y in Z; V midpoints the reverse.
        let cand_h = MidEdge::h((x - 0.5).round() as i32, y.round() as i32);
        let cand_v = MidEdge::v(x.round() as i32, (y - 0.5).round() as i32);
        let dist = |m: MidEdge| {
            let p = m.embed(theta);
            (p.0 - point.0).powi(2) + (p.1 - point.1).powi(2)
        };
        if dist(cand_h) <= dist(cand_v) {
            cand_h
        } else {
            cand_v
        }
    }

    /// The two rhombi sharing this edge, in canonical order.
    pub fn rhombi(self) -> [Rhombus; 2] {
        match self.orient {
            Orient::H => [Rhombus::new(self.i, self.j - 1), Rhombus::new(self.i, self.j)],
            Orient::V => [Rhombus::new(self.i - 1, self.j), Rhombus::new(self.i, self.j)],
        }
    }
}

impl fmt::Display for MidEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = match self.orient {
            Orient::H => 'H',
            Orient::V => 'V',
        };
        write!(f, "{},{},{}", self.i, self.j, o)
    }
}

/// Side index `0..4` of a rhombus, counter-clockwise from the bottom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Side(pub u8);

impl Side {
    pub const BOTTOM: Side = Side(0);
    pub const RIGHT: Side = Side(1);
    pub const TOP: Side = Side(2);
    pub const LEFT: Side = Side(3);

    pub fn next(self) -> Side {
        Side((self.0 + 1) % 4)
    }

    pub fn prev(self) -> Side {
        Side((self.0 + 3) % 4)
    }

    pub fn opposite(self) -> Side {
        Side((self.0 + 2) % 4)
    }

    /// Heading of a walk that enters the rhombus through this side.
    pub fn entry_heading(self) -> Heading {
        match self.0 {
            0 => Heading::Up,
            1 => Heading::Left,
            2 => Heading::Down,
            _ => Heading::Right,
        }
    }

    /// Heading of a walk that leaves the rhombus through this side.
    pub fn exit_heading(self) -> Heading {
        self.entry_heading().reversed()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Corner {
    SW = 0,
    SE = 1,
    NE = 2,
    NW = 3,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::SW, Corner::SE, Corner::NE, Corner::NW];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(k: u8) -> Corner {
        Corner::ALL[usize::from(k % 4)]
    }

    /// SW and NE carry the lattice angle theta.
    pub fn is_theta(self) -> bool {
        matches!(self, Corner::SW | Corner::NE)
    }

    pub fn opposite(self) -> Corner {
        Corner::from_index(self as u8 + 2)
    }

    /// The two sides meeting at this corner, as `(side k-1, side k)`.
    pub fn sides(self) -> (Side, Side) {
        let k = self as u8;
        (Side((k + 3) % 4), Side(k))
    }

    /// Interior angle as an exact winding.
    pub fn angle(self) -> Winding {
        if self.is_theta() {
            Winding::THETA
        } else {
            Winding::PI_MINUS_THETA
        }
    }
}

/// Face of the lattice with corners `(i,j), (i+1,j), (i+1,j+1), (i,j+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rhombus {
    pub i: i32,
    pub j: i32,
}

impl Rhombus {
    pub const fn new(i: i32, j: i32) -> Self {
        Rhombus { i, j }
    }

    pub fn mid_edge(self, side: Side) -> MidEdge {
        match side.0 {
            0 => MidEdge::h(self.i, self.j),
            1 => MidEdge::v(self.i + 1, self.j),
            2 => MidEdge::h(self.i, self.j + 1),
            _ => MidEdge::v(self.i, self.j),
        }
    }

    /// The four mid-edges in side order: `H(i,j), V(i+1,j), H(i,j+1), V(i,j)`.
    pub fn mid_edges(self) -> [MidEdge; 4] {
        [0, 1, 2, 3].map(|k| self.mid_edge(Side(k)))
    }

    pub fn side_of(self, m: MidEdge) -> Option<Side> {
        (0..4).map(Side).find(|&s| self.mid_edge(s) == m)
    }

    /// Neighbouring rhombus across `side`.
    pub fn across(self, side: Side) -> Rhombus {
        match side.0 {
            0 => Rhombus::new(self.i, self.j - 1),
            1 => Rhombus::new(self.i + 1, self.j),
            2 => Rhombus::new(self.i, self.j + 1),
            _ => Rhombus::new(self.i - 1, self.j),
        }
    }
}

impl fmt::Display for Rhombus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R({},{})", self.i, self.j)
    }
}

/// Direction in which a walk crosses an edge (always perpendicular to it).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Heading {
    /// Across an H edge towards larger `j`.
    Up,
    /// Across an H edge towards smaller `j`.
    Down,
    /// Across a V edge towards larger `i`.
    Right,
    /// Across a V edge towards smaller `i`.
    Left,
}

impl Heading {
    pub fn reversed(self) -> Heading {
        match self {
            Heading::Up => Heading::Down,
            Heading::Down => Heading::Up,
            Heading::Right => Heading::Left,
            Heading::Left => Heading::Right,
        }
    }

    /// Polar angle of the heading in the plane.
    pub fn angle(self, theta: LatticeAngle) -> f64 {
        match self {
            Heading::Up => PI / 2.0,
            Heading::Down => -PI / 2.0,
            Heading::Right => theta.0 - PI / 2.0,
            Heading::Left => theta.0 + PI / 2.0,
        }
    }

    pub fn unit_vector(self, theta: LatticeAngle) -> (f64, f64) {
        let a = self.angle(theta);
        (a.cos(), a.sin())
    }
}

/// Exact rotation angle `pi * pi_coeff + theta * theta_coeff`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Winding {
    pub pi: i32,
    pub theta: i32,
}

impl Winding {
    pub const ZERO: Winding = Winding { pi: 0, theta: 0 };
    pub const THETA: Winding = Winding { pi: 0, theta: 1 };
    pub const PI_MINUS_THETA: Winding = Winding { pi: 1, theta: -1 };

    pub fn radians(self, theta: f64) -> f64 {
        f64::from(self.pi) * PI + f64::from(self.theta) * theta
    }
}

impl std::ops::Add for Winding {
    type Output = Winding;
    fn add(self, o: Winding) -> Winding {
        Winding { pi: self.pi + o.pi, theta: self.theta + o.theta }
    }
}

impl std::ops::AddAssign for Winding {
    fn add_assign(&mut self, o: Winding) {
        self.pi += o.pi;
        self.theta += o.theta;
    }
}

impl std::ops::Neg for Winding {
    type Output = Winding;
    fn neg(self) -> Winding {
        Winding { pi: -self.pi, theta: -self.theta }
    }
}

impl std::ops::Sub for Winding {
    type Output = Winding;
    fn sub(self, o: Winding) -> Winding {
        self + (-o)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StepKind {
    ArcTheta,
    ArcPiMinusTheta,
    Straight,
}

/// One passage of a walk through a rhombus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Step {
    pub rhombus: Rhombus,
    pub from: MidEdge,
    pub to: MidEdge,
    pub kind: StepKind,
}

impl Step {
    pub fn new(rhombus: Rhombus, from: MidEdge, to: MidEdge) -> Result<Step> {
        let entry = rhombus.side_of(from).ok_or(Error::InvalidStep {
            from,
            to,
            reason: "start edge not on rhombus",
        })?;
        let exit = rhombus.side_of(to).ok_or(Error::InvalidStep {
            from,
            to,
            reason: "end edge not on rhombus",
        })?;
        if entry == exit {
            return Err(Error::InvalidStep { from, to, reason: "step must change edge" });
        }
        Ok(Step::from_sides(rhombus, entry, exit))
    }

    /// Step between two distinct mid-edges, locating the shared rhombus.
    pub fn between(from: MidEdge, to: MidEdge) -> Result<Step> {
        let r = from
            .rhombi()
            .into_iter()
            .find(|r| r.side_of(to).is_some())
            .ok_or(Error::InvalidStep { from, to, reason: "edges share no rhombus" })?;
        Step::new(r, from, to)
    }

    pub(crate) fn from_sides(rhombus: Rhombus, entry: Side, exit: Side) -> Step {
        debug_assert_ne!(entry, exit);
        let kind = if exit == entry.opposite() {
            StepKind::Straight
        } else if Step::arc_corner(entry, exit).is_theta() {
            StepKind::ArcTheta
        } else {
            StepKind::ArcPiMinusTheta
        };
        Step {
            rhombus,
            from: rhombus.mid_edge(entry),
            to: rhombus.mid_edge(exit),
            kind,
        }
    }

    fn arc_corner(entry: Side, exit: Side) -> Corner {
        if exit == entry.prev() {
            Corner::from_index(entry.0)
        } else {
            Corner::from_index(exit.0)
        }
    }

    pub fn entry_side(&self) -> Side {
        self.rhombus.side_of(self.from).expect("validated on construction")
    }

    pub fn exit_side(&self) -> Side {
        self.rhombus.side_of(self.to).expect("validated on construction")
    }

    /// Corner surrounded by the step, `None` for a straight crossing.
    pub fn corner(&self) -> Option<Corner> {
        match self.kind {
            StepKind::Straight => None,
            _ => Some(Step::arc_corner(self.entry_side(), self.exit_side())),
        }
    }

    pub fn entry_heading(&self) -> Heading {
        self.entry_side().entry_heading()
    }

    pub fn exit_heading(&self) -> Heading {
        self.exit_side().exit_heading()
    }

    /// Exact signed turn, counter-clockwise positive.
    ///
    /// Leaving through side `k-1` after entering through side `k` turns left
    /// around corner `k`; leaving through `k+1` turns right around corner `k+1`.
    pub fn turn(&self) -> Winding {
        let (entry, exit) = (self.entry_side(), self.exit_side());
        if exit == entry.opposite() {
            Winding::ZERO
        } else if exit == entry.prev() {
            Corner::from_index(entry.0).angle()
        } else {
            -Corner::from_index(exit.0).angle()
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}>{}", self.from, self.to)
    }
}

/// All six steps leaving `from`: three through each adjacent rhombus, ordered
/// by `(rhombus, exit edge)`.
pub fn step_candidates(from: MidEdge) -> Vec<Step> {
    step_candidates_where(from, |_| true)
}

/// As [`step_candidates`], keeping only rhombi inside `domain`.
pub fn step_candidates_in(from: MidEdge, domain: &ParallelogramDomain) -> Vec<Step> {
    step_candidates_where(from, |r| domain.contains_rhombus(r))
}

fn step_candidates_where(from: MidEdge, keep: impl Fn(Rhombus) -> bool) -> Vec<Step> {
    let mut out = Vec::with_capacity(6);
    for r in from.rhombi() {
        if !keep(r) {
            continue;
        }
        let entry = r.side_of(from).expect("edge borders its rhombi");
        let mut exits = [entry.next(), entry.opposite(), entry.prev()];
        exits.sort_by_key(|&s| r.mid_edge(s));
        out.extend(exits.into_iter().map(|exit| Step::from_sides(r, entry, exit)));
    }
    out
}

/// Signed turn (radians, counter-clockwise positive) made by `step` when the
/// walk arrives at `step.from` travelling along `prev_direction`.
///
/// The turn is measured geometrically from the direction vectors and then
/// checked against the five admissible values.
pub fn winding_increment(prev_direction: (f64, f64), step: &Step, theta: LatticeAngle) -> Result<f64> {
    let out = step.exit_heading().unit_vector(theta);
    let cross = prev_direction.0 * out.1 - prev_direction.1 * out.0;
    let dot = prev_direction.0 * out.0 + prev_direction.1 * out.1;
    let turn = cross.atan2(dot);
    let t = theta.radians();
    let admissible = [0.0, t, -t, PI - t, t - PI];
    admissible
        .into_iter()
        .find(|a| (a - turn).abs() < 1e-9)
        .ok_or(Error::InadmissibleTurn(turn))
}

/// Boundary side of a [`ParallelogramDomain`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BoundarySide {
    /// Left side, containing the origin.
    Alpha,
    /// Right side, opposite the origin.
    Beta,
    /// Bottom side.
    Delta,
    /// Top side.
    Epsilon,
}

/// Parallelogram made of rhombi `R(i, j)` with `0 <= i < width` and
/// `j_min <= j <= j_max`. The origin is `V(0, 0)` on the left side `alpha`;
/// walks start there heading right, into the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParallelogramDomain {
    width: i32,
    j_min: i32,
    j_max: i32,
}

impl ParallelogramDomain {
    pub fn new(width: i32, j_min: i32, j_max: i32) -> Result<Self> {
        if width < 1 {
            return Err(Error::InvalidDomain(format!("width {width} must be positive")));
        }
        if j_min > 0 || j_max < 0 {
            return Err(Error::InvalidDomain(format!(
                "rows {j_min}..={j_max} must contain the origin row 0"
            )));
        }
        Ok(ParallelogramDomain { width, j_min, j_max })
    }

    /// `t` rhombi along `delta`, `2l + 1` along `alpha`, origin in the middle of `alpha`.
    pub fn centered(t: u32, l: u32) -> Result<Self> {
        let (t, l) = (
            i32::try_from(t).map_err(|_| Error::InvalidDomain("T too large".into()))?,
            i32::try_from(l).map_err(|_| Error::InvalidDomain("L too large".into()))?,
        );
        Self::new(t, -l, l)
    }

    pub fn width(&self) -> i32 {
        self.width
    }

    pub fn height(&self) -> i32 {
        self.j_max - self.j_min + 1
    }

    pub fn j_min(&self) -> i32 {
        self.j_min
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    /// `Some(L)` when the origin sits in the middle of `alpha`.
    pub fn half_height(&self) -> Option<u32> {
        (self.j_min == -self.j_max).then_some(self.j_max as u32)
    }

    pub fn rhombus_count(&self) -> usize {
        (self.width * self.height()) as usize
    }

    pub fn origin(&self) -> MidEdge {
        MidEdge::v(0, 0)
    }

    pub fn contains_rhombus(&self, r: Rhombus) -> bool {
        (0..self.width).contains(&r.i) && (self.j_min..=self.j_max).contains(&r.j)
    }

    /// Rhombi in row-major order (by `j`, then `i`).
    pub fn rhombi(&self) -> Vec<Rhombus> {
        (self.j_min..=self.j_max)
            .flat_map(|j| (0..self.width).map(move |i| Rhombus::new(i, j)))
            .collect()
    }

    /// Whether `m` lies on a side of some rhombus of the domain.
    pub fn contains_mid_edge(&self, m: MidEdge) -> bool {
        m.rhombi().into_iter().any(|r| self.contains_rhombus(r))
    }

    /// All mid-edges of the domain in canonical order.
    pub fn mid_edges(&self) -> Vec<MidEdge> {
        let mut v: Vec<MidEdge> = self.rhombi().into_iter().flat_map(|r| r.mid_edges()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn is_boundary(&self, m: MidEdge) -> bool {
        self.boundary_side(m).is_some()
    }

    pub fn boundary_side(&self, m: MidEdge) -> Option<BoundarySide> {
        let [a, b] = m.rhombi();
        let (ina, inb) = (self.contains_rhombus(a), self.contains_rhombus(b));
        if ina == inb {
            return None;
        }
        Some(match (m.orient, inb) {
            (Orient::V, true) => BoundarySide::Alpha,
            (Orient::V, false) => BoundarySide::Beta,
            (Orient::H, true) => BoundarySide::Delta,
            (Orient::H, false) => BoundarySide::Epsilon,
        })
    }

    /// Counter-clockwise unit tangent of the boundary at `m`, as a complex
    /// number `(re, im)` in the embedding.
    pub fn boundary_tangent(&self, m: MidEdge, theta: LatticeAngle) -> Option<(f64, f64)> {
        let (c, s) = (theta.0.cos(), theta.0.sin());
        self.boundary_side(m).map(|side| match side {
            BoundarySide::Alpha => (-c, -s),
            BoundarySide::Beta => (c, s),
            BoundarySide::Delta => (1.0, 0.0),
            BoundarySide::Epsilon => (-1.0, 0.0),
        })
    }
}
