//! Loop O(n) configurations on small rhombic patches.
//!
//! A [`Patch`] is a list of rhombi glued along shared edges; each rhombus has
//! its own angle and weight set. Configurations assign a [`PlaquetteState`] to
//! every rhombus and are traced into open strands and closed loops. This
//! covers both lattice parallelograms, for the loop observable, and the two
//! three-rhombus tilings of a hexagon, for the Yang–Baxter check.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{LatticeAngle, MidEdge, ParallelogramDomain, Side};
use crate::observable::ObservableTable;
use crate::plaquette::PlaquetteState;
use crate::weights::{on_formula, WeightSet};

/// Largest patch enumerated exhaustively.
pub const MAX_PATCH_CELLS: usize = 6;

/// One rhombus of a patch.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    /// Edge ids of sides 0..4, counter-clockwise.
    pub edges: [usize; 4],
    /// Angle at corners 0 and 2.
    pub angle: f64,
    pub weights: WeightSet,
}

impl Cell {
    /// Signed turn of a segment entering side `entry` and leaving by `exit`.
    pub fn turn(&self, entry: Side, exit: Side) -> f64 {
        let corner_angle = |k: u8| if k.is_multiple_of(2) { self.angle } else { PI - self.angle };
        if exit == entry.prev() {
            corner_angle(entry.0)
        } else if exit == entry.next() {
            -corner_angle(exit.0)
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone)]
pub struct Patch {
    cells: Vec<Cell>,
    /// `(cell, side)` slots bordering each edge: one on the boundary, two inside.
    slots: Vec<Vec<(usize, Side)>>,
}

impl Patch {
    pub fn new(cells: Vec<Cell>) -> Result<Self> {
        let edge_count = cells.iter().flat_map(|c| c.edges).max().map_or(0, |m| m + 1);
        let mut slots = vec![Vec::new(); edge_count];
        for (k, c) in cells.iter().enumerate() {
            for (s, &e) in c.edges.iter().enumerate() {
                slots[e].push((k, Side(s as u8)));
            }
        }
        if let Some(e) = slots.iter().position(|s| s.is_empty() || s.len() > 2) {
            return Err(Error::InvalidDomain(format!("edge {e} must border one or two rhombi")));
        }
        Ok(Patch { cells, slots })
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn edge_count(&self) -> usize {
        self.slots.len()
    }

    pub fn is_boundary(&self, edge: usize) -> bool {
        self.slots[edge].len() == 1
    }

    fn occupied(&self, states: &[PlaquetteState], edge: usize) -> usize {
        self.slots[edge].iter().filter(|&&(c, s)| states[c].occupies(s)).count()
    }

    /// Edges where a strand ends: occupied boundary edges and interior edges
    /// occupied from one side only.
    pub fn defects(&self, states: &[PlaquetteState]) -> Vec<usize> {
        (0..self.edge_count())
            .filter(|&e| self.occupied(states, e) == 1)
            .collect()
    }

    /// Traces strands and loops. Strands start from `defects` in order.
    fn trace(&self, states: &[PlaquetteState]) -> (Vec<Strand>, usize) {
        let mut seen = vec![[false; 4]; self.cells.len()];
        let mut strands = Vec::new();
        for start in self.defects(states) {
            let Some(&(c, s)) = self.slots[start].iter().find(|&&(c, s)| states[c].occupies(s)) else {
                continue;
            };
            if seen[c][s.0 as usize] {
                continue;
            }
            let (segments, end) = self.follow(states, &mut seen, c, s);
            strands.push(Strand { start, end, segments });
        }
        let mut loops = 0;
        for c in 0..self.cells.len() {
            for s in 0..4u8 {
                if states[c].occupies(Side(s)) && !seen[c][s as usize] {
                    self.follow(states, &mut seen, c, Side(s));
                    loops += 1;
                }
            }
        }
        (strands, loops)
    }

    /// Follows a strand from slot `(c, s)` until it leaves the occupied set or
    /// closes up.
    fn follow(&self, states: &[PlaquetteState], seen: &mut [[bool; 4]], mut c: usize, mut s: Side) -> (Vec<Segment>, usize) {
        let mut segments = Vec::new();
        loop {
            let exit = partner(states[c], s);
            seen[c][s.0 as usize] = true;
            seen[c][exit.0 as usize] = true;
            segments.push(Segment { cell: c, entry: s, exit });
            let edge = self.cells[c].edges[exit.0 as usize];
            let next = self.slots[edge].iter().find(|&&(k, t)| (k, t) != (c, exit) && states[k].occupies(t));
            match next {
                Some(&(k, t)) if !seen[k][t.0 as usize] => {
                    c = k;
                    s = t;
                }
                _ => return (segments, edge),
            }
        }
    }

    /// Every configuration whose defects are allowed by `rule`, in
    /// lexicographic order of states.
    pub fn configurations(&self, rule: DefectRule, mut visit: impl FnMut(&LoopConfig)) -> Result<usize> {
        if self.cells.len() > MAX_PATCH_CELLS {
            return Err(Error::BudgetExceeded { requested: self.cells.len() as u32, cap: MAX_PATCH_CELLS as u32 });
        }
        // edges become decidable once their last bordering cell is assigned
        let mut closes: Vec<Vec<usize>> = vec![Vec::new(); self.cells.len()];
        for (e, sl) in self.slots.iter().enumerate() {
            let last = sl.iter().map(|&(c, _)| c).max().expect("edges have a slot");
            closes[last].push(e);
        }
        let mut states = vec![PlaquetteState::Empty; self.cells.len()];
        let mut count = 0;
        self.assign(0, 0, rule, &closes, &mut states, &mut |st| {
            let (strands, loops) = self.trace(st);
            count += 1;
            visit(&LoopConfig { states: st.to_vec(), strands, loops });
        });
        Ok(count)
    }

    fn assign(
        &self,
        k: usize,
        defects: usize,
        rule: DefectRule,
        closes: &[Vec<usize>],
        states: &mut Vec<PlaquetteState>,
        visit: &mut dyn FnMut(&[PlaquetteState]),
    ) {
        if k == self.cells.len() {
            visit(states);
            return;
        }
        for st in PlaquetteState::ALL {
            states[k] = st;
            let mut d = defects;
            let mut ok = true;
            for &e in &closes[k] {
                let defect = self.occupied(states, e) == 1;
                if defect && !(self.is_boundary(e) && rule == DefectRule::FreeBoundary) {
                    d += 1;
                }
                if let DefectRule::AtMost(m) = rule {
                    ok &= d <= m;
                } else {
                    ok &= d == 0;
                }
            }
            if ok {
                self.assign(k + 1, d, rule, closes, states, visit);
            }
        }
        states[k] = PlaquetteState::Empty;
    }
}

fn partner(state: PlaquetteState, s: Side) -> Side {
    state
        .moves()
        .iter()
        .find_map(|m| {
            let (a, b) = m.sides();
            if a == s {
                Some(b)
            } else if b == s {
                Some(a)
            } else {
                None
            }
        })
        .expect("side is occupied")
}

/// Which strand ends a configuration may have.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefectRule {
    /// Boundary edges may be occupied freely; interior edges must match.
    FreeBoundary,
    /// At most this many defects, boundary occupancy included.
    AtMost(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub cell: usize,
    pub entry: Side,
    pub exit: Side,
}

/// An open strand between two edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strand {
    pub start: usize,
    pub end: usize,
    pub segments: Vec<Segment>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopConfig {
    pub states: Vec<PlaquetteState>,
    pub strands: Vec<Strand>,
    pub loops: usize,
}

impl LoopConfig {
    /// Total winding of a strand, read from its start.
    pub fn strand_winding(&self, patch: &Patch, k: usize) -> f64 {
        self.strands[k]
            .segments
            .iter()
            .map(|seg| patch.cells[seg.cell].turn(seg.entry, seg.exit))
            .sum()
    }
}

/// `prod omega(r) * n^loops`, each rhombus using its own weights.
pub fn loop_weight(patch: &Patch, config: &LoopConfig, n: f64) -> f64 {
    let plaquettes: f64 = config
        .states
        .iter()
        .zip(&patch.cells)
        .filter_map(|(s, c)| s.weight_kind().map(|k| c.weights.get(k)))
        .product();
    plaquettes * n.powi(config.loops as i32)
}

/// A parallelogram as a patch, with the mid-edge of every edge id.
#[derive(Debug, Clone)]
pub struct LatticePatch {
    pub patch: Patch,
    pub domain: ParallelogramDomain,
    pub mid_edges: Vec<MidEdge>,
}

impl LatticePatch {
    pub fn new(domain: ParallelogramDomain, theta: LatticeAngle, w: &WeightSet) -> Result<Self> {
        Self::with_order(domain, theta, w, domain.rhombi())
    }

    /// Same patch with the rhombi listed in a chosen order.
    pub fn with_order(domain: ParallelogramDomain, theta: LatticeAngle, w: &WeightSet, order: Vec<crate::geometry::Rhombus>) -> Result<Self> {
        let mid_edges = domain.mid_edges();
        let index: HashMap<MidEdge, usize> = mid_edges.iter().enumerate().map(|(k, &m)| (m, k)).collect();
        let cells = order
            .into_iter()
            .map(|r| {
                if !domain.contains_rhombus(r) {
                    return Err(Error::RhombusOutsideDomain(r));
                }
                Ok(Cell { edges: r.mid_edges().map(|m| index[&m]), angle: theta.radians(), weights: *w })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LatticePatch { patch: Patch::new(cells)?, domain, mid_edges })
    }

    pub fn edge_id(&self, m: MidEdge) -> Option<usize> {
        self.mid_edges.binary_search(&m).ok()
    }
}

/// Loop observable: configurations with no defect contribute to `F(a)`, those
/// whose strand runs from `a` to `z` contribute `omega n^loops e^{-i sigma W}` to `F(z)`.
pub fn on_observable_with(
    domain: ParallelogramDomain,
    theta: LatticeAngle,
    sigma: f64,
    w: &WeightSet,
    n: f64,
) -> Result<ObservableTable> {
    on_observable_in(&LatticePatch::new(domain, theta, w)?, sigma, n)
}

/// [`on_observable_with`] on a prepared patch, whatever its rhombus order.
pub fn on_observable_in(lp: &LatticePatch, sigma: f64, n: f64) -> Result<ObservableTable> {
    let domain = lp.domain;
    let theta = lp.patch.cells()[0].angle;
    let a = lp.edge_id(domain.origin()).expect("origin is a mid-edge of the domain");
    let mut values: BTreeMap<MidEdge, Complex64> = lp.mid_edges.iter().map(|&m| (m, Complex64::default())).collect();
    lp.patch.configurations(DefectRule::AtMost(2), |cfg| {
        let weight = loop_weight(&lp.patch, cfg, n);
        match cfg.strands.as_slice() {
            [] => *values.get_mut(&domain.origin()).expect("origin present") += weight,
            [strand] if strand.start == a || strand.end == a => {
                // a reversed strand winds the opposite way
                let (z, winding) = if strand.start == a {
                    (strand.end, cfg.strand_winding(&lp.patch, 0))
                } else {
                    (strand.start, -cfg.strand_winding(&lp.patch, 0))
                };
                *values.get_mut(&lp.mid_edges[z]).expect("edge present") += Complex64::from_polar(weight, -sigma * winding);
            }
            _ => {}
        }
    })?;
    Ok(ObservableTable { domain, origin: domain.origin(), theta, sigma, values })
}

/// Loop observable at the O(n) weights for `s`, with `sigma = s + 1`.
pub fn on_observable(domain: ParallelogramDomain, theta: LatticeAngle, s: f64) -> Result<(ObservableTable, f64)> {
    let (w, n) = on_formula(theta.radians(), s)?;
    Ok((on_observable_with(domain, theta, s + 1.0, &w, n)?, n))
}

/// Largest rhombus contour residual of the loop observable.
pub fn on_observable_cr_check(domain: ParallelogramDomain, theta: LatticeAngle, s: f64) -> Result<f64> {
    let (table, _) = on_observable(domain, theta, s)?;
    Ok(crate::observable::max_cr_residual(&table))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Tiling {
    T1,
    T2,
}

/// Point of the hexagon in the basis `a = e^{-i alpha}, b = 1, c = e^{i alpha}`.
type HexPoint = [i32; 3];

/// A symmetric equilateral hexagon tiled by three rhombi.
#[derive(Debug, Clone)]
pub struct HexagonInstance {
    pub alpha: f64,
    pub tiling: Tiling,
    pub patch: Patch,
    /// Angles of the three rhombi at their corner 0.
    pub angles: [f64; 3],
    /// Edge ids of the six boundary edges, cyclically from the edge `0 -> a`.
    pub boundary: [usize; 6],
}

impl HexagonInstance {
    pub fn new(alpha: f64, tiling: Tiling, s: f64) -> Result<Self> {
        let e = |k: usize| {
            let mut p = [0; 3];
            p[k] = 1;
            p
        };
        let add = |p: HexPoint, q: HexPoint| [p[0] + q[0], p[1] + q[1], p[2] + q[2]];
        let direction = [-alpha, 0.0, alpha];
        // (base, first vector, second vector), the second counter-clockwise from the first
        let rhombi: [(HexPoint, usize, usize); 3] = match tiling {
            Tiling::T1 => [([0, 0, 0], 0, 1), ([0, 0, 0], 1, 2), (e(1), 0, 2)],
            Tiling::T2 => [([0, 0, 0], 0, 2), (e(0), 1, 2), (e(2), 0, 1)],
        };
        let ring = [[0, 0, 0], [1, 0, 0], [1, 1, 0], [1, 1, 1], [0, 1, 1], [0, 0, 1]];
        let key = |p: HexPoint, q: HexPoint| if p <= q { (p, q) } else { (q, p) };
        let mut ids: BTreeMap<(HexPoint, HexPoint), usize> = BTreeMap::new();
        for k in 0..6 {
            let next = ids.len();
            ids.insert(key(ring[k], ring[(k + 1) % 6]), next);
        }
        let mut cells = Vec::new();
        let mut angles = [0.0; 3];
        for (k, &(p, x, y)) in rhombi.iter().enumerate() {
            let corners = [p, add(p, e(x)), add(add(p, e(x)), e(y)), add(p, e(y))];
            let mut edges = [0; 4];
            for s in 0..4 {
                let kk = key(corners[s], corners[(s + 1) % 4]);
                let next = ids.len();
                edges[s] = *ids.entry(kk).or_insert(next);
            }
            let angle = direction[y] - direction[x];
            angles[k] = angle;
            let (weights, _) = on_formula(angle, s)?;
            cells.push(Cell { edges, angle, weights });
        }
        let patch = Patch::new(cells)?;
        Ok(HexagonInstance { alpha, tiling, patch, angles, boundary: [0, 1, 2, 3, 4, 5] })
    }

    /// Summed `loop_weight` of all completions, grouped by how the boundary
    /// edges are paired through the hexagon.
    pub fn pattern_sums(&self, n: f64) -> Result<BTreeMap<BoundaryPattern, f64>> {
        let mut sums = BTreeMap::new();
        self.patch.configurations(DefectRule::FreeBoundary, |cfg| {
            let mut pairs: Vec<(u8, u8)> = cfg
                .strands
                .iter()
                .map(|s| {
                    let (a, b) = (self.boundary_index(s.start), self.boundary_index(s.end));
                    (a.min(b), a.max(b))
                })
                .collect();
            pairs.sort();
            *sums.entry(BoundaryPattern(pairs)).or_insert(0.0) += loop_weight(&self.patch, cfg, n);
        })?;
        Ok(sums)
    }

    fn boundary_index(&self, edge: usize) -> u8 {
        self.boundary.iter().position(|&b| b == edge).expect("strands end on the boundary") as u8
    }
}

/// Pairs of boundary edges joined by a strand; unlisted edges are empty.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BoundaryPattern(pub Vec<(u8, u8)>);

impl BoundaryPattern {
    pub fn occupied(&self) -> BTreeSet<u8> {
        self.0.iter().flat_map(|&(a, b)| [a, b]).collect()
    }
}

impl std::fmt::Display for BoundaryPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return f.write_str("empty");
        }
        let parts: Vec<String> = self.0.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PatternRow {
    pub pattern: BoundaryPattern,
    pub sum_t1: f64,
    pub sum_t2: f64,
}

impl PatternRow {
    pub fn diff(&self) -> f64 {
        (self.sum_t1 - self.sum_t2).abs()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct YangBaxterReport {
    pub alpha: f64,
    pub s: f64,
    pub n: f64,
    pub rows: Vec<PatternRow>,
}

impl YangBaxterReport {
    pub fn max_residual(&self) -> f64 {
        self.rows.iter().map(PatternRow::diff).fold(0.0, f64::max)
    }
}

pub fn yang_baxter_report(alpha: f64, s: f64) -> Result<YangBaxterReport> {
    let n = crate::weights::loop_weight_for(s);
    let t1 = HexagonInstance::new(alpha, Tiling::T1, s)?.pattern_sums(n)?;
    let t2 = HexagonInstance::new(alpha, Tiling::T2, s)?.pattern_sums(n)?;
    let keys: BTreeSet<&BoundaryPattern> = t1.keys().chain(t2.keys()).collect();
    let rows = keys
        .into_iter()
        .map(|k| PatternRow {
            pattern: k.clone(),
            sum_t1: t1.get(k).copied().unwrap_or(0.0),
            sum_t2: t2.get(k).copied().unwrap_or(0.0),
        })
        .collect();
    Ok(YangBaxterReport { alpha, s, n, rows })
}

/// Largest discrepancy between the two tilings over all boundary patterns.
pub fn yang_baxter_residual(alpha: f64, s: f64) -> Result<f64> {
    Ok(yang_baxter_report(alpha, s)?.max_residual())
}
