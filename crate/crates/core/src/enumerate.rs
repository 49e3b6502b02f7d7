//! Exhaustive backtracking enumeration of self-avoiding walks.
//!
//! A walk runs between mid-edges, passing through one rhombus per step. The
//! search keeps a dense visited bitset over the mid-edges of a rectangular
//! window, the current [`PlaquetteState`] of every rhombus in it, and the
//! walk's weight as a [`Monomial`] in `(u1, u2, v, w1, w2)`. Completing a
//! double arc trades a `u` for the matching `w`, so the monomial always equals
//! the product over rhombi; [`Walk::monomial`] recomputes it from scratch.
//!
//! Since windings are exact ([`Winding`]) and weights are monomials, a single
//! enumeration can be evaluated for any angle, spin or weight set afterwards.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Heading, LatticeAngle, MidEdge, Orient, ParallelogramDomain, Rhombus, Side, Step, StepKind, Winding};
use crate::plaquette::{Move, PlaquetteState, WeightKind};
use crate::weights::{critical_weights, WeightSet};

/// Default ceiling on the number of steps a single walk may take.
pub const DEFAULT_STEP_CAP: u32 = 96;

/// Walks of this many steps seed the parallel tasks.
const PREFIX_DEPTH: usize = 4;

/// Length assigned to each kind of step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LengthRule {
    pub theta_arc: u32,
    pub pi_minus_theta_arc: u32,
    pub straight: u32,
}

impl Default for LengthRule {
    fn default() -> Self {
        LengthRule { theta_arc: 1, pi_minus_theta_arc: 1, straight: 1 }
    }
}

impl LengthRule {
    pub fn new(theta_arc: u32, pi_minus_theta_arc: u32, straight: u32) -> Result<Self> {
        if theta_arc != 1 {
            return Err(Error::InvalidLengthRule(format!("theta-arc length must be 1, got {theta_arc}")));
        }
        if pi_minus_theta_arc == 0 || straight == 0 {
            return Err(Error::InvalidLengthRule("lengths must be positive".into()));
        }
        Ok(LengthRule { theta_arc, pi_minus_theta_arc, straight })
    }

    /// Every arc and straight counts once.
    pub fn unit() -> Self {
        Self::default()
    }

    /// Natural honeycomb length at `theta = pi/3`: one per visited triangle.
    pub fn honeycomb() -> Self {
        LengthRule { theta_arc: 1, pi_minus_theta_arc: 2, straight: 2 }
    }

    pub fn step_length(&self, kind: StepKind) -> u32 {
        match kind {
            StepKind::ArcTheta => self.theta_arc,
            StepKind::ArcPiMinusTheta => self.pi_minus_theta_arc,
            StepKind::Straight => self.straight,
        }
    }

    pub fn is_unit(&self) -> bool {
        *self == Self::unit()
    }
}

impl fmt::Display for LengthRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.theta_arc, self.pi_minus_theta_arc, self.straight)
    }
}

impl std::str::FromStr for LengthRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<u32> = s
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|e| Error::Parse(format!("length rule `{s}`: {e}"))))
            .collect::<Result<_>>()?;
        match parts[..] {
            [a, b, c] => LengthRule::new(a, b, c),
            _ => Err(Error::Parse(format!("length rule `{s}` needs three comma-separated values"))),
        }
    }
}

/// Exponents of `(u1, u2, v, w1, w2)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(pub [u16; 5]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; 5]);

    pub fn eval(&self, w: &WeightSet) -> f64 {
        self.0
            .iter()
            .zip(w.as_array())
            .map(|(&e, x)| x.powi(i32::from(e)))
            .product()
    }

    /// Number of arcs and straights, doubles counting twice.
    pub fn arc_count(&self) -> u32 {
        let [a, b, c, d, e] = self.0.map(u32::from);
        a + b + c + 2 * d + 2 * e
    }

    pub fn exponent(&self, kind: WeightKind) -> u16 {
        self.0[kind as usize]
    }

    fn add(&mut self, kind: Option<WeightKind>) {
        if let Some(k) = kind {
            self.0[k as usize] += 1;
        }
    }

    fn remove(&mut self, kind: Option<WeightKind>) {
        if let Some(k) = kind {
            self.0[k as usize] -= 1;
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for k in WeightKind::ALL {
            let e = self.exponent(k);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            match e {
                1 => write!(f, "{}", k.name())?,
                _ => write!(f, "{}^{}", k.name(), e)?,
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// A validated self-avoiding walk with its rhombus occupancy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    start: MidEdge,
    steps: Vec<Step>,
    occupancy: BTreeMap<Rhombus, PlaquetteState>,
    visited: BTreeSet<MidEdge>,
}

impl Walk {
    pub fn empty(start: MidEdge) -> Walk {
        Walk {
            start,
            steps: Vec::new(),
            occupancy: BTreeMap::new(),
            visited: BTreeSet::from([start]),
        }
    }

    /// Builds a walk, checking continuity, self-avoidance and that every
    /// rhombus ends in an admissible state.
    pub fn from_steps(start: MidEdge, steps: Vec<Step>) -> Result<Walk> {
        let mut walk = Walk::empty(start);
        for step in steps {
            walk.push(step)?;
        }
        Ok(walk)
    }

    pub fn push(&mut self, step: Step) -> Result<()> {
        let invalid = |reason| Error::InvalidStep { from: step.from, to: step.to, reason };
        let expected_from = self.end();
        if step.from != expected_from {
            return Err(invalid("step does not continue the walk"));
        }
        if let Some(last) = self.steps.last() {
            if step.rhombus != last.rhombus.across(last.exit_side()) {
                return Err(invalid("step must cross into the next rhombus"));
            }
        }
        if self.visited.contains(&step.to) {
            return Err(invalid("mid-edge visited twice"));
        }
        let mv = Move::between(step.entry_side(), step.exit_side());
        let state = self.occupancy.get(&step.rhombus).copied().unwrap_or_default();
        let next = state.with(mv).ok_or_else(|| invalid("inadmissible plaquette state"))?;
        self.occupancy.insert(step.rhombus, next);
        self.visited.insert(step.to);
        self.steps.push(step);
        Ok(())
    }

    pub fn start(&self) -> MidEdge {
        self.start
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn occupancy(&self) -> &BTreeMap<Rhombus, PlaquetteState> {
        &self.occupancy
    }

    pub fn visited(&self) -> &BTreeSet<MidEdge> {
        &self.visited
    }

    pub fn end(&self) -> MidEdge {
        self.steps.last().map_or(self.start, |s| s.to)
    }

    /// Crossing direction at the end edge; `None` for the empty walk.
    pub fn end_heading(&self) -> Option<Heading> {
        self.steps.last().map(|s| s.exit_heading())
    }

    /// Product of plaquette labels, recomputed from the occupancy.
    pub fn monomial(&self) -> Monomial {
        let mut m = Monomial::ONE;
        for state in self.occupancy.values() {
            m.add(state.weight_kind());
        }
        m
    }

    pub fn weight(&self, w: &WeightSet) -> f64 {
        weight_of(self, w)
    }

    pub fn length(&self, rule: &LengthRule) -> u32 {
        self.steps.iter().map(|s| rule.step_length(s.kind)).sum()
    }

    pub fn winding(&self) -> Winding {
        self.steps.iter().fold(Winding::ZERO, |acc, s| acc + s.turn())
    }

    /// The first `k` steps and the remainder, the latter starting where the
    /// former ends.
    pub fn split_at(&self, k: usize) -> (Walk, Walk) {
        let head = Walk::from_steps(self.start, self.steps[..k].to_vec()).expect("prefix of a valid walk");
        let mid = head.end();
        let tail = Walk::from_steps(mid, self.steps[k..].to_vec()).expect("suffix of a valid walk");
        (head, tail)
    }

    /// `start;step,step,...` with each step written `i,j,O>i,j,O`.
    pub fn to_dump(&self) -> String {
        let steps: Vec<String> = self.steps.iter().map(|s| s.to_string()).collect();
        format!("{};{}", self.start, steps.join(","))
    }

    pub fn parse_dump(line: &str) -> Result<Walk> {
        let (start, rest) = line
            .trim()
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("walk `{line}` has no `;`")))?;
        let start = parse_mid_edge(start)?;
        let rest = rest.trim();
        if rest.is_empty() {
            return Ok(Walk::empty(start));
        }
        let tokens: Vec<&str> = rest.split(',').map(str::trim).collect();
        if !tokens.len().is_multiple_of(5) {
            return Err(Error::Parse(format!("malformed step list `{rest}`")));
        }
        let mut steps = Vec::with_capacity(tokens.len() / 5);
        for t in tokens.chunks(5) {
            let (o1, i2) = t[2]
                .split_once('>')
                .ok_or_else(|| Error::Parse(format!("step `{}` has no `>`", t.join(","))))?;
            let from = parse_mid_edge(&format!("{},{},{}", t[0], t[1], o1))?;
            let to = parse_mid_edge(&format!("{},{},{}", i2, t[3], t[4]))?;
            steps.push(Step::between(from, to)?);
        }
        Walk::from_steps(start, steps)
    }
}

fn parse_mid_edge(s: &str) -> Result<MidEdge> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Error::Parse(format!("mid-edge `{s}` is not `i,j,H|V`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let i = parts[0].parse().map_err(|_| bad())?;
    let j = parts[1].parse().map_err(|_| bad())?;
    let orient = match parts[2] {
        "H" | "h" => Orient::H,
        "V" | "v" => Orient::V,
        _ => return Err(bad()),
    };
    Ok(MidEdge { i, j, orient })
}

/// Product over occupied rhombi of their state weights.
pub fn weight_of(walk: &Walk, w: &WeightSet) -> f64 {
    walk.occupancy
        .values()
        .filter_map(|s| s.weight_kind())
        .map(|k| w.get(k))
        .product()
}

/// What to enumerate: walks from `start`, optionally bounded in length and
/// confined to a domain.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkSpace {
    pub start: MidEdge,
    pub max_length: Option<u32>,
    pub rule: LengthRule,
    pub domain: Option<ParallelogramDomain>,
    pub step_cap: u32,
}

impl WalkSpace {
    /// Walks on the whole lattice of length at most `max_length`.
    pub fn free(start: MidEdge, max_length: u32, rule: LengthRule) -> Self {
        WalkSpace { start, max_length: Some(max_length), rule, domain: None, step_cap: DEFAULT_STEP_CAP }
    }

    /// Every walk from the domain's origin that stays inside it.
    pub fn domain(domain: ParallelogramDomain) -> Self {
        WalkSpace {
            start: domain.origin(),
            max_length: None,
            rule: LengthRule::unit(),
            domain: Some(domain),
            step_cap: DEFAULT_STEP_CAP,
        }
    }

    pub fn with_step_cap(mut self, cap: u32) -> Self {
        self.step_cap = cap;
        self
    }

    /// Largest number of steps any walk in the space can take.
    fn step_budget(&self) -> Result<u32> {
        let by_length = self.max_length.unwrap_or(u32::MAX);
        let by_domain = self.domain.map_or(u32::MAX, |d| 2 * d.rhombus_count() as u32);
        let needed = by_length.min(by_domain);
        if needed == u32::MAX {
            return Err(Error::InvalidDomain("a free walk space needs a maximum length".into()));
        }
        if needed > self.step_cap {
            return Err(Error::BudgetExceeded { requested: needed, cap: self.step_cap });
        }
        Ok(needed)
    }

    /// Calls `visitor` once per walk, the empty walk first, in deterministic
    /// depth-first order with children sorted by `(rhombus, exit edge)`.
    pub fn for_each(&self, mut visitor: impl FnMut(&WalkView<'_>)) -> Result<EnumerationStats> {
        let mut search = Search::new(self)?;
        search.run(&mut |view| {
            visitor(view);
            Flow::Continue
        });
        Ok(search.stats)
    }

    /// Parallel fold over all walks. The walk tree is split at a fixed prefix
    /// depth; partial accumulators are merged in prefix order, so the result
    /// does not depend on the number of threads.
    pub fn fold<A, I, V, M>(&self, init: I, visit: V, merge: M) -> Result<(A, EnumerationStats)>
    where
        A: Send,
        I: Fn() -> A + Sync,
        V: Fn(&mut A, &WalkView<'_>) + Sync,
        M: Fn(&mut A, A),
    {
        let mut acc = init();
        let mut prefixes: Vec<Vec<Step>> = Vec::new();
        let mut search = Search::new(self)?;
        search.run(&mut |view| {
            if view.step_count() < PREFIX_DEPTH {
                visit(&mut acc, view);
                Flow::Continue
            } else {
                prefixes.push(view.steps().to_vec());
                Flow::Prune
            }
        });
        let mut stats = search.stats;
        stats.walks -= prefixes.len() as u64;

        let parts: Vec<Result<(A, EnumerationStats)>> = prefixes
            .par_iter()
            .map(|prefix| {
                let mut local = init();
                let mut s = Search::new(self)?;
                s.resume(prefix, &mut |view| {
                    visit(&mut local, view);
                    Flow::Continue
                });
                Ok((local, s.stats))
            })
            .collect();
        for part in parts {
            let (a, st) = part?;
            merge(&mut acc, a);
            stats.absorb(&st);
        }
        Ok((acc, stats))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct EnumerationStats {
    pub walks: u64,
    pub max_steps: u32,
}

impl EnumerationStats {
    fn absorb(&mut self, o: &EnumerationStats) {
        self.walks += o.walks;
        self.max_steps = self.max_steps.max(o.max_steps);
    }
}

/// Sequential enumeration with a visitor; see [`WalkSpace::for_each`].
pub fn enumerate_walks(
    start: MidEdge,
    max_length: u32,
    rule: LengthRule,
    domain: Option<&ParallelogramDomain>,
    visitor: impl FnMut(&WalkView<'_>),
) -> Result<EnumerationStats> {
    let space = WalkSpace { domain: domain.copied(), ..WalkSpace::free(start, max_length, rule) };
    space.for_each(visitor)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Flow {
    Continue,
    Prune,
}

/// Rectangle of rhombi `i0 <= i < i0 + w`, `j0 <= j < j0 + h`.
#[derive(Debug, Clone, Copy)]
struct Window {
    i0: i32,
    j0: i32,
    w: i32,
    h: i32,
}

impl Window {
    fn contains(&self, r: Rhombus) -> bool {
        r.i >= self.i0 && r.i < self.i0 + self.w && r.j >= self.j0 && r.j < self.j0 + self.h
    }

    fn rhombus_index(&self, r: Rhombus) -> usize {
        ((r.j - self.j0) * self.w + (r.i - self.i0)) as usize
    }

    /// Mid-edges of the window's rhombi are indexed over a `(w+1) x (h+1)` grid.
    fn edge_index(&self, m: MidEdge) -> usize {
        let cell = ((m.j - self.j0) * (self.w + 1) + (m.i - self.i0)) as usize;
        2 * cell + usize::from(m.orient == Orient::V)
    }

    fn edge_slots(&self) -> usize {
        2 * ((self.w + 1) * (self.h + 1)) as usize
    }
}

struct Search<'a> {
    space: &'a WalkSpace,
    window: Window,
    visited: Vec<u64>,
    states: Vec<PlaquetteState>,
    steps: Vec<Step>,
    undo: Vec<PlaquetteState>,
    monomial: Monomial,
    length: u32,
    winding: Winding,
    stats: EnumerationStats,
}

impl<'a> Search<'a> {
    fn new(space: &'a WalkSpace) -> Result<Self> {
        let budget = space.step_budget()?;
        let window = match space.domain {
            Some(d) => {
                if !d.contains_mid_edge(space.start) {
                    return Err(Error::InvalidDomain(format!("start {} is not in the domain", space.start)));
                }
                Window { i0: 0, j0: d.j_min(), w: d.width(), h: d.height() }
            }
            None => {
                // a walk of n steps stays within n rhombi of its first one
                let r = budget as i32 + 2;
                Window { i0: space.start.i - r, j0: space.start.j - r, w: 2 * r + 1, h: 2 * r + 1 }
            }
        };
        let mut s = Search {
            space,
            window,
            visited: vec![0; window.edge_slots().div_ceil(64)],
            states: vec![PlaquetteState::Empty; (window.w * window.h) as usize],
            steps: Vec::with_capacity(budget as usize),
            undo: Vec::with_capacity(budget as usize),
            monomial: Monomial::ONE,
            length: 0,
            winding: Winding::ZERO,
            stats: EnumerationStats::default(),
        };
        s.mark(space.start, true);
        Ok(s)
    }

    fn enterable(&self, r: Rhombus) -> bool {
        match self.space.domain {
            Some(d) => d.contains_rhombus(r),
            None => self.window.contains(r),
        }
    }

    fn is_visited(&self, m: MidEdge) -> bool {
        let k = self.window.edge_index(m);
        self.visited[k / 64] & (1 << (k % 64)) != 0
    }

    fn mark(&mut self, m: MidEdge, on: bool) {
        let k = self.window.edge_index(m);
        if on {
            self.visited[k / 64] |= 1 << (k % 64);
        } else {
            self.visited[k / 64] &= !(1 << (k % 64));
        }
    }

    fn report(&mut self, f: &mut dyn FnMut(&WalkView<'_>) -> Flow) -> Flow {
        self.stats.walks += 1;
        self.stats.max_steps = self.stats.max_steps.max(self.steps.len() as u32);
        f(&WalkView { search: self })
    }

    fn run(&mut self, f: &mut dyn FnMut(&WalkView<'_>) -> Flow) {
        if self.report(f) == Flow::Prune {
            return;
        }
        let start = self.space.start;
        for r in start.rhombi() {
            if self.enterable(r) {
                let side = r.side_of(start).expect("edge borders its rhombi");
                self.descend(r, side, f);
            }
        }
    }

    /// Replays `prefix`, reports it, then explores its extensions.
    fn resume(&mut self, prefix: &[Step], f: &mut dyn FnMut(&WalkView<'_>) -> Flow) {
        for &step in prefix {
            let mv = Move::between(step.entry_side(), step.exit_side());
            let next = self.states[self.window.rhombus_index(step.rhombus)]
                .with(mv)
                .expect("prefix came from this search");
            self.apply(step, next);
        }
        if self.report(f) == Flow::Prune {
            return;
        }
        if let Some(last) = prefix.last() {
            let exit = last.exit_side();
            let next = last.rhombus.across(exit);
            if self.enterable(next) {
                self.descend(next, exit.opposite(), f);
            }
        }
    }

    fn apply(&mut self, step: Step, next: PlaquetteState) {
        let idx = self.window.rhombus_index(step.rhombus);
        let prev = self.states[idx];
        self.states[idx] = next;
        self.undo.push(prev);
        self.monomial.remove(prev.weight_kind());
        self.monomial.add(next.weight_kind());
        self.length += self.space.rule.step_length(step.kind);
        self.winding += step.turn();
        self.mark(step.to, true);
        self.steps.push(step);
    }

    fn retract(&mut self) {
        let step = self.steps.pop().expect("retract follows apply");
        let prev = self.undo.pop().expect("retract follows apply");
        let idx = self.window.rhombus_index(step.rhombus);
        let cur = self.states[idx];
        self.states[idx] = prev;
        self.monomial.remove(cur.weight_kind());
        self.monomial.add(prev.weight_kind());
        self.length -= self.space.rule.step_length(step.kind);
        self.winding = self.winding - step.turn();
        self.mark(step.to, false);
    }

    fn descend(&mut self, r: Rhombus, entry: Side, f: &mut dyn FnMut(&WalkView<'_>) -> Flow) {
        let mut exits = [entry.next(), entry.opposite(), entry.prev()];
        exits.sort_by_key(|&s| r.mid_edge(s));
        let state = self.states[self.window.rhombus_index(r)];
        for exit in exits {
            let to = r.mid_edge(exit);
            if self.is_visited(to) {
                continue;
            }
            let Some(next) = state.with(Move::between(entry, exit)) else {
                continue;
            };
            let step = Step::from_sides(r, entry, exit);
            if let Some(max) = self.space.max_length {
                if self.length + self.space.rule.step_length(step.kind) > max {
                    continue;
                }
            }
            self.apply(step, next);
            if self.report(f) == Flow::Continue {
                let beyond = r.across(exit);
                if self.enterable(beyond) {
                    self.descend(beyond, exit.opposite(), f);
                }
            }
            self.retract();
        }
    }
}

/// Borrowed view of the walk currently on the search stack.
pub struct WalkView<'a> {
    search: &'a Search<'a>,
}

impl WalkView<'_> {
    pub fn start(&self) -> MidEdge {
        self.search.space.start
    }

    pub fn steps(&self) -> &[Step] {
        &self.search.steps
    }

    pub fn step_count(&self) -> usize {
        self.search.steps.len()
    }

    pub fn end(&self) -> MidEdge {
        self.search.steps.last().map_or(self.start(), |s| s.to)
    }

    pub fn end_heading(&self) -> Option<Heading> {
        self.search.steps.last().map(|s| s.exit_heading())
    }

    /// Weight monomial, maintained incrementally.
    pub fn monomial(&self) -> Monomial {
        self.search.monomial
    }

    /// Length under the space's rule.
    pub fn length(&self) -> u32 {
        self.search.length
    }

    pub fn winding(&self) -> Winding {
        self.search.winding
    }

    pub fn state_of(&self, r: Rhombus) -> PlaquetteState {
        if self.search.window.contains(r) {
            self.search.states[self.search.window.rhombus_index(r)]
        } else {
            PlaquetteState::Empty
        }
    }

    pub fn to_walk(&self) -> Walk {
        Walk::from_steps(self.start(), self.steps().to_vec()).expect("search only produces valid walks")
    }
}

/// Walk counts grouped by `(length, monomial)`.
pub type LengthCensus = BTreeMap<(u32, Monomial), u64>;

/// Counts all walks from `start` of length at most `max_length`.
pub fn length_census(start: MidEdge, max_length: u32, rule: LengthRule) -> Result<LengthCensus> {
    let space = WalkSpace::free(start, max_length, rule);
    let (census, _) = space.fold(
        LengthCensus::new,
        |acc, view| *acc.entry((view.length(), view.monomial())).or_default() += 1,
        |acc, other| {
            for (k, n) in other {
                *acc.entry(k).or_default() += n;
            }
        },
    )?;
    Ok(census)
}

/// `sum_{|gamma| = n} weight(gamma)` for `n = 0..=max_length`.
pub fn weight_sums_by_length(census: &LengthCensus, max_length: u32, w: &WeightSet) -> Vec<f64> {
    let mut sums = vec![0.0; max_length as usize + 1];
    for (&(len, mono), &count) in census {
        if len <= max_length {
            sums[len as usize] += count as f64 * mono.eval(w);
        }
    }
    sums
}

/// Origin used for free-lattice series.
pub const CANONICAL_ORIGIN: MidEdge = MidEdge::h(0, 0);

/// `c~_n = u1^{-n} sum_{|gamma| = n} weight(gamma)` at the critical weights,
/// over free-lattice walks from [`CANONICAL_ORIGIN`].
pub fn c_tilde(n: u32, theta: LatticeAngle, rule: LengthRule) -> Result<f64> {
    let census = length_census(CANONICAL_ORIGIN, n, rule)?;
    let w = critical_weights(theta);
    let sums = weight_sums_by_length(&census, n, &w);
    Ok(sums[n as usize] / w.u1.powi(n as i32))
}
