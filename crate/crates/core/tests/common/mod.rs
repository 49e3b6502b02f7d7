//! A deliberately naive walk enumerator used as an oracle.
//!
//! It shares nothing with the library beyond the labelling of mid-edges:
//! rhombus states are classified from the embedded corner angles, windings
//! are summed from edge normals in the plane, and self-avoidance is checked
//! on plain vectors.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::PI;

/// `(i, j, vertical)`: `H(i, j)` joins vertices `(i, j)` and `(i+1, j)`,
/// `V(i, j)` joins `(i, j)` and `(i, j+1)`.
pub type Me = (i32, i32, bool);
/// Rhombus by its lower-left vertex.
pub type Rh = (i32, i32);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Seg {
    Straight,
    /// Arc around a corner whose interior angle is theta.
    ArcTheta,
    /// Arc around a corner whose interior angle is pi - theta.
    ArcOther,
}

#[derive(Debug, Clone)]
pub struct NaiveWalk {
    pub path: Vec<Me>,
    /// Exponents of `[u1, u2, v, w1, w2]`.
    pub exponents: [u32; 5],
    /// Winding in radians at the probe angle.
    pub winding: f64,
}

impl NaiveWalk {
    pub fn weight(&self, w: [f64; 5]) -> f64 {
        (0..5).map(|k| w[k].powi(self.exponents[k] as i32)).product()
    }

    pub fn steps(&self) -> usize {
        self.path.len() - 1
    }
}

pub struct Naive {
    /// Angle used for geometric classification; must not be pi/2.
    pub probe: f64,
    /// Rhombi allowed, or `None` for the whole plane.
    pub domain: Option<Vec<Rh>>,
}

fn vertex(theta: f64, p: (i32, i32)) -> (f64, f64) {
    (p.0 as f64 + p.1 as f64 * theta.cos(), p.1 as f64 * theta.sin())
}

fn ends(m: Me) -> [(i32, i32); 2] {
    let (i, j, vert) = m;
    if vert {
        [(i, j), (i, j + 1)]
    } else {
        [(i, j), (i + 1, j)]
    }
}

fn faces(m: Me) -> [Rh; 2] {
    let (i, j, vert) = m;
    if vert {
        [(i - 1, j), (i, j)]
    } else {
        [(i, j - 1), (i, j)]
    }
}

fn sides(r: Rh) -> [Me; 4] {
    let (i, j) = r;
    [(i, j, false), (i + 1, j, true), (i, j + 1, false), (i, j, true)]
}

fn sub(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 - b.0, a.1 - b.1)
}

fn midpoint(theta: f64, m: Me) -> (f64, f64) {
    let [a, b] = ends(m);
    let (a, b) = (vertex(theta, a), vertex(theta, b));
    ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0)
}

fn centre(theta: f64, r: Rh) -> (f64, f64) {
    let a = vertex(theta, r);
    let b = vertex(theta, (r.0 + 1, r.1 + 1));
    ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0)
}

/// Direction of the unit normal to `m` pointing into `r`.
fn inward_normal(theta: f64, m: Me, r: Rh) -> f64 {
    let [a, b] = ends(m);
    let d = sub(vertex(theta, b), vertex(theta, a));
    let n = (-d.1, d.0);
    let to_centre = sub(centre(theta, r), midpoint(theta, m));
    let n = if n.0 * to_centre.0 + n.1 * to_centre.1 > 0.0 { n } else { (-n.0, -n.1) };
    n.1.atan2(n.0)
}

fn wrap(a: f64) -> f64 {
    let mut a = a % (2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    if a <= -PI {
        a += 2.0 * PI;
    }
    a
}

impl Naive {
    pub fn free(probe: f64) -> Self {
        Naive { probe, domain: None }
    }

    /// Rhombi `(i, j)` with `0 <= i < width`, `j_min <= j <= j_max`.
    pub fn parallelogram(probe: f64, width: i32, j_min: i32, j_max: i32) -> Self {
        let cells = (j_min..=j_max).flat_map(|j| (0..width).map(move |i| (i, j))).collect();
        Naive { probe, domain: Some(cells) }
    }

    fn allowed(&self, r: Rh) -> bool {
        self.domain.as_ref().is_none_or(|d| d.contains(&r))
    }

    fn classify(&self, a: Me, b: Me) -> Seg {
        let (ea, eb) = (ends(a), ends(b));
        let Some(&p) = ea.iter().find(|v| eb.contains(v)) else {
            return Seg::Straight;
        };
        let qa = *ea.iter().find(|&&v| v != p).unwrap();
        let qb = *eb.iter().find(|&&v| v != p).unwrap();
        let pv = vertex(self.probe, p);
        let (x, y) = (sub(vertex(self.probe, qa), pv), sub(vertex(self.probe, qb), pv));
        let angle = ((x.0 * y.0 + x.1 * y.1) / ((x.0 * x.0 + x.1 * x.1).sqrt() * (y.0 * y.0 + y.1 * y.1).sqrt())).acos();
        if (angle - self.probe).abs() < 1e-9 {
            Seg::ArcTheta
        } else {
            assert!((angle - (PI - self.probe)).abs() < 1e-9);
            Seg::ArcOther
        }
    }

    fn exponents(&self, segs: &BTreeMap<Rh, Vec<Seg>>) -> Option<[u32; 5]> {
        let mut e = [0u32; 5];
        for list in segs.values() {
            let k = match list.as_slice() {
                [Seg::ArcTheta] => 0,
                [Seg::ArcOther] => 1,
                [Seg::Straight] => 2,
                [Seg::ArcTheta, Seg::ArcTheta] => 3,
                [Seg::ArcOther, Seg::ArcOther] => 4,
                _ => return None,
            };
            e[k] += 1;
        }
        Some(e)
    }

    /// Every walk from `start` with at most `max_steps` steps.
    pub fn walks(&self, start: Me, max_steps: usize) -> Vec<NaiveWalk> {
        let mut out = Vec::new();
        let mut path = vec![start];
        let mut rhombi: Vec<Rh> = Vec::new();
        self.grow(&mut path, &mut rhombi, max_steps, &mut out);
        out
    }

    fn summarize(&self, path: &[Me], rhombi: &[Rh]) -> Option<NaiveWalk> {
        let mut segs: BTreeMap<Rh, Vec<Seg>> = BTreeMap::new();
        for (k, r) in rhombi.iter().enumerate() {
            segs.entry(*r).or_default().push(self.classify(path[k], path[k + 1]));
        }
        for v in segs.values_mut() {
            v.sort_by_key(|s| *s as u8);
        }
        let exponents = self.exponents(&segs)?;
        // heading k crosses path[k]; the last one leaves the final rhombus
        let n = rhombi.len();
        let heading = |k: usize| {
            if k < n {
                inward_normal(self.probe, path[k], rhombi[k])
            } else {
                inward_normal(self.probe, path[k], rhombi[k - 1]) + PI
            }
        };
        let winding = (1..=n).map(|k| wrap(heading(k) - heading(k - 1))).sum();
        Some(NaiveWalk { path: path.to_vec(), exponents, winding })
    }

    /// Checks a mid-edge sequence and classifies it, or `None` if it is not a walk.
    pub fn evaluate(&self, path: &[Me]) -> Option<NaiveWalk> {
        let mut rhombi: Vec<Rh> = Vec::new();
        for (k, p) in path.windows(2).enumerate() {
            let r = *faces(p[0]).iter().find(|r| faces(p[1]).contains(r))?;
            if (k > 0 && rhombi[k - 1] == r) || !self.allowed(r) || path[..=k].contains(&p[1]) {
                return None;
            }
            rhombi.push(r);
        }
        self.summarize(path, &rhombi)
    }

    fn grow(&self, path: &mut Vec<Me>, rhombi: &mut Vec<Rh>, max_steps: usize, out: &mut Vec<NaiveWalk>) {
        let Some(walk) = self.summarize(path, rhombi) else {
            return;
        };
        out.push(walk);
        if rhombi.len() == max_steps {
            return;
        }
        let here = *path.last().unwrap();
        let candidates: Vec<Rh> = match rhombi.last() {
            None => faces(here).to_vec(),
            Some(&prev) => faces(here).into_iter().filter(|&r| r != prev).collect(),
        };
        for r in candidates {
            if !self.allowed(r) {
                continue;
            }
            for next in sides(r) {
                if path.contains(&next) {
                    continue;
                }
                path.push(next);
                rhombi.push(r);
                self.grow(path, rhombi, max_steps, out);
                path.pop();
                rhombi.pop();
            }
        }
    }
}

/// Walk counts and weighted sums by number of steps.
pub fn totals(walks: &[NaiveWalk], w: [f64; 5], max_steps: usize) -> (Vec<u64>, Vec<f64>) {
    let mut counts = vec![0u64; max_steps + 1];
    let mut sums = vec![0.0; max_steps + 1];
    for walk in walks {
        counts[walk.steps()] += 1;
        sums[walk.steps()] += walk.weight(w);
    }
    (counts, sums)
}

/// `(re, im)` of `weight * e^(-i sigma W)`.
pub fn phase(weight: f64, sigma: f64, winding: f64) -> (f64, f64) {
    (weight * (sigma * winding).cos(), -weight * (sigma * winding).sin())
}

/// Honeycomb walks in cell coordinates: `A(a, b)` is joined to `B(a, b)`,
/// `B(a - 1, b)` and `B(a, b - 1)`. Edges of the last kind are the skipped
/// diagonals. Walks start at the middle of `A(0,0)-B(0,0)`, visit `n`
/// vertices and leave through a fresh non-diagonal edge.
pub fn honeycomb_counts(n_max: usize) -> Vec<u64> {
    type V = (i32, i32, bool);
    fn nbrs(v: V) -> [(V, bool); 3] {
        let (a, b, is_b) = v;
        if is_b {
            [((a, b, false), true), ((a + 1, b, false), true), ((a, b + 1, false), false)]
        } else {
            [((a, b, true), true), ((a - 1, b, true), true), ((a, b - 1, true), false)]
        }
    }
    fn go(v: V, prev: V, depth: usize, n_max: usize, seen: &mut Vec<V>, counts: &mut [u64]) {
        let start = [(0, 0, false), (0, 0, true)];
        for (u, real) in nbrs(v) {
            let is_start = start.contains(&u) && start.contains(&v);
            if real && u != prev && !is_start {
                counts[depth] += 1;
            }
        }
        if depth == n_max {
            return;
        }
        for (u, _) in nbrs(v) {
            if u != prev && !seen.contains(&u) {
                seen.push(u);
                go(u, v, depth + 1, n_max, seen, counts);
                seen.pop();
            }
        }
    }
    let mut counts = vec![0u64; n_max + 1];
    counts[0] = 1;
    if n_max > 0 {
        for (first, other) in [((0, 0, false), (0, 0, true)), ((0, 0, true), (0, 0, false))] {
            go(first, other, 1, n_max, &mut vec![first], &mut counts);
        }
    }
    counts
}
