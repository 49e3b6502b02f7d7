//! The parafermionic observable on parallelogram domains and the boundary
//! identities it implies.
//!
//! Every walk inside a domain is enumerated once into a [`DomainCensus`]
//! keyed by end mid-edge, exact winding and weight monomial. Observables,
//! strip sums and fugacity rescalings are then cheap evaluations of the same
//! census.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::enumerate::{EnumerationStats, Monomial, WalkSpace};
use crate::error::{Error, Result};
use crate::geometry::{BoundarySide, LatticeAngle, MidEdge, ParallelogramDomain, Rhombus, Winding};
use crate::weights::{critical_weights, WeightSet};

/// Walk counts in a domain keyed by `(end, winding, monomial)`.
#[derive(Debug, Clone)]
pub struct DomainCensus {
    pub domain: ParallelogramDomain,
    pub counts: BTreeMap<(MidEdge, Winding, Monomial), u64>,
    pub stats: EnumerationStats,
}

impl DomainCensus {
    pub fn build(domain: ParallelogramDomain) -> Result<Self> {
        Self::build_in(WalkSpace::domain(domain))
    }

    /// Census of an explicit walk space; the space must carry a domain.
    pub fn build_in(space: WalkSpace) -> Result<Self> {
        let domain = space
            .domain
            .ok_or_else(|| Error::InvalidDomain("a census needs a domain".into()))?;
        let (counts, stats) = space.fold(
            BTreeMap::new,
            |acc: &mut BTreeMap<_, u64>, v| *acc.entry((v.end(), v.winding(), v.monomial())).or_default() += 1,
            |acc, other| {
                for (k, n) in other {
                    *acc.entry(k).or_default() += n;
                }
            },
        )?;
        Ok(DomainCensus { domain, counts, stats })
    }

    pub fn origin(&self) -> MidEdge {
        self.domain.origin()
    }
}

/// `F_a(z)` for every mid-edge `z` of a domain.
#[derive(Debug, Clone)]
pub struct ObservableTable {
    pub domain: ParallelogramDomain,
    pub origin: MidEdge,
    pub theta: f64,
    pub sigma: f64,
    pub values: BTreeMap<MidEdge, Complex64>,
}

impl ObservableTable {
    pub fn from_census(census: &DomainCensus, theta: LatticeAngle, sigma: f64, w: &WeightSet) -> Self {
        let th = theta.radians();
        let mut values: BTreeMap<MidEdge, Complex64> =
            census.domain.mid_edges().into_iter().map(|m| (m, Complex64::new(0.0, 0.0))).collect();
        for (&(end, winding, mono), &count) in &census.counts {
            let phase = Complex64::from_polar(1.0, -sigma * winding.radians(th));
            *values.get_mut(&end).expect("walks stay in the domain") += phase * (count as f64 * mono.eval(w));
        }
        ObservableTable { domain: census.domain, origin: census.origin(), theta: th, sigma, values }
    }

    pub fn get(&self, z: MidEdge) -> Complex64 {
        self.values.get(&z).copied().unwrap_or_default()
    }
}

pub fn observable(domain: ParallelogramDomain, theta: LatticeAngle, sigma: f64, w: &WeightSet) -> Result<ObservableTable> {
    let census = DomainCensus::build(domain)?;
    Ok(ObservableTable::from_census(&census, theta, sigma, w))
}

/// `F(bottom) + e^{i theta} F(right) - F(top) - e^{i theta} F(left)` for one
/// rhombus; this is its counter-clockwise contour sum.
pub fn cr_residual(table: &ObservableTable, r: Rhombus) -> Result<Complex64> {
    if !table.domain.contains_rhombus(r) {
        return Err(Error::RhombusOutsideDomain(r));
    }
    Ok(cr_expression(|m| table.get(m), r, table.theta))
}

pub(crate) fn cr_expression(f: impl Fn(MidEdge) -> Complex64, r: Rhombus, theta: f64) -> Complex64 {
    let e = Complex64::from_polar(1.0, theta);
    f(MidEdge::h(r.i, r.j)) + e * f(MidEdge::v(r.i + 1, r.j)) - f(MidEdge::h(r.i, r.j + 1)) - e * f(MidEdge::v(r.i, r.j))
}

/// Largest `|cr_residual|` over the domain's rhombi.
pub fn max_cr_residual(table: &ObservableTable) -> f64 {
    table
        .domain
        .rhombi()
        .into_iter()
        .map(|r| cr_expression(|m| table.get(m), r, table.theta).norm())
        .fold(0.0, f64::max)
}

/// Counter-clockwise contour sum of `F` over the domain boundary, rotated by
/// `e^{-i theta}`. Its real part is the parallelogram identity at `sigma = 5/8`;
/// the imaginary part is the companion relation, reported as a diagnostic.
pub fn boundary_contour(table: &ObservableTable) -> Complex64 {
    let theta = LatticeAngle::new(table.theta).expect("table angle was validated");
    let rot = Complex64::from_polar(1.0, -table.theta);
    table
        .domain
        .mid_edges()
        .into_iter()
        .filter_map(|m| table.domain.boundary_tangent(m, theta).map(|(x, y)| table.get(m) * Complex64::new(x, y)))
        .sum::<Complex64>()
        * rot
}

/// `c_alpha, c_delta, c_epsilon`.
pub fn boundary_coefficients(theta: LatticeAngle) -> (f64, f64, f64) {
    let th = theta.radians();
    let three_eighths = 3.0 / 8.0;
    (
        (three_eighths * std::f64::consts::PI).cos(),
        (three_eighths * th).cos(),
        (three_eighths * (std::f64::consts::PI - th)).cos(),
    )
}

/// Weighted walk sums from the origin to each side of a centred parallelogram.
/// The empty walk is the identity's constant term and is not part of `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StripSums {
    pub t: u32,
    pub l: u32,
    pub x: f64,
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub e: f64,
}

impl StripSums {
    /// Sums at fugacity `x`; `census` must be taken on `ParallelogramDomain::centered(t, l)`.
    pub fn from_census(census: &DomainCensus, t: u32, l: u32, x: f64, theta: LatticeAngle) -> Self {
        let w = critical_weights(theta).at_fugacity(x);
        let (mut a, mut b, mut d, mut e) = (0.0, 0.0, 0.0, 0.0);
        for (&(end, _, mono), &count) in &census.counts {
            if mono == Monomial::ONE {
                continue;
            }
            let value = count as f64 * mono.eval(&w);
            match census.domain.boundary_side(end) {
                Some(BoundarySide::Alpha) => a += value,
                Some(BoundarySide::Beta) => b += value,
                Some(BoundarySide::Delta) => d += value,
                Some(BoundarySide::Epsilon) => e += value,
                None => {}
            }
        }
        StripSums { t, l, x, a, b, d, e }
    }

    /// `c_alpha A + B + c_delta D + c_epsilon E - 1`.
    pub fn identity_defect(&self, theta: LatticeAngle) -> f64 {
        let (ca, cd, ce) = boundary_coefficients(theta);
        ca * self.a + self.b + cd * self.d + ce * self.e - 1.0
    }

    pub fn edge_sum(&self) -> f64 {
        self.d + self.e
    }
}

pub fn strip_sums(t: u32, l: u32, x: f64, theta: LatticeAngle) -> Result<StripSums> {
    let census = strip_census(t, l)?;
    Ok(StripSums::from_census(&census, t, l, x, theta))
}

fn strip_census(t: u32, l: u32) -> Result<DomainCensus> {
    DomainCensus::build(ParallelogramDomain::centered(t, l)?)
}

/// `|c_alpha A + B + c_delta D + c_epsilon E - 1|` at `x = x_c`.
pub fn parallelogram_identity_residual(t: u32, l: u32, theta: LatticeAngle) -> Result<f64> {
    let xc = critical_weights(theta).u1;
    Ok(strip_sums(t, l, xc, theta)?.identity_defect(theta).abs())
}

/// Truncated strip limits for fixed `T`.
#[derive(Debug, Clone, Serialize)]
pub struct StripLimits {
    pub t: u32,
    pub x: f64,
    pub theta: f64,
    /// Sums at the requested fugacity for `L = 0..=l_max`.
    pub rows: Vec<StripSums>,
    /// Sums at `x_c` for `L = 0..=l_max`.
    pub critical_rows: Vec<StripSums>,
    /// `v^{T-1} min(u1, u2)`.
    pub c_t: f64,
    /// `A_{T,L+1} - A_{T,L} - c_T (E_{T,L} + D_{T,L})` at `x_c`, `L < l_max`.
    pub tail_margins: Vec<f64>,
    /// `c_delta D + c_epsilon E` at `x_c` and `L = l_max`: how far
    /// `c_alpha A + B` still is from 1.
    pub truncation_bound: f64,
}

impl StripLimits {
    pub fn a_t(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.a)
    }

    pub fn b_t(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.b)
    }

    /// `E + D` at `x_c` for each `L`.
    pub fn tail(&self) -> Vec<f64> {
        self.critical_rows.iter().map(StripSums::edge_sum).collect()
    }

    pub fn tail_strictly_decreasing(&self) -> bool {
        self.tail().windows(2).all(|p| p[1] < p[0])
    }

    pub fn tail_inequality_holds(&self) -> bool {
        self.tail_margins.iter().all(|&m| m >= -1e-12)
    }

    pub fn monotone_in_l(&self) -> bool {
        self.rows.windows(2).all(|p| p[1].a >= p[0].a - 1e-15 && p[1].b >= p[0].b - 1e-15)
    }
}

pub fn strip_limits(t: u32, x: f64, theta: LatticeAngle, l_max: u32) -> Result<StripLimits> {
    let w = critical_weights(theta);
    let xc = w.u1;
    if x > xc * (1.0 + 1e-12) {
        return Err(Error::InvalidDomain(format!("fugacity {x} exceeds x_c = {xc}")));
    }
    let mut rows = Vec::new();
    let mut critical_rows = Vec::new();
    for l in 0..=l_max {
        let census = strip_census(t, l)?;
        rows.push(StripSums::from_census(&census, t, l, x, theta));
        critical_rows.push(StripSums::from_census(&census, t, l, xc, theta));
    }
    let c_t = w.v.powi(t as i32 - 1) * w.u1.min(w.u2);
    let tail_margins = critical_rows
        .windows(2)
        .map(|p| p[1].a - p[0].a - c_t * p[0].edge_sum())
        .collect();
    let (_, cd, ce) = boundary_coefficients(theta);
    let last = critical_rows.last().expect("l_max >= 0");
    Ok(StripLimits {
        t,
        x,
        theta: theta.radians(),
        truncation_bound: cd * last.d + ce * last.e,
        rows,
        critical_rows,
        c_t,
        tail_margins,
    })
}

/// Bridge lower bounds evaluated on truncated `B_T(x_c) ~ B_{T, L_max}`.
#[derive(Debug, Clone, Serialize)]
pub struct BridgeChainReport {
    pub theta: f64,
    pub l_max: u32,
    /// `x_c u2 / c_alpha`.
    pub c: f64,
    /// `B_{T, L_max}(x_c)` for `T = 1..=t_max`.
    pub b: Vec<f64>,
    /// `c_delta D + c_epsilon E` at `L_max` for each `T`.
    pub truncation_bounds: Vec<f64>,
    /// `B_T - min(B_1, c) / T`.
    pub harmonic_margins: Vec<f64>,
    /// `B_{T+1} - (-c + sqrt(c^2 + 4 c B_T)) / 2`.
    pub recursion_margins: Vec<f64>,
    /// Sub-critical fugacity used for the decay check.
    pub x_ratio: f64,
    /// `(x/x_c)^T - B_{T, L_max}(x)`.
    pub decay_margins: Vec<f64>,
}

impl BridgeChainReport {
    pub fn harmonic_bound_holds(&self) -> bool {
        self.harmonic_margins.iter().all(|&m| m > 0.0)
    }

    pub fn recursion_bound_holds(&self) -> bool {
        self.recursion_margins.iter().all(|&m| m >= 0.0)
    }

    pub fn decay_holds(&self) -> bool {
        self.decay_margins.iter().all(|&m| m >= 0.0)
    }
}

pub fn bridge_chain_check(theta: LatticeAngle, t_max: u32, l_max: u32, x_ratio: f64) -> Result<BridgeChainReport> {
    if t_max == 0 {
        return Err(Error::InvalidDomain("T must be at least 1".into()));
    }
    let w = critical_weights(theta);
    let xc = w.u1;
    let (ca, cd, ce) = boundary_coefficients(theta);
    let c = xc * w.u2 / ca;
    let mut b = Vec::new();
    let mut truncation_bounds = Vec::new();
    let mut decay_margins = Vec::new();
    for t in 1..=t_max {
        let census = strip_census(t, l_max)?;
        let crit = StripSums::from_census(&census, t, l_max, xc, theta);
        let sub = StripSums::from_census(&census, t, l_max, x_ratio * xc, theta);
        b.push(crit.b);
        truncation_bounds.push(cd * crit.d + ce * crit.e);
        decay_margins.push(x_ratio.powi(t as i32) - sub.b);
    }
    let floor = b[0].min(c);
    let harmonic_margins = b.iter().enumerate().map(|(k, &bt)| bt - floor / (k as f64 + 1.0)).collect();
    let recursion_margins = b
        .windows(2)
        .map(|p| p[1] - 0.5 * (-c + (c * c + 4.0 * c * p[0]).sqrt()))
        .collect();
    Ok(BridgeChainReport {
        theta: theta.radians(),
        l_max,
        c,
        b,
        truncation_bounds,
        harmonic_margins,
        recursion_margins,
        x_ratio,
        decay_margins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn th(n: i32, d: i32) -> LatticeAngle {
        LatticeAngle::pi_fraction(n, d).unwrap()
    }

    #[test]
    fn single_rhombus_observable() {
        let d = ParallelogramDomain::new(1, 0, 0).unwrap();
        let theta = th(1, 2);
        let w = critical_weights(theta);
        let t = observable(d, theta, 0.625, &w).unwrap();
        assert_eq!(t.get(d.origin()), Complex64::new(1.0, 0.0));
        // right side is reached by a straight with no turn
        assert!((t.get(MidEdge::v(1, 0)) - w.v).norm() < 1e-15);
        // bottom is reached by turning right around the SW corner
        let expect = w.u1 * Complex64::from_polar(1.0, 0.625 * theta.radians());
        assert!((t.get(MidEdge::h(0, 0)) - expect).norm() < 1e-15);
    }

    #[test]
    fn coefficients_are_positive() {
        for theta in LatticeAngle::grid(13) {
            let (a, d, e) = boundary_coefficients(theta);
            assert!(a > 0.0 && d > 0.0 && e > 0.0);
        }
    }

    #[test]
    fn contour_vanishes_and_splits() {
        let theta = th(5, 12);
        let d = ParallelogramDomain::centered(2, 1).unwrap();
        let table = observable(d, theta, 0.625, &critical_weights(theta)).unwrap();
        let c = boundary_contour(&table);
        assert!(c.norm() < 1e-10, "{c}");
        let s = strip_sums(2, 1, critical_weights(theta).u1, theta).unwrap();
        assert!(s.identity_defect(theta).abs() < 1e-10);
    }

    #[test]
    fn zero_fugacity_leaves_only_the_empty_walk() {
        let s = strip_sums(2, 1, 0.0, th(1, 2)).unwrap();
        assert_eq!((s.a, s.b, s.d, s.e), (0.0, 0.0, 0.0, 0.0));
        assert_eq!(s.identity_defect(th(1, 2)), -1.0);
    }

    #[test]
    fn rhombus_outside_is_rejected() {
        let d = ParallelogramDomain::new(2, 0, 1).unwrap();
        let theta = th(1, 2);
        let t = observable(d, theta, 0.625, &critical_weights(theta)).unwrap();
        assert!(cr_residual(&t, Rhombus::new(5, 5)).is_err());
    }
}
