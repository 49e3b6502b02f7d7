//! Integrable plaquette weights and the local relations they satisfy.
//!
//! Three families are provided:
//!
//! * the spin family `sigma = l/8` (`l` odd), whose `sigma = 5/8` member is the
//!   critical self-avoiding walk point ([`critical_weights`]);
//! * the one-parameter `sigma = 1` family with `v = 0`;
//! * the loop O(n) family parametrised by `s`, with loop weight
//!   `n = -2 cos(4 pi s / 3)`.
//!
//! The `*_formula` variants evaluate the closed forms at any angle, which is
//! needed for the hexagon check and for showing where positivity breaks down.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::LatticeAngle;
use crate::plaquette::WeightKind;

const DEGENERATE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Family {
    /// `sigma = eighths / 8`.
    Sigma { eighths: i32 },
    /// `v = 0`, `u1 + u2 = 1`, `w1 = u1`, `w2 = u2`.
    SigmaOne,
    /// Loop O(n) weights with parameter `s`.
    On { s: f64 },
    /// Hand-assembled or perturbed weights.
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightSet {
    pub u1: f64,
    pub u2: f64,
    pub v: f64,
    pub w1: f64,
    pub w2: f64,
    /// Lattice angle the weights were generated for; `None` for families
    /// that do not depend on it.
    pub theta: Option<f64>,
    pub family: Family,
}

impl WeightSet {
    pub fn custom(values: [f64; 5]) -> WeightSet {
        let [u1, u2, v, w1, w2] = values;
        WeightSet { u1, u2, v, w1, w2, theta: None, family: Family::Custom }
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.u1, self.u2, self.v, self.w1, self.w2]
    }

    pub fn get(&self, kind: WeightKind) -> f64 {
        self.as_array()[kind as usize]
    }

    /// Spin at which the family satisfies the local relations.
    pub fn declared_sigma(&self) -> Option<f64> {
        match self.family {
            Family::Sigma { eighths } => Some(f64::from(eighths) / 8.0),
            Family::SigmaOne => Some(1.0),
            Family::On { s } => Some(s + 1.0),
            Family::Custom => None,
        }
    }

    /// Weights rescaled to fugacity `x`, taking `x_c = u1`: arcs and straights
    /// scale by `x / x_c`, double arcs by `(x / x_c)^2`.
    pub fn at_fugacity(&self, x: f64) -> WeightSet {
        let r = x / self.u1;
        WeightSet {
            u1: x,
            u2: self.u2 * r,
            v: self.v * r,
            w1: self.w1 * r * r,
            w2: self.w2 * r * r,
            theta: self.theta,
            family: Family::Custom,
        }
    }

    /// `u1^2 >= w1` and `u2^2 >= w2`.
    /// `(u1^2 >= w1, u2^2 >= w2)`, allowing for rounding: the first is an
    /// equality at `theta = pi/3`.
    pub fn inequalities(&self) -> (bool, bool) {
        let tol = 1e-12;
        (self.u1 * self.u1 >= self.w1 - tol, self.u2 * self.u2 >= self.w2 - tol)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.as_array().iter().all(|&x| x >= -1e-15)
    }

    pub fn max_abs_diff(&self, other: &WeightSet) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Critical weights with closed forms in `3 theta / 8`.
pub fn critical_weights(theta: LatticeAngle) -> WeightSet {
    critical_formula(theta.radians()).expect("denominator is nonzero on [pi/3, 2pi/3]")
}

/// [`critical_weights`] evaluated at any angle.
pub fn critical_formula(theta: f64) -> Result<WeightSet> {
    let q = 3.0 * theta / 8.0;
    let den = (5.0 * PI / 4.0 + q).sin() * (5.0 * PI / 8.0 - q).sin();
    if den.abs() < DEGENERATE {
        return Err(Error::DegenerateWeights("critical denominator"));
    }
    let s54 = (5.0 * PI / 4.0).sin();
    let a = (5.0 * PI / 8.0 + q).sin();
    Ok(WeightSet {
        u1: s54 * a / den,
        u2: s54 * q.sin() / den,
        v: a * (-q).sin() / den,
        w1: a * (5.0 * PI / 4.0 - q).sin() / den,
        w2: (15.0 * PI / 8.0 + q).sin() * (-q).sin() / den,
        theta: Some(theta),
        family: Family::Sigma { eighths: 5 },
    })
}

/// Returns `l` when `sigma = l / 8` with `l` odd.
pub fn spin_eighths(sigma: f64) -> Option<i32> {
    let l = 8.0 * sigma;
    let r = l.round();
    ((l - r).abs() < 1e-9 && (r as i64).rem_euclid(2) == 1).then_some(r as i32)
}

/// Spin-family weights for `sigma = l/8`, `l` odd.
pub fn sigma_weights(theta: LatticeAngle, sigma: f64) -> Result<WeightSet> {
    sigma_formula(theta.radians(), sigma)
}

/// [`sigma_weights`] evaluated at any angle.
pub fn sigma_formula(theta: f64, sigma: f64) -> Result<WeightSet> {
    let eighths = spin_eighths(sigma).ok_or(Error::InvalidSpin(sigma))?;
    let m = sigma - 1.0;
    let t = (m * (PI + theta)).sin() * (m * (2.0 * PI - theta)).sin();
    if t.abs() < DEGENERATE {
        return Err(Error::DegenerateWeights("t = 0"));
    }
    let s2 = (2.0 * sigma * PI).sin();
    let a = (m * (PI - theta)).sin();
    let b = (m * theta).sin();
    Ok(WeightSet {
        u1: s2 * a / t,
        u2: s2 * b / t,
        v: b * a / t,
        w1: a * (m * (2.0 * PI + theta)).sin() / t,
        w2: b * (m * (3.0 * PI - theta)).sin() / t,
        theta: Some(theta),
        family: Family::Sigma { eighths },
    })
}

/// The `v = 0` family solving the local relations at `sigma = 1` for every angle.
pub fn sigma_one_family(u1: f64) -> WeightSet {
    WeightSet {
        u1,
        u2: 1.0 - u1,
        v: 0.0,
        w1: u1,
        w2: 1.0 - u1,
        theta: None,
        family: Family::SigmaOne,
    }
}

/// Loop O(n) weights and the loop weight `n = -2 cos(4 pi s / 3)`.
pub fn on_weights(theta: LatticeAngle, s: f64) -> Result<(WeightSet, f64)> {
    on_formula(theta.radians(), s)
}

/// [`on_weights`] evaluated at any rhombus angle.
pub fn on_formula(theta: f64, s: f64) -> Result<(WeightSet, f64)> {
    let sin = f64::sin;
    let d = sin(PI * s / 3.0);
    if d.abs() < DEGENERATE {
        return Err(Error::DegenerateWeights("sin(pi s / 3) = 0"));
    }
    let g = sin(2.0 * PI * s / 3.0);
    let t = g.powi(3) / d + sin((theta - PI / 3.0) * s) * sin((2.0 * PI / 3.0 - theta) * s);
    if t.abs() < DEGENERATE {
        return Err(Error::DegenerateWeights("t = 0"));
    }
    let a = sin((PI - theta) * s);
    let b = sin(theta * s);
    let w = WeightSet {
        u1: a * g / t,
        u2: b * g / t,
        v: b * a / t,
        w1: sin((2.0 * PI / 3.0 - theta) * s) * a / t,
        w2: sin((theta - PI / 3.0) * s) * b / t,
        theta: Some(theta),
        family: Family::On { s },
    };
    Ok((w, loop_weight_for(s)))
}

pub fn loop_weight_for(s: f64) -> f64 {
    let n = -2.0 * (4.0 * PI * s / 3.0).cos();
    if (n - n.round()).abs() < 1e-12 { n.round() } else { n }
}

/// Residuals of the four local relations and of their conjugates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalResiduals {
    pub direct: [Complex64; 4],
    pub conjugate: [Complex64; 4],
}

impl LocalResiduals {
    pub fn max_abs(&self) -> f64 {
        self.direct
            .iter()
            .chain(&self.conjugate)
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Coefficients `(c0, [c_u1, c_u2, c_v, c_w1, c_w2])` of the four relations,
/// each of the form `c0 + sum_k c_k x_k = 0`.
fn relation_coefficients(lambda: Complex64, mu: Complex64, e: Complex64) -> [(Complex64, [Complex64; 5]); 4] {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mub = one / mu;
    [
        (one, [-lambda * e, lambda * mub * e, -one, zero, zero]),
        (zero, [zero, -mu, lambda * mub * mub * e, zero, -lambda * e]),
        (zero, [-mub, zero, -lambda * mu * e, lambda * mub * e, zero]),
        (zero, [lambda * mub * mub * e, -lambda * mu * e, zero, -mub * mub, -mu * mu]),
    ]
}

/// The relations and their conjugates (conjugating every phase, not the weights).
fn all_relations(sigma: f64, theta: f64) -> Vec<(Complex64, [Complex64; 5])> {
    let lambda = Complex64::from_polar(1.0, -sigma * theta);
    let mu = Complex64::from_polar(1.0, -sigma * PI);
    let e = Complex64::from_polar(1.0, theta);
    let mut rows = relation_coefficients(lambda, mu, e).to_vec();
    rows.extend(relation_coefficients(lambda.conj(), mu.conj(), e.conj()));
    rows
}

/// Evaluates the local relations for `w` with `lambda = e^{-i sigma theta}` and
/// `mu = e^{-i sigma pi}`.
pub fn local_residuals(w: &WeightSet, sigma: f64, theta: LatticeAngle) -> LocalResiduals {
    local_residuals_at(w, sigma, theta.radians())
}

pub fn local_residuals_at(w: &WeightSet, sigma: f64, theta: f64) -> LocalResiduals {
    let x = w.as_array();
    let vals: Vec<Complex64> = all_relations(sigma, theta)
        .into_iter()
        .map(|(c0, c)| c0 + c.iter().zip(x).map(|(ck, xk)| ck * xk).sum::<Complex64>())
        .collect();
    LocalResiduals {
        direct: [vals[0], vals[1], vals[2], vals[3]],
        conjugate: [vals[4], vals[5], vals[6], vals[7]],
    }
}

/// Least-squares treatment of the local relations as a real linear system in
/// `(u1, u2, v, w1, w2)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalSystemSolution {
    pub sigma: f64,
    pub theta: f64,
    /// Minimum-norm least-squares solution.
    pub least_squares: [f64; 5],
    pub residual_norm: f64,
    /// `Some` when the residual vanishes to solver precision.
    pub solution: Option<[f64; 5]>,
    pub rank: usize,
    /// Basis of the null space (empty when the solution is unique).
    pub null_space: Vec<[f64; 5]>,
    pub singular_values: Vec<f64>,
    /// Residual of the best solution constrained to `v = 0`.
    pub v_zero_residual: f64,
    pub v_zero_least_squares: [f64; 5],
}

impl LocalSystemSolution {
    pub fn nullity(&self) -> usize {
        5 - self.rank
    }
}

const SOLVED: f64 = 1e-9;

fn least_squares(a: &DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, f64, usize, Vec<f64>, DMatrix<f64>) {
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let tol = 1e-10 * smax.max(1.0);
    let rank = svd.singular_values.iter().filter(|&&s| s > tol).count();
    let x = svd.solve(b, tol).expect("u and v_t were computed");
    let res = (a * &x - b).norm();
    let vt = svd.v_t.expect("v_t was computed");
    (x, res, rank, svd.singular_values.iter().copied().collect(), vt)
}

pub fn solve_local_system(sigma: f64, theta: LatticeAngle) -> LocalSystemSolution {
    solve_local_system_at(sigma, theta.radians())
}

pub fn solve_local_system_at(sigma: f64, theta: f64) -> LocalSystemSolution {
    let rows = all_relations(sigma, theta);
    let n = rows.len() * 2;
    let mut a = DMatrix::<f64>::zeros(n, 5);
    let mut b = DVector::<f64>::zeros(n);
    for (r, (c0, c)) in rows.iter().enumerate() {
        for k in 0..5 {
            a[(2 * r, k)] = c[k].re;
            a[(2 * r + 1, k)] = c[k].im;
        }
        b[2 * r] = -c0.re;
        b[2 * r + 1] = -c0.im;
    }

    let (x, residual_norm, rank, singular_values, vt) = least_squares(&a, &b);
    let to_arr = |v: &DVector<f64>| [v[0], v[1], v[2], v[3], v[4]];
    let least = to_arr(&x);

    // right singular vectors for the vanishing singular values span the kernel
    let smax = singular_values.iter().copied().fold(0.0, f64::max);
    let tol = 1e-10 * smax.max(1.0);
    let mut null_space = Vec::new();
    for (k, &s) in singular_values.iter().enumerate() {
        if s <= tol {
            let row = vt.row(k);
            null_space.push([row[0], row[1], row[2], row[3], row[4]]);
        }
    }
    // nalgebra's thin SVD has min(n, 5) = 5 singular values, so every kernel
    // direction shows up above.

    let a_nov = a.clone().remove_column(2);
    let (x0, v_zero_residual, _, _, _) = least_squares(&a_nov, &b);
    let v_zero_least_squares = [x0[0], x0[1], 0.0, x0[2], x0[3]];

    LocalSystemSolution {
        sigma,
        theta,
        least_squares: least,
        residual_norm,
        solution: (residual_norm < SOLVED).then_some(least),
        rank,
        null_space,
        singular_values,
        v_zero_residual,
        v_zero_least_squares,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn angle(num: i32, den: i32) -> LatticeAngle {
        LatticeAngle::pi_fraction(num, den).unwrap()
    }

    #[test]
    fn honeycomb_point() {
        let w = critical_weights(angle(1, 3));
        let u1 = 1.0 / (2.0 + 2f64.sqrt()).sqrt();
        assert!((w.u1 - u1).abs() < 1e-12);
        for x in [w.u2, w.v, w.w1] {
            assert!((x - u1 * u1).abs() < 1e-12);
        }
        assert!(w.w2.abs() < 1e-12);
    }

    #[test]
    fn square_point_growth_constant() {
        let w = critical_weights(angle(1, 2));
        let expected = (3.0 + 0.5 * (26.0 + 7.0 * 2f64.sqrt()).sqrt()).sqrt();
        assert!((1.0 / w.u1 - expected).abs() < 1e-9);
        assert!((w.u1 - w.u2).abs() < 1e-14);
        assert!((w.w1 - w.w2).abs() < 1e-14);
        // penalties quoted for the square lattice
        assert!((w.w1 / (w.u1 * w.u1) - 0.675).abs() < 1e-3);
        assert!((w.v / w.u1 - 0.785).abs() < 1e-3);
    }

    #[test]
    fn reflection_swaps_labels() {
        for k in 0..=12 {
            let th = PI / 3.0 + PI / 3.0 * f64::from(k) / 12.0;
            let a = critical_formula(th).unwrap();
            let b = critical_formula(PI - th).unwrap();
            assert!((a.u1 - b.u2).abs() < 1e-12 && (a.w1 - b.w2).abs() < 1e-12);
            assert!((a.v - b.v).abs() < 1e-12);
            let (c, _) = on_formula(th, -0.3).unwrap();
            let (d, _) = on_formula(PI - th, -0.3).unwrap();
            assert!((c.u1 - d.u2).abs() < 1e-12 && (c.w1 - d.w2).abs() < 1e-12);
            assert!((c.v - d.v).abs() < 1e-12);
        }
    }

    #[test]
    fn sigma_family_rejects_bad_spin() {
        let th = angle(1, 2);
        assert_eq!(sigma_weights(th, 0.7), Err(Error::InvalidSpin(0.7)));
        assert_eq!(sigma_weights(th, 0.5), Err(Error::InvalidSpin(0.5)));
        assert!(sigma_weights(th, 3.0 / 8.0).is_ok());
        assert!(sigma_weights(th, -1.0 / 8.0).is_ok());
    }

    #[test]
    fn sigma_one_family_endpoints() {
        let w = sigma_one_family(1.0);
        assert_eq!(w.as_array(), [1.0, 0.0, 0.0, 1.0, 0.0]);
        let w = sigma_one_family(0.5);
        assert_eq!(w.as_array(), [0.5, 0.5, 0.0, 0.5, 0.5]);
    }

    #[test]
    fn three_eighths_residuals_vanish() {
        let th = angle(1, 2);
        let w = sigma_weights(th, 3.0 / 8.0).unwrap();
        assert!(w.as_array().iter().any(|&x| x < 0.0));
        // weights are O(20) here, so compare relative to their size
        assert!(local_residuals(&w, 3.0 / 8.0, th).max_abs() < 1e-12 * 100.0);
    }

    #[test]
    fn perturbation_is_detected() {
        let th = angle(1, 2);
        let mut w = critical_weights(th);
        w.u1 += 0.01;
        assert!(local_residuals(&w, 0.625, th).max_abs() > 1e-4);
    }

    #[test]
    fn solver_at_sigma_one_has_one_dimensional_kernel() {
        let sol = solve_local_system(1.0, angle(1, 2));
        assert_eq!(sol.rank, 4);
        assert_eq!(sol.nullity(), 1);
        let k = sol.null_space[0];
        // kernel direction (1, -1, 0, 1, -1) up to scale
        let scale = k[0];
        let expected = [1.0, -1.0, 0.0, 1.0, -1.0];
        for (x, e) in k.iter().zip(expected) {
            assert!((x - scale * e).abs() < 1e-9);
        }
        let x = sol.solution.unwrap();
        assert!(x[2].abs() < 1e-12);
        assert!((x[0] + x[1] - 1.0).abs() < 1e-12);
        assert!((x[3] - x[0]).abs() < 1e-12 && (x[4] - x[1]).abs() < 1e-12);
    }

    #[test]
    fn solver_finds_nothing_at_generic_spin() {
        let sol = solve_local_system(0.7, angle(1, 2));
        assert!(sol.solution.is_none());
        assert!(sol.residual_norm > 1e-6);
        assert!(sol.v_zero_residual > 1e-6);
    }

    #[test]
    fn fugacity_rescaling() {
        let w = critical_weights(angle(1, 2));
        let same = w.at_fugacity(w.u1);
        assert!(same.max_abs_diff(&w) < 1e-15);
        let half = w.at_fugacity(0.5 * w.u1);
        assert!((half.v - 0.5 * w.v).abs() < 1e-15);
        assert!((half.w1 - 0.25 * w.w1).abs() < 1e-15);
    }
}
