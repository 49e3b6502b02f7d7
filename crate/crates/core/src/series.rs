//! Finite-n growth estimates and the honeycomb cross-check.

use serde::Serialize;

use crate::enumerate::{length_census, weight_sums_by_length, LengthRule, WalkSpace, CANONICAL_ORIGIN};
use crate::error::Result;
use crate::geometry::{LatticeAngle, MidEdge, Rhombus, Side, Step};
use crate::honeycomb;
use crate::plaquette::WeightKind;
use crate::weights::critical_weights;

#[derive(Debug, Clone, Serialize)]
pub struct SeriesReport {
    pub theta: f64,
    pub rule: LengthRule,
    pub n_max: u32,
    /// `c~_0 ..= c~_{n_max}`.
    pub c_tilde: Vec<f64>,
    /// `c~_n^{1/n}` for `n = 1..=n_max`.
    pub root_estimates: Vec<f64>,
    /// `c~_{n+1} / c~_n` for `n = 0..n_max`.
    pub ratio_estimates: Vec<f64>,
    /// Lower bound on `c~_n` from walks made of theta-arcs and straights.
    pub lower_bounds: Vec<f64>,
    /// `1 / u1`.
    pub target: f64,
}

impl SeriesReport {
    /// `c~_1`, an upper bound on every root estimate under the unit rule.
    pub fn upper_bracket(&self) -> Option<f64> {
        if self.rule.is_unit() {
            self.c_tilde.get(1).copied()
        } else {
            None
        }
    }

    /// `lower_bounds[n]^{1/n}`.
    pub fn lower_bracket(&self, n: usize) -> f64 {
        self.lower_bounds[n].powf(1.0 / n as f64)
    }

    pub fn lower_bound_holds(&self) -> bool {
        self.c_tilde
            .iter()
            .zip(&self.lower_bounds)
            .all(|(&c, &lb)| c >= lb * (1.0 - 1e-12))
    }

    /// Every root estimate lies in `[lower bracket, c~_1]`.
    pub fn roots_bracketed(&self) -> bool {
        let upper = self.upper_bracket().unwrap_or(f64::INFINITY);
        self.root_estimates.iter().enumerate().all(|(k, &r)| {
            let lo = self.lower_bracket(k + 1);
            r >= lo * (1.0 - 1e-12) && r <= upper * (1.0 + 1e-12)
        })
    }

    /// `c~_{n+m} <= c~_n c~_m` for all `n + m <= n_max`; only meaningful for
    /// the unit rule.
    pub fn submultiplicative(&self) -> bool {
        let c = &self.c_tilde;
        (0..c.len()).all(|n| (0..c.len() - n).all(|m| c[n + m] <= c[n] * c[m] * (1.0 + 1e-12)))
    }

    /// Each of the last three ratio estimates is closer to the target than the
    /// first one.
    pub fn ratios_approach_target(&self) -> bool {
        let r = &self.ratio_estimates;
        if r.len() < 4 {
            return false;
        }
        let gap = |x: f64| (x - self.target).abs();
        r[r.len() - 3..].iter().all(|&x| gap(x) < gap(r[0]))
    }
}

pub fn series_report(theta: LatticeAngle, rule: LengthRule, n_max: u32) -> Result<SeriesReport> {
    series_report_from(CANONICAL_ORIGIN, theta, rule, n_max)
}

/// [`series_report`] for walks from another origin.
pub fn series_report_from(origin: MidEdge, theta: LatticeAngle, rule: LengthRule, n_max: u32) -> Result<SeriesReport> {
    let w = critical_weights(theta);
    let census = length_census(origin, n_max, rule)?;
    let sums = weight_sums_by_length(&census, n_max, &w);
    let c_tilde: Vec<f64> = sums.iter().enumerate().map(|(n, s)| s / w.u1.powi(n as i32)).collect();
    let root_estimates = c_tilde.iter().enumerate().skip(1).map(|(n, c)| c.powf(1.0 / n as f64)).collect();
    let ratio_estimates = c_tilde.windows(2).map(|p| p[1] / p[0]).collect();
    // compositions of n into theta-arcs (length 1) and straights
    let ls = rule.straight as usize;
    let mut lower = vec![0.0; n_max as usize + 1];
    lower[0] = 1.0;
    for n in 1..lower.len() {
        lower[n] = w.u1 * lower[n - 1] + if n >= ls { w.v * lower[n - ls] } else { 0.0 };
    }
    let lower_bounds = lower.iter().enumerate().map(|(n, x)| x / w.u1.powi(n as i32)).collect();
    Ok(SeriesReport {
        theta: theta.radians(),
        rule,
        n_max,
        c_tilde,
        root_estimates,
        ratio_estimates,
        lower_bounds,
        target: 1.0 / w.u1,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HoneycombRow {
    pub n: u32,
    /// Rhombic walks of length `n` without a `w2` rhombus.
    pub rhombic_count: u64,
    /// Rhombic walks of length `n` with a `w2` rhombus.
    pub w2_walks: u64,
    pub weighted_sum: f64,
    pub oracle_count: u64,
    /// `u1^n * oracle_count`.
    pub expected: f64,
}

impl HoneycombRow {
    pub fn relative_error(&self) -> f64 {
        if self.expected == 0.0 {
            self.weighted_sum.abs()
        } else {
            (self.weighted_sum - self.expected).abs() / self.expected
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HoneycombReport {
    pub rows: Vec<HoneycombRow>,
    /// Walks whose triangle image failed to be a self-avoiding honeycomb walk
    /// of the right length, although they have no `w2` rhombus.
    pub bad_images: u64,
    /// Walks with a `w2` rhombus whose image nevertheless was self-avoiding.
    pub w2_with_valid_image: u64,
}

impl HoneycombReport {
    pub fn max_relative_error(&self) -> f64 {
        self.rows.iter().map(HoneycombRow::relative_error).fold(0.0, f64::max)
    }

    pub fn counts_match(&self) -> bool {
        self.rows.iter().all(|r| r.rhombic_count == r.oracle_count)
    }

    pub fn images_valid(&self) -> bool {
        self.bad_images == 0 && self.w2_with_valid_image == 0
    }
}

/// The triangle of a `pi/3` rhombus split along its short diagonal that holds
/// side `s`: sides 0 and 3 lie in the lower-left triangle, 1 and 2 in the other.
fn triangle(r: Rhombus, s: Side) -> (Rhombus, u8) {
    (r, u8::from(s.0 == 1 || s.0 == 2))
}

/// Honeycomb vertices visited by the image of a rhombic walk.
pub fn triangle_image(steps: &[Step]) -> Vec<(Rhombus, u8)> {
    let mut out = Vec::new();
    for s in steps {
        let a = triangle(s.rhombus, s.entry_side());
        let b = triangle(s.rhombus, s.exit_side());
        out.push(a);
        if b != a {
            out.push(b);
        }
    }
    out
}

/// Compares rhombic walks at `theta = pi/3` under the honeycomb length rule
/// with the honeycomb oracle.
pub fn honeycomb_crosscheck(n_max: u32) -> Result<HoneycombReport> {
    let theta = LatticeAngle::pi_fraction(1, 3)?;
    let rule = LengthRule::honeycomb();
    let w = critical_weights(theta);
    let space = WalkSpace::free(CANONICAL_ORIGIN, n_max, rule);
    let size = n_max as usize + 1;
    struct Acc {
        plain: Vec<u64>,
        w2: Vec<u64>,
        bad: u64,
        w2_valid: u64,
    }
    let (acc, _) = space.fold(
        || Acc { plain: vec![0; size], w2: vec![0; size], bad: 0, w2_valid: 0 },
        |acc, view| {
            let image = triangle_image(view.steps());
            let mut sorted = image.clone();
            sorted.sort();
            sorted.dedup();
            let valid = sorted.len() == image.len() && image.len() as u32 == view.length();
            let n = view.length() as usize;
            if view.monomial().exponent(WeightKind::W2) > 0 {
                acc.w2[n] += 1;
                acc.w2_valid += u64::from(valid);
            } else {
                acc.plain[n] += 1;
                acc.bad += u64::from(!valid);
            }
        },
        |acc, o| {
            for k in 0..size {
                acc.plain[k] += o.plain[k];
                acc.w2[k] += o.w2[k];
            }
            acc.bad += o.bad;
            acc.w2_valid += o.w2_valid;
        },
    )?;
    let census = length_census(CANONICAL_ORIGIN, n_max, rule)?;
    let sums = weight_sums_by_length(&census, n_max, &w);
    let oracle = honeycomb::walk_counts(n_max as usize);
    let rows = (0..size)
        .map(|n| HoneycombRow {
            n: n as u32,
            rhombic_count: acc.plain[n],
            w2_walks: acc.w2[n],
            weighted_sum: sums[n],
            oracle_count: oracle[n],
            expected: w.u1.powi(n as i32) * oracle[n] as f64,
        })
        .collect();
    Ok(HoneycombReport { rows, bad_images: acc.bad, w2_with_valid_image: acc.w2_valid })
}
