//! Command-line front end.
//!
//! Every subcommand produces a [`Table`] plus a list of failed checks. Tables
//! are written as CSV, or as JSON `{"meta": ..., "rows": [...]}`. Exit status
//! is 0 when all checks pass, 1 when a check fails and 2 for configuration
//! errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::enumerate::{enumerate_walks, LengthRule, CANONICAL_ORIGIN};
use crate::error::Error;
use crate::geometry::{LatticeAngle, MidEdge, ParallelogramDomain};
use crate::loops::yang_baxter_report;
use crate::observable::{bridge_chain_check, max_cr_residual, observable, strip_limits, strip_sums, cr_residual};
use crate::series::{honeycomb_crosscheck, series_report_from};
use crate::weights::{
    critical_weights, local_residuals, on_weights, sigma_one_family, sigma_weights, solve_local_system, spin_eighths,
    WeightSet,
};

pub const THREADS_ENV: &str = "RHOMBUS_SAW_THREADS";

#[derive(Parser, Debug, Serialize)]
#[command(name = "rhombus-saw", version, about = "Weighted self-avoiding walks on the rhombic lattice")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Worker threads for enumeration.
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    Critical,
    Sigma,
    SigmaOne,
    On,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum OriginArg {
    /// Horizontal mid-edge H(0,0).
    H,
    /// Vertical mid-edge V(0,0).
    V,
}

impl OriginArg {
    fn mid_edge(self) -> MidEdge {
        match self {
            OriginArg::H => CANONICAL_ORIGIN,
            OriginArg::V => MidEdge::v(0, 0),
        }
    }
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Weight families at one angle.
    ///
    /// Columns: family, theta, parameter, u1, u2, v, w1, w2, inv_u1,
    /// local_residual, u1sq_ge_w1, u2sq_ge_w2.
    Weights(WeightsArgs),
    /// Local relation residuals over an angle grid.
    ///
    /// Columns: theta, family, parameter, residual, pass.
    VerifyLocal(VerifyLocalArgs),
    /// Solves the local relations as a linear system.
    ///
    /// Columns: theta, sigma, rank, nullity, residual_norm, u1, u2, v, w1, w2,
    /// formula_diff, v_zero_residual.
    SolveSystem(SolveSystemArgs),
    /// Rhombus contour residuals of the observable on a parallelogram.
    ///
    /// Columns: theta, i, j, re, im, abs.
    VerifyCr(VerifyCrArgs),
    /// Parallelogram identity over a (T, L) grid.
    ///
    /// Columns: T, L, theta, x, A, B, D, E, residual13.
    Parallelogram(ParallelogramArgs),
    /// Strip sums, tail bound and bridge lower bounds.
    ///
    /// Columns: T, L, A, B, D, E, edge_sum, tail_margin, A_x, B_x. Sums
    /// without suffix are at x_c, `_x` at the requested fugacity.
    Strip(StripArgs),
    /// Growth estimates from exact enumeration.
    ///
    /// Columns: n, c_tilde, root_estimate, ratio_estimate, lower_bracket,
    /// upper_bracket, target.
    Series(SeriesArgs),
    /// Comparison with honeycomb walk counts at theta = pi/3.
    ///
    /// Columns: n, rhombic_count, w2_walks, weighted_sum, oracle_count,
    /// expected, relative_error.
    Honeycomb(HoneycombArgs),
    /// Hexagon tiling sums per boundary pattern.
    ///
    /// Columns: alpha, s, n, pattern_id, pattern, sum_t1, sum_t2, diff.
    Yangbaxter(YangBaxterArgs),
    /// Dump of every walk up to a length.
    ///
    /// Columns: walk, length, monomial, weight, winding_pi, winding_theta.
    Enumerate(EnumerateArgs),
}

fn angle(s: &str) -> Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

/// Radians, or multiples of pi written like `pi/3`, `2pi/3`, `5*pi/12`, `-pi/4`.
pub fn parse_angle(s: &str) -> crate::Result<f64> {
    let t = s.trim().to_ascii_lowercase();
    let bad = || Error::Parse(format!("angle `{s}`"));
    let Some((coef, rest)) = t.split_once("pi") else {
        return t.parse::<f64>().map_err(|_| bad());
    };
    let coef = coef.trim().trim_end_matches('*').trim();
    let c = match coef {
        "" => 1.0,
        "-" => -1.0,
        _ => coef.parse::<f64>().map_err(|_| bad())?,
    };
    let rest = rest.trim();
    let d = if rest.is_empty() {
        1.0
    } else {
        rest.strip_prefix('/').ok_or_else(bad)?.trim().parse::<f64>().map_err(|_| bad())?
    };
    if d == 0.0 {
        return Err(bad());
    }
    Ok(c * std::f64::consts::PI / d)
}

fn default_grid() -> Vec<f64> {
    LatticeAngle::grid(5).into_iter().map(LatticeAngle::radians).collect()
}

#[derive(Args, Debug, Serialize)]
pub struct WeightsArgs {
    #[arg(long, value_parser = angle)]
    pub theta: f64,
    /// Print one family; all four when omitted.
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    #[arg(long, default_value_t = 0.625)]
    pub sigma: f64,
    /// O(n) parameter.
    #[arg(long, default_value_t = -0.375, allow_negative_numbers = true)]
    pub s: f64,
    /// Free parameter of the sigma = 1 family.
    #[arg(long, default_value_t = 0.5)]
    pub u1: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyLocalArgs {
    /// Number of equally spaced angles in [pi/3, 2pi/3].
    #[arg(long, default_value_t = 13)]
    pub points: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.625")]
    pub sigma: Vec<f64>,
    /// Parameters of the sigma = 1 family.
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75")]
    pub u1: Vec<f64>,
    /// Tolerance relative to the largest weight (at least 1).
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct SolveSystemArgs {
    #[arg(long, value_parser = angle, default_value = "pi/2")]
    pub theta: f64,
    #[arg(long, value_delimiter = ',', default_value = "0.375,0.625,0.875,1")]
    pub sigma: Vec<f64>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyCrArgs {
    /// Angles; defaults to five points from pi/3 to 2pi/3.
    #[arg(long, value_parser = angle, value_delimiter = ',')]
    pub theta: Vec<f64>,
    #[arg(long, default_value_t = 2)]
    pub width: i32,
    #[arg(long, default_value_t = 2)]
    pub height: i32,
    #[arg(long, value_enum, default_value_t = FamilyArg::Critical)]
    pub family: FamilyArg,
    #[arg(long, default_value_t = 0.625)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.5)]
    pub u1: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct ParallelogramArgs {
    #[arg(long, value_parser = angle, value_delimiter = ',')]
    pub theta: Vec<f64>,
    /// Width; with `--L` selects a single domain.
    #[arg(long = "T")]
    pub t: Option<u32>,
    /// Half height: the domain has 2L+1 rows.
    #[arg(long = "L")]
    pub l: Option<u32>,
    /// Grid of all (T, L) with (2L+1) T at most this.
    #[arg(long, default_value_t = 12)]
    pub max_area: u32,
    /// Identity is checked only at x = x_c.
    #[arg(long, default_value_t = 1.0)]
    pub x_over_xc: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct StripArgs {
    #[arg(long, value_parser = angle, default_value = "pi/2")]
    pub theta: f64,
    #[arg(long = "T", value_delimiter = ',', default_value = "1,2,3")]
    pub t: Vec<u32>,
    /// Largest L; defaults to 8, 5, 4 for T = 1, 2, 3 and 2 beyond.
    #[arg(long)]
    pub l_max: Option<u32>,
    /// Sub-critical fugacity for the decay check.
    #[arg(long, default_value_t = 0.8)]
    pub x_over_xc: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct SeriesArgs {
    #[arg(long, value_parser = angle, default_value = "pi/2")]
    pub theta: f64,
    /// Lengths of theta-arcs, (pi - theta)-arcs and straights.
    #[arg(long, default_value = "1,1,1")]
    #[serde(serialize_with = "display")]
    pub rule: LengthRule,
    #[arg(long, default_value_t = 12)]
    pub n_max: u32,
    #[arg(long, value_enum, default_value_t = OriginArg::H)]
    pub origin: OriginArg,
}

#[derive(Args, Debug, Serialize)]
pub struct HoneycombArgs {
    #[arg(long, default_value_t = 10)]
    pub n_max: u32,
}

#[derive(Args, Debug, Serialize)]
pub struct YangBaxterArgs {
    /// Hexagon angles; defaults to pi/5, pi/4, 3pi/10, pi/3, 2pi/5.
    #[arg(long, value_parser = angle, value_delimiter = ',')]
    pub alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_value = "-0.375,-0.5,-0.75")]
    pub s: Vec<f64>,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct EnumerateArgs {
    #[arg(long, value_parser = angle, default_value = "pi/2")]
    pub theta: f64,
    #[arg(long, default_value_t = 4)]
    pub n_max: u32,
    #[arg(long, default_value = "1,1,1")]
    #[serde(serialize_with = "display")]
    pub rule: LengthRule,
    #[arg(long, value_enum, default_value_t = OriginArg::H)]
    pub origin: OriginArg,
}

fn display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Output of one subcommand.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(csv_field)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 fields")
    }

    pub fn to_json(&self, meta: Value) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect()))
            .collect();
        let mut s = serde_json::to_string_pretty(&json!({ "meta": meta, "rows": rows })).expect("values serialize");
        s.push('\n');
        s
    }
}

fn csv_field(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn num(x: f64) -> Value {
    json!(x)
}

/// A computed table together with the checks that failed.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub table: Table,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl Outcome {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

/// Runs the selected subcommand, honouring `--threads`.
pub fn run(cli: &Cli) -> crate::Result<Outcome> {
    match cli.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Parse(format!("thread pool: {e}")))?;
            pool.install(|| dispatch(&cli.command))
        }
        None => dispatch(&cli.command),
    }
}

fn dispatch(cmd: &Command) -> crate::Result<Outcome> {
    match cmd {
        Command::Weights(a) => weights_cmd(a),
        Command::VerifyLocal(a) => verify_local_cmd(a),
        Command::SolveSystem(a) => solve_system_cmd(a),
        Command::VerifyCr(a) => verify_cr_cmd(a),
        Command::Parallelogram(a) => parallelogram_cmd(a),
        Command::Strip(a) => strip_cmd(a),
        Command::Series(a) => series_cmd(a),
        Command::Honeycomb(a) => honeycomb_cmd(a),
        Command::Yangbaxter(a) => yangbaxter_cmd(a),
        Command::Enumerate(a) => enumerate_cmd(a),
    }
}

fn weight_scale(w: &WeightSet) -> f64 {
    w.as_array().iter().fold(1.0f64, |m, x| m.max(x.abs()))
}

fn family_weights(family: FamilyArg, theta: LatticeAngle, sigma: f64, s: f64, u1: f64) -> crate::Result<(WeightSet, f64, Option<f64>)> {
    Ok(match family {
        FamilyArg::Critical => (critical_weights(theta), 0.625, Some(0.625)),
        FamilyArg::Sigma => (sigma_weights(theta, sigma)?, sigma, Some(sigma)),
        FamilyArg::SigmaOne => {
            if !(0.0..=1.0).contains(&u1) {
                return Err(Error::Parse(format!("u1 = {u1} must lie in [0, 1]")));
            }
            (sigma_one_family(u1), u1, Some(1.0))
        }
        FamilyArg::On => {
            let (w, _) = on_weights(theta, s)?;
            (w, s, None)
        }
    })
}

fn family_name(f: FamilyArg) -> &'static str {
    match f {
        FamilyArg::Critical => "critical",
        FamilyArg::Sigma => "sigma",
        FamilyArg::SigmaOne => "sigma-one",
        FamilyArg::On => "on",
    }
}

fn weights_cmd(a: &WeightsArgs) -> crate::Result<Outcome> {
    let theta = LatticeAngle::new(a.theta)?;
    let families = match a.family {
        Some(f) => vec![f],
        None => vec![FamilyArg::Critical, FamilyArg::Sigma, FamilyArg::SigmaOne, FamilyArg::On],
    };
    let mut out = Outcome {
        table: Table::new(&[
            "family", "theta", "parameter", "u1", "u2", "v", "w1", "w2", "inv_u1", "local_residual", "u1sq_ge_w1", "u2sq_ge_w2",
        ]),
        ..Default::default()
    };
    for f in families {
        let (w, param, spin) = family_weights(f, theta, a.sigma, a.s, a.u1)?;
        let residual = spin.map(|sg| local_residuals(&w, sg, theta).max_abs());
        let (i1, i2) = w.inequalities();
        if let Some(r) = residual {
            out.check(r < 1e-10 * weight_scale(&w), || format!("{} weights: local residual {r:e}", family_name(f)));
        }
        out.table.push(vec![
            json!(family_name(f)),
            num(theta.radians()),
            num(param),
            num(w.u1),
            num(w.u2),
            num(w.v),
            num(w.w1),
            num(w.w2),
            num(1.0 / w.u1),
            residual.map_or(Value::Null, num),
            json!(i1),
            json!(i2),
        ]);
    }
    Ok(out)
}

fn verify_local_cmd(a: &VerifyLocalArgs) -> crate::Result<Outcome> {
    if a.points < 2 {
        return Err(Error::Parse("--points must be at least 2".into()));
    }
    let mut out = Outcome { table: Table::new(&["theta", "family", "parameter", "residual", "pass"]), ..Default::default() };
    for theta in LatticeAngle::grid(a.points) {
        let mut cases: Vec<(&str, f64, WeightSet, f64)> = Vec::new();
        for &sg in &a.sigma {
            cases.push(("sigma", sg, sigma_weights(theta, sg)?, sg));
        }
        for &u in &a.u1 {
            cases.push(("sigma-one", u, sigma_one_family(u), 1.0));
        }
        for (name, param, w, spin) in cases {
            let r = local_residuals(&w, spin, theta).max_abs();
            let pass = r < a.tol * weight_scale(&w);
            out.check(pass, || format!("theta={} {name}({param}): residual {r:e}", theta.radians()));
            out.table.push(vec![num(theta.radians()), json!(name), num(param), num(r), json!(pass)]);
        }
    }
    Ok(out)
}

fn solve_system_cmd(a: &SolveSystemArgs) -> crate::Result<Outcome> {
    let theta = LatticeAngle::new(a.theta)?;
    let mut out = Outcome {
        table: Table::new(&[
            "theta", "sigma", "rank", "nullity", "residual_norm", "u1", "u2", "v", "w1", "w2", "formula_diff", "v_zero_residual",
        ]),
        ..Default::default()
    };
    for &sg in &a.sigma {
        let sol = solve_local_system(sg, theta);
        let formula = if (sg - 1.0).abs() < 1e-12 || spin_eighths(sg).is_none() {
            None
        } else {
            Some(sigma_weights(theta, sg)?)
        };
        let diff = match (&formula, &sol.solution) {
            (Some(f), Some(x)) => Some(f.max_abs_diff(&WeightSet::custom(*x))),
            _ => None,
        };
        if (sg - 1.0).abs() < 1e-12 {
            out.check(sol.nullity() == 1, || format!("sigma=1: expected a one-dimensional family, nullity {}", sol.nullity()));
        } else if formula.is_some() {
            out.check(diff.is_some_and(|d| d < a.tol), || format!("sigma={sg}: solver does not reproduce the closed form ({diff:?})"));
        }
        let ls = sol.least_squares;
        out.table.push(vec![
            num(theta.radians()),
            num(sg),
            json!(sol.rank),
            json!(sol.nullity()),
            num(sol.residual_norm),
            num(ls[0]),
            num(ls[1]),
            num(ls[2]),
            num(ls[3]),
            num(ls[4]),
            diff.map_or(Value::Null, num),
            num(sol.v_zero_residual),
        ]);
    }
    Ok(out)
}

fn thetas(list: &[f64]) -> crate::Result<Vec<LatticeAngle>> {
    let raw = if list.is_empty() { default_grid() } else { list.to_vec() };
    raw.into_iter().map(LatticeAngle::new).collect()
}

fn verify_cr_cmd(a: &VerifyCrArgs) -> crate::Result<Outcome> {
    let domain = ParallelogramDomain::new(a.width, 0, a.height - 1)?;
    let mut out = Outcome { table: Table::new(&["theta", "i", "j", "re", "im", "abs"]), ..Default::default() };
    for theta in thetas(&a.theta)? {
        let (w, _, spin) = family_weights(a.family, theta, a.sigma, -0.375, a.u1)?;
        let spin = spin.ok_or_else(|| Error::Parse("the loop family has no walk observable; use yangbaxter".into()))?;
        let table = observable(domain, theta, spin, &w)?;
        for r in domain.rhombi() {
            let c = cr_residual(&table, r)?;
            out.table.push(vec![num(theta.radians()), json!(r.i), json!(r.j), num(c.re), num(c.im), num(c.norm())]);
        }
        let worst = max_cr_residual(&table);
        out.check(worst < a.tol, || format!("theta={}: max residual {worst:e}", theta.radians()));
    }
    Ok(out)
}

fn parallelogram_cmd(a: &ParallelogramArgs) -> crate::Result<Outcome> {
    let pairs: Vec<(u32, u32)> = match (a.t, a.l) {
        (Some(t), Some(l)) => vec![(t, l)],
        (None, None) => {
            let mut v = Vec::new();
            for t in 1..=a.max_area {
                for l in 0.. {
                    if (2 * l + 1) * t > a.max_area {
                        break;
                    }
                    v.push((t, l));
                }
            }
            v
        }
        _ => return Err(Error::Parse("--T and --L must be given together".into())),
    };
    let mut out = Outcome {
        table: Table::new(&["T", "L", "theta", "x", "A", "B", "D", "E", "residual13"]),
        ..Default::default()
    };
    let critical = (a.x_over_xc - 1.0).abs() < 1e-15;
    for theta in thetas(&a.theta)? {
        let x = a.x_over_xc * critical_weights(theta).u1;
        for &(t, l) in &pairs {
            let s = strip_sums(t, l, x, theta)?;
            let r = s.identity_defect(theta).abs();
            if critical {
                out.check(r < a.tol, || format!("theta={} T={t} L={l}: residual {r:e}", theta.radians()));
            }
            out.table.push(vec![
                json!(t),
                json!(l),
                num(theta.radians()),
                num(x),
                num(s.a),
                num(s.b),
                num(s.d),
                num(s.e),
                num(r),
            ]);
        }
    }
    Ok(out)
}

/// Default truncation depth of the strip checks.
pub fn default_l_max(t: u32) -> u32 {
    match t {
        1 => 8,
        2 => 5,
        3 => 4,
        _ => 2,
    }
}

fn strip_cmd(a: &StripArgs) -> crate::Result<Outcome> {
    let theta = LatticeAngle::new(a.theta)?;
    if a.t.is_empty() || a.t.contains(&0) {
        return Err(Error::Parse("--T needs positive widths".into()));
    }
    if !(0.0..=1.0).contains(&a.x_over_xc) {
        return Err(Error::Parse("--x-over-xc must lie in [0, 1]".into()));
    }
    let xc = critical_weights(theta).u1;
    let mut out = Outcome {
        table: Table::new(&["T", "L", "A", "B", "D", "E", "edge_sum", "tail_margin", "A_x", "B_x"]),
        ..Default::default()
    };
    for &t in &a.t {
        let l_max = a.l_max.unwrap_or_else(|| default_l_max(t));
        let lim = strip_limits(t, a.x_over_xc * xc, theta, l_max)?;
        for (k, (c, s)) in lim.critical_rows.iter().zip(&lim.rows).enumerate() {
            out.table.push(vec![
                json!(t),
                json!(c.l),
                num(c.a),
                num(c.b),
                num(c.d),
                num(c.e),
                num(c.edge_sum()),
                lim.tail_margins.get(k).copied().map_or(Value::Null, num),
                num(s.a),
                num(s.b),
            ]);
        }
        out.check(lim.tail_strictly_decreasing(), || format!("T={t}: E + D is not strictly decreasing in L"));
        out.check(lim.tail_inequality_holds(), || format!("T={t}: A_(L+1) - A_L < c_T (E_L + D_L) somewhere"));
        out.check(lim.monotone_in_l(), || format!("T={t}: A or B decreases in L"));
        out.notes.push(format!("T={t}: c_alpha A + B = 1 up to {:.3e} at L={l_max}", lim.truncation_bound));
    }
    let t_max = *a.t.iter().max().expect("non-empty");
    let l_common = (1..=t_max).map(|t| a.l_max.unwrap_or_else(|| default_l_max(t))).min().expect("t_max >= 1");
    let bridges = bridge_chain_check(theta, t_max, l_common, a.x_over_xc)?;
    out.notes.push(format!("bridges at L={l_common}: B_T = {:?}, c = {}", bridges.b, bridges.c));
    out.check(bridges.harmonic_bound_holds(), || format!("B_T < min(B_1, c)/T: margins {:?}", bridges.harmonic_margins));
    out.check(bridges.recursion_bound_holds(), || format!("bridge recursion fails: margins {:?}", bridges.recursion_margins));
    out.check(bridges.decay_holds(), || format!("B_T(x) > (x/x_c)^T: margins {:?}", bridges.decay_margins));
    Ok(out)
}

fn series_cmd(a: &SeriesArgs) -> crate::Result<Outcome> {
    let theta = LatticeAngle::new(a.theta)?;
    let r = series_report_from(a.origin.mid_edge(), theta, a.rule, a.n_max)?;
    let mut out = Outcome {
        table: Table::new(&["n", "c_tilde", "root_estimate", "ratio_estimate", "lower_bracket", "upper_bracket", "target"]),
        ..Default::default()
    };
    let upper = r.upper_bracket();
    for (n, &c) in r.c_tilde.iter().enumerate() {
        let opt = |v: Option<f64>| v.map_or(Value::Null, num);
        out.table.push(vec![
            json!(n),
            num(c),
            opt((n > 0).then(|| r.root_estimates[n - 1])),
            opt((n > 0).then(|| r.ratio_estimates[n - 1])),
            opt((n > 0).then(|| r.lower_bracket(n))),
            opt(upper.filter(|_| n > 0)),
            num(r.target),
        ]);
    }
    out.check(r.lower_bound_holds(), || "c~_n falls below the theta-arc/straight lower bound".into());
    out.check(r.roots_bracketed(), || "a root estimate leaves its bracket".into());
    if a.rule.is_unit() {
        out.check(r.submultiplicative(), || "c~_n is not submultiplicative".into());
    }
    Ok(out)
}

fn honeycomb_cmd(a: &HoneycombArgs) -> crate::Result<Outcome> {
    let r = honeycomb_crosscheck(a.n_max)?;
    let mut out = Outcome {
        table: Table::new(&["n", "rhombic_count", "w2_walks", "weighted_sum", "oracle_count", "expected", "relative_error"]),
        ..Default::default()
    };
    for row in &r.rows {
        out.table.push(vec![
            json!(row.n),
            json!(row.rhombic_count),
            json!(row.w2_walks),
            num(row.weighted_sum),
            json!(row.oracle_count),
            num(row.expected),
            num(row.relative_error()),
        ]);
    }
    out.check(r.counts_match(), || "walk counts differ from the honeycomb oracle".into());
    out.check(r.max_relative_error() < 1e-12, || format!("weighted sums off by {:e}", r.max_relative_error()));
    out.check(r.images_valid(), || format!("{} bad images, {} w2 walks with valid images", r.bad_images, r.w2_with_valid_image));
    Ok(out)
}

fn yangbaxter_cmd(a: &YangBaxterArgs) -> crate::Result<Outcome> {
    let alphas = if a.alpha.is_empty() {
        [5.0, 4.0, 10.0 / 3.0, 3.0, 2.5].iter().map(|d| std::f64::consts::PI / d).collect()
    } else {
        a.alpha.clone()
    };
    let mut out = Outcome {
        table: Table::new(&["alpha", "s", "n", "pattern_id", "pattern", "sum_t1", "sum_t2", "diff"]),
        ..Default::default()
    };
    for &alpha in &alphas {
        if !(alpha > 0.0 && 2.0 * alpha < std::f64::consts::PI) {
            return Err(Error::Parse(format!("alpha = {alpha} must lie in (0, pi/2)")));
        }
        for &s in &a.s {
            let rep = yang_baxter_report(alpha, s)?;
            for (k, row) in rep.rows.iter().enumerate() {
                out.table.push(vec![
                    num(alpha),
                    num(s),
                    num(rep.n),
                    json!(k),
                    json!(row.pattern.to_string()),
                    num(row.sum_t1),
                    num(row.sum_t2),
                    num(row.diff()),
                ]);
            }
            let worst = rep.max_residual();
            out.check(worst < a.tol, || format!("alpha={alpha} s={s}: residual {worst:e}"));
        }
    }
    Ok(out)
}

fn enumerate_cmd(a: &EnumerateArgs) -> crate::Result<Outcome> {
    let theta = LatticeAngle::new(a.theta)?;
    let w = critical_weights(theta);
    let mut out = Outcome {
        table: Table::new(&["walk", "length", "monomial", "weight", "winding_pi", "winding_theta"]),
        ..Default::default()
    };
    enumerate_walks(a.origin.mid_edge(), a.n_max, a.rule, None, |v| {
        let walk = v.to_walk();
        let wind = v.winding();
        out.table.push(vec![
            json!(walk.to_dump()),
            json!(v.length()),
            json!(v.monomial().to_string()),
            num(v.monomial().eval(&w)),
            json!(wind.pi),
            json!(wind.theta),
        ]);
    })?;
    Ok(out)
}

/// Renders the table in the requested format.
pub fn render(cli: &Cli, outcome: &Outcome) -> String {
    match cli.format {
        Format::Csv => outcome.table.to_csv(),
        Format::Json => {
            let meta = json!({
                "version": env!("CARGO_PKG_VERSION"),
                "config": serde_json::to_value(cli).expect("config serializes"),
                "failures": outcome.failures,
            });
            outcome.table.to_json(meta)
        }
    }
}

/// Entry point for the binary.
pub fn main_with_args(args: impl IntoIterator<Item = std::ffi::OsString>) -> ExitCode {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = render(&cli, &outcome);
    let written = match &cli.output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    for n in &outcome.notes {
        eprintln!("{n}");
    }
    if outcome.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        for f in &outcome.failures {
            eprintln!("FAIL: {f}");
        }
        ExitCode::from(1)
    }
}
