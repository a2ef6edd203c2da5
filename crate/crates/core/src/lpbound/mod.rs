//! Numerical Cohn–Elkies linear-programming bound for sphere packing.
//!
//! Candidates are radial functions `f(r) = Σ c_j L_j^{(d/2−1)}(2πr²) e^{−πr²}`.
//! Each basis function is a Fourier eigenfunction with eigenvalue `(−1)^j`, so
//! `f̂` has coefficients `(−1)^j c_j` and the Cohn–Elkies conditions become
//! linear in `c`. They are imposed on sample grids, the LP is solved by a
//! dense simplex, sample points are added at violation maxima until the
//! candidate is clean, and a separate verification pass re-checks it.

pub mod simplex;

use crate::error::{invalid, Error, Result};
use crate::lattices::ball_volume;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use simplex::{revised, tableau, StandardLp};
use std::f64::consts::PI;

pub use simplex::LpStatus;

pub const MAX_DEGREE: usize = 60;
pub const MAX_LAGUERRE_INDEX: usize = 200;
/// Verification threshold relative to `‖c‖∞`.
pub const VIOLATION_TOLERANCE: f64 = 1e-9;
const EXCHANGE_ROUNDS: usize = 40;
/// Margin η on sampled sign constraints, relative to the normalisation f̂(0) = 1.
pub const SAMPLE_MARGIN: f64 = 1e-10;
/// Violations below this (relative to ‖c‖∞) are at the level of evaluation rounding.
const ROUNDING_FLOOR: f64 = 1e-14;

/// Generalized Laguerre polynomial `L_j^{(α)}(x)` by the three-term recurrence.
pub fn laguerre(j: usize, alpha: f64, x: f64) -> Result<f64> {
    if j > MAX_LAGUERRE_INDEX {
        return Err(invalid(format!("Laguerre index {j} exceeds {MAX_LAGUERRE_INDEX}")));
    }
    if !(alpha > -1.0) {
        return Err(invalid("Laguerre parameter must exceed -1"));
    }
    Ok(*laguerre_run(j, alpha, x, 1.0).last().expect("non-empty"))
}

/// `scale · L_k^{(α)}(x)` for `k = 0..=j`.
fn laguerre_run(j: usize, alpha: f64, x: f64, scale: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(j + 1);
    out.push(scale);
    if j >= 1 {
        out.push(scale * (1.0 + alpha - x));
    }
    for k in 1..j {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * out[k] - (kf + alpha) * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

/// Basis values `f_j(r)` for `j = 0..=degree`; the Gaussian is folded into the
/// starting values so large arguments underflow to zero instead of overflowing.
pub fn basis_values(dim: usize, degree: usize, r: f64) -> Vec<f64> {
    let x = 2.0 * PI * r * r;
    laguerre_run(degree, alpha(dim), x, (-x / 2.0).exp())
}

fn alpha(dim: usize) -> f64 {
    dim as f64 / 2.0 - 1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialFunction {
    pub dim: usize,
    pub degree: usize,
    pub coeffs: Vec<f64>,
}

impl RadialFunction {
    pub fn new(dim: usize, coeffs: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dimension must be positive"));
        }
        if coeffs.is_empty() {
            return Err(invalid("a radial function needs at least one coefficient"));
        }
        Ok(Self {
            dim,
            degree: coeffs.len() - 1,
            coeffs,
        })
    }

    pub fn eval(&self, r: f64) -> f64 {
        dot(&self.coeffs, &basis_values(self.dim, self.degree, r))
    }

    /// Fourier transform in the unitary convention `f̂(ξ) = ∫ f(x) e^{−2πi⟨x,ξ⟩} dx`.
    pub fn eval_hat(&self, s: f64) -> f64 {
        basis_values(self.dim, self.degree, s)
            .iter()
            .zip(&self.coeffs)
            .enumerate()
            .map(|(j, (b, c))| if j % 2 == 0 { b * c } else { -b * c })
            .sum()
    }

    pub fn fourier(&self) -> RadialFunction {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| if j % 2 == 0 { *c } else { -*c })
            .collect();
        RadialFunction { coeffs, ..self.clone() }
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Sampled Cohn–Elkies LP: minimise `objective · c` subject to
/// `equality · c = 1` and `rows[i] · c ≤ rhs[i]`.
///
/// Sample constraints carry a small margin (`rhs = −η·e^{−πr²}`) so that a
/// candidate meeting them is strictly feasible, not just feasible to rounding.
#[derive(Clone, Debug, PartialEq)]
pub struct LpInstance {
    pub dim: usize,
    pub degree: usize,
    pub r0: f64,
    pub r_max: f64,
    pub s_max: f64,
    pub sign_radii: Vec<f64>,
    pub pos_radii: Vec<f64>,
    pub objective: Vec<f64>,
    pub equality: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
}

impl LpInstance {
    pub fn variables(&self) -> usize {
        self.degree + 1
    }

    pub fn inequality_rows(&self) -> usize {
        self.rows.len()
    }

    /// Instance over explicit sample radii (sign points must lie at or beyond `r0`).
    pub fn from_points(
        dim: usize,
        degree: usize,
        r0: f64,
        (r_max, s_max): (f64, f64),
        sign_radii: Vec<f64>,
        pos_radii: Vec<f64>,
    ) -> Result<Self> {
        if dim == 0 || dim > 48 {
            return Err(invalid("dimension must lie in 1..=48"));
        }
        if !(4..=MAX_DEGREE).contains(&degree) {
            return Err(invalid(format!("degree must lie in 4..={MAX_DEGREE}")));
        }
        if !(r0 > 0.0) || !(r0 < r_max) || !(s_max > 0.0) {
            return Err(invalid("need 0 < r0 < R_max and S_max > 0"));
        }
        if sign_radii.iter().any(|&r| r < r0 * (1.0 - 1e-12)) {
            return Err(invalid("sign sample inside r0"));
        }
        let zero = basis_values(dim, degree, 0.0);
        let equality: Vec<f64> = flip(&zero);
        let mut rows: Vec<Vec<f64>> = sign_radii.par_iter().map(|&r| basis_values(dim, degree, r)).collect();
        let pos: Vec<Vec<f64>> = pos_radii
            .par_iter()
            .map(|&s| flip(&basis_values(dim, degree, s)).iter().map(|v| -v).collect())
            .collect();
        rows.extend(pos);
        let mut rhs: Vec<f64> = sign_radii
            .iter()
            .chain(&pos_radii)
            .map(|r| -SAMPLE_MARGIN * (-PI * r * r).exp())
            .collect();
        rhs.extend([0.0, 0.0]);
        // Leading x-power of f is c_D(−1)^D/D! (must be ≤ 0); of f̂ it is c_D/D! (must be ≥ 0).
        let mut top_f = vec![0.0; degree + 1];
        top_f[degree] = if degree.is_multiple_of(2) { 1.0 } else { -1.0 };
        let mut top_hat = vec![0.0; degree + 1];
        top_hat[degree] = -1.0;
        rows.push(top_f);
        rows.push(top_hat);
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Lp("non-finite constraint entry".into()));
        }
        Ok(Self {
            dim,
            degree,
            r0,
            r_max,
            s_max,
            sign_radii,
            pos_radii,
            objective: zero,
            equality,
            rows,
            rhs,
        })
    }

    fn with_extra_points(&self, sign: &[f64], pos: &[f64]) -> Result<Self> {
        let mut sign_radii = self.sign_radii.clone();
        sign_radii.extend_from_slice(sign);
        let mut pos_radii = self.pos_radii.clone();
        pos_radii.extend_from_slice(pos);
        Self::from_points(self.dim, self.degree, self.r0, (self.r_max, self.s_max), sign_radii, pos_radii)
    }
}

fn flip(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .enumerate()
        .map(|(j, v)| if j % 2 == 0 { *v } else { -*v })
        .collect()
}

/// Points uniform in `r²` on `[lo², hi²]`.
fn square_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo * lo, hi * hi);
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).sqrt())
        .collect()
}

pub fn build_lp(
    dim: usize,
    degree: usize,
    r0: f64,
    n_sign: usize,
    n_pos: usize,
    r_max: f64,
    s_max: f64,
) -> Result<LpInstance> {
    if n_sign < 10 || n_pos < 10 {
        return Err(invalid("sample grids need at least 10 points"));
    }
    if !(r0 < r_max) {
        return Err(invalid("r0 must be below R_max"));
    }
    LpInstance::from_points(
        dim,
        degree,
        r0,
        (r_max, s_max),
        square_grid(r0, r_max, n_sign),
        square_grid(0.0, s_max, n_pos),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    #[default]
    Revised,
    Tableau,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpResult {
    pub status: LpStatus,
    pub r0: f64,
    pub r_max: f64,
    pub s_max: f64,
    /// `f(0)/f̂(0)·vol(B_{r0/2})`, present only for an optimal, verified candidate.
    pub bound_density: Option<f64>,
    pub coeffs: RadialFunction,
    /// Worst sign violation relative to `‖c‖∞`.
    pub max_violation: f64,
    pub iterations: usize,
}

impl LpResult {
    pub fn f0(&self) -> f64 {
        self.coeffs.eval(0.0)
    }

    /// The bound implied by the candidate whether or not it verified.
    pub fn candidate_bound(&self) -> f64 {
        self.coeffs.eval(0.0) / self.coeffs.eval_hat(0.0) * ball_volume(self.coeffs.dim, self.r0 / 2.0)
    }
}

struct RawSolution {
    status: LpStatus,
    coeffs: Vec<f64>,
    iterations: usize,
}

/// Solves the instance through its dual, which has only `D + 1` rows, and
/// reads `c` off the simplex multipliers.
fn solve_raw(lp: &LpInstance, solver: Solver, max_iter: usize) -> Result<RawSolution> {
    let n = lp.variables();
    // Column equilibration of the primal (variable scaling c = S c').
    let mut col_scale = vec![0.0f64; n];
    for row in lp.rows.iter().chain([&lp.objective, &lp.equality]) {
        for (s, v) in col_scale.iter_mut().zip(row) {
            *s = s.max(v.abs());
        }
    }
    let col_scale: Vec<f64> = col_scale.iter().map(|&s| if s > 0.0 { 1.0 / s } else { 1.0 }).collect();
    let scaled = |row: &[f64]| -> Vec<f64> { row.iter().zip(&col_scale).map(|(v, s)| v * s).collect() };
    // Row equilibration.
    let (rows, rhs): (Vec<Vec<f64>>, Vec<f64>) = lp
        .rows
        .iter()
        .zip(&lp.rhs)
        .filter_map(|(r, &b)| {
            let r = scaled(r);
            let m = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            (m > 0.0).then(|| (r.iter().map(|v| v / m).collect(), b / m))
        })
        .unzip();
    let objective = scaled(&lp.objective);
    let equality = scaled(&lp.equality);

    // Dual: max t − Σ λ_i b_i  s.t.  Σ λ_i row_i − t·h = −p,  λ ≥ 0, t = t⁺ − t⁻.
    let a: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut r: Vec<f64> = rows.iter().map(|row| row[j]).collect();
            r.push(-equality[j]);
            r.push(equality[j]);
            r
        })
        .collect();
    let b: Vec<f64> = objective.iter().map(|p| -p).collect();
    let mut c = rhs;
    c.push(-1.0);
    c.push(1.0);
    let standard = StandardLp::new(a, b, c)?;
    let sol = match solver {
        Solver::Revised => revised::solve(&standard, max_iter),
        Solver::Tableau => tableau::solve(&standard, max_iter),
    };
    let status = match sol.status {
        LpStatus::Optimal => LpStatus::Optimal,
        LpStatus::Unbounded => LpStatus::Infeasible,
        LpStatus::Infeasible => LpStatus::Unbounded,
        LpStatus::IterationLimit => LpStatus::IterationLimit,
    };
    let coeffs = sol.duals.iter().zip(&col_scale).map(|(y, s)| y * s).collect();
    Ok(RawSolution {
        status,
        coeffs,
        iterations: sol.iterations,
    })
}

fn result_from(lp: &LpInstance, raw: RawSolution, refine: usize) -> Result<LpResult> {
    let coeffs = RadialFunction::new(lp.dim, raw.coeffs)?;
    let mut result = LpResult {
        status: raw.status,
        r0: lp.r0,
        r_max: lp.r_max,
        s_max: lp.s_max,
        bound_density: None,
        coeffs,
        max_violation: f64::INFINITY,
        iterations: raw.iterations,
    };
    if result.status == LpStatus::Optimal {
        let report = verify_solution(&result, refine, lp.sign_radii.len().max(lp.pos_radii.len()))?;
        result.max_violation = report.max_violation;
        if report.passes {
            result.bound_density = Some(result.candidate_bound());
        }
    }
    Ok(result)
}

/// Solves one instance with the default solver and verifies the optimum.
pub fn simplex_solve(lp: &LpInstance, max_iter: usize) -> Result<LpResult> {
    solve_with(lp, Solver::Revised, max_iter)
}

pub fn solve_with(lp: &LpInstance, solver: Solver, max_iter: usize) -> Result<LpResult> {
    let raw = solve_raw(lp, solver, max_iter)?;
    result_from(lp, raw, 4)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    /// Worst violation divided by `‖c‖∞`.
    pub max_violation: f64,
    pub absolute: f64,
    /// Radius at which the worst violation occurs, if any.
    pub worst_at: Option<f64>,
    pub in_fourier_side: bool,
    pub threshold: f64,
    pub passes: bool,
}

/// Re-evaluates `f` on `[r0, 10·R_max]` and `f̂` on `[0, 10·S_max]` with
/// `refine × base_points` samples per original range; every sampled local
/// maximum of the violation is then polished by golden-section search.
pub fn verify_solution(res: &LpResult, refine: usize, base_points: usize) -> Result<ViolationReport> {
    if refine < 4 {
        return Err(invalid("verification refinement must be at least 4"));
    }
    let n = refine * base_points.max(10);
    let f = &res.coeffs;
    let hat = f.fourier();
    let sign = |r: f64| f.eval(r);
    let pos = |s: f64| -hat.eval(s);
    let mut worst = (0.0f64, None, false);
    let segments: [(&dyn Fn(f64) -> f64, f64, f64, bool); 4] = [
        (&sign, res.r0, res.r_max, false),
        (&sign, res.r_max, 10.0 * res.r_max, false),
        (&pos, 0.0, res.s_max, true),
        (&pos, res.s_max, 10.0 * res.s_max, true),
    ];
    for (g, lo, hi, fourier_side) in segments {
        for (r, v) in violation_peaks(g, lo, hi, n) {
            if v > worst.0 {
                worst = (v, Some(r), fourier_side);
            }
        }
    }
    let norm = f.max_coeff();
    let relative = if norm > 0.0 { worst.0 / norm } else { f64::INFINITY };
    Ok(ViolationReport {
        max_violation: relative,
        absolute: worst.0,
        worst_at: worst.1,
        in_fourier_side: worst.2,
        threshold: VIOLATION_TOLERANCE,
        passes: relative <= VIOLATION_TOLERANCE,
    })
}

/// Every sampled local maximum of `g(√x)` over `x ∈ [lo², hi²]`, polished by
/// golden-section search, as `(radius, value)`. NaN counts as `+∞`.
fn violation_peaks(g: &dyn Fn(f64) -> f64, lo: f64, hi: f64, samples: usize) -> Vec<(f64, f64)> {
    let (a, b) = (lo * lo, hi * hi);
    let h = (b - a) / (samples - 1) as f64;
    let at = |x: f64| {
        let v = g(x.clamp(a, b).sqrt());
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let values: Vec<f64> = (0..samples).map(|i| at(a + h * i as f64)).collect();
    let mut peaks = Vec::new();
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    for i in 0..samples {
        let left = if i == 0 { f64::NEG_INFINITY } else { values[i - 1] };
        let right = if i + 1 == samples { f64::NEG_INFINITY } else { values[i + 1] };
        if values[i] < left || values[i] <= right {
            continue;
        }
        let mut x0 = (a + h * (i as f64 - 1.0)).max(a);
        let mut x1 = (a + h * (i as f64 + 1.0)).min(b);
        for _ in 0..60 {
            let m0 = x1 - ratio * (x1 - x0);
            let m1 = x0 + ratio * (x1 - x0);
            if at(m0) >= at(m1) {
                x1 = m1;
            } else {
                x0 = m0;
            }
        }
        let x = (x0 + x1) / 2.0;
        let (x, v) = if at(x) >= values[i] { (x, at(x)) } else { (a + h * i as f64, values[i]) };
        peaks.push((x.clamp(a, b).sqrt(), v));
    }
    peaks
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpConfig {
    pub dim: usize,
    pub degree: usize,
    pub n_sign: usize,
    pub n_pos: usize,
    pub r_max: f64,
    pub s_max: f64,
    pub r0_min: f64,
    pub r0_max: f64,
    pub scan_points: usize,
    pub refine_steps: usize,
    pub max_iter: usize,
    pub verify_refine: usize,
    pub solver: Solver,
}

impl LpConfig {
    pub fn new(dim: usize, degree: usize) -> Self {
        let centre = (1.0 + dim as f64 / 8.0).sqrt();
        // Past x ≈ 4D + 2α + 2 the Laguerre polynomials stop oscillating.
        let reach = ((4.0 * degree as f64 + dim as f64 + 4.0) / (2.0 * PI)).sqrt() + 1.0;
        let range = reach.max(2.0 * centre + 1.0);
        Self {
            dim,
            degree,
            n_sign: 1000,
            n_pos: 1000,
            r_max: range,
            s_max: range,
            r0_min: 0.7 * centre,
            r0_max: 1.3 * centre,
            scan_points: 9,
            refine_steps: 20,
            max_iter: 100_000,
            verify_refine: 8,
            solver: Solver::Revised,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(1..=48).contains(&self.dim) {
            return Err(invalid("dimension must lie in 1..=48"));
        }
        if !(0.0 < self.r0_min && self.r0_min <= self.r0_max && self.r0_max < self.r_max) {
            return Err(invalid("need 0 < r0_min ≤ r0_max < R_max"));
        }
        if self.scan_points < 3 {
            return Err(invalid("the r0 scan needs at least 3 points"));
        }
        Ok(())
    }
}

/// Bound at a single `r0`: grid LP, then exchange rounds until the verified
/// violation is below tolerance.
pub fn bound_at(cfg: &LpConfig, r0: f64) -> Result<LpResult> {
    let mut lp = build_lp(cfg.dim, cfg.degree, r0, cfg.n_sign, cfg.n_pos, cfg.r_max, cfg.s_max)?;
    let mut iterations = 0;
    let samples = cfg.verify_refine * cfg.n_sign.max(cfg.n_pos);
    for _ in 0..EXCHANGE_ROUNDS {
        let raw = solve_raw(&lp, cfg.solver, cfg.max_iter)?;
        iterations += raw.iterations;
        let mut result = result_from(&lp, raw, cfg.verify_refine)?;
        result.iterations = iterations;
        if result.status != LpStatus::Optimal {
            return Ok(result);
        }
        let f = result.coeffs.clone();
        let hat = f.fourier();
        let norm = f.max_coeff();
        let peaks = |g: &dyn Fn(f64) -> f64, lo: f64, hi: f64| -> Vec<f64> {
            let mut out = violation_peaks(g, lo, hi, samples);
            out.extend(violation_peaks(g, hi, 10.0 * hi, samples));
            out.into_iter().filter(|&(_, v)| v > ROUNDING_FLOOR * norm).map(|(r, _)| r).collect()
        };
        let sign = peaks(&|r| f.eval(r), r0, cfg.r_max);
        let pos = peaks(&|s| -hat.eval(s), 0.0, cfg.s_max);
        let worst = sign
            .iter()
            .map(|&r| f.eval(r))
            .chain(pos.iter().map(|&s| -hat.eval(s)))
            .fold(f64::NEG_INFINITY, f64::max);
        if worst <= ROUNDING_FLOOR * norm && result.bound_density.is_some() {
            return Ok(result);
        }
        if sign.is_empty() && pos.is_empty() {
            return Ok(result);
        }
        lp = lp.with_extra_points(&sign, &pos)?;
    }
    let raw = solve_raw(&lp, cfg.solver, cfg.max_iter)?;
    let mut result = result_from(&lp, raw, cfg.verify_refine)?;
    result.iterations += iterations;
    Ok(result)
}

/// Grid-LP bound without exchange, used to locate the best `r0`.
fn grid_bound(cfg: &LpConfig, r0: f64) -> Option<f64> {
    let lp = build_lp(cfg.dim, cfg.degree, r0, cfg.n_sign, cfg.n_pos, cfg.r_max, cfg.s_max).ok()?;
    let raw = solve_raw(&lp, cfg.solver, cfg.max_iter).ok()?;
    if raw.status != LpStatus::Optimal {
        return None;
    }
    let f = RadialFunction::new(cfg.dim, raw.coeffs).ok()?;
    let value = f.eval(0.0) / f.eval_hat(0.0) * ball_volume(cfg.dim, r0 / 2.0);
    value.is_finite().then_some(value)
}

/// Coarse scan over `r0`, golden-section refinement around the best point,
/// then the exchange/verification pass at the minimiser.
pub fn lp_density_bound(cfg: &LpConfig) -> Result<LpResult> {
    cfg.validate()?;
    let step = (cfg.r0_max - cfg.r0_min) / (cfg.scan_points - 1) as f64;
    let coarse: Vec<(f64, Option<f64>)> = (0..cfg.scan_points)
        .into_par_iter()
        .map(|i| {
            let r0 = cfg.r0_min + step * i as f64;
            (r0, grid_bound(cfg, r0))
        })
        .collect();
    let Some(best) = (0..coarse.len())
        .filter(|&i| coarse[i].1.is_some())
        .min_by(|&a, &b| coarse[a].1.unwrap().total_cmp(&coarse[b].1.unwrap()))
    else {
        return Err(Error::Lp("every r0 in the scan was infeasible".into()));
    };
    let mut lo = if best == 0 { coarse[0].0 } else { coarse[best - 1].0 };
    let mut hi = if best + 1 == coarse.len() { coarse[best].0 } else { coarse[best + 1].0 };
    // Golden-section search on the verified bound, keeping the best verified result.
    let mut track = Tracker::default();
    let eval = |track: &mut Tracker, r0: f64| track.eval(cfg, r0);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut m0 = hi - ratio * (hi - lo);
    let mut m1 = lo + ratio * (hi - lo);
    let (mut v0, mut v1) = (eval(&mut track, m0)?, eval(&mut track, m1)?);
    for _ in 0..cfg.refine_steps {
        if v0 <= v1 {
            hi = m1;
            m1 = m0;
            v1 = v0;
            m0 = hi - ratio * (hi - lo);
            v0 = eval(&mut track, m0)?;
        } else {
            lo = m0;
            m0 = m1;
            v0 = v1;
            m1 = lo + ratio * (hi - lo);
            v1 = eval(&mut track, m1)?;
        }
    }
    if track.best.is_none() {
        let mut order: Vec<usize> = (0..coarse.len()).filter(|&i| coarse[i].1.is_some()).collect();
        order.sort_by(|&a, &b| coarse[a].1.unwrap().total_cmp(&coarse[b].1.unwrap()));
        for i in order {
            eval(&mut track, coarse[i].0)?;
            if track.best.is_some() {
                break;
            }
        }
    }
    Ok(track.best.or(track.last).expect("at least one candidate"))
}

#[derive(Default)]
struct Tracker {
    best: Option<LpResult>,
    last: Option<LpResult>,
}

impl Tracker {
    fn eval(&mut self, cfg: &LpConfig, r0: f64) -> Result<f64> {
        let result = bound_at(cfg, r0)?;
        let Some(value) = result.bound_density else {
            self.last = Some(result);
            return Ok(f64::INFINITY);
        };
        if self.best.as_ref().is_none_or(|b| b.bound_density.is_some_and(|v| value < v)) {
            self.best = Some(result);
        }
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laguerre_small_cases() {
        assert_eq!(laguerre(0, 3.0, 5.0).unwrap(), 1.0);
        assert_eq!(laguerre(1, 3.0, 2.0).unwrap(), 2.0);
        assert!(laguerre(201, 0.0, 1.0).is_err());
        assert!(laguerre(2, -1.0, 1.0).is_err());
    }

    #[test]
    fn laguerre_matches_closed_form_sum() {
        // L_j^α(x) = Σ_i (−1)^i binom(j+α, j−i) x^i / i!
        fn binom(top: f64, k: usize) -> f64 {
            (0..k).fold(1.0, |acc, i| acc * (top - i as f64) / (i as f64 + 1.0))
        }
        for &(j, a, x) in &[(5usize, 3.0f64, 1.5f64), (7, 0.5, 2.25), (10, -0.5, 4.0), (12, 7.0, 0.3)] {
            let direct: f64 = (0..=j)
                .map(|i| {
                    let fact: f64 = (1..=i).map(|k| k as f64).product();
                    (-1f64).powi(i as i32) * binom(j as f64 + a, j - i) * x.powi(i as i32) / fact
                })
                .sum();
            let rec = laguerre(j, a, x).unwrap();
            assert!((rec - direct).abs() < 1e-11 * direct.abs().max(1.0), "{j} {a} {x}");
        }
    }

    #[test]
    fn build_lp_shape() {
        let lp = build_lp(8, 20, 2f64.sqrt(), 200, 200, 8.0, 8.0).unwrap();
        assert_eq!(lp.variables(), 21);
        assert_eq!(lp.inequality_rows(), 402);
        assert_eq!(lp.objective[0], 1.0);
        assert_eq!(lp.objective[1], 4.0);
        assert!(build_lp(8, 20, 8.0, 200, 200, 8.0, 8.0).is_err());
        assert!(build_lp(8, 20, 1.0, 5, 200, 8.0, 8.0).is_err());
        assert!(build_lp(8, 3, 1.0, 50, 50, 8.0, 8.0).is_err());
    }

    #[test]
    fn fourier_flips_odd_coefficients() {
        let f = RadialFunction::new(4, vec![1.0, 2.0, -3.0, 0.5]).unwrap();
        for &s in &[0.0, 0.3, 1.1, 2.7] {
            assert!((f.eval_hat(s) - f.fourier().eval(s)).abs() < 1e-15);
        }
        assert_eq!(f.fourier().fourier(), f);
    }

    #[test]
    fn corrupted_coefficients_are_flagged() {
        let cfg = LpConfig::new(8, 12);
        let res = bound_at(&cfg, 2f64.sqrt()).unwrap();
        assert_eq!(res.status, LpStatus::Optimal);
        assert!(res.bound_density.is_some());
        let mut bad = res.clone();
        bad.coeffs.coeffs[0] -= 1e-3 * bad.coeffs.max_coeff();
        let report = verify_solution(&bad, 4, 1000).unwrap();
        assert!(!report.passes);
        assert!(verify_solution(&res, 3, 1000).is_err());
    }
}
