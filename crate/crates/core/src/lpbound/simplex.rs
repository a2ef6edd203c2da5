//! Dense two-phase simplex on standard-form problems
//! `minimize cᵀx subject to Ax = b, x ≥ 0`.
//!
//! Two independent implementations share only the problem and result types:
//! a full-tableau method and a revised method that keeps an explicit basis
//! inverse, refactorised periodically. Both price with Dantzig's rule and
//! switch to Bland's rule after a run of degenerate pivots.

use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};

const PIVOT_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-9;
/// Reduced costs above `−OPT_TOL·max|c|` count as non-negative.
const OPT_TOL: f64 = 1e-13;
/// Consecutive degenerate pivots before switching to Bland's rule.
const DEGENERATE_RUN: usize = 50;
const REFACTOR_EVERY: usize = 50;

#[derive(Clone, Debug, PartialEq)]
pub struct StandardLp {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StandardSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    /// Multipliers `y` of `Ax = b` at the final basis (`A_Bᵀ y = c_B`).
    pub duals: Vec<f64>,
    pub iterations: usize,
}

impl StandardLp {
    pub fn new(a: Vec<Vec<f64>>, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        let n = c.len();
        if a.len() != b.len() {
            return Err(invalid("row count of A differs from the length of b"));
        }
        if a.iter().any(|r| r.len() != n) {
            return Err(invalid("column count of A differs from the length of c"));
        }
        let finite = a.iter().flatten().chain(&b).chain(&c).all(|v| v.is_finite());
        if !finite {
            return Err(invalid("LP data must be finite"));
        }
        Ok(Self { a, b, c })
    }

    pub fn rows(&self) -> usize {
        self.a.len()
    }

    pub fn cols(&self) -> usize {
        self.c.len()
    }

    /// Flip rows so that `b ≥ 0`; returns the flipped problem and row signs.
    fn normalized(&self) -> (Vec<Vec<f64>>, Vec<f64>, Vec<f64>) {
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        let mut signs = vec![1.0; b.len()];
        for i in 0..b.len() {
            if b[i] < 0.0 {
                b[i] = -b[i];
                a[i].iter_mut().for_each(|v| *v = -*v);
                signs[i] = -1.0;
            }
        }
        (a, b, signs)
    }
}

fn failed(status: LpStatus, iterations: usize, m: usize, n: usize) -> StandardSolution {
    StandardSolution {
        status,
        x: vec![0.0; n],
        objective: f64::NAN,
        duals: vec![0.0; m],
        iterations,
    }
}

/// Pricing state shared by both methods' pivot-rule logic.
struct Pricing {
    degenerate_run: usize,
}

impl Pricing {
    fn bland(&self) -> bool {
        self.degenerate_run >= DEGENERATE_RUN
    }

    fn record(&mut self, step: f64) {
        if step <= PIVOT_TOL {
            self.degenerate_run += 1;
        } else {
            self.degenerate_run = 0;
        }
    }

    /// Entering column among `allowed` with negative reduced cost.
    fn entering(&self, reduced: impl Iterator<Item = (usize, f64)>, tol: f64) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (j, d) in reduced {
            if d < -tol {
                if self.bland() {
                    return Some(j);
                }
                if best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((j, d));
                }
            }
        }
        best.map(|(j, _)| j)
    }
}

/// Ratio test: smallest `rhs / col` over positive `col`; ties by smallest basic index.
fn ratio_test(col: &[f64], rhs: &[f64], basis: &[usize]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for i in 0..col.len() {
        if col[i] > PIVOT_TOL {
            let ratio = rhs[i].max(0.0) / col[i];
            let better = match best {
                None => true,
                Some((bi, br)) => {
                    ratio < br - 1e-12 * br.abs().max(1.0)
                        || (ratio <= br + 1e-12 * br.abs().max(1.0) && basis[i] < basis[bi])
                }
            };
            if better {
                best = Some((i, ratio));
            }
        }
    }
    best.map(|(i, _)| i)
}

pub mod tableau {
    use super::*;

    struct Tableau {
        /// Rows `0..m` are constraints; each row has `cols + 1` entries, the last is the rhs.
        t: Vec<Vec<f64>>,
        /// Reduced-cost row (same layout); last entry is minus the objective.
        z: Vec<f64>,
        basis: Vec<usize>,
        cols: usize,
    }

    impl Tableau {
        fn pivot(&mut self, r: usize, col: usize) {
            let p = self.t[r][col];
            self.t[r].iter_mut().for_each(|v| *v /= p);
            let pivot_row = self.t[r].clone();
            for (i, row) in self.t.iter_mut().enumerate() {
                if i != r {
                    let f = row[col];
                    if f != 0.0 {
                        row.iter_mut().zip(&pivot_row).for_each(|(v, p)| *v -= f * p);
                    }
                }
            }
            let f = self.z[col];
            if f != 0.0 {
                self.z.iter_mut().zip(&pivot_row).for_each(|(v, p)| *v -= f * p);
            }
            self.basis[r] = col;
        }

        fn set_costs(&mut self, costs: &[f64]) {
            self.z = costs.to_vec();
            self.z.push(0.0);
            for (i, &bj) in self.basis.iter().enumerate() {
                let cb = costs[bj];
                if cb != 0.0 {
                    let row = &self.t[i];
                    self.z.iter_mut().zip(row).for_each(|(v, r)| *v -= cb * r);
                }
            }
        }

        fn run(&mut self, allowed: usize, iterations: &mut usize, max_iter: usize) -> Option<LpStatus> {
            let mut pricing = Pricing { degenerate_run: 0 };
            let scale = self.z[..allowed].iter().fold(1.0f64, |m, v| m.max(v.abs()));
            loop {
                let Some(col) = pricing.entering(self.z[..allowed].iter().copied().enumerate(), OPT_TOL * scale) else {
                    return None;
                };
                if *iterations >= max_iter {
                    return Some(LpStatus::IterationLimit);
                }
                let column: Vec<f64> = self.t.iter().map(|r| r[col]).collect();
                let rhs: Vec<f64> = self.t.iter().map(|r| r[self.cols]).collect();
                let Some(r) = ratio_test(&column, &rhs, &self.basis) else {
                    return Some(LpStatus::Unbounded);
                };
                pricing.record(rhs[r].max(0.0) / column[r]);
                self.pivot(r, col);
                *iterations += 1;
            }
        }
    }

    /// Full-tableau two-phase simplex.
    pub fn solve(lp: &StandardLp, max_iter: usize) -> StandardSolution {
        let (m, n) = (lp.rows(), lp.cols());
        let (a, b, signs) = lp.normalized();
        let cols = n + m;
        let t: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                let mut row = a[i].clone();
                row.extend((0..m).map(|k| if k == i { 1.0 } else { 0.0 }));
                row.push(b[i]);
                row
            })
            .collect();
        let mut tab = Tableau {
            t,
            z: Vec::new(),
            basis: (n..n + m).collect(),
            cols,
        };
        let mut iterations = 0;

        // Phase 1: minimise the sum of artificials.
        let phase1: Vec<f64> = (0..cols).map(|j| if j >= n { 1.0 } else { 0.0 }).collect();
        tab.set_costs(&phase1);
        if let Some(status) = tab.run(cols, &mut iterations, max_iter) {
            if status == LpStatus::IterationLimit {
                return failed(status, iterations, m, n);
            }
        }
        let infeasibility = -tab.z[cols];
        let b_scale = b.iter().fold(1.0f64, |s, v| s.max(v.abs()));
        if infeasibility > FEAS_TOL * b_scale * m.max(1) as f64 {
            return failed(LpStatus::Infeasible, iterations, m, n);
        }
        // Drive artificials out of the basis where possible.
        for r in 0..m {
            if tab.basis[r] >= n {
                if let Some(col) = (0..n).find(|&j| tab.t[r][j].abs() > 1e-7) {
                    tab.pivot(r, col);
                }
            }
        }

        // Phase 2: artificials may not re-enter.
        let mut costs = lp.c.clone();
        costs.extend(std::iter::repeat_n(0.0, m));
        tab.set_costs(&costs);
        if let Some(status) = tab.run(n, &mut iterations, max_iter) {
            return failed(status, iterations, m, n);
        }
        let mut x = vec![0.0; n];
        for (i, &bj) in tab.basis.iter().enumerate() {
            if bj < n {
                x[bj] = tab.t[i][cols];
            }
        }
        // Artificial columns start as the identity, so their reduced costs are −y.
        let duals = (0..m).map(|i| -tab.z[n + i] * signs[i]).collect();
        let objective = lp.c.iter().zip(&x).map(|(c, x)| c * x).sum();
        StandardSolution {
            status: LpStatus::Optimal,
            x,
            objective,
            duals,
            iterations,
        }
    }
}

pub mod revised {
    use super::*;

    /// Gauss–Jordan inverse with partial pivoting; `None` if singular.
    fn invert(cols: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
        let m = cols.len();
        // Build B with the given columns.
        let mut a: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                let mut row: Vec<f64> = cols.iter().map(|c| c[i]).collect();
                row.extend((0..m).map(|k| if k == i { 1.0 } else { 0.0 }));
                row
            })
            .collect();
        for c in 0..m {
            let p = (c..m).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))?;
            if a[p][c].abs() < 1e-14 {
                return None;
            }
            a.swap(c, p);
            let piv = a[c][c];
            a[c].iter_mut().for_each(|v| *v /= piv);
            let prow = a[c].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r != c && row[c] != 0.0 {
                    let f = row[c];
                    row.iter_mut().zip(&prow).for_each(|(v, p)| *v -= f * p);
                }
            }
        }
        Some(a.into_iter().map(|r| r[m..].to_vec()).collect())
    }

    struct State<'a> {
        /// Columns of `[A | I]` (artificials last).
        columns: &'a [Vec<f64>],
        b: &'a [f64],
        basis: Vec<usize>,
        binv: Vec<Vec<f64>>,
        since_refactor: usize,
    }

    impl State<'_> {
        fn refactor(&mut self) -> bool {
            let cols: Vec<Vec<f64>> = self.basis.iter().map(|&j| self.columns[j].clone()).collect();
            match invert(&cols) {
                Some(inv) => {
                    self.binv = inv;
                    self.since_refactor = 0;
                    true
                }
                None => false,
            }
        }

        fn mat_vec(&self, v: &[f64]) -> Vec<f64> {
            self.binv.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
        }

        fn duals(&self, costs: &[f64]) -> Vec<f64> {
            let m = self.basis.len();
            let mut y = vec![0.0; m];
            for (i, &bj) in self.basis.iter().enumerate() {
                let cb = costs[bj];
                if cb != 0.0 {
                    for k in 0..m {
                        y[k] += cb * self.binv[i][k];
                    }
                }
            }
            y
        }

        fn run(&mut self, costs: &[f64], allowed: usize, iterations: &mut usize, max_iter: usize) -> Option<LpStatus> {
            let mut pricing = Pricing { degenerate_run: 0 };
            let scale = costs[..allowed].iter().fold(1.0f64, |s, v| s.max(v.abs()));
            loop {
                if self.since_refactor >= REFACTOR_EVERY && !self.refactor() {
                    return Some(LpStatus::IterationLimit);
                }
                let y = self.duals(costs);
                let reduced = (0..allowed).map(|j| {
                    let col = &self.columns[j];
                    let d = costs[j] - y.iter().zip(col).map(|(a, b)| a * b).sum::<f64>();
                    (j, d)
                });
                let reduced: Vec<(usize, f64)> = reduced.filter(|(j, _)| !self.basis.contains(j)).collect();
                let col = pricing.entering(reduced.into_iter(), OPT_TOL * scale)?;
                if *iterations >= max_iter {
                    return Some(LpStatus::IterationLimit);
                }
                let d = self.mat_vec(&self.columns[col]);
                let xb = self.mat_vec(self.b);
                let Some(r) = ratio_test(&d, &xb, &self.basis) else {
                    return Some(LpStatus::Unbounded);
                };
                pricing.record(xb[r].max(0.0) / d[r]);
                // Rank-one update of B⁻¹.
                let m = self.basis.len();
                let pr = d[r];
                let prow: Vec<f64> = self.binv[r].iter().map(|v| v / pr).collect();
                for i in 0..m {
                    if i == r {
                        continue;
                    }
                    let f = d[i];
                    if f != 0.0 {
                        self.binv[i].iter_mut().zip(&prow).for_each(|(v, p)| *v -= f * p);
                    }
                }
                self.binv[r] = prow;
                self.basis[r] = col;
                self.since_refactor += 1;
                *iterations += 1;
            }
        }
    }

    /// Revised two-phase simplex with an explicit basis inverse.
    pub fn solve(lp: &StandardLp, max_iter: usize) -> StandardSolution {
        let (m, n) = (lp.rows(), lp.cols());
        let (a, b, signs) = lp.normalized();
        let columns: Vec<Vec<f64>> = (0..n)
            .map(|j| a.iter().map(|r| r[j]).collect())
            .chain((0..m).map(|i| (0..m).map(|k| if k == i { 1.0 } else { 0.0 }).collect()))
            .collect();
        let mut state = State {
            columns: &columns,
            b: &b,
            basis: (n..n + m).collect(),
            binv: (0..m).map(|i| (0..m).map(|k| if k == i { 1.0 } else { 0.0 }).collect()).collect(),
            since_refactor: 0,
        };
        let mut iterations = 0;

        let phase1: Vec<f64> = (0..n + m).map(|j| if j >= n { 1.0 } else { 0.0 }).collect();
        if let Some(LpStatus::IterationLimit) = state.run(&phase1, n + m, &mut iterations, max_iter) {
            return failed(LpStatus::IterationLimit, iterations, m, n);
        }
        if !state.refactor() {
            return failed(LpStatus::IterationLimit, iterations, m, n);
        }
        let xb = state.mat_vec(&b);
        let infeasibility: f64 = state
            .basis
            .iter()
            .zip(&xb)
            .filter(|(&j, _)| j >= n)
            .map(|(_, v)| v.max(0.0))
            .sum();
        let b_scale = b.iter().fold(1.0f64, |s, v| s.max(v.abs()));
        if infeasibility > FEAS_TOL * b_scale * m.max(1) as f64 {
            return failed(LpStatus::Infeasible, iterations, m, n);
        }
        // Swap basic artificials (at zero) for structural columns where possible.
        for r in 0..m {
            if state.basis[r] >= n {
                let row = state.binv[r].clone();
                let candidate = (0..n).filter(|j| !state.basis.contains(j)).find(|&j| {
                    row.iter().zip(&columns[j]).map(|(a, b)| a * b).sum::<f64>().abs() > 1e-7
                });
                if let Some(j) = candidate {
                    let mut basis = state.basis.clone();
                    basis[r] = j;
                    let old = std::mem::replace(&mut state.basis, basis);
                    if !state.refactor() {
                        state.basis = old;
                        state.refactor();
                    }
                }
            }
        }

        let mut costs = lp.c.clone();
        costs.extend(std::iter::repeat_n(0.0, m));
        if let Some(status) = state.run(&costs, n, &mut iterations, max_iter) {
            return failed(status, iterations, m, n);
        }
        state.refactor();
        let xb = state.mat_vec(&b);
        let mut x = vec![0.0; n];
        for (i, &bj) in state.basis.iter().enumerate() {
            if bj < n {
                x[bj] = xb[i].max(0.0);
            }
        }
        let y = state.duals(&costs);
        let duals = y.iter().zip(&signs).map(|(y, s)| y * s).collect();
        let objective = lp.c.iter().zip(&x).map(|(c, x)| c * x).sum();
        StandardSolution {
            status: LpStatus::Optimal,
            x,
            objective,
            duals,
            iterations,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn both(lp: &StandardLp) -> [StandardSolution; 2] {
        [tableau::solve(lp, 10_000), revised::solve(lp, 10_000)]
    }

    #[test]
    fn one_variable() {
        // min x s.t. x − s = 3, x, s ≥ 0
        let lp = StandardLp::new(vec![vec![1.0, -1.0]], vec![3.0], vec![1.0, 0.0]).unwrap();
        for s in both(&lp) {
            assert_eq!(s.status, LpStatus::Optimal);
            assert!((s.objective - 3.0).abs() < 1e-12);
            assert!((s.duals[0] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_variables() {
        // min x + y s.t. x ≥ 1, y ≥ 2
        let lp = StandardLp::new(
            vec![vec![1.0, 0.0, -1.0, 0.0], vec![0.0, 1.0, 0.0, -1.0]],
            vec![1.0, 2.0],
            vec![1.0, 1.0, 0.0, 0.0],
        )
        .unwrap();
        for s in both(&lp) {
            assert_eq!(s.status, LpStatus::Optimal);
            assert!((s.objective - 3.0).abs() < 1e-12);
            assert!((s.x[0] - 1.0).abs() < 1e-12 && (s.x[1] - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        // x + y = −1 with x, y ≥ 0
        let lp = StandardLp::new(vec![vec![1.0, 1.0]], vec![-1.0], vec![0.0, 0.0]).unwrap();
        for s in both(&lp) {
            assert_eq!(s.status, LpStatus::Infeasible);
        }
        // min −x s.t. x − y = 0
        let lp = StandardLp::new(vec![vec![1.0, -1.0]], vec![0.0], vec![-1.0, 0.0]).unwrap();
        for s in both(&lp) {
            assert_eq!(s.status, LpStatus::Unbounded);
        }
    }

    #[test]
    fn iteration_limit_is_reported() {
        let lp = StandardLp::new(
            vec![vec![1.0, 0.0, -1.0, 0.0], vec![0.0, 1.0, 0.0, -1.0]],
            vec![1.0, 2.0],
            vec![1.0, 1.0, 0.0, 0.0],
        )
        .unwrap();
        assert_eq!(tableau::solve(&lp, 0).status, LpStatus::IterationLimit);
        assert_eq!(revised::solve(&lp, 0).status, LpStatus::IterationLimit);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(StandardLp::new(vec![vec![1.0]], vec![1.0, 2.0], vec![1.0]).is_err());
        assert!(StandardLp::new(vec![vec![f64::NAN]], vec![1.0], vec![1.0]).is_err());
    }

    #[test]
    fn klee_minty_cube() {
        // max Σ 2^{n−j} x_j s.t. Σ_{j<i} 2^{i−j+1} x_j + x_i ≤ 5^i; optimum 5^n.
        let n = 6;
        let mut a = Vec::new();
        let mut b = Vec::new();
        for i in 0..n {
            let mut row = vec![0.0; 2 * n];
            for j in 0..i {
                row[j] = 2f64.powi((i - j + 1) as i32);
            }
            row[i] = 1.0;
            row[n + i] = 1.0;
            a.push(row);
            b.push(5f64.powi(i as i32 + 1));
        }
        let mut c: Vec<f64> = (0..n).map(|j| -(2f64.powi((n - 1 - j) as i32))).collect();
        c.extend(vec![0.0; n]);
        let lp = StandardLp::new(a, b, c).unwrap();
        for s in both(&lp) {
            assert_eq!(s.status, LpStatus::Optimal);
            assert!((s.objective + 5f64.powi(n as i32)).abs() < 1e-6);
        }
    }

    use proptest::prelude::*;

    /// `min cᵀx` over `Ax ≤ b`, `Σx ≤ n`, `x ≥ 0`, with `b` built from a feasible point.
    fn random_lp(n: usize, rows: &[Vec<f64>], x0: &[f64], slack: &[f64], c: &[f64]) -> StandardLp {
        let m = rows.len() + 1;
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            let mut full = row[..n].to_vec();
            full.extend((0..m).map(|k| if k == i { 1.0 } else { 0.0 }));
            b.push(row[..n].iter().zip(x0).map(|(a, x)| a * x).sum::<f64>() + slack[i]);
            a.push(full);
        }
        let mut cap = vec![1.0; n];
        cap.extend((0..m).map(|k| if k == m - 1 { 1.0 } else { 0.0 }));
        a.push(cap);
        b.push(n as f64);
        let mut cost = c[..n].to_vec();
        cost.extend(vec![0.0; m]);
        StandardLp::new(a, b, cost).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn methods_agree_on_random_feasible_lps(
            n in 1usize..12,
            rows in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 12), 1..25),
            x0 in prop::collection::vec(0.0f64..1.0, 12),
            slack in prop::collection::vec(0.0f64..1.0, 25),
            c in prop::collection::vec(-1.0f64..1.0, 12),
        ) {
            let lp = random_lp(n, &rows, &x0[..n], &slack, &c);
            let t = tableau::solve(&lp, 10_000);
            let r = revised::solve(&lp, 10_000);
            prop_assert_eq!(t.status, LpStatus::Optimal);
            prop_assert_eq!(r.status, LpStatus::Optimal);
            let scale = t.objective.abs().max(1.0);
            prop_assert!((t.objective - r.objective).abs() <= 1e-8 * scale);
            // Strong duality: bᵀy equals the objective.
            let by: f64 = lp.b.iter().zip(&r.duals).map(|(b, y)| b * y).sum();
            prop_assert!((by - r.objective).abs() <= 1e-8 * scale);
            for row in 0..lp.rows() {
                let ax: f64 = lp.a[row].iter().zip(&r.x).map(|(a, x)| a * x).sum();
                prop_assert!((ax - lp.b[row]).abs() <= 1e-8 * lp.b[row].abs().max(1.0));
            }
        }
    }
}
