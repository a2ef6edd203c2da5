//! Fincke–Pohst shell enumeration.
//!
//! Pruning uses a floating Cholesky factorisation with a relative slack of
//! 10⁻⁶; every surviving leaf has its norm recomputed in exact integer
//! arithmetic, so the counts are exact.

use super::Lattice;
use crate::error::{invalid, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

/// Default cap on search-tree nodes.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

const RELATIVE_SLACK: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShellCounts {
    pub max_norm: i64,
    /// `counts[m]` is the number of vectors with `xᵀGx = m`.
    pub counts: Vec<u64>,
    /// False if the node budget ran out; counts are then lower bounds.
    pub complete: bool,
    pub nodes: u64,
    pub budget: u64,
}

/// Upper-triangular Fincke–Pohst form: `Q(x) = Σᵢ qᵢᵢ (xᵢ + Σ_{j>i} qᵢⱼ xⱼ)²`.
pub(crate) fn pohst_form(gram: &[Vec<i64>]) -> Vec<Vec<f64>> {
    let n = gram.len();
    let mut q: Vec<Vec<f64>> = gram
        .iter()
        .map(|r| r.iter().map(|&x| x as f64).collect())
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    q
}

/// Per-thread search state.
///
/// `center[k] = Σ_{j>k} q_kj x_j` and `cross[k] = Σ_{j>k} G_kj x_j` are kept
/// current for every level below the one being assigned; changing `x_i`
/// costs `O(i)`, and most nodes sit at low levels.
struct Worker<'a> {
    gram: &'a [Vec<i64>],
    q: &'a [Vec<f64>],
    bound: f64,
    max_norm: i64,
    x: Vec<i64>,
    center: Vec<f64>,
    cross: Vec<i64>,
    counts: Vec<u64>,
    local_nodes: u64,
    budget: u64,
    nodes: &'a AtomicU64,
    exhausted: &'a AtomicBool,
}

impl<'a> Worker<'a> {
    fn new(shared: &Shared<'a>) -> Self {
        let n = shared.q.len();
        Self {
            gram: shared.gram,
            q: shared.q,
            bound: shared.bound,
            max_norm: shared.max_norm,
            x: vec![0; n],
            center: vec![0.0; n],
            cross: vec![0; n],
            counts: vec![0; shared.max_norm as usize + 1],
            local_nodes: 0,
            budget: shared.budget,
            nodes: shared.nodes,
            exhausted: shared.exhausted,
        }
    }

    fn set(&mut self, i: usize, value: i64) {
        let delta = value - self.x[i];
        if delta == 0 {
            return;
        }
        self.x[i] = value;
        let df = delta as f64;
        for k in 0..i {
            self.center[k] += self.q[k][i] * df;
            self.cross[k] += self.gram[k][i] * delta;
        }
    }

    fn flush(&mut self) -> bool {
        let total = self.nodes.fetch_add(self.local_nodes, Ordering::Relaxed) + self.local_nodes;
        self.local_nodes = 0;
        if total > self.budget {
            self.exhausted.store(true, Ordering::Relaxed);
        }
        !self.exhausted.load(Ordering::Relaxed)
    }

    /// Integer range for `x_i` given the partial form above level `i`.
    fn range(&self, i: usize, partial: f64, zero_above: bool) -> (f64, i64, i64) {
        let c = -self.center[i];
        let room = (self.bound - partial).max(0.0);
        let radius = (room / self.q[i][i]).sqrt();
        let mut lo = (c - radius).ceil() as i64;
        let hi = (c + radius).floor() as i64;
        if zero_above {
            // Visit one vector of each pair ±v: the top nonzero coordinate is positive.
            lo = lo.max(0);
        }
        (c, lo, hi)
    }

    /// Enumerate levels `level−1 … 0`, given coordinates fixed above.
    fn descend(&mut self, level: usize, partial: f64, exact: i64, zero_above: bool) {
        let i = level - 1;
        let (c, lo, hi) = self.range(i, partial, zero_above);
        if lo > hi {
            return;
        }
        if i == 0 {
            // Innermost level: exact norms by finite differences.
            let g00 = self.gram[0][0];
            let cross = self.cross[0];
            let mut norm = exact + g00 * lo * lo + 2 * lo * cross;
            let mut step = g00 * (2 * lo + 1) + 2 * cross;
            for x0 in lo..=hi {
                if norm <= self.max_norm && !(zero_above && x0 == 0) {
                    self.counts[norm as usize] += 1;
                }
                norm += step;
                step += 2 * g00;
            }
            self.local_nodes += (hi - lo + 1) as u64;
            return;
        }
        self.local_nodes += 1;
        if self.local_nodes >= 1 << 16 && !self.flush() {
            return;
        }
        let qii = self.q[i][i];
        let gii = self.gram[i][i];
        for xi in lo..=hi {
            let t = xi as f64 - c;
            let p = partial + qii * t * t;
            if p > self.bound {
                continue;
            }
            self.set(i, xi);
            let e = exact + gii * xi * xi + 2 * xi * self.cross[i];
            self.descend(i, p, e, zero_above && xi == 0);
            if self.exhausted.load(Ordering::Relaxed) {
                break;
            }
        }
        self.set(i, 0);
    }
}

struct Shared<'a> {
    gram: &'a [Vec<i64>],
    q: &'a [Vec<f64>],
    bound: f64,
    max_norm: i64,
    budget: u64,
    nodes: &'a AtomicU64,
    exhausted: &'a AtomicBool,
}

/// Top coordinates fixed by the breadth-first split.
#[derive(Clone)]
struct Prefix {
    level: usize,
    x: Vec<i64>,
    partial: f64,
    exact: i64,
    zero_above: bool,
}

pub fn enumerate_shells(l: &Lattice, max_norm: i64) -> Result<ShellCounts> {
    enumerate_shells_with_budget(l, max_norm, DEFAULT_NODE_BUDGET)
}

/// Counts lattice vectors by squared norm up to `max_norm`.
///
/// If the tree search visits more than `budget` nodes it stops and returns
/// the partial counts with `complete = false`.
pub fn enumerate_shells_with_budget(l: &Lattice, max_norm: i64, budget: u64) -> Result<ShellCounts> {
    if max_norm < 1 {
        return Err(invalid(format!("max_norm must be >= 1, got {max_norm}")));
    }
    let n = l.rank();
    let q = pohst_form(l.gram());
    let nodes = AtomicU64::new(0);
    let exhausted = AtomicBool::new(false);
    let shared = Shared {
        gram: l.gram(),
        q: &q,
        bound: max_norm as f64 * (1.0 + RELATIVE_SLACK) + RELATIVE_SLACK,
        max_norm,
        budget,
        nodes: &nodes,
        exhausted: &exhausted,
    };

    // Fix the top levels breadth-first until there is enough work to share.
    let split_to = n.saturating_sub(3).max(1);
    let mut frontier = vec![Prefix {
        level: n,
        x: vec![0; n],
        partial: 0.0,
        exact: 0,
        zero_above: true,
    }];
    let mut scratch = Worker::new(&shared);
    while frontier[0].level > split_to && frontier.len() < 256 {
        let mut next = Vec::new();
        for p in &frontier {
            for (k, &v) in p.x.iter().enumerate().skip(p.level) {
                scratch.set(k, v);
            }
            let i = p.level - 1;
            let (c, lo, hi) = scratch.range(i, p.partial, p.zero_above);
            for xi in lo..=hi {
                let t = xi as f64 - c;
                let partial = p.partial + q[i][i] * t * t;
                if partial > shared.bound {
                    continue;
                }
                let exact = p.exact + l.gram()[i][i] * xi * xi + 2 * xi * scratch.cross[i];
                let mut x = p.x.clone();
                x[i] = xi;
                next.push(Prefix {
                    level: i,
                    x,
                    partial,
                    exact,
                    zero_above: p.zero_above && xi == 0,
                });
            }
            for k in p.level..n {
                scratch.set(k, 0);
            }
        }
        nodes.fetch_add(next.len() as u64, Ordering::Relaxed);
        frontier = next;
    }

    let size = max_norm as usize + 1;
    let halves = frontier
        .into_par_iter()
        .map(|p| {
            let mut w = Worker::new(&shared);
            for (k, &v) in p.x.iter().enumerate().skip(p.level) {
                w.set(k, v);
            }
            if p.level == 0 {
                if p.exact <= max_norm && !p.zero_above {
                    w.counts[p.exact as usize] += 1;
                }
            } else {
                w.descend(p.level, p.partial, p.exact, p.zero_above);
            }
            w.flush();
            w.counts
        })
        .reduce(
            || vec![0u64; size],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    // Every nonzero vector was visited once for the pair ±v.
    let mut counts: Vec<u64> = halves.into_iter().map(|c| 2 * c).collect();
    counts[0] = 1;
    let nodes = nodes.load(Ordering::Relaxed);
    Ok(ShellCounts {
        max_norm,
        counts,
        complete: !exhausted.load(Ordering::Relaxed) && nodes <= budget,
        nodes,
        budget,
    })
}
