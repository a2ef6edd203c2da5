//! Theta series through an orthogonal frame of roots.
//!
//! If `f₁, …, fₙ` are mutually orthogonal vectors of norm 2 in `Λ`, every
//! `x ∈ Λ` is `Σ (yᵢ/2) fᵢ` with `yᵢ = x·fᵢ ∈ ℤ` and `x·x = Σ yᵢ²/2`. The
//! parities `y mod 2` form a binary code `D` (the cosets `Λ/⟨fᵢ⟩`), and each
//! coset contributes a product of one-dimensional sums. This reaches orders
//! where explicit enumeration would visit billions of vectors.

use super::{pohst_form, Lattice};
use crate::codes::{gleason_substitution, weight_enumerator, BinaryCode};
use crate::error::{Error, Result};
use crate::qseries::QSeries;

/// Lattice vectors (in basis coordinates) with `xᵀGx = norm`, one per pair `±v`.
pub fn vectors_of_norm(l: &Lattice, norm: i64) -> Vec<Vec<i64>> {
    let q = pohst_form(l.gram());
    let n = l.rank();
    let bound = norm as f64 * (1.0 + 1e-6) + 1e-6;
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    collect(l, &q, bound, norm, n, 0.0, &mut x, &mut out);
    out.retain(|v| v.iter().rev().find(|&&c| c != 0).is_some_and(|&c| c > 0));
    out
}

#[allow(clippy::too_many_arguments)]
fn collect(
    l: &Lattice,
    q: &[Vec<f64>],
    bound: f64,
    norm: i64,
    level: usize,
    partial: f64,
    x: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    if level == 0 {
        if l.norm(x) == norm {
            out.push(x.clone());
        }
        return;
    }
    let i = level - 1;
    let n = x.len();
    let c = -(i + 1..n).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
    let radius = ((bound - partial).max(0.0) / q[i][i]).sqrt();
    for xi in (c - radius).ceil() as i64..=(c + radius).floor() as i64 {
        let t = xi as f64 - c;
        let p = partial + q[i][i] * t * t;
        if p <= bound {
            x[i] = xi;
            collect(l, q, bound, norm, i, p, x, out);
        }
    }
    x[i] = 0;
}

fn inner(l: &Lattice, a: &[i64], b: &[i64]) -> i64 {
    let g = l.gram();
    (0..a.len())
        .map(|i| a[i] * (0..b.len()).map(|j| g[i][j] * b[j]).sum::<i64>())
        .sum()
}

/// Depth-first search for `n` mutually orthogonal roots.
fn extend_frame(l: &Lattice, roots: &[Vec<i64>], start: usize, frame: &mut Vec<usize>, steps: &mut u64) -> bool {
    if frame.len() == l.rank() {
        return true;
    }
    for r in start..roots.len() {
        *steps += 1;
        if *steps > 1_000_000 {
            return false;
        }
        if frame.iter().all(|&f| inner(l, &roots[f], &roots[r]) == 0) {
            frame.push(r);
            if extend_frame(l, roots, r + 1, frame, steps) {
                return true;
            }
            frame.pop();
        }
    }
    false
}

/// A full orthogonal frame of norm-2 vectors, if the search finds one.
pub fn root_frame(l: &Lattice) -> Result<Vec<Vec<i64>>> {
    let roots = vectors_of_norm(l, 2);
    let mut frame = Vec::new();
    let mut steps = 0;
    if !extend_frame(l, &roots, 0, &mut frame, &mut steps) {
        return Err(Error::LatticeCheck(format!(
            "no orthogonal frame of {} roots among {} root pairs",
            l.rank(),
            roots.len()
        )));
    }
    Ok(frame.into_iter().map(|i| roots[i].clone()).collect())
}

/// The parity code `{x·fᵢ mod 2}` of the lattice relative to a frame.
pub fn frame_code(l: &Lattice, frame: &[Vec<i64>]) -> Result<BinaryCode> {
    let n = l.rank();
    let g = l.gram();
    // Row k: parities of (basis vector k)·fᵢ.
    let mut words: Vec<u64> = (0..n)
        .map(|k| {
            frame.iter().enumerate().fold(0u64, |w, (i, f)| {
                let y: i64 = (0..n).map(|j| g[k][j] * f[j]).sum();
                w | ((y.rem_euclid(2) as u64) << i)
            })
        })
        .collect();
    words.sort_unstable();
    words.dedup();
    words.retain(|&w| w != 0);
    // Keep an independent subset.
    let mut basis: Vec<u64> = Vec::new();
    for w in words {
        let mut v = w;
        for &b in &basis {
            let lead = 63 - b.leading_zeros();
            if v >> lead & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    let code = if basis.is_empty() {
        BinaryCode::zero(n)?
    } else {
        BinaryCode::from_words(n, basis)?
    };
    // [Λ : ⊕ℤfᵢ]² · det Λ = det(⊕ℤfᵢ) = 2ⁿ.
    let index_sq = num_bigint::BigInt::from(1u8) << (2 * code.dim());
    if index_sq * l.det() != num_bigint::BigInt::from(1u8) << n {
        return Err(Error::Consistency("frame index does not match the determinant".into()));
    }
    Ok(code)
}

/// Theta series via a root frame, truncated at `q^order`. Needs an even lattice.
pub fn theta_series_by_frame(l: &Lattice, order: usize) -> Result<QSeries> {
    if !l.is_even() {
        return Err(crate::error::invalid("theta series in q need an even lattice"));
    }
    let frame = root_frame(l)?;
    let code = frame_code(l, &frame)?;
    gleason_substitution(&weight_enumerator(&code)?, order)
}
