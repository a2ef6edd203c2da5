//! Finite approximants of the Fibonacci Hamiltonian: the substitution word,
//! the tridiagonal operator, Sturm-sequence bisection, gap labels and
//! unfolded level spacings.

use crate::error::{invalid, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const MAX_WORD_ORDER: u32 = 30;
pub const MAX_OPERATOR_SIZE: usize = 20_000;
/// Gap labels are `frac(m/φ)` for `1 ≤ |m| ≤ MAX_LABEL`.
pub const MAX_LABEL: i32 = 10;

pub fn golden_ratio() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibWord {
    pub order: u32,
    pub letters: String,
}

impl FibWord {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn count(&self, letter: char) -> usize {
        self.letters.chars().filter(|&c| c == letter).count()
    }
}

/// Word of length `F_k` obtained from `"a"` by the substitution `a → ab`, `b → a`.
pub fn fibonacci_word(k: u32) -> Result<FibWord> {
    if k == 0 || k > MAX_WORD_ORDER {
        return Err(invalid(format!("word order must lie in 1..={MAX_WORD_ORDER}")));
    }
    // w₁ = w₂ = a, and w_{k+1} = w_k w_{k−1} is the substitution image.
    let (mut prev, mut cur) = (String::from("a"), String::from("a"));
    for _ in 2..k {
        let next = if cur.len() == 1 { String::from("ab") } else { cur.clone() + &prev };
        prev = cur;
        cur = next;
    }
    Ok(FibWord { order: k, letters: cur })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalOperator {
    pub diagonal: Vec<f64>,
    pub offdiagonal: Vec<f64>,
}

impl TridiagonalOperator {
    pub fn new(diagonal: Vec<f64>, offdiagonal: Vec<f64>) -> Result<Self> {
        if diagonal.is_empty() {
            return Err(invalid("operator must have positive size"));
        }
        if offdiagonal.len() + 1 != diagonal.len() {
            return Err(invalid("need N−1 off-diagonal entries"));
        }
        if offdiagonal.iter().any(|&e| !(e > 0.0)) || diagonal.iter().any(|d| !d.is_finite()) {
            return Err(invalid("off-diagonal entries must be positive and all entries finite"));
        }
        Ok(Self { diagonal, offdiagonal })
    }

    pub fn size(&self) -> usize {
        self.diagonal.len()
    }

    /// Leading principal submatrix of size `n`.
    pub fn leading(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.size() {
            return Err(invalid("submatrix size out of range"));
        }
        Self::new(self.diagonal[..n].to_vec(), self.offdiagonal[..n - 1].to_vec())
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = self.diagonal[0] - x;
        for i in 0..self.size() {
            if i > 0 {
                let e = self.offdiagonal[i - 1];
                q = self.diagonal[i] - x - e * e / q;
            }
            if q == 0.0 {
                q = -f64::EPSILON * (1.0 + x.abs());
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the spectrum.
    pub fn spectral_bounds(&self) -> (f64, f64) {
        let n = self.size();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.offdiagonal[i - 1] } else { 0.0 };
            let right = if i + 1 < n { self.offdiagonal[i] } else { 0.0 };
            lo = lo.min(self.diagonal[i] - left - right);
            hi = hi.max(self.diagonal[i] + left + right);
        }
        (lo - 1e-9, hi + 1e-9)
    }
}

/// Diagonal potential `λ·[letter = a]`, unit hopping, Dirichlet boundary.
pub fn fib_hamiltonian(w: &FibWord, lambda: f64) -> Result<TridiagonalOperator> {
    let diagonal = w.letters.chars().map(|c| if c == 'a' { lambda } else { 0.0 }).collect();
    TridiagonalOperator::new(diagonal, vec![1.0; w.len().saturating_sub(1)])
}

/// All eigenvalues by Sturm-sequence bisection, ascending, to absolute tolerance `tol`.
pub fn tridiag_eigenvalues(t: &TridiagonalOperator, tol: f64) -> Result<Vec<f64>> {
    if t.size() > MAX_OPERATOR_SIZE {
        return Err(invalid(format!("operator size exceeds {MAX_OPERATOR_SIZE}")));
    }
    if !(tol > 0.0) {
        return Err(invalid("tolerance must be positive"));
    }
    let (lo, hi) = t.spectral_bounds();
    let (c_lo, c_hi) = (t.count_below(lo), t.count_below(hi));
    if c_lo != 0 || c_hi != t.size() {
        return Err(crate::Error::Consistency(format!(
            "Sturm counts {c_lo}, {c_hi} do not bracket all {} eigenvalues",
            t.size()
        )));
    }
    let mut eigs = Vec::with_capacity(t.size());
    isolate(t, lo, hi, c_lo, c_hi, tol, &mut eigs);
    if eigs.len() != t.size() {
        return Err(crate::Error::Consistency("eigenvalue count mismatch".into()));
    }
    Ok(eigs)
}

fn isolate(t: &TridiagonalOperator, lo: f64, hi: f64, c_lo: usize, c_hi: usize, tol: f64, out: &mut Vec<f64>) {
    let k = c_hi - c_lo;
    if k == 0 {
        return;
    }
    let mid = 0.5 * (lo + hi);
    if hi - lo <= tol || mid <= lo || mid >= hi {
        out.extend(std::iter::repeat_n(mid, k));
        return;
    }
    let c_mid = t.count_below(mid);
    if k > 64 {
        let (mut left, mut right) = (Vec::new(), Vec::new());
        rayon::join(
            || isolate(t, lo, mid, c_lo, c_mid, tol, &mut left),
            || isolate(t, mid, hi, c_mid, c_hi, tol, &mut right),
        );
        out.extend(left);
        out.extend(right);
    } else {
        isolate(t, lo, mid, c_lo, c_mid, tol, out);
        isolate(t, mid, hi, c_mid, c_hi, tol, out);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapLabel {
    /// Integrated density of states in the gap (levels below / N).
    pub ids: f64,
    pub lower: f64,
    pub upper: f64,
    pub width: f64,
    pub m: i32,
    /// `frac(m/φ)`.
    pub label: f64,
    pub deviation: f64,
}

fn nearest_label(ids: f64) -> (i32, f64, f64) {
    let phi = golden_ratio();
    let mut best = (0, 0.0, f64::INFINITY);
    for m in (-MAX_LABEL..=MAX_LABEL).filter(|&m| m != 0) {
        let label = (m as f64 / phi).rem_euclid(1.0);
        let dev = (ids - label).abs();
        if dev < best.2 {
            best = (m, label, dev);
        }
    }
    best
}

/// Spacings wider than `gap_threshold`, widest first, each labelled by the
/// nearest `frac(m/φ)`.
pub fn gap_labels(eigs: &[f64], gap_threshold: f64) -> Vec<GapLabel> {
    let n = eigs.len() as f64;
    let mut gaps: Vec<GapLabel> = eigs
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1] - w[0] > gap_threshold)
        .map(|(i, w)| {
            let ids = (i + 1) as f64 / n;
            let (m, label, deviation) = nearest_label(ids);
            GapLabel {
                ids,
                lower: w[0],
                upper: w[1],
                width: w[1] - w[0],
                m,
                label,
                deviation,
            }
        })
        .collect();
    gaps.sort_by(|a, b| b.width.total_cmp(&a.width));
    gaps
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpacingHistogram {
    /// Levels between unfolding knots.
    pub window: usize,
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
    pub spacings: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
}

pub const DEFAULT_UNFOLDING_WINDOW: usize = 20;

/// Unfolds with the empirical counting function, linearly interpolated
/// between every `window`-th level, and bins the unfolded spacings.
pub fn spacing_histogram(eigs: &[f64], bins: usize, window: usize) -> Result<SpacingHistogram> {
    if eigs.len() < 100 {
        return Err(invalid("need at least 100 levels"));
    }
    if bins == 0 || window == 0 || window >= eigs.len() {
        return Err(invalid("bins and window must be positive and the window below N"));
    }
    if eigs.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid("eigenvalues must be sorted"));
    }
    let n = eigs.len();
    let mut knots: Vec<usize> = (0..n).step_by(window).collect();
    if *knots.last().unwrap() != n - 1 {
        knots.push(n - 1);
    }
    // Merge knots that share an energy so that the interpolation stays defined.
    knots.dedup_by(|b, a| eigs[*b] <= eigs[*a]);
    let unfolded: Vec<f64> = (0..n)
        .map(|i| {
            let seg = knots.partition_point(|&k| k <= i).clamp(1, knots.len() - 1);
            let (k0, k1) = (knots[seg - 1], knots[seg]);
            let (e0, e1) = (eigs[k0], eigs[k1]);
            k0 as f64 + (k1 - k0) as f64 * ((eigs[i] - e0) / (e1 - e0)).clamp(0.0, 1.0)
        })
        .collect();
    let span = unfolded[n - 1] - unfolded[0];
    let spacings: Vec<f64> = unfolded.windows(2).map(|w| (w[1] - w[0]) * (n - 1) as f64 / span).collect();
    let mean = spacings.iter().sum::<f64>() / spacings.len() as f64;
    let variance = spacings.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / spacings.len() as f64;
    let top = spacings.iter().fold(0.0f64, |m, s| m.max(*s)).max(f64::MIN_POSITIVE);
    let width = top / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|i| i as f64 * width).collect();
    let mut counts = vec![0usize; bins];
    for s in &spacings {
        counts[((s / width) as usize).min(bins - 1)] += 1;
    }
    Ok(SpacingHistogram {
        window,
        edges,
        counts,
        spacings,
        mean,
        variance,
    })
}

/// Total length of spacings at most `gap_threshold`: a proxy for the
/// Lebesgue measure of the bands.
pub fn band_measure(eigs: &[f64], gap_threshold: f64) -> f64 {
    eigs.windows(2)
        .map(|w| w[1] - w[0])
        .filter(|&s| s <= gap_threshold)
        .sum()
}

/// Band-measure threshold in units of the mean level spacing.
pub const DEFAULT_BAND_FACTOR: f64 = 3.0;

/// `(E_max − E_min)/(N − 1)`.
pub fn mean_level_spacing(eigs: &[f64]) -> f64 {
    match eigs {
        [first, .., last] => (last - first) / (eigs.len() - 1) as f64,
        _ => 0.0,
    }
}

/// Spectra of several operators in parallel.
pub fn spectra(ops: &[TridiagonalOperator], tol: f64) -> Result<Vec<Vec<f64>>> {
    ops.par_iter().map(|t| tridiag_eigenvalues(t, tol)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn words() {
        assert_eq!(fibonacci_word(1).unwrap().letters, "a");
        assert_eq!(fibonacci_word(2).unwrap().letters, "a");
        assert_eq!(fibonacci_word(3).unwrap().letters, "ab");
        assert_eq!(fibonacci_word(5).unwrap().letters, "abaab");
        assert_eq!(fibonacci_word(11).unwrap().len(), 89);
        let w = fibonacci_word(20).unwrap();
        assert_eq!(w.len(), 6765);
        assert_eq!((w.count('a'), w.count('b')), (4181, 2584));
        assert!(fibonacci_word(0).is_err());
        assert!(fibonacci_word(31).is_err());
    }

    #[test]
    fn words_follow_the_substitution() {
        for k in 3..15 {
            let w = fibonacci_word(k).unwrap().letters;
            let image: String = w.chars().map(|c| if c == 'a' { "ab" } else { "a" }).collect();
            assert_eq!(image, fibonacci_word(k + 1).unwrap().letters);
        }
    }

    #[test]
    fn hamiltonian_layout() {
        let h = fib_hamiltonian(&fibonacci_word(5).unwrap(), 1.0).unwrap();
        assert_eq!(h.diagonal, vec![1.0, 0.0, 1.0, 1.0, 0.0]);
        assert_eq!(h.offdiagonal, vec![1.0; 4]);
        assert!(TridiagonalOperator::new(vec![0.0, 0.0], vec![0.0]).is_err());
        assert!(TridiagonalOperator::new(vec![0.0, 0.0], vec![]).is_err());
    }

    #[test]
    fn two_by_two() {
        let t = TridiagonalOperator::new(vec![0.0, 0.0], vec![1.0]).unwrap();
        let e = tridiag_eigenvalues(&t, 1e-14).unwrap();
        assert!((e[0] + 1.0).abs() < 1e-13 && (e[1] - 1.0).abs() < 1e-13);
    }

    #[test]
    fn free_chain_closed_form() {
        let n = 100;
        let t = TridiagonalOperator::new(vec![0.0; n], vec![1.0; n - 1]).unwrap();
        let e = tridiag_eigenvalues(&t, 1e-12).unwrap();
        for (j, ev) in e.iter().enumerate() {
            let exact = 2.0 * (PI * (n - j) as f64 / (n + 1) as f64).cos();
            assert!((ev - exact).abs() < 1e-11);
        }
    }

    #[test]
    fn coupling_sign_reflects_spectrum() {
        let w = fibonacci_word(12).unwrap();
        let plus = tridiag_eigenvalues(&fib_hamiltonian(&w, 1.5).unwrap(), 1e-12).unwrap();
        let minus = tridiag_eigenvalues(&fib_hamiltonian(&w, -1.5).unwrap(), 1e-12).unwrap();
        for (a, b) in plus.iter().zip(minus.iter().rev()) {
            assert!((a + b).abs() < 1e-10);
        }
    }

    /// Cyclic Jacobi rotations on the dense matrix.
    fn jacobi_eigenvalues(t: &TridiagonalOperator) -> Vec<f64> {
        let n = t.size();
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            a[i][i] = t.diagonal[i];
            if i + 1 < n {
                a[i][i + 1] = t.offdiagonal[i];
                a[i + 1][i] = t.offdiagonal[i];
            }
        }
        for _ in 0..100 {
            let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
            if off < 1e-26 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    if a[p][q].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                    let tt = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let tt = if theta == 0.0 { 1.0 } else { tt };
                    let c = 1.0 / (tt * tt + 1.0).sqrt();
                    let s = tt * c;
                    for k in 0..n {
                        let (akp, akq) = (a[k][p], a[k][q]);
                        a[k][p] = c * akp - s * akq;
                        a[k][q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let (apk, aqk) = (a[p][k], a[q][k]);
                        a[p][k] = c * apk - s * aqk;
                        a[q][k] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut e: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
        e.sort_by(f64::total_cmp);
        e
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn bisection_matches_jacobi(
            diag in prop::collection::vec(-3.0f64..3.0, 50),
            off in prop::collection::vec(0.05f64..2.0, 49),
        ) {
            let t = TridiagonalOperator::new(diag, off).unwrap();
            let e = tridiag_eigenvalues(&t, 1e-12).unwrap();
            let j = jacobi_eigenvalues(&t);
            for (a, b) in e.iter().zip(&j) {
                prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
            }
        }

        #[test]
        fn submatrix_spectra_interlace(
            diag in prop::collection::vec(-2.0f64..2.0, 2..80),
            seed in 0.1f64..1.9,
        ) {
            let n = diag.len();
            let t = TridiagonalOperator::new(diag, vec![seed; n - 1]).unwrap();
            let big = tridiag_eigenvalues(&t, 1e-13).unwrap();
            let small = tridiag_eigenvalues(&t.leading(n - 1).unwrap(), 1e-13).unwrap();
            for (i, mu) in small.iter().enumerate() {
                prop_assert!(big[i] <= mu + 1e-11 && *mu <= big[i + 1] + 1e-11);
            }
        }
    }

    #[test]
    fn labels_include_negative_m() {
        let (m, label, dev) = nearest_label(0.382);
        assert_eq!(m, -1);
        assert!((label - (2.0 - golden_ratio())).abs() < 1e-15 && dev < 1e-3);
    }

    #[test]
    fn free_chain_has_no_gaps() {
        let n = 987;
        let t = TridiagonalOperator::new(vec![0.0; n], vec![1.0; n - 1]).unwrap();
        let e = tridiag_eigenvalues(&t, 1e-12).unwrap();
        assert!(gap_labels(&e, 0.05).is_empty());
        assert!(gap_labels(&e, 10.0).is_empty());
        let h = spacing_histogram(&e, 20, DEFAULT_UNFOLDING_WINDOW).unwrap();
        assert!((h.mean - 1.0).abs() < 1e-12);
        assert!(h.variance < 0.05, "{}", h.variance);
    }

    #[test]
    fn histogram_rejects_small_inputs() {
        assert!(spacing_histogram(&[0.0; 10], 5, 2).is_err());
        let e: Vec<f64> = (0..200).map(|i| i as f64).collect();
        assert!(spacing_histogram(&e, 0, 5).is_err());
        let h = spacing_histogram(&e, 4, 5).unwrap();
        assert_eq!(h.counts.iter().sum::<usize>(), 199);
    }
}
