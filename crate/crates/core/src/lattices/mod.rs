//! Integral lattices given by Gram matrices: shells, theta series, root
//! counts, packing density and the Eisenstein/cusp split of the theta series.

mod builtin;
mod construct;
mod enumerate;
mod frame;

pub use builtin::{builtin_lattice, BuiltinLattice};
pub use construct::{construction_a, d16plus_generators, hnf_basis, leech_generators, lll_reduce, lattice_from_generators};
pub use enumerate::{enumerate_shells, enumerate_shells_with_budget, ShellCounts, DEFAULT_NODE_BUDGET};
pub use frame::{frame_code, root_frame, theta_series_by_frame, vectors_of_norm};
pub(crate) use enumerate::pohst_form;

use crate::dims::{dim_cusp, GroupTag};
use crate::error::{invalid, Error, Result};
use crate::qseries::{delta_product, eisenstein_series, ExactRational, QSeries};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Positive definite integral lattice, stored by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    gram: Vec<Vec<i64>>,
    det: BigInt,
}

/// Leading principal minors by fraction-free elimination; the last one is the determinant.
fn leading_minors(m: &[Vec<i64>]) -> Vec<BigInt> {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = a[k][k].clone();
        minors.push(pivot.clone());
        if pivot.is_zero() {
            // Remaining minors are not computed; the caller only needs to see a non-positive one.
            minors.resize(n, BigInt::zero());
            return minors;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &pivot - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = pivot;
    }
    minors
}

impl Lattice {
    /// Validates squareness, symmetry and positive definiteness (all leading
    /// principal minors positive, computed exactly).
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self> {
        let n = gram.len();
        if n == 0 {
            return Err(invalid("Gram matrix is empty"));
        }
        if gram.iter().any(|r| r.len() != n) {
            return Err(invalid("Gram matrix is not square"));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(invalid(format!("Gram matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        let minors = leading_minors(&gram);
        if let Some(i) = minors.iter().position(|m| !m.is_positive()) {
            return Err(Error::LatticeCheck(format!(
                "Gram matrix is not positive definite (leading minor {} is {})",
                i + 1,
                minors[i]
            )));
        }
        let det = minors.last().cloned().expect("n >= 1");
        Ok(Self { gram, det })
    }

    /// Whitespace-separated integers, one row per line; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let gram = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.split_whitespace()
                    .map(|t| t.parse::<i64>().map_err(|_| Error::Parse(format!("bad integer `{t}`"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(gram)
    }

    pub fn identity(d: usize) -> Result<Self> {
        Self::new(
            (0..d)
                .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
                .collect(),
        )
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let (a, b) = (self.rank(), other.rank());
        let mut gram = vec![vec![0i64; a + b]; a + b];
        for i in 0..a {
            gram[i][..a].copy_from_slice(&self.gram[i]);
        }
        for i in 0..b {
            gram[a + i][a..].copy_from_slice(&other.gram[i]);
        }
        Self {
            gram,
            det: &self.det * &other.det,
        }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    /// Even diagonal suffices: `x·x = Σ Gᵢᵢxᵢ² + 2Σ_{i<j} Gᵢⱼxᵢxⱼ`.
    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[i][i] % 2 == 0)
    }

    pub fn is_unimodular(&self) -> bool {
        self.det.is_one()
    }

    /// `xᵀGx` for an integer coordinate vector.
    pub fn norm(&self, x: &[i64]) -> i64 {
        let n = self.rank();
        (0..n)
            .map(|i| x[i] * (0..n).map(|j| self.gram[i][j] * x[j]).sum::<i64>())
            .sum()
    }

    /// Smallest nonzero squared norm.
    pub fn min_norm(&self) -> Result<i64> {
        let bound = (0..self.rank()).map(|i| self.gram[i][i]).min().expect("rank >= 1");
        let shells = enumerate_shells(self, bound)?;
        if !shells.complete {
            return Err(Error::BudgetExceeded {
                budget: DEFAULT_NODE_BUDGET,
            });
        }
        Ok(shells
            .counts
            .iter()
            .skip(1)
            .position(|&c| c > 0)
            .map(|m| m as i64 + 1)
            .expect("a basis vector has norm <= the bound"))
    }

    pub fn to_text(&self) -> String {
        self.gram
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("\n")
            + "\n"
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rank {} lattice, det {}, {}",
            self.rank(),
            self.det,
            if self.is_even() { "even" } else { "odd" }
        )
    }
}

fn require_even(l: &Lattice) -> Result<()> {
    if !l.is_even() {
        return Err(invalid("theta series in q need an even lattice"));
    }
    Ok(())
}

/// `Θ = Σ_m N_{2m} qᵐ`, truncated at `q^{max_norm/2}`.
pub fn theta_series(l: &Lattice, max_norm: i64) -> Result<QSeries> {
    require_even(l)?;
    if max_norm < 2 || max_norm % 2 != 0 {
        return Err(invalid(format!("max_norm must be even and >= 2, got {max_norm}")));
    }
    let shells = enumerate_shells(l, max_norm)?;
    if !shells.complete {
        return Err(Error::BudgetExceeded {
            budget: shells.budget,
        });
    }
    theta_from_shells(&shells, l.rank())
}

pub fn theta_from_shells(shells: &ShellCounts, rank: usize) -> Result<QSeries> {
    let coeffs = shells.counts.iter().step_by(2).copied();
    let series = QSeries::from_integers(1, coeffs)?;
    Ok(if rank.is_multiple_of(2) {
        series.with_weight(rank as i64 / 2)
    } else {
        series
    })
}

/// Number of vectors of squared norm 2.
pub fn root_count(l: &Lattice) -> Result<u64> {
    require_even(l)?;
    let shells = enumerate_shells(l, 2)?;
    if !shells.complete {
        return Err(Error::BudgetExceeded {
            budget: shells.budget,
        });
    }
    Ok(shells.counts[2])
}

pub fn is_rootless(l: &Lattice) -> Result<bool> {
    Ok(root_count(l)? == 0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspComponent {
    /// `Θ − E_{d/2}`
    pub cusp: QSeries,
    /// For `d = 24`, the coefficient `c` with `Θ = E₁₂ + cΔ`.
    pub delta_coefficient: Option<ExactRational>,
}

/// Splits the theta series of an even unimodular rank-`d` lattice as
/// `Θ = E_{d/2} + f` with `f` a cusp form.
///
/// Fails if `f` has a constant term, if `S_{d/2}` is zero but `f` is not, or,
/// for `d = 24`, if `f` is not a multiple of Δ.
pub fn cusp_component(theta: &QSeries, d: u32) -> Result<CuspComponent> {
    if d == 0 || !d.is_multiple_of(8) {
        return Err(invalid(format!("d must be a positive multiple of 8, got {d}")));
    }
    if theta.var_scale() != 1 || theta.order() < 2 {
        return Err(invalid("cusp_component needs a q-series truncated at q^2 or beyond"));
    }
    let k = d / 2;
    let eisenstein = eisenstein_series(k, theta.order())?;
    let cusp = theta.sub(&eisenstein)?.with_weight(k as i64);
    if !cusp.coeff(0).is_zero() {
        return Err(Error::Consistency(format!(
            "Θ − E_{k} has constant term {}: input is not the theta series of an even unimodular lattice",
            cusp.coeff(0)
        )));
    }
    if dim_cusp(k, GroupTag::Full)? == 0 && !cusp.is_zero() {
        return Err(Error::Consistency(format!(
            "S_{k} is zero but Θ − E_{k} = {cusp}"
        )));
    }
    let delta_coefficient = if d == 24 {
        let c = cusp.coeff(1).clone();
        let expected = delta_product(cusp.order())?.scale(&c);
        if !expected.agrees_with(&cusp) {
            return Err(Error::Consistency(format!(
                "Θ − E₁₂ = {cusp} is not a multiple of Δ"
            )));
        }
        Some(c)
    } else {
        None
    };
    Ok(CuspComponent {
        cusp,
        delta_coefficient,
    })
}

/// Volume of the Euclidean ball of radius `r` in dimension `d`.
pub fn ball_volume(d: usize, r: f64) -> f64 {
    // V_d = V_{d−2} · 2π/d with V₀ = 1, V₁ = 2.
    let mut v = if d.is_multiple_of(2) { 1.0 } else { 2.0 };
    let mut k = if d.is_multiple_of(2) { 2 } else { 3 };
    while k <= d {
        v *= 2.0 * std::f64::consts::PI / k as f64;
        k += 2;
    }
    v * r.powi(d as i32)
}

/// Packing density of the lattice sphere packing, `vol(B_{λ₁/2}) / √det`.
pub fn density(l: &Lattice) -> Result<f64> {
    let min_norm = l.min_norm()? as f64;
    let det: f64 = l.det.to_string().parse().expect("integer");
    Ok(ball_volume(l.rank(), min_norm.sqrt() / 2.0) / det.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::rat;

    #[test]
    fn construction_checks() {
        assert!(Lattice::new(vec![]).is_err());
        assert!(Lattice::new(vec![vec![2, 1], vec![0, 2]]).is_err());
        assert!(matches!(
            Lattice::new(vec![vec![1, 2], vec![2, 1]]),
            Err(Error::LatticeCheck(_))
        ));
        let a2 = Lattice::parse("2 -1\n-1 2\n").unwrap();
        assert_eq!(a2.det(), &BigInt::from(3));
        assert!(a2.is_even());
        assert!(!a2.is_unimodular());
        assert_eq!(a2.norm(&[1, 1]), 2);
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        fn cofactor(m: &[Vec<i64>]) -> i64 {
            if m.len() == 1 {
                return m[0][0];
            }
            (0..m.len())
                .map(|j| {
                    let minor: Vec<Vec<i64>> = m[1..]
                        .iter()
                        .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, &x)| x).collect())
                        .collect();
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    sign * m[0][j] * cofactor(&minor)
                })
                .sum()
        }
        let g = vec![
            vec![4, 1, 0, 2],
            vec![1, 6, 1, 1],
            vec![0, 1, 3, -1],
            vec![2, 1, -1, 5],
        ];
        let l = Lattice::new(g.clone()).unwrap();
        assert_eq!(l.det(), &BigInt::from(cofactor(&g)));
    }

    #[test]
    fn direct_sum_and_text() {
        let a = Lattice::identity(2).unwrap();
        let b = Lattice::parse("2 -1\n-1 2").unwrap();
        let s = a.direct_sum(&b);
        assert_eq!(s.rank(), 4);
        assert_eq!(s.det(), &BigInt::from(3));
        assert_eq!(Lattice::parse(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn densities() {
        let z1 = Lattice::identity(1).unwrap();
        assert!((density(&z1).unwrap() - 1.0).abs() < 1e-15);
        let e8 = builtin_lattice(BuiltinLattice::E8).unwrap();
        let expected = std::f64::consts::PI.powi(4) / 384.0;
        assert!((density(&e8).unwrap() - expected).abs() < 1e-12);
        let e8e8 = builtin_lattice(BuiltinLattice::E8E8).unwrap();
        // Orthogonal sum at equal minimum: vol(B_{√2/2}) in 16 dimensions.
        let expected16 = ball_volume(16, 2f64.sqrt() / 2.0);
        assert!((density(&e8e8).unwrap() - expected16).abs() < 1e-15);
        assert!((expected16 - std::f64::consts::PI.powi(8) / (40320.0 * 256.0)).abs() < 1e-15);
    }

    #[test]
    fn ball_volumes() {
        assert!((ball_volume(1, 0.5) - 1.0).abs() < 1e-15);
        assert!((ball_volume(2, 1.0) - std::f64::consts::PI).abs() < 1e-15);
        assert!((ball_volume(3, 1.0) - 4.0 / 3.0 * std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn cusp_components() {
        let e8 = builtin_lattice(BuiltinLattice::E8).unwrap();
        let t = theta_series(&e8, 8).unwrap();
        let c = cusp_component(&t, 8).unwrap();
        assert!(c.cusp.is_zero());
        assert!(c.delta_coefficient.is_none());

        // Z⁸-like input with the wrong constant term.
        let bad = QSeries::from_integers(1, [2, 240, 2160]).unwrap();
        assert!(matches!(cusp_component(&bad, 8), Err(Error::Consistency(_))));
        // Wrong q¹ coefficient in a dimension without cusp forms.
        let bad = QSeries::from_integers(1, [1, 241, 2160]).unwrap();
        assert!(cusp_component(&bad, 8).is_err());
        assert!(cusp_component(&t.truncate(1).unwrap(), 8).is_err());
    }

    #[test]
    fn leech_style_split_from_series() {
        // 1 + 196560 q² + 16773120 q³ is the Leech theta series.
        let t = QSeries::from_integers(1, [1i64, 0, 196560, 16773120]).unwrap();
        let c = cusp_component(&t, 24).unwrap();
        assert_eq!(
            c.delta_coefficient,
            Some(-ExactRational::new(65520.into(), 691.into()))
        );
        assert_eq!(c.cusp.coeff(2), &(ExactRational::new(65520.into(), 691.into()) * rat(24)));
    }

    #[test]
    fn odd_lattices_have_no_q_theta() {
        let z = Lattice::identity(8).unwrap();
        assert!(theta_series(&z, 2).is_err());
        assert!(root_count(&z).is_err());
    }
}
