//! Building lattices from integer generators: Hermite normal form modulo a
//! known multiple of the identity, Gram scaling, and LLL reduction.

use super::Lattice;
use crate::codes::BinaryCode;
use crate::error::{invalid, Error, Result};

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, s, t) = ext_gcd(b, a % b);
        (g, t, s - (a / b) * t)
    }
}

/// Upper-triangular basis of the lattice spanned by `gens` and `modulus·ℤⁿ`.
///
/// `modulus·eᵢ` must lie in the lattice for every `i`; entries off the
/// diagonal are reduced into `[0, modulus)`.
pub fn hnf_basis(gens: &[Vec<i64>], n: usize, modulus: i64) -> Result<Vec<Vec<i64>>> {
    if modulus < 1 {
        return Err(invalid("modulus must be positive"));
    }
    if gens.iter().any(|g| g.len() != n) {
        return Err(invalid("generator length differs from the ambient dimension"));
    }
    let mut pivots: Vec<Option<Vec<i64>>> = vec![None; n];
    let reduce = |v: &mut [i64], from: usize| {
        for x in &mut v[from..] {
            *x = x.rem_euclid(modulus);
        }
    };
    let identity = (0..n).map(|i| {
        let mut e = vec![0; n];
        e[i] = modulus;
        e
    });
    for g in gens.iter().cloned().chain(identity) {
        let mut v = g;
        for col in 0..n {
            if v[col] == 0 {
                continue;
            }
            match pivots[col].take() {
                None => {
                    if v[col] < 0 {
                        v.iter_mut().for_each(|x| *x = -*x);
                    }
                    reduce(&mut v, col + 1);
                    pivots[col] = Some(v);
                    break;
                }
                Some(p) => {
                    let (a, b) = (p[col], v[col]);
                    let (g, s, t) = ext_gcd(a, b);
                    let mut new_pivot: Vec<i64> = p.iter().zip(&v).map(|(x, y)| s * x + t * y).collect();
                    let mut rest: Vec<i64> = p
                        .iter()
                        .zip(&v)
                        .map(|(x, y)| (b / g) * x - (a / g) * y)
                        .collect();
                    reduce(&mut new_pivot, col + 1);
                    reduce(&mut rest, col + 1);
                    pivots[col] = Some(new_pivot);
                    v = rest;
                }
            }
        }
    }
    let mut basis: Vec<Vec<i64>> = pivots.into_iter().map(|p| p.expect("modulus rows fill every pivot")).collect();
    // Reduce entries above each pivot.
    for col in 0..n {
        let pivot_row = basis[col].clone();
        for row in basis.iter_mut().take(col) {
            let f = row[col].div_euclid(pivot_row[col]);
            if f != 0 {
                row.iter_mut().zip(&pivot_row).for_each(|(x, p)| *x -= f * p);
            }
        }
    }
    Ok(basis)
}

/// Lattice spanned by `gens ∪ modulus·ℤⁿ` with inner product `x·y / divisor`.
///
/// The result is LLL-reduced. Fails if some inner product is not an integer.
pub fn lattice_from_generators(gens: &[Vec<i64>], n: usize, modulus: i64, divisor: i64) -> Result<Lattice> {
    let basis = hnf_basis(gens, n, modulus)?;
    let mut gram = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let dot: i64 = basis[i].iter().zip(&basis[j]).map(|(a, b)| a * b).sum();
            if dot % divisor != 0 {
                return Err(Error::LatticeCheck(format!(
                    "inner product {dot}/{divisor} of basis vectors {i}, {j} is not integral"
                )));
            }
            gram[i][j] = dot / divisor;
            gram[j][i] = dot / divisor;
        }
    }
    lll_reduce(&Lattice::new(gram)?)
}

fn gram_schmidt(g: &[Vec<i64>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = g.len();
    let mut mu = vec![vec![0.0; n]; n];
    let mut bstar = vec![0.0; n];
    for i in 0..n {
        for j in 0..i {
            let s: f64 = (0..j).map(|l| mu[j][l] * mu[i][l] * bstar[l]).sum();
            mu[i][j] = (g[i][j] as f64 - s) / bstar[j];
        }
        bstar[i] = g[i][i] as f64 - (0..i).map(|l| mu[i][l] * mu[i][l] * bstar[l]).sum::<f64>();
    }
    (mu, bstar)
}

fn swap_rows(g: &mut [Vec<i64>], a: usize, b: usize) {
    g.swap(a, b);
    for row in g.iter_mut() {
        row.swap(a, b);
    }
}

/// LLL reduction (δ = 0.99) of a Gram matrix; the lattice is unchanged.
pub fn lll_reduce(l: &Lattice) -> Result<Lattice> {
    let mut g: Vec<Vec<i64>> = l.gram().to_vec();
    let n = g.len();
    let delta = 0.99;
    let mut k = 1;
    let mut steps = 0usize;
    while k < n {
        steps += 1;
        if steps > 1_000_000 {
            return Err(Error::Consistency("LLL did not terminate".into()));
        }
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(&g);
            let r = mu[k][j].round() as i64;
            if r != 0 {
                reduce_pair(&mut g, k, j, r);
            }
        }
        let (mu, bstar) = gram_schmidt(&g);
        if bstar[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1] {
            k += 1;
        } else {
            swap_rows(&mut g, k, k - 1);
            k = (k - 1).max(1);
        }
    }
    let reduced = Lattice::new(g)?;
    if reduced.det() != l.det() {
        return Err(Error::Consistency("LLL changed the determinant".into()));
    }
    Ok(reduced)
}

/// Exact Gram update for `bₖ ← bₖ − r·bⱼ`.
fn reduce_pair(g: &mut [Vec<i64>], k: usize, j: usize, r: i64) {
    let n = g.len();
    let gkk = g[k][k] - 2 * r * g[k][j] + r * r * g[j][j];
    for l in 0..n {
        if l != k {
            g[k][l] -= r * g[j][l];
            g[l][k] = g[k][l];
        }
    }
    g[k][k] = gkk;
}

/// Construction A: `{x ∈ ℤⁿ : x mod 2 ∈ C} / √2` for a self-orthogonal code.
pub fn construction_a(c: &BinaryCode) -> Result<Lattice> {
    let n = c.len();
    if n > 32 {
        return Err(invalid(format!("Construction A is limited to n <= 32, got {n}")));
    }
    let gens: Vec<Vec<i64>> = c
        .generator_bits()
        .into_iter()
        .map(|r| r.into_iter().map(i64::from).collect())
        .collect();
    lattice_from_generators(&gens, n, 2, 2).map_err(|e| match e {
        Error::LatticeCheck(msg) => Error::LatticeCheck(format!(
            "{msg}: code is not self-orthogonal, Construction A is not integral"
        )),
        other => other,
    })
}

/// Generators of D₁₆⁺ scaled by 2 (`divisor = 4`, `modulus = 4`).
pub fn d16plus_generators() -> Vec<Vec<i64>> {
    let n = 16;
    let mut gens = Vec::new();
    for i in 0..n - 1 {
        let mut v = vec![0; n];
        v[i] = 2;
        v[i + 1] = -2;
        gens.push(v);
    }
    let mut v = vec![0; n];
    v[n - 2] = 2;
    v[n - 1] = 2;
    gens.push(v);
    gens.push(vec![1; n]);
    gens
}

/// Generators of the Leech lattice scaled by √8 (`divisor = 8`, `modulus = 8`),
/// from the extended Golay code: `2c` for codewords `c`, `4(e₀ + eⱼ)`, and
/// `(−3, 1²³)`.
pub fn leech_generators(golay: &BinaryCode) -> Vec<Vec<i64>> {
    let n = golay.len();
    let mut gens: Vec<Vec<i64>> = golay
        .generator_bits()
        .into_iter()
        .map(|r| r.into_iter().map(|b| 2 * i64::from(b)).collect())
        .collect();
    for j in 1..n {
        let mut v = vec![0; n];
        v[0] = 4;
        v[j] = 4;
        gens.push(v);
    }
    let mut v = vec![1; n];
    v[0] = -3;
    gens.push(v);
    gens
}
