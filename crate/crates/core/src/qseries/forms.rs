use super::arith::{bernoulli, sigma};
use super::{rat, ExactRational, QSeries};
use crate::error::{invalid, Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

/// Normalised Eisenstein series `E_k = 1 − (2k/B_k) Σ σ_{k−1}(n) qⁿ`.
pub fn eisenstein_series(k: u32, order: usize) -> Result<QSeries> {
    if k < 4 || !k.is_multiple_of(2) {
        return Err(invalid(format!(
            "Eisenstein series need even weight >= 4, got {k}"
        )));
    }
    let factor = -rat(2 * k as i64) / bernoulli(k);
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(ExactRational::one());
    for n in 1..=order as u64 {
        coeffs.push(&factor * ExactRational::from_integer(sigma(n, k - 1)?));
    }
    Ok(QSeries::new(1, coeffs)?.with_weight(k as i64))
}

/// Δ from the product `q ∏_{n≥1} (1 − qⁿ)²⁴`.
pub fn delta_product(order: usize) -> Result<QSeries> {
    if order < 1 {
        return Err(invalid("Δ needs order >= 1"));
    }
    // ∏ (1 − qⁿ)²⁴ truncated at q^{order−1}, shifted by one.
    let len = order;
    let mut p = vec![BigInt::zero(); len];
    p[0] = BigInt::one();
    for n in 1..len {
        for _ in 0..24 {
            for i in (n..len).rev() {
                let lower = p[i - n].clone();
                p[i] -= lower;
            }
        }
    }
    let coeffs = std::iter::once(BigInt::zero()).chain(p);
    Ok(QSeries::from_integers(1, coeffs)?.with_weight(12))
}

/// Δ as `(E₄³ − E₆²) / 1728`.
pub fn delta_from_eisenstein(order: usize) -> Result<QSeries> {
    if order < 1 {
        return Err(invalid("Δ needs order >= 1"));
    }
    let e4 = eisenstein_series(4, order)?;
    let e6 = eisenstein_series(6, order)?;
    let diff = e4.pow(3).sub(&e6.pow(2))?;
    Ok(diff.scale(&(ExactRational::one() / rat(1728))))
}

/// The discriminant cusp form Δ, computed both from its product expansion
/// and from `E₄³ − E₆²`; the two must agree coefficient by coefficient.
pub fn discriminant_delta(order: usize) -> Result<QSeries> {
    let product = delta_product(order)?;
    let eisen = delta_from_eisenstein(order)?;
    if !product.agrees_with(&eisen) {
        return Err(Error::Consistency(format!(
            "product and Eisenstein forms of Δ disagree below q^{}",
            order + 1
        )));
    }
    Ok(product)
}

/// `τ(0), τ(1), …, τ(n_max)` with `τ(0) = 0`.
pub fn ramanujan_tau_table(n_max: usize) -> Result<Vec<BigInt>> {
    let delta = delta_product(n_max.max(1))?;
    let ints = delta
        .integer_coeffs()
        .expect("product expansion has integer coefficients");
    Ok(ints.into_iter().take(n_max + 1).collect())
}

pub fn ramanujan_tau(n: usize) -> Result<BigInt> {
    if n == 0 {
        return Err(invalid("τ(n) needs n >= 1"));
    }
    Ok(ramanujan_tau_table(n)?.swap_remove(n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaKind {
    /// `θ₂ = Σ u^{(2n+1)²}`
    Two,
    /// `θ₃ = Σ u^{4n²}`
    Three,
}

impl TryFrom<u32> for ThetaKind {
    type Error = Error;

    fn try_from(kind: u32) -> Result<Self> {
        match kind {
            2 => Ok(Self::Two),
            3 => Ok(Self::Three),
            k => Err(invalid(format!("unsupported theta constant θ{k}"))),
        }
    }
}

/// Jacobi theta constant in the quarter-nome `u` (`u⁴ = q`), truncated at `u^{order_u}`.
pub fn theta_constant(kind: ThetaKind, order_u: usize) -> QSeries {
    let mut c = vec![0i64; order_u + 1];
    match kind {
        ThetaKind::Three => {
            c[0] = 1;
            let mut n = 1usize;
            while 4 * n * n <= order_u {
                c[4 * n * n] += 2;
                n += 1;
            }
        }
        ThetaKind::Two => {
            // n and −n−1 give the same odd square.
            let mut m = 1usize;
            while m * m <= order_u {
                c[m * m] += 2;
                m += 2;
            }
        }
    }
    QSeries::from_integers(4, c).expect("scale 4 is valid")
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Hecke operator `T_p` on a weight-`k` q-series: `aₙ ↦ a_{pn} + p^{k−1} a_{n/p}`.
///
/// The output is valid up to `q^{⌊order/p⌋}`.
pub fn hecke_operator(f: &QSeries, p: u64, k: u32) -> Result<QSeries> {
    if f.var_scale() != 1 {
        return Err(invalid("Hecke operators act on var_scale = 1 series"));
    }
    if !is_prime(p) {
        return Err(invalid(format!("T_p needs a prime p, got {p}")));
    }
    if k < 4 || !k.is_multiple_of(2) {
        return Err(invalid(format!("Hecke weight must be even >= 4, got {k}")));
    }
    let p_us = p as usize;
    if f.order() < p_us {
        return Err(Error::Truncation {
            needed: p_us,
            available: f.order(),
        });
    }
    let out_order = f.order() / p_us;
    let pk = ExactRational::from_integer(BigInt::from(p).pow(k - 1));
    let coeffs = (0..=out_order)
        .map(|n| {
            let mut c = f.coeff(p_us * n).clone();
            if n % p_us == 0 {
                c += &pk * f.coeff(n / p_us);
            }
            c
        })
        .collect();
    Ok(QSeries::new(1, coeffs)?.with_weight(k as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    fn ints(c: &[i64]) -> QSeries {
        QSeries::from_integers(1, c.iter().copied()).unwrap()
    }

    #[test]
    fn eisenstein_leading_terms() {
        assert!(eisenstein_series(4, 2).unwrap().agrees_with(&ints(&[1, 240, 2160])));
        assert!(eisenstein_series(6, 1).unwrap().agrees_with(&ints(&[1, -504])));
        let e12 = eisenstein_series(12, 1).unwrap();
        assert_eq!(e12.coeff(1), &ExactRational::new(65520.into(), 691.into()));
        assert_eq!(e12.weight(), Some(12));
        assert!(eisenstein_series(5, 3).is_err());
        assert!(eisenstein_series(2, 3).is_err());
    }

    #[test]
    fn delta_leading_terms() {
        let d = discriminant_delta(3).unwrap();
        assert!(d.agrees_with(&ints(&[0, 1, -24, 252])));
        assert!(delta_product(0).is_err());
    }

    #[test]
    fn e4_cubed_minus_e6_squared() {
        let e4 = eisenstein_series(4, 5).unwrap();
        let e6 = eisenstein_series(6, 5).unwrap();
        let diff = e4.pow(3).sub(&e6.pow(2)).unwrap();
        assert!(diff.coeff(0).is_zero());
        assert_eq!(diff.coeff(1), &rat(1728));
    }

    #[test]
    fn delta_two_routes_agree_to_200() {
        let a = delta_product(200).unwrap();
        let b = delta_from_eisenstein(200).unwrap();
        assert_eq!(a.order(), 200);
        assert!(a.agrees_with(&b));
    }

    #[test]
    fn tau_values() {
        assert_eq!(ramanujan_tau(1).unwrap(), BigInt::from(1));
        assert_eq!(ramanujan_tau(2).unwrap(), BigInt::from(-24));
        assert_eq!(ramanujan_tau(17).unwrap(), BigInt::from(-6905934));
        assert!(ramanujan_tau(0).is_err());
    }

    #[test]
    fn tau_and_sigma_multiplicative() {
        let n_max = 120usize;
        let tau = ramanujan_tau_table(n_max).unwrap();
        for m in 1..=n_max {
            for n in 1..=n_max / m {
                if m.gcd(&n) == 1 {
                    assert_eq!(tau[m * n], &tau[m] * &tau[n], "tau({m}*{n})");
                    assert_eq!(
                        sigma((m * n) as u64, 3).unwrap(),
                        sigma(m as u64, 3).unwrap() * sigma(n as u64, 3).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn theta_constants() {
        assert!(theta_constant(ThetaKind::Three, 8).agrees_with(
            &QSeries::from_integers(4, [1, 0, 0, 0, 2, 0, 0, 0, 0]).unwrap()
        ));
        assert_eq!(theta_constant(ThetaKind::Three, 8).order(), 8);
        assert!(theta_constant(ThetaKind::Two, 9).agrees_with(
            &QSeries::from_integers(4, [0, 2, 0, 0, 0, 0, 0, 0, 0, 2]).unwrap()
        ));
        assert!(theta_constant(ThetaKind::Three, 0)
            .agrees_with(&QSeries::from_integers(4, [1]).unwrap()));
        assert!(ThetaKind::try_from(4).is_err());
    }

    #[test]
    fn hamming_enumerator_at_theta_constants_is_e4() {
        // x⁸ + 14x⁴y⁴ + y⁸ at (θ₃, θ₂)
        let order = 10;
        let t3 = theta_constant(ThetaKind::Three, 4 * order);
        let t2 = theta_constant(ThetaKind::Two, 4 * order);
        let w = t3
            .pow(8)
            .add(&t3.pow(4).mul(&t2.pow(4)).unwrap().scale(&rat(14)))
            .unwrap()
            .add(&t2.pow(8))
            .unwrap();
        let projected = w.project_to_q().unwrap();
        assert!(projected.agrees_with(&eisenstein_series(4, order).unwrap()));
    }

    #[test]
    fn hecke_eigenforms() {
        let delta = delta_product(10).unwrap();
        let t2 = hecke_operator(&delta, 2, 12).unwrap();
        assert_eq!(t2.order(), 5);
        assert!(t2.agrees_with(&delta.truncate(5).unwrap().scale(&rat(-24))));

        let e4 = eisenstein_series(4, 20).unwrap();
        let t2 = hecke_operator(&e4, 2, 4).unwrap();
        assert!(t2.agrees_with(&e4.truncate(10).unwrap().scale(&rat(9))));

        let zero = QSeries::zero(1, 9).unwrap();
        assert!(hecke_operator(&zero, 3, 12).unwrap().is_zero());
    }

    #[test]
    fn hecke_rejections() {
        let delta = delta_product(4).unwrap();
        assert!(matches!(hecke_operator(&delta, 5, 12), Err(Error::Truncation { .. })));
        assert!(hecke_operator(&delta, 4, 12).is_err());
        assert!(hecke_operator(&delta, 2, 3).is_err());
        let u = theta_constant(ThetaKind::Three, 8);
        assert!(hecke_operator(&u, 2, 4).is_err());
    }

    #[test]
    fn hecke_operators_commute_in_weight_12() {
        let order = 300;
        // A non-eigenform: E₁₂ + 5Δ.
        let f = eisenstein_series(12, order)
            .unwrap()
            .add(&delta_product(order).unwrap().scale(&rat(5)))
            .unwrap();
        for (p, q) in [(2u64, 3u64), (2, 5), (3, 5)] {
            let pq = hecke_operator(&hecke_operator(&f, q, 12).unwrap(), p, 12).unwrap();
            let qp = hecke_operator(&hecke_operator(&f, p, 12).unwrap(), q, 12).unwrap();
            assert!(pq.agrees_with(&qp), "T{p} T{q}");
            assert!(pq.order() >= 10);
        }
    }
}
