use super::{rat, ExactRational};
use crate::error::{invalid, Result};
use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

fn binomial(n: u64, k: u64) -> BigInt {
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Bernoulli number `B_k` with `B₁ = −1/2`.
pub fn bernoulli(k: u32) -> ExactRational {
    // Σ_{j=0}^{m} C(m+1, j) B_j = 0 for m ≥ 1.
    let mut b: Vec<ExactRational> = Vec::with_capacity(k as usize + 1);
    b.push(ExactRational::one());
    for m in 1..=k as u64 {
        let mut acc = ExactRational::zero();
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                acc += ExactRational::from_integer(binomial(m + 1, j as u64)) * bj;
            }
        }
        b.push(-acc / rat(m as i64 + 1));
    }
    b.pop().expect("nonempty")
}

/// Divisor power sum `σ_k(n) = Σ_{d | n} dᵏ`.
pub fn sigma(n: u64, k: u32) -> Result<BigInt> {
    if n == 0 {
        return Err(invalid("sigma is undefined at n = 0"));
    }
    let mut total = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            total += BigInt::from(d).pow(k);
            let other = n / d;
            if other != d {
                total += BigInt::from(other).pow(k);
            }
        }
        d += 1;
    }
    Ok(total)
}
