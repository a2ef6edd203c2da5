//! Truncated power series with exact rational coefficients.
//!
//! A [`QSeries`] lives either in the nome `q` (`var_scale = 1`) or in the
//! quarter-nome `u` with `u⁴ = q` (`var_scale = 4`). The quarter-nome is
//! needed for θ₂, whose exponents are `(n + ½)²`. Every operation tracks the
//! order up to which the result is valid and never extends it.

mod arith;
mod forms;

pub use arith::{bernoulli, sigma};
pub use forms::{
    delta_from_eisenstein, delta_product, discriminant_delta, eisenstein_series, hecke_operator,
    ramanujan_tau, ramanujan_tau_table, theta_constant, ThetaKind,
};

use crate::error::{invalid, Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Exact rational number, always in lowest terms with a positive denominator.
pub type ExactRational = BigRational;

pub(crate) fn rat(n: i64) -> ExactRational {
    ExactRational::from_integer(BigInt::from(n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    var_scale: u32,
    coeffs: Vec<ExactRational>,
    weight: Option<i64>,
}

impl QSeries {
    pub fn new(var_scale: u32, coeffs: Vec<ExactRational>) -> Result<Self> {
        check_scale(var_scale)?;
        if coeffs.is_empty() {
            return Err(invalid("a series needs at least the constant coefficient"));
        }
        Ok(Self {
            var_scale,
            coeffs,
            weight: None,
        })
    }

    pub fn from_integers<I>(var_scale: u32, coeffs: I) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: Into<BigInt>,
    {
        Self::new(
            var_scale,
            coeffs
                .into_iter()
                .map(|c| ExactRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero(var_scale: u32, order: usize) -> Result<Self> {
        Self::new(var_scale, vec![ExactRational::zero(); order + 1])
    }

    pub fn one(var_scale: u32, order: usize) -> Result<Self> {
        let mut s = Self::zero(var_scale, order)?;
        s.coeffs[0] = ExactRational::one();
        Ok(s)
    }

    pub fn with_weight(mut self, weight: i64) -> Self {
        self.weight = Some(weight);
        self
    }

    pub fn var_scale(&self) -> u32 {
        self.var_scale
    }

    /// Highest exponent whose coefficient is known.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn weight(&self) -> Option<i64> {
        self.weight
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    /// Coefficient of the `n`-th power of the series variable.
    ///
    /// Panics if `n` exceeds the truncation order.
    pub fn coeff(&self, n: usize) -> &ExactRational {
        &self.coeffs[n]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Integer coefficients, if every coefficient is integral.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::Truncation {
                needed: order,
                available: self.order(),
            });
        }
        Ok(Self {
            var_scale: self.var_scale,
            coeffs: self.coeffs[..=order].to_vec(),
            weight: self.weight,
        })
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.var_scale != other.var_scale {
            return Err(Error::VarScaleMismatch {
                left: self.var_scale,
                right: other.var_scale,
            });
        }
        Ok(())
    }

    fn joint_weight(&self, other: &Self) -> Option<i64> {
        match (self.weight, other.weight) {
            (Some(a), Some(b)) if a == b => Some(a),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|i| &self.coeffs[i] + &other.coeffs[i])
            .collect();
        Ok(Self {
            var_scale: self.var_scale,
            coeffs,
            weight: self.joint_weight(other),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-ExactRational::one())
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        Self {
            var_scale: self.var_scale,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            weight: self.weight,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let order = self.order().min(other.order());
        let mut coeffs = vec![ExactRational::zero(); order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        let weight = match (self.weight, other.weight) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        Ok(Self {
            var_scale: self.var_scale,
            coeffs,
            weight,
        })
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Self::one(self.var_scale, self.order()).expect("valid scale");
        if exp == 0 {
            return result;
        }
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).expect("same scale");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same scale");
            }
        }
        result.weight = self.weight.map(|w| w * exp as i64);
        result
    }

    /// Re-express a q-series in the quarter-nome by sending `qⁿ` to `u⁴ⁿ`.
    pub fn to_quarter_nome(&self) -> Result<Self> {
        if self.var_scale != 1 {
            return Err(invalid("only var_scale = 1 series embed into the quarter-nome"));
        }
        let order = 4 * self.order();
        let mut coeffs = vec![ExactRational::zero(); order + 1];
        for (n, c) in self.coeffs.iter().enumerate() {
            coeffs[4 * n] = c.clone();
        }
        Ok(Self {
            var_scale: 4,
            coeffs,
            weight: self.weight,
        })
    }

    /// Project a quarter-nome series onto integral powers of `q`.
    ///
    /// Fails if a coefficient at a `u`-exponent not divisible by 4 is nonzero.
    pub fn project_to_q(&self) -> Result<Self> {
        if self.var_scale != 4 {
            return Err(invalid("projection needs a var_scale = 4 series"));
        }
        if let Some((exponent, _)) = self
            .coeffs
            .iter()
            .enumerate()
            .find(|(e, c)| e % 4 != 0 && !c.is_zero())
        {
            return Err(Error::Projection { exponent });
        }
        let coeffs = self.coeffs.iter().step_by(4).cloned().collect();
        Ok(Self {
            var_scale: 1,
            coeffs,
            weight: self.weight,
        })
    }

    /// Exact equality of coefficients up to the common truncation order.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.var_scale == other.var_scale
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| a == b)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("series serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn check_scale(var_scale: u32) -> Result<()> {
    match var_scale {
        1 | 4 => Ok(()),
        s => Err(invalid(format!("var_scale must be 1 or 4, got {s}"))),
    }
}

pub fn format_rational(r: &ExactRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<ExactRational> {
    let err = || Error::Parse(format!("bad rational `{s}`"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| err())?;
    let d = BigInt::from_str(d).map_err(|_| err())?;
    if d.is_zero() || d.is_negative() {
        return Err(err());
    }
    Ok(ExactRational::new(n, d))
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    var_scale: u32,
    order: usize,
    coeffs: Vec<String>,
}

impl Serialize for QSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson {
            var_scale: self.var_scale,
            order: self.order(),
            coeffs: self.coeffs.iter().map(format_rational).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = SeriesJson::deserialize(deserializer)?;
        if raw.coeffs.len() != raw.order + 1 {
            return Err(D::Error::custom("coeffs must have order + 1 entries"));
        }
        let coeffs = raw
            .coeffs
            .iter()
            .map(|c| parse_rational(c))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        QSeries::new(raw.var_scale, coeffs).map_err(D::Error::custom)
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = if self.var_scale == 1 { "q" } else { "u" };
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let abs = c.abs();
            match n {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    if n == 1 {
                        write!(f, "{var}")?;
                    } else {
                        write!(f, "{var}^{n}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({var}^{})", self.order() + 1)
    }
}
