//! Binary linear codes, Type II checks and weight enumerators.

use crate::error::{invalid, Error, Result};
use crate::qseries::{theta_constant, ExactRational, QSeries, ThetaKind};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Largest dimension for which codewords are enumerated.
pub const MAX_ENUMERATION_DIM: usize = 28;

/// Largest length for which the exhaustive doubly-even check runs.
const EXHAUSTIVE_TYPE_II_LEN: usize = 32;

/// Binary linear code of length `n ≤ 64` with a reduced row-echelon generator.
///
/// Bit `i` of each row is coordinate `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryCode {
    n: usize,
    rows: Vec<u64>,
}

fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Row-reduce in place; returns the rank and leaves the basis in the first rows.
fn row_reduce(rows: &mut Vec<u64>, n: usize) -> usize {
    let mut rank = 0;
    for col in 0..n {
        let bit = 1u64 << col;
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r] & bit != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && *row & bit != 0 {
                *row ^= p;
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rank
}

impl BinaryCode {
    /// Build a code from a `k × n` 0/1 matrix whose rows must be independent.
    pub fn new(bits: &[Vec<u8>]) -> Result<Self> {
        let n = bits.first().map(Vec::len).unwrap_or(0);
        if bits.is_empty() || n == 0 {
            return Err(invalid("generator matrix is empty"));
        }
        if n > 64 {
            return Err(invalid(format!("code length {n} exceeds 64")));
        }
        let mut rows = Vec::with_capacity(bits.len());
        for row in bits {
            if row.len() != n {
                return Err(invalid("generator rows have different lengths"));
            }
            let mut word = 0u64;
            for (i, &b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => word |= 1 << i,
                    _ => return Err(invalid(format!("entry {b} is not a bit"))),
                }
            }
            rows.push(word);
        }
        Self::from_words(n, rows)
    }

    /// Build a code from rows packed as bit words.
    pub fn from_words(n: usize, mut rows: Vec<u64>) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(invalid(format!("code length {n} outside 1..=64")));
        }
        if rows.iter().any(|&r| r & !mask(n) != 0) {
            return Err(invalid("row has bits beyond the code length"));
        }
        let expected = rows.len();
        let achieved = row_reduce(&mut rows, n);
        if achieved != expected {
            return Err(Error::RankDeficient { expected, achieved });
        }
        Ok(Self { n, rows })
    }

    /// The zero code `[n, 0]`.
    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(invalid(format!("code length {n} outside 1..=64")));
        }
        Ok(Self { n, rows: Vec::new() })
    }

    /// Parse rows of `0`/`1` characters; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let bits = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| match c {
                        '0' => Ok(0),
                        '1' => Ok(1),
                        other => Err(Error::Parse(format!("unexpected character `{other}`"))),
                    })
                    .collect::<Result<Vec<u8>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(&bits)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn generator(&self) -> &[u64] {
        &self.rows
    }

    pub fn generator_bits(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|&r| (0..self.n).map(|i| ((r >> i) & 1) as u8).collect())
            .collect()
    }

    /// Calls `visit` on all `2ᵏ` codewords in Gray-code order.
    fn for_each_codeword(&self, mut visit: impl FnMut(u64)) {
        let mut word = 0u64;
        visit(word);
        for i in 1u64..(1u64 << self.dim()) {
            word ^= self.rows[i.trailing_zeros() as usize];
            visit(word);
        }
    }

    pub fn contains(&self, word: u64) -> bool {
        let mut w = word;
        for &r in &self.rows {
            let lead = r.trailing_zeros();
            if w >> lead & 1 == 1 {
                w ^= r;
            }
        }
        w == 0
    }
}

impl fmt::Display for BinaryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.generator_bits() {
            let s: String = row.iter().map(|b| if *b == 1 { '1' } else { '0' }).collect();
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeIiReport {
    pub is_type_ii: bool,
    pub reason: String,
}

/// Checks that `c` is doubly-even and self-dual.
///
/// Uses the generator criteria (dimension `n/2`, every row weight `≡ 0 mod
/// 4`, every pairwise intersection even); for `n ≤ 32` every codeword weight
/// is also checked directly and the two verdicts must agree.
pub fn is_type_ii(c: &BinaryCode) -> TypeIiReport {
    let fail = |reason: String| TypeIiReport {
        is_type_ii: false,
        reason,
    };
    if !c.n.is_multiple_of(2) || c.dim() != c.n / 2 {
        return fail(format!("dimension {} is not n/2 for n = {}", c.dim(), c.n));
    }
    for (i, &a) in c.rows.iter().enumerate() {
        let w = a.count_ones();
        if w % 4 != 0 {
            return fail(format!("generator row {i} has weight {w}, not divisible by 4"));
        }
        for (j, &b) in c.rows.iter().enumerate().skip(i + 1) {
            if (a & b).count_ones() % 2 != 0 {
                return fail(format!("rows {i} and {j} are not orthogonal"));
            }
        }
    }
    if c.n <= EXHAUSTIVE_TYPE_II_LEN {
        let mut bad = None;
        c.for_each_codeword(|w| {
            if bad.is_none() && w.count_ones() % 4 != 0 {
                bad = Some(w);
            }
        });
        if let Some(w) = bad {
            return fail(format!(
                "generator criteria passed but codeword {w:#x} has weight {}",
                w.count_ones()
            ));
        }
    }
    TypeIiReport {
        is_type_ii: true,
        reason: format!("[{}, {}] doubly-even self-dual", c.n, c.dim()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightEnumerator {
    pub n: usize,
    /// `counts[w]` is the number of codewords of Hamming weight `w`.
    pub counts: Vec<u64>,
}

impl WeightEnumerator {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn min_weight(&self) -> Option<usize> {
        self.counts.iter().skip(1).position(|&c| c > 0).map(|w| w + 1)
    }

    pub fn is_palindromic(&self) -> bool {
        self.counts.iter().eq(self.counts.iter().rev())
    }

    /// The counts as a JSON array.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.counts).expect("integer array")
    }
}

/// Weight distribution by enumerating all `2ᵏ` codewords.
pub fn weight_enumerator(c: &BinaryCode) -> Result<WeightEnumerator> {
    let k = c.dim();
    if k > MAX_ENUMERATION_DIM {
        return Err(Error::TooLarge(format!(
            "dimension {k} exceeds the enumeration limit {MAX_ENUMERATION_DIM}"
        )));
    }
    // Split on the top `split` generators; each task walks the rest by Gray code.
    let split = k.saturating_sub(16).min(8);
    let low = BinaryCode {
        n: c.n,
        rows: c.rows[..k - split].to_vec(),
    };
    let high = &c.rows[k - split..];
    let counts = (0u64..1 << split)
        .into_par_iter()
        .map(|prefix| {
            let offset = high
                .iter()
                .enumerate()
                .filter(|(i, _)| prefix >> i & 1 == 1)
                .fold(0u64, |acc, (_, r)| acc ^ r);
            let mut counts = vec![0u64; c.n + 1];
            low.for_each_codeword(|w| counts[(w ^ offset).count_ones() as usize] += 1);
            counts
        })
        .reduce(
            || vec![0u64; c.n + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(WeightEnumerator { n: c.n, counts })
}

/// Evaluates `W(θ₃, θ₂) = Σ_w A_w θ₃^{n−w} θ₂^w` and projects it to a q-series
/// truncated at `q^order`.
///
/// A coefficient at a quarter-nome exponent not divisible by 4 means the
/// enumerator did not come from a doubly-even code.
pub fn gleason_substitution(w: &WeightEnumerator, order: usize) -> Result<QSeries> {
    if w.counts.len() != w.n + 1 {
        return Err(invalid("weight enumerator must have n + 1 entries"));
    }
    let order_u = 4 * order;
    let t3 = theta_constant(ThetaKind::Three, order_u);
    let t2 = theta_constant(ThetaKind::Two, order_u);
    let powers = |base: &QSeries| {
        let mut out = vec![QSeries::one(4, order_u).expect("scale 4")];
        for _ in 0..w.n {
            let next = out.last().unwrap().mul(base).expect("same scale");
            out.push(next);
        }
        out
    };
    let p3 = powers(&t3);
    let p2 = powers(&t2);
    let mut total = QSeries::zero(4, order_u)?;
    for (weight, &count) in w.counts.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let term = p3[w.n - weight]
            .mul(&p2[weight])?
            .scale(&ExactRational::from_integer(BigInt::from(count)));
        total = total.add(&term)?;
    }
    Ok(total.project_to_q()?.with_weight(w.n as i64 / 2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BuiltinCode {
    Hamming8,
    D16plus,
    Golay24,
}

impl BuiltinCode {
    pub const ALL: [BuiltinCode; 3] = [Self::Hamming8, Self::D16plus, Self::Golay24];

    pub fn name(self) -> &'static str {
        match self {
            Self::Hamming8 => "hamming8",
            Self::D16plus => "d16plus",
            Self::Golay24 => "golay24",
        }
    }

    fn source(self) -> &'static str {
        match self {
            Self::Hamming8 => include_str!("../data/codes/hamming8.txt"),
            Self::D16plus => include_str!("../data/codes/d16plus.txt"),
            Self::Golay24 => include_str!("../data/codes/golay24.txt"),
        }
    }
}

impl std::str::FromStr for BuiltinCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownBuiltin(s.to_string()))
    }
}

/// One of the shipped Type II codes, checked on load.
pub fn builtin_code(which: BuiltinCode) -> Result<BinaryCode> {
    let code = BinaryCode::parse(which.source())?;
    let report = is_type_ii(&code);
    if !report.is_type_ii {
        return Err(Error::Consistency(format!(
            "shipped code {} is not Type II: {}",
            which.name(),
            report.reason
        )));
    }
    Ok(code)
}

pub fn builtin_code_by_name(name: &str) -> Result<BinaryCode> {
    builtin_code(name.parse()?)
}
