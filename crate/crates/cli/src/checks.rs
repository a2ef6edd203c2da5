//! Sanity checks on the classical theory and cross-module identities.

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use unimod::codes::{builtin_code, gleason_substitution, weight_enumerator, BuiltinCode};
use unimod::dims::{dim_modular, dim_oracle, GroupTag};
use unimod::lattices::{
    builtin_lattice, construction_a, cusp_component, enumerate_shells_with_budget, theta_from_shells,
    theta_series_by_frame, BuiltinLattice, Lattice,
};
use unimod::lpbound::simplex::{revised, tableau, LpStatus, StandardLp};
use unimod::qseries::{eisenstein_series, format_rational, ramanujan_tau, sigma, ExactRational, QSeries};
use unimod::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckLine {
    pub case: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub summary: String,
    pub lines: Vec<CheckLine>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }
}

fn line(case: impl Into<String>, passed: bool, detail: impl Into<String>) -> CheckLine {
    CheckLine {
        case: case.into(),
        passed,
        detail: detail.into(),
    }
}

/// `{(m, n) : 1 ≤ m ≤ n ≤ limit, gcd(m, n) = 1}`.
pub fn coprime_pairs(limit: u64) -> Vec<(u64, u64)> {
    (1..=limit)
        .flat_map(|n| (1..=n).filter(move |m| m.gcd(&n) == 1).map(move |m| (m, n)))
        .collect()
}

pub const EXPECTED_PAIRS: usize = 3044;

/// Pairs violating `σ₃(mn) = σ₃(m)σ₃(n)`.
pub fn sigma3_failures(pairs: &[(u64, u64)]) -> Result<Vec<(u64, u64)>> {
    let mut failures = Vec::new();
    for &(m, n) in pairs {
        if sigma(m * n, 3)? != sigma(m, 3)? * sigma(n, 3)? {
            failures.push((m, n));
        }
    }
    Ok(failures)
}

pub fn hecke_check() -> Result<CheckReport> {
    let pairs = coprime_pairs(100);
    let failures = sigma3_failures(&pairs)?;
    let mut lines = vec![
        line(
            "pair count",
            pairs.len() == EXPECTED_PAIRS,
            format!("{} pairs (expected {EXPECTED_PAIRS})", pairs.len()),
        ),
        line("sigma_3 multiplicativity", failures.is_empty(), format!("{} failures", failures.len())),
    ];
    lines.extend(
        failures
            .iter()
            .map(|(m, n)| line(format!("m={m} n={n}"), false, "sigma_3(mn) != sigma_3(m) sigma_3(n)")),
    );
    Ok(CheckReport {
        name: "hecke".into(),
        summary: format!("{} pairs, {} failures", pairs.len(), failures.len()),
        lines,
    })
}

pub fn first_primes(count: usize) -> Vec<u64> {
    (2u64..).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)).take(count).collect()
}

/// `(p, |τ(p)| / (2 p^{11/2}))` for the first `count` primes.
pub fn deligne_ratios(count: usize) -> Result<Vec<(u64, f64)>> {
    first_primes(count)
        .into_iter()
        .map(|p| {
            let tau = ramanujan_tau(p as usize)?.abs().to_f64().expect("finite");
            Ok((p, tau / (2.0 * (p as f64).powf(5.5))))
        })
        .collect()
}

pub const DELIGNE_MAX_RATIO: f64 = 0.590;
pub const DELIGNE_TOLERANCE: f64 = 0.0005;

pub fn deligne_check() -> Result<CheckReport> {
    let ratios = deligne_ratios(10)?;
    let mut lines: Vec<CheckLine> = ratios
        .iter()
        .map(|&(p, r)| line(format!("p={p}"), r < 1.0, format!("ratio {r:.6}")))
        .collect();
    let &(p_max, r_max) = ratios.iter().max_by(|a, b| a.1.total_cmp(&b.1)).expect("ten primes");
    lines.push(line(
        "maximum",
        p_max == 17 && (r_max - DELIGNE_MAX_RATIO).abs() <= DELIGNE_TOLERANCE,
        format!("max ratio {r_max:.6} at p={p_max} (expected {DELIGNE_MAX_RATIO} ± {DELIGNE_TOLERANCE} at p=17)"),
    ));
    Ok(CheckReport {
        name: "deligne".into(),
        summary: format!("max ratio {r_max:.3} at p={p_max}"),
        lines,
    })
}

/// Weights `k` in `4..=k_max` (even) where the monomial count and the closed form differ.
pub fn dims_disagreements(k_max: u32) -> Result<Vec<(u32, GroupTag, u32, u32)>> {
    let mut out = Vec::new();
    for k in (4..=k_max).step_by(2) {
        for g in [GroupTag::Full, GroupTag::Gamma02] {
            let (oracle, closed) = (dim_oracle(k, g)?, dim_modular(k, g)?);
            if oracle != closed {
                out.push((k, g, oracle, closed));
            }
        }
    }
    Ok(out)
}

pub fn dims_check() -> Result<CheckReport> {
    let bad = dims_disagreements(400)?;
    let mut lines = vec![line("4 <= k <= 400, both groups", bad.is_empty(), format!("{} disagreements", bad.len()))];
    lines.extend(
        bad.iter()
            .map(|(k, g, o, c)| line(format!("k={k} {g:?}"), false, format!("oracle {o}, closed form {c}"))),
    );
    Ok(CheckReport {
        name: "dims".into(),
        summary: if bad.is_empty() {
            "all k <= 400 agree".into()
        } else {
            format!("{} disagreements", bad.len())
        },
        lines,
    })
}

fn enumerated_theta(l: &Lattice, max_norm: i64, budget: u64) -> Result<QSeries> {
    let shells = enumerate_shells_with_budget(l, max_norm, budget)?;
    if !shells.complete {
        return Err(Error::BudgetExceeded { budget });
    }
    theta_from_shells(&shells, l.rank())
}

/// Θ of Construction A equals the Gleason image of the weight enumerator to q⁵.
///
/// Golay is enumerated to q³ and carried to q⁵ by the root-frame route.
pub fn gleason_check(budget: u64) -> Result<CheckReport> {
    let mut lines = Vec::new();
    for which in BuiltinCode::ALL {
        let code = builtin_code(which)?;
        let lattice = construction_a(&code)?;
        let gleason = gleason_substitution(&weight_enumerator(&code)?, 5)?;
        if which == BuiltinCode::Golay24 {
            let enumerated = enumerated_theta(&lattice, 6, budget)?;
            let frame = theta_series_by_frame(&lattice, 5)?;
            lines.push(line(
                "golay24 enumeration = frame route (q^3)",
                enumerated.agrees_with(&frame),
                format!("{enumerated}"),
            ));
            lines.push(line("golay24 frame route = Gleason (q^5)", frame.agrees_with(&gleason), format!("{gleason}")));
        } else {
            let theta = enumerated_theta(&lattice, 10, budget)?;
            lines.push(line(
                format!("{} theta = Gleason (q^5)", which.name()),
                theta.agrees_with(&gleason) && theta.order() == 5,
                format!("{gleason}"),
            ));
        }
    }
    Ok(CheckReport {
        name: "gleason".into(),
        summary: format!("{} of {} identities hold", lines.iter().filter(|l| l.passed).count(), lines.len()),
        lines,
    })
}

/// Theta identities for the shipped lattices, root counts, and the cusp
/// decomposition of Θ_Leech.
pub fn theta_check(budget: u64) -> Result<CheckReport> {
    let mut lines = Vec::new();
    let e4 = eisenstein_series(4, 3)?;
    let e8 = enumerated_theta(&builtin_lattice(BuiltinLattice::E8)?, 6, budget)?;
    lines.push(line("Theta_E8 = E4 (q^3)", e8.agrees_with(&e4), format!("{e8}")));
    lines.push(line("N_2(E8) = 240", *e8.coeff(1) == ExactRational::from_integer(240.into()), ""));
    let e4sq = e4.pow(2);
    for which in [BuiltinLattice::D16plus, BuiltinLattice::E8E8] {
        let t = enumerated_theta(&builtin_lattice(which)?, 6, budget)?;
        lines.push(line(format!("Theta_{} = E4^2 (q^3)", which.name()), t.agrees_with(&e4sq), format!("{t}")));
        let split = cusp_component(&t, 16)?;
        lines.push(line(format!("cusp part of Theta_{} vanishes", which.name()), split.cusp.is_zero(), ""));
    }
    let d16 = enumerated_theta(&builtin_lattice(BuiltinLattice::D16plus)?, 2, budget)?;
    lines.push(line("N_2(D16+) = 480", *d16.coeff(1) == ExactRational::from_integer(480.into()), ""));
    lines.push(line("cusp part of Theta_E8 vanishes", cusp_component(&e8, 8)?.cusp.is_zero(), ""));
    let leech = enumerated_theta(&builtin_lattice(BuiltinLattice::Leech)?, 4, budget)?;
    lines.push(line("N_2(Leech) = 0", leech.coeff(1).is_zero(), ""));
    lines.push(line(
        "N_4(Leech) = 196560",
        *leech.coeff(2) == ExactRational::from_integer(196560.into()),
        format!("{leech}"),
    ));
    let c = cusp_component(&leech, 24)?.delta_coefficient;
    let expected = -ExactRational::new(65520.into(), 691.into());
    lines.push(line(
        "Theta_Leech = E12 - (65520/691) Delta (q^2)",
        c.as_ref() == Some(&expected),
        c.as_ref().map_or("none".into(), |c| format!("Delta coefficient {}", format_rational(c))),
    ));
    Ok(CheckReport {
        name: "theta".into(),
        summary: format!("{} of {} identities hold", lines.iter().filter(|l| l.passed).count(), lines.len()),
        lines,
    })
}

/// A random LP `min cᵀx, Ax ≤ b, Σx ≤ n, x ≥ 0` in standard form, feasible by construction.
pub fn random_feasible_lp(rng: &mut impl Rng, max_vars: usize, max_rows: usize) -> StandardLp {
    let n = rng.gen_range(1..=max_vars);
    let rows = rng.gen_range(1..max_rows);
    let m = rows + 1;
    let x0: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
    let mut a = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    for i in 0..m {
        let coeffs: Vec<f64> = if i < rows {
            (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
        } else {
            vec![1.0; n]
        };
        let ax: f64 = coeffs.iter().zip(&x0).map(|(a, x)| a * x).sum();
        b.push(if i < rows { ax + rng.gen_range(0.0..1.0) } else { n as f64 });
        let mut full = coeffs;
        full.extend((0..m).map(|k| if k == i { 1.0 } else { 0.0 }));
        a.push(full);
    }
    let mut c: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    c.extend(vec![0.0; m]);
    StandardLp::new(a, b, c).expect("well-formed")
}

/// Objectives `(tableau, revised)` on `count` random LPs; `None` if either is not optimal.
pub fn simplex_cross_check(count: usize, seed: u64) -> Vec<Option<(f64, f64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let lp = random_feasible_lp(&mut rng, 30, 100);
            let t = tableau::solve(&lp, 100_000);
            let r = revised::solve(&lp, 100_000);
            (t.status == LpStatus::Optimal && r.status == LpStatus::Optimal).then_some((t.objective, r.objective))
        })
        .collect()
}

pub const SIMPLEX_AGREEMENT: f64 = 1e-8;

pub fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

pub fn simplex_check(count: usize, seed: u64) -> Result<CheckReport> {
    let results = simplex_cross_check(count, seed);
    let lines: Vec<CheckLine> = results
        .iter()
        .enumerate()
        .map(|(i, r)| match r {
            Some((t, v)) => line(
                format!("lp {i}"),
                relative_gap(*t, *v) <= SIMPLEX_AGREEMENT,
                format!("tableau {t:.12} revised {v:.12}"),
            ),
            None => line(format!("lp {i}"), false, "not solved to optimality"),
        })
        .collect();
    let worst = results
        .iter()
        .flatten()
        .map(|(t, v)| relative_gap(*t, *v))
        .fold(0.0, f64::max);
    Ok(CheckReport {
        name: "simplex".into(),
        summary: format!(
            "{} of {count} LPs agree; worst relative gap {worst:.2e}",
            lines.iter().filter(|l| l.passed).count()
        ),
        lines,
    })
}
