use crate::checks::{self, CheckReport};
use crate::report::{Report, Table};
use crate::{CheckKind, Cli, Command, SolverKind};
use serde_json::{json, Value};
use unimod::codes::{builtin_code_by_name, gleason_substitution, is_type_ii, weight_enumerator};
use unimod::dims::{master_table, snapshot_mismatches};
use unimod::lattices::{
    builtin_lattice, cusp_component, density, enumerate_shells_with_budget, theta_from_shells, BuiltinLattice,
};
use unimod::lpbound::{lp_density_bound, LpConfig, Solver};
use unimod::qseries::format_rational;
use unimod::quasicrystal::{
    band_measure, fib_hamiltonian, fibonacci_word, gap_labels, mean_level_spacing, spacing_histogram,
    tridiag_eigenvalues, DEFAULT_BAND_FACTOR,
};
use unimod::{Error, Result};

/// Resolved configuration echoed into every output header.
fn resolved_config(cli: &Cli, threads: Option<usize>) -> Value {
    let mut config = serde_json::to_value(&cli.command).expect("serialisable");
    let obj = config.as_object_mut().expect("tagged enum");
    obj.insert("format".into(), json!(cli.format));
    obj.insert("seed".into(), json!(cli.seed));
    obj.insert("threads".into(), threads.map_or(json!("auto"), |n| json!(n)));
    config
}

pub fn execute(cli: &Cli, threads: Option<usize>) -> Result<Report> {
    let config = resolved_config(cli, threads);
    let mut report = match &cli.command {
        Command::Table { dmax } => table(*dmax)?,
        Command::Check { which, budget, count } => check(*which, *budget, *count, cli.seed)?,
        Command::Theta {
            lattice,
            max_norm,
            budget,
        } => theta(lattice, *max_norm, *budget)?,
        Command::Wenum { code, order } => wenum(code, *order)?,
        Command::Lp {
            dim,
            degree,
            n_sign,
            n_pos,
            r0_min,
            r0_max,
            r_max,
            s_max,
            solver,
        } => {
            let mut cfg = LpConfig::new(*dim, *degree);
            cfg.n_sign = *n_sign;
            cfg.n_pos = *n_pos;
            if let Some(v) = r0_min {
                cfg.r0_min = *v;
            }
            if let Some(v) = r0_max {
                cfg.r0_max = *v;
            }
            if let Some(v) = r_max {
                cfg.r_max = *v;
            }
            if let Some(v) = s_max {
                cfg.s_max = *v;
            }
            cfg.solver = match solver {
                SolverKind::Revised => Solver::Revised,
                SolverKind::Tableau => Solver::Tableau,
            };
            lp(&cfg)?
        }
        Command::Fib {
            k,
            lambda,
            bins,
            tol,
            gap_threshold,
            window,
        } => fib(*k, *lambda, *bins, *tol, *gap_threshold, *window)?,
    };
    report.config = config;
    Ok(report)
}

fn report(command: &str, passed: bool, summary: Vec<String>, tables: Vec<Table>, result: Value) -> Report {
    Report {
        command: command.into(),
        config: Value::Null,
        passed,
        summary,
        tables,
        result,
    }
}

fn table(dmax: u32) -> Result<Report> {
    let rows = master_table(dmax)?;
    let mismatches = snapshot_mismatches(&rows);
    let mut t = Table::new(
        "master table",
        &["d", "k", "dim S_k(SL2(Z))", "dim S_k(Gamma0(2))", "Delta", "Rootless?", "LP sharp?", "CFT?", "Status"],
    );
    for r in &rows {
        let n = r.notes.clone().unwrap_or(unimod::dims::MasterNotes {
            rootless: String::new(),
            lp_sharp: String::new(),
            cft: String::new(),
            status: String::new(),
        });
        t.push(vec![
            r.d.to_string(),
            r.k.to_string(),
            r.dim_s_full.to_string(),
            r.dim_s_g02.to_string(),
            r.delta.to_string(),
            n.rootless,
            n.lp_sharp,
            n.cft,
            n.status,
        ]);
    }
    let mut summary = vec![format!("{} rows, {} mismatches against the embedded snapshot", rows.len(), mismatches.len())];
    for (got, want) in &mismatches {
        summary.push(format!(
            "d={}: computed ({}, {}, {}), expected ({}, {}, {})",
            got.d, got.dim_s_full, got.dim_s_g02, got.delta, want.dim_s_full, want.dim_s_g02, want.delta
        ));
    }
    Ok(report(
        "table",
        mismatches.is_empty(),
        summary,
        vec![t],
        json!({ "rows": rows, "mismatches": mismatches.len() }),
    ))
}

fn check(which: CheckKind, budget: u64, count: usize, seed: u64) -> Result<Report> {
    let r: CheckReport = match which {
        CheckKind::Hecke => checks::hecke_check()?,
        CheckKind::Deligne => checks::deligne_check()?,
        CheckKind::Dims => checks::dims_check()?,
        CheckKind::Gleason => checks::gleason_check(budget)?,
        CheckKind::Theta => checks::theta_check(budget)?,
        CheckKind::Simplex => checks::simplex_check(count, seed)?,
    };
    let mut t = Table::new(&r.name, &["case", "result", "detail"]);
    for l in &r.lines {
        t.push(vec![l.case.clone(), if l.passed { "pass" } else { "FAIL" }.into(), l.detail.clone()]);
    }
    Ok(report("check", r.passed(), vec![r.summary.clone()], vec![t], serde_json::to_value(&r).expect("serialisable")))
}

fn theta(name: &str, max_norm: i64, budget: u64) -> Result<Report> {
    let which: BuiltinLattice = name.parse()?;
    let l = builtin_lattice(which)?;
    if max_norm < 1 {
        return Err(Error::InvalidArgument("max-norm must be positive".into()));
    }
    let shells = enumerate_shells_with_budget(&l, max_norm, budget)?;
    if !shells.complete {
        return Err(Error::BudgetExceeded { budget });
    }
    let mut summary = vec![
        format!("lattice {} of rank {}, det {}", which.name(), l.rank(), l.det()),
        format!("even: {}, unimodular: {}", l.is_even(), l.is_unimodular()),
        format!("{} enumeration nodes", shells.nodes),
    ];
    let step = if l.is_even() { 2 } else { 1 };
    let mut t = Table::new("shells", &["norm", "count"]);
    for m in (0..=max_norm as usize).step_by(step) {
        t.push(vec![m.to_string(), shells.counts[m].to_string()]);
        if m > 0 {
            summary.push(format!("N_{m} = {}", shells.counts[m]));
        }
    }
    let mut result = json!({
        "lattice": which.name(),
        "rank": l.rank(),
        "counts": shells.counts,
        "nodes": shells.nodes,
    });
    let mut passed = true;
    if l.is_even() && l.is_unimodular() && max_norm >= 2 {
        let series = theta_from_shells(&shells, l.rank())?;
        summary.push(format!("theta = {series}"));
        result["theta"] = json!(series.to_string());
        if l.rank() % 8 == 0 && series.order() >= 2 {
            match cusp_component(&series, l.rank() as u32) {
                Ok(split) => {
                    summary.push(format!("theta - E_{} = {}", l.rank() / 2, split.cusp));
                    if let Some(c) = &split.delta_coefficient {
                        summary.push(format!("theta = E_12 + ({}) Delta", format_rational(c)));
                        result["delta_coefficient"] = json!(format_rational(c));
                    }
                }
                Err(e) => {
                    summary.push(format!("cusp decomposition failed: {e}"));
                    passed = false;
                }
            }
        }
    }
    Ok(report("theta", passed, summary, vec![t], result))
}

fn wenum(name: &str, order: usize) -> Result<Report> {
    let code = builtin_code_by_name(name)?;
    let w = weight_enumerator(&code)?;
    let type_ii = is_type_ii(&code);
    let image = gleason_substitution(&w, order)?;
    let mut t = Table::new("weight distribution", &["weight", "count"]);
    for (wt, c) in w.counts.iter().enumerate().filter(|(_, c)| **c > 0) {
        t.push(vec![wt.to_string(), c.to_string()]);
    }
    let summary = vec![
        format!("[{}, {}] code, {} codewords, minimum weight {:?}", code.len(), code.dim(), w.total(), w.min_weight()),
        format!("Type II: {} ({})", type_ii.is_type_ii, type_ii.reason),
        format!("theta image: {image}"),
    ];
    let result = json!({
        "code": name.to_ascii_lowercase(),
        "n": code.len(),
        "k": code.dim(),
        "counts": w.counts,
        "type_ii": type_ii.is_type_ii,
        "theta_image": image.to_string(),
    });
    Ok(report("wenum", true, summary, vec![t], result))
}

/// Densest shipped lattice in dimension `d` and its density.
pub fn best_lattice(d: usize) -> Result<(String, f64)> {
    let which = match d {
        8 => BuiltinLattice::E8,
        16 => BuiltinLattice::D16plus,
        24 => BuiltinLattice::Leech,
        _ => BuiltinLattice::Z(d),
    };
    Ok((which.name(), density(&builtin_lattice(which)?)?))
}

fn lp(cfg: &LpConfig) -> Result<Report> {
    let res = lp_density_bound(cfg)?;
    let (best_name, best) = best_lattice(cfg.dim)?;
    let bound = res.bound_density;
    let ratio = bound.map(|b| b / best);
    let mut summary = vec![
        format!("status {:?}, r0 = {:.8}", res.status, res.r0),
        match bound {
            Some(b) => format!("bound {b:.12} vs {best_name} density {best:.12}: ratio {:.8}", b / best),
            None => format!("no verified bound (candidate {:.12})", res.candidate_bound()),
        },
        format!("max violation {:.3e} (relative to max |c_j|)", res.max_violation),
    ];
    summary.push(format!("{} simplex iterations", res.iterations));
    let mut t = Table::new("coefficients", &["j", "c_j"]);
    for (j, c) in res.coeffs.coeffs.iter().enumerate() {
        t.push(vec![j.to_string(), format!("{c:e}")]);
    }
    let result = json!({
        "d": cfg.dim,
        "bound_density": bound,
        "ratio_to_best_lattice": ratio,
        "best_lattice": best_name,
        "best_density": best,
        "degree": cfg.degree,
        "grid": { "n_sign": cfg.n_sign, "n_pos": cfg.n_pos, "r_max": cfg.r_max, "s_max": cfg.s_max },
        "r0": res.r0,
        "max_violation": res.max_violation,
        "iterations": res.iterations,
        "coeffs": res.coeffs.coeffs,
    });
    Ok(report("lp", bound.is_some(), summary, vec![t], result))
}

fn fib(k: u32, lambda: f64, bins: usize, tol: f64, gap_threshold: f64, window: usize) -> Result<Report> {
    let word = fibonacci_word(k)?;
    let h = fib_hamiltonian(&word, lambda)?;
    let eigs = tridiag_eigenvalues(&h, tol)?;
    let n = eigs.len();
    let mut summary = vec![
        format!("word length {n} (a: {}, b: {}), lambda = {lambda}", word.count('a'), word.count('b')),
        format!("spectrum in [{:.10}, {:.10}]", eigs[0], eigs[n - 1]),
    ];
    let mut passed = n == word.len();
    if lambda == 0.0 {
        let dev = eigs
            .iter()
            .enumerate()
            .map(|(i, e)| (e - 2.0 * (std::f64::consts::PI * (n - i) as f64 / (n + 1) as f64).cos()).abs())
            .fold(0.0, f64::max);
        summary.push(format!("max deviation from 2cos(pi j/(N+1)): {dev:.3e}"));
        passed &= dev <= 10.0 * tol;
    }
    let gaps = gap_labels(&eigs, gap_threshold);
    let mut gt = Table::new("gap labels", &["rank", "ids", "m", "frac(m/phi)", "deviation", "lower", "upper", "width"]);
    for (i, g) in gaps.iter().enumerate() {
        gt.push(vec![
            (i + 1).to_string(),
            format!("{:.6}", g.ids),
            g.m.to_string(),
            format!("{:.6}", g.label),
            format!("{:.2e}", g.deviation),
            format!("{:.8}", g.lower),
            format!("{:.8}", g.upper),
            format!("{:.8}", g.width),
        ]);
    }
    summary.push(format!("{} gaps wider than {gap_threshold}", gaps.len()));
    let band = band_measure(&eigs, DEFAULT_BAND_FACTOR * mean_level_spacing(&eigs));
    summary.push(format!("band measure proxy {band:.6}"));
    let mut tables = vec![gt];
    let mut result = json!({
        "n": n,
        "lambda": lambda,
        "band_measure": band,
        "gaps": gaps,
        "spectrum": eigs,
    });
    if n >= 100 {
        let hist = spacing_histogram(&eigs, bins, window)?;
        summary.push(format!("unfolded spacings: mean {:.6}, variance {:.6}", hist.mean, hist.variance));
        let mut ht = Table::new("spacing histogram", &["lower", "upper", "count"]);
        for (i, c) in hist.counts.iter().enumerate() {
            ht.push(vec![format!("{:.6}", hist.edges[i]), format!("{:.6}", hist.edges[i + 1]), c.to_string()]);
        }
        tables.push(ht);
        result["histogram"] = json!({ "edges": hist.edges, "counts": hist.counts, "mean": hist.mean, "variance": hist.variance });
    }
    let mut st = Table::new("spectrum", &["eigenvalue"]);
    for e in &eigs {
        st.push(vec![format!("{e}")]);
    }
    tables.push(st);
    Ok(report("fib", passed, summary, tables, result))
}
