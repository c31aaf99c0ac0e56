//! Batch commands behind the `lebesgue` binary. Each command reads a
//! [`RunConfig`], writes its machine-readable output and returns the exit
//! code: 0 success, 1 usage, 2 quadrature did not converge, 3 identity
//! violated.

mod config;
mod grammar;

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::asymptotics::{full_predictor, main_term, remainder_envelope, SweepRecord};
use crate::error::{Error, Result};
use crate::irrational::{
    cf_expand, convergent_denominators, liouville_dip_scan, study_ratio, AlphaSpec,
};
use crate::norm::{frak_f, verify_identity, Kernel, MuRange, NormEngine, NormResult};
use crate::simplex::DilationVector;

pub use config::{parse_dilation, RunConfig, KNOWN_KEYS};
pub use grammar::{expand_sweep, AxisSpec};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_IDENTITY: i32 = 3;
pub const WORKERS_ENV: &str = "LEBESGUE_WORKERS";

/// Floats in CSV: 17 significant digits, round-trip exact.
pub fn fmt_f(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

fn conventions(mu: MuRange) -> serde_json::Value {
    json!({
        "norm": "plain integral over T^s; normalized = value/(2pi)^s",
        "log": "natural",
        "mu_range": mu.name(),
        "zero_dim": "a 0-variate kernel is a constant; its norm is its absolute value",
    })
}

fn metadata_lines(command: &str, cfg: &RunConfig, mu: MuRange) -> String {
    let mut s = format!("# simplex-lebesgue {VERSION} {command}\n");
    s.push_str(&format!(
        "# conventions: norm=plain-integral log=natural mu_range={} zero_dim=abs-value\n",
        mu.name()
    ));
    for (k, v) in cfg.entries() {
        s.push_str(&format!("# config: {k} = {v}\n"));
    }
    s
}

fn exit_for(e: &Error) -> i32 {
    match e {
        Error::NotConverged { .. } | Error::Parseval { .. } => EXIT_NOT_CONVERGED,
        _ => EXIT_USAGE,
    }
}

fn fail(err: &mut dyn Write, e: &Error) -> i32 {
    let _ = writeln!(err, "error: {e}");
    exit_for(e)
}

fn emit(out: &mut dyn Write, cfg: &RunConfig, key: &str, text: &str) -> Result<()> {
    match cfg.get(key) {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

/// Installs the global worker pool from the `workers` key or the
/// environment. Calling it twice is harmless.
pub fn configure_workers(cfg: &RunConfig) -> Result<()> {
    let from_env = std::env::var(WORKERS_ENV).ok();
    let raw = cfg.get("workers").map(str::to_string).or(from_env);
    if let Some(raw) = raw {
        let n: usize = raw
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("invalid worker count {raw:?}")))?;
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

pub fn cmd_norm(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let setup = || -> Result<(Kernel, DilationVector, NormEngine)> {
        let kernel = Kernel::parse(cfg.require("kernel")?)?;
        let n = cfg.dilation("n")?;
        if kernel != Kernel::D && kernel != Kernel::F && n.dim() < 2 {
            return Err(Error::InvalidArgument(format!(
                "{} needs at least two entries",
                kernel.name()
            )));
        }
        Ok((kernel, n, NormEngine::new(cfg.norm_config()?)))
    };
    let (kernel, n, engine) = match setup() {
        Ok(v) => v,
        Err(e) => return fail(err, &e),
    };
    let (result, converged, code): (NormResult, bool, i32) = match engine.l1_norm(kernel, &n) {
        Ok(r) => (r, true, EXIT_OK),
        Err(Error::NotConverged { tol, history }) => {
            let _ = writeln!(err, "warning: quadrature did not reach tol {tol:e}");
            let last = history.last().cloned();
            let value = last
                .as_ref()
                .map_or(f64::NAN, |s| s.extrapolated.unwrap_or(s.riemann));
            let dim = kernel.arity(n.dim());
            let r = NormResult {
                kernel: kernel.name().into(),
                dim,
                value,
                normalized: value / (2.0 * std::f64::consts::PI).powi(dim as i32),
                grid: last.map(|s| s.grid).unwrap_or_default(),
                error_estimate: f64::NAN,
                parseval_rel_error: f64::NAN,
                history,
            };
            (r, false, EXIT_NOT_CONVERGED)
        }
        Err(e) => return fail(err, &e),
    };
    let doc = json!({
        "version": VERSION,
        "command": "norm",
        "config": cfg,
        "conventions": conventions(MuRange::Theorem),
        "kernel": kernel.name(),
        "n": n.entries(),
        "converged": converged,
        "value": result.value,
        "normalized": result.normalized,
        "dim": result.dim,
        "grid": result.grid,
        "error_estimate": result.error_estimate,
        "parseval_rel_error": result.parseval_rel_error,
        "history": result.history,
    });
    if let Err(e) = emit(out, cfg, "output", &to_json(&doc)) {
        return fail(err, &e);
    }
    code
}

pub fn cmd_verify(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let run = || -> Result<crate::norm::IdentityReport> {
        let n = cfg.dilation("n")?;
        let points: usize = cfg.parsed("points", 100)?;
        let seed: u64 = cfg.parsed("seed", 0)?;
        let nu_max = cfg.norm_config()?.nu_max;
        verify_identity(&n, points, nu_max, seed)
    };
    let report = match run() {
        Ok(r) => r,
        Err(e) => return fail(err, &e),
    };
    let mut worst = report.points.clone();
    worst.sort_by(|a, b| (b.residual - b.allowed).total_cmp(&(a.residual - a.allowed)));
    worst.truncate(5);
    let doc = json!({
        "version": VERSION,
        "command": "verify",
        "config": cfg,
        "conventions": conventions(MuRange::Theorem),
        "n": report.dilation,
        "nu_max": report.nu_max,
        "seed": report.seed,
        "points": report.points.len(),
        "lattice_points": report.lattice_points.to_string(),
        "passed": report.passed,
        "median_residual": report.median_residual,
        "max_residual": report.max_residual,
        "worst_excess": report.worst_excess,
        "worst_points": worst,
    });
    if let Err(e) = emit(out, cfg, "output", &to_json(&doc)) {
        return fail(err, &e);
    }
    if report.passed {
        EXIT_OK
    } else {
        let _ = writeln!(err, "identity violated; worst points:");
        for p in worst.iter().filter(|p| p.residual > p.allowed) {
            let _ = writeln!(
                err,
                "  x = {:?}: residual {:e} > allowed {:e}",
                p.x, p.residual, p.allowed
            );
        }
        EXIT_IDENTITY
    }
}

/// One sweep row. Predictor columns are NaN where the hypothesis (ascending
/// entries above 3) fails.
pub fn sweep_record(
    engine: &NormEngine,
    n: &DilationVector,
    with_s: bool,
    with_frak: bool,
    t_nodes: usize,
    mu: MuRange,
    timing: bool,
) -> Result<SweepRecord> {
    let start = Instant::now();
    let d = n.dim();
    let dres = engine.l1_norm(Kernel::D, n)?;
    let norm_s = if with_s && d >= 2 {
        Some(engine.l1_norm(Kernel::S, n)?.value)
    } else {
        None
    };
    let norm_f = Some(engine.l1_norm(Kernel::F, n)?.value);
    let hypothesis = main_term(n).is_ok();
    let mut frak = Vec::new();
    if with_frak && n.is_sorted_ascending() {
        for k in 2..=d {
            frak.push(frak_f(engine, k, n, t_nodes, mu)?.value);
        }
    }
    let (main, frak_contribution) = if hypothesis {
        let map: BTreeMap<usize, f64> = if with_frak {
            frak.iter().enumerate().map(|(i, v)| (i + 2, *v)).collect()
        } else {
            (2..=d).map(|k| (k, 0.0)).collect()
        };
        let p = full_predictor(n, &map)?;
        (p.main_term, p.frak_contribution())
    } else {
        (f64::NAN, f64::NAN)
    };
    let envelope = remainder_envelope(n);
    let residual = dres.value - (main + frak_contribution);
    Ok(SweepRecord {
        n: n.entries().to_vec(),
        norm_d: dres.value,
        norm_s,
        norm_f,
        frak,
        main_term: main,
        frak_contribution,
        residual,
        envelope,
        ratio: residual / envelope,
        grid: dres.grid_label(),
        seconds: if timing { start.elapsed().as_secs_f64() } else { 0.0 },
    })
}

fn sweep_axes(cfg: &RunConfig) -> Result<Vec<AxisSpec>> {
    let mut axes = Vec::new();
    for j in 1..=6 {
        match cfg.get(&format!("n{j}")) {
            Some(src) => {
                if axes.len() != j - 1 {
                    return Err(Error::Parse(format!("axis n{j} given without n{}", j - 1)));
                }
                axes.push(AxisSpec::parse(src)?);
            }
            None => {}
        }
    }
    if axes.is_empty() {
        return Err(Error::Parse("a sweep needs at least --n1".into()));
    }
    Ok(axes)
}

pub fn sweep_csv(cfg: &RunConfig) -> Result<String> {
    let axes = sweep_axes(cfg)?;
    let d = axes.len();
    let points = expand_sweep(&axes)?;
    let engine = NormEngine::new(cfg.norm_config()?);
    let with_s = cfg.flag("with_s", true)?;
    let with_frak = cfg.flag("with_frak", true)?;
    let timing = cfg.flag("timing", false)?;
    let t_nodes = cfg.t_nodes()?;
    let mu = cfg.mu_range()?;
    let dilations: Vec<DilationVector> = points
        .into_iter()
        .map(DilationVector::new)
        .collect::<Result<_>>()?;
    let records: Vec<SweepRecord> = dilations
        .par_iter()
        .map(|n| sweep_record(&engine, n, with_s, with_frak, t_nodes, mu, timing))
        .collect::<Result<_>>()?;

    let mut s = metadata_lines("sweep", cfg, mu);
    let mut header = vec!["d".to_string()];
    header.extend((1..=d).map(|j| format!("n{j}")));
    header.extend(["norm_D", "norm_S", "norm_F"].map(String::from));
    header.extend((2..=d).map(|k| format!("frakF{k}")));
    header.extend(
        ["main_term", "residual", "envelope", "ratio", "grid_M", "seconds"].map(String::from),
    );
    s.push_str(&header.join(","));
    s.push('\n');
    for r in &records {
        let mut row = vec![d.to_string()];
        row.extend(r.n.iter().map(|v| fmt_f(*v)));
        row.push(fmt_f(r.norm_d));
        row.push(fmt_f(r.norm_s.unwrap_or(f64::NAN)));
        row.push(fmt_f(r.norm_f.unwrap_or(f64::NAN)));
        for k in 2..=d {
            row.push(fmt_f(r.frak.get(k - 2).copied().unwrap_or(f64::NAN)));
        }
        row.extend([r.main_term, r.residual, r.envelope, r.ratio].map(fmt_f));
        row.push(r.grid.clone());
        row.push(fmt_f(r.seconds));
        s.push_str(&row.join(","));
        s.push('\n');
    }
    Ok(s)
}

pub fn cmd_sweep(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match sweep_csv(cfg).and_then(|csv| emit(out, cfg, "output", &csv)) {
        Ok(()) => EXIT_OK,
        Err(e) => fail(err, &e),
    }
}

fn irrational_grid(cfg: &RunConfig, alpha: &AlphaSpec) -> Result<Vec<u64>> {
    let mut grid: Vec<u64> = match cfg.get("n") {
        Some(list) => list
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("invalid n {t:?}")))
            })
            .collect::<Result<_>>()?,
        None => {
            let nmin: u64 = cfg.parsed("nmin", 16)?;
            let nmax: u64 = cfg
                .get("nmax")
                .ok_or_else(|| Error::Parse("give --n or --nmax".into()))?
                .parse()
                .map_err(|_| Error::Parse("invalid nmax".into()))?;
            let per_octave: u32 = cfg.parsed("per_octave", 1)?;
            if nmin < 2 || nmax < nmin || per_octave == 0 {
                return Err(Error::Parse("need 2 ≤ nmin ≤ nmax and per_octave ≥ 1".into()));
            }
            let mut g = Vec::new();
            let mut i = 0u32;
            loop {
                let v = (nmin as f64 * 2f64.powf(i as f64 / per_octave as f64)).round() as u64;
                if v > nmax {
                    break;
                }
                g.push(v);
                i += 1;
            }
            if cfg.flag("include_convergents", false)? {
                g.extend(convergent_denominators(alpha).range(nmin..=nmax));
            }
            g
        }
    };
    grid.sort_unstable();
    grid.dedup();
    if grid.first().is_some_and(|v| *v < 2) {
        return Err(Error::Parse("n must be at least 2 (the ratio divides by ln² n)".into()));
    }
    Ok(grid)
}

pub fn irrational_outputs(cfg: &RunConfig) -> Result<(String, String)> {
    let alpha = AlphaSpec::parse(cfg.require("alpha")?)?;
    let grid = irrational_grid(cfg, &alpha)?;
    let engine = NormEngine::new(cfg.norm_config()?);
    let study = study_ratio(&engine, &alpha, &grid)?;
    let mut csv = metadata_lines("irrational", cfg, MuRange::Theorem);
    csv.push_str("n,I_n,ratio,is_convergent_q\n");
    for r in &study.records {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            r.n,
            fmt_f(r.i_n),
            fmt_f(r.ratio),
            r.is_convergent_q
        ));
    }
    let dip = if cfg.flag("dip", false)? {
        Some(liouville_dip_scan(
            &engine,
            &alpha,
            grid[0],
            *grid.last().expect("non-empty"),
        )?)
    } else {
        None
    };
    let cf = cf_expand(&alpha, 20);
    let summary = json!({
        "version": VERSION,
        "command": "irrational",
        "config": cfg,
        "conventions": conventions(MuRange::Theorem),
        "alpha": alpha,
        "continued_fraction": cf,
        "points": study.records.len(),
        "omega_estimate": study.omega_estimate,
        "big_omega_estimate": study.big_omega_estimate,
        "estimators_note": "running min/max of I_n/ln^2 n over the grid; finite-n estimators, not limits",
        "dip": dip,
    });
    Ok((csv, to_json(&summary)))
}

pub fn cmd_irrational(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let (csv, summary) = match irrational_outputs(cfg) {
        Ok(v) => v,
        Err(e) => return fail(err, &e),
    };
    let written = emit(out, cfg, "output", &csv).and_then(|_| match cfg.get("summary") {
        Some(path) => Ok(std::fs::write(path, &summary)?),
        None => Ok(err.write_all(summary.as_bytes())?),
    });
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => fail(err, &e),
    }
}
