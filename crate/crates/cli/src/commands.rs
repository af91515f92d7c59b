//! One function per subcommand; each returns its payload and whether the run
//! counts as a success.

use rayon::prelude::*;
use spectra_core::bounds::bounds_report;
use spectra_core::eigensolver::{discretize, eigenvalue_cap, lowest_eigenvalues, solve, solver_domain};
use spectra_core::limit::{glue_roots, limit_eigenvalue, solve_reduced, GlueSystem};
use spectra_core::minimizer::find_minima;
use spectra_core::{OperatorSpec, Spec, SpectraError, Spectrum};

use crate::cache::{cache_key, SpectrumCache};
use crate::config::{Command, RunConfig};
use crate::error::{CliError, Result};
use crate::record::{
    BoundsEntry, BoundsSample, EigEntry, LimitEntry, MinimumEntry, Payload, Table1Payload, Table1Row,
};
use crate::verify::cmd_verify;

/// Reference `(α_min, λ₁, λ₂, λ₃)` for k = 1..10, two decimals.
pub const TABLE1: [[f64; 4]; 10] = [
    [0.35, 0.57, 1.98, 4.11],
    [0.0, 0.66, 2.50, 5.24],
    [0.16, 0.68, 2.61, 5.68],
    [0.0, 0.76, 2.98, 6.52],
    [0.10, 0.81, 3.18, 7.03],
    [0.0, 0.87, 3.47, 7.69],
    [0.07, 0.92, 3.66, 8.16],
    [0.0, 0.98, 3.90, 8.70],
    [0.05, 1.02, 4.07, 9.12],
    [0.0, 1.07, 4.27, 9.57],
];

pub const TABLE1_CELLS: [&str; 4] = ["alpha_min", "lambda1", "lambda2", "lambda3"];

/// `α` samples per `k` in the bounds output, uniform on `[0, α∗]`.
pub const BOUNDS_SAMPLES: usize = 9;

/// Eigensolver values are reported by `limit` only up to this `k`; beyond it
/// the potential's dynamic range makes the direct solve pointless.
pub const LIMIT_EIGENSOLVER_MAX_K: u32 = 400;

pub fn dispatch(cfg: &RunConfig) -> Result<(Payload, bool)> {
    match cfg.command {
        Command::Eig => cmd_eig(cfg),
        Command::Minimize => Ok(cmd_minimize(cfg)),
        Command::Table1 => cmd_table1(cfg),
        Command::Bounds => cmd_bounds(cfg),
        Command::Limit => cmd_limit(cfg),
        Command::Verify => Ok(cmd_verify(cfg.level)),
    }
}

fn compute_spectrum(spec: &Spec, grid: spectra_core::Grid, m: usize) -> spectra_core::Result<Spectrum> {
    lowest_eigenvalues(&discretize(spec, grid)?, m)
}

pub fn cmd_eig(cfg: &RunConfig) -> Result<(Payload, bool)> {
    let alpha = cfg.alpha.ok_or_else(|| CliError::Config("eig needs --alpha".into()))?;
    let m = cfg.j_max as usize;
    let jobs = cfg
        .k_list
        .iter()
        .map(|&k| {
            let spec = OperatorSpec::whole_line(k, alpha)?;
            let grid = solver_domain(&spec, eigenvalue_cap(k, alpha, m))?;
            Ok((spec, grid, cache_key(k, alpha, &grid, m)))
        })
        .collect::<spectra_core::Result<Vec<_>>>()?;
    let mut cache = cfg.cache_path.as_deref().map(SpectrumCache::open).transpose()?;
    let cached: Vec<Option<Spectrum>> =
        jobs.iter().map(|(_, _, key)| cache.as_ref().and_then(|c| c.get(key).cloned())).collect();
    let spectra = jobs
        .par_iter()
        .zip(cached)
        .map(|((spec, grid, _), hit)| match hit {
            Some(s) => Ok(s),
            None => compute_spectrum(spec, *grid, m),
        })
        .collect::<spectra_core::Result<Vec<_>>>()?;
    if let Some(c) = cache.as_mut() {
        for ((_, _, key), s) in jobs.iter().zip(&spectra) {
            if c.get(key).is_none() {
                c.insert(key.clone(), s.clone());
            }
        }
        c.save()?;
    }
    let entries = cfg
        .k_list
        .iter()
        .zip(spectra)
        .map(|(&k, spectrum)| EigEntry { k, alpha, spectrum })
        .collect();
    Ok((Payload::Eig(entries), true))
}

pub fn cmd_minimize(cfg: &RunConfig) -> (Payload, bool) {
    let entries: Vec<MinimumEntry> = cfg
        .k_list
        .iter()
        .zip(find_minima::<f64>(&cfg.k_list))
        .map(|(&k, r)| match r {
            Ok(report) => MinimumEntry { k, report: Some(report), error: None },
            Err(e) => MinimumEntry { k, report: None, error: Some(e.to_string()) },
        })
        .collect();
    let ok = entries.iter().all(|e| e.error.is_none());
    (Payload::Minimize(entries), ok)
}

pub fn cmd_table1(cfg: &RunConfig) -> Result<(Payload, bool)> {
    if let Some(k) = cfg.k_list.iter().find(|&&k| !(1..=10).contains(&k)) {
        return Err(CliError::Config(format!("table1 covers k = 1..10, got {k}")));
    }
    let tol = cfg.table_tolerance();
    let rows: Vec<Table1Row> = cfg
        .k_list
        .iter()
        .zip(find_minima::<f64>(&cfg.k_list))
        .map(|(&k, r)| {
            let reference = TABLE1[k as usize - 1];
            match r {
                Ok(r) => {
                    let computed = [r.alpha_min, r.lambda_star, r.lambda2, r.lambda3];
                    let deviation: [f64; 4] = std::array::from_fn(|i| computed[i] - reference[i]);
                    let flagged = TABLE1_CELLS
                        .iter()
                        .zip(deviation)
                        .filter(|(_, d)| d.abs() > tol)
                        .map(|(n, _)| n.to_string())
                        .collect();
                    Table1Row { k, reference, computed: Some(computed), deviation: Some(deviation), flagged, error: None }
                }
                Err(e) => Table1Row {
                    k,
                    reference,
                    computed: None,
                    deviation: None,
                    flagged: Vec::new(),
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    let ok = rows.iter().all(|r| r.error.is_none() && r.flagged.is_empty());
    Ok((Payload::Table1(Table1Payload { tolerance: tol, rows }), ok))
}

fn bounds_entry(k: u32) -> spectra_core::Result<BoundsEntry> {
    let report = bounds_report::<f64>(k, BOUNDS_SAMPLES)?;
    let samples = report
        .upper_samples
        .iter()
        .map(|&(alpha, upper_bound)| {
            let s = solve(&OperatorSpec::whole_line(k, alpha)?, 3)?;
            Ok(BoundsSample { alpha, lambda: [s.eigenvalues[0], s.eigenvalues[1], s.eigenvalues[2]], upper_bound })
        })
        .collect::<spectra_core::Result<Vec<_>>>()?;
    Ok(BoundsEntry { k, report, samples })
}

pub fn cmd_bounds(cfg: &RunConfig) -> Result<(Payload, bool)> {
    let entries = cfg.k_list.par_iter().map(|&k| bounds_entry(k)).collect::<spectra_core::Result<Vec<_>>>()?;
    Ok((Payload::Bounds(entries), true))
}

fn limit_entries(k: u32, alpha: f64, eps: f64, j_max: u32) -> spectra_core::Result<Vec<LimitEntry>> {
    let sys = GlueSystem::new(k, alpha, eps)?;
    let top = limit_eigenvalue(j_max + 1, alpha)?.value * 4.0;
    let roots = glue_roots(&sys, j_max as usize, top, 4000)?;
    let eigenvalues = if k <= LIMIT_EIGENSOLVER_MAX_K {
        Some(solve(&OperatorSpec::whole_line(k, alpha)?, j_max as usize)?.eigenvalues)
    } else {
        None
    };
    (1..=j_max)
        .map(|j| {
            let (reduced_root, reduced_error) = match solve_reduced(j, alpha, eps, k) {
                Ok(r) => (Some(r), None),
                Err(e @ (SpectraError::Precondition(_) | SpectraError::Bracket(_))) => (None, Some(e.to_string())),
                Err(e) => return Err(e),
            };
            Ok(LimitEntry {
                k,
                j,
                alpha,
                eps,
                limit: limit_eigenvalue(j, alpha)?.value,
                reduced_root,
                reduced_error,
                glue_root: roots.get(j as usize - 1).copied(),
                correction_scale: sys.correction_scale(),
                eigenvalue: eigenvalues.as_ref().map(|e| e[j as usize - 1]),
            })
        })
        .collect()
}

pub fn cmd_limit(cfg: &RunConfig) -> Result<(Payload, bool)> {
    let alpha = cfg.alpha.unwrap_or(0.0);
    let eps = cfg.eps_or_default();
    let per_k = cfg
        .k_list
        .par_iter()
        .map(|&k| limit_entries(k, alpha, eps, cfg.j_max))
        .collect::<spectra_core::Result<Vec<_>>>()?;
    Ok((Payload::Limit(per_k.into_iter().flatten().collect()), true))
}
