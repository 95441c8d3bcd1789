//! Implementations of the CLI subcommands.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use geqw::evolve::{self, series, CoinKind, Engine, FitWindow};
use geqw::observables::{fit_coherence_decay, fit_dynamical_exponent};
use geqw::spectral::run_spectral;
use geqw::verify::{channel_apply, dense_evolve, kraus_decompose, separability_oracle};
use geqw::{ObservableRecord, SparseState, WalkConfig};
use num_complex::Complex64;

use crate::config::FileConfig;
use crate::output::{
    write_records_csv, write_sweep_csv, EnsembleReport, EnsembleSummary, FitWindows,
    RealizationFits, SummaryStat, SweepRow,
};

type CmdResult = Result<(), String>;

fn io_err(what: &str, e: std::io::Error) -> String {
    format!("cannot write {what}: {e}")
}

/// Evolves one realization with the configured engine and returns its
/// records, plus the final state when the sparse 2-D engine produced one.
fn collect(
    cfg: &WalkConfig,
    realization: u64,
) -> Result<(Vec<ObservableRecord>, Option<SparseState>), String> {
    match (cfg.dimension, cfg.engine) {
        (1, _) => {
            let out = evolve::run_1d(cfg, realization).map_err(|e| e.to_string())?;
            Ok((out.records, None))
        }
        (_, Engine::Sparse) => {
            let out = evolve::run(cfg, realization).map_err(|e| e.to_string())?;
            Ok((out.records, Some(out.final_state)))
        }
        (_, Engine::Spectral) => {
            let out = run_spectral(cfg, realization).map_err(|e| e.to_string())?;
            Ok((out.records, None))
        }
    }
}

pub fn run(file_cfg: &FileConfig, out_dir: &Path) -> CmdResult {
    let cfg = file_cfg.to_walk_config()?;
    let (records, final_state) = collect(&cfg, 0)?;
    fs::create_dir_all(out_dir).map_err(|e| io_err("output directory", e))?;
    let mut buf = Vec::new();
    write_records_csv(&mut buf, &file_cfg.echo_toml(), &records)
        .map_err(|e| io_err("run.csv", e))?;
    fs::write(out_dir.join("run.csv"), buf).map_err(|e| io_err("run.csv", e))?;
    if file_cfg.snapshot {
        let state = final_state.ok_or_else(|| {
            "field `snapshot`: snapshots require `dimension = 2` and `engine = \"sparse\"`"
                .to_string()
        })?;
        let mut buf = Vec::new();
        state
            .write_snapshot(&mut buf)
            .map_err(|e| io_err("snapshot.tsv", e))?;
        fs::write(out_dir.join("snapshot.tsv"), buf).map_err(|e| io_err("snapshot.tsv", e))?;
    }
    println!(
        "run: wrote {} records to {}",
        records.len(),
        out_dir.join("run.csv").display()
    );
    Ok(())
}

fn fit_realization(
    records: &[ObservableRecord],
    t_max: u32,
    realization: u64,
    coherence: bool,
) -> RealizationFits {
    let var = series(records, |r| r.var_r);
    let full = fit_dynamical_exponent(&var, FitWindow::Full.bounds(t_max)).ok();
    let asym = fit_dynamical_exponent(&var, FitWindow::Asymptotic.bounds(t_max)).ok();
    let beta = if coherence {
        let coh = series(records, |r| r.coherence_x1);
        fit_coherence_decay(&coh, FitWindow::Asymptotic.bounds(t_max))
            .ok()
            .map(|f| f.exponent)
    } else {
        None
    };
    RealizationFits {
        realization,
        alpha_full: full.map(|f| f.exponent),
        alpha_full_residual: full.map(|f| f.residual),
        alpha_asymptotic: asym.map(|f| f.exponent),
        alpha_asymptotic_residual: asym.map(|f| f.residual),
        beta_coherence: beta,
    }
}

pub fn ensemble(file_cfg: &FileConfig, out_dir: &Path) -> CmdResult {
    let cfg = file_cfg.to_walk_config()?;
    let n = file_cfg.realizations.max(1);
    let mut all_records = Vec::with_capacity(n as usize);
    let mut fits = Vec::with_capacity(n as usize);
    for k in 0..u64::from(n) {
        let (records, _) = collect(&cfg, k)?;
        fits.push(fit_realization(&records, cfg.t_max, k, cfg.plan.coherence));
        all_records.push(records);
    }
    let mean = evolve::mean_records(&all_records);

    let last = |get: fn(&ObservableRecord) -> Option<f64>| -> Vec<f64> {
        all_records
            .iter()
            .filter_map(|recs| recs.iter().rev().find_map(get))
            .collect()
    };
    let gather = |get: fn(&RealizationFits) -> Option<f64>| -> Vec<f64> {
        fits.iter().filter_map(get).collect()
    };
    let report = EnsembleReport {
        config: toml::from_str(&file_cfg.echo_toml())
            .map_err(|e| format!("internal config echo error: {e}"))?,
        fit_windows: FitWindows {
            full: {
                let (a, b) = FitWindow::Full.bounds(cfg.t_max);
                [a, b]
            },
            asymptotic: {
                let (a, b) = FitWindow::Asymptotic.bounds(cfg.t_max);
                [a, b]
            },
        },
        summary: EnsembleSummary {
            alpha_full: SummaryStat::from_values(&gather(|f| f.alpha_full)),
            alpha_asymptotic: SummaryStat::from_values(&gather(|f| f.alpha_asymptotic)),
            beta_coherence: SummaryStat::from_values(&gather(|f| f.beta_coherence)),
            final_var_r: SummaryStat::from_values(&last(|r| r.var_r)),
            final_entropy_c: SummaryStat::from_values(&last(|r| r.entropy_c)),
            final_negativity: SummaryStat::from_values(&last(|r| r.negativity)),
        },
        realizations: fits,
    };

    fs::create_dir_all(out_dir).map_err(|e| io_err("output directory", e))?;
    let mut buf = Vec::new();
    write_records_csv(&mut buf, &file_cfg.echo_toml(), &mean)
        .map_err(|e| io_err("ensemble_mean.csv", e))?;
    fs::write(out_dir.join("ensemble_mean.csv"), buf)
        .map_err(|e| io_err("ensemble_mean.csv", e))?;
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| format!("cannot serialize ensemble report: {e}"))?;
    fs::write(out_dir.join("ensemble.json"), json + "\n")
        .map_err(|e| io_err("ensemble.json", e))?;
    println!(
        "ensemble: {n} realizations, report at {}",
        out_dir.join("ensemble.json").display()
    );
    Ok(())
}

pub fn sweep(file_cfg: &FileConfig, out_dir: &Path) -> CmdResult {
    let values = file_cfg
        .sweep_q
        .as_ref()
        .ok_or("field `sweep_q`: required for the sweep command")?;
    if values.is_empty() {
        return Err("field `sweep_q`: must list at least one q value".into());
    }
    let axis = file_cfg.sweep_axis.as_deref().unwrap_or("both");
    if !matches!(axis, "q1" | "q2" | "both") {
        return Err(format!(
            "field `sweep_axis`: expected \"q1\", \"q2\" or \"both\", got \"{axis}\""
        ));
    }
    let n = file_cfg.realizations.max(1);
    let mut rows = Vec::new();
    for q in values {
        let mut point = file_cfg.clone();
        if axis == "q1" || axis == "both" {
            point.q1 = *q;
        }
        if axis == "q2" || axis == "both" {
            point.q2 = Some(*q);
        }
        let cfg = point.to_walk_config()?;
        let mut full = Vec::new();
        let mut asym = Vec::new();
        for k in 0..u64::from(n) {
            let (records, _) = collect(&cfg, k)?;
            let var = series(&records, |r| r.var_r);
            full.push(
                fit_dynamical_exponent(&var, FitWindow::Full.bounds(cfg.t_max))
                    .map_err(|e| format!("q = {q}: {e}"))?
                    .exponent,
            );
            asym.push(
                fit_dynamical_exponent(&var, FitWindow::Asymptotic.bounds(cfg.t_max))
                    .map_err(|e| format!("q = {q}: {e}"))?
                    .exponent,
            );
        }
        rows.push(SweepRow {
            q1: crate::config::QValue(cfg.q1).to_string(),
            q2: crate::config::QValue(cfg.q2).to_string(),
            alpha_full: SummaryStat::from_values(&full).unwrap(),
            alpha_asymptotic: SummaryStat::from_values(&asym).unwrap(),
        });
    }
    fs::create_dir_all(out_dir).map_err(|e| io_err("output directory", e))?;
    let mut buf = Vec::new();
    write_sweep_csv(&mut buf, &file_cfg.echo_toml(), &rows)
        .map_err(|e| io_err("sweep.csv", e))?;
    fs::write(out_dir.join("sweep.csv"), buf).map_err(|e| io_err("sweep.csv", e))?;
    println!(
        "sweep: {} q values, table at {}",
        rows.len(),
        out_dir.join("sweep.csv").display()
    );
    Ok(())
}

struct Check {
    name: &'static str,
    outcome: Result<String, String>,
}

fn check(name: &'static str, outcome: Result<String, String>) -> Check {
    Check { name, outcome }
}

fn verify_checks(cfg: &WalkConfig) -> Vec<Check> {
    let mut checks = Vec::new();

    // Coin unitarity, reported with the measured deviation.
    checks.push(check("coin_unitarity", {
        let dev = if cfg.dimension == 2 {
            cfg.coin_matrix().map(|c| {
                let mut dev: f64 = 0.0;
                for i in 0..4 {
                    for j in 0..4 {
                        let mut dot = Complex64::ZERO;
                        for k in 0..4 {
                            dot += c.entry(k, i).conj() * c.entry(k, j);
                        }
                        let expect = if i == j { Complex64::ONE } else { Complex64::ZERO };
                        dev = dev.max((dot - expect).norm());
                    }
                }
                dev
            })
        } else {
            geqw::coin::build_c2(cfg.coin1).map(|c| {
                let mut dev: f64 = 0.0;
                for i in 0..2 {
                    for j in 0..2 {
                        let mut dot = Complex64::ZERO;
                        for k in 0..2 {
                            dot += c.entry(k, i).conj() * c.entry(k, j);
                        }
                        let expect = if i == j { Complex64::ONE } else { Complex64::ZERO };
                        dev = dev.max((dot - expect).norm());
                    }
                }
                dev
            })
        };
        match dev {
            Ok(d) if d <= 1e-12 => Ok(format!("max |C\u{2020}C - I| = {d:.3e}")),
            Ok(d) => Err(format!("max |C\u{2020}C - I| = {d:.3e} exceeds 1e-12")),
            Err(e) => Err(e.to_string()),
        }
    }));

    // Step-weight normalization across the time range.
    checks.push(check("step_weight_normalization", {
        let t_hi = cfg.t_max.min(200);
        let mut worst: f64 = 0.0;
        let mut err = None;
        for &q in &[cfg.q1, cfg.q2][..if cfg.dimension == 2 { 2 } else { 1 }] {
            for t in 1..=t_hi {
                match geqw::qexp::QExpParams::new(q, t)
                    .and_then(geqw::qexp::weights)
                {
                    Ok(w) => {
                        let sum: f64 = w.probabilities.iter().sum();
                        worst = worst.max((sum - 1.0).abs());
                    }
                    Err(e) => err = Some(e.to_string()),
                }
            }
        }
        match err {
            Some(e) => Err(e),
            None if worst <= 1e-12 => Ok(format!("max |Σp - 1| = {worst:.3e} over t ≤ {t_hi}")),
            None => Err(format!("max |Σp - 1| = {worst:.3e} exceeds 1e-12")),
        }
    }));

    // Norm conservation on a short sparse run.
    checks.push(check("norm_conservation", {
        let mut short = cfg.clone();
        short.t_max = cfg.t_max.min(50);
        short.engine = Engine::Sparse;
        short.plan = Default::default();
        short.plan.trace_distance = false;
        if cfg.dimension == 2 {
            evolve::run(&short, 0)
                .map(|o| {
                    format!(
                        "|1 - ||ψ||²| = {:.3e} after {} steps",
                        (o.final_state.norm_sq() - 1.0).abs(),
                        short.t_max
                    )
                })
                .map_err(|e| e.to_string())
        } else {
            evolve::run_1d(&short, 0)
                .map(|o| {
                    format!(
                        "|1 - ||ψ||²| = {:.3e} after {} steps",
                        (o.final_state.norm_sq() - 1.0).abs(),
                        short.t_max
                    )
                })
                .map_err(|e| e.to_string())
        }
    }));

    if cfg.dimension != 2 {
        return checks;
    }

    // Dense bounded-lattice engine agrees with the sparse engine.
    checks.push(check("dense_sparse_agreement", {
        let mut short = cfg.clone();
        short.t_max = cfg.t_max.min(6);
        short.engine = Engine::Sparse;
        short.plan = Default::default();
        short.plan.trace_distance = false;
        let l = i64::from(short.t_max) * (i64::from(short.t_max) + 1) / 2;
        match (evolve::run(&short, 0), dense_evolve(&short, 0, l)) {
            (Ok(sparse), Ok(dense)) => {
                let mut dev: f64 = 0.0;
                for (site, v) in sparse.final_state.iter() {
                    let w = dense.amplitude(*site);
                    for s in 0..4 {
                        dev = dev.max((v[s] - w[s]).norm());
                    }
                }
                if dev <= 1e-12 {
                    Ok(format!("max amplitude deviation = {dev:.3e} at t = {}", short.t_max))
                } else {
                    Err(format!("max amplitude deviation = {dev:.3e} exceeds 1e-12"))
                }
            }
            (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
        }
    }));

    // Spectral quadrature agrees with the sparse engine on variances.
    checks.push(check("spectral_sparse_agreement", {
        let mut short = cfg.clone();
        short.t_max = cfg.t_max.min(10);
        short.plan = Default::default();
        short.plan.trace_distance = false;
        short.spectral_samples = 0;
        match (evolve::run(&short, 0), run_spectral(&short, 0)) {
            (Ok(sparse), Ok(spec)) => {
                let vs = series(&sparse.records, |r| r.var_r);
                let vk = series(&spec.records, |r| r.var_r);
                let mut dev: f64 = 0.0;
                for ((_, a), (_, b)) in vs.iter().zip(&vk) {
                    dev = dev.max((a - b).abs() / (1.0 + a.abs()));
                }
                if dev <= 1e-9 {
                    Ok(format!("max relative deviation = {dev:.3e} at t ≤ {}", short.t_max))
                } else {
                    Err(format!("max relative deviation = {dev:.3e} exceeds 1e-9"))
                }
            }
            (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
        }
    }));

    // Factorization of separable dynamics (skipped when out of scope).
    let c = &cfg.initial_coin;
    let product_init = (c[0] * c[3] - c[1] * c[2]).norm() <= 1e-12;
    if cfg.coin_kind == CoinKind::Separable && product_init {
        checks.push(check("separability", {
            let mut short = cfg.clone();
            short.t_max = cfg.t_max.min(12);
            match separability_oracle(&short, 0) {
                Ok(d) if d <= 1e-10 => {
                    Ok(format!("max trace distance to marginal product = {d:.3e}"))
                }
                Ok(d) => Err(format!("max trace distance {d:.3e} exceeds 1e-10")),
                Err(e) => Err(e.to_string()),
            }
        }));
    }

    // Kraus completeness and trace preservation of the effective channel.
    checks.push(check("channel_kraus", {
        let mut short = cfg.clone();
        short.t_max = cfg.t_max.min(4);
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let chi = [Complex64::new(inv, 0.0), Complex64::new(0.0, inv)];
        match kraus_decompose(&short, 0, 1, chi) {
            Ok(ks) => {
                // Trace preservation on the maximally mixed input.
                let m = ks.input_dim();
                let rho = nalgebra::DMatrix::from_diagonal_element(
                    m,
                    m,
                    Complex64::new(1.0 / m as f64, 0.0),
                );
                match channel_apply(&ks, &rho) {
                    Ok(out) => {
                        let tr: Complex64 = (0..out.nrows()).map(|i| out[(i, i)]).sum();
                        let dev = (tr - Complex64::ONE).norm();
                        if dev <= 1e-10 {
                            Ok(format!(
                                "{} Kraus operators, |tr(Eρ) - 1| = {dev:.3e}",
                                ks.operators.len()
                            ))
                        } else {
                            Err(format!("trace deviation {dev:.3e} exceeds 1e-10"))
                        }
                    }
                    Err(e) => Err(e.to_string()),
                }
            }
            Err(e) => Err(e.to_string()),
        }
    }));

    checks
}

pub fn verify(file_cfg: &FileConfig, out_dir: &Path) -> CmdResult {
    let cfg = file_cfg.to_walk_config()?;
    let checks = verify_checks(&cfg);
    let mut report = String::new();
    let mut failed = 0usize;
    for c in &checks {
        let line = match &c.outcome {
            Ok(detail) => format!("PASS {}: {detail}", c.name),
            Err(detail) => {
                failed += 1;
                format!("FAIL {}: {detail}", c.name)
            }
        };
        println!("{line}");
        report.push_str(&line);
        report.push('\n');
    }
    let summary = format!("{} checks, {} failed", checks.len(), failed);
    println!("{summary}");
    report.push_str(&summary);
    report.push('\n');
    fs::create_dir_all(out_dir).map_err(|e| io_err("output directory", e))?;
    let mut f = fs::File::create(out_dir.join("verify.txt"))
        .map_err(|e| io_err("verify.txt", e))?;
    f.write_all(report.as_bytes())
        .map_err(|e| io_err("verify.txt", e))?;
    if failed > 0 {
        Err(format!("{failed} verification check(s) failed"))
    } else {
        Ok(())
    }
}
