use std::time::Instant;

use serde_json::json;

use super::{run_indexed, sample_rng, wilson, Check, ExperimentConfig, Report, Table};
use crate::error::Result;
use crate::ham::HamCtx;
use crate::pinv::{xi_with, XiRoute};

const STREAM: u64 = 0xd1;

fn density_check(cfg: &ExperimentConfig, started: Instant) -> Result<(Check, Vec<String>, bool)> {
    let h = cfg.ham()?;
    let q = h.field().q() as f64;
    let (hits, partial) = run_indexed(cfg, cfg.samples as u64, started, |i| {
        let mut rng = sample_rng(cfg.seed, STREAM, i);
        let d = h.random_element(&mut rng).d;
        xi_with(&h, &d, XiRoute::PhiTilde).expect("sampled from H_n").iter().all(|z| z.is_zero())
    });
    let n = hits.len() as u64;
    let k = hits.iter().filter(|&&b| b).count() as u64;
    let fraction = if n == 0 { 0.0 } else { k as f64 / n as f64 };
    let target = q.powi(-(cfg.r as i32));
    let (lo, hi) = (cfg.tolerance("window_low", 0.5) * target, cfg.tolerance("window_high", 1.5) * target);
    let (ci_lo, ci_hi) = wilson(k, n, 1.96);
    let in_window = (lo..=hi).contains(&fraction);
    let ci_covers_target = (ci_lo..=ci_hi).contains(&target);
    let ci_share = (ci_hi - ci_lo) / (hi - lo);
    let mut check = Check::new(&format!("density_q{}", h.field().q()));
    check.population = n;
    if !in_window && !ci_covers_target {
        check.failures = 1;
        check.witness = Some(format!("fraction {fraction:.5} outside [{lo:.5}, {hi:.5}]"));
    }
    let row = vec![
        cfg.m.to_string(),
        h.field().q().to_string(),
        n.to_string(),
        k.to_string(),
        format!("{fraction:.6}"),
        format!("{target:.6}"),
        format!("{ci_lo:.6}"),
        format!("{ci_hi:.6}"),
        in_window.to_string(),
    ];
    let check = check.with_stats(json!({
        "hits": k,
        "fraction": fraction,
        "target": target,
        "window": [lo, hi],
        "in_window": in_window,
        "wilson95": [ci_lo, ci_hi],
        "ci_covers_target": ci_covers_target,
        "ci_share_of_window": ci_share,
        "ci_within_share": ci_share <= cfg.tolerance("ci_share", 0.2),
    }));
    Ok((check, row, partial))
}

/// Fraction of uniformly sampled `D ∈ H_n(F_q)` with all `ξ_i(D) = 0`,
/// against the target `q^{-r}`. A check fails when the fraction is outside
/// the window and the confidence interval misses the target.
pub fn density(cfg: &ExperimentConfig) -> Result<Report> {
    density_grid(cfg, &[cfg.m])
}

/// `density` for each extension degree in `ms`, one check and table row each.
pub fn density_grid(cfg: &ExperimentConfig, ms: &[u32]) -> Result<Report> {
    let started = Instant::now();
    cfg.validate()?;
    HamCtx::new(cfg.field()?, cfg.r)?;
    let mut report = Report::new("density", cfg);
    let mut rows = Vec::new();
    for &m in ms {
        let sub = ExperimentConfig { m, ..cfg.clone() };
        let (check, row, partial) = density_check(&sub, started)?;
        report.partial |= partial;
        report.push(check);
        rows.push(row);
    }
    let columns = ["m", "q", "samples", "hits", "fraction", "target", "ci_low", "ci_high", "in_window"];
    report.table = Some(Table { columns: columns.iter().map(|s| s.to_string()).collect(), rows });
    Ok(report.finish(started))
}
