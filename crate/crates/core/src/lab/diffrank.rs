use std::time::Instant;

use serde_json::json;

use super::{run_indexed, sample_rng, Check, ExperimentConfig, Report};
use crate::error::{Error, Result};
use crate::gf::Span;
use crate::pinv::{directional_derivatives, in_v, XiRoute};

const STREAM: u64 = 0xd2;
const MAX_REJECTIONS: u64 = 100_000;

struct PointResult {
    rank: usize,
    directions: usize,
    rejections: u64,
    witness: String,
}

/// Rank of `[(dξ_i)_x(b_j)]` over the basis of `H_n` at sampled `x ∈ V`.
/// Each point stops as soon as rank `r` is reached.
pub fn diff_rank(cfg: &ExperimentConfig) -> Result<Report> {
    let started = Instant::now();
    let h = cfg.ham()?;
    let field = h.field();
    let r = h.r();
    let needed = (h.p() as u64).pow(r as u32);
    if (field.q() as u64) < needed {
        return Err(Error::FieldTooSmall { q: field.q() as u64, needed });
    }
    let basis = h.ham_basis();
    let (results, partial) = run_indexed(cfg, cfg.samples as u64, started, |i| -> Result<PointResult> {
        let mut rng = sample_rng(cfg.seed, STREAM, i);
        let mut rejections = 0;
        let x = loop {
            let e = h.random_element(&mut rng);
            if in_v(&h, &e.d)? {
                break e;
            }
            rejections += 1;
            if rejections >= MAX_REJECTIONS {
                return Err(Error::SamplingExhausted(rejections));
            }
        };
        let mut span = Span::new(r);
        let mut directions = 0;
        for b in &basis {
            if span.dim() == r {
                break;
            }
            directions += 1;
            let row = directional_derivatives(&h, &x.d, &b.d, XiRoute::PhiTilde)?;
            span.insert(field, &row);
        }
        Ok(PointResult { rank: span.dim(), directions, rejections, witness: x.f.display() })
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    let mut check = Check::new("differential_rank");
    let mut histogram = vec![0u64; r + 1];
    let (mut max_dirs, mut total_dirs, mut total_rej) = (0, 0, 0);
    for p in &results {
        histogram[p.rank] += 1;
        max_dirs = max_dirs.max(p.directions);
        total_dirs += p.directions;
        total_rej += p.rejections;
        check.record((p.rank < r).then(|| format!("rank {} at x = D_H({})", p.rank, p.witness)));
    }
    let mean_dirs = if results.is_empty() { 0.0 } else { total_dirs as f64 / results.len() as f64 };
    let check = check.with_stats(json!({
        "rank_histogram": histogram,
        "basis_size": basis.len(),
        "max_directions": max_dirs,
        "mean_directions": mean_dirs,
        "rejections": total_rej,
        "evaluation_points": needed,
    }));
    let mut report = Report::new("diffrank", cfg);
    report.partial = partial;
    report.push(check);
    Ok(report.finish(started))
}
