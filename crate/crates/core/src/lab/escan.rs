use std::time::Instant;

use serde_json::json;

use super::{run_indexed, Check, ExperimentConfig, Report};
use crate::error::{Error, Result};
use crate::gf::Scalar;
use crate::pinv::{in_u, in_v, xi_with, XiRoute};

struct Outcome {
    nilpotent: bool,
    nilpotent_violation: Option<String>,
    /// `Some` when `(λ, μ) ≠ 0`.
    certificate: Option<Option<String>>,
    /// `Some` when `(λ, μ) = 0`.
    toral: Option<Option<String>>,
}

/// Exhaustive scan of `E = ⟨D_H(u), D_H(v), D_H(x_i x_{r+i})⟩` over `F_q`.
pub fn escan(cfg: &ExperimentConfig) -> Result<Report> {
    let started = Instant::now();
    let h = cfg.ham()?;
    let field = h.field();
    let r = h.r();
    let q = field.q() as u64;
    let population = q.checked_pow(r as u32 + 2).unwrap_or(u64::MAX);
    if population > cfg.budget.max_elements {
        return Err(Error::BudgetExceeded { population, cap: cfg.budget.max_elements });
    }
    let basis = h.subspace_e();

    let (outcomes, partial) = run_indexed(cfg, population, started, |idx| {
        let mut rest = idx;
        let coeffs: Vec<Scalar> = (0..r + 2)
            .map(|_| {
                let c = field.from_code((rest % q) as u32);
                rest /= q;
                c
            })
            .collect();
        let mut f = h.ring().zero();
        for (c, e) in coeffs.iter().zip(&basis) {
            f.axpy(*c, &e.f);
        }
        let d = h.d_h(&f).expect("same ring");
        let label = || {
            let names: Vec<String> = coeffs.iter().map(|&c| field.format(c)).collect();
            format!("(λ, μ, s) = ({}); f = {}", names.join(", "), f.display())
        };
        let nilpotent = xi_with(&h, &d, XiRoute::PhiTilde).expect("E ⊆ H_n").iter().all(|z| z.is_zero());
        let nilpotent_violation =
            (nilpotent && !d.is_zero() && !in_v(&h, &d).expect("E ⊆ H_n")).then(label);
        let outer = !coeffs[0].is_zero() || !coeffs[1].is_zero();
        let certificate = outer.then(|| (!in_u(&h, &f).expect("same ring")).then(label));
        let toral = (!outer).then(|| (!d.is_p_semisimple()).then(label));
        Outcome { nilpotent, nilpotent_violation, certificate, toral }
    });

    let mut nil = Check::new("nilpotent_in_zero_or_v");
    let mut cert = Check::new("certificate_in_u");
    let mut toral = Check::new("toral_semisimple");
    let mut nilpotent = 0u64;
    for o in outcomes {
        nilpotent += o.nilpotent as u64;
        nil.record(o.nilpotent_violation);
        if let Some(c) = o.certificate {
            cert.record(c);
        }
        if let Some(t) = o.toral {
            toral.record(t);
        }
    }
    let scanned = nil.population;
    let nil = nil.with_stats(json!({
        "q": q,
        "dim_e": r + 2,
        "expected_population": population,
        "scanned": scanned,
        "nilpotent": nilpotent,
    }));
    let mut report = Report::new("escan", cfg);
    report.partial = partial;
    report.push(nil);
    report.push(cert);
    report.push(toral);
    Ok(report.finish(started))
}
