use std::time::Instant;

use rand::Rng;
use serde_json::json;

use super::{sample_rng, Check, ExperimentConfig, Report, Table};
use crate::aut::{beta, glr_act, pullback_eval};
use crate::error::Result;
use crate::gf::{solve_linear, Field, Matrix, Scalar, UniPoly};
use crate::ham::{torus_tw, HamCtx};
use crate::pinv::{xi_with, XiRoute};
use crate::wn::Derivation;

const STREAM: u64 = 0xd3;
const FRESH_POINTS: usize = 8;
const EXTRA_FIT_POINTS: usize = 4;
const GL_SAMPLES: usize = 50;

/// Coefficients of `X^{p^i}`, `i = 0..r-1`, in `∏_{w ∈ F_p^r} (X - Σ w_j c_j)`.
pub fn dickson_oracle(field: &Field, r: usize, point: &[Scalar]) -> Vec<Scalar> {
    let p = field.p() as usize;
    let mut prod = UniPoly::new(vec![Scalar::ONE]);
    for w in 0..p.pow(r as u32) {
        let mut rest = w;
        let mut v = Scalar::ZERO;
        for &c in point {
            v = field.add(v, field.mul(field.from_int((rest % p) as i64), c));
            rest /= p;
        }
        prod = prod.mul(field, &UniPoly::new(vec![field.neg(v), Scalar::ONE]));
    }
    (0..r).map(|i| prod.coeff(p.pow(i as u32))).collect()
}

/// Exponent vectors of total degree `d` in `r` variables.
fn monomials(r: usize, d: usize) -> Vec<Vec<usize>> {
    if r == 1 {
        return vec![vec![d]];
    }
    (0..=d)
        .rev()
        .flat_map(|k| monomials(r - 1, d - k).into_iter().map(move |mut rest| {
            rest.insert(0, k);
            rest
        }))
        .collect()
}

fn monomial_value(field: &Field, e: &[usize], c: &[Scalar]) -> Scalar {
    e.iter().zip(c).fold(Scalar::ONE, |acc, (&k, &x)| field.mul(acc, field.pow(x, k as u64)))
}

fn eval(field: &Field, monos: &[Vec<usize>], coeffs: &[Scalar], c: &[Scalar]) -> Scalar {
    monos.iter().zip(coeffs).fold(Scalar::ZERO, |acc, (e, &a)| field.add(acc, field.mul(a, monomial_value(field, e, c))))
}

fn display(field: &Field, monos: &[Vec<usize>], coeffs: &[Scalar]) -> String {
    let terms: Vec<String> = monos
        .iter()
        .zip(coeffs)
        .filter(|(_, a)| !a.is_zero())
        .map(|(e, &a)| {
            let mut factors = Vec::new();
            if a != Scalar::ONE || e.iter().all(|&k| k == 0) {
                factors.push(field.format(a));
            }
            for (j, &k) in e.iter().enumerate() {
                if k > 0 {
                    factors.push(format!("c{}^{k}", j + 1));
                }
            }
            factors.join("*")
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Fits a homogeneous polynomial to values; `None` unless the fit is unique.
fn design(field: &Field, monos: &[Vec<usize>], points: &[Vec<Scalar>]) -> Option<Matrix> {
    let rows: Vec<Vec<Scalar>> = points.iter().map(|c| monos.iter().map(|e| monomial_value(field, e, c)).collect()).collect();
    Matrix::from_rows(rows).ok().filter(|a| a.rows() > 0)
}

fn fit(field: &Field, monos: &[Vec<usize>], points: &[Vec<Scalar>], values: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    let Some(a) = design(field, monos, points) else { return Ok(None) };
    Ok(solve_linear(field, &a, values).ok().filter(|s| s.unique).map(|s| s.x))
}

fn torus_element(gens: &[Derivation], c: &[Scalar]) -> Derivation {
    let mut t = Derivation::zero(gens[0].ring());
    for (g, &cj) in gens.iter().zip(c) {
        t.axpy(cj, g);
    }
    t
}

fn random_point<R: Rng>(field: &Field, r: usize, rng: &mut R) -> Vec<Scalar> {
    (0..r).map(|_| field.random(rng)).collect()
}

/// Interpolates `ξ_i` restricted to `T_H` as homogeneous polynomials in the
/// torus coordinates, then checks fresh points, `GL_r(F_p)`-invariance, the
/// Dickson generators and the diagram through `β`. The extension degree is
/// raised to `r + 1` when needed so that `q > p^r`.
pub fn torus_restrict(cfg: &ExperimentConfig) -> Result<Report> {
    let started = Instant::now();
    cfg.validate()?;
    let m = cfg.m.max(cfg.r as u32 + 1);
    let field = Field::new(cfg.p, m)?;
    let h = HamCtx::new(field.clone(), cfg.r)?;
    let (p, r) = (h.p(), h.r());
    let pr = p.pow(r as u32);
    let gens = h.torus_th();
    let degrees: Vec<usize> = (0..r).map(|i| pr - p.pow(i as u32)).collect();
    let monos: Vec<Vec<Vec<usize>>> = degrees.iter().map(|&d| monomials(r, d)).collect();

    // Homogeneous fits need enough distinct directions, not just enough points.
    let mut rng = sample_rng(cfg.seed, STREAM, 0);
    let cap = 64 * monos.iter().map(Vec::len).max().expect("r >= 1");
    let mut points: Vec<Vec<Scalar>> = Vec::new();
    while points.len() < cap && !monos.iter().all(|ms| design(&field, ms, &points).is_some_and(|a| a.rank(&field) == ms.len())) {
        points.push(random_point(&field, r, &mut rng));
    }
    let n_fit = points.len() + EXTRA_FIT_POINTS;
    points.extend((0..EXTRA_FIT_POINTS + FRESH_POINTS).map(|_| random_point(&field, r, &mut rng)));
    let xis: Vec<Vec<Scalar>> = points
        .iter()
        .map(|c| xi_with(&h, &torus_element(&gens, c), XiRoute::PowerRelation))
        .collect::<Result<_>>()?;
    let dicksons: Vec<Vec<Scalar>> = points.iter().map(|c| dickson_oracle(&field, r, c)).collect();
    let (fit_pts, fresh_pts) = points.split_at(n_fit);

    let mut interp = Check::new("interpolation");
    let mut residual = Check::new("fresh_point_residual");
    let mut dickson = Check::new("dickson_multiple");
    let mut polys = Vec::with_capacity(r);
    let mut rows = Vec::new();
    let mut stats_polys = Vec::new();
    for i in 0..r {
        let vals: Vec<Scalar> = xis[..n_fit].iter().map(|v| v[i]).collect();
        let coeffs = fit(&field, &monos[i], fit_pts, &vals)?;
        interp.record(coeffs.is_none().then(|| format!("ξ_{i}: no unique fit of degree {}", degrees[i])));
        let Some(coeffs) = coeffs else {
            polys.push(None);
            continue;
        };
        for (k, c) in fresh_pts.iter().enumerate() {
            let got = xis[n_fit + k][i];
            residual.record((eval(&field, &monos[i], &coeffs, c) != got).then(|| format!("ξ_{i} at fresh point {k}")));
        }
        let dvals: Vec<Scalar> = dicksons[..n_fit].iter().map(|v| v[i]).collect();
        let dcoeffs = fit(&field, &monos[i], fit_pts, &dvals)?;
        let ratio = dcoeffs.as_ref().and_then(|dc| {
            let k = dc.iter().position(|a| !a.is_zero())?;
            let lambda = field.div(coeffs[k], dc[k])?;
            let same = coeffs.iter().zip(dc).all(|(&a, &b)| a == field.mul(lambda, b));
            (same && !lambda.is_zero()).then_some(lambda)
        });
        dickson.record(ratio.is_none().then(|| format!("ξ_{i} = {} is not a multiple of the Dickson generator", display(&field, &monos[i], &coeffs))));
        for (e, a) in monos[i].iter().zip(&coeffs) {
            let d = dcoeffs.as_ref().map_or(String::new(), |dc| field.format(dc[monos[i].iter().position(|x| x == e).expect("same basis")]));
            let exps: Vec<String> = e.iter().map(|k| k.to_string()).collect();
            rows.push(vec![i.to_string(), degrees[i].to_string(), exps.join(" "), field.format(*a), d]);
        }
        stats_polys.push(json!({
            "i": i,
            "degree": degrees[i],
            "polynomial": display(&field, &monos[i], &coeffs),
            "dickson_ratio": ratio.map(|l| field.format(l)),
        }));
        polys.push(Some(coeffs));
    }

    let mut gl = Check::new("glr_invariance");
    for _ in 0..GL_SAMPLES {
        let g = loop {
            let rows: Vec<Vec<Scalar>> =
                (0..r).map(|_| (0..r).map(|_| field.from_int(rng.gen_range(0..p as i64))).collect()).collect();
            let g = Matrix::from_rows(rows)?;
            if g.inverse(&field).is_some() {
                break g;
            }
        };
        let mut failure = None;
        for c in fresh_pts.iter().take(4) {
            let gc = glr_act(&h, &g, c)?;
            for (i, coeffs) in polys.iter().enumerate() {
                if let Some(coeffs) = coeffs {
                    if eval(&field, &monos[i], coeffs, &gc) != eval(&field, &monos[i], coeffs, c) {
                        failure.get_or_insert_with(|| format!("ξ_{i} moved by g = {:?}", g.data().iter().map(|&x| field.format(x)).collect::<Vec<_>>()));
                    }
                }
            }
        }
        gl.record(failure);
    }

    let mut diagram = Check::new("diagram_pointwise");
    let tw = torus_tw(h.base_ring());
    for (k, c) in fresh_pts.iter().enumerate() {
        let t_w = torus_element(&tw, c);
        let ok = beta(&h, &t_w)? == torus_element(&gens, c) && pullback_eval(&h, &t_w)? == xis[n_fit + k];
        diagram.record((!ok).then(|| format!("fresh point {k}")));
    }

    let mut report = Report::new("torus", cfg);
    report.push(interp.with_stats(json!({ "field_m": m, "fit_points": n_fit, "restrictions": stats_polys })));
    report.push(residual);
    report.push(gl);
    report.push(dickson);
    report.push(diagram);
    let columns = ["i", "degree", "exponents", "coefficient", "dickson_coefficient"];
    report.table = Some(Table { columns: columns.iter().map(|s| s.to_string()).collect(), rows });
    Ok(report.finish(started))
}
