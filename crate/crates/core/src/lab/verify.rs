use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{run_indexed, sample_rng, Check, ExperimentConfig, Report};
use crate::aut::{
    ad_action, adh_formula_check, beta, bracket_characterization, detect_orientation, diagram_check,
    gh_test, lift_mu, random_gh, AdOrientation, AlgebraMap,
};
use crate::bn::{form_apply_algmap, form_apply_derivation, TruncPoly};
use crate::error::{Error, Result};
use crate::gf::{Matrix, Scalar};
use crate::ham::{torus_tw, HamCtx};
use crate::pinv::{is_nilpotent_xi, phi_solve, pmap, relation_check, xi_with, Variant, XiRoute};
use crate::wn::Derivation;

/// Battery names accepted by [`verify_suite`].
pub const BATTERIES: &[&str] = &[
    "gf",
    "bn",
    "wn",
    "chi_shape",
    "ham",
    "dims",
    "psi_roots",
    "nilpotency",
    "invariance",
    "beta",
    "lift",
    "gh_multiplier",
    "xi_routes",
    "pmap",
    "relation",
    "semisimple",
    "simplicity",
];

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    h: &'a HamCtx,
    orientation: AdOrientation,
}

type Outcome = Result<Option<String>>;

fn fail_if(bad: bool, witness: impl FnOnce() -> String) -> Outcome {
    Ok(bad.then(witness))
}

/// The cheapest exact ξ route for the rank: char poly at `r = 1`, the `φ̃`
/// system above.
fn route(h: &HamCtx) -> XiRoute {
    if h.r() == 1 {
        XiRoute::CharPoly
    } else {
        XiRoute::PhiTilde
    }
}

/// A potential biased towards nilpotent and non-semisimple elements on
/// every third draw.
fn mixed_potential(h: &HamCtx, k: u64, rng: &mut ChaCha8Rng) -> TruncPoly {
    let ring = h.ring();
    let mut f = match k % 3 {
        0 => h.random_potential(rng),
        1 => &(&ring.random_in_m(rng) * &ring.random_in_m(rng)) * &ring.random_in_m(rng),
        _ => {
            let mut g = ring.zero();
            for i in 0..h.r() {
                let mut e = vec![0; h.n()];
                for k in 1..h.p() {
                    e[i] = k;
                    g.set_coeff(ring.index(&e).expect("k < p"), h.field().random(rng));
                }
            }
            g.set_coeff(ring.var_index(h.r()), h.field().random(rng));
            g
        }
    };
    f.set_coeff(ring.tau(), Scalar::ZERO);
    f
}

fn sample(c: &Ctx, name: &str, k: u64, rng: &mut ChaCha8Rng) -> Outcome {
    let h = c.h;
    let field = h.field();
    let ring = h.ring();
    match name {
        "gf" => {
            let (a, b, d) = (field.random(rng), field.random(rng), field.random(rng));
            let mut ok = field.mul(a, field.add(b, d)) == field.add(field.mul(a, b), field.mul(a, d));
            ok &= field.mul(field.mul(a, b), d) == field.mul(a, field.mul(b, d));
            ok &= a.is_zero() || field.mul(a, field.inv(a).expect("nonzero")) == Scalar::ONE;
            ok &= field.frobenius(field.add(a, b)) == field.add(field.frobenius(a), field.frobenius(b));
            let pr = (h.p() as u64).pow(h.r() as u32);
            ok &= field.pow(field.proot(a, h.r() as u32), pr) == a;
            fail_if(!ok, || format!("a={}, b={}, c={}", field.format(a), field.format(b), field.format(d)))
        }
        "bn" => {
            let (f, g, e) = (ring.random(rng), ring.random(rng), ring.random(rng));
            let mut ok = &f * &(&g + &e) == &(&f * &g) + &(&f * &e);
            ok &= &(&f * &g) * &e == &f * &(&g * &e);
            let i = rng.gen_range(0..h.n());
            let j = rng.gen_range(0..h.n());
            let fg = &f * &g;
            ok &= fg.partial(i)? == &(&f.partial(i)? * &g) + &(&f * &g.partial(i)?);
            ok &= f.partial(i)?.partial(j)? == f.partial(j)?.partial(i)?;
            fail_if(!ok, || format!("f = {}", f.display()))
        }
        "wn" => {
            let (d, e, g) = (Derivation::random(ring, rng), Derivation::random(ring, rng), Derivation::random(ring, rng));
            let jac = d
                .bracket(&e.bracket(&g)?)?
                .add(&e.bracket(&g.bracket(&d)?)?)?
                .add(&g.bracket(&d.bracket(&e)?)?)?;
            let f = ring.random(rng);
            let lhs = d.bracket(&e)?.apply(&f)?;
            let rhs = &d.apply(&e.apply(&f)?)? - &e.apply(&d.apply(&f)?)?;
            let mut iter = f.clone();
            for _ in 0..h.p() {
                iter = d.apply(&iter)?;
            }
            let ok = jac.is_zero() && lhs == rhs && d.p_power().apply(&f)? == iter;
            fail_if(!ok, || format!("D = {}", d.display()))
        }
        "chi_shape" => {
            let d = Derivation::random(ring, rng);
            let cp = d.char_poly();
            let pn = ring.dim();
            let bad = cp.degree() != Some(pn)
                || !cp.is_monic()
                || cp.support().any(|k| k != pn && !(0..h.n()).any(|i| k == h.p().pow(i as u32)));
            fail_if(bad, || format!("D = {}", d.display()))
        }
        "ham" => {
            let (f, g) = (ring.random(rng), ring.random(rng));
            let df = h.d_h(&f)?;
            let mut centred = f.clone();
            centred.set_coeff(0, Scalar::ZERO);
            let ok = h.d_h(&h.poisson(&f, &g)?)? == df.bracket(&h.d_h(&g)?)?
                && h.delta(&df)? == centred
                && form_apply_derivation(&df, h.omega())?.is_zero();
            fail_if(!ok, || format!("f = {}", f.display()))
        }
        "psi_roots" => {
            let f = h.random_potential(rng);
            let psi = h.d_h(&f)?.psi()?;
            let r = h.r();
            let pr = (h.p() as u64).pow(r as u32);
            if let Some(i) = psi[..r].iter().position(|z| !z.is_zero()) {
                return Ok(Some(format!("ψ_{i} ≠ 0 for f = {}", f.display())));
            }
            let sol = phi_solve(h, &f, Variant::Tilde)?;
            for i in 0..r {
                if let Some(phi) = sol.get(pr as usize - h.p().pow(i as u32)) {
                    if field.pow(phi, pr) != psi[r + i] {
                        return Ok(Some(format!("ψ_{} ≠ φ̃^(p^r) for f = {}", r + i, f.display())));
                    }
                }
            }
            Ok(None)
        }
        "nilpotency" => {
            let f = mixed_potential(h, k, rng);
            let d = h.d_h(&f)?;
            fail_if(is_nilpotent_xi(h, &d)? != d.is_nilpotent_operator(), || format!("f = {}", f.display()))
        }
        "invariance" => {
            let (mu, _) = random_gh(h, rng)?;
            let d = h.random_element(rng).d;
            let moved = ad_action(&mu, &d)?;
            fail_if(xi_with(h, &moved, route(h))? != xi_with(h, &d, route(h))?, || format!("D = {}", d.display()))
        }
        "beta" => {
            let br = h.base_ring();
            let (d, e) = (Derivation::random(br, rng), Derivation::random(br, rng));
            let bd = beta(h, &d)?;
            let ok = beta(h, &d.bracket(&e)?)? == bd.bracket(&beta(h, &e)?)?
                && beta(h, &d.p_power())? == bd.p_power()
                && h.element(&bd).is_ok();
            fail_if(!ok, || format!("D = {}", d.display()))
        }
        "lift" => {
            let br = h.base_ring();
            let mu = AlgebraMap::random(br, rng);
            let (lift, alpha) = lift_mu(h, &mu)?;
            let mut ok = form_apply_algmap(lift.images(), h.omega())? == h.omega().scale(alpha);
            for i in 0..h.r() {
                ok &= h.poisson(&lift.images()[h.r() + i], &lift.images()[i])? == ring.constant(field.neg(alpha));
            }
            let f = ring.random(rng);
            ok &= adh_formula_check(h, &lift, alpha, &f, c.orientation)?;
            ok &= diagram_check(h, &mu, &Derivation::random(br, rng), c.orientation)?;
            ok &= lift_mu(h, &mu.inverse())?.0 == lift.inverse();
            fail_if(!ok, || format!("μ(x) = {:?}", mu.images().iter().map(|g| g.display()).collect::<Vec<_>>()))
        }
        "gh_multiplier" => {
            let (mut mu, alpha) = random_gh(h, rng)?;
            if c.cfg.corrupt {
                let mut images = mu.images().to_vec();
                let mut e = vec![0; h.n()];
                e[0] = 2;
                let idx = ring.index(&e).expect("p > 2");
                let bumped = field.add(images[0].coeff(idx), Scalar::ONE);
                images[0].set_coeff(idx, bumped);
                mu = AlgebraMap::new(ring, images)?;
            }
            let witness = || format!("μ(x1) = {}", mu.images()[0].display());
            let gh = gh_test(h, &mu);
            let br = bracket_characterization(h, &mu, 5, rng);
            if gh != Ok(alpha) || br != Ok(alpha) {
                return Ok(Some(witness()));
            }
            let f = ring.random(rng);
            fail_if(!adh_formula_check(h, &mu, alpha, &f, c.orientation)?, witness)
        }
        "xi_routes" => {
            let f = mixed_potential(h, k, rng);
            let d = h.d_h(&f)?;
            let a = xi_with(h, &d, XiRoute::PowerRelation)?;
            let b = xi_with(h, &d, XiRoute::PhiTilde)?;
            let ok = a == b && (h.r() > 1 || xi_with(h, &d, XiRoute::CharPoly)? == a);
            fail_if(!ok, || format!("f = {}", f.display()))
        }
        "pmap" => {
            let f = ring.random(rng);
            let g = pmap(h, &f)?;
            fail_if(h.d_h(&g)? != h.d_h(&f)?.p_power() || !g.kappa().is_zero(), || format!("f = {}", f.display()))
        }
        "relation" => {
            let f = h.random_potential(rng);
            match relation_check(h, &f) {
                Ok(holds) => fail_if(!holds, || format!("f = {}", f.display())),
                Err(Error::Undetermined(_)) => Err(Error::Undetermined(0)),
                Err(e) => Err(e),
            }
        }
        "semisimple" => {
            let d = if k % 2 == 0 { Derivation::random(ring, rng) } else { h.random_element(rng).d };
            let psi = d.psi()?;
            fail_if(d.is_p_semisimple() != d.radical_annihilates(&psi), || format!("D = {}", d.display()))
        }
        _ => Err(Error::InvalidArgument(format!("unknown battery {name}"))),
    }
}

/// Batteries that run once rather than per sample.
fn fixed_check(c: &Ctx, name: &str) -> Result<Option<Check>> {
    let h = c.h;
    let field = h.field();
    Ok(match name {
        "dims" => {
            let mut check = Check::new("dims");
            let basis = h.ham_basis();
            let expected = h.ring().dim() - 2;
            let rank = Matrix::from_rows(basis.iter().map(|e| e.d.to_vec()).collect())?.rank(field);
            check.record((basis.len() != expected || rank != expected).then(|| format!("size {} rank {rank}", basis.len())));
            Some(check.with_stats(json!({ "expected": expected, "size": basis.len(), "rank": rank })))
        }
        "simplicity" if h.r() > 1 => Some(Check::new("simplicity").with_stats(json!({ "skipped": "r > 1" }))),
        "beta_fixed" => {
            let mut check = Check::new("beta_fixed");
            let br = h.base_ring();
            for (t, th) in torus_tw(br).iter().zip(h.torus_th()) {
                check.record((beta(h, t)? != th).then(|| format!("β({}) ≠ {}", t.display(), th.display())));
            }
            let rows: Vec<Vec<Scalar>> = (0..h.r())
                .flat_map(|i| (0..br.dim()).map(move |a| (i, a)))
                .map(|(i, a)| {
                    let mut coeffs = vec![br.zero(); h.r()];
                    coeffs[i] = br.monomial(a, Scalar::ONE);
                    Ok(beta(h, &Derivation::new(coeffs)?)?.to_vec())
                })
                .collect::<Result<_>>()?;
            let rank = Matrix::from_rows(rows)?.rank(field);
            check.record((rank != h.r() * br.dim()).then(|| format!("β has rank {rank}")));
            Some(check)
        }
        _ => None,
    })
}

fn run_battery(c: &Ctx, name: &str, stream: u64, started: Instant) -> Result<(Check, bool)> {
    if let Some(check) = fixed_check(c, name)? {
        return Ok((check, false));
    }
    if name == "simplicity" {
        let dims = c.h.simplicity_probe(c.cfg.samples, c.cfg.seed);
        let expected = c.h.ring().dim() - 2;
        let mut check = Check::new("simplicity");
        for d in dims {
            check.record((d != expected).then(|| format!("ideal of dimension {d}")));
        }
        return Ok((check, false));
    }
    let (outcomes, partial) = run_indexed(c.cfg, c.cfg.samples as u64, started, |k| {
        let mut rng = sample_rng(c.cfg.seed, stream, k);
        sample(c, name, k, &mut rng)
    });
    let mut check = Check::new(name);
    let mut skipped = 0u64;
    for o in outcomes {
        match o {
            Ok(w) => check.record(w),
            Err(Error::Undetermined(_)) => skipped += 1,
            Err(e @ Error::InvalidArgument(_)) => return Err(e),
            Err(e) => check.record(Some(format!("error: {e}"))),
        }
    }
    if skipped > 0 {
        check = check.with_stats(json!({ "undetermined_skipped": skipped }));
    }
    Ok((check, partial))
}

/// Runs the named batteries. The `Ad` orientation is measured once at the
/// start and recorded in the report; an empty list gives an empty passing
/// report.
pub fn verify_suite(names: &[&str], cfg: &ExperimentConfig) -> Result<Report> {
    let started = Instant::now();
    let mut report = Report::new("verify", cfg);
    if names.is_empty() {
        return Ok(report.finish(started));
    }
    if let Some(bad) = names.iter().find(|n| !BATTERIES.contains(n)) {
        return Err(Error::InvalidArgument(format!("unknown battery {bad}; known: {}", BATTERIES.join(", "))));
    }
    let h = cfg.ham()?;
    let detected = detect_orientation(&h)?;
    report.ad_orientation = detected;
    let Some(orientation) = detected else {
        let mut check = Check::new("ad_orientation");
        check.record(Some("neither orientation satisfies the G_H identity".into()));
        report.push(check);
        return Ok(report.finish(started));
    };
    let ctx = Ctx { cfg, h: &h, orientation };
    for name in names {
        let stream = 0x100 + BATTERIES.iter().position(|b| b == name).expect("validated") as u64;
        let (check, partial) = run_battery(&ctx, name, stream, started)?;
        report.partial |= partial;
        report.push(check);
        if *name == "beta" {
            let (check, _) = run_battery(&ctx, "beta_fixed", stream, started)?;
            report.push(check);
        }
    }
    Ok(report.finish(started))
}
