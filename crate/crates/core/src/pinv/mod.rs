//! The `p`-map on `B_n`, divided powers, the `φ̃`/`φ` systems and the
//! invariants `ξ_i`.

mod xi;

pub use xi::{directional_derivative, directional_derivatives, is_nilpotent_xi, xi, xi_with, XiRoute};

use crate::bn::TruncPoly;
use crate::error::{Error, Result};
use crate::gf::{solve_linear, Field, Matrix, Scalar};
use crate::ham::HamCtx;
use crate::wn::Derivation;

/// `f^{[p]} = δ(D_H(f)^{[p]})`, normalized so that `κ(f^{[p]}) = 0`.
pub fn pmap(h: &HamCtx, f: &TruncPoly) -> Result<TruncPoly> {
    let d = h.d_h(f)?;
    h.delta(&d.p_power())
}

/// `f^{[p^i]}`, with `f^{[1]} = f`.
pub fn pmap_iter(h: &HamCtx, f: &TruncPoly, i: usize) -> Result<TruncPoly> {
    let mut g = f.clone();
    for _ in 0..i {
        g = pmap(h, &g)?;
    }
    Ok(g)
}

/// Which divided-power family: `f^{<a>}` (tilde) or `f^{[a]}` (plain).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Tilde,
    Plain,
}

/// Base-`p` digits of `a`, least significant first.
pub fn digits(a: usize, p: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut rest = a;
    while rest > 0 {
        out.push(rest % p);
        rest /= p;
    }
    out
}

/// `binom(a, b) mod p` via Lucas' theorem.
pub fn binom_mod_p(a: usize, b: usize, p: usize) -> u64 {
    if b > a {
        return 0;
    }
    let (da, db) = (digits(a, p), digits(b, p));
    let mut acc = 1u64;
    for (i, &ai) in da.iter().enumerate() {
        let bi = db.get(i).copied().unwrap_or(0);
        if bi > ai {
            return 0;
        }
        // Small binomial by the multiplicative formula over the integers.
        let mut c = 1u64;
        for k in 0..bi {
            c = c * (ai - k) as u64 / (k + 1) as u64;
        }
        acc = acc * (c % p as u64) % p as u64;
    }
    acc
}

/// Powers `g_i^e` (`e < p`) of the factors `g_i = f^{[p^i]}` (shifted by
/// `-κ` for the tilde family), for `i ≤ top`.
pub struct DividedPowers {
    p: usize,
    powers: Vec<Vec<TruncPoly>>,
}

impl DividedPowers {
    pub fn new(h: &HamCtx, f: &TruncPoly, top: usize, variant: Variant) -> Result<Self> {
        let p = h.p();
        let mut powers = Vec::with_capacity(top + 1);
        let mut g = f.clone();
        for i in 0..=top {
            if i > 0 {
                g = pmap(h, &g)?;
            }
            let mut base = g.clone();
            if variant == Variant::Tilde {
                base.set_coeff(0, Scalar::ZERO);
            }
            let mut row = vec![h.ring().one()];
            for e in 1..p {
                let next = &row[e - 1] * &base;
                row.push(next);
            }
            powers.push(row);
        }
        Ok(Self { p, powers })
    }

    /// `f^{<a>}` or `f^{[a]}`; `a` must be below `p^{top+1}`.
    pub fn get(&self, a: usize) -> TruncPoly {
        let d = digits(a, self.p);
        assert!(d.len() <= self.powers.len(), "exponent {a} beyond the precomputed range");
        let mut acc = self.powers[0][0].clone();
        for (i, &e) in d.iter().enumerate() {
            if e > 0 {
                acc = &acc * &self.powers[i][e];
            }
        }
        acc
    }
}

/// `f^{<a>}` / `f^{[a]}`.
pub fn divided(h: &HamCtx, f: &TruncPoly, a: usize, variant: Variant) -> Result<TruncPoly> {
    let top = digits(a, h.p()).len().saturating_sub(1);
    Ok(DividedPowers::new(h, f, top, variant)?.get(a))
}

/// Pointwise solution of `f^{<p^r>} + Σ_a φ̃_a(f) f^{<p^r - a>} = 0` (or its
/// plain twin).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiSolve {
    /// `values[a - 1]` is `φ_a(f)` for `a = 1..p^r - 1`.
    pub values: Vec<Scalar>,
    pub determined: Vec<bool>,
    pub variant: Variant,
}

impl PhiSolve {
    /// `φ_a`, if determined.
    pub fn get(&self, a: usize) -> Option<Scalar> {
        self.determined[a - 1].then(|| self.values[a - 1])
    }

    pub fn fully_determined(&self) -> bool {
        self.determined.iter().all(|&d| d)
    }
}

pub fn phi_solve(h: &HamCtx, f: &TruncPoly, variant: Variant) -> Result<PhiSolve> {
    let field = h.field();
    let pr = h.p().pow(h.r() as u32);
    let dp = DividedPowers::new(h, f, h.r(), variant)?;
    let cols: Vec<Vec<Scalar>> = (1..pr).map(|a| dp.get(pr - a).into_coeffs()).collect();
    let a = Matrix::from_columns(h.ring().dim(), &cols)?;
    let rhs: Vec<Scalar> = dp.get(pr).coeffs().iter().map(|&c| field.neg(c)).collect();
    let sol = solve_linear(field, &a, &rhs)?;
    Ok(PhiSolve { values: sol.x, determined: sol.determined, variant })
}

/// Checks `φ̃_a(f) = Σ_{b=1}^{a} (-1)^{a-b} binom(a-1, b-1) κ(f^{[a-b]}) φ_b(f)`
/// for `0 < a < p^r`, with `f^{[0]} = 1`. Both systems must be fully
/// determined.
pub fn relation_check(h: &HamCtx, f: &TruncPoly) -> Result<bool> {
    let field: &Field = h.field();
    let p = h.p();
    let pr = p.pow(h.r() as u32);
    let tilde = phi_solve(h, f, Variant::Tilde)?;
    let plain = phi_solve(h, f, Variant::Plain)?;
    for s in [&tilde, &plain] {
        if let Some(a) = s.determined.iter().position(|&d| !d) {
            return Err(Error::Undetermined(a + 1));
        }
    }
    let dp = DividedPowers::new(h, f, h.r(), Variant::Plain)?;
    let kappas: Vec<Scalar> = (0..pr).map(|a| dp.get(a).kappa()).collect();
    for a in 1..pr {
        let mut rhs = Scalar::ZERO;
        for b in 1..=a {
            let sign = if (a - b) % 2 == 0 { 1 } else { -1 };
            let c = field.from_int(sign * binom_mod_p(a - 1, b - 1, p) as i64);
            rhs = field.add(rhs, field.mul(field.mul(c, kappas[a - b]), plain.values[b - 1]));
        }
        if rhs != tilde.values[a - 1] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `f, f^{[p]}, ..., f^{[p^{r-1}]}` are independent modulo `k + 𝔪^2`.
pub fn in_u(h: &HamCtx, f: &TruncPoly) -> Result<bool> {
    let mut rows = Vec::with_capacity(h.r());
    let mut g = f.clone();
    for i in 0..h.r() {
        if i > 0 {
            g = pmap(h, &g)?;
        }
        rows.push(g.linear_part());
    }
    Ok(Matrix::from_rows(rows)?.rank(h.field()) == h.r())
}

/// `D ∈ V`, i.e. `δ(D) ∈ U`.
pub fn in_v(h: &HamCtx, d: &Derivation) -> Result<bool> {
    in_u(h, &h.delta(d)?)
}
