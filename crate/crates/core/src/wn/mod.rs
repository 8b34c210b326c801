//! The Jacobson-Witt algebra `W_n = Der B_n`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::bn::{mul_into, RingRef, TruncPoly};
use crate::error::{Error, Result};
use crate::gf::{char_poly, Field, Insert, Matrix, Scalar, Span, UniPoly};

/// `D = Σ f_i ∂_i`.
#[derive(Clone, PartialEq, Eq)]
pub struct Derivation {
    ring: RingRef,
    coeffs: Vec<TruncPoly>,
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

impl Derivation {
    pub fn new(coeffs: Vec<TruncPoly>) -> Result<Self> {
        let ring = coeffs.first().map(|c| c.ring().clone()).ok_or_else(|| Error::DimensionMismatch("no coefficients".into()))?;
        if coeffs.len() != ring.n() {
            return Err(Error::DimensionMismatch(format!("{} coefficients for {} variables", coeffs.len(), ring.n())));
        }
        if coeffs.iter().any(|c| **c.ring() != *ring) {
            return Err(Error::ContextMismatch);
        }
        Ok(Self { ring, coeffs })
    }

    pub fn zero(ring: &RingRef) -> Self {
        Self { ring: ring.clone(), coeffs: vec![ring.zero(); ring.n()] }
    }

    /// `∂_{i+1}` (zero-based `i`).
    pub fn partial(ring: &RingRef, i: usize) -> Self {
        let mut d = Self::zero(ring);
        d.coeffs[i] = ring.one();
        d
    }

    pub fn random<R: Rng + ?Sized>(ring: &RingRef, rng: &mut R) -> Self {
        Self { ring: ring.clone(), coeffs: (0..ring.n()).map(|_| ring.random(rng)).collect() }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    pub fn coeffs(&self) -> &[TruncPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &TruncPoly {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(TruncPoly::is_zero)
    }

    fn check(&self, other: &Derivation) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn add(&self, other: &Derivation) -> Result<Derivation> {
        self.check(other)?;
        Ok(Self { ring: self.ring.clone(), coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &Derivation) -> Result<Derivation> {
        self.check(other)?;
        Ok(Self { ring: self.ring.clone(), coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() })
    }

    pub fn scale(&self, c: Scalar) -> Derivation {
        Self { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|f| f.scale(c)).collect() }
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: Scalar, other: &Derivation) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            a.axpy(c, b);
        }
    }

    /// Coefficient vector of length `n p^n`, `f_1` first.
    pub fn to_vec(&self) -> Vec<Scalar> {
        self.coeffs.iter().flat_map(|c| c.coeffs().iter().copied()).collect()
    }

    pub fn from_vec(ring: &RingRef, v: &[Scalar]) -> Result<Self> {
        let d = ring.dim();
        if v.len() != d * ring.n() {
            return Err(Error::DimensionMismatch(format!("vector of length {} for W_{}", v.len(), ring.n())));
        }
        let coeffs = v.chunks(d).map(|c| ring.from_coeffs(c.to_vec())).collect::<Result<_>>()?;
        Ok(Self { ring: ring.clone(), coeffs })
    }

    /// `D(g) = Σ f_i ∂_i g`.
    pub fn apply(&self, g: &TruncPoly) -> Result<TruncPoly> {
        if **g.ring() != *self.ring {
            return Err(Error::ContextMismatch);
        }
        let mut out = self.ring.zero();
        for (i, fi) in self.coeffs.iter().enumerate() {
            if fi.is_zero() {
                continue;
            }
            let dg = g.partial(i)?;
            mul_into(&self.ring, out.coeffs_mut(), fi.coeffs(), dg.coeffs());
        }
        Ok(out)
    }

    /// `[D, E]_j = D(E_j) - E(D_j)`.
    pub fn bracket(&self, other: &Derivation) -> Result<Derivation> {
        self.check(other)?;
        let coeffs = (0..self.ring.n())
            .map(|j| Ok(&self.apply(&other.coeffs[j])? - &other.apply(&self.coeffs[j])?))
            .collect::<Result<_>>()?;
        Ok(Self { ring: self.ring.clone(), coeffs })
    }

    /// Matrix of `D` acting on `B_n`; column `a` holds the coefficients of
    /// `D(x^a)`.
    pub fn operator_matrix(&self) -> Matrix {
        let ring = &self.ring;
        let f = ring.field();
        let dim = ring.dim();
        let mut cols = vec![vec![Scalar::ZERO; dim]; dim];
        for (a, col) in cols.iter_mut().enumerate() {
            let mut acc = ring.zero();
            for i in 0..ring.n() {
                let ai = ring.exp(a, i);
                if ai > 0 {
                    acc.add_shifted(f.from_int(ai as i64), a - ring.var_index(i), &self.coeffs[i]);
                }
            }
            *col = acc.into_coeffs();
        }
        Matrix::from_columns(dim, &cols).expect("square by construction")
    }

    /// The restricted `p`-th power: the derivation with coefficients `D^p(x_i)`.
    pub fn p_power(&self) -> Derivation {
        let p = self.ring.p();
        let coeffs = self
            .coeffs
            .iter()
            .map(|fi| {
                let mut g = fi.clone();
                for _ in 1..p {
                    if g.is_zero() {
                        break;
                    }
                    g = self.apply(&g).expect("same ring");
                }
                g
            })
            .collect();
        Self { ring: self.ring.clone(), coeffs }
    }

    /// `D^{[p^k]}`.
    pub fn p_power_iter(&self, k: usize) -> Derivation {
        let mut d = self.clone();
        for _ in 0..k {
            if d.is_zero() {
                break;
            }
            d = d.p_power();
        }
        d
    }

    /// `det(t - D)` on `B_n`.
    pub fn char_poly(&self) -> UniPoly {
        char_poly(self.field(), &self.operator_matrix()).expect("operator matrix is square")
    }

    /// `(ψ_0, ..., ψ_{n-1})`.
    pub fn psi(&self) -> Result<Vec<Scalar>> {
        psi_from_char_poly(self.ring.p(), self.ring.n(), &self.char_poly())
    }

    /// True when `χ_D = t^{p^n}`.
    pub fn is_nilpotent_operator(&self) -> bool {
        self.char_poly() == UniPoly::monomial(self.ring.dim())
    }

    /// True when `D` lies in the span of `D^{[p]}, D^{[p^2]}, ...`.
    pub fn is_p_semisimple(&self) -> bool {
        let f = self.field();
        let mut span = Span::new(self.ring.n() * self.ring.dim());
        let target = self.to_vec();
        let mut cur = self.clone();
        loop {
            cur = cur.p_power();
            let v = cur.to_vec();
            let dependent = matches!(span.insert(f, &v), Insert::Dependent(_));
            if span.contains(f, &target) {
                return true;
            }
            // The span of the p-power sequence is stable once one term depends
            // on its predecessors, since the terms commute.
            if dependent {
                return false;
            }
        }
    }

    /// Cross-check for [`is_p_semisimple`](Self::is_p_semisimple): the
    /// squarefree part of `χ_D` annihilates `D`. With `i0` the least index
    /// with `ψ_{i0} ≠ 0` that squarefree part is
    /// `Σ_{i ≥ i0} ψ_i^{1/p^{i0}} t^{p^{i - i0}}`.
    pub fn radical_annihilates(&self, psi: &[Scalar]) -> bool {
        let f = self.field();
        let n = self.ring.n();
        let Some(i0) = psi.iter().position(|c| !c.is_zero()) else {
            return self.is_zero();
        };
        let mut acc = Derivation::zero(&self.ring);
        let mut power = self.clone();
        for i in i0..=n {
            let c = if i == n { Scalar::ONE } else { f.proot(psi[i], i0 as u32) };
            acc.axpy(c, &power);
            if i < n {
                power = power.p_power();
            }
        }
        acc.is_zero()
    }

    pub fn display(&self) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let terms = c.coeffs().iter().filter(|v| !v.is_zero()).count();
            let d = format!("d{}", i + 1);
            parts.push(match (*c == self.ring.one(), terms) {
                (true, _) => d,
                (false, 1) => format!("{}*{d}", c.display()),
                _ => format!("({})*{d}", c.display()),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Splits `t^{p^n} + Σ ψ_i t^{p^i}` into its `ψ` values.
pub fn psi_from_char_poly(p: usize, n: usize, cp: &UniPoly) -> Result<Vec<Scalar>> {
    let pn = p.pow(n as u32);
    if cp.degree() != Some(pn) || !cp.is_monic() {
        return Err(Error::ShapeViolation(cp.degree().unwrap_or(0)));
    }
    let mut psi = Vec::with_capacity(n);
    let mut next_power = 1;
    for k in cp.support() {
        if k == pn {
            continue;
        }
        // Non-p-power exponent (including the constant term).
        if k == 0 || p.pow(k.ilog(p)) != k {
            return Err(Error::ShapeViolation(k));
        }
    }
    for _ in 0..n {
        psi.push(cp.coeff(next_power));
        next_power *= p;
    }
    Ok(psi)
}

#[cfg(test)]
mod tests;
