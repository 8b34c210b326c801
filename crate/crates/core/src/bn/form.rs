use super::{RingRef, TruncPoly};
use crate::error::{Error, Result};
use crate::gf::Scalar;
use crate::wn::Derivation;

/// `Σ_{i<j} g_ij dx_i ∧ dx_j`, with only the upper triangle stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoForm {
    ring: RingRef,
    /// Row-major upper triangle: `(0,1), (0,2), ..., (1,2), ...`.
    g: Vec<TruncPoly>,
}

impl TwoForm {
    pub fn zero(ring: &RingRef) -> Self {
        let n = ring.n();
        Self { ring: ring.clone(), g: vec![ring.zero(); n * n.saturating_sub(1) / 2] }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j);
        let n = self.ring.n();
        i * (2 * n - i - 1) / 2 + (j - i - 1)
    }

    /// The coefficient `g_ij`, honouring `g_ji = -g_ij` and `g_ii = 0`.
    pub fn get(&self, i: usize, j: usize) -> TruncPoly {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.g[self.slot(i, j)].clone(),
            std::cmp::Ordering::Greater => -&self.g[self.slot(j, i)],
            std::cmp::Ordering::Equal => self.ring.zero(),
        }
    }

    /// Adds `c * h * dx_i ∧ dx_j`.
    pub fn add_term(&mut self, i: usize, j: usize, c: Scalar, h: &TruncPoly) {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => {
                let s = self.slot(i, j);
                self.g[s].axpy(c, h);
            }
            std::cmp::Ordering::Greater => {
                let s = self.slot(j, i);
                let neg = self.ring.field().neg(c);
                self.g[s].axpy(neg, h);
            }
            std::cmp::Ordering::Equal => {}
        }
    }

    pub fn is_zero(&self) -> bool {
        self.g.iter().all(TruncPoly::is_zero)
    }

    pub fn scale(&self, c: Scalar) -> TwoForm {
        Self { ring: self.ring.clone(), g: self.g.iter().map(|h| h.scale(c)).collect() }
    }

    /// Returns `α` when `self = α * other` for a scalar `α` (and `other ≠ 0`).
    pub fn scalar_ratio(&self, other: &TwoForm) -> Option<Scalar> {
        let f = self.ring.field();
        let (slot, idx) = other
            .g
            .iter()
            .enumerate()
            .find_map(|(s, h)| h.coeffs().iter().position(|c| !c.is_zero()).map(|i| (s, i)))?;
        let alpha = f.div(self.g[slot].coeff(idx), other.g[slot].coeff(idx))?;
        (*self == other.scale(alpha)).then_some(alpha)
    }
}

/// The Lie derivative `D(ω)` of a 2-form along a derivation.
pub fn form_apply_derivation(d: &Derivation, w: &TwoForm) -> Result<TwoForm> {
    let ring = w.ring.clone();
    if **d.ring() != *ring {
        return Err(Error::ContextMismatch);
    }
    let n = ring.n();
    let one = Scalar::ONE;
    // d(D x_i) = Σ_k ∂_k f_i dx_k
    let dfs: Vec<Vec<TruncPoly>> =
        d.coeffs().iter().map(|fi| (0..n).map(|k| fi.partial(k).expect("k < n")).collect()).collect();
    let mut out = TwoForm::zero(&ring);
    for i in 0..n {
        for j in i + 1..n {
            let g = &w.g[w.slot(i, j)];
            if g.is_zero() {
                continue;
            }
            out.add_term(i, j, one, &d.apply(g)?);
            for k in 0..n {
                out.add_term(k, j, one, &(g * &dfs[i][k]));
                out.add_term(i, k, one, &(g * &dfs[j][k]));
            }
        }
    }
    Ok(out)
}

/// The pullback `μ(ω)` along the algebra map `x_k -> images[k]`.
pub fn form_apply_algmap(images: &[TruncPoly], w: &TwoForm) -> Result<TwoForm> {
    let ring = w.ring.clone();
    let n = ring.n();
    if images.len() != n {
        return Err(Error::DimensionMismatch(format!("{} images for {n} variables", images.len())));
    }
    let dmu: Vec<Vec<TruncPoly>> =
        images.iter().map(|m| (0..n).map(|k| m.partial(k).expect("k < n")).collect()).collect();
    let mut out = TwoForm::zero(&ring);
    for i in 0..n {
        for j in i + 1..n {
            let g = &w.g[w.slot(i, j)];
            if g.is_zero() {
                continue;
            }
            let mg = g.subst(images)?;
            for k in 0..n {
                let a = &mg * &dmu[i][k];
                if a.is_zero() {
                    continue;
                }
                for l in 0..n {
                    if l != k {
                        out.add_term(k, l, Scalar::ONE, &(&a * &dmu[j][l]));
                    }
                }
            }
        }
    }
    Ok(out)
}
