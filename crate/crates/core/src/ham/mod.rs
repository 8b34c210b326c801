//! The Hamiltonian algebra `H_n ⊆ H_n' ⊆ H_n''` inside `W_{2r}`.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bn::{form_apply_derivation, Ring, RingRef, TruncPoly, TwoForm};
use crate::error::{Error, Result};
use crate::gf::{FieldRef, Insert, Scalar, Span};
use crate::wn::Derivation;

/// `B_{2r}` together with its Hamiltonian form.
#[derive(Clone, Debug)]
pub struct HamCtx {
    ring: RingRef,
    base: RingRef,
    r: usize,
    omega: TwoForm,
}

pub type HamRef = Arc<HamCtx>;

/// Membership class of a derivation in the chain `H ⊆ H' ⊆ H''`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HFamily {
    H,
    HPrime,
    HDoublePrime,
    Outside,
}

/// An element of `H_n'` with its potential: `d = D_H(f)`, `κ(f) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamElement {
    pub d: Derivation,
    pub f: TruncPoly,
}

impl HamCtx {
    pub fn new(field: FieldRef, r: usize) -> Result<HamRef> {
        if r == 0 {
            return Err(Error::InvalidArgument("r must be at least 1".into()));
        }
        let ring = Ring::new(field.clone(), 2 * r)?;
        let base = Ring::new(field, r)?;
        let mut omega = TwoForm::zero(&ring);
        for i in 0..r {
            omega.add_term(i, i + r, Scalar::ONE, &ring.one());
        }
        Ok(Arc::new(Self { ring, base, r, omega }))
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    /// `B_r`, the source of `θ_r` and of the lift.
    pub fn base_ring(&self) -> &RingRef {
        &self.base
    }

    pub fn field(&self) -> &FieldRef {
        self.ring.field()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        2 * self.r
    }

    pub fn p(&self) -> usize {
        self.ring.p()
    }

    /// `ω_H = Σ dx_i ∧ dx_{i+r}`.
    pub fn omega(&self) -> &TwoForm {
        &self.omega
    }

    /// `D_H(f) = Σ_i ∂_i(f) ∂_{i+r} - ∂_{i+r}(f) ∂_i`.
    pub fn d_h(&self, f: &TruncPoly) -> Result<Derivation> {
        if **f.ring() != *self.ring {
            return Err(Error::ContextMismatch);
        }
        let r = self.r;
        let mut coeffs = vec![self.ring.zero(); 2 * r];
        for i in 0..r {
            coeffs[i + r] = f.partial(i)?;
            coeffs[i] = -&f.partial(i + r)?;
        }
        Derivation::new(coeffs)
    }

    /// The Poisson bracket `[f, g] = D_H(f)(g)`.
    pub fn poisson(&self, f: &TruncPoly, g: &TruncPoly) -> Result<TruncPoly> {
        self.d_h(f)?.apply(g)
    }

    /// The unique `f` with `D_H(f) = d` and `κ(f) = 0`.
    ///
    /// Recovers the partials `∂_k f` from the coefficients of `d` and
    /// integrates each monomial along its lowest-index variable, then checks
    /// the candidate against `d`.
    pub fn delta(&self, d: &Derivation) -> Result<TruncPoly> {
        if **d.ring() != *self.ring {
            return Err(Error::ContextMismatch);
        }
        let ring = &self.ring;
        let field = ring.field();
        let r = self.r;
        let partials: Vec<TruncPoly> =
            (0..2 * r).map(|k| if k < r { d.coeff(k + r).clone() } else { -d.coeff(k - r) }).collect();
        let mut f = ring.zero();
        for a in 1..ring.dim() {
            let j = (0..2 * r).find(|&j| ring.exp(a, j) > 0).expect("a is not the zero index");
            let c = partials[j].coeff(a - ring.var_index(j));
            if !c.is_zero() {
                let aj = field.from_int(ring.exp(a, j) as i64);
                f.set_coeff(a, field.div(c, aj).expect("exponent below p is a unit"));
            }
        }
        if self.d_h(&f)? != *d {
            return Err(Error::NotInImage);
        }
        Ok(f)
    }

    pub fn in_h_double_prime(&self, d: &Derivation) -> Result<bool> {
        Ok(form_apply_derivation(d, &self.omega)?.is_zero())
    }

    pub fn h_family(&self, d: &Derivation) -> Result<HFamily> {
        match self.delta(d) {
            Ok(f) if f.coeff(self.ring.tau()).is_zero() => Ok(HFamily::H),
            Ok(_) => Ok(HFamily::HPrime),
            Err(Error::NotInImage) => {
                Ok(if self.in_h_double_prime(d)? { HFamily::HDoublePrime } else { HFamily::Outside })
            }
            Err(e) => Err(e),
        }
    }

    /// Wraps `d ∈ H_n` with its potential; `NotInH` otherwise.
    pub fn element(&self, d: &Derivation) -> Result<HamElement> {
        let f = self.delta(d).map_err(|e| if e == Error::NotInImage { Error::NotInH } else { e })?;
        if !f.coeff(self.ring.tau()).is_zero() {
            return Err(Error::NotInH);
        }
        Ok(HamElement { d: d.clone(), f })
    }

    /// `D_H(f)` with `f` normalized to `κ(f) = 0`; `NotInH` when `f` has an
    /// `x^τ` term.
    pub fn element_from_potential(&self, f: &TruncPoly) -> Result<HamElement> {
        if !f.coeff(self.ring.tau()).is_zero() {
            return Err(Error::NotInH);
        }
        let mut f = f.clone();
        f.set_coeff(0, Scalar::ZERO);
        Ok(HamElement { d: self.d_h(&f)?, f })
    }

    /// `{D_H(x^a) : 0 < a < τ}`, in monomial order.
    pub fn ham_basis(&self) -> Vec<HamElement> {
        let ring = &self.ring;
        (1..ring.tau())
            .map(|a| {
                let f = ring.monomial(a, Scalar::ONE);
                HamElement { d: self.d_h(&f).expect("same ring"), f }
            })
            .collect()
    }

    /// A uniformly random potential for `H_n`: no constant and no `x^τ` term.
    pub fn random_potential<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> TruncPoly {
        let mut f = self.ring.random_in_m(rng);
        f.set_coeff(self.ring.tau(), Scalar::ZERO);
        f
    }

    pub fn random_element<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> HamElement {
        let f = self.random_potential(rng);
        HamElement { d: self.d_h(&f).expect("same ring"), f }
    }

    /// `∏_{j ∈ vars} x_j^{p-1}` times `x_lead`.
    fn lead_times_top(&self, lead: usize, vars: impl Iterator<Item = usize>) -> TruncPoly {
        let mut e = vec![0; self.n()];
        e[lead] = 1;
        for j in vars {
            e[j] = self.p() - 1;
        }
        self.ring.monomial(self.ring.index(&e).expect("exponents below p"), Scalar::ONE)
    }

    /// `u = Σ_i (-1)^{i-1} x_i ∏_{j<i} x_{r+j}^{p-1}` and
    /// `v = Σ_i (-1)^{i-1} x_{r+i} ∏_{j<i} x_j^{p-1}`.
    pub fn special_u_v(&self) -> (TruncPoly, TruncPoly) {
        let r = self.r;
        let field = self.field();
        let mut u = self.ring.zero();
        let mut v = self.ring.zero();
        for i in 0..r {
            let sign = if i % 2 == 0 { Scalar::ONE } else { field.neg(Scalar::ONE) };
            u.axpy(sign, &self.lead_times_top(i, r..r + i));
            v.axpy(sign, &self.lead_times_top(r + i, 0..i));
        }
        (u, v)
    }

    /// `s_i = x_i x_{r+i}` for `i = 1..r`.
    pub fn s_generators(&self) -> Vec<TruncPoly> {
        (0..self.r).map(|i| &self.ring.var(i) * &self.ring.var(i + self.r)).collect()
    }

    /// `E = ⟨D_H(u), D_H(v), D_H(x_i x_{r+i})⟩`, as potentials in that order.
    pub fn subspace_e(&self) -> Vec<HamElement> {
        let (u, v) = self.special_u_v();
        std::iter::once(u)
            .chain(std::iter::once(v))
            .chain(self.s_generators())
            .map(|f| self.element_from_potential(&f).expect("no x^τ term"))
            .collect()
    }

    /// Membership in `S_0 = {λ + u + (-1)^{r-1} h x_{r+1}^{p-1} ... x_{2r}^{p-1}}`
    /// with `h ∈ 𝔪 ∩ k[x_1..x_r]`.
    pub fn in_s0(&self, f: &TruncPoly) -> bool {
        let ring = &self.ring;
        let (u, _) = self.special_u_v();
        let mut rest = f - &u;
        rest.set_coeff(0, Scalar::ZERO);
        let r = self.r;
        (0..ring.dim()).filter(|&a| !rest.coeff(a).is_zero()).all(|a| {
            (r..2 * r).all(|j| ring.exp(a, j) == self.p() - 1) && (0..r).any(|j| ring.exp(a, j) > 0)
        })
    }

    /// Generators `(1 + x_{r+i}) ∂_{r+i} - x_i ∂_i` of `T_H`.
    pub fn torus_th(&self) -> Vec<Derivation> {
        let ring = &self.ring;
        (0..self.r)
            .map(|i| {
                let mut coeffs = vec![ring.zero(); self.n()];
                coeffs[i] = -&ring.var(i);
                coeffs[i + self.r] = &ring.one() + &ring.var(i + self.r);
                Derivation::new(coeffs).expect("n coefficients")
            })
            .collect()
    }

    /// Dimension of the ideal generated by `D_H(f)`: the span is closed under
    /// Poisson brackets with the basis potentials until it stabilizes.
    pub fn ideal_dimension(&self, f: &TruncPoly) -> usize {
        let ring = &self.ring;
        let field = ring.field();
        let normalize = |g: &TruncPoly| {
            let mut g = g.clone();
            g.set_coeff(0, Scalar::ZERO);
            g
        };
        let start = normalize(f);
        if start.is_zero() {
            return 0;
        }
        let basis: Vec<TruncPoly> = (1..ring.tau()).map(|a| ring.monomial(a, Scalar::ONE)).collect();
        let mut span = Span::new(ring.dim());
        span.insert(field, start.coeffs());
        let mut queue = vec![start];
        while let Some(g) = queue.pop() {
            let dg = self.d_h(&g).expect("same ring");
            for b in &basis {
                let h = normalize(&dg.apply(b).expect("same ring"));
                if !h.is_zero() && matches!(span.insert(field, h.coeffs()), Insert::Independent) {
                    queue.push(h);
                }
            }
        }
        span.dim()
    }

    /// Ideal dimensions for `samples` random nonzero elements of `H_n`.
    pub fn simplicity_probe(&self, samples: usize, seed: u64) -> Vec<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples)
            .map(|_| loop {
                let f = self.random_potential(&mut rng);
                if !f.is_zero() {
                    break self.ideal_dimension(&f);
                }
            })
            .collect()
    }
}

/// Generators `(1 + x_i) ∂_i` of `T_W ⊆ W_r`.
pub fn torus_tw(ring: &RingRef) -> Vec<Derivation> {
    (0..ring.n())
        .map(|i| {
            let mut coeffs = vec![ring.zero(); ring.n()];
            coeffs[i] = &ring.one() + &ring.var(i);
            Derivation::new(coeffs).expect("n coefficients")
        })
        .collect()
}

#[cfg(test)]
mod tests;
