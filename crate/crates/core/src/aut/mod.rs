//! Automorphisms of `B_n`, the adjoint action on `W_n`, the groups `G_B`
//! and `G_H`, the lift `μ -> μ̃` and the embedding `β = D_H ∘ θ_r`.

use rand::Rng;

use crate::bn::{form_apply_algmap, RingRef, TruncPoly};
use crate::error::{Error, Result};
use crate::gf::{Matrix, Scalar};
use crate::ham::HamCtx;
use crate::pinv::xi;
use crate::wn::Derivation;

/// An automorphism `x_i -> images[i]` of `B_n`, with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraMap {
    ring: RingRef,
    images: Vec<TruncPoly>,
    inverse: Vec<TruncPoly>,
}

/// Which conjugation the displayed `Ad` formula realizes on operators, when
/// `μ` acts on `B_n` by substitution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conjugation {
    /// `μ ∘ D ∘ μ^{-1}`
    MuDMuInv,
    /// `μ^{-1} ∘ D ∘ μ`
    MuInvDMu,
}

/// Whether the `Ad` identities for `G_H` hold with the displayed formula for
/// `μ` itself or for `μ^{-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdOrientation {
    Literal,
    Inverse,
}

fn linear_matrix(images: &[TruncPoly]) -> Result<Matrix> {
    Matrix::from_rows(images.iter().map(|g| g.linear_part()).collect())
}

impl AlgebraMap {
    /// Validates the images and computes the inverse by successive
    /// correction `g <- g + L^{-1}(x - μ(x)∘g)`, each step gaining one
    /// filtration degree.
    pub fn new(ring: &RingRef, images: Vec<TruncPoly>) -> Result<Self> {
        let n = ring.n();
        if images.len() != n {
            return Err(Error::DimensionMismatch(format!("{} images for {n} variables", images.len())));
        }
        if images.iter().any(|g| **g.ring() != **ring) {
            return Err(Error::ContextMismatch);
        }
        if let Some(i) = images.iter().position(|g| !g.kappa().is_zero()) {
            return Err(Error::NonNilpotentImage(i + 1));
        }
        let field = ring.field();
        let linv = linear_matrix(&images)?.inverse(field).ok_or(Error::NotInvertible)?;
        let vars: Vec<TruncPoly> = (0..n).map(|i| ring.var(i)).collect();
        let combine = |v: &[TruncPoly]| -> Vec<TruncPoly> {
            (0..n)
                .map(|j| {
                    let mut acc = ring.zero();
                    for (i, vi) in v.iter().enumerate() {
                        acc.axpy(linv.get(j, i), vi);
                    }
                    acc
                })
                .collect()
        };
        let mut inv = combine(&vars);
        let max_steps = n * (ring.p() - 1) + 1;
        for _ in 0..=max_steps {
            let residual: Vec<TruncPoly> = images
                .iter()
                .zip(&vars)
                .map(|(g, x)| Ok(x - &g.subst(&inv)?))
                .collect::<Result<_>>()?;
            if residual.iter().all(|e| e.is_zero()) {
                break;
            }
            for (g, c) in inv.iter_mut().zip(combine(&residual)) {
                *g = &*g + &c;
            }
        }
        for (g, x) in inv.iter().zip(&vars) {
            if g.subst(&images)? != *x {
                return Err(Error::NotInvertible);
            }
        }
        Ok(Self { ring: ring.clone(), images, inverse: inv })
    }

    pub fn identity(ring: &RingRef) -> Self {
        let images: Vec<TruncPoly> = (0..ring.n()).map(|i| ring.var(i)).collect();
        Self { ring: ring.clone(), inverse: images.clone(), images }
    }

    /// `x_i -> c_i x_i`.
    pub fn diagonal(ring: &RingRef, c: &[Scalar]) -> Result<Self> {
        Self::new(ring, c.iter().enumerate().map(|(i, &ci)| ring.var(i).scale(ci)).collect())
    }

    /// A random automorphism: invertible linear part plus random terms in
    /// `𝔪^2`.
    pub fn random<R: Rng + ?Sized>(ring: &RingRef, rng: &mut R) -> Self {
        let n = ring.n();
        loop {
            let images: Vec<TruncPoly> = (0..n)
                .map(|_| {
                    let mut g = ring.random_in_m(rng);
                    for j in 0..n {
                        g.set_coeff(ring.var_index(j), Scalar::ZERO);
                    }
                    for j in 0..n {
                        g.set_coeff(ring.var_index(j), ring.field().random(rng));
                    }
                    g
                })
                .collect();
            if let Ok(mu) = Self::new(ring, images) {
                return mu;
            }
        }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn images(&self) -> &[TruncPoly] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[TruncPoly] {
        &self.inverse
    }

    pub fn inverse(&self) -> AlgebraMap {
        Self { ring: self.ring.clone(), images: self.inverse.clone(), inverse: self.images.clone() }
    }

    /// `μ(f) = f(μ(x_1), ..., μ(x_n))`.
    pub fn apply(&self, f: &TruncPoly) -> Result<TruncPoly> {
        f.subst(&self.images)
    }

    pub fn apply_inverse(&self, f: &TruncPoly) -> Result<TruncPoly> {
        f.subst(&self.inverse)
    }

    /// `self ∘ other`, i.e. `x_i -> self(other(x_i))`.
    pub fn compose(&self, other: &AlgebraMap) -> Result<AlgebraMap> {
        if *self.ring != *other.ring {
            return Err(Error::ContextMismatch);
        }
        let images = other.images.iter().map(|g| self.apply(g)).collect::<Result<_>>()?;
        let inverse = self.inverse.iter().map(|g| other.apply_inverse(g)).collect::<Result<_>>()?;
        Ok(Self { ring: self.ring.clone(), images, inverse })
    }

    /// Matrix of `f -> μ(f)` on the monomial basis.
    pub fn operator_matrix(&self) -> Matrix {
        let ring = &self.ring;
        let cols: Vec<Vec<Scalar>> = (0..ring.dim())
            .map(|a| self.apply(&ring.monomial(a, Scalar::ONE)).expect("same ring").into_coeffs())
            .collect();
        Matrix::from_columns(ring.dim(), &cols).expect("square")
    }

    /// `det(∂μ(x_j)/∂x_i) mod 𝔪`.
    pub fn jacobian_constant(&self) -> Scalar {
        let l = linear_matrix(&self.images).expect("n x n");
        l.det(self.ring.field()).expect("square")
    }
}

/// The displayed formula `Σ_k (Σ_i f_i ∂μ(x_k)/∂x_i)(μ^{-1}(x)) ∂_k`, i.e.
/// `x_k -> μ^{-1}(D(μ(x_k)))`.
pub fn ad_action(mu: &AlgebraMap, d: &Derivation) -> Result<Derivation> {
    if **d.ring() != *mu.ring {
        return Err(Error::ContextMismatch);
    }
    let coeffs = mu.images.iter().map(|g| mu.apply_inverse(&d.apply(g)?)).collect::<Result<_>>()?;
    Derivation::new(coeffs)
}

/// `Ad` with the given orientation: the displayed formula applied to `μ` or
/// to `μ^{-1}`.
pub fn ad_oriented(mu: &AlgebraMap, d: &Derivation, orientation: AdOrientation) -> Result<Derivation> {
    match orientation {
        AdOrientation::Literal => ad_action(mu, d),
        AdOrientation::Inverse => ad_action(&mu.inverse(), d),
    }
}

/// Compares the displayed formula with both conjugations on operator matrices.
pub fn detect_conjugation(mu: &AlgebraMap, d: &Derivation) -> Result<Option<Conjugation>> {
    let field = mu.ring.field();
    let ad = ad_action(mu, d)?.operator_matrix();
    let s = mu.operator_matrix();
    let sinv = mu.inverse().operator_matrix();
    let m = d.operator_matrix();
    if ad == s.mul(field, &m)?.mul(field, &sinv)? {
        Ok(Some(Conjugation::MuDMuInv))
    } else if ad == sinv.mul(field, &m)?.mul(field, &s)? {
        Ok(Some(Conjugation::MuInvDMu))
    } else {
        Ok(None)
    }
}

/// `α` with `μ(ω_H) = α ω_H`, or `NotGH`.
pub fn gh_test(h: &HamCtx, mu: &AlgebraMap) -> Result<Scalar> {
    if *mu.ring != **h.ring() {
        return Err(Error::ContextMismatch);
    }
    let w = form_apply_algmap(&mu.images, h.omega())?;
    w.scalar_ratio(h.omega()).ok_or(Error::NotGH)
}

/// `μ(ω_H) = ω_H`.
pub fn gb_test(h: &HamCtx, mu: &AlgebraMap) -> Result<bool> {
    match gh_test(h, mu) {
        Ok(a) => Ok(a == Scalar::ONE),
        Err(Error::NotGH) => Ok(false),
        Err(e) => Err(e),
    }
}

/// `α` from `[μ(x_i), μ(x_j)] = α σ(i) δ_{i'j}` over all generator pairs, then
/// `[μ(f), μ(g)] = α μ([f, g])` on `samples` random pairs.
pub fn bracket_characterization<R: Rng + ?Sized>(
    h: &HamCtx,
    mu: &AlgebraMap,
    samples: usize,
    rng: &mut R,
) -> Result<Scalar> {
    let field = h.field();
    let ring = h.ring();
    let (n, r) = (h.n(), h.r());
    let mut alpha: Option<Scalar> = None;
    for i in 0..n {
        for j in 0..n {
            let b = h.poisson(&mu.images[i], &mu.images[j])?;
            let partner = if i < r { i + r } else { i - r };
            let expected_sign = if j != partner {
                None
            } else if i < r {
                Some(Scalar::ONE)
            } else {
                Some(field.neg(Scalar::ONE))
            };
            match expected_sign {
                None => {
                    if !b.is_zero() {
                        return Err(Error::NotGH);
                    }
                }
                Some(sign) => {
                    let c = b.kappa();
                    if b != ring.constant(c) {
                        return Err(Error::NotGH);
                    }
                    let a = field.mul(sign, c);
                    if alpha.is_some_and(|x| x != a) {
                        return Err(Error::NotGH);
                    }
                    alpha = Some(a);
                }
            }
        }
    }
    let alpha = alpha.filter(|a| !a.is_zero()).ok_or(Error::NotGH)?;
    for _ in 0..samples {
        let f = ring.random(rng);
        let g = ring.random(rng);
        let lhs = h.poisson(&mu.apply(&f)?, &mu.apply(&g)?)?;
        let rhs = mu.apply(&h.poisson(&f, &g)?)?.scale(alpha);
        if lhs != rhs {
            return Err(Error::NotGH);
        }
    }
    Ok(alpha)
}

/// `Ad_μ(D_H(f)) = D_H(α^{-1} μ(f))` for `μ ∈ G_H` with multiplier `α`.
pub fn adh_formula_check(
    h: &HamCtx,
    mu: &AlgebraMap,
    alpha: Scalar,
    f: &TruncPoly,
    orientation: AdOrientation,
) -> Result<bool> {
    let field = h.field();
    let lhs = ad_oriented(mu, &h.d_h(f)?, orientation)?;
    let ainv = field.inv(alpha).ok_or(Error::InvalidArgument("zero multiplier".into()))?;
    let rhs = h.d_h(&mu.apply(f)?.scale(ainv))?;
    Ok(lhs == rhs)
}

/// Determines the orientation under which the `Ad` identity for `G_H`
/// holds, from a fixed non-linear element of `G_H`. `None` if neither does.
pub fn detect_orientation(h: &HamCtx) -> Result<Option<AdOrientation>> {
    let field = h.field();
    let br = h.base_ring().clone();
    // μ(x_1) = 2 x_1 + x_1^2 on B_r, extended by the identity.
    let mut images: Vec<TruncPoly> = (0..h.r()).map(|i| br.var(i)).collect();
    images[0] = &br.var(0).scale(field.from_int(2)) + &br.var(0).pow(2);
    let mu = AlgebraMap::new(&br, images)?;
    let (lift, alpha) = lift_mu(h, &mu)?;
    let ring = h.ring();
    let f = &(&ring.var(0) * &ring.var(h.r())) + &ring.var(h.r()).pow(2);
    let f = &f + &ring.var(0).pow(3);
    let literal = adh_formula_check(h, &lift, alpha, &f, AdOrientation::Literal)?;
    let inverse = adh_formula_check(h, &lift, alpha, &f, AdOrientation::Inverse)?;
    Ok(match (literal, inverse) {
        (true, _) => Some(AdOrientation::Literal),
        (false, true) => Some(AdOrientation::Inverse),
        _ => None,
    })
}

/// `g(x_1, ..., x_r) -> g(x_{r+1}, ..., x_{2r})` from `B_r` into `B_{2r}`.
pub fn shift_up(h: &HamCtx, g: &TruncPoly) -> Result<TruncPoly> {
    let ring = h.ring();
    if g.ring().n() != h.r() || g.ring().field() != ring.field() {
        return Err(Error::ContextMismatch);
    }
    let stride = ring.var_index(h.r());
    let mut out = ring.zero();
    for (a, &c) in g.coeffs().iter().enumerate() {
        if !c.is_zero() {
            out.set_coeff(a * stride, c);
        }
    }
    Ok(out)
}

/// The lift `μ̃` of `μ ∈ Aut B_r` to `B_{2r}` and its multiplier `α`:
/// `μ̃(x_{r+i}) = μ^{-1}(x_i)(x_{r+1}, ..., x_{2r})` and
/// `μ̃(x_i) = α Σ_k x_k (∂μ(x_k)/∂x_i)(μ̃(x_{r+1}), ..., μ̃(x_{2r}))`.
pub fn lift_mu(h: &HamCtx, mu: &AlgebraMap) -> Result<(AlgebraMap, Scalar)> {
    let r = h.r();
    if mu.ring.n() != r || mu.ring.field() != h.field() {
        return Err(Error::ContextMismatch);
    }
    let ring = h.ring();
    let alpha = mu.jacobian_constant();
    if alpha.is_zero() {
        return Err(Error::NotInvertible);
    }
    let upper: Vec<TruncPoly> = mu.inverse.iter().map(|g| shift_up(h, g)).collect::<Result<_>>()?;
    let mut images = Vec::with_capacity(2 * r);
    for i in 0..r {
        let mut acc = ring.zero();
        for (k, mk) in mu.images.iter().enumerate() {
            let dk = mk.partial(i)?.subst(&upper)?;
            acc = &acc + &(&ring.var(k) * &dk);
        }
        images.push(acc.scale(alpha));
    }
    images.extend(upper);
    Ok((AlgebraMap::new(ring, images)?, alpha))
}

/// `θ_r(Σ f_i ∂_i) = Σ x_i f_i(x_{r+1}, ..., x_{2r})`.
pub fn theta_r(h: &HamCtx, d: &Derivation) -> Result<TruncPoly> {
    let ring = h.ring();
    if d.ring().n() != h.r() {
        return Err(Error::ContextMismatch);
    }
    let mut acc = ring.zero();
    for (i, fi) in d.coeffs().iter().enumerate() {
        acc = &acc + &(&ring.var(i) * &shift_up(h, fi)?);
    }
    Ok(acc)
}

/// `β = D_H ∘ θ_r : W_r -> H_n`.
pub fn beta(h: &HamCtx, d: &Derivation) -> Result<Derivation> {
    h.d_h(&theta_r(h, d)?)
}

/// `β(Ad_μ(D)) = Ad_μ̃(β(D))`. The orientation applies to `Ad_μ̃` on `H_n`;
/// `Ad_μ` on `W_r` is the displayed formula. Since `μ̃` acts on
/// `x_{r+1}, ..., x_{2r}` through `μ^{-1}`, the lift reverses composition and
/// the two sides need not share an orientation.
pub fn diagram_check(h: &HamCtx, mu: &AlgebraMap, d: &Derivation, orientation: AdOrientation) -> Result<bool> {
    let (lift, _) = lift_mu(h, mu)?;
    let lhs = beta(h, &ad_action(mu, d)?)?;
    let rhs = ad_oriented(&lift, &beta(h, d)?, orientation)?;
    Ok(lhs == rhs)
}

/// `ξ(β(D))`.
pub fn pullback_eval(h: &HamCtx, d: &Derivation) -> Result<Vec<Scalar>> {
    xi(h, &beta(h, d)?)
}

/// Base change `c -> g c` on coordinates in the torus generator basis.
pub fn glr_act(h: &HamCtx, g: &Matrix, c: &[Scalar]) -> Result<Vec<Scalar>> {
    let field = h.field();
    let r = h.r();
    if g.rows() != r || g.cols() != r || c.len() != r {
        return Err(Error::DimensionMismatch(format!("expected {r}x{r} matrix and {r} coordinates")));
    }
    if (0..r).any(|i| (0..r).any(|j| !field.in_prime_subfield(g.get(i, j)))) {
        return Err(Error::InvalidArgument("matrix entries must lie in F_p".into()));
    }
    if g.inverse(field).is_none() {
        return Err(Error::NotInvertible);
    }
    g.mul_vec(field, c)
}

/// A random element of `G_H` with its multiplier: the lift of a random
/// automorphism of `B_r`, composed with a random scaling of `x_1..x_r`.
pub fn random_gh<R: Rng + ?Sized>(h: &HamCtx, rng: &mut R) -> Result<(AlgebraMap, Scalar)> {
    let field = h.field();
    let br = h.base_ring().clone();
    let mu = AlgebraMap::random(&br, rng);
    let (lift, alpha) = lift_mu(h, &mu)?;
    let a = field.random_nonzero(rng);
    let mut c = vec![a; h.r()];
    c.extend(std::iter::repeat_n(Scalar::ONE, h.r()));
    let scaling = AlgebraMap::diagonal(h.ring(), &c)?;
    Ok((scaling.compose(&lift)?, field.mul(a, alpha)))
}

#[cfg(test)]
mod tests;
