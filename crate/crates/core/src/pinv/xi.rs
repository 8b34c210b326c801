use super::{phi_solve, Variant};
use crate::error::{Error, Result};
use crate::gf::{Insert, Scalar, Span, UniPoly};
use crate::ham::HamCtx;
use crate::wn::Derivation;

/// How `ξ` is evaluated. All routes return identical values on `H_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XiRoute {
    /// `ξ_i = (ψ_{r+i})^{1/p^r}` from the characteristic polynomial.
    CharPoly,
    /// From the first linear relation among `D, D^{[p]}, D^{[p^2]}, ...`.
    PowerRelation,
    /// `ξ_i = φ̃_{p^r - p^i}(δ(D))`, falling back to the power relation when
    /// the system leaves that coordinate free.
    PhiTilde,
}

/// `(ξ_0, ..., ξ_{r-1})` of `D ∈ H_n` by the characteristic-polynomial route.
pub fn xi(h: &HamCtx, d: &Derivation) -> Result<Vec<Scalar>> {
    xi_with(h, d, XiRoute::CharPoly)
}

pub fn xi_with(h: &HamCtx, d: &Derivation, route: XiRoute) -> Result<Vec<Scalar>> {
    let el = h.element(d)?;
    match route {
        XiRoute::CharPoly => xi_char_poly(h, d),
        XiRoute::PowerRelation => Ok(xi_power_relation(h, d)),
        XiRoute::PhiTilde => {
            let p = h.p();
            let pr = p.pow(h.r() as u32);
            let sol = phi_solve(h, &el.f, Variant::Tilde)?;
            let picked: Option<Vec<Scalar>> = (0..h.r()).map(|i| sol.get(pr - p.pow(i as u32))).collect();
            Ok(picked.unwrap_or_else(|| xi_power_relation(h, d)))
        }
    }
}

fn xi_char_poly(h: &HamCtx, d: &Derivation) -> Result<Vec<Scalar>> {
    let psi = d.psi()?;
    let field = h.field();
    let r = h.r();
    Ok((0..r).map(|i| field.proot(psi[r + i], r as u32)).collect())
}

/// First relation `P_k = -Σ_{i<k} c_i P_i` among `P_i = D^{[p^i]}`.
fn power_relation(d: &Derivation, max_steps: usize) -> Option<Vec<Scalar>> {
    let field = d.field();
    let mut span = Span::new(d.ring().n() * d.ring().dim());
    let mut cur = d.clone();
    for step in 0..=max_steps {
        if step > 0 {
            cur = cur.p_power();
        }
        if let Insert::Dependent(coeffs) = span.insert(field, &cur.to_vec()) {
            return Some(coeffs.into_iter().map(|c| field.neg(c)).collect());
        }
    }
    None
}

/// For semisimple `D` the minimal `p`-polynomial `t^{p^k} + Σ c_i t^{p^i}` is
/// separable and `χ_D` is its `p^{n-k}`-th power, so
/// `ψ_{n-k+i} = c_i^{p^{n-k}}` and `ξ_j = c_{j-r+k}^{p^{r-k}}`. Returns `None`
/// when the relation does not have that shape.
fn xi_from_semisimple(h: &HamCtx, d: &Derivation) -> Option<Vec<Scalar>> {
    let field = h.field();
    let r = h.r();
    let c = power_relation(d, h.n())?;
    let k = c.len();
    if k == 0 || c[0].is_zero() || k > r {
        return None;
    }
    Some(
        (0..r)
            .map(|j| if j + k >= r { field.frobenius_iter(c[j + k - r], (r - k) as u32) } else { Scalar::ZERO })
            .collect(),
    )
}

/// `ξ` from `p`-power relations. Non-semisimple elements are handled through
/// `E = D^{[p^n]}`, which is semisimple with `ξ(E) = ξ(D)^{p^n}`.
pub(crate) fn xi_power_relation(h: &HamCtx, d: &Derivation) -> Vec<Scalar> {
    let field = h.field();
    let r = h.r();
    if d.is_zero() {
        return vec![Scalar::ZERO; r];
    }
    if let Some(v) = xi_from_semisimple(h, d) {
        return v;
    }
    let n = h.n();
    let e = d.p_power_iter(n);
    if e.is_zero() {
        return vec![Scalar::ZERO; r];
    }
    match xi_from_semisimple(h, &e) {
        Some(v) => v.into_iter().map(|z| field.proot(z, n as u32)).collect(),
        None => xi_char_poly(h, d).expect("derivation characteristic polynomials have p-power shape"),
    }
}

/// All `ξ_i` vanish.
pub fn is_nilpotent_xi(h: &HamCtx, d: &Derivation) -> Result<bool> {
    Ok(xi_with(h, d, XiRoute::PowerRelation)?.iter().all(|z| z.is_zero()))
}

/// `(dξ_i)_x(y)` for every `i`: the `t`-coefficient of `ξ_i(x + t y)`,
/// interpolated from `p^r` points of the field.
pub fn directional_derivatives(h: &HamCtx, x: &Derivation, y: &Derivation, route: XiRoute) -> Result<Vec<Scalar>> {
    let field = h.field();
    let r = h.r();
    let npts = h.p().pow(r as u32);
    if (field.q() as usize) < npts {
        return Err(Error::FieldTooSmall { q: field.q() as u64, needed: npts as u64 });
    }
    let ts: Vec<Scalar> = field.elements().take(npts).collect();
    let mut values = vec![Vec::with_capacity(npts); r];
    for &t in &ts {
        let mut pt = x.clone();
        pt.axpy(t, y);
        for (i, v) in xi_with(h, &pt, route)?.into_iter().enumerate() {
            values[i].push(v);
        }
    }
    Ok(values.iter().map(|v| UniPoly::interpolate(field, &ts, v).coeff(1)).collect())
}

/// `(dξ_i)_x(y)` using `p^r - p^i + 1` evaluation points.
pub fn directional_derivative(h: &HamCtx, i: usize, x: &Derivation, y: &Derivation) -> Result<Scalar> {
    let field = h.field();
    let p = h.p();
    let pr = p.pow(h.r() as u32);
    let npts = pr - p.pow(i as u32) + 1;
    if (field.q() as usize) < npts {
        return Err(Error::FieldTooSmall { q: field.q() as u64, needed: npts as u64 });
    }
    let ts: Vec<Scalar> = field.elements().take(npts).collect();
    let vals = ts
        .iter()
        .map(|&t| {
            let mut pt = x.clone();
            pt.axpy(t, y);
            Ok(xi_with(h, &pt, XiRoute::PowerRelation)?[i])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(UniPoly::interpolate(field, &ts, &vals).coeff(1))
}
