use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldRef, Scalar};

/// Largest supported `p^n`.
const MAX_DIM: usize = 1 << 16;

/// The truncated polynomial ring `B_n = k[x_1..x_n]/(x_i^p)`.
///
/// Monomials are indexed by the mixed-radix integer `Σ a_i p^(i-1)`, so `x_1`
/// is the least significant digit.
pub struct Ring {
    field: FieldRef,
    n: usize,
    p: usize,
    dim: usize,
    /// `digits[idx * n + i]` is the exponent of `x_{i+1}` in monomial `idx`.
    digits: Vec<u8>,
    degree: Vec<u16>,
    /// For each `a`, the indices `b` with `a_i + b_i < p` for all `i`.
    compat_off: Vec<u32>,
    compat: Vec<u32>,
}

pub type RingRef = Arc<Ring>;

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B_{}(F_{}^{})", self.n, self.field.p(), self.field.m())
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && *self.field == *other.field
    }
}

impl Eq for Ring {}

impl Ring {
    pub fn new(field: FieldRef, n: usize) -> Result<RingRef> {
        let p = field.p() as usize;
        let dim = p
            .checked_pow(n as u32)
            .filter(|&d| d <= MAX_DIM)
            .ok_or_else(|| Error::InvalidArgument(format!("B_{n} over characteristic {p} is too large")))?;
        let mut digits = vec![0u8; dim * n];
        let mut degree = vec![0u16; dim];
        for idx in 0..dim {
            let mut rest = idx;
            for i in 0..n {
                let d = rest % p;
                digits[idx * n + i] = d as u8;
                degree[idx] += d as u16;
                rest /= p;
            }
        }
        let mut compat_off = Vec::with_capacity(dim + 1);
        let mut compat = Vec::new();
        compat_off.push(0);
        for a in 0..dim {
            let da = &digits[a * n..(a + 1) * n];
            for b in 0..dim {
                if digits[b * n..(b + 1) * n].iter().zip(da).all(|(&x, &y)| ((x + y) as usize) < p) {
                    compat.push(b as u32);
                }
            }
            compat_off.push(compat.len() as u32);
        }
        Ok(Arc::new(Self { field, n, p, dim, digits, degree, compat_off, compat }))
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// `p^n`, the number of monomials.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Exponent vector of monomial `idx`.
    pub fn exps(&self, idx: usize) -> &[u8] {
        &self.digits[idx * self.n..(idx + 1) * self.n]
    }

    #[inline]
    pub fn exp(&self, idx: usize, i: usize) -> usize {
        self.digits[idx * self.n + i] as usize
    }

    pub fn total_degree(&self, idx: usize) -> usize {
        self.degree[idx] as usize
    }

    /// Index of `x^exps`, or `None` when some exponent is at least `p`.
    pub fn index(&self, exps: &[usize]) -> Option<usize> {
        assert_eq!(exps.len(), self.n);
        let mut idx = 0;
        for &e in exps.iter().rev() {
            if e >= self.p {
                return None;
            }
            idx = idx * self.p + e;
        }
        Some(idx)
    }

    /// Index of `x_{i+1}` (zero-based `i`).
    pub fn var_index(&self, i: usize) -> usize {
        self.p.pow(i as u32)
    }

    /// Index of `x^τ = (x_1 ... x_n)^(p-1)`.
    pub fn tau(&self) -> usize {
        self.dim - 1
    }

    #[inline]
    pub(crate) fn compatible(&self, a: usize) -> &[u32] {
        &self.compat[self.compat_off[a] as usize..self.compat_off[a + 1] as usize]
    }

    pub fn zero(self: &Arc<Self>) -> TruncPoly {
        TruncPoly { ring: self.clone(), coeffs: vec![Scalar::ZERO; self.dim] }
    }

    pub fn constant(self: &Arc<Self>, c: Scalar) -> TruncPoly {
        let mut f = self.zero();
        f.coeffs[0] = c;
        f
    }

    pub fn one(self: &Arc<Self>) -> TruncPoly {
        self.constant(Scalar::ONE)
    }

    /// The generator `x_{i+1}` (zero-based `i`).
    pub fn var(self: &Arc<Self>, i: usize) -> TruncPoly {
        self.monomial(self.var_index(i), Scalar::ONE)
    }

    pub fn monomial(self: &Arc<Self>, idx: usize, c: Scalar) -> TruncPoly {
        let mut f = self.zero();
        f.coeffs[idx] = c;
        f
    }

    pub fn from_coeffs(self: &Arc<Self>, coeffs: Vec<Scalar>) -> Result<TruncPoly> {
        if coeffs.len() != self.dim {
            return Err(Error::DimensionMismatch(format!("{} coefficients for dimension {}", coeffs.len(), self.dim)));
        }
        Ok(TruncPoly { ring: self.clone(), coeffs })
    }

    pub fn random<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R) -> TruncPoly {
        let coeffs = (0..self.dim).map(|_| self.field.random(rng)).collect();
        TruncPoly { ring: self.clone(), coeffs }
    }

    /// A uniformly random element of the maximal ideal.
    pub fn random_in_m<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R) -> TruncPoly {
        let mut f = self.random(rng);
        f.coeffs[0] = Scalar::ZERO;
        f
    }
}

/// An element of `B_n`, stored densely.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncPoly {
    ring: RingRef,
    coeffs: Vec<Scalar>,
}

impl fmt::Debug for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

impl fmt::Display for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

impl TruncPoly {
    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        &self.ring.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Scalar] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.coeffs
    }

    pub fn coeff(&self, idx: usize) -> Scalar {
        self.coeffs[idx]
    }

    pub fn set_coeff(&mut self, idx: usize, c: Scalar) {
        self.coeffs[idx] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check(&self, other: &TruncPoly) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &TruncPoly) -> Result<TruncPoly> {
        self.check(other)?;
        let f = self.field();
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(TruncPoly { ring: self.ring.clone(), coeffs })
    }

    pub fn try_mul(&self, other: &TruncPoly) -> Result<TruncPoly> {
        self.check(other)?;
        let mut out = self.ring.zero();
        mul_into(&self.ring, &mut out.coeffs, &self.coeffs, &other.coeffs);
        Ok(out)
    }

    pub fn scale(&self, c: Scalar) -> TruncPoly {
        let f = self.field();
        TruncPoly { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect() }
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: Scalar, other: &TruncPoly) {
        self.check(other).expect("operands share a ring");
        self.ring.field.axpy(&mut self.coeffs, c, &other.coeffs);
    }

    /// `self += c * x^shift * other`.
    pub fn add_shifted(&mut self, c: Scalar, shift: usize, other: &TruncPoly) {
        if c.is_zero() {
            return;
        }
        let f = &*self.ring.field;
        for &b in self.ring.compatible(shift) {
            let v = other.coeffs[b as usize];
            if !v.is_zero() {
                let t = shift + b as usize;
                self.coeffs[t] = f.add(self.coeffs[t], f.mul(c, v));
            }
        }
    }

    pub fn pow(&self, e: usize) -> TruncPoly {
        let mut acc = self.ring.one();
        for _ in 0..e {
            if acc.is_zero() {
                break;
            }
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative in `x_{i+1}` (zero-based `i`).
    pub fn partial(&self, i: usize) -> Result<TruncPoly> {
        let ring = &self.ring;
        if i >= ring.n {
            return Err(Error::IndexOutOfRange { index: i + 1, n: ring.n });
        }
        let f = &*ring.field;
        let step = ring.var_index(i);
        let mut out = ring.zero();
        for idx in 0..ring.dim {
            let a = ring.exp(idx, i);
            if a + 1 < ring.p {
                let c = self.coeffs[idx + step];
                if !c.is_zero() {
                    out.coeffs[idx] = f.mul(c, f.from_int(a as i64 + 1));
                }
            }
        }
        Ok(out)
    }

    /// The augmentation `κ`: the constant coefficient.
    pub fn kappa(&self) -> Scalar {
        self.coeffs[0]
    }

    /// Largest `k` with `f ∈ 𝔪^k`; `None` for the zero polynomial.
    pub fn m_order(&self) -> Option<usize> {
        (0..self.ring.dim).filter(|&i| !self.coeffs[i].is_zero()).map(|i| self.ring.total_degree(i)).min()
    }

    /// Class in `𝔪/𝔪^2`: the coefficients of `x_1, ..., x_n`.
    pub fn linear_part(&self) -> Vec<Scalar> {
        (0..self.ring.n).map(|i| self.coeffs[self.ring.var_index(i)]).collect()
    }

    /// Substitutes `x_i -> g[i]`. Every `g[i]` must lie in the maximal ideal
    /// of a common target ring.
    pub fn subst(&self, g: &[TruncPoly]) -> Result<TruncPoly> {
        let ring = &self.ring;
        if g.len() != ring.n {
            return Err(Error::DimensionMismatch(format!("{} substituents for {} variables", g.len(), ring.n)));
        }
        if let Some(i) = g.iter().position(|gi| !gi.kappa().is_zero()) {
            return Err(Error::NonNilpotentSubstituent(i + 1));
        }
        let Some(target) = g.first().map(|g0| g0.ring.clone()) else {
            // B_0 = k: the constant maps to a constant of the same ring.
            return Ok(self.clone());
        };
        for gi in &g[1..] {
            g[0].check(gi)?;
        }
        // powers[i][k] = g_i^k
        let powers: Vec<Vec<TruncPoly>> = g
            .iter()
            .map(|gi| {
                let mut v = vec![target.one()];
                for k in 1..ring.p {
                    let next = &v[k - 1] * gi;
                    v.push(next);
                }
                v
            })
            .collect();
        Ok(subst_rec(&self.coeffs, ring.n, ring.p, &powers, &target))
    }

    /// Canonical text form in the polynomial grammar.
    pub fn display(&self) -> String {
        let ring = &self.ring;
        let f = &*ring.field;
        let mut terms = Vec::new();
        for idx in 0..ring.dim {
            let c = self.coeffs[idx];
            if c.is_zero() {
                continue;
            }
            let mut factors = Vec::new();
            for i in 0..ring.n {
                match ring.exp(idx, i) {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    e => factors.push(format!("x{}^{e}", i + 1)),
                }
            }
            let term = if factors.is_empty() {
                f.format(c)
            } else if c == Scalar::ONE {
                factors.join("*")
            } else {
                format!("{}*{}", f.format(c), factors.join("*"))
            };
            terms.push(term);
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

/// Sums `coeffs` (an element of `B_vars`) with `x_i` replaced by the
/// precomputed powers of `g_i`, splitting off the last variable each step.
fn subst_rec(coeffs: &[Scalar], vars: usize, p: usize, powers: &[Vec<TruncPoly>], target: &RingRef) -> TruncPoly {
    let mut out = target.zero();
    if vars == 0 {
        out.coeffs[0] = coeffs[0];
        return out;
    }
    let block = coeffs.len() / p;
    let f = &*target.field;
    for k in 0..p {
        let part = &coeffs[k * block..(k + 1) * block];
        if part.iter().all(|c| c.is_zero()) || powers[vars - 1][k].is_zero() {
            continue;
        }
        if vars == 1 {
            f.axpy(&mut out.coeffs, part[0], &powers[0][k].coeffs);
        } else {
            let inner = subst_rec(part, vars - 1, p, powers, target);
            if k == 0 {
                f.axpy(&mut out.coeffs, Scalar::ONE, &inner.coeffs);
            } else {
                mul_into(target, &mut out.coeffs, &inner.coeffs, &powers[vars - 1][k].coeffs);
            }
        }
    }
    out
}

/// `out += a * b` in `B_n`.
pub(crate) fn mul_into(ring: &Ring, out: &mut [Scalar], a: &[Scalar], b: &[Scalar]) {
    let f = &*ring.field;
    if f.is_prime_field() {
        // Each output slot receives at most p^n products below p^2.
        let p = f.p() as u64;
        let mut acc: Vec<u64> = out.iter().map(|c| c.0 as u64).collect();
        for (ia, &ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            let ca = ca.0 as u64;
            for &ib in ring.compatible(ia) {
                let cb = b[ib as usize].0 as u64;
                acc[ia + ib as usize] += ca * cb;
            }
        }
        for (o, v) in out.iter_mut().zip(acc) {
            *o = Scalar((v % p) as u32);
        }
    } else {
        for (ia, &ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for &ib in ring.compatible(ia) {
                let cb = b[ib as usize];
                if !cb.is_zero() {
                    let t = ia + ib as usize;
                    out[t] = f.add(out[t], f.mul(ca, cb));
                }
            }
        }
    }
}

impl Add for &TruncPoly {
    type Output = TruncPoly;
    fn add(self, rhs: &TruncPoly) -> TruncPoly {
        self.try_add(rhs).expect("operands share a ring")
    }
}

impl Sub for &TruncPoly {
    type Output = TruncPoly;
    fn sub(self, rhs: &TruncPoly) -> TruncPoly {
        self.check(rhs).expect("operands share a ring");
        let f = self.field();
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(&a, &b)| f.sub(a, b)).collect();
        TruncPoly { ring: self.ring.clone(), coeffs }
    }
}

impl Neg for &TruncPoly {
    type Output = TruncPoly;
    fn neg(self) -> TruncPoly {
        let f = self.field();
        TruncPoly { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|&a| f.neg(a)).collect() }
    }
}

impl Mul for &TruncPoly {
    type Output = TruncPoly;
    fn mul(self, rhs: &TruncPoly) -> TruncPoly {
        self.try_mul(rhs).expect("operands share a ring")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ring(p: u64, m: u32, n: usize) -> RingRef {
        Ring::new(Field::new(p, m).unwrap(), n).unwrap()
    }

    fn poly(r: &RingRef, terms: &[(i64, &[usize])]) -> TruncPoly {
        let mut f = r.zero();
        for &(c, e) in terms {
            let idx = r.index(e).unwrap();
            let v = r.field().add(f.coeff(idx), r.field().from_int(c));
            f.set_coeff(idx, v);
        }
        f
    }

    #[test]
    fn truncation_kills_high_powers() {
        let r = ring(5, 1, 2);
        let x1 = r.var(0);
        assert!((&x1.pow(4) * &x1).is_zero());
    }

    #[test]
    fn geometric_series_inverts_one_plus_x() {
        let r = ring(5, 1, 2);
        let a = poly(&r, &[(1, &[0, 0]), (1, &[1, 0])]);
        let b = poly(&r, &[(1, &[0, 0]), (-1, &[1, 0]), (1, &[2, 0]), (-1, &[3, 0]), (1, &[4, 0])]);
        assert_eq!(&a * &b, r.one());
    }

    #[test]
    fn square_of_sum() {
        let r = ring(5, 1, 2);
        let s = &r.var(0) + &r.var(1);
        assert_eq!(&s * &s, poly(&r, &[(1, &[2, 0]), (2, &[1, 1]), (1, &[0, 2])]));
    }

    #[test]
    fn partial_examples() {
        let r = ring(5, 1, 2);
        assert_eq!(poly(&r, &[(1, &[2, 1])]).partial(0).unwrap(), poly(&r, &[(2, &[1, 1])]));
        assert!(r.var(0).partial(1).unwrap().is_zero());
        assert_eq!(poly(&r, &[(1, &[4, 0])]).partial(0).unwrap(), poly(&r, &[(4, &[3, 0])]));
        assert_eq!(r.var(0).partial(2), Err(Error::IndexOutOfRange { index: 3, n: 2 }));
    }

    #[test]
    fn kappa_order_and_linear_part() {
        let r = ring(5, 1, 2);
        let f = r.field().clone();
        assert_eq!(poly(&r, &[(3, &[0, 0]), (1, &[1, 1])]).kappa(), f.from_int(3));
        assert_eq!(r.var(0).kappa(), Scalar::ZERO);
        assert_eq!(r.zero().kappa(), Scalar::ZERO);
        assert_eq!(poly(&r, &[(1, &[1, 1])]).m_order(), Some(2));
        assert_eq!(poly(&r, &[(2, &[0, 0]), (1, &[1, 0])]).m_order(), Some(0));
        assert_eq!(r.zero().m_order(), None);
        let g = poly(&r, &[(3, &[0, 0]), (2, &[1, 0]), (1, &[1, 1])]);
        assert_eq!(g.linear_part(), vec![f.from_int(2), f.zero()]);
        assert_eq!(poly(&r, &[(1, &[2, 0])]).linear_part(), vec![f.zero(); 2]);
        assert_eq!((&r.var(0) - &r.var(1)).linear_part(), vec![f.one(), f.from_int(-1)]);
    }

    #[test]
    fn subst_examples() {
        let r = ring(5, 1, 2);
        let x1x2 = poly(&r, &[(1, &[1, 1])]);
        assert_eq!(x1x2.subst(&[r.var(1), r.var(0)]).unwrap(), x1x2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = r.random(&mut rng);
        assert_eq!(f.subst(&[r.var(0), r.var(1)]).unwrap(), f);
        let g1 = poly(&r, &[(1, &[1, 0]), (1, &[2, 0])]);
        let one_plus_x1 = poly(&r, &[(1, &[0, 0]), (1, &[1, 0])]);
        assert_eq!(
            one_plus_x1.subst(&[g1, r.var(1)]).unwrap(),
            poly(&r, &[(1, &[0, 0]), (1, &[1, 0]), (1, &[2, 0])])
        );
        assert_eq!(x1x2.subst(&[r.one(), r.var(1)]), Err(Error::NonNilpotentSubstituent(1)));
    }

    #[test]
    fn subst_into_other_ring() {
        let r1 = ring(5, 1, 1);
        let r2 = ring(5, 1, 2);
        let f = poly(&r1, &[(2, &[0]), (1, &[3])]);
        let g = f.subst(&[r2.var(1)]).unwrap();
        assert_eq!(g, poly(&r2, &[(2, &[0, 0]), (1, &[0, 3])]));
    }

    #[test]
    fn context_mismatch_is_reported() {
        let a = ring(5, 1, 2).var(0);
        let b = ring(7, 1, 2).var(0);
        assert_eq!(a.try_mul(&b), Err(Error::ContextMismatch));
    }

    #[test]
    fn display_is_canonical() {
        let r = ring(5, 1, 2);
        let f = poly(&r, &[(3, &[0, 0]), (1, &[1, 0]), (4, &[2, 1])]);
        assert_eq!(f.display(), "3 + x1 + 4*x1^2*x2");
        assert_eq!(r.zero().display(), "0");
    }

    /// Schoolbook product on exponent vectors, independent of the
    /// compatibility tables.
    fn naive_mul(a: &TruncPoly, b: &TruncPoly) -> TruncPoly {
        let r = a.ring().clone();
        let f = r.field().clone();
        let mut out = r.zero();
        for i in 0..r.dim() {
            for j in 0..r.dim() {
                let e: Vec<usize> = r.exps(i).iter().zip(r.exps(j)).map(|(&x, &y)| (x + y) as usize).collect();
                if let Some(t) = r.index(&e) {
                    let v = f.add(out.coeff(t), f.mul(a.coeff(i), b.coeff(j)));
                    out.set_coeff(t, v);
                }
            }
        }
        out
    }

    #[test]
    fn product_matches_naive_over_extension() {
        let r = ring(5, 2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let a = r.random(&mut rng);
            let b = r.random(&mut rng);
            assert_eq!(&a * &b, naive_mul(&a, &b));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn ring_axioms(seed in any::<u64>()) {
            let r = ring(5, 1, 2);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (a, b, c) = (r.random(&mut rng), r.random(&mut rng), r.random(&mut rng));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &r.one(), a.clone());
            prop_assert_eq!(&a * &b, naive_mul(&a, &b));
        }

        #[test]
        fn partials_commute_and_obey_leibniz(seed in any::<u64>(), i in 0usize..3, j in 0usize..3) {
            let r = ring(5, 1, 3);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (a, b) = (r.random(&mut rng), r.random(&mut rng));
            prop_assert_eq!(a.partial(i).unwrap().partial(j).unwrap(), a.partial(j).unwrap().partial(i).unwrap());
            let lhs = (&a * &b).partial(i).unwrap();
            let rhs = &(&a.partial(i).unwrap() * &b) + &(&a * &b.partial(i).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn kappa_is_multiplicative_and_order_superadditive(seed in any::<u64>()) {
            let r = ring(5, 1, 2);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut a = r.random(&mut rng);
            let mut b = r.random(&mut rng);
            // Push some mass into higher powers of the ideal.
            for idx in 0..r.dim() {
                if r.total_degree(idx) < 2 && rand::Rng::gen_bool(&mut rng, 0.5) {
                    a.set_coeff(idx, Scalar::ZERO);
                }
                if r.total_degree(idx) < 3 && rand::Rng::gen_bool(&mut rng, 0.5) {
                    b.set_coeff(idx, Scalar::ZERO);
                }
            }
            let f = r.field().clone();
            let ab = &a * &b;
            prop_assert_eq!(ab.kappa(), f.mul(a.kappa(), b.kappa()));
            if let (Some(oa), Some(ob)) = (a.m_order(), b.m_order()) {
                prop_assert!(ab.m_order().map_or(true, |o| o >= oa + ob));
            }
        }

        #[test]
        fn subst_composes(seed in any::<u64>()) {
            let r = ring(5, 1, 2);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = r.random(&mut rng);
            let g = [r.random_in_m(&mut rng), r.random_in_m(&mut rng)];
            let h = [r.random_in_m(&mut rng), r.random_in_m(&mut rng)];
            let g_of_h: Vec<TruncPoly> = g.iter().map(|gi| gi.subst(&h).unwrap()).collect();
            prop_assert_eq!(f.subst(&g).unwrap().subst(&h).unwrap(), f.subst(&g_of_h).unwrap());
        }
    }
}
