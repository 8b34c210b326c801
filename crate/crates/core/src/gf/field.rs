use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};

/// Largest supported field order. Codes, log tables and the optional
/// addition table are all sized from `q`.
const MAX_ORDER: u64 = 1 << 22;
/// Extension fields up to this order get a full addition table.
const ADD_TABLE_LIMIT: u64 = 1024;

/// An element of `F_{p^m}`, packed as the base-`p` integer whose digits are
/// the coordinates in the polynomial basis `1, t, ..., t^{m-1}` (constant
/// coordinate least significant). For `m = 1` the code is the residue itself.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct Scalar(pub(crate) u32);

impl Scalar {
    pub const ZERO: Scalar = Scalar(0);
    pub const ONE: Scalar = Scalar(1);

    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Lemire-style remainder by a runtime divisor, valid for 32-bit dividends.
#[derive(Clone, Copy, Debug)]
pub(crate) struct FastMod {
    d: u64,
    magic: u64,
}

impl FastMod {
    fn new(d: u32) -> Self {
        Self { d: d as u64, magic: u64::MAX / d as u64 + 1 }
    }

    #[inline(always)]
    pub(crate) fn rem(&self, x: u32) -> u32 {
        let low = self.magic.wrapping_mul(x as u64);
        ((low as u128 * self.d as u128) >> 64) as u32
    }
}

/// The finite field `F_{p^m}` with a fixed defining polynomial.
pub struct Field {
    p: u32,
    m: u32,
    q: u32,
    /// Monic irreducible modulus, constant term first, length `m + 1`.
    modulus: Vec<u32>,
    fm: FastMod,
    // Extension arithmetic. Empty for prime fields.
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Vec<u32>,
    pow_p: Vec<u32>,
}

pub type FieldRef = Arc<Field>;

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field(F_{}^{}, modulus {:?})", self.p, self.m, self.modulus)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m
    }
}

impl Eq for Field {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Dense polynomials over F_p, constant term first, used only while the
// field tables are being built.
mod fp_poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        trim(&mut a);
        let db = b.len() - 1;
        let inv_lead = inv(b[db], p);
        while a.len() > db {
            let da = a.len() - 1;
            let c = (a[da] as u64 * inv_lead as u64 % p as u64) as u32;
            for i in 0..=db {
                let t = (c as u64 * b[i] as u64 % p as u64) as u32;
                a[da - db + i] = (a[da - db + i] + p - t) % p;
            }
            trim(&mut a);
        }
        a
    }

    pub fn mul_mod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let out: Vec<u32> = out.into_iter().map(|v| v as u32).collect();
        rem(&out, f, p)
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn inv(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64 % p as u64;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }

    /// Ben-Or irreducibility test for a monic `f` of degree `m`.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let m = f.len() - 1;
        if m == 1 {
            return true;
        }
        let x = vec![0, 1];
        let mut xp = x.clone();
        for _ in 1..=m / 2 {
            // xp <- xp^p mod f
            let mut acc = vec![1u32];
            for _ in 0..p {
                acc = mul_mod(&acc, &xp, f, p);
            }
            xp = acc;
            let mut diff = xp.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            trim(&mut diff);
            let g = gcd(f, &diff, p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

impl Field {
    /// Builds `F_{p^m}`; the modulus is the lexicographically least monic
    /// irreducible of degree `m`, comparing coefficient vectors from the
    /// constant term upward.
    pub fn new(p: u64, m: u32) -> Result<FieldRef> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if p <= 3 {
            return Err(Error::PrimeTooSmall(p));
        }
        if m == 0 {
            return Err(Error::InvalidDegree(m));
        }
        if p >= 1 << 16 {
            return Err(Error::FieldTooLarge { p, m });
        }
        let q = (p as u128).checked_pow(m).filter(|&q| q <= MAX_ORDER as u128);
        let q = match q {
            Some(q) => q as u64,
            None => return Err(Error::FieldTooLarge { p, m }),
        };
        let p32 = p as u32;
        let modulus = Self::least_irreducible(p32, m);
        let mut field = Field {
            p: p32,
            m,
            q: q as u32,
            modulus,
            fm: FastMod::new(p32),
            exp: Vec::new(),
            log: Vec::new(),
            neg: Vec::new(),
            add: Vec::new(),
            pow_p: Vec::new(),
        };
        if m > 1 {
            field.build_tables();
        }
        Ok(Arc::new(field))
    }

    fn least_irreducible(p: u32, m: u32) -> Vec<u32> {
        if m == 1 {
            return vec![0, 1];
        }
        let count = (p as u64).pow(m);
        for k in 0..count {
            // Constant term is the most significant digit of k.
            let mut coeffs = vec![0u32; m as usize + 1];
            let mut rest = k;
            for i in (0..m as usize).rev() {
                coeffs[i] = (rest % p as u64) as u32;
                rest /= p as u64;
            }
            coeffs[m as usize] = 1;
            if coeffs[0] != 0 && fp_poly::is_irreducible(&coeffs, p) {
                return coeffs;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    fn encode_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0u32, |acc, &x| acc * self.p + x)
    }

    fn decode_digits(&self, mut code: u32) -> Vec<u32> {
        let mut out = vec![0u32; self.m as usize];
        for slot in out.iter_mut() {
            *slot = code % self.p;
            code /= self.p;
        }
        out
    }

    fn poly_mul_codes(&self, a: u32, b: u32) -> u32 {
        let da = self.decode_digits(a);
        let db = self.decode_digits(b);
        let mut prod = fp_poly::mul_mod(&da, &db, &self.modulus, self.p);
        prod.resize(self.m as usize, 0);
        self.encode_digits(&prod)
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let generator = (2..q as u32)
            .find(|&g| {
                factors.iter().all(|&f| {
                    let mut acc = 1u32;
                    let mut base = g;
                    let mut e = order / f;
                    while e > 0 {
                        if e & 1 == 1 {
                            acc = self.poly_mul_codes(acc, base);
                        }
                        base = self.poly_mul_codes(base, base);
                        e >>= 1;
                    }
                    acc != 1
                })
            })
            .expect("multiplicative group is cyclic");
        self.exp = vec![0; 2 * q];
        self.log = vec![0; q];
        let mut x = 1u32;
        for i in 0..q - 1 {
            self.exp[i] = x;
            self.exp[i + q - 1] = x;
            self.log[x as usize] = i as u32;
            x = self.poly_mul_codes(x, generator);
        }
        self.neg = (0..q as u32)
            .map(|c| {
                let d: Vec<u32> = self.decode_digits(c).iter().map(|&v| (self.p - v) % self.p).collect();
                self.encode_digits(&d)
            })
            .collect();
        if self.q as u64 <= ADD_TABLE_LIMIT {
            let mut table = vec![0u32; q * q];
            for a in 0..q as u32 {
                for b in 0..q as u32 {
                    table[a as usize * q + b as usize] = self.add_digits(a, b);
                }
            }
            self.add = table;
        }
        self.pow_p = (0..q as u32).map(|c| self.pow_slow(Scalar(c), self.p as u64).0).collect();
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.m {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    fn pow_slow(&self, a: Scalar, mut e: u64) -> Scalar {
        let mut acc = Scalar::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Number of elements.
    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.m == 1
    }

    #[inline(always)]
    pub fn zero(&self) -> Scalar {
        Scalar::ZERO
    }

    pub fn one(&self) -> Scalar {
        Scalar::ONE
    }

    /// Embeds an integer through `Z -> F_p -> F_q`.
    pub fn from_int(&self, v: i64) -> Scalar {
        Scalar(v.rem_euclid(self.p as i64) as u32)
    }

    /// Builds an element from its coordinates, each reduced mod `p`.
    /// Missing high coordinates are zero.
    pub fn from_digits(&self, digits: &[i64]) -> Result<Scalar> {
        if digits.len() > self.m as usize {
            return Err(Error::InvalidArgument(format!(
                "{} coordinates given for a degree-{} extension",
                digits.len(),
                self.m
            )));
        }
        let d: Vec<u32> = digits.iter().map(|&v| v.rem_euclid(self.p as i64) as u32).collect();
        Ok(Scalar(self.encode_digits(&d)))
    }

    pub fn digits(&self, a: Scalar) -> Vec<u32> {
        self.decode_digits(a.0)
    }

    pub fn from_code(&self, code: u32) -> Scalar {
        assert!(code < self.q, "code {code} out of range for F_{}", self.q);
        Scalar(code)
    }

    /// True when `a` lies in the prime subfield.
    pub fn in_prime_subfield(&self, a: Scalar) -> bool {
        a.0 < self.p
    }

    #[inline(always)]
    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        if self.m == 1 {
            let s = a.0 + b.0;
            Scalar(if s >= self.p { s - self.p } else { s })
        } else if !self.add.is_empty() {
            Scalar(self.add[a.0 as usize * self.q as usize + b.0 as usize])
        } else {
            Scalar(self.add_digits(a.0, b.0))
        }
    }

    #[inline(always)]
    pub fn neg(&self, a: Scalar) -> Scalar {
        if self.m == 1 {
            Scalar(if a.0 == 0 { 0 } else { self.p - a.0 })
        } else {
            Scalar(self.neg[a.0 as usize])
        }
    }

    #[inline(always)]
    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    #[inline(always)]
    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        if self.m == 1 {
            Scalar(self.fm.rem(a.0 * b.0))
        } else if a.0 == 0 || b.0 == 0 {
            Scalar::ZERO
        } else {
            let i = self.log[a.0 as usize] + self.log[b.0 as usize];
            Scalar(self.exp[i as usize])
        }
    }

    /// `dst[j] += c * src[j]`.
    pub fn axpy(&self, dst: &mut [Scalar], c: Scalar, src: &[Scalar]) {
        debug_assert_eq!(dst.len(), src.len());
        if c.is_zero() {
            return;
        }
        if self.m == 1 {
            let fm = self.fm;
            let c = c.0;
            for (d, s) in dst.iter_mut().zip(src) {
                d.0 = fm.rem(d.0 + c * s.0);
            }
        } else {
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = self.add(*d, self.mul(c, s));
            }
        }
    }

    /// `Σ a[k] * b[k]`.
    pub fn dot(&self, a: &[Scalar], b: &[Scalar]) -> Scalar {
        if self.m == 1 {
            // Products are below 2^32; reduce before the sum can overflow.
            let mut acc = 0u64;
            for (chunk_a, chunk_b) in a.chunks(1 << 20).zip(b.chunks(1 << 20)) {
                let s: u64 = chunk_a.iter().zip(chunk_b).map(|(x, y)| x.0 as u64 * y.0 as u64).sum();
                acc = (acc + s % self.p as u64) % self.p as u64;
            }
            Scalar(acc as u32)
        } else {
            a.iter().zip(b).fold(Scalar::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
        }
    }

    pub fn inv(&self, a: Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        if self.m == 1 {
            Some(Scalar(fp_poly::inv(a.0, self.p)))
        } else {
            let l = self.log[a.0 as usize];
            let i = if l == 0 { 0 } else { self.q - 1 - l };
            Some(Scalar(self.exp[i as usize]))
        }
    }

    pub fn div(&self, a: Scalar, b: Scalar) -> Option<Scalar> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    pub fn pow(&self, a: Scalar, e: u64) -> Scalar {
        if a.is_zero() {
            return if e == 0 { Scalar::ONE } else { Scalar::ZERO };
        }
        if self.m == 1 {
            return self.pow_slow(a, e);
        }
        let l = self.log[a.0 as usize] as u64;
        let i = (l * (e % (self.q as u64 - 1))) % (self.q as u64 - 1);
        Scalar(self.exp[i as usize])
    }

    /// The Frobenius `a -> a^p`.
    #[inline]
    pub fn frobenius(&self, a: Scalar) -> Scalar {
        if self.m == 1 {
            a
        } else {
            Scalar(self.pow_p[a.0 as usize])
        }
    }

    /// `a^(p^k)`.
    pub fn frobenius_iter(&self, a: Scalar, k: u32) -> Scalar {
        (0..k % self.m).fold(a, |acc, _| self.frobenius(acc))
    }

    /// The unique `y` with `y^(p^r) = z`. Frobenius has order `m`, so this is
    /// `z^(p^((m - r mod m) mod m))`.
    pub fn proot(&self, z: Scalar, r: u32) -> Scalar {
        let k = (self.m - r % self.m) % self.m;
        self.frobenius_iter(z, k)
    }

    pub fn elements(&self) -> impl Iterator<Item = Scalar> {
        (0..self.q).map(Scalar)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        Scalar(rng.gen_range(0..self.q))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        Scalar(rng.gen_range(1..self.q))
    }

    /// Integer-or-bracket text form used by the polynomial grammar.
    pub fn format(&self, a: Scalar) -> String {
        if self.m == 1 || a.0 < self.p {
            a.0.to_string()
        } else {
            let d = self.decode_digits(a.0);
            let parts: Vec<String> = d.iter().map(|v| v.to_string()).collect();
            format!("[{}]", parts.join(","))
        }
    }

    /// Centered representative of a prime-subfield element (`4 -> -1` over F_5).
    pub fn signed(&self, a: Scalar) -> Option<i64> {
        if !self.in_prime_subfield(a) {
            return None;
        }
        let v = a.0 as i64;
        Some(if v > self.p as i64 / 2 { v - self.p as i64 } else { v })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_characteristics() {
        assert_eq!(Field::new(4, 1).unwrap_err(), Error::NonPrime(4));
        assert_eq!(Field::new(3, 1).unwrap_err(), Error::PrimeTooSmall(3));
        assert_eq!(Field::new(2, 3).unwrap_err(), Error::PrimeTooSmall(2));
        assert_eq!(Field::new(1, 1).unwrap_err(), Error::NonPrime(1));
        assert_eq!(Field::new(5, 0).unwrap_err(), Error::InvalidDegree(0));
    }

    #[test]
    fn prime_field_modulus_is_t() {
        let f = Field::new(5, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.q(), 5);
    }

    #[test]
    fn quadratic_modulus_is_lexicographically_least() {
        // Brute force: a monic quadratic is irreducible iff it has no root.
        let f = Field::new(5, 2).unwrap();
        let mut best = None;
        'outer: for c0 in 0..5u32 {
            for c1 in 0..5u32 {
                if (0..5u32).all(|t| (t * t + c1 * t + c0) % 5 != 0) {
                    best = Some(vec![c0, c1, 1]);
                    break 'outer;
                }
            }
        }
        assert_eq!(f.modulus(), best.unwrap().as_slice());
        assert_eq!(f.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn cubic_modulus_has_no_roots() {
        let f = Field::new(5, 3).unwrap();
        let m = f.modulus().to_vec();
        assert_eq!(m.len(), 4);
        for t in 0..5u32 {
            let v = (m[0] + m[1] * t + m[2] * t * t + t * t * t) % 5;
            assert_ne!(v, 0);
        }
    }

    #[test]
    fn inverses_exhaustive() {
        for (p, m) in [(5, 1), (7, 1), (5, 2), (5, 3), (7, 2)] {
            let f = Field::new(p, m).unwrap();
            for a in f.elements().skip(1) {
                let ia = f.inv(a).unwrap();
                assert_eq!(f.mul(a, ia), f.one());
            }
            assert!(f.inv(f.zero()).is_none());
        }
    }

    #[test]
    fn frobenius_is_additive_exhaustive() {
        for (p, m) in [(5, 1), (5, 2), (5, 3), (7, 2)] {
            let f = Field::new(p, m).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    let lhs = f.pow(f.add(a, b), p);
                    let rhs = f.add(f.pow(a, p), f.pow(b, p));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn proot_inverts_frobenius_powers() {
        for (p, m) in [(5, 1), (5, 2), (5, 3)] {
            let f = Field::new(p, m).unwrap();
            for r in 1..5u32 {
                for z in f.elements() {
                    let zr = f.pow(z, (p as u64).pow(r));
                    assert_eq!(f.proot(zr, r), z);
                }
            }
        }
    }

    #[test]
    fn proot_examples() {
        let f5 = Field::new(5, 1).unwrap();
        assert_eq!(f5.proot(f5.from_int(4), 1), f5.from_int(4));
        assert_eq!(f5.proot(f5.zero(), 3), f5.zero());
        let f25 = Field::new(5, 2).unwrap();
        for z in f25.elements() {
            let y = f25.proot(z, 1);
            assert_eq!(y, f25.pow(z, 5));
            assert_eq!(f25.pow(y, 5), z);
        }
    }

    #[test]
    fn addition_without_table_matches_table() {
        let f = Field::new(5, 5).unwrap(); // q = 3125, digitwise path
        let g = Field::new(5, 2).unwrap();
        assert!(f.add.is_empty());
        let a = f.from_digits(&[1, 4, 2, 0, 3]).unwrap();
        let b = f.from_digits(&[4, 4, 4, 1, 2]).unwrap();
        assert_eq!(f.digits(f.add(a, b)), vec![0, 3, 1, 1, 0]);
        let x = g.from_digits(&[3, 2]).unwrap();
        assert_eq!(g.add(x, g.neg(x)), g.zero());
    }

    #[test]
    fn fastmod_matches_remainder() {
        let fm = FastMod::new(7);
        for x in (0u32..100_000).chain([u32::MAX - 3, u32::MAX]) {
            assert_eq!(fm.rem(x), x % 7);
        }
    }
}
