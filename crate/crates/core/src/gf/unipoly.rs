use super::{Field, Scalar};

/// Univariate polynomial, lowest degree first. The zero polynomial has no
/// coefficients; otherwise the last coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// `t^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Scalar::ZERO; k + 1];
        coeffs[k] = Scalar::ONE;
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).copied().unwrap_or(Scalar::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&Scalar::ONE)
    }

    pub fn eval(&self, field: &Field, x: Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(Scalar::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
    }

    /// Indices of nonzero coefficients.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i)
    }

    pub fn mul(&self, field: &Field, other: &UniPoly) -> UniPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return UniPoly::zero();
        }
        let mut out = vec![Scalar::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(a, b));
            }
        }
        UniPoly::new(out)
    }

    /// The unique polynomial of degree below `xs.len()` through the points
    /// `(xs[k], ys[k])`. Panics if the `xs` are not distinct.
    pub fn interpolate(field: &Field, xs: &[Scalar], ys: &[Scalar]) -> UniPoly {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        // Newton divided differences, then expansion by Horner's rule.
        let mut dd = ys.to_vec();
        for level in 1..n {
            for k in (level..n).rev() {
                let den = field.sub(xs[k], xs[k - level]);
                let num = field.sub(dd[k], dd[k - 1]);
                dd[k] = field.div(num, den).expect("interpolation nodes are distinct");
            }
        }
        let mut acc = vec![Scalar::ZERO; n.max(1)];
        for k in (0..n).rev() {
            // acc = acc * (t - xs[k]) + dd[k]
            let mut next = vec![Scalar::ZERO; n.max(1)];
            for (j, &c) in acc.iter().enumerate() {
                if j + 1 < next.len() {
                    next[j + 1] = field.add(next[j + 1], c);
                }
                next[j] = field.sub(next[j], field.mul(c, xs[k]));
            }
            next[0] = field.add(next[0], dd[k]);
            acc = next;
        }
        UniPoly::new(acc)
    }

    pub fn display(&self, field: &Field) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut terms = Vec::new();
        for k in (0..self.coeffs.len()).rev() {
            let c = self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let cs = field.format(c);
            let term = match (k, c == Scalar::ONE) {
                (0, _) => cs,
                (1, true) => "t".to_string(),
                (1, false) => format!("{cs}*t"),
                (_, true) => format!("t^{k}"),
                (_, false) => format!("{cs}*t^{k}"),
            };
            terms.push(term);
        }
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn interpolation_recovers_polynomials() {
        let f = Field::new(5, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for deg in 0..10 {
            let poly = UniPoly::new((0..=deg).map(|_| f.random(&mut rng)).collect());
            let xs: Vec<Scalar> = f.elements().skip(3).take(deg + 1).collect();
            let ys: Vec<Scalar> = xs.iter().map(|&x| poly.eval(&f, x)).collect();
            assert_eq!(UniPoly::interpolate(&f, &xs, &ys), poly);
        }
        assert_eq!(UniPoly::interpolate(&f, &[], &[]), UniPoly::zero());
    }

    #[test]
    fn display_format() {
        let f = Field::new(5, 1).unwrap();
        let p = UniPoly::new(vec![f.one(), f.from_int(3), f.one()]);
        assert_eq!(p.display(&f), "t^2 + 3*t + 1");
        assert_eq!(p.degree(), Some(2));
        assert!(p.is_monic());
    }
}
