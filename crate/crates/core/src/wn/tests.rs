use super::*;
use crate::bn::Ring;
use crate::gf::Field;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ring(p: u64, m: u32, n: usize) -> RingRef {
    Ring::new(Field::new(p, m).unwrap(), n).unwrap()
}

fn der(r: &RingRef, coeffs: Vec<TruncPoly>) -> Derivation {
    Derivation::new(coeffs).unwrap_or_else(|_| Derivation::zero(r))
}

/// `x_2 ∂_2 - x_1 ∂_1` on `B_2`.
fn hyperbolic(r: &RingRef) -> Derivation {
    der(r, vec![-&r.var(0), r.var(1)])
}

/// Reads a derivation back from an operator matrix via the columns of `x_i`.
fn from_operator(r: &RingRef, m: &Matrix) -> Derivation {
    der(r, (0..r.n()).map(|i| r.from_coeffs(m.column(r.var_index(i))).unwrap()).collect())
}

#[test]
fn apply_examples() {
    let r = ring(5, 1, 2);
    let f = r.field().clone();
    let d1 = Derivation::partial(&r, 0);
    assert_eq!(d1.apply(&r.var(0).pow(2)).unwrap(), r.var(0).scale(f.from_int(2)));
    assert!(hyperbolic(&r).apply(&(&r.var(0) * &r.var(1))).unwrap().is_zero());
    let x1d2 = der(&r, vec![r.zero(), r.var(0)]);
    assert_eq!(x1d2.apply(&r.var(1)).unwrap(), r.var(0));
}

#[test]
fn bracket_examples() {
    let r = ring(5, 1, 2);
    let d1 = Derivation::partial(&r, 0);
    let d2 = Derivation::partial(&r, 1);
    let x1d1 = der(&r, vec![r.var(0), r.zero()]);
    let x2d2 = der(&r, vec![r.zero(), r.var(1)]);
    assert_eq!(d1.bracket(&x1d1).unwrap(), d1);
    assert!(d1.bracket(&d2).unwrap().is_zero());
    assert!(x1d1.bracket(&x2d2).unwrap().is_zero());
}

#[test]
fn operator_matrix_examples() {
    let r = ring(5, 1, 1);
    let f = r.field().clone();
    let m = Derivation::partial(&r, 0).operator_matrix();
    for i in 0..5 {
        for j in 0..5 {
            let expected = if i + 1 == j { f.from_int(j as i64) } else { Scalar::ZERO };
            assert_eq!(m.get(i, j), expected);
        }
    }
    assert!(m.pow(&f, 5).unwrap().is_zero());
    assert!(Derivation::zero(&r).operator_matrix().is_zero());
    let e = der(&r, vec![r.var(0)]).operator_matrix();
    for i in 0..5 {
        for j in 0..5 {
            let expected = if i == j { f.from_int(i as i64) } else { Scalar::ZERO };
            assert_eq!(e.get(i, j), expected);
        }
    }
}

#[test]
fn p_power_examples_match_matrix_powers() {
    let r1 = ring(5, 1, 1);
    let f = r1.field().clone();
    assert!(Derivation::partial(&r1, 0).p_power().is_zero());
    let toral = der(&r1, vec![&r1.one() + &r1.var(0)]);
    let oracle = from_operator(&r1, &toral.operator_matrix().pow(&f, 5).unwrap());
    assert_eq!(oracle, toral);
    assert_eq!(toral.p_power(), toral);

    let r2 = ring(5, 1, 2);
    let h = hyperbolic(&r2);
    let oracle = from_operator(&r2, &h.operator_matrix().pow(&f, 5).unwrap());
    assert_eq!(oracle, h);
    assert_eq!(h.p_power(), h);
}

#[test]
fn psi_examples() {
    let r1 = ring(5, 1, 1);
    let f = r1.field().clone();
    let euler = der(&r1, vec![r1.var(0)]);
    assert_eq!(euler.char_poly(), UniPoly::new(vec![f.zero(), f.from_int(4), f.zero(), f.zero(), f.zero(), f.one()]));
    assert_eq!(euler.psi().unwrap(), vec![f.from_int(4)]);
    assert_eq!(Derivation::partial(&r1, 0).psi().unwrap(), vec![f.zero()]);

    // Eigenvalue-product oracle: the eigenvalue of x^a is a_2 - a_1, so each
    // c in F_5 occurs five times and χ = (t^5 - t)^5 = t^25 - t^5.
    let r2 = ring(5, 1, 2);
    let mut oracle = UniPoly::new(vec![f.one()]);
    for idx in 0..r2.dim() {
        let ev = f.from_int(r2.exp(idx, 1) as i64 - r2.exp(idx, 0) as i64);
        oracle = oracle.mul(&f, &UniPoly::new(vec![f.neg(ev), f.one()]));
    }
    let h = hyperbolic(&r2);
    assert_eq!(h.char_poly(), oracle);
    assert_eq!(h.psi().unwrap(), vec![f.zero(), f.from_int(4)]);
}

#[test]
fn psi_rejects_bad_shape() {
    let f = Field::new(5, 1).unwrap();
    let cp = UniPoly::new(vec![f.zero(), f.zero(), f.one(), f.zero(), f.zero(), f.one()]);
    assert_eq!(psi_from_char_poly(5, 1, &cp), Err(Error::ShapeViolation(2)));
}

#[test]
fn nilpotency_examples() {
    let r = ring(5, 1, 2);
    assert!(Derivation::partial(&r, 0).is_nilpotent_operator());
    assert!(!der(&r, vec![r.var(0), r.zero()]).is_nilpotent_operator());
    assert!(Derivation::zero(&r).is_nilpotent_operator());
}

#[test]
fn semisimplicity_examples() {
    let r = ring(5, 1, 2);
    let euler = der(&r, vec![r.var(0), r.zero()]);
    assert!(euler.is_p_semisimple());
    assert!(!Derivation::partial(&r, 0).is_p_semisimple());
    assert!(Derivation::zero(&r).is_p_semisimple());
    for d in [euler, Derivation::partial(&r, 0), Derivation::zero(&r), hyperbolic(&r)] {
        let psi = d.psi().unwrap();
        assert_eq!(d.is_p_semisimple(), d.radical_annihilates(&psi), "{d}");
    }
}

#[test]
fn semisimplicity_tests_agree_on_random_elements() {
    let r = ring(5, 1, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..40 {
        let mut d = Derivation::random(&r, &mut rng);
        // Mix in degree-one derivations, which are often semisimple.
        if rand::Rng::gen_bool(&mut rng, 0.5) {
            let f = r.field().clone();
            let coeffs = (0..2)
                .map(|_| {
                    let mut g = r.zero();
                    for i in 0..2 {
                        g.set_coeff(r.var_index(i), f.random(&mut rng));
                    }
                    g
                })
                .collect();
            d = der(&r, coeffs);
        }
        let psi = d.psi().unwrap();
        assert_eq!(d.is_p_semisimple(), d.radical_annihilates(&psi), "{d}");
    }
}

#[test]
fn psi_shape_over_extension() {
    let r = ring(5, 2, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let d = Derivation::random(&r, &mut rng);
        let cp = d.char_poly();
        assert!(cp.support().all(|k| [1, 5, 25].contains(&k)), "{}", cp.display(r.field()));
    }
}

#[test]
fn psi_is_homogeneous() {
    let r = ring(5, 2, 2);
    let f = r.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..5 {
        let d = Derivation::random(&r, &mut rng);
        let c = f.random_nonzero(&mut rng);
        let psi = d.psi().unwrap();
        let psi_c = d.scale(c).psi().unwrap();
        for i in 0..2 {
            let e = 25 - 5u64.pow(i as u32);
            assert_eq!(psi_c[i], f.mul(f.pow(c, e), psi[i]));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn bracket_is_a_lie_bracket(seed in any::<u64>()) {
        let r = ring(5, 1, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (Derivation::random(&r, &mut rng), Derivation::random(&r, &mut rng), Derivation::random(&r, &mut rng));
        prop_assert!(a.bracket(&b).unwrap().add(&b.bracket(&a).unwrap()).unwrap().is_zero());
        let jacobi = a.bracket(&b.bracket(&c).unwrap()).unwrap()
            .add(&b.bracket(&c.bracket(&a).unwrap()).unwrap()).unwrap()
            .add(&c.bracket(&a.bracket(&b).unwrap()).unwrap()).unwrap();
        prop_assert!(jacobi.is_zero());
    }

    #[test]
    fn operator_matrix_is_a_lie_homomorphism(seed in any::<u64>()) {
        let r = ring(5, 1, 2);
        let f = r.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (Derivation::random(&r, &mut rng), Derivation::random(&r, &mut rng));
        let (ma, mb) = (a.operator_matrix(), b.operator_matrix());
        let comm = ma.mul(&f, &mb).unwrap().sub(&f, &mb.mul(&f, &ma).unwrap());
        prop_assert_eq!(a.bracket(&b).unwrap().operator_matrix(), comm);
    }

    #[test]
    fn p_power_matches_matrix_power(seed in any::<u64>()) {
        let r = ring(5, 1, 2);
        let f = r.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = Derivation::random(&r, &mut rng);
        prop_assert_eq!(d.p_power().operator_matrix(), d.operator_matrix().pow(&f, 5).unwrap());
    }
}
