use super::*;
use crate::bn::Ring;
use crate::gf::{Field, FieldRef};
use crate::ham::{torus_tw, HamRef};
use crate::pinv::pmap;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn f5() -> FieldRef {
    Field::new(5, 1).unwrap()
}

fn ctx(r: usize) -> HamRef {
    HamCtx::new(f5(), r).unwrap()
}

fn s(v: i64) -> Scalar {
    f5().from_int(v)
}

#[test]
fn make_aut_examples() {
    let ring = Ring::new(f5(), 2).unwrap();
    let id = AlgebraMap::new(&ring, vec![ring.var(0), ring.var(1)]).unwrap();
    assert_eq!(id, AlgebraMap::identity(&ring));

    let scale = AlgebraMap::diagonal(&ring, &[s(3), s(3)]).unwrap();
    assert_eq!(scale.inverse_images(), &[ring.var(0).scale(s(2)), ring.var(1).scale(s(2))]);

    let x2sq = ring.var(1).pow(2);
    let mu = AlgebraMap::new(&ring, vec![&ring.var(0) + &x2sq, ring.var(1)]).unwrap();
    assert_eq!(mu.inverse_images(), &[&ring.var(0) - &x2sq, ring.var(1)]);
    assert_eq!(mu.compose(&mu.inverse()).unwrap(), id);

    assert_eq!(AlgebraMap::new(&ring, vec![ring.var(1), ring.var(1)]), Err(Error::NotInvertible));
    assert_eq!(AlgebraMap::new(&ring, vec![&ring.one() + &ring.var(0), ring.var(1)]), Err(Error::NonNilpotentImage(1)));
    assert!(matches!(AlgebraMap::new(&ring, vec![ring.var(0)]), Err(Error::DimensionMismatch(_))));
}

#[test]
fn random_automorphisms_invert_both_ways() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [1, 2, 3] {
        let ring = Ring::new(f5(), n).unwrap();
        for _ in 0..5 {
            let mu = AlgebraMap::random(&ring, &mut rng);
            let f = ring.random(&mut rng);
            assert_eq!(mu.apply_inverse(&mu.apply(&f).unwrap()).unwrap(), f);
            assert_eq!(mu.apply(&mu.apply_inverse(&f).unwrap()).unwrap(), f);
            let nu = AlgebraMap::random(&ring, &mut rng);
            let comp = mu.compose(&nu).unwrap();
            assert_eq!(comp.apply(&f).unwrap(), mu.apply(&nu.apply(&f).unwrap()).unwrap());
            assert_eq!(comp.apply_inverse(&comp.apply(&f).unwrap()).unwrap(), f);
            assert_eq!(comp.jacobian_constant(), f5().mul(mu.jacobian_constant(), nu.jacobian_constant()));
        }
    }
}

#[test]
fn ad_action_examples() {
    let ring = Ring::new(f5(), 1).unwrap();
    let d = Derivation::partial(&ring, 0);
    let xd = Derivation::new(vec![ring.var(0)]).unwrap();
    let id = AlgebraMap::identity(&ring);
    assert_eq!(ad_action(&id, &d).unwrap(), d);
    let mu = AlgebraMap::diagonal(&ring, &[s(3)]).unwrap();
    assert_eq!(ad_action(&mu, &d).unwrap(), d.scale(s(3)));
    assert_eq!(ad_action(&mu, &xd).unwrap(), xd);
}

#[test]
fn displayed_ad_formula_is_inverse_conjugation() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in [1, 2] {
        let ring = Ring::new(f5(), n).unwrap();
        for _ in 0..5 {
            let mu = AlgebraMap::random(&ring, &mut rng);
            let d = Derivation::random(&ring, &mut rng);
            assert_eq!(detect_conjugation(&mu, &d).unwrap(), Some(Conjugation::MuInvDMu));
            assert_eq!(ad_action(&mu, &d).unwrap().char_poly(), d.char_poly());
        }
    }
}

#[test]
fn gh_examples() {
    let h = ctx(1);
    let ring = h.ring();
    assert_eq!(gh_test(&h, &AlgebraMap::identity(ring)).unwrap(), Scalar::ONE);
    assert!(gb_test(&h, &AlgebraMap::identity(ring)).unwrap());
    let scale = AlgebraMap::diagonal(ring, &[s(3), s(1)]).unwrap();
    assert_eq!(gh_test(&h, &scale).unwrap(), s(3));
    assert!(!gb_test(&h, &scale).unwrap());
    let swap = AlgebraMap::new(ring, vec![ring.var(1), ring.var(0)]).unwrap();
    assert_eq!(gh_test(&h, &swap).unwrap(), s(-1));

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    assert_eq!(bracket_characterization(&h, &AlgebraMap::identity(ring), 20, &mut rng).unwrap(), Scalar::ONE);
    assert_eq!(bracket_characterization(&h, &scale, 20, &mut rng).unwrap(), s(3));
    assert_eq!(bracket_characterization(&h, &swap, 20, &mut rng).unwrap(), s(-1));

    // x_1 -> x_1 + x_1^2 keeps x_2: μ(ω) = (1 + 2x_1) ω.
    let bent = AlgebraMap::new(ring, vec![&ring.var(0) + &ring.var(0).pow(2), ring.var(1)]).unwrap();
    assert_eq!(gh_test(&h, &bent), Err(Error::NotGH));
    assert_eq!(bracket_characterization(&h, &bent, 20, &mut rng), Err(Error::NotGH));
}

#[test]
fn gh_and_bracket_characterization_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (r, count) in [(1, 100), (2, 3)] {
        let h = ctx(r);
        for _ in 0..count {
            let (mu, alpha) = random_gh(&h, &mut rng).unwrap();
            assert_eq!(gh_test(&h, &mu).unwrap(), alpha);
            assert_eq!(bracket_characterization(&h, &mu, 20, &mut rng).unwrap(), alpha);
        }
        for _ in 0..count {
            let mu = AlgebraMap::random(h.ring(), &mut rng);
            assert_eq!(gh_test(&h, &mu), Err(Error::NotGH));
            assert_eq!(bracket_characterization(&h, &mu, 20, &mut rng), Err(Error::NotGH));
        }
    }
}

#[test]
fn orientation_is_inverse() {
    assert_eq!(detect_orientation(&ctx(1)).unwrap(), Some(AdOrientation::Inverse));
    assert_eq!(detect_orientation(&ctx(2)).unwrap(), Some(AdOrientation::Inverse));
}

#[test]
fn adh_formula_examples() {
    let h = ctx(1);
    let ring = h.ring();
    let x1x2 = &ring.var(0) * &ring.var(1);
    for o in [AdOrientation::Literal, AdOrientation::Inverse] {
        assert!(adh_formula_check(&h, &AlgebraMap::identity(ring), Scalar::ONE, &x1x2, o).unwrap());
        let scale = AlgebraMap::diagonal(ring, &[s(3), s(1)]).unwrap();
        assert!(adh_formula_check(&h, &scale, s(3), &x1x2, o).unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for r in [1, 2] {
        let h = ctx(r);
        for _ in 0..10 {
            let (mu, alpha) = random_gh(&h, &mut rng).unwrap();
            let f = h.ring().random(&mut rng);
            assert!(adh_formula_check(&h, &mu, alpha, &f, AdOrientation::Inverse).unwrap());
        }
    }
}

#[test]
fn lift_examples() {
    let h = ctx(1);
    let br = h.base_ring();
    let ring = h.ring();
    let (lift, alpha) = lift_mu(&h, &AlgebraMap::identity(br)).unwrap();
    assert_eq!((lift, alpha), (AlgebraMap::identity(ring), Scalar::ONE));

    let c = s(2);
    let (lift, alpha) = lift_mu(&h, &AlgebraMap::diagonal(br, &[c]).unwrap()).unwrap();
    assert_eq!(alpha, c);
    assert_eq!(lift.images(), &[ring.var(0).scale(s(4)), ring.var(1).scale(s(3))]);
    assert_eq!(gh_test(&h, &lift).unwrap(), c);

    let mu = AlgebraMap::new(br, vec![&br.var(0) + &br.var(0).pow(2)]).unwrap();
    let (lift, alpha) = lift_mu(&h, &mu).unwrap();
    assert_eq!(alpha, Scalar::ONE);
    assert_eq!(form_apply_algmap(lift.images(), h.omega()).unwrap(), *h.omega());
}

#[test]
fn lift_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (r, count) in [(1, 30), (2, 3)] {
        let h = ctx(r);
        let field = h.field();
        let br = h.base_ring();
        for _ in 0..count {
            let mu = AlgebraMap::random(br, &mut rng);
            let nu = AlgebraMap::random(br, &mut rng);
            let (lm, am) = lift_mu(&h, &mu).unwrap();
            assert_eq!(form_apply_algmap(lm.images(), h.omega()).unwrap(), h.omega().scale(am));
            for i in 0..r {
                let b = h.poisson(&lm.images()[r + i], &lm.images()[i]).unwrap();
                assert_eq!(b, h.ring().constant(field.neg(am)));
            }
            let (linv, ainv) = lift_mu(&h, &mu.inverse()).unwrap();
            assert_eq!(linv, lm.inverse());
            assert_eq!(field.mul(am, ainv), Scalar::ONE);
            // Substitution composes contravariantly: the lift reverses order.
            let (ln, _) = lift_mu(&h, &nu).unwrap();
            let (lmn, _) = lift_mu(&h, &mu.compose(&nu).unwrap()).unwrap();
            assert_eq!(lmn, ln.compose(&lm).unwrap());

            let f = h.ring().random(&mut rng);
            assert!(adh_formula_check(&h, &lm, am, &f, AdOrientation::Inverse).unwrap());
        }
    }
}

#[test]
fn beta_examples() {
    let h = ctx(1);
    let br = h.base_ring();
    let ring = h.ring();
    assert_eq!(beta(&h, &Derivation::partial(br, 0)).unwrap(), Derivation::partial(ring, 1));
    let tw = torus_tw(br);
    assert_eq!(beta(&h, &tw[0]).unwrap(), h.torus_th()[0]);
    let xd = Derivation::new(vec![br.var(0)]).unwrap();
    let expected = Derivation::new(vec![-&ring.var(0), ring.var(1)]).unwrap();
    assert_eq!(beta(&h, &xd).unwrap(), expected);
    assert_eq!(theta_r(&h, &xd).unwrap(), &ring.var(0) * &ring.var(1));

    let h2 = ctx(2);
    for (t, th) in torus_tw(h2.base_ring()).iter().zip(h2.torus_th()) {
        assert_eq!(beta(&h2, t).unwrap(), th);
    }
}

#[test]
fn beta_is_an_injective_restricted_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for r in [1, 2] {
        let h = ctx(r);
        let br = h.base_ring();
        for _ in 0..10 {
            let d = Derivation::random(br, &mut rng);
            let e = Derivation::random(br, &mut rng);
            let bd = beta(&h, &d).unwrap();
            assert_eq!(beta(&h, &d.bracket(&e).unwrap()).unwrap(), bd.bracket(&beta(&h, &e).unwrap()).unwrap());
            assert_eq!(beta(&h, &d.p_power()).unwrap(), bd.p_power());
            assert_eq!(h.h_family(&bd).unwrap(), crate::ham::HFamily::H);
            let c = h.field().random(&mut rng);
            let mut lin = d.clone();
            lin.axpy(c, &e);
            let mut blin = bd.clone();
            blin.axpy(c, &beta(&h, &e).unwrap());
            assert_eq!(beta(&h, &lin).unwrap(), blin);
        }
        let rows: Vec<Vec<Scalar>> = (0..r)
            .flat_map(|i| (0..br.dim()).map(move |a| (i, a)))
            .map(|(i, a)| {
                let mut coeffs = vec![br.zero(); r];
                coeffs[i] = br.monomial(a, Scalar::ONE);
                beta(&h, &Derivation::new(coeffs).unwrap()).unwrap().to_vec()
            })
            .collect();
        assert_eq!(Matrix::from_rows(rows).unwrap().rank(h.field()), r * br.dim());
    }
}

#[test]
fn pmap_commutes_with_beta_on_potentials() {
    let h = ctx(1);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let d = Derivation::random(h.base_ring(), &mut rng);
    let theta = theta_r(&h, &d).unwrap();
    let mut expected = theta_r(&h, &d.p_power()).unwrap();
    expected.set_coeff(0, Scalar::ZERO);
    assert_eq!(pmap(&h, &theta).unwrap(), expected);
}

#[test]
fn diagram_examples() {
    let h = ctx(1);
    let br = h.base_ring();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let d = Derivation::random(br, &mut rng);
    let o = AdOrientation::Inverse;
    assert!(diagram_check(&h, &AlgebraMap::identity(br), &d, o).unwrap());
    let scale = AlgebraMap::diagonal(br, &[s(2)]).unwrap();
    assert!(diagram_check(&h, &scale, &Derivation::partial(br, 0), o).unwrap());
    for _ in 0..100 {
        let mu = AlgebraMap::random(br, &mut rng);
        let d = Derivation::random(br, &mut rng);
        assert!(diagram_check(&h, &mu, &d, o).unwrap());
    }
    assert!(!diagram_check(&h, &scale, &Derivation::partial(br, 0), AdOrientation::Literal).unwrap());
    let h2 = ctx(2);
    for _ in 0..3 {
        let mu = AlgebraMap::random(h2.base_ring(), &mut rng);
        let d = Derivation::random(h2.base_ring(), &mut rng);
        assert!(diagram_check(&h2, &mu, &d, o).unwrap());
    }
}

#[test]
fn pullback_examples() {
    let h = ctx(1);
    let br = h.base_ring();
    assert_eq!(pullback_eval(&h, &torus_tw(br)[0]).unwrap(), vec![s(4)]);
    assert_eq!(pullback_eval(&h, &Derivation::partial(br, 0)).unwrap(), vec![Scalar::ZERO]);
}

#[test]
fn glr_examples() {
    let h = ctx(2);
    let c = vec![s(1), s(3)];
    assert_eq!(glr_act(&h, &Matrix::identity(2), &c).unwrap(), c);
    let swap = Matrix::from_rows(vec![vec![Scalar::ZERO, Scalar::ONE], vec![Scalar::ONE, Scalar::ZERO]]).unwrap();
    assert_eq!(glr_act(&h, &swap, &c).unwrap(), vec![s(3), s(1)]);
    let h1 = ctx(1);
    let g = Matrix::from_rows(vec![vec![s(2)]]).unwrap();
    assert_eq!(glr_act(&h1, &g, &[s(3)]).unwrap(), vec![s(1)]);
    assert_eq!(glr_act(&h1, &Matrix::zeros(1, 1), &[s(3)]), Err(Error::NotInvertible));
}
