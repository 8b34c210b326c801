use super::*;
use crate::bn::form_apply_derivation;
use crate::gf::{solve_linear, Field, Matrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ctx(p: u64, r: usize) -> HamRef {
    HamCtx::new(Field::new(p, 1).unwrap(), r).unwrap()
}

fn mono(h: &HamCtx, e: &[usize]) -> TruncPoly {
    h.ring().monomial(h.ring().index(e).unwrap(), Scalar::ONE)
}

fn der(coeffs: Vec<TruncPoly>) -> Derivation {
    Derivation::new(coeffs).unwrap()
}

/// `δ` by solving `D_H(f) = D` over the monomial coefficients, pinning the
/// constant coefficient to zero.
fn delta_by_solve(h: &HamCtx, d: &Derivation) -> Option<TruncPoly> {
    let ring = h.ring();
    let cols: Vec<Vec<Scalar>> = (1..ring.dim()).map(|a| h.d_h(&ring.monomial(a, Scalar::ONE)).unwrap().to_vec()).collect();
    let m = Matrix::from_columns(ring.n() * ring.dim(), &cols).unwrap();
    let sol = solve_linear(h.field(), &m, &d.to_vec()).ok()?;
    assert!(sol.unique);
    let mut coeffs = vec![Scalar::ZERO];
    coeffs.extend(sol.x);
    Some(ring.from_coeffs(coeffs).unwrap())
}

#[test]
fn omega_examples() {
    let h1 = ctx(5, 1);
    assert_eq!(h1.omega().get(0, 1), h1.ring().one());
    assert_eq!(h1.omega().get(1, 0), -&h1.ring().one());
    assert!(h1.omega().get(0, 0).is_zero());
    let h2 = ctx(5, 2);
    let w = h2.omega();
    assert_eq!(w.get(0, 2), h2.ring().one());
    assert_eq!(w.get(1, 3), h2.ring().one());
    assert!(w.get(0, 1).is_zero() && w.get(2, 3).is_zero() && w.get(0, 3).is_zero());
}

#[test]
fn d_h_examples() {
    let h = ctx(5, 1);
    let ring = h.ring();
    assert!(h.d_h(&ring.one()).unwrap().is_zero());
    assert_eq!(h.d_h(&ring.var(0)).unwrap(), Derivation::partial(ring, 1));
    let x1x2 = mono(&h, &[1, 1]);
    assert_eq!(h.d_h(&x1x2).unwrap(), der(vec![-&ring.var(0), ring.var(1)]));
}

#[test]
fn poisson_examples() {
    let h = ctx(5, 1);
    let ring = h.ring();
    assert_eq!(h.poisson(&ring.var(0), &ring.var(1)).unwrap(), ring.one());
    assert_eq!(h.poisson(&ring.var(1), &ring.var(0)).unwrap(), -&ring.one());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = ring.random(&mut rng);
    assert!(h.poisson(&f, &f).unwrap().is_zero());
}

#[test]
fn delta_examples() {
    let h = ctx(5, 1);
    let ring = h.ring();
    assert_eq!(h.delta(&Derivation::partial(ring, 1)).unwrap(), ring.var(0));
    let x1x2 = mono(&h, &[1, 1]);
    assert_eq!(h.delta(&der(vec![-&ring.var(0), ring.var(1)])).unwrap(), x1x2);
    assert!(h.delta(&Derivation::zero(ring)).unwrap().is_zero());
    assert_eq!(h.delta(&der(vec![ring.var(0), ring.zero()])), Err(Error::NotInImage));
}

#[test]
fn delta_matches_linear_solve() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (p, r) in [(5, 1), (7, 1), (5, 2)] {
        let h = ctx(p, r);
        let ring = h.ring();
        for _ in 0..4 {
            let f = ring.random(&mut rng);
            let d = h.d_h(&f).unwrap();
            let by_solve = delta_by_solve(&h, &d).unwrap();
            assert_eq!(h.delta(&d).unwrap(), by_solve);
            let mut centred = f.clone();
            centred.set_coeff(0, Scalar::ZERO);
            assert_eq!(by_solve, centred);
        }
        if r == 1 {
            let outside = Derivation::random(ring, &mut rng);
            assert_eq!(delta_by_solve(&h, &outside).is_some(), h.delta(&outside).is_ok());
        }
    }
}

#[test]
fn h_family_examples() {
    let h = ctx(5, 1);
    let ring = h.ring();
    let tau = ring.monomial(ring.tau(), Scalar::ONE);
    let d_tau = h.d_h(&tau).unwrap();
    assert_eq!(h.h_family(&d_tau).unwrap(), HFamily::HPrime);
    assert_eq!(h.delta(&d_tau).unwrap().coeff(ring.tau()), Scalar::ONE);
    assert_eq!(h.h_family(&der(vec![-&ring.var(0), ring.var(1)])).unwrap(), HFamily::H);
    let euler = der(vec![ring.var(0), ring.zero()]);
    assert_eq!(form_apply_derivation(&euler, h.omega()).unwrap(), *h.omega());
    assert_eq!(h.h_family(&euler).unwrap(), HFamily::Outside);
    // x_1^{p-1} ∂_2 is divergence-free with no potential: H'' but not H'.
    let top = der(vec![ring.zero(), mono(&h, &[4, 0])]);
    assert_eq!(h.h_family(&top).unwrap(), HFamily::HDoublePrime);
    let closed = der(vec![mono(&h, &[0, 4]), mono(&h, &[4, 0])]);
    assert!(h.in_h_double_prime(&closed).unwrap());
}

#[test]
fn basis_sizes_and_rank() {
    for (p, r, expected) in [(5, 1, 23), (7, 1, 47)] {
        let h = ctx(p, r);
        let basis = h.ham_basis();
        assert_eq!(basis.len(), expected);
        let rows: Vec<Vec<Scalar>> = basis.iter().map(|e| e.d.to_vec()).collect();
        assert_eq!(Matrix::from_rows(rows).unwrap().rank(h.field()), expected);
    }
}

#[test]
fn d_h_lands_in_h_double_prime_and_is_a_lie_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for r in [1, 2] {
        let h = ctx(5, r);
        let ring = h.ring();
        for _ in 0..10 {
            let f = ring.random(&mut rng);
            let g = ring.random(&mut rng);
            let df = h.d_h(&f).unwrap();
            assert!(form_apply_derivation(&df, h.omega()).unwrap().is_zero());
            let lhs = h.d_h(&h.poisson(&f, &g).unwrap()).unwrap();
            assert_eq!(lhs, df.bracket(&h.d_h(&g).unwrap()).unwrap());
        }
    }
}

#[test]
fn kernel_of_d_h_is_the_constants() {
    let h = ctx(5, 1);
    let ring = h.ring();
    let cols: Vec<Vec<Scalar>> = (0..ring.dim()).map(|a| h.d_h(&ring.monomial(a, Scalar::ONE)).unwrap().to_vec()).collect();
    let m = Matrix::from_columns(2 * ring.dim(), &cols).unwrap();
    assert_eq!(m.rank(h.field()), ring.dim() - 1);
}

#[test]
fn u_v_examples() {
    let h1 = ctx(5, 1);
    let (u, v) = h1.special_u_v();
    assert_eq!((u.clone(), v), (h1.ring().var(0), h1.ring().var(1)));
    assert_eq!(h1.delta(&h1.d_h(&u).unwrap()).unwrap(), u);

    let h2 = ctx(5, 2);
    let (u, v) = h2.special_u_v();
    assert_eq!(u, &mono(&h2, &[1, 0, 0, 0]) - &mono(&h2, &[0, 1, 4, 0]));
    assert_eq!(v, &mono(&h2, &[0, 0, 1, 0]) - &mono(&h2, &[4, 0, 0, 1]));
}

#[test]
fn subspace_e_examples() {
    let h1 = ctx(5, 1);
    let ring = h1.ring();
    let e: Vec<Derivation> = h1.subspace_e().into_iter().map(|x| x.d).collect();
    assert_eq!(e[0], Derivation::partial(ring, 1));
    assert_eq!(e[1], Derivation::partial(ring, 0).scale(h1.field().from_int(-1)));
    assert_eq!(e[2], der(vec![-&ring.var(0), ring.var(1)]));
    for r in [1, 2] {
        let h = ctx(5, r);
        let e = h.subspace_e();
        let rows: Vec<Vec<Scalar>> = e.iter().map(|x| x.d.to_vec()).collect();
        assert_eq!(Matrix::from_rows(rows).unwrap().rank(h.field()), r + 2);
        assert!(e.iter().all(|x| h.h_family(&x.d).unwrap() == HFamily::H));
    }
}

#[test]
fn s0_examples() {
    for r in [1, 2] {
        let h = ctx(5, r);
        let (u, _) = h.special_u_v();
        assert!(h.in_s0(&u));
        let mut e = vec![0; 2 * r];
        e[0] = 2;
        for j in r..2 * r {
            e[j] = 4;
        }
        let sign = if r % 2 == 1 { 1 } else { -1 };
        let g = &u + &mono(&h, &e).scale(h.field().from_int(sign));
        assert!(h.in_s0(&g));
        assert!(h.in_s0(&(&g + &h.ring().constant(h.field().from_int(3)))));
        let mut e2 = vec![0; 2 * r];
        e2[0] = 1;
        e2[r] = 1;
        assert!(!h.in_s0(&mono(&h, &e2)));
    }
}

#[test]
fn torus_generators_are_toral() {
    let h1 = ctx(5, 1);
    let ring = h1.ring();
    let t = &h1.torus_th()[0];
    assert_eq!(*t, der(vec![-&ring.var(0), &ring.one() + &ring.var(1)]));
    let f = ring.field().clone();
    let oracle = t.operator_matrix().pow(&f, 5).unwrap();
    assert_eq!(oracle, t.operator_matrix());
    let h2 = ctx(5, 2);
    for t in h2.torus_th() {
        assert_eq!(t.p_power(), t);
        assert_eq!(h2.h_family(&t).unwrap(), HFamily::H);
    }
    let w = crate::bn::Ring::new(f.clone(), 2).unwrap();
    for t in torus_tw(&w) {
        assert_eq!(t.p_power(), t);
    }
}

#[test]
fn simplicity_probe_r1() {
    let h = ctx(5, 1);
    assert_eq!(h.ideal_dimension(&h.ring().var(0)), 23);
    assert_eq!(h.ideal_dimension(&h.ring().zero()), 0);
    assert!(h.simplicity_probe(10, 3).iter().all(|&d| d == 23));
}
