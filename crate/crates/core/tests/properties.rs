use num_complex::Complex;
use proptest::prelude::*;
use spoly::apolarity::{apolar_pairing, pairing_field};
use spoly::domains::{invert_i_kappa, phi_kappa_transform, MoebiusMap};
use spoly::operators::{self as ops, tables, MonomialOperator};
use spoly::symbols::{algebraic_symbol, SymbolKind};
use spoly::{MultiIndex, Poly, C};

const TOL: f64 = 1e-9;

fn coeff() -> impl Strategy<Value = C<f64>> {
    (-3i32..=3, -3i32..=3).prop_map(|(a, b)| Complex::new(a as f64 * 0.5, b as f64 * 0.5))
}

/// Polynomial in `n` variables with every degree at most `d`.
fn poly_in(n: usize, d: u32) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0..=d, n), coeff()), 0..8).prop_map(move |terms| {
        Poly::from_terms(n, terms.into_iter().map(|(a, c)| (MultiIndex::new(a), c))).unwrap()
    })
}

fn sized_poly() -> impl Strategy<Value = Poly> {
    (1usize..=3).prop_flat_map(|n| poly_in(n, 2))
}

fn pair() -> impl Strategy<Value = (Poly, Poly)> {
    (1usize..=3).prop_flat_map(|n| (poly_in(n, 2), poly_in(n, 2)))
}

fn point(n: usize) -> impl Strategy<Value = Vec<C<f64>>> {
    prop::collection::vec((-1.5f64..1.5, -1.5f64..1.5).prop_map(|(a, b)| Complex::new(a, b)), n)
}

fn close(a: &Poly, b: &Poly) -> bool {
    a.max_distance(b) <= TOL * (1.0 + a.scale().max(b.scale()))
}

fn close_c(a: C<f64>, b: C<f64>, s: f64) -> bool {
    (a - b).norm() <= TOL * (1.0 + s)
}

fn kappa2(n: usize) -> MultiIndex {
    MultiIndex::new(vec![2; n])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn leibniz((f, g) in pair(), i in 0usize..3) {
        let i = i % f.nvars();
        let lhs = (&f * &g).partial_derivative(i, 1).unwrap();
        let rhs = &(&f.partial_derivative(i, 1).unwrap() * &g) + &(&f * &g.partial_derivative(i, 1).unwrap());
        prop_assert!(close(&lhs, &rhs));
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(((f, g), z) in pair().prop_flat_map(|fg| {
        let n = fg.0.nvars();
        (Just(fg), point(n))
    })) {
        let (fz, gz) = (f.evaluate(&z).unwrap(), g.evaluate(&z).unwrap());
        let s = f.eval_abs_scale(&z) * g.eval_abs_scale(&z) + f.eval_abs_scale(&z) + g.eval_abs_scale(&z);
        prop_assert!(close_c((&f * &g).evaluate(&z).unwrap(), fz * gz, s));
        prop_assert!(close_c((&f + &g).evaluate(&z).unwrap(), fz + gz, s));
    }

    #[test]
    fn restrict_line_matches_evaluation((f, base, dir, t) in sized_poly().prop_flat_map(|f| {
        let n = f.nvars();
        (Just(f), point(n), point(n), (-1.0f64..1.0, -1.0f64..1.0))
    })) {
        let line = f.restrict_line(&base, &dir).unwrap();
        let t = Complex::new(t.0, t.1);
        let z: Vec<C<f64>> = base.iter().zip(&dir).map(|(b, d)| b + t * d).collect();
        prop_assert!(close_c(line.evaluate(&[t]).unwrap(), f.evaluate(&z).unwrap(), 10.0 * f.eval_abs_scale(&z)));
    }

    #[test]
    fn symmetry_index_is_permutation_invariant(f in poly_in(3, 2), sigma in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let g = f.permute(&sigma).unwrap();
        prop_assert!((f.symmetry_index() - g.symmetry_index()).abs() <= 1e-12);
    }

    #[test]
    fn sym_is_idempotent_and_symmetric(f in sized_poly()) {
        let s = ops::sym(&f);
        prop_assert!(close(&ops::sym(&s), &s));
        if f.nvars() >= 2 {
            prop_assert!(close(&s.transpose(0, 1).unwrap(), &s));
        }
    }

    #[test]
    fn map_and_mod2_are_idempotent(f in sized_poly()) {
        let m = ops::map_multiaffine_part(&f);
        prop_assert!(m.is_multi_affine());
        prop_assert!(close(&ops::map_multiaffine_part(&m), &m));
        let q = ops::mod2_fold_all(&f);
        prop_assert!(close(&ops::mod2_fold_all(&q), &q));
    }

    #[test]
    fn depolarize_inverts_polarization(f in (1usize..=2).prop_flat_map(|n| poly_in(n, 2))) {
        let k = kappa2(f.nvars());
        let pol = ops::polarization(&f, &k).unwrap();
        prop_assert!(pol.is_multi_affine());
        prop_assert!(close(&ops::depolarize(&pol, &k).unwrap(), &f));
    }

    #[test]
    fn invert_i_is_an_involution(f in sized_poly()) {
        let k = kappa2(f.nvars());
        let once = invert_i_kappa(&f, &k).unwrap();
        prop_assert!(close(&invert_i_kappa(&once, &k).unwrap(), &f));
    }

    #[test]
    fn phi_identity_is_trivial(f in sized_poly()) {
        let k = kappa2(f.nvars());
        let maps = vec![MoebiusMap::identity(); f.nvars()];
        prop_assert!(close(&phi_kappa_transform(&f, &maps, &k).unwrap(), &f));
    }

    #[test]
    fn pairing_is_bilinear_and_graded_symmetric(((f, g), h, a) in pair().prop_flat_map(|fg| {
        let n = fg.0.nvars();
        (Just(fg), poly_in(n, 2), coeff())
    })) {
        let k = kappa2(f.nvars());
        let fg = apolar_pairing(&f, &g, &k).unwrap();
        let s = 1.0 + f.scale() * (g.scale() + h.scale()) * 10f64.powi(f.nvars() as i32);
        let lhs = apolar_pairing(&f, &(&g.scale_by(a) + &h), &k).unwrap();
        prop_assert!(close_c(lhs, a * fg + apolar_pairing(&f, &h, &k).unwrap(), s));
        let sign = if k.total() % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!(close_c(apolar_pairing(&g, &f, &k).unwrap(), fg * sign, s));
    }

    #[test]
    fn pairing_field_is_constant(((f, g), z) in pair().prop_flat_map(|fg| {
        let n = fg.0.nvars();
        (Just(fg), point(n))
    })) {
        let k = kappa2(f.nvars());
        let s = 1.0 + f.scale() * g.scale() * 100f64.powi(f.nvars() as i32);
        let pf = pairing_field(&f, &g, &k, &z).unwrap();
        prop_assert!(close_c(pf, apolar_pairing(&f, &g, &k).unwrap(), s));
    }

    #[test]
    fn symbol_is_linear_in_the_operator(n in 1usize..=2, a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let k = kappa2(n);
        let s = tables::sym::<f64>(k.clone()).unwrap();
        let m = tables::mod2::<f64>(k.clone()).unwrap();
        let combo = MonomialOperator::from_linear_map(k.clone(), n, |p| {
            Ok(&ops::sym(p).scale_by(Complex::new(a, 0.0)) + &ops::mod2_fold_all(p).scale_by(Complex::new(b, 0.0)))
        }).unwrap();
        for kind in [SymbolKind::HalfPlaneAdd, SymbolKind::DiskProduct] {
            let lhs = algebraic_symbol(&combo, &k, kind).unwrap();
            let rhs = &algebraic_symbol(&s, &k, kind).unwrap().scale_by(Complex::new(a, 0.0))
                + &algebraic_symbol(&m, &k, kind).unwrap().scale_by(Complex::new(b, 0.0));
            prop_assert!(close(&lhs, &rhs));
        }
    }

    #[test]
    fn text_and_json_round_trip(f in sized_poly()) {
        let back = Poly::parse(&f.format(), Some(f.nvars())).unwrap();
        prop_assert!(close(&back, &f));
        let json = Poly::from_json(&f.to_json()).unwrap();
        prop_assert!(close(&json, &f));
    }
}
