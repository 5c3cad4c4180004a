//! Worked examples across the public API.

use num_complex::Complex;
use spoly::apolarity::{apolar_pairing, grace_check, pairing_field, AuditOptions, GraceVariant};
use spoly::domains::{invert_i_kappa, phi_kappa_transform, CircularDomain, DomainProduct, MoebiusMap};
use spoly::multiplier::{factor_diagonal_stable, hurwitz_multiplier, is_kappa_multiplier, FactorOutcome};
use spoly::operators::{self as ops, tables, DiagonalSequence, LiebSokalVariant, MonomialOperator};
use spoly::stability::{check, falsify, stable_univariate, univariate_roots, Mode, Verdict};
use spoly::statmech::{
    edge_reweight, hilfssatz_truncated, ising_brute_force, matching_polynomial, wagner, zero_locus_scan,
    CouplingMatrix, ScanFamily, WeightedGraph,
};
use spoly::symbols::{algebraic_symbol, transcendental_symbol_of, Sign, SymbolKind};
use spoly::{MultiIndex, Poly, C};

fn p(s: &str) -> Poly {
    Poly::parse(s, None).unwrap()
}

fn pn(s: &str, n: usize) -> Poly {
    Poly::parse(s, Some(n)).unwrap()
}

fn c(re: f64, im: f64) -> C<f64> {
    Complex::new(re, im)
}

fn k(v: &[u32]) -> MultiIndex {
    MultiIndex::new(v.to_vec())
}

#[track_caller]
fn same(a: &Poly, b: &Poly) {
    assert!(a.max_distance(b) <= 1e-12, "{a}  vs  {b}");
}

#[test]
fn ring_and_calculus() {
    same(&(&p("1+z") * &p("1+z")), &p("1+2z+z^2"));
    assert!((&p("1+z1*z2") + &p("-1-z1*z2").embed(2, &[0, 1]).unwrap()).is_zero());
    let k3 = &(&pn("1+z1*z2", 3) * &pn("1+z1*z3", 3)) * &pn("1+z2*z3", 3);
    same(
        &k3,
        &p("1+z1*z2+z1*z3+z2*z3+z1^2*z2*z3+z1*z2^2*z3+z1*z2*z3^2+z1^2*z2^2*z3^2"),
    );
    assert!(p("z1*z2+1").evaluate(&[c(0.0, 1.0), c(0.0, 1.0)]).unwrap().norm() < 1e-15);
    assert_eq!(p("1+2z+z^2").evaluate(&[c(1.0, 0.0)]).unwrap(), c(4.0, 0.0));
    same(&p("z1*z2").partial_derivative(0, 1).unwrap(), &pn("z2", 2));
    same(&p("(1+z)^2").partial_derivative(0, 1).unwrap(), &p("2+2z"));
    let line = p("z1*z2+1").restrict_line(&[c(0.0, 0.0); 2], &[c(1.0, 0.0); 2]).unwrap();
    same(&line, &p("z^2+1"));
    same(&p("(z1+z2)*(z1+2*z2)+5").homogeneous_part().unwrap(), &p("z1^2+3*z1*z2+2*z2^2"));
    assert_eq!(pn("2*z1", 2).symmetry_index(), 2.0);
    assert_eq!(pn("z1^2*z2", 2).symmetry_index(), 1.0);
    assert_eq!(Poly::zero(1).to_string(), "0");
}

#[test]
fn domains_and_transforms() {
    assert!(CircularDomain::<f64>::upper_half_plane().contains(c(0.0, 1.0)));
    assert!(!CircularDomain::<f64>::unit_disk().contains(c(1.0, 0.0)));
    assert!(CircularDomain::<f64>::unit_exterior().closed().contains(c(1.0, 0.0)));
    let b = c(0.5, -2.0);
    let t = MoebiusMap::translation(b);
    same(&phi_kappa_transform(&p("z"), &[t], &k(&[1])).unwrap(), &(&p("z") + &Poly::constant(1, b)));
    let inv = MoebiusMap::new(c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)).unwrap();
    same(&phi_kappa_transform(&p("z+1"), &[inv], &k(&[1])).unwrap(), &p("z-1"));
    same(&invert_i_kappa(&p("1"), &k(&[2])).unwrap(), &p("z^2"));
    same(&invert_i_kappa(&pn("z1", 2), &k(&[1, 1])).unwrap(), &pn("z2", 2));
    let omega = DomainProduct::<f64>::parse("disk:0,0,1;exterior:1,1,2:closed", 2).unwrap();
    assert_eq!(omega.len(), 2);
}

#[test]
fn catalog_examples() {
    same(&ops::sym(&pn("z1", 2)), &p("0.5*z1+0.5*z2"));
    same(&ops::sym(&p("z1^2*z2")), &p("0.5*z1^2*z2+0.5*z1*z2^2"));
    same(&ops::partial_swap(&p("1+2*z1+z2+z1*z2"), 0.5, 0, 1).unwrap(), &p("1+1.5*z1+1.5*z2+z1*z2"));
    same(&ops::polarization(&p("1+2z+z^2"), &k(&[2])).unwrap(), &p("1+z1+z2+z1*z2"));
    let k3 = p("(1+z1*z2)*(1+z1*z3)*(1+z2*z3)");
    same(&ops::map_multiaffine_part(&k3), &p("1+z1*z2+z1*z3+z2*z3"));
    same(&ops::mod2_fold(&p("1+2*z1*z2+z1^2*z2^2"), &[0]).unwrap(), &p("1+2*z1*z2+z2^2"));
    same(&ops::asano_contract(&p("2+z1+z2+z1*z2"), 0, 1).unwrap(), &pn("2+z1", 2));
    same(
        &ops::schur_hadamard(&p("1+z1*z2"), &p("1+z1+z2+z1*z2"), &k(&[1, 1])).unwrap(),
        &p("1+z1*z2"),
    );
    same(&ops::convolution_star(&p("1+z1"), &p("1+z1")).unwrap(), &p("2+2*z1"));
    same(&ops::hard_lieb_sokal(&p("z1*z2"), LiebSokalVariant::T, 1).unwrap(), &p("z1+z2"));
    same(&ops::hard_lieb_sokal(&p("z1+z2"), LiebSokalVariant::S, 1).unwrap(), &pn("2", 2));
    same(&ops::hard_lieb_sokal(&p("z1*z2"), LiebSokalVariant::R, 1).unwrap(), &pn("-1", 2));
    same(&ops::weyl_product(&p("z1"), &p("z1"), &[0], &[0], &[1.0]).unwrap(), &p("z1^2-1"));
    same(&ops::de_bruijn_product(&p("z"), &p("z"), -1.0).unwrap(), &p("z^2-1"));
    same(&ops::real_part_operator(&p("(z+i)^2")), &p("z^2-1"));
    same(&ops::lieb_sokal_substitute(&[p("z1^2")], &[p("z1^3")]).unwrap(), &p("6*z1"));
    let (out, trace) = ops::iterate_transposition_averages(&pn("z1", 2), 1, 0);
    same(&out, &p("0.5*z1+0.5*z2"));
    assert_eq!(trace, vec![1.0, 0.0]);
}

#[test]
fn symbols() {
    let id = MonomialOperator::<f64>::identity(k(&[1]));
    same(&algebraic_symbol(&id, &k(&[1]), SymbolKind::HalfPlaneAdd).unwrap(), &p("z1+z2"));
    let d = tables::derivative::<f64>(k(&[2]), 0).unwrap();
    same(&algebraic_symbol(&d, &k(&[2]), SymbolKind::HalfPlaneAdd).unwrap(), &p("2*z1+2*z2"));
    let m = tables::mod2::<f64>(k(&[2])).unwrap();
    same(&algebraic_symbol(&m, &k(&[2]), SymbolKind::DiskProduct).unwrap(), &p("1+2*z1*z2+z2^2"));
    let id3 = MonomialOperator::<f64>::identity(k(&[3]));
    let t = transcendental_symbol_of(&id3, 3, Sign::Minus).unwrap();
    same(&t.poly, &p("1 - z1*z2 + 0.5*z1^2*z2^2 - 0.16666666666666666*z1^3*z2^3"));
}

#[test]
fn stability_examples() {
    let roots = univariate_roots(&p("(z-3)*(z-5)")).unwrap();
    let mut re: Vec<f64> = roots.iter().map(|r| r.re).collect();
    re.sort_by(f64::total_cmp);
    assert!((re[0] - 3.0).abs() < 1e-12 && (re[1] - 5.0).abs() < 1e-12);
    let h0 = CircularDomain::<f64>::upper_half_plane();
    assert!(stable_univariate(&p("z^2+1"), &h0).unwrap().is_falsified());
    assert!(stable_univariate(&p("(1+z)^2"), &h0).unwrap().is_certified());
    assert!(stable_univariate(&p("1+z+z^2"), &CircularDomain::unit_disk()).unwrap().is_certified());
    let h2 = DomainProduct::broadcast(h0, 2);
    match falsify(&p("z1*z2+1"), &h2, 10_000, 1) {
        Verdict::Falsified { witness, .. } => assert!(h2.contains(&witness)),
        v => panic!("{v:?}"),
    }
    assert!(falsify(&p("z1+z2"), &h2, 2_000, 1).is_unknown());
    let d2 = DomainProduct::broadcast(CircularDomain::unit_disk(), 2);
    assert!(!falsify(&p("1+0.5*z1+0.5*z2+z1*z2"), &d2, 10_000, 2).is_falsified());
    assert!(check(&p("z1*z2+z1+z2"), &h2, Mode::Auto, 1_000, 0).unwrap().is_certified());
}

#[test]
fn apolarity_examples() {
    assert_eq!(apolar_pairing(&p("1+z"), &p("1-z"), &k(&[1])).unwrap(), c(-2.0, 0.0));
    assert_eq!(apolar_pairing(&p("(1+z)^2"), &p("z^2"), &k(&[2])).unwrap(), c(2.0, 0.0));
    assert_eq!(apolar_pairing(&p("z1+z2"), &pn("1", 2), &k(&[1, 1])).unwrap(), c(0.0, 0.0));
    let f = pairing_field(&p("(1+z)^2"), &p("z^2"), &k(&[2]), &[c(0.3, -1.7)]).unwrap();
    assert!((f - c(2.0, 0.0)).norm() < 1e-12);
    let disk = DomainProduct::broadcast(CircularDomain::disk(c(1.0, 0.0), 1.0).unwrap(), 1);
    let r = grace_check(
        &p("(z-1)^2"),
        &p("(z+1)^2"),
        &k(&[2]),
        &disk,
        None,
        GraceVariant::Univariate,
        &AuditOptions::default(),
    )
    .unwrap();
    assert!((r.pairing - c(8.0, 0.0)).norm() < 1e-12);
}

#[test]
fn multiplier_examples() {
    match factor_diagonal_stable(&p("(-1+z1*z3)*(-2+z2*z4)")).unwrap() {
        FactorOutcome::Factored(f) => assert!(f.roots_real_nonneg),
        o => panic!("{:?}", o.to_json()),
    }
    assert!(matches!(
        factor_diagonal_stable(&p("z1*z3+z2*z4")).unwrap(),
        FactorOutcome::NotFactorizable { .. }
    ));
    let lam = DiagonalSequence::univariate(&[0.0, 1.0, 2.0, 3.0]).unwrap();
    assert!(is_kappa_multiplier(&lam, &k(&[3])).unwrap().verdict);
    let gap = DiagonalSequence::univariate(&[1.0, 0.0, 1.0]).unwrap();
    assert!(!is_kappa_multiplier(&gap, &k(&[2])).unwrap().verdict);
    let map = DiagonalSequence::univariate(&[1.0, 1.0, 0.0]).unwrap();
    assert!(hurwitz_multiplier(&map, &k(&[2])).unwrap().verdict);
    assert!(!hurwitz_multiplier(&gap, &k(&[2])).unwrap().verdict);
}

#[test]
fn lattice_examples() {
    let e1 = 1.0f64.exp();
    let p2 = p("(1+z1)*(1+z2)");
    let r = edge_reweight(&p2, 0, 1, 1.0).unwrap();
    let want = &p("1+z1*z2").scale_by(c(e1, 0.0)) + &p("z1+z2").scale_by(c(1.0 / e1, 0.0));
    assert!(r.relative_distance(&want) <= 1e-12);
    let zero = ising_brute_force(&CouplingMatrix::new(vec![vec![0.0; 3]; 3]).unwrap()).unwrap();
    same(&zero, &p("(1+z1)*(1+z2)*(1+z3)"));
    let k3 = WeightedGraph::<f64>::complete(3);
    same(&matching_polynomial(&k3), &p("1+z1*z2+z1*z3+z2*z3"));
    same(&matching_polynomial(&WeightedGraph::<f64>::new(3, vec![]).unwrap()), &pn("1", 3));
    let u = vec![vec![1.0, 1.0, 0.0]; 3];
    let w = wagner(&k3, &k(&[2, 2, 2]), &u).unwrap();
    same(&w.univariate, &p("1+3*z"));
    let ones = vec![vec![1.0; 3]; 3];
    same(&wagner(&k3, &k(&[2, 2, 2]), &ones).unwrap().univariate, &p("(1+z)^3"));
    same(&hilfssatz_truncated(&p("z^2"), 1.0, 0.0).unwrap(), &p("2*z^2-2"));
    let g = hilfssatz_truncated(&p("z"), 1.0, std::f64::consts::FRAC_PI_2).unwrap();
    assert!(g.max_distance(&p("-2")) < 1e-12);
    let rows = zero_locus_scan(&p("(1+z1)^2*(1+z2)"), ScanFamily::Diagonal, &[1.0]).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| (r.root - c(-1.0, 0.0)).norm() < 1e-8));
}
