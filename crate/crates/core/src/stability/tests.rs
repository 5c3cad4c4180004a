use super::*;
use crate::domains::{CircularDomain, DomainProduct};
use crate::Poly;
use num_complex::Complex;

type D = CircularDomain<f64>;

fn p(s: &str) -> Poly {
    s.parse().unwrap()
}

fn pn(s: &str, n: usize) -> Poly {
    Poly::parse(s, Some(n)).unwrap()
}

fn c(re: f64, im: f64) -> C<f64> {
    Complex::new(re, im)
}

fn sorted(mut v: Vec<C<f64>>) -> Vec<C<f64>> {
    v.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    v
}

#[test]
fn univariate_roots_examples() {
    let r = sorted(univariate_roots(&p("z^2+1")).unwrap());
    assert!((r[0] - c(0.0, -1.0)).norm() < 1e-12 && (r[1] - c(0.0, 1.0)).norm() < 1e-12);
    let r = sorted(univariate_roots(&p("(z-3)*(z-5)")).unwrap());
    assert!((r[0] - c(3.0, 0.0)).norm() < 1e-12 && (r[1] - c(5.0, 0.0)).norm() < 1e-12);
    for r in univariate_roots(&p("1+z+z^2")).unwrap() {
        assert!((r.norm() - 1.0).abs() < 1e-12);
        assert!((r.re + 0.5).abs() < 1e-12);
    }
    assert!(univariate_roots(&p("7")).unwrap().is_empty());
    assert!(univariate_roots(&Poly::zero(1)).is_err());
    assert!(univariate_roots(&p("z1*z2")).is_err());
}

#[test]
fn stable_univariate_examples() {
    let v = stable_univariate(&p("z^2+1"), &D::upper_half_plane()).unwrap();
    assert!((v.witness().unwrap()[0] - c(0.0, 1.0)).norm() < 1e-12);
    assert!(stable_univariate(&p("(1+z)^2"), &D::upper_half_plane()).unwrap().is_certified());
    assert!(stable_univariate(&p("1+z+z^2"), &D::unit_disk()).unwrap().is_certified());
    assert!(stable_univariate(&p("1+z+z^2"), &D::unit_disk().closed()).unwrap().is_falsified());
}

#[test]
fn peacy_examples() {
    let r = bivariate_criteria(&p("1+z1+z2+z1*z2"), BivariateCriterion::Peacy).unwrap();
    assert!(r.verdict.is_certified());
    let r = bivariate_criteria(&p("1+z1*z2"), BivariateCriterion::Peacy).unwrap();
    let w = r.verdict.witness().unwrap();
    assert!((w[0] - c(0.0, 1.0)).norm() < 1e-12 && (w[1] - c(0.0, 1.0)).norm() < 1e-12);
    assert!(bivariate_criteria(&p("1+i*z1*z2"), BivariateCriterion::Peacy).is_err());
}

#[test]
fn easypeacy_examples() {
    let r = bivariate_criteria(&p("1+2*z+z^2"), BivariateCriterion::EasyPeacy).unwrap();
    assert!(r.verdict.is_certified());
    let r = bivariate_criteria(&p("1+z^2"), BivariateCriterion::EasyPeacy).unwrap();
    assert!((r.verdict.witness().unwrap()[0] - c(0.0, 1.0)).norm() < 1e-12);
    let r = bivariate_criteria(&p("-1-z^2"), BivariateCriterion::EasyPeacy).unwrap();
    assert!((r.verdict.witness().unwrap()[0] - c(0.0, 1.0)).norm() < 1e-12);
}

#[test]
fn lemma_max_examples() {
    let r = bivariate_criteria(&p("(z1+i)*(z2+i)"), BivariateCriterion::LemmaMax).unwrap();
    assert_eq!(r.verdict, Verdict::Certified { closure: Closure::Closed });
    let v1 = r.diagnostics.iter().find(|d| d.0 == "min V1").unwrap().1;
    assert!((v1 - 1.0).abs() < 1e-12);
    // real coefficients: Im(b/d) = Im(c/d) = 0, never closed-stable
    let r = bivariate_criteria(&p("1+z1+z2+z1*z2"), BivariateCriterion::LemmaMax).unwrap();
    let w = r.verdict.witness().unwrap().to_vec();
    let hp = D::upper_half_plane().closed();
    assert!(hp.contains(w[0]) && hp.contains(w[1]));
    assert!(p("1+z1+z2+z1*z2").evaluate(&w).unwrap().norm() < 1e-12);
    let r = bivariate_criteria(&p("1+z1*z2"), BivariateCriterion::LemmaMax).unwrap();
    assert!(r.verdict.is_falsified());
    let r = bivariate_criteria(&p("z1+z2+2*i"), BivariateCriterion::LemmaMax).unwrap();
    assert!(r.verdict.is_certified());
    let r = bivariate_criteria(&p("z1-z2+2*i"), BivariateCriterion::LemmaMax).unwrap();
    assert!(r.verdict.is_falsified());
}

#[test]
fn lemma_max_agrees_with_falsifier() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    let omega = DomainProduct::broadcast(D::upper_half_plane(), 2);
    let mut certified = 0;
    for k in 0..500 {
        let mut g = || c(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0);
        let (a, b, cc, d) = (g(), g(), g(), g());
        let f = Poly::from_terms(
            2,
            vec![
                (MultiIndex::new(vec![0, 0]), a),
                (MultiIndex::new(vec![1, 0]), b),
                (MultiIndex::new(vec![0, 1]), cc),
                (MultiIndex::new(vec![1, 1]), d),
            ],
        )
        .unwrap();
        let r = bivariate_criteria(&f, BivariateCriterion::LemmaMax).unwrap();
        match r.verdict {
            Verdict::Certified { .. } => {
                certified += 1;
                assert!(falsify(&f, &omega, 2000, k).is_unknown(), "{f}");
            }
            Verdict::Falsified { witness, value } => {
                let hp = D::upper_half_plane().closed();
                assert!(hp.contains(witness[0]) && hp.contains(witness[1]));
                assert!(value <= witness_tolerance(&f));
            }
            Verdict::Unknown { .. } => {}
        }
    }
    assert!(certified > 0);
}

#[test]
fn falsify_examples() {
    let omega = DomainProduct::broadcast(D::upper_half_plane(), 2);
    let v = falsify(&p("z1*z2+1"), &omega, 10_000, 1);
    let w = v.witness().expect("zero exists");
    assert!(omega.contains(w));
    assert!(p("z1*z2+1").evaluate(w).unwrap().norm() <= witness_tolerance(&p("z1*z2+1")));
    assert!(falsify(&p("z1+z2"), &omega, 10_000, 1).is_unknown());
    let disk2 = DomainProduct::broadcast(D::unit_disk(), 2);
    let lee_yang = pn("1+(0.3+0.4i)*z1+(0.3-0.4i)*z2+z1*z2", 2);
    assert!(falsify(&lee_yang, &disk2, 10_000, 5).is_unknown());
    let bad = pn("1+2*z1*z2", 2);
    assert!(falsify(&bad, &disk2, 10_000, 5).is_falsified());
    let ext = DomainProduct::broadcast(D::unit_exterior(), 2);
    assert!(falsify(&pn("1+z1*z2", 2), &ext, 10_000, 5).is_unknown());
    assert!(falsify(&pn("1+0.5*z1*z2", 2).scale_by(c(1.0, 0.0)), &ext, 2_000, 5).is_falsified());
}

#[test]
fn falsify_is_deterministic_across_threads() {
    let omega = DomainProduct::broadcast(D::unit_disk(), 3);
    let f = pn("1+z1+z2*z3+0.9*z1*z2*z3-0.7*z2", 3);
    let a = falsify(&f, &omega, 3000, 9);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| falsify(&f, &omega, 3000, 9));
    assert_eq!(a, b);
    let g = pn("3+z1+z2+z3", 3);
    let a = falsify(&g, &omega, 1000, 2);
    let b = pool.install(|| falsify(&g, &omega, 1000, 2));
    assert_eq!(a, b);
    assert!(a.is_unknown());
}

#[test]
fn symmetric_multiaffine_examples() {
    let v = certify_symmetric_multiaffine(&p("z1*z2+z1+z2"), &D::upper_half_plane(), None, 0).unwrap();
    assert!(v.is_certified());
    let v = certify_symmetric_multiaffine(&p("z1*z2+1"), &D::upper_half_plane(), None, 0).unwrap();
    let w = v.witness().unwrap();
    assert!((w[0] - c(0.0, 1.0)).norm() < 1e-12 && (w[1] - c(0.0, 1.0)).norm() < 1e-12);
    let v = certify_symmetric_multiaffine(&p("(1+z1)*(1+z2)"), &D::unit_disk(), None, 0).unwrap();
    assert!(v.is_certified());
    assert!(matches!(
        certify_symmetric_multiaffine(&p("z1+2*z2"), &D::unit_disk(), None, 0),
        Err(Error::NotSymmetric(_))
    ));
    assert!(certify_symmetric_multiaffine(&p("z1^2+z2"), &D::unit_disk(), None, 0).is_err());
    assert!(certify_symmetric_multiaffine(&p("1+z1+z2"), &D::unit_exterior(), None, 0).is_err());
    let blocks = MultiIndex::new(vec![2, 1]);
    let f = pn("(z1+z2+2)*(z3+3)", 3);
    let v = certify_symmetric_multiaffine(&f, &D::unit_disk(), Some(&blocks), 0).unwrap();
    assert!(v.is_unknown());
}

#[test]
fn krein_examples() {
    let r = krein_real_stable(&p("z"), &p("1").cast(), 2000, 0).unwrap();
    assert!(r.consistent && !r.direct.is_falsified());
    let r = krein_real_stable(&p("z^2-1"), &p("2*z"), 4000, 0).unwrap();
    assert!(r.consistent && !r.direct.is_falsified() && !r.lifted.is_falsified());
    let lifted = pn("z1^2+2*z1*z2-1", 2);
    assert!(real_stable_consistent(&lifted, 200, 3).unwrap());
    let r = krein_real_stable(&p("z^2+1"), &pn("1", 1), 4000, 0).unwrap();
    assert!(r.consistent && r.direct.is_falsified() && r.lifted.is_falsified());
    assert!(krein_real_stable(&p("i*z"), &pn("1", 1), 10, 0).is_err());
}

#[test]
fn same_phase_examples() {
    assert_eq!(same_phase_check(&p("z1^2+3*z1*z2+2*z2^2")).unwrap(), (true, 0.0));
    let (ok, a) = same_phase_check(&p("i*(z1+z2)")).unwrap();
    assert!(ok && (a - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    assert!(!same_phase_check(&p("z1-z2")).unwrap().0);
    assert!(matches!(same_phase_check(&p("1+z")), Err(Error::NotHomogeneous)));
}

#[test]
fn real_stable_lines() {
    assert!(real_stable_consistent(&p("(z1+z2)*(z1+2*z2+1)"), 200, 0).unwrap());
    assert!(!real_stable_consistent(&p("1+z1*z2"), 200, 0).unwrap());
    assert!(real_stable_consistent(&p("(z1+z2)^3"), 200, 0).unwrap());
}

#[test]
fn auto_mode_routes() {
    let h2 = DomainProduct::broadcast(D::upper_half_plane(), 2);
    assert!(check(&p("(z1+i)*(z2+i)"), &h2, Mode::Auto, 100, 0).unwrap().is_certified());
    assert!(check(&p("z1*z2+1"), &h2, Mode::Auto, 100, 0).unwrap().is_falsified());
    let h1 = DomainProduct::broadcast(D::upper_half_plane(), 1);
    assert_eq!(check(&p("z^2+1"), &h1, Mode::Auto, 100, 0).unwrap().exit_code(), 1);
    let h3 = DomainProduct::broadcast(D::upper_half_plane(), 3);
    let f = pn("z1+z2+z3+1", 3);
    assert!(check(&f, &h3, Mode::Auto, 100, 0).unwrap().is_certified());
    let g = pn("z1+2*z2+z3", 3);
    assert!(check(&g, &h3, Mode::Certify, 100, 0).unwrap().is_unknown());
    assert!(check(&g, &h3, Mode::Falsify, 1000, 0).unwrap().is_unknown());
    // a polynomial in one active variable of several
    let v = check(&pn("z2^2+1", 3), &h3, Mode::Auto, 100, 0).unwrap();
    assert!(h3.contains(v.witness().unwrap()));
}

#[test]
fn f32_falsify() {
    let f: Polynomial<f32> = "z1*z2+1".parse().unwrap();
    let omega = DomainProduct::broadcast(CircularDomain::<f32>::upper_half_plane(), 2);
    assert!(falsify(&f, &omega, 1000, 1).is_falsified());
}
