//! Algebraic and truncated transcendental symbols of linear operators, and
//! stability-preservation verdicts derived from them.

use nalgebra::{Complex as NC, DMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::domains::{CircularDomain, Closure, DomainKind, DomainProduct};
use crate::error::{Error, Result};
use crate::generators::domain_stable;
use crate::operators::MonomialOperator;
use crate::poly::{MultiIndex, Polynomial};
use crate::scalar::{cone, creal, czero, factorial, Real, C};
use crate::stability::{check, falsify, krein_real_stable, Mode, Verdict};

/// Relative singular-value threshold for the operator rank.
pub const RANK_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    /// `T[(z+w)^κ] = Σ C(κ,α) T(z^α) w^{κ−α}`.
    HalfPlaneAdd,
    /// `T[(1+zw)^κ] = Σ C(κ,α) T(z^α) w^α`.
    DiskProduct,
    /// `T[(z+w)^κ]`, read as a real-stability symbol.
    RealPlus,
    /// `T[(z−w)^κ]`.
    RealMinus,
    /// `T[e^{±z·w}]` truncated at `w`-degree `order`.
    Transcendental { order: u32, sign: Sign },
}

impl std::str::FromStr for SymbolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "halfplane" => SymbolKind::HalfPlaneAdd,
            "disk" => SymbolKind::DiskProduct,
            "real+" => SymbolKind::RealPlus,
            "real-" => SymbolKind::RealMinus,
            _ => {
                let rest = s
                    .strip_prefix("transcendental:")
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown symbol kind {s:?}")))?;
                let (num, sign) = match rest.strip_suffix(":+") {
                    Some(r) => (r, Sign::Plus),
                    None => match rest.strip_suffix(":-") {
                        Some(r) => (r, Sign::Minus),
                        None => (rest, Sign::Minus),
                    },
                };
                let order = num
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad truncation order {num:?}")))?;
                SymbolKind::Transcendental { order, sign }
            }
        })
    }
}

/// Truncation of a transcendental symbol: all terms of `w`-total-degree
/// `≤ order`. Variables are `z_1..z_m` (output) then `w_1..w_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<T: Real> {
    pub order: u32,
    pub sign: Sign,
    pub poly: Polynomial<T>,
}

fn w_monomial<T: Real>(m: usize, exps: &[u32], c: C<T>) -> Polynomial<T> {
    let n = exps.len();
    let mut e = vec![0u32; m + n];
    e[m..].copy_from_slice(exps);
    Polynomial::monomial(m + n, MultiIndex::new(e), c)
}

fn lift_z<T: Real>(p: &Polynomial<T>, n: usize) -> Result<Polynomial<T>> {
    let m = p.nvars();
    let map: Vec<usize> = (0..m).collect();
    p.embed(m + n, &map)
}

/// Algebraic symbol in `out_nvars + n` variables (`z` block first).
pub fn algebraic_symbol<T: Real>(
    t: &MonomialOperator<T>,
    kappa: &MultiIndex,
    kind: SymbolKind,
) -> Result<Polynomial<T>> {
    if t.kappa() != kappa {
        return Err(Error::Shape(format!(
            "operator κ {:?} differs from {:?}",
            t.kappa().as_slice(),
            kappa.as_slice()
        )));
    }
    let m = t.out_nvars();
    let n = kappa.len();
    let mut acc = Polynomial::zero(m + n);
    for alpha in kappa.box_below() {
        let img = t.image(&alpha);
        if img.is_zero() {
            continue;
        }
        let rest = kappa.checked_sub(&alpha).expect("α ≤ κ");
        let b: T = kappa.binomial(&alpha);
        let (exps, sign) = match kind {
            SymbolKind::HalfPlaneAdd | SymbolKind::RealPlus => (rest.clone(), T::one()),
            SymbolKind::RealMinus => (
                rest.clone(),
                if rest.total() % 2 == 0 { T::one() } else { -T::one() },
            ),
            SymbolKind::DiskProduct => (alpha.clone(), T::one()),
            SymbolKind::Transcendental { .. } => {
                return Err(Error::InvalidArgument(
                    "use transcendental_symbol for truncated series".into(),
                ))
            }
        };
        let w = w_monomial(m, exps.as_slice(), creal(b * sign));
        acc = &acc + &(&lift_z(&img, n)? * &w);
    }
    Ok(acc)
}

/// `Σ_{|α| ≤ N} (∓1)^{|α|} T(z^α) w^α / α!` for an operator given by a rule
/// on monomials of `n` variables with images in `out_nvars` variables.
pub fn transcendental_symbol<T: Real, F>(
    rule: F,
    n: usize,
    out_nvars: usize,
    order: u32,
    sign: Sign,
) -> Result<TruncatedSeries<T>>
where
    F: Fn(&MultiIndex) -> Result<Polynomial<T>>,
{
    let bound = MultiIndex::new(vec![order; n]);
    let mut acc = Polynomial::zero(out_nvars + n);
    for alpha in bound.box_below() {
        if alpha.total() > order {
            continue;
        }
        let img = rule(&alpha)?;
        if img.nvars() != out_nvars {
            return Err(Error::NvarsMismatch(out_nvars, img.nvars()));
        }
        if img.is_zero() {
            continue;
        }
        let neg = sign == Sign::Minus && alpha.total() % 2 == 1;
        let c = T::one() / alpha.factorial::<T>();
        let w = w_monomial(out_nvars, alpha.as_slice(), creal(if neg { -c } else { c }));
        acc = &acc + &(&lift_z(&img, n)? * &w);
    }
    Ok(TruncatedSeries {
        order,
        sign,
        poly: acc,
    })
}

/// Transcendental symbol of a tabulated operator; every `α` with
/// `|α| ≤ order` must lie in the table's box.
pub fn transcendental_symbol_of<T: Real>(
    t: &MonomialOperator<T>,
    order: u32,
    sign: Sign,
) -> Result<TruncatedSeries<T>> {
    let kappa = t.kappa().clone();
    transcendental_symbol(
        |a| {
            if a.le(&kappa) {
                Ok(t.image(a))
            } else {
                Err(Error::DegreeExceeds {
                    degree: a.as_slice().to_vec(),
                    bound: kappa.as_slice().to_vec(),
                })
            }
        },
        t.nvars(),
        t.out_nvars(),
        order,
        sign,
    )
}

/// Numerical rank of the coefficient matrix (singular values above
/// `RANK_TOL` times the largest).
pub fn operator_rank<T: Real>(t: &MonomialOperator<T>) -> usize {
    let (rows, cols, m) = t.coefficient_matrix();
    if rows.is_empty() || cols.is_empty() {
        return 0;
    }
    let mat = DMatrix::from_fn(rows.len(), cols.len(), |i, j| NC::new(m[i][j].re.f64(), m[i][j].im.f64()));
    let sv = mat.singular_values();
    let top = sv.iter().cloned().fold(0.0f64, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > RANK_TOL * top).count()
}

#[derive(Clone, Debug, PartialEq)]
pub enum Preservation<T: Real> {
    /// The symbol is stable by an exact criterion.
    PreservesCertified,
    /// The symbol survived the falsifier.
    PreservesLikely,
    /// The symbol has a zero, but the range is one-dimensional and spanned
    /// by a stable polynomial.
    RankOneBranch(Polynomial<T>),
    /// A stable input whose image has a verified zero (when one was found).
    NotPreserving {
        witness: Option<(Polynomial<T>, Polynomial<T>, Vec<C<T>>)>,
    },
}

#[derive(Clone, Debug)]
pub struct PreservationReport<T: Real> {
    pub verdict: Preservation<T>,
    pub kind: SymbolKind,
    pub symbol: Polynomial<T>,
    pub symbol_verdict: Verdict<T>,
    pub rank: usize,
    /// For rank two: whether two range elements `P`, `Q` give a stable
    /// `P + iQ` (reported only).
    pub rank_two_pair_stable: Option<bool>,
}

impl<T: Real> PreservationReport<T> {
    pub fn to_json(&self) -> Value {
        let verdict = match &self.verdict {
            Preservation::PreservesCertified => json!({"verdict": "preserves-certified"}),
            Preservation::PreservesLikely => json!({"verdict": "preserves-likely"}),
            Preservation::RankOneBranch(p) => json!({"verdict": "rank-one-branch", "image": p.to_string()}),
            Preservation::NotPreserving { witness } => match witness {
                Some((f, g, z)) => json!({
                    "verdict": "not-preserving",
                    "input": f.to_string(),
                    "image": g.to_string(),
                    "zero": z.iter().map(|c| json!([c.re.f64(), c.im.f64()])).collect::<Vec<_>>(),
                }),
                None => json!({"verdict": "not-preserving", "input": null}),
            },
        };
        json!({
            "result": verdict,
            "kind": format!("{:?}", self.kind),
            "symbol": self.symbol.to_string(),
            "symbol_stability": self.symbol_verdict.to_json(),
            "rank": self.rank,
            "rank_two_pair_stable": self.rank_two_pair_stable,
        })
    }
}

fn symbol_kind_for<T: Real>(domain: &CircularDomain<T>) -> Result<SymbolKind> {
    if domain.closure != Closure::Open {
        return Err(Error::UnsupportedDomain(format!("{domain} (closed)")));
    }
    match domain.kind {
        DomainKind::HalfPlane { offset, .. } if offset == T::zero() => Ok(SymbolKind::HalfPlaneAdd),
        DomainKind::Disk { center, radius } if center == czero() && radius == T::one() => {
            Ok(SymbolKind::DiskProduct)
        }
        _ => Err(Error::UnsupportedDomain(domain.to_string())),
    }
}

/// Decides whether `T` preserves `C`-stability for `C` an open half-plane
/// `H_θ` or the open unit disk, via the stability of the appropriate symbol
/// on `C^{2n}`; a one-dimensional range is handled separately.
pub fn preservation_test<T: Real>(
    t: &MonomialOperator<T>,
    kappa: &MultiIndex,
    domain: &CircularDomain<T>,
    budget: usize,
    seed: u64,
) -> Result<PreservationReport<T>> {
    let kind = symbol_kind_for(domain)?;
    let symbol = algebraic_symbol(t, kappa, kind)?;
    let rank = operator_rank(t);
    let m = t.out_nvars();
    let n = kappa.len();
    let report = |verdict, symbol_verdict, pair| PreservationReport {
        verdict,
        kind,
        symbol: symbol.clone(),
        symbol_verdict,
        rank,
        rank_two_pair_stable: pair,
    };
    if symbol.is_zero() {
        let v = Verdict::Falsified {
            witness: vec![domain.interior_point(); m + n],
            value: T::zero(),
        };
        return Ok(report(Preservation::RankOneBranch(Polynomial::zero(m)), v, None));
    }
    let omega2 = DomainProduct::broadcast(*domain, m + n);
    let sv = check(&symbol, &omega2, Mode::Auto, budget, seed)?;
    match sv {
        Verdict::Certified { .. } => return Ok(report(Preservation::PreservesCertified, sv, None)),
        Verdict::Unknown { .. } => return Ok(report(Preservation::PreservesLikely, sv, None)),
        Verdict::Falsified { .. } => {}
    }
    let images: Vec<Polynomial<T>> = t.table().map(|(_, p)| p.clone()).collect();
    let omega = DomainProduct::broadcast(*domain, m);
    if rank <= 1 {
        let p = images
            .iter()
            .max_by(|a, b| a.scale().partial_cmp(&b.scale()).unwrap_or(std::cmp::Ordering::Equal))
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(m));
        let p = p.scale_by(cone::<T>() / leading(&p));
        let pv = if p.is_zero() {
            Verdict::Unknown {
                trials: 0,
                min_abs: T::zero(),
                argmin: vec![],
            }
        } else {
            check(&p, &omega, Mode::Auto, budget, seed)?
        };
        if !pv.is_falsified() {
            return Ok(report(Preservation::RankOneBranch(p), sv, None));
        }
    }
    let pair = if rank == 2 { rank_two_pair(&images, budget, seed) } else { None };
    let witness = search_witness(t, kappa, domain, budget, seed)?;
    Ok(report(Preservation::NotPreserving { witness }, sv, pair))
}

fn leading<T: Real>(p: &Polynomial<T>) -> C<T> {
    p.terms().last().map(|(_, c)| *c).unwrap_or_else(cone)
}

fn rank_two_pair<T: Real>(images: &[Polynomial<T>], budget: usize, seed: u64) -> Option<bool> {
    let p = images.first()?;
    let q = images.iter().skip(1).find(|q| {
        let r = p.scale() / q.scale().max(T::min_positive_value());
        q.relative_distance(&p.scale_by(creal(T::one() / r))) > T::lit(1e-9)
            && q.relative_distance(&p.scale_by(creal(-T::one() / r))) > T::lit(1e-9)
    })?;
    let re = |x: &Polynomial<T>| x.map_coeffs(|_, c| creal(c.re));
    krein_real_stable(&re(p), &re(q), budget.min(4000), seed)
        .ok()
        .map(|r| !r.direct.is_falsified())
}

fn search_witness<T: Real>(
    t: &MonomialOperator<T>,
    kappa: &MultiIndex,
    domain: &CircularDomain<T>,
    budget: usize,
    seed: u64,
) -> Result<Option<(Polynomial<T>, Polynomial<T>, Vec<C<T>>)>> {
    let n = kappa.len();
    let omega_in = DomainProduct::broadcast(*domain, n);
    let omega_out = DomainProduct::broadcast(*domain, t.out_nvars());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per = (budget / 10).clamp(200, 2000);
    // monomial-free probes first: (z − c)^κ-type products via the generator
    for k in 0..200u64 {
        let f = domain_stable(&omega_in, kappa, k % 2 == 0, &mut rng)?;
        let g = t.apply(&f)?;
        if g.is_zero() {
            continue;
        }
        if let Verdict::Falsified { witness, .. } = falsify(&g, &omega_out, per, seed.wrapping_add(k)) {
            return Ok(Some((f, g, witness)));
        }
    }
    Ok(None)
}

/// `Σ_k e^{...}`-free helper: coefficients of `e^{x}` up to `order`.
pub fn exp_coefficients<T: Real>(order: u32) -> Vec<T> {
    (0..=order).map(|k| T::one() / factorial::<T>(k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::tables;
    use crate::Poly;

    type D = CircularDomain<f64>;

    fn p(s: &str, n: usize) -> Poly {
        Poly::parse(s, Some(n)).unwrap()
    }

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn close(a: &Poly, b: &Poly) {
        assert!(a.max_distance(b) <= 1e-12, "{a}\n  vs\n{b}");
    }

    #[test]
    fn identity_symbols() {
        let id = MonomialOperator::<f64>::identity(mi(&[1]));
        close(&algebraic_symbol(&id, &mi(&[1]), SymbolKind::HalfPlaneAdd).unwrap(), &p("z1+z2", 2));
        let k = mi(&[2, 1]);
        let id = MonomialOperator::<f64>::identity(k.clone());
        close(
            &algebraic_symbol(&id, &k, SymbolKind::HalfPlaneAdd).unwrap(),
            &p("(z1+z3)^2*(z2+z4)", 4),
        );
        close(
            &algebraic_symbol(&id, &k, SymbolKind::DiskProduct).unwrap(),
            &p("(1+z1*z3)^2*(1+z2*z4)", 4),
        );
        close(
            &algebraic_symbol(&id, &k, SymbolKind::RealMinus).unwrap(),
            &p("(z1-z3)^2*(z2-z4)", 4),
        );
        assert!(algebraic_symbol(&id, &mi(&[2]), SymbolKind::DiskProduct).is_err());
    }

    #[test]
    fn derivative_symbol() {
        let d = tables::derivative::<f64>(mi(&[2]), 0).unwrap();
        close(&algebraic_symbol(&d, &mi(&[2]), SymbolKind::HalfPlaneAdd).unwrap(), &p("2*(z1+z2)", 2));
    }

    #[test]
    fn asano_symbol() {
        let k = mi(&[1, 1, 2]);
        let a = tables::asano::<f64>(k.clone(), 0, 1).unwrap();
        let s = algebraic_symbol(&a, &k, SymbolKind::DiskProduct).unwrap();
        // z1 z2 z3 | w1 w2 w3
        close(&s, &p("(1+z3*z6)^2*(1+z1*z4*z5)", 6));
    }

    #[test]
    fn mod_symbol_matches_closed_form() {
        let s = algebraic_symbol(&tables::mod2::<f64>(mi(&[2])).unwrap(), &mi(&[2]), SymbolKind::DiskProduct).unwrap();
        close(&s, &p("1+2*z1*z2+z2^2", 2));
        // 2^{-n} ∏ [(1+w_i)^{κ_i}(1+z_i) + (1−w_i)^{κ_i}(1−z_i)]
        let k = mi(&[3, 2]);
        let s = algebraic_symbol(&tables::mod2::<f64>(k.clone()).unwrap(), &k, SymbolKind::DiskProduct).unwrap();
        let closed = p(
            "0.25*((1+z3)^3*(1+z1)+(1-z3)^3*(1-z1))*((1+z4)^2*(1+z2)+(1-z4)^2*(1-z2))",
            4,
        );
        close(&s, &closed);
    }

    #[test]
    fn t_d_symbol_has_factor() {
        for d in 1..=3u32 {
            let k = mi(&[d, d, 1]);
            let t = tables::hard_lieb_sokal::<f64>(k.clone(), crate::operators::LiebSokalVariant::T, d).unwrap();
            let s = algebraic_symbol(&t, &k, SymbolKind::HalfPlaneAdd).unwrap();
            let expect = p(&format!("(z1+z2+z4+z5)^{d}*(z3+z6)"), 6);
            close(&s, &expect);
        }
    }

    #[test]
    fn symbol_linearity() {
        let k = mi(&[2, 1]);
        let a = tables::derivative::<f64>(k.clone(), 1).unwrap();
        let b = tables::mod2::<f64>(k.clone()).unwrap();
        for kind in [SymbolKind::HalfPlaneAdd, SymbolKind::DiskProduct, SymbolKind::RealMinus] {
            let lhs = algebraic_symbol(&a.sum(&b).unwrap(), &k, kind).unwrap();
            let rhs = &algebraic_symbol(&a, &k, kind).unwrap() + &algebraic_symbol(&b, &k, kind).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn transcendental_examples() {
        let id = |a: &MultiIndex| Ok(Poly::monomial(1, a.clone(), cone()));
        let s = transcendental_symbol(id, 1, 1, 3, Sign::Minus).unwrap();
        close(&s.poly, &p("1 - z1*z2 + 0.5*z1^2*z2^2 - 0.16666666666666666*z1^3*z2^3", 2));
        // MAP with sign +: ∏ (1 + z_i w_i), exact once N ≥ n
        let map = |a: &MultiIndex| {
            Ok(crate::operators::map_multiaffine_part(&Poly::monomial(3, a.clone(), cone())))
        };
        let s = transcendental_symbol(map, 3, 3, 3, Sign::Plus).unwrap();
        close(&s.poly, &p("(1+z1*z4)*(1+z2*z5)*(1+z3*z6)", 6));
        let s = transcendental_symbol(map, 3, 3, 2, Sign::Plus).unwrap();
        close(&s.poly, &p("1+z1*z4+z2*z5+z3*z6+z1*z4*z2*z5+z1*z4*z3*z6+z2*z5*z3*z6", 6));
        let t = tables::map::<f64>(mi(&[2, 2])).unwrap();
        let s = transcendental_symbol_of(&t, 2, Sign::Plus).unwrap();
        close(&s.poly, &p("(1+z1*z3)*(1+z2*z4)", 4));
        assert!(transcendental_symbol_of(&t, 3, Sign::Plus).is_err());
    }

    #[test]
    fn lieb_sokal_transcendental() {
        // variables u, v; T(u^a v^b) = ∂_v^a v^b; symbol ∏ e^{η v} e^{η ξ}
        let rule = |al: &MultiIndex| -> Result<Poly> {
            let v = Poly::monomial(2, mi(&[0, al[1]]), cone());
            v.partial_derivative(1, al[0])
        };
        let order = 4;
        let s = transcendental_symbol(rule, 2, 2, order, Sign::Plus).unwrap();
        // (u, v | ξ, η): e^{η(v+ξ)} truncated at total ξ,η-degree ≤ N
        let mut expect = Poly::zero(4);
        let base = p("z2*z4+z3*z4", 4);
        let mut pow = Poly::one(4);
        for k in 0..=2 * order {
            expect = &expect + &pow.scale_by(creal(1.0 / factorial::<f64>(k)));
            pow = &pow * &base;
        }
        let expect = expect.filter_terms(|a| a[2] + a[3] <= order);
        close(&s.poly, &expect);
    }

    #[test]
    fn rank_computation() {
        assert_eq!(operator_rank(&MonomialOperator::<f64>::identity(mi(&[2, 1]))), 6);
        let r1 = tables::rank_one(mi(&[2]), &[cone(), czero(), cone()], &p("z1+i", 1)).unwrap();
        assert_eq!(operator_rank(&r1), 1);
        assert_eq!(operator_rank(&tables::mod2::<f64>(mi(&[2])).unwrap()), 2);
    }

    #[test]
    fn preservation_examples() {
        let h0 = D::upper_half_plane();
        let d = tables::derivative::<f64>(mi(&[2]), 0).unwrap();
        let r = preservation_test(&d, &mi(&[2]), &h0, 10_000, 1).unwrap();
        assert_eq!(r.verdict, Preservation::PreservesCertified);

        let k = mi(&[2, 2]);
        let m = tables::mod2::<f64>(k.clone()).unwrap();
        let r = preservation_test(&m, &k, &D::half_plane(std::f64::consts::FRAC_PI_2), 10_000, 1).unwrap();
        assert_eq!(r.verdict, Preservation::PreservesLikely);

        let r1 = tables::rank_one(mi(&[2]), &[cone(), czero(), cone()], &p("z1+i", 1)).unwrap();
        let r = preservation_test(&r1, &mi(&[2]), &h0, 10_000, 1).unwrap();
        assert!(r.symbol_verdict.is_falsified());
        close(&r.symbol, &p("(z2^2+1)*(z1+i)", 2));
        match r.verdict {
            Preservation::RankOneBranch(q) => close(&q, &p("z1+i", 1)),
            v => panic!("{v:?}"),
        }

        // z ↦ z² on ℂ₁... the square map on coefficients: 1 ↦ 1, z ↦ z²·0 + ...
        let bad = MonomialOperator::new(
            mi(&[1]),
            1,
            vec![(mi(&[0]), p("1", 1)), (mi(&[1]), p("-z1", 1))],
        )
        .unwrap();
        let r = preservation_test(&bad, &mi(&[1]), &h0, 10_000, 1).unwrap();
        match r.verdict {
            Preservation::NotPreserving { witness: Some((f, g, z)) } => {
                assert_eq!(bad.apply(&f).unwrap(), g);
                assert!(g.evaluate(&z).unwrap().norm() < 1e-6);
            }
            v => panic!("{v:?}"),
        }

        let k = mi(&[1, 1, 1]);
        let a = tables::asano::<f64>(k.clone(), 0, 1).unwrap();
        let r = preservation_test(&a, &k, &D::unit_disk(), 10_000, 1).unwrap();
        assert_eq!(r.verdict, Preservation::PreservesLikely);
        assert!(preservation_test(&a, &k, &D::unit_exterior(), 100, 1).is_err());
    }

    #[test]
    fn catalog_preservers_are_not_rejected() {
        let h0 = D::upper_half_plane();
        let rhp = D::half_plane(std::f64::consts::FRAC_PI_2);
        let k = mi(&[2, 2]);
        let cases: Vec<(MonomialOperator<f64>, D)> = vec![
            (tables::sym(mi(&[1, 1, 1])).unwrap(), h0),
            (tables::derivative(k.clone(), 1).unwrap(), h0),
            (tables::hard_lieb_sokal(k.clone(), crate::operators::LiebSokalVariant::T, 2).unwrap(), h0),
            (tables::mod2(k.clone()).unwrap(), rhp),
            (tables::transposition(k.clone(), 0, 1).unwrap(), D::unit_disk()),
            (
                MonomialOperator::diagonal(
                    &crate::operators::DiagonalSequence::univariate(&[0.0, 1.0, 2.0, 3.0]).unwrap(),
                ),
                rhp,
            ),
        ];
        for (t, d) in cases {
            let kappa = t.kappa().clone();
            let r = preservation_test(&t, &kappa, &d, 4000, 3).unwrap();
            assert!(
                matches!(r.verdict, Preservation::PreservesCertified | Preservation::PreservesLikely),
                "{:?} {} {:?}",
                r.verdict, r.symbol, r.symbol_verdict
            );
        }
    }

    #[test]
    fn exp_coefficients_are_reciprocal_factorials() {
        let c: Vec<f64> = exp_coefficients(4);
        assert_eq!(c, vec![1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0]);
    }
}
