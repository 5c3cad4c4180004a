//! Diagonal operators `z^α ↦ λ(α) z^α`: factorization of stable diagonal
//! forms `Σ a(α) z^α w^α`, κ-multiplier sequences and weak-Hurwitz
//! preservers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::domains::{CircularDomain, DomainProduct};
use crate::error::{Error, Result};
use crate::operators::{DiagonalSequence, MonomialOperator};
use crate::poly::{MultiIndex, Polynomial};
use crate::scalar::{cone, creal, czero, Real, C};
use crate::stability::{falsify, univariate_roots, Verdict};

/// Relative tolerance for the product relations and the reconstruction.
pub const RELATION_TOL: f64 = 1e-9;
/// Tolerance for "real" and "non-negative" in the root audit.
pub const ROOT_TOL: f64 = 1e-7;

/// `C ∏ f_i(z_i w_i)` with monic `f_i`.
#[derive(Clone, Debug)]
pub struct DiagonalFactorization<T: Real> {
    pub c: C<T>,
    pub factors: Vec<Polynomial<T>>,
    pub roots: Vec<Vec<C<T>>>,
    /// Every root real and `≥ 0` (within [`ROOT_TOL`]).
    pub roots_real_nonneg: bool,
    pub min: MultiIndex,
    pub max: MultiIndex,
    pub relation_residual: f64,
    pub reconstruction_residual: f64,
}

#[derive(Clone, Debug)]
pub enum FactorOutcome<T: Real> {
    Factored(DiagonalFactorization<T>),
    NotFactorizable {
        reason: String,
        at: Option<MultiIndex>,
        residual: f64,
    },
}

impl<T: Real> FactorOutcome<T> {
    pub fn factorization(&self) -> Option<&DiagonalFactorization<T>> {
        match self {
            FactorOutcome::Factored(f) => Some(f),
            _ => None,
        }
    }

    /// Factored with real non-negative roots: the form is stable.
    pub fn is_stable(&self) -> bool {
        self.factorization().is_some_and(|f| f.roots_real_nonneg)
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            FactorOutcome::Factored(f) => json!({
                "factored": true,
                "C": [f.c.re.f64(), f.c.im.f64()],
                "factors": f.factors.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "roots": f.roots.iter().map(|rs| rs.iter().map(|r| [r.re.f64(), r.im.f64()]).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "roots_real_nonneg": f.roots_real_nonneg,
                "min": f.min.as_slice(),
                "max": f.max.as_slice(),
                "relation_residual": f.relation_residual,
                "reconstruction_residual": f.reconstruction_residual,
            }),
            FactorOutcome::NotFactorizable { reason, at, residual } => json!({
                "factored": false,
                "reason": reason,
                "at": at.as_ref().map(|a| a.as_slice().to_vec()),
                "residual": residual,
            }),
        }
    }
}

fn not_factorizable<T: Real>(reason: &str, at: Option<MultiIndex>, residual: f64) -> FactorOutcome<T> {
    FactorOutcome::NotFactorizable {
        reason: reason.to_string(),
        at,
        residual,
    }
}

fn doubled(alpha: &MultiIndex) -> MultiIndex {
    let mut e = alpha.as_slice().to_vec();
    e.extend_from_slice(alpha.as_slice());
    MultiIndex::new(e)
}

/// `a(α)` of a polynomial in `z₁..z_n, w₁..w_n` supported on `z^α w^α`.
fn diagonal_coefficients<T: Real>(f: &Polynomial<T>) -> Result<(usize, Vec<(MultiIndex, C<T>)>)> {
    if f.nvars() % 2 != 0 {
        return Err(Error::Shape(format!("expected 2n variables, got {}", f.nvars())));
    }
    let n = f.nvars() / 2;
    let mut out = Vec::with_capacity(f.len());
    for (e, c) in f.terms() {
        let (z, w) = e.as_slice().split_at(n);
        if z != w {
            return Err(Error::NonDiagonal(e.as_slice().to_vec()));
        }
        out.push((MultiIndex::new(z.to_vec()), *c));
    }
    Ok((n, out))
}

fn sign<T: Real>(k: u32) -> T {
    if k % 2 == 0 {
        T::one()
    } else {
        -T::one()
    }
}

fn relative_gap<T: Real>(x: C<T>, y: C<T>) -> f64 {
    let m = x.norm().max(y.norm());
    if m == T::zero() {
        0.0
    } else {
        ((x - y).norm() / m).f64()
    }
}

fn root_ok<T: Real>(r: C<T>) -> bool {
    let m = T::one().max(r.norm());
    let tol = T::lit(ROOT_TOL) * m;
    r.im.abs() <= tol && r.re >= -tol
}

/// Splits `f(z, w) = Σ a(α) z^α w^α` as `C f₁(z₁w₁)⋯f_n(z_nw_n)` with monic
/// `f_i` and `C = a(max)`. Requires unique minimal and maximal support
/// elements, no zero inside the box between them, the product relations
/// `λ(γ)λ(γ+e_i+e_j) = λ(γ+e_i)λ(γ+e_j)` (`i ≠ j`) for
/// `λ(α) = (−1)^{|α|} C(κ,α)^{-1} a(α)`, and an exact reconstruction.
pub fn factor_diagonal_stable<T: Real>(f: &Polynomial<T>) -> Result<FactorOutcome<T>> {
    let (n, coeffs) = diagonal_coefficients(f)?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("diagonal factorization"));
    }
    let scale = f.scale();
    let zero_tol = T::lit(1e-12) * scale;
    let support: Vec<&MultiIndex> = coeffs.iter().filter(|(_, c)| c.norm() > zero_tol).map(|(a, _)| a).collect();
    let lo = support.iter().skip(1).fold(support[0].clone(), |m, a| m.meet(a));
    let hi = support.iter().skip(1).fold(support[0].clone(), |m, a| m.join(a));
    let a = |alpha: &MultiIndex| f.coeff(&doubled(alpha));
    if a(&lo).norm() <= zero_tol {
        return Ok(not_factorizable("no unique minimal support element", Some(lo), 0.0));
    }
    if a(&hi).norm() <= zero_tol {
        return Ok(not_factorizable("no unique maximal support element", Some(hi), 0.0));
    }
    for alpha in MultiIndex::box_between(&lo, &hi) {
        if a(&alpha).norm() <= zero_tol {
            return Ok(not_factorizable("interior zero", Some(alpha), 0.0));
        }
    }
    let lambda = |alpha: &MultiIndex| a(alpha) * (sign::<T>(alpha.total()) / hi.binomial::<T>(alpha));
    let mut worst = 0.0f64;
    for gamma in MultiIndex::box_between(&lo, &hi) {
        for i in 0..n {
            for j in i + 1..n {
                if gamma[i] + 1 > hi[i] || gamma[j] + 1 > hi[j] {
                    continue;
                }
                let gi = gamma.add(&MultiIndex::unit(n, i));
                let gj = gamma.add(&MultiIndex::unit(n, j));
                let gij = gi.add(&MultiIndex::unit(n, j));
                let r = relative_gap(lambda(&gamma) * lambda(&gij), lambda(&gi) * lambda(&gj));
                if r > RELATION_TOL {
                    return Ok(not_factorizable("product relation fails", Some(gamma), r));
                }
                worst = worst.max(r);
            }
        }
    }
    // f_i from the axis slice through the minimum, made monic
    let c = a(&hi);
    let mut factors = Vec::with_capacity(n);
    for i in 0..n {
        let coeffs: Vec<C<T>> = (0..=hi[i])
            .map(|k| {
                if k < lo[i] {
                    czero()
                } else {
                    let mut alpha = lo.clone();
                    alpha[i] = k;
                    lambda(&alpha) * (sign::<T>(k) * crate::scalar::binomial::<T>(hi[i], k))
                }
            })
            .collect();
        let lead = *coeffs.last().expect("nonempty");
        let monic: Vec<C<T>> = coeffs.iter().map(|x| x / lead).collect();
        factors.push(Polynomial::univariate(&monic));
    }
    let mut rebuilt = Polynomial::constant(2 * n, c);
    for (i, fi) in factors.iter().enumerate() {
        let lifted = fi.map_exponents(2 * n, |k| {
            let mut out = vec![0u32; 2 * n];
            out[i] = k[0];
            out[n + i] = k[0];
            Some(MultiIndex::new(out))
        });
        rebuilt = &rebuilt * &lifted;
    }
    let rec = (rebuilt.max_distance(f) / scale).f64();
    if rec > RELATION_TOL {
        return Ok(not_factorizable("reconstruction mismatch", None, rec));
    }
    let mut roots = Vec::with_capacity(n);
    for fi in &factors {
        roots.push(if fi.total_degree().unwrap_or(0) == 0 {
            Vec::new()
        } else {
            univariate_roots(fi)?
        });
    }
    let roots_real_nonneg = factors.iter().all(|p| p.is_real(T::lit(ROOT_TOL)))
        && roots.iter().flatten().all(|r| root_ok(*r));
    Ok(FactorOutcome::Factored(DiagonalFactorization {
        c,
        factors,
        roots,
        roots_real_nonneg,
        min: lo,
        max: hi,
        relation_residual: worst,
        reconstruction_residual: rec,
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignPattern {
    NonNegative,
    Alternating,
    Mixed,
}

impl SignPattern {
    pub fn as_str(&self) -> &'static str {
        match self {
            SignPattern::NonNegative => "nonnegative",
            SignPattern::Alternating => "alternating",
            SignPattern::Mixed => "mixed",
        }
    }
}

/// Sign pattern of `±λ`: constant sign, `(−1)^{|α|}` times a constant sign,
/// or neither. Zeros are ignored.
pub fn sign_pattern<T: Real>(lambda: &DiagonalSequence<T>) -> SignPattern {
    let tol = T::lit(1e-14) * lambda.values.values().fold(T::zero(), |m, v| m.max(v.norm()));
    let same = |flip: bool| {
        let signs: Vec<bool> = lambda
            .values
            .iter()
            .filter(|(_, v)| v.re.abs() > tol)
            .map(|(a, v)| (v.re > T::zero()) ^ (flip && a.total() % 2 == 1))
            .collect();
        signs.windows(2).all(|w| w[0] == w[1])
    };
    if same(false) {
        SignPattern::NonNegative
    } else if same(true) {
        SignPattern::Alternating
    } else {
        SignPattern::Mixed
    }
}

/// `Σ (−1)^{|κ|−|α|} C(κ,α) λ(α) z^α w^α` (`plus`, from `T[(z+w)^κ]` under
/// `w ↦ −1/w`) or `Σ C(κ,α) λ(α) z^α w^α` (from `T[(z−w)^κ]`).
pub fn diagonal_form<T: Real>(lambda: &DiagonalSequence<T>, plus: bool) -> Polynomial<T> {
    let kappa = &lambda.kappa;
    let n = kappa.len();
    let terms = kappa.box_below().map(|alpha| {
        let mut s = kappa.binomial::<T>(&alpha);
        if plus {
            s *= sign::<T>(kappa.total() - alpha.total());
        }
        let v = lambda.get(&alpha) * s;
        (doubled(&alpha), v)
    });
    Polynomial::from_terms(2 * n, terms).expect("consistent arity")
}

/// `T[(z ± w)^κ]` for the diagonal operator (z first, then w).
pub fn diagonal_symbol<T: Real>(lambda: &DiagonalSequence<T>, plus: bool) -> Polynomial<T> {
    let kappa = &lambda.kappa;
    let n = kappa.len();
    let terms = kappa.box_below().map(|alpha| {
        let beta = kappa.checked_sub(&alpha).expect("α ≤ κ");
        let mut s = kappa.binomial::<T>(&alpha);
        if !plus {
            s *= sign::<T>(beta.total());
        }
        let mut e = alpha.as_slice().to_vec();
        e.extend_from_slice(beta.as_slice());
        (MultiIndex::new(e), lambda.get(&alpha) * s)
    });
    Polynomial::from_terms(2 * n, terms).expect("consistent arity")
}

/// A stable input whose image under the operator is not stable.
#[derive(Clone, Debug)]
pub struct MultiplierWitness<T: Real> {
    pub input: Polynomial<T>,
    pub image: Polynomial<T>,
    pub point: Vec<C<T>>,
}

#[derive(Clone, Debug)]
pub struct MultiplierReport<T: Real> {
    pub verdict: bool,
    /// `"plus"` (`T[(z+w)^κ]`) or `"minus"` (`T[(z−w)^κ]`) when accepted.
    pub route: Option<&'static str>,
    /// `λ_i(k)` with `λ(α) = ∏ λ_i(α_i)` (reported when a form factors).
    pub factor_sequences: Option<Vec<Vec<T>>>,
    pub sign_pattern: SignPattern,
    pub plus: FactorOutcome<T>,
    pub minus: FactorOutcome<T>,
    pub witness: Option<MultiplierWitness<T>>,
    pub note: String,
}

impl<T: Real> MultiplierReport<T> {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "verdict": self.verdict,
            "route": self.route,
            "sign_pattern": self.sign_pattern.as_str(),
            "factor_sequences": self.factor_sequences.as_ref().map(|v| v.iter().map(|s| s.iter().map(|x| x.f64()).collect::<Vec<_>>()).collect::<Vec<_>>()),
            "plus_form": self.plus.to_json(),
            "minus_form": self.minus.to_json(),
            "witness": self.witness.as_ref().map(|w| json!({
                "input": w.input.to_string(),
                "image": w.image.to_string(),
                "point": w.point.iter().map(|z| [z.re.f64(), z.im.f64()]).collect::<Vec<_>>(),
            })),
            "note": self.note,
        })
    }
}

/// Axis slices through the support minimum: `λ₁(k) = λ(ξ + (k−ξ₁)e₁)` and
/// `λ_i(k) = λ(ξ + (k−ξ_i)e_i) / λ(ξ)` for `i ≥ 2`.
fn factor_sequences<T: Real>(lambda: &DiagonalSequence<T>, lo: &MultiIndex) -> Vec<Vec<T>> {
    let kappa = &lambda.kappa;
    let base = lambda.get(lo).re;
    (0..kappa.len())
        .map(|i| {
            (0..=kappa[i])
                .map(|k| {
                    if k < lo[i] {
                        return T::zero();
                    }
                    let mut alpha = lo.clone();
                    alpha[i] = k;
                    let v = lambda.get(&alpha).re;
                    if i == 0 {
                        v
                    } else {
                        v / base
                    }
                })
                .collect()
        })
        .collect()
}

fn require_real<T: Real>(lambda: &DiagonalSequence<T>, kappa: &MultiIndex) -> Result<()> {
    if &lambda.kappa != kappa {
        return Err(Error::InvalidArgument(format!(
            "sequence is indexed by {:?}, expected {:?}",
            lambda.kappa, kappa
        )));
    }
    let scale = lambda.values.values().fold(T::zero(), |m, v| m.max(v.norm()));
    if !lambda.is_real(T::lit(1e-12) * scale.max(T::one())) {
        return Err(Error::NotReal);
    }
    Ok(())
}

/// Decides whether the real sequence `λ` is a κ-multiplier sequence: one of
/// the diagonal forms of `T[(z+w)^κ]`, `T[(z−w)^κ]` must factor with real
/// non-negative roots.
pub fn is_kappa_multiplier<T: Real>(lambda: &DiagonalSequence<T>, kappa: &MultiIndex) -> Result<MultiplierReport<T>> {
    require_real(lambda, kappa)?;
    let pattern = sign_pattern(lambda);
    let outcome = |plus: bool| -> Result<FactorOutcome<T>> {
        let form = diagonal_form(lambda, plus);
        if form.is_zero() {
            return Ok(not_factorizable("zero sequence", None, 0.0));
        }
        factor_diagonal_stable(&form)
    };
    let plus = outcome(true)?;
    let minus = outcome(false)?;
    let route = if plus.is_stable() {
        Some("plus")
    } else if minus.is_stable() {
        Some("minus")
    } else {
        None
    };
    let seqs = plus
        .factorization()
        .or(minus.factorization())
        .map(|f| factor_sequences(lambda, &f.min));
    Ok(MultiplierReport {
        verdict: route.is_some(),
        route,
        factor_sequences: seqs,
        sign_pattern: pattern,
        plus,
        minus,
        witness: None,
        note: String::new(),
    })
}

/// Test inputs for the witness search: `z^γ(1 ± z_i)(1 + z_j)`,
/// `z^γ(1 + z_i)²` and seeded products of real affine forms, all real
/// stable with degree `≤ κ`.
fn witness_candidates<T: Real>(kappa: &MultiIndex, budget: usize, seed: u64) -> Vec<Polynomial<T>> {
    let n = kappa.len();
    let mut out = Vec::new();
    let var = |i: usize| Polynomial::<T>::var(n, i);
    let one = Polynomial::<T>::one(n);
    for gamma in kappa.box_below() {
        let zg = Polynomial::monomial(n, gamma.clone(), cone());
        for i in 0..n {
            if gamma[i] + 2 <= kappa[i] {
                let f = &(&one + &var(i)) * &(&one + &var(i));
                out.push(&zg * &f);
            }
            for j in 0..n {
                if i == j || gamma[i] + 1 > kappa[i] || gamma[j] + 1 > kappa[j] {
                    continue;
                }
                for s in [1.0, -1.0] {
                    let a = &one + &(&var(i) * creal(T::lit(s)));
                    out.push(&zg * &(&a * &(&one + &var(j))));
                }
            }
            if gamma[i] + 1 <= kappa[i] {
                out.push(&zg * &(&one + &var(i)));
                out.push(&zg * &(&one - &var(i)));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < budget {
        out.push(crate::generators::affine_product(kappa, rng.gen::<bool>(), true, &mut rng));
    }
    out.truncate(budget.max(1));
    out
}

/// Searches for a real-stable input whose image under `T` has a zero in
/// `H₀ⁿ`.
pub fn multiplier_witness<T: Real>(
    op: &MonomialOperator<T>,
    budget: usize,
    seed: u64,
) -> Result<Option<MultiplierWitness<T>>> {
    let kappa = op.kappa().clone();
    let n = op.out_nvars();
    let omega = DomainProduct::broadcast(CircularDomain::upper_half_plane(), n);
    let candidates = witness_candidates::<T>(&kappa, budget, seed);
    let found = candidates
        .par_iter()
        .enumerate()
        .map(|(k, f)| -> Result<Option<(usize, MultiplierWitness<T>)>> {
            let g = op.apply(f)?;
            if g.is_zero() {
                return Ok(None);
            }
            Ok(match falsify(&g, &omega, 256, seed.wrapping_add(k as u64)) {
                Verdict::Falsified { witness, .. } => Some((
                    k,
                    MultiplierWitness {
                        input: f.clone(),
                        image: g,
                        point: witness,
                    },
                )),
                _ => None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(found.into_iter().flatten().min_by_key(|(k, _)| *k).map(|(_, w)| w))
}

/// [`is_kappa_multiplier`] plus, on rejection, a witness search.
pub fn is_kappa_multiplier_with_witness<T: Real>(
    lambda: &DiagonalSequence<T>,
    kappa: &MultiIndex,
    budget: usize,
    seed: u64,
) -> Result<MultiplierReport<T>> {
    let mut report = is_kappa_multiplier(lambda, kappa)?;
    if !report.verdict {
        let op = MonomialOperator::diagonal(lambda);
        report.witness = multiplier_witness(&op, budget, seed)?;
        if report.witness.is_none() {
            report.note = "rejected by criterion, no witness found".into();
        }
    }
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct HurwitzReport<T: Real> {
    pub verdict: bool,
    /// `λ / λ(α*)` for the first entry of largest magnitude.
    pub normalized: DiagonalSequence<T>,
    pub reason: String,
    pub multiplier: Option<MultiplierReport<T>>,
}

impl<T: Real> HurwitzReport<T> {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "verdict": self.verdict,
            "reason": self.reason,
            "normalized": self.normalized.values.iter().map(|(a, v)| json!({
                "alpha": a.as_slice(), "value": v.re.f64(), "im": v.im.f64(),
            })).collect::<Vec<_>>(),
            "multiplier": self.multiplier.as_ref().map(|m| m.to_json()),
        })
    }
}

/// Weak-Hurwitz preservation by a diagonal operator with complex `λ`: after
/// dividing by the largest entry the sequence must be real, non-negative and
/// a κ-multiplier sequence via the `T[(z+w)^κ]` route.
pub fn hurwitz_multiplier<T: Real>(lambda: &DiagonalSequence<T>, kappa: &MultiIndex) -> Result<HurwitzReport<T>> {
    if &lambda.kappa != kappa {
        return Err(Error::InvalidArgument(format!(
            "sequence is indexed by {:?}, expected {:?}",
            lambda.kappa, kappa
        )));
    }
    let top = lambda
        .values
        .values()
        .fold(czero::<T>(), |m, v| if v.norm() > m.norm() { *v } else { m });
    if top == czero() {
        return Ok(HurwitzReport {
            verdict: true,
            normalized: lambda.clone(),
            reason: "zero operator".into(),
            multiplier: None,
        });
    }
    let normalized = DiagonalSequence {
        kappa: kappa.clone(),
        values: lambda.values.iter().map(|(a, v)| (a.clone(), v / top)).collect(),
    };
    let tol = T::lit(1e-10);
    if let Some((a, _)) = normalized.values.iter().find(|(_, v)| v.im.abs() > tol || v.re < -tol) {
        return Ok(HurwitzReport {
            verdict: false,
            reason: format!("normalized entry at {a:?} is not real non-negative"),
            normalized,
            multiplier: None,
        });
    }
    let real = DiagonalSequence {
        kappa: kappa.clone(),
        values: normalized.values.iter().map(|(a, v)| (a.clone(), creal(v.re))).collect(),
    };
    let m = is_kappa_multiplier(&real, kappa)?;
    let verdict = m.plus.is_stable();
    Ok(HurwitzReport {
        verdict,
        reason: if verdict {
            "non-negative κ-multiplier sequence".into()
        } else {
            "diagonal form of T[(z+w)^κ] is not stable".into()
        },
        normalized,
        multiplier: Some(m),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    type P = Polynomial<f64>;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn diag(f: &str, n: usize) -> P {
        // variables z1..zn are x1..xn, w_i is x_{n+i}
        P::parse(f, Some(2 * n)).unwrap()
    }

    fn real_coeffs(p: &P) -> Vec<f64> {
        p.dense_in(0).iter().map(|c| c.re).collect()
    }

    #[test]
    fn factor_examples() {
        let f = diag("(-1 + z1*z3)*(-2 + z2*z4)", 2);
        let FactorOutcome::Factored(r) = factor_diagonal_stable(&f).unwrap() else { panic!() };
        assert!((r.c - C::new(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(real_coeffs(&r.factors[0]), vec![-1.0, 1.0]);
        assert_eq!(real_coeffs(&r.factors[1]), vec![-2.0, 1.0]);
        assert!(r.roots_real_nonneg);
        assert!((r.roots[1][0] - C::new(2.0, 0.0)).norm() < 1e-12);

        let g = diag("z1*z3 + z2*z4", 2);
        let out = factor_diagonal_stable(&g).unwrap();
        assert!(matches!(out, FactorOutcome::NotFactorizable { ref reason, .. } if reason.contains("minimal")));

        let h = diag("1 - z1*z2", 1);
        let FactorOutcome::Factored(r) = factor_diagonal_stable(&h).unwrap() else { panic!() };
        assert!((r.c + C::new(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(real_coeffs(&r.factors[0]), vec![-1.0, 1.0]);
        assert!(r.roots_real_nonneg);

        assert!(factor_diagonal_stable(&diag("z1*z4", 2)).is_err());
    }

    #[test]
    fn interior_zero_and_relation_failures() {
        let f = diag("1 + z1^2*z3^2", 2);
        assert!(matches!(
            factor_diagonal_stable(&f).unwrap(),
            FactorOutcome::NotFactorizable { ref reason, .. } if reason == "interior zero"
        ));
        let g = diag("1 + z1*z3 + z2*z4 + 5*z1*z2*z3*z4", 2);
        assert!(matches!(
            factor_diagonal_stable(&g).unwrap(),
            FactorOutcome::NotFactorizable { ref reason, .. } if reason.contains("relation")
        ));
    }

    #[test]
    fn generated_diagonals_factor() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in 0..50 {
            let degrees = [1 + k % 3, 2, (k % 2) as u32 + 1];
            let f: P = crate::generators::stable_diagonal(&degrees, &mut rng);
            let out = factor_diagonal_stable(&f).unwrap();
            let r = out.factorization().expect("factors");
            assert!(r.relation_residual <= RELATION_TOL && r.roots_real_nonneg, "{f}");
        }
    }

    #[test]
    fn multiplier_examples() {
        let lam = DiagonalSequence::univariate(&[0.0, 1.0, 2.0, 3.0]).unwrap();
        let r = is_kappa_multiplier(&lam, &mi(&[3])).unwrap();
        assert!(r.verdict && r.route == Some("plus"));
        let sym = diagonal_symbol(&lam, true);
        let expect = P::parse("3*z1*(z1+z2)^2", Some(2)).unwrap();
        assert!(sym.max_distance(&expect) < 1e-12);

        let lam = DiagonalSequence::univariate(&[1.0, 0.0, 1.0]).unwrap();
        let r = is_kappa_multiplier_with_witness(&lam, &mi(&[2]), 200, 1).unwrap();
        assert!(!r.verdict);
        let w = r.witness.expect("witness");
        assert!(w.image.evaluate(&w.point).unwrap().norm() < 1e-6);

        let one = DiagonalSequence::from_fn(mi(&[2, 1]), |_| creal(1.0));
        let r = is_kappa_multiplier(&one, &mi(&[2, 1])).unwrap();
        assert!(r.verdict && r.sign_pattern == SignPattern::NonNegative);

        let alt = DiagonalSequence::univariate(&[1.0, -1.0, 1.0]).unwrap();
        let r = is_kappa_multiplier(&alt, &mi(&[2])).unwrap();
        assert!(r.verdict && r.route == Some("minus") && r.sign_pattern == SignPattern::Alternating);
    }

    #[test]
    fn product_sequences_recover_factors() {
        let k = mi(&[2, 2]);
        let lam = DiagonalSequence::from_fn(k.clone(), |a| creal((a[0] as f64) * (1.0 + a[1] as f64)));
        let r = is_kappa_multiplier(&lam, &k).unwrap();
        assert!(r.verdict);
        let seqs = r.factor_sequences.unwrap();
        for alpha in k.box_below() {
            let prod = seqs[0][alpha[0] as usize] * seqs[1][alpha[1] as usize];
            assert!((prod - lam.get(&alpha).re).abs() < 1e-12);
        }
    }

    #[test]
    fn hurwitz_examples() {
        let k = mi(&[2]);
        for (vals, expect) in [([1.0, 1.0, 0.0], true), ([1.0, 1.0, 1.0], true), ([1.0, 0.0, 1.0], false)] {
            let lam = DiagonalSequence::univariate(&vals).unwrap();
            assert_eq!(hurwitz_multiplier(&lam, &k).unwrap().verdict, expect, "{vals:?}");
        }
        let rot = DiagonalSequence::from_fn(k.clone(), |a| C::new(0.0, 2.0) * (1.0 + a[0] as f64));
        assert!(hurwitz_multiplier(&rot, &k).unwrap().verdict);
        let alt = DiagonalSequence::univariate(&[1.0, -1.0, 1.0]).unwrap();
        assert!(!hurwitz_multiplier(&alt, &k).unwrap().verdict);
    }
}
