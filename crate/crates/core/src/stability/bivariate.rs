//! Exact criteria for `a + bz + cw + dzw` and for real quadratics.

use super::{falsify, Verdict, DEFAULT_BUDGET};
use crate::domains::{CircularDomain, Closure, DomainProduct};
use crate::error::{Error, Result};
use crate::poly::{MultiIndex, Polynomial};
use crate::scalar::{ci, creal, czero, Real, C};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BivariateCriterion {
    /// Closed upper half-plane stability of a complex multi-affine `f(z, w)`.
    LemmaMax,
    /// Real stability of a real multi-affine `f(z, w)`: `bc ≥ ad`.
    Peacy,
    /// Real stability of a real `a + 2bz + cz²`: `b² ≥ ac`.
    EasyPeacy,
}

impl std::str::FromStr for BivariateCriterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lemma-max" => Ok(Self::LemmaMax),
            "peacy" => Ok(Self::Peacy),
            "easypeacy" => Ok(Self::EasyPeacy),
            _ => Err(Error::InvalidArgument(format!("unknown criterion {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BivariateReport<T: Real> {
    pub verdict: Verdict<T>,
    /// Named intermediate quantities (coefficients normalized to scale 1).
    pub diagnostics: Vec<(&'static str, f64)>,
}

const TOL: f64 = 1e-12;

fn coefficients<T: Real>(f: &Polynomial<T>) -> Result<[C<T>; 4]> {
    if f.nvars() != 2 || !f.is_multi_affine() {
        return Err(Error::Shape("expected a + bz + cw + dzw in two variables".into()));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("stability verdict"));
    }
    let s = f.scale();
    let at = |e: [u32; 2]| f.coeff(&MultiIndex::new(e.to_vec())).unscale(s);
    Ok([at([0, 0]), at([1, 0]), at([0, 1]), at([1, 1])])
}

/// `min_x q(x)` over the reals for `q = q0 + q1 x + q2 x²`, together with
/// the minimizer when finite; strict positivity uses `tol`.
fn quadratic_positive<T: Real>(q0: T, q1: T, q2: T, tol: T) -> (bool, T, Option<T>) {
    let two = T::lit(2.0);
    if q2 > tol {
        let x = -q1 / (two * q2);
        let disc = q1 * q1 - T::lit(4.0) * q0 * q2;
        (disc < -tol, q0 + q1 * x + q2 * x * x, Some(x))
    } else if q2 < -tol || q1.abs() > tol {
        (false, T::neg_infinity(), None)
    } else {
        (q0 > tol, q0, Some(T::zero()))
    }
}

fn v_forms<T: Real>(a: C<T>, b: C<T>, c: C<T>, d: C<T>) -> ([T; 3], [T; 3]) {
    let v1 = [
        (a * c.conj()).im,
        (a * d.conj() + b * c.conj()).im,
        (b * d.conj()).im,
    ];
    let v2 = [
        (a * b.conj()).im,
        (a * d.conj() + c * b.conj()).im,
        (c * d.conj()).im,
    ];
    (v1, v2)
}

fn in_closed_upper<T: Real>(z: C<T>) -> bool {
    CircularDomain::upper_half_plane().closed().contains(z)
}

fn falsified<T: Real>(f: &Polynomial<T>, z: C<T>, w: C<T>) -> Verdict<T> {
    Verdict::Falsified {
        witness: vec![z, w],
        value: f.eval(&[z, w]).norm(),
    }
}

/// Scans `z ∈ H̄₀` for a point whose `w`-root `−(a+bz)/(c+dz)` also lies in
/// `H̄₀` (and symmetrically with the roles swapped).
fn scan_witness<T: Real>(f: &Polynomial<T>, k: [C<T>; 4]) -> Option<(C<T>, C<T>)> {
    let [a, b, c, d] = k;
    let mut zs: Vec<C<T>> = Vec::new();
    for e in -6..=6 {
        let r = T::lit(10f64.powi(e));
        zs.push(creal(r));
        zs.push(creal(-r));
        zs.push(ci::<T>() * r);
        zs.push(C::new(r, r));
        zs.push(C::new(-r, r));
    }
    zs.push(czero());
    let (v1, v2) = v_forms(a, b, c, d);
    for v in [v1, v2] {
        if v[2] != T::zero() {
            zs.push(creal(-v[1] / (T::lit(2.0) * v[2])));
        }
    }
    if d != czero() {
        let pole = -c / d;
        if in_closed_upper(pole) {
            for j in 0..=16 {
                let phi = T::PI() * T::lit(j as f64 / 16.0);
                zs.push(pole + C::from_polar(T::lit(1e-3), phi));
            }
            if (a + b * pole).norm() <= T::lit(TOL) {
                return Some((pole, ci()));
            }
        }
    }
    let tol = T::lit(super::EPS_ZERO);
    for swap in [false, true] {
        let (b1, c1) = if swap { (c, b) } else { (b, c) };
        for &z in &zs {
            if !in_closed_upper(z) {
                continue;
            }
            let den = c1 + d * z;
            if den.norm() <= T::lit(TOL) {
                continue;
            }
            let w = -(a + b1 * z) / den;
            if !in_closed_upper(w) {
                continue;
            }
            let (zz, ww) = if swap { (w, z) } else { (z, w) };
            if f.eval(&[zz, ww]).norm() <= tol * f.eval_abs_scale(&[zz, ww]).max(f.scale()) {
                return Some((zz, ww));
            }
        }
    }
    None
}

fn lemma_max<T: Real>(f: &Polynomial<T>, k: [C<T>; 4], seed: u64) -> BivariateReport<T> {
    let [a, b, c, d] = k;
    let tol = T::lit(TOL);
    let mut diag = Vec::new();
    let closed = Verdict::Certified {
        closure: Closure::Closed,
    };
    if d.norm() <= tol {
        // a + bz + cw: w-root −(a+bz)/c stays in the open lower half-plane
        // for all z ∈ H̄₀ iff b/c ≥ 0 and Im(a/c) > 0 (or symmetrically)
        let verdict = if b.norm() <= tol && c.norm() <= tol {
            closed
        } else if b.norm() <= tol || c.norm() <= tol {
            let (lin, other_first) = if b.norm() <= tol { (c, false) } else { (b, true) };
            let root = -a / lin;
            diag.push(("Im(root)", root.im.f64()));
            if root.im < -tol {
                closed
            } else if other_first {
                falsified(f, root, ci())
            } else {
                falsified(f, ci(), root)
            }
        } else {
            let r = b / c;
            let q = a / c;
            diag.push(("Im(b/c)", r.im.f64()));
            diag.push(("Re(b/c)", r.re.f64()));
            diag.push(("Im(a/c)", q.im.f64()));
            if r.im.abs() <= tol && r.re > tol && q.im > tol {
                closed
            } else {
                match scan_witness(f, k) {
                    Some((z, w)) => falsified(f, z, w),
                    None => fallback(f, seed),
                }
            }
        };
        return BivariateReport {
            verdict,
            diagnostics: diag,
        };
    }
    let ib = (b / d).im;
    let ic = (c / d).im;
    let (v1, v2) = v_forms(a, b, c, d);
    let (p1, m1, _) = quadratic_positive(v1[0], v1[1], v1[2], tol);
    let (p2, m2, _) = quadratic_positive(v2[0], v2[1], v2[2], tol);
    diag.push(("Im(b/d)", ib.f64()));
    diag.push(("Im(c/d)", ic.f64()));
    diag.push(("min V1", m1.f64()));
    diag.push(("min V2", m2.f64()));
    let verdict = if ib > tol && ic > tol {
        if p1 || p2 {
            closed
        } else {
            match scan_witness(f, k) {
                Some((z, w)) => falsified(f, z, w),
                None => fallback(f, seed),
            }
        }
    } else if ib <= tol && ic <= tol {
        // d⁻¹f(z − c/d, w − b/d) = zw + e with e = (ad − bc)/d²
        let e = (a * d - b * c) / (d * d);
        let s = (-e).sqrt();
        let s = if s.im >= T::zero() { s } else { -s };
        let z = s - c / d;
        let w = s - b / d;
        if in_closed_upper(z) && in_closed_upper(w) {
            falsified(f, z, w)
        } else {
            match scan_witness(f, k) {
                Some((z, w)) => falsified(f, z, w),
                None => fallback(f, seed),
            }
        }
    } else {
        // mixed cases are not certified; look for a witness only
        match scan_witness(f, k) {
            Some((z, w)) => falsified(f, z, w),
            None => fallback(f, seed),
        }
    };
    BivariateReport {
        verdict,
        diagnostics: diag,
    }
}

fn fallback<T: Real>(f: &Polynomial<T>, seed: u64) -> Verdict<T> {
    let omega = DomainProduct::broadcast(CircularDomain::upper_half_plane().closed(), 2);
    falsify(f, &omega, DEFAULT_BUDGET, seed)
}

/// Applies one of the exact two-variable criteria.
pub fn bivariate_criteria<T: Real>(
    f: &Polynomial<T>,
    criterion: BivariateCriterion,
) -> Result<BivariateReport<T>> {
    let tol = T::lit(TOL);
    match criterion {
        BivariateCriterion::LemmaMax => {
            let k = coefficients(f)?;
            Ok(lemma_max(f, k, 0))
        }
        BivariateCriterion::Peacy => {
            let k = coefficients(f)?;
            if k.iter().any(|x| x.im.abs() > tol) {
                return Err(Error::NotReal);
            }
            let [a, b, c, d] = k.map(|x| x.re);
            let gap = b * c - a * d;
            let verdict = if gap >= -tol {
                Verdict::Certified {
                    closure: Closure::Open,
                }
            } else {
                // w = −(a+bz)/(c+dz) is a real Möbius map of positive
                // determinant, so it sends z = i into H₀
                let z = ci::<T>();
                let w = -(creal(a) + z * b) / (creal(c) + z * d);
                falsified(f, z, w)
            };
            Ok(BivariateReport {
                verdict,
                diagnostics: vec![("bc - ad", gap.f64())],
            })
        }
        BivariateCriterion::EasyPeacy => {
            if f.nvars() != 1 || f.degree_in(0) > 2 {
                return Err(Error::Shape("expected a + 2bz + cz²".into()));
            }
            if f.is_zero() {
                return Err(Error::ZeroPolynomial("stability verdict"));
            }
            if !f.is_real(tol * f.scale()) {
                return Err(Error::NotReal);
            }
            let s = f.scale();
            let co = |k: u32| f.coeff(&MultiIndex::new(vec![k])).re / s;
            let (a, b, c) = (co(0), co(1) / T::lit(2.0), co(2));
            let gap = b * b - a * c;
            let verdict = if gap >= -tol {
                Verdict::Certified {
                    closure: Closure::Open,
                }
            } else {
                let root = C::new(-b / c, (-gap).sqrt() / c.abs());
                Verdict::Falsified {
                    witness: vec![root],
                    value: f.eval(&[root]).norm(),
                }
            };
            Ok(BivariateReport {
                verdict,
                diagnostics: vec![("b^2 - ac", gap.f64())],
            })
        }
    }
}
