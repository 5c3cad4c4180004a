//! Deciding and falsifying nonvanishing on products of circular domains.
//!
//! Exact routes: univariate root location, the bivariate multi-affine
//! criteria, and diagonal reduction of (block-)symmetric multi-affine
//! polynomials. Everything else goes through the seeded falsifier, which can
//! refute stability but never certify it.

mod bivariate;
mod falsify;

pub use bivariate::{bivariate_criteria, BivariateCriterion, BivariateReport};
pub use falsify::{falsify, real_stable_consistent, witness_tolerance, FALSIFY_CHUNK};

use serde_json::{json, Value};

use crate::domains::{CircularDomain, Closure, DomainKind, DomainProduct};
use crate::error::{Error, Result};
use crate::operators::depolarize;
use crate::poly::{MultiIndex, Polynomial};
use crate::roots;
use crate::scalar::{ci, Real, C};

/// Relative zero threshold for witnesses.
pub const EPS_ZERO: f64 = 1e-8;
/// Default falsifier budget.
pub const DEFAULT_BUDGET: usize = 10_000;
/// Asymmetry tolerated by the symmetric certifier (relative to scale).
pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict<T: Real> {
    /// Nonvanishing proven by an exact criterion; `closure` states whether
    /// the open or the closed domain was certified.
    Certified { closure: Closure },
    /// A verified zero inside the domain.
    Falsified { witness: Vec<C<T>>, value: T },
    /// No witness found.
    Unknown {
        trials: usize,
        min_abs: T,
        argmin: Vec<C<T>>,
    },
}

impl<T: Real> Verdict<T> {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified { .. })
    }

    pub fn is_falsified(&self) -> bool {
        matches!(self, Verdict::Falsified { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown { .. })
    }

    pub fn witness(&self) -> Option<&[C<T>]> {
        match self {
            Verdict::Falsified { witness, .. } => Some(witness),
            _ => None,
        }
    }

    /// CLI exit code: 0 certified, 1 falsified, 2 unknown.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Certified { .. } => 0,
            Verdict::Falsified { .. } => 1,
            Verdict::Unknown { .. } => 2,
        }
    }

    pub fn to_json(&self) -> Value {
        let pt = |v: &[C<T>]| -> Value {
            Value::Array(v.iter().map(|z| json!([z.re.f64(), z.im.f64()])).collect())
        };
        match self {
            Verdict::Certified { closure } => json!({
                "verdict": "certified",
                "closure": match closure { Closure::Open => "open", Closure::Closed => "closed" },
            }),
            Verdict::Falsified { witness, value } => json!({
                "verdict": "falsified",
                "witness": pt(witness),
                "abs_value": value.f64(),
            }),
            Verdict::Unknown {
                trials,
                min_abs,
                argmin,
            } => json!({
                "verdict": "unknown",
                "trials": trials,
                "min_abs": min_abs.f64(),
                "argmin": pt(argmin),
            }),
        }
    }

    fn unknown_empty() -> Self {
        Verdict::Unknown {
            trials: 0,
            min_abs: T::infinity(),
            argmin: Vec::new(),
        }
    }
}

/// All roots with multiplicity of a polynomial in one variable.
pub fn univariate_roots<T: Real>(f: &Polynomial<T>) -> Result<Vec<C<T>>> {
    if f.nvars() != 1 {
        return Err(Error::Shape(format!(
            "expected a univariate polynomial, got {} variables",
            f.nvars()
        )));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("roots"));
    }
    roots::roots(&f.dense_in(0))
}

/// Exact stability of a univariate polynomial on `D`.
pub fn stable_univariate<T: Real>(f: &Polynomial<T>, d: &CircularDomain<T>) -> Result<Verdict<T>> {
    let rs = univariate_roots(f)?;
    let hit = rs
        .iter()
        .filter(|r| d.contains(**r))
        .map(|r| (*r, f.eval(&[*r]).norm()))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    Ok(match hit {
        Some((r, v)) => Verdict::Falsified {
            witness: vec![r],
            value: v,
        },
        None => Verdict::Certified { closure: d.closure },
    })
}

fn check_block_symmetry<T: Real>(f: &Polynomial<T>, blocks: &MultiIndex) -> Result<()> {
    let scale = f.scale();
    let mut start = 0usize;
    for &k in blocks.as_slice() {
        let k = k as usize;
        for v in start..start + k.saturating_sub(1) {
            let d = f.max_distance(&f.transpose(v, v + 1)?);
            if d > T::lit(SYMMETRY_TOL) * scale {
                return Err(Error::NotSymmetric(d.f64()));
            }
        }
        start += k;
    }
    Ok(())
}

/// Grace-Walsh-Szegő reduction: a multi-affine polynomial symmetric within
/// each block of `blocks` (block sizes; `None` means one block) is
/// `C`-stable iff its depolarization is. One block gives an exact univariate
/// test; several blocks are decided by the falsifier on the depolarized
/// polynomial.
pub fn certify_symmetric_multiaffine<T: Real>(
    f: &Polynomial<T>,
    c: &CircularDomain<T>,
    blocks: Option<&MultiIndex>,
    seed: u64,
) -> Result<Verdict<T>> {
    let n = f.nvars();
    let one_block = MultiIndex::new(vec![n as u32]);
    let blocks = blocks.unwrap_or(&one_block);
    if blocks.total() as usize != n {
        return Err(Error::Shape(format!(
            "blocks {:?} do not cover {} variables",
            blocks.as_slice(),
            n
        )));
    }
    if !f.is_multi_affine() {
        return Err(Error::NotMultiAffine(format!("{n} variables")));
    }
    check_block_symmetry(f, blocks)?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("stability verdict"));
    }
    if !c.is_convex() && f.total_degree() != Some(n as u32) {
        return Err(Error::InvalidArgument(
            "non-convex domain requires full total degree".into(),
        ));
    }
    let g = depolarize(f, blocks)?;
    let verdict = if blocks.len() == 1 {
        stable_univariate(&g, c)?
    } else {
        let omega = DomainProduct::broadcast(*c, blocks.len());
        falsify(&g, &omega, DEFAULT_BUDGET, seed)
    };
    Ok(match verdict {
        Verdict::Falsified { witness, .. } => {
            let mut lifted = Vec::with_capacity(n);
            for (i, &k) in blocks.as_slice().iter().enumerate() {
                lifted.extend(std::iter::repeat(witness[i]).take(k as usize));
            }
            let value = f.eval(&lifted).norm();
            Verdict::Falsified {
                witness: lifted,
                value,
            }
        }
        v => v,
    })
}

#[derive(Clone, Debug)]
pub struct KreinReport<T: Real> {
    /// Verdict on `h = f + i g` over `H₀ⁿ`.
    pub direct: Verdict<T>,
    /// Verdict on `f + z_{n+1} g` over `H₀ⁿ⁺¹`.
    pub lifted: Verdict<T>,
    pub consistent: bool,
}

/// Stability of `f + i g` for real `f`, `g`, checked directly and through
/// the lifted polynomial `f + z_{n+1} g`.
pub fn krein_real_stable<T: Real>(
    f: &Polynomial<T>,
    g: &Polynomial<T>,
    budget: usize,
    seed: u64,
) -> Result<KreinReport<T>> {
    let tol = T::lit(1e-12);
    if !f.is_real(tol) || !g.is_real(tol) {
        return Err(Error::NotReal);
    }
    if f.nvars() != g.nvars() {
        return Err(Error::NvarsMismatch(f.nvars(), g.nvars()));
    }
    let n = f.nvars();
    let h = f.checked_add(&g.scale_by(ci()))?;
    let h0 = CircularDomain::upper_half_plane();
    let direct = if h.is_zero() {
        Verdict::Falsified {
            witness: vec![C::new(T::zero(), T::one()); n],
            value: T::zero(),
        }
    } else {
        check(&h, &DomainProduct::broadcast(h0, n), Mode::Auto, budget, seed)?
    };
    let map: Vec<usize> = (0..n).collect();
    let fl = f.embed(n + 1, &map)?;
    let gl = g.embed(n + 1, &map)?;
    let lifted_poly = fl.checked_add(&gl.checked_mul(&Polynomial::var(n + 1, n))?)?;
    let lifted = if lifted_poly.is_zero() {
        Verdict::Falsified {
            witness: vec![C::new(T::zero(), T::one()); n + 1],
            value: T::zero(),
        }
    } else {
        check(
            &lifted_poly,
            &DomainProduct::broadcast(h0, n + 1),
            Mode::Auto,
            budget,
            seed,
        )?
    };
    let consistent = direct.is_falsified() == lifted.is_falsified();
    Ok(KreinReport {
        direct,
        lifted,
        consistent,
    })
}

/// Same-phase property of a homogeneous polynomial: returns whether every
/// nonzero coefficient of `e^{−iα} f` is positive, with `α` the argument of
/// the largest coefficient.
pub fn same_phase_check<T: Real>(f: &Polynomial<T>) -> Result<(bool, T)> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("phase"));
    }
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let (_, lead) = f
        .terms()
        .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap_or(std::cmp::Ordering::Equal))
        .expect("nonzero");
    let alpha = lead.arg();
    let rot = C::from_polar(T::one(), -alpha);
    let tol = T::lit(1e-9);
    let ok = f.terms().all(|(_, c)| (c * rot).arg().abs() <= tol);
    Ok((ok, alpha))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Exact criterion when one applies, otherwise the falsifier.
    Auto,
    /// Falsifier only.
    Falsify,
    /// Exact criteria only; `Unknown` with zero trials when none applies.
    Certify,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Mode::Auto),
            "falsify" => Ok(Mode::Falsify),
            "certify" => Ok(Mode::Certify),
            _ => Err(Error::InvalidArgument(format!("unknown mode {s:?}"))),
        }
    }
}

fn is_standard_upper<T: Real>(d: &CircularDomain<T>) -> bool {
    matches!(d.kind, DomainKind::HalfPlane { theta, offset } if theta == T::zero() && offset == T::zero())
}

/// Decides `Ω`-stability by the first applicable exact route, falling back
/// to the falsifier.
pub fn check<T: Real>(
    f: &Polynomial<T>,
    omega: &DomainProduct<T>,
    mode: Mode,
    budget: usize,
    seed: u64,
) -> Result<Verdict<T>> {
    let n = f.nvars();
    if omega.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: omega.len(),
        });
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("stability verdict"));
    }
    if mode != Mode::Falsify {
        if let Some(v) = exact_route(f, omega, seed)? {
            return Ok(v);
        }
        if mode == Mode::Certify {
            return Ok(Verdict::unknown_empty());
        }
    }
    Ok(falsify(f, omega, budget, seed))
}

fn exact_route<T: Real>(
    f: &Polynomial<T>,
    omega: &DomainProduct<T>,
    seed: u64,
) -> Result<Option<Verdict<T>>> {
    let n = f.nvars();
    let active: Vec<usize> = (0..n).filter(|&i| f.is_active(i)).collect();
    if active.is_empty() {
        return Ok(Some(Verdict::Certified {
            closure: omega.factors()[0].closure,
        }));
    }
    // a polynomial in a single active variable is decided by its roots
    if active.len() == 1 {
        let i = active[0];
        let g = Polynomial::univariate(&f.dense_in(i));
        let v = stable_univariate(&g, &omega.factors()[i])?;
        return Ok(Some(match v {
            Verdict::Falsified { witness, .. } => {
                let mut pt: Vec<C<T>> = omega.factors().iter().map(|d| d.interior_point()).collect();
                pt[i] = witness[0];
                let value = f.eval(&pt).norm();
                Verdict::Falsified { witness: pt, value }
            }
            v => v,
        }));
    }
    let same = omega.factors().iter().all(|d| *d == omega.factors()[0]);
    let d0 = omega.factors()[0];
    if n == 2 && f.is_multi_affine() && same {
        let std_upper = is_standard_upper(&d0);
        if std_upper {
            let rep = bivariate_criteria(f, BivariateCriterion::LemmaMax)?;
            match (&rep.verdict, d0.closure) {
                (Verdict::Certified { .. }, _) => return Ok(Some(rep.verdict)),
                (Verdict::Falsified { witness, .. }, _) if omega.contains(witness) => {
                    return Ok(Some(rep.verdict))
                }
                _ => {}
            }
        }
    }
    if same && f.is_multi_affine() && f.symmetry_index() <= T::lit(SYMMETRY_TOL) * f.scale() {
        match certify_symmetric_multiaffine(f, &d0, None, seed) {
            Ok(v) => return Ok(Some(v)),
            Err(Error::InvalidArgument(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests;
