use std::fmt::Write as _;

use crate::domains::{phi_kappa_transform, MoebiusMap};
use crate::error::{Error, Result};
use crate::operators::real_part_operator;
use crate::poly::{MultiIndex, Polynomial};
use crate::scalar::{creal, Real, C};
use crate::stability::univariate_roots;

const REAL_ROOT_TOL: f64 = 1e-8;

/// `G(z+ia)e^{ib} + G(z−ia)e^{−ib}` for real-rooted real `G`.
pub fn hilfssatz_truncated<T: Real>(g: &Polynomial<T>, a: T, b: T) -> Result<Polynomial<T>> {
    if g.nvars() != 1 {
        return Err(Error::Shape(format!("expected a univariate polynomial, got {} variables", g.nvars())));
    }
    if !(a > T::zero()) {
        return Err(Error::InvalidArgument("shift must be positive".into()));
    }
    if !g.is_real(T::lit(1e-12)) {
        return Err(Error::NotReal);
    }
    let d = g.degree_in(0);
    if d > 0 {
        let tol = T::lit(REAL_ROOT_TOL);
        if univariate_roots(g)?.iter().any(|r| r.im.abs() > tol * r.norm().max(T::one())) {
            return Err(Error::NotRealRooted);
        }
    }
    let shift = MoebiusMap::translation(C::new(T::zero(), a));
    let shifted = phi_kappa_transform(g, &[shift], &MultiIndex::new(vec![d]))?;
    let rotated = shifted.scale_by(C::new(b.cos(), b.sin()));
    Ok(real_part_operator(&rotated).scale_by(creal(T::lit(2.0))))
}

/// One-parameter restriction families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanFamily {
    /// `z_1 = t`, `z_j = s·t` for `j ≥ 2`.
    Diagonal,
    /// `z_i = t`, every other variable fixed at `s`.
    Axis(usize),
    /// `z_1 = −i t`, `z_j = −i s·t` for `j ≥ 2`.
    ImaginaryDiagonal,
}

impl std::str::FromStr for ScanFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "diagonal" => Ok(ScanFamily::Diagonal),
            "imaginary" | "imaginary-diagonal" => Ok(ScanFamily::ImaginaryDiagonal),
            _ => {
                let k = s
                    .strip_prefix("axis:")
                    .and_then(|k| k.parse::<usize>().ok())
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown scan family `{s}`")))?;
                Ok(ScanFamily::Axis(k - 1))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanRow<T: Real> {
    pub param: T,
    pub root: C<T>,
}

impl<T: Real> ScanRow<T> {
    pub const HEADER: &'static str = "param,root_re,root_im,root_abs";

    pub fn csv(rows: &[Self]) -> String {
        let mut s = String::from(Self::HEADER);
        s.push('\n');
        for r in rows {
            let _ = writeln!(s, "{},{},{},{}", r.param.f64(), r.root.re.f64(), r.root.im.f64(), r.root.norm().f64());
        }
        s
    }
}

/// Roots of `P` along each member of the family, one row per root. Members
/// on which the restriction vanishes identically or is constant contribute
/// no rows.
pub fn zero_locus_scan<T: Real>(p: &Polynomial<T>, family: ScanFamily, grid: &[T]) -> Result<Vec<ScanRow<T>>> {
    let n = p.nvars();
    if let ScanFamily::Axis(i) = family {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, nvars: n });
        }
    }
    let zero = C::new(T::zero(), T::zero());
    let mut rows = Vec::new();
    for &s in grid {
        let (base, dir): (Vec<C<T>>, Vec<C<T>>) = match family {
            ScanFamily::Diagonal | ScanFamily::ImaginaryDiagonal => {
                let unit = if family == ScanFamily::Diagonal {
                    creal(T::one())
                } else {
                    C::new(T::zero(), -T::one())
                };
                let dir = (0..n).map(|j| if j == 0 { unit } else { unit * s }).collect();
                (vec![zero; n], dir)
            }
            ScanFamily::Axis(i) => {
                let base = (0..n).map(|j| if j == i { zero } else { creal(s) }).collect();
                let dir = (0..n).map(|j| if j == i { creal(T::one()) } else { zero }).collect();
                (base, dir)
            }
        };
        let line = p.restrict_line(&base, &dir)?;
        if line.is_zero() || line.degree_in(0) == 0 {
            continue;
        }
        rows.extend(univariate_roots(&line)?.into_iter().map(|root| ScanRow { param: s, root }));
    }
    Ok(rows)
}
