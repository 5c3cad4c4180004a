use rayon::prelude::*;

use super::{require_bound, CouplingMatrix, HermitianContractionMatrix, BRUTE_FORCE_BOUND, CIRCLE_DIRECT_BOUND};
use crate::error::{Error, Result};
use crate::operators::{diff_operator_apply, schur_hadamard};
use crate::poly::{MultiIndex, Polynomial};
use crate::scalar::{cone, creal, Real, C};

/// Bitmask `S` to the exponent of `w^S`.
fn mask_index(n: usize, s: usize) -> MultiIndex {
    MultiIndex::new((0..n).map(|i| ((s >> i) & 1) as u32).collect())
}

fn all_ones<T: Real>(n: usize) -> Polynomial<T> {
    Polynomial::product_of_affine(
        n,
        &(0..n)
            .map(|i| {
                let mut b = vec![C::new(T::zero(), T::zero()); n];
                b[i] = cone();
                (cone(), b)
            })
            .collect::<Vec<_>>(),
    )
}

/// Multiplies the coefficient of `w^S` by `e^J` when `i, j` are both in or
/// both out of `S`, and by `e^{-J}` otherwise.
pub fn edge_reweight<T: Real>(p: &Polynomial<T>, i: usize, j: usize, coupling: T) -> Result<Polynomial<T>> {
    let n = p.nvars();
    for k in [i, j] {
        if k >= n {
            return Err(Error::IndexOutOfRange { index: k, nvars: n });
        }
    }
    if !p.is_multi_affine() {
        return Err(Error::NotMultiAffine(p.to_string()));
    }
    if !(coupling >= T::zero()) {
        return Err(Error::InvalidArgument("coupling must be nonnegative".into()));
    }
    let up = creal(coupling.exp());
    let down = creal((-coupling).exp());
    Ok(p.map_coeffs(|a, c| if a[i] == a[j] { c * up } else { c * down }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsingRoute {
    /// Sum over all `2^n` spin configurations.
    BruteForce,
    /// Edge reweighting of `∏(1 + w_i)`.
    Reweight,
    /// `cosh J + sinh J ∂_{h_i}∂_{h_j}` on the fugacity polynomial.
    CoshSinh,
}

/// Fugacity partition polynomial `Σ_S μ(σ_S) w^S` with `w_i = e^{-2h_i}`,
/// `σ_S = -1` exactly on `S`, and `μ(σ) = exp(Σ_{i,j} J_ij σ_i σ_j)` summed
/// over ordered pairs. Equals `Z(h) e^{-Σh}`.
pub fn ising_partition<T: Real>(j: &CouplingMatrix<T>, route: IsingRoute) -> Result<Polynomial<T>> {
    match route {
        IsingRoute::BruteForce => ising_brute_force(j),
        IsingRoute::Reweight => ising_reweight(j),
        IsingRoute::CoshSinh => ising_cosh_sinh(j),
    }
}

pub fn ising_brute_force<T: Real>(j: &CouplingMatrix<T>) -> Result<Polynomial<T>> {
    let n = j.n();
    require_bound("spins", n, BRUTE_FORCE_BOUND)?;
    let terms: Vec<(MultiIndex, C<T>)> = (0..1usize << n)
        .into_par_iter()
        .map(|s| {
            let sigma = |i: usize| if (s >> i) & 1 == 1 { -T::one() } else { T::one() };
            let mut e = T::zero();
            for a in 0..n {
                for b in 0..n {
                    e = e + j.get(a, b) * sigma(a) * sigma(b);
                }
            }
            (mask_index(n, s), creal(e.exp()))
        })
        .collect();
    Polynomial::from_terms(n, terms)
}

fn diagonal_weight<T: Real>(j: &CouplingMatrix<T>) -> C<T> {
    creal((0..j.n()).fold(T::zero(), |acc, i| acc + j.get(i, i)).exp())
}

pub fn ising_reweight<T: Real>(j: &CouplingMatrix<T>) -> Result<Polynomial<T>> {
    let n = j.n();
    let mut p = all_ones::<T>(n).scale_by(diagonal_weight(j));
    for a in 0..n {
        for b in 0..n {
            if a != b && j.get(a, b) != T::zero() {
                p = edge_reweight(&p, a, b, j.get(a, b))?;
            }
        }
    }
    Ok(p)
}

/// In fugacity variables `∂_{h_i}` acts as `2 w_i ∂_{w_i} - 1` up to the sign
/// convention, which cancels in the product `∂_{h_i}∂_{h_j}`.
pub fn ising_cosh_sinh<T: Real>(j: &CouplingMatrix<T>) -> Result<Polynomial<T>> {
    let n = j.n();
    require_bound("spins", n, 4)?;
    let mut p = all_ones::<T>(n).scale_by(diagonal_weight(j));
    let var = |i: usize| Polynomial::<T>::var(n, i);
    for a in 0..n {
        for b in 0..n {
            let jab = j.get(a, b);
            if a == b || jab == T::zero() {
                continue;
            }
            let (c, s) = (jab.cosh(), jab.sinh());
            let two = T::lit(2.0);
            let spec = vec![
                (MultiIndex::zeros(n), Polynomial::constant(n, creal(c + s))),
                (MultiIndex::unit(n, a), var(a).scale_by(creal(-two * s))),
                (MultiIndex::unit(n, b), var(b).scale_by(creal(-two * s))),
                (
                    MultiIndex::unit(n, a).add(&MultiIndex::unit(n, b)),
                    (&var(a) * &var(b)).scale_by(creal(two * two * s)),
                ),
            ];
            p = diff_operator_apply(&spec, &p)?;
        }
    }
    Ok(p)
}

/// `Σ_S z^S ∏_{i∈S} ∏_{j∉S} a_ij`, built from pair factors by the
/// Schur–Hadamard product.
pub fn lee_yang_circle<T: Real>(a: &HermitianContractionMatrix<T>) -> Result<Polynomial<T>> {
    lee_yang_schur(a)
}

pub fn lee_yang_direct<T: Real>(a: &HermitianContractionMatrix<T>) -> Result<Polynomial<T>> {
    let n = a.n();
    require_bound("vertices", n, CIRCLE_DIRECT_BOUND)?;
    let terms: Vec<(MultiIndex, C<T>)> = (0..1usize << n)
        .into_par_iter()
        .map(|s| {
            let mut c = cone::<T>();
            for i in (0..n).filter(|i| (s >> i) & 1 == 1) {
                for k in (0..n).filter(|k| (s >> k) & 1 == 0) {
                    c *= a.get(i, k);
                }
            }
            (mask_index(n, s), c)
        })
        .collect();
    Polynomial::from_terms(n, terms)
}

pub fn lee_yang_schur<T: Real>(a: &HermitianContractionMatrix<T>) -> Result<Polynomial<T>> {
    let n = a.n();
    let ones = all_ones::<T>(n);
    let kappa = MultiIndex::ones(n);
    let mut acc = ones.clone();
    for i in 0..n {
        for k in i + 1..n {
            let rest: Vec<(C<T>, Vec<C<T>>)> = (0..n)
                .filter(|&m| m != i && m != k)
                .map(|m| {
                    let mut b = vec![C::new(T::zero(), T::zero()); n];
                    b[m] = cone();
                    (cone(), b)
                })
                .collect();
            let zi = Polynomial::var(n, i);
            let zk = Polynomial::var(n, k);
            let pair = &(&(&Polynomial::one(n) + &zi.scale_by(a.get(i, k))) + &zk.scale_by(a.get(k, i))) + &(&zi * &zk);
            let factor = &pair * &Polynomial::product_of_affine(n, &rest);
            acc = schur_hadamard(&acc, &factor, &kappa)?;
        }
    }
    Ok(acc)
}
