//! Seeded families of polynomials that are stable by construction.
//!
//! * products of affine forms `a + Σ b_j z_j` with `b_j ≥ 0`, `Im a ≥ 0`
//!   (upper half-plane stable; real stable when `a` is real);
//! * Möbius transports of those onto arbitrary circular domains;
//! * polarizations of real-rooted univariates;
//! * diagonal polynomials `C ∏ ∏_k (z_i w_i − r_ik)` with `r_ik ≥ 0`.

use rand::Rng;

use crate::domains::{phi_kappa_transform, CircularDomain, DomainProduct, MoebiusMap};
use crate::error::Result;
use crate::operators::polarization;
use crate::poly::{MultiIndex, Polynomial};
use crate::scalar::{cone, creal, Real, C};

fn uniform<T: Real, R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> T {
    T::lit(lo + (hi - lo) * rng.gen::<f64>())
}

/// Product of affine forms with degree vector `≤ κ` (exactly `κ` when
/// `full`). Nonvanishing on the open upper half-plane product; real stable
/// when `real`.
pub fn affine_product<T: Real, R: Rng + ?Sized>(
    kappa: &MultiIndex,
    full: bool,
    real: bool,
    rng: &mut R,
) -> Polynomial<T> {
    let n = kappa.len();
    let m = kappa.as_slice().iter().copied().max().unwrap_or(0).max(1) as usize;
    let mut acc = Polynomial::one(n);
    for k in 0..m {
        let mut coeffs = vec![C::new(T::zero(), T::zero()); n];
        let mut any = false;
        for (i, c) in coeffs.iter_mut().enumerate() {
            if (k as u32) < kappa[i] && (full || rng.gen::<f64>() < 0.7) {
                *c = creal(uniform(rng, 0.2, 2.0));
                any = true;
            }
        }
        let re = uniform(rng, -2.0, 2.0);
        let im = if real || (any && rng.gen::<f64>() < 0.5) {
            T::zero()
        } else {
            uniform(rng, 0.1, 2.0)
        };
        let factor = Polynomial::product_of_affine(n, &[(C::new(re, im), coeffs)]);
        acc = &acc * &factor;
    }
    acc
}

/// Random real numbers (roots) in `[-3, 3]`.
pub fn real_roots<T: Real, R: Rng + ?Sized>(count: usize, rng: &mut R) -> Vec<T> {
    (0..count).map(|_| uniform(rng, -3.0, 3.0)).collect()
}

/// `∏ (z − r_k)` with seeded real roots.
pub fn real_rooted_univariate<T: Real, R: Rng + ?Sized>(degree: usize, rng: &mut R) -> Polynomial<T> {
    let roots: Vec<C<T>> = real_roots::<T, R>(degree, rng).into_iter().map(creal).collect();
    from_roots(&roots)
}

/// `lead · ∏ (z − r_k)`.
pub fn from_roots<T: Real>(roots: &[C<T>]) -> Polynomial<T> {
    let factors: Vec<(C<T>, Vec<C<T>>)> = roots.iter().map(|r| (-*r, vec![cone()])).collect();
    Polynomial::product_of_affine(1, &factors)
}

/// Polarization of `∏_i g_i(z_i)` with each `g_i` real-rooted of degree
/// `κ_i`; block-symmetric, multi-affine and real stable.
pub fn polarized_real_rooted<T: Real, R: Rng + ?Sized>(kappa: &MultiIndex, rng: &mut R) -> Result<Polynomial<T>> {
    let n = kappa.len();
    let mut g = Polynomial::one(n);
    for i in 0..n {
        let gi = real_rooted_univariate::<T, R>(kappa[i] as usize, rng);
        g = &g * &gi.embed(n, &[i])?;
    }
    polarization(&g, kappa)
}

/// An upper-half-plane stable polynomial of degree `≤ κ` (exactly `κ` when
/// `full`) transported so that it is nonvanishing on `Ω`.
pub fn domain_stable<T: Real, R: Rng + ?Sized>(
    omega: &DomainProduct<T>,
    kappa: &MultiIndex,
    full: bool,
    rng: &mut R,
) -> Result<Polynomial<T>> {
    let f = affine_product(kappa, full, false, rng);
    let h0 = CircularDomain::upper_half_plane().from_unit_disk();
    let maps: Vec<MoebiusMap<T>> = omega
        .factors()
        .iter()
        .map(|d| h0.compose(&d.to_unit_disk()))
        .collect();
    phi_kappa_transform(&f, &maps, kappa)
}

/// Like [`domain_stable`] but nonvanishing on the closure of `Ω`: the
/// upper-half-plane polynomial has degree exactly `κ` (no zero at the
/// preimage of ∞) and is shifted by `i·margin` before transport.
pub fn strictly_stable<T: Real, R: Rng + ?Sized>(
    omega: &DomainProduct<T>,
    kappa: &MultiIndex,
    margin: T,
    rng: &mut R,
) -> Result<Polynomial<T>> {
    let f = affine_product(kappa, true, false, rng);
    let shift = MoebiusMap::translation(C::new(T::zero(), margin));
    let h0 = CircularDomain::upper_half_plane().from_unit_disk();
    let maps: Vec<MoebiusMap<T>> = omega
        .factors()
        .iter()
        .map(|d| shift.compose(&h0.compose(&d.to_unit_disk())))
        .collect();
    phi_kappa_transform(&f, &maps, kappa)
}

/// Product of affine forms `1 + Σ b_j z_j` with `Σ |b_j| < 1`: nonvanishing
/// on the closed unit polydisk. Degree `≤ κ`.
pub fn polydisk_stable<T: Real, R: Rng + ?Sized>(kappa: &MultiIndex, rng: &mut R) -> Polynomial<T> {
    let n = kappa.len();
    let m = kappa.as_slice().iter().copied().max().unwrap_or(0).max(1) as usize;
    let mut acc = Polynomial::one(n);
    for k in 0..m {
        let active: Vec<usize> = (0..n).filter(|&i| (k as u32) < kappa[i]).collect();
        let budget = 0.95 / active.len().max(1) as f64;
        let mut coeffs = vec![C::new(T::zero(), T::zero()); n];
        for &i in &active {
            let r = budget * rng.gen::<f64>();
            let a = std::f64::consts::TAU * rng.gen::<f64>();
            coeffs[i] = C::new(T::lit(r * a.cos()), T::lit(r * a.sin()));
        }
        acc = &acc * &Polynomial::product_of_affine(n, &[(cone(), coeffs)]);
    }
    acc
}

/// `C ∏_i ∏_{k < d_i} (z_i w_i − r_ik)` with `r_ik ≥ 0`, variables ordered
/// `z_1..z_n, w_1..w_n`. Stable with diagonal support.
pub fn stable_diagonal<T: Real, R: Rng + ?Sized>(degrees: &[u32], rng: &mut R) -> Polynomial<T> {
    let n = degrees.len();
    let mut acc = Polynomial::constant(2 * n, creal(uniform(rng, 0.5, 2.0)));
    for (i, &d) in degrees.iter().enumerate() {
        for _ in 0..d {
            let r: T = uniform(rng, 0.0, 3.0);
            let mut e = vec![0u32; 2 * n];
            e[i] = 1;
            e[n + i] = 1;
            let t = Polynomial::monomial(2 * n, MultiIndex::new(e), cone());
            let factor = &t - &Polynomial::constant(2 * n, creal(r));
            acc = &acc * &factor;
        }
    }
    acc
}

/// Hermitian matrix with entries in the closed unit disk (unit diagonal).
pub fn hermitian_contraction<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Vec<C<T>>> {
    let mut a = vec![vec![cone::<T>(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let r = rng.gen::<f64>().sqrt();
            let t = std::f64::consts::TAU * rng.gen::<f64>();
            let z = C::new(T::lit(r * t.cos()), T::lit(r * t.sin()));
            a[i][j] = z;
            a[j][i] = z.conj();
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stability::{falsify, real_stable_consistent};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type D = CircularDomain<f64>;

    #[test]
    fn affine_products_are_stable() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let kappa = MultiIndex::new(vec![2, 1, 2]);
        let omega = DomainProduct::broadcast(D::upper_half_plane(), 3);
        for k in 0..20 {
            let f: Polynomial<f64> = affine_product(&kappa, k % 2 == 0, false, &mut rng);
            assert!(f.degree_within(&kappa));
            if k % 2 == 0 {
                assert_eq!(f.degree_vector().unwrap(), kappa);
            }
            assert!(falsify(&f, &omega, 2000, k).is_unknown());
            let g: Polynomial<f64> = affine_product(&kappa, true, true, &mut rng);
            assert!(real_stable_consistent(&g, 100, k).unwrap());
        }
    }

    #[test]
    fn transported_families_are_stable() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let kappa = MultiIndex::new(vec![1, 2]);
        let omegas = [
            DomainProduct::broadcast(D::unit_disk(), 2),
            DomainProduct::broadcast(D::unit_exterior(), 2),
            DomainProduct(vec![D::half_plane(1.0), D::disk(C::new(1.0, 1.0), 0.5).unwrap()]),
        ];
        for (k, omega) in omegas.iter().enumerate() {
            for j in 0..5 {
                let f = domain_stable(omega, &kappa, true, &mut rng).unwrap();
                assert!(falsify(&f, omega, 2000, (10 * k + j) as u64).is_unknown(), "{omega} {f}");
            }
        }
        let disk = DomainProduct::broadcast(D::unit_disk().closed(), 2);
        for j in 0..5 {
            let f: Polynomial<f64> = polydisk_stable(&kappa, &mut rng);
            assert!(falsify(&f, &disk, 2000, j).is_unknown());
        }
    }

    #[test]
    fn polarized_and_diagonal_families() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let kappa = MultiIndex::new(vec![2, 2]);
        let f: Polynomial<f64> = polarized_real_rooted(&kappa, &mut rng).unwrap();
        assert!(f.is_multi_affine() && f.nvars() == 4);
        assert!(real_stable_consistent(&f, 100, 0).unwrap());
        let g: Polynomial<f64> = stable_diagonal(&[2, 1], &mut rng);
        let omega = DomainProduct::broadcast(D::upper_half_plane(), 4);
        assert!(falsify(&g, &omega, 2000, 0).is_unknown());
        let a: Vec<Vec<C<f64>>> = hermitian_contraction(4, &mut rng);
        for i in 0..4 {
            for j in 0..4 {
                assert!(a[i][j].norm() <= 1.0 + 1e-15);
                assert_eq!(a[i][j], a[j][i].conj());
            }
        }
    }
}
