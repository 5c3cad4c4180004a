use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::MonomialOperator;
use crate::error::{Error, Result};
use crate::poly::{MultiIndex, Polynomial};
use crate::scalar::{binomial, creal, czero, factorial, Real, C};

/// Distinct rearrangements of `v` (lexicographic, via next-permutation).
pub(crate) fn distinct_permutations(v: &[u32]) -> Vec<Vec<u32>> {
    let mut cur = v.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    loop {
        let n = cur.len();
        if n < 2 {
            return out;
        }
        let mut i = n - 1;
        while i > 0 && cur[i - 1] >= cur[i] {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        let mut j = n - 1;
        while cur[j] <= cur[i - 1] {
            j -= 1;
        }
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// `Sym(f) = (1/n!) Σ_σ σ(f)`, computed orbit by orbit.
pub fn sym<T: Real>(f: &Polynomial<T>) -> Polynomial<T> {
    let n = f.nvars();
    let mut acc: HashMap<MultiIndex, C<T>> = HashMap::new();
    let mut cache: HashMap<Vec<u32>, Vec<Vec<u32>>> = HashMap::new();
    for (alpha, c) in f.terms() {
        let key = alpha.orbit_key();
        let orbit = cache
            .entry(key.clone())
            .or_insert_with(|| distinct_permutations(&key));
        let share = c.unscale(T::from_usize_lossy(orbit.len()));
        for beta in orbit.iter() {
            *acc.entry(MultiIndex::new(beta.clone())).or_insert_with(czero) += share;
        }
    }
    Polynomial::from_terms(n, acc).expect("same nvars")
}

/// `p f + (1−p) τ_{ij}(f)`.
pub fn partial_swap<T: Real>(f: &Polynomial<T>, p: T, i: usize, j: usize) -> Result<Polynomial<T>> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::InvalidArgument(format!("p = {p} is outside [0, 1]")));
    }
    if i == j {
        return Err(Error::InvalidArgument("transposition needs i ≠ j".into()));
    }
    let swapped = f.transpose(i, j)?;
    Ok(&f.scale_by(creal(p)) + &swapped.scale_by(creal(T::one() - p)))
}

/// `T_σ(f) = (1/|⟨σ⟩|) Σ_{τ ∈ ⟨σ⟩} τ(f)`.
pub fn t_sigma<T: Real>(f: &Polynomial<T>, sigma: &[usize]) -> Result<Polynomial<T>> {
    let n = f.nvars();
    let id: Vec<usize> = (0..n).collect();
    f.permute(sigma)?;
    let mut powers = vec![id.clone()];
    let mut cur: Vec<usize> = sigma.to_vec();
    while cur != id {
        powers.push(cur.clone());
        cur = cur.iter().map(|&k| sigma[k]).collect();
    }
    let mut acc = Polynomial::zero(n);
    for s in &powers {
        acc = &acc + &f.permute(s)?;
    }
    Ok(acc.scale_by(creal(T::one() / T::from_usize_lossy(powers.len()))))
}

/// Block offsets of a polarization with block sizes `κ`.
pub fn block_offsets(kappa: &MultiIndex) -> Vec<usize> {
    let mut off = Vec::with_capacity(kappa.len());
    let mut acc = 0;
    for &k in kappa.as_slice() {
        off.push(acc);
        acc += k as usize;
    }
    off
}

fn subsets_of_size(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for k in start..n {
            if n - k < m - cur.len() {
                break;
            }
            cur.push(k);
            rec(k + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, m, &mut Vec::new(), &mut out);
    out
}

/// Multi-affine block-symmetric polarization: `z_i^m ↦ e_m(block i)/C(κ_i, m)`,
/// block `i` occupying `κ_i` consecutive variables.
pub fn polarization<T: Real>(g: &Polynomial<T>, kappa: &MultiIndex) -> Result<Polynomial<T>> {
    g.require_degree_within(kappa)?;
    let total = kappa.total() as usize;
    let offsets = block_offsets(kappa);
    let mut acc: HashMap<MultiIndex, C<T>> = HashMap::new();
    for (alpha, c) in g.terms() {
        let mut partial: Vec<(MultiIndex, C<T>)> = vec![(MultiIndex::zeros(total), *c)];
        for i in 0..kappa.len() {
            let k = kappa[i] as usize;
            let m = alpha[i] as usize;
            let norm = T::one() / binomial::<T>(k as u32, m as u32);
            let subsets = subsets_of_size(k, m);
            let mut next = Vec::with_capacity(partial.len() * subsets.len());
            for (e, x) in &partial {
                for s in &subsets {
                    let mut e2 = e.clone();
                    for &v in s {
                        e2[offsets[i] + v] = 1;
                    }
                    next.push((e2, x.scale(norm)));
                }
            }
            partial = next;
        }
        for (e, x) in partial {
            *acc.entry(e).or_insert_with(czero) += x;
        }
    }
    Polynomial::from_terms(total, acc)
}

/// Collapses each polarization block back to a single variable.
pub fn depolarize<T: Real>(f: &Polynomial<T>, kappa: &MultiIndex) -> Result<Polynomial<T>> {
    if f.nvars() != kappa.total() as usize {
        return Err(Error::LengthMismatch {
            expected: kappa.total() as usize,
            got: f.nvars(),
        });
    }
    let mut map = Vec::with_capacity(f.nvars());
    for (i, &k) in kappa.as_slice().iter().enumerate() {
        map.extend(std::iter::repeat(i).take(k as usize));
    }
    f.embed(kappa.len(), &map)
}

/// MAP: the multi-affine part.
pub fn map_multiaffine_part<T: Real>(f: &Polynomial<T>) -> Polynomial<T> {
    f.filter_terms(|a| a.as_slice().iter().all(|&e| e <= 1))
}

/// MOD on the selected variables: `a(α) z^{α mod 2}`.
pub fn mod2_fold<T: Real>(f: &Polynomial<T>, vars: &[usize]) -> Result<Polynomial<T>> {
    if let Some(&bad) = vars.iter().find(|&&v| v >= f.nvars()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            nvars: f.nvars(),
        });
    }
    Ok(f.map_exponents(f.nvars(), |a| Some(a.mod2_on(vars))))
}

/// MOD on every variable.
pub fn mod2_fold_all<T: Real>(f: &Polynomial<T>) -> Polynomial<T> {
    let vars: Vec<usize> = (0..f.nvars()).collect();
    mod2_fold(f, &vars).expect("all indices valid")
}

/// Asano contraction: `a + b z_i + c z_j + d z_i z_j ↦ a + d z_i`.
pub fn asano_contract<T: Real>(f: &Polynomial<T>, i: usize, j: usize) -> Result<Polynomial<T>> {
    if i >= f.nvars() || j >= f.nvars() || i == j {
        return Err(Error::InvalidArgument(format!("bad contraction pair ({i}, {j})")));
    }
    if !f.is_multi_affine_in(i) || !f.is_multi_affine_in(j) {
        return Err(Error::NotMultiAffine(format!("z{} or z{}", i + 1, j + 1)));
    }
    Ok(f.map_exponents(f.nvars(), |a| match (a[i], a[j]) {
        (0, 0) => Some(a.clone()),
        (1, 1) => {
            let mut b = a.clone();
            b[j] = 0;
            Some(b)
        }
        _ => None,
    }))
}

/// `c(α) = a(α) b(α) / C(κ, α)`.
pub fn schur_hadamard<T: Real>(
    f: &Polynomial<T>,
    g: &Polynomial<T>,
    kappa: &MultiIndex,
) -> Result<Polynomial<T>> {
    if f.nvars() != g.nvars() {
        return Err(Error::NvarsMismatch(f.nvars(), g.nvars()));
    }
    f.require_degree_within(kappa)?;
    g.require_degree_within(kappa)?;
    Ok(f.map_coeffs(|a, c| c * g.coeff(a) / kappa.binomial::<T>(a)))
}

/// `f ⋆ g = Σ a(S) b(T) z^{S Δ T}` on multi-affine inputs.
pub fn convolution_star<T: Real>(f: &Polynomial<T>, g: &Polynomial<T>) -> Result<Polynomial<T>> {
    if f.nvars() != g.nvars() {
        return Err(Error::NvarsMismatch(f.nvars(), g.nvars()));
    }
    if !f.is_multi_affine() || !g.is_multi_affine() {
        return Err(Error::NotMultiAffine("convolution input".into()));
    }
    let n = f.nvars();
    let mut acc: HashMap<MultiIndex, C<T>> = HashMap::new();
    for (a, x) in f.terms() {
        for (b, y) in g.terms() {
            let e: Vec<u32> = a.as_slice().iter().zip(b.as_slice()).map(|(p, q)| p ^ q).collect();
            *acc.entry(MultiIndex::new(e)).or_insert_with(czero) += x * y;
        }
    }
    Polynomial::from_terms(n, acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiebSokalVariant {
    T,
    S,
    R,
}

impl std::str::FromStr for LiebSokalVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "T" => Ok(Self::T),
            "S" => Ok(Self::S),
            "R" => Ok(Self::R),
            _ => Err(Error::InvalidArgument(format!("unknown variant '{s}'"))),
        }
    }
}

/// Hard Lieb-Sokal operators on the pair `(z₁, z₂)`:
/// `T_d = (1/d!) Σ_k ∂^d/∂z₁^k∂z₂^{d−k}`; with `f = Σ_k z₁^k Q_k`,
/// `S_d = (1/d!) Σ_k k! ∂_{z₂}^{d−k} Q_k` and
/// `R_d = (1/d!) Σ_k (−1)^k (d−k)! ∂_{z₂}^k Q_k`.
pub fn hard_lieb_sokal<T: Real>(
    f: &Polynomial<T>,
    variant: LiebSokalVariant,
    d: u32,
) -> Result<Polynomial<T>> {
    if f.nvars() < 2 {
        return Err(Error::InvalidArgument("need at least two variables".into()));
    }
    if f.degree_in(0) > d || f.degree_in(1) > d {
        let mut bound = vec![u32::MAX; f.nvars()];
        bound[0] = d;
        bound[1] = d;
        return Err(Error::DegreeExceeds {
            degree: f.degree_vector().map(|v| v.into_vec()).unwrap_or_default(),
            bound,
        });
    }
    let n = f.nvars();
    let inv = T::one() / factorial::<T>(d);
    let mut acc = Polynomial::zero(n);
    for k in 0..=d {
        let term = match variant {
            LiebSokalVariant::T => f.derivative_in(&[(0, k), (1, d - k)])?,
            LiebSokalVariant::S => f
                .coefficient_in(0, k)
                .partial_derivative(1, d - k)?
                .scale_by(creal(factorial::<T>(k))),
            LiebSokalVariant::R => {
                let sign = if k % 2 == 0 { T::one() } else { -T::one() };
                f.coefficient_in(0, k)
                    .partial_derivative(1, k)?
                    .scale_by(creal(sign * factorial::<T>(d - k)))
            }
        };
        acc = &acc + &term;
    }
    Ok(acc.scale_by(creal(inv)))
}

/// `Σ_α Q_α(z) ∂^α f`.
pub fn diff_operator_apply<T: Real>(
    spec: &[(MultiIndex, Polynomial<T>)],
    f: &Polynomial<T>,
) -> Result<Polynomial<T>> {
    let mut acc = Polynomial::zero(f.nvars());
    for (alpha, q) in spec {
        if q.nvars() != f.nvars() {
            return Err(Error::NvarsMismatch(f.nvars(), q.nvars()));
        }
        acc = &acc + &(q * &f.derivative(alpha)?);
    }
    Ok(acc)
}

/// t-deformed Weyl product
/// `Σ_α ((−1)^α t^α / α!) ∂^α_A f · ∂^α_B g` where `A[k]` and `B[k]` are the
/// paired differentiation variables of `f` and `g`.
pub fn weyl_product<T: Real>(
    f: &Polynomial<T>,
    g: &Polynomial<T>,
    a_vars: &[usize],
    b_vars: &[usize],
    t: &[T],
) -> Result<Polynomial<T>> {
    if f.nvars() != g.nvars() {
        return Err(Error::NvarsMismatch(f.nvars(), g.nvars()));
    }
    let m = a_vars.len();
    if b_vars.len() != m || t.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            got: b_vars.len().min(t.len()),
        });
    }
    let bound = MultiIndex::new(
        (0..m)
            .map(|k| f.degree_in(a_vars[k]).min(g.degree_in(b_vars[k])))
            .collect(),
    );
    let mut acc = Polynomial::zero(f.nvars());
    for alpha in bound.box_below() {
        let mut coef = T::one() / alpha.factorial::<T>();
        for k in 0..m {
            let e = alpha[k] as i32;
            coef = coef * (-t[k]).powi(e);
        }
        if coef == T::zero() {
            continue;
        }
        let da: Vec<(usize, u32)> = (0..m).map(|k| (a_vars[k], alpha[k])).collect();
        let db: Vec<(usize, u32)> = (0..m).map(|k| (b_vars[k], alpha[k])).collect();
        let term = &f.derivative_in(&da)? * &g.derivative_in(&db)?;
        acc = &acc + &term.scale_by(creal(coef));
    }
    Ok(acc)
}

/// Weyl product with the standard blocks `z = (z₁..z_n)`, `w = (z_{n+1}..z_{2n})`.
pub fn weyl_product_blocks<T: Real>(
    f: &Polynomial<T>,
    g: &Polynomial<T>,
    t: &[T],
) -> Result<Polynomial<T>> {
    let n2 = f.nvars();
    if n2 % 2 != 0 {
        return Err(Error::Shape("Weyl product needs an even number of variables".into()));
    }
    let n = n2 / 2;
    let a: Vec<usize> = (0..n).collect();
    let b: Vec<usize> = (n..n2).collect();
    weyl_product(f, g, &a, &b, t)
}

/// Univariate de Bruijn product `Σ_k t^k/k! f^{(k)} g^{(k)}`.
pub fn de_bruijn_product<T: Real>(f: &Polynomial<T>, g: &Polynomial<T>, t: T) -> Result<Polynomial<T>> {
    if f.nvars() != 1 || g.nvars() != 1 {
        return Err(Error::Shape("de Bruijn product is univariate".into()));
    }
    let top = f.degree_in(0).min(g.degree_in(0));
    let mut acc = Polynomial::zero(1);
    for k in 0..=top {
        let coef = t.powi(k as i32) / factorial::<T>(k);
        let term = &f.partial_derivative(0, k)? * &g.partial_derivative(0, k)?;
        acc = &acc + &term.scale_by(creal(coef));
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MasterVariant {
    /// `H_θ`-stable inputs, any θ.
    HalfPlane,
    /// `H₀`-stable inputs (alternating signs).
    H0,
    /// `𝔻`-stable inputs.
    Disk,
}

impl std::str::FromStr for MasterVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "halfplane" | "a" => Ok(Self::HalfPlane),
            "h0" | "b" => Ok(Self::H0),
            "disk" | "c" => Ok(Self::Disk),
            _ => Err(Error::InvalidArgument(format!("unknown variant '{s}'"))),
        }
    }
}

fn check_blocks<T: Real>(f: &Polynomial<T>, g: &Polynomial<T>, kappa: &MultiIndex) -> Result<usize> {
    let n = kappa.len();
    for p in [f, g] {
        if p.nvars() != 2 * n {
            return Err(Error::LengthMismatch {
                expected: 2 * n,
                got: p.nvars(),
            });
        }
    }
    Ok(n)
}

fn first_block_bound<T: Real>(p: &Polynomial<T>, kappa: &MultiIndex) -> Result<()> {
    let n = kappa.len();
    for i in 0..n {
        if p.degree_in(i) > kappa[i] {
            let mut bound = vec![u32::MAX; 2 * n];
            bound[..n].copy_from_slice(kappa.as_slice());
            return Err(Error::DegreeExceeds {
                degree: p.degree_vector().map(|d| d.into_vec()).unwrap_or_default(),
                bound,
            });
        }
    }
    Ok(())
}

fn block_index(n_total: usize, offset: usize, alpha: &MultiIndex) -> MultiIndex {
    let mut e = MultiIndex::zeros(n_total);
    for (k, &x) in alpha.as_slice().iter().enumerate() {
        e[offset + k] = x;
    }
    e
}

/// `(κ−α)!/α!`, with the sign `(−1)^|α|` when requested.
fn ratio_weight<T: Real>(kappa: &MultiIndex, alpha: &MultiIndex, signed: bool) -> T {
    let diff = kappa.checked_sub(alpha).expect("α ≤ κ");
    let w = diff.factorial::<T>() / alpha.factorial::<T>();
    if signed && alpha.total() % 2 == 1 {
        -w
    } else {
        w
    }
}

/// Master composition in `4n` variables `(u, v, z, w)` for `f(u, v)`,
/// `g(z, w)`:
/// (a) `Σ ∂_u^α f · ∂_z^{κ−α} g`,
/// (b) `Σ (−1)^α (κ−α)!/α! ∂_u^α f · ∂_z^α g`,
/// (c) `Σ (κ−α)!/α! ∂_u^α f(0, v) · ∂_z^α g`.
pub fn master_compose_4n<T: Real>(
    f: &Polynomial<T>,
    g: &Polynomial<T>,
    kappa: &MultiIndex,
    variant: MasterVariant,
) -> Result<Polynomial<T>> {
    let n = check_blocks(f, g, kappa)?;
    first_block_bound(f, kappa)?;
    first_block_bound(g, kappa)?;
    let lo: Vec<usize> = (0..2 * n).collect();
    let hi: Vec<usize> = (2 * n..4 * n).collect();
    let mut acc = Polynomial::zero(4 * n);
    for alpha in kappa.box_below() {
        let da = block_index(2 * n, 0, &alpha);
        let (fa, gb, w) = match variant {
            MasterVariant::HalfPlane => {
                let rest = kappa.checked_sub(&alpha).expect("α ≤ κ");
                (
                    f.derivative(&da)?,
                    g.derivative(&block_index(2 * n, 0, &rest))?,
                    T::one(),
                )
            }
            MasterVariant::H0 => (f.derivative(&da)?, g.derivative(&da)?, ratio_weight(kappa, &alpha, true)),
            MasterVariant::Disk => {
                let zero_u: Vec<(usize, C<T>)> = (0..n).map(|i| (i, czero())).collect();
                (
                    f.derivative(&da)?.substitute(&zero_u)?,
                    g.derivative(&da)?,
                    ratio_weight(kappa, &alpha, false),
                )
            }
        };
        if fa.is_zero() || gb.is_zero() {
            continue;
        }
        let term = &fa.embed(4 * n, &lo)? * &gb.embed(4 * n, &hi)?;
        acc = &acc + &term.scale_by(creal(w));
    }
    Ok(acc)
}

/// Master composition in `2n` variables `(z, w)`, derivative form:
/// (a) `(1/κ!) Σ ∂_z^α f(0,w) · ∂_w^{κ−α} g(z,0)`,
/// (b) `(1/κ!) Σ (−1)^α (κ−α)!/α! ∂_z^α f(0,w) · ∂_w^α g(z,0)`,
/// (c) the same without the sign.
pub fn master_compose<T: Real>(
    f: &Polynomial<T>,
    g: &Polynomial<T>,
    kappa: &MultiIndex,
    variant: MasterVariant,
) -> Result<Polynomial<T>> {
    let n = check_blocks(f, g, kappa)?;
    first_block_bound(f, kappa)?;
    let g_w_bound = (0..n).all(|i| g.degree_in(n + i) <= kappa[i]);
    if !g_w_bound {
        let mut bound = vec![u32::MAX; 2 * n];
        bound[n..].copy_from_slice(kappa.as_slice());
        return Err(Error::DegreeExceeds {
            degree: g.degree_vector().map(|d| d.into_vec()).unwrap_or_default(),
            bound,
        });
    }
    let zero_z: Vec<(usize, C<T>)> = (0..n).map(|i| (i, czero())).collect();
    let zero_w: Vec<(usize, C<T>)> = (0..n).map(|i| (n + i, czero())).collect();
    let inv = T::one() / kappa.factorial::<T>();
    let mut acc = Polynomial::zero(2 * n);
    for alpha in kappa.box_below() {
        let fa = f.derivative(&block_index(2 * n, 0, &alpha))?.substitute(&zero_z)?;
        let (gb, w) = match variant {
            MasterVariant::HalfPlane => {
                let rest = kappa.checked_sub(&alpha).expect("α ≤ κ");
                (g.derivative(&block_index(2 * n, n, &rest))?, T::one())
            }
            MasterVariant::H0 => (
                g.derivative(&block_index(2 * n, n, &alpha))?,
                ratio_weight(kappa, &alpha, true),
            ),
            MasterVariant::Disk => (
                g.derivative(&block_index(2 * n, n, &alpha))?,
                ratio_weight(kappa, &alpha, false),
            ),
        };
        let gb = gb.substitute(&zero_w)?;
        if fa.is_zero() || gb.is_zero() {
            continue;
        }
        acc = &acc + &(&fa * &gb).scale_by(creal(w * inv));
    }
    Ok(acc)
}

/// Binomial form of [`master_compose`]: with `f = Σ C(κ,α) P_α(w) z^α` and
/// `g = Σ C(κ,α) Q_α(z) w^α`,
/// (a) `Σ C(κ,α) P_α Q_{κ−α}`, (b) `Σ (−1)^α C(κ,α) P_α Q_α`, (c) `Σ C(κ,α) P_α Q_α`.
pub fn master_compose_binomial<T: Real>(
    f: &Polynomial<T>,
    g: &Polynomial<T>,
    kappa: &MultiIndex,
    variant: MasterVariant,
) -> Result<Polynomial<T>> {
    let n = check_blocks(f, g, kappa)?;
    let z_block: Vec<usize> = (0..n).collect();
    let w_block: Vec<usize> = (n..2 * n).collect();
    let p = |alpha: &MultiIndex| {
        block_coefficient(f, &z_block, alpha).scale_by(creal(T::one() / kappa.binomial::<T>(alpha)))
    };
    let q = |alpha: &MultiIndex| {
        block_coefficient(g, &w_block, alpha).scale_by(creal(T::one() / kappa.binomial::<T>(alpha)))
    };
    let mut acc = Polynomial::zero(2 * n);
    for alpha in kappa.box_below() {
        let b = kappa.binomial::<T>(&alpha);
        let (qa, sign) = match variant {
            MasterVariant::HalfPlane => (q(&kappa.checked_sub(&alpha).expect("α ≤ κ")), T::one()),
            MasterVariant::H0 => (
                q(&alpha),
                if alpha.total() % 2 == 1 { -T::one() } else { T::one() },
            ),
            MasterVariant::Disk => (q(&alpha), T::one()),
        };
        acc = &acc + &(&p(&alpha) * &qa).scale_by(creal(b * sign));
    }
    Ok(acc)
}

/// Coefficient of `block^α` as a polynomial in the remaining variables
/// (block exponents zeroed).
pub fn block_coefficient<T: Real>(f: &Polynomial<T>, block: &[usize], alpha: &MultiIndex) -> Polynomial<T> {
    f.map_exponents(f.nvars(), |a| {
        if block.iter().zip(alpha.as_slice()).all(|(&v, &e)| a[v] == e) {
            let mut b = a.clone();
            for &v in block {
                b[v] = 0;
            }
            Some(b)
        } else {
            None
        }
    })
}

/// Coefficient-wise real part, `(f(z) + conj(f(z̄)))/2`.
pub fn real_part_operator<T: Real>(f: &Polynomial<T>) -> Polynomial<T> {
    f.map_coeffs(|_, c| creal(c.re))
}

/// `Σ_i P_i(∂/∂z) Q_i(z)`.
pub fn lieb_sokal_substitute<T: Real>(p: &[Polynomial<T>], q: &[Polynomial<T>]) -> Result<Polynomial<T>> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    let n = q.first().map(|x| x.nvars()).unwrap_or(1);
    let mut acc = Polynomial::zero(n);
    for (pi, qi) in p.iter().zip(q) {
        if pi.nvars() != qi.nvars() || qi.nvars() != n {
            return Err(Error::NvarsMismatch(pi.nvars(), qi.nvars()));
        }
        for (alpha, c) in pi.terms() {
            acc = &acc + &qi.derivative(alpha)?.scale_by(*c);
        }
    }
    Ok(acc)
}

/// Repeated averages `T_τ` over seeded random transpositions, with the
/// symmetry index after every step (index 0 is the input).
pub fn iterate_transposition_averages<T: Real>(
    f: &Polynomial<T>,
    steps: usize,
    seed: u64,
) -> (Polynomial<T>, Vec<T>) {
    let n = f.nvars();
    let mut cur = f.clone();
    let mut trace = vec![cur.symmetry_index()];
    if n < 2 {
        trace.extend(std::iter::repeat(trace[0]).take(steps));
        return (cur, trace);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        cur = partial_swap(&cur, T::lit(0.5), i, j).expect("valid transposition");
        trace.push(cur.symmetry_index());
    }
    (cur, trace)
}

/// Catalog operators as monomial tables, for symbol computations.
pub mod tables {
    use super::*;

    pub fn derivative<T: Real>(kappa: MultiIndex, var: usize) -> Result<MonomialOperator<T>> {
        let n = kappa.len();
        MonomialOperator::from_linear_map(kappa, n, |m| m.partial_derivative(var, 1))
    }

    pub fn sym<T: Real>(kappa: MultiIndex) -> Result<MonomialOperator<T>> {
        let n = kappa.len();
        MonomialOperator::from_linear_map(kappa, n, |m| Ok(super::sym(m)))
    }

    pub fn map<T: Real>(kappa: MultiIndex) -> Result<MonomialOperator<T>> {
        let n = kappa.len();
        MonomialOperator::from_linear_map(kappa, n, |m| Ok(map_multiaffine_part(m)))
    }

    pub fn mod2<T: Real>(kappa: MultiIndex) -> Result<MonomialOperator<T>> {
        let n = kappa.len();
        MonomialOperator::from_linear_map(kappa, n, |m| Ok(mod2_fold_all(m)))
    }

    pub fn asano<T: Real>(kappa: MultiIndex, i: usize, j: usize) -> Result<MonomialOperator<T>> {
        let n = kappa.len();
        MonomialOperator::from_linear_map(kappa, n, |m| asano_contract(m, i, j))
    }

    pub fn hard_lieb_sokal<T: Real>(
        kappa: MultiIndex,
        variant: LiebSokalVariant,
        d: u32,
    ) -> Result<MonomialOperator<T>> {
        let n = kappa.len();
        MonomialOperator::from_linear_map(kappa, n, |m| super::hard_lieb_sokal(m, variant, d))
    }

    pub fn transposition<T: Real>(kappa: MultiIndex, i: usize, j: usize) -> Result<MonomialOperator<T>> {
        let n = kappa.len();
        MonomialOperator::from_linear_map(kappa, n, |m| m.transpose(i, j))
    }

    pub fn partial_swap<T: Real>(kappa: MultiIndex, p: T, i: usize, j: usize) -> Result<MonomialOperator<T>> {
        let n = kappa.len();
        MonomialOperator::from_linear_map(kappa, n, |m| super::partial_swap(m, p, i, j))
    }

    /// `T(z^α) = c_α · P`: range of dimension one.
    pub fn rank_one<T: Real>(kappa: MultiIndex, weights: &[C<T>], image: &Polynomial<T>) -> Result<MonomialOperator<T>> {
        let alphas: Vec<MultiIndex> = kappa.box_below().collect();
        if weights.len() != alphas.len() {
            return Err(Error::LengthMismatch {
                expected: alphas.len(),
                got: weights.len(),
            });
        }
        let table = alphas.into_iter().zip(weights).map(|(a, w)| (a, image.scale_by(*w)));
        MonomialOperator::new(kappa, image.nvars(), table)
    }

}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Polynomial<f64>;

    fn p(s: &str) -> P {
        s.parse().unwrap()
    }

    fn pn(s: &str, n: usize) -> P {
        P::parse(s, Some(n)).unwrap()
    }

    fn close(a: &P, b: &P) -> bool {
        a.max_distance(b) <= 1e-12
    }

    #[test]
    fn sym_examples() {
        assert!(close(&sym(&pn("z1", 2)), &p("0.5*z1 + 0.5*z2")));
        assert_eq!(sym(&p("z1*z2")), p("z1*z2"));
        assert!(close(&sym(&p("z1^2*z2")), &p("0.5*z1^2*z2 + 0.5*z1*z2^2")));
        let f = p("1 + 2*z1*z3^2 - (1+1i)*z2 + z1*z2*z3");
        let s = sym(&f);
        assert!(close(&sym(&s), &s));
        assert!(close(&sym(&f.permute(&[2, 0, 1]).unwrap()), &s));
        assert!(s.symmetry_index() < 1e-12);
    }

    #[test]
    fn partial_swap_examples() {
        let f = p("1+2*z1+z2+z1*z2");
        assert_eq!(partial_swap(&f, 1.0, 0, 1).unwrap(), f);
        assert!(close(&partial_swap(&pn("z1", 2), 0.5, 0, 1).unwrap(), &p("0.5*z1+0.5*z2")));
        assert!(close(&partial_swap(&f, 0.5, 0, 1).unwrap(), &p("1+1.5*z1+1.5*z2+z1*z2")));
        assert!(partial_swap(&f, 1.5, 0, 1).is_err());
        assert!(partial_swap(&f, -0.1, 0, 1).is_err());
    }

    #[test]
    fn t_sigma_of_cycle_is_sym_for_cyclic_invariant_orbits() {
        let f = pn("z1", 3);
        let g = t_sigma(&f, &[1, 2, 0]).unwrap();
        assert!(close(&g, &sym(&f)));
    }

    #[test]
    fn polarization_examples() {
        let k = MultiIndex::new(vec![2]);
        assert_eq!(polarization(&p("z^2"), &k).unwrap(), p("z1*z2"));
        assert!(close(&polarization(&p("2*z"), &k).unwrap(), &p("z1+z2")));
        let f = polarization(&p("1+2*z+z^2"), &k).unwrap();
        assert!(close(&f, &p("(1+z1)*(1+z2)")));
        let g = p("1 + 3*z1^2*z2 - (2-1i)*z1*z2^2 + z2^3");
        let k = MultiIndex::new(vec![2, 3]);
        let f = polarization(&g, &k).unwrap();
        assert_eq!(f.nvars(), 5);
        assert!(f.is_multi_affine());
        assert!(close(&depolarize(&f, &k).unwrap(), &g));
    }

    #[test]
    fn map_and_mod_examples() {
        assert_eq!(map_multiaffine_part(&p("z1^2+z1")), pn("z1", 1));
        let k3 = p("(1+z1*z2)*(1+z1*z3)*(1+z2*z3)");
        assert_eq!(map_multiaffine_part(&k3), p("1+z1*z2+z1*z3+z2*z3"));
        assert_eq!(mod2_fold_all(&p("z1^2")), p("1"));
        assert_eq!(mod2_fold_all(&p("z1^2+z1")), p("1+z1"));
        let f = p("(1+z1*z2)^2");
        assert_eq!(mod2_fold(&f, &[0]).unwrap(), p("1+2*z1*z2+z2^2"));
        let g = p("3 + z1^3*z2 - z2^4*z1^2 + 2*z1*z2");
        assert_eq!(mod2_fold_all(&mod2_fold_all(&g)), mod2_fold_all(&g));
        assert_eq!(mod2_fold_all(&map_multiaffine_part(&g)), map_multiaffine_part(&g));
    }

    #[test]
    fn asano_examples() {
        assert_eq!(asano_contract(&p("(1+z1)*(1+z2)"), 0, 1).unwrap(), pn("1+z1", 2));
        assert_eq!(
            asano_contract(&p("1 + (0.3+0.4i)*z1 + (0.3-0.4i)*z2 + z1*z2"), 0, 1).unwrap(),
            pn("1+z1", 2)
        );
        assert_eq!(asano_contract(&p("2+z1+z2+z1*z2"), 0, 1).unwrap(), pn("2+z1", 2));
        assert!(asano_contract(&p("z1^2*z2"), 0, 1).is_err());
    }

    #[test]
    fn schur_hadamard_examples() {
        let k = MultiIndex::new(vec![1]);
        assert_eq!(schur_hadamard(&p("1+z"), &p("1+z"), &k).unwrap(), p("1+z"));
        let k = MultiIndex::new(vec![1, 1]);
        assert_eq!(
            schur_hadamard(&p("1+z1*z2"), &p("1+z1+z2+z1*z2"), &k).unwrap(),
            p("1+z1*z2")
        );
        let k = MultiIndex::new(vec![2]);
        assert!(close(&schur_hadamard(&p("(1+z)^2"), &p("(1+z)^2"), &k).unwrap(), &p("(1+z)^2")));
    }

    #[test]
    fn convolution_examples() {
        assert_eq!(convolution_star(&p("z1"), &p("z1")).unwrap(), p("1"));
        assert_eq!(convolution_star(&p("1+z1"), &p("1+z1")).unwrap(), p("2+2*z1"));
        assert_eq!(convolution_star(&p("z1*z2"), &pn("z1", 2)).unwrap(), pn("z2", 2));
        assert!(convolution_star(&p("z^2"), &p("z")).is_err());
    }

    #[test]
    fn hard_lieb_sokal_examples() {
        use LiebSokalVariant::*;
        assert_eq!(hard_lieb_sokal(&p("z1*z2"), T, 1).unwrap(), p("z1+z2"));
        assert_eq!(hard_lieb_sokal(&p("z1+z2"), S, 1).unwrap(), pn("2", 2));
        assert_eq!(hard_lieb_sokal(&p("z1*z2"), R, 1).unwrap(), pn("-1", 2));
        assert!(hard_lieb_sokal(&pn("z1", 2), R, 1).unwrap().is_zero());
        assert!(hard_lieb_sokal(&p("z1^2*z2"), T, 1).is_err());
    }

    #[test]
    fn t_variant_depends_on_sum_only() {
        let f = p("(1+z1)*(2+z2)*(z1+z2+z3)*(1+z1*z2)");
        let g = hard_lieb_sokal(&f, LiebSokalVariant::T, 3).unwrap();
        // z1 = (s+d)/2, z2 = (s-d)/2 in variables (s, d, z3)
        let s = P::var(3, 0);
        let d = P::var(3, 1);
        let half = creal(0.5);
        let z1 = (&s + &d).scale_by(half);
        let z2 = (&s - &d).scale_by(half);
        let z3 = P::var(3, 2);
        let mut h = P::zero(3);
        for (a, c) in g.terms() {
            let m = &(&z1.pow(a[0]) * &z2.pow(a[1])) * &z3.pow(a[2]);
            h = &h + &m.scale_by(*c);
        }
        assert!(h.terms().all(|(a, c)| a[1] == 0 || c.norm() <= 1e-12));
    }

    #[test]
    fn diff_operator_examples() {
        let one = MultiIndex::new(vec![1]);
        assert_eq!(diff_operator_apply(&[(one, p("1"))], &p("(1+z)^2")).unwrap(), p("2+2*z"));
        let zero = MultiIndex::new(vec![0]);
        assert_eq!(diff_operator_apply(&[(zero, p("z"))], &p("1")).unwrap(), p("z"));
        let (ch, sh) = (1f64.cosh(), 1f64.sinh());
        let spec = vec![
            (MultiIndex::new(vec![0, 0]), P::constant(2, creal(ch))),
            (MultiIndex::new(vec![1, 1]), P::constant(2, creal(sh))),
        ];
        let f = p("(1+z1)*(1+z2)");
        let want = &f.scale_by(creal(ch)) + &P::constant(2, creal(sh));
        assert!(close(&diff_operator_apply(&spec, &f).unwrap(), &want));
    }

    #[test]
    fn weyl_and_de_bruijn_examples() {
        let u = pn("z1", 2);
        let w = pn("z2", 2);
        assert_eq!(weyl_product_blocks(&u, &w, &[1.0]).unwrap(), p("z1*z2 - 1"));
        assert_eq!(weyl_product_blocks(&u, &w, &[0.0]).unwrap(), p("z1*z2"));
        let f = p("(1+z1)*(2+z2)*(z1+z2)");
        let g = p("(3+z1)*(z2+z1)");
        assert_eq!(weyl_product_blocks(&f, &g, &[0.0]).unwrap(), &f * &g);
        assert_eq!(de_bruijn_product(&p("z"), &p("z"), -1.0).unwrap(), p("z^2-1"));
        assert_eq!(de_bruijn_product(&p("z"), &p("z"), 0.0).unwrap(), p("z^2"));
    }

    #[test]
    fn master_compose_schur_malo_szego() {
        let k = MultiIndex::new(vec![2]);
        let f = pn("(1+z1)^2", 2);
        let g = p("2*z1^2 + 2*z1*z2");
        // g = Σ C(2,k) k z^k w^{2-k}: k=1 → 2 z w, k=2 → 2 z^2
        let h = master_compose(&f, &g, &k, MasterVariant::HalfPlane).unwrap();
        assert!(close(&h, &pn("2*z1 + 2*z1^2", 2)), "{h}");
        let b = master_compose_binomial(&f, &g, &k, MasterVariant::HalfPlane).unwrap();
        assert!(close(&h, &b));
    }

    #[test]
    fn master_compose_constants() {
        let k = MultiIndex::new(vec![2, 1]);
        let one4 = P::one(4);
        let out = master_compose_4n(&one4, &one4, &k, MasterVariant::H0).unwrap();
        assert!(close(&out, &P::constant(8, creal(2.0))));
        let out = master_compose_4n(&one4, &one4, &k, MasterVariant::Disk).unwrap();
        assert!(close(&out, &P::constant(8, creal(2.0))));
    }

    #[test]
    fn disk_4n_form_can_vanish_in_the_polydisk() {
        // f(u,v) = 1 − 0.9u and g(z,w) = 1 + 0.9z are 𝔻-stable, but the
        // 4n disk form is 0.19 + 0.9z
        let k = MultiIndex::new(vec![1]);
        let f = pn("1 - 0.9*z1", 2);
        let g = pn("1 + 0.9*z1", 2);
        let out = master_compose_4n(&f, &g, &k, MasterVariant::Disk).unwrap();
        assert!(close(&out, &pn("0.19 + 0.9*z3", 4)), "{out}");
        let z = C::new(-0.19 / 0.9, 0.0);
        let zero = C::new(0.0, 0.0);
        assert!(out.eval(&[zero, zero, z, zero]).norm() < 1e-12 && z.norm() < 1.0);
    }

    #[test]
    fn master_forms_agree() {
        let k = MultiIndex::new(vec![2, 1]);
        let f = p("(1+z1+z3)*(2 - z1*z4 + (1-1i)*z2)*(z3 + 1i)");
        let g = p("(1+z3+z1)*(z4 + 2*z2 + z3*z2)*(3 + z1)");
        for v in [MasterVariant::HalfPlane, MasterVariant::H0, MasterVariant::Disk] {
            let a = master_compose(&f, &g, &k, v).unwrap();
            let b = master_compose_binomial(&f, &g, &k, v).unwrap();
            assert!(a.relative_distance(&b) <= 1e-12, "{v:?}");
        }
    }

    #[test]
    fn real_part_examples() {
        assert!(real_part_operator(&p("1i*z")).is_zero());
        assert_eq!(real_part_operator(&p("(1+1i)*z + 1")), p("z+1"));
        assert_eq!(real_part_operator(&p("(z+1i)^2")), p("z^2-1"));
    }

    #[test]
    fn lieb_sokal_examples() {
        assert_eq!(lieb_sokal_substitute(&[p("z")], &[p("z")]).unwrap(), p("1"));
        assert!(lieb_sokal_substitute(&[p("z")], &[p("1")]).unwrap().is_zero());
        assert_eq!(lieb_sokal_substitute(&[p("z^2")], &[p("z^3")]).unwrap(), p("6*z"));
        assert!(lieb_sokal_substitute(&[p("z")], &[]).is_err());
    }

    #[test]
    fn transposition_averages() {
        let f = p("z1*z2 + z1 + z2");
        let (g, trace) = iterate_transposition_averages(&f, 5, 1);
        assert_eq!(g, f);
        assert!(trace.iter().all(|&s| s == 0.0));
        let (g, trace) = iterate_transposition_averages(&pn("z1", 2), 1, 3);
        assert!(close(&g, &p("0.5*z1+0.5*z2")));
        assert_eq!(trace, vec![1.0, 0.0]);
        let f = p("1 + 2*z1*z3^2 - (1+1i)*z2 + z1*z2*z4 + 3*z4^2");
        let (g, trace) = iterate_transposition_averages(&f, 1000, 11);
        assert!(g.max_distance(&sym(&f)) <= 1e-8);
        assert!(trace.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }

    #[test]
    fn distinct_permutation_counts() {
        assert_eq!(distinct_permutations(&[1, 0, 0]).len(), 3);
        assert_eq!(distinct_permutations(&[2, 1, 0]).len(), 6);
        assert_eq!(distinct_permutations(&[1, 1]).len(), 1);
    }
}
