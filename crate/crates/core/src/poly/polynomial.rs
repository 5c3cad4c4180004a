use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use super::MultiIndex;
use crate::error::{Error, Result};
use crate::scalar::{binomial, czero, falling, Real, C};

/// Absolute magnitude below which coefficients are dropped after every ring
/// operation.
pub const PRUNE_EPS: f64 = 1e-12;

/// Sparse polynomial `Σ a(α) z^α` in a fixed number of variables.
///
/// Terms are kept in graded-lexicographic order and no stored coefficient has
/// magnitude below [`PRUNE_EPS`]. Values are immutable in spirit: every
/// operation returns a new polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T: Real> {
    nvars: usize,
    terms: BTreeMap<MultiIndex, C<T>>,
}

fn prune_eps<T: Real>() -> T {
    T::lit(PRUNE_EPS)
}

impl<T: Real> Polynomial<T> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Complex::new(T::one(), T::zero()))
    }

    pub fn constant(nvars: usize, c: C<T>) -> Self {
        Self::monomial(nvars, MultiIndex::zeros(nvars), c)
    }

    /// The coordinate function `z_i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(nvars, MultiIndex::unit(nvars, i), Complex::new(T::one(), T::zero()))
    }

    pub fn monomial(nvars: usize, alpha: MultiIndex, c: C<T>) -> Self {
        assert_eq!(alpha.len(), nvars, "multi-index length must equal nvars");
        let mut terms = BTreeMap::new();
        if c.norm() >= prune_eps::<T>() {
            terms.insert(alpha, c);
        }
        Polynomial { nvars, terms }
    }

    /// Collects terms, summing duplicates and pruning small coefficients.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, C<T>)>,
    {
        let mut acc: HashMap<MultiIndex, C<T>> = HashMap::new();
        for (alpha, c) in terms {
            if alpha.len() != nvars {
                return Err(Error::LengthMismatch {
                    expected: nvars,
                    got: alpha.len(),
                });
            }
            *acc.entry(alpha).or_insert_with(czero) += c;
        }
        Ok(Self::from_map(nvars, acc))
    }

    pub(crate) fn from_map(nvars: usize, acc: HashMap<MultiIndex, C<T>>) -> Self {
        let eps = prune_eps::<T>();
        let terms = acc.into_iter().filter(|(_, c)| c.norm() >= eps).collect();
        Polynomial { nvars, terms }
    }

    /// Univariate polynomial from dense coefficients `[c0, c1, ...]`.
    pub fn univariate(coeffs: &[C<T>]) -> Self {
        Self::from_terms(
            1,
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (MultiIndex::new(vec![k as u32]), *c)),
        )
        .expect("univariate indices have length 1")
    }

    /// Univariate polynomial from real dense coefficients.
    pub fn univariate_real(coeffs: &[T]) -> Self {
        let c: Vec<C<T>> = coeffs.iter().map(|&x| Complex::new(x, T::zero())).collect();
        Self::univariate(&c)
    }

    /// Product of affine forms, each given as `(constant, [coefficient per variable])`.
    pub fn product_of_affine(nvars: usize, factors: &[(C<T>, Vec<C<T>>)]) -> Self {
        let mut acc = Self::one(nvars);
        for (a, b) in factors {
            let mut lin = Self::constant(nvars, *a);
            for (j, bj) in b.iter().enumerate() {
                lin = &lin + &(&Self::var(nvars, j) * *bj);
            }
            acc = &acc * &lin;
        }
        acc
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &C<T>)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> C<T> {
        self.terms.get(alpha).copied().unwrap_or_else(czero)
    }

    /// `supp(f)`, the exponents with nonzero coefficient.
    pub fn support(&self) -> Vec<MultiIndex> {
        self.terms.keys().cloned().collect()
    }

    /// `deg_{z_i}(f)`; zero for the zero polynomial.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|a| a[i]).max().unwrap_or(0)
    }

    /// Componentwise maximum of the support, `None` for the zero polynomial.
    pub fn degree_vector(&self) -> Option<MultiIndex> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, a| acc.join(a)))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|a| a.total()).max()
    }

    /// Whether `deg f ≤ κ` componentwise (true for the zero polynomial).
    pub fn degree_within(&self, kappa: &MultiIndex) -> bool {
        self.terms.keys().all(|a| a.le(kappa))
    }

    pub(crate) fn require_degree_within(&self, kappa: &MultiIndex) -> Result<()> {
        if kappa.len() != self.nvars {
            return Err(Error::LengthMismatch {
                expected: self.nvars,
                got: kappa.len(),
            });
        }
        if self.degree_within(kappa) {
            Ok(())
        } else {
            Err(Error::DegreeExceeds {
                degree: self.degree_vector().map(|d| d.into_vec()).unwrap_or_default(),
                bound: kappa.as_slice().to_vec(),
            })
        }
    }

    pub fn is_multi_affine(&self) -> bool {
        self.terms.keys().all(|a| a.as_slice().iter().all(|&e| e <= 1))
    }

    pub fn is_multi_affine_in(&self, i: usize) -> bool {
        self.degree_in(i) <= 1
    }

    /// Whether `f` depends on `z_i`.
    pub fn is_active(&self, i: usize) -> bool {
        self.degree_in(i) > 0
    }

    /// Maximum coefficient magnitude (zero for the zero polynomial).
    pub fn scale(&self) -> T {
        self.terms.values().map(|c| c.norm()).fold(T::zero(), |a, b| a.max(b))
    }

    pub fn is_real(&self, tol: T) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|a| a.total());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    fn check_nvars(&self, other: &Self) -> Result<()> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(Error::NvarsMismatch(self.nvars, other.nvars))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_nvars(other)?;
        Ok(self.combine(other, T::one()))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_nvars(other)?;
        Ok(self.combine(other, -T::one()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_nvars(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn combine(&self, other: &Self, sign: T) -> Self {
        let mut terms = self.terms.clone();
        for (a, c) in &other.terms {
            let e = terms.entry(a.clone()).or_insert_with(czero);
            *e = *e + c.scale(sign);
        }
        let eps = prune_eps::<T>();
        terms.retain(|_, c| c.norm() >= eps);
        Polynomial {
            nvars: self.nvars,
            terms,
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let mut acc: HashMap<MultiIndex, C<T>> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                *acc.entry(a.add(b)).or_insert_with(czero) += ca * cb;
            }
        }
        Self::from_map(self.nvars, acc)
    }

    pub fn scale_by(&self, c: C<T>) -> Self {
        let eps = prune_eps::<T>();
        let terms = self
            .terms
            .iter()
            .map(|(a, x)| (a.clone(), x * c))
            .filter(|(_, x)| x.norm() >= eps)
            .collect();
        Polynomial {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Applies `g` to every coefficient, keeping exponents.
    pub fn map_coeffs<F: Fn(&MultiIndex, C<T>) -> C<T>>(&self, g: F) -> Self {
        let eps = prune_eps::<T>();
        let terms = self
            .terms
            .iter()
            .map(|(a, c)| (a.clone(), g(a, *c)))
            .filter(|(_, c)| c.norm() >= eps)
            .collect();
        Polynomial {
            nvars: self.nvars,
            terms,
        }
    }

    /// Maps exponents (summing collisions), optionally changing `nvars`.
    pub fn map_exponents<F>(&self, nvars: usize, g: F) -> Self
    where
        F: Fn(&MultiIndex) -> Option<MultiIndex>,
    {
        let mut acc = HashMap::new();
        for (a, c) in &self.terms {
            if let Some(b) = g(a) {
                debug_assert_eq!(b.len(), nvars);
                *acc.entry(b).or_insert_with(czero) += *c;
            }
        }
        Self::from_map(nvars, acc)
    }

    /// Keeps the terms satisfying `keep`.
    pub fn filter_terms<F: Fn(&MultiIndex) -> bool>(&self, keep: F) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(a, _)| keep(a))
                .map(|(a, c)| (a.clone(), *c))
                .collect(),
        }
    }

    pub fn conj(&self) -> Self {
        self.map_coeffs(|_, c| c.conj())
    }

    /// Evaluates `f(point)`.
    pub fn evaluate(&self, point: &[C<T>]) -> Result<C<T>> {
        if point.len() != self.nvars {
            return Err(Error::LengthMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        Ok(self.eval(point))
    }

    /// Term-sum evaluation with cached powers; `point.len()` must be `nvars`.
    pub(crate) fn eval(&self, point: &[C<T>]) -> C<T> {
        let mut powers: Vec<Vec<C<T>>> = (0..self.nvars)
            .map(|i| {
                let d = self.degree_in(i) as usize;
                let mut p = Vec::with_capacity(d + 1);
                let mut x = Complex::new(T::one(), T::zero());
                for _ in 0..=d {
                    p.push(x);
                    x = x * point[i];
                }
                p
            })
            .collect();
        let mut sum = czero();
        for (a, c) in &self.terms {
            let mut m = *c;
            for (i, &e) in a.as_slice().iter().enumerate() {
                if e > 0 {
                    m = m * powers[i][e as usize];
                }
            }
            sum = sum + m;
        }
        powers.clear();
        sum
    }

    /// `Σ |a(α)| |point^α|`, the natural magnitude against which `|f(point)|`
    /// is compared.
    pub fn eval_abs_scale(&self, point: &[C<T>]) -> T {
        let mags: Vec<T> = point.iter().map(|z| z.norm()).collect();
        self.terms
            .iter()
            .map(|(a, c)| {
                a.as_slice()
                    .iter()
                    .enumerate()
                    .fold(c.norm(), |acc, (i, &e)| acc * mags[i].powi(e as i32))
            })
            .sum()
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.nvars {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                nvars: self.nvars,
            })
        }
    }

    /// `∂^order f / ∂z_i^order` (0-based `i`).
    pub fn partial_derivative(&self, i: usize, order: u32) -> Result<Self> {
        self.check_index(i)?;
        let mut acc = HashMap::new();
        for (a, c) in &self.terms {
            if a[i] >= order {
                let mut b = a.clone();
                b[i] -= order;
                let factor: T = falling(a[i], order);
                *acc.entry(b).or_insert_with(czero) += c.scale(factor);
            }
        }
        Ok(Self::from_map(self.nvars, acc))
    }

    /// Mixed derivative `∂^α f / ∂z^α`.
    pub fn derivative(&self, alpha: &MultiIndex) -> Result<Self> {
        if alpha.len() != self.nvars {
            return Err(Error::LengthMismatch {
                expected: self.nvars,
                got: alpha.len(),
            });
        }
        let mut acc = HashMap::new();
        for (a, c) in &self.terms {
            if let Some(b) = a.checked_sub(alpha) {
                let factor = a
                    .as_slice()
                    .iter()
                    .zip(alpha.as_slice())
                    .fold(T::one(), |acc, (&ai, &k)| acc * falling::<T>(ai, k));
                *acc.entry(b).or_insert_with(czero) += c.scale(factor);
            }
        }
        Ok(Self::from_map(self.nvars, acc))
    }

    /// Derivative in a subset of variables given as `(variable, order)` pairs.
    pub fn derivative_in(&self, orders: &[(usize, u32)]) -> Result<Self> {
        let mut alpha = MultiIndex::zeros(self.nvars);
        for &(i, k) in orders {
            self.check_index(i)?;
            alpha[i] += k;
        }
        self.derivative(&alpha)
    }

    /// Univariate `t ↦ f(base + t·direction)`.
    pub fn restrict_line(&self, base: &[C<T>], direction: &[C<T>]) -> Result<Self> {
        for v in [base, direction] {
            if v.len() != self.nvars {
                return Err(Error::LengthMismatch {
                    expected: self.nvars,
                    got: v.len(),
                });
            }
        }
        let coeffs = self.restrict_line_dense(base, direction);
        Ok(Self::univariate(&coeffs))
    }

    /// Dense coefficients of `f(base + t·direction)`, unpruned.
    pub(crate) fn restrict_line_dense(&self, base: &[C<T>], direction: &[C<T>]) -> Vec<C<T>> {
        let deg = self.total_degree().unwrap_or(0) as usize;
        // powers[i][e] = (base_i + t dir_i)^e as dense coefficient vectors
        let powers: Vec<Vec<Vec<C<T>>>> = (0..self.nvars)
            .map(|i| {
                let d = self.degree_in(i) as usize;
                let mut out = Vec::with_capacity(d + 1);
                let mut cur = vec![Complex::new(T::one(), T::zero())];
                for _ in 0..=d {
                    out.push(cur.clone());
                    let mut next = vec![czero(); cur.len() + 1];
                    for (k, c) in cur.iter().enumerate() {
                        next[k] = next[k] + c * base[i];
                        next[k + 1] = next[k + 1] + c * direction[i];
                    }
                    cur = next;
                }
                out
            })
            .collect();
        let mut result = vec![czero(); deg + 1];
        let mut scratch = vec![czero(); deg + 1];
        let mut tmp = vec![czero(); deg + 1];
        for (a, c) in &self.terms {
            let mut len = 1;
            scratch[0] = *c;
            for (i, &e) in a.as_slice().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = &powers[i][e as usize];
                for t in tmp.iter_mut().take(len + p.len() - 1) {
                    *t = czero();
                }
                for (j, x) in scratch.iter().take(len).enumerate() {
                    for (k, y) in p.iter().enumerate() {
                        tmp[j + k] = tmp[j + k] + x * y;
                    }
                }
                len += p.len() - 1;
                scratch[..len].copy_from_slice(&tmp[..len]);
            }
            for k in 0..len {
                result[k] = result[k] + scratch[k];
            }
        }
        result
    }

    /// `f(z, …, z)`, the univariate diagonal restriction.
    pub fn diagonal(&self) -> Self {
        self.map_exponents(1, |a| Some(MultiIndex::new(vec![a.total()])))
    }

    /// Homogeneous part `f_H`: the terms of maximal total degree.
    pub fn homogeneous_part(&self) -> Result<Self> {
        let d = self
            .total_degree()
            .ok_or(Error::ZeroPolynomial("homogeneous part"))?;
        Ok(self.filter_terms(|a| a.total() == d))
    }

    /// `σ(f)(z) = f(z_{σ(1)}, …, z_{σ(n)})` for a permutation given as a
    /// 0-based image vector.
    pub fn permute(&self, sigma: &[usize]) -> Result<Self> {
        if sigma.len() != self.nvars {
            return Err(Error::LengthMismatch {
                expected: self.nvars,
                got: sigma.len(),
            });
        }
        let mut seen = vec![false; self.nvars];
        for &s in sigma {
            if s >= self.nvars || seen[s] {
                return Err(Error::InvalidArgument(format!("{sigma:?} is not a permutation")));
            }
            seen[s] = true;
        }
        Ok(self.map_exponents(self.nvars, |a| {
            let mut b = MultiIndex::zeros(self.nvars);
            for (i, &e) in a.as_slice().iter().enumerate() {
                b[sigma[i]] += e;
            }
            Some(b)
        }))
    }

    /// Swaps variables `i` and `j`.
    pub fn transpose(&self, i: usize, j: usize) -> Result<Self> {
        self.check_index(i)?;
        self.check_index(j)?;
        let mut sigma: Vec<usize> = (0..self.nvars).collect();
        sigma.swap(i, j);
        self.permute(&sigma)
    }

    /// Re-embeds into `nvars` variables, sending variable `k` to `map[k]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Result<Self> {
        if map.len() != self.nvars {
            return Err(Error::LengthMismatch {
                expected: self.nvars,
                got: map.len(),
            });
        }
        if let Some(&bad) = map.iter().find(|&&m| m >= nvars) {
            return Err(Error::IndexOutOfRange { index: bad, nvars });
        }
        Ok(self.map_exponents(nvars, |a| {
            let mut b = MultiIndex::zeros(nvars);
            for (k, &e) in a.as_slice().iter().enumerate() {
                b[map[k]] += e;
            }
            Some(b)
        }))
    }

    /// Substitutes constants for some variables; the remaining variables keep
    /// their positions (the result has the same `nvars`).
    pub fn substitute(&self, values: &[(usize, C<T>)]) -> Result<Self> {
        for &(i, _) in values {
            self.check_index(i)?;
        }
        let mut acc = HashMap::new();
        for (a, c) in &self.terms {
            let mut b = a.clone();
            let mut m = *c;
            for &(i, v) in values {
                m = m * v.powu(a[i]);
                b[i] = 0;
            }
            *acc.entry(b).or_insert_with(czero) += m;
        }
        Ok(Self::from_map(self.nvars, acc))
    }

    /// Coefficient of `z_i^k`, as a polynomial in the remaining variables
    /// (same `nvars`, exponent of `z_i` set to zero).
    pub fn coefficient_in(&self, i: usize, k: u32) -> Self {
        self.map_exponents(self.nvars, |a| {
            (a[i] == k).then(|| {
                let mut b = a.clone();
                b[i] = 0;
                b
            })
        })
    }

    /// Dense coefficient vector of a univariate polynomial in variable `i`
    /// (other exponents must be zero for this to be meaningful).
    pub fn dense_in(&self, i: usize) -> Vec<C<T>> {
        let d = self.degree_in(i) as usize;
        let mut v = vec![czero(); d + 1];
        for (a, c) in &self.terms {
            v[a[i] as usize] = v[a[i] as usize] + c;
        }
        v
    }

    /// Maximum coefficientwise distance `max_α |a(α) − b(α)|`.
    pub fn max_distance(&self, other: &Self) -> T {
        let mut m = T::zero();
        for (a, c) in &self.terms {
            m = m.max((c - other.coeff(a)).norm());
        }
        for (a, c) in &other.terms {
            if !self.terms.contains_key(a) {
                m = m.max(c.norm());
            }
        }
        m
    }

    /// `max |a − b| / max(scale(a), scale(b), tiny)`.
    pub fn relative_distance(&self, other: &Self) -> T {
        let s = self.scale().max(other.scale());
        if s == T::zero() {
            T::zero()
        } else {
            self.max_distance(other) / s
        }
    }

    /// Symmetry index: sum over unordered pairs of distinct rearrangement-equivalent
    /// exponents of `|Re a(α) − Re a(β)| + |Im a(α) − Im a(β)|`, including
    /// exponents outside the support (coefficient zero).
    pub fn symmetry_index(&self) -> T {
        let mut orbits: BTreeMap<Vec<u32>, Vec<C<T>>> = BTreeMap::new();
        for (a, c) in &self.terms {
            orbits.entry(a.orbit_key()).or_default().push(*c);
        }
        let mut total = T::zero();
        for (key, vals) in orbits {
            let size = orbit_size::<T>(&key);
            let missing = size - T::from_usize_lossy(vals.len());
            for (k, x) in vals.iter().enumerate() {
                for y in &vals[k + 1..] {
                    total = total + (x.re - y.re).abs() + (x.im - y.im).abs();
                }
                total = total + missing * (x.re.abs() + x.im.abs());
            }
        }
        total
    }

    /// Converts the scalar type.
    pub fn cast<U: Real>(&self) -> Polynomial<U> {
        Polynomial::<U>::from_terms(
            self.nvars,
            self.terms.iter().map(|(a, c)| {
                (
                    a.clone(),
                    Complex::new(U::lit(c.re.f64()), U::lit(c.im.f64())),
                )
            }),
        )
        .expect("same nvars")
    }
}

/// Number of distinct rearrangements of a multiset of exponents.
pub(crate) fn orbit_size<T: Real>(key: &[u32]) -> T {
    let n = key.len() as u32;
    let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
    for &e in key {
        *counts.entry(e).or_default() += 1;
    }
    // multinomial n! / ∏ m! computed as a product of binomials
    let mut remaining = n;
    let mut acc = T::one();
    for (_, m) in counts {
        acc = acc * binomial::<T>(remaining, m);
        remaining -= m;
    }
    acc
}

impl<T: Real> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    /// Panics on variable-count mismatch; use [`Polynomial::checked_add`] to
    /// get an error instead.
    fn add(self, rhs: Self) -> Polynomial<T> {
        self.checked_add(rhs).expect("nvars mismatch in addition")
    }
}

impl<T: Real> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: Self) -> Polynomial<T> {
        self.checked_sub(rhs).expect("nvars mismatch in subtraction")
    }
}

impl<T: Real> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: Self) -> Polynomial<T> {
        self.checked_mul(rhs).expect("nvars mismatch in multiplication")
    }
}

impl<T: Real> Mul<C<T>> for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: C<T>) -> Polynomial<T> {
        self.scale_by(rhs)
    }
}

impl<T: Real> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        self.scale_by(Complex::new(-T::one(), T::zero()))
    }
}
