use std::cmp::Ordering;
use std::fmt;

/// Exponent vector `α ∈ ℕⁿ` of a monomial `z^α`.
///
/// Ordered graded-lexicographically: lower total degree first, then larger
/// leading exponents first, so `1 < z1 < z2 < z1^2 < z1*z2 < z2^2`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zeros(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// Unit vector `e_i`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        MultiIndex(v)
    }

    /// All-ones vector `(1ⁿ)`.
    pub fn ones(n: usize) -> Self {
        MultiIndex(vec![1; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    /// Total degree `|α|`.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise partial order `α ≤ β`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, or `None` when some component would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// Componentwise maximum.
    pub fn join(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn meet(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    /// `α!` as a scalar.
    pub fn factorial<T: crate::Real>(&self) -> T {
        self.0
            .iter()
            .fold(T::one(), |acc, &a| acc * crate::scalar::factorial::<T>(a))
    }

    /// Multi-binomial `C(self, α) = ∏ C(self_i, α_i)`.
    pub fn binomial<T: crate::Real>(&self, alpha: &MultiIndex) -> T {
        self.0
            .iter()
            .zip(&alpha.0)
            .fold(T::one(), |acc, (&k, &a)| acc * crate::scalar::binomial::<T>(k, a))
    }

    /// Every `β` with `0 ≤ β ≤ self`, in graded-lex order of enumeration
    /// (odometer order, not sorted).
    pub fn box_below(&self) -> BoxIter {
        BoxIter {
            lo: vec![0; self.0.len()],
            hi: self.0.clone(),
            cur: Some(vec![0; self.0.len()]),
        }
    }

    /// Every `β` with `lo ≤ β ≤ self`.
    pub fn box_between(lo: &MultiIndex, hi: &MultiIndex) -> BoxIter {
        let start = if lo.le(hi) { Some(lo.0.clone()) } else { None };
        BoxIter {
            lo: lo.0.clone(),
            hi: hi.0.clone(),
            cur: start,
        }
    }

    /// Sorted (descending) exponents: the key of the rearrangement class.
    pub fn orbit_key(&self) -> Vec<u32> {
        let mut v = self.0.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    /// `α mod 2` on the selected coordinates.
    pub fn mod2_on(&self, vars: &[usize]) -> MultiIndex {
        let mut v = self.0.clone();
        for &i in vars {
            v[i] %= 2;
        }
        MultiIndex(v)
    }
}

impl std::ops::Index<usize> for MultiIndex {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl std::ops::IndexMut<usize> for MultiIndex {
    fn index_mut(&mut self, i: usize) -> &mut u32 {
        &mut self.0[i]
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl From<&[u32]> for MultiIndex {
    fn from(v: &[u32]) -> Self {
        MultiIndex(v.to_vec())
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| other.0.cmp(&self.0))
            .then_with(|| self.0.len().cmp(&other.0.len()))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Odometer over an integer box.
pub struct BoxIter {
    lo: Vec<u32>,
    hi: Vec<u32>,
    cur: Option<Vec<u32>>,
}

impl Iterator for BoxIter {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let out = self.cur.clone()?;
        let mut next = out.clone();
        let mut advanced = false;
        for i in 0..next.len() {
            if next[i] < self.hi[i] {
                next[i] += 1;
                advanced = true;
                break;
            }
            next[i] = self.lo[i];
        }
        self.cur = if advanced { Some(next) } else { None };
        Some(MultiIndex(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let mut v = vec![
            MultiIndex::new(vec![0, 2]),
            MultiIndex::new(vec![1, 0]),
            MultiIndex::new(vec![0, 0]),
            MultiIndex::new(vec![1, 1]),
            MultiIndex::new(vec![0, 1]),
            MultiIndex::new(vec![2, 0]),
        ];
        v.sort();
        let got: Vec<Vec<u32>> = v.into_iter().map(|m| m.into_vec()).collect();
        assert_eq!(
            got,
            vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]
        );
    }

    #[test]
    fn box_enumeration_counts() {
        let k = MultiIndex::new(vec![2, 1, 3]);
        assert_eq!(k.box_below().count(), 3 * 2 * 4);
        let lo = MultiIndex::new(vec![1, 0, 2]);
        assert_eq!(MultiIndex::box_between(&lo, &k).count(), 2 * 2 * 2);
        assert_eq!(MultiIndex::zeros(0).box_below().count(), 1);
    }

    #[test]
    fn binomial_and_factorial() {
        let k = MultiIndex::new(vec![3, 2]);
        let a = MultiIndex::new(vec![1, 1]);
        assert_eq!(k.binomial::<f64>(&a), 6.0);
        assert_eq!(k.factorial::<f64>(), 12.0);
    }
}
