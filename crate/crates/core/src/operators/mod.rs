//! Linear operators on `ℂ_κ[z]`: finite monomial tables plus the catalog of
//! concrete transforms.

mod catalog;

pub use catalog::*;

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{MultiIndex, PolyJson, Polynomial};
use crate::scalar::{czero, Real, C};

/// `T : ℂ_κ[z] → ℂ[z]` given by the images of the monomials `z^α`, `α ≤ κ`.
/// Missing entries map to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialOperator<T: Real> {
    kappa: MultiIndex,
    out_nvars: usize,
    table: BTreeMap<MultiIndex, Polynomial<T>>,
}

impl<T: Real> MonomialOperator<T> {
    pub fn new(
        kappa: MultiIndex,
        out_nvars: usize,
        table: impl IntoIterator<Item = (MultiIndex, Polynomial<T>)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (alpha, image) in table {
            if !alpha.le(&kappa) {
                return Err(Error::DegreeExceeds {
                    degree: alpha.into_vec(),
                    bound: kappa.into_vec(),
                });
            }
            if image.nvars() != out_nvars {
                return Err(Error::NvarsMismatch(out_nvars, image.nvars()));
            }
            if !image.is_zero() {
                map.insert(alpha, image);
            }
        }
        Ok(MonomialOperator {
            kappa,
            out_nvars,
            table: map,
        })
    }

    /// Tabulates a linear map by applying it to every monomial `z^α ≤ κ`.
    pub fn from_linear_map<F>(kappa: MultiIndex, out_nvars: usize, map: F) -> Result<Self>
    where
        F: Fn(&Polynomial<T>) -> Result<Polynomial<T>>,
    {
        let n = kappa.len();
        let mut table = Vec::new();
        for alpha in kappa.box_below() {
            let mono = Polynomial::monomial(n, alpha.clone(), Complex::new(T::one(), T::zero()));
            table.push((alpha, map(&mono)?));
        }
        Self::new(kappa, out_nvars, table)
    }

    pub fn identity(kappa: MultiIndex) -> Self {
        let n = kappa.len();
        Self::from_linear_map(kappa, n, |f| Ok(f.clone())).expect("identity is well formed")
    }

    /// `T(z^α) = λ(α) z^α`.
    pub fn diagonal(seq: &DiagonalSequence<T>) -> Self {
        let n = seq.kappa.len();
        let table = seq
            .values
            .iter()
            .map(|(a, v)| (a.clone(), Polynomial::monomial(n, a.clone(), *v)));
        Self::new(seq.kappa.clone(), n, table).expect("diagonal is well formed")
    }

    pub fn kappa(&self) -> &MultiIndex {
        &self.kappa
    }

    pub fn nvars(&self) -> usize {
        self.kappa.len()
    }

    pub fn out_nvars(&self) -> usize {
        self.out_nvars
    }

    /// Image of `z^α` (zero outside the table).
    pub fn image(&self, alpha: &MultiIndex) -> Polynomial<T> {
        self.table
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.out_nvars))
    }

    pub fn table(&self) -> impl Iterator<Item = (&MultiIndex, &Polynomial<T>)> + '_ {
        self.table.iter()
    }

    /// Linear extension of the table.
    pub fn apply(&self, f: &Polynomial<T>) -> Result<Polynomial<T>> {
        if f.nvars() != self.nvars() {
            return Err(Error::NvarsMismatch(self.nvars(), f.nvars()));
        }
        f.require_degree_within(&self.kappa)?;
        let mut acc = Polynomial::zero(self.out_nvars);
        for (alpha, c) in f.terms() {
            if let Some(img) = self.table.get(alpha) {
                acc = &acc + &img.scale_by(*c);
            }
        }
        Ok(acc)
    }

    /// `T₁ + T₂` on a common `κ`.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.kappa != other.kappa || self.out_nvars != other.out_nvars {
            return Err(Error::Shape("operators differ in κ or output variables".into()));
        }
        let keys: std::collections::BTreeSet<&MultiIndex> =
            self.table.keys().chain(other.table.keys()).collect();
        let table: Vec<_> = keys
            .into_iter()
            .map(|a| (a.clone(), &self.image(a) + &other.image(a)))
            .collect();
        Self::new(self.kappa.clone(), self.out_nvars, table)
    }

    /// The `(#monomials in range) × (#α ≤ κ)` coefficient matrix, columns
    /// indexed by `α` in box order, rows by the union of image supports.
    pub fn coefficient_matrix(&self) -> (Vec<MultiIndex>, Vec<MultiIndex>, Vec<Vec<C<T>>>) {
        let cols: Vec<MultiIndex> = self.kappa.box_below().collect();
        let mut rows: Vec<MultiIndex> = self
            .table
            .values()
            .flat_map(|p| p.support())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        rows.sort();
        let m: Vec<Vec<C<T>>> = rows
            .iter()
            .map(|r| cols.iter().map(|a| self.image(a).coeff(r)).collect())
            .collect();
        (rows, cols, m)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let spec: OperatorJson = serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
        spec.to_operator()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let spec = OperatorJson {
            kappa: self.kappa.as_slice().to_vec(),
            table: Some(
                self.table
                    .iter()
                    .map(|(a, p)| TableEntryJson {
                        alpha: a.as_slice().to_vec(),
                        image: PolyJson::from(p),
                    })
                    .collect(),
            ),
            diagonal: None,
        };
        serde_json::to_value(spec).expect("plain data serializes")
    }
}

/// `λ(α)` for every `α ≤ κ`, the diagonal operator `z^α ↦ λ(α) z^α`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalSequence<T: Real> {
    pub kappa: MultiIndex,
    pub values: BTreeMap<MultiIndex, C<T>>,
}

impl<T: Real> DiagonalSequence<T> {
    /// Requires a value for every `α ≤ κ`.
    pub fn new(kappa: MultiIndex, values: BTreeMap<MultiIndex, C<T>>) -> Result<Self> {
        for alpha in kappa.box_below() {
            if !values.contains_key(&alpha) {
                return Err(Error::IncompleteSequence(alpha.into_vec()));
            }
        }
        if let Some(a) = values.keys().find(|a| !(*a).le(&kappa)) {
            return Err(Error::DegreeExceeds {
                degree: a.as_slice().to_vec(),
                bound: kappa.into_vec(),
            });
        }
        Ok(DiagonalSequence { kappa, values })
    }

    pub fn from_fn<F: Fn(&MultiIndex) -> C<T>>(kappa: MultiIndex, f: F) -> Self {
        let values = kappa.box_below().map(|a| {
            let v = f(&a);
            (a, v)
        });
        DiagonalSequence {
            values: values.collect(),
            kappa,
        }
    }

    /// Univariate `λ(0), …, λ(κ)`.
    pub fn univariate(values: &[T]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("empty sequence".into()));
        }
        let kappa = MultiIndex::new(vec![(values.len() - 1) as u32]);
        Ok(Self::from_fn(kappa, |a| {
            Complex::new(values[a[0] as usize], T::zero())
        }))
    }

    pub fn get(&self, alpha: &MultiIndex) -> C<T> {
        self.values.get(alpha).copied().unwrap_or_else(czero)
    }

    pub fn is_real(&self, tol: T) -> bool {
        self.values.values().all(|v| v.im.abs() <= tol)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OperatorJson {
    pub kappa: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<TableEntryJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagonal: Option<Vec<DiagonalEntryJson>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableEntryJson {
    pub alpha: Vec<u32>,
    pub image: PolyJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagonalEntryJson {
    pub alpha: Vec<u32>,
    pub value: f64,
    #[serde(default)]
    pub im: f64,
}

impl OperatorJson {
    pub fn to_operator<T: Real>(&self) -> Result<MonomialOperator<T>> {
        let kappa = MultiIndex::new(self.kappa.clone());
        match (&self.table, &self.diagonal) {
            (Some(table), None) => {
                let out = table.first().map(|e| e.image.nvars).unwrap_or(kappa.len());
                let entries = table
                    .iter()
                    .map(|e| Ok((MultiIndex::new(e.alpha.clone()), e.image.to_poly()?)))
                    .collect::<Result<Vec<_>>>()?;
                for (a, _) in &entries {
                    if a.len() != kappa.len() {
                        return Err(Error::LengthMismatch {
                            expected: kappa.len(),
                            got: a.len(),
                        });
                    }
                }
                MonomialOperator::new(kappa, out, entries)
            }
            (None, Some(_)) => Ok(MonomialOperator::diagonal(&self.to_diagonal()?)),
            _ => Err(Error::Json("operator spec needs exactly one of 'table' or 'diagonal'".into())),
        }
    }

    /// The diagonal shorthand; missing entries are an error.
    pub fn to_diagonal<T: Real>(&self) -> Result<DiagonalSequence<T>> {
        let kappa = MultiIndex::new(self.kappa.clone());
        let diag = self
            .diagonal
            .as_ref()
            .ok_or_else(|| Error::Json("operator spec has no 'diagonal'".into()))?;
        let mut values = BTreeMap::new();
        for e in diag {
            if e.alpha.len() != kappa.len() {
                return Err(Error::LengthMismatch {
                    expected: kappa.len(),
                    got: e.alpha.len(),
                });
            }
            values.insert(
                MultiIndex::new(e.alpha.clone()),
                Complex::new(T::lit(e.value), T::lit(e.im)),
            );
        }
        DiagonalSequence::new(kappa, values)
    }
}
