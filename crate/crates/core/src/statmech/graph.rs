use std::collections::HashMap;

use rayon::prelude::*;

use super::{require_bound, WeightedGraph, BRUTE_FORCE_BOUND};
use crate::error::{Error, Result};
use crate::multiplier::hurwitz_multiplier;
use crate::operators::map_multiaffine_part;
use crate::operators::DiagonalSequence;
use crate::poly::{MultiIndex, Polynomial};
use crate::scalar::{creal, Real, C};

const CHUNK_BITS: usize = 12;

/// `Σ_M ∏_{ij∈M} λ_ij z_i z_j` by enumerating matchings.
pub fn matching_polynomial<T: Real>(g: &WeightedGraph<T>) -> Polynomial<T> {
    fn walk<T: Real>(
        edges: &[(usize, usize, T)],
        from: usize,
        used: &mut Vec<bool>,
        weight: T,
        out: &mut Vec<(MultiIndex, C<T>)>,
    ) {
        out.push((
            MultiIndex::new(used.iter().map(|&u| u as u32).collect()),
            creal(weight),
        ));
        for (k, &(i, j, w)) in edges.iter().enumerate().skip(from) {
            if !used[i] && !used[j] {
                used[i] = true;
                used[j] = true;
                walk(edges, k + 1, used, weight * w, out);
                used[i] = false;
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    walk(g.edges(), 0, &mut vec![false; g.n()], T::one(), &mut out);
    Polynomial::from_terms(g.n(), out).expect("exponent lengths match")
}

/// Multi-affine part of `∏_{ij∈E} (1 + λ_ij z_i z_j)`, truncating after each
/// factor.
pub fn matching_polynomial_map<T: Real>(g: &WeightedGraph<T>) -> Polynomial<T> {
    let n = g.n();
    let mut acc = Polynomial::one(n);
    for &(i, j, w) in g.edges() {
        let e = MultiIndex::unit(n, i).add(&MultiIndex::unit(n, j));
        let factor = &Polynomial::one(n) + &Polynomial::monomial(n, e, creal(w));
        acc = map_multiaffine_part(&(&acc * &factor));
    }
    acc
}

/// Hypothesis checks for the degree-weighted graph polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct WagnerAudit {
    /// `deg G ≤ κ`.
    pub degree_ok: bool,
    /// Per vertex: `Σ_k C(κ_i,k) u_i(k) z^k` has only real nonpositive zeros.
    pub u_ok: Vec<bool>,
}

impl WagnerAudit {
    pub fn passes(&self) -> bool {
        self.degree_ok && self.u_ok.iter().all(|&b| b)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "degree_ok": self.degree_ok,
            "u_ok": self.u_ok,
            "passes": self.passes(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct Wagner<T: Real> {
    /// `Σ_{H⊆E} λ^H u(deg(V,H)) z^{deg(V,H)}`.
    pub poly: Polynomial<T>,
    /// Coefficients grouped by `|H|`, in `t`.
    pub univariate: Polynomial<T>,
    pub audit: WagnerAudit,
}

fn audit<T: Real>(g: &WeightedGraph<T>, kappa: &MultiIndex, u: &[Vec<T>]) -> Result<WagnerAudit> {
    let n = g.n();
    if kappa.len() != n || u.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: if kappa.len() != n { kappa.len() } else { u.len() } });
    }
    for (i, ui) in u.iter().enumerate() {
        if ui.len() != kappa[i] as usize + 1 {
            return Err(Error::LengthMismatch { expected: kappa[i] as usize + 1, got: ui.len() });
        }
    }
    let degree_ok = g.degrees().iter().zip(kappa.as_slice()).all(|(d, k)| d <= k);
    let u_ok = u
        .iter()
        .map(|ui| {
            let seq = DiagonalSequence::univariate(ui)?;
            let k = seq.kappa.clone();
            Ok(hurwitz_multiplier(&seq, &k)?.verdict)
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(WagnerAudit { degree_ok, u_ok })
}

/// Subset sum over `E`. Vertex sequences are indexed `u[i][k]`, `k ≤ κ_i`;
/// degrees beyond `κ_i` contribute zero. The audit is reported, not enforced.
pub fn wagner<T: Real>(g: &WeightedGraph<T>, kappa: &MultiIndex, u: &[Vec<T>]) -> Result<Wagner<T>> {
    let audit = audit(g, kappa, u)?;
    let n = g.n();
    let m = g.edges().len();
    require_bound("edges", m, BRUTE_FORCE_BOUND)?;
    let edges = g.edges();
    let chunk = CHUNK_BITS.min(m);
    let chunks = 1usize << (m - chunk);
    let partial: Vec<(HashMap<Vec<u32>, T>, Vec<T>)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut by_deg: HashMap<Vec<u32>, T> = HashMap::new();
            let mut by_size = vec![T::zero(); m + 1];
            let mut deg = vec![0u32; n];
            for low in 0..1usize << chunk {
                let h = (c << chunk) | low;
                deg.iter_mut().for_each(|d| *d = 0);
                let mut w = T::one();
                for (k, &(i, j, l)) in edges.iter().enumerate() {
                    if (h >> k) & 1 == 1 {
                        deg[i] += 1;
                        deg[j] += 1;
                        w = w * l;
                    }
                }
                for (i, &d) in deg.iter().enumerate() {
                    w = w * u[i].get(d as usize).copied().unwrap_or_else(T::zero);
                }
                if w == T::zero() {
                    continue;
                }
                let e = by_deg.entry(deg.clone()).or_insert_with(T::zero);
                *e = *e + w;
                let s = &mut by_size[h.count_ones() as usize];
                *s = *s + w;
            }
            (by_deg, by_size)
        })
        .collect();
    let mut terms = Vec::new();
    let mut sizes = vec![T::zero(); m + 1];
    for (by_deg, by_size) in partial {
        let mut keys: Vec<_> = by_deg.into_iter().collect();
        keys.sort_by(|a, b| a.0.cmp(&b.0));
        terms.extend(keys.into_iter().map(|(d, w)| (MultiIndex::new(d), creal(w))));
        for (s, w) in sizes.iter_mut().zip(by_size) {
            *s = *s + w;
        }
    }
    Ok(Wagner {
        poly: Polynomial::from_terms(n, terms)?,
        univariate: Polynomial::univariate_real(&sizes),
        audit,
    })
}

pub fn wagner_poly<T: Real>(g: &WeightedGraph<T>, kappa: &MultiIndex, u: &[Vec<T>]) -> Result<(Polynomial<T>, WagnerAudit)> {
    let w = wagner(g, kappa, u)?;
    Ok((w.poly, w.audit))
}

pub fn wagner_univariate<T: Real>(
    g: &WeightedGraph<T>,
    kappa: &MultiIndex,
    u: &[Vec<T>],
) -> Result<(Polynomial<T>, WagnerAudit)> {
    let w = wagner(g, kappa, u)?;
    Ok((w.univariate, w.audit))
}
