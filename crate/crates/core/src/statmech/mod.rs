//! Lattice-model polynomials: Ising fugacity partition functions, circle
//! polynomials of Hermitian contractions, matching polynomials and
//! degree-weighted graph polynomials. Each has two independent constructions
//! so they can be checked against each other.

mod graph;
mod ising;
mod scan;

pub use graph::{matching_polynomial, matching_polynomial_map, wagner, wagner_poly, wagner_univariate, Wagner, WagnerAudit};
pub use ising::{
    edge_reweight, ising_brute_force, ising_cosh_sinh, ising_partition, ising_reweight, lee_yang_circle,
    lee_yang_direct, lee_yang_schur, IsingRoute,
};
pub use scan::{hilfssatz_truncated, zero_locus_scan, ScanFamily, ScanRow};

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Brute-force bound on spin count and edge count.
pub const BRUTE_FORCE_BOUND: usize = 24;
/// Bound for the direct circle-polynomial route.
pub const CIRCLE_DIRECT_BOUND: usize = 20;

const MATRIX_TOL: f64 = 1e-12;

/// Loopless graph on vertices `0..n` with nonnegative edge weights.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph<T: Real> {
    n: usize,
    edges: Vec<(usize, usize, T)>,
}

impl<T: Real> WeightedGraph<T> {
    /// Zero-based edges; each pair is stored with `i < j`.
    pub fn new(n: usize, edges: Vec<(usize, usize, T)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for (i, j, w) in edges {
            if i == j {
                return Err(Error::InvalidArgument(format!("loop at vertex {}", i + 1)));
            }
            if i >= n || j >= n {
                return Err(Error::IndexOutOfRange { index: i.max(j), nvars: n });
            }
            if !(w >= T::zero()) {
                return Err(Error::InvalidArgument(format!("negative weight on edge {} {}", i + 1, j + 1)));
            }
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            if !seen.insert((a, b)) {
                return Err(Error::InvalidArgument(format!("duplicate edge {} {}", a + 1, b + 1)));
            }
            out.push((a, b, w));
        }
        Ok(WeightedGraph { n, edges: out })
    }

    /// Unit weights.
    pub fn unweighted(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(n, edges.iter().map(|&(i, j)| (i, j, T::one())).collect())
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j, T::one()))).collect();
        WeightedGraph { n, edges }
    }

    /// Lines `i j lambda` with 1-based vertices; `#` starts a comment. An
    /// optional `n <count>` line fixes the vertex count, otherwise the largest
    /// index is used.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n = None;
        let mut edges = Vec::new();
        let mut max = 0usize;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).collect();
            let bad = |msg: &str| Error::Syntax { pos: lineno + 1, msg: msg.to_string() };
            if toks[0] == "n" {
                let v = toks.get(1).and_then(|t| t.parse::<usize>().ok()).ok_or_else(|| bad("expected `n <count>`"))?;
                n = Some(v);
                continue;
            }
            if toks.len() != 3 {
                return Err(bad("expected `i j lambda`"));
            }
            let i: usize = toks[0].parse().map_err(|_| bad("bad vertex"))?;
            let j: usize = toks[1].parse().map_err(|_| bad("bad vertex"))?;
            let w: f64 = toks[2].parse().map_err(|_| bad("bad weight"))?;
            if i == 0 || j == 0 {
                return Err(bad("vertices are 1-based"));
            }
            max = max.max(i).max(j);
            edges.push((i - 1, j - 1, T::lit(w)));
        }
        Self::new(n.unwrap_or(max), edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, T)] {
        &self.edges
    }

    /// Vertex degrees.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d = vec![0u32; self.n];
        for &(i, j, _) in &self.edges {
            d[i] += 1;
            d[j] += 1;
        }
        d
    }
}

fn parse_rows(text: &str) -> Result<Vec<Vec<String>>> {
    let rows: Vec<Vec<String>> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').map(|t| t.trim().to_string()).collect())
        .collect();
    let n = rows.len();
    if let Some((k, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::InvalidMatrix(format!("row {} has {} entries, expected {n}", k + 1, r.len())));
    }
    Ok(rows)
}

/// Symmetric nonnegative coupling matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingMatrix<T: Real> {
    j: Vec<Vec<T>>,
}

impl<T: Real> CouplingMatrix<T> {
    pub fn new(j: Vec<Vec<T>>) -> Result<Self> {
        let n = j.len();
        let tol = T::lit(MATRIX_TOL);
        for (a, row) in j.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!("row {} has {} entries, expected {n}", a + 1, row.len())));
            }
            for (b, &v) in row.iter().enumerate() {
                if !(v >= T::zero()) {
                    return Err(Error::InvalidMatrix(format!("negative coupling at ({}, {})", a + 1, b + 1)));
                }
                if (v - j[b][a]).abs() > tol {
                    return Err(Error::InvalidMatrix(format!("not symmetric at ({}, {})", a + 1, b + 1)));
                }
            }
        }
        Ok(CouplingMatrix { j })
    }

    /// Comma-separated rows.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let rows = parse_rows(text)?;
        let j = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|t| t.parse::<f64>().map(T::lit).map_err(|_| Error::InvalidMatrix(format!("bad entry `{t}`"))))
                    .collect::<Result<Vec<T>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(j)
    }

    pub fn n(&self) -> usize {
        self.j.len()
    }

    pub fn get(&self, a: usize, b: usize) -> T {
        self.j[a][b]
    }
}

/// Hermitian matrix with entries in the closed unit disk.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianContractionMatrix<T: Real> {
    a: Vec<Vec<C<T>>>,
}

impl<T: Real> HermitianContractionMatrix<T> {
    pub fn new(a: Vec<Vec<C<T>>>) -> Result<Self> {
        let n = a.len();
        let tol = T::lit(MATRIX_TOL);
        for (p, row) in a.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!("row {} has {} entries, expected {n}", p + 1, row.len())));
            }
            for (q, v) in row.iter().enumerate() {
                if (v - a[q][p].conj()).norm() > tol {
                    return Err(Error::InvalidMatrix(format!("not Hermitian at ({}, {})", p + 1, q + 1)));
                }
                if v.norm() > T::one() + tol {
                    return Err(Error::InvalidMatrix(format!("entry ({}, {}) outside the closed unit disk", p + 1, q + 1)));
                }
            }
        }
        Ok(HermitianContractionMatrix { a })
    }

    /// Real off-diagonal entries from a symmetric real matrix.
    pub fn from_real(a: Vec<Vec<T>>) -> Result<Self> {
        Self::new(a.into_iter().map(|r| r.into_iter().map(|x| C::new(x, T::zero())).collect()).collect())
    }

    /// Comma-separated rows of complex entries (`0.5`, `0.3+0.2i`, `-i`).
    pub fn parse_csv(text: &str) -> Result<Self> {
        let rows = parse_rows(text)?;
        let a = rows
            .iter()
            .map(|r| r.iter().map(|t| parse_complex::<T>(t)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(a)
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn get(&self, p: usize, q: usize) -> C<T> {
        self.a[p][q]
    }
}

fn parse_complex<T: Real>(s: &str) -> Result<C<T>> {
    let bad = || Error::InvalidMatrix(format!("bad entry `{s}`"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad());
    }
    if !t.ends_with('i') {
        return t.parse::<f64>().map(|x| C::new(T::lit(x), T::zero())).map_err(|_| bad());
    }
    let body = &t[..t.len() - 1];
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(k, c)| (c == '+' || c == '-') && !matches!(body.as_bytes()[k - 1], b'e' | b'E'))
        .map(|(k, _)| k)
        .last();
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        x => x,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.parse().map_err(|_| bad())?;
    Ok(C::new(T::lit(re), T::lit(im)))
}

pub(crate) fn require_bound(what: &'static str, value: usize, bound: usize) -> Result<()> {
    if value > bound {
        return Err(Error::BoundExceeded { what, value, bound });
    }
    Ok(())
}
