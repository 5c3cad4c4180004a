//! Univariate complex root finding.
//!
//! Aberth-Ehrlich simultaneous iteration from a Newton-polygon start, a
//! companion-matrix fallback for low degree, and a final cluster merge that
//! replaces numerically split multiple roots by their centroid.

use nalgebra::{Complex as NC, DMatrix};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{czero, Real, C};

/// Iteration cap for the simultaneous iteration.
pub const MAX_ITER: usize = 200;
/// Degree up to which the companion-matrix fallback is attempted.
pub const COMPANION_MAX_DEGREE: usize = 30;
/// Residual bound: `|f(r)| ≤ RESIDUAL_TOL · scale · max(1,|r|)^deg`.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Roots of `Σ c_k z^k` with multiplicity. Leading coefficients that are
/// exactly zero are dropped first; a constant returns no roots.
pub fn roots<T: Real>(coeffs: &[C<T>]) -> Result<Vec<C<T>>> {
    let mut hi = coeffs.len();
    while hi > 0 && coeffs[hi - 1] == czero() {
        hi -= 1;
    }
    if hi == 0 {
        return Err(Error::ZeroPolynomial("roots"));
    }
    let coeffs = &coeffs[..hi];
    // zero roots
    let lo = coeffs.iter().take_while(|c| **c == czero()).count();
    let mut out = vec![czero(); lo];
    let p = &coeffs[lo..];
    if p.len() <= 1 {
        return Ok(out);
    }
    out.extend(nonzero_roots(p));
    Ok(out)
}

/// Like [`roots`] but first drops leading coefficients below `rel` times the
/// largest coefficient magnitude (cancellation noise in derived polynomials).
pub fn roots_trimmed<T: Real>(coeffs: &[C<T>], rel: T) -> Result<Vec<C<T>>> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(T::zero(), |a, b| a.max(b));
    if scale == T::zero() {
        return Err(Error::ZeroPolynomial("roots"));
    }
    let mut hi = coeffs.len();
    while hi > 0 && coeffs[hi - 1].norm() <= rel * scale {
        hi -= 1;
    }
    roots(&coeffs[..hi])
}

/// Horner evaluation of `p` and `p'` plus the running magnitude bound
/// `Σ |c_k| |z|^k`.
fn horner<T: Real>(p: &[C<T>], z: C<T>) -> (C<T>, C<T>, T) {
    let mut v = czero();
    let mut d = czero();
    let mut m = T::zero();
    let az = z.norm();
    for c in p.iter().rev() {
        d = d * z + v;
        v = v * z + c;
        m = m * az + c.norm();
    }
    (v, d, m)
}

pub(crate) fn eval_dense<T: Real>(p: &[C<T>], z: C<T>) -> C<T> {
    p.iter().rev().fold(czero(), |acc, c| acc * z + c)
}

fn residual_ok<T: Real>(p: &[C<T>], z: C<T>, scale: T) -> bool {
    let deg = (p.len() - 1) as i32;
    let v = eval_dense(p, z).norm();
    v.is_finite() && v <= T::lit(RESIDUAL_TOL) * scale * T::one().max(z.norm()).powi(deg)
}

/// Normalized residual `|f(r)| / (scale · max(1,|r|)^deg)`.
fn residual_ratio<T: Real>(p: &[C<T>], z: C<T>, scale: T) -> f64 {
    let deg = (p.len() - 1) as i32;
    let v = eval_dense(p, z).norm() / (scale * T::one().max(z.norm()).powi(deg));
    let v = v.f64();
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

fn nonzero_roots<T: Real>(p: &[C<T>]) -> Vec<C<T>> {
    let n = p.len() - 1;
    if n == 1 {
        return vec![-p[0] / p[1]];
    }
    let scale = p.iter().map(|c| c.norm()).fold(T::zero(), |a, b| a.max(b));
    let mut z = aberth(p);
    if z.iter().any(|r| !residual_ok(p, *r, scale)) && n <= COMPANION_MAX_DEGREE {
        if let Some(alt) = companion(p) {
            let worst = |v: &[C<T>]| {
                v.iter()
                    .map(|r| residual_ratio(p, newton_polish(p, *r), scale))
                    .fold(0.0f64, f64::max)
            };
            if worst(&alt) < worst(&z) {
                z = alt;
            }
        }
    }
    refine(p, z)
}

/// Initial radii from the upper convex hull of `(k, log|c_k|)`.
fn newton_polygon_start<T: Real>(p: &[C<T>]) -> Vec<C<T>> {
    let n = p.len() - 1;
    let logs: Vec<f64> = p
        .iter()
        .map(|c| {
            let a = c.norm().f64();
            if a > 0.0 {
                a.ln()
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect();
    let mut hull: Vec<usize> = Vec::new();
    for k in 0..=n {
        if logs[k] == f64::NEG_INFINITY {
            continue;
        }
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // drop b if it lies on or below segment a-k
            let cross = (b as f64 - a as f64) * (logs[k] - logs[a])
                - (k as f64 - a as f64) * (logs[b] - logs[a]);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    let mut out = Vec::with_capacity(n);
    let tau = std::f64::consts::TAU;
    let sigma = 0.7;
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        let m = b - a;
        let r = ((logs[a] - logs[b]) / m as f64).exp();
        for j in 0..m {
            let ang = tau * (j as f64) / (m as f64) + tau * (a as f64) / (n as f64) + sigma;
            out.push(Complex::new(T::lit(r * ang.cos()), T::lit(r * ang.sin())));
        }
    }
    out
}

fn aberth<T: Real>(p: &[C<T>]) -> Vec<C<T>> {
    let n = p.len() - 1;
    let mut z = newton_polygon_start(p);
    debug_assert_eq!(z.len(), n);
    let eps = T::epsilon();
    let mut done = vec![false; n];
    for _ in 0..MAX_ITER {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (v, d, m) = horner(p, z[i]);
            if v.norm() <= T::lit(4.0) * eps * m {
                done[i] = true;
                continue;
            }
            let ratio = v / d;
            let mut s = czero();
            for j in 0..n {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff != czero() {
                        s = s + diff.inv();
                    }
                }
            }
            let denom = Complex::new(T::one(), T::zero()) - ratio * s;
            let step = if denom.norm() > T::zero() && d != czero() {
                ratio / denom
            } else if d != czero() {
                ratio
            } else {
                // stationary point: nudge
                Complex::new(eps.sqrt() * (T::one() + z[i].norm()), T::zero())
            };
            if !step.re.is_finite() || !step.im.is_finite() {
                done[i] = true;
                continue;
            }
            z[i] = z[i] - step;
            if step.norm() <= eps * z[i].norm() {
                done[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            break;
        }
    }
    z
}

fn newton_polish<T: Real>(p: &[C<T>], mut z: C<T>) -> C<T> {
    let mut best = eval_dense(p, z).norm();
    for _ in 0..4 {
        let (v, d, _) = horner(p, z);
        if d == czero() || v == czero() {
            break;
        }
        let cand = z - v / d;
        let val = eval_dense(p, cand).norm();
        if val.is_finite() && val < best {
            best = val;
            z = cand;
        } else {
            break;
        }
    }
    z
}

/// Eigenvalues of the companion matrix, computed in `f64`.
fn companion<T: Real>(p: &[C<T>]) -> Option<Vec<C<T>>> {
    let n = p.len() - 1;
    let lead = NC::new(p[n].re.f64(), p[n].im.f64());
    let mut m = DMatrix::<NC<f64>>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = NC::new(1.0, 0.0);
    }
    for i in 0..n {
        let c = NC::new(p[i].re.f64(), p[i].im.f64());
        m[(i, n - 1)] = -c / lead;
    }
    let schur = nalgebra::Schur::try_new(m, f64::EPSILON, 10_000)?;
    let (_, t) = schur.unpack();
    Some(
        (0..n)
            .map(|i| Complex::new(T::lit(t[(i, i)].re), T::lit(t[(i, i)].im)))
            .collect(),
    )
}

/// Newton on the `k`-th derivative, used to locate a `k+1`-fold root.
fn derivative_newton<T: Real>(p: &[C<T>], k: usize, start: C<T>) -> C<T> {
    let q: Vec<C<T>> = p[k..]
        .iter()
        .enumerate()
        .map(|(j, c)| c.scale(crate::scalar::falling::<T>((j + k) as u32, k as u32)))
        .collect();
    let mut z = start;
    for _ in 0..50 {
        let (v, d, _) = horner(&q, z);
        if d == czero() {
            break;
        }
        let step = v / d;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        z = z - step;
        if step.norm() <= T::epsilon() * T::one().max(z.norm()) {
            break;
        }
    }
    z
}

fn single_linkage<T: Real>(z: &[C<T>], members: &[usize], thr: T) -> Vec<Vec<usize>> {
    let n = members.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (z[members[i]], z[members[j]]);
            if (a - b).norm() <= thr * T::one().max(a.norm()) {
                let (ra, rb) = (find(&mut parent, i), find(&mut parent, j));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(members[i]);
    }
    groups.into_values().collect()
}

/// Polishes isolated roots by Newton and replaces each single-linkage cluster
/// (distance `≤ 1e-1·max(1,|r|)`) by the matching root of the derivative of
/// order `size - 1`, when that point is at least as good a root as the
/// members. Rejected clusters are split at tighter thresholds.
fn refine<T: Real>(p: &[C<T>], z: Vec<C<T>>) -> Vec<C<T>> {
    let scale = p.iter().map(|c| c.norm()).fold(T::zero(), |a, b| a.max(b));
    let z: Vec<C<T>> = z.iter().map(|r| newton_polish(p, *r)).collect();
    let mut out = z.clone();
    let all: Vec<usize> = (0..z.len()).collect();
    let mut stack: Vec<(Vec<usize>, f64)> = single_linkage(&z, &all, T::lit(1e-1))
        .into_iter()
        .map(|g| (g, 1e-1))
        .collect();
    let floor = 100.0 * T::epsilon().f64();
    while let Some((members, thr)) = stack.pop() {
        let m = members.len();
        if m < 2 {
            continue;
        }
        let centroid = members.iter().fold(czero(), |acc, &i| acc + z[i]) / T::from_usize_lossy(m);
        let radius = members
            .iter()
            .map(|&i| (z[i] - centroid).norm())
            .fold(T::zero(), |a, b| a.max(b));
        let c = derivative_newton(p, m - 1, centroid);
        let worst = members
            .iter()
            .map(|&i| residual_ratio(p, out[i], scale))
            .fold(0.0f64, f64::max);
        let near = (c - centroid).norm() <= T::lit(2.0) * radius + T::lit(1e-6) * T::one().max(centroid.norm());
        if near && residual_ratio(p, c, scale) <= (4.0 * worst).max(floor) {
            for &i in &members {
                out[i] = c;
            }
        } else if thr > 1e-9 {
            let tighter = thr * 1e-1;
            let parts = single_linkage(&z, &members, T::lit(tighter));
            if parts.len() == 1 {
                stack.push((members, tighter));
            } else {
                stack.extend(parts.into_iter().map(|g| (g, tighter)));
            }
        }
    }
    out
}
