//! Seeded randomized search for zeros inside a product domain.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Verdict, EPS_ZERO};
use crate::domains::{DomainKind, DomainProduct};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::roots;
use crate::scalar::{creal, Real, C};

/// Trials evaluated between early-exit checks. Fixed so that the result does
/// not depend on the thread count.
pub const FALSIFY_CHUNK: usize = 256;

/// `EPS_ZERO · scale(f)`, with `scale` the largest coefficient magnitude.
pub fn witness_tolerance<T: Real>(f: &Polynomial<T>) -> T {
    T::lit(EPS_ZERO) * f.scale()
}

struct Trial<T: Real> {
    index: usize,
    witness: Option<(Vec<C<T>>, T)>,
    probe: (Vec<C<T>>, T),
}

fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.gen::<f64>() * (hi.ln() - lo.ln())).exp()
}

/// Boundary point and inward unit direction of a half-plane factor.
fn half_plane_ray<T: Real, R: Rng>(theta: T, offset: T, rng: &mut R) -> (C<T>, C<T>) {
    let u: f64 = rng.gen();
    let along = (std::f64::consts::PI * (u - 0.5)).tan();
    let rot = C::from_polar(T::one(), -theta);
    (rot * C::new(T::lit(along), offset), rot)
}

fn accept<T: Real>(f: &Polynomial<T>, omega: &DomainProduct<T>, p: Vec<C<T>>) -> Option<(Vec<C<T>>, T)> {
    if p.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) || !omega.contains(&p) {
        return None;
    }
    let v = f.eval(&p).norm();
    (v <= witness_tolerance(f)).then_some((p, v))
}

fn line_trial<T: Real, R: Rng>(
    f: &Polynomial<T>,
    omega: &DomainProduct<T>,
    rng: &mut R,
) -> (Option<(Vec<C<T>>, T)>, Vec<C<T>>) {
    let n = omega.len();
    let mut base = Vec::with_capacity(n);
    let mut dir = Vec::with_capacity(n);
    if omega.all_half_planes() {
        // real base on the boundary, positive direction: a zero z = x + iy
        // with y > 0 sits at t = i on such a line
        for d in omega.factors() {
            let DomainKind::HalfPlane { theta, offset } = d.kind else { unreachable!() };
            let (b, r) = half_plane_ray(theta, offset, rng);
            base.push(b);
            dir.push(r * T::lit(log_uniform(rng, 1e-2, 1e2)));
        }
    } else {
        base = omega.sample(rng);
        for _ in 0..n {
            let ang = rng.gen::<f64>() * std::f64::consts::TAU;
            let r = log_uniform(rng, 1e-2, 1e1);
            dir.push(C::new(T::lit(r * ang.cos()), T::lit(r * ang.sin())));
        }
    }
    let probe: Vec<C<T>> = if omega.all_half_planes() {
        base.iter().zip(&dir).map(|(b, d)| b + d * C::new(T::zero(), T::one())).collect()
    } else {
        base.clone()
    };
    let coeffs = f.restrict_line_dense(&base, &dir);
    let mut best: Option<(Vec<C<T>>, T)> = None;
    if let Ok(ts) = roots::roots_trimmed(&coeffs, T::lit(1e-14)) {
        for t in ts {
            let p: Vec<C<T>> = base.iter().zip(&dir).map(|(b, d)| b + d * t).collect();
            if let Some((p, v)) = accept(f, omega, p) {
                if best.as_ref().map_or(true, |(_, bv)| v < *bv) {
                    best = Some((p, v));
                }
            }
        }
    }
    (best, probe)
}

fn slice_trial<T: Real, R: Rng>(
    f: &Polynomial<T>,
    omega: &DomainProduct<T>,
    rng: &mut R,
) -> (Option<(Vec<C<T>>, T)>, Vec<C<T>>) {
    let n = omega.len();
    let point = omega.sample(rng);
    let j = rng.gen_range(0..n);
    let values: Vec<(usize, C<T>)> = (0..n).filter(|&i| i != j).map(|i| (i, point[i])).collect();
    let mut best: Option<(Vec<C<T>>, T)> = None;
    if let Ok(g) = f.substitute(&values) {
        let coeffs = g.dense_in(j);
        if let Ok(ts) = roots::roots_trimmed(&coeffs, T::lit(1e-14)) {
            for t in ts {
                let mut p = point.clone();
                p[j] = t;
                if let Some((p, v)) = accept(f, omega, p) {
                    if best.as_ref().map_or(true, |(_, bv)| v < *bv) {
                        best = Some((p, v));
                    }
                }
            }
        }
    }
    (best, point)
}

fn run_trial<T: Real>(f: &Polynomial<T>, omega: &DomainProduct<T>, seed: u64, index: usize) -> Trial<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(index as u64));
    let (witness, probe) = if index % 2 == 0 {
        line_trial(f, omega, &mut rng)
    } else {
        slice_trial(f, omega, &mut rng)
    };
    let pv = f.eval(&probe).norm();
    Trial {
        index,
        witness,
        probe: (probe, pv),
    }
}

fn better<T: Real>(a: &(T, usize), b: &(T, usize)) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 < b.1)
}

/// Seeded search for a zero of `f` in `Ω`. Never certifies: returns a
/// verified witness or trial statistics. Trial `k` uses seed `seed + k`;
/// trials alternate between line restrictions and single-variable slices.
pub fn falsify<T: Real>(f: &Polynomial<T>, omega: &DomainProduct<T>, budget: usize, seed: u64) -> Verdict<T> {
    let n = f.nvars();
    assert_eq!(omega.len(), n, "domain product arity");
    if f.is_zero() {
        let witness = omega.sample(&mut ChaCha8Rng::seed_from_u64(seed));
        return Verdict::Falsified {
            witness,
            value: T::zero(),
        };
    }
    if n == 0 {
        return Verdict::Unknown {
            trials: 0,
            min_abs: f.scale(),
            argmin: Vec::new(),
        };
    }
    let budget = budget.max(1);
    let mut min_probe: Option<(Vec<C<T>>, T, usize)> = None;
    let mut start = 0;
    while start < budget {
        let end = (start + FALSIFY_CHUNK).min(budget);
        let trials: Vec<Trial<T>> = (start..end)
            .into_par_iter()
            .map(|k| run_trial(f, omega, seed, k))
            .collect();
        let mut hit: Option<(Vec<C<T>>, T, usize)> = None;
        for t in trials {
            if let Some((p, v)) = t.witness {
                if hit.as_ref().map_or(true, |h| better(&(v, t.index), &(h.1, h.2))) {
                    hit = Some((p, v, t.index));
                }
            }
            let (p, v) = t.probe;
            if min_probe.as_ref().map_or(true, |m| better(&(v, t.index), &(m.1, m.2))) {
                min_probe = Some((p, v, t.index));
            }
        }
        if let Some((witness, value, _)) = hit {
            return Verdict::Falsified { witness, value };
        }
        start = end;
    }
    let (argmin, min_abs, _) = min_probe.expect("budget ≥ 1");
    Verdict::Unknown {
        trials: budget,
        min_abs,
        argmin,
    }
}

/// Real-stability consistency of a real polynomial: every one of `lines`
/// seeded restrictions `t ↦ f(x + t y)` with `x` real and `y` positive has
/// only real roots (`|Im t| ≤ 1e-8 · max(1, |t|)`).
pub fn real_stable_consistent<T: Real>(f: &Polynomial<T>, lines: usize, seed: u64) -> Result<bool> {
    if !f.is_real(T::lit(1e-12) * f.scale()) {
        return Err(Error::NotReal);
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("real stability"));
    }
    let n = f.nvars();
    let ok = (0..lines).into_par_iter().all(|k| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
        let base: Vec<C<T>> = (0..n).map(|_| creal(T::lit(rng.gen::<f64>() * 4.0 - 2.0))).collect();
        let dir: Vec<C<T>> = (0..n).map(|_| creal(T::lit(log_uniform(&mut rng, 1e-1, 1e1)))).collect();
        let coeffs = f.restrict_line_dense(&base, &dir);
        match roots::roots_trimmed(&coeffs, T::lit(1e-14)) {
            Ok(ts) => ts
                .iter()
                .all(|t| t.im.abs() <= T::lit(1e-8) * t.norm().max(T::one())),
            Err(_) => true,
        }
    });
    Ok(ok)
}
