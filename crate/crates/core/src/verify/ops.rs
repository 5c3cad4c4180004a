use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{cases, failed, no_witness, real_rooted, Case, SuiteOptions};
use crate::domains::{phi_kappa_transform, CircularDomain, DomainProduct, MoebiusMap};
use crate::error::Result;
use crate::generators::{
    affine_product, from_roots, strictly_stable, polydisk_stable, real_roots, real_rooted_univariate,
};
use crate::operators::{
    asano_contract, convolution_star, de_bruijn_product, hard_lieb_sokal, iterate_transposition_averages,
    master_compose, master_compose_4n, master_compose_binomial, partial_swap, polarization, schur_hadamard, sym,
    tables, weyl_product_blocks, LiebSokalVariant, MasterVariant,
};
use crate::poly::{MultiIndex, Polynomial};
use crate::stability::univariate_roots;
use crate::symbols::{algebraic_symbol, SymbolKind};
use crate::C;

type P = Polynomial<f64>;

fn c(re: f64, im: f64) -> C<f64> {
    C::new(re, im)
}

fn rhp() -> CircularDomain<f64> {
    CircularDomain::half_plane(std::f64::consts::FRAC_PI_2)
}

fn strict(omega: &DomainProduct<f64>, kappa: &MultiIndex, rng: &mut ChaCha8Rng) -> Result<P> {
    let margin = rng.gen_range(0.05..0.5);
    strictly_stable(omega, kappa, margin, rng)
}

fn kappa_of<R: Rng>(rng: &mut R, n: usize, lo: u32, hi: u32) -> MultiIndex {
    MultiIndex::new((0..n).map(|_| rng.gen_range(lo..=hi)).collect())
}

/// Real-rooted univariates in their own blocks.
pub(super) fn gws(opts: &SuiteOptions) -> Vec<Case> {
    const FAMILIES: [&str; 4] = ["upper", "lower", "disk", "exterior"];
    cases(opts, |index, seed| {
        let family = FAMILIES[index % 4];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let domain = match index % 4 {
            0 => CircularDomain::upper_half_plane(),
            1 => CircularDomain::half_plane(std::f64::consts::PI),
            2 => CircularDomain::disk(c(0.0, 3.0), 2.9).expect("valid disk"),
            _ => CircularDomain::exterior(c(0.0, 0.0), 3.5).expect("valid exterior"),
        };
        let run = |rng: &mut ChaCha8Rng| -> Result<Case> {
            let blocks = rng.gen_range(1..=2usize);
            let top = if blocks == 1 { 5 } else { 3 };
            let degrees: Vec<u32> = (0..blocks).map(|_| rng.gen_range(1..=top)).collect();
            let kappa = MultiIndex::new(degrees.clone());
            let mut g = P::one(blocks);
            for (i, &d) in degrees.iter().enumerate() {
                g = &g * &real_rooted_univariate::<f64, _>(d as usize, rng).embed(blocks, &[i])?;
            }
            let f = polarization(&g, &kappa)?;
            let omega = DomainProduct::broadcast(domain, kappa.total() as usize);
            let (stable, stab) = no_witness(&f, &omega, opts.budget, seed, false);

            // one root moved into the domain: the diagonal point is a zero
            let d = degrees[0] as usize;
            let xi = loop {
                let z = domain.sample(rng);
                if z.norm() <= 10.0 {
                    break z;
                }
            };
            let mut roots: Vec<C<f64>> = real_roots::<f64, _>(d, rng).into_iter().map(|r| c(r, 0.0)).collect();
            roots[0] = xi;
            let moved = polarization(&from_roots(&roots), &MultiIndex::new(vec![d as u32]))?;
            let point = vec![xi; d];
            let value = moved.evaluate(&point)?.norm();
            let tol = 1e-9 * moved.scale();
            let witnessed = domain.contains(xi) && value <= tol;
            Ok(Case::new(
                family,
                index,
                seed,
                stable && witnessed,
                json!({
                    "kappa": kappa.as_slice(),
                    "stability": stab,
                    "moved_root": [xi.re, xi.im],
                    "diagonal_value": value,
                    "tolerance": tol,
                }),
            ))
        };
        vec![run(&mut rng).unwrap_or_else(|e| failed(family, index, seed, e))]
    })
}

pub(super) fn swap(opts: &SuiteOptions) -> Vec<Case> {
    const FAMILIES: [&str; 3] = ["closed-disk", "closed-upper", "exterior"];
    cases(opts, |index, seed| {
        let family = FAMILIES[index % 3];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let run = |rng: &mut ChaCha8Rng| -> Result<Case> {
            let n = rng.gen_range(2..=4usize);
            let kappa = MultiIndex::ones(n);
            let (f, omega) = match index % 3 {
                0 => (
                    polydisk_stable::<f64, _>(&kappa, rng),
                    DomainProduct::broadcast(CircularDomain::unit_disk().closed(), n),
                ),
                1 => {
                    let f0 = affine_product::<f64, _>(&kappa, rng.gen_bool(0.5), rng.gen_bool(0.5), rng);
                    let shift = MoebiusMap::translation(c(0.0, rng.gen_range(0.05..0.5)));
                    (
                        phi_kappa_transform(&f0, &vec![shift; n], &kappa)?,
                        DomainProduct::broadcast(CircularDomain::upper_half_plane().closed(), n),
                    )
                }
                _ => {
                    let center = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    let ext = CircularDomain::exterior(center, rng.gen_range(0.5..2.0))?;
                    let omega = DomainProduct::broadcast(ext, n);
                    (strict(&omega, &kappa, rng)?, omega)
                }
            };
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            let p = match index % 7 {
                0 => 0.0,
                1 => 1.0,
                _ => rng.gen_range(0.0..1.0),
            };
            let degree_ok = index % 3 != 2 || (f.degree_in(i) == 1 && f.degree_in(j) == 1);
            let out = partial_swap(&f, p, i, j)?;
            let (ok, detail) = no_witness(&out, &omega, opts.budget, seed, false);
            Ok(Case::new(
                family,
                index,
                seed,
                ok && degree_ok,
                json!({ "n": n, "p": p, "pair": [i + 1, j + 1], "degree_ok": degree_ok, "stability": detail }),
            ))
        };
        vec![run(&mut rng).unwrap_or_else(|e| failed(family, index, seed, e))]
    })
}

const COMPOSE_FAMILIES: [&str; 12] = [
    "master-half-plane",
    "master-upper",
    "master-disk",
    "schur-hadamard",
    "convolution",
    "asano",
    "lieb-sokal-t",
    "lieb-sokal-s",
    "lieb-sokal-r",
    "weyl",
    "de-bruijn",
    "master-disk-4n",
];

/// One case per composition family for every trial.
pub(super) fn compose(opts: &SuiteOptions) -> Vec<Case> {
    cases(opts, |index, seed| {
        COMPOSE_FAMILIES
            .iter()
            .enumerate()
            .map(|(v, &family)| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(v as u64);
                compose_case(v, &mut rng, opts.budget, seed)
                    .map(|(pass, detail)| Case::new(family, index, seed, pass, detail))
                    .unwrap_or_else(|e| failed(family, index, seed, e))
            })
            .collect()
    })
}

fn compose_case(v: usize, rng: &mut ChaCha8Rng, budget: usize, seed: u64) -> Result<(bool, serde_json::Value)> {
    match v {
        0..=2 => {
            let n = rng.gen_range(1..=2usize);
            let kappa = kappa_of(rng, n, 1, if n == 1 { 2 } else { 1 });
            let (domain, variant) = match v {
                0 => (
                    CircularDomain::half_plane(rng.gen_range(0.0..std::f64::consts::TAU)),
                    MasterVariant::HalfPlane,
                ),
                1 => (CircularDomain::upper_half_plane(), MasterVariant::H0),
                _ => (CircularDomain::unit_disk(), MasterVariant::Disk),
            };
            let k2 = MultiIndex::new([kappa.as_slice(), kappa.as_slice()].concat());
            let omega2 = DomainProduct::broadcast(domain, 2 * n);
            let f = strict(&omega2, &k2, rng)?;
            let g = strict(&omega2, &k2, rng)?;
            let (ok4, d4) = if variant == MasterVariant::Disk {
                (true, serde_json::Value::Null)
            } else {
                let four = master_compose_4n(&f, &g, &kappa, variant)?;
                no_witness(&four, &DomainProduct::broadcast(domain, 4 * n), budget, seed, true)
            };
            let two = master_compose(&f, &g, &kappa, variant)?;
            let bin = master_compose_binomial(&f, &g, &kappa, variant)?;
            let agree = two.relative_distance(&bin);
            let (ok2, d2) = no_witness(&two, &omega2, budget, seed, true);
            Ok((
                ok4 && ok2 && agree <= 1e-9,
                json!({ "domain": domain.to_string(), "kappa": kappa.as_slice(), "four_n": d4, "two_n": d2, "binomial_distance": agree }),
            ))
        }
        3 => {
            let n = rng.gen_range(1..=3usize);
            let kappa = kappa_of(rng, n, 1, 2);
            let omega = DomainProduct::broadcast(CircularDomain::unit_disk(), n);
            let f = strict(&omega, &kappa, rng)?;
            let g = strict(&omega, &kappa, rng)?;
            let out = schur_hadamard(&f, &g, &kappa)?;
            let (ok, d) = no_witness(&out, &omega, budget, seed, true);
            Ok((ok, json!({ "kappa": kappa.as_slice(), "stability": d })))
        }
        4 => {
            let n = rng.gen_range(1..=4usize);
            let kappa = MultiIndex::ones(n);
            let omega = DomainProduct::broadcast(rhp(), n);
            let f = strict(&omega, &kappa, rng)?;
            let g = strict(&omega, &kappa, rng)?;
            let out = convolution_star(&f, &g)?;
            let (ok, d) = no_witness(&out, &omega, budget, seed, true);
            Ok((ok, json!({ "n": n, "stability": d })))
        }
        5 => {
            let n = rng.gen_range(2..=4usize);
            let omega = DomainProduct::broadcast(CircularDomain::unit_disk(), n);
            let f = strict(&omega, &MultiIndex::ones(n), rng)?;
            let out = asano_contract(&f, 0, 1)?;
            let (ok, d) = no_witness(&out, &omega, budget, seed, true);
            Ok((ok, json!({ "n": n, "stability": d })))
        }
        6..=8 => {
            let variant = [LiebSokalVariant::T, LiebSokalVariant::S, LiebSokalVariant::R][v - 6];
            let n = rng.gen_range(2..=3usize);
            let d = rng.gen_range(1..=2u32);
            let mut k = vec![d, d];
            k.extend((2..n).map(|_| rng.gen_range(1..=2u32)));
            let kappa = MultiIndex::new(k);
            let omega = DomainProduct::broadcast(CircularDomain::upper_half_plane(), n);
            let f = strict(&omega, &kappa, rng)?;
            let out = hard_lieb_sokal(&f, variant, d)?;
            let (ok, det) = no_witness(&out, &omega, budget, seed, true);
            Ok((ok, json!({ "kappa": kappa.as_slice(), "d": d, "stability": det })))
        }
        9 => {
            let n = rng.gen_range(1..=2usize);
            let kf = kappa_of(rng, 2 * n, 0, 2);
            let kg = kappa_of(rng, 2 * n, 0, 2);
            // shifted off the real boundary, where float roots cannot be
            // told apart from interior zeros
            let shift = vec![MoebiusMap::translation(c(0.0, rng.gen_range(0.05..0.5))); 2 * n];
            let f = affine_product::<f64, _>(&kf, rng.gen_bool(0.5), false, rng);
            let g = affine_product::<f64, _>(&kg, rng.gen_bool(0.5), false, rng);
            let f = phi_kappa_transform(&f, &shift, &kf)?;
            let g = phi_kappa_transform(&g, &shift, &kg)?;
            let out = weyl_product_blocks(&f, &g, &vec![1.0; n])?;
            let omega = DomainProduct::broadcast(CircularDomain::upper_half_plane(), 2 * n);
            let (ok, d) = no_witness(&out, &omega, budget, seed, true);
            Ok((ok, json!({ "n": n, "stability": d })))
        }
        11 => {
            // the derivative form with ∂_z g: reported separately, it has
            // zeros in the polydisk for some disk-stable pairs
            let n = rng.gen_range(1..=2usize);
            let kappa = kappa_of(rng, n, 1, if n == 1 { 2 } else { 1 });
            let k2 = MultiIndex::new([kappa.as_slice(), kappa.as_slice()].concat());
            let omega2 = DomainProduct::broadcast(CircularDomain::unit_disk(), 2 * n);
            let f = strict(&omega2, &k2, rng)?;
            let g = strict(&omega2, &k2, rng)?;
            let four = master_compose_4n(&f, &g, &kappa, MasterVariant::Disk)?;
            let omega4 = DomainProduct::broadcast(CircularDomain::unit_disk(), 4 * n);
            let (ok, d) = no_witness(&four, &omega4, budget, seed, true);
            Ok((ok, json!({ "kappa": kappa.as_slice(), "four_n": d })))
        }
        _ => {
            let f = real_rooted_univariate::<f64, _>(rng.gen_range(1..=5), rng);
            let g = real_rooted_univariate::<f64, _>(rng.gen_range(1..=5), rng);
            let out = de_bruijn_product(&f, &g, -1.0)?;
            let roots = if out.is_zero() || out.degree_in(0) == 0 {
                Vec::new()
            } else {
                univariate_roots(&out)?
            };
            let ok = real_rooted(&roots, 1e-7);
            let max_im = roots.iter().map(|r| r.im.abs()).fold(0.0, f64::max);
            Ok((ok, json!({ "degree": out.degree_in(0), "max_abs_im": max_im })))
        }
    }
}

pub(super) fn averages(opts: &SuiteOptions) -> Vec<Case> {
    cases(opts, |index, seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=4usize);
        let terms: Vec<(MultiIndex, C<f64>)> = (0..rng.gen_range(2..=8))
            .map(|_| {
                (
                    kappa_of(&mut rng, n, 0, 2),
                    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                )
            })
            .collect();
        let f = match P::from_terms(n, terms) {
            Ok(f) => f,
            Err(e) => return vec![failed("transposition-averages", index, seed, e)],
        };
        let (out, trace) = iterate_transposition_averages(&f, 1000, seed);
        let monotone = trace.windows(2).all(|w| w[1] <= w[0] + 1e-12);
        let distance = out.max_distance(&sym(&f));
        vec![Case::new(
            "transposition-averages",
            index,
            seed,
            monotone && distance <= 1e-8,
            json!({
                "n": n,
                "initial_index": trace[0],
                "final_index": trace[trace.len() - 1],
                "monotone": monotone,
                "distance_to_sym": distance,
            }),
        )]
    })
}

fn zw(nv: usize, i: usize) -> P {
    P::var(nv, i)
}

fn constant(nv: usize, x: f64) -> P {
    P::constant(nv, c(x, 0.0))
}

/// Symbols of catalog operators against their closed forms.
pub(super) fn symbols(opts: &SuiteOptions) -> Vec<Case> {
    const FAMILIES: [&str; 4] = ["asano", "mod", "lieb-sokal-t", "map"];
    cases(opts, |index, seed| {
        FAMILIES
            .iter()
            .enumerate()
            .map(|(v, &family)| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(v as u64);
                symbol_case(v, &mut rng)
                    .map(|(pass, detail)| Case::new(family, index, seed, pass, detail))
                    .unwrap_or_else(|e| failed(family, index, seed, e))
            })
            .collect()
    })
}

fn symbol_case(v: usize, rng: &mut ChaCha8Rng) -> Result<(bool, serde_json::Value)> {
    let (kappa, symbol, closed) = match v {
        0 => {
            let n = rng.gen_range(2..=3usize);
            let mut k = vec![1, 1];
            k.extend((2..n).map(|_| rng.gen_range(1..=2u32)));
            let kappa = MultiIndex::new(k);
            let nv = 2 * n;
            let s = algebraic_symbol(&tables::asano::<f64>(kappa.clone(), 0, 1)?, &kappa, SymbolKind::DiskProduct)?;
            let mut closed = &P::one(nv) + &(&(&zw(nv, 0) * &zw(nv, n)) * &zw(nv, n + 1));
            for i in 2..n {
                closed = &closed * &(&P::one(nv) + &(&zw(nv, i) * &zw(nv, n + i))).pow(kappa[i]);
            }
            // the contracted pair leaves z2 unused
            (kappa, s, closed)
        }
        1 => {
            let n = rng.gen_range(1..=3usize);
            let kappa = kappa_of(rng, n, 1, 3);
            let nv = 2 * n;
            let s = algebraic_symbol(&tables::mod2::<f64>(kappa.clone())?, &kappa, SymbolKind::DiskProduct)?;
            let mut closed = constant(nv, 0.5f64.powi(n as i32));
            for i in 0..n {
                let one = P::one(nv);
                let (z, w) = (zw(nv, i), zw(nv, n + i));
                let plus = &(&one + &w).pow(kappa[i]) * &(&one + &z);
                let minus = &(&one - &w).pow(kappa[i]) * &(&one - &z);
                closed = &closed * &(&plus + &minus);
            }
            (kappa, s, closed)
        }
        2 => {
            let n = rng.gen_range(2..=3usize);
            let d = rng.gen_range(1..=3u32);
            let mut k = vec![d, d];
            k.extend((2..n).map(|_| rng.gen_range(1..=2u32)));
            let kappa = MultiIndex::new(k);
            let nv = 2 * n;
            let t = tables::hard_lieb_sokal::<f64>(kappa.clone(), LiebSokalVariant::T, d)?;
            let s = algebraic_symbol(&t, &kappa, SymbolKind::HalfPlaneAdd)?;
            let lead = &(&(&zw(nv, 0) + &zw(nv, 1)) + &zw(nv, n)) + &zw(nv, n + 1);
            let mut closed = lead.pow(d);
            for i in 2..n {
                closed = &closed * &(&zw(nv, i) + &zw(nv, n + i)).pow(kappa[i]);
            }
            (kappa, s, closed)
        }
        _ => {
            let n = rng.gen_range(1..=3usize);
            let kappa = kappa_of(rng, n, 1, 3);
            let nv = 2 * n;
            let s = algebraic_symbol(&tables::map::<f64>(kappa.clone())?, &kappa, SymbolKind::DiskProduct)?;
            let mut closed = P::one(nv);
            for i in 0..n {
                let zw_i = (&zw(nv, i) * &zw(nv, n + i)).scale_by(c(kappa[i] as f64, 0.0));
                closed = &closed * &(&P::one(nv) + &zw_i);
            }
            (kappa, s, closed)
        }
    };
    let distance = symbol.max_distance(&closed);
    Ok((
        distance <= 1e-12,
        json!({ "kappa": kappa.as_slice(), "distance": distance, "symbol": symbol.to_string() }),
    ))
}
