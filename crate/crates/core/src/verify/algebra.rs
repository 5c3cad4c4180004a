use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{cases, failed, Case, SuiteOptions};
use crate::apolarity::{
    apolar_pairing, grace_check, hinkkanen_counterexample, moebius_invariance_check, AuditOptions, GraceReport,
    GraceVariant,
};
use crate::domains::{invert_i_kappa, phi_kappa_transform, CircularDomain, DomainProduct, MoebiusMap};
use crate::error::Result;
use crate::generators::{domain_stable, from_roots, polydisk_stable, stable_diagonal};
use crate::multiplier::{diagonal_symbol, factor_diagonal_stable, is_kappa_multiplier};
use crate::operators::DiagonalSequence;
use crate::poly::{MultiIndex, Polynomial};
use crate::C;

type P = Polynomial<f64>;

const GRACE_ATTEMPTS: usize = 20;

fn c(re: f64, im: f64) -> C<f64> {
    C::new(re, im)
}

fn kappa_of<R: Rng>(rng: &mut R, n: usize, lo: u32, hi: u32) -> MultiIndex {
    MultiIndex::new((0..n).map(|_| rng.gen_range(lo..=hi)).collect())
}

fn random_poly<R: Rng>(rng: &mut R, kappa: &MultiIndex) -> P {
    let mut terms = Vec::new();
    for a in kappa.box_below() {
        if rng.gen_bool(0.7) {
            terms.push((a, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))));
        }
    }
    P::from_terms(kappa.len(), terms).expect("exponents within κ")
}

/// `Σ α!(κ−α)! |a_α| |b_{κ−α}|`, the natural size of `{f, g}_κ`.
fn pairing_magnitude(f: &P, g: &P, kappa: &MultiIndex) -> f64 {
    kappa
        .box_below()
        .map(|a| {
            let rest = kappa.checked_sub(&a).expect("α ≤ κ");
            a.factorial::<f64>() * rest.factorial::<f64>() * f.coeff(&a).norm() * g.coeff(&rest).norm()
        })
        .sum()
}

fn random_sl2<R: Rng>(rng: &mut R) -> MoebiusMap<f64> {
    loop {
        let mut z = || c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let (a, b, cc) = (z(), z(), z());
        if a.norm() < 0.5 {
            continue;
        }
        let d = (c(1.0, 0.0) + b * cc) / a;
        if let Ok(m) = MoebiusMap::new(a, b, cc, d) {
            return m;
        }
    }
}

pub(super) fn apolar(opts: &SuiteOptions) -> Vec<Case> {
    cases(opts, |index, seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        if index == 0 {
            out.push(hinkkanen_case(seed));
            out.push(pairing_examples(seed));
        }
        let run = |rng: &mut ChaCha8Rng| -> Result<Case> {
            let n = rng.gen_range(1..=2usize);
            let kappa = kappa_of(rng, n, 1, 3);
            let f = random_poly(rng, &kappa);
            let g = random_poly(rng, &kappa);
            let maps: Vec<_> = (0..n).map(|_| random_sl2(rng)).collect();
            let residual = moebius_invariance_check(&f, &g, &kappa, &maps)?;
            let ff = phi_kappa_transform(&f, &maps, &kappa)?;
            let gg = phi_kappa_transform(&g, &maps, &kappa)?;
            let scale = pairing_magnitude(&f, &g, &kappa)
                .max(pairing_magnitude(&ff, &gg, &kappa))
                .max(1.0);
            Ok(Case::new(
                "moebius-invariance",
                index,
                seed,
                residual <= 1e-8 * scale,
                json!({ "kappa": kappa.as_slice(), "residual": residual, "scale": scale }),
            ))
        };
        out.push(run(&mut rng).unwrap_or_else(|e| failed("moebius-invariance", index, seed, e)));
        out.push(
            univariate_grace(&mut rng, opts, seed)
                .map(|(pass, d)| Case::new("univariate-grace", index, seed, pass, d))
                .unwrap_or_else(|e| failed("univariate-grace", index, seed, e)),
        );
        out
    })
}

fn hinkkanen_case(seed: u64) -> Case {
    match hinkkanen_counterexample::<f64>() {
        Ok(r) => {
            let failed_hyp: Vec<String> = r.failed_hypotheses().into_iter().map(String::from).collect();
            let only_support = failed_hyp.len() == 1 && failed_hyp[0].starts_with("kappa <= alpha + beta");
            Case::new(
                "counterexample",
                0,
                seed,
                r.pairing.norm() <= 1e-12 && only_support && !r.pass,
                r.to_json(),
            )
        }
        Err(e) => failed("counterexample", 0, seed, e),
    }
}

fn pairing_examples(seed: u64) -> Case {
    let k1 = MultiIndex::new(vec![1]);
    let k2 = MultiIndex::new(vec![2]);
    let k11 = MultiIndex::new(vec![1, 1]);
    let p = |s: &str, n| P::parse(s, Some(n)).expect("literal");
    let rows = [
        (p("1+z", 1), p("1-z", 1), k1, -2.0),
        (p("(1+z)^2", 1), p("z^2", 1), k2.clone(), 2.0),
        (p("(z-1)^2", 1), p("(z+1)^2", 1), k2, 8.0),
        (p("z1+z2", 2), P::one(2), k11, 0.0),
    ];
    let mut ok = true;
    let mut values = Vec::new();
    for (f, g, k, want) in rows {
        match apolar_pairing(&f, &g, &k) {
            Ok(v) => {
                ok &= (v - c(want, 0.0)).norm() <= 1e-12;
                values.push(json!([v.re, v.im]));
            }
            Err(e) => return failed("pairing-examples", 0, seed, e),
        }
    }
    Case::new("pairing-examples", 0, seed, ok, json!({ "values": values }))
}

fn random_circle<R: Rng>(rng: &mut R) -> Result<CircularDomain<f64>> {
    let center = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let r = rng.gen_range(0.5..2.0);
    match rng.gen_range(0..3) {
        0 => CircularDomain::disk(center, r),
        1 => CircularDomain::exterior(center, r),
        _ => Ok(CircularDomain::half_plane_offset(
            rng.gen_range(0.0..std::f64::consts::TAU),
            rng.gen_range(-1.0..1.0),
        )),
    }
}

/// Roots of `f` outside `C`, roots of `g` inside.
fn univariate_grace(rng: &mut ChaCha8Rng, opts: &SuiteOptions, seed: u64) -> Result<(bool, serde_json::Value)> {
    let domain = random_circle(rng)?;
    let d = rng.gen_range(1..=4u32);
    let outside = domain.complement().open();
    let fr: Vec<C<f64>> = (0..d).map(|_| outside.sample(rng)).collect();
    let gr: Vec<C<f64>> = (0..d).map(|_| domain.sample(rng)).collect();
    let (f, g) = (from_roots(&fr), from_roots(&gr));
    let kappa = MultiIndex::new(vec![d]);
    let r = grace_check(
        &f,
        &g,
        &kappa,
        &DomainProduct::broadcast(domain, 1),
        None,
        GraceVariant::Univariate,
        &audit(opts, seed),
    )?;
    Ok((r.pass, json!({ "domain": domain.to_string(), "report": r.to_json() })))
}

fn audit(opts: &SuiteOptions, seed: u64) -> AuditOptions {
    AuditOptions {
        budget: opts.budget,
        seed,
        assume_stable: false,
    }
}

const GRACE_FAMILIES: [&str; 3] = ["unit-polydisk", "disks-and-exteriors", "half-planes"];

/// Generated instances of the multivariate Grace variants. Instances that
/// fail a hypothesis are resampled.
pub(super) fn grace(opts: &SuiteOptions) -> Vec<Case> {
    cases(opts, |index, seed| {
        GRACE_FAMILIES
            .iter()
            .enumerate()
            .map(|(v, &family)| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(v as u64);
                let mut last = None;
                for attempt in 0..GRACE_ATTEMPTS {
                    match grace_instance(v, &mut rng, opts, seed) {
                        Ok(r) if r.hypotheses_hold => {
                            return Case::new(
                                family,
                                index,
                                seed,
                                r.pass,
                                json!({ "attempts": attempt + 1, "report": r.to_json() }),
                            )
                        }
                        Ok(r) => last = Some(r),
                        Err(e) => return failed(family, index, seed, e),
                    }
                }
                Case::new(
                    family,
                    index,
                    seed,
                    false,
                    json!({
                        "error": "no instance satisfied the hypotheses",
                        "last": last.map(|r| r.to_json()),
                    }),
                )
            })
            .collect()
    })
}

fn grace_instance(v: usize, rng: &mut ChaCha8Rng, opts: &SuiteOptions, seed: u64) -> Result<GraceReport<f64>> {
    match v {
        0 => {
            let n = rng.gen_range(1..=3usize);
            let kappa = kappa_of(rng, n, 1, 3);
            let f = polydisk_stable::<f64, _>(&kappa, rng);
            let g = invert_i_kappa(&polydisk_stable::<f64, _>(&kappa, rng), &kappa)?;
            let omega = DomainProduct::broadcast(CircularDomain::unit_disk(), n);
            grace_check(&f, &g, &kappa, &omega, None, GraceVariant::DiskExt, &audit(opts, seed))
        }
        1 => {
            let n = rng.gen_range(1..=2usize);
            let kappa = kappa_of(rng, n, 1, 2);
            let domains = (0..n)
                .map(|_| {
                    let center = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    let r = rng.gen_range(0.5..2.0);
                    if rng.gen_bool(0.5) {
                        CircularDomain::disk(center, r)
                    } else {
                        CircularDomain::exterior(center, r)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let omega = DomainProduct(domains);
            let f = domain_stable(&omega, &kappa, true, rng)?;
            let maps: Vec<_> = omega.factors().iter().map(|d| d.complement().to_unit_disk()).collect();
            let g = phi_kappa_transform(&polydisk_stable::<f64, _>(&kappa, rng), &maps, &kappa)?;
            grace_check(&f, &g, &kappa, &omega, None, GraceVariant::DiskExt, &audit(opts, seed))
        }
        _ => {
            let n = rng.gen_range(1..=3usize);
            let kappa = kappa_of(rng, n, 1, 2);
            let theta = rng.gen_range(0.0..std::f64::consts::PI);
            let o1 = rng.gen_range(-1.0..1.0);
            let o2 = -o1 - rng.gen_range(0.1..1.0);
            let c1 = DomainProduct::broadcast(CircularDomain::half_plane_offset(theta, o1), n);
            let c2 = DomainProduct::broadcast(CircularDomain::half_plane_offset(theta + std::f64::consts::PI, o2), n);
            let f = domain_stable(&c1, &kappa, rng.gen_bool(0.5), rng)?;
            let g = domain_stable(&c2, &kappa, rng.gen_bool(0.5), rng)?;
            grace_check(&f, &g, &kappa, &c1, Some(&c2), GraceVariant::HalfPlane, &audit(opts, seed))
        }
    }
}

/// Per-coordinate sequences with known status.
fn coordinate_sequence<R: Rng>(rng: &mut R, k: u32) -> (Vec<f64>, &'static str) {
    let fact = |m: u32| (1..=m).map(f64::from).product::<f64>();
    match rng.gen_range(0..4) {
        0 => ((0..=k).map(f64::from).collect(), "k"),
        1 => (vec![1.0; k as usize + 1], "one"),
        2 => ((0..=k).map(|m| if m % 2 == 0 { 1.0 } else { -1.0 }).collect(), "alternating"),
        _ => ((0..=k).map(|m| 1.0 / fact(m)).collect(), "inverse-factorial"),
    }
}

fn uniform_sign(lam: &DiagonalSequence<f64>, alternate: bool) -> bool {
    let signed: Vec<f64> = lam
        .values
        .iter()
        .map(|(a, v)| if alternate && a.total() % 2 == 1 { -v.re } else { v.re })
        .collect();
    signed.iter().all(|&x| x >= 0.0) || signed.iter().all(|&x| x <= 0.0)
}

fn product_sequence(kappa: &MultiIndex, seqs: &[Vec<f64>]) -> DiagonalSequence<f64> {
    DiagonalSequence::from_fn(kappa.clone(), |a| {
        c((0..kappa.len()).map(|i| seqs[i][a[i] as usize]).product(), 0.0)
    })
}

pub(super) fn multiplier(opts: &SuiteOptions) -> Vec<Case> {
    cases(opts, |index, seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        if index == 0 {
            out.push(fixed_multiplier_case(seed).unwrap_or_else(|e| failed("examples", 0, seed, e)));
        }
        let run = |rng: &mut ChaCha8Rng| -> Result<Vec<Case>> {
            let n = rng.gen_range(1..=3usize);
            let degrees: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
            let f: P = stable_diagonal(&degrees, rng);
            let fact = factor_diagonal_stable(&f)?;
            let diag_ok = fact
                .factorization()
                .is_some_and(|r| r.relation_residual <= 1e-9 && r.roots_real_nonneg);
            let mut cases = vec![Case::new("diagonal-factorization", index, seed, diag_ok, fact.to_json())];

            // products of coordinate multipliers; a multiplier iff the
            // signs are uniform up to (−1)^{|α|}
            let m = rng.gen_range(1..=2usize);
            let kappa = kappa_of(rng, m, 1, 3);
            let picks: Vec<_> = (0..m).map(|i| coordinate_sequence(rng, kappa[i])).collect();
            let seqs: Vec<Vec<f64>> = picks.iter().map(|p| p.0.clone()).collect();
            let lam = product_sequence(&kappa, &seqs);
            let expected = uniform_sign(&lam, false) || uniform_sign(&lam, true);
            let r = is_kappa_multiplier(&lam, &kappa)?;
            let names: Vec<_> = picks.iter().map(|p| p.1).collect();
            cases.push(Case::new(
                "product-sequence",
                index,
                seed,
                r.verdict == expected,
                json!({ "kappa": kappa.as_slice(), "sequences": names, "verdict": r.verdict, "expected": expected }),
            ));

            // a gap in one coordinate
            let mut gapped = seqs.clone();
            let j = rng.gen_range(0..m);
            let k = kappa[j].max(2);
            let mut kk = kappa.clone().into_vec();
            kk[j] = k;
            let kappa_g = MultiIndex::new(kk);
            gapped[j] = (0..=k).map(|t| if t == 0 || t == k { 1.0 } else { 0.0 }).collect();
            for (i, s) in gapped.iter_mut().enumerate() {
                if i != j {
                    *s = vec![1.0; kappa_g[i] as usize + 1];
                }
            }
            let r = is_kappa_multiplier(&product_sequence(&kappa_g, &gapped), &kappa_g)?;
            cases.push(Case::new(
                "gap-sequence",
                index,
                seed,
                !r.verdict,
                json!({ "kappa": kappa_g.as_slice(), "gap_at": j + 1, "verdict": r.verdict }),
            ));
            Ok(cases)
        };
        match run(&mut rng) {
            Ok(cs) => out.extend(cs),
            Err(e) => out.push(failed("diagonal-factorization", index, seed, e)),
        }
        out
    })
}

fn fixed_multiplier_case(seed: u64) -> Result<Case> {
    let lam = DiagonalSequence::univariate(&[0.0, 1.0, 2.0, 3.0])?;
    let r = is_kappa_multiplier(&lam, &MultiIndex::new(vec![3]))?;
    let distance = diagonal_symbol(&lam, true).max_distance(&P::parse("3*z1*(z1+z2)^2", Some(2))?);
    let gap = DiagonalSequence::univariate(&[1.0, 0.0, 1.0])?;
    let rg = is_kappa_multiplier(&gap, &MultiIndex::new(vec![2]))?;
    Ok(Case::new(
        "examples",
        0,
        seed,
        r.verdict && distance <= 1e-12 && !rg.verdict,
        json!({ "derivative_accepted": r.verdict, "symbol_distance": distance, "gap_rejected": !rg.verdict }),
    ))
}
