use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{cases, failed, no_witness, real_rooted, Case, SuiteOptions};
use crate::domains::{invert_i_kappa, CircularDomain, DomainProduct};
use crate::error::Result;
use crate::generators::hermitian_contraction;
use crate::poly::{MultiIndex, Polynomial};
use crate::stability::{univariate_roots, DEFAULT_BUDGET};
use crate::statmech::{
    ising_brute_force, ising_cosh_sinh, ising_reweight, lee_yang_direct, lee_yang_schur, matching_polynomial,
    matching_polynomial_map, wagner as wagner_poly, CouplingMatrix, HermitianContractionMatrix, WeightedGraph,
};
use crate::C;

type P = Polynomial<f64>;

const ROUTE_TOL: f64 = 1e-10;
const CIRCLE_TOL: f64 = 1e-7;
const REAL_TOL: f64 = 1e-7;
const MAX_EDGES: usize = 18;
/// Graph polynomials vanish on the imaginary axis (`1 + λ z_i z_j` factors),
/// so the falsifier searches `Re z > RHP_MARGIN`.
const RHP_MARGIN: f64 = 1e-3;

fn rhp(n: usize) -> DomainProduct<f64> {
    DomainProduct::broadcast(
        CircularDomain::half_plane_offset(std::f64::consts::FRAC_PI_2, RHP_MARGIN),
        n,
    )
}

fn circle_deviation(p: &P) -> Result<f64> {
    let d = p.diagonal();
    if d.degree_in(0) == 0 {
        return Ok(0.0);
    }
    Ok(univariate_roots(&d)?
        .iter()
        .map(|r| (r.norm() - 1.0).abs())
        .fold(0.0, f64::max))
}

fn random_couplings<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<f64>> {
    let mut j = vec![vec![0.0; n]; n];
    let scale = 3.0 / n as f64;
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(0.7) {
                let x = rng.gen_range(0.1..1.0) * scale;
                j[a][b] = x;
                j[b][a] = x;
            }
        }
        if rng.gen_bool(0.3) {
            j[a][a] = rng.gen_range(0.0..0.5);
        }
    }
    j
}

/// Ferromagnetic Ising partition polynomials, `n = 2..12`.
pub(super) fn leeyang(opts: &SuiteOptions) -> Vec<Case> {
    cases(opts, |index, seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 2 + index % 11;
        let run = |rng: &mut ChaCha8Rng| -> Result<Case> {
            let j = CouplingMatrix::new(random_couplings(rng, n))?;
            let brute = ising_brute_force(&j)?;
            let reweight = ising_reweight(&j)?;
            let routes = brute.relative_distance(&reweight);
            let cosh_sinh = if n <= 4 {
                Some(brute.relative_distance(&ising_cosh_sinh(&j)?))
            } else {
                None
            };
            let palindromic = invert_i_kappa(&brute, &MultiIndex::ones(n))? == brute;
            let deviation = circle_deviation(&brute)?;
            let pass = routes <= ROUTE_TOL
                && cosh_sinh.map_or(true, |d| d <= ROUTE_TOL)
                && palindromic
                && deviation <= CIRCLE_TOL;
            Ok(Case::new(
                "ising",
                index,
                seed,
                pass,
                json!({
                    "n": n,
                    "route_distance": routes,
                    "cosh_sinh_distance": cosh_sinh,
                    "palindromic": palindromic,
                    "max_circle_deviation": deviation,
                }),
            ))
        };
        vec![run(&mut rng).unwrap_or_else(|e| failed("ising", index, seed, e))]
    })
}

/// Hermitian contraction matrices, `n = 2..8`.
pub(super) fn circle(opts: &SuiteOptions) -> Vec<Case> {
    cases(opts, |index, seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 2 + index % 7;
        let run = |rng: &mut ChaCha8Rng| -> Result<Case> {
            let a = HermitianContractionMatrix::new(hermitian_contraction(n, rng))?;
            let direct = lee_yang_direct(&a)?;
            let schur = lee_yang_schur(&a)?;
            let routes = direct.relative_distance(&schur);
            let deviation = circle_deviation(&schur)?;
            Ok(Case::new(
                "contraction",
                index,
                seed,
                routes <= ROUTE_TOL && deviation <= CIRCLE_TOL,
                json!({ "n": n, "route_distance": routes, "max_circle_deviation": deviation }),
            ))
        };
        vec![run(&mut rng).unwrap_or_else(|e| failed("contraction", index, seed, e))]
    })
}

fn random_graph<R: Rng>(rng: &mut R, n: usize, max_edges: usize) -> Result<WeightedGraph<f64>> {
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    pairs.shuffle(rng);
    let m = rng.gen_range(1..=pairs.len().min(max_edges));
    let edges = pairs[..m].iter().map(|&(i, j)| (i, j, rng.gen_range(0.2..2.2))).collect();
    WeightedGraph::new(n, edges)
}

fn nonpositive_real(roots: &[C<f64>]) -> bool {
    real_rooted(roots, REAL_TOL) && roots.iter().all(|r| r.re <= REAL_TOL * r.norm().max(1.0))
}

fn roots_of(p: &P) -> Result<Vec<C<f64>>> {
    if p.is_zero() || p.degree_in(0) == 0 {
        Ok(Vec::new())
    } else {
        univariate_roots(p)
    }
}

/// Multivariate matching polynomials, `n = 2..10`.
pub(super) fn heilmann_lieb(opts: &SuiteOptions) -> Vec<Case> {
    cases(opts, |index, seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 2 + index % 9;
        let run = |rng: &mut ChaCha8Rng| -> Result<Case> {
            let g = random_graph(rng, n, MAX_EDGES)?;
            let enumerated = matching_polynomial(&g);
            let routes = enumerated.relative_distance(&matching_polynomial_map(&g));
            let (stable, stab) = no_witness(&enumerated, &rhp(n), opts.budget, seed, false);

            let kappa = MultiIndex::new(g.degrees());
            let u: Vec<Vec<f64>> = kappa
                .as_slice()
                .iter()
                .map(|&k| (0..=k).map(|d| if d <= 1 { 1.0 } else { 0.0 }).collect())
                .collect();
            let w = wagner_poly(&g, &kappa, &u)?;
            let mut sizes = vec![0.0; n / 2 + 1];
            for (a, c) in enumerated.terms() {
                sizes[a.total() as usize / 2] += c.re;
            }
            let grouped = P::univariate_real(&sizes);
            let univariate_match = w.univariate.relative_distance(&grouped);
            let roots = roots_of(&w.univariate)?;
            let real = nonpositive_real(&roots);
            Ok(Case::new(
                "matching",
                index,
                seed,
                routes <= 1e-12 && stable && univariate_match <= 1e-12 && real && w.audit.passes(),
                json!({
                    "n": n,
                    "edges": g.edges().len(),
                    "route_distance": routes,
                    "stability": stab,
                    "univariate_distance": univariate_match,
                    "univariate_roots_real_nonpositive": real,
                    "audit": w.audit.to_json(),
                }),
            ))
        };
        vec![run(&mut rng).unwrap_or_else(|e| failed("matching", index, seed, e))]
    })
}

/// Degree-weighted subgraph polynomials, `n = 2..6`.
pub(super) fn wagner(opts: &SuiteOptions) -> Vec<Case> {
    cases(opts, |index, seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        if index == 0 {
            out.push(rejected_sequence(seed).unwrap_or_else(|e| failed("non-multiplier", 0, seed, e)));
        }
        let run = |rng: &mut ChaCha8Rng| -> Result<Case> {
            let n = 2 + index % 5;
            let g = random_graph(rng, n, 12)?;
            let kappa = MultiIndex::new(g.degrees().iter().map(|&d| d + rng.gen_range(0..=1)).collect());
            let u: Vec<Vec<f64>> = kappa
                .as_slice()
                .iter()
                .map(|&k| {
                    if k == 0 || rng.gen_bool(0.5) {
                        vec![1.0; k as usize + 1]
                    } else {
                        (0..=k)
                            .map(|d| match d {
                                0 => 1.0,
                                1 => 2.0 / k as f64,
                                _ => 0.0,
                            })
                            .collect()
                    }
                })
                .collect();
            let w = wagner_poly(&g, &kappa, &u)?;
            let (stable, stab) = no_witness(&w.poly, &rhp(n), opts.budget, seed, false);
            let roots = roots_of(&w.univariate)?;
            let real = nonpositive_real(&roots);
            Ok(Case::new(
                "subgraph",
                index,
                seed,
                w.audit.passes() && stable && real,
                json!({
                    "n": n,
                    "kappa": kappa.as_slice(),
                    "u": u,
                    "audit": w.audit.to_json(),
                    "stability": stab,
                    "univariate_roots_real_nonpositive": real,
                }),
            ))
        };
        out.push(run(&mut rng).unwrap_or_else(|e| failed("subgraph", index, seed, e)));
        out
    })
}

/// `K₃` with `u = (1, 0, 1)` must fail the audit.
fn rejected_sequence(seed: u64) -> Result<Case> {
    let g = WeightedGraph::<f64>::complete(3);
    let kappa = MultiIndex::new(vec![2; 3]);
    let u = vec![vec![1.0, 0.0, 1.0]; 3];
    let w = wagner_poly(&g, &kappa, &u)?;
    let rejected = w.audit.u_ok.iter().all(|ok| !ok);
    let (_, stab) = no_witness(&w.poly, &rhp(3), DEFAULT_BUDGET, seed, false);
    Ok(Case::new(
        "non-multiplier",
        0,
        seed,
        rejected,
        json!({ "audit": w.audit.to_json(), "stability": stab }),
    ))
}
