use std::fs;

use clap::Args;
use serde_json::{json, Value};

use spoly::apolarity::{apolar_pairing, grace_check, AuditOptions, GraceVariant};
use spoly::domains::CircularDomain;
use spoly::multiplier::{hurwitz_multiplier, is_kappa_multiplier};
use spoly::operators::{self as ops, DiagonalSequence, LiebSokalVariant, MasterVariant, OperatorJson};
use spoly::stability::{check, univariate_roots, Mode, Verdict, DEFAULT_BUDGET};
use spoly::statmech::{
    ising_partition, lee_yang_direct, lee_yang_schur, matching_polynomial, wagner, zero_locus_scan, CouplingMatrix,
    HermitianContractionMatrix, IsingRoute, ScanFamily, ScanRow, WeightedGraph,
};
use spoly::symbols::{algebraic_symbol, preservation_test, transcendental_symbol_of, Preservation, SymbolKind};
use spoly::verify::{run_suite, Suite, SuiteOptions};
use spoly::{Error, MultiIndex, Poly, Result, C};

use crate::input;
use crate::{Cli, Command, Global, EXIT_BUDGET};

#[derive(Args, Debug)]
pub struct OpArgs {
    /// sym, swap, transpose, permute, polarize, depolarize, map, mod2, asano,
    /// schur, star, lieb-sokal, weyl, de-bruijn, master, master-4n,
    /// master-binomial, real-part, derivative, apply, averages.
    pub name: String,
    pub f: String,
    pub g: Option<String>,
    #[arg(long)]
    pub kappa: Option<String>,
    /// 1-based variable.
    #[arg(long)]
    pub i: Option<usize>,
    /// 1-based variable.
    #[arg(long)]
    pub j: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    /// 1-based permutation, `σ(1),…,σ(n)`.
    #[arg(long)]
    pub perm: Option<String>,
    /// Scalar or comma list.
    #[arg(long)]
    pub t: Option<String>,
    #[arg(long)]
    pub variant: Option<String>,
    #[arg(long)]
    pub d: Option<u32>,
    /// Derivative orders per variable.
    #[arg(long)]
    pub alpha: Option<String>,
    /// 1-based variables for `mod2` (default: all).
    #[arg(long)]
    pub vars: Option<String>,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
    /// Operator for `apply` (JSON file or built-in name).
    #[arg(long)]
    pub op: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

struct Sink<'a> {
    format: Format,
    path: Option<&'a str>,
}

impl<'a> Sink<'a> {
    fn new(g: &'a Global, default: Format) -> Self {
        match g.out.as_deref() {
            None => Sink { format: default, path: None },
            Some("json") => Sink { format: Format::Json, path: None },
            Some("csv") => Sink { format: Format::Csv, path: None },
            Some(p) => Sink {
                format: if p.ends_with(".csv") { Format::Csv } else { Format::Json },
                path: Some(p),
            },
        }
    }

    fn write(&self, json: &Value, csv: Option<String>) -> Result<()> {
        let text = match (self.format, csv) {
            (Format::Csv, Some(c)) => c,
            (Format::Csv, None) => return Err(Error::InvalidArgument("this command has no CSV output".into())),
            (Format::Json, _) => {
                let mut s = serde_json::to_string_pretty(json).map_err(|e| Error::Json(e.to_string()))?;
                s.push('\n');
                s
            }
        };
        match self.path {
            Some(p) => fs::write(p, text).map_err(|e| Error::InvalidArgument(format!("{p}: {e}"))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn poly_json(p: &Poly) -> Value {
    json!({ "text": p.to_string(), "nvars": p.nvars(), "terms": p.to_json_value()["terms"] })
}

fn poly_csv(p: &Poly) -> String {
    let mut s = String::from("alpha,re,im\n");
    for (a, c) in p.terms() {
        let alpha: Vec<String> = a.as_slice().iter().map(u32::to_string).collect();
        s.push_str(&format!("{},{},{}\n", alpha.join(" "), c.re, c.im));
    }
    s
}

fn pt(z: &[C<f64>]) -> Value {
    Value::Array(z.iter().map(|c| json!([c.re, c.im])).collect())
}

fn budget(g: &Global) -> usize {
    g.budget.unwrap_or(DEFAULT_BUDGET)
}

fn index(v: Option<usize>, what: &str) -> Result<usize> {
    match v {
        Some(k) if k >= 1 => Ok(k - 1),
        _ => Err(Error::InvalidArgument(format!("--{what} (1-based) is required"))),
    }
}

fn required<'a>(v: &'a Option<String>, what: &str) -> Result<&'a str> {
    v.as_deref().ok_or_else(|| Error::InvalidArgument(format!("--{what} is required")))
}

fn diagonal_roots(p: &Poly) -> Result<Vec<C<f64>>> {
    let d = p.diagonal();
    if d.is_zero() || d.degree_in(0) == 0 {
        Ok(Vec::new())
    } else {
        univariate_roots(&d)
    }
}

pub fn run(cli: &Cli) -> Result<u8> {
    let g = &cli.global;
    match &cli.command {
        Command::Parse { poly, nvars } => {
            let p = input::poly(poly, *nvars)?;
            let mut v = poly_json(&p);
            v["degree"] = json!(p.degree_vector().map(|d| d.into_vec()));
            v["total_degree"] = json!(p.total_degree());
            Sink::new(g, Format::Json).write(&v, Some(poly_csv(&p)))?;
            Ok(0)
        }
        Command::Eval { poly, at } => {
            let point = input::point(at)?;
            let p = input::poly(poly, Some(point.len()))?;
            let v = p.evaluate(&point)?;
            let out = json!({ "poly": p.to_string(), "point": pt(&point), "value": [v.re, v.im], "abs": v.norm() });
            Sink::new(g, Format::Json).write(&out, Some(format!("re,im\n{},{}\n", v.re, v.im)))?;
            Ok(0)
        }
        Command::Op(args) => op(g, args),
        Command::Stab { poly, domain, mode, require_verdict } => {
            let p = input::poly(poly, None)?;
            let omega = input::domains(domain, p.nvars())?;
            let mode: Mode = mode.parse()?;
            let v = check(&p, &omega, mode, budget(g), g.seed)?;
            let mut out = v.to_json();
            out["poly"] = json!(p.to_string());
            out["domain"] = json!(omega.to_string());
            out["seed"] = json!(g.seed);
            out["budget"] = json!(budget(g));
            Sink::new(g, Format::Json).write(&out, None)?;
            Ok(match v {
                Verdict::Unknown { .. } if *require_verdict => EXIT_BUDGET,
                _ => v.exit_code() as u8,
            })
        }
        Command::Symbol { op, kappa, kind, preserve } => {
            let kappa = kappa.as_deref().map(input::kappa).transpose()?;
            let t = input::operator(op, kappa.as_ref())?;
            let kappa = t.kappa().clone();
            let kind: SymbolKind = kind.parse()?;
            let symbol = match kind {
                SymbolKind::Transcendental { order, sign } => transcendental_symbol_of(&t, order, sign)?.poly,
                k => algebraic_symbol(&t, &kappa, k)?,
            };
            let mut out = json!({
                "kappa": kappa.as_slice(),
                "kind": format!("{kind:?}"),
                "z_vars": t.out_nvars(),
                "w_vars": kappa.len(),
                "symbol": poly_json(&symbol),
            });
            let mut code = 0;
            if let Some(d) = preserve {
                let domain: CircularDomain<f64> = d.parse()?;
                let r = preservation_test(&t, &kappa, &domain, budget(g), g.seed)?;
                if matches!(r.verdict, Preservation::NotPreserving { .. }) {
                    code = 1;
                }
                out["preservation"] = r.to_json();
            }
            Sink::new(g, Format::Json).write(&out, Some(poly_csv(&symbol)))?;
            Ok(code)
        }
        Command::Apolar { f, g: gp, kappa, audit, domains, g_domains } => {
            let kappa = input::kappa(kappa)?;
            let n = kappa.len();
            let f = input::poly(f, Some(n))?;
            let gq = input::poly(gp, Some(n))?;
            let pairing = apolar_pairing(&f, &gq, &kappa)?;
            let mut out = json!({
                "f": f.to_string(),
                "g": gq.to_string(),
                "kappa": kappa.as_slice(),
                "pairing": [pairing.re, pairing.im],
                "abs": pairing.norm(),
            });
            let mut code = 0;
            if let Some(variant) = audit {
                let variant: GraceVariant = variant.parse()?;
                let dom = input::domains(required(domains, "domains")?, n)?;
                let gdom = g_domains.as_deref().map(|s| input::domains(s, n)).transpose()?;
                let opts = AuditOptions { budget: budget(g), seed: g.seed, assume_stable: false };
                let r = grace_check(&f, &gq, &kappa, &dom, gdom.as_ref(), variant, &opts)?;
                if !r.pass {
                    code = 1;
                }
                out["audit"] = r.to_json();
            }
            Sink::new(g, Format::Json).write(&out, None)?;
            Ok(code)
        }
        Command::Multiplier { kappa, lambda, diagonal, hurwitz } => {
            let seq: DiagonalSequence<f64> = match (lambda, diagonal) {
                (Some(l), None) => DiagonalSequence::univariate(&input::list::<f64>(l)?)?,
                (None, Some(d)) => serde_json::from_str::<OperatorJson>(&input::text(d)?)
                    .map_err(|e| Error::Json(e.to_string()))?
                    .to_diagonal()?,
                _ => return Err(Error::InvalidArgument("give exactly one of --lambda or --diagonal".into())),
            };
            let kappa = match kappa {
                Some(k) => input::kappa(k)?,
                None => seq.kappa.clone(),
            };
            let (verdict, report) = if *hurwitz {
                let r = hurwitz_multiplier(&seq, &kappa)?;
                (r.verdict, r.to_json())
            } else {
                let r = is_kappa_multiplier(&seq, &kappa)?;
                (r.verdict, r.to_json())
            };
            let mut out = json!({ "kappa": kappa.as_slice() });
            out["report"] = report;
            Sink::new(g, Format::Json).write(&out, None)?;
            Ok(if verdict { 0 } else { 1 })
        }
        Command::Ising { coupling, route } => {
            let j = CouplingMatrix::parse_csv(&input::text(coupling)?)?;
            let route = match route.as_str() {
                "brute" | "brute-force" => IsingRoute::BruteForce,
                "reweight" => IsingRoute::Reweight,
                "cosh-sinh" => IsingRoute::CoshSinh,
                r => return Err(Error::InvalidArgument(format!("unknown route `{r}`"))),
            };
            lattice_output(g, &ising_partition(&j, route)?)
        }
        Command::Circle { matrix, route } => {
            let a = HermitianContractionMatrix::parse_csv(&input::text(matrix)?)?;
            let p = match route.as_str() {
                "direct" => lee_yang_direct(&a)?,
                "schur" => lee_yang_schur(&a)?,
                r => return Err(Error::InvalidArgument(format!("unknown route `{r}`"))),
            };
            lattice_output(g, &p)
        }
        Command::Matching { graph } => {
            let gr = WeightedGraph::<f64>::parse(&input::text(graph)?)?;
            let p = matching_polynomial(&gr);
            let out = json!({ "vertices": gr.n(), "edges": gr.edges().len(), "poly": poly_json(&p) });
            Sink::new(g, Format::Json).write(&out, Some(poly_csv(&p)))?;
            Ok(0)
        }
        Command::Wagner { graph, kappa, u } => {
            let gr = WeightedGraph::<f64>::parse(&input::text(graph)?)?;
            let kappa = match kappa {
                Some(k) => input::kappa(k)?,
                None => MultiIndex::new(gr.degrees()),
            };
            let u = sequences(u, &kappa)?;
            let w = wagner(&gr, &kappa, &u)?;
            let roots = if w.univariate.is_zero() || w.univariate.degree_in(0) == 0 {
                Vec::new()
            } else {
                univariate_roots(&w.univariate)?
            };
            let out = json!({
                "kappa": kappa.as_slice(),
                "u": u,
                "poly": poly_json(&w.poly),
                "univariate": poly_json(&w.univariate),
                "univariate_roots": pt(&roots),
                "audit": w.audit.to_json(),
            });
            Sink::new(g, Format::Json).write(&out, Some(poly_csv(&w.poly)))?;
            Ok(0)
        }
        Command::Zeros { poly, family, grid } => {
            let p = input::poly(poly, None)?;
            let family: ScanFamily = family.parse()?;
            let rows = zero_locus_scan(&p, family, &input::grid(grid)?)?;
            let out = Value::Array(
                rows.iter()
                    .map(|r| json!({"param": r.param, "re": r.root.re, "im": r.root.im, "abs": r.root.norm()}))
                    .collect(),
            );
            Sink::new(g, Format::Csv).write(&out, Some(ScanRow::csv(&rows)))?;
            Ok(0)
        }
        Command::Verify { suite, trials } => {
            let suites: Vec<Suite> = if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse()?] };
            let mut reports = Vec::new();
            let mut pass = true;
            for s in suites {
                let mut opts = SuiteOptions::defaults(s, g.seed);
                if let Some(t) = trials {
                    opts.trials = *t;
                }
                if let Some(b) = g.budget {
                    opts.budget = b;
                }
                let r = run_suite(s, opts)?;
                pass &= r.pass();
                reports.push(r.to_json());
            }
            let out = if reports.len() == 1 {
                reports.pop().expect("one report")
            } else {
                json!({ "pass": pass, "suites": reports })
            };
            Sink::new(g, Format::Json).write(&out, None)?;
            Ok(if pass { 0 } else { 1 })
        }
    }
}

fn lattice_output(g: &Global, p: &Poly) -> Result<u8> {
    let roots = diagonal_roots(p)?;
    let deviation = roots.iter().map(|r| (r.norm() - 1.0).abs()).fold(0.0, f64::max);
    let out = json!({
        "poly": poly_json(p),
        "diagonal_roots": pt(&roots),
        "max_circle_deviation": deviation,
    });
    Sink::new(g, Format::Json).write(&out, Some(poly_csv(p)))?;
    Ok(0)
}

fn sequences(spec: &str, kappa: &MultiIndex) -> Result<Vec<Vec<f64>>> {
    let k = kappa.as_slice();
    match spec {
        "ones" => Ok(k.iter().map(|&k| vec![1.0; k as usize + 1]).collect()),
        "matching" => Ok(k
            .iter()
            .map(|&k| (0..=k).map(|d| if d <= 1 { 1.0 } else { 0.0 }).collect())
            .collect()),
        _ => {
            let parts: Vec<Vec<f64>> = spec.split(';').map(input::list::<f64>).collect::<Result<_>>()?;
            match parts.len() {
                1 => Ok(vec![parts[0].clone(); k.len()]),
                m if m == k.len() => Ok(parts),
                m => Err(Error::LengthMismatch { expected: k.len(), got: m }),
            }
        }
    }
}

fn op(g: &Global, a: &OpArgs) -> Result<u8> {
    let kappa = a.kappa.as_deref().map(input::kappa).transpose()?;
    let f = input::poly(&a.f, None)?;
    let second = || -> Result<Poly> {
        let s = a.g.as_deref().ok_or_else(|| Error::InvalidArgument(format!("`{}` needs a second polynomial", a.name)))?;
        input::poly(s, Some(f.nvars()))
    };
    let need_kappa = || kappa.clone().ok_or_else(|| Error::InvalidArgument("--kappa is required".into()));
    let ts = || -> Result<Vec<f64>> { input::list(required(&a.t, "t")?) };
    let master = |form: fn(&Poly, &Poly, &MultiIndex, MasterVariant) -> Result<Poly>| -> Result<Poly> {
        let v: MasterVariant = a.variant.as_deref().unwrap_or("halfplane").parse()?;
        form(&f, &second()?, &need_kappa()?, v)
    };
    let mut extra = None;
    let out = match a.name.as_str() {
        "sym" => ops::sym(&f),
        "swap" => ops::partial_swap(
            &f,
            a.p.ok_or_else(|| Error::InvalidArgument("--p is required".into()))?,
            index(a.i, "i")?,
            index(a.j, "j")?,
        )?,
        "transpose" => f.transpose(index(a.i, "i")?, index(a.j, "j")?)?,
        "permute" => {
            let sigma = input::list::<usize>(required(&a.perm, "perm")?)?;
            if sigma.iter().any(|&s| s == 0) {
                return Err(Error::InvalidArgument("--perm is 1-based".into()));
            }
            let sigma: Vec<usize> = sigma.into_iter().map(|s| s - 1).collect();
            ops::t_sigma(&f, &sigma)?
        }
        "polarize" => ops::polarization(&f, &need_kappa()?)?,
        "depolarize" => ops::depolarize(&f, &need_kappa()?)?,
        "map" => ops::map_multiaffine_part(&f),
        "mod2" => match &a.vars {
            None => ops::mod2_fold_all(&f),
            Some(v) => {
                let vars = input::list::<usize>(v)?;
                if vars.iter().any(|&s| s == 0) {
                    return Err(Error::InvalidArgument("--vars is 1-based".into()));
                }
                ops::mod2_fold(&f, &vars.into_iter().map(|s| s - 1).collect::<Vec<_>>())?
            }
        },
        "asano" => ops::asano_contract(&f, index(a.i, "i")?, index(a.j, "j")?)?,
        "schur" => ops::schur_hadamard(&f, &second()?, &need_kappa()?)?,
        "star" => ops::convolution_star(&f, &second()?)?,
        "lieb-sokal" => {
            let v: LiebSokalVariant = required(&a.variant, "variant")?.parse()?;
            ops::hard_lieb_sokal(&f, v, a.d.ok_or_else(|| Error::InvalidArgument("--d is required".into()))?)?
        }
        "weyl" => ops::weyl_product_blocks(&f, &second()?, &ts()?)?,
        "de-bruijn" => {
            let t = ts()?;
            if t.len() != 1 {
                return Err(Error::InvalidArgument("de-bruijn takes a scalar --t".into()));
            }
            ops::de_bruijn_product(&f, &second()?, t[0])?
        }
        "master" => master(ops::master_compose)?,
        "master-4n" => master(ops::master_compose_4n)?,
        "master-binomial" => master(ops::master_compose_binomial)?,
        "real-part" => ops::real_part_operator(&f),
        "derivative" => {
            let alpha = MultiIndex::new(input::list(required(&a.alpha, "alpha")?)?);
            f.derivative(&alpha)?
        }
        "apply" => {
            let kappa = match kappa.clone() {
                Some(k) => k,
                None => f.degree_vector().unwrap_or_else(|| MultiIndex::zeros(f.nvars())),
            };
            input::operator(required(&a.op, "op")?, Some(&kappa))?.apply(&f)?
        }
        "averages" => {
            let (p, trace) = ops::iterate_transposition_averages(&f, a.steps, g.seed);
            extra = Some(json!({ "steps": a.steps, "symmetry_trace_last": trace.last(), "symmetry_trace_len": trace.len(), "distance_to_sym": p.max_distance(&ops::sym(&f)) }));
            p
        }
        other => return Err(Error::InvalidArgument(format!("unknown operator `{other}`"))),
    };
    let mut v = json!({ "op": a.name, "input": f.to_string(), "result": poly_json(&out) });
    if let Some(e) = extra {
        v["details"] = e;
    }
    Sink::new(g, Format::Json).write(&v, Some(poly_csv(&out)))?;
    Ok(0)
}
