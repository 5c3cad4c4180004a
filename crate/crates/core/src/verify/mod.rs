//! Seeded property suites. Each suite generates independent cases from
//! `seed + index`, runs them in parallel and merges the results in index
//! order, so reports do not depend on the thread count.

mod algebra;
mod lattice;
mod ops;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::domains::DomainProduct;
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::stability::{falsify, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Gws,
    Swap,
    Compose,
    Apolar,
    Grace,
    Multiplier,
    LeeYang,
    Circle,
    HeilmannLieb,
    Wagner,
    Averages,
    Symbols,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Gws,
        Suite::Swap,
        Suite::Compose,
        Suite::Apolar,
        Suite::Grace,
        Suite::Multiplier,
        Suite::LeeYang,
        Suite::Circle,
        Suite::HeilmannLieb,
        Suite::Wagner,
        Suite::Averages,
        Suite::Symbols,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Gws => "gws",
            Suite::Swap => "swap",
            Suite::Compose => "compose",
            Suite::Apolar => "apolar",
            Suite::Grace => "grace",
            Suite::Multiplier => "multiplier",
            Suite::LeeYang => "leeyang",
            Suite::Circle => "circle",
            Suite::HeilmannLieb => "heilmann-lieb",
            Suite::Wagner => "wagner",
            Suite::Averages => "averages",
            Suite::Symbols => "symbols",
        }
    }

    pub fn default_trials(self) -> usize {
        match self {
            Suite::Gws => 500,
            Suite::Swap => 100,
            Suite::Compose => 300,
            Suite::Apolar => 200,
            Suite::Grace => 1000,
            Suite::Multiplier => 100,
            Suite::LeeYang => 100,
            Suite::Circle => 200,
            Suite::HeilmannLieb => 100,
            Suite::Wagner => 50,
            Suite::Averages => 100,
            Suite::Symbols => 20,
        }
    }

    /// Falsifier trials per stability check.
    pub fn default_budget(self) -> usize {
        match self {
            Suite::Grace | Suite::Apolar => 256,
            _ => crate::stability::DEFAULT_BUDGET,
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|x| x.name()).collect();
                Error::InvalidArgument(format!("unknown suite `{s}` (expected one of {})", names.join(", ")))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteOptions {
    pub trials: usize,
    pub seed: u64,
    pub budget: usize,
}

impl SuiteOptions {
    pub fn defaults(suite: Suite, seed: u64) -> Self {
        SuiteOptions {
            trials: suite.default_trials(),
            seed,
            budget: suite.default_budget(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Case {
    pub family: String,
    pub index: usize,
    pub seed: u64,
    pub pass: bool,
    pub detail: Value,
}

impl Case {
    pub fn new(family: impl Into<String>, index: usize, seed: u64, pass: bool, detail: Value) -> Self {
        Case {
            family: family.into(),
            index,
            seed,
            pass,
            detail,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "family": self.family,
            "index": self.index,
            "seed": self.seed,
            "pass": self.pass,
            "detail": self.detail,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub options: SuiteOptions,
    pub cases: Vec<Case>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        !self.cases.is_empty() && self.cases.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> + '_ {
        self.cases.iter().filter(|c| !c.pass)
    }

    pub fn passed_count(&self) -> usize {
        self.cases.iter().filter(|c| c.pass).count()
    }

    /// Case counts per family, in first-appearance order.
    pub fn families(&self) -> Vec<(String, usize, usize)> {
        let mut out: Vec<(String, usize, usize)> = Vec::new();
        for c in &self.cases {
            let k = match out.iter().position(|(f, _, _)| *f == c.family) {
                Some(k) => k,
                None => {
                    out.push((c.family.clone(), 0, 0));
                    out.len() - 1
                }
            };
            out[k].1 += 1;
            if c.pass {
                out[k].2 += 1;
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "seed": self.options.seed,
            "trials": self.options.trials,
            "budget": self.options.budget,
            "cases_run": self.cases.len(),
            "passed": self.passed_count(),
            "failed": self.cases.len() - self.passed_count(),
            "pass": self.pass(),
            "families": self.families().into_iter().map(|(f, n, p)| json!({"family": f, "cases": n, "passed": p})).collect::<Vec<_>>(),
            "cases": self.cases.iter().map(Case::to_json).collect::<Vec<_>>(),
        })
    }
}

pub fn run_suite(suite: Suite, options: SuiteOptions) -> Result<SuiteReport> {
    let cases = match suite {
        Suite::Gws => ops::gws(&options),
        Suite::Swap => ops::swap(&options),
        Suite::Compose => ops::compose(&options),
        Suite::Averages => ops::averages(&options),
        Suite::Symbols => ops::symbols(&options),
        Suite::Apolar => algebra::apolar(&options),
        Suite::Grace => algebra::grace(&options),
        Suite::Multiplier => algebra::multiplier(&options),
        Suite::LeeYang => lattice::leeyang(&options),
        Suite::Circle => lattice::circle(&options),
        Suite::HeilmannLieb => lattice::heilmann_lieb(&options),
        Suite::Wagner => lattice::wagner(&options),
    };
    Ok(SuiteReport { suite, options, cases })
}

/// Runs `f(index, seed)` for every index in parallel and concatenates the
/// results in index order.
fn cases<F>(opts: &SuiteOptions, f: F) -> Vec<Case>
where
    F: Fn(usize, u64) -> Vec<Case> + Sync,
{
    (0..opts.trials)
        .into_par_iter()
        .map(|k| f(k, opts.seed.wrapping_add(k as u64)))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn failed(family: &str, index: usize, seed: u64, e: Error) -> Case {
    Case::new(family, index, seed, false, json!({ "error": e.to_string() }))
}

/// No falsifier witness (identically zero outputs are allowed when
/// `zero_ok`).
fn no_witness(p: &Polynomial<f64>, omega: &DomainProduct<f64>, budget: usize, seed: u64, zero_ok: bool) -> (bool, Value) {
    if p.is_zero() {
        return (zero_ok, json!({ "identically_zero": true }));
    }
    match falsify(p, omega, budget, seed) {
        Verdict::Falsified { witness, value } => (
            false,
            json!({
                "witness": witness.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                "value": value,
                "poly": p.to_string(),
            }),
        ),
        Verdict::Unknown { trials, min_abs, .. } => (true, json!({ "trials": trials, "min_abs": min_abs })),
        Verdict::Certified { .. } => (true, json!({ "certified": true })),
    }
}

fn real_rooted(roots: &[crate::C<f64>], tol: f64) -> bool {
    roots.iter().all(|r| r.im.abs() <= tol * r.norm().max(1.0))
}
