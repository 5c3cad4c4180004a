use std::fs;
use std::path::Path;

use spoly::domains::DomainProduct;
use spoly::operators::{tables, LiebSokalVariant, MonomialOperator, OperatorJson};
use spoly::{Error, MultiIndex, Poly, Result, C};

fn read(path: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{path}: {e}")))
}

/// `@path` (or an existing `*.json` file) loads JSON; anything else is the
/// text grammar. `nvars` pads the variable count.
pub fn poly(arg: &str, nvars: Option<usize>) -> Result<Poly> {
    let path = match arg.strip_prefix('@') {
        Some(p) => Some(p),
        None if arg.ends_with(".json") && Path::new(arg).is_file() => Some(arg),
        None => None,
    };
    let p = match path {
        Some(path) => Poly::from_json(&read(path)?)?,
        None => Poly::parse(arg, nvars)?,
    };
    match nvars {
        Some(n) if p.nvars() < n => p.embed(n, &(0..p.nvars()).collect::<Vec<_>>()),
        Some(n) if p.nvars() > n => Err(Error::NvarsMismatch(n, p.nvars())),
        _ => Ok(p),
    }
}

pub fn kappa(s: &str) -> Result<MultiIndex> {
    let v = list::<u32>(s)?;
    if v.is_empty() {
        return Err(Error::InvalidArgument("empty κ".into()));
    }
    Ok(MultiIndex::new(v))
}

pub fn list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::InvalidArgument(format!("bad list entry `{t}`"))))
        .collect()
}

/// A complex constant in the polynomial grammar, e.g. `0.5-2i`.
pub fn complex(s: &str) -> Result<C<f64>> {
    let p = Poly::parse(s, Some(1))?;
    if p.degree_in(0) > 0 {
        return Err(Error::InvalidArgument(format!("`{s}` is not a constant")));
    }
    Ok(p.coeff(&MultiIndex::zeros(1)))
}

/// Semicolon-separated complex coordinates (commas also accepted when no
/// coordinate contains one).
pub fn point(s: &str) -> Result<Vec<C<f64>>> {
    s.split([';', ','])
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(complex)
        .collect()
}

pub fn domains(spec: &str, n: usize) -> Result<DomainProduct<f64>> {
    DomainProduct::parse(spec, n)
}

/// `a:b:n`, `n` evenly spaced points from `a` to `b`; or a plain list.
pub fn grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let bad = || Error::InvalidArgument(format!("bad grid `{s}`"));
        let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        return Ok(match n {
            0 => Vec::new(),
            1 => vec![a],
            _ => (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect(),
        });
    }
    list(s)
}

/// An operator from a JSON file (`@path` or path) or a built-in name:
/// `sym`, `map`, `mod2`, `identity`, `derivative:i`, `asano:i,j`,
/// `transpose:i,j`, `swap:p,i,j`, `lieb-sokal:V,d` (1-based variables).
pub fn operator(spec: &str, kappa: Option<&MultiIndex>) -> Result<MonomialOperator<f64>> {
    let path = spec.strip_prefix('@').unwrap_or(spec);
    if path.ends_with(".json") || spec.starts_with('@') {
        let op = serde_json::from_str::<OperatorJson>(&read(path)?)
            .map_err(|e| Error::Json(e.to_string()))?
            .to_operator()?;
        if let Some(k) = kappa {
            if op.kappa() != k {
                return Err(Error::Shape(format!("operator κ {:?} differs from {:?}", op.kappa().as_slice(), k.as_slice())));
            }
        }
        return Ok(op);
    }
    let kappa = kappa
        .cloned()
        .ok_or_else(|| Error::InvalidArgument("built-in operators need --kappa".into()))?;
    let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
    let idx = |k: usize| -> Result<Vec<usize>> {
        let v = list::<usize>(args)?;
        if v.len() != k || v.iter().any(|&i| i == 0) {
            return Err(Error::InvalidArgument(format!("`{name}` takes {k} 1-based indices")));
        }
        Ok(v.into_iter().map(|i| i - 1).collect())
    };
    match name {
        "identity" => Ok(MonomialOperator::identity(kappa)),
        "sym" => tables::sym(kappa),
        "map" => tables::map(kappa),
        "mod2" => tables::mod2(kappa),
        "derivative" => tables::derivative(kappa, idx(1)?[0]),
        "asano" => {
            let v = idx(2)?;
            tables::asano(kappa, v[0], v[1])
        }
        "transpose" => {
            let v = idx(2)?;
            tables::transposition(kappa, v[0], v[1])
        }
        "swap" => {
            let parts: Vec<&str> = args.split(',').map(str::trim).collect();
            let bad = || Error::InvalidArgument("`swap` takes p,i,j".into());
            if parts.len() != 3 {
                return Err(bad());
            }
            let p: f64 = parts[0].parse().map_err(|_| bad())?;
            let i: usize = parts[1].parse().map_err(|_| bad())?;
            let j: usize = parts[2].parse().map_err(|_| bad())?;
            if i == 0 || j == 0 {
                return Err(bad());
            }
            tables::partial_swap(kappa, p, i - 1, j - 1)
        }
        "lieb-sokal" => {
            let (v, d) = args
                .split_once(',')
                .ok_or_else(|| Error::InvalidArgument("`lieb-sokal` takes V,d".into()))?;
            let d: u32 = d.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad order `{d}`")))?;
            tables::hard_lieb_sokal(kappa, v.trim().parse::<LiebSokalVariant>()?, d)
        }
        _ => Err(Error::InvalidArgument(format!("unknown operator `{spec}`"))),
    }
}

pub fn text(arg: &str) -> Result<String> {
    read(arg.strip_prefix('@').unwrap_or(arg))
}
