use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{MultiIndex, Polynomial};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Wire form `{"nvars": n, "terms": [{"alpha": [..], "re": x, "im": y}, ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PolyJson {
    pub nvars: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub alpha: Vec<u32>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl<T: Real> From<&Polynomial<T>> for PolyJson {
    fn from(f: &Polynomial<T>) -> Self {
        PolyJson {
            nvars: f.nvars(),
            terms: f
                .terms()
                .map(|(a, c)| TermJson {
                    alpha: a.as_slice().to_vec(),
                    re: c.re.f64(),
                    im: c.im.f64(),
                })
                .collect(),
        }
    }
}

impl PolyJson {
    pub fn to_poly<T: Real>(&self) -> Result<Polynomial<T>> {
        Polynomial::from_terms(
            self.nvars,
            self.terms.iter().map(|t| {
                (
                    MultiIndex::new(t.alpha.clone()),
                    Complex::new(T::lit(t.re), T::lit(t.im)),
                )
            }),
        )
    }
}

impl<T: Real> Polynomial<T> {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(PolyJson::from(self)).expect("plain data serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PolyJson::from(self)).expect("plain data serializes")
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Self> {
        let pj: PolyJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Json(e.to_string()))?;
        pj.to_poly()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let pj: PolyJson = serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
        pj.to_poly()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_and_order() {
        let f: Polynomial<f64> = "z2^2 + (1-0.25i)*z1 + 3".parse().unwrap();
        let s = f.to_json();
        assert_eq!(
            s,
            r#"{"nvars":2,"terms":[{"alpha":[0,0],"re":3.0,"im":0.0},{"alpha":[1,0],"re":1.0,"im":-0.25},{"alpha":[0,2],"re":1.0,"im":0.0}]}"#
        );
        assert_eq!(Polynomial::<f64>::from_json(&s).unwrap(), f);
    }

    #[test]
    fn json_rejects_bad_alpha() {
        let s = r#"{"nvars":2,"terms":[{"alpha":[1],"re":1.0}]}"#;
        assert!(Polynomial::<f64>::from_json(s).is_err());
    }
}
