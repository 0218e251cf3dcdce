//! Grid and list syntax, and the JSON problem format.

use num_complex::Complex64;
use serde::Deserialize;

use sdl_core::bergman::CMatrix;
use sdl_core::division::DivisionProblem;
use sdl_core::{profile, triples, Domain, MultiPoly, Result, SdlError};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        triples::linear_grid(self.start, self.end, self.count)
    }
}

pub fn parse_grid(s: &str) -> std::result::Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(format!("expected start:end:count, got {s:?}"));
    };
    let num = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("bad number {x:?}"));
    let count = n.trim().parse::<usize>().map_err(|_| format!("bad count {n:?}"))?;
    if count == 0 {
        return Err("grid count must be positive".into());
    }
    Ok(Grid { start: num(a)?, end: num(b)?, count })
}

/// A comma-separated list of reals; empty input is the empty list.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct List(pub Vec<f64>);

pub fn parse_list(s: &str) -> std::result::Result<List, String> {
    if s.trim().is_empty() {
        return Ok(List::default());
    }
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| format!("bad number {x:?} in {s:?}")))
        .collect::<std::result::Result<_, _>>()
        .map(List)
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub exponents: Vec<u32>,
    #[serde(default)]
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Deserialize, Debug)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    fn value(&self) -> Complex64 {
        match *self {
            Entry::Real(x) => Complex64::new(x, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub kind: String,
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Option<Vec<Vec<Entry>>>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
pub struct WeightSpec {
    pub profile: Option<String>,
    pub phi: Option<String>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct TripleSpec {
    pub name: String,
    #[serde(default)]
    pub params: Vec<f64>,
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub domain: DomainSpec,
    pub g: Vec<Vec<Term>>,
    pub f: Vec<Term>,
    #[serde(default)]
    pub weight: WeightSpec,
    pub triple: TripleSpec,
    pub degree: usize,
}

pub fn poly(n: usize, terms: &[Term]) -> Result<MultiPoly> {
    MultiPoly::from_terms(n, terms.iter().map(|t| (t.exponents.clone(), Complex64::new(t.re, t.im))))
}

pub fn domain(spec: &DomainSpec) -> Result<Domain> {
    match (spec.kind.as_str(), &spec.a) {
        ("ball", _) => Ok(Domain::ball(spec.n)),
        ("plane", _) => Ok(Domain::plane(spec.n)),
        ("ellipsoid", Some(rows)) => {
            if rows.len() != spec.n || rows.iter().any(|r| r.len() != spec.n) {
                return Err(SdlError::DimensionMismatch { left: spec.n, right: rows.len() });
            }
            Domain::ellipsoid(CMatrix::from_fn(spec.n, spec.n, |i, j| rows[i][j].value()))
        }
        ("ellipsoid", None) => Err(SdlError::BadParameter("an ellipsoid needs the matrix A".into())),
        (other, _) => Err(SdlError::UnknownName(other.to_string())),
    }
}

impl ProblemConfig {
    pub fn from_json(text: &str) -> Result<ProblemConfig> {
        serde_json::from_str(text).map_err(|e| SdlError::BadParameter(format!("config: {e}")))
    }

    pub fn problem(&self, degree: Option<usize>) -> Result<DivisionProblem> {
        let n = self.domain.n;
        let g = self.g.iter().map(|p| poly(n, p)).collect::<Result<Vec<_>>>()?;
        let f = poly(n, &self.f)?;
        let triple = triples::catalog_lookup(&self.triple.name, &self.triple.params)?;
        let mut p = DivisionProblem::new(domain(&self.domain)?, g, f, triple, degree.unwrap_or(self.degree))?;
        if let Some(phi) = profile::optional_phi(self.weight.phi.as_deref())? {
            p = p.with_phi(phi);
        }
        if let Some(rho) = self.weight.profile.as_deref().filter(|s| profile::parse_call(s).map(|c| c.0 != "one").unwrap_or(true)) {
            p = p.with_profile(profile::profile(rho)?);
        }
        Ok(p)
    }
}

pub fn diagonal(d: &[f64]) -> CMatrix {
    CMatrix::from_fn(d.len(), d.len(), |i, j| if i == j { Complex64::new(d[i], 0.0) } else { Complex64::new(0.0, 0.0) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_and_lists() {
        assert_eq!(parse_grid("-20:-1e-6:1000").unwrap(), Grid { start: -20.0, end: -1e-6, count: 1000 });
        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("1:2:0").is_err());
        assert_eq!(parse_list("1e2, 1e4").unwrap().0, vec![100.0, 10000.0]);
        assert!(parse_list("").unwrap().0.is_empty());
        assert!(parse_list("1,x").is_err());
    }

    #[test]
    fn config_round_trip() {
        let text = r#"{
            "domain": {"kind": "ellipsoid", "n": 2, "A": [[1, 0], [0, [4, 0]]]},
            "g": [[{"exponents": [1, 0], "re": 1}], [{"exponents": [0, 1], "re": 2}]],
            "f": [{"exponents": [1, 0], "re": 1}, {"exponents": [0, 1], "re": 2}],
            "weight": {"profile": "one", "phi": "zero"},
            "triple": {"name": "qexp", "params": [1]},
            "degree": 6
        }"#;
        let cfg = ProblemConfig::from_json(text).unwrap();
        let s = cfg.problem(None).unwrap().estimate_sides().unwrap();
        assert!((s.ratio - 1.0).abs() < 1e-8);
        assert!(ProblemConfig::from_json(r#"{"domain": {"kind": "ball", "n": 1}, "extra": 1}"#).is_err());
    }
}
