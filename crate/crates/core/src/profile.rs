//! A closed catalog of named real profiles and weight exponents, written as
//! `name` or `name(p1, p2, ...)`.
//!
//! Profiles (functions of one real variable):
//! `one`, `const(c)`, `exp(a)` = `e^{a·x}`, `poly1m(p)` = `(1-x)^p`,
//! `plane(p)` = `(1+x)^{-p}`.
//!
//! Exponents `φ(z)`: `zero`, `quad(c)` / `norm2(c)` = `c|z|²`,
//! `rez1(a)` = `a·Re z₁`, `hormander` = `2 log 1/(1-|z|²)`,
//! `saddle(c)` = `c(|z₂|² - |z₁|²)`.

use num_complex::Complex64;

use crate::bergman::{phi_fn, PhiFn};
use crate::error::{Result, SdlError};
use crate::triples::{self, real_fn, GainTriple, RealFn};

pub const PROFILE_NAMES: [&str; 5] = ["one", "const", "exp", "poly1m", "plane"];
pub const PHI_NAMES: [&str; 6] = ["zero", "quad", "norm2", "rez1", "hormander", "saddle"];

/// Splits `name(a, b)` into `("name", [a, b])`.
pub fn parse_call(src: &str) -> Result<(String, Vec<f64>)> {
    let src = src.trim();
    let Some(open) = src.find('(') else {
        if src.is_empty() {
            return Err(SdlError::BadParameter("empty name".into()));
        }
        return Ok((src.to_string(), Vec::new()));
    };
    let close = src
        .strip_suffix(')')
        .ok_or_else(|| SdlError::BadParameter(format!("unbalanced parentheses in {src:?}")))?;
    let name = close[..open].trim().to_string();
    let inner = close[open + 1..].trim();
    let params = if inner.is_empty() {
        Vec::new()
    } else {
        inner
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| SdlError::BadParameter(format!("bad number {p:?} in {src:?}"))))
            .collect::<Result<Vec<_>>>()?
    };
    Ok((name, params))
}

fn arity(name: &str, params: &[f64], n: usize) -> Result<()> {
    if params.len() != n {
        return Err(SdlError::BadParameter(format!("{name} takes {n} parameter(s), got {}", params.len())));
    }
    Ok(())
}

pub fn profile(src: &str) -> Result<RealFn> {
    let (name, p) = parse_call(src)?;
    match name.as_str() {
        "one" => {
            arity(&name, &p, 0)?;
            Ok(real_fn(|_| 1.0))
        }
        "const" => {
            arity(&name, &p, 1)?;
            let c = p[0];
            Ok(real_fn(move |_| c))
        }
        "exp" => {
            arity(&name, &p, 1)?;
            let a = p[0];
            Ok(real_fn(move |x| (a * x).exp()))
        }
        "poly1m" => {
            arity(&name, &p, 1)?;
            let e = p[0];
            Ok(real_fn(move |x| (1.0 - x).powf(e)))
        }
        "plane" => {
            arity(&name, &p, 1)?;
            let e = p[0];
            Ok(real_fn(move |x| (1.0 + x).powf(-e)))
        }
        _ => Err(SdlError::UnknownName(name)),
    }
}

pub fn phi(src: &str) -> Result<PhiFn> {
    let (name, p) = parse_call(src)?;
    let norm2 = |z: &[Complex64]| z.iter().map(|x| x.norm_sqr()).sum::<f64>();
    match name.as_str() {
        "zero" => {
            arity(&name, &p, 0)?;
            Ok(phi_fn(|_| 0.0))
        }
        "quad" | "norm2" => {
            if p.len() > 1 {
                arity(&name, &p, 1)?;
            }
            let c = p.first().copied().unwrap_or(1.0);
            Ok(phi_fn(move |z| c * norm2(z)))
        }
        "rez1" => {
            arity(&name, &p, 1)?;
            let a = p[0];
            Ok(phi_fn(move |z| a * z[0].re))
        }
        "hormander" => {
            arity(&name, &p, 0)?;
            Ok(phi_fn(move |z| -2.0 * (1.0 - norm2(z)).ln()))
        }
        "saddle" => {
            arity(&name, &p, 1)?;
            let c = p[0];
            Ok(phi_fn(move |z| {
                let second = z.get(1).map_or(0.0, |x| x.norm_sqr());
                c * (second - z[0].norm_sqr())
            }))
        }
        _ => Err(SdlError::UnknownName(name)),
    }
}

/// `zero` maps to no exponent at all, which keeps radial weights radial.
pub fn optional_phi(src: Option<&str>) -> Result<Option<PhiFn>> {
    match src {
        None => Ok(None),
        Some(s) if parse_call(s)?.0 == "zero" => Ok(None),
        Some(s) => phi(s).map(Some),
    }
}

/// A catalog triple written as `name(params)`; `extension(profile)` takes a profile name.
pub fn triple(src: &str) -> Result<GainTriple> {
    let src = src.trim();
    if let Some(inner) = src.strip_prefix("extension(").and_then(|s| s.strip_suffix(')')) {
        if inner.parse::<f64>().is_err() && !inner.trim().is_empty() {
            return triples::extension(profile(inner)?, src);
        }
    }
    let (name, params) = parse_call(src)?;
    triples::catalog_lookup(&name, &params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_calls() {
        assert_eq!(parse_call("skoda(0.5)").unwrap(), ("skoda".to_string(), vec![0.5]));
        assert_eq!(parse_call(" log ").unwrap(), ("log".to_string(), vec![]));
        assert_eq!(parse_call("f(1, -2e-1)").unwrap().1, vec![1.0, -0.2]);
        assert!(parse_call("f(1").is_err());
        assert!(parse_call("f(x)").is_err());
    }

    #[test]
    fn profiles_and_exponents() {
        assert_eq!(profile("poly1m(2)").unwrap()(0.5), 0.25);
        assert_eq!(profile("plane(3)").unwrap()(1.0), 0.125);
        assert_eq!(profile("const(2.5)").unwrap()(-7.0), 2.5);
        let z = [Complex64::new(0.3, 0.4), Complex64::new(0.0, 1.0)];
        assert!((phi("saddle(0.3)").unwrap()(&z) - 0.3 * (1.0 - 0.25)).abs() < 1e-15);
        assert!((phi("norm2").unwrap()(&z) - 1.25).abs() < 1e-15);
        assert!(optional_phi(Some("zero")).unwrap().is_none());
        assert_eq!(profile("cosh").err().unwrap().name(), "UnknownName");
        assert_eq!(phi("rez1").err().unwrap().name(), "BadParameter");
    }

    #[test]
    fn triples_by_name() {
        assert_eq!(triple("qexp(2)").unwrap().name, "qexp(2)");
        assert!(triple("extension(one)").unwrap().c(-1.0) > 0.0);
        assert!(triple("extension(2)").is_ok());
        assert_eq!(triple("nope").unwrap_err().name(), "UnknownName");
    }
}
