//! Sparse multivariate polynomials with complex coefficients.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Result, SdlError};

pub type MultiIndex = Vec<u32>;

#[derive(Clone, PartialEq, Default)]
pub struct MultiPoly {
    n: usize,
    coeffs: BTreeMap<MultiIndex, Complex64>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (a, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)", c.re, c.im)?;
            for (i, &e) in a.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "·z{}", i + 1)?,
                    _ => write!(f, "·z{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

pub fn degree_of(a: &[u32]) -> usize {
    a.iter().map(|&e| e as usize).sum()
}

/// All multi-indices in `n` variables of total degree `≤ max_degree`,
/// ordered by degree and, within a degree, with higher powers of earlier
/// variables first.
pub fn multi_indices(n: usize, max_degree: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for d in 0..=max_degree {
        let mut cur = vec![0u32; n];
        fill(&mut out, &mut cur, 0, d);
    }
    out
}

fn fill(out: &mut Vec<MultiIndex>, cur: &mut MultiIndex, pos: usize, left: usize) {
    if pos + 1 == cur.len() {
        cur[pos] = left as u32;
        out.push(cur.clone());
        return;
    }
    if cur.is_empty() {
        if left == 0 {
            out.push(vec![]);
        }
        return;
    }
    for e in (0..=left).rev() {
        cur[pos] = e as u32;
        fill(out, cur, pos + 1, left - e);
    }
    cur[pos] = 0;
}

pub fn factorial(k: u32) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * j as f64)
}

/// `α! = Π αᵢ!`.
pub fn index_factorial(a: &[u32]) -> f64 {
    a.iter().map(|&e| factorial(e)).product()
}

/// `|α|!/α!`.
pub fn multinomial(a: &[u32]) -> f64 {
    factorial(degree_of(a) as u32) / index_factorial(a)
}

impl MultiPoly {
    pub fn zero(n: usize) -> Self {
        MultiPoly { n, coeffs: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Complex64) -> Self {
        Self::monomial(n, vec![0; n], c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Complex64::new(1.0, 0.0))
    }

    pub fn monomial(n: usize, alpha: MultiIndex, c: Complex64) -> Self {
        assert_eq!(alpha.len(), n, "multi-index length must equal the dimension");
        let mut p = Self::zero(n);
        if c != Complex64::new(0.0, 0.0) {
            p.coeffs.insert(alpha, c);
        }
        p
    }

    /// The coordinate function `zᵢ` (0-based `i`).
    pub fn var(n: usize, i: usize) -> Self {
        let mut a = vec![0; n];
        a[i] = 1;
        Self::monomial(n, a, Complex64::new(1.0, 0.0))
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (MultiIndex, Complex64)>) -> Result<Self> {
        let mut p = Self::zero(n);
        for (a, c) in terms {
            if a.len() != n {
                return Err(SdlError::DimensionMismatch { left: n, right: a.len() });
            }
            p.add_term(a, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, a: MultiIndex, c: Complex64) {
        let e = self.coeffs.entry(a.clone()).or_insert(Complex64::new(0.0, 0.0));
        *e += c;
        if *e == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&a);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, a: &[u32]) -> Complex64 {
        self.coeffs.get(a).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().map(|a| degree_of(a)).max()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(SdlError::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let mut p = self.clone();
        for (a, c) in &other.coeffs {
            p.add_term(a.clone(), *c);
        }
        Ok(p)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        if s == Complex64::new(0.0, 0.0) {
            return Self::zero(self.n);
        }
        MultiPoly { n: self.n, coeffs: self.coeffs.iter().map(|(a, c)| (a.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let mut p = Self::zero(self.n);
        for (a, c) in &self.coeffs {
            for (b, d) in &other.coeffs {
                let e: MultiIndex = a.iter().zip(b).map(|(x, y)| x + y).collect();
                *p.coeffs.entry(e).or_insert(Complex64::new(0.0, 0.0)) += c * d;
            }
        }
        p.coeffs.retain(|_, v| *v != Complex64::new(0.0, 0.0));
        Ok(p)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..k {
            acc = acc.mul(self).expect("same dimension");
        }
        acc
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(a, c)| {
                a.iter()
                    .zip(z)
                    .fold(*c, |acc, (&e, zi)| if e == 0 { acc } else { acc * zi.powu(e) })
            })
            .sum()
    }

    /// Drops coefficients with modulus `≤ tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        MultiPoly {
            n: self.n,
            coeffs: self.coeffs.iter().filter(|(_, c)| c.norm() > tol).map(|(a, c)| (a.clone(), *c)).collect(),
        }
    }

    /// Composition with the linear map `z = w·M`, i.e. `zᵢ = Σⱼ wⱼ M[j, i]`.
    pub fn substitute_linear(&self, m: &DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != self.n || m.ncols() != self.n {
            return Err(SdlError::DimensionMismatch { left: self.n, right: m.nrows() });
        }
        let n = self.n;
        let forms: Vec<MultiPoly> = (0..n)
            .map(|i| {
                let mut p = Self::zero(n);
                for j in 0..n {
                    let mut a = vec![0; n];
                    a[j] = 1;
                    p.add_term(a, m[(j, i)]);
                }
                p
            })
            .collect();
        let mut out = Self::zero(n);
        for (a, c) in &self.coeffs {
            let mut term = Self::constant(n, *c);
            for (i, &e) in a.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&forms[i].pow(e))?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }
}
