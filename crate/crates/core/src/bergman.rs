//! Domains, weights and monomial Gram matrices of weighted Bergman spaces.
//!
//! Ellipsoids `E(A) = {z A z* < 1}` are handled in ball coordinates `w = zL`
//! where `A = LL*`. Gram entries use the convention
//! `G[a, b] = ∫ conj(eₐ)·e_b·W dλ`, so the energy of a coefficient vector is
//! `cᴴ G c`.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use crate::poly::{degree_of, index_factorial, multi_indices, multinomial, MultiIndex, MultiPoly};
use crate::error::{Result, SdlError};
use crate::poly::factorial;
use crate::quad::{self, BallGrid};
use crate::triples::RealFn;

pub type CMatrix = DMatrix<Complex64>;
pub type PhiFn = Arc<dyn Fn(&[Complex64]) -> f64 + Send + Sync>;

pub const DEFAULT_GRAM_RESOLUTION: usize = 32;
const RADIAL_TOL: f64 = 1e-12;

pub fn phi_fn(f: impl Fn(&[Complex64]) -> f64 + Send + Sync + 'static) -> PhiFn {
    Arc::new(f)
}

#[derive(Clone, Debug, PartialEq)]
pub enum DomainKind {
    Ball,
    Ellipsoid(CMatrix),
    Plane,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    pub n: usize,
    pub kind: DomainKind,
}

/// Where integrals live once ellipsoids are mapped to the ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Ball,
    Plane,
}

impl Domain {
    pub fn ball(n: usize) -> Self {
        Domain { n, kind: DomainKind::Ball }
    }

    pub fn plane(n: usize) -> Self {
        Domain { n, kind: DomainKind::Plane }
    }

    pub fn ellipsoid(a: CMatrix) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(SdlError::DimensionMismatch { left: a.nrows(), right: a.ncols() });
        }
        let scale = a.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let skew = (&a - a.adjoint()).iter().map(|x| x.norm()).fold(0.0, f64::max);
        if !(scale > 0.0) || skew > 1e-12 * scale {
            return Err(SdlError::NotPositiveDefinite);
        }
        let h = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
        if !(min_eigenvalue(&h) > 0.0) {
            return Err(SdlError::NotPositiveDefinite);
        }
        Ok(Domain { n: a.nrows(), kind: DomainKind::Ellipsoid(a) })
    }

    pub fn diagonal_ellipsoid(diag: &[f64]) -> Result<Self> {
        let v: Vec<Complex64> = diag.iter().map(|&d| Complex64::new(d, 0.0)).collect();
        Self::ellipsoid(CMatrix::from_diagonal(&nalgebra::DVector::from_vec(v)))
    }

    pub fn region(&self) -> Region {
        match self.kind {
            DomainKind::Plane => Region::Plane,
            _ => Region::Ball,
        }
    }

    pub fn contains(&self, z: &[Complex64]) -> bool {
        match &self.kind {
            DomainKind::Ball => z.iter().map(|x| x.norm_sqr()).sum::<f64>() < 1.0,
            DomainKind::Plane => true,
            DomainKind::Ellipsoid(a) => {
                let mut q = Complex64::new(0.0, 0.0);
                for i in 0..self.n {
                    for j in 0..self.n {
                        q += z[i] * a[(i, j)] * z[j].conj();
                    }
                }
                q.re < 1.0
            }
        }
    }
}

/// `(L, |det L|^{-2})` with `A = LL*`, lower-triangular `L`, so that `E(A)` is
/// the unit ball in `w = zL`.
pub fn to_ball_coordinates(dom: &Domain) -> Result<(CMatrix, f64)> {
    match &dom.kind {
        DomainKind::Ball => Ok((CMatrix::identity(dom.n, dom.n), 1.0)),
        DomainKind::Plane => Err(SdlError::BadParameter("the plane has no ball coordinates".into())),
        DomainKind::Ellipsoid(a) => {
            let l = a.clone().cholesky().ok_or(SdlError::NotPositiveDefinite)?.l();
            let det = l.determinant().norm();
            Ok((l, 1.0 / (det * det)))
        }
    }
}

/// Weight factor `h(|g|²)` built from a tuple of polynomials.
#[derive(Clone)]
pub struct GFactor {
    pub g: Vec<MultiPoly>,
    pub h: RealFn,
}

/// `W = ρ(|w|²)·h(|g|²)·e^{-φ}`; absent parts are `≡ 1`.
///
/// `ρ` is always a function of the ball coordinate `|w|²`; `φ` and `g` are
/// expressed in the domain's own coordinates.
#[derive(Clone, Default)]
pub struct Weight {
    pub radial_profile: Option<RealFn>,
    pub phi: Option<PhiFn>,
    pub g_factor: Option<GFactor>,
}

impl Weight {
    pub fn unit() -> Self {
        Weight::default()
    }

    pub fn radial(rho: RealFn) -> Self {
        Weight { radial_profile: Some(rho), ..Default::default() }
    }

    pub fn with_phi(mut self, phi: PhiFn) -> Self {
        self.phi = Some(phi);
        self
    }

    pub fn with_g_factor(mut self, g: Vec<MultiPoly>, h: RealFn) -> Self {
        self.g_factor = Some(GFactor { g, h });
        self
    }

    /// `|g|^{2p}`.
    pub fn with_g_power(self, g: Vec<MultiPoly>, p: f64) -> Self {
        self.with_g_factor(g, Arc::new(move |x: f64| x.powf(p)))
    }

    /// The same weight with `φ` and `g` rewritten in coordinates `w` where
    /// the old coordinates are `z = w·M`.
    pub fn transported(&self, m: &CMatrix) -> Result<Weight> {
        let phi = self.phi.as_ref().map(|phi| {
            let (phi, m) = (phi.clone(), m.clone());
            let n = m.nrows();
            phi_fn(move |w: &[Complex64]| {
                let z: Vec<Complex64> = (0..n).map(|i| (0..n).map(|j| w[j] * m[(j, i)]).sum()).collect();
                phi(&z)
            })
        });
        let g_factor = match &self.g_factor {
            None => None,
            Some(gf) => Some(GFactor {
                g: gf.g.iter().map(|p| p.substitute_linear(m)).collect::<Result<_>>()?,
                h: gf.h.clone(),
            }),
        };
        Ok(Weight { radial_profile: self.radial_profile.clone(), phi, g_factor })
    }

    pub fn eval(&self, w: &[Complex64]) -> f64 {
        let s: f64 = w.iter().map(|x| x.norm_sqr()).sum();
        let mut v = self.radial_profile.as_ref().map_or(1.0, |rho| rho(s));
        if let Some(gf) = &self.g_factor {
            let mut g2 = norm2(&gf.g, w);
            if g2 < 1e-300 {
                let mut shifted = w.to_vec();
                shifted[0].re = f64::from_bits(shifted[0].re.to_bits() + 1);
                g2 = norm2(&gf.g, &shifted).max(f64::MIN_POSITIVE);
            }
            v *= (gf.h)(g2);
        }
        if let Some(phi) = &self.phi {
            v *= (-phi(w)).exp();
        }
        v
    }

    /// The weight as a function of `s = |w|²`, when it is radial.
    pub fn radial_form(&self) -> Option<RealFn> {
        if self.phi.is_some() {
            return None;
        }
        let rho = self.radial_profile.clone();
        match &self.g_factor {
            None => Some(Arc::new(move |s| rho.as_ref().map_or(1.0, |r| r(s)))),
            Some(gf) => {
                let coeffs = norm2_radial_coeffs(&gf.g)?;
                let h = gf.h.clone();
                Some(Arc::new(move |s| {
                    let p = coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c);
                    rho.as_ref().map_or(1.0, |r| r(s)) * h(p)
                }))
            }
        }
    }
}

pub fn norm2(g: &[MultiPoly], z: &[Complex64]) -> f64 {
    g.iter().map(|p| p.eval(z).norm_sqr()).sum()
}

/// Coefficients `c_k` with `|g(w)|² = Σ c_k |w|^{2k}`, if `|g|²` is radial.
pub fn norm2_radial_coeffs(g: &[MultiPoly]) -> Option<Vec<f64>> {
    let n = g.first()?.n();
    let deg = g.iter().filter_map(|p| p.degree()).max()?;
    let idx = multi_indices(n, deg);
    let mut b = DMatrix::<Complex64>::zeros(idx.len(), idx.len());
    for p in g {
        for (i, a) in idx.iter().enumerate() {
            let ca = p.coeff(a);
            if ca == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, bb) in idx.iter().enumerate() {
                b[(i, j)] += ca * p.coeff(bb).conj();
            }
        }
    }
    let scale = b.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    let tol = 1e-13 * scale;
    let mut coeffs = vec![f64::NAN; deg + 1];
    for (i, a) in idx.iter().enumerate() {
        for j in 0..idx.len() {
            if i != j && b[(i, j)].norm() > tol {
                return None;
            }
        }
        let k = degree_of(a);
        let c = b[(i, i)].re / multinomial(a);
        if coeffs[k].is_nan() {
            coeffs[k] = c;
        } else if (coeffs[k] - c).abs() > tol {
            return None;
        }
    }
    Some(coeffs)
}

/// `π^n α!/(|α|+n-1)!`, the sphere-average constant with
/// `∫ ρ(|w|²)|w^α|² dλ = c(n, α)·∫ ρ(s) s^{|α|+n-1} ds`.
pub fn sphere_constant(n: usize, alpha: &[u32]) -> f64 {
    PI.powi(n as i32) * index_factorial(alpha) / factorial((degree_of(alpha) + n - 1) as u32)
}

/// `∫ ρ(s) s^k ds` over `(0, 1)` or `(0, ∞)`.
pub fn radial_moment(region: Region, rho: &RealFn, k: usize) -> Result<f64> {
    let f = |s: f64| {
        let p = s.powi(k as i32);
        if p == 0.0 { 0.0 } else { p * rho(s) }
    };
    let res = match region {
        Region::Ball => quad::integrate_unit_log(f, RADIAL_TOL),
        Region::Plane => quad::integrate_half_line(f, RADIAL_TOL),
    };
    res.map_err(|e| match e {
        SdlError::NonConvergent { .. } | SdlError::NonFinite { .. } => SdlError::NonIntegrableWeight { degree: k },
        other => other,
    })
}

/// `‖w^α‖²` under a radial weight.
pub fn radial_norm(n: usize, region: Region, rho: &RealFn, alpha: &[u32]) -> Result<f64> {
    let k = degree_of(alpha) + n - 1;
    let m = radial_moment(region, rho, k).map_err(|e| match e {
        SdlError::NonIntegrableWeight { .. } => SdlError::NonIntegrableWeight { degree: degree_of(alpha) },
        other => other,
    })?;
    Ok(sphere_constant(n, alpha) * m)
}

#[derive(Clone, Debug)]
pub struct Gram {
    pub indices: Vec<MultiIndex>,
    pub matrix: CMatrix,
    pub diagonal: bool,
}

/// Gram matrix of the monomials `w^α`, `α ∈ indices`, in ball (or plane) coordinates.
pub fn gram_in_ball_coordinates(
    n: usize,
    region: Region,
    weight: &Weight,
    indices: &[MultiIndex],
    resolution: usize,
) -> Result<Gram> {
    if let Some(rho) = weight.radial_form() {
        let mut m = CMatrix::zeros(indices.len(), indices.len());
        for (i, a) in indices.iter().enumerate() {
            m[(i, i)] = Complex64::new(radial_norm(n, region, &rho, a)?, 0.0);
        }
        return Ok(Gram { indices: indices.to_vec(), matrix: m, diagonal: true });
    }
    if n > 2 {
        return Err(SdlError::UnsupportedDimension(n));
    }
    if region == Region::Plane {
        return Err(SdlError::BadParameter("non-radial weights need a bounded domain".into()));
    }
    let matrix = angular_gram(n, weight, indices, resolution)?;
    Ok(Gram { indices: indices.to_vec(), matrix, diagonal: false })
}

/// Non-radial Gram assembly: at every `(r, χ)` node the weight's angular
/// Fourier coefficients are taken once, then each entry is a sum over nodes.
fn angular_gram(n: usize, weight: &Weight, indices: &[MultiIndex], resolution: usize) -> Result<CMatrix> {
    let grid = BallGrid::new(n, resolution)?;
    let kmax = indices.iter().map(|a| degree_of(a)).max().unwrap_or(0) as i64;
    let nk = (2 * kmax + 1) as usize;
    let ang = &grid.angular;
    let na = ang.len();
    // powers[k][j] = e^{ikθⱼ}
    let powers: Vec<Vec<Complex64>> = (-kmax..=kmax)
        .map(|k| ang.iter().map(|(e, _)| if k >= 0 { e.powu(k as u32) } else { e.conj().powu((-k) as u32) }).collect())
        .collect();
    let m = indices.len();
    let mut g = CMatrix::zeros(m, m);
    let maxp = 2 * kmax as usize;
    let mut w = [Complex64::new(0.0, 0.0); 2];
    let n2 = if n == 2 { na } else { 1 };
    let mut vals = vec![0.0; na * n2];
    let mut partial = vec![Complex64::new(0.0, 0.0); na * nk];
    let mut four = vec![Complex64::new(0.0, 0.0); nk * nk];
    for &(r, wr) in &grid.radial {
        let rp: Vec<f64> = (0..=maxp).map(|p| r.powi(p as i32)).collect();
        for &(c, s, wc) in &grid.polar {
            let cp: Vec<f64> = (0..=maxp).map(|p| c.powi(p as i32)).collect();
            let sp: Vec<f64> = (0..=maxp).map(|p| s.powi(p as i32)).collect();
            for (j1, (e1, _)) in ang.iter().enumerate() {
                w[0] = e1 * (r * c);
                for j2 in 0..n2 {
                    if n == 2 {
                        w[1] = ang[j2].0 * (r * s);
                    }
                    let v = weight.eval(&w[..n]);
                    if !v.is_finite() {
                        return Err(SdlError::NonFinite { at: r });
                    }
                    vals[j1 * n2 + j2] = v;
                }
            }
            let h = ang[0].1;
            if n == 1 {
                for k in 0..nk {
                    four[k] = (0..na).map(|j| powers[k][j] * vals[j]).sum::<Complex64>() * h;
                }
            } else {
                for j1 in 0..na {
                    for k2 in 0..nk {
                        partial[j1 * nk + k2] =
                            (0..na).map(|j2| powers[k2][j2] * vals[j1 * na + j2]).sum::<Complex64>() * h;
                    }
                }
                for k1 in 0..nk {
                    for k2 in 0..nk {
                        four[k1 * nk + k2] =
                            (0..na).map(|j1| powers[k1][j1] * partial[j1 * nk + k2]).sum::<Complex64>() * h;
                    }
                }
            }
            let wt = wr * wc;
            for (ia, a) in indices.iter().enumerate() {
                for (ib, b) in indices.iter().enumerate().skip(ia) {
                    let deg = degree_of(a) + degree_of(b);
                    // conj(w^a) w^b carries e^{i(b-a)·θ}
                    let k1 = (b[0] as i64 - a[0] as i64 + kmax) as usize;
                    let (amp, f) = if n == 1 {
                        (rp[deg], four[k1])
                    } else {
                        let k2 = (b[1] as i64 - a[1] as i64 + kmax) as usize;
                        (
                            rp[deg] * cp[(a[0] + b[0]) as usize] * sp[(a[1] + b[1]) as usize],
                            four[k1 * nk + k2],
                        )
                    };
                    g[(ia, ib)] += f * (wt * amp);
                }
            }
        }
    }
    for ia in 0..m {
        g[(ia, ia)].im = 0.0;
        for ib in ia + 1..m {
            g[(ib, ia)] = g[(ia, ib)].conj();
        }
    }
    Ok(g)
}

/// Matrix `T` with `z^α = Σ_γ T[γ, α] w^γ` when `z = w·M`; rows and columns
/// both range over `indices`.
pub fn monomial_transform(indices: &[MultiIndex], m: &CMatrix) -> Result<CMatrix> {
    let n = m.nrows();
    let mut t = CMatrix::zeros(indices.len(), indices.len());
    let pos: std::collections::HashMap<&MultiIndex, usize> = indices.iter().enumerate().map(|(i, a)| (a, i)).collect();
    for (j, a) in indices.iter().enumerate() {
        let p = MultiPoly::monomial(n, a.clone(), Complex64::new(1.0, 0.0)).substitute_linear(m)?;
        for (g, c) in p.terms() {
            let i = *pos.get(g).ok_or(SdlError::BadParameter("index set not closed under degree".into()))?;
            t[(i, j)] = *c;
        }
    }
    Ok(t)
}

/// Gram matrix of the monomials `z^α`, `|α| ≤ N`, over the domain.
pub fn monomial_gram(dom: &Domain, w: &Weight, max_degree: usize) -> Result<Gram> {
    monomial_gram_with(dom, w, max_degree, DEFAULT_GRAM_RESOLUTION)
}

pub fn monomial_gram_with(dom: &Domain, w: &Weight, max_degree: usize, resolution: usize) -> Result<Gram> {
    let indices = multi_indices(dom.n, max_degree);
    match &dom.kind {
        DomainKind::Ball | DomainKind::Plane => gram_in_ball_coordinates(dom.n, dom.region(), w, &indices, resolution),
        DomainKind::Ellipsoid(_) => {
            let (l, jac) = to_ball_coordinates(dom)?;
            let linv = l.clone().try_inverse().ok_or(SdlError::NotPositiveDefinite)?;
            let ww = w.transported(&linv)?;
            let gw = gram_in_ball_coordinates(dom.n, Region::Ball, &ww, &indices, resolution)?;
            let t = monomial_transform(&indices, &linv)?;
            let matrix = (t.adjoint() * &gw.matrix * &t) * Complex64::new(jac, 0.0);
            let lower_diag = (0..dom.n).all(|i| (0..dom.n).all(|j| i == j || l[(i, j)].norm() == 0.0));
            Ok(Gram { indices, matrix, diagonal: gw.diagonal && lower_diag })
        }
    }
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    m.clone().symmetric_eigen().eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate_ball, BallIntegrandN, BallMode};
    use crate::triples::real_fn;

    fn cx(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn ball_coordinates_examples() {
        let (l, jac) = to_ball_coordinates(&Domain::diagonal_ellipsoid(&[1.0, 4.0]).unwrap()).unwrap();
        assert!((l[(0, 0)] - cx(1.0)).norm() < 1e-15 && (l[(1, 1)] - cx(2.0)).norm() < 1e-15);
        assert!((jac - 0.25).abs() < 1e-15);
        let (l, jac) = to_ball_coordinates(&Domain::diagonal_ellipsoid(&[1.0, 1.0]).unwrap()).unwrap();
        assert_eq!(l, CMatrix::identity(2, 2));
        assert_eq!(jac, 1.0);
        let a = DMatrix::from_row_slice(2, 2, &[cx(2.0), Complex64::new(0.3, 0.4), Complex64::new(0.3, -0.4), cx(1.5)]);
        let (l, _) = to_ball_coordinates(&Domain::ellipsoid(a.clone()).unwrap()).unwrap();
        assert!((&l * l.adjoint() - a).norm() < 1e-12);
    }

    #[test]
    fn non_pd_matrix_rejected() {
        assert_eq!(Domain::diagonal_ellipsoid(&[1.0, -1.0]).unwrap_err().name(), "NotPositiveDefinite");
        let a = DMatrix::from_row_slice(2, 2, &[cx(1.0), cx(0.5), cx(0.0), cx(1.0)]);
        assert_eq!(Domain::ellipsoid(a).unwrap_err().name(), "NotPositiveDefinite");
    }

    #[test]
    fn disk_gram_examples() {
        let g = monomial_gram(&Domain::ball(1), &Weight::unit(), 1).unwrap();
        assert!((g.matrix[(0, 0)].re - PI).abs() < 1e-12);
        assert!((g.matrix[(1, 1)].re - PI / 2.0).abs() < 1e-12);
        assert_eq!(g.matrix[(0, 1)], cx(0.0));
        let w = Weight::radial(real_fn(|s| (1.0 - s) * (1.0 - s)));
        let g = monomial_gram(&Domain::ball(1), &w, 0).unwrap();
        assert!((g.matrix[(0, 0)].re - PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn sphere_constant_matches_direct_quadrature() {
        let rho = real_fn(|s| (-s).exp() + s);
        for n in 1..=2 {
            for a in multi_indices(n, 3) {
                let closed = radial_norm(n, Region::Ball, &rho, &a).unwrap();
                let a2 = a.clone();
                let direct = integrate_ball(
                    &BallIntegrandN::new(
                        n,
                        |z| {
                            let s: f64 = z.iter().map(|x| x.norm_sqr()).sum();
                            let m: f64 = z.iter().zip(&a2).map(|(x, &e)| x.norm_sqr().powi(e as i32)).product();
                            ((-s).exp() + s) * m
                        },
                        BallMode::TensorPolar,
                    ),
                    24,
                )
                .unwrap();
                assert!((closed - direct.value).abs() < 1e-11, "n={n} α={a:?}: {closed} vs {}", direct.value);
            }
        }
    }

    #[test]
    fn radial_and_grid_paths_agree() {
        let rho = real_fn(|s| 1.0 + 0.5 * s * s);
        let radial = Weight::radial(rho.clone());
        let forced = Weight::radial(rho).with_phi(phi_fn(|_| 0.0));
        for n in 1..=2 {
            let idx = multi_indices(n, 4);
            let a = gram_in_ball_coordinates(n, Region::Ball, &radial, &idx, 32).unwrap();
            let b = gram_in_ball_coordinates(n, Region::Ball, &forced, &idx, 32).unwrap();
            assert!(a.diagonal && !b.diagonal);
            assert!((&a.matrix - &b.matrix).norm() < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn radial_detection() {
        let z1 = MultiPoly::var(2, 0);
        let z2 = MultiPoly::var(2, 1);
        let c = norm2_radial_coeffs(&[MultiPoly::one(2), z1.clone(), z2.clone()]).unwrap();
        assert_eq!(c, vec![1.0, 1.0]);
        assert!(norm2_radial_coeffs(&[z1.clone(), z2.scale(cx(2.0))]).is_none());
        assert!(norm2_radial_coeffs(&[z1.add(&z2).unwrap()]).is_none());
        let sq = vec![z1.mul(&z1).unwrap(), z1.mul(&z2).unwrap().scale(cx(2f64.sqrt())), z2.mul(&z2).unwrap()];
        assert_eq!(norm2_radial_coeffs(&sq).unwrap(), vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn non_radial_gram_is_hermitian_pd() {
        let w = Weight::unit().with_phi(phi_fn(|z| 0.7 * z[0].re + 0.3 * (z[1] * z[0].conj()).im));
        let g = monomial_gram_with(&Domain::ball(2), &w, 4, 24).unwrap();
        assert!((&g.matrix - g.matrix.adjoint()).norm() < 1e-14);
        assert!(min_eigenvalue(&g.matrix) > 0.0);
    }

    #[test]
    fn non_radial_entry_matches_integrate_ball() {
        let phi = phi_fn(|z| 0.7 * z[0].re - 0.4 * z[1].im);
        let w = Weight::unit().with_phi(phi.clone());
        let idx = multi_indices(2, 2);
        let g = gram_in_ball_coordinates(2, Region::Ball, &w, &idx, 24).unwrap();
        // G[(1,0),(0,1)] = ∫ conj(z₁) z₂ e^{-φ}
        let re = integrate_ball(
            &BallIntegrandN::new(2, |z| (z[0].conj() * z[1]).re * (-phi(z)).exp(), BallMode::TensorPolar),
            24,
        )
        .unwrap()
        .value;
        let im = integrate_ball(
            &BallIntegrandN::new(2, |z| (z[0].conj() * z[1]).im * (-phi(z)).exp(), BallMode::TensorPolar),
            24,
        )
        .unwrap()
        .value;
        assert!((g.matrix[(1, 2)] - Complex64::new(re, im)).norm() < 1e-12);
    }

    #[test]
    fn ellipsoid_gram_is_transported_ball_gram() {
        let dom = Domain::diagonal_ellipsoid(&[1.0, 4.0]).unwrap();
        let g = monomial_gram(&dom, &Weight::unit(), 2).unwrap();
        assert!(g.diagonal);
        // ∫_{E} |z₂|² = jac·∫_B |w₂/2|² = (1/4)(1/4)(π²/6)
        let i = g.indices.iter().position(|a| a == &vec![0, 1]).unwrap();
        assert!((g.matrix[(i, i)].re - PI * PI / 96.0).abs() < 1e-12);
    }

    #[test]
    fn plane_weight_admissibility() {
        let rho = real_fn(|s: f64| (1.0 + s).powi(-3));
        assert!((radial_norm(2, Region::Plane, &rho, &[0, 0]).unwrap() - PI * PI / 2.0).abs() < 1e-9);
        let err = radial_norm(2, Region::Plane, &rho, &[1, 0]).unwrap_err();
        assert_eq!(err.name(), "NonIntegrableWeight");
    }
}
