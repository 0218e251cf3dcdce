//! The limit lemma behind the sharp extension constant, extension from the
//! origin of the disk by division, the two-sided functional for disk-type
//! domains, and the ellipsoid mean-value test.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;

use crate::bergman::{to_ball_coordinates, CMatrix, Domain, MultiPoly, PhiFn, Weight};
use crate::division::{weighted_norm2, DivisionProblem};
use crate::error::{Result, SdlError};
use crate::poly::factorial;
use crate::quad::{self, BallGrid, Integrand1D};
use crate::report::VerificationReport;
use crate::triples::{self, real_fn, RealFn};

const QUAD_TOL: f64 = 1e-12;
const VANISHING_TOL: f64 = 1e-8;
const THETA_MARGIN: f64 = 1e-6;
const DEFAULT_RESOLUTION: usize = 48;

#[derive(Clone, Debug, PartialEq)]
pub struct CalcLimitCase {
    pub k: usize,
    pub b: f64,
    pub t_values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CalcLimit {
    pub values: Vec<(f64, f64)>,
    pub target: f64,
    /// Whether `|value - target|` never increases along the grid.
    pub monotone: bool,
}

/// `π^k e^{-B}/k!`.
pub fn calc_limit_target(k: usize, b: f64) -> f64 {
    PI.powi(k as i32) * (-b).exp() / factorial(k as u32)
}

/// `(1/(1+t))·2k·(π^k/k!)·∫₀¹ r^{2k-1}/(1/(1+t) + t/(1+t)·e^B r^{2k})² dr` for each `t`.
pub fn calc_limit(case: &CalcLimitCase) -> Result<CalcLimit> {
    if case.k == 0 {
        return Err(SdlError::BadParameter("codimension must be at least 1".into()));
    }
    if case.t_values.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(SdlError::BadParameter("t values must be finite and non-negative".into()));
    }
    let k = case.k as i32;
    let unit = PI.powi(k) / factorial(case.k as u32);
    let mut values = Vec::with_capacity(case.t_values.len());
    for &t in &case.t_values {
        let a = 1.0 / (1.0 + t);
        let b = t / (1.0 + t) * case.b.exp();
        let f = |r: f64| {
            let x = r.powi(2 * k);
            r.powi(2 * k - 1) / (a + b * x).powi(2)
        };
        // the integrand peaks near r = t^{-1/2k}; give the splitter that point
        let peak = (a / b.max(f64::MIN_POSITIVE)).powf(1.0 / (2.0 * k as f64)).min(1.0);
        let mut integral = 0.0;
        for (lo, hi) in [(0.0, peak), (peak, 1.0)] {
            if hi > lo {
                integral += quad::integrate_1d(&Integrand1D::new(f, lo, hi), QUAD_TOL, quad::DEFAULT_MAX_DEPTH)?;
            }
        }
        values.push((t, a * 2.0 * k as f64 * unit * integral));
    }
    let target = calc_limit_target(case.k, case.b);
    let errs: Vec<f64> = values.iter().map(|(_, v)| (v - target).abs()).collect();
    let monotone = errs.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9) + 1e-14);
    Ok(CalcLimit { values, target, monotone })
}

#[derive(Clone)]
pub struct ExtensionCase {
    pub c_profile: RealFn,
    pub c_label: String,
    pub f0: Complex64,
    pub t: f64,
}

#[derive(Clone, Debug)]
pub struct ExtensionOutcome {
    pub extension: MultiPoly,
    pub energy: f64,
    pub bound: f64,
    /// The division rhs divided by `1 + t`, which dominates `energy`.
    pub scaled_rhs: f64,
    pub g_at_zero: f64,
}

/// `∫_{-∞}^0 c(u) eᵘ du`.
pub fn profile_mass(c: &RealFn) -> Result<f64> {
    let c = c.clone();
    let g = Integrand1D::new(move |u: f64| c(u) * u.exp(), f64::NEG_INFINITY, 0.0);
    quad::integrate_1d(&g, QUAD_TOL, quad::DEFAULT_MAX_DEPTH)
}

/// Extends `f0` from the origin to the disk by solving
/// `√(t/(1+t))·z·F₁ + F₂/√(1+t) = f0` with the triple built from `c`, and
/// taking `F = F₂/√(1+t)`, `G = f0 - F`.
pub fn extend_via_division(case: &ExtensionCase, degree: usize) -> Result<ExtensionOutcome> {
    if degree < 2 {
        return Err(SdlError::BadParameter(format!("truncation degree must be at least 2, got {degree}")));
    }
    let t = case.t;
    if !(t.is_finite() && t > 0.0) {
        return Err(SdlError::BadParameter(format!("t must be positive, got {t}")));
    }
    let mass = profile_mass(&case.c_profile)?;
    let bound = PI * mass * case.f0.norm_sqr();
    let n = 1;
    let (sin, cos) = ((t / (1.0 + t)).sqrt(), (1.0 / (1.0 + t)).sqrt());
    let g = vec![MultiPoly::var(n, 0).scale(Complex64::new(sin, 0.0)), MultiPoly::constant(n, Complex64::new(cos, 0.0))];
    let f = MultiPoly::constant(n, case.f0);
    let triple = triples::extension(case.c_profile.clone(), &case.c_label)?;
    let problem = DivisionProblem::new(Domain::ball(n), g.clone(), f.clone(), triple, degree)?;
    let solution = problem.minimal_solution()?;
    let rhs = problem.rhs()?;
    let extension = solution.components[1].scale(Complex64::new(cos, 0.0));
    let vanishing = f.sub(&extension)?;
    let g_at_zero = vanishing.eval(&[Complex64::new(0.0, 0.0)]).norm();
    if g_at_zero > VANISHING_TOL * (1.0 + case.f0.norm()) {
        return Err(SdlError::ConstraintViolated(format!("G(0) = {g_at_zero:e} does not vanish")));
    }
    // Ψ_t = log((1 + t|z|²)/(1+t))
    let c = case.c_profile.clone();
    let rho = real_fn(move |s| c(((1.0 + t * s) / (1.0 + t)).ln()));
    let energy = weighted_norm2(&Domain::ball(n), &extension, &Weight::radial(rho), 0)?;
    Ok(ExtensionOutcome { extension, energy, bound, scaled_rhs: rhs / (1.0 + t), g_at_zero })
}

/// `(1/cos²θ)∫|G|²e^{-φ} + (1/sin²θ)∫|F|²|w|^{-2n}e^{-φ}` and
/// `∫ e^{-φ}/(sin²θ + |w|^{2n}cos²θ)²` over `E(A)`, with `w = zL` its ball coordinates.
pub fn theorem_d_functional(
    phi: Option<PhiFn>,
    a: &CMatrix,
    theta: f64,
    f: &MultiPoly,
    g: &MultiPoly,
) -> Result<(f64, f64)> {
    if theta <= THETA_MARGIN || theta >= PI / 2.0 - THETA_MARGIN {
        return Err(SdlError::NumericalDomain(format!("θ = {theta} is too close to 0 or π/2")));
    }
    let dom = Domain::ellipsoid(a.clone())?;
    let n = dom.n;
    if n > 2 {
        return Err(SdlError::UnsupportedDimension(n));
    }
    let residual = f.add(g)?.sub(&MultiPoly::one(n))?.max_abs_coeff();
    if residual > 1e-12 {
        return Err(SdlError::ConstraintViolated(format!("F + G differs from 1 by {residual:e}")));
    }
    let (l, _) = to_ball_coordinates(&dom)?;
    let w: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(n, i).substitute_linear(&l)).collect::<Result<_>>()?;
    let base = Weight { phi, ..Default::default() };
    let (s2, c2) = (theta.sin().powi(2), theta.cos().powi(2));
    let res = DEFAULT_RESOLUTION;
    let g_part = weighted_norm2(&dom, g, &base, res)?;
    let f_part = weighted_norm2(&dom, f, &base.clone().with_g_power(w.clone(), -(n as f64)), res)?;
    let nn = n as i32;
    let rhs_weight = base.with_g_factor(w, real_fn(move |x| (s2 + x.powi(nn) * c2).powi(-2)));
    let rhs = weighted_norm2(&dom, &MultiPoly::one(n), &rhs_weight, res)?;
    Ok((g_part / c2 + f_part / s2, rhs))
}

/// Differences `avg_{x+εE(A)} φ - φ(x)` for each `ε`; passes iff all are `≥ -tol`.
pub fn mean_value_test(
    phi: &PhiFn,
    x: &[Complex64],
    a: &CMatrix,
    eps_grid: &[f64],
    tol: f64,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let dom = Domain::ellipsoid(a.clone())?;
    let n = dom.n;
    if x.len() != n {
        return Err(SdlError::DimensionMismatch { left: n, right: x.len() });
    }
    let (l, _) = to_ball_coordinates(&dom)?;
    let linv = l.try_inverse().ok_or(SdlError::NotPositiveDefinite)?;
    let grid = BallGrid::new(n, DEFAULT_RESOLUTION)?;
    let center = phi(x);
    let mut diffs = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let mut acc = quad::NeumaierSum::default();
        let mut vol = quad::NeumaierSum::default();
        let mut bad = false;
        grid.for_each(|w, wt| {
            let z: Vec<Complex64> =
                (0..n).map(|i| x[i] + eps * (0..n).map(|j| w[j] * linv[(j, i)]).sum::<Complex64>()).collect();
            let v = phi(&z);
            bad |= !v.is_finite();
            acc.add(wt * v);
            vol.add(wt);
        });
        if bad || !center.is_finite() {
            return Err(SdlError::DomainViolation { point: eps, lo: 0.0, hi: f64::INFINITY });
        }
        diffs.push(acc.value() / vol.value() - center);
    }
    let mut rep = VerificationReport::new("mean-value", tol).param("eps", eps_grid.to_vec()).param("differences", diffs.clone());
    let worst = diffs.iter().cloned().fold(f64::INFINITY, f64::min);
    rep.set_param("min_difference", worst);
    rep.require(worst >= -tol, format!("mean-value inequality fails: min difference {worst:e}"));
    Ok(rep.timed(start))
}
