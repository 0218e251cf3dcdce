//! Deterministic numerical integration.
//!
//! One-dimensional integrals use adaptive composite Gauss–Legendre with
//! 15-point panels. A panel's error indicator is the difference between the
//! 15-point rule on the whole panel and on its two halves; the worst panel is
//! bisected until the summed indicator drops below `rel_tol · |estimate|`
//! (floored at 1e-14).
//!
//! Infinite endpoints are mapped onto finite intervals:
//!
//! * `(-∞, b]` goes through the logarithmic map `t = b + log s` followed by the
//!   graded split `s = v⁴`, so weights behaving like `e^{ct}` at `-∞` become
//!   `v^{4c-1}`: smooth for the exponents that occur in gain triples and
//!   still visibly divergent (the bisection never settles) when `c < 0`;
//! * `[a, ∞)` uses `s = a + u/(1-u)`.
//!
//! Ball integrals over the unit ball of ℂ¹ or ℂ² use either a tensor rule
//! in hyperspherical coordinates or seeded Monte-Carlo sampling.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Result, SdlError};

pub const DEFAULT_REL_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_DEPTH: usize = 40;
pub const DEFAULT_MC_SAMPLES: usize = 200_000;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_BALL_RESOLUTION: usize = 40;

/// Estimates below this magnitude are judged against an absolute floor.
pub const ABS_FLOOR: f64 = 1e-14;

const PANEL_POINTS: usize = 15;
const LOG_GRADE: f64 = 4.0;
const MAX_PANELS: usize = 200_000;

/// Seed for Monte-Carlo estimates; `SDL_SEED` overrides the built-in default.
pub fn default_seed() -> u64 {
    std::env::var("SDL_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

/// Error-free-transformation (Neumaier) accumulator.
#[derive(Debug, Default, Clone, Copy)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss–Legendre nodes (ascending) and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, z);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, z);
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn panel_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(PANEL_POINTS))
}

/// A real integrand on an interval whose endpoints may be infinite.
pub struct Integrand1D<'a> {
    f: Box<dyn Fn(f64) -> f64 + 'a>,
    a: f64,
    b: f64,
}

impl<'a> Integrand1D<'a> {
    pub fn new(f: impl Fn(f64) -> f64 + 'a, a: f64, b: f64) -> Self {
        Integrand1D { f: Box::new(f), a, b }
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }
}

/// Value and summed error indicator of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    whole: f64,
    value: f64,
    error: f64,
    depth: usize,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        // Ties broken by position so the refinement order is fully deterministic.
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

struct Mapped<'f> {
    h: &'f dyn Fn(f64) -> f64,
    to_x: &'f dyn Fn(f64) -> f64,
}

impl Mapped<'_> {
    fn gl(&self, a: f64, b: f64) -> Result<f64> {
        let (nodes, weights) = panel_rule();
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = NeumaierSum::default();
        for (x, w) in nodes.iter().zip(weights) {
            let u = mid + half * x;
            let v = (self.h)(u);
            if !v.is_finite() {
                return Err(SdlError::NonFinite { at: (self.to_x)(u) });
            }
            acc.add(w * v);
        }
        Ok(acc.value() * half)
    }

    fn panel(&self, a: f64, b: f64, whole: f64, depth: usize) -> Result<Panel> {
        let m = 0.5 * (a + b);
        let value = self.gl(a, m)? + self.gl(m, b)?;
        Ok(Panel {
            a,
            b,
            whole,
            value,
            error: (whole - value).abs(),
            depth,
        })
    }

    fn adaptive(&self, a: f64, b: f64, rel_tol: f64, max_depth: usize) -> Result<QuadEstimate> {
        let whole = self.gl(a, b)?;
        let first = self.panel(a, b, whole, 0)?;
        let mut total_value = first.value;
        let mut total_error = first.error;
        let mut heap = BinaryHeap::new();
        heap.push(first);
        loop {
            if total_error <= (rel_tol * total_value.abs()).max(ABS_FLOOR) {
                break;
            }
            let worst = heap.pop().expect("heap never empties");
            if worst.depth >= max_depth || heap.len() + 2 > MAX_PANELS {
                return Err(SdlError::NonConvergent {
                    estimate: total_value,
                    error: total_error,
                    max_depth,
                });
            }
            let m = 0.5 * (worst.a + worst.b);
            let left_whole = self.gl(worst.a, m)?;
            let right_whole = worst.value - left_whole;
            let left = self.panel(worst.a, m, left_whole, worst.depth + 1)?;
            let right = self.panel(m, worst.b, right_whole, worst.depth + 1)?;
            total_value += left.value + right.value - worst.value;
            total_error += left.error + right.error - worst.error;
            heap.push(left);
            heap.push(right);
            if heap.len() % 64 == 0 {
                total_error = heap.iter().map(|p| p.error).sum();
            }
        }
        let mut panels = heap.into_vec();
        panels.sort_by(|p, q| p.a.total_cmp(&q.a));
        let value = panels.iter().map(|p| p.value).collect::<NeumaierSum>().value();
        let error = panels.iter().map(|p| p.error).sum();
        // whole is kept on the panel only for the split bookkeeping
        debug_assert!(panels.iter().all(|p| p.whole.is_finite()));
        Ok(QuadEstimate {
            value,
            error,
            panels: panels.len(),
        })
    }
}

/// Full adaptive estimate, including the error indicator.
pub fn integrate_1d_detailed(g: &Integrand1D, rel_tol: f64, max_depth: usize) -> Result<QuadEstimate> {
    if !(rel_tol > 0.0) {
        return Err(SdlError::BadParameter(format!("rel_tol must be positive, got {rel_tol}")));
    }
    let (a, b) = (g.a, g.b);
    if a.is_nan() || b.is_nan() {
        return Err(SdlError::BadParameter("NaN interval endpoint".into()));
    }
    if a == b {
        return Ok(QuadEstimate { value: 0.0, error: 0.0, panels: 0 });
    }
    if a > b {
        let flipped = Integrand1D { f: Box::new(|x| (g.f)(x)), a: b, b: a };
        let est = integrate_1d_detailed(&flipped, rel_tol, max_depth)?;
        return Ok(QuadEstimate { value: -est.value, ..est });
    }
    let f = &g.f;
    match (a.is_finite(), b.is_finite()) {
        (true, true) => {
            let id = |x: f64| x;
            Mapped { h: &|x| f(x), to_x: &id }.adaptive(a, b, rel_tol, max_depth)
        }
        (false, true) => {
            // t = b + LOG_GRADE·ln v, v ∈ (0, 1]
            let to_x = move |v: f64| b + LOG_GRADE * v.ln();
            let h = move |v: f64| {
                let fx = f(to_x(v));
                if fx == 0.0 { 0.0 } else { fx * LOG_GRADE / v }
            };
            Mapped { h: &h, to_x: &to_x }.adaptive(0.0, 1.0, rel_tol, max_depth)
        }
        (true, false) => {
            let to_x = move |u: f64| a + u / (1.0 - u);
            let h = move |u: f64| {
                let fx = f(to_x(u));
                if fx == 0.0 { 0.0 } else { fx / ((1.0 - u) * (1.0 - u)) }
            };
            Mapped { h: &h, to_x: &to_x }.adaptive(0.0, 1.0, rel_tol, max_depth)
        }
        (false, false) => {
            let lower = Integrand1D { f: Box::new(&f), a: f64::NEG_INFINITY, b: 0.0 };
            let upper = Integrand1D { f: Box::new(&f), a: 0.0, b: f64::INFINITY };
            let lo = integrate_1d_detailed(&lower, rel_tol, max_depth)?;
            let hi = integrate_1d_detailed(&upper, rel_tol, max_depth)?;
            Ok(QuadEstimate {
                value: lo.value + hi.value,
                error: lo.error + hi.error,
                panels: lo.panels + hi.panels,
            })
        }
    }
}

pub fn integrate_1d(g: &Integrand1D, rel_tol: f64, max_depth: usize) -> Result<f64> {
    integrate_1d_detailed(g, rel_tol, max_depth).map(|e| e.value)
}

/// `∫_a^b f` with the default tolerance and depth.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> Result<f64> {
    integrate_1d(&Integrand1D::new(f, a, b), DEFAULT_REL_TOL, DEFAULT_MAX_DEPTH)
}

/// `∫_0^1 h(s) ds`, evaluated as `∫_{-∞}^0 h(eᵗ) eᵗ dt` so that integrable
/// power singularities at `s = 0` are graded away.
pub fn integrate_unit_log(h: impl Fn(f64) -> f64, rel_tol: f64) -> Result<f64> {
    let g = Integrand1D::new(
        |t: f64| {
            let s = t.exp();
            if s == 0.0 { 0.0 } else { h(s) * s }
        },
        f64::NEG_INFINITY,
        0.0,
    );
    integrate_1d(&g, rel_tol, DEFAULT_MAX_DEPTH)
}

/// `∫_0^∞ h(s) ds`: the unit piece through [`integrate_unit_log`], the tail
/// through the rational map.
pub fn integrate_half_line(h: impl Fn(f64) -> f64, rel_tol: f64) -> Result<f64> {
    let head = integrate_unit_log(&h, rel_tol)?;
    let tail = integrate_1d(&Integrand1D::new(&h, 1.0, f64::INFINITY), rel_tol, DEFAULT_MAX_DEPTH)?;
    Ok(head + tail)
}

/// `∫_0^1 r^k F(log r²) dr`, the radial moment shape shared by every
/// equality identity: equal to `½∫_{-∞}^0 e^{(k+1)t/2} F(t) dt`.
pub fn radial_log_moment(k: f64, f: impl Fn(f64) -> f64, rel_tol: f64) -> Result<f64> {
    let g = Integrand1D::new(
        |t: f64| {
            let e = (0.5 * (k + 1.0) * t).exp();
            if e == 0.0 { 0.0 } else { 0.5 * e * f(t) }
        },
        f64::NEG_INFINITY,
        0.0,
    );
    integrate_1d(&g, rel_tol, DEFAULT_MAX_DEPTH)
}

/// Volume `πⁿ/n!` of the unit ball in ℂⁿ.
pub fn ball_volume(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * PI / k as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallMode {
    TensorPolar,
    MonteCarlo { samples: usize, seed: u64 },
}

impl BallMode {
    pub fn monte_carlo_default() -> Self {
        BallMode::MonteCarlo { samples: DEFAULT_MC_SAMPLES, seed: default_seed() }
    }
}

pub type BallFn<'a> = Box<dyn Fn(&[Complex64]) -> f64 + 'a>;

/// A real function on the open unit ball of ℂⁿ, `n ∈ {1, 2}`.
pub struct BallIntegrandN<'a> {
    pub n: usize,
    pub f: BallFn<'a>,
    pub mode: BallMode,
}

impl<'a> BallIntegrandN<'a> {
    pub fn new(n: usize, f: impl Fn(&[Complex64]) -> f64 + 'a, mode: BallMode) -> Self {
        BallIntegrandN { n, f: Box::new(f), mode }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallEstimate {
    pub value: f64,
    /// Monte-Carlo standard error; `None` for the deterministic rule.
    pub std_error: Option<f64>,
}

/// Tensor rule on the unit ball of ℂⁿ in hyperspherical coordinates.
///
/// `n = 1`: `z = r e^{iθ}`; `n = 2`: `z = (r cos χ e^{iθ₁}, r sin χ e^{iθ₂})`
/// with `dλ = r³ cos χ sin χ dr dχ dθ₁ dθ₂`. The radius is graded as `r = v²`
/// so integrable `r^{-a}` behaviour at the origin is smoothed; angles use the
/// equispaced (spectrally exact) periodic rule.
#[derive(Debug, Clone)]
pub struct BallGrid {
    pub n: usize,
    /// `(r, w)` with the full radial Jacobian folded into `w`.
    pub radial: Vec<(f64, f64)>,
    /// `(cos χ, sin χ, w)` including `cos χ sin χ`; a single `(1, 0, 1)` entry when `n = 1`.
    pub polar: Vec<(f64, f64, f64)>,
    /// `(e^{iθ}, w)`.
    pub angular: Vec<(Complex64, f64)>,
}

impl BallGrid {
    pub fn new(n: usize, resolution: usize) -> Result<Self> {
        if !(1..=2).contains(&n) {
            return Err(SdlError::UnsupportedDimension(n));
        }
        if resolution < 8 {
            return Err(SdlError::BadParameter(format!("resolution must be ≥ 8, got {resolution}")));
        }
        let (x, w) = gauss_legendre(resolution);
        let radial = x
            .iter()
            .zip(&w)
            .map(|(xi, wi)| {
                let v = 0.5 * (xi + 1.0);
                let dv = 0.5 * wi;
                let r = v * v;
                // r^{2n-1} dr with dr = 2v dv
                (r, r.powi(2 * n as i32 - 1) * 2.0 * v * dv)
            })
            .collect();
        let polar = if n == 1 {
            vec![(1.0, 0.0, 1.0)]
        } else {
            x.iter()
                .zip(&w)
                .map(|(xi, wi)| {
                    let chi = 0.25 * PI * (xi + 1.0);
                    let (s, c) = chi.sin_cos();
                    (c, s, c * s * 0.25 * PI * wi)
                })
                .collect()
        };
        let h = 2.0 * PI / resolution as f64;
        let angular = (0..resolution)
            .map(|j| (Complex64::from_polar(1.0, h * j as f64), h))
            .collect();
        Ok(BallGrid { n, radial, polar, angular })
    }

    /// Visits every node with its point and total weight, in a fixed order.
    pub fn for_each(&self, mut visit: impl FnMut(&[Complex64], f64)) {
        let mut z = [Complex64::new(0.0, 0.0); 2];
        for &(r, wr) in &self.radial {
            for &(c, s, wc) in &self.polar {
                for &(e1, w1) in &self.angular {
                    z[0] = e1 * (r * c);
                    if self.n == 1 {
                        visit(&z[..1], wr * wc * w1);
                        continue;
                    }
                    for &(e2, w2) in &self.angular {
                        z[1] = e2 * (r * s);
                        visit(&z[..2], wr * wc * w1 * w2);
                    }
                }
            }
        }
    }
}

/// Uniform point in the unit ball of ℂⁿ.
pub fn sample_ball(rng: &mut impl Rng, n: usize, out: &mut [Complex64]) {
    let mut norm2 = 0.0;
    for z in out.iter_mut().take(n) {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *z = Complex64::new(re, im);
        norm2 += re * re + im * im;
    }
    let u: f64 = rng.random();
    let radius = u.powf(1.0 / (2 * n) as f64) / norm2.sqrt();
    for z in out.iter_mut().take(n) {
        *z *= radius;
    }
}

pub fn integrate_ball(g: &BallIntegrandN, resolution: usize) -> Result<BallEstimate> {
    if !(1..=2).contains(&g.n) {
        return Err(SdlError::UnsupportedDimension(g.n));
    }
    if resolution < 8 {
        return Err(SdlError::BadParameter(format!("resolution must be ≥ 8, got {resolution}")));
    }
    match g.mode {
        BallMode::TensorPolar => {
            let grid = BallGrid::new(g.n, resolution)?;
            let mut acc = NeumaierSum::default();
            let mut bad = None;
            grid.for_each(|z, w| {
                let v = (g.f)(z);
                if !v.is_finite() && bad.is_none() {
                    bad = Some(z[0].norm());
                }
                acc.add(w * v);
            });
            if let Some(at) = bad {
                return Err(SdlError::NonFinite { at });
            }
            Ok(BallEstimate { value: acc.value(), std_error: None })
        }
        BallMode::MonteCarlo { samples, seed } => {
            if samples < 2 {
                return Err(SdlError::BadParameter("need at least two samples".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut z = [Complex64::new(0.0, 0.0); 2];
            let mut sum = NeumaierSum::default();
            let mut sum2 = NeumaierSum::default();
            for _ in 0..samples {
                sample_ball(&mut rng, g.n, &mut z);
                let v = (g.f)(&z[..g.n]);
                if !v.is_finite() {
                    return Err(SdlError::NonFinite { at: z[0].norm() });
                }
                sum.add(v);
                sum2.add(v * v);
            }
            let m = samples as f64;
            let mean = sum.value() / m;
            let var = ((sum2.value() / m - mean * mean) * m / (m - 1.0)).max(0.0);
            let vol = ball_volume(g.n);
            Ok(BallEstimate {
                value: vol * mean,
                std_error: Some(vol * (var / m).sqrt()),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn midpoint(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        (0..n).map(|i| f(a + h * (i as f64 + 0.5))).sum::<f64>() * h
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(15);
        for deg in 0..=29 {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((got - want).abs() < 1e-14, "degree {deg}: {got} vs {want}");
        }
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn unit_interval_examples() {
        assert!((integrate(|r| r, 0.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((integrate(|r| r * (1.0 - r * r), 0.0, 1.0).unwrap() - 0.25).abs() < 1e-15);

        let f = |s: f64| s * (-s).exp();
        let exact = 1.0 - 2.0 / std::f64::consts::E;
        // antiderivative −(s+1)e^{−s}, cross-checked with a plain midpoint rule
        let mid = midpoint(f, 0.0, 1.0, 200_000);
        assert!((mid - exact).abs() < 1e-10);
        let got = integrate(f, 0.0, 1.0).unwrap();
        assert!((got - exact).abs() < 1e-14 * exact.max(1.0) * 10.0);
        assert!((got - 0.264241).abs() < 1e-6);
    }

    #[test]
    fn reversed_interval_flips_sign() {
        let a = integrate(|x| x.exp(), 0.0, 2.0).unwrap();
        let b = integrate(|x| x.exp(), 2.0, 0.0).unwrap();
        assert_eq!(a, -b);
    }

    #[test]
    fn infinite_intervals() {
        let lower = integrate(|t| t.exp(), f64::NEG_INFINITY, 0.0).unwrap();
        assert!((lower - 1.0).abs() < 1e-12);
        let upper = integrate(|s| (-s).exp(), 0.0, f64::INFINITY).unwrap();
        assert!((upper - 1.0).abs() < 1e-12);
        let both = integrate(|x| (-x * x).exp(), f64::NEG_INFINITY, f64::INFINITY).unwrap();
        assert!((both - PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn integrable_power_singularity_through_log_map() {
        // ∫₀¹ s^{-3/4} ds = 4
        let v = integrate_unit_log(|s| s.powf(-0.75), 1e-12).unwrap();
        assert!((v - 4.0).abs() < 1e-10, "{v}");
        // ∫_{-∞}^0 e^{t/4} dt = 4
        let w = integrate(|t| (0.25 * t).exp(), f64::NEG_INFINITY, 0.0).unwrap();
        assert!((w - 4.0).abs() < 1e-10);
    }

    #[test]
    fn divergent_integrals_do_not_converge() {
        let err = integrate(|t| (-0.5 * t).exp(), f64::NEG_INFINITY, 0.0).unwrap_err();
        assert_eq!(err.name(), "NonConvergent");
        let err = integrate(|s| 1.0 / s, 0.0, 1.0).unwrap_err();
        assert_eq!(err.name(), "NonConvergent");
        let err = integrate(|s| 1.0 / (1.0 + s), 0.0, f64::INFINITY).unwrap_err();
        assert_eq!(err.name(), "NonConvergent");
    }

    #[test]
    fn nan_integrand_is_reported() {
        let err = integrate(|x| if x > 0.5 { f64::NAN } else { x }, 0.0, 1.0).unwrap_err();
        assert_eq!(err.name(), "NonFinite");
    }

    #[test]
    fn bad_tolerance_rejected() {
        let g = Integrand1D::new(|x| x, 0.0, 1.0);
        assert!(integrate_1d(&g, 0.0, 10).is_err());
    }

    #[test]
    fn radial_log_moment_matches_closed_form() {
        // ∫₀¹ r³ (log r²)² dr = 4 ∫₀¹ r³ (log r)² dr = 4 · 2/4³ = 1/8
        let v = radial_log_moment(3.0, |t| t * t, 1e-12).unwrap();
        assert!((v - 0.125).abs() < 1e-12, "{v}");
    }

    #[test]
    fn ball_examples() {
        let one = BallIntegrandN::new(1, |_| 1.0, BallMode::TensorPolar);
        assert!((integrate_ball(&one, 16).unwrap().value - PI).abs() < 1e-12);
        let s = BallIntegrandN::new(1, |z| z[0].norm_sqr(), BallMode::TensorPolar);
        assert!((integrate_ball(&s, 16).unwrap().value - PI / 2.0).abs() < 1e-12);
        let z1 = BallIntegrandN::new(2, |z| z[0].norm_sqr(), BallMode::TensorPolar);
        let exact = PI * PI / 6.0;
        assert!((integrate_ball(&z1, 16).unwrap().value - exact).abs() < 1e-12);
        let mc = BallIntegrandN::new(2, |z| z[0].norm_sqr(), BallMode::MonteCarlo { samples: 200_000, seed: 7 });
        let est = integrate_ball(&mc, 16).unwrap();
        assert!((est.value - exact).abs() < 4.0 * est.std_error.unwrap());
    }

    #[test]
    fn ball_rejects_bad_inputs() {
        let g = BallIntegrandN::new(3, |_| 1.0, BallMode::TensorPolar);
        assert_eq!(integrate_ball(&g, 16).unwrap_err().name(), "UnsupportedDimension");
        let g = BallIntegrandN::new(1, |_| 1.0, BallMode::TensorPolar);
        assert_eq!(integrate_ball(&g, 4).unwrap_err().name(), "BadParameter");
    }

    #[test]
    fn monte_carlo_is_deterministic_per_seed() {
        let mk = |seed| BallIntegrandN::new(2, |z| (z[0] * z[1].conj()).re + 1.0, BallMode::MonteCarlo { samples: 5000, seed });
        let a = integrate_ball(&mk(3), 8).unwrap();
        let b = integrate_ball(&mk(3), 8).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        let c = integrate_ball(&mk(4), 8).unwrap();
        assert_ne!(a.value.to_bits(), c.value.to_bits());
    }

    #[test]
    fn neumaier_recovers_cancelled_bits() {
        let s: NeumaierSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(s.value(), 2.0);
    }
}
