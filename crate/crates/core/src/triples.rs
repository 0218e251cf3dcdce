//! Gain triples `(C, D, S)` on intervals `(-∞, hi)`.
//!
//! A triple is admissible when `C, D, S > 0`, `D' = -C`, `(S·D)' = -D` and
//! `S' < 0`. It is sharp when additionally `D(t) → 0` as `t → 0⁻` and
//! `∫₀¹ r·D(log r²) dr` is finite.

use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use crate::error::{Result, SdlError};
use crate::quad::{self, Integrand1D};
use crate::report::VerificationReport;

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

pub fn real_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> RealFn {
    Arc::new(f)
}

#[derive(Clone)]
pub struct GainTriple {
    pub name: String,
    /// Upper endpoint of the interval; the lower endpoint is always `-∞`.
    pub hi: f64,
    pub c: RealFn,
    pub d: RealFn,
    pub s: RealFn,
    pub dc: RealFn,
    pub dd: RealFn,
    pub ds: RealFn,
    /// Relative accuracy of a single evaluation (roundoff for closed forms,
    /// quadrature tolerance for integral-defined triples).
    pub eval_rel_err: f64,
}

impl fmt::Debug for GainTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GainTriple")
            .field("name", &self.name)
            .field("interval", &(f64::NEG_INFINITY, self.hi))
            .finish()
    }
}

impl GainTriple {
    #[allow(clippy::too_many_arguments)]
    pub fn from_fns(
        name: impl Into<String>,
        hi: f64,
        c: RealFn,
        d: RealFn,
        s: RealFn,
        dc: RealFn,
        dd: RealFn,
        ds: RealFn,
    ) -> Self {
        GainTriple { name: name.into(), hi, c, d, s, dc, dd, ds, eval_rel_err: 1e-15 }
    }

    pub fn c(&self, t: f64) -> f64 {
        (self.c)(t)
    }
    pub fn d(&self, t: f64) -> f64 {
        (self.d)(t)
    }
    pub fn s(&self, t: f64) -> f64 {
        (self.s)(t)
    }
    pub fn dc(&self, t: f64) -> f64 {
        (self.dc)(t)
    }
    pub fn dd(&self, t: f64) -> f64 {
        (self.dd)(t)
    }
    pub fn ds(&self, t: f64) -> f64 {
        (self.ds)(t)
    }
    /// `E = S·D`.
    pub fn e(&self, t: f64) -> f64 {
        self.s(t) * self.d(t)
    }

    pub fn interval(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, self.hi)
    }

    pub fn contains(&self, t: f64) -> bool {
        t.is_finite() && t < self.hi
    }

    pub fn check_domain(&self, t: f64) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(SdlError::DomainViolation { point: t, lo: f64::NEG_INFINITY, hi: self.hi })
        }
    }

    /// The same triple translated so that its interval becomes `(-∞, new_hi)`.
    pub fn shifted_to(&self, new_hi: f64) -> GainTriple {
        let shift = self.hi - new_hi;
        let wrap = |f: &RealFn| -> RealFn {
            let f = f.clone();
            Arc::new(move |t| f(t + shift))
        };
        GainTriple {
            name: format!("{}@{}", self.name, new_hi),
            hi: new_hi,
            c: wrap(&self.c),
            d: wrap(&self.d),
            s: wrap(&self.s),
            dc: wrap(&self.dc),
            dd: wrap(&self.dd),
            ds: wrap(&self.ds),
            eval_rel_err: self.eval_rel_err,
        }
    }
}

/// `eᵘ - 1 - u` without cancellation for small `u`.
pub fn exp_rem2(u: f64) -> f64 {
    if u.abs() < 0.25 {
        let mut term = u * u / 2.0;
        let mut sum = term;
        for k in 3..30 {
            term *= u / k as f64;
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        u.exp_m1() - u
    }
}

/// `S = (eᵘ-1-u)/(eᵘ-1)` and its derivative in `u`, the shape shared by the
/// exponential catalog entries.
fn exp_ratio(u: f64) -> (f64, f64) {
    let num = exp_rem2(u);
    let den = u.exp_m1();
    let s = num / den;
    // (num'·den - num·den')/den² with num' = eᵘ-1, den' = eᵘ
    let ds = (den * den - num * u.exp()) / (den * den);
    (s, ds)
}

fn need(name: &str, params: &[f64], count: usize) -> Result<()> {
    if params.len() != count {
        return Err(SdlError::BadParameter(format!(
            "{name} takes {count} parameter(s), got {}",
            params.len()
        )));
    }
    if params.iter().any(|p| !p.is_finite()) {
        return Err(SdlError::BadParameter(format!("{name}: non-finite parameter")));
    }
    Ok(())
}

pub const CATALOG_NAMES: [&str; 6] = ["skoda", "log", "qexp", "hormrefine", "affine", "extension"];

pub fn catalog_lookup(name: &str, params: &[f64]) -> Result<GainTriple> {
    match name {
        "skoda" => {
            need(name, params, 1)?;
            let delta = params[0];
            if delta <= 0.0 {
                return Err(SdlError::BadParameter(format!("skoda needs δ > 0, got {delta}")));
            }
            Ok(skoda(delta))
        }
        "log" | "unit" => {
            need(name, params, 0)?;
            Ok(log_triple())
        }
        "qexp" => {
            need(name, params, 1)?;
            let q = params[0];
            if q < 1.0 {
                return Err(SdlError::BadParameter(format!("qexp needs q ≥ 1, got {q}")));
            }
            Ok(qexp(q))
        }
        "hormrefine" => {
            need(name, params, 1)?;
            Ok(hormrefine(params[0]))
        }
        "affine" => {
            need(name, params, 0)?;
            Ok(affine())
        }
        "extension" => match params {
            [] => extension(real_fn(|_| 1.0), "extension(1)"),
            [k] if k.is_finite() && *k > 0.0 => {
                let k = *k;
                extension(real_fn(move |_| k), &format!("extension({k})"))
            }
            _ => Err(SdlError::BadParameter("extension takes an optional positive constant".into())),
        },
        other => Err(SdlError::UnknownName(other.to_string())),
    }
}

/// `(e^{-δt}, (e^{-δt}-1)/δ, (e^{-δt}+δt-1)/(δ(e^{-δt}-1)))` on `(-∞, 0)`.
pub fn skoda(delta: f64) -> GainTriple {
    GainTriple::from_fns(
        format!("skoda({delta})"),
        0.0,
        real_fn(move |t| (-delta * t).exp()),
        real_fn(move |t| (-delta * t).exp_m1() / delta),
        real_fn(move |t| exp_ratio(-delta * t).0 / delta),
        real_fn(move |t| -delta * (-delta * t).exp()),
        real_fn(move |t| -(-delta * t).exp()),
        real_fn(move |t| -exp_ratio(-delta * t).1),
    )
}

/// `(1, -t, -t/2)` on `(-∞, 0)`.
pub fn log_triple() -> GainTriple {
    GainTriple::from_fns(
        "log",
        0.0,
        real_fn(|_| 1.0),
        real_fn(|t| -t),
        real_fn(|t| -t / 2.0),
        real_fn(|_| 0.0),
        real_fn(|_| -1.0),
        real_fn(|_| -0.5),
    )
}

/// `(e^{qt}, (1-e^{qt})/q, (e^{qt}-1-qt)/(q(1-e^{qt})))` on `(-∞, 0)`.
pub fn qexp(q: f64) -> GainTriple {
    // with u = qt: S = (eᵘ-1-u)/(-q(eᵘ-1)) = -exp_ratio(u)/q
    GainTriple::from_fns(
        format!("qexp({q})"),
        0.0,
        real_fn(move |t| (q * t).exp()),
        real_fn(move |t| -(q * t).exp_m1() / q),
        real_fn(move |t| -exp_ratio(q * t).0 / q),
        real_fn(move |t| q * (q * t).exp()),
        real_fn(move |t| -(q * t).exp()),
        real_fn(move |t| -exp_ratio(q * t).1),
    )
}

/// `(e^{-t}, e^{-t}-e^{-M}, (e^{-t}+(t-M-1)e^{-M})/(e^{-t}-e^{-M}))` on `(-∞, M)`.
pub fn hormrefine(m: f64) -> GainTriple {
    // with x = M - t: D = e^{-M}(eˣ-1), S = exp_ratio(x)
    GainTriple::from_fns(
        format!("hormrefine({m})"),
        m,
        real_fn(|t| (-t).exp()),
        real_fn(move |t| (-m).exp() * (m - t).exp_m1()),
        real_fn(move |t| exp_ratio(m - t).0),
        real_fn(|t| -(-t).exp()),
        real_fn(|t| -(-t).exp()),
        real_fn(move |t| -exp_ratio(m - t).1),
    )
}

/// `(1, 1-t, (1-t)/2)` on `(-∞, 1)`.
pub fn affine() -> GainTriple {
    GainTriple::from_fns(
        "affine",
        1.0,
        real_fn(|_| 1.0),
        real_fn(|t| 1.0 - t),
        real_fn(|t| (1.0 - t) / 2.0),
        real_fn(|_| 0.0),
        real_fn(|_| -1.0),
        real_fn(|_| -0.5),
    )
}

const EXT_TOL: f64 = 1e-12;

fn quad_or_nan(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    quad::integrate_1d(&Integrand1D::new(f, a, b), EXT_TOL, quad::DEFAULT_MAX_DEPTH).unwrap_or(f64::NAN)
}

/// `(c(t)eᵗ, ∫ₜ⁰ c(u)eᵘ du, ∫ₜ⁰ D / D)` on `(-∞, 0)`.
///
/// `∫_{-∞}^0 c(u)eᵘ du` must be finite. Derivatives follow from the Leibniz
/// rule, except `dC` which is a central difference of the profile.
pub fn extension(c: RealFn, label: &str) -> Result<GainTriple> {
    let cc = c.clone();
    let total = quad::integrate(move |u| {
        let e = u.exp();
        if e == 0.0 { 0.0 } else { cc(u) * e }
    }, f64::NEG_INFINITY, 0.0)?;
    if !(total > 0.0) {
        return Err(SdlError::BadParameter(format!("{label}: ∫c eᵗ must be positive, got {total}")));
    }
    let cf = c.clone();
    let c_t: RealFn = real_fn(move |t| cf(t) * t.exp());
    let cd = c.clone();
    let d_t: RealFn = real_fn(move |t| quad_or_nan(|u| cd(u) * u.exp(), t, 0.0));
    let ce = c.clone();
    // E(t) = ∫ₜ⁰ D = ∫ₜ⁰ (u - t) c(u) eᵘ du
    let e_t: RealFn = real_fn(move |t| quad_or_nan(|u| (u - t) * ce(u) * u.exp(), t, 0.0));
    let (d1, e1) = (d_t.clone(), e_t.clone());
    let s_t = real_fn(move |t| e1(t) / d1(t));
    let (c2, d2, e2) = (c_t.clone(), d_t.clone(), e_t.clone());
    let ds_t = real_fn(move |t| {
        let d = d2(t);
        (c2(t) * e2(t) - d * d) / (d * d)
    });
    let c3 = c_t.clone();
    let dc_t = real_fn(move |t| {
        let h = 1e-6 * t.abs().max(1.0);
        (c3(t + h) - c3(t - h)) / (2.0 * h)
    });
    let c4 = c_t.clone();
    let dd_t = real_fn(move |t| -c4(t));
    let mut tr = GainTriple::from_fns(label, 0.0, c_t, d_t, s_t, dc_t, dd_t, ds_t);
    tr.eval_rel_err = EXT_TOL;
    Ok(tr)
}

/// The catalog instances exercised by the acceptance suite.
pub fn catalog_instances() -> Vec<GainTriple> {
    vec![
        skoda(0.25),
        skoda(0.5),
        skoda(0.75),
        skoda(1.0),
        log_triple(),
        qexp(1.0),
        qexp(2.0),
        hormrefine(0.0),
        hormrefine(1.0),
        affine(),
        extension(real_fn(|_| 1.0), "extension(1)").expect("constant profile is integrable"),
    ]
}

/// Catalog instances that satisfy the sharp condition.
pub fn sharp_instances() -> Vec<GainTriple> {
    vec![
        skoda(0.25),
        skoda(0.5),
        skoda(0.75),
        log_triple(),
        qexp(1.0),
        qexp(2.0),
        extension(real_fn(|_| 1.0), "extension(1)").expect("constant profile is integrable"),
    ]
}

/// `count` points `a, …, b` equally spaced.
pub fn linear_grid(a: f64, b: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![a],
        _ => (0..count)
            .map(|i| a + (b - a) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

/// `count` points `hi - d` with `d` log-spaced from `d_max` down to `d_min`, ascending in `t`.
pub fn log_grid_below(hi: f64, d_min: f64, d_max: f64, count: usize) -> Vec<f64> {
    let (la, lb) = (d_max.ln(), d_min.ln());
    linear_grid(la, lb, count).into_iter().map(|l| hi - l.exp()).collect()
}

/// The standard 1000-point grid for a triple: distances in `[1e-6, 10]` below `hi`.
pub fn standard_grid(tr: &GainTriple) -> Vec<f64> {
    log_grid_below(tr.hi, 1e-6, 10.0, 1000)
}

fn check_grid(tr: &GainTriple, grid: &[f64]) -> Result<()> {
    grid.iter().try_for_each(|&t| tr.check_domain(t))
}

pub fn verify_triple(tr: &GainTriple, grid: &[f64], tol: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    if !(tol > 0.0) {
        return Err(SdlError::BadParameter(format!("tol must be positive, got {tol}")));
    }
    check_grid(tr, grid)?;
    let mut res_d: f64 = 0.0;
    let mut res_sd: f64 = 0.0;
    let mut max_ds = f64::NEG_INFINITY;
    let mut positive = true;
    let mut worst_at = f64::NAN;
    for &t in grid {
        let (c, d, s) = (tr.c(t), tr.d(t), tr.s(t));
        let (dd, ds) = (tr.dd(t), tr.ds(t));
        positive &= c > 0.0 && d > 0.0 && s > 0.0;
        let r1 = (dd + c).abs();
        let r2 = (ds * d + s * dd + d).abs();
        if !(r1 <= res_d) {
            res_d = if r1.is_nan() { f64::NAN } else { r1.max(res_d) };
        }
        if !(r2 <= res_sd) {
            if !(r2 < res_sd) {
                worst_at = t;
            }
            res_sd = if r2.is_nan() { f64::NAN } else { r2.max(res_sd) };
        }
        if !(ds <= max_ds) {
            max_ds = if ds.is_nan() { f64::NAN } else { ds.max(max_ds) };
        }
    }
    let mut r = VerificationReport::new(format!("triple-ode:{}", tr.name), tol)
        .param("grid_points", grid.len())
        .param("max_dS", max_ds)
        .param("worst_t", worst_at);
    r.residual("res_dD_plus_C", res_d);
    r.residual("res_dSD_plus_D", res_sd);
    r.require(positive, "C, D, S not all positive on grid");
    r.require(max_ds < 0.0, "dS is not strictly negative on grid");
    Ok(r.timed(start))
}

/// `∫₀¹ r·D(log r²) dr`; `NonConvergent` signals divergence.
pub fn sharp_integral(tr: &GainTriple) -> Result<f64> {
    quad::radial_log_moment(1.0, |t| tr.d(t), 1e-11)
}

pub fn check_sharp(tr: &GainTriple, tol: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    if tr.hi < 0.0 {
        return Err(SdlError::DomainViolation { point: 0.0, lo: f64::NEG_INFINITY, hi: tr.hi });
    }
    let integral = sharp_integral(tr)?;
    let ds: Vec<f64> = (2..=8).map(|k| tr.d(-(10f64.powi(-k)))).collect();
    let monotone = ds.windows(2).all(|w| w[1] < w[0]) && ds.iter().all(|&d| d > 0.0);
    let last = *ds.last().expect("seven samples");
    let mut r = VerificationReport::new(format!("sharp:{}", tr.name), tol)
        .param("integral_rD", integral)
        .param("D_at_minus_1e-8", last);
    r.lhs = Some(integral);
    r.require(integral.is_finite(), "∫ r D(log r²) dr is not finite");
    r.require(monotone, "D(-10^-k) is not monotonically decreasing to 0");
    r.require(last < tol, format!("D(-1e-8) = {last:e} does not vanish below tolerance"));
    Ok(r.timed(start))
}

/// Inputs of the builder that produces a triple from a profile `C` on `(-∞, A]`.
#[derive(Clone)]
pub struct TripleBuilderSpec {
    pub c_profile: RealFn,
    pub a: f64,
    pub alpha: f64,
}

/// `∫_a^b f` with a tolerance tight enough for difference quotients.
fn fine(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    quad::integrate_1d(&Integrand1D::new(f, a, b), 1e-13, quad::DEFAULT_MAX_DEPTH).unwrap_or(f64::NAN)
}

/// Builds `D(t) = ∫ₜᴬ C + αC(A)`, `E(t) = ∫ₜᴬ D + α²C(A)`, `S = E/D`.
///
/// Derivatives are central differences with step `h = 1e-6·max(1, |t|)`.
/// The increments `D(t±h) - D(t)` and `E(t±h) - E(t)` are evaluated as
/// short-interval integrals so the quotient carries no cancellation noise.
pub fn build_from_c(spec: &TripleBuilderSpec, grid: &[f64]) -> Result<(GainTriple, VerificationReport)> {
    let start = Instant::now();
    if !(spec.alpha >= 0.0) || !spec.a.is_finite() {
        return Err(SdlError::BadParameter(format!("need α ≥ 0 and finite A, got α = {}, A = {}", spec.alpha, spec.a)));
    }
    let a = spec.a;
    let alpha = spec.alpha;
    let c = spec.c_profile.clone();
    let ca = c(a);
    if !(ca > 0.0) {
        return Err(SdlError::BadParameter(format!("C(A) must be positive, got {ca}")));
    }
    // probe convergence once so a non-integrable profile surfaces as an error
    let probe = grid.iter().cloned().fold(a - 1.0, f64::min);
    {
        let c = c.clone();
        quad::integrate(move |v| (v - probe) * c(v), probe, a)?;
    }

    let cd = c.clone();
    let d_fn: RealFn = real_fn(move |t| fine(|v| cd(v), t, a) + alpha * ca);
    let ce = c.clone();
    let e_fn: RealFn =
        real_fn(move |t| fine(|v| (v - t) * ce(v), t, a) + alpha * ca * (a - t) + alpha * alpha * ca);
    let (d1, e1) = (d_fn.clone(), e_fn.clone());
    let s_fn: RealFn = real_fn(move |t| e1(t) / d1(t));

    let c_inc = c.clone();
    // (D(t+h)-D(t), D(t-h)-D(t), E(t+h)-E(t), E(t-h)-E(t))
    let increments = move |t: f64, h: f64, d_t: f64| -> (f64, f64, f64, f64) {
        let cp = fine(|w| c_inc(w), t, t + h);
        let cm = fine(|w| c_inc(w), t - h, t);
        // ∫ₜ^{t+h} D(v) dv = h·D(t) - ∫ₜ^{t+h} (t+h-w) C(w) dw
        let ep = -(h * d_t - fine(|w| (t + h - w) * c_inc(w), t, t + h));
        // ∫_{t-h}^t D(v) dv = h·D(t) + ∫_{t-h}^t (w-t+h) C(w) dw
        let em = h * d_t + fine(|w| (w - t + h) * c_inc(w), t - h, t);
        (-cp, cm, ep, em)
    };
    let step = |t: f64| 1e-6 * t.abs().max(1.0);

    let cc = c.clone();
    let dc_fn: RealFn = real_fn(move |t| {
        let h = step(t);
        (cc(t + h) - cc(t - h)) / (2.0 * h)
    });
    let (d2, inc2) = (d_fn.clone(), increments.clone());
    let dd_fn: RealFn = real_fn(move |t| {
        let h = step(t).min(0.5 * (a - t).abs().max(f64::MIN_POSITIVE));
        let (dp, dm, _, _) = inc2(t, h, d2(t));
        (dp - dm) / (2.0 * h)
    });
    let (d3, e3, inc3) = (d_fn.clone(), e_fn.clone(), increments);
    let ds_fn: RealFn = real_fn(move |t| {
        let h = step(t);
        let (dv, ev) = (d3(t), e3(t));
        let (dp, dm, ep, em) = inc3(t, h, dv);
        // S(t+h) - S(t-h) = [E₊D₋ - E₋D₊]/(D₊D₋), expanded in the increments
        let num = ev * (dm - dp) + dv * (ep - em) + ep * dm - em * dp;
        num / ((dv + dp) * (dv + dm)) / (2.0 * h)
    });
    let mut tr = GainTriple::from_fns(
        format!("built(A={a},alpha={alpha})"),
        a,
        c.clone(),
        d_fn,
        s_fn,
        dc_fn,
        dd_fn,
        ds_fn,
    );
    tr.eval_rel_err = 1e-13;

    let mut report = VerificationReport::new(format!("build:{}", tr.name), 0.0)
        .param("A", a)
        .param("alpha", alpha)
        .param("S_at_A", tr.s(a));
    let mut worst_margin = f64::INFINITY;
    let mut min_s_minus_alpha = f64::INFINITY;
    for &t in grid {
        if t > a {
            return Err(SdlError::DomainViolation { point: t, lo: f64::NEG_INFINITY, hi: a });
        }
        let (cv, dv, ev) = (tr.c(t), tr.d(t), tr.e(t));
        // sufficient inequality dC > -C·D/E, recorded as its margin
        let margin = tr.dc(t) + cv * dv / ev;
        worst_margin = worst_margin.min(margin);
        min_s_minus_alpha = min_s_minus_alpha.min(tr.s(t) - alpha);
    }
    report.set_param("min_sufficient_margin", worst_margin);
    report.set_param("min_S_minus_alpha", min_s_minus_alpha);
    report.require(min_s_minus_alpha >= -1e-12 * alpha.max(1.0), "S < α somewhere on grid");
    if !(worst_margin > 0.0) {
        report.warn("SufficientConditionViolated: dC > -C·D/E fails on grid");
    }
    Ok((tr, report.timed(start)))
}

/// `T = -log D` and `S_check(t) = [∫ₜ^{t0} D + S(t0)D(t0)]/D(t)`.
pub fn derive_twist(tr: &GainTriple, t0: f64) -> Result<(RealFn, RealFn)> {
    tr.check_domain(t0)?;
    let d = tr.d.clone();
    let t_fn: RealFn = real_fn(move |t| -d(t).ln());
    let base = tr.s(t0) * tr.d(t0);
    let d = tr.d.clone();
    let s_check: RealFn = real_fn(move |t| {
        let tail = quad::integrate_1d(&Integrand1D::new(|u| d(u), t, t0), 1e-13, quad::DEFAULT_MAX_DEPTH)
            .unwrap_or(f64::NAN);
        (tail + base) / d(t)
    });
    Ok((t_fn, s_check))
}

/// Maximum `|S_check - S|` over `grid`.
pub fn twist_report(tr: &GainTriple, t0: f64, grid: &[f64], tol: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    check_grid(tr, grid)?;
    let (_, s_check) = derive_twist(tr, t0)?;
    let worst = grid
        .iter()
        .map(|&t| (s_check(t) - tr.s(t)).abs())
        .fold(0.0, |m: f64, x| if x.is_nan() || m.is_nan() { f64::NAN } else { m.max(x) });
    let mut r = VerificationReport::new(format!("twist:{}", tr.name), tol).param("t0", t0);
    r.residual("max_abs_S_check_minus_S", worst);
    Ok(r.timed(start))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curvature {
    Concave,
    Convex,
    Flat,
}

/// Sign of `(log E)''` at `t` by a second central difference, with
/// differences below the evaluation noise floor reported as `Flat`.
pub fn log_e_curvature(tr: &GainTriple, t: f64) -> Curvature {
    let eps = tr.eval_rel_err.max(f64::EPSILON);
    let room = 0.5 * (tr.hi - t);
    let h = (eps.powf(0.25) * t.abs().max(1.0)).min(room);
    let le = |x: f64| tr.e(x).ln();
    let (a, b, c) = (le(t - h), le(t), le(t + h));
    let second = a - 2.0 * b + c;
    let noise = 8.0 * eps + 4.0 * f64::EPSILON * (a.abs() + 2.0 * b.abs() + c.abs());
    if second < -noise {
        Curvature::Concave
    } else if second > noise {
        Curvature::Convex
    } else {
        Curvature::Flat
    }
}

pub fn log_concavity_check(tr: &GainTriple, grid: &[f64]) -> Result<VerificationReport> {
    let start = Instant::now();
    check_grid(tr, grid)?;
    let mut concave = 0usize;
    let mut negative_ds = 0usize;
    let mut disagreements = 0usize;
    for &t in grid {
        let curv = log_e_curvature(tr, t);
        let ds_neg = tr.ds(t) < 0.0;
        concave += (curv == Curvature::Concave) as usize;
        negative_ds += ds_neg as usize;
        let disagree = match curv {
            Curvature::Concave => !ds_neg,
            Curvature::Convex => ds_neg,
            Curvature::Flat => false,
        };
        disagreements += disagree as usize;
    }
    let n = grid.len();
    let mut r = VerificationReport::new(format!("log-concavity:{}", tr.name), 0.0)
        .param("grid_points", n)
        .param("concave_points", concave)
        .param("negative_dS_points", negative_ds)
        .param("disagreements", disagreements);
    r.require(concave == n, "log E is not strictly concave at every grid point");
    r.require(negative_ds == n, "dS < 0 fails somewhere on grid");
    r.require(disagreements == 0, "curvature sign of log E disagrees with sign of dS");
    Ok(r.timed(start))
}

/// `∫₀¹ rᵏ F(log r²) dr` for the triple component `which ∈ {C, D}`.
pub fn radial_moment(tr: &GainTriple, k: f64, use_d: bool) -> Result<f64> {
    if use_d {
        quad::radial_log_moment(k, |t| tr.d(t), 1e-12)
    } else {
        quad::radial_log_moment(k, |t| tr.c(t), 1e-12)
    }
}

/// Both integration-by-parts identities of a sharp triple, as absolute gaps:
/// `∫rC - ∫rD` and `∫r³D - ½∫r³C`.
pub fn parts_identities(tr: &GainTriple) -> Result<(f64, f64)> {
    let c1 = radial_moment(tr, 1.0, false)?;
    let d1 = radial_moment(tr, 1.0, true)?;
    let c3 = radial_moment(tr, 3.0, false)?;
    let d3 = radial_moment(tr, 3.0, true)?;
    Ok((c1 - d1, d3 - 0.5 * c3))
}
