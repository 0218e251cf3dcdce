use std::f64::consts::PI;
use std::fs;
use std::time::Instant;

use num_complex::Complex64;

use sdl_core::dbar::{self, DbarCase, DbarCaseId};
use sdl_core::division::{self, ConverseAsymptotics};
use sdl_core::extension::{self, CalcLimitCase, ExtensionCase};
use sdl_core::positivity::{self, BetaTensor, HermitianTensorForm};
use sdl_core::quad::default_seed;
use sdl_core::{profile, suite, triples, MultiPoly, Result, SdlError, TripleBuilderSpec, VerificationReport};

use crate::args::{Command, DbarCmd, DivisionCmd, ExtensionCmd, PositivityCmd, TriplesCmd, VerifyCmd};
use crate::parse::{diagonal, ProblemConfig};

/// One `(parameter, lhs, rhs)` row of plot data.
pub type PlotRow = (f64, f64, f64);

#[derive(Default)]
pub struct Outcome {
    pub reports: Vec<VerificationReport>,
    pub plot: Vec<PlotRow>,
}

impl Outcome {
    fn push(&mut self, id: &str, tol: f64, r: Result<VerificationReport>) {
        self.reports.push(r.unwrap_or_else(|e| VerificationReport::from_error(id, tol, &e)));
    }
}

pub fn run(cmd: &Command) -> Outcome {
    let mut out = Outcome::default();
    match cmd {
        Command::Triples(c) => triples_cmd(c, &mut out),
        Command::Division(c) => division_cmd(c, &mut out),
        Command::Dbar(c) => dbar_cmd(c, &mut out),
        Command::Positivity(c) => positivity_cmd(c, &mut out),
        Command::Extension(c) => extension_cmd(c, &mut out),
        Command::Verify(c) => verify_cmd(c, &mut out),
    }
    out
}

fn triples_cmd(cmd: &TriplesCmd, out: &mut Outcome) {
    match cmd {
        TriplesCmd::Verify { triple, grid, tol } => {
            let r = triples::catalog_lookup(&triple.name, &triple.param.0).and_then(|tr| {
                let pts = grid.map_or_else(|| triples::standard_grid(&tr), |g| g.points());
                triples::verify_triple(&tr, &pts, *tol)
            });
            out.push(&format!("triple-ode:{}", triple.name), *tol, r);
        }
        TriplesCmd::Build { profile: name, a, alpha, grid } => {
            let r = profile::profile(name).and_then(|c| {
                let spec = TripleBuilderSpec { c_profile: c, a: *a, alpha: *alpha };
                let pts = grid.map_or_else(|| triples::linear_grid(a - 10.0, a - 1e-3, 200), |g| g.points());
                let (tr, mut rep) = triples::build_from_c(&spec, &pts)?;
                let ode = triples::verify_triple(&tr, &pts, 1e-6)?;
                rep.set_param("ode_passed", ode.passed());
                rep.require(ode.passed(), "built triple fails the ODE check");
                Ok(rep)
            });
            out.push(&format!("build:{name}"), 1e-6, r);
        }
        TriplesCmd::Sharp { triple, tol } => {
            let r = triples::catalog_lookup(&triple.name, &triple.param.0).and_then(|tr| triples::check_sharp(&tr, *tol));
            out.push(&format!("sharp:{}", triple.name), *tol, r);
        }
        TriplesCmd::Catalog { tol } => {
            for tr in triples::catalog_instances() {
                let r = triples::verify_triple(&tr, &triples::standard_grid(&tr), *tol);
                out.push(&format!("triple-ode:{}", tr.name), *tol, r);
            }
        }
    }
}

fn division_cmd(cmd: &DivisionCmd, out: &mut Outcome) {
    match cmd {
        DivisionCmd::Solve { config, degree, tol } => {
            let r = (|| {
                let text = fs::read_to_string(config)
                    .map_err(|e| SdlError::BadParameter(format!("cannot read {}: {e}", config.display())))?;
                let p = ProblemConfig::from_json(&text)?.problem(*degree)?;
                let start = Instant::now();
                let sol = p.minimal_solution()?;
                let rhs = p.rhs()?;
                let mut rep = VerificationReport::new("division-solve", *tol)
                    .with_sides(sol.energy, rhs)
                    .param("degree", p.degree)
                    .param("q", p.q)
                    .param("triple", p.triple.name.clone())
                    .param("condition", sol.condition)
                    .param("admissible_monomials", sol.admissible_monomials)
                    .param("kkt_fallback", sol.used_kkt_fallback);
                rep.residual("feasibility_residual", sol.residual);
                if sol.condition > 1e8 {
                    rep.warn(format!("condition estimate {:e}", sol.condition));
                }
                Ok(rep.timed(start))
            })();
            out.push("division-solve", *tol, r);
        }
        DivisionCmd::Ratio { phi, delta, eps, triple, degree } => {
            for &e in &eps.0 {
                let id = format!("division-ratio:eps={e}");
                let r = (|| {
                    let tr = profile::triple(triple)?;
                    let start = Instant::now();
                    let phi_fn = profile::optional_phi(phi.as_deref())?;
                    let outcome = division::division_ratio(phi_fn, &division::squeezed_ellipsoid(*delta, e), *degree, &tr)?;
                    let s = outcome.sides;
                    let mut rep = VerificationReport::new(&id, 2e-3)
                        .with_sides(s.lhs_min, s.rhs)
                        .param("delta", *delta)
                        .param("eps", e)
                        .param("triple", tr.name.clone());
                    if let Some(c) = phi.as_deref().and_then(saddle_param) {
                        let asym = ConverseAsymptotics::new(&tr, 2, &division::saddle_coefficients(c, *delta))?;
                        rep.set_param("predicted_ratio", asym.predicted_ratio(e));
                    }
                    out.plot.push((e, s.lhs_min, s.rhs));
                    Ok(rep.note("ratio above 1 indicates the estimate fails for this exponent").timed(start))
                })();
                out.push(&id, 2e-3, r);
            }
        }
        DivisionCmd::SkodaCompare { setting, eps, degree, tol } => {
            let id = format!("skoda-compare:{setting}");
            let r = (|| {
                let start = Instant::now();
                let p = match setting.as_str() {
                    "plane" => suite::skoda_plane(*eps, *degree)?,
                    "disk" => suite::skoda_disk(*eps, *degree)?,
                    other => return Err(SdlError::UnknownCase(other.to_string())),
                };
                let c = division::skoda_comparison(&p, *eps)?;
                let mut rep = VerificationReport::new(&id, *tol)
                    .with_sides(c.lhs_min, c.skoda_rhs)
                    .param("refined_rhs", c.refined_rhs)
                    .param("I0", c.i0)
                    .param("I1", c.i1)
                    .param("g_below_one", c.g_below_one);
                rep.require(c.lhs_min <= c.skoda_rhs * (1.0 + *tol), "minimal lhs exceeds the Skoda rhs");
                if c.g_below_one {
                    rep.require(c.refined_rhs <= c.skoda_rhs, "refined rhs exceeds the Skoda rhs");
                }
                Ok(rep.timed(start))
            })();
            out.push(&id, *tol, r);
        }
    }
}

fn saddle_param(src: &str) -> Option<f64> {
    match profile::parse_call(src).ok()? {
        (name, p) if name == "saddle" && p.len() == 1 => Some(p[0]),
        _ => None,
    }
}

fn dbar_cmd(cmd: &DbarCmd, out: &mut Outcome) {
    let DbarCmd::Verify { case, tol, orthogonality } = cmd;
    let ids: Vec<Result<DbarCaseId>> =
        if case == "all" { DbarCaseId::ALL.iter().map(|&c| Ok(c)).collect() } else { vec![case.parse()] };
    for id in ids {
        let label = id.as_ref().map_or(case.clone(), |c| c.to_string());
        let r = id.and_then(|id| {
            let c = DbarCase::lookup(id);
            let mut rep = dbar::verify_dbar_equality(&c, *tol)?;
            if let Some(k) = orthogonality {
                rep.residual("orthogonality", dbar::orthogonality_check(&c, *k)?);
            }
            Ok(rep)
        });
        out.push(&format!("dbar-{label}"), *tol, r);
    }
}

fn positivity_cmd(cmd: &PositivityCmd, out: &mut Outcome) {
    let seed = default_seed();
    match cmd {
        PositivityCmd::Test { form, file, n, m, trials } => {
            let id = format!("positivity:{form}:m={m}");
            let r = (|| {
                let start = Instant::now();
                let b = match form.as_str() {
                    "identity" => HermitianTensorForm::identity((*n, *n)),
                    "diag" | "diagonal" => HermitianTensorForm::diag_example(),
                    "fs2" => HermitianTensorForm::fubini_study(2),
                    "fubini-study" => HermitianTensorForm::fubini_study(*n),
                    "custom" => {
                        let path = file.as_ref().ok_or_else(|| SdlError::BadParameter("custom form needs --file".into()))?;
                        let text = fs::read_to_string(path)
                            .map_err(|e| SdlError::BadParameter(format!("cannot read {}: {e}", path.display())))?;
                        let nested: Vec<Vec<Vec<Vec<[f64; 2]>>>> = serde_json::from_str(&text)
                            .map_err(|e| SdlError::BadParameter(format!("form file: {e}")))?;
                        HermitianTensorForm::from_nested(&nested)?
                    }
                    other => return Err(SdlError::UnknownName(other.to_string())),
                };
                let (min, _) = positivity::rank_m_min(&b, *m, *trials, seed)?;
                let mut rep = VerificationReport::new(&id, positivity::SEMIPOSITIVE_TOL)
                    .param("min", min)
                    .param("m", *m)
                    .param("seed", seed)
                    .param("semipositive", min >= -positivity::SEMIPOSITIVE_TOL)
                    .note("numeric evidence from alternating minimization");
                rep.lhs = Some(min);
                Ok(rep.timed(start))
            })();
            out.push(&id, positivity::SEMIPOSITIVE_TOL, r);
        }
        PositivityCmd::Lemma24 { r_q, r_s, n, q, seeds } => {
            let id = format!("skoda-gap:{r_q}x{r_s}x{n}:q={q}");
            let r = (|| {
                let start = Instant::now();
                let mut worst = f64::INFINITY;
                for s in 0..*seeds {
                    let beta = BetaTensor::random(*r_q, *r_s, *n, seed.wrapping_add(s));
                    worst = worst.min(positivity::lemma_skoda_gap(&beta, *q, 2, s)?);
                }
                let mut rep =
                    VerificationReport::new(&id, 1e-9).param("seeds", *seeds).param("min_gap", worst).param("seed", seed);
                rep.require(worst >= -1e-9, format!("negative gap {worst:e}"));
                rep.lhs = Some(worst);
                Ok(rep.timed(start))
            })();
            out.push(&id, 1e-9, r);
        }
    }
}

fn extension_cmd(cmd: &ExtensionCmd, out: &mut Outcome) {
    match cmd {
        ExtensionCmd::Limit { k, b, t, tol } => {
            let id = format!("calc-limit:k={k}:B={b}");
            let r = (|| {
                let start = Instant::now();
                let lim = extension::calc_limit(&CalcLimitCase { k: *k, b: *b, t_values: t.0.clone() })?;
                let last = lim.values.last().map_or(f64::NAN, |v| v.1);
                let mut rep = VerificationReport::new(&id, *tol)
                    .with_sides(last, lim.target)
                    .param("t", lim.values.iter().map(|v| v.0).collect::<Vec<_>>())
                    .param("values", lim.values.iter().map(|v| v.1).collect::<Vec<_>>())
                    .param("monotone", lim.monotone);
                rep.residual("last_error", (last - lim.target).abs());
                out.plot.extend(lim.values.iter().map(|&(t, v)| (t, v, lim.target)));
                Ok(rep.timed(start))
            })();
            out.push(&id, *tol, r);
        }
        ExtensionCmd::Demo { profile: name, f0, t, degree, tol } => {
            for &tv in &t.0 {
                let id = format!("extension:{name}:t={tv}");
                let r = (|| {
                    let start = Instant::now();
                    let case = ExtensionCase {
                        c_profile: profile::profile(name)?,
                        c_label: name.clone(),
                        f0: Complex64::new(*f0, 0.0),
                        t: tv,
                    };
                    let o = extension::extend_via_division(&case, *degree)?;
                    let mut rep = VerificationReport::new(&id, *tol)
                        .with_sides(o.energy, o.bound)
                        .param("t", tv)
                        .param("degree", *degree)
                        .param("g_at_zero", o.g_at_zero);
                    rep.require(o.energy <= o.bound * (1.0 + *tol), "energy exceeds the sharp bound");
                    out.plot.push((tv, o.energy, o.bound));
                    Ok(rep.timed(start))
                })();
                out.push(&id, *tol, r);
            }
        }
        ExtensionCmd::Meanvalue { phi, x, a, eps, tol } => {
            let r = (|| {
                if x.0.len() != 2 * a.0.len() {
                    return Err(SdlError::DimensionMismatch { left: 2 * a.0.len(), right: x.0.len() });
                }
                let center: Vec<Complex64> = x.0.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
                let mut rep = extension::mean_value_test(&profile::phi(phi)?, &center, &diagonal(&a.0), &eps.0, *tol)?;
                rep.set_param("phi", phi.clone());
                Ok(rep)
            })();
            out.push("mean-value", *tol, r);
        }
        ExtensionCmd::ThmD { phi, a, theta, f } => {
            let r = (|| {
                let start = Instant::now();
                let n = a.0.len();
                let fp = MultiPoly::from_terms(
                    n,
                    f.0.iter().enumerate().map(|(k, &c)| {
                        let mut e = vec![0u32; n];
                        e[0] = k as u32;
                        (e, Complex64::new(c, 0.0))
                    }),
                )?;
                let gp = MultiPoly::one(n).sub(&fp)?;
                let (lhs, rhs) =
                    extension::theorem_d_functional(profile::optional_phi(phi.as_deref())?, &diagonal(&a.0), *theta, &fp, &gp)?;
                let rep = VerificationReport::new("two-weight-functional", 0.0)
                    .with_sides(lhs, rhs)
                    .param("theta", *theta)
                    .note("evaluation only; no inequality is asserted");
                Ok(rep.timed(start))
            })();
            out.push("two-weight-functional", 0.0, r);
        }
    }
}

fn verify_cmd(cmd: &VerifyCmd, out: &mut Outcome) {
    match cmd {
        VerifyCmd::Example { id, theta, degree, tol } => {
            let r = suite::example(id, *theta, *degree, *tol);
            if let Ok(rep) = &r {
                if let (Some(l), Some(rh)) = (rep.lhs, rep.rhs) {
                    out.plot.push((theta.unwrap_or(PI / 3.0), l, rh));
                }
            }
            out.push(id, tol.unwrap_or(2e-3), r);
        }
        VerifyCmd::All => out.reports.extend(suite::all()),
    }
}
