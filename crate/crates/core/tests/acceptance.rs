//! Runs the ten acceptance criteria and prints one line per criterion.
//! Each criterion combines the library's own report with oracles written here.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use sdl_core::bergman::CMatrix;
use sdl_core::extension::{self, CalcLimitCase, ExtensionCase};
use sdl_core::positivity::{self, BetaTensor, HermitianTensorForm};
use sdl_core::suite;
use sdl_core::triples::{self, real_fn};
use sdl_core::{MultiPoly, VerificationReport};

type Checks = Vec<(bool, String)>;

fn check(out: &mut Checks, ok: bool, what: impl Into<String>) {
    out.push((ok, what.into()));
}

fn near(out: &mut Checks, what: &str, value: f64, target: f64, tol: f64) {
    let err = (value - target).abs();
    check(out, err <= tol, format!("{what}: {value} vs {target} (err {err:.2e}, tol {tol:e})"));
}

// ---- oracles -------------------------------------------------------------

/// Central differences of `D' = -C` and `(SD)' = -D`.
fn ode_by_differences() -> Checks {
    let mut out = Checks::new();
    let h = 1e-5;
    for tr in triples::catalog_instances() {
        let mut worst: f64 = 0.0;
        for t in [-8.0, -3.0, -1.0, -0.3, -0.05] {
            let t = t + tr.hi.min(0.0);
            let dd = (tr.d(t + h) - tr.d(t - h)) / (2.0 * h);
            let dsd = (tr.s(t + h) * tr.d(t + h) - tr.s(t - h) * tr.d(t - h)) / (2.0 * h);
            let scale = 1.0 + tr.c(t).abs() + tr.d(t).abs();
            worst = worst.max((dd + tr.c(t)).abs() / scale).max((dsd + tr.d(t)).abs() / scale);
        }
        check(&mut out, worst < 1e-6, format!("finite differences for {}: {worst:.1e}", tr.name));
    }
    out
}

/// Dense KKT solve of the truncated one-variable problem with `g = (cos θ, z sin θ)` and `qexp(q)`:
/// the lhs weight is `|g|^{2(q-1)}` and `‖zʲ‖² = π∫₀¹ sʲ (cos² + sin² s)^{q-1} ds`.
fn brute_force_energy(theta: f64, q: u32, f: &[f64], degree: usize) -> f64 {
    let (c, s) = (theta.cos(), theta.sin());
    let (c2, s2) = (c * c, s * s);
    let gram = |j: usize| -> f64 {
        // binomial expansion of (c² + s²x)^{q-1}
        let m = q - 1;
        (0..=m)
            .map(|i| {
                let binom = (0..i).fold(1.0, |acc, k| acc * (m - k) as f64 / (k + 1) as f64);
                binom * c2.powi((m - i) as i32) * s2.powi(i as i32) / (j + i as usize + 1) as f64
            })
            .sum::<f64>()
            * PI
    };
    let nv = 2 * (degree + 1);
    let nc = degree + 2;
    let mut kkt = DMatrix::<f64>::zeros(nv + nc, nv + nc);
    let mut rhs = DVector::<f64>::zeros(nv + nc);
    for j in 0..=degree {
        kkt[(j, j)] = 2.0 * gram(j);
        kkt[(degree + 1 + j, degree + 1 + j)] = 2.0 * gram(j);
    }
    for k in 0..nc {
        let row = nv + k;
        if k <= degree {
            kkt[(row, k)] = c;
            kkt[(k, row)] = c;
        }
        if k >= 1 {
            kkt[(row, degree + k)] = s;
            kkt[(degree + k, row)] = s;
        }
        rhs[row] = f.get(k).copied().unwrap_or(0.0);
    }
    let x = kkt.full_piv_lu().solve(&rhs).expect("nonsingular KKT system");
    (0..=degree).map(|j| gram(j) * (x[j].powi(2) + x[degree + 1 + j].powi(2))).sum()
}

fn brute_force_agreement() -> Checks {
    let mut out = Checks::new();
    for q in [1u32, 2] {
        for degree in 1..=4 {
            let theta = 0.3 + 0.15 * degree as f64;
            let f = [1.0, 0.5];
            let poly = MultiPoly::from_terms(1, [(vec![0], Complex64::new(1.0, 0.0)), (vec![1], Complex64::new(0.5, 0.0))])
                .unwrap();
            let g = vec![
                MultiPoly::constant(1, Complex64::new(theta.cos(), 0.0)),
                MultiPoly::var(1, 0).scale(Complex64::new(theta.sin(), 0.0)),
            ];
            let p = sdl_core::division::DivisionProblem::new(
                sdl_core::Domain::ball(1),
                g,
                poly,
                triples::qexp(q as f64),
                degree,
            )
            .unwrap();
            let lib = p.minimal_solution().map(|s| s.energy).unwrap_or(f64::NAN);
            let oracle = brute_force_energy(theta, q, &f, degree);
            let rel = (lib - oracle).abs() / oracle;
            check(&mut out, rel < 1e-9, format!("brute force q={q} N={degree}: {lib} vs {oracle} (rel {rel:.1e})"));
        }
    }
    out
}

fn fs_value(u: &CMatrix) -> f64 {
    // δᵢⱼδₖₗ + δᵢₗδₖⱼ gives |u|² + Re Σ u[i,k] conj(u[k,i])
    let mut swap = Complex64::new(0.0, 0.0);
    for i in 0..u.nrows() {
        for k in 0..u.ncols() {
            swap += u[(i, k)] * u[(k, i)].conj();
        }
    }
    u.norm_squared() + swap.re
}

fn random_rank(rng: &mut ChaCha8Rng, p: usize, r: usize, m: usize) -> CMatrix {
    let mut z = || Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng));
    let v = CMatrix::from_fn(p, m, |_, _| z());
    let w = CMatrix::from_fn(r, m, |_, _| z());
    &v * w.transpose()
}

fn positivity_oracles() -> Checks {
    let mut out = Checks::new();
    let fs = HermitianTensorForm::fubini_study(2);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut sampled = [f64::INFINITY; 2];
    for _ in 0..100_000 {
        for m in 1..=2 {
            let u = random_rank(&mut rng, 2, 2, m);
            sampled[m - 1] = sampled[m - 1].min(fs_value(&u) / u.norm_squared());
        }
    }
    let (one, _) = positivity::rank_m_min(&fs, 1, 20, 3).unwrap();
    let (two, witness) = positivity::rank_m_min(&fs, 2, 20, 3).unwrap();
    check(&mut out, sampled[0] > 0.1, format!("sampled rank-1 minimum {:.4} is positive", sampled[0]));
    check(&mut out, one <= sampled[0] + 1e-9, format!("rank-1 minimizer {one:.6} at or below sampling {:.6}", sampled[0]));
    check(&mut out, two <= sampled[1] + 1e-9, format!("rank-2 minimizer {two:.2e} at or below sampling {:.2e}", sampled[1]));
    let u = witness.dense();
    let direct = fs_value(&u) / u.norm_squared();
    check(&mut out, direct < 1e-6, format!("rank-2 witness evaluated directly: {direct:.2e}"));

    // r_Q = 1: q·‖u bᵀ‖² - |Tr(u bᵀ)|² ≥ 0 by Cauchy–Schwarz on the rank-q matrix u bᵀ
    let mut worst = f64::INFINITY;
    let mut mismatch: f64 = 0.0;
    for seed in 0..100u64 {
        for (r_s, n) in [(2, 2), (3, 2), (2, 1)] {
            let beta = BetaTensor::random(1, r_s, n, seed);
            let b = CMatrix::from_fn(r_s, n, |l, j| beta.get(0, l, j));
            for q in 1..=n.min(r_s) {
                let u = random_rank(&mut rng, r_s, n, q);
                let ub = &u * b.transpose();
                let cs = q as f64 * ub.norm_squared() - ub.trace().norm_sqr();
                worst = worst.min(cs / u.norm_squared());
                mismatch = mismatch.max((beta.gap_form(q).eval(&u) - cs).abs() / (1.0 + cs.abs()));
                let found = positivity::lemma_skoda_gap(&beta, q, 2, seed).unwrap();
                worst = worst.min(found);
            }
        }
    }
    check(&mut out, worst >= -1e-9, format!("rank-one Cauchy–Schwarz gap minimum {worst:.2e}"));
    check(&mut out, mismatch < 1e-10, format!("gap form matches the Cauchy–Schwarz expression ({mismatch:.1e})"));
    out
}

fn extension_oracles() -> Checks {
    let mut out = Checks::new();
    // ∫₀¹ 2k r^{2k-1}/(a + b r^{2k})² dr = 1/(a(a+b)), so the value is (π^k/k!)(1+t)/(1+t e^B)
    for (k, b, tol) in [(1usize, 0.0, 1e-4), (2, 0.5, 1e-3)] {
        let ts = vec![1e2, 1e4, 1e6];
        let lim = extension::calc_limit(&CalcLimitCase { k, b, t_values: ts.clone() }).unwrap();
        let unit = PI.powi(k as i32) / (1..=k).product::<usize>() as f64;
        for (&t, &(_, v)) in ts.iter().zip(&lim.values) {
            near(&mut out, &format!("calc_limit k={k} B={b} t={t:e}"), v, unit * (1.0 + t) / (1.0 + t * b.exp()), 1e-9);
        }
        near(&mut out, &format!("calc_limit k={k} B={b} limit"), lim.values[2].1, unit * (-b).exp(), tol);
    }
    let case = ExtensionCase { c_profile: real_fn(|_| 1.0), c_label: "one".into(), f0: Complex64::new(1.0, 0.0), t: 1e4 };
    let ext = extension::extend_via_division(&case, 12).unwrap();
    // with c ≡ 1 the energy is ‖F‖² on the disk: π Σ|f_k|²/(k+1)
    let direct: f64 = ext.extension.terms().map(|(a, c)| PI * c.norm_sqr() / (a[0] + 1) as f64).sum();
    near(&mut out, "extension energy by monomial norms", ext.energy, direct, 1e-10);
    near(&mut out, "extension energy vs π", direct, PI, 1e-2);
    check(&mut out, ext.g_at_zero < 1e-8, format!("|G(0)| = {:.1e}", ext.g_at_zero));
    out
}

/// Closed-form moments: skoda(δ) has `∫₀¹ r·C = ∫₀¹ r·D = 1/(2-2δ)`, qexp(1) has `1/4` and `∫r³D = ½∫r³C = 1/12`.
fn moment_oracles() -> Checks {
    let mut out = Checks::new();
    for delta in [0.25, 0.5, 0.75] {
        let tr = triples::skoda(delta);
        let exact = 1.0 / (2.0 - 2.0 * delta);
        near(&mut out, &format!("∫rC for skoda({delta})"), triples::radial_moment(&tr, 1.0, false).unwrap(), exact, 1e-9);
        near(&mut out, &format!("∫rD for skoda({delta})"), triples::radial_moment(&tr, 1.0, true).unwrap(), exact, 1e-9);
    }
    let tr = triples::qexp(1.0);
    near(&mut out, "∫rC for qexp(1)", triples::radial_moment(&tr, 1.0, false).unwrap(), 0.25, 1e-12);
    near(&mut out, "∫r³D for qexp(1)", triples::radial_moment(&tr, 3.0, true).unwrap(), 1.0 / 12.0, 1e-12);
    out
}

fn one_variable_oracles() -> Checks {
    let mut out = Checks::new();
    for theta in [PI / 6.0, PI / 4.0, PI / 3.0] {
        // the minimizer is F = (1/cos θ, 0), energy π/cos²θ; qexp(1) makes the lhs weight flat
        let oracle = brute_force_energy(theta, 1, &[1.0], 12);
        near(&mut out, &format!("dense KKT at theta={theta:.4}"), oracle, PI / theta.cos().powi(2), 1e-9);
    }
    out
}

/// Composite Simpson rule with `2m` panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / (2 * m) as f64;
    let mut acc = f(a) + f(b);
    for i in 1..2 * m {
        acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

fn rel_near(out: &mut Checks, what: &str, value: f64, target: f64, tol: f64) {
    let err = (value / target - 1.0).abs();
    check(out, err <= tol, format!("{what}: {value} vs {target} (rel err {err:.2e}, tol {tol:e})"));
}

/// In ball coordinates `w = (z₁, 2z₂)` both sides reduce to `(π²/2)∫₀¹ C(log s) ds`, Jacobian `1/4` included.
fn two_variable_oracles() -> Checks {
    let mut out = Checks::new();
    for (tr, exact) in [(triples::qexp(1.0), PI * PI / 4.0), (triples::skoda(0.5), PI * PI)] {
        let s = suite::linear_ellipsoid([1.0, 2.0], tr.clone(), 8).unwrap().estimate_sides().unwrap();
        rel_near(&mut out, &format!("lhs_min[{}]", tr.name), s.lhs_min, exact, 2e-3);
        rel_near(&mut out, &format!("rhs[{}]", tr.name), s.rhs, exact, 2e-3);
    }
    out
}

/// Beta-function values on ℂ² and closed forms on the disk for `|g|² = (1+s)/4`.
fn skoda_oracles() -> Checks {
    let mut out = Checks::new();
    let plane = division_sides(suite::skoda_plane(1.0, 8).unwrap());
    rel_near(&mut out, "plane lhs_min = π²·B(2,1)", plane.lhs_min, PI * PI / 2.0, 2e-3);
    rel_near(&mut out, "plane I1 = π²·B(2,2)", plane.i1, PI * PI / 6.0, 1e-9);
    let disk = division_sides(suite::skoda_disk(1.0, 8).unwrap());
    // I₀ = 16π∫₀¹(1+s)⁻², I₁ = 64π∫₀¹(1+s)⁻³
    rel_near(&mut out, "disk I0", disk.i0, 8.0 * PI, 1e-9);
    rel_near(&mut out, "disk I1", disk.i1, 24.0 * PI, 1e-9);
    rel_near(&mut out, "disk Skoda rhs", disk.skoda_rhs, 48.0 * PI, 1e-9);
    rel_near(&mut out, "disk refined rhs", disk.refined_rhs, 40.0 * PI, 1e-9);
    check(&mut out, disk.lhs_min <= disk.refined_rhs, format!("disk lhs_min {} below refined rhs", disk.lhs_min));
    out
}

fn division_sides(p: sdl_core::division::DivisionProblem) -> sdl_core::division::SkodaComparison {
    sdl_core::division::skoda_comparison(&p, 1.0).unwrap()
}

/// Radial integrals by Simpson: `∫|z|²dλ`, `∫½ dλ` and `π∫₀¹(e^{-s} - e^{-1})ds`.
fn dbar_oracles() -> Checks {
    use sdl_core::dbar::{DbarCase, DbarCaseId};
    let mut out = Checks::new();
    let disk = |h: &dyn Fn(f64) -> f64| simpson(|s| PI * h(s), 0.0, 1.0, 2000);
    let targets = [
        (DbarCaseId::HormanderDisk, disk(&|s| s), disk(&|_| 0.5)),
        (DbarCaseId::AprioriAffine, disk(&|s| s), disk(&|_| 0.5)),
        (DbarCaseId::AprioriHormrefine, disk(&|s| (-s).exp() - (-1.0f64).exp()), disk(&|s| (-s).exp() - (-1.0f64).exp())),
    ];
    for (id, lhs, rhs) in targets {
        let case = DbarCase::lookup(id);
        near(&mut out, &format!("lhs[{id}]"), case.lhs().unwrap(), lhs, 1e-8);
        near(&mut out, &format!("rhs[{id}]"), case.rhs().unwrap(), rhs, 1e-8);
    }
    out
}

/// With `φ ≡ 0` the squeezed ellipsoid is an equality case with both sides `(ε⁴/δ²)·π²`:
/// `2π²∫₀¹ C(log s) ds = π²` in ball coordinates times the Jacobian `ε⁴/δ²`.
fn converse_oracles() -> Checks {
    let mut out = Checks::new();
    let tr = triples::qexp(1.0);
    let delta = 0.5;
    for eps in suite::CONVERSE_EPS {
        let a = sdl_core::division::squeezed_ellipsoid(delta, eps);
        let s = sdl_core::division::division_ratio(None, &a, 6, &tr).unwrap().sides;
        let exact = eps.powi(4) / (delta * delta) * PI * PI;
        rel_near(&mut out, &format!("flat lhs_min at eps={eps}"), s.lhs_min, exact, 2e-3);
        rel_near(&mut out, &format!("flat rhs at eps={eps}"), s.rhs, exact, 2e-3);
    }
    out
}

// ---- driver --------------------------------------------------------------

struct Criterion {
    number: usize,
    title: &'static str,
    oracles: fn() -> Checks,
}

fn print_failures(rep: &VerificationReport, extra: &[(bool, String)]) {
    if !rep.passed() {
        eprintln!("    report {}: {:?}", rep.id, rep.notes);
    }
    for (ok, what) in extra {
        if !ok {
            eprintln!("    oracle: {what}");
        }
    }
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { number: 1, title: "gain-triple ODEs and sharpness", oracles: ode_by_differences },
        Criterion { number: 2, title: "integration-by-parts identities", oracles: moment_oracles },
        Criterion { number: 3, title: "one-variable division equality", oracles: one_variable_oracles },
        Criterion { number: 4, title: "two-variable division equality", oracles: two_variable_oracles },
        Criterion { number: 5, title: "Skoda constant and refined rhs", oracles: skoda_oracles },
        Criterion { number: 6, title: "dbar equalities and orthogonality", oracles: dbar_oracles },
        Criterion { number: 7, title: "converse direction", oracles: converse_oracles },
        Criterion { number: 8, title: "m-positivity and the Skoda gap", oracles: positivity_oracles },
        Criterion { number: 9, title: "extension constants", oracles: extension_oracles },
        Criterion { number: 10, title: "property suites", oracles: brute_force_agreement },
    ];
    let total = Instant::now();
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let rep = suite::criterion(c.number).expect("criterion exists");
        let extra = (c.oracles)();
        let ok = rep.passed() && extra.iter().all(|(ok, _)| *ok);
        println!(
            "criterion {:>2} {:<36} {} ({} oracle checks, {:.1}s)",
            c.number,
            c.title,
            if ok { "PASS" } else { "FAIL" },
            extra.len(),
            start.elapsed().as_secs_f64()
        );
        if !ok {
            failed += 1;
            print_failures(&rep, &extra);
        }
    }
    println!("acceptance: {}/{} passed in {:.1}s", criteria.len() - failed, criteria.len(), total.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
