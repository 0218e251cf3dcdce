//! L²-minimal solutions of `Σ gᵢFᵢ = f` over truncated polynomial spaces.
//!
//! Everything is assembled in ball coordinates. With `G = LLᴴ` the Gram
//! matrix of admissible monomials and `M` the multiplication-by-`g`
//! constraint matrix, the minimizer is `c = L^{-H} y` with `y` the
//! minimum-norm solution of `(M L^{-H}) y = f`, found through the Schur
//! complement `K = M G⁻¹ Mᴴ` and a pivoted Cholesky factorization.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bergman::{
    self, degree_of, gram_in_ball_coordinates, multi_indices, norm2, norm2_radial_coeffs, radial_norm,
    to_ball_coordinates, CMatrix, Domain, DomainKind, MultiIndex, MultiPoly, PhiFn, Region, Weight,
    DEFAULT_GRAM_RESOLUTION,
};
use crate::error::{Result, SdlError};
use crate::quad::{self, BallGrid};
use crate::triples::{GainTriple, RealFn};

pub const CONDITION_LIMIT: f64 = 1e12;
pub const FEASIBILITY_TOL: f64 = 1e-10;
const SAMPLE_POINTS: usize = 1000;
const PLANE_SAMPLE_RADIUS: f64 = 10.0;

#[derive(Clone)]
pub struct DivisionProblem {
    pub dom: Domain,
    pub g: Vec<MultiPoly>,
    pub f: MultiPoly,
    pub phi: Option<PhiFn>,
    /// Radial factor `ρ(|z|²)` multiplying both weights.
    pub profile: Option<RealFn>,
    pub q: usize,
    pub triple: GainTriple,
    pub degree: usize,
    /// Angular/radial node count for non-radial Gram assembly.
    pub resolution: usize,
}

#[derive(Clone, Debug)]
pub struct DivisionSolution {
    /// The components `Fᵢ` in the domain's own coordinates.
    pub components: Vec<MultiPoly>,
    pub energy: f64,
    pub residual: f64,
    pub condition: f64,
    pub admissible_monomials: usize,
    pub used_kkt_fallback: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sides {
    pub lhs_min: f64,
    pub rhs: f64,
    pub ratio: f64,
}

impl DivisionProblem {
    /// `q = min(n, r-1)`, no `φ`.
    pub fn new(dom: Domain, g: Vec<MultiPoly>, f: MultiPoly, triple: GainTriple, degree: usize) -> Result<Self> {
        let q = dom.n.min(g.len().saturating_sub(1));
        let p = DivisionProblem { dom, g, f, phi: None, profile: None, q, triple, degree, resolution: DEFAULT_GRAM_RESOLUTION };
        p.check_shape()?;
        Ok(p)
    }

    pub fn with_phi(mut self, phi: PhiFn) -> Self {
        self.phi = Some(phi);
        self
    }

    pub fn with_profile(mut self, rho: RealFn) -> Self {
        self.profile = Some(rho);
        self
    }

    fn base_weight(&self) -> Weight {
        Weight { radial_profile: self.profile.clone(), phi: self.phi.clone(), g_factor: None }
    }

    pub fn with_q(mut self, q: usize) -> Self {
        self.q = q;
        self
    }

    fn check_shape(&self) -> Result<()> {
        let n = self.dom.n;
        if self.g.is_empty() || self.g.iter().all(|p| p.is_zero()) {
            return Err(SdlError::BadParameter("g must not vanish identically".into()));
        }
        for p in self.g.iter().chain(std::iter::once(&self.f)) {
            if p.n() != n {
                return Err(SdlError::DimensionMismatch { left: n, right: p.n() });
            }
        }
        if self.f.degree().unwrap_or(0) > self.degree {
            return Err(SdlError::BadParameter(format!(
                "truncation degree {} is below deg f = {}",
                self.degree,
                self.f.degree().unwrap_or(0)
            )));
        }
        Ok(())
    }

    /// Checks `Φ = log|g|² < sup I` at sampled points of the domain.
    pub fn check_phi_range(&self) -> Result<()> {
        let (frame, _) = Frame::of(&self.dom)?;
        let mut rng = ChaCha8Rng::seed_from_u64(quad::DEFAULT_SEED);
        let n = self.dom.n;
        let mut w = vec![Complex64::new(0.0, 0.0); n];
        let scale = if self.dom.region() == Region::Plane { PLANE_SAMPLE_RADIUS } else { 1.0 };
        for _ in 0..SAMPLE_POINTS {
            quad::sample_ball(&mut rng, n, &mut w);
            let z = frame.to_z(&w.iter().map(|x| x * scale).collect::<Vec<_>>());
            let big_phi = norm2(&self.g, &z).ln();
            if big_phi >= self.triple.hi {
                return Err(SdlError::DomainViolation { point: big_phi, lo: f64::NEG_INFINITY, hi: self.triple.hi });
            }
        }
        Ok(())
    }

    /// `C(log x)·x^{-q}`.
    fn lhs_factor(&self) -> RealFn {
        let (c, q) = (self.triple.c.clone(), self.q as i32);
        Arc::new(move |x: f64| c(x.ln()) * x.powi(-q))
    }

    /// `(C + qD)(log x)·x^{-(q+1)}`.
    fn rhs_factor(&self) -> RealFn {
        let (c, d, q) = (self.triple.c.clone(), self.triple.d.clone(), self.q);
        Arc::new(move |x: f64| {
            let t = x.ln();
            (c(t) + q as f64 * d(t)) * x.powi(-(q as i32 + 1))
        })
    }

    pub fn minimal_solution(&self) -> Result<DivisionSolution> {
        self.check_shape()?;
        self.check_phi_range()?;
        let lhs = self.base_weight()
            .with_g_factor(self.g.clone(), self.lhs_factor());
        solve_with_weight(&self.dom, &self.g, &self.f, &lhs, self.degree, self.resolution)
    }

    pub fn rhs(&self) -> Result<f64> {
        let w = self.base_weight()
            .with_g_factor(self.g.clone(), self.rhs_factor());
        weighted_norm2(&self.dom, &self.f, &w, self.resolution)
    }

    pub fn estimate_sides(&self) -> Result<Sides> {
        let sol = self.minimal_solution()?;
        let rhs = self.rhs()?;
        Ok(Sides { lhs_min: sol.energy, rhs, ratio: ratio(sol.energy, rhs) })
    }
}

fn ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 && rhs == 0.0 {
        0.0
    } else {
        lhs / rhs
    }
}

/// Ball coordinates of a domain: `w = zL`, `z = w L⁻¹`.
struct Frame {
    l: CMatrix,
    linv: CMatrix,
    region: Region,
}

impl Frame {
    fn of(dom: &Domain) -> Result<(Frame, f64)> {
        let n = dom.n;
        match dom.kind {
            DomainKind::Ellipsoid(_) => {
                let (l, jac) = to_ball_coordinates(dom)?;
                let linv = l.clone().try_inverse().ok_or(SdlError::NotPositiveDefinite)?;
                Ok((Frame { l, linv, region: Region::Ball }, jac))
            }
            _ => Ok((
                Frame { l: CMatrix::identity(n, n), linv: CMatrix::identity(n, n), region: dom.region() },
                1.0,
            )),
        }
    }

    fn to_z(&self, w: &[Complex64]) -> Vec<Complex64> {
        let n = w.len();
        (0..n).map(|i| (0..n).map(|j| w[j] * self.linv[(j, i)]).sum()).collect()
    }

    fn poly_to_w(&self, p: &MultiPoly) -> Result<MultiPoly> {
        p.substitute_linear(&self.linv)
    }

    fn poly_to_z(&self, p: &MultiPoly) -> Result<MultiPoly> {
        p.substitute_linear(&self.l)
    }
}

/// `∫_dom |f|² W dλ`.
pub fn weighted_norm2(dom: &Domain, f: &MultiPoly, w: &Weight, resolution: usize) -> Result<f64> {
    if f.is_zero() {
        return Ok(0.0);
    }
    let (frame, jac) = Frame::of(dom)?;
    let fw = frame.poly_to_w(f)?;
    let ww = w.transported(&frame.linv)?;
    let n = dom.n;
    if let Some(rho) = ww.radial_form() {
        // monomials are orthogonal: ∫|f|²W = Σ |f_α|² ‖w^α‖²
        let mut acc = quad::NeumaierSum::default();
        for (a, c) in fw.terms() {
            let norm = radial_norm(n, frame.region, &rho, a).map_err(|e| match e {
                SdlError::NonIntegrableWeight { degree } => SdlError::NonConvergent {
                    estimate: f64::INFINITY,
                    error: f64::INFINITY,
                    max_depth: degree,
                },
                other => other,
            })?;
            acc.add(c.norm_sqr() * norm);
        }
        return Ok(acc.value() * jac);
    }
    if n > 2 {
        return Err(SdlError::UnsupportedDimension(n));
    }
    if frame.region == Region::Plane {
        return Err(SdlError::BadParameter("non-radial weights need a bounded domain".into()));
    }
    let grid = BallGrid::new(n, resolution)?;
    let mut acc = quad::NeumaierSum::default();
    let mut bad = None;
    grid.for_each(|w, wt| {
        let v = ww.eval(w) * fw.eval(w).norm_sqr();
        if !v.is_finite() && bad.is_none() {
            bad = Some(w[0].norm());
        }
        acc.add(wt * v);
    });
    if let Some(at) = bad {
        return Err(SdlError::NonFinite { at });
    }
    Ok(acc.value() * jac)
}

/// Minimum of `Σ ∫|Fᵢ|² W` over `Fᵢ` of degree `≤ N` with `Σ gᵢFᵢ = f`.
pub fn solve_with_weight(
    dom: &Domain,
    g: &[MultiPoly],
    f: &MultiPoly,
    lhs: &Weight,
    degree: usize,
    resolution: usize,
) -> Result<DivisionSolution> {
    let n = dom.n;
    let (frame, jac) = Frame::of(dom)?;
    let gw: Vec<MultiPoly> = g.iter().map(|p| frame.poly_to_w(p)).collect::<Result<_>>()?;
    let fw = frame.poly_to_w(f)?;
    let ww = lhs.transported(&frame.linv)?;

    let all = multi_indices(n, degree);
    let (indices, gram) = match ww.radial_form() {
        Some(rho) => {
            let mut kept = Vec::new();
            let mut diag = Vec::new();
            for a in &all {
                match radial_norm(n, frame.region, &rho, a) {
                    Ok(v) if v > 0.0 && v.is_finite() => {
                        kept.push(a.clone());
                        diag.push(Complex64::new(v, 0.0));
                    }
                    Ok(_) | Err(SdlError::NonIntegrableWeight { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
            (kept, CMatrix::from_diagonal(&DVector::from_vec(diag)))
        }
        None => {
            let gr = gram_in_ball_coordinates(n, frame.region, &ww, &all, resolution)?;
            (all, gr.matrix)
        }
    };
    let sol = min_norm_solve(&gw, &fw, &indices, &gram, degree)?;
    let components: Vec<MultiPoly> = sol
        .coefficients
        .iter()
        .map(|c| {
            let p = MultiPoly::from_terms(n, indices.iter().cloned().zip(c.iter().cloned()))?;
            frame.poly_to_z(&p.pruned(0.0))
        })
        .collect::<Result<_>>()?;
    let mut sum = MultiPoly::zero(n);
    for (gi, fi) in g.iter().zip(&components) {
        sum = sum.add(&gi.mul(fi)?)?;
    }
    let residual = sum.sub(f)?.max_abs_coeff();
    Ok(DivisionSolution {
        components,
        energy: sol.energy * jac,
        residual: residual.max(sol.residual),
        condition: sol.condition,
        admissible_monomials: indices.len(),
        used_kkt_fallback: sol.used_fallback,
    })
}

pub(crate) struct RawSolution {
    pub coefficients: Vec<Vec<Complex64>>,
    pub energy: f64,
    pub residual: f64,
    pub condition: f64,
    pub used_fallback: bool,
}

/// Constraint rows: every multi-index reachable by `gᵢ·w^α` or present in `f`.
pub(crate) fn constraint_system(
    g: &[MultiPoly],
    f: &MultiPoly,
    indices: &[MultiIndex],
) -> (Vec<MultiIndex>, CMatrix, DVector<Complex64>) {
    let mut rows: Vec<MultiIndex> = Vec::new();
    let mut pos: HashMap<MultiIndex, usize> = HashMap::new();
    let mut push = |b: MultiIndex, rows: &mut Vec<MultiIndex>| {
        if !pos.contains_key(&b) {
            pos.insert(b.clone(), rows.len());
            rows.push(b);
        }
    };
    for (b, _) in f.terms() {
        push(b.clone(), &mut rows);
    }
    for gi in g {
        for (e, _) in gi.terms() {
            for a in indices {
                push(a.iter().zip(e).map(|(x, y)| x + y).collect(), &mut rows);
            }
        }
    }
    // deterministic order: graded, as for the unknowns
    rows.sort_by(|a, b| degree_of(a).cmp(&degree_of(b)).then_with(|| b.cmp(a)));
    let index: HashMap<&MultiIndex, usize> = rows.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let m = indices.len();
    let mut mat = CMatrix::zeros(rows.len(), g.len() * m);
    for (i, gi) in g.iter().enumerate() {
        for (e, c) in gi.terms() {
            for (ja, a) in indices.iter().enumerate() {
                let b: MultiIndex = a.iter().zip(e).map(|(x, y)| x + y).collect();
                mat[(index[&b], i * m + ja)] += c;
            }
        }
    }
    let mut rhs = DVector::zeros(rows.len());
    for (b, c) in f.terms() {
        rhs[index[b]] = *c;
    }
    (rows, mat, rhs)
}

pub(crate) fn min_norm_solve(
    g: &[MultiPoly],
    f: &MultiPoly,
    indices: &[MultiIndex],
    gram: &CMatrix,
    degree: usize,
) -> Result<RawSolution> {
    let m = indices.len();
    let r = g.len();
    let (_, mat, b) = constraint_system(g, f, indices);
    let scale = 1.0 + f.max_abs_coeff();
    let zero = || RawSolution {
        coefficients: vec![vec![Complex64::new(0.0, 0.0); m]; r],
        energy: 0.0,
        residual: 0.0,
        condition: 1.0,
        used_fallback: false,
    };
    if f.is_zero() {
        return Ok(zero());
    }
    if m == 0 {
        return Err(SdlError::InfeasibleTruncation { degree, residual: f.max_abs_coeff() });
    }
    let chol = gram.clone().cholesky();
    let Some(chol) = chol else {
        return kkt_fallback(&mat, &b, gram, r, m, degree, scale);
    };
    let l = chol.l();
    // Â = M·blockdiag(L^{-H}); computed block by block as (L⁻¹ M_iᴴ)ᴴ
    let mut a_hat = CMatrix::zeros(mat.nrows(), r * m);
    for i in 0..r {
        let block = mat.columns(i * m, m).adjoint();
        let solved = l.solve_lower_triangular(&block).ok_or(SdlError::NotPositiveDefinite)?;
        a_hat.columns_mut(i * m, m).copy_from(&solved.adjoint());
    }
    let k = &a_hat * a_hat.adjoint();
    let (lambda, condition) = pivoted_cholesky_solve(&k, &b);
    if condition > CONDITION_LIMIT {
        return Err(SdlError::IllConditioned { condition });
    }
    let y = a_hat.adjoint() * &lambda;
    let energy = y.norm_squared();
    let mut coefficients = Vec::with_capacity(r);
    for i in 0..r {
        let yi = y.rows(i * m, m).into_owned();
        let ci = l.adjoint().solve_upper_triangular(&yi).ok_or(SdlError::NotPositiveDefinite)?;
        coefficients.push(ci.iter().cloned().collect::<Vec<_>>());
    }
    let c_all = DVector::from_iterator(r * m, coefficients.iter().flatten().cloned());
    let residual = max_modulus(&(&mat * &c_all - &b));
    if residual > FEASIBILITY_TOL * scale {
        return Err(SdlError::InfeasibleTruncation { degree, residual });
    }
    Ok(RawSolution { coefficients, energy, residual, condition, used_fallback: false })
}

fn max_modulus(v: &DVector<Complex64>) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn kkt_fallback(
    mat: &CMatrix,
    b: &DVector<Complex64>,
    gram: &CMatrix,
    r: usize,
    m: usize,
    degree: usize,
    scale: f64,
) -> Result<RawSolution> {
    let nu = r * m;
    let p = mat.nrows();
    let mut kkt = CMatrix::zeros(nu + p, nu + p);
    for i in 0..r {
        kkt.view_mut((i * m, i * m), (m, m)).copy_from(gram);
    }
    kkt.view_mut((0, nu), (nu, p)).copy_from(&mat.adjoint());
    kkt.view_mut((nu, 0), (p, nu)).copy_from(mat);
    let mut rhs = DVector::zeros(nu + p);
    rhs.rows_mut(nu, p).copy_from(b);
    let lu = kkt.full_piv_lu();
    let sol = lu.solve(&rhs).ok_or(SdlError::IllConditioned { condition: f64::INFINITY })?;
    let c_all = sol.rows(0, nu).into_owned();
    let residual = max_modulus(&(mat * &c_all - b));
    if residual > FEASIBILITY_TOL * scale {
        return Err(SdlError::InfeasibleTruncation { degree, residual });
    }
    let mut energy = 0.0;
    let mut coefficients = Vec::with_capacity(r);
    for i in 0..r {
        let ci = c_all.rows(i * m, m).into_owned();
        energy += (ci.adjoint() * gram * &ci)[(0, 0)].re;
        coefficients.push(ci.iter().cloned().collect());
    }
    Ok(RawSolution { coefficients, energy, residual, condition: f64::NAN, used_fallback: true })
}

/// Solves `Kλ = b` for Hermitian PSD `K` by Cholesky with diagonal pivoting,
/// dropping numerically zero pivots. Returns `λ` and the pivot-ratio
/// condition estimate of the retained block.
pub fn pivoted_cholesky_solve(k: &CMatrix, b: &DVector<Complex64>) -> (DVector<Complex64>, f64) {
    let p = k.nrows();
    let mut a = k.clone();
    let mut perm: Vec<usize> = (0..p).collect();
    let max0 = (0..p).map(|i| a[(i, i)].re).fold(0.0, f64::max);
    let drop_tol = 10.0 * p as f64 * f64::EPSILON * max0;
    let mut l = CMatrix::zeros(p, p);
    let mut rank = 0;
    let (mut dmax, mut dmin) = (0.0f64, f64::INFINITY);
    for j in 0..p {
        let (piv, val) = (j..p).map(|i| (i, a[(i, i)].re)).fold((j, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
        if !(val > drop_tol) {
            break;
        }
        if piv != j {
            a.swap_rows(j, piv);
            a.swap_columns(j, piv);
            l.swap_rows(j, piv);
            perm.swap(j, piv);
        }
        let d = val.sqrt();
        dmax = dmax.max(val);
        dmin = dmin.min(val);
        l[(j, j)] = Complex64::new(d, 0.0);
        for i in j + 1..p {
            l[(i, j)] = a[(i, j)] / d;
        }
        for i in j + 1..p {
            let lij = l[(i, j)];
            for c in j + 1..=i {
                let v = lij * l[(c, j)].conj();
                a[(i, c)] -= v;
                if c != i {
                    a[(c, i)] = a[(i, c)].conj();
                }
            }
            a[(i, i)].im = 0.0;
        }
        rank += 1;
    }
    let mut lambda = DVector::zeros(p);
    if rank == 0 {
        return (lambda, 1.0);
    }
    let lr = l.view((0, 0), (rank, rank)).into_owned();
    let br = DVector::from_iterator(rank, perm[..rank].iter().map(|&i| b[i]));
    let z = lr.solve_lower_triangular(&br).expect("positive pivots");
    let x = lr.adjoint().solve_upper_triangular(&z).expect("positive pivots");
    for (t, &i) in perm[..rank].iter().enumerate() {
        lambda[i] = x[t];
    }
    (lambda, dmax / dmin)
}

/// Values for the Skoda-type comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SkodaComparison {
    pub skoda_rhs: f64,
    pub refined_rhs: f64,
    pub lhs_min: f64,
    pub i0: f64,
    pub i1: f64,
    /// Whether `|g| < 1` held at every sampled point.
    pub g_below_one: bool,
}

pub fn skoda_comparison(p: &DivisionProblem, eps: f64) -> Result<SkodaComparison> {
    if !(eps > 0.0) {
        return Err(SdlError::BadParameter(format!("ε must be positive, got {eps}")));
    }
    let q = p.q as f64;
    let g_below_one = sampled_norm2_max(p)? < 1.0;
    let base = p.base_weight();
    let lhs_w = base.clone().with_g_power(p.g.clone(), -(q + eps));
    let i1_w = base.clone().with_g_power(p.g.clone(), -(q + 1.0 + eps));
    let i0_w = base.with_g_power(p.g.clone(), -(q + 1.0));
    let sol = solve_with_weight(&p.dom, &p.g, &p.f, &lhs_w, p.degree, p.resolution)?;
    let i1 = weighted_norm2(&p.dom, &p.f, &i1_w, p.resolution)?;
    let i0 = weighted_norm2(&p.dom, &p.f, &i0_w, p.resolution)?;
    let skoda_rhs = (1.0 + q / eps) * i1;
    Ok(SkodaComparison {
        skoda_rhs,
        refined_rhs: skoda_rhs - q / eps * i0,
        lhs_min: sol.energy,
        i0,
        i1,
        g_below_one,
    })
}

fn sampled_norm2_max(p: &DivisionProblem) -> Result<f64> {
    let (frame, _) = Frame::of(&p.dom)?;
    let mut rng = ChaCha8Rng::seed_from_u64(quad::DEFAULT_SEED);
    let n = p.dom.n;
    let scale = if frame.region == Region::Plane { PLANE_SAMPLE_RADIUS } else { 1.0 };
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    let mut worst: f64 = 0.0;
    for _ in 0..SAMPLE_POINTS {
        quad::sample_ball(&mut rng, n, &mut w);
        let z = frame.to_z(&w.iter().map(|x| x * scale).collect::<Vec<_>>());
        worst = worst.max(norm2(&p.g, &z));
    }
    Ok(worst)
}

/// Outcome of the ratio functional on an ellipsoid.
#[derive(Clone, Debug)]
pub struct RatioOutcome {
    pub sides: Sides,
    pub solution: DivisionSolution,
}

/// The ratio functional on `E(A)` with `g = ζ` the ball coordinates
/// (`ζ = zL`), `f = Σ ζᵢ` and `q = n - 1`.
pub fn division_ratio(phi: Option<PhiFn>, a: &CMatrix, degree: usize, triple: &GainTriple) -> Result<RatioOutcome> {
    division_ratio_with(phi, a, degree, triple, DEFAULT_GRAM_RESOLUTION)
}

pub fn division_ratio_with(
    phi: Option<PhiFn>,
    a: &CMatrix,
    degree: usize,
    triple: &GainTriple,
    resolution: usize,
) -> Result<RatioOutcome> {
    let dom = Domain::ellipsoid(a.clone())?;
    let n = dom.n;
    let (l, _) = to_ball_coordinates(&dom)?;
    // ζᵢ = Σⱼ zⱼ L[j, i]
    let g: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(n, i).substitute_linear(&l)).collect::<Result<_>>()?;
    let mut f = MultiPoly::zero(n);
    for gi in &g {
        f = f.add(gi)?;
    }
    let mut p = DivisionProblem::new(dom, g, f, triple.clone(), degree)?.with_q(n - 1);
    p.resolution = resolution;
    if let Some(phi) = phi {
        p = p.with_phi(phi);
    }
    let solution = p.minimal_solution()?;
    let rhs = p.rhs()?;
    Ok(RatioOutcome { sides: Sides { lhs_min: solution.energy, rhs, ratio: ratio(solution.energy, rhs) }, solution })
}

/// The ellipsoid `|w̃|² < ε²` with `w̃ = (δ·x₁, x₂)`: `A = diag(δ²/ε², 1/ε²)`.
pub fn squeezed_ellipsoid(delta: f64, eps: f64) -> CMatrix {
    let d = [delta * delta / (eps * eps), 1.0 / (eps * eps)];
    CMatrix::from_diagonal(&DVector::from_iterator(2, d.iter().map(|&x| Complex64::new(x, 0.0))))
}

/// `φ = c·(|z₂|² - |z₁|²)`.
pub fn saddle_phi(c: f64) -> PhiFn {
    bergman::phi_fn(move |z| c * (z[1].norm_sqr() - z[0].norm_sqr()))
}

/// First-order data of the ratio functional for `φ = ε²·Σ bⱼ|ζⱼ|²` in ball coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConverseAsymptotics {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub w: f64,
    pub sigma: f64,
    pub n: usize,
}

impl ConverseAsymptotics {
    pub fn new(triple: &GainTriple, n: usize, b: &[f64]) -> Result<Self> {
        let c1 = crate::triples::radial_moment(triple, 1.0, false)?;
        let c3 = crate::triples::radial_moment(triple, 3.0, false)?;
        let nf = n as f64;
        // surface area of the unit sphere in ℂⁿ, and ∫ |ζⱼ|² dμ = σ/n on it
        let sigma = 2.0 * PI.powi(n as i32) / crate::poly::factorial(n as u32 - 1);
        let w = b.iter().sum::<f64>() * sigma / nf;
        Ok(ConverseAsymptotics { m1: c1, m2: nf * c3, m3: 0.5 * (nf + 1.0) * c3, w, sigma, n })
    }

    pub fn predicted_ratio(&self, eps: f64) -> f64 {
        let base = self.n as f64 * self.m1 * self.sigma;
        let e2w = eps * eps * self.w;
        (base - self.m2 * e2w) / (base - self.m3 * e2w)
    }
}

/// Ball-coordinate coefficients `b` of `saddle_phi(c)` on `squeezed_ellipsoid(δ, ε)`, divided by `ε²`.
pub fn saddle_coefficients(c: f64, delta: f64) -> [f64; 2] {
    [-c / (delta * delta), c]
}

/// `|g|²` written as a polynomial in `|w|²` when radial (re-exported for reports).
pub fn radial_norm2(g: &[MultiPoly]) -> Option<Vec<f64>> {
    norm2_radial_coeffs(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triples::{log_triple, qexp, skoda};

    fn cx(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn ex172(theta: f64, degree: usize) -> DivisionProblem {
        let g = vec![MultiPoly::constant(1, cx(theta.cos())), MultiPoly::var(1, 0).scale(cx(theta.sin()))];
        DivisionProblem::new(Domain::ball(1), g, MultiPoly::one(1), qexp(1.0), degree).unwrap()
    }

    #[test]
    fn example_two_minimizer() {
        let theta = PI / 3.0;
        let p = ex172(theta, 10);
        let sol = p.minimal_solution().unwrap();
        assert!((sol.energy - 4.0 * PI).abs() < 1e-9, "{}", sol.energy);
        assert!((sol.components[0].coeff(&[0]) - cx(2.0)).norm() < 1e-10);
        assert!(sol.components[1].max_abs_coeff() < 1e-10);
        let s = p.estimate_sides().unwrap();
        assert!((s.rhs - 4.0 * PI).abs() < 1e-9);
        assert!((s.ratio - 1.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_truncation() {
        let p = DivisionProblem::new(Domain::ball(1), vec![MultiPoly::var(1, 0)], MultiPoly::one(1), log_triple(), 5)
            .unwrap();
        assert_eq!(p.minimal_solution().unwrap_err().name(), "InfeasibleTruncation");
    }

    #[test]
    fn zero_datum() {
        let mut p = ex172(0.7, 4);
        p.f = MultiPoly::zero(1);
        let s = p.estimate_sides().unwrap();
        assert_eq!((s.lhs_min, s.rhs, s.ratio), (0.0, 0.0, 0.0));
    }

    #[test]
    fn two_variable_candidate_bound() {
        let g = vec![MultiPoly::var(2, 0), MultiPoly::var(2, 1)];
        let p = DivisionProblem::new(Domain::ball(2), g, MultiPoly::var(2, 0), skoda(0.5), 4).unwrap();
        let sol = p.minimal_solution().unwrap();
        let candidate = weighted_norm2(
            &p.dom,
            &MultiPoly::one(2),
            &Weight::unit().with_g_factor(p.g.clone(), p.lhs_factor()),
            32,
        )
        .unwrap();
        assert!(sol.energy <= candidate * (1.0 + 1e-12));
        assert!(sol.residual < 1e-10);
    }

    #[test]
    fn example_one_equality() {
        for tr in [qexp(1.0), skoda(0.5)] {
            let g = vec![MultiPoly::var(2, 0), MultiPoly::var(2, 1).scale(cx(2.0))];
            let f = g[0].add(&g[1]).unwrap();
            let dom = Domain::diagonal_ellipsoid(&[1.0, 4.0]).unwrap();
            let p = DivisionProblem::new(dom, g, f, tr.clone(), 8).unwrap();
            let s = p.estimate_sides().unwrap();
            assert!((s.ratio - 1.0).abs() < 1e-8, "{}: {:?}", tr.name, s);
        }
    }

    #[test]
    fn skoda_example_on_plane() {
        let g = vec![MultiPoly::one(2), MultiPoly::var(2, 0), MultiPoly::var(2, 1)];
        let p = DivisionProblem::new(Domain::plane(2), g, MultiPoly::one(2), skoda(1.0), 8).unwrap();
        let c = skoda_comparison(&p, 1.0).unwrap();
        assert!(!c.g_below_one);
        assert!((c.lhs_min / c.i1 - 3.0).abs() < 1e-8, "{:?}", c);
    }

    #[test]
    fn refined_skoda_on_disk() {
        let g = vec![MultiPoly::constant(1, cx(0.5)), MultiPoly::var(1, 0).scale(cx(0.5))];
        let p = DivisionProblem::new(Domain::ball(1), g, MultiPoly::one(1), skoda(1.0), 8).unwrap();
        let c = skoda_comparison(&p, 1.0).unwrap();
        assert!(c.g_below_one);
        assert!(c.lhs_min <= c.refined_rhs && c.refined_rhs < c.skoda_rhs, "{:?}", c);
    }

    #[test]
    fn ratio_functional_flat_and_saddle() {
        let a = squeezed_ellipsoid(1.0, 1.0);
        let flat = division_ratio(None, &a, 6, &qexp(1.0)).unwrap();
        assert!((flat.sides.ratio - 1.0).abs() < 1e-8);
        let (delta, eps, c) = (0.5, 0.2, 0.3);
        let out = division_ratio(Some(saddle_phi(c)), &squeezed_ellipsoid(delta, eps), 6, &qexp(1.0)).unwrap();
        assert!(out.sides.ratio > 1.0 + 1e-3, "{:?}", out.sides);
        let asym = ConverseAsymptotics::new(&qexp(1.0), 2, &saddle_coefficients(c, delta)).unwrap();
        assert!((asym.m1 - 0.25).abs() < 1e-12);
        let pred = asym.predicted_ratio(eps) - 1.0;
        assert!(((out.sides.ratio - 1.0) / pred - 1.0).abs() < 0.2, "{} vs {}", out.sides.ratio - 1.0, pred);
    }

    #[test]
    fn pivoted_cholesky_handles_rank_deficiency() {
        let v = DVector::from_vec(vec![cx(1.0), cx(2.0), cx(0.0)]);
        let k = &v * v.adjoint();
        let b = &v * cx(3.0);
        let (lambda, cond) = pivoted_cholesky_solve(&k, &b);
        assert!((&k * &lambda - &b).norm() < 1e-12);
        assert_eq!(cond, 1.0);
    }
}
