//! m-positivity of Hermitian forms on `V ⊗ W`, searched over rank-m tensors.
//!
//! A form is stored as `B[i,j,k,l]` with `B(u,u) = Σ B[i,j,k,l]·u[i,k]·conj(u[j,l])`.
//! On `vec(u)` (row-major, `(i,k) ↦ i·dim W + k`) this is `vᴴHv` with
//! `H[(j,l),(i,k)] = B[i,j,k,l]`.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::bergman::CMatrix;
use crate::error::{Result, SdlError};

pub const MAX_SWEEPS: usize = 200;
pub const STALL_TOL: f64 = 1e-12;
pub const SEMIPOSITIVE_TOL: f64 = 1e-9;
const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct HermitianTensorForm {
    pub dims: (usize, usize),
    coeffs: Vec<Complex64>,
}

/// `u = Σₐ vₐ ⊗ wₐ` with the `vₐ`, `wₐ` as matrix columns.
#[derive(Clone, Debug, PartialEq)]
pub struct RankTensor {
    pub v: CMatrix,
    pub w: CMatrix,
}

impl RankTensor {
    pub fn dense(&self) -> CMatrix {
        &self.v * self.w.transpose()
    }
}

impl HermitianTensorForm {
    /// Builds a form from `B[i,j,k,l]`, rejecting non-Hermitian input.
    pub fn from_fn(dims: (usize, usize), b: impl Fn(usize, usize, usize, usize) -> Complex64) -> Result<Self> {
        let (p, r) = dims;
        if p == 0 || r == 0 {
            return Err(SdlError::BadParameter("tensor factors must be nonzero-dimensional".into()));
        }
        let mut coeffs = Vec::with_capacity(p * p * r * r);
        for i in 0..p {
            for j in 0..p {
                for k in 0..r {
                    for l in 0..r {
                        coeffs.push(b(i, j, k, l));
                    }
                }
            }
        }
        let form = HermitianTensorForm { dims, coeffs };
        form.check_hermitian()?;
        Ok(form)
    }

    fn check_hermitian(&self) -> Result<()> {
        let (p, r) = self.dims;
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max);
        for i in 0..p {
            for j in 0..p {
                for k in 0..r {
                    for l in 0..r {
                        let d = self.get(i, j, k, l) - self.get(j, i, l, k).conj();
                        if d.norm() > HERMITIAN_TOL * scale || !d.norm().is_finite() {
                            return Err(SdlError::BadParameter(format!(
                                "form is not Hermitian at ({i},{j},{k},{l})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
        let (p, r) = self.dims;
        debug_assert!(i < p && j < p && k < r && l < r);
        self.coeffs[((i * p + j) * r + k) * r + l]
    }

    /// `Σ|u[i,k]|²`.
    pub fn identity(dims: (usize, usize)) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self::from_fn(dims, |i, j, k, l| if i == j && k == l { one } else { zero }).expect("hermitian")
    }

    /// `Σ d[i][k]·|u[i,k]|²`.
    pub fn diagonal(d: &[Vec<f64>]) -> Result<Self> {
        let p = d.len();
        let r = d.first().map_or(0, |row| row.len());
        if d.iter().any(|row| row.len() != r) {
            return Err(SdlError::BadParameter("diagonal rows differ in length".into()));
        }
        Self::from_fn((p, r), |i, j, k, l| {
            if i == j && k == l {
                Complex64::new(d[i][k], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// `|u[0,0]|² - |u[1,1]|²` on `ℂ² ⊗ ℂ²`.
    pub fn diag_example() -> Self {
        Self::diagonal(&[vec![1.0, 0.0], vec![0.0, -1.0]]).expect("rectangular")
    }

    /// Curvature of the Fubini–Study metric on the tangent bundle of ℙⁿ at a
    /// point: `B = δᵢⱼδₖₗ + δᵢₗδₖⱼ` on `ℂⁿ ⊗ ℂⁿ`.
    pub fn fubini_study(n: usize) -> Self {
        let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        Self::from_fn((n, n), |i, j, k, l| Complex64::new(d(i, j) * d(k, l) + d(i, l) * d(k, j), 0.0))
            .expect("hermitian")
    }

    /// The form from a nested `[i][j][k][l]` array of `[re, im]` pairs.
    pub fn from_nested(data: &[Vec<Vec<Vec<[f64; 2]>>>]) -> Result<Self> {
        let p = data.len();
        let r = data.first().and_then(|x| x.first()).map_or(0, |x| x.len());
        let shape_ok = data.iter().all(|x| {
            x.len() == p && x.iter().all(|y| y.len() == r && y.iter().all(|z| z.len() == r))
        });
        if !shape_ok {
            return Err(SdlError::BadParameter("custom form must have shape [p][p][r][r]".into()));
        }
        Self::from_fn((p, r), |i, j, k, l| {
            let [re, im] = data[i][j][k][l];
            Complex64::new(re, im)
        })
    }

    pub fn scaled(&self, c: f64) -> Self {
        HermitianTensorForm { dims: self.dims, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// `H` with `B(u,u) = vec(u)ᴴ H vec(u)`.
    pub fn matrix(&self) -> CMatrix {
        let (p, r) = self.dims;
        let mut h = CMatrix::zeros(p * r, p * r);
        for i in 0..p {
            for j in 0..p {
                for k in 0..r {
                    for l in 0..r {
                        h[(j * r + l, i * r + k)] = self.get(i, j, k, l);
                    }
                }
            }
        }
        h
    }

    /// `B(u,u)` for a dense `p×r` tensor.
    pub fn eval(&self, u: &CMatrix) -> f64 {
        let (p, r) = self.dims;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..p {
            for j in 0..p {
                for k in 0..r {
                    for l in 0..r {
                        acc += self.get(i, j, k, l) * u[(i, k)] * u[(j, l)].conj();
                    }
                }
            }
        }
        acc.re
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.dims != other.dims {
            return Err(SdlError::DimensionMismatch { left: self.dims.0 * self.dims.1, right: other.dims.0 * other.dims.1 });
        }
        Ok(HermitianTensorForm {
            dims: self.dims,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    })
}

/// Orthonormal columns whose span contains the columns of `m`.
fn orthonormal(m: &CMatrix) -> CMatrix {
    m.clone().qr().q()
}

/// Minimizes `xᴴ (Pᴴ H P) x` over unit `x`; returns the value and minimizer.
fn min_eigenpair(h: &CMatrix, p: &CMatrix) -> (f64, DVector<Complex64>) {
    let reduced = p.adjoint() * h * p;
    let reduced = (&reduced + reduced.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = reduced.symmetric_eigen();
    let (idx, val) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
    (val, eig.eigenvectors.column(idx).into_owned())
}

/// `vec(V Wᵀ) = P_V vec(W)` with `W` indexed `(k, a) ↦ k·m + a`.
fn lift_fixed_v(v: &CMatrix, r: usize) -> CMatrix {
    let (p, m) = v.shape();
    let mut out = CMatrix::zeros(p * r, r * m);
    for i in 0..p {
        for k in 0..r {
            for a in 0..m {
                out[(i * r + k, k * m + a)] = v[(i, a)];
            }
        }
    }
    out
}

/// `vec(V Wᵀ) = P_W vec(V)` with `V` indexed `(i, a) ↦ i·m + a`.
fn lift_fixed_w(w: &CMatrix, p: usize) -> CMatrix {
    let (r, m) = w.shape();
    let mut out = CMatrix::zeros(p * r, p * m);
    for i in 0..p {
        for k in 0..r {
            for a in 0..m {
                out[(i * r + k, i * m + a)] = w[(k, a)];
            }
        }
    }
    out
}

fn unvec(x: &DVector<Complex64>, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |i, a| x[i * cols + a])
}

fn alternate(h: &CMatrix, dims: (usize, usize), m: usize, v0: CMatrix) -> (f64, RankTensor) {
    let (p, r) = dims;
    let mut v = orthonormal(&v0);
    let mut best = f64::INFINITY;
    for _ in 0..MAX_SWEEPS {
        // W-step with orthonormal V, so ‖u‖ = ‖W‖
        let (_, x) = min_eigenpair(h, &lift_fixed_v(&v, r));
        let w = unvec(&x, r, m);
        // V-step with orthonormal W; u = V Wᵀ stays in the search space
        let qw = orthonormal(&w);
        let (val, y) = min_eigenpair(h, &lift_fixed_w(&qw, p));
        let stalled = best - val < STALL_TOL * (1.0 + val.abs());
        best = best.min(val);
        let vy = unvec(&y, p, m);
        if stalled {
            return (best, RankTensor { v: vy, w: qw });
        }
        v = orthonormal(&vy);
    }
    let (val, x) = min_eigenpair(h, &lift_fixed_v(&v, r));
    (best.min(val), RankTensor { v, w: unvec(&x, r, m) })
}

/// Smallest `B(u,u)` found over unit rank-`m` tensors by randomly restarted
/// alternating minimization.
pub fn rank_m_min(b: &HermitianTensorForm, m: usize, trials: usize, seed: u64) -> Result<(f64, RankTensor)> {
    let (p, r) = b.dims;
    if m < 1 || m > p.min(r) {
        return Err(SdlError::BadRank { rank: m, max: p.min(r) });
    }
    if trials == 0 {
        return Err(SdlError::BadParameter("at least one trial is needed".into()));
    }
    let h = b.matrix();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, RankTensor)> = None;
    for _ in 0..trials {
        let v0 = random_matrix(&mut rng, p, m);
        let (val, tensor) = alternate(&h, b.dims, m, v0);
        if best.as_ref().is_none_or(|(b, _)| val < *b) {
            best = Some((val, tensor));
        }
    }
    Ok(best.expect("trials >= 1"))
}

pub fn is_m_semipositive(b: &HermitianTensorForm, m: usize, trials: usize, seed: u64) -> Result<bool> {
    Ok(rank_m_min(b, m, trials, seed)?.0 >= -SEMIPOSITIVE_TOL)
}

/// `β ∈ Hom(S, Q) ⊗ Λ^{1,0}` as `beta[a][λ][j]`, `a < r_Q`, `λ < r_S`, `j < n`.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaTensor {
    pub r_q: usize,
    pub r_s: usize,
    pub n: usize,
    data: Vec<Complex64>,
}

impl BetaTensor {
    pub fn new(r_q: usize, r_s: usize, n: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != r_q * r_s * n {
            return Err(SdlError::DimensionMismatch { left: r_q * r_s * n, right: data.len() });
        }
        if data.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(SdlError::BadParameter("beta has non-finite entries".into()));
        }
        Ok(BetaTensor { r_q, r_s, n, data })
    }

    pub fn zeros(r_q: usize, r_s: usize, n: usize) -> Self {
        BetaTensor { r_q, r_s, n, data: vec![Complex64::new(0.0, 0.0); r_q * r_s * n] }
    }

    pub fn random(r_q: usize, r_s: usize, n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(&mut rng, r_q * r_s * n, 1);
        BetaTensor { r_q, r_s, n, data: m.iter().cloned().collect() }
    }

    pub fn get(&self, a: usize, lambda: usize, j: usize) -> Complex64 {
        self.data[(a * self.r_s + lambda) * self.n + j]
    }

    /// The form of `-β*∧β` on `S ⊗ ℂⁿ`: `u ↦ Σₐ |Σ_{λ,j} β[a,λ,j]·u[λ,j]|²`.
    pub fn adjoint_wedge_form(&self) -> HermitianTensorForm {
        HermitianTensorForm::from_fn((self.r_s, self.n), |lam, mu, j, k| {
            (0..self.r_q).map(|a| self.get(a, lam, j) * self.get(a, mu, k).conj()).sum()
        })
        .expect("hermitian by construction")
    }

    /// The form of `Tr(β∧β*) ⊗ Id_S`: `u ↦ Σ_{λ,a,ν} |Σⱼ β[a,ν,j]·u[λ,j]|²`.
    pub fn trace_form(&self) -> HermitianTensorForm {
        HermitianTensorForm::from_fn((self.r_s, self.n), |lam, mu, j, k| {
            if lam != mu {
                return Complex64::new(0.0, 0.0);
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..self.r_q {
                for nu in 0..self.r_s {
                    acc += self.get(a, nu, j) * self.get(a, nu, k).conj();
                }
            }
            acc
        })
        .expect("hermitian by construction")
    }

    /// `q·Tr(β∧β*) + β*∧β` as a form on `S ⊗ ℂⁿ`.
    pub fn gap_form(&self, q: usize) -> HermitianTensorForm {
        self.trace_form().scaled(q as f64).sub(&self.adjoint_wedge_form()).expect("same shape")
    }
}

/// Minimum over unit rank-`q` tensors of the Skoda-gap form.
pub fn lemma_skoda_gap(beta: &BetaTensor, q: usize, trials: usize, seed: u64) -> Result<f64> {
    if q < 1 || q > beta.n.min(beta.r_s) {
        return Err(SdlError::BadRank { rank: q, max: beta.n.min(beta.r_s) });
    }
    Ok(rank_m_min(&beta.gap_form(q), q, trials, seed)?.0)
}
