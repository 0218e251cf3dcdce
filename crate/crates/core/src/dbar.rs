//! Equality cases of the weighted ∂̄-estimate on the unit disk.
//!
//! All integrals are against Lebesgue measure. Every cataloged case is radial,
//! so `∫_disk h(|z|²) dλ = π ∫₀¹ h(s) ds`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;

use crate::error::{Result, SdlError};
use crate::quad::{self, BallGrid};
use crate::report::VerificationReport;
use crate::triples::{self, GainTriple, RealFn};

const NORMALIZATION_NOTE: &str = "disk integrals use Lebesgue measure; i dz∧dz̄ = 2 dλ";
const QUAD_TOL: f64 = 1e-12;

pub type CandidateFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DbarCaseId {
    HormanderDisk,
    AprioriAffine,
    AprioriHormrefine,
}

impl DbarCaseId {
    pub const ALL: [DbarCaseId; 3] = [DbarCaseId::HormanderDisk, DbarCaseId::AprioriAffine, DbarCaseId::AprioriHormrefine];

    pub fn as_str(self) -> &'static str {
        match self {
            DbarCaseId::HormanderDisk => "hormander-disk",
            DbarCaseId::AprioriAffine => "apriori-affine",
            DbarCaseId::AprioriHormrefine => "apriori-hormrefine",
        }
    }
}

impl fmt::Display for DbarCaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DbarCaseId {
    type Err = SdlError;

    fn from_str(s: &str) -> Result<Self> {
        DbarCaseId::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| SdlError::UnknownCase(s.to_string()))
    }
}

/// A radial ∂̄ problem on the disk with a closed-form candidate solution.
#[derive(Clone)]
pub struct DbarCase {
    pub id: DbarCaseId,
    /// Left-hand weight as a function of `s = |z|²`.
    pub weight: RealFn,
    /// Coefficient of `dz` in the candidate solution.
    pub candidate_u: CandidateFn,
    /// `D(φ)·⟨(BΛ)⁻¹f, f⟩` (or its plain analogue) as a function of `s`.
    pub data_f: RealFn,
    pub triple: Option<GainTriple>,
}

impl fmt::Debug for DbarCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DbarCase").field("id", &self.id).field("triple", &self.triple.as_ref().map(|t| &t.name)).finish()
    }
}

impl DbarCase {
    pub fn lookup(id: DbarCaseId) -> DbarCase {
        let zbar: CandidateFn = Arc::new(|z: Complex64| z.conj());
        match id {
            // φ = 2 log 1/(1-|z|²): e^{-φ} = (1-s)², ∂∂̄φ = 2/(1-s)², u = z̄/(1-s)
            DbarCaseId::HormanderDisk => DbarCase {
                id,
                weight: triples::real_fn(|s| (1.0 - s) * (1.0 - s)),
                candidate_u: Arc::new(|z: Complex64| z.conj() / (1.0 - z.norm_sqr())),
                data_f: triples::real_fn(|_| 0.5),
                triple: None,
            },
            DbarCaseId::AprioriAffine => apriori(id, triples::affine().shifted_to(1.0), zbar),
            DbarCaseId::AprioriHormrefine => apriori(id, triples::hormrefine(1.0), zbar),
        }
    }

    pub fn by_name(name: &str) -> Result<DbarCase> {
        Ok(Self::lookup(name.parse()?))
    }

    /// Adds `c·dz` to the candidate.
    pub fn perturbed(mut self, c: Complex64) -> DbarCase {
        let u = self.candidate_u.clone();
        self.candidate_u = Arc::new(move |z| u(z) + c);
        self
    }

    pub fn lhs(&self) -> Result<f64> {
        let (w, u) = (self.weight.clone(), self.candidate_u.clone());
        // radial candidates: |u|² depends on s only
        disk_integral(move |s| w(s) * u(Complex64::new(s.sqrt(), 0.0)).norm_sqr())
    }

    pub fn rhs(&self) -> Result<f64> {
        let f = self.data_f.clone();
        disk_integral(move |s| f(s))
    }
}

/// `φ = |z|²` with `C(φ)` on the left and `D(φ)` on the right; `⟨(∂∂̄|z|²Λ)⁻¹β₀, β₀⟩ ≡ 1`.
fn apriori(id: DbarCaseId, tr: GainTriple, u: CandidateFn) -> DbarCase {
    DbarCase { id, weight: tr.c.clone(), candidate_u: u, data_f: tr.d.clone(), triple: Some(tr) }
}

fn disk_integral(h: impl Fn(f64) -> f64) -> Result<f64> {
    let g = quad::Integrand1D::new(h, 0.0, 1.0);
    Ok(PI * quad::integrate_1d(&g, QUAD_TOL, quad::DEFAULT_MAX_DEPTH)?)
}

pub fn verify_dbar_equality(case: &DbarCase, tol: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    let lhs = case.lhs()?;
    let rhs = case.rhs()?;
    let mut rep = VerificationReport::new(format!("dbar-{}", case.id), tol)
        .with_sides(lhs, rhs)
        .param("case", case.id.as_str())
        .note(NORMALIZATION_NOTE);
    if let Some(tr) = &case.triple {
        rep.set_param("triple", tr.name.clone());
    }
    rep.residual("relative_gap", (lhs - rhs).abs() / rhs.abs());
    Ok(rep.timed(start))
}

/// The same equality for an arbitrary triple moved to `(-∞, 1)`, with `φ = |z|²`.
pub fn apriori_equality(tr: &GainTriple, tol: f64) -> Result<VerificationReport> {
    let tr = tr.shifted_to(1.0);
    let case = apriori(DbarCaseId::AprioriAffine, tr.clone(), Arc::new(|z: Complex64| z.conj()));
    let mut rep = verify_dbar_equality(&case, tol)?;
    rep.id = format!("dbar-apriori-{}", tr.name);
    Ok(rep)
}

/// `max_k |⟨u, z̄^k⟩_W| / ‖z^k‖_W` over `0 ≤ k ≤ K`.
pub fn orthogonality_check(case: &DbarCase, k_max: usize) -> Result<f64> {
    let grid = BallGrid::new(1, (2 * k_max + 8).max(quad::DEFAULT_BALL_RESOLUTION))?;
    let mut worst: f64 = 0.0;
    for k in 0..=k_max {
        let w = case.weight.clone();
        let norm2 = disk_integral(move |s| w(s) * s.powi(k as i32))
            .map_err(|_| SdlError::NonIntegrableWeight { degree: k })?;
        if !(norm2.is_finite() && norm2 > 0.0) {
            return Err(SdlError::NonIntegrableWeight { degree: k });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        grid.for_each(|z, wt| {
            let z0 = z[0];
            acc += (case.candidate_u)(z0) * z0.conj().powu(k as u32) * ((case.weight)(z0.norm_sqr()) * wt);
        });
        worst = worst.max(acc.norm() / norm2.sqrt());
    }
    Ok(worst)
}

/// The refined Hörmander rhs with weight `e^{-φ} - e^{-M}` against the plain one.
pub fn refined_vs_plain_hormander(phi_sup: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    if !(phi_sup >= 1.0) {
        return Err(SdlError::BadParameter(format!("M must be at least sup |z|² = 1, got {phi_sup}")));
    }
    let cut = (-phi_sup).exp();
    let refined = disk_integral(|s| (-s).exp() - cut)?;
    let plain = disk_integral(|s| (-s).exp())?;
    let lhs_min = DbarCase::lookup(DbarCaseId::AprioriHormrefine).lhs()?;
    let mut rep = VerificationReport::new("dbar-refined-vs-plain", 1e-12)
        .with_sides(refined, plain)
        .param("M", phi_sup)
        .param("lhs_min", lhs_min)
        .note(NORMALIZATION_NOTE);
    rep.require(refined < plain, "refined rhs is not below the plain rhs");
    rep.require(refined >= lhs_min * (1.0 - 1e-12), "refined rhs falls below the minimal lhs");
    Ok(rep.timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn cataloged_equalities() {
        for id in DbarCaseId::ALL {
            let rep = verify_dbar_equality(&DbarCase::lookup(id), 1e-8).unwrap();
            assert!(rep.passed(), "{rep:?}");
        }
        let h = DbarCase::lookup(DbarCaseId::HormanderDisk);
        assert!((h.lhs().unwrap() - PI / 2.0).abs() < 1e-12);
        let r = DbarCase::lookup(DbarCaseId::AprioriHormrefine);
        assert!((r.rhs().unwrap() - PI * (1.0 - 2.0 / E)).abs() < 1e-12);
    }

    #[test]
    fn names_round_trip() {
        for id in DbarCaseId::ALL {
            assert_eq!(id.as_str().parse::<DbarCaseId>().unwrap(), id);
        }
        assert_eq!(DbarCase::by_name("nope").unwrap_err().name(), "UnknownCase");
    }

    #[test]
    fn orthogonality_and_its_violation() {
        for id in DbarCaseId::ALL {
            assert!(orthogonality_check(&DbarCase::lookup(id), 10).unwrap() < 1e-8);
        }
        let bad = DbarCase::lookup(DbarCaseId::HormanderDisk).perturbed(Complex64::new(0.1, 0.0));
        assert!(orthogonality_check(&bad, 6).unwrap() > 1e-3);
    }

    #[test]
    fn refined_rhs_values() {
        let rep = refined_vs_plain_hormander(1.0).unwrap();
        assert!(rep.passed());
        assert!((rep.lhs.unwrap() - PI * (1.0 - 2.0 / E)).abs() < 1e-12);
        assert!((rep.rhs.unwrap() - PI * (1.0 - 1.0 / E)).abs() < 1e-12);
        let far = refined_vs_plain_hormander(30.0).unwrap();
        assert!((far.lhs.unwrap() - far.rhs.unwrap()).abs() < 1e-6);
        assert!(refined_vs_plain_hormander(0.5).is_err());
    }

    #[test]
    fn equality_for_every_catalog_triple() {
        for tr in triples::catalog_instances() {
            let rep = apriori_equality(&tr, 1e-7).unwrap();
            assert!(rep.passed(), "{}: {rep:?}", tr.name);
        }
    }
}
