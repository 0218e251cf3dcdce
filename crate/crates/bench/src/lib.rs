//! Fixtures shared by the benchmarks.

use num_complex::Complex64;
use sdl_core::division::DivisionProblem;
use sdl_core::positivity::HermitianTensorForm;
use sdl_core::{suite, Domain, MultiPoly, Result};

/// `g = (1/2, z/2)` on the disk with `f = 1`.
pub fn disk_problem(degree: usize) -> Result<DivisionProblem> {
    suite::skoda_disk(1.0, degree)
}

/// `g = (z₁, z₂)` on the ellipsoid `diag(1, 4)` with `f = z₁ + z₂`.
pub fn ellipsoid_problem(degree: usize) -> Result<DivisionProblem> {
    let one = Complex64::new(1.0, 0.0);
    let g = vec![MultiPoly::var(2, 0), MultiPoly::var(2, 1)];
    let f = MultiPoly::from_terms(2, [(vec![1, 0], one), (vec![0, 1], one)])?;
    DivisionProblem::new(Domain::diagonal_ellipsoid(&[1.0, 4.0])?, g, f, sdl_core::triples::catalog_lookup("qexp", &[1.0])?, degree)
}

pub fn fubini_study(n: usize) -> HermitianTensorForm {
    HermitianTensorForm::fubini_study(n)
}
