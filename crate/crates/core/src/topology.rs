//! Altland–Zirnbauer classification of single-particle chain Hamiltonians.
//!
//! The candidate operators are fixed rather than searched for: time reversal
//! `T = 𝟙𝒦`, the sublattice operator `Γ = diag((-1)^i)`, and particle-hole
//! `C = TΓ = Γ𝒦`. A symmetry holds when the matrix commutes (`T`) or
//! anticommutes (`C`, `Γ`) with it to `1e-12`.

use core::fmt;

use crate::linalg::DenseMatrix;
use crate::math::abs;
use crate::{Complex64, Error, Result};

const TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl core::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// The ten symmetry classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AzClass {
    A,
    AIII,
    AI,
    BDI,
    D,
    DIII,
    AII,
    CII,
    C,
    CI,
}

impl AzClass {
    /// Class of a `(T², C², chiral)` triple; `None` marks an absent
    /// antiunitary symmetry.
    pub fn from_symmetries(t: Option<Sign>, c: Option<Sign>, chiral: bool) -> Self {
        use Sign::{Minus, Plus};
        match (t, c) {
            (None, None) if chiral => AzClass::AIII,
            (None, None) => AzClass::A,
            (Some(Plus), None) => AzClass::AI,
            (Some(Plus), Some(Plus)) => AzClass::BDI,
            (None, Some(Plus)) => AzClass::D,
            (Some(Minus), Some(Plus)) => AzClass::DIII,
            (Some(Minus), None) => AzClass::AII,
            (Some(Minus), Some(Minus)) => AzClass::CII,
            (None, Some(Minus)) => AzClass::C,
            (Some(Plus), Some(Minus)) => AzClass::CI,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            AzClass::A => "A",
            AzClass::AIII => "AIII",
            AzClass::AI => "AI",
            AzClass::BDI => "BDI",
            AzClass::D => "D",
            AzClass::DIII => "DIII",
            AzClass::AII => "AII",
            AzClass::CII => "CII",
            AzClass::C => "C",
            AzClass::CI => "CI",
        }
    }
}

impl fmt::Display for AzClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetryReport {
    pub time_reversal: Option<Sign>,
    pub particle_hole: Option<Sign>,
    pub chiral: Option<Sign>,
    pub az_class: AzClass,
}

impl SymmetryReport {
    pub fn has_t(&self) -> bool {
        self.time_reversal.is_some()
    }

    pub fn has_c(&self) -> bool {
        self.particle_hole.is_some()
    }

    pub fn has_gamma(&self) -> bool {
        self.chiral.is_some()
    }
}

fn check_square(h: &DenseMatrix<Complex64>) -> Result<()> {
    if h.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        })
    }
}

fn sublattice(i: usize) -> f64 {
    if i % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn max_entry(h: &DenseMatrix<Complex64>, f: impl Fn(usize, usize) -> Complex64) -> f64 {
    let n = h.rows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max(f(i, j).norm());
        }
    }
    worst
}

/// `T = 𝟙𝒦`: holds iff `H` is real symmetric, in which case `T² = +1`.
pub fn check_time_reversal(h: &DenseMatrix<Complex64>) -> Result<Option<Sign>> {
    check_square(h)?;
    let imag = max_entry(h, |i, j| Complex64::new(abs(h[(i, j)].im), 0.0));
    let asym = max_entry(h, |i, j| h[(i, j)] - h[(j, i)]);
    Ok((imag < TOLERANCE && asym < TOLERANCE).then_some(Sign::Plus))
}

/// `Γ = diag((-1)^i)`: holds iff `ΓHΓ = -H`, with `Γ² = +1`.
pub fn check_chiral(h: &DenseMatrix<Complex64>) -> Result<Option<Sign>> {
    check_square(h)?;
    let worst = max_entry(h, |i, j| h[(i, j)] * (sublattice(i) * sublattice(j)) + h[(i, j)]);
    Ok((worst < TOLERANCE).then_some(Sign::Plus))
}

/// `C = Γ𝒦`: holds iff `ΓH*Γ = -H`, with `C² = ΓΓ* = +1`.
pub fn check_particle_hole(h: &DenseMatrix<Complex64>) -> Result<Option<Sign>> {
    check_square(h)?;
    let worst = max_entry(h, |i, j| h[(i, j)].conj() * (sublattice(i) * sublattice(j)) + h[(i, j)]);
    Ok((worst < TOLERANCE).then_some(Sign::Plus))
}

/// Runs the three checks and maps the result onto the ten-fold way.
pub fn classify(h: &DenseMatrix<Complex64>) -> Result<SymmetryReport> {
    let time_reversal = check_time_reversal(h)?;
    let chiral = check_chiral(h)?;
    let particle_hole = match (time_reversal, chiral) {
        (Some(t), Some(g)) => Some(t * g),
        _ => check_particle_hole(h)?,
    };
    // with both antiunitary symmetries present Γ = TC exists automatically
    let chiral = match (time_reversal, particle_hole) {
        (Some(t), Some(c)) => chiral.or(Some(t * c)),
        _ => chiral,
    };
    Ok(SymmetryReport {
        time_reversal,
        particle_hole,
        chiral,
        az_class: AzClass::from_symmetries(time_reversal, particle_hole, chiral.is_some()),
    })
}
