//! Bell-diagonal two-qubit states.
//!
//! A state with maximally mixed marginals is fixed by the correlation vector
//! `c = (c1, c2, c3)`:
//!
//! ```text
//! rho = 1/4 (1 + c1 X⊗X + c2 Y⊗Y + c3 Z⊗Z)
//! ```
//!
//! It is diagonal in the Bell basis
//!
//! ```text
//! |Ψ±> = (|00> ± |11>)/√2,    |Φ±> = (|01> ± |10>)/√2
//! ```
//!
//! with populations `λ = (1 + s·c)/4`, where `s` is the vector of Pauli
//! expectations of the Bell state. Computational basis ordering is
//! `|00>, |01>, |10>, |11>` (qubit A is the most significant bit) everywhere in
//! this crate.

use std::fmt;

use nalgebra::{Complex, Matrix4, Vector4};

use crate::error::{Error, Result};
use crate::matrix::{pauli_pair, Mat4};

/// Tolerance applied when validating populations built from user input.
pub const EPS_PHYS: f64 = 1e-12;

/// The four Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BellLabel {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellLabel {
    /// Storage order of [`BellSpectrum`].
    pub const ALL: [BellLabel; 4] = [
        BellLabel::PsiPlus,
        BellLabel::PsiMinus,
        BellLabel::PhiPlus,
        BellLabel::PhiMinus,
    ];

    /// Order used to break ties between equal populations.
    pub const TIE_ORDER: [BellLabel; 4] = [
        BellLabel::PsiPlus,
        BellLabel::PhiPlus,
        BellLabel::PhiMinus,
        BellLabel::PsiMinus,
    ];

    pub fn index(self) -> usize {
        match self {
            BellLabel::PsiPlus => 0,
            BellLabel::PsiMinus => 1,
            BellLabel::PhiPlus => 2,
            BellLabel::PhiMinus => 3,
        }
    }

    fn tie_rank(self) -> usize {
        match self {
            BellLabel::PsiPlus => 0,
            BellLabel::PhiPlus => 1,
            BellLabel::PhiMinus => 2,
            BellLabel::PsiMinus => 3,
        }
    }

    /// Expectations of `X⊗X`, `Y⊗Y`, `Z⊗Z` in this Bell state.
    pub fn signs(self) -> [f64; 3] {
        match self {
            BellLabel::PsiPlus => [1.0, -1.0, 1.0],
            BellLabel::PsiMinus => [-1.0, 1.0, 1.0],
            BellLabel::PhiPlus => [1.0, 1.0, -1.0],
            BellLabel::PhiMinus => [-1.0, -1.0, -1.0],
        }
    }

    /// Amplitudes in the computational basis.
    pub fn ket(self) -> Vector4<Complex<f64>> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (a, b, c, d) = match self {
            BellLabel::PsiPlus => (h, 0.0, 0.0, h),
            BellLabel::PsiMinus => (h, 0.0, 0.0, -h),
            BellLabel::PhiPlus => (0.0, h, h, 0.0),
            BellLabel::PhiMinus => (0.0, h, -h, 0.0),
        };
        Vector4::new(a, b, c, d).map(|x| Complex::new(x, 0.0))
    }

    /// The projector `|k><k|`.
    pub fn projector(self) -> Mat4 {
        let k = self.ket();
        k * k.adjoint()
    }

    /// ASCII name used in CSV output.
    pub fn name(self) -> &'static str {
        match self {
            BellLabel::PsiPlus => "psi+",
            BellLabel::PsiMinus => "psi-",
            BellLabel::PhiPlus => "phi+",
            BellLabel::PhiMinus => "phi-",
        }
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Correlation vector `(c1, c2, c3)` of a physical Bell-diagonal state.
///
/// Only constructible through validation, so every value in circulation
/// describes a positive semidefinite state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationVector {
    c: [f64; 3],
}

impl CorrelationVector {
    /// Validates `(c1, c2, c3)` and returns the state.
    ///
    /// Rejects non-finite input, any `|ci| > 1`, and any vector outside the
    /// Bell tetrahedron (some population below `-EPS_PHYS`).
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        let c = [c1, c2, c3];
        let reject = |reason: String| Error::NonPhysical { c1, c2, c3, reason };
        if c.iter().any(|x| !x.is_finite()) {
            return Err(reject("non-finite component".into()));
        }
        if let Some(x) = c.iter().find(|x| x.abs() > 1.0 + EPS_PHYS) {
            return Err(reject(format!("|c| = {} exceeds 1", x.abs())));
        }
        let lam = raw_populations(c);
        for (label, l) in BellLabel::ALL.iter().zip(lam) {
            if l < -EPS_PHYS {
                return Err(reject(format!("population of {label} is {l}")));
            }
        }
        Ok(Self { c })
    }

    /// Builds the state from Bell populations in storage order.
    pub fn from_populations(lam: [f64; 4]) -> Result<Self> {
        let mut c = [0.0; 3];
        for (label, l) in BellLabel::ALL.iter().zip(lam) {
            for (ci, s) in c.iter_mut().zip(label.signs()) {
                *ci += s * l;
            }
        }
        Self::new(c[0], c[1], c[2])
    }

    pub fn c1(&self) -> f64 {
        self.c[0]
    }

    pub fn c2(&self) -> f64 {
        self.c[1]
    }

    pub fn c3(&self) -> f64 {
        self.c[2]
    }

    pub fn components(&self) -> [f64; 3] {
        self.c
    }

    /// `χ = max |ci|`.
    pub fn chi(&self) -> f64 {
        self.c.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn bell_spectrum(&self) -> BellSpectrum {
        BellSpectrum {
            lam: raw_populations(self.c),
        }
    }

    pub fn to_density_matrix(&self) -> DensityMatrix {
        let mut m = Mat4::identity();
        for (axis, ci) in self.c.iter().enumerate() {
            m += pauli_pair(axis + 1) * Complex::new(*ci, 0.0);
        }
        DensityMatrix {
            m: m * Complex::new(0.25, 0.0),
        }
    }

    /// Unchecked construction for vectors produced by exact transformations
    /// of a valid state (contractions, index permutations).
    pub(crate) fn from_valid(c: [f64; 3]) -> Self {
        Self { c }
    }
}

impl fmt::Display for CorrelationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.c[0], self.c[1], self.c[2])
    }
}

/// Free-function form of [`CorrelationVector::new`].
pub fn make_state(c1: f64, c2: f64, c3: f64) -> Result<CorrelationVector> {
    CorrelationVector::new(c1, c2, c3)
}

fn raw_populations(c: [f64; 3]) -> [f64; 4] {
    BellLabel::ALL.map(|label| {
        let s = label.signs();
        (1.0 + s[0] * c[0] + s[1] * c[1] + s[2] * c[2]) / 4.0
    })
}

/// Bell-basis populations of a Bell-diagonal state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellSpectrum {
    lam: [f64; 4],
}

impl BellSpectrum {
    /// Validates a population vector given in storage order (Ψ⁺, Ψ⁻, Φ⁺, Φ⁻).
    pub fn new(lam: [f64; 4]) -> Result<Self> {
        if lam
            .iter()
            .any(|l| !l.is_finite() || *l < -EPS_PHYS || *l > 1.0 + EPS_PHYS)
        {
            return Err(Error::InvalidArgument(format!(
                "populations {lam:?} are not probabilities"
            )));
        }
        let sum: f64 = lam.iter().sum();
        if (sum - 1.0).abs() > EPS_PHYS {
            return Err(Error::InvalidArgument(format!(
                "populations {lam:?} sum to {sum}"
            )));
        }
        Ok(Self { lam })
    }

    pub fn get(&self, label: BellLabel) -> f64 {
        self.lam[label.index()]
    }

    pub fn psi_plus(&self) -> f64 {
        self.lam[0]
    }

    pub fn psi_minus(&self) -> f64 {
        self.lam[1]
    }

    pub fn phi_plus(&self) -> f64 {
        self.lam[2]
    }

    pub fn phi_minus(&self) -> f64 {
        self.lam[3]
    }

    /// Populations in storage order.
    pub fn values(&self) -> [f64; 4] {
        self.lam
    }

    /// Populations paired with labels, non-increasing, ties broken by
    /// [`BellLabel::TIE_ORDER`].
    pub fn sorted(&self) -> [(f64, BellLabel); 4] {
        let mut out = BellLabel::ALL.map(|l| (self.get(l), l));
        out.sort_by(|a, b| {
            b.0.total_cmp(&a.0)
                .then_with(|| a.1.tie_rank().cmp(&b.1.tie_rank()))
        });
        out
    }

    /// Largest population.
    pub fn max(&self) -> f64 {
        self.sorted()[0].0
    }

    pub fn to_density_matrix(&self) -> DensityMatrix {
        let mut m = Mat4::zeros();
        for label in BellLabel::ALL {
            m += label.projector() * Complex::new(self.get(label), 0.0);
        }
        DensityMatrix { m }
    }
}

/// Free-function form of [`CorrelationVector::bell_spectrum`].
pub fn bell_spectrum(state: &CorrelationVector) -> BellSpectrum {
    state.bell_spectrum()
}

/// Free-function form of [`CorrelationVector::to_density_matrix`].
pub fn to_density_matrix(state: &CorrelationVector) -> DensityMatrix {
    state.to_density_matrix()
}

/// Free-function form of [`BellSpectrum::sorted`].
pub fn sorted_spectrum(spec: &BellSpectrum) -> [(f64, BellLabel); 4] {
    spec.sorted()
}

/// A 4×4 two-qubit density matrix in the computational basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    m: Mat4,
}

impl DensityMatrix {
    /// Wraps a matrix after checking hermiticity, unit trace and positivity.
    pub fn new(m: Mat4) -> Result<Self> {
        let herm = (m - m.adjoint())
            .iter()
            .fold(0.0_f64, |a, z| a.max(z.norm()));
        if herm > 1e-12 {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
            return Err(Error::InvalidDensityMatrix(format!("trace is {tr}")));
        }
        let rho = Self { m };
        let min = rho
            .eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min < -1e-10 {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(rho)
    }

    /// Wraps a matrix without validation. Used for derivatives and
    /// intermediate integrator states.
    pub fn from_matrix_unchecked(m: Mat4) -> Self {
        Self { m }
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.m
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<f64> {
        self.m[(row, col)]
    }

    pub fn trace(&self) -> Complex<f64> {
        self.m.trace()
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let h = (self.m + self.m.adjoint()) * Complex::new(0.5, 0.0);
        let ev = h.symmetric_eigenvalues();
        let mut out = [ev[0], ev[1], ev[2], ev[3]];
        out.sort_by(f64::total_cmp);
        out
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        (self.m - other.m)
            .iter()
            .fold(0.0_f64, |a, z| a.max(z.norm()))
    }

    /// Largest entrywise modulus of `rho - rho†`.
    pub fn hermiticity_error(&self) -> f64 {
        (self.m - self.m.adjoint())
            .iter()
            .fold(0.0_f64, |a, z| a.max(z.norm()))
    }

    /// `(Tr[rho X⊗X], Tr[rho Y⊗Y], Tr[rho Z⊗Z])`.
    pub fn pauli_correlations(&self) -> [f64; 3] {
        [1, 2, 3].map(|j| (self.m * pauli_pair(j)).trace().re)
    }

    /// Reads back the correlation vector of a Bell-diagonal matrix.
    pub fn to_correlation_vector(&self) -> Result<CorrelationVector> {
        let [c1, c2, c3] = self.pauli_correlations();
        CorrelationVector::new(c1, c2, c3)
    }
}

impl From<Matrix4<Complex<f64>>> for DensityMatrix {
    fn from(m: Matrix4<Complex<f64>>) -> Self {
        Self::from_matrix_unchecked(m)
    }
}
