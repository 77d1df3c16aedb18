//! Classical correlations from an explicit search over von Neumann
//! measurements on one qubit.
//!
//! The measurement basis is
//!
//! ```text
//! |θ1> = cos θ |0> + e^{iφ} sin θ |1>
//! |θ2> = e^{-iφ} sin θ |0> - cos θ |1>
//! ```
//!
//! with `θ ∈ [0, π/2]`, `φ ∈ [0, 2π)`. The search evaluates the objective on a
//! regular grid and then polishes the best grid point by alternating
//! golden-section searches in `θ` and `φ`. Nothing here relies on the
//! Bell-diagonal closed forms, which makes it a check on them.

use std::f64::consts::{FRAC_PI_2, TAU};

use nalgebra::{Complex, Vector2};

use crate::correlations::{mutual_information, shannon_entropy};
use crate::error::{Error, Result};
use crate::matrix::{hermitian_eigenvalues_2, kron, partial_trace_a, partial_trace_b, pauli, Mat2};
use crate::state::CorrelationVector;

/// Default grid resolution per angle.
pub const DEFAULT_GRID: usize = 32;

/// Smallest accepted grid resolution.
pub const MIN_GRID: usize = 8;

const VALUE_TOL: f64 = 1e-10;
const ANGLE_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    theta: f64,
    phi: f64,
}

impl MeasurementBasis {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !((0.0..=FRAC_PI_2).contains(&theta) && (0.0..TAU).contains(&phi)) {
            return Err(Error::BadAngles { theta, phi });
        }
        Ok(Self { theta, phi })
    }

    /// Clamps `theta` into range and wraps `phi` onto `[0, 2π)`.
    fn normalized(theta: f64, phi: f64) -> Self {
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Self {
            theta: theta.clamp(0.0, FRAC_PI_2),
            phi,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// The two basis vectors `|θ1>`, `|θ2>`.
    pub fn kets(&self) -> [Vector2<Complex<f64>>; 2] {
        let (s, c) = self.theta.sin_cos();
        let e = Complex::from_polar(1.0, self.phi);
        [
            Vector2::new(Complex::new(c, 0.0), e * s),
            Vector2::new(e.conj() * s, Complex::new(-c, 0.0)),
        ]
    }

    /// Projectors `Π1`, `Π2` on a single qubit.
    pub fn projectors(&self) -> [Mat2; 2] {
        self.kets().map(|k| k * k.adjoint())
    }
}

/// Which qubit is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// `S(A | {Π_k})` for a measurement on qubit B.
pub fn conditional_entropy(state: &CorrelationVector, basis: &MeasurementBasis) -> f64 {
    conditional_entropy_on(state, basis, Subsystem::B)
}

/// `Σ_k p_k S(rho_k)` where `rho_k` is the post-measurement state of the
/// unmeasured qubit.
pub fn conditional_entropy_on(
    state: &CorrelationVector,
    basis: &MeasurementBasis,
    measured: Subsystem,
) -> f64 {
    let rho = *state.to_density_matrix().matrix();
    let id = pauli(0);
    let mut total = 0.0;
    for proj in basis.projectors() {
        let (full, reduced) = match measured {
            Subsystem::B => {
                let p = kron(&id, &proj);
                (p, partial_trace_b(&(p * rho * p)))
            }
            Subsystem::A => {
                let p = kron(&proj, &id);
                (p, partial_trace_a(&(p * rho * p)))
            }
        };
        let pk = (full * rho).trace().re;
        if pk <= 1e-300 {
            continue;
        }
        let ev = hermitian_eigenvalues_2(&(reduced / Complex::new(pk, 0.0)));
        total += pk * shannon_entropy(&ev);
    }
    total
}

/// Outcome of the measurement search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizationResult {
    /// Maximised `S(rho_A) - S(A | {Π_k})`, in bits.
    pub value: f64,
    pub best_basis: MeasurementBasis,
    /// Objective evaluations, grid plus refinement.
    pub evaluations: usize,
    /// Best value on the grid alone, before refinement.
    pub grid_value: f64,
}

struct Objective<'a> {
    state: &'a CorrelationVector,
    evaluations: usize,
}

impl Objective<'_> {
    fn eval(&mut self, theta: f64, phi: f64) -> f64 {
        self.evaluations += 1;
        // The marginal of a Bell-diagonal state is maximally mixed: S(rho_A) = 1.
        1.0 - conditional_entropy(self.state, &MeasurementBasis::normalized(theta, phi))
    }
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
fn golden_section_max(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > ANGLE_TOL {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

fn theta_grid(n: usize) -> impl Iterator<Item = f64> {
    let h = FRAC_PI_2 / (n - 1) as f64;
    (0..n).map(move |i| i as f64 * h)
}

fn phi_grid(n: usize) -> impl Iterator<Item = f64> {
    let h = TAU / n as f64;
    (0..n).map(move |j| j as f64 * h)
}

/// Classical correlations by explicit maximisation over measurements on B.
pub fn classical_correlations_numeric(
    state: &CorrelationVector,
    grid_n: usize,
) -> Result<OptimizationResult> {
    if grid_n < MIN_GRID {
        return Err(Error::InvalidArgument(format!(
            "grid_n must be at least {MIN_GRID}, got {grid_n}"
        )));
    }
    let mut obj = Objective {
        state,
        evaluations: 0,
    };

    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for theta in theta_grid(grid_n) {
        for phi in phi_grid(grid_n) {
            let v = obj.eval(theta, phi);
            if v > best.0 {
                best = (v, theta, phi);
            }
        }
    }
    let grid_value = best.0;
    let (mut value, mut theta, mut phi) = best;

    let h_theta = FRAC_PI_2 / (grid_n - 1) as f64;
    let h_phi = TAU / grid_n as f64;
    for _ in 0..MAX_SWEEPS {
        let start = value;

        let lo = (theta - h_theta).max(0.0);
        let hi = (theta + h_theta).min(FRAC_PI_2);
        let (t, v) = golden_section_max(|x| obj.eval(x, phi), lo, hi);
        if v > value {
            value = v;
            theta = t;
        }

        let (p, v) = golden_section_max(|x| obj.eval(theta, x), phi - h_phi, phi + h_phi);
        if v > value {
            value = v;
            phi = p;
        }

        if value - start < VALUE_TOL {
            break;
        }
    }

    Ok(OptimizationResult {
        value: value.max(0.0),
        best_basis: MeasurementBasis::normalized(theta, phi),
        evaluations: obj.evaluations,
        grid_value,
    })
}

/// Maximum over `θ` alone with `φ` held fixed.
pub fn classical_correlations_at_phi(
    state: &CorrelationVector,
    phi: f64,
    grid_n: usize,
) -> Result<f64> {
    if grid_n < MIN_GRID {
        return Err(Error::InvalidArgument(format!(
            "grid_n must be at least {MIN_GRID}, got {grid_n}"
        )));
    }
    let mut obj = Objective {
        state,
        evaluations: 0,
    };
    let (mut value, mut theta) = (f64::NEG_INFINITY, 0.0);
    for t in theta_grid(grid_n) {
        let v = obj.eval(t, phi);
        if v > value {
            value = v;
            theta = t;
        }
    }
    let h = FRAC_PI_2 / (grid_n - 1) as f64;
    let (_, v) = golden_section_max(
        |x| obj.eval(x, phi),
        (theta - h).max(0.0),
        (theta + h).min(FRAC_PI_2),
    );
    Ok(value.max(v).max(0.0))
}

/// `I - C` with `C` from the measurement search.
pub fn discord_numeric(state: &CorrelationVector, grid_n: usize) -> Result<f64> {
    Ok(mutual_information(state) - classical_correlations_numeric(state, grid_n)?.value)
}
