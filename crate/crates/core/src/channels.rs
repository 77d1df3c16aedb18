//! Local Pauli channels acting identically on both qubits.
//!
//! Each qubit sees the Markovian dissipator `L[rho] = γ (σ_j rho σ_j - rho) / 2`
//! with `j = 1` (bit flip), `j = 2` (bit-phase flip) or `j = 3` (phase flip).
//! Bell-diagonal states stay Bell-diagonal: the coefficient `c_j` is preserved
//! and the other two decay as `exp(-2γt)`.
//!
//! [`evolve`] applies the decay law directly. [`integrate`] solves the master
//! equation for a full 4×4 density matrix with fixed-step RK4 and is kept as an
//! independent check of the decay law.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Complex, SMatrix, SVector};

use crate::error::{Error, Result};
use crate::matrix::{on_a, on_b, pauli, Mat4};
use crate::state::{CorrelationVector, DensityMatrix};

/// Tolerance used when recognising a state as a member of a transition class.
const CLASS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    BitFlip,
    BitPhaseFlip,
    PhaseFlip,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 3] = [
        ChannelKind::BitFlip,
        ChannelKind::BitPhaseFlip,
        ChannelKind::PhaseFlip,
    ];

    /// Pauli index `j` of the jump operator.
    pub fn pauli_index(self) -> usize {
        match self {
            ChannelKind::BitFlip => 1,
            ChannelKind::BitPhaseFlip => 2,
            ChannelKind::PhaseFlip => 3,
        }
    }

    /// Zero-based index of the correlation coefficient left untouched.
    pub fn preserved_axis(self) -> usize {
        self.pauli_index() - 1
    }

    /// Zero-based indices of the two decaying coefficients.
    pub fn decaying_axes(self) -> [usize; 2] {
        let p = self.preserved_axis();
        [(p + 1) % 3, (p + 2) % 3]
    }

    /// Cyclic shift carrying the phase-flip axis (index 2) onto this
    /// channel's preserved axis.
    fn shift(self) -> usize {
        self.pauli_index() % 3
    }

    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::BitFlip => "bit",
            ChannelKind::BitPhaseFlip => "bit-phase",
            ChannelKind::PhaseFlip => "phase",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bit" | "bitflip" | "bit-flip" | "x" | "1" => Ok(ChannelKind::BitFlip),
            "bit-phase" | "bitphase" | "bit-phase-flip" | "bitphaseflip" | "y" | "2" => {
                Ok(ChannelKind::BitPhaseFlip)
            }
            "phase" | "phaseflip" | "phase-flip" | "dephasing" | "z" | "3" => {
                Ok(ChannelKind::PhaseFlip)
            }
            other => Err(Error::InvalidArgument(format!("unknown channel '{other}'"))),
        }
    }
}

/// Channel kind together with its decoherence rate γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    kind: ChannelKind,
    gamma: f64,
}

impl ChannelSpec {
    pub fn new(kind: ChannelKind, gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::BadRate(gamma));
        }
        Ok(Self { kind, gamma })
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Contraction factor `exp(-2γt)` of the decaying coefficients.
    pub fn decay_factor(&self, t: f64) -> f64 {
        (-2.0 * self.gamma * t).exp()
    }
}

/// Analytic evolution of a Bell-diagonal state for time `t`.
pub fn evolve(state: &CorrelationVector, ch: &ChannelSpec, t: f64) -> Result<CorrelationVector> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime(t));
    }
    let e = ch.decay_factor(t);
    let mut c = state.components();
    for i in ch.kind.decaying_axes() {
        c[i] *= e;
    }
    // Contracting two coefficients towards zero keeps the state inside the
    // Bell tetrahedron.
    Ok(CorrelationVector::from_valid(c))
}

/// Right-hand side of the master equation, `L_A[rho] + L_B[rho]`.
pub fn lindblad_rhs(rho: &DensityMatrix, ch: &ChannelSpec) -> DensityMatrix {
    let sigma = pauli(ch.kind.pauli_index());
    DensityMatrix::from_matrix_unchecked(rhs_matrix(
        rho.matrix(),
        &on_a(&sigma),
        &on_b(&sigma),
        ch.gamma,
    ))
}

fn rhs_matrix(rho: &Mat4, jump_a: &Mat4, jump_b: &Mat4, gamma: f64) -> Mat4 {
    // Pauli jump operators are Hermitian and square to one.
    let half_gamma = Complex::new(0.5 * gamma, 0.0);
    let two = Complex::new(2.0, 0.0);
    (jump_a * rho * jump_a + jump_b * rho * jump_b - rho * two) * half_gamma
}

/// Default integrator step for rate γ.
pub fn default_step(gamma: f64) -> f64 {
    1e-4 / gamma
}

/// Classical RK4 integration of the master equation from `0` to `t_end`.
///
/// The interval is split into `ceil(t_end / dt)` equal steps, so the
/// effective step never exceeds `dt`. The generator is linear and the step
/// fixed, so one RK4 step is the matrix `1 + hL + (hL)²/2 + (hL)³/6 + (hL)⁴/24`
/// acting on the vectorised density matrix; it is assembled once from the
/// generator and then applied `steps` times.
pub fn integrate(
    rho0: &DensityMatrix,
    ch: &ChannelSpec,
    t_end: f64,
    dt: f64,
) -> Result<DensityMatrix> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::BadStep(dt));
    }
    if t_end < 0.0 || !t_end.is_finite() {
        return Err(Error::NegativeTime(t_end));
    }
    if t_end == 0.0 {
        return Ok(*rho0);
    }
    let steps = (t_end / dt).ceil().max(1.0) as usize;
    let h = t_end / steps as f64;

    let step = rk4_step_matrix(ch, h);
    let mut y = Vec16::from_column_slice(rho0.matrix().as_slice());
    for _ in 0..steps {
        y = step * y;
    }
    Ok(DensityMatrix::from_matrix_unchecked(
        Mat4::from_column_slice(y.as_slice()),
    ))
}

type Mat16 = SMatrix<Complex<f64>, 16, 16>;
type Vec16 = SVector<Complex<f64>, 16>;

/// Generator of the master equation as a 16×16 matrix on column-major
/// vectorised density matrices, built column by column from the action on
/// the matrix units.
fn generator_matrix(ch: &ChannelSpec) -> Mat16 {
    let sigma = pauli(ch.kind.pauli_index());
    let (ja, jb) = (on_a(&sigma), on_b(&sigma));
    let mut l = Mat16::zeros();
    for k in 0..16 {
        let mut unit = Mat4::zeros();
        unit[k] = Complex::new(1.0, 0.0);
        let image = rhs_matrix(&unit, &ja, &jb, ch.gamma);
        l.set_column(k, &Vec16::from_column_slice(image.as_slice()));
    }
    l
}

fn rk4_step_matrix(ch: &ChannelSpec, h: f64) -> Mat16 {
    let a = generator_matrix(ch) * Complex::new(h, 0.0);
    let id = Mat16::identity();
    // Horner form of 1 + a + a²/2 + a³/6 + a⁴/24.
    let c = |x: f64| Complex::new(x, 0.0);
    let p = id + a * c(0.25);
    let p = id + a * p * c(1.0 / 3.0);
    let p = id + a * p * c(0.5);
    id + a * p
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    fn of(x: f64) -> Self {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+" | "+1" | "plus" => Ok(Sign::Plus),
            "-" | "-1" | "minus" => Ok(Sign::Minus),
            other => Err(Error::InvalidArgument(format!("unknown sign '{other}'"))),
        }
    }
}

/// Parameters of the states showing a frozen-discord plateau: one decaying
/// coefficient at `±1`, the other at `∓κ`, the preserved one at `κ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionClassParams {
    sign: Sign,
    kappa: f64,
}

impl TransitionClassParams {
    pub fn new(sign: Sign, kappa: f64) -> Result<Self> {
        if !(kappa.abs() > 0.0 && kappa.abs() < 1.0) {
            return Err(Error::BadKappa(kappa));
        }
        Ok(Self { sign, kappa })
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

/// `c'[(i + shift) % 3] = c[i]`.
fn rotate(c: [f64; 3], shift: usize) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (i, x) in c.into_iter().enumerate() {
        out[(i + shift) % 3] = x;
    }
    out
}

fn unrotate(c: [f64; 3], shift: usize) -> [f64; 3] {
    rotate(c, 3 - shift % 3)
}

/// Transition-class state for a channel.
///
/// Phase flip gives `(±1, ∓κ, κ)`; the other channels get the cyclic index
/// permutation that moves `κ` onto their preserved coefficient.
pub fn class_state(kind: ChannelKind, p: &TransitionClassParams) -> CorrelationVector {
    let s = p.sign.value();
    let base = [s, -s * p.kappa, p.kappa];
    CorrelationVector::from_valid(rotate(base, kind.shift()))
}

/// Recovers the class parameters of `state` for `kind`, if it is a member.
pub fn class_params(state: &CorrelationVector, kind: ChannelKind) -> Option<TransitionClassParams> {
    let [a, b, kappa] = unrotate(state.components(), kind.shift());
    let sign = Sign::of(a);
    let s = sign.value();
    if (a - s).abs() > CLASS_TOL || (b + s * kappa).abs() > CLASS_TOL {
        return None;
    }
    TransitionClassParams::new(sign, kappa).ok()
}

/// Separable member of the phase-flip family with a discord plateau:
/// `c1 = ±r`, `c2 = ∓c3 r`, `r = (1 - |c3|) / (1 + |c3|)`.
///
/// The sign of `c2` follows that of `c1` as in [`class_state`]; with `c2`
/// fixed at `-c3 r` the minus branch is still separable but its discord
/// decays from the start.
pub fn separable_class_state(sign: Sign, c3: f64) -> Result<CorrelationVector> {
    let bound = std::f64::consts::SQRT_2 - 1.0;
    if !(c3.abs() > 0.0 && c3.abs() < bound) {
        return Err(Error::OutOfRange(c3));
    }
    let r = (1.0 - c3.abs()) / (1.0 + c3.abs());
    let s = sign.value();
    CorrelationVector::new(s * r, -s * c3 * r, c3)
}
