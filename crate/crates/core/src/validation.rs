//! Seeded cross-checks of the closed forms against independent routes.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channels::{default_step, evolve, integrate, ChannelKind, ChannelSpec};
use crate::correlations::{
    classical_correlations, closest_classical, discord, dissonance,
    dissonance_via_relative_entropy, relative_entropy,
};
use crate::error::{Error, Result};
use crate::measurement::{classical_correlations_numeric, DEFAULT_GRID};
use crate::state::CorrelationVector;

pub const LINDBLAD_TOL: f64 = 1e-8;
pub const OPTIMIZER_TOL: f64 = 1e-7;
pub const GRID_BOUND_TOL: f64 = 1e-12;
pub const DISCORD_IDENTITY_TOL: f64 = 1e-10;
pub const DISSONANCE_TOL: f64 = 1e-12;

/// Checkpoints, in units of `1/γ`, for the master-equation comparison.
pub const LINDBLAD_GAMMA_TIMES: [f64; 3] = [0.1, 0.5, 1.0];

/// Draws a state uniformly from the Bell tetrahedron (flat Dirichlet
/// populations). Every eighth draw has one population set to zero so the
/// faces of the tetrahedron are exercised too.
pub fn random_state<R: Rng>(rng: &mut R) -> CorrelationVector {
    let face = rng.random_range(0..8) == 0;
    let zeroed = rng.random_range(0..4);
    let mut lam = [0.0; 4];
    for (i, l) in lam.iter_mut().enumerate() {
        let u: f64 = rng.random();
        *l = if face && i == zeroed {
            0.0
        } else {
            -(1.0 - u).ln()
        };
    }
    let total: f64 = lam.iter().sum();
    lam.iter_mut().for_each(|l| *l /= total);
    CorrelationVector::from_populations(lam).expect("normalised populations are physical")
}

/// `n` states from a ChaCha8 stream seeded with `seed`.
pub fn random_states(seed: u64, n: usize) -> Vec<CorrelationVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_state(&mut rng)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<38} cases={:<6} max_dev={:.3e} tol={:.0e} {}",
            self.name,
            self.cases,
            self.max_deviation,
            self.tolerance,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub seed: u64,
    pub n: usize,
    pub suites: Vec<SuiteResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "validation seed={} n={}", self.seed, self.n)?;
        for s in &self.suites {
            writeln!(f, "{s}")?;
        }
        write!(f, "overall {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    // NaN deviations must not pass silently.
    values
        .into_iter()
        .fold(0.0_f64, |m, x| if x.is_nan() { f64::NAN } else { m.max(x) })
}

/// Analytic evolution vs RK4 on the master equation, entrywise.
pub fn lindblad_suite(states: &[CorrelationVector], gammas: &[f64]) -> Result<SuiteResult> {
    let devs = states
        .par_iter()
        .zip(gammas)
        .map(|(s, &gamma)| -> Result<f64> {
            let mut worst = 0.0_f64;
            for kind in ChannelKind::ALL {
                let ch = ChannelSpec::new(kind, gamma)?;
                let mut rho = s.to_density_matrix();
                let mut prev = 0.0;
                for gt in LINDBLAD_GAMMA_TIMES {
                    rho = integrate(&rho, &ch, (gt - prev) / gamma, default_step(gamma))?;
                    prev = gt;
                    let exact = evolve(s, &ch, gt / gamma)?.to_density_matrix();
                    worst = worst.max(rho.max_abs_diff(&exact));
                }
            }
            Ok(worst)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteResult {
        name: "evolve vs lindblad rk4",
        cases: states.len() * ChannelKind::ALL.len() * LINDBLAD_GAMMA_TIMES.len(),
        max_deviation: max_of(devs),
        tolerance: LINDBLAD_TOL,
    })
}

/// Closed-form classical correlations vs the measurement search, plus the
/// check that the unrefined grid never beats the closed form.
pub fn optimizer_suites(states: &[CorrelationVector], grid_n: usize) -> Result<[SuiteResult; 2]> {
    let pairs = states
        .par_iter()
        .map(|s| -> Result<(f64, f64)> {
            let exact = classical_correlations(s);
            let r = classical_correlations_numeric(s, grid_n)?;
            Ok(((r.value - exact).abs(), (r.grid_value - exact).max(0.0)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok([
        SuiteResult {
            name: "classical closed form vs optimizer",
            cases: states.len(),
            max_deviation: max_of(pairs.iter().map(|p| p.0)),
            tolerance: OPTIMIZER_TOL,
        },
        SuiteResult {
            name: "optimizer grid upper bound",
            cases: states.len(),
            max_deviation: max_of(pairs.iter().map(|p| p.1)),
            tolerance: GRID_BOUND_TOL,
        },
    ])
}

/// Discord vs relative entropy to the closest classical state.
pub fn discord_identity_suite(states: &[CorrelationVector]) -> SuiteResult {
    let devs = states.iter().map(|s| {
        let re = relative_entropy(&s.bell_spectrum(), &closest_classical(s).spectrum());
        (re - discord(s)).abs()
    });
    SuiteResult {
        name: "discord vs relative entropy",
        cases: states.len(),
        max_deviation: max_of(devs),
        tolerance: DISCORD_IDENTITY_TOL,
    }
}

/// Closed-form dissonance vs the explicit relative-entropy construction.
pub fn dissonance_suite(states: &[CorrelationVector]) -> SuiteResult {
    let devs: Vec<f64> = states
        .iter()
        .filter_map(
            |s| match (dissonance(s), dissonance_via_relative_entropy(s)) {
                (Ok(a), Ok(b)) => Some((a - b).abs()),
                _ => None,
            },
        )
        .collect();
    SuiteResult {
        name: "dissonance formula vs relative entropy",
        cases: devs.len(),
        max_deviation: max_of(devs),
        tolerance: DISSONANCE_TOL,
    }
}

/// Runs every suite on `n` states drawn from `seed`.
pub fn validate(seed: u64, n: usize) -> Result<ValidationReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let states = random_states(seed, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let gammas: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();

    let mut suites = vec![lindblad_suite(&states, &gammas)?];
    suites.extend(optimizer_suites(&states, DEFAULT_GRID)?);
    suites.push(discord_identity_suite(&states));
    suites.push(dissonance_suite(&states));
    Ok(ValidationReport { seed, n, suites })
}
