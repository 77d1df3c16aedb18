//! Time series of correlation measures and their CSV form.
//!
//! Time is reported as the dimensionless product `γt`. CSV output is
//! deterministic: fixed column order, numbers printed with
//! [`CSV_SIGNIFICANT_DIGITS`] significant digits, `'\n'` line endings, and a
//! block of `#`-prefixed metadata lines ahead of the column header.

use std::fmt::Write as _;
use std::io::{self, Write};

use rayon::prelude::*;

use crate::channels::{class_params, evolve, integrate, ChannelSpec};
use crate::correlations::{closest_classical, full_report, transition_time, CorrelationReport};
use crate::error::{Error, Result};
use crate::measurement::classical_correlations_numeric;
use crate::state::{BellLabel, BellSpectrum, CorrelationVector};

pub const CSV_SIGNIFICANT_DIGITS: usize = 12;

/// Column order of trajectory CSV files.
pub const TRAJECTORY_COLUMNS: [&str; 15] = [
    "gamma_t",
    "c1",
    "c2",
    "c3",
    "lam1",
    "lam2",
    "lam3",
    "lam4",
    "I",
    "C",
    "D",
    "E",
    "Q",
    "q_cl",
    "pair_high",
];

/// Minimum table length accepted by [`detect_transition`].
pub const MIN_DETECT_ROWS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryConfig {
    pub initial: CorrelationVector,
    pub channel: ChannelSpec,
    /// End of the time window in units of `1/γ`.
    pub gamma_t_max: f64,
    pub samples: usize,
}

impl TrajectoryConfig {
    pub fn new(
        initial: CorrelationVector,
        channel: ChannelSpec,
        gamma_t_max: f64,
        samples: usize,
    ) -> Result<Self> {
        if samples < 2 {
            return Err(Error::InvalidArgument(format!(
                "samples must be at least 2, got {samples}"
            )));
        }
        if !(gamma_t_max.is_finite() && gamma_t_max > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tmax must be positive, got {gamma_t_max}"
            )));
        }
        Ok(Self {
            initial,
            channel,
            gamma_t_max,
            samples,
        })
    }

    /// Uniform grid of `γt` values including both end points.
    pub fn gamma_t_grid(&self) -> Vec<f64> {
        let n = self.samples - 1;
        (0..=n)
            .map(|k| self.gamma_t_max * k as f64 / n as f64)
            .collect()
    }

    pub fn step(&self) -> f64 {
        self.gamma_t_max / (self.samples - 1) as f64
    }
}

/// One time sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRecord {
    pub gamma_t: f64,
    pub state: CorrelationVector,
    pub spectrum: BellSpectrum,
    /// Populations in non-increasing order.
    pub lam_sorted: [f64; 4],
    pub report: CorrelationReport,
    pub q_cl: f64,
    pub pair_high: [BellLabel; 2],
}

impl TrajectoryRecord {
    pub fn at(initial: &CorrelationVector, ch: &ChannelSpec, gamma_t: f64) -> Result<Self> {
        let state = evolve(initial, ch, gamma_t / ch.gamma())?;
        let spectrum = state.bell_spectrum();
        let cl = closest_classical(&state);
        Ok(Self {
            gamma_t,
            state,
            spectrum,
            lam_sorted: spectrum.sorted().map(|p| p.0),
            report: full_report(&state),
            q_cl: cl.q,
            pair_high: cl.pair_high,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub config: TrajectoryConfig,
    pub rows: Vec<TrajectoryRecord>,
}

/// Evaluates every correlation measure on the configured time grid.
pub fn run_trajectory(cfg: &TrajectoryConfig) -> Result<Trajectory> {
    let rows = cfg
        .gamma_t_grid()
        .into_par_iter()
        .map(|gt| TrajectoryRecord::at(&cfg.initial, &cfg.channel, gt))
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory { config: *cfg, rows })
}

/// Location of a kink in the discord curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectedTransition {
    pub gamma_t: f64,
    /// Grid spacing of the table the kink was found in.
    pub uncertainty: f64,
    /// Whether the estimate was refined on the analytic χ crossing.
    pub refined: bool,
}

/// Finds the kink in the discord curve.
///
/// The coarse estimate is the row maximising the absolute second difference
/// of `D`. It only counts as a kink if it stands more than ten times above
/// the larger of the smooth curvature a few rows away and the floating-point
/// noise of `D`. The estimate is then refined by bisecting the crossing of
/// the largest decaying coefficient with the preserved one.
pub fn detect_transition(traj: &Trajectory) -> Result<Option<DetectedTransition>> {
    let rows = &traj.rows;
    if rows.len() < MIN_DETECT_ROWS {
        return Err(Error::InvalidArgument(format!(
            "transition detection needs at least {MIN_DETECT_ROWS} rows, got {}",
            rows.len()
        )));
    }
    let d: Vec<f64> = rows.iter().map(|r| r.report.discord).collect();
    let d2: Vec<f64> = d
        .windows(3)
        .map(|w| (w[2] - 2.0 * w[1] + w[0]).abs())
        .collect();

    let (j, peak) =
        d2.iter().copied().enumerate().fold(
            (0, 0.0),
            |best, (i, v)| if v > best.1 { (i, v) } else { best },
        );

    let scale = d.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    let noise = 16.0 * f64::EPSILON * scale;
    let background = [j.checked_sub(3), Some(j + 3)]
        .into_iter()
        .flatten()
        .filter_map(|k| d2.get(k))
        .fold(0.0_f64, |m, x| m.max(*x));
    if peak <= 10.0 * (background + noise) {
        return Ok(None);
    }

    // d2[j] is centred on row j + 1.
    let centre = j + 1;
    let h = traj.config.step();
    let coarse = rows[centre].gamma_t;
    let refined = refine_on_chi_crossing(&traj.config, centre, rows.len());
    Ok(Some(DetectedTransition {
        gamma_t: refined.unwrap_or(coarse),
        uncertainty: h,
        refined: refined.is_some(),
    }))
}

fn refine_on_chi_crossing(cfg: &TrajectoryConfig, centre: usize, len: usize) -> Option<f64> {
    let kind = cfg.channel.kind();
    let c = cfg.initial.components();
    let chi_p = c[kind.preserved_axis()].abs();
    let chi_d = kind
        .decaying_axes()
        .iter()
        .map(|&i| c[i].abs())
        .fold(0.0, f64::max);
    // g(γt) = χ_d e^{-2γt} - χ_p, decreasing.
    let g = |gt: f64| chi_d * (-2.0 * gt).exp() - chi_p;
    let h = cfg.step();
    for reach in [1usize, 2] {
        let lo = centre.saturating_sub(reach) as f64 * h;
        let hi = (centre + reach).min(len - 1) as f64 * h;
        if g(lo) >= 0.0 && g(hi) <= 0.0 {
            let (mut a, mut b) = (lo, hi);
            while b - a > 1e-14 * b.max(1.0) {
                let m = 0.5 * (a + b);
                if g(m) > 0.0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            return Some(0.5 * (a + b));
        }
    }
    None
}

/// Formats `x` with `digits` significant digits, `%g` style: fixed notation
/// for decimal exponents in `[-5, digits)`, scientific otherwise, trailing
/// zeros removed.
pub fn format_number(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        return format!("{m}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn num(x: f64) -> String {
    format_number(x, CSV_SIGNIFICANT_DIGITS)
}

/// Header block describing a trajectory run.
pub fn trajectory_metadata(cfg: &TrajectoryConfig) -> Vec<String> {
    let c = cfg.initial.components();
    let mut meta = vec![
        format!("corrdyn {}", env!("CARGO_PKG_VERSION")),
        format!("initial c1={} c2={} c3={}", num(c[0]), num(c[1]), num(c[2])),
        format!(
            "channel={} gamma={} tmax={} samples={}",
            cfg.channel.kind(),
            num(cfg.channel.gamma()),
            num(cfg.gamma_t_max),
            cfg.samples
        ),
    ];
    if let Some(p) = class_params(&cfg.initial, cfg.channel.kind()) {
        meta.push(format!(
            "class={}:{}:{}",
            cfg.channel.kind(),
            p.sign(),
            num(p.kappa())
        ));
    }
    if let Some(tb) = transition_time(&cfg.initial, &cfg.channel) {
        meta.push(format!("gamma_t_bar={}", num(tb * cfg.channel.gamma())));
    }
    meta
}

/// Writes a trajectory as CSV. `extra_meta` lines are appended to the
/// metadata block.
pub fn write_trajectory_csv<W: Write>(
    traj: &Trajectory,
    extra_meta: &[String],
    out: &mut W,
) -> io::Result<()> {
    out.write_all(trajectory_csv(traj, extra_meta).as_bytes())
}

pub fn trajectory_csv(traj: &Trajectory, extra_meta: &[String]) -> String {
    let mut s = String::new();
    for line in trajectory_metadata(&traj.config).iter().chain(extra_meta) {
        let _ = writeln!(s, "# {line}");
    }
    s.push_str(&TRAJECTORY_COLUMNS.join(","));
    s.push('\n');
    for r in &traj.rows {
        let mut fields: Vec<String> = Vec::with_capacity(TRAJECTORY_COLUMNS.len());
        fields.push(num(r.gamma_t));
        fields.extend(r.state.components().iter().map(|x| num(*x)));
        fields.extend(r.lam_sorted.iter().map(|x| num(*x)));
        let rep = &r.report;
        fields.push(num(rep.mutual_info));
        fields.push(num(rep.classical));
        fields.push(num(rep.discord));
        fields.push(num(rep.entanglement));
        fields.push(rep.dissonance.map_or_else(|| "nan".to_string(), num));
        fields.push(num(r.q_cl));
        fields.push(format!("{}|{}", r.pair_high[0], r.pair_high[1]));
        s.push_str(&fields.join(","));
        s.push('\n');
    }
    s
}

/// Maximum deviations between the closed forms along a trajectory and the
/// numerical oracles.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OracleDeviations {
    /// Entrywise deviation of the RK4 density matrix from the analytic one.
    pub lindblad: Option<f64>,
    /// Deviation of the measurement search from the closed-form `C`.
    pub optimizer: Option<f64>,
}

impl OracleDeviations {
    pub fn metadata(&self) -> Vec<String> {
        let mut v = Vec::new();
        if let Some(x) = self.lindblad {
            v.push(format!("oracle lindblad_max_dev={}", format_number(x, 3)));
        }
        if let Some(x) = self.optimizer {
            v.push(format!("oracle optimizer_max_dev={}", format_number(x, 3)));
        }
        v
    }
}

/// Re-derives a trajectory through the numerical oracles.
///
/// The master equation is integrated row to row with step `1e-4/γ`.
pub fn oracle_deviations(
    traj: &Trajectory,
    lindblad: bool,
    grid_n: Option<usize>,
) -> Result<OracleDeviations> {
    let mut out = OracleDeviations::default();
    let ch = traj.config.channel;
    if lindblad {
        let dt = crate::channels::default_step(ch.gamma());
        let mut rho = traj.config.initial.to_density_matrix();
        let mut t_prev = 0.0;
        let mut worst = 0.0_f64;
        for r in &traj.rows {
            let t = r.gamma_t / ch.gamma();
            rho = integrate(&rho, &ch, t - t_prev, dt)?;
            t_prev = t;
            worst = worst.max(rho.max_abs_diff(&r.state.to_density_matrix()));
        }
        out.lindblad = Some(worst);
    }
    if let Some(n) = grid_n {
        let worst = traj
            .rows
            .par_iter()
            .map(|r| {
                classical_correlations_numeric(&r.state, n)
                    .map(|o| (o.value - r.report.classical).abs())
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0_f64, f64::max);
        out.optimizer = Some(worst);
    }
    Ok(out)
}
