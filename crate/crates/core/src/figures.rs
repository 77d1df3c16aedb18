//! Data tables for the three reference plots.
//!
//! 1. `I`, `C`, `D` and the four Bell populations for the phase-flip class
//!    state with `κ = 0.6`, `γt ∈ [0, 1]`.
//! 2. `E` and `D` for `κ = 0.3`, `γt ∈ [0, 2]`.
//! 3. `E`, `D` and `Q` for `κ = 0.6`, `γt ∈ [0, 1]`.

use std::fmt::Write as _;

use crate::channels::{class_state, ChannelKind, ChannelSpec, Sign, TransitionClassParams};
use crate::correlations::{sudden_death_time, transition_time};
use crate::error::{Error, Result};
use crate::trajectory::{format_number, run_trajectory, TrajectoryConfig, CSV_SIGNIFICANT_DIGITS};

pub const FIGURE_SAMPLES: usize = 512;

#[derive(Debug, Clone, PartialEq)]
pub struct FigureTable {
    pub id: u8,
    pub meta: Vec<String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl FigureTable {
    pub fn file_name(&self) -> String {
        format!("fig{}.csv", self.id)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for m in &self.meta {
            let _ = writeln!(s, "# {m}");
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for r in &self.rows {
            let line: Vec<String> = r
                .iter()
                .map(|x| format_number(*x, CSV_SIGNIFICANT_DIGITS))
                .collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        s
    }
}

fn config(kappa: f64, gamma_t_max: f64) -> Result<TrajectoryConfig> {
    let ch = ChannelSpec::new(ChannelKind::PhaseFlip, 1.0)?;
    let p = TransitionClassParams::new(Sign::Plus, kappa)?;
    TrajectoryConfig::new(class_state(ch.kind(), &p), ch, gamma_t_max, FIGURE_SAMPLES)
}

/// Builds the table for figure `id` (1, 2 or 3).
pub fn figure(id: u8) -> Result<FigureTable> {
    let (kappa, tmax, columns): (f64, f64, Vec<&'static str>) = match id {
        1 => (
            0.6,
            1.0,
            vec![
                "gamma_t",
                "I",
                "C",
                "D",
                "lam_psi_plus",
                "lam_psi_minus",
                "lam_phi_plus",
                "lam_phi_minus",
            ],
        ),
        2 => (0.3, 2.0, vec!["gamma_t", "E", "D"]),
        3 => (0.6, 1.0, vec!["gamma_t", "E", "D", "Q"]),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "unknown figure id {id}; expected 1, 2 or 3"
            )))
        }
    };
    let cfg = config(kappa, tmax)?;
    let traj = run_trajectory(&cfg)?;
    let rows = traj
        .rows
        .iter()
        .map(|r| {
            let rep = &r.report;
            let q = rep.dissonance.unwrap_or(f64::NAN);
            match id {
                1 => vec![
                    r.gamma_t,
                    rep.mutual_info,
                    rep.classical,
                    rep.discord,
                    r.spectrum.psi_plus(),
                    r.spectrum.psi_minus(),
                    r.spectrum.phi_plus(),
                    r.spectrum.phi_minus(),
                ],
                2 => vec![r.gamma_t, rep.entanglement, rep.discord],
                _ => vec![r.gamma_t, rep.entanglement, rep.discord, q],
            }
        })
        .collect();

    let gamma = cfg.channel.gamma();
    let mut meta = vec![
        format!("corrdyn {}", env!("CARGO_PKG_VERSION")),
        format!("figure {id}: class=phase:+:{kappa} gamma=1 tmax={tmax} samples={FIGURE_SAMPLES}"),
    ];
    if let Some(tb) = transition_time(&cfg.initial, &cfg.channel) {
        meta.push(format!(
            "gamma_t_bar={}",
            format_number(tb * gamma, CSV_SIGNIFICANT_DIGITS)
        ));
    }
    if let Some(ts) = sudden_death_time(&cfg.initial, &cfg.channel) {
        meta.push(format!(
            "gamma_t_s={}",
            format_number(ts * gamma, CSV_SIGNIFICANT_DIGITS)
        ));
    }
    Ok(FigureTable {
        id,
        meta,
        columns,
        rows,
    })
}
