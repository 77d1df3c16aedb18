mod config;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use corrdyn::correlations::closest_classical;
use corrdyn::figures::figure;
use corrdyn::trajectory::{format_number, oracle_deviations, trajectory_csv};
use corrdyn::validation::validate;
use corrdyn::{
    detect_transition, full_report, run_trajectory, sudden_death_time, transition_time,
    TrajectoryConfig,
};

use config::{RunArgs, RunConfig, Source, DEFAULT_SAMPLES, DEFAULT_TMAX};

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_NONPHYSICAL: u8 = 3;

/// Correlation dynamics of Bell-diagonal two-qubit states under local
/// bit-flip, bit-phase-flip and phase-flip noise.
#[derive(Debug, Parser)]
#[command(name = "corrdyn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve a state and write I, C, D, E, Q over a uniform gamma*t grid as CSV.
    Evolve(RunArgs),
    /// Print the transition and sudden-death times and the kink found in D.
    Transition(RunArgs),
    /// Write the data table of reference figure 1, 2 or 3.
    Fig {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        id: u8,
        #[arg(long, default_value = ".")]
        outdir: PathBuf,
    },
    /// Check closed forms against the numerical oracles on random states.
    Validate {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Print every correlation measure of a single state.
    Report(RunArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let nonphysical = e.chain().any(|c| {
                matches!(
                    c.downcast_ref::<corrdyn::Error>(),
                    Some(
                        corrdyn::Error::NonPhysical { .. }
                            | corrdyn::Error::InvalidDensityMatrix(_)
                    )
                )
            });
            ExitCode::from(if nonphysical {
                EXIT_NONPHYSICAL
            } else {
                EXIT_USAGE
            })
        }
    }
}

fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Evolve(args) => evolve(&args)?,
        Command::Transition(args) => transition(&args)?,
        Command::Fig { id, outdir } => fig(id, &outdir)?,
        Command::Validate { seed, n } => {
            let report = validate(seed, n as usize)?;
            println!("{report}");
            if !report.passed() {
                return Ok(ExitCode::from(EXIT_VALIDATION));
            }
        }
        Command::Report(args) => report(&args)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn num(x: f64) -> String {
    format_number(x, 9)
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .context("cannot write to stdout"),
    }
}

fn evolve(args: &RunArgs) -> Result<()> {
    let rc = RunConfig::resolve(args)?;
    let cfg = TrajectoryConfig::new(
        rc.initial()?,
        rc.channel_spec()?,
        rc.tmax.unwrap_or(DEFAULT_TMAX),
        rc.samples.unwrap_or(DEFAULT_SAMPLES),
    )?;
    let traj = run_trajectory(&cfg)?;
    let extra = if rc.lindblad || rc.grid_n.is_some() {
        oracle_deviations(&traj, rc.lindblad, rc.grid_n)?.metadata()
    } else {
        Vec::new()
    };
    emit(rc.out.as_ref(), &trajectory_csv(&traj, &extra))
}

fn transition(args: &RunArgs) -> Result<()> {
    let rc = RunConfig::resolve(args)?;
    let state = rc.initial()?;
    let ch = rc.channel_spec()?;
    let gamma = ch.gamma();
    let t_bar = transition_time(&state, &ch);
    let t_s = sudden_death_time(&state, &ch);

    let mut lines = vec![
        format!(
            "state c1={} c2={} c3={}",
            num(state.c1()),
            num(state.c2()),
            num(state.c3())
        ),
        format!("channel={} gamma={}", ch.kind(), num(gamma)),
    ];
    let label = match rc.source {
        Source::Class(_) => "sudden transition",
        Source::Vector(_) if corrdyn::correlations::is_transition_class(&state, ch.kind()) => {
            "sudden transition"
        }
        Source::Vector(_) => "χ-crossing time",
    };
    lines.push(match t_bar {
        Some(t) => format!("{label} gamma_t={}", num(t * gamma)),
        None => format!("{label} gamma_t=none"),
    });
    lines.push(match t_s {
        Some(t) => format!("sudden death gamma_t={}", num(t * gamma)),
        None if corrdyn::entanglement_re(&state) > 0.0 => {
            "sudden death gamma_t=none (entangled throughout)".to_string()
        }
        None => "sudden death gamma_t=none (separable)".to_string(),
    });

    // The scan window covers the analytic transition with room on both sides.
    let tmax = rc
        .tmax
        .unwrap_or_else(|| t_bar.map_or(DEFAULT_TMAX, |t| (2.0 * t * gamma).max(DEFAULT_TMAX)));
    let cfg = TrajectoryConfig::new(state, ch, tmax, rc.samples.unwrap_or(DEFAULT_SAMPLES))?;
    let traj = run_trajectory(&cfg)?;
    lines.push(match detect_transition(&traj)? {
        Some(d) => format!(
            "detected kink gamma_t={} +/- {}{}",
            num(d.gamma_t),
            num(d.uncertainty),
            if d.refined { " (refined)" } else { "" }
        ),
        None => format!("detected kink none on [0, {}]", num(tmax)),
    });
    let mut text = lines.join("\n");
    text.push('\n');
    emit(rc.out.as_ref(), &text)
}

fn fig(id: u8, outdir: &PathBuf) -> Result<()> {
    let table = figure(id)?;
    fs::create_dir_all(outdir).with_context(|| format!("cannot create {}", outdir.display()))?;
    let path = outdir.join(table.file_name());
    fs::write(&path, table.to_csv()).with_context(|| format!("cannot write {}", path.display()))?;
    println!("{}", path.display());
    Ok(())
}

fn report(args: &RunArgs) -> Result<()> {
    let rc = RunConfig::resolve(args)?;
    let state = rc.initial()?;
    let r = full_report(&state);
    let cl = closest_classical(&state);
    let sorted = state.bell_spectrum().sorted();

    let mut lines = vec![format!(
        "c1={} c2={} c3={}",
        num(state.c1()),
        num(state.c2()),
        num(state.c3())
    )];
    for (lam, label) in sorted {
        lines.push(format!("lambda {label:<4} {}", num(lam)));
    }
    lines.push(format!("I {}", num(r.mutual_info)));
    lines.push(format!("C {}", num(r.classical)));
    lines.push(format!("D {}", num(r.discord)));
    lines.push(format!("E {}", num(r.entanglement)));
    lines.push(match r.dissonance {
        Some(q) => format!("Q {}", num(q)),
        None => "Q undefined (pure entangled state)".to_string(),
    });
    lines.push(format!(
        "closest classical q={} pair={}|{}",
        num(cl.q),
        cl.pair_high[0],
        cl.pair_high[1]
    ));
    let mut text = lines.join("\n");
    text.push('\n');
    emit(rc.out.as_ref(), &text)
}
