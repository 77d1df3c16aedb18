//! Run configuration from flags and flat `key = value` files.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use corrdyn::channels::class_state;
use corrdyn::{
    make_state, ChannelKind, ChannelSpec, CorrelationVector, Sign, TransitionClassParams,
};

pub const KEYS: [&str; 11] = [
    "c1", "c2", "c3", "class", "channel", "gamma", "tmax", "samples", "out", "lindblad", "grid_n",
];

pub const DEFAULT_SAMPLES: usize = 256;
pub const DEFAULT_TMAX: f64 = 1.0;

/// Flags shared by the subcommands that evolve a state.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Flat key = value file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub c1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c3: Option<f64>,
    /// Transition-class state as channel:sign:kappa, e.g. phase:+:0.6.
    #[arg(long, allow_hyphen_values = true)]
    pub class: Option<String>,
    /// bit, bit-phase or phase.
    #[arg(long)]
    pub channel: Option<String>,
    /// Decay rate (default 1).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// End of the time window in units of 1/gamma.
    #[arg(long)]
    pub tmax: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Cross-check every row against the RK4 master-equation integrator.
    #[arg(long)]
    pub lindblad: bool,
    /// Cross-check classical correlations with a measurement search on an
    /// n x n angle grid.
    #[arg(long = "grid-n")]
    pub grid_n: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassSpec {
    pub kind: ChannelKind,
    pub params: TransitionClassParams,
}

impl FromStr for ClassSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [kind, sign, kappa] = parts[..] else {
            bail!("class must look like channel:sign:kappa, got '{s}'");
        };
        let kind: ChannelKind = kind.parse()?;
        let sign: Sign = sign.parse()?;
        let kappa: f64 = kappa
            .trim()
            .parse()
            .map_err(|_| anyhow!("invalid kappa '{kappa}'"))?;
        Ok(Self {
            kind,
            params: TransitionClassParams::new(sign, kappa)?,
        })
    }
}

impl fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}",
            self.kind,
            self.params.sign(),
            self.params.kappa()
        )
    }
}

/// Entries of a config file with the line each came from.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub origin: String,
    entries: BTreeMap<String, (String, usize)>,
}

impl ConfigFile {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("{origin}:{line_no}: expected key = value, got '{line}'");
            };
            let key = key.trim().replace('-', "_");
            if !KEYS.contains(&key.as_str()) {
                bail!("{origin}:{line_no}: unknown key '{key}'");
            }
            if let Some((_, first)) = entries.get(&key) {
                bail!("{origin}:{line_no}: duplicate key '{key}' (first set on line {first})");
            }
            entries.insert(key, (value.trim().to_string(), line_no));
        }
        Ok(Self {
            origin: origin.to_string(),
            entries,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        Self::parse(&text, &path.display().to_string())
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some((v, line)) => v
                .parse()
                .map(Some)
                .map_err(|e| anyhow!("{}:{line}: invalid value for {key} '{v}': {e}", self.origin)),
        }
    }

    fn get_bool(&self, key: &str) -> Result<Option<bool>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((v, line)) => match v.to_ascii_lowercase().as_str() {
                "true" | "on" | "yes" | "1" => Ok(Some(true)),
                "false" | "off" | "no" | "0" => Ok(Some(false)),
                _ => bail!("{}:{line}: invalid value for {key} '{v}'", self.origin),
            },
        }
    }
}

/// Where the initial state comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Source {
    Vector([f64; 3]),
    Class(ClassSpec),
}

/// Fully resolved run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: Source,
    pub channel: Option<ChannelKind>,
    pub gamma: f64,
    pub tmax: Option<f64>,
    pub samples: Option<usize>,
    pub out: Option<PathBuf>,
    pub lindblad: bool,
    pub grid_n: Option<usize>,
}

impl RunConfig {
    /// Merges flags over the optional config file.
    pub fn resolve(args: &RunArgs) -> Result<Self> {
        let file = match &args.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };

        let c = [
            args.c1
                .map_or_else(|| file.get::<f64>("c1"), |v| Ok(Some(v)))?,
            args.c2
                .map_or_else(|| file.get::<f64>("c2"), |v| Ok(Some(v)))?,
            args.c3
                .map_or_else(|| file.get::<f64>("c3"), |v| Ok(Some(v)))?,
        ];
        let class: Option<ClassSpec> = match &args.class {
            Some(s) => Some(s.parse().context("invalid --class")?),
            None => file.get("class")?,
        };
        let channel: Option<ChannelKind> = match &args.channel {
            Some(s) => Some(s.parse()?),
            None => file.get("channel")?,
        };

        let any_c = c.iter().any(Option::is_some);
        let (source, channel) = match (class, any_c) {
            (Some(_), true) => bail!("give either c1, c2, c3 or class, not both"),
            (Some(cl), false) => {
                if let Some(k) = channel.filter(|k| *k != cl.kind) {
                    bail!("channel '{k}' conflicts with class channel '{}'", cl.kind);
                }
                (Source::Class(cl), Some(cl.kind))
            }
            (None, true) => {
                let [Some(c1), Some(c2), Some(c3)] = c else {
                    bail!("c1, c2 and c3 must all be given");
                };
                (Source::Vector([c1, c2, c3]), channel)
            }
            (None, false) => bail!("no initial state: give c1, c2, c3 or class"),
        };

        Ok(Self {
            source,
            channel,
            gamma: args
                .gamma
                .map_or_else(|| file.get("gamma"), |v| Ok(Some(v)))?
                .unwrap_or(1.0),
            tmax: args
                .tmax
                .map_or_else(|| file.get("tmax"), |v| Ok(Some(v)))?,
            samples: args
                .samples
                .map_or_else(|| file.get("samples"), |v| Ok(Some(v)))?,
            out: args
                .out
                .clone()
                .map_or_else(|| file.get("out"), |v| Ok(Some(v)))?,
            lindblad: args.lindblad || file.get_bool("lindblad")?.unwrap_or(false),
            grid_n: args
                .grid_n
                .map_or_else(|| file.get("grid_n"), |v| Ok(Some(v)))?,
        })
    }

    /// Builds the initial state. Physicality errors pass through unchanged.
    pub fn initial(&self) -> corrdyn::Result<CorrelationVector> {
        match self.source {
            Source::Vector([a, b, c]) => make_state(a, b, c),
            Source::Class(cl) => Ok(class_state(cl.kind, &cl.params)),
        }
    }

    pub fn channel_spec(&self) -> Result<ChannelSpec> {
        let Some(kind) = self.channel else {
            bail!("channel is required when the state is given as c1, c2, c3");
        };
        Ok(ChannelSpec::new(kind, self.gamma)?)
    }
}
