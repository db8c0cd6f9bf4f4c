//! Run configuration: TOML file, per-command sections, flag overrides.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::CliError;
use crate::format::fmt_g;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    WeightProfile,
    GrandPotential,
    Energy,
    MeanfieldDemo,
}

impl Command {
    pub const ALL: [Command; 4] = [
        Command::WeightProfile,
        Command::GrandPotential,
        Command::Energy,
        Command::MeanfieldDemo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::WeightProfile => "weight-profile",
            Command::GrandPotential => "grand-potential",
            Command::Energy => "energy",
            Command::MeanfieldDemo => "meanfield-demo",
        }
    }
}

/// Inverse temperatures: one value, an explicit list, or `steps` evenly
/// spaced values from `start` to `stop`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(try_from = "RawBeta")]
pub enum BetaSpec {
    One(f64),
    List(Vec<f64>),
    Range { start: f64, stop: f64, steps: usize },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawBeta {
    One(f64),
    List(Vec<f64>),
    Range { start: f64, stop: f64, steps: usize },
    Text(String),
}

impl TryFrom<RawBeta> for BetaSpec {
    type Error = String;

    fn try_from(raw: RawBeta) -> Result<Self, String> {
        Ok(match raw {
            RawBeta::One(b) => BetaSpec::One(b),
            RawBeta::List(v) => BetaSpec::List(v),
            RawBeta::Range { start, stop, steps } => BetaSpec::Range { start, stop, steps },
            RawBeta::Text(s) => BetaSpec::parse(&s).map_err(|e| e.to_string())?,
        })
    }
}

impl BetaSpec {
    /// `a,b,c` or `start:stop:steps`.
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Config(format!("cannot parse beta grid '{s}'"));
        let s = s.trim();
        if s.is_empty() {
            return Ok(BetaSpec::List(Vec::new()));
        }
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 3 {
                return Err(bad());
            }
            return Ok(BetaSpec::Range {
                start: parts[0].trim().parse().map_err(|_| bad())?,
                stop: parts[1].trim().parse().map_err(|_| bad())?,
                steps: parts[2].trim().parse().map_err(|_| bad())?,
            });
        }
        s.split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()
            .map(BetaSpec::List)
    }

    pub fn values(&self) -> Vec<f64> {
        match self {
            BetaSpec::One(b) => vec![*b],
            BetaSpec::List(v) => v.clone(),
            BetaSpec::Range { start, stop, steps } => match steps {
                0 => Vec::new(),
                1 => vec![*start],
                n => (0..*n)
                    .map(|k| start + (stop - start) * k as f64 / (n - 1) as f64)
                    .collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Positions {
    Line(Vec<f64>),
    Points(Vec<Vec<f64>>),
}

/// Every recognised key; all optional so file, section and flags can be
/// layered.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub beta: Option<BetaSpec>,
    pub z: Option<f64>,
    pub d: Option<usize>,
    pub stats: Option<String>,
    pub w_method: Option<String>,
    pub nmax: Option<usize>,
    pub bigw_order: Option<usize>,
    pub smallw_order: Option<usize>,
    pub cutoff: Option<f64>,
    pub nodes: Option<usize>,
    pub use_wh: Option<bool>,
    pub l_max: Option<usize>,
    pub line_max: Option<f64>,
    pub points: Option<usize>,
    pub particles: Option<usize>,
    pub spacing: Option<f64>,
    pub confinement: Option<f64>,
    pub positions: Option<Positions>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident; $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl Settings {
    /// Values set in `other` win.
    pub fn overlay(&mut self, other: &Settings) {
        overlay!(self, other; beta, z, d, stats, w_method, nmax, bigw_order, smallw_order, cutoff,
            nodes, use_wh, l_max, line_max, points, particles, spacing, confinement, positions,
            samples, seed, out);
    }

    /// Top-level keys, then the section named after `cmd`.
    pub fn from_toml(text: &str, cmd: Command) -> Result<Self, CliError> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| {
            CliError::Config(format!("invalid config: {}", e.message()))
        })?;
        let mut common = toml::Table::new();
        let mut section = None;
        for (key, value) in table {
            match value {
                toml::Value::Table(t) if Command::ALL.iter().any(|c| c.name() == key) => {
                    if key == cmd.name() {
                        section = Some(t);
                    }
                }
                v => {
                    common.insert(key, v);
                }
            }
        }
        let mut settings = Self::from_table(common)?;
        if let Some(t) = section {
            settings.overlay(&Self::from_table(t)?);
        }
        Ok(settings)
    }

    pub fn from_file(path: &Path, cmd: Command) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text, cmd)
    }

    fn from_table(t: toml::Table) -> Result<Self, CliError> {
        Settings::deserialize(toml::Value::Table(t)).map_err(|e| CliError::Config(format!("invalid config: {}", e.message())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodKind {
    Exact,
    BigW,
    SmallW,
}

impl MethodKind {
    fn parse(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(Self::Exact),
            "bigw" => Ok(Self::BigW),
            "smallw" => Ok(Self::SmallW),
            _ => Err(CliError::Config(format!("unknown w-method '{s}' (exact, bigw, smallw)"))),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::BigW => "bigw",
            Self::SmallW => "smallw",
        }
    }
}

/// Settings with defaults filled in and checked.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub betas: Vec<f64>,
    pub z: f64,
    pub d: usize,
    pub fermion: bool,
    pub method: MethodKind,
    pub nmax: Option<usize>,
    pub bigw_order: usize,
    pub smallw_order: usize,
    pub cutoff: Option<f64>,
    pub nodes: Option<usize>,
    pub use_wh: bool,
    pub l_max: usize,
    pub line_max: Option<f64>,
    pub points: usize,
    pub particles: usize,
    pub spacing: f64,
    pub confinement: f64,
    pub positions: Option<Vec<Vec<f64>>>,
    pub samples: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

pub const MAX_PARTICLES: usize = 16;

fn default_betas(cmd: Command) -> BetaSpec {
    match cmd {
        Command::WeightProfile => BetaSpec::Range {
            start: 0.1,
            stop: 3.0,
            steps: 30,
        },
        Command::GrandPotential | Command::Energy => BetaSpec::Range {
            start: 0.2,
            stop: 5.0,
            steps: 25,
        },
        Command::MeanfieldDemo => BetaSpec::One(1.0),
    }
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Config(format!("{name} must be positive and finite, got {v}")))
    }
}

impl RunConfig {
    pub fn resolve(cmd: Command, s: &Settings) -> Result<Self, CliError> {
        let betas = s.beta.clone().unwrap_or_else(|| default_betas(cmd)).values();
        if betas.is_empty() {
            return Err(CliError::Config("the beta grid is empty".into()));
        }
        for &b in &betas {
            positive("beta", b)?;
        }
        let d = s.d.unwrap_or(1);
        if !(1..=3).contains(&d) {
            return Err(CliError::Config(format!("d must be 1, 2 or 3, got {d}")));
        }
        let fermion = match s.stats.as_deref().map(str::to_ascii_lowercase).as_deref() {
            None | Some("boson") => false,
            Some("fermion") => true,
            Some(other) => return Err(CliError::Config(format!("unknown statistics '{other}' (boson, fermion)"))),
        };
        let positions = match &s.positions {
            None => None,
            Some(Positions::Line(xs)) => Some(
                xs.iter()
                    .map(|&x| {
                        let mut v = vec![0.0; d];
                        v[0] = x;
                        v
                    })
                    .collect::<Vec<_>>(),
            ),
            Some(Positions::Points(ps)) => {
                if ps.iter().any(|p| p.len() != d) {
                    return Err(CliError::Config(format!("every position needs {d} components")));
                }
                Some(ps.clone())
            }
        };
        let particles = positions.as_ref().map_or(s.particles.unwrap_or(2), Vec::len);
        if cmd == Command::MeanfieldDemo && !(1..=MAX_PARTICLES).contains(&particles) {
            return Err(CliError::Config(format!(
                "chain size must be between 1 and {MAX_PARTICLES}, got {particles}"
            )));
        }
        let z = s.z.unwrap_or(1.0);
        positive("z", z)?;
        let cutoff = s.cutoff.map(|r| positive("cutoff", r)).transpose()?;
        let line_max = s.line_max.map(|r| positive("line_max", r)).transpose()?;
        let points = s.points.unwrap_or(41);
        if points < 2 {
            return Err(CliError::Config("points must be at least 2".into()));
        }
        Ok(Self {
            command: cmd,
            betas,
            z,
            d,
            fermion,
            method: MethodKind::parse(s.w_method.as_deref().unwrap_or("exact"))?,
            nmax: s.nmax,
            bigw_order: s.bigw_order.unwrap_or(5),
            smallw_order: s.smallw_order.unwrap_or(4),
            cutoff,
            nodes: s.nodes,
            use_wh: s.use_wh.unwrap_or(false),
            l_max: s.l_max.unwrap_or(50),
            line_max,
            points,
            particles,
            spacing: positive("spacing", s.spacing.unwrap_or(2f64.powf(1.0 / 6.0)))?,
            confinement: s.confinement.unwrap_or(0.0),
            positions,
            samples: s.samples.unwrap_or(4),
            seed: s.seed.unwrap_or(1),
            out: s.out.clone(),
        })
    }

    /// `#`-prefixed description of every setting that affects the output.
    pub fn header(&self) -> String {
        let mut h = String::new();
        let list = |xs: &[f64]| xs.iter().map(|&x| fmt_g(x)).collect::<Vec<_>>().join(",");
        let _ = writeln!(h, "# qsm {}", self.command.name());
        let _ = writeln!(h, "# beta = {}", list(&self.betas));
        let _ = writeln!(h, "# z = {}", fmt_g(self.z));
        let _ = writeln!(h, "# d = {}", self.d);
        match self.command {
            Command::WeightProfile => {
                let _ = writeln!(h, "# nmax = {}", self.nmax_label());
                let _ = writeln!(h, "# bigw_order = {}", self.bigw_order);
                let _ = writeln!(h, "# smallw_order = {}", self.smallw_order);
                match self.line_max {
                    Some(m) => {
                        let _ = writeln!(h, "# line_max = {}", fmt_g(m));
                        let _ = writeln!(h, "# points = {}", self.points);
                    }
                    None => {
                        let _ = writeln!(h, "# line_max = none");
                    }
                }
            }
            Command::GrandPotential | Command::Energy => {
                if self.command == Command::GrandPotential {
                    let _ = writeln!(h, "# stats = {}", if self.fermion { "fermion" } else { "boson" });
                } else {
                    let _ = writeln!(h, "# l_max = {}", self.l_max);
                    let _ = writeln!(h, "# use_wh = {}", self.use_wh);
                }
                let _ = writeln!(h, "# w_method = {}", self.method.name());
                let _ = writeln!(h, "# {}", self.order_label());
                let _ = writeln!(h, "# cutoff = {}", self.cutoff.map_or("none".into(), fmt_g));
                let _ = writeln!(
                    h,
                    "# nodes = {}",
                    self.nodes.map_or("auto".to_string(), |n| n.to_string())
                );
            }
            Command::MeanfieldDemo => {
                let _ = writeln!(h, "# nmax = {}", self.nmax_label());
                let _ = writeln!(h, "# particles = {}", self.particles);
                match &self.positions {
                    Some(ps) => {
                        let flat: Vec<String> = ps.iter().map(|p| list(p)).collect();
                        let _ = writeln!(h, "# positions = {}", flat.join(";"));
                    }
                    None => {
                        let _ = writeln!(h, "# spacing = {}", fmt_g(self.spacing));
                    }
                }
                let _ = writeln!(h, "# confinement = {}", fmt_g(self.confinement));
                let _ = writeln!(h, "# samples = {}", self.samples);
                let _ = writeln!(h, "# seed = {}", self.seed);
            }
        }
        h
    }

    fn nmax_label(&self) -> String {
        self.nmax.map_or("adaptive".to_string(), |n| n.to_string())
    }

    fn order_label(&self) -> String {
        match self.method {
            MethodKind::Exact => format!("nmax = {}", self.nmax_label()),
            MethodKind::BigW => format!("bigw_order = {}", self.bigw_order),
            MethodKind::SmallW => format!("smallw_order = {}", self.smallw_order),
        }
    }
}
