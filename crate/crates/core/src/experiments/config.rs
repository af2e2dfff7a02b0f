//! Flat `key = value` experiment configuration.
//!
//! ```text
//! # Gaussian sweep
//! scenario = line_sweep
//! axis = y
//! theta = pi/2
//! sigma = 1, 2, 5, 10
//! steps = 20
//! ```
//!
//! Lists are comma separated. Angles accept plain numbers or multiples of
//! `pi` such as `pi/2`, `3pi/4` or `-2*pi`. Every key can also be set
//! programmatically through [`ExperimentConfig::set`], which is how CLI flags
//! override file values.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::coin::Axis;
use crate::error::{Error, Result};

/// Keys understood by [`ExperimentConfig::set`].
pub const KEYS: [&str; 18] = [
    "scenario", "axis", "theta", "sigma", "steps", "t_max", "dim", "probe", "coin", "alpha",
    "gamma", "n", "x0", "m", "output", "graph", "families", "perturb",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scenario {
    LineSweep,
    EnhancedTable,
    ClosedFormCheck,
    Custom,
}

impl Scenario {
    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::LineSweep => "line_sweep",
            Scenario::EnhancedTable => "enhanced_table",
            Scenario::ClosedFormCheck => "closed_form_check",
            Scenario::Custom => "custom",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.replace('-', "_").as_str() {
            "line_sweep" => Ok(Scenario::LineSweep),
            "enhanced_table" | "enhanced" => Ok(Scenario::EnhancedTable),
            "closed_form_check" | "check" => Ok(Scenario::ClosedFormCheck),
            "custom" | "simulate" => Ok(Scenario::Custom),
            _ => Err(format!("unknown scenario `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeKind {
    Localized,
    Gaussian,
    Uniform,
}

impl FromStr for ProbeKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "localized" => Ok(ProbeKind::Localized),
            "gaussian" => Ok(ProbeKind::Gaussian),
            "uniform" => Ok(ProbeKind::Uniform),
            _ => Err(format!(
                "unknown probe `{s}` (expected localized, gaussian or uniform)"
            )),
        }
    }
}

/// Coin state of the probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoinChoice {
    /// Coin index 0, the "−1" branch.
    Minus,
    /// The last coin index.
    Plus,
    /// `(|e_min⟩ + e^{iγ}|e_max⟩)/√2` for the encoding axis, `γ` from the first `gamma`.
    Optimal,
    /// `α|−1⟩ + e^{iγ}√(1−α²)|+1⟩` from the first `alpha` and `gamma`; qubits only.
    Qubit,
}

impl FromStr for CoinChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "minus" | "-1" => Ok(CoinChoice::Minus),
            "plus" | "+1" => Ok(CoinChoice::Plus),
            "optimal" => Ok(CoinChoice::Optimal),
            "qubit" | "alpha" => Ok(CoinChoice::Qubit),
            _ => Err(format!(
                "unknown coin `{s}` (expected minus, plus, optimal or qubit)"
            )),
        }
    }
}

/// Closed-form families exercised by the check scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    LineZ,
    LineXy,
    Enhanced,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::LineZ, Family::LineXy, Family::Enhanced];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::LineZ => "line_z",
            Family::LineXy => "line_xy",
            Family::Enhanced => "enhanced",
        }
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "line_z" => Ok(Family::LineZ),
            "line_xy" => Ok(Family::LineXy),
            "enhanced" => Ok(Family::Enhanced),
            _ => Err(format!(
                "unknown family `{s}` (expected line_z, line_xy or enhanced)"
            )),
        }
    }
}

/// Settings for one experiment run. `None` fields fall back to
/// scenario-dependent defaults through the accessor methods.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub axes: Option<Vec<Axis>>,
    pub thetas: Option<Vec<f64>>,
    pub sigmas: Vec<f64>,
    pub steps: Option<usize>,
    pub dims: Vec<usize>,
    pub probe: Option<ProbeKind>,
    pub coin: Option<CoinChoice>,
    pub alphas: Option<Vec<f64>>,
    pub gammas: Option<Vec<f64>>,
    /// Ring size override.
    pub n: Option<usize>,
    /// Initial vertex, 1-based.
    pub x0: Option<usize>,
    pub m: u64,
    pub output: Option<PathBuf>,
    pub graph: Option<PathBuf>,
    pub families: Vec<Family>,
    /// Angle of a fixed rotation about another axis appended to every coin.
    /// Zero disables it; anything else breaks the closed forms on purpose.
    pub perturb: f64,
}

impl ExperimentConfig {
    pub fn new(scenario: Scenario) -> Self {
        ExperimentConfig {
            scenario,
            axes: None,
            thetas: None,
            sigmas: vec![1.0, 2.0, 5.0, 10.0],
            steps: None,
            dims: vec![2],
            probe: None,
            coin: None,
            alphas: None,
            gammas: None,
            n: None,
            x0: None,
            m: 1,
            output: None,
            graph: None,
            families: Family::ALL.to_vec(),
            perturb: 0.0,
        }
    }

    /// Parses config text. `source` names the file in error paths.
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        Self::parse_with_default(text, source, None)
    }

    /// Like [`parse`](Self::parse), using `fallback` when the text has no `scenario` key.
    pub fn parse_with_default(
        text: &str,
        source: &str,
        fallback: Option<Scenario>,
    ) -> Result<Self> {
        let mut entries = Vec::new();
        let mut scenario = None;
        for (idx, raw) in text.lines().enumerate() {
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let at = format!("{source}:{}", idx + 1);
            let (key, value) = body.split_once('=').ok_or_else(|| {
                Error::config(&at, format!("expected `key = value`, found `{body}`"))
            })?;
            let (key, value) = (key.trim(), value.trim());
            if key == "scenario" {
                scenario = Some(value.parse().map_err(|e: String| Error::config(&at, e))?);
            } else {
                entries.push((at, key.to_string(), value.to_string()));
            }
        }
        let scenario = scenario
            .or(fallback)
            .ok_or_else(|| Error::config(format!("{source}:scenario"), "missing `scenario` key"))?;
        let mut cfg = ExperimentConfig::new(scenario);
        for (at, key, value) in entries {
            cfg.set(&key, &value).map_err(|e| match e {
                Error::Config { path, message } => Error::config(format!("{at}:{path}"), message),
                other => other,
            })?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path, fallback: Option<Scenario>) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
        Self::parse_with_default(&text, &path.display().to_string(), fallback)
    }

    /// Sets one key from its textual value. Errors name the key, and the list
    /// position for list values.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "scenario" => {
                self.scenario = value.parse().map_err(|e: String| Error::config(key, e))?
            }
            "axis" => {
                self.axes = Some(parse_list(key, value, |s| {
                    s.parse::<Axis>().map_err(|e| e.to_string())
                })?)
            }
            "theta" => self.thetas = Some(parse_list(key, value, parse_angle)?),
            "sigma" => {
                self.sigmas = parse_list(key, value, |s| {
                    let v = parse_f64(s)?;
                    if v > 0.0 && v.is_finite() {
                        Ok(v)
                    } else {
                        Err(format!("sigma must be positive, got {s}"))
                    }
                })?
            }
            "steps" | "t_max" => {
                let t: usize = parse_one(key, value)?;
                if t == 0 {
                    return Err(Error::config(key, "must be at least 1"));
                }
                self.steps = Some(t);
            }
            "dim" => {
                self.dims = parse_list(key, value, |s| match s.parse::<usize>() {
                    Ok(d) if d >= 2 => Ok(d),
                    _ => Err(format!("coin dimension must be an integer ≥ 2, got `{s}`")),
                })?
            }
            "probe" => self.probe = Some(value.parse().map_err(|e: String| Error::config(key, e))?),
            "coin" => self.coin = Some(value.parse().map_err(|e: String| Error::config(key, e))?),
            "alpha" => {
                self.alphas = Some(parse_list(key, value, |s| {
                    let a = parse_f64(s)?;
                    if (0.0..=1.0).contains(&a) {
                        Ok(a)
                    } else {
                        Err(format!("alpha must lie in [0, 1], got {s}"))
                    }
                })?)
            }
            "gamma" => self.gammas = Some(parse_list(key, value, parse_angle)?),
            "n" => {
                let n: usize = parse_one(key, value)?;
                if n < 3 {
                    return Err(Error::config(key, "ring size must be at least 3"));
                }
                self.n = Some(n);
            }
            "x0" => {
                let x: usize = parse_one(key, value)?;
                if x == 0 {
                    return Err(Error::config(key, "vertices are numbered from 1"));
                }
                self.x0 = Some(x);
            }
            "m" => {
                let m: u64 = parse_one(key, value)?;
                if m == 0 {
                    return Err(Error::config(key, "measurement count must be positive"));
                }
                self.m = m;
            }
            "output" => self.output = Some(PathBuf::from(value)),
            "graph" => self.graph = Some(PathBuf::from(value)),
            "families" => self.families = parse_list(key, value, |s| s.parse())?,
            "perturb" => self.perturb = parse_angle(value).map_err(|e| Error::config(key, e))?,
            _ => return Err(Error::config(key, "unknown key")),
        }
        Ok(())
    }

    pub fn axes(&self) -> Vec<Axis> {
        self.axes.clone().unwrap_or_else(|| match self.scenario {
            Scenario::EnhancedTable => vec![Axis::X],
            Scenario::ClosedFormCheck => vec![Axis::X, Axis::Y],
            _ => vec![Axis::Y],
        })
    }

    pub fn thetas(&self) -> Vec<f64> {
        self.thetas.clone().unwrap_or_else(|| match self.scenario {
            Scenario::EnhancedTable | Scenario::ClosedFormCheck => vec![0.3],
            _ => vec![FRAC_PI_2],
        })
    }

    pub fn steps(&self) -> usize {
        self.steps.unwrap_or(match self.scenario {
            Scenario::LineSweep => 20,
            Scenario::ClosedFormCheck => 12,
            _ => 10,
        })
    }

    pub fn probe(&self) -> ProbeKind {
        self.probe.unwrap_or(match self.scenario {
            Scenario::LineSweep => ProbeKind::Gaussian,
            _ => ProbeKind::Localized,
        })
    }

    pub fn coin(&self) -> CoinChoice {
        self.coin.unwrap_or(match self.scenario {
            Scenario::EnhancedTable => CoinChoice::Optimal,
            _ => CoinChoice::Minus,
        })
    }

    pub fn alphas(&self) -> Vec<f64> {
        self.alphas
            .clone()
            .unwrap_or_else(|| vec![0.0, 0.25, 0.5, FRAC_1_SQRT_2, 1.0])
    }

    pub fn gammas(&self) -> Vec<f64> {
        self.gammas.clone().unwrap_or_else(|| match self.scenario {
            Scenario::ClosedFormCheck => vec![0.0, FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4, PI],
            _ => vec![0.0],
        })
    }

    /// Checks cross-field constraints.
    pub fn validate(&self) -> Result<()> {
        for (key, empty) in [
            ("axis", self.axes().is_empty()),
            ("theta", self.thetas().is_empty()),
            ("sigma", self.sigmas.is_empty()),
            ("dim", self.dims.is_empty()),
            ("alpha", self.alphas().is_empty()),
            ("gamma", self.gammas().is_empty()),
            ("families", self.families.is_empty()),
        ] {
            if empty {
                return Err(Error::config(key, "list must not be empty"));
            }
        }
        if self.scenario == Scenario::EnhancedTable {
            if let Some(i) = self.dims.iter().position(|d| !(2..=6).contains(d)) {
                return Err(Error::config(
                    format!("dim[{i}]"),
                    "enhanced table supports D in [2, 6]",
                ));
            }
        }
        if self.scenario == Scenario::EnhancedTable
            && self.coin() == CoinChoice::Qubit
            && self.dims.iter().any(|&d| d != 2)
        {
            return Err(Error::config("coin", "the qubit coin needs dim = 2"));
        }
        if let Some(path) = &self.graph {
            if !path.is_file() {
                return Err(Error::config(
                    "graph",
                    format!("{} does not exist", path.display()),
                ));
            }
        }
        Ok(())
    }
}

fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("expected a finite number, got `{s}`"))
}

/// A number, or `[±][k][*]pi[/d]`.
pub fn parse_angle(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let Some((head, tail)) = s.split_once("pi") else {
        return parse_f64(s);
    };
    let bad = || format!("expected an angle such as `0.3`, `pi/2` or `3pi/4`, got `{s}`");
    let head = head.trim().trim_end_matches('*').trim();
    let factor = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let tail = tail.trim();
    let divisor = if tail.is_empty() {
        1.0
    } else {
        let d = tail.strip_prefix('/').ok_or_else(bad)?;
        d.trim()
            .parse::<f64>()
            .ok()
            .filter(|&d| d != 0.0)
            .ok_or_else(bad)?
    };
    let v = factor * PI / divisor;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

fn parse_one<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(key, format!("invalid value `{value}`")))
}

fn parse_list<T>(
    key: &str,
    value: &str,
    item: impl Fn(&str) -> std::result::Result<T, String>,
) -> Result<Vec<T>> {
    if value.is_empty() {
        return Err(Error::config(key, "list must not be empty"));
    }
    value
        .split(',')
        .enumerate()
        .map(|(i, s)| item(s.trim()).map_err(|e| Error::config(format!("{key}[{i}]"), e)))
        .collect()
}
