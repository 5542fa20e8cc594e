//! Scenario files (TOML).
//!
//! A scenario either lists the spin energies directly
//!
//! ```toml
//! [params]
//! omega = 1.0
//! g = 0.05
//! epsilons = [0.95, 1.05]
//! ```
//!
//! or describes them through a disorder model:
//!
//! ```toml
//! omega = 1.0
//! g = 0.05
//! L = 20
//!
//! [disorder]
//! kind = "equally_spaced"   # or "uniform", "gaussian"
//! width = 0.1               # band width, or σ for "gaussian"
//! ```

use std::f64::consts::PI;
use std::path::Path;

use dicke_core::{
    uniform_times, BellSign, DisorderSpec, InitialCondition, ModelParams, Observable, Params,
    SpinIndex,
};
use serde::Deserialize;

use crate::error::{CliError, Result};

pub const DEFAULT_STEPS: usize = 2000;
/// Default time window in units of the triangle-wave period `4π/d`.
pub const DEFAULT_PERIODS: f64 = 1.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Spectrum,
    #[default]
    Evolve,
    Compare,
    Sweep,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Subcommand run by `preset`.
    pub mode: Option<Mode>,
    pub seed: Option<u64>,
    pub params: Option<ExplicitParams>,
    pub omega: Option<f64>,
    pub g: Option<f64>,
    #[serde(rename = "L")]
    pub spins: Option<usize>,
    pub disorder: Option<DisorderConfig>,
    #[serde(default)]
    pub initial: InitialConfig,
    #[serde(default)]
    pub times: TimesConfig,
    pub outputs: Option<Vec<String>>,
    #[serde(default)]
    pub comparison: ComparisonConfig,
    pub sweep: Option<SweepConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitParams {
    pub omega: f64,
    pub g: f64,
    pub epsilons: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisorderKindConfig {
    EquallySpaced,
    #[serde(alias = "uniform_random")]
    Uniform,
    Gaussian,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisorderConfig {
    pub kind: DisorderKindConfig,
    /// Defaults to `omega`.
    pub center: Option<f64>,
    pub width: f64,
    pub seed: Option<u64>,
    #[serde(default)]
    pub pin_resonant: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedSpin {
    /// The spin closest to the cavity frequency.
    Resonant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum SpinRef {
    Index(usize),
    Named(NamedSpin),
}

impl SpinRef {
    fn resolve(self, params: &Params) -> SpinIndex {
        match self {
            SpinRef::Index(i) => SpinIndex(i),
            SpinRef::Named(NamedSpin::Resonant) => params.most_resonant_spin(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum SignConfig {
    #[serde(rename = "+", alias = "plus")]
    Plus,
    #[serde(rename = "-", alias = "minus")]
    Minus,
    #[serde(rename = "both")]
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialConfig {
    SingleSpin {
        spin: SpinRef,
    },
    SinglePhoton,
    /// `b` is given directly or as `a + separation`.
    Bell {
        a: SpinRef,
        b: Option<SpinRef>,
        separation: Option<usize>,
        sign: SignConfig,
    },
}

impl Default for InitialConfig {
    fn default() -> Self {
        InitialConfig::SingleSpin {
            spin: SpinRef::Named(NamedSpin::Resonant),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimesConfig {
    pub t_max: Option<f64>,
    pub steps: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BrightSource {
    /// Separated roots from the Bethe solver.
    #[default]
    Exact,
    /// Separated roots of the continuum equation.
    Continuum,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComparisonConfig {
    #[serde(default)]
    pub asymptotic: bool,
    #[serde(default)]
    pub oracle: bool,
    #[serde(default)]
    pub bright: BrightSource,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub seeds: Option<Vec<u64>>,
    pub seed_start: Option<u64>,
    pub runs: Option<usize>,
    #[serde(rename = "L")]
    pub spins: Option<Vec<usize>>,
    /// Minimum `|survival|` above which a run counts as non-decaying.
    pub threshold: Option<f64>,
}

/// Command-line settings that take precedence over the file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub asymptotic: bool,
    pub oracle: bool,
}

/// One initial condition of a scenario and the suffix for its output files.
#[derive(Debug, Clone, PartialEq)]
pub struct Run {
    pub suffix: Option<&'static str>,
    pub condition: InitialCondition,
}

/// A fully resolved single-parameter-set scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub params: Params,
    pub runs: Vec<Run>,
    pub times: TimesConfig,
    pub outputs: Vec<Observable>,
    pub asymptotic: bool,
    pub oracle: bool,
    pub bright: BrightSource,
}

impl Scenario {
    /// The configured grid, or `1.25·4π/d` with 2000 steps.
    pub fn time_grid(&self) -> Result<Vec<f64>> {
        time_grid(&self.times, &self.params)
    }
}

pub fn time_grid(times: &TimesConfig, params: &Params) -> Result<Vec<f64>> {
    let steps = times.steps.unwrap_or(DEFAULT_STEPS);
    if steps < 2 {
        return Err(CliError::config(format!("times.steps must be at least 2, got {steps}")));
    }
    let t_max = match times.t_max {
        Some(t) => t,
        None => {
            let d = params.mean_spacing().ok_or_else(|| {
                CliError::config("times.t_max is required when there is a single spin")
            })?;
            DEFAULT_PERIODS * 4.0 * PI / d
        }
    };
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(CliError::config(format!("times.t_max must be positive, got {t_max}")));
    }
    Ok(uniform_times(t_max, steps))
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode.unwrap_or_default()
    }

    /// Disorder seed: command line first, then the top-level `seed`, then
    /// `disorder.seed`.
    pub fn effective_seed(&self, overrides: &Overrides) -> u64 {
        overrides
            .seed
            .or(self.seed)
            .or(self.disorder.as_ref().and_then(|d| d.seed))
            .unwrap_or(0)
    }

    /// Builds the model, optionally replacing the spin count and seed.
    pub fn model(&self, spins: Option<usize>, seed: u64) -> Result<Params> {
        let explicit = self.params.as_ref();
        let generated = self.omega.is_some()
            || self.g.is_some()
            || self.spins.is_some()
            || self.disorder.is_some();
        match (explicit, generated) {
            (Some(_), true) => Err(CliError::config(
                "give either [params] with epsilons or omega/g/L with [disorder], not both",
            )),
            (Some(p), false) => {
                if spins.is_some_and(|l| l != p.epsilons.len()) {
                    return Err(CliError::config("explicit epsilons fix the spin count"));
                }
                Ok(ModelParams::new(p.omega, p.g, p.epsilons.clone())?)
            }
            (None, _) => {
                let missing = |name: &str| CliError::config(format!("missing `{name}`"));
                let omega = self.omega.ok_or_else(|| missing("omega"))?;
                let g = self.g.ok_or_else(|| missing("g"))?;
                let l = spins.or(self.spins).ok_or_else(|| missing("L"))?;
                let disorder = self.disorder.as_ref().ok_or_else(|| missing("disorder"))?;
                let center = disorder.center.unwrap_or(omega);
                let spec = match disorder.kind {
                    DisorderKindConfig::EquallySpaced => DisorderSpec::equally_spaced(center, disorder.width),
                    DisorderKindConfig::Uniform => DisorderSpec::uniform(center, disorder.width, seed),
                    DisorderKindConfig::Gaussian => DisorderSpec::gaussian(center, disorder.width, seed),
                }
                .pinned(disorder.pin_resonant);
                Ok(ModelParams::from_disorder(omega, g, &spec, l)?)
            }
        }
    }

    pub fn observables(&self) -> Result<Vec<Observable>> {
        let names = match &self.outputs {
            Some(names) if names.is_empty() => {
                return Err(CliError::config("outputs must name at least one observable"))
            }
            Some(names) => names.clone(),
            None => vec!["survival".to_string()],
        };
        names
            .iter()
            .map(|n| n.parse::<Observable>().map_err(CliError::Config))
            .collect()
    }

    pub fn initial_runs(&self, params: &Params) -> Result<Vec<Run>> {
        let single = |condition| {
            vec![Run {
                suffix: None,
                condition,
            }]
        };
        let runs = match &self.initial {
            InitialConfig::SinglePhoton => single(InitialCondition::SinglePhoton),
            InitialConfig::SingleSpin { spin } => single(InitialCondition::SingleSpin(spin.resolve(params))),
            InitialConfig::Bell { a, b, separation, sign } => {
                let a = a.resolve(params);
                let b = match (b, separation) {
                    (Some(b), None) => b.resolve(params),
                    (None, Some(sep)) => SpinIndex(a.0 + sep),
                    _ => {
                        return Err(CliError::config(
                            "a Bell state needs exactly one of `b` and `separation`",
                        ))
                    }
                };
                let bell = |sign| InitialCondition::Bell { a, b, sign };
                match sign {
                    SignConfig::Plus => single(bell(BellSign::Plus)),
                    SignConfig::Minus => single(bell(BellSign::Minus)),
                    SignConfig::Both => vec![
                        Run {
                            suffix: Some("plus"),
                            condition: bell(BellSign::Plus),
                        },
                        Run {
                            suffix: Some("minus"),
                            condition: bell(BellSign::Minus),
                        },
                    ],
                }
            }
        };
        for run in &runs {
            run.condition.validate(params.spins())?;
        }
        Ok(runs)
    }

    pub fn resolve(&self, overrides: &Overrides) -> Result<Scenario> {
        let params = self.model(None, self.effective_seed(overrides))?;
        let runs = self.initial_runs(&params)?;
        let outputs = self.observables()?;
        for o in &outputs {
            o.slot(params.spins())?;
        }
        Ok(Scenario {
            runs,
            outputs,
            times: self.times,
            asymptotic: overrides.asymptotic || self.comparison.asymptotic,
            oracle: overrides.oracle || self.comparison.oracle,
            bright: self.comparison.bright,
            params,
        })
    }
}
