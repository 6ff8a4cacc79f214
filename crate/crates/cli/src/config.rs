//! Run configuration: the JSON file, command-line overrides and the
//! validated settings the commands consume.

use std::fmt;
use std::path::{Path, PathBuf};

use carleman_core::polyasym::{fixtures, GridSpec, MultiIndex, MAX_VARIABLES, MIN_GRID_RADIUS};
use carleman_core::seqcore::{DEFAULT_GEVREY_P_MAX, DEFAULT_LOG_GEVREY_P_MAX};
use carleman_core::{Complex64, PolysectorOpening, VerdictConfig, WeightSequence};
use serde::Deserialize;

use crate::error::{CliError, Result};

pub const DEFAULT_A_MAX: f64 = 1e3;
pub const DEFAULT_DEPTH: u32 = 8;
/// Cap on the default index range when `P` is not given.
pub const DEFAULT_RANGE_CAP: usize = 1024;
pub const DEFAULT_TABLE_POINTS: usize = 33;
/// Largest family depth accepted; higher orders add nothing a report can show.
pub const MAX_DEPTH: u32 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceFamily {
    Gevrey,
    LogGevrey,
    Custom,
}

impl SequenceFamily {
    pub fn name(self) -> &'static str {
        match self {
            SequenceFamily::Gevrey => "gevrey",
            SequenceFamily::LogGevrey => "loggevrey",
            SequenceFamily::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSpec {
    pub family: SequenceFamily,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    #[serde(rename = "logM")]
    pub log_m: Option<Vec<f64>>,
    #[serde(rename = "P_max")]
    pub p_max: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub sigma_margin: Option<f64>,
    pub tau_margin: Option<f64>,
    pub sigma_exact: Option<f64>,
    pub symbolic_snap: Option<f64>,
    pub watson_tol: Option<f64>,
    pub integral_grid: Option<usize>,
    pub integral_rel_tol: Option<f64>,
    pub r_lo: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub radial: Option<usize>,
    pub angular: Option<usize>,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub margin: Option<f64>,
}

/// The configuration file as written by the user.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub sequence: Option<SequenceSpec>,
    pub gamma: Option<Vec<f64>>,
    #[serde(rename = "P")]
    pub p: Option<usize>,
    #[serde(rename = "D")]
    pub depth: Option<u32>,
    pub a_max: Option<f64>,
    pub r_hi: Option<f64>,
    pub tolerances: Option<Tolerances>,
    pub fixture: Option<String>,
    /// Number of variables for `exp_sum` and `gevrey_flat`.
    pub n: Option<usize>,
    pub grid: Option<GridConfig>,
    /// Order of the sampled approximant in the asymptotics report.
    pub order: Option<Vec<u32>>,
    /// Number of radii in the Ostrowski table.
    pub table_points: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ReadConfig {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::config(e.to_string()))
    }
}

/// Test function and family selected by the `fixture` key.
#[derive(Debug, Clone, PartialEq)]
pub enum FixtureSpec {
    ExpSum,
    Poly(Vec<(Complex64, Vec<u32>)>),
    GevreyFlat(f64),
}

pub const FIXTURE_NAMES: &str = "exp_sum, poly:[[coef,[e1,...]],...], gevrey_flat:<s>";

#[derive(Deserialize)]
#[serde(untagged)]
enum Coef {
    Real(f64),
    Complex([f64; 2]),
}

impl FixtureSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let (name, arg) = match text.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (text.trim(), None),
        };
        match (name, arg) {
            ("exp_sum", None) => Ok(FixtureSpec::ExpSum),
            ("poly", Some(arg)) => {
                let raw: Vec<(Coef, Vec<u32>)> = serde_json::from_str(arg)
                    .map_err(|e| CliError::config(format!("fixture poly: {e}")))?;
                let n = raw.first().map(|(_, e)| e.len()).unwrap_or(0);
                if n == 0 {
                    return Err(CliError::config(
                        "fixture poly: needs at least one term with exponents",
                    ));
                }
                if raw.iter().any(|(_, e)| e.len() != n) {
                    return Err(CliError::config(
                        "fixture poly: exponent lists differ in length",
                    ));
                }
                let terms = raw
                    .into_iter()
                    .map(|(c, e)| {
                        let c = match c {
                            Coef::Real(x) => Complex64::new(x, 0.0),
                            Coef::Complex([re, im]) => Complex64::new(re, im),
                        };
                        (c, e)
                    })
                    .collect();
                Ok(FixtureSpec::Poly(terms))
            }
            ("gevrey_flat", Some(arg)) => {
                let s: f64 = arg.parse().map_err(|_| {
                    CliError::config(format!("fixture gevrey_flat: bad order {arg:?}"))
                })?;
                if !(s > 0.0 && s.is_finite()) {
                    return Err(CliError::config(
                        "fixture gevrey_flat: order must be positive",
                    ));
                }
                Ok(FixtureSpec::GevreyFlat(s))
            }
            _ => Err(CliError::config(format!(
                "unknown fixture {text:?}; available: {FIXTURE_NAMES}"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FixtureSpec::ExpSum => "exp_sum",
            FixtureSpec::Poly(_) => "poly",
            FixtureSpec::GevreyFlat(_) => "gevrey_flat",
        }
    }
}

impl fmt::Display for FixtureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixtureSpec::ExpSum => f.write_str("exp_sum"),
            FixtureSpec::Poly(terms) => {
                f.write_str("poly:[")?;
                for (k, (c, e)) in terms.iter().enumerate() {
                    let sep = if k == 0 { "" } else { "," };
                    write!(f, "{sep}[[{},{}],{e:?}]", c.re, c.im)?;
                }
                f.write_str("]")
            }
            FixtureSpec::GevreyFlat(s) => write!(f, "gevrey_flat:{s}"),
        }
    }
}

/// A validated weight sequence and the config entry it came from.
#[derive(Debug, Clone)]
pub struct SequenceInput {
    pub spec: SequenceSpec,
    pub weights: WeightSequence,
}

impl SequenceInput {
    fn build(spec: SequenceSpec) -> Result<Self> {
        let family = spec.family.name();
        let need = |v: Option<f64>, key: &str| {
            v.ok_or_else(|| {
                CliError::config(format!("sequence.{key}: required for family {family}"))
            })
        };
        let forbid = |present: bool, key: &str| {
            if present {
                Err(CliError::config(format!(
                    "sequence.{key}: not used by family {family}"
                )))
            } else {
                Ok(())
            }
        };
        let invalid = |e: carleman_core::Error| CliError::config(format!("sequence: {e}"));
        let weights = match spec.family {
            SequenceFamily::Gevrey => {
                forbid(spec.beta.is_some(), "beta")?;
                forbid(spec.log_m.is_some(), "logM")?;
                let p_max = spec.p_max.unwrap_or(DEFAULT_GEVREY_P_MAX);
                WeightSequence::gevrey(need(spec.alpha, "alpha")?, p_max).map_err(invalid)?
            }
            SequenceFamily::LogGevrey => {
                forbid(spec.log_m.is_some(), "logM")?;
                let p_max = spec.p_max.unwrap_or(DEFAULT_LOG_GEVREY_P_MAX);
                WeightSequence::log_gevrey(
                    need(spec.alpha, "alpha")?,
                    need(spec.beta, "beta")?,
                    p_max,
                )
                .map_err(invalid)?
            }
            SequenceFamily::Custom => {
                forbid(spec.alpha.is_some(), "alpha")?;
                forbid(spec.beta.is_some(), "beta")?;
                let mut log_m = spec
                    .log_m
                    .clone()
                    .ok_or_else(|| CliError::config("sequence.logM: required for family custom"))?;
                if let Some(p_max) = spec.p_max {
                    if p_max + 1 > log_m.len() {
                        return Err(CliError::config(format!(
                            "sequence.P_max: {p_max} exceeds the {} tabulated values",
                            log_m.len()
                        )));
                    }
                    log_m.truncate(p_max + 1);
                }
                WeightSequence::from_log_m(log_m).map_err(invalid)?
            }
        };
        Ok(Self { spec, weights })
    }
}

/// Everything a command needs, with defaults filled in.
#[derive(Debug, Clone)]
pub struct Settings {
    pub sequence: Option<SequenceInput>,
    pub opening: Option<PolysectorOpening>,
    /// Requested index range; commands fill in their own default.
    pub range: Option<usize>,
    pub depth: u32,
    pub a_max: f64,
    pub verdict: VerdictConfig,
    pub fixture: Option<FixtureSpec>,
    pub n: Option<usize>,
    pub grid: GridSpec,
    pub order: Option<Vec<u32>>,
    pub table_points: usize,
}

/// Values given on the command line; they take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub range: Option<usize>,
    pub a_max: Option<f64>,
    pub gamma: Option<Vec<f64>>,
}

fn positive(key: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::config(format!(
            "{key}: must be positive and finite, got {v}"
        )))
    }
}

impl Settings {
    pub fn resolve(cfg: RunConfig, over: Overrides) -> Result<Self> {
        let sequence = cfg.sequence.map(SequenceInput::build).transpose()?;

        let opening = match over.gamma.or(cfg.gamma) {
            None => None,
            Some(g) => {
                if g.is_empty() {
                    return Err(CliError::config("gamma: needs at least one opening"));
                }
                for &x in &g {
                    positive("gamma", x)?;
                }
                Some(
                    PolysectorOpening::new(g)
                        .map_err(|e| CliError::config(format!("gamma: {e}")))?,
                )
            }
        };

        let range = over.range.or(cfg.p);
        if let Some(p) = range {
            if p == 0 {
                return Err(CliError::config("P: must be at least 1"));
            }
            if let Some(s) = &sequence {
                if p > s.weights.p_max() {
                    return Err(CliError::config(format!(
                        "P: {p} exceeds the sequence's P_max {}",
                        s.weights.p_max()
                    )));
                }
            }
        }

        let a_max = over.a_max.or(cfg.a_max).unwrap_or(DEFAULT_A_MAX);
        if !(a_max >= 1.0 && a_max.is_finite()) {
            return Err(CliError::config(format!(
                "a_max: must be finite and at least 1, got {a_max}"
            )));
        }

        let depth = cfg.depth.unwrap_or(DEFAULT_DEPTH);
        if depth > MAX_DEPTH {
            return Err(CliError::config(format!(
                "D: at most {MAX_DEPTH}, got {depth}"
            )));
        }

        let mut verdict = VerdictConfig::default();
        if let Some(r_hi) = cfg.r_hi {
            verdict.r_hi = positive("r_hi", r_hi)?;
        }
        let tol = cfg.tolerances.unwrap_or_default();
        let set = |slot: &mut f64, v: Option<f64>, key: &str| -> Result<()> {
            if let Some(v) = v {
                *slot = positive(&format!("tolerances.{key}"), v)?;
            }
            Ok(())
        };
        set(&mut verdict.sigma_margin, tol.sigma_margin, "sigma_margin")?;
        set(&mut verdict.tau_margin, tol.tau_margin, "tau_margin")?;
        set(&mut verdict.sigma_exact, tol.sigma_exact, "sigma_exact")?;
        set(
            &mut verdict.symbolic_snap,
            tol.symbolic_snap,
            "symbolic_snap",
        )?;
        set(&mut verdict.watson_tol, tol.watson_tol, "watson_tol")?;
        set(
            &mut verdict.integral_rel_tol,
            tol.integral_rel_tol,
            "integral_rel_tol",
        )?;
        set(&mut verdict.r_lo, tol.r_lo, "r_lo")?;
        if let Some(k) = tol.integral_grid {
            if k < 8 {
                return Err(CliError::config(
                    "tolerances.integral_grid: at least 8 radii",
                ));
            }
            verdict.integral_grid = k;
        }
        if verdict.r_hi <= verdict.r_lo {
            return Err(CliError::config(format!(
                "r_hi: must exceed r_lo = {}",
                verdict.r_lo
            )));
        }

        let fixture = cfg.fixture.as_deref().map(FixtureSpec::parse).transpose()?;
        if let Some(n) = cfg.n {
            if n == 0 || n > MAX_VARIABLES {
                return Err(CliError::config(format!(
                    "n: between 1 and {MAX_VARIABLES}, got {n}"
                )));
            }
        }

        let mut grid = GridSpec::default();
        if let Some(g) = cfg.grid {
            grid.radial = g.radial.unwrap_or(grid.radial);
            grid.angular = g.angular.unwrap_or(grid.angular);
            grid.r_min = g.r_min.unwrap_or(grid.r_min);
            grid.r_max = g.r_max.unwrap_or(grid.r_max);
            grid.margin = g.margin.unwrap_or(grid.margin);
        }
        if grid.radial == 0 || grid.angular == 0 {
            return Err(CliError::config(
                "grid: radial and angular counts must be positive",
            ));
        }
        if !(grid.r_min >= MIN_GRID_RADIUS && grid.r_max >= grid.r_min && grid.r_max.is_finite()) {
            return Err(CliError::config(format!(
                "grid: need {MIN_GRID_RADIUS} <= r_min <= r_max, got [{}, {}]",
                grid.r_min, grid.r_max
            )));
        }
        if !(grid.margin > 0.0 && grid.margin < 1.0) {
            return Err(CliError::config("grid.margin: must lie in (0, 1)"));
        }

        let table_points = cfg.table_points.unwrap_or(DEFAULT_TABLE_POINTS);
        if table_points < 2 {
            return Err(CliError::config("table_points: at least 2"));
        }

        Ok(Self {
            sequence,
            opening,
            range,
            depth,
            a_max,
            verdict,
            fixture,
            n: cfg.n,
            grid,
            order: cfg.order,
            table_points,
        })
    }

    pub fn require_sequence(&self, command: &str) -> Result<&SequenceInput> {
        self.sequence
            .as_ref()
            .ok_or_else(|| CliError::config(format!("sequence: required by the {command} command")))
    }

    pub fn require_opening(&self, command: &str) -> Result<&PolysectorOpening> {
        self.opening
            .as_ref()
            .ok_or_else(|| CliError::config(format!("gamma: required by the {command} command")))
    }

    pub fn require_fixture(&self, command: &str) -> Result<&FixtureSpec> {
        self.fixture.as_ref().ok_or_else(|| {
            CliError::config(format!(
                "fixture: required by the {command} command; available: {FIXTURE_NAMES}"
            ))
        })
    }

    /// Builds the fixture; the opening comes from `gamma` unless the
    /// fixture fixes it.
    pub fn build_fixture(&self, spec: &FixtureSpec) -> Result<fixtures::Fixture> {
        let opening_for = |n: usize| -> Result<Vec<f64>> {
            match &self.opening {
                None => Ok(vec![1.0; n]),
                Some(s) if s.len() == n => Ok(s.gamma().to_vec()),
                Some(s) => Err(CliError::config(format!(
                    "gamma: {} openings for a fixture in {n} variables",
                    s.len()
                ))),
            }
        };
        let built = match spec {
            FixtureSpec::ExpSum => {
                let n = self
                    .n
                    .or(self.opening.as_ref().map(|s| s.len()))
                    .unwrap_or(2);
                fixtures::exp_sum(opening_for(n)?, self.depth)
            }
            FixtureSpec::Poly(terms) => {
                let n = terms[0].1.len();
                if self.n.is_some_and(|k| k != n) {
                    return Err(CliError::config(format!(
                        "n: poly terms have {n} variables"
                    )));
                }
                let terms = terms
                    .iter()
                    .map(|(c, e)| (*c, MultiIndex::new(e.clone())))
                    .collect();
                fixtures::poly(opening_for(n)?, self.depth, terms)
            }
            FixtureSpec::GevreyFlat(s) => {
                if self.depth > fixtures::FLAT_MAX_ORDER {
                    return Err(CliError::config(format!(
                        "D: gevrey_flat supports at most {}",
                        fixtures::FLAT_MAX_ORDER
                    )));
                }
                fixtures::gevrey_flat(*s, self.n.unwrap_or(1), self.depth)
            }
        };
        built.map_err(|e| CliError::config(format!("fixture {spec}: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(text: &str) -> Result<Settings> {
        Settings::resolve(RunConfig::parse(text)?, Overrides::default())
    }

    #[test]
    fn missing_alpha_is_named() {
        let err = settings(r#"{"sequence": {"family": "gevrey"}}"#).unwrap_err();
        assert!(
            matches!(err, CliError::Config(ref m) if m.contains("alpha")),
            "{err}"
        );
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(settings(r#"{"sequence": {"family": "gevrey", "alpha": 1, "alhpa": 2}}"#).is_err());
        assert!(settings(r#"{"gama": [1]}"#).is_err());
    }

    #[test]
    fn nonpositive_gamma_is_a_config_error() {
        for g in ["[-1]", "[0]", "[]"] {
            let err = settings(&format!(r#"{{"gamma": {g}}}"#)).unwrap_err();
            assert_eq!(err.exit_code(), crate::error::EXIT_CONFIG, "{g}");
        }
    }

    #[test]
    fn overrides_win() {
        let cfg = RunConfig::parse(
            r#"{"sequence": {"family": "gevrey", "alpha": 1}, "P": 100, "gamma": [1]}"#,
        )
        .unwrap();
        let s = Settings::resolve(
            cfg,
            Overrides {
                range: Some(50),
                a_max: Some(10.0),
                gamma: Some(vec![2.0, 3.0]),
            },
        )
        .unwrap();
        assert_eq!(s.range, Some(50));
        assert_eq!(s.a_max, 10.0);
        assert_eq!(s.opening.unwrap().gamma(), &[2.0, 3.0]);
    }

    #[test]
    fn range_beyond_table_is_rejected() {
        assert!(
            settings(r#"{"sequence": {"family": "custom", "logM": [0, 1, 3]}, "P": 3}"#).is_err()
        );
        assert!(
            settings(r#"{"sequence": {"family": "custom", "logM": [0, 1, 3], "P_max": 3}}"#)
                .is_err()
        );
    }

    #[test]
    fn fixtures_parse() {
        assert_eq!(FixtureSpec::parse("exp_sum").unwrap(), FixtureSpec::ExpSum);
        assert_eq!(
            FixtureSpec::parse("gevrey_flat:0.5").unwrap(),
            FixtureSpec::GevreyFlat(0.5)
        );
        let FixtureSpec::Poly(t) = FixtureSpec::parse("poly:[[1,[1,0]],[[0.5,-1],[0,2]]]").unwrap()
        else {
            panic!("not a poly")
        };
        assert_eq!(t[1], (Complex64::new(0.5, -1.0), vec![0, 2]));
        let err = FixtureSpec::parse("sinh").unwrap_err().to_string();
        assert!(err.contains("exp_sum") && err.contains("gevrey_flat"));
        assert!(FixtureSpec::parse("poly:[[1,[1]],[1,[1,2]]]").is_err());
        assert!(FixtureSpec::parse("gevrey_flat:-1").is_err());
        // the display form parses back to the same fixture
        for text in [
            "exp_sum",
            "gevrey_flat:0.5",
            "poly:[[1,[1,0]],[[0.5,-1],[0,2]]]",
        ] {
            let spec = FixtureSpec::parse(text).unwrap();
            assert_eq!(FixtureSpec::parse(&spec.to_string()).unwrap(), spec);
        }
    }
}
