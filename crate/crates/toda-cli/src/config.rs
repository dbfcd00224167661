use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use toda_core::laurent::{LaurentSeries, TruncationParams};
use toda_core::manifold::ManifoldPoint;
use toda_core::presets::DEFAULT_SEED;
use toda_core::C64;

use crate::error::{CliError, CliResult};

/// One of the verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Spectrum,
    Metric,
    Formal,
    Integral,
    Resurgence,
    Stokes,
    SpecfunSelftest,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Spectrum,
        Suite::Metric,
        Suite::Formal,
        Suite::Integral,
        Suite::Resurgence,
        Suite::Stokes,
        Suite::SpecfunSelftest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Spectrum => "spectrum",
            Suite::Metric => "metric",
            Suite::Formal => "formal",
            Suite::Integral => "integral",
            Suite::Resurgence => "resurgence",
            Suite::Stokes => "stokes",
            Suite::SpecfunSelftest => "specfun-selftest",
        }
    }
}

impl FromStr for Suite {
    type Err = CliError;
    fn from_str(s: &str) -> CliResult<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s.trim())
            .ok_or_else(|| CliError::ConfigInvalid(format!("unknown suite `{s}`")))
    }
}

/// Where the manifold point comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum PointSpec {
    /// `special:V,E` with `w = z`, `v = V`, `e^u = E`; both accept complex literals like `0.3+0.2i`.
    Special { v: C64, e_u: C64 },
    /// `w = z + 0.1 z^2 + 0.2 + 0.3/z`, `v = 0.1`, `e^u = 0.02`.
    Perturbed,
    /// `file:PATH` naming a TOML file with `v`, `e_u` and `w = [[k, re, im], ...]`.
    File(PathBuf),
}

fn parse_complex(s: &str) -> CliResult<C64> {
    C64::from_str(s.trim()).map_err(|_| CliError::ConfigInvalid(format!("`{s}` is not a complex number")))
}

fn show_complex(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

impl FromStr for PointSpec {
    type Err = CliError;
    fn from_str(s: &str) -> CliResult<Self> {
        let s = s.trim();
        if s == "perturbed" {
            return Ok(PointSpec::Perturbed);
        }
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(PointSpec::File(PathBuf::from(path)));
        }
        if let Some(rest) = s.strip_prefix("special:") {
            let (v, e_u) = rest
                .split_once(',')
                .ok_or_else(|| CliError::ConfigInvalid(format!("expected special:V,E, got `{s}`")))?;
            return Ok(PointSpec::Special { v: parse_complex(v)?, e_u: parse_complex(e_u)? });
        }
        Err(CliError::ConfigInvalid(format!("unrecognized point `{s}`")))
    }
}

impl fmt::Display for PointSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointSpec::Special { v, e_u } => write!(f, "special:{},{}", show_complex(*v), show_complex(*e_u)),
            PointSpec::Perturbed => write!(f, "perturbed"),
            PointSpec::File(path) => write!(f, "file:{}", path.display()),
        }
    }
}

impl TryFrom<String> for PointSpec {
    type Error = CliError;
    fn try_from(s: String) -> CliResult<Self> {
        s.parse()
    }
}

impl From<PointSpec> for String {
    fn from(p: PointSpec) -> String {
        p.to_string()
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointFile {
    v: String,
    e_u: String,
    w: Vec<(i64, f64, f64)>,
}

/// Parameters of the `stokes` suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StokesOptions {
    pub p_arg: f64,
    pub theta: f64,
    pub epsilon: f64,
    pub zeta_abs: f64,
}

impl Default for StokesOptions {
    fn default() -> Self {
        Self { p_arg: 0.0, theta: std::f64::consts::PI, epsilon: 0.1, zeta_abs: 5.0 }
    }
}

/// A complete, validated description of one run. Every field has a default, and the
/// resolved values are echoed into the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub order: usize,
    pub nodes: usize,
    pub point: PointSpec,
    pub suites: Vec<Suite>,
    pub tolerances: BTreeMap<String, f64>,
    pub out: Option<PathBuf>,
    pub jobs: usize,
    pub seed: u64,
    pub stokes: StokesOptions,
}

impl Default for RunConfig {
    fn default() -> Self {
        let params = TruncationParams::default();
        Self {
            order: params.order,
            nodes: params.nodes,
            point: PointSpec::Special { v: C64::new(0.0, 0.0), e_u: C64::new(0.5, 0.0) },
            suites: Suite::ALL.to_vec(),
            tolerances: BTreeMap::new(),
            out: None,
            jobs: 1,
            seed: DEFAULT_SEED,
            stokes: StokesOptions::default(),
        }
    }
}

impl RunConfig {
    /// Parses the key-value (TOML) configuration format and validates the result.
    pub fn from_toml_str(text: &str) -> CliResult<Self> {
        let config: RunConfig = toml::from_str(text).map_err(|e| CliError::ConfigInvalid(e.message().to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> CliResult<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn params(&self) -> CliResult<TruncationParams> {
        TruncationParams::new(self.order, self.nodes).map_err(|e| CliError::ConfigInvalid(e.to_string()))
    }

    pub fn validate(&self) -> CliResult<()> {
        self.params()?;
        if self.suites.is_empty() {
            return Err(CliError::ConfigInvalid("no suite selected".to_string()));
        }
        if self.jobs == 0 {
            return Err(CliError::ConfigInvalid("jobs must be at least 1".to_string()));
        }
        if let Some((name, tol)) = self.tolerances.iter().find(|(_, t)| !(t.is_finite() && **t >= 0.0)) {
            return Err(CliError::ConfigInvalid(format!("tolerance for `{name}` must be finite and nonnegative, got {tol}")));
        }
        let s = &self.stokes;
        if !(s.epsilon > 0.0 && s.zeta_abs > 0.0 && s.p_arg.is_finite() && s.theta.is_finite()) {
            return Err(CliError::ConfigInvalid("stokes options need epsilon > 0, zeta_abs > 0 and finite angles".to_string()));
        }
        Ok(())
    }

    /// Builds the manifold point at the configured truncation.
    pub fn build_point(&self) -> CliResult<ManifoldPoint> {
        let params = self.params()?;
        let invalid = |e: toda_core::TodaError| CliError::ConfigInvalid(format!("point {}: {e}", self.point));
        match &self.point {
            PointSpec::Special { v, e_u } => ManifoldPoint::special(params, *v, *e_u).map_err(invalid),
            PointSpec::Perturbed => {
                let c = |x: f64| C64::new(x, 0.0);
                let w = LaurentSeries::from_terms(params.order, &[(2, c(0.1)), (1, c(1.0)), (0, c(0.2)), (-1, c(0.3))])
                    .map_err(invalid)?;
                ManifoldPoint::from_w_coords(params, w, c(0.1), c(0.02).ln()).map_err(invalid)
            }
            PointSpec::File(path) => {
                let text = std::fs::read_to_string(path)?;
                let file: PointFile =
                    toml::from_str(&text).map_err(|e| CliError::ConfigInvalid(format!("{}: {}", path.display(), e.message())))?;
                let terms: Vec<(i64, C64)> = file.w.iter().map(|&(k, re, im)| (k, C64::new(re, im))).collect();
                let w = LaurentSeries::from_terms(params.order, &terms).map_err(invalid)?;
                let e_u = parse_complex(&file.e_u)?;
                ManifoldPoint::from_w_coords(params, w, parse_complex(&file.v)?, e_u.ln()).map_err(invalid)
            }
        }
    }
}
