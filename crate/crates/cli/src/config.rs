//! JSON configuration and report documents. Exact rationals travel as
//! `"p/q"` strings and Gaussian rationals as `{"re": "p/q", "im": "r/s"}`.

use std::collections::BTreeMap;

use kahlerq::algebra::index::MAX_DIM;
use kahlerq::algebra::scalar::{parse_rational, rational_to_string};
use kahlerq::checks::{self, GeometrySpec, Setup};
use kahlerq::fedosov::Alpha;
use kahlerq::geometry::Builtin;
use kahlerq::{BaseMono, JetPoly, MultiIndex, Scalar, WeylForm, EXACT};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::expr::{self, ExprError};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot parse configuration: {0}")]
    Json(#[from] serde_json::Error),
    #[error("expression `{name}`: {source}")]
    Expr { name: String, source: ExprError },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Engine(#[from] kahlerq::Error),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussianRational {
    pub re: String,
    #[serde(default = "zero_string")]
    pub im: String,
}

fn zero_string() -> String {
    "0".into()
}

impl GaussianRational {
    pub fn from_scalar(s: &Scalar) -> Self {
        GaussianRational { re: rational_to_string(&s.re), im: rational_to_string(&s.im) }
    }

    pub fn to_scalar(&self) -> Result<Scalar, ConfigError> {
        let re = parse_rational(&self.re).map_err(|_| ConfigError::Invalid(format!("bad rational `{}`", self.re)))?;
        let im = parse_rational(&self.im).map_err(|_| ConfigError::Invalid(format!("bad rational `{}`", self.im)))?;
        Ok(Scalar::new(re, im))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableTerm {
    #[serde(default)]
    pub z: Vec<u8>,
    #[serde(default)]
    pub zb: Vec<u8>,
    pub coeff: GaussianRational,
}

/// A polynomial given either as an expression or as a coefficient table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Polynomial {
    Expression(String),
    Table(Vec<TableTerm>),
}

impl Polynomial {
    pub fn to_weyl(&self, n: usize, name: &str) -> Result<WeylForm, ConfigError> {
        match self {
            Polynomial::Expression(s) => expr::parse(s, n).map_err(|source| ConfigError::Expr { name: name.to_string(), source }),
            Polynomial::Table(terms) => {
                let mut j = JetPoly::zero(n, EXACT);
                for t in terms {
                    if t.z.len() > n || t.zb.len() > n {
                        return Err(ConfigError::Invalid(format!("{name}: exponent vector longer than n = {n}")));
                    }
                    let m = BaseMono { z: MultiIndex::from_slice(&t.z), zb: MultiIndex::from_slice(&t.zb) };
                    j.add_term(m, t.coeff.to_scalar()?);
                }
                Ok(WeylForm::from_jet(&j))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GeometryConfig {
    Builtin { builtin: String, n: usize },
    Potential { potential: Polynomial, n: usize },
}

impl GeometryConfig {
    pub fn n(&self) -> usize {
        match self {
            GeometryConfig::Builtin { n, .. } | GeometryConfig::Potential { n, .. } => *n,
        }
    }

    pub fn to_spec(&self) -> Result<GeometrySpec, ConfigError> {
        let n = self.n();
        if n == 0 || n > MAX_DIM {
            return Err(ConfigError::Invalid(format!("dimension must be between 1 and {MAX_DIM}, got {n}")));
        }
        match self {
            GeometryConfig::Builtin { builtin, n } => Ok(GeometrySpec::Builtin { kind: builtin.parse::<Builtin>()?, n: *n }),
            GeometryConfig::Potential { potential, n } => {
                let w = potential.to_weyl(*n, "potential")?;
                let j = expr::to_jet(&w).ok_or_else(|| ConfigError::Invalid("potential must not contain h".into()))?;
                Ok(GeometrySpec::Table(j))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaConfig {
    Mode(String),
    Potential { potential: Polynomial },
}

impl Default for AlphaConfig {
    fn default() -> Self {
        AlphaConfig::Mode("zero".into())
    }
}

impl AlphaConfig {
    pub fn to_alpha(&self, n: usize) -> Result<Alpha, ConfigError> {
        match self {
            AlphaConfig::Mode(m) => parse_alpha(m),
            AlphaConfig::Potential { potential } => Ok(Alpha::Potential(potential.to_weyl(n, "alpha")?)),
        }
    }
}

pub fn parse_alpha(m: &str) -> Result<Alpha, ConfigError> {
    match m {
        "zero" | "0" => Ok(Alpha::Zero),
        "minus-hbar-ricci" => Ok(Alpha::MinusHbarRicci),
        other => Err(ConfigError::Invalid(format!("unknown alpha mode `{other}` (zero | minus-hbar-ricci)"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    pub weight_cap: i32,
    pub jet_order: i32,
    pub hbar_order: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub geometry: GeometryConfig,
    #[serde(default)]
    pub alpha: AlphaConfig,
    pub caps: Caps,
    pub checks: Vec<String>,
    /// Checks rerun with every cap raised by two; their values must agree.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cap_stability: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub expressions: BTreeMap<String, Polynomial>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

fn default_seed() -> u64 {
    0x5eed
}

impl Config {
    pub fn from_json(text: &str) -> Result<Config, ConfigError> {
        let c: Config = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let Caps { weight_cap, jet_order, hbar_order } = self.caps;
        if weight_cap <= 0 || jet_order <= 0 || hbar_order <= 0 {
            return Err(ConfigError::Invalid("caps must be positive".into()));
        }
        for id in self.checks.iter().chain(&self.cap_stability) {
            if checks::anchor(id).is_none() {
                return Err(ConfigError::Invalid(format!("unknown check `{id}`")));
            }
        }
        let n = self.geometry.n();
        self.geometry.to_spec()?;
        self.alpha.to_alpha(n)?;
        for (name, p) in &self.expressions {
            p.to_weyl(n, name)?;
        }
        Ok(())
    }

    pub fn setup(&self) -> Result<Setup, ConfigError> {
        let n = self.geometry.n();
        let mut s = Setup::new(self.geometry.to_spec()?, self.alpha.to_alpha(n)?, self.caps.weight_cap, self.caps.jet_order);
        s.hbar_order = self.caps.hbar_order;
        s.seed = self.seed;
        s.samples = self.samples;
        Ok(s)
    }
}

/// Hex SHA-256 of the engine's convention list.
pub fn convention_hash() -> String {
    let mut h = Sha256::new();
    for line in checks::CONVENTIONS {
        h.update(line.as_bytes());
        h.update(b"\n");
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: String,
    pub caps: Caps,
    /// Precision of the residual; `None` means exact.
    pub residual_weight_cap: Option<i32>,
    pub residual_jet_cap: Option<i32>,
    /// Largest coefficient modulus in the residual; `None` when no residual
    /// was produced (engine error, insufficient caps, failed precondition).
    pub residual_max_abs: Option<String>,
    pub residual_terms: usize,
    pub pass: bool,
    pub wall_seconds: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub engine_version: String,
    pub convention_ledger_hash: String,
    pub seed: u64,
    pub config: Config,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub expressions: BTreeMap<String, String>,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}

impl Report {
    /// The report with timing fields zeroed, for determinism comparisons.
    pub fn without_timing(&self) -> Report {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.wall_seconds = 0.0;
        }
        r
    }
}
