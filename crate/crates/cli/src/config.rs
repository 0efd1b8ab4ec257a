use std::path::PathBuf;
use std::str::FromStr;

use padovan_core::decimal::integer_string;
use padovan_core::numerics::PrecisionContext;
use padovan_core::search::{SEARCH_LENGTH_LIMIT, SEARCH_LIMIT};
use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_PRECISION: u32 = 400;
pub const MIN_PRECISION: u32 = 50;
pub const MIN_N_MAX: u32 = 5;
pub const MIN_L_MAX: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            other => Err(format!("unknown format {other:?}, expected json or markdown")),
        }
    }
}

/// Everything a run depends on. The output path is not echoed into certificates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub precision_digits: u32,
    pub n_max: u32,
    pub l_max: u32,
    #[serde(with = "optional_integer", default)]
    pub m_override: Option<Integer>,
    #[serde(skip)]
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision_digits: DEFAULT_PRECISION,
            n_max: SEARCH_LIMIT,
            l_max: SEARCH_LENGTH_LIMIT,
            m_override: None,
            output_path: None,
            format: OutputFormat::Json,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.precision_digits < MIN_PRECISION {
            return Err(CliError::Config(format!(
                "precision must be at least {MIN_PRECISION} digits, got {}",
                self.precision_digits
            )));
        }
        if self.n_max < MIN_N_MAX {
            return Err(CliError::Config(format!(
                "n_max must be at least {MIN_N_MAX}, got {}",
                self.n_max
            )));
        }
        if self.l_max < MIN_L_MAX {
            return Err(CliError::Config(format!(
                "l_max must be at least {MIN_L_MAX}, got {}",
                self.l_max
            )));
        }
        if let Some(m) = &self.m_override {
            if *m <= 0 {
                return Err(CliError::Config(format!("modulus override must be positive, got {m}")));
            }
        }
        Ok(())
    }

    pub fn context(&self) -> Result<PrecisionContext, CliError> {
        Ok(PrecisionContext::with_digits(self.precision_digits)?)
    }

    /// Whether the search window covers the full classification range.
    pub fn covers_default_range(&self) -> bool {
        self.n_max >= SEARCH_LIMIT && self.l_max >= SEARCH_LENGTH_LIMIT
    }
}

mod optional_integer {
    use super::integer_string;
    use rug::Integer;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(transparent)]
    struct Wrapped(#[serde(with = "integer_string")] Integer);

    pub fn serialize<S: Serializer>(v: &Option<Integer>, s: S) -> Result<S::Ok, S::Error> {
        v.clone().map(Wrapped).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Integer>, D::Error> {
        Ok(Option::<Wrapped>::deserialize(d)?.map(|w| w.0))
    }
}
