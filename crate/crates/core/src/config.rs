//! Run configuration shared by the library entry points and the command line.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::Precision;
use crate::theta::ThetaEvaluator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<OutputFormat> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(Error::InvalidArgument(format!("unknown output format {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub eps: f64,
    pub precision_digits: u32,
    pub seed: u64,
    pub tau_samples: usize,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig { eps: 1e-14, precision_digits: 28, seed: 20_240_601, tau_samples: 20, output_format: OutputFormat::Json }
    }
}

impl RunConfig {
    /// Digits needed for `eps`: twice its decimal exponent.
    pub fn required_digits(eps: f64) -> u32 {
        (2.0 * -eps.log10()).ceil().max(1.0) as u32
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::InvalidArgument(format!("eps must lie in (0, 1), got {}", self.eps)));
        }
        let need = RunConfig::required_digits(self.eps);
        if self.precision_digits < need {
            return Err(Error::InvalidArgument(format!(
                "eps {:e} needs at least {need} digits, got {}",
                self.eps, self.precision_digits
            )));
        }
        Precision::for_digits(self.precision_digits)?;
        if self.tau_samples == 0 {
            return Err(Error::InvalidArgument("at least one tau sample is required".into()));
        }
        Ok(())
    }

    pub fn evaluator(&self) -> Result<ThetaEvaluator> {
        self.validate()?;
        ThetaEvaluator::new(self.eps, Precision::for_digits(self.precision_digits)?)
    }
}
