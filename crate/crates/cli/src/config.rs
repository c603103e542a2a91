//! TOML scenario files.
//!
//! ```toml
//! [scenario]
//! n_transmitters = 5
//! backhaul_reliability = 0.9
//! dest_snr_db = 20.0
//! eave_snr_db = [6.0, 9.0, 13.0]
//! threshold_rate = 1.0
//!
//! [sweep]
//! variable = "dest_snr_db"
//! start = 0.0
//! stop = 60.0
//! step = 2.0
//! specs = ["MIN-ES-BKU", "TTS-BKA"]
//! outputs = ["sop", "esr", "asymptote"]
//!
//! [mc]
//! trials = 1000000
//! seed = 7
//! ```

use std::path::Path;

use serde::Deserialize;

use secsel_core::channel::rate_from_snr_db;
use secsel_core::monte_carlo::DEFAULT_BATCH_SIZE;
use secsel_core::{McConfig, Scenario, SchemeSpec};

use crate::sweep::{Output, SweepRange, SweepVariable};
use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub scenario: ScenarioSection,
    pub sweep: Option<SweepSection>,
    pub mc: Option<McSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub n_transmitters: u32,
    pub backhaul_reliability: f64,
    pub dest_snr_db: f64,
    pub eave_snr_db: Vec<f64>,
    pub threshold_rate: f64,
    pub n_eavesdroppers: Option<usize>,
    /// Perturb duplicated eavesdropper SNRs instead of rejecting them.
    #[serde(default)]
    pub jitter_duplicate_rates: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    pub specs: Option<Vec<String>>,
    pub outputs: Option<Vec<Output>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSection {
    pub trials: u64,
    pub seed: Option<u64>,
    pub batch_size: Option<u64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            context: format!("cannot read {}", path.display()),
            source,
        })?;
        Self::parse(&text).map_err(|message| CliError::Config {
            path: path.display().to_string(),
            message,
        })
    }

    /// Parses TOML text; errors carry line and column.
    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string().trim_end().to_string())
    }
}

impl ScenarioSection {
    pub fn build(&self) -> Result<Scenario, CliError> {
        if let Some(k) = self.n_eavesdroppers {
            if k != self.eave_snr_db.len() {
                return Err(CliError::Usage(format!(
                    "n_eavesdroppers = {k} but eave_snr_db lists {} values",
                    self.eave_snr_db.len()
                )));
            }
        }
        let dest_rate = rate_from_snr_db(self.dest_snr_db);
        let rates: Vec<f64> = self.eave_snr_db.iter().map(|&db| rate_from_snr_db(db)).collect();
        let scenario = if self.jitter_duplicate_rates {
            Scenario::with_jittered_rates(
                self.n_transmitters,
                self.backhaul_reliability,
                dest_rate,
                &rates,
                self.threshold_rate,
            )
        } else {
            Scenario::new(
                self.n_transmitters,
                self.backhaul_reliability,
                dest_rate,
                rates,
                self.threshold_rate,
            )
        };
        scenario.map_err(|e| match e {
            secsel_core::Error::RateSeparation { .. } => CliError::Usage(format!(
                "{e}\nhint: set `jitter_duplicate_rates = true` in [scenario] to perturb duplicates"
            )),
            other => other.into(),
        })
    }
}

impl SweepSection {
    pub fn range(&self) -> Result<SweepRange, CliError> {
        let specs = match &self.specs {
            Some(names) => names
                .iter()
                .map(|n| n.parse::<SchemeSpec>())
                .collect::<Result<Vec<_>, _>>()?,
            None => SchemeSpec::ALL.to_vec(),
        };
        let outputs = self
            .outputs
            .clone()
            .unwrap_or_else(|| vec![Output::Sop, Output::Nzsr, Output::Esr]);
        SweepRange::new(self.variable, self.start, self.stop, self.step, specs, outputs)
    }
}

impl McSection {
    pub fn config(&self, seed_override: Option<u64>, trials_override: Option<u64>) -> Result<McConfig, CliError> {
        let trials = trials_override.unwrap_or(self.trials);
        let seed = seed_override.or(self.seed).unwrap_or(crate::app::DEFAULT_SEED);
        Ok(McConfig::with_batch_size(
            trials,
            seed,
            self.batch_size.unwrap_or(DEFAULT_BATCH_SIZE),
        )?)
    }
}
