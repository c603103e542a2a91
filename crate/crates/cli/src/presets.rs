//! Parameter blocks for Figs. 2–7.

use secsel_core::{Metric, Scenario, SchemeSpec};

use crate::sweep::{Family, Output, SweepRange, SweepVariable};
use crate::CliError;

pub const THREE_EAVESDROPPERS_DB: &[f64] = &[6.0, 9.0, 13.0];
pub const ONE_EAVESDROPPER_DB: &[f64] = &[13.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresetFamily {
    pub n_transmitters: u32,
    pub backhaul_reliability: f64,
    pub eave_snr_db: &'static [f64],
    pub threshold_rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub metric: Metric,
    pub families: &'static [PresetFamily],
    pub x_start_db: f64,
    pub x_stop_db: f64,
    pub x_step_db: f64,
    pub crossover: bool,
}

const fn fam(n_transmitters: u32, backhaul_reliability: f64, eave_snr_db: &'static [f64]) -> PresetFamily {
    PresetFamily {
        n_transmitters,
        backhaul_reliability,
        eave_snr_db,
        threshold_rate: 1.0,
    }
}

const fn preset(name: &'static str, metric: Metric, families: &'static [PresetFamily], crossover: bool) -> Preset {
    Preset {
        name,
        metric,
        families,
        x_start_db: 0.0,
        x_stop_db: 60.0,
        x_step_db: 2.0,
        crossover,
    }
}

const K3: &[f64] = THREE_EAVESDROPPERS_DB;
const K1: &[f64] = ONE_EAVESDROPPER_DB;

pub const PRESETS: [Preset; 6] = [
    preset("fig2", Metric::Sop, &[fam(5, 0.2, K3), fam(5, 0.9, K3)], true),
    preset("fig3", Metric::Sop, &[fam(2, 0.2, K3), fam(5, 0.2, K3)], false),
    preset("fig4", Metric::Sop, &[fam(5, 0.9, K1), fam(5, 0.9, K3)], false),
    preset("fig5", Metric::Esr, &[fam(5, 0.9, K3), fam(5, 0.2, K3)], false),
    preset(
        "fig6",
        Metric::Esr,
        &[fam(2, 0.2, K1), fam(5, 0.2, K1), fam(2, 0.2, K3), fam(5, 0.2, K3)],
        false,
    ),
    preset("fig7", Metric::Esr, &[fam(5, 1.0, K1), fam(5, 0.5, K1)], false),
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name.eq_ignore_ascii_case(name))
}

impl PresetFamily {
    pub fn label(&self) -> String {
        let eaves: Vec<String> = self.eave_snr_db.iter().map(|d| d.to_string()).collect();
        format!(
            "N={} s={} K={} eave_snr_db=[{}] R_th={}",
            self.n_transmitters,
            self.backhaul_reliability,
            self.eave_snr_db.len(),
            eaves.join(";"),
            self.threshold_rate
        )
    }

    pub fn scenario(&self, dest_snr_db: f64) -> secsel_core::Result<Scenario> {
        Scenario::from_db(
            self.n_transmitters,
            self.backhaul_reliability,
            dest_snr_db,
            self.eave_snr_db,
            self.threshold_rate,
        )
    }
}

impl Preset {
    pub fn range(&self) -> Result<SweepRange, CliError> {
        SweepRange::new(
            SweepVariable::DestSnrDb,
            self.x_start_db,
            self.x_stop_db,
            self.x_step_db,
            SchemeSpec::ALL.to_vec(),
            [Output::from(self.metric), Output::Asymptote],
        )
    }

    pub fn families(&self) -> Result<Vec<Family>, CliError> {
        let range = self.range()?;
        self.families
            .iter()
            .map(|f| {
                Ok(Family {
                    label: format!("{} {}", self.name, f.label()),
                    base: f.scenario(self.x_start_db)?,
                    range: range.clone(),
                    crossover: self.crossover,
                })
            })
            .collect()
    }
}
