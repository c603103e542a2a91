//! Sweeps over one scenario parameter.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use secsel_core::asymptotics::{esr_asymptote, esr_high_snr_ots, nzsr_asymptote, sop_asymptote};
use secsel_core::exact::sop;
use secsel_core::monte_carlo::Tally;
use secsel_core::{
    EsrMethod, Knowledge, McConfig, McEstimate, Metric, RatioCdfEvaluator, Scenario, Scheme, SchemeSpec,
};

use crate::{parallel, CliError};

/// Points beyond this are refused as a usage error.
pub const MAX_POINTS: usize = 100_000;

/// Bisection stops once the bracket is this narrow, in dB.
pub const CROSSOVER_RESOLUTION_DB: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    DestSnrDb,
    S,
    NTransmitters,
}

impl SweepVariable {
    pub fn label(self) -> &'static str {
        match self {
            SweepVariable::DestSnrDb => "dest_snr_db",
            SweepVariable::S => "s",
            SweepVariable::NTransmitters => "n_transmitters",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Sop,
    Nzsr,
    Esr,
    Asymptote,
    Mc,
}

impl Output {
    pub fn metric(self) -> Option<Metric> {
        match self {
            Output::Sop => Some(Metric::Sop),
            Output::Nzsr => Some(Metric::Nzsr),
            Output::Esr => Some(Metric::Esr),
            Output::Asymptote | Output::Mc => None,
        }
    }
}

impl From<Metric> for Output {
    fn from(m: Metric) -> Self {
        match m {
            Metric::Sop => Output::Sop,
            Metric::Nzsr => Output::Nzsr,
            Metric::Esr => Output::Esr,
        }
    }
}

/// Variable, grid, specs and outputs of one sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRange {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    pub specs: Vec<SchemeSpec>,
    pub outputs: BTreeSet<Output>,
}

impl SweepRange {
    pub fn new(
        variable: SweepVariable,
        start: f64,
        stop: f64,
        step: f64,
        specs: Vec<SchemeSpec>,
        outputs: impl IntoIterator<Item = Output>,
    ) -> Result<Self, CliError> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(CliError::Usage("sweep bounds must be finite".into()));
        }
        if step <= 0.0 {
            return Err(CliError::Usage(format!("sweep step must be positive, got {step}")));
        }
        if stop < start {
            return Err(CliError::Usage(format!("empty sweep range: start {start} > stop {stop}")));
        }
        if specs.is_empty() {
            return Err(CliError::Usage("no schemes selected".into()));
        }
        let mut unique = Vec::new();
        for s in specs {
            if !unique.contains(&s) {
                unique.push(s);
            }
        }
        let range = Self {
            variable,
            start,
            stop,
            step,
            specs: unique,
            outputs: outputs.into_iter().collect(),
        };
        if range.metrics().is_empty() {
            return Err(CliError::Usage("no metric selected (expected sop, nzsr or esr)".into()));
        }
        if (stop - start) / step >= MAX_POINTS as f64 {
            return Err(CliError::Usage(format!("sweep has more than {MAX_POINTS} points")));
        }
        Ok(range)
    }

    /// `start + i·step` up to `stop`, tolerating rounding at the end point.
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.start + i as f64 * self.step).collect()
    }

    pub fn metrics(&self) -> Vec<Metric> {
        self.outputs.iter().filter_map(|o| o.metric()).collect()
    }

    pub fn with_metrics(mut self, metrics: &[Metric]) -> Result<Self, CliError> {
        self.outputs.retain(|o| o.metric().is_none());
        self.outputs.extend(metrics.iter().map(|&m| Output::from(m)));
        if self.metrics().is_empty() {
            return Err(CliError::Usage("no metric selected (expected sop, nzsr or esr)".into()));
        }
        Ok(self)
    }

    pub fn wants(&self, output: Output) -> bool {
        self.outputs.contains(&output)
    }
}

/// One curve family: a base scenario swept over a range.
#[derive(Debug, Clone, PartialEq)]
pub struct Family {
    pub label: String,
    pub base: Scenario,
    pub range: SweepRange,
    /// Report where TTS overtakes MIN-ES in SOP.
    pub crossover: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRecord {
    pub x: f64,
    pub spec: SchemeSpec,
    pub metric: Metric,
    pub exact: Option<f64>,
    pub asymptote: Option<f64>,
    pub mc: Option<McEstimate>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyResult {
    pub label: String,
    pub variable: SweepVariable,
    pub records: Vec<CurveRecord>,
    pub notes: Vec<String>,
}

impl FamilyResult {
    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| r.error.is_some()).count()
    }
}

pub fn point_scenario(base: &Scenario, variable: SweepVariable, x: f64) -> Result<Scenario, CliError> {
    let scenario = match variable {
        SweepVariable::DestSnrDb => base.with_dest_snr_db(x)?,
        SweepVariable::S => base.with_backhaul_reliability(x)?,
        SweepVariable::NTransmitters => {
            if x.fract() != 0.0 || x < 1.0 {
                return Err(CliError::Usage(format!("n_transmitters must be a positive integer, got {x}")));
            }
            base.with_n_transmitters(x as u32)?
        }
    };
    Ok(scenario)
}

fn exact_value(eval: &RatioCdfEvaluator, metric: Metric) -> secsel_core::Result<f64> {
    let rho = eval.scenario().rho();
    match metric {
        Metric::Sop => Ok(eval.cdf(rho)),
        Metric::Nzsr => Ok(1.0 - eval.cdf(1.0)),
        Metric::Esr => eval.esr(EsrMethod::preferred(eval.spec())),
    }
}

/// High-SNR value for the asymptote column.
pub fn asymptote_value(scenario: &Scenario, spec: SchemeSpec, metric: Metric) -> secsel_core::Result<f64> {
    match metric {
        Metric::Sop => Ok(sop_asymptote(scenario, spec).value),
        Metric::Nzsr => Ok(nzsr_asymptote(scenario, spec)),
        Metric::Esr if spec.scheme == Scheme::Ots && scenario.n_eavesdroppers() > 1 => {
            esr_high_snr_ots(scenario, spec)
        }
        Metric::Esr => Ok(esr_asymptote(scenario, spec)?.value_at(scenario.dest_rate())),
    }
}

fn evaluate_point(family: &Family, x: f64, mc: Option<&McConfig>) -> Vec<CurveRecord> {
    let range = &family.range;
    let metrics = range.metrics();
    let blank = |spec, metric, error: Option<String>| CurveRecord {
        x,
        spec,
        metric,
        exact: None,
        asymptote: None,
        mc: None,
        error,
    };
    let scenario = match point_scenario(&family.base, range.variable, x) {
        Ok(s) => s,
        Err(e) => {
            log::warn!("{}: x = {x}: {e}", family.label);
            return range
                .specs
                .iter()
                .flat_map(|&spec| metrics.iter().map(move |&m| (spec, m)))
                .map(|(spec, m)| blank(spec, m, Some(e.to_string())))
                .collect();
        }
    };
    let tally: Option<Tally> = mc.map(|cfg| parallel::simulate(&scenario, cfg));
    let mut out = Vec::with_capacity(range.specs.len() * metrics.len());
    for &spec in &range.specs {
        let eval = RatioCdfEvaluator::new(&scenario, spec);
        for &metric in &metrics {
            let mut record = blank(spec, metric, None);
            let mut errors = Vec::new();
            match eval.as_ref().map_err(Clone::clone).and_then(|e| exact_value(e, metric)) {
                Ok(v) => record.exact = Some(v),
                Err(e) => errors.push(format!("exact: {e}")),
            }
            if range.wants(Output::Asymptote) {
                match asymptote_value(&scenario, spec, metric) {
                    Ok(v) => record.asymptote = Some(v),
                    Err(e) => errors.push(format!("asymptote: {e}")),
                }
            }
            record.mc = tally.as_ref().map(|t| t.estimate(spec, metric));
            if !errors.is_empty() {
                let msg = errors.join("; ");
                log::warn!("{}: x = {x}, {spec} {}: {msg}", family.label, metric.label());
                record.error = Some(msg);
            }
            out.push(record);
        }
    }
    out
}

/// Evaluates every point, in parallel, and assembles records in grid order.
pub fn run_family(family: &Family, mc: Option<&McConfig>) -> FamilyResult {
    let points = family.range.points();
    let records: Vec<CurveRecord> = points
        .par_iter()
        .map(|&x| evaluate_point(family, x, mc))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let mut notes = Vec::new();
    if family.crossover && family.range.variable == SweepVariable::DestSnrDb {
        for knowledge in Knowledge::ALL {
            let note = match crossover(&family.base, knowledge, family.range.start, family.range.stop, family.range.step) {
                Ok(Some(db)) => format!(
                    "crossover: SOP of TTS-{k} drops below MIN-ES-{k} at {db:.1} dB",
                    k = knowledge.label()
                ),
                Ok(None) => format!("crossover: none for {} in range", knowledge.label()),
                Err(e) => format!("crossover: {} failed: {e}", knowledge.label()),
            };
            notes.push(note);
        }
    }
    FamilyResult {
        label: family.label.clone(),
        variable: family.range.variable,
        records,
        notes,
    }
}

/// First destination SNR in `[lo, hi]` where SOP(TTS) − SOP(MIN-ES) turns
/// from positive to non-positive, bisected to [`CROSSOVER_RESOLUTION_DB`].
pub fn crossover(
    base: &Scenario,
    knowledge: Knowledge,
    lo: f64,
    hi: f64,
    step: f64,
) -> secsel_core::Result<Option<f64>> {
    let gap = |db: f64| -> secsel_core::Result<f64> {
        let sc = base.with_dest_snr_db(db)?;
        Ok(sop(&sc, SchemeSpec::new(Scheme::Tts, knowledge))?
            - sop(&sc, SchemeSpec::new(Scheme::MinEs, knowledge))?)
    };
    let mut a = lo;
    let mut ga = gap(a)?;
    while a < hi {
        let b = (a + step).min(hi);
        let gb = gap(b)?;
        if ga > 0.0 && gb <= 0.0 {
            let (mut l, mut r) = (a, b);
            while r - l > CROSSOVER_RESOLUTION_DB {
                let m = 0.5 * (l + r);
                if gap(m)? > 0.0 {
                    l = m;
                } else {
                    r = m;
                }
            }
            return Ok(Some(0.5 * (l + r)));
        }
        a = b;
        ga = gb;
    }
    Ok(None)
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}
