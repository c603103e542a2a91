//! Closed form, quadrature and Monte Carlo agreement for one scenario.

use std::fmt::Write as _;

use secsel_core::exact::{nzsr, sop};
use secsel_core::{McConfig, McEstimate, Metric, RatioCdfEvaluator, Scenario, Scheme, SchemeSpec};

use crate::parallel;

/// Monte Carlo agreement band in standard errors.
pub const Z_LIMIT: f64 = 3.0;
/// Closed-form against quadrature ESR, relative.
pub const ESR_METHOD_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub spec: SchemeSpec,
    pub metric: Metric,
    pub exact: f64,
    pub mc: McEstimate,
    pub z: f64,
    /// Relative closed-form vs quadrature gap, ESR of MIN-ES and TTS only.
    pub method_gap: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<11} {:<5} {:>14} {:>14} {:>11} {:>7} {:>10}  result",
            "spec", "metric", "exact", "mc_mean", "mc_stderr", "z", "cf/quad"
        );
        for c in &self.checks {
            let gap = c.method_gap.map(|g| format!("{g:.1e}")).unwrap_or_else(|| "-".into());
            let _ = writeln!(
                s,
                "{:<11} {:<5} {:>14.8e} {:>14.8e} {:>11.3e} {:>7.3} {:>10}  {}",
                c.spec.to_string(),
                c.metric.label(),
                c.exact,
                c.mc.mean,
                c.mc.std_error,
                c.z,
                gap,
                if c.passed { "pass" } else { "FAIL" }
            );
        }
        let _ = writeln!(s, "{}/{} checks passed", self.checks.len() - self.failures(), self.checks.len());
        s
    }
}

/// Six specs × {SOP, NZSR, ESR}. ESR uses quadrature against Monte Carlo.
pub fn verify(scenario: &Scenario, config: &McConfig) -> secsel_core::Result<VerifyReport> {
    let tally = parallel::simulate(scenario, config);
    let mut checks = Vec::with_capacity(18);
    for spec in SchemeSpec::ALL {
        let eval = RatioCdfEvaluator::new(scenario, spec)?;
        let quad = eval.esr_quadrature()?.value;
        let method_gap = match spec.scheme {
            Scheme::Ots => None,
            _ => Some(((eval.esr_closed_form()? - quad) / quad).abs()),
        };
        for (metric, exact, gap) in [
            (Metric::Sop, sop(scenario, spec)?, None),
            (Metric::Nzsr, nzsr(scenario, spec)?, None),
            (Metric::Esr, quad, method_gap),
        ] {
            let mc = tally.estimate(spec, metric);
            let z = mc.z_score(exact);
            let passed = z <= Z_LIMIT && gap.is_none_or(|g| g <= ESR_METHOD_TOL);
            checks.push(Check {
                spec,
                metric,
                exact,
                mc,
                z,
                method_gap: gap,
                passed,
            });
        }
    }
    Ok(VerifyReport { checks })
}
