//! Exact distribution of the selected SNR ratio and the resulting secrecy metrics.
//!
//! All six evaluators are written in terms of
//! `Γ_R = (1 + Γ_SD) / (1 + Γ_SE)` at the selected transmitter. A transmitter
//! whose backhaul is down (or an empty active set under BKA) is an outage at
//! every threshold, so `F(y)` carries the corresponding atom for all `y ≥ 0`.
//!
//! The expansions are arranged so that every term is a probability-weighted
//! positive quantity where possible. The alternating forms are exact too, but
//! at high SNR they subtract numbers close to one and lose all digits.

use core::f64::consts::LN_2;

use crate::channel::{HypoexpDist, Knowledge, Scenario, Scheme, SchemeSpec};
use crate::combinatorics::{binomial_f64, enumerate_compositions, multinomial};
use crate::math::{self, KahanSum};
use crate::quadrature::{self, Integral};
use crate::special::exp_scaled_ei;
use crate::{Error, Result};

/// Absolute tolerance of the ESR quadrature, in nats of `ln x`.
pub const ESR_QUADRATURE_ABS_TOL: f64 = 1e-10;
const ESR_QUADRATURE_REL_TOL: f64 = 1e-11;
const ESR_QUADRATURE_MAX_INTERVALS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EsrMethod {
    ClosedForm,
    Quadrature,
}

impl EsrMethod {
    /// Closed form where one exists (MIN-ES, TTS), quadrature otherwise.
    pub fn preferred(spec: SchemeSpec) -> Self {
        match spec.scheme {
            Scheme::Ots => EsrMethod::Quadrature,
            _ => EsrMethod::ClosedForm,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            EsrMethod::ClosedForm => "closed_form",
            EsrMethod::Quadrature => "quadrature",
        }
    }
}

/// `P[(1 + A)/(1 + B) ≤ y]` for independent `A ~ Exp(a)`, `B ~ Exp(r)`.
pub(crate) fn ratio_kernel(y: f64, a: f64, r: f64) -> f64 {
    let ay = a * y;
    if y >= 1.0 {
        let gap = -math::expm1(-a * (y - 1.0));
        (ay + r * gap) / (ay + r)
    } else {
        let x0 = 1.0 / y - 1.0;
        math::exp(-r * x0) * ay / (ay + r)
    }
}

/// `E[(1 − e^{−X})^j]` for `X ~ Exp(p)`, for `j = 0..=n`.
fn beta_moments(n: u32, p: f64) -> impl Iterator<Item = f64> {
    (0..=n).scan(1.0, move |acc, j| {
        if j > 0 {
            *acc *= j as f64 / (p + j as f64);
        }
        Some(*acc)
    })
}

/// `E_B[(1 − b·e^{−a y B})^n]` for `B ~ Exp(r)`, `y ≥ 1`, with `b ∈ [0, 1]`
/// and `1 − b` supplied separately to keep precision.
fn max_selection_term(n: u32, b: f64, one_minus_b: f64, p: f64) -> f64 {
    beta_moments(n, p)
        .enumerate()
        .map(|(j, moment)| {
            let j = j as u32;
            binomial_f64(n, j) * math::powi(one_minus_b, (n - j) as i32) * math::powi(b, j as i32) * moment
        })
        .collect::<KahanSum>()
        .value()
}

/// Single-link ratio CDF `P[(1 + Γ_SD)/(1 + Γ_SE) ≤ y]` with hypoexponential `Γ_SE`.
fn single_link_cdf(y: f64, a: f64, hypo: &HypoexpDist) -> f64 {
    if y >= 1.0 {
        let log_survival = -a * (y - 1.0)
            - hypo
                .rates()
                .iter()
                .map(|&l| math::ln1p(a * y / l))
                .sum::<f64>();
        -math::expm1(log_survival)
    } else {
        let x0 = 1.0 / y - 1.0;
        hypo.rates()
            .iter()
            .zip(hypo.survival_weights())
            .map(|(&l, &c)| c * math::exp(-l * x0) * a * y / (a * y + l))
            .collect::<KahanSum>()
            .value()
            .clamp(0.0, 1.0)
    }
}

/// One `w·[e^{a+r}Ei(−a−r) − e^{a}Ei(−a)]` contribution to the ESR, i.e. the
/// integral of `w·e^{−a(x−1)}·r/((a x + r) x)` over `[1, ∞)` with `a` the
/// effective destination rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct EsrTerm {
    pub weight: f64,
    pub dest: f64,
    pub eave: f64,
}

/// Evaluates `F_{Γ_R}(y)` for one scheme and knowledge case.
///
/// MIN-ES terms are streamed from the composition enumerator on every call.
#[derive(Debug, Clone)]
pub struct RatioCdfEvaluator {
    scenario: Scenario,
    spec: SchemeSpec,
    hypo: HypoexpDist,
}

impl RatioCdfEvaluator {
    pub fn new(scenario: &Scenario, spec: SchemeSpec) -> Result<Self> {
        scenario.warn_if_ill_conditioned();
        Ok(Self {
            scenario: scenario.clone(),
            spec,
            hypo: scenario.hypoexp(),
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn spec(&self) -> SchemeSpec {
        self.spec
    }

    /// Probability that the selected transmitter cannot deliver at all.
    pub fn outage_atom(&self) -> f64 {
        let s = self.scenario.backhaul_reliability();
        match self.spec.knowledge {
            Knowledge::Bku => 1.0 - s,
            Knowledge::Bka => math::powi(1.0 - s, self.n() as i32),
        }
    }

    fn n(&self) -> u32 {
        self.scenario.n_transmitters()
    }

    /// Weight of each active-set size `m = 1..=N` under BKA.
    fn active_set_weight(&self, m: u32) -> f64 {
        let n = self.n();
        let s = self.scenario.backhaul_reliability();
        binomial_f64(n, m) * math::powi(1.0 - s, (n - m) as i32) * math::powi(s, m as i32)
    }

    /// `(weight, λ̃)` for the min-of-`m` eavesdropping law.
    fn min_terms(&self, m: u32) -> impl Iterator<Item = (f64, f64)> + '_ {
        enumerate_compositions(m, self.hypo.rates().len()).map(move |c| {
            let coeff = multinomial(m, &c).expect("n within multinomial limit") as f64;
            (
                coeff * c.power_product(self.hypo.survival_weights()),
                c.dot(self.hypo.rates()),
            )
        })
    }

    /// Streams all `(weight, λ̃)` pairs of the MIN-ES mixture, weights including `s`.
    fn min_es_terms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.n();
        let s = self.scenario.backhaul_reliability();
        let (first, last) = match self.spec.knowledge {
            Knowledge::Bku => (n, n),
            Knowledge::Bka => (1, n),
        };
        (first..=last).flat_map(move |m| {
            let outer = match self.spec.knowledge {
                Knowledge::Bku => s,
                Knowledge::Bka => self.active_set_weight(m),
            };
            self.min_terms(m).map(move |(w, r)| (outer * w, r))
        })
    }

    /// `F(y)`; zero for `y < 0`.
    pub fn cdf(&self, y: f64) -> f64 {
        if !(y >= 0.0) {
            return 0.0;
        }
        let a = self.scenario.dest_rate();
        let s = self.scenario.backhaul_reliability();
        let n = self.n();
        let value = match self.spec.scheme {
            Scheme::MinEs => {
                let mut acc = KahanSum::new();
                acc.add(self.outage_atom());
                for (w, r) in self.min_es_terms() {
                    acc.add(w * ratio_kernel(y, a, r));
                }
                acc.value()
            }
            Scheme::Tts => self.tts_cdf(y),
            Scheme::Ots => {
                let single = single_link_cdf(y, a, &self.hypo);
                match self.spec.knowledge {
                    Knowledge::Bku => (1.0 - s) + s * math::powi(single, n as i32),
                    Knowledge::Bka => math::powi(1.0 - s + s * single, n as i32),
                }
            }
        };
        value.clamp(0.0, 1.0)
    }

    fn tts_cdf(&self, y: f64) -> f64 {
        let a = self.scenario.dest_rate();
        let s = self.scenario.backhaul_reliability();
        let n = self.n();
        let components = self.hypo.rates().iter().zip(self.hypo.survival_weights());
        let mut acc = KahanSum::new();
        if y >= 1.0 {
            let beta = math::exp(-a * (y - 1.0));
            let gap = -math::expm1(-a * (y - 1.0));
            let (b, one_minus_b, scale) = match self.spec.knowledge {
                Knowledge::Bku => {
                    acc.add(1.0 - s);
                    (beta, gap, s)
                }
                // 1 − sβ = (1 − s) + s(1 − β); the all-inactive atom is inside the j = 0 term.
                Knowledge::Bka => (s * beta, (1.0 - s) + s * gap, 1.0),
            };
            for (&r, &c) in components {
                acc.add(scale * c * max_selection_term(n, b, one_minus_b, r / (a * y)));
            }
        } else {
            let x0 = 1.0 / y - 1.0;
            acc.add(self.outage_atom());
            let (first, last) = match self.spec.knowledge {
                Knowledge::Bku => (n, n),
                Knowledge::Bka => (1, n),
            };
            for m in first..=last {
                let outer = match self.spec.knowledge {
                    Knowledge::Bku => s,
                    Knowledge::Bka => self.active_set_weight(m),
                };
                for (&r, &c) in self.hypo.rates().iter().zip(self.hypo.survival_weights()) {
                    let moment = beta_moments(m, r / (a * y)).last().unwrap_or(1.0);
                    acc.add(outer * c * math::exp(-r * x0) * moment);
                }
            }
        }
        acc.value()
    }

    /// Calls `f` for every term of the Ei-based ESR expansion (MIN-ES and TTS).
    pub(crate) fn for_each_esr_term(&self, mut f: impl FnMut(EsrTerm)) -> Result<()> {
        let a = self.scenario.dest_rate();
        let s = self.scenario.backhaul_reliability();
        let n = self.n();
        match self.spec.scheme {
            Scheme::MinEs => {
                for (weight, eave) in self.min_es_terms() {
                    f(EsrTerm { weight, dest: a, eave });
                }
            }
            Scheme::Tts => {
                for q in 1..=n {
                    let sign = if q % 2 == 1 { 1.0 } else { -1.0 };
                    // Under BKA, Σ_m C(N,m) C(m,q) (1−s)^{N−m} s^m = C(N,q) s^q.
                    let outer = match self.spec.knowledge {
                        Knowledge::Bku => s,
                        Knowledge::Bka => math::powi(s, q as i32),
                    } * sign
                        * binomial_f64(n, q);
                    for (&eave, &c) in self.hypo.rates().iter().zip(self.hypo.survival_weights()) {
                        f(EsrTerm {
                            weight: outer * c,
                            dest: q as f64 * a,
                            eave,
                        });
                    }
                }
            }
            Scheme::Ots => {
                return Err(Error::UnsupportedClosedForm(
                    "the OTS ergodic secrecy rate has no Ei closed form; use quadrature",
                ))
            }
        }
        Ok(())
    }

    /// Exact ESR from the exponential-integral expansion.
    pub fn esr_closed_form(&self) -> Result<f64> {
        let mut acc = KahanSum::new();
        let mut failure = None;
        self.for_each_esr_term(|t| match (exp_scaled_ei(t.dest + t.eave), exp_scaled_ei(t.dest)) {
            (Ok(hi), Ok(lo)) => acc.add(t.weight * (hi - lo)),
            (Err(e), _) | (_, Err(e)) => failure = Some(e),
        })?;
        if let Some(e) = failure {
            return Err(e);
        }
        Ok((acc.value() / LN_2).max(0.0))
    }

    /// ESR by adaptive quadrature of `∫_1^∞ (1 − F(x))/x dx`, in the variable `u = ln x`.
    pub fn esr_quadrature(&self) -> Result<Integral> {
        let integrand = |u: f64| 1.0 - self.cdf(math::exp(u));
        let a = self.scenario.dest_rate();
        let split = math::ln1p(60.0 / a);
        let head = quadrature::integrate(
            integrand,
            0.0,
            split,
            0.5 * ESR_QUADRATURE_ABS_TOL,
            ESR_QUADRATURE_REL_TOL,
            ESR_QUADRATURE_MAX_INTERVALS,
        )?;
        let tail = quadrature::integrate_to_infinity(
            integrand,
            split,
            0.5 * ESR_QUADRATURE_ABS_TOL,
            ESR_QUADRATURE_REL_TOL,
            ESR_QUADRATURE_MAX_INTERVALS,
        )?;
        Ok(Integral {
            value: ((head.value + tail.value) / LN_2).max(0.0),
            error: (head.error + tail.error) / LN_2,
            intervals: head.intervals + tail.intervals,
        })
    }

    pub fn esr(&self, method: EsrMethod) -> Result<f64> {
        match method {
            EsrMethod::ClosedForm => self.esr_closed_form(),
            EsrMethod::Quadrature => Ok(self.esr_quadrature()?.value),
        }
    }
}

/// `F_{Γ_R}(y)` of the selected transmitter.
pub fn ratio_cdf(scenario: &Scenario, spec: SchemeSpec, y: f64) -> Result<f64> {
    if !(y >= 0.0) {
        return Err(Error::Domain {
            what: "SNR ratio (must be nonnegative)",
            value: y,
        });
    }
    Ok(RatioCdfEvaluator::new(scenario, spec)?.cdf(y))
}

/// Secrecy outage probability `F(2^{R_th})`.
pub fn sop(scenario: &Scenario, spec: SchemeSpec) -> Result<f64> {
    Ok(RatioCdfEvaluator::new(scenario, spec)?.cdf(scenario.rho()))
}

/// Probability of a strictly positive secrecy rate, `1 − F(1)`.
pub fn nzsr(scenario: &Scenario, spec: SchemeSpec) -> Result<f64> {
    Ok(1.0 - RatioCdfEvaluator::new(scenario, spec)?.cdf(1.0))
}

pub fn esr_closed_form(scenario: &Scenario, spec: SchemeSpec) -> Result<f64> {
    RatioCdfEvaluator::new(scenario, spec)?.esr_closed_form()
}

pub fn esr_quadrature(scenario: &Scenario, spec: SchemeSpec) -> Result<f64> {
    Ok(RatioCdfEvaluator::new(scenario, spec)?.esr_quadrature()?.value)
}

/// ESR by [`EsrMethod::preferred`].
pub fn esr(scenario: &Scenario, spec: SchemeSpec) -> Result<f64> {
    RatioCdfEvaluator::new(scenario, spec)?.esr(EsrMethod::preferred(spec))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecrecyReport {
    pub scenario: Scenario,
    pub spec: SchemeSpec,
    pub nzsr: f64,
    pub sop: f64,
    pub esr: f64,
    pub esr_method: EsrMethod,
}

impl SecrecyReport {
    pub fn new(scenario: &Scenario, spec: SchemeSpec) -> Result<Self> {
        let eval = RatioCdfEvaluator::new(scenario, spec)?;
        let esr_method = EsrMethod::preferred(spec);
        Ok(Self {
            scenario: scenario.clone(),
            spec,
            nzsr: 1.0 - eval.cdf(1.0),
            sop: eval.cdf(scenario.rho()),
            esr: eval.esr(esr_method)?,
            esr_method,
        })
    }
}
