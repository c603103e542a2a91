//! High-SNR behaviour: SOP floors, diversity orders and the ESR straight line
//! `S∞ (ln(1/λ_D) − L∞)`.

use alloc::vec::Vec;
use core::f64::consts::{LN_10, LN_2};

use crate::channel::{Knowledge, Scenario, Scheme, SchemeSpec};
use crate::combinatorics::{binomial_f64, enumerate_compositions, harmonic, multinomial, partial_fractions};
use crate::exact::RatioCdfEvaluator;
use crate::math::{self, KahanSum};
use crate::special::{exp_scaled_ei, EULER_GAMMA};
use crate::{Error, Result};

/// SOP floor as `1/λ_D → ∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SopAsymptote {
    pub value: f64,
    pub regime_note: &'static str,
}

pub fn sop_asymptote(scenario: &Scenario, spec: SchemeSpec) -> SopAsymptote {
    let s = scenario.backhaul_reliability();
    match spec.knowledge {
        Knowledge::Bku => SopAsymptote {
            value: 1.0 - s,
            regime_note: "selected transmitter's backhaul inactive",
        },
        Knowledge::Bka => SopAsymptote {
            value: math::powi(1.0 - s, scenario.n_transmitters() as i32),
            regime_note: "all backhaul links inactive",
        },
    }
}

pub fn nzsr_asymptote(scenario: &Scenario, spec: SchemeSpec) -> f64 {
    1.0 - sop_asymptote(scenario, spec).value
}

/// Diversity order with perfect backhaul: 1 for MIN-ES, `N` otherwise.
pub fn diversity_order_analytic(spec: SchemeSpec, n_transmitters: u32) -> u32 {
    match spec.scheme {
        Scheme::MinEs => 1,
        Scheme::Tts | Scheme::Ots => n_transmitters,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiversityFit {
    pub estimated_order: f64,
    pub fit_window_db: (f64, f64),
    pub analytic_order: u32,
}

fn require_perfect_backhaul(scenario: &Scenario) -> Result<()> {
    if scenario.backhaul_reliability() < 1.0 {
        return Err(Error::InvalidRegime(
            "diversity is only defined with perfect backhaul (s = 1); the SOP saturates otherwise",
        ));
    }
    Ok(())
}

/// Least-squares slope of `log10 SOP` against `log10(1/λ_D)` on a 1 dB grid.
pub fn diversity_order_fit(scenario: &Scenario, spec: SchemeSpec, window_db: (f64, f64)) -> Result<DiversityFit> {
    require_perfect_backhaul(scenario)?;
    let (lo, hi) = window_db;
    if !(hi > lo) {
        return Err(Error::InvalidParameter {
            name: "window_db",
            reason: alloc::format!("empty window ({lo}, {hi})"),
        });
    }
    let steps = libm::ceil(hi - lo) as usize;
    let mut points = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let db = lo + (hi - lo) * i as f64 / steps as f64;
        let sc = scenario.with_dest_snr_db(db)?;
        let p = crate::exact::sop(&sc, spec)?;
        if !(p > 0.0) {
            return Err(Error::Domain {
                what: "SOP underflowed inside the fit window",
                value: db,
            });
        }
        points.push((db / 10.0, math::log10(p)));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(DiversityFit {
        estimated_order: -sxy / sxx,
        fit_window_db: window_db,
        analytic_order: diversity_order_analytic(spec, scenario.n_transmitters()),
    })
}

/// First-order SOP with `F_SD(x) ≈ λ_D x`, perfect backhaul.
///
/// MIN-ES: `λ_D Σ_i m_i Π c^i (ρ/λ̃ + ρ − 1)`.
/// TTS: `λ_D^N Σ_n C(N,n) ρ^n (ρ−1)^{N−n} E[Γ_SE^n]`.
/// OTS: `(λ_D (ρ − 1 + ρ E[Γ_SE]))^N`.
pub fn sop_high_snr_approx(scenario: &Scenario, spec: SchemeSpec) -> Result<f64> {
    require_perfect_backhaul(scenario)?;
    let a = scenario.dest_rate();
    let rho = scenario.rho();
    let n = scenario.n_transmitters();
    let hypo = scenario.hypoexp();
    let weights = hypo.survival_weights();
    let rates = hypo.rates();
    let moment = |order: u32| -> f64 {
        let fact: f64 = (1..=order).map(|i| i as f64).product();
        rates
            .iter()
            .zip(weights)
            .map(|(&l, &c)| c * fact / math::powi(l, order as i32))
            .collect::<KahanSum>()
            .value()
    };
    Ok(match spec.scheme {
        Scheme::MinEs => {
            let mut acc = KahanSum::new();
            for c in enumerate_compositions(n, rates.len()) {
                let w = multinomial(n, &c)? as f64 * c.power_product(weights);
                acc.add(w * (rho / c.dot(rates) + rho - 1.0));
            }
            a * acc.value()
        }
        Scheme::Tts => {
            let sum: f64 = (0..=n)
                .map(|m| binomial_f64(n, m) * math::powi(rho, m as i32) * math::powi(rho - 1.0, (n - m) as i32) * moment(m))
                .collect::<KahanSum>()
                .value();
            math::powi(a, n as i32) * sum
        }
        Scheme::Ots => math::powi(a * (rho - 1.0 + rho * moment(1)), n as i32),
    })
}

/// ESR line `S∞ (ln(1/λ_D) − L∞)`, with `L∞` in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EsrAsymptote {
    pub slope: f64,
    pub offset: f64,
}

impl EsrAsymptote {
    pub fn value_at(&self, dest_rate: f64) -> f64 {
        self.slope * (-math::ln(dest_rate) - self.offset)
    }

    pub fn value_at_db(&self, dest_snr_db: f64) -> f64 {
        self.slope * (dest_snr_db * LN_10 / 10.0 - self.offset)
    }

    /// `L∞` expressed in dB of `1/λ_D`.
    pub fn offset_db(&self) -> f64 {
        self.offset * 10.0 / LN_10
    }
}

/// Probability mass that can carry a positive secrecy rate at high SNR.
fn active_mass(scenario: &Scenario, spec: SchemeSpec) -> f64 {
    nzsr_asymptote(scenario, spec)
}

pub fn esr_asymptote(scenario: &Scenario, spec: SchemeSpec) -> Result<EsrAsymptote> {
    let w_total = active_mass(scenario, spec);
    let slope = w_total / LN_2;
    let n = scenario.n_transmitters();
    let s = scenario.backhaul_reliability();
    let offset = match spec.scheme {
        Scheme::Ots => {
            let rates = scenario.eave_rates();
            if rates.len() != 1 {
                return Err(Error::UnsupportedClosedForm(
                    "the OTS ESR line is only available for a single eavesdropper; use esr_high_snr_ots",
                ));
            }
            let mut acc = KahanSum::new();
            for m in 1..=n {
                let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
                let w = match spec.knowledge {
                    Knowledge::Bku => s,
                    Knowledge::Bka => math::powi(s, m as i32),
                };
                acc.add(sign * binomial_f64(n, m) * w * harmonic(m - 1));
            }
            -math::ln(rates[0]) + acc.value() / w_total
        }
        _ => {
            let a = scenario.dest_rate();
            let eval = RatioCdfEvaluator::new(scenario, spec)?;
            let mut acc = KahanSum::new();
            let mut failure = None;
            eval.for_each_esr_term(|t| match exp_scaled_ei(t.eave) {
                Ok(e) => acc.add(t.weight * (EULER_GAMMA + math::ln(t.dest / a) - e)),
                Err(err) => failure = Some(err),
            })?;
            if let Some(err) = failure {
                return Err(err);
            }
            acc.value() / w_total
        }
    };
    Ok(EsrAsymptote { slope, offset })
}

/// High-SNR OTS ESR, dropping `e^{−λ_D(x−1)}` from the single-link survival
/// `S(x) = e^{−λ_D(x−1)} Π_k λ_k/(λ_D x + λ_k)` and integrating exactly.
pub fn esr_high_snr_ots(scenario: &Scenario, spec: SchemeSpec) -> Result<f64> {
    if spec.scheme != Scheme::Ots {
        return Err(Error::InvalidParameter {
            name: "scheme",
            reason: "esr_high_snr_ots applies to OTS only".into(),
        });
    }
    let a = scenario.dest_rate();
    let n = scenario.n_transmitters();
    let s = scenario.backhaul_reliability();
    // Poles at −β_k with β_k = λ_k/λ_D, rescaled by their geometric mean.
    let betas: Vec<f64> = scenario.eave_rates().iter().map(|&l| l / a).collect();
    let scale = math::exp(betas.iter().map(|&b| math::ln(b)).sum::<f64>() / betas.len() as f64);
    let scaled: Vec<f64> = betas.iter().map(|&b| b / scale).collect();
    let t0 = 1.0 / scale;
    let mut total = KahanSum::new();
    for m in 1..=n {
        // ∫_{t0}^∞ Π_k b_k^m / (t Π_k (t + b_k)^m) dt
        let constant: f64 = scaled.iter().map(|&b| math::powi(b, m as i32)).product();
        let mut poles: Vec<(f64, u32)> = scaled.iter().map(|&b| (-b, m)).collect();
        poles.push((0.0, 1));
        let pf = partial_fractions(constant, &poles)?;
        let mut integral = KahanSum::new();
        for (k, pole) in pf.poles().iter().enumerate() {
            let base = t0 - pole.location;
            for (l, &coef) in pf.coefficients(k).iter().enumerate() {
                let power = l as i32 + 1;
                if power == 1 {
                    integral.add(-coef * math::ln(base));
                } else {
                    integral.add(coef * math::powi(base, 1 - power) / (power - 1) as f64);
                }
            }
        }
        let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
        let w = match spec.knowledge {
            Knowledge::Bku => s,
            Knowledge::Bka => math::powi(s, m as i32),
        };
        total.add(sign * binomial_f64(n, m) * w * integral.value());
    }
    Ok((total.value() / LN_2).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn scenario(n: u32, s: f64, db: f64, rates: Vec<f64>) -> Scenario {
        Scenario::new(n, s, crate::channel::rate_from_snr_db(db), rates, 1.0).unwrap()
    }

    #[test]
    fn floors() {
        let sc = scenario(5, 0.9, 20.0, vec![0.25, 0.126, 0.05]);
        let bku = SchemeSpec::new(Scheme::Tts, Knowledge::Bku);
        let bka = SchemeSpec::new(Scheme::Tts, Knowledge::Bka);
        assert!((sop_asymptote(&sc, bku).value - 0.1).abs() < 1e-15);
        let sc2 = sc.with_backhaul_reliability(0.2).unwrap();
        assert!((sop_asymptote(&sc2, bka).value - 0.327_68).abs() < 1e-15);
        assert!((nzsr_asymptote(&sc2, bku) - 0.2).abs() < 1e-15);
        let perfect = sc.with_backhaul_reliability(1.0).unwrap();
        assert_eq!(sop_asymptote(&perfect, bku).value, 0.0);
        assert_eq!(sop_asymptote(&perfect, bka).value, 0.0);
        assert_eq!(nzsr_asymptote(&perfect, bka), 1.0);
    }

    #[test]
    fn analytic_orders() {
        assert_eq!(diversity_order_analytic(SchemeSpec::new(Scheme::MinEs, Knowledge::Bku), 7), 1);
        assert_eq!(diversity_order_analytic(SchemeSpec::new(Scheme::Tts, Knowledge::Bku), 5), 5);
        assert_eq!(diversity_order_analytic(SchemeSpec::new(Scheme::Ots, Knowledge::Bka), 3), 3);
    }

    #[test]
    fn fit_requires_perfect_backhaul() {
        let sc = scenario(2, 0.9, 20.0, vec![0.25]);
        let err = diversity_order_fit(&sc, SchemeSpec::new(Scheme::Tts, Knowledge::Bku), (50.0, 70.0)).unwrap_err();
        assert!(matches!(err, Error::InvalidRegime(_)));
    }

    #[test]
    fn tts_fit_two() {
        let sc = scenario(2, 1.0, 20.0, vec![0.25, 0.126, 0.05]);
        let fit = diversity_order_fit(&sc, SchemeSpec::new(Scheme::Tts, Knowledge::Bku), (50.0, 70.0)).unwrap();
        assert!((fit.estimated_order - 2.0).abs() < 0.1);
        assert_eq!(fit.analytic_order, 2);
    }

    #[test]
    fn min_es_single_eavesdropper_approx() {
        let l = 0.05;
        let sc = scenario(4, 1.0, 60.0, vec![l]);
        let approx = sop_high_snr_approx(&sc, SchemeSpec::new(Scheme::MinEs, Knowledge::Bku)).unwrap();
        let rho = 2.0;
        let want = sc.dest_rate() * (rho / (4.0 * l) + rho - 1.0);
        assert!(((approx - want) / want).abs() < 1e-12);
    }

    #[test]
    fn slopes() {
        let sc = scenario(5, 1.0, 60.0, vec![0.25, 0.126, 0.05]);
        for spec in SchemeSpec::ALL.into_iter().filter(|s| s.scheme != Scheme::Ots) {
            let line = esr_asymptote(&sc, spec).unwrap();
            assert!((line.slope - 1.0 / LN_2).abs() < 1e-15);
        }
        let sc = sc.with_backhaul_reliability(0.2).unwrap();
        let line = esr_asymptote(&sc, SchemeSpec::new(Scheme::MinEs, Knowledge::Bku)).unwrap();
        assert!((line.slope - 0.288_539_008_177_792_7).abs() < 1e-12);
        assert!(matches!(
            esr_asymptote(&sc, SchemeSpec::new(Scheme::Ots, Knowledge::Bku)),
            Err(Error::UnsupportedClosedForm(_))
        ));
    }
}
