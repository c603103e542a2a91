//! Link SNR distributions under Rayleigh fading with unreliable backhaul.
//!
//! Destination links are exponential with rate `λ_D`. The colluding
//! eavesdroppers combine by MRC, so each transmitter's eavesdropping SNR is a
//! hypoexponential sum of `K` exponentials with distinct rates `λ_E^(k)`.
//! A backhaul link that is down turns a transmitter's SNR into an atom at zero,
//! which is kept as an explicit weight rather than a narrow spike.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::combinatorics::{binomial_f64, enumerate_compositions, multinomial};
use crate::math::{self, KahanSum};
use crate::{Error, Result};

/// Minimum relative separation between eavesdropper rates.
pub const RATE_SEPARATION: f64 = 1e-6;

/// Largest `N` supported by the exact multinomial tables.
pub const MAX_TRANSMITTERS: u32 = crate::combinatorics::MULTINOMIAL_LIMIT;

/// `N` above which alternating-sign expansions are flagged as ill-conditioned.
pub const CONDITIONING_N: u32 = 15;
/// `K` above which alternating-sign expansions are flagged as ill-conditioned.
pub const CONDITIONING_K: usize = 6;

/// Rate parameter `λ = 1/SNR` of an exponential link with mean SNR given in dB.
pub fn rate_from_snr_db(snr_db: f64) -> f64 {
    math::pow(10.0, -snr_db / 10.0)
}

/// Mean SNR in dB of an exponential link with rate `λ`.
pub fn snr_db_from_rate(rate: f64) -> f64 {
    -10.0 * math::log10(rate)
}

/// Transmitter selection rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// Minimal (MRC-combined) eavesdropping SNR.
    MinEs,
    /// Traditional selection: maximal destination SNR.
    Tts,
    /// Optimal selection: maximal instantaneous secrecy rate.
    Ots,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::MinEs, Scheme::Tts, Scheme::Ots];

    pub fn label(self) -> &'static str {
        match self {
            Scheme::MinEs => "MIN-ES",
            Scheme::Tts => "TTS",
            Scheme::Ots => "OTS",
        }
    }
}

/// Whether the selector knows which backhaul links are up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Knowledge {
    /// Backhaul activity unknown: select among all transmitters.
    Bku,
    /// Backhaul activity known: select among active transmitters only.
    Bka,
}

impl Knowledge {
    pub const ALL: [Knowledge; 2] = [Knowledge::Bku, Knowledge::Bka];

    pub fn label(self) -> &'static str {
        match self {
            Knowledge::Bku => "BKU",
            Knowledge::Bka => "BKA",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SchemeSpec {
    pub scheme: Scheme,
    pub knowledge: Knowledge,
}

impl SchemeSpec {
    pub const fn new(scheme: Scheme, knowledge: Knowledge) -> Self {
        Self { scheme, knowledge }
    }

    /// The six scheme × knowledge combinations.
    pub const ALL: [SchemeSpec; 6] = [
        SchemeSpec::new(Scheme::MinEs, Knowledge::Bku),
        SchemeSpec::new(Scheme::MinEs, Knowledge::Bka),
        SchemeSpec::new(Scheme::Tts, Knowledge::Bku),
        SchemeSpec::new(Scheme::Tts, Knowledge::Bka),
        SchemeSpec::new(Scheme::Ots, Knowledge::Bku),
        SchemeSpec::new(Scheme::Ots, Knowledge::Bka),
    ];

    /// Position in [`SchemeSpec::ALL`].
    pub fn index(self) -> usize {
        let s = match self.scheme {
            Scheme::MinEs => 0,
            Scheme::Tts => 1,
            Scheme::Ots => 2,
        };
        let k = match self.knowledge {
            Knowledge::Bku => 0,
            Knowledge::Bka => 1,
        };
        2 * s + k
    }
}

impl fmt::Display for SchemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.scheme.label(), self.knowledge.label())
    }
}

impl FromStr for SchemeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase().replace('_', "-");
        SchemeSpec::ALL
            .into_iter()
            .find(|spec| format!("{spec}") == upper)
            .ok_or_else(|| Error::InvalidParameter {
                name: "scheme",
                reason: format!("unknown scheme `{s}` (expected e.g. MIN-ES-BKU, TTS-BKA, OTS-BKU)"),
            })
    }
}

fn check_rates(rates: &[f64], min_separation: f64) -> Result<()> {
    if rates.is_empty() {
        return Err(Error::InvalidParameter {
            name: "eave_rates",
            reason: "at least one eavesdropper is required".into(),
        });
    }
    for &r in rates {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "eave_rates",
                reason: format!("rate {r} is not a positive finite number"),
            });
        }
    }
    for i in 0..rates.len() {
        for j in i + 1..rates.len() {
            let (a, b) = (rates[i], rates[j]);
            let separation = math::abs(a - b) / a.max(b);
            if separation < min_separation || a == b {
                return Err(Error::RateSeparation {
                    i,
                    j,
                    first: a,
                    second: b,
                    separation,
                });
            }
        }
    }
    Ok(())
}

/// Multiplies rate `k` by `1 + 1e-9·k` so that duplicated rates become distinct.
///
/// The resulting scenario is badly conditioned; the closed forms divide by the
/// rate differences.
pub fn jitter_rates(rates: &[f64]) -> Vec<f64> {
    rates
        .iter()
        .enumerate()
        .map(|(k, &r)| r * (1.0 + 1e-9 * k as f64))
        .collect()
}

/// Full parameter set of one system configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    n_transmitters: u32,
    backhaul_reliability: f64,
    dest_rate: f64,
    eave_rates: Vec<f64>,
    threshold_rate: f64,
    relaxed_separation: bool,
}

impl Scenario {
    /// Validates `1 ≤ N ≤ 20`, `0 < s ≤ 1`, `λ_D > 0`, positive pairwise distinct
    /// eavesdropper rates and `R_th ≥ 0`.
    pub fn new(
        n_transmitters: u32,
        backhaul_reliability: f64,
        dest_rate: f64,
        eave_rates: Vec<f64>,
        threshold_rate: f64,
    ) -> Result<Self> {
        let scenario = Self {
            n_transmitters,
            backhaul_reliability,
            dest_rate,
            eave_rates,
            threshold_rate,
            relaxed_separation: false,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    /// Builds a scenario from mean SNRs in dB.
    pub fn from_db(
        n_transmitters: u32,
        backhaul_reliability: f64,
        dest_snr_db: f64,
        eave_snr_db: &[f64],
        threshold_rate: f64,
    ) -> Result<Self> {
        Self::new(
            n_transmitters,
            backhaul_reliability,
            rate_from_snr_db(dest_snr_db),
            eave_snr_db.iter().map(|&db| rate_from_snr_db(db)).collect(),
            threshold_rate,
        )
    }

    /// Like [`Scenario::new`] but perturbs the eavesdropper rates with
    /// [`jitter_rates`] and only requires them to be distinct afterwards.
    pub fn with_jittered_rates(
        n_transmitters: u32,
        backhaul_reliability: f64,
        dest_rate: f64,
        eave_rates: &[f64],
        threshold_rate: f64,
    ) -> Result<Self> {
        let scenario = Self {
            n_transmitters,
            backhaul_reliability,
            dest_rate,
            eave_rates: jitter_rates(eave_rates),
            threshold_rate,
            relaxed_separation: true,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    fn validate(&self) -> Result<()> {
        if self.n_transmitters == 0 || self.n_transmitters > MAX_TRANSMITTERS {
            return Err(Error::InvalidParameter {
                name: "n_transmitters",
                reason: format!("must be in 1..={MAX_TRANSMITTERS}, got {}", self.n_transmitters),
            });
        }
        let s = self.backhaul_reliability;
        if !(s > 0.0 && s <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "backhaul_reliability",
                reason: format!("must be in (0, 1], got {s}"),
            });
        }
        if !(self.dest_rate > 0.0 && self.dest_rate.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "dest_rate",
                reason: format!("must be positive and finite, got {}", self.dest_rate),
            });
        }
        if !(self.threshold_rate >= 0.0 && self.threshold_rate.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "threshold_rate",
                reason: format!("must be nonnegative and finite, got {}", self.threshold_rate),
            });
        }
        check_rates(&self.eave_rates, self.min_separation())
    }

    fn min_separation(&self) -> f64 {
        if self.relaxed_separation {
            0.0
        } else {
            RATE_SEPARATION
        }
    }

    pub fn n_transmitters(&self) -> u32 {
        self.n_transmitters
    }

    pub fn n_eavesdroppers(&self) -> usize {
        self.eave_rates.len()
    }

    /// Backhaul reliability factor `s`.
    pub fn backhaul_reliability(&self) -> f64 {
        self.backhaul_reliability
    }

    /// `λ_D`, the inverse mean destination SNR.
    pub fn dest_rate(&self) -> f64 {
        self.dest_rate
    }

    pub fn dest_snr_db(&self) -> f64 {
        snr_db_from_rate(self.dest_rate)
    }

    pub fn eave_rates(&self) -> &[f64] {
        &self.eave_rates
    }

    /// `R_th` in bits per channel use.
    pub fn threshold_rate(&self) -> f64 {
        self.threshold_rate
    }

    /// `ρ = 2^{R_th}`.
    pub fn rho(&self) -> f64 {
        math::pow(2.0, self.threshold_rate)
    }

    /// Whether the alternating-sign expansions are expected to lose many digits.
    pub fn is_ill_conditioned(&self) -> bool {
        self.n_transmitters > CONDITIONING_N || self.eave_rates.len() > CONDITIONING_K
    }

    pub(crate) fn warn_if_ill_conditioned(&self) {
        if self.is_ill_conditioned() {
            log::warn!(
                "N = {} and K = {}: alternating-sign expansions may lose precision",
                self.n_transmitters,
                self.eave_rates.len()
            );
        }
    }

    pub(crate) fn hypoexp(&self) -> HypoexpDist {
        HypoexpDist::with_separation(self.eave_rates.clone(), self.min_separation())
            .expect("scenario rates validated at construction")
    }

    pub fn with_dest_rate(&self, dest_rate: f64) -> Result<Self> {
        let mut next = self.clone();
        next.dest_rate = dest_rate;
        next.validate()?;
        Ok(next)
    }

    pub fn with_dest_snr_db(&self, dest_snr_db: f64) -> Result<Self> {
        self.with_dest_rate(rate_from_snr_db(dest_snr_db))
    }

    pub fn with_backhaul_reliability(&self, s: f64) -> Result<Self> {
        let mut next = self.clone();
        next.backhaul_reliability = s;
        next.validate()?;
        Ok(next)
    }

    pub fn with_n_transmitters(&self, n: u32) -> Result<Self> {
        let mut next = self.clone();
        next.n_transmitters = n;
        next.validate()?;
        Ok(next)
    }

    pub fn with_threshold_rate(&self, threshold_rate: f64) -> Result<Self> {
        let mut next = self.clone();
        next.threshold_rate = threshold_rate;
        next.validate()?;
        Ok(next)
    }

    pub fn with_eave_rates(&self, eave_rates: Vec<f64>) -> Result<Self> {
        let mut next = self.clone();
        next.eave_rates = eave_rates;
        next.relaxed_separation = false;
        next.validate()?;
        Ok(next)
    }
}

/// CDF `1 − e^{−rate·x}` of an exponential SNR.
pub fn exp_cdf(x: f64, rate: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain {
            what: "SNR (must be nonnegative)",
            value: x,
        });
    }
    if !(rate > 0.0) {
        return Err(Error::Domain {
            what: "exponential rate",
            value: rate,
        });
    }
    Ok(-math::expm1(-rate * x))
}

/// Sum of independent exponentials with pairwise distinct rates (MRC of
/// colluding eavesdroppers under i.n.i.d. Rayleigh fading).
#[derive(Debug, Clone, PartialEq)]
pub struct HypoexpDist {
    rates: Vec<f64>,
    /// `c_k = Π_{j≠k} λ_j / (λ_j − λ_k)`; the survival function is `Σ c_k e^{−λ_k x}`.
    weights: Vec<f64>,
}

impl HypoexpDist {
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        Self::with_separation(rates, RATE_SEPARATION)
    }

    fn with_separation(rates: Vec<f64>, min_separation: f64) -> Result<Self> {
        check_rates(&rates, min_separation)?;
        let weights = rates
            .iter()
            .enumerate()
            .map(|(k, &lk)| {
                rates
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != k)
                    .map(|(_, &lj)| lj / (lj - lk))
                    .product()
            })
            .collect();
        Ok(Self { rates, weights })
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    /// Coefficients `c_k` of the survival function `Σ_k c_k e^{−λ_k x}`.
    pub fn survival_weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let v = kahan_terms(&self.rates, &self.weights, |l, c| c * l * math::exp(-l * x));
        v.max(0.0)
    }

    pub fn survival(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        kahan_terms(&self.rates, &self.weights, |l, c| c * math::exp(-l * x)).clamp(0.0, 1.0)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        // Σ c_k = 1, so 1 − Σ c_k e^{−λ_k x} = Σ c_k (1 − e^{−λ_k x}).
        kahan_terms(&self.rates, &self.weights, |l, c| -c * math::expm1(-l * x)).clamp(0.0, 1.0)
    }

    pub fn mean(&self) -> f64 {
        self.rates.iter().map(|l| 1.0 / l).sum()
    }
}

fn kahan_terms(rates: &[f64], weights: &[f64], term: impl Fn(f64, f64) -> f64) -> f64 {
    rates
        .iter()
        .zip(weights)
        .map(|(&l, &c)| term(l, c))
        .collect::<KahanSum>()
        .value()
}

/// Hypoexponential pdf for pairwise distinct `rates`.
pub fn hypoexp_pdf(x: f64, rates: &[f64]) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain {
            what: "SNR (must be nonnegative)",
            value: x,
        });
    }
    Ok(HypoexpDist::new(rates.to_vec())?.pdf(x))
}

/// Hypoexponential CDF for pairwise distinct `rates`.
pub fn hypoexp_cdf(x: f64, rates: &[f64]) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain {
            what: "SNR (must be nonnegative)",
            value: x,
        });
    }
    Ok(HypoexpDist::new(rates.to_vec())?.cdf(x))
}

/// A continuous SNR law usable as the non-atomic part of a [`MixtureDist`].
pub trait ContinuousPart {
    fn pdf(&self, x: f64) -> f64;
    fn cdf(&self, x: f64) -> f64;
}

impl ContinuousPart for HypoexpDist {
    fn pdf(&self, x: f64) -> f64 {
        HypoexpDist::pdf(self, x)
    }

    fn cdf(&self, x: f64) -> f64 {
        HypoexpDist::cdf(self, x)
    }
}

/// Exponential destination SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponential {
    pub rate: f64,
}

impl ContinuousPart for Exponential {
    fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            self.rate * math::exp(-self.rate * x)
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            -math::expm1(-self.rate * x)
        }
    }
}

/// Minimum of `n` i.i.d. hypoexponential eavesdropping SNRs.
///
/// The density is the multinomial expansion of `n f(x) S(x)^{n−1}`: one
/// exponential per composition `i` of `n` into `K` parts, with weight
/// `multinomial(n, i) Π_k c_k^{i_k}` and rate `λ̃ = Σ_k i_k λ_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct MinEavesdropping {
    hypo: HypoexpDist,
    n: u32,
}

impl MinEavesdropping {
    pub fn new(hypo: HypoexpDist, n: u32) -> Result<Self> {
        if n == 0 || n > MAX_TRANSMITTERS {
            return Err(Error::InvalidParameter {
                name: "n_transmitters",
                reason: format!("must be in 1..={MAX_TRANSMITTERS}, got {n}"),
            });
        }
        Ok(Self { hypo, n })
    }

    /// Streams `(weight, λ̃)` pairs of the multinomial expansion.
    pub fn terms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.n;
        enumerate_compositions(n, self.hypo.rates.len()).map(move |c| {
            let coeff = multinomial(n, &c).expect("n within multinomial limit") as f64;
            (
                coeff * c.power_product(&self.hypo.weights),
                c.dot(&self.hypo.rates),
            )
        })
    }
}

impl ContinuousPart for MinEavesdropping {
    fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        self.terms()
            .map(|(w, rate)| w * rate * math::exp(-rate * x))
            .collect::<KahanSum>()
            .value()
            .max(0.0)
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        self.terms()
            .map(|(w, rate)| -w * math::expm1(-rate * x))
            .collect::<KahanSum>()
            .value()
            .clamp(0.0, 1.0)
    }
}

/// Minimum eavesdropping SNR over the random set of active transmitters,
/// conditioned on that set being non-empty.
#[derive(Debug, Clone, PartialEq)]
pub struct ActiveMinEavesdropping {
    parts: Vec<(f64, MinEavesdropping)>,
}

impl ActiveMinEavesdropping {
    pub fn new(hypo: &HypoexpDist, n: u32, s: f64) -> Result<Self> {
        let active_mass = 1.0 - math::powi(1.0 - s, n as i32);
        let parts = (1..=n)
            .map(|m| {
                let w = binomial_f64(n, m) * math::powi(1.0 - s, (n - m) as i32) * math::powi(s, m as i32);
                Ok((w / active_mass, MinEavesdropping::new(hypo.clone(), m)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { parts })
    }
}

impl ContinuousPart for ActiveMinEavesdropping {
    fn pdf(&self, x: f64) -> f64 {
        self.parts.iter().map(|(w, d)| w * d.pdf(x)).sum()
    }

    fn cdf(&self, x: f64) -> f64 {
        self.parts.iter().map(|(w, d)| w * d.cdf(x)).sum::<f64>().clamp(0.0, 1.0)
    }
}

/// Point mass at zero plus a continuous SNR law carrying the remaining mass.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureDist<C> {
    point_mass_at_zero: f64,
    continuous: C,
}

impl<C: ContinuousPart> MixtureDist<C> {
    pub fn new(point_mass_at_zero: f64, continuous: C) -> Result<Self> {
        if !(0.0..1.0).contains(&point_mass_at_zero) {
            return Err(Error::InvalidParameter {
                name: "point_mass_at_zero",
                reason: format!("must be in [0, 1), got {point_mass_at_zero}"),
            });
        }
        Ok(Self {
            point_mass_at_zero,
            continuous,
        })
    }

    pub fn point_mass_at_zero(&self) -> f64 {
        self.point_mass_at_zero
    }

    pub fn continuous(&self) -> &C {
        &self.continuous
    }

    /// Density of the continuous part, scaled by its mass `1 − atom`.
    pub fn continuous_pdf(&self, x: f64) -> f64 {
        (1.0 - self.point_mass_at_zero) * self.continuous.pdf(x)
    }

    /// CDF including the jump at zero.
    pub fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        self.point_mass_at_zero + (1.0 - self.point_mass_at_zero) * self.continuous.cdf(x)
    }
}

/// Mixture evaluation: weight of the zero atom and continuous density at `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureDensity {
    pub atom: f64,
    pub density: f64,
}

/// End-to-end SNR of one transmitter behind an unreliable backhaul link.
pub fn backhaul_mixture<C: ContinuousPart>(s: f64, link: C) -> Result<MixtureDist<C>> {
    MixtureDist::new(1.0 - s, link)
}

/// Pdf of `min_n Γ_SE^(n)` over all `N` transmitters.
pub fn min_eave_sel_pdf(x: f64, scenario: &Scenario) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain {
            what: "SNR (must be nonnegative)",
            value: x,
        });
    }
    Ok(MinEavesdropping::new(scenario.hypoexp(), scenario.n_transmitters)?.pdf(x))
}

/// Distribution of the minimum eavesdropping SNR over active transmitters:
/// an atom `(1−s)^N` (no transmitter active) plus the binomial mixture over
/// active-set sizes.
pub fn min_eave_sel_bka(scenario: &Scenario) -> Result<MixtureDist<ActiveMinEavesdropping>> {
    let n = scenario.n_transmitters;
    let s = scenario.backhaul_reliability;
    MixtureDist::new(
        math::powi(1.0 - s, n as i32),
        ActiveMinEavesdropping::new(&scenario.hypoexp(), n, s)?,
    )
}

/// Mixture evaluation of [`min_eave_sel_bka`] at `x`.
pub fn min_eave_sel_bka_pdf(x: f64, scenario: &Scenario) -> Result<MixtureDensity> {
    if !(x >= 0.0) {
        return Err(Error::Domain {
            what: "SNR (must be nonnegative)",
            value: x,
        });
    }
    let dist = min_eave_sel_bka(scenario)?;
    Ok(MixtureDensity {
        atom: dist.point_mass_at_zero(),
        density: dist.continuous_pdf(x),
    })
}

/// CDF of `max_n Γ_SD^(n)` as the binomial expansion `1 − Σ_n C(N,n)(−1)^{n+1} e^{−nλ_D x}`.
pub fn max_dest_sel_cdf(x: f64, scenario: &Scenario) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain {
            what: "SNR (must be nonnegative)",
            value: x,
        });
    }
    let n = scenario.n_transmitters;
    let l = scenario.dest_rate;
    let mut acc = KahanSum::new();
    acc.add(1.0);
    for m in 1..=n {
        let sign = if m % 2 == 1 { -1.0 } else { 1.0 };
        acc.add(sign * binomial_f64(n, m) * math::exp(-(m as f64) * l * x));
    }
    Ok(acc.value())
}

/// CDF of the maximum destination SNR over backhaul mixtures, as the
/// double binomial expansion of `((1−s)u(x) + s(1 − e^{−λ_D x}))^N`.
pub fn max_dest_sel_bka_cdf(x: f64, scenario: &Scenario) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain {
            what: "SNR (must be nonnegative)",
            value: x,
        });
    }
    let n = scenario.n_transmitters;
    let s = scenario.backhaul_reliability;
    let l = scenario.dest_rate;
    let mut acc = KahanSum::new();
    acc.add(1.0);
    for m in 1..=n {
        let outer = binomial_f64(n, m) * math::powi(1.0 - s, (n - m) as i32) * math::powi(s, m as i32);
        for q in 1..=m {
            let sign = if q % 2 == 1 { 1.0 } else { -1.0 };
            acc.add(-outer * binomial_f64(m, q) * sign * math::exp(-(q as f64) * l * x));
        }
    }
    Ok(acc.value())
}
