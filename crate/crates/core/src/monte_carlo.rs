//! Seeded simulation of the full system, used as the oracle for the closed forms.
//!
//! Batch `b` draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `b`, so
//! batches are independent and can run in any order. Tallies are merged in
//! batch-index order, which makes serial and parallel runs bit-identical.
//!
//! One trial samples every transmitter once and scores all six scheme and
//! knowledge combinations on that same draw. Ties in the selection go to the
//! lowest transmitter index.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use crate::channel::{Knowledge, Scenario, Scheme, SchemeSpec};
use crate::math;
use crate::{Error, Result};

pub const MIN_TRIALS: u64 = 10_000;
pub const DEFAULT_BATCH_SIZE: u64 = 65_536;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    pub batch_size: u64,
}

impl McConfig {
    pub fn new(trials: u64, seed: u64) -> Result<Self> {
        Self::with_batch_size(trials, seed, DEFAULT_BATCH_SIZE)
    }

    pub fn with_batch_size(trials: u64, seed: u64, batch_size: u64) -> Result<Self> {
        if trials < MIN_TRIALS {
            return Err(Error::McConfig(format!(
                "{trials} trials requested; at least {MIN_TRIALS} are required for a reported estimate"
            )));
        }
        if batch_size == 0 {
            return Err(Error::McConfig("batch size must be positive".into()));
        }
        Ok(Self {
            trials,
            seed,
            batch_size,
        })
    }

    pub fn batch_count(&self) -> u64 {
        self.trials.div_ceil(self.batch_size)
    }

    fn batch_len(&self, batch_index: u64) -> u64 {
        let start = batch_index * self.batch_size;
        self.batch_size.min(self.trials.saturating_sub(start))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Sop,
    Nzsr,
    Esr,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Sop, Metric::Nzsr, Metric::Esr];

    pub fn label(self) -> &'static str {
        match self {
            Metric::Sop => "sop",
            Metric::Nzsr => "nzsr",
            Metric::Esr => "esr",
        }
    }
}

impl core::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParameter {
                name: "metric",
                reason: format!("unknown metric `{s}` (expected sop, nzsr or esr)"),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
    pub metric: Metric,
}

impl McEstimate {
    /// `|value − mean|` in units of the standard error.
    pub fn z_score(&self, value: f64) -> f64 {
        let diff = math::abs(value - self.mean);
        if self.std_error > 0.0 {
            diff / self.std_error
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Outcome of one trial for one scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trial {
    pub secrecy_rate: f64,
    pub outage: bool,
}

/// Welford accumulator with Chan's pairwise merge.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct RunningStats {
    n: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(&mut self, other: &RunningStats) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        self.mean += delta * other.n as f64 / n as f64;
        self.m2 += other.m2 + delta * delta * (self.n as f64 * other.n as f64) / n as f64;
        self.n = n;
    }

    fn sample_variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SpecTally {
    pub outages: u64,
    pub positives: u64,
    rate: RunningStats,
}

/// Counts for all six specs over a set of trials.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Tally {
    pub trials: u64,
    /// Trials in which no backhaul link was active.
    pub empty_active_sets: u64,
    specs: [SpecTally; 6],
}

fn probability_estimate(count: u64, trials: u64, metric: Metric) -> McEstimate {
    let p = count as f64 / trials as f64;
    McEstimate {
        mean: p,
        std_error: math::sqrt(p * (1.0 - p) / trials as f64),
        trials,
        metric,
    }
}

impl Tally {
    pub fn merge(&mut self, other: &Tally) {
        self.trials += other.trials;
        self.empty_active_sets += other.empty_active_sets;
        for (mine, theirs) in self.specs.iter_mut().zip(&other.specs) {
            mine.outages += theirs.outages;
            mine.positives += theirs.positives;
            mine.rate.merge(&theirs.rate);
        }
    }

    pub fn spec(&self, spec: SchemeSpec) -> &SpecTally {
        &self.specs[spec.index()]
    }

    pub fn estimate(&self, spec: SchemeSpec, metric: Metric) -> McEstimate {
        let t = self.spec(spec);
        match metric {
            Metric::Sop => probability_estimate(t.outages, self.trials, metric),
            Metric::Nzsr => probability_estimate(t.positives, self.trials, metric),
            Metric::Esr => McEstimate {
                mean: t.rate.mean,
                std_error: math::sqrt(t.rate.sample_variance() / self.trials as f64),
                trials: self.trials,
                metric,
            },
        }
    }

    pub fn empty_active_fraction(&self) -> McEstimate {
        probability_estimate(self.empty_active_sets, self.trials, Metric::Sop)
    }
}

/// Per-transmitter state of one trial.
#[derive(Debug, Clone, Default)]
struct Draw {
    active: Vec<bool>,
    dest: Vec<f64>,
    eave: Vec<f64>,
}

struct Sampler {
    s: f64,
    rho: f64,
    dest: Exp<f64>,
    eaves: Vec<Exp<f64>>,
}

impl Sampler {
    fn new(scenario: &Scenario) -> Self {
        let exp = |rate: f64| Exp::new(rate).expect("scenario rates validated positive");
        Self {
            s: scenario.backhaul_reliability(),
            rho: scenario.rho(),
            dest: exp(scenario.dest_rate()),
            eaves: scenario.eave_rates().iter().map(|&r| exp(r)).collect(),
        }
    }

    fn fill<R: Rng + ?Sized>(&self, rng: &mut R, draw: &mut Draw) {
        for n in 0..draw.active.len() {
            draw.active[n] = rng.random::<f64>() < self.s;
            draw.dest[n] = self.dest.sample(rng);
            draw.eave[n] = self.eaves.iter().map(|e| e.sample(rng)).sum();
        }
    }

    fn score(&self, draw: &Draw, spec: SchemeSpec) -> Trial {
        let candidates = (0..draw.active.len()).filter(|&n| match spec.knowledge {
            Knowledge::Bku => true,
            Knowledge::Bka => draw.active[n],
        });
        let ratio = |n: usize| (1.0 + draw.dest[n]) / (1.0 + draw.eave[n]);
        // Strict comparisons keep the lowest index on ties.
        let selected = candidates.fold(None, |best: Option<usize>, n| match best {
            None => Some(n),
            Some(b) => {
                let better = match spec.scheme {
                    Scheme::MinEs => draw.eave[n] < draw.eave[b],
                    Scheme::Tts => draw.dest[n] > draw.dest[b],
                    Scheme::Ots => ratio(n) > ratio(b),
                };
                Some(if better { n } else { b })
            }
        });
        match selected {
            Some(n) if draw.active[n] => {
                let r = ratio(n);
                Trial {
                    secrecy_rate: math::log2(r).max(0.0),
                    outage: r <= self.rho,
                }
            }
            _ => Trial {
                secrecy_rate: 0.0,
                outage: true,
            },
        }
    }
}

/// One trial of `spec` drawn from `rng`.
pub fn draw_trial<R: Rng + ?Sized>(scenario: &Scenario, spec: SchemeSpec, rng: &mut R) -> Trial {
    let sampler = Sampler::new(scenario);
    let n = scenario.n_transmitters() as usize;
    let mut draw = Draw {
        active: vec![false; n],
        dest: vec![0.0; n],
        eave: vec![0.0; n],
    };
    sampler.fill(rng, &mut draw);
    sampler.score(&draw, spec)
}

/// RNG for batch `batch_index`.
pub fn batch_rng(seed: u64, batch_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch_index);
    rng
}

/// Simulates batch `batch_index` of `config`.
pub fn simulate_batch(scenario: &Scenario, config: &McConfig, batch_index: u64) -> Tally {
    let sampler = Sampler::new(scenario);
    let n = scenario.n_transmitters() as usize;
    let mut draw = Draw {
        active: vec![false; n],
        dest: vec![0.0; n],
        eave: vec![0.0; n],
    };
    let mut rng = batch_rng(config.seed, batch_index);
    let mut tally = Tally::default();
    for _ in 0..config.batch_len(batch_index) {
        sampler.fill(&mut rng, &mut draw);
        tally.trials += 1;
        if !draw.active.iter().any(|&a| a) {
            tally.empty_active_sets += 1;
        }
        for spec in SchemeSpec::ALL {
            let trial = sampler.score(&draw, spec);
            let t = &mut tally.specs[spec.index()];
            t.outages += trial.outage as u64;
            t.positives += (trial.secrecy_rate > 0.0) as u64;
            t.rate.push(trial.secrecy_rate);
        }
    }
    tally
}

/// Merges batch tallies in the order given, which must be batch-index order.
pub fn merge_ordered<I: IntoIterator<Item = Tally>>(tallies: I) -> Tally {
    tallies.into_iter().fold(Tally::default(), |mut acc, t| {
        acc.merge(&t);
        acc
    })
}

/// Runs all batches serially.
pub fn simulate(scenario: &Scenario, config: &McConfig) -> Tally {
    merge_ordered((0..config.batch_count()).map(|b| simulate_batch(scenario, config, b)))
}

pub fn estimate(scenario: &Scenario, spec: SchemeSpec, config: &McConfig, metric: Metric) -> McEstimate {
    simulate(scenario, config).estimate(spec, metric)
}
