use proptest::prelude::*;

use secsel_core::combinatorics::{binomial, enumerate_compositions, multinomial, partial_fractions};
use secsel_core::exact::{esr, nzsr, sop};
use secsel_core::special::{expint_ei, upper_incomplete_gamma_int};
use secsel_core::{HypoexpDist, Knowledge, RatioCdfEvaluator, Scenario, Scheme, SchemeSpec};

const SLACK: f64 = 1e-10;

/// Rates `base·3^k`: well separated so the alternating weights stay tame.
fn rates_strategy() -> impl Strategy<Value = Vec<f64>> {
    (1usize..=4, -2.0f64..0.5).prop_map(|(k, log_base)| {
        let base = 10f64.powf(log_base);
        (0..k).map(|i| base * 3f64.powi(i as i32)).collect()
    })
}

fn scenario_strategy() -> impl Strategy<Value = Scenario> {
    (1u32..=8, 0.05f64..=1.0, -10.0f64..50.0, rates_strategy(), 0.0f64..3.0).prop_map(
        |(n, s, db, rates, rth)| {
            Scenario::new(n, s, 10f64.powf(-db / 10.0), rates, rth).unwrap()
        },
    )
}

fn spec(scheme: Scheme, knowledge: Knowledge) -> SchemeSpec {
    SchemeSpec::new(scheme, knowledge)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multinomials_sum_to_power(n in 0u32..=12, k in 1usize..=5) {
        let comps: Vec<_> = enumerate_compositions(n, k).collect();
        let count = binomial(n + k as u32 - 1, k as u32 - 1).unwrap() as usize;
        prop_assert_eq!(comps.len(), count);
        let total: u64 = comps.iter().map(|c| multinomial(n, c).unwrap()).sum();
        prop_assert_eq!(total, (k as u64).pow(n));
        for c in &comps {
            prop_assert_eq!(c.total(), n);
        }
    }

    #[test]
    fn partial_fractions_reconstruct(
        m0 in 1u32..=4,
        m1 in 1u32..=4,
        p1 in 1.5f64..6.0,
        x in 0.1f64..10.0,
    ) {
        let poles = [(0.0, 1), (-1.0, m0), (-p1, m1)];
        let pf = partial_fractions(2.5, &poles).unwrap();
        let direct = 2.5 / (x * (x + 1.0).powi(m0 as i32) * (x + p1).powi(m1 as i32));
        // Far from the poles the terms cancel, so the error is bounded by their magnitude.
        let magnitude: f64 = pf
            .poles()
            .iter()
            .enumerate()
            .flat_map(|(k, pole)| {
                pf.coefficients(k)
                    .iter()
                    .enumerate()
                    .map(move |(l, a)| (a / (x - pole.location).powi(l as i32 + 1)).abs())
            })
            .sum();
        prop_assert!((pf.evaluate(x) - direct).abs() <= 1e-13 * magnitude);
    }

    #[test]
    fn ei_negative_axis_increasing(x in 1e-6f64..50.0, dx in 1e-3f64..5.0) {
        let a = expint_ei(-x).unwrap();
        let b = expint_ei(-(x + dx)).unwrap();
        prop_assert!(a < 0.0 && a < b);
    }

    #[test]
    fn incomplete_gamma_recurrence(m in -6i32..8, x in 0.05f64..30.0) {
        let lhs = upper_incomplete_gamma_int(m + 1, x).unwrap();
        let rhs = m as f64 * upper_incomplete_gamma_int(m, x).unwrap() + x.powi(m) * (-x).exp();
        prop_assert!(((lhs - rhs) / lhs).abs() < 1e-9, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn hypoexp_is_a_distribution(rates in rates_strategy(), xs in prop::collection::vec(0.0f64..200.0, 20)) {
        let h = HypoexpDist::new(rates).unwrap();
        prop_assert!((h.survival_weights().iter().sum::<f64>() - 1.0).abs() < SLACK);
        let mut xs = xs;
        xs.sort_by(f64::total_cmp);
        let mut prev = 0.0;
        for x in xs {
            let f = h.cdf(x);
            prop_assert!((0.0..=1.0).contains(&f));
            prop_assert!(f >= prev - SLACK);
            prop_assert!(h.pdf(x) >= 0.0);
            prop_assert!((h.cdf(x) + h.survival(x) - 1.0).abs() < SLACK);
            prev = f;
        }
    }

    #[test]
    fn ratio_cdf_monotone_on_fine_grid(sc in scenario_strategy()) {
        for sp in SchemeSpec::ALL {
            let e = RatioCdfEvaluator::new(&sc, sp).unwrap();
            let mut prev = 0.0;
            for i in 0..1000 {
                let y = 0.01 * i as f64 + 0.001 * (i * i) as f64;
                let f = e.cdf(y);
                prop_assert!((0.0..=1.0).contains(&f));
                prop_assert!(f >= prev - SLACK, "{} y={}: {} < {}", sp, y, f, prev);
                prev = f;
            }
            prop_assert!(e.cdf(0.0) >= e.outage_atom() - SLACK);
        }
    }

    #[test]
    fn sop_orderings(sc in scenario_strategy()) {
        for k in Knowledge::ALL {
            let ots = sop(&sc, spec(Scheme::Ots, k)).unwrap();
            let tts = sop(&sc, spec(Scheme::Tts, k)).unwrap();
            let min = sop(&sc, spec(Scheme::MinEs, k)).unwrap();
            prop_assert!(ots <= tts + SLACK && ots <= min + SLACK, "{} {} {}", ots, tts, min);
        }
        for scheme in Scheme::ALL {
            let bka = sop(&sc, spec(scheme, Knowledge::Bka)).unwrap();
            let bku = sop(&sc, spec(scheme, Knowledge::Bku)).unwrap();
            prop_assert!(bka <= bku + SLACK);
        }
    }

    #[test]
    fn sop_monotone_in_snr_and_reliability(sc in scenario_strategy(), ddb in 0.5f64..10.0, ds in 0.0f64..0.5) {
        let stronger = sc.with_dest_snr_db(sc.dest_snr_db() + ddb).unwrap();
        let reliable = sc.with_backhaul_reliability((sc.backhaul_reliability() + ds).min(1.0)).unwrap();
        for sp in SchemeSpec::ALL {
            let base = sop(&sc, sp).unwrap();
            prop_assert!(sop(&stronger, sp).unwrap() <= base + SLACK);
            prop_assert!(sop(&reliable, sp).unwrap() <= base + SLACK);
        }
    }

    #[test]
    fn nzsr_is_complement_of_zero_threshold_sop(sc in scenario_strategy()) {
        let zero = sc.with_threshold_rate(0.0).unwrap();
        for sp in SchemeSpec::ALL {
            prop_assert!((nzsr(&sc, sp).unwrap() - (1.0 - sop(&zero, sp).unwrap())).abs() < 1e-12);
        }
    }

    #[test]
    fn knowledge_irrelevant_at_full_reliability(sc in scenario_strategy()) {
        let sc = sc.with_backhaul_reliability(1.0).unwrap();
        for scheme in Scheme::ALL {
            let a = sop(&sc, spec(scheme, Knowledge::Bku)).unwrap();
            let b = sop(&sc, spec(scheme, Knowledge::Bka)).unwrap();
            prop_assert!((a - b).abs() <= 1e-9 * a.max(1e-300) + 1e-15);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn esr_orderings(sc in scenario_strategy()) {
        let mut values = [0.0; 6];
        for sp in SchemeSpec::ALL {
            values[sp.index()] = esr(&sc, sp).unwrap();
            prop_assert!(values[sp.index()] >= 0.0);
        }
        let get = |s, k| values[spec(s, k).index()];
        for k in Knowledge::ALL {
            prop_assert!(get(Scheme::Ots, k) + 1e-8 >= get(Scheme::Tts, k));
            prop_assert!(get(Scheme::Ots, k) + 1e-8 >= get(Scheme::MinEs, k));
        }
        for scheme in Scheme::ALL {
            prop_assert!(get(scheme, Knowledge::Bka) + 1e-8 >= get(scheme, Knowledge::Bku));
        }
    }
}
