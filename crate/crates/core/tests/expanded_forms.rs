//! The ratio CDFs against independent evaluation paths: the alternating-sign
//! binomial and multinomial expansions, and direct integration of the
//! selection-SNR laws.

use secsel_core::channel::{
    exp_cdf, max_dest_sel_bka_cdf, max_dest_sel_cdf, min_eave_sel_bka_pdf, min_eave_sel_pdf,
};
use secsel_core::combinatorics::{binomial, enumerate_compositions, multinomial};
use secsel_core::quadrature::integrate_to_infinity;
use secsel_core::{HypoexpDist, Knowledge, RatioCdfEvaluator, Scenario, Scheme, SchemeSpec};

fn sign(n: u32) -> f64 {
    if n % 2 == 1 {
        1.0
    } else {
        -1.0
    }
}

fn c(n: u32, k: u32) -> f64 {
    binomial(n, k).unwrap() as f64
}

fn scenarios() -> Vec<Scenario> {
    let mut out = Vec::new();
    for (n, eave) in [(1, vec![3.0]), (3, vec![5.0, 11.0]), (4, vec![6.0, 9.0, 13.0])] {
        for s in [0.35, 0.8, 1.0] {
            for db in [0.0, 12.0, 25.0] {
                out.push(Scenario::from_db(n, s, db, &eave, 1.0).unwrap());
            }
        }
    }
    out
}

fn grid() -> Vec<f64> {
    let mut ys = vec![0.0, 0.2, 0.6, 0.95];
    ys.extend((0..40).map(|i| 1.0 + 0.25 * i as f64));
    ys
}

/// 1 − s Σ_k c_k Σ_n C(N,n)(−1)^{n+1} e^{−nλ_D(y−1)} λ_k/(λ_k + nλ_D y), y ≥ 1.
fn tts_alternating(sc: &Scenario, knowledge: Knowledge, y: f64) -> f64 {
    let h = HypoexpDist::new(sc.eave_rates().to_vec()).unwrap();
    let (a, s, n) = (sc.dest_rate(), sc.backhaul_reliability(), sc.n_transmitters());
    let mut sum = 0.0;
    for q in 1..=n {
        let w = match knowledge {
            Knowledge::Bku => s,
            Knowledge::Bka => s.powi(q as i32),
        };
        for (&l, &ck) in h.rates().iter().zip(h.survival_weights()) {
            let qa = q as f64 * a;
            sum += w * c(n, q) * sign(q) * ck * (-qa * (y - 1.0)).exp() * l / (l + qa * y);
        }
    }
    1.0 - sum
}

/// Single-link CDF expanded over the hypoexponential weights, then the binomial
/// expansion of the power.
fn ots_expanded(sc: &Scenario, knowledge: Knowledge, y: f64) -> f64 {
    let h = HypoexpDist::new(sc.eave_rates().to_vec()).unwrap();
    let (a, s, n) = (sc.dest_rate(), sc.backhaul_reliability(), sc.n_transmitters());
    let survival: f64 = h
        .rates()
        .iter()
        .zip(h.survival_weights())
        .map(|(&l, &ck)| ck * (-a * (y - 1.0)).exp() * l / (l + a * y))
        .sum();
    let mut tail = 0.0;
    for q in 1..=n {
        let w = match knowledge {
            Knowledge::Bku => s,
            Knowledge::Bka => s.powi(q as i32),
        };
        tail += w * c(n, q) * sign(q) * survival.powi(q as i32);
    }
    1.0 - tail
}

/// (1 − s) + Σ_i s·multinomial·Π c^i·[1 − e^{−λ_D(y−1)} λ̃/(λ̃ + λ_D y)], y ≥ 1.
fn min_es_bku_expanded(sc: &Scenario, y: f64) -> f64 {
    let h = HypoexpDist::new(sc.eave_rates().to_vec()).unwrap();
    let (a, s, n) = (sc.dest_rate(), sc.backhaul_reliability(), sc.n_transmitters());
    let mut f = 1.0 - s;
    for comp in enumerate_compositions(n, h.rates().len()) {
        let w = s * multinomial(n, &comp).unwrap() as f64 * comp.power_product(h.survival_weights());
        let rate = comp.dot(h.rates());
        f += w * (1.0 - (-a * (y - 1.0)).exp() * rate / (rate + a * y));
    }
    f
}

#[test]
fn tts_positive_form_matches_alternating() {
    for sc in scenarios() {
        for k in Knowledge::ALL {
            let e = RatioCdfEvaluator::new(&sc, SchemeSpec::new(Scheme::Tts, k)).unwrap();
            for y in grid().into_iter().filter(|&y| y >= 1.0) {
                let want = tts_alternating(&sc, k, y);
                assert!((e.cdf(y) - want).abs() < 1e-10, "{k:?} y={y}: {} vs {want}", e.cdf(y));
            }
        }
    }
}

#[test]
fn ots_log_form_matches_expansion() {
    for sc in scenarios() {
        for k in Knowledge::ALL {
            let e = RatioCdfEvaluator::new(&sc, SchemeSpec::new(Scheme::Ots, k)).unwrap();
            for y in grid().into_iter().filter(|&y| y >= 1.0) {
                let want = ots_expanded(&sc, k, y);
                assert!((e.cdf(y) - want).abs() < 1e-10, "{k:?} y={y}");
            }
        }
    }
}

#[test]
fn min_es_stable_kernel_matches_expansion() {
    for sc in scenarios() {
        let e = RatioCdfEvaluator::new(&sc, SchemeSpec::new(Scheme::MinEs, Knowledge::Bku)).unwrap();
        for y in grid().into_iter().filter(|&y| y >= 1.0) {
            assert!((e.cdf(y) - min_es_bku_expanded(&sc, y)).abs() < 1e-10);
        }
    }
}

/// ∫ F_D(y(1 + x) − 1) dG(x) with the eavesdropping law given as a density.
fn conditional_integral(y: f64, dest: impl Fn(f64) -> f64, density: impl Fn(f64) -> f64) -> f64 {
    let lower = (1.0 / y - 1.0).max(0.0);
    integrate_to_infinity(
        |x| dest((y * (1.0 + x) - 1.0).max(0.0)) * density(x),
        lower,
        1e-13,
        1e-12,
        2000,
    )
    .unwrap()
    .value
}

#[test]
fn ratio_cdfs_match_direct_integration() {
    for sc in scenarios() {
        let (a, s) = (sc.dest_rate(), sc.backhaul_reliability());
        let n = sc.n_transmitters();
        let hypo = HypoexpDist::new(sc.eave_rates().to_vec()).unwrap();
        let evals: Vec<RatioCdfEvaluator> = SchemeSpec::ALL
            .into_iter()
            .map(|sp| RatioCdfEvaluator::new(&sc, sp).unwrap())
            .collect();
        for y in [0.3, 0.9, 1.0, 2.0, 4.5] {
            let dest = |x: f64| exp_cdf(x, a).unwrap();
            let min_bku = (1.0 - s)
                + s * conditional_integral(y, dest, |x| min_eave_sel_pdf(x, &sc).unwrap());
            let bka_atom = min_eave_sel_bka_pdf(0.0, &sc).unwrap().atom;
            let min_bka =
                bka_atom + conditional_integral(y, dest, |x| min_eave_sel_bka_pdf(x, &sc).unwrap().density);
            let tts_bku = (1.0 - s)
                + s * conditional_integral(y, |x| max_dest_sel_cdf(x, &sc).unwrap(), |x| hypo.pdf(x));
            let single = conditional_integral(y, dest, |x| hypo.pdf(x));
            let ots_bku = (1.0 - s) + s * single.powi(n as i32);
            let ots_bka = (1.0 - s + s * single).powi(n as i32);
            let direct = [min_bku, min_bka, tts_bku, ots_bku, ots_bka];
            let specs = [0usize, 1, 2, 4, 5];
            for (&want, &i) in direct.iter().zip(&specs) {
                let got = evals[i].cdf(y);
                assert!((got - want).abs() < 1e-9, "{} y={y}: {got} vs {want}", SchemeSpec::ALL[i]);
            }
            if y >= 1.0 {
                // Under BKA with y ≥ 1 the inactive transmitters fall in the
                // outage event automatically, so the mixture max law applies directly.
                let tts_bka =
                    conditional_integral(y, |x| max_dest_sel_bka_cdf(x, &sc).unwrap(), |x| hypo.pdf(x));
                assert!((evals[3].cdf(y) - tts_bka).abs() < 1e-9, "TTS-BKA y={y}");
            }
        }
    }
}

#[test]
fn bka_min_density_integrates_to_active_mass() {
    let sc = Scenario::from_db(4, 0.45, 10.0, &[6.0, 9.0, 13.0], 1.0).unwrap();
    let atom = min_eave_sel_bka_pdf(0.0, &sc).unwrap().atom;
    let mass = integrate_to_infinity(|x| min_eave_sel_bka_pdf(x, &sc).unwrap().density, 0.0, 1e-13, 1e-12, 2000)
        .unwrap()
        .value;
    assert!((atom + mass - 1.0).abs() < 1e-10);
    assert!((atom - 0.55f64.powi(4)).abs() < 1e-15);
}
