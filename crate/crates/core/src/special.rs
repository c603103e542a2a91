//! Exponential integrals and the upper incomplete gamma function with integer order.

use crate::math::{self, KahanSum};
use crate::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 500;
const FPMIN: f64 = 1e-300;

/// `e^x E_n(x)` for `x > 1` by the modified Lentz continued fraction.
fn scaled_en_continued_fraction(n: u32, x: f64) -> f64 {
    let nm1 = n as f64 - 1.0;
    let mut b = x + n as f64;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=MAX_ITER {
        let an = -(i as f64) * (nm1 + i as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if math::abs(del - 1.0) < EPS {
            break;
        }
    }
    h
}

/// Power series of `E_n(x)` for `0 < x ≤ 1`.
fn en_series(n: u32, x: f64) -> f64 {
    let nm1 = n as i64 - 1;
    let mut ans = KahanSum::new();
    ans.add(if nm1 != 0 {
        1.0 / nm1 as f64
    } else {
        -math::ln(x) - EULER_GAMMA
    });
    let mut fact = 1.0;
    for i in 1..=MAX_ITER as i64 {
        fact *= -x / i as f64;
        let del = if i != nm1 {
            -fact / (i - nm1) as f64
        } else {
            let psi = -EULER_GAMMA + (1..=nm1).map(|j| 1.0 / j as f64).sum::<f64>();
            fact * (-math::ln(x) + psi)
        };
        ans.add(del);
        if math::abs(del) < math::abs(ans.value()) * EPS {
            break;
        }
    }
    ans.value()
}

/// Generalized exponential integral `E_n(x) = ∫_1^∞ e^{−xt} t^{−n} dt` for `x ≥ 0`.
pub fn expint_en(n: u32, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain {
            what: "E_n argument",
            value: x,
        });
    }
    if n == 0 {
        if x == 0.0 {
            return Err(Error::Pole);
        }
        return Ok(math::exp(-x) / x);
    }
    if x == 0.0 {
        return if n > 1 {
            Ok(1.0 / (n as f64 - 1.0))
        } else {
            Err(Error::Pole)
        };
    }
    if x > 1.0 {
        Ok(scaled_en_continued_fraction(n, x) * math::exp(-x))
    } else {
        Ok(en_series(n, x))
    }
}

/// `E_1(x)` for `x > 0`.
pub fn expint_e1(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::Pole);
    }
    expint_en(1, x)
}

/// Exponential integral `Ei(x) = ∫_{−∞}^{x} e^t / t dt` (principal value for `x > 0`).
pub fn expint_ei(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::Pole);
    }
    if x.is_nan() {
        return Err(Error::Domain {
            what: "Ei argument",
            value: x,
        });
    }
    if x < 0.0 {
        return Ok(-expint_en(1, -x)?);
    }
    if x <= 40.0 {
        let mut sum = KahanSum::new();
        let mut term = 1.0;
        for k in 1..=MAX_ITER {
            term *= x / k as f64;
            let contrib = term / k as f64;
            sum.add(contrib);
            if contrib < EPS * sum.value() {
                break;
            }
        }
        Ok(EULER_GAMMA + math::ln(x) + sum.value())
    } else {
        // Asymptotic series e^x/x Σ k!/x^k, truncated at its smallest term.
        let mut sum = 1.0;
        let mut term = 1.0;
        for k in 1..=MAX_ITER {
            let prev = term;
            term *= k as f64 / x;
            if term < EPS * sum || term > prev {
                break;
            }
            sum += term;
        }
        Ok(math::exp(x) / x * sum)
    }
}

/// `e^a · Ei(−a)` for `a > 0`, fused so it neither overflows nor underflows.
///
/// For `a → ∞` the value behaves like `−1/a · (1 − 1/a + 2/a² − …)`.
pub fn exp_scaled_ei(a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::Domain {
            what: "scaled Ei argument",
            value: a,
        });
    }
    if a > 1.0 {
        Ok(-scaled_en_continued_fraction(1, a))
    } else {
        Ok(-math::exp(a) * en_series(1, a))
    }
}

/// Upper incomplete gamma `Γ[m, x] = ∫_x^∞ t^{m−1} e^{−t} dt` for integer `m`.
///
/// Positive orders use the finite sum `(m−1)! e^{−x} Σ_{j<m} x^j/j!` (any real `x`).
/// Nonpositive orders need `x > 0` and use `Γ[m, x] = x^m E_{1−m}(x)`.
pub fn upper_incomplete_gamma_int(m: i32, x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain {
            what: "incomplete gamma argument",
            value: x,
        });
    }
    if m >= 1 {
        let mut term = 1.0;
        let mut sum = KahanSum::new();
        sum.add(1.0);
        for j in 1..m {
            term *= x / j as f64;
            sum.add(term);
        }
        let factorial: f64 = (1..m).map(|j| j as f64).product();
        return Ok(factorial * math::exp(-x) * sum.value());
    }
    if x <= 0.0 {
        return Err(Error::DivergentGamma { order: m, x });
    }
    let n = (1 - m) as u32;
    if x > 1.0 {
        // Keep the exponential outside the power to avoid spurious underflow.
        Ok(math::exp(m as f64 * math::ln(x) - x) * scaled_en_continued_fraction(n, x))
    } else {
        Ok(math::powi(x, m) * en_series(n, x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn ei_reference_values() {
        // Frozen from a 30-digit evaluation.
        let cases = [
            (-1.0, -0.219_383_934_395_520_27),
            (1e-8, -17.843_465_069_050_832),
            (-1e-8, -17.843_465_089_050_832),
            (1e-3, -6.329_539_364_025_038),
            (-1e-3, -6.331_539_364_136_149),
            (0.5, 0.454_219_904_863_173_6),
            (-0.5, -0.559_773_594_776_160_8),
            (2.0, 4.954_234_356_001_890),
            (-2.0, -0.048_900_510_708_061_12),
            (10.0, 2_492.228_976_241_877_8),
            (-10.0, -4.156_968_929_685_324e-6),
            (50.0, 1.058_563_689_713_169_1e20),
            (-50.0, -3.783_264_029_550_459e-24),
            (100.0, 2.715_552_744_853_879_8e41),
            (-100.0, -3.683_597_761_682_032e-46),
            (700.0, 1.450_978_736_052_560_9e301),
        ];
        for (x, want) in cases {
            let got = expint_ei(x).unwrap();
            assert!(rel(got, want) < 1e-12, "Ei({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn ei_small_argument_limit() {
        let x = 1e-6;
        let got = expint_ei(-x).unwrap();
        assert!((got - (EULER_GAMMA + math::ln(x))).abs() < 1e-6);
    }

    #[test]
    fn ei_negative_axis_is_negative() {
        for i in 0..200 {
            let x = 1e-6 * 1.1f64.powi(i);
            assert!(expint_ei(-x).unwrap() < 0.0);
        }
    }

    #[test]
    fn ei_pole() {
        assert_eq!(expint_ei(0.0), Err(Error::Pole));
    }

    #[test]
    fn scaled_ei_values() {
        assert!(rel(exp_scaled_ei(1.0).unwrap(), -0.596_347_362_323_194_07) < 1e-13);
        let a = 0.5;
        let fused = exp_scaled_ei(a).unwrap();
        let direct = math::exp(a) * expint_ei(-a).unwrap();
        assert!((fused - direct).abs() < 1e-12);
        assert!(rel(fused, -0.922_910_632_483_730_5) < 1e-13);
        let big = 1e4;
        let v = exp_scaled_ei(big).unwrap() * big;
        assert!((v + 1.0).abs() < 1e-3);
        assert!(rel(v, -0.999_900_019_994_002_4) < 1e-12);
        assert!(exp_scaled_ei(0.0).is_err());
    }

    #[test]
    fn incomplete_gamma_values() {
        let x = 0.7;
        assert!(rel(upper_incomplete_gamma_int(1, x).unwrap(), math::exp(-x)) < 1e-15);
        assert!(rel(upper_incomplete_gamma_int(3, 0.0).unwrap(), 2.0) < 1e-15);
        assert!(rel(upper_incomplete_gamma_int(-1, 2.0).unwrap(), 0.018_767_130_910_245_226) < 1e-12);
        assert!(rel(upper_incomplete_gamma_int(-5, 0.1).unwrap(), 17_658.716_456_238_626) < 1e-12);
        assert!(rel(upper_incomplete_gamma_int(-3, 10.0).unwrap(), 3.304_101_410_547_015e-9) < 1e-12);
        assert!(rel(upper_incomplete_gamma_int(4, -2.5).unwrap(), -71.572_152_019_132_91) < 1e-12);
        assert!(rel(upper_incomplete_gamma_int(0, 2.0).unwrap(), expint_e1(2.0).unwrap()) < 1e-15);
    }

    #[test]
    fn incomplete_gamma_divergent() {
        assert!(matches!(
            upper_incomplete_gamma_int(0, -1.0),
            Err(Error::DivergentGamma { .. })
        ));
        assert!(matches!(
            upper_incomplete_gamma_int(-2, 0.0),
            Err(Error::DivergentGamma { .. })
        ));
    }

    #[test]
    fn incomplete_gamma_recurrence() {
        for x in [0.1, 1.0, 10.0] {
            for m in -5..=10 {
                let lhs = upper_incomplete_gamma_int(m + 1, x).unwrap();
                let rhs = m as f64 * upper_incomplete_gamma_int(m, x).unwrap()
                    + math::powi(x, m) * math::exp(-x);
                assert!(rel(lhs, rhs) < 1e-10, "m={m}, x={x}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn en_matches_e1() {
        for x in [0.01, 0.5, 1.0, 3.0, 30.0] {
            assert_eq!(expint_en(1, x).unwrap(), expint_e1(x).unwrap());
            // E_2(x) = e^{-x} − x E_1(x)
            let e2 = math::exp(-x) - x * expint_e1(x).unwrap();
            assert!(rel(expint_en(2, x).unwrap(), e2) < 1e-10);
        }
    }
}
