//! Integer compositions, multinomial coefficients, partial fractions with
//! repeated real poles, and harmonic numbers.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{self, KahanSum};
use crate::{Error, Result};

/// Largest `n` for which [`multinomial`] is evaluated in exact integer arithmetic.
pub const MULTINOMIAL_LIMIT: u32 = 20;

/// A vector of `K` nonnegative integers summing to `ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    parts: Vec<u32>,
}

impl Composition {
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn total(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Inner product of the parts with `values`.
    pub fn dot(&self, values: &[f64]) -> f64 {
        self.parts
            .iter()
            .zip(values)
            .map(|(&i, &v)| i as f64 * v)
            .sum()
    }

    /// `Π_k base_k^{i_k}`.
    pub fn power_product(&self, bases: &[f64]) -> f64 {
        self.parts
            .iter()
            .zip(bases)
            .map(|(&i, &b)| math::powi(b, i as i32))
            .product()
    }
}

impl From<Vec<u32>> for Composition {
    fn from(parts: Vec<u32>) -> Self {
        Self { parts }
    }
}

/// Lazy lexicographic enumeration of all compositions of `omega` into `k` parts.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Option<Vec<u32>>,
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        // Rightmost position (excluding the last) that still has mass to its right.
        let mut tail = next[k - 1];
        let mut advanced = false;
        for p in (0..k - 1).rev() {
            if tail > 0 {
                next[p] += 1;
                for slot in next.iter_mut().skip(p + 1) {
                    *slot = 0;
                }
                next[k - 1] = tail - 1;
                advanced = true;
                break;
            }
            tail += next[p];
        }
        if advanced {
            self.current = Some(next);
        }
        Some(Composition { parts: out })
    }
}

/// All `C(ω+K−1, K−1)` compositions of `omega` into `k` parts, in lexicographic order.
///
/// `k = 0` yields nothing.
pub fn enumerate_compositions(omega: u32, k: usize) -> Compositions {
    if k == 0 {
        return Compositions { current: None };
    }
    let mut first = vec![0; k];
    first[k - 1] = omega;
    Compositions {
        current: Some(first),
    }
}

/// Exact binomial coefficient; `None` on overflow.
pub fn binomial(n: u32, k: u32) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// `C(n, k)` as a float, for `n` in the exact range.
pub(crate) fn binomial_f64(n: u32, k: u32) -> f64 {
    binomial(n, k).expect("binomial within exact range") as f64
}

/// `n! / (i_1! ⋯ i_K!)` in exact integer arithmetic.
pub fn multinomial(n: u32, parts: &Composition) -> Result<u64> {
    let parts_sum = parts.total();
    if parts_sum != n {
        return Err(Error::PartsMismatch { n, parts_sum });
    }
    if n > MULTINOMIAL_LIMIT {
        return Err(Error::IntegerOverflow {
            n,
            limit: MULTINOMIAL_LIMIT,
        });
    }
    let mut acc: u64 = 1;
    let mut running = 0;
    for &i in parts.parts() {
        running += i;
        let b = binomial(running, i).ok_or(Error::IntegerOverflow {
            n,
            limit: MULTINOMIAL_LIMIT,
        })?;
        acc = acc.checked_mul(b).ok_or(Error::IntegerOverflow {
            n,
            limit: MULTINOMIAL_LIMIT,
        })?;
    }
    Ok(acc)
}

/// `H_n = Σ_{j=1..n} 1/j`, with `H_0 = 0`.
pub fn harmonic(n: u32) -> f64 {
    (1..=n).map(|j| 1.0 / j as f64).collect::<KahanSum>().value()
}

/// A real pole `location` of the given multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole {
    pub location: f64,
    pub multiplicity: u32,
}

/// `Σ_k Σ_{l=1..m_k} A_k^{(l)} / (x − p_k)^l`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialFractionExpansion {
    poles: Vec<Pole>,
    /// `coefficients[k][l - 1]` multiplies `(x − p_k)^{−l}`.
    coefficients: Vec<Vec<f64>>,
}

impl PartialFractionExpansion {
    pub fn poles(&self) -> &[Pole] {
        &self.poles
    }

    /// Coefficients for pole `k`, indexed by power minus one.
    pub fn coefficients(&self, k: usize) -> &[f64] {
        &self.coefficients[k]
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        let mut acc = KahanSum::new();
        for (pole, coeffs) in self.poles.iter().zip(&self.coefficients) {
            let inv = 1.0 / (x - pole.location);
            let mut power = inv;
            for &a in coeffs {
                acc.add(a * power);
                power *= inv;
            }
        }
        acc.value()
    }
}

/// Partial fractions of `constant / Π_k (x − p_k)^{m_k}`.
///
/// Coefficients come from the residue formula
/// `A_k^{(l)} = g_k^{(m_k−l)}(p_k) / (m_k−l)!` with the cofactor
/// `g_k(x) = constant / Π_{j≠k} (x − p_j)^{m_j}`. Derivatives of `g_k` are
/// built exactly from the logarithmic derivative `g'/g = −Σ_j m_j/(x − p_j)`.
pub fn partial_fractions(constant: f64, poles: &[(f64, u32)]) -> Result<PartialFractionExpansion> {
    for (a, &(p, m)) in poles.iter().enumerate() {
        if m == 0 {
            return Err(Error::InvalidParameter {
                name: "multiplicity",
                reason: "pole multiplicity must be positive".into(),
            });
        }
        for &(q, _) in &poles[a + 1..] {
            if p == q {
                return Err(Error::CoincidentPoles {
                    first: p,
                    second: q,
                });
            }
        }
    }

    let mut coefficients = Vec::with_capacity(poles.len());
    for (k, &(pk, mk)) in poles.iter().enumerate() {
        let others: Vec<(f64, u32)> = poles
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, &pole)| pole)
            .collect();
        let g0 = others.iter().fold(constant, |acc, &(pj, mj)| {
            acc / math::powi(pk - pj, mj as i32)
        });
        let depth = mk as usize;
        // h_u = h^{(u)}(p_k) / u!
        let h: Vec<f64> = (0..depth)
            .map(|u| {
                let sign = if u % 2 == 0 { -1.0 } else { 1.0 };
                sign * others
                    .iter()
                    .map(|&(pj, mj)| mj as f64 / math::powi(pk - pj, u as i32 + 1))
                    .sum::<f64>()
            })
            .collect();
        // e_t = g^{(t)}(p_k) / t!
        let mut e = Vec::with_capacity(depth);
        e.push(g0);
        for t in 0..depth.saturating_sub(1) {
            let s: f64 = (0..=t).map(|u| e[t - u] * h[u]).sum();
            e.push(s / (t + 1) as f64);
        }
        coefficients.push((1..=depth).map(|l| e[depth - l]).collect());
    }

    Ok(PartialFractionExpansion {
        poles: poles
            .iter()
            .map(|&(location, multiplicity)| Pole {
                location,
                multiplicity,
            })
            .collect(),
        coefficients,
    })
}
