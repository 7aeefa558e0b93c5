//! Empirical statistics over the primitive-character family: the
//! normalizer D, the zero-linear statistics with and without the
//! Gaussian center average, and exact finite-Q evaluation of the
//! off-diagonal character sum.

use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::partition::sieve_distinct_sum;
use crate::poly::{Poly, PiecewisePoly};
use crate::prediction::arithmetic_constant;
use crate::primes::{euler_phi, gcd, mobius, phi_star, primes_upto};
use crate::quad::gauss_hermite;
use crate::testfn::C4Family;
use crate::weight::WeightFunction;
use crate::zeros::ZeroTable;

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// √π Σ_q 𝒲(q/Q) φ*(q)/φ(q) — the t-integral of e^{−t²} is √π exactly.
pub fn d_weight_exact(w: &WeightFunction, q_scale: f64) -> f64 {
    let lo = q_scale.ceil() as u64;
    let hi = (2.0 * q_scale).floor() as u64;
    let mut sum = 0.0;
    for q in lo..=hi {
        let wt = w.eval(q as f64 / q_scale);
        if wt > 0.0 && q >= 3 {
            sum += wt * phi_star(q) as f64 / euler_phi(q) as f64;
        }
    }
    SQRT_PI * sum
}

fn arithmetic_constant_cached() -> f64 {
    static CONST: OnceLock<f64> = OnceLock::new();
    *CONST.get_or_init(|| arithmetic_constant(1_000_000).unwrap().0)
}

/// √π 𝒲̃(1) Q ∏_p (1 − p⁻² − p⁻³)
pub fn d_weight_asymptotic(w: &WeightFunction, q_scale: f64) -> f64 {
    SQRT_PI * w.mellin(1.0) * q_scale * arithmetic_constant_cached()
}

/// A source of zero tables keyed by modulus and requested height.
pub trait ZeroSource: Sync {
    fn tables(&self, q: u64, t_max: f64) -> Result<Vec<ZeroTable>, Error>;
}

impl ZeroSource for crate::cache::ZeroCache {
    fn tables(&self, q: u64, t_max: f64) -> Result<Vec<ZeroTable>, Error> {
        Ok(self.ensure(q, t_max)?.0)
    }
}

/// Compute zeros on demand without persistence.
pub struct DirectZeroSource;

impl ZeroSource for DirectZeroSource {
    fn tables(&self, q: u64, t_max: f64) -> Result<Vec<ZeroTable>, Error> {
        crate::zeros::find_zeros_all(q, t_max)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StatisticResult {
    pub value: f64,
    pub q_scale: f64,
    pub n: usize,
    pub family: Vec<String>,
    pub t_nodes: usize,
    pub zero_height: f64,
    /// bound on the neglected |γ| > height contribution per character,
    /// summed with family weights
    pub truncation_bound: f64,
}

/// Distinct-index zero sum for one character at center shift t, via
/// Möbius sieving over the partition lattice (an exact identity).
fn distinct_sum_one(
    family: &C4Family,
    table: &ZeroTable,
    u_scale: f64,
    shift: f64,
) -> Result<f64, Error> {
    let n = family.n();
    let scaled: Vec<f64> = table
        .zeros
        .iter()
        .map(|&(g, _)| u_scale * (g - shift))
        .collect();
    let fns = &family.functions;
    sieve_distinct_sum(n, scaled.len(), |idx: &[usize]| {
        idx.iter()
            .enumerate()
            .map(|(i, &j)| fns[i].f_eval(scaled[j]))
            .product()
    })
}

fn family_weight_sum(w: &WeightFunction, q_scale: f64) -> Vec<(u64, f64)> {
    let lo = q_scale.ceil() as u64;
    let hi = (2.0 * q_scale).floor() as u64;
    (lo..=hi)
        .filter_map(|q| {
            let wt = w.eval(q as f64 / q_scale);
            (wt > 0.0 && phi_star(q) > 0).then(|| (q, wt / euler_phi(q) as f64))
        })
        .collect()
}

/// Σ_q 𝒲(q/Q)/φ(q) Σ*_χ Σ♯_{j₁,…,j_n} ∏ f_i(𝒰 γ_{j_i}), zeros truncated
/// at `height`.
pub fn l0_statistic(
    family: &C4Family,
    w: &WeightFunction,
    q_scale: f64,
    source: &dyn ZeroSource,
    height: f64,
) -> Result<StatisticResult, Error> {
    l_statistic_inner(family, w, q_scale, source, height, &[(0.0, 1.0)], 0)
}

/// Gaussian-center average of the distinct-index statistic by
/// Gauss–Hermite quadrature in t (weight e^{−t²} native).
pub fn l1_statistic(
    family: &C4Family,
    w: &WeightFunction,
    q_scale: f64,
    source: &dyn ZeroSource,
    height: f64,
    gh_order: usize,
) -> Result<StatisticResult, Error> {
    let (nodes, weights) = gauss_hermite(gh_order);
    let tw: Vec<(f64, f64)> = nodes.into_iter().zip(weights).collect();
    l_statistic_inner(family, w, q_scale, source, height, &tw, gh_order)
}

fn l_statistic_inner(
    family: &C4Family,
    w: &WeightFunction,
    q_scale: f64,
    source: &dyn ZeroSource,
    height: f64,
    t_nodes: &[(f64, f64)],
    gh_order: usize,
) -> Result<StatisticResult, Error> {
    family.check_support()?;
    let u_scale = q_scale.ln() / (2.0 * std::f64::consts::PI);
    let moduli = family_weight_sum(w, q_scale);
    // deterministic reduction: results collected per q in order
    let per_q: Vec<Result<f64, Error>> = moduli
        .par_iter()
        .map(|&(q, wq)| {
            let tables = source.tables(q, height)?;
            let mut acc = 0.0;
            for table in &tables {
                for &(t, tw) in t_nodes {
                    acc += tw * distinct_sum_one(family, table, u_scale, t)?;
                }
            }
            Ok(wq * acc)
        })
        .collect();
    let mut value = 0.0;
    for r in per_q {
        value += r?;
    }
    // tail estimate: per character ≈ density · Σᵢ cᵢ/(𝒰²height) when the
    // other factors are bounded by their maxima
    let decay: f64 = family.functions.iter().map(|f| f.decay_coeff()).sum();
    let char_count: f64 = moduli
        .iter()
        .map(|&(q, wq)| wq * phi_star(q) as f64)
        .sum();
    let density = (2.0 * q_scale * height / (2.0 * std::f64::consts::PI)).ln()
        / std::f64::consts::PI;
    let truncation_bound = 2.0 * char_count * density * decay / (u_scale * u_scale * height);
    Ok(StatisticResult {
        value,
        q_scale,
        n: family.n(),
        family: family.functions.iter().map(|f| f.spec_string()).collect(),
        t_nodes: if gh_order == 0 { 1 } else { gh_order },
        zero_height: height,
        truncation_bound,
    })
}

/// Σ*_{χ mod q} χ(m) χ̄(n) for (mn, q) = 1: Σ_{d | q, d | m−n} φ(d) μ(q/d).
fn primitive_char_sum(q: u64, divisors: &[(u64, f64, i64)], m: u64, n: u64) -> f64 {
    if gcd(m, q) != 1 || gcd(n, q) != 1 {
        return 0.0;
    }
    let diff = m.abs_diff(n);
    let mut s = 0.0;
    for &(d, phi_d, mu_qd) in divisors {
        if mu_qd != 0 && (diff % d == 0) {
            s += phi_d * mu_qd as f64;
        }
    }
    s
}

/// Exact finite-Q evaluation of the off-diagonal character sum for
/// squarefree prime tuples: the t-integral collapses to
/// √π e^{−(log 𝔫/𝔪)²/4} and the character average to a divisor sum.
/// `fa` are the transforms attached to the 𝔪-side primes (arguments
/// −log p/log Q), `fb` the 𝔫-side (+log p/log Q).
pub fn als_sum_exact(
    p_modulus: u64,
    fa: &[PiecewisePoly],
    fb: &[PiecewisePoly],
    w: &WeightFunction,
    q_scale: f64,
) -> Result<f64, Error> {
    if fa.is_empty() || fb.is_empty() {
        return Err(Error::Domain("need nonempty prime index sets".into()));
    }
    if mobius(p_modulus) == 0 {
        return Err(Error::Domain("P must be squarefree".into()));
    }
    let log_q = q_scale.ln();
    // ordered tuples of distinct primes with per-slot support cutoffs
    let side_primes = |transforms: &[PiecewisePoly], sign: f64| -> Vec<Vec<(u64, f64)>> {
        transforms
            .iter()
            .map(|t| {
                let kappa = t.support().1;
                let limit = q_scale.powf(kappa).min(1e8) as u64;
                primes_upto(limit)
                    .into_iter()
                    .filter(|&p| p_modulus % p != 0)
                    .map(|p| {
                        let lp = (p as f64).ln();
                        (p, lp * t.eval(sign * lp / log_q))
                    })
                    .filter(|&(_, c)| c != 0.0)
                    .collect()
            })
            .collect()
    };
    let a_side = side_primes(fa, -1.0);
    let b_side = side_primes(fb, 1.0);

    // enumerate (𝔪, coefficient) over distinct-prime ordered tuples
    fn tuples(side: &[Vec<(u64, f64)>]) -> Vec<(u64, f64, Vec<u64>)> {
        let mut out: Vec<(u64, f64, Vec<u64>)> = vec![(1, 1.0, vec![])];
        for slot in side {
            let mut next = vec![];
            for (m, coeff, used) in &out {
                for &(p, c) in slot {
                    if used.contains(&p) {
                        continue;
                    }
                    if (*m as f64) * (p as f64) > 1e15 {
                        return vec![]; // memory/overflow guard
                    }
                    let mut u = used.clone();
                    u.push(p);
                    next.push((m * p, coeff * c, u));
                }
            }
            out = next;
        }
        out
    }
    let m_tuples = tuples(&a_side);
    let n_tuples = tuples(&b_side);
    if (m_tuples.len() as f64) * (n_tuples.len() as f64) > 5e8 {
        return Err(Error::OutOfRange(
            "prime-tuple enumeration too large".into(),
        ));
    }

    let lo = q_scale.ceil() as u64;
    let hi = (2.0 * q_scale).floor() as u64;
    let moduli: Vec<(u64, f64, Vec<(u64, f64, i64)>)> = (lo..=hi)
        .filter(|&q| gcd(q, p_modulus) == 1)
        .filter_map(|q| {
            let wt = w.eval(q as f64 / q_scale);
            (wt > 0.0).then(|| {
                let divisors: Vec<(u64, f64, i64)> = (1..=q)
                    .filter(|d| q % d == 0)
                    .map(|d| (d, euler_phi(d) as f64, mobius(q / d)))
                    .collect();
                (q, wt / euler_phi(q) as f64, divisors)
            })
        })
        .collect();

    let total: f64 = m_tuples
        .par_iter()
        .map(|&(m, ca, _)| {
            let mut acc = 0.0;
            for &(n, cb, _) in &n_tuples {
                if gcd(m, n) != 1 {
                    continue;
                }
                let lr = (n as f64 / m as f64).ln();
                let gauss = SQRT_PI * (-lr * lr / 4.0).exp();
                let coeff = ca * cb * gauss / (m as f64 * n as f64).sqrt();
                if coeff == 0.0 {
                    continue;
                }
                let mut chi_sum = 0.0;
                for (q, wq, divisors) in &moduli {
                    chi_sum += wq * primitive_char_sum(*q, divisors, m, n);
                }
                acc += coeff * chi_sum;
            }
            acc
        })
        .sum();
    Ok(total)
}

/// ∫ t^j e^{−t²} e^{iξt} dt in closed form: i^{−j} d^j/dξ^j √π e^{−ξ²/4}.
/// Real for even j, purely imaginary for odd j.
pub fn gaussian_fourier_moment(j: u32, xi: f64) -> Result<Complex64, Error> {
    if j > 12 {
        return Err(Error::OutOfRange("moment order must be ≤ 12".into()));
    }
    // e^{−ξ²/4} q_j(ξ) with q₀ = 1, q_{j+1} = q_j' − (ξ/2) q_j
    let mut qp = Poly(vec![1.0]);
    for _ in 0..j {
        let deriv = Poly(
            qp.0.iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect::<Vec<_>>(),
        );
        qp = deriv.add(&qp.mul(&Poly(vec![0.0, -0.5])));
    }
    let mag = SQRT_PI * (-xi * xi / 4.0).exp() * qp.eval(xi);
    // i^{−j} cycles 1, −i, −1, i
    let unit = match j % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    };
    Ok(unit * mag)
}
