//! Closed-form analytic side: Euler products, diagonal pairing terms,
//! the off-diagonal orthant integrals 𝓘, prime-sum comparators, and the
//! assembled limit of the normalized one-parameter statistic.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Error;
use crate::partition::{enumerate_partitions, moebius_from_bottom};
use crate::poly::{Poly, PiecewisePoly};
use crate::primes::{factorize, primes_upto};
use crate::quad::{adaptive, adaptive_box, qmc_box};
use crate::testfn::{C4Family, TestFunction};

/// ∏_{p ≤ p_max} (1 − p⁻² − p⁻³) with a tail bound on the omitted
/// factors. Returns (value, absolute tail bound).
pub fn arithmetic_constant(p_max: u64) -> Result<(f64, f64), Error> {
    if p_max < 100 {
        return Err(Error::OutOfRange("p_max must be ≥ 100".into()));
    }
    let mut v = 1.0f64;
    for p in primes_upto(p_max) {
        let p = p as f64;
        v *= 1.0 - 1.0 / (p * p) - 1.0 / (p * p * p);
    }
    // |log tail| ≤ Σ_{n>p_max} (n⁻²+n⁻³)/(1−2⁻²−2⁻³) ≤ 1.6(1/p_max + 1/p_max²)
    let x = p_max as f64;
    let tail_log = 1.6 * (1.0 / x + 1.0 / (x * x));
    Ok((v, v * (tail_log.exp() - 1.0)))
}

fn local_b(s: f64, p: f64) -> f64 {
    1.0 + 1.0 / ((p - 1.0) * p.powf(s + 1.0))
}

/// B(s) = ∏_p (1 + 1/((p−1)p^{s+1})), convergent for Re s > −1;
/// truncated at p_max with tail bound.
pub fn euler_b(s: f64, p_max: u64) -> Result<(f64, f64), Error> {
    if s <= -1.0 {
        return Err(Error::Domain(format!("B(s) diverges for s ≤ −1 (s={s})")));
    }
    let mut v = 1.0;
    for p in primes_upto(p_max) {
        v *= local_b(s, p as f64);
    }
    let x = p_max as f64;
    let tail_log = 2.0 * x.powf(-s - 1.0) / (s + 1.0).max(0.5);
    Ok((v, v * (tail_log.exp() - 1.0)))
}

/// B₁(s,m) = ∏_{p|m} (1 − p^{−(s+1)}) / (1 + 1/((p−1)p^{s+1}))
pub fn euler_b1(s: f64, m: u64) -> f64 {
    factorize(m)
        .iter()
        .map(|&(p, _)| {
            let p = p as f64;
            (1.0 - p.powf(-(s + 1.0))) / local_b(s, p)
        })
        .product()
}

/// B₂(s,c) = ∏_{p|c} (1 + 1/((p−1)p^{s+1}))^{−1}
pub fn euler_b2(s: f64, c: u64) -> f64 {
    factorize(c)
        .iter()
        .map(|&(p, _)| 1.0 / local_b(s, p as f64))
        .product()
}

/// B₃(s,c) = ∏_{p|c} (1 − (1/(p(p−1))) (1 + 1/((p−1)p^{s+1}))^{−1})
pub fn euler_b3(s: f64, c: u64) -> f64 {
    factorize(c)
        .iter()
        .map(|&(p, _)| {
            let pf = p as f64;
            1.0 - 1.0 / (pf * (pf - 1.0) * local_b(s, pf))
        })
        .product()
}

/// B₄(s,P) = ∏_{p|P} (1 − (1/(p−1)) (1 + 1/((p−1)p^{s+1}))^{−1})
pub fn euler_b4(s: f64, p_mod: u64) -> f64 {
    factorize(p_mod)
        .iter()
        .map(|&(p, _)| {
            let pf = p as f64;
            1.0 - 1.0 / ((pf - 1.0) * local_b(s, pf))
        })
        .product()
}

/// B₅(s) = ∏_p (1 + 1/((p−1)p^{1−s}))(1 − p^{−(2−s)}), Re s < 3/2.
pub fn euler_b5(s: f64, p_max: u64) -> Result<(f64, f64), Error> {
    if s >= 1.5 {
        return Err(Error::Domain(format!("B₅(s) diverges for s ≥ 3/2 (s={s})")));
    }
    let mut v = 1.0;
    for p in primes_upto(p_max) {
        let p = p as f64;
        v *= (1.0 + 1.0 / ((p - 1.0) * p.powf(1.0 - s))) * (1.0 - p.powf(-(2.0 - s)));
    }
    // the two local factors cancel to O(p^{s−3})
    let x = p_max as f64;
    let tail_log = 4.0 * x.powf(s - 2.0) / (2.0 - s).max(0.5);
    Ok((v, v * (tail_log.exp() - 1.0)))
}

/// B₆(s,P) = Σ_{(c,P)=1} μ(c) B₃(−s,c)/(c^s φ(c))
///         = ∏_{p∤P} (1 − B₃(−s,p)/(p^s(p−1))), Re s > 0.
pub fn euler_b6(s: f64, p_mod: u64, p_max: u64) -> Result<(f64, f64), Error> {
    if s <= 0.0 {
        return Err(Error::Domain(format!("B₆(s,·) diverges for s ≤ 0 (s={s})")));
    }
    let mut v = 1.0;
    for p in primes_upto(p_max) {
        if p_mod % p == 0 {
            continue;
        }
        let pf = p as f64;
        v *= 1.0 - euler_b3(-s, p) / (pf.powf(s) * (pf - 1.0));
    }
    let x = p_max as f64;
    let tail_log = 2.0 * x.powf(-s) / s.max(0.5);
    Ok((v, v * (tail_log.exp() - 1.0)))
}

/// ∫₀^∞ v F̂_a(−v) F̂_b(v) dv, exact for piecewise-polynomial transforms.
pub fn diagonal_pair_integral(fa: &PiecewisePoly, fb: &PiecewisePoly) -> f64 {
    let prod = fa.reflect().product(fb);
    let (_, hi) = prod.support();
    if hi <= 0.0 {
        return 0.0;
    }
    prod.mul_poly(&Poly(vec![0.0, 1.0])).integrate(0.0, hi)
}

/// Permanent of the |S₁|×|S₂| matrix M[ℓ, σ(ℓ)] via Ryser's formula:
/// the sum over bijections σ: S₁ → S₂. Size mismatch contributes 0 and
/// the empty case is 1.
pub fn pairing_sum(s1: &[usize], s2: &[usize], m: &dyn Fn(usize, usize) -> f64) -> f64 {
    if s1.len() != s2.len() {
        return 0.0;
    }
    let n = s1.len();
    if n == 0 {
        return 1.0;
    }
    // perm(A) = (−1)^n Σ_{S ⊆ cols} (−1)^{|S|} ∏_rows Σ_{j∈S} a_{ij}
    let mut total = 0.0;
    for mask in 1u32..(1 << n) {
        let mut prod = 1.0;
        for &i in s1 {
            let mut rowsum = 0.0;
            for (jj, &j) in s2.iter().enumerate() {
                if mask >> jj & 1 == 1 {
                    rowsum += m(i, j);
                }
            }
            prod *= rowsum;
        }
        let sign = if (n as u32 - mask.count_ones()) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        total += sign * prod;
    }
    total
}

/// Brute-force bijection enumeration (test oracle for sizes ≤ 6).
pub fn pairing_sum_brute(s1: &[usize], s2: &[usize], m: &dyn Fn(usize, usize) -> f64) -> f64 {
    if s1.len() != s2.len() {
        return 0.0;
    }
    fn rec(
        s1: &[usize],
        s2: &[usize],
        used: &mut Vec<bool>,
        row: usize,
        m: &dyn Fn(usize, usize) -> f64,
    ) -> f64 {
        if row == s1.len() {
            return 1.0;
        }
        let mut total = 0.0;
        for j in 0..s2.len() {
            if !used[j] {
                used[j] = true;
                total += m(s1[row], s2[j]) * rec(s1, s2, used, row + 1, m);
                used[j] = false;
            }
        }
        total
    }
    let mut used = vec![false; s2.len()];
    rec(s1, s2, &mut used, 0, m)
}

/// One outer variable of an 𝓘 orthant term.
#[derive(Clone, Copy)]
struct OuterVar {
    label: usize,
    positive: bool,
    in_tau: bool,
}

/// ∫_{x > 1−τ} F̂_a(x) F̂_b(x + R) (1 − τ − x) dx, exact.
fn inner_exact(fa: &PiecewisePoly, fb: &PiecewisePoly, tau: f64, shift: f64) -> f64 {
    let prod = fa.product(&fb.translate(-shift));
    let (lo, hi) = prod.support();
    let a = (1.0 - tau).max(lo);
    if a >= hi {
        return 0.0;
    }
    prod.mul_poly(&Poly(vec![1.0 - tau, -1.0])).integrate(a, hi)
}

const I_TOL: f64 = 1e-8;
const QMC_POINTS: usize = 1 << 20;

/// The off-diagonal orthant integral 𝓘(S₁₂, S₂₂): sum over anchor pairs
/// (j₁, j₂) and T/W zone assignments of orthant-constrained integrals.
/// The delta constraint eliminates the second anchor variable; the first
/// anchor is integrated exactly in closed form, leaving the outer
/// variables to adaptive quadrature (dim ≤ 3) or QMC. Returns
/// (value, error estimate).
pub fn i_integral(
    s12: &[usize],
    s22: &[usize],
    transforms: &[PiecewisePoly],
) -> Result<(f64, f64), Error> {
    if s12.is_empty() || s22.is_empty() {
        return Err(Error::Domain("𝓘 needs nonempty index sets".into()));
    }
    let support = |l: usize| transforms[l].support().1;
    // global short-circuit: the constrained coordinate sum cannot reach 1
    let kappa_prime: f64 = s12.iter().map(|&l| support(l)).sum();
    if kappa_prime <= 1.0 {
        return Ok((0.0, 0.0));
    }
    let mut s12 = s12.to_vec();
    let mut s22 = s22.to_vec();
    s12.sort_unstable();
    s22.sort_unstable();
    let (k, r) = (s12.len(), s22.len());
    let mut total = 0.0;
    let mut err = 0.0;
    for j1 in 0..k {
        for j2 in 0..r {
            let a1 = s12[j1];
            let b2 = s22[j2];
            // zone elements: prefix (before either anchor), then the two
            // suffixes; each is assigned T (counts toward τ) or W
            let mut elems: Vec<(usize, u8)> = vec![]; // (label, zone 1|2|3)
            elems.extend(s12[..j1].iter().map(|&l| (l, 1)));
            elems.extend(s22[..j2].iter().map(|&l| (l, 1)));
            elems.extend(s12[j1 + 1..].iter().map(|&l| (l, 2)));
            elems.extend(s22[j2 + 1..].iter().map(|&l| (l, 3)));
            let nz = elems.len();
            for mask in 0u32..(1 << nz) {
                let mut vars = Vec::with_capacity(nz);
                let mut sign_flips = (j1 + 1) + r; // (−1)^{j₁+|S₂₂|}, 1-based j₁
                let mut tau_max = support(a1);
                for (b, &(label, zone)) in elems.iter().enumerate() {
                    let in_tau = mask >> b & 1 == 1;
                    // zone 1: T negative / W positive; zone 2: both
                    // positive, W flips sign; zone 3: both negative,
                    // W flips sign
                    let positive = match zone {
                        1 => !in_tau,
                        2 => true,
                        _ => false,
                    };
                    if !in_tau && zone != 1 {
                        sign_flips += 1;
                    }
                    if in_tau && positive {
                        tau_max += support(label);
                    }
                    vars.push(OuterVar {
                        label,
                        positive,
                        in_tau,
                    });
                }
                if tau_max <= 1.0 {
                    continue; // u_{anchor} + u(T⃗) > 1 unreachable
                }
                let sign = if sign_flips % 2 == 0 { 1.0 } else { -1.0 };
                let fa = &transforms[a1];
                let fb = &transforms[b2];
                let integrand = |u: &[f64]| -> f64 {
                    let mut tau = 0.0;
                    let mut shift = 0.0;
                    let mut weight = 1.0;
                    for (v, &x) in vars.iter().zip(u) {
                        if v.in_tau {
                            tau += x;
                        }
                        shift += x;
                        weight *= transforms[v.label].eval(-x);
                    }
                    if weight == 0.0 {
                        return 0.0;
                    }
                    weight * inner_exact(fa, fb, tau, shift)
                };
                if nz == 0 {
                    total += sign * integrand(&[]);
                } else {
                    let lo: Vec<f64> = vars
                        .iter()
                        .map(|v| if v.positive { 0.0 } else { -support(v.label) })
                        .collect();
                    let hi: Vec<f64> = vars
                        .iter()
                        .map(|v| if v.positive { support(v.label) } else { 0.0 })
                        .collect();
                    if nz <= 3 {
                        total += sign * adaptive_box(&integrand, &lo, &hi, I_TOL);
                        err += I_TOL;
                    } else {
                        let v1 = qmc_box(&integrand, &lo, &hi, QMC_POINTS, 17);
                        let v2 = qmc_box(&integrand, &lo, &hi, QMC_POINTS, 18);
                        total += sign * 0.5 * (v1 + v2);
                        err += 0.5 * (v1 - v2).abs();
                    }
                }
            }
        }
    }
    Ok((total, err))
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionTerm {
    pub blocks: Vec<Vec<usize>>,
    pub moebius: i64,
    pub diagonal: f64,
    pub off_diagonal: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MainTermReport {
    pub total: f64,
    pub error_estimate: f64,
    pub per_partition: Vec<PartitionTerm>,
}

/// Enumerate assignments of [n] into three labeled groups (S₁,S₂,S₃) as
/// base-3 masks; returns the three index lists per assignment.
fn three_splits(n: usize) -> Vec<[Vec<usize>; 3]> {
    let mut out = vec![];
    let total = 3usize.pow(n as u32);
    for mut code in 0..total {
        let mut split: [Vec<usize>; 3] = [vec![], vec![], vec![]];
        for item in 0..n {
            split[code % 3].push(item);
            code /= 3;
        }
        out.push(split);
    }
    out
}

fn subsets(set: &[usize]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let n = set.len();
    (0..(1u32 << n))
        .map(|mask| {
            let mut inside = vec![];
            let mut outside = vec![];
            for (i, &x) in set.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    inside.push(x);
                } else {
                    outside.push(x);
                }
            }
            (inside, outside)
        })
        .collect()
}

/// The Q → ∞ limit of the normalized statistic, assembled over the
/// partition lattice: for each coarsening G with ν blocks, block
/// transforms F̂_ℓ, and every split S₁+S₂+S₃ = [ν], a diagonal pairing
/// permanent plus the off-diagonal 𝓘-weighted permanents.
pub fn main_term(family: &C4Family) -> Result<MainTermReport, Error> {
    family.check_support()?;
    let n = family.n();
    let mut total = 0.0;
    let mut err = 0.0;
    let mut per_partition = vec![];
    for g in enumerate_partitions(n)? {
        let nu = g.nu();
        let mu = moebius_from_bottom(&g);
        let transforms: Vec<PiecewisePoly> = g
            .blocks()
            .iter()
            .map(|b| Ok(family.product_for_block(b)?.fhat))
            .collect::<Result<_, Error>>()?;
        let fhat0: Vec<f64> = transforms.iter().map(|t| t.eval(0.0)).collect();
        // pair-integral matrix over blocks
        let v: Vec<Vec<f64>> = (0..nu)
            .map(|a| {
                (0..nu)
                    .map(|b| diagonal_pair_integral(&transforms[a], &transforms[b]))
                    .collect()
            })
            .collect();
        let vm = |a: usize, b: usize| v[a][b];
        let mut diagonal = 0.0;
        let mut off_diagonal = 0.0;
        for [s1, s2, s3] in three_splits(nu) {
            let spectator: f64 = s3.iter().map(|&l| fhat0[l]).product();
            if spectator == 0.0 {
                continue;
            }
            diagonal += spectator * pairing_sum(&s1, &s2, &vm);
            let parity = if (s1.len() + s2.len()) % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            let mut inner = 0.0;
            for (s12, s11) in subsets(&s1) {
                if s12.is_empty() {
                    continue;
                }
                for (s22, s21) in subsets(&s2) {
                    if s22.is_empty() || s11.len() != s21.len() {
                        continue;
                    }
                    let perm = pairing_sum(&s11, &s21, &vm);
                    if perm == 0.0 {
                        continue;
                    }
                    let (ival, ierr) = i_integral(&s12, &s22, &transforms)?;
                    inner += ival * perm;
                    err += ierr * perm.abs() * mu.unsigned_abs() as f64;
                }
            }
            off_diagonal += spectator * parity * inner;
        }
        total += mu as f64 * (diagonal + off_diagonal);
        per_partition.push(PartitionTerm {
            blocks: g.blocks().to_vec(),
            moebius: mu,
            diagonal,
            off_diagonal,
        });
    }
    Ok(MainTermReport {
        total,
        error_estimate: err,
        per_partition,
    })
}

/// Σ_p (log p)²/p · F̂_a(−log p/log Q) F̂_b(log p/log Q) over primes up
/// to Q^{min support}, excluding the given primes.
pub fn prime_diagonal_sum(
    fa: &PiecewisePoly,
    fb: &PiecewisePoly,
    q_scale: f64,
    exclude: &[u64],
) -> f64 {
    let kappa = fa.support().1.min(fb.support().1);
    let log_q = q_scale.ln();
    let limit = q_scale.powf(kappa).min(1e10) as u64;
    let mut sum = 0.0;
    for p in primes_upto(limit) {
        if exclude.contains(&p) {
            continue;
        }
        let lp = (p as f64).ln();
        let x = lp / log_q;
        sum += lp * lp / p as f64 * fa.eval(-x) * fb.eval(x);
    }
    sum
}

/// ∫ p(u) e^{cu} du over [a,b] for complex c, exact by parts.
fn poly_exp_complex(p: &Poly, c: Complex64, a: f64, b: f64) -> Complex64 {
    if c.norm() < 1e-14 {
        return Complex64::new(p.integrate(a, b), 0.0);
    }
    // antiderivative e^{cu} Σ_k (−1)^k p^{(k)}(u)/c^{k+1}
    let eval_all = |u: f64| -> Complex64 {
        let mut deriv = p.clone();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut cpow = c;
        let mut sign = 1.0;
        loop {
            acc += sign * deriv.eval(u) / cpow;
            if deriv.degree() == 0 {
                break;
            }
            let next: Vec<f64> = deriv
                .0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &ck)| k as f64 * ck)
                .collect();
            deriv = Poly(next);
            cpow *= c;
            sign = -sign;
        }
        acc * (c * u).exp()
    };
    eval_all(b) - eval_all(a)
}

/// ∫₀^∞ F̂(−u) e^{−2πuw} du for a compactly supported piecewise transform.
fn half_line_transform(fhat: &PiecewisePoly, w: Complex64) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    let c = -2.0 * std::f64::consts::PI * w;
    for i in 0..fhat.pieces.len() {
        let (a, b) = (fhat.breaks[i], fhat.breaks[i + 1]);
        if b <= 0.0 {
            continue;
        }
        let a = a.max(0.0);
        // F̂(−u) = F̂(u): transforms here are even
        total += poly_exp_complex(&fhat.pieces[i], c, a, b);
    }
    total
}

/// Residual of the three-case contour identity for
/// (1/2πi) ∫_{(δ)} F(iz) (1/(z−w₁) − 1/(z−w₂)) dz against its stated
/// closed form, both sides evaluated independently.
pub fn contour_identity_check(
    f: &TestFunction,
    w1: Complex64,
    w2: Complex64,
    delta: f64,
) -> Result<f64, Error> {
    if w1.re >= w2.re {
        return Err(Error::Domain("need Re w₁ < Re w₂".into()));
    }
    if (delta - w1.re).abs() < 1e-9 || (delta - w2.re).abs() < 1e-9 {
        return Err(Error::Domain("contour collides with a pole".into()));
    }
    // LHS along z = δ + iy: integrand decays like y⁻⁴
    let lhs_at = |y: f64| -> Complex64 {
        let z = Complex64::new(delta, y);
        f.f_eval_complex(Complex64::new(-y, delta)) * (1.0 / (z - w1) - 1.0 / (z - w2))
    };
    let y_max = 400.0;
    let re = adaptive(&|y| lhs_at(y).re, -y_max, y_max, 1e-9);
    let im = adaptive(&|y| lhs_at(y).im, -y_max, y_max, 1e-9);
    let lhs = Complex64::new(re, im) / (2.0 * std::f64::consts::PI);

    let plus = |w: Complex64| half_line_transform(&f.fhat, w);
    // ∫_{−∞}^0 F̂(−u) e^{−2πuw} du = ∫₀^∞ F̂(u) e^{2πuw} du (even F̂)
    let minus = |w: Complex64| half_line_transform(&f.fhat, -w);
    let rhs = if delta < w1.re {
        plus(w2) - plus(w1)
    } else if delta < w2.re {
        minus(w1) + plus(w2)
    } else {
        minus(w1) - minus(w2)
    };
    Ok((lhs - rhs).norm())
}
