//! The random-matrix side: CUE sampling, distinct-index eigenangle
//! statistics, the exact finite-N determinantal expectation, the sine
//! kernel, and the closed-form large-N prediction assembled from the
//! pairing and orthant-integral pieces.

use itertools::Itertools;
use ndarray::Array2;
use ndarray_linalg::{Determinant, Eig};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::partition::{enumerate_partitions, moebius_from_bottom, sieve_distinct_sum};
use crate::poly::PiecewisePoly;
use crate::prediction::{diagonal_pair_integral, i_integral, pairing_sum};
use crate::quad::{adaptive, adaptive_box};
use crate::testfn::{C4Family, TestFunction};

const TWO_PI: f64 = std::f64::consts::TAU;

#[derive(Clone, Debug, Serialize)]
pub struct EigenangleSample {
    pub matrix_size: usize,
    pub seed: u64,
    /// sorted, in [−π, π)
    pub angles: Vec<f64>,
}

/// Eigenangles of a Haar-distributed unitary: complex Ginibre matrix,
/// modified Gram–Schmidt (whose triangular factor has positive diagonal
/// by construction, so no phase correction is needed), then a dense
/// eigensolve.
pub fn sample_cue(n: usize, seed: u64) -> Result<EigenangleSample, Error> {
    if !(2..=200).contains(&n) {
        return Err(Error::OutOfRange(format!("matrix size {n} outside [2, 200]")));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    sample_cue_with(n, seed, &mut rng)
}

fn sample_cue_with(
    n: usize,
    seed: u64,
    rng: &mut impl Rng,
) -> Result<EigenangleSample, Error> {
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex64::new(re, im)
                })
                .collect()
        })
        .collect();
    for j in 0..n {
        for i in 0..j {
            let proj: Complex64 = (0..n).map(|r| cols[i][r].conj() * cols[j][r]).sum();
            for r in 0..n {
                let sub = proj * cols[i][r];
                cols[j][r] -= sub;
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Domain("degenerate Gaussian draw".into()));
        }
        for r in 0..n {
            cols[j][r] /= norm;
        }
    }
    let u = Array2::from_shape_fn((n, n), |(r, c)| cols[c][r]);
    let (evals, _) = u
        .eig()
        .map_err(|e| Error::Domain(format!("eigensolve failed: {e}")))?;
    let mut angles: Vec<f64> = evals
        .iter()
        .map(|z| {
            let a = z.arg();
            if a >= std::f64::consts::PI {
                a - TWO_PI
            } else {
                a
            }
        })
        .collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(EigenangleSample {
        matrix_size: n,
        seed,
        angles,
    })
}

/// Σ over distinct index n-tuples of f(Nθ_{j₁}/2π, …, Nθ_{j_n}/2π);
/// direct loops for n ≤ 2, Möbius sieving above. Exact; n > N gives 0.
pub fn star_statistic(
    f: &dyn Fn(&[f64]) -> f64,
    sample: &EigenangleSample,
    n: usize,
) -> Result<f64, Error> {
    let big_n = sample.matrix_size;
    if n > big_n {
        return Ok(0.0);
    }
    let scaled: Vec<f64> = sample
        .angles
        .iter()
        .map(|&t| big_n as f64 * t / TWO_PI)
        .collect();
    match n {
        0 => Ok(1.0),
        1 => Ok(scaled.iter().map(|&x| f(&[x])).sum()),
        2 => {
            let mut s = 0.0;
            for (i, &x) in scaled.iter().enumerate() {
                for (j, &y) in scaled.iter().enumerate() {
                    if i != j {
                        s += f(&[x, y]);
                    }
                }
            }
            Ok(s)
        }
        _ => sieve_distinct_sum(n, big_n, |idx: &[usize]| {
            let args: Vec<f64> = idx.iter().map(|&j| scaled[j]).collect();
            f(&args)
        }),
    }
}

/// sin(π(x−y))/(π(x−y)) with the removable value 1 on the diagonal.
pub fn sine_kernel(x: f64, y: f64) -> f64 {
    let d = std::f64::consts::PI * (x - y);
    if d.abs() < 1e-9 {
        1.0 - d * d / 6.0
    } else {
        d.sin() / d
    }
}

/// Determinant of the sine-kernel matrix at the given points.
pub fn w_n(points: &[f64]) -> Result<f64, Error> {
    if points.is_empty() {
        return Err(Error::Domain("need at least one point".into()));
    }
    let n = points.len();
    let m = Array2::from_shape_fn((n, n), |(i, j)| sine_kernel(points[i], points[j]));
    m.det()
        .map_err(|e| Error::Domain(format!("determinant failed: {e}")))
}

/// sin(Nx/2)/sin(x/2), value N at the removable singularities.
#[cfg(test)]
fn s_n(x: f64, big_n: usize) -> f64 {
    let half = 0.5 * x;
    let s = half.sin();
    if s.abs() < 1e-12 {
        big_n as f64 * (half / 2.0 * big_n as f64).cos() // x ≈ 2πk
    } else {
        (big_n as f64 * half).sin() / s
    }
}

/// Exact Haar expectation of the distinct-index statistic at finite N.
/// The determinantal kernel is a projection onto N Fourier modes, so the
/// n-fold window integral collapses to signed products of traces of the
/// Toeplitz matrices B_i[m,m'] = A_i((m−m')/N)/N with
/// A_i(ν) = ∫_{−N/2}^{N/2} f_i(x) cos(2πνx) dx; only those 1-D integrals
/// are quadrature.
pub fn finite_n_density(family: &C4Family, big_n: usize) -> Result<f64, Error> {
    let n = family.n();
    if big_n < n {
        return Err(Error::OutOfRange(format!(
            "matrix size {big_n} below statistic order {n}"
        )));
    }
    family.check_support()?;
    let nf = big_n as f64;
    let toeplitz: Vec<Array2<f64>> = family
        .functions
        .iter()
        .map(|f| {
            let modes: Vec<f64> = (0..big_n)
                .into_par_iter()
                .map(|k| {
                    let nu = k as f64 / nf;
                    2.0 * adaptive(
                        &|x: f64| f.f_eval(x) * (TWO_PI * nu * x).cos(),
                        0.0,
                        nf / 2.0,
                        1e-11,
                    )
                })
                .collect();
            Array2::from_shape_fn((big_n, big_n), |(m, mp)| {
                modes[m.abs_diff(mp)] / nf
            })
        })
        .collect();
    let mut total = 0.0;
    for perm in (0..n).permutations(n) {
        // cycle decomposition; sgn = (−1)^{n − #cycles}
        let mut seen = vec![false; n];
        let mut cycles = 0;
        let mut term = 1.0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut prod = toeplitz[start].clone();
            seen[start] = true;
            let mut j = perm[start];
            while j != start {
                prod = prod.dot(&toeplitz[j]);
                seen[j] = true;
                j = perm[j];
            }
            term *= prod.diag().sum();
        }
        let sgn = if (n - cycles) % 2 == 0 { 1.0 } else { -1.0 };
        total += sgn * term;
    }
    Ok(total)
}

#[derive(Clone, Debug, Serialize)]
pub struct McResult {
    #[serde(rename = "N")]
    pub matrix_size: usize,
    pub n: usize,
    pub samples: usize,
    pub mean: f64,
    pub stderr: f64,
    pub seed: u64,
}

const MC_STREAMS: u64 = 16;

/// Monte Carlo mean of the distinct-index statistic over Haar samples.
/// Independently seeded streams (seed, stream-id), partial sums reduced
/// in stream order — bit-stable for a fixed (seed, stream count).
pub fn monte_carlo_density(
    family: &C4Family,
    big_n: usize,
    samples: usize,
    seed: u64,
) -> Result<McResult, Error> {
    let n = family.n();
    family.check_support()?;
    let fns = family.functions.clone();
    let f = move |x: &[f64]| -> f64 {
        x.iter()
            .enumerate()
            .map(|(i, &xi)| fns[i].f_eval(xi))
            .product()
    };
    let per_stream: Vec<Result<(f64, f64, usize), Error>> = (0..MC_STREAMS)
        .into_par_iter()
        .map(|stream| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            let count =
                samples / MC_STREAMS as usize + usize::from(stream < (samples as u64 % MC_STREAMS));
            let (mut sum, mut sumsq) = (0.0, 0.0);
            for _ in 0..count {
                let sample = sample_cue_with(big_n, seed, &mut rng)?;
                let v = star_statistic(&f, &sample, n)?;
                sum += v;
                sumsq += v * v;
            }
            Ok((sum, sumsq, count))
        })
        .collect();
    let (mut sum, mut sumsq, mut count) = (0.0, 0.0, 0usize);
    for r in per_stream {
        let (s, s2, c) = r?;
        sum += s;
        sumsq += s2;
        count += c;
    }
    let mean = sum / count as f64;
    let var = (sumsq / count as f64 - mean * mean).max(0.0);
    Ok(McResult {
        matrix_size: big_n,
        n,
        samples: count,
        mean,
        stderr: (var / (count as f64 - 1.0)).sqrt(),
        seed,
    })
}

/// Bijection-permanent term over the diagonal pair integrals; 0 unless
/// |S₁| = |S₂|, empty product 1.
pub fn j0_term(s1: &[usize], s2: &[usize], m: &dyn Fn(usize, usize) -> f64) -> f64 {
    pairing_sum(s1, s2, m)
}

/// Σ over splits S₁ = S₁₁+S₁₂, S₂ = S₂₁+S₂₂ with S₁₂, S₂₂ ≠ ∅ of the
/// signed orthant integral times the pairing permanent on the rest.
/// Returns (value, quadrature error estimate).
pub fn j1_term(
    s1: &[usize],
    s2: &[usize],
    transforms: &[PiecewisePoly],
) -> Result<(f64, f64), Error> {
    let vm = |a: usize, b: usize| diagonal_pair_integral(&transforms[a], &transforms[b]);
    let mut total = 0.0;
    let mut err = 0.0;
    let split = |set: &[usize], mask: u32| -> (Vec<usize>, Vec<usize>) {
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
    };
    for mask1 in 1u32..(1 << s1.len()) {
        let (s12, s11) = split(s1, mask1);
        for mask2 in 1u32..(1 << s2.len()) {
            let (s22, s21) = split(s2, mask2);
            if s11.len() != s21.len() {
                continue;
            }
            let perm = pairing_sum(&s11, &s21, &vm);
            if perm == 0.0 {
                continue;
            }
            let sign = if (s12.len() + s22.len()) % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            let (ival, ierr) = i_integral(&s12, &s22, transforms)?;
            total += sign * ival * perm;
            err += ierr * perm.abs();
        }
    }
    Ok((total, err))
}

fn assign_three(items: &[usize]) -> Vec<[Vec<usize>; 3]> {
    // recursive ternary assignment (deliberately not the iterator used on
    // the number-theory side, so the two assemblies stay independent)
    if items.is_empty() {
        return vec![[vec![], vec![], vec![]]];
    }
    let mut out = vec![];
    let head = items[0];
    for rest in assign_three(&items[1..]) {
        for slot in 0..3 {
            let mut next = rest.clone();
            next[slot].insert(0, head);
            out.push(next);
        }
    }
    out
}

/// Large-N limit of the normalized CUE statistic, assembled over the
/// partition lattice from the J₀/J₁ closed forms. Returns (value, error
/// estimate); agrees with the number-theoretic limit evaluator.
pub fn rmt_prediction(family: &C4Family) -> Result<(f64, f64), Error> {
    family.check_support()?;
    let n = family.n();
    let mut total = 0.0;
    let mut err = 0.0;
    for g in enumerate_partitions(n)? {
        let mu = moebius_from_bottom(&g) as f64;
        let transforms: Vec<PiecewisePoly> = g
            .blocks()
            .iter()
            .map(|b| Ok(family.product_for_block(b)?.fhat))
            .collect::<Result<_, Error>>()?;
        let vm = |a: usize, b: usize| diagonal_pair_integral(&transforms[a], &transforms[b]);
        let labels: Vec<usize> = (0..g.nu()).collect();
        let mut r_value = 0.0;
        for [s1, s2, s3] in assign_three(&labels) {
            let spectator: f64 = s3.iter().map(|&l| transforms[l].eval(0.0)).product();
            if spectator == 0.0 {
                continue;
            }
            let j0 = j0_term(&s1, &s2, &vm);
            let (j1, j1err) = j1_term(&s1, &s2, &transforms)?;
            r_value += spectator * (j0 + j1);
            err += mu.abs() * spectator.abs() * j1err;
        }
        total += mu * r_value;
    }
    Ok((total, err))
}

/// Finite-N contour evaluation of the singleton off-diagonal term: a 2-D
/// vertical-line integral of F_a F_b against
/// e^{N(z_α−z_β)} / ((1−e^{z_α−z_β})(1−e^{z_β−z_α})), with the contours
/// offset by ∓δ = ∓c/N. Converges to the closed-form singleton value at
/// rate O(1/N).
pub fn j1_singleton_finite_n(
    fa: &TestFunction,
    fb: &TestFunction,
    big_n: usize,
    c: f64,
    half_width: f64,
) -> f64 {
    let nf = big_n as f64;
    let integrand = |x: &[f64]| -> f64 {
        // z_α = −c/N + 2πi x_a/N on the left line, z_β mirrored right
        let arg_a = Complex64::new(-x[0], -c / TWO_PI);
        let arg_b = Complex64::new(-x[1], c / TWO_PI);
        let d = Complex64::new(-2.0 * c / nf, TWO_PI * (x[0] - x[1]) / nf);
        let kernel = (nf * d).exp() / ((1.0 - d.exp()) * (1.0 - (-d).exp()));
        (fa.f_eval_complex(arg_a) * fb.f_eval_complex(arg_b) * kernel).re
    };
    adaptive_box(
        &integrand,
        &[-half_width, -half_width],
        &[half_width, half_width],
        1e-5,
    ) / (nf * nf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::brute_distinct_sum;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cue_sample_basic() {
        let s = sample_cue(12, 7).unwrap();
        assert_eq!(s.angles.len(), 12);
        assert!(s.angles.windows(2).all(|w| w[0] <= w[1]));
        assert!(s
            .angles
            .iter()
            .all(|&t| (-std::f64::consts::PI..std::f64::consts::PI).contains(&t)));
        let again = sample_cue(12, 7).unwrap();
        assert_eq!(s.angles, again.angles);
        assert_ne!(s.angles, sample_cue(12, 8).unwrap().angles);
        assert!(sample_cue(1, 0).is_err());
        assert!(sample_cue(201, 0).is_err());
    }

    #[test]
    fn cue_spectral_density_uniform() {
        // 20-bin histogram of eigenangles vs the flat density, 3σ per bin
        let n = 8;
        let samples = 20_000;
        let bins = 20;
        let mut counts = vec![0.0f64; bins];
        let mut sq = vec![0.0f64; bins];
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        for _ in 0..samples {
            let s = sample_cue_with(n, 42, &mut rng).unwrap();
            let mut c = vec![0.0; bins];
            for &t in &s.angles {
                let b = (((t + std::f64::consts::PI) / TWO_PI * bins as f64) as usize).min(bins - 1);
                c[b] += 1.0;
            }
            for b in 0..bins {
                counts[b] += c[b];
                sq[b] += c[b] * c[b];
            }
        }
        let expect = n as f64 / bins as f64;
        for b in 0..bins {
            let mean = counts[b] / samples as f64;
            let var = sq[b] / samples as f64 - mean * mean;
            let stderr = (var / samples as f64).sqrt();
            assert!(
                (mean - expect).abs() < 3.0 * stderr,
                "bin {b}: {mean} vs {expect} ± {stderr}"
            );
        }
    }

    #[test]
    fn star_counts() {
        let s = sample_cue(15, 3).unwrap();
        let one = |_: &[f64]| 1.0;
        assert_abs_diff_eq!(star_statistic(&one, &s, 1).unwrap(), 15.0, epsilon = 1e-9);
        assert_abs_diff_eq!(
            star_statistic(&one, &s, 2).unwrap(),
            15.0 * 14.0,
            epsilon = 1e-8
        );
        assert_eq!(star_statistic(&one, &s, 16).unwrap(), 0.0);
    }

    #[test]
    fn star_sieve_matches_brute_triple() {
        let s = sample_cue(9, 11).unwrap();
        let f = |x: &[f64]| (-(x[0] * x[0])).exp() * (1.0 + x[1]).cos() * x[2].sin();
        let sieved = star_statistic(&f, &s, 3).unwrap();
        let scaled: Vec<f64> = s.angles.iter().map(|&t| 9.0 * t / TWO_PI).collect();
        let brute = brute_distinct_sum(3, 9, |idx| {
            f(&[scaled[idx[0]], scaled[idx[1]], scaled[idx[2]]])
        });
        assert_abs_diff_eq!(sieved, brute, epsilon = 1e-10);
    }

    #[test]
    fn sine_kernel_determinant() {
        assert_eq!(w_n(&[0.3]).unwrap(), 1.0);
        assert!(w_n(&[0.4, 0.4]).unwrap().abs() < 1e-12);
        let gap = w_n(&[0.0, 0.5]).unwrap();
        assert_abs_diff_eq!(
            gap,
            1.0 - 4.0 / (std::f64::consts::PI * std::f64::consts::PI),
            epsilon = 1e-12
        );
        // symmetry under argument permutation
        let a = w_n(&[0.1, 0.7, -0.4]).unwrap();
        let b = w_n(&[0.7, -0.4, 0.1]).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-12);
    }

    #[test]
    fn finite_n_level_one() {
        let f = TestFunction::hat(1.0).unwrap();
        let fam = C4Family::new(vec![f.clone()]).unwrap();
        let big_n = 14;
        let v = finite_n_density(&fam, big_n).unwrap();
        let direct = adaptive(&|x: f64| f.f_eval(x), -7.0, 7.0, 1e-12);
        assert_abs_diff_eq!(v, direct, epsilon = 1e-9);
    }

    #[test]
    fn finite_n_level_two_vs_quadrature() {
        let f = TestFunction::hat(0.8).unwrap();
        let fam = C4Family::new(vec![f.clone(), f.clone()]).unwrap();
        let big_n = 6;
        let v = finite_n_density(&fam, big_n).unwrap();
        let nf = big_n as f64;
        let direct = adaptive_box(
            &|x: &[f64]| {
                let det = nf * nf - {
                    let s = s_n(TWO_PI * (x[0] - x[1]) / nf, big_n);
                    s * s
                };
                f.f_eval(x[0]) * f.f_eval(x[1]) * det / (nf * nf)
            },
            &[-nf / 2.0, -nf / 2.0],
            &[nf / 2.0, nf / 2.0],
            1e-8,
        );
        assert_abs_diff_eq!(v, direct, epsilon = 1e-6);
    }

    #[test]
    fn finite_n_trend_to_limit() {
        let f = TestFunction::hat(1.2).unwrap();
        let fam = C4Family::new(vec![f.clone(), f.clone()]).unwrap();
        let limit = crate::prediction::main_term(&fam).unwrap().total;
        let gaps: Vec<f64> = [10usize, 20, 40]
            .iter()
            .map(|&n| (finite_n_density(&fam, n).unwrap() - limit).abs())
            .collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
    }

    #[test]
    fn mc_agrees_with_finite_n() {
        for (n_stat, big_n, samples) in [(1usize, 10usize, 4000usize), (2, 10, 8000)] {
            let f = TestFunction::hat(0.9).unwrap();
            let fam = C4Family::new(vec![f; n_stat]).unwrap();
            let exact = finite_n_density(&fam, big_n).unwrap();
            let mc = monte_carlo_density(&fam, big_n, samples, 2024).unwrap();
            assert!(
                (mc.mean - exact).abs() < 3.0 * mc.stderr,
                "n={n_stat}: {} vs {exact} ± {}",
                mc.mean,
                mc.stderr
            );
        }
    }

    #[test]
    fn mc_stream_stability() {
        let f = TestFunction::hat(0.9).unwrap();
        let fam = C4Family::new(vec![f]).unwrap();
        let a = monte_carlo_density(&fam, 8, 500, 5).unwrap();
        let b = monte_carlo_density(&fam, 8, 500, 5).unwrap();
        assert_eq!(a.mean, b.mean);
        assert_eq!(a.stderr, b.stderr);
    }

    #[test]
    fn j0_values() {
        let f = TestFunction::hat(1.0).unwrap();
        let v = |_: usize, _: usize| diagonal_pair_integral(&f.fhat, &f.fhat);
        assert_eq!(j0_term(&[], &[], &v), 1.0);
        assert_eq!(j0_term(&[0], &[], &v), 0.0);
        assert_abs_diff_eq!(j0_term(&[0], &[1], &v), 1.0 / 12.0, epsilon = 1e-12);
    }

    #[test]
    fn j1_singleton_closed_form() {
        let f = TestFunction::hat(2.0).unwrap();
        let transforms = vec![f.fhat.clone(), f.fhat.clone()];
        let (v, e) = j1_term(&[0], &[1], &transforms).unwrap();
        assert_abs_diff_eq!(v, -1.0 / 48.0, epsilon = 1e-7 + e);
        // supports too small: 𝓘 vanishes
        let g = TestFunction::hat(0.45).unwrap();
        let small = vec![g.fhat.clone(), g.fhat.clone()];
        assert_eq!(j1_term(&[0], &[1], &small).unwrap().0, 0.0);
    }

    #[test]
    fn j1_finite_n_contour_check() {
        let f = TestFunction::hat(2.0).unwrap();
        let finite = j1_singleton_finite_n(&f, &f, 40, 0.5, 25.0);
        assert!(
            (finite - (-1.0 / 48.0)).abs() < 2.5 / 40.0,
            "finite-N {finite} vs {}",
            -1.0 / 48.0
        );
    }

    #[test]
    fn prediction_level_one() {
        let f = TestFunction::hat(1.7).unwrap();
        let fam = C4Family::new(vec![f.clone()]).unwrap();
        let (v, _) = rmt_prediction(&fam).unwrap();
        assert_abs_diff_eq!(v, f.fhat_eval(0.0), epsilon = 1e-10);
    }

    #[test]
    fn prediction_level_two_vs_limit_density() {
        // small supports: only the diagonal survives, and ∫∫ f W⁽²⁾
        // reduces to the triangle formula, quadrature-evaluated here
        let f = TestFunction::hat(0.8).unwrap();
        let fam = C4Family::new(vec![f.clone(), f.clone()]).unwrap();
        let (v, _) = rmt_prediction(&fam).unwrap();
        let f0 = f.fhat_eval(0.0);
        let cross = adaptive(
            &|u: f64| f.fhat_eval(u) * f.fhat_eval(-u) * (1.0 - u.abs()).max(0.0),
            -1.0,
            1.0,
            1e-10,
        );
        assert_abs_diff_eq!(v, f0 * f0 - cross, epsilon = 1e-4);
    }

    #[test]
    fn prediction_matches_main_term_off_diagonal() {
        let f = TestFunction::hat(1.9).unwrap();
        let fam = C4Family::new(vec![f.clone(), f.clone()]).unwrap();
        let (v, e) = rmt_prediction(&fam).unwrap();
        let report = crate::prediction::main_term(&fam).unwrap();
        let tol = (1e-3 * report.total.abs()).max(e + report.error_estimate);
        assert!(
            (v - report.total).abs() <= tol,
            "{v} vs {} (tol {tol})",
            report.total
        );
    }
}
