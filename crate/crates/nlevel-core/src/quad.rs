//! Quadrature: Gauss–Legendre and Gauss–Hermite rules, adaptive 1-D
//! integration, and a scrambled-Halton quasi-Monte Carlo driver for
//! higher-dimensional boxes.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

/// Gauss–Legendre nodes/weights on [-1, 1], by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P'_n(x).
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Gauss–Legendre on [a, b].
pub fn gauss_legendre_ab(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let c = 0.5 * (b - a);
    let m = 0.5 * (a + b);
    (
        x.iter().map(|&t| m + c * t).collect(),
        w.iter().map(|&v| v * c).collect(),
    )
}

/// Gauss–Hermite nodes/weights for weight e^{-t^2} on the whole line.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let m = (n + 1) / 2;
    let mut x = 0.0_f64;
    for i in 0..m {
        // Initial guesses (Numerical Recipes style).
        x = if i == 0 {
            ((2 * n + 1) as f64).sqrt() - 1.85575 * ((2 * n + 1) as f64).powf(-1.0 / 6.0)
        } else if i == 1 {
            x - 1.14 * (n as f64).powf(0.426) / x
        } else if i == 2 {
            1.86 * x - 0.86 * nodes[0]
        } else if i == 3 {
            1.91 * x - 0.91 * nodes[1]
        } else {
            2.0 * x - nodes[i - 2]
        };
        let mut pp = 0.0;
        for _ in 0..200 {
            // Orthonormal Hermite recurrence.
            let mut p1 = 1.0 / sqrt_pi.sqrt();
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = x * (2.0 / (j as f64 + 1.0)).sqrt() * p2
                    - (j as f64 / (j as f64 + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * n as f64).sqrt() * p2;
            let dx = p1 / pp;
            x -= dx;
            if dx.abs() < 1e-14 {
                break;
            }
        }
        nodes[i] = x;
        nodes[n - 1 - i] = -x;
        weights[i] = 2.0 / (pp * pp);
        weights[n - 1 - i] = weights[i];
    }
    // nodes currently descending in the first half; sort ascending.
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| nodes[a].partial_cmp(&nodes[b]).unwrap());
    let nodes_s: Vec<f64> = idx.iter().map(|&i| nodes[i]).collect();
    let weights_s: Vec<f64> = idx.iter().map(|&i| weights[i]).collect();
    (nodes_s, weights_s)
}

/// Adaptive quadrature on [a, b]: GL(15) panels with bisection until the
/// GL(15)/GL(7) discrepancy is below tolerance.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn panel<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        tol: f64,
        depth: u32,
        x7: &([f64; 7], [f64; 7]),
        x15: &([f64; 15], [f64; 15]),
    ) -> f64 {
        let c = 0.5 * (b - a);
        let m = 0.5 * (a + b);
        let mut s7 = 0.0;
        for i in 0..7 {
            s7 += x7.1[i] * f(m + c * x7.0[i]);
        }
        s7 *= c;
        let mut s15 = 0.0;
        for i in 0..15 {
            s15 += x15.1[i] * f(m + c * x15.0[i]);
        }
        s15 *= c;
        if depth >= 48 || (s15 - s7).abs() <= tol {
            return s15;
        }
        panel(f, a, m, tol * 0.5, depth + 1, x7, x15)
            + panel(f, m, b, tol * 0.5, depth + 1, x7, x15)
    }
    if a >= b {
        return 0.0;
    }
    let (n7, w7) = gauss_legendre(7);
    let (n15, w15) = gauss_legendre(15);
    let x7 = (
        <[f64; 7]>::try_from(n7).unwrap(),
        <[f64; 7]>::try_from(w7).unwrap(),
    );
    let x15 = (
        <[f64; 15]>::try_from(n15).unwrap(),
        <[f64; 15]>::try_from(w15).unwrap(),
    );
    panel(f, a, b, tol, 0, &x7, &x15)
}

/// Nested adaptive integration over a box, recursing one axis at a time.
pub fn adaptive_box<F: Fn(&[f64]) -> f64 + Sync>(
    f: &F,
    lo: &[f64],
    hi: &[f64],
    tol: f64,
) -> f64 {
    fn rec<F: Fn(&[f64]) -> f64>(
        f: &F,
        lo: &[f64],
        hi: &[f64],
        point: &mut Vec<f64>,
        axis: usize,
        tol: f64,
    ) -> f64 {
        if axis == lo.len() {
            return f(point);
        }
        let g = |x: f64, point: &mut Vec<f64>| {
            point.push(x);
            let v = rec(f, lo, hi, point, axis + 1, tol * 0.5);
            point.pop();
            v
        };
        // adaptive() needs Fn, so wrap via RefCell-free re-entry: inline
        // a small adaptive loop here instead.
        adaptive_inner(&mut |x| g(x, point), lo[axis], hi[axis], tol)
    }
    let mut point = vec![];
    rec(f, lo, hi, &mut point, 0, tol)
}

/// Adaptive GL(15/7) accepting FnMut (used by the nested box driver).
fn adaptive_inner<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, tol: f64) -> f64 {
    if a >= b {
        return 0.0;
    }
    let (n7, w7) = gauss_legendre(7);
    let (n15, w15) = gauss_legendre(15);
    // Explicit work stack to allow FnMut.
    let mut total = 0.0;
    let mut stack = vec![(a, b, tol, 0u32)];
    while let Some((a, b, tol, depth)) = stack.pop() {
        let c = 0.5 * (b - a);
        let m = 0.5 * (a + b);
        let mut s7 = 0.0;
        for i in 0..7 {
            s7 += w7[i] * f(m + c * n7[i]);
        }
        s7 *= c;
        let mut s15 = 0.0;
        for i in 0..15 {
            s15 += w15[i] * f(m + c * n15[i]);
        }
        s15 *= c;
        if depth >= 40 || (s15 - s7).abs() <= tol {
            total += s15;
        } else {
            stack.push((a, m, tol * 0.5, depth + 1));
            stack.push((m, b, tol * 0.5, depth + 1));
        }
    }
    total
}

/// Scrambled Halton sequence over the unit cube, with random digit
/// permutations per base (seeded).
pub struct ScrambledHalton {
    bases: Vec<u64>,
    perms: Vec<Vec<u64>>,
    index: u64,
}

const SMALL_PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

impl ScrambledHalton {
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim <= SMALL_PRIMES.len());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bases: Vec<u64> = SMALL_PRIMES[..dim].to_vec();
        let perms = bases
            .iter()
            .map(|&b| {
                let mut p: Vec<u64> = (0..b).collect();
                // Fisher–Yates keeping 0 fixed so 0 maps to 0.
                for i in (2..b as usize).rev() {
                    let j = rng.gen_range(1..=i);
                    p.swap(i, j);
                }
                p
            })
            .collect();
        ScrambledHalton {
            bases,
            perms,
            index: 1,
        }
    }

    pub fn next_point(&mut self) -> Vec<f64> {
        let i = self.index;
        self.index += 1;
        self.bases
            .iter()
            .zip(&self.perms)
            .map(|(&b, perm)| {
                let mut n = i;
                let mut denom = 1.0;
                let mut x = 0.0;
                while n > 0 {
                    denom *= b as f64;
                    x += perm[(n % b) as usize] as f64 / denom;
                    n /= b;
                }
                x
            })
            .collect()
    }
}

/// QMC mean-value integral over a box.
pub fn qmc_box<F: Fn(&[f64]) -> f64>(f: &F, lo: &[f64], hi: &[f64], points: usize, seed: u64) -> f64 {
    let dim = lo.len();
    let vol: f64 = lo.iter().zip(hi).map(|(&a, &b)| b - a).product();
    let mut seq = ScrambledHalton::new(dim, seed);
    let mut acc = 0.0;
    let mut x = vec![0.0; dim];
    for _ in 0..points {
        let u = seq.next_point();
        for d in 0..dim {
            x[d] = lo[d] + (hi[d] - lo[d]) * u[d];
        }
        acc += f(&x);
    }
    acc * vol / points as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gl_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre_ab(8, 0.0, 2.0);
        // degree 15 exact: ∫_0^2 x^10 dx = 2^11/11
        let s: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi.powi(10)).sum();
        assert_abs_diff_eq!(s, 2048.0 / 11.0, epsilon = 1e-10);
    }

    #[test]
    fn gh_matches_gaussian_moments() {
        let (x, w) = gauss_hermite(40);
        let s0: f64 = w.iter().sum();
        assert_abs_diff_eq!(s0, std::f64::consts::PI.sqrt(), epsilon = 1e-12);
        let s2: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi * xi).sum();
        assert_abs_diff_eq!(s2, 0.5 * std::f64::consts::PI.sqrt(), epsilon = 1e-11);
        // characteristic function: ∫ e^{-t^2} cos(2t) dt = √π e^{-1}
        let sc: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * (2.0 * xi).cos()).sum();
        assert_abs_diff_eq!(
            sc,
            std::f64::consts::PI.sqrt() * (-1.0f64).exp(),
            epsilon = 1e-11
        );
    }

    #[test]
    fn adaptive_handles_kinks() {
        let f = |x: f64| (x - 0.3).abs().sqrt();
        let v = adaptive(&f, 0.0, 1.0, 1e-10);
        let exact = 2.0 / 3.0 * (0.3f64.powf(1.5) + 0.7f64.powf(1.5));
        assert_abs_diff_eq!(v, exact, epsilon = 1e-8);
    }

    #[test]
    fn box_integration_2d() {
        let f = |p: &[f64]| (p[0] + 2.0 * p[1]).sin();
        let v = adaptive_box(&f, &[0.0, 0.0], &[1.0, 1.0], 1e-10);
        // ∫_0^1∫_0^1 sin(x+2y) dy dx = (sin 1 − sin 3 + sin 2)/2
        let exact = 0.5 * ((1.0f64).sin() - (3.0f64).sin() + (2.0f64).sin());
        assert_abs_diff_eq!(v, exact, epsilon = 1e-8);
    }

    #[test]
    fn qmc_converges_on_smooth_integrand() {
        let f = |p: &[f64]| p.iter().map(|&x| x * x).sum::<f64>();
        let v = qmc_box(&f, &[0.0; 4], &[1.0; 4], 1 << 16, 7);
        assert_abs_diff_eq!(v, 4.0 / 3.0, epsilon = 2e-3);
    }
}
