//! Randomized invariant checks across the library surface.

use nlevel_core::ntstat::{gaussian_fourier_moment, l1_statistic, DirectZeroSource};
use nlevel_core::partition::{brute_distinct_sum, sieve_distinct_sum};
use nlevel_core::prediction::{pairing_sum, pairing_sum_brute};
use nlevel_core::rmt::w_n;
use nlevel_core::testfn::{C4Family, TestFunction};
use nlevel_core::weight::WeightFunction;
use proptest::prelude::*;

proptest! {
    #[test]
    fn test_function_even_and_supported(eta in 0.2f64..3.8, x in -6.0f64..6.0) {
        let f = TestFunction::hat(eta).unwrap();
        prop_assert!((f.f_eval(x) - f.f_eval(-x)).abs() < 1e-12);
        prop_assert!((f.fhat_eval(x) - f.fhat_eval(-x)).abs() < 1e-12);
        if x.abs() > eta {
            prop_assert_eq!(f.fhat_eval(x), 0.0);
        }
    }

    #[test]
    fn bspline_transform_nonnegative(eta in 0.2f64..3.8, m in 2u32..7, u in -4.0f64..4.0) {
        let f = TestFunction::bspline(eta, m).unwrap();
        prop_assert!(f.fhat_eval(u) >= -1e-14);
        prop_assert!((f.fhat_eval(u) - f.fhat_eval(-u)).abs() < 1e-12);
    }

    #[test]
    fn sieve_equals_brute(
        n in 1usize..4,
        range in 1usize..6,
        values in proptest::collection::vec(-1.0f64..1.0, 6),
    ) {
        let g = |idx: &[usize]| -> f64 {
            idx.iter().enumerate().map(|(i, &j)| values[j] + i as f64 * 0.1).product()
        };
        let sieved = sieve_distinct_sum(n, range, g).unwrap();
        let brute = brute_distinct_sum(n, range, g);
        prop_assert!((sieved - brute).abs() < 1e-9, "{} vs {}", sieved, brute);
    }

    #[test]
    fn pairing_equals_brute(
        k in 0usize..4,
        r in 0usize..4,
        values in proptest::collection::vec(-1.0f64..1.0, 16),
    ) {
        let s1: Vec<usize> = (0..k).collect();
        let s2: Vec<usize> = (0..r).collect();
        let m = |a: usize, b: usize| values[4 * a + b];
        prop_assert!((pairing_sum(&s1, &s2, &m) - pairing_sum_brute(&s1, &s2, &m)).abs() < 1e-12);
    }

    #[test]
    fn sine_determinant_permutation_invariant(
        mut pts in proptest::collection::vec(-3.0f64..3.0, 2..5),
        rot in 0usize..4,
    ) {
        let a = w_n(&pts).unwrap();
        let len = pts.len();
        pts.rotate_left(rot % len);
        pts.swap(0, len - 1);
        let b = w_n(&pts).unwrap();
        prop_assert!((a - b).abs() < 1e-10, "{} vs {}", a, b);
    }

    #[test]
    fn gaussian_moment_parity(j in 0u32..13, xi in -3.0f64..3.0) {
        let v = gaussian_fourier_moment(j, xi).unwrap();
        if j % 2 == 0 {
            prop_assert_eq!(v.im, 0.0);
        } else {
            prop_assert_eq!(v.re, 0.0);
        }
        // conjugation: ξ → −ξ conjugates the integral
        let w = gaussian_fourier_moment(j, -xi).unwrap();
        prop_assert!((w.re - v.re).abs() < 1e-12 && (w.im + v.im).abs() < 1e-12);
    }
}

/// Doubling the Gauss–Hermite order moves the averaged statistic by less
/// than 1e−8: the t-integrand is entire and the rule converges
/// geometrically.
#[test]
fn gauss_hermite_order_doubling() {
    let fam = C4Family::new(vec![TestFunction::hat(0.6).unwrap()]).unwrap();
    let w = WeightFunction;
    let a = l1_statistic(&fam, &w, 5.0, &DirectZeroSource, 25.0, 40).unwrap();
    let b = l1_statistic(&fam, &w, 5.0, &DirectZeroSource, 25.0, 80).unwrap();
    assert!((a.value - b.value).abs() < 1e-8, "{} vs {}", a.value, b.value);
}
