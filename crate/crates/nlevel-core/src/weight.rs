//! The smooth averaging weight over moduli and its Mellin transform.

use crate::quad::adaptive;

/// Smooth bump supported on [1,2]: exp(−1/((x−1)(2−x))) inside, 0 outside.
#[derive(Clone, Copy, Debug, Default)]
pub struct WeightFunction;

/// ∫ of the standard bump (its Mellin transform at 1), to ~1e−13.
pub const MELLIN_AT_ONE: f64 = 0.007_029_858_406_609_656;

impl WeightFunction {
    pub fn eval(&self, x: f64) -> f64 {
        if x <= 1.0 || x >= 2.0 {
            0.0
        } else {
            (-1.0 / ((x - 1.0) * (2.0 - x))).exp()
        }
    }

    /// Mellin transform ∫₀^∞ 𝒲(x) x^{s−1} dx by adaptive quadrature.
    pub fn mellin(&self, s: f64) -> f64 {
        adaptive(&|x| self.eval(x) * x.powf(s - 1.0), 1.0, 2.0, 1e-13)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn support_and_positivity() {
        let w = WeightFunction;
        assert_eq!(w.eval(0.9), 0.0);
        assert_eq!(w.eval(1.0), 0.0);
        assert_eq!(w.eval(2.0), 0.0);
        assert_eq!(w.eval(2.5), 0.0);
        assert!(w.eval(1.5) > 0.0);
        // peak at the midpoint: exp(−4)
        assert_abs_diff_eq!(w.eval(1.5), (-4.0f64).exp(), epsilon = 1e-16);
    }

    #[test]
    fn mellin_at_one_matches_constant() {
        let w = WeightFunction;
        assert_abs_diff_eq!(w.mellin(1.0), MELLIN_AT_ONE, epsilon = 1e-12);
    }

    #[test]
    fn mellin_monotone_in_s() {
        // x ∈ [1,2] so larger s weights larger x values upward
        let w = WeightFunction;
        assert!(w.mellin(2.0) > w.mellin(1.0));
        assert!(w.mellin(0.0) < w.mellin(1.0));
    }
}
