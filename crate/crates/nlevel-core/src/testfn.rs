//! Even test functions with compactly supported Fourier transforms
//! (convention f̂(u) = ∫ f(x) e^{2πixu} dx): the Fejér "hat" family and
//! B-spline sinc-power families, block products, and the total-support
//! budget check.

use num_complex::Complex64;

use crate::error::Error;
use crate::poly::{Poly, PiecewisePoly};

#[derive(Clone, Debug, PartialEq)]
pub enum Kind {
    Hat,
    Bspline(u32),
}

/// A single admissible test function f with f̂ supported in [−η, η].
#[derive(Clone, Debug)]
pub struct TestFunction {
    pub kind: Kind,
    pub eta: f64,
    pub fhat: PiecewisePoly,
    /// normalization constant multiplying the sinc-power closed form of f
    norm: f64,
}

/// sin(a x)/x, stable near x = 0.
fn sinc_scaled(a: f64, x: f64) -> f64 {
    if x.abs() < 1e-5 {
        let ax = a * x;
        a * (1.0 - ax * ax / 6.0 + ax * ax * ax * ax / 120.0)
    } else {
        (a * x).sin() / x
    }
}

fn sinc_scaled_complex(a: f64, x: Complex64) -> Complex64 {
    if x.norm() < 1e-5 {
        let ax = x * a;
        (Complex64::new(1.0, 0.0) - ax * ax / 6.0 + ax * ax * ax * ax / 120.0) * a
    } else {
        (x * a).sin() / x
    }
}

impl TestFunction {
    /// Fejér kernel: f̂(u) = max(0, 1 − |u|/η), f(x) = η (sin(πηx)/(πηx))².
    pub fn hat(eta: f64) -> Result<Self, Error> {
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(Error::InvalidTestFunction(format!(
                "hat support half-width must be positive, got {eta}"
            )));
        }
        let fhat = PiecewisePoly::new(
            vec![-eta, 0.0, eta],
            vec![
                Poly(vec![1.0, 1.0 / eta]),
                Poly(vec![1.0, -1.0 / eta]),
            ],
        );
        Ok(TestFunction {
            kind: Kind::Hat,
            eta,
            fhat,
            norm: 1.0 / (std::f64::consts::PI * std::f64::consts::PI * eta),
        })
    }

    /// m-fold self-convolution of the box on [−η/m, η/m], normalized so
    /// f̂(0) = 1; f(x) = c·(sin(2π(η/m)x)/(πx))^m. m=2 is the hat of
    /// width η up to normalization.
    pub fn bspline(eta: f64, m: u32) -> Result<Self, Error> {
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(Error::InvalidTestFunction(format!(
                "bspline support half-width must be positive, got {eta}"
            )));
        }
        if !(2..=6).contains(&m) {
            return Err(Error::InvalidTestFunction(format!(
                "bspline order must lie in [2,6], got {m}"
            )));
        }
        let w = eta / m as f64;
        let boxfn = PiecewisePoly::new(vec![-w, w], vec![Poly::constant(1.0)]);
        let mut conv = boxfn.clone();
        for _ in 1..m {
            conv = conv.convolve(&boxfn);
        }
        let peak = conv.eval(0.0);
        let fhat = PiecewisePoly::new(
            conv.breaks.clone(),
            conv.pieces.iter().map(|p| p.scale(1.0 / peak)).collect(),
        );
        Ok(TestFunction {
            kind: Kind::Bspline(m),
            eta,
            fhat,
            norm: 1.0 / (peak * std::f64::consts::PI.powi(m as i32)),
        })
    }

    /// Parse a catalogue spec: "hat:ETA" or "bspline:ETA:M".
    pub fn from_spec(spec: &str) -> Result<Self, Error> {
        let parts: Vec<&str> = spec.split(':').collect();
        let bad = |m: &str| Error::InvalidTestFunction(format!("spec '{spec}': {m}"));
        match parts.as_slice() {
            ["hat", eta] => {
                TestFunction::hat(eta.parse().map_err(|_| bad("bad eta"))?)
            }
            ["bspline", eta, m] => TestFunction::bspline(
                eta.parse().map_err(|_| bad("bad eta"))?,
                m.parse().map_err(|_| bad("bad order"))?,
            ),
            _ => Err(bad("expected 'hat:ETA' or 'bspline:ETA:M'")),
        }
    }

    pub fn spec_string(&self) -> String {
        match self.kind {
            Kind::Hat => format!("hat:{}", self.eta),
            Kind::Bspline(m) => format!("bspline:{}:{}", self.eta, m),
        }
    }

    pub fn fhat_eval(&self, u: f64) -> f64 {
        self.fhat.eval(u)
    }

    /// Envelope constant c with |f(x)| ≤ c/x² for |x| ≥ 1.
    pub fn decay_coeff(&self) -> f64 {
        self.norm
    }

    /// Spatial side in closed form.
    pub fn f_eval(&self, x: f64) -> f64 {
        match self.kind {
            Kind::Hat => {
                let s = sinc_scaled(std::f64::consts::PI * self.eta, x);
                self.norm * s * s
            }
            Kind::Bspline(m) => {
                let w = self.eta / m as f64;
                let s = sinc_scaled(2.0 * std::f64::consts::PI * w, x);
                self.norm * s.powi(m as i32)
            }
        }
    }

    /// Analytic continuation of f to complex arguments (entire function).
    pub fn f_eval_complex(&self, x: Complex64) -> Complex64 {
        match self.kind {
            Kind::Hat => {
                let s = sinc_scaled_complex(std::f64::consts::PI * self.eta, x);
                s * s * self.norm
            }
            Kind::Bspline(m) => {
                let w = self.eta / m as f64;
                let s = sinc_scaled_complex(2.0 * std::f64::consts::PI * w, x);
                s.powi(m as i32) * self.norm
            }
        }
    }
}

/// Product F_ℓ = ∏_{i∈block} f_i with convolved transform, support
/// [−κ, κ], κ = Σ η_i.
#[derive(Clone, Debug)]
pub struct ProductTestFunction {
    pub factors: Vec<TestFunction>,
    pub kappa: f64,
    pub fhat: PiecewisePoly,
}

impl ProductTestFunction {
    pub fn new(factors: Vec<TestFunction>) -> Result<Self, Error> {
        if factors.is_empty() {
            return Err(Error::InvalidTestFunction(
                "product over an empty block".into(),
            ));
        }
        let kappa = factors.iter().map(|f| f.eta).sum();
        let mut fhat = factors[0].fhat.clone();
        for f in &factors[1..] {
            fhat = fhat.convolve(&f.fhat);
        }
        Ok(ProductTestFunction {
            factors,
            kappa,
            fhat,
        })
    }

    pub fn fhat_eval(&self, u: f64) -> f64 {
        self.fhat.eval(u)
    }

    pub fn f_eval(&self, x: f64) -> f64 {
        self.factors.iter().map(|f| f.f_eval(x)).product()
    }

    pub fn f_eval_complex(&self, x: Complex64) -> Complex64 {
        self.factors
            .iter()
            .map(|f| f.f_eval_complex(x))
            .product()
    }
}

/// Family f = ∏ f_i(x_i) subject to the total-support budget Σηᵢ < 4.
#[derive(Clone, Debug)]
pub struct C4Family {
    pub functions: Vec<TestFunction>,
}

#[derive(Clone, Debug)]
pub struct SupportBudget {
    pub eta_total: f64,
    pub epsilon: f64,
}

impl C4Family {
    pub fn new(functions: Vec<TestFunction>) -> Result<Self, Error> {
        let fam = C4Family { functions };
        fam.check_support()?;
        Ok(fam)
    }

    pub fn from_specs(specs: &[String]) -> Result<Self, Error> {
        C4Family::new(
            specs
                .iter()
                .map(|s| TestFunction::from_spec(s))
                .collect::<Result<_, _>>()?,
        )
    }

    pub fn n(&self) -> usize {
        self.functions.len()
    }

    /// Total-support budget: passes iff Σ η_i < 4 (empty family passes).
    pub fn check_support(&self) -> Result<SupportBudget, Error> {
        let eta_total: f64 = self.functions.iter().map(|f| f.eta).sum();
        if eta_total >= 4.0 {
            return Err(Error::SupportBudget { total: eta_total });
        }
        Ok(SupportBudget {
            eta_total,
            epsilon: 4.0 - eta_total,
        })
    }

    /// F_ℓ for a block of indices (0-based).
    pub fn product_for_block(&self, block: &[usize]) -> Result<ProductTestFunction, Error> {
        if block.is_empty() {
            return Err(Error::InvalidTestFunction("empty block".into()));
        }
        for &i in block {
            if i >= self.functions.len() {
                return Err(Error::InvalidTestFunction(format!(
                    "block index {i} out of range"
                )));
            }
        }
        ProductTestFunction::new(block.iter().map(|&i| self.functions[i].clone()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::adaptive;
    use approx::assert_abs_diff_eq;

    #[test]
    fn hat_pointwise_values() {
        let h = TestFunction::hat(1.5).unwrap();
        assert_abs_diff_eq!(h.fhat_eval(0.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(h.fhat_eval(1.5), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(h.fhat_eval(-0.75), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(h.f_eval(0.0), 1.5, epsilon = 1e-12);
        assert!(TestFunction::hat(-1.0).is_err());
        assert!(TestFunction::hat(0.0).is_err());
    }

    #[test]
    fn fourier_inversion_on_grid() {
        // f(x) = ∫ f̂(u) e^{-2πiux} du; both even and real, so cos suffices.
        for tf in [
            TestFunction::hat(1.0).unwrap(),
            TestFunction::hat(0.4).unwrap(),
            TestFunction::bspline(1.5, 3).unwrap(),
            TestFunction::bspline(2.0, 6).unwrap(),
        ] {
            for k in 0..40 {
                let x = -10.0 + 20.0 * (k as f64) / 39.0;
                let num = adaptive(
                    &|u: f64| tf.fhat_eval(u) * (2.0 * std::f64::consts::PI * u * x).cos(),
                    -tf.eta,
                    tf.eta,
                    1e-12,
                );
                assert!(
                    (num - tf.f_eval(x)).abs() < 1e-8,
                    "{:?} at x={x}: {num} vs {}",
                    tf.kind,
                    tf.f_eval(x)
                );
            }
        }
    }

    #[test]
    fn bspline_m2_is_hat() {
        let b = TestFunction::bspline(1.2, 2).unwrap();
        let h = TestFunction::hat(1.2).unwrap();
        for u in [-1.1, -0.6, 0.0, 0.3, 0.9, 1.2] {
            assert_abs_diff_eq!(b.fhat_eval(u), h.fhat_eval(u), epsilon = 1e-12);
        }
        // identical transforms imply identical spatial sides
        for x in [0.0, 0.4, 2.5] {
            assert_abs_diff_eq!(b.f_eval(x), h.f_eval(x), epsilon = 1e-12);
        }
    }

    #[test]
    fn bspline_support_and_integral() {
        let b = TestFunction::bspline(0.9, 5).unwrap();
        let (lo, hi) = b.fhat.support();
        assert_abs_diff_eq!(lo, -0.9, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, 0.9, epsilon = 1e-12);
        let num = adaptive(&|u: f64| b.fhat_eval(u), -0.9, 0.9, 1e-13);
        assert_abs_diff_eq!(b.fhat.integral(), num, epsilon = 1e-12);
        assert!(TestFunction::bspline(1.0, 1).is_err());
        assert!(TestFunction::bspline(1.0, 7).is_err());
    }

    #[test]
    fn evenness() {
        for tf in [
            TestFunction::hat(0.8).unwrap(),
            TestFunction::bspline(1.1, 4).unwrap(),
        ] {
            for v in [0.05, 0.3, 0.77, 1.05] {
                assert_abs_diff_eq!(tf.fhat_eval(v), tf.fhat_eval(-v), epsilon = 1e-13);
                assert_abs_diff_eq!(tf.f_eval(v), tf.f_eval(-v), epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn plancherel_spot_check() {
        for tf in [
            TestFunction::hat(1.0).unwrap(),
            TestFunction::bspline(1.3, 3).unwrap(),
        ] {
            let fhat_sq = tf.fhat.product(&tf.fhat).integral();
            // ∫ f(x)^2 dx truncated; hat decays like x^{-2} so f² like x^{-4}
            let f_sq = adaptive(&|x: f64| tf.f_eval(x).powi(2), -300.0, 300.0, 1e-11);
            assert!(
                (fhat_sq - f_sq).abs() < 1e-8,
                "{:?}: {fhat_sq} vs {f_sq}",
                tf.kind
            );
        }
    }

    #[test]
    fn product_block_and_convolution() {
        let fam = C4Family::new(vec![
            TestFunction::hat(1.0).unwrap(),
            TestFunction::hat(1.0).unwrap(),
            TestFunction::bspline(0.5, 3).unwrap(),
        ])
        .unwrap();
        let p = fam.product_for_block(&[0, 1]).unwrap();
        assert_abs_diff_eq!(p.kappa, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.fhat_eval(0.0), 2.0 / 3.0, epsilon = 1e-12);
        let (lo, hi) = p.fhat.support();
        assert_abs_diff_eq!(lo, -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, 2.0, epsilon = 1e-12);
        // F̂(0) = ∫ ∏ f_i
        let num = adaptive(&|x: f64| p.f_eval(x), -200.0, 200.0, 1e-11);
        assert!((p.fhat_eval(0.0) - num).abs() < 1e-6);
        // singleton block is the factor itself
        let s = fam.product_for_block(&[2]).unwrap();
        for u in [-0.4, 0.0, 0.2] {
            assert_abs_diff_eq!(
                s.fhat_eval(u),
                fam.functions[2].fhat_eval(u),
                epsilon = 1e-13
            );
        }
        assert!(fam.product_for_block(&[]).is_err());
        assert!(fam.product_for_block(&[5]).is_err());
    }

    #[test]
    fn support_budget() {
        let three = C4Family::new(vec![
            TestFunction::hat(1.0).unwrap(),
            TestFunction::hat(1.0).unwrap(),
            TestFunction::hat(1.0).unwrap(),
        ])
        .unwrap();
        let b = three.check_support().unwrap();
        assert_abs_diff_eq!(b.eta_total, 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.epsilon, 1.0, epsilon = 1e-15);
        let too_big = C4Family::new(vec![
            TestFunction::hat(2.0).unwrap(),
            TestFunction::hat(2.0).unwrap(),
        ]);
        assert!(matches!(too_big, Err(Error::SupportBudget { .. })));
        let empty = C4Family::new(vec![]).unwrap();
        assert_abs_diff_eq!(empty.check_support().unwrap().eta_total, 0.0);
    }

    #[test]
    fn spec_roundtrip() {
        for s in ["hat:1", "hat:0.5", "bspline:1.5:3"] {
            let tf = TestFunction::from_spec(s).unwrap();
            let again = TestFunction::from_spec(&tf.spec_string()).unwrap();
            assert_eq!(tf.kind, again.kind);
            assert_abs_diff_eq!(tf.eta, again.eta);
        }
        assert!(TestFunction::from_spec("cosine:1").is_err());
        assert!(TestFunction::from_spec("hat").is_err());
    }
}
