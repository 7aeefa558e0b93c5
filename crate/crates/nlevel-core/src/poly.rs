//! Dense univariate polynomials and compactly supported piecewise
//! polynomials with exact arithmetic (up to f64 round-off): products,
//! convolution, translation, reflection and definite integration.
//!
//! Piecewise polynomials represent the Fourier transforms of the test
//! functions; convolution of transforms implements pointwise products on
//! the spatial side exactly.

/// Polynomial with ascending coefficients: `p(x) = c[0] + c[1] x + ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn zero() -> Self {
        Poly(vec![])
    }

    pub fn constant(c: f64) -> Self {
        Poly(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![0.0; n];
        for (i, &c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, &c) in other.0.iter().enumerate() {
            out[i] += c;
        }
        Poly(out)
    }

    pub fn scale(&self, k: f64) -> Poly {
        Poly(self.0.iter().map(|&c| c * k).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.0.is_empty() || other.0.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Poly {
        let mut out = vec![0.0; self.0.len() + 1];
        for (i, &c) in self.0.iter().enumerate() {
            out[i + 1] = c / (i as f64 + 1.0);
        }
        Poly(out)
    }

    pub fn integrate(&self, a: f64, b: f64) -> f64 {
        let anti = self.antiderivative();
        anti.eval(b) - anti.eval(a)
    }

    /// Composition with an affine map: returns `p(a + b x)`.
    pub fn compose_affine(&self, a: f64, b: f64) -> Poly {
        let mut out = Poly::zero();
        let lin = Poly(vec![a, b]);
        let mut pw = Poly::constant(1.0);
        for (i, &c) in self.0.iter().enumerate() {
            if i > 0 {
                pw = pw.mul(&lin);
            }
            if c != 0.0 {
                out = out.add(&pw.scale(c));
            }
        }
        out
    }

    /// Substitution of a polynomial for the variable: returns `p(q(t))`.
    pub fn compose(&self, q: &Poly) -> Poly {
        let mut out = Poly::zero();
        let mut pw = Poly::constant(1.0);
        for (i, &c) in self.0.iter().enumerate() {
            if i > 0 {
                pw = pw.mul(q);
            }
            if c != 0.0 {
                out = out.add(&pw.scale(c));
            }
        }
        out
    }
}

/// Bivariate polynomial in (x, t), stored as x-power -> polynomial in t.
#[derive(Clone, Debug)]
struct BiPoly(Vec<Poly>);

impl BiPoly {
    /// `q(t - x)` for a univariate `q`.
    fn from_shifted(q: &Poly) -> BiPoly {
        // (t - x)^k expanded by binomials, accumulated per x-power.
        let mut out: Vec<Poly> = vec![];
        let mut binom = vec![1.0_f64];
        for (k, &c) in q.0.iter().enumerate() {
            if k > 0 {
                let mut next = vec![1.0; k + 1];
                for i in 1..k {
                    next[i] = binom[i - 1] + binom[i];
                }
                binom = next;
            }
            if c == 0.0 {
                continue;
            }
            for j in 0..=k {
                // term: C(k,j) t^{k-j} (-x)^j
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                let mut tpoly = vec![0.0; k - j + 1];
                tpoly[k - j] = c * sign * binom[j];
                while out.len() <= j {
                    out.push(Poly::zero());
                }
                out[j] = out[j].add(&Poly(tpoly));
            }
        }
        BiPoly(out)
    }

    /// Multiply by a polynomial in x alone.
    fn mul_xpoly(&self, p: &Poly) -> BiPoly {
        let mut out = vec![Poly::zero(); self.0.len() + p.0.len()];
        for (i, tp) in self.0.iter().enumerate() {
            for (j, &c) in p.0.iter().enumerate() {
                if c != 0.0 {
                    out[i + j] = out[i + j].add(&tp.scale(c));
                }
            }
        }
        BiPoly(out)
    }

    /// Antiderivative in x.
    fn anti_x(&self) -> BiPoly {
        let mut out = vec![Poly::zero()];
        for (i, tp) in self.0.iter().enumerate() {
            out.push(tp.scale(1.0 / (i as f64 + 1.0)));
        }
        BiPoly(out)
    }

    /// Substitute `x = bound(t)`; result is univariate in t.
    fn eval_x(&self, bound: &Poly) -> Poly {
        let mut out = Poly::zero();
        let mut pw = Poly::constant(1.0);
        for (i, tp) in self.0.iter().enumerate() {
            if i > 0 {
                pw = pw.mul(bound);
            }
            if !tp.is_zero() {
                out = out.add(&tp.mul(&pw));
            }
        }
        out
    }
}

/// Breakpoints considered equal when closer than this (transforms have
/// O(1) breakpoints, so absolute tolerance is adequate).
const BREAK_EPS: f64 = 1e-12;

/// Compactly supported piecewise polynomial; zero outside
/// `[breaks[0], breaks[last]]`. `pieces[i]` is valid on
/// `[breaks[i], breaks[i+1]]`, with coefficients in the global variable.
#[derive(Clone, Debug)]
pub struct PiecewisePoly {
    pub breaks: Vec<f64>,
    pub pieces: Vec<Poly>,
}

impl PiecewisePoly {
    pub fn new(breaks: Vec<f64>, pieces: Vec<Poly>) -> Self {
        assert_eq!(breaks.len(), pieces.len() + 1);
        assert!(breaks.windows(2).all(|w| w[0] < w[1]));
        PiecewisePoly { breaks, pieces }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.breaks[0], *self.breaks.last().unwrap())
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x < lo || x > hi {
            return 0.0;
        }
        // At interior breakpoints either piece is fine (continuity is not
        // assumed, but all transforms in use are continuous).
        let idx = match self
            .breaks
            .binary_search_by(|b| b.partial_cmp(&x).unwrap())
        {
            Ok(i) => i.min(self.pieces.len() - 1),
            Err(i) => i - 1,
        };
        self.pieces[idx].eval(x)
    }

    /// `f(-x)`.
    pub fn reflect(&self) -> PiecewisePoly {
        let mut breaks: Vec<f64> = self.breaks.iter().rev().map(|&b| -b).collect();
        let pieces: Vec<Poly> = self
            .pieces
            .iter()
            .rev()
            .map(|p| p.compose_affine(0.0, -1.0))
            .collect();
        // Normalize -0.0.
        for b in breaks.iter_mut() {
            if *b == 0.0 {
                *b = 0.0;
            }
        }
        PiecewisePoly::new(breaks, pieces)
    }

    /// `f(x - c)`.
    pub fn translate(&self, c: f64) -> PiecewisePoly {
        PiecewisePoly::new(
            self.breaks.iter().map(|&b| b + c).collect(),
            self.pieces.iter().map(|p| p.compose_affine(-c, 1.0)).collect(),
        )
    }

    fn merge_breaks(a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut all: Vec<f64> = a.iter().chain(b.iter()).copied().collect();
        all.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let mut out: Vec<f64> = vec![];
        for v in all {
            if out.last().map_or(true, |&l| v - l > BREAK_EPS) {
                out.push(v);
            }
        }
        out
    }

    /// Pointwise product (zero outside the common support).
    pub fn product(&self, other: &PiecewisePoly) -> PiecewisePoly {
        let lo = self.support().0.max(other.support().0);
        let hi = self.support().1.min(other.support().1);
        if lo >= hi - BREAK_EPS {
            return PiecewisePoly::new(vec![0.0, 1.0], vec![Poly::zero()]);
        }
        let mut breaks: Vec<f64> = Self::merge_breaks(&self.breaks, &other.breaks)
            .into_iter()
            .filter(|&b| b > lo - BREAK_EPS && b < hi + BREAK_EPS)
            .collect();
        if (breaks[0] - lo).abs() > BREAK_EPS {
            breaks.insert(0, lo);
        }
        let mut pieces = vec![];
        for w in breaks.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let pa = self.piece_at(mid);
            let pb = other.piece_at(mid);
            pieces.push(match (pa, pb) {
                (Some(a), Some(b)) => a.mul(b),
                _ => Poly::zero(),
            });
        }
        PiecewisePoly::new(breaks, pieces)
    }

    /// Multiply pointwise by a single global polynomial.
    pub fn mul_poly(&self, p: &Poly) -> PiecewisePoly {
        PiecewisePoly::new(
            self.breaks.clone(),
            self.pieces.iter().map(|q| q.mul(p)).collect(),
        )
    }

    fn piece_at(&self, x: f64) -> Option<&Poly> {
        let (lo, hi) = self.support();
        if x < lo || x > hi {
            return None;
        }
        for (i, w) in self.breaks.windows(2).enumerate() {
            if x >= w[0] && x <= w[1] {
                return Some(&self.pieces[i]);
            }
        }
        None
    }

    /// Exact integral over the full support.
    pub fn integral(&self) -> f64 {
        self.breaks
            .windows(2)
            .zip(&self.pieces)
            .map(|(w, p)| p.integrate(w[0], w[1]))
            .sum()
    }

    /// Exact integral over `[a, b]` (clipped to the support).
    pub fn integrate(&self, a: f64, b: f64) -> f64 {
        if a >= b {
            return 0.0;
        }
        let mut total = 0.0;
        for (w, p) in self.breaks.windows(2).zip(&self.pieces) {
            let lo = w[0].max(a);
            let hi = w[1].min(b);
            if lo < hi {
                total += p.integrate(lo, hi);
            }
        }
        total
    }

    /// Exact convolution `(self * other)(t) = ∫ self(x) other(t-x) dx`.
    pub fn convolve(&self, other: &PiecewisePoly) -> PiecewisePoly {
        // Candidate output breakpoints: all pairwise sums.
        let mut cand: Vec<f64> = vec![];
        for &s in &self.breaks {
            for &r in &other.breaks {
                cand.push(s + r);
            }
        }
        cand.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let mut breaks: Vec<f64> = vec![];
        for v in cand {
            if breaks.last().map_or(true, |&l| v - l > BREAK_EPS) {
                breaks.push(v);
            }
        }
        // Precompute b_j(t - x) as bivariate polynomials.
        let shifted: Vec<BiPoly> = other.pieces.iter().map(BiPoly::from_shifted).collect();
        let mut pieces = vec![Poly::zero(); breaks.len() - 1];
        for (i, sw) in self.breaks.windows(2).enumerate() {
            if self.pieces[i].is_zero() {
                continue;
            }
            for (j, rw) in other.breaks.windows(2).enumerate() {
                if other.pieces[j].is_zero() {
                    continue;
                }
                // Contribution alive for t in (sw0+rw0, sw1+rw1); the x-range
                // is (max(sw0, t-rw1), min(sw1, t-rw0)).
                let anti = shifted[j].mul_xpoly(&self.pieces[i]).anti_x();
                let t_lo = sw[0] + rw[0];
                let t_hi = sw[1] + rw[1];
                for (k, tw) in breaks.windows(2).enumerate() {
                    if tw[1] <= t_lo + BREAK_EPS || tw[0] >= t_hi - BREAK_EPS {
                        continue;
                    }
                    let tm = 0.5 * (tw[0] + tw[1]);
                    let lo_is_const = sw[0] >= tm - rw[1];
                    let hi_is_const = sw[1] <= tm - rw[0];
                    let lo_b = if lo_is_const {
                        Poly::constant(sw[0])
                    } else {
                        Poly(vec![-rw[1], 1.0])
                    };
                    let hi_b = if hi_is_const {
                        Poly::constant(sw[1])
                    } else {
                        Poly(vec![-rw[0], 1.0])
                    };
                    if hi_b.eval(tm) <= lo_b.eval(tm) {
                        continue;
                    }
                    let contrib = anti.eval_x(&hi_b).add(&anti.eval_x(&lo_b).scale(-1.0));
                    pieces[k] = pieces[k].add(&contrib);
                }
            }
        }
        PiecewisePoly::new(breaks, pieces)
    }

    /// `∫ poly(x) e^{c x} dx` over `[a, b]` for one exponential weight,
    /// by repeated integration by parts (exact).
    pub fn integral_exp(&self, c: f64) -> f64 {
        self.breaks
            .windows(2)
            .zip(&self.pieces)
            .map(|(w, p)| poly_exp_integral(p, c, w[0], w[1]))
            .sum()
    }
}

/// `∫_a^b p(x) e^{c x} dx` exactly.
pub fn poly_exp_integral(p: &Poly, c: f64, a: f64, b: f64) -> f64 {
    if p.is_zero() {
        return 0.0;
    }
    if c == 0.0 {
        return p.integrate(a, b);
    }
    // Antiderivative: e^{cx} q(x) with q = p/c - q'/c (recursively).
    let mut q = p.scale(1.0 / c);
    let mut deriv = p.clone();
    let mut sign = -1.0;
    let mut cpow = c * c;
    loop {
        // derivative of current `deriv`
        let d: Vec<f64> = deriv
            .0
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &v)| v * i as f64)
            .collect();
        if d.iter().all(|&v| v == 0.0) {
            break;
        }
        deriv = Poly(d);
        q = q.add(&deriv.scale(sign / cpow));
        sign = -sign;
        cpow *= c;
    }
    (c * b).exp() * q.eval(b) - (c * a).exp() * q.eval(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn hat_transform(eta: f64) -> PiecewisePoly {
        PiecewisePoly::new(
            vec![-eta, 0.0, eta],
            vec![Poly(vec![1.0, 1.0 / eta]), Poly(vec![1.0, -1.0 / eta])],
        )
    }

    #[test]
    fn poly_eval_and_integrate() {
        let p = Poly(vec![1.0, 2.0, 3.0]); // 1 + 2x + 3x^2
        assert_eq!(p.eval(2.0), 17.0);
        assert_abs_diff_eq!(p.integrate(0.0, 1.0), 1.0 + 1.0 + 1.0, epsilon = 1e-14);
    }

    #[test]
    fn compose_affine_matches_eval() {
        let p = Poly(vec![0.5, -1.0, 2.0, 0.25]);
        let q = p.compose_affine(1.5, -2.0);
        for x in [-1.0, 0.0, 0.3, 2.0] {
            assert_abs_diff_eq!(q.eval(x), p.eval(1.5 - 2.0 * x), epsilon = 1e-12);
        }
    }

    #[test]
    fn convolution_of_boxes_is_triangle() {
        // box on [-1,1] convolved with itself: triangle 2 - |t| on [-2,2]
        let b = PiecewisePoly::new(vec![-1.0, 1.0], vec![Poly::constant(1.0)]);
        let c = b.convolve(&b);
        for t in [-1.9, -1.0, -0.3, 0.0, 0.7, 1.5] {
            assert_abs_diff_eq!(c.eval(t), 2.0 - t.abs(), epsilon = 1e-12);
        }
        assert_abs_diff_eq!(c.integral(), 4.0, epsilon = 1e-12);
    }

    #[test]
    fn hat_self_convolution_at_zero() {
        // ∫ (1-|u|)^2 du = 2/3
        let h = hat_transform(1.0);
        let c = h.convolve(&h);
        assert_abs_diff_eq!(c.eval(0.0), 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.support().0, -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.support().1, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn convolution_against_quadrature() {
        let a = hat_transform(1.3);
        let b = PiecewisePoly::new(
            vec![-0.5, 0.25, 0.5],
            vec![Poly(vec![0.2, 1.0, -0.5]), Poly(vec![1.0, -2.0])],
        );
        let c = a.convolve(&b);
        for t in [-1.7, -0.4, 0.0, 0.33, 1.1, 1.74] {
            // crude Riemann check; tolerance reflects the O(h) error from
            // the jump in b
            let n = 200_000;
            let (lo, hi) = a.support();
            let h = (hi - lo) / n as f64;
            let mut s = 0.0;
            for i in 0..n {
                let x = lo + (i as f64 + 0.5) * h;
                s += a.eval(x) * b.eval(t - x);
            }
            s *= h;
            assert_abs_diff_eq!(c.eval(t), s, epsilon = 1e-5);
        }
    }

    #[test]
    fn product_and_weighted_integral() {
        let a = hat_transform(1.0);
        let b = hat_transform(1.0);
        // ∫_0^1 v (1-v)^2 dv = 1/12
        let prod = a.reflect().product(&b).mul_poly(&Poly(vec![0.0, 1.0]));
        assert_abs_diff_eq!(prod.integrate(0.0, 2.0), 1.0 / 12.0, epsilon = 1e-13);
    }

    #[test]
    fn translate_reflect_consistency() {
        let a = hat_transform(0.7);
        let t = a.translate(0.3);
        let r = a.reflect();
        for x in [-0.9, -0.2, 0.0, 0.4, 0.95] {
            assert_abs_diff_eq!(t.eval(x), a.eval(x - 0.3), epsilon = 1e-13);
            assert_abs_diff_eq!(r.eval(x), a.eval(-x), epsilon = 1e-13);
        }
    }

    #[test]
    fn exp_weighted_integral() {
        let p = Poly(vec![1.0, 1.0]); // 1 + x
        let v = poly_exp_integral(&p, -2.0, 0.0, 3.0);
        // ∫_0^3 (1+x)e^{-2x} dx = [e^{-2x}(-(1+x)/2 - 1/4)]_0^3
        let anti = |x: f64| (-2.0 * x).exp() * (-(1.0 + x) / 2.0 - 0.25);
        assert_abs_diff_eq!(v, anti(3.0) - anti(0.0), epsilon = 1e-13);
    }
}
