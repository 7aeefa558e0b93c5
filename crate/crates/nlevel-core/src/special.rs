//! Complex special functions: Γ (Lanczos), digamma, and Bernoulli
//! numbers for Euler–Maclaurin tails.

use num_complex::Complex64;

/// Lanczos g=7, n=9 coefficients.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_C: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(z) for complex z (Lanczos with reflection for Re z < 0.5).
pub fn gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z)Γ(1−z) = π/sin(πz)
        let pi = std::f64::consts::PI;
        return pi / ((z * pi).sin() * gamma(Complex64::new(1.0, 0.0) - z));
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS_C[0], 0.0);
    for (i, &c) in LANCZOS_C.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    let sqrt_two_pi = (2.0 * std::f64::consts::PI).sqrt();
    sqrt_two_pi * t.powc(z + 0.5) * (-t).exp() * x
}

/// log Γ(z) for Re z > 0 (principal branch via Lanczos; continuous there).
pub fn ln_gamma(z: Complex64) -> Complex64 {
    assert!(z.re > 0.0, "ln_gamma requires Re z > 0");
    let zm = z - 1.0;
    let mut x = Complex64::new(LANCZOS_C[0], 0.0);
    for (i, &c) in LANCZOS_C.iter().enumerate().skip(1) {
        x += c / (zm + i as f64);
    }
    let t = zm + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (zm + 0.5) * t.ln() - t + x.ln()
}

const DIGAMMA_BERN: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

/// ψ(z) = Γ'/Γ(z) by recurrence into the asymptotic region.
pub fn digamma(z: Complex64) -> Complex64 {
    let mut z = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.re < 8.0 {
        shift -= 1.0 / z;
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv2;
    for (k, &b) in DIGAMMA_BERN.iter().enumerate() {
        series -= b / (2.0 * (k as f64 + 1.0)) * p;
        p *= inv2;
    }
    shift + z.ln() - 0.5 * inv + series
}

/// B_2, B_4, …, B_26 (even-index Bernoulli numbers).
pub const BERNOULLI_EVEN: [f64; 13] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
];
