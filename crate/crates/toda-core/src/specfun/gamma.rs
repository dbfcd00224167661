//! Gamma, digamma and related combinatorial helpers.

use std::f64::consts::PI;

use crate::laurent::C64;

/// The Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Complex Gamma function (Lanczos approximation with reflection).
pub fn gamma(z: C64) -> C64 {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return C64::new(PI, 0.0) / (s * gamma(C64::new(1.0, 0.0) - z));
    }
    let z = z - 1.0;
    let mut x = C64::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        x += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// `Gamma(k + 1/2)` for integer `k`, built by exact recurrence from `sqrt(pi)`.
pub fn gamma_half_integer(k: i64) -> f64 {
    let mut g = PI.sqrt();
    if k >= 0 {
        for j in 0..k {
            g *= j as f64 + 0.5;
        }
    } else {
        for j in 0..(-k) {
            g /= -(j as f64) - 0.5;
        }
    }
    g
}

/// Complex digamma `psi(z)` by upward shift and the Stirling-type tail.
pub fn digamma(z: C64) -> C64 {
    if z.re < 0.5 {
        let one = C64::new(1.0, 0.0);
        let pz = z * PI;
        return digamma(one - z) - pz.cos() / pz.sin() * PI;
    }
    let mut acc = C64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 12.0 {
        acc -= w.inv();
        w += 1.0;
    }
    const BERNOULLI: [f64; 8] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
        -3617.0 / 510.0,
    ];
    let inv2 = (w * w).inv();
    let mut pow = inv2;
    let mut tail = C64::new(0.0, 0.0);
    for (k, b) in BERNOULLI.iter().enumerate() {
        tail += pow * (*b / (2.0 * (k as f64 + 1.0)));
        pow *= inv2;
    }
    acc + w.ln() - 0.5 * w.inv() - tail
}

/// `psi(n + 1) = H_n - gamma` for nonnegative integers.
pub fn digamma_integer(n: usize) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum::<f64>() - EULER_GAMMA
}

/// Generalized binomial coefficient `binom(x, k)` for real `x`.
pub fn binomial(x: f64, k: usize) -> f64 {
    let mut b = 1.0;
    for j in 0..k {
        b *= (x - j as f64) / (j as f64 + 1.0);
    }
    b
}

/// Rising factorial `(a)(a+1)...(a+n-1)`.
pub fn rising(a: C64, n: usize) -> C64 {
    (0..n).fold(C64::new(1.0, 0.0), |acc, j| acc * (a + j as f64))
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, j| acc * j as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn gamma_known_values() {
        assert!((gamma(c(5.0)) - c(24.0)).norm() < 1e-12);
        assert!((gamma(c(0.5)) - c(PI.sqrt())).norm() < 1e-14);
        assert!((gamma(c(-0.5)) - c(-2.0 * PI.sqrt())).norm() < 1e-13);
        // |Gamma(i)|^2 = pi / (sinh pi)
        let g = gamma(C64::new(0.0, 1.0));
        assert!((g.norm_sqr() - PI / PI.sinh()).abs() < 1e-14);
    }

    #[test]
    fn half_integer_gamma() {
        assert!((gamma_half_integer(0) - PI.sqrt()).abs() < 1e-15);
        assert!((gamma_half_integer(-1) + 2.0 * PI.sqrt()).abs() < 1e-14);
        assert!((gamma_half_integer(3) - gamma(c(3.5)).re).abs() < 1e-12);
        assert!((gamma_half_integer(-4) - gamma(c(-3.5)).re).abs() < 1e-13);
    }

    #[test]
    fn digamma_at_one_is_minus_euler() {
        assert!((digamma(c(1.0)) + c(EULER_GAMMA)).norm() < 1e-15);
        assert!((digamma(c(0.5)) - c(-EULER_GAMMA - 2.0 * 2f64.ln())).norm() < 1e-14);
        assert!((digamma_integer(3) - digamma(c(4.0)).re).abs() < 1e-14);
        let z = C64::new(-2.3, 0.7);
        let rec = digamma(z + 1.0) - z.inv();
        assert!((digamma(z) - rec).norm() < 1e-13);
    }

    #[test]
    fn binomials() {
        assert!((binomial(-0.5, 1) + 0.5).abs() < 1e-16);
        assert!((binomial(0.5, 2) + 0.125).abs() < 1e-16);
        assert_eq!(binomial(5.0, 2), 10.0);
    }
}
