//! Self-checks of the special-function layer.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::laurent::{mixed_error, C64};
use crate::quadrature::CompositeRule;
use crate::specfun::bessel::{bessel_i, bessel_k, k_monodromy, k_monodromy_from_half_turn};
use crate::specfun::cover::CoverComplex;
use crate::specfun::gamma::{binomial, digamma, factorial, rising, EULER_GAMMA};
use crate::specfun::hypergeometric::{hyp2f1_along_ray, hyp2f1_log_connection, hyp2f1_series};

/// Outcome of one numerical identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityCheck {
    pub fn new(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            tolerance,
            pass: measured <= tolerance && measured.is_finite(),
        }
    }
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Mismatches of `(k+1)(k+2)...(2k) = 2^k * 1*3*...*(2k-1)` for `k <= k_max`,
/// the integer form of `(k+1)^{(k)} = 4^k (1/2)^{(k)}`.
pub fn rising_factorial_mismatches(k_max: u32) -> u32 {
    (0..=k_max)
        .filter(|&k| {
            let lhs: u128 = (k as u128 + 1..=2 * k as u128).product();
            let odd: u128 = (0..k as u128).map(|j| 2 * j + 1).product();
            lhs != (1u128 << k) * odd
        })
        .count() as u32
}

/// Coefficient of `x^k` in `sum binom(-1/2,k) binom(m+k-1/2,2k) x^k`.
pub fn binomial_sum_coefficient(m: i64, k: usize) -> f64 {
    binomial(-0.5, k) * binomial(m as f64 + k as f64 - 0.5, 2 * k)
}

/// Coefficient of `x^k` in `2F1(1/2-m, 1/2+m; 1; x/4)`.
pub fn hypergeometric_coefficient(m: i64, k: usize) -> f64 {
    let a = c(0.5 - m as f64);
    let b = c(0.5 + m as f64);
    (rising(a, k) * rising(b, k)).re / (factorial(k) * factorial(k)) / 4f64.powi(k as i32)
}

/// Largest relative deviation between the two coefficient families.
pub fn binomial_sum_deviation(m_range: std::ops::RangeInclusive<i64>, k_max: usize) -> f64 {
    let mut worst = 0.0f64;
    for m in m_range {
        for k in 0..=k_max {
            let a = binomial_sum_coefficient(m, k);
            let b = hypergeometric_coefficient(m, k);
            let scale = a.abs().max(b.abs());
            if scale > 0.0 {
                worst = worst.max((a - b).abs() / scale);
            }
        }
    }
    worst
}

/// Both sides of the Laplace transform of `2F1(a, 1-a; 1; -omega x)` against `e^{-q x}`,
/// for `a = 1/2 - m` so that the Bessel order is the integer `-m`.
pub fn laplace_identity_sides(m: i64, omega: C64, q: f64) -> crate::error::Result<(C64, C64)> {
    let a = c(0.5 - m as f64);
    let end = 60.0 / q;
    let rule = CompositeRule::geometric(0.25, end, 30);
    let vals = hyp2f1_along_ray(a, c(1.0) - a, c(1.0), -omega, &rule.nodes)?;
    let lhs: C64 = vals
        .iter()
        .zip(rule.nodes.iter().zip(&rule.weights))
        .map(|(f, (x, w))| f * (w * (-q * x).exp()))
        .sum();
    let arg = CoverComplex::principal(c(q) / (omega * 2.0))?;
    let rhs = (c(q).powf(-0.5) / (c(PI) * omega).sqrt()) * arg.to_complex().exp() * bessel_k(-m, arg);
    Ok((lhs, rhs))
}

fn richardson_derivative(f: impl Fn(C64) -> C64, z: C64, h: f64) -> C64 {
    let d = |h: f64| (f(z + h) - f(z - h)) / (2.0 * h);
    (d(h / 2.0) * 4.0 - d(h)) / 3.0
}

/// Runs every identity of the special-function layer.
pub fn identity_suite() -> Vec<IdentityCheck> {
    let mut out = Vec::new();

    out.push(IdentityCheck::new(
        "rising factorial (k+1)^(k) = 4^k (1/2)^(k), k <= 20",
        rising_factorial_mismatches(20) as f64,
        0.0,
    ));

    out.push(IdentityCheck::new(
        "binomial-sum coefficients equal 2F1 Taylor coefficients, k <= 30, |m| <= 5",
        binomial_sum_deviation(-5..=5, 30),
        1e-12,
    ));

    let mut worst = 0.0f64;
    for &(m, omega, q) in &[
        (0i64, C64::new(0.7, 0.0), 1.0),
        (2, C64::new(0.3, 0.4), 1.3),
        (1, C64::from_polar(0.5, 2.5), 0.8),
        (-3, C64::from_polar(1.5, -1.0), 2.0),
    ] {
        match laplace_identity_sides(m, omega, q) {
            Ok((l, r)) => worst = worst.max(mixed_error(l, r)),
            Err(_) => worst = f64::INFINITY,
        }
    }
    out.push(IdentityCheck::new(
        "Laplace transform of 2F1(a,1-a;1;-wx) equals the K-side",
        worst,
        1e-8,
    ));

    let samples = [
        CoverComplex::unit(0.3).scale(0.8).expect("positive"),
        CoverComplex::unit(-1.1).scale(3.0).expect("positive"),
        CoverComplex::unit(2.9).scale(6.5).expect("positive"),
    ];
    let mut round_trip = 0.0f64;
    let mut sheet = 0.0f64;
    let mut two_forms = 0.0f64;
    for z in samples {
        for n in 0..5i64 {
            let k = bessel_k(n, z);
            let i = bessel_i(n, z.to_complex());
            for m in 1..4i64 {
                let moved = k_monodromy(n, k, i, m);
                let i_moved = if (m * n) % 2 == 0 { i } else { -i };
                let back = k_monodromy(n, moved, i_moved, -m);
                round_trip = round_trip.max(mixed_error(back, k));
                let direct = bessel_k(n, z.rotate(m as f64 * PI));
                two_forms = two_forms.max(mixed_error(
                    k_monodromy_from_half_turn(n, k, bessel_k(n, z.rotate(PI)), m),
                    direct,
                ));
            }
            let once = k_monodromy(n, k, i, 1);
            let i_once = if n % 2 == 0 { i } else { -i };
            let twice = k_monodromy(n, once, i_once, 1);
            sheet = sheet.max(mixed_error(twice, k_monodromy(n, k, i, 2)));
        }
    }
    out.push(IdentityCheck::new("K monodromy m then -m returns the start value", round_trip, 1e-11));
    out.push(IdentityCheck::new("K on the second sheet equals two half-turn continuations", sheet, 1e-11));
    out.push(IdentityCheck::new("both monodromy forms of K agree with direct evaluation", two_forms, 1e-11));

    let mut parity = 0.0f64;
    for n in 0..6i64 {
        for &z in &[C64::new(0.7, 0.2), C64::new(-4.0, 3.0), C64::new(12.0, -30.0)] {
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            parity = parity.max(mixed_error(bessel_i(n, -z), bessel_i(n, z) * s));
        }
    }
    out.push(IdentityCheck::new("I_n(-z) = (-1)^n I_n(z)", parity, 1e-12));

    let mut generating = 0.0f64;
    for j in 0..8 {
        let t = C64::from_polar(1.0, 2.0 * PI * j as f64 / 8.0 + 0.1);
        let sum: C64 = (-25..=25).map(|n| t.powi(n as i32) * bessel_i(n, c(1.0))).sum();
        let exact = (0.5 * (t + t.inv())).exp();
        generating = generating.max(mixed_error(sum, exact));
    }
    out.push(IdentityCheck::new("generating function of I_n on |t| = 1", generating, 1e-12));

    let mut deriv_i = 0.0f64;
    let mut deriv_k = 0.0f64;
    for &r in &[0.5, 1.0, 5.0] {
        for n in 1..4i64 {
            let z = C64::from_polar(r, 0.4);
            let fd = richardson_derivative(|w| bessel_i(n, w), z, 1e-3);
            let exact = bessel_i(n - 1, z) - bessel_i(n, z) * (n as f64) / z;
            deriv_i = deriv_i.max(mixed_error(fd, exact));
            let kz = |w: C64| bessel_k(n, CoverComplex::lift_near(w, 0.4).expect("nonzero"));
            let fdk = richardson_derivative(kz, z, 1e-3);
            let zc = CoverComplex::lift_near(z, 0.4).expect("nonzero");
            let exact_k = -bessel_k(n - 1, zc) - bessel_k(n, zc) * (n as f64) / z;
            deriv_k = deriv_k.max(mixed_error(fdk, exact_k));
        }
    }
    out.push(IdentityCheck::new("I'_n = I_{n-1} - (n/z) I_n by finite differences", deriv_i, 1e-10));
    out.push(IdentityCheck::new("K'_n = -K_{n-1} - (n/z) K_n by finite differences", deriv_k, 1e-10));

    let growth = |f: &dyn Fn(i64) -> f64, g: &dyn Fn(f64) -> f64| {
        let measured = f(20) - f(10);
        let predicted = g(20.0) - g(10.0);
        ((measured - predicted) / predicted).abs()
    };
    let i_growth = growth(
        &|n| bessel_i(n, c(1.0)).norm().ln(),
        &|n| -0.5 * (2.0 * PI * n).ln() + n * (std::f64::consts::E / (2.0 * n)).ln(),
    );
    let k_growth = growth(
        &|n| bessel_k(n, CoverComplex::unit(0.0)).norm().ln(),
        &|n| 0.5 * (PI / (2.0 * n)).ln() + n * (2.0 * n / std::f64::consts::E).ln(),
    );
    out.push(IdentityCheck::new("large-order decay of I_n(1) (log-ratio slope)", i_growth, 0.05));
    out.push(IdentityCheck::new("large-order growth of K_n(1) (log-ratio slope)", k_growth, 0.05));

    out.push(IdentityCheck::new(
        "psi(1) = -gamma",
        (digamma(c(1.0)) + c(EULER_GAMMA)).norm(),
        1e-15,
    ));
    let lens = mixed_error(
        hyp2f1_series(c(0.5), c(0.5), c(1.0), c(0.6)),
        hyp2f1_log_connection(c(0.5), c(0.5), c(1.0), c(0.6)).unwrap_or(C64::new(f64::NAN, 0.0)),
    );
    out.push(IdentityCheck::new("2F1 series and log connection agree at z = 0.6", lens, 1e-10));
    out
}
