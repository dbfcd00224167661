//! Modified Bessel functions of integer order.
//!
//! `I_n` is entire and evaluated from its power series near the real axis or
//! by backward recurrence normalized with the generating function elsewhere.
//! `K_n` lives on the universal cover: its value at any sheet is reduced to
//! the half-plane `|arg z| <= pi/2` through the monodromy relation, where it is
//! computed from the logarithmic expansion (small `|z|`), a Gaussian-weighted
//! integral (moderate `|z|`) or the large-argument expansion.

use std::f64::consts::PI;

use crate::error::{Result, TodaError};
use crate::laurent::{mixed_error, C64};
use crate::specfun::cover::CoverComplex;
use crate::specfun::gamma::{digamma_integer, factorial, EULER_GAMMA};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Radius below which `K_n` uses the logarithmic expansion.
pub const K_SMALL_RADIUS: f64 = 2.0;
/// Relative half-width of the band where two `K_n` regimes are compared.
pub const K_OVERLAP_BAND: f64 = 0.2;
const OVERLAP_TOLERANCE: f64 = 1e-9;

fn k_large_radius(n: u64) -> f64 {
    30f64.max((n * n) as f64)
}

/// Power series of `I_n` summed until the relative term size drops below `1e-17`.
pub fn bessel_i_series(n: i64, z: C64) -> C64 {
    let n = n.unsigned_abs();
    if z == ZERO {
        return if n == 0 { ONE } else { ZERO };
    }
    let half = z * 0.5;
    let q = half * half;
    let mut term = half.powu(n as u32) / factorial(n as usize);
    let mut sum = term;
    for k in 1..2000u64 {
        term *= q / (k as f64 * (k + n) as f64);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

fn bessel_i_miller(n: u64, z: C64) -> C64 {
    if z.re < 0.0 {
        let v = bessel_i_miller(n, -z);
        return if n.is_multiple_of(2) { v } else { -v };
    }
    let r = z.norm();
    let size = (n as f64).max(r).max(1.0);
    let mut start = size.ceil() as u64 + 20 + (60.0 * size).sqrt().ceil() as u64;
    start += start % 2;
    let two_over_z = 2.0 / z;
    let mut above = ZERO;
    let mut cur = ONE;
    let mut norm = ZERO;
    let mut saved = ZERO;
    for k in (1..=start).rev() {
        let below = cur * (two_over_z * k as f64) + above;
        above = cur;
        cur = below;
        if k - 1 == n {
            saved = cur;
        }
        if k - 1 > 0 {
            norm += cur * 2.0;
        } else {
            norm += cur;
        }
        if cur.norm() > 1e120 {
            let s = 1e-120;
            cur *= s;
            above *= s;
            norm *= s;
            saved *= s;
        }
    }
    saved / norm * z.exp()
}

/// Large-argument expansion of `I_n` for `|arg z| < pi/2`, optimally truncated.
pub fn bessel_i_asymptotic(n: i64, z: C64) -> C64 {
    let nu2 = 4.0 * (n * n) as f64;
    let mut term = ONE;
    let mut sum = ONE;
    for k in 1..200u64 {
        let next = term * (-(nu2 - ((2 * k - 1) * (2 * k - 1)) as f64) / (8.0 * k as f64) / z);
        if next.norm() >= term.norm() {
            break;
        }
        term = next;
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
    }
    z.exp() / (2.0 * PI * z).sqrt() * sum
}

/// `I_n(z)` for integer `n` and any complex `z`.
pub fn bessel_i(n: i64, z: C64) -> C64 {
    let r = z.norm();
    if r <= K_SMALL_RADIUS || (r <= 30.0 && r - z.re.abs() <= 1.5) {
        bessel_i_series(n, z)
    } else {
        bessel_i_miller(n.unsigned_abs(), z)
    }
}

/// The logarithmic expansion of `K_n` at the origin; valid on every sheet.
pub fn bessel_k_log_series(n: i64, z: CoverComplex) -> C64 {
    let n = n.unsigned_abs();
    let zc = z.to_complex();
    let half = zc * 0.5;
    let q = half * half;
    let mut finite = ZERO;
    if n > 0 {
        let mut pow = ONE;
        for k in 0..n {
            finite += pow * (factorial((n - k - 1) as usize) / factorial(k as usize));
            pow *= -q;
        }
        finite *= 0.5 * half.powi(-(n as i32));
    }
    let log_half = z.ln() - C64::new(2f64.ln(), 0.0);
    let sign = if n.is_multiple_of(2) { -1.0 } else { 1.0 };
    let log_part = log_half * bessel_i_series(n as i64, zc) * sign;
    let mut term = half.powu(n as u32) / factorial(n as usize);
    let mut psi_k = -EULER_GAMMA;
    let mut psi_nk = digamma_integer(n as usize);
    let mut tail = term * (psi_k + psi_nk);
    for k in 1..2000u64 {
        term *= q / (k as f64 * (k + n) as f64);
        psi_k += 1.0 / k as f64;
        psi_nk += 1.0 / (n + k) as f64;
        let add = term * (psi_k + psi_nk);
        tail += add;
        if add.norm() <= 1e-18 * tail.norm().max(1e-300) && k > 2 {
            break;
        }
    }
    let tail_sign = if n.is_multiple_of(2) { 0.5 } else { -0.5 };
    finite + log_part + tail * tail_sign
}

/// Large-argument expansion of `K_n`, valid for `|arg z| < 3 pi / 2`.
pub fn bessel_k_asymptotic(n: i64, z: CoverComplex) -> C64 {
    let nu2 = 4.0 * (n * n) as f64;
    let zc = z.to_complex();
    let mut term = ONE;
    let mut sum = ONE;
    for k in 1..200u64 {
        let next = term * ((nu2 - ((2 * k - 1) * (2 * k - 1)) as f64) / (8.0 * k as f64) / zc);
        if next.norm() >= term.norm() {
            break;
        }
        term = next;
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
    }
    (-zc).exp() * (PI / 2.0).sqrt() * z.powf(-0.5) * sum
}

fn k_integral_pair(z: C64) -> (C64, C64) {
    let h = 0.08;
    let inv2z = 0.5 / z;
    let mut k0 = ZERO;
    let mut k1 = ZERO;
    for j in 0..=90 {
        let t = j as f64 * h;
        let t2 = t * t;
        let w = if j == 0 { 0.5 } else { 1.0 } * (-t2).exp();
        let s = (ONE + inv2z * t2).sqrt();
        k0 += w / s;
        k1 += s * (w * t2);
    }
    let pre = (PI / (2.0 * z)).sqrt() * (-z).exp() * (2.0 * h);
    (pre * k0 / PI.sqrt(), pre * k1 / (0.5 * PI.sqrt()))
}

/// `K_n` on the half-plane `|arg z| <= pi/2` by the Gaussian-weighted integral
/// for orders 0 and 1 followed by the (stable) upward recurrence.
pub fn bessel_k_integral(n: i64, z: C64) -> C64 {
    let n = n.unsigned_abs();
    let (mut a, mut b) = k_integral_pair(z);
    if n == 0 {
        return a;
    }
    for j in 1..n {
        let next = a + b * (2.0 * j as f64) / z;
        a = b;
        b = next;
    }
    b
}

fn bessel_k_right_half(n: i64, z: CoverComplex) -> C64 {
    let r = z.modulus();
    if r <= K_SMALL_RADIUS {
        bessel_k_log_series(n, z)
    } else if r >= k_large_radius(n.unsigned_abs()) {
        bessel_k_asymptotic(n, z)
    } else {
        bessel_k_integral(n, z.to_complex())
    }
}

/// Splits `z = z0 e^{m pi i}` with `|arg z0| <= pi/2`.
fn reduce(z: CoverComplex) -> (CoverComplex, i64) {
    let m = (z.arg() / PI).round() as i64;
    (z.rotate(-(m as f64) * PI), m)
}

/// Right-hand side of the monodromy relation:
/// `K_n(z e^{m pi i}) = (-1)^{mn} K_n(z) - (-1)^{n(m-1)} m pi i I_n(z)`.
pub fn k_monodromy(n: i64, k_value: C64, i_value: C64, m: i64) -> C64 {
    let parity = |e: i64| if e.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    k_value * parity(m * n) - C64::new(0.0, PI * m as f64) * i_value * parity(n * (m - 1))
}

/// The equivalent form `K_n(z e^{m pi i}) = (-1)^{n(m-1)} m K_n(z e^{pi i}) - (-1)^{nm} (m-1) K_n(z)`.
pub fn k_monodromy_from_half_turn(n: i64, k_value: C64, k_half_turn: C64, m: i64) -> C64 {
    let parity = |e: i64| if e.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    k_half_turn * (parity(n * (m - 1)) * m as f64) - k_value * (parity(n * m) * (m - 1) as f64)
}

/// `K_n(z)` at any point of the universal cover.
pub fn bessel_k(n: i64, z: CoverComplex) -> C64 {
    let (z0, m) = reduce(z);
    let k0 = bessel_k_right_half(n, z0);
    if m == 0 {
        return k0;
    }
    k_monodromy(n, k0, bessel_i(n, z0.to_complex()), m)
}

/// [`bessel_k`] with a cross-check between neighbouring evaluation regimes when
/// `|z|` falls inside an overlap band.
pub fn bessel_k_checked(n: i64, z: CoverComplex) -> Result<C64> {
    let (z0, m) = reduce(z);
    let r = z0.modulus();
    let value = bessel_k_right_half(n, z0);
    let small = K_SMALL_RADIUS;
    let large = k_large_radius(n.unsigned_abs());
    let other = if (r - small).abs() <= K_OVERLAP_BAND * small {
        Some(if r <= small {
            bessel_k_integral(n, z0.to_complex())
        } else {
            bessel_k_log_series(n, z0)
        })
    } else if (r - large).abs() <= K_OVERLAP_BAND * large {
        Some(if r >= large {
            bessel_k_integral(n, z0.to_complex())
        } else {
            bessel_k_asymptotic(n, z0)
        })
    } else {
        None
    };
    if let Some(alt) = other {
        let mismatch = mixed_error(value, alt);
        if mismatch > OVERLAP_TOLERANCE {
            return Err(TodaError::OverlapMismatch {
                mismatch,
                modulus: r,
            });
        }
    }
    Ok(if m == 0 {
        value
    } else {
        k_monodromy(n, value, bessel_i(n, z0.to_complex()), m)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn cover(r: f64, a: f64) -> CoverComplex {
        CoverComplex::new(r, a).unwrap()
    }

    #[test]
    fn i_reference_values() {
        assert_eq!(bessel_i(0, c(0.0)), c(1.0));
        assert!((bessel_i(0, c(1.0)) - c(1.266_065_877_752_008_4)).norm() < 1e-15);
        assert!((bessel_i(1, c(1.0)) - c(0.565_159_103_992_485)).norm() < 1e-15);
        assert!((bessel_i(0, c(2.0)) - c(2.279_585_302_336_067_3)).norm() < 1e-14);
    }

    #[test]
    fn i_regimes_agree() {
        for &z in &[C64::new(3.0, 4.0), C64::new(0.5, 12.0), C64::new(-7.0, 2.0), C64::new(25.0, 0.3)] {
            for n in [0, 1, 3, 9] {
                let a = bessel_i_series(n, z);
                let b = bessel_i_miller(n as u64, z);
                assert!(mixed_error(a, b) < 1e-11, "n={n} z={z} {a} {b}");
            }
        }
        let z = c(60.0);
        assert!(mixed_error(bessel_i(1, z), bessel_i_asymptotic(1, z)) < 1e-12);
    }

    #[test]
    fn imaginary_argument_is_j_bessel() {
        // I_0(10 i) = J_0(10)
        assert!((bessel_i(0, C64::new(0.0, 10.0)) - c(-0.245_935_764_451_348_3)).norm() < 1e-13);
    }

    #[test]
    fn k_reference_values() {
        assert!((bessel_k(0, cover(1.0, 0.0)) - c(0.421_024_438_240_708_3)).norm() < 1e-14);
        assert!((bessel_k(1, cover(1.0, 0.0)) - c(0.601_907_230_197_234_6)).norm() < 1e-14);
        assert!((bessel_k(0, cover(5.0, 0.0)) - c(3.691_098_334_042_594_3e-3)).norm() < 1e-16);
        assert!((bessel_k(2, cover(40.0, 0.0)) - c(8.817_717_697_842_619e-19)).norm() < 1e-31);
    }

    #[test]
    fn k_regimes_agree_on_overlaps() {
        for &arg in &[0.0, 0.7, -1.2, 1.5] {
            for n in [0, 1, 2, 5] {
                for &r in &[1.7, 2.3, 4.0] {
                    let z = cover(r, arg);
                    let a = bessel_k_log_series(n, z);
                    let b = bessel_k_integral(n, z.to_complex());
                    assert!(mixed_error(a, b) < 1e-12, "n={n} r={r} arg={arg}");
                }
                let z = cover(35.0, arg);
                let a = bessel_k_asymptotic(n, z);
                let b = bessel_k_integral(n, z.to_complex());
                assert!((a - b).norm() <= 1e-12 * a.norm(), "n={n} arg={arg}");
            }
        }
        assert!(bessel_k_checked(3, cover(2.1, 0.4)).is_ok());
    }

    #[test]
    fn k_half_turn_monodromy() {
        let z = cover(1.3, 0.2);
        let lhs = bessel_k(0, z.rotate(PI));
        let rhs = bessel_k(0, z) - C64::new(0.0, PI) * bessel_i(0, z.to_complex());
        assert!((lhs - rhs).norm() < 1e-13);
        // the log expansion is valid on every sheet
        for m in [-3i64, -1, 1, 2, 4] {
            let w = z.rotate(PI * m as f64);
            assert!(mixed_error(bessel_k(2, w), bessel_k_log_series(2, w)) < 1e-12);
        }
    }

    #[test]
    fn k_two_monodromy_forms_agree() {
        for n in [0i64, 1, 4] {
            let z = cover(3.0, 0.4);
            let k = bessel_k(n, z);
            let kh = bessel_k(n, z.rotate(PI));
            for m in [-2i64, 2, 3] {
                let a = k_monodromy(n, k, bessel_i(n, z.to_complex()), m);
                let b = k_monodromy_from_half_turn(n, k, kh, m);
                assert!(mixed_error(a, b) < 1e-12);
                assert!(mixed_error(a, bessel_k(n, z.rotate(m as f64 * PI))) < 1e-12);
            }
        }
    }
}
