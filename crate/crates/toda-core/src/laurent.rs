//! Truncated two-sided Laurent series on an annulus around the unit circle.
//!
//! A series of order `N` stores the coefficients `c_k` for `k = -N..=N`.
//! Values on the unit circle are obtained by an inverse FFT on `M` equispaced
//! nodes, coefficients are recovered by the forward FFT, and the trapezoid rule
//! on those nodes is exact for every Laurent polynomial of degree below `M`.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Result, TodaError};

pub type C64 = Complex64;

/// Default relative size of the edge coefficients above which a series is flagged.
pub const DEFAULT_SPILL_THRESHOLD: f64 = 1e-10;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(len)
        } else {
            p.plan_fft_forward(len)
        }
    })
}

/// Truncation order, quadrature size and default comparison tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationParams {
    pub order: usize,
    pub nodes: usize,
    pub tol: f64,
    pub spill_threshold: f64,
}

impl Default for TruncationParams {
    fn default() -> Self {
        Self {
            order: 32,
            nodes: 256,
            tol: 1e-10,
            spill_threshold: DEFAULT_SPILL_THRESHOLD,
        }
    }
}

impl TruncationParams {
    pub fn new(order: usize, nodes: usize) -> Result<Self> {
        let params = Self {
            order,
            nodes,
            ..Self::default()
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < 4 * self.order + 1 {
            return Err(TodaError::ConfigInvalid(format!(
                "quadrature nodes {} must be at least 4N+1 = {}",
                self.nodes,
                4 * self.order + 1
            )));
        }
        if !(self.tol > 0.0) || !(self.spill_threshold > 0.0) {
            return Err(TodaError::ConfigInvalid(
                "tolerances must be positive".to_string(),
            ));
        }
        Ok(())
    }
}

/// Mixed absolute/relative comparison `|a-b| <= tol (1 + max(|a|,|b|))`.
pub fn close(a: C64, b: C64, tol: f64) -> bool {
    mixed_error(a, b) <= tol
}

/// The quantity bounded by [`close`].
pub fn mixed_error(a: C64, b: C64) -> f64 {
    (a - b).norm() / (1.0 + a.norm().max(b.norm()))
}

/// Equispaced nodes `e^{2 pi i j / m}` on the unit circle.
pub fn unit_nodes(m: usize) -> Vec<C64> {
    (0..m)
        .map(|j| C64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64))
        .collect()
}

/// Coefficient selection modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projection {
    AtLeast(i64),
    AtMost(i64),
    Single(i64),
}

/// Result of a projection: a series for the half-line modes, a number for `Single`.
#[derive(Debug, Clone, PartialEq)]
pub enum Projected {
    Series(LaurentSeries),
    Scalar(C64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaurentSeries {
    order: usize,
    coeffs: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct SeriesWire {
    #[serde(rename = "N")]
    order: usize,
    coeffs: Vec<[f64; 2]>,
}

impl Serialize for LaurentSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesWire {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = SeriesWire::deserialize(d)?;
        if wire.coeffs.len() != 2 * wire.order + 1 {
            return Err(serde::de::Error::custom(format!(
                "expected {} coefficients for N = {}, found {}",
                2 * wire.order + 1,
                wire.order,
                wire.coeffs.len()
            )));
        }
        Ok(Self {
            order: wire.order,
            coeffs: wire.coeffs.iter().map(|c| C64::new(c[0], c[1])).collect(),
        })
    }
}

impl LaurentSeries {
    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            coeffs: vec![C64::new(0.0, 0.0); 2 * order + 1],
        }
    }

    /// Builds a series from coefficients listed for `k = -N..=N`.
    pub fn from_coeffs(order: usize, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != 2 * order + 1 {
            return Err(TodaError::ConfigInvalid(format!(
                "expected {} coefficients for N = {order}, found {}",
                2 * order + 1,
                coeffs.len()
            )));
        }
        Ok(Self { order, coeffs })
    }

    /// Builds a series from `(k, c_k)` pairs; powers outside the window are rejected.
    pub fn from_terms(order: usize, terms: &[(i64, C64)]) -> Result<Self> {
        let mut s = Self::zeros(order);
        for &(k, c) in terms {
            if k.unsigned_abs() as usize > order {
                return Err(TodaError::ConfigInvalid(format!(
                    "power {k} outside truncation window N = {order}"
                )));
            }
            s.coeffs[(k + order as i64) as usize] += c;
        }
        Ok(s)
    }

    pub fn monomial(order: usize, k: i64, c: C64) -> Self {
        let mut s = Self::zeros(order);
        s.set(k, c);
        s
    }

    pub fn constant(order: usize, c: C64) -> Self {
        Self::monomial(order, 0, c)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`; zero outside the stored window.
    pub fn coeff(&self, k: i64) -> C64 {
        if k.unsigned_abs() as usize > self.order {
            C64::new(0.0, 0.0)
        } else {
            self.coeffs[(k + self.order as i64) as usize]
        }
    }

    /// Sets the coefficient of `z^k`; silently ignores powers outside the window.
    pub fn set(&mut self, k: i64, c: C64) {
        if k.unsigned_abs() as usize <= self.order {
            self.coeffs[(k + self.order as i64) as usize] = c;
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        let n = self.order as i64;
        self.coeffs.iter().enumerate().map(move |(i, &c)| (i as i64 - n, c))
    }

    /// Re-embeds the series at another truncation order, dropping or zero-padding.
    pub fn with_order(&self, order: usize) -> Self {
        let mut s = Self::zeros(order);
        for (k, c) in self.terms() {
            s.set(k, c);
        }
        s
    }

    pub fn project(&self, mode: Projection) -> Projected {
        match mode {
            Projection::AtLeast(p) => Projected::Series(self.at_least(p)),
            Projection::AtMost(p) => Projected::Series(self.at_most(p)),
            Projection::Single(p) => Projected::Scalar(self.coeff(p)),
        }
    }

    /// `sum_{k >= p} c_k z^k`.
    pub fn at_least(&self, p: i64) -> Self {
        let mut s = self.clone();
        for (i, c) in s.coeffs.iter_mut().enumerate() {
            if (i as i64 - self.order as i64) < p {
                *c = C64::new(0.0, 0.0);
            }
        }
        s
    }

    /// `sum_{k <= p} c_k z^k`.
    pub fn at_most(&self, p: i64) -> Self {
        let mut s = self.clone();
        for (i, c) in s.coeffs.iter_mut().enumerate() {
            if (i as i64 - self.order as i64) > p {
                *c = C64::new(0.0, 0.0);
            }
        }
        s
    }

    pub fn scale(&self, a: C64) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
        }
    }

    /// Multiplication by `z^k`, truncated to the window.
    pub fn shift(&self, k: i64) -> Self {
        let mut s = Self::zeros(self.order);
        for (j, c) in self.terms() {
            s.set(j + k, c);
        }
        s
    }

    pub fn derivative(&self) -> Self {
        let mut s = Self::zeros(self.order);
        for (k, c) in self.terms() {
            s.set(k - 1, c * k as f64);
        }
        s
    }

    /// `z f'(z)`, which keeps every power in place.
    pub fn euler_derivative(&self) -> Self {
        Self {
            order: self.order,
            coeffs: self
                .terms()
                .map(|(k, c)| c * k as f64)
                .collect(),
        }
    }

    /// `(1/2 pi i) \oint f(z) dz / z`, read off as the constant coefficient.
    pub fn contour_mean(&self) -> C64 {
        self.coeff(0)
    }

    /// The same mean computed by the trapezoid rule on `m` nodes.
    pub fn contour_mean_quadrature(&self, m: usize) -> C64 {
        let s = self.samples(m);
        s.iter().sum::<C64>() / m as f64
    }

    pub fn eval(&self, z: C64) -> C64 {
        let zinv = z.inv();
        let mut pos = C64::new(0.0, 0.0);
        for k in (0..=self.order as i64).rev() {
            pos = pos * z + self.coeff(k);
        }
        let mut neg = C64::new(0.0, 0.0);
        for k in (1..=self.order as i64).rev() {
            neg = neg * zinv + self.coeff(-k);
        }
        pos + neg * zinv
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest edge coefficient relative to the largest coefficient.
    pub fn spill(&self) -> f64 {
        let max = self.max_abs_coeff();
        if max == 0.0 {
            return 0.0;
        }
        let n = self.order as i64;
        self.coeff(n).norm().max(self.coeff(-n).norm()) / max
    }

    pub fn is_resolved(&self, threshold: f64) -> bool {
        self.spill() <= threshold
    }

    pub fn check_resolved(&self, threshold: f64) -> Result<()> {
        let spill = self.spill();
        if spill > threshold {
            Err(TodaError::UnderResolved { spill, threshold })
        } else {
            Ok(())
        }
    }

    /// Truncated convolution product.
    pub fn mul(&self, other: &Self) -> Self {
        self.mul_with_spill(other).0
    }

    /// Truncated product together with the relative mass of the discarded terms.
    pub fn mul_with_spill(&self, other: &Self) -> (Self, f64) {
        let n = self.order.max(other.order) as i64;
        let mut full = vec![C64::new(0.0, 0.0); (4 * n + 1) as usize];
        for (i, a) in self.terms() {
            if a == C64::new(0.0, 0.0) {
                continue;
            }
            for (j, b) in other.terms() {
                full[(i + j + 2 * n) as usize] += a * b;
            }
        }
        let mut out = Self::zeros(n as usize);
        let mut kept = 0.0f64;
        let mut dropped = 0.0f64;
        for (idx, c) in full.iter().enumerate() {
            let k = idx as i64 - 2 * n;
            if k.abs() <= n {
                out.set(k, *c);
                kept = kept.max(c.norm());
            } else {
                dropped = dropped.max(c.norm());
            }
        }
        let spill = if kept > 0.0 {
            dropped / kept
        } else if dropped > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        (out, spill)
    }

    /// Truncated product that fails when the discarded mass exceeds `threshold`.
    pub fn mul_checked(&self, other: &Self, threshold: f64) -> Result<Self> {
        let (s, spill) = self.mul_with_spill(other);
        if spill > threshold {
            Err(TodaError::UnderResolved { spill, threshold })
        } else {
            Ok(s)
        }
    }

    /// Values at the `m` nodes `e^{2 pi i j/m}`.
    pub fn samples(&self, m: usize) -> Vec<C64> {
        let mut buf = vec![C64::new(0.0, 0.0); m];
        for (k, c) in self.terms() {
            buf[k.rem_euclid(m as i64) as usize] += c;
        }
        plan(m, true).process(&mut buf);
        buf
    }

    /// Coefficients `k = -N..=N` of the trigonometric interpolant of grid samples.
    pub fn from_samples(order: usize, samples: &[C64]) -> Self {
        Self::from_samples_with_tail(order, samples).0
    }

    /// Like [`Self::from_samples`], also returning the largest discarded
    /// interpolant coefficient relative to the largest kept one.
    pub fn from_samples_with_tail(order: usize, samples: &[C64]) -> (Self, f64) {
        let m = samples.len();
        let mut buf = samples.to_vec();
        plan(m, false).process(&mut buf);
        let scale = 1.0 / m as f64;
        let mut s = Self::zeros(order);
        let half = (m / 2) as i64;
        let mut kept = 0.0f64;
        let mut tail = 0.0f64;
        for idx in 0..m as i64 {
            let k = if idx > half { idx - m as i64 } else { idx };
            let c = buf[idx as usize] * scale;
            if k.unsigned_abs() as usize <= order {
                s.set(k, c);
                kept = kept.max(c.norm());
            } else {
                tail = tail.max(c.norm());
            }
        }
        let ratio = if kept > 0.0 { tail / kept } else { 0.0 };
        (s, ratio)
    }

    /// Series of a function sampled on `m` nodes of the unit circle.
    pub fn from_fn(order: usize, m: usize, f: impl Fn(C64) -> C64) -> Self {
        let vals: Vec<C64> = unit_nodes(m).into_iter().map(f).collect();
        Self::from_samples(order, &vals)
    }

    /// Pointwise combination on the grid, re-expanded at this series' order.
    pub fn zip_grid(&self, other: &Self, m: usize, f: impl Fn(C64, C64) -> C64) -> Self {
        let a = self.samples(m);
        let b = other.samples(m);
        let vals: Vec<C64> = a.iter().zip(&b).map(|(x, y)| f(*x, *y)).collect();
        Self::from_samples(self.order.max(other.order), &vals)
    }

    /// Quotient computed pointwise on `m` nodes.
    pub fn div_grid(&self, other: &Self, m: usize) -> Self {
        self.zip_grid(other, m, |a, b| a / b)
    }

    /// Applies `f` pointwise on the grid.
    pub fn map_grid(&self, m: usize, f: impl Fn(C64) -> C64) -> Self {
        let vals: Vec<C64> = self.samples(m).into_iter().map(f).collect();
        Self::from_samples(self.order, &vals)
    }

    /// Maximum modulus over `m` grid nodes.
    pub fn sup_on_grid(&self, m: usize) -> f64 {
        self.samples(m).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Minimum modulus over `m` grid nodes.
    pub fn inf_on_grid(&self, m: usize) -> f64 {
        self.samples(m)
            .iter()
            .map(|c| c.norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Coefficient-space distance `max_k |a_k - b_k|`.
    pub fn max_diff(&self, other: &Self) -> f64 {
        let n = self.order.max(other.order) as i64;
        (-n..=n)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        let n = self.order.max(rhs.order);
        let mut s = self.with_order(n);
        s += rhs;
        s
    }
}

impl Add for LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: LaurentSeries) -> LaurentSeries {
        &self + &rhs
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        let n = self.order.max(rhs.order);
        let mut s = self.with_order(n);
        s -= rhs;
        s
    }
}

impl Sub for LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: LaurentSeries) -> LaurentSeries {
        &self - &rhs
    }
}

impl AddAssign<&LaurentSeries> for LaurentSeries {
    fn add_assign(&mut self, rhs: &LaurentSeries) {
        for (k, c) in rhs.terms() {
            let cur = self.coeff(k);
            self.set(k, cur + c);
        }
    }
}

impl SubAssign<&LaurentSeries> for LaurentSeries {
    fn sub_assign(&mut self, rhs: &LaurentSeries) {
        for (k, c) in rhs.terms() {
            let cur = self.coeff(k);
            self.set(k, cur - c);
        }
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Neg for LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        -&self
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        LaurentSeries::mul(self, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn sample() -> LaurentSeries {
        LaurentSeries::from_terms(4, &[(1, c(1.0)), (0, c(2.0)), (-1, c(3.0))]).unwrap()
    }

    #[test]
    fn projections_select_coefficients() {
        let f = sample();
        assert_eq!(f.at_least(1), LaurentSeries::monomial(4, 1, c(1.0)));
        assert_eq!(f.project(Projection::Single(0)), Projected::Scalar(c(2.0)));
        let low = LaurentSeries::from_terms(4, &[(0, c(2.0)), (-1, c(3.0))]).unwrap();
        assert_eq!(f.at_most(0), low);
    }

    #[test]
    fn products_of_monomials() {
        let z = LaurentSeries::monomial(4, 1, c(1.0));
        let zi = LaurentSeries::monomial(4, -1, c(1.0));
        assert_eq!(z.mul(&zi), LaurentSeries::constant(4, c(1.0)));
        let a = LaurentSeries::from_terms(4, &[(0, c(1.0)), (1, c(1.0))]).unwrap();
        let b = LaurentSeries::from_terms(4, &[(0, c(1.0)), (1, c(-1.0))]).unwrap();
        let expect = LaurentSeries::from_terms(4, &[(0, c(1.0)), (2, c(-1.0))]).unwrap();
        assert_eq!(a.mul(&b), expect);
    }

    #[test]
    fn derivative_and_mean() {
        let z2 = LaurentSeries::monomial(3, 2, c(1.0));
        assert_eq!(z2.derivative(), LaurentSeries::monomial(3, 1, c(2.0)));
        let f = LaurentSeries::from_terms(3, &[(1, c(1.0)), (0, c(5.0)), (-1, c(1.0))]).unwrap();
        assert_eq!(f.contour_mean(), c(5.0));
        let g = LaurentSeries::from_terms(3, &[(0, c(1.0)), (-1, c(1.0))]).unwrap();
        assert_eq!(g.contour_mean(), c(1.0));
        assert_abs_diff_eq!((f.contour_mean_quadrature(13) - c(5.0)).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn grid_round_trip_is_spectral() {
        let f = LaurentSeries::from_terms(
            8,
            &[(8, C64::new(0.3, -0.1)), (-8, C64::new(-0.2, 0.4)), (3, c(1.5))],
        )
        .unwrap();
        let back = LaurentSeries::from_samples(8, &f.samples(33));
        assert!(f.max_diff(&back) < 1e-14);
    }

    #[test]
    fn overflowing_product_reports_spill() {
        let a = LaurentSeries::monomial(2, 2, c(1.0));
        assert!(a.mul_checked(&a, 1e-10).is_err());
        let (_, spill) = a.mul_with_spill(&LaurentSeries::monomial(2, -1, c(1.0)));
        assert_eq!(spill, 0.0);
    }

    #[test]
    fn serde_round_trip() {
        let f = sample();
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.starts_with("{\"N\":4"));
        let back: LaurentSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn truncation_params_need_enough_nodes() {
        assert!(TruncationParams::new(32, 128).is_err());
        assert!(TruncationParams::new(32, 129).is_ok());
    }
}
