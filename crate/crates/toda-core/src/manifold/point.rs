use serde::{Deserialize, Serialize};

use crate::error::{Result, TodaError};
use crate::laurent::{unit_nodes, LaurentSeries, TruncationParams, C64};

/// Default floor for the non-vanishing conditions on the grid.
pub const DEFAULT_FLOOR: f64 = 1e-6;

/// A point of the manifold in w-coordinates `(w(z), v, u)`, together with the
/// grid data shared by every operator at that point.
#[derive(Debug, Clone)]
pub struct ManifoldPoint {
    params: TruncationParams,
    w: LaurentSeries,
    v: C64,
    u: C64,
    e_u: C64,
    w_prime: LaurentSeries,
    z_w_prime: LaurentSeries,
    inv_z_w_prime: Vec<C64>,
    min_w_prime: f64,
}

#[derive(Serialize, Deserialize)]
struct PointWire {
    w: LaurentSeries,
    v: [f64; 2],
    u: [f64; 2],
}

impl Serialize for ManifoldPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PointWire {
            w: self.w.clone(),
            v: [self.v.re, self.v.im],
            u: [self.u.re, self.u.im],
        }
        .serialize(s)
    }
}

impl ManifoldPoint {
    /// Builds the point from `w`, `v` and a chosen logarithm `u` of the leading
    /// coefficient of the inner superpotential.
    pub fn from_w_coords(params: TruncationParams, w: LaurentSeries, v: C64, u: C64) -> Result<Self> {
        params.validate()?;
        let w = w.with_order(params.order);
        let e_u = u.exp();
        if e_u.norm() < DEFAULT_FLOOR {
            return Err(TodaError::T1Violation { modulus: e_u.norm() });
        }
        let w_prime = w.derivative();
        let z_w_prime = w.euler_derivative();
        let zw_samples = z_w_prime.samples(params.nodes);
        let min_w_prime = zw_samples.iter().map(|c| c.norm()).fold(f64::INFINITY, f64::min);
        let inv_z_w_prime = zw_samples.iter().map(|c| c.inv()).collect();
        Ok(Self {
            params,
            w,
            v,
            u,
            e_u,
            w_prime,
            z_w_prime,
            inv_z_w_prime,
            min_w_prime,
        })
    }

    /// Builds the point from the two superpotentials. The logarithm `u` is the
    /// principal one and is recorded as such.
    pub fn from_superpotentials(
        params: TruncationParams,
        outer: &LaurentSeries,
        inner: &LaurentSeries,
    ) -> Result<Self> {
        let n = params.order;
        let outer = outer.with_order(n);
        let inner = inner.with_order(n);
        if (outer.coeff(1) - C64::new(1.0, 0.0)).norm() > 1e-14
            || (2..=n as i64).any(|k| outer.coeff(k) != C64::new(0.0, 0.0))
        {
            return Err(TodaError::ConfigInvalid(
                "outer superpotential must be z + (nonpositive powers)".to_string(),
            ));
        }
        if (2..=n as i64).any(|k| inner.coeff(-k) != C64::new(0.0, 0.0)) {
            return Err(TodaError::ConfigInvalid(
                "inner superpotential may not contain powers below z^-1".to_string(),
            ));
        }
        let leading = inner.coeff(-1);
        if leading.norm() < DEFAULT_FLOOR {
            return Err(TodaError::T1Violation { modulus: leading.norm() });
        }
        let w = &outer + &inner;
        Self::from_w_coords(params, w, inner.coeff(0), leading.ln())
    }

    /// The special point with `w = z`.
    pub fn special(params: TruncationParams, v: C64, e_u: C64) -> Result<Self> {
        if e_u.norm() < DEFAULT_FLOOR {
            return Err(TodaError::T1Violation { modulus: e_u.norm() });
        }
        let w = LaurentSeries::monomial(params.order, 1, C64::new(1.0, 0.0));
        Self::from_w_coords(params, w, v, e_u.ln())
    }

    pub fn params(&self) -> &TruncationParams {
        &self.params
    }

    pub fn order(&self) -> usize {
        self.params.order
    }

    pub fn nodes(&self) -> usize {
        self.params.nodes
    }

    pub fn w(&self) -> &LaurentSeries {
        &self.w
    }

    pub fn v(&self) -> C64 {
        self.v
    }

    pub fn u(&self) -> C64 {
        self.u
    }

    pub fn e_u(&self) -> C64 {
        self.e_u
    }

    pub fn w_prime(&self) -> &LaurentSeries {
        &self.w_prime
    }

    /// `z w'(z)`.
    pub fn z_w_prime(&self) -> &LaurentSeries {
        &self.z_w_prime
    }

    /// Samples of `1 / (z w'(z))` on the quadrature grid.
    pub fn inv_z_w_prime_samples(&self) -> &[C64] {
        &self.inv_z_w_prime
    }

    pub fn min_w_prime(&self) -> f64 {
        self.min_w_prime
    }

    /// Fails unless `w'` stays above `floor` on the grid.
    pub fn require_regular(&self, floor: f64) -> Result<()> {
        if self.min_w_prime < floor {
            Err(TodaError::T2Violation {
                min_modulus: self.min_w_prime,
            })
        } else {
            Ok(())
        }
    }

    /// `lambda(z) = w_{<=0} + z - v - e^u / z`.
    pub fn outer(&self) -> LaurentSeries {
        let n = self.order();
        let mut s = self.w.at_most(0);
        s += &LaurentSeries::from_terms(n, &[(1, C64::new(1.0, 0.0)), (0, -self.v), (-1, -self.e_u)])
            .expect("window holds |k| <= 1");
        s
    }

    /// `lambdabar(z) = w_{>=1} - z + v + e^u / z`.
    pub fn inner(&self) -> LaurentSeries {
        let n = self.order();
        let mut s = self.w.at_least(1);
        s += &LaurentSeries::from_terms(n, &[(1, C64::new(-1.0, 0.0)), (0, self.v), (-1, self.e_u)])
            .expect("window holds |k| <= 1");
        s
    }

    /// Whether `w` is exactly `z`, i.e. the point lies on the special two-dimensional family.
    pub fn is_special(&self) -> bool {
        let z = LaurentSeries::monomial(self.order(), 1, C64::new(1.0, 0.0));
        self.w.max_diff(&z) == 0.0
    }

    /// Grid nodes `e^{2 pi i j / M}`.
    pub fn grid(&self) -> Vec<C64> {
        unit_nodes(self.nodes())
    }

    /// Series of `f / (z w')` computed on the grid.
    pub fn divide_by_z_w_prime(&self, f: &LaurentSeries) -> LaurentSeries {
        let vals: Vec<C64> = f
            .samples(self.nodes())
            .iter()
            .zip(&self.inv_z_w_prime)
            .map(|(a, b)| a * b)
            .collect();
        LaurentSeries::from_samples(self.order(), &vals)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn special_point_superpotentials() {
        let pt = ManifoldPoint::special(TruncationParams::default(), c(0.0), c(0.5)).unwrap();
        let outer = LaurentSeries::from_terms(32, &[(1, c(1.0)), (-1, c(-0.5))]).unwrap();
        let inner = LaurentSeries::from_terms(32, &[(-1, c(0.5))]).unwrap();
        assert_eq!(pt.outer(), outer);
        assert_eq!(pt.inner(), inner);
        assert!(pt.is_special());
    }

    #[test]
    fn w_coordinate_round_trip() {
        let params = TruncationParams::default();
        let outer = LaurentSeries::from_terms(32, &[(1, c(1.0)), (0, c(0.3)), (-1, C64::new(0.2, 0.1)), (-2, c(0.05))]).unwrap();
        let inner = LaurentSeries::from_terms(32, &[(-1, c(0.7)), (0, c(-0.4)), (2, c(0.1))]).unwrap();
        let pt = ManifoldPoint::from_superpotentials(params, &outer, &inner).unwrap();
        assert!((pt.v() - c(-0.4)).norm() < 1e-15);
        assert!((pt.e_u() - c(0.7)).norm() < 1e-15);
        assert!(pt.outer().max_diff(&outer) < 1e-15);
        assert!(pt.inner().max_diff(&inner) < 1e-15);
        let back = ManifoldPoint::from_w_coords(params, pt.w().clone(), pt.v(), pt.u()).unwrap();
        assert!(back.outer().max_diff(&outer) < 1e-15);
    }

    #[test]
    fn vanishing_leading_coefficient_is_rejected() {
        let params = TruncationParams::default();
        let outer = LaurentSeries::monomial(32, 1, c(1.0));
        let inner = LaurentSeries::constant(32, c(1.0));
        assert!(matches!(
            ManifoldPoint::from_superpotentials(params, &outer, &inner),
            Err(TodaError::T1Violation { .. })
        ));
    }
}
