use std::ops::{Add, Sub};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::laurent::{LaurentSeries, C64};
use crate::manifold::point::ManifoldPoint;

/// A tangent vector `(W(z), X_v, X_u)` in w-coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangentTriple {
    pub function: LaurentSeries,
    pub v: C64,
    pub u: C64,
}

impl TangentTriple {
    pub fn new(function: LaurentSeries, v: C64, u: C64) -> Self {
        Self { function, v, u }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(LaurentSeries::zeros(order), C64::new(0.0, 0.0), C64::new(0.0, 0.0))
    }

    /// The unit field `e = (0, 1, 0)`.
    pub fn unit(order: usize) -> Self {
        Self::new(LaurentSeries::zeros(order), C64::new(1.0, 0.0), C64::new(0.0, 0.0))
    }

    /// Test vector `e_m = (z^m, 0, 0)`.
    pub fn basis_power(order: usize, m: i64) -> Self {
        Self::new(
            LaurentSeries::monomial(order, m, C64::new(1.0, 0.0)),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        )
    }

    /// Test vector `e_u = (0, 0, 1)`.
    pub fn basis_u(order: usize) -> Self {
        Self::new(LaurentSeries::zeros(order), C64::new(0.0, 0.0), C64::new(1.0, 0.0))
    }

    pub fn order(&self) -> usize {
        self.function.order()
    }

    /// Pair form `(X, Xbar)` with `X` holding powers `<= 0` and `Xbar` powers `>= -1`.
    pub fn to_pair(&self, pt: &ManifoldPoint) -> (LaurentSeries, LaurentSeries) {
        let n = self.order();
        let tail = LaurentSeries::from_terms(n, &[(0, self.v), (-1, pt.e_u() * self.u)])
            .expect("window holds |k| <= 1");
        let outer = &self.function.at_most(0) - &tail;
        let inner = &self.function.at_least(1) + &tail;
        (outer, inner)
    }

    pub fn from_pair(pt: &ManifoldPoint, outer: &LaurentSeries, inner: &LaurentSeries) -> Self {
        Self::new(outer + inner, inner.coeff(0), inner.coeff(-1) / pt.e_u())
    }

    pub fn scale(&self, a: C64) -> Self {
        Self::new(self.function.scale(a), self.v * a, self.u * a)
    }

    /// `sup |coefficient|` over the function part and the two scalars.
    pub fn size(&self) -> f64 {
        self.function.max_abs_coeff().max(self.v.norm()).max(self.u.norm())
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        self.function
            .max_diff(&other.function)
            .max((self.v - other.v).norm())
            .max((self.u - other.u).norm())
    }

    /// A random vector whose function part is a Laurent polynomial with powers in
    /// `[-degree, degree]` and coefficients uniform in the unit square.
    pub fn random<R: Rng>(rng: &mut R, order: usize, degree: usize) -> Self {
        let mut sample = || C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let d = degree.min(order) as i64;
        let terms: Vec<(i64, C64)> = (-d..=d).map(|k| (k, sample())).collect();
        let function = LaurentSeries::from_terms(order, &terms).expect("degree within window");
        let v = sample();
        let u = sample();
        Self::new(function, v, u)
    }
}

impl Add for &TangentTriple {
    type Output = TangentTriple;
    fn add(self, rhs: &TangentTriple) -> TangentTriple {
        TangentTriple::new(&self.function + &rhs.function, self.v + rhs.v, self.u + rhs.u)
    }
}

impl Sub for &TangentTriple {
    type Output = TangentTriple;
    fn sub(self, rhs: &TangentTriple) -> TangentTriple {
        TangentTriple::new(&self.function - &rhs.function, self.v - rhs.v, self.u - rhs.u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::TruncationParams;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pair_round_trip() {
        let pt = ManifoldPoint::special(TruncationParams::default(), C64::new(0.3, 0.0), C64::new(0.5, 0.2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let x = TangentTriple::random(&mut rng, 32, 5);
            let (a, b) = x.to_pair(&pt);
            assert!(a.at_least(1).max_abs_coeff() == 0.0);
            assert!(b.at_most(-2).max_abs_coeff() == 0.0);
            let back = TangentTriple::from_pair(&pt, &a, &b);
            assert!(back.max_diff(&x) < 1e-12 * (1.0 + x.size()));
        }
    }
}
