use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::laurent::C64;
use crate::manifold::{ManifoldPoint, TangentTriple};

/// A linear functional on the Laurent-polynomial test vectors of the truncation
/// window, stored by its values on the basis `z^m` (`|m| <= N`) and on the two
/// scalar slots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakFunctional {
    order: usize,
    coeffs: Vec<C64>,
    pub v: C64,
    pub u: C64,
}

impl WeakFunctional {
    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            coeffs: vec![C64::new(0.0, 0.0); 2 * order + 1],
            v: C64::new(0.0, 0.0),
            u: C64::new(0.0, 0.0),
        }
    }

    /// Builds the functional whose value on `z^m` is `f(m)`.
    pub fn from_fn(order: usize, f: impl Fn(i64) -> C64, v: C64, u: C64) -> Self {
        let n = order as i64;
        let coeffs = (-n..=n).map(f).collect();
        Self { order, coeffs, v, u }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, m: i64) -> C64 {
        let n = self.order as i64;
        if m.abs() > n {
            C64::new(0.0, 0.0)
        } else {
            self.coeffs[(m + n) as usize]
        }
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn eval(&self, x: &TangentTriple) -> C64 {
        let n = self.order.min(x.order()) as i64;
        let sum: C64 = (-n..=n).map(|m| self.coeff(m) * x.function.coeff(m)).sum();
        sum + self.v * x.v + self.u * x.u
    }

    pub fn scale(&self, a: C64) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
            v: self.v * a,
            u: self.u * a,
        }
    }

    /// The functional `X -> eta(rep, X)` for a representable covector.
    pub fn from_representative(pt: &ManifoldPoint, rep: &TangentTriple) -> Self {
        let q = pt.divide_by_z_w_prime(&rep.function);
        Self::from_fn(pt.order(), |m| q.coeff(-m), rep.u, rep.v)
    }

    /// The pulled-back functional `X -> self(op(X))`, assembled on the basis.
    pub fn pullback(&self, op: impl Fn(&TangentTriple) -> TangentTriple) -> Self {
        let n = self.order;
        let on = |x: TangentTriple| self.eval(&op(&x));
        Self::from_fn(
            n,
            |m| on(TangentTriple::basis_power(n, m)),
            on(TangentTriple::unit(n)),
            on(TangentTriple::basis_u(n)),
        )
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        let n = self.order.max(other.order) as i64;
        (-n..=n)
            .map(|m| (self.coeff(m) - other.coeff(m)).norm())
            .fold((self.v - other.v).norm().max((self.u - other.u).norm()), f64::max)
    }
}

impl Add for &WeakFunctional {
    type Output = WeakFunctional;
    fn add(self, rhs: &WeakFunctional) -> WeakFunctional {
        let n = self.order.max(rhs.order);
        WeakFunctional::from_fn(n, |m| self.coeff(m) + rhs.coeff(m), self.v + rhs.v, self.u + rhs.u)
    }
}

impl Sub for &WeakFunctional {
    type Output = WeakFunctional;
    fn sub(self, rhs: &WeakFunctional) -> WeakFunctional {
        let n = self.order.max(rhs.order);
        WeakFunctional::from_fn(n, |m| self.coeff(m) - rhs.coeff(m), self.v - rhs.v, self.u - rhs.u)
    }
}
