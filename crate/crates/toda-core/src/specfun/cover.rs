use std::f64::consts::PI;
use std::fmt;
use std::ops::{Div, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{Result, TodaError};
use crate::laurent::C64;

/// A point of the universal cover of the punctured plane.
///
/// The argument is never reduced, so `z * e^{2 pi i}` and `z` are distinct
/// points with the same projection to the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverComplex {
    modulus: f64,
    arg: f64,
}

impl CoverComplex {
    pub fn new(modulus: f64, arg: f64) -> Result<Self> {
        if !(modulus > 0.0) || !modulus.is_finite() || !arg.is_finite() {
            return Err(TodaError::ConfigInvalid(format!(
                "cover point needs positive finite modulus and finite argument, got ({modulus}, {arg})"
            )));
        }
        Ok(Self { modulus, arg })
    }

    /// Lifts a nonzero complex number to the principal sheet.
    pub fn principal(z: C64) -> Result<Self> {
        Self::new(z.norm(), z.arg())
    }

    /// Lifts `z` to the sheet whose argument is closest to `reference`.
    pub fn lift_near(z: C64, reference: f64) -> Result<Self> {
        let base = z.arg();
        let turns = ((reference - base) / (2.0 * PI)).round();
        Self::new(z.norm(), base + turns * 2.0 * PI)
    }

    pub fn unit(arg: f64) -> Self {
        Self { modulus: 1.0, arg }
    }

    pub fn modulus(&self) -> f64 {
        self.modulus
    }

    pub fn arg(&self) -> f64 {
        self.arg
    }

    pub fn to_complex(&self) -> C64 {
        C64::from_polar(self.modulus, self.arg)
    }

    /// `ln|z| + i arg z` with the unwrapped argument.
    pub fn ln(&self) -> C64 {
        C64::new(self.modulus.ln(), self.arg)
    }

    /// `z^a` for real `a`, continuous along the cover.
    pub fn powf(&self, a: f64) -> C64 {
        C64::from_polar(self.modulus.powf(a), a * self.arg)
    }

    pub fn sqrt(&self) -> C64 {
        self.powf(0.5)
    }

    /// Rotation by `e^{i angle}` along the cover.
    pub fn rotate(&self, angle: f64) -> Self {
        Self {
            modulus: self.modulus,
            arg: self.arg + angle,
        }
    }

    /// The point reached after `turns` full counter-clockwise loops.
    pub fn wind(&self, turns: i32) -> Self {
        self.rotate(2.0 * PI * turns as f64)
    }

    pub fn scale(&self, factor: f64) -> Result<Self> {
        Self::new(self.modulus * factor, self.arg)
    }

    pub fn inv(&self) -> Self {
        Self {
            modulus: 1.0 / self.modulus,
            arg: -self.arg,
        }
    }
}

impl Mul for CoverComplex {
    type Output = CoverComplex;
    fn mul(self, rhs: CoverComplex) -> CoverComplex {
        CoverComplex {
            modulus: self.modulus * rhs.modulus,
            arg: self.arg + rhs.arg,
        }
    }
}

impl Div for CoverComplex {
    type Output = CoverComplex;
    fn div(self, rhs: CoverComplex) -> CoverComplex {
        self * rhs.inv()
    }
}

impl fmt::Display for CoverComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·e^(i·{})", self.modulus, self.arg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn winding_flips_square_root() {
        let z = CoverComplex::new(2.0, 0.3).unwrap();
        let a = z.sqrt();
        let b = z.wind(1).sqrt();
        assert!((a + b).norm() < 1e-15);
        assert!((z.wind(2).sqrt() - a).norm() < 1e-15);
    }

    #[test]
    fn rejects_zero_modulus() {
        assert!(CoverComplex::new(0.0, 1.0).is_err());
        assert!(CoverComplex::principal(C64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn lift_near_picks_sheet() {
        let z = CoverComplex::lift_near(C64::new(-1.0, 1e-3), -PI).unwrap();
        assert!((z.arg() + PI).abs() < 1e-2);
    }

    proptest! {
        #[test]
        fn multiplication_adds_arguments(r1 in 0.1f64..10.0, a1 in -20.0f64..20.0, r2 in 0.1f64..10.0, a2 in -20.0f64..20.0) {
            let z = CoverComplex::new(r1, a1).unwrap();
            let w = CoverComplex::new(r2, a2).unwrap();
            let p = z * w;
            prop_assert!((p.arg() - (a1 + a2)).abs() < 1e-12);
            prop_assert!((p.to_complex() - z.to_complex() * w.to_complex()).norm() < 1e-10 * p.modulus());
            prop_assert!(((p.sqrt()) - z.sqrt() * w.sqrt()).norm() < 1e-10 * p.modulus().sqrt());
        }
    }
}
