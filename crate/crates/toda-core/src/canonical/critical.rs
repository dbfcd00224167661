use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Result, TodaError};
use crate::laurent::{LaurentSeries, C64};
use crate::manifold::{ManifoldPoint, DEFAULT_FLOOR};

/// Distance from the unit circle below which a critical point is rejected.
pub const BOUNDARY_MARGIN: f64 = 1e-8;

/// A nondegenerate critical point of one of the superpotentials together with
/// its critical value and the modulus of the second derivative there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub z: C64,
    pub value: C64,
    pub second_derivative: C64,
}

/// Critical points of `lambda` outside the unit disc and of `lambdabar` inside it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalSet {
    pub outer: Vec<CriticalPoint>,
    pub inner: Vec<CriticalPoint>,
}

impl CriticalSet {
    /// Discrete canonical values in the order outer then inner.
    pub fn values(&self) -> Vec<C64> {
        self.outer.iter().chain(&self.inner).map(|c| c.value).collect()
    }

    /// Index pairs of discrete canonical values closer than `tol`.
    pub fn coincidences(&self, tol: f64) -> Vec<(usize, usize)> {
        let vals = self.values();
        let mut out = Vec::new();
        for a in 0..vals.len() {
            for b in a + 1..vals.len() {
                if (vals[a] - vals[b]).norm() < tol {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// Roots of a Laurent polynomial as eigenvalues of the companion matrix of
/// `z^{-kmin} f(z)`, polished by Newton iteration on `f`.
pub fn laurent_roots(f: &LaurentSeries) -> Vec<C64> {
    let scale = f.max_abs_coeff();
    if scale == 0.0 {
        return Vec::new();
    }
    let significant: Vec<(i64, C64)> = f.terms().filter(|(_, c)| c.norm() > 1e-15 * scale).collect();
    let (kmin, kmax) = match (significant.first(), significant.last()) {
        (Some(a), Some(b)) => (a.0, b.0),
        _ => return Vec::new(),
    };
    let degree = (kmax - kmin) as usize;
    if degree == 0 {
        return Vec::new();
    }
    let lead = f.coeff(kmax);
    let mut companion = DMatrix::<C64>::zeros(degree, degree);
    for i in 1..degree {
        companion[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..degree {
        companion[(i, degree - 1)] = -f.coeff(kmin + i as i64) / lead;
    }
    let (_, upper) = companion.schur().unpack();
    let derivative = f.derivative();
    (0..degree).map(|i| newton_polish(f, &derivative, upper[(i, i)])).collect()
}

fn newton_polish(f: &LaurentSeries, df: &LaurentSeries, start: C64) -> C64 {
    let mut z = start;
    if z.norm() < 1e-12 {
        return z;
    }
    for _ in 0..60 {
        let step = f.eval(z) / df.eval(z);
        if !step.is_finite() {
            break;
        }
        z -= step;
        if step.norm() <= 1e-16 * z.norm().max(1.0) {
            break;
        }
    }
    z
}

fn classify(
    roots: Vec<C64>,
    keep: impl Fn(f64) -> bool,
    second: &LaurentSeries,
    value: impl Fn(C64) -> C64,
    floor: f64,
) -> Result<Vec<CriticalPoint>> {
    let mut points = Vec::new();
    for z in roots {
        let distance = (z.norm() - 1.0).abs();
        if distance < BOUNDARY_MARGIN {
            return Err(TodaError::BoundaryRoot { root: format!("{z}"), distance });
        }
        if !keep(z.norm()) {
            continue;
        }
        let dd = second.eval(z);
        if dd.norm() < floor {
            return Err(TodaError::DegenerateCritical { root: format!("{z}"), second: dd.norm() });
        }
        points.push(CriticalPoint { z, value: value(z), second_derivative: dd });
    }
    points.sort_by(|a, b| a.z.arg().total_cmp(&b.z.arg()).then(a.z.norm().total_cmp(&b.z.norm())));
    Ok(points)
}

pub fn find_critical_set(pt: &ManifoldPoint) -> Result<CriticalSet> {
    find_critical_set_with_floor(pt, DEFAULT_FLOOR)
}

/// Roots of `lambda'` with `|z| > 1` with values `-lambda(z)`, and roots of
/// `lambdabar'` with `|z| < 1` with values `lambdabar(z)`.
pub fn find_critical_set_with_floor(pt: &ManifoldPoint, floor: f64) -> Result<CriticalSet> {
    let outer = pt.outer();
    let inner = pt.inner();
    let outer_d = outer.derivative();
    let inner_d = inner.derivative();
    let outer_points = classify(
        laurent_roots(&outer_d),
        |r| r > 1.0,
        &outer_d.derivative(),
        |z| -outer.eval(z),
        floor,
    )?;
    let inner_points = classify(
        laurent_roots(&inner_d),
        |r| r < 1.0,
        &inner_d.derivative(),
        |z| inner.eval(z),
        floor,
    )?;
    Ok(CriticalSet { outer: outer_points, inner: inner_points })
}
