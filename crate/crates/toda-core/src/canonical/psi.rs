use serde::{Deserialize, Serialize};

use crate::canonical::critical::CriticalSet;
use crate::error::{Result, TodaError};
use crate::laurent::{LaurentSeries, C64};
use crate::manifold::{ManifoldPoint, TangentTriple, DEFAULT_FLOOR};

/// A tangent vector in canonical form: the continuous part sampled on the grid
/// nodes, followed by the outer and inner discrete components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalData {
    pub continuous: Vec<C64>,
    pub outer: Vec<C64>,
    pub inner: Vec<C64>,
}

impl CanonicalData {
    pub fn max_diff(&self, other: &Self) -> f64 {
        let pairs = |a: &[C64], b: &[C64]| {
            a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
        };
        pairs(&self.continuous, &other.continuous)
            .max(pairs(&self.outer, &other.outer))
            .max(pairs(&self.inner, &other.inner))
    }

    pub fn size(&self) -> f64 {
        self.continuous
            .iter()
            .chain(&self.outer)
            .chain(&self.inner)
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Multiplies the continuous samples by `f(p)` and each discrete slot by its own factor.
    pub fn weighted(&self, continuous: &[C64], outer: &[C64], inner: &[C64]) -> Self {
        let mul = |a: &[C64], b: &[C64]| a.iter().zip(b).map(|(x, y)| x * y).collect();
        Self {
            continuous: mul(&self.continuous, continuous),
            outer: mul(&self.outer, outer),
            inner: mul(&self.inner, inner),
        }
    }
}

struct GridData {
    nodes: Vec<C64>,
    outer_d: Vec<C64>,
    inner_d: Vec<C64>,
    w_d: Vec<C64>,
}

fn grid_data(pt: &ManifoldPoint) -> Result<GridData> {
    pt.require_regular(DEFAULT_FLOOR)?;
    let m = pt.nodes();
    let outer_d = pt.outer().derivative().samples(m);
    let inner_d = pt.inner().derivative().samples(m);
    let min = outer_d.iter().chain(&inner_d).map(|c| c.norm()).fold(f64::INFINITY, f64::min);
    if min < DEFAULT_FLOOR {
        return Err(TodaError::ParameterOutOfScope {
            detail: format!("superpotential derivative vanishes on the unit circle (min {min:.3e})"),
        });
    }
    Ok(GridData { nodes: pt.grid(), outer_d, inner_d, w_d: pt.w_prime().samples(m) })
}

/// `Psi(X) = (<du_p, X> on the grid, <du_i, X>, <dubar_j, X>)`.
pub fn psi_forward(pt: &ManifoldPoint, crit: &CriticalSet, x: &TangentTriple) -> Result<CanonicalData> {
    let g = grid_data(pt)?;
    let m = pt.nodes();
    let (outer, inner) = x.to_pair(pt);
    let xs = outer.samples(m);
    let xbs = inner.samples(m);
    let continuous = (0..m)
        .map(|j| {
            let sigma = g.outer_d[j] / g.w_d[j];
            (sigma - 1.0) * xs[j] + sigma * xbs[j]
        })
        .collect();
    Ok(CanonicalData {
        continuous,
        outer: crit.outer.iter().map(|c| -outer.eval(c.z)).collect(),
        inner: crit.inner.iter().map(|c| inner.eval(c.z)).collect(),
    })
}

/// Inverse of `psi_forward`.
pub fn psi_inverse(pt: &ManifoldPoint, crit: &CriticalSet, data: &CanonicalData) -> Result<TangentTriple> {
    let g = grid_data(pt)?;
    let m = pt.nodes();
    let n = pt.order();
    if data.continuous.len() != m || data.outer.len() != crit.outer.len() || data.inner.len() != crit.inner.len() {
        return Err(TodaError::ParameterOutOfScope {
            detail: "canonical data does not match the grid and critical set".to_string(),
        });
    }
    let ratio: Vec<C64> = (0..m)
        .map(|j| g.w_d[j] * data.continuous[j] / (g.outer_d[j] * g.inner_d[j]))
        .collect();
    let ratio = LaurentSeries::from_samples(n, &ratio);
    let upper = ratio.at_least(1).samples(m);
    let lower = ratio.at_most(0).samples(m);
    let mu: Vec<C64> = g
        .nodes
        .iter()
        .map(|&p| {
            let outer: C64 = crit
                .outer
                .iter()
                .zip(&data.outer)
                .map(|(c, y)| y / (c.z * c.second_derivative) * p / (c.z - p))
                .sum();
            let inner: C64 = crit
                .inner
                .iter()
                .zip(&data.inner)
                .map(|(c, y)| y / (c.z * c.second_derivative) * p / (c.z - p))
                .sum();
            outer - inner
        })
        .collect();
    let xbar: Vec<C64> = (0..m).map(|j| g.inner_d[j] * (mu[j] + upper[j])).collect();
    let x: Vec<C64> = (0..m).map(|j| -g.outer_d[j] * (lower[j] - mu[j])).collect();
    Ok(TangentTriple::from_pair(
        pt,
        &LaurentSeries::from_samples(n, &x),
        &LaurentSeries::from_samples(n, &xbar),
    ))
}

/// The metric in canonical form:
/// `-(1/2 pi i) \oint w' X Y / (lambda' lambdabar') dz/z^2 - sum X_i Y_i / (z_i^2 lambda''(z_i))
///  + sum Xbar_j Ybar_j / (zbar_j^2 lambdabar''(zbar_j))`.
pub fn metric_canonical(
    pt: &ManifoldPoint,
    crit: &CriticalSet,
    a: &CanonicalData,
    b: &CanonicalData,
) -> Result<C64> {
    let g = grid_data(pt)?;
    let m = pt.nodes();
    let integral: C64 = (0..m)
        .map(|j| g.w_d[j] * a.continuous[j] * b.continuous[j] / (g.outer_d[j] * g.inner_d[j] * g.nodes[j]))
        .sum::<C64>()
        / m as f64;
    let outer: C64 = crit
        .outer
        .iter()
        .zip(a.outer.iter().zip(&b.outer))
        .map(|(c, (x, y))| x * y / (c.z * c.z * c.second_derivative))
        .sum();
    let inner: C64 = crit
        .inner
        .iter()
        .zip(a.inner.iter().zip(&b.inner))
        .map(|(c, (x, y))| x * y / (c.z * c.z * c.second_derivative))
        .sum();
    Ok(-integral - outer + inner)
}
