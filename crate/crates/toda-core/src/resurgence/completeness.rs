use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Result, TodaError};
use crate::laurent::{LaurentSeries, C64};
use crate::manifold::{ManifoldPoint, TangentTriple};
use crate::specfun::gamma::factorial;
use crate::specfun::{CoverComplex, EULER_GAMMA};

use super::resummed::{ds_p, require_resummable};

/// Relative singular-value threshold for the numerical rank.
pub const RANK_TOL: f64 = 1e-10;

/// Numerical rank of the sampled family `[<ds_{p_j}(zeta), e_m>]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankReport {
    pub grid_size: usize,
    pub columns: usize,
    pub rank: usize,
    pub singular_values: Vec<f64>,
}

fn basis(order: usize, m_max: usize) -> Vec<TangentTriple> {
    let n = m_max as i64;
    let mut out: Vec<TangentTriple> = (-n..=n).map(|m| TangentTriple::basis_power(order, m)).collect();
    out.push(TangentTriple::unit(order));
    out.push(TangentTriple::basis_u(order));
    out
}

/// Grid `arg p_j = phi0 + 2 pi j / size` carried with unwrapped arguments.
pub fn p_grid(phi0: f64, size: usize) -> Vec<CoverComplex> {
    (0..size).map(|j| CoverComplex::unit(phi0 + 2.0 * PI * j as f64 / size as f64)).collect()
}

/// Samples `<ds_p(zeta), e_m>` on the grid for `|m| <= m_max` and the two scalar
/// slots, and fails unless the column rank is full.
pub fn completeness_probe(
    pt: &ManifoldPoint,
    zeta: CoverComplex,
    phi0: f64,
    grid_size: usize,
    m_max: usize,
) -> Result<RankReport> {
    require_resummable(pt)?;
    let columns = 2 * m_max + 3;
    let vectors = basis(m_max, m_max);
    let mut a = DMatrix::<C64>::zeros(grid_size, columns);
    for (j, p) in p_grid(phi0, grid_size).into_iter().enumerate() {
        let ds = ds_p(pt, p, zeta, m_max)?.coeffs;
        for (col, x) in vectors.iter().enumerate() {
            a[(j, col)] = ds.eval(x);
        }
    }
    for mut col in a.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 {
            col /= C64::new(norm, 0.0);
        }
    }
    let singular_values: Vec<f64> = a.singular_values().iter().copied().collect();
    let top = singular_values.iter().copied().fold(0.0, f64::max);
    let rank = singular_values.iter().filter(|s| **s > RANK_TOL * top).count();
    if rank < columns {
        return Err(TodaError::RankDeficient { rank, required: columns });
    }
    Ok(RankReport {
        grid_size,
        columns,
        rank,
        singular_values,
    })
}

/// A finite combination of `p^k` and `p^k log(-zeta e^u / p)`.
#[derive(Debug, Clone, Default, PartialEq)]
struct LogLaurent {
    regular: BTreeMap<i64, C64>,
    log: BTreeMap<i64, C64>,
}

impl LogLaurent {
    fn add_regular(&mut self, k: i64, c: C64) {
        *self.regular.entry(k).or_default() += c;
    }

    fn add_log(&mut self, k: i64, c: C64) {
        *self.log.entry(k).or_default() += c;
    }

    fn axpy(&mut self, a: C64, other: &LogLaurent) {
        for (k, c) in &other.regular {
            self.add_regular(*k, a * c);
        }
        for (k, c) in &other.log {
            self.add_log(*k, a * c);
        }
    }

    fn regular_at(&self, k: i64) -> C64 {
        self.regular.get(&k).copied().unwrap_or_default()
    }

    fn log_at(&self, k: i64) -> C64 {
        self.log.get(&k).copied().unwrap_or_default()
    }
}

/// `front * p^shift * K_n(2c/p)` expanded around `p = infinity`, with `c = -zeta e^u`.
fn bessel_k_expansion(n: u64, c: C64, front: C64, shift: i64, terms: usize, out: &mut LogLaurent) {
    let ni = n as i64;
    for k in 0..n {
        let coeff = 0.5 * if k % 2 == 0 { 1.0 } else { -1.0 } * factorial((n - k - 1) as usize) / factorial(k as usize);
        out.add_regular(shift + ni - 2 * k as i64, front * c.powi(2 * k as i32 - ni as i32) * coeff);
    }
    let log_sign = if n.is_multiple_of(2) { -1.0 } else { 1.0 };
    let tail_sign = if n.is_multiple_of(2) { 0.5 } else { -0.5 };
    let mut harmonic_k = 0.0;
    let mut harmonic_nk: f64 = (1..=n).map(|j| 1.0 / j as f64).sum();
    for k in 0..terms {
        if k > 0 {
            harmonic_k += 1.0 / k as f64;
            harmonic_nk += 1.0 / (n as usize + k) as f64;
        }
        let base = c.powi((ni + 2 * k as i64) as i32) / (factorial(k) * factorial(n as usize + k));
        let power = shift - ni - 2 * k as i64;
        out.add_log(power, front * base * log_sign);
        let psi = harmonic_k + harmonic_nk - 2.0 * EULER_GAMMA;
        out.add_regular(power, front * base * (psi * tail_sign));
    }
}

fn basis_expansion(pt: &ManifoldPoint, c: C64, slot: Slot, terms: usize) -> LogLaurent {
    let e_u = pt.e_u();
    let one = C64::new(1.0, 0.0);
    let mut out = LogLaurent::default();
    match slot {
        Slot::Power(m) => {
            let n = m.unsigned_abs();
            bessel_k_expansion(n, c, e_u, m - 2, terms, &mut out);
            if m >= 1 {
                bessel_k_expansion(n, c, one, m, terms, &mut out);
            }
        }
        Slot::V => bessel_k_expansion(0, c, one, 0, terms, &mut out),
        Slot::U => bessel_k_expansion(1, c, e_u, -1, terms, &mut out),
    }
    out
}

#[derive(Debug, Clone, Copy)]
enum Slot {
    Power(i64),
    V,
    U,
}

/// Reconstructs a Laurent-polynomial tangent vector with `|m| <= m_max` from the
/// values `<ds_p(zeta), X>` on a grid of `fit_points` values of `arg p` starting
/// at `phi0`, by separating the `p^{2k}` and `p^{2k} log` components and peeling
/// off the unknowns in triangular order: the top powers first, then `X_v` from
/// the constant logarithmic term, `X_u` from the constant term, and finally the
/// nonpositive powers from the remaining logarithmic terms.
pub fn triangular_reconstruction(
    pt: &ManifoldPoint,
    zeta: CoverComplex,
    phi0: f64,
    x: &TangentTriple,
    m_max: usize,
    fit_points: usize,
) -> Result<TangentTriple> {
    require_resummable(pt)?;
    let c = -zeta.to_complex() * pt.e_u();
    let terms = 16 + (6.0 * c.norm()).ceil() as usize;
    let n = m_max as i64;
    let low = -2 * (n + 1) - 2 * terms as i64;
    let regular_powers: Vec<i64> = (low / 2..=n).map(|k| 2 * k).collect();
    let log_powers: Vec<i64> = (low / 2..=0).map(|k| 2 * k).collect();
    let unknowns = regular_powers.len() + log_powers.len();
    if fit_points < unknowns {
        return Err(TodaError::RankDeficient { rank: fit_points, required: unknowns });
    }
    let front = C64::new(0.0, -1.0 / PI) * (zeta.to_complex() * pt.v()).exp() * zeta.sqrt();
    let mut design = DMatrix::<C64>::zeros(fit_points, unknowns);
    let mut rhs = DVector::<C64>::zeros(fit_points);
    for (j, p) in p_grid(phi0, fit_points).into_iter().enumerate() {
        let pc = p.to_complex();
        let log = C64::new(c.norm().ln(), zeta.arg() + pt.u().im + PI - p.arg());
        for (col, k) in regular_powers.iter().enumerate() {
            design[(j, col)] = pc.powi(*k as i32);
        }
        for (col, k) in log_powers.iter().enumerate() {
            design[(j, regular_powers.len() + col)] = pc.powi(*k as i32) * log;
        }
        rhs[j] = ds_p(pt, p, zeta, m_max)?.coeffs.eval(x) / front;
    }
    let svd = design.svd(true, true);
    let solution = svd
        .solve(&rhs, 1e-14)
        .map_err(|e| TodaError::ConfigInvalid(format!("least-squares separation failed: {e}")))?;
    let mut residual = LogLaurent::default();
    for (col, k) in regular_powers.iter().enumerate() {
        residual.add_regular(*k, solution[col]);
    }
    for (col, k) in log_powers.iter().enumerate() {
        residual.add_log(*k, solution[regular_powers.len() + col]);
    }

    let mut function = LaurentSeries::zeros(m_max);
    let peel = |slot: Slot, pivot: C64, pick: &dyn Fn(&LogLaurent) -> C64, residual: &mut LogLaurent| {
        let expansion = basis_expansion(pt, c, slot, terms);
        let value = pivot / pick(&expansion);
        residual.axpy(-value, &expansion);
        value
    };
    for j in (1..=n).rev() {
        let k = 2 * j;
        let pivot = residual.regular_at(k);
        let value = peel(Slot::Power(j), pivot, &|e| e.regular_at(k), &mut residual);
        function.set(j, value);
    }
    let pivot = residual.log_at(0);
    let xv = peel(Slot::V, pivot, &|e| e.log_at(0), &mut residual);
    let pivot = residual.regular_at(0);
    let xu = peel(Slot::U, pivot, &|e| e.regular_at(0), &mut residual);
    for s in 0..=n {
        let k = -2 * s - 2;
        let pivot = residual.log_at(k);
        let value = peel(Slot::Power(-s), pivot, &|e| e.log_at(k), &mut residual);
        function.set(-s, value);
    }
    Ok(TangentTriple::new(function, xv, xu))
}
