use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::canonical::WeakFunctional;
use crate::error::{Result, TodaError};
use crate::laurent::C64;
use crate::manifold::ManifoldPoint;
use crate::specfun::CoverComplex;

use super::completeness::p_grid;
use super::resummed::{ds_minus_p, ds_p, relative_gap, require_resummable};

/// A 2x2 complex matrix, row-major.
pub type Matrix2 = [[C64; 2]; 2];

/// Largest condition number accepted when solving for Stokes entries.
pub const MAX_CONDITION: f64 = 1e10;

/// Sampling of the two overlap sectors around an admissible line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StokesSampling {
    pub theta: f64,
    pub epsilon: f64,
    pub zeta_abs: f64,
    pub m_max: usize,
}

impl StokesSampling {
    pub fn new(theta: f64) -> Self {
        Self {
            theta,
            epsilon: 0.1,
            zeta_abs: 5.0,
            m_max: 8,
        }
    }
}

/// Recovered Stokes matrices of the pair `(ds_p, ds_{-p})`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StokesPair {
    pub s_plus: Matrix2,
    pub s_minus: Matrix2,
    pub monodromy: Matrix2,
    pub max_entry_error: f64,
    pub monodromy_error: f64,
    pub dominance_consistent: bool,
    pub condition: f64,
}

/// `S_- = [[1, 0], [-2, 1]]`.
pub fn expected_s_minus() -> Matrix2 {
    let (one, zero, two) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(-2.0, 0.0));
    [[one, zero], [two, one]]
}

/// `S_+ = [[1, -2], [0, 1]]`.
pub fn expected_s_plus() -> Matrix2 {
    transpose(&expected_s_minus())
}

pub fn transpose(a: &Matrix2) -> Matrix2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

pub fn matmul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn inverse(a: &Matrix2) -> Matrix2 {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    [[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]]
}

pub fn max_entry_gap(a: &Matrix2, b: &Matrix2) -> f64 {
    (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| (a[i][j] - b[i][j]).norm())
        .fold(0.0, f64::max)
}

fn components(f: &WeakFunctional) -> Vec<C64> {
    let mut out = f.coeffs().to_vec();
    out.push(f.v);
    out.push(f.u);
    out
}

/// Least-squares coefficients `(a, b)` with `target = a * first + b * second`
/// over every component, with rows normalized by the component size.
fn solve_columns(first: &WeakFunctional, second: &WeakFunctional, target: &WeakFunctional) -> Result<([C64; 2], f64)> {
    let (f, s, t) = (components(first), components(second), components(target));
    let rows = f.len();
    let mut a = DMatrix::<C64>::zeros(rows, 2);
    let mut b = DVector::<C64>::zeros(rows);
    for i in 0..rows {
        let w = 1.0 / f[i].norm().max(s[i].norm()).max(t[i].norm()).max(f64::MIN_POSITIVE);
        a[(i, 0)] = f[i] * w;
        a[(i, 1)] = s[i] * w;
        b[i] = t[i] * w;
    }
    let svd = a.svd(true, true);
    let sv = &svd.singular_values;
    let condition = sv.max() / sv.min();
    if !(condition < MAX_CONDITION) {
        return Err(TodaError::IllConditioned { condition });
    }
    let x = svd
        .solve(&b, 0.0)
        .map_err(|e| TodaError::ConfigInvalid(format!("Stokes solve failed: {e}")))?;
    Ok(([x[0], x[1]], condition))
}

/// `theta_0 = pi + arg e^u - arg p`.
pub fn theta_zero(pt: &ManifoldPoint, p: CoverComplex) -> f64 {
    PI + pt.u().im - p.arg()
}

fn u_values(pt: &ManifoldPoint, p: C64) -> (C64, C64) {
    let shift = pt.e_u() * 2.0 / p;
    (pt.v() + shift, pt.v() - shift)
}

/// Recovers `S_+` on `Pi_+` and `S_-` on `Pi_-` from
/// `Y_left = Y_right S` with `Y_right = (ds_p(zeta), ds_{-p}(zeta))` and
/// `Y_left = (ds_p(zeta), ds_{-p}(zeta e^{-2 pi i}))`, together with the
/// monodromy of `Y_right` for the consistency check `M = S_- S_+^{-1}`.
pub fn stokes_pair(pt: &ManifoldPoint, p: CoverComplex, sampling: StokesSampling) -> Result<StokesPair> {
    require_resummable(pt)?;
    let StokesSampling {
        theta,
        epsilon,
        zeta_abs,
        m_max,
    } = sampling;
    let t0 = theta_zero(pt, p);
    let lo = -t0 - PI / 2.0;
    let hi = -t0 + PI / 2.0;
    let reduced = lo + (theta - lo).rem_euclid(2.0 * PI);
    if !(reduced > lo && reduced < hi) {
        return Err(TodaError::ConfigInvalid(format!(
            "theta = {theta} is not admissible: need theta in ({lo}, {hi}) mod 2 pi"
        )));
    }
    let offsets = [-0.5 * epsilon, 0.0, 0.5 * epsilon];
    let mut worst_condition = 0.0f64;
    let mut solve_sector = |base: f64, shift_left: i32, identity_first: bool| -> Result<Matrix2> {
        let mut acc = [[C64::new(0.0, 0.0); 2]; 2];
        for &d in &offsets {
            let right = CoverComplex::new(zeta_abs, base + d)?;
            let left = right.wind(shift_left);
            let a = ds_p(pt, p, right, m_max)?.coeffs;
            let b = ds_minus_p(pt, p, right, m_max)?.coeffs;
            let first = if identity_first { a.clone() } else { ds_p(pt, p, left, m_max)?.coeffs };
            let second = ds_minus_p(pt, p, left.wind(-1), m_max)?.coeffs;
            let (c1, k1) = solve_columns(&a, &b, &first)?;
            let (c2, k2) = solve_columns(&a, &b, &second)?;
            worst_condition = worst_condition.max(k1).max(k2);
            for i in 0..2 {
                acc[i][0] += c1[i] / offsets.len() as f64;
                acc[i][1] += c2[i] / offsets.len() as f64;
            }
        }
        Ok(acc)
    };
    let s_plus = solve_sector(theta, 0, true)?;
    let s_minus = solve_sector(theta - PI, 1, false)?;

    let mut monodromy = [[C64::new(0.0, 0.0); 2]; 2];
    let base = CoverComplex::new(zeta_abs, theta - PI)?;
    let a = ds_p(pt, p, base, m_max)?.coeffs;
    let b = ds_minus_p(pt, p, base, m_max)?.coeffs;
    for (col, moved) in [ds_p(pt, p, base.wind(1), m_max)?.coeffs, ds_minus_p(pt, p, base.wind(1), m_max)?.coeffs]
        .iter()
        .enumerate()
    {
        let (c, k) = solve_columns(&a, &b, moved)?;
        worst_condition = worst_condition.max(k);
        monodromy[0][col] = c[0];
        monodromy[1][col] = c[1];
    }
    let monodromy_error = max_entry_gap(&monodromy, &matmul(&s_minus, &inverse(&s_plus)));
    let max_entry_error =
        max_entry_gap(&s_plus, &expected_s_plus()).max(max_entry_gap(&s_minus, &expected_s_minus()));

    let (up, um) = u_values(pt, p.to_complex());
    let dominance = |arg: f64| (C64::from_polar(1.0, arg) * (up - um)).re;
    let dominance_consistent = dominance(theta + PI) > 0.0 && dominance(theta) < 0.0;

    Ok(StokesPair {
        s_plus,
        s_minus,
        monodromy,
        max_entry_error,
        monodromy_error,
        dominance_consistent,
        condition: worst_condition,
    })
}

/// `|<ds_sub, e_0>| / |<ds_dom, e_0>|` along the ray `arg zeta = arg`, where `ds_dom` is the
/// member of the pair whose exponential `e^{zeta u_{+-p}}` dominates on that ray. The ray
/// is lifted into `(-theta_0 - 3pi/2, -theta_0 + pi/2)`, where both members keep their
/// exponential asymptotics.
pub fn dominance_ratios(pt: &ManifoldPoint, p: CoverComplex, arg: f64, moduli: &[f64]) -> Result<Vec<f64>> {
    require_resummable(pt)?;
    let lo = -theta_zero(pt, p) - 1.5 * PI;
    let arg = lo + (arg - lo).rem_euclid(2.0 * PI);
    let (up, um) = u_values(pt, p.to_complex());
    let p_dominant = (C64::from_polar(1.0, arg) * (up - um)).re > 0.0;
    moduli
        .iter()
        .map(|&r| {
            let zeta = CoverComplex::new(r, arg)?;
            let a = ds_p(pt, p, zeta, 0)?.coeffs.coeff(0).norm();
            let b = ds_minus_p(pt, p, zeta, 0)?.coeffs.coeff(0).norm();
            Ok(if p_dominant { b / a } else { a / b })
        })
        .collect()
}

/// One nonzero entry `(q, p, weight)` of a Stokes kernel in delta-function form,
/// with `q`, `p` indices into the family grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelEntry {
    pub q: usize,
    pub p: usize,
    pub weight: f64,
}

/// Pointwise check of the family Stokes relations and the two kernels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StokesFamilyReport {
    pub theta: f64,
    pub grid_args: Vec<f64>,
    pub active_upper: Vec<bool>,
    pub max_error_plus: f64,
    pub max_error_minus: f64,
    pub inactive_exact: bool,
    pub kernel_plus: Vec<KernelEntry>,
    pub kernel_minus: Vec<KernelEntry>,
    pub transpose_consistent: bool,
}

/// Builds `(Y_right)_p` and `(Y_left)_p` on an even grid of `arg p` covering
/// `[arg e^u + theta - pi/2, arg e^u + theta + 3pi/2)` and checks the relation
/// with the antipodal member on both overlap sectors.
pub fn stokes_family(pt: &ManifoldPoint, sampling: StokesSampling, grid_size: usize) -> Result<StokesFamilyReport> {
    require_resummable(pt)?;
    if grid_size < 2 || !grid_size.is_multiple_of(2) {
        return Err(TodaError::ConfigInvalid(format!("family grid needs an even size >= 2, got {grid_size}")));
    }
    let StokesSampling {
        theta,
        epsilon,
        zeta_abs,
        m_max,
    } = sampling;
    let start = pt.u().im + theta - PI / 2.0;
    let step = 2.0 * PI / grid_size as f64;
    let grid: Vec<CoverComplex> = p_grid(start + 0.5 * step, grid_size);
    let half = grid_size / 2;
    let upper = |j: usize| j >= half;
    let antipode_up = |j: usize| j + half;
    let antipode_down = |j: usize| j - half;

    let zeta_plus = CoverComplex::new(zeta_abs, theta + 0.5 * epsilon)?;
    let zeta_minus_right = CoverComplex::new(zeta_abs, theta - PI + 0.5 * epsilon)?;
    let zeta_minus_left = zeta_minus_right.wind(1);

    let right_plus: Vec<WeakFunctional> =
        grid.iter().map(|&p| Ok(ds_p(pt, p, zeta_plus, m_max)?.coeffs)).collect::<Result<_>>()?;
    let right_minus: Vec<WeakFunctional> =
        grid.iter().map(|&p| Ok(ds_p(pt, p, zeta_minus_right, m_max)?.coeffs)).collect::<Result<_>>()?;

    let two = C64::new(2.0, 0.0);
    let mut max_error_plus = 0.0f64;
    let mut max_error_minus = 0.0f64;
    let mut inactive_exact = true;
    for (j, &p) in grid.iter().enumerate() {
        let left_plus = if upper(j) {
            ds_p(pt, p, zeta_plus, m_max)?.coeffs
        } else {
            ds_p(pt, p, zeta_plus.wind(-1), m_max)?.coeffs
        };
        let predicted_plus = if upper(j) {
            right_plus[j].clone()
        } else {
            &right_plus[j] - &right_plus[antipode_up(j)].scale(two)
        };
        let gap = relative_gap(&left_plus, &predicted_plus);
        if upper(j) && gap != 0.0 {
            inactive_exact = false;
        }
        max_error_plus = max_error_plus.max(gap);

        let left_minus = if upper(j) {
            ds_p(pt, p, zeta_minus_left, m_max)?.coeffs
        } else {
            ds_p(pt, p, zeta_minus_right, m_max)?.coeffs
        };
        let predicted_minus = if upper(j) {
            &right_minus[j] - &right_minus[antipode_down(j)].scale(two)
        } else {
            right_minus[j].clone()
        };
        let gap = relative_gap(&left_minus, &predicted_minus);
        if !upper(j) && gap != 0.0 {
            inactive_exact = false;
        }
        max_error_minus = max_error_minus.max(gap);
    }

    let mut kernel_plus = Vec::new();
    let mut kernel_minus = Vec::new();
    for j in 0..grid_size {
        kernel_plus.push(KernelEntry { q: j, p: j, weight: 1.0 });
        kernel_minus.push(KernelEntry { q: j, p: j, weight: 1.0 });
        if !upper(j) {
            kernel_plus.push(KernelEntry { q: antipode_up(j), p: j, weight: -2.0 });
        } else {
            kernel_minus.push(KernelEntry { q: antipode_down(j), p: j, weight: -2.0 });
        }
    }
    let transpose_consistent = kernel_is_transpose(&kernel_plus, &kernel_minus);

    Ok(StokesFamilyReport {
        theta,
        grid_args: grid.iter().map(|p| p.arg()).collect(),
        active_upper: (0..grid_size).map(upper).collect(),
        max_error_plus,
        max_error_minus,
        inactive_exact,
        kernel_plus,
        kernel_minus,
        transpose_consistent,
    })
}

/// Whether `(S_+)_{pq} = (S_-)_{qp}` for two sparse kernels.
pub fn kernel_is_transpose(plus: &[KernelEntry], minus: &[KernelEntry]) -> bool {
    let key = |e: &KernelEntry| (e.q, e.p, e.weight.to_bits());
    let mut a: Vec<_> = plus.iter().map(|e| (e.p, e.q, e.weight.to_bits())).collect();
    let mut b: Vec<_> = minus.iter().map(key).collect();
    a.sort_unstable();
    b.sort_unstable();
    a == b
}
