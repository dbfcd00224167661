use serde::Serialize;

use crate::canonical::{
    canonical_value, du_continuous, find_critical_set, psi_forward, psi_inverse, CanonicalData, CriticalSet,
    WeakFunctional,
};
use crate::error::{Result, TodaError};
use crate::laurent::{LaurentSeries, C64};
use crate::manifold::{apply_u_exact, apply_v, ManifoldPoint, TangentTriple};

/// A truncated formal solution `e^{zeta u} sum_k r^k zeta^{-k}`.
#[derive(Debug, Clone, Serialize)]
pub struct FormalSolution {
    pub u_value: C64,
    pub terms: Vec<WeakFunctional>,
    pub free_constants: Vec<C64>,
    pub representatives: Option<Vec<TangentTriple>>,
}

/// Which discrete canonical coordinate a formal solution is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CriticalChoice {
    Outer(usize),
    Inner(usize),
}

fn require_special(pt: &ManifoldPoint) -> Result<()> {
    if pt.is_special() {
        Ok(())
    } else {
        Err(TodaError::ParameterOutOfScope {
            detail: "the continuous family is only available at w = z".to_string(),
        })
    }
}

/// `(X(z) - X(p)) / (z - p)` as an exact Laurent polynomial.
fn difference_quotient(x: &LaurentSeries, p: C64) -> LaurentSeries {
    let n = x.order() as i64;
    let mut out = LaurentSeries::zeros(x.order());
    for (k, c) in x.terms() {
        if k >= 1 {
            for j in 0..k {
                out.set(j, out.coeff(j) + c * p.powi((k - 1 - j) as i32));
            }
        } else if k < 0 {
            let m = -k;
            for j in 0..m {
                let power = j - m;
                if power >= -n {
                    out.set(power, out.coeff(power) - c * p.powi(-(1 + j) as i32));
                }
            }
        }
    }
    out
}

/// The left inverse of `u_p - U` at `w = z` normalized by `A_p(0, 1, 0) = 0`:
/// `(e^{-u}/2 (1/p - 1/z)^{-1} (X(z) - X(p)), -(X(p)/p + X_u)/2, -e^{-u} X(p)/2)`.
pub fn left_inverse_ap(pt: &ManifoldPoint, p: C64, x: &TangentTriple) -> Result<TangentTriple> {
    require_special(pt)?;
    let inv_eu = pt.e_u().inv();
    let xp = x.function.eval(p);
    let function = difference_quotient(&x.function, p).shift(1).scale(p * inv_eu * 0.5);
    Ok(TangentTriple::new(function, -(xp / p + x.u) * 0.5, -inv_eu * xp * 0.5))
}

/// `r^0 = du_p`, `r^{k+1} = r^k o (k - V) o A_p + a^{k+1} du_p` at `w = z`.
pub fn formal_continuous(pt: &ManifoldPoint, p: C64, k_max: usize, constants: &[C64]) -> Result<FormalSolution> {
    require_special(pt)?;
    if constants.len() < k_max {
        return Err(TodaError::ConfigInvalid(format!(
            "{k_max} free constants required, {} given",
            constants.len()
        )));
    }
    let du = du_continuous(pt, p);
    let mut terms = vec![du.clone()];
    for k in 0..k_max {
        let last = terms.last().expect("nonempty");
        let kk = C64::new(k as f64, 0.0);
        let step = last.pullback(|y| {
            let a = left_inverse_ap(pt, p, y).expect("special point");
            let va = apply_v(pt, &a).expect("regular point");
            &a.scale(kk) - &va
        });
        terms.push(&step + &du.scale(constants[k]));
    }
    Ok(FormalSolution {
        u_value: canonical_value(pt, p)?,
        terms,
        free_constants: constants[..k_max].to_vec(),
        representatives: None,
    })
}

/// Largest recursion defect `|<r^{k+1}, (u - U)X> - <r^k, (k - V)X>|` for each
/// consecutive pair, together with `|<r^0, (u - U)X>|` in front.
pub fn recursion_residuals(pt: &ManifoldPoint, sol: &FormalSolution, batch: &[TangentTriple]) -> Result<Vec<f64>> {
    let mut worst = vec![0.0f64; sol.terms.len()];
    for x in batch {
        let ux = apply_u_exact(pt, x)?;
        let shifted = &x.scale(sol.u_value) - &ux;
        let vx = apply_v(pt, x)?;
        worst[0] = worst[0].max(sol.terms[0].eval(&shifted).norm());
        for k in 0..sol.terms.len() - 1 {
            let graded = &x.scale(C64::new(k as f64, 0.0)) - &vx;
            let defect = sol.terms[k + 1].eval(&shifted) - sol.terms[k].eval(&graded);
            worst[k + 1] = worst[k + 1].max(defect.norm());
        }
    }
    Ok(worst)
}

struct DiscreteSetup {
    crit: CriticalSet,
    slot: usize,
    value: C64,
    continuous_values: Vec<C64>,
    normalization: C64,
}

fn slot_of(crit: &CriticalSet, which: CriticalChoice) -> Result<(usize, C64, C64)> {
    let missing = || TodaError::ParameterOutOfScope {
        detail: format!("requested critical point {which:?} does not exist"),
    };
    match which {
        CriticalChoice::Outer(i) => {
            let c = crit.outer.get(i).ok_or_else(missing)?;
            Ok((i, c.value, -c.z * c.z * c.second_derivative))
        }
        CriticalChoice::Inner(j) => {
            let c = crit.inner.get(j).ok_or_else(missing)?;
            Ok((crit.outer.len() + j, c.value, c.z * c.z * c.second_derivative))
        }
    }
}

fn discrete_slot(data: &CanonicalData, slot: usize) -> C64 {
    let outer = data.outer.len();
    if slot < outer {
        data.outer[slot]
    } else {
        data.inner[slot - outer]
    }
}

fn basis_data(pt: &ManifoldPoint, crit: &CriticalSet, slot: usize, value: C64) -> CanonicalData {
    let mut data = CanonicalData {
        continuous: vec![C64::new(0.0, 0.0); pt.nodes()],
        outer: vec![C64::new(0.0, 0.0); crit.outer.len()],
        inner: vec![C64::new(0.0, 0.0); crit.inner.len()],
    };
    if slot < crit.outer.len() {
        data.outer[slot] = value;
    } else {
        data.inner[slot - crit.outer.len()] = value;
    }
    data
}

/// Solves `(u_i - U) Y = data` in canonical form with the kernel slot set to zero.
fn solve_off_kernel(setup: &DiscreteSetup, data: &CanonicalData) -> CanonicalData {
    let u = setup.value;
    let all: Vec<C64> = setup.crit.values();
    let outer_len = setup.crit.outer.len();
    let divide = |vals: &[C64], offset: usize| -> Vec<C64> {
        vals.iter()
            .enumerate()
            .map(|(j, y)| if j + offset == setup.slot { C64::new(0.0, 0.0) } else { y / (u - all[j + offset]) })
            .collect()
    };
    CanonicalData {
        continuous: data
            .continuous
            .iter()
            .zip(&setup.continuous_values)
            .map(|(y, up)| y / (u - up))
            .collect(),
        outer: divide(&data.outer, 0),
        inner: divide(&data.inner, outer_len),
    }
}

/// Representable formal solution attached to a discrete canonical coordinate,
/// built in canonical form with the kernel constants fixed by solvability of
/// the following step.
pub fn formal_discrete(pt: &ManifoldPoint, which: CriticalChoice, k_max: usize) -> Result<FormalSolution> {
    formal_discrete_perturbed(pt, which, k_max, None)
}

/// As [`formal_discrete`], adding `shift` times the leading term to the
/// particular solution at step `at` before its kernel constant is fixed.
pub fn formal_discrete_perturbed(
    pt: &ManifoldPoint,
    which: CriticalChoice,
    k_max: usize,
    perturbation: Option<(usize, C64)>,
) -> Result<FormalSolution> {
    let crit = find_critical_set(pt)?;
    let (slot, value, normalization) = slot_of(&crit, which)?;
    let continuous_values = pt
        .grid()
        .iter()
        .map(|&p| canonical_value(pt, p))
        .collect::<Result<Vec<_>>>()?;
    let setup = DiscreteSetup { crit, slot, value, continuous_values, normalization };

    let leading = psi_inverse(pt, &setup.crit, &basis_data(pt, &setup.crit, slot, setup.normalization))?;
    let kernel_scale = setup.normalization;
    let first = psi_forward(pt, &setup.crit, &apply_v(pt, &leading)?)?;
    let projection = discrete_slot(&first, slot).norm() / kernel_scale.norm();
    if projection > 1e-8 {
        return Err(TodaError::SolvabilityFailure { order: 0, projection });
    }

    let mut reps = vec![leading.clone()];
    let mut constants = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let prev = reps.last().expect("nonempty");
        let kk = C64::new((k - 1) as f64, 0.0);
        let rhs = &prev.scale(kk) + &apply_v(pt, prev)?;
        let rhs_data = psi_forward(pt, &setup.crit, &rhs)?;
        let leftover = discrete_slot(&rhs_data, slot).norm() / (1.0 + rhs_data.size());
        if leftover > 1e-7 {
            return Err(TodaError::SolvabilityFailure { order: k - 1, projection: leftover });
        }
        let mut particular = psi_inverse(pt, &setup.crit, &solve_off_kernel(&setup, &rhs_data))?;
        if let Some((at, shift)) = perturbation {
            if at == k {
                particular = &particular + &leading.scale(shift);
            }
        }
        let kf = C64::new(k as f64, 0.0);
        let next_rhs = &particular.scale(kf) + &apply_v(pt, &particular)?;
        let obstruction = discrete_slot(&psi_forward(pt, &setup.crit, &next_rhs)?, slot);
        let a = -obstruction / (kf * kernel_scale);
        constants.push(a);
        reps.push(&particular + &leading.scale(a));
    }
    let terms = reps.iter().map(|r| WeakFunctional::from_representative(pt, r)).collect();
    Ok(FormalSolution { u_value: value, terms, free_constants: constants, representatives: Some(reps) })
}
