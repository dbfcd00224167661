use crate::canonical::WeakFunctional;
use crate::error::{Result, TodaError};
use crate::laurent::C64;
use crate::manifold::{apply_u_exact, apply_v, ManifoldPoint, TangentTriple};
use crate::specfun::CoverComplex;

pub const DEFAULT_STEP: f64 = 1e-3;

/// Outcome of a residual evaluation of the Dubrovin equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualEstimate {
    pub residual: C64,
    pub derivative: C64,
    pub extrapolation_gap: f64,
}

/// `d/dzeta <xi, X> - <xi, (U - V/zeta) X>` with the derivative taken by a
/// Richardson-extrapolated central difference on the cover.
pub fn dubrovin_residual<F>(
    pt: &ManifoldPoint,
    xi: F,
    zeta: CoverComplex,
    x: &TangentTriple,
    step: f64,
    tol: f64,
) -> Result<ResidualEstimate>
where
    F: Fn(CoverComplex) -> Result<WeakFunctional>,
{
    let centre = zeta.to_complex();
    let value_at = |shift: f64| -> Result<C64> {
        let z = CoverComplex::lift_near(centre + shift, zeta.arg())?;
        Ok(xi(z)?.eval(x))
    };
    let central = |h: f64| -> Result<C64> { Ok((value_at(h)? - value_at(-h)?) / (2.0 * h)) };
    let coarse = central(step)?;
    let fine = central(step / 2.0)?;
    let derivative = (fine * 4.0 - coarse) / 3.0;
    let extrapolation_gap = (derivative - fine).norm();
    if extrapolation_gap > 10.0 * tol {
        return Err(TodaError::StepTooLarge { disagreement: extrapolation_gap, allowed: 10.0 * tol });
    }
    let ux = apply_u_exact(pt, x)?;
    let vx = apply_v(pt, x)?;
    let target = &ux - &vx.scale(centre.inv());
    let residual = derivative - xi(zeta)?.eval(&target);
    Ok(ResidualEstimate { residual, derivative, extrapolation_gap })
}
