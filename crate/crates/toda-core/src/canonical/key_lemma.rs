use crate::canonical::spectrum::{dlambda_series, lambda_sigma};
use crate::error::Result;
use crate::laurent::{LaurentSeries, C64};
use crate::manifold::{apply_u, ManifoldPoint, TangentTriple};

/// Residual of the identity
/// `<dl(z), U X> - l(z) <dl(z), X> + z l'(z) <dl(z), (wX/(zw'), 0, -X_u)> = z l'(z) [((1 - w/(zw')) X)_0 - X_v]`
/// with `l = lambda_sigma` and `dl = d lambda_sigma`, as a series in `z`.
pub fn key_lemma_residual(pt: &ManifoldPoint, sigma: C64, x: &TangentTriple) -> Result<LaurentSeries> {
    let l = lambda_sigma(pt, sigma);
    let zl = l.euler_derivative();
    let ux = apply_u(pt, x)?;
    let shifted = pt.divide_by_z_w_prime(&x.function.mul(pt.w()));
    let auxiliary = TangentTriple::new(shifted.clone(), C64::new(0.0, 0.0), -x.u);
    let scalar = x.function.coeff(0) - shifted.coeff(0) - x.v;

    let mut e = dlambda_series(pt, sigma, &ux);
    e -= &l.mul(&dlambda_series(pt, sigma, x));
    e += &zl.mul(&dlambda_series(pt, sigma, &auxiliary));
    e -= &zl.scale(scalar);
    Ok(e)
}
