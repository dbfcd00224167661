//! Metric, product, Euler field and the operators of multiplication by the
//! Euler field and of grading.

use crate::error::{Result, TodaError};
use crate::laurent::{LaurentSeries, C64};
use crate::manifold::point::{ManifoldPoint, DEFAULT_FLOOR};
use crate::manifold::tangent::TangentTriple;

fn constant(order: usize, c: C64) -> LaurentSeries {
    LaurentSeries::constant(order, c)
}

/// `(1/2 pi i) \oint X Y / (z^2 w') dz + X_v Y_u + X_u Y_v`.
pub fn metric(pt: &ManifoldPoint, x: &TangentTriple, y: &TangentTriple) -> Result<C64> {
    pt.require_regular(DEFAULT_FLOOR)?;
    let m = pt.nodes();
    let xs = x.function.samples(m);
    let ys = y.function.samples(m);
    let integral: C64 = xs
        .iter()
        .zip(&ys)
        .zip(pt.inv_z_w_prime_samples())
        .map(|((a, b), c)| a * b * c)
        .sum::<C64>()
        / m as f64;
    Ok(integral + x.v * y.u + x.u * y.v)
}

/// The product of two tangent vectors.
pub fn product(pt: &ManifoldPoint, x: &TangentTriple, y: &TangentTriple) -> Result<TangentTriple> {
    pt.require_regular(DEFAULT_FLOOR)?;
    let n = pt.order();
    let eu = pt.e_u();
    let zw = pt.z_w_prime();
    let q = pt.divide_by_z_w_prime(&y.function);
    let q_plus = &q + &constant(n, y.u);

    let mut bracket = y.function.at_least(1);
    bracket -= &zw.at_least(1).mul(&q);
    bracket += &q.shift(1);
    bracket += &q_plus.shift(-1).scale(eu);
    bracket += &constant(n, y.v);
    let direct = x.function.mul(&bracket);

    let mut inner = x.function.at_least(1).mul(&q).at_most(-1);
    inner -= &x.function.at_most(0).mul(&q).at_least(0);
    inner += &q_plus.shift(-1).scale(eu * x.u);
    inner += &q.scale(x.v);
    let function = &direct + &zw.mul(&inner);

    let carrier = &x.function + &zw.scale(x.u);
    let v = eu * carrier.mul(&q_plus).coeff(1) - eu * x.u * y.u + x.v * y.v;
    let u = x.function.mul(&q).coeff(0) + x.u * y.v + x.v * y.u;
    Ok(TangentTriple::new(function, v, u))
}

/// The Euler field `E = (w - z w', v, 2)`.
pub fn euler_field(pt: &ManifoldPoint) -> TangentTriple {
    TangentTriple::new(pt.w() - pt.z_w_prime(), pt.v(), C64::new(2.0, 0.0))
}

/// Multiplication by the Euler field, computed as the product `E . X`.
pub fn apply_u(pt: &ManifoldPoint, x: &TangentTriple) -> Result<TangentTriple> {
    product(pt, &euler_field(pt), x)
}

/// Multiplication by the Euler field from its expanded closed form.
pub fn apply_u_expanded(pt: &ManifoldPoint, x: &TangentTriple) -> Result<TangentTriple> {
    pt.require_regular(DEFAULT_FLOOR)?;
    let n = pt.order();
    let eu = pt.e_u();
    let v = pt.v();
    let zw = pt.z_w_prime();
    let shifted_w = pt.w() - zw;
    let q = pt.divide_by_z_w_prime(&x.function);
    let q_plus = &q + &constant(n, x.u);

    let mut bracket = x.function.at_least(1);
    bracket -= &zw.at_least(1).mul(&q);
    bracket += &q.shift(1);
    bracket += &q_plus.shift(-1).scale(eu);
    bracket += &constant(n, x.v);

    let mut inner = shifted_w.at_least(1).mul(&q).at_most(-1);
    inner -= &shifted_w.at_most(0).mul(&q).at_least(0);
    inner += &q_plus.shift(-1).scale(eu * 2.0);
    inner += &q.scale(v);

    let function = &shifted_w.mul(&bracket) + &zw.mul(&inner);
    let sum_w = pt.w() + zw;
    let v_part = eu * sum_w.mul(&q_plus).coeff(1) - eu * 2.0 * x.u + v * x.v;
    let u_part = shifted_w.mul(&q).coeff(0) + x.v * 2.0 + v * x.u;
    Ok(TangentTriple::new(function, v_part, u_part))
}

/// Multiplication by the Euler field at a special point `w = z`:
/// `((v + 2e^u/z) X + 2e^u X_u, 2e^u X_1 + v X_v, 2X_v + v X_u)`.
pub fn apply_u_special(pt: &ManifoldPoint, x: &TangentTriple) -> Result<TangentTriple> {
    if !pt.is_special() {
        return Err(TodaError::ParameterOutOfScope {
            detail: "closed form of the Euler multiplication needs w = z".to_string(),
        });
    }
    let n = pt.order();
    let eu = pt.e_u();
    let v = pt.v();
    let multiplier = LaurentSeries::from_terms(n, &[(0, v), (-1, eu * 2.0)]).expect("|k| <= 1");
    let function = &x.function.mul(&multiplier) + &constant(n, eu * 2.0 * x.u);
    Ok(TangentTriple::new(
        function,
        eu * 2.0 * x.function.coeff(1) + v * x.v,
        x.v * 2.0 + v * x.u,
    ))
}

/// Multiplication by the Euler field by the closed form at `w = z`, where it
/// keeps Laurent polynomials free of quadrature noise, and as a product otherwise.
pub fn apply_u_exact(pt: &ManifoldPoint, x: &TangentTriple) -> Result<TangentTriple> {
    if pt.is_special() {
        apply_u_special(pt, x)
    } else {
        apply_u(pt, x)
    }
}

/// The grading operator `(-X/2 + z d/dz (X w / (z w')), -X_v/2, X_u/2)`.
pub fn apply_v(pt: &ManifoldPoint, x: &TangentTriple) -> Result<TangentTriple> {
    pt.require_regular(DEFAULT_FLOOR)?;
    if pt.is_special() {
        let function = &x.function.euler_derivative() - &x.function.scale(C64::new(0.5, 0.0));
        return Ok(TangentTriple::new(function, -x.v * 0.5, x.u * 0.5));
    }
    let ratio = pt.divide_by_z_w_prime(&x.function.mul(pt.w()));
    let function = &ratio.euler_derivative() - &x.function.scale(C64::new(0.5, 0.0));
    Ok(TangentTriple::new(function, -x.v * 0.5, x.u * 0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::TruncationParams;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn special(v: f64, eu: f64) -> ManifoldPoint {
        ManifoldPoint::special(TruncationParams::default(), c(v), c(eu)).unwrap()
    }

    #[test]
    fn metric_on_scalar_slots() {
        let pt = special(0.0, 0.5);
        let e = TangentTriple::unit(32);
        let eu = TangentTriple::basis_u(32);
        assert!(metric(&pt, &e, &e).unwrap().norm() < 1e-15);
        assert!((metric(&pt, &e, &eu).unwrap() - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn euler_multiplication_of_u_slot() {
        let pt = special(0.0, 0.5);
        let eu = TangentTriple::basis_u(32);
        let expect = TangentTriple::new(LaurentSeries::constant(32, c(1.0)), c(0.0), c(0.0));
        assert!(apply_u_special(&pt, &eu).unwrap().max_diff(&expect) < 1e-15);
        assert!(apply_u(&pt, &eu).unwrap().max_diff(&expect) < 1e-13);
    }

    #[test]
    fn grading_at_special_point() {
        let pt = special(0.4, 0.5);
        let x = TangentTriple::new(
            LaurentSeries::from_terms(32, &[(2, c(1.0)), (-1, c(3.0))]).unwrap(),
            c(2.0),
            c(-1.0),
        );
        let expect = TangentTriple::new(
            LaurentSeries::from_terms(32, &[(2, c(1.5)), (-1, c(-4.5))]).unwrap(),
            c(-1.0),
            c(-0.5),
        );
        assert!(apply_v(&pt, &x).unwrap().max_diff(&expect) < 1e-13);
    }

    #[test]
    fn singular_w_prime_is_reported() {
        let params = TruncationParams::default();
        let w = LaurentSeries::from_terms(32, &[(1, c(1.0)), (-1, c(1.0))]).unwrap();
        let pt = ManifoldPoint::from_w_coords(params, w, c(0.0), c(0.0)).unwrap();
        let e = TangentTriple::unit(32);
        assert!(matches!(metric(&pt, &e, &e), Err(TodaError::T2Violation { .. })));
    }
}
