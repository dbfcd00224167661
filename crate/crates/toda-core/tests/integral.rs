use std::f64::consts::PI;

use toda_core::canonical::{canonical_value, sigma_at, WeakFunctional};
use toda_core::dubrovin::{dubrovin_residual, formal_continuous, recursion_residuals, DEFAULT_STEP};
use toda_core::integral::*;
use toda_core::laurent::{mixed_error, LaurentSeries};
use toda_core::manifold::{metric, TangentTriple};
use toda_core::presets::{perturbed, seeded_rng, special_inside, special_outside, special_point};
use toda_core::specfun::{bessel_i, CoverComplex};
use toda_core::C64;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn functional_gap(a: &WeakFunctional, b: &WeakFunctional, window: i64) -> f64 {
    let mut worst = mixed_error(a.v, b.v).max(mixed_error(a.u, b.u));
    for m in -window..=window {
        worst = worst.max(mixed_error(a.coeff(m), b.coeff(m)));
    }
    worst
}

#[test]
fn contour_matches_bessel_closed_form() {
    let pt = special_point(C64::new(0.3, -0.1), C64::new(0.5, 0.2)).unwrap();
    for (p, zeta) in [
        (C64::from_polar(1.0, 0.7), CoverComplex::new(2.0, 0.4).unwrap()),
        (c(1.0), CoverComplex::new(5.0, -2.0).unwrap()),
        (C64::from_polar(1.0, -2.2), CoverComplex::new(0.3, 4.0).unwrap()),
    ] {
        let sigma = sigma_at(&pt, p);
        let quad = dy_sigma(&pt, sigma, zeta).unwrap();
        let closed = dy_bessel(&pt, p, zeta).unwrap();
        let gap = functional_gap(&quad, &closed, 8);
        assert!(gap < 1e-10, "p={p} zeta={zeta}: {gap:e}");
    }
}

#[test]
fn unit_pairing_example() {
    let pt = special_inside();
    let zeta = CoverComplex::new(2.0, 0.0).unwrap();
    let dy = dy_sigma(&pt, sigma_at(&pt, c(1.0)), zeta).unwrap();
    let value = dy.eval(&TangentTriple::unit(pt.order()));
    let expected = c(2f64.sqrt()) * bessel_i(0, c(2.0));
    assert!(mixed_error(value, expected) < 1e-10, "{value} vs {expected}");
    let y = y_sigma(&pt, sigma_at(&pt, c(1.0)), zeta).unwrap();
    assert!(mixed_error(y * 2.0, value) < 1e-12);
}

#[test]
fn representative_reproduces_pairing() {
    let pt = perturbed();
    let zeta = CoverComplex::new(1.5, 0.8).unwrap();
    let p = C64::from_polar(1.0, 1.1);
    let sigma = sigma_at(&pt, p);
    let dy = dy_sigma(&pt, sigma, zeta).unwrap();
    let rep = dy_representative(&pt, sigma, zeta).unwrap();
    let mut rng = seeded_rng(11);
    for _ in 0..10 {
        let x = TangentTriple::random(&mut rng, pt.order(), 4);
        let a = dy.eval(&x);
        let b = metric(&pt, &rep, &x).unwrap();
        assert!(mixed_error(a, b) < 1e-10, "{a} vs {b}");
    }
}

#[test]
fn integral_solves_dubrovin_equation() {
    let mut rng = seeded_rng(5);
    for (pt, p) in [(special_inside(), C64::from_polar(1.0, 0.4)), (perturbed(), C64::from_polar(1.0, -0.9))] {
        let sigma = sigma_at(&pt, p);
        for arg in [0.3, 2.0] {
            let zeta = CoverComplex::new(1.2, arg).unwrap();
            for _ in 0..4 {
                let x = TangentTriple::random(&mut rng, pt.order(), 3);
                let est = dubrovin_residual(&pt, |z| dy_sigma(&pt, sigma, z), zeta, &x, DEFAULT_STEP, 1e-6).unwrap();
                let scale = 1.0 + est.derivative.norm();
                assert!(est.residual.norm() / scale < 1e-6, "arg {arg}: {:e}", est.residual.norm());
            }
        }
    }
}

#[test]
fn winding_flips_sign() {
    let pt = special_outside();
    let sigma = sigma_at(&pt, C64::from_polar(1.0, 0.5));
    let zeta = CoverComplex::new(0.9, -0.3).unwrap();
    let a = dy_sigma(&pt, sigma, zeta).unwrap();
    let b = dy_sigma(&pt, sigma, zeta.wind(1)).unwrap();
    assert!(functional_gap(&a, &b.scale(c(-1.0)), pt.order() as i64) < 1e-13);
}

#[test]
fn gaussian_calibration() {
    let f = LaurentSeries::monomial(4, 2, c(1.0));
    let g = LaurentSeries::constant(4, c(1.0));
    let exp = saddle_coeffs(&f, &g, c(0.0), 3, CoverComplex::unit(0.0), C64::i()).unwrap();
    assert!(mixed_error(exp.coeffs[0] / exp.direction, c(PI.sqrt())) < 1e-12);
    for d in &exp.coeffs[1..] {
        assert!(d.norm() < 1e-14);
    }
    let flat = LaurentSeries::monomial(4, 3, c(1.0));
    assert!(saddle_coeffs(&flat, &g, c(0.0), 2, CoverComplex::unit(0.0), C64::i()).is_err());
}

#[test]
fn saddle_coefficients_match_binomial_formula() {
    let pt = special_point(C64::new(0.1, 0.0), C64::new(0.5, 0.0)).unwrap();
    for p in [c(1.0), C64::from_polar(1.0, 0.6)] {
        let sigma = sigma_at(&pt, p);
        let zeta = CoverComplex::unit(-p.arg() + pt.e_u().arg());
        for m in -3..=4i64 {
            let x = TangentTriple::basis_power(pt.order(), m);
            let d = asymptotic_coeffs_residue(&pt, sigma, p, 4, &x, zeta).unwrap();
            let weight = if m >= 1 { sigma } else { sigma - 1.0 };
            let front = weight * p.powi(m as i32) * matching_prefactor(&pt, p) * PI.sqrt() * 2.0 * 0.5;
            for (n, dn) in d.iter().enumerate() {
                let expected = front * bessel_matching_coefficient(&pt, p, n, m);
                assert!(
                    (dn - expected).norm() <= 1e-8 * expected.norm().max(1e-300),
                    "p={p} m={m} n={n}: {dn} vs {expected}"
                );
            }
        }
    }
}

#[test]
fn leading_term_matches_large_zeta_quadrature() {
    let pt = special_inside();
    let p = C64::from_polar(1.0, 0.3);
    let sigma = sigma_at(&pt, p);
    let up = canonical_value(&pt, p).unwrap();
    let arg = -p.arg() + 0.2;
    let zeta = CoverComplex::new(50.0, arg).unwrap();
    let x = TangentTriple::basis_power(pt.order(), 1);
    let d0 = asymptotic_coeffs_residue(&pt, sigma, p, 0, &x, zeta).unwrap()[0];
    let exact = dy_sigma(&pt, sigma, zeta).unwrap().eval(&x) * (-zeta.to_complex() * up).exp();
    assert!(((exact - d0) / d0).norm() < 1e-2, "{exact} vs {d0}");
}

#[test]
fn expansion_satisfies_recursion_and_matches_formal_solution() {
    let pt = special_inside();
    let p = C64::from_polar(1.0, 0.5);
    let sigma = sigma_at(&pt, p);
    let zeta = CoverComplex::unit(-p.arg());
    let k_max = 6;
    let terms = asymptotic_functionals(&pt, sigma, p, k_max, zeta).unwrap();
    let mut rng = seeded_rng(3);
    let batch: Vec<TangentTriple> = (0..6).map(|_| TangentTriple::random(&mut rng, pt.order(), 3)).collect();
    let formal = formal_continuous(&pt, p, k_max, &bessel_matching_constants(&pt, p, k_max)).unwrap();
    let as_solution = toda_core::dubrovin::FormalSolution {
        u_value: formal.u_value,
        terms: terms.clone(),
        free_constants: vec![],
        representatives: None,
    };
    let residuals = recursion_residuals(&pt, &as_solution, &batch).unwrap();
    let scales: Vec<f64> = (0..=k_max).map(|k| batch.iter().map(|x| terms[k].eval(x).norm()).fold(1.0, f64::max)).collect();
    for (k, r) in residuals.iter().enumerate().take(5) {
        assert!(*r < 1e-9 * scales[k], "k={k}: {r:e}");
    }
    let prefactor = matching_prefactor(&pt, p);
    for x in &batch {
        for k in 0..=k_max {
            let a = terms[k].eval(x);
            let b = formal.terms[k].eval(x) * prefactor;
            let tol = if k <= 4 { 1e-9 } else { 1e-7 };
            assert!(mixed_error(a, b) < tol, "k={k}: {a} vs {b}");
        }
    }
}

#[test]
fn truncation_error_slope() {
    let pt = special_inside();
    let p = c(1.0);
    let x = TangentTriple::basis_power(pt.order(), 1);
    let moduli: Vec<f64> = (0..9).map(|j| 20.0 * 4f64.powf(j as f64 / 8.0)).collect();
    for k in [2usize, 3] {
        let fit = truncation_slope(&pt, p, &x, k, 0.3, &moduli).unwrap();
        assert!((fit.slope + (k as f64 + 1.0)).abs() <= 0.3, "K={k}: slope {}", fit.slope);
    }
}

#[test]
fn sector_membership() {
    let pt = special_inside();
    let p = c(1.0);
    let sigma = sigma_at(&pt, p);
    let dom = dominant_saddle(&pt, sigma, c(1.0)).unwrap();
    assert!((dom.saddle - p).norm() < 1e-10);
    let other = dominant_saddle(&pt, sigma, c(-1.0)).unwrap();
    assert!((other.saddle + p).norm() < 1e-10);
    assert!(dominant_saddle(&pt, sigma, C64::i()).is_err());
}

#[test]
fn incompleteness_witness_vanishes() {
    let pt = special_inside();
    let zeta = CoverComplex::new(1.3, 0.4).unwrap();
    let grid: Vec<C64> = (0..16).map(|j| C64::from_polar(1.0, 2.0 * PI * j as f64 / 16.0 + 0.05)).collect();
    let w = incompleteness_witness(&pt, zeta, &grid).unwrap();
    assert!(w.max_pairing <= 1e-8 * w.scale.max(1.0), "{w:?}");
    assert!(w.spill < 1e-20);
    let (x, _) = incompleteness_vector(&pt, zeta.to_complex());
    assert!(x.size() > 0.5);
}
