use std::f64::consts::PI;

use toda_core::canonical::sigma_at;
use toda_core::dubrovin::{dubrovin_residual, DEFAULT_STEP};
use toda_core::integral::dy_sigma;
use toda_core::laurent::{mixed_error, LaurentSeries};
use toda_core::manifold::TangentTriple;
use toda_core::presets::{seeded_rng, special_inside, special_outside, special_point};
use toda_core::resurgence::*;
use toda_core::specfun::gamma::binomial;
use toda_core::specfun::identities::hypergeometric_coefficient;
use toda_core::specfun::CoverComplex;
use toda_core::{TodaError, C64};

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[test]
fn phi_series_leading_terms() {
    let pt = special_inside();
    let s = phi_series(&pt, c(1.0), 0, 3);
    assert!((s.coeffs[0] - c(1.0 / PI.sqrt())).norm() < 1e-15);
    let expected = c(1.0 / (16.0 * PI.sqrt() * 0.5));
    assert!((s.coeffs[1] - expected).norm() < 1e-15);
    for m in 0..=8 {
        let long = phi_series(&pt, C64::from_polar(1.0, 0.4), m, 40);
        assert!(long.growth_certificate.is_finite() && long.growth_certificate > 0.0);
    }
}

#[test]
fn borel_coefficients_match_hypergeometric() {
    let pt = special_inside();
    let p = C64::from_polar(1.0, 0.3);
    for m in -5..=5i64 {
        let b = borel(&phi_series(&pt, p, m, 30));
        for (k, bk) in b.iter().enumerate() {
            let expected = hypergeometric_coefficient(m, k) / PI.sqrt() * (p / pt.e_u()).powi(k as i32);
            assert!((bk - expected).norm() <= 1e-12 * expected.norm().max(1e-300), "m={m} k={k}");
        }
        let check = binomial(-0.5, 1) * binomial(m as f64 + 0.5, 2);
        assert!((b[1] * PI.sqrt() - (p / pt.e_u()) * check).norm() < 1e-13);
    }
    assert!((borel_closed_form(&pt, p, 2, c(0.0)).unwrap() - c(1.0 / PI.sqrt())).norm() < 1e-15);
    let chi = C64::new(0.3, -0.2);
    let series: C64 = borel(&phi_series(&pt, p, 1, 60)).iter().enumerate().map(|(k, b)| b * chi.powi(k as i32)).sum();
    assert!(mixed_error(series, borel_closed_form(&pt, p, 1, chi).unwrap()) < 1e-12);
}

#[test]
fn borel_radius_locates_singularity() {
    for pt in [special_inside(), special_point(c(0.2), C64::from_polar(0.3, 1.0)).unwrap()] {
        let p = C64::from_polar(1.0, -0.7);
        let b = borel(&phi_series(&pt, p, 0, 30));
        let r = borel_radius_estimate(&b);
        let exact = borel_singularity(&pt, p).norm();
        assert!((r / exact - 1.0).abs() < 0.02, "{r} vs {exact}");
    }
}

#[test]
fn ray_laplace_matches_closed_form() {
    let pt = special_inside();
    let p = CoverComplex::unit(0.0);
    let zeta = C64::from_polar(3.0, -PI / 4.0);
    let theta = PI / 2.0;
    let ray = laplace_ray(&pt, p, 0, theta, zeta).unwrap();
    let lifted = sector_lift(&pt, p, theta, zeta).unwrap();
    let closed = resummed_closed_form(&pt, p, 0, lifted).unwrap();
    assert!(mixed_error(ray, closed) < 1e-8, "{ray} vs {closed}");

    let pt2 = special_point(c(0.1), C64::from_polar(0.4, 0.5)).unwrap();
    for (arg_p, m, theta) in [(0.9, 2i64, -1.0), (-2.0, -3, 2.0), (3.5, 1, 4.0)] {
        let p = CoverComplex::unit(arg_p);
        let zeta = C64::from_polar(2.0, -theta + 0.4);
        let ray = laplace_ray(&pt2, p, m, theta, zeta).unwrap();
        let closed = resummed_closed_form(&pt2, p, m, sector_lift(&pt2, p, theta, zeta).unwrap()).unwrap();
        assert!(mixed_error(ray, closed) < 1e-8, "arg p {arg_p} m {m}: {ray} vs {closed}");
    }
}

#[test]
fn ray_errors() {
    let pt = special_inside();
    let p = CoverComplex::unit(0.0);
    assert!(matches!(laplace_ray(&pt, p, 0, 0.0, c(1.0)), Err(TodaError::StokesRay { .. })));
    assert!(matches!(laplace_ray(&pt, p, 0, PI / 2.0, c(1.0)), Err(TodaError::OutOfSector { .. })));
}

#[test]
fn laplace_round_trip_on_convergent_series() {
    let a = C64::new(0.4, 0.3);
    let zeta = C64::new(2.0, -1.0);
    let value = laplace_along_ray(
        |d, ts| Ok(ts.iter().map(|t| (a * d * *t).exp()).collect()),
        0.2,
        zeta,
        None,
    )
    .unwrap();
    assert!(mixed_error(value, zeta / (zeta - a)) < 1e-10);
}

#[test]
fn lateral_jump_identity() {
    let pt = special_inside();
    for (arg_p, m) in [(0.0, 0i64), (0.7, 1), (-0.4, 2)] {
        let p = CoverComplex::unit(arg_p);
        let st = stokes_direction(&pt, p);
        let zeta = C64::from_polar(2.0, -st + 0.3);
        let (lhs, rhs) = lateral_jump(&pt, p, m, zeta, 1e-3).unwrap();
        assert!(mixed_error(lhs, rhs) < 1e-6, "m={m}: {lhs} vs {rhs}");
    }
}

#[test]
fn resummation_asymptotic_slope() {
    let pt = special_inside();
    let p = CoverComplex::unit(0.3);
    let moduli: Vec<f64> = (0..9).map(|j| 20.0 * 4f64.powf(j as f64 / 8.0)).collect();
    let arg = -stokes_direction(&pt, p) - PI + 0.4;
    for k in [2usize, 3] {
        let slope = resummation_slope(&pt, p, 1, k, arg, &moduli).unwrap();
        assert!((slope + (k as f64 + 1.0)).abs() <= 0.3, "K={k}: {slope}");
    }
}

#[test]
fn ds_pairing_with_unit() {
    let pt = special_point(c(0.2), c(0.5)).unwrap();
    let p = CoverComplex::unit(0.4);
    let zeta = CoverComplex::new(1.5, 0.3).unwrap();
    let ds = ds_p(&pt, p, zeta, DEFAULT_M_MAX).unwrap();
    let x = CoverComplex::new(2.0 * 0.5 * 1.5, 0.3 - 0.4 + PI).unwrap();
    let expected = C64::new(0.0, -1.0 / PI) * (zeta.to_complex() * 0.2).exp() * zeta.sqrt()
        * toda_core::specfun::bessel_k(0, x);
    assert!(mixed_error(ds.coeffs.v, expected) < 1e-14);
    assert!(ds.factorial_growth);
    assert!(ds_p(&special_outside(), p, zeta, 4).is_err());
}

#[test]
fn ds_monodromy_relations() {
    let pt = special_inside();
    let zeta = CoverComplex::new(2.0, PI / 6.0).unwrap();
    for arg_p in [0.0, 0.8, -2.5] {
        let (a, b) = monodromy_mismatch(&pt, CoverComplex::unit(arg_p), zeta, 8).unwrap();
        assert!(a < 1e-10 && b < 1e-10, "arg p {arg_p}: {a:e} {b:e}");
    }
}

#[test]
fn integral_solution_is_difference_of_resummed() {
    let pt = special_point(c(0.1), c(0.5)).unwrap();
    for (arg_p, zeta) in [(0.0, CoverComplex::new(2.0, 0.3).unwrap()), (1.9, CoverComplex::new(1.1, -2.4).unwrap())] {
        let p = CoverComplex::unit(arg_p);
        let dy = dy_sigma(&pt, sigma_at(&pt, p.to_complex()), zeta).unwrap();
        let gap = difference_mismatch(&pt, p, zeta, &dy, 8).unwrap();
        assert!(gap < 1e-10, "arg p {arg_p}: {gap:e}");
    }
}

#[test]
fn ds_solves_dubrovin_equation() {
    let pt = special_inside();
    let mut rng = seeded_rng(17);
    let p = CoverComplex::unit(0.6);
    for arg in [0.2, -1.3, 2.6] {
        let zeta = CoverComplex::new(1.4, arg).unwrap();
        for _ in 0..3 {
            let x = TangentTriple::random(&mut rng, pt.order(), 3);
            let est = dubrovin_residual(&pt, |z| Ok(ds_p(&pt, p, z, pt.order())?.coeffs), zeta, &x, DEFAULT_STEP, 1e-6)
                .unwrap();
            assert!(est.residual.norm() / (1.0 + est.derivative.norm()) < 1e-6, "arg {arg}: {:e}", est.residual.norm());
        }
    }
}

#[test]
fn completeness_rank_and_reconstruction() {
    let pt = special_inside();
    let zeta = CoverComplex::new(2.0, 0.0).unwrap();
    let report = completeness_probe(&pt, zeta, 0.0, 16, 3).unwrap();
    assert_eq!(report.rank, 9);
    assert!(matches!(completeness_probe(&pt, zeta, 0.0, 3, 3), Err(TodaError::RankDeficient { .. })));
    let f = LaurentSeries::from_terms(3, &[(2, c(1.0)), (-1, c(-3.0))]).unwrap();
    let x = TangentTriple::new(f, c(1.0), c(2.0));
    let back = triangular_reconstruction(&pt, zeta, 0.0, &x, 3, 256).unwrap();
    assert!(back.max_diff(&x) < 1e-6, "{back:?}");
}

#[test]
fn stokes_pair_recovery() {
    let pt = special_inside();
    let report = stokes_pair(&pt, CoverComplex::unit(0.0), StokesSampling::new(PI)).unwrap();
    assert!(report.max_entry_error < 1e-10, "{report:?}");
    assert!(max_entry_gap(&transpose(&report.s_plus), &report.s_minus) < 1e-10);
    assert!(report.monodromy_error < 1e-10);
    assert!(report.dominance_consistent);
}

#[test]
fn stokes_family_kernels() {
    let pt = special_inside();
    let report = stokes_family(&pt, StokesSampling::new(0.0), 32).unwrap();
    assert!(report.max_error_plus < 1e-10 && report.max_error_minus < 1e-10, "{report:?}");
    assert!(report.inactive_exact);
    assert!(report.transpose_consistent);
}

#[test]
fn dominance_ratio_decays() {
    let pt = special_inside();
    let moduli: Vec<f64> = (0..=10).map(|j| 10.0 + 5.0 * j as f64).collect();
    for (arg_p, arg) in [(0.0, 0.3), (0.0, PI - 0.4), (1.0, -0.2)] {
        let ratios = dominance_ratios(&pt, CoverComplex::unit(arg_p), arg, &moduli).unwrap();
        assert!(ratios.windows(2).all(|w| w[1] < w[0]), "{ratios:?}");
        assert!(ratios.last().unwrap() < &1e-3);
    }
}
