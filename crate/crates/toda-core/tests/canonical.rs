use toda_core::canonical::*;
use toda_core::manifold::{apply_u, metric, TangentTriple};
use toda_core::presets::{frobenius_presets, perturbed, seeded_rng, special_inside, special_outside, special_point};
use toda_core::C64;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[test]
fn sigma_curve_at_special_point() {
    let pt = special_inside();
    let s = sigma_curve(&pt).unwrap();
    assert!((s.coeff(0) - c(1.0)).norm() < 1e-14);
    assert!((s.coeff(-2) - c(0.5)).norm() < 1e-14);
    assert!((sigma_at(&pt, c(1.0)) - c(1.5)).norm() < 1e-14);
}

#[test]
fn canonical_values_at_special_point() {
    let pt = special_inside();
    assert!((canonical_value(&pt, c(1.0)).unwrap() - c(1.0)).norm() < 1e-14);
    let pt2 = special_point(c(2.0), c(0.5)).unwrap();
    let i = C64::new(0.0, 1.0);
    assert!((canonical_value(&pt2, i).unwrap() - C64::new(2.0, -1.0)).norm() < 1e-14);
}

#[test]
fn canonical_value_derivative_matches_finite_differences() {
    let pt = perturbed();
    let p = C64::from_polar(1.0, 0.7);
    let h = 1e-4;
    let dp = C64::from_polar(h, 0.7 + std::f64::consts::FRAC_PI_2) * 1.0;
    let fd = (canonical_value(&pt, p + dp).unwrap() - canonical_value(&pt, p - dp).unwrap()) / (dp * 2.0);
    let exact = canonical_value_derivative(&pt, p);
    assert!((fd - exact).norm() / exact.norm() < 1e-6);
}

#[test]
fn critical_sets_of_presets() {
    let inside = find_critical_set(&special_inside()).unwrap();
    assert!(inside.outer.is_empty() && inside.inner.is_empty());
    let outside = find_critical_set(&special_outside()).unwrap();
    assert!(outside.inner.is_empty());
    assert_eq!(outside.outer.len(), 2);
    for cp in &outside.outer {
        assert!((cp.z.norm() - 2.0).abs() < 1e-12);
        let expected = if cp.z.im > 0.0 { C64::new(0.0, -4.0) } else { C64::new(0.0, 4.0) };
        assert!((cp.value - expected).norm() < 1e-12);
    }
    let pert = find_critical_set(&perturbed()).unwrap();
    assert!(pert.outer.is_empty());
    assert_eq!(pert.inner.len(), 3);
    for cp in &pert.inner {
        assert!((cp.z.norm() - 0.1f64.powf(1.0 / 3.0)).abs() < 1e-12);
    }
}

#[test]
fn eigen_residuals_at_presets() {
    for (name, pt) in frobenius_presets() {
        let crit = find_critical_set(&pt).unwrap();
        let grid = pt.grid();
        let step = grid.len() / 64;
        let ps: Vec<C64> = grid.iter().step_by(step).copied().collect();
        let eig = eigen_functionals(&pt, &crit, &ps).unwrap();
        let mut rng = seeded_rng(3);
        for _ in 0..5 {
            let x = TangentTriple::random(&mut rng, pt.order(), 3);
            let scale = x.size();
            for (_, value, xi) in &eig.continuous {
                let r = eigen_residual(&pt, xi, *value, &x).unwrap();
                assert!(r <= 1e-9 * scale, "{name}: continuous {r}");
            }
            for (cp, xi, rep) in eig.outer.iter().chain(&eig.inner) {
                let r = eigen_residual(&pt, xi, cp.value, &x).unwrap();
                assert!(r <= 1e-9 * scale, "{name}: discrete {r}");
                let via_rep = metric(&pt, rep, &x).unwrap();
                assert!((via_rep - xi.eval(&x)).norm() < 1e-8, "{name}: representative");
            }
        }
    }
}

#[test]
fn psi_round_trip_and_diagonal_action() {
    for (name, pt) in frobenius_presets() {
        let crit = find_critical_set(&pt).unwrap();
        let values: Vec<C64> = pt.grid().iter().map(|&p| canonical_value(&pt, p).unwrap()).collect();
        let outer: Vec<C64> = crit.outer.iter().map(|c| c.value).collect();
        let inner: Vec<C64> = crit.inner.iter().map(|c| c.value).collect();
        let mut rng = seeded_rng(5);
        for _ in 0..5 {
            let x = TangentTriple::random(&mut rng, pt.order(), 3);
            let y = psi_forward(&pt, &crit, &x).unwrap();
            let back = psi_inverse(&pt, &crit, &y).unwrap();
            assert!(back.max_diff(&x) < 1e-8, "{name}: {}", back.max_diff(&x));
            let uy = psi_forward(&pt, &crit, &apply_u(&pt, &x).unwrap()).unwrap();
            let diag = y.weighted(&values, &outer, &inner);
            assert!(uy.max_diff(&diag) < 1e-8, "{name}: {}", uy.max_diff(&diag));
        }
    }
}

#[test]
fn unit_field_maps_to_constant_one() {
    let pt = special_inside();
    let crit = find_critical_set(&pt).unwrap();
    let y = psi_forward(&pt, &crit, &TangentTriple::unit(pt.order())).unwrap();
    assert!(y.continuous.iter().all(|v| (v - c(1.0)).norm() < 1e-13));
}

#[test]
fn canonical_metric_matches_flat_metric() {
    for (name, pt) in frobenius_presets() {
        let crit = find_critical_set(&pt).unwrap();
        let mut rng = seeded_rng(9);
        for _ in 0..5 {
            let x = TangentTriple::random(&mut rng, pt.order(), 3);
            let y = TangentTriple::random(&mut rng, pt.order(), 3);
            let a = psi_forward(&pt, &crit, &x).unwrap();
            let b = psi_forward(&pt, &crit, &y).unwrap();
            let lhs = metric_canonical(&pt, &crit, &a, &b).unwrap();
            let rhs = metric(&pt, &x, &y).unwrap();
            assert!((lhs - rhs).norm() < 1e-8, "{name}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn key_lemma_holds() {
    for (name, pt) in frobenius_presets() {
        let mut rng = seeded_rng(13);
        for _ in 0..5 {
            let x = TangentTriple::random(&mut rng, pt.order(), 3);
            let sigma = C64::new(rand::Rng::gen_range(&mut rng, -1.0..1.0), rand::Rng::gen_range(&mut rng, -1.0..1.0));
            let r = key_lemma_residual(&pt, sigma, &x).unwrap();
            let m = r.sup_on_grid(pt.nodes());
            assert!(m < 1e-9 * x.size(), "{name}: {m}");
        }
    }
}
