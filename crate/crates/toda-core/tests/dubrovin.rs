use std::f64::consts::PI;

use toda_core::canonical::{canonical_value, du_continuous, WeakFunctional};
use toda_core::dubrovin::*;
use toda_core::manifold::{apply_u, metric, TangentTriple};
use toda_core::presets::{seeded_rng, special_inside, special_outside};
use toda_core::specfun::CoverComplex;
use toda_core::C64;

fn batch(order: usize, seed: u64) -> Vec<TangentTriple> {
    let mut rng = seeded_rng(seed);
    (0..10).map(|_| TangentTriple::random(&mut rng, order, 3)).collect()
}

#[test]
fn left_inverse_properties() {
    let pt = special_inside();
    let p = C64::from_polar(1.0, 0.3);
    let up = canonical_value(&pt, p).unwrap();
    let zero = left_inverse_ap(&pt, p, &TangentTriple::unit(pt.order())).unwrap();
    assert!(zero.size() < 1e-15);
    for x in batch(pt.order(), 1) {
        let shifted = &x.scale(up) - &apply_u(&pt, &x).unwrap();
        let back = left_inverse_ap(&pt, p, &shifted).unwrap();
        assert!(back.max_diff(&x) < 1e-9, "{}", back.max_diff(&x));
    }
}

#[test]
fn left_inverse_quotient_is_polynomial() {
    let pt = special_inside();
    let x = TangentTriple::basis_power(pt.order(), 2);
    let a = left_inverse_ap(&pt, C64::new(1.0, 0.0), &x).unwrap();
    assert!((a.function.coeff(2) - C64::new(1.0, 0.0)).norm() < 1e-15);
    assert!((a.function.coeff(1) - C64::new(1.0, 0.0)).norm() < 1e-15);
    assert!(a.function.coeff(3).norm() == 0.0 && a.function.coeff(0).norm() == 0.0);
}

#[test]
fn continuous_recursion_holds() {
    let pt = special_inside();
    let xs = batch(pt.order(), 2);
    let consts = [C64::new(0.3, -0.1), C64::new(1.0, 0.5), C64::new(-0.2, 0.0), C64::new(0.0, 0.7),
        C64::new(0.1, 0.1), C64::new(-1.0, 0.2), C64::new(0.5, 0.5), C64::new(0.0, -0.3)];
    for p in [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::from_polar(1.0, PI / 5.0)] {
        for constants in [[C64::new(0.0, 0.0); 8], consts] {
            let sol = formal_continuous(&pt, p, 8, &constants).unwrap();
            assert_eq!(sol.terms.len(), 9);
            let res = recursion_residuals(&pt, &sol, &xs).unwrap();
            assert!(res.iter().all(|r| *r < 1e-9), "{p}: {res:?}");
            let e = TangentTriple::unit(pt.order());
            for k in 1..=8 {
                assert!((sol.terms[k].eval(&e) - constants[k - 1]).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn discrete_recursion_holds_and_is_unique() {
    let pt = special_outside();
    let xs = batch(pt.order(), 4);
    for which in [CriticalChoice::Outer(0), CriticalChoice::Outer(1)] {
        let sol = formal_discrete(&pt, which, 8).unwrap();
        let res = recursion_residuals(&pt, &sol, &xs).unwrap();
        assert!(res.iter().all(|r| *r < 1e-9), "{res:?}");
        let reps = sol.representatives.as_ref().unwrap();
        for (term, rep) in sol.terms.iter().zip(reps) {
            for x in &xs {
                assert!((metric(&pt, rep, x).unwrap() - term.eval(x)).norm() < 1e-8);
            }
        }
        let shifted = formal_discrete_perturbed(&pt, which, 8, Some((3, C64::new(0.7, -0.4)))).unwrap();
        assert!((sol.free_constants[2] - shifted.free_constants[2] - C64::new(0.7, -0.4)).norm() < 1e-8);
        for k in [0, 1, 3, 4, 5, 6, 7] {
            assert!((sol.free_constants[k] - shifted.free_constants[k]).norm() < 1e-8);
        }
        for k in 0..=8 {
            assert!(sol.terms[k].max_diff(&shifted.terms[k]) < 1e-8 * (1.0 + sol.terms[k].v.norm()));
        }
    }
}

#[test]
fn constant_functional_is_not_a_solution() {
    let pt = special_inside();
    let p = C64::new(1.0, 0.0);
    let xi = du_continuous(&pt, p);
    let x = TangentTriple::basis_power(pt.order(), 1);
    let zeta = CoverComplex::new(2.0, 0.3).unwrap();
    let est = dubrovin_residual(&pt, |_| Ok::<WeakFunctional, _>(xi.clone()), zeta, &x, DEFAULT_STEP, 1e-6).unwrap();
    assert!(est.residual.norm() > 1e-3);
}
