use toda_core::manifold::{
    apply_u, apply_u_expanded, apply_v, check_conditions, metric, product, TangentTriple,
};
use toda_core::presets::{frobenius_presets, perturbed, seeded_rng};
use toda_core::C64;

#[test]
fn perturbed_preset_is_admissible() {
    let report = check_conditions(&perturbed());
    assert!(report.all_pass(), "{report:?}");
}

#[test]
fn frobenius_axioms_on_random_triples() {
    for (name, pt) in frobenius_presets() {
        let n = pt.order();
        let mut rng = seeded_rng(7);
        let e = TangentTriple::unit(n);
        let mut worst = [0.0f64; 4];
        for _ in 0..20 {
            let x = TangentTriple::random(&mut rng, n, 3);
            let y = TangentTriple::random(&mut rng, n, 3);
            let z = TangentTriple::random(&mut rng, n, 3);
            let xy = product(&pt, &x, &y).unwrap();
            let yx = product(&pt, &y, &x).unwrap();
            worst[0] = worst[0].max(xy.max_diff(&yx));
            let lhs = product(&pt, &xy, &z).unwrap();
            let rhs = product(&pt, &x, &product(&pt, &y, &z).unwrap()).unwrap();
            worst[1] = worst[1].max(lhs.max_diff(&rhs));
            worst[2] = worst[2].max(product(&pt, &e, &x).unwrap().max_diff(&x));
            let a = metric(&pt, &xy, &z).unwrap();
            let b = metric(&pt, &x, &product(&pt, &y, &z).unwrap()).unwrap();
            worst[3] = worst[3].max((a - b).norm());
        }
        println!("{name}: {worst:?}");
        assert!(worst.iter().all(|r| *r <= 1e-9), "{name}: {worst:?}");
    }
}

#[test]
fn euler_paths_agree_and_symmetries_hold() {
    for (name, pt) in frobenius_presets() {
        let n = pt.order();
        let mut rng = seeded_rng(11);
        for _ in 0..10 {
            let x = TangentTriple::random(&mut rng, n, 3);
            let y = TangentTriple::random(&mut rng, n, 3);
            let ux = apply_u(&pt, &x).unwrap();
            assert!(ux.max_diff(&apply_u_expanded(&pt, &x).unwrap()) < 1e-10, "{name}");
            let uy = apply_u(&pt, &y).unwrap();
            let sym = metric(&pt, &ux, &y).unwrap() - metric(&pt, &x, &uy).unwrap();
            assert!(sym.norm() < 1e-10, "{name}: {sym}");
            let vx = apply_v(&pt, &x).unwrap();
            let vy = apply_v(&pt, &y).unwrap();
            let anti: C64 = metric(&pt, &vx, &y).unwrap() + metric(&pt, &x, &vy).unwrap();
            assert!(anti.norm() < 1e-10, "{name}: {anti}");
        }
    }
}
