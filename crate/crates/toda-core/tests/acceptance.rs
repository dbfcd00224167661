use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use toda_core::presets::{frobenius_presets, perturbed, special_inside, special_outside, special_point};
use toda_core::resurgence::StokesSampling;
use toda_core::verify::{self, capture, CheckRecord};
use toda_core::{Result, C64};

fn each_preset(f: impl Fn(&str, &toda_core::manifold::ManifoldPoint) -> Result<Vec<CheckRecord>>) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for (name, pt) in frobenius_presets() {
        out.extend(f(name, &pt)?);
    }
    Ok(out)
}

fn criterion_1() -> Result<Vec<CheckRecord>> {
    each_preset(|name, pt| {
        let mut out = verify::admissibility(name, pt);
        out.extend(verify::frobenius_axioms(name, pt, 7, 20)?);
        Ok(out)
    })
}

fn criterion_2() -> Result<Vec<CheckRecord>> {
    each_preset(|name, pt| verify::spectrum(name, pt, 3))
}

fn criterion_3() -> Result<Vec<CheckRecord>> {
    each_preset(|name, pt| verify::key_lemma(name, pt, 13, 20))
}

fn criterion_4() -> Result<Vec<CheckRecord>> {
    each_preset(|name, pt| verify::canonical_metric(name, pt, 9, 20))
}

fn criterion_5() -> Result<Vec<CheckRecord>> {
    let ps = [C64::new(1.0, 0.0), C64::i(), C64::from_polar(1.0, PI / 5.0)];
    let mut out = verify::formal_continuous_family(&special_inside(), &ps, 2, 8)?;
    out.extend(verify::formal_discrete_family(&special_outside(), 4, 8)?);
    Ok(out)
}

fn criterion_6() -> Result<Vec<CheckRecord>> {
    let inside = special_inside();
    let mut out = verify::integral_residual("special e^u=1/2", &inside, C64::from_polar(1.0, 0.4), 5)?;
    out.extend(verify::integral_residual("perturbed", &perturbed(), C64::from_polar(1.0, -0.9), 6)?);
    out.extend(verify::bessel_closed_forms(&special_point(C64::new(0.3, -0.1), C64::new(0.5, 0.2))?)?);
    out.extend(verify::truncation_slopes(&inside, C64::new(1.0, 0.0))?);
    out.extend(verify::incompleteness(&inside)?);
    Ok(out)
}

fn criterion_7() -> Result<Vec<CheckRecord>> {
    Ok(verify::special_functions())
}

fn criterion_8() -> Result<Vec<CheckRecord>> {
    let mut out = verify::resummation("v=0, e^u=1/2", &special_inside())?;
    out.extend(verify::resummation(
        "v=0.1, e^u=0.4e^{0.5i}",
        &special_point(C64::new(0.1, 0.0), C64::from_polar(0.4, 0.5))?,
    )?);
    Ok(out)
}

fn criterion_9() -> Result<Vec<CheckRecord>> {
    verify::stokes(&special_inside(), 0.0, StokesSampling::new(PI))
}

fn criterion_10() -> Result<Vec<CheckRecord>> {
    verify::completeness(&special_inside())
}

fn criterion_11() -> Result<Vec<CheckRecord>> {
    verify::saddle_point(&special_point(C64::new(0.1, 0.0), C64::new(0.5, 0.0))?)
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Result<Vec<CheckRecord>>);
    let criteria: [Criterion; 11] = [
        ("Frobenius axioms", criterion_1),
        ("spectrum of U and the map Psi", criterion_2),
        ("key lemma", criterion_3),
        ("diagonal metric in canonical coordinates", criterion_4),
        ("formal recursion", criterion_5),
        ("integral solutions", criterion_6),
        ("special functions", criterion_7),
        ("resummation", criterion_8),
        ("Stokes matrices and kernels", criterion_9),
        ("completeness probe", criterion_10),
        ("saddle-point expansion", criterion_11),
    ];
    let mut failures = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let records = capture(&format!("criterion {}", i + 1), title, run);
        let ok = !records.is_empty() && records.iter().all(|r| r.pass);
        if !ok {
            failures += 1;
        }
        println!(
            "{} criterion {:>2}: {title} ({:.1}s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
        for r in &records {
            let status = if r.pass { "ok" } else { "!!" };
            match &r.error {
                Some(e) => println!("    [{status}] {}: {e}", r.name),
                None => println!("    [{status}] {} ({}): {:.3e} <= {:.1e}", r.name, r.reference, r.measured, r.tolerance),
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
