use std::collections::BTreeMap;
use std::f64::consts::PI;

use toda_core::canonical::canonical_value;
use toda_core::manifold::ManifoldPoint;
use toda_core::resurgence::{ds_p, p_grid, stokes_family, stokes_pair, StokesSampling};
use toda_core::specfun::CoverComplex;
use toda_core::verify::{self, capture, CheckRecord};
use toda_core::{Result, C64};

use crate::config::{RunConfig, Suite};
use crate::error::CliResult;
use crate::report::{matrix_entries, DataSeries, Environment, KernelPair, Report, StokesSummary, REPORT_SCHEMA};

const LABEL: &str = "configured";
const SECTOR_SAMPLES: usize = 72;
const P_GRID_SIZE: usize = 16;
const P_GRID_WINDOW: usize = 3;

#[derive(Debug, Default)]
struct SuiteOutcome {
    records: Vec<CheckRecord>,
    series: Vec<(String, DataSeries)>,
    stokes: Option<StokesSummary>,
}

impl SuiteOutcome {
    fn records(records: Vec<CheckRecord>) -> Self {
        Self { records, ..Self::default() }
    }

    fn extend(&mut self, name: &str, reference: &str, check: impl FnOnce() -> Result<Vec<CheckRecord>>) {
        self.records.extend(capture(name, reference, check));
    }
}

fn slope_series(pt: &ManifoldPoint) -> Result<DataSeries> {
    let fits = verify::slope_fits(pt, C64::new(1.0, 0.0))?;
    let moduli = &fits[0].1.moduli;
    let rows = moduli
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = vec![r.ln()];
            row.extend(fits.iter().map(|(_, fit)| fit.errors[i].ln()));
            row
        })
        .collect();
    Ok(DataSeries {
        columns: vec!["log_abs_zeta".into(), "log_error_k2".into(), "log_error_k3".into()],
        rows,
    })
}

fn sector_series(pt: &ManifoldPoint, p_arg: f64) -> Result<DataSeries> {
    let p = C64::from_polar(1.0, p_arg);
    let gap = canonical_value(pt, p)? - canonical_value(pt, -p)?;
    let rows = (0..SECTOR_SAMPLES)
        .map(|j| {
            let arg = 2.0 * PI * j as f64 / SECTOR_SAMPLES as f64;
            let dominant = if (C64::from_polar(1.0, arg) * gap).re > 0.0 { 0.0 } else { 1.0 };
            vec![arg, dominant]
        })
        .collect();
    Ok(DataSeries { columns: vec!["arg_zeta".into(), "dominant_index".into()], rows })
}

fn p_grid_series(pt: &ManifoldPoint) -> Result<DataSeries> {
    let zeta = CoverComplex::new(2.0, 0.0)?;
    let window = P_GRID_WINDOW as i64;
    let mut columns = vec!["arg_p".to_string()];
    for m in -window..=window {
        columns.push(format!("re_{m}"));
        columns.push(format!("im_{m}"));
    }
    let rows = p_grid(0.0, P_GRID_SIZE)
        .into_iter()
        .map(|p| {
            let ds = ds_p(pt, p, zeta, P_GRID_WINDOW)?.coeffs;
            let mut row = vec![p.arg()];
            for m in -window..=window {
                row.push(ds.coeff(m).re);
                row.push(ds.coeff(m).im);
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(DataSeries { columns, rows })
}

fn stokes_summary(pt: &ManifoldPoint, config: &RunConfig) -> Result<StokesSummary> {
    let s = config.stokes;
    let sampling = StokesSampling { theta: s.theta, epsilon: s.epsilon, zeta_abs: s.zeta_abs, ..StokesSampling::new(s.theta) };
    let pair = stokes_pair(pt, CoverComplex::unit(s.p_arg), sampling)?;
    let family = stokes_family(pt, sampling, 32)?;
    let pairs = |kernel: &'static str, entries: &[toda_core::resurgence::KernelEntry]| -> Vec<KernelPair> {
        entries
            .iter()
            .filter(|e| e.q != e.p)
            .map(|e| KernelPair { kernel, q_arg: family.grid_args[e.q], p_arg: family.grid_args[e.p], weight: e.weight })
            .collect()
    };
    let mut kernel_pairs = pairs("plus", &family.kernel_plus);
    kernel_pairs.extend(pairs("minus", &family.kernel_minus));
    Ok(StokesSummary {
        s_plus: matrix_entries(&pair.s_plus),
        s_minus: matrix_entries(&pair.s_minus),
        max_entry_error: pair.max_entry_error,
        kernel_pairs,
    })
}

fn run_one(suite: Suite, pt: &ManifoldPoint, config: &RunConfig) -> SuiteOutcome {
    let seed = config.seed;
    let ps = [C64::new(1.0, 0.0), C64::i(), C64::from_polar(1.0, PI / 5.0)];
    match suite {
        Suite::Spectrum => {
            let mut out = SuiteOutcome::default();
            out.extend("spectrum.error", "spectrum of U", || verify::spectrum(LABEL, pt, seed));
            out.extend("key_lemma.error", "key lemma", || verify::key_lemma(LABEL, pt, seed.wrapping_add(1), 20));
            out
        }
        Suite::Metric => {
            let mut out = SuiteOutcome::records(verify::admissibility(LABEL, pt));
            out.extend("frobenius.error", "Frobenius axioms", || verify::frobenius_axioms(LABEL, pt, seed.wrapping_add(2), 20));
            out.extend("metric.error", "canonical metric", || verify::canonical_metric(LABEL, pt, seed.wrapping_add(3), 20));
            out
        }
        Suite::Formal => {
            let mut out = SuiteOutcome::default();
            if pt.is_special() {
                out.extend("formal.continuous.error", "continuous formal family", || {
                    verify::formal_continuous_family(pt, &ps, seed.wrapping_add(4), 8)
                });
            }
            out.extend("formal.discrete.error", "discrete formal family", || {
                verify::formal_discrete_family(pt, seed.wrapping_add(5), 8)
            });
            out
        }
        Suite::Integral => {
            let mut out = SuiteOutcome::default();
            out.extend("integral.error", "integral solutions", || {
                verify::integral_residual(LABEL, pt, C64::from_polar(1.0, 0.4), seed.wrapping_add(6))
            });
            if pt.is_special() {
                out.extend("integral.bessel.error", "Bessel closed forms", || verify::bessel_closed_forms(pt));
                out.extend("integral.slope.error", "truncation slopes", || verify::truncation_slopes(pt, C64::new(1.0, 0.0)));
                out.extend("integral.witness.error", "incompleteness witness", || verify::incompleteness(pt));
                match slope_series(pt) {
                    Ok(s) => out.series.push(("asymptotic-slopes".into(), s)),
                    Err(e) => out.records.push(CheckRecord::failed("integral.series.error", "asymptotic slopes", &e)),
                }
            }
            out
        }
        Suite::Resurgence => {
            let mut out = SuiteOutcome::default();
            out.extend("resurgence.error", "resummation", || verify::resummation(LABEL, pt));
            out.extend("completeness.error", "completeness probe", || verify::completeness(pt));
            match p_grid_series(pt) {
                Ok(s) => out.series.push(("p-grid".into(), s)),
                Err(e) => out.records.push(CheckRecord::failed("resurgence.series.error", "p-grid coefficients", &e)),
            }
            out
        }
        Suite::Stokes => {
            let s = config.stokes;
            let sampling = StokesSampling { theta: s.theta, epsilon: s.epsilon, zeta_abs: s.zeta_abs, ..StokesSampling::new(s.theta) };
            let mut out = SuiteOutcome::default();
            out.extend("stokes.error", "Stokes matrices", || verify::stokes(pt, s.p_arg, sampling));
            match stokes_summary(pt, config) {
                Ok(summary) => out.stokes = Some(summary),
                Err(e) => out.records.push(CheckRecord::failed("stokes.summary.error", "Stokes matrices", &e)),
            }
            match sector_series(pt, s.p_arg) {
                Ok(series) => out.series.push(("sector-map".into(), series)),
                Err(e) => out.records.push(CheckRecord::failed("stokes.series.error", "sector map", &e)),
            }
            out
        }
        Suite::SpecfunSelftest => SuiteOutcome::records(verify::special_functions()),
    }
}

fn override_for<'a>(config: &'a RunConfig, name: &str) -> Option<&'a f64> {
    config
        .tolerances
        .get(name)
        .or_else(|| name.split_once('[').and_then(|(base, _)| config.tolerances.get(base)))
}

/// Runs the selected suites, fanning them out over `config.jobs` worker threads, and
/// assembles the records in suite order.
pub fn run_suite(config: &RunConfig) -> CliResult<Report> {
    config.validate()?;
    let pt = config.build_point()?;
    let mut suites = config.suites.clone();
    suites.sort();
    suites.dedup();

    let mut outcomes: Vec<Option<SuiteOutcome>> = suites.iter().map(|_| None).collect();
    let workers = config.jobs.min(suites.len()).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let (pt, suites) = (&pt, &suites);
                scope.spawn(move || {
                    (w..suites.len())
                        .step_by(workers)
                        .map(|i| (i, run_one(suites[i], pt, config)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for handle in handles {
            for (i, outcome) in handle.join().expect("suite worker panicked") {
                outcomes[i] = Some(outcome);
            }
        }
    });

    let mut records = Vec::new();
    let mut series = BTreeMap::new();
    let mut stokes = None;
    for outcome in outcomes.into_iter().flatten() {
        records.extend(outcome.records);
        series.extend(outcome.series);
        stokes = stokes.or(outcome.stokes);
    }
    let records: Vec<CheckRecord> = records
        .into_iter()
        .map(|r| match override_for(config, &r.name) {
            Some(&tol) => r.with_tolerance(tol),
            None => r,
        })
        .collect();
    Ok(Report {
        schema: REPORT_SCHEMA,
        environment: Environment::current(),
        config: config.clone(),
        passed: records.iter().all(|r| r.pass),
        records,
        series,
        stokes,
    })
}
