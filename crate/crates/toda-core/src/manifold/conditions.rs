use serde::Serialize;

use crate::laurent::C64;
use crate::manifold::point::{ManifoldPoint, DEFAULT_FLOOR};

/// Outcome of the admissibility conditions T1 to T5 together with the margins
/// each verdict is based on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub floor: f64,
    pub e_u_modulus: f64,
    pub min_w_prime: f64,
    pub winding_number: i64,
    pub simple_curve: bool,
    pub min_sigma_prime: f64,
    pub min_outer_prime: f64,
    pub min_inner_prime: f64,
    pub t1: bool,
    pub t2: bool,
    pub t3: bool,
    pub t4: bool,
    pub t5: bool,
}

impl ConditionReport {
    pub fn all_pass(&self) -> bool {
        self.t1 && self.t2 && self.t3 && self.t4 && self.t5
    }

    /// Names of the failing conditions.
    pub fn failures(&self) -> Vec<&'static str> {
        [("T1", self.t1), ("T2", self.t2), ("T3", self.t3), ("T4", self.t4), ("T5", self.t5)]
            .into_iter()
            .filter(|(_, ok)| !ok)
            .map(|(name, _)| name)
            .collect()
    }
}

pub fn check_conditions(pt: &ManifoldPoint) -> ConditionReport {
    check_conditions_with_floor(pt, DEFAULT_FLOOR)
}

pub fn check_conditions_with_floor(pt: &ManifoldPoint, floor: f64) -> ConditionReport {
    let m = pt.nodes();
    let w_samples = pt.w().samples(m);
    let outer_d = pt.outer().derivative();
    let inner_d = pt.inner().derivative();
    let min_modulus = |s: &[C64]| s.iter().map(|c| c.norm()).fold(f64::INFINITY, f64::min);

    let outer_d_s = outer_d.samples(m);
    let inner_d_s = inner_d.samples(m);
    let outer_dd_s = outer_d.derivative().samples(m);
    let w_d_s = pt.w_prime().samples(m);
    let w_dd_s = pt.w_prime().derivative().samples(m);
    let sigma_prime: Vec<C64> = (0..m)
        .map(|j| (outer_dd_s[j] * w_d_s[j] - outer_d_s[j] * w_dd_s[j]) / (w_d_s[j] * w_d_s[j]))
        .collect();

    let e_u_modulus = pt.e_u().norm();
    let min_w_prime = min_modulus(&w_d_s);
    let winding_number = winding_about_origin(&w_samples);
    let simple_curve = is_simple_polygon(&w_samples);
    let min_sigma_prime = if min_w_prime > 0.0 {
        min_modulus(&sigma_prime)
    } else {
        0.0
    };
    let min_outer_prime = min_modulus(&outer_d_s);
    let min_inner_prime = min_modulus(&inner_d_s);

    ConditionReport {
        floor,
        e_u_modulus,
        min_w_prime,
        winding_number,
        simple_curve,
        min_sigma_prime,
        min_outer_prime,
        min_inner_prime,
        t1: e_u_modulus >= floor,
        t2: min_w_prime >= floor,
        t3: winding_number == 1 && simple_curve,
        t4: min_sigma_prime.is_finite() && min_sigma_prime >= floor,
        t5: min_outer_prime >= floor && min_inner_prime >= floor,
    }
}

/// Winding number of the closed polygon through `samples` about the origin.
pub fn winding_about_origin(samples: &[C64]) -> i64 {
    let n = samples.len();
    let total: f64 = (0..n)
        .map(|j| (samples[(j + 1) % n] / samples[j]).arg())
        .sum();
    (total / std::f64::consts::TAU).round() as i64
}

fn orientation(a: C64, b: C64, c: C64) -> f64 {
    let ab = b - a;
    let ac = c - a;
    ab.re * ac.im - ab.im * ac.re
}

fn segments_cross(a: C64, b: C64, c: C64, d: C64) -> bool {
    let d1 = orientation(c, d, a);
    let d2 = orientation(c, d, b);
    let d3 = orientation(a, b, c);
    let d4 = orientation(a, b, d);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Whether the closed polygon through `samples` has no crossing between
/// non-adjacent edges.
pub fn is_simple_polygon(samples: &[C64]) -> bool {
    let n = samples.len();
    for i in 0..n {
        let (a, b) = (samples[i], samples[(i + 1) % n]);
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_cross(a, b, samples[j], samples[(j + 1) % n]) {
                return false;
            }
        }
    }
    true
}
