//! The Gauss hypergeometric function `2F1(a, b; c; z)`.

use crate::error::{Result, TodaError};
use crate::laurent::C64;
use crate::specfun::gamma::{digamma, gamma};

const ONE: C64 = C64 { re: 1.0, im: 0.0 };
const SERIES_RADIUS: f64 = 0.7;

fn is_nonpositive_integer(a: C64) -> bool {
    a.im == 0.0 && a.re <= 0.0 && a.re.fract() == 0.0
}

/// Defining power series, valid for `|z| < 1`.
pub fn hyp2f1_series(a: C64, b: C64, c: C64, z: C64) -> C64 {
    let mut term = ONE;
    let mut sum = ONE;
    for n in 0..20_000u32 {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() && n > 2 {
            break;
        }
        if term == C64::new(0.0, 0.0) {
            break;
        }
    }
    sum
}

/// Expansion around `z = 1` for the logarithmic case `c = a + b`, valid for `|1 - z| < 1`.
pub fn hyp2f1_log_connection(a: C64, b: C64, c: C64, z: C64) -> Result<C64> {
    if (c - (a + b)).norm() > 1e-14 * (1.0 + c.norm()) {
        return Err(TodaError::ParameterOutOfScope {
            detail: format!("logarithmic connection needs c = a + b, got a={a}, b={b}, c={c}"),
        });
    }
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        return Err(TodaError::ParameterOutOfScope {
            detail: "terminating series has no logarithmic branch point".to_string(),
        });
    }
    let w = ONE - z;
    let prefactor = gamma(a + b) / (gamma(a) * gamma(b));
    let log_w = w.ln();
    let mut psi_1 = digamma(ONE);
    let mut psi_a = digamma(a);
    let mut psi_b = digamma(b);
    let mut term = ONE;
    let mut sum = C64::new(0.0, 0.0);
    for k in 0..20_000u32 {
        let kf = k as f64;
        if k > 0 {
            term *= (a + kf - 1.0) * (b + kf - 1.0) / (kf * kf) * w;
            psi_1 += 1.0 / kf;
            psi_a += (a + kf - 1.0).inv();
            psi_b += (b + kf - 1.0).inv();
        }
        let add = term * (psi_1 * 2.0 - psi_a - psi_b - log_w);
        sum += add;
        if add.norm() <= 1e-17 * sum.norm() && term.norm() <= 1e-17 && k > 2 {
            break;
        }
    }
    Ok(prefactor * sum)
}

/// Analytic continuation of `2F1` and its derivative along straight segments,
/// by re-expanding the hypergeometric equation in Taylor series at each step.
#[derive(Debug, Clone)]
pub struct Hyp2f1Continuation {
    a: C64,
    b: C64,
    c: C64,
    x: C64,
    value: C64,
    slope: C64,
}

impl Hyp2f1Continuation {
    /// Starts at `x0` with `|x0| < 1` using the power series.
    pub fn new(a: C64, b: C64, c: C64, x0: C64) -> Result<Self> {
        if x0.norm() >= 0.9 {
            return Err(TodaError::ParameterOutOfScope {
                detail: format!("continuation must start inside the unit disc, got {x0}"),
            });
        }
        let value = hyp2f1_series(a, b, c, x0);
        let slope = a * b / c * hyp2f1_series(a + 1.0, b + 1.0, c + 1.0, x0);
        Ok(Self {
            a,
            b,
            c,
            x: x0,
            value,
            slope,
        })
    }

    pub fn position(&self) -> C64 {
        self.x
    }

    pub fn value(&self) -> C64 {
        self.value
    }

    pub fn slope(&self) -> C64 {
        self.slope
    }

    fn taylor_step(&mut self, h: C64) {
        let (a, b, c, x0) = (self.a, self.b, self.c, self.x);
        let p0 = x0 * (ONE - x0);
        let p1 = ONE - x0 * 2.0;
        let q0 = c - (a + b + 1.0) * x0;
        let q1 = -(a + b + 1.0);
        let r = -(a * b);
        let mut f_prev = self.value;
        let mut f_cur = self.slope;
        let mut value = f_prev + f_cur * h;
        let mut slope = f_cur;
        let mut hk = h;
        let mut small = 0;
        for k in 0..400u32 {
            let kf = k as f64;
            let num = (p1 * ((kf + 1.0) * kf) + q0 * (kf + 1.0)) * f_cur
                + (r + q1 * kf - kf * (kf - 1.0)) * f_prev;
            let f_next = -num / (p0 * ((kf + 2.0) * (kf + 1.0)));
            slope += f_next * hk * (kf + 2.0);
            hk *= h;
            let add = f_next * hk;
            value += add;
            f_prev = f_cur;
            f_cur = f_next;
            if add.norm() <= 1e-18 * value.norm() {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
        }
        self.x += h;
        self.value = value;
        self.slope = slope;
    }

    /// Moves along the straight segment to `target`, with each step at most half
    /// the distance to the nearest singular point `0` or `1`.
    pub fn advance_to(&mut self, target: C64) -> Result<()> {
        let mut guard = 0;
        while (target - self.x).norm() > 1e-15 * (1.0 + target.norm()) {
            let dist = self.x.norm().min((ONE - self.x).norm());
            if dist < 1e-12 {
                return Err(TodaError::ParameterOutOfScope {
                    detail: "continuation path runs into a singular point".to_string(),
                });
            }
            let remaining = target - self.x;
            let len = remaining.norm();
            let step = len.min(0.5 * dist);
            self.taylor_step(remaining * (step / len));
            guard += 1;
            if guard > 100_000 {
                return Err(TodaError::ParameterOutOfScope {
                    detail: "continuation path too close to a singular point".to_string(),
                });
            }
        }
        Ok(())
    }
}

/// Principal branch of `2F1(a, b; c; z)` on the plane cut along `[1, inf)`.
pub fn hyp2f1(a: C64, b: C64, c: C64, z: C64) -> Result<C64> {
    if z.norm() <= SERIES_RADIUS {
        return Ok(hyp2f1_series(a, b, c, z));
    }
    let log_case = (c - (a + b)).norm() <= 1e-14 * (1.0 + c.norm())
        && !is_nonpositive_integer(a)
        && !is_nonpositive_integer(b);
    if log_case && (ONE - z).norm() <= SERIES_RADIUS {
        return hyp2f1_log_connection(a, b, c, z);
    }
    if z.im == 0.0 && z.re >= 1.0 {
        return Err(TodaError::ParameterOutOfScope {
            detail: format!("z = {z} lies on the branch cut"),
        });
    }
    let start = z * (0.5 / z.norm());
    let mut path = Hyp2f1Continuation::new(a, b, c, start)?;
    path.advance_to(z)?;
    Ok(path.value())
}

/// Values of `2F1(a, b; c; t d)` for ascending `t >= 0` along the ray of direction `d`,
/// continued analytically from the origin.
pub fn hyp2f1_along_ray(a: C64, b: C64, c: C64, direction: C64, ts: &[f64]) -> Result<Vec<C64>> {
    let unit = direction / direction.norm();
    let scale = direction.norm();
    let mut out = Vec::with_capacity(ts.len());
    let mut path: Option<Hyp2f1Continuation> = None;
    for &t in ts {
        let x = unit * (t * scale);
        if x.norm() <= 0.5 {
            out.push(hyp2f1_series(a, b, c, x));
            continue;
        }
        let walker = match path.as_mut() {
            Some(w) => w,
            None => path.insert(Hyp2f1Continuation::new(a, b, c, unit * 0.5)?),
        };
        walker.advance_to(x)?;
        out.push(walker.value());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::mixed_error;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn value_at_origin() {
        assert_eq!(hyp2f1(c(0.3), c(1.2), c(2.0), c(0.0)).unwrap(), c(1.0));
    }

    #[test]
    fn closed_forms() {
        // 2F1(1,1;2;z) = -ln(1-z)/z
        let z = C64::new(0.3, 0.4);
        let exact = -(c(1.0) - z).ln() / z;
        assert!((hyp2f1_series(c(1.0), c(1.0), c(2.0), z) - exact).norm() < 1e-15);
        let far = C64::new(-3.0, 2.0);
        let exact_far = -(c(1.0) - far).ln() / far;
        assert!((hyp2f1(c(1.0), c(1.0), c(2.0), far).unwrap() - exact_far).norm() < 1e-13);
    }

    #[test]
    fn lens_agreement() {
        let (a, b, cc) = (c(0.5), c(0.5), c(1.0));
        for &z in &[c(0.6), C64::new(0.55, 0.3), C64::new(0.7, -0.2)] {
            let s = hyp2f1_series(a, b, cc, z);
            let l = hyp2f1_log_connection(a, b, cc, z).unwrap();
            assert!(mixed_error(s, l) < 1e-12, "z={z}");
        }
    }

    #[test]
    fn connection_rejects_generic_parameters() {
        assert!(matches!(
            hyp2f1_log_connection(c(0.5), c(0.5), c(1.5), c(0.6)),
            Err(TodaError::ParameterOutOfScope { .. })
        ));
    }

    #[test]
    fn continuation_matches_connection_near_one() {
        let (a, b, cc) = (c(-1.5), c(2.5), c(1.0));
        let z = C64::new(1.3, 0.4);
        let l = hyp2f1_log_connection(a, b, cc, z).unwrap();
        let mut path = Hyp2f1Continuation::new(a, b, cc, z * (0.5 / z.norm())).unwrap();
        path.advance_to(z).unwrap();
        assert!(mixed_error(path.value(), l) < 1e-12);
    }
}
