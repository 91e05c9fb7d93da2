//! Closed-form envelope solutions for power-law and exponential-well
//! potentials, and the principal Lambert W branch they need.
#[allow(unused_imports)]
use crate::float::Real as _;


use crate::error::{Error, Result};
use crate::model::binomial;

const INV_E: f64 = 0.367_879_441_171_442_33;

/// Principal branch `W0(x)`, the solution `w >= -1` of `w e^w = x`.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain("lambert_w0 of NaN"));
    }
    if x < -INV_E {
        if x > -INV_E - 1e-15 {
            return Ok(-1.0);
        }
        return Err(Error::Domain("lambert_w0 needs x >= -1/e"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let mut w = if x < -0.25 {
        let p = (2.0 * (core::f64::consts::E * x + 1.0)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if x > 3.0 {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    } else {
        let l = (1.0 + x).ln();
        l * (1.0 - (1.0 + l).ln() / (2.0 + l))
    };
    for _ in 0..30 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1.abs() < 1e-300 {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        let next = (w - step).max(-1.0);
        if (next - w).abs() <= 4.0 * f64::EPSILON * (1.0 + next.abs()) {
            w = next;
            break;
        }
        w = next;
    }
    Ok(w)
}

/// Kinetic `f p^alpha`, potential `a sgn(b) r^b` on every K-subset of N
/// particles. Returns `(E, rho0)`.
pub fn powerlaw_solution(
    f: f64,
    alpha: f64,
    a: f64,
    b: f64,
    n: u32,
    k: u32,
    q_eff: f64,
) -> Result<(f64, f64)> {
    if !(f > 0.0 && alpha > 0.0 && a > 0.0 && b > -alpha && b != 0.0 && q_eff > 0.0) {
        return Err(Error::Domain("power-law solution parameters out of range"));
    }
    if k < 2 || k > n {
        return Err(Error::Domain("power-law solution needs 2 <= K <= N"));
    }
    let nf = n as f64;
    let cn2 = binomial(n, 2)? as f64;
    let cnk = binomial(n, k)? as f64;
    let ck2 = binomial(k, 2)? as f64;
    // stationarity: N f alpha p^alpha = C_N^K a |b| (sqrt(C_K^2) rho)^b, p = Q / (sqrt(C_N^2) rho)
    let num = nf * f * alpha * q_eff.powf(alpha);
    let den = cn2.powf(alpha / 2.0) * cnk * a * b.abs() * ck2.powf(b / 2.0);
    let rho0 = (num / den).powf(1.0 / (alpha + b));
    let p0 = q_eff / (cn2.sqrt() * rho0);
    let e = nf * f * p0.powf(alpha) * (alpha + b) / b;
    Ok((e, rho0))
}

/// Outcome of the exponential-well closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExpWellSolution {
    Bound { e: f64, rho0: f64, delta: f64 },
    /// No stationary point: the Lambert argument fell below `-1/e`.
    Unbound { delta: f64 },
}

/// Kinetic `f p^alpha`, potential `-a exp(-b r^gamma)` on every K-subset.
pub fn exponential_solution(
    f: f64,
    alpha: f64,
    a: f64,
    b: f64,
    gamma: f64,
    n: u32,
    k: u32,
    q_eff: f64,
) -> Result<ExpWellSolution> {
    if !(f > 0.0 && alpha > 0.0 && a > 0.0 && b > 0.0 && gamma > 0.0 && q_eff > 0.0) {
        return Err(Error::Domain("exponential-well parameters out of range"));
    }
    if k < 2 || k > n {
        return Err(Error::Domain("exponential-well solution needs 2 <= K <= N"));
    }
    let nf = n as f64;
    let cn2 = binomial(n, 2)? as f64;
    let cnk = binomial(n, k)? as f64;
    let ck2 = binomial(k, 2)? as f64;
    // with r = sqrt(C_K^2) rho and y = b r^gamma the stationarity condition reads
    // (y/b)^{(alpha+gamma)/gamma} e^{-y} = c
    let c = nf * f * alpha * q_eff.powf(alpha) * (ck2 / cn2).powf(alpha / 2.0) / (cnk * a * b * gamma);
    let s = gamma / (alpha + gamma);
    let delta = -s * b * c.powf(s);
    if delta < -INV_E {
        return Ok(ExpWellSolution::Unbound { delta });
    }
    let w = lambert_w0(delta)?;
    let y = -w / s;
    let r = (y / b).powf(1.0 / gamma);
    let rho0 = r / ck2.sqrt();
    let p0 = q_eff / (cn2.sqrt() * rho0);
    let e = nf * f * p0.powf(alpha) - cnk * a * (-y).exp();
    Ok(ExpWellSolution::Bound { e, rho0, delta })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w0_examples() {
        assert_eq!(lambert_w0(0.0).unwrap(), 0.0);
        assert!((lambert_w0(core::f64::consts::E).unwrap() - 1.0).abs() < 1e-15);
        assert!((lambert_w0(-0.1299).unwrap() + 0.15108).abs() < 5e-5);
        assert!((lambert_w0(-INV_E).unwrap() + 1.0).abs() < 1e-7);
        assert!(lambert_w0(-0.4).is_err());
    }

    #[test]
    fn w0_round_trip_wide_range() {
        let mut x = -INV_E;
        while x < 1e6 {
            let w = lambert_w0(x).unwrap();
            assert!(w >= -1.0);
            assert!((w * w.exp() - x).abs() <= 1e-14 * x.abs().max(1.0), "x={x}");
            x = if x < 1.0 { x + 0.0137 } else { x * 1.37 };
        }
    }

    #[test]
    fn linear_ground_state() {
        let (e, rho) = powerlaw_solution(0.5, 2.0, 0.5, 1.0, 3, 3, 3.0).unwrap();
        assert!((e - 3.0 * (0.09375f64 * 9.0).cbrt()).abs() < 1e-12);
        assert!((e - 2.835).abs() < 5e-4);
        assert!((rho - 2.182).abs() < 5e-4);
    }

    #[test]
    fn coulomb_ground_state() {
        let (e, _) = powerlaw_solution(0.5, 2.0, 3.0, -1.0, 3, 3, 3.0).unwrap();
        assert!((e + 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_levels() {
        match exponential_solution(0.5, 2.0, 200.0, 1.0, 2.0, 3, 3, 3.0).unwrap() {
            ExpWellSolution::Bound { e, rho0, .. } => {
                assert!((e + 103.2).abs() < 0.05);
                assert!((rho0 - 0.317).abs() < 5e-4);
            }
            _ => panic!("expected a bound state"),
        }
        match exponential_solution(0.5, 2.0, 200.0, 1.0, 2.0, 3, 3, 5.0).unwrap() {
            ExpWellSolution::Bound { e, .. } => assert!(((e + 47.33) / 47.33).abs() < 5e-4, "{e}"),
            _ => panic!("expected a bound state"),
        }
        assert!(matches!(
            exponential_solution(0.5, 2.0, 200.0, 1.0, 2.0, 3, 3, 60.0).unwrap(),
            ExpWellSolution::Unbound { .. }
        ));
    }
}
