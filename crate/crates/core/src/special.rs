//! Angular-momentum coupling coefficients for integer momenta.
#[allow(unused_imports)]
use crate::float::Real as _;


fn ln_fact(n: i64) -> f64 {
    libm::lgamma(n as f64 + 1.0)
}

fn triangle(a: i64, b: i64, c: i64) -> bool {
    a >= 0 && b >= 0 && c >= 0 && c <= a + b && c >= (a - b).abs()
}

fn ln_delta(a: i64, b: i64, c: i64) -> f64 {
    0.5 * (ln_fact(a + b - c) + ln_fact(a - b + c) + ln_fact(-a + b + c) - ln_fact(a + b + c + 1))
}

/// Wigner 3j symbol `(j1 j2 j3; m1 m2 m3)` by the Racah sum.
pub fn wigner_3j(j1: i64, j2: i64, j3: i64, m1: i64, m2: i64, m3: i64) -> f64 {
    if m1 + m2 + m3 != 0 || !triangle(j1, j2, j3) {
        return 0.0;
    }
    if m1.abs() > j1 || m2.abs() > j2 || m3.abs() > j3 {
        return 0.0;
    }
    let pre = ln_delta(j1, j2, j3)
        + 0.5
            * (ln_fact(j1 + m1)
                + ln_fact(j1 - m1)
                + ln_fact(j2 + m2)
                + ln_fact(j2 - m2)
                + ln_fact(j3 + m3)
                + ln_fact(j3 - m3));
    let tmin = 0.max(j2 - j3 - m1).max(j1 - j3 + m2);
    let tmax = (j1 + j2 - j3).min(j1 - m1).min(j2 + m2);
    let mut sum = 0.0;
    for t in tmin..=tmax {
        let den = ln_fact(t)
            + ln_fact(j3 - j2 + t + m1)
            + ln_fact(j3 - j1 + t - m2)
            + ln_fact(j1 + j2 - j3 - t)
            + ln_fact(j1 - t - m1)
            + ln_fact(j2 - t + m2);
        let s = if t % 2 == 0 { 1.0 } else { -1.0 };
        sum += s * (pre - den).exp();
    }
    if (j1 - j2 - m3).rem_euclid(2) == 1 {
        -sum
    } else {
        sum
    }
}

/// Clebsch-Gordan coefficient `<j1 m1 j2 m2 | J M>`.
pub fn clebsch_gordan(j1: i64, m1: i64, j2: i64, m2: i64, j: i64, m: i64) -> f64 {
    let phase = if (j1 - j2 + m).rem_euclid(2) == 1 { -1.0 } else { 1.0 };
    phase * ((2 * j + 1) as f64).sqrt() * wigner_3j(j1, j2, j, m1, m2, -m)
}

/// Wigner 6j symbol `{a b c; d e f}` by the Racah sum.
pub fn wigner_6j(a: i64, b: i64, c: i64, d: i64, e: i64, f: i64) -> f64 {
    if !(triangle(a, b, c) && triangle(a, e, f) && triangle(d, b, f) && triangle(d, e, c)) {
        return 0.0;
    }
    let pre = ln_delta(a, b, c) + ln_delta(a, e, f) + ln_delta(d, b, f) + ln_delta(d, e, c);
    let tmin = (a + b + c).max(a + e + f).max(d + b + f).max(d + e + c);
    let tmax = (a + b + d + e).min(a + c + d + f).min(b + c + e + f);
    let mut sum = 0.0;
    for t in tmin..=tmax {
        let den = ln_fact(t - a - b - c)
            + ln_fact(t - a - e - f)
            + ln_fact(t - d - b - f)
            + ln_fact(t - d - e - c)
            + ln_fact(a + b + d + e - t)
            + ln_fact(a + c + d + f - t)
            + ln_fact(b + c + e + f - t);
        let s = if t % 2 == 0 { 1.0 } else { -1.0 };
        sum += s * (pre + ln_fact(t + 1) - den).exp();
    }
    sum
}
