//! Radial oscillator functions `R_nl`, their moments and one-coordinate
//! matrix elements.
//!
//! Phase convention: `R_nl(r) = N r^l L_n^{l+1/2}(r^2) e^{-r^2/2}` with the
//! usual Laguerre polynomial, so every radial function is positive near the
//! origin.
#[allow(unused_imports)]
use crate::float::Real as _;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numeric::compensated_sum;

/// Generalized Laguerre polynomial `L_n^a(x)`.
pub fn laguerre(n: u32, a: f64, x: f64) -> f64 {
    let mut p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let mut p1 = 1.0 + a - x;
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0 + a - x) * p1 - (kf + a) * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

fn norm(n: u32, l: u32) -> f64 {
    (core::f64::consts::LN_2 + libm::lgamma(n as f64 + 1.0) - libm::lgamma(n as f64 + l as f64 + 1.5))
        .exp()
        .sqrt()
}

/// `R_nl(r)` for oscillator scale `lambda`, normalized as `int R^2 r^2 dr = 1`.
pub fn radial_wavefunction(n: u32, l: u32, lambda: f64, r: f64) -> f64 {
    let u = lambda * r;
    lambda.powf(1.5) * norm(n, l) * u.powi(l as i32) * laguerre(n, l as f64 + 0.5, u * u) * (-0.5 * u * u).exp()
}

/// `dR_nl/dr` for oscillator scale `lambda`.
pub fn radial_derivative(n: u32, l: u32, lambda: f64, r: f64) -> f64 {
    let u = lambda * r;
    let a = l as f64 + 0.5;
    let lg = laguerre(n, a, u * u);
    let dlg = if n == 0 { 0.0 } else { -laguerre(n - 1, a + 1.0, u * u) };
    let lf = l as f64;
    let pow_lm1 = if l == 0 { 0.0 } else { u.powi(l as i32 - 1) };
    let d = lf * pow_lm1 * lg + u.powi(l as i32) * (2.0 * u * dlg - u * lg);
    lambda.powf(2.5) * norm(n, l) * d * (-0.5 * u * u).exp()
}

/// `<r^k>_nl` for oscillator scale `lambda`. The integrand is a polynomial of
/// degree `2n` in `r^2` against a Laguerre weight, so an `n + 2` point
/// Gauss-Laguerre rule is exact; unlike the explicit double sum it does not
/// suffer from cancellation.
pub fn radial_moment(n: u32, l: u32, k: f64, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain("oscillator scale must be positive"));
    }
    Ok(radial_matrix_element(n, n, l, k)? * lambda.powf(-k))
}

/// `<r^k>_nl` from the finite double sum over Laguerre coefficients, in
/// log-gamma form with sign tracking. The alternating sum loses about
/// `log10(sum |terms| / |result|)` digits (7 at `n = l = 6`, `k = 1`).
pub fn radial_moment_series(n: u32, l: u32, k: f64, lambda: f64) -> Result<f64> {
    if !(k > -(2.0 * l as f64 + 3.0)) {
        return Err(Error::Domain("moment order makes the radial integral diverge"));
    }
    if !(lambda > 0.0) {
        return Err(Error::Domain("oscillator scale must be positive"));
    }
    let a = l as f64 + 0.5;
    let nf = n as f64;
    let lg = libm::lgamma;
    // L_n^a(x) = sum_p c_p x^p with ln|c_p| below and sign (-1)^p
    let coeff: Vec<f64> = (0..=n)
        .map(|p| {
            let pf = p as f64;
            lg(nf + a + 1.0) - lg(nf - pf + 1.0) - lg(a + pf + 1.0) - lg(pf + 1.0)
        })
        .collect();
    let base = lg(nf + 1.0) - lg(nf + l as f64 + 1.5);
    let mut terms = Vec::with_capacity(((n + 1) * (n + 1)) as usize);
    for p in 0..=n {
        for q in 0..=n {
            let g = lg(l as f64 + (p + q) as f64 + (k + 3.0) / 2.0);
            let v = (base + coeff[p as usize] + coeff[q as usize] + g).exp();
            terms.push(if (p + q) % 2 == 0 { v } else { -v });
        }
    }
    Ok(compensated_sum(terms) * lambda.powf(-k))
}

/// `<n' l | r^k | n l>` at unit scale, exact Gauss-Laguerre quadrature in `r^2`.
pub fn radial_matrix_element(np: u32, n: u32, l: u32, k: f64) -> Result<f64> {
    if !(k > -(2.0 * l as f64 + 3.0)) {
        return Err(Error::Domain("moment order makes the radial integral diverge"));
    }
    let a = l as f64 + 0.5;
    let m = np.max(n) as usize + 1;
    let fam = crate::numeric::OrthoFamily::laguerre(a, m + 1);
    let (x, w) = crate::numeric::gauss_laguerre(a + k / 2.0, m + 2, 1.0);
    let mut p = alloc::vec![0.0; m];
    let mut s = 0.0;
    for (xi, wi) in x.iter().zip(&w) {
        fam.eval_into(*xi, &mut p);
        s += wi * p[np as usize] * p[n as usize];
    }
    Ok(if (np + n) % 2 == 0 { s } else { -s })
}

/// `<n' l | P^2 | n l>` at unit scale.
pub fn p2_element(np: u32, n: u32, l: u32) -> f64 {
    let lf = l as f64;
    if np == n {
        2.0 * n as f64 + lf + 1.5
    } else if np == n + 1 {
        ((n as f64 + 1.0) * (n as f64 + lf + 1.5)).sqrt()
    } else if n == np + 1 {
        ((np as f64 + 1.0) * (np as f64 + lf + 1.5)).sqrt()
    } else {
        0.0
    }
}

/// `<n' l | r^2 | n l>` at unit scale.
pub fn r2_element(np: u32, n: u32, l: u32) -> f64 {
    if np == n {
        p2_element(np, n, l)
    } else {
        -p2_element(np, n, l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::gauss_legendre;

    struct Rule(Vec<f64>, Vec<f64>);

    impl Rule {
        fn new() -> Self {
            let (x, w) = gauss_legendre(0.0, 14.0, 160);
            Rule(x, w)
        }

        fn quad(&self, f: impl Fn(f64) -> f64) -> f64 {
            self.0.iter().zip(&self.1).map(|(r, w)| w * f(*r)).sum()
        }
    }

    #[test]
    fn normalized_and_positive_at_origin() {
        let rule = Rule::new();
        for n in 0..5 {
            for l in 0..4 {
                let s = rule.quad(|r| radial_wavefunction(n, l, 1.0, r).powi(2) * r * r);
                assert!((s - 1.0).abs() < 1e-12);
                let r0 = 1e-3;
                assert!(radial_wavefunction(n, l, 1.0, r0) > 0.0);
            }
        }
    }

    #[test]
    fn moment_examples() {
        assert!((radial_moment(0, 0, 2.0, 2.0).unwrap() - 1.5 / 4.0).abs() < 1e-14);
        assert!((radial_moment(1, 0, 2.0, 1.0).unwrap() - 3.5).abs() < 1e-13);
        let v = radial_moment(0, 0, 1.0, 1.0).unwrap();
        assert!((v - 2.0 / core::f64::consts::PI.sqrt()).abs() < 1e-13);
        assert!(radial_moment(0, 0, -3.0, 1.0).is_err());
        assert!((radial_moment(3, 2, 0.0, 0.7).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn series_agrees_with_quadrature_for_low_states() {
        for (n, l, k) in [(0, 0, 1.0), (2, 1, -1.0), (3, 2, 3.0), (1, 0, 2.0), (2, 0, 0.5)] {
            let a = radial_moment_series(n, l, k, 1.3).unwrap();
            let b = radial_moment(n, l, k, 1.3).unwrap();
            assert!((a - b).abs() < 1e-12 * b.abs().max(1.0), "{n} {l} {k}: {a} {b}");
        }
        assert!((radial_matrix_element(1, 0, 0, 2.0).unwrap() - r2_element(1, 0, 0)).abs() < 1e-12);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for (n, l) in [(0, 0), (1, 1), (2, 3), (3, 0)] {
            for r in [0.3, 1.1, 2.4] {
                let h = 1e-5;
                let fd = (radial_wavefunction(n, l, 0.8, r + h) - radial_wavefunction(n, l, 0.8, r - h)) / (2.0 * h);
                assert!((fd - radial_derivative(n, l, 0.8, r)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn p2_elements_match_quadrature() {
        let rule = Rule::new();
        for l in 0..4u32 {
            for n in 0..4u32 {
                for np in 0..5u32 {
                    let lf = l as f64;
                    let q = rule.quad(|r| {
                        let a = radial_derivative(np, l, 1.0, r) * radial_derivative(n, l, 1.0, r);
                        let b = lf * (lf + 1.0) * radial_wavefunction(np, l, 1.0, r) * radial_wavefunction(n, l, 1.0, r);
                        a * r * r + b
                    });
                    assert!((q - p2_element(np, n, l)).abs() < 1e-10, "{np} {n} {l}");
                    let q2 = rule.quad(|r| radial_wavefunction(np, l, 1.0, r) * radial_wavefunction(n, l, 1.0, r) * r.powi(4));
                    assert!((q2 - r2_element(np, n, l)).abs() < 1e-10);
                }
            }
        }
    }
}
