//! Scalar root finding, 1D minimization and Gauss quadrature rules built from
//! three-term recurrences.
#[allow(unused_imports)]
use crate::float::Real as _;

use alloc::vec;
use alloc::vec::Vec;
use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Bisection on a bracket with `f(a)` and `f(b)` of opposite sign.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Domain("bisection bracket does not change sign"));
    }
    for _ in 0..400 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= tol || m == a || m == b {
            return Ok(m);
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Err(Error::NonConvergence("bisection"))
}

/// Brent's method for a sign-changing bracket.
pub fn brent<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Domain("brent bracket does not change sign"));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..300 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Err(Error::NonConvergence("brent"))
}

/// Golden-section search for a minimum of `f` on `[a, b]`; returns `(x, f(x))`.
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let r = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() <= tol * (1.0 + c.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Golden-section search for a maximum; returns `(x, f(x))`.
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (x, v) = golden_min(|x| -f(x), a, b, tol);
    (x, -v)
}

/// Orthonormal polynomial family given by its monic recurrence
/// `p_{k+1} = (x - alpha_k) p_k - beta_k p_{k-1}` and total weight `mu0`.
#[derive(Debug, Clone)]
pub struct OrthoFamily {
    alpha: Vec<f64>,
    beta: Vec<f64>,
    mu0: f64,
}

impl OrthoFamily {
    /// Generalized Laguerre family, weight `t^a e^{-t}` on `[0, inf)`.
    pub fn laguerre(a: f64, n: usize) -> Self {
        let alpha = (0..n).map(|k| 2.0 * k as f64 + a + 1.0).collect();
        let beta = (0..n)
            .map(|k| if k == 0 { 0.0 } else { k as f64 * (k as f64 + a) })
            .collect();
        OrthoFamily { alpha, beta, mu0: libm::tgamma(a + 1.0) }
    }

    /// Jacobi family on `[0, 1]` with weight `x^a (1-x)^b`.
    pub fn jacobi01(a: f64, b: f64, n: usize) -> Self {
        // standard Jacobi on [-1,1] with weight (1-y)^ja (1+y)^jb, y = 2x - 1
        let (ja, jb) = (b, a);
        let s = ja + jb;
        let mut alpha = Vec::with_capacity(n);
        let mut beta = Vec::with_capacity(n);
        for k in 0..n {
            let kf = k as f64;
            let t = 2.0 * kf + s;
            let ak = if k == 0 {
                (jb - ja) / (s + 2.0)
            } else {
                (jb * jb - ja * ja) / (t * (t + 2.0))
            };
            let bk = if k == 0 {
                0.0
            } else if k == 1 {
                4.0 * (1.0 + ja) * (1.0 + jb) / ((2.0 + s) * (2.0 + s) * (3.0 + s))
            } else {
                4.0 * kf * (kf + ja) * (kf + jb) * (kf + s) / (t * t * (t + 1.0) * (t - 1.0))
            };
            alpha.push(0.5 * (1.0 + ak));
            beta.push(0.25 * bk);
        }
        let mu0 = (libm::lgamma(a + 1.0) + libm::lgamma(b + 1.0) - libm::lgamma(a + b + 2.0)).exp();
        OrthoFamily { alpha, beta, mu0 }
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// Orthonormal polynomials `p_0..p_{m-1}` at `x` (positive leading coefficient).
    pub fn eval_into(&self, x: f64, out: &mut [f64]) {
        let m = out.len();
        if m == 0 {
            return;
        }
        out[0] = 1.0 / self.mu0.sqrt();
        if m == 1 {
            return;
        }
        out[1] = (x - self.alpha[0]) * out[0] / self.beta[1].sqrt();
        for k in 1..m - 1 {
            out[k + 1] = ((x - self.alpha[k]) * out[k] - self.beta[k].sqrt() * out[k - 1])
                / self.beta[k + 1].sqrt();
        }
    }

    pub fn eval(&self, x: f64, m: usize) -> Vec<f64> {
        let mut v = vec![0.0; m];
        self.eval_into(x, &mut v);
        v
    }

    /// `n`-point Gauss rule (Golub-Welsch nodes, Newton polish, Christoffel weights).
    /// Requires the family to hold at least `n + 1` recurrence coefficients.
    pub fn gauss(&self, n: usize) -> (Vec<f64>, Vec<f64>) {
        assert!(self.len() > n, "recurrence too short for the requested rule");
        let mut j = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            j[(k, k)] = self.alpha[k];
            if k + 1 < n {
                let b = self.beta[k + 1].sqrt();
                j[(k, k + 1)] = b;
                j[(k + 1, k)] = b;
            }
        }
        let mut nodes: Vec<f64> = j.symmetric_eigenvalues().iter().copied().collect();
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut buf = vec![0.0; n + 1];
        let mut weights = Vec::with_capacity(n);
        for x in nodes.iter_mut() {
            for _ in 0..2 {
                let (p, dp) = self.value_and_derivative(*x, n);
                if dp != 0.0 && p.is_finite() && dp.is_finite() {
                    *x -= p / dp;
                }
            }
            self.eval_into(*x, &mut buf);
            let s: f64 = buf[..n].iter().map(|v| v * v).sum();
            weights.push(1.0 / s);
        }
        (nodes, weights)
    }

    fn value_and_derivative(&self, x: f64, n: usize) -> (f64, f64) {
        let mut p0 = 0.0;
        let mut p1 = 1.0 / self.mu0.sqrt();
        let mut d0 = 0.0;
        let mut d1 = 0.0;
        for k in 0..n {
            let sb = self.beta[k + 1].sqrt();
            let sk = if k == 0 { 0.0 } else { self.beta[k].sqrt() };
            let p2 = ((x - self.alpha[k]) * p1 - sk * p0) / sb;
            let d2 = (p1 + (x - self.alpha[k]) * d1 - sk * d0) / sb;
            p0 = p1;
            p1 = p2;
            d0 = d1;
            d1 = d2;
        }
        (p1, d1)
    }
}

/// Gauss rule for `int_0^inf t^a e^{-c t} f(t) dt` with `c > 0`.
pub fn gauss_laguerre(a: f64, n: usize, c: f64) -> (Vec<f64>, Vec<f64>) {
    let (mut x, mut w) = OrthoFamily::laguerre(a, n + 1).gauss(n);
    let scale = c.powf(-(a + 1.0));
    for (xi, wi) in x.iter_mut().zip(w.iter_mut()) {
        *xi /= c;
        *wi *= scale;
    }
    (x, w)
}

/// Gauss-Jacobi rule on `[0,1]` with weight `x^a (1-x)^b`.
pub fn gauss_jacobi01(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    OrthoFamily::jacobi01(a, b, n + 1).gauss(n)
}

/// Gauss-Legendre rule mapped to `[lo, hi]`.
pub fn gauss_legendre(lo: f64, hi: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_jacobi01(0.0, 0.0, n);
    let h = hi - lo;
    (x.iter().map(|t| lo + h * t).collect(), w.iter().map(|v| v * h).collect())
}

/// Symmetric eigen-decomposition by cyclic Jacobi rotations (unsorted).
///
/// nalgebra's implicit QR leaves eigenvector residuals up to ~1e-4 on some
/// oracle Hamiltonians; Jacobi is accurate to roundoff and the matrices here
/// are at most a few hundred wide.
pub fn symmetric_eigen(m: DMatrix<f64>) -> SymmetricEigen<f64, nalgebra::Dyn> {
    let n = m.nrows();
    let mut a = (&m + m.transpose()) * 0.5;
    let mut v = DMatrix::<f64>::identity(n, n);
    for sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|p| (p + 1..n).map(move |q| (p, q))).map(|(p, q)| a[(p, q)] * a[(p, q)]).sum();
        if off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let (app, aqq) = (a[(p, p)], a[(q, q)]);
                // negligible against both diagonals: drop it once the matrix is nearly diagonal
                if sweep > 3 && app.abs() + 1e3 * apq.abs() == app.abs() && aqq.abs() + 1e3 * apq.abs() == aqq.abs() {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                if apq == 0.0 {
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    SymmetricEigen { eigenvalues: a.diagonal(), eigenvectors: v }
}

/// Neumaier-compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut s = 0.0;
    let mut c = 0.0;
    for v in it {
        let t = s + v;
        if s.abs() >= v.abs() {
            c += (s - t) + v;
        } else {
            c += (v - t) + s;
        }
        s = t;
    }
    s + c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_cube_root() {
        let r = brent(|x| x * x * x - 2.0, 0.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn bisect_rejects_same_sign() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn golden_finds_parabola_vertex() {
        let (x, _) = golden_min(|x| (x - 0.3) * (x - 0.3), -1.0, 2.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-7);
    }

    #[test]
    fn laguerre_rule_integrates_moments() {
        // int t^a e^{-t} t^k = Gamma(a+k+1)
        let a = 1.5;
        let (x, w) = gauss_laguerre(a, 20, 1.0);
        for k in 0..39 {
            let q: f64 = x.iter().zip(&w).map(|(t, w)| w * t.powi(k)).sum();
            let exact = libm::tgamma(a + k as f64 + 1.0);
            assert!(((q - exact) / exact).abs() < 1e-12, "k={k} {q} {exact}");
        }
    }

    #[test]
    fn scaled_laguerre_rule() {
        let (x, w) = gauss_laguerre(0.5, 10, 3.0);
        let q: f64 = x.iter().zip(&w).map(|(t, w)| w * t).sum();
        let exact = libm::tgamma(2.5) / 3f64.powf(2.5);
        assert!(((q - exact) / exact).abs() < 1e-13);
    }

    #[test]
    fn jacobi_rule_integrates_beta_moments() {
        let (a, b) = (2.5, 0.5);
        let (x, w) = gauss_jacobi01(a, b, 12);
        for k in 0..23 {
            let q: f64 = x.iter().zip(&w).map(|(t, w)| w * t.powi(k)).sum();
            let kf = k as f64;
            let exact = (libm::lgamma(a + kf + 1.0) + libm::lgamma(b + 1.0)
                - libm::lgamma(a + b + kf + 2.0))
            .exp();
            assert!(((q - exact) / exact).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn orthonormality_under_own_rule() {
        let fam = OrthoFamily::jacobi01(1.5, 0.5, 12);
        let (x, w) = fam.gauss(11);
        let mut g = [[0.0; 8]; 8];
        for (xi, wi) in x.iter().zip(&w) {
            let p = fam.eval(*xi, 8);
            for i in 0..8 {
                for j in 0..8 {
                    g[i][j] += wi * p[i] * p[j];
                }
            }
        }
        for (i, row) in g.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((v - e).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let s = compensated_sum([1e16, 1.0, -1e16]);
        assert_eq!(s, 1.0);
    }
}
