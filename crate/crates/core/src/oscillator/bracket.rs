//! Brackets of coupled two-coordinate oscillator states under a rotation of
//! the coordinate pair.
//!
//! With `(U(t) psi)(u1, u2) = psi(cos t u1 - sin t u2, sin t u1 + cos t u2)`,
//! `U(t) = exp(t G)` where `G = u1.grad2 - u2.grad1 = a1^+ . a2 - a2^+ . a1`
//! conserves the band. `G` is assembled from reduced matrix elements of the
//! ladder operators and exponentiated through the spectrum of `-G^2`, whose
//! eigenvalues are squares of integers.
#[allow(unused_imports)]
use crate::float::Real as _;

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};

use super::{band_index, enumerate_band, CoupledBasisState};
use crate::error::{Error, Result};
use crate::special::wigner_6j;

/// `<n' l' || a^+ || n l>` for one coordinate (positive-at-origin phases).
fn raise_reduced(np: u32, lp: u32, n: u32, l: u32) -> f64 {
    if np == n && lp == l + 1 {
        (2.0 * (l as f64 + 1.0) * (n as f64 + l as f64 + 1.5)).sqrt()
    } else if np == n + 1 && l >= 1 && lp == l - 1 {
        (2.0 * l as f64 * (n as f64 + 1.0)).sqrt()
    } else {
        0.0
    }
}

/// `<n' l' || a || n l>`.
fn lower_reduced(np: u32, lp: u32, n: u32, l: u32) -> f64 {
    -raise_reduced(n, l, np, lp)
}

fn sign(e: i64) -> f64 {
    if e.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Matrix of `G` on one band.
pub fn generator_matrix(band: &[CoupledBasisState]) -> DMatrix<f64> {
    let d = band.len();
    let mut a = DMatrix::<f64>::zeros(d, d);
    for (j, s) in band.iter().enumerate() {
        // a2 lowers coordinate 2 by one quantum, a1^+ raises coordinate 1 by one
        let mut lowered = Vec::new();
        if s.l2 >= 1 {
            lowered.push((s.n2, s.l2 - 1));
        }
        if s.n2 >= 1 {
            lowered.push((s.n2 - 1, s.l2 + 1));
        }
        let mut raised = Vec::new();
        raised.push((s.n1, s.l1 + 1));
        if s.l1 >= 1 {
            raised.push((s.n1 + 1, s.l1 - 1));
        }
        for &(n2p, l2p) in &lowered {
            for &(n1p, l1p) in &raised {
                let t = CoupledBasisState::new(n1p, l1p, n2p, l2p, s.l);
                let Some(i) = band_index(band, &t) else { continue };
                let six = wigner_6j(
                    s.l as i64,
                    l2p as i64,
                    l1p as i64,
                    1,
                    s.l1 as i64,
                    s.l2 as i64,
                );
                if six == 0.0 {
                    continue;
                }
                let ph = sign(s.l1 as i64 + l2p as i64 + s.l as i64);
                a[(i, j)] += ph
                    * six
                    * raise_reduced(n1p, l1p, s.n1, s.l1)
                    * lower_reduced(n2p, l2p, s.n2, s.l2);
            }
        }
    }
    &a - a.transpose()
}

/// Rotation matrices of one band, `B(t)[s', s] = <s'| U(t) |s>`.
#[derive(Debug, Clone)]
pub struct BandRotation {
    states: Vec<CoupledBasisState>,
    g: DMatrix<f64>,
    vecs: DMatrix<f64>,
    freqs: DVector<f64>,
}

impl BandRotation {
    pub fn new(qstar: u32, l: u32) -> Result<Self> {
        let states = enumerate_band(qstar, l);
        let g = generator_matrix(&states);
        let d = states.len();
        if d == 0 {
            return Ok(BandRotation {
                states,
                g,
                vecs: DMatrix::zeros(0, 0),
                freqs: DVector::zeros(0),
            });
        }
        let m = -(&g * &g);
        let m = (&m + m.transpose()) * 0.5;
        let eig = crate::numeric::symmetric_eigen(m);
        let mut freqs = DVector::zeros(d);
        for (i, &ev) in eig.eigenvalues.iter().enumerate() {
            let w = ev.max(0.0).sqrt();
            let r = w.round();
            if (w - r).abs() > 1e-6 {
                return Err(Error::NonConvergence("rotation generator spectrum is not integral"));
            }
            freqs[i] = r;
        }
        Ok(BandRotation { states, g, vecs: eig.eigenvectors, freqs })
    }

    pub fn states(&self) -> &[CoupledBasisState] {
        &self.states
    }

    pub fn generator(&self) -> &DMatrix<f64> {
        &self.g
    }

    /// `exp(t G) = V cos(t w) V^T + G V (sin(t w)/w) V^T`.
    pub fn matrix(&self, t: f64) -> DMatrix<f64> {
        let d = self.states.len();
        let mut vc = self.vecs.clone();
        let mut vs = self.vecs.clone();
        for (k, &w) in self.freqs.iter().enumerate() {
            let c = (t * w).cos();
            let s = if w == 0.0 { t } else { (t * w).sin() / w };
            for i in 0..d {
                vc[(i, k)] *= c;
                vs[(i, k)] *= s;
            }
        }
        let vt = self.vecs.transpose();
        &vc * &vt + &self.g * (&vs * &vt)
    }
}

/// Overlap `<out| U(beta) |in>` of two coupled states of the same band and
/// total `l`; zero when the selection rules fail.
pub fn moshinsky_bracket(
    out: (u32, u32, u32, u32),
    inp: (u32, u32, u32, u32),
    l: u32,
    beta: f64,
) -> Result<f64> {
    let o = CoupledBasisState::new(out.0, out.1, out.2, out.3, l);
    let i = CoupledBasisState::new(inp.0, inp.1, inp.2, inp.3, l);
    if o.band() != i.band() {
        return Err(Error::Domain("bracket states belong to different bands"));
    }
    let rot = BandRotation::new(i.band(), l)?;
    let (Some(a), Some(b)) = (band_index(rot.states(), &o), band_index(rot.states(), &i)) else {
        return Ok(0.0);
    };
    Ok(rot.matrix(beta)[(a, b)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn identity_at_zero_angle() {
        let rot = BandRotation::new(4, 2).unwrap();
        let b = rot.matrix(0.0);
        let d = rot.states().len();
        assert!((b - DMatrix::<f64>::identity(d, d)).amax() < 1e-12);
    }

    #[test]
    fn orthogonal_and_composable() {
        for q in 0..=6 {
            for l in 0..=q {
                let rot = BandRotation::new(q, l).unwrap();
                let d = rot.states().len();
                if d == 0 {
                    continue;
                }
                let b = rot.matrix(0.7);
                assert!((&b * b.transpose() - DMatrix::<f64>::identity(d, d)).amax() < 1e-12);
                let c = rot.matrix(0.3) * rot.matrix(0.4);
                assert!((c - &b).amax() < 1e-12);
                let full = rot.matrix(2.0 * PI);
                assert!((full - DMatrix::<f64>::identity(d, d)).amax() < 1e-10);
            }
        }
    }

    #[test]
    fn half_turn_is_parity_of_both_coordinates() {
        // rotation by pi maps (u1,u2) -> (-u1,-u2): overall parity (-1)^{l1+l2}
        let rot = BandRotation::new(5, 2).unwrap();
        let b = rot.matrix(PI);
        for (i, s) in rot.states().iter().enumerate() {
            let p = if (s.l1 + s.l2) % 2 == 0 { 1.0 } else { -1.0 };
            assert!((b[(i, i)] - p).abs() < 1e-10);
        }
    }

    #[test]
    fn selection_rules() {
        assert!(moshinsky_bracket((0, 0, 0, 0), (1, 0, 0, 0), 0, 0.3).is_err());
        assert!((moshinsky_bracket((0, 0, 1, 0), (0, 0, 1, 0), 0, 0.0).unwrap() - 1.0).abs() < 1e-12);
    }
}
