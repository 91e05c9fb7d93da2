//! Projection of an oscillator band onto states symmetric (or antisymmetric)
//! under every permutation of three identical particles.
//!
//! In the rescaled Jacobi pair the transposition of particles 1 and 2 is the
//! parity of the first coordinate, while the transpositions (13) and (23) are
//! an exchange of the two coordinates composed with rotations by 5pi/6 and
//! pi/6 respectively.
#[allow(unused_imports)]
use crate::float::Real as _;

use alloc::vec::Vec;
use core::f64::consts::PI;
use nalgebra::{DMatrix, DVector};

use super::{band_index, BandRotation, CoupledBasisState};
use crate::error::{Error, Result};

/// Orthonormal symmetry-adapted state of one band.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetrizedState {
    pub qstar: u32,
    pub l: u32,
    pub sigma: i8,
    /// Nonzero coefficients over the coupled basis, in band order.
    pub components: Vec<(CoupledBasisState, f64)>,
    /// Scale of the first Jacobi coordinate.
    pub lambda1: f64,
    /// Phi of the envelope solution that fixed `lambda1` (2 for plain envelope theory).
    pub phi: f64,
}

impl SymmetrizedState {
    /// Copy with the scale taken from an envelope solution `(q_eff, rho0)` at `phi`.
    pub fn scaled(&self, q_eff: f64, rho0: f64, phi: f64) -> Self {
        let mut s = self.clone();
        s.lambda1 = (q_eff / 2.0).sqrt() / rho0;
        s.phi = phi;
        s
    }

    /// Parity `(-1)^{Q*}`.
    pub fn parity(&self) -> i8 {
        if self.qstar % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Coefficient of a coupled state (zero when absent).
    pub fn coefficient(&self, s: &CoupledBasisState) -> f64 {
        self.components.iter().find(|(c, _)| c == s).map_or(0.0, |(_, v)| *v)
    }
}

/// Scale parameters `lambda_i = sqrt(i/(i+1) 2Q/(N-1)) / rho0`, `i = 1..N-1`.
pub fn scale_parameters(n: u32, q: f64, rho0: f64) -> Result<Vec<f64>> {
    if n < 2 || !(q > 0.0) || !(rho0 > 0.0) {
        return Err(Error::Domain("scale parameters need N >= 2 and positive Q, rho0"));
    }
    Ok((1..n)
        .map(|i| {
            let i = i as f64;
            (i / (i + 1.0) * 2.0 * q / (n as f64 - 1.0)).sqrt() / rho0
        })
        .collect())
}

fn swap_matrix(states: &[CoupledBasisState]) -> DMatrix<f64> {
    let d = states.len();
    let mut x = DMatrix::zeros(d, d);
    for (j, s) in states.iter().enumerate() {
        let i = band_index(states, &s.swapped()).expect("band is closed under exchange");
        let e = s.l1 + s.l2 + s.l;
        x[(i, j)] = if (e - 2 * s.l) % 2 == 0 { 1.0 } else { -1.0 };
    }
    x
}

/// Band states and the projector `(1/6) sum_g sign_sigma(g) P_g` on them.
pub fn symmetric_projector(qstar: u32, l: u32, sigma: i8) -> Result<(Vec<CoupledBasisState>, DMatrix<f64>)> {
    if sigma != 1 && sigma != -1 {
        return Err(Error::Domain("sigma must be +1 or -1"));
    }
    let rot = BandRotation::new(qstar, l)?;
    let states = rot.states().to_vec();
    let d = states.len();
    if d == 0 {
        return Ok((states, DMatrix::zeros(0, 0)));
    }
    let sg = sigma as f64;
    let p12 = DMatrix::from_diagonal(&DVector::from_iterator(
        d,
        states.iter().map(|s| if s.l1 % 2 == 0 { 1.0 } else { -1.0 }),
    ));
    let x = swap_matrix(&states);
    let p13 = rot.matrix(5.0 * PI / 6.0) * &x;
    let p23 = rot.matrix(PI / 6.0) * &x;
    let id = DMatrix::<f64>::identity(d, d);
    let s = &id + (&p12 + &p13 + &p23) * sg + &p13 * &p12 + &p23 * &p12;
    let mut pi = s / 6.0;
    pi = (&pi + pi.transpose()) * 0.5;
    Ok((states, pi))
}

/// Orthonormal basis of the sigma-symmetric part of band `qstar` at total `l`.
///
/// Vectors come from Gram-Schmidt on the projected band states taken in order
/// of increasing `n1 + n2` (lexicographic within), each with a positive
/// overlap on the state that generated it. Empty for forbidden bands.
pub fn symmetrize(qstar: u32, l: u32, sigma: i8) -> Result<Vec<SymmetrizedState>> {
    let (states, pi) = symmetric_projector(qstar, l, sigma)?;
    let d = states.len();
    if d == 0 {
        return Ok(Vec::new());
    }
    let rank = pi.trace().round() as usize;
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by_key(|&i| (states[i].n1 + states[i].n2, i));
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for &i in &order {
        if basis.len() == rank {
            break;
        }
        let mut v = pi.column(i).into_owned();
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&v);
                v -= b * c;
            }
        }
        let nrm = v.norm();
        if nrm > 1e-8 {
            v /= nrm;
            if v[i] < 0.0 {
                v = -v;
            }
            basis.push(v);
        }
    }
    if basis.len() != rank {
        return Err(Error::NonConvergence("symmetrizer rank mismatch"));
    }
    Ok(basis
        .into_iter()
        .map(|v| SymmetrizedState {
            qstar,
            l,
            sigma,
            components: states
                .iter()
                .zip(v.iter())
                .filter(|(_, c)| c.abs() > 1e-13)
                .map(|(s, c)| (*s, *c))
                .collect(),
            lambda1: 1.0,
            phi: 2.0,
        })
        .collect())
}
