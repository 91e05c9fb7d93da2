//! Radial moments `<r^k>` of the interparticle distance on envelope states.
#[allow(unused_imports)]
use crate::float::Real as _;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::oscillator::{radial_moment, CoupledBasisState, SymmetrizedState};

/// Exact and approximate moment of order `k`, with per-component detail.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableReport {
    pub k: f64,
    pub exact: f64,
    pub approx: f64,
    /// `(component, c^2, <r^k>_{n1 l1})`.
    pub breakdown: Vec<(CoupledBasisState, f64, f64)>,
}

fn check_uniform_q0(state: &SymmetrizedState) -> Result<()> {
    if state.phi == 2.0 {
        return Ok(());
    }
    let mut it = state.components.iter().map(|(c, _)| c.orbital());
    if let Some(first) = it.next() {
        if it.any(|o| o != first) {
            return Err(Error::MixedQ0);
        }
    }
    Ok(())
}

/// `<r^k> = sum_s c_s^2 <r^k>_{n1(s) l1(s)}` at scale `lambda1`. Fails with
/// `MixedQ0` when a modified-envelope state (phi != 2) mixes components of
/// different orbital excitation.
pub fn observable_rk(state: &SymmetrizedState, k: f64) -> Result<f64> {
    Ok(observable_report(state, k, f64::NAN)?.exact)
}

/// Full report; `rho0` feeds the approximate value `rho0^k`.
pub fn observable_report(state: &SymmetrizedState, k: f64, rho0: f64) -> Result<ObservableReport> {
    check_uniform_q0(state)?;
    let mut breakdown = Vec::with_capacity(state.components.len());
    let mut exact = 0.0;
    for (s, c) in &state.components {
        let m = radial_moment(s.n1, s.l1, k, state.lambda1)?;
        exact += c * c * m;
        breakdown.push((*s, c * c, m));
    }
    Ok(ObservableReport { k, exact, approx: observable_approx(rho0, k), breakdown })
}

/// `rho0^k`.
pub fn observable_approx(rho0: f64, k: f64) -> f64 {
    if k == 0.0 {
        1.0
    } else {
        rho0.powf(k)
    }
}

/// Ratio of the oracle oscillator scale `z` to the envelope scale
/// `lambda1 = sqrt(Q/2)/rho0`.
pub fn compute_nu(q_eff: f64, rho0: f64, z: f64) -> f64 {
    z * rho0 / (q_eff / 2.0).sqrt()
}
