//! Numerical solution of the envelope equations for arbitrary laws, the
//! modified global quantum number, the dominantly-orbital-state estimate of
//! phi, calibration of phi, and bound-character classification.
#[allow(unused_imports)]
use crate::float::Real as _;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{binomial, quantum_numbers, KineticLaw, PotentialLaw, StateSpec, SystemSpec};
use crate::numeric::{bisect, brent, golden_max, golden_min};

/// Variational character of the envelope energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundCharacter {
    UpperBound,
    LowerBound,
    Unknown,
}

/// Solution of the envelope equations for one effective quantum number.
#[derive(Debug, Clone, PartialEq)]
pub struct EtSolution {
    pub e: f64,
    pub rho0: f64,
    pub p0: f64,
    pub q_eff: f64,
    /// The phi used to build `q_eff`, when the solve started from a state.
    pub phi: Option<f64>,
    pub character: BoundCharacter,
    /// More than one energy minimum was found; the lowest was kept.
    pub multiple_roots: bool,
}

struct Scaled {
    n: f64,
    cn2_sqrt: f64,
    terms: Vec<(f64, f64, PotentialLaw)>,
}

impl Scaled {
    fn new(system: &SystemSpec) -> Self {
        let terms = system
            .terms()
            .iter()
            .map(|t| {
                let cnk = binomial(system.n(), t.k).unwrap() as f64;
                let ck2 = binomial(t.k, 2).unwrap() as f64;
                (cnk, ck2.sqrt(), t.potential.clone())
            })
            .collect();
        Scaled { n: system.n() as f64, cn2_sqrt: system.pair_count().sqrt(), terms }
    }

    fn p(&self, q: f64, rho: f64) -> f64 {
        q / (self.cn2_sqrt * rho)
    }

    /// Kinetic and potential sides of the stationarity condition.
    fn sides(&self, kin: &KineticLaw, q: f64, rho: f64) -> (f64, f64) {
        let p = self.p(q, rho);
        let left = self.n * p * kin.d1(p);
        let right: f64 = self.terms.iter().map(|(c, s, v)| c * s * rho * v.d1(s * rho)).sum();
        (left, right)
    }

    fn g(&self, kin: &KineticLaw, q: f64, u: f64) -> f64 {
        let (l, r) = self.sides(kin, q, u.exp());
        l - r
    }

    fn dg(&self, kin: &KineticLaw, q: f64, u: f64) -> f64 {
        let rho = u.exp();
        let p = self.p(q, rho);
        let dk = -self.n * p * (kin.d1(p) + p * kin.d2(p));
        let dv: f64 = self
            .terms
            .iter()
            .map(|(c, s, v)| c * (s * rho * v.d1(s * rho) + s * s * rho * rho * v.d2(s * rho)))
            .sum();
        dk - dv
    }

    fn energy(&self, kin: &KineticLaw, q: f64, rho: f64) -> f64 {
        let p = self.p(q, rho);
        self.n * kin.value(p) + self.terms.iter().map(|(c, s, v)| c * v.value(s * rho)).sum::<f64>()
    }
}

const U_MIN: f64 = -30.0;
const U_MAX: f64 = 30.0;
const GRID: usize = 1200;

/// Solves the envelope equations at the effective quantum number `q_eff`.
pub fn solve_et(system: &SystemSpec, q_eff: f64) -> Result<EtSolution> {
    if !(q_eff > 0.0) || !q_eff.is_finite() {
        return Err(Error::Domain("effective quantum number must be positive"));
    }
    let sc = Scaled::new(system);
    let kin = system.kinetic();
    let g = |u: f64| sc.g(kin, q_eff, u);

    let h = (U_MAX - U_MIN) / GRID as f64;
    let us: Vec<f64> = (0..=GRID).map(|i| U_MIN + h * i as f64).collect();
    let gs: Vec<f64> = us.iter().map(|&u| g(u)).collect();

    // brackets where g goes from + to -, i.e. minima of E(rho)
    let mut brackets: Vec<(f64, f64)> = Vec::new();
    for i in 0..GRID {
        if gs[i].is_finite() && gs[i + 1].is_finite() && gs[i] > 0.0 && gs[i + 1] <= 0.0 {
            brackets.push((us[i], us[i + 1]));
        }
    }
    // a pair of roots can hide between grid points next to a local extremum of g
    for i in 1..GRID {
        let (a, b, c) = (gs[i - 1], gs[i], gs[i + 1]);
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            continue;
        }
        if b >= a && b >= c && b <= 0.0 {
            let (um, gm) = golden_max(&g, us[i - 1], us[i + 1], 1e-14);
            if gm > 0.0 {
                brackets.push((um, us[i + 1]));
            }
        } else if b <= a && b <= c && b > 0.0 {
            let (um, gm) = golden_min(&g, us[i - 1], us[i + 1], 1e-14);
            if gm <= 0.0 {
                brackets.push((us[i - 1], um));
            }
        }
    }
    if brackets.is_empty() {
        return Err(Error::NoBoundState { delta: None });
    }

    let mut best: Option<(f64, f64)> = None;
    for &(a, b) in &brackets {
        let mut u = bisect(&g, a, b, 1e-13)?;
        for _ in 0..3 {
            let gv = g(u);
            let d = sc.dg(kin, q_eff, u);
            if d == 0.0 || !d.is_finite() {
                break;
            }
            let next = u - gv / d;
            if next >= a && next <= b && g(next).abs() <= gv.abs() {
                u = next;
            } else {
                break;
            }
        }
        let rho = u.exp();
        let e = sc.energy(kin, q_eff, rho);
        if best.map_or(true, |(eb, _)| e < eb) {
            best = Some((e, rho));
        }
    }
    let (e, rho0) = best.unwrap();
    let (l, r) = sc.sides(kin, q_eff, rho0);
    let scale = l.abs().max(r.abs());
    if !(scale > 0.0) || (l - r).abs() > 1e-10 * scale || !e.is_finite() {
        return Err(Error::NonConvergence("envelope stationarity residual above tolerance"));
    }
    Ok(EtSolution {
        e,
        rho0,
        p0: sc.p(q_eff, rho0),
        q_eff,
        phi: None,
        character: variational_character(system),
        multiple_roots: brackets.len() > 1,
    })
}

/// Modified global quantum number `sum(phi n_i + l_i + (D + phi - 2)/2)`.
pub fn effective_q(state: &StateSpec, d: u32, phi: f64) -> Result<f64> {
    if !(phi > 0.0) {
        return Err(Error::Domain("phi must be positive"));
    }
    let q = state
        .quanta
        .iter()
        .map(|&(n, l)| phi * n as f64 + l as f64 + (d as f64 + phi - 2.0) / 2.0)
        .sum::<f64>();
    if !(q > 0.0) {
        return Err(Error::Domain("effective quantum number is not positive"));
    }
    Ok(q)
}

/// Solves the envelope equations for `state` with the modified quantum number at `phi`.
pub fn solve_state(system: &SystemSpec, state: &StateSpec, phi: f64) -> Result<EtSolution> {
    let q = effective_q(state, system.d(), phi)?;
    let mut s = solve_et(system, q)?;
    s.phi = Some(phi);
    Ok(s)
}

/// Dominantly-orbital-state estimate of phi. Several terms contribute their
/// potential curvature additively to the radial stiffness.
pub fn dos_phi(system: &SystemSpec, state: &StateSpec) -> Result<f64> {
    let q0 = quantum_numbers(state, system.d()).q0;
    if !(q0 > 0.0) {
        return Err(Error::Domain("orbital quantum number Q0 must be positive"));
    }
    let s = solve_et(system, q0)?;
    let kin = system.kinetic();
    let n = system.n() as f64;
    let cn2 = system.pair_count();
    let (p, rho) = (s.p0, s.rho0);
    let mut k = 2.0 * n * p * kin.d1(p) / (rho * rho) + n * p * p * kin.d2(p) / (rho * rho);
    for t in system.terms() {
        let cnk = binomial(system.n(), t.k)? as f64;
        let ck2 = binomial(t.k, 2)? as f64;
        k += ck2 * cnk * t.potential.d2(ck2.sqrt() * rho);
    }
    if k < 0.0 {
        return Err(Error::NegativeStiffness(k));
    }
    Ok((k / (n * cn2 * p * p * p * kin.d1(p))).sqrt() * q0)
}

/// Finds phi in `(0.05, 10)` such that the envelope energy of `state` equals `e_target`.
pub fn calibrate_phi(system: &SystemSpec, state: &StateSpec, e_target: f64) -> Result<f64> {
    let f = |phi: f64| solve_state(system, state, phi).map(|s| s.e - e_target);
    let (lo, hi) = (0.05f64, 10.0f64);
    let m = 200;
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=m {
        let phi = (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / m as f64).exp();
        let v = match f(phi) {
            Ok(v) => v,
            Err(_) => {
                prev = None;
                continue;
            }
        };
        if v == 0.0 {
            return Ok(phi);
        }
        if let Some((pp, pv)) = prev {
            if pv.signum() != v.signum() {
                let root = brent(|x| f(x).unwrap_or(f64::NAN), pp, phi, 1e-15)?;
                let e = solve_state(system, state, root)?.e;
                if (e - e_target).abs() > 1e-8 * e_target.abs().max(1e-300) {
                    return Err(Error::NonConvergence("phi calibration"));
                }
                return Ok(root);
            }
        }
        prev = Some((phi, v));
    }
    Err(Error::NoRoot)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Curvature {
    Concave,
    Convex,
    Flat,
    Mixed,
}

fn sign_class(values: impl Iterator<Item = (f64, f64)>) -> Curvature {
    let (mut neg, mut pos) = (false, false);
    for (v, scale) in values {
        if v.abs() <= 1e-8 * scale {
            continue;
        }
        if v < 0.0 {
            neg = true;
        } else {
            pos = true;
        }
    }
    match (neg, pos) {
        (false, false) => Curvature::Flat,
        (true, false) => Curvature::Concave,
        (false, true) => Curvature::Convex,
        _ => Curvature::Mixed,
    }
}

fn exponent_class(e: f64) -> Curvature {
    if e < 2.0 {
        Curvature::Concave
    } else if e > 2.0 {
        Curvature::Convex
    } else {
        Curvature::Flat
    }
}

/// Second derivative of `x -> law(sqrt(x))` has the sign of `s law''(s) - law'(s)`.
fn sampled_class(d1: impl Fn(f64) -> f64, d2: impl Fn(f64) -> f64) -> Curvature {
    let n = 64;
    sign_class((0..n).map(|i| {
        let s = 10f64.powf(-3.0 + 6.0 * i as f64 / (n - 1) as f64);
        let (a, b) = (s * d2(s), d1(s));
        (a - b, a.abs() + b.abs())
    }))
}

fn kinetic_class(k: &KineticLaw) -> Curvature {
    match k {
        KineticLaw::PowerLaw { alpha, .. } => exponent_class(*alpha),
        KineticLaw::Custom(c) => sampled_class(&*c.d1, &*c.d2),
    }
}

fn potential_class(v: &PotentialLaw) -> Curvature {
    match v {
        PotentialLaw::PowerLaw { b, .. } => exponent_class(*b),
        PotentialLaw::ExponentialWell { gamma, .. } => {
            if *gamma <= 2.0 {
                Curvature::Concave
            } else {
                Curvature::Mixed
            }
        }
        PotentialLaw::Custom(c) => sampled_class(&*c.d1, &*c.d2),
    }
}

/// Upper bound when every law is concave in the squared variable, lower bound
/// when every law is convex; laws linear in the squared variable do not vote.
/// A system whose laws are all linear (the oscillator) is exact and reported
/// as an upper bound.
pub fn variational_character(system: &SystemSpec) -> BoundCharacter {
    let mut classes = alloc::vec![kinetic_class(system.kinetic())];
    classes.extend(system.terms().iter().map(|t| potential_class(&t.potential)));
    if classes.contains(&Curvature::Mixed) {
        return BoundCharacter::Unknown;
    }
    let concave = classes.contains(&Curvature::Concave);
    let convex = classes.contains(&Curvature::Convex);
    match (concave, convex) {
        (true, true) => BoundCharacter::Unknown,
        (false, true) => BoundCharacter::LowerBound,
        _ => BoundCharacter::UpperBound,
    }
}
