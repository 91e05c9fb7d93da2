//! Kinetic and potential laws, K-body system descriptions and state bookkeeping.
#[allow(unused_imports)]
use crate::float::Real as _;

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Real function of one real variable, shareable across threads.
pub type Fun = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A user-supplied law with its first two derivatives.
#[derive(Clone)]
pub struct CustomLaw {
    pub value: Fun,
    pub d1: Fun,
    pub d2: Fun,
}

impl fmt::Debug for CustomLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CustomLaw")
    }
}

impl CustomLaw {
    /// Builds the law after checking both derivatives against central finite
    /// differences on 100 log-spaced abscissae in `[lo, hi]`.
    pub fn new(value: Fun, d1: Fun, d2: Fun, lo: f64, hi: f64) -> Result<Self> {
        let law = CustomLaw { value, d1, d2 };
        law.check_derivatives(lo, hi)?;
        Ok(law)
    }

    fn check_derivatives(&self, lo: f64, hi: f64) -> Result<()> {
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::InvalidSpec("derivative check range must satisfy 0 < lo < hi"));
        }
        let n = 100;
        let (llo, lhi) = (lo.ln(), hi.ln());
        for i in 0..n {
            let x = (llo + (lhi - llo) * i as f64 / (n - 1) as f64).exp();
            let h = 1e-4 * x;
            let fd1 = ((self.value)(x + h) - (self.value)(x - h)) / (2.0 * h);
            let fd2 = ((self.d1)(x + h) - (self.d1)(x - h)) / (2.0 * h);
            let a1 = (self.d1)(x);
            let a2 = (self.d2)(x);
            let s1 = a1.abs().max(fd1.abs()).max((self.value)(x).abs() / x * 1e-6);
            let s2 = a2.abs().max(fd2.abs()).max(a1.abs() / x * 1e-6);
            if (a1 - fd1).abs() > 1e-6 * s1 + 1e-300 {
                return Err(Error::InvalidSpec("first derivative disagrees with finite differences"));
            }
            if (a2 - fd2).abs() > 1e-6 * s2 + 1e-300 {
                return Err(Error::InvalidSpec("second derivative disagrees with finite differences"));
            }
        }
        Ok(())
    }
}

/// Kinetic energy of one particle as a function of its momentum magnitude.
#[derive(Debug, Clone)]
pub enum KineticLaw {
    /// `T(p) = f p^alpha`.
    PowerLaw { f: f64, alpha: f64 },
    Custom(CustomLaw),
}

impl KineticLaw {
    /// `p^2 / 2`.
    pub fn nonrelativistic() -> Self {
        KineticLaw::PowerLaw { f: 0.5, alpha: 2.0 }
    }

    pub fn value(&self, p: f64) -> f64 {
        match self {
            KineticLaw::PowerLaw { f, alpha } => f * p.powf(*alpha),
            KineticLaw::Custom(c) => (c.value)(p),
        }
    }

    pub fn d1(&self, p: f64) -> f64 {
        match self {
            KineticLaw::PowerLaw { f, alpha } => f * alpha * p.powf(alpha - 1.0),
            KineticLaw::Custom(c) => (c.d1)(p),
        }
    }

    pub fn d2(&self, p: f64) -> f64 {
        match self {
            KineticLaw::PowerLaw { f, alpha } => f * alpha * (alpha - 1.0) * p.powf(alpha - 2.0),
            KineticLaw::Custom(c) => (c.d2)(p),
        }
    }

    fn validate(&self) -> Result<()> {
        if let KineticLaw::PowerLaw { f, alpha } = self {
            if !(*f > 0.0 && *alpha > 0.0) {
                return Err(Error::InvalidSpec("kinetic power law needs f > 0 and alpha > 0"));
            }
        }
        Ok(())
    }
}

/// Potential as a function of the K-body hyperradius.
#[derive(Debug, Clone)]
pub enum PotentialLaw {
    /// `V(r) = a sgn(b) r^b`.
    PowerLaw { a: f64, b: f64 },
    /// `V(r) = -a exp(-b r^gamma)`.
    ExponentialWell { a: f64, b: f64, gamma: f64 },
    Custom(CustomLaw),
}

impl PotentialLaw {
    pub fn linear(a: f64) -> Self {
        PotentialLaw::PowerLaw { a, b: 1.0 }
    }

    pub fn coulomb(a: f64) -> Self {
        PotentialLaw::PowerLaw { a, b: -1.0 }
    }

    pub fn harmonic(a: f64) -> Self {
        PotentialLaw::PowerLaw { a, b: 2.0 }
    }

    pub fn gaussian(a: f64, b: f64) -> Self {
        PotentialLaw::ExponentialWell { a, b, gamma: 2.0 }
    }

    pub fn value(&self, r: f64) -> f64 {
        match self {
            PotentialLaw::PowerLaw { a, b } => a * b.signum() * r.powf(*b),
            PotentialLaw::ExponentialWell { a, b, gamma } => -a * (-b * r.powf(*gamma)).exp(),
            PotentialLaw::Custom(c) => (c.value)(r),
        }
    }

    pub fn d1(&self, r: f64) -> f64 {
        match self {
            PotentialLaw::PowerLaw { a, b } => a * b.abs() * r.powf(b - 1.0),
            PotentialLaw::ExponentialWell { a, b, gamma } => {
                a * b * gamma * r.powf(gamma - 1.0) * (-b * r.powf(*gamma)).exp()
            }
            PotentialLaw::Custom(c) => (c.d1)(r),
        }
    }

    pub fn d2(&self, r: f64) -> f64 {
        match self {
            PotentialLaw::PowerLaw { a, b } => a * b.abs() * (b - 1.0) * r.powf(b - 2.0),
            PotentialLaw::ExponentialWell { a, b, gamma } => {
                let e = (-b * r.powf(*gamma)).exp();
                a * b * gamma * e * ((gamma - 1.0) * r.powf(gamma - 2.0) - b * gamma * r.powf(2.0 * gamma - 2.0))
            }
            PotentialLaw::Custom(c) => (c.d2)(r),
        }
    }

    fn validate(&self, kinetic: &KineticLaw) -> Result<()> {
        match self {
            PotentialLaw::PowerLaw { a, b } => {
                if !(*a > 0.0) || *b == 0.0 || !b.is_finite() {
                    return Err(Error::InvalidSpec("potential power law needs a > 0 and b != 0"));
                }
                if let KineticLaw::PowerLaw { alpha, .. } = kinetic {
                    if !(*b > -alpha) {
                        return Err(Error::InvalidSpec("potential power law needs b > -alpha"));
                    }
                }
            }
            PotentialLaw::ExponentialWell { a, b, gamma } => {
                if !(*a > 0.0 && *b > 0.0 && *gamma > 0.0) {
                    return Err(Error::InvalidSpec("exponential well needs a, b, gamma > 0"));
                }
            }
            PotentialLaw::Custom(_) => {}
        }
        Ok(())
    }
}

/// One K-body interaction summed over all K-particle subsets.
#[derive(Debug, Clone)]
pub struct Term {
    pub k: u32,
    pub potential: PotentialLaw,
}

/// N identical particles in D dimensions.
#[derive(Debug, Clone)]
pub struct SystemSpec {
    n: u32,
    d: u32,
    kinetic: KineticLaw,
    terms: Vec<Term>,
}

impl SystemSpec {
    pub fn new(n: u32, d: u32, kinetic: KineticLaw, terms: Vec<Term>) -> Result<Self> {
        if n < 2 || n > 64 {
            return Err(Error::InvalidSpec("particle number must lie in [2, 64]"));
        }
        if d < 1 {
            return Err(Error::InvalidSpec("dimension must be at least 1"));
        }
        if terms.is_empty() {
            return Err(Error::InvalidSpec("at least one potential term is required"));
        }
        kinetic.validate()?;
        for t in &terms {
            if t.k < 2 || t.k > n {
                return Err(Error::InvalidSpec("term K must satisfy 2 <= K <= N"));
            }
            t.potential.validate(&kinetic)?;
        }
        Ok(SystemSpec { n, d, kinetic, terms })
    }

    /// Three particles in three dimensions, `p^2/2` kinetic energy and a single
    /// three-body hyperradial potential.
    pub fn three_body(potential: PotentialLaw) -> Result<Self> {
        SystemSpec::new(3, 3, KineticLaw::nonrelativistic(), alloc::vec![Term { k: 3, potential }])
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn kinetic(&self) -> &KineticLaw {
        &self.kinetic
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Number of particle pairs, `C(N,2)`.
    pub fn pair_count(&self) -> f64 {
        binomial(self.n, 2).unwrap() as f64
    }
}

/// Exact binomial coefficient `C(a, b)` for `0 <= b <= a <= 64`.
pub fn binomial(a: u32, b: u32) -> Result<u64> {
    if b > a || a > 64 {
        return Err(Error::Domain("binomial needs 0 <= b <= a <= 64"));
    }
    let b = b.min(a - b) as u128;
    let mut r: u128 = 1;
    for i in 0..b {
        r = r * (a as u128 - i) / (i + 1);
    }
    Ok(r as u64)
}

/// Internal quantum numbers of an N-body state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpec {
    /// `(n_i, l_i)` for the N-1 internal Jacobi coordinates.
    pub quanta: Vec<(u32, u32)>,
    /// +1 for symmetric, -1 for antisymmetric states.
    pub sigma: i8,
    /// Total orbital angular momentum.
    pub l_total: u32,
}

impl StateSpec {
    pub fn new(quanta: Vec<(u32, u32)>, sigma: i8, l_total: u32) -> Result<Self> {
        if quanta.is_empty() {
            return Err(Error::InvalidSpec("state needs at least one internal coordinate"));
        }
        if sigma != 1 && sigma != -1 {
            return Err(Error::InvalidSpec("sigma must be +1 or -1"));
        }
        Ok(StateSpec { quanta, sigma, l_total })
    }

    /// Symmetric ground state of N particles.
    pub fn ground(n: u32) -> Self {
        StateSpec { quanta: alloc::vec![(0, 0); (n - 1) as usize], sigma: 1, l_total: 0 }
    }
}

/// Derived labels of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumNumbers {
    pub q: f64,
    pub q0: f64,
    pub qstar: u32,
    pub parity: i8,
}

pub fn quantum_numbers(state: &StateSpec, d: u32) -> QuantumNumbers {
    let half = d as f64 / 2.0;
    let mut q = 0.0;
    let mut q0 = 0.0;
    let mut qstar = 0;
    let mut lsum = 0;
    for &(n, l) in &state.quanta {
        q += 2.0 * n as f64 + l as f64 + half;
        q0 += l as f64 + half - 1.0;
        qstar += 2 * n + l;
        lsum += l;
    }
    QuantumNumbers { q, q0, qstar, parity: if lsum % 2 == 0 { 1 } else { -1 } }
}

/// Sum of squared pairwise distances over the particles listed in `subset`
/// (zero-based, strictly increasing).
pub fn hyperradius_squared<P: AsRef<[f64]>>(positions: &[P], subset: &[usize]) -> Result<f64> {
    for w in subset.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::Domain("subset indices must be strictly increasing"));
        }
    }
    if subset.iter().any(|&i| i >= positions.len()) {
        return Err(Error::Domain("subset index out of range"));
    }
    let mut s = 0.0;
    for (a, &i) in subset.iter().enumerate() {
        for &j in &subset[a + 1..] {
            let (ri, rj) = (positions[i].as_ref(), positions[j].as_ref());
            if ri.len() != rj.len() {
                return Err(Error::Domain("points differ in dimension"));
            }
            s += ri.iter().zip(rj).map(|(x, y)| (x - y) * (x - y)).sum::<f64>();
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn binomials() {
        assert_eq!(binomial(3, 2).unwrap(), 3);
        assert_eq!(binomial(3, 3).unwrap(), 1);
        assert_eq!(binomial(10, 4).unwrap(), 210);
        assert_eq!(binomial(64, 32).unwrap(), 1_832_624_140_942_590_534);
        assert!(binomial(2, 3).is_err());
        assert!(binomial(65, 1).is_err());
    }

    #[test]
    fn quantum_number_examples() {
        let gs = StateSpec::ground(3);
        let qn = quantum_numbers(&gs, 3);
        assert_eq!((qn.q, qn.q0, qn.qstar, qn.parity), (3.0, 1.0, 0, 1));
        let s = StateSpec::new(vec![(0, 2), (0, 1)], 1, 3).unwrap();
        let qn = quantum_numbers(&s, 3);
        assert_eq!((qn.q, qn.q0, qn.qstar, qn.parity), (6.0, 4.0, 3, -1));
        let s = StateSpec::new(vec![(1, 0), (0, 0)], 1, 0).unwrap();
        let qn = quantum_numbers(&s, 3);
        assert_eq!((qn.q, qn.q0, qn.qstar, qn.parity), (5.0, 1.0, 2, 1));
    }

    #[test]
    fn hyperradius_examples() {
        let p = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        assert_eq!(hyperradius_squared(&p, &[0, 1, 2]).unwrap(), 4.0);
        let q = [[0.3, 0.1, 0.2], [0.3, 0.1, 0.2]];
        assert_eq!(hyperradius_squared(&q, &[0, 1]).unwrap(), 0.0);
        let h = 3f64.sqrt() / 2.0;
        let t = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.5, h, 0.0]];
        assert!((hyperradius_squared(&t, &[0, 1, 2]).unwrap() - 3.0).abs() < 1e-14);
        assert!(hyperradius_squared(&t, &[1, 1]).is_err());
    }

    #[test]
    fn validation_rejects_bad_laws() {
        assert!(SystemSpec::three_body(PotentialLaw::PowerLaw { a: 1.0, b: -2.5 }).is_err());
        assert!(SystemSpec::three_body(PotentialLaw::PowerLaw { a: -1.0, b: 1.0 }).is_err());
        assert!(SystemSpec::three_body(PotentialLaw::gaussian(1.0, 0.0)).is_err());
        let k = KineticLaw::nonrelativistic();
        assert!(SystemSpec::new(3, 3, k, vec![Term { k: 4, potential: PotentialLaw::linear(1.0) }]).is_err());
    }

    #[test]
    fn law_derivatives_match_custom_check() {
        let w = PotentialLaw::ExponentialWell { a: 2.0, b: 0.7, gamma: 1.5 };
        let (w1, w2, w3) = (w.clone(), w.clone(), w);
        let law = CustomLaw::new(
            Arc::new(move |r| w1.value(r)),
            Arc::new(move |r| w2.d1(r)),
            Arc::new(move |r| w3.d2(r)),
            0.05,
            5.0,
        );
        assert!(law.is_ok());
        let bad = CustomLaw::new(Arc::new(|r| r * r), Arc::new(|r| r), Arc::new(|_| 2.0), 0.1, 10.0);
        assert!(bad.is_err());
    }
}
