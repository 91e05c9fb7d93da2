//! Variational benchmark for three identical particles with a three-body
//! hyperradial potential: diagonalization in a symmetry-adapted oscillator
//! basis with an optimized scale `z`.
//!
//! Coordinates: `u1 = z x1`, `u2 = (2z/sqrt 3) x2` with `x1 = r1 - r2` and
//! `x2 = (r1 + r2)/2 - r3`, so that `r123^2 = (3/2)(u1^2 + u2^2)/z^2` and the
//! kinetic energy `p^2/(2m)` becomes `z^2 (P1^2 + P2^2)` for `m = 1`.
//! Potential matrix elements are diagonal in `(l1, l2)` and computed in
//! `t = u1^2 + u2^2`, `x = u1^2/t` with a generalized Gauss-Laguerre rule in
//! `t` and a Gauss-Jacobi rule in `x`.
#[allow(unused_imports)]
use crate::float::Real as _;

use alloc::vec;
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::et::solve_et;
use crate::model::{KineticLaw, PotentialLaw, SystemSpec};
use crate::numeric::{gauss_jacobi01, gauss_laguerre, golden_min, OrthoFamily};
use crate::observables::compute_nu;
use crate::oscillator::radial::{p2_element, radial_matrix_element};
use crate::oscillator::{symmetrize, CoupledBasisState, SymmetrizedState};

/// Truncation, symmetry block and numerical settings of one oracle run.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub qstar_max: u32,
    pub l: u32,
    /// +1 (bands 0, 2, 4, ...) or -1 (bands 1, 3, 5, ...).
    pub parity: i8,
    pub sigma: i8,
    /// Zero-based index of the targeted eigenvalue in the block.
    pub level: usize,
    /// Geometric scan range for `z`.
    pub z_bracket: (f64, f64),
    /// Gauss-Laguerre points in the hyperradial variable.
    pub quad_order: usize,
    /// Truncation used while minimizing over `z` (largest band of the right
    /// parity not above this value); `None` minimizes at `qstar_max`.
    pub z_search_qstar: Option<u32>,
}

impl OracleConfig {
    pub fn new(l: u32, parity: i8, sigma: i8) -> Self {
        OracleConfig {
            qstar_max: if parity > 0 { 18 } else { 17 },
            l,
            parity,
            sigma,
            level: 0,
            z_bracket: (0.01, 100.0),
            quad_order: 80,
            z_search_qstar: Some(10),
        }
    }

    pub fn with_qstar_max(mut self, q: u32) -> Self {
        self.qstar_max = q;
        self
    }

    pub fn with_level(mut self, level: usize) -> Self {
        self.level = level;
        self
    }

    pub fn with_quad_order(mut self, n: usize) -> Self {
        self.quad_order = n;
        self
    }

    pub fn with_z_search(mut self, q: Option<u32>) -> Self {
        self.z_search_qstar = q;
        self
    }

    fn first_band(&self) -> u32 {
        if self.parity > 0 {
            0
        } else {
            1
        }
    }

    /// Largest band of this parity not above `q`, if any.
    fn clip(&self, q: u32) -> Option<u32> {
        let f = self.first_band();
        if q < f {
            None
        } else {
            Some(q - (q - f) % 2)
        }
    }

    fn validate(&self) -> Result<()> {
        if self.parity != 1 && self.parity != -1 {
            return Err(Error::InvalidSpec("parity must be +1 or -1"));
        }
        if self.sigma != 1 && self.sigma != -1 {
            return Err(Error::InvalidSpec("sigma must be +1 or -1"));
        }
        if !(self.z_bracket.0 > 0.0 && self.z_bracket.1 > self.z_bracket.0) {
            return Err(Error::InvalidSpec("z bracket must satisfy 0 < lo < hi"));
        }
        if self.quad_order < 4 {
            return Err(Error::InvalidSpec("quadrature order must be at least 4"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct Block {
    l1: u32,
    l2: u32,
    /// Indices into the coupled list.
    idx: Vec<usize>,
}

/// Symmetry-adapted basis with its expansion over coupled oscillator states.
#[derive(Debug, Clone)]
pub struct OracleBasis {
    states: Vec<SymmetrizedState>,
    coupled: Vec<CoupledBasisState>,
    /// `coupled.len() x states.len()` expansion coefficients.
    coeff: DMatrix<f64>,
    blocks: Vec<Block>,
    /// `P1^2 + P2^2` in the symmetry-adapted basis.
    kinetic: DMatrix<f64>,
    qstar_max: u32,
    quad_order: usize,
}

impl OracleBasis {
    pub fn states(&self) -> &[SymmetrizedState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn coupled(&self) -> &[CoupledBasisState] {
        &self.coupled
    }

    pub fn qstar_max(&self) -> u32 {
        self.qstar_max
    }

    /// `P1^2 + P2^2` in the symmetry-adapted basis.
    pub fn kinetic_matrix(&self) -> &DMatrix<f64> {
        &self.kinetic
    }

    /// Expands a vector over the symmetry-adapted basis onto coupled states.
    pub fn to_coupled(&self, y: &DVector<f64>) -> Vec<(CoupledBasisState, f64)> {
        let d = &self.coeff * y;
        self.coupled.iter().copied().zip(d.iter().copied()).collect()
    }
}

/// Symmetry-adapted states of every band of the configured parity up to
/// `qstar_max`, concatenated in band order.
pub fn build_basis(config: &OracleConfig) -> Result<OracleBasis> {
    config.validate()?;
    let mut states = Vec::new();
    let mut coupled = Vec::new();
    let mut q = config.first_band();
    while q <= config.qstar_max {
        states.extend(symmetrize(q, config.l, config.sigma)?);
        coupled.extend(crate::oscillator::enumerate_band(q, config.l));
        q += 2;
    }
    if states.is_empty() {
        return Err(Error::EmptyBasis);
    }
    coupled.sort_by_key(|s| (s.l1, s.l2, s.n1, s.n2));
    let find = |s: &CoupledBasisState| {
        coupled
            .binary_search_by_key(&(s.l1, s.l2, s.n1, s.n2), |c| (c.l1, c.l2, c.n1, c.n2))
            .expect("component belongs to the truncated space")
    };
    let mut coeff = DMatrix::zeros(coupled.len(), states.len());
    for (j, st) in states.iter().enumerate() {
        for (s, c) in &st.components {
            coeff[(find(s), j)] = *c;
        }
    }
    let mut blocks: Vec<Block> = Vec::new();
    for (i, s) in coupled.iter().enumerate() {
        match blocks.last_mut() {
            Some(b) if b.l1 == s.l1 && b.l2 == s.l2 => b.idx.push(i),
            _ => blocks.push(Block { l1: s.l1, l2: s.l2, idx: vec![i] }),
        }
    }
    // P1^2 + P2^2 on the coupled space, applied to the expansion matrix
    let mut ts = DMatrix::zeros(coupled.len(), states.len());
    for (i, s) in coupled.iter().enumerate() {
        let mut neighbours = vec![(*s, p2_element(s.n1, s.n1, s.l1) + p2_element(s.n2, s.n2, s.l2))];
        for n1 in (s.n1.max(1) - 1)..=(s.n1 + 1) {
            if n1 != s.n1 {
                neighbours.push((CoupledBasisState { n1, ..*s }, p2_element(n1, s.n1, s.l1)));
            }
        }
        for n2 in (s.n2.max(1) - 1)..=(s.n2 + 1) {
            if n2 != s.n2 {
                neighbours.push((CoupledBasisState { n2, ..*s }, p2_element(n2, s.n2, s.l2)));
            }
        }
        for (t, v) in neighbours {
            if v == 0.0 || t.band() > config.qstar_max {
                continue;
            }
            let k = find(&t);
            for j in 0..states.len() {
                ts[(i, j)] += v * coeff[(k, j)];
            }
        }
    }
    let kinetic = coeff.transpose() * ts;
    let kinetic = (&kinetic + kinetic.transpose()) * 0.5;
    Ok(OracleBasis {
        states,
        coupled,
        coeff,
        blocks,
        kinetic,
        qstar_max: config.qstar_max,
        quad_order: config.quad_order,
    })
}

fn kinetic_factor(system: &SystemSpec) -> Result<f64> {
    if system.n() != 3 || system.d() != 3 {
        return Err(Error::UnsupportedSystem("the oracle handles three particles in three dimensions"));
    }
    if system.terms().iter().any(|t| t.k != 3) {
        return Err(Error::UnsupportedSystem("the oracle handles three-body forces only"));
    }
    match system.kinetic() {
        KineticLaw::PowerLaw { f, alpha } if *alpha == 2.0 => Ok(2.0 * f),
        _ => Err(Error::UnsupportedSystem("the oracle needs a nonrelativistic kinetic energy")),
    }
}

/// Weight `t^{shift} e^{-c t}` factored out of `V(sqrt(3t/2)/z)`, and the remainder.
enum Kernel<'a> {
    Power { shift: f64, coef: f64 },
    Decay { c: f64, coef: f64 },
    General(&'a PotentialLaw),
}

fn kernel(v: &PotentialLaw, z: f64) -> Kernel<'_> {
    match v {
        PotentialLaw::PowerLaw { a, b } => Kernel::Power {
            shift: b / 2.0,
            coef: a * b.signum() * 1.5f64.powf(b / 2.0) * z.powf(-b),
        },
        PotentialLaw::ExponentialWell { a, b, gamma } if *gamma == 2.0 => {
            Kernel::Decay { c: 1.5 * b / (z * z), coef: -a }
        }
        other => Kernel::General(other),
    }
}

/// Potential matrix in the symmetry-adapted basis at scale `z`.
pub fn potential_matrix(system: &SystemSpec, basis: &OracleBasis, z: f64, quad_order: usize) -> Result<DMatrix<f64>> {
    kinetic_factor(system)?;
    let ns = basis.len();
    let mut out = DMatrix::zeros(ns, ns);
    let nx = (basis.qstar_max / 2 + 2) as usize;
    for term in system.terms() {
        let ker = kernel(&term.potential, z);
        for b in &basis.blocks {
            let (l1, l2) = (b.l1 as f64, b.l2 as f64);
            let (shift, decay) = match ker {
                Kernel::Power { shift, .. } => (shift, 0.0),
                Kernel::Decay { c, .. } => (0.0, c),
                Kernel::General(_) => (0.0, 0.0),
            };
            let at = l1 + l2 + 2.0 + shift;
            if !(at > -1.0) {
                return Err(Error::Domain("potential too singular for the oscillator basis"));
            }
            let (tn, tw) = gauss_laguerre(at, quad_order, 1.0 + decay);
            let (xn, xw) = gauss_jacobi01(l1 + 0.5, l2 + 0.5, nx);
            let nmax1 = b.idx.iter().map(|&i| basis.coupled[i].n1).max().unwrap() as usize + 1;
            let nmax2 = b.idx.iter().map(|&i| basis.coupled[i].n2).max().unwrap() as usize + 1;
            let f1 = OrthoFamily::laguerre(l1 + 0.5, nmax1 + 1);
            let f2 = OrthoFamily::laguerre(l2 + 0.5, nmax2 + 1);
            let nodes = tn.len() * xn.len();
            let mut feat = DMatrix::zeros(b.idx.len(), nodes);
            let mut wts = DVector::zeros(nodes);
            let mut p1 = vec![0.0; nmax1];
            let mut p2 = vec![0.0; nmax2];
            let mut col = 0;
            for (t, wt) in tn.iter().zip(&tw) {
                let g = match ker {
                    Kernel::Power { coef, .. } | Kernel::Decay { coef, .. } => coef,
                    Kernel::General(v) => v.value((1.5 * t).sqrt() / z),
                };
                for (x, wx) in xn.iter().zip(&xw) {
                    f1.eval_into(t * x, &mut p1);
                    f2.eval_into(t * (1.0 - x), &mut p2);
                    for (r, &i) in b.idx.iter().enumerate() {
                        let s = &basis.coupled[i];
                        let ph = if (s.n1 + s.n2) % 2 == 0 { 1.0 } else { -1.0 };
                        feat[(r, col)] = ph * p1[s.n1 as usize] * p2[s.n2 as usize];
                    }
                    wts[col] = wt * wx * g;
                    col += 1;
                }
            }
            let mut fw = feat.clone();
            for c in 0..nodes {
                let w = wts[c];
                fw.column_mut(c).scale_mut(w);
            }
            let vb = fw * feat.transpose();
            let sb = basis.coeff.select_rows(b.idx.iter());
            out += sb.transpose() * (vb * &sb);
        }
    }
    Ok((&out + out.transpose()) * 0.5)
}

/// `H = z^2 (2F)(P1^2 + P2^2) + V` in the symmetry-adapted basis.
pub fn hamiltonian_matrix(system: &SystemSpec, basis: &OracleBasis, z: f64) -> Result<DMatrix<f64>> {
    let kf = kinetic_factor(system)?;
    if !(z > 0.0) {
        return Err(Error::Domain("oscillator scale z must be positive"));
    }
    let v = potential_matrix(system, basis, z, basis.quad_order)?;
    Ok(&basis.kinetic * (kf * z * z) + v)
}

/// Eigenpairs sorted by increasing eigenvalue.
pub fn sorted_eigen(h: DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = h.nrows();
    let eig = crate::numeric::symmetric_eigen(h);
    if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonConvergence("eigenvalues are not finite"));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((vals, vecs))
}

/// Result of one oracle run.
#[derive(Debug, Clone)]
pub struct OracleSolution {
    pub e: f64,
    pub z_opt: f64,
    pub level: usize,
    /// Eigenvector over the symmetry-adapted basis.
    pub eigenvector: DVector<f64>,
    /// The same eigenvector expanded over coupled oscillator states.
    pub coupled: Vec<(CoupledBasisState, f64)>,
    /// `(Q*, sum of squared coupled coefficients in that band)`.
    pub band_weights: Vec<(u32, f64)>,
    /// Band carrying the largest weight.
    pub dominant_band: u32,
    /// `z / lambda1` with `lambda1` from the plain envelope solution at `Q = dominant_band + 3`.
    pub nu: f64,
    /// Relative energy change against the truncation two bands lower, when available.
    pub truncation_delta: Option<f64>,
    pub basis_size: usize,
}

impl OracleSolution {
    pub fn band_weight(&self, q: u32) -> f64 {
        self.band_weights.iter().find(|(b, _)| *b == q).map_or(0.0, |(_, w)| *w)
    }

    /// `<|x1|^k>` on the oracle eigenstate, `x1 = r1 - r2`.
    pub fn moment(&self, k: f64) -> Result<f64> {
        let mut s = 0.0;
        for (a, da) in &self.coupled {
            if *da == 0.0 {
                continue;
            }
            for (b, db) in &self.coupled {
                if *db == 0.0 || a.l1 != b.l1 || a.n2 != b.n2 || a.l2 != b.l2 {
                    continue;
                }
                s += da * db * radial_matrix_element(a.n1, b.n1, a.l1, k)?;
            }
        }
        Ok(s * self.z_opt.powf(-k))
    }
}

fn level_energy(system: &SystemSpec, basis: &OracleBasis, z: f64, level: usize) -> Result<f64> {
    let h = hamiltonian_matrix(system, basis, z)?;
    let (vals, _) = sorted_eigen(h)?;
    vals.get(level).copied().ok_or(Error::EmptyBasis)
}

/// Minimizes the targeted eigenvalue over `z` and diagonalizes at `qstar_max`.
pub fn solve_oracle(system: &SystemSpec, config: &OracleConfig) -> Result<OracleSolution> {
    kinetic_factor(system)?;
    let full = build_basis(config)?;
    if config.level >= full.len() {
        return Err(Error::EmptyBasis);
    }
    let search = match config.z_search_qstar.and_then(|q| config.clip(q.min(config.qstar_max))) {
        Some(q) if q < config.qstar_max => {
            let small = build_basis(&OracleConfig { qstar_max: q, ..config.clone() });
            match small {
                Ok(b) if b.len() > config.level => b,
                _ => full.clone(),
            }
        }
        _ => full.clone(),
    };

    let f = |lz: f64| level_energy(system, &search, lz.exp(), config.level);
    let (lo, hi) = (config.z_bracket.0.ln(), config.z_bracket.1.ln());
    let m = 48;
    let grid: Vec<f64> = (0..=m).map(|i| lo + (hi - lo) * i as f64 / m as f64).collect();
    let mut vals = Vec::with_capacity(grid.len());
    for &g in &grid {
        vals.push(f(g).unwrap_or(f64::INFINITY));
    }
    let (imin, _) = vals
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
    if !vals[imin].is_finite() {
        return Err(Error::NonConvergence("no finite energy over the z bracket"));
    }
    if imin == 0 || imin == m {
        return Err(Error::NoMinimum);
    }
    let (lz, _) = golden_min(|x| f(x).unwrap_or(f64::INFINITY), grid[imin - 1], grid[imin + 1], 1e-9);
    let z = lz.exp();

    let (vals, vecs) = sorted_eigen(hamiltonian_matrix(system, &full, z)?)?;
    let e = vals[config.level];
    let y = vecs.column(config.level).into_owned();
    let coupled = full.to_coupled(&y);
    let mut band_weights: Vec<(u32, f64)> = Vec::new();
    for (s, d) in &coupled {
        match band_weights.iter_mut().find(|(b, _)| *b == s.band()) {
            Some(w) => w.1 += d * d,
            None => band_weights.push((s.band(), d * d)),
        }
    }
    band_weights.sort_by_key(|(b, _)| *b);
    let dominant_band = band_weights
        .iter()
        .fold((0, -1.0), |acc, &(b, w)| if w > acc.1 { (b, w) } else { acc })
        .0;
    let q = dominant_band as f64 + 3.0;
    let nu = match solve_et(system, q) {
        Ok(s) => compute_nu(q, s.rho0, z),
        Err(_) => f64::NAN,
    };
    let truncation_delta = config
        .clip(config.qstar_max.saturating_sub(2))
        .filter(|&q| q + 2 == config.qstar_max)
        .and_then(|q| build_basis(&OracleConfig { qstar_max: q, ..config.clone() }).ok())
        .filter(|b| b.len() > config.level)
        .and_then(|b| level_energy(system, &b, z, config.level).ok())
        .map(|e2| ((e2 - e) / e).abs());
    Ok(OracleSolution {
        e,
        z_opt: z,
        level: config.level,
        eigenvector: y,
        coupled,
        band_weights,
        dominant_band,
        nu,
        truncation_delta,
        basis_size: full.len(),
    })
}
