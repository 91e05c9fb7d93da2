//! Two-coordinate harmonic-oscillator machinery for three identical particles:
//! radial functions, coupled bands, rotation brackets and the symmetrizer.

pub mod bracket;
pub mod radial;
pub mod symmetrize;

use alloc::vec::Vec;

pub use bracket::{moshinsky_bracket, BandRotation};
pub use radial::{radial_moment, radial_wavefunction};
pub use symmetrize::{scale_parameters, symmetric_projector, symmetrize, SymmetrizedState};

/// `[phi_{n1 l1}(u1) phi_{n2 l2}(u2)]^L`, magnetic numbers suppressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoupledBasisState {
    pub n1: u32,
    pub l1: u32,
    pub n2: u32,
    pub l2: u32,
    pub l: u32,
}

impl CoupledBasisState {
    pub const fn new(n1: u32, l1: u32, n2: u32, l2: u32, l: u32) -> Self {
        CoupledBasisState { n1, l1, n2, l2, l }
    }

    /// Oscillator band `2(n1+n2) + l1 + l2`.
    pub fn band(&self) -> u32 {
        2 * (self.n1 + self.n2) + self.l1 + self.l2
    }

    /// Orbital part `l1 + l2` (Q0 minus one for three particles in 3D).
    pub fn orbital(&self) -> u32 {
        self.l1 + self.l2
    }

    /// The same state with the two coordinates exchanged.
    pub fn swapped(&self) -> Self {
        CoupledBasisState { n1: self.n2, l1: self.l2, n2: self.n1, l2: self.l1, l: self.l }
    }

    fn key(&self) -> (u32, u32, u32, u32) {
        (self.n1, self.l1, self.n2, self.l2)
    }
}

/// Every state of band `qstar` coupled to total `l`, in lexicographic
/// `(n1, l1, n2, l2)` order.
pub fn enumerate_band(qstar: u32, l: u32) -> Vec<CoupledBasisState> {
    let mut out = Vec::new();
    for n1 in 0..=qstar / 2 {
        for l1 in 0..=qstar - 2 * n1 {
            let rest = qstar - 2 * n1 - l1;
            for n2 in 0..=rest / 2 {
                let l2 = rest - 2 * n2;
                if l <= l1 + l2 && l >= l1.abs_diff(l2) {
                    out.push(CoupledBasisState { n1, l1, n2, l2, l });
                }
            }
        }
    }
    out
}

/// Position of `s` inside a lexicographically sorted band.
pub(crate) fn band_index(band: &[CoupledBasisState], s: &CoupledBasisState) -> Option<usize> {
    band.binary_search_by(|x| x.key().cmp(&s.key())).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuples(v: &[CoupledBasisState]) -> Vec<(u32, u32, u32, u32)> {
        v.iter().map(|s| s.key()).collect()
    }

    #[test]
    fn band_examples() {
        assert_eq!(tuples(&enumerate_band(0, 0)), [(0, 0, 0, 0)]);
        assert_eq!(tuples(&enumerate_band(2, 0)), [(0, 0, 1, 0), (0, 1, 0, 1), (1, 0, 0, 0)]);
        assert_eq!(
            tuples(&enumerate_band(3, 3)),
            [(0, 0, 0, 3), (0, 1, 0, 2), (0, 2, 0, 1), (0, 3, 0, 0)]
        );
        assert!(enumerate_band(1, 2).is_empty());
    }

    #[test]
    fn parity_follows_band() {
        for q in 0..9 {
            for l in 0..=q {
                for s in enumerate_band(q, l) {
                    assert_eq!((s.l1 + s.l2) % 2, q % 2);
                    assert_eq!(s.band(), q);
                }
            }
        }
    }
}
