//! Checks of the bracket and symmetrizer constructions against explicit
//! six-dimensional wavefunctions evaluated at random points.

use std::f64::consts::PI;

use envelope_core::oscillator::{radial_wavefunction, symmetrize, BandRotation, CoupledBasisState};
use envelope_core::special::clebsch_gordan;
use num_complex::Complex;
use proptest::prelude::*;

type C = Complex<f64>;
type V3 = [f64; 3];

/// Associated Legendre `P_l^m(x)`, `m >= 0`, with the Condon-Shortley phase.
fn legendre(l: i64, m: i64, x: f64) -> f64 {
    let mut pmm = 1.0;
    let s = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
    let mut fact = 1.0;
    for _ in 0..m {
        pmm *= -fact * s;
        fact += 2.0;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pm1;
    }
    let mut out = 0.0;
    for ll in (m + 2)..=l {
        out = (x * (2 * ll - 1) as f64 * pm1 - (ll + m - 1) as f64 * pmm) / (ll - m) as f64;
        pmm = pm1;
        pm1 = out;
    }
    out
}

fn ln_fact(n: i64) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

fn ylm(l: i64, m: i64, v: V3) -> C {
    let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let ct = v[2] / r;
    let ph = v[1].atan2(v[0]);
    let am = m.abs();
    let norm = ((2 * l + 1) as f64 / (4.0 * PI) * (ln_fact(l - am) - ln_fact(l + am)).exp()).sqrt();
    let y = C::from_polar(norm * legendre(l, am, ct), am as f64 * ph);
    if m >= 0 {
        y
    } else if am % 2 == 0 {
        y.conj()
    } else {
        -y.conj()
    }
}

fn norm3(v: V3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// `[phi_{n1 l1}(u1) phi_{n2 l2}(u2)]^L_M` at unit oscillator scale.
fn coupled(s: &CoupledBasisState, m: i64, u1: V3, u2: V3) -> C {
    let (l1, l2, l) = (s.l1 as i64, s.l2 as i64, s.l as i64);
    let radial = radial_wavefunction(s.n1, s.l1, 1.0, norm3(u1)) * radial_wavefunction(s.n2, s.l2, 1.0, norm3(u2));
    let mut acc = C::new(0.0, 0.0);
    for m1 in -l1..=l1 {
        let m2 = m - m1;
        if m2.abs() > l2 {
            continue;
        }
        let cg = clebsch_gordan(l1, m1, l2, m2, l, m);
        if cg != 0.0 {
            acc += ylm(l1, m1, u1) * ylm(l2, m2, u2) * cg;
        }
    }
    acc * radial
}

fn mix(a: f64, u1: V3, b: f64, u2: V3) -> V3 {
    [a * u1[0] + b * u2[0], a * u1[1] + b * u2[1], a * u1[2] + b * u2[2]]
}

/// `(u1, u2) -> (M00 u1 + M01 u2, M10 u1 + M11 u2)`.
fn apply(m: [[f64; 2]; 2], u1: V3, u2: V3) -> (V3, V3) {
    (mix(m[0][0], u1, m[0][1], u2), mix(m[1][0], u1, m[1][1], u2))
}

fn point() -> impl Strategy<Value = (V3, V3)> {
    let c = -2.0f64..2.0;
    ([c.clone(), c.clone(), c.clone()], [c.clone(), c.clone(), c]).prop_filter("away from the origin", |(a, b)| {
        norm3(*a) > 0.05 && norm3(*b) > 0.05
    })
}

#[test]
fn legendre_and_harmonics_known_values() {
    // Y_10 = sqrt(3/4pi) cos(theta)
    let y = ylm(1, 0, [0.0, 0.6, 0.8]);
    assert!((y.re - (3.0 / (4.0 * PI)).sqrt() * 0.8).abs() < 1e-14);
    // Y_11 = -sqrt(3/8pi) sin(theta) e^{i phi}
    let y = ylm(1, 1, [1.0, 0.0, 0.0]);
    assert!((y.re + (3.0 / (8.0 * PI)).sqrt()).abs() < 1e-14);
    assert!(y.im.abs() < 1e-14);
    assert!((legendre(3, 0, 0.3) - 0.5 * (5.0 * 0.027 - 0.9)).abs() < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// `psi_s(cos t u1 - sin t u2, sin t u1 + cos t u2) = sum_s' B(t)[s', s] psi_s'(u1, u2)`.
    #[test]
    fn rotation_matrix_matches_wavefunctions(
        (u1, u2) in point(),
        t in -3.2f64..3.2,
        band in 0u32..=5,
        lpick in 0u32..=5,
        mpick in 0i64..=10,
    ) {
        let l = lpick.min(band);
        let rot = BandRotation::new(band, l).unwrap();
        let states = rot.states();
        prop_assume!(!states.is_empty());
        let m = mpick.min(2 * l as i64) - l as i64;
        let b = rot.matrix(t);
        let (c, s) = (t.cos(), t.sin());
        let (r1, r2) = apply([[c, -s], [s, c]], u1, u2);
        for (j, sj) in states.iter().enumerate() {
            let lhs = coupled(sj, m, r1, r2);
            let mut rhs = C::new(0.0, 0.0);
            for (i, si) in states.iter().enumerate() {
                rhs += coupled(si, m, u1, u2) * b[(i, j)];
            }
            prop_assert!((lhs - rhs).norm() < 1e-10, "{sj:?}: {lhs} vs {rhs}");
        }
    }

    /// Symmetrized states pick up sigma under transpositions and stay put under cyclic permutations.
    #[test]
    fn symmetrized_states_are_permutation_eigenfunctions(
        (u1, u2) in point(),
        band in 0u32..=6,
        lpick in 0u32..=6,
        sigma in prop_oneof![Just(1i8), Just(-1i8)],
    ) {
        let l = lpick.min(band);
        let h = 3f64.sqrt() / 2.0;
        let p12 = [[-1.0, 0.0], [0.0, 1.0]];
        let p13 = [[0.5, -h], [-h, -0.5]];
        let p23 = [[0.5, h], [h, -0.5]];
        let mul = |a: [[f64; 2]; 2], b: [[f64; 2]; 2]| {
            let mut o = [[0.0; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    o[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
                }
            }
            o
        };
        let perms = [
            (p12, sigma as f64),
            (p13, sigma as f64),
            (p23, sigma as f64),
            (mul(p13, p12), 1.0),
            (mul(p23, p12), 1.0),
        ];
        for st in symmetrize(band, l, sigma).unwrap() {
            let m = l as i64;
            let psi = |a: V3, b: V3| {
                st.components.iter().fold(C::new(0.0, 0.0), |acc, (s, c)| acc + coupled(s, m, a, b) * *c)
            };
            let base = psi(u1, u2);
            for (p, sign) in perms {
                let (v1, v2) = apply(p, u1, u2);
                let moved = psi(v1, v2);
                prop_assert!((moved - base * sign).norm() < 1e-10, "band {band} L={l}: {moved} vs {base}");
            }
        }
    }
}

#[test]
fn jacobi_permutation_matrices_follow_from_particle_swaps() {
    // u1 = r1 - r2, u2 = (r1 + r2 - 2 r3)/sqrt(3) in one dimension
    let jac = |r: [f64; 3]| [r[0] - r[1], (r[0] + r[1] - 2.0 * r[2]) / 3f64.sqrt()];
    let r = [0.3, -1.1, 0.7];
    let h = 3f64.sqrt() / 2.0;
    for (swap, m) in [((0, 2), [[0.5, -h], [-h, -0.5]]), ((1, 2), [[0.5, h], [h, -0.5]])] {
        let mut q = r;
        q.swap(swap.0, swap.1);
        let (a, b) = (jac(r), jac(q));
        for i in 0..2 {
            assert!((b[i] - (m[i][0] * a[0] + m[i][1] * a[1])).abs() < 1e-14);
        }
    }
}
