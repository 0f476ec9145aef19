//! The linear Schrödinger semigroups in frequency space.
//!
//! The hyperbolic propagator multiplies each amplitude by `e^{−2πi·H(n)·t}`
//! with `H(n) = n₁² − n₂²`; the elliptic comparison group uses `|n|²`
//! instead. Both symbols are integer valued, so the flows are 1-periodic in
//! time and the whole space-time analysis lives on `[0,1] × T²`.
//!
//! The module also carries the two frequency-localization tools used by the
//! bilinear analysis: the sharp box projector and the Galilean recentering
//! `ĝ(n − m) = f̂(n)`, which moves a box centered at `m` to the origin. The
//! algebraic identity behind the recentering,
//!
//! ```text
//! x·n + tH(n) = x·m + tH(m) + (x + 2t·m̄)·(n − m) + tH(n − m),
//! ```
//!
//! with `m̄ = (m₁, −m₂)` the reflected dual, shows the recentered field is
//! the original one composed with a unimodular modulation and the measure
//! preserving change of variables `x ↦ x + 2t·m̄`; space-time norms over a
//! full period are therefore invariant, which is verified here through the
//! exact frequency-space `L⁴` identity rather than grid resampling.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::spectrum::{FourierCoeffs, FreqPoint};

/// Dispersion symbol of the linear flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    /// `H(n) = n₁² − n₂²`
    Hyperbolic,
    /// `|n|² = n₁² + n₂²`
    Elliptic,
}

impl Symbol {
    pub fn value(self, n: FreqPoint) -> i64 {
        match self {
            Symbol::Hyperbolic => n.hyperbolic_level(),
            Symbol::Elliptic => n.norm_sq(),
        }
    }
}

impl std::fmt::Display for Symbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Symbol::Hyperbolic => "hyperbolic",
            Symbol::Elliptic => "elliptic",
        })
    }
}

/// Evolve under the linear semigroup: each amplitude picks up
/// `e^{−2πi·symbol(n)·t}`; the support is unchanged.
///
/// ```
/// use hnls::propagator::{evolve_linear, Symbol};
/// use hnls::spectrum::{fp, FourierCoeffs};
/// use num_complex::Complex64;
///
/// // H((3,2)) = 5, so a tenth of a period rotates by e^{−πi} = −1.
/// let mode = FourierCoeffs::from_modes([(fp(3, 2), Complex64::new(1.0, 0.0))]);
/// let turned = evolve_linear(&mode, 0.1, Symbol::Hyperbolic);
/// assert!((turned.get(fp(3, 2)) + Complex64::new(1.0, 0.0)).norm() < 1e-14);
/// ```
pub fn evolve_linear(coeffs: &FourierCoeffs, t: f64, symbol: Symbol) -> FourierCoeffs {
    coeffs.map_amplitudes(|n, c| c * phase_factor(symbol.value(n), t))
}

/// The per-mode phase factor `e^{−2πi·level·t}`, shared with the solver's
/// linear substep so the two agree bit for bit.
#[inline]
pub(crate) fn phase_factor(level: i64, t: f64) -> Complex64 {
    // level = 0 must give exactly 1 (the diagonal is a fixed point).
    if level == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::from_polar(1.0, -TAU * level as f64 * t)
    }
}

/// Sharp projector onto the translated box `a + (−N, N]²`; amplitudes
/// outside are dropped. Idempotent, and the projections over a disjoint
/// tiling reassemble the field exactly.
pub fn project_box(coeffs: &FourierCoeffs, a: FreqPoint, half_width: u32) -> FourierCoeffs {
    let n = half_width as i64;
    let keep = coeffs
        .iter()
        .filter(|(p, _)| {
            let d1 = p.n1 - a.n1;
            let d2 = p.n2 - a.n2;
            -n < d1 && d1 <= n && -n < d2 && d2 <= n
        })
        .collect::<Vec<_>>();
    crate::spectrum::FourierCoeffs::with_half_width(coeffs.half_width(), keep)
        .expect("projection cannot leave the original box")
}

/// Galilean recentering: translate the spectrum by `−m`, so a field
/// supported in `m + (−N, N]²` becomes supported in `(−N, N]²`.
pub fn recentre(coeffs: &FourierCoeffs, m: FreqPoint) -> FourierCoeffs {
    FourierCoeffs::from_modes(coeffs.iter().map(|(n, c)| (n - m, c)))
}

/// The reflected dual `m̄ = (m₁, −m₂)`; an involution, and the vector that
/// factors the hyperbolic symbol as `H(n) = n · n̄`.
pub fn dual_reflect(m: FreqPoint) -> FreqPoint {
    FreqPoint::new(m.n1, -m.n2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::fp;
    use proptest::prelude::*;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn max_rel_diff(a: &FourierCoeffs, b: &FourierCoeffs) -> f64 {
        let scale = a.l2_norm().max(b.l2_norm()).max(1e-300);
        let mut worst = 0.0f64;
        for (n, c) in a.iter() {
            worst = worst.max((c - b.get(n)).norm() / scale);
        }
        for (n, c) in b.iter() {
            worst = worst.max((c - a.get(n)).norm() / scale);
        }
        worst
    }

    #[test]
    fn diagonal_data_is_fixed_exactly() {
        let phi = FourierCoeffs::from_modes((-4i64..=4).map(|k| (fp(k, k), one())));
        for t in [0.0, 0.37, 1.0, 12.5] {
            let evolved = evolve_linear(&phi, t, Symbol::Hyperbolic);
            for (n, c) in phi.iter() {
                assert_eq!(evolved.get(n), c, "diagonal mode moved at t = {t}");
            }
        }
    }

    #[test]
    fn unit_mode_phase() {
        // H((3,2)) = 5, t = 1/10: phase e^{−πi} = −1.
        let coeffs = FourierCoeffs::from_modes([(fp(3, 2), one())]);
        let evolved = evolve_linear(&coeffs, 0.1, Symbol::Hyperbolic);
        assert!((evolved.get(fp(3, 2)) - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn integer_time_is_identity() {
        let coeffs = FourierCoeffs::from_modes([
            (fp(3, 2), Complex64::new(0.3, -0.4)),
            (fp(-1, 5), Complex64::new(0.0, 2.0)),
        ]);
        for t in [1.0, 2.0, 7.0] {
            let evolved = evolve_linear(&coeffs, t, Symbol::Hyperbolic);
            assert!(max_rel_diff(&coeffs, &evolved) <= 1e-12);
        }
    }

    #[test]
    fn elliptic_and_hyperbolic_agree_on_axis() {
        // On {n₂ = 0} both symbols equal n₁².
        let coeffs = FourierCoeffs::from_modes(
            (-5i64..=5).map(|n1| (fp(n1, 0), Complex64::new(0.1 * n1 as f64, 0.7))),
        );
        let t = 0.231;
        let hyp = evolve_linear(&coeffs, t, Symbol::Hyperbolic);
        let ell = evolve_linear(&coeffs, t, Symbol::Elliptic);
        assert!(max_rel_diff(&hyp, &ell) <= 1e-15);
    }

    #[test]
    fn projector_identity_and_restriction() {
        let coeffs = FourierCoeffs::from_modes([(fp(0, 0), one()), (fp(5, 5), one())]);
        let full = project_box(&coeffs, fp(0, 0), 8);
        assert_eq!(full.support_len(), 2);
        let small = project_box(&coeffs, fp(0, 0), 2);
        assert_eq!(small.support_len(), 1);
        assert_eq!(small.get(fp(0, 0)), one());
        // Idempotent.
        let twice = project_box(&small, fp(0, 0), 2);
        assert_eq!(twice, small);
    }

    #[test]
    fn tiling_reassembles_field() {
        let mut rng = crate::rng::SplitMix64::new(17);
        let modes: Vec<_> = (-7i64..=8)
            .flat_map(|n1| (-7i64..=8).map(move |n2| (n1, n2)))
            .map(|(n1, n2)| {
                (
                    fp(n1, n2),
                    Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5),
                )
            })
            .collect();
        let coeffs = FourierCoeffs::with_half_width(8, modes).unwrap();
        // Disjoint 2x2-half-width tiles centered on the lattice 4ℤ².
        let tile = 2u32;
        let mut sum = FourierCoeffs::new(8);
        for c1 in (-8i64..=8).step_by(4) {
            for c2 in (-8i64..=8).step_by(4) {
                for (n, c) in project_box(&coeffs, fp(c1, c2), tile).iter() {
                    sum.insert(n, c).unwrap();
                }
            }
        }
        assert!(max_rel_diff(&sum, &coeffs) == 0.0);
    }

    #[test]
    fn recentre_moves_support() {
        let coeffs = FourierCoeffs::from_modes([(fp(4, 1), one())]);
        let centered = recentre(&coeffs, fp(4, 1));
        assert_eq!(centered.support_len(), 1);
        assert_eq!(centered.get(fp(0, 0)), one());
        let unmoved = recentre(&coeffs, fp(0, 0));
        assert_eq!(unmoved.get(fp(4, 1)), one());
    }

    #[test]
    fn dual_reflect_examples() {
        assert_eq!(dual_reflect(fp(3, -2)), fp(3, 2));
    }

    proptest! {
        #[test]
        fn unitarity(t in -5.0f64..5.0, seed in any::<u64>()) {
            let mut rng = crate::rng::SplitMix64::new(seed);
            let modes: Vec<_> = (0..25)
                .map(|_| {
                    let n1 = (rng.next_u64() % 21) as i64 - 10;
                    let n2 = (rng.next_u64() % 21) as i64 - 10;
                    (fp(n1, n2), Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5))
                })
                .collect();
            let coeffs = FourierCoeffs::from_modes(modes);
            for symbol in [Symbol::Hyperbolic, Symbol::Elliptic] {
                let evolved = evolve_linear(&coeffs, t, symbol);
                let rel = (evolved.l2_norm() - coeffs.l2_norm()).abs()
                    / coeffs.l2_norm().max(1e-300);
                prop_assert!(rel <= 1e-14);
            }
        }

        #[test]
        fn group_law(t1 in -2.0f64..2.0, t2 in -2.0f64..2.0) {
            let coeffs = FourierCoeffs::from_modes([
                (fp(2, -3), Complex64::new(0.5, 0.1)),
                (fp(-6, 1), Complex64::new(-0.2, 0.9)),
                (fp(0, 4), Complex64::new(0.0, -1.0)),
            ]);
            let two_step = evolve_linear(
                &evolve_linear(&coeffs, t1, Symbol::Hyperbolic),
                t2,
                Symbol::Hyperbolic,
            );
            let one_step = evolve_linear(&coeffs, t1 + t2, Symbol::Hyperbolic);
            prop_assert!(max_rel_diff(&two_step, &one_step) <= 1e-12);
        }

        #[test]
        fn dual_reflect_involution(n1 in -100i64..100, n2 in -100i64..100) {
            let n = fp(n1, n2);
            prop_assert_eq!(dual_reflect(dual_reflect(n)), n);
        }

        #[test]
        fn symbol_factors_through_dual(n1 in -1000i64..1000, n2 in -1000i64..1000) {
            // H(n) = n · n̄
            let n = fp(n1, n2);
            let nd = dual_reflect(n);
            prop_assert_eq!(
                Symbol::Hyperbolic.value(n),
                n.n1 * nd.n1 + n.n2 * nd.n2
            );
        }
    }
}
