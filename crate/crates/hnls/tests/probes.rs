//! Recorded experiments and spot checks that complement the acceptance
//! suite: tabulations the analysis only bounds loosely, plus a few
//! large-size spot checks. Run with `--nocapture` to see the recorded
//! values.

use num_complex::Complex64;

use hnls::extremals::{make_phi, DiagonalSpec};
use hnls::lattice;
use hnls::nls::{self, SolverConfig};
use hnls::propagator::{evolve_linear, Symbol};
use hnls::resonance::{
    bilinear_l2_conjugated, bilinear_l2_exact, l4_spacetime_exact, strichartz_sweep,
    BilinearSign, Ensemble, SweepConfig,
};
use hnls::rng::SplitMix64;
use hnls::spectrum::{analyze, fp, FourierCoeffs};

/// Dyadic sweep of the largest nonzero-level count. The counts are exact
/// integers from the exhaustive shell sweep and are frozen here; the ratio
/// to N^{1/4} is recorded, not asserted — at desk scale it still grows
/// (the divisor function outruns any fixed small power until far beyond
/// this range), even though the count is O(N^ε) in the limit.
#[test]
fn dyadic_max_count_tabulation() {
    const FROZEN_MAXIMA: [u64; 13] = [2, 4, 4, 8, 12, 20, 28, 40, 56, 80, 116, 160, 216];
    let maxima = lattice::max_counts_up_to(4096);
    println!("k     N  max #A_l   max / N^(1/4)");
    for k in 0..=12u32 {
        let n = 1u32 << k;
        let (level, count) = maxima[(n - 1) as usize];
        assert_eq!(count, FROZEN_MAXIMA[k as usize], "N = {n}");
        // The witness stays within its own divisor budget.
        assert!(count <= 2 * lattice::divisor_count(level.unsigned_abs()));
        println!(
            "{k:<3} {n:>5}  {count:>6}     {:.4}",
            count as f64 / (n as f64).powf(0.25)
        );
    }
}

/// Random unimodular fields never beat the extremizer: the recorded factor
/// max_ratio / extremizer_ratio stays below 1 from N = 4 on.
#[test]
fn unimodular_trials_stay_below_the_extremizer() {
    let report = strichartz_sweep(&SweepConfig {
        n_list: vec![4, 8, 16, 32],
        trials: 8,
        seed: 31415,
        ensemble: Ensemble::Unimodular,
        symbol: Symbol::Hyperbolic,
    })
    .unwrap();
    let mut worst = 0.0f64;
    for row in &report.rows {
        worst = worst.max(row.max_ratio / row.extremizer_ratio);
    }
    println!("recorded max(random ratio / extremizer ratio) = {worst:.4}");
    assert!(worst <= 1.0, "factor {worst}");
}

/// One large round trip: synthesize/analyze on the full box of half-width
/// 128 reproduces random coefficients through the FFT pair.
#[test]
fn round_trip_at_half_width_128() {
    let mut rng = SplitMix64::new(0xB16B00);
    let n = 128i64;
    let modes: Vec<_> = (1 - n..=n)
        .flat_map(|n1| (1 - n..=n).map(move |n2| (n1, n2)))
        .map(|(n1, n2)| {
            (
                fp(n1, n2),
                Complex64::new(rng.next_f64() - 0.5, rng.next_f64() - 0.5),
            )
        })
        .collect();
    let coeffs = FourierCoeffs::with_half_width(128, modes).unwrap();
    let grid = coeffs.synthesize(256).unwrap();
    let back = analyze(&grid, 128).unwrap();
    let scale = coeffs.l2_norm();
    let mut worst = 0.0f64;
    for (freq, want) in coeffs.iter() {
        worst = worst.max((back.get(freq) - want).norm() / scale);
    }
    assert!(worst <= 1e-12, "round-trip error {worst}");
}

/// Data-map continuity probe: for u0 = δ·g with g a fixed unit-H^{0.75}
/// field, the solution map is locally Lipschitz at the origin in H^{0.75}
/// at desk scale — the amplification ratios ‖u(T)‖/‖u0‖ are recorded and
/// agree across δ to the cubic correction.
#[test]
fn data_map_continuity_probe() {
    let mut rng = SplitMix64::new(2718);
    let raw = FourierCoeffs::from_modes((-3i64..=3).flat_map(|n1| {
        let re = rng.next_f64() - 0.5;
        (-3i64..=3).map(move |n2| (fp(n1, n2), Complex64::new(re, 0.3 * (n2 as f64))))
    }));
    let g = raw.scale(Complex64::new(1.0 / raw.hs_norm(0.75), 0.0));
    assert!((g.hs_norm(0.75) - 1.0).abs() < 1e-12);

    let amplification = |delta: f64| {
        let u0 = g.scale(Complex64::new(delta, 0.0));
        let cfg = SolverConfig {
            grid_m: 16,
            dt: 1e-2,
            t_end: 0.5,
            mu: 1.0,
            record_every: 100,
            sobolev_index: 0.75,
            ..SolverConfig::default()
        };
        let (state, _) = nls::evolve(&u0, &cfg).unwrap();
        state.hs_norm(0.75) / u0.hs_norm(0.75)
    };
    let ratio_large = amplification(1e-2);
    let ratio_small = amplification(1e-3);
    println!("amplification ratios: δ=1e-2 → {ratio_large:.8}, δ=1e-3 → {ratio_small:.8}");
    // The linearization is unitary in each mode only up to the Sobolev
    // weight redistribution; both ratios sit near 1 and differ only at the
    // size of the cubic correction.
    assert!((0.9..=1.1).contains(&ratio_large));
    assert!((0.9..=1.1).contains(&ratio_small));
    assert!(
        (ratio_large - ratio_small).abs() <= 1e-3,
        "ratios diverge: {ratio_large} vs {ratio_small}"
    );
}

/// Independent quadrature oracle for the bilinear pairings: sample the
/// product of the two evolved waves on grids resolving `|product|²` in
/// space and time, and integrate. Exact for trigonometric polynomials,
/// and blind to the binning kernel's sign bookkeeping.
#[test]
fn bilinear_pairings_match_quadrature_oracle() {
    let c1 = Ensemble::Gaussian.generate(3, 101);
    let c2 = Ensemble::Gaussian.generate(2, 202);
    let m_x = 4 * (3 + 2) + 1;
    let m_t = 8 * (9 + 4) + 1;

    let oracle = |sign1: f64, conj2: bool| -> f64 {
        let mut total = 0.0;
        for step in 0..m_t {
            let t = step as f64 / m_t as f64;
            let w1 = evolve_linear(&c1, sign1 * t, Symbol::Hyperbolic)
                .synthesize(m_x)
                .unwrap();
            let w2 = evolve_linear(&c2, t, Symbol::Hyperbolic)
                .synthesize(m_x)
                .unwrap();
            let mut sum = 0.0;
            for (a, b) in w1.samples().iter().zip(w2.samples()) {
                let b = if conj2 { b.conj() } else { *b };
                sum += (a * b).norm_sqr();
            }
            total += sum / (m_x * m_x) as f64;
        }
        (total / m_t as f64).sqrt()
    };

    let plus = bilinear_l2_exact(&c1, &c2, BilinearSign::Plus);
    assert!((plus - oracle(1.0, false)).abs() <= 1e-10 * plus);

    let minus = bilinear_l2_exact(&c1, &c2, BilinearSign::Minus);
    assert!((minus - oracle(-1.0, false)).abs() <= 1e-10 * minus);

    let conj = bilinear_l2_conjugated(&c1, &c2);
    assert!((conj - oracle(1.0, true)).abs() <= 1e-10 * conj);

    // The two signs genuinely differ on generic data.
    assert!((plus - minus).abs() > 1e-3 * plus);
}

/// The space-time L⁴ of the evolved diagonal family equals the spatial L⁴
/// of the data — the fixed-point identity behind the sharpness example.
#[test]
fn extremizer_space_time_equals_spatial() {
    for n in [2u32, 16, 64] {
        let phi = make_phi(&DiagonalSpec::unit(n));
        let spatial = phi
            .synthesize(hnls::spectrum::min_exact_grid(n, 4))
            .unwrap()
            .lp_norm(4)
            .unwrap();
        let space_time = l4_spacetime_exact(&phi);
        assert!(
            (space_time - spatial).abs() <= 1e-10 * spatial,
            "N = {n}: {space_time} vs {spatial}"
        );
    }
}
