//! Energy-drift study for the split-step solver: tabulates the hyperbolic
//! energy error |E(T) − E(0)| at two step sizes and the resulting halving
//! ratio (≈ 4 for a second-order method).
//!
//! Run: `cargo run -p hnls --example energy_drift`

use num_complex::Complex64;

use hnls::nls::{evolve, SolverConfig};
use hnls::resonance::Ensemble;
use hnls::rng::stream_seed;

fn main() {
    println!("grid  amp   T     dt_coarse  seed  drift_coarse  drift_fine   ratio");
    for grid_m in [16usize, 32] {
        for amp in [0.4] {
            for t_end in [0.24] {
                for dt in [1.2e-2, 8e-3, 6e-3, 4e-3] {
                    for seed in 0..5u64 {
                        let u0 = Ensemble::Gaussian
                            .generate(2, stream_seed(0x5EED_ACCE, 88, seed))
                            .scale(Complex64::new(amp, 0.0));
                        let drift = |dt: f64| {
                            let cfg = SolverConfig {
                                grid_m,
                                dt,
                                t_end,
                                mu: 1.0,
                                record_every: usize::MAX,
                                ..SolverConfig::default()
                            };
                            let (_, trace) = evolve(&u0, &cfg).unwrap();
                            (trace.records.last().unwrap().energy - trace.records[0].energy).abs()
                        };
                        let coarse = drift(dt);
                        let fine = drift(dt / 2.0);
                        println!(
                            "{grid_m:<5} {amp:<5} {t_end:<5} {dt:<10} {seed:<5} {coarse:<13.4e} {fine:<12.4e} {:.3}",
                            coarse / fine
                        );
                    }
                }
            }
        }
    }
}
