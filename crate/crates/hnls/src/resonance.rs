//! Exact space-time norms of free waves by resonance-pair binning.
//!
//! A product of two free waves expands over ordered frequency pairs,
//!
//! ```text
//! e^{it□}f · e^{it□}g = Σ_{n,n'} f̂(n) ĝ(n') e^{2πi[(n+n')·x − (H(n)+H(n'))t]},
//! ```
//!
//! so grouping pairs by the output frequency `a = n + n'` and the total
//! phase level `k = H(n) + H(n')` turns Plancherel on `[0,1] × T²` into a
//! finite sum: the squared `L²` norm is `Σ_{a,k} |Σ_{pairs} f̂(n) ĝ(n')|²`,
//! with no quadrature error at all. `‖e^{it□}f‖_{L⁴}` is the square root of
//! that quantity at `g = f`, and the bilinear `L²` estimates come from the
//! same kernel with a sign or a conjugation folded into the key.
//!
//! The pair loop is the performance-critical kernel, `O(S²)` in the support
//! size `S`. Two strategies sit behind one dispatch:
//!
//! * supports that fill their bounding rectangle (the random-box ensembles)
//!   are enumerated per output frequency through rectangle intersections,
//!   with a flat scratch accumulator over the phase level — data-parallel
//!   over output rows, partial sums merged in fixed row order;
//! * general sparse supports run in fixed-size chunks of the first index in
//!   lattice order, each chunk binning into an ordered map, merged in chunk
//!   order.
//!
//! Both paths accumulate and reduce in a deterministic order, so results do
//! not depend on the worker count.

use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::extremals::{make_phi, DiagonalSpec};
use crate::fit::{log_log_fit, LineFit};
use crate::propagator::Symbol;
use crate::rng::{stream_seed, SplitMix64};
use crate::spectrum::{fp, FourierCoeffs, FreqPoint};

/// Sign of the first propagator in the bilinear product
/// `e^{±it□}φ₁ · e^{it□}φ₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BilinearSign {
    Plus,
    Minus,
}

/// `‖e^{it□}f‖_{L⁴([0,1]×T²)}`, exact, with the hyperbolic symbol.
///
/// ```
/// use hnls::extremals::{make_phi, phi_l4_closed_form, DiagonalSpec};
/// use hnls::resonance::l4_spacetime_exact;
///
/// // The flow fixes the diagonal family, so its space-time L⁴ equals the
/// // spatial closed form — two independent computations.
/// let phi = make_phi(&DiagonalSpec::unit(8));
/// let closed = phi_l4_closed_form(8);
/// assert!((l4_spacetime_exact(&phi) - closed).abs() < 1e-12 * closed);
/// ```
pub fn l4_spacetime_exact(coeffs: &FourierCoeffs) -> f64 {
    l4_spacetime_exact_with(coeffs, Symbol::Hyperbolic)
}

/// `L⁴` of the free wave under either symbol; the elliptic variant is the
/// control group for the sweep experiments.
pub fn l4_spacetime_exact_with(coeffs: &FourierCoeffs, symbol: Symbol) -> f64 {
    let kernel = PairKernel {
        symbol,
        eps_space: 1,
        sigma1: 1,
        sigma2: 1,
        conj_second: false,
    };
    pair_l2_sq(coeffs, coeffs, &kernel).sqrt().sqrt()
}

/// Exact `‖e^{±it□}φ₁ · e^{it□}φ₂‖_{L²([0,1]×T²)}`, the conjugation-free
/// product, binned by `(a = n₁+n₂, k = ±H(n₁)+H(n₂))`.
pub fn bilinear_l2_exact(c1: &FourierCoeffs, c2: &FourierCoeffs, sign: BilinearSign) -> f64 {
    let kernel = PairKernel {
        symbol: Symbol::Hyperbolic,
        eps_space: 1,
        sigma1: match sign {
            BilinearSign::Plus => 1,
            BilinearSign::Minus => -1,
        },
        sigma2: 1,
        conj_second: false,
    };
    pair_l2_sq(c1, c2, &kernel).sqrt()
}

/// Exact `‖e^{it□}φ₁ · conj(e^{it□}φ₂)‖_{L²}`: the pairing that appears in
/// the `|u|²u` nonlinearity, binned by `(a = n₁−n₂, k = H(n₁)−H(n₂))`.
pub fn bilinear_l2_conjugated(c1: &FourierCoeffs, c2: &FourierCoeffs) -> f64 {
    let kernel = PairKernel {
        symbol: Symbol::Hyperbolic,
        eps_space: -1,
        sigma1: 1,
        sigma2: -1,
        conj_second: true,
    };
    pair_l2_sq(c1, c2, &kernel).sqrt()
}

/// Almost-orthogonality defect of the box decomposition: the ratio of
/// `‖Σ_a e^{it□}P_a φ₁ · e^{it□}φ₂‖²` to `Σ_a ‖e^{it□}P_a φ₁ · e^{it□}φ₂‖²`
/// over the disjoint tiling of `ℤ²` by boxes `a + (−N₂, N₂]²` centered on
/// `2N₂·ℤ²`. Both sides via exact binning; a single-tile field gives
/// exactly 1.
pub fn orthogonality_defect(c1: &FourierCoeffs, c2: &FourierCoeffs, n2: u32) -> Result<f64> {
    if c1.is_empty() || c2.is_empty() {
        return Err(Error::ZeroField);
    }
    let kernel = PairKernel {
        symbol: Symbol::Hyperbolic,
        eps_space: 1,
        sigma1: 1,
        sigma2: 1,
        conj_second: false,
    };
    let numerator = pair_l2_sq(c1, c2, &kernel);

    let side = 2 * n2 as i64;
    let tile_of = |v: i64| (v + n2 as i64 - 1).div_euclid(side);
    let mut tiles: BTreeMap<(i64, i64), Vec<(FreqPoint, Complex64)>> = BTreeMap::new();
    for (n, c) in c1.iter() {
        tiles
            .entry((tile_of(n.n1), tile_of(n.n2)))
            .or_default()
            .push((n, c));
    }
    let mut denominator = 0.0;
    for modes in tiles.into_values() {
        let tile_field = FourierCoeffs::from_modes(modes);
        denominator += pair_l2_sq(&tile_field, c2, &kernel);
    }
    Ok(numerator / denominator)
}

#[derive(Debug, Clone, Copy)]
struct PairKernel {
    symbol: Symbol,
    /// `a = n₁ + eps_space · n₂`
    eps_space: i64,
    /// `k = sigma1·L(n₁) + sigma2·L(n₂)`
    sigma1: i64,
    sigma2: i64,
    conj_second: bool,
}

/// `Σ_{a,k} |Σ_{pairs in bin} value(n₁, n₂)|²` over all ordered support
/// pairs.
fn pair_l2_sq(c1: &FourierCoeffs, c2: &FourierCoeffs, kernel: &PairKernel) -> f64 {
    if c1.is_empty() || c2.is_empty() {
        return 0.0;
    }
    match (Rect::exact_cover(c1), Rect::exact_cover(c2)) {
        (Some(r1), Some(r2)) => rect_pair_sq(c1, &r1, c2, &r2, kernel),
        _ => sparse_pair_sq(c1, c2, kernel),
    }
}

/// Inclusive coordinate rectangle.
#[derive(Debug, Clone, Copy)]
struct Rect {
    lo1: i64,
    hi1: i64,
    lo2: i64,
    hi2: i64,
}

impl Rect {
    /// The bounding rectangle, provided the support fills it completely.
    fn exact_cover(coeffs: &FourierCoeffs) -> Option<Rect> {
        let (lo, hi) = coeffs.bounding_box()?;
        let rect = Rect {
            lo1: lo.n1,
            hi1: hi.n1,
            lo2: lo.n2,
            hi2: hi.n2,
        };
        (rect.area() == coeffs.support_len() as u64).then_some(rect)
    }

    fn area(&self) -> u64 {
        ((self.hi1 - self.lo1 + 1) as u64) * ((self.hi2 - self.lo2 + 1) as u64)
    }

    fn negated(&self) -> Rect {
        Rect {
            lo1: -self.hi1,
            hi1: -self.lo1,
            lo2: -self.hi2,
            hi2: -self.lo2,
        }
    }
}

/// Range of `v²` over an integer interval.
fn square_range(lo: i64, hi: i64) -> (i64, i64) {
    let max = (lo * lo).max(hi * hi);
    let min = if lo <= 0 && 0 <= hi {
        0
    } else {
        (lo * lo).min(hi * hi)
    };
    (min, max)
}

/// Range of the symbol over a rectangle.
fn symbol_range(rect: &Rect, symbol: Symbol) -> (i64, i64) {
    let (min1, max1) = square_range(rect.lo1, rect.hi1);
    let (min2, max2) = square_range(rect.lo2, rect.hi2);
    match symbol {
        Symbol::Hyperbolic => (min1 - max2, max1 - min2),
        Symbol::Elliptic => (min1 + min2, max1 + max2),
    }
}

fn scaled_range((lo, hi): (i64, i64), sigma: i64) -> (i64, i64) {
    if sigma >= 0 {
        (sigma * lo, sigma * hi)
    } else {
        (sigma * hi, sigma * lo)
    }
}

struct Scratch {
    bins: Vec<Complex64>,
    touched: Vec<usize>,
}

fn rect_pair_sq(
    c1: &FourierCoeffs,
    r1: &Rect,
    c2: &FourierCoeffs,
    r2: &Rect,
    kernel: &PairKernel,
) -> f64 {
    // Dense row-major copies over the two rectangles.
    let dense = |c: &FourierCoeffs, r: &Rect| -> Vec<Complex64> {
        let w2 = (r.hi2 - r.lo2 + 1) as usize;
        let mut out = vec![Complex64::new(0.0, 0.0); r.area() as usize];
        for (n, v) in c.iter() {
            out[((n.n1 - r.lo1) as usize) * w2 + (n.n2 - r.lo2) as usize] = v;
        }
        out
    };
    let d1 = dense(c1, r1);
    let d2 = dense(c2, r2);
    let w1 = (r1.hi2 - r1.lo2 + 1) as usize;
    let w2 = (r2.hi2 - r2.lo2 + 1) as usize;

    // Output frequencies range over the Minkowski sum of r1 and ±r2.
    let r2s = if kernel.eps_space == 1 {
        *r2
    } else {
        r2.negated()
    };
    let (k1_lo, k1_hi) = scaled_range(symbol_range(r1, kernel.symbol), kernel.sigma1);
    let (k2_lo, k2_hi) = scaled_range(symbol_range(r2, kernel.symbol), kernel.sigma2);
    let k_min = k1_lo + k2_lo;
    let k_span = (k1_hi + k2_hi - k_min + 1) as usize;

    let a1_range: Vec<i64> = ((r1.lo1 + r2s.lo1)..=(r1.hi1 + r2s.hi1)).collect();
    let row_sums: Vec<f64> = a1_range
        .par_iter()
        .map_init(
            || Scratch {
                bins: vec![Complex64::new(0.0, 0.0); k_span],
                touched: Vec::new(),
            },
            |scratch, &a1| {
                let mut row_total = 0.0;
                // n₁ first coordinate bounds for this output row.
                let m1_lo = r1.lo1.max(a1 - r2s.hi1);
                let m1_hi = r1.hi1.min(a1 - r2s.lo1);
                for a2 in (r1.lo2 + r2s.lo2)..=(r1.hi2 + r2s.hi2) {
                    let m2_lo = r1.lo2.max(a2 - r2s.hi2);
                    let m2_hi = r1.hi2.min(a2 - r2s.lo2);
                    if m2_lo > m2_hi {
                        continue;
                    }
                    for m1 in m1_lo..=m1_hi {
                        let p2_1 = kernel.eps_space * (a1 - m1);
                        let level1 = kernel.sigma1 * kernel.symbol.value(fp(m1, 0));
                        for m2 in m2_lo..=m2_hi {
                            let p2_2 = kernel.eps_space * (a2 - m2);
                            let v1 = d1[((m1 - r1.lo1) as usize) * w1
                                + (m2 - r1.lo2) as usize];
                            let v2 = d2[((p2_1 - r2.lo1) as usize) * w2
                                + (p2_2 - r2.lo2) as usize];
                            let v2 = if kernel.conj_second { v2.conj() } else { v2 };
                            // level1 carries sigma1·m1²; finish both symbols.
                            let k = level1
                                + kernel.sigma1
                                    * match kernel.symbol {
                                        Symbol::Hyperbolic => -(m2 * m2),
                                        Symbol::Elliptic => m2 * m2,
                                    }
                                + kernel.sigma2 * kernel.symbol.value(fp(p2_1, p2_2));
                            let idx = (k - k_min) as usize;
                            if scratch.bins[idx] == Complex64::new(0.0, 0.0) {
                                scratch.touched.push(idx);
                            }
                            scratch.bins[idx] += v1 * v2;
                        }
                    }
                    for &idx in &scratch.touched {
                        row_total += scratch.bins[idx].norm_sqr();
                        scratch.bins[idx] = Complex64::new(0.0, 0.0);
                    }
                    scratch.touched.clear();
                }
                row_total
            },
        )
        .collect();
    row_sums.iter().sum()
}

/// Fixed chunk length for the sparse pair loop; part of the determinism
/// contract (chunks are cut by the first index in lattice order).
const SPARSE_CHUNK: usize = 128;

fn sparse_pair_sq(c1: &FourierCoeffs, c2: &FourierCoeffs, kernel: &PairKernel) -> f64 {
    let support1: Vec<(FreqPoint, Complex64)> = c1.iter().collect();
    let support2: Vec<(FreqPoint, Complex64)> = c2.iter().collect();
    let partials: Vec<BTreeMap<(i64, i64, i64), Complex64>> = support1
        .par_chunks(SPARSE_CHUNK)
        .map(|chunk| {
            let mut bins: BTreeMap<(i64, i64, i64), Complex64> = BTreeMap::new();
            for &(n1, v1) in chunk {
                let level1 = kernel.sigma1 * kernel.symbol.value(n1);
                for &(n2, v2) in &support2 {
                    let a1 = n1.n1 + kernel.eps_space * n2.n1;
                    let a2 = n1.n2 + kernel.eps_space * n2.n2;
                    let k = level1 + kernel.sigma2 * kernel.symbol.value(n2);
                    let v2 = if kernel.conj_second { v2.conj() } else { v2 };
                    *bins
                        .entry((a1, a2, k))
                        .or_insert(Complex64::new(0.0, 0.0)) += v1 * v2;
                }
            }
            bins
        })
        .collect();
    let mut merged: BTreeMap<(i64, i64, i64), Complex64> = BTreeMap::new();
    for partial in partials {
        for (key, value) in partial {
            *merged.entry(key).or_insert(Complex64::new(0.0, 0.0)) += value;
        }
    }
    merged.values().map(|v| v.norm_sqr()).sum()
}

/// Random-field ensemble for the sweep experiments. Amplitudes are drawn in
/// lattice order over the full box `(−N, N]²` from a per-field SplitMix64
/// stream (see [`crate::rng`]), so ensembles are reproducible across
/// machines and languages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ensemble {
    /// Independent phases `e^{2πiθ}`, θ uniform.
    Unimodular,
    /// Independent standard complex Gaussians `(g₁ + i·g₂)/√2` by
    /// Box–Muller.
    Gaussian,
    /// The deterministic diagonal family; every trial is `φ_N`.
    Extremizer,
}

impl Ensemble {
    pub fn generate(self, n: u32, seed: u64) -> FourierCoeffs {
        assert!(n >= 1);
        if self == Ensemble::Extremizer {
            return make_phi(&DiagonalSpec::unit(n));
        }
        let mut rng = SplitMix64::new(seed);
        let ni = n as i64;
        let mut modes = Vec::with_capacity((2 * n as usize) * (2 * n as usize));
        for n1 in (1 - ni)..=ni {
            for n2 in (1 - ni)..=ni {
                let amp = match self {
                    Ensemble::Unimodular => {
                        Complex64::from_polar(1.0, std::f64::consts::TAU * rng.next_f64())
                    }
                    Ensemble::Gaussian => {
                        let radius = (-2.0 * rng.next_f64_open().ln()).sqrt();
                        let angle = std::f64::consts::TAU * rng.next_f64();
                        Complex64::from_polar(radius / 2f64.sqrt(), angle)
                    }
                    Ensemble::Extremizer => unreachable!(),
                };
                modes.push((fp(n1, n2), amp));
            }
        }
        FourierCoeffs::with_half_width(n, modes).expect("modes fill the box")
    }
}

impl std::fmt::Display for Ensemble {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Ensemble::Unimodular => "unimodular",
            Ensemble::Gaussian => "gaussian",
            Ensemble::Extremizer => "extremizer",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub n_list: Vec<u32>,
    pub trials: u32,
    pub seed: u64,
    pub ensemble: Ensemble,
    pub symbol: Symbol,
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub n: u32,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    /// Ratio of the unit diagonal family under the same symbol.
    pub extremizer_ratio: f64,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub rows: Vec<SweepRow>,
    /// Least-squares fit of `log(max_ratio)` against `log N`.
    pub fit: LineFit,
}

impl SweepReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,ensemble,trials,max_ratio,mean_ratio,extremizer_ratio\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.n,
                self.config.ensemble,
                self.config.trials,
                row.max_ratio,
                row.mean_ratio,
                row.extremizer_ratio
            ));
        }
        out
    }
}

/// Per-`N` Strichartz ratios of seeded random fields, with the extremizer's
/// ratio alongside, and a log-log slope fit of the max ratio. Deterministic
/// given the seed: trial `j` at size `n` draws from the sub-stream
/// `stream_seed(seed, n, j)`, regardless of thread count or trial order.
pub fn strichartz_sweep(config: &SweepConfig) -> Result<SweepReport> {
    if config.trials < 1 {
        return Err(Error::InvalidConfig("trials must be >= 1".into()));
    }
    if config.n_list.is_empty() || config.n_list.iter().any(|&n| n < 1) {
        return Err(Error::InvalidConfig(
            "sweep needs a nonempty list of box sizes >= 1".into(),
        ));
    }
    let rows: Vec<SweepRow> = config
        .n_list
        .iter()
        .map(|&n| {
            let ratios: Vec<f64> = (0..config.trials)
                .into_par_iter()
                .map(|trial| {
                    let field = config
                        .ensemble
                        .generate(n, stream_seed(config.seed, n as u64, trial as u64));
                    l4_spacetime_exact_with(&field, config.symbol) / field.l2_norm()
                })
                .collect();
            let max_ratio = ratios.iter().copied().fold(f64::MIN, f64::max);
            let mean_ratio = ratios.iter().sum::<f64>() / ratios.len() as f64;
            let phi = make_phi(&DiagonalSpec::unit(n));
            let extremizer_ratio =
                l4_spacetime_exact_with(&phi, config.symbol) / phi.l2_norm();
            SweepRow {
                n,
                max_ratio,
                mean_ratio,
                extremizer_ratio,
            }
        })
        .collect();
    let points: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.n as f64, r.max_ratio))
        .collect();
    let fit = log_log_fit(&points);
    Ok(SweepReport {
        config: config.clone(),
        rows,
        fit,
    })
}
