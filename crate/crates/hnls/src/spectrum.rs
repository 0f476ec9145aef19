//! Field representations on the 2-torus and their norms.
//!
//! A spatial field is either a sparse map from integer frequencies to complex
//! amplitudes ([`FourierCoeffs`], the representation used by the counting and
//! extremizer work) or a uniform grid of samples ([`GridField`], used by the
//! transform and solver work). The two are connected by [`FourierCoeffs::synthesize`]
//! and [`analyze`], which are exact inverses of one another on band-limited
//! data whenever the grid resolves the frequency box.
//!
//! Conventions, fixed once for the whole crate:
//!
//! * Fourier series `u(x) = Σ_n û(n) e^{2πi n·x}` with `n ∈ ℤ²` and the
//!   torus of side 1, so the analysis kernel is `e^{−2πi x·n}`.
//! * A box of half-width `N` is the half-open square `(−N, N]²`; its `(2N)²`
//!   points are exactly the distinct residues mod `2N` in each coordinate,
//!   which is what makes `analyze ∘ synthesize` the identity at `M = 2N`.
//! * The Sobolev weight is `(1 + |n|²)^{s/2}`, matching the weight in the
//!   `X^{s,b}` norm.

use std::cell::RefCell;
use std::collections::BTreeMap;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// A point of the frequency lattice `ℤ²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreqPoint {
    pub n1: i64,
    pub n2: i64,
}

impl FreqPoint {
    pub const fn new(n1: i64, n2: i64) -> Self {
        Self { n1, n2 }
    }

    /// `|n|² = n₁² + n₂²`, the elliptic symbol.
    pub fn norm_sq(self) -> i64 {
        self.n1 * self.n1 + self.n2 * self.n2
    }

    /// `H(n) = n₁² − n₂²`, the hyperbolic symbol. Vanishes exactly on the
    /// diagonals `n₁ = ±n₂`.
    pub fn hyperbolic_level(self) -> i64 {
        self.n1 * self.n1 - self.n2 * self.n2
    }

    /// Smallest half-width `w ≥ 1` with `self ∈ (−w, w]²`.
    pub fn min_half_width(self) -> u32 {
        fn need(c: i64) -> i64 {
            c.max(1 - c)
        }
        need(self.n1).max(need(self.n2)).max(1) as u32
    }
}

impl std::ops::Add for FreqPoint {
    type Output = FreqPoint;
    fn add(self, rhs: FreqPoint) -> FreqPoint {
        FreqPoint::new(self.n1 + rhs.n1, self.n2 + rhs.n2)
    }
}

impl std::ops::Sub for FreqPoint {
    type Output = FreqPoint;
    fn sub(self, rhs: FreqPoint) -> FreqPoint {
        FreqPoint::new(self.n1 - rhs.n1, self.n2 - rhs.n2)
    }
}

/// Convenience constructor.
pub const fn fp(n1: i64, n2: i64) -> FreqPoint {
    FreqPoint::new(n1, n2)
}

/// A field in frequency space: a finite map from lattice points to complex
/// amplitudes, together with the half-width of a box `(−N, N]²` containing
/// the support. Absent entries are zero, and amplitudes at repeated
/// frequencies accumulate.
///
/// Entries live in a `BTreeMap` so that iteration (and therefore every norm
/// accumulation) runs in lattice order, independent of construction history.
///
/// ```
/// use hnls::spectrum::{analyze, fp, FourierCoeffs};
/// use num_complex::Complex64;
///
/// let field = FourierCoeffs::from_modes([(fp(3, -1), Complex64::new(0.5, 0.0))]);
/// let grid = field.synthesize(8)?;
/// let back = analyze(&grid, field.half_width())?;
/// assert!((back.get(fp(3, -1)) - field.get(fp(3, -1))).norm() < 1e-14);
/// # Ok::<(), hnls::Error>(())
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoeffs {
    half_width: u32,
    entries: BTreeMap<FreqPoint, Complex64>,
}

impl FourierCoeffs {
    /// Empty field on the box of the given half-width (≥ 1).
    pub fn new(half_width: u32) -> Self {
        assert!(half_width >= 1, "box half-width must be positive");
        Self {
            half_width,
            entries: BTreeMap::new(),
        }
    }

    /// Build from `(frequency, amplitude)` pairs, growing the box to the
    /// smallest half-width containing every frequency.
    pub fn from_modes<I>(modes: I) -> Self
    where
        I: IntoIterator<Item = (FreqPoint, Complex64)>,
    {
        let mut entries = BTreeMap::new();
        let mut half_width = 1u32;
        for (n, c) in modes {
            half_width = half_width.max(n.min_half_width());
            *entries.entry(n).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        Self {
            half_width,
            entries,
        }
    }

    /// Build on a fixed box, rejecting out-of-box frequencies.
    pub fn with_half_width<I>(half_width: u32, modes: I) -> Result<Self>
    where
        I: IntoIterator<Item = (FreqPoint, Complex64)>,
    {
        let mut coeffs = Self::new(half_width);
        for (n, c) in modes {
            coeffs.insert(n, c)?;
        }
        Ok(coeffs)
    }

    pub fn insert(&mut self, n: FreqPoint, c: Complex64) -> Result<()> {
        if n.min_half_width() > self.half_width {
            return Err(Error::OutOfBox {
                n1: n.n1,
                n2: n.n2,
                half_width: self.half_width,
            });
        }
        *self.entries.entry(n).or_insert(Complex64::new(0.0, 0.0)) += c;
        Ok(())
    }

    pub fn half_width(&self) -> u32 {
        self.half_width
    }

    /// Largest coordinate magnitude over the support (the true bandwidth);
    /// zero for the empty field.
    pub fn bandwidth(&self) -> u32 {
        self.entries
            .keys()
            .map(|n| n.n1.abs().max(n.n2.abs()) as u32)
            .max()
            .unwrap_or(0)
    }

    /// Componentwise support bounds `(lo, hi)`, both inclusive; `None` for
    /// the empty field.
    pub fn bounding_box(&self) -> Option<(FreqPoint, FreqPoint)> {
        let mut it = self.entries.keys();
        let first = *it.next()?;
        let (mut lo, mut hi) = (first, first);
        for n in it {
            lo.n1 = lo.n1.min(n.n1);
            lo.n2 = lo.n2.min(n.n2);
            hi.n1 = hi.n1.max(n.n1);
            hi.n2 = hi.n2.max(n.n2);
        }
        Some((lo, hi))
    }

    /// Amplitude at `n` (zero when absent).
    pub fn get(&self, n: FreqPoint) -> Complex64 {
        self.entries
            .get(&n)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Iterate entries in lattice order.
    pub fn iter(&self) -> impl Iterator<Item = (FreqPoint, Complex64)> + '_ {
        self.entries.iter().map(|(&n, &c)| (n, c))
    }

    /// Apply a frequency-dependent amplitude map, keeping the support.
    pub fn map_amplitudes(&self, mut f: impl FnMut(FreqPoint, Complex64) -> Complex64) -> Self {
        Self {
            half_width: self.half_width,
            entries: self
                .entries
                .iter()
                .map(|(&n, &c)| (n, f(n, c)))
                .collect(),
        }
    }

    /// Multiply every amplitude by a scalar.
    pub fn scale(&self, lambda: Complex64) -> Self {
        self.map_amplitudes(|_, c| c * lambda)
    }

    /// `‖f‖_{L²(T²)} = (Σ_n |f̂(n)|²)^{1/2}` by Plancherel.
    pub fn l2_norm(&self) -> f64 {
        self.entries
            .values()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `‖f‖_{Hˢ(T²)} = (Σ_n (1+|n|²)^s |f̂(n)|²)^{1/2}`.
    pub fn hs_norm(&self, s: f64) -> f64 {
        self.entries
            .iter()
            .map(|(n, c)| (1.0 + n.norm_sq() as f64).powf(s) * c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Evaluate the Fourier series on the uniform `m × m` grid
    /// `x = (j/m, k/m)`. Requires `m ≥ 2·half_width` so that the box
    /// residues stay distinct mod `m` and [`analyze`] can invert exactly.
    pub fn synthesize(&self, m: usize) -> Result<GridField> {
        let required = 2 * self.half_width as usize;
        if m < required {
            return Err(Error::GridTooSmall {
                m,
                half_width: self.half_width,
                required,
            });
        }
        let mut values = vec![Complex64::new(0.0, 0.0); m * m];
        for (&n, &c) in &self.entries {
            let j = n.n1.rem_euclid(m as i64) as usize;
            let k = n.n2.rem_euclid(m as i64) as usize;
            values[j * m + k] = c;
        }
        fft2_inplace(&mut values, m, Direction::Inverse);
        Ok(GridField { m, values })
    }
}

/// Uniform-grid complex samples of a field: `values[j·m + k]` is the field
/// at `x = (j/m, k/m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    m: usize,
    values: Vec<Complex64>,
}

impl GridField {
    /// Wrap raw samples. Rejects non-finite values and length mismatches.
    pub fn from_values(m: usize, values: Vec<Complex64>) -> Result<Self> {
        if m == 0 || values.len() != m * m {
            return Err(Error::InvalidConfig(format!(
                "grid of {} values does not match {m}×{m}",
                values.len()
            )));
        }
        if !values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite { time: f64::NAN });
        }
        Ok(Self { m, values })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn value(&self, j: usize, k: usize) -> Complex64 {
        self.values[j * self.m + k]
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.values
    }

    pub(crate) fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    /// `‖u‖_{L^p(T²)}` for even `p` by the uniform quadrature rule
    /// `(m⁻² Σ_{j,k} |u(x_{jk})|^p)^{1/p}`.
    ///
    /// The rule is exact for trigonometric polynomials: if the field is
    /// band-limited with `max |n_i| ≤ B` then `|u|^p` is a trigonometric
    /// polynomial of degree `p·B`, integrated exactly whenever
    /// `m ≥ p·B + 1` (see [`min_exact_grid`]). Smaller grids return the
    /// quadrature value without complaint — callers accepting approximate
    /// norms are free to use them.
    pub fn lp_norm(&self, p: u32) -> Result<f64> {
        if p == 0 || p % 2 != 0 {
            return Err(Error::OddExponent(p));
        }
        let half = (p / 2) as i32;
        let mean = self
            .values
            .iter()
            .map(|v| v.norm_sqr().powi(half))
            .sum::<f64>()
            / (self.m * self.m) as f64;
        Ok(mean.powf(1.0 / p as f64))
    }
}

/// Smallest grid certified to integrate `|u|^p` exactly for fields with
/// `max |n_i| ≤ bandwidth`.
pub fn min_exact_grid(bandwidth: u32, p: u32) -> usize {
    (p as usize) * (bandwidth as usize) + 1
}

/// Read band-limited coefficients off a grid: the inverse of
/// [`FourierCoeffs::synthesize`] on fields supported in `(−N, N]²`,
/// requiring `m ≥ 2N`. Exact zeros are dropped from the support.
pub fn analyze(grid: &GridField, half_width: u32) -> Result<FourierCoeffs> {
    let m = grid.m;
    let required = 2 * half_width as usize;
    if m < required {
        return Err(Error::GridTooSmall {
            m,
            half_width,
            required,
        });
    }
    let mut values = grid.values.clone();
    fft2_inplace(&mut values, m, Direction::Forward);
    let scale = 1.0 / (m * m) as f64;
    let n = half_width as i64;
    let mut coeffs = FourierCoeffs::new(half_width);
    for n1 in (1 - n)..=n {
        let j = n1.rem_euclid(m as i64) as usize;
        for n2 in (1 - n)..=n {
            let k = n2.rem_euclid(m as i64) as usize;
            let c = values[j * m + k] * scale;
            if c != Complex64::new(0.0, 0.0) {
                coeffs.entries.insert(fp(n1, n2), c);
            }
        }
    }
    Ok(coeffs)
}

/// Space-time coefficients `û(m, n)` with `m` the integer time frequency:
/// the input to the `X^{s,b}` norm.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SpaceTimeCoeffs {
    entries: BTreeMap<(i64, FreqPoint), Complex64>,
}

impl SpaceTimeCoeffs {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries<I>(entries: I) -> Self
    where
        I: IntoIterator<Item = (i64, FreqPoint, Complex64)>,
    {
        let mut map = BTreeMap::new();
        for (m, n, c) in entries {
            *map.entry((m, n)).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        Self { entries: map }
    }

    /// Space-time coefficients of the free wave `e^{it□}φ` over one time
    /// period: the single time frequency `m = −H(n)` carries `φ̂(n)`, i.e.
    /// the field concentrates on the characteristic surface `m + H(n) = 0`.
    pub fn from_free_evolution(phi: &FourierCoeffs) -> Self {
        Self::from_entries(
            phi.iter()
                .map(|(n, c)| (-n.hyperbolic_level(), n, c)),
        )
    }

    pub fn get(&self, m: i64, n: FreqPoint) -> Complex64 {
        self.entries
            .get(&(m, n))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, FreqPoint, Complex64)> + '_ {
        self.entries.iter().map(|(&(m, n), &c)| (m, n, c))
    }

    /// The Bourgain norm associated to the hyperbolic semigroup:
    /// `(Σ_{m,n} |(1+|m+H(n)|)^b (1+|n|²)^{s/2} û(m,n)|²)^{1/2}`.
    ///
    /// The modulation weight measures distance of the time frequency to the
    /// characteristic surface `m = −H(n)`; with `s = b = 0` this is the
    /// plain `ℓ²` norm of the coefficients.
    pub fn xsb_norm(&self, s: f64, b: f64) -> f64 {
        self.entries
            .iter()
            .map(|(&(m, n), c)| {
                let modulation = 1.0 + (m + n.hyperbolic_level()).abs() as f64;
                let sobolev = 1.0 + n.norm_sq() as f64;
                modulation.powf(2.0 * b) * sobolev.powf(s) * c.norm_sqr()
            })
            .sum::<f64>()
            .sqrt()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Forward,
    Inverse,
}

/// Unnormalized forward 2-D FFT for the solver's spectral substep.
pub(crate) fn fft2_forward(values: &mut [Complex64], m: usize) {
    fft2_inplace(values, m, Direction::Forward);
}

/// Unnormalized inverse 2-D FFT for the solver's spectral substep.
pub(crate) fn fft2_inverse(values: &mut [Complex64], m: usize) {
    fft2_inplace(values, m, Direction::Inverse);
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Separable 2-D FFT over a square row-major array, unnormalized in both
/// directions (forward kernel `e^{−2πi·}`, inverse `e^{+2πi·}`).
fn fft2_inplace(values: &mut [Complex64], m: usize, dir: Direction) {
    debug_assert_eq!(values.len(), m * m);
    let fft = PLANNER.with(|p| {
        let mut planner = p.borrow_mut();
        match dir {
            Direction::Forward => planner.plan_fft_forward(m),
            Direction::Inverse => planner.plan_fft_inverse(m),
        }
    });
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    fft.process_with_scratch(values, &mut scratch);
    transpose_square(values, m);
    fft.process_with_scratch(values, &mut scratch);
    transpose_square(values, m);
}

fn transpose_square(values: &mut [Complex64], m: usize) {
    for i in 0..m {
        for j in (i + 1)..m {
            values.swap(i * m + j, j * m + i);
        }
    }
}
