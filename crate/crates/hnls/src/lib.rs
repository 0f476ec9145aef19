//! A spectral and combinatorial laboratory for the cubic hyperbolic
//! Schrödinger equation on the 2-torus.
//!
//! The equation `(i∂_t + □)u = μ|u|²u` with `□ = ∂²_{x₁} − ∂²_{x₂}` behaves
//! very differently from its elliptic cousin: the symbol `H(n) = n₁² − n₂²`
//! of the linear flow vanishes on the whole frequency diagonal, which makes
//! the resonant set large. This crate computes the quantitative objects that
//! exhibit that difference, exactly where possible:
//!
//! * [`spectrum`] — fields as sparse frequency maps or uniform grids,
//!   transforms between the two, and the norms (`L²`, `Hˢ`, spatial `Lᵖ`,
//!   and the Bourgain `X^{s,b}` norm).
//! * [`propagator`] — the hyperbolic (and comparison elliptic) semigroup,
//!   frequency-box projectors, and the hyperbolic Galilean recentering.
//! * [`lattice`] — integer-point counts on the hyperbolas `n₁² − n₂² = l`,
//!   divisor counts, and the diagonal triple-sum count `Γ`.
//! * [`extremals`] — the diagonal exponential sum `φ_N`, whose space-time
//!   `L⁴` norm grows like `N^{1/4}` times its mass.
//! * [`resonance`] — exact `L⁴([0,1]×T²)` and bilinear `L²` norms of free
//!   waves by resonance-pair binning (Plancherel in time and space).
//! * [`picard`] — the first Picard iterate of the cubic nonlinearity and
//!   its `Hˢ` growth in the frequency cutoff.
//! * [`nls`] — a Strang split-step pseudo-spectral solver with mass and
//!   hyperbolic-energy tracking.
//!
//! All operations are pure functions of immutable inputs, and every parallel
//! reduction merges partial results in a fixed order, so results are
//! bit-identical regardless of thread count.

pub mod error;
pub mod extremals;
pub mod fit;
pub mod io;
pub mod lattice;
pub mod nls;
pub mod picard;
pub mod propagator;
pub mod resonance;
pub mod rng;
pub mod spectrum;

pub use error::{Error, Result};
pub use spectrum::{FourierCoeffs, FreqPoint, GridField, SpaceTimeCoeffs};
