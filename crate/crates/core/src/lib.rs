//! Numerical verification library for the correspondence between the
//! quantum discrete sine-Gordon model at roots of unity and the N-state
//! chiral Potts model.
//!
//! The crate is organized bottom-up:
//!
//! - [`algebra`]: clock/shift operators at a root of unity and a dense
//!   complex operator calculus (products, Kronecker products, inverses,
//!   spectral functions of diagonal and shift-monomial operators).
//! - [`curve`]: the genus > 1 algebraic curve k² + k′² = 1,
//!   x^N + y^N = k(1 + x^N y^N), its rapidity parametrization by s, and
//!   seeded samplers for test data.
//! - [`weights`]: Boltzmann weight tables W, W̄ on pairs of curve points,
//!   their Fourier transforms, the star-triangle relation in scalar and
//!   matrix form, and the cyclic product identity.
//! - [`classical`]: the classical discrete sine-Gordon evolution, its
//!   Casimirs, constant backgrounds, and the modulus-factorization identity
//!   of the local map f.
//! - [`semiclassical`]: the complex dilogarithm, the H potential, the
//!   quantum R-matrix factor r̄, twisted parameter maps, the twisted
//!   Yang-Baxter equation, saddle-point substitutions, the 12-term
//!   dilogarithm identity, and its invariants F₀, F₁.
//! - [`correspondence`]: the dictionary between curve triples and
//!   sine-Gordon parameters (λ, μ, P, Q): the modulus formula, the eight
//!   derived relations, the six factor identifications, and the stationary
//!   background curve with its inverse root search.
//! - [`transfer`]: the six-vertex chain (R-matrix, L-operators, commuting
//!   transfer matrices, gauge moves), chiral Potts row transfer matrices,
//!   the evolution operator built from weight matrices, and partition-trace
//!   evaluation with a brute-force cross-check.
//!
//! All residuals are relative max-entry deviations unless documented
//! otherwise, and all randomized constructions take explicit seeds so runs
//! are reproducible.

pub mod algebra;
pub mod classical;
pub mod correspondence;
pub mod curve;
pub mod semiclassical;
pub mod transfer;
pub mod weights;

pub use algebra::{clock_shift, operator_function, DenseOperator, RootContext};
pub use correspondence::{
    background_correspondence, correspondence_residuals, params_from_rapidities,
    CorrespondenceReport, Sign,
};
pub use curve::{point_from_s, CurveModulus, CurvePoint};
pub use semiclassical::{dilog, rbar, twisted_params, SemiclassicalParams};
pub use transfer::{quantum_evolution, row_transfer_pair, SixVertexChain, SpinLattice};
pub use weights::{weight_tables, NormMode, WeightTable};
