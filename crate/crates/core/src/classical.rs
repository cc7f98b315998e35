//! Classical discrete sine-Gordon dynamics on the periodic saw lattice.
//!
//! A state holds 2L nonzero values w_0..w_{2L-1}. One time step updates the
//! even sublattice from the old odd neighbors, then the odd sublattice from
//! the already-updated even neighbors, each site by
//! `ŵ = w · f(w_left)/f(w_right)` with `f(λ,x) = (1+λx)/(λ+x)`. The two
//! Casimirs (products over each sublattice) are conserved, the constant
//! background is a fixed point, and f factorizes over root-of-unity shifts:
//! `f(κ^{2N}, x^N) = ∏_{j=0}^{N-1} f(κ², q0^{2j+1} x)`.

use crate::algebra::RootContext;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassicalError {
    #[error("lattice needs L ≥ 2 (got L = {0})")]
    LatticeTooSmall(usize),
    #[error("site count must be even (got {0})")]
    OddSiteCount(usize),
    #[error("site {site} is zero")]
    ZeroSite { site: usize },
    #[error("singular evolution: f has a pole at site {site} (w = -λ)")]
    PoleAtSite { site: usize },
    #[error("singular evolution: f vanishes at site {site} (w = -1/λ)")]
    ZeroFactorAtSite { site: usize },
    #[error("constraint violated: C1 = {c1}, C2 = {c2} (both must be 1)")]
    ConstraintViolated { c1: Complex64, c2: Complex64 },
    #[error("factorization identity hits a pole in {0}")]
    FactorPole(&'static str),
}

/// State of the periodic saw lattice: values w_0..w_{2L-1}, even indices on
/// one sublattice and odd indices on the other.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeState {
    w: Vec<Complex64>,
}

const CONSTRAINT_TOLERANCE: f64 = 1e-10;

impl LatticeState {
    /// Builds a state from 2L nonzero values.
    pub fn new(w: Vec<Complex64>) -> Result<Self, ClassicalError> {
        if w.len() % 2 != 0 {
            return Err(ClassicalError::OddSiteCount(w.len()));
        }
        if w.len() < 4 {
            return Err(ClassicalError::LatticeTooSmall(w.len() / 2));
        }
        if let Some(site) = w.iter().position(|v| v.norm() == 0.0) {
            return Err(ClassicalError::ZeroSite { site });
        }
        Ok(Self { w })
    }

    /// Builds a state and additionally requires both Casimirs to equal 1.
    pub fn new_constrained(w: Vec<Complex64>) -> Result<Self, ClassicalError> {
        let state = Self::new(w)?;
        let (c1, c2) = casimirs(&state);
        if (c1 - 1.0).norm() > CONSTRAINT_TOLERANCE || (c2 - 1.0).norm() > CONSTRAINT_TOLERANCE {
            return Err(ClassicalError::ConstraintViolated { c1, c2 });
        }
        Ok(state)
    }

    pub fn l(&self) -> usize {
        self.w.len() / 2
    }

    pub fn sites(&self) -> &[Complex64] {
        &self.w
    }
}

/// The constant background w_{2n} = α, w_{2n+1} = β.
pub fn constant_background(
    l: usize,
    alpha: Complex64,
    beta: Complex64,
) -> Result<LatticeState, ClassicalError> {
    if l < 2 {
        return Err(ClassicalError::LatticeTooSmall(l));
    }
    LatticeState::new(
        (0..2 * l)
            .map(|n| if n % 2 == 0 { alpha } else { beta })
            .collect(),
    )
}

/// `f(λ,x) = (1 + λx)/(λ + x)`; `site` labels the lattice position for error
/// reporting.
fn f_at_site(lambda: Complex64, x: Complex64, site: usize) -> Result<Complex64, ClassicalError> {
    let den = lambda + x;
    if den.norm() < 1e-14 * lambda.norm().max(x.norm()).max(1.0) {
        return Err(ClassicalError::PoleAtSite { site });
    }
    Ok((1.0 + lambda * x) / den)
}

/// One full time step: even sites from old odd neighbors, then odd sites
/// from the updated even neighbors, via `ŵ = w·f(w_left)/f(w_right)`.
///
/// The neighbor ratio is computed before multiplying, so a constant
/// background reproduces itself exactly rather than to rounding.
pub fn evolve(state: &LatticeState, lambda: Complex64) -> Result<LatticeState, ClassicalError> {
    let m = state.w.len();
    let mut next = state.w.clone();
    let step = |w: &[Complex64], site: usize| -> Result<Complex64, ClassicalError> {
        let left = (site + m - 1) % m;
        let right = (site + 1) % m;
        let f_left = f_at_site(lambda, w[left], left)?;
        let f_right = f_at_site(lambda, w[right], right)?;
        if f_right.norm() < 1e-280 {
            return Err(ClassicalError::ZeroFactorAtSite { site: right });
        }
        Ok(w[site] * (f_left / f_right))
    };
    let snapshot = state.w.clone();
    for site in (0..m).step_by(2) {
        next[site] = step(&snapshot, site)?;
    }
    let snapshot = next.clone();
    for site in (1..m).step_by(2) {
        next[site] = step(&snapshot, site)?;
    }
    Ok(LatticeState { w: next })
}

/// The conserved pair (C1, C2) = (∏ w_{2n+1}, ∏ w_{2n}).
pub fn casimirs(state: &LatticeState) -> (Complex64, Complex64) {
    let c1 = state
        .w
        .iter()
        .skip(1)
        .step_by(2)
        .product();
    let c2 = state.w.iter().step_by(2).product();
    (c1, c2)
}

/// Relative residual of `f(κ^{2N}, x^N) = ∏_{j=0}^{N-1} f(κ², q0^{2j+1} x)`.
pub fn f_factor_identity_residual(
    kappa: Complex64,
    x: Complex64,
    ctx: &RootContext,
) -> Result<f64, ClassicalError> {
    let n = ctx.n() as i32;
    let kappa2 = kappa * kappa;
    let lhs_den = kappa2.powi(n) + x.powi(n);
    if lhs_den.norm() < 1e-14 * kappa2.powi(n).norm().max(x.powi(n).norm()).max(1.0) {
        return Err(ClassicalError::FactorPole("f(κ^{2N}, x^N)"));
    }
    let lhs = (1.0 + kappa2.powi(n) * x.powi(n)) / lhs_den;
    let mut rhs = Complex64::new(1.0, 0.0);
    for j in 0..ctx.n() {
        let arg = ctx.q0_pow(2 * j as i64 + 1) * x;
        let den = kappa2 + arg;
        if den.norm() < 1e-14 * kappa2.norm().max(arg.norm()).max(1.0) {
            return Err(ClassicalError::FactorPole("f(κ², q0^{2j+1} x)"));
        }
        rhs *= (1.0 + kappa2 * arg) / den;
    }
    Ok((lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1e-300))
}
