//! The spectral curve k² + k′² = 1, x^N + y^N = k(1 + x^N y^N) and its
//! rapidity parametrization.
//!
//! A point is generated from a rapidity value s by
//! `x = ω^{r_x} ((1 - k′ s^{-N})/k)^{1/N}` and
//! `y = ω^{r_y} ((1 - k′ s^{N})/k)^{1/N}` with complex principal N-th roots;
//! the discrete root indices `(r_x, r_y)` label the N² sheets. The curve
//! identity follows from the two defining relations for any sheet choice.
//!
//! Samplers come in two regimes: a generic complex regime for identity
//! testing across sheets, and a real branch-safe regime (real k′, real s
//! near 1, root indices 0) where every fractional power downstream of the
//! correspondence stays on its principal branch.

use crate::algebra::RootContext;
use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

/// Validation threshold for point membership and modulus consistency.
pub const POINT_TOLERANCE: f64 = 1e-10;
const MODULUS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum CurveError {
    #[error("modulus constraint violated: |k² + k′² - 1| = {residual:.3e}")]
    ModulusConstraint { residual: f64 },
    #[error("modulus k must be nonzero for the rapidity parametrization")]
    ZeroModulus,
    #[error("rapidity s must be nonzero")]
    ZeroRapidity,
    #[error("rapidity sits on a branch point of the parametrization (radicand {radicand:.3e})")]
    BranchPoint { radicand: f64 },
    #[error("point fails curve membership: residual {residual:.3e} exceeds {POINT_TOLERANCE:.1e}")]
    OffCurve { residual: f64 },
    #[error("sampler exhausted {attempts} attempts without a valid point")]
    SamplingExhausted { attempts: usize },
}

/// The curve modulus pair (k, k′) with k² + k′² = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveModulus {
    k: Complex64,
    k_prime: Complex64,
}

impl CurveModulus {
    pub fn new(k: Complex64, k_prime: Complex64) -> Result<Self, CurveError> {
        let residual = (k * k + k_prime * k_prime - 1.0).norm();
        if residual > MODULUS_TOLERANCE {
            return Err(CurveError::ModulusConstraint { residual });
        }
        Ok(Self { k, k_prime })
    }

    /// Completes k′ to a modulus pair with the principal square root
    /// k = √(1 - k′²).
    pub fn from_k_prime(k_prime: Complex64) -> Result<Self, CurveError> {
        let k = (Complex64::new(1.0, 0.0) - k_prime * k_prime).sqrt();
        Self::new(k, k_prime)
    }

    pub fn k(&self) -> Complex64 {
        self.k
    }

    pub fn k_prime(&self) -> Complex64 {
        self.k_prime
    }
}

/// A rapidity point (x, y, s) on the curve, with the product t = xy cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    x: Complex64,
    y: Complex64,
    s: Complex64,
    t: Complex64,
}

impl CurvePoint {
    /// Assembles a point from raw coordinates without validation; pair with
    /// [`validate_point`] when the source is untrusted.
    pub fn from_parts(x: Complex64, y: Complex64, s: Complex64) -> Self {
        Self { x, y, s, t: x * y }
    }

    pub fn x(&self) -> Complex64 {
        self.x
    }

    pub fn y(&self) -> Complex64 {
        self.y
    }

    pub fn s(&self) -> Complex64 {
        self.s
    }

    pub fn t(&self) -> Complex64 {
        self.t
    }
}

/// A sampled point together with the sheet labels used to build it.
#[derive(Debug, Clone, Copy)]
pub struct CurveSample {
    pub point: CurvePoint,
    pub root_x: usize,
    pub root_y: usize,
}

/// Sampling regimes for test data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Real k′ ∈ [0.15, 0.5], real s ∈ [0.85, 1.18], root indices 0. All
    /// radicands stay positive real, so every principal fractional power
    /// downstream agrees with its positive-real limit.
    RealBranchSafe,
    /// Complex modulus and rapidity with random sheet labels.
    Generic,
}

/// Builds the curve point for rapidity s on the sheet `(root_x, root_y)`.
pub fn point_from_s(
    modulus: &CurveModulus,
    s: Complex64,
    root_x: usize,
    root_y: usize,
    ctx: &RootContext,
) -> Result<CurvePoint, CurveError> {
    let n = ctx.n() as i32;
    if s.norm() == 0.0 {
        return Err(CurveError::ZeroRapidity);
    }
    if modulus.k.norm() < 1e-14 {
        return Err(CurveError::ZeroModulus);
    }
    let s_n = s.powi(n);
    let s_neg_n = s.powi(-n);
    let rad_x = (Complex64::new(1.0, 0.0) - modulus.k_prime * s_neg_n) / modulus.k;
    let rad_y = (Complex64::new(1.0, 0.0) - modulus.k_prime * s_n) / modulus.k;
    let branch_scale =
        (1.0 + (modulus.k_prime * s_neg_n).norm().max((modulus.k_prime * s_n).norm()))
            / modulus.k.norm();
    for rad in [rad_x, rad_y] {
        if rad.norm() < 1e-13 * branch_scale {
            return Err(CurveError::BranchPoint {
                radicand: rad.norm(),
            });
        }
    }
    let inv_n = 1.0 / ctx.n() as f64;
    let x = ctx.omega_pow(root_x as i64) * rad_x.powf(inv_n);
    let y = ctx.omega_pow(root_y as i64) * rad_y.powf(inv_n);
    Ok(CurvePoint::from_parts(x, y, s))
}

/// Maximum relative residual of the three membership relations: the curve
/// identity and the two rapidity relations k x^N = 1 - k′ s^{-N},
/// k y^N = 1 - k′ s^{N}.
pub fn point_residual(point: &CurvePoint, modulus: &CurveModulus, ctx: &RootContext) -> f64 {
    let n = ctx.n() as i32;
    let xn = point.x.powi(n);
    let yn = point.y.powi(n);
    let lhs = xn + yn;
    let rhs = modulus.k * (1.0 + xn * yn);
    let scale_curve = lhs.norm().max(rhs.norm()).max(1.0);
    let r_curve = (lhs - rhs).norm() / scale_curve;

    let sx = modulus.k * xn - (1.0 - modulus.k_prime * point.s.powi(-n));
    let sy = modulus.k * yn - (1.0 - modulus.k_prime * point.s.powi(n));
    let scale_s = (modulus.k * xn).norm().max((modulus.k * yn).norm()).max(1.0);
    r_curve.max(sx.norm() / scale_s).max(sy.norm() / scale_s)
}

/// Checks point membership at [`POINT_TOLERANCE`].
pub fn validate_point(
    point: &CurvePoint,
    modulus: &CurveModulus,
    ctx: &RootContext,
) -> Result<f64, CurveError> {
    let residual = point_residual(point, modulus, ctx);
    if residual > POINT_TOLERANCE {
        return Err(CurveError::OffCurve { residual });
    }
    Ok(residual)
}

/// Draws a modulus in the requested regime.
pub fn sample_modulus<R: Rng + ?Sized>(rng: &mut R, regime: Regime) -> CurveModulus {
    match regime {
        Regime::RealBranchSafe => {
            let k_prime: f64 = rng.gen_range(0.15..0.5);
            let k = (1.0 - k_prime * k_prime).sqrt();
            CurveModulus::new(Complex64::new(k, 0.0), Complex64::new(k_prime, 0.0))
                .expect("real pair satisfies the constraint by construction")
        }
        Regime::Generic => {
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let k = Complex64::new(theta.cos(), rng.gen_range(-0.15..0.15));
            let k_prime = (Complex64::new(1.0, 0.0) - k * k).sqrt();
            CurveModulus::new(k, k_prime).expect("k' completes k by construction")
        }
    }
}

/// Draws one validated point; retries rapidity values until membership and
/// nondegeneracy (|x|, |y| > 1e-3) hold.
pub fn sample_point<R: Rng + ?Sized>(
    rng: &mut R,
    modulus: &CurveModulus,
    regime: Regime,
    ctx: &RootContext,
) -> Result<CurveSample, CurveError> {
    const ATTEMPTS: usize = 100;
    for _ in 0..ATTEMPTS {
        let (s, root_x, root_y) = match regime {
            Regime::RealBranchSafe => (Complex64::new(rng.gen_range(0.85..1.18), 0.0), 0, 0),
            Regime::Generic => {
                let mag = rng.gen_range(0.7..1.4);
                let phase = rng.gen_range(-0.4..0.4);
                (
                    Complex64::from_polar(mag, phase),
                    rng.gen_range(0..ctx.n()),
                    rng.gen_range(0..ctx.n()),
                )
            }
        };
        let point = match point_from_s(modulus, s, root_x, root_y, ctx) {
            Ok(p) => p,
            Err(_) => continue,
        };
        if point_residual(&point, modulus, ctx) < POINT_TOLERANCE
            && point.x().norm() > 1e-3
            && point.y().norm() > 1e-3
        {
            return Ok(CurveSample {
                point,
                root_x,
                root_y,
            });
        }
    }
    Err(CurveError::SamplingExhausted { attempts: ATTEMPTS })
}

/// Draws `count` validated points on one modulus.
pub fn sample_points<R: Rng + ?Sized>(
    rng: &mut R,
    modulus: &CurveModulus,
    count: usize,
    regime: Regime,
    ctx: &RootContext,
) -> Result<Vec<CurveSample>, CurveError> {
    (0..count)
        .map(|_| sample_point(rng, modulus, regime, ctx))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn modulus_constraint_enforced() {
        let good = CurveModulus::new(Complex64::new(0.6, 0.0), Complex64::new(0.8, 0.0));
        assert!(good.is_ok());
        let bad = CurveModulus::new(Complex64::new(0.6, 0.0), Complex64::new(0.9, 0.0));
        assert!(matches!(bad, Err(CurveError::ModulusConstraint { .. })));
    }

    #[test]
    fn generated_points_validate_across_sheets() {
        let mut rng = ChaCha20Rng::seed_from_u64(41);
        for n in [2usize, 3, 5, 7] {
            let ctx = RootContext::new(n).unwrap();
            let mut worst: f64 = 0.0;
            for trial in 0..100 {
                let regime = if trial % 2 == 0 {
                    Regime::RealBranchSafe
                } else {
                    Regime::Generic
                };
                let modulus = sample_modulus(&mut rng, regime);
                let sample = sample_point(&mut rng, &modulus, regime, &ctx).unwrap();
                worst = worst.max(point_residual(&sample.point, &modulus, &ctx));
            }
            assert!(worst < 1e-11, "worst membership residual {worst:.2e} at N={n}");
        }
    }

    #[test]
    fn negative_real_radicand_takes_principal_complex_root() {
        let ctx = RootContext::new(3).unwrap();
        let modulus =
            CurveModulus::new(Complex64::new(0.6, 0.0), Complex64::new(0.8, 0.0)).unwrap();
        // s < 1 real with k' s^{-N} > 1 makes the x radicand negative real.
        let s = Complex64::new(0.8, 0.0);
        let point = point_from_s(&modulus, s, 0, 0, &ctx).unwrap();
        assert!(point.x().im != 0.0, "principal root of a negative radicand is complex");
        assert!(point_residual(&point, &modulus, &ctx) < 1e-12);
    }

    #[test]
    fn branch_point_rejected() {
        let ctx = RootContext::new(2).unwrap();
        let k_prime = Complex64::new(0.36, 0.0);
        let modulus = CurveModulus::from_k_prime(k_prime).unwrap();
        let s = k_prime.sqrt();
        assert!(matches!(
            point_from_s(&modulus, s, 0, 0, &ctx),
            Err(CurveError::BranchPoint { .. })
        ));
    }

    #[test]
    fn zero_inputs_rejected() {
        let ctx = RootContext::new(2).unwrap();
        let modulus = CurveModulus::from_k_prime(Complex64::new(0.3, 0.0)).unwrap();
        assert!(matches!(
            point_from_s(&modulus, Complex64::new(0.0, 0.0), 0, 0, &ctx),
            Err(CurveError::ZeroRapidity)
        ));
        let degenerate = CurveModulus::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
            .unwrap();
        assert!(matches!(
            point_from_s(&degenerate, Complex64::new(1.1, 0.0), 0, 0, &ctx),
            Err(CurveError::ZeroModulus)
        ));
    }

    #[test]
    fn sampling_is_deterministic_under_seed() {
        let ctx = RootContext::new(3).unwrap();
        let run = || {
            let mut rng = ChaCha20Rng::seed_from_u64(7);
            let modulus = sample_modulus(&mut rng, Regime::Generic);
            sample_points(&mut rng, &modulus, 5, Regime::Generic, &ctx).unwrap()
        };
        let a = run();
        let b = run();
        for (sa, sb) in a.iter().zip(&b) {
            assert_eq!(sa.point, sb.point);
            assert_eq!((sa.root_x, sa.root_y), (sb.root_x, sb.root_y));
        }
    }
}
