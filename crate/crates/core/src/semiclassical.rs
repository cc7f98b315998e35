//! Dilogarithm machinery and the semiclassical R-matrix factor.
//!
//! This module holds the complex dilogarithm Li₂, the potential
//! `H(a,b) = -2 { Li₂(-ab) + Li₂(-a/b) + ½ log²b + π²/6 }` (normalized so
//! `H(1,x) = 0` and `H(a,b) = H(a,1/b)`), its rescaling H̃, the root-of-unity
//! factor r̄(λ,x) with its cyclic-product and shift-ratio properties, the
//! twisted parameter maps and twisted Yang-Baxter equation, the saddle-point
//! substitutions, the 12-term dilogarithm identity, and the invariants
//! F₀, F₁.
//!
//! All fractional powers are principal; identity tests run in the
//! positive-real-connected domain where that branch choice is unambiguous.

use crate::algebra::{
    classify_spectral_operand, clock_shift, operator_function, relative_deviation, AlgebraError,
    DenseOperator, RootContext, SpectralOperand,
};
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SemiclassicalError {
    #[error("dilogarithm argument {0} lies on the branch cut [1, ∞)")]
    DilogOnCut(f64),
    #[error("logarithm argument is zero")]
    LogOfZero,
    #[error("r̄ factor degenerates: {which} has magnitude {magnitude:.3e}")]
    RbarDegenerate { which: &'static str, magnitude: f64 },
    #[error("denominator vanishes in {context}")]
    DenominatorZero { context: &'static str },
    #[error("inputs must be positive: got {name} = {value}")]
    NonPositiveInput { name: &'static str, value: f64 },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

const PI2_6: f64 = PI * PI / 6.0;

/// Even-index Bernoulli numbers B₀..B₃₀ (B₁ = -1/2 explicit, odd > 1 zero),
/// as used by the ζ-series for Li₂.
const BERNOULLI: [f64; 31] = [
    1.0,
    -0.5,
    1.0 / 6.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    1.0 / 42.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    5.0 / 66.0,
    0.0,
    -691.0 / 2730.0,
    0.0,
    7.0 / 6.0,
    0.0,
    -3617.0 / 510.0,
    0.0,
    43867.0 / 798.0,
    0.0,
    -174611.0 / 330.0,
    0.0,
    854513.0 / 138.0,
    0.0,
    -236364091.0 / 2730.0,
    0.0,
    8553103.0 / 6.0,
    0.0,
    -23749461029.0 / 870.0,
    0.0,
    8615841276005.0 / 14322.0,
];

fn li2_power_series(z: Complex64) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    let mut term = z;
    let mut k = 1u32;
    loop {
        let add = term / Complex64::new((k * k) as f64, 0.0);
        total += add;
        if add.norm() < 1e-18 * total.norm().max(1e-20) {
            break;
        }
        k += 1;
        term *= z;
        if k > 300 {
            break;
        }
    }
    total
}

fn li2_bernoulli_series(z: Complex64) -> Complex64 {
    let zeta = -(Complex64::new(1.0, 0.0) - z).ln();
    let mut total = Complex64::new(0.0, 0.0);
    let mut zeta_pow = zeta;
    let mut factorial = 1.0;
    for (j, &b) in BERNOULLI.iter().enumerate() {
        factorial *= (j + 1) as f64;
        if b != 0.0 {
            let add = zeta_pow * (b / factorial);
            total += add;
            if j > 2 && add.norm() < 1e-18 * total.norm().max(1e-20) {
                break;
            }
        }
        zeta_pow *= zeta;
    }
    total
}

/// Principal-branch complex dilogarithm Li₂(z) = -∫₀^z log(1-t)/t dt.
///
/// Strategy: direct power series for |z| ≤ ½, the reflection
/// Li₂(z) + Li₂(1-z) = π²/6 - log z log(1-z) near z = 1, the inversion
/// Li₂(z) = -Li₂(1/z) - π²/6 - ½ log²(-z) for |z| > 1.2, and the Bernoulli
/// ζ-series in the remaining annulus. Real arguments above 1 sit on the
/// branch cut and are rejected.
pub fn dilog(z: Complex64) -> Result<Complex64, SemiclassicalError> {
    if z.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if z == Complex64::new(1.0, 0.0) {
        return Ok(Complex64::new(PI2_6, 0.0));
    }
    if z.im == 0.0 && z.re > 1.0 {
        return Err(SemiclassicalError::DilogOnCut(z.re));
    }
    if z.norm() > 1.2 {
        let log_neg = (-z).ln();
        return Ok(-dilog(z.inv())? - PI2_6 - 0.5 * log_neg * log_neg);
    }
    if (Complex64::new(1.0, 0.0) - z).norm() < 0.5 {
        let one_minus = Complex64::new(1.0, 0.0) - z;
        return Ok(Complex64::new(PI2_6, 0.0) - z.ln() * one_minus.ln() - dilog(one_minus)?);
    }
    if z.norm() <= 0.5 {
        return Ok(li2_power_series(z));
    }
    Ok(li2_bernoulli_series(z))
}

/// The dilogarithm potential `H(a,b) = -2{Li₂(-ab) + Li₂(-a/b) + ½log²b + π²/6}`,
/// normalized so that H(1,x) = 0 and H(a,b) = H(a,1/b).
pub fn h_function(a: Complex64, b: Complex64) -> Result<Complex64, SemiclassicalError> {
    if b.norm() == 0.0 {
        return Err(SemiclassicalError::LogOfZero);
    }
    let log_b = b.ln();
    let value = dilog(-a * b)? + dilog(-a / b)? + 0.5 * log_b * log_b + PI2_6;
    Ok(-2.0 * value)
}

/// The rescaled potential `H̃(a,b) = N^{-2} H(a^N, b^N)`.
pub fn h_tilde(
    ctx: &RootContext,
    a: Complex64,
    b: Complex64,
) -> Result<Complex64, SemiclassicalError> {
    let n = ctx.n() as i32;
    let h = h_function(a.powi(n), b.powi(n))?;
    Ok(h / (ctx.n() * ctx.n()) as f64)
}

/// The semiclassical R-matrix factor
/// `r̄(λ,x) = ((λ^N + x^N)/(1 + λ^N x^N))^{(N-1)/2N}
///            ∏_{j=0}^{N-1} ((1 + λx q0^{2j+1})/(λ + x q0^{2j+1}))^{j/N}`
/// with principal fractional powers. Degenerate factors (vanishing numerator
/// or denominator) are reported rather than silently producing 0 or ∞.
pub fn rbar(
    ctx: &RootContext,
    lambda: Complex64,
    x: Complex64,
) -> Result<Complex64, SemiclassicalError> {
    let n = ctx.n();
    let ni = n as i32;
    let lam_n = lambda.powi(ni);
    let x_n = x.powi(ni);
    let num0 = lam_n + x_n;
    let den0 = 1.0 + lam_n * x_n;
    let scale0 = lam_n.norm().max(x_n.norm()).max(1.0);
    if num0.norm() < 1e-13 * scale0 {
        return Err(SemiclassicalError::RbarDegenerate {
            which: "λ^N + x^N",
            magnitude: num0.norm(),
        });
    }
    if den0.norm() < 1e-13 * scale0 {
        return Err(SemiclassicalError::RbarDegenerate {
            which: "1 + λ^N x^N",
            magnitude: den0.norm(),
        });
    }
    let mut out = (num0 / den0).powf((n as f64 - 1.0) / (2.0 * n as f64));
    let scale1 = 1.0f64.max(lambda.norm().max((x).norm()) * (1.0 + lambda.norm()));
    for j in 0..n {
        let q = ctx.q0_pow(2 * j as i64 + 1);
        let num = 1.0 + lambda * x * q;
        let den = lambda + x * q;
        if num.norm() < 1e-13 * scale1 {
            return Err(SemiclassicalError::RbarDegenerate {
                which: "1 + λx q0^{2j+1}",
                magnitude: num.norm(),
            });
        }
        if den.norm() < 1e-13 * scale1 {
            return Err(SemiclassicalError::RbarDegenerate {
                which: "λ + x q0^{2j+1}",
                magnitude: den.norm(),
            });
        }
        out *= (num / den).powf(j as f64 / n as f64);
    }
    Ok(out)
}

/// Residual of the cyclic product property `∏_{j=0}^{N-1} r̄(λ, ω^j x) = 1`.
pub fn rbar_cyclic_product_residual(
    ctx: &RootContext,
    lambda: Complex64,
    x: Complex64,
) -> Result<f64, SemiclassicalError> {
    let mut product = Complex64::new(1.0, 0.0);
    for j in 0..ctx.n() {
        product *= rbar(ctx, lambda, ctx.omega_pow(j as i64) * x)?;
    }
    Ok((product - 1.0).norm())
}

/// Residual of the shift-ratio closed form
/// `r̄(λ, ω^n x)/r̄(λ, x) = ((1 + λ^N x^N)/(1 + λ^{-N} x^N))^{n/N}
///   ∏_{j=1}^{n} (1 - ω^{-1/2} λ^{-1} x ω^j)/(1 - ω^{-1/2} λ x ω^j)`.
pub fn rbar_shift_ratio_residual(
    ctx: &RootContext,
    lambda: Complex64,
    x: Complex64,
    shift: usize,
) -> Result<f64, SemiclassicalError> {
    let ni = ctx.n() as i32;
    let lhs = rbar(ctx, lambda, ctx.omega_pow(shift as i64) * x)? / rbar(ctx, lambda, x)?;
    let lam_n = lambda.powi(ni);
    let x_n = x.powi(ni);
    let den_pre = 1.0 + x_n / lam_n;
    if den_pre.norm() < 1e-13 {
        return Err(SemiclassicalError::DenominatorZero {
            context: "shift-ratio prefactor",
        });
    }
    let mut rhs = ((1.0 + lam_n * x_n) / den_pre).powf(shift as f64 / ctx.n() as f64);
    let w_inv_half = ctx.omega_inv_half();
    for j in 1..=shift {
        let wj = ctx.omega_pow(j as i64);
        let num = 1.0 - w_inv_half * x * wj / lambda;
        let den = 1.0 - w_inv_half * lambda * x * wj;
        if den.norm() < 1e-13 {
            return Err(SemiclassicalError::DenominatorZero {
                context: "shift-ratio factor",
            });
        }
        rhs *= num / den;
    }
    Ok((lhs - rhs).norm() / rhs.norm().max(lhs.norm()))
}

/// Sine-Gordon parameters (λ, μ, P, Q) together with the four twisted
/// parameters. The primed logarithms use the principal branch of the N-th
/// root; the exact e^{N·} values are carried alongside so downstream
/// N-th-power identities never lose the branch.
#[derive(Debug, Clone, Copy)]
pub struct SemiclassicalParams {
    pub lambda: Complex64,
    pub mu: Complex64,
    pub p: Complex64,
    pub q: Complex64,
    pub p_prime: Complex64,
    pub q_prime: Complex64,
    pub p_dprime: Complex64,
    pub q_dprime: Complex64,
    pub exp_np_prime: Complex64,
    pub exp_nq_prime: Complex64,
    pub exp_np_dprime: Complex64,
    pub exp_nq_dprime: Complex64,
}

impl SemiclassicalParams {
    pub fn exp_p(&self) -> Complex64 {
        self.p.exp()
    }

    pub fn exp_q(&self) -> Complex64 {
        self.q.exp()
    }

    pub fn exp_p_prime(&self) -> Complex64 {
        self.p_prime.exp()
    }

    pub fn exp_q_prime(&self) -> Complex64 {
        self.q_prime.exp()
    }

    pub fn exp_p_dprime(&self) -> Complex64 {
        self.p_dprime.exp()
    }

    pub fn exp_q_dprime(&self) -> Complex64 {
        self.q_dprime.exp()
    }
}

/// Computes the twisted parameters:
/// `e^{NP′} = e^{NP} (1 + λ^N e^{NQ})/(λ^N + e^{NQ})`,
/// `e^{NQ′} = e^{NQ} (μ^N + e^{NP})/(1 + μ^N e^{NP})`,
/// `e^{NP″} = e^{NP} (1 + λ^N μ^N e^{NQ′})/(λ^N μ^N + e^{NQ′})`,
/// `e^{NQ″} = e^{NQ} (λ^N μ^N + e^{NP′})/(1 + λ^N μ^N e^{NP′})`.
pub fn twisted_params(
    ctx: &RootContext,
    lambda: Complex64,
    mu: Complex64,
    p: Complex64,
    q: Complex64,
) -> Result<SemiclassicalParams, SemiclassicalError> {
    let n = ctx.n() as f64;
    let lam_n = lambda.powi(ctx.n() as i32);
    let mu_n = mu.powi(ctx.n() as i32);
    let lm_n = lam_n * mu_n;
    let exp_np = (n * p).exp();
    let exp_nq = (n * q).exp();

    let ratio = |num: Complex64, den: Complex64, context: &'static str| {
        let scale = num.norm().max(den.norm()).max(1.0);
        if den.norm() < 1e-250 * scale.max(1.0) || den.norm() == 0.0 {
            Err(SemiclassicalError::DenominatorZero { context })
        } else {
            Ok(num / den)
        }
    };

    let rp = ratio(1.0 + lam_n * exp_nq, lam_n + exp_nq, "e^{NP'}")?;
    let rq = ratio(mu_n + exp_np, 1.0 + mu_n * exp_np, "e^{NQ'}")?;
    let exp_np_prime = exp_np * rp;
    let exp_nq_prime = exp_nq * rq;
    let rpp = ratio(1.0 + lm_n * exp_nq_prime, lm_n + exp_nq_prime, "e^{NP''}")?;
    let rqq = ratio(lm_n + exp_np_prime, 1.0 + lm_n * exp_np_prime, "e^{NQ''}")?;
    let exp_np_dprime = exp_np * rpp;
    let exp_nq_dprime = exp_nq * rqq;

    Ok(SemiclassicalParams {
        lambda,
        mu,
        p,
        q,
        p_prime: p + rp.ln() / n,
        q_prime: q + rq.ln() / n,
        p_dprime: p + rpp.ln() / n,
        q_dprime: q + rqq.ln() / n,
        exp_np_prime,
        exp_nq_prime,
        exp_np_dprime,
        exp_nq_dprime,
    })
}

/// Which twisted parameter to replace by its untwisted value when probing
/// whether the twist is essential.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UntwistedReplacement {
    PPrime,
    QPrime,
    PDprime,
    QDprime,
}

/// Builds `r̄(λ_eff, coeff · op)` through the spectral calculus, surfacing
/// r̄ evaluation errors before delegating to [`operator_function`].
fn rbar_operator(
    ctx: &RootContext,
    lambda_eff: Complex64,
    coeff: Complex64,
    operand: &DenseOperator,
) -> Result<DenseOperator, SemiclassicalError> {
    match classify_spectral_operand(operand)? {
        SpectralOperand::Diagonal(diag) => {
            for v in diag {
                rbar(ctx, lambda_eff, coeff * v)?;
            }
        }
        SpectralOperand::ShiftMonomial { coeff: c0, power } => {
            for k in 0..operand.dim() {
                let spectral = c0 * ctx.omega_pow(-((power * k) as i64));
                rbar(ctx, lambda_eff, coeff * spectral)?;
            }
        }
    }
    let out = operator_function(
        operand,
        |v| rbar(ctx, lambda_eff, coeff * v).expect("spectrum pre-validated"),
        ctx,
    )?;
    Ok(out)
}

/// Relative max-entry residual of the twisted Yang-Baxter equation
/// `r̄(λ, e^Q Z^{-1}) r̄(λμ, e^{P′} X) r̄(μ, e^{Q″} Z^{-1})
///  = r̄(μ, e^P X) r̄(λμ, e^{Q′} Z^{-1}) r̄(λ, e^{P″} X)`,
/// optionally with one twisted parameter replaced by its untwisted value.
pub fn twisted_ybe_residual_with(
    ctx: &RootContext,
    lambda: Complex64,
    mu: Complex64,
    p: Complex64,
    q: Complex64,
    replace: Option<UntwistedReplacement>,
) -> Result<f64, SemiclassicalError> {
    let params = twisted_params(ctx, lambda, mu, p, q)?;
    let exp_p = params.exp_p();
    let exp_q = params.exp_q();
    let mut exp_p_prime = params.exp_p_prime();
    let mut exp_q_prime = params.exp_q_prime();
    let mut exp_p_dprime = params.exp_p_dprime();
    let mut exp_q_dprime = params.exp_q_dprime();
    match replace {
        Some(UntwistedReplacement::PPrime) => exp_p_prime = exp_p,
        Some(UntwistedReplacement::QPrime) => exp_q_prime = exp_q,
        Some(UntwistedReplacement::PDprime) => exp_p_dprime = exp_p,
        Some(UntwistedReplacement::QDprime) => exp_q_dprime = exp_q,
        None => {}
    }

    let (z, x) = clock_shift(ctx)?;
    let z_inv = z.inverse()?;
    let lm = lambda * mu;

    let lhs = &(&rbar_operator(ctx, lambda, exp_q, &z_inv)?
        * &rbar_operator(ctx, lm, exp_p_prime, &x)?)
        * &rbar_operator(ctx, mu, exp_q_dprime, &z_inv)?;
    let rhs = &(&rbar_operator(ctx, mu, exp_p, &x)?
        * &rbar_operator(ctx, lm, exp_q_prime, &z_inv)?)
        * &rbar_operator(ctx, lambda, exp_p_dprime, &x)?;
    Ok(relative_deviation(&lhs, &rhs))
}

/// Twisted Yang-Baxter residual with all four twisted parameters in place.
pub fn twisted_ybe_residual(
    ctx: &RootContext,
    lambda: Complex64,
    mu: Complex64,
    p: Complex64,
    q: Complex64,
) -> Result<f64, SemiclassicalError> {
    twisted_ybe_residual_with(ctx, lambda, mu, p, q, None)
}

/// The two saddle-point images of (x′, y′) and the consistency residual of
/// the composed map.
#[derive(Debug, Clone, Copy)]
pub struct SaddlePoints {
    /// Image of the first substitution.
    pub x: Complex64,
    pub y: Complex64,
    /// Image of the second (involutive) substitution.
    pub x_dprime: Complex64,
    pub y_dprime: Complex64,
}

fn checked_div(
    num: Complex64,
    den: Complex64,
    context: &'static str,
) -> Result<Complex64, SemiclassicalError> {
    if den.norm() < 1e-300 {
        return Err(SemiclassicalError::DenominatorZero { context });
    }
    Ok(num / den)
}

/// First substitution: `x = x′(1 + λμ y′)/(λμ + y′)`,
/// `y = y′(1 + μ x′)/(μ + x′)`.
pub fn saddle_map_first(
    lambda: Complex64,
    mu: Complex64,
    x_prime: Complex64,
    y_prime: Complex64,
) -> Result<(Complex64, Complex64), SemiclassicalError> {
    let lm = lambda * mu;
    let x = x_prime * checked_div(1.0 + lm * y_prime, lm + y_prime, "saddle map x")?;
    let y = y_prime * checked_div(1.0 + mu * x_prime, mu + x_prime, "saddle map y")?;
    Ok((x, y))
}

/// Second (involutive) substitution:
/// `y″ = x′(λμ x′y′ + x′ + λ y′ + μ)/(μ x′y′ + λ x′ + y′ + λμ)`,
/// `x″ = y′(λμ x′y′ + x′ + λ y′ + λ²μ)/(λ²μ x′y′ + λ x′ + y′ + λμ)`.
pub fn saddle_map_second(
    lambda: Complex64,
    mu: Complex64,
    x_prime: Complex64,
    y_prime: Complex64,
) -> Result<(Complex64, Complex64), SemiclassicalError> {
    let lm = lambda * mu;
    let core = lm * x_prime * y_prime + x_prime + lambda * y_prime;
    let y_dd = x_prime
        * checked_div(
            core + mu,
            mu * x_prime * y_prime + lambda * x_prime + y_prime + lm,
            "saddle map y''",
        )?;
    let x_dd = y_prime
        * checked_div(
            core + lambda * lambda * mu,
            lambda * lambda * mu * x_prime * y_prime + lambda * x_prime + y_prime + lm,
            "saddle map x''",
        )?;
    Ok((x_dd, y_dd))
}

/// The composed consistency map: `x = y″(1 + μ x″)/(μ + x″)`,
/// `y = x″(1 + λμ y″)/(λμ + y″)`.
pub fn saddle_map_composed(
    lambda: Complex64,
    mu: Complex64,
    x_dprime: Complex64,
    y_dprime: Complex64,
) -> Result<(Complex64, Complex64), SemiclassicalError> {
    let lm = lambda * mu;
    let x = y_dprime * checked_div(1.0 + mu * x_dprime, mu + x_dprime, "composed map x")?;
    let y = x_dprime * checked_div(1.0 + lm * y_dprime, lm + y_dprime, "composed map y")?;
    Ok((x, y))
}

/// Both saddle images of (x′, y′).
pub fn saddle_maps(
    lambda: Complex64,
    mu: Complex64,
    x_prime: Complex64,
    y_prime: Complex64,
) -> Result<SaddlePoints, SemiclassicalError> {
    let (x, y) = saddle_map_first(lambda, mu, x_prime, y_prime)?;
    let (x_dprime, y_dprime) = saddle_map_second(lambda, mu, x_prime, y_prime)?;
    Ok(SaddlePoints {
        x,
        y,
        x_dprime,
        y_dprime,
    })
}

/// Max deviation of the composed map from the first map's image: the
/// consistency property tying the three substitutions together.
pub fn saddle_composed_residual(
    lambda: Complex64,
    mu: Complex64,
    x_prime: Complex64,
    y_prime: Complex64,
) -> Result<f64, SemiclassicalError> {
    let pts = saddle_maps(lambda, mu, x_prime, y_prime)?;
    let (xc, yc) = saddle_map_composed(lambda, mu, pts.x_dprime, pts.y_dprime)?;
    Ok((xc - pts.x).norm().max((yc - pts.y).norm()))
}

fn require_positive(name: &'static str, value: f64) -> Result<(), SemiclassicalError> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(SemiclassicalError::NonPositiveInput { name, value });
    }
    Ok(())
}

fn h_real(a: f64, b: f64) -> Result<Complex64, SemiclassicalError> {
    h_function(Complex64::new(a, 0.0), Complex64::new(b, 0.0))
}

/// |LHS - RHS| of the 12-term dilogarithm identity
/// `H(λ,x) + H(λμ,y′) + H(μ,x′) + 2 log(x/x′) log(y/y′)
///  = H(μ,x″) + H(λμ,y″) + H(λ,y) + 2 log(x/y″) log(y/x″)`
/// with (x, y) and (x″, y″) produced by the saddle maps. All four inputs
/// must be positive; the maps then stay in the positive cone and the
/// principal branches are unambiguous.
pub fn twelve_term_residual(
    lambda: f64,
    mu: f64,
    x_prime: f64,
    y_prime: f64,
) -> Result<f64, SemiclassicalError> {
    Ok(twelve_term_difference(lambda, mu, x_prime, y_prime)?.norm())
}

/// Signed LHS - RHS of the 12-term identity; separate from the residual so
/// finite-difference gradients can probe it.
pub fn twelve_term_difference(
    lambda: f64,
    mu: f64,
    x_prime: f64,
    y_prime: f64,
) -> Result<Complex64, SemiclassicalError> {
    require_positive("lambda", lambda)?;
    require_positive("mu", mu)?;
    require_positive("x_prime", x_prime)?;
    require_positive("y_prime", y_prime)?;
    let lc = Complex64::new(lambda, 0.0);
    let mc = Complex64::new(mu, 0.0);
    let xp = Complex64::new(x_prime, 0.0);
    let yp = Complex64::new(y_prime, 0.0);
    let pts = saddle_maps(lc, mc, xp, yp)?;
    let lm = lambda * mu;
    let x = pts.x.re;
    let y = pts.y.re;
    let xdd = pts.x_dprime.re;
    let ydd = pts.y_dprime.re;
    let lhs = h_real(lambda, x)?
        + h_real(lm, y_prime)?
        + h_real(mu, x_prime)?
        + 2.0 * (x / x_prime).ln() * (y / y_prime).ln();
    let rhs = h_real(mu, xdd)?
        + h_real(lm, ydd)?
        + h_real(lambda, y)?
        + 2.0 * (x / ydd).ln() * (y / xdd).ln();
    Ok(lhs - rhs)
}

/// Invariants of the second substitution.
#[derive(Debug, Clone, Copy)]
pub struct SubstitutionInvariants {
    /// `F₁(x,y) = (1 + μx)(1 + λμy)` evaluated at (x′, y′).
    pub f1_value: f64,
    /// |F₁(x″,y″) - F₁(x′,y′)|.
    pub f1_residual: f64,
    /// |F₀(x″,y″) - F₀(x′,y′)| where F₀(u,v) rebuilds one side of the
    /// 12-term identity from its two free variables via the composed map.
    pub f0_residual: f64,
}

fn f0(lambda: f64, mu: f64, u: f64, v: f64) -> Result<f64, SemiclassicalError> {
    let lc = Complex64::new(lambda, 0.0);
    let mc = Complex64::new(mu, 0.0);
    let (xc, yc) = saddle_map_composed(lc, mc, Complex64::new(u, 0.0), Complex64::new(v, 0.0))?;
    let lm = lambda * mu;
    let value = h_real(mu, u)?
        + h_real(lm, v)?
        + h_real(lambda, yc.re)?
        + 2.0 * (xc.re / v).ln() * (yc.re / u).ln();
    Ok(value.re)
}

/// Evaluates F₁ and the invariance residuals of F₀, F₁ under the second
/// saddle substitution.
pub fn substitution_invariants(
    lambda: f64,
    mu: f64,
    x_prime: f64,
    y_prime: f64,
) -> Result<SubstitutionInvariants, SemiclassicalError> {
    require_positive("lambda", lambda)?;
    require_positive("mu", mu)?;
    require_positive("x_prime", x_prime)?;
    require_positive("y_prime", y_prime)?;
    let lc = Complex64::new(lambda, 0.0);
    let mc = Complex64::new(mu, 0.0);
    let (xdd, ydd) = saddle_map_second(
        lc,
        mc,
        Complex64::new(x_prime, 0.0),
        Complex64::new(y_prime, 0.0),
    )?;
    let lm = lambda * mu;
    let f1 = |u: f64, v: f64| (1.0 + mu * u) * (1.0 + lm * v);
    let f1_prime = f1(x_prime, y_prime);
    let f1_dprime = f1(xdd.re, ydd.re);
    let f0_prime = f0(lambda, mu, x_prime, y_prime)?;
    let f0_dprime = f0(lambda, mu, xdd.re, ydd.re)?;
    Ok(SubstitutionInvariants {
        f1_value: f1_prime,
        f1_residual: (f1_dprime - f1_prime).abs(),
        f0_residual: (f0_dprime - f0_prime).abs(),
    })
}
