//! The dictionary between sine-Gordon parameters and chiral Potts rapidities.
//!
//! Generative direction: three rapidities (p, q, r) on one curve produce
//! `λ = ±√(t_q/t_p)`, `μ = ±√(t_r/t_q)`, `e^Q = ω^{1/2} λ x_p / y_q`,
//! `e^P = ω^{1/2} μ x_q s_q s_r / y_r`. From these the module verifies the
//! four defining relations, the modulus formula, the eight twisted-parameter
//! relations, the six factor identifications tying weight matrices to r̄
//! factors, and the resulting star-triangle constant R = 1.
//!
//! A separate two-point dictionary connects a stationary background
//! (α, β, κ) to a curve and rapidity pair; its inverse direction is a
//! best-effort one-dimensional root search.

use crate::algebra::RootContext;
use crate::curve::{point_from_s, point_residual, CurveError, CurveModulus, CurvePoint};
use crate::semiclassical::{rbar, twisted_params, SemiclassicalError, SemiclassicalParams};
use crate::weights::{
    star_triangle_with_tables, weight_tables, NormMode, WeightTable, WeightsError,
};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorrespondenceError {
    #[error("rapidity has zero product t = xy")]
    ZeroRapidityProduct,
    #[error("degenerate input: {0} vanishes")]
    DegenerateValue(&'static str),
    #[error("background root search failed after trying all branches")]
    SearchFailed,
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Weights(#[from] WeightsError),
    #[error(transparent)]
    Semiclassical(#[from] SemiclassicalError),
}

/// Branch choice for a square root carried explicitly for reproducibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Everything the dictionary suite measures for one parameter set against
/// one rapidity triple, with the branch provenance needed to reproduce it.
#[derive(Debug, Clone, Copy)]
pub struct CorrespondenceReport {
    /// Relative deviation of the modulus formula from k².
    pub modulus_residual: f64,
    /// Max relative residual of the four defining relations.
    pub first_four_residual: f64,
    /// Max deviation of the squared-parameter displays e^{2Q}, e^{2P}.
    pub display_residual: f64,
    /// Max relative residual of the eight twisted relations (N-th powers).
    pub last_eight_residual: f64,
    /// Max relative residual of the twisted first powers after the ω-branch
    /// correction recorded in `branch_indices`.
    pub first_power_residual: f64,
    /// ω-power branch index for each of (P′, Q′, P″, Q″).
    pub branch_indices: [usize; 4],
    /// Relative residuals of the six factor identifications.
    pub factor_residuals: [f64; 6],
    /// Star-triangle constant of the rescaled tables; 1 when the
    /// identification holds.
    pub r_pqr_value: Complex64,
    /// ω-power index of the N-th root chosen for R.
    pub r_root_index: usize,
}

fn require_nonzero(value: Complex64, name: &'static str) -> Result<(), CorrespondenceError> {
    if value.norm() == 0.0 {
        return Err(CorrespondenceError::DegenerateValue(name));
    }
    Ok(())
}

/// Builds the full sine-Gordon parameter set from a rapidity triple, with
/// explicit square-root sign choices for λ and μ.
pub fn params_from_rapidities(
    p: &CurvePoint,
    q: &CurvePoint,
    r: &CurvePoint,
    sign_lambda: Sign,
    sign_mu: Sign,
    ctx: &RootContext,
) -> Result<SemiclassicalParams, CorrespondenceError> {
    for pt in [p, q, r] {
        if pt.t().norm() == 0.0 {
            return Err(CorrespondenceError::ZeroRapidityProduct);
        }
    }
    require_nonzero(q.y(), "y_q")?;
    require_nonzero(r.y(), "y_r")?;
    let lambda = sign_lambda.value() * (q.t() / p.t()).sqrt();
    let mu = sign_mu.value() * (r.t() / q.t()).sqrt();
    let exp_q = ctx.omega_half() * lambda * p.x() / q.y();
    let exp_p = ctx.omega_half() * mu * q.x() * q.s() * r.s() / r.y();
    require_nonzero(exp_q, "e^Q")?;
    require_nonzero(exp_p, "e^P")?;
    Ok(twisted_params(ctx, lambda, mu, exp_p.ln(), exp_q.ln())?)
}

fn rel_dev(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

/// Max relative residual of the four defining relations
/// `ω^{-1/2} λ^{∓1} e^Q = x_p/y_q, x_q/y_p` and
/// `ω^{-1/2} μ^{∓1} e^P = x_q s_q s_r/y_r, x_r s_r s_q/y_q`.
pub fn first_four_residual(
    params: &SemiclassicalParams,
    p: &CurvePoint,
    q: &CurvePoint,
    r: &CurvePoint,
    ctx: &RootContext,
) -> f64 {
    let wh = ctx.omega_half();
    let (lambda, mu) = (params.lambda, params.mu);
    let (exp_p, exp_q) = (params.exp_p(), params.exp_q());
    [
        (exp_q / (wh * lambda), p.x() / q.y()),
        (exp_q * lambda / wh, q.x() / p.y()),
        (exp_p / (wh * mu), q.x() * q.s() * r.s() / r.y()),
        (exp_p * mu / wh, r.x() * r.s() * q.s() / q.y()),
    ]
    .iter()
    .map(|(lhs, rhs)| rel_dev(*lhs, *rhs))
    .fold(0.0, f64::max)
}

/// Max deviation of the squared displays `e^{2Q} = ω x_p x_q/(y_p y_q)` and
/// `e^{2P} = ω x_q x_r s_q² s_r²/(y_q y_r)`.
pub fn display_residual(
    params: &SemiclassicalParams,
    p: &CurvePoint,
    q: &CurvePoint,
    r: &CurvePoint,
    ctx: &RootContext,
) -> f64 {
    let omega = ctx.omega();
    let d1 = (params.exp_q() * params.exp_q()
        - omega * p.x() * q.x() / (p.y() * q.y()))
    .norm();
    let ss = q.s() * q.s() * r.s() * r.s();
    let d2 = (params.exp_p() * params.exp_p()
        - omega * q.x() * r.x() * ss / (q.y() * r.y()))
    .norm();
    d1.max(d2)
}

/// The modulus formula: k² as a rational expression in
/// `A = 1+(e^Q/λ)^N, B = 1+(e^Q λ)^N, C = 1+(e^P/μ)^N, D = 1+(e^P μ)^N`.
pub fn modulus_squared(
    params: &SemiclassicalParams,
    ctx: &RootContext,
) -> Result<Complex64, CorrespondenceError> {
    let n = ctx.n() as i32;
    let (lambda, mu) = (params.lambda, params.mu);
    let (exp_p, exp_q) = (params.exp_p(), params.exp_q());
    let a = 1.0 + (exp_q / lambda).powi(n);
    let b = 1.0 + (exp_q * lambda).powi(n);
    let c = 1.0 + (exp_p / mu).powi(n);
    let d = 1.0 + (exp_p * mu).powi(n);
    let num = (a * c * (1.0 - b) - b * d * (1.0 - c))
        * (b * c * (1.0 - a) * (1.0 - d) - a * d);
    let den = c * d * (a - b * (1.0 - d)) * (b - a - b * c * (1.0 - a));
    if den.norm() < 1e-280 {
        return Err(CorrespondenceError::DegenerateValue("modulus denominator"));
    }
    Ok(num / den)
}

/// The right-hand sides, in first-power form, of the four 'a'-branch twisted
/// relations: targets for (e^{P′}, e^{Q′}, e^{P″}, e^{Q″}).
fn twisted_targets_a(
    params: &SemiclassicalParams,
    p: &CurvePoint,
    q: &CurvePoint,
    r: &CurvePoint,
    ctx: &RootContext,
) -> [Complex64; 4] {
    let wh = ctx.omega_half();
    let lm = params.lambda * params.mu;
    [
        wh * lm * p.x() * p.s() * r.s() / r.y(),
        wh * lm * p.x() / r.y(),
        wh * params.lambda * p.x() * p.s() * q.s() / q.y(),
        wh * params.mu * q.x() / r.y(),
    ]
}

/// Max relative residual, in N-th-power form, of the eight twisted-parameter
/// relations for (P′, Q′, P″, Q″).
pub fn last_eight_residual(
    params: &SemiclassicalParams,
    p: &CurvePoint,
    q: &CurvePoint,
    r: &CurvePoint,
    ctx: &RootContext,
) -> f64 {
    let n = ctx.n() as i32;
    let wh = ctx.omega_half();
    let (lambda, mu) = (params.lambda, params.mu);
    let lm = lambda * mu;
    let rel = |t_n: Complex64, first: Complex64| rel_dev(t_n, first.powi(n));
    let [a1, a2, a3, a4] = twisted_targets_a(params, p, q, r, ctx);
    [
        rel(params.exp_np_prime, a1),
        rel(params.exp_np_prime, (wh / lm) * r.x() * r.s() * p.s() / p.y()),
        rel(params.exp_nq_prime, a2),
        rel(params.exp_nq_prime, (wh / lm) * r.x() / p.y()),
        rel(params.exp_np_dprime, a3),
        rel(
            params.exp_np_dprime,
            (wh / lambda) * q.x() * q.s() * p.s() / p.y(),
        ),
        rel(params.exp_nq_dprime, a4),
        rel(params.exp_nq_dprime, (wh / mu) * r.x() / q.y()),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

fn best_branch(value: Complex64, target: Complex64, ctx: &RootContext) -> (usize, f64) {
    let mut best = (0usize, f64::INFINITY);
    for m in 0..ctx.n() {
        let res = rel_dev(value * ctx.omega_pow(m as i64), target);
        if res < best.1 {
            best = (m, res);
        }
    }
    best
}

/// Rescales a unit table so its diagonal factor starts at `r̄(coupling,
/// diag_coeff)` and its circulant Fourier transform starts at `r̄(coupling,
/// circ_coeff)`.
fn rescale_for_factors(
    table: &WeightTable,
    coupling: Complex64,
    diag_coeff: Complex64,
    circ_coeff: Complex64,
    ctx: &RootContext,
) -> Result<WeightTable, CorrespondenceError> {
    let w_factor = rbar(ctx, coupling, diag_coeff)?;
    let wbar_f0 = table.wbar_f()[0];
    if wbar_f0.norm() == 0.0 {
        return Err(CorrespondenceError::DegenerateValue("W̄^{(f)}(0)"));
    }
    let wbar_factor = rbar(ctx, coupling, circ_coeff)? / wbar_f0;
    Ok(table.rescaled(w_factor, wbar_factor))
}

fn diag_factor_residual(
    table: &WeightTable,
    coupling: Complex64,
    coeff: Complex64,
    ctx: &RootContext,
) -> Result<f64, CorrespondenceError> {
    let mut worst: f64 = 0.0;
    for a in 0..ctx.n() {
        let target = rbar(ctx, coupling, coeff * ctx.omega_pow(-(a as i64)))?;
        worst = worst.max(rel_dev(table.w_at(-(a as i64)), target));
    }
    Ok(worst)
}

fn circ_factor_residual(
    table: &WeightTable,
    coupling: Complex64,
    coeff: Complex64,
    ctx: &RootContext,
) -> Result<f64, CorrespondenceError> {
    let mut worst: f64 = 0.0;
    for n in 0..ctx.n() {
        let target = rbar(ctx, coupling, coeff * ctx.omega_pow(n as i64))?;
        worst = worst.max(rel_dev(table.wbar_f()[n], target));
    }
    Ok(worst)
}

/// The three pair tables rescaled for the factor identifications, together
/// with the six factor coefficients (in the order the two Yang-Baxter sides
/// use them).
pub struct FactorData {
    pub table_pq: WeightTable,
    pub table_pr: WeightTable,
    pub table_qr: WeightTable,
    /// Diagonal coefficients for pairs (p,q), (p,r), (q,r).
    pub diag_coeffs: [Complex64; 3],
    /// Circulant coefficients for pairs (p,q), (p,r), (q,r).
    pub circ_coeffs: [Complex64; 3],
    /// Couplings λ, λμ, μ for pairs (p,q), (p,r), (q,r).
    pub couplings: [Complex64; 3],
}

/// Builds the rescaled tables whose factor matrices realize the six r̄
/// factors of the twisted Yang-Baxter equation.
pub fn factor_data(
    params: &SemiclassicalParams,
    p: &CurvePoint,
    q: &CurvePoint,
    r: &CurvePoint,
    ctx: &RootContext,
) -> Result<FactorData, CorrespondenceError> {
    let (lambda, mu) = (params.lambda, params.mu);
    let lm = lambda * mu;
    let [pp, qp, pdd, qdd] = twisted_targets_a(params, p, q, r, ctx);
    let unit_pq = weight_tables(p, q, NormMode::Unit, ctx)?;
    let unit_pr = weight_tables(p, r, NormMode::Unit, ctx)?;
    let unit_qr = weight_tables(q, r, NormMode::Unit, ctx)?;
    let table_pq = rescale_for_factors(&unit_pq, lambda, params.exp_q(), pdd, ctx)?;
    let table_pr = rescale_for_factors(&unit_pr, lm, qp, pp, ctx)?;
    let table_qr = rescale_for_factors(&unit_qr, mu, qdd, params.exp_p(), ctx)?;
    Ok(FactorData {
        table_pq,
        table_pr,
        table_qr,
        diag_coeffs: [params.exp_q(), qp, qdd],
        circ_coeffs: [pdd, pp, params.exp_p()],
        couplings: [lambda, lm, mu],
    })
}

/// Runs the full dictionary verification for one parameter set against one
/// rapidity triple on a curve with modulus `k`.
pub fn correspondence_residuals(
    params: &SemiclassicalParams,
    modulus: &CurveModulus,
    p: &CurvePoint,
    q: &CurvePoint,
    r: &CurvePoint,
    ctx: &RootContext,
) -> Result<CorrespondenceReport, CorrespondenceError> {
    let k2 = modulus.k() * modulus.k();
    if k2.norm() == 0.0 {
        return Err(CorrespondenceError::DegenerateValue("k²"));
    }
    let modulus_residual = (modulus_squared(params, ctx)? - k2).norm() / k2.norm();
    let first_four = first_four_residual(params, p, q, r, ctx);
    let displays = display_residual(params, p, q, r, ctx);
    let last_eight = last_eight_residual(params, p, q, r, ctx);

    let targets = twisted_targets_a(params, p, q, r, ctx);
    let firsts = [
        params.exp_p_prime(),
        params.exp_q_prime(),
        params.exp_p_dprime(),
        params.exp_q_dprime(),
    ];
    let mut branch_indices = [0usize; 4];
    let mut first_power_residual: f64 = 0.0;
    for (i, (value, target)) in firsts.iter().zip(targets.iter()).enumerate() {
        let (m, res) = best_branch(*value, *target, ctx);
        branch_indices[i] = m;
        first_power_residual = first_power_residual.max(res);
    }

    let data = factor_data(params, p, q, r, ctx)?;
    let tables = [&data.table_pq, &data.table_pr, &data.table_qr];
    let mut factor_residuals = [0.0f64; 6];
    for i in 0..3 {
        factor_residuals[i] =
            diag_factor_residual(tables[i], data.couplings[i], data.diag_coeffs[i], ctx)?;
        factor_residuals[i + 3] =
            circ_factor_residual(tables[i], data.couplings[i], data.circ_coeffs[i], ctx)?;
    }

    let str_report =
        star_triangle_with_tables(&data.table_pq, &data.table_pr, &data.table_qr, ctx)?;

    Ok(CorrespondenceReport {
        modulus_residual,
        first_four_residual: first_four,
        display_residual: displays,
        last_eight_residual: last_eight,
        first_power_residual,
        branch_indices,
        factor_residuals,
        r_pqr_value: str_report.r_pqr,
        r_root_index: str_report.root_index,
    })
}

/// Background parameters (α, β, κ) generated from a rapidity pair:
/// `κ⁴ = t_q/t_p`, `β = ω^{1/2} κ² x_p/y_q`, `α = β s_p s_q`.
pub fn background_params(
    p: &CurvePoint,
    q: &CurvePoint,
    ctx: &RootContext,
) -> Result<(Complex64, Complex64, Complex64), CorrespondenceError> {
    if p.t().norm() == 0.0 || q.t().norm() == 0.0 {
        return Err(CorrespondenceError::ZeroRapidityProduct);
    }
    require_nonzero(q.y(), "y_q")?;
    let kappa = (q.t() / p.t()).powf(0.25);
    let beta = ctx.omega_half() * kappa * kappa * p.x() / q.y();
    let alpha = beta * p.s() * q.s();
    Ok((alpha, beta, kappa))
}

/// The background modulus formula
/// `k² = (1-α^N β^N)(1-α^N β^{-N}) / ((1+α^N κ^{2N})(1+α^N κ^{-2N}))`.
pub fn background_modulus_squared(
    alpha: Complex64,
    beta: Complex64,
    kappa: Complex64,
    ctx: &RootContext,
) -> Result<Complex64, CorrespondenceError> {
    let n = ctx.n() as i32;
    require_nonzero(alpha, "α")?;
    require_nonzero(beta, "β")?;
    require_nonzero(kappa, "κ")?;
    let a_n = alpha.powi(n);
    let b_n = beta.powi(n);
    let k_n = kappa.powi(2 * n);
    let den = (1.0 + a_n * k_n) * (1.0 + a_n / k_n);
    if den.norm() < 1e-280 {
        return Err(CorrespondenceError::DegenerateValue(
            "background modulus denominator",
        ));
    }
    Ok((1.0 - a_n * b_n) * (1.0 - a_n / b_n) / den)
}

/// Max relative residual of the four background relations
/// `ω^{-1/2} β κ^{∓2} = x_p/y_q, x_q/y_p` and
/// `ω^{-1/2} α κ^{∓2} = x_p s_p s_q/y_q, x_q s_p s_q/y_p`.
pub fn background_relations_residual(
    p: &CurvePoint,
    q: &CurvePoint,
    alpha: Complex64,
    beta: Complex64,
    kappa: Complex64,
    ctx: &RootContext,
) -> Result<f64, CorrespondenceError> {
    require_nonzero(p.y(), "y_p")?;
    require_nonzero(q.y(), "y_q")?;
    let wmh = ctx.omega_inv_half();
    let k2 = kappa * kappa;
    let ss = p.s() * q.s();
    Ok([
        (wmh * beta / k2, p.x() / q.y()),
        (wmh * beta * k2, q.x() / p.y()),
        (wmh * alpha / k2, p.x() * ss / q.y()),
        (wmh * alpha * k2, q.x() * ss / p.y()),
    ]
    .iter()
    .map(|(lhs, rhs)| rel_dev(*lhs, *rhs))
    .fold(0.0, f64::max))
}

/// Result of the inverse background search, with branch provenance.
#[derive(Debug, Clone, Copy)]
pub struct BackgroundSolution {
    pub modulus: CurveModulus,
    pub p: CurvePoint,
    pub q: CurvePoint,
    /// Max relative residual of the four background relations.
    pub residual: f64,
    pub k_prime_sign: Sign,
    pub root_x_p: usize,
    pub root_x_q: usize,
}

const BACKGROUND_SECANT_ITERATIONS: usize = 40;

/// Searches for a curve and rapidity pair realizing the background
/// parameters (α, β, κ): the modulus comes from the closed formula, s_p from
/// a closed-form seed (or the caller's) polished by a secant iteration, with
/// s_q = (α/β)/s_p and both k′ signs and all ω-root indices enumerated.
pub fn background_correspondence(
    alpha: Complex64,
    beta: Complex64,
    kappa: Complex64,
    s_p_seed: Option<Complex64>,
    ctx: &RootContext,
) -> Result<BackgroundSolution, CorrespondenceError> {
    let n = ctx.n();
    let k2 = background_modulus_squared(alpha, beta, kappa, ctx)?;
    let k = k2.sqrt();
    if k.norm() == 0.0 {
        return Err(CorrespondenceError::DegenerateValue("k"));
    }
    let c1 = -beta.powi(n as i32) / kappa.powi(2 * n as i32);
    let g = (alpha / beta).powi(n as i32);
    let target1 = ctx.omega_inv_half() * beta / (kappa * kappa);
    let target2 = ctx.omega_inv_half() * beta * kappa * kappa;

    let mut best: Option<BackgroundSolution> = None;
    for sign in [Sign::Plus, Sign::Minus] {
        let k_prime = sign.value() * (1.0 - k2).sqrt();
        let modulus = match CurveModulus::new(k, k_prime) {
            Ok(m) => m,
            Err(_) => continue,
        };
        let seed = match s_p_seed {
            Some(s) => s,
            None => {
                if (1.0 - c1).norm() < 1e-14 {
                    continue;
                }
                let u = k_prime * (1.0 - c1 * g) / (1.0 - c1);
                if u.norm() < 1e-14 {
                    continue;
                }
                u.powf(1.0 / n as f64)
            }
        };

        let build = |s_p: Complex64,
                     rx_p: usize,
                     rx_q: usize|
         -> Result<(CurvePoint, CurvePoint), CurveError> {
            let s_q = (alpha / beta) / s_p;
            let p = point_from_s(&modulus, s_p, rx_p, 0, ctx)?;
            let q = point_from_s(&modulus, s_q, rx_q, 0, ctx)?;
            Ok((p, q))
        };

        let (p0, q0) = match build(seed, 0, 0) {
            Ok(pair) => pair,
            Err(_) => continue,
        };
        let pick_root = |value: Complex64, target: Complex64| {
            (0..n)
                .map(|m| (m, (ctx.omega_pow(m as i64) * value - target).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .map(|(m, _)| m)
                .unwrap_or(0)
        };
        let rx_p = pick_root(p0.x() / q0.y(), target1);
        let rx_q = pick_root(q0.x() / p0.y(), target2);

        let rel1 = |s_p: Complex64| -> Option<Complex64> {
            let (p, q) = build(s_p, rx_p, rx_q).ok()?;
            Some(p.x() / q.y() - target1)
        };
        let mut s_a = seed;
        let mut s_b = seed * (1.0 + 1e-6);
        let (mut f_a, mut f_b) = match (rel1(s_a), rel1(s_b)) {
            (Some(a), Some(b)) => (a, b),
            _ => continue,
        };
        for _ in 0..BACKGROUND_SECANT_ITERATIONS {
            if f_b.norm() < 1e-15 || (f_b - f_a).norm() < 1e-300 {
                break;
            }
            let s_next = s_b - f_b * (s_b - s_a) / (f_b - f_a);
            s_a = s_b;
            f_a = f_b;
            s_b = s_next;
            f_b = match rel1(s_b) {
                Some(v) => v,
                None => break,
            };
        }
        let (p, q) = match build(s_b, rx_p, rx_q) {
            Ok(pair) => pair,
            Err(_) => continue,
        };
        if point_residual(&p, &modulus, ctx) > 1e-9 || point_residual(&q, &modulus, ctx) > 1e-9 {
            continue;
        }
        let residual = background_relations_residual(&p, &q, alpha, beta, kappa, ctx)?;
        let candidate = BackgroundSolution {
            modulus,
            p,
            q,
            residual,
            k_prime_sign: sign,
            root_x_p: rx_p,
            root_x_q: rx_q,
        };
        if best.map_or(true, |b| candidate.residual < b.residual) {
            best = Some(candidate);
        }
    }
    best.ok_or(CorrespondenceError::SearchFailed)
}
