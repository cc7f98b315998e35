//! The verification suites behind `cpsg verify`. Each suite samples its
//! own reproducible data from the run seed, evaluates one family of
//! identities, and reports per-trial residuals against pinned tolerances.

use crate::error::CliError;
use crate::report::{Cell, Report, Row};
use cpsg_core::algebra::{relative_deviation, RootContext};
use cpsg_core::correspondence::{correspondence_residuals, params_from_rapidities, Sign};
use cpsg_core::curve::{sample_modulus, sample_point, CurveModulus, CurvePoint, Regime};
use cpsg_core::semiclassical::{
    saddle_composed_residual, saddle_map_second, substitution_invariants,
    twelve_term_difference, twelve_term_residual, twisted_ybe_residual,
};
use cpsg_core::transfer::{
    loperator_exchange_residual, six_vertex_ybe_residual, weyl_site, SixVertexChain,
};
use cpsg_core::weights::{star_triangle_residual, str_matrix_residual};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub const STR_TOLERANCE: f64 = 1e-10;
pub const STR_MATRIX_GAP_TOLERANCE: f64 = 1e-12;
pub const TWISTED_YBE_TOLERANCE: f64 = 1e-9;
pub const FIRST_FOUR_TOLERANCE: f64 = 1e-12;
pub const MODULUS_TOLERANCE: f64 = 1e-10;
pub const LAST_EIGHT_TOLERANCE: f64 = 1e-9;
pub const FIRST_POWER_TOLERANCE: f64 = 1e-9;
pub const FACTOR_TOLERANCE: f64 = 1e-9;
pub const UNIT_CONSTANT_TOLERANCE: f64 = 1e-9;
pub const DILOG12_TOLERANCE: f64 = 1e-9;
pub const DILOG12_GRADIENT_TOLERANCE: f64 = 1e-7;
pub const SUBSTITUTION_TOLERANCE: f64 = 1e-12;
pub const SIX_VERTEX_YBE_TOLERANCE: f64 = 1e-12;
pub const SIX_VERTEX_COMMUTATION_TOLERANCE: f64 = 1e-10;
pub const SIX_VERTEX_GAUGE_TOLERANCE: f64 = 1e-11;
pub const F_IDENTITY_TOLERANCE: f64 = 1e-12;

pub struct VerifySettings {
    pub order: usize,
    pub trials: usize,
    pub seed: u64,
    pub regime: Regime,
    pub with_timestamp: bool,
}

fn regime_name(regime: Regime) -> &'static str {
    match regime {
        Regime::RealBranchSafe => "real",
        Regime::Generic => "generic",
    }
}

fn base_provenance(report: &mut Report, settings: &VerifySettings) {
    report
        .provenance
        .insert("seed".into(), Cell::Count(settings.seed));
    report
        .provenance
        .insert("order".into(), Cell::Count(settings.order as u64));
    report
        .provenance
        .insert("trials".into(), Cell::Count(settings.trials as u64));
    report
        .provenance
        .insert("regime".into(), Cell::Text(regime_name(settings.regime).into()));
}

const SAMPLE_ATTEMPTS: usize = 200;

fn sample_configuration(
    rng: &mut ChaCha20Rng,
    regime: Regime,
    ctx: &RootContext,
    points: usize,
) -> Result<(CurveModulus, Vec<CurvePoint>), CliError> {
    for _ in 0..SAMPLE_ATTEMPTS {
        let modulus = sample_modulus(rng, regime);
        let drawn: Result<Vec<CurvePoint>, _> = (0..points)
            .map(|_| sample_point(rng, &modulus, regime, ctx).map(|s| s.point))
            .collect();
        if let Ok(pts) = drawn {
            return Ok((modulus, pts));
        }
    }
    Err(CliError::Numeric(
        "curve sampling failed repeatedly; the regime may be degenerate".into(),
    ))
}

pub fn run_str(settings: &VerifySettings) -> Result<Report, CliError> {
    let ctx = RootContext::new(settings.order)?;
    let mut rng = ChaCha20Rng::seed_from_u64(settings.seed);
    let mut report = Report::new("verify str", settings.with_timestamp);
    base_provenance(&mut report, settings);
    let mut worst: f64 = 0.0;
    for trial in 0..settings.trials {
        let (_, pts) = sample_configuration(&mut rng, settings.regime, &ctx, 3)?;
        let str_report = star_triangle_residual(&pts[0], &pts[1], &pts[2], &ctx)?;
        worst = worst.max(str_report.residual);
        let mut row = Row::new();
        row.insert("trial".into(), Cell::Count(trial as u64));
        row.insert("residual".into(), Cell::Measure(str_report.residual));
        row.insert("r_constant".into(), Cell::Complex(str_report.r_pqr));
        row.insert(
            "root_index".into(),
            Cell::Count(str_report.root_index as u64),
        );
        report.trials.push(row);
    }
    report.finish_check("residual", STR_TOLERANCE, worst);
    Ok(report)
}

pub fn run_str_matrix(settings: &VerifySettings) -> Result<Report, CliError> {
    let ctx = RootContext::new(settings.order)?;
    let mut rng = ChaCha20Rng::seed_from_u64(settings.seed);
    let mut report = Report::new("verify str-matrix", settings.with_timestamp);
    base_provenance(&mut report, settings);
    let mut worst_gap: f64 = 0.0;
    for trial in 0..settings.trials {
        let (_, pts) = sample_configuration(&mut rng, settings.regime, &ctx, 3)?;
        let scalar = star_triangle_residual(&pts[0], &pts[1], &pts[2], &ctx)?.residual;
        let matrix = str_matrix_residual(&pts[0], &pts[1], &pts[2], &ctx)?;
        let gap = (scalar - matrix).abs();
        worst_gap = worst_gap.max(gap);
        let mut row = Row::new();
        row.insert("trial".into(), Cell::Count(trial as u64));
        row.insert("scalar_residual".into(), Cell::Measure(scalar));
        row.insert("matrix_residual".into(), Cell::Measure(matrix));
        row.insert("gap".into(), Cell::Measure(gap));
        report.trials.push(row);
    }
    report.finish_check("gap", STR_MATRIX_GAP_TOLERANCE, worst_gap);
    Ok(report)
}

pub fn run_twisted_ybe(settings: &VerifySettings) -> Result<Report, CliError> {
    let ctx = RootContext::new(settings.order)?;
    let mut rng = ChaCha20Rng::seed_from_u64(settings.seed);
    let mut report = Report::new("verify twisted-ybe", settings.with_timestamp);
    base_provenance(&mut report, settings);
    report.provenance.remove("regime");
    let mut worst: f64 = 0.0;
    for trial in 0..settings.trials {
        let lambda = Complex64::new(rng.gen_range(-0.45..0.45), 0.0).exp();
        let mu = Complex64::new(rng.gen_range(-0.45..0.45), 0.0).exp();
        let p = Complex64::new(rng.gen_range(-0.7..0.7), 0.0);
        let q = Complex64::new(rng.gen_range(-0.7..0.7), 0.0);
        let residual = twisted_ybe_residual(&ctx, lambda, mu, p, q)?;
        worst = worst.max(residual);
        let mut row = Row::new();
        row.insert("trial".into(), Cell::Count(trial as u64));
        row.insert("residual".into(), Cell::Measure(residual));
        row.insert("lambda".into(), Cell::Complex(lambda));
        row.insert("mu".into(), Cell::Complex(mu));
        row.insert("p".into(), Cell::Measure(p.re));
        row.insert("q".into(), Cell::Measure(q.re));
        report.trials.push(row);
    }
    report.finish_check("residual", TWISTED_YBE_TOLERANCE, worst);
    Ok(report)
}

pub fn run_correspondence(
    settings: &VerifySettings,
    sign_lambda: Sign,
    sign_mu: Sign,
) -> Result<Report, CliError> {
    let ctx = RootContext::new(settings.order)?;
    let mut rng = ChaCha20Rng::seed_from_u64(settings.seed);
    let mut report = Report::new("verify correspondence", settings.with_timestamp);
    base_provenance(&mut report, settings);
    report.provenance.insert(
        "sign_lambda".into(),
        Cell::Text(format!("{sign_lambda:?}").to_lowercase()),
    );
    report.provenance.insert(
        "sign_mu".into(),
        Cell::Text(format!("{sign_mu:?}").to_lowercase()),
    );
    let factor_names = [
        "factor_diag_pq",
        "factor_diag_pr",
        "factor_diag_qr",
        "factor_circ_pq",
        "factor_circ_pr",
        "factor_circ_qr",
    ];
    let mut worst_ff: f64 = 0.0;
    let mut worst_mod: f64 = 0.0;
    let mut worst_le: f64 = 0.0;
    let mut worst_fp: f64 = 0.0;
    let mut worst_factor: f64 = 0.0;
    let mut worst_unit: f64 = 0.0;
    for trial in 0..settings.trials {
        let (modulus, pts) = sample_configuration(&mut rng, settings.regime, &ctx, 3)?;
        let params =
            params_from_rapidities(&pts[0], &pts[1], &pts[2], sign_lambda, sign_mu, &ctx)?;
        let result =
            correspondence_residuals(&params, &modulus, &pts[0], &pts[1], &pts[2], &ctx)?;
        let unit_gap = (result.r_pqr_value - Complex64::new(1.0, 0.0)).norm();
        worst_ff = worst_ff.max(result.first_four_residual);
        worst_mod = worst_mod.max(result.modulus_residual);
        worst_le = worst_le.max(result.last_eight_residual);
        worst_fp = worst_fp.max(result.first_power_residual);
        worst_unit = worst_unit.max(unit_gap);
        let mut row = Row::new();
        row.insert("trial".into(), Cell::Count(trial as u64));
        row.insert(
            "first_four".into(),
            Cell::Measure(result.first_four_residual),
        );
        row.insert("modulus".into(), Cell::Measure(result.modulus_residual));
        row.insert(
            "last_eight".into(),
            Cell::Measure(result.last_eight_residual),
        );
        row.insert(
            "first_power".into(),
            Cell::Measure(result.first_power_residual),
        );
        for (name, value) in factor_names.iter().zip(result.factor_residuals.iter()) {
            worst_factor = worst_factor.max(*value);
            row.insert((*name).into(), Cell::Measure(*value));
        }
        row.insert("r_unit_gap".into(), Cell::Measure(unit_gap));
        let branch_names = [
            "branch_p_prime",
            "branch_q_prime",
            "branch_p_dprime",
            "branch_q_dprime",
        ];
        for (name, index) in branch_names.iter().zip(result.branch_indices.iter()) {
            row.insert((*name).into(), Cell::Count(*index as u64));
        }
        row.insert(
            "r_root_index".into(),
            Cell::Count(result.r_root_index as u64),
        );
        report.trials.push(row);
    }
    report.finish_check("first_four", FIRST_FOUR_TOLERANCE, worst_ff);
    report.finish_check("modulus", MODULUS_TOLERANCE, worst_mod);
    report.finish_check("last_eight", LAST_EIGHT_TOLERANCE, worst_le);
    report.finish_check("first_power", FIRST_POWER_TOLERANCE, worst_fp);
    report.finish_check("factor", FACTOR_TOLERANCE, worst_factor);
    report.finish_check("r_unit_gap", UNIT_CONSTANT_TOLERANCE, worst_unit);
    Ok(report)
}

pub fn run_dilog12(settings: &VerifySettings) -> Result<Report, CliError> {
    let mut rng = ChaCha20Rng::seed_from_u64(settings.seed);
    let mut report = Report::new("verify dilog12", settings.with_timestamp);
    report
        .provenance
        .insert("seed".into(), Cell::Count(settings.seed));
    report
        .provenance
        .insert("trials".into(), Cell::Count(settings.trials as u64));
    let mut worst: f64 = 0.0;
    let mut worst_grad: f64 = 0.0;
    let log_uniform = move |rng: &mut ChaCha20Rng| -> f64 {
        rng.gen_range((0.1f64).ln()..(10.0f64).ln()).exp()
    };
    for trial in 0..settings.trials {
        let vars = [
            log_uniform(&mut rng),
            log_uniform(&mut rng),
            log_uniform(&mut rng),
            log_uniform(&mut rng),
        ];
        let residual = twelve_term_residual(vars[0], vars[1], vars[2], vars[3])?;
        let mut gradient: f64 = 0.0;
        for i in 0..4 {
            let h = 1e-4 * vars[i];
            let mut hi = vars;
            let mut lo = vars;
            hi[i] += h;
            lo[i] -= h;
            let f_hi = twelve_term_difference(hi[0], hi[1], hi[2], hi[3])?;
            let f_lo = twelve_term_difference(lo[0], lo[1], lo[2], lo[3])?;
            gradient = gradient.max(((f_hi - f_lo) / (2.0 * h)).norm());
        }
        worst = worst.max(residual);
        worst_grad = worst_grad.max(gradient);
        let mut row = Row::new();
        row.insert("trial".into(), Cell::Count(trial as u64));
        row.insert("residual".into(), Cell::Measure(residual));
        row.insert("gradient".into(), Cell::Measure(gradient));
        row.insert("lambda".into(), Cell::Measure(vars[0]));
        row.insert("mu".into(), Cell::Measure(vars[1]));
        row.insert("x_prime".into(), Cell::Measure(vars[2]));
        row.insert("y_prime".into(), Cell::Measure(vars[3]));
        report.trials.push(row);
    }
    report.finish_check("residual", DILOG12_TOLERANCE, worst);
    report.finish_check("gradient", DILOG12_GRADIENT_TOLERANCE, worst_grad);
    Ok(report)
}

pub fn run_substitution(settings: &VerifySettings) -> Result<Report, CliError> {
    let mut rng = ChaCha20Rng::seed_from_u64(settings.seed);
    let mut report = Report::new("verify substitution", settings.with_timestamp);
    report
        .provenance
        .insert("seed".into(), Cell::Count(settings.seed));
    report
        .provenance
        .insert("trials".into(), Cell::Count(settings.trials as u64));
    let mut worst_f1: f64 = 0.0;
    let mut worst_inv: f64 = 0.0;
    let mut worst_comp: f64 = 0.0;
    for trial in 0..settings.trials {
        let mut draw = || -> f64 { rng.gen_range((0.2f64).ln()..(5.0f64).ln()).exp() };
        let (lambda, mu, x, y) = (draw(), draw(), draw(), draw());
        let invariants = substitution_invariants(lambda, mu, x, y)?;
        let lc = Complex64::new(lambda, 0.0);
        let mc = Complex64::new(mu, 0.0);
        let xc = Complex64::new(x, 0.0);
        let yc = Complex64::new(y, 0.0);
        let (xdd, ydd) = saddle_map_second(lc, mc, xc, yc)?;
        let (x2, y2) = saddle_map_second(lc, mc, xdd, ydd)?;
        let involution = (x2 - xc).norm().max((y2 - yc).norm());
        let composed = saddle_composed_residual(lc, mc, xc, yc)?;
        worst_f1 = worst_f1.max(invariants.f1_residual);
        worst_inv = worst_inv.max(involution);
        worst_comp = worst_comp.max(composed);
        let mut row = Row::new();
        row.insert("trial".into(), Cell::Count(trial as u64));
        row.insert("f1_residual".into(), Cell::Measure(invariants.f1_residual));
        row.insert("involution".into(), Cell::Measure(involution));
        row.insert("composed".into(), Cell::Measure(composed));
        report.trials.push(row);
    }
    report.finish_check("f1_residual", SUBSTITUTION_TOLERANCE, worst_f1);
    report.finish_check("involution", SUBSTITUTION_TOLERANCE, worst_inv);
    report.finish_check("composed", SUBSTITUTION_TOLERANCE, worst_comp);
    Ok(report)
}

pub fn run_six_vertex(settings: &VerifySettings, length: usize) -> Result<Report, CliError> {
    let mut rng = ChaCha20Rng::seed_from_u64(settings.seed);
    let mut report = Report::new("verify six-vertex", settings.with_timestamp);
    base_provenance(&mut report, settings);
    report.provenance.remove("regime");
    report
        .provenance
        .insert("length".into(), Cell::Count(length as u64));
    let site = weyl_site(settings.order).map_err(CliError::from)?;
    let scale = |rng: &mut ChaCha20Rng, radial: f64| -> Complex64 {
        Complex64::new(rng.gen_range(-radial..radial), rng.gen_range(-1.0..1.0)).exp()
    };
    let mut worst_rrr: f64 = 0.0;
    let mut worst_rll: f64 = 0.0;
    let mut worst_comm: f64 = 0.0;
    let mut worst_gauge: f64 = 0.0;
    for trial in 0..settings.trials {
        let lambda = scale(&mut rng, 0.7);
        let mu = scale(&mut rng, 0.7);
        let q = scale(&mut rng, 0.5);
        let rrr = six_vertex_ybe_residual(lambda, mu, q)?;

        let c = scale(&mut rng, 0.5);
        let d = scale(&mut rng, 0.5);
        let rll = loperator_exchange_residual(
            lambda,
            mu,
            site.q0,
            &site.u.scale(c),
            &site.v.scale(d),
        )?;

        let nsites = 2 * length;
        let cs: Vec<Complex64> = (0..nsites).map(|_| scale(&mut rng, 0.3)).collect();
        let ds: Vec<Complex64> = (0..nsites).map(|_| scale(&mut rng, 0.3)).collect();
        let chain = SixVertexChain::new(settings.order, length, &cs, &ds)?;
        let kappa = scale(&mut rng, 0.25);
        let lam1 = scale(&mut rng, 0.4);
        let lam2 = scale(&mut rng, 0.4);
        let t1 = chain.transfer(lam1, kappa)?;
        let t2 = chain.transfer(lam2, kappa)?;
        let commutation = relative_deviation(&(&t1 * &t2), &(&t2 * &t1));

        let mut h: Vec<Complex64> = (0..nsites).map(|_| scale(&mut rng, 0.4)).collect();
        let partial: Complex64 = h[..nsites - 1].iter().product();
        h[nsites - 1] = 1.0 / partial;
        let mut j = vec![Complex64::new(1.0, 0.0); nsites];
        j[0] = scale(&mut rng, 0.3);
        for pos in 0..nsites - 1 {
            j[pos + 1] = j[pos] / (h[pos] * h[pos + 1]);
        }
        let cs2: Vec<Complex64> = cs.iter().zip(&h).map(|(c, f)| c * f).collect();
        let ds2: Vec<Complex64> = ds.iter().zip(&j).map(|(d, f)| d * f).collect();
        let gauged = SixVertexChain::new(settings.order, length, &cs2, &ds2)?;
        let t_gauged = gauged.transfer(lam1, kappa)?;
        let gauge = relative_deviation(&t1, &t_gauged);

        worst_rrr = worst_rrr.max(rrr);
        worst_rll = worst_rll.max(rll);
        worst_comm = worst_comm.max(commutation);
        worst_gauge = worst_gauge.max(gauge);
        let mut row = Row::new();
        row.insert("trial".into(), Cell::Count(trial as u64));
        row.insert("rrr_residual".into(), Cell::Measure(rrr));
        row.insert("rll_residual".into(), Cell::Measure(rll));
        row.insert("commutation".into(), Cell::Measure(commutation));
        row.insert("gauge".into(), Cell::Measure(gauge));
        report.trials.push(row);
    }
    report.finish_check("rrr_residual", SIX_VERTEX_YBE_TOLERANCE, worst_rrr);
    report.finish_check("rll_residual", SIX_VERTEX_YBE_TOLERANCE, worst_rll);
    report.finish_check(
        "commutation",
        SIX_VERTEX_COMMUTATION_TOLERANCE,
        worst_comm,
    );
    report.finish_check("gauge", SIX_VERTEX_GAUGE_TOLERANCE, worst_gauge);
    Ok(report)
}

pub fn run_f_identity(settings: &VerifySettings) -> Result<Report, CliError> {
    let ctx = RootContext::new(settings.order)?;
    let mut rng = ChaCha20Rng::seed_from_u64(settings.seed);
    let mut report = Report::new("verify f-identity", settings.with_timestamp);
    base_provenance(&mut report, settings);
    report.provenance.remove("regime");
    let mut worst: f64 = 0.0;
    for trial in 0..settings.trials {
        let kappa = Complex64::new(rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4)).exp();
        let x = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)).exp();
        let residual = cpsg_core::classical::f_factor_identity_residual(kappa, x, &ctx)?;
        worst = worst.max(residual);
        let mut row = Row::new();
        row.insert("trial".into(), Cell::Count(trial as u64));
        row.insert("residual".into(), Cell::Measure(residual));
        row.insert("kappa".into(), Cell::Complex(kappa));
        row.insert("x".into(), Cell::Complex(x));
        report.trials.push(row);
    }
    report.finish_check("residual", F_IDENTITY_TOLERANCE, worst);
    Ok(report)
}
