//! Chiral Potts Boltzmann weights on the curve, their discrete Fourier
//! transforms, the star-triangle relation in scalar and matrix form, and the
//! product identity for the transformed weights.
//!
//! Weight values are generated by the ratio recurrences
//! `W(n)/W(n-1) = (s_p/s_q)(y_q - ω^n x_p)/(y_p - ω^n x_q)` and
//! `W̄(n)/W̄(n-1) = (s_p s_q)(ω x_p - ω^n x_q)/(y_q - ω^n y_p)`.
//! Two normalizations are supported: `Unit` fixes W(0) = W̄(0) = 1; the
//! star-normalized mode rescales both tables so the diagonal and circulant
//! factor matrices built from them coincide with semiclassical r̄ factors and
//! the star-triangle constant becomes 1.

use crate::algebra::{relative_deviation, AlgebraError, DenseOperator, RootContext};
use crate::curve::CurvePoint;
use crate::semiclassical::{rbar, SemiclassicalError};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WeightsError {
    #[error("non-generic rapidity pair: {factor} vanishes at n = {n}")]
    NonGenericPair { factor: &'static str, n: usize },
    #[error("non-generic data: {0} vanishes")]
    DegenerateValue(&'static str),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Semiclassical(#[from] SemiclassicalError),
}

/// Normalization of a weight table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMode {
    /// W(0) = W̄(0) = 1.
    Unit,
    /// Rescaled so the factor matrices equal r̄ factors and the
    /// star-triangle constant is 1.
    StrNormalized,
}

/// Boltzmann weights for one ordered rapidity pair: the N values of W, W̄,
/// and both discrete Fourier transforms.
#[derive(Debug, Clone)]
pub struct WeightTable {
    p: CurvePoint,
    q: CurvePoint,
    w: Vec<Complex64>,
    wbar: Vec<Complex64>,
    w_f: Vec<Complex64>,
    wbar_f: Vec<Complex64>,
    norm: NormMode,
}

impl WeightTable {
    pub fn p(&self) -> &CurvePoint {
        &self.p
    }

    pub fn q(&self) -> &CurvePoint {
        &self.q
    }

    pub fn w(&self) -> &[Complex64] {
        &self.w
    }

    pub fn wbar(&self) -> &[Complex64] {
        &self.wbar
    }

    /// `W^{(f)}(n) = N^{-1} Σ_a W(a) ω^{na}`.
    pub fn w_f(&self) -> &[Complex64] {
        &self.w_f
    }

    /// `W̄^{(f)}(n) = Σ_a W̄(a) ω^{na}`.
    pub fn wbar_f(&self) -> &[Complex64] {
        &self.wbar_f
    }

    pub fn norm_mode(&self) -> NormMode {
        self.norm
    }

    pub fn n(&self) -> usize {
        self.w.len()
    }

    /// W at a spin difference reduced mod N.
    pub fn w_at(&self, n: i64) -> Complex64 {
        self.w[n.rem_euclid(self.w.len() as i64) as usize]
    }

    /// W̄ at a spin difference reduced mod N.
    pub fn wbar_at(&self, n: i64) -> Complex64 {
        self.wbar[n.rem_euclid(self.wbar.len() as i64) as usize]
    }

    /// A copy with W rescaled by `w_factor` and W̄ by `wbar_factor` (both
    /// Fourier transforms scale along). Used by the parameter correspondence,
    /// whose normalization couples the pair to a full rapidity triple.
    pub fn rescaled(&self, w_factor: Complex64, wbar_factor: Complex64) -> WeightTable {
        WeightTable {
            p: self.p,
            q: self.q,
            w: self.w.iter().map(|v| v * w_factor).collect(),
            wbar: self.wbar.iter().map(|v| v * wbar_factor).collect(),
            w_f: self.w_f.iter().map(|v| v * w_factor).collect(),
            wbar_f: self.wbar_f.iter().map(|v| v * wbar_factor).collect(),
            norm: NormMode::StrNormalized,
        }
    }
}

fn checked_factor(
    num: Complex64,
    den: Complex64,
    factor: &'static str,
    n: usize,
) -> Result<Complex64, WeightsError> {
    let scale = num.norm().max(den.norm()).max(1e-30);
    if den.norm() < 1e-14 * scale {
        return Err(WeightsError::NonGenericPair { factor, n });
    }
    Ok(num / den)
}

fn unit_tables(
    p: &CurvePoint,
    q: &CurvePoint,
    ctx: &RootContext,
) -> Result<(Vec<Complex64>, Vec<Complex64>), WeightsError> {
    let n = ctx.n();
    let mut w = vec![Complex64::new(1.0, 0.0); n];
    let mut wbar = vec![Complex64::new(1.0, 0.0); n];
    let omega = ctx.omega();
    for j in 1..n {
        let wj = ctx.omega_pow(j as i64);
        w[j] = w[j - 1]
            * (p.s() / q.s())
            * checked_factor(q.y() - wj * p.x(), p.y() - wj * q.x(), "y_p - ω^n x_q", j)?;
        wbar[j] = wbar[j - 1]
            * (p.s() * q.s())
            * checked_factor(
                omega * p.x() - wj * q.x(),
                q.y() - wj * p.y(),
                "y_q - ω^n y_p",
                j,
            )?;
    }
    Ok((w, wbar))
}

fn dft_wbar(wbar: &[Complex64], ctx: &RootContext) -> Vec<Complex64> {
    let n = ctx.n();
    (0..n)
        .map(|m| {
            (0..n)
                .map(|a| wbar[a] * ctx.omega_pow((m * a) as i64))
                .sum()
        })
        .collect()
}

fn dft_w(w: &[Complex64], ctx: &RootContext) -> Vec<Complex64> {
    let n = ctx.n();
    (0..n)
        .map(|m| {
            (0..n)
                .map(|a| w[a] * ctx.omega_pow((m * a) as i64))
                .sum::<Complex64>()
                / n as f64
        })
        .collect()
}

/// The pair coupling `λ_pq = √(t_q/t_p)` (principal branch) used by the
/// star-normalized mode and the parameter correspondence.
pub fn pair_coupling(p: &CurvePoint, q: &CurvePoint) -> Result<Complex64, WeightsError> {
    if p.t().norm() == 0.0 || q.t().norm() == 0.0 {
        return Err(WeightsError::DegenerateValue("rapidity product t = xy"));
    }
    Ok((q.t() / p.t()).sqrt())
}

/// Builds the weight table for the ordered pair (p, q).
pub fn weight_tables(
    p: &CurvePoint,
    q: &CurvePoint,
    mode: NormMode,
    ctx: &RootContext,
) -> Result<WeightTable, WeightsError> {
    let (mut w, mut wbar) = unit_tables(p, q, ctx)?;
    if mode == NormMode::StrNormalized {
        let lambda = pair_coupling(p, q)?;
        if q.y().norm() == 0.0 {
            return Err(WeightsError::DegenerateValue("y_q"));
        }
        let diag_scale = rbar(ctx, lambda, ctx.omega_half() * lambda * p.x() / q.y())?;
        let circ_target = rbar(
            ctx,
            lambda,
            ctx.omega_half() * lambda * p.x() * p.s() * q.s() / q.y(),
        )?;
        let wbar_f0: Complex64 = wbar.iter().sum();
        if wbar_f0.norm() < 1e-14 * wbar.iter().map(|v| v.norm()).sum::<f64>().max(1e-30) {
            return Err(WeightsError::DegenerateValue("W̄^{(f)}(0)"));
        }
        let circ_scale = circ_target / wbar_f0;
        for v in w.iter_mut() {
            *v *= diag_scale;
        }
        for v in wbar.iter_mut() {
            *v *= circ_scale;
        }
    }
    let w_f = dft_w(&w, ctx);
    let wbar_f = dft_wbar(&wbar, ctx);
    Ok(WeightTable {
        p: *p,
        q: *q,
        w,
        wbar,
        w_f,
        wbar_f,
        norm: mode,
    })
}

/// Max relative deviation of the transformed-weight recurrence
/// `W̄^{(f)}(n)/W̄^{(f)}(n-1) = (y_q - ω^n x_p s_p s_q)/(y_p - ω^n x_q s_p s_q)`
/// against the table's DFT values.
pub fn wbar_f_closed_form_residual(table: &WeightTable, ctx: &RootContext) -> f64 {
    let (p, q) = (&table.p, &table.q);
    let ss = p.s() * q.s();
    let mut worst: f64 = 0.0;
    let mut prev = table.wbar_f[0];
    for n in 1..ctx.n() {
        let wn = ctx.omega_pow(n as i64);
        let closed = prev * (q.y() - wn * p.x() * ss) / (p.y() - wn * q.x() * ss);
        let dft = table.wbar_f[n];
        worst = worst.max((dft - closed).norm() / dft.norm().max(closed.norm()).max(1e-300));
        prev = closed;
    }
    worst
}

/// Deviations |∏ - 1| of the full cyclic ratio products of W and W̄; both
/// vanish identically when p and q lie on one curve, so these measure curve
/// membership through the weights alone.
pub fn periodicity_residuals(
    p: &CurvePoint,
    q: &CurvePoint,
    ctx: &RootContext,
) -> Result<(f64, f64), WeightsError> {
    let n = ctx.n();
    let omega = ctx.omega();
    let mut prod_w = Complex64::new(1.0, 0.0);
    let mut prod_wbar = Complex64::new(1.0, 0.0);
    for j in 1..=n {
        let wj = ctx.omega_pow(j as i64);
        prod_w *= (p.s() / q.s())
            * checked_factor(q.y() - wj * p.x(), p.y() - wj * q.x(), "y_p - ω^n x_q", j)?;
        prod_wbar *= (p.s() * q.s())
            * checked_factor(
                omega * p.x() - wj * q.x(),
                q.y() - wj * p.y(),
                "y_q - ω^n y_p",
                j,
            )?;
    }
    Ok(((prod_w - 1.0).norm(), (prod_wbar - 1.0).norm()))
}

/// Max relative deviation of the generating recurrence for W (the scalar
/// function F at Y = ω^n against its Y → ω^{-1}Y ratio form).
pub fn recurrence_residual(table: &WeightTable, ctx: &RootContext) -> f64 {
    let (p, q) = (&table.p, &table.q);
    let mut worst: f64 = 0.0;
    for n in 1..ctx.n() {
        let wn = ctx.omega_pow(n as i64);
        let expected =
            (p.s() / q.s()) * (q.y() - wn * p.x()) / (p.y() - wn * q.x()) * table.w[n - 1];
        worst = worst
            .max((table.w[n] - expected).norm() / expected.norm().max(table.w[n].norm()).max(1e-300));
    }
    worst
}

/// Scalar star-triangle outcome: the max relative deviation over all N³
/// spin triples, the constant R_pqr, and the ω-power index selecting its
/// N-th root.
#[derive(Debug, Clone, Copy)]
pub struct StarTriangleReport {
    pub residual: f64,
    pub r_pqr: Complex64,
    pub root_index: usize,
}

fn f_pq_nth_power(table: &WeightTable) -> Result<Complex64, WeightsError> {
    let mut out = Complex64::new(1.0, 0.0);
    for (wf, w) in table.wbar_f.iter().zip(&table.w) {
        if w.norm() == 0.0 {
            return Err(WeightsError::DegenerateValue("W weight in f_pq"));
        }
        out *= wf / w;
    }
    Ok(out)
}

fn str_sides(
    tab_pq: &WeightTable,
    tab_pr: &WeightTable,
    tab_qr: &WeightTable,
    n: usize,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let idx = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
    let mut lhs = vec![Complex64::new(0.0, 0.0); n * n * n];
    let mut rhs = vec![Complex64::new(0.0, 0.0); n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for d in 0..n {
                    acc += tab_qr.wbar_at(b as i64 - d as i64)
                        * tab_pr.w_at(a as i64 - d as i64)
                        * tab_pq.wbar_at(d as i64 - c as i64);
                }
                lhs[idx(a, b, c)] = acc;
                rhs[idx(a, b, c)] = tab_pq.w_at(a as i64 - b as i64)
                    * tab_pr.wbar_at(b as i64 - c as i64)
                    * tab_qr.w_at(a as i64 - c as i64);
            }
        }
    }
    (lhs, rhs)
}

/// Scalar star-triangle check on caller-supplied tables (any normalization);
/// the constant's N-th root is fixed at a generic spin probe and reported.
pub fn star_triangle_with_tables(
    tab_pq: &WeightTable,
    tab_pr: &WeightTable,
    tab_qr: &WeightTable,
    ctx: &RootContext,
) -> Result<StarTriangleReport, WeightsError> {
    let n = ctx.n();
    let rn = f_pq_nth_power(tab_pq)? * f_pq_nth_power(tab_qr)? / f_pq_nth_power(tab_pr)?;
    let r0 = rn.powf(1.0 / n as f64);
    let (lhs, rhs) = str_sides(tab_pq, tab_pr, tab_qr, n);

    let probe = (1 % n) * n + (2 % n);
    let (mut root_index, mut r_best) = (0usize, r0);
    let mut best_dev = f64::INFINITY;
    for m in 0..n {
        let r = r0 * ctx.omega_pow(m as i64);
        let dev = (lhs[probe] - r * rhs[probe]).norm();
        if dev < best_dev {
            best_dev = dev;
            root_index = m;
            r_best = r;
        }
    }

    let mut max_dev: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for (l, r) in lhs.iter().zip(&rhs) {
        let rr = r_best * r;
        max_dev = max_dev.max((l - rr).norm());
        scale = scale.max(l.norm()).max(rr.norm());
    }
    Ok(StarTriangleReport {
        residual: max_dev / scale.max(1e-300),
        r_pqr: r_best,
        root_index,
    })
}

/// Verifies the star-triangle relation
/// `Σ_d W̄_qr(b-d) W_pr(a-d) W̄_pq(d-c) = R_pqr W_pq(a-b) W̄_pr(b-c) W_qr(a-c)`
/// on unit-normalized tables for the triple (p, q, r).
pub fn star_triangle_residual(
    p: &CurvePoint,
    q: &CurvePoint,
    r: &CurvePoint,
    ctx: &RootContext,
) -> Result<StarTriangleReport, WeightsError> {
    let tab_pq = weight_tables(p, q, NormMode::Unit, ctx)?;
    let tab_pr = weight_tables(p, r, NormMode::Unit, ctx)?;
    let tab_qr = weight_tables(q, r, NormMode::Unit, ctx)?;
    star_triangle_with_tables(&tab_pq, &tab_pr, &tab_qr, ctx)
}

/// The diagonal and circulant factor matrices of a weight table:
/// `F(p,q;Z^{-1})` with diagonal entries W((-a) mod N), and `F̄(p,q;X)` with
/// entries W̄((a-b) mod N).
pub fn weight_matrices(
    table: &WeightTable,
) -> Result<(DenseOperator, DenseOperator), WeightsError> {
    let n = table.n();
    let f_diag = DenseOperator::from_fn(n, |a, b| {
        if a == b {
            table.w_at(-(a as i64))
        } else {
            Complex64::new(0.0, 0.0)
        }
    })?;
    let f_bar = DenseOperator::from_fn(n, |a, b| table.wbar_at(a as i64 - b as i64))?;
    Ok((f_diag, f_bar))
}

/// Residual of the matrix star-triangle relation
/// `F(p,q;Z^{-1}) F̄(p,r;X) F(q,r;Z^{-1}) = R^{-1} F̄(q,r;X) F(p,r;Z^{-1}) F̄(p,q;X)`
/// with R taken from the scalar relation on the same tables.
pub fn str_matrix_residual(
    p: &CurvePoint,
    q: &CurvePoint,
    r: &CurvePoint,
    ctx: &RootContext,
) -> Result<f64, WeightsError> {
    let tab_pq = weight_tables(p, q, NormMode::Unit, ctx)?;
    let tab_pr = weight_tables(p, r, NormMode::Unit, ctx)?;
    let tab_qr = weight_tables(q, r, NormMode::Unit, ctx)?;
    let report = star_triangle_with_tables(&tab_pq, &tab_pr, &tab_qr, ctx)?;

    let (f_pq, fb_pq) = weight_matrices(&tab_pq)?;
    let (f_pr, fb_pr) = weight_matrices(&tab_pr)?;
    let (f_qr, fb_qr) = weight_matrices(&tab_qr)?;
    let lhs = &(&f_pq * &fb_pr) * &f_qr;
    if report.r_pqr.norm() == 0.0 {
        return Err(WeightsError::DegenerateValue("R_pqr"));
    }
    let rhs = (&(&fb_qr * &f_pr) * &fb_pq).scale(report.r_pqr.inv());
    Ok(relative_deviation(&lhs, &rhs))
}

/// Relative residual of the product identity
/// `∏_j W̄^{(f)}(j) = W̄(0)^N N^{N/2} e^{-iπ(N-1)(N-2)/12}
///   ∏_{j=1}^{N-1} (t_p - ω^j t_q)^j / ((x_p - ω^j x_q)^j (y_p - ω^j y_q)^j)`.
pub fn product_identity_residual(
    p: &CurvePoint,
    q: &CurvePoint,
    ctx: &RootContext,
) -> Result<f64, WeightsError> {
    let table = weight_tables(p, q, NormMode::Unit, ctx)?;
    let n = ctx.n();
    let lhs: Complex64 = table.wbar_f.iter().product();
    let nf = n as f64;
    let phase = Complex64::from_polar(1.0, -std::f64::consts::PI * (nf - 1.0) * (nf - 2.0) / 12.0);
    let mut rhs = table.wbar[0].powi(n as i32) * nf.powf(nf / 2.0) * phase;
    for j in 1..n {
        let wj = ctx.omega_pow(j as i64);
        let den = (p.x() - wj * q.x()).powi(j as i32) * (p.y() - wj * q.y()).powi(j as i32);
        if den.norm() == 0.0 {
            return Err(WeightsError::DegenerateValue("product-identity factor"));
        }
        rhs *= (p.t() - wj * q.t()).powi(j as i32) / den;
    }
    if lhs.norm() == 0.0 {
        return Err(WeightsError::DegenerateValue("∏ W̄^{(f)}"));
    }
    Ok((lhs - rhs).norm() / lhs.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{sample_modulus, sample_point, Regime};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn sample_pair(
        n: usize,
        seed: u64,
        regime: Regime,
    ) -> (CurvePoint, CurvePoint, RootContext) {
        let ctx = RootContext::new(n).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let modulus = sample_modulus(&mut rng, regime);
        let p = sample_point(&mut rng, &modulus, regime, &ctx).unwrap().point;
        let q = sample_point(&mut rng, &modulus, regime, &ctx).unwrap().point;
        (p, q, ctx)
    }

    #[test]
    fn coincident_pair_gives_trivial_tables() {
        let (p, _, ctx) = sample_pair(4, 3, Regime::RealBranchSafe);
        let table = weight_tables(&p, &p, NormMode::Unit, &ctx).unwrap();
        for n in 0..4 {
            assert!((table.w[n] - Complex64::new(1.0, 0.0)).norm() < 1e-13);
        }
        assert!((table.wbar[0] - Complex64::new(1.0, 0.0)).norm() < 1e-13);
        for n in 1..4 {
            assert!(table.wbar[n].norm() < 1e-13, "W̄ should be a delta");
        }
    }

    #[test]
    fn fourier_transforms_and_closed_form() {
        for n in [2usize, 3, 5, 7] {
            let (p, q, ctx) = sample_pair(n, 10 + n as u64, Regime::RealBranchSafe);
            let table = weight_tables(&p, &q, NormMode::Unit, &ctx).unwrap();
            // Inverse DFT of wbar_f recovers wbar.
            for m in 0..n {
                let inv: Complex64 = (0..n)
                    .map(|k| table.wbar_f[k] * ctx.omega_pow(-((m * k) as i64)))
                    .sum::<Complex64>()
                    / n as f64;
                assert!((inv - table.wbar[m]).norm() < 1e-11 * table.wbar[m].norm().max(1.0));
            }
            assert!(
                wbar_f_closed_form_residual(&table, &ctx) < 1e-11,
                "closed form at N={n}"
            );
        }
    }

    #[test]
    fn periodicity_requires_curve_membership() {
        let (p, q, ctx) = sample_pair(3, 21, Regime::Generic);
        let (res_w, res_wbar) = periodicity_residuals(&p, &q, &ctx).unwrap();
        assert!(res_w < 1e-10, "on-curve W periodicity, got {res_w:.2e}");
        assert!(res_wbar < 1e-10, "on-curve W̄ periodicity, got {res_wbar:.2e}");
        let off = CurvePoint::from_parts(p.x() * 1.01, p.y(), p.s());
        let (off_w, _) = periodicity_residuals(&off, &q, &ctx).unwrap();
        assert!(off_w > 1e-3, "off-curve perturbation must break periodicity");
    }

    #[test]
    fn recurrence_matches_table() {
        let (p, q, ctx) = sample_pair(5, 33, Regime::Generic);
        let table = weight_tables(&p, &q, NormMode::Unit, &ctx).unwrap();
        assert!(recurrence_residual(&table, &ctx) < 1e-11);
    }

    #[test]
    fn star_triangle_scalar_and_matrix_agree() {
        for n in [2usize, 3, 4] {
            let ctx = RootContext::new(n).unwrap();
            let mut rng = ChaCha20Rng::seed_from_u64(40 + n as u64);
            for trial in 0..10 {
                let regime = if trial % 2 == 0 {
                    Regime::RealBranchSafe
                } else {
                    Regime::Generic
                };
                let modulus = sample_modulus(&mut rng, regime);
                let p = sample_point(&mut rng, &modulus, regime, &ctx).unwrap().point;
                let q = sample_point(&mut rng, &modulus, regime, &ctx).unwrap().point;
                let r = sample_point(&mut rng, &modulus, regime, &ctx).unwrap().point;
                let report = star_triangle_residual(&p, &q, &r, &ctx).unwrap();
                assert!(
                    report.residual < 1e-10,
                    "scalar STR {:.2e} at N={n}",
                    report.residual
                );
                let matrix = str_matrix_residual(&p, &q, &r, &ctx).unwrap();
                assert!(
                    (matrix - report.residual).abs() < 1e-12,
                    "matrix {matrix:.2e} vs scalar {:.2e}",
                    report.residual
                );
            }
        }
    }

    #[test]
    fn star_triangle_collapses_for_coincident_points() {
        let (p, r, ctx) = sample_pair(3, 57, Regime::RealBranchSafe);
        let report = star_triangle_residual(&p, &p, &r, &ctx).unwrap();
        assert!(report.residual < 1e-12, "q = p collapse, {:.2e}", report.residual);
    }

    #[test]
    fn scalar_case_is_exact() {
        let (p, q, ctx) = sample_pair(1, 61, Regime::RealBranchSafe);
        let report = star_triangle_residual(&p, &q, &q, &ctx).unwrap();
        assert!(report.residual < 1e-14);
        assert!(str_matrix_residual(&p, &q, &q, &ctx).unwrap() < 1e-14);
    }

    #[test]
    fn diagonal_factor_holds_weight_values() {
        let (p, q, ctx) = sample_pair(4, 71, Regime::RealBranchSafe);
        let table = weight_tables(&p, &q, NormMode::Unit, &ctx).unwrap();
        let (f_diag, f_bar) = weight_matrices(&table).unwrap();
        for a in 0..4usize {
            let expect = table.w[(4 - a) % 4];
            assert_eq!(f_diag.get(a, a), expect);
            for b in 0..4usize {
                assert_eq!(f_bar.get(a, b), table.wbar[(a + 4 - b) % 4]);
            }
        }
    }

    #[test]
    fn product_identity_holds() {
        for n in [1usize, 2, 3, 4, 5, 6] {
            let (p, q, ctx) = sample_pair(n, 80 + n as u64, Regime::RealBranchSafe);
            let res = product_identity_residual(&p, &q, &ctx).unwrap();
            assert!(res < 1e-10, "product identity {res:.2e} at N={n}");
        }
    }

    #[test]
    fn str_normalized_tables_rescale_consistently() {
        let (p, q, ctx) = sample_pair(3, 91, Regime::RealBranchSafe);
        let unit = weight_tables(&p, &q, NormMode::Unit, &ctx).unwrap();
        let snorm = weight_tables(&p, &q, NormMode::StrNormalized, &ctx).unwrap();
        let lambda = pair_coupling(&p, &q).unwrap();
        let w0 = rbar(&ctx, lambda, ctx.omega_half() * lambda * p.x() / q.y()).unwrap();
        assert!((snorm.w[0] - w0).norm() < 1e-13);
        let wf0_target = rbar(
            &ctx,
            lambda,
            ctx.omega_half() * lambda * p.x() * p.s() * q.s() / q.y(),
        )
        .unwrap();
        assert!((snorm.wbar_f[0] - wf0_target).norm() < 1e-13 * wf0_target.norm());
        // Ratios within each table are unchanged by the rescaling.
        for n in 1..3 {
            let ratio_unit = unit.w[n] / unit.w[0];
            let ratio_norm = snorm.w[n] / snorm.w[0];
            assert!((ratio_unit - ratio_norm).norm() < 1e-12 * ratio_unit.norm());
        }
    }
}
