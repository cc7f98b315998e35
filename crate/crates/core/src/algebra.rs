//! Clock and shift operators at a root of unity and a small dense operator
//! calculus.
//!
//! The conventions are fixed once here and used everywhere else:
//! `q0 = -exp(iπ/N)`, `ω = q0^{-2} = exp(-2iπ/N)`, and the square root
//! `ω^{1/2} = -1/q0 = exp(-iπ/N)`, which satisfies `(ω^{1/2})^N = -1` for
//! every N. The clock operator Z is `diag(ω^a)` and the shift operator X has
//! entries `X[a][b] = δ_{a, b+1 mod N}`, so that `X Z = q0² Z X` and
//! `X^N = Z^N = 1`.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Hard cap on the dimension of dense operators. Everything in this crate is
/// desk-scale; refusing larger allocations early beats an OOM later.
pub const MAX_DENSE_DIM: usize = 4096;

/// Errors from operator construction and the spectral calculus.
#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("root-of-unity order must be at least 1, got {0}")]
    InvalidOrder(usize),
    #[error("operator dimension {dim} exceeds the dense cap {MAX_DENSE_DIM}")]
    DimensionCap { dim: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is singular to working precision (pivot magnitude {pivot:.3e})")]
    Singular { pivot: f64 },
    #[error(
        "spectral functions are defined only for diagonal operators and scalar \
         multiples of shift powers"
    )]
    UnsupportedSpectralOperand,
    #[error("shift-monomial operand has dimension {dim} but the root context has order {n}")]
    SpectralOrderMismatch { dim: usize, n: usize },
}

/// Primitive root data of order N, with the square root of ω pinned to the
/// branch used throughout the crate.
#[derive(Debug, Clone)]
pub struct RootContext {
    n: usize,
    q0: Complex64,
    omega: Complex64,
    omega_half: Complex64,
}

impl RootContext {
    /// Builds the canonical context for order `n ≥ 1`.
    pub fn new(n: usize) -> Result<Self, AlgebraError> {
        if n == 0 {
            return Err(AlgebraError::InvalidOrder(n));
        }
        let nf = n as f64;
        let q0 = -Complex64::from_polar(1.0, PI / nf);
        let omega = Complex64::from_polar(1.0, -2.0 * PI / nf);
        let omega_half = Complex64::from_polar(1.0, -PI / nf);
        Ok(Self {
            n,
            q0,
            omega,
            omega_half,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q0(&self) -> Complex64 {
        self.q0
    }

    pub fn omega(&self) -> Complex64 {
        self.omega
    }

    /// The square root of ω with `(ω^{1/2})^N = -1`.
    pub fn omega_half(&self) -> Complex64 {
        self.omega_half
    }

    /// `ω^{-1/2} = -q0 = exp(iπ/N)`.
    pub fn omega_inv_half(&self) -> Complex64 {
        Complex64::from_polar(1.0, PI / self.n as f64)
    }

    /// `ω^k` computed from the reduced angle, exact for any integer k.
    pub fn omega_pow(&self, k: i64) -> Complex64 {
        let m = k.rem_euclid(self.n as i64) as f64;
        Complex64::from_polar(1.0, -2.0 * PI * m / self.n as f64)
    }

    /// `q0^k = (-1)^k exp(iπ k/N)`, reduced modulo the period 2N.
    pub fn q0_pow(&self, k: i64) -> Complex64 {
        let m = k.rem_euclid(2 * self.n as i64);
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        sign * Complex64::from_polar(1.0, PI * m as f64 / self.n as f64)
    }
}

/// Dense complex square matrix in row-major order.
///
/// Arithmetic between operators of different dimensions is a programming
/// error and panics; constructors enforce the [`MAX_DENSE_DIM`] cap and
/// return [`AlgebraError::DimensionCap`] beyond it.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseOperator {
    pub fn zeros(dim: usize) -> Result<Self, AlgebraError> {
        if dim == 0 {
            return Err(AlgebraError::InvalidOrder(0));
        }
        if dim > MAX_DENSE_DIM {
            return Err(AlgebraError::DimensionCap { dim });
        }
        Ok(Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self, AlgebraError> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    pub fn from_fn(
        dim: usize,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Result<Self, AlgebraError> {
        let mut m = Self::zeros(dim)?;
        for r in 0..dim {
            for c in 0..dim {
                m.data[r * dim + c] = f(r, c);
            }
        }
        Ok(m)
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Result<Self, AlgebraError> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &v) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = v;
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.dim).expect("dim already validated");
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.data[c * self.dim + r] = self.data[r * self.dim + c].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Integer matrix power by repeated squaring.
    pub fn pow(&self, mut exp: u64) -> Self {
        let mut result = Self::identity(self.dim).expect("dim already validated");
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        result
    }

    /// Kronecker product; the result dimension is capped like any other
    /// constructor.
    pub fn kron(&self, other: &Self) -> Result<Self, AlgebraError> {
        let dim = self
            .dim
            .checked_mul(other.dim)
            .ok_or(AlgebraError::DimensionCap { dim: usize::MAX })?;
        let mut out = Self::zeros(dim)?;
        for r1 in 0..self.dim {
            for c1 in 0..self.dim {
                let a = self.get(r1, c1);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for r2 in 0..other.dim {
                    for c2 in 0..other.dim {
                        out.set(
                            r1 * other.dim + r2,
                            c1 * other.dim + c2,
                            a * other.get(r2, c2),
                        );
                    }
                }
            }
        }
        Ok(out)
    }

    /// Gauss-Jordan inverse with partial pivoting.
    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut inv = Self::identity(n)?.data;
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let (pivot_row, pivot_mag) = (col..n)
                .map(|r| (r, a[r * n + col].norm()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .expect("nonempty range");
            if pivot_mag < 1e-14 * scale {
                return Err(AlgebraError::Singular { pivot: pivot_mag });
            }
            if pivot_row != col {
                for k in 0..n {
                    a.swap(pivot_row * n + k, col * n + k);
                    inv.swap(pivot_row * n + k, col * n + k);
                }
            }
            let pivot = a[col * n + col];
            for k in 0..n {
                a[col * n + k] /= pivot;
                inv[col * n + k] /= pivot;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * n + col];
                if factor.norm_sqr() == 0.0 {
                    continue;
                }
                for k in 0..n {
                    let sub_a = a[col * n + k] * factor;
                    a[r * n + k] -= sub_a;
                    let sub_i = inv[col * n + k] * factor;
                    inv[r * n + k] -= sub_i;
                }
            }
        }
        Ok(Self { dim: n, data: inv })
    }
}

impl Mul for &DenseOperator {
    type Output = DenseOperator;

    fn mul(self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(
            self.dim, rhs.dim,
            "operator product requires equal dimensions"
        );
        let n = self.dim;
        let mut out = DenseOperator::zeros(n).expect("dim already validated");
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[r * n..(r + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Add for &DenseOperator {
    type Output = DenseOperator;

    fn add(self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(self.dim, rhs.dim, "operator sum requires equal dimensions");
        DenseOperator {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &DenseOperator {
    type Output = DenseOperator;

    fn sub(self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(
            self.dim, rhs.dim,
            "operator difference requires equal dimensions"
        );
        DenseOperator {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &DenseOperator {
    type Output = DenseOperator;

    fn neg(self) -> DenseOperator {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// Max-entry deviation between `a` and `b`, relative to the larger of the
/// two max-entry norms. Returns 0 for two zero operators.
pub fn relative_deviation(a: &DenseOperator, b: &DenseOperator) -> f64 {
    assert_eq!(a.dim, b.dim, "deviation requires equal dimensions");
    let scale = a.max_abs().max(b.max_abs());
    if scale == 0.0 {
        return 0.0;
    }
    let diff = (a - b).max_abs();
    diff / scale
}

/// Builds the clock and shift pair `(Z, X)` of order `ctx.n()`:
/// `Z = diag(ω^a)` and `X[a][b] = δ_{a, b+1 mod N}`.
pub fn clock_shift(ctx: &RootContext) -> Result<(DenseOperator, DenseOperator), AlgebraError> {
    let n = ctx.n();
    let mut z = DenseOperator::zeros(n)?;
    let mut x = DenseOperator::zeros(n)?;
    for a in 0..n {
        z.set(a, a, ctx.omega_pow(a as i64));
        x.set(a, (a + n - 1) % n, Complex64::new(1.0, 0.0));
    }
    Ok((z, x))
}

/// What the spectral calculus recognized in an operand.
#[derive(Debug, Clone)]
pub enum SpectralOperand {
    /// A diagonal operator with the given diagonal.
    Diagonal(Vec<Complex64>),
    /// `coeff · X^power` for the shift operator X of the same dimension.
    ShiftMonomial { coeff: Complex64, power: usize },
}

/// Classifies an operand for [`operator_function`]: either diagonal or a
/// scalar multiple of a shift power. Anything else (in particular mixed
/// clock/shift monomials) is rejected.
pub fn classify_spectral_operand(op: &DenseOperator) -> Result<SpectralOperand, AlgebraError> {
    let n = op.dim();
    let scale = op.max_abs();
    let tol = 1e-12 * scale.max(f64::MIN_POSITIVE);

    let mut diagonal = true;
    for r in 0..n {
        for c in 0..n {
            if r != c && op.get(r, c).norm() > tol {
                diagonal = false;
            }
        }
    }
    if diagonal {
        return Ok(SpectralOperand::Diagonal(
            (0..n).map(|i| op.get(i, i)).collect(),
        ));
    }

    let mut live_offsets = Vec::new();
    for d in 0..n {
        let live = (0..n).any(|r| op.get(r, (r + n - d) % n).norm() > tol);
        if live {
            live_offsets.push(d);
        }
    }
    if live_offsets.len() != 1 {
        return Err(AlgebraError::UnsupportedSpectralOperand);
    }
    let power = live_offsets[0];
    let coeff = op.get(0, (n - power) % n);
    for r in 0..n {
        if (op.get(r, (r + n - power) % n) - coeff).norm() > tol {
            return Err(AlgebraError::UnsupportedSpectralOperand);
        }
    }
    Ok(SpectralOperand::ShiftMonomial { coeff, power })
}

/// Applies a scalar function to an operator through its spectrum.
///
/// For a diagonal operand the function acts entrywise on the diagonal. For a
/// shift monomial `c·X^a` the result is the circulant
/// `f(c·X^a)[r][c] = N^{-1} Σ_k f(c ω^{-ak}) ω^{(r-c)k}`, using the discrete
/// Fourier basis that diagonalizes X. Other operands are rejected.
pub fn operator_function(
    op: &DenseOperator,
    f: impl Fn(Complex64) -> Complex64,
    ctx: &RootContext,
) -> Result<DenseOperator, AlgebraError> {
    match classify_spectral_operand(op)? {
        SpectralOperand::Diagonal(diag) => {
            let values: Vec<Complex64> = diag.into_iter().map(f).collect();
            DenseOperator::from_diagonal(&values)
        }
        SpectralOperand::ShiftMonomial { coeff, power } => {
            let n = op.dim();
            if n != ctx.n() {
                return Err(AlgebraError::SpectralOrderMismatch { dim: n, n: ctx.n() });
            }
            let spectrum: Vec<Complex64> = (0..n)
                .map(|k| f(coeff * ctx.omega_pow(-((power * k) as i64))))
                .collect();
            let inv_n = Complex64::new(1.0 / n as f64, 0.0);
            DenseOperator::from_fn(n, |r, c| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &fv) in spectrum.iter().enumerate() {
                    let phase = ctx.omega_pow((r as i64 - c as i64) * k as i64);
                    acc += fv * phase;
                }
                acc * inv_n
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn root_context_invariants() {
        for n in 1..=8 {
            let ctx = RootContext::new(n).unwrap();
            let nf = n as i64;
            assert!((ctx.q0_pow(2 * nf) - c(1.0, 0.0)).norm() < 1e-14, "q0^(2N)=1");
            assert!((ctx.omega() * ctx.q0() * ctx.q0() - c(1.0, 0.0)).norm() < 1e-14);
            assert!((ctx.omega_half() * ctx.omega_half() - ctx.omega()).norm() < 1e-14);
            let mut wh_n = c(1.0, 0.0);
            for _ in 0..n {
                wh_n *= ctx.omega_half();
            }
            assert!((wh_n + c(1.0, 0.0)).norm() < 1e-13, "(omega_half)^N = -1");
            let mut mq0_n = c(1.0, 0.0);
            for _ in 0..n {
                mq0_n *= -ctx.q0();
            }
            assert!((mq0_n + c(1.0, 0.0)).norm() < 1e-13, "(-q0)^N = -1");
            assert!((ctx.omega_inv_half() * ctx.omega_half() - c(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn root_context_rejects_zero_order() {
        assert!(matches!(
            RootContext::new(0),
            Err(AlgebraError::InvalidOrder(0))
        ));
    }

    #[test]
    fn omega_pow_is_additive() {
        let ctx = RootContext::new(7).unwrap();
        for a in [-13i64, -1, 0, 3, 6, 20, 701] {
            for b in [-5i64, 2, 9, 1000] {
                let lhs = ctx.omega_pow(a + b);
                let rhs = ctx.omega_pow(a) * ctx.omega_pow(b);
                assert!((lhs - rhs).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn clock_shift_weyl_relation() {
        for n in 1..=8 {
            let ctx = RootContext::new(n).unwrap();
            let (z, x) = clock_shift(&ctx).unwrap();
            let q0sq = ctx.q0() * ctx.q0();
            let lhs = &x * &z;
            let rhs = (&z * &x).scale(q0sq);
            assert!(relative_deviation(&lhs, &rhs) < 1e-13, "XZ = q0^2 ZX at N={n}");
            let id = DenseOperator::identity(n).unwrap();
            assert!((&x.pow(n as u64) - &id).max_abs() < 1e-12, "X^N = 1 at N={n}");
            assert!((&z.pow(n as u64) - &id).max_abs() < 1e-12, "Z^N = 1 at N={n}");
        }
    }

    #[test]
    fn clock_shift_explicit_order_two() {
        let ctx = RootContext::new(2).unwrap();
        let (z, x) = clock_shift(&ctx).unwrap();
        assert!((x.get(0, 1) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((x.get(1, 0) - c(1.0, 0.0)).norm() < 1e-15);
        assert!(x.get(0, 0).norm() < 1e-15 && x.get(1, 1).norm() < 1e-15);
        assert!((z.get(0, 0) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((z.get(1, 1) + c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn operator_function_diagonal_applies_entrywise() {
        let diag = [c(0.5, 0.1), c(-2.0, 0.0), c(0.0, 1.5)];
        let op = DenseOperator::from_diagonal(&diag).unwrap();
        let ctx = RootContext::new(3).unwrap();
        let out = operator_function(&op, |z| z * z + c(1.0, 0.0), &ctx).unwrap();
        for (i, &d) in diag.iter().enumerate() {
            assert!((out.get(i, i) - (d * d + c(1.0, 0.0))).norm() < 1e-14);
        }
    }

    #[test]
    fn operator_function_shift_monomial_matches_polynomial() {
        for n in [2usize, 3, 5] {
            let ctx = RootContext::new(n).unwrap();
            let (_, x) = clock_shift(&ctx).unwrap();
            let coeff = c(0.7, 0.2);
            let op = x.scale(coeff);
            let f = |z: Complex64| z * z * z + c(0.5, -0.3) * z + c(2.0, 0.0);
            let spectral = operator_function(&op, f, &ctx).unwrap();
            let direct = {
                let id = DenseOperator::identity(n).unwrap();
                let cube = &(&op * &op) * &op;
                &(&cube + &op.scale(c(0.5, -0.3))) + &id.scale(c(2.0, 0.0))
            };
            assert!(relative_deviation(&spectral, &direct) < 1e-13, "N={n}");
        }
    }

    #[test]
    fn operator_function_shift_power_two() {
        let n = 5;
        let ctx = RootContext::new(n).unwrap();
        let (_, x) = clock_shift(&ctx).unwrap();
        let op = (&x * &x).scale(c(1.3, -0.4));
        let f = |z: Complex64| z * z + c(0.25, 0.0);
        let spectral = operator_function(&op, f, &ctx).unwrap();
        let id = DenseOperator::identity(n).unwrap();
        let direct = &(&op * &op) + &id.scale(c(0.25, 0.0));
        assert!(relative_deviation(&spectral, &direct) < 1e-13);
    }

    #[test]
    fn operator_function_rejects_mixed_monomials() {
        let ctx = RootContext::new(4).unwrap();
        let (z, x) = clock_shift(&ctx).unwrap();
        let mixed = &z + &x;
        assert!(matches!(
            operator_function(&mixed, |v| v, &ctx),
            Err(AlgebraError::UnsupportedSpectralOperand)
        ));
    }

    #[test]
    fn operator_function_rejects_unequal_shift_entries() {
        let mut op = DenseOperator::zeros(3).unwrap();
        op.set(0, 2, c(1.0, 0.0));
        op.set(1, 0, c(1.0, 0.0));
        op.set(2, 1, c(2.0, 0.0));
        let ctx = RootContext::new(3).unwrap();
        assert!(matches!(
            operator_function(&op, |v| v, &ctx),
            Err(AlgebraError::UnsupportedSpectralOperand)
        ));
    }

    #[test]
    fn inverse_round_trip() {
        let dim = 6;
        let m = DenseOperator::from_fn(dim, |r, c_| {
            let fr = r as f64;
            let fc = c_ as f64;
            c(
                (fr * 1.3 + fc * 0.7).sin() + if r == c_ { 3.0 } else { 0.0 },
                (fr * 0.4 - fc * 1.1).cos() * 0.5,
            )
        })
        .unwrap();
        let inv = m.inverse().unwrap();
        let id = DenseOperator::identity(dim).unwrap();
        assert!(relative_deviation(&(&m * &inv), &id) < 1e-12);
        assert!(relative_deviation(&(&inv * &m), &id) < 1e-12);
    }

    #[test]
    fn inverse_rejects_singular() {
        let mut m = DenseOperator::zeros(3).unwrap();
        m.set(0, 0, c(1.0, 0.0));
        m.set(1, 1, c(1.0, 0.0));
        assert!(matches!(m.inverse(), Err(AlgebraError::Singular { .. })));
    }

    #[test]
    fn kron_dimensions_and_values() {
        let a = DenseOperator::from_diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let mut b = DenseOperator::zeros(3).unwrap();
        b.set(0, 1, c(0.0, 1.0));
        let k = a.kron(&b).unwrap();
        assert_eq!(k.dim(), 6);
        assert!((k.get(0, 1) - c(0.0, 1.0)).norm() < 1e-15);
        assert!((k.get(3, 4) - c(0.0, 2.0)).norm() < 1e-15);
        assert!(k.get(0, 4).norm() < 1e-15);
    }

    #[test]
    fn dense_cap_enforced() {
        assert!(matches!(
            DenseOperator::zeros(MAX_DENSE_DIM + 1),
            Err(AlgebraError::DimensionCap { .. })
        ));
        let a = DenseOperator::identity(80).unwrap();
        let b = DenseOperator::identity(80).unwrap();
        assert!(matches!(
            a.kron(&b),
            Err(AlgebraError::DimensionCap { .. })
        ));
    }

    #[test]
    fn trace_and_dagger() {
        let m = DenseOperator::from_fn(3, |r, c_| c(r as f64, c_ as f64)).unwrap();
        assert!((m.trace() - c(3.0, 3.0)).norm() < 1e-15);
        let d = m.dagger();
        assert!((d.get(0, 2) - c(2.0, 0.0)).norm() < 1e-15);
        assert!((d.get(2, 0) - c(0.0, -2.0)).norm() < 1e-15);
    }
}
