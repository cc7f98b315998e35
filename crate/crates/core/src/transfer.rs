//! Transfer matrices on finite chains.
//!
//! Two families live here. The six-vertex side: the 4×4 trigonometric
//! R-matrix, L-operators whose entries are Weyl-pair site operators, the
//! RLL exchange relation, and the inhomogeneous chain transfer matrix
//! `t(λ) = tr_aux ∏ L_n`. The chiral Potts side: row transfer matrices
//! built from weight tables, the quantum evolution operator in both its
//! matrix-element and operator-product forms, and partition functions by
//! trace versus brute-force configuration sums.

use crate::algebra::{
    clock_shift, relative_deviation, AlgebraError, DenseOperator, RootContext, MAX_DENSE_DIM,
};
use crate::weights::WeightTable;
use num_complex::Complex64;
use thiserror::Error;

const BRUTE_FORCE_CAP: usize = 1 << 22;

#[derive(Debug, Error)]
pub enum TransferError {
    #[error("parameter {0} must be nonzero")]
    ZeroParameter(&'static str),
    #[error("chain needs {expected} site scalings, got {got}")]
    ScalingCount { expected: usize, got: usize },
    #[error("lattice of {l} sites with {n} states each exceeds the dense cap {MAX_DENSE_DIM}")]
    LatticeTooLarge { n: usize, l: usize },
    #[error("configuration sum over {n}^{spins} states exceeds the brute-force cap")]
    BruteForceTooLarge { n: usize, spins: usize },
    #[error("spin order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("chain needs at least one rung, row lattice at least one column")]
    EmptyLattice,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn nonzero(value: Complex64, name: &'static str) -> Result<(), TransferError> {
    if value.norm() == 0.0 {
        return Err(TransferError::ZeroParameter(name));
    }
    Ok(())
}

/// The symmetric six-vertex R-matrix on C²⊗C² with multiplicative spectral
/// parameter: weights `a = λq - 1/(λq)`, `b = λ - 1/λ`, `c = q - 1/q`.
pub fn six_vertex_r(lambda: Complex64, q: Complex64) -> Result<DenseOperator, TransferError> {
    nonzero(lambda, "λ")?;
    nonzero(q, "q")?;
    let a = lambda * q - 1.0 / (lambda * q);
    let b = lambda - 1.0 / lambda;
    let c = q - 1.0 / q;
    let mut r = DenseOperator::zeros(4)?;
    r.set(0, 0, a);
    r.set(3, 3, a);
    r.set(1, 1, b);
    r.set(2, 2, b);
    r.set(1, 2, c);
    r.set(2, 1, c);
    Ok(r)
}

fn swap_gate() -> Result<DenseOperator, TransferError> {
    let mut p = DenseOperator::zeros(4)?;
    for i in 0..2 {
        for j in 0..2 {
            p.set(2 * i + j, 2 * j + i, Complex64::new(1.0, 0.0));
        }
    }
    Ok(p)
}

/// Residual of `R12(λ) R13(λμ) R23(μ) = R23(μ) R13(λμ) R12(λ)` on C²⊗C²⊗C².
pub fn six_vertex_ybe_residual(
    lambda: Complex64,
    mu: Complex64,
    q: Complex64,
) -> Result<f64, TransferError> {
    let i2 = DenseOperator::identity(2)?;
    let r12 = six_vertex_r(lambda, q)?.kron(&i2)?;
    let r23 = i2.kron(&six_vertex_r(mu, q)?)?;
    let s23 = i2.kron(&swap_gate()?)?;
    let r13 = &(&s23 * &six_vertex_r(lambda * mu, q)?.kron(&i2)?) * &s23;
    let lhs = &(&r12 * &r13) * &r23;
    let rhs = &(&r23 * &r13) * &r12;
    Ok(relative_deviation(&lhs, &rhs))
}

type Blocks = [[DenseOperator; 2]; 2];

/// L-operator as a 2×2 block matrix over the site algebra:
/// `[[U, -λV], [λV⁻¹, U⁻¹]]`.
fn l_blocks(
    lambda: Complex64,
    u: &DenseOperator,
    v: &DenseOperator,
) -> Result<Blocks, TransferError> {
    nonzero(lambda, "λ")?;
    let u_inv = u.inverse()?;
    let v_inv = v.inverse()?;
    Ok([
        [u.clone(), v.scale(-lambda)],
        [v_inv.scale(lambda), u_inv],
    ])
}

fn block_mul(a: &Blocks, b: &Blocks) -> Blocks {
    let entry = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

/// Embeds a 2×2 block matrix into C²⊗C²⊗C^d acting on auxiliary slot 0 or 1.
fn embed_aux(blocks: &Blocks, slot: usize) -> Result<DenseOperator, TransferError> {
    let d = blocks[0][0].dim();
    let zero = Complex64::new(0.0, 0.0);
    let op = DenseOperator::from_fn(4 * d, |row, col| {
        let (i, k, s) = (row / (2 * d), (row / d) % 2, row % d);
        let (j, l, t) = (col / (2 * d), (col / d) % 2, col % d);
        match slot {
            0 if k == l => blocks[i][j].get(s, t),
            1 if i == j => blocks[k][l].get(s, t),
            _ => zero,
        }
    })?;
    Ok(op)
}

/// Residual of the exchange relation
/// `R12(λ) L1(λμ) L2(μ) = L2(μ) L1(λμ) R12(λ)` for L-operators built on the
/// Weyl pair (U, V).
pub fn loperator_exchange_residual(
    lambda: Complex64,
    mu: Complex64,
    q: Complex64,
    u: &DenseOperator,
    v: &DenseOperator,
) -> Result<f64, TransferError> {
    if u.dim() != v.dim() {
        return Err(TransferError::OrderMismatch(u.dim(), v.dim()));
    }
    let d = u.dim();
    let r12 = six_vertex_r(lambda, q)?.kron(&DenseOperator::identity(d)?)?;
    let l1 = embed_aux(&l_blocks(lambda * mu, u, v)?, 0)?;
    let l2 = embed_aux(&l_blocks(mu, u, v)?, 1)?;
    let lhs = &(&r12 * &l1) * &l2;
    let rhs = &(&l2 * &l1) * &r12;
    Ok(relative_deviation(&lhs, &rhs))
}

/// An irreducible site realization of `U V = q₀ V U` at `q₀ = -e^{iπ/N}`:
/// dimension N for odd N (shift and a clock power), dimension 2N for even N
/// (the order-2N pair).
pub struct WeylSite {
    pub u: DenseOperator,
    pub v: DenseOperator,
    pub q0: Complex64,
}

impl WeylSite {
    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    /// Max-entry residual of `U V - q₀ V U` relative to `|U V|`.
    pub fn weyl_residual(&self) -> f64 {
        let uv = &self.u * &self.v;
        let vu = (&self.v * &self.u).scale(self.q0);
        relative_deviation(&uv, &vu)
    }
}

/// Builds the minimal Weyl pair for spin order `n`.
pub fn weyl_site(n: usize) -> Result<WeylSite, TransferError> {
    let q0 = RootContext::new(n)?.q0();
    if n % 2 == 1 {
        let ctx = RootContext::new(n)?;
        let (z, x) = clock_shift(&ctx)?;
        let v = z.pow(((n + 1) / 2) as u64);
        Ok(WeylSite { u: x, v, q0 })
    } else {
        let ctx = RootContext::new(2 * n)?;
        let (z, x) = clock_shift(&ctx)?;
        let v = z.pow((n + 1) as u64);
        Ok(WeylSite { u: x, v, q0 })
    }
}

fn site_operator(
    op: &DenseOperator,
    site_dim: usize,
    pos: usize,
    nsites: usize,
) -> Result<DenseOperator, TransferError> {
    let mut acc = if pos == 0 {
        op.clone()
    } else {
        DenseOperator::identity(site_dim)?
    };
    for k in 1..nsites {
        if k == pos {
            acc = acc.kron(op)?;
        } else {
            acc = acc.kron(&DenseOperator::identity(site_dim)?)?;
        }
    }
    Ok(acc)
}

fn checked_total_dim(site_dim: usize, nsites: usize) -> Result<usize, TransferError> {
    let mut total = 1usize;
    for _ in 0..nsites {
        total = total
            .checked_mul(site_dim)
            .filter(|t| *t <= MAX_DENSE_DIM)
            .ok_or(TransferError::LatticeTooLarge {
                n: site_dim,
                l: nsites,
            })?;
    }
    Ok(total)
}

/// An inhomogeneous chain of 2L Weyl sites with per-site scalings: site
/// operators `U_n = c_n U`, `V_n = d_n V` embedded in the tensor product.
pub struct SixVertexChain {
    us: Vec<DenseOperator>,
    vs: Vec<DenseOperator>,
    q0: Complex64,
}

impl SixVertexChain {
    pub fn new(
        n: usize,
        l: usize,
        c_scales: &[Complex64],
        d_scales: &[Complex64],
    ) -> Result<Self, TransferError> {
        if l == 0 {
            return Err(TransferError::EmptyLattice);
        }
        let site = weyl_site(n)?;
        let nsites = 2 * l;
        if c_scales.len() != nsites {
            return Err(TransferError::ScalingCount {
                expected: nsites,
                got: c_scales.len(),
            });
        }
        if d_scales.len() != nsites {
            return Err(TransferError::ScalingCount {
                expected: nsites,
                got: d_scales.len(),
            });
        }
        for &scale in c_scales.iter().chain(d_scales.iter()) {
            nonzero(scale, "site scaling")?;
        }
        checked_total_dim(site.dim(), nsites)?;
        let mut us = Vec::with_capacity(nsites);
        let mut vs = Vec::with_capacity(nsites);
        for pos in 0..nsites {
            us.push(site_operator(
                &site.u.scale(c_scales[pos]),
                site.dim(),
                pos,
                nsites,
            )?);
            vs.push(site_operator(
                &site.v.scale(d_scales[pos]),
                site.dim(),
                pos,
                nsites,
            )?);
        }
        Ok(Self {
            us,
            vs,
            q0: site.q0,
        })
    }

    pub fn site_count(&self) -> usize {
        self.us.len()
    }

    pub fn dim(&self) -> usize {
        self.us[0].dim()
    }

    pub fn q0(&self) -> Complex64 {
        self.q0
    }

    /// The transfer matrix `t(λ) = tr_aux ∏_n L_n(λ_n)` with alternating
    /// spectral parameters `λκ` on even sites and `λ/κ` on odd sites.
    pub fn transfer(
        &self,
        lambda: Complex64,
        kappa: Complex64,
    ) -> Result<DenseOperator, TransferError> {
        nonzero(lambda, "λ")?;
        nonzero(kappa, "κ")?;
        let mut product: Option<Blocks> = None;
        for pos in 0..self.site_count() {
            let site_lambda = if pos % 2 == 0 {
                lambda * kappa
            } else {
                lambda / kappa
            };
            let block = l_blocks(site_lambda, &self.us[pos], &self.vs[pos])?;
            product = Some(match product {
                None => block,
                Some(acc) => block_mul(&acc, &block),
            });
        }
        let m = product.expect("chain has at least two sites");
        Ok(&m[0][0] + &m[1][1])
    }

    /// The gauge-invariant edge variables `w_n = U_n V_n⁻¹ U_{n+1} V_{n+1}`.
    pub fn edge_variables(&self) -> Result<Vec<DenseOperator>, TransferError> {
        let nsites = self.site_count();
        let mut out = Vec::with_capacity(nsites);
        for pos in 0..nsites {
            let next = (pos + 1) % nsites;
            let v_inv = self.vs[pos].inverse()?;
            out.push(&(&(&self.us[pos] * &v_inv) * &self.us[next]) * &self.vs[next]);
        }
        Ok(out)
    }
}

/// A periodic row of L spins, each ranging over N states, indexed by base-N
/// digits of the state label.
#[derive(Debug, Clone, Copy)]
pub struct SpinLattice {
    n: usize,
    l: usize,
    dim: usize,
}

impl SpinLattice {
    pub fn new(n: usize, l: usize) -> Result<Self, TransferError> {
        if n == 0 || l == 0 {
            return Err(TransferError::EmptyLattice);
        }
        let dim = checked_total_dim(n, l)?;
        Ok(Self { n, l, dim })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn digit(&self, state: usize, site: usize) -> usize {
        (state / self.n.pow(site as u32)) % self.n
    }
}

/// The two row transfer matrices of a lattice whose horizontal pair is
/// (p, q) and whose diagonal pair is (p′, q):
/// `T[s,s'] = ∏_J W_pq(s_J - s'_J) W̄_p'q(s_{J+1} - s'_J)` and
/// `T̂[s,s'] = ∏_J W̄_pq(s_J - s'_J) W_p'q(s_J - s'_{J+1})`.
pub fn row_transfer_pair(
    table_pq: &WeightTable,
    table_ppq: &WeightTable,
    lattice: &SpinLattice,
) -> Result<(DenseOperator, DenseOperator), TransferError> {
    if table_pq.n() != lattice.n() {
        return Err(TransferError::OrderMismatch(table_pq.n(), lattice.n()));
    }
    if table_ppq.n() != lattice.n() {
        return Err(TransferError::OrderMismatch(table_ppq.n(), lattice.n()));
    }
    let l = lattice.l();
    let t = DenseOperator::from_fn(lattice.dim(), |si, sj| {
        let mut value = Complex64::new(1.0, 0.0);
        for site in 0..l {
            let s = lattice.digit(si, site) as i64;
            let s_next = lattice.digit(si, (site + 1) % l) as i64;
            let sp = lattice.digit(sj, site) as i64;
            value *= table_pq.w_at(s - sp) * table_ppq.wbar_at(s_next - sp);
        }
        value
    })?;
    let t_hat = DenseOperator::from_fn(lattice.dim(), |si, sj| {
        let mut value = Complex64::new(1.0, 0.0);
        for site in 0..l {
            let s = lattice.digit(si, site) as i64;
            let sp = lattice.digit(sj, site) as i64;
            let sp_next = lattice.digit(sj, (site + 1) % l) as i64;
            value *= table_pq.wbar_at(s - sp) * table_ppq.w_at(s - sp_next);
        }
        value
    })?;
    Ok((t, t_hat))
}

fn check_weight_slices(
    w: &[Complex64],
    wbar: &[Complex64],
    lattice: &SpinLattice,
) -> Result<(), TransferError> {
    if w.len() != lattice.n() {
        return Err(TransferError::OrderMismatch(w.len(), lattice.n()));
    }
    if wbar.len() != lattice.n() {
        return Err(TransferError::OrderMismatch(wbar.len(), lattice.n()));
    }
    Ok(())
}

/// The quantum evolution operator in matrix-element form:
/// `U[a,b] = ∏_n W̄(a_n - b_n) ∏_n W(b_{n+1} - b_n)`.
pub fn quantum_evolution(
    w: &[Complex64],
    wbar: &[Complex64],
    lattice: &SpinLattice,
) -> Result<DenseOperator, TransferError> {
    check_weight_slices(w, wbar, lattice)?;
    let (n, l) = (lattice.n(), lattice.l());
    let op = DenseOperator::from_fn(lattice.dim(), |ai, bi| {
        let mut value = Complex64::new(1.0, 0.0);
        for site in 0..l {
            let a = lattice.digit(ai, site);
            let b = lattice.digit(bi, site);
            value *= wbar[(a + n - b) % n];
        }
        for site in 0..l {
            let b = lattice.digit(bi, site);
            let b_next = lattice.digit(bi, (site + 1) % l);
            value *= w[(b_next + n - b) % n];
        }
        value
    })?;
    Ok(op)
}

/// The same operator as an explicit product
/// `∏_n (Σ_a W̄(a) X_n^a) · ∏_n (Σ_a W^{(f)}(-a) (Z_n⁻¹ Z_{n+1})^a)`.
pub fn quantum_evolution_operator_form(
    w: &[Complex64],
    wbar: &[Complex64],
    lattice: &SpinLattice,
    ctx: &RootContext,
) -> Result<DenseOperator, TransferError> {
    check_weight_slices(w, wbar, lattice)?;
    if ctx.n() != lattice.n() {
        return Err(TransferError::OrderMismatch(ctx.n(), lattice.n()));
    }
    let (n, l) = (lattice.n(), lattice.l());
    let (z, x) = clock_shift(ctx)?;
    let z_inv = z.inverse()?;
    let w_fourier: Vec<Complex64> = (0..n)
        .map(|m| {
            (0..n)
                .map(|a| w[a] * ctx.omega_pow((m * a) as i64))
                .sum::<Complex64>()
                / n as f64
        })
        .collect();
    let mut u = DenseOperator::identity(lattice.dim())?;
    for site in 0..l {
        let x_site = site_operator(&x, n, site, l)?;
        let mut factor = DenseOperator::zeros(lattice.dim())?;
        for a in 0..n {
            factor = &factor + &x_site.pow(a as u64).scale(wbar[a]);
        }
        u = &u * &factor;
    }
    for site in 0..l {
        let pair = &site_operator(&z_inv, n, site, l)? * &site_operator(&z, n, (site + 1) % l, l)?;
        let mut factor = DenseOperator::zeros(lattice.dim())?;
        for a in 0..n {
            factor = &factor + &pair.pow(a as u64).scale(w_fourier[(n - a) % n]);
        }
        u = &u * &factor;
    }
    Ok(u)
}

/// Partition function of M cyclic rows driven by one evolution operator.
pub fn partition_trace(u: &DenseOperator, m: u64) -> Complex64 {
    u.pow(m).trace()
}

/// The same partition function as a sum over all N^{LM} spin configurations.
pub fn brute_force_partition(
    w: &[Complex64],
    wbar: &[Complex64],
    l: usize,
    m: usize,
) -> Result<Complex64, TransferError> {
    let n = w.len();
    if n == 0 || wbar.len() != n {
        return Err(TransferError::OrderMismatch(n, wbar.len()));
    }
    if l == 0 || m == 0 {
        return Err(TransferError::EmptyLattice);
    }
    let spins = l * m;
    let mut powers = Vec::with_capacity(spins + 1);
    powers.push(1usize);
    for i in 0..spins {
        let next = powers[i]
            .checked_mul(n)
            .filter(|t| *t <= BRUTE_FORCE_CAP)
            .ok_or(TransferError::BruteForceTooLarge { n, spins })?;
        powers.push(next);
    }
    let total = powers[spins];
    let mut sum = Complex64::new(0.0, 0.0);
    for cfg in 0..total {
        let digit = |row: usize, site: usize| (cfg / powers[row * l + site]) % n;
        let mut value = Complex64::new(1.0, 0.0);
        for row in 0..m {
            let next_row = (row + 1) % m;
            for site in 0..l {
                value *= wbar[(digit(row, site) + n - digit(next_row, site)) % n];
            }
            for site in 0..l {
                value *=
                    w[(digit(next_row, (site + 1) % l) + n - digit(next_row, site)) % n];
            }
        }
        sum += value;
    }
    Ok(sum)
}
