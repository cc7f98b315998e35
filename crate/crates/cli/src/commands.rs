//! The non-verify commands: classical evolution with conservation ledger,
//! partition-function evaluation, and curve sampling.

use crate::error::CliError;
use crate::report::{Cell, Report, Row};
use cpsg_core::algebra::RootContext;
use cpsg_core::classical::{casimirs, evolve, LatticeState};
use cpsg_core::curve::{point_residual, sample_modulus, sample_point, Regime};
use cpsg_core::transfer::{
    brute_force_partition, partition_trace, quantum_evolution, SpinLattice,
};
use cpsg_core::weights::{weight_tables, NormMode};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub const CASIMIR_TOLERANCE: f64 = 1e-11;
pub const PARTITION_TOLERANCE: f64 = 1e-10;
pub const CURVE_TOLERANCE: f64 = 1e-10;

fn regime_name(regime: Regime) -> &'static str {
    match regime {
        Regime::RealBranchSafe => "real",
        Regime::Generic => "generic",
    }
}

pub fn run_evolve(
    length: usize,
    steps: usize,
    coupling: Complex64,
    seed: u64,
    with_timestamp: bool,
) -> Result<Report, CliError> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let sites: Vec<Complex64> = (0..2 * length)
        .map(|_| {
            Complex64::new(
                rng.gen_range(-0.5..0.5),
                rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
            )
            .exp()
        })
        .collect();
    let initial = LatticeState::new(sites)?;
    let (c1_initial, c2_initial) = casimirs(&initial);

    let mut report = Report::new("evolve", with_timestamp);
    report.provenance.insert("seed".into(), Cell::Count(seed));
    report
        .provenance
        .insert("length".into(), Cell::Count(length as u64));
    report
        .provenance
        .insert("steps".into(), Cell::Count(steps as u64));
    report
        .provenance
        .insert("coupling".into(), Cell::Complex(coupling));
    report
        .provenance
        .insert("casimir_one_initial".into(), Cell::Complex(c1_initial));
    report
        .provenance
        .insert("casimir_two_initial".into(), Cell::Complex(c2_initial));

    let mut state = initial;
    let mut worst_drift: f64 = 0.0;
    for step in 1..=steps {
        state = evolve(&state, coupling)?;
        let (c1, c2) = casimirs(&state);
        let drift = ((c1 - c1_initial).norm() / c1_initial.norm())
            .max((c2 - c2_initial).norm() / c2_initial.norm());
        worst_drift = worst_drift.max(drift);
        let mut row = Row::new();
        row.insert("step".into(), Cell::Count(step as u64));
        row.insert("casimir_one".into(), Cell::Complex(c1));
        row.insert("casimir_two".into(), Cell::Complex(c2));
        row.insert("drift".into(), Cell::Measure(drift));
        report.trials.push(row);
    }
    report.finish_check("drift", CASIMIR_TOLERANCE, worst_drift);
    Ok(report)
}

pub fn run_partition(
    order: usize,
    length: usize,
    rows: usize,
    seed: u64,
    regime: Regime,
    skip_brute_force: bool,
    with_timestamp: bool,
) -> Result<Report, CliError> {
    let ctx = RootContext::new(order)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let lattice = SpinLattice::new(order, length)?;

    let mut report = Report::new("partition", with_timestamp);
    report.provenance.insert("seed".into(), Cell::Count(seed));
    report
        .provenance
        .insert("order".into(), Cell::Count(order as u64));
    report
        .provenance
        .insert("length".into(), Cell::Count(length as u64));
    report
        .provenance
        .insert("rows".into(), Cell::Count(rows as u64));
    report
        .provenance
        .insert("regime".into(), Cell::Text(regime_name(regime).into()));
    report
        .provenance
        .insert("brute_force".into(), Cell::Flag(!skip_brute_force));

    let (modulus, p, q) = loop {
        let modulus = sample_modulus(&mut rng, regime);
        let p = sample_point(&mut rng, &modulus, regime, &ctx);
        let q = sample_point(&mut rng, &modulus, regime, &ctx);
        if let (Ok(p), Ok(q)) = (p, q) {
            break (modulus, p, q);
        }
    };
    report
        .provenance
        .insert("modulus_k".into(), Cell::Complex(modulus.k()));
    report
        .provenance
        .insert("root_x_p".into(), Cell::Count(p.root_x as u64));
    report
        .provenance
        .insert("root_x_q".into(), Cell::Count(q.root_x as u64));

    let table = weight_tables(&p.point, &q.point, NormMode::Unit, &ctx)?;
    let u = quantum_evolution(table.w(), table.wbar(), &lattice)?;
    let trace = partition_trace(&u, rows as u64);

    let mut row = Row::new();
    row.insert("case".into(), Cell::Count(0));
    row.insert("trace".into(), Cell::Complex(trace));
    if skip_brute_force {
        report.trials.push(row);
        report
            .tolerances
            .insert("deviation".into(), Cell::Measure(PARTITION_TOLERANCE));
        return Ok(report);
    }
    let brute = brute_force_partition(table.w(), table.wbar(), length, rows)?;
    let deviation = (trace - brute).norm() / brute.norm().max(1e-300);
    row.insert("brute_force".into(), Cell::Complex(brute));
    row.insert("deviation".into(), Cell::Measure(deviation));
    report.trials.push(row);
    report.finish_check("deviation", PARTITION_TOLERANCE, deviation);
    Ok(report)
}

pub fn run_curve_sample(
    order: usize,
    count: usize,
    seed: u64,
    regime: Regime,
    with_timestamp: bool,
) -> Result<Report, CliError> {
    let ctx = RootContext::new(order)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let modulus = sample_modulus(&mut rng, regime);

    let mut report = Report::new("curve sample", with_timestamp);
    report.provenance.insert("seed".into(), Cell::Count(seed));
    report
        .provenance
        .insert("order".into(), Cell::Count(order as u64));
    report
        .provenance
        .insert("count".into(), Cell::Count(count as u64));
    report
        .provenance
        .insert("regime".into(), Cell::Text(regime_name(regime).into()));
    report
        .provenance
        .insert("modulus_k".into(), Cell::Complex(modulus.k()));
    report
        .provenance
        .insert("modulus_k_prime".into(), Cell::Complex(modulus.k_prime()));

    let mut worst: f64 = 0.0;
    for index in 0..count {
        let sample = sample_point(&mut rng, &modulus, regime, &ctx)?;
        let residual = point_residual(&sample.point, &modulus, &ctx);
        worst = worst.max(residual);
        let mut row = Row::new();
        row.insert("sample".into(), Cell::Count(index as u64));
        row.insert("s".into(), Cell::Complex(sample.point.s()));
        row.insert("x".into(), Cell::Complex(sample.point.x()));
        row.insert("y".into(), Cell::Complex(sample.point.y()));
        row.insert("residual".into(), Cell::Measure(residual));
        row.insert("root_x".into(), Cell::Count(sample.root_x as u64));
        row.insert("root_y".into(), Cell::Count(sample.root_y as u64));
        report.trials.push(row);
    }
    report.finish_check("residual", CURVE_TOLERANCE, worst);
    Ok(report)
}
