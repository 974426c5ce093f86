//! Self-contained oracle and identity suite behind `specmatch verify`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use specmatch_core::matrix::ComplexMatrix;
use specmatch_core::models::{gen_er_pair, TruthMode};
use specmatch_core::rounding::{assignment_value, brute_force_round, lap_round};
use specmatch_core::similarity::{
    grampa, grampa_contour, kkt_oracle_regqp, kkt_oracle_rowqp, rowqp, rowqp_contour, ContourSpec,
    Orientation,
};
use specmatch_core::spectral::{
    m0_boundary, resolvent, semicircle_density, spectral_norm, stieltjes_m0, BoundarySide,
};
use specmatch_core::{Matrix, Result, SymMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    /// Orientation used by the contour checks; clockwise is a deliberate
    /// fault that the suite must catch.
    pub contour_orientation: Orientation,
}

const SEED: u64 = 0x5EED;

fn wigner(n: usize, rng: &mut ChaCha8Rng) -> SymMatrix {
    let s = (3.0 / n as f64).sqrt();
    SymMatrix::from_upper(n, |_, _| rng.random_range(-s..s)).expect("finite entries")
}

fn ward_residual(a: &SymMatrix, z: Complex64) -> Result<f64> {
    let r = resolvent(a, z)?;
    let rhs = ComplexMatrix::from_fn(a.n(), |i, j| Complex64::new(r[(i, j)].im / z.im, 0.0));
    Ok(r.matmul(&r.conj()).max_abs_diff(&rhs))
}

fn minor(a: &SymMatrix, removed: &[usize], z: Complex64) -> Result<ComplexMatrix> {
    let mut m = a.clone();
    for &j in removed {
        m = m.without_index(j);
    }
    resolvent(&m, z)
}

/// Largest residual over the Schur complement identities relating `R` to the
/// minor resolvents `R^{(j)}` and `R^{(jk)}`.
fn schur_residual(a: &SymMatrix, z: Complex64) -> Result<f64> {
    let n = a.n();
    let r = resolvent(a, z)?;
    let one = Complex64::new(1.0, 0.0);
    let mut worst: f64 = 0.0;
    for j in 0..n {
        let rj = minor(a, &[j], z)?;
        let mut quad = Complex64::new(0.0, 0.0);
        for k in (0..n).filter(|&k| k != j) {
            for l in (0..n).filter(|&l| l != j) {
                quad += a[(j, k)] * rj[(k, l)] * a[(l, j)];
            }
        }
        worst = worst.max((one / r[(j, j)] - (a[(j, j)] - z - quad)).norm());
        for k in (0..n).filter(|&k| k != j) {
            let s: Complex64 = (0..n)
                .filter(|&l| l != j)
                .map(|l| a[(j, l)] * rj[(l, k)])
                .sum();
            worst = worst.max((r[(j, k)] + r[(j, j)] * s).norm());

            let rjk = minor(a, &[j, k], z)?;
            let mut inner = Complex64::new(-a[(j, k)], 0.0);
            for l in (0..n).filter(|&l| l != j && l != k) {
                for m in (0..n).filter(|&m| m != j && m != k) {
                    inner += a[(j, l)] * rjk[(l, m)] * a[(m, k)];
                }
            }
            worst = worst.max((r[(j, k)] - r[(j, j)] * rj[(k, k)] * inner).norm());

            for l in 0..n {
                let rhs = rj[(k, l)] + r[(k, j)] / r[(j, j)] * r[(j, l)];
                worst = worst.max((r[(k, l)] - rhs).norm());
            }
            let rhs =
                one / rj[(k, k)] - r[(k, j)] * r[(k, j)] / (rj[(k, k)] * r[(j, j)] * r[(k, k)]);
            worst = worst.max((one / r[(k, k)] - rhs).norm());
        }
    }
    Ok(worst)
}

/// Ward and Schur identities for `n = 3..=8` at `z = 1 + i`, the quadratic
/// equation of `m0` on a grid, and the boundary values of `m0` on `[−2, 2]`.
pub fn identity_suite() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    identity_checks(&mut out)?;
    Ok(out)
}

fn identity_checks(out: &mut Vec<CheckResult>) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let z = Complex64::new(1.0, 1.0);
    let (mut ward, mut schur) = (0.0f64, 0.0f64);
    for n in 3..=8 {
        let a = wigner(n, &mut rng);
        ward = ward.max(ward_residual(&a, z)?);
        schur = schur.max(schur_residual(&a, z)?);
    }
    out.push(CheckResult {
        name: "ward_identity",
        residual: ward,
        tolerance: 1e-8,
    });
    out.push(CheckResult {
        name: "schur_identities",
        residual: schur,
        tolerance: 1e-8,
    });

    let mut quad: f64 = 0.0;
    for i in 0..10 {
        for k in 0..5 {
            let re = -3.0 + 6.0 * i as f64 / 9.0;
            let im = 0.05 + 0.95 * k as f64 / 4.0;
            for z in [Complex64::new(re, im), Complex64::new(re, -im)] {
                let m = stieltjes_m0(z)?;
                quad = quad.max((m * m + z * m + 1.0).norm());
            }
        }
    }
    out.push(CheckResult {
        name: "m0_quadratic",
        residual: quad,
        tolerance: 1e-12,
    });

    let mut edge: f64 = 0.0;
    for k in 0..50 {
        let x = -2.0 + 4.0 * (k as f64 + 0.5) / 50.0;
        let plus = m0_boundary(x, BoundarySide::Plus)?;
        let minus = m0_boundary(x, BoundarySide::Minus)?;
        edge = edge
            .max((plus.norm() - 1.0).abs())
            .max((minus.norm() - 1.0).abs())
            .max((plus.im / std::f64::consts::PI - semicircle_density(x)).abs());
    }
    out.push(CheckResult {
        name: "m0_boundary",
        residual: edge,
        tolerance: 1e-12,
    });
    Ok(())
}

fn oracle_checks(out: &mut Vec<CheckResult>) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let (mut cos_gap, mut kkt_dev, mut row_defect) = (0.0f64, 0.0f64, 0.0f64);
    for n in 3..=8 {
        for eta in [0.1, 0.3, 1.0] {
            let a = wigner(n, &mut rng);
            let b = wigner(n, &mut rng);
            let x = grampa(&a, &b, eta)?;
            let y = kkt_oracle_regqp(&a, &b, eta)?;
            let (xe, ye) = (x.entries(), y.entries());
            let cos = xe.dot(ye) / (xe.dot(xe).sqrt() * ye.dot(ye).sqrt());
            cos_gap = cos_gap.max(1.0 - cos);

            let xc = rowqp(&a, &b, eta)?;
            let yc = kkt_oracle_rowqp(&a, &b, eta)?;
            let scale = xc.entries().max_abs();
            kkt_dev = kkt_dev.max(xc.entries().sub(yc.entries()).max_abs() / scale);
            row_defect = row_defect.max(xc.row_sum_defect());
        }
    }
    out.push(CheckResult {
        name: "kkt_regqp_cosine",
        residual: cos_gap,
        tolerance: 1e-10,
    });
    out.push(CheckResult {
        name: "kkt_rowqp",
        residual: kkt_dev,
        tolerance: 1e-8,
    });
    out.push(CheckResult {
        name: "rowqp_row_sums",
        residual: row_defect,
        tolerance: 1e-9,
    });

    let mut gap: f64 = 0.0;
    for _ in 0..50 {
        let x = Matrix::from_fn(7, 7, |_, _| rng.random_range(-1.0..1.0));
        let lap = assignment_value(&x, &lap_round(&x)?);
        let brute = assignment_value(&x, &brute_force_round(&x)?);
        gap = gap.max((lap - brute).abs());
    }
    out.push(CheckResult {
        name: "hungarian_vs_brute_force",
        residual: gap,
        tolerance: 0.0,
    });
    Ok(())
}

fn contour_checks(out: &mut Vec<CheckResult>, orientation: Orientation) -> Result<()> {
    let pair = gen_er_pair(20, 0.5, 0.9, SEED, TruthMode::Random)?;
    let top = spectral_norm(&pair.a)?.max(spectral_norm(&pair.b)?);
    let c = 2.5 * (1.0 - 1e-12) / top;
    let (a, b) = (pair.a.scale(c), pair.b.scale(c));
    let eta = 0.3;
    let spec = ContourSpec::for_eta(eta)
        .with_points(512)
        .with_orientation(orientation);

    let direct = grampa(&a, &b, eta)?;
    let quad = grampa_contour(&a, &b, eta, &spec)?;
    let dev = quad.entries().sub(direct.entries()).max_abs() / direct.entries().max_abs();
    out.push(CheckResult {
        name: "contour_grampa",
        residual: dev,
        tolerance: 1e-6,
    });

    let direct = rowqp(&a, &b, eta)?;
    let quad = rowqp_contour(&a, &b, eta, &spec)?;
    let dev = quad.entries().sub(direct.entries()).max_abs() / direct.entries().max_abs();
    out.push(CheckResult {
        name: "contour_rowqp",
        residual: dev,
        tolerance: 1e-5,
    });
    Ok(())
}

/// Runs every check at fixed sizes and seeds.
pub fn run_verify(opts: VerifyOptions) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    identity_checks(&mut out)?;
    oracle_checks(&mut out)?;
    contour_checks(&mut out, opts.contour_orientation)?;
    Ok(out)
}
