//! Resolvent and Stieltjes-transform identities checked against independent
//! evaluations of both sides.

mod common;

use common::{random_perm, random_sym, rng};
use num_complex::Complex64;
use proptest::prelude::*;
use specmatch_core::matrix::ComplexMatrix;
use specmatch_core::models::permute_conjugate;
use specmatch_core::spectral::{eig_sym, resolvent, spectral_norm, stieltjes_m0};
use specmatch_core::SymMatrix;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ward_residual(a: &SymMatrix, z: Complex64) -> f64 {
    let r = resolvent(a, z).unwrap();
    let lhs = r.matmul(&r.conj());
    let rhs = ComplexMatrix::from_fn(a.n(), |i, j| c(r[(i, j)].im / z.im, 0.0));
    lhs.max_abs_diff(&rhs)
}

/// Resolvent of `A` with rows and columns in `removed` zeroed.
fn minor_resolvent(a: &SymMatrix, removed: &[usize], z: Complex64) -> ComplexMatrix {
    let mut m = a.clone();
    for &j in removed {
        m = m.without_index(j);
    }
    resolvent(&m, z).unwrap()
}

/// Largest residual over the five Schur complement identities.
fn schur_residuals(a: &SymMatrix, z: Complex64) -> [f64; 5] {
    let n = a.n();
    let r = resolvent(a, z).unwrap();
    let mut worst = [0.0f64; 5];
    let one = c(1.0, 0.0);
    for j in 0..n {
        let rj = minor_resolvent(a, &[j], z);
        // 1/R_jj = a_jj − z − Σ_{k,ℓ≠j} a_jk R^{(j)}_kℓ a_ℓj
        let mut quad = c(0.0, 0.0);
        for k in (0..n).filter(|&k| k != j) {
            for l in (0..n).filter(|&l| l != j) {
                quad += a[(j, k)] * rj[(k, l)] * a[(l, j)];
            }
        }
        let rhs = c(a[(j, j)], 0.0) - z - quad;
        worst[0] = worst[0].max((one / r[(j, j)] - rhs).norm());

        for k in (0..n).filter(|&k| k != j) {
            // R_jk = −R_jj Σ_{ℓ≠j} a_jℓ R^{(j)}_ℓk
            let s: Complex64 = (0..n)
                .filter(|&l| l != j)
                .map(|l| a[(j, l)] * rj[(l, k)])
                .sum();
            let first = -r[(j, j)] * s;
            // = R_jj R^{(j)}_kk (−a_jk + Σ_{ℓ,m∉{j,k}} a_jℓ R^{(jk)}_ℓm a_mk)
            let rjk = minor_resolvent(a, &[j, k], z);
            let mut inner = c(-a[(j, k)], 0.0);
            for l in (0..n).filter(|&l| l != j && l != k) {
                for m in (0..n).filter(|&m| m != j && m != k) {
                    inner += a[(j, l)] * rjk[(l, m)] * a[(m, k)];
                }
            }
            let second = r[(j, j)] * rj[(k, k)] * inner;
            worst[1] = worst[1]
                .max((r[(j, k)] - first).norm())
                .max((r[(j, k)] - second).norm());

            // e_kᵀR = e_kᵀR^{(j)} + (R_kj/R_jj) e_jᵀR
            for l in 0..n {
                let rhs = rj[(k, l)] + r[(k, j)] / r[(j, j)] * r[(j, l)];
                worst[2] = worst[2].max((r[(k, l)] - rhs).norm());
            }

            // 1/R_kk = 1/R^{(j)}_kk − R_kj² / (R^{(j)}_kk R_jj R_kk)
            let rhs =
                one / rj[(k, k)] - r[(k, j)] * r[(k, j)] / (rj[(k, k)] * r[(j, j)] * r[(k, k)]);
            worst[3] = worst[3].max((one / r[(k, k)] - rhs).norm());

            // R_kℓ = R^{(j)}_kℓ + R_kj R_jℓ / R_jj for j ∉ {k, ℓ}
            for l in (0..n).filter(|&l| l != j) {
                let rhs = rj[(k, l)] + r[(k, j)] * r[(j, l)] / r[(j, j)];
                worst[4] = worst[4].max((r[(k, l)] - rhs).norm());
            }
        }
    }
    worst
}

#[test]
fn schur_complement_identities() {
    let mut g = rng(2024);
    for n in 3..=8 {
        for _ in 0..3 {
            let a = random_sym(n, &mut g);
            let res = schur_residuals(&a, c(1.0, 1.0));
            for (idx, r) in res.iter().enumerate() {
                assert!(*r <= 1e-8, "n={n} identity {idx}: residual {r}");
            }
        }
    }
}

#[test]
fn stieltjes_quadratic_on_grid() {
    let mut count = 0;
    for i in 0..10 {
        let re = -3.0 + 6.0 * i as f64 / 9.0;
        for k in 0..5 {
            let im = 0.05 + 0.95 * k as f64 / 4.0;
            for z in [c(re, im), c(re, -im)] {
                let m = stieltjes_m0(z).unwrap();
                assert!((m * m + z * m + 1.0).norm() <= 1e-12, "z={z}");
                assert!(m.im * z.im > 0.0);
                count += 1;
            }
        }
    }
    assert_eq!(count, 100);
}

#[test]
fn stieltjes_matches_density_integral() {
    // m0(z) = ∫ ρ(x)/(x − z) dx, evaluated with x = 2 sin θ and the
    // trapezoid rule on the smooth periodic integrand.
    let z = c(0.4, 0.7);
    let steps = 4000;
    let h = std::f64::consts::PI / steps as f64;
    let mut acc = c(0.0, 0.0);
    for k in 0..steps {
        let t = -std::f64::consts::FRAC_PI_2 + (k as f64 + 0.5) * h;
        let x = 2.0 * t.sin();
        let w = (2.0 / std::f64::consts::PI) * t.cos() * t.cos();
        acc += w / (c(x, 0.0) - z) * h;
    }
    assert!((acc - stieltjes_m0(z).unwrap()).norm() < 1e-10);
}

/// Independent power-iteration estimate of `‖A‖` on `A²`.
fn power_norm(a: &SymMatrix) -> f64 {
    let n = a.n();
    let m = a.as_matrix();
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * i as f64).collect();
    let mut est = 0.0;
    for _ in 0..20_000 {
        let y = m.matvec(&m.matvec(&x));
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        est = norm / x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x = y.into_iter().map(|v| v / norm).collect();
    }
    est.sqrt()
}

#[test]
fn spectral_norm_matches_power_iteration() {
    let mut g = rng(6);
    for _ in 0..5 {
        let a = random_sym(6, &mut g);
        let direct = spectral_norm(&a).unwrap();
        assert!((direct - power_norm(&a)).abs() <= 1e-6 * direct.max(1.0));
    }
}

#[test]
fn ward_identity_for_sizes_up_to_twenty() {
    let mut g = rng(77);
    for n in [1, 2, 5, 11, 20] {
        let a = random_sym(n, &mut g);
        for z in [c(0.3, 0.1), c(-1.5, -0.4), c(2.0, 1.0)] {
            assert!(ward_residual(&a, z) <= 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ward_identity(n in 1usize..=20, seed in any::<u64>(), re in -3.0f64..3.0,
                     im in 0.1f64..2.0, lower in any::<bool>()) {
        let a = random_sym(n, &mut rng(seed));
        let z = c(re, if lower { -im } else { im });
        prop_assert!(ward_residual(&a, z) <= 1e-9);
    }

    #[test]
    fn resolvent_conjugate_symmetry(n in 1usize..=12, seed in any::<u64>(),
                                    re in -3.0f64..3.0, im in 0.05f64..2.0) {
        let a = random_sym(n, &mut rng(seed));
        let z = c(re, im);
        let r = resolvent(&a, z).unwrap();
        let rc = resolvent(&a, z.conj()).unwrap();
        prop_assert!(r.conj().max_abs_diff(&rc) <= 1e-10);
    }

    #[test]
    fn eigenvalues_are_permutation_invariant(n in 1usize..=12, seed in any::<u64>()) {
        let mut g = rng(seed);
        let a = random_sym(n, &mut g);
        let p = random_perm(n, &mut g);
        let pa = permute_conjugate(&a, &p).unwrap();
        let l1 = eig_sym(&a).unwrap();
        let l2 = eig_sym(&pa).unwrap();
        for (x, y) in l1.values().iter().zip(l2.values()) {
            prop_assert!((x - y).abs() <= 1e-10);
        }
    }

    #[test]
    fn eigendecomposition_invariants(n in 1usize..=25, seed in any::<u64>()) {
        let a = random_sym(n, &mut rng(seed));
        let eig = eig_sym(&a).unwrap();
        let v = eig.vectors();
        let gram = v.transpose().matmul(v);
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((gram[(i, j)] - want).abs() <= 1e-10);
            }
        }
        let recon = eig.reconstruct().sub(a.as_matrix()).max_abs();
        prop_assert!(recon <= 1e-8 * (1.0 + a.as_matrix().max_abs()));
        prop_assert!(eig.values().windows(2).all(|w| w[0] <= w[1]));
    }
}
