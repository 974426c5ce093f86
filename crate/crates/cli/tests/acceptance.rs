//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use specmatch_cli::sweep::TrialRecord;
use specmatch_cli::verify::identity_suite;
use specmatch_cli::{run_sweep, ExperimentConfig, Rounder, SweepOptions};
use specmatch_core::diagnostics::locallaw_report;
use specmatch_core::models::{gen_er_pair, TruthMode};
use specmatch_core::rounding::{assignment_value, brute_force_round, lap_round};
use specmatch_core::similarity::{
    grampa, grampa_contour, kkt_oracle_regqp, kkt_oracle_rowqp, rowqp, rowqp_contour,
    rowqp_from_eigen, ContourSpec, Method,
};
use specmatch_core::spectral::{eig_sym, spectral_norm};
use specmatch_core::{Matrix, SymMatrix};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn wigner(n: usize, rng: &mut ChaCha8Rng) -> SymMatrix {
    let s = (3.0 / n as f64).sqrt();
    SymMatrix::from_upper(n, |_, _| rng.random_range(-s..s)).unwrap()
}

/// Trials of the low-noise regime shared by criteria 1–3.
fn low_noise_regime() -> Vec<TrialRecord> {
    let cfg = ExperimentConfig::parse(
        r#"{"n": 1000, "p": 0.5, "noise_grid": [0.999], "reps": 10, "eta": 0.2,
            "methods": ["grampa", "rowqp"], "rounders": ["lap", "greedy", "argmax"],
            "base_seed": 20240601, "truth_mode": "random"}"#,
    )
    .unwrap();
    let opts = SweepOptions {
        workers: None,
        timing: true,
    };
    run_sweep(&cfg, opts, std::io::sink()).unwrap().trials
}

fn of(trials: &[TrialRecord], m: Method, r: Rounder) -> Vec<&TrialRecord> {
    trials
        .iter()
        .filter(|t| t.method == m && t.rounder == r)
        .collect()
}

const METHODS: [Method; 2] = [Method::Grampa, Method::RowQp];

fn criterion_1(trials: &[TrialRecord]) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for m in METHODS {
        let lap = of(trials, m, Rounder::Lap);
        let exact = lap.iter().filter(|t| t.overlap == 1.0).count();
        pass &= exact >= 9;
        parts.push(format!("{m} {exact}/{}", lap.len()));
    }
    // Runtime per (method, rep) trial: similarity plus the LAP rounding.
    let slowest = of(trials, Method::Grampa, Rounder::Lap)
        .iter()
        .chain(of(trials, Method::RowQp, Rounder::Lap).iter())
        .map(|t| t.runtime_ms)
        .max()
        .unwrap_or(0);
    pass &= slowest <= 60_000;
    verdict(
        pass,
        format!(
            "LAP overlap = 1.0 in {}; slowest trial {:.1} s",
            parts.join(", "),
            slowest as f64 / 1e3
        ),
    )
}

fn criterion_2(trials: &[TrialRecord]) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for m in METHODS {
        let lap = of(trials, m, Rounder::Lap);
        let separated: Vec<usize> = lap.iter().filter(|t| t.separated).map(|t| t.rep).collect();
        pass &= separated.len() >= 9;
        let rounders_exact = separated.iter().all(|&rep| {
            [Rounder::Lap, Rounder::Greedy, Rounder::Argmax]
                .iter()
                .all(|&r| {
                    of(trials, m, r)
                        .iter()
                        .any(|t| t.rep == rep && t.overlap == 1.0)
                })
        });
        pass &= rounders_exact;
        let worst = lap.iter().map(|t| t.margin).fold(f64::INFINITY, f64::min);
        let best = lap
            .iter()
            .map(|t| t.margin)
            .fold(f64::NEG_INFINITY, f64::max);
        let (min_true, max_off) = lap
            .iter()
            .map(|t| (t.min_true, t.max_off))
            .fold((0.0, 0.0), |acc, x| (acc.0 + x.0, acc.1 + x.1));
        let k = lap.len() as f64;
        let mean_overlap = |r: Rounder| of(trials, m, r).iter().map(|t| t.overlap).sum::<f64>() / k;
        parts.push(format!(
            "{m}: separated {}/{}, margin in [{worst:.3}, {best:.3}], mean min_true {:.3} vs mean max_off {:.3}, all rounders exact on the separated reps: {rounders_exact} (mean overlap greedy {:.3}, argmax {:.3})",
            separated.len(),
            lap.len(),
            min_true / k,
            max_off / k,
            mean_overlap(Rounder::Greedy),
            mean_overlap(Rounder::Argmax),
        ));
    }
    verdict(pass, parts.join("; "))
}

fn criterion_3(trials: &[TrialRecord]) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for m in METHODS {
        let lap = of(trials, m, Rounder::Lap);
        let worst = lap.iter().map(|t| t.diag_rel_err).fold(0.0, f64::max);
        pass &= worst <= 0.30;
        parts.push(format!("{m} max diag_rel_err {worst:.4}"));
    }
    verdict(pass, format!("{} (tolerance 0.30)", parts.join(", ")))
}

fn random_small_pairs() -> Vec<(SymMatrix, SymMatrix, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    (0..50)
        .map(|_| {
            let n = rng.random_range(3..=8);
            let eta = [0.1, 0.3, 1.0][rng.random_range(0..3)];
            (wigner(n, &mut rng), wigner(n, &mut rng), eta)
        })
        .collect()
}

fn criterion_4() -> Verdict {
    let start = Instant::now();
    let (mut worst_cos, mut worst_dev, mut min_scale) = (1.0f64, 0.0f64, f64::INFINITY);
    for (a, b, eta) in random_small_pairs() {
        let x = grampa(&a, &b, eta).unwrap();
        let y = kkt_oracle_regqp(&a, &b, eta).unwrap();
        let (xe, ye) = (x.entries(), y.entries());
        let dot = xe.dot(ye);
        worst_cos = worst_cos.min(dot / (xe.dot(xe).sqrt() * ye.dot(ye).sqrt()));
        min_scale = min_scale.min(dot / xe.dot(xe));

        let xc = rowqp(&a, &b, eta).unwrap();
        let yc = kkt_oracle_rowqp(&a, &b, eta).unwrap();
        worst_dev =
            worst_dev.max(xc.entries().sub(yc.entries()).max_abs() / xc.entries().max_abs());
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst_cos >= 1.0 - 1e-10 && min_scale > 0.0 && worst_dev <= 1e-8 && secs <= 5.0;
    verdict(
        pass,
        format!(
            "min cosine 1-{:.1e}, min scale {min_scale:.3e}, max rowqp deviation {worst_dev:.1e} (rel), {secs:.2} s",
            1.0 - worst_cos
        ),
    )
}

fn contour_instance() -> (SymMatrix, SymMatrix) {
    let pair = gen_er_pair(20, 0.5, 0.9, 5, TruthMode::Random).unwrap();
    let top = spectral_norm(&pair.a)
        .unwrap()
        .max(spectral_norm(&pair.b).unwrap());
    let c = 2.5 * (1.0 - 1e-12) / top;
    (pair.a.scale(c), pair.b.scale(c))
}

fn criterion_5() -> Verdict {
    let (a, b) = contour_instance();
    let eta = 0.3;
    let direct = grampa(&a, &b, eta).unwrap();
    let direct_c = rowqp(&a, &b, eta).unwrap();
    let rel = |m: usize| {
        let spec = ContourSpec::for_eta(eta).with_points(m);
        let g = grampa_contour(&a, &b, eta, &spec).unwrap();
        let r = rowqp_contour(&a, &b, eta, &spec).unwrap();
        (
            g.entries().sub(direct.entries()).max_abs() / direct.entries().max_abs(),
            r.entries().sub(direct_c.entries()).max_abs() / direct_c.entries().max_abs(),
        )
    };
    let (g512, r512) = rel(512);
    let ladder: Vec<(f64, f64)> = [64, 128, 256, 512, 1024].iter().map(|&m| rel(m)).collect();
    let monotone = ladder
        .windows(2)
        .all(|w| w[1].0 < w[0].0 && w[1].1 < w[0].1);
    let pass = g512 <= 1e-6 && r512 <= 1e-5 && monotone;
    let fmt: Vec<String> = ladder.iter().map(|(g, _)| format!("{g:.1e}")).collect();
    verdict(
        pass,
        format!(
            "‖A‖ = {:.3}; 512 pts/side: grampa {g512:.1e}, rowqp {r512:.1e}; grampa errors 64..1024: [{}], monotone {monotone}",
            spectral_norm(&a).unwrap(),
            fmt.join(", ")
        ),
    )
}

fn criterion_6() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (a, b, eta) in random_small_pairs() {
        worst = worst.max(rowqp(&a, &b, eta).unwrap().row_sum_defect());
        count += 1;
    }
    let (a, b) = contour_instance();
    worst = worst.max(rowqp(&a, &b, 0.3).unwrap().row_sum_defect());
    count += 1;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for n in [1, 2, 10, 100, 400] {
        let (a, b) = (wigner(n, &mut rng), wigner(n, &mut rng));
        for eta in [0.05, 0.2, 1.0] {
            worst = worst.max(rowqp(&a, &b, eta).unwrap().row_sum_defect());
            count += 1;
        }
    }
    let pair = gen_er_pair(1000, 0.5, 0.999, 6, TruthMode::Random).unwrap();
    let (ea, eb) = (eig_sym(&pair.a).unwrap(), eig_sym(&pair.b).unwrap());
    for eta in [0.05, 0.2, 1.0] {
        worst = worst.max(rowqp_from_eigen(&ea, &eb, eta).unwrap().row_sum_defect());
        count += 1;
    }
    verdict(
        worst <= 1e-9,
        format!("max ‖X^c𝟙 − 𝟙‖∞ = {worst:.1e} over {count} instances"),
    )
}

fn criterion_7() -> Verdict {
    let checks = identity_suite().unwrap();
    let pass = checks.iter().all(|c| c.passed());
    let parts: Vec<String> = checks
        .iter()
        .map(|c| format!("{} {:.1e}≤{:.0e}", c.name, c.residual, c.tolerance))
        .collect();
    verdict(pass, parts.join(", "))
}

fn criterion_8() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut mismatches = 0;
    for _ in 0..200 {
        let x = Matrix::from_fn(7, 7, |_, _| rng.random_range(-1.0..1.0));
        let lap = assignment_value(&x, &lap_round(&x).unwrap());
        let brute = assignment_value(&x, &brute_force_round(&x).unwrap());
        if lap != brute {
            mismatches += 1;
        }
    }
    verdict(
        mismatches == 0,
        format!("{mismatches}/200 objective mismatches"),
    )
}

fn criterion_9() -> Verdict {
    let z = Complex64::new(1.0, 0.5);
    let stats = |n: usize| -> Vec<(f64, f64)> {
        (0..5)
            .map(|seed| {
                let pair = gen_er_pair(n, 0.5, 1.0, 900 + seed, TruthMode::Identity).unwrap();
                let r = locallaw_report(&pair.a, z).unwrap();
                (r.entrywise_off_max, r.totalsum_err)
            })
            .collect()
    };
    let small = stats(500);
    let large = stats(2000);
    let mean = |v: &[(f64, f64)]| v.iter().map(|x| x.0).sum::<f64>() / v.len() as f64;
    let (m500, m2000) = (mean(&small), mean(&large));
    let worst_total = large.iter().map(|x| x.1).fold(0.0, f64::max);
    verdict(
        m2000 < m500 && worst_total <= 0.5,
        format!(
            "mean entrywise_off_max n=500 {m500:.4} > n=2000 {m2000:.4}; max totalsum_err at n=2000 {worst_total:.4} (ceiling 0.5)"
        ),
    )
}

fn criterion_10() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.json");
    std::fs::write(
        &cfg,
        r#"{"n": 40, "p": 0.5, "noise_grid": [1.0, 0.95, 0.9], "reps": 3,
            "methods": ["grampa", "rowqp"], "rounders": ["lap", "greedy", "argmax"],
            "base_seed": 10}"#,
    )
    .unwrap();
    let run = |workers: &str, name: &str| -> Vec<u8> {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_specmatch"))
            .args([
                "sweep",
                cfg.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
            ])
            .args(["--workers", workers])
            .env_remove("SPECMATCH_WORKERS")
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(out).unwrap()
    };
    let one = run("1", "w1.csv");
    let eight = run("8", "w8.csv");
    let again = run("8", "w8b.csv");
    let one_again = run("1", "w1b.csv");
    let pass = one == eight && eight == again && one == one_again;
    verdict(
        pass,
        format!(
            "{} bytes; workers 1 vs 8 identical: {}; repeated runs identical: {}",
            one.len(),
            one == eight,
            eight == again && one == one_again
        ),
    )
}

fn report(id: u32, title: &str, f: impl FnOnce() -> Verdict) -> bool {
    let start = Instant::now();
    let v = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        verdict(false, format!("panicked: {msg}"))
    });
    let status = if v.pass { "PASS" } else { "FAIL" };
    println!(
        "criterion {id:>2} {status} {title} [{:.1} s]: {}",
        start.elapsed().as_secs_f64(),
        v.detail
    );
    v.pass
}

fn main() {
    let mut results = Vec::new();
    let start = Instant::now();
    let trials = catch_unwind(low_noise_regime).ok();
    let regime_secs = start.elapsed().as_secs_f64();
    println!("low-noise regime (n=1000, p=0.5, s=0.999, eta=0.2, 10 reps): {regime_secs:.1} s");
    let shared = |c: fn(&[TrialRecord]) -> Verdict| {
        let t = trials.clone();
        move || match t {
            Some(t) => c(&t),
            None => verdict(false, "regime run panicked".into()),
        }
    };
    results.push(report(
        1,
        "exact recovery at low noise",
        shared(criterion_1),
    ));
    results.push(report(2, "diagonal dominance", shared(criterion_2)));
    results.push(report(3, "diagonal magnitude", shared(criterion_3)));
    results.push(report(4, "QP oracle equivalence", criterion_4));
    results.push(report(5, "contour representation", criterion_5));
    results.push(report(6, "row-sum feasibility", criterion_6));
    results.push(report(7, "identity suite", criterion_7));
    results.push(report(8, "assignment oracle", criterion_8));
    results.push(report(9, "local-law trend", criterion_9));
    results.push(report(10, "determinism", criterion_10));
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
