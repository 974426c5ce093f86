use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use specmatch_cli::sweep::{run_sweep, write_plot_data, SweepOptions};
use specmatch_cli::verify::{run_verify, VerifyOptions};
use specmatch_cli::{CliError, CliResult, ExperimentConfig, Rounder};
use specmatch_core::diagnostics::dominance_report;
use specmatch_core::dump::{read_matrix, read_permutation, write_matrix, write_permutation};
use specmatch_core::models::{gen_er_pair, gen_gaussian_pair, ModelKind, TruthMode};
use specmatch_core::rounding::overlap;
use specmatch_core::similarity::{Method, Orientation};
use specmatch_core::{Permutation, SymMatrix};

#[derive(Parser)]
#[command(
    name = "specmatch",
    version,
    about = "Spectral graph matching experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a correlated pair and write a.txt, b.txt and truth.txt.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "erdos_renyi")]
        model: ModelKind,
        /// Edge density (erdos_renyi).
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Edge retention probability (erdos_renyi).
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        /// Noise level (gaussian).
        #[arg(long, default_value_t = 0.0)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "random")]
        truth_mode: TruthMode,
        #[arg(long)]
        out: PathBuf,
    },
    /// Match two dumped matrices and print the correspondence.
    Match {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Planted permutation; enables the overlap and dominance report.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long, default_value_t = specmatch_cli::config::DEFAULT_ETA)]
        eta: f64,
        #[arg(long, default_value = "grampa")]
        method: Method,
        #[arg(long, default_value = "lap")]
        rounder: Rounder,
        /// Noise level used for the predicted diagonal magnitude.
        #[arg(long, default_value_t = 0.0)]
        sigma: f64,
    },
    /// Run a noise sweep described by a config file and write CSV results.
    Sweep {
        config: PathBuf,
        /// Output CSV path, or `-` for stdout.
        #[arg(long, default_value = "sweep.csv")]
        out: PathBuf,
        /// Directory for per-method `noise mean_overlap` files.
        #[arg(long)]
        plot_data: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        /// Record measured runtimes (output is then no longer reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Run the built-in identity and oracle suite.
    Verify {
        #[arg(long, value_enum)]
        inject_fault: Option<Fault>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Fault {
    /// Integrate the contour clockwise.
    ContourOrientation,
}

fn load_matrix(path: &Path) -> CliResult<SymMatrix> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let parse = |source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    };
    let m = read_matrix(BufReader::new(file)).map_err(parse)?;
    SymMatrix::new(m).map_err(parse)
}

fn load_permutation(path: &Path) -> CliResult<Permutation> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    read_permutation(BufReader::new(file)).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(
    path: &Path,
    f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> CliResult<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(file);
    f(&mut w)
        .and_then(|_| w.flush())
        .map_err(|e| CliError::io(path, e))
}

#[allow(clippy::too_many_arguments)]
fn cmd_generate(
    n: usize,
    model: ModelKind,
    p: f64,
    s: f64,
    sigma: f64,
    seed: u64,
    truth_mode: TruthMode,
    out: &Path,
) -> CliResult<()> {
    let pair = match model {
        ModelKind::ErdosRenyi => gen_er_pair(n, p, s, seed, truth_mode)?,
        ModelKind::Gaussian => gen_gaussian_pair(n, sigma, seed, truth_mode)?,
    };
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    write_file(&out.join("a.txt"), |w| write_matrix(w, pair.a.as_matrix()))?;
    write_file(&out.join("b.txt"), |w| write_matrix(w, pair.b.as_matrix()))?;
    write_file(&out.join("truth.txt"), |w| {
        write_permutation(w, &pair.truth)
    })?;
    Ok(())
}

fn cmd_match(
    a: &Path,
    b: &Path,
    truth: Option<&Path>,
    eta: f64,
    method: Method,
    rounder: Rounder,
    sigma: f64,
) -> CliResult<()> {
    let a = load_matrix(a)?;
    let b = load_matrix(b)?;
    let truth = truth.map(load_permutation).transpose()?;
    let x = specmatch_cli::pipeline::similarity(method, &a, &b, eta)?;
    let matching = rounder.round(x.entries())?;

    let stdout = std::io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let io = |e| CliError::io("<stdout>", e);
    for (i, target) in matching.map().iter().enumerate() {
        match target {
            Some(j) => writeln!(out, "{i} {j}"),
            None => writeln!(out, "{i} -1"),
        }
        .map_err(io)?;
    }
    if let Some(truth) = truth {
        let report = dominance_report(&x, &truth, sigma, method.is_row_constrained())?;
        let lines = [
            ("overlap", format!("{:?}", overlap(&matching, &truth)?)),
            ("bijective", matching.is_bijective().to_string()),
            ("min_true", format!("{:?}", report.min_true)),
            ("max_off", format!("{:?}", report.max_off)),
            ("margin", format!("{:?}", report.margin)),
            ("separated", report.separated.to_string()),
            ("pred_diag", format!("{:?}", report.pred_diag)),
            ("diag_mean", format!("{:?}", report.diag_mean)),
            ("diag_rel_err", format!("{:?}", report.diag_rel_err)),
        ];
        for (key, value) in lines {
            writeln!(out, "{key}={value}").map_err(io)?;
        }
    }
    out.flush().map_err(io)
}

fn cmd_sweep(
    config: &Path,
    out: &Path,
    plot_data: Option<&Path>,
    workers: Option<usize>,
    timing: bool,
) -> CliResult<()> {
    let cfg = ExperimentConfig::load(config)?;
    let opts = SweepOptions { workers, timing };
    let outcome = if out == Path::new("-") {
        run_sweep(&cfg, opts, std::io::stdout().lock())?
    } else {
        let file = File::create(out).map_err(|e| CliError::io(out, e))?;
        run_sweep(&cfg, opts, BufWriter::new(file))?
    };
    if let Some(dir) = plot_data {
        write_plot_data(dir, &outcome.summaries)?;
    }
    Ok(())
}

fn cmd_verify(fault: Option<Fault>) -> CliResult<bool> {
    let opts = VerifyOptions {
        contour_orientation: match fault {
            Some(Fault::ContourOrientation) => Orientation::Clockwise,
            None => Orientation::CounterClockwise,
        },
    };
    let checks = run_verify(opts)?;
    let mut failed = Vec::new();
    for c in &checks {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        println!(
            "{status} {:<26} residual={:.3e} tol={:.1e}",
            c.name, c.residual, c.tolerance
        );
        if !c.passed() {
            failed.push(c.name);
        }
    }
    if failed.is_empty() {
        println!("all {} checks passed", checks.len());
        Ok(true)
    } else {
        println!("failed: {}", failed.join(", "));
        Ok(false)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate {
            n,
            model,
            p,
            s,
            sigma,
            seed,
            truth_mode,
            out,
        } => cmd_generate(n, model, p, s, sigma, seed, truth_mode, &out).map(|_| true),
        Command::Match {
            a,
            b,
            truth,
            eta,
            method,
            rounder,
            sigma,
        } => cmd_match(&a, &b, truth.as_deref(), eta, method, rounder, sigma).map(|_| true),
        Command::Sweep {
            config,
            out,
            plot_data,
            workers,
            timing,
        } => cmd_sweep(&config, &out, plot_data.as_deref(), workers, timing).map(|_| true),
        Command::Verify { inject_fault } => cmd_verify(inject_fault),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
