use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use llab_cli::config::parse_sweep;
use llab_cli::decompose::decompose_file;
use llab_cli::{run_suite, CliError, ReportBundle, SuiteConfig};

#[derive(Parser)]
#[command(name = "llab", version, about = "Lefschetz calculus verification suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Randomized pointwise identities; prints `{name: {max_residual, cases}}`.
    VerifyIdentities {
        /// Half dimension; repeat or comma-separate for several.
        #[arg(long, value_delimiter = ',', default_value = "2")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fourier Hodge theory on a flat torus.
    Torus {
        #[arg(long, value_delimiter = ',', default_value = "2")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        cutoff: usize,
        /// p7, l8, l10, kahler, antiinv, selfdual or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dirichlet spectrum on hyperbolic discs.
    Hyperbolic {
        #[arg(long = "R", short = 'R')]
        radius: Option<f64>,
        #[arg(long)]
        h: Option<f64>,
        #[arg(long, default_value_t = 0)]
        degree: usize,
        /// `R=2,4,6:h=0.12,0.06`; overrides `--R` and `--h`.
        #[arg(long)]
        sweep: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lefschetz and bidegree decomposition of a form in a JSON file.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
}

fn finish(report: &ReportBundle, stdout: String) -> ExitCode {
    println!("{stdout}");
    if report.verdict {
        ExitCode::SUCCESS
    } else {
        for (name, r) in report.residuals.iter().filter(|(_, r)| !r.pass) {
            eprintln!("FAIL {name}: {:e} (tol {:e})", r.max_residual, r.tol);
        }
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::VerifyIdentities { n, cases, seed, tol, out } => {
            let cfg = SuiteConfig { n: n.clone(), cases, seed, tol, out, ..SuiteConfig::new("identities") };
            let report = run_suite(&cfg)?;
            let single = n.len() == 1;
            let map: serde_json::Map<String, serde_json::Value> = report
                .residuals
                .iter()
                .map(|(key, r)| {
                    let key = if single { key.split_once('/').map_or(key.as_str(), |k| k.1) } else { key };
                    let mut v = serde_json::json!({ "max_residual": r.max_residual, "cases": r.cases });
                    if let Some(w) = &r.warning {
                        v["warning"] = w.clone().into();
                    }
                    (key.to_string(), v)
                })
                .collect();
            let text = serde_json::to_string_pretty(&map)?;
            Ok(finish(&report, text))
        }
        Command::Torus { n, cutoff, suite, seed, samples, tol, out } => {
            let cfg = SuiteConfig { n, cutoff, cases: samples, seed, tol, out, ..SuiteConfig::new(&format!("torus-{suite}")) };
            let report = run_suite(&cfg)?;
            Ok(finish(&report, report.canonical_json()))
        }
        Command::Hyperbolic { radius, h, degree, sweep, out } => {
            let points = match (sweep, radius, h) {
                (Some(s), _, _) => parse_sweep(&s).ok_or(CliError::BadSweep(s))?,
                (None, Some(r), Some(h)) => vec![(r, h)],
                (None, r, h) => vec![(r.unwrap_or(2.0), h.unwrap_or(0.12))],
            };
            let cfg = SuiteConfig { degree, points, out, n: vec![1], ..SuiteConfig::new("hyperbolic") };
            let report = run_suite(&cfg)?;
            Ok(finish(&report, report.canonical_json()))
        }
        Command::Decompose { input, output } => {
            let out = decompose_file(&input, &output)?;
            eprintln!("lefschetz residual {:e}, bidegree residual {:e}", out.lefschetz_residual, out.bidegree_residual);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Some(threads) = std::env::var("LLAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            log::warn!("LLAB_THREADS ignored: {e}");
        }
    }
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
