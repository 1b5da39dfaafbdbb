use clap::{Parser, Subcommand};
use polymerlab::config::RunConfig;
use polymerlab::error::Error;
use polymerlab::output::{
    curve_csv, density_csv, error_json, sweep_csv, to_json, write_atomic,
};
use polymerlab::propagator::{endpoint_density, feynman_kac_mc, moments};
use polymerlab::scaling::run_sweep;
use polymerlab::spectral::{beta_critical, compute_curve};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

/// Polymer pinning laboratory: spectral constants, radius computations, and
/// scaling-law sweeps for radial compactly supported potentials.
#[derive(Parser)]
#[command(name = "polymerlab", version)]
struct Cli {
    /// Run configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker pool size (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output directory, overriding the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Master seed, overriding the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the sigma0(k) curve and the critical data for the potential.
    Spectral,
    /// Print the critical data (beta_cr, kappa, sigma0'(0)) as JSON.
    Betacrit,
    /// Compute one moment record at (beta, t); optionally cross-check by MC.
    Radius {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        t: f64,
        /// Run the Feynman-Kac Monte Carlo cross-check.
        #[arg(long)]
        mc: bool,
    },
    /// Run the full (beta, t) sweep and write records plus the regime report.
    Sweep,
    /// Run the sweep and gate on the two scaling-band verdicts.
    Verify,
    /// Write the endpoint radial density q(r) at (beta, t).
    Density {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        t: f64,
    },
}

#[derive(Serialize)]
struct RadiusOutput {
    record: polymerlab::MomentRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    mc: Option<polymerlab::McResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mc_consistent: Option<bool>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", error_json(error_kind(&e), &e.to_string()));
            ExitCode::from(exit_code(&e))
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidArgument(_) | Error::Config(_) => "config",
        Error::ExcessiveFailures { .. } => "sweep",
        Error::Io(_) => "io",
        _ => "numeric",
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_) | Error::Config(_) => 2,
        Error::ExcessiveFailures { .. } => 5,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Error::InvalidArgument("--jobs must be positive".into()));
        }
        // ignore the error when a global pool already exists (tests)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let config_path = cli
        .config
        .ok_or_else(|| Error::Config("--config is required".into()))?;
    let mut cfg = RunConfig::load(&config_path)?;
    if let Some(seed) = cli.seed {
        cfg.solver.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.output.dir = out.to_string_lossy().into_owned();
    }
    let out_dir = PathBuf::from(&cfg.output.dir);
    let want_csv = cfg.output.formats.iter().any(|f| f == "csv");
    let want_json = cfg.output.formats.iter().any(|f| f == "json");

    let p = cfg.build_potential()?;
    let opts = cfg.spectral_opts();
    let solver = cfg.solver_config();

    match cli.command {
        Command::Spectral => {
            let crit = beta_critical(&p, opts.n_nodes)?;
            let curve = compute_curve(&p, &cfg.k_grid(), opts.n_nodes)?;
            if want_csv {
                write_atomic(&out_dir.join("sigma0.csv"), &curve_csv(&curve))?;
            }
            if want_json {
                write_atomic(&out_dir.join("critical.json"), &to_json(&crit)?)?;
            }
            println!("beta_cr = {:.12}  kappa = {:.12}", crit.beta_cr, crit.kappa);
            Ok(0)
        }
        Command::Betacrit => {
            let crit = beta_critical(&p, opts.n_nodes)?;
            print!("{}", to_json(&crit)?);
            Ok(0)
        }
        Command::Radius { beta, t, mc } => {
            let crit = beta_critical(&p, opts.n_nodes)?;
            let record = moments(&p, beta, t, &solver, &crit, &opts)?;
            let mut consistent = None;
            let mc_result = if mc {
                let est = feynman_kac_mc(&p, beta, t, &solver)?;
                let z_ok = (record.z - est.z.mean).abs() <= 3.0 * est.z.stderr;
                let r_ok = (record.r - est.r).abs() <= 3.0 * est.r_stderr;
                consistent = Some(z_ok && r_ok);
                Some(est)
            } else {
                None
            };
            let failed = consistent == Some(false);
            print!(
                "{}",
                to_json(&RadiusOutput {
                    record,
                    mc: mc_result,
                    mc_consistent: consistent,
                })?
            );
            Ok(if failed { 3 } else { 0 })
        }
        Command::Sweep => {
            let crit = beta_critical(&p, opts.n_nodes)?;
            let report = run_sweep(&p, &cfg.sweep_spec(), &crit, &opts)?;
            if want_csv {
                write_atomic(&out_dir.join("sweep.csv"), &sweep_csv(&report))?;
            }
            if want_json {
                write_atomic(&out_dir.join("report.json"), &to_json(&report)?)?;
            }
            println!(
                "{} records, {} failures, band verdict: {}",
                report.records.len(),
                report.failures.len(),
                if report.verdict { "pass" } else { "fail" }
            );
            Ok(0)
        }
        Command::Verify => {
            let crit = beta_critical(&p, opts.n_nodes)?;
            let report = run_sweep(&p, &cfg.sweep_spec(), &crit, &opts)?;
            if want_csv {
                write_atomic(&out_dir.join("sweep.csv"), &sweep_csv(&report))?;
            }
            if want_json {
                write_atomic(&out_dir.join("report.json"), &to_json(&report)?)?;
            }
            print_verify_summary(&report);
            Ok(if report.verdict { 0 } else { 4 })
        }
        Command::Density { beta, t } => {
            let samples = endpoint_density(&p, beta, t, &solver)?;
            write_atomic(&out_dir.join("density.csv"), &density_csv(&samples))?;
            println!("density written ({} grid points)", samples.len());
            Ok(0)
        }
    }
}

fn print_verify_summary(report: &polymerlab::RegimeReport) {
    println!("beta_cr = {:.10}", report.beta_cr);
    println!(
        "band 1 (globular, r*(beta-beta_cr)): {} points, ratio in [{:.6}, {:.6}] -> {}",
        report.band1.points,
        report.band1.ratio_min,
        report.band1.ratio_max,
        pass_str(report.band1.pass)
    );
    println!(
        "band 2 (extended, r/sqrt(t)):        {} points, ratio in [{:.6}, {:.6}] -> {}",
        report.band2.points,
        report.band2.ratio_min,
        report.band2.ratio_max,
        pass_str(report.band2.pass)
    );
    for a in &report.alpha_plus {
        println!(
            "alpha_plus(beta={:.6}) = {:.6} (residual {:.2e})",
            a.beta, a.estimate, a.residual
        );
    }
    for a in &report.alpha_minus {
        println!("alpha_minus(chi={:+.4}) = {:.6}", a.chi, a.estimate);
    }
    if !report.failures.is_empty() {
        println!("{} point(s) failed:", report.failures.len());
        for f in &report.failures {
            println!("  beta={:.6} t={:.1}: {}", f.beta, f.t, f.error);
        }
    }
    println!("verdict: {}", pass_str(report.verdict));
}

fn pass_str(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}
