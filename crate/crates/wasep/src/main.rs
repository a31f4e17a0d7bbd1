//! Command-line interface: ensemble simulation, theory evaluation and the
//! verification suites.
//!
//! Exit codes: 0 on success, 1 when a verification suite fails, 2 on
//! usage or configuration errors.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use wasep::harness::{run_experiment, run_suite, ExperimentConfig, Suite};
use wasep::rates::{critical_grid_rate, finite_dim_rate, path_rate_sub, tagged_rate, GridPath};
use wasep::theory::covmat::CovMatrix;
use wasep::theory::variance::{current_cov, f_drift, fbm_cov, Regime, VarianceSpec};
use wasep::theory::volterra::{kernel, kernel_cov};

#[derive(Parser)]
#[command(name = "wasep", version, about = "Weakly asymmetric exclusion process simulator and fluctuation-theory toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an ensemble experiment from a JSON config
    Simulate {
        /// path to the experiment configuration
        #[arg(long)]
        config: PathBuf,
        /// override the master seed
        #[arg(long)]
        seed: Option<u64>,
        /// override the output directory
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate closed-form theory quantities
    #[command(subcommand)]
    Theory(TheoryCommand),
    /// Run a verification suite: identities, kernel, covariance, rates,
    /// inequality, or `all`
    Verify {
        /// suite name
        suite: String,
        /// shrink replica counts tenfold for a smoke run
        #[arg(long)]
        quick: bool,
        /// write the JSON report here
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RegimeArgs {
    /// asymmetry regime: sub, critical or super
    #[arg(long)]
    regime: String,
    /// asymmetry strength
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// particle density
    #[arg(long)]
    rho: f64,
}

impl RegimeArgs {
    fn spec(&self) -> Result<VarianceSpec, String> {
        let regime = match self.regime.as_str() {
            "sub" => Regime::Sub,
            "critical" => Regime::Critical,
            "super" => Regime::Super,
            other => return Err(format!("unknown regime `{other}`")),
        };
        if !(0.0..=1.0).contains(&self.rho) || self.alpha < 0.0 {
            return Err("need rho in [0,1] and alpha >= 0".into());
        }
        Ok(VarianceSpec::new(regime, self.alpha, self.rho))
    }
}

#[derive(Subcommand)]
enum TheoryCommand {
    /// Limiting covariance a(t, s) of the centred current
    A {
        #[command(flatten)]
        regime: RegimeArgs,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        s: f64,
    },
    /// Drift-corrected variance profile f(t)
    F {
        /// drift magnitude
        #[arg(long)]
        m: f64,
        #[arg(long)]
        t: f64,
    },
    /// Volterra kernel K(t, s) and the covariance integral
    Kernel {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        s: f64,
    },
    /// Rate of a piecewise-linear path given as "t:v,t:v,..."
    Rate {
        #[command(flatten)]
        regime: RegimeArgs,
        /// grid path, comma-separated time:value pairs
        #[arg(long)]
        path: String,
        /// report the tagged-particle rate (rho^2 times the current rate)
        #[arg(long)]
        tagged: bool,
    },
}

fn parse_path(s: &str) -> Result<GridPath, String> {
    let mut times = Vec::new();
    let mut values = Vec::new();
    for pair in s.split(',') {
        let (t, v) = pair
            .split_once(':')
            .ok_or_else(|| format!("malformed pair `{pair}`, expected time:value"))?;
        times.push(t.trim().parse::<f64>().map_err(|e| e.to_string())?);
        values.push(v.trim().parse::<f64>().map_err(|e| e.to_string())?);
    }
    GridPath::new(times, values).map_err(|e| e.to_string())
}

fn run_theory(cmd: TheoryCommand) -> Result<(), String> {
    match cmd {
        TheoryCommand::A { regime, t, s } => {
            let spec = regime.spec()?;
            if t < 0.0 || s < 0.0 {
                return Err("need t, s >= 0".into());
            }
            println!("a({t}, {s}) = {}", current_cov(t, s, &spec));
        }
        TheoryCommand::F { m, t } => {
            if t < 0.0 || m < 0.0 {
                return Err("need t, m >= 0".into());
            }
            println!("f({t}) = {}", f_drift(t, m));
        }
        TheoryCommand::Kernel { t, s } => {
            let k = kernel(t, s).map_err(|e| e.to_string())?;
            let cov = kernel_cov(t, s).map_err(|e| e.to_string())?;
            println!("K({t}, {s}) = {k}");
            println!("int_0^{s} K({t},u) K({s},u) du = {cov}");
            println!("closed-form covariance      = {}", fbm_cov(t, s));
        }
        TheoryCommand::Rate { regime, path, tagged } => {
            let spec = regime.spec()?;
            let h = parse_path(&path)?;
            let rate = match spec.regime {
                Regime::Sub => path_rate_sub(&h, &spec).map_err(|e| e.to_string())?,
                Regime::Super => {
                    let a = CovMatrix::from_times(h.times(), &spec).map_err(|e| e.to_string())?;
                    finite_dim_rate(h.values(), &a).map_err(|e| e.to_string())?
                }
                Regime::Critical => {
                    let grids = vec![h.times().to_vec()];
                    let (vals, _, _) =
                        critical_grid_rate(&h, &grids, &spec).map_err(|e| e.to_string())?;
                    vals[0]
                }
            };
            let label = match spec.regime {
                Regime::Sub => "path rate",
                Regime::Super | Regime::Critical => "grid quadratic-form rate",
            };
            if tagged {
                println!("{label} (tagged) = {}", tagged_rate(rate, spec.rho));
            } else {
                println!("{label} = {rate}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Simulate { config, seed, out } => {
            let mut cfg = match ExperimentConfig::load(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("config error: {e}");
                    return ExitCode::from(2);
                }
            };
            if let Some(s) = seed {
                cfg.master_seed = s;
            }
            let out_dir = out.unwrap_or_else(|| PathBuf::from(&cfg.output_path));
            match run_experiment(&cfg, &out_dir) {
                Ok(artifacts) => {
                    println!(
                        "{} replicas completed, {} breached; output in {}",
                        artifacts.result.series.len(),
                        artifacts.result.breach_count(),
                        out_dir.display()
                    );
                    for e in &artifacts.estimates {
                        match (e.theory, e.z_score) {
                            (Some(th), Some(z)) => println!(
                                "  {}: {:.6} +- {:.1e} (theory {:.6}, z {:+.2})",
                                e.name, e.estimate, e.std_error, th, z
                            ),
                            _ => println!("  {}: {:.6} +- {:.1e}", e.name, e.estimate, e.std_error),
                        }
                    }
                    if let Some(d) = &artifacts.doubling {
                        println!(
                            "ring doubling L={} vs 2L={}: {}",
                            d.base_ring,
                            d.doubled_ring,
                            if d.passed { "consistent" } else { "FINITE-SIZE CONTAMINATION" }
                        );
                        if !d.passed {
                            return ExitCode::from(1);
                        }
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Command::Theory(cmd) => match run_theory(cmd) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Command::Verify { suite, quick, out } => {
            let suites: Vec<Suite> = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                match Suite::from_str(&suite) {
                    Ok(s) => vec![s],
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(2);
                    }
                }
            };
            let mut reports = Vec::new();
            let mut all_pass = true;
            for s in suites {
                match run_suite(s, quick) {
                    Ok(report) => {
                        for c in &report.checks {
                            println!(
                                "[{}] {}: {} ({})",
                                report.suite,
                                c.name,
                                if c.pass { "PASS" } else { "FAIL" },
                                c.detail
                            );
                        }
                        all_pass &= report.passed;
                        reports.push(report);
                    }
                    Err(e) => {
                        eprintln!("error running suite {}: {e}", s.name());
                        return ExitCode::from(2);
                    }
                }
            }
            if let Some(path) = out {
                match serde_json::to_string_pretty(&reports) {
                    Ok(json) => {
                        if let Err(e) = std::fs::write(&path, json) {
                            eprintln!("error writing report: {e}");
                            return ExitCode::from(2);
                        }
                    }
                    Err(e) => {
                        eprintln!("error serialising report: {e}");
                        return ExitCode::from(2);
                    }
                }
            }
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
