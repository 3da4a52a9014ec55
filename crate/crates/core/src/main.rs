//! Command-line front end: experiment execution, identity verification,
//! family catalog, and CSV/JSON/SVG emission.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sptri::config::{GridRange, RunConfig};
use sptri::error::Error;
use sptri::experiments::{
    equivalence7_experiment, proposition1_experiment, theorem1_experiment, theorem2_experiment,
    RateReport, TheoremOutcome,
};
use sptri::families::catalog;
use sptri::fit::Verdict;
use sptri::moduli::{check_basic_conditions, check_condition_b, dyadic_n_grid};
use sptri::output::{
    outcome_to_json, single_report_to_json, write_config_sidecar, write_loglog_svg,
    write_report_csv,
};
use sptri::verify::run_verification;

#[derive(Parser)]
#[command(name = "sptri", version, about = "Triangular summation of multiple Fourier series in S^p: norms, error functionals, and rate experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the identity/property verification suite (exit 0 iff all pass)
    Verify {
        /// Trimmed sweep that finishes in a few seconds
        #[arg(long)]
        quick: bool,
    },
    /// Run one experiment and write CSV/JSON (and optional SVG) outputs
    Experiment {
        #[arg(value_enum)]
        kind: ExperimentKind,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// List the built-in function families
    Catalog,
    /// Print the S^p norm interval and profile head of a family
    Norms {
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Check modulus conditions 1)-4) and the tail condition (B)
    CheckOmega {
        #[command(flatten)]
        opts: RunOpts,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExperimentKind {
    Prop1,
    Thm1,
    Thm2,
    Equiv7,
}

impl ExperimentKind {
    fn name(self) -> &'static str {
        match self {
            Self::Prop1 => "prop1",
            Self::Thm1 => "thm1",
            Self::Thm2 => "thm2",
            Self::Equiv7 => "equiv7",
        }
    }
}

#[derive(Args)]
struct RunOpts {
    /// JSON config file; CLI flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Family name: geometric | power | single_block | lacunary | y_power
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    /// Taylor order (thm1)
    #[arg(long)]
    r: Option<u32>,
    /// Abel-Poisson exponent (thm2, equiv7)
    #[arg(long)]
    s: Option<f64>,
    /// Modulus exponent; also sets the family beta coupling alpha + 1/p + (order-1)
    #[arg(long)]
    alpha: Option<f64>,
    /// Explicit family exponent (overrides the alpha coupling)
    #[arg(long)]
    beta: Option<f64>,
    /// Geometric ratio
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    d: Option<u32>,
    /// single_block order
    #[arg(long)]
    nu0: Option<u32>,
    /// lacunary base
    #[arg(long)]
    base: Option<u32>,
    #[arg(long)]
    cutoff: Option<u32>,
    /// Dyadic grid "j1..j2" meaning rho = 1 - 2^{-j}
    #[arg(long, value_name = "j1..j2")]
    rho_grid: Option<String>,
    /// Dyadic grid "j1..j2" meaning n = 2^j
    #[arg(long, value_name = "j1..j2")]
    n_grid: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit one log-log SVG per report
    #[arg(long)]
    svg: bool,
    /// Fail (exit 3) when an uncertified tail is encountered
    #[arg(long)]
    strict: bool,
    /// Smaller grids and cutoffs
    #[arg(long)]
    quick: bool,
    /// Random-phase seed for materialized spectra (profiles are invariant)
    #[arg(long)]
    seed: Option<u64>,
    /// Modulus kind: power | power_log
    #[arg(long)]
    omega_kind: Option<String>,
    /// Log exponent of the power_log modulus
    #[arg(long)]
    omega_beta: Option<f64>,
}

impl RunOpts {
    fn resolve(&self) -> Result<RunConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(name) = &self.family {
            cfg.family.name = name.clone();
        }
        if let Some(v) = self.p {
            cfg.p = v;
        }
        if let Some(v) = self.r {
            cfg.r = v;
        }
        if let Some(v) = self.s {
            cfg.s = v;
        }
        if let Some(v) = self.alpha {
            cfg.omega.alpha = v;
        }
        if let Some(v) = self.beta {
            cfg.family.beta = Some(v);
        }
        if let Some(v) = self.q {
            cfg.family.q = v;
        }
        if let Some(v) = self.d {
            cfg.family.d = v;
        }
        if let Some(v) = self.nu0 {
            cfg.family.nu0 = v;
        }
        if let Some(v) = self.base {
            cfg.family.base = v;
        }
        if let Some(v) = self.cutoff {
            cfg.cutoff = v;
        }
        if let Some(text) = &self.rho_grid {
            cfg.rho_grid = GridRange::parse(text)?;
        }
        if let Some(text) = &self.n_grid {
            cfg.n_grid = GridRange::parse(text)?;
        }
        if let Some(out) = &self.out {
            cfg.out = out.clone();
        }
        if self.svg {
            cfg.svg = true;
        }
        if self.strict {
            cfg.strict = true;
        }
        if let Some(seed) = self.seed {
            cfg.seed = Some(seed);
        }
        if let Some(kind) = &self.omega_kind {
            cfg.omega.kind = kind.clone();
        }
        if let Some(v) = self.omega_beta {
            cfg.omega.beta = v;
        }
        if self.quick {
            cfg.cutoff = cfg.cutoff.min(10_000);
            cfg.rho_grid = GridRange::new(cfg.rho_grid.from_j, cfg.rho_grid.to_j.min(10))?;
            cfg.n_grid = GridRange::new(cfg.n_grid.from_j, cfg.n_grid.to_j.min(10))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

const EXIT_VERIFICATION_FAILURE: u8 = 1;
const EXIT_CONFIG_ERROR: u8 = 2;
const EXIT_UNCERTIFIED: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::UncertifiedTail(_) => ExitCode::from(EXIT_UNCERTIFIED),
                _ => ExitCode::from(EXIT_CONFIG_ERROR),
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Verify { quick } => cmd_verify(quick),
        Command::Experiment { kind, opts } => cmd_experiment(kind, &opts),
        Command::Catalog => cmd_catalog(),
        Command::Norms { opts } => cmd_norms(&opts),
        Command::CheckOmega { opts } => cmd_check_omega(&opts),
    }
}

fn cmd_verify(quick: bool) -> Result<ExitCode, Error> {
    let checks = run_verification(quick);
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name.as_str())
        .collect();
    for c in &checks {
        eprintln!(
            "{} {} — {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    let summary = serde_json::json!({
        "command": "verify",
        "quick": quick,
        "total": checks.len(),
        "failed": failed,
        "checks": checks,
        "version": sptri::VERSION,
    });
    println!("{}", serde_json::to_string_pretty(&summary).expect("serializable"));
    if failed.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("failed checks: {}", failed.join(", "));
        Ok(ExitCode::from(EXIT_VERIFICATION_FAILURE))
    }
}

fn cmd_experiment(kind: ExperimentKind, opts: &RunOpts) -> Result<ExitCode, Error> {
    let cfg = opts.resolve()?;
    let order = match kind {
        ExperimentKind::Thm1 => f64::from(cfg.r),
        ExperimentKind::Thm2 | ExperimentKind::Equiv7 => cfg.s,
        ExperimentKind::Prop1 => 1.0,
    };
    let family = cfg.family.resolve(cfg.p, cfg.omega.alpha, order)?;
    let instance = family.instantiate(cfg.p, cfg.cutoff)?;
    let input = instance.experiment_input(cfg.seed)?;
    let omega = cfg.omega.resolve()?;
    let th = cfg.thresholds.ratio();

    std::fs::create_dir_all(&cfg.out)?;
    write_config_sidecar(&cfg.out.join("config.json"), &cfg)?;

    let kind_name = kind.name();
    let (all_pass, reports): (bool, Vec<(String, RateReport)>) = match kind {
        ExperimentKind::Prop1 => {
            let outcome = proposition1_experiment(&input, &omega, &cfg.n_grid.n_grid(), &th)?;
            emit_outcome(kind_name, &cfg, &outcome)?
        }
        ExperimentKind::Thm1 => {
            let outcome =
                theorem1_experiment(&input, cfg.r, &omega, &cfg.rho_grid.rho_grid(), &th)?;
            emit_outcome(kind_name, &cfg, &outcome)?
        }
        ExperimentKind::Thm2 => {
            let outcome =
                theorem2_experiment(&input, cfg.s, &omega, &cfg.rho_grid.rho_grid(), &th)?;
            emit_outcome(kind_name, &cfg, &outcome)?
        }
        ExperimentKind::Equiv7 => {
            let report = equivalence7_experiment(
                &input,
                cfg.s,
                &cfg.rho_grid.rho_grid(),
                cfg.thresholds.equiv_delta,
                &th,
            )?;
            let json = single_report_to_json(kind_name, &cfg, &report)?;
            std::fs::write(cfg.out.join(format!("{kind_name}_outcome.json")), &json)?;
            println!("{json}");
            (
                report.verdict.passed(),
                vec![(report.quantity_name.clone(), report)],
            )
        }
    };

    let mut uncertified = false;
    for (statement, report) in &reports {
        let csv_path = cfg.out.join(format!("{kind_name}_{statement}.csv"));
        write_report_csv(&csv_path, report)?;
        if cfg.svg {
            let svg_path = cfg.out.join(format!("{kind_name}_{statement}.svg"));
            let value_series: Vec<(f64, f64)> =
                report.grid.iter().map(|&(t, _, up)| (t, up)).collect();
            let bound_series: Vec<(f64, f64)> = report
                .grid
                .iter()
                .zip(report.bound_values.iter())
                .map(|(&(t, _, _), &b)| (t, b))
                .collect();
            write_loglog_svg(
                &svg_path,
                &format!("{kind_name}: {statement}"),
                &[("value", value_series), ("bound", bound_series)],
            )?;
        }
        if report.grid.iter().any(|&(_, _, up)| !up.is_finite()) {
            uncertified = true;
        }
        eprintln!(
            "{kind_name}/{statement}: verdict {:?}, fitted slope {:?}",
            report.verdict, report.fitted_slope
        );
    }

    if uncertified && cfg.strict {
        eprintln!("uncertified tail encountered under --strict");
        return Ok(ExitCode::from(EXIT_UNCERTIFIED));
    }
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFICATION_FAILURE)
    })
}

/// Writes the outcome JSON and returns the per-statement reports in
/// statement order.
fn emit_outcome(
    kind_name: &str,
    cfg: &RunConfig,
    outcome: &TheoremOutcome,
) -> Result<(bool, Vec<(String, RateReport)>), Error> {
    let json = outcome_to_json(kind_name, cfg, outcome)?;
    std::fs::write(cfg.out.join(format!("{kind_name}_outcome.json")), &json)?;
    println!("{json}");
    for check in &outcome.equivalence {
        eprintln!(
            "{kind_name}/equivalence {}: {:?}",
            check.implication, check.verdict
        );
    }
    let reports = outcome
        .statement_ids
        .iter()
        .map(|id| (id.clone(), outcome.reports[id].clone()))
        .collect();
    Ok((outcome.all_pass(), reports))
}

fn cmd_catalog() -> Result<ExitCode, Error> {
    let doc = serde_json::json!({
        "families": catalog(),
        "version": sptri::VERSION,
    });
    println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    Ok(ExitCode::SUCCESS)
}

fn cmd_norms(opts: &RunOpts) -> Result<ExitCode, Error> {
    let cfg = opts.resolve()?;
    let family = cfg.family.resolve(cfg.p, cfg.omega.alpha, 1.0)?;
    let instance = family.instantiate(cfg.p, cfg.cutoff)?;
    let norm = instance.profile.sp_norm();
    let head: Vec<f64> = instance
        .profile
        .values()
        .iter()
        .take(16)
        .copied()
        .collect();
    let doc = serde_json::json!({
        "family": instance.label(),
        "p": cfg.p,
        "cutoff": instance.cutoff,
        "sp_norm": { "lower": norm.lower, "upper": norm.upper },
        "tail_p_mass": instance.profile.tail_p_mass(),
        "profile_head": head,
        "y_supported": instance.y_supported,
        "version": sptri::VERSION,
    });
    println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    Ok(ExitCode::SUCCESS)
}

fn cmd_check_omega(opts: &RunOpts) -> Result<ExitCode, Error> {
    let cfg = opts.resolve()?;
    let omega = cfg.omega.resolve()?;
    let basic = check_basic_conditions(&omega, 1 << 12)?;
    let b_grid = dyadic_n_grid(cfg.n_grid.from_j..=cfg.n_grid.to_j);
    let b = check_condition_b(&omega, &b_grid, 1024)?;
    let doc = serde_json::json!({
        "modulus": omega.name,
        "basic_conditions": {
            "verdict": basic.verdict,
            "detail": basic.detail,
        },
        "condition_b": {
            "verdict": b.verdict,
            "detail": b.detail,
            "n_grid": b.grid,
            "ratios": b.ratios,
        },
        "version": sptri::VERSION,
    });
    println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    let ok = basic.verdict != Verdict::Fail && b.verdict != Verdict::Fail;
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFICATION_FAILURE)
    })
}
