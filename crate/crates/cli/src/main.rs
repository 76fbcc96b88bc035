//! `unruh-dpt`: sweeps, spectra, trajectories and phase diagnostics for two
//! uniformly accelerated detectors.
//!
//! Output files:
//! - `sweep`: `alpha,f,phase,Mz,Mzz,Mc,concurrence,gap,degeneracy` (CSV) or
//!   the same fields as a JSON array of objects.
//! - `spectrum`: `p,re,im`, one row per Liouvillian eigenvalue, `p` counting
//!   from 1 in ascending order of the real part.
//! - `evolve`: `tau,Mz,Mzz,Mc,purity,Q` with `Q = M_c + M_zz`, one row per sample.
//! - `critical`, `classify`, `symmetry`: a JSON object on stdout (or `--out`).
//!
//! Rates and proper times are in units of Γ₀ = λ²ω₀/8π.
//!
//! Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 numerical failure.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use unruh_dpt::correlations::{critical_acceleration, RateUnits, DEFAULT_EPSILON_LOC};
use unruh_dpt::lindblad::{evolve_density, spectrum, EvolveOptions, Liouvillian};
use unruh_dpt::sweep::{
    derivative_scan, emit, run_sweep, spectrum_csv, sweep_csv, sweep_json, trajectory_csv, Format, InitialState,
    Observable, ObservationMode, SweepConfig,
};
use unruh_dpt::symmetry::{classify_phase, symmetry_residual, DEFAULT_KAPPAS};
use unruh_dpt::{DissipationCoefficients, Error, PhysicalParams};

#[derive(Parser)]
#[command(name = "unruh-dpt", version, about = "Dissipative phase transition of two accelerated detectors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the acceleration and tabulate steady observables
    Sweep(SweepArgs),
    /// Eigenvalues of the Liouvillian
    Spectrum(GeneratorArgs),
    /// Integrate the master equation from an initial state
    Evolve(EvolveArgs),
    /// Critical acceleration for the configured separation
    Critical(PhysicsArgs),
    /// Phase of a single acceleration
    Classify(ClassifyArgs),
    /// Exchange-symmetry residuals of the Liouvillian
    Symmetry(SymmetryArgs),
}

#[derive(Args, Clone)]
struct PhysicsArgs {
    /// Detector separation L (m)
    #[arg(long = "L", default_value_t = 6e-7)]
    separation: f64,
    /// Transition frequency ω₀ (rad/s)
    #[arg(long, default_value_t = 1e14)]
    omega0: f64,
    /// Field coupling λ
    #[arg(long, default_value_t = 0.1)]
    coupling: f64,
    /// Localization threshold on 1 − f
    #[arg(long, default_value_t = DEFAULT_EPSILON_LOC)]
    epsilon_loc: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl PhysicsArgs {
    fn params(&self, alpha: f64) -> unruh_dpt::Result<PhysicalParams> {
        PhysicalParams::new(alpha, self.separation, self.omega0, self.coupling)
            .map_err(|e| Error::Config(e.to_string()))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Branch,
    Finite,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON sweep configuration; flags given explicitly override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    alpha_min: Option<f64>,
    #[arg(long)]
    alpha_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Logarithmic grid (the default)
    #[arg(long, conflicts_with = "linear")]
    log: bool,
    #[arg(long)]
    linear: bool,
    #[arg(long = "L")]
    separation: Option<f64>,
    #[arg(long)]
    omega0: Option<f64>,
    #[arg(long)]
    coupling: Option<f64>,
    #[arg(long)]
    epsilon_loc: Option<f64>,
    /// singlet, triplet0, product00, product11, mixed, or a JSON density matrix file
    #[arg(long)]
    init: Option<String>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Observation time for `--mode finite`
    #[arg(long)]
    tau_obs: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Print α_c and the derivative peaks of Mz, Mzz, Mc to stderr
    #[arg(long)]
    report: bool,
}

impl SweepArgs {
    fn config(&self) -> unruh_dpt::Result<SweepConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
                serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
            }
            None => SweepConfig::default(),
        };
        macro_rules! apply {
            ($($field:ident => $target:ident),*) => {
                $(if let Some(v) = self.$field { cfg.$target = v; })*
            };
        }
        apply!(alpha_min => alpha_min, alpha_max => alpha_max, points => points,
            separation => separation, omega0 => omega0, coupling => coupling,
            epsilon_loc => epsilon_loc);
        if self.log {
            cfg.log_spacing = true;
        }
        if self.linear {
            cfg.log_spacing = false;
        }
        if let Some(init) = &self.init {
            cfg.initial = InitialState::parse(init)?;
        }
        match (self.mode, self.tau_obs) {
            (Some(ModeArg::Branch), Some(_)) => {
                return Err(Error::Config("--tau-obs only applies to --mode finite".into()));
            }
            (Some(ModeArg::Branch), None) => cfg.mode = ObservationMode::Branch,
            (Some(ModeArg::Finite), Some(tau_obs)) => cfg.mode = ObservationMode::Finite { tau_obs },
            (Some(ModeArg::Finite), None) => {
                return Err(Error::Config("--mode finite needs --tau-obs".into()));
            }
            (None, Some(tau_obs)) => cfg.mode = ObservationMode::Finite { tau_obs },
            (None, None) => {}
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Either explicit coefficients (`--a11`, `--b11`, `--f`) or a physical
/// acceleration (`--alpha`, optionally with `--f` overriding the cooperativity).
#[derive(Args)]
struct GeneratorArgs {
    #[arg(long, conflicts_with = "a11")]
    alpha: Option<f64>,
    #[arg(long)]
    a11: Option<f64>,
    #[arg(long, requires = "a11")]
    b11: Option<f64>,
    #[arg(long)]
    f: Option<f64>,
    #[command(flatten)]
    physics: PhysicsArgs,
}

impl GeneratorArgs {
    fn coefficients(&self) -> unruh_dpt::Result<DissipationCoefficients> {
        let c = match (self.a11, self.alpha) {
            (Some(a11), _) => {
                DissipationCoefficients::with_cooperativity(a11, self.b11.unwrap_or(1.0), self.f.unwrap_or(1.0))
            }
            (None, Some(alpha)) => {
                let c = DissipationCoefficients::from_params(&self.physics.params(alpha)?, RateUnits::Gamma0);
                match self.f {
                    Some(f) => c.with_f(f),
                    None => c,
                }
            }
            (None, None) => return Err(Error::Config("give either --alpha or --a11".into())),
        };
        if !(c.a11.is_finite() && c.b11.is_finite() && c.a12.is_finite() && c.b12.is_finite()) {
            return Err(Error::Config("coefficients must be finite".into()));
        }
        Ok(c)
    }

    fn liouvillian(&self) -> unruh_dpt::Result<Liouvillian> {
        Liouvillian::from_coefficients(self.coefficients()?).map_err(|e| match e {
            Error::CompletePositivity { min_eigenvalue } => Error::Config(format!(
                "coefficients do not define a completely positive generator (Kossakowski eigenvalue {min_eigenvalue:.3e})"
            )),
            other => other,
        })
    }
}

#[derive(Args)]
struct EvolveArgs {
    #[command(flatten)]
    generator: GeneratorArgs,
    #[arg(long, default_value = "singlet")]
    init: String,
    /// Final proper time (1/Γ₀)
    #[arg(long, default_value_t = 10.0)]
    tau: f64,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// RK4 step; defaults to the stability bound
    #[arg(long)]
    dt: Option<f64>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    alpha: f64,
    #[command(flatten)]
    physics: PhysicsArgs,
}

#[derive(Args)]
struct SymmetryArgs {
    #[command(flatten)]
    generator: GeneratorArgs,
    /// Conjugation parameters κ
    #[arg(long, value_delimiter = ',')]
    kappa: Option<Vec<f64>>,
    /// Threshold on the commutator norm for the `symmetric` verdict
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

fn write_output(path: Option<&Path>, body: &str) -> unruh_dpt::Result<()> {
    match path {
        Some(p) => fs::write(p, body)
            .map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", p.display()))))?,
        None => io::stdout().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn json_line(value: &serde_json::Value) -> unruh_dpt::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn sweep(args: &SweepArgs) -> unruh_dpt::Result<()> {
    let cfg = args.config()?;
    let rows = run_sweep(&cfg)?;
    let format = match args.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    match &args.out {
        Some(path) => emit(&rows, format, path)?,
        None => {
            let body = match format {
                Format::Csv => sweep_csv(&rows),
                Format::Json => sweep_json(&rows)?,
            };
            write_output(None, &body)?;
        }
    }
    if args.report {
        let alpha_c = cfg.critical_acceleration().ok();
        eprintln!("alpha_c = {}", alpha_c.map_or("none".to_string(), |a| format!("{a:.6e}")));
        if rows.len() >= 3 {
            for obs in Observable::STEADY {
                let scan = derivative_scan(&rows, obs)?;
                eprintln!(
                    "{obs:?}: peak |dO/dalpha| = {:.6e} at alpha = {:.6e}{}",
                    scan.peak_value,
                    scan.peak_alpha,
                    match alpha_c {
                        Some(a) if scan.within_one_cell(a) => " (within one cell of alpha_c)",
                        Some(_) => " (away from alpha_c)",
                        None => "",
                    }
                );
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> unruh_dpt::Result<()> {
    match cli.command {
        Command::Sweep(args) => sweep(&args),
        Command::Spectrum(args) => {
            let spec = spectrum(&args.liouvillian()?)?;
            write_output(args.physics.out.as_deref(), &spectrum_csv(&spec))
        }
        Command::Evolve(args) => {
            let l = args.generator.liouvillian()?;
            let rho0 = InitialState::parse(&args.init)?.density_matrix();
            let mut opts = EvolveOptions::new(args.tau, args.samples);
            if let Some(dt) = args.dt {
                opts = opts.with_dt(dt);
            }
            let traj = evolve_density(&l, &rho0, &opts).map_err(|e| match e {
                Error::InvalidParams(m) => Error::Config(m),
                other => other,
            })?;
            write_output(args.generator.physics.out.as_deref(), &trajectory_csv(&traj))
        }
        Command::Critical(physics) => {
            let p = physics.params(0.0)?;
            let alpha_c = critical_acceleration(&p, physics.epsilon_loc)?;
            let body = json_line(&json!({
                "alpha_c": alpha_c,
                "a_tilde_c": alpha_c / (unruh_dpt::correlations::SPEED_OF_LIGHT * physics.omega0),
                "ell": p.dimensionless().ell,
                "epsilon_loc": physics.epsilon_loc,
            }))?;
            write_output(physics.out.as_deref(), &body)
        }
        Command::Classify(args) => {
            let p = args.physics.params(args.alpha)?;
            let class = classify_phase(&p, args.physics.epsilon_loc).map_err(|e| match e {
                Error::InvalidParams(m) => Error::Config(m),
                other => other,
            })?;
            write_output(args.physics.out.as_deref(), &json_line(&serde_json::to_value(class)?)?)
        }
        Command::Symmetry(args) => {
            let l = args.generator.liouvillian()?;
            let kappas = args.kappa.clone().unwrap_or_else(|| DEFAULT_KAPPAS.to_vec());
            let r = symmetry_residual(&l, &kappas);
            let body = json_line(&json!({
                "conjugation": r.conjugation,
                "commutator": r.commutator,
                "generator_scale": r.generator_scale,
                "kappas": kappas,
                "symmetric": r.is_symmetric(args.tol),
            }))?;
            write_output(args.generator.physics.out.as_deref(), &body)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_)
        | Error::InvalidParams(_)
        | Error::InvalidState(_)
        | Error::UnphysicalState { .. }
        | Error::Domain(_)
        | Error::CompletePositivity { .. }
        | Error::NoLocalizedPhase { .. }
        | Error::Json(_) => 1,
        Error::Io(_) => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
