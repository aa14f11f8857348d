//! Command-line front end: scenario configuration, runs, oracle suites,
//! audits, extension schedules, parameter sweeps, and report summaries.
//!
//! Exit codes: 0 success, 1 assertion failure, 2 configuration schema error,
//! 3 physics-constraint violation, 4 solver failure.

use clap::{Args, Parser, Subcommand};
use nnfluid::energetics::{self, BoundEnvelope};
use nnfluid::error::Error;
use nnfluid::extension::{self, ScheduleOptions};
use nnfluid::grid::build_grid;
use nnfluid::model::{
    decay_report, gaussian_field, validate_params, DensityProfile, FluidParams, InitialData,
    ProfileKind, State,
};
use nnfluid::report::{self, config_hash};
use nnfluid::solver::{self, SolverConfig, Trajectory};
use nnfluid::verify;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_ASSERTION: u8 = 1;
const EXIT_SCHEMA: u8 = 2;
const EXIT_PHYSICS: u8 = 3;
const EXIT_SOLVER: u8 = 4;

// ---------------------------------------------------------------------------
// Scenario configuration
// ---------------------------------------------------------------------------

fn default_r_gas() -> f64 {
    1.0
}
fn default_eps_reg() -> f64 {
    1e-6
}
fn default_a0() -> f64 {
    1.0
}
fn default_r_trunc() -> f64 {
    20.0
}
fn default_n() -> usize {
    801
}
fn default_dt() -> f64 {
    1e-3
}
fn default_t_end() -> f64 {
    0.1
}
fn default_amplitude() -> f64 {
    0.1
}
fn default_width() -> f64 {
    1.0
}
fn default_snapshot_every() -> usize {
    20
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileSpec {
    #[serde(rename = "K")]
    k: f64,
    l: f64,
    #[serde(rename = "A0", default = "default_a0")]
    a0: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSpec {
    #[serde(default = "default_r_trunc")]
    r_trunc: f64,
    #[serde(default = "default_n")]
    n: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            r_trunc: default_r_trunc(),
            n: default_n(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolverSpec {
    #[serde(default = "default_dt")]
    dt: f64,
    #[serde(default)]
    density_floor_eps: f64,
}

impl Default for SolverSpec {
    fn default() -> Self {
        SolverSpec {
            dt: default_dt(),
            density_floor_eps: 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InitialSpec {
    #[serde(default = "default_amplitude")]
    v_amplitude: f64,
    #[serde(default = "default_width")]
    v_width: f64,
    #[serde(default = "default_amplitude")]
    theta_amplitude: f64,
    #[serde(default = "default_width")]
    theta_width: f64,
}

impl Default for InitialSpec {
    fn default() -> Self {
        InitialSpec {
            v_amplitude: default_amplitude(),
            v_width: default_width(),
            theta_amplitude: default_amplitude(),
            theta_width: default_width(),
        }
    }
}

/// The whole run configuration; exponents live flat at the top level.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Scenario {
    p: f64,
    q: f64,
    alpha: f64,
    #[serde(rename = "R", default = "default_r_gas")]
    r_gas: f64,
    #[serde(default = "default_eps_reg")]
    eps_reg: f64,
    #[serde(default)]
    non_strict: bool,
    profile: ProfileSpec,
    #[serde(default)]
    grid: GridSpec,
    #[serde(default)]
    solver: SolverSpec,
    #[serde(default)]
    initial: InitialSpec,
    #[serde(default = "default_t_end")]
    t_end: f64,
    #[serde(default = "default_snapshot_every")]
    snapshot_every: usize,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    sweep: Option<SweepSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSpec {
    /// One of: p, q, alpha, l, dt.
    parameter: String,
    values: Vec<f64>,
}

impl Scenario {
    fn params(&self) -> FluidParams {
        FluidParams {
            p: self.p,
            q: self.q,
            alpha: self.alpha,
            r_gas: self.r_gas,
            eps_reg: self.eps_reg,
            strict_mode: !self.non_strict,
        }
    }

    fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            dt: self.solver.dt,
            density_floor_eps: self.solver.density_floor_eps,
            ..SolverConfig::default()
        }
    }

    /// Canonical serialized form: the effective configuration after
    /// defaulting, which is what gets hashed into every output file.
    fn canonical(&self) -> String {
        serde_json::to_string(self).expect("scenario serializes")
    }
}

struct CmdError {
    code: u8,
    message: String,
}

impl CmdError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        CmdError {
            code,
            message: message.into(),
        }
    }
}

fn classify(e: &Error) -> u8 {
    match e {
        Error::NewtonDiverged { .. }
        | Error::PicardNonContraction { .. }
        | Error::JacobianDegenerate { .. }
        | Error::HorizonExceeded { .. }
        | Error::NonPositiveDensity { .. } => EXIT_SOLVER,
        Error::Io(_) => EXIT_SCHEMA,
        _ => EXIT_PHYSICS,
    }
}

fn lib_err(e: Error) -> CmdError {
    CmdError::new(classify(&e), e.to_string())
}

fn load_scenario(path: &Path, overrides: &CommonArgs) -> Result<Scenario, CmdError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CmdError::new(EXIT_SCHEMA, format!("cannot read {}: {e}", path.display())))?;
    let mut scenario: Scenario = serde_json::from_str(&text)
        .map_err(|e| CmdError::new(EXIT_SCHEMA, format!("config schema error: {e}")))?;
    if let Some(t) = overrides.t_end {
        scenario.t_end = t;
    }
    if let Some(s) = overrides.seed {
        scenario.seed = s;
    }
    if overrides.non_strict {
        scenario.non_strict = true;
    }
    validate_scenario(&scenario)?;
    Ok(scenario)
}

fn validate_scenario(s: &Scenario) -> Result<(), CmdError> {
    if !(s.t_end >= 0.0) || !(s.solver.dt > 0.0) {
        return Err(CmdError::new(
            EXIT_SCHEMA,
            format!("t_end must be >= 0 and solver.dt > 0, got {} / {}", s.t_end, s.solver.dt),
        ));
    }
    if s.snapshot_every == 0 {
        return Err(CmdError::new(EXIT_SCHEMA, "snapshot_every must be >= 1"));
    }
    let params = s.params();
    let report = validate_params(&params);
    if !report.all_pass() {
        let details: Vec<String> = report
            .failures()
            .iter()
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect();
        return Err(CmdError::new(
            EXIT_PHYSICS,
            format!(
                "parameter constraints violated (alpha threshold {}): {}",
                report.alpha_threshold,
                details.join("; ")
            ),
        ));
    }
    let decay = decay_report(s.profile.l, &params);
    if !decay.admissible {
        return Err(CmdError::new(
            EXIT_PHYSICS,
            format!(
                "density decay exponent l = {} outside (0, {})",
                decay.l, decay.l_max
            ),
        ));
    }
    Ok(())
}

fn build_initial(s: &Scenario) -> Result<InitialData, CmdError> {
    let grid = build_grid(s.grid.r_trunc, s.grid.n).map_err(lib_err)?;
    let params = s.params();
    let (rho0, _decay) = nnfluid::model::build_power_law_profile(
        s.profile.k,
        s.profile.l,
        s.profile.a0,
        &params,
        &grid,
    )
    .map_err(lib_err)?;
    let v0 = gaussian_field(s.initial.v_amplitude, s.initial.v_width, &grid);
    let theta0 = gaussian_field(s.initial.theta_amplitude, s.initial.theta_width, &grid);
    let profile = DensityProfile {
        kind: ProfileKind::PowerLaw,
        k_amp: s.profile.k,
        l_decay: s.profile.l,
        a0: s.profile.a0,
    };
    InitialData::new(grid.clone(), rho0, vec![1.0; grid.n], v0, theta0, profile).map_err(lib_err)
}

fn envelope_for(
    initial: &InitialData,
    params: &FluidParams,
    t_end: f64,
    dt: f64,
) -> Result<BoundEnvelope, CmdError> {
    let steps = ((t_end / dt).ceil() as usize).max(1);
    let t_grid: Vec<f64> = (0..=steps).map(|i| i as f64 * dt).collect();
    energetics::bound_envelope(initial, params, &t_grid).map_err(lib_err)
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(name = "nnfluid", about = "1-D compressible power-law fluid simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Scenario configuration file (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Override the configured end time.
    #[arg(long)]
    t_end: Option<f64>,
    /// Override the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Relax the strict exponent/weight constraints.
    #[arg(long)]
    non_strict: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the scenario and write snapshots + diagnostics.
    Run(CommonArgs),
    /// Execute the oracle suites; exits 0 iff every suite passes.
    Verify(CommonArgs),
    /// Audit stored snapshots against the a-priori bound envelopes.
    Audit(CommonArgs),
    /// Build a multi-segment continuation schedule.
    Extend {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of segments to schedule.
        #[arg(long, default_value_t = 3)]
        segments: usize,
        /// Margin target for each segment's admissible time.
        #[arg(long, default_value_t = 0.5)]
        margin: f64,
    },
    /// Run the configured parameter sweep.
    Sweep(CommonArgs),
    /// Summarize stored outputs in human-readable form.
    Report(CommonArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Audit(a) => cmd_audit(a),
        Command::Extend {
            common,
            segments,
            margin,
        } => cmd_extend(common, *segments, *margin),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Report(a) => cmd_report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run_trajectory(s: &Scenario) -> Result<(InitialData, Trajectory), CmdError> {
    let initial = build_initial(s)?;
    let params = s.params();
    let cfg = s.solver_config();
    let traj = solver::run(&initial, &cfg, &params, s.t_end);
    if let Some(f) = &traj.failure {
        return Err(CmdError::new(
            EXIT_SOLVER,
            format!("solver failed at t = {}: {}", f.t, f.error),
        ));
    }
    Ok((initial, traj))
}

fn write_outputs(
    s: &Scenario,
    initial: &InitialData,
    traj: &Trajectory,
    out: &Path,
) -> Result<(), CmdError> {
    std::fs::create_dir_all(out)
        .map_err(|e| CmdError::new(EXIT_SCHEMA, format!("cannot create {}: {e}", out.display())))?;
    let hash = config_hash(&s.canonical());
    let params = s.params();
    let last = traj.states.len() - 1;
    for (i, state) in traj.states.iter().enumerate() {
        if i % s.snapshot_every == 0 || i == last {
            let path = out.join(report::snapshot_name(state.t));
            report::write_snapshot(&path, state, initial, &hash).map_err(lib_err)?;
        }
    }
    let env = envelope_for(initial, &params, s.t_end.max(s.solver.dt), s.solver.dt)?;
    let (rows, _audit) =
        report::diagnostics_rows(traj, initial, &params, &env).map_err(lib_err)?;
    report::write_diagnostics(&out.join("diagnostics.csv"), &rows, &hash).map_err(lib_err)?;
    Ok(())
}

fn cmd_run(args: &CommonArgs) -> Result<(), CmdError> {
    let s = load_scenario(&args.config, args)?;
    println!("effective configuration: {}", s.canonical());
    let (initial, traj) = run_trajectory(&s)?;
    write_outputs(&s, &initial, &traj, &args.out)?;
    let end = traj.states.last().unwrap();
    println!(
        "run complete: t = {:.6}, {} snapshots, inf J = {:.3e}, mass residual = {:.3e}",
        end.t,
        traj.states.len(),
        end.inf_j(),
        end.mass_residual(&initial)
    );
    Ok(())
}

fn cmd_verify(args: &CommonArgs) -> Result<(), CmdError> {
    let s = load_scenario(&args.config, args)?;
    let mut all_pass = true;
    let mut check = |name: &str, pass: bool, detail: String| {
        println!("{}: {name} — {detail}", if pass { "PASS" } else { "FAIL" });
        all_pass &= pass;
    };

    // Gronwall bound vs the exact Riccati family.
    let mut worst = 0.0_f64;
    for i in 0..100 {
        let c0 = 0.5 + (i % 10) as f64 * 0.3;
        let sigma = 0.5 + (i / 10) as f64 * 0.15;
        let t = 0.3 / (sigma * c0) * ((i % 7) as f64 + 1.0) / 8.0;
        let exact = (1.0 - sigma * c0 * t).powf(-1.0 / sigma);
        let got = extension::local_gronwall_bound(1.0, &|_| 0.0, c0, sigma, 0.0, t)
            .map_err(lib_err)?;
        worst = worst.max((got - exact).abs() / exact);
    }
    check("gronwall_oracle", worst <= 1e-10, format!("max rel err {worst:.3e}"));

    // Extension functions.
    let mut ext_ok = true;
    for k in 2..=10 {
        let h1 = extension::h_of_k_eta(k as f64, 1.0, s.q).map_err(lib_err)?;
        ext_ok &= (h1 - 1.0).abs() < 1e-12;
    }
    for q in [1.2, 1.5, 1.8] {
        let mut prev = 0.0;
        for i in 1..=200 {
            let k = 1.0 + (1e4_f64 - 1.0) * i as f64 / 200.0;
            let g = extension::g_of_k(k, q).map_err(lib_err)?;
            ext_ok &= g > prev;
            prev = g;
        }
    }
    check("extension_functions", ext_ok, "h(k,1)=1, g strictly increasing".to_string());

    // Inequality oracles.
    let oracle = verify::inequality_oracles(s.seed, 100_000, &[1.1, 1.5, 1.9]).map_err(lib_err)?;
    let mono_ok = oracle.per_exponent.iter().all(|(_, v, _, sc)| *v == 0 && *sc <= 1e-10);
    let interp_ok = oracle.interpolation.iter().all(|(_, _, _, d)| *d < 0.02);
    check(
        "inequality_oracles",
        mono_ok && interp_ok,
        format!("{} exponents, {} interpolation pairs", oracle.per_exponent.len(), oracle.interpolation.len()),
    );

    // Quick manufactured-solution sanity at the configured exponents.
    let params = s.params();
    let fam = verify::trig_family(&params, 0.05, 0.05, 1.0, 5.0);
    let table = verify::mms_spatial_convergence(&fam, &params, &[51, 101], 2e-4, 0.02)
        .map_err(lib_err)?;
    let order = table.orders.first().copied().unwrap_or(0.0);
    check("mms_spatial", order >= 0.9, format!("observed order {order:.2}"));

    // Conservation on a short default-style run.
    let (initial, traj) = run_trajectory(&Scenario {
        t_end: 0.02,
        ..s.clone()
    })?;
    let audit = verify::conservation_audit(&traj, &initial).map_err(lib_err)?;
    check(
        "conservation",
        audit.mass_residual_max <= 1e-12 && audit.energy_drift_rate <= 1e-6,
        format!(
            "mass {:.3e}, energy drift {:.3e}/unit time",
            audit.mass_residual_max, audit.energy_drift_rate
        ),
    );

    if all_pass {
        Ok(())
    } else {
        Err(CmdError::new(EXIT_ASSERTION, "one or more oracle suites failed"))
    }
}

fn read_snapshot(path: &Path, initial: &InitialData, t: f64) -> Result<State, CmdError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CmdError::new(EXIT_SCHEMA, format!("cannot read {}: {e}", path.display())))?;
    let mut j = Vec::new();
    let mut rho = Vec::new();
    let mut v = Vec::new();
    let mut theta = Vec::new();
    for line in text.lines().skip(2) {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 5 {
            return Err(CmdError::new(
                EXIT_SCHEMA,
                format!("malformed snapshot row in {}", path.display()),
            ));
        }
        let parse = |s: &str| -> Result<f64, CmdError> {
            s.parse()
                .map_err(|_| CmdError::new(EXIT_SCHEMA, format!("bad float {s} in {}", path.display())))
        };
        j.push(parse(cols[1])?);
        rho.push(parse(cols[2])?);
        v.push(parse(cols[3])?);
        theta.push(parse(cols[4])?);
    }
    if j.len() != initial.grid.n {
        return Err(CmdError::new(
            EXIT_SCHEMA,
            format!(
                "snapshot {} has {} rows, grid has {}",
                path.display(),
                j.len(),
                initial.grid.n
            ),
        ));
    }
    Ok(State { t, j, rho, v, theta })
}

fn cmd_audit(args: &CommonArgs) -> Result<(), CmdError> {
    let s = load_scenario(&args.config, args)?;
    let initial = build_initial(&s)?;
    let params = s.params();
    let mut snaps: Vec<(f64, PathBuf)> = Vec::new();
    let dir = std::fs::read_dir(&args.out).map_err(|e| {
        CmdError::new(EXIT_SCHEMA, format!("cannot read {}: {e}", args.out.display()))
    })?;
    for entry in dir {
        let entry = entry.map_err(|e| CmdError::new(EXIT_SCHEMA, e.to_string()))?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if let Some(tstr) = name.strip_prefix("snap_").and_then(|r| r.strip_suffix(".csv")) {
            if let Ok(t) = tstr.parse::<f64>() {
                snaps.push((t, entry.path()));
            }
        }
    }
    if snaps.is_empty() {
        return Err(CmdError::new(
            EXIT_SCHEMA,
            format!("no snapshot files in {}", args.out.display()),
        ));
    }
    snaps.sort_by(|a, b| a.0.total_cmp(&b.0));
    let states: Vec<State> = snaps
        .iter()
        .map(|(t, p)| read_snapshot(p, &initial, *t))
        .collect::<Result<_, _>>()?;
    let t_max = states.last().unwrap().t.max(s.solver.dt);
    let env = envelope_for(&initial, &params, t_max, s.solver.dt)?;
    let audit = energetics::check_bounds(&states, &env, &initial, &params).map_err(lib_err)?;
    for e in &audit.entries {
        println!(
            "t = {:.6}: margin {:.3}, inf J {:.3e}, ratios (E {:.3}, supJ {:.3}, infJ {:.3}) — {}",
            e.t,
            e.margin,
            e.inf_j,
            e.ratio_e,
            e.ratio_sup_j,
            e.ratio_inf_j,
            if e.pass { "ok" } else { "VIOLATION" }
        );
    }
    if audit.pass {
        println!("audit passed: {} snapshots within calibrated envelopes", audit.entries.len());
        Ok(())
    } else {
        let failing: Vec<String> = audit
            .entries
            .iter()
            .filter(|e| !e.pass)
            .map(|e| format!("{:.6}", e.t))
            .collect();
        Err(CmdError::new(
            EXIT_ASSERTION,
            format!("bound violation at t = {}", failing.join(", ")),
        ))
    }
}

fn cmd_extend(args: &CommonArgs, segments: usize, margin: f64) -> Result<(), CmdError> {
    let s = load_scenario(&args.config, args)?;
    let initial = build_initial(&s)?;
    let params = s.params();
    let cfg = s.solver_config();
    let opts = ScheduleOptions {
        margin_target: margin,
        segment_cap: Some(s.t_end),
    };
    let run_fn = |init: &InitialData, c: &SolverConfig, p: &FluidParams, t: f64| {
        solver::run(init, c, p, t)
    };
    let schedule =
        extension::schedule_extension(run_fn, &initial, &params, &cfg, segments, &opts)
            .map_err(lib_err)?;
    std::fs::create_dir_all(&args.out).map_err(|e| {
        CmdError::new(EXIT_SCHEMA, format!("cannot create {}: {e}", args.out.display()))
    })?;
    let hash = config_hash(&s.canonical());
    report::write_schedule(&args.out.join("schedule.json"), &schedule, &hash).map_err(lib_err)?;
    println!(
        "schedule: {} segments, cumulative time {:.6}",
        schedule.segments.len(),
        schedule.cumulative_time
    );
    if let Some(diag) = &schedule.failure_diagnosis {
        return Err(CmdError::new(EXIT_SOLVER, diag.clone()));
    }
    Ok(())
}

fn cmd_sweep(args: &CommonArgs) -> Result<(), CmdError> {
    let s = load_scenario(&args.config, args)?;
    let spec = s.sweep.clone().ok_or_else(|| {
        CmdError::new(EXIT_SCHEMA, "sweep requires a 'sweep' object in the configuration")
    })?;
    for &value in &spec.values {
        let mut variant = s.clone();
        match spec.parameter.as_str() {
            "p" => variant.p = value,
            "q" => variant.q = value,
            "alpha" => variant.alpha = value,
            "l" => variant.profile.l = value,
            "dt" => variant.solver.dt = value,
            other => {
                return Err(CmdError::new(
                    EXIT_SCHEMA,
                    format!("unknown sweep parameter '{other}' (p, q, alpha, l, dt)"),
                ))
            }
        }
        validate_scenario(&variant)?;
        let sub = args.out.join(format!("sweep_{}_{value}", spec.parameter));
        let (initial, traj) = run_trajectory(&variant)?;
        write_outputs(&variant, &initial, &traj, &sub)?;
        println!("sweep {} = {value}: done ({} snapshots)", spec.parameter, traj.states.len());
    }
    Ok(())
}

fn cmd_report(args: &CommonArgs) -> Result<(), CmdError> {
    let path = args.out.join("diagnostics.csv");
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CmdError::new(EXIT_SCHEMA, format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    println!("{header}");
    let mut rows = 0usize;
    let mut last: Vec<f64> = Vec::new();
    let mut worst_drift = 0.0_f64;
    let mut min_inf_j = f64::INFINITY;
    for line in lines.skip(1) {
        let cols: Vec<f64> = line.split(',').filter_map(|c| c.parse().ok()).collect();
        if cols.len() < 20 {
            continue;
        }
        worst_drift = worst_drift.max(cols[15]);
        min_inf_j = min_inf_j.min(cols[11]);
        last = cols;
        rows += 1;
    }
    if rows == 0 {
        return Err(CmdError::new(EXIT_SCHEMA, "diagnostics.csv contains no data rows"));
    }
    println!("snapshots: {rows}");
    println!("final time: {:.6}", last[0]);
    println!("final energy functional: {:.6e}", last[1]);
    println!("worst energy drift per unit time: {:.3e}", worst_drift);
    println!("minimum inf J: {:.6e}", min_inf_j);
    println!("final mass residual: {:.3e}", last[14]);
    println!("final margin: {:.3}", last[16]);
    let schedule_path = args.out.join("schedule.json");
    if schedule_path.exists() {
        let sched = std::fs::read_to_string(&schedule_path)
            .map_err(|e| CmdError::new(EXIT_SCHEMA, e.to_string()))?;
        let value: serde_json::Value = serde_json::from_str(&sched)
            .map_err(|e| CmdError::new(EXIT_SCHEMA, format!("bad schedule.json: {e}")))?;
        if let Some(segs) = value.get("segments").and_then(|s| s.as_array()) {
            println!(
                "schedule: {} segments, cumulative time {}",
                segs.len(),
                value.get("cumulative_time").unwrap_or(&serde_json::Value::Null)
            );
        }
    }
    Ok(())
}
