//! Time integration of the Lagrangian system by a Picard fixed-point
//! iteration with implicit regularized power-diffusion sub-solves.
//!
//! Each step lags `(v, Θ)`, rebuilds `J` and `ϱ` from them, then solves the
//! momentum and temperature equations implicitly (backward Euler, damped
//! Newton on the regularized flux) until the pair stops moving.

use crate::error::{Error, Result};
use crate::grid::{self, Grid};
use crate::model::{
    density_from_jacobian, power_flux, power_flux_derivative, FluidParams, InitialData, State,
};

/// Controls for the time stepper and its inner solves.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct SolverConfig {
    pub dt: f64,
    pub picard_tol: f64,
    pub picard_max: usize,
    pub newton_tol: f64,
    pub newton_max: usize,
    pub j_floor: f64,
    /// Optional ε added to ϱ₀ before the run (density-floor regularization);
    /// 0 disables it.
    pub density_floor_eps: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            dt: 1e-3,
            picard_tol: 1e-11,
            picard_max: 60,
            newton_tol: 1e-13,
            newton_max: 30,
            j_floor: 1e-6,
            density_floor_eps: 0.0,
        }
    }
}

/// Per-step solve statistics.
#[derive(Debug, Clone, serde::Serialize)]
pub struct StepReport {
    pub t: f64,
    pub picard_iters: usize,
    pub newton_iters_momentum: usize,
    pub newton_iters_temperature: usize,
    /// Ratios of successive Picard differences (< 1 on contracting steps).
    pub contraction_ratios: Vec<f64>,
    pub inf_j: f64,
    pub sup_j: f64,
    pub theta_min: f64,
}

/// Optional external sources (used by the manufactured-solution harness).
pub struct Forcing<'a> {
    /// Momentum source as a function of (y, t).
    pub momentum: &'a dyn Fn(f64, f64) -> f64,
    /// Temperature source as a function of (y, t).
    pub temperature: &'a dyn Fn(f64, f64) -> f64,
}

/// Why and when a run stopped early.
#[derive(Debug)]
pub struct Failure {
    pub t: f64,
    pub error: Error,
}

/// Snapshots plus per-step reports; `failure` is set when the run aborted
/// early and the trajectory is partial.
#[derive(Debug)]
pub struct Trajectory {
    pub states: Vec<State>,
    pub reports: Vec<StepReport>,
    pub failure: Option<Failure>,
}

/// Advances the Jacobian: `J_new = J_prev + dt·(v_mid)_y`.
pub fn update_jacobian(
    j_prev: &[f64],
    v_mid: &[f64],
    dt: f64,
    grid: &Grid,
    j_floor: f64,
) -> Result<Vec<f64>> {
    let dv = grid::ddy(v_mid, grid)?;
    let j_new: Vec<f64> = j_prev
        .iter()
        .zip(&dv)
        .map(|(j, d)| j + dt * d)
        .collect();
    let inf = j_new.iter().cloned().fold(f64::INFINITY, f64::min);
    if inf <= j_floor {
        return Err(Error::JacobianDegenerate {
            t: f64::NAN,
            inf_j: inf,
            floor: j_floor,
        });
    }
    Ok(j_new)
}

/// Fluxes `Φ_ε((w_{i+1}-w_i)/(h·J_{i+1/2}))` at the N-1 interior faces.
/// Ghost faces beyond the boundary carry zero flux (the Neumann condition).
fn face_fluxes(w: &[f64], j: &[f64], r: f64, eps: f64, h: f64) -> Result<Vec<f64>> {
    let n = w.len();
    let mut fx = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let jf = 0.5 * (j[i] + j[i + 1]);
        let s = (w[i + 1] - w[i]) / (h * jf);
        fx.push(power_flux(s, r, eps)?);
    }
    Ok(fx)
}

/// Flux divergence against the trapezoid weights: interior nodes get
/// `(F_{i+1/2}-F_{i-1/2})/h`, boundary nodes `±F/(h/2)`, which makes the
/// discrete operator exactly summation-by-parts (stress work telescopes to
/// the zero-flux boundary).
fn flux_divergence(fx: &[f64], grid: &Grid) -> Vec<f64> {
    let n = grid.n;
    let mut div = vec![0.0; n];
    for i in 0..n {
        let right = if i < n - 1 { fx[i] } else { 0.0 };
        let left = if i > 0 { fx[i - 1] } else { 0.0 };
        div[i] = (right - left) / grid.weight(i);
    }
    div
}

/// Implicit (backward-Euler) solve of the shared power-diffusion kernel
///
/// `a·(w_new - w_old)/dt = (1/J₀)·div Φ_ε(∂_y w_new / J) + source`
///
/// with zero-flux boundaries, by damped Newton with a tridiagonal Jacobian.
/// Returns the solution and the number of Newton iterations spent.
pub fn implicit_power_diffusion_step(
    a: &[f64],
    w_old: &[f64],
    r: f64,
    j: &[f64],
    j0: &[f64],
    source: &[f64],
    dt: f64,
    cfg: &SolverConfig,
    params: &FluidParams,
    grid: &Grid,
) -> Result<(Vec<f64>, usize)> {
    let n = grid.n;
    let h = grid.h;
    let eps = params.eps_reg;
    let min_a = a.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(min_a > 0.0) {
        return Err(Error::NonPositiveDensity { min: min_a });
    }

    // Returns the residual together with the largest term magnitude, which
    // sets the round-off floor of the evaluation.
    let residual = |w: &[f64]| -> Result<(Vec<f64>, f64)> {
        let fx = face_fluxes(w, j, r, eps, h)?;
        let div = flux_divergence(&fx, grid);
        let mut mag = 0.0_f64;
        let res = (0..n)
            .map(|i| {
                let terms = [
                    a[i] * (w[i] - w_old[i]) / dt,
                    div[i] / j0[i],
                    source[i],
                ];
                for t in terms {
                    mag = mag.max(t.abs());
                }
                terms[0] - terms[1] - terms[2]
            })
            .collect();
        Ok((res, mag))
    };
    let max_abs = |v: &[f64]| v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));

    // The residual carries units of a·w/dt, so its round-off floor scales
    // with a/dt; tolerance must follow the same scale or Newton stagnates
    // at machine precision without "converging".
    let max_a = a.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let scale = (max_a / dt * (1.0 + max_abs(w_old)) + max_abs(source)).max(1.0);
    let mut w = w_old.to_vec();
    let (mut res, mut res_mag) = residual(&w)?;
    let mut res_norm = max_abs(&res);
    let mut iters = 0usize;
    // Converged when below tolerance or at the round-off floor of the
    // residual evaluation itself (no finite-precision iterate can do better).
    let tol_for = |mag: f64| (cfg.newton_tol * scale).max(64.0 * f64::EPSILON * mag);
    while res_norm > tol_for(res_mag) {
        if iters >= cfg.newton_max {
            return Err(Error::NewtonDiverged {
                iters,
                residual: res_norm,
            });
        }
        // Tridiagonal Newton matrix.
        let mut lower = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n];
        let mut dphi = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            let jf = 0.5 * (j[i] + j[i + 1]);
            let s = (w[i + 1] - w[i]) / (h * jf);
            dphi.push(power_flux_derivative(s, r, eps)? / (h * jf));
        }
        for i in 0..n {
            let wi = grid.weight(i);
            diag[i] = a[i] / dt;
            if i < n - 1 {
                diag[i] += dphi[i] / (j0[i] * wi);
                upper[i] = -dphi[i] / (j0[i] * wi);
            }
            if i > 0 {
                diag[i] += dphi[i - 1] / (j0[i] * wi);
                lower[i] = -dphi[i - 1] / (j0[i] * wi);
            }
        }
        let delta = solve_tridiagonal(&lower, &diag, &upper, &res)?;
        // Backtracking line search on the residual norm.
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..12 {
            let trial: Vec<f64> = w
                .iter()
                .zip(&delta)
                .map(|(wi, di)| wi - lambda * di)
                .collect();
            let (trial_res, trial_mag) = residual(&trial)?;
            let trial_norm = max_abs(&trial_res);
            if trial_norm < res_norm || trial_norm <= tol_for(trial_mag) {
                w = trial;
                res = trial_res;
                res_norm = trial_norm;
                res_mag = trial_mag;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        iters += 1;
        if !accepted {
            // Line-search stagnation within sight of the tolerance is the
            // finite-precision floor of this residual, not divergence.
            if res_norm <= 1e3 * tol_for(res_mag) {
                break;
            }
            return Err(Error::NewtonDiverged {
                iters,
                residual: res_norm,
            });
        }
    }
    Ok((w, iters))
}

/// Thomas algorithm for a tridiagonal system.
fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut den = diag[0];
    if den == 0.0 {
        return Err(Error::NonFinite {
            context: "tridiagonal pivot",
        });
    }
    c[0] = upper[0] / den;
    d[0] = rhs[0] / den;
    for i in 1..n {
        den = diag[i] - lower[i] * c[i - 1];
        if den == 0.0 {
            return Err(Error::NonFinite {
                context: "tridiagonal pivot",
            });
        }
        c[i] = if i < n - 1 { upper[i] / den } else { 0.0 };
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / den;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    Ok(x)
}

fn rel_change(new: &[f64], old: &[f64]) -> f64 {
    let scale = 1.0 + old.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    new.iter()
        .zip(old)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0_f64, f64::max)
        / scale
}

/// One time step of the fixed-point map: lag `(v, Θ)`, rebuild `J` and `ϱ`,
/// solve momentum then temperature implicitly, repeat until the pair stops
/// changing.
///
/// The viscous heating fed to the temperature equation is assembled from the
/// very face fluxes of the momentum solve, so stress work and heating cancel
/// exactly in the discrete total-energy budget; the kinetic energy destroyed
/// by the backward-Euler step (`ϱ₀|Δv|²/(2dt)`) is likewise returned as heat.
pub fn picard_step(
    state: &State,
    initial: &InitialData,
    cfg: &SolverConfig,
    params: &FluidParams,
    forcing: Option<&Forcing>,
) -> Result<(State, StepReport)> {
    let grid = &initial.grid;
    let n = grid.n;
    let h = grid.h;
    let dt = cfg.dt;
    let t_new = state.t + dt;
    let rho0 = &initial.rho0;
    let j0 = &initial.j0;

    let f_v: Vec<f64> = match forcing {
        Some(f) => grid.nodes.iter().map(|&y| (f.momentum)(y, t_new)).collect(),
        None => vec![0.0; n],
    };
    let f_th: Vec<f64> = match forcing {
        Some(f) => grid.nodes.iter().map(|&y| (f.temperature)(y, t_new)).collect(),
        None => vec![0.0; n],
    };

    let mut vk = state.v.clone();
    let mut thk = state.theta.clone();
    let mut ratios = Vec::new();
    let mut prev_change = f64::NAN;
    let mut newton_v = 0usize;
    let mut newton_th = 0usize;
    let mut converged = false;
    let mut last_change = f64::INFINITY;
    let mut picard_iters = 0usize;
    let mut j_new = state.j.clone();

    for k in 0..cfg.picard_max {
        picard_iters = k + 1;
        let v_mid: Vec<f64> = state.v.iter().zip(&vk).map(|(a, b)| 0.5 * (a + b)).collect();
        j_new = update_jacobian(&state.j, &v_mid, dt, grid, cfg.j_floor).map_err(|e| match e {
            Error::JacobianDegenerate { inf_j, floor, .. } => {
                Error::JacobianDegenerate { t: t_new, inf_j, floor }
            }
            other => other,
        })?;
        let rho_new = density_from_jacobian(&j_new, j0, rho0)?;

        // Momentum: source is the pressure gradient (lagged Θ) plus forcing.
        let p_field: Vec<f64> = rho_new
            .iter()
            .zip(&thk)
            .map(|(r, th)| params.r_gas * r * th)
            .collect();
        let dp = grid::ddy(&p_field, grid)?;
        let src_v: Vec<f64> = (0..n).map(|i| -dp[i] / j0[i] + f_v[i]).collect();
        let (v_new, it_v) = implicit_power_diffusion_step(
            rho0, &state.v, params.q, &j_new, j0, &src_v, dt, cfg, params, grid,
        )?;
        newton_v += it_v;

        // Temperature: compression work (lagged Θ), viscous heating taken
        // from the momentum fluxes just solved, backward-Euler kinetic
        // defect, plus forcing.
        let fx_v = face_fluxes(&v_new, &j_new, params.q, params.eps_reg, h)?;
        let dv_new = grid::ddy(&v_new, grid)?;
        let mut src_th = vec![0.0; n];
        for i in 0..n {
            let mut heat = 0.0;
            if i < n - 1 {
                heat += 0.5 * fx_v[i] * (v_new[i + 1] - v_new[i]);
            }
            if i > 0 {
                heat += 0.5 * fx_v[i - 1] * (v_new[i] - v_new[i - 1]);
            }
            heat /= j0[i] * grid.weight(i);
            let dv_t = v_new[i] - state.v[i];
            let be_defect = rho0[i] * dv_t * dv_t / (2.0 * dt);
            src_th[i] = -params.r_gas * rho_new[i] * thk[i] * dv_new[i] / j0[i]
                + heat
                + be_defect
                + f_th[i];
        }
        let (th_new, it_th) = implicit_power_diffusion_step(
            rho0, &state.theta, params.p, &j_new, j0, &src_th, dt, cfg, params, grid,
        )?;
        newton_th += it_th;

        let change = rel_change(&v_new, &vk).max(rel_change(&th_new, &thk));
        if prev_change.is_finite() && prev_change > 0.0 {
            ratios.push(change / prev_change);
        }
        prev_change = change;
        last_change = change;
        vk = v_new;
        thk = th_new;
        if change < cfg.picard_tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::PicardNonContraction {
            t: t_new,
            iters: picard_iters,
            last_change,
        });
    }
    let rho_final = density_from_jacobian(&j_new, j0, rho0)?;
    let new_state = State {
        t: t_new,
        j: j_new,
        rho: rho_final,
        v: vk,
        theta: thk,
    };
    let report = StepReport {
        t: t_new,
        picard_iters,
        newton_iters_momentum: newton_v,
        newton_iters_temperature: newton_th,
        contraction_ratios: ratios,
        inf_j: new_state.inf_j(),
        sup_j: new_state.sup_j(),
        theta_min: new_state.theta_min(),
    };
    Ok((new_state, report))
}

/// Marches from the initial data to `t_end`, storing every snapshot.
/// On degeneracy or non-contraction the partial trajectory is returned with
/// the failure attached.
pub fn run(
    initial: &InitialData,
    cfg: &SolverConfig,
    params: &FluidParams,
    t_end: f64,
) -> Trajectory {
    run_with_forcing(initial, cfg, params, t_end, None)
}

/// `run` with optional external sources (manufactured-solution studies).
pub fn run_with_forcing(
    initial: &InitialData,
    cfg: &SolverConfig,
    params: &FluidParams,
    t_end: f64,
    forcing: Option<&Forcing>,
) -> Trajectory {
    // Density-floor regularization: shift ϱ₀ once, up front, so the mass
    // identity and all diagnostics see the same effective data.
    let effective;
    let initial = if cfg.density_floor_eps > 0.0 {
        let mut shifted = initial.clone();
        for r in &mut shifted.rho0 {
            *r += cfg.density_floor_eps;
        }
        shifted.rho_bar = (shifted.rho_bar + cfg.density_floor_eps).max(1.0);
        effective = shifted;
        &effective
    } else {
        initial
    };

    let rho = initial.rho0.clone();
    let mut states = vec![State {
        t: 0.0,
        j: initial.j0.clone(),
        rho,
        v: initial.v0.clone(),
        theta: initial.theta0.clone(),
    }];
    let mut reports = Vec::new();
    let n_steps = (t_end / cfg.dt).round() as usize;
    let mut failure = None;
    for step in 0..n_steps {
        let current = states.last().unwrap();
        match picard_step(current, initial, cfg, params, forcing) {
            Ok((mut next, report)) => {
                // Keep timestamps exact multiples of dt.
                next.t = (step + 1) as f64 * cfg.dt;
                states.push(next);
                reports.push(report);
            }
            Err(error) => {
                failure = Some(Failure {
                    t: current.t,
                    error,
                });
                break;
            }
        }
    }
    Trajectory {
        states,
        reports,
        failure,
    }
}
