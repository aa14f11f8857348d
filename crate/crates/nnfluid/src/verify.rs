//! Independent correctness oracles: manufactured solutions, conservation
//! audits, inequality property checks, and the linear (r = 2) reduction.
//!
//! Nothing here reuses the solver's Newton path: references are assembled
//! separately and solved by plain dense elimination.

use crate::error::{Error, Result};
use crate::grid::{self, build_grid, Grid};
use crate::model::{
    power_flux, power_flux_derivative, DensityProfile, FluidParams, InitialData, ProfileKind,
    State,
};
use crate::solver::{self, Forcing, SolverConfig, Trajectory};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

// ---------------------------------------------------------------------------
// Manufactured solutions
// ---------------------------------------------------------------------------

/// A closed-form (J, v, Θ) family with hand-derived sources. All closures
/// take (y, t).
pub struct MmsFamily {
    pub r_trunc: f64,
    pub j: Box<dyn Fn(f64, f64) -> f64 + Sync>,
    pub j_t: Box<dyn Fn(f64, f64) -> f64 + Sync>,
    pub v: Box<dyn Fn(f64, f64) -> f64 + Sync>,
    pub v_y: Box<dyn Fn(f64, f64) -> f64 + Sync>,
    pub theta: Box<dyn Fn(f64, f64) -> f64 + Sync>,
    pub source_v: Box<dyn Fn(f64, f64) -> f64 + Sync>,
    pub source_theta: Box<dyn Fn(f64, f64) -> f64 + Sync>,
}

/// Trigonometric family on uniform unit density:
///
/// `v = a_v·cos(ky)·e^{-t}`, `Θ = θ̄ + a_θ·cos(ky)·e^{-t}`,
/// `J = 1 - a_v·k·sin(ky)·(1-e^{-t})` with `k = π/r`, so that `J_t = v_y`
/// identically and both gradients vanish at the truncation boundary.
///
/// The sources are the residuals of the Lagrangian momentum/temperature
/// equations on these fields, written out by hand (chain rule on the
/// regularized flux); the heating convention matches the solver's
/// flux-times-gradient form.
pub fn trig_family(params: &FluidParams, a_v: f64, a_th: f64, theta_base: f64, r: f64) -> MmsFamily {
    let k = std::f64::consts::PI / r;
    let (q, p, r_gas, eps) = (params.q, params.p, params.r_gas, params.eps_reg);
    let decay = |t: f64| (-t).exp();
    let grown = move |t: f64| 1.0 - (-t).exp();

    let j = move |y: f64, t: f64| 1.0 - a_v * k * (k * y).sin() * grown(t);
    let j_y = move |y: f64, t: f64| -a_v * k * k * (k * y).cos() * grown(t);
    let j_t = move |y: f64, t: f64| -a_v * k * (k * y).sin() * decay(t);
    let v = move |y: f64, t: f64| a_v * (k * y).cos() * decay(t);
    let v_y = move |y: f64, t: f64| -a_v * k * (k * y).sin() * decay(t);
    let v_yy = move |y: f64, t: f64| -a_v * k * k * (k * y).cos() * decay(t);
    let v_t = move |y: f64, t: f64| -a_v * (k * y).cos() * decay(t);
    let th = move |y: f64, t: f64| theta_base + a_th * (k * y).cos() * decay(t);
    let th_y = move |y: f64, t: f64| -a_th * k * (k * y).sin() * decay(t);
    let th_yy = move |y: f64, t: f64| -a_th * k * k * (k * y).cos() * decay(t);
    let th_t = move |y: f64, t: f64| -a_th * (k * y).cos() * decay(t);

    let source_v = move |y: f64, t: f64| {
        let jj = j(y, t);
        let s = v_y(y, t) / jj;
        let s_y = (v_yy(y, t) * jj - v_y(y, t) * j_y(y, t)) / (jj * jj);
        let flux_div = power_flux_derivative(s, q, eps).unwrap() * s_y;
        // pressure rho*Theta = Theta/J on unit density
        let p_y = (th_y(y, t) * jj - th(y, t) * j_y(y, t)) / (jj * jj);
        v_t(y, t) - flux_div + r_gas * p_y
    };
    let source_theta = move |y: f64, t: f64| {
        let jj = j(y, t);
        let s_th = th_y(y, t) / jj;
        let s_th_y = (th_yy(y, t) * jj - th_y(y, t) * j_y(y, t)) / (jj * jj);
        let flux_div = power_flux_derivative(s_th, p, eps).unwrap() * s_th_y;
        let s_v = v_y(y, t) / jj;
        let heating = v_y(y, t) * power_flux(s_v, q, eps).unwrap();
        th_t(y, t) - flux_div + r_gas * (th(y, t) / jj) * v_y(y, t) - heating
    };

    MmsFamily {
        r_trunc: r,
        j: Box::new(j),
        j_t: Box::new(j_t),
        v: Box::new(v),
        v_y: Box::new(v_y),
        theta: Box::new(th),
        source_v: Box::new(source_v),
        source_theta: Box::new(source_theta),
    }
}

/// Largest |J_t - v_y| over a sample of (y, t) points; must vanish for a
/// consistent family.
pub fn compatibility_residual(family: &MmsFamily) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..50 {
        let y = -family.r_trunc + 2.0 * family.r_trunc * i as f64 / 49.0;
        for jt in 0..10 {
            let t = 0.1 * jt as f64;
            worst = worst.max(((family.j_t)(y, t) - (family.v_y)(y, t)).abs());
        }
    }
    worst
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceTable {
    /// (resolution parameter, max-norm error) pairs.
    pub entries: Vec<(f64, f64)>,
    /// Observed orders log2(e_i / e_{i+1}) for successive halvings.
    pub orders: Vec<f64>,
}

impl ConvergenceTable {
    fn from_errors(res: &[f64], errors: &[f64]) -> Self {
        let orders = errors
            .windows(2)
            .map(|w| (w[0] / w[1]).log2())
            .collect();
        ConvergenceTable {
            entries: res.iter().cloned().zip(errors.iter().cloned()).collect(),
            orders,
        }
    }
}

fn uniform_profile() -> DensityProfile {
    DensityProfile {
        kind: ProfileKind::Custom,
        k_amp: 1.0,
        l_decay: 0.0,
        a0: 1.0,
    }
}

fn mms_initial(family: &MmsFamily, grid: &Grid) -> Result<InitialData> {
    let sample = |f: &dyn Fn(f64, f64) -> f64| -> Vec<f64> {
        grid.nodes.iter().map(|&y| f(y, 0.0)).collect()
    };
    InitialData::new(
        grid.clone(),
        vec![1.0; grid.n],
        sample(&*family.j),
        sample(&*family.v),
        sample(&*family.theta),
        uniform_profile(),
    )
}

fn mms_error(family: &MmsFamily, traj: &Trajectory, grid: &Grid) -> Result<f64> {
    if let Some(f) = &traj.failure {
        return Err(Error::InvalidArgument {
            reason: format!("manufactured run failed at t = {}: {}", f.t, f.error),
        });
    }
    let end = traj.states.last().unwrap();
    let t = end.t;
    let mut worst = 0.0_f64;
    for (i, &y) in grid.nodes.iter().enumerate() {
        worst = worst.max((end.v[i] - (family.v)(y, t)).abs());
        worst = worst.max((end.theta[i] - (family.theta)(y, t)).abs());
        worst = worst.max((end.j[i] - (family.j)(y, t)).abs());
    }
    Ok(worst)
}

/// Runs the manufactured problem at several spatial resolutions with a small
/// fixed dt and reports max-norm errors and observed orders.
pub fn mms_spatial_convergence(
    family: &MmsFamily,
    params: &FluidParams,
    resolutions: &[usize],
    dt: f64,
    t_end: f64,
) -> Result<ConvergenceTable> {
    let compat = compatibility_residual(family);
    if compat > 1e-12 {
        return Err(Error::InvalidArgument {
            reason: format!("manufactured fields violate J_t = v_y by {compat}"),
        });
    }
    let cfg = SolverConfig {
        dt,
        ..SolverConfig::default()
    };
    let mut errors = Vec::new();
    for &n in resolutions {
        let g = build_grid(family.r_trunc, n)?;
        let init = mms_initial(family, &g)?;
        let forcing = Forcing {
            momentum: &*family.source_v,
            temperature: &*family.source_theta,
        };
        let traj = solver::run_with_forcing(&init, &cfg, params, t_end, Some(&forcing));
        errors.push(mms_error(family, &traj, &g)?);
    }
    Ok(ConvergenceTable::from_errors(
        &resolutions.iter().map(|&n| n as f64).collect::<Vec<_>>(),
        &errors,
    ))
}

/// dt-refinement at fixed fine N, measured against a much finer-dt
/// reference run of the same discretization (isolates the time error).
pub fn mms_time_convergence(
    family: &MmsFamily,
    params: &FluidParams,
    n: usize,
    dts: &[f64],
    t_end: f64,
) -> Result<ConvergenceTable> {
    let g = build_grid(family.r_trunc, n)?;
    let init = mms_initial(family, &g)?;
    let run_at = |dt: f64| -> Result<State> {
        let cfg = SolverConfig {
            dt,
            ..SolverConfig::default()
        };
        let forcing = Forcing {
            momentum: &*family.source_v,
            temperature: &*family.source_theta,
        };
        let traj = solver::run_with_forcing(&init, &cfg, params, t_end, Some(&forcing));
        if let Some(f) = &traj.failure {
            return Err(Error::InvalidArgument {
                reason: format!("manufactured run failed at t = {}: {}", f.t, f.error),
            });
        }
        Ok(traj.states.last().unwrap().clone())
    };
    let dt_ref = dts.iter().cloned().fold(f64::INFINITY, f64::min) / 8.0;
    let reference = run_at(dt_ref)?;
    let mut errors = Vec::new();
    for &dt in dts {
        let end = run_at(dt)?;
        let mut worst = 0.0_f64;
        for i in 0..g.n {
            worst = worst.max((end.v[i] - reference.v[i]).abs());
            worst = worst.max((end.theta[i] - reference.theta[i]).abs());
        }
        errors.push(worst);
    }
    Ok(ConvergenceTable::from_errors(dts, &errors))
}

// ---------------------------------------------------------------------------
// Conservation audit
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub mass_residual_max: f64,
    /// max over t of |E(t) - E(0)| / (E(0)·t).
    pub energy_drift_rate: f64,
    /// max over t of |P(t) - P(0)| / (scale·t).
    pub momentum_drift_rate: f64,
    pub theta_min: f64,
    pub energy_series: Vec<(f64, f64)>,
}

/// Total mass/momentum/energy bookkeeping over a trajectory: the conserved
/// total energy is `∫ J₀ϱ₀ (v²/2 + Θ) dy`.
pub fn conservation_audit(
    traj: &Trajectory,
    initial: &InitialData,
) -> Result<AuditReport> {
    if traj.states.is_empty() {
        return Err(Error::InsufficientData {
            reason: "empty trajectory".to_string(),
        });
    }
    let g = &initial.grid;
    let weight: Vec<f64> = initial
        .j0
        .iter()
        .zip(&initial.rho0)
        .map(|(a, b)| a * b)
        .collect();
    let total_energy = |s: &State| -> Result<f64> {
        let f: Vec<f64> = (0..g.n)
            .map(|i| weight[i] * (0.5 * s.v[i] * s.v[i] + s.theta[i]))
            .collect();
        grid::integrate(&f, g)
    };
    let total_momentum = |s: &State| -> Result<f64> {
        let f: Vec<f64> = (0..g.n).map(|i| weight[i] * s.v[i]).collect();
        grid::integrate(&f, g)
    };
    let first = &traj.states[0];
    let e0 = total_energy(first)?;
    let p0 = total_momentum(first)?;
    let p_scale: f64 = {
        let f: Vec<f64> = (0..g.n).map(|i| weight[i] * first.v[i].abs()).collect();
        grid::integrate(&f, g)?.max(1e-30)
    };
    let mut mass_residual_max = 0.0_f64;
    let mut energy_drift_rate = 0.0_f64;
    let mut momentum_drift_rate = 0.0_f64;
    let mut theta_min = f64::INFINITY;
    let mut energy_series = Vec::with_capacity(traj.states.len());
    for s in &traj.states {
        mass_residual_max = mass_residual_max.max(s.mass_residual(initial));
        theta_min = theta_min.min(s.theta_min());
        let e = total_energy(s)?;
        energy_series.push((s.t, e));
        if s.t > 0.0 {
            energy_drift_rate = energy_drift_rate.max((e - e0).abs() / (e0.abs().max(1e-30) * s.t));
            let p = total_momentum(s)?;
            momentum_drift_rate = momentum_drift_rate.max((p - p0).abs() / (p_scale * s.t));
        }
    }
    Ok(AuditReport {
        mass_residual_max,
        energy_drift_rate,
        momentum_drift_rate,
        theta_min,
        energy_series,
    })
}

// ---------------------------------------------------------------------------
// Inequality oracles
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub seed: u64,
    pub samples: usize,
    /// Per exponent r: (r, monotonicity violations, max Hölder-type ratio,
    /// worst scale-invariance residual).
    pub per_exponent: Vec<(f64, usize, f64, f64)>,
    /// Per (p, l) pair of the interpolation inequality: (p, l, ratio at base
    /// grid, relative change under grid doubling).
    pub interpolation: Vec<(f64, f64, f64, f64)>,
}

/// Property sampling for the power-law monotonicity/Hölder facts and the
/// weighted interpolation inequality.
pub fn inequality_oracles(seed: u64, samples: usize, r_values: &[f64]) -> Result<OracleReport> {
    if samples < 10_000 {
        return Err(Error::InvalidArgument {
            reason: format!("need at least 1e4 samples, got {samples}"),
        });
    }
    let mut per_exponent = Vec::new();
    for &r in r_values {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut violations = 0usize;
        let mut max_ratio = 0.0_f64;
        let mut worst_scale = 0.0_f64;
        for _ in 0..samples {
            let a: f64 = rng.gen_range(-100.0..100.0);
            let b: f64 = rng.gen_range(-100.0..100.0);
            if a == b {
                continue;
            }
            let fa = power_flux(a, r, 0.0)?;
            let fb = power_flux(b, r, 0.0)?;
            if (fa - fb) * (a - b) < 0.0 {
                violations += 1;
            }
            // direct degree-(r-1) homogeneity at a single point
            for lam in [1e-3, 1.0, 1e3] {
                let fla = power_flux(lam * a, r, 0.0)?;
                let expect = lam.powf(r - 1.0) * fa;
                if expect != 0.0 {
                    worst_scale = worst_scale.max((fla - expect).abs() / expect.abs());
                }
            }
            // the difference ratio is scale-invariant too, but evaluating it
            // on nearly equal pairs only measures cancellation noise
            if (a - b).abs() < 1e-3 * (a.abs() + b.abs() + 1.0) {
                continue;
            }
            let ratio = (fa - fb).abs() / (a - b).abs().powf(r - 1.0);
            max_ratio = max_ratio.max(ratio);
            for lam in [1e-3, 1.0, 1e3] {
                let fla = power_flux(lam * a, r, 0.0)?;
                let flb = power_flux(lam * b, r, 0.0)?;
                let scaled = (fla - flb).abs() / ((lam * (a - b)).abs()).powf(r - 1.0);
                if ratio > 0.0 {
                    worst_scale = worst_scale.max((scaled - ratio).abs() / ratio);
                }
            }
        }
        per_exponent.push((r, violations, max_ratio, worst_scale));
    }

    // Interpolation-inequality ratio over a fixed smooth bump family.
    let mut interpolation = Vec::new();
    for &(p, l) in &[(1.5, 1.0), (1.2, 0.5)] {
        let ratio_at = |n: usize| -> Result<f64> {
            let g = build_grid(3.0, n)?;
            let mut worst: f64 = 0.0;
            for (amp, width) in [(1.0, 1.0), (0.5, 2.0), (2.0, 1.5)] {
                let phi: Vec<f64> = g
                    .nodes
                    .iter()
                    .map(|&y| {
                        let z: f64 = y / width;
                        if z.abs() < 1.0 {
                            amp * (-1.0 / (1.0 - z * z)).exp()
                        } else {
                            0.0
                        }
                    })
                    .collect();
                let d1 = grid::ddy(&phi, &g)?;
                let d2 = grid::ddy(&d1, &g)?;
                let sup = d1.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
                let i1: Vec<f64> = d1
                    .iter()
                    .map(|x| x.abs().powf(2.0 * (l - p + 2.0)))
                    .collect();
                let i2: Vec<f64> = d1
                    .iter()
                    .zip(&d2)
                    .map(|(a, b)| a.abs().powf(2.0 * (p - 1.0)) * b * b)
                    .collect();
                let e = 1.0 / (2.0 * (l + 2.0));
                let denom = grid::integrate(&i1, &g)?.powf(e) * grid::integrate(&i2, &g)?.powf(e);
                worst = worst.max(sup / denom);
            }
            Ok(worst)
        };
        let base = ratio_at(1201)?;
        let fine = ratio_at(2401)?;
        interpolation.push((p, l, base, (fine - base).abs() / base));
    }
    Ok(OracleReport {
        seed,
        samples,
        per_exponent,
        interpolation,
    })
}

// ---------------------------------------------------------------------------
// Linear (r = 2) reduction
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct ReductionReport {
    pub discrepancy_one_step: f64,
    pub discrepancy_final: f64,
    pub steps: usize,
}

/// Dense Gaussian elimination with partial pivoting (the independent linear
/// solver behind the reduction check).
fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let mut piv = col;
        for row in col + 1..n {
            if a[row][col].abs() > a[piv][col].abs() {
                piv = row;
            }
        }
        if a[piv][col] == 0.0 {
            return Err(Error::NonFinite {
                context: "dense pivot",
            });
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Ok(x)
}

/// Independent reference step for q = p = 2, eps = 0: the same lagged
/// fixed-point structure, but each sub-solve is the exactly linear system
/// assembled from scratch and solved by dense elimination.
fn reference_step(
    state: &State,
    initial: &InitialData,
    cfg: &SolverConfig,
    params: &FluidParams,
) -> Result<State> {
    let g = &initial.grid;
    let n = g.n;
    let h = g.h;
    let dt = cfg.dt;
    let rho0 = &initial.rho0;
    let j0 = &initial.j0;

    let linear_solve = |a_coeff: &[f64], w_old: &[f64], j: &[f64], src: &[f64]| -> Result<Vec<f64>> {
        let mut mat = vec![vec![0.0; n]; n];
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            let wi = g.weight(i);
            mat[i][i] = a_coeff[i] / dt;
            if i < n - 1 {
                let jf = 0.5 * (j[i] + j[i + 1]);
                let c = 1.0 / (h * jf) / (j0[i] * wi);
                mat[i][i] += c;
                mat[i][i + 1] -= c;
            }
            if i > 0 {
                let jf = 0.5 * (j[i - 1] + j[i]);
                let c = 1.0 / (h * jf) / (j0[i] * wi);
                mat[i][i] += c;
                mat[i][i - 1] -= c;
            }
            rhs[i] = a_coeff[i] * w_old[i] / dt + src[i];
        }
        dense_solve(mat, rhs)
    };

    let mut vk = state.v.clone();
    let mut thk = state.theta.clone();
    let mut j_new = state.j.clone();
    for _ in 0..cfg.picard_max {
        let v_mid: Vec<f64> = state.v.iter().zip(&vk).map(|(a, b)| 0.5 * (a + b)).collect();
        let dv_mid = grid::ddy(&v_mid, g)?;
        j_new = state
            .j
            .iter()
            .zip(&dv_mid)
            .map(|(j, d)| j + dt * d)
            .collect();
        let rho_new: Vec<f64> = (0..n).map(|i| j0[i] * rho0[i] / j_new[i]).collect();
        let p_field: Vec<f64> = (0..n)
            .map(|i| params.r_gas * rho_new[i] * thk[i])
            .collect();
        let dp = grid::ddy(&p_field, g)?;
        let src_v: Vec<f64> = (0..n).map(|i| -dp[i] / j0[i]).collect();
        let v_new = linear_solve(rho0, &state.v, &j_new, &src_v)?;

        let dv_new = grid::ddy(&v_new, g)?;
        let mut src_th = vec![0.0; n];
        for i in 0..n {
            let mut heat = 0.0;
            if i < n - 1 {
                let jf = 0.5 * (j_new[i] + j_new[i + 1]);
                let fx = (v_new[i + 1] - v_new[i]) / (h * jf);
                heat += 0.5 * fx * (v_new[i + 1] - v_new[i]);
            }
            if i > 0 {
                let jf = 0.5 * (j_new[i - 1] + j_new[i]);
                let fx = (v_new[i] - v_new[i - 1]) / (h * jf);
                heat += 0.5 * fx * (v_new[i] - v_new[i - 1]);
            }
            heat /= j0[i] * g.weight(i);
            let dvt = v_new[i] - state.v[i];
            src_th[i] = -params.r_gas * rho_new[i] * thk[i] * dv_new[i] / j0[i]
                + heat
                + rho0[i] * dvt * dvt / (2.0 * dt);
        }
        let th_new = linear_solve(rho0, &state.theta, &j_new, &src_th)?;

        let change = max_rel(&v_new, &vk).max(max_rel(&th_new, &thk));
        vk = v_new;
        thk = th_new;
        if change < cfg.picard_tol {
            break;
        }
    }
    let rho: Vec<f64> = (0..n).map(|i| j0[i] * rho0[i] / j_new[i]).collect();
    Ok(State {
        t: state.t + dt,
        j: j_new,
        rho,
        v: vk,
        theta: thk,
    })
}

fn max_rel(a: &[f64], b: &[f64]) -> f64 {
    let scale = 1.0 + b.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0_f64, f64::max)
        / scale
}

/// Marches the solver and the independent dense reference side by side on
/// the linear case and reports the worst discrepancy.
pub fn reduction_check(params: &FluidParams, initial: &InitialData, cfg: &SolverConfig, steps: usize) -> Result<ReductionReport> {
    if params.strict_mode {
        return Err(Error::InvalidArgument {
            reason: "reduction check requires non-strict mode (q = p = 2)".to_string(),
        });
    }
    if params.q != 2.0 || params.p != 2.0 || params.eps_reg != 0.0 {
        return Err(Error::InvalidArgument {
            reason: "reduction check requires q = p = 2 and eps_reg = 0".to_string(),
        });
    }
    let mut solver_state = State {
        t: 0.0,
        j: initial.j0.clone(),
        rho: initial.rho0.clone(),
        v: initial.v0.clone(),
        theta: initial.theta0.clone(),
    };
    let mut ref_state = solver_state.clone();
    let mut one_step = 0.0_f64;
    let mut worst = 0.0_f64;
    for step in 0..steps {
        let (next, _) = solver::picard_step(&solver_state, initial, cfg, params, None)?;
        let ref_next = reference_step(&ref_state, initial, cfg, params)?;
        let mut d = 0.0_f64;
        for i in 0..initial.grid.n {
            d = d.max((next.v[i] - ref_next.v[i]).abs());
            d = d.max((next.theta[i] - ref_next.theta[i]).abs());
            d = d.max((next.j[i] - ref_next.j[i]).abs());
        }
        if step == 0 {
            one_step = d;
        }
        worst = worst.max(d);
        solver_state = next;
        ref_state = ref_next;
    }
    Ok(ReductionReport {
        discrepancy_one_step: one_step,
        discrepancy_final: worst,
        steps,
    })
}
