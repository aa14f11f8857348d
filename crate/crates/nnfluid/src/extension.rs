//! Global-in-time machinery: local Gronwall bounds, admissible-horizon
//! computation, restart scheduling, and the g/h step-lower-bound functions
//! with the divergence audit.

use crate::energetics::{self, G0Variant};
use crate::error::{Error, Result};
use crate::model::{validate_params, DensityProfile, FluidParams, InitialData, ProfileKind, State};
use crate::solver::{SolverConfig, Trajectory};
use serde::Serialize;

/// Local Gronwall bound: returns `H(t)·(1 − σc₀H^σ(t)(t−T₀))^{−1/σ}` with
/// `H(t) = f0 + ∫_{T0}^t h ds` (composite Simpson quadrature for general h).
/// Errors with the critical factor when the horizon is reached.
pub fn local_gronwall_bound(
    f0: f64,
    h_fn: &dyn Fn(f64) -> f64,
    c0: f64,
    sigma: f64,
    t0: f64,
    t: f64,
) -> Result<f64> {
    if t < t0 {
        return Err(Error::InvalidArgument {
            reason: format!("t = {t} precedes T0 = {t0}"),
        });
    }
    if sigma <= 0.0 || c0 < 0.0 {
        return Err(Error::InvalidArgument {
            reason: format!("need sigma > 0 and c0 >= 0, got sigma={sigma}, c0={c0}"),
        });
    }
    let h_total = simpson(h_fn, t0, t, 2000);
    let h_of_t = f0 + h_total;
    if c0 == 0.0 {
        return Ok(h_of_t);
    }
    let factor = sigma * c0 * h_of_t.powf(sigma) * (t - t0);
    if factor >= 1.0 {
        return Err(Error::HorizonExceeded {
            value: factor,
            critical_time: t,
        });
    }
    Ok(h_of_t * (1.0 - factor).powf(-1.0 / sigma))
}

/// Composite Simpson rule with `panels` even subdivisions.
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let n = panels.max(2) + panels % 2;
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let x = a + i as f64 * h;
        sum += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
    }
    sum * h / 3.0
}

/// Solves `(q+1)/(q-1)·H(t)^{(q+1)/(q-1)}·t = margin_target` by bisection to
/// relative tolerance 1e-10, returning a time that satisfies the strict
/// admissibility inequality.
pub fn admissible_time(
    h_fn: &dyn Fn(f64) -> f64,
    q: f64,
    margin_target: f64,
) -> Result<f64> {
    if !(margin_target > 0.0 && margin_target < 1.0) {
        return Err(Error::InvalidArgument {
            reason: format!("margin target must lie in (0,1), got {margin_target}"),
        });
    }
    let h0 = h_fn(0.0);
    if !h0.is_finite() || h0 < 0.0 {
        return Err(Error::InvalidArgument {
            reason: format!("H(0) must be finite and nonnegative, got {h0}"),
        });
    }
    let e = (q + 1.0) / (q - 1.0);
    let margin = |t: f64| e * h_fn(t).powf(e) * t;
    // bracket the root (H(0) = 0 is fine as long as H grows)
    let mut hi = if h0 > 0.0 {
        margin_target / (e * h0.powf(e))
    } else {
        1.0
    };
    for _ in 0..200 {
        if margin(hi) >= margin_target {
            break;
        }
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if margin(mid) < margin_target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-10 * hi {
            break;
        }
    }
    // the lower end keeps the strict inequality
    Ok(lo)
}

/// Step lower-bound generator `g(k)`:
///
/// `((q-1)/(q+1))^{(q-1)/(q(q+1))} · (1-1/k)^{(q-1)/(q(q+1))}
///  · (1 + ((q-1)/(q+1))·k^{(q+1)/(q-1)}·(k-1))^{1/q}`
///
/// This is the sum form factored with a plus sign inside the bracket; the
/// alternative sign variant is available from [`g_of_k_minus_variant`] for
/// inspection but contradicts the monotonicity of g and refuses to evaluate
/// where its bracket goes negative.
pub fn g_of_k(k: f64, q: f64) -> Result<f64> {
    check_gk_domain(k, q)?;
    let cq = (q - 1.0) / (q + 1.0);
    let outer = (q - 1.0) / (q * (q + 1.0));
    Ok(cq.powf(outer)
        * (1.0 - 1.0 / k).powf(outer)
        * (1.0 + cq * k.powf((q + 1.0) / (q - 1.0)) * (k - 1.0)).powf(1.0 / q))
}

/// The minus-sign variant of `g`; kept only for inspection. Errors when
/// the inner bracket is nonpositive (which happens for all k slightly above
/// 1, the reason the plus form is taken as primary).
pub fn g_of_k_minus_variant(k: f64, q: f64) -> Result<f64> {
    check_gk_domain(k, q)?;
    let cq = (q - 1.0) / (q + 1.0);
    let outer = (q - 1.0) / (q * (q + 1.0));
    let bracket = 1.0 - cq * k.powf((q + 1.0) / (q - 1.0)) * (k - 1.0);
    if bracket <= 0.0 && k > 1.0 {
        return Err(Error::InvalidArgument {
            reason: format!("minus-variant bracket nonpositive at k = {k} (value {bracket})"),
        });
    }
    Ok(cq.powf(outer) * (1.0 - 1.0 / k).powf(outer) * bracket.powf(1.0 / q))
}

fn check_gk_domain(k: f64, q: f64) -> Result<()> {
    if k < 1.0 {
        return Err(Error::InvalidArgument {
            reason: format!("g requires k >= 1, got {k}"),
        });
    }
    if !(q > 1.0 && q < 2.0) {
        return Err(Error::InvalidArgument {
            reason: format!("g requires q in (1,2), got {q}"),
        });
    }
    Ok(())
}

/// `h(k,η) = g(k) / g(η^{(q-1)²/(2(q+1))}·k)`, computed directly as this
/// ratio (an expanded closed form would not satisfy `h(k,1) = 1` exactly).
/// Satisfies `h(k,1)=1`, `0 < h <= 1`, nonincreasing in η.
pub fn h_of_k_eta(k: f64, eta: f64, q: f64) -> Result<f64> {
    if eta < 1.0 {
        return Err(Error::InvalidArgument {
            reason: format!("h requires eta >= 1, got {eta}"),
        });
    }
    let scale = eta.powf((q - 1.0) * (q - 1.0) / (2.0 * (q + 1.0)));
    Ok(g_of_k(k, q)? / g_of_k(scale * k, q)?)
}

/// `∫₁^Λ h^{(q+1)/(q-1)}(2,η) dη` by Simpson quadrature in log η (the
/// integrand decays roughly like 1/η, so the substitution keeps the panel
/// count modest).
pub fn divergence_integral(lambda: f64, q: f64, panels: usize) -> Result<f64> {
    if lambda < 1.0 {
        return Err(Error::InvalidArgument {
            reason: format!("Lambda must be >= 1, got {lambda}"),
        });
    }
    let e = (q + 1.0) / (q - 1.0);
    let f = |u: f64| -> f64 {
        let eta = u.exp();
        h_of_k_eta(2.0, eta, q).map(|h| h.powf(e) * eta).unwrap_or(0.0)
    };
    Ok(simpson(&f, 0.0, lambda.ln(), panels))
}

/// One completed restart segment.
#[derive(Debug, Clone, Serialize)]
pub struct Segment {
    pub index: usize,
    pub t_start: f64,
    pub t_end: f64,
    /// Segment envelope at restart: base value and slope.
    pub h_l0: f64,
    pub g_l: f64,
    /// inf J at the segment end.
    pub delta: f64,
    /// Scale factor η chosen for the theoretical step bound.
    pub eta: f64,
    /// Theoretical step lower bound h^{(q+1)/(q-1)}(2, η).
    pub step_lower_bound: f64,
    pub step: f64,
}

/// Restart schedule with the divergence evidence.
#[derive(Debug, Clone, Serialize)]
pub struct Schedule {
    pub segments: Vec<Segment>,
    pub cumulative_time: f64,
    /// (Λ, ∫₁^Λ h^{(q+1)/(q-1)}(2,η)dη) pairs for growing Λ.
    pub divergence_partial_sums: Vec<(f64, f64)>,
    /// Set when a segment's solver run failed; the schedule stops there.
    pub failure_diagnosis: Option<String>,
    pub constants_note: &'static str,
}

/// Options for the scheduler.
#[derive(Debug, Clone, Copy)]
pub struct ScheduleOptions {
    pub margin_target: f64,
    /// Optional cap on a single segment length (keeps desk runs cheap).
    pub segment_cap: Option<f64>,
}

impl Default for ScheduleOptions {
    fn default() -> Self {
        ScheduleOptions {
            margin_target: 0.5,
            segment_cap: None,
        }
    }
}

/// Smallest η ≥ 1 on a geometric grid such that `2·η^{(q-1)²/(2(q+1))}`
/// rounds to an integer ≥ 3.
pub fn select_eta(q: f64) -> f64 {
    let s = (q - 1.0) * (q - 1.0) / (2.0 * (q + 1.0));
    let mut eta = 1.0_f64;
    for _ in 0..10_000 {
        let scaled = 2.0 * eta.powf(s);
        if scaled.round() >= 3.0 {
            return eta;
        }
        eta *= 1.05;
    }
    eta
}

/// Runs the restart construction: each segment rebuilds the envelope from
/// the end state of the previous one, picks its length by the admissibility
/// margin, runs the solver, and records inf J plus the theoretical step
/// lower bound. Solver failure stops the schedule with a diagnosis.
pub fn schedule_extension<F>(
    run_fn: F,
    initial: &InitialData,
    params: &FluidParams,
    cfg: &SolverConfig,
    l_max: usize,
    opts: &ScheduleOptions,
) -> Result<Schedule>
where
    F: Fn(&InitialData, &SolverConfig, &FluidParams, f64) -> Trajectory,
{
    let validation = validate_params(params);
    if !validation.all_pass() {
        return Err(Error::InvalidArgument {
            reason: format!(
                "parameter validation failed: {:?}",
                validation.failures()
            ),
        });
    }
    let q = params.q;
    let eta = select_eta(q);
    let step_bound = h_of_k_eta(2.0, eta, q)?.powf((q + 1.0) / (q - 1.0));

    let mut segments = Vec::new();
    let mut failure_diagnosis = None;
    let mut t_start = 0.0;
    let mut current = initial.clone();

    for l in 1..=l_max {
        // Segment envelope from the restart data.
        let probe = [0.0, 1.0];
        let env = energetics::bound_envelope_variant(&current, params, &probe, G0Variant::Late)?;
        let h_fn = |t: f64| env.h0(t);
        let mut step = admissible_time(&h_fn, q, opts.margin_target)?;
        if let Some(cap) = opts.segment_cap {
            step = step.min(cap);
        }
        // round to a whole number of dt steps (at least one)
        let n_steps = (step / cfg.dt).round().max(1.0);
        step = n_steps * cfg.dt;

        let traj = run_fn(&current, cfg, params, step);
        if let Some(f) = &traj.failure {
            failure_diagnosis = Some(format!("segment {l} failed at t = {}: {}", f.t, f.error));
            break;
        }
        let end = traj.states.last().unwrap();
        let delta = end.inf_j();
        segments.push(Segment {
            index: l,
            t_start,
            t_end: t_start + step,
            h_l0: env.h00,
            g_l: env.g0,
            delta,
            eta,
            step_lower_bound: step_bound,
            step,
        });
        t_start += step;
        current = restart_data(&current, end)?;
    }

    let mut sums = Vec::new();
    for exp in 1..=4 {
        let lambda = 10.0_f64.powi(exp);
        sums.push((lambda, divergence_integral(lambda, q, 4000)?));
    }
    Ok(Schedule {
        cumulative_time: t_start,
        segments,
        divergence_partial_sums: sums,
        failure_diagnosis,
        constants_note: energetics::CONSTANTS_NOTE,
    })
}

/// The end state of a segment becomes the initial data of the next: the
/// evolved density and Jacobian are the new weights, preserving the mass
/// identity within the new segment.
fn restart_data(previous: &InitialData, end: &State) -> Result<InitialData> {
    // Round-off-level temperature undershoot is zeroed so the restart data
    // satisfies the nonnegativity hypothesis; anything larger is a real
    // solver defect and is left to trip the validation.
    let theta = end
        .theta
        .iter()
        .map(|&t| if t < 0.0 && t >= -1e-10 { 0.0 } else { t })
        .collect();
    InitialData::new(
        previous.grid.clone(),
        end.rho.clone(),
        end.j.clone(),
        end.v.clone(),
        theta,
        DensityProfile {
            kind: ProfileKind::Custom,
            ..previous.profile.clone()
        },
    )
}
