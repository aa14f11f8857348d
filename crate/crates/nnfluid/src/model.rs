//! Physical parameters, constitutive laws, initial-data profiles, and the
//! algebraic relations of the Lagrangian formulation.

use crate::error::{Error, Result};
use crate::grid::Grid;
use serde::{Deserialize, Serialize};

/// Exponents and constants of the model.
///
/// `p` and `q` are the power-law exponents of the heat flux and the stress;
/// `alpha` is the negative weight exponent of the energy functionals;
/// `eps_reg` smooths the singular flux derivative for the Newton solves.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FluidParams {
    pub p: f64,
    pub q: f64,
    pub r_gas: f64,
    pub alpha: f64,
    pub eps_reg: f64,
    pub strict_mode: bool,
}

impl Default for FluidParams {
    fn default() -> Self {
        FluidParams {
            p: 1.5,
            q: 1.5,
            r_gas: 1.0,
            alpha: -6.0,
            eps_reg: 1e-6,
            strict_mode: true,
        }
    }
}

impl FluidParams {
    /// The admissibility threshold for `alpha`:
    /// `min{-q/(2(q-1)), -(4-p)/(2-p)}` (the second branch is `-inf` at p=2).
    pub fn alpha_threshold(&self) -> f64 {
        let b1 = -self.q / (2.0 * (self.q - 1.0));
        let b2 = if self.p < 2.0 {
            -(4.0 - self.p) / (2.0 - self.p)
        } else {
            f64::NEG_INFINITY
        };
        b1.min(b2)
    }
}

/// One named constraint check with its outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Pass/fail report for every parameter constraint, with the computed
/// alpha threshold. Callers decide whether to abort.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub alpha_threshold: f64,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

/// Checks every parameter constraint and reports them individually.
pub fn validate_params(params: &FluidParams) -> ValidationReport {
    let mut checks = Vec::new();
    let (p, q) = (params.p, params.q);
    let exp_range = |name: &str, v: f64, strict: bool| {
        let pass = if strict {
            v > 1.0 && v < 2.0
        } else {
            v > 1.0 && v <= 2.0
        };
        let interval = if strict { "(1,2)" } else { "(1,2]" };
        Check {
            name: format!("{name} in {interval}"),
            pass,
            detail: format!("{name} = {v}"),
        }
    };
    checks.push(exp_range("p", p, params.strict_mode));
    checks.push(exp_range("q", q, params.strict_mode));
    let threshold = params.alpha_threshold();
    if params.strict_mode {
        checks.push(Check {
            name: "alpha below threshold".to_string(),
            pass: params.alpha < threshold,
            detail: format!(
                "alpha = {} vs min{{-q/(2(q-1)), -(4-p)/(2-p)}} = {threshold}",
                params.alpha
            ),
        });
    }
    checks.push(Check {
        name: "gas constant positive".to_string(),
        pass: params.r_gas > 0.0,
        detail: format!("R = {}", params.r_gas),
    });
    checks.push(Check {
        name: "flux regularization nonnegative".to_string(),
        pass: params.eps_reg >= 0.0,
        detail: format!("eps_reg = {}", params.eps_reg),
    });
    ValidationReport {
        checks,
        alpha_threshold: threshold,
    }
}

/// Regularized power-law flux `Φ_ε(s) = (s² + ε²)^{(r-2)/2} · s`.
///
/// Reduces to `|s|^{r-2} s` at `ε = 0`, extended by continuity to 0 at
/// `s = 0` (valid because `r > 1`).
pub fn power_flux(s: f64, r: f64, eps: f64) -> Result<f64> {
    if !s.is_finite() {
        return Err(Error::NonFinite {
            context: "power_flux strain rate",
        });
    }
    if eps == 0.0 {
        if s == 0.0 {
            return Ok(0.0);
        }
        return Ok(s.signum() * s.abs().powf(r - 1.0));
    }
    Ok((s * s + eps * eps).powf(0.5 * (r - 2.0)) * s)
}

/// Derivative `dΦ_ε/ds = (s²+ε²)^{(r-4)/2} · ((r-1)s² + ε²)`, used by the
/// Newton solves. At `ε = 0, s = 0` the derivative is unbounded for `r < 2`;
/// infinity is returned in that case (the solver only runs there at `r = 2`).
pub fn power_flux_derivative(s: f64, r: f64, eps: f64) -> Result<f64> {
    if !s.is_finite() {
        return Err(Error::NonFinite {
            context: "power_flux_derivative strain rate",
        });
    }
    if eps == 0.0 && s == 0.0 {
        return Ok(if r == 2.0 { 1.0 } else { f64::INFINITY });
    }
    let s2e = s * s + eps * eps;
    Ok(s2e.powf(0.5 * (r - 4.0)) * ((r - 1.0) * s * s + eps * eps))
}

/// Ideal-gas pressure `R·ρ·Θ`.
pub fn pressure(rho: f64, theta: f64, r_gas: f64) -> Result<f64> {
    if rho < 0.0 || theta < 0.0 {
        return Err(Error::InvalidArgument {
            reason: format!("pressure needs rho, Theta >= 0, got rho={rho}, Theta={theta}"),
        });
    }
    Ok(r_gas * rho * theta)
}

/// Mass identity: `ϱ = J₀ϱ₀ / J` pointwise. Density is always derived from
/// the Jacobian, never time-integrated, so mass conservation is exact by
/// construction.
pub fn density_from_jacobian(j: &[f64], j0: &[f64], rho0: &[f64]) -> Result<Vec<f64>> {
    let min_j = j.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(min_j > 0.0) {
        return Err(Error::JacobianDegenerate {
            t: f64::NAN,
            inf_j: min_j,
            floor: 0.0,
        });
    }
    Ok(j
        .iter()
        .zip(j0.iter().zip(rho0))
        .map(|(ji, (j0i, r0i))| j0i * r0i / ji)
        .collect())
}

/// Shape of the initial density.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityProfile {
    pub kind: ProfileKind,
    /// Amplitude of the power-law profile (its value at y = 0).
    pub k_amp: f64,
    /// Decay exponent.
    pub l_decay: f64,
    /// Lower-envelope amplitude (A0 <= K).
    pub a0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    PowerLaw,
    Custom,
}

/// Report on the decay exponent against the admissibility window
/// `0 < l < min{1, -(3p-2)/((2-p)α+3), -(p-1)/(αp)}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecayReport {
    /// The three candidate branches; `None` marks the degenerate case where
    /// a branch's denominator vanishes (that branch imposes no bound).
    pub branch_unit: f64,
    pub branch_mid: Option<f64>,
    pub branch_slope: f64,
    pub l_max: f64,
    pub l: f64,
    pub admissible: bool,
    pub degenerate_branch: bool,
}

/// Maximal admissible decay exponent for the power-law profile at given
/// `(p, alpha)`, with the degenerate branch `(2-p)α+3 = 0` reported instead
/// of divided by.
pub fn decay_report(l: f64, params: &FluidParams) -> DecayReport {
    let (p, alpha) = (params.p, params.alpha);
    let denom = (2.0 - p) * alpha + 3.0;
    let degenerate = denom == 0.0;
    let branch_mid = if degenerate {
        None
    } else {
        Some(-(3.0 * p - 2.0) / denom)
    };
    let branch_slope = -(p - 1.0) / (alpha * p);
    let mut l_max = 1.0_f64.min(branch_slope);
    if let Some(b) = branch_mid {
        // A negative branch means no positive l is admissible.
        l_max = l_max.min(b);
    }
    DecayReport {
        branch_unit: 1.0,
        branch_mid,
        branch_slope,
        l_max,
        l,
        admissible: l > 0.0 && l < l_max,
        degenerate_branch: degenerate,
    }
}

/// Samples `ϱ₀(y) = K/(1+|y|)^l` on the grid and reports admissibility of the
/// decay exponent.
pub fn build_power_law_profile(
    k_amp: f64,
    l: f64,
    a0: f64,
    params: &FluidParams,
    grid: &Grid,
) -> Result<(Vec<f64>, DecayReport)> {
    if !(k_amp > 0.0) || !(l > 0.0) || a0 > k_amp {
        return Err(Error::InvalidArgument {
            reason: format!("power-law profile needs K > 0, l > 0, A0 <= K; got K={k_amp}, l={l}, A0={a0}"),
        });
    }
    let rho0 = grid
        .nodes
        .iter()
        .map(|&y| k_amp / (1.0 + y.abs()).powf(l))
        .collect();
    Ok((rho0, decay_report(l, params)))
}

/// Initial data sampled on the grid together with the bounds entering the
/// envelope formulas.
#[derive(Debug, Clone)]
pub struct InitialData {
    pub grid: Grid,
    pub rho0: Vec<f64>,
    pub j0: Vec<f64>,
    pub v0: Vec<f64>,
    pub theta0: Vec<f64>,
    /// sup ϱ₀ (must be >= 1 for the envelope formulas).
    pub rho_bar: f64,
    /// inf J₀.
    pub j_lo: f64,
    /// sup J₀.
    pub j_hi: f64,
    pub profile: DensityProfile,
}

impl InitialData {
    /// Assembles initial data, deriving the sup/inf bounds from the sampled
    /// fields (`rho_bar` is floored at 1 as the hypotheses require).
    pub fn new(
        grid: Grid,
        rho0: Vec<f64>,
        j0: Vec<f64>,
        v0: Vec<f64>,
        theta0: Vec<f64>,
        profile: DensityProfile,
    ) -> Result<Self> {
        for (name, f) in [("rho0", &rho0), ("J0", &j0), ("v0", &v0), ("Theta0", &theta0)] {
            if f.len() != grid.n {
                return Err(Error::LengthMismatch {
                    expected: grid.n,
                    got: f.len(),
                });
            }
            if f.iter().any(|x| !x.is_finite()) {
                let _ = name;
                return Err(Error::NonFinite {
                    context: "initial data field",
                });
            }
        }
        let min_rho = rho0.iter().cloned().fold(f64::INFINITY, f64::min);
        if !(min_rho > 0.0) {
            return Err(Error::NonPositiveDensity { min: min_rho });
        }
        let j_lo = j0.iter().cloned().fold(f64::INFINITY, f64::min);
        let j_hi = j0.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !(j_lo > 0.0) {
            return Err(Error::InvalidArgument {
                reason: format!("J0 must be positive, inf J0 = {j_lo}"),
            });
        }
        let min_theta = theta0.iter().cloned().fold(f64::INFINITY, f64::min);
        if min_theta < 0.0 {
            return Err(Error::InvalidArgument {
                reason: format!("Theta0 must be nonnegative, min = {min_theta}"),
            });
        }
        let rho_bar = rho0
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
            .max(1.0);
        Ok(InitialData {
            grid,
            rho0,
            j0,
            v0,
            theta0,
            rho_bar,
            j_lo,
            j_hi,
            profile,
        })
    }
}

/// Fields at one instant. The density satisfies `J·ϱ = J₀·ϱ₀` by
/// construction.
#[derive(Debug, Clone)]
pub struct State {
    pub t: f64,
    pub j: Vec<f64>,
    pub rho: Vec<f64>,
    pub v: Vec<f64>,
    pub theta: Vec<f64>,
}

impl State {
    /// Maximum mass-identity residual relative to `max(J₀ϱ₀)`.
    pub fn mass_residual(&self, initial: &InitialData) -> f64 {
        let scale = initial
            .j0
            .iter()
            .zip(&initial.rho0)
            .map(|(a, b)| a * b)
            .fold(0.0_f64, f64::max);
        self.j
            .iter()
            .zip(&self.rho)
            .zip(initial.j0.iter().zip(&initial.rho0))
            .map(|((j, r), (j0, r0))| (j * r - j0 * r0).abs())
            .fold(0.0_f64, f64::max)
            / scale
    }

    pub fn inf_j(&self) -> f64 {
        self.j.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn sup_j(&self) -> f64 {
        self.j.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn theta_min(&self) -> f64 {
        self.theta.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

/// Gaussian bump `a·exp(-y²/(2w²))`, the closed-form family used for the
/// default velocity and temperature data (fast decay keeps the truncated
/// boundary inert).
pub fn gaussian_field(amplitude: f64, width: f64, grid: &Grid) -> Vec<f64> {
    grid.nodes
        .iter()
        .map(|&y| amplitude * (-y * y / (2.0 * width * width)).exp())
        .collect()
}

///// The default scenario: power-law density `K=1, l=0.04`, unit initial
/// Jacobian, small Gaussian velocity and temperature bumps.
pub fn default_initial_data(params: &FluidParams, grid: &Grid) -> Result<InitialData> {
    let profile = DensityProfile {
        kind: ProfileKind::PowerLaw,
        k_amp: 1.0,
        l_decay: 0.04,
        a0: 1.0,
    };
    let (rho0, _report) =
        build_power_law_profile(profile.k_amp, profile.l_decay, profile.a0, params, grid)?;
    let j0 = vec![1.0; grid.n];
    let v0 = gaussian_field(0.1, 1.0, grid);
    let theta0 = gaussian_field(0.1, 1.0, grid);
    InitialData::new(grid.clone(), rho0, j0, v0, theta0, profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn validate_default_params() {
        let params = FluidParams::default();
        let report = validate_params(&params);
        // threshold = min{-1.5, -5} = -5 and alpha = -6 < -5
        assert_eq!(report.alpha_threshold, -5.0);
        assert!(report.all_pass());
    }

    #[test]
    fn validate_rejects_shallow_alpha() {
        let params = FluidParams {
            alpha: -4.0,
            ..FluidParams::default()
        };
        let report = validate_params(&params);
        assert!(!report.all_pass());
        assert!(report
            .failures()
            .iter()
            .any(|c| c.name.contains("alpha")));
    }

    #[test]
    fn validate_rejects_q_two_in_strict_mode() {
        let params = FluidParams {
            q: 2.0,
            ..FluidParams::default()
        };
        assert!(!validate_params(&params).all_pass());
        let relaxed = FluidParams {
            p: 2.0,
            q: 2.0,
            strict_mode: false,
            ..FluidParams::default()
        };
        assert!(validate_params(&relaxed).all_pass());
    }

    #[test]
    fn threshold_monotone_in_q() {
        // Decreasing q toward 1 strictly decreases -q/(2(q-1)).
        let branch = |q: f64| -q / (2.0 * (q - 1.0));
        let mut prev = branch(1.9);
        for q in [1.7, 1.5, 1.3, 1.1] {
            let b = branch(q);
            assert!(b < prev);
            prev = b;
        }
    }

    #[test]
    fn power_flux_closed_forms() {
        assert!((power_flux(4.0, 1.5, 0.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((power_flux(-4.0, 1.5, 0.0).unwrap() + 2.0).abs() < 1e-15);
        assert_eq!(power_flux(3.0, 2.0, 0.0).unwrap(), 3.0);
        assert_eq!(power_flux(0.0, 1.5, 0.0).unwrap(), 0.0);
        // derivative at s=0 with eps=0.01, r=1.5 is eps^{r-2} = 10
        let d = power_flux_derivative(0.0, 1.5, 0.01).unwrap();
        assert!((d - 10.0).abs() < 1e-12, "got {d}");
        assert!(power_flux(f64::NAN, 1.5, 0.0).is_err());
    }

    #[test]
    fn power_flux_odd_monotone_homogeneous() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20_000 {
            let r = rng.gen_range(1.01..2.0);
            let eps = if rng.gen_bool(0.5) { 0.0 } else { 1e-6 };
            let s: f64 = rng.gen_range(-10.0..10.0);
            let b: f64 = rng.gen_range(-10.0..10.0);
            let fs = power_flux(s, r, eps).unwrap();
            // odd, exactly
            assert_eq!(power_flux(-s, r, eps).unwrap(), -fs);
            // monotone
            let fb = power_flux(b, r, eps).unwrap();
            assert!((fs - fb) * (s - b) >= 0.0);
            // homogeneity of degree r-1 at eps = 0, up to a few ulp
            if eps == 0.0 && s != 0.0 {
                let lam: f64 = rng.gen_range(0.1..10.0);
                let lhs = power_flux(lam * s, r, 0.0).unwrap();
                let rhs = lam.powf(r - 1.0) * fs;
                assert!(
                    (lhs - rhs).abs() <= 4.0 * f64::EPSILON * rhs.abs().max(1e-300),
                    "homogeneity: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn pressure_values() {
        assert_eq!(pressure(2.0, 3.0, 1.0).unwrap(), 6.0);
        assert_eq!(pressure(0.0, 5.0, 1.0).unwrap(), 0.0);
        assert!((pressure(1.5, 2.0, 0.4).unwrap() - 1.2).abs() < 1e-15);
        assert!(pressure(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn density_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 101;
        let j0: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
        let rho0: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
        let j: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
        let rho = density_from_jacobian(&j, &j0, &rho0).unwrap();
        // identity cases
        let same = density_from_jacobian(&j0, &j0, &rho0).unwrap();
        for (a, b) in same.iter().zip(&rho0) {
            assert!((a - b).abs() <= 1e-15 * b.abs());
        }
        let double: Vec<f64> = j0.iter().map(|x| 2.0 * x).collect();
        let halved = density_from_jacobian(&double, &j0, &rho0).unwrap();
        for (a, b) in halved.iter().zip(&rho0) {
            assert!((a - 0.5 * b).abs() <= 1e-15 * b.abs());
        }
        // round trip J -> rho -> J
        for i in 0..n {
            let back = j0[i] * rho0[i] / rho[i];
            assert!((back - j[i]).abs() < 1e-14 * j[i]);
        }
        // mass identity residual
        let scale = j0.iter().zip(&rho0).map(|(a, b)| a * b).fold(0.0_f64, f64::max);
        for i in 0..n {
            assert!((j[i] * rho[i] - j0[i] * rho0[i]).abs() <= 1e-13 * scale);
        }
        // degenerate Jacobian rejected
        let mut bad = j.clone();
        bad[3] = 0.0;
        assert!(density_from_jacobian(&bad, &j0, &rho0).is_err());
    }

    #[test]
    fn decay_window_branches() {
        let params = FluidParams {
            p: 1.5,
            alpha: -7.0,
            ..FluidParams::default()
        };
        // l_max = min{1, -2.5/(-0.5), -0.5/(-10.5)} = min{1, 5, 1/21}
        let rep = decay_report(0.04, &params);
        assert!((rep.branch_mid.unwrap() - 5.0).abs() < 1e-12);
        assert!((rep.branch_slope - 1.0 / 21.0).abs() < 1e-12);
        assert!((rep.l_max - 1.0 / 21.0).abs() < 1e-12);
        assert!(rep.admissible);
        let rej = decay_report(0.1, &params);
        assert!(!rej.admissible);
        // degenerate branch: (2-p)*alpha + 3 = 0 at p=1.5, alpha=-6
        let deg = decay_report(0.04, &FluidParams::default());
        assert!(deg.degenerate_branch);
        assert!(deg.branch_mid.is_none());
        assert!((deg.l_max - 1.0 / 18.0).abs() < 1e-12);
        assert!(deg.admissible);
    }

    #[test]
    fn power_law_profile_values() {
        let params = FluidParams::default();
        let g = build_grid(1.0, 3).unwrap();
        let l = 0.04;
        let (rho0, rep) = build_power_law_profile(1.0, l, 1.0, &params, &g).unwrap();
        assert_eq!(rho0[1], 1.0); // value at y = 0
        assert!((rho0[2] - 2.0_f64.powf(-l)).abs() < 1e-15);
        assert!(rep.admissible);
        assert!(build_power_law_profile(1.0, 0.04, 2.0, &params, &g).is_err());
    }

    #[test]
    fn default_scenario_builds() {
        let params = FluidParams::default();
        let g = build_grid(20.0, 101).unwrap();
        let init = default_initial_data(&params, &g).unwrap();
        assert_eq!(init.rho_bar, 1.0);
        assert_eq!(init.j_lo, 1.0);
        assert_eq!(init.j_hi, 1.0);
        assert!(init.theta0.iter().all(|&t| t >= 0.0));
    }
}
