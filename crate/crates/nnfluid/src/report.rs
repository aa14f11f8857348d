//! Output artifacts: snapshot CSVs, the per-step diagnostics CSV, and the
//! continuation schedule JSON. Every file carries the hash of the run
//! configuration so outputs can be matched to the inputs that produced them,
//! and all floats are printed with 17 significant digits so re-reading is
//! lossless and byte-for-byte reproducible.

use crate::energetics::{self, BoundAudit, BoundEnvelope};
use crate::error::{Error, Result};
use crate::extension::Schedule;
use crate::model::{FluidParams, InitialData, State};
use crate::solver::Trajectory;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::io::Write as _;
use std::path::Path;

/// SHA-256 hex digest of the configuration text.
pub fn config_hash(config_text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(config_text.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `y,J,rho,v,Theta` rows for one snapshot.
pub fn write_snapshot(path: &Path, state: &State, initial: &InitialData, hash: &str) -> Result<()> {
    let mut out = String::new();
    out.push_str(&format!("# config_hash={hash}\n"));
    out.push_str("y,J,rho,v,Theta\n");
    for i in 0..initial.grid.n {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt(initial.grid.nodes[i]),
            fmt(state.j[i]),
            fmt(state.rho[i]),
            fmt(state.v[i]),
            fmt(state.theta[i]),
        ));
    }
    write_atomic(path, out.as_bytes())
}

/// Canonical file name for a snapshot at time `t`.
pub fn snapshot_name(t: f64) -> String {
    format!("snap_{t:.6}.csv")
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticsRow {
    pub t: f64,
    pub e: f64,
    pub d: f64,
    pub components: [f64; 8],
    pub inf_j: f64,
    pub sup_j: f64,
    pub theta_min: f64,
    pub mass_residual: f64,
    pub energy_drift: f64,
    pub margin: f64,
    pub ratio_e: f64,
    pub ratio_sup_j: f64,
    pub ratio_inf_j: f64,
}

/// Assembles one diagnostics row per stored snapshot: weighted energy and
/// dissipation, state bounds, conserved-energy drift per unit time, and the
/// envelope-audit ratios.
pub fn diagnostics_rows(
    traj: &Trajectory,
    initial: &InitialData,
    params: &FluidParams,
    envelope: &BoundEnvelope,
) -> Result<(Vec<DiagnosticsRow>, BoundAudit)> {
    if traj.states.is_empty() {
        return Err(Error::InsufficientData {
            reason: "no snapshots to report".to_string(),
        });
    }
    let audit = energetics::check_bounds(&traj.states, envelope, initial, params)?;
    let conserved = crate::verify::conservation_audit(traj, initial)?;
    let e_tot0 = conserved.energy_series[0].1;
    let mut rows = Vec::with_capacity(traj.states.len());
    for (idx, state) in traj.states.iter().enumerate() {
        let report = energetics::energy_functional(state, initial, params)?;
        let d = if idx > 0 {
            let dot = energetics::state_dot(&traj.states[idx - 1], state)?;
            energetics::dissipation_functional(state, &dot, initial, params)?
        } else {
            0.0
        };
        let e_tot = conserved.energy_series[idx].1;
        let energy_drift = if state.t > 0.0 {
            (e_tot - e_tot0).abs() / (e_tot0.abs().max(1e-30) * state.t)
        } else {
            0.0
        };
        let entry = &audit.entries[idx];
        rows.push(DiagnosticsRow {
            t: state.t,
            e: report.e,
            d,
            components: report.components,
            inf_j: state.inf_j(),
            sup_j: state.sup_j(),
            theta_min: state.theta_min(),
            mass_residual: state.mass_residual(initial),
            energy_drift,
            margin: entry.margin,
            ratio_e: entry.ratio_e,
            ratio_sup_j: entry.ratio_sup_j,
            ratio_inf_j: entry.ratio_inf_j,
        });
    }
    Ok((rows, audit))
}

pub fn write_diagnostics(path: &Path, rows: &[DiagnosticsRow], hash: &str) -> Result<()> {
    let mut out = String::new();
    out.push_str(&format!("# config_hash={hash}\n"));
    out.push_str(
        "t,E,D,c1,c2,c3,c4,c5,c6,c7,c8,inf_J,sup_J,theta_min,mass_residual,energy_drift,margin,ratio_E,ratio_supJ,ratio_infJ\n",
    );
    for r in rows {
        let mut fields = vec![fmt(r.t), fmt(r.e), fmt(r.d)];
        fields.extend(r.components.iter().map(|&c| fmt(c)));
        fields.extend(
            [
                r.inf_j,
                r.sup_j,
                r.theta_min,
                r.mass_residual,
                r.energy_drift,
                r.margin,
                r.ratio_e,
                r.ratio_sup_j,
                r.ratio_inf_j,
            ]
            .iter()
            .map(|&x| fmt(x)),
        );
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

#[derive(Debug, Serialize)]
struct ScheduleFile<'a> {
    config_hash: &'a str,
    #[serde(flatten)]
    schedule: &'a Schedule,
}

pub fn write_schedule(path: &Path, schedule: &Schedule, hash: &str) -> Result<()> {
    let file = ScheduleFile {
        config_hash: hash,
        schedule,
    };
    let text = serde_json::to_string_pretty(&file).map_err(|e| Error::InvalidArgument {
        reason: format!("schedule serialization failed: {e}"),
    })?;
    write_atomic(path, format!("{text}\n").as_bytes())
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(bytes)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energetics::bound_envelope;
    use crate::grid::build_grid;
    use crate::model::default_initial_data;
    use crate::solver::{run, SolverConfig};

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = config_hash("{\"p\":1.5}");
        let b = config_hash("{\"p\":1.5}");
        let c = config_hash("{\"p\":1.6}");
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn snapshot_name_format() {
        assert_eq!(snapshot_name(0.1), "snap_0.100000.csv");
        assert_eq!(snapshot_name(0.0), "snap_0.000000.csv");
    }

    #[test]
    fn diagnostics_bytes_deterministic() {
        let params = FluidParams::default();
        let g = build_grid(10.0, 101).unwrap();
        let initial = default_initial_data(&params, &g).unwrap();
        let cfg = SolverConfig {
            dt: 1e-3,
            ..SolverConfig::default()
        };
        let t_grid: Vec<f64> = (0..64).map(|i| 0.02 * i as f64 / 63.0).collect();
        let write_once = |dir: &Path| -> Vec<u8> {
            let traj = run(&initial, &cfg, &params, 0.01);
            assert!(traj.failure.is_none());
            let env = bound_envelope(&initial, &params, &t_grid).unwrap();
            let (rows, _) = diagnostics_rows(&traj, &initial, &params, &env).unwrap();
            let hash = config_hash("fixed config");
            let path = dir.join("diagnostics.csv");
            write_diagnostics(&path, &rows, &hash).unwrap();
            std::fs::read(&path).unwrap()
        };
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        let b1 = write_once(d1.path());
        let b2 = write_once(d2.path());
        assert!(!b1.is_empty());
        assert_eq!(b1, b2);
        let text = String::from_utf8(b1).unwrap();
        assert!(text.starts_with("# config_hash="));
        assert!(text.lines().nth(1).unwrap().starts_with("t,E,D,"));
    }

    #[test]
    fn snapshot_round_trip_precision() {
        let params = FluidParams::default();
        let g = build_grid(5.0, 51).unwrap();
        let initial = default_initial_data(&params, &g).unwrap();
        let state = State {
            t: 0.0,
            j: initial.j0.clone(),
            rho: initial.rho0.clone(),
            v: initial.v0.clone(),
            theta: initial.theta0.clone(),
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(snapshot_name(0.0));
        write_snapshot(&path, &state, &initial, &config_hash("c")).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines().skip(2);
        let first: Vec<f64> = lines
            .next()
            .unwrap()
            .split(',')
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(first[0], initial.grid.nodes[0]);
        assert_eq!(first[3], initial.v0[0]);
        assert_eq!(first[4], initial.theta0[0]);
    }
}
