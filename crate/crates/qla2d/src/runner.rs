//! Config-driven scenario execution: builds the medium and the initial
//! packet, drives the run, and emits the ledger CSV, field snapshots,
//! H_z heatmaps and a run manifest. All file writes go through a
//! write-to-temp-then-rename so a failed run never leaves a truncated
//! artifact under the final name.

use crate::config::RunConfig;
use crate::diagnostics::{total_energy, EnergyLedger, RegionMask};
use crate::error::{QlaError, Result};
use crate::evolution::{build_schedule_with_order, RunState};
use crate::heatmap::{render_pgm, HeatmapMode};
use crate::lattice::{write_scalar_snapshot, DielectricMap, LatticeGeometry};
use crate::operators::EpsilonParameter;
use crate::pulse::{init_pulse, PulseSpec};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Environment variable overriding `output.dir`.
pub const OUT_DIR_ENV: &str = "QLA2D_OUT_DIR";

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    pub steps: u64,
    pub initial_energy: f64,
    pub final_energy: f64,
    pub max_energy_drift: f64,
    pub snapshots: usize,
    pub elapsed_seconds: f64,
}

pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name().map(|s| s.to_string_lossy()).unwrap_or_default()
    ));
    fs::write(&tmp, bytes).map_err(|e| QlaError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| QlaError::io(path, e))?;
    Ok(())
}

/// Assemble the pieces a scenario needs. Shared between the runner and the
/// test suites so acceptance runs exercise the same construction path.
pub struct Scenario {
    pub geom: LatticeGeometry,
    pub map: DielectricMap,
    pub region1: RegionMask,
    pub state: RunState,
}

pub fn build_scenario(cfg: &RunConfig) -> Result<Scenario> {
    let geom = LatticeGeometry::new(cfg.nx, cfg.ny)?;
    let mut map = DielectricMap::uniform(geom, 1.0)?;
    map.set_halfspace(
        cfg.interface_axis,
        cfg.interface_fraction,
        cfg.n1,
        cfg.n2,
        cfg.interface_width,
    )?;
    let (zw, cw, gw) = cfg.pulse.widths();
    let (cx, cy) = cfg.resolved_center();
    let mut spec = PulseSpec::new(zw, cw, gw, cfg.theta_deg)?
        .centered_at_lab(cx, cy)
        .with_amplitude(cfg.amplitude);
    spec.centered_carrier = cfg.centered_carrier;
    let field = init_pulse(geom, &map, &spec)?;
    let schedule = build_schedule_with_order(
        EpsilonParameter::new(cfg.epsilon)?,
        cfg.order,
    );
    let state = RunState::new(field, &map, schedule, cfg.potential_scale)?;
    let region1 = RegionMask::halfspace(geom, cfg.interface_axis, cfg.interface_fraction);
    Ok(Scenario {
        geom,
        map,
        region1,
        state,
    })
}

fn out_dir(cfg: &RunConfig) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => cfg.out_dir.clone(),
    }
}

/// Execute a configured scenario, writing artifacts under the output
/// directory: `ledger.csv`, per-cadence `snap_tNNNNNN.qla` (all six
/// components), `hz_tNNNNNN.qla` (derived H_z), `hz_tNNNNNN.pgm`
/// (positive-clip heatmap), and `manifest.txt`.
pub fn run_scenario(cfg: &RunConfig) -> Result<RunSummary> {
    let started = Instant::now();
    let dir = out_dir(cfg);
    fs::create_dir_all(&dir).map_err(|e| QlaError::io(&dir, e))?;

    let Scenario {
        geom,
        map,
        region1,
        mut state,
    } = build_scenario(cfg)?;

    let mut ledger = EnergyLedger::new();
    let mut snapshots = 0usize;
    let initial_energy = total_energy(&state.field);
    let mut max_drift = 0.0f64;

    {
        let ledger = &mut ledger;
        let snapshots = &mut snapshots;
        let max_drift = &mut max_drift;
        let dir = &dir;
        let map = &map;
        let region1 = &region1;
        state.run(cfg.steps, cfg.cadence, move |s| {
            ledger.record(s.t, &s.field, map, region1);
            let row = *ledger.rows().last().unwrap();
            *max_drift = (row.e_total / initial_energy - 1.0).abs().max(*max_drift);

            let mut snap = Vec::new();
            s.field
                .write_snapshot(&mut snap, s.t)
                .map_err(|e| QlaError::io(dir.join("snapshot"), e))?;
            atomic_write(&dir.join(format!("snap_t{:06}.qla", s.t)), &snap)?;

            let hz = s.field.component(5);
            let mut hz_snap = Vec::new();
            write_scalar_snapshot(&mut hz_snap, geom, hz, s.t)
                .map_err(|e| QlaError::io(dir.join("hz"), e))?;
            atomic_write(&dir.join(format!("hz_t{:06}.qla", s.t)), &hz_snap)?;

            let pgm = render_pgm(geom, hz, HeatmapMode::PositiveClip);
            atomic_write(&dir.join(format!("hz_t{:06}.pgm", s.t)), &pgm)?;
            *snapshots += 1;
            Ok(())
        })?;
    }

    let mut csv = Vec::new();
    ledger
        .write_csv(&mut csv)
        .map_err(|e| QlaError::io(dir.join("ledger.csv"), e))?;
    atomic_write(&dir.join("ledger.csv"), &csv)?;

    let final_energy = total_energy(&state.field);
    let elapsed = started.elapsed().as_secs_f64();
    let manifest = format!(
        "qla2d {}\n\n[config]\n{}\n[result]\nsteps = {}\ninitial_energy = {:e}\nfinal_energy = {:e}\nmax_energy_drift = {:e}\nsnapshots = {}\nelapsed_seconds = {:.3}\n",
        env!("CARGO_PKG_VERSION"),
        cfg.echo(),
        state.t,
        initial_energy,
        final_energy,
        max_drift,
        snapshots,
        elapsed,
    );
    atomic_write(&dir.join("manifest.txt"), manifest.as_bytes())?;

    Ok(RunSummary {
        out_dir: dir,
        steps: state.t,
        initial_energy,
        final_energy,
        max_energy_drift: max_drift,
        snapshots,
        elapsed_seconds: elapsed,
    })
}
