//! Shared scenario drivers and measurement helpers for the acceptance
//! suite. The two oblique scattering runs are expensive, so they execute
//! once per process and several criteria read the cached outcome.

use qla2d::config::parse_config;
use qla2d::diagnostics::{energy_centroid, region_energy, total_energy, RegionMask};
use qla2d::lattice::QubitField;
use qla2d::runner::build_scenario;
use std::sync::OnceLock;

/// Small deterministic generator for test fields and angles.
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg(seed.wrapping_mul(0x9E3779B97F4A7C15).max(1))
    }

    pub fn uniform(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// Desk-scale analogue of the production oblique run: 256^2 grid,
/// n1=1 -> n2=2 at 25 deg with the burst pulse scaled by 1/4.
pub fn desk_fig1a_config(steps: u64, cadence: u64) -> String {
    format!(
        "\
grid.nx = 256
grid.ny = 256
scheme.epsilon = 0.25
medium.n1 = 1
medium.n2 = 2
interface.axis = x
interface.fraction = 0.5
interface.width = 2.0
pulse.preset = burst
pulse.scale = 0.25
pulse.theta_deg = 25
run.steps = {steps}
run.cadence = {cadence}
output.dir = out
"
    )
}

/// Measured outcome of a scattering run.
#[derive(Debug, Clone, Copy)]
pub struct ScatterOutcome {
    pub reflected_fraction: f64,
    pub transmitted_fraction: f64,
    /// propagation direction of the transmitted pulse from the centroid
    /// track, degrees from the interface normal
    pub track_angle_deg: f64,
    /// transmitted carrier wavelength over the incident carrier wavelength
    pub wavelength_ratio: f64,
    /// energy fraction deep inside medium 2 (beyond the evanescent zone)
    pub far_transmitted_fraction: f64,
    pub energy_drift: f64,
}

struct ScatterSetup {
    nx: usize,
    ny: usize,
    n1: f64,
    n2: f64,
    theta_deg: f64,
    zeta_w: f64,
    chi_w: f64,
    gamma_w: f64,
    center: (f64, f64),
    steps: u64,
    track_from: u64,
    /// half-span of the zero-crossing sampling window, sites
    wavelength_span: f64,
}

fn run_scatter(setup: &ScatterSetup) -> ScatterOutcome {
    let text = format!(
        "\
grid.nx = {nx}
grid.ny = {ny}
scheme.epsilon = 0.25
medium.n1 = {n1}
medium.n2 = {n2}
interface.axis = x
interface.fraction = 0.5
interface.width = 0.5
pulse.zeta_w = {zw}
pulse.chi_w = {cw}
pulse.gamma_w = {gw}
pulse.theta_deg = {th}
pulse.center_x = {cx}
pulse.center_y = {cy}
run.steps = {steps}
run.cadence = 25
output.dir = unused
",
        nx = setup.nx,
        ny = setup.ny,
        n1 = setup.n1,
        n2 = setup.n2,
        zw = setup.zeta_w,
        cw = setup.chi_w,
        gw = setup.gamma_w,
        th = setup.theta_deg,
        cx = setup.center.0,
        cy = setup.center.1,
        steps = setup.steps,
    );
    let cfg = parse_config(&text).unwrap();
    let scenario = build_scenario(&cfg).unwrap();
    let mut state = scenario.state;
    let geom = scenario.geom;

    let mid = setup.nx / 2;
    // inner medium-2 mask, clear of the interface stencil
    let inner2 = RegionMask::from_fn(geom, |i, _| i >= mid + 12);
    let far2 = RegionMask::from_fn(geom, |i, _| i >= mid + 40);
    let region1 = scenario.region1;

    let e0 = total_energy(&state.field);
    let mut drift = 0.0f64;
    let mut track: Vec<(f64, f64, f64)> = Vec::new();
    state
        .run(setup.steps, 25, |s| {
            let e = total_energy(&s.field);
            drift = drift.max((e / e0 - 1.0).abs());
            if s.t >= setup.track_from {
                if let Ok((cx, cy)) = energy_centroid(&s.field, &inner2) {
                    track.push((s.t as f64, cx, cy));
                }
            }
            Ok(())
        })
        .unwrap();

    let e_total = total_energy(&state.field);
    let reflected = region_energy(&state.field, &region1) / e_total;
    let transmitted = region_energy(&state.field, &region1.complement()) / e_total;
    let far = region_energy(&state.field, &far2) / e_total;

    // least-squares velocity of the late-time transmitted centroid; the
    // TIR run collects no track and reports NaN here by design
    let (track_angle_deg, ratio) = if track.len() >= 4 {
        let (sx, sy) = fit_velocity(&track);
        let angle = (-sy).atan2(sx).to_degrees();
        let ratio = match energy_centroid(&state.field, &inner2) {
            Ok((cx, cy)) => {
                let dir = angle.to_radians();
                zero_crossing_wavelength(
                    &state.field,
                    cx,
                    cy,
                    dir.cos(),
                    -dir.sin(),
                    setup.wavelength_span,
                )
                .map(|lam| lam / setup.gamma_w)
                .unwrap_or(f64::NAN)
            }
            Err(_) => f64::NAN,
        };
        (angle, ratio)
    } else {
        (f64::NAN, f64::NAN)
    };

    ScatterOutcome {
        reflected_fraction: reflected,
        transmitted_fraction: transmitted,
        track_angle_deg,
        wavelength_ratio: ratio,
        far_transmitted_fraction: far,
        energy_drift: drift,
    }
}

fn fit_velocity(track: &[(f64, f64, f64)]) -> (f64, f64) {
    assert!(track.len() >= 4, "too few centroid samples: {}", track.len());
    let n = track.len() as f64;
    let mt = track.iter().map(|p| p.0).sum::<f64>() / n;
    let mx = track.iter().map(|p| p.1).sum::<f64>() / n;
    let my = track.iter().map(|p| p.2).sum::<f64>() / n;
    let den: f64 = track.iter().map(|p| (p.0 - mt) * (p.0 - mt)).sum();
    let sx: f64 = track.iter().map(|p| (p.0 - mt) * (p.1 - mx)).sum::<f64>() / den;
    let sy: f64 = track.iter().map(|p| (p.0 - mt) * (p.2 - my)).sum::<f64>() / den;
    (sx, sy)
}

fn bilinear(field: &QubitField, c: usize, x: f64, y: f64) -> f64 {
    let (i0, j0) = (x.floor(), y.floor());
    let (fx, fy) = (x - i0, y - j0);
    let (i0, j0) = (i0 as isize, j0 as isize);
    (1.0 - fx) * (1.0 - fy) * field.get(c, i0, j0)
        + fx * (1.0 - fy) * field.get(c, i0 + 1, j0)
        + (1.0 - fx) * fy * field.get(c, i0, j0 + 1)
        + fx * fy * field.get(c, i0 + 1, j0 + 1)
}

/// Dominant carrier wavelength of H_z along a line: twice the median
/// spacing of consecutive zero crossings within +-`halfspan` of the center.
pub fn zero_crossing_wavelength(
    field: &QubitField,
    cx: f64,
    cy: f64,
    dirx: f64,
    diry: f64,
    halfspan: f64,
) -> Option<f64> {
    let samples = (8.0 * halfspan) as usize + 1;
    let mut crossings = Vec::new();
    let mut prev_t = -halfspan;
    let mut prev_v = bilinear(field, 5, cx + prev_t * dirx, cy + prev_t * diry);
    for s in 1..samples {
        let t = -halfspan + 2.0 * halfspan * s as f64 / (samples - 1) as f64;
        let v = bilinear(field, 5, cx + t * dirx, cy + t * diry);
        if prev_v != 0.0 && prev_v * v < 0.0 {
            crossings.push(prev_t + (t - prev_t) * prev_v / (prev_v - v));
        }
        prev_t = t;
        prev_v = v;
    }
    if crossings.len() < 4 {
        return None;
    }
    let mut spacings: Vec<f64> = crossings.windows(2).map(|w| w[1] - w[0]).collect();
    spacings.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Some(2.0 * spacings[spacings.len() / 2])
}

static SCATTER_1_TO_2: OnceLock<ScatterOutcome> = OnceLock::new();
static SCATTER_2_TO_1: OnceLock<ScatterOutcome> = OnceLock::new();
static SCATTER_TIR_35: OnceLock<ScatterOutcome> = OnceLock::new();

/// Burst-shaped pulse from vacuum into n=2 at 25 deg.
pub fn scatter_1_to_2() -> ScatterOutcome {
    *SCATTER_1_TO_2.get_or_init(|| {
        run_scatter(&ScatterSetup {
            nx: 1024,
            ny: 512,
            n1: 1.0,
            n2: 2.0,
            theta_deg: 25.0,
            zeta_w: 32.0,
            chi_w: 120.0,
            gamma_w: 32.0,
            center: (256.0, 360.0),
            steps: 2600,
            track_from: 1900,
            wavelength_span: 24.0,
        })
    })
}

/// Burst-shaped pulse from n=2 into vacuum at 25 deg (below the 30 deg
/// critical angle).
pub fn scatter_2_to_1() -> ScatterOutcome {
    *SCATTER_2_TO_1.get_or_init(|| {
        run_scatter(&ScatterSetup {
            nx: 768,
            ny: 768,
            n1: 2.0,
            n2: 1.0,
            theta_deg: 25.0,
            zeta_w: 20.0,
            chi_w: 80.0,
            gamma_w: 20.0,
            center: (192.0, 537.0),
            steps: 3400,
            track_from: 2500,
            wavelength_span: 60.0,
        })
    })
}

/// Same geometry beyond the critical angle: expect total internal
/// reflection with only evanescent penetration.
pub fn scatter_tir_35() -> ScatterOutcome {
    *SCATTER_TIR_35.get_or_init(|| {
        run_scatter(&ScatterSetup {
            nx: 768,
            ny: 768,
            n1: 2.0,
            n2: 1.0,
            theta_deg: 35.0,
            zeta_w: 20.0,
            chi_w: 80.0,
            gamma_w: 20.0,
            center: (192.0, 537.0),
            steps: 3400,
            track_from: u64::MAX, // no track needed
            wavelength_span: 60.0,
        })
    })
}
