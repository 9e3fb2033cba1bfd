//! Run configuration: a flat key-value text format with section-prefixed
//! keys (`grid.nx`, `pulse.preset`, ...). Parsing is strict: unknown keys
//! are rejected and every violation is reported with its key path, not just
//! the first.

use crate::evolution::SchemeOrder;
use crate::lattice::Axis;
use crate::operators::MATCHED_POTENTIAL_SCALE;
use crate::pulse::ScenarioPreset;
use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

/// Desk-scale default: production lengths scaled to a 256-class grid.
pub const DEFAULT_PULSE_SCALE: f64 = 0.25;
pub const DEFAULT_INTERFACE_WIDTH: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigErrors(pub Vec<ConfigError>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.0 {
            writeln!(f, "config: {}: {}", e.key, e.message)?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

/// Pulse shape: a named preset with a length scale, or explicit widths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseShape {
    Preset { preset: ScenarioPreset, scale: f64 },
    Explicit { zeta_w: f64, chi_w: f64, gamma_w: f64 },
}

impl PulseShape {
    pub fn widths(&self) -> (f64, f64, f64) {
        match *self {
            PulseShape::Preset { preset, scale } => {
                let (a, b, c) = preset.widths();
                (a * scale, b * scale, c * scale)
            }
            PulseShape::Explicit {
                zeta_w,
                chi_w,
                gamma_w,
            } => (zeta_w, chi_w, gamma_w),
        }
    }
}

/// Fully validated scenario configuration. Seed-free: a config determines
/// the run bit-exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub nx: usize,
    pub ny: usize,
    pub epsilon: f64,
    pub order: SchemeOrder,
    pub n1: f64,
    pub n2: f64,
    pub interface_axis: Axis,
    pub interface_fraction: f64,
    pub interface_width: f64,
    pub pulse: PulseShape,
    pub theta_deg: f64,
    /// lab-frame packet center; None selects the default placement in the
    /// middle of medium 1
    pub center: Option<(f64, f64)>,
    pub amplitude: f64,
    pub centered_carrier: bool,
    pub potential_scale: f64,
    pub steps: u64,
    pub cadence: u64,
    pub out_dir: PathBuf,
}

impl RunConfig {
    /// Default packet center: middle of medium 1 along the interface
    /// normal; for oblique incidence the center starts high so the packet
    /// drifts toward the middle while approaching the interface.
    pub fn default_center(&self) -> (f64, f64) {
        let frac = self.interface_fraction;
        match self.interface_axis {
            Axis::X => {
                let x = 0.5 * frac * self.nx as f64;
                let y = if self.theta_deg == 0.0 {
                    0.5 * self.ny as f64
                } else {
                    0.7 * self.ny as f64
                };
                (x, y)
            }
            Axis::Y => {
                let y = 0.5 * frac * self.ny as f64;
                let x = if self.theta_deg == 0.0 {
                    0.5 * self.nx as f64
                } else {
                    0.7 * self.nx as f64
                };
                (x, y)
            }
        }
    }

    pub fn resolved_center(&self) -> (f64, f64) {
        self.center.unwrap_or_else(|| self.default_center())
    }

    /// Canonical echo of every effective setting, for the run manifest.
    pub fn echo(&self) -> String {
        let (zw, cw, gw) = self.pulse.widths();
        let (cx, cy) = self.resolved_center();
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(&v);
            s.push('\n');
        };
        kv("grid.nx", self.nx.to_string());
        kv("grid.ny", self.ny.to_string());
        kv("scheme.epsilon", format!("{}", self.epsilon));
        kv(
            "scheme.order",
            match self.order {
                SchemeOrder::Second => "2".into(),
                SchemeOrder::First => "1".into(),
            },
        );
        kv("medium.n1", format!("{}", self.n1));
        kv("medium.n2", format!("{}", self.n2));
        kv("interface.axis", self.interface_axis.label().into());
        kv("interface.fraction", format!("{}", self.interface_fraction));
        kv("interface.width", format!("{}", self.interface_width));
        kv("pulse.zeta_w", format!("{zw}"));
        kv("pulse.chi_w", format!("{cw}"));
        kv("pulse.gamma_w", format!("{gw}"));
        kv("pulse.theta_deg", format!("{}", self.theta_deg));
        kv("pulse.center_x", format!("{cx}"));
        kv("pulse.center_y", format!("{cy}"));
        kv("pulse.amplitude", format!("{}", self.amplitude));
        kv("pulse.centered_carrier", format!("{}", self.centered_carrier));
        kv("potential.scale", format!("{}", self.potential_scale));
        kv("run.steps", self.steps.to_string());
        kv("run.cadence", self.cadence.to_string());
        kv("output.dir", self.out_dir.display().to_string());
        s
    }
}

const KNOWN_KEYS: &[&str] = &[
    "grid.nx",
    "grid.ny",
    "scheme.epsilon",
    "scheme.order",
    "medium.n1",
    "medium.n2",
    "interface.axis",
    "interface.fraction",
    "interface.width",
    "pulse.preset",
    "pulse.scale",
    "pulse.zeta_w",
    "pulse.chi_w",
    "pulse.gamma_w",
    "pulse.theta_deg",
    "pulse.center_x",
    "pulse.center_y",
    "pulse.amplitude",
    "pulse.centered_carrier",
    "potential.scale",
    "run.steps",
    "run.cadence",
    "output.dir",
];

struct Parser {
    kv: BTreeMap<String, String>,
    errors: Vec<ConfigError>,
}

impl Parser {
    fn err(&mut self, key: &str, message: impl Into<String>) {
        self.errors.push(ConfigError {
            key: key.to_string(),
            message: message.into(),
        });
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.kv.remove(key)
    }

    fn parse<T: std::str::FromStr>(&mut self, key: &str, what: &str) -> Option<T> {
        let raw = self.take(key)?;
        match raw.parse::<T>() {
            Ok(v) => Some(v),
            Err(_) => {
                self.err(key, format!("expected {what}, got '{raw}'"));
                None
            }
        }
    }

    fn require<T: std::str::FromStr>(&mut self, key: &str, what: &str) -> Option<T> {
        if !self.kv.contains_key(key) {
            self.err(key, "required key is missing");
            return None;
        }
        self.parse(key, what)
    }
}

/// Parse and validate a config text. On failure, returns every violation.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigErrors> {
    let mut kv = BTreeMap::new();
    let mut errors = Vec::new();
    for (lineno, raw_line) in text.lines().enumerate() {
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            errors.push(ConfigError {
                key: format!("line {}", lineno + 1),
                message: format!("expected 'key = value', got '{line}'"),
            });
            continue;
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            errors.push(ConfigError {
                key: key.clone(),
                message: "unknown key".to_string(),
            });
            continue;
        }
        if kv.insert(key.clone(), value).is_some() {
            errors.push(ConfigError {
                key,
                message: "duplicate key".to_string(),
            });
        }
    }

    let mut p = Parser { kv, errors };

    let nx: Option<usize> = p.require("grid.nx", "a positive integer");
    let ny: Option<usize> = p.require("grid.ny", "a positive integer");
    let epsilon: Option<f64> = p.require("scheme.epsilon", "a real in (0, 0.5]");
    let n1: Option<f64> = p.require("medium.n1", "a positive real");
    let n2: Option<f64> = p.require("medium.n2", "a positive real");
    let theta: Option<f64> = p.require("pulse.theta_deg", "degrees in [0, 90)");
    let steps: Option<u64> = p.require("run.steps", "a nonnegative integer");
    let cadence: Option<u64> = p.require("run.cadence", "a positive integer");
    let out_dir: Option<String> = p.require("output.dir", "a path");

    let order = match p.parse::<u32>("scheme.order", "1 or 2") {
        None => Some(SchemeOrder::Second),
        Some(1) => Some(SchemeOrder::First),
        Some(2) => Some(SchemeOrder::Second),
        Some(other) => {
            p.err("scheme.order", format!("expected 1 or 2, got {other}"));
            None
        }
    };

    let axis = match p.take("interface.axis") {
        None => Some(Axis::X),
        Some(v) if v == "x" => Some(Axis::X),
        Some(v) if v == "y" => Some(Axis::Y),
        Some(v) => {
            p.err("interface.axis", format!("expected 'x' or 'y', got '{v}'"));
            None
        }
    };
    let fraction = p
        .parse::<f64>("interface.fraction", "a real in (0,1)")
        .unwrap_or(0.5);
    let width = p
        .parse::<f64>("interface.width", "a nonnegative real")
        .unwrap_or(DEFAULT_INTERFACE_WIDTH);

    // pulse shape: explicit widths win over a preset
    let preset_name = p.take("pulse.preset");
    let scale = p.parse::<f64>("pulse.scale", "a positive real");
    let zw = p.parse::<f64>("pulse.zeta_w", "a positive real");
    let cw = p.parse::<f64>("pulse.chi_w", "a positive real");
    let gw = p.parse::<f64>("pulse.gamma_w", "a positive real");
    let pulse = match (zw, cw, gw) {
        (Some(zeta_w), Some(chi_w), Some(gamma_w)) => {
            if preset_name.is_some() {
                p.err(
                    "pulse.preset",
                    "give either a preset or explicit widths, not both",
                );
            }
            Some(PulseShape::Explicit {
                zeta_w,
                chi_w,
                gamma_w,
            })
        }
        (None, None, None) => {
            let preset = match preset_name.as_deref() {
                None => Some(ScenarioPreset::Burst),
                Some(name) => match ScenarioPreset::from_name(name) {
                    Some(pr) => Some(pr),
                    None => {
                        p.err(
                            "pulse.preset",
                            format!("unknown preset '{name}' (burst, thin_long, finite)"),
                        );
                        None
                    }
                },
            };
            preset.map(|preset| PulseShape::Preset {
                preset,
                scale: scale.unwrap_or(DEFAULT_PULSE_SCALE),
            })
        }
        _ => {
            p.err(
                "pulse.zeta_w",
                "explicit pulse widths need all of zeta_w, chi_w, gamma_w",
            );
            None
        }
    };

    let center_x = p.parse::<f64>("pulse.center_x", "a real");
    let center_y = p.parse::<f64>("pulse.center_y", "a real");
    let center = match (center_x, center_y) {
        (Some(x), Some(y)) => Some(Some((x, y))),
        (None, None) => Some(None),
        _ => {
            p.err(
                "pulse.center_x",
                "give both pulse.center_x and pulse.center_y or neither",
            );
            None
        }
    };
    let amplitude = p.parse::<f64>("pulse.amplitude", "a real").unwrap_or(1.0);
    let centered_carrier = match p.take("pulse.centered_carrier") {
        None => Some(false),
        Some(v) if v == "true" => Some(true),
        Some(v) if v == "false" => Some(false),
        Some(v) => {
            p.err(
                "pulse.centered_carrier",
                format!("expected true or false, got '{v}'"),
            );
            None
        }
    };
    let potential_scale = p
        .parse::<f64>("potential.scale", "a real")
        .unwrap_or(MATCHED_POTENTIAL_SCALE);

    // range validation with key paths
    if let Some(v) = epsilon {
        if !(v > 0.0 && v <= 0.5) {
            p.err("scheme.epsilon", format!("must lie in (0, 0.5], got {v}"));
        }
    }
    for (key, val) in [("medium.n1", n1), ("medium.n2", n2)] {
        if let Some(v) = val {
            if !(v > 0.0) {
                p.err(key, format!("must be positive, got {v}"));
            }
        }
    }
    if let Some(v) = theta {
        if !(0.0..90.0).contains(&v) {
            p.err(
                "pulse.theta_deg",
                format!("must lie in [0, 90) degrees, got {v}"),
            );
        }
    }
    if !(fraction > 0.0 && fraction < 1.0) {
        p.err(
            "interface.fraction",
            format!("must lie in (0,1), got {fraction}"),
        );
    }
    if width < 0.0 {
        p.err(
            "interface.width",
            format!("must be nonnegative, got {width}"),
        );
    }
    if let Some(shape) = &pulse {
        let (a, b, c) = shape.widths();
        for (key, v) in [
            ("pulse.zeta_w", a),
            ("pulse.chi_w", b),
            ("pulse.gamma_w", c),
        ] {
            if !(v > 0.0) {
                p.err(key, format!("must be positive, got {v}"));
            }
        }
    }
    if let (Some(v), true) = (nx, nx.map(|v| v < 8).unwrap_or(false)) {
        p.err("grid.nx", format!("must be at least 8, got {v}"));
    }
    if let (Some(v), true) = (ny, ny.map(|v| v < 8).unwrap_or(false)) {
        p.err("grid.ny", format!("must be at least 8, got {v}"));
    }
    if cadence == Some(0) {
        p.err("run.cadence", "must be at least 1");
    }
    if !p.kv.is_empty() {
        let leftover: Vec<String> = p.kv.keys().cloned().collect();
        for key in leftover {
            p.err(&key, "internal: unconsumed key");
        }
    }

    if !p.errors.is_empty() {
        return Err(ConfigErrors(p.errors));
    }
    Ok(RunConfig {
        nx: nx.unwrap(),
        ny: ny.unwrap(),
        epsilon: epsilon.unwrap(),
        order: order.unwrap(),
        n1: n1.unwrap(),
        n2: n2.unwrap(),
        interface_axis: axis.unwrap(),
        interface_fraction: fraction,
        interface_width: width,
        pulse: pulse.unwrap(),
        theta_deg: theta.unwrap(),
        center: center.unwrap(),
        amplitude,
        centered_carrier: centered_carrier.unwrap(),
        potential_scale,
        steps: steps.unwrap(),
        cadence: cadence.unwrap(),
        out_dir: PathBuf::from(out_dir.unwrap()),
    })
}
