//! Scenario runner CLI.
//!
//! Subcommands:
//!   run <config>            execute a scenario config
//!   presets                 list the built-in pulse presets
//!   render <snapshot>       render a snapshot to PGM
//!
//! Exit codes: 0 ok, 1 configuration error, 2 runtime error.

use qla2d::config::parse_config;
use qla2d::heatmap::{render_pgm, HeatmapMode};
use qla2d::lattice::read_any_snapshot;
use qla2d::pulse::ScenarioPreset;
use qla2d::runner::{atomic_write, run_scenario, OUT_DIR_ENV};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const USAGE: &str = "\
usage: qla2d [--threads N] <command> [args]

commands:
  run <config-file>                 run a scenario
  presets                           list pulse presets
  render <snapshot> [options]       render a snapshot to PGM

render options:
  --component <hz|q0..q5>   component to render (default hz)
  --signed                  signed gray mapping instead of positive-clip
  --out <file>              output path (default: snapshot path + .pgm)

environment:
  QLA2D_OUT_DIR             overrides output.dir from the config
  QLA2D_THREADS             worker thread count (same as --threads)
";

const EXIT_CONFIG: u8 = 1;
const EXIT_RUNTIME: u8 = 2;

fn main() -> ExitCode {
    let mut args: Vec<String> = std::env::args().skip(1).collect();

    let mut threads: Option<usize> = std::env::var("QLA2D_THREADS")
        .ok()
        .and_then(|v| v.parse().ok());
    if let Some(pos) = args.iter().position(|a| a == "--threads") {
        if pos + 1 >= args.len() {
            eprintln!("--threads needs a value");
            return ExitCode::from(EXIT_CONFIG);
        }
        match args[pos + 1].parse() {
            Ok(n) => threads = Some(n),
            Err(_) => {
                eprintln!("--threads: expected an integer, got '{}'", args[pos + 1]);
                return ExitCode::from(EXIT_CONFIG);
            }
        }
        args.drain(pos..=pos + 1);
    }
    if let Some(n) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("thread pool: {e}");
            return ExitCode::from(EXIT_RUNTIME);
        }
    }

    match args.first().map(String::as_str) {
        Some("run") => cmd_run(&args[1..]),
        Some("presets") => cmd_presets(),
        Some("render") => cmd_render(&args[1..]),
        Some("--help") | Some("-h") | None => {
            print!("{USAGE}");
            ExitCode::SUCCESS
        }
        Some(other) => {
            eprintln!("unknown command '{other}'\n{USAGE}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn cmd_run(args: &[String]) -> ExitCode {
    let Some(path) = args.first() else {
        eprintln!("run: missing config file\n{USAGE}");
        return ExitCode::from(EXIT_CONFIG);
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{path}: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(errors) => {
            eprint!("{errors}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if std::env::var_os(OUT_DIR_ENV).is_some() {
        eprintln!("note: output directory overridden by {OUT_DIR_ENV}");
    }
    match run_scenario(&cfg) {
        Ok(summary) => {
            println!(
                "completed {} steps in {:.1}s: {} snapshots, max energy drift {:.3e}",
                summary.steps, summary.elapsed_seconds, summary.snapshots, summary.max_energy_drift
            );
            println!("artifacts in {}", summary.out_dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("run failed: {e}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}

fn cmd_presets() -> ExitCode {
    println!("{:<10} {:>7} {:>7} {:>8}", "name", "zeta_w", "chi_w", "gamma_w");
    for preset in ScenarioPreset::ALL {
        let (zw, cw, gw) = preset.widths();
        println!("{:<10} {:>7} {:>7} {:>8}", preset.name(), zw, cw, gw);
    }
    ExitCode::SUCCESS
}

fn cmd_render(args: &[String]) -> ExitCode {
    let mut snapshot: Option<&str> = None;
    let mut component = "hz".to_string();
    let mut mode = HeatmapMode::PositiveClip;
    let mut out: Option<PathBuf> = None;
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--component" => match it.next() {
                Some(c) => component = c.clone(),
                None => {
                    eprintln!("--component needs a value");
                    return ExitCode::from(EXIT_CONFIG);
                }
            },
            "--signed" => mode = HeatmapMode::Signed,
            "--out" => match it.next() {
                Some(p) => out = Some(PathBuf::from(p)),
                None => {
                    eprintln!("--out needs a value");
                    return ExitCode::from(EXIT_CONFIG);
                }
            },
            other if snapshot.is_none() => snapshot = Some(other),
            other => {
                eprintln!("render: unexpected argument '{other}'");
                return ExitCode::from(EXIT_CONFIG);
            }
        }
    }
    let Some(snap_path) = snapshot else {
        eprintln!("render: missing snapshot path\n{USAGE}");
        return ExitCode::from(EXIT_CONFIG);
    };
    let comp_index = match component.as_str() {
        "hz" => 5,
        "q0" => 0,
        "q1" => 1,
        "q2" => 2,
        "q3" => 3,
        "q4" => 4,
        "q5" => 5,
        other => {
            eprintln!("render: unknown component '{other}'");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let file = match std::fs::File::open(snap_path) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{snap_path}: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let (geom, comps, t) = match read_any_snapshot(file, Path::new(snap_path)) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_RUNTIME);
        }
    };
    let data = if comps.len() == 1 {
        &comps[0]
    } else if comp_index < comps.len() {
        &comps[comp_index]
    } else {
        eprintln!(
            "render: snapshot has {} components, cannot take index {comp_index}",
            comps.len()
        );
        return ExitCode::from(EXIT_CONFIG);
    };
    let pgm = render_pgm(geom, data, mode);
    let out_path = out.unwrap_or_else(|| PathBuf::from(format!("{snap_path}.pgm")));
    match atomic_write(&out_path, &pgm) {
        Ok(()) => {
            println!(
                "rendered t={t} {}x{} {} -> {}",
                geom.nx(),
                geom.ny(),
                component,
                out_path.display()
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
