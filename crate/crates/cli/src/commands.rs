use std::fs;
use std::io::Write;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use crlh_core::checks::run_checks;
use crlh_core::config::{load_config, load_profile, OutputFormat, RunConfig};
use crlh_core::dispersion::{dispersion_sweep, scan_profile_from};
use crlh_core::geometry::units;
use crlh_core::output::{self, json_num, to_json_string};
use crlh_core::pipeline::{calibrate_report, cell_for_config, idc_report, run_sweep, sweep_summary};
use crlh_core::radiation::{pattern_at, theta_grid, Leakage, DEFAULT_THETA_STEP_DEG};

use crate::{CellAction, Cli, Command, GlobalArgs};

pub fn resolve_config(g: &GlobalArgs) -> Result<RunConfig> {
    let mut config = match &g.config {
        Some(path) => load_config(path)?,
        None => load_profile(&g.profile)?,
    };
    if let Some(n) = g.fingers {
        config = config.with_fingers(n)?;
    }
    if let Some(f) = g.freq_start {
        config.sweep.f_start = f * units::GHZ;
    }
    if let Some(f) = g.freq_stop {
        config.sweep.f_stop = f * units::GHZ;
    }
    if let Some(n) = g.points {
        config.sweep.n_points = n;
    }
    if let Some(c) = &g.series_combination {
        config.cell.combination = c.parse()?;
    }
    if let Some(r) = g.sheet_resistance {
        config.cell.extract.sheet_resistivity = r;
    }
    if let Some(z) = g.z0 {
        config.cell.extract.z0 = Some(z);
    }
    if let Some(z) = g.bloch_impedance {
        config.cell.z_c = Some(z);
    }
    if g.include_parasitics {
        config.cell.include_parasitics = true;
    }
    if let Some(np) = g.leakage {
        config.leakage = if np > 0.0 {
            Leakage::Injected(np)
        } else {
            Leakage::Bloch
        };
    }
    if let Some(f) = &g.format {
        config.format = f.parse()?;
    }
    config.out = g.out.clone();
    config.validate()?;
    Ok(config)
}

/// Writes `contents` to `<out>/<name>` or, without an output directory, to stdout.
fn emit(config: &RunConfig, name: &str, contents: &str) -> Result<()> {
    match &config.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join(name);
            fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(contents.as_bytes())?;
        }
    }
    Ok(())
}

fn ext(format: OutputFormat) -> &'static str {
    match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    }
}

pub fn run(cli: &Cli) -> Result<ExitCode> {
    let config = resolve_config(&cli.global)?;
    match &cli.command {
        Command::Idc => cmd_idc(&config)?,
        Command::Cell {
            action: CellAction::Calibrate,
        } => cmd_cell_calibrate(&config)?,
        Command::Dispersion => cmd_dispersion(&config)?,
        Command::ScanAngles => cmd_scan_angles(&config)?,
        Command::Pattern { freqs, polar_data } => cmd_pattern(&config, freqs, *polar_data)?,
        Command::Sweep => cmd_sweep(&config)?,
        Command::Reproduce { json } => return cmd_reproduce(&config, *json),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_idc(config: &RunConfig) -> Result<()> {
    emit(config, "idc.json", &to_json_string(&idc_report(config)?))
}

fn cmd_cell_calibrate(config: &RunConfig) -> Result<()> {
    emit(
        config,
        "cell_calibrate.json",
        &to_json_string(&calibrate_report(config)?),
    )
}

fn cmd_dispersion(config: &RunConfig) -> Result<()> {
    let cell = cell_for_config(config, config.state()?)?;
    let s = &config.sweep;
    let points = dispersion_sweep(&cell, s.f_start, s.f_stop, s.n_points)?;
    let text = match config.format {
        OutputFormat::Csv => output::dispersion_csv(&points, cell.period),
        OutputFormat::Json => to_json_string(&output::dispersion_json(&points, cell.period)),
    };
    let name = format!("dispersion_{}f.{}", config.fingers, ext(config.format));
    emit(config, &name, &text)
}

fn cmd_scan_angles(config: &RunConfig) -> Result<()> {
    let cell = cell_for_config(config, config.state()?)?;
    let s = &config.sweep;
    let samples = scan_profile_from(&dispersion_sweep(&cell, s.f_start, s.f_stop, s.n_points)?);
    let text = match config.format {
        OutputFormat::Csv => output::scan_csv(&samples),
        OutputFormat::Json => to_json_string(&output::scan_json(&samples)),
    };
    let name = format!("scan_angles_{}f.{}", config.fingers, ext(config.format));
    emit(config, &name, &text)
}

fn cmd_pattern(config: &RunConfig, freqs_ghz: &[f64], polar: bool) -> Result<()> {
    let state = config.state()?;
    let cell = cell_for_config(config, state)?;
    let freqs: Vec<f64> = if freqs_ghz.is_empty() {
        vec![config.targets.get(state).context("no broadside target")?]
    } else {
        freqs_ghz.iter().map(|f| f * units::GHZ).collect()
    };
    if let Some(bad) = freqs.iter().find(|f| f.is_nan() || **f <= 0.0) {
        bail!("pattern frequencies must be > 0, got {bad} Hz");
    }
    let theta = theta_grid(DEFAULT_THETA_STEP_DEG)?;
    let mut summaries = Vec::new();
    let mut tables = Vec::new();
    for &f in &freqs {
        let p = pattern_at(&cell, &config.geometry, f, &theta, config.leakage)?;
        summaries.push(output::pattern_summary(&p));
        let table = if polar {
            output::pattern_polar_csv(&p)
        } else {
            output::pattern_csv(&p)
        };
        tables.push((f, table));
    }
    let summary = to_json_string(&Value::Array(summaries));
    if config.out.is_some() {
        for (i, (_, table)) in tables.iter().enumerate() {
            emit(config, &format!("pattern_{}f_{i:03}.csv", config.fingers), table)?;
        }
        return emit(config, &format!("pattern_{}f_summary.json", config.fingers), &summary);
    }
    match config.format {
        OutputFormat::Json => emit(config, "", &summary),
        OutputFormat::Csv => {
            let mut text = String::new();
            for (f, table) in tables {
                text.push_str(&format!("# f_Hz={}\n", output::sci(f)));
                text.push_str(&table);
            }
            emit(config, "", &text)
        }
    }
}

fn cmd_sweep(config: &RunConfig) -> Result<()> {
    let runs = run_sweep(config)?;
    if config.out.is_some() {
        for run in &runs {
            let n = run.state.finger_count();
            let period = run.cell.period;
            match config.format {
                OutputFormat::Csv => {
                    emit(
                        config,
                        &format!("state_{n}f_dispersion.csv"),
                        &output::dispersion_csv(&run.points, period),
                    )?;
                    emit(config, &format!("state_{n}f_scan.csv"), &output::scan_csv(&run.scan))?;
                }
                OutputFormat::Json => {
                    emit(
                        config,
                        &format!("state_{n}f_dispersion.json"),
                        &to_json_string(&output::dispersion_json(&run.points, period)),
                    )?;
                    emit(
                        config,
                        &format!("state_{n}f_scan.json"),
                        &to_json_string(&output::scan_json(&run.scan)),
                    )?;
                }
            }
            emit(
                config,
                &format!("state_{n}f_broadside_pattern.csv"),
                &output::pattern_csv(&run.broadside),
            )?;
        }
    }
    emit(config, "summary.json", &to_json_string(&sweep_summary(&runs)))
}

fn cmd_reproduce(config: &RunConfig, as_json: bool) -> Result<ExitCode> {
    let results = run_checks(config);
    let all_passed = results.iter().all(|r| r.passed);
    let text = if as_json {
        let checks: Vec<Value> = results
            .iter()
            .map(|r| json!({"id": r.id, "name": r.name, "passed": r.passed, "detail": r.detail}))
            .collect();
        to_json_string(&json!({
            "passed": all_passed,
            "checks": checks,
            "anchor_pF": json_num(crlh_core::checks::ANCHOR_PF),
        }))
    } else {
        let mut t = String::new();
        for r in &results {
            t.push_str(&format!(
                "[{}] {:>2}. {:<28} {}\n",
                if r.passed { "PASS" } else { "FAIL" },
                r.id,
                r.name,
                r.detail
            ));
        }
        t.push_str(if all_passed {
            "all checks passed\n"
        } else {
            "some checks FAILED\n"
        });
        t
    };
    emit(config, if as_json { "reproduce.json" } else { "reproduce.txt" }, &text)?;
    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
