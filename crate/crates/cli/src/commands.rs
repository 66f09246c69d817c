//! The three subcommands. Each returns the exit status of a completed run;
//! errors carry their own status.

use std::path::Path;
use std::time::Instant;

use catalyst_core::analysis::{evaluate, sweep, SweepAxis};
use catalyst_core::protocol::{extract_two_qubit_phases, run};
use log::{info, warn};
use serde::Serialize;

use crate::error::{core_status, CliError, ExitStatus};
use crate::output::{sig12, write_atomic};
use crate::report::{GateDocument, RunDocument, Timing};
use crate::spec::RunSpec;

/// Tolerance on the extracted two-qubit phase, radians.
pub const GATE_PHASE_TOLERANCE: f64 = 0.02;

/// Column names of sweep tables.
pub const SWEEP_HEADER: [&str; 8] = [
    "value",
    "ghz_fidelity",
    "atomic_purity",
    "product_form_distance",
    "mean_photon_final",
    "closed_form_fidelity",
    "truncation_flag",
    "error",
];

fn write_json(path: &Path, doc: &impl Serialize) -> Result<(), CliError> {
    write_atomic(path, |w| {
        serde_json::to_writer_pretty(&mut *w, doc).map_err(|e| CliError::Spec(e.to_string()))?;
        w.write_all(b"\n").map_err(|source| CliError::Write {
            path: path.display().to_string(),
            source,
        })
    })
}

pub fn cmd_run(spec_path: &Path, out: &Path, timestamp: bool) -> Result<ExitStatus, CliError> {
    let spec = RunSpec::from_file(spec_path)?;
    let config = spec.to_config()?;
    config.validate()?;
    let start = Instant::now();
    let result = run(&config)?;
    let metrics = evaluate(&result);
    let mut doc = RunDocument::new(&spec, &config, &result, &metrics);
    if timestamp {
        doc.timing = Some(Timing {
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            wall_clock_seconds: sig12(start.elapsed().as_secs_f64()),
        });
    }
    write_json(out, &doc)?;
    info!("{}: ghz_fidelity {:.6}", config.engine().name(), metrics.ghz_fidelity);
    if let Err(e) = result.check_truncation() {
        warn!("{e}");
        return Ok(ExitStatus::PhysicsValidity);
    }
    Ok(ExitStatus::Success)
}

/// Parses a comma-separated list; blank entries are skipped.
pub fn parse_values(list: &str) -> Result<Vec<f64>, CliError> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|e| CliError::Spec(format!("bad sweep value `{s}`: {e}")))
        })
        .collect()
}

pub fn cmd_sweep(spec_path: &Path, axis: &str, values: &str, out: &Path) -> Result<ExitStatus, CliError> {
    let spec = RunSpec::from_file(spec_path)?;
    let base = spec.to_config()?;
    let axis: SweepAxis = axis.parse()?;
    let values = parse_values(values)?;
    let rows = sweep(&base, axis, &values);

    write_atomic(out, |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(SWEEP_HEADER)?;
        for row in &rows {
            let value = sig12(row.value).to_string();
            let record: [String; 8] = match &row.outcome {
                Ok(p) => {
                    let m = &p.metrics;
                    [
                        value,
                        sig12(m.ghz_fidelity).to_string(),
                        sig12(m.atomic_purity).to_string(),
                        sig12(m.product_form_distance).to_string(),
                        sig12(m.mean_photon_final).to_string(),
                        sig12(m.closed_form_fidelity).to_string(),
                        u8::from(p.truncated).to_string(),
                        String::new(),
                    ]
                }
                Err(e) => [
                    value,
                    "".into(),
                    "".into(),
                    "".into(),
                    "".into(),
                    "".into(),
                    "".into(),
                    e.to_string(),
                ],
            };
            csv.write_record(&record)?;
        }
        csv.flush().map_err(|source| CliError::Write {
            path: out.display().to_string(),
            source,
        })
    })?;

    let mut first_error = None;
    for row in &rows {
        match &row.outcome {
            Ok(p) if p.truncated => warn!("{axis} = {}: truncation flagged", row.value),
            Ok(_) => {}
            Err(e) => {
                warn!("{axis} = {}: {e}", row.value);
                first_error.get_or_insert(core_status(e));
            }
        }
    }
    let any_ok = rows.iter().any(|r| r.outcome.is_ok());
    Ok(match first_error {
        Some(status) if !any_ok => status,
        _ => ExitStatus::Success,
    })
}

pub fn cmd_gate_check(spec_path: &Path, out: &Path) -> Result<ExitStatus, CliError> {
    let spec = RunSpec::from_file(spec_path)?;
    let config = spec.to_config()?;
    config.validate()?;
    let gate = extract_two_qubit_phases(&config)?;
    let doc = GateDocument::new(&spec, &config, &gate, GATE_PHASE_TOLERANCE);
    write_json(out, &doc)?;
    if doc.passed {
        Ok(ExitStatus::Success)
    } else {
        warn!(
            "two-qubit phase {:.6} misses 2(g tau)^2 = {:.6} by {:.4} rad",
            gate.two_qubit_phase, doc.target_phase, doc.phase_error
        );
        Ok(ExitStatus::Failure)
    }
}
