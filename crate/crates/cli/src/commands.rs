use std::fs;
use std::path::Path;

use padovan_core::heights::{case_bounds, BoundChain};
use padovan_core::reduction::{run_full_reduction, ReductionCertificate};
use padovan_core::search::{enumerate_solutions, growth_ell_window, SEARCH_LIMIT};
use rug::ops::Pow;
use rug::Integer;

use crate::certificate::Certificate;
use crate::report::render_markdown;
use crate::{core_exit_status, CliError, ExitStatus, OutputFormat, RunConfig};

/// A finished command: the document it produced and how the process should exit.
#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub certificate: Certificate,
    pub status: ExitStatus,
    /// Human-readable lines for the terminal.
    pub summary: Vec<String>,
}

impl CommandOutput {
    fn new(mut certificate: Certificate, status: ExitStatus, summary: Vec<String>) -> Self {
        certificate.finish();
        CommandOutput {
            certificate,
            status,
            summary,
        }
    }

    /// Renders the certificate in the configured format.
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.certificate.to_json(),
            OutputFormat::Markdown => render_markdown(&self.certificate),
        }
    }

    /// Writes the rendered document to the configured path, or returns it for stdout.
    pub fn persist(&self, config: &RunConfig) -> Result<Option<String>, CliError> {
        let text = self.render(config.format);
        match &config.output_path {
            Some(path) => {
                write_file(path, &text)?;
                Ok(None)
            }
            None => Ok(Some(text)),
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Rounds `bound` up to one significant digit, e.g. `2.69e48 -> 3e48`.
pub fn modulus_from_bound(bound: &Integer) -> Integer {
    if *bound <= 0 {
        return Integer::from(1);
    }
    let digits = bound.to_string_radix(10).len() as u32;
    let scale = Integer::from(10).pow(digits - 1);
    let (mut lead, rem) = bound.clone().div_rem_floor(scale.clone());
    if rem != 0 {
        lead += 1;
    }
    lead * scale
}

pub fn cmd_search(config: &RunConfig) -> Result<CommandOutput, CliError> {
    config.validate()?;
    let mut cert = Certificate::start(config, "search");
    let set = match enumerate_solutions(config.n_max, config.l_max) {
        Ok(set) => set,
        Err(e) => {
            cert.fail(e.to_string());
            return Ok(CommandOutput::new(cert, core_exit_status(&e), vec![e.to_string()]));
        }
    };
    let mut summary = Vec::new();
    let values = set.values();
    if values.is_empty() {
        let note = format!(
            "no solutions with n1 <= {} and length <= {}",
            config.n_max, config.l_max
        );
        cert.meta.notes.push(note.clone());
        summary.push(note);
    } else {
        summary.push(format!(
            "{} values, {} representations: {}",
            values.len(),
            set.len_solutions(),
            values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
        ));
    }
    let status = if config.covers_default_range() && !set.matches_known_values() {
        summary.push("solution set differs from the expected 19 values".into());
        ExitStatus::Mismatch
    } else {
        ExitStatus::Success
    };
    cert.solutions = Some(set);
    Ok(CommandOutput::new(cert, status, summary))
}

fn bound_lines(b: &BoundChain) -> Vec<String> {
    vec![
        format!("c1 = {:.6e}", b.c1.to_f64()),
        format!("c2 = {:.6e}", b.c2.to_f64()),
        format!("c3 = {:.6e} (used {:.6e})", b.c3.to_f64(), b.c3_used.to_f64()),
        format!("absolute bound n1 < {}", b.absolute_bound),
    ]
}

/// Runs the bound chain into `cert`, returning the failure status if it did not finish.
fn bounds_into(config: &RunConfig, cert: &mut Certificate, summary: &mut Vec<String>) -> Result<(), ExitStatus> {
    let chain = config.context().map_err(|e| e.exit_status()).and_then(|ctx| {
        case_bounds(&ctx).map_err(|e| {
            cert.fail(format!("bounds: {e}"));
            summary.push(format!("bounds failed: {e}"));
            core_exit_status(&e)
        })
    })?;
    summary.extend(bound_lines(&chain));
    cert.bounds = Some(chain.into());
    Ok(())
}

pub fn cmd_bounds(config: &RunConfig) -> Result<CommandOutput, CliError> {
    config.validate()?;
    let mut cert = Certificate::start(config, "bounds");
    let mut summary = Vec::new();
    let status = match bounds_into(config, &mut cert, &mut summary) {
        Ok(()) => ExitStatus::Success,
        Err(s) => s,
    };
    Ok(CommandOutput::new(cert, status, summary))
}

fn reduction_lines(r: &ReductionCertificate) -> Vec<String> {
    vec![
        format!(
            "M = {}, convergent index {}, a(M) = {}",
            r.modulus, r.convergent.index, r.max_quotient
        ),
        format!(
            "stage bounds {} / {} / {}, largest index <= {}",
            r.stage1_bound, r.stage2_bound, r.stage3_bound, r.largest_index_bound
        ),
        format!("contradiction with n1 > {}: {}", r.search_threshold, r.contradiction),
    ]
}

/// Bounds then reduction. Returns the reduction on success.
fn reduce_into(
    config: &RunConfig,
    cert: &mut Certificate,
    summary: &mut Vec<String>,
) -> Result<ReductionCertificate, ExitStatus> {
    bounds_into(config, cert, summary)?;
    let absolute = cert
        .bounds
        .as_ref()
        .map(|b| b.absolute_bound.clone())
        .unwrap_or_default();
    let modulus = match &config.m_override {
        Some(m) => {
            if *m < absolute {
                let note = format!(
                    "modulus override {m} is below the absolute bound {absolute}; the reduction alone does not exclude larger indices"
                );
                summary.push(note.clone());
                cert.meta.notes.push(note);
            }
            m.clone()
        }
        None => modulus_from_bound(&absolute),
    };
    let ctx = config.context().map_err(|e| e.exit_status())?;
    match run_full_reduction(&ctx, &modulus) {
        Ok(r) => {
            summary.extend(reduction_lines(&r));
            cert.reduction = Some(r.clone());
            Ok(r)
        }
        Err(e) => {
            cert.fail(format!("reduction: {e}"));
            summary.push(format!("reduction failed: {e}"));
            Err(core_exit_status(&e))
        }
    }
}

pub fn cmd_reduce(config: &RunConfig) -> Result<CommandOutput, CliError> {
    config.validate()?;
    let mut cert = Certificate::start(config, "reduce");
    let mut summary = Vec::new();
    let status = match reduce_into(config, &mut cert, &mut summary) {
        Ok(r) if r.contradiction => ExitStatus::Success,
        Ok(_) => ExitStatus::Mismatch,
        Err(s) => s,
    };
    Ok(CommandOutput::new(cert, status, summary))
}

/// Bounds, reduction and the closing search in one certificate.
pub fn cmd_verify_all(config: &RunConfig) -> Result<CommandOutput, CliError> {
    config.validate()?;
    let mut cert = Certificate::start(config, "verify-all");
    let mut summary = Vec::new();
    let reduction = match reduce_into(config, &mut cert, &mut summary) {
        Ok(r) => r,
        Err(s) => return Ok(CommandOutput::new(cert, s, summary)),
    };

    let searched = reduction.largest_index_bound.max(SEARCH_LIMIT).max(config.n_max);
    let (_, needed_len) = growth_ell_window(searched);
    if needed_len > config.l_max as i64 {
        let msg = format!(
            "l_max {} is below the largest possible length {needed_len} for n1 <= {searched}",
            config.l_max
        );
        cert.fail(msg.clone());
        summary.push(msg);
        return Ok(CommandOutput::new(cert, ExitStatus::ConfigError, summary));
    }
    let set = match enumerate_solutions(searched, config.l_max) {
        Ok(set) => set,
        Err(e) => {
            cert.fail(format!("search: {e}"));
            summary.push(format!("search failed: {e}"));
            return Ok(CommandOutput::new(cert, core_exit_status(&e), summary));
        }
    };
    let matches = set.matches_known_values();
    summary.push(format!(
        "search to n1 <= {searched}: {} values, expected set {}",
        set.values().len(),
        if matches { "found" } else { "NOT found" }
    ));
    cert.solutions = Some(set);

    let closed = reduction.contradiction && reduction.largest_index_bound <= searched && matches;
    cert.meta.closed = Some(closed);
    summary.push(format!("closed: {closed}"));
    let status = if closed {
        ExitStatus::Success
    } else {
        ExitStatus::Mismatch
    };
    Ok(CommandOutput::new(cert, status, summary))
}

/// Validates a persisted certificate and renders it.
pub fn cmd_report(input: &Path, format: OutputFormat) -> Result<String, CliError> {
    let text = fs::read_to_string(input).map_err(|source| CliError::Io {
        path: input.display().to_string(),
        source,
    })?;
    let cert = Certificate::from_json(&text)?;
    Ok(match format {
        OutputFormat::Json => cert.to_json(),
        OutputFormat::Markdown => render_markdown(&cert),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_rounding() {
        let cases = [
            (
                "2690211707578192174252449322441700978978527489641",
                "3000000000000000000000000000000000000000000000000",
            ),
            ("3000", "3000"),
            ("3001", "4000"),
            ("9500", "10000"),
            ("7", "7"),
            ("0", "1"),
        ];
        for (input, expected) in cases {
            let got = modulus_from_bound(&input.parse().unwrap());
            assert_eq!(got.to_string(), expected);
        }
    }

    #[test]
    fn empty_search_is_recorded() {
        let config = RunConfig {
            n_max: 6,
            l_max: 2,
            ..Default::default()
        };
        let out = cmd_search(&config).unwrap();
        assert_eq!(out.status, ExitStatus::Success);
        assert!(out.certificate.solutions.as_ref().unwrap().is_empty());
        assert_eq!(
            out.certificate.meta.notes,
            ["no solutions with n1 <= 6 and length <= 2"]
        );
        assert!(out.certificate.to_json().contains("\"values\": []"));
    }
}
