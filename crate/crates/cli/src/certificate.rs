use std::time::{SystemTime, UNIX_EPOCH};

use padovan_core::heights::{BoundChain, BoundChainRecord};
use padovan_core::reduction::{ReductionCertificate, StageReport, TECHNICAL_GAP};
use padovan_core::search::RepresentationSet;
use serde::{Deserialize, Serialize};

use crate::{CliError, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Complete,
    /// A stage failed; the sections after it are absent.
    Partial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    pub tool_version: String,
    pub command: String,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub status: RunStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    /// Set by the end-to-end run: reduced bound inside the searched range and the expected set found.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed: Option<bool>,
    #[serde(default)]
    pub notes: Vec<String>,
}

/// Machine-readable record of a run. Integers that may exceed 2^53 are decimal strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub config: RunConfig,
    pub solutions: Option<RepresentationSet>,
    /// Stored in its decimal form so a parsed certificate re-serializes unchanged.
    pub bounds: Option<BoundChainRecord>,
    pub reduction: Option<ReductionCertificate>,
    pub meta: Meta,
}

pub(crate) fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl Certificate {
    pub(crate) fn start(config: &RunConfig, command: &str) -> Self {
        let now = unix_now();
        Certificate {
            config: config.clone(),
            solutions: None,
            bounds: None,
            reduction: None,
            meta: Meta {
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                command: command.to_string(),
                started_unix: now,
                finished_unix: now,
                status: RunStatus::Complete,
                failure: None,
                closed: None,
                notes: Vec::new(),
            },
        }
    }

    pub(crate) fn fail(&mut self, msg: impl Into<String>) {
        self.meta.status = RunStatus::Partial;
        self.meta.failure = Some(msg.into());
    }

    pub(crate) fn finish(&mut self) {
        self.meta.finished_unix = unix_now();
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    /// JSON with the timestamps zeroed, for comparing runs.
    pub fn canonical_json(&self) -> String {
        let mut c = self.clone();
        c.meta.started_unix = 0;
        c.meta.finished_unix = 0;
        c.to_json()
    }

    /// Parses a persisted certificate and checks its internal consistency.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cert: Certificate = serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
        cert.check().map_err(CliError::Schema)?;
        Ok(cert)
    }

    /// The bound chain as certified balls.
    pub fn bound_chain(&self) -> Result<Option<BoundChain>, String> {
        self.bounds
            .clone()
            .map(BoundChain::try_from)
            .transpose()
            .map_err(|e| format!("bounds: {e}"))
    }

    fn check(&self) -> Result<(), String> {
        if self.meta.tool_version.is_empty() {
            return Err("meta.tool_version is empty".into());
        }
        if self.meta.finished_unix < self.meta.started_unix {
            return Err("meta.finished_unix precedes meta.started_unix".into());
        }
        if self.meta.status == RunStatus::Partial && self.meta.failure.is_none() {
            return Err("partial certificate without a failure message".into());
        }
        if let Some(r) = &self.reduction {
            check_reduction(r)?;
        }
        if let Some(b) = self.bound_chain()? {
            if !(b.c3.le(&b.c3_used) || b.c3.overlaps(&b.c3_used)) {
                return Err("bounds.c3_used is smaller than bounds.c3".into());
            }
        }
        Ok(())
    }
}

fn check_stage(name: &str, s: &StageReport, reported: u32) -> Result<(), String> {
    if s.combined_bound < s.main_bound {
        return Err(format!("reduction.{name}: combined bound below main bound"));
    }
    if let Some(e) = s.exceptions.iter().find(|e| e.resolution.bound > s.combined_bound) {
        return Err(format!(
            "reduction.{name}: exception {:?} exceeds the combined bound",
            e.case
        ));
    }
    if reported != s.reported_bound() {
        return Err(format!("reduction.{name}_bound disagrees with the stage report"));
    }
    let settled: u64 = s.settled_at.values().sum();
    if settled + s.exceptions.len() as u64 != s.cases {
        return Err(format!("reduction.{name}: case counts do not add up"));
    }
    Ok(())
}

fn check_reduction(r: &ReductionCertificate) -> Result<(), String> {
    check_stage("stage1", &r.stage1, r.stage1_bound)?;
    check_stage("stage2", &r.stage2, r.stage2_bound)?;
    check_stage("stage3", &r.stage3, r.stage3_bound)?;
    if [r.stage1_bound, r.stage2_bound, r.stage3_bound]
        .iter()
        .any(|&b| b < TECHNICAL_GAP)
    {
        return Err("stage bound below the technical gap".into());
    }
    if r.largest_index_bound != r.stage3_bound + 1 {
        return Err("largest_index_bound must be stage3_bound + 1".into());
    }
    if r.contradiction != (r.largest_index_bound <= r.search_threshold) {
        return Err("contradiction flag is inconsistent with the bounds".into());
    }
    let six_m = r.modulus.clone() * 6u32;
    if r.convergent.q <= six_m {
        return Err("convergent denominator does not exceed 6M".into());
    }
    Ok(())
}
