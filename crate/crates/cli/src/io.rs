//! Input documents and replay fixtures.
//!
//! A lottery document is `{"outcomes": [...], "probs": [...]}`; a joint
//! document is `{"grid_x": [...], "grid_y": [...], "joint": [[...], ...]}`
//! with one row per `grid_x` entry.

use std::fs;
use std::path::{Path, PathBuf};

use regret_core::audit::{Property, Violation};
use regret_core::{JointLottery, Lottery, RegretKernel, UtilityCurve};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::output::to_json;
use crate::CliError;

/// A stored audit violation together with what is needed to re-run it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub property: Property,
    pub utility: String,
    pub violation: Violation,
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn read_document<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T, CliError> {
    let text = read_text(path)?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("invalid {what} in {}: {e}", path.display())))
}

pub fn read_lottery(path: &Path) -> Result<Lottery, CliError> {
    read_document(path, "lottery")
}

pub fn read_joint(path: &Path) -> Result<JointLottery, CliError> {
    read_document(path, "joint distribution")
}

pub fn read_fixture(path: &Path) -> Result<Fixture, CliError> {
    read_document(path, "fixture")
}

pub fn parse_kernel(spec: &str) -> Result<RegretKernel, CliError> {
    spec.parse()
        .map_err(|e| CliError::Usage(format!("--kernel: {e}")))
}

pub fn parse_utility(spec: &str) -> Result<UtilityCurve, CliError> {
    spec.parse()
        .map_err(|e| CliError::Usage(format!("--utility: {e}")))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
    }
    fs::write(path, text)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

/// Writes `fixture` under `dir` and returns the file path.
pub fn write_fixture(dir: &Path, fixture: &Fixture) -> Result<PathBuf, CliError> {
    let kernel: String = fixture
        .violation
        .kernel
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect();
    let name = format!(
        "{}-{kernel}-trial{}.json",
        fixture.property, fixture.violation.trial
    );
    let path = dir.join(name);
    write_text(&path, &to_json(fixture))?;
    Ok(path)
}
