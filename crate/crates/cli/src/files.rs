//! JSON channel descriptions.
//!
//! A channel file holds `W[x][s][y]`, the no-adversary state and optionally
//! the adversary's observation channel `U[x][z]`:
//!
//! ```json
//! {
//!   "name": "mbac_p25_q10",
//!   "alphabets": { "x": 2, "s": 2, "y": 2, "z": 2 },
//!   "W": [[[0.75, 0.25], [0.25, 0.75]], [[0.25, 0.75], [0.75, 0.25]]],
//!   "s0": 0,
//!   "U": [[0.9, 0.1], [0.1, 0.9]]
//! }
//! ```

use std::fs;
use std::path::Path;

use avcauth::{Avc, Dmc};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Row sums may be off by this much before a file is rejected.
const ROW_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabets {
    pub x: usize,
    pub s: usize,
    pub y: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub name: String,
    pub alphabets: Alphabets,
    #[serde(rename = "W")]
    pub w: Vec<Vec<Vec<f64>>>,
    pub s0: usize,
    #[serde(rename = "U", default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<Vec<f64>>>,
}

/// A single channel `W[x][y]`, as read by `degrade`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DmcFile {
    pub name: String,
    #[serde(rename = "W")]
    pub w: Vec<Vec<f64>>,
}

fn check_rows<'a>(label: &str, rows: impl Iterator<Item = (String, &'a [f64])>, width: usize) -> Result<(), CliError> {
    for (index, row) in rows {
        if row.len() != width {
            return Err(CliError::Parse(format!(
                "{label}{index} has {} entries, expected {width}",
                row.len()
            )));
        }
        if let Some(v) = row.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(CliError::Parse(format!("{label}{index} has invalid entry {v}")));
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > ROW_SLACK {
            return Err(CliError::Parse(format!("row {label}{index} sums to {sum}, expected 1")));
        }
    }
    Ok(())
}

impl ChannelFile {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let file: Self = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        file.validate()?;
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        Self::from_json(&read_text(path)?)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("plain data serializes");
        text.push('\n');
        text
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let a = self.alphabets;
        if self.w.len() != a.x {
            return Err(CliError::Parse(format!(
                "W has {} inputs, alphabets.x is {}",
                self.w.len(),
                a.x
            )));
        }
        for (x, slice) in self.w.iter().enumerate() {
            if slice.len() != a.s {
                return Err(CliError::Parse(format!(
                    "W[{x}] has {} states, alphabets.s is {}",
                    slice.len(),
                    a.s
                )));
            }
            check_rows(
                "W",
                slice
                    .iter()
                    .enumerate()
                    .map(|(s, r)| (format!("[{x}][{s}]"), r.as_slice())),
                a.y,
            )?;
        }
        if self.s0 >= a.s {
            return Err(CliError::Parse(format!(
                "s0 = {} is not a state (alphabets.s is {})",
                self.s0, a.s
            )));
        }
        match (&self.u, a.z) {
            (Some(u), Some(z)) => {
                if u.len() != a.x {
                    return Err(CliError::Parse(format!(
                        "U has {} rows, alphabets.x is {}",
                        u.len(),
                        a.x
                    )));
                }
                check_rows(
                    "U",
                    u.iter().enumerate().map(|(x, r)| (format!("[{x}]"), r.as_slice())),
                    z,
                )
            }
            (Some(_), None) => Err(CliError::Parse("U is given but alphabets.z is missing".into())),
            (None, _) => Ok(()),
        }
    }

    pub fn avc(&self) -> Result<Avc, CliError> {
        Avc::new(self.w.clone(), self.s0).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn observation(&self) -> Result<Option<Dmc>, CliError> {
        self.u
            .as_ref()
            .map(|u| Dmc::new(u.clone()).map_err(|e| CliError::Parse(e.to_string())))
            .transpose()
    }

    pub fn from_channel(name: impl Into<String>, avc: &Avc, u: Option<&Dmc>) -> Self {
        Self {
            name: name.into(),
            alphabets: Alphabets {
                x: avc.x_size(),
                s: avc.s_size(),
                y: avc.y_size(),
                z: u.map(|u| u.out_size()),
            },
            w: avc.to_nested(),
            s0: avc.s0(),
            u: u.map(|u| u.to_rows()),
        }
    }
}

impl DmcFile {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let file: Self = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        let width = file.w.first().map_or(0, |r| r.len());
        if width == 0 {
            return Err(CliError::Parse("W is empty".into()));
        }
        check_rows(
            "W",
            file.w.iter().enumerate().map(|(x, r)| (format!("[{x}]"), r.as_slice())),
            width,
        )?;
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        Self::from_json(&read_text(path)?)
    }

    pub fn dmc(&self) -> Result<Dmc, CliError> {
        Dmc::new(self.w.clone()).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn from_dmc(name: impl Into<String>, d: &Dmc) -> Self {
        Self {
            name: name.into(),
            w: d.to_rows(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("plain data serializes");
        text.push('\n');
        text
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
