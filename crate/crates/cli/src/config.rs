//! Run configuration and its validation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub const MIN_OMEGA: u32 = 3;
pub const MIN_PRECISION: u32 = 30;
pub const DEFAULT_PRECISION: u32 = 60;
pub const DEFAULT_N_MAX: u64 = 200;
pub const PRECISION_ENV: &str = "YC_PRECISION";

/// Inclusive range of `ω`, written `A..B` or a single `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaRange {
    pub from: u32,
    pub to: u32,
}

impl OmegaRange {
    pub fn iter(&self) -> impl Iterator<Item = u32> {
        self.from..=self.to
    }
}

impl fmt::Display for OmegaRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.from == self.to {
            write!(f, "{}", self.from)
        } else {
            write!(f, "{}..{}", self.from, self.to)
        }
    }
}

/// Parses `A..B`, `A..=B` or `A` into an inclusive pair.
pub fn parse_inclusive(s: &str) -> Result<(u64, u64), String> {
    let s = s.trim();
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let a: u64 = a.trim().parse().map_err(|_| format!("invalid range start in '{s}'"))?;
    let b: u64 = b.trim().parse().map_err(|_| format!("invalid range end in '{s}'"))?;
    if a > b {
        return Err(format!("empty range '{s}'"));
    }
    Ok((a, b))
}

impl FromStr for OmegaRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = parse_inclusive(s)?;
        let from = u32::try_from(a).map_err(|_| "omega out of range".to_string())?;
        let to = u32::try_from(b).map_err(|_| "omega out of range".to_string())?;
        if from < MIN_OMEGA {
            return Err(format!(
                "omega must be at least {MIN_OMEGA}; smaller orders are covered by the classical theorem"
            ));
        }
        Ok(OmegaRange { from, to })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Md,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "md" | "markdown" => Ok(Format::Md),
            _ => Err(format!("unknown format '{s}', expected json or md")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub omega: OmegaRange,
    /// Last dimension covered by explicit witnesses.
    pub n_max: u64,
    /// First dimension covered by the ray certificates.
    pub n_tail: u64,
    /// Number of active eigencomponents; `None` means the worst case `⌊ω/2⌋`.
    pub q: Option<u32>,
    pub precision: u32,
    pub format: Format,
    /// Worker threads; not part of the result.
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn new(omega: OmegaRange) -> Self {
        RunConfig {
            omega,
            n_max: DEFAULT_N_MAX,
            n_tail: DEFAULT_N_MAX,
            q: None,
            precision: DEFAULT_PRECISION,
            format: Format::Json,
            threads: None,
        }
    }

    /// `k_max` for one `ω`: `q` capped at `⌊ω/2⌋`.
    pub fn k_max(&self, omega: u32) -> u32 {
        let worst = omega / 2;
        self.q.map_or(worst, |q| q.min(worst))
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.omega.from < MIN_OMEGA || self.omega.from > self.omega.to {
            return Err(format!("invalid omega range {}", self.omega));
        }
        let n_lo = 2 * self.omega.from as u64 + 6;
        if self.n_max < n_lo {
            return Err(format!("--n-max must be at least 2*omega+6 = {n_lo}"));
        }
        if self.n_tail > self.n_max + 1 {
            return Err(format!(
                "--n-tail {} leaves a gap after --n-max {}",
                self.n_tail, self.n_max
            ));
        }
        if self.q == Some(0) {
            return Err("--q must be at least 1".into());
        }
        if self.precision < MIN_PRECISION {
            return Err(format!("precision must be at least {MIN_PRECISION} digits"));
        }
        Ok(())
    }
}

/// Precision from an explicit flag, else `YC_PRECISION`, else the default.
pub fn resolve_precision(flag: Option<u32>) -> Result<u32, String> {
    if let Some(p) = flag {
        return Ok(p);
    }
    match std::env::var(PRECISION_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{PRECISION_ENV} must be a positive integer, got '{v}'")),
        Err(_) => Ok(DEFAULT_PRECISION),
    }
}
