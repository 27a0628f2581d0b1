//! Low-dimension sweep: every `n ∈ [3, 37]` against the certified `ω`.

use serde::{Deserialize, Serialize};

use yc_core::certify::{ClaimKind, Witness};
use yc_core::exact::rational::format_rational;

use crate::report::{LemmaReport, OmegaStatus, Verdict, SCHEMA};

pub const N_FROM: u64 = 3;
pub const N_TO: u64 = 37;
pub const OMEGA_MAX: u32 = 15;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryWitness {
    pub omega: u32,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryRow {
    pub n: u64,
    /// `ω ∈ [3, ⌊(n-6)/2⌋]`.
    pub in_scope: Vec<u32>,
    pub witnesses: Vec<CorollaryWitness>,
    pub missing: Vec<u32>,
    /// `⌊(n-6)/2⌋ ≤ 15`.
    pub within_bound: bool,
    pub deferred: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryReport {
    pub schema: u32,
    pub rows: Vec<CorollaryRow>,
    pub verdict: Verdict,
}

impl CorollaryReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Largest `ω` with `n ≥ 2ω + 6`, if any is at least 3.
pub fn omega_top(n: u64) -> u32 {
    (n.saturating_sub(6) / 2) as u32
}

/// The witness `c` recorded for `(ω, n)` by a certified run, if any.
fn witness_for(report: &LemmaReport, omega: u32, n: u64) -> Option<String> {
    let o = report.omega(omega)?;
    if o.status != OmegaStatus::Certified {
        return None;
    }
    report.certificates_of(o).find_map(|c| match (&c.claim.kind, &c.witness) {
        (ClaimKind::WindowWitnesses { k_max, .. }, Witness::WindowTable { rows }) if *k_max == o.k_max => {
            rows.iter().find(|r| r.n == n).map(|r| format_rational(&r.c))
        }
        _ => None,
    })
}

/// Builds the sweep from a worst-case certification run over `ω ∈ [3, 15]`
/// whose witness tables reach `n = 37`.
pub fn corollary_sweep(report: &LemmaReport) -> CorollaryReport {
    let mut rows = Vec::new();
    let mut problems = Vec::new();
    if report.config.q.is_some() {
        problems.push("the run fixes q; the corollary needs the worst case".to_string());
    }
    for n in N_FROM..=N_TO {
        let top = omega_top(n);
        let in_scope: Vec<u32> = (3..=top).collect();
        let mut witnesses = Vec::new();
        let mut missing = Vec::new();
        for &omega in &in_scope {
            match witness_for(report, omega, n) {
                Some(c) => witnesses.push(CorollaryWitness { omega, c }),
                None => missing.push(omega),
            }
        }
        let mut deferred = vec!["omega <= 2: classical theorem".to_string()];
        if in_scope.is_empty() {
            deferred.push(format!("n = {n} <= 11: no omega >= 3 satisfies n >= 2 omega + 6"));
        } else {
            deferred.push(format!("omega > {top}: classical theorem (n < 2 omega + 6)"));
        }
        let within_bound = top <= OMEGA_MAX;
        if !within_bound {
            problems.push(format!("n = {n}: omega up to {top} exceeds {OMEGA_MAX}"));
        }
        if !missing.is_empty() {
            problems.push(format!("n = {n}: no certified window for omega in {missing:?}"));
        }
        rows.push(CorollaryRow {
            n,
            in_scope,
            witnesses,
            missing,
            within_bound,
            deferred,
        });
    }
    let verdict = if problems.is_empty() {
        Verdict::Certified
    } else {
        Verdict::Inconclusive { items: problems }
    };
    CorollaryReport {
        schema: SCHEMA,
        rows,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scope() {
        assert_eq!(omega_top(11), 2);
        assert_eq!(omega_top(12), 3);
        assert_eq!(omega_top(37), 15);
        assert_eq!(omega_top(3), 0);
    }
}
