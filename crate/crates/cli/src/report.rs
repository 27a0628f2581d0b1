//! The certification run, its report, and independent re-verification.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use yc_core::certify::{
    certify_intersection, certify_lemma_poly, replay, ClaimKind, Minorant, NRange, Sign, SignCert,
};
use yc_core::oracle::crosscheck::crosscheck_cert;

use crate::config::RunConfig;
use crate::exit;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "UPPERCASE")]
pub enum Verdict {
    Certified,
    Falsified { omega: u32, n: u64 },
    Inconclusive { items: Vec<String> },
}

impl Verdict {
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Certified => exit::CERTIFIED,
            Verdict::Falsified { .. } => exit::FALSIFIED,
            Verdict::Inconclusive { .. } => exit::INCONCLUSIVE,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Certified => write!(f, "CERTIFIED"),
            Verdict::Falsified { omega, n } => write!(f, "FALSIFIED(omega={omega}, n={n})"),
            Verdict::Inconclusive { items } => write!(f, "INCONCLUSIVE({})", items.join("; ")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum OmegaStatus {
    Certified,
    Falsified { n: u64 },
    Inconclusive { reasons: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaSummary {
    pub omega: u32,
    pub k_max: u32,
    /// Start of the ray on which the lemma polynomials are certified.
    pub lemma_from: u64,
    pub exhaustive: Option<NRange>,
    pub tail_from: Option<u64>,
    pub minorants: Vec<(u32, Minorant)>,
    pub inference: Vec<String>,
    /// Indices into the report's certificate list.
    pub certificates: Vec<usize>,
    pub status: OmegaStatus,
    pub wall_time_ms: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrosscheckSummary {
    pub precision: u32,
    pub evaluations: usize,
    pub unresolved: usize,
    pub disagreements: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub schema: u32,
    pub config: RunConfig,
    pub certificates: Vec<SignCert>,
    pub omegas: Vec<OmegaSummary>,
    pub crosscheck: CrosscheckSummary,
    pub verdict: Verdict,
    pub wall_time_ms: u64,
}

impl LemmaReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn omega(&self, omega: u32) -> Option<&OmegaSummary> {
        self.omegas.iter().find(|o| o.omega == omega)
    }

    pub fn certificates_of<'a>(&'a self, o: &'a OmegaSummary) -> impl Iterator<Item = &'a SignCert> {
        o.certificates.iter().map(|&i| &self.certificates[i])
    }
}

struct OmegaRun {
    summary: OmegaSummary,
    certs: Vec<SignCert>,
    crosscheck: CrosscheckSummary,
}

fn run_omega(config: &RunConfig, omega: u32) -> OmegaRun {
    let started = Instant::now();
    let k_max = config.k_max(omega);
    let lemma_from = 2 * omega as u64 + 6;
    let mut certs = Vec::new();
    let mut reasons = Vec::new();
    let mut inference = Vec::new();
    let mut summary = OmegaSummary {
        omega,
        k_max,
        lemma_from,
        exhaustive: None,
        tail_from: None,
        minorants: Vec::new(),
        inference: Vec::new(),
        certificates: Vec::new(),
        status: OmegaStatus::Certified,
        wall_time_ms: 0,
    };
    match certify_lemma_poly(omega) {
        Ok(b) => {
            inference.push(b.inference);
            certs.extend(b.certificates);
        }
        Err(e) => reasons.push(format!("omega={omega}: lemma polynomials: {e}")),
    }
    let mut empty_at = None;
    match certify_intersection(omega, config.n_tail, config.n_max, k_max) {
        Ok(b) => {
            summary.exhaustive = b.exhaustive.clone();
            if let Some(gap) = &b.empty_window {
                empty_at = Some(gap.domain.n_range.from);
            } else {
                summary.tail_from = Some(b.n_tail);
                summary.minorants = b.minorants.clone();
                inference.push(b.inference.clone());
            }
            certs.extend(b.certificates().cloned());
        }
        Err(e) => reasons.push(format!("omega={omega}: window intersection: {e}")),
    }
    for c in &certs {
        if let Err(e) = replay(c) {
            reasons.push(format!("omega={omega}: '{}' does not replay: {e}", c.claim.statement));
        }
    }
    let mut cross = CrosscheckSummary {
        precision: config.precision,
        ..Default::default()
    };
    for c in &certs {
        match crosscheck_cert(c, config.precision) {
            Ok(r) => {
                cross.evaluations += r.evaluations;
                cross.unresolved += r.unresolved;
                cross.disagreements.extend(r.disagreements);
            }
            Err(e) => cross.disagreements.push(format!("{}: {e}", c.claim.statement)),
        }
    }
    if !cross.disagreements.is_empty() {
        reasons.push(format!(
            "omega={omega}: {} numeric disagreements",
            cross.disagreements.len()
        ));
    }
    if reasons.is_empty() && empty_at.is_none() {
        if let Err(missing) = audit_omega(omega, k_max, certs.iter()) {
            reasons.extend(missing.into_iter().map(|m| format!("omega={omega}: {m}")));
        }
    }
    summary.status = match (empty_at, reasons.is_empty()) {
        (Some(n), true) => OmegaStatus::Falsified { n },
        (_, true) => OmegaStatus::Certified,
        _ => OmegaStatus::Inconclusive { reasons },
    };
    summary.inference = inference;
    summary.wall_time_ms = started.elapsed().as_millis() as u64;
    OmegaRun {
        summary,
        certs,
        crosscheck: cross,
    }
}

fn verdict_of(omegas: &[OmegaSummary]) -> Verdict {
    let mut items = Vec::new();
    for o in omegas {
        match &o.status {
            OmegaStatus::Falsified { n } => return Verdict::Falsified { omega: o.omega, n: *n },
            OmegaStatus::Inconclusive { reasons } => items.extend(reasons.iter().cloned()),
            OmegaStatus::Certified => {}
        }
    }
    if items.is_empty() {
        Verdict::Certified
    } else {
        Verdict::Inconclusive { items }
    }
}

/// Certifies every `ω` in the configured range. Each `ω` is certified
/// independently and in parallel; the report keeps `ω` order.
pub fn run_certify(config: &RunConfig) -> Result<LemmaReport, String> {
    config.validate()?;
    let started = Instant::now();
    let omegas: Vec<u32> = config.omega.iter().collect();
    let runs: Vec<OmegaRun> = omegas.par_iter().map(|&w| run_omega(config, w)).collect();
    let mut certificates = Vec::new();
    let mut summaries = Vec::new();
    let mut crosscheck = CrosscheckSummary {
        precision: config.precision,
        ..Default::default()
    };
    for mut run in runs {
        let base = certificates.len();
        run.summary.certificates = (base..base + run.certs.len()).collect();
        certificates.extend(run.certs);
        crosscheck.evaluations += run.crosscheck.evaluations;
        crosscheck.unresolved += run.crosscheck.unresolved;
        crosscheck.disagreements.extend(run.crosscheck.disagreements);
        summaries.push(run.summary);
    }
    let verdict = verdict_of(&summaries);
    Ok(LemmaReport {
        schema: SCHEMA,
        config: config.clone(),
        certificates,
        omegas: summaries,
        crosscheck,
        verdict,
        wall_time_ms: started.elapsed().as_millis() as u64,
    })
}

fn ray_from(c: &SignCert) -> Option<u64> {
    match c.domain.n_range.to {
        None => Some(c.domain.n_range.from),
        Some(_) => None,
    }
}

/// Checks that the certificates of one `ω` add up to window nonemptiness
/// for every `n ≥ 2ω + 6`. Returns what is missing.
pub fn audit_omega<'a, I>(omega: u32, k_max: u32, certs: I) -> Result<(), Vec<String>>
where
    I: IntoIterator<Item = &'a SignCert>,
{
    let n_lo = 2 * omega as u64 + 6;
    let mut missing = Vec::new();
    let certs: Vec<&SignCert> = certs.into_iter().collect();
    let has = |pred: &dyn Fn(&ClaimKind) -> bool, from: u64| {
        certs
            .iter()
            .any(|c| pred(&c.claim.kind) && ray_from(c).is_some_and(|f| f <= from))
    };
    for k in 1..=omega / 2 {
        let checks: [(&str, ClaimKind); 3] = [
            ("d > 0", ClaimKind::DPositive { omega, k }),
            ("nu - n + 1 > 0", ClaimKind::NuGapPositive { omega, k }),
            ("U < 0", ClaimKind::UNegative { omega, k }),
        ];
        for (what, kind) in checks {
            if !has(&|c| *c == kind, n_lo) {
                missing.push(format!("no ray certificate for {what} at k={k} from n={n_lo}"));
            }
        }
    }
    // The tail starts where its certificates start; they must agree.
    let tail_starts: Vec<u64> = certs
        .iter()
        .filter(|c| {
            matches!(
                c.claim.kind,
                ClaimKind::DeltaPositive { .. }
                    | ClaimKind::MinorantPositive { .. }
                    | ClaimKind::DeltaMinorant { .. }
                    | ClaimKind::DDecreasing { .. }
                    | ClaimKind::PairMinorant { .. }
            )
        })
        .filter_map(|c| ray_from(c))
        .collect();
    let Some(&t) = tail_starts.iter().max() else {
        missing.push("no tail certificates".into());
        return Err(missing);
    };
    if k_max == 1 {
        if !has(&|c| *c == ClaimKind::DeltaPositive { omega, k: 1 }, t) {
            missing.push(format!("no certificate for Delta_1 > 0 from n={t}"));
        }
    } else {
        let mut minorants: BTreeMap<u32, Minorant> = BTreeMap::new();
        for c in &certs {
            if let ClaimKind::MinorantPositive { omega: w, k, minorant } = &c.claim.kind {
                let also_gap = certs.iter().any(|d| {
                    d.claim.kind
                        == ClaimKind::DeltaMinorant {
                            omega: *w,
                            k: *k,
                            minorant: minorant.clone(),
                        }
                        && ray_from(d).is_some_and(|f| f <= t)
                });
                if *w == omega && ray_from(c).is_some_and(|f| f <= t) && also_gap {
                    minorants.insert(*k, minorant.clone());
                }
            }
        }
        for k in 1..=k_max {
            if !minorants.contains_key(&k) {
                missing.push(format!("no certified minorant for sqrt(Delta_{k}) from n={t}"));
            }
        }
        for k in 1..=k_max {
            for j in k + 1..=k_max {
                if !has(&|c| *c == ClaimKind::DDecreasing { omega, k, j }, t) {
                    missing.push(format!("no certificate for d_{k} > d_{j} from n={t}"));
                }
                let (Some(lk), Some(lj)) = (minorants.get(&k), minorants.get(&j)) else {
                    continue;
                };
                let want = ClaimKind::PairMinorant {
                    omega,
                    k,
                    j,
                    lower: lk.clone(),
                    upper: lj.clone(),
                };
                if !has(&|c| *c == want, t) {
                    missing.push(format!("no pair certificate for x_{j} < y_{k} from n={t}"));
                }
            }
        }
    }
    if t > n_lo {
        let covered = certs.iter().any(|c| {
            c.claim.kind == ClaimKind::WindowWitnesses { omega, k_max }
                && c.domain.n_range.from <= n_lo
                && c.domain.n_range.to.is_some_and(|to| to + 1 >= t)
        });
        if !covered {
            missing.push(format!("no witness table covering [{n_lo}, {}]", t - 1));
        }
    }
    if missing.is_empty() {
        Ok(())
    } else {
        Err(missing)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyOutcome {
    pub certificates: usize,
    pub replayed: usize,
    pub failures: Vec<String>,
    pub verdict: Verdict,
    pub recorded: Verdict,
}

impl VerifyOutcome {
    pub fn matches_record(&self) -> bool {
        self.verdict == self.recorded
    }

    pub fn exit_code(&self) -> i32 {
        if self.matches_record() {
            self.verdict.exit_code()
        } else {
            exit::INCONCLUSIVE
        }
    }
}

/// Re-derives the verdict of a report from its certificates alone, using
/// only rational arithmetic.
pub fn verify_report(report: &LemmaReport) -> VerifyOutcome {
    let mut failures = Vec::new();
    let mut ok = vec![false; report.certificates.len()];
    for (i, c) in report.certificates.iter().enumerate() {
        match replay(c) {
            Ok(()) => ok[i] = true,
            Err(e) => failures.push(format!("certificate {i} ('{}'): {e}", c.claim.statement)),
        }
    }
    let replayed = ok.iter().filter(|x| **x).count();
    let mut falsified: Option<(u32, u64)> = None;
    let mut items = failures.clone();
    if report.schema != SCHEMA {
        items.push(format!("unknown schema {}", report.schema));
    }
    for omega in report.config.omega.iter() {
        let k_max = report.config.k_max(omega);
        let mine: Vec<&SignCert> = report
            .certificates
            .iter()
            .zip(&ok)
            .filter(|(c, good)| **good && c.domain.omega == Some(omega))
            .map(|(c, _)| c)
            .collect();
        let gap = mine.iter().find_map(|c| match c.claim.kind {
            ClaimKind::EndpointGap {
                n, lower_k, upper_k, ..
            } if lower_k <= k_max && upper_k <= k_max && c.claim.sign != Sign::Positive => Some(n),
            _ => None,
        });
        if let Some(n) = gap {
            if falsified.is_none() {
                falsified = Some((omega, n));
            }
            continue;
        }
        if let Err(missing) = audit_omega(omega, k_max, mine) {
            items.extend(missing.into_iter().map(|m| format!("omega={omega}: {m}")));
        }
    }
    let verdict = match falsified {
        Some((omega, n)) => Verdict::Falsified { omega, n },
        None if items.is_empty() => Verdict::Certified,
        None => Verdict::Inconclusive { items },
    };
    VerifyOutcome {
        certificates: report.certificates.len(),
        replayed,
        failures,
        verdict,
        recorded: report.verdict.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::OmegaRange;

    fn small() -> LemmaReport {
        let mut c = RunConfig::new(OmegaRange { from: 3, to: 5 });
        c.n_max = 40;
        c.n_tail = 40;
        run_certify(&c).unwrap()
    }

    #[test]
    fn certifies_and_verifies() {
        let r = small();
        assert_eq!(r.verdict, Verdict::Certified, "{}", r.verdict);
        assert!(r.crosscheck.disagreements.is_empty());
        let v = verify_report(&r);
        assert!(v.failures.is_empty());
        assert_eq!(v.verdict, Verdict::Certified);
        let back = LemmaReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn dropped_certificate_is_noticed() {
        let mut r = small();
        let i = r
            .certificates
            .iter()
            .position(|c| matches!(c.claim.kind, ClaimKind::PairMinorant { .. }))
            .unwrap();
        r.certificates.remove(i);
        assert!(matches!(verify_report(&r).verdict, Verdict::Inconclusive { .. }));
    }

    #[test]
    fn tampered_witness_is_noticed() {
        let mut r = small();
        for c in &mut r.certificates {
            if let yc_core::certify::Witness::WindowTable { rows } = &mut c.witness {
                rows[3].c = yc_core::exact::int(5);
                break;
            }
        }
        let v = verify_report(&r);
        assert_eq!(v.failures.len(), 1);
        assert!(!v.matches_record());
    }
}
