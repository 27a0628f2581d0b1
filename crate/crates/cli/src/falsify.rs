//! Scan for the smallest dimension with an empty worst-case window.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use yc_core::certify::lemma::exhaustive_windows;
use yc_core::certify::window::roots_in;
use yc_core::certify::{replay, ClaimKind, NRange, OmegaData, Sign, SignCert, Witness};
use yc_core::Error;

use crate::report::{Verdict, SCHEMA};

/// Dimensions scanned together; the first empty window is found in order.
const CHUNK: u64 = 256;
pub const DEFAULT_SCAN_END: u64 = 5000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmptyWindow {
    pub n: u64,
    /// `x_{lower_k} ≥ y_{upper_k}`.
    pub lower_k: u32,
    pub upper_k: u32,
    pub x_lower: f64,
    pub y_upper: f64,
    pub certificate: SignCert,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FalsifyReport {
    pub schema: u32,
    pub omega: u32,
    pub k_max: u32,
    pub from: u64,
    pub to: u64,
    /// Witnesses for every scanned dimension before the first empty window.
    pub witnesses: Option<SignCert>,
    pub first_empty: Option<EmptyWindow>,
    pub verdict: Verdict,
    pub wall_time_ms: u64,
}

impl FalsifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Exit code: falsified when an empty window was found.
    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }
}

fn merge_tables(acc: &mut Option<SignCert>, next: SignCert) {
    let Some(cur) = acc else {
        *acc = Some(next);
        return;
    };
    let (Witness::WindowTable { rows }, Witness::WindowTable { rows: more }) = (&mut cur.witness, next.witness) else {
        return;
    };
    rows.extend(more);
    let from = cur.domain.n_range.from;
    let to = next.domain.n_range.to;
    cur.domain.n_range = NRange { from, to };
    if let ClaimKind::WindowWitnesses { k_max, .. } = cur.claim.kind {
        cur.claim.statement = format!(
            "for each n in [{from}, {}] the listed c gives q_k(c) < 0 for all k <= {k_max}",
            to.unwrap_or(from)
        );
    }
    cur.wall_time_ms += next.wall_time_ms;
}

/// Scans `n ∈ [from, to]` in order for the first empty window with
/// `k ≤ k_max`, keeping a witness for every earlier `n`.
pub fn falsify(omega: u32, from: u64, to: u64, k_max: u32) -> Result<FalsifyReport, Error> {
    let started = Instant::now();
    let data = OmegaData::new(omega)?;
    let n_lo = 2 * omega as u64 + 6;
    if from < n_lo || from > to {
        return Err(Error::InvalidParams(format!(
            "scan range must be nonempty and start at n >= {n_lo}"
        )));
    }
    if k_max < 1 || k_max > data.k_max() {
        return Err(Error::InvalidParams(format!("k_max must lie in [1, {}]", data.k_max())));
    }
    let mut table: Option<SignCert> = None;
    let mut first_empty = None;
    let mut a = from;
    while a <= to {
        let b = (a + CHUNK - 1).min(to);
        match exhaustive_windows(&data, a, b, k_max)? {
            Ok(t) => merge_tables(&mut table, t),
            Err(gap) => {
                let ClaimKind::EndpointGap {
                    n, lower_k, upper_k, ..
                } = gap.claim.kind
                else {
                    unreachable!("an empty window yields an endpoint gap");
                };
                // The chunk before n is still covered by witnesses.
                if n > a {
                    if let Ok(t) = exhaustive_windows(&data, a, n - 1, k_max)? {
                        merge_tables(&mut table, t);
                    }
                }
                let (x, _) = roots_in(&data, lower_k, n)?;
                let (_, y) = roots_in(&data, upper_k, n)?;
                first_empty = Some(EmptyWindow {
                    n,
                    lower_k,
                    upper_k,
                    x_lower: x.to_f64(),
                    y_upper: y.to_f64(),
                    certificate: gap,
                });
                break;
            }
        }
        a = b + 1;
    }
    let verdict = match &first_empty {
        Some(e) => Verdict::Falsified { omega, n: e.n },
        None => Verdict::Certified,
    };
    Ok(FalsifyReport {
        schema: SCHEMA,
        omega,
        k_max,
        from,
        to,
        witnesses: table,
        first_empty,
        verdict,
        wall_time_ms: started.elapsed().as_millis() as u64,
    })
}

/// Replays a falsification report: the witness table must cover
/// `[from, n - 1]` and the endpoint gap at `n` must show `y ≤ x`.
pub fn verify_falsify(r: &FalsifyReport) -> Result<Verdict, String> {
    let end = r.first_empty.as_ref().map_or(r.to, |e| e.n - 1);
    if end >= r.from {
        let t = r.witnesses.as_ref().ok_or("missing witness table")?;
        replay(t).map_err(|e| e.to_string())?;
        let ok_kind = t.claim.kind
            == ClaimKind::WindowWitnesses {
                omega: r.omega,
                k_max: r.k_max,
            };
        if !ok_kind || t.domain.n_range != NRange::closed(r.from, end) {
            return Err("witness table does not match the scanned range".into());
        }
    }
    match &r.first_empty {
        None => Ok(Verdict::Certified),
        Some(e) => {
            replay(&e.certificate).map_err(|e| e.to_string())?;
            let want = ClaimKind::EndpointGap {
                omega: r.omega,
                n: e.n,
                lower_k: e.lower_k,
                upper_k: e.upper_k,
            };
            if e.certificate.claim.kind != want || e.certificate.claim.sign == Sign::Positive {
                return Err("endpoint gap certificate does not show an empty window".into());
            }
            if e.lower_k > r.k_max || e.upper_k > r.k_max {
                return Err("endpoint indices exceed k_max".into());
            }
            Ok(Verdict::Falsified { omega: r.omega, n: e.n })
        }
    }
}
