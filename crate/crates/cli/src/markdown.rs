//! Human-readable renderings of the reports.

use std::fmt::Write;

use yc_core::certify::{ClaimKind, Witness};
use yc_core::exact::rational::format_rational;

use crate::corollary::CorollaryReport;
use crate::falsify::FalsifyReport;
use crate::integrals::IntegralsReport;
use crate::report::{LemmaReport, OmegaStatus};

fn status(s: &OmegaStatus) -> String {
    match s {
        OmegaStatus::Certified => "certified".into(),
        OmegaStatus::Falsified { n } => format!("empty window at n = {n}"),
        OmegaStatus::Inconclusive { reasons } => format!("inconclusive ({})", reasons.len()),
    }
}

pub fn lemma_report(r: &LemmaReport) -> String {
    let mut s = String::new();
    let c = &r.config;
    let _ = writeln!(s, "# Window certification\n");
    let _ = writeln!(s, "**Verdict:** {}\n", r.verdict);
    let _ = writeln!(
        s,
        "omega = {}, witnesses up to n = {}, tail from n = {}, q = {}, precision = {} digits\n",
        c.omega,
        c.n_max,
        c.n_tail,
        c.q.map_or("worst case".to_string(), |q| q.to_string()),
        c.precision
    );
    let _ = writeln!(
        s,
        "{} certificates; numeric cross-check: {} evaluations, {} unresolved, {} disagreements\n",
        r.certificates.len(),
        r.crosscheck.evaluations,
        r.crosscheck.unresolved,
        r.crosscheck.disagreements.len()
    );
    let _ = writeln!(s, "| omega | k_max | witnesses | tail from | certificates | status |");
    let _ = writeln!(s, "|---|---|---|---|---|---|");
    for o in &r.omegas {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} |",
            o.omega,
            o.k_max,
            o.exhaustive.as_ref().map_or("-".into(), |x| x.to_string()),
            o.tail_from.map_or("-".into(), |t| t.to_string()),
            o.certificates.len(),
            status(&o.status)
        );
    }
    for o in &r.omegas {
        let _ = writeln!(s, "\n## omega = {}\n", o.omega);
        if let OmegaStatus::Inconclusive { reasons } = &o.status {
            for x in reasons {
                let _ = writeln!(s, "- {x}");
            }
            let _ = writeln!(s);
        }
        for inf in &o.inference {
            let _ = writeln!(s, "- {inf}");
        }
        if !o.minorants.is_empty() {
            let _ = writeln!(s, "\nMinorants of sqrt(Delta_k):\n");
            for (k, m) in &o.minorants {
                let _ = writeln!(s, "- L_{k}(n) = {m}");
            }
        }
        let _ = writeln!(s, "\nRay certificates:\n");
        let _ = writeln!(s, "| claim | from | method |");
        let _ = writeln!(s, "|---|---|---|");
        for c in r.certificates_of(o) {
            if matches!(c.claim.kind, ClaimKind::WindowWitnesses { .. }) {
                continue;
            }
            let _ = writeln!(
                s,
                "| {} | {} | {:?} |",
                c.claim.statement, c.domain.n_range, c.method
            );
        }
        for c in r.certificates_of(o) {
            if let Witness::WindowTable { rows } = &c.witness {
                let _ = writeln!(s, "\nWitness table:\n");
                let _ = writeln!(s, "| n | c | max x at k | min y at k |");
                let _ = writeln!(s, "|---|---|---|---|");
                for row in rows {
                    let _ = writeln!(
                        s,
                        "| {} | {} | {} | {} |",
                        row.n,
                        format_rational(&row.c),
                        row.argmax_x,
                        row.argmin_y
                    );
                }
            }
        }
    }
    s
}

pub fn falsify_report(r: &FalsifyReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# Empty-window scan, omega = {}\n", r.omega);
    let _ = writeln!(s, "Scanned n in [{}, {}] with k <= {}.\n", r.from, r.to, r.k_max);
    match &r.first_empty {
        Some(e) => {
            let _ = writeln!(
                s,
                "First empty window at **n = {}**: x_{} = {:.6e} >= y_{} = {:.6e}.",
                e.n, e.lower_k, e.x_lower, e.upper_k, e.y_upper
            );
            if let Some(t) = &r.witnesses {
                let _ = writeln!(s, "\nEvery n in {} has a witness.", t.domain.n_range);
            }
        }
        None => {
            let _ = writeln!(s, "None found: every scanned n has a witness.");
        }
    }
    let _ = writeln!(s, "\n**Verdict:** {}", r.verdict);
    s
}

pub fn corollary_report(r: &CorollaryReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# Dimensions 3 to 37\n");
    let _ = writeln!(s, "**Verdict:** {}\n", r.verdict);
    let _ = writeln!(s, "| n | omega in scope | witnesses | deferred |");
    let _ = writeln!(s, "|---|---|---|---|");
    for row in &r.rows {
        let scope = match (row.in_scope.first(), row.in_scope.last()) {
            (Some(a), Some(b)) => format!("{a}..{b}"),
            _ => "none".into(),
        };
        let w: Vec<String> = row.witnesses.iter().map(|w| format!("{}: {}", w.omega, w.c)).collect();
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} |",
            row.n,
            scope,
            if w.is_empty() { "-".into() } else { w.join(", ") },
            row.deferred.join("; ")
        );
    }
    s
}

pub fn integrals_report(r: &IntegralsReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# Integral and identity checks\n");
    let rec = &r.recurrences;
    let _ = writeln!(
        s,
        "- recurrences up to a = {}: {} relations checked, {} skipped, {}",
        rec.a_max,
        rec.checked,
        rec.skipped,
        rec.first_failure.as_deref().unwrap_or("all exact")
    );
    let worst = r.numeric.iter().map(|x| x.relative_error).fold(0.0, f64::max);
    let _ = writeln!(
        s,
        "- quadrature against closed forms: {} indices, worst relative error {worst:.3e}",
        r.numeric.len()
    );
    let _ = writeln!(
        s,
        "- expansion coefficient: {} cases ({} logarithmic), failures {:?}",
        r.expansion_checked, r.expansion_logarithmic, r.expansion_failures
    );
    let _ = writeln!(s, "- derivative of P: failures at omega {:?}", r.p_prime_failures);
    let _ = writeln!(s, "\n| n | printed identity residual | sphere constant residual |");
    let _ = writeln!(s, "|---|---|---|");
    for row in &r.leading_constant {
        let _ = writeln!(
            s,
            "| {} | {:.6e} | {:.3e} |",
            row.n, row.printed_residual, row.sphere_residual
        );
    }
    let _ = writeln!(s, "\n**Passed:** {}", r.passed);
    s
}
