//! Acceptance gate: one line per criterion, nonzero exit on any failure.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use yc_cli::corollary::{corollary_sweep, N_FROM, N_TO};
use yc_cli::falsify::{verify_falsify, FalsifyReport};
use yc_cli::report::OmegaStatus;
use yc_cli::{exit, verify_report, LemmaReport, Verdict};
use yc_core::beta::{leading_constant_check, verify_recurrences};
use yc_core::certify::{certify_lemma_poly, replay, witness_verify, ClaimKind, Sign, Witness};
use yc_core::exact::{rat, Rational};
use yc_core::spectral::{d, delta, expansion_check, p_prime_check, u, SpectralParams};

type Outcome = Result<String, String>;

fn yc(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_yc"))
        .args(args)
        .env_remove("YC_PRECISION")
        .output()
        .map_err(|e| format!("spawning yc: {e}"))?;
    let code = out.status.code().ok_or("yc was killed")?;
    Ok((code, String::from_utf8_lossy(&out.stdout).into_owned()))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn certify_run(dir: &Path) -> Result<LemmaReport, String> {
    let out = dir.to_str().ok_or("temp path is not UTF-8")?;
    let (code, stdout) = yc(&["certify", "--omega", "3..15", "--out", out])?;
    ensure(code == exit::CERTIFIED, || format!("exit code {code}: {}", stdout.trim()))?;
    let text = std::fs::read_to_string(dir.join("certify.json")).map_err(|e| e.to_string())?;
    LemmaReport::from_json(&text).map_err(|e| e.to_string())
}

fn ac1(r: &LemmaReport, secs: f64) -> Outcome {
    ensure(r.verdict == Verdict::Certified, || format!("verdict {}", r.verdict))?;
    ensure(r.config.n_max == 200, || format!("witnesses stop at {}", r.config.n_max))?;
    let mut rows = 0;
    for omega in 3..=15u32 {
        let o = r.omega(omega).ok_or(format!("omega {omega} missing"))?;
        ensure(o.status == OmegaStatus::Certified, || format!("omega {omega}: {:?}", o.status))?;
        let k_max = omega / 2;
        let lo = 2 * omega as u64 + 6;
        let table = r
            .certificates_of(o)
            .find_map(|c| match (&c.claim.kind, &c.witness) {
                (ClaimKind::WindowWitnesses { k_max: k, .. }, Witness::WindowTable { rows }) if *k == k_max => Some(rows),
                _ => None,
            })
            .ok_or(format!("omega {omega}: no witness table"))?;
        for n in lo..=200 {
            let row = table.iter().find(|w| w.n == n).ok_or(format!("omega {omega}: no witness at n = {n}"))?;
            let cert = witness_verify(omega, n, &row.c, k_max).map_err(|e| e.to_string())?;
            ensure(cert.claim.sign == Sign::Negative, || format!("omega {omega}, n {n}: witness fails"))?;
            rows += 1;
        }
        let tail = o.tail_from.ok_or(format!("omega {omega}: no tail"))?;
        ensure(tail <= 201, || format!("omega {omega}: tail starts at {tail}"))?;
        for k in 1..=k_max {
            for j in k + 1..=k_max {
                let has = r.certificates_of(o).any(|c| {
                    matches!(c.claim.kind, ClaimKind::PairMinorant { k: a, j: b, .. } if a == k && b == j)
                        && c.domain.n_range.from <= 201
                        && c.domain.n_range.to.is_none()
                });
                ensure(has, || format!("omega {omega}: no tail certificate for pair ({k}, {j})"))?;
            }
        }
    }
    let v = verify_report(r);
    ensure(v.failures.is_empty() && v.replayed == v.certificates, || {
        format!("replay failures: {:?}", v.failures)
    })?;
    Ok(format!(
        "CERTIFIED in {secs:.1} s; {rows} witnesses re-verified, {}/{} certificates replayed",
        v.replayed, v.certificates
    ))
}

fn ac2() -> Outcome {
    let mut count = 0;
    for omega in 3..=15u32 {
        let b = certify_lemma_poly(omega).map_err(|e| format!("omega {omega}: {e}"))?;
        ensure(b.certificates.len() == 3 * (omega / 2) as usize, || format!("omega {omega}: missing claims"))?;
        for c in &b.certificates {
            replay(c).map_err(|e| format!("omega {omega}: {e}"))?;
            ensure(c.domain.n_range.from == 2 * omega as u64 + 6 && c.domain.n_range.to.is_none(), || {
                format!("omega {omega}: {} not on the full ray", c.claim.statement)
            })?;
        }
        count += b.certificates.len();
    }
    Ok(format!("{count} ray certificates (d_k > 0, nu_k - n + 1 > 0, U_k < 0) replay"))
}

fn ac3(dir: &Path) -> Outcome {
    let out = dir.to_str().ok_or("temp path is not UTF-8")?;
    let (code, stdout) = yc(&["falsify", "--omega", "16", "--out", out])?;
    ensure(code == exit::FALSIFIED, || format!("exit code {code}: {}", stdout.trim()))?;
    let text = std::fs::read_to_string(dir.join("falsify.json")).map_err(|e| e.to_string())?;
    let r: FalsifyReport = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let e = r.first_empty.as_ref().ok_or("no empty window reported")?;
    ensure(e.n >= 38, || format!("empty window at n = {} < 38", e.n))?;
    ensure(r.from <= 38, || format!("scan starts at {}", r.from))?;
    let v = verify_falsify(&r)?;
    ensure(v == r.verdict, || format!("replayed verdict {v}"))?;
    Ok(format!(
        "first empty window at n = {} (x_{} >= y_{}); all n in [{}, {}] have witnesses",
        e.n,
        e.lower_k,
        e.upper_k,
        r.from,
        e.n - 1
    ))
}

fn ac4() -> Outcome {
    let r = verify_recurrences(30).map_err(|e| e.to_string())?;
    ensure(r.passed(), || format!("{:?}", r.first_failure))?;
    Ok(format!("{} exact relations, {} boundary cases skipped", r.checked, r.skipped.len()))
}

fn ac5() -> Outcome {
    let mut count = 0;
    for omega in 3..=15u32 {
        for n in 2 * omega + 7..=60 {
            let r = expansion_check(omega, n).map_err(|e| e.to_string())?;
            ensure(r.passed, || format!("omega {omega}, n {n}: {} vs {}", r.assembled, r.expected))?;
            count += 1;
        }
    }
    Ok(format!("{count} (omega, n) cases exact"))
}

fn ac6() -> Outcome {
    for omega in 3..=15u32 {
        let r = p_prime_check(omega).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("omega {omega}: {r:?}"))?;
    }
    Ok("derivative of P matches coefficient by coefficient for omega 3..15".into())
}

/// Direct substitution with plain rationals.
fn direct(omega: i64, k: i64, n: i64) -> (Rational, Rational, Rational) {
    let r = |x: i64| rat(x, 1);
    let w2 = r((omega + 2) * (omega + 2));
    let nu = r((omega - 2 * k + 2) * (n + omega - 2 * k));
    let (n, n1, n2, n3) = (r(n), r(n - 1), r(n - 2), r(n - 3));
    let d = r(4) * (&n1 * &n2 * &nu - &n * &n2 * &n2 + &w2 * (&n * &n + &n + r(2)));
    let u = (&n3 / (r(4) * &n2) - (&n1 * &n1 + &n1 * &w2) / (r(4) * &n2 * (&nu - &n1))) * &nu;
    let delta = &n2 * &n2 - &d * &u / (&nu * &nu);
    (u, d, delta)
}

fn ac7(r: &LemmaReport) -> Outcome {
    let p = SpectralParams::new(3, 1).map_err(|e| e.to_string())?;
    let n = rat(12, 1);
    let lib = (
        u(p).eval(&n).map_err(|e| e.to_string())?,
        d(p).eval(&n),
        delta(p).eval(&n).map_err(|e| e.to_string())?,
    );
    let want = (rat(-351, 70), rat(28160, 1), rat(17548, 91));
    ensure(lib == want, || format!("library gives {lib:?}"))?;
    ensure(direct(3, 1, 12) == want, || "direct substitution disagrees".into())?;
    let c = rat(5, 1408);
    let cert = witness_verify(3, 12, &c, 1).map_err(|e| e.to_string())?;
    ensure(cert.claim.sign == Sign::Negative, || "5/1408 fails".into())?;
    let o = r.omega(3).ok_or("omega 3 missing")?;
    let recorded = r.certificates_of(o).find_map(|cert| match &cert.witness {
        Witness::WindowTable { rows } => rows.iter().find(|w| w.n == 12).map(|w| w.c.clone()),
        _ => None,
    });
    ensure(recorded.as_ref() == Some(&c), || format!("report records {recorded:?} at (3, 12)"))?;
    Ok("u = -351/70, d = 28160, Delta = 17548/91, witness 5/1408".into())
}

fn ac8(r: &LemmaReport) -> Outcome {
    let s = corollary_sweep(r);
    ensure(s.verdict == Verdict::Certified, || format!("verdict {}", s.verdict))?;
    ensure(s.rows.len() as u64 == N_TO - N_FROM + 1, || "rows missing".into())?;
    let mut windows = 0;
    for row in &s.rows {
        ensure(row.missing.is_empty() && !row.deferred.is_empty(), || format!("n = {}: {row:?}", row.n))?;
        ensure(row.witnesses.len() == row.in_scope.len(), || format!("n = {}", row.n))?;
        windows += row.witnesses.len();
    }
    Ok(format!("n in [{N_FROM}, {N_TO}]: {windows} certified windows, every other case deferred"))
}

fn ac9(r: &LemmaReport) -> Outcome {
    let x = &r.crosscheck;
    ensure(x.precision == 60, || format!("precision {}", x.precision))?;
    ensure(x.evaluations > 0 && x.disagreements.is_empty(), || format!("{:?}", x.disagreements))?;
    let mut worst: f64 = 0.0;
    let mut printed = Vec::new();
    for n in 3..=40 {
        let l = leading_constant_check(n, 60).map_err(|e| e.to_string())?;
        let s = l.sphere.residual.to_f64().abs();
        ensure(s < 1e-25, || format!("n = {n}: sphere residual {s:e}"))?;
        worst = worst.max(s);
        printed.push((n, l.printed.residual.to_f64()));
    }
    let logged: Vec<String> = printed
        .iter()
        .filter(|(n, _)| [3, 4, 10, 40].contains(n))
        .map(|(n, v)| format!("n={n}: {v:.4}"))
        .collect();
    let nonzero = printed.iter().filter(|(_, v)| v.abs() > 1e-25).count();
    Ok(format!(
        "{} evaluations at 60 digits, 0 disagreements ({} unresolved); sphere residual <= {worst:.1e}; \
         printed identity residual (logged, not asserted) {}; nonzero at {nonzero}/38 n",
        x.evaluations,
        x.unresolved,
        logged.join(", ")
    ))
}

fn report(id: &str, title: &str, outcome: Outcome) -> bool {
    match outcome {
        Ok(msg) => {
            println!("[PASS] {id} {title}: {msg}");
            true
        }
        Err(msg) => {
            println!("[FAIL] {id} {title}: {msg}");
            false
        }
    }
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().expect("temporary directory");
    let started = Instant::now();
    let run = certify_run(dir.path());
    let secs = started.elapsed().as_secs_f64();
    let need = |f: &dyn Fn(&LemmaReport) -> Outcome| match &run {
        Ok(r) => f(r),
        Err(e) => Err(format!("certify run failed: {e}")),
    };
    let results = [
        report("AC1", "window intersection for omega 3..15", need(&|r| ac1(r, secs))),
        report("AC2", "polynomial lemma for omega 3..15", ac2()),
        report("AC3", "omega = 16 falsification", ac3(dir.path())),
        report("AC4", "integral recurrences to a = 30", ac4()),
        report("AC5", "expansion coefficient identity", ac5()),
        report("AC6", "derivative of P", ac6()),
        report("AC7", "spot values", need(&ac7)),
        report("AC8", "dimensions 3..37", need(&ac8)),
        report("AC9", "numeric oracle agreement", need(&ac9)),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("{passed}/{} acceptance criteria pass", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
