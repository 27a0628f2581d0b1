use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use yc_cli::config::{parse_inclusive, resolve_precision, Format, OmegaRange, RunConfig, DEFAULT_N_MAX};
use yc_cli::corollary::corollary_sweep;
use yc_cli::falsify::{falsify, verify_falsify, FalsifyReport, DEFAULT_SCAN_END};
use yc_cli::integrals::{run_integrals, threshold};
use yc_cli::report::{run_certify, verify_report, LemmaReport};
use yc_cli::{exit, markdown};
use yc_core::certify::window;
use yc_core::oracle::crosscheck::crosscheck_window;

#[derive(Parser, Debug)]
#[command(name = "yc", version, about = "Certify the c-window inequalities for Yamabe test functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Decimal digits for numeric cross-checks (at least 30; default from YC_PRECISION or 60).
    #[arg(long)]
    precision: Option<u32>,
    /// Output format.
    #[arg(long, default_value = "json", value_parser = parse_format)]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Write the report into this directory instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct SweepArgs {
    /// Orders to certify, `A..B` or `A`.
    #[arg(long, default_value = "3..15", value_parser = parse_omega)]
    omega: OmegaRange,
    /// Last dimension covered by explicit witnesses.
    #[arg(long, default_value_t = DEFAULT_N_MAX)]
    n_max: u64,
    /// First dimension covered by ray certificates (default: --n-max).
    #[arg(long)]
    n_tail: Option<u64>,
    /// Active eigencomponents (default: the worst case floor(omega/2)).
    #[arg(long)]
    q: Option<u32>,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify window nonemptiness for every n >= 2 omega + 6.
    Certify(SweepArgs),
    /// Like certify, writing both JSON and Markdown into --out.
    Report(SweepArgs),
    /// Scan for the smallest n with an empty window.
    Falsify {
        #[arg(long, value_parser = parse_omega)]
        omega: OmegaRange,
        /// Dimensions to scan, `A..B` (default: 2 omega + 6 .. 5000).
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        q: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// The c-window at one (omega, n).
    Window {
        #[arg(long, value_parser = parse_omega)]
        omega: OmegaRange,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// Beta-integral recurrences, quadrature, expansion and derivative identities.
    Integrals {
        #[arg(long, default_value_t = 30)]
        a_max: u32,
        #[command(flatten)]
        common: Common,
    },
    /// The threshold n(n-1) omega_n^{2/n} m^{2/n}.
    Threshold {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        m: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Certified windows for every dimension 3..37.
    Corollary {
        #[arg(long, default_value_t = DEFAULT_N_MAX)]
        n_max: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Re-verify a JSON report from its certificates.
    Verify { file: PathBuf },
}

fn parse_omega(s: &str) -> Result<OmegaRange, String> {
    s.parse()
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

struct Usage(String);

impl std::fmt::Debug for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn precision(c: &Common) -> Result<u32> {
    let p = resolve_precision(c.precision).map_err(usage)?;
    if p < yc_cli::config::MIN_PRECISION {
        return Err(usage(format!(
            "precision must be at least {} digits",
            yc_cli::config::MIN_PRECISION
        )));
    }
    Ok(p)
}

fn set_threads(c: &Common) -> Result<()> {
    if let Some(t) = c.threads {
        if t == 0 {
            return Err(usage("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the thread pool")?;
    }
    Ok(())
}

fn write_file(dir: &Path, name: &str, body: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// Prints `body` or writes it to `--out`, with a one-line summary on stdout.
fn emit(c: &Common, stem: &str, json: String, md: impl FnOnce() -> String, summary: &str) -> Result<()> {
    let (ext, body) = match c.format {
        Format::Json => ("json", json),
        Format::Md => ("md", md()),
    };
    match &c.out {
        Some(dir) => {
            let path = write_file(dir, &format!("{stem}.{ext}"), &body)?;
            println!("{summary} -> {}", path.display());
        }
        None => {
            let mut out = std::io::stdout().lock();
            if let Err(e) = writeln!(out, "{body}") {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(e).context("writing to stdout");
                }
            }
        }
    }
    Ok(())
}

fn sweep_config(a: &SweepArgs) -> Result<RunConfig> {
    let mut cfg = RunConfig::new(a.omega);
    cfg.n_max = a.n_max;
    cfg.n_tail = a.n_tail.unwrap_or(a.n_max);
    cfg.q = a.q;
    cfg.precision = precision(&a.common)?;
    cfg.format = a.common.format;
    cfg.threads = a.common.threads;
    cfg.validate().map_err(usage)?;
    Ok(cfg)
}

fn single_omega(r: OmegaRange) -> Result<u32> {
    if r.from != r.to {
        return Err(usage("this command takes a single omega"));
    }
    Ok(r.from)
}

fn k_max_for(omega: u32, q: Option<u32>) -> Result<u32> {
    match q {
        Some(0) => Err(usage("--q must be at least 1")),
        Some(q) => Ok(q.min(omega / 2)),
        None => Ok(omega / 2),
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Certify(a) => {
            let cfg = sweep_config(&a)?;
            set_threads(&a.common)?;
            let r = run_certify(&cfg).map_err(usage)?;
            let summary = format!("verdict {}", r.verdict);
            emit(&a.common, "certify", r.to_json(), || markdown::lemma_report(&r), &summary)?;
            eprintln!("{summary}");
            Ok(r.verdict.exit_code())
        }
        Command::Report(a) => {
            let cfg = sweep_config(&a)?;
            let dir = a.common.out.clone().ok_or_else(|| usage("report needs --out DIR"))?;
            set_threads(&a.common)?;
            let r = run_certify(&cfg).map_err(usage)?;
            let j = write_file(&dir, "report.json", &r.to_json())?;
            let m = write_file(&dir, "report.md", &markdown::lemma_report(&r))?;
            println!("verdict {} -> {}, {}", r.verdict, j.display(), m.display());
            Ok(r.verdict.exit_code())
        }
        Command::Falsify { omega, n, q, common } => {
            let omega = single_omega(omega)?;
            let k_max = k_max_for(omega, q)?;
            let (from, to) = match n {
                Some(s) => parse_inclusive(&s).map_err(usage)?,
                None => (2 * omega as u64 + 6, DEFAULT_SCAN_END),
            };
            if from < 2 * omega as u64 + 6 {
                return Err(usage(format!("the scan must start at n >= {}", 2 * omega + 6)));
            }
            set_threads(&common)?;
            let r = falsify(omega, from, to, k_max)?;
            let summary = match &r.first_empty {
                Some(e) => format!(
                    "omega={omega}: first empty window at n={} (x_{} >= y_{})",
                    e.n, e.lower_k, e.upper_k
                ),
                None => format!("omega={omega}: none found in [{from}, {to}]"),
            };
            emit(&common, "falsify", r.to_json(), || markdown::falsify_report(&r), &summary)?;
            eprintln!("{summary}");
            Ok(r.exit_code())
        }
        Command::Window { omega, n, q, common } => {
            let omega = single_omega(omega)?;
            let k_max = k_max_for(omega, q)?;
            let digits = precision(&common)?;
            if n < 2 * omega as u64 + 6 {
                return Err(usage(format!("n must be at least {}", 2 * omega + 6)));
            }
            let w = window(omega, n, k_max)?;
            let check = crosscheck_window(&w, digits)?;
            let endpoints: Vec<_> = w
                .endpoints
                .iter()
                .map(|(x, y)| serde_json::json!({ "x": x.to_f64(), "y": y.to_f64() }))
                .collect();
            let json = serde_json::json!({
                "window": &w,
                "approx_endpoints": endpoints,
                "crosscheck": &check,
            });
            let summary = match w.witness() {
                Some(c) => format!("omega={omega}, n={n}: nonempty, c = {c}"),
                None => format!("omega={omega}, n={n}: empty"),
            };
            let md = || {
                let mut s = format!("# Window omega = {omega}, n = {n}\n\n| k | x_k | y_k |\n|---|---|---|\n");
                for (k, (x, y)) in (1..).zip(&w.endpoints) {
                    s.push_str(&format!("| {k} | {:.9e} | {:.9e} |\n", x.to_f64(), y.to_f64()));
                }
                s.push_str(&format!("\n{summary}\n"));
                s
            };
            emit(&common, "window", serde_json::to_string_pretty(&json)?, md, &summary)?;
            Ok(if w.is_nonempty() { exit::CERTIFIED } else { exit::FALSIFIED })
        }
        Command::Integrals { a_max, common } => {
            let digits = precision(&common)?;
            let r = run_integrals(a_max, digits)?;
            let summary = format!("integral checks {}", if r.passed { "passed" } else { "FAILED" });
            emit(&common, "integrals", r.to_json(), || markdown::integrals_report(&r), &summary)?;
            Ok(if r.passed { exit::CERTIFIED } else { exit::INCONCLUSIVE })
        }
        Command::Threshold { n, m, common } => {
            let digits = precision(&common)?;
            let t = threshold(n, m, digits).map_err(|e| usage(e.to_string()))?;
            let summary = format!("n={n}, m={m}: {}", t.value);
            let md = || format!("n(n-1) omega_n^(2/n) m^(2/n) at n = {n}, m = {m}: {}\n", t.value);
            emit(&common, "threshold", serde_json::to_string_pretty(&t)?, md, &summary)?;
            Ok(exit::CERTIFIED)
        }
        Command::Corollary { n_max, common } => {
            let mut cfg = RunConfig::new(OmegaRange { from: 3, to: 15 });
            cfg.n_max = n_max.max(yc_cli::corollary::N_TO);
            cfg.n_tail = cfg.n_max;
            cfg.precision = precision(&common)?;
            cfg.validate().map_err(usage)?;
            set_threads(&common)?;
            let base = run_certify(&cfg).map_err(usage)?;
            let r = corollary_sweep(&base);
            let summary = format!("corollary sweep {}", r.verdict);
            emit(&common, "corollary", r.to_json(), || markdown::corollary_report(&r), &summary)?;
            Ok(r.verdict.exit_code())
        }
        Command::Verify { file } => {
            let text = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            if let Ok(r) = LemmaReport::from_json(&text) {
                let v = verify_report(&r);
                for f in &v.failures {
                    println!("FAIL {f}");
                }
                println!(
                    "replayed {}/{} certificates; verdict {}; recorded {}{}",
                    v.replayed,
                    v.certificates,
                    v.verdict,
                    v.recorded,
                    if v.matches_record() { "" } else { " (MISMATCH)" }
                );
                return Ok(v.exit_code());
            }
            let r: FalsifyReport = serde_json::from_str(&text)
                .map_err(|e| usage(format!("{} is not a report: {e}", file.display())))?;
            match verify_falsify(&r) {
                Ok(v) if v == r.verdict => {
                    println!("falsification report replays; verdict {v}");
                    Ok(v.exit_code())
                }
                Ok(v) => {
                    println!("replayed verdict {v} differs from recorded {}", r.verdict);
                    Ok(exit::INCONCLUSIVE)
                }
                Err(e) => {
                    println!("FAIL {e}");
                    Ok(exit::INCONCLUSIVE)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => exit::USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = if e.downcast_ref::<Usage>().is_some() {
                exit::USAGE
            } else {
                exit::INCONCLUSIVE
            };
            ExitCode::from(code as u8)
        }
    }
}
