//! Integral and identity checks, and the threshold constant.

use serde::Serialize;

use yc_core::beta::{
    integral_exact, leading_constant_check, sphere_volume, verify_recurrences, IntegralIndex,
};
use yc_core::exact::{rat, Rational};
use yc_core::oracle::{eval_pi_scaled, integral_numeric, HPValue, HpContext};
use yc_core::spectral::{expansion_check, p_prime_check, ExpansionCase};
use yc_core::Error;

pub const OMEGA_FROM: u32 = 3;
pub const OMEGA_TO: u32 = 15;
pub const EXPANSION_N_MAX: u32 = 60;
pub const LEADING_N: (u32, u32) = (3, 40);
pub const NUMERIC_SAMPLES: usize = 50;
pub const NUMERIC_TOLERANCE: f64 = 1e-25;

#[derive(Clone, Debug, Serialize)]
pub struct RecurrenceSummary {
    pub a_max: u32,
    pub checked: usize,
    pub skipped: usize,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NumericSample {
    pub a: u32,
    pub b: u32,
    pub exact: String,
    pub relative_error: f64,
    pub error_bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LeadingRow {
    pub n: u32,
    pub printed_residual: f64,
    pub sphere_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralsReport {
    pub recurrences: RecurrenceSummary,
    pub numeric: Vec<NumericSample>,
    pub expansion_checked: usize,
    pub expansion_logarithmic: usize,
    pub expansion_failures: Vec<(u32, u32)>,
    pub p_prime_failures: Vec<u32>,
    pub leading_constant: Vec<LeadingRow>,
    pub passed: bool,
}

impl IntegralsReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn recurrences_pass(&self) -> bool {
        self.recurrences.first_failure.is_none()
    }

    pub fn numeric_pass(&self) -> bool {
        self.numeric.len() == NUMERIC_SAMPLES
            && self.numeric.iter().all(|s| s.relative_error < NUMERIC_TOLERANCE)
    }

    pub fn sphere_pass(&self) -> bool {
        self.leading_constant.iter().all(|r| r.sphere_residual.abs() < NUMERIC_TOLERANCE)
    }
}

/// `NUMERIC_SAMPLES` convergent indices with `a ≤ a_max`, spread evenly
/// over the lattice in lexicographic order.
pub fn sample_indices(a_max: u32) -> Vec<IntegralIndex> {
    let all: Vec<IntegralIndex> = (1..=a_max)
        .flat_map(|a| (0..2 * a).map(move |b| IntegralIndex::new(a, b)))
        .filter(|i| i.is_convergent())
        .collect();
    if all.len() <= NUMERIC_SAMPLES {
        return all;
    }
    (0..NUMERIC_SAMPLES)
        .map(|i| all[i * (all.len() - 1) / (NUMERIC_SAMPLES - 1)])
        .collect()
}

fn relative(ctx: &mut HpContext, num: &HPValue, exact: &HPValue) -> Result<f64, Error> {
    let d = ctx.sub(num, exact);
    let r = ctx.div(&d, exact)?;
    Ok(r.to_f64().abs())
}

pub fn run_integrals(a_max: u32, digits: u32) -> Result<IntegralsReport, Error> {
    let rec = verify_recurrences(a_max)?;
    let recurrences = RecurrenceSummary {
        a_max,
        checked: rec.checked,
        skipped: rec.skipped.len(),
        first_failure: rec
            .first_failure
            .as_ref()
            .map(|f| format!("relation {} at (a, b) = ({}, {})", f.relation, f.a, f.b)),
    };
    // Quadrature precision must leave room below the tolerance.
    let qdigits = digits.max(40);
    let mut numeric = Vec::new();
    for idx in sample_indices(a_max) {
        let exact = integral_exact(idx)?;
        let num = integral_numeric(idx, qdigits)?;
        let mut ctx = HpContext::new(qdigits)?;
        let ex = eval_pi_scaled(&mut ctx, &exact);
        numeric.push(NumericSample {
            a: idx.a,
            b: idx.b,
            exact: exact.to_string(),
            relative_error: relative(&mut ctx, &num, &ex)?,
            error_bound: num.error_bound_f64(),
        });
    }
    let mut expansion_checked = 0;
    let mut expansion_logarithmic = 0;
    let mut expansion_failures = Vec::new();
    let mut p_prime_failures = Vec::new();
    for omega in OMEGA_FROM..=OMEGA_TO {
        if !p_prime_check(omega)?.passed() {
            p_prime_failures.push(omega);
        }
        for n in 2 * omega + 6..=EXPANSION_N_MAX {
            let r = expansion_check(omega, n)?;
            expansion_checked += 1;
            if r.case == ExpansionCase::Logarithmic {
                expansion_logarithmic += 1;
            }
            if !r.passed {
                expansion_failures.push((omega, n));
            }
        }
    }
    let mut leading_constant = Vec::new();
    for n in LEADING_N.0..=LEADING_N.1 {
        let r = leading_constant_check(n, digits)?;
        leading_constant.push(LeadingRow {
            n,
            printed_residual: r.printed.residual.to_f64(),
            sphere_residual: r.sphere.residual.to_f64(),
        });
    }
    let mut report = IntegralsReport {
        recurrences,
        numeric,
        expansion_checked,
        expansion_logarithmic,
        expansion_failures,
        p_prime_failures,
        leading_constant,
        passed: false,
    };
    report.passed = report.recurrences_pass()
        && report.numeric_pass()
        && report.expansion_failures.is_empty()
        && report.p_prime_failures.is_empty()
        && report.sphere_pass();
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct Threshold {
    pub n: u32,
    pub m: u64,
    /// `ω_n`, the volume of the unit `n`-sphere.
    pub sphere_volume: String,
    pub value: String,
    pub approx: f64,
    pub error_bound: f64,
}

/// `n(n-1) ω_n^{2/n} m^{2/n}`.
pub fn threshold(n: u32, m: u64, digits: u32) -> Result<Threshold, Error> {
    if n < 3 {
        return Err(Error::InvalidParams(format!("n must be at least 3, got {n}")));
    }
    if m < 1 {
        return Err(Error::InvalidParams("m must be at least 1".into()));
    }
    let vol = sphere_volume(n as i64)?;
    let mut ctx = HpContext::new(digits)?;
    let expo: Rational = rat(2, n as i64);
    let v = eval_pi_scaled(&mut ctx, &vol);
    let vp = ctx.pow_rational(&v, &expo)?;
    let mv = ctx.exact_int(m as i64);
    let mp = ctx.pow_rational(&mv, &expo)?;
    let f = ctx.exact_int(n as i64 * (n as i64 - 1));
    let t = ctx.mul(&f, &vp);
    let t = ctx.mul(&t, &mp);
    Ok(Threshold {
        n,
        m,
        sphere_volume: vol.to_string(),
        value: t.value().to_string(),
        approx: t.to_f64(),
        error_bound: t.error_bound_f64(),
    })
}
