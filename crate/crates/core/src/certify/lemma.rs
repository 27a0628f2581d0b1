//! The two lemma-level certificate bundles: negativity of the lemma quantity
//! on the ray, and nonemptiness of the `c`-window for every dimension.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cert::{ClaimKind, Domain, Expr, Method, Minorant, NRange, Sign, SignCert, WindowRow, Witness};
use super::claims::{delta_minorant_gap, pair_minorant_poly, ray_claim};
use super::ray::root_free;
use super::window::{endpoint_gap_cert, window_in, OmegaData, WindowStatus};
use crate::error::Error;
use crate::exact::rational::{convergents, simplest_between, sqrt_bounds};
use crate::exact::{int, rat, Rational, UniPoly};
use crate::spectral::{delta_partial_fractions, SpectralParams};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaPolyBundle {
    pub omega: u32,
    pub n0: u64,
    pub certificates: Vec<SignCert>,
    pub inference: String,
}

/// For every `k ≤ ⌊ω/2⌋`, on `n ≥ 2ω + 6`: `d_k > 0`, `ν_k - n + 1 > 0` and
/// `U_k < 0`. Together these give `u_k - (n-2)²ν_k²/d_k < 0`, since
/// `U_k = (ν_k - n + 1) d_k (n-2)/ν_k · (u_k - (n-2)²ν_k²/d_k)`.
pub fn certify_lemma_poly(omega: u32) -> Result<LemmaPolyBundle, Error> {
    let params = SpectralParams::all(omega)?;
    let n0 = 2 * omega as u64 + 6;
    let mut certificates = Vec::new();
    for p in params {
        let k = p.k;
        certificates.push(ray_claim(
            ClaimKind::DPositive { omega, k },
            format!("d_{k}(n) > 0"),
            n0,
        )?);
        certificates.push(ray_claim(
            ClaimKind::NuGapPositive { omega, k },
            format!("nu_{k}(n) - n + 1 > 0"),
            n0,
        )?);
        certificates.push(ray_claim(
            ClaimKind::UNegative { omega, k },
            format!("U_{k}(n) = P(nu_{k}(n)) < 0"),
            n0,
        )?);
    }
    Ok(LemmaPolyBundle {
        omega,
        n0,
        certificates,
        inference: format!(
            "for n >= {n0}: d_k > 0, nu_k - n + 1 > 0, nu_k > 0 and n - 2 > 0, so \
             u_k - (n-2)^2 nu_k^2 / d_k has the sign of U_k, which is negative"
        ),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntersectionBundle {
    pub omega: u32,
    pub k_max: u32,
    /// Closed range covered by explicit witnesses, if nonempty.
    pub exhaustive: Option<NRange>,
    pub n_tail: u64,
    pub window_table: Option<SignCert>,
    pub minorants: Vec<(u32, Minorant)>,
    pub tail: Vec<SignCert>,
    /// Set when some dimension has an empty window.
    pub empty_window: Option<SignCert>,
    pub inference: String,
}

impl IntersectionBundle {
    pub fn certificates(&self) -> impl Iterator<Item = &SignCert> {
        self.window_table
            .iter()
            .chain(self.tail.iter())
            .chain(self.empty_window.iter())
    }

    /// Witness rows of the exhaustive range.
    pub fn rows(&self) -> &[WindowRow] {
        match self.window_table.as_ref().map(|c| &c.witness) {
            Some(Witness::WindowTable { rows }) => rows,
            _ => &[],
        }
    }
}

/// Witness table for every integer `n ∈ [from, to]`. Returns the table or
/// the first empty window's separating pair.
pub fn exhaustive_windows(
    data: &OmegaData,
    from: u64,
    to: u64,
    k_max: u32,
) -> Result<Result<SignCert, SignCert>, Error> {
    let started = Instant::now();
    let results: Vec<_> = (from..=to)
        .into_par_iter()
        .map(|n| window_in(data, n, k_max))
        .collect();
    let mut rows = Vec::with_capacity(results.len());
    for w in results {
        let w = w?;
        match w.status {
            WindowStatus::Nonempty {
                witness,
                argmax_x,
                argmin_y,
            } => rows.push(WindowRow {
                n: w.n,
                c: witness,
                argmax_x,
                argmin_y,
            }),
            WindowStatus::Empty { lower_k, upper_k } => {
                return Ok(Err(endpoint_gap_cert(data, w.n, lower_k, upper_k)?));
            }
        }
    }
    let omega = data.omega;
    Ok(Ok(SignCert {
        claim: super::cert::Claim {
            kind: ClaimKind::WindowWitnesses { omega, k_max },
            statement: format!("for each n in [{from}, {to}] the listed c gives q_k(c) < 0 for all k <= {k_max}"),
            expression: Expr::Quadratics { omega, k_max },
            sign: Sign::Negative,
        },
        domain: Domain {
            omega: Some(omega),
            k: None,
            pair: None,
            n_range: NRange::closed(from, to),
        },
        method: Method::PointwiseExhaustive,
        witness: Witness::WindowTable { rows },
        verified: true,
        wall_time_ms: started.elapsed().as_millis() as u64,
    }))
}

/// Root-free positivity on `[n0, ∞)` by Descartes or Sturm, no fallback.
fn positive_on_ray(p: &UniPoly, n0: &BigInt) -> bool {
    if p.is_zero() {
        return false;
    }
    matches!(root_free(p, n0), Some((Sign::Positive, _)))
}

fn minorant_ok(p: SpectralParams, m: &Minorant, n0: &BigInt) -> bool {
    let at = &m.rho * Rational::from_integer(n0.clone()) + &m.sigma;
    if !at.is_positive() {
        return false;
    }
    let gap = delta_minorant_gap(p, m);
    positive_on_ray(gap.num(), n0) && positive_on_ray(gap.den(), n0)
}

/// Largest (up to a dyadic grid) `σ` with `Δ_k - (ρn + σ)² > 0` and
/// `ρn + σ > 0` on `n ≥ n0`.
fn best_sigma(p: SpectralParams, rho: &Rational, n0: &BigInt) -> Option<Rational> {
    let ok = |s: &Rational| {
        minorant_ok(
            p,
            &Minorant {
                rho: rho.clone(),
                sigma: s.clone(),
            },
            n0,
        )
    };
    let floor = -(rho * Rational::from_integer(n0.clone()));
    let mut good = if rho.is_zero() { rat(1, 1024) } else { Rational::zero() };
    let mut step = Rational::one();
    if rho.is_zero() && !ok(&good) {
        return None;
    }
    while !ok(&good) {
        good -= &step;
        step *= int(2);
        if good <= floor {
            // Try just above the point where L vanishes.
            let g = &floor + rat(1, 1024);
            return ok(&g).then_some(g);
        }
    }
    let mut bad = &good + Rational::one();
    let mut step = Rational::one();
    while ok(&bad) {
        good = bad.clone();
        step *= int(2);
        bad = &good + &step;
        if step > int(1i64 << 40) {
            return Some(good);
        }
    }
    for _ in 0..24 {
        let mid = (&good + &bad) / int(2);
        if ok(&mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    // A simpler value just below the last good one is also good.
    let eps = (&bad - &good) * int(8);
    let simple = simplest_between(&(&good - &eps), &good);
    Some(if ok(&simple) { simple } else { good })
}

/// Rational lower approximations of `√a`, coarse to fine.
fn sqrt_convergents_below(a: &Rational) -> Vec<Rational> {
    let (lo, _) = sqrt_bounds(a, 128);
    let mut out: Vec<Rational> = convergents(&lo).into_iter().step_by(2).collect();
    if out.last() != Some(&lo) {
        out.push(lo);
    }
    out
}

const MAX_LEVEL: usize = 16;

fn find_minorants(
    omega: u32,
    params: &[SpectralParams],
    n0: &BigInt,
) -> Result<Vec<Minorant>, Error> {
    let convs: Vec<Vec<Rational>> = params
        .iter()
        .map(|p| delta_partial_fractions(*p).map(|dec| sqrt_convergents_below(dec.a())))
        .collect::<Result<_, _>>()?;
    let mut last_failure = String::new();
    for level in 0..MAX_LEVEL {
        let found: Vec<Option<Minorant>> = params
            .par_iter()
            .zip(convs.par_iter())
            .map(|(p, cs)| {
                let rho = cs[level.min(cs.len() - 1)].clone();
                best_sigma(*p, &rho, n0).map(|sigma| Minorant { rho, sigma })
            })
            .collect();
        if let Some(i) = found.iter().position(|m| m.is_none()) {
            last_failure = format!("no minorant for k = {}", i + 1);
            continue;
        }
        let ms: Vec<Minorant> = found.into_iter().map(|m| m.expect("checked")).collect();
        let mut all_pairs = true;
        'pairs: for a in 0..params.len() {
            for b in a + 1..params.len() {
                let poly = pair_minorant_poly(params[a], params[b], &ms[a], &ms[b]);
                if !positive_on_ray(&poly, n0) {
                    last_failure = format!("pair ({}, {}) not certified", a + 1, b + 1);
                    all_pairs = false;
                    break 'pairs;
                }
            }
        }
        if all_pairs {
            return Ok(ms);
        }
    }
    Err(Error::WitnessRejected(format!(
        "no rational minorants for omega = {omega} from n = {n0}: {last_failure}"
    )))
}

/// Window nonemptiness for every integer `n ≥ 2ω + 6` with `k ≤ k_max`:
/// explicit witnesses on `[2ω+6, n_max]`, ray certificates from `n_tail` on.
pub fn certify_intersection(omega: u32, n_tail: u64, n_max: u64, k_max: u32) -> Result<IntersectionBundle, Error> {
    let data = OmegaData::new(omega)?;
    if k_max < 1 || k_max > data.k_max() {
        return Err(Error::InvalidParams(format!(
            "k_max must lie in [1, {}], got {k_max}",
            data.k_max()
        )));
    }
    let n_lo = 2 * omega as u64 + 6;
    if n_tail > n_max.max(n_lo - 1) + 1 {
        return Err(Error::InvalidParams(format!(
            "tail start {n_tail} leaves a gap after the exhaustive range ending at {n_max}"
        )));
    }
    let tail_from = n_tail.max(n_lo);
    let mut bundle = IntersectionBundle {
        omega,
        k_max,
        exhaustive: None,
        n_tail: tail_from,
        window_table: None,
        minorants: Vec::new(),
        tail: Vec::new(),
        empty_window: None,
        inference: String::new(),
    };
    if n_max >= n_lo {
        bundle.exhaustive = Some(NRange::closed(n_lo, n_max));
        match exhaustive_windows(&data, n_lo, n_max, k_max)? {
            Ok(table) => bundle.window_table = Some(table),
            Err(gap) => {
                bundle.empty_window = Some(gap);
                return Ok(bundle);
            }
        }
    }
    let params: Vec<SpectralParams> = data.ks[..k_max as usize].iter().map(|kd| kd.params).collect();
    if k_max == 1 {
        bundle.tail.push(ray_claim(
            ClaimKind::DeltaPositive { omega, k: 1 },
            "Delta_1(n) > 0".into(),
            tail_from,
        )?);
        bundle.inference = format!(
            "single interval: Delta_1 > 0 for n >= {tail_from} gives x_1 < y_1"
        );
        return Ok(bundle);
    }
    let nb = BigInt::from(tail_from);
    let ms = find_minorants(omega, &params, &nb)?;
    let mut tail = Vec::new();
    for (p, m) in params.iter().zip(&ms) {
        let k = p.k;
        tail.push(ray_claim(
            ClaimKind::MinorantPositive {
                omega,
                k,
                minorant: m.clone(),
            },
            format!("L_{k}(n) = {m} > 0"),
            tail_from,
        )?);
        tail.push(ray_claim(
            ClaimKind::DeltaMinorant {
                omega,
                k,
                minorant: m.clone(),
            },
            format!("Delta_{k}(n) - L_{k}(n)^2 > 0"),
            tail_from,
        )?);
    }
    for a in 0..params.len() {
        for b in a + 1..params.len() {
            let (k, j) = (params[a].k, params[b].k);
            tail.push(ray_claim(
                ClaimKind::DDecreasing { omega, k, j },
                format!("d_{k}(n) - d_{j}(n) > 0"),
                tail_from,
            )?);
            tail.push(ray_claim(
                ClaimKind::PairMinorant {
                    omega,
                    k,
                    j,
                    lower: ms[a].clone(),
                    upper: ms[b].clone(),
                },
                format!("(n-2)(d_{j} - d_{k}) + d_{k} L_{j} + d_{j} L_{k} > 0"),
                tail_from,
            )?);
        }
    }
    bundle.minorants = params.iter().map(|p| p.k).zip(ms).collect();
    bundle.tail = tail;
    bundle.inference = format!(
        "for n >= {tail_from} and k < j: sqrt(Delta_k) > L_k > 0 gives x_k < y_k; \
         d_k > d_j > 0 gives x_k < (n-2)^2/d_k < (n-2)^2/d_j < y_j; \
         the pair inequality with sqrt(Delta) > L gives x_j < y_k; hence max x < min y"
    );
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::claims::replay;

    #[test]
    fn lemma_poly_small_omegas() {
        for omega in 3..=6 {
            let b = certify_lemma_poly(omega).unwrap();
            assert_eq!(b.certificates.len(), 3 * (omega as usize / 2));
            for c in &b.certificates {
                replay(c).unwrap();
            }
        }
    }

    #[test]
    fn intersection_omega3_and_omega5() {
        let b = certify_intersection(3, 12, 12, 1).unwrap();
        assert_eq!(b.rows()[0].c, rat(5, 1408));
        for c in b.certificates() {
            replay(c).unwrap();
        }
        let b = certify_intersection(5, 60, 60, 2).unwrap();
        assert!(b.empty_window.is_none());
        assert_eq!(b.minorants.len(), 2);
        for c in b.certificates() {
            replay(c).unwrap();
        }
    }

    #[test]
    fn gap_between_ranges_is_rejected() {
        assert!(certify_intersection(4, 40, 20, 2).is_err());
    }
}
