//! Building spectral claims and replaying any certificate from its data.

use std::time::Instant;

use num_bigint::BigInt;

use super::cert::{Claim, ClaimKind, Domain, Expr, Minorant, NRange, Sign, SignCert, Witness};
use super::ray::{poly_ray_witness, ratfunc_ray_witness, replay_ratfunc, replay_ray};
use super::sqrtsum::replay_sqrtsum;
use super::window::{roots_in, OmegaData};
use crate::error::Error;
use crate::exact::{RatFunc, UniPoly};
use crate::spectral::{self, SpectralParams};

fn sp(omega: u32, k: u32) -> Result<SpectralParams, Error> {
    SpectralParams::new(omega, k)
}

fn n_minus_2() -> UniPoly {
    UniPoly::from_ints(&[-2, 1])
}

/// `Δ_k - L_k²`.
pub fn delta_minorant_gap(p: SpectralParams, l: &Minorant) -> RatFunc {
    let lp = l.poly();
    &spectral::delta(p) - &RatFunc::from_poly(&lp * &lp)
}

/// `(n-2)(d_j - d_k) + d_k L_j + d_j L_k`.
pub fn pair_minorant_poly(pk: SpectralParams, pj: SpectralParams, lk: &Minorant, lj: &Minorant) -> UniPoly {
    let dk = spectral::d(pk);
    let dj = spectral::d(pj);
    let lin = &n_minus_2() * &(&dj - &dk);
    &(&lin + &(&dk * &lj.poly())) + &(&dj * &lk.poly())
}

/// Rebuilds the expression a claim is about from its parameters alone.
pub fn bound_expr(kind: &ClaimKind) -> Result<Option<Expr>, Error> {
    let poly = |poly| Ok(Some(Expr::Poly { poly }));
    let ratf = |f| Ok(Some(Expr::RatFunc { f }));
    match kind {
        ClaimKind::DPositive { omega, k } => poly(spectral::d(sp(*omega, *k)?)),
        ClaimKind::NuGapPositive { omega, k } => poly(spectral::nu_gap(sp(*omega, *k)?)),
        ClaimKind::UNegative { omega, k } => poly(spectral::big_u(sp(*omega, *k)?)?),
        ClaimKind::DDecreasing { omega, k, j } => {
            poly(&spectral::d(sp(*omega, *k)?) - &spectral::d(sp(*omega, *j)?))
        }
        ClaimKind::DeltaPositive { omega, k } => ratf(spectral::delta(sp(*omega, *k)?)),
        ClaimKind::MinorantPositive { minorant, .. } => poly(minorant.poly()),
        ClaimKind::DeltaMinorant { omega, k, minorant } => ratf(delta_minorant_gap(sp(*omega, *k)?, minorant)),
        ClaimKind::PairMinorant {
            omega,
            k,
            j,
            lower,
            upper,
        } => poly(pair_minorant_poly(sp(*omega, *k)?, sp(*omega, *j)?, lower, upper)),
        ClaimKind::WindowWitnesses { omega, k_max } => Ok(Some(Expr::Quadratics {
            omega: *omega,
            k_max: *k_max,
        })),
        ClaimKind::EndpointGap {
            omega,
            n,
            lower_k,
            upper_k,
        } => {
            let data = OmegaData::new(*omega)?;
            let (x, _) = roots_in(&data, *lower_k, *n)?;
            let (_, y) = roots_in(&data, *upper_k, *n)?;
            let [a, b, c, u, v] = x.gap_terms(&y);
            Ok(Some(Expr::SqrtSum { a, b, c, u, v }))
        }
        ClaimKind::Expression => Ok(None),
    }
}

/// The sign a claim of this kind must establish, if fixed.
pub fn required_sign(kind: &ClaimKind) -> Option<Sign> {
    match kind {
        ClaimKind::UNegative { .. } | ClaimKind::WindowWitnesses { .. } => Some(Sign::Negative),
        ClaimKind::EndpointGap { .. } | ClaimKind::Expression => None,
        _ => Some(Sign::Positive),
    }
}

fn domain_of(kind: &ClaimKind, n_range: NRange) -> Domain {
    let (omega, k, pair) = match kind {
        ClaimKind::DPositive { omega, k }
        | ClaimKind::NuGapPositive { omega, k }
        | ClaimKind::UNegative { omega, k }
        | ClaimKind::DeltaPositive { omega, k }
        | ClaimKind::MinorantPositive { omega, k, .. }
        | ClaimKind::DeltaMinorant { omega, k, .. } => (Some(*omega), Some(*k), None),
        ClaimKind::DDecreasing { omega, k, j } | ClaimKind::PairMinorant { omega, k, j, .. } => {
            (Some(*omega), None, Some([*k, *j]))
        }
        ClaimKind::WindowWitnesses { omega, .. } => (Some(*omega), None, None),
        ClaimKind::EndpointGap {
            omega,
            lower_k,
            upper_k,
            ..
        } => (Some(*omega), None, Some([*lower_k, *upper_k])),
        ClaimKind::Expression => (None, None, None),
    };
    Domain {
        omega,
        k,
        pair,
        n_range,
    }
}

/// Certifies a ray claim `sign(expr) = required` on `n ≥ n0`.
pub fn ray_claim(kind: ClaimKind, statement: String, n0: u64) -> Result<SignCert, Error> {
    let started = Instant::now();
    let expr = bound_expr(&kind)?.ok_or_else(|| Error::InvalidParams("claim has no expression".into()))?;
    let nb = BigInt::from(n0);
    let (sign, witness) = match &expr {
        Expr::Poly { poly } => {
            let (s, w) = poly_ray_witness(poly, &nb)?;
            (s, Witness::Ray(w))
        }
        Expr::RatFunc { f } => ratfunc_ray_witness(f, &nb)?,
        _ => return Err(Error::InvalidParams("not a ray claim".into())),
    };
    if let Some(req) = required_sign(&kind) {
        if sign != req {
            return Err(Error::SignChange {
                n0: n0.to_string(),
                detail: format!("{statement}: expected {req}, certified {sign}"),
            });
        }
    }
    let method = match &witness {
        Witness::Ray(w) => w.method(),
        Witness::RatFunc { num, den, .. } => num.method().max(den.method()),
        _ => unreachable!(),
    };
    Ok(SignCert {
        domain: domain_of(&kind, NRange::ray(n0)),
        claim: Claim {
            kind,
            statement,
            expression: expr,
            sign,
        },
        method,
        witness,
        verified: true,
        wall_time_ms: started.elapsed().as_millis() as u64,
    })
}

/// Re-checks a certificate from its recorded data. Spectral claims are also
/// bound: their expression must equal the one rebuilt from the parameters.
pub fn replay(cert: &SignCert) -> Result<(), Error> {
    let claim = &cert.claim;
    if let Some(expected) = bound_expr(&claim.kind)? {
        if expected != claim.expression {
            return Err(Error::Replay(format!(
                "expression does not match its subject: {}",
                claim.statement
            )));
        }
    }
    if let Some(req) = required_sign(&claim.kind) {
        if claim.sign != req {
            return Err(Error::Replay(format!("claimed sign {} but {req} is required", claim.sign)));
        }
    }
    let proved = match (&claim.expression, &cert.witness) {
        (Expr::Poly { poly }, Witness::Ray(w)) => {
            check_ray_start(cert, w.n0())?;
            replay_ray(poly, w)?
        }
        (Expr::RatFunc { f }, w @ Witness::RatFunc { num, .. }) => {
            check_ray_start(cert, num.n0())?;
            replay_ratfunc(f, w)?
        }
        (e @ Expr::SqrtSum { .. }, Witness::SquaringTrace { steps }) => replay_sqrtsum(e, steps)?,
        (Expr::Quadratics { omega, k_max }, Witness::WindowTable { rows }) => {
            let data = OmegaData::new(*omega)?;
            let range = &cert.domain.n_range;
            let to = range
                .to
                .ok_or_else(|| Error::Replay("a witness table needs a closed range".into()))?;
            let expected_len = to.checked_sub(range.from).map(|x| x + 1).unwrap_or(0);
            if rows.len() as u64 != expected_len {
                return Err(Error::Replay("witness table does not cover its range".into()));
            }
            for (i, row) in rows.iter().enumerate() {
                if row.n != range.from + i as u64 {
                    return Err(Error::Replay(format!("witness table skips n = {}", range.from + i as u64)));
                }
                let vals = data.quadratic_values(row.n, &row.c, *k_max)?;
                if let Some(bad) = vals.iter().position(|v| v >= &num_traits::Zero::zero()) {
                    return Err(Error::Replay(format!(
                        "witness c = {} fails q_{}(c) < 0 at n = {}",
                        row.c,
                        bad + 1,
                        row.n
                    )));
                }
            }
            Sign::Negative
        }
        _ => return Err(Error::Replay("witness does not fit the expression".into())),
    };
    if proved != claim.sign {
        return Err(Error::Replay(format!("witness proves {proved}, claim says {}", claim.sign)));
    }
    if cert.method
        != match &cert.witness {
            Witness::Ray(w) => w.method(),
            Witness::RatFunc { num, den, .. } => num.method().max(den.method()),
            Witness::SquaringTrace { .. } => super::cert::Method::SquaringTrace,
            Witness::WindowTable { .. } => super::cert::Method::PointwiseExhaustive,
        }
    {
        return Err(Error::Replay("method label does not match the witness".into()));
    }
    Ok(())
}

fn check_ray_start(cert: &SignCert, n0: &BigInt) -> Result<(), Error> {
    let r = &cert.domain.n_range;
    if &BigInt::from(r.from) != n0 || r.to.is_some() {
        return Err(Error::Replay(format!(
            "witness starts at {n0} but the claim covers {r}"
        )));
    }
    Ok(())
}
