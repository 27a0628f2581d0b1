//! Numeric re-evaluation of certified signs from the defining formulas.
//!
//! Nothing here can make a certificate pass; it can only report a
//! disagreement between an exact result and a high-precision enclosure.

use serde::Serialize;

use super::eval::HpEval;
use super::hp::{HPValue, HpContext};
use crate::certify::cert::{ClaimKind, Expr, Minorant, Sign, SignCert, Witness};
use crate::certify::window::{CWindow, WindowStatus};
use crate::error::Error;
use crate::exact::Rational;

/// `ν, d, u, Δ` at one integer `n`, straight from their definitions.
struct Direct {
    n: HPValue,
    m: HPValue,
    nu: HPValue,
    d: HPValue,
    u: HPValue,
    delta: HPValue,
}

fn direct(ctx: &mut HpContext, omega: u32, k: u32, n: u64) -> Result<Direct, Error> {
    let (w, k, ni) = (omega as i64, k as i64, n as i64);
    let nn = ctx.exact_int(ni);
    let m = ctx.exact_int(ni - 2);
    let one = ctx.exact_int(1);
    let nm1 = ctx.exact_int(ni - 1);
    let w2 = ctx.exact_int((w + 2) * (w + 2));
    let nu = {
        let a = ctx.exact_int(w - 2 * k + 2);
        let b = ctx.exact_int(ni + w - 2 * k);
        ctx.mul(&a, &b)
    };
    let d = {
        let t1 = ctx.mul(&nm1, &m);
        let t1 = ctx.mul(&t1, &nu);
        let m2 = ctx.mul(&m, &m);
        let t2 = ctx.mul(&nn, &m2);
        let n2 = ctx.mul(&nn, &nn);
        let quad = ctx.add(&n2, &nn);
        let two = ctx.exact_int(2);
        let quad = ctx.add(&quad, &two);
        let t3 = ctx.mul(&w2, &quad);
        let s = ctx.sub(&t1, &t2);
        let s = ctx.add(&s, &t3);
        let four = ctx.exact_int(4);
        ctx.mul(&four, &s)
    };
    let u = {
        let four = ctx.exact_int(4);
        let four_m = ctx.mul(&four, &m);
        let n3 = ctx.exact_int(ni - 3);
        let first = ctx.div(&n3, &four_m)?;
        let gap = ctx.sub(&nu, &nn);
        let gap = ctx.add(&gap, &one);
        let nm1sq = ctx.mul(&nm1, &nm1);
        let cross = ctx.mul(&nm1, &w2);
        let top = ctx.add(&nm1sq, &cross);
        let bottom = ctx.mul(&four_m, &gap);
        let second = ctx.div(&top, &bottom)?;
        let s = ctx.sub(&first, &second);
        ctx.mul(&s, &nu)
    };
    let delta = {
        let m2 = ctx.mul(&m, &m);
        let du = ctx.mul(&d, &u);
        let nu2 = ctx.mul(&nu, &nu);
        let q = ctx.div(&du, &nu2)?;
        ctx.sub(&m2, &q)
    };
    Ok(Direct {
        n: nn,
        m,
        nu,
        d,
        u,
        delta,
    })
}

impl Direct {
    /// `((n-2)² ∓ (n-2)√Δ)/d`.
    fn root(&self, ctx: &mut HpContext, upper: bool) -> Result<HPValue, Error> {
        let r = ctx.sqrt(&self.delta)?;
        let mr = ctx.mul(&self.m, &r);
        let m2 = ctx.mul(&self.m, &self.m);
        let top = if upper { ctx.add(&m2, &mr) } else { ctx.sub(&m2, &mr) };
        ctx.div(&top, &self.d)
    }

    /// `d/(2(n-2)) c² - (n-2) c + (n-2) u/(2ν²)`.
    fn quadratic(&self, ctx: &mut HpContext, c: &HPValue) -> Result<HPValue, Error> {
        let two = ctx.exact_int(2);
        let two_m = ctx.mul(&two, &self.m);
        let c2 = ctx.mul(c, c);
        let a = ctx.div(&self.d, &two_m)?;
        let t1 = ctx.mul(&a, &c2);
        let t2 = ctx.mul(&self.m, c);
        let nu2 = ctx.mul(&self.nu, &self.nu);
        let two_nu2 = ctx.mul(&two, &nu2);
        let mu = ctx.mul(&self.m, &self.u);
        let t3 = ctx.div(&mu, &two_nu2)?;
        let s = ctx.sub(&t1, &t2);
        Ok(ctx.add(&s, &t3))
    }

    fn minorant(&self, ctx: &mut HpContext, l: &Minorant) -> HPValue {
        let rho = ctx.from_rational(&l.rho);
        let sigma = ctx.from_rational(&l.sigma);
        let rn = ctx.mul(&rho, &self.n);
        ctx.add(&rn, &sigma)
    }
}

fn sign_of(s: i8) -> Sign {
    Sign::from_i8(s)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CrosscheckReport {
    pub certificates: usize,
    /// Numeric evaluations compared against an exact sign or value.
    pub evaluations: usize,
    /// Evaluations whose enclosure contained zero, so no sign was read off.
    pub unresolved: usize,
    pub disagreements: Vec<String>,
}

impl CrosscheckReport {
    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty()
    }

    fn merge(&mut self, other: CrosscheckReport) {
        self.certificates += other.certificates;
        self.evaluations += other.evaluations;
        self.unresolved += other.unresolved;
        self.disagreements.extend(other.disagreements);
    }

    /// Records a sign comparison.
    fn sign(&mut self, what: &str, v: &HPValue, want: Sign) {
        self.evaluations += 1;
        match v.sign() {
            Some(s) if sign_of(s) != want => self
                .disagreements
                .push(format!("{what}: numeric sign {} but certified {want}", sign_of(s))),
            Some(_) => {}
            None if want == Sign::Zero => {}
            None => self.unresolved += 1,
        }
    }

    /// Records that an exact value lies inside a numeric enclosure.
    fn value(&mut self, ctx: &mut HpContext, what: &str, exact: &Rational, v: &HPValue) {
        self.evaluations += 1;
        let e = ctx.from_rational(exact);
        let diff = ctx.sub(&e, v);
        if diff.sign().is_some() {
            self.disagreements
                .push(format!("{what}: exact value {exact} outside the enclosure {v}"));
        }
    }
}

/// Sample points on a ray starting at `n0`.
fn ray_samples(n0: u64) -> Vec<u64> {
    let mut out: Vec<u64> = [0, 1, 2, 3, 7, 31, 100, 1000]
        .iter()
        .map(|d| n0 + d)
        .chain([10_000, 100_000, 1_000_000])
        .filter(|n| *n >= n0)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// The claim's subject at `n`, from the defining formulas.
fn subject(ctx: &mut HpContext, kind: &ClaimKind, n: u64) -> Result<Option<HPValue>, Error> {
    let v = match kind {
        ClaimKind::DPositive { omega, k } => direct(ctx, *omega, *k, n)?.d,
        ClaimKind::NuGapPositive { omega, k } => {
            let dk = direct(ctx, *omega, *k, n)?;
            let s = ctx.sub(&dk.nu, &dk.n);
            let one = ctx.exact_int(1);
            ctx.add(&s, &one)
        }
        ClaimKind::UNegative { omega, k } => {
            // (ν - n + 1) d (n-2)/ν · (u - (n-2)²ν²/d)
            let dk = direct(ctx, *omega, *k, n)?;
            let one = ctx.exact_int(1);
            let gap = ctx.sub(&dk.nu, &dk.n);
            let gap = ctx.add(&gap, &one);
            let m2 = ctx.mul(&dk.m, &dk.m);
            let nu2 = ctx.mul(&dk.nu, &dk.nu);
            let t = ctx.mul(&m2, &nu2);
            let t = ctx.div(&t, &dk.d)?;
            let lemma = ctx.sub(&dk.u, &t);
            let f = ctx.mul(&gap, &dk.d);
            let f = ctx.mul(&f, &dk.m);
            let f = ctx.div(&f, &dk.nu)?;
            ctx.mul(&f, &lemma)
        }
        ClaimKind::DDecreasing { omega, k, j } => {
            let a = direct(ctx, *omega, *k, n)?.d;
            let b = direct(ctx, *omega, *j, n)?.d;
            ctx.sub(&a, &b)
        }
        ClaimKind::DeltaPositive { omega, k } => direct(ctx, *omega, *k, n)?.delta,
        ClaimKind::MinorantPositive { omega, k, minorant } => {
            let dk = direct(ctx, *omega, *k, n)?;
            dk.minorant(ctx, minorant)
        }
        ClaimKind::DeltaMinorant { omega, k, minorant } => {
            let dk = direct(ctx, *omega, *k, n)?;
            let l = dk.minorant(ctx, minorant);
            let l2 = ctx.mul(&l, &l);
            ctx.sub(&dk.delta, &l2)
        }
        ClaimKind::PairMinorant {
            omega,
            k,
            j,
            lower,
            upper,
        } => {
            let dk = direct(ctx, *omega, *k, n)?;
            let dj = direct(ctx, *omega, *j, n)?;
            let lk = dk.minorant(ctx, lower);
            let lj = dj.minorant(ctx, upper);
            let diff = ctx.sub(&dj.d, &dk.d);
            let t1 = ctx.mul(&dk.m, &diff);
            let t2 = ctx.mul(&dk.d, &lj);
            let t3 = ctx.mul(&dj.d, &lk);
            let s = ctx.add(&t1, &t2);
            ctx.add(&s, &t3)
        }
        ClaimKind::EndpointGap {
            omega,
            n,
            lower_k,
            upper_k,
        } => {
            let x = direct(ctx, *omega, *lower_k, *n)?.root(ctx, false)?;
            let y = direct(ctx, *omega, *upper_k, *n)?.root(ctx, true)?;
            ctx.sub(&y, &x)
        }
        ClaimKind::WindowWitnesses { .. } | ClaimKind::Expression => return Ok(None),
    };
    Ok(Some(v))
}

/// `(n-2)(d_j - d_k) + d_k√Δ_j + d_j√Δ_k`, the quantity a pair minorant bounds.
fn pair_target(ctx: &mut HpContext, omega: u32, k: u32, j: u32, n: u64) -> Result<HPValue, Error> {
    let dk = direct(ctx, omega, k, n)?;
    let dj = direct(ctx, omega, j, n)?;
    let rk = ctx.sqrt(&dk.delta)?;
    let rj = ctx.sqrt(&dj.delta)?;
    let diff = ctx.sub(&dj.d, &dk.d);
    let t1 = ctx.mul(&dk.m, &diff);
    let t2 = ctx.mul(&dk.d, &rj);
    let t3 = ctx.mul(&dj.d, &rk);
    let s = ctx.add(&t1, &t2);
    Ok(ctx.add(&s, &t3))
}

fn sqrtsum_hp(ctx: &mut HpContext, e: &Expr) -> Result<HPValue, Error> {
    let Expr::SqrtSum { a, b, c, u, v } = e else {
        return Err(Error::InvalidParams("not a square-root sum".into()));
    };
    let a = ctx.from_rational(a);
    let b = ctx.from_rational(b);
    let c = ctx.from_rational(c);
    let u = ctx.from_rational(u);
    let v = ctx.from_rational(v);
    let su = ctx.sqrt(&u)?;
    let sv = ctx.sqrt(&v)?;
    let t1 = ctx.mul(&b, &su);
    let t2 = ctx.mul(&c, &sv);
    let s = ctx.add(&a, &t1);
    Ok(ctx.add(&s, &t2))
}

/// Checks one certificate without failing on disagreement.
pub fn crosscheck_cert(cert: &SignCert, digits: u32) -> Result<CrosscheckReport, Error> {
    let mut ctx = HpContext::new(digits)?;
    let mut rep = CrosscheckReport {
        certificates: 1,
        ..Default::default()
    };
    let claim = &cert.claim;
    let label = &claim.statement;
    match (&claim.expression, &cert.witness) {
        (Expr::Quadratics { omega, k_max }, Witness::WindowTable { rows }) => {
            for row in rows {
                let c = ctx.from_rational(&row.c);
                let mut max_x: Option<HPValue> = None;
                let mut min_y: Option<HPValue> = None;
                for k in 1..=*k_max {
                    let dk = direct(&mut ctx, *omega, k, row.n)?;
                    let q = dk.quadratic(&mut ctx, &c)?;
                    rep.sign(&format!("q_{k}(c) at n = {}", row.n), &q, Sign::Negative);
                    let x = dk.root(&mut ctx, false)?;
                    let y = dk.root(&mut ctx, true)?;
                    if k == row.argmax_x {
                        max_x = Some(x);
                    }
                    if k == row.argmin_y {
                        min_y = Some(y);
                    }
                }
                let (Some(x), Some(y)) = (max_x, min_y) else {
                    rep.disagreements
                        .push(format!("n = {}: recorded endpoint indices out of range", row.n));
                    continue;
                };
                let gx = ctx.sub(&c, &x);
                let gy = ctx.sub(&y, &c);
                rep.sign(&format!("c - max x at n = {}", row.n), &gx, Sign::Positive);
                rep.sign(&format!("min y - c at n = {}", row.n), &gy, Sign::Positive);
            }
        }
        (e @ Expr::SqrtSum { .. }, _) => {
            let v = match &claim.kind {
                ClaimKind::EndpointGap { .. } => subject(&mut ctx, &claim.kind, 0)?.expect("endpoint gap"),
                _ => sqrtsum_hp(&mut ctx, e)?,
            };
            rep.sign(label, &v, claim.sign);
        }
        (expr, _) => {
            let n0 = cert.domain.n_range.from;
            let samples = match cert.domain.n_range.to {
                Some(to) => (n0..=to).take(16).collect(),
                None => ray_samples(n0),
            };
            for n in samples {
                let at = format!("{label} at n = {n}");
                let exact = match expr {
                    Expr::Poly { poly } => Some(poly.eval_int(&n.into())),
                    Expr::RatFunc { f } => Some(f.eval_int(n as i64)?),
                    _ => None,
                };
                if let Some(v) = subject(&mut ctx, &claim.kind, n)? {
                    rep.sign(&at, &v, claim.sign);
                    // Expressions that are the subject itself must match it in value.
                    let same_value = matches!(
                        claim.kind,
                        ClaimKind::DPositive { .. }
                            | ClaimKind::NuGapPositive { .. }
                            | ClaimKind::UNegative { .. }
                            | ClaimKind::DDecreasing { .. }
                            | ClaimKind::DeltaPositive { .. }
                            | ClaimKind::MinorantPositive { .. }
                            | ClaimKind::DeltaMinorant { .. }
                            | ClaimKind::PairMinorant { .. }
                    );
                    if let (true, Some(x)) = (same_value, &exact) {
                        rep.value(&mut ctx, &at, x, &v);
                    }
                } else if let Some(x) = &exact {
                    let v = x.eval_in(&mut ctx, 0)?;
                    rep.sign(&at, &v, claim.sign);
                }
                if let ClaimKind::PairMinorant { omega, k, j, .. } = &claim.kind {
                    let t = pair_target(&mut ctx, *omega, *k, *j, n)?;
                    rep.sign(&format!("endpoint order x_{j} < y_{k} at n = {n}"), &t, Sign::Positive);
                }
            }
        }
    }
    Ok(rep)
}

/// Checks every certificate; any disagreement is an error.
pub fn crosscheck<'a, I>(certs: I, digits: u32) -> Result<CrosscheckReport, Error>
where
    I: IntoIterator<Item = &'a SignCert>,
{
    let mut total = CrosscheckReport::default();
    for cert in certs {
        total.merge(crosscheck_cert(cert, digits)?);
    }
    if total.agrees() {
        Ok(total)
    } else {
        Err(Error::Disagreement(total.disagreements.join("; ")))
    }
}

/// Checks a computed window: exact endpoints inside their numeric
/// enclosures, and the status readable from the numeric endpoints.
pub fn crosscheck_window(w: &CWindow, digits: u32) -> Result<CrosscheckReport, Error> {
    let mut ctx = HpContext::new(digits)?;
    let mut rep = CrosscheckReport::default();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (k, (xe, ye)) in (1..).zip(&w.endpoints) {
        let dk = direct(&mut ctx, w.omega, k, w.n)?;
        let x = dk.root(&mut ctx, false)?;
        let y = dk.root(&mut ctx, true)?;
        for (e, v, name) in [(xe, &x, "x"), (ye, &y, "y")] {
            let ev = e.eval_in(&mut ctx, 0)?;
            let diff = ctx.sub(&ev, v);
            rep.evaluations += 1;
            if diff.sign().is_some() {
                rep.disagreements.push(format!("{name}_{k} at n = {}: {ev} vs {v}", w.n));
            }
        }
        xs.push(x);
        ys.push(y);
    }
    match &w.status {
        WindowStatus::Nonempty { witness, .. } => {
            let c = ctx.from_rational(witness);
            for (k, (x, y)) in (1..).zip(xs.iter().zip(&ys)) {
                let gx = ctx.sub(&c, x);
                let gy = ctx.sub(y, &c);
                rep.sign(&format!("c - x_{k} at n = {}", w.n), &gx, Sign::Positive);
                rep.sign(&format!("y_{k} - c at n = {}", w.n), &gy, Sign::Positive);
            }
        }
        WindowStatus::Empty { lower_k, upper_k } => {
            let gap = ctx.sub(&ys[*upper_k as usize - 1], &xs[*lower_k as usize - 1]);
            rep.evaluations += 1;
            if gap.sign() == Some(1) {
                rep.disagreements.push(format!(
                    "n = {}: x_{lower_k} < y_{upper_k} numerically, window reported empty",
                    w.n
                ));
            }
        }
    }
    if rep.agrees() {
        Ok(rep)
    } else {
        Err(Error::Disagreement(rep.disagreements.join("; ")))
    }
}
