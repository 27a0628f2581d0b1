//! Root endpoints `x_k < y_k` at a fixed dimension and the feasible window
//! `⋂ (x_k, y_k)` for the constant `c`.

use std::cmp::Ordering;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::cert::{Claim, ClaimKind, Domain, Expr, Method, NRange, Sign, SignCert, Witness, WindowRow};
use super::sqrtsum::{sqrtsum_sign, sqrtsum_sign_at};
use crate::error::Error;
use crate::exact::rational::{limit_denominator, serde_str, simplest_between, sqrt_bounds};
use crate::exact::{int, RatFunc, Rational, UniPoly};
use crate::oracle::{HPValue, HpContext, HpEval};
use crate::spectral::{self, SpectralParams};

/// Exact coefficient data for one `(ω, k)`, built once and evaluated at many `n`.
#[derive(Clone, Debug)]
pub struct KData {
    pub params: SpectralParams,
    pub nu: UniPoly,
    pub d: UniPoly,
    pub u: RatFunc,
    pub delta: RatFunc,
}

#[derive(Clone, Debug)]
pub struct OmegaData {
    pub omega: u32,
    pub ks: Vec<KData>,
}

impl OmegaData {
    pub fn new(omega: u32) -> Result<Self, Error> {
        let ks = SpectralParams::all(omega)?
            .into_iter()
            .map(|p| KData {
                params: p,
                nu: spectral::nu(p),
                d: spectral::d(p),
                u: spectral::u(p),
                delta: spectral::delta(p),
            })
            .collect();
        Ok(OmegaData { omega, ks })
    }

    pub fn k_max(&self) -> u32 {
        self.ks.len() as u32
    }

    fn get(&self, k: u32) -> Result<&KData, Error> {
        self.ks
            .get((k as usize).wrapping_sub(1))
            .ok_or_else(|| Error::InvalidParams(format!("k = {k} out of range for omega = {}", self.omega)))
    }

    fn check_n(&self, n: u64) -> Result<(), Error> {
        if n < 2 * self.omega as u64 + 6 {
            return Err(Error::InvalidParams(format!(
                "need n >= 2*omega + 6 = {}, got {n}",
                2 * self.omega + 6
            )));
        }
        Ok(())
    }

    fn check_k_max(&self, k_max: u32) -> Result<(), Error> {
        if k_max < 1 || k_max > self.k_max() {
            return Err(Error::InvalidParams(format!(
                "k_max must lie in [1, {}], got {k_max}",
                self.k_max()
            )));
        }
        Ok(())
    }

    /// `q_k(c) = d_k/(2(n-2)) c² - (n-2)c + (n-2)u_k/(2ν_k²)` for every
    /// `k ≤ k_max`, by direct rational evaluation.
    pub fn quadratic_values(&self, n: u64, c: &Rational, k_max: u32) -> Result<Vec<Rational>, Error> {
        let nb = BigInt::from(n);
        let m = int(n as i64 - 2);
        let two = int(2);
        self.ks[..k_max as usize]
            .iter()
            .map(|kd| {
                let d = kd.d.eval_int(&nb);
                let nu = kd.nu.eval_int(&nb);
                let u = kd.u.eval(&Rational::from_integer(nb.clone()))?;
                Ok(&d / (&two * &m) * c * c - &m * c + &m * u / (&two * &nu * &nu))
            })
            .collect()
    }
}

/// `((n-2)² ± (n-2)√Δ_k)/d_k` at a fixed integer `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgEndpoint {
    pub params: SpectralParams,
    pub n: u64,
    pub upper: bool,
    #[serde(with = "serde_str")]
    pub delta: Rational,
    #[serde(with = "serde_str")]
    pub d: Rational,
}

impl AlgEndpoint {
    fn m(&self) -> Rational {
        int(self.n as i64 - 2)
    }

    fn pm(&self) -> Rational {
        if self.upper {
            int(1)
        } else {
            int(-1)
        }
    }

    /// `(n-2)²/d_k`, the midpoint of the pair.
    pub fn midpoint(&self) -> Rational {
        let m = self.m();
        &m * &m / &self.d
    }

    /// Rational enclosure `[lo, hi]` from a `bits`-bit bracket of `√Δ`.
    pub fn bounds(&self, bits: u32) -> (Rational, Rational) {
        let (slo, shi) = sqrt_bounds(&self.delta, bits);
        let m = self.m();
        let mid = self.midpoint();
        let scale = &m / &self.d;
        if self.upper {
            (&mid + &scale * slo, &mid + &scale * shi)
        } else {
            (&mid - &scale * shi, &mid - &scale * slo)
        }
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.bounds(64);
        let x = (lo + hi) / int(2);
        rational_to_f64(&x)
    }

    /// Terms `(A, B, C, u, v)` with `sign(other - self) = sign(A + B√u + C√v)`.
    pub fn gap_terms(&self, other: &AlgEndpoint) -> [Rational; 5] {
        // other - self scaled by d_self d_other / (n - 2) > 0
        let m = self.m();
        [
            &m * (&self.d - &other.d),
            &other.pm() * &self.d,
            -(&self.pm() * &other.d),
            other.delta.clone(),
            self.delta.clone(),
        ]
    }

    /// Exact comparison `self` against `other` at the same `n`.
    pub fn cmp_exact(&self, other: &AlgEndpoint) -> Ordering {
        let [a, b, c, u, v] = self.gap_terms(other);
        match sqrtsum_sign(&a, &b, &c, &u, &v) {
            Sign::Positive => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Negative => Ordering::Greater,
        }
    }
}

impl HpEval for AlgEndpoint {
    fn eval_in(&self, ctx: &mut HpContext, _n: i64) -> Result<HPValue, Error> {
        let m = ctx.exact_int(self.n as i64 - 2);
        let delta = ctx.from_rational(&self.delta);
        let root = ctx.sqrt(&delta)?;
        let mr = ctx.mul(&m, &root);
        let m2 = ctx.mul(&m, &m);
        let top = if self.upper { ctx.add(&m2, &mr) } else { ctx.sub(&m2, &mr) };
        let d = ctx.from_rational(&self.d);
        ctx.div(&top, &d)
    }
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    let approx = limit_denominator(x, &BigInt::from(1u64 << 53));
    let n = approx.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let d = approx.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    if approx.is_zero() && !x.is_zero() {
        // Too small for the bounded denominator; fall back on the full ratio.
        let n = x.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
        let d = x.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
        return n / d;
    }
    n / d
}

/// `(x_k, y_k)` at `n`; fails when `Δ_k(n) ≤ 0` or `d_k(n) ≤ 0`.
pub fn roots_in(data: &OmegaData, k: u32, n: u64) -> Result<(AlgEndpoint, AlgEndpoint), Error> {
    data.check_n(n)?;
    let kd = data.get(k)?;
    let nb = BigInt::from(n);
    let delta = kd.delta.eval(&Rational::from_integer(nb.clone()))?;
    let d = kd.d.eval_int(&nb);
    if !delta.is_positive() || !d.is_positive() {
        return Err(Error::NonPositiveDiscriminant {
            omega: data.omega,
            k,
            n,
        });
    }
    let mk = |upper| AlgEndpoint {
        params: kd.params,
        n,
        upper,
        delta: delta.clone(),
        d: d.clone(),
    };
    Ok((mk(false), mk(true)))
}

pub fn roots(p: SpectralParams, n: u64) -> Result<(AlgEndpoint, AlgEndpoint), Error> {
    let data = OmegaData::new(p.omega)?;
    roots_in(&data, p.k, n)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum WindowStatus {
    Nonempty {
        #[serde(with = "serde_str")]
        witness: Rational,
        argmax_x: u32,
        argmin_y: u32,
    },
    /// `x_lower ≥ y_upper`: the pair that closes the window.
    Empty { lower_k: u32, upper_k: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CWindow {
    pub omega: u32,
    pub n: u64,
    pub k_max: u32,
    pub endpoints: Vec<(AlgEndpoint, AlgEndpoint)>,
    pub status: WindowStatus,
}

impl CWindow {
    pub fn is_nonempty(&self) -> bool {
        matches!(self.status, WindowStatus::Nonempty { .. })
    }

    pub fn witness(&self) -> Option<&Rational> {
        match &self.status {
            WindowStatus::Nonempty { witness, .. } => Some(witness),
            WindowStatus::Empty { .. } => None,
        }
    }

    pub fn max_x(&self) -> Option<&AlgEndpoint> {
        match &self.status {
            WindowStatus::Nonempty { argmax_x, .. } => Some(&self.endpoints[*argmax_x as usize - 1].0),
            WindowStatus::Empty { .. } => None,
        }
    }

    pub fn min_y(&self) -> Option<&AlgEndpoint> {
        match &self.status {
            WindowStatus::Nonempty { argmin_y, .. } => Some(&self.endpoints[*argmin_y as usize - 1].1),
            WindowStatus::Empty { .. } => None,
        }
    }
}

fn extreme(ends: &[&AlgEndpoint], want: Ordering) -> usize {
    let mut best = 0;
    for i in 1..ends.len() {
        if ends[i].cmp_exact(ends[best]) == want {
            best = i;
        }
    }
    best
}

/// Largest `x_k` and smallest `y_k` (1-based indices), and whether the
/// window between them is nonempty.
fn scan(endpoints: &[(AlgEndpoint, AlgEndpoint)]) -> (u32, u32, bool) {
    let xs: Vec<&AlgEndpoint> = endpoints.iter().map(|e| &e.0).collect();
    let ys: Vec<&AlgEndpoint> = endpoints.iter().map(|e| &e.1).collect();
    let ix = extreme(&xs, Ordering::Greater);
    let iy = extreme(&ys, Ordering::Less);
    let open = xs[ix].cmp_exact(ys[iy]) == Ordering::Less;
    (ix as u32 + 1, iy as u32 + 1, open)
}

/// Picks a small rational strictly inside `(lo, hi)` and confirms it with
/// the square-root-free quadratic test.
fn choose_witness(data: &OmegaData, n: u64, k_max: u32, lo: &AlgEndpoint, hi: &AlgEndpoint) -> Result<Rational, Error> {
    let max_den = BigInt::from(1_000_000u32);
    let mut bits = 64;
    loop {
        let (_, lo_hi) = lo.bounds(bits);
        let (hi_lo, _) = hi.bounds(bits);
        if lo_hi < hi_lo {
            let mid = (&lo_hi + &hi_lo) / int(2);
            let cand = limit_denominator(&mid, &max_den);
            if cand > lo_hi && cand < hi_lo && verify_values(data, n, &cand, k_max)? {
                return Ok(cand);
            }
            let cand = simplest_between(&lo_hi, &hi_lo);
            if verify_values(data, n, &cand, k_max)? {
                return Ok(cand);
            }
        }
        if bits > 4096 {
            return Err(Error::WitnessRejected(format!(
                "no rational witness found at omega = {}, n = {n}",
                data.omega
            )));
        }
        bits *= 2;
    }
}

fn verify_values(data: &OmegaData, n: u64, c: &Rational, k_max: u32) -> Result<bool, Error> {
    Ok(data.quadratic_values(n, c, k_max)?.iter().all(|v| v.is_negative()))
}

/// Exact window at `n` over `k ≤ k_max`.
pub fn window_in(data: &OmegaData, n: u64, k_max: u32) -> Result<CWindow, Error> {
    data.check_n(n)?;
    data.check_k_max(k_max)?;
    let endpoints = (1..=k_max)
        .map(|k| roots_in(data, k, n))
        .collect::<Result<Vec<_>, _>>()?;
    let (ix, iy, open) = scan(&endpoints);
    let status = if open {
        let witness = choose_witness(
            data,
            n,
            k_max,
            &endpoints[ix as usize - 1].0,
            &endpoints[iy as usize - 1].1,
        )?;
        WindowStatus::Nonempty {
            witness,
            argmax_x: ix,
            argmin_y: iy,
        }
    } else {
        WindowStatus::Empty {
            lower_k: ix,
            upper_k: iy,
        }
    };
    Ok(CWindow {
        omega: data.omega,
        n,
        k_max,
        endpoints,
        status,
    })
}

pub fn window(omega: u32, n: u64, k_max: u32) -> Result<CWindow, Error> {
    window_in(&OmegaData::new(omega)?, n, k_max)
}

/// Emptiness test without a witness search (cheaper for scans).
pub fn window_is_open(data: &OmegaData, n: u64, k_max: u32) -> Result<(bool, u32, u32), Error> {
    data.check_n(n)?;
    data.check_k_max(k_max)?;
    let endpoints = (1..=k_max)
        .map(|k| roots_in(data, k, n))
        .collect::<Result<Vec<_>, _>>()?;
    let (ix, iy, open) = scan(&endpoints);
    Ok((open, ix, iy))
}

/// Certificate that `x_lower < y_upper` fails (or holds) at `n`: the exact
/// sign of the scaled gap `y_upper - x_lower`.
pub fn endpoint_gap_cert(data: &OmegaData, n: u64, lower_k: u32, upper_k: u32) -> Result<SignCert, Error> {
    let started = Instant::now();
    let (x, _) = roots_in(data, lower_k, n)?;
    let (_, y) = roots_in(data, upper_k, n)?;
    let [a, b, c, u, v] = x.gap_terms(&y);
    let (sign, mut cert) = sqrtsum_sign_at(&a, &b, &c, &u, &v)?;
    cert.claim.kind = ClaimKind::EndpointGap {
        omega: data.omega,
        n,
        lower_k,
        upper_k,
    };
    cert.claim.statement = format!("sign(y_{upper_k} - x_{lower_k}) = {sign} at n = {n}");
    cert.domain = Domain {
        omega: Some(data.omega),
        k: None,
        pair: Some([lower_k, upper_k]),
        n_range: NRange::point(n),
    };
    cert.wall_time_ms = started.elapsed().as_millis() as u64;
    Ok(cert)
}

/// Square-root-free check that `c` makes every `q_k(c)` negative.
pub fn witness_verify(omega: u32, n: u64, c: &Rational, k_max: u32) -> Result<SignCert, Error> {
    let data = OmegaData::new(omega)?;
    witness_verify_in(&data, n, c, k_max)
}

pub fn witness_verify_in(data: &OmegaData, n: u64, c: &Rational, k_max: u32) -> Result<SignCert, Error> {
    let started = Instant::now();
    data.check_k_max(k_max)?;
    let values = data.quadratic_values(n, c, k_max)?;
    let ok = values.iter().all(|v| v.is_negative());
    let worst = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1))
        .map(|(i, _)| i as u32 + 1)
        .unwrap_or(1);
    Ok(SignCert {
        claim: Claim {
            kind: ClaimKind::WindowWitnesses {
                omega: data.omega,
                k_max,
            },
            statement: format!("q_k({c}) < 0 for all k <= {k_max} at n = {n}"),
            expression: Expr::Quadratics {
                omega: data.omega,
                k_max,
            },
            sign: if ok { Sign::Negative } else { Sign::of(&values[worst as usize - 1]) },
        },
        domain: Domain {
            omega: Some(data.omega),
            k: None,
            pair: None,
            n_range: NRange::point(n),
        },
        method: Method::PointwiseExhaustive,
        witness: Witness::WindowTable {
            rows: vec![WindowRow {
                n,
                c: c.clone(),
                argmax_x: worst,
                argmin_y: worst,
            }],
        },
        verified: ok,
        wall_time_ms: started.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn omega3_single_interval() {
        let w = window(3, 12, 1).unwrap();
        assert_eq!(w.witness(), Some(&rat(5, 1408)));
        let (x, y) = roots(SpectralParams::new(3, 1).unwrap(), 12).unwrap();
        assert_eq!(x.midpoint(), rat(5, 1408));
        assert!((x.to_f64() + 0.001380).abs() < 1e-5);
        assert!((y.to_f64() - 0.008482).abs() < 1e-5);
        assert_eq!(x.cmp_exact(&y), Ordering::Less);
    }

    #[test]
    fn omega4_two_intervals() {
        let w = window(4, 14, 2).unwrap();
        assert!(w.is_nonempty());
        let c = w.witness().unwrap().clone();
        assert!(witness_verify(4, 14, &c, 2).unwrap().verified);
        let (x1, _) = &w.endpoints[0];
        let (x2, y2) = &w.endpoints[1];
        // u_1 < 0 here, so x_1 < 0 as well; the window stays open through x_1 < y_2.
        assert!(x2.to_f64() < x1.to_f64() && x1.to_f64() < 0.0);
        assert_eq!(x1.cmp_exact(y2), Ordering::Less);
        assert_eq!(x2.cmp_exact(x1), Ordering::Less);
    }

    #[test]
    fn quadratic_test_examples() {
        assert!(witness_verify(3, 12, &rat(5, 1408), 1).unwrap().verified);
        assert!(witness_verify(3, 12, &rat(0, 1), 1).unwrap().verified);
        assert!(!witness_verify(3, 12, &rat(1, 1), 1).unwrap().verified);
        let data = OmegaData::new(3).unwrap();
        let v = data.quadratic_values(12, &rat(5, 1408), 1).unwrap();
        let expect = rat(35200, 1982464) - rat(50, 1408) - rat(3510, 212940);
        assert_eq!(v[0], expect);
    }

    #[test]
    fn endpoint_order_matches_floats() {
        let data = OmegaData::new(4).unwrap();
        let cert = endpoint_gap_cert(&data, 14, 2, 1).unwrap();
        // (n-2)(d_2 - d_1) + d_1√Δ_2 + d_2√Δ_1 > 0
        assert_eq!(cert.sign(), Sign::Positive);
    }

    #[test]
    fn domain_checks() {
        assert!(window(3, 11, 1).is_err());
        assert!(window(4, 14, 3).is_err());
    }
}
