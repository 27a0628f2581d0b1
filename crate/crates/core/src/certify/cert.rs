//! Certificate records: what is claimed, over which range, and the data that
//! lets an independent checker confirm it.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::exact::rational::serde_str;
use crate::exact::{RatFunc, Rational, UniPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn from_i8(s: i8) -> Self {
        match s.signum() {
            -1 => Sign::Negative,
            0 => Sign::Zero,
            _ => Sign::Positive,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn of(r: &Rational) -> Self {
        Self::from_i8(crate::exact::rational::sign_of(r))
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_i8(self.as_i8() * rhs.as_i8())
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Negative => "NEGATIVE",
            Sign::Zero => "ZERO",
            Sign::Positive => "POSITIVE",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    DescartesShift,
    Sturm,
    SquaringTrace,
    PointwiseExhaustive,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::DescartesShift => "descartes-shift",
            Method::Sturm => "sturm",
            Method::SquaringTrace => "squaring-trace",
            Method::PointwiseExhaustive => "pointwise-exhaustive",
        })
    }
}

/// What a certificate is about. Carries enough parameters to rebuild the
/// expression from scratch, so a tampered expression is caught on replay.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "subject", rename_all = "snake_case")]
pub enum ClaimKind {
    DPositive {
        omega: u32,
        k: u32,
    },
    NuGapPositive {
        omega: u32,
        k: u32,
    },
    UNegative {
        omega: u32,
        k: u32,
    },
    DDecreasing {
        omega: u32,
        k: u32,
        j: u32,
    },
    DeltaPositive {
        omega: u32,
        k: u32,
    },
    MinorantPositive {
        omega: u32,
        k: u32,
        minorant: Minorant,
    },
    DeltaMinorant {
        omega: u32,
        k: u32,
        minorant: Minorant,
    },
    PairMinorant {
        omega: u32,
        k: u32,
        j: u32,
        lower: Minorant,
        upper: Minorant,
    },
    WindowWitnesses {
        omega: u32,
        k_max: u32,
    },
    EndpointGap {
        omega: u32,
        n: u64,
        lower_k: u32,
        upper_k: u32,
    },
    /// A free-standing expression with no spectral meaning attached.
    Expression,
}

/// A linear minorant `rho * n + sigma`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Minorant {
    #[serde(with = "serde_str")]
    pub rho: Rational,
    #[serde(with = "serde_str")]
    pub sigma: Rational,
}

impl Minorant {
    pub fn poly(&self) -> UniPoly {
        UniPoly::linear(self.rho.clone(), self.sigma.clone())
    }
}

impl fmt::Display for Minorant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum Expr {
    Poly {
        poly: UniPoly,
    },
    RatFunc {
        f: RatFunc,
    },
    /// `a + b√u + c√v`
    SqrtSum {
        #[serde(with = "serde_str")]
        a: Rational,
        #[serde(with = "serde_str")]
        b: Rational,
        #[serde(with = "serde_str")]
        c: Rational,
        #[serde(with = "serde_str")]
        u: Rational,
        #[serde(with = "serde_str")]
        v: Rational,
    },
    /// The feasibility quadratics `q_k(c)` for `k ≤ k_max`, evaluated at each
    /// witness row.
    Quadratics {
        omega: u32,
        k_max: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    #[serde(flatten)]
    pub kind: ClaimKind,
    pub statement: String,
    pub expression: Expr,
    pub sign: Sign,
}

/// Integer range `[from, to]`; `to = None` means the whole ray `n ≥ from`
/// (ray certificates hold for every real `n ≥ from`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NRange {
    pub from: u64,
    pub to: Option<u64>,
}

impl NRange {
    pub fn ray(from: u64) -> Self {
        NRange { from, to: None }
    }

    pub fn closed(from: u64, to: u64) -> Self {
        NRange { from, to: Some(to) }
    }

    pub fn point(n: u64) -> Self {
        Self::closed(n, n)
    }
}

impl fmt::Display for NRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to {
            None => write!(f, "n >= {}", self.from),
            Some(t) if t == self.from => write!(f, "n = {t}"),
            Some(t) => write!(f, "{} <= n <= {}", self.from, t),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Domain {
    pub omega: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pair: Option<[u32; 2]>,
    pub n_range: NRange,
}

/// Proof that a polynomial has one sign on `[n0, ∞)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "proof", rename_all = "snake_case")]
pub enum RayWitness {
    /// `p(n0 + t)` has coefficients of one sign and a nonzero constant term.
    DescartesShift {
        #[serde(with = "serde_str::bigint")]
        n0: BigInt,
        shifted: UniPoly,
    },
    /// A Sturm chain (each entry a positive multiple of the canonical one)
    /// with equal sign-variation counts at `n0` and at infinity.
    Sturm {
        #[serde(with = "serde_str::bigint")]
        n0: BigInt,
        chain: Vec<UniPoly>,
        variations_at_n0: usize,
        variations_at_infinity: usize,
    },
    /// Every integer in `[n0, tail_from)` checked directly, then a root-free
    /// certificate from `tail_from` on.
    Pointwise {
        #[serde(with = "serde_str::bigint")]
        n0: BigInt,
        #[serde(with = "serde_str::bigint")]
        tail_from: BigInt,
        tail: Box<RayWitness>,
    },
}

impl RayWitness {
    pub fn method(&self) -> Method {
        match self {
            RayWitness::DescartesShift { .. } => Method::DescartesShift,
            RayWitness::Sturm { .. } => Method::Sturm,
            RayWitness::Pointwise { .. } => Method::PointwiseExhaustive,
        }
    }

    pub fn n0(&self) -> &BigInt {
        match self {
            RayWitness::DescartesShift { n0, .. }
            | RayWitness::Sturm { n0, .. }
            | RayWitness::Pointwise { n0, .. } => n0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub label: String,
    #[serde(with = "serde_str")]
    pub lhs: Rational,
    #[serde(with = "serde_str")]
    pub rhs: Rational,
    pub outcome: Sign,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowRow {
    pub n: u64,
    #[serde(with = "serde_str")]
    pub c: Rational,
    /// Index attaining the largest left endpoint.
    pub argmax_x: u32,
    /// Index attaining the smallest right endpoint.
    pub argmin_y: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Ray(RayWitness),
    RatFunc {
        num_sign: Sign,
        num: RayWitness,
        den_sign: Sign,
        den: RayWitness,
    },
    SquaringTrace {
        steps: Vec<TraceStep>,
    },
    WindowTable {
        rows: Vec<WindowRow>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignCert {
    pub claim: Claim,
    pub domain: Domain,
    pub method: Method,
    pub witness: Witness,
    pub verified: bool,
    pub wall_time_ms: u64,
}

impl SignCert {
    pub fn sign(&self) -> Sign {
        self.claim.sign
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{certify_intersection, certify_lemma_poly, sqrtsum_sign_at};
    use crate::exact::int;

    fn round_trip(c: &SignCert) {
        let s = serde_json::to_string(c).unwrap();
        let back: SignCert = serde_json::from_str(&s).unwrap();
        assert_eq!(&back, c);
    }

    #[test]
    fn certificates_round_trip_through_json() {
        certify_lemma_poly(4).unwrap().certificates.iter().for_each(round_trip);
        certify_intersection(6, 20, 20, 3).unwrap().certificates().for_each(round_trip);
        round_trip(&sqrtsum_sign_at(&int(3), &int(-1), &int(-1), &int(2), &int(3)).unwrap().1);
    }
}
