//! Spectral coefficients at fixed integers `(ω, k)` as exact polynomials and
//! rational functions in `n`.
//!
//! Every expanded form is built from the defining expression; nothing here is
//! transcribed from a hand expansion.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::beta::{integral_exact, reduce_to_base, IntegralIndex};
use crate::error::Error;
use crate::exact::{
    int, partial_fractions, rat, FractionTerm, PartialFractions, RatFunc, Rational, UniPoly,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpectralParams {
    pub omega: u32,
    pub k: u32,
}

impl SpectralParams {
    pub fn new(omega: u32, k: u32) -> Result<Self, Error> {
        if omega < 3 {
            return Err(Error::InvalidParams(format!("omega must be at least 3, got {omega}")));
        }
        if k < 1 || k > omega / 2 {
            return Err(Error::InvalidParams(format!(
                "k must lie in [1, {}] for omega = {omega}, got {k}",
                omega / 2
            )));
        }
        Ok(SpectralParams { omega, k })
    }

    /// All admissible `k` for `omega`.
    pub fn all(omega: u32) -> Result<Vec<Self>, Error> {
        if omega < 3 {
            return Err(Error::InvalidParams(format!("omega must be at least 3, got {omega}")));
        }
        Ok((1..=omega / 2).map(|k| SpectralParams { omega, k }).collect())
    }

    /// Smallest dimension in scope, `2ω + 6`.
    pub fn n_min(&self) -> u64 {
        2 * self.omega as u64 + 6
    }

    fn w2(&self) -> Rational {
        let w = int(self.omega as i64 + 2);
        &w * &w
    }
}

fn n_var() -> UniPoly {
    UniPoly::var()
}

fn n_plus(c: i64) -> UniPoly {
    UniPoly::linear(int(1), int(c))
}

/// `ν_k = (ω - 2k + 2)(n + ω - 2k)`.
pub fn nu(p: SpectralParams) -> UniPoly {
    let w = p.omega as i64;
    let k = p.k as i64;
    n_plus(w - 2 * k).scale(&int(w - 2 * k + 2))
}

/// `ν_k - n + 1`.
pub fn nu_gap(p: SpectralParams) -> UniPoly {
    &nu(p) - &n_plus(-1)
}

/// `(ω+2)²(n² + n + 2) - n(n-2)²`, shared by `d_k` and `P`.
fn d_tail(p: SpectralParams) -> UniPoly {
    let n = n_var();
    let nm2 = n_plus(-2);
    let quad = UniPoly::from_ints(&[2, 1, 1]).scale(&p.w2());
    &quad - &(&n * &nm2.pow(2))
}

/// `d_k = 4[(n-1)(n-2)ν_k - n(n-2)² + (ω+2)²(n²+n+2)]`.
pub fn d(p: SpectralParams) -> UniPoly {
    let lead = &(&n_plus(-1) * &n_plus(-2)) * &nu(p);
    (&lead + &d_tail(p)).scale(&int(4))
}

/// `u_k = ((n-3)/(4(n-2)) - ((n-1)² + (n-1)(ω+2)²)/(4(n-2)(ν_k - n + 1))) · ν_k`.
pub fn u(p: SpectralParams) -> RatFunc {
    let four_nm2 = n_plus(-2).scale(&int(4));
    let first = RatFunc::new(n_plus(-3), four_nm2.clone()).expect("nonzero");
    let nm1 = n_plus(-1);
    let top = &nm1.pow(2) + &nm1.scale(&p.w2());
    let second = RatFunc::new(top, &four_nm2 * &nu_gap(p)).expect("nonzero");
    &(&first - &second) * &RatFunc::from_poly(nu(p))
}

/// `Δ_k = (n-2)² - d_k u_k / ν_k²`.
pub fn delta(p: SpectralParams) -> RatFunc {
    let nu2 = RatFunc::from_poly(nu(p).pow(2));
    let du = &RatFunc::from_poly(d(p)) * &u(p);
    let ratio = du.checked_div(&nu2).expect("nu is nonzero");
    &RatFunc::from_poly(n_plus(-2).pow(2)) - &ratio
}

/// Midpoint of the root interval, `c_k = (n-2)²/d_k`.
pub fn c_mid(p: SpectralParams) -> RatFunc {
    RatFunc::new(n_plus(-2).pow(2), d(p)).expect("d is nonzero")
}

/// Lemma quantity `u_k - (n-2)² ν_k² / d_k`.
pub fn lemma_quantity(p: SpectralParams) -> RatFunc {
    let t = RatFunc::new(&n_plus(-2).pow(2) * &nu(p).pow(2), d(p)).expect("d is nonzero");
    &u(p) - &t
}

/// The quadratic `d_k/(2(n-2)) c² - (n-2) c + (n-2)u_k/(2ν_k²)` as three
/// rational-function coefficients `[c0, c1, c2]`.
pub fn feasibility_quadratic(p: SpectralParams) -> [RatFunc; 3] {
    let nm2 = n_plus(-2);
    let c2 = RatFunc::new(d(p), nm2.scale(&int(2))).expect("nonzero");
    let c1 = RatFunc::from_poly(-&nm2);
    let c0 = (&RatFunc::from_poly(nm2) * &u(p))
        .checked_div(&RatFunc::from_poly(nu(p).pow(2).scale(&int(2))))
        .expect("nonzero");
    [c0, c1, c2]
}

/// A quadratic `c0 + c1 x + c2 x²` whose coefficients are polynomials in `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PPoly {
    pub omega: u32,
    pub c0: UniPoly,
    pub c1: UniPoly,
    pub c2: UniPoly,
}

impl PPoly {
    pub fn derivative(&self) -> (UniPoly, UniPoly) {
        (self.c1.clone(), self.c2.scale(&int(2)))
    }

    /// Substitutes a polynomial in `n` for `x`.
    pub fn compose(&self, x: &UniPoly) -> UniPoly {
        &(&self.c0 + &(&self.c1 * x)) + &(&self.c2 * &x.pow(2))
    }
}

/// `P(x) = [(n-1)(n-2)x - n(n-2)² + (ω+2)²(n²+n+2)]
///         · [(n-3)(x-n+1) - (n-1)² - (n-1)(ω+2)²] - (n-2)³(x² - (n-1)x)`.
pub fn p_poly(omega: u32) -> Result<PPoly, Error> {
    let p = SpectralParams::new(omega, 1)?;
    let nm1 = n_plus(-1);
    let nm2 = n_plus(-2);
    let nm3 = n_plus(-3);
    // first factor: f1 x + f0
    let f1 = &nm1 * &nm2;
    let f0 = d_tail(p);
    // second factor: g1 x + g0
    let g1 = nm3.clone();
    let g0 = &(&(-&(&nm3 * &nm1)) - &nm1.pow(2)) - &nm1.scale(&p.w2());
    let cube = nm2.pow(3);
    let c2 = &(&f1 * &g1) - &cube;
    let c1 = &(&(&f1 * &g0) + &(&f0 * &g1)) + &(&cube * &nm1);
    let c0 = &f0 * &g0;
    Ok(PPoly { omega, c0, c1, c2 })
}

/// Printed derivative `P'(x) = -2(n-2)x - 2n(n-2)³ + 2(n²-3n-2)(ω+2)²` as
/// `(constant, x-coefficient)`.
pub fn p_prime_printed(omega: u32) -> (UniPoly, UniPoly) {
    let w2 = int((omega as i64 + 2).pow(2));
    let nm2 = n_plus(-2);
    let x_coef = nm2.scale(&int(-2));
    let c = &(&n_var() * &nm2.pow(3)).scale(&int(-2))
        + &UniPoly::from_ints(&[-2, -3, 1]).scale(&(&w2 * &int(2)));
    (c, x_coef)
}

#[derive(Clone, Debug, Serialize)]
pub struct PPrimeReport {
    pub omega: u32,
    pub constant_matches: bool,
    pub x_coefficient_matches: bool,
    /// The `x²` coefficient of `P` equals `(n-1)(n-2)(n-3) - (n-2)³`.
    pub leading_matches: bool,
    pub derived_constant: UniPoly,
    pub derived_x_coefficient: UniPoly,
}

impl PPrimeReport {
    pub fn passed(&self) -> bool {
        self.constant_matches && self.x_coefficient_matches && self.leading_matches
    }
}

pub fn p_prime_check(omega: u32) -> Result<PPrimeReport, Error> {
    let pp = p_poly(omega)?;
    let (dc, dx) = pp.derivative();
    let (pc, px) = p_prime_printed(omega);
    let nm2 = n_plus(-2);
    let lead = &(&(&n_plus(-1) * &nm2) * &n_plus(-3)) - &nm2.pow(3);
    Ok(PPrimeReport {
        omega,
        constant_matches: dc == pc,
        x_coefficient_matches: dx == px,
        leading_matches: pp.c2 == lead,
        derived_constant: dc,
        derived_x_coefficient: dx,
    })
}

/// `U_k = P(ν_k)`, checked against `(ν_k-n+1) d_k [(n-2)u_k/ν_k - (n-2)³ν_k/d_k]`.
pub fn big_u(p: SpectralParams) -> Result<UniPoly, Error> {
    let composed = p_poly(p.omega)?.compose(&nu(p));
    let nu_f = RatFunc::from_poly(nu(p));
    let nm2 = n_plus(-2);
    let a = (&RatFunc::from_poly(nm2.clone()) * &u(p)).checked_div(&nu_f)?;
    let b = RatFunc::new(&nm2.pow(3) * &nu(p), d(p))?;
    let defining = &RatFunc::from_poly(&nu_gap(p) * &d(p)) * &(&a - &b);
    if defining != RatFunc::from_poly(composed.clone()) {
        return Err(Error::Disagreement(format!(
            "U_{} at omega = {}: P(nu) = {} but the defining form gives {}",
            p.k, p.omega, composed, defining
        )));
    }
    Ok(composed)
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaDecomposition {
    pub params: SpectralParams,
    pub polynomial_part: UniPoly,
    /// Coefficients `a`, `b`, `e` of `a n² + b n + e`.
    #[serde(with = "crate::exact::rational::serde_str::vec")]
    pub quadratic: Vec<Rational>,
    #[serde(with = "crate::exact::rational::serde_str")]
    pub residue_n_minus_2: Rational,
    #[serde(with = "crate::exact::rational::serde_str")]
    pub residue_nu_gap: Rational,
    #[serde(with = "crate::exact::rational::serde_str")]
    pub residue_nu: Rational,
    pub terms: Vec<FractionTerm>,
    pub recombines: bool,
}

impl DeltaDecomposition {
    pub fn a(&self) -> &Rational {
        &self.quadratic[2]
    }

    pub fn has_nu_residue(&self) -> bool {
        !self.residue_nu.is_zero()
    }
}

/// Complete partial-fraction decomposition of `Δ_k` over the factors
/// `n - 2`, `ν_k - n + 1` and `ν_k`.
pub fn delta_partial_fractions(p: SpectralParams) -> Result<DeltaDecomposition, Error> {
    let f = delta(p);
    let factors = [n_plus(-2), nu_gap(p), nu(p)];
    let pf: PartialFractions = partial_fractions(&f, &factors)?;
    let recombines = pf.recombine() == f;
    let coef = |fac: &UniPoly| pf.coefficient(fac, 1).cloned().unwrap_or_else(Rational::zero);
    let quadratic = (0..3).map(|i| pf.polynomial_part.coeff(i)).collect();
    Ok(DeltaDecomposition {
        params: p,
        quadratic,
        residue_n_minus_2: coef(&factors[0]),
        residue_nu_gap: coef(&factors[1]),
        residue_nu: coef(&factors[2]),
        polynomial_part: pf.polynomial_part.clone(),
        terms: pf.terms.clone(),
        recombines,
    })
}

/// `-(n(n-2)² - (ω+2)²(n²+n+2)) / ((n-1)(n-2))`.
pub fn f2_coefficient(omega: u32) -> Result<RatFunc, Error> {
    let p = SpectralParams::new(omega, 1)?;
    RatFunc::new(d_tail(p), &n_plus(-1) * &n_plus(-2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionCase {
    /// `n > 2ω + 6`: every term converges and reduces to the base integral.
    Generic,
    /// `n = 2ω + 6`: the base integral is logarithmic; only the terms with
    /// the same logarithmic index contribute to the leading coefficient.
    Logarithmic,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpansionReport {
    pub omega: u32,
    pub n: u32,
    pub case: ExpansionCase,
    pub base: IntegralIndex,
    #[serde(with = "crate::exact::rational::serde_str")]
    pub assembled: Rational,
    #[serde(with = "crate::exact::rational::serde_str")]
    pub expected: Rational,
    pub passed: bool,
}

/// Reduces the `f²` coefficient of the expansion, with the normalisation
/// correction, to a multiple of `I_{n-2}^{n+2ω+1}` and compares it with
/// [`f2_coefficient`].
pub fn expansion_check(omega: u32, n: u32) -> Result<ExpansionReport, Error> {
    if omega < 3 {
        return Err(Error::InvalidParams(format!("omega must be at least 3, got {omega}")));
    }
    let w = omega as i64;
    let nn = n as i64;
    if nn < 2 * w + 6 {
        return Err(Error::InvalidParams(format!("need n >= 2*omega + 6, got n = {n}")));
    }
    let expected = f2_coefficient(omega)?.eval_int(nn)?;
    let base = IntegralIndex::new(n - 2, n + 2 * omega + 1);
    let c1 = int((w - nn + 4).pow(2));
    let c2 = int(2 * (w + 2) * (w - nn + 4));
    let c3 = int((w + 2).pow(2));
    let idx = |b: u32| IntegralIndex::new(n, b);
    let top = idx(2 * omega + n + 5);
    let mid = idx(2 * omega + n + 3);
    let low = idx(2 * omega + n + 1);

    if nn == 2 * w + 6 {
        let mut assembled = Rational::zero();
        for (c, i) in [(&c1, top), (&c2, mid), (&c3, low)] {
            if i.is_logarithmic() {
                assembled += c;
            }
        }
        return Ok(ExpansionReport {
            omega,
            n,
            case: ExpansionCase::Logarithmic,
            base,
            passed: assembled == expected,
            assembled,
            expected,
        });
    }

    // N - 1 with N = 2n/(n-2), times (n-2)² and the ratio I_n^{n+1}/I_n^{n-1}.
    let big_n = rat(2 * nn, nn - 2);
    let ratio = reduce_to_base(idx(n + 1), idx(n - 1))?;
    let c4 = -(&big_n - Rational::one()) * int((nn - 2).pow(2)) * ratio;
    let mut assembled = Rational::zero();
    for (c, i) in [(c1, top), (c2 + c4, mid), (c3, low)] {
        assembled += c * reduce_to_base(i, base)?;
    }
    Ok(ExpansionReport {
        omega,
        n,
        case: ExpansionCase::Generic,
        base,
        passed: assembled == expected,
        assembled,
        expected,
    })
}

/// Value of the base integral for a generic expansion check, for reporting.
pub fn expansion_base_value(omega: u32, n: u32) -> Result<crate::exact::PiScaled, Error> {
    integral_exact(IntegralIndex::new(n - 2, n + 2 * omega + 1))
}
