//! Numerical evaluation of the catalog identities at real `q` close to 1.
//!
//! Sides are summed or multiplied straight from their term formulas rather
//! than from truncated coefficients: near `q = 1` the coefficient tail decays
//! like `q^n` and would need tens of thousands of coefficients.
//!
//! A sum stops once the current term drops below `eps` times the running sum;
//! a product stops once the current factor is within `eps / 2` of 1 (which
//! bounds `|ln factor| < eps`).

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::arith::{bernoulli, sigma};
use crate::catalog::{lookup, product_triples, LimitConstant, LimitTarget, PSI_PRODUCT};
use crate::real::{HighPrecisionReal as Real, Precision};
use crate::series::PowerSeries;

pub const DEFAULT_MAX_TERMS: usize = 1_000_000;

/// Pseudo-identity for `Gamma_(q^2)(1/2)^2 -> pi`, compared against
/// `(1-q^2) prod (1-q^(2n))^2/(1-q^(2n-1))^2`.
pub const GAMMA_HALF_ID: &str = "gamma-half";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LimitError {
    NoConvergence { what: String, terms: usize },
    OutOfDomain(String),
    UnknownIdentity(String),
    NoLimitTarget(String),
    BadRange { j_min: u32, j_max: u32 },
}

impl fmt::Display for LimitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitError::NoConvergence { what, terms } => {
                write!(f, "{what} did not converge within {terms} terms")
            }
            LimitError::OutOfDomain(msg) => write!(f, "argument out of domain: {msg}"),
            LimitError::UnknownIdentity(id) => write!(f, "no numeric evaluator for `{id}`"),
            LimitError::NoLimitTarget(id) => write!(f, "`{id}` has no q -> 1 limit target"),
            LimitError::BadRange { j_min, j_max } => {
                write!(f, "need 1 <= j_min <= j_max <= 20, got {j_min}..{j_max}")
            }
        }
    }
}

impl core::error::Error for LimitError {}

/// Working precision, relative stopping tolerance and term ceiling.
#[derive(Debug, Clone)]
pub struct EvalConfig {
    pub precision: Precision,
    pub eps: Real,
    pub max_terms: usize,
}

impl EvalConfig {
    /// `eps = 10^-(P-5)`, at most a million terms.
    pub fn new(precision: Precision) -> Self {
        EvalConfig { precision, eps: precision.tolerance(5), max_terms: DEFAULT_MAX_TERMS }
    }
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self::new(Precision::DEFAULT)
    }
}

fn check_q(q0: &Real, what: &str) -> Result<(), LimitError> {
    let one = Real::one(q0.precision());
    if q0.is_negative() || *q0 >= one {
        return Err(LimitError::OutOfDomain(alloc::format!("{what} needs 0 <= q < 1, got {q0:.12}")));
    }
    Ok(())
}

/// Sums `term(0) + term(1) + ...` until a term is negligible against the sum.
fn sum_until<F>(cfg: &EvalConfig, what: &str, mut term: F) -> Result<Real, LimitError>
where
    F: FnMut(usize) -> Real,
{
    let mut sum = Real::zero(cfg.precision);
    for k in 0..cfg.max_terms {
        let t = term(k);
        sum = &sum + &t;
        if t.abs() <= &cfg.eps * &sum.abs() {
            return Ok(sum);
        }
    }
    Err(LimitError::NoConvergence { what: what.to_string(), terms: cfg.max_terms })
}

/// Multiplies `factor(1) * factor(2) * ...` until a factor is within `eps/2` of 1.
fn product_until<F>(cfg: &EvalConfig, what: &str, mut factor: F) -> Result<Real, LimitError>
where
    F: FnMut(usize) -> Real,
{
    let one = Real::one(cfg.precision);
    let half_eps = cfg.eps.div_int(2);
    let mut acc = one.clone();
    for n in 1..=cfg.max_terms {
        let f = factor(n);
        acc = &acc * &f;
        if (&f - &one).abs() < half_eps {
            return Ok(acc);
        }
    }
    Err(LimitError::NoConvergence { what: what.to_string(), terms: cfg.max_terms })
}

/// `prod_(n>=1) prod_f (1 - q^(a_f n - b_f))^(e_f)` for `(a, b, e)` triples.
fn eval_product_triples(triples: &[(u32, u32, i32)], q: &Real, cfg: &EvalConfig, what: &str) -> Result<Real, LimitError> {
    let one = Real::one(cfg.precision);
    // running q^(a n - b) and the step q^a for each factor
    let mut powers: Vec<(Real, Real, i32)> = triples
        .iter()
        .map(|&(a, b, e)| (q.powi(a - b), q.powi(a), e))
        .collect();
    product_until(cfg, what, |_| {
        let mut num = one.clone();
        let mut den = one.clone();
        for (x, step, e) in powers.iter_mut() {
            let base = (&one - &*x).powi(e.unsigned_abs());
            if *e > 0 {
                num = &num * &base;
            } else {
                den = &den * &base;
            }
            *x = &*x * &*step;
        }
        &num / &den
    })
}

// sum q^k (1 + q^(2k+1)) / (1 - q^(2k+1))^2
fn lambert_sigma(q: &Real, cfg: &EvalConfig) -> Result<Real, LimitError> {
    let one = Real::one(cfg.precision);
    let q2 = q * q;
    let mut qk = one.clone();
    let mut x = q.clone();
    sum_until(cfg, "lambert sum", |_| {
        let t = &qk * &(&one + &x) / (&one - &x).powi(2);
        qk = &qk * q;
        x = &x * &q2;
        t
    })
}

// sum q^(2k - floor((-1)^k k/2)) / (1 - q^(2k+1))^2, with k = 2j and 2j+1 taken
// together so the summed terms shrink monotonically
fn eq14_lambert(q: &Real, cfg: &EvalConfig) -> Result<Real, LimitError> {
    let one = Real::one(cfg.precision);
    let (q3, q4, q5) = (q.powi(3), q.powi(4), q.powi(5));
    let mut even_num = one.clone(); // q^(3j)
    let mut odd_num = q3.clone(); // q^(5j+3)
    let mut even_den = q.clone(); // q^(4j+1)
    let mut odd_den = q3.clone(); // q^(4j+3)
    sum_until(cfg, "eq14 lambert sum", |_| {
        let t = &even_num / (&one - &even_den).powi(2) + &odd_num / (&one - &odd_den).powi(2);
        even_num = &even_num * &q3;
        odd_num = &odd_num * &q5;
        even_den = &even_den * &q4;
        odd_den = &odd_den * &q4;
        t
    })
}

// sum q^(2k) (1 + 4x + x^2) / (1 - x)^4 with x = q^(2k+1)
fn eq18_lambert(q: &Real, cfg: &EvalConfig) -> Result<Real, LimitError> {
    let one = Real::one(cfg.precision);
    let q2 = q * q;
    let mut q2k = one.clone();
    let mut x = q.clone();
    sum_until(cfg, "eq18 lambert sum", |_| {
        let numer = &one + &x.mul_int(4) + &x * &x;
        let t = &q2k * &numer / (&one - &x).powi(4);
        q2k = &q2k * &q2;
        x = &x * &q2;
        t
    })
}

// sum q^(T_n)
fn theta_psi(q: &Real, cfg: &EvalConfig) -> Result<Real, LimitError> {
    let mut qt = Real::one(cfg.precision);
    let mut step = q.clone(); // q^(n+1)
    sum_until(cfg, "theta sum", |_| {
        let t = qt.clone();
        qt = &qt * &step;
        step = &step * q;
        t
    })
}

// sum (-q)^k / (1 - q^(2k+1))
fn ramanujan_lambert(q: &Real, cfg: &EvalConfig) -> Result<Real, LimitError> {
    let one = Real::one(cfg.precision);
    let q2 = q * q;
    let minus_q = -q;
    let mut sign_qk = one.clone();
    let mut x = q.clone();
    sum_until(cfg, "ramanujan sum", |_| {
        let t = &sign_qk / (&one - &x);
        sign_qk = &sign_qk * &minus_q;
        x = &x * &q2;
        t
    })
}

// [n]_q = (1 - q^n)/(1 - q), or n at q = 1 (not reachable here since q < 1)
fn q_number(qn: &Real, one_minus_q: &Real) -> Real {
    (&Real::one(qn.precision()) - qn) / one_minus_q
}

// sum_(n>=1) q^(n^2) (1 + 2q^n) / ([n]_q^2 [2n, n]_q)
fn hessami_pilehrood_lhs(q: &Real, cfg: &EvalConfig) -> Result<Real, LimitError> {
    let one = Real::one(cfg.precision);
    let omq = &one - q;
    let mut qn = q.clone(); // q^n
    let mut qn2 = q.clone(); // q^(n^2)
    let mut central = &one + q; // [2, 1]_q = 1 + q
    sum_until(cfg, "hessami-pilehrood lhs", |k| {
        let n = k + 1;
        let qint = q_number(&qn, &omq);
        let t = &qn2 * &(&one + &qn.mul_int(2)) / (&qint * &qint * &central);
        // advance to n + 1
        let q2n1 = q.powi(2 * n as u32 + 1);
        let q2n2 = &q2n1 * q;
        let qn1 = &qn * q;
        let q_next = q_number(&qn1, &omq);
        central = &central * &q_number(&q2n1, &omq) * &q_number(&q2n2, &omq) / (&q_next * &q_next);
        qn2 = &qn2 * &q2n1;
        qn = qn1;
        t
    })
}

// sum_(n>=1) q^n (1-q)^2 / (1-q^n)^2
fn hessami_pilehrood_rhs(q: &Real, cfg: &EvalConfig) -> Result<Real, LimitError> {
    let one = Real::one(cfg.precision);
    let omq2 = (&one - q).powi(2);
    let mut qn = q.clone();
    sum_until(cfg, "hessami-pilehrood rhs", |_| {
        let t = &qn * &omq2 / (&one - &qn).powi(2);
        qn = &qn * q;
        t
    })
}

// sum sigma(2n+1) q^n
fn sigma_series_value(q: &Real, cfg: &EvalConfig) -> Result<Real, LimitError> {
    let mut qn = Real::one(cfg.precision);
    sum_until(cfg, "sigma series", |n| {
        let t = qn.mul_int(BigInt::from(sigma(2 * n as u64 + 1)));
        qn = &qn * q;
        t
    })
}

/// Left-hand side of a catalog identity (or the q-Gamma route of
/// [`GAMMA_HALF_ID`]) evaluated at `q0`.
pub fn eval_lambert_side(id: &str, q0: &Real, cfg: &EvalConfig) -> Result<Real, LimitError> {
    check_q(q0, id)?;
    let q = q0.with_precision(cfg.precision);
    match id {
        "eq13" | "sigma-lambert" => lambert_sigma(&q, cfg),
        "eq14" => eq14_lambert(&q, cfg),
        "eq18" => eq18_lambert(&q, cfg),
        "gauss-psi" => theta_psi(&q, cfg),
        "ramanujan" => ramanujan_lambert(&q, cfg),
        "hessami-pilehrood" => hessami_pilehrood_lhs(&q, cfg),
        GAMMA_HALF_ID => {
            let half = Real::from_ratio(1, 2, cfg.precision);
            Ok(q_gamma(&half, &(&q * &q), cfg)?.powi(2))
        }
        _ => Err(LimitError::UnknownIdentity(id.to_string())),
    }
}

/// Right-hand side of a catalog identity at `q0`: the infinite product for
/// the product identities, the series for `sigma-lambert` and
/// `hessami-pilehrood`, and `(1-q^2) psi-type product` for [`GAMMA_HALF_ID`].
pub fn eval_product_side(id: &str, q0: &Real, cfg: &EvalConfig) -> Result<Real, LimitError> {
    check_q(q0, id)?;
    let q = q0.with_precision(cfg.precision);
    if let Some(triples) = product_triples(id) {
        return eval_product_triples(triples, &q, cfg, id);
    }
    match id {
        "sigma-lambert" => sigma_series_value(&q, cfg),
        "hessami-pilehrood" => hessami_pilehrood_rhs(&q, cfg),
        GAMMA_HALF_ID => {
            let one = Real::one(cfg.precision);
            let psi = eval_product_triples(PSI_PRODUCT, &q, cfg, id)?;
            let prod = &psi * &psi;
            Ok(&(&one - &(&q * &q)) * &prod)
        }
        _ => Err(LimitError::UnknownIdentity(id.to_string())),
    }
}

/// Jackson's `Gamma_q(x) = (1-q)^(1-x) prod_(n>=1) (1-q^n)/(1-q^(n+x-1))`.
pub fn q_gamma(x: &Real, q0: &Real, cfg: &EvalConfig) -> Result<Real, LimitError> {
    check_q(q0, "q_gamma")?;
    if !x.is_positive() {
        return Err(LimitError::OutOfDomain(alloc::format!("q_gamma needs x > 0, got {x:.12}")));
    }
    let prec = cfg.precision;
    let one = Real::one(prec);
    let q = q0.with_precision(prec);
    let x = x.with_precision(prec);
    let shift = &x - &one;
    if q.is_zero() {
        // every factor is 1 and (1-q)^(1-x) = 1
        return Ok(one);
    }
    // q^(x-1) and (1-q)^(1-x); exact 1 when x = 1
    let (q_shift, prefactor) = if shift.is_zero() {
        (one.clone(), one.clone())
    } else {
        (q.powf(&shift), (&one - &q).powf(&-&shift))
    };
    let mut qn = q.clone();
    let prod = product_until(cfg, "q_gamma product", |_| {
        let f = (&one - &qn) / (&one - &(&qn * &q_shift));
        qn = &qn * &q;
        f
    })?;
    Ok(&prefactor * &prod)
}

/// `zeta(2m) = (-1)^(m-1) 2^(2m-1) pi^(2m) B_(2m) / (2m)!` with exact `B_(2m)`.
///
/// # Panics
///
/// Panics if `m == 0`.
pub fn zeta_even(m: u32, prec: Precision) -> Real {
    assert!(m >= 1, "zeta_even needs m >= 1");
    let b = bernoulli(2 * m as usize).pop().expect("bernoulli returns B_0..B_2m");
    let mut factorial = BigInt::from(1u32);
    for i in 2..=2 * m {
        factorial *= i;
    }
    let coeff = b * num_rational::BigRational::new(BigInt::from(1u32) << (2 * m - 1) as usize, factorial);
    let coeff = if m % 2 == 0 { -coeff } else { coeff };
    Real::from_rational(&coeff, prec) * Real::pi(prec).powi(2 * m)
}

/// `pi^k / d` for a named limit constant.
pub fn constant_value(c: LimitConstant, prec: Precision) -> Real {
    let (k, d) = c.pi_power_and_divisor();
    Real::pi(prec).powi(k).div_int(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classic {
    /// `prod 4n^2 / (4n^2 - 1) -> pi/2`
    Wallis,
    /// `sum (-1)^k / (2k+1) -> pi/4`
    Leibniz,
}

/// The `n`-term partial product (Wallis) or partial sum (Leibniz).
pub fn classic_partials(which: Classic, n: u64, prec: Precision) -> Real {
    match which {
        Classic::Wallis => {
            let mut acc = Real::one(prec);
            for k in 1..=n {
                let four_k2 = BigInt::from(4u32) * BigInt::from(k) * BigInt::from(k);
                acc = acc.mul_int(four_k2.clone()).div_int(four_k2 - 1);
            }
            acc
        }
        Classic::Leibniz => {
            let mut acc = Real::zero(prec);
            for k in 0..n {
                let t = Real::from_ratio(1, 2 * k + 1, prec);
                acc = if k % 2 == 0 { acc + t } else { acc - t };
            }
            acc
        }
    }
}

/// `sum c_n q0^n` over the stored coefficients of a truncated series.
pub fn eval_series_at(series: &PowerSeries, q0: &Real) -> Real {
    // Horner from the top coefficient down
    let prec = q0.precision();
    series
        .coeffs()
        .iter()
        .rev()
        .fold(Real::zero(prec), |acc, c| &acc * q0 + Real::from_int(c.clone(), prec))
}

/// One evaluation point of a limit experiment. Values are already scaled by
/// `(1-q)^s`; errors are absolute distances to the target.
#[derive(Debug, Clone)]
pub struct LimitPoint {
    pub j: u32,
    pub q: Real,
    pub lhs: Real,
    pub rhs: Real,
    pub lhs_error: Real,
    pub rhs_error: Real,
}

impl LimitPoint {
    /// The larger of the two side errors.
    pub fn error(&self) -> &Real {
        core::cmp::max(&self.lhs_error, &self.rhs_error)
    }
}

#[derive(Debug, Clone)]
pub struct LimitExperiment {
    pub id: String,
    pub scaling: u32,
    pub target: LimitConstant,
    pub target_value: Real,
    pub points: Vec<LimitPoint>,
}

impl LimitExperiment {
    /// Both side errors strictly decrease from point `j_start` on.
    pub fn errors_decrease_from(&self, j_start: u32) -> bool {
        let pts: Vec<&LimitPoint> = self.points.iter().filter(|p| p.j >= j_start).collect();
        pts.windows(2)
            .all(|w| w[1].lhs_error < w[0].lhs_error && w[1].rhs_error < w[0].rhs_error)
    }

    /// Largest side error at the last point, relative to the target.
    pub fn final_relative_error(&self) -> Option<Real> {
        self.points.last().map(|p| p.error() / &self.target_value)
    }
}

/// Scaling exponent and limit constant for an id, including [`GAMMA_HALF_ID`].
pub fn limit_target(id: &str) -> Result<LimitTarget, LimitError> {
    if id == GAMMA_HALF_ID {
        return Ok(LimitTarget { constant: LimitConstant::Pi, scaling: 0 });
    }
    let entry = lookup(id).ok_or_else(|| LimitError::UnknownIdentity(id.to_string()))?;
    entry.limit.ok_or_else(|| LimitError::NoLimitTarget(id.to_string()))
}

/// `q_j = 1 - 2^-j` exactly.
pub fn approach_point(j: u32, prec: Precision) -> Real {
    Real::one(prec) - Real::from_ratio(1, BigInt::from(1u32) << j as usize, prec)
}

/// Evaluates both sides, scaled by `(1-q_j)^s`, at `q_j = 1 - 2^-j` for
/// `j = j_min..=j_max`. `scaling` defaults to the identity's own exponent.
pub fn run_limit_experiment(
    id: &str,
    scaling: Option<u32>,
    j_min: u32,
    j_max: u32,
    cfg: &EvalConfig,
) -> Result<LimitExperiment, LimitError> {
    if j_min < 1 || j_min > j_max || j_max > 20 {
        return Err(LimitError::BadRange { j_min, j_max });
    }
    let target = limit_target(id)?;
    let s = scaling.unwrap_or(target.scaling);
    let prec = cfg.precision;
    let target_value = constant_value(target.constant, prec);
    let mut points = Vec::with_capacity((j_max - j_min + 1) as usize);
    for j in j_min..=j_max {
        let q = approach_point(j, prec);
        let scale = (Real::one(prec) - &q).powi(s);
        let lhs = &scale * &eval_lambert_side(id, &q, cfg)?;
        let rhs = &scale * &eval_product_side(id, &q, cfg)?;
        let lhs_error = (&lhs - &target_value).abs();
        let rhs_error = (&rhs - &target_value).abs();
        points.push(LimitPoint { j, q, lhs, rhs, lhs_error, rhs_error });
    }
    Ok(LimitExperiment { id: id.to_string(), scaling: s, target: target.constant, target_value, points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_eq13, catalog};

    fn real(s: &str) -> Real {
        Real::parse(s, Precision::DEFAULT).unwrap()
    }

    fn rel(a: &Real, b: &Real) -> Real {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn eq13_at_half_is_coarse_but_finite() {
        let cfg = EvalConfig::default();
        let v = eval_lambert_side("eq13", &real("0.5"), &cfg).unwrap();
        let scaled = &v * &real("0.25");
        let target = constant_value(LimitConstant::PiSquaredOver4, cfg.precision);
        assert!(rel(&scaled, &target) < real("0.4"));
    }

    #[test]
    fn eq13_near_zero_tends_to_constant_term() {
        let cfg = EvalConfig::default();
        let v = eval_lambert_side("eq13", &real("1e-30"), &cfg).unwrap();
        assert!((&v - &Real::one(cfg.precision)).abs() < real("1e-29"));
        let v0 = eval_lambert_side("eq13", &real("0"), &cfg).unwrap();
        assert_eq!(v0, Real::one(cfg.precision));
    }

    #[test]
    fn product_side_at_zero_is_one() {
        let cfg = EvalConfig::default();
        for id in ["eq13", "eq14", "eq18", "gauss-psi", "ramanujan"] {
            assert_eq!(eval_product_side(id, &real("0"), &cfg).unwrap(), Real::one(cfg.precision), "{id}");
        }
    }

    #[test]
    fn gauss_product_matches_theta_sum() {
        let cfg = EvalConfig::default();
        let q = real("0.9");
        let a = eval_lambert_side("gauss-psi", &q, &cfg).unwrap();
        let b = eval_product_side("gauss-psi", &q, &cfg).unwrap();
        assert!(rel(&a, &b) < real("1e-40"));
    }

    #[test]
    fn both_sides_agree_numerically() {
        let cfg = EvalConfig::default();
        let tol = cfg.precision.tolerance(10);
        for entry in catalog() {
            for q in ["0.5", "0.875", "0.99"] {
                let q = real(q);
                let a = eval_lambert_side(entry.id, &q, &cfg).unwrap();
                let b = eval_product_side(entry.id, &q, &cfg).unwrap();
                assert!(rel(&a, &b) < tol, "{} at {q}: {a} vs {b}", entry.id);
            }
        }
    }

    #[test]
    fn truncated_coefficients_converge_to_direct_sum() {
        let cfg = EvalConfig::default();
        for q in ["0.5", "0.3"] {
            let q = real(q);
            let direct = eval_lambert_side("eq13", &q, &cfg).unwrap();
            let gaps: Vec<Real> = [64usize, 128, 256]
                .iter()
                .map(|&n| (&eval_series_at(&build_eq13(n).0, &q) - &direct).abs())
                .collect();
            let floor = cfg.precision.tolerance(10);
            assert!(gaps.windows(2).all(|w| w[1] < w[0] || w[1] < floor), "{q}");
            assert!(gaps[2] < floor, "{q}");
        }
    }

    #[test]
    fn q_gamma_special_values() {
        let cfg = EvalConfig::default();
        let one = Real::one(cfg.precision);
        for q in ["0.1", "0.5", "0.9", "0.999"] {
            assert_eq!(q_gamma(&one, &real(q), &cfg).unwrap(), one, "{q}");
            let g2 = q_gamma(&Real::from_int(2, cfg.precision), &real(q), &cfg).unwrap();
            assert!(rel(&g2, &one) < cfg.precision.tolerance(10), "{q}: {g2}");
        }
        assert!(q_gamma(&Real::zero(cfg.precision), &real("0.5"), &cfg).is_err());
        assert!(q_gamma(&one, &real("1"), &cfg).is_err());
    }

    #[test]
    fn gamma_half_squared_approaches_pi() {
        let cfg = EvalConfig::new(Precision::new(30));
        let pi = Real::pi(cfg.precision);
        let errs: Vec<Real> = (2..=8)
            .map(|j| {
                let q = approach_point(j, cfg.precision);
                (&eval_lambert_side(GAMMA_HALF_ID, &q, &cfg).unwrap() - &pi).abs()
            })
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn zeta_even_matches_closed_forms() {
        let prec = Precision::DEFAULT;
        let pi = Real::pi(prec);
        let tol = prec.tolerance(0);
        assert!((&zeta_even(1, prec) - &pi.powi(2).div_int(6)).abs() < tol);
        assert!((&zeta_even(2, prec) - &pi.powi(4).div_int(90)).abs() < tol);
        // zeta(6) = pi^6/945
        assert!((&zeta_even(3, prec) - &pi.powi(6).div_int(945)).abs() < tol);
    }

    #[test]
    fn classic_partial_values() {
        let prec = Precision::new(30);
        assert_eq!(classic_partials(Classic::Wallis, 1, prec), Real::from_ratio(4, 3, prec));
        assert_eq!(classic_partials(Classic::Leibniz, 2, prec), Real::from_ratio(2, 3, prec));
        let w = classic_partials(Classic::Wallis, 100_000, prec);
        let half_pi = Real::pi(prec).div_int(2);
        assert!((&w - &half_pi).abs() < Real::parse("1e-4", prec).unwrap());
    }

    #[test]
    fn experiment_validation() {
        let cfg = EvalConfig::default();
        assert_eq!(
            run_limit_experiment("eq13", None, 0, 3, &cfg).unwrap_err(),
            LimitError::BadRange { j_min: 0, j_max: 3 }
        );
        assert!(matches!(run_limit_experiment("gauss-psi", None, 1, 2, &cfg), Err(LimitError::NoLimitTarget(_))));
        assert!(matches!(run_limit_experiment("nope", None, 1, 2, &cfg), Err(LimitError::UnknownIdentity(_))));
    }

    #[test]
    fn term_ceiling_reports_no_convergence() {
        let cfg = EvalConfig { max_terms: 10, ..EvalConfig::default() };
        assert!(matches!(
            eval_lambert_side("eq13", &real("0.99"), &cfg),
            Err(LimitError::NoConvergence { .. })
        ));
    }
}
