//! The identities under test, each a pair of series builders.
//!
//! Infinite sums are cut off at the first index past which every remaining
//! term has minimal q-degree at least the requested order, so the truncated
//! sums are exact modulo `q^N`.

use alloc::string::String;
use alloc::vec::Vec;
use core::time::Duration;

use num_bigint::BigInt;

use crate::arith::{sigma_series, triangular};
use crate::series::{equal_up_to, geometric_pow, lambert_term, Comparison, PowerSeries, ProductSpec, SeriesError};

pub type Builder = fn(usize) -> Result<PowerSeries, SeriesError>;

/// Classical constants reached by the scaled identities as `q -> 1`,
/// each of the form `pi^k / d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LimitConstant {
    Pi,
    PiOver4,
    PiSquaredOver4,
    PiSquaredOver6,
    PiSquaredOver8,
    PiFourthOver16,
    PiFourthOver90,
}

impl LimitConstant {
    /// `(k, d)` with the constant equal to `pi^k / d`.
    pub fn pi_power_and_divisor(self) -> (u32, u32) {
        match self {
            LimitConstant::Pi => (1, 1),
            LimitConstant::PiOver4 => (1, 4),
            LimitConstant::PiSquaredOver4 => (2, 4),
            LimitConstant::PiSquaredOver6 => (2, 6),
            LimitConstant::PiSquaredOver8 => (2, 8),
            LimitConstant::PiFourthOver16 => (4, 16),
            LimitConstant::PiFourthOver90 => (4, 90),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LimitConstant::Pi => "pi",
            LimitConstant::PiOver4 => "pi/4",
            LimitConstant::PiSquaredOver4 => "pi^2/4",
            LimitConstant::PiSquaredOver6 => "pi^2/6",
            LimitConstant::PiSquaredOver8 => "pi^2/8",
            LimitConstant::PiFourthOver16 => "pi^4/16",
            LimitConstant::PiFourthOver90 => "pi^4/90",
        }
    }
}

/// `(1-q)^scaling * side -> constant` as `q -> 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LimitTarget {
    pub constant: LimitConstant,
    pub scaling: u32,
}

/// A named identity `lhs = rhs` between two q-series.
#[derive(Debug, Clone, Copy)]
pub struct IdentityEntry {
    pub id: &'static str,
    pub description: &'static str,
    pub reference: &'static str,
    pub lhs: Builder,
    pub rhs: Builder,
    pub limit: Option<LimitTarget>,
}

impl IdentityEntry {
    pub fn build(&self, order: usize) -> Result<(PowerSeries, PowerSeries), SeriesError> {
        Ok(((self.lhs)(order)?, (self.rhs)(order)?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub index: usize,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Equal,
    Mismatch,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Equal => "equal",
            Status::Mismatch => "mismatch",
        }
    }
}

/// Outcome of comparing both sides of an identity through `q^(order-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub identity: String,
    pub order: usize,
    pub first_mismatch: Option<Mismatch>,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn from_comparison(identity: impl Into<String>, order: usize, cmp: Comparison, elapsed: Duration) -> Self {
        let first_mismatch = match cmp {
            Comparison::Equal { .. } => None,
            Comparison::Mismatch { index, lhs, rhs } => Some(Mismatch { index, lhs, rhs }),
        };
        VerificationReport { identity: identity.into(), order, first_mismatch, elapsed }
    }

    pub fn status(&self) -> Status {
        if self.first_mismatch.is_some() {
            Status::Mismatch
        } else {
            Status::Equal
        }
    }

    pub fn is_equal(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

#[cfg(feature = "std")]
pub(crate) fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = std::time::Instant::now();
    let out = f();
    (out, start.elapsed())
}

#[cfg(not(feature = "std"))]
pub(crate) fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    (f(), Duration::ZERO)
}

/// Builds both sides at `order` and compares them coefficientwise.
pub fn verify(entry: &IdentityEntry, order: usize) -> Result<VerificationReport, SeriesError> {
    let (cmp, elapsed) = timed(|| -> Result<Comparison, SeriesError> {
        let (lhs, rhs) = entry.build(order)?;
        equal_up_to(&lhs, &rhs, order)
    });
    Ok(VerificationReport::from_comparison(entry.id, order, cmp?, elapsed))
}

fn product(triples: &[(u32, u32, i32)], order: usize) -> PowerSeries {
    ProductSpec::from_triples(triples).expect("catalog product factors are valid").expand(order)
}

fn sum_terms(order: usize, terms: impl Iterator<Item = PowerSeries>) -> PowerSeries {
    terms.fold(PowerSeries::zero(order), |acc, t| acc + t)
}

fn poly(terms: &[(usize, i64)], order: usize) -> PowerSeries {
    PowerSeries::from_terms(terms.iter().copied(), order)
}

/// `2k - floor((-1)^k k / 2)` with floor toward negative infinity:
/// `3k/2` for even `k`, `(5k+1)/2` for odd `k`.
pub fn eq14_exponent(k: u64) -> u64 {
    let k = k as i64;
    let sign = if k % 2 == 0 { 1 } else { -1 };
    (2 * k - (sign * k).div_euclid(2)) as u64
}

// --- sum q^k (1 + q^(2k+1)) / (1 - q^(2k+1))^2 -------------------------------

fn lambert_sigma_with(order: usize, numer_sign: i64) -> PowerSeries {
    sum_terms(
        order,
        (0..order).map(|k| {
            let m = 2 * k + 1;
            lambert_term(k, &poly(&[(0, 1), (m, numer_sign)], order), m, 2, order)
        }),
    )
}

/// Factor triples `(a, b, e)` for `prod_(n>=1) (1 - q^(a n - b))^e`.
pub const EQ13_PRODUCT: &[(u32, u32, i32)] = &[(2, 1, -4), (2, 0, 4)];
pub const EQ14_PRODUCT: &[(u32, u32, i32)] = &[(2, 1, -2), (4, 2, -2), (2, 0, 2), (4, 0, 2)];
pub const EQ18_PRODUCT: &[(u32, u32, i32)] = &[(2, 1, -8), (2, 0, 8)];
pub const PSI_PRODUCT: &[(u32, u32, i32)] = &[(2, 1, -1), (2, 0, 1)];
pub const RAMANUJAN_PRODUCT: &[(u32, u32, i32)] = &[(4, 2, -2), (4, 0, 2)];

/// The right-hand product of an identity, if it has one.
pub fn product_triples(id: &str) -> Option<&'static [(u32, u32, i32)]> {
    Some(match id {
        "eq13" => EQ13_PRODUCT,
        "eq14" => EQ14_PRODUCT,
        "eq18" => EQ18_PRODUCT,
        "gauss-psi" => PSI_PRODUCT,
        "ramanujan" => RAMANUJAN_PRODUCT,
        _ => return None,
    })
}

pub fn eq13_lhs(order: usize) -> Result<PowerSeries, SeriesError> {
    Ok(lambert_sigma_with(order, 1))
}

pub fn eq13_rhs(order: usize) -> Result<PowerSeries, SeriesError> {
    Ok(product(EQ13_PRODUCT, order))
}

// --- sum q^(2k - floor((-1)^k k/2)) / (1 - q^(2k+1))^2 ---------------------------

fn eq14_lhs_with(order: usize, exponent: fn(u64) -> u64) -> PowerSeries {
    let one = PowerSeries::one(order);
    // every exponent is at least 3k/2, so k with 3k >= 2N contribute nothing
    sum_terms(
        order,
        (0..)
            .take_while(|&k: &usize| 3 * k < 2 * order)
            .map(|k| (k, exponent(k as u64) as usize))
            .filter(|&(_, p)| p < order)
            .map(|(k, p)| lambert_term(p, &one, 2 * k + 1, 2, order)),
    )
}

pub fn eq14_lhs(order: usize) -> Result<PowerSeries, SeriesError> {
    Ok(eq14_lhs_with(order, eq14_exponent))
}

pub fn eq14_rhs(order: usize) -> Result<PowerSeries, SeriesError> {
    Ok(product(EQ14_PRODUCT, order))
}

// --- sum q^(2k) (1 + 4q^(2k+1) + q^(4k+2)) / (1 - q^(2k+1))^4 --------------------

fn eq18_lhs_with(order: usize, middle: i64) -> PowerSeries {
    sum_terms(
        order,
        (0..order).take_while(|k| 2 * k < order).map(|k| {
            let m = 2 * k + 1;
            lambert_term(2 * k, &poly(&[(0, 1), (m, middle), (2 * m, 1)], order), m, 4, order)
        }),
    )
}

pub fn eq18_lhs(order: usize) -> Result<PowerSeries, SeriesError> {
    Ok(eq18_lhs_with(order, 4))
}

pub fn eq18_rhs(order: usize) -> Result<PowerSeries, SeriesError> {
    Ok(product(EQ18_PRODUCT, order))
}

// --- psi(q) ----------------------------------------------------------------

/// `psi(q) = sum q^(T_n)` truncated to `order`.
pub fn theta_psi(order: usize) -> PowerSeries {
    PowerSeries::from_terms(
        (0u64..)
            .map(triangular)
            .take_while(|&t| t < order as u128)
            .map(|t| (t as usize, 1)),
        order,
    )
}

pub fn gauss_psi_lhs(order: usize) -> Result<PowerSeries, SeriesError> {
    Ok(theta_psi(order))
}

pub fn gauss_psi_rhs(order: usize) -> Result<PowerSeries, SeriesError> {
    Ok(product(PSI_PRODUCT, order))
}

// --- sum (-q)^k / (1 - q^(2k+1)) --------------------------------------------

fn ramanujan_lhs_with(order: usize, alternate: bool) -> PowerSeries {
    let one = PowerSeries::one(order);
    sum_terms(
        order,
        (0..order).map(|k| {
            let t = lambert_term(k, &one, 2 * k + 1, 1, order);
            if alternate && k % 2 == 1 {
                -t
            } else {
                t
            }
        }),
    )
}

pub fn ramanujan_lhs(order: usize) -> Result<PowerSeries, SeriesError> {
    Ok(ramanujan_lhs_with(order, true))
}

pub fn ramanujan_rhs(order: usize) -> Result<PowerSeries, SeriesError> {
    Ok(product(RAMANUJAN_PRODUCT, order))
}

// --- q-integers and the central Gaussian binomial ---------------------------

/// `[n]_q = 1 + q + ... + q^(n-1)` truncated to `order`.
pub fn q_int(n: usize, order: usize) -> PowerSeries {
    PowerSeries::from_terms((0..n).map(|k| (k, 1)), order)
}

/// Gaussian binomial `[2n choose n]_q` by the recurrence
/// `[m, k] = [m-1, k-1] + q^k [m-1, k]`, truncated to `order`.
pub fn q_central_binomial(n: usize, order: usize) -> PowerSeries {
    // row[k] holds [m choose k]_q for the current m
    let mut row: Vec<PowerSeries> = alloc::vec![PowerSeries::one(order)];
    for m in 1..=2 * n {
        let width = m.min(n);
        let mut next = Vec::with_capacity(width + 1);
        for k in 0..=width {
            let left = if k >= 1 { Some(&row[k - 1]) } else { None };
            let right = row.get(k).map(|r| r.shift(k));
            next.push(match (left, right) {
                (Some(l), Some(r)) => l + &r,
                (Some(l), None) => l.clone(),
                (None, Some(r)) => r,
                (None, None) => unreachable!(),
            });
        }
        row = next;
    }
    row.swap_remove(n)
}

fn hessami_pilehrood_lhs_with(order: usize, sign: i64) -> Result<PowerSeries, SeriesError> {
    let mut acc = PowerSeries::zero(order);
    for n in (1..).take_while(|n: &usize| n * n < order) {
        let numer = poly(&[(n * n, 1), (n * n + n, 2 * sign)], order);
        let qi = q_int(n, order);
        let denom = &qi * &qi * q_central_binomial(n, order);
        acc = acc + numer.div_series(&denom)?;
    }
    Ok(acc)
}

/// `sum_(n>=1) q^(n^2) (1 + 2q^n) / ([n]_q^2 [2n choose n]_q)`.
pub fn hessami_pilehrood_lhs(order: usize) -> Result<PowerSeries, SeriesError> {
    hessami_pilehrood_lhs_with(order, 1)
}

/// `sum_(n>=1) q^n / [n]_q^2 = sum q^n (1-q)^2 / (1-q^n)^2`.
pub fn hessami_pilehrood_rhs(order: usize) -> Result<PowerSeries, SeriesError> {
    let one_minus_q_sq = poly(&[(0, 1), (1, -2), (2, 1)], order);
    Ok(sum_terms(
        order,
        (1..order).map(|n| PowerSeries::monomial(1, n, order) * &one_minus_q_sq * geometric_pow(n, 2, order)),
    ))
}

// --- sum sigma(2n+1) q^n ----------------------------------------------------

pub fn sigma_lambert_rhs(order: usize) -> Result<PowerSeries, SeriesError> {
    Ok(sigma_series(order))
}

/// `(lhs, rhs)` of `sum q^k(1+q^(2k+1))/(1-q^(2k+1))^2 = prod (1-q^(2n))^4/(1-q^(2n-1))^4`.
pub fn build_eq13(order: usize) -> (PowerSeries, PowerSeries) {
    (lambert_sigma_with(order, 1), product(EQ13_PRODUCT, order))
}

pub fn build_eq14(order: usize) -> (PowerSeries, PowerSeries) {
    (eq14_lhs_with(order, eq14_exponent), product(EQ14_PRODUCT, order))
}

pub fn build_eq18(order: usize) -> (PowerSeries, PowerSeries) {
    (eq18_lhs_with(order, 4), product(EQ18_PRODUCT, order))
}

pub fn build_gauss_psi(order: usize) -> (PowerSeries, PowerSeries) {
    (theta_psi(order), product(PSI_PRODUCT, order))
}

pub fn build_ramanujan(order: usize) -> (PowerSeries, PowerSeries) {
    (ramanujan_lhs_with(order, true), product(RAMANUJAN_PRODUCT, order))
}

pub fn build_hessami_pilehrood(order: usize) -> Result<(PowerSeries, PowerSeries), SeriesError> {
    Ok((hessami_pilehrood_lhs(order)?, hessami_pilehrood_rhs(order)?))
}

const CATALOG: [IdentityEntry; 7] = [
    IdentityEntry {
        id: "eq13",
        description: "sum q^k(1+q^(2k+1))/(1-q^(2k+1))^2 = prod (1-q^(2n))^4/(1-q^(2n-1))^4",
        reference: "Theorem 1.1, Eq. (1.3)",
        lhs: eq13_lhs,
        rhs: eq13_rhs,
        limit: Some(LimitTarget { constant: LimitConstant::PiSquaredOver4, scaling: 2 }),
    },
    IdentityEntry {
        id: "eq14",
        description: "sum q^(2k-floor((-1)^k k/2))/(1-q^(2k+1))^2 = prod (1-q^(2n))^2(1-q^(4n))^2/((1-q^(2n-1))^2(1-q^(4n-2))^2)",
        reference: "Theorem 1.1, Eq. (1.4)",
        lhs: eq14_lhs,
        rhs: eq14_rhs,
        limit: Some(LimitTarget { constant: LimitConstant::PiSquaredOver8, scaling: 2 }),
    },
    IdentityEntry {
        id: "eq18",
        description: "sum q^(2k)(1+4q^(2k+1)+q^(4k+2))/(1-q^(2k+1))^4 = prod (1-q^(2n))^8/(1-q^(2n-1))^8",
        reference: "Theorem 1.2, Eq. (1.8)",
        lhs: eq18_lhs,
        rhs: eq18_rhs,
        limit: Some(LimitTarget { constant: LimitConstant::PiFourthOver16, scaling: 4 }),
    },
    IdentityEntry {
        id: "gauss-psi",
        description: "sum q^(n(n+1)/2) = prod (1-q^(2n))/(1-q^(2n-1))",
        reference: "Lemma 2.1, Eqs. (2.1)-(2.2)",
        lhs: gauss_psi_lhs,
        rhs: gauss_psi_rhs,
        limit: None,
    },
    IdentityEntry {
        id: "ramanujan",
        description: "sum (-q)^k/(1-q^(2k+1)) = prod (1-q^(4n))^2/(1-q^(4n-2))^2",
        reference: "Section 1, Ramanujan's formula",
        lhs: ramanujan_lhs,
        rhs: ramanujan_rhs,
        limit: Some(LimitTarget { constant: LimitConstant::PiOver4, scaling: 1 }),
    },
    IdentityEntry {
        id: "hessami-pilehrood",
        description: "sum q^(n^2)(1+2q^n)/([n]_q^2 [2n,n]_q) = sum q^n/[n]_q^2",
        reference: "Section 1, Hessami Pilehrood identity",
        lhs: hessami_pilehrood_lhs,
        rhs: hessami_pilehrood_rhs,
        limit: Some(LimitTarget { constant: LimitConstant::PiSquaredOver6, scaling: 0 }),
    },
    IdentityEntry {
        id: "sigma-lambert",
        description: "sum q^k(1+q^(2k+1))/(1-q^(2k+1))^2 = sum sigma(2n+1) q^n",
        reference: "Lemma 2.3, Eq. (2.4)",
        lhs: eq13_lhs,
        rhs: sigma_lambert_rhs,
        limit: Some(LimitTarget { constant: LimitConstant::PiSquaredOver4, scaling: 2 }),
    },
];

/// Every identity, in the fixed order used by `all`.
pub fn catalog() -> &'static [IdentityEntry] {
    &CATALOG
}

pub fn lookup(id: &str) -> Option<&'static IdentityEntry> {
    CATALOG.iter().find(|e| e.id == id)
}

/// Deliberately broken variants of the catalog, one perturbed exponent,
/// coefficient or sign each. A working comparator must flag every one.
pub mod fixtures {
    use super::*;

    fn eq13_rhs_cubed(order: usize) -> Result<PowerSeries, SeriesError> {
        Ok(product(&[(2, 1, -3), (2, 0, 3)], order))
    }

    fn eq14_lhs_floor_sign(order: usize) -> Result<PowerSeries, SeriesError> {
        fn flipped(k: u64) -> u64 {
            let k = k as i64;
            let sign = if k % 2 == 0 { 1 } else { -1 };
            (2 * k + (sign * k).div_euclid(2)) as u64
        }
        // flipped(k) >= (3k-1)/2, which is still >= N once 3k >= 2N for odd k
        Ok(eq14_lhs_with(order, flipped))
    }

    fn eq18_lhs_middle_three(order: usize) -> Result<PowerSeries, SeriesError> {
        Ok(eq18_lhs_with(order, 3))
    }

    fn gauss_psi_rhs_squared_numerator(order: usize) -> Result<PowerSeries, SeriesError> {
        Ok(product(&[(2, 1, -1), (2, 0, 2)], order))
    }

    fn ramanujan_lhs_unsigned(order: usize) -> Result<PowerSeries, SeriesError> {
        Ok(ramanujan_lhs_with(order, false))
    }

    fn hessami_pilehrood_lhs_negated(order: usize) -> Result<PowerSeries, SeriesError> {
        hessami_pilehrood_lhs_with(order, -1)
    }

    fn sigma_lambert_lhs_numerator_sign(order: usize) -> Result<PowerSeries, SeriesError> {
        Ok(lambert_sigma_with(order, -1))
    }

    const MUTANTS: [IdentityEntry; 7] = [
        IdentityEntry {
            id: "eq13-rhs-exponent-3",
            description: "eq13 with product exponents 4 -> 3",
            reference: "",
            lhs: eq13_lhs,
            rhs: eq13_rhs_cubed,
            limit: None,
        },
        IdentityEntry {
            id: "eq14-floor-sign",
            description: "eq14 with 2k + floor((-1)^k k/2) in the exponent",
            reference: "",
            lhs: eq14_lhs_floor_sign,
            rhs: eq14_rhs,
            limit: None,
        },
        IdentityEntry {
            id: "eq18-middle-3",
            description: "eq18 with numerator 1 + 3q^(2k+1) + q^(4k+2)",
            reference: "",
            lhs: eq18_lhs_middle_three,
            rhs: eq18_rhs,
            limit: None,
        },
        IdentityEntry {
            id: "gauss-psi-numerator-squared",
            description: "gauss-psi with (1-q^(2n))^2 in the numerator",
            reference: "",
            lhs: gauss_psi_lhs,
            rhs: gauss_psi_rhs_squared_numerator,
            limit: None,
        },
        IdentityEntry {
            id: "ramanujan-unsigned",
            description: "ramanujan with q^k in place of (-q)^k",
            reference: "",
            lhs: ramanujan_lhs_unsigned,
            rhs: ramanujan_rhs,
            limit: None,
        },
        IdentityEntry {
            id: "hessami-pilehrood-sign",
            description: "hessami-pilehrood with (1 - 2q^n) in the numerator",
            reference: "",
            lhs: hessami_pilehrood_lhs_negated,
            rhs: hessami_pilehrood_rhs,
            limit: None,
        },
        IdentityEntry {
            id: "sigma-lambert-numerator-sign",
            description: "sigma-lambert with (1 - q^(2k+1)) in the numerator",
            reference: "",
            lhs: sigma_lambert_lhs_numerator_sign,
            rhs: sigma_lambert_rhs,
            limit: None,
        },
    ];

    pub fn mutants() -> &'static [IdentityEntry] {
        &MUTANTS
    }
}
