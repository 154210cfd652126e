//! Truncated formal power series in one variable `q` over arbitrary-precision
//! integers.
//!
//! A series of order `N` stores the coefficients of `q^0 .. q^(N-1)`; every
//! higher power is discarded. Binary operations on series of different orders
//! truncate to the smaller order, so a result is never claimed to more
//! coefficients than both inputs know.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Errors raised by series arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesError {
    /// Only series whose constant term is `+1` or `-1` can be inverted
    /// without leaving the integers.
    NonUnitConstantTerm(BigInt),
    /// A comparison asked for more coefficients than an operand carries.
    OrderTooSmall { requested: usize, available: usize },
    /// A product factor `(1 - q^(a n - b))^e` with `a = 0`, `b >= a` or `e = 0`.
    InvalidFactor { stride: u32, offset: u32, exponent: i32 },
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::NonUnitConstantTerm(c) => {
                write!(f, "constant term {c} is not a unit; series is not invertible over the integers")
            }
            SeriesError::OrderTooSmall { requested, available } => {
                write!(f, "comparison through order {requested} but an operand only has order {available}")
            }
            SeriesError::InvalidFactor { stride, offset, exponent } => write!(
                f,
                "invalid product factor (stride {stride}, offset {offset}, exponent {exponent}): need stride > offset >= 0 and exponent != 0"
            ),
        }
    }
}

impl core::error::Error for SeriesError {}

/// A power series `c_0 + c_1 q + ... + c_(N-1) q^(N-1) + O(q^N)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PowerSeries {
    coeffs: Vec<BigInt>,
}

impl PowerSeries {
    /// The zero series of the given order.
    ///
    /// # Panics
    ///
    /// Panics if `order == 0`.
    pub fn zero(order: usize) -> Self {
        assert!(order >= 1, "power series order must be at least 1");
        PowerSeries { coeffs: vec![BigInt::zero(); order] }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(1, 0, order)
    }

    /// `c q^e` truncated to `order`; vanishes entirely when `e >= order`.
    ///
    /// # Panics
    ///
    /// Panics if `order == 0`.
    pub fn monomial(c: impl Into<BigInt>, e: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if e < order {
            s.coeffs[e] = c.into();
        }
        s
    }

    /// Builds a series whose order is the number of coefficients given.
    ///
    /// # Panics
    ///
    /// Panics if `coeffs` is empty.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "power series order must be at least 1");
        PowerSeries { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Sums sparse `(exponent, coefficient)` pairs. Terms at or beyond
    /// `order` are dropped.
    pub fn from_terms<I, C>(terms: I, order: usize) -> Self
    where
        I: IntoIterator<Item = (usize, C)>,
        C: Into<BigInt>,
    {
        let mut s = Self::zero(order);
        for (e, c) in terms {
            if e < order {
                s.coeffs[e] += c.into();
            }
        }
        s
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    #[inline]
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `q^i`, or zero past the truncation point.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Index of the first nonzero coefficient; `None` when the series is zero
    /// to its order.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Drops coefficients at or beyond `order`. A larger `order` is a no-op.
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order >= 1, "power series order must be at least 1");
        let n = order.min(self.order());
        PowerSeries { coeffs: self.coeffs[..n].to_vec() }
    }

    /// Multiplies by `q^p`, keeping the order.
    pub fn shift(&self, p: usize) -> Self {
        let n = self.order();
        let mut out = Self::zero(n);
        if p < n {
            out.coeffs[p..].clone_from_slice(&self.coeffs[..n - p]);
        }
        out
    }

    /// Treats the stored coefficients as an exact polynomial and re-expresses
    /// it at `order`, zero-padding or truncating.
    pub fn as_polynomial(&self, order: usize) -> Self {
        assert!(order >= 1, "power series order must be at least 1");
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order, BigInt::zero());
        PowerSeries { coeffs }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    fn nonzero_terms(&self) -> Vec<(usize, &BigInt)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Truncated Cauchy product. The outer loop runs over the nonzero terms
    /// of the sparser operand, so multiplying by a sparse polynomial costs
    /// `O(order * nnz)`.
    pub fn mul_series(&self, rhs: &Self) -> Self {
        let n = self.order().min(rhs.order());
        let (sparse, dense) = {
            let a = self.nonzero_terms();
            let b = rhs.nonzero_terms();
            if a.len() <= b.len() {
                (a, rhs)
            } else {
                (b, self)
            }
        };
        let mut out = Self::zero(n);
        for (i, a) in sparse {
            if i >= n {
                break;
            }
            for (j, b) in dense.coeffs[..n - i].iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }

    /// Solves `self = quotient * divisor` for `quotient`, which exists because
    /// the divisor's constant term is a unit. Runs in `O(order * nnz(divisor))`.
    pub fn div_series(&self, divisor: &Self) -> Result<Self, SeriesError> {
        let lead = &divisor.coeffs[0];
        if lead.abs() != BigInt::one() {
            return Err(SeriesError::NonUnitConstantTerm(lead.clone()));
        }
        let negate = lead.is_negative();
        let n = self.order().min(divisor.order());
        let tail: Vec<(usize, &BigInt)> =
            divisor.nonzero_terms().into_iter().filter(|&(j, _)| j >= 1 && j < n).collect();
        let mut out = Self::zero(n);
        for i in 0..n {
            let mut acc = self.coeffs[i].clone();
            for &(j, d) in &tail {
                if j > i {
                    break;
                }
                let prev = &out.coeffs[i - j];
                if !prev.is_zero() {
                    acc -= d * prev;
                }
            }
            out.coeffs[i] = if negate { -acc } else { acc };
        }
        Ok(out)
    }

    /// Multiplicative inverse; requires a constant term of `+1` or `-1`.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        Self::one(self.order()).div_series(self)
    }

    /// `self^e` by binary exponentiation.
    pub fn pow(&self, mut e: u32) -> Self {
        let mut result = Self::one(self.order());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_series(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_series(&base);
            }
        }
        result
    }

    /// `self^e` for any integer `e`, inverting first when `e < 0`.
    pub fn powi(&self, e: i64) -> Result<Self, SeriesError> {
        let mag = u32::try_from(e.unsigned_abs()).expect("series exponent exceeds u32");
        if e < 0 {
            Ok(self.invert()?.pow(mag))
        } else {
            Ok(self.pow(mag))
        }
    }
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PowerSeries[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "; O(q^{})]", self.order())
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}q")?,
                (_, true) => write!(f, "q^{i}")?,
                (_, false) => write!(f, "{mag}q^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&PowerSeries> for &PowerSeries {
            type Output = PowerSeries;
            fn $method(self, rhs: &PowerSeries) -> PowerSeries {
                $body(self, rhs)
            }
        }
        impl $tr<PowerSeries> for PowerSeries {
            type Output = PowerSeries;
            fn $method(self, rhs: PowerSeries) -> PowerSeries {
                $body(&self, &rhs)
            }
        }
        impl $tr<&PowerSeries> for PowerSeries {
            type Output = PowerSeries;
            fn $method(self, rhs: &PowerSeries) -> PowerSeries {
                $body(&self, rhs)
            }
        }
    };
}

fn add_impl(a: &PowerSeries, b: &PowerSeries) -> PowerSeries {
    let n = a.order().min(b.order());
    PowerSeries { coeffs: a.coeffs[..n].iter().zip(&b.coeffs[..n]).map(|(x, y)| x + y).collect() }
}

fn sub_impl(a: &PowerSeries, b: &PowerSeries) -> PowerSeries {
    let n = a.order().min(b.order());
    PowerSeries { coeffs: a.coeffs[..n].iter().zip(&b.coeffs[..n]).map(|(x, y)| x - y).collect() }
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, PowerSeries::mul_series);

impl Neg for PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        PowerSeries { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        -self.clone()
    }
}

/// Coefficients of `(1 - q^m)^(-e)`: `C(j+e-1, e-1)` at `q^(m j)`, zero elsewhere.
///
/// # Panics
///
/// Panics if `m == 0`, `e == 0` or `order == 0`.
pub fn geometric_pow(m: usize, e: u32, order: usize) -> PowerSeries {
    assert!(m >= 1 && e >= 1, "geometric_pow needs m >= 1 and e >= 1");
    let mut s = PowerSeries::zero(order);
    let mut binom = BigInt::one();
    let e1 = u64::from(e) - 1;
    for (j, idx) in (0..order).step_by(m).enumerate() {
        if j > 0 {
            // C(j+e-1, e-1) = C(j-1+e-1, e-1) * (j+e-1) / j
            let j = j as u64;
            binom = binom * BigInt::from(j + e1) / BigInt::from(j);
        }
        s.coeffs[idx] = binom.clone();
    }
    s
}

/// One Lambert-type term `q^p * numer / (1 - q^m)^e` truncated to `order`.
///
/// `numer` is read as a polynomial: coefficients past its own order count as
/// zero rather than unknown.
///
/// The quotient is formed at order `order - p` and shifted into place, so
/// terms of high minimal degree are cheap.
pub fn lambert_term(p: usize, numer: &PowerSeries, m: usize, e: u32, order: usize) -> PowerSeries {
    if p >= order {
        return PowerSeries::zero(order);
    }
    let inner = order - p;
    let body = numer.as_polynomial(inner).mul_series(&geometric_pow(m, e, inner));
    body.shift_from(p, order)
}

impl PowerSeries {
    // Places a series of order `order - p` at offset `p` in a series of `order`.
    fn shift_from(self, p: usize, order: usize) -> PowerSeries {
        let mut out = PowerSeries::zero(order);
        for (i, c) in self.coeffs.into_iter().enumerate() {
            if i + p >= order {
                break;
            }
            out.coeffs[i + p] = c;
        }
        out
    }
}

/// One factor `prod_{n >= 1} (1 - q^(stride*n - offset))^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProductFactor {
    stride: u32,
    offset: u32,
    exponent: i32,
}

impl ProductFactor {
    pub fn new(stride: u32, offset: u32, exponent: i32) -> Result<Self, SeriesError> {
        if stride == 0 || offset >= stride || exponent == 0 {
            return Err(SeriesError::InvalidFactor { stride, offset, exponent });
        }
        Ok(ProductFactor { stride, offset, exponent })
    }

    pub fn stride(&self) -> u32 {
        self.stride
    }

    pub fn offset(&self) -> u32 {
        self.offset
    }

    pub fn exponent(&self) -> i32 {
        self.exponent
    }

    /// The q-exponent `stride*n - offset` of the `n`-th term (`n >= 1`).
    pub fn power_at(&self, n: u64) -> u64 {
        u64::from(self.stride) * n - u64::from(self.offset)
    }
}

/// A finite list of infinite product factors, e.g. `[(2,1,-4), (2,0,4)]` for
/// `prod (1-q^(2n))^4 / (1-q^(2n-1))^4`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ProductSpec {
    factors: Vec<ProductFactor>,
}

impl ProductSpec {
    pub fn new(factors: Vec<ProductFactor>) -> Self {
        ProductSpec { factors }
    }

    /// Convenience constructor from `(stride, offset, exponent)` triples.
    pub fn from_triples(triples: &[(u32, u32, i32)]) -> Result<Self, SeriesError> {
        triples
            .iter()
            .map(|&(a, b, e)| ProductFactor::new(a, b, e))
            .collect::<Result<Vec<_>, _>>()
            .map(ProductSpec::new)
    }

    pub fn factors(&self) -> &[ProductFactor] {
        &self.factors
    }

    /// Expands the product to `order`.
    ///
    /// Each elementary factor `(1 - q^m)^e` with `m < order` is applied in
    /// increasing `m`; factors with `m >= order` are `1 mod q^order` and are
    /// skipped. Negative exponents divide by the polynomial `(1 - q^m)^|e|`.
    pub fn expand(&self, order: usize) -> PowerSeries {
        let mut elementary: Vec<(usize, i32)> = Vec::new();
        for f in &self.factors {
            for n in 1u64.. {
                let m = f.power_at(n);
                if m >= order as u64 {
                    break;
                }
                elementary.push((m as usize, f.exponent));
            }
        }
        elementary.sort_by_key(|&(m, _)| m);

        let mut acc = PowerSeries::one(order);
        for (m, e) in elementary {
            let poly = binomial_poly(m, e.unsigned_abs(), order);
            acc = if e > 0 {
                acc.mul_series(&poly)
            } else {
                acc.div_series(&poly).expect("(1 - q^m)^e has constant term 1")
            };
        }
        acc
    }
}

/// Free-function form of [`ProductSpec::expand`].
pub fn expand_product(spec: &ProductSpec, order: usize) -> PowerSeries {
    spec.expand(order)
}

// (1 - q^m)^e as a truncated polynomial.
fn binomial_poly(m: usize, e: u32, order: usize) -> PowerSeries {
    let mut binom = BigInt::one();
    let mut terms = Vec::with_capacity(e as usize + 1);
    for j in 0..=e {
        if j > 0 {
            binom = binom * BigInt::from(e - j + 1) / BigInt::from(j);
        }
        let c = if j % 2 == 0 { binom.clone() } else { -binom.clone() };
        terms.push((m * j as usize, c));
    }
    PowerSeries::from_terms(terms, order)
}

/// Outcome of a coefficientwise comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Comparison {
    /// All coefficients of `q^0 .. q^(order-1)` agree.
    Equal { order: usize },
    /// First disagreeing coefficient.
    Mismatch { index: usize, lhs: BigInt, rhs: BigInt },
}

impl Comparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, Comparison::Equal { .. })
    }
}

/// Compares `a` and `b` through `q^(order-1)`.
pub fn equal_up_to(a: &PowerSeries, b: &PowerSeries, order: usize) -> Result<Comparison, SeriesError> {
    let available = a.order().min(b.order());
    if available < order {
        return Err(SeriesError::OrderTooSmall { requested: order, available });
    }
    let hit = a.coeffs[..order].iter().zip(&b.coeffs[..order]).position(|(x, y)| x != y);
    Ok(match hit {
        None => Comparison::Equal { order },
        Some(index) => Comparison::Mismatch {
            index,
            lhs: a.coeffs[index].clone(),
            rhs: b.coeffs[index].clone(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: &[i64]) -> PowerSeries {
        PowerSeries::from_i64s(c)
    }

    // Indicator of triangular numbers below `order`, built by stepping T_n.
    fn psi_sum(order: usize) -> PowerSeries {
        let mut t = 0usize;
        let mut step = 1usize;
        let mut out = PowerSeries::zero(order);
        while t < order {
            out.coeffs[t] = BigInt::one();
            t += step;
            step += 1;
        }
        out
    }

    #[test]
    fn monomial_examples() {
        assert_eq!(PowerSeries::monomial(1, 0, 4), s(&[1, 0, 0, 0]));
        assert_eq!(PowerSeries::monomial(-1, 2, 4), s(&[0, 0, -1, 0]));
        assert_eq!(PowerSeries::monomial(5, 7, 4), s(&[0, 0, 0, 0]));
    }

    #[test]
    fn add_sub_examples() {
        assert_eq!(s(&[1, 1]) + s(&[0, 2]), s(&[1, 3]));
        assert_eq!(s(&[1, 2, 3]) + s(&[0, 0]), s(&[1, 2]));
        let a = s(&[3, -1, 4, 1]);
        assert_eq!(&a + &PowerSeries::zero(4), a);
        assert_eq!(&a - &a, PowerSeries::zero(4));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(s(&[1, 1, 0]) * s(&[1, 1, 0]), s(&[1, 2, 1]));
        assert_eq!(psi_sum(5) * psi_sum(5), s(&[1, 2, 1, 2, 2]));
        let a = s(&[2, 0, -7, 5]);
        assert_eq!(&a * &PowerSeries::one(4), a);
    }

    #[test]
    fn invert_examples() {
        assert_eq!(s(&[1, -1, 0, 0]).invert().unwrap(), s(&[1, 1, 1, 1]));
        assert_eq!(s(&[1, 1, 0, 0, 0]).invert().unwrap(), s(&[1, -1, 1, -1, 1]));
        assert_eq!(
            s(&[2, 0]).invert(),
            Err(SeriesError::NonUnitConstantTerm(BigInt::from(2)))
        );
        // -1 is a unit too
        assert_eq!(s(&[-1, 1, 0]).invert().unwrap(), s(&[-1, -1, -1]));
    }

    #[test]
    fn division_undoes_multiplication() {
        let a = s(&[3, -1, 4, 1, -5, 9, 2, -6]);
        let b = s(&[-1, 0, 2, 0, 0, -3, 0, 1]);
        let quot = a.div_series(&b).unwrap();
        assert_eq!(&quot * &b, a);
        assert_eq!(quot, &a * &b.invert().unwrap());
    }

    #[test]
    fn geometric_pow_examples() {
        assert_eq!(geometric_pow(1, 2, 5), s(&[1, 2, 3, 4, 5]));
        assert_eq!(geometric_pow(3, 1, 7), s(&[1, 0, 0, 1, 0, 0, 1]));
        assert_eq!(geometric_pow(1, 4, 5), s(&[1, 4, 10, 20, 35]));
    }

    #[test]
    fn lambert_term_examples() {
        assert_eq!(lambert_term(0, &s(&[1, 1]), 1, 2, 5), s(&[1, 3, 5, 7, 9]));
        let numer = PowerSeries::from_terms([(0usize, 1), (3, 1)], 5);
        assert_eq!(lambert_term(1, &numer, 3, 2, 5), s(&[0, 1, 0, 0, 3]));
        assert_eq!(lambert_term(3, &PowerSeries::one(3), 7, 2, 3), s(&[0, 0, 0]));
    }

    #[test]
    fn expand_product_examples() {
        let gauss = ProductSpec::from_triples(&[(2, 1, -1), (2, 0, 1)]).unwrap();
        assert_eq!(gauss.expand(7), s(&[1, 1, 0, 1, 0, 0, 1]));
        let psi4 = ProductSpec::from_triples(&[(2, 1, -4), (2, 0, 4)]).unwrap();
        assert_eq!(expand_product(&psi4, 5), s(&[1, 4, 6, 8, 13]));
        assert_eq!(ProductSpec::default().expand(3), s(&[1, 0, 0]));
    }

    #[test]
    fn invalid_factors_rejected() {
        assert!(ProductFactor::new(0, 0, 1).is_err());
        assert!(ProductFactor::new(2, 2, 1).is_err());
        assert!(ProductFactor::new(2, 1, 0).is_err());
    }

    #[test]
    fn equal_up_to_examples() {
        let gauss = ProductSpec::from_triples(&[(2, 1, -1), (2, 0, 1)]).unwrap();
        assert_eq!(equal_up_to(&psi_sum(7), &gauss.expand(7), 7), Ok(Comparison::Equal { order: 7 }));
        assert_eq!(
            equal_up_to(&s(&[1, 2, 3]), &s(&[1, 2, 4]), 3),
            Ok(Comparison::Mismatch { index: 2, lhs: BigInt::from(3), rhs: BigInt::from(4) })
        );
        assert_eq!(
            equal_up_to(&s(&[1]), &s(&[1, 5]), 2),
            Err(SeriesError::OrderTooSmall { requested: 2, available: 1 })
        );
    }

    #[test]
    fn gauss_product_matches_theta_sum_to_2000() {
        let gauss = ProductSpec::from_triples(&[(2, 1, -1), (2, 0, 1)]).unwrap();
        let order = 2000;
        let prod = gauss.expand(order);
        assert_eq!(equal_up_to(&psi_sum(order), &prod, order), Ok(Comparison::Equal { order }));
        // and every smaller order is a truncation of it
        for n in [1usize, 2, 17, 333, 1999] {
            assert_eq!(gauss.expand(n), prod.truncate(n));
        }
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(s(&[1, -2, 0, 1]).to_string(), "1 - 2q + q^3 + O(q^4)");
        assert_eq!(s(&[0, 0]).to_string(), "0 + O(q^2)");
    }

    #[test]
    fn pow_and_powi() {
        let a = s(&[1, 1, 0, 0, 0]);
        assert_eq!(a.pow(3), s(&[1, 3, 3, 1, 0]));
        assert_eq!(a.powi(-2).unwrap(), s(&[1, -2, 3, -4, 5]));
        assert_eq!(a.pow(0), PowerSeries::one(5));
    }
}
