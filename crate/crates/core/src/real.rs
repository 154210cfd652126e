//! Binary fixed-point reals over big integers.
//!
//! A value is `mantissa / 2^frac_bits`. The fractional width is derived from a
//! requested number of decimal digits plus [`GUARD_DIGITS`], so each basic
//! operation is exact to within one unit in the last (guard) place and the
//! requested digits survive long sums and products. Precision is absolute,
//! which suits the magnitudes met here (values between roughly `1e-3` and
//! `1e15`).

use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Extra decimal digits carried beyond the requested precision.
pub const GUARD_DIGITS: u32 = 20;

/// Requested decimal precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub const DEFAULT: Precision = Precision { digits: 50 };

    pub fn new(digits: u32) -> Self {
        Precision { digits: digits.max(1) }
    }

    pub fn digits(self) -> u32 {
        self.digits
    }

    /// Fractional bits: `ceil((digits + guard) * log2(10))`.
    pub fn frac_bits(self) -> u32 {
        // log2(10) < 3.32193
        ((self.digits + GUARD_DIGITS) as u64 * 332_193).div_ceil(100_000) as u32
    }

    /// `10^-(digits - k)`, a relative tolerance `k` digits looser than the precision.
    pub fn tolerance(self, looser_by: u32) -> HighPrecisionReal {
        let exp = self.digits.saturating_sub(looser_by);
        HighPrecisionReal::from_ratio(1, BigInt::from(10u32).pow(exp), self)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::DEFAULT
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseRealError {
    Empty,
    Invalid(String),
    ZeroDenominator,
}

impl fmt::Display for ParseRealError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseRealError::Empty => write!(f, "empty number"),
            ParseRealError::Invalid(s) => write!(f, "cannot parse `{s}` as a decimal or fraction"),
            ParseRealError::ZeroDenominator => write!(f, "zero denominator"),
        }
    }
}

impl core::error::Error for ParseRealError {}

/// A real number held to a fixed number of binary fractional digits.
#[derive(Debug, Clone)]
pub struct HighPrecisionReal {
    mant: BigInt,
    prec: Precision,
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits as usize
}

// Rounded `n / d` for d > 0.
fn div_round(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_mod_floor(d);
    if (r << 1usize) >= *d {
        q + 1
    } else {
        q
    }
}

// Rounded `n / 2^k`.
fn shr_round(n: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        return n.clone();
    }
    (n + (BigInt::one() << (k as usize - 1))) >> k as usize
}

impl HighPrecisionReal {
    fn raw(mant: BigInt, prec: Precision) -> Self {
        HighPrecisionReal { mant, prec }
    }

    pub fn zero(prec: Precision) -> Self {
        Self::raw(BigInt::zero(), prec)
    }

    pub fn one(prec: Precision) -> Self {
        Self::from_int(1, prec)
    }

    pub fn from_int(n: impl Into<BigInt>, prec: Precision) -> Self {
        Self::raw(n.into() << prec.frac_bits() as usize, prec)
    }

    /// `num / den`, rounded to nearest.
    ///
    /// # Panics
    ///
    /// Panics if `den` is zero.
    pub fn from_ratio(num: impl Into<BigInt>, den: impl Into<BigInt>, prec: Precision) -> Self {
        let (num, den) = (num.into(), den.into());
        assert!(!den.is_zero(), "division by zero");
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num, den) };
        Self::raw(div_round(&(num << prec.frac_bits() as usize), &den), prec)
    }

    pub fn from_rational(r: &BigRational, prec: Precision) -> Self {
        Self::from_ratio(r.numer().clone(), r.denom().clone(), prec)
    }

    /// Parses `123`, `-0.75`, `1e-3`, `2.5E+2` or a fraction `22/7`.
    pub fn parse(s: &str, prec: Precision) -> Result<Self, ParseRealError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseRealError::Empty);
        }
        let invalid = || ParseRealError::Invalid(s.to_string());
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| invalid())?;
            let d: BigInt = d.trim().parse().map_err(|_| invalid())?;
            if d.is_zero() {
                return Err(ParseRealError::ZeroDenominator);
            }
            return Ok(Self::from_ratio(n, d, prec));
        }
        let (mantissa, exp10) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| invalid())?),
            None => (s, 0),
        };
        let (neg, body) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(invalid());
        }
        if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(invalid());
        }
        let mut digits = String::with_capacity(int_part.len() + frac_part.len());
        digits.push_str(int_part);
        digits.push_str(frac_part);
        let mut num: BigInt = digits.parse().map_err(|_| invalid())?;
        if neg {
            num = -num;
        }
        let scale = exp10 - frac_part.len() as i32;
        let ten = BigInt::from(10u32);
        Ok(if scale >= 0 {
            Self::from_int(num * ten.pow(scale as u32), prec)
        } else {
            Self::from_ratio(num, ten.pow(scale.unsigned_abs()), prec)
        })
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    fn bits(&self) -> u32 {
        self.prec.frac_bits()
    }

    /// Same value carried at another precision.
    pub fn with_precision(&self, prec: Precision) -> Self {
        let (from, to) = (self.bits(), prec.frac_bits());
        let mant = match from.cmp(&to) {
            Ordering::Equal => self.mant.clone(),
            Ordering::Less => &self.mant << (to - from) as usize,
            Ordering::Greater => shr_round(&self.mant, from - to),
        };
        Self::raw(mant, prec)
    }

    // Brings two operands to the finer of their precisions.
    fn aligned<'a>(
        a: &'a Self,
        b: &'a Self,
    ) -> (alloc::borrow::Cow<'a, BigInt>, alloc::borrow::Cow<'a, BigInt>, Precision) {
        use alloc::borrow::Cow;
        match a.bits().cmp(&b.bits()) {
            Ordering::Equal => (Cow::Borrowed(&a.mant), Cow::Borrowed(&b.mant), a.prec),
            Ordering::Less => (Cow::Owned(a.with_precision(b.prec).mant), Cow::Borrowed(&b.mant), b.prec),
            Ordering::Greater => (Cow::Borrowed(&a.mant), Cow::Owned(b.with_precision(a.prec).mant), a.prec),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn abs(&self) -> Self {
        Self::raw(self.mant.abs(), self.prec)
    }

    pub fn mul_int(&self, k: impl Into<BigInt>) -> Self {
        Self::raw(&self.mant * k.into(), self.prec)
    }

    /// # Panics
    ///
    /// Panics if `k` is zero.
    pub fn div_int(&self, k: impl Into<BigInt>) -> Self {
        let k = k.into();
        assert!(!k.is_zero(), "division by zero");
        let (n, d) = if k.is_negative() { (-&self.mant, -k) } else { (self.mant.clone(), k) };
        Self::raw(div_round(&n, &d), self.prec)
    }

    pub fn recip(&self) -> Self {
        Self::one(self.prec) / self
    }

    pub fn powi(&self, e: u32) -> Self {
        let mut result = Self::one(self.prec);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Square root, rounded down.
    ///
    /// # Panics
    ///
    /// Panics on negative input.
    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "square root of a negative number");
        Self::raw((&self.mant << self.bits() as usize).sqrt(), self.prec)
    }

    /// `pi` by Machin's formula `16 atan(1/5) - 4 atan(1/239)`.
    pub fn pi(prec: Precision) -> Self {
        let work = prec.frac_bits() + 16;
        let pi = atan_inv(5, work) * 16 - atan_inv(239, work) * 4;
        Self::raw(shr_round(&pi, 16), prec)
    }

    pub fn ln2(prec: Precision) -> Self {
        let work = prec.frac_bits() + 16;
        Self::raw(shr_round(&ln2_fixed(work), 16), prec)
    }

    /// `e^self`.
    pub fn exp(&self) -> Self {
        let bits = self.bits();
        // halve the argument k times until |x| < 2^-8, then square k times
        let int_bits = self.mant.bits().saturating_sub(u64::from(bits)) as u32;
        let k = int_bits + 8;
        let work = bits + k + 16;
        let x = &self.mant << (work - bits) as usize;
        let r = x >> k as usize;
        let one = pow2(work);
        let mut sum = one.clone();
        let mut term = one;
        for i in 1u32.. {
            term = (&term * &r) >> work as usize;
            term /= BigInt::from(i);
            if term.is_zero() {
                break;
            }
            sum += &term;
        }
        for _ in 0..k {
            sum = (&sum * &sum) >> work as usize;
        }
        Self::raw(shr_round(&sum, work - bits), self.prec)
    }

    /// Natural logarithm.
    ///
    /// # Panics
    ///
    /// Panics unless `self > 0`.
    pub fn ln(&self) -> Self {
        assert!(self.is_positive(), "logarithm of a non-positive number");
        let bits = self.bits();
        let work = bits + 32;
        let x = &self.mant << (work - bits) as usize;
        // x = m * 2^e with m in [1, 2)
        let e = x.bits() as i64 - 1 - i64::from(work);
        let m = if e >= 0 { &x >> e as usize } else { &x << (-e) as usize };
        let one = pow2(work);
        let z = ((&m - &one) << work as usize) / (&m + &one);
        let ln_m = atanh_fixed(&z, work) << 1usize;
        let total = ln_m + ln2_fixed(work) * BigInt::from(e);
        Self::raw(shr_round(&total, work - bits), self.prec)
    }

    /// `self^x = e^(x ln self)` for `self > 0`.
    pub fn powf(&self, x: &Self) -> Self {
        (x * &self.ln()).exp()
    }

    /// Approximate `f64` value, for display and coarse checks.
    pub fn to_f64(&self) -> f64 {
        let bits = self.bits() as usize;
        // keep 64 significant bits before converting
        let shift = self.mant.bits().saturating_sub(64) as usize;
        let top = (&self.mant >> shift).to_f64().unwrap_or(f64::NAN);
        let mut scale = 1.0f64;
        let mut e = bits as i64 - shift as i64;
        while e > 0 {
            let step = e.min(60);
            scale /= (1u64 << step) as f64;
            e -= step;
        }
        while e < 0 {
            let step = (-e).min(60);
            scale *= (1u64 << step) as f64;
            e += step;
        }
        top * scale
    }

    /// Decimal rendering with `sig` significant digits; scientific notation
    /// outside `1e-5 ..= 1e21`.
    pub fn to_string_sig(&self, sig: u32) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let sig = sig.max(1);
        let ten = BigInt::from(10u32);
        let bits = self.bits();
        let mag = self.mant.abs();
        // rough decimal exponent from floor(|x| * 10^D)
        let d = self.prec.digits() + GUARD_DIGITS;
        let floor_scaled = (&mag * ten.pow(d)) >> bits as usize;
        if floor_scaled.is_zero() {
            return "0".to_string();
        }
        let mut e10 = floor_scaled.to_string().len() as i64 - 1 - i64::from(d);
        let digits_for = |e10: i64| -> BigInt {
            let p = i64::from(sig) - 1 - e10;
            if p >= 0 {
                div_round(&(&mag * ten.pow(p as u32)), &pow2(bits))
            } else {
                div_round(&mag, &(pow2(bits) * ten.pow((-p) as u32)))
            }
        };
        let mut t = digits_for(e10);
        if t.to_string().len() as u32 > sig {
            e10 += 1;
            t = digits_for(e10);
        }
        let ds = t.to_string();
        let mut out = String::new();
        if self.is_negative() {
            out.push('-');
        }
        if (-5..=21).contains(&e10) {
            if e10 >= 0 {
                let int_len = (e10 + 1) as usize;
                if ds.len() <= int_len {
                    out.push_str(&ds);
                    out.extend(core::iter::repeat_n('0', int_len - ds.len()));
                } else {
                    out.push_str(&ds[..int_len]);
                    out.push('.');
                    out.push_str(&ds[int_len..]);
                }
            } else {
                out.push_str("0.");
                out.extend(core::iter::repeat_n('0', (-e10 - 1) as usize));
                out.push_str(&ds);
            }
        } else {
            out.push_str(&ds[..1]);
            if ds.len() > 1 {
                out.push('.');
                out.push_str(&ds[1..]);
            }
            out.push('e');
            out.push_str(&e10.to_string());
        }
        out
    }
}

// atan(1/m) at `work` fractional bits.
fn atan_inv(m: u32, work: u32) -> BigInt {
    let m = BigInt::from(m);
    let m2 = &m * &m;
    let mut power = pow2(work) / &m; // 1/m^(2i+1)
    let mut sum = BigInt::zero();
    let mut i = 0u32;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * i + 1);
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &m2;
        i += 1;
    }
    sum
}

// atanh(z) for |z| <= 1/3, z at `work` fractional bits.
fn atanh_fixed(z: &BigInt, work: u32) -> BigInt {
    let z2 = (z * z) >> work as usize;
    let mut power = z.clone();
    let mut sum = BigInt::zero();
    let mut i = 0u32;
    while !power.is_zero() {
        sum += &power / BigInt::from(2 * i + 1);
        power = (&power * &z2) >> work as usize;
        i += 1;
    }
    sum
}

// ln 2 = 2 atanh(1/3).
fn ln2_fixed(work: u32) -> BigInt {
    atanh_fixed(&(pow2(work) / BigInt::from(3)), work) << 1usize
}

impl PartialEq for HighPrecisionReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HighPrecisionReal {}

impl PartialOrd for HighPrecisionReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HighPrecisionReal {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = Self::aligned(self, other);
        a.cmp(&b)
    }
}

impl fmt::Display for HighPrecisionReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f.precision().map(|p| p as u32).unwrap_or(self.prec.digits());
        f.write_str(&self.to_string_sig(sig))
    }
}

fn add_impl(a: &HighPrecisionReal, b: &HighPrecisionReal) -> HighPrecisionReal {
    let (x, y, prec) = HighPrecisionReal::aligned(a, b);
    HighPrecisionReal::raw(x.as_ref() + y.as_ref(), prec)
}

fn sub_impl(a: &HighPrecisionReal, b: &HighPrecisionReal) -> HighPrecisionReal {
    let (x, y, prec) = HighPrecisionReal::aligned(a, b);
    HighPrecisionReal::raw(x.as_ref() - y.as_ref(), prec)
}

fn mul_impl(a: &HighPrecisionReal, b: &HighPrecisionReal) -> HighPrecisionReal {
    let (x, y, prec) = HighPrecisionReal::aligned(a, b);
    HighPrecisionReal::raw(shr_round(&(x.as_ref() * y.as_ref()), prec.frac_bits()), prec)
}

fn div_impl(a: &HighPrecisionReal, b: &HighPrecisionReal) -> HighPrecisionReal {
    let (x, y, prec) = HighPrecisionReal::aligned(a, b);
    assert!(!y.is_zero(), "division by zero");
    let n = x.as_ref() << prec.frac_bits() as usize;
    let (n, d) = if y.sign() == Sign::Minus { (-n, -y.into_owned()) } else { (n, y.into_owned()) };
    HighPrecisionReal::raw(div_round(&n, &d), prec)
}

macro_rules! real_binop {
    ($tr:ident, $method:ident, $f:ident) => {
        impl $tr<&HighPrecisionReal> for &HighPrecisionReal {
            type Output = HighPrecisionReal;
            fn $method(self, rhs: &HighPrecisionReal) -> HighPrecisionReal {
                $f(self, rhs)
            }
        }
        impl $tr<HighPrecisionReal> for HighPrecisionReal {
            type Output = HighPrecisionReal;
            fn $method(self, rhs: HighPrecisionReal) -> HighPrecisionReal {
                $f(&self, &rhs)
            }
        }
        impl $tr<&HighPrecisionReal> for HighPrecisionReal {
            type Output = HighPrecisionReal;
            fn $method(self, rhs: &HighPrecisionReal) -> HighPrecisionReal {
                $f(&self, rhs)
            }
        }
        impl $tr<HighPrecisionReal> for &HighPrecisionReal {
            type Output = HighPrecisionReal;
            fn $method(self, rhs: HighPrecisionReal) -> HighPrecisionReal {
                $f(self, &rhs)
            }
        }
    };
}

real_binop!(Add, add, add_impl);
real_binop!(Sub, sub, sub_impl);
real_binop!(Mul, mul, mul_impl);
real_binop!(Div, div, div_impl);

impl Neg for HighPrecisionReal {
    type Output = HighPrecisionReal;
    fn neg(self) -> HighPrecisionReal {
        HighPrecisionReal::raw(-self.mant, self.prec)
    }
}

impl Neg for &HighPrecisionReal {
    type Output = HighPrecisionReal;
    fn neg(self) -> HighPrecisionReal {
        HighPrecisionReal::raw(-&self.mant, self.prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI_60: &str = "3.14159265358979323846264338327950288419716939937510582097494";
    const E_50: &str = "2.7182818284590452353602874713526624977572470937000";
    const LN2_50: &str = "0.69314718055994530941723212145817656807550013436026";
    const SQRT2_50: &str = "1.4142135623730950488016887242096980785696718753769";

    fn p() -> Precision {
        Precision::DEFAULT
    }

    fn close(a: &HighPrecisionReal, b: &HighPrecisionReal, digits: u32) -> bool {
        (a - b).abs() < Precision::new(digits).tolerance(0)
    }

    #[test]
    fn constants_to_fifty_digits() {
        let prec = Precision::new(60);
        assert_eq!(HighPrecisionReal::pi(prec).to_string_sig(60), PI_60);
        assert_eq!(HighPrecisionReal::ln2(p()).to_string_sig(50), LN2_50);
        assert_eq!(HighPrecisionReal::one(p()).exp().to_string_sig(50), E_50);
        assert_eq!(HighPrecisionReal::from_int(2, p()).sqrt().to_string_sig(50), SQRT2_50);
    }

    #[test]
    fn exp_ln_round_trip() {
        for s in ["0.5", "1e-3", "7.25", "123.456", "0.999", "-3.5"] {
            let x = HighPrecisionReal::parse(s, p()).unwrap();
            assert!(close(&x.exp().ln(), &x, 45), "{s}");
        }
        for s in ["0.5", "1e-3", "7.25", "123456.789"] {
            let x = HighPrecisionReal::parse(s, p()).unwrap();
            assert!(close(&x.ln().exp(), &x, 40), "{s}");
        }
    }

    #[test]
    fn powf_matches_integer_power() {
        let x = HighPrecisionReal::parse("0.9", p()).unwrap();
        let three = HighPrecisionReal::from_int(3, p());
        assert!(close(&x.powf(&three), &x.powi(3), 45));
        let half = HighPrecisionReal::from_ratio(1, 2, p());
        assert!(close(&x.powf(&half), &x.sqrt(), 45));
    }

    #[test]
    fn parsing() {
        let prec = p();
        let q = |s| HighPrecisionReal::parse(s, prec).unwrap();
        assert_eq!(q("0.75"), HighPrecisionReal::from_ratio(3, 4, prec));
        assert_eq!(q("-2.5e1"), HighPrecisionReal::from_int(-25, prec));
        assert_eq!(q("22/7"), HighPrecisionReal::from_ratio(22, 7, prec));
        assert_eq!(q(".5"), HighPrecisionReal::from_ratio(1, 2, prec));
        assert!(HighPrecisionReal::parse("", prec).is_err());
        assert!(HighPrecisionReal::parse("1.2.3", prec).is_err());
        assert!(HighPrecisionReal::parse("1/0", prec).is_err());
        assert!(HighPrecisionReal::parse("abc", prec).is_err());
    }

    #[test]
    fn formatting() {
        let prec = p();
        assert_eq!(HighPrecisionReal::from_ratio(1, 8, prec).to_string_sig(5), "0.12500");
        assert_eq!(HighPrecisionReal::from_ratio(-1, 3, prec).to_string_sig(4), "-0.3333");
        assert_eq!(HighPrecisionReal::from_int(12345, prec).to_string_sig(3), "12300");
        assert_eq!(HighPrecisionReal::from_ratio(1, 1_000_000_000, prec).to_string_sig(3), "1.00e-9");
        assert_eq!(HighPrecisionReal::from_ratio(999_999, 1_000_000, prec).to_string_sig(3), "1.00");
        assert_eq!(format!("{:.4}", HighPrecisionReal::pi(prec)), "3.142");
    }

    #[test]
    fn arithmetic_and_ordering() {
        let prec = p();
        let a = HighPrecisionReal::from_ratio(1, 3, prec);
        let b = HighPrecisionReal::from_ratio(2, 3, prec);
        assert!(close(&(&a + &b), &HighPrecisionReal::one(prec), 50));
        assert!(close(&(&b / &a), &HighPrecisionReal::from_int(2, prec), 50));
        assert!(a < b);
        assert!((-&a).is_negative());
        assert!((a.to_f64() - 1.0 / 3.0).abs() < 1e-15);
        // mixed precision aligns to the finer one
        let coarse = HighPrecisionReal::from_ratio(1, 3, Precision::new(10));
        assert_eq!((&coarse + &a).precision(), prec);
    }
}
