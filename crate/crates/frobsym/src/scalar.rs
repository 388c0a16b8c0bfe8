//! Scalar arithmetic for the complex base field.
//!
//! Two concrete scalar types implement the [`Scalar`] trait:
//!
//! - [`GaussianRational`]: exact complex numbers with rational real and
//!   imaginary parts. Field operations are closed and exact, equality is
//!   decidable. This is the default scalar everywhere.
//! - [`BigComplex`]: complex floating point with a configurable mantissa
//!   precision (default 128 bits). Used for numeric root finding and for
//!   verifying reconstructions whose evaluation points are irrational.
//!
//! Exact scalars compare with `==`; float scalars carry their precision and
//! are always compared through an explicit tolerance, never implicit
//! equality.

use std::cell::Cell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, RoundingMode, Sign};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ScalarError;

/// Default mantissa precision, in bits, for [`BigComplex`] values.
pub const DEFAULT_FLOAT_PRECISION: u32 = 128;

thread_local! {
    static FLOAT_PRECISION: Cell<u32> = const { Cell::new(DEFAULT_FLOAT_PRECISION) };
}

/// Sets the mantissa precision used for newly created [`BigComplex`] values
/// on the current thread. Existing values keep the precision they carry.
pub fn set_float_precision(bits: u32) {
    FLOAT_PRECISION.with(|p| p.set(bits.max(1)));
}

/// Returns the current thread's default float precision in bits.
pub fn float_precision() -> u32 {
    FLOAT_PRECISION.with(|p| p.get())
}

/// A complex scalar the library can compute over.
///
/// The combinatorial and algebraic core is generic over this trait; the
/// concrete instantiations are [`GaussianRational`] (exact) and
/// [`BigComplex`] (floating point). `EXACT` distinguishes the two regimes:
/// exact scalars admit structural equality, float scalars require
/// tolerance-based comparison via [`Scalar::magnitude`].
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + serde::Serialize
    + serde::de::DeserializeOwned
    + 'static
{
    /// True when arithmetic is exact and equality is decidable.
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;

    fn from_bigint(n: &BigInt) -> Self;

    /// The rational `num/den`. Panics if `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Multiplicative inverse, or `None` for zero.
    fn invert(&self) -> Option<Self>;

    /// An `f64` estimate of `|self|`, used for tolerance scaling and
    /// clustering. Exact values may lose precision here; that is fine, the
    /// estimate never feeds back into exact arithmetic.
    fn magnitude(&self) -> f64;

    /// A deterministic total order (lexicographic on real then imaginary
    /// part), used only for canonical sorting of outputs.
    fn total_cmp(&self, other: &Self) -> Ordering;

    /// Recognizes an integer value. Exact mode ignores `tol` and demands
    /// denominator one and zero imaginary part; float mode accepts values
    /// within `tol` of an integer.
    fn to_integer(&self, tol: f64) -> Option<BigInt>;
}

// ---------------------------------------------------------------------------
// GaussianRational
// ---------------------------------------------------------------------------

/// An exact complex number `re + im*i` with arbitrary-precision rational
/// parts.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    /// Purely real rational value.
    pub fn from_rational(re: BigRational) -> Self {
        GaussianRational {
            re,
            im: BigRational::zero(),
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn re_f64(&self) -> f64 {
        rational_to_f64(&self.re)
    }

    pub fn im_f64(&self) -> f64 {
        rational_to_f64(&self.im)
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `re^2 + im^2`, the field norm down to the rationals.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Parses the `"p/q"` decimal-free encoding used in JSON documents;
    /// plain integers like `"-3"` are accepted as well.
    pub fn parse_rational(s: &str) -> Result<BigRational, ScalarError> {
        s.trim()
            .parse::<BigRational>()
            .map_err(|e| ScalarError::BadRational {
                text: s.to_string(),
                reason: e.to_string(),
            })
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}i", self.im);
        }
        if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        GaussianRational {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        GaussianRational {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        GaussianRational { re, im }
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Div for GaussianRational {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        rhs.invert()
            .map(|inv| self * inv)
            .expect("division by zero GaussianRational")
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        GaussianRational {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }
}

impl Scalar for GaussianRational {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        GaussianRational::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    fn from_bigint(n: &BigInt) -> Self {
        GaussianRational::from_rational(BigRational::from_integer(n.clone()))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        GaussianRational::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn invert(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(GaussianRational {
            re: &self.re / &n,
            im: -&self.im / &n,
        })
    }

    fn magnitude(&self) -> f64 {
        self.norm().to_f64().unwrap_or(f64::INFINITY).sqrt()
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }

    fn to_integer(&self, _tol: f64) -> Option<BigInt> {
        if !self.im.is_zero() || !self.re.is_integer() {
            return None;
        }
        Some(self.re.to_integer())
    }
}

#[derive(Serialize, Deserialize)]
struct ExactRepr {
    re: String,
    im: String,
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ExactRepr {
            re: self.re.to_string(),
            im: self.im.to_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = ExactRepr::deserialize(deserializer)?;
        let re = GaussianRational::parse_rational(&repr.re).map_err(D::Error::custom)?;
        let im = GaussianRational::parse_rational(&repr.im).map_err(D::Error::custom)?;
        Ok(GaussianRational::new(re, im))
    }
}

// ---------------------------------------------------------------------------
// BigComplex
// ---------------------------------------------------------------------------

/// A complex floating-point number at a carried mantissa precision.
///
/// Binary operations compute at the larger of the two operand precisions.
/// New values pick up the thread default set via [`set_float_precision`].
#[derive(Clone)]
pub struct BigComplex {
    re: BigFloat,
    im: BigFloat,
    prec: u32,
}

const RM: RoundingMode = RoundingMode::ToEven;

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Recovers the exact rational value of a finite `BigFloat`
/// (mantissa times a power of two). `None` for NaN/Inf.
pub(crate) fn bigfloat_to_rational(x: &BigFloat) -> Option<BigRational> {
    if x.is_zero() {
        return Some(BigRational::zero());
    }
    if x.is_nan() || x.is_inf() {
        return None;
    }
    let (words, _, sign, exp, _) = x.as_raw_parts()?;
    let mut mantissa = BigInt::zero();
    for w in words.iter().rev() {
        mantissa = (mantissa << astro_float::WORD_BIT_SIZE) + BigInt::from(*w);
    }
    if sign == Sign::Neg {
        mantissa = -mantissa;
    }
    // value = fraction(mantissa) * 2^exp with the fraction in [1/2, 1)
    let bits = (words.len() * astro_float::WORD_BIT_SIZE) as i64;
    let shift = exp as i64 - bits;
    Some(if shift >= 0 {
        BigRational::from_integer(mantissa << shift)
    } else {
        BigRational::new(mantissa, BigInt::one() << (-shift))
    })
}

fn bigfloat_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let Some((words, _, sign, exp, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    // Value is fraction(mantissa) * 2^exp with the fraction in [1/2, 1);
    // the top word alone is plenty for an f64 estimate.
    let top = *words.last().unwrap_or(&0);
    let frac = top as f64 / 2f64.powi(astro_float::WORD_BIT_SIZE as i32);
    let mag = frac * 2f64.powi(exp);
    if sign == Sign::Neg {
        -mag
    } else {
        mag
    }
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        let prec = re
            .precision()
            .unwrap_or(0)
            .max(im.precision().unwrap_or(0))
            .max(1) as u32;
        BigComplex { re, im, prec }
    }

    /// Builds from `f64` parts at the thread's current default precision.
    pub fn from_f64_parts(re: f64, im: f64) -> Self {
        Self::from_f64_parts_prec(re, im, float_precision())
    }

    pub fn from_f64_parts_prec(re: f64, im: f64, prec: u32) -> Self {
        BigComplex {
            re: BigFloat::from_f64(re, prec as usize),
            im: BigFloat::from_f64(im, prec as usize),
            prec,
        }
    }

    /// Rounds an exact scalar into float representation at `prec` bits.
    pub fn from_exact(value: &GaussianRational, prec: u32) -> Self {
        BigComplex {
            re: rational_to_bigfloat(value.re(), prec),
            im: rational_to_bigfloat(value.im(), prec),
            prec,
        }
    }

    pub fn re(&self) -> &BigFloat {
        &self.re
    }

    pub fn im(&self) -> &BigFloat {
        &self.im
    }

    pub fn precision_bits(&self) -> u32 {
        self.prec
    }

    pub fn re_f64(&self) -> f64 {
        bigfloat_to_f64(&self.re)
    }

    pub fn im_f64(&self) -> f64 {
        bigfloat_to_f64(&self.im)
    }

    pub fn conj(&self) -> Self {
        BigComplex {
            re: self.re.clone(),
            im: self.im.clone().neg(),
            prec: self.prec,
        }
    }

    fn join(&self, rhs: &Self) -> usize {
        self.prec.max(rhs.prec) as usize
    }

    /// `re^2 + im^2` at the carried precision.
    pub fn norm(&self) -> BigFloat {
        let p = self.prec as usize;
        self.re
            .mul(&self.re, p, RM)
            .add(&self.im.mul(&self.im, p, RM), p, RM)
    }
}

fn rational_to_bigfloat(r: &BigRational, prec: u32) -> BigFloat {
    let p = prec as usize;
    let num = bigint_to_bigfloat(r.numer(), p);
    let den = bigint_to_bigfloat(r.denom(), p);
    num.div(&den, p, RM)
}

fn bigint_to_bigfloat(n: &BigInt, p: usize) -> BigFloat {
    // Feed the magnitude in 32-bit limbs: f = f * 2^32 + limb.
    let (sign, mag) = (n.sign(), n.magnitude());
    let base = BigFloat::from_u64(1u64 << 32, p);
    let mut acc = BigFloat::from_f64(0.0, p);
    for limb in mag.iter_u32_digits().rev() {
        acc = acc
            .mul(&base, p, RM)
            .add(&BigFloat::from_u32(limb, p), p, RM);
    }
    if sign == num_bigint::Sign::Minus {
        acc.neg()
    } else {
        acc
    }
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self, self.prec)
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = (self.re_f64(), self.im_f64());
        if im == 0.0 {
            write!(f, "{}", re)
        } else if re == 0.0 {
            write!(f, "{}i", im)
        } else if im < 0.0 {
            write!(f, "{}{}i", re, im)
        } else {
            write!(f, "{}+{}i", re, im)
        }
    }
}

impl PartialEq for BigComplex {
    fn eq(&self, other: &Self) -> bool {
        self.re.cmp(&other.re) == Some(0) && self.im.cmp(&other.im) == Some(0)
    }
}

impl Add for BigComplex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let p = self.join(&rhs);
        BigComplex {
            re: self.re.add(&rhs.re, p, RM),
            im: self.im.add(&rhs.im, p, RM),
            prec: p as u32,
        }
    }
}

impl Sub for BigComplex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let p = self.join(&rhs);
        BigComplex {
            re: self.re.sub(&rhs.re, p, RM),
            im: self.im.sub(&rhs.im, p, RM),
            prec: p as u32,
        }
    }
}

impl Mul for BigComplex {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let p = self.join(&rhs);
        let re = self
            .re
            .mul(&rhs.re, p, RM)
            .sub(&self.im.mul(&rhs.im, p, RM), p, RM);
        let im = self
            .re
            .mul(&rhs.im, p, RM)
            .add(&self.im.mul(&rhs.re, p, RM), p, RM);
        BigComplex {
            re,
            im,
            prec: p as u32,
        }
    }
}

impl Neg for BigComplex {
    type Output = Self;
    fn neg(self) -> Self {
        BigComplex {
            re: self.re.neg(),
            im: self.im.clone().neg(),
            prec: self.prec,
        }
    }
}

impl Div for BigComplex {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let p = self.join(&rhs);
        let d = rhs
            .re
            .mul(&rhs.re, p, RM)
            .add(&rhs.im.mul(&rhs.im, p, RM), p, RM);
        let re = self
            .re
            .mul(&rhs.re, p, RM)
            .add(&self.im.mul(&rhs.im, p, RM), p, RM)
            .div(&d, p, RM);
        let im = self
            .im
            .mul(&rhs.re, p, RM)
            .sub(&self.re.mul(&rhs.im, p, RM), p, RM)
            .div(&d, p, RM);
        BigComplex {
            re,
            im,
            prec: p as u32,
        }
    }
}

impl Zero for BigComplex {
    fn zero() -> Self {
        Self::from_f64_parts(0.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for BigComplex {
    fn one() -> Self {
        Self::from_f64_parts(1.0, 0.0)
    }
}

impl Scalar for BigComplex {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        let p = float_precision() as usize;
        let re = BigFloat::from_i64(n, p);
        BigComplex {
            re,
            im: BigFloat::from_f64(0.0, p),
            prec: p as u32,
        }
    }

    fn from_bigint(n: &BigInt) -> Self {
        let p = float_precision() as usize;
        BigComplex {
            re: bigint_to_bigfloat(n, p),
            im: BigFloat::from_f64(0.0, p),
            prec: p as u32,
        }
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let p = float_precision() as usize;
        let re = BigFloat::from_i64(num, p).div(&BigFloat::from_i64(den, p), p, RM);
        BigComplex {
            re,
            im: BigFloat::from_f64(0.0, p),
            prec: p as u32,
        }
    }

    fn invert(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::one() / self.clone())
    }

    fn magnitude(&self) -> f64 {
        let (re, im) = (self.re_f64(), self.im_f64());
        re.hypot(im)
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        let ord = |a: &BigFloat, b: &BigFloat| match a.cmp(b) {
            Some(c) => c.cmp(&0),
            None => Ordering::Equal,
        };
        ord(&self.re, &other.re).then_with(|| ord(&self.im, &other.im))
    }

    fn to_integer(&self, tol: f64) -> Option<BigInt> {
        let re = self.re_f64();
        let im = self.im_f64();
        // Rounding through f64 limits recognizable integers to ~2^52, which
        // is far beyond any homomorphism degree this library handles.
        let k = re.round();
        if (re - k).abs() <= tol && im.abs() <= tol && k.abs() < 9e15 {
            Some(BigInt::from(k as i64))
        } else {
            None
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FloatRepr {
    re: f64,
    im: f64,
    precision: u32,
}

impl Serialize for BigComplex {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FloatRepr {
            re: self.re_f64(),
            im: self.im_f64(),
            precision: self.prec,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BigComplex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = FloatRepr::deserialize(deserializer)?;
        Ok(BigComplex::from_f64_parts_prec(
            repr.re,
            repr.im,
            repr.precision.max(1),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(num: i64, den: i64) -> GaussianRational {
        GaussianRational::from_ratio(num, den)
    }

    #[test]
    fn gaussian_field_ops() {
        let a = q(3, 2) + GaussianRational::i() * q(-1, 4);
        let b = q(2, 1) + GaussianRational::i() * q(5, 3);
        let prod = a.clone() * b.clone();
        let back = prod / b.clone();
        assert_eq!(back, a);
        assert_eq!(
            a.clone() * a.clone().invert().unwrap(),
            GaussianRational::one()
        );
    }

    #[test]
    fn gaussian_integer_recognition() {
        assert_eq!(q(6, 2).to_integer(0.0), Some(BigInt::from(3)));
        assert_eq!(q(1, 2).to_integer(0.0), None);
        assert_eq!(GaussianRational::i().to_integer(0.0), None);
    }

    #[test]
    fn gaussian_json_round_trip() {
        let a = GaussianRational::new(
            GaussianRational::parse_rational("3/2").unwrap(),
            GaussianRational::parse_rational("-1/4").unwrap(),
        );
        let text = serde_json::to_string(&a).unwrap();
        assert_eq!(text, r#"{"re":"3/2","im":"-1/4"}"#);
        let back: GaussianRational = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn bigcomplex_ops_and_magnitude() {
        let a = BigComplex::from_f64_parts(3.0, 4.0);
        assert!((a.magnitude() - 5.0).abs() < 1e-12);
        let b = BigComplex::from_f64_parts(1.0, -2.0);
        let prod = a.clone() * b.clone();
        let back = prod / b;
        let diff = back - a;
        assert!(diff.magnitude() < 1e-30);
    }

    #[test]
    fn bigcomplex_precision_is_carried() {
        set_float_precision(192);
        let a = BigComplex::from_f64_parts(1.0, 0.0);
        assert_eq!(a.precision_bits(), 192);
        set_float_precision(DEFAULT_FLOAT_PRECISION);
        let b = BigComplex::from_f64_parts(1.0, 0.0);
        assert_eq!((a * b).precision_bits(), 192);
    }

    #[test]
    fn bigcomplex_from_exact_round_trips_small_rationals() {
        let x = q(-7, 3);
        let f = BigComplex::from_exact(&x, 128);
        assert!((f.re_f64() + 7.0 / 3.0).abs() < 1e-15);
        assert_eq!(f.to_integer(1e-9), None);
        let three = BigComplex::from_exact(&q(3, 1), 128);
        assert_eq!(three.to_integer(1e-9), Some(BigInt::from(3)));
    }

    #[test]
    fn bigint_to_float_handles_large_values() {
        let n = BigInt::parse_bytes(b"123456789012345678901234567890", 10).unwrap();
        let f = bigint_to_bigfloat(&n, 128);
        let estimate = bigfloat_to_f64(&f);
        assert!((estimate - 1.2345678901234568e29).abs() / 1e29 < 1e-9);
    }
}
