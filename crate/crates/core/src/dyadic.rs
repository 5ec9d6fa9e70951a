//! Dyadic rationals and outward-rounded intervals over them.
//!
//! Every transcendental quantity in the crate (`e^x`, `ln x`) is carried as an
//! [`Interval`] whose endpoints are exact dyadic rationals `m * 2^e`. Lower
//! endpoints are always rounded toward `-inf` and upper endpoints toward
//! `+inf`, so an interval is a certified enclosure of the true value.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for inexact operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Floor,
    Ceil,
}

impl Round {
    fn flip(self) -> Self {
        match self {
            Round::Floor => Round::Ceil,
            Round::Ceil => Round::Floor,
        }
    }
}

fn div_round_int(n: &BigInt, d: &BigInt, dir: Round) -> BigInt {
    match dir {
        Round::Floor => n.div_floor(d),
        Round::Ceil => -((-n).div_floor(d)),
    }
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

/// An exact value `mant * 2^exp`. Normalized so that `mant` is odd (or zero
/// with `exp == 0`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Self::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Dyadic { mant, exp }
        } else {
            Dyadic {
                mant: mant >> tz,
                exp: exp + tz as i64,
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::new(n.into(), 0)
    }

    /// Exact conversion of a finite float.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Self::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
        let exponent = ((bits >> 52) & 0x7ff) as i64;
        let fraction = bits & 0x000f_ffff_ffff_ffff;
        let (m, e) = if exponent == 0 {
            (fraction, -1074)
        } else {
            (fraction | (1 << 52), exponent - 1075)
        };
        Some(Self::new(BigInt::from(sign) * BigInt::from(m), e))
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Multiply by `2^k`.
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Self::new(&self.mant * k, self.exp)
    }

    /// Number of significant bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// `floor(log2 |x|)`; `i64::MIN` for zero.
    pub fn magnitude(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.bits() as i64 - 1
        }
    }

    /// Round to at most `prec` significant bits in the given direction.
    pub fn round(&self, prec: u64, dir: Round) -> Self {
        let prec = prec.max(1);
        let bits = self.bits();
        if bits <= prec {
            return self.clone();
        }
        let shift = bits - prec;
        let m = div_round_int(&self.mant, &pow2(shift), dir);
        Self::new(m, self.exp + shift as i64)
    }

    pub fn floor(&self) -> BigInt {
        self.to_int(Round::Floor)
    }

    pub fn ceil(&self) -> BigInt {
        self.to_int(Round::Ceil)
    }

    fn to_int(&self, dir: Round) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            div_round_int(&self.mant, &pow2((-self.exp) as u64), dir)
        }
    }

    /// `self / other` with at least `prec` significant bits, rounded in `dir`.
    pub fn div_round(&self, other: &Dyadic, prec: u64, dir: Round) -> Self {
        assert!(!other.is_zero(), "division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        let k = (prec as i64 + other.bits() as i64 - self.bits() as i64 + 2).max(0) as u64;
        let num = &self.mant << k;
        let q = div_round_int(&num, &other.mant, dir);
        Self::new(q, self.exp - other.exp - k as i64)
    }

    /// `self / k` for a nonzero integer `k`.
    pub fn div_int_round(&self, k: &BigInt, prec: u64, dir: Round) -> Self {
        self.div_round(&Dyadic::from_int(k.clone()), prec, dir)
    }

    /// `self * r` for a rational `r`, rounded to `prec` bits in `dir`.
    pub fn mul_rational_round(&self, r: &BigRational, prec: u64, dir: Round) -> Self {
        let num = self.mul_int(r.numer());
        num.div_int_round(r.denom(), prec, dir)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), pow2((-self.exp) as u64))
        }
    }

    /// Enclose a rational between two dyadics of `prec` bits.
    pub fn from_rational_round(r: &BigRational, prec: u64, dir: Round) -> Self {
        Dyadic::from_int(r.numer().clone()).div_int_round(r.denom(), prec, dir)
    }

    /// Nearest `f64` (may overflow to infinity).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.bits();
        let (top, shift) = if bits > 64 {
            let s = bits - 64;
            (&self.mant >> s, s as i64)
        } else {
            (self.mant.clone(), 0)
        };
        let m = top.to_f64().unwrap_or(0.0);
        let e = self.exp + shift;
        scale_pow2(m, e)
    }

    /// Natural log of `|self|` as a float; accurate for values far outside
    /// the `f64` range. Returns `-inf` for zero.
    pub fn ln_abs_f64(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.bits();
        let (top, shift) = if bits > 64 {
            let s = bits - 64;
            (self.mant.abs() >> s, s as i64)
        } else {
            (self.mant.abs(), 0)
        };
        let m = top.to_f64().unwrap_or(1.0);
        m.ln() + (self.exp + shift) as f64 * std::f64::consts::LN_2
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Midpoint of two dyadics (exact).
    pub fn midpoint(a: &Dyadic, b: &Dyadic) -> Dyadic {
        (a + b).shl(-1)
    }
}

fn scale_pow2(mut m: f64, mut e: i64) -> f64 {
    while e > 1000 {
        m *= 2f64.powi(1000);
        e -= 1000;
        if m.is_infinite() {
            return m;
        }
    }
    while e < -1000 {
        m *= 2f64.powi(-1000);
        e += 1000;
        if m == 0.0 {
            return m;
        }
    }
    m * 2f64.powi(e as i32)
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let s = self.signum().cmp(&other.signum());
        if s != Ordering::Equal {
            return s;
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, other: &Dyadic) -> Dyadic {
        self + &(-other)
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

/// Closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self::point(Dyadic::from_int(n))
    }

    pub fn from_rational(r: &BigRational, prec: u64) -> Self {
        Interval {
            lo: Dyadic::from_rational_round(r, prec, Round::Floor),
            hi: Dyadic::from_rational_round(r, prec, Round::Ceil),
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Dyadic {
        Dyadic::midpoint(&self.lo, &self.hi)
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    /// Sign of every element, if uniform and nonzero.
    pub fn strict_sign(&self) -> Option<i32> {
        if self.lo.signum() > 0 {
            Some(1)
        } else if self.hi.signum() < 0 {
            Some(-1)
        } else {
            None
        }
    }

    pub fn abs(&self) -> Interval {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            -self
        } else {
            Interval::new(Dyadic::zero(), self.lo.abs().max(self.hi.abs()))
        }
    }

    pub fn disjoint(&self, other: &Interval) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }

    /// Round endpoints outward to `prec` significant bits.
    pub fn round_out(&self, prec: u64) -> Interval {
        Interval {
            lo: self.lo.round(prec, Round::Floor),
            hi: self.hi.round(prec, Round::Ceil),
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Interval {
        let a = self.lo.mul_int(k);
        let b = self.hi.mul_int(k);
        if k.is_negative() {
            Interval::new(b, a)
        } else {
            Interval::new(a, b)
        }
    }

    pub fn mul_rational(&self, r: &BigRational, prec: u64) -> Interval {
        let (a, b) = if r.is_negative() {
            (&self.hi, &self.lo)
        } else {
            (&self.lo, &self.hi)
        };
        Interval::new(
            a.mul_rational_round(r, prec, Round::Floor),
            b.mul_rational_round(r, prec, Round::Ceil),
        )
    }

    /// Width relative to the smallest magnitude in the interval; `None` if
    /// the interval straddles zero without being the point zero.
    pub fn relative_width_f64(&self) -> Option<f64> {
        if self.is_point() {
            return Some(0.0);
        }
        if self.contains_zero() {
            return None;
        }
        let m = self.lo.abs().min(self.hi.abs());
        Some((self.width().ln_abs_f64() - m.ln_abs_f64()).exp())
    }

    pub fn recip(&self, prec: u64) -> Interval {
        assert!(!self.contains_zero(), "reciprocal of interval containing zero");
        let one = Dyadic::one();
        Interval::new(
            one.div_round(&self.hi, prec, Round::Floor),
            one.div_round(&self.lo, prec, Round::Ceil),
        )
    }

    pub fn square(&self) -> Interval {
        let a = self.abs();
        Interval::new(&a.lo * &a.lo, &a.hi * &a.hi)
    }

    /// Certified enclosure of `e^x` for every `x` in the interval.
    pub fn exp(&self, prec: u64) -> Interval {
        Interval::new(
            exp_bound(&self.lo, prec, Round::Floor),
            exp_bound(&self.hi, prec, Round::Ceil),
        )
    }

    /// Certified enclosure of `ln x`; the interval must be strictly positive.
    pub fn ln(&self, prec: u64) -> Interval {
        assert!(self.lo.signum() > 0, "logarithm of nonpositive interval");
        Interval::new(
            ln_bound(&self.lo, prec, Round::Floor),
            ln_bound(&self.hi, prec, Round::Ceil),
        )
    }
}

impl<'a> Add<&'a Interval> for &'a Interval {
    type Output = Interval;
    fn add(self, other: &Interval) -> Interval {
        Interval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }
}

impl<'a> Sub<&'a Interval> for &'a Interval {
    type Output = Interval;
    fn sub(self, other: &Interval) -> Interval {
        Interval::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }
}

impl<'a> Mul<&'a Interval> for &'a Interval {
    type Output = Interval;
    fn mul(self, other: &Interval) -> Interval {
        let c = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-&self.hi, -&self.lo)
    }
}

/// One-sided bound on `e^x`.
pub fn exp_bound(x: &Dyadic, prec: u64, dir: Round) -> Dyadic {
    match x.signum() {
        0 => Dyadic::one(),
        s if s < 0 => {
            // e^{-y} = 1 / e^{y}; the bound direction flips under reciprocal
            let e = exp_bound(&x.abs(), prec + 4, dir.flip());
            Dyadic::one().div_round(&e, prec, dir)
        }
        _ => exp_positive(x, prec, dir),
    }
}

fn exp_positive(x: &Dyadic, prec: u64, dir: Round) -> Dyadic {
    // reduce to y = x / 2^s < 2^-10, then square s times
    let s = (x.magnitude() + 11).max(0) as u64;
    let y = x.shl(-(s as i64));
    let work = prec + s + 24;
    let mut sum = Dyadic::one();
    let mut term = Dyadic::one();
    let mut k = 1u64;
    loop {
        term = (&term * &y)
            .round(work, dir)
            .div_int_round(&BigInt::from(k), work, dir);
        sum = (&sum + &term).round(work, dir);
        if term.magnitude() < -(work as i64) - 2 {
            break;
        }
        k += 1;
    }
    if dir == Round::Ceil {
        // tail after the last term is bounded by that term since y < 1/2
        sum = (&sum + &term).round(work, dir);
    }
    for _ in 0..s {
        sum = (&sum * &sum).round(work, dir);
    }
    sum.round(prec, dir)
}

/// Bound on `2 atanh(z)` for `0 <= z <= 1/3` using the odd power series.
fn atanh2_bound(z: &Dyadic, work: u64, dir: Round) -> Dyadic {
    if z.is_zero() {
        return Dyadic::zero();
    }
    let z2 = (z * z).round(work, dir);
    let mut power = z.clone();
    let mut sum = z.clone();
    let mut k = 1u64;
    loop {
        power = (&power * &z2).round(work, dir);
        let term = power.div_int_round(&BigInt::from(2 * k + 1), work, dir);
        sum = (&sum + &term).round(work, dir);
        if term.magnitude() < -(work as i64) - 2 {
            if dir == Round::Ceil {
                // geometric tail with ratio z^2 <= 1/9
                sum = (&sum + &term).round(work, dir);
            }
            break;
        }
        k += 1;
    }
    sum.shl(1)
}

fn ln2_bound(work: u64, dir: Round) -> Dyadic {
    let third = Dyadic::one().div_int_round(&BigInt::from(3), work, dir);
    atanh2_bound(&third, work, dir)
}

/// One-sided bound on `ln x` for `x > 0`.
pub fn ln_bound(x: &Dyadic, prec: u64, dir: Round) -> Dyadic {
    assert!(x.signum() > 0);
    let k = x.magnitude();
    let m = x.shl(-k); // m in [1, 2)
    let work = prec + 24 + (64 - (k.unsigned_abs()).leading_zeros() as u64);
    let one = Dyadic::one();
    let z = (&m - &one).div_round(&(&m + &one), work, dir);
    let ln_m = atanh2_bound(&z, work, dir);
    let ln2_dir = if k >= 0 { dir } else { dir.flip() };
    let ln2 = ln2_bound(work, ln2_dir);
    let total = &ln2.mul_int(&BigInt::from(k)) + &ln_m;
    total.round(prec, dir)
}

/// Enclosure of `e^r` for a rational exponent.
pub fn exp_rational(r: &BigRational, prec: u64) -> Interval {
    if r.is_zero() {
        return Interval::point(Dyadic::one());
    }
    let x = Interval::from_rational(r, prec + 16);
    x.exp(prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(x: f64) -> Dyadic {
        Dyadic::from_f64(x).unwrap()
    }

    #[test]
    fn normalization_and_ordering() {
        let a = Dyadic::new(BigInt::from(12), 0);
        assert_eq!(a.mant(), &BigInt::from(3));
        assert_eq!(a.exp(), 2);
        assert!(d(0.25) < d(0.5));
        assert!(d(-3.0) < d(0.0));
        assert_eq!(&d(1.5) + &d(-0.25), d(1.25));
        assert_eq!(&d(1.5) * &d(-0.25), d(-0.375));
    }

    #[test]
    fn floor_ceil_negative() {
        assert_eq!(d(-2.5).floor(), BigInt::from(-3));
        assert_eq!(d(-2.5).ceil(), BigInt::from(-2));
        assert_eq!(d(7.0).ceil(), BigInt::from(7));
    }

    #[test]
    fn f64_round_trip() {
        for x in [1.0, -3.75, 1e-300, 6.02e23, f64::MIN_POSITIVE / 8.0] {
            assert_eq!(d(x).to_f64(), x);
        }
    }

    #[test]
    fn exp_encloses_float_values() {
        for x in [-20.0, -1.0, -1e-3, 1e-3, 0.5, 1.0, 5.0, 30.0, 100.0] {
            let e = Interval::point(d(x)).exp(80);
            let want = f64::exp(x);
            assert!(e.lo().to_f64() <= want * (1.0 + 1e-15), "{x}");
            assert!(e.hi().to_f64() >= want * (1.0 - 1e-15), "{x}");
            assert!(e.relative_width_f64().unwrap() < 1e-20, "{x}: {e:?}");
        }
    }

    #[test]
    fn exp_one_matches_known_digits() {
        // e = 2.718281828459045235360287471352662497757...
        let e = Interval::point(Dyadic::one()).exp(200);
        let r = e.mid().to_rational();
        let approx = BigRational::new(
            BigInt::parse_bytes(b"2718281828459045235360287471352662497757", 10).unwrap(),
            BigInt::from(10).pow(39),
        );
        let diff = (r - approx).abs();
        assert!(diff < BigRational::new(BigInt::one(), BigInt::from(10).pow(38)));
    }

    #[test]
    fn ln_inverts_exp() {
        for x in [1e-9, 0.3, 1.0, 2.0, 148.4, 1e200] {
            let l = Interval::point(d(x)).ln(100);
            assert!((l.mid_f64() - x.ln()).abs() <= 1e-13 * x.ln().abs().max(1.0), "{x}");
            let back = l.exp(100);
            assert!(back.contains(&d(x)) || back.relative_width_f64().unwrap() < 1e-25);
        }
        let l2 = Interval::point(d(2.0)).ln(120);
        assert!(l2.lo().to_f64() <= std::f64::consts::LN_2);
        assert!(l2.hi().to_f64() >= std::f64::consts::LN_2);
    }

    #[test]
    fn exp_of_rational_exponent() {
        let r = BigRational::new(BigInt::from(5), BigInt::one());
        let e = exp_rational(&r, 64);
        assert!(e.lo().to_f64() <= 148.4131591025766 && e.hi().to_f64() >= 148.4131591025766);
        assert!(exp_rational(&BigRational::zero(), 64).is_point());
    }

    #[test]
    fn division_rounding_brackets_quotient() {
        let a = d(1.0);
        let b = Dyadic::from_int(3);
        let lo = a.div_round(&b, 60, Round::Floor);
        let hi = a.div_round(&b, 60, Round::Ceil);
        assert!(lo < hi);
        assert!(lo.mul_int(&BigInt::from(3)) < a);
        assert!(hi.mul_int(&BigInt::from(3)) > a);
    }
}
