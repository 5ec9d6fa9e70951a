//! Dense univariate polynomials over the integers.
//!
//! Coefficients are stored in ascending order. The Vieta view used by the
//! coefficient boxes writes a monic degree-`d` polynomial as
//! `x^d - a_1 x^{d-1} + a_2 x^{d-2} - ... + (-1)^d a_d`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dyadic::{Dyadic, Interval};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn from_ascending(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_descending(coeffs: Vec<BigInt>) -> Self {
        let mut c = coeffs;
        c.reverse();
        Self::from_ascending(c)
    }

    pub fn from_i64_ascending(c: &[i64]) -> Self {
        Self::from_ascending(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn from_i64_descending(c: &[i64]) -> Self {
        Self::from_descending(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// Monic polynomial from Vieta coefficients `a_1..a_d`.
    pub fn from_vieta(a: &[BigInt]) -> Self {
        let d = a.len();
        let mut coeffs = vec![BigInt::zero(); d + 1];
        coeffs[d] = BigInt::one();
        for (i, ai) in a.iter().enumerate() {
            let k = i + 1;
            let c = if k % 2 == 0 { ai.clone() } else { -ai };
            coeffs[d - k] = c;
        }
        Self::from_ascending(coeffs)
    }

    /// Parse a comma separated list of coefficients, highest degree first.
    pub fn parse_descending(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad coefficient {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let p = Self::from_descending(coeffs);
        if p.is_zero() {
            return Err(Error::InvalidPolynomial("zero polynomial".into()));
        }
        Ok(p)
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_ascending(vec![c])
    }

    /// `x - r`.
    pub fn linear(r: BigInt) -> Self {
        Self::from_ascending(vec![-r, BigInt::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn descending(&self) -> Vec<BigInt> {
        self.coeffs.iter().rev().cloned().collect()
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    /// Vieta coefficients `a_1..a_d` of a monic polynomial.
    pub fn vieta(&self) -> Vec<BigInt> {
        let d = self.degree();
        (1..=d)
            .map(|k| {
                let c = self.coeff(d - k);
                if k % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect()
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Exact value at a dyadic point.
    pub fn eval_dyadic(&self, x: &Dyadic) -> Dyadic {
        if x.exp() >= 0 || self.coeffs.len() <= 1 {
            let mut acc = Dyadic::zero();
            for c in self.coeffs.iter().rev() {
                acc = &(&acc * x) + &Dyadic::from_int(c.clone());
            }
            return acc;
        }
        let s = (-x.exp()) as u64;
        let d = self.degree() as u64;
        Dyadic::new(self.scaled_horner(x.mant(), s), -((s * d) as i64))
    }

    /// `p(m / 2^s) * 2^{s d}` as an integer.
    fn scaled_horner(&self, m: &BigInt, s: u64) -> BigInt {
        let d = self.degree();
        let mut acc = self.coeffs[d].clone();
        for i in (0..d).rev() {
            acc = acc * m + (&self.coeffs[i] << (s * (d - i) as u64));
        }
        acc
    }

    /// Exact sign at a dyadic point.
    pub fn sign_at(&self, x: &Dyadic) -> i32 {
        if self.is_zero() {
            return 0;
        }
        let v = if x.exp() >= 0 {
            self.eval_int(&x.floor())
        } else {
            self.scaled_horner(x.mant(), (-x.exp()) as u64)
        };
        sign_of(&v)
    }

    /// Exact sign at a rational point.
    pub fn sign_at_rational(&self, r: &BigRational) -> i32 {
        if self.is_zero() {
            return 0;
        }
        let d = self.degree();
        let (a, q) = (r.numer(), r.denom());
        // p(a/q) q^d = sum c_i a^i q^{d-i}
        let mut acc = self.coeffs[d].clone();
        let mut qpow = BigInt::one();
        for i in (0..d).rev() {
            qpow *= q;
            acc = acc * a + &self.coeffs[i] * &qpow;
        }
        sign_of(&acc)
    }

    /// Interval Horner evaluation.
    pub fn eval_interval(&self, x: &Interval) -> Interval {
        let mut acc = Interval::from_int(BigInt::zero());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &Interval::from_int(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::from_ascending(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i as u64))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::from_ascending(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_ascending((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_ascending(out)
    }

    /// `p(-x)`.
    pub fn negate_variable(&self) -> Self {
        Self::from_ascending(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `x^{deg p} p(1/x)`; coefficients reversed.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::from_ascending(c)
    }

    /// `p(x) = x^{deg p} p(1/x)`.
    pub fn is_palindromic(&self) -> bool {
        let c = &self.coeffs;
        (0..c.len()).all(|i| c[i] == c[c.len() - 1 - i])
    }

    /// Reciprocal polynomial normalized to a positive leading coefficient.
    pub fn reciprocal_normalized(&self) -> Self {
        let r = self.reversed();
        if r.leading().is_negative() {
            r.neg()
        } else {
            r
        }
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divide out the content; leading coefficient made positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        Self::from_ascending(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Division with remainder when the quotient is integral. Returns `None`
    /// if some step needs a non-integral quotient coefficient.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree();
        let lc = divisor.leading();
        let mut rem = self.coeffs.clone();
        if self.is_zero() || self.degree() < dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &q * c;
            }
            quot[k] = q;
        }
        Some((Self::from_ascending(quot), Self::from_ascending(rem)))
    }

    /// Exact quotient if `divisor` divides `self` over the integers.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        match self.div_rem(divisor) {
            Some((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    /// Pseudo-remainder `lc(b)^{deg a - deg b + 1} a mod b`.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        assert!(!b.is_zero());
        if self.degree() < b.degree() || self.is_zero() {
            return self.clone();
        }
        let db = b.degree();
        let lc = b.leading();
        let mut r = self.coeffs.clone();
        let mut steps = self.degree() - db + 1;
        let mut top = self.degree();
        while r.len() > db && top >= db {
            let t = r[top].clone();
            for c in r.iter_mut() {
                *c *= &lc;
            }
            if !t.is_zero() {
                for (j, c) in b.coeffs.iter().enumerate() {
                    r[top - db + j] -= &t * c;
                }
            }
            r.truncate(top);
            steps -= 1;
            if top == 0 {
                break;
            }
            top -= 1;
        }
        let mut out = Self::from_ascending(r);
        if steps > 0 {
            out = out.scale(&num_traits::pow(lc, steps));
        }
        out
    }

    /// Greatest common divisor over the integers, primitive with positive
    /// leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        if a.is_zero() {
            return a;
        }
        let g = self.content().gcd(&other.content());
        a.primitive_part().scale(&g)
    }

    pub fn is_squarefree(&self) -> bool {
        self.degree() == 0 || self.gcd(&self.derivative()).degree() == 0
    }

    /// Squarefree decomposition of the primitive part:
    /// `p = c * prod q_k^k`, returned as `(q_k, k)` with `deg q_k > 0`.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        let p = self.primitive_part();
        if p.degree() == 0 {
            return vec![];
        }
        let mut a = p.gcd(&p.derivative());
        let mut b = p.exact_div(&a).expect("gcd divides p").primitive_part();
        let mut out = Vec::new();
        let mut k = 1;
        while b.degree() > 0 {
            let c = a.gcd(&b);
            let q = b.exact_div(&c).expect("gcd divides b").primitive_part();
            if q.degree() > 0 {
                out.push((q, k));
            }
            a = a.exact_div(&c).expect("gcd divides a").primitive_part();
            b = c;
            k += 1;
        }
        out
    }

    /// Resultant via the subresultant polynomial remainder sequence.
    pub fn resultant(&self, other: &Self) -> BigInt {
        if self.is_zero() || other.is_zero() {
            return BigInt::zero();
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut s = BigInt::one();
        if a.degree() < b.degree() {
            if (a.degree() * b.degree()) % 2 == 1 {
                s = -s;
            }
            std::mem::swap(&mut a, &mut b);
        }
        let ca = a.content();
        let cb = b.content();
        a = Self::from_ascending(a.coeffs.iter().map(|c| c / &ca).collect());
        b = Self::from_ascending(b.coeffs.iter().map(|c| c / &cb).collect());
        let t = num_traits::pow(ca, b.degree()) * num_traits::pow(cb, a.degree());
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            if b.degree() == 0 {
                break;
            }
            let delta = a.degree() - b.degree();
            if a.degree() % 2 == 1 && b.degree() % 2 == 1 {
                s = -s;
            }
            let r = a.pseudo_rem(&b);
            a = b;
            let div = &g * num_traits::pow(h.clone(), delta);
            b = Self::from_ascending(r.coeffs.iter().map(|c| c / &div).collect());
            if b.is_zero() {
                return BigInt::zero();
            }
            g = a.leading();
            h = if delta == 0 {
                h
            } else {
                num_traits::pow(g.clone(), delta) / num_traits::pow(h.clone(), delta - 1)
            };
        }
        let da = a.degree();
        let lb = b.leading();
        let hh = if da == 0 {
            h
        } else {
            num_traits::pow(lb, da) / num_traits::pow(h, da - 1)
        };
        s * t * hh
    }

    /// `Disc(p) = prod_{i<j} (x_i - x_j)^2 * lc^{2d-2}`.
    pub fn discriminant(&self) -> BigInt {
        let d = self.degree();
        if d < 1 {
            return BigInt::zero();
        }
        if d == 1 {
            return BigInt::one();
        }
        let r = self.resultant(&self.derivative());
        let sign = if (d * (d - 1) / 2) % 2 == 1 { -1 } else { 1 };
        BigInt::from(sign) * r / self.leading()
    }

    /// Coefficients reduced modulo a prime, ascending, trailing zeros removed.
    pub fn reduce_mod(&self, p: u64) -> Vec<u64> {
        let pb = BigInt::from(p);
        let mut v: Vec<u64> = self
            .coeffs
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().unwrap())
            .collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    /// Largest absolute coefficient.
    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// A power of two bounding the modulus of every complex root (Cauchy).
    pub fn root_bound_log2(&self) -> i64 {
        let lc = self.leading().abs();
        let m = self.coeffs[..self.degree()]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default();
        // 1 + m / lc <= 2^k
        let q = (m / &lc) + 2u32;
        q.bits() as i64
    }
}

fn sign_of(v: &BigInt) -> i32 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Serialized as descending coefficients in decimal strings.
impl serde::Serialize for IntPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.descending().iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for IntPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        let c = v
            .iter()
            .map(|x| x.trim().parse::<BigInt>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Ok(IntPolynomial::from_descending(c))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64_descending(c)
    }

    #[test]
    fn vieta_round_trip() {
        let q = p(&[1, -3, 1]);
        assert_eq!(q.vieta(), vec![BigInt::from(3), BigInt::from(1)]);
        assert_eq!(IntPolynomial::from_vieta(&q.vieta()), q);
        let c = p(&[1, -4, 3, -1]);
        assert_eq!(c.vieta(), vec![BigInt::from(4), BigInt::from(3), BigInt::from(1)]);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, -3, 1]).to_string(), "x^2 - 3x + 1");
        assert_eq!(p(&[-1, 0, 2, 0]).to_string(), "-x^3 + 2x");
    }

    #[test]
    fn signs_at_points() {
        let q = p(&[1, -3, 1]);
        assert_eq!(q.sign_at(&Dyadic::from_f64(0.25).unwrap()), 1);
        assert_eq!(q.sign_at(&Dyadic::from_f64(0.5).unwrap()), -1);
        assert_eq!(q.sign_at(&Dyadic::from_int(3)), 1);
        let r = p(&[2, -1]);
        assert_eq!(r.sign_at(&Dyadic::from_f64(0.5).unwrap()), 0);
        assert_eq!(
            p(&[3, -1]).sign_at_rational(&BigRational::new(1.into(), 3.into())),
            0
        );
        let x = Dyadic::from_f64(-1.75).unwrap();
        assert_eq!(q.eval_dyadic(&x).to_f64(), 1.75 * 1.75 + 3.0 * 1.75 + 1.0);
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[1, -3, 1]);
        let b = p(&[1, -7, 1]);
        let ab = a.mul(&b);
        assert_eq!(ab, p(&[1, -10, 23, -10, 1]));
        assert_eq!(ab.exact_div(&a).unwrap(), b);
        assert!(ab.exact_div(&p(&[1, -2])).is_none());
        let g = ab.gcd(&a.mul(&p(&[1, 1])));
        assert_eq!(g, a);
        assert!(p(&[2, 0, -2]).gcd(&p(&[4, -4])) == p(&[2, -2]));
    }

    #[test]
    fn squarefree_checks() {
        assert!(!p(&[1, -2, 1]).is_squarefree());
        assert!(p(&[1, -3, 1]).is_squarefree());
        let q = p(&[1, -1]).mul(&p(&[1, -1])).mul(&p(&[1, 0, -2]));
        let dec = q.squarefree_decomposition();
        assert_eq!(dec, vec![(p(&[1, 0, -2]), 1), (p(&[1, -1]), 2)]);
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(p(&[1, -3, 1]).discriminant(), BigInt::from(5));
        assert_eq!(p(&[1, -2, 1]).discriminant(), BigInt::from(0));
        assert_eq!(p(&[1, 0, -1, 0]).discriminant(), BigInt::from(4));
        assert_eq!(p(&[1, -2, -1]).discriminant(), BigInt::from(8));
        // cubic x^3 + a x + b has -4a^3 - 27b^2
        assert_eq!(p(&[1, 0, 2, 3]).discriminant(), BigInt::from(-4 * 8 - 27 * 9));
    }

    #[test]
    fn pseudo_remainder_matches_definition() {
        let a = p(&[3, 1, 4, 1]);
        let b = p(&[2, 7]);
        // 2^3 * a mod b, evaluated at the root -7/2 of b
        let r = a.pseudo_rem(&b);
        assert_eq!(r.degree(), 0);
        let root = BigRational::new(BigInt::from(-7), BigInt::from(2));
        let val = a
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| BigRational::from_integer(c.clone()) * num_traits::pow(root.clone(), i))
            .fold(BigRational::zero(), |s, t| s + t);
        assert_eq!(BigRational::from_integer(r.constant_term()), val * BigInt::from(8));
    }

    #[test]
    fn palindromes_and_reversal() {
        assert!(p(&[1, -3, 1]).is_palindromic());
        assert!(!p(&[1, -1, -1]).is_palindromic());
        assert_eq!(p(&[1, -1, -1]).reciprocal_normalized(), p(&[1, 1, -1]));
        assert_eq!(p(&[1, 2, 3]).negate_variable(), p(&[1, -2, 3]));
    }
}
