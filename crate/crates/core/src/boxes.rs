//! Vieta coefficient boxes and their integer points.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chamber::{check_pattern, Direction, Group, SignPattern};
use crate::dyadic::{exp_rational, Dyadic, Interval};
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;
use crate::rational::{format_rational, rational_to_f64};

pub const DEFAULT_ENUMERATION_CAP: u64 = 100_000_000;

const ENDPOINT_PRECISION_CAP: u64 = 1 << 16;
const MAX_EXPONENT: i64 = 20_000;

/// Real polynomial with coefficients `b_1..b_d` (Vieta convention) enclosed
/// in intervals.
#[derive(Clone, Debug)]
pub struct RealPolynomial {
    coeffs: Vec<Interval>,
    precision: u64,
}

impl RealPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Enclosures of `b_1..b_d`.
    pub fn coeffs(&self) -> &[Interval] {
        &self.coeffs
    }

    pub fn precision(&self) -> u64 {
        self.precision
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(Interval::mid_f64).collect()
    }
}

fn check_t(t: &BigRational) -> Result<()> {
    if t.is_negative() {
        return Err(Error::InvalidParameter(format!(
            "T must be nonnegative, got {}",
            format_rational(t)
        )));
    }
    Ok(())
}

fn check_eps(eps: &BigRational) -> Result<()> {
    if !eps.is_positive() || eps >= &BigRational::one() {
        return Err(Error::InvalidEpsilon(format_rational(eps)));
    }
    Ok(())
}

fn check_exponent(x: &BigRational) -> Result<()> {
    let too_big = x.abs() > BigRational::from_integer(BigInt::from(MAX_EXPONENT));
    if too_big {
        return Err(Error::InvalidParameter(format!(
            "exponent {} out of range",
            format_rational(x)
        )));
    }
    Ok(())
}

/// Enclosures of the model roots `m_i e^{T v_i}` over the full chamber vector.
pub fn model_roots(v: &Direction, m: &SignPattern, t: &BigRational, prec: u64) -> Vec<Interval> {
    let signs = m.full(v.group());
    v.full_coords()
        .iter()
        .zip(signs)
        .map(|(c, s)| {
            let e = exp_rational(&(c * t), prec);
            if s < 0 {
                -&e
            } else {
                e
            }
        })
        .collect()
}

/// Expand `prod (x - r_i)` into elementary symmetric enclosures `e_1..e_d`.
pub fn elementary_symmetric(roots: &[Interval], prec: u64) -> Vec<Interval> {
    let mut e = vec![Interval::from_int(1)];
    for r in roots {
        let mut next = e.clone();
        next.push(Interval::from_int(0));
        for k in 1..next.len() {
            next[k] = (&e.get(k).cloned().unwrap_or_else(|| Interval::from_int(0))
                + &(r * &e[k - 1]))
                .round_out(prec);
        }
        e = next;
    }
    e.remove(0);
    e
}

/// The model polynomial `q_{Tv,m}(x) = prod (x - m_i e^{T v_i})`.
pub fn model_polynomial(
    v: &Direction,
    m: &SignPattern,
    t: &BigRational,
    precision: u64,
) -> Result<RealPolynomial> {
    check_pattern(v, m, false)?;
    check_t(t)?;
    for c in v.coords() {
        check_exponent(&(c * t))?;
    }
    let target = precision.max(8) / 2;
    let mut guard = 32u64;
    loop {
        let work = precision + guard;
        let roots = model_roots(v, m, t, work);
        let coeffs = elementary_symmetric(&roots, work);
        let ok = coeffs.iter().all(|b| {
            b.is_point()
                || b
                    .relative_width_f64()
                    .is_some_and(|w| w <= (-(target as f64)).exp2())
        });
        if ok {
            return Ok(RealPolynomial { coeffs, precision });
        }
        guard *= 2;
        if guard > ENDPOINT_PRECISION_CAP {
            return Err(Error::PrecisionExhausted(format!(
                "model coefficients at T = {}",
                format_rational(t)
            )));
        }
    }
}

/// `(ceil((1 - eps) e^x), floor((1 + eps) e^x))`.
fn endpoints(x: &BigRational, eps: &BigRational) -> Result<(BigInt, BigInt)> {
    check_exponent(x)?;
    let one = BigRational::one();
    let lo_factor = &one - eps;
    let hi_factor = &one + eps;
    if x.is_zero() {
        return Ok((lo_factor.ceil().to_integer(), hi_factor.floor().to_integer()));
    }
    let mag = (rational_to_f64(&x.abs()) * std::f64::consts::LOG2_E).ceil() as u64;
    let mut prec = 64 + mag;
    loop {
        let e = exp_rational(x, prec);
        let lo = e.mul_rational(&lo_factor, prec);
        let hi = e.mul_rational(&hi_factor, prec);
        let (a, b) = (lo.lo().ceil(), lo.hi().ceil());
        let (c, d) = (hi.lo().floor(), hi.hi().floor());
        if a == b && c == d {
            return Ok((a, c));
        }
        prec *= 2;
        if prec > ENDPOINT_PRECISION_CAP {
            return Err(Error::PrecisionExhausted(format!(
                "box endpoint at exponent {}",
                format_rational(x)
            )));
        }
    }
}

/// Integer points of a coefficient box.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffBox {
    v: Direction,
    m: SignPattern,
    t: BigRational,
    eps: BigRational,
    /// Closed intervals of the free coefficients `a_1..a_f`.
    intervals: Vec<(BigInt, BigInt)>,
    /// Fixed coefficients `(k, a_k)` besides the mirrored ones.
    fixed: Vec<(usize, BigInt)>,
    degenerate: bool,
    count: BigInt,
}

/// `P_T(v, m; eps)` for an `SL` direction.
pub fn coeff_box_sl(
    v: &Direction,
    m: &SignPattern,
    t: &BigRational,
    eps: &BigRational,
) -> Result<CoeffBox> {
    if v.group() != Group::Sl {
        return Err(Error::InvalidDirection("expected an SL direction".into()));
    }
    build_box(v, m, t, eps)
}

/// The folded reciprocal box `P*_T(v, m; eps)` for an `Sp` direction.
pub fn coeff_box_sp(
    v: &Direction,
    m: &SignPattern,
    t: &BigRational,
    eps: &BigRational,
) -> Result<CoeffBox> {
    if v.group() != Group::Sp {
        return Err(Error::InvalidDirection("expected an Sp direction".into()));
    }
    build_box(v, m, t, eps)
}

/// Box for either group.
pub fn coeff_box(
    v: &Direction,
    m: &SignPattern,
    t: &BigRational,
    eps: &BigRational,
) -> Result<CoeffBox> {
    build_box(v, m, t, eps)
}

fn build_box(
    v: &Direction,
    m: &SignPattern,
    t: &BigRational,
    eps: &BigRational,
) -> Result<CoeffBox> {
    check_pattern(v, m, false)?;
    check_eps(eps)?;
    check_t(t)?;
    let w = v.partial_sums();
    let mm = m.prefix_products();
    let n = v.n();
    let mut intervals = Vec::with_capacity(n);
    for i in 0..n {
        let (lo, hi) = endpoints(&(&w[i] * t), eps)?;
        let iv = if mm[i] > 0 { (lo, hi) } else { (-hi, -lo) };
        intervals.push(iv);
    }
    let mut fixed = Vec::new();
    let mut degenerate = false;
    match v.group() {
        Group::Sl => {
            let last = intervals.pop().expect("n >= 2");
            let unit = BigInt::from(mm[n - 1]);
            if last.0 == unit && last.1 == unit {
                fixed.push((n, unit));
            } else {
                degenerate = true;
                intervals.push(last);
            }
        }
        Group::Sp => fixed.push((2 * n, BigInt::one())),
    }
    let count = count_points(&intervals);
    Ok(CoeffBox {
        v: v.clone(),
        m: m.clone(),
        t: t.clone(),
        eps: eps.clone(),
        intervals,
        fixed,
        degenerate,
        count,
    })
}

fn count_points(intervals: &[(BigInt, BigInt)]) -> BigInt {
    let mut c = BigInt::one();
    for (lo, hi) in intervals {
        if lo > hi {
            return BigInt::zero();
        }
        c *= hi - lo + 1;
    }
    c
}

impl CoeffBox {
    pub fn group(&self) -> Group {
        self.v.group()
    }

    pub fn direction(&self) -> &Direction {
        &self.v
    }

    pub fn pattern(&self) -> &SignPattern {
        &self.m
    }

    pub fn t(&self) -> &BigRational {
        &self.t
    }

    pub fn eps(&self) -> &BigRational {
        &self.eps
    }

    pub fn intervals(&self) -> &[(BigInt, BigInt)] {
        &self.intervals
    }

    pub fn fixed(&self) -> &[(usize, BigInt)] {
        &self.fixed
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Degree of the polynomials in the box.
    pub fn degree(&self) -> usize {
        self.v.degree()
    }

    pub fn dimension(&self) -> usize {
        self.intervals.len()
    }

    pub fn exact_count(&self) -> &BigInt {
        &self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count.is_zero()
    }

    /// Full Vieta vector `a_1..a_d` for a point of the free coordinates.
    pub fn vieta_from_free(&self, free: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(free.len(), self.intervals.len());
        let n = self.v.n();
        match self.group() {
            Group::Sl => {
                let mut a = free.to_vec();
                if let Some((_, c)) = self.fixed.first() {
                    a.push(c.clone());
                }
                a
            }
            Group::Sp => {
                let mut a = free.to_vec();
                for k in 1..n {
                    a.push(free[n - 1 - k].clone());
                }
                a.push(BigInt::one());
                a
            }
        }
    }

    pub fn polynomial(&self, free: &[BigInt]) -> IntPolynomial {
        IntPolynomial::from_vieta(&self.vieta_from_free(free))
    }

    /// Free coordinates of a polynomial, if its shape matches the box layout.
    pub fn free_coords(&self, p: &IntPolynomial) -> Option<Vec<BigInt>> {
        if p.degree() != self.degree() || !p.is_monic() {
            return None;
        }
        let a = p.vieta();
        let free: Vec<BigInt> = a[..self.intervals.len()].to_vec();
        (self.vieta_from_free(&free) == a).then_some(free)
    }

    /// Exact membership test for an integer polynomial.
    pub fn contains(&self, p: &IntPolynomial) -> bool {
        match self.free_coords(p) {
            Some(free) => free
                .iter()
                .zip(&self.intervals)
                .all(|(a, (lo, hi))| lo <= a && a <= hi),
            None => false,
        }
    }

    /// Re-check `(1 - eps) e^{T w_i} <= a_i M_i <= (1 + eps) e^{T w_i}` for
    /// every constrained coefficient with certified enclosures.
    pub fn satisfies_inequalities(&self, p: &IntPolynomial) -> Result<bool> {
        let n = self.v.n();
        if p.degree() != self.degree() || !p.is_monic() {
            return Ok(false);
        }
        let a = p.vieta();
        let w = self.v.partial_sums();
        let mm = self.m.prefix_products();
        let one = BigRational::one();
        for i in 0..n {
            let x = &w[i] * &self.t;
            let am = BigRational::from_integer(&a[i] * BigInt::from(mm[i]));
            let lo_f = &one - &self.eps;
            let hi_f = &one + &self.eps;
            if x.is_zero() {
                if am < lo_f || am > hi_f {
                    return Ok(false);
                }
                continue;
            }
            let mut prec = 64 + (rational_to_f64(&x.abs()) * 1.5) as u64;
            loop {
                let e = exp_rational(&x, prec);
                let lo = e.mul_rational(&lo_f, prec);
                let hi = e.mul_rational(&hi_f, prec);
                let amd = Interval::from_rational(&am, prec);
                if amd.hi() < lo.lo() || amd.lo() > hi.hi() {
                    return Ok(false);
                }
                if amd.lo() >= lo.hi() && amd.hi() <= hi.lo() {
                    break;
                }
                prec *= 2;
                if prec > ENDPOINT_PRECISION_CAP {
                    return Err(Error::PrecisionExhausted("box inequality".into()));
                }
            }
        }
        Ok(match self.group() {
            Group::Sl => self.contains(p) || self.degenerate,
            Group::Sp => self.contains(p),
        })
    }

    /// Largest `|a_i M_i e^{-T w_i} - 1|`, i.e. the smallest `eps'` with
    /// `p` in the box of width `eps'` (ignoring integer rounding).
    pub fn deviation(&self, p: &IntPolynomial) -> f64 {
        relative_deviation(&self.v, &self.m, &self.t, p)
    }

    /// Whether every model coefficient `M_i b_i` lies strictly inside its
    /// interval.
    pub fn model_inside(&self, precision: u64) -> Result<bool> {
        if self.is_empty() {
            return Ok(false);
        }
        let q = model_polynomial(&self.v, &self.m, &self.t, precision)?;
        let mm = self.m.prefix_products();
        for (i, (lo, hi)) in self.intervals.iter().enumerate() {
            let b = if mm[i] > 0 {
                q.coeffs[i].clone()
            } else {
                -&q.coeffs[i]
            };
            if !(b.lo() > &Dyadic::from_int(lo.clone()) && b.hi() < &Dyadic::from_int(hi.clone())) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Lexicographic enumeration, refused above `cap` points.
    pub fn enumerate(&self, cap: u64) -> Result<BoxIter<'_>> {
        if self.count > BigInt::from(cap) {
            return Err(Error::CapExceeded {
                count: self.count.to_string(),
                cap,
            });
        }
        Ok(self.iter())
    }

    /// Lexicographic iterator with no cap.
    pub fn iter(&self) -> BoxIter<'_> {
        BoxIter {
            bx: self,
            current: if self.is_empty() {
                None
            } else {
                Some(self.intervals.iter().map(|(lo, _)| lo.clone()).collect())
            },
        }
    }

    /// Split the first free axis into at most `parts` contiguous slabs; the
    /// slabs enumerate in the same order as the whole box.
    pub fn split(&self, parts: usize) -> Vec<CoeffBox> {
        if self.is_empty() || self.intervals.is_empty() || parts <= 1 {
            return vec![self.clone()];
        }
        let (lo, hi) = self.intervals[0].clone();
        let len: BigInt = &hi - &lo + 1;
        let parts_b = BigInt::from(parts);
        let sum: BigInt = len + &parts_b - 1;
        let step = std::cmp::max(sum / &parts_b, BigInt::one());
        let mut out = Vec::new();
        let mut start = lo;
        while start <= hi {
            let last: BigInt = &start + &step - 1;
            let end = std::cmp::min(last, hi.clone());
            let mut b = self.clone();
            b.intervals[0] = (start.clone(), end.clone());
            b.count = count_points(&b.intervals);
            out.push(b);
            start = end + 1;
        }
        out
    }

    /// `k` independent uniform points, deterministic in `seed`.
    pub fn sample(&self, k: usize, seed: u64) -> Result<Vec<IntPolynomial>> {
        if self.is_empty() {
            return Err(Error::EmptyBox);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok((0..k)
            .map(|_| {
                let free: Vec<BigInt> = self
                    .intervals
                    .iter()
                    .map(|(lo, hi)| lo + uniform_below(&mut rng, &(hi - lo + 1)))
                    .collect();
                self.polynomial(&free)
            })
            .collect())
    }

    pub fn to_record(&self) -> BoxRecord {
        let n = self.v.n();
        let mut fixed = std::collections::BTreeMap::new();
        for (k, c) in &self.fixed {
            fixed.insert(format!("a{k}"), c.to_string());
        }
        if self.group() == Group::Sp {
            for k in 1..n {
                fixed.insert(format!("a{}", n + k), format!("=a{}", n - k));
            }
        }
        BoxRecord {
            group: self.group(),
            n,
            v: self.v.to_strings(),
            m: self.m.to_string(),
            t: format_rational(&self.t),
            eps: format_rational(&self.eps),
            intervals: self
                .intervals
                .iter()
                .map(|(a, b)| [a.to_string(), b.to_string()])
                .collect(),
            fixed,
            degenerate: self.degenerate,
            count: self.count.to_string(),
        }
    }
}

/// Smallest `eps'` such that the Vieta coefficients of `p` satisfy the
/// box inequalities with width `eps'`.
pub fn relative_deviation(
    v: &Direction,
    m: &SignPattern,
    t: &BigRational,
    p: &IntPolynomial,
) -> f64 {
    let a = p.vieta();
    let w = v.partial_sums();
    let mm = m.prefix_products();
    let mut worst: f64 = 0.0;
    for i in 0..v.n() {
        let am = &a[i] * BigInt::from(mm[i]);
        if !am.is_positive() {
            return f64::INFINITY;
        }
        let la = Dyadic::from_int(am).ln_abs_f64();
        let x = rational_to_f64(&(&w[i] * t));
        worst = worst.max(((la - x).exp() - 1.0).abs());
    }
    worst
}

/// Uniform integer in `[0, bound)`.
fn uniform_below(rng: &mut ChaCha8Rng, bound: &BigInt) -> BigInt {
    if let Some(b) = bound.to_u64() {
        return BigInt::from(rng.random_range(0..b));
    }
    let bits = bound.bits();
    let words = bits.div_ceil(64) as usize;
    let excess = words as u64 * 64 - bits;
    loop {
        let mut x = BigInt::zero();
        for _ in 0..words {
            x = (x << 64u32) + BigInt::from(rng.random::<u64>());
        }
        x >>= excess;
        if &x < bound {
            return x;
        }
    }
}

/// Iterator over the integer points of a box, as polynomials.
pub struct BoxIter<'a> {
    bx: &'a CoeffBox,
    current: Option<Vec<BigInt>>,
}

impl Iterator for BoxIter<'_> {
    type Item = IntPolynomial;

    fn next(&mut self) -> Option<IntPolynomial> {
        let cur = self.current.as_mut()?;
        let out = self.bx.polynomial(cur);
        let mut k = cur.len();
        loop {
            if k == 0 {
                self.current = None;
                break;
            }
            k -= 1;
            if cur[k] < self.bx.intervals[k].1 {
                cur[k] += 1;
                break;
            }
            cur[k] = self.bx.intervals[k].0.clone();
        }
        Some(out)
    }
}

/// Serialized box; integers as decimal strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxRecord {
    pub group: Group,
    pub n: usize,
    pub v: Vec<String>,
    pub m: String,
    #[serde(rename = "T")]
    pub t: String,
    pub eps: String,
    pub intervals: Vec<[String; 2]>,
    pub fixed: std::collections::BTreeMap<String, String>,
    pub degenerate: bool,
    pub count: String,
}

/// Smallest grid value from which on the model polynomial stays strictly
/// inside the box.
pub fn empirical_t1(
    v: &Direction,
    m: &SignPattern,
    eps: &BigRational,
    grid: &[BigRational],
    precision: u64,
) -> Result<Option<BigRational>> {
    let mut t1 = None;
    for t in grid.iter().rev() {
        let bx = coeff_box(v, m, t, eps)?;
        if bx.model_inside(precision)? {
            t1 = Some(t.clone());
        } else {
            break;
        }
    }
    Ok(t1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn sl(c: &[i64]) -> Direction {
        Direction::from_ints(Group::Sl, c).unwrap()
    }

    fn sp(c: &[i64]) -> Direction {
        Direction::from_ints(Group::Sp, c).unwrap()
    }

    fn pat(s: &str) -> SignPattern {
        SignPattern::parse(s).unwrap()
    }

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn sl2_box_endpoints() {
        let bx = coeff_box_sl(&sl(&[1, -1]), &pat("+,+"), &int(5), &ratio(1, 10)).unwrap();
        assert_eq!(bx.intervals(), &[(b(134), b(163))]);
        assert_eq!(bx.fixed(), &[(2, b(1))]);
        assert_eq!(bx.exact_count(), &b(30));
        let neg = coeff_box_sl(&sl(&[1, -1]), &pat("-,-"), &int(5), &ratio(1, 10)).unwrap();
        assert_eq!(neg.intervals(), &[(b(-163), b(-134))]);
        assert_eq!(neg.fixed(), &[(2, b(1))]);
    }

    #[test]
    fn sp_boxes_fold() {
        let bx = coeff_box_sp(&sp(&[1]), &pat("+"), &int(5), &ratio(1, 10)).unwrap();
        assert_eq!(bx.intervals(), &[(b(134), b(163))]);
        let p = bx.iter().next().unwrap();
        assert_eq!(p, IntPolynomial::from_i64_descending(&[1, -134, 1]));
        let bx = coeff_box_sp(&sp(&[2, 1]), &pat("+,+"), &int(3), &ratio(1, 10)).unwrap();
        let e6 = 403.428_793_492_735_1_f64;
        let e9 = 8103.083_927_575_384_f64;
        let want = [
            ((0.9 * e6).ceil() as i64, (1.1 * e6).floor() as i64),
            ((0.9 * e9).ceil() as i64, (1.1 * e9).floor() as i64),
        ];
        for (got, w) in bx.intervals().iter().zip(want) {
            assert_eq!(got, &(b(w.0), b(w.1)));
        }
        let q = bx.iter().next().unwrap();
        let a = q.vieta();
        assert_eq!(a[2], a[0]);
        assert_eq!(a[3], b(1));
        assert!(q.is_palindromic());
    }

    #[test]
    fn empty_box_counts_zero() {
        let bx = coeff_box_sl(&sl(&[1, -1]), &pat("+,+"), &ratio(1, 100), &ratio(1, 2)).unwrap();
        // (0.5 e^{0.01}, 1.5 e^{0.01}) holds the single integer 1
        assert_eq!(bx.exact_count(), &b(1));
        let bx = coeff_box_sl(&sl(&[1, -1]), &pat("+,+"), &ratio(1, 2), &ratio(1, 10)).unwrap();
        // 0.9 e^{0.5} = 1.48.., 1.1 e^{0.5} = 1.81..
        assert!(bx.is_empty());
        assert_eq!(bx.iter().count(), 0);
        assert!(bx.sample(3, 1).is_err());
    }

    #[test]
    fn enumeration_matches_count_and_contains() {
        let bx = coeff_box_sl(&sl(&[1, 0, -1]), &pat("+,-,-"), &int(3), &ratio(1, 5)).unwrap();
        let all: Vec<_> = bx.enumerate(1000).unwrap().collect();
        assert_eq!(BigInt::from(all.len()), *bx.exact_count());
        for p in &all {
            assert!(bx.contains(p));
            assert!(bx.satisfies_inequalities(p).unwrap());
            assert_eq!(p.constant_term(), b(-1));
        }
        let pieces: Vec<_> = bx.split(4).iter().flat_map(|s| s.iter().collect::<Vec<_>>()).collect();
        assert_eq!(pieces, all);
        assert!(matches!(bx.enumerate(1), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn model_polynomial_examples() {
        let q = model_polynomial(&sl(&[1, -1]), &pat("+,+"), &int(0), 64).unwrap();
        assert_eq!(q.coeffs_f64(), vec![2.0, 1.0]);
        let q = model_polynomial(&sl(&[1, -1]), &pat("+,+"), &int(1), 128).unwrap();
        let e = std::f64::consts::E;
        assert!((q.coeffs_f64()[0] - (e + 1.0 / e)).abs() < 1e-14);
        assert!((q.coeffs_f64()[1] - 1.0).abs() < 1e-15);
        let q = model_polynomial(&sl(&[1, 0, -1]), &pat("+,-,+"), &int(1), 128).unwrap();
        assert!((q.coeffs_f64()[2] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn sampling_is_seeded() {
        let bx = coeff_box_sp(&sp(&[2, 1]), &pat("+,+"), &int(3), &ratio(1, 10)).unwrap();
        let a = bx.sample(50, 9).unwrap();
        assert_eq!(a, bx.sample(50, 9).unwrap());
        assert_ne!(a, bx.sample(50, 10).unwrap());
        assert!(a.iter().all(|p| bx.contains(p)));
    }

    #[test]
    fn record_uses_strings() {
        let bx = coeff_box_sl(&sl(&[1, -1]), &pat("+,+"), &int(5), &ratio(1, 10)).unwrap();
        let r = bx.to_record();
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("[\"134\",\"163\"]"));
        assert!(s.contains("\"T\":\"5\""));
        let back: BoxRecord = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn model_eventually_inside() {
        let grid: Vec<_> = (2..=8).map(int).collect();
        let t1 = empirical_t1(&sl(&[1, 0, -1]), &pat("+,+,+"), &ratio(1, 10), &grid, 64)
            .unwrap()
            .unwrap();
        assert!(t1 <= int(8));
    }
}
