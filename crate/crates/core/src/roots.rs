//! Certified real roots, disc membership and discriminants.

use std::cmp::Ordering;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::boxes::{coeff_box, model_roots, CoeffBox};
use crate::chamber::{check_pattern, Direction, Group, SignPattern};
use crate::dyadic::{exp_rational, Dyadic, Interval, Round};
use crate::error::{Error, Result};
use crate::par;
use crate::poly::IntPolynomial;
use crate::rational::{format_rational, rational_to_f64};

pub const PRECISION_START: u64 = 64;
pub const PRECISION_CAP: u64 = 4096;

/// `c_n = 10 (n - 1) 2^{n-1}`.
pub fn c_n(n: usize) -> u64 {
    assert!(n >= 1);
    10 * (n as u64 - 1) << (n - 1)
}

/// Expected location of a root, as a sign and `ln |x|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hint {
    pub sign: i8,
    pub ln_abs: f64,
}

impl Hint {
    fn key(&self) -> f64 {
        // monotone in the value sign * e^{ln_abs}
        if self.sign > 0 {
            self.ln_abs
        } else {
            -self.ln_abs - 1e300
        }
    }
}

/// Hints `m_i e^{T v_i}` over the full chamber vector.
pub fn model_hints(v: &Direction, m: &SignPattern, t: &BigRational) -> Vec<Hint> {
    v.full_coords()
        .iter()
        .zip(m.full(v.group()))
        .map(|(c, s)| Hint {
            sign: s,
            ln_abs: rational_to_f64(&(c * t)),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
struct Bracket {
    lo: Dyadic,
    hi: Dyadic,
    /// Sign of the polynomial at `lo`; zero marks an exact root `lo == hi`.
    sign_lo: i32,
}

impl Bracket {
    fn point(x: Dyadic) -> Self {
        Bracket {
            lo: x.clone(),
            hi: x,
            sign_lo: 0,
        }
    }

    fn is_point(&self) -> bool {
        self.sign_lo == 0
    }

    fn bisect(&mut self, p: &IntPolynomial) {
        if self.is_point() {
            return;
        }
        let m = Dyadic::midpoint(&self.lo, &self.hi);
        let s = p.sign_at(&m);
        if s == 0 {
            *self = Bracket::point(m);
        } else if s == self.sign_lo {
            self.lo = m;
        } else {
            self.hi = m;
        }
    }

    fn compare(&self, p: &IntPolynomial, q: &Dyadic) -> Ordering {
        if self.is_point() {
            return self.lo.cmp(q);
        }
        if q <= &self.lo {
            return Ordering::Greater;
        }
        if q >= &self.hi {
            return Ordering::Less;
        }
        match p.sign_at(q) {
            0 => Ordering::Equal,
            s if s == self.sign_lo => Ordering::Greater,
            _ => Ordering::Less,
        }
    }

    fn compare_rational(&self, p: &IntPolynomial, q: &BigRational) -> Ordering {
        let lo = self.lo.to_rational();
        if self.is_point() {
            return lo.cmp(q);
        }
        if q <= &lo {
            return Ordering::Greater;
        }
        if q >= &self.hi.to_rational() {
            return Ordering::Less;
        }
        match p.sign_at_rational(q) {
            0 => Ordering::Equal,
            s if s == self.sign_lo => Ordering::Greater,
            _ => Ordering::Less,
        }
    }

    fn interval(&self) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone())
    }
}

#[derive(Clone, Debug)]
struct Located {
    factor: usize,
    multiplicity: usize,
    br: Bracket,
}

/// Certified real-root enclosures, ordered by decreasing modulus.
#[derive(Clone, Debug)]
pub struct RootCluster {
    factors: Vec<IntPolynomial>,
    roots: Vec<Located>,
    degree: usize,
    certified: bool,
    distinct_moduli: bool,
}

impl RootCluster {
    /// Number of distinct real roots found.
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// True when every root is real and enclosed.
    pub fn certified(&self) -> bool {
        self.certified
    }

    /// True when the moduli were certified pairwise distinct.
    pub fn distinct_moduli(&self) -> bool {
        self.distinct_moduli
    }

    pub fn enclosures(&self) -> Vec<Interval> {
        self.roots.iter().map(|r| r.br.interval()).collect()
    }

    pub fn enclosure(&self, i: usize) -> Interval {
        self.roots[i].br.interval()
    }

    /// Signs of the roots (zero for a root at the origin).
    pub fn signs(&self) -> Vec<i8> {
        (0..self.len())
            .map(|i| match self.compare(i, &Dyadic::zero()) {
                Ordering::Greater => 1,
                Ordering::Less => -1,
                Ordering::Equal => 0,
            })
            .collect()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.roots.iter().map(|r| r.multiplicity).collect()
    }

    /// Exact comparison of root `i` with a dyadic number.
    pub fn compare(&self, i: usize, q: &Dyadic) -> Ordering {
        let r = &self.roots[i];
        r.br.compare(&self.factors[r.factor], q)
    }

    /// Exact comparison of root `i` with a rational number.
    pub fn compare_rational(&self, i: usize, q: &BigRational) -> Ordering {
        let r = &self.roots[i];
        r.br.compare_rational(&self.factors[r.factor], q)
    }

    fn bisect(&mut self, i: usize) {
        let f = self.roots[i].factor;
        let p = &self.factors[f];
        self.roots[i].br.bisect(p);
    }

    /// Refine root `i` until its enclosure excludes zero (unless the root is
    /// zero) and has relative width at most `2^{-bits}`.
    pub fn refine(&mut self, i: usize, bits: u64) {
        let tol = (-(bits as f64)).exp2();
        loop {
            let br = &self.roots[i].br;
            if br.is_point() {
                return;
            }
            let iv = br.interval();
            if let Some(w) = iv.relative_width_f64() {
                if w <= tol {
                    return;
                }
            }
            self.bisect(i);
        }
    }

    pub fn refine_all(&mut self, bits: u64) {
        for i in 0..self.len() {
            self.refine(i, bits);
        }
    }

    pub fn values_f64(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.br.interval().mid_f64()).collect()
    }

    /// Enclosure of `ln |x_i|`.
    pub fn log_abs(&mut self, i: usize, prec: u64) -> Result<Interval> {
        self.refine(i, prec + 8);
        let iv = self.enclosure(i).abs();
        if iv.lo().is_zero() {
            return Err(Error::InvalidPolynomial("root at zero has no logarithm".into()));
        }
        Ok(iv.ln(prec + 8).round_out(prec))
    }

    fn order_by_modulus(&mut self) {
        const MAX_ROUNDS: usize = 2000;
        let mut distinct = true;
        for round in 0..=MAX_ROUNDS {
            let abs: Vec<Interval> = self.roots.iter().map(|r| r.br.interval().abs()).collect();
            let mut overlapping = vec![false; abs.len()];
            let mut any = false;
            let mut tie = false;
            for i in 0..abs.len() {
                for j in i + 1..abs.len() {
                    if !abs[i].disjoint(&abs[j]) {
                        if self.roots[i].br.is_point() && self.roots[j].br.is_point() {
                            tie = true;
                            continue;
                        }
                        overlapping[i] = true;
                        overlapping[j] = true;
                        any = true;
                    }
                }
            }
            if !any {
                distinct = !tie;
                break;
            }
            if round == MAX_ROUNDS {
                distinct = false;
                break;
            }
            for (i, o) in overlapping.into_iter().enumerate() {
                if o {
                    self.bisect(i);
                }
            }
        }
        self.roots.sort_by(|a, b| {
            let ma = a.br.interval().abs();
            let mb = b.br.interval().abs();
            mb.hi()
                .cmp(ma.hi())
                .then_with(|| b.br.hi.cmp(&a.br.hi))
        });
        self.distinct_moduli = distinct;
    }
}

fn sign_of_content_div(p: IntPolynomial) -> IntPolynomial {
    // divide by the positive content, keeping the sign
    let c = p.content();
    if c.is_zero() || c.is_one() {
        return p;
    }
    IntPolynomial::from_ascending(p.coeffs().iter().map(|x| x / &c).collect())
}

/// Sturm sequence of a squarefree polynomial.
pub fn sturm_sequence(p: &IntPolynomial) -> Vec<IntPolynomial> {
    let mut seq = vec![p.clone()];
    let d = p.derivative();
    if d.is_zero() {
        return seq;
    }
    seq.push(sign_of_content_div(d));
    loop {
        let k = seq.len();
        let (a, b) = (&seq[k - 2], &seq[k - 1]);
        if b.degree() == 0 {
            break;
        }
        let delta = a.degree() - b.degree();
        let r = a.pseudo_rem(b);
        if r.is_zero() {
            break;
        }
        let flip = b.leading().is_negative() && (delta + 1) % 2 == 1;
        let next = if flip { r } else { r.neg() };
        seq.push(sign_of_content_div(next));
    }
    seq
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn variations_at(seq: &[IntPolynomial], x: &Dyadic) -> usize {
    variations(seq.iter().map(|q| q.sign_at(x)))
}

fn variations_at_infinity(seq: &[IntPolynomial], positive: bool) -> usize {
    variations(seq.iter().map(|q| {
        let s = if q.leading().is_positive() { 1 } else { -1 };
        if !positive && q.degree() % 2 == 1 {
            -s
        } else {
            s
        }
    }))
}

/// Number of distinct real roots of a squarefree polynomial.
pub fn count_real_roots(p: &IntPolynomial) -> usize {
    let seq = sturm_sequence(p);
    variations_at_infinity(&seq, false) - variations_at_infinity(&seq, true)
}

fn root_bound(p: &IntPolynomial) -> Dyadic {
    Dyadic::new(BigInt::one(), p.root_bound_log2())
}

fn sturm_isolate(p: &IntPolynomial) -> Vec<Bracket> {
    let seq = sturm_sequence(p);
    let b = root_bound(p);
    let a = -&b;
    let mut out = Vec::new();
    let mut stack = vec![(a.clone(), b.clone(), variations_at(&seq, &a), variations_at(&seq, &b))];
    while let Some((a, b, va, vb)) = stack.pop() {
        let count = va - vb;
        if count == 0 {
            continue;
        }
        if count == 1 {
            out.push(Bracket {
                sign_lo: p.sign_at(&a),
                lo: a,
                hi: b,
            });
            continue;
        }
        let m = Dyadic::midpoint(&a, &b);
        if p.sign_at(&m) != 0 {
            let vm = variations_at(&seq, &m);
            stack.push((a, m.clone(), va, vm));
            stack.push((m, b, vm, vb));
            continue;
        }
        // exact root at the midpoint: cut a small window around it
        out.push(Bracket::point(m.clone()));
        let mut delta = (&b - &a).shl(-2);
        loop {
            let l = &m - &delta;
            let r = &m + &delta;
            if p.sign_at(&l) != 0 && p.sign_at(&r) != 0 {
                let vl = variations_at(&seq, &l);
                let vr = variations_at(&seq, &r);
                if vl - vr == 1 {
                    stack.push((a, l, va, vl));
                    stack.push((r, b, vr, vb));
                    break;
                }
            }
            delta = delta.shl(-1);
        }
    }
    out
}

fn approx_exp(sign: i8, ln: f64) -> Dyadic {
    let mag = if ln.abs() < 700.0 {
        Dyadic::from_f64(ln.exp())
            .map(|d| d.round(32, Round::Floor))
            .unwrap_or_else(|| Dyadic::new(BigInt::one(), (ln / std::f64::consts::LN_2).round() as i64))
    } else {
        Dyadic::new(BigInt::one(), (ln / std::f64::consts::LN_2).round() as i64)
    };
    if sign < 0 {
        -mag
    } else {
        mag
    }
}

/// Brackets from hints: the line is cut between consecutive hints and each
/// piece must show a sign change. With `d` pieces for degree `d` every piece
/// then holds exactly one root.
fn hint_isolate(p: &IntPolynomial, hints: &[Hint]) -> Option<Vec<Bracket>> {
    let d = p.degree();
    if hints.len() != d || d == 0 || hints.iter().any(|h| !h.ln_abs.is_finite()) {
        return None;
    }
    let mut h = hints.to_vec();
    h.sort_by(|a, b| b.key().total_cmp(&a.key()));
    let bound = root_bound(p);
    let mut cuts = vec![bound.clone()];
    for w in h.windows(2) {
        let (a, b) = (w[0], w[1]);
        let cut = if a.sign == b.sign {
            if a.ln_abs == b.ln_abs {
                return None;
            }
            approx_exp(a.sign, 0.5 * (a.ln_abs + b.ln_abs))
        } else {
            Dyadic::zero()
        };
        cuts.push(cut);
    }
    cuts.push(-&bound);
    let signs: Vec<i32> = cuts.iter().map(|c| p.sign_at(c)).collect();
    if signs.contains(&0) || cuts.windows(2).any(|w| w[0] <= w[1]) {
        return None;
    }
    let mut out = Vec::with_capacity(d);
    for k in 0..d {
        if signs[k] == signs[k + 1] {
            return None;
        }
        out.push(Bracket {
            lo: cuts[k + 1].clone(),
            hi: cuts[k].clone(),
            sign_lo: signs[k + 1],
        });
    }
    Some(out)
}

fn isolate_unordered(p: &IntPolynomial, hints: &[Hint]) -> Result<RootCluster> {
    if p.degree() == 0 {
        return Err(Error::InvalidPolynomial("constant polynomial".into()));
    }
    let degree = p.degree();
    if let Some(brs) = hint_isolate(p, hints) {
        return Ok(RootCluster {
            factors: vec![p.clone()],
            roots: brs
                .into_iter()
                .map(|br| Located {
                    factor: 0,
                    multiplicity: 1,
                    br,
                })
                .collect(),
            degree,
            certified: true,
            distinct_moduli: false,
        });
    }
    if !p.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    let brs = sturm_isolate(p);
    let certified = brs.len() == degree;
    Ok(RootCluster {
        factors: vec![p.clone()],
        roots: brs
            .into_iter()
            .map(|br| Located {
                factor: 0,
                multiplicity: 1,
                br,
            })
            .collect(),
        degree,
        certified,
        distinct_moduli: false,
    })
}

/// Roots of any nonzero polynomial, with multiplicities, via its
/// squarefree decomposition.
fn isolate_with_multiplicity(p: &IntPolynomial, hints: &[Hint]) -> Result<RootCluster> {
    match isolate_unordered(p, hints) {
        Err(Error::NotSquarefree) => {}
        other => return other,
    }
    let mut factors = Vec::new();
    let mut roots = Vec::new();
    let mut real = 0;
    for (q, k) in p.squarefree_decomposition() {
        let idx = factors.len();
        let brs = sturm_isolate(&q);
        real += brs.len() * k;
        roots.extend(brs.into_iter().map(|br| Located {
            factor: idx,
            multiplicity: k,
            br,
        }));
        factors.push(q);
    }
    Ok(RootCluster {
        factors,
        roots,
        degree: p.degree(),
        certified: real == p.degree(),
        distinct_moduli: false,
    })
}

/// Certified isolation of the real roots of a squarefree polynomial,
/// refined to relative width `2^{-precision}` and ordered by decreasing
/// modulus. Hints seed the brackets; Sturm sequences are the fallback.
pub fn isolate_real_roots(p: &IntPolynomial, hints: &[Hint], precision: u64) -> Result<RootCluster> {
    let mut c = isolate_unordered(p, hints)?;
    c.order_by_modulus();
    if precision > 0 {
        c.refine_all(precision);
        c.order_by_modulus();
    }
    Ok(c)
}

/// Three-valued membership verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Member,
    Nonmember,
    Uncertain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tri {
    Yes,
    No,
    Unknown,
}

impl Tri {
    fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::No, _) | (_, Tri::No) => Tri::No,
            (Tri::Yes, Tri::Yes) => Tri::Yes,
            _ => Tri::Unknown,
        }
    }
}

/// A real segment `e^{x} [lo, hi]`.
#[derive(Clone, Debug)]
struct Segment {
    exponent: BigRational,
    lo: BigRational,
    hi: BigRational,
}

#[derive(Clone, Debug)]
enum Bound {
    Exact(BigRational),
    Approx(Dyadic, Dyadic),
}

fn bound(x: &BigRational, f: &BigRational, prec: u64) -> Bound {
    if x.is_zero() || f.is_zero() {
        return Bound::Exact(f.clone());
    }
    let e = exp_rational(x, prec).mul_rational(f, prec);
    Bound::Approx(e.lo().clone(), e.hi().clone())
}

const LEVELS: usize = 7;

/// The discs of `Q_T(v, m; eps)` or `Q*_T(v, m; eps)`, restricted to the
/// real line, with cached endpoint enclosures per precision level.
#[derive(Debug)]
pub struct MembershipTarget {
    group: Group,
    segments: Vec<Segment>,
    hints: Vec<Hint>,
    degree: usize,
    cache: Vec<OnceLock<Vec<(Bound, Bound)>>>,
}

impl MembershipTarget {
    /// Discs `|x - m_i e^{T v_i}| <= r e^{T v_i}` for an `SL` direction.
    pub fn sl(v: &Direction, m: &SignPattern, t: &BigRational, radius: &BigRational) -> Result<Self> {
        check_pattern(v, m, false)?;
        if v.group() != Group::Sl {
            return Err(Error::InvalidDirection("expected an SL direction".into()));
        }
        if !radius.is_positive() {
            return Err(Error::InvalidParameter("radius must be positive".into()));
        }
        let segments = v
            .coords()
            .iter()
            .zip(m.signs())
            .map(|(c, &s)| {
                let s = BigRational::from_integer(BigInt::from(s));
                Segment {
                    exponent: c * t,
                    lo: &s - radius,
                    hi: &s + radius,
                }
            })
            .collect();
        Ok(Self::build(Group::Sl, segments, model_hints(v, m, t), v.n()))
    }

    /// Reciprocal discs for an `Sp` direction:
    /// `|x_i - m_i e^{T v_i}| <= eps e^{T v_i}` and
    /// `|x_i^{-1} - m_i e^{-T v_i}| <= eps e^{-T v_i}`. Both conditions on a
    /// root `x` amount to `x in m_i e^{T v_i} [1/(1+eps), 1+eps]`. The `x_i`
    /// are taken among the roots of modulus above one.
    pub fn sp(v: &Direction, m: &SignPattern, t: &BigRational, eps: &BigRational) -> Result<Self> {
        check_pattern(v, m, false)?;
        if v.group() != Group::Sp {
            return Err(Error::InvalidDirection("expected an Sp direction".into()));
        }
        if !eps.is_positive() || eps >= &BigRational::one() {
            return Err(Error::InvalidEpsilon(format_rational(eps)));
        }
        let one = BigRational::one();
        let up = &one + eps;
        let down = up.recip();
        let segments = v
            .coords()
            .iter()
            .zip(m.signs())
            .map(|(c, &s)| {
                let (lo, hi) = if s > 0 {
                    (down.clone(), up.clone())
                } else {
                    (-up.clone(), -down.clone())
                };
                Segment {
                    exponent: c * t,
                    lo,
                    hi,
                }
            })
            .collect();
        Ok(Self::build(Group::Sp, segments, model_hints(v, m, t), 2 * v.n()))
    }

    /// The membership target of the definitions: radius `c_n eps` for `SL`,
    /// plain `eps` for `Sp`.
    pub fn for_q(v: &Direction, m: &SignPattern, t: &BigRational, eps: &BigRational) -> Result<Self> {
        match v.group() {
            Group::Sl => {
                let r = eps * BigRational::from_integer(BigInt::from(c_n(v.n())));
                Self::sl(v, m, t, &r)
            }
            Group::Sp => Self::sp(v, m, t, eps),
        }
    }

    fn build(group: Group, segments: Vec<Segment>, hints: Vec<Hint>, degree: usize) -> Self {
        MembershipTarget {
            group,
            segments,
            hints,
            degree,
            cache: (0..LEVELS).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn hints(&self) -> &[Hint] {
        &self.hints
    }

    fn bounds(&self, level: usize) -> &[(Bound, Bound)] {
        let prec = PRECISION_START << level;
        self.cache[level].get_or_init(|| {
            self.segments
                .iter()
                .map(|s| (bound(&s.exponent, &s.lo, prec), bound(&s.exponent, &s.hi, prec)))
                .collect()
        })
    }

    /// Decide membership of `p` on the precision ladder.
    pub fn check(&self, p: &IntPolynomial) -> Result<Membership> {
        if p.degree() != self.degree || !p.is_monic() {
            return Ok(Membership::Nonmember);
        }
        let cluster = isolate_with_multiplicity(p, &self.hints)?;
        // slots: real roots with multiplicity
        let mut slots = Vec::new();
        for (i, r) in cluster.roots.iter().enumerate() {
            for _ in 0..r.multiplicity {
                slots.push(i);
            }
        }
        let need_all = self.group == Group::Sl;
        if need_all && slots.len() != self.segments.len() {
            return Ok(Membership::Nonmember);
        }
        let outside_unit: Vec<Tri> = match self.group {
            Group::Sl => vec![Tri::Yes; cluster.len()],
            Group::Sp => (0..cluster.len())
                .map(|i| {
                    let one = Dyadic::one();
                    let above = cluster.compare(i, &one) == Ordering::Greater;
                    let below = cluster.compare(i, &-&one) == Ordering::Less;
                    if above || below {
                        Tri::Yes
                    } else {
                        Tri::No
                    }
                })
                .collect(),
        };
        for level in 0..LEVELS {
            let bounds = self.bounds(level);
            let edges: Vec<Vec<Tri>> = bounds
                .iter()
                .map(|(lo, hi)| {
                    (0..cluster.len())
                        .map(|i| {
                            outside_unit[i]
                                .and(root_at_least(&cluster, i, lo))
                                .and(root_at_most(&cluster, i, hi))
                        })
                        .collect()
                })
                .collect();
            let sure = matching_size(&edges, &slots, |t| t == Tri::Yes);
            if sure == self.segments.len() {
                return Ok(Membership::Member);
            }
            let possible = matching_size(&edges, &slots, |t| t != Tri::No);
            if possible < self.segments.len() {
                return Ok(Membership::Nonmember);
            }
        }
        Ok(Membership::Uncertain)
    }
}

fn root_at_least(c: &RootCluster, i: usize, b: &Bound) -> Tri {
    match b {
        Bound::Exact(q) => {
            if c.compare_rational(i, q) == Ordering::Less {
                Tri::No
            } else {
                Tri::Yes
            }
        }
        Bound::Approx(lo, hi) => {
            if c.compare(i, hi) != Ordering::Less {
                Tri::Yes
            } else if c.compare(i, lo) == Ordering::Less {
                Tri::No
            } else {
                Tri::Unknown
            }
        }
    }
}

fn root_at_most(c: &RootCluster, i: usize, b: &Bound) -> Tri {
    match b {
        Bound::Exact(q) => {
            if c.compare_rational(i, q) == Ordering::Greater {
                Tri::No
            } else {
                Tri::Yes
            }
        }
        Bound::Approx(lo, hi) => {
            if c.compare(i, lo) != Ordering::Greater {
                Tri::Yes
            } else if c.compare(i, hi) == Ordering::Greater {
                Tri::No
            } else {
                Tri::Unknown
            }
        }
    }
}

/// Maximum matching of discs into root slots (augmenting paths).
fn matching_size(edges: &[Vec<Tri>], slots: &[usize], ok: impl Fn(Tri) -> bool + Copy) -> usize {
    let mut owner: Vec<Option<usize>> = vec![None; slots.len()];
    fn augment(
        d: usize,
        edges: &[Vec<Tri>],
        slots: &[usize],
        owner: &mut [Option<usize>],
        seen: &mut [bool],
        ok: impl Fn(Tri) -> bool + Copy,
    ) -> bool {
        for s in 0..slots.len() {
            if seen[s] || !ok(edges[d][slots[s]]) {
                continue;
            }
            seen[s] = true;
            let free = match owner[s] {
                None => true,
                Some(o) => augment(o, edges, slots, owner, seen, ok),
            };
            if free {
                owner[s] = Some(d);
                return true;
            }
        }
        false
    }
    let mut size = 0;
    for d in 0..edges.len() {
        let mut seen = vec![false; slots.len()];
        if augment(d, edges, slots, &mut owner, &mut seen, ok) {
            size += 1;
        }
    }
    size
}

/// Membership of `p` in `Q_T(v, m; eps)` (radius `c_n eps`) or in
/// `Q*_T(v, m; eps)`.
pub fn check_q_membership(
    p: &IntPolynomial,
    v: &Direction,
    m: &SignPattern,
    t: &BigRational,
    eps: &BigRational,
) -> Result<Membership> {
    MembershipTarget::for_q(v, m, t, eps)?.check(p)
}

pub fn discriminant(p: &IntPolynomial) -> BigInt {
    p.discriminant()
}

/// `prod_{i<j} (x_i - x_j)^2` from root enclosures.
pub fn discriminant_from_roots(c: &RootCluster) -> Interval {
    let e = c.enclosures();
    let mut acc = Interval::from_int(1);
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            acc = &acc * &(&e[i] - &e[j]).square();
        }
    }
    acc
}

/// `(1/T) log Disc(q_{Tv,m})` and its square-root form.
#[derive(Clone, Debug)]
pub struct DiscGrowth {
    pub value: Interval,
    pub precision: u64,
}

impl DiscGrowth {
    pub fn value_f64(&self) -> f64 {
        self.value.mid_f64()
    }

    /// `(1/(2T)) log Disc`.
    pub fn sqrt_form_f64(&self) -> f64 {
        0.5 * self.value.mid_f64()
    }
}

pub fn disc_growth(
    v: &Direction,
    m: &SignPattern,
    t: &BigRational,
    precision: u64,
) -> Result<DiscGrowth> {
    check_pattern(v, m, false)?;
    if !t.is_positive() {
        return Err(Error::InvalidParameter("T must be positive".into()));
    }
    let mut prec = precision.max(32);
    loop {
        let roots = model_roots(v, m, t, prec + 32);
        let mut acc = Interval::from_int(1);
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                acc = (&acc * &(&roots[i] - &roots[j]).square()).round_out(prec + 32);
            }
        }
        if acc.lo().signum() > 0 {
            let value = acc.ln(prec + 16).mul_rational(&t.recip(), prec + 16);
            if value.relative_width_f64().is_some_and(|w| w < (-(precision as f64) / 2.0).exp2())
                || value.is_point()
            {
                return Ok(DiscGrowth {
                    value,
                    precision: prec,
                });
            }
        }
        prec *= 2;
        if prec > 1 << 16 {
            return Err(Error::PrecisionExhausted("discriminant growth".into()));
        }
    }
}

/// The largest `eps` with
/// `3(n-1)(1 + c_n eps)^{n-1} < c_n (1/2 - c_n eps)^{n-1}` and
/// `eps < 1/(4 c_n)`.
#[derive(Clone, Debug, Serialize)]
pub struct Eps0 {
    pub n: usize,
    pub c_n: u64,
    pub inequality_bound: f64,
    pub disjointness_bound: f64,
    pub eps0: f64,
}

pub fn rouche_eps0(n: usize) -> Result<Eps0> {
    if n < 2 {
        return Err(Error::InvalidParameter("n must be at least 2".into()));
    }
    let c = c_n(n) as f64;
    let k = (n - 1) as i32;
    let f = |e: f64| c * (0.5 - c * e).powi(k) - 3.0 * (n - 1) as f64 * (1.0 + c * e).powi(k);
    let (mut lo, mut hi) = (0.0, 0.5 / c);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let disjoint = 0.25 / c;
    Ok(Eps0 {
        n,
        c_n: c_n(n),
        inequality_bound: lo,
        disjointness_bound: disjoint,
        eps0: lo.min(disjoint),
    })
}

/// Membership census of one box.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipCensus {
    pub t: String,
    pub total: u64,
    pub member: u64,
    pub nonmember: u64,
    pub uncertain: u64,
}

impl MembershipCensus {
    pub fn all_members(&self) -> bool {
        self.total > 0 && self.member == self.total
    }
}

/// Check every polynomial of a box against a target, in parallel slabs.
pub fn box_membership(bx: &CoeffBox, target: &MembershipTarget, cap: u64) -> Result<MembershipCensus> {
    let _ = bx.enumerate(cap)?;
    let slabs = bx.split(4 * par::workers().max(1));
    let parts = par::map(&slabs, |s| -> Result<[u64; 3]> {
        let mut c = [0u64; 3];
        for p in s.iter() {
            match target.check(&p)? {
                Membership::Member => c[0] += 1,
                Membership::Nonmember => c[1] += 1,
                Membership::Uncertain => c[2] += 1,
            }
        }
        Ok(c)
    });
    let mut c = [0u64; 3];
    for part in parts {
        let part = part?;
        for k in 0..3 {
            c[k] += part[k];
        }
    }
    Ok(MembershipCensus {
        t: format_rational(bx.t()),
        total: c.iter().sum(),
        member: c[0],
        nonmember: c[1],
        uncertain: c[2],
    })
}

/// Rouché scan along a grid, with the empirical `T_0`: the smallest grid
/// value from which every box is nonempty and entirely made of members.
#[derive(Clone, Debug, Serialize)]
pub struct RoucheScan {
    pub rows: Vec<MembershipCensus>,
    pub t0: Option<String>,
}

pub fn rouche_scan(
    v: &Direction,
    m: &SignPattern,
    eps: &BigRational,
    grid: &[BigRational],
    cap: u64,
) -> Result<RoucheScan> {
    let mut rows = Vec::new();
    for t in grid {
        let bx = coeff_box(v, m, t, eps)?;
        let target = MembershipTarget::for_q(v, m, t, eps)?;
        rows.push(box_membership(&bx, &target, cap)?);
    }
    let mut t0 = None;
    for r in rows.iter().rev() {
        if r.all_members() {
            t0 = Some(r.t.clone());
        } else {
            break;
        }
    }
    Ok(RoucheScan { rows, t0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64_descending(c)
    }

    fn sl(c: &[i64]) -> Direction {
        Direction::from_ints(Group::Sl, c).unwrap()
    }

    fn pat(s: &str) -> SignPattern {
        SignPattern::parse(s).unwrap()
    }

    #[test]
    fn constants() {
        assert_eq!(c_n(2), 20);
        assert_eq!(c_n(3), 80);
        assert_eq!(c_n(4), 240);
    }

    #[test]
    fn golden_quadratic() {
        let c = isolate_real_roots(&p(&[1, -3, 1]), &[], 60).unwrap();
        assert!(c.certified());
        assert!(c.distinct_moduli());
        let s5 = 5f64.sqrt();
        let v = c.values_f64();
        assert!((v[0] - (3.0 + s5) / 2.0).abs() < 1e-12);
        assert!((v[1] - (3.0 - s5) / 2.0).abs() < 1e-12);
        assert_eq!(c.signs(), vec![1, 1]);
    }

    #[test]
    fn rejects_and_flags() {
        assert_eq!(
            isolate_real_roots(&p(&[1, -2, 1]), &[], 10).unwrap_err(),
            Error::NotSquarefree
        );
        let c = isolate_real_roots(&p(&[1, 1, 1]), &[], 10).unwrap();
        assert!(!c.certified());
        assert!(c.is_empty());
    }

    #[test]
    fn exact_roots_and_ties() {
        let c = isolate_real_roots(&p(&[1, 0, -1, 0]), &[], 20).unwrap();
        assert!(c.certified());
        assert_eq!(c.len(), 3);
        assert!(!c.distinct_moduli());
        let mut v = c.values_f64();
        v.sort_by(f64::total_cmp);
        assert_eq!(v, vec![-1.0, 0.0, 1.0]);
    }

    #[test]
    fn hints_give_same_roots() {
        let q = p(&[1, -10, 23, -10, 1]);
        let hints: Vec<Hint> = [8.9, 2.6, 0.38, 0.11]
            .iter()
            .map(|x: &f64| Hint {
                sign: 1,
                ln_abs: x.ln(),
            })
            .collect();
        assert!(hint_isolate(&q, &hints).is_some());
        let a = isolate_real_roots(&q, &hints, 50).unwrap().values_f64();
        let b = isolate_real_roots(&q, &[], 50).unwrap().values_f64();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(count_real_roots(&p(&[1, 0, -2])), 2);
        assert_eq!(count_real_roots(&p(&[1, 0, 0, -2])), 1);
        assert_eq!(count_real_roots(&p(&[1, -10, 23, -10, 1])), 4);
        assert_eq!(count_real_roots(&p(&[-1, 0, 3, 0])), 3);
    }

    #[test]
    fn membership_examples() {
        let v = sl(&[1, -1]);
        let m = pat("+,+");
        let (t, e) = (int(5), ratio(1, 10));
        assert_eq!(
            check_q_membership(&p(&[1, -148, 1]), &v, &m, &t, &e).unwrap(),
            Membership::Member
        );
        assert_eq!(
            check_q_membership(&p(&[1, -3, 1]), &v, &m, &t, &e).unwrap(),
            Membership::Nonmember
        );
    }

    #[test]
    fn closed_disc_boundary() {
        // T = 0, radius 1: discs [0, 2] and [-2, 0]; x^2 - x - 2 has roots 2 and -1
        let v = sl(&[1, -1]);
        let r = p(&[1, -1, -2]);
        let wide = MembershipTarget::sl(&v, &pat("+,-"), &int(0), &int(1)).unwrap();
        assert_eq!(wide.check(&r).unwrap(), Membership::Member);
        let narrow = MembershipTarget::sl(&v, &pat("+,-"), &int(0), &ratio(1, 2)).unwrap();
        assert_eq!(narrow.check(&r).unwrap(), Membership::Nonmember);
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&p(&[1, -3, 1])), BigInt::from(5));
        assert_eq!(discriminant(&p(&[1, -2, 1])), BigInt::from(0));
        assert_eq!(discriminant(&p(&[1, 0, -1, 0])), BigInt::from(4));
        let mut c = isolate_real_roots(&p(&[1, -10, 23, -10, 1]), &[], 80).unwrap();
        c.refine_all(80);
        let d = discriminant_from_roots(&c);
        let exact = Dyadic::from_int(discriminant(&p(&[1, -10, 23, -10, 1])));
        assert!(d.contains(&exact));
    }

    #[test]
    fn growth_of_discriminant() {
        let g = disc_growth(&sl(&[1, -1]), &pat("+,+"), &int(20), 64).unwrap();
        assert!((g.value_f64() - 2.0).abs() < 1e-8);
        assert!((g.sqrt_form_f64() - 1.0).abs() < 1e-8);
        let g = disc_growth(&sl(&[1, 0, -1]), &pat("+,+,+"), &int(20), 64).unwrap();
        assert!((g.value_f64() - 4.0).abs() < 1e-6);
    }

    #[test]
    fn eps0_small_n() {
        let e = rouche_eps0(2).unwrap();
        // 20 (1/2 - 20 e) = 3 (1 + 20 e) at e = 7/460
        assert!((e.inequality_bound - 7.0 / 460.0).abs() < 1e-12);
        assert_eq!(e.eps0, 1.0 / 80.0);
    }

    #[test]
    fn log_abs_of_unit() {
        let mut c = isolate_real_roots(&p(&[1, -3, 1]), &[], 20).unwrap();
        let l0 = c.log_abs(0, 60).unwrap();
        let l1 = c.log_abs(1, 60).unwrap();
        let s = &l0 + &l1;
        assert!(s.contains(&Dyadic::zero()));
        assert!((l0.mid_f64() - 0.962_423_650_119_206_9).abs() < 1e-12);
    }
}
