//! Irreducibility over the integers by root-subset search, with a
//! finite-field degree screen as a cross-check.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::boxes::{elementary_symmetric, CoeffBox};
use crate::chamber::Group;
use crate::dyadic::{Dyadic, Interval};
use crate::error::{Error, Result};
use crate::par;
use crate::poly::IntPolynomial;
use crate::roots::{isolate_real_roots, model_hints, RootCluster, PRECISION_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Irreducible,
    Reducible,
    Deferred,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    SubsetSearch,
    ModPScreen,
    RationalRoot,
    Gcd,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorCertificate {
    pub verdict: Verdict,
    pub method: Method,
    /// Factor and cofactor with `p = factor * cofactor`.
    pub factor: Option<IntPolynomial>,
    pub cofactor: Option<IntPolynomial>,
    /// Root indices (decreasing modulus order) of the factor.
    pub subset: Option<Vec<usize>>,
    pub screen: Option<Screen>,
}

impl FactorCertificate {
    fn reducible(method: Method, f: IntPolynomial, g: IntPolynomial, subset: Option<Vec<usize>>) -> Self {
        FactorCertificate {
            verdict: Verdict::Reducible,
            method,
            factor: Some(f),
            cofactor: Some(g),
            subset,
            screen: None,
        }
    }

    fn deferred(method: Method) -> Self {
        FactorCertificate {
            verdict: Verdict::Deferred,
            method,
            factor: None,
            cofactor: None,
            subset: None,
            screen: None,
        }
    }
}

/// Degree patterns of `p` modulo small primes not dividing `Disc(p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Screen {
    pub primes: Vec<u64>,
    pub patterns: Vec<Vec<usize>>,
    /// Degrees in `1..deg p` a factor over the integers could have.
    pub allowed_degrees: Vec<usize>,
}

impl Screen {
    /// True when some prime leaves no room for a proper factor.
    pub fn proves_irreducible(&self) -> bool {
        !self.primes.is_empty() && self.allowed_degrees.is_empty()
    }

    pub fn allows(&self, k: usize) -> bool {
        self.allowed_degrees.contains(&k)
    }
}

fn small_primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&k| (2..).take_while(|d| d * d <= k).all(|d| k % d != 0))
}

/// Finite-field screen over the first `count` primes not dividing the
/// discriminant.
pub fn mod_p_screen(p: &IntPolynomial, count: usize) -> Screen {
    let d = p.degree();
    let disc = p.discriminant();
    let mut primes = Vec::new();
    let mut patterns = Vec::new();
    let mut allowed: Vec<bool> = (0..=d).map(|k| k > 0 && k < d).collect();
    if !disc.is_zero() && p.is_monic() {
        for q in small_primes().take(500) {
            if primes.len() == count {
                break;
            }
            if (&disc % BigInt::from(q)).is_zero() {
                continue;
            }
            let Some(pat) = factor_degrees_mod(p, q) else {
                continue;
            };
            let sums = subset_sums(&pat, d);
            for (k, a) in allowed.iter_mut().enumerate() {
                *a &= sums[k];
            }
            primes.push(q);
            patterns.push(pat);
        }
    }
    Screen {
        primes,
        patterns,
        allowed_degrees: (1..d).filter(|&k| allowed[k]).collect(),
    }
}

fn subset_sums(parts: &[usize], d: usize) -> Vec<bool> {
    let mut s = vec![false; d + 1];
    s[0] = true;
    for &x in parts {
        for k in (x..=d).rev() {
            if s[k - x] {
                s[k] = true;
            }
        }
    }
    s
}

// Polynomials over F_q, ascending coefficients, no trailing zeros.

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn mulmod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn inv(a: u64, q: u64) -> u64 {
    let mut r = 1;
    let (mut b, mut e) = (a % q, q - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, q);
        }
        b = mulmod(b, b, q);
        e >>= 1;
    }
    r
}

fn fq_rem(a: &[u64], f: &[u64], q: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let df = f.len() - 1;
    let li = inv(f[df], q);
    while r.len() > df {
        let top = r.len() - 1;
        let c = mulmod(r[top], li, q);
        if c != 0 {
            for (j, fj) in f.iter().enumerate() {
                let k = top - df + j;
                r[k] = (r[k] + q - mulmod(c, *fj, q)) % q;
            }
        }
        r.pop();
        r = trim(r);
    }
    trim(r)
}

fn fq_div(a: &[u64], f: &[u64], q: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let df = f.len() - 1;
    let li = inv(f[df], q);
    let mut out = vec![0; a.len().saturating_sub(df)];
    while r.len() > df {
        let top = r.len() - 1;
        let c = mulmod(r[top], li, q);
        out[top - df] = c;
        for (j, fj) in f.iter().enumerate() {
            let k = top - df + j;
            r[k] = (r[k] + q - mulmod(c, *fj, q)) % q;
        }
        r.pop();
    }
    trim(out)
}

fn fq_mul_mod(a: &[u64], b: &[u64], f: &[u64], q: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(*x, *y, q)) % q;
        }
    }
    fq_rem(&trim(out), f, q)
}

fn fq_pow_mod(base: &[u64], mut e: u64, f: &[u64], q: u64) -> Vec<u64> {
    let mut r = vec![1u64];
    let mut b = fq_rem(base, f, q);
    while e > 0 {
        if e & 1 == 1 {
            r = fq_mul_mod(&r, &b, f, q);
        }
        b = fq_mul_mod(&b, &b, f, q);
        e >>= 1;
    }
    r
}

fn fq_monic(a: Vec<u64>, q: u64) -> Vec<u64> {
    match a.last() {
        Some(&l) if l != 1 => {
            let li = inv(l, q);
            a.into_iter().map(|c| mulmod(c, li, q)).collect()
        }
        _ => a,
    }
}

fn fq_gcd(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = fq_rem(&a, &b, q);
        a = b;
        b = r;
    }
    fq_monic(a, q)
}

fn fq_sub(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + q - y) % q
            })
            .collect(),
    )
}

/// Degrees of the irreducible factors of `p mod q` by distinct-degree
/// factorization; `None` if `p mod q` is not squarefree or drops degree.
pub fn factor_degrees_mod(p: &IntPolynomial, q: u64) -> Option<Vec<usize>> {
    let mut f = p.reduce_mod(q);
    if f.len() != p.degree() + 1 {
        return None;
    }
    f = fq_monic(f, q);
    let df = fq_sub(&fq_derivative(&f, q), &[], q);
    if fq_gcd(&f, &df, q).len() > 1 {
        return None;
    }
    let x = vec![0u64, 1];
    let mut h = fq_rem(&x, &f, q);
    let mut degrees = Vec::new();
    let mut i = 1;
    while f.len() > 2 * i {
        h = fq_pow_mod(&h, q, &f, q);
        let g = fq_gcd(&f, &fq_sub(&h, &x, q), q);
        let dg = g.len() - 1;
        if dg > 0 {
            degrees.extend(std::iter::repeat_n(i, dg / i));
            f = fq_div(&f, &g, q);
            h = fq_rem(&h, &f, q);
        }
        i += 1;
    }
    if f.len() > 1 {
        degrees.push(f.len() - 1);
    }
    degrees.sort_unstable();
    Some(degrees)
}

fn fq_derivative(f: &[u64], q: u64) -> Vec<u64> {
    trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| mulmod(*c, i as u64 % q, q))
            .collect(),
    )
}

/// Positive divisors of `n` when `n` is small enough to factor by trial
/// division.
fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

enum SubsetOutcome {
    Factor(IntPolynomial, IntPolynomial),
    NotAFactor,
    Undecided,
}

fn try_subset(p: &IntPolynomial, c: &mut RootCluster, s: &[usize], divisors: Option<&[BigInt]>) -> SubsetOutcome {
    if s.len() == 1 {
        if let Some(divs) = divisors {
            // a linear factor x - r needs r = +-d for a divisor d
            let enc = c.enclosure(s[0]);
            for d in divs {
                for r in [d.clone(), -d] {
                    let rd = Dyadic::from_int(r.clone());
                    if enc.contains(&rd) && p.sign_at(&rd) == 0 {
                        let f = IntPolynomial::linear(r);
                        let g = p.exact_div(&f).expect("root gives a factor");
                        return SubsetOutcome::Factor(f, g);
                    }
                }
            }
            return SubsetOutcome::NotAFactor;
        }
    }
    let mut bits = 16u64;
    loop {
        for &i in s {
            c.refine(i, bits);
        }
        let enc: Vec<Interval> = s.iter().map(|&i| c.enclosure(i)).collect();
        if let Some(divs) = divisors {
            let mut prod = Interval::from_int(1);
            for e in &enc {
                prod = &prod * &e.abs();
            }
            if !divs.iter().any(|d| prod.contains(&Dyadic::from_int(d.clone()))) {
                return SubsetOutcome::NotAFactor;
            }
        }
        let e = elementary_symmetric(&enc, bits + 64);
        let mut coeffs = Vec::with_capacity(e.len());
        let mut unresolved = false;
        for ek in &e {
            let lo = ek.lo().ceil();
            let hi = ek.hi().floor();
            if lo > hi {
                return SubsetOutcome::NotAFactor;
            }
            if lo != hi {
                unresolved = true;
                break;
            }
            coeffs.push(lo);
        }
        if !unresolved {
            let f = IntPolynomial::from_vieta(&coeffs);
            return match p.exact_div(&f) {
                Some(g) => SubsetOutcome::Factor(f, g),
                None => SubsetOutcome::NotAFactor,
            };
        }
        bits *= 2;
        if bits > PRECISION_CAP {
            return SubsetOutcome::Undecided;
        }
    }
}

/// Subsets of `0..d` of size at most `d/2`; at size exactly `d/2` only
/// those holding index 0, so each partition appears once.
fn candidate_subsets(d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << d) - 1 {
        let k = mask.count_ones() as usize;
        if 2 * k > d || (2 * k == d && mask & 1 == 0) {
            continue;
        }
        out.push((0..d).filter(|i| mask >> i & 1 == 1).collect());
    }
    out.sort_by_key(|s: &Vec<usize>| s.len());
    out
}

fn quick_reducible(p: &IntPolynomial) -> Option<FactorCertificate> {
    let g = p.gcd(&p.derivative());
    if g.degree() > 0 {
        let f = g.primitive_part();
        let h = p.exact_div(&f).expect("gcd divides p");
        return Some(FactorCertificate::reducible(Method::Gcd, f, h, None));
    }
    if p.constant_term().is_zero() {
        let f = IntPolynomial::linear(BigInt::zero());
        let h = p.exact_div(&f).expect("x divides p");
        return Some(FactorCertificate::reducible(Method::RationalRoot, f, h, None));
    }
    None
}

/// Decide irreducibility of a monic polynomial with certified real roots.
pub fn is_irreducible(p: &IntPolynomial, roots: &RootCluster) -> Result<FactorCertificate> {
    let d = p.degree();
    if !p.is_monic() {
        return Err(Error::InvalidPolynomial("expected a monic polynomial".into()));
    }
    if d <= 1 {
        return Ok(irreducible(Method::SubsetSearch, None));
    }
    if let Some(c) = quick_reducible(p) {
        return Ok(c);
    }
    if !roots.certified() || roots.degree() != d || roots.len() != d {
        return Err(Error::InvalidParameter(
            "subset search needs all roots real and certified".into(),
        ));
    }
    let divisors = small_divisors(&p.constant_term());
    let mut c = roots.clone();
    let mut undecided = false;
    for s in candidate_subsets(d) {
        match try_subset(p, &mut c, &s, divisors.as_deref()) {
            SubsetOutcome::Factor(f, h) => {
                let mut cert = FactorCertificate::reducible(Method::SubsetSearch, f, h, Some(s));
                let screen = mod_p_screen(p, 5);
                let k = cert.factor.as_ref().map(|f| f.degree()).unwrap_or(0);
                if !screen.primes.is_empty() && !screen.allows(k) {
                    return Err(Error::InvalidPolynomial(
                        "factor degree contradicts the finite-field screen".into(),
                    ));
                }
                cert.screen = Some(screen);
                return Ok(cert);
            }
            SubsetOutcome::NotAFactor => {}
            SubsetOutcome::Undecided => undecided = true,
        }
    }
    if undecided {
        return Ok(FactorCertificate::deferred(Method::SubsetSearch));
    }
    Ok(irreducible(Method::SubsetSearch, Some(mod_p_screen(p, 5))))
}

fn irreducible(method: Method, screen: Option<Screen>) -> FactorCertificate {
    FactorCertificate {
        verdict: Verdict::Irreducible,
        method,
        factor: None,
        cofactor: None,
        subset: None,
        screen,
    }
}

/// Verdict for a polynomial that may have non-real roots: subset search when
/// all roots are real, otherwise only a finite-field proof of irreducibility
/// is accepted and anything else is deferred.
pub fn classify(p: &IntPolynomial, hints: &[crate::roots::Hint]) -> Result<FactorCertificate> {
    match isolate_real_roots(p, hints, 0) {
        Ok(c) if c.certified() => is_irreducible(p, &c),
        Ok(_) => {
            let screen = mod_p_screen(p, 5);
            if screen.proves_irreducible() {
                Ok(irreducible(Method::ModPScreen, Some(screen)))
            } else {
                let mut cert = FactorCertificate::deferred(Method::ModPScreen);
                cert.screen = Some(screen);
                Ok(cert)
            }
        }
        Err(Error::NotSquarefree) => quick_reducible(p)
            .ok_or_else(|| Error::InvalidPolynomial("squarefree check disagrees".into())),
        Err(e) => Err(e),
    }
}

/// Complete factorization into monic irreducibles through repeated subset
/// search; `None` when some step is deferred.
pub fn factorize(p: &IntPolynomial, hints: &[crate::roots::Hint]) -> Result<Option<Vec<IntPolynomial>>> {
    if p.degree() == 0 {
        return Ok(Some(vec![]));
    }
    let cert = classify(p, hints)?;
    match cert.verdict {
        Verdict::Irreducible => Ok(Some(vec![p.clone()])),
        Verdict::Deferred => Ok(None),
        Verdict::Reducible => {
            let f = cert.factor.expect("reducible has a factor");
            let g = cert.cofactor.expect("reducible has a cofactor");
            let (Some(mut a), Some(b)) = (factorize(&f, &[])?, factorize(&g, &[])?) else {
                return Ok(None);
            };
            a.extend(b);
            a.sort_by_key(|q| (q.degree(), q.descending()));
            Ok(Some(a))
        }
    }
}

/// `f* = +-f`.
pub fn is_self_reciprocal(f: &IntPolynomial) -> bool {
    let r = f.reversed();
    r == *f || r == f.neg()
}

/// Sampling or exhaustive traversal of a box.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive { cap: u64 },
    Sample { k: usize, seed: u64 },
}

fn box_polynomials(bx: &CoeffBox, mode: Mode) -> Result<Vec<Vec<IntPolynomial>>> {
    if bx.is_empty() {
        return Err(Error::EmptyBox);
    }
    match mode {
        Mode::Exhaustive { cap } => {
            let _ = bx.enumerate(cap)?;
            Ok(bx
                .split(4 * par::workers().max(1))
                .iter()
                .map(|s| s.iter().collect())
                .collect())
        }
        Mode::Sample { k, seed } => {
            let all = bx.sample(k, seed)?;
            let chunk = k.div_ceil(4 * par::workers().max(1)).max(1);
            Ok(all.chunks(chunk).map(|c| c.to_vec()).collect())
        }
    }
}

/// Irreducibility census of a box.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct IrreducibleCensus {
    pub total: u64,
    pub irreducible: u64,
    pub reducible: u64,
    pub deferred: u64,
    /// Reducible counts keyed by the smaller factor degree.
    pub by_size: BTreeMap<usize, u64>,
    /// Reducible counts keyed by the root subset, 1-based, decreasing modulus.
    pub by_subset: BTreeMap<String, u64>,
}

impl IrreducibleCensus {
    /// Irreducible share among decided polynomials.
    pub fn fraction(&self) -> f64 {
        let decided = self.irreducible + self.reducible;
        if decided == 0 {
            return f64::NAN;
        }
        self.irreducible as f64 / decided as f64
    }

    fn merge(&mut self, o: IrreducibleCensus) {
        self.total += o.total;
        self.irreducible += o.irreducible;
        self.reducible += o.reducible;
        self.deferred += o.deferred;
        for (k, v) in o.by_size {
            *self.by_size.entry(k).or_default() += v;
        }
        for (k, v) in o.by_subset {
            *self.by_subset.entry(k).or_default() += v;
        }
    }
}

pub fn subset_label(s: &[usize]) -> String {
    let inner: Vec<String> = s.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

pub fn irreducible_fraction(bx: &CoeffBox, mode: Mode) -> Result<IrreducibleCensus> {
    let chunks = box_polynomials(bx, mode)?;
    let hints = model_hints(bx.direction(), bx.pattern(), bx.t());
    let parts = par::map(&chunks, |chunk| -> Result<IrreducibleCensus> {
        let mut c = IrreducibleCensus::default();
        for p in chunk {
            c.total += 1;
            let cert = classify(p, &hints)?;
            match cert.verdict {
                Verdict::Irreducible => c.irreducible += 1,
                Verdict::Deferred => c.deferred += 1,
                Verdict::Reducible => {
                    c.reducible += 1;
                    let k = cert.factor.as_ref().map(|f| f.degree()).unwrap_or(0);
                    let k = k.min(p.degree() - k);
                    *c.by_size.entry(k).or_default() += 1;
                    let label = cert
                        .subset
                        .as_deref()
                        .map(subset_label)
                        .unwrap_or_else(|| format!("{:?}", cert.method));
                    *c.by_subset.entry(label).or_default() += 1;
                }
            }
        }
        Ok(c)
    });
    let mut total = IrreducibleCensus::default();
    for p in parts {
        total.merge(p?);
    }
    Ok(total)
}

/// Reducible reciprocal polynomials split into `f f*` with `f` irreducible
/// and not self-reciprocal (class i) and everything else (class ii).
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ReciprocalCensus {
    pub total: u64,
    pub irreducible: u64,
    pub class_i: u64,
    pub class_ii: u64,
    pub deferred: u64,
}

impl ReciprocalCensus {
    fn merge(&mut self, o: ReciprocalCensus) {
        self.total += o.total;
        self.irreducible += o.irreducible;
        self.class_i += o.class_i;
        self.class_ii += o.class_ii;
        self.deferred += o.deferred;
    }

    pub fn reducible(&self) -> u64 {
        self.class_i + self.class_ii
    }
}

/// Class of a reducible reciprocal polynomial from its factorization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ReciprocalClass {
    Irreducible,
    FTimesFStar,
    Other,
}

pub fn reciprocal_class(factors: &[IntPolynomial]) -> ReciprocalClass {
    match factors {
        [_] => ReciprocalClass::Irreducible,
        [f, g] if !is_self_reciprocal(f) && {
            let r = f.reversed();
            *g == r || *g == r.neg()
        } =>
        {
            ReciprocalClass::FTimesFStar
        }
        _ => ReciprocalClass::Other,
    }
}

pub fn reciprocal_factor_census(bx: &CoeffBox, mode: Mode) -> Result<ReciprocalCensus> {
    if bx.group() != Group::Sp {
        return Err(Error::InvalidParameter("reciprocal census needs an Sp box".into()));
    }
    let chunks = box_polynomials(bx, mode)?;
    let hints = model_hints(bx.direction(), bx.pattern(), bx.t());
    let parts = par::map(&chunks, |chunk| -> Result<ReciprocalCensus> {
        let mut c = ReciprocalCensus::default();
        for p in chunk {
            c.total += 1;
            match factorize(p, &hints)? {
                None => c.deferred += 1,
                Some(fs) => match reciprocal_class(&fs) {
                    ReciprocalClass::Irreducible => c.irreducible += 1,
                    ReciprocalClass::FTimesFStar => c.class_i += 1,
                    ReciprocalClass::Other => c.class_ii += 1,
                },
            }
        }
        Ok(c)
    });
    let mut total = ReciprocalCensus::default();
    for p in parts {
        total.merge(p?);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64_descending(c)
    }

    fn cert(q: &IntPolynomial) -> FactorCertificate {
        classify(q, &[]).unwrap()
    }

    #[test]
    fn quadratic_examples() {
        assert_eq!(cert(&p(&[1, -3, 1])).verdict, Verdict::Irreducible);
        assert_eq!(cert(&p(&[1, -2, -1])).verdict, Verdict::Irreducible);
        let c = cert(&p(&[1, 0, -1]));
        assert_eq!(c.verdict, Verdict::Reducible);
    }

    #[test]
    fn quartic_product_found() {
        let q = p(&[1, -10, 23, -10, 1]);
        let c = cert(&q);
        assert_eq!(c.verdict, Verdict::Reducible);
        let f = c.factor.unwrap();
        let g = c.cofactor.unwrap();
        assert_eq!(f.mul(&g), q);
        let pair = [p(&[1, -3, 1]), p(&[1, -7, 1])];
        assert!(pair.contains(&f));
        assert_eq!(c.subset.unwrap().len(), 2);
    }

    #[test]
    fn mod_p_patterns() {
        // x^2 - 3x + 1 mod 11: disc 5 is a square (4^2), so it splits
        assert_eq!(factor_degrees_mod(&p(&[1, -3, 1]), 11), Some(vec![1, 1]));
        // mod 2 it is x^2 + x + 1, irreducible
        assert_eq!(factor_degrees_mod(&p(&[1, -3, 1]), 2), Some(vec![2]));
        assert_eq!(factor_degrees_mod(&p(&[1, 0, -2]), 2), None);
        let s = mod_p_screen(&p(&[1, 0, 0, -2]), 5);
        assert!(s.proves_irreducible());
    }

    #[test]
    fn reciprocal_classes() {
        let a = p(&[1, -10, 23, -10, 1]);
        assert_eq!(
            reciprocal_class(&factorize(&a, &[]).unwrap().unwrap()),
            ReciprocalClass::Other
        );
        let f = p(&[1, -1, -1]);
        let b = f.mul(&p(&[1, 1, -1]));
        assert_eq!(b, p(&[1, 0, -3, 0, 1]));
        assert_eq!(
            reciprocal_class(&factorize(&b, &[]).unwrap().unwrap()),
            ReciprocalClass::FTimesFStar
        );
        assert!(is_self_reciprocal(&p(&[1, -1])));
        assert!(!is_self_reciprocal(&f));
    }

    #[test]
    fn cubic_with_unit_root() {
        // (x - 1)(x^2 - 5x + 1)
        let q = p(&[1, -1]).mul(&p(&[1, -5, 1]));
        let c = cert(&q);
        assert_eq!(c.verdict, Verdict::Reducible);
        assert_eq!(c.factor.unwrap(), p(&[1, -1]));
        assert!(c.screen.unwrap().allows(1));
    }

    #[test]
    fn repeated_roots_use_gcd() {
        let q = p(&[1, -3, 1]).mul(&p(&[1, -3, 1]));
        let c = cert(&q);
        assert_eq!(c.verdict, Verdict::Reducible);
        assert_eq!(c.method, Method::Gcd);
    }

    #[test]
    fn candidate_partitions() {
        assert_eq!(candidate_subsets(2), vec![vec![0]]);
        assert_eq!(candidate_subsets(3).len(), 3);
        // 4 singletons and the 3 pairs holding index 0
        assert_eq!(candidate_subsets(4).len(), 7);
    }
}
