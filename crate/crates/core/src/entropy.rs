//! Count curves along `T` grids and their exponential growth rates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::boxes::{coeff_box, CoeffBox};
use crate::chamber::{Direction, Group, SignPattern};
use crate::dyadic::Interval;
use crate::error::{Error, Result};
use crate::factor::{classify, is_irreducible, Verdict};
use crate::par;
use crate::poly::IntPolynomial;
use crate::rational::{format_rational, rational_to_f64};
use crate::roots::{isolate_real_roots, Membership, MembershipTarget};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Filter {
    Box,
    QMember,
    Irreducible,
    Units,
}

impl Filter {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "box" => Ok(Filter::Box),
            "q" | "q-member" | "member" => Ok(Filter::QMember),
            "irreducible" | "irr" => Ok(Filter::Irreducible),
            "units" | "unit" => Ok(Filter::Units),
            _ => Err(Error::Parse(format!("unknown filter {s:?}"))),
        }
    }

    fn depth(self) -> u8 {
        match self {
            Filter::Box => 0,
            Filter::QMember => 1,
            Filter::Irreducible | Filter::Units => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Mode {
    /// Closed-form box size; only valid for the box filter.
    Exact,
    /// Walk every polynomial; `fallback` samples instead when the box
    /// exceeds `cap`.
    Exhaustive { cap: u64, fallback: Option<(usize, u64)> },
    Sampled { k: usize, seed: u64 },
}

/// Per-polynomial outcome counts for one box.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub visited: u64,
    pub member: u64,
    pub uncertain: u64,
    pub irreducible: u64,
    pub deferred: u64,
}

impl Tally {
    fn merge(&mut self, o: &Tally) {
        self.visited += o.visited;
        self.member += o.member;
        self.uncertain += o.uncertain;
        self.irreducible += o.irreducible;
        self.deferred += o.deferred;
    }

    fn hits(&self, f: Filter) -> u64 {
        match f {
            Filter::Box => self.visited,
            Filter::QMember => self.member,
            Filter::Irreducible | Filter::Units => self.irreducible,
        }
    }
}

fn tally_one(p: &IntPolynomial, target: &MembershipTarget, depth: u8, t: &mut Tally) -> Result<()> {
    t.visited += 1;
    if depth == 0 {
        return Ok(());
    }
    match target.check(p)? {
        Membership::Member => t.member += 1,
        Membership::Uncertain => {
            t.uncertain += 1;
            return Ok(());
        }
        Membership::Nonmember => return Ok(()),
    }
    if depth == 1 {
        return Ok(());
    }
    let cert = match isolate_real_roots(p, target.hints(), 0) {
        Ok(c) if c.certified() => is_irreducible(p, &c)?,
        Ok(_) | Err(Error::NotSquarefree) => classify(p, target.hints())?,
        Err(e) => return Err(e),
    };
    match cert.verdict {
        Verdict::Irreducible => t.irreducible += 1,
        Verdict::Deferred => t.deferred += 1,
        Verdict::Reducible => {}
    }
    Ok(())
}

/// Tally every polynomial of a box, in parallel slabs merged in order.
pub fn tally_box(bx: &CoeffBox, target: &MembershipTarget, depth: u8, cap: u64) -> Result<Tally> {
    let _ = bx.enumerate(cap)?;
    let slabs = bx.split(4 * par::workers().max(1));
    let parts = par::map(&slabs, |s| -> Result<Tally> {
        let mut t = Tally::default();
        for p in s.iter() {
            tally_one(&p, target, depth, &mut t)?;
        }
        Ok(t)
    });
    let mut out = Tally::default();
    for p in parts {
        out.merge(&p?);
    }
    Ok(out)
}

/// Tally a seeded uniform sample of a box.
pub fn tally_sample(bx: &CoeffBox, target: &MembershipTarget, depth: u8, k: usize, seed: u64) -> Result<Tally> {
    let polys = bx.sample(k, seed)?;
    let chunk = k.div_ceil(4 * par::workers().max(1)).max(1);
    let chunks: Vec<&[IntPolynomial]> = polys.chunks(chunk).collect();
    let parts = par::map(&chunks, |c| -> Result<Tally> {
        let mut t = Tally::default();
        for p in c.iter() {
            tally_one(p, target, depth, &mut t)?;
        }
        Ok(t)
    });
    let mut out = Tally::default();
    for p in parts {
        out.merge(&p?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountRecord {
    pub group: Group,
    pub v: Vec<String>,
    pub m: Vec<i8>,
    pub eps: String,
    #[serde(rename = "T")]
    pub t: String,
    pub filter: Filter,
    pub mode: &'static str,
    /// Exact count, or the scaled estimate rounded to an integer.
    #[serde(serialize_with = "ser_bigint")]
    pub count: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub box_size: BigInt,
    pub samples: Option<u64>,
    pub hits: Option<u64>,
    pub seed: Option<u64>,
    pub std_error: Option<f64>,
    pub uncertain: u64,
    pub deferred: u64,
    /// `n! * count` for unit counts: one polynomial carries at most `n!`
    /// ordered embeddings.
    #[serde(serialize_with = "ser_opt_bigint")]
    pub unit_band_upper: Option<BigInt>,
}

fn ser_bigint<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_opt_bigint<S: serde::Serializer>(x: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.serialize_str(&x.to_string()),
        None => s.serialize_none(),
    }
}

impl CountRecord {
    pub fn t_f64(&self) -> f64 {
        crate::rational::parse_rational(&self.t).map(|r| rational_to_f64(&r)).unwrap_or(f64::NAN)
    }

    /// Natural log of the count, `-inf` for zero.
    pub fn ln_count(&self) -> f64 {
        ln_bigint(&self.count)
    }
}

/// `ln x` for a positive big integer.
pub fn ln_bigint(x: &BigInt) -> f64 {
    if !x.is_positive() {
        return f64::NEG_INFINITY;
    }
    if let Some(f) = x.to_f64().filter(|f| f.is_finite()) {
        return f.ln();
    }
    let shift = x.bits() - 60;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

fn grid_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// One record per grid point; points run in parallel and are merged in grid
/// order.
pub fn count_curve(
    v: &Direction,
    m: &SignPattern,
    eps: &BigRational,
    grid: &[BigRational],
    filter: Filter,
    mode: Mode,
) -> Result<Vec<CountRecord>> {
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("T grid must be increasing".into()));
    }
    if filter == Filter::Units && v.group() != Group::Sl {
        return Err(Error::InvalidParameter("the units filter needs an SL direction".into()));
    }
    if mode == Mode::Exact && filter != Filter::Box {
        return Err(Error::InvalidParameter("exact mode only counts boxes".into()));
    }
    if let Mode::Exhaustive { cap, fallback: None } = mode {
        for t in grid {
            let size = coeff_box(v, m, t, eps)?.exact_count().clone();
            if size > BigInt::from(cap) {
                return Err(Error::CapExceeded { count: size.to_string(), cap });
            }
        }
    }
    let idx: Vec<usize> = (0..grid.len()).collect();
    par::map(&idx, |&i| count_point(v, m, eps, &grid[i], filter, mode, i)).into_iter().collect()
}

fn count_point(
    v: &Direction,
    m: &SignPattern,
    eps: &BigRational,
    t: &BigRational,
    filter: Filter,
    mode: Mode,
    index: usize,
) -> Result<CountRecord> {
    let bx = coeff_box(v, m, t, eps)?;
    let size = bx.exact_count().clone();
    let mut rec = CountRecord {
        group: v.group(),
        v: v.to_strings(),
        m: m.signs().to_vec(),
        eps: format_rational(eps),
        t: format_rational(t),
        filter,
        mode: "exact",
        count: size.clone(),
        box_size: size.clone(),
        samples: None,
        hits: None,
        seed: None,
        std_error: None,
        uncertain: 0,
        deferred: 0,
        unit_band_upper: None,
    };
    let sampled = match mode {
        Mode::Exact => None,
        Mode::Exhaustive { cap, fallback } => {
            if size > BigInt::from(cap) {
                match fallback {
                    Some((k, seed)) => Some((k, seed)),
                    None => {
                        return Err(Error::CapExceeded { count: size.to_string(), cap });
                    }
                }
            } else {
                rec.mode = "exhaustive";
                if filter != Filter::Box && !bx.is_empty() {
                    let target = MembershipTarget::for_q(v, m, t, eps)?;
                    let tally = tally_box(&bx, &target, filter.depth(), cap)?;
                    rec.count = BigInt::from(tally.hits(filter));
                    rec.uncertain = tally.uncertain;
                    rec.deferred = tally.deferred;
                }
                None
            }
        }
        Mode::Sampled { k, seed } => Some((k, seed)),
    };
    if let Some((k, seed)) = sampled {
        let seed = grid_seed(seed, index);
        rec.mode = "sampled";
        rec.samples = Some(k as u64);
        rec.seed = Some(seed);
        if bx.is_empty() || k == 0 {
            rec.count = BigInt::zero();
            rec.hits = Some(0);
            rec.std_error = Some(0.0);
        } else {
            let target = MembershipTarget::for_q(v, m, t, eps)?;
            let tally = tally_sample(&bx, &target, filter.depth(), k, seed)?;
            let hits = tally.hits(filter);
            let frac = hits as f64 / k as f64;
            let size_f = ln_bigint(&size).exp();
            rec.hits = Some(hits);
            rec.count = scaled_estimate(&size, hits, k as u64);
            rec.std_error = Some(size_f * (frac * (1.0 - frac) / k as f64).sqrt());
            rec.uncertain = tally.uncertain;
            rec.deferred = tally.deferred;
        }
    }
    if filter == Filter::Units {
        rec.unit_band_upper = Some(&rec.count * factorial(v.degree()));
    }
    Ok(rec)
}

/// `round(size * hits / k)`.
fn scaled_estimate(size: &BigInt, hits: u64, k: u64) -> BigInt {
    let num = size * BigInt::from(hits) * 2 + BigInt::from(k);
    num / (BigInt::from(k) * 2)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyFit {
    pub t: Vec<f64>,
    pub log_counts: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    /// Delta-method standard error from sampled points; zero when exact.
    pub slope_std_error: f64,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub target_rho: f64,
    pub relative_error: f64,
    /// Grid values left out because their count was zero.
    pub excluded: Vec<String>,
    /// Counts did not grow along the grid.
    pub degenerate: bool,
}

pub fn fit_entropy(records: &[CountRecord], target: f64) -> Result<EntropyFit> {
    let mut t = Vec::new();
    let mut y = Vec::new();
    let mut sigma = Vec::new();
    let mut excluded = Vec::new();
    for r in records {
        if r.count.is_positive() {
            t.push(r.t_f64());
            y.push(r.ln_count());
            let c = ln_bigint(&r.count).exp();
            sigma.push(r.std_error.map(|s| s / c).unwrap_or(0.0));
        } else {
            excluded.push(r.t.clone());
        }
    }
    if t.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} records with positive counts, need 3",
            t.len()
        )));
    }
    let k = t.len() as f64;
    let tm = t.iter().sum::<f64>() / k;
    let ym = y.iter().sum::<f64>() / k;
    let sxx: f64 = t.iter().map(|x| (x - tm).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("T grid has no spread".into()));
    }
    let sxy: f64 = t.iter().zip(&y).map(|(a, b)| (a - tm) * (b - ym)).sum();
    let slope = sxy / sxx;
    let intercept = ym - slope * tm;
    let residuals: Vec<f64> = t.iter().zip(&y).map(|(a, b)| b - (intercept + slope * a)).collect();
    let max_residual = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let var: f64 = t
        .iter()
        .zip(&sigma)
        .map(|(a, s)| ((a - tm) / sxx).powi(2) * s * s)
        .sum();
    Ok(EntropyFit {
        t,
        log_counts: y,
        slope,
        intercept,
        slope_std_error: var.sqrt(),
        residuals,
        max_residual,
        target_rho: target,
        relative_error: if target != 0.0 { (slope - target).abs() / target.abs() } else { f64::NAN },
        excluded,
        degenerate: slope.abs() < 1e-9,
    })
}

/// `(log|x_1|, ..., log|x_n|)` for an irreducible totally real unit,
/// decreasing.
#[derive(Clone, Debug)]
pub struct UnitEmbedding {
    pub values: Vec<f64>,
    pub enclosures: Vec<Interval>,
}

pub fn unit_log_embedding(p: &IntPolynomial) -> Result<UnitEmbedding> {
    if !p.is_monic() || !p.constant_term().abs().is_one() {
        return Err(Error::InvalidPolynomial("a unit needs constant term +-1".into()));
    }
    let mut c = match isolate_real_roots(p, &[], 0) {
        Ok(c) => c,
        Err(Error::NotSquarefree) => {
            return Err(Error::InvalidPolynomial("repeated roots: reducible".into()))
        }
        Err(e) => return Err(e),
    };
    if !c.certified() {
        return Err(Error::InvalidPolynomial("not totally real".into()));
    }
    if is_irreducible(p, &c)?.verdict != Verdict::Irreducible {
        return Err(Error::InvalidPolynomial("reducible".into()));
    }
    let mut enc = Vec::with_capacity(c.len());
    for i in 0..c.len() {
        enc.push(c.log_abs(i, 96)?);
    }
    enc.sort_by(|a, b| b.mid_f64().total_cmp(&a.mid_f64()));
    let mut sum = Interval::from_int(0);
    for e in &enc {
        sum = &sum + e;
    }
    assert!(sum.contains_zero(), "log embedding of a unit must sum to zero");
    Ok(UnitEmbedding {
        values: enc.iter().map(Interval::mid_f64).collect(),
        enclosures: enc,
    })
}

/// Arithmetic grid `start, start + step, ..., <= stop`.
pub fn arithmetic_grid(start: &BigRational, stop: &BigRational, step: &BigRational) -> Result<Vec<BigRational>> {
    if !step.is_positive() || stop < start {
        return Err(Error::InvalidParameter("grid needs step > 0 and stop >= start".into()));
    }
    let mut out = Vec::new();
    let mut t = start.clone();
    while &t <= stop {
        out.push(t.clone());
        t += step;
    }
    Ok(out)
}

/// Geometric grid with `k` points from `start` to `stop`, rounded to
/// multiples of `1/1024`.
pub fn geometric_grid(start: f64, stop: f64, k: usize) -> Result<Vec<BigRational>> {
    if !(start > 0.0 && stop > start && k >= 2) {
        return Err(Error::InvalidParameter("geometric grid needs 0 < start < stop, k >= 2".into()));
    }
    let ratio = (stop / start).powf(1.0 / (k - 1) as f64);
    let mut out: Vec<BigRational> = (0..k)
        .map(|i| {
            let x = (start * ratio.powi(i as i32) * 1024.0).round() as i64;
            BigRational::new(BigInt::from(x), BigInt::from(1024))
        })
        .collect();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chamber::rho_sp;
    use crate::rational::{int, ratio};

    fn grid(a: i64, b: i64) -> Vec<BigRational> {
        (a..=b).map(int).collect()
    }

    #[test]
    fn sl2_box_curve_slope() {
        let v = Direction::from_ints(Group::Sl, &[1, -1]).unwrap();
        let m = SignPattern::parse("+,+").unwrap();
        let recs = count_curve(&v, &m, &ratio(1, 10), &grid(4, 12), Filter::Box, Mode::Exact).unwrap();
        for r in &recs {
            let t = r.t_f64();
            let oracle = (1.1 * t.exp()).floor() - (0.9 * t.exp()).ceil() + 1.0;
            assert_eq!(r.count, BigInt::from(oracle as i64));
        }
        let fit = fit_entropy(&recs, 1.0).unwrap();
        assert!(fit.relative_error < 0.02, "{}", fit.slope);
    }

    #[test]
    fn sp4_box_curve_slope() {
        let v = Direction::from_ints(Group::Sp, &[2, 1]).unwrap();
        let m = SignPattern::parse("+,+").unwrap();
        let recs = count_curve(&v, &m, &ratio(1, 10), &grid(1, 4), Filter::Box, Mode::Exact).unwrap();
        let fit = fit_entropy(&recs, rational_to_f64(&rho_sp(&v))).unwrap();
        assert!(fit.relative_error < 0.03, "{}", fit.slope);
    }

    #[test]
    fn filters_are_monotone() {
        let v = Direction::from_ints(Group::Sl, &[1, -1]).unwrap();
        let m = SignPattern::parse("+,+").unwrap();
        let g = grid(4, 8);
        let mode = Mode::Exhaustive { cap: 1_000_000, fallback: None };
        let b = count_curve(&v, &m, &ratio(1, 10), &g, Filter::Box, mode).unwrap();
        let q = count_curve(&v, &m, &ratio(1, 10), &g, Filter::QMember, mode).unwrap();
        let i = count_curve(&v, &m, &ratio(1, 10), &g, Filter::Irreducible, mode).unwrap();
        for k in 0..g.len() {
            assert!(b[k].count >= q[k].count && q[k].count >= i[k].count);
            assert!(&b[k].count - &i[k].count <= BigInt::from(2));
        }
    }

    #[test]
    fn constant_counts_are_flagged() {
        let v = Direction::from_ints(Group::Sl, &[1, -1]).unwrap();
        let m = SignPattern::parse("+,+").unwrap();
        let mut recs = count_curve(&v, &m, &ratio(1, 10), &grid(4, 6), Filter::Box, Mode::Exact).unwrap();
        for r in &mut recs {
            r.count = BigInt::from(7);
        }
        let fit = fit_entropy(&recs, 1.0).unwrap();
        assert!(fit.degenerate);
        assert!(fit_entropy(&recs[..2], 1.0).is_err());
    }

    #[test]
    fn sampled_records_carry_errors() {
        let v = Direction::from_ints(Group::Sl, &[1, -1]).unwrap();
        let m = SignPattern::parse("+,+").unwrap();
        let mode = Mode::Sampled { k: 200, seed: 3 };
        let a = count_curve(&v, &m, &ratio(1, 10), &grid(6, 8), Filter::QMember, mode).unwrap();
        let b = count_curve(&v, &m, &ratio(1, 10), &grid(6, 8), Filter::QMember, mode).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|r| r.std_error.is_some() && r.samples == Some(200)));
    }

    #[test]
    fn unit_embeddings() {
        let e = unit_log_embedding(&IntPolynomial::from_i64_descending(&[1, -3, 1])).unwrap();
        assert!((e.values[0] - 0.9624236501192069).abs() < 1e-12);
        assert!((e.values[0] + e.values[1]).abs() < 1e-12);
        assert!(unit_log_embedding(&IntPolynomial::from_i64_descending(&[1, -2, 1])).is_err());
        assert!(unit_log_embedding(&IntPolynomial::from_i64_descending(&[1, -3, 2])).is_err());
    }

    #[test]
    fn grids() {
        let g = arithmetic_grid(&int(1), &int(4), &ratio(1, 2)).unwrap();
        assert_eq!(g.len(), 7);
        let g = geometric_grid(1.0, 16.0, 5).unwrap();
        assert_eq!(g.last().unwrap(), &int(16));
    }
}
