//! Weyl chamber directions, sign patterns, the half-sum-of-positive-roots
//! functionals and partition deficits.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, rational_to_f64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    /// `SL_n`, chamber vectors of trace zero.
    Sl,
    /// `Sp_2n`, chamber vectors stored as the positive half `(v_1, ..., v_n)`.
    Sp,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::Sl => "sl",
            Group::Sp => "sp",
        })
    }
}

impl FromStr for Group {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sl" | "sl_n" => Ok(Group::Sl),
            "sp" | "sp_2n" => Ok(Group::Sp),
            _ => Err(Error::Parse(format!("unknown group {s:?}"))),
        }
    }
}

/// A point of the open positive Weyl chamber with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Direction {
    group: Group,
    coords: Vec<BigRational>,
}

impl Direction {
    pub fn new(group: Group, coords: Vec<BigRational>) -> Result<Self> {
        let n = coords.len();
        match group {
            Group::Sl => {
                if n < 2 {
                    return Err(Error::InvalidDirection("SL directions need n >= 2".into()));
                }
                let sum: BigRational = coords.iter().sum();
                if !sum.is_zero() {
                    return Err(Error::InvalidDirection(format!(
                        "coordinates sum to {}, expected 0",
                        format_rational(&sum)
                    )));
                }
            }
            Group::Sp => {
                if n < 1 {
                    return Err(Error::InvalidDirection("Sp directions need n >= 1".into()));
                }
                if !coords[n - 1].is_positive() {
                    return Err(Error::InvalidDirection(
                        "last Sp coordinate must be positive".into(),
                    ));
                }
            }
        }
        if coords.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidDirection(
                "coordinates must be strictly decreasing".into(),
            ));
        }
        Ok(Direction { group, coords })
    }

    pub fn sl(coords: Vec<BigRational>) -> Result<Self> {
        Self::new(Group::Sl, coords)
    }

    pub fn sp(coords: Vec<BigRational>) -> Result<Self> {
        Self::new(Group::Sp, coords)
    }

    /// Convenience constructor from integers.
    pub fn from_ints(group: Group, coords: &[i64]) -> Result<Self> {
        Self::new(
            group,
            coords
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    /// Parse a comma separated coordinate list such as `"1,0,-1"`.
    pub fn parse(group: Group, s: &str) -> Result<Self> {
        let coords = s
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        Self::new(group, coords)
    }

    pub fn group(&self) -> Group {
        self.group
    }

    /// Rank parameter: `n` for `SL_n`, half-rank `n` for `Sp_2n`.
    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    /// Degree of the associated characteristic polynomials.
    pub fn degree(&self) -> usize {
        match self.group {
            Group::Sl => self.n(),
            Group::Sp => 2 * self.n(),
        }
    }

    /// The full chamber vector; for `Sp` this is `(v_1..v_n, -v_n..-v_1)`.
    pub fn full_coords(&self) -> Vec<BigRational> {
        match self.group {
            Group::Sl => self.coords.clone(),
            Group::Sp => self
                .coords
                .iter()
                .cloned()
                .chain(self.coords.iter().rev().map(|c| -c))
                .collect(),
        }
    }

    /// Partial sums `w_i = v_1 + ... + v_i` for `i = 1..=n`.
    pub fn partial_sums(&self) -> Vec<BigRational> {
        let mut acc = BigRational::zero();
        self.coords
            .iter()
            .map(|c| {
                acc += c;
                acc.clone()
            })
            .collect()
    }

    pub fn rho(&self) -> BigRational {
        match self.group {
            Group::Sl => rho_sl(self),
            Group::Sp => rho_sp(self),
        }
    }

    pub fn scaled(&self, c: &BigRational) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::InvalidParameter("scale must be positive".into()));
        }
        Self::new(self.group, self.coords.iter().map(|x| x * c).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(rational_to_f64).collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(format_rational).collect()
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(","))
    }
}

/// Eigenvalue signs ordered by decreasing modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignPattern {
    signs: Vec<i8>,
}

impl SignPattern {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.is_empty() || signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidSignPattern(format!("{signs:?}")));
        }
        Ok(SignPattern { signs })
    }

    pub fn all_positive(n: usize) -> Self {
        SignPattern { signs: vec![1; n] }
    }

    /// Parse `"+,-,+"` (also accepts `1,-1` and an unseparated `"+-+"`).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let tokens: Vec<String> = if s.contains(',') {
            s.split(',').map(|t| t.trim().to_string()).collect()
        } else {
            s.chars().map(|c| c.to_string()).collect()
        };
        let signs = tokens
            .iter()
            .map(|t| match t.as_str() {
                "+" | "1" | "+1" => Ok(1),
                "-" | "-1" => Ok(-1),
                _ => Err(Error::InvalidSignPattern(format!("bad sign {t:?}"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        Self::new(signs)
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn product(&self) -> i8 {
        self.signs.iter().product()
    }

    /// Prefix products `M_i = m_1 * ... * m_i` for `i = 1..=n`.
    pub fn prefix_products(&self) -> Vec<i8> {
        let mut acc = 1i8;
        self.signs
            .iter()
            .map(|&s| {
                acc *= s;
                acc
            })
            .collect()
    }

    /// Signs attached to the full chamber vector of `group`.
    pub fn full(&self, group: Group) -> Vec<i8> {
        match group {
            Group::Sl => self.signs.clone(),
            Group::Sp => self
                .signs
                .iter()
                .copied()
                .chain(self.signs.iter().rev().copied())
                .collect(),
        }
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<&str> = self
            .signs
            .iter()
            .map(|&x| if x > 0 { "+" } else { "-" })
            .collect();
        f.write_str(&s.join(","))
    }
}

/// Check that `m` fits `v`; in SL realization contexts the product must be `+1`.
pub fn check_pattern(v: &Direction, m: &SignPattern, require_unit_product: bool) -> Result<()> {
    if m.len() != v.n() {
        return Err(Error::InvalidSignPattern(format!(
            "pattern has {} signs, direction has {} coordinates",
            m.len(),
            v.n()
        )));
    }
    if require_unit_product && v.group() == Group::Sl && m.product() != 1 {
        return Err(Error::InvalidSignPattern(
            "product of signs must be +1 for SL realization".into(),
        ));
    }
    Ok(())
}

/// `rho_SL(v) = sum_{i<n} (n - i) v_i`, cross-checked against `1/2 sum_{i<j} (v_i - v_j)`.
pub fn rho_sl(v: &Direction) -> BigRational {
    let n = v.n();
    let c = v.coords();
    let weighted: BigRational = (0..n)
        .map(|i| &c[i] * BigInt::from((n - 1 - i) as u64))
        .sum();
    debug_assert_eq!(weighted, rho_sl_pairwise(c));
    weighted
}

/// `1/2 sum_{i<j} (v_i - v_j)`.
pub fn rho_sl_pairwise(c: &[BigRational]) -> BigRational {
    let mut s = BigRational::zero();
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            s += &c[i] - &c[j];
        }
    }
    s / BigInt::from(2)
}

/// `rho_Sp(v) = sum_i (n + 1 - i) v_i`.
pub fn rho_sp(v: &Direction) -> BigRational {
    let n = v.n();
    v.coords()
        .iter()
        .enumerate()
        .map(|(i, c)| c * BigInt::from((n - i) as u64))
        .sum()
}

/// The value `coeff * sqrt(radicand)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    pub coeff: BigRational,
    pub radicand: BigRational,
}

impl Surd {
    pub fn rational(r: BigRational) -> Self {
        Surd {
            coeff: r,
            radicand: BigRational::one(),
        }
    }

    /// Exact square.
    pub fn square(&self) -> BigRational {
        &self.coeff * &self.coeff * &self.radicand
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.coeff) * rational_to_f64(&self.radicand).sqrt()
    }

    /// Exact equality as real numbers.
    pub fn value_eq(&self, other: &Surd) -> bool {
        self.coeff.signum() == other.coeff.signum() && self.square() == other.square()
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand.is_one() {
            write!(f, "{}", format_rational(&self.coeff))
        } else {
            write!(
                f,
                "{}*sqrt({})",
                format_rational(&self.coeff),
                format_rational(&self.radicand)
            )
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    Euclidean,
    Max,
}

impl FromStr for Norm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" | "euc" | "l2" => Ok(Norm::Euclidean),
            "max" | "sup" | "linf" => Ok(Norm::Max),
            _ => Err(Error::Parse(format!("unknown norm {s:?}"))),
        }
    }
}

/// Unit vector of the closed chamber maximizing `rho_SL` for a norm.
#[derive(Clone, Debug)]
pub struct ExtremalDirection {
    pub norm: Norm,
    pub n: usize,
    /// Coordinates, each as a surd (all share one radicand).
    pub coords: Vec<Surd>,
    pub rho: Surd,
}

impl ExtremalDirection {
    pub fn coords_f64(&self) -> Vec<f64> {
        self.coords.iter().map(Surd::to_f64).collect()
    }

    pub fn rho_f64(&self) -> f64 {
        self.rho.to_f64()
    }
}

pub fn extremal_direction(norm: Norm, n: usize) -> Result<ExtremalDirection> {
    if n < 2 {
        return Err(Error::InvalidParameter("extremal direction needs n >= 2".into()));
    }
    let nn = BigInt::from(n as u64);
    let weights: Vec<i64> = (1..=n as i64).map(|k| n as i64 + 1 - 2 * k).collect();
    let (coords, rho) = match norm {
        Norm::Euclidean => {
            let r = BigRational::new(BigInt::from(3), &nn * (&nn * &nn - 1u32));
            let coords: Vec<Surd> = weights
                .iter()
                .map(|&w| Surd {
                    coeff: BigRational::from_integer(BigInt::from(w)),
                    radicand: r.clone(),
                })
                .collect();
            let rho = Surd {
                coeff: BigRational::one(),
                radicand: BigRational::new(&nn * (&nn * &nn - 1u32), BigInt::from(12)),
            };
            (coords, rho)
        }
        Norm::Max => {
            let coords: Vec<Surd> = weights
                .iter()
                .map(|&w| Surd::rational(BigRational::from_integer(BigInt::from(w.signum()))))
                .collect();
            let rho = Surd::rational(BigRational::from_integer(BigInt::from((n * n / 4) as u64)));
            (coords, rho)
        }
    };
    // rho computed from the coordinates must agree with the closed form
    let radicand = coords[0].radicand.clone();
    let c: BigRational = coords
        .iter()
        .enumerate()
        .map(|(i, s)| &s.coeff * BigInt::from((n - 1 - i) as u64))
        .sum();
    let from_coords = Surd { coeff: c, radicand };
    debug_assert!(from_coords.value_eq(&rho));
    Ok(ExtremalDirection {
        norm,
        n,
        coords,
        rho,
    })
}

/// Deficit of a two-block partition of the root indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionDeficit {
    /// Zero-based indices of the first block, sorted.
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    pub deficit: BigRational,
    /// Whether each block sums to zero (the hypothesis under which the
    /// deficit is guaranteed positive).
    pub zero_block_sums: bool,
}

fn split_blocks(n: usize, s1: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut a: Vec<usize> = s1.to_vec();
    a.sort_unstable();
    a.dedup();
    if a.len() != s1.len() {
        return Err(Error::InvalidPartition("repeated index".into()));
    }
    if a.iter().any(|&i| i >= n) {
        return Err(Error::InvalidPartition(format!("index out of range 0..{n}")));
    }
    if a.is_empty() || a.len() == n {
        return Err(Error::InvalidPartition(
            "first block must be a proper nonempty subset".into(),
        ));
    }
    let b: Vec<usize> = (0..n).filter(|i| !a.contains(i)).collect();
    Ok((a, b))
}

/// `D = sum_{i<j} v_i - sum_{i<j, same block} v_i = sum_{i<j, blocks differ} v_i`.
///
/// `s1` holds zero-based indices.
pub fn partition_deficit(v: &Direction, s1: &[usize]) -> Result<PartitionDeficit> {
    let n = v.n();
    let c = v.coords();
    let (a, b) = split_blocks(n, s1)?;
    let mut block = vec![0u8; n];
    for &i in &b {
        block[i] = 1;
    }
    let rhs: BigRational = (0..n).map(|i| &c[i] * BigInt::from((n - 1 - i) as u64)).sum();
    let mut lhs = BigRational::zero();
    let mut cross = BigRational::zero();
    for i in 0..n {
        for j in i + 1..n {
            if block[i] == block[j] {
                lhs += &c[i];
            } else {
                cross += &c[i];
            }
        }
    }
    let deficit = rhs - lhs;
    debug_assert_eq!(deficit, cross);
    let zero_block_sums = a.iter().map(|&i| &c[i]).sum::<BigRational>().is_zero()
        && b.iter().map(|&i| &c[i]).sum::<BigRational>().is_zero();
    if zero_block_sums {
        debug_assert!(deficit.is_positive());
    }
    Ok(PartitionDeficit {
        s1: a,
        s2: b,
        deficit,
        zero_block_sums,
    })
}

/// Reciprocal analogue `rho*(v) - rho*(u_1) - rho*(u_2)` for a partition of
/// the conjugate root pairs of an `Sp` direction.
pub fn sp_partition_deficit(v: &Direction, s1: &[usize]) -> Result<PartitionDeficit> {
    let n = v.n();
    let c = v.coords();
    let (a, b) = split_blocks(n, s1)?;
    let rho_star = |idx: &[usize]| -> BigRational {
        let k = idx.len();
        idx.iter()
            .enumerate()
            .map(|(pos, &i)| &c[i] * BigInt::from((k - pos) as u64))
            .sum()
    };
    let full: Vec<usize> = (0..n).collect();
    let deficit = rho_star(&full) - rho_star(&a) - rho_star(&b);
    Ok(PartitionDeficit {
        s1: a,
        s2: b,
        deficit,
        zero_block_sums: true,
    })
}

/// All proper partitions `{S1, S2}` of `0..n`, each listed once (`0 ∈ S1`).
pub fn proper_partitions(n: usize) -> Vec<Vec<usize>> {
    (1u64..(1u64 << n))
        .filter(|mask| mask & 1 == 1 && mask.count_ones() < n as u32)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}

/// Smallest deficit over partitions with zero block sums, if any exist.
pub fn min_partition_deficit(v: &Direction) -> Option<PartitionDeficit> {
    proper_partitions(v.n())
        .into_iter()
        .filter_map(|s| partition_deficit(v, &s).ok())
        .filter(|d| d.zero_block_sums)
        .min_by(|x, y| x.deficit.cmp(&y.deficit))
}

/// The float value of a rational deficit.
pub fn deficit_f64(d: &PartitionDeficit) -> f64 {
    d.deficit.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn sl(c: &[i64]) -> Direction {
        Direction::from_ints(Group::Sl, c).unwrap()
    }

    #[test]
    fn rho_sl_examples() {
        assert_eq!(rho_sl(&sl(&[1, -1])), int(1));
        assert_eq!(rho_sl(&sl(&[1, 0, -1])), int(2));
        let v = sl(&[3, 1, -1, -3]);
        assert_eq!(rho_sl(&v), int(10));
        assert_eq!(rho_sl_pairwise(v.coords()), int(10));
    }

    #[test]
    fn rho_sp_examples() {
        assert_eq!(rho_sp(&Direction::from_ints(Group::Sp, &[1]).unwrap()), int(1));
        assert_eq!(rho_sp(&Direction::from_ints(Group::Sp, &[2, 1]).unwrap()), int(5));
        assert!(Direction::from_ints(Group::Sp, &[1, 1]).is_err());
    }

    #[test]
    fn direction_invariants_rejected() {
        assert!(Direction::from_ints(Group::Sl, &[1, 1, -2]).is_err());
        assert!(Direction::from_ints(Group::Sl, &[2, 1]).is_err());
        assert!(Direction::from_ints(Group::Sl, &[1]).is_err());
        assert!(Direction::from_ints(Group::Sp, &[2, 0]).is_err());
        assert!(Direction::parse(Group::Sl, "1/2,-1/2").is_ok());
    }

    #[test]
    fn sp_full_vector_is_mirrored() {
        let v = Direction::from_ints(Group::Sp, &[2, 1]).unwrap();
        assert_eq!(v.full_coords(), vec![int(2), int(1), int(-1), int(-2)]);
        let m = SignPattern::parse("+,-").unwrap();
        assert_eq!(m.full(Group::Sp), vec![1, -1, -1, 1]);
    }

    #[test]
    fn extremal_examples() {
        let e = extremal_direction(Norm::Euclidean, 2).unwrap();
        assert!((e.rho_f64() - 0.5f64.sqrt()).abs() < 1e-12);
        assert_eq!(e.rho.square(), ratio(1, 2));
        let m4 = extremal_direction(Norm::Max, 4).unwrap();
        assert_eq!(m4.rho, Surd::rational(int(4)));
        let m3 = extremal_direction(Norm::Max, 3).unwrap();
        assert_eq!(m3.coords_f64(), vec![1.0, 0.0, -1.0]);
        assert_eq!(m3.rho, Surd::rational(int(2)));
    }

    #[test]
    fn partition_deficit_examples() {
        let d = partition_deficit(&sl(&[3, 1, -1, -3]), &[0, 3]).unwrap();
        assert_eq!(d.deficit, int(6));
        assert!(d.zero_block_sums);
        let d = partition_deficit(&sl(&[1, -1]), &[0]).unwrap();
        assert!(!d.zero_block_sums);
        let d = partition_deficit(&sl(&[2, 1, -1, -2]), &[0, 3]).unwrap();
        assert_eq!(d.s2, vec![1, 2]);
        assert_eq!(d.deficit, int(4));
        assert!(partition_deficit(&sl(&[1, -1]), &[]).is_err());
        assert!(partition_deficit(&sl(&[1, -1]), &[0, 1]).is_err());
    }

    #[test]
    fn min_deficit_for_symmetric_three() {
        let d = min_partition_deficit(&sl(&[1, 0, -1])).unwrap();
        assert_eq!(d.deficit, int(1));
        assert_eq!(d.s2, vec![1]);
    }

    #[test]
    fn sign_pattern_parsing() {
        let m = SignPattern::parse("+,-,-").unwrap();
        assert_eq!(m.prefix_products(), vec![1, -1, 1]);
        assert_eq!(m.product(), 1);
        assert_eq!(SignPattern::parse("+-").unwrap().signs(), &[1, -1]);
        assert!(SignPattern::parse("+,x").is_err());
    }
}
