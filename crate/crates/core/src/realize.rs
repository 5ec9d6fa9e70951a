//! Integer matrices: companion realization in `SL(n, Z)`, Jordan and Cartan
//! projections through exact characteristic polynomials, symplectic checks.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chamber::{Direction, SignPattern};
use crate::dyadic::Interval;
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;
use crate::rational::rational_to_f64;
use crate::roots::{isolate_real_roots, Hint};

const LOG_PRECISION: u64 = 96;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter("matrix must be square and non-empty".into()));
        }
        Ok(IntMatrix { rows })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![BigInt::one(); n])
    }

    pub fn diagonal(d: &[BigInt]) -> Self {
        let n = d.len();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { d[i].clone() } else { BigInt::zero() }).collect())
            .collect();
        IntMatrix { rows }
    }

    /// `J_n = [[0, K], [-K, 0]]` with `K` the `n x n` anti-diagonal identity.
    pub fn symplectic_form(n: usize) -> Self {
        let mut rows = vec![vec![BigInt::zero(); 2 * n]; 2 * n];
        for i in 0..n {
            rows[i][2 * n - 1 - i] = BigInt::one();
            rows[n + i][n - 1 - i] = -BigInt::one();
        }
        IntMatrix { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim();
        IntMatrix {
            rows: (0..n).map(|i| (0..n).map(|j| self.rows[j][i].clone()).collect()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let n = self.dim();
        if other.dim() != n {
            return Err(Error::InvalidParameter("dimension mismatch".into()));
        }
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut s = BigInt::zero();
                        for k in 0..n {
                            if !self.rows[i][k].is_zero() {
                                s += &self.rows[i][k] * &other.rows[k][j];
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        Ok(IntMatrix { rows })
    }

    pub fn trace(&self) -> BigInt {
        (0..self.dim()).map(|i| self.rows[i][i].clone()).sum()
    }

    /// Fraction-free Gaussian elimination.
    pub fn det(&self) -> BigInt {
        let n = self.dim();
        let mut a = self.rows.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    /// `det(xI - M)` by Faddeev-LeVerrier; every division is exact.
    pub fn char_poly(&self) -> IntPolynomial {
        let n = self.dim();
        let mut c = vec![BigInt::zero(); n + 1];
        c[n] = BigInt::one();
        let mut mk = IntMatrix::identity(n);
        for k in 1..=n {
            let am = self.mul(&mk).expect("square");
            let ck: BigInt = -am.trace() / BigInt::from(k);
            c[n - k] = ck.clone();
            mk = am;
            for i in 0..n {
                mk.rows[i][i] += &ck;
            }
        }
        IntPolynomial::from_ascending(c)
    }

    /// Parse a JSON array of rows; entries may be numbers or decimal strings.
    pub fn from_json(s: &str) -> Result<Self> {
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("matrix JSON: {e}")))?;
        let rows = v
            .as_array()
            .ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| Error::Parse("row must be an array".into()))?
                    .iter()
                    .map(|x| {
                        let t = match x {
                            serde_json::Value::String(s) => s.trim().to_string(),
                            serde_json::Value::Number(n) => n.to_string(),
                            _ => return Err(Error::Parse(format!("bad entry {x}"))),
                        };
                        t.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad entry {t}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("strings serialize")
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Vec<String>> =
            self.rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        IntMatrix::from_json(&v.to_string()).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

/// Companion matrix with ones below the diagonal and last column
/// `((-1)^{n+1} a_n, ..., -a_2, a_1)`.
pub fn companion(p: &IntPolynomial) -> Result<IntMatrix> {
    if !p.is_monic() || p.degree() < 1 {
        return Err(Error::InvalidPolynomial("companion needs a monic polynomial".into()));
    }
    let n = p.degree();
    let a = p.vieta();
    if !a[n - 1].is_one() {
        return Err(Error::DeterminantNotOne(format!("a_{n} = {} so the companion matrix has determinant {}", a[n - 1], a[n - 1])));
    }
    let mut rows = vec![vec![BigInt::zero(); n]; n];
    for i in 1..n {
        rows[i][i - 1] = BigInt::one();
    }
    for (i, row) in rows.iter_mut().enumerate() {
        let k = n - i;
        row[n - 1] = if (k + 1) % 2 == 0 { a[k - 1].clone() } else { -&a[k - 1] };
    }
    let m = IntMatrix { rows };
    if m.char_poly() != *p {
        return Err(Error::InvalidPolynomial("companion char poly mismatch".into()));
    }
    Ok(m)
}

#[derive(Clone, Debug, Serialize)]
pub struct JordanData {
    pub char_poly: IntPolynomial,
    /// `log |x_i|` by decreasing modulus, with multiplicity; absent unless the
    /// spectrum is real.
    pub lambda: Option<Vec<f64>>,
    #[serde(skip)]
    pub lambda_enclosures: Option<Vec<Interval>>,
    pub signs: Option<Vec<i8>>,
    pub loxodromic: bool,
}

impl JordanData {
    /// `max_i |lambda_i - T v_i|`, or `None` without a real spectrum.
    pub fn distance_to(&self, v: &Direction, t: &BigRational) -> Option<f64> {
        let lam = self.lambda.as_ref()?;
        let full = v.full_coords();
        if full.len() != lam.len() {
            return None;
        }
        Some(
            lam.iter()
                .zip(&full)
                .map(|(l, vi)| (l - rational_to_f64(&(t * vi))).abs())
                .fold(0.0, f64::max),
        )
    }

    /// Same eigenvalue signs as `m` and `|lambda_i - T v_i| <= -log(1 - r)`,
    /// the log-scale image of a relative disc of radius `r < 1`.
    pub fn in_tube(&self, v: &Direction, m: &SignPattern, t: &BigRational, radius: f64) -> bool {
        if !self.loxodromic || radius >= 1.0 {
            return false;
        }
        let Some(d) = self.distance_to(v, t) else {
            return false;
        };
        let full = m.full(v.group());
        self.signs.as_deref() == Some(&full[..]) && d <= -(1.0 - radius).ln()
    }
}

struct Spectrum {
    logs: Vec<Interval>,
    signs: Vec<i8>,
    simple: bool,
    distinct_moduli: bool,
}

/// Real spectrum with multiplicity, or `None` if some root is not real.
fn real_spectrum(p: &IntPolynomial, hints: &[Hint]) -> Result<Option<Spectrum>> {
    let parts = p.squarefree_decomposition();
    let simple = parts.len() == 1 && parts[0].1 == 1;
    let mut items: Vec<(Interval, i8)> = Vec::new();
    let mut distinct = true;
    for (f, mult) in &parts {
        if f.degree() == 0 {
            continue;
        }
        let h = if simple { hints } else { &[] };
        let mut c = isolate_real_roots(f, h, 0)?;
        if !c.certified() {
            return Ok(None);
        }
        distinct &= c.distinct_moduli();
        let signs = c.signs();
        for i in 0..c.len() {
            let l = c.log_abs(i, LOG_PRECISION)?;
            for _ in 0..*mult {
                items.push((l.clone(), signs[i]));
            }
        }
    }
    items.sort_by(|a, b| b.0.mid_f64().total_cmp(&a.0.mid_f64()));
    Ok(Some(Spectrum {
        logs: items.iter().map(|x| x.0.clone()).collect(),
        signs: items.iter().map(|x| x.1).collect(),
        simple,
        distinct_moduli: distinct,
    }))
}

pub fn jordan_data(m: &IntMatrix) -> Result<JordanData> {
    jordan_with_hints(m, &[])
}

/// As [`jordan_data`], with root-location hints for the isolation.
pub fn jordan_with_hints(m: &IntMatrix, hints: &[Hint]) -> Result<JordanData> {
    let p = m.char_poly();
    if p.constant_term().is_zero() {
        return Ok(JordanData {
            char_poly: p,
            lambda: None,
            lambda_enclosures: None,
            signs: None,
            loxodromic: false,
        });
    }
    Ok(match real_spectrum(&p, hints)? {
        None => JordanData {
            char_poly: p,
            lambda: None,
            lambda_enclosures: None,
            signs: None,
            loxodromic: false,
        },
        Some(s) => JordanData {
            char_poly: p,
            lambda: Some(s.logs.iter().map(Interval::mid_f64).collect()),
            loxodromic: s.simple && s.distinct_moduli,
            lambda_enclosures: Some(s.logs),
            signs: Some(s.signs),
        },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CartanData {
    pub mu: Vec<f64>,
    #[serde(skip)]
    pub mu_enclosures: Vec<Interval>,
}

impl CartanData {
    pub fn max_norm(&self) -> f64 {
        self.mu.iter().fold(0.0, |a, b| a.max(b.abs()))
    }

    pub fn euclidean_norm(&self) -> f64 {
        self.mu.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Logs of the singular values, from the characteristic polynomial of
/// `M^t M`.
pub fn cartan_projection(m: &IntMatrix) -> Result<CartanData> {
    let s = m.transpose().mul(m)?;
    let p = s.char_poly();
    if p.constant_term().is_zero() {
        return Err(Error::InvalidParameter("matrix is singular".into()));
    }
    let spec = real_spectrum(&p, &[])?
        .ok_or_else(|| Error::PrecisionExhausted("singular values not isolated".into()))?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let enc: Vec<Interval> = spec.logs.iter().map(|l| l.mul_rational(&half, LOG_PRECISION)).collect();
    Ok(CartanData {
        mu: enc.iter().map(Interval::mid_f64).collect(),
        mu_enclosures: enc,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SpCheck {
    pub symplectic: bool,
    pub reciprocal_charpoly: bool,
}

pub fn sp_verify(m: &IntMatrix) -> Result<SpCheck> {
    let d = m.dim();
    if d % 2 != 0 {
        return Err(Error::InvalidParameter("symplectic check needs even dimension".into()));
    }
    let j = IntMatrix::symplectic_form(d / 2);
    let lhs = m.transpose().mul(&j)?.mul(m)?;
    Ok(SpCheck {
        symplectic: lhs == j,
        reciprocal_charpoly: m.char_poly().is_palindromic(),
    })
}

/// `max_i |a_i - b_i|`.
pub fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(r: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(r).unwrap()
    }

    #[test]
    fn companion_examples() {
        let p = IntPolynomial::from_i64_descending(&[1, -3, 1]);
        assert_eq!(companion(&p).unwrap(), mat(&[&[0, -1], &[1, 3]]));
        let q = IntPolynomial::from_i64_descending(&[1, -4, 3, -1]);
        let c = companion(&q).unwrap();
        assert_eq!(c.det(), BigInt::one());
        assert_eq!(c.trace(), BigInt::from(4));
        let bad = IntPolynomial::from_i64_descending(&[1, -3, -1]);
        assert!(matches!(companion(&bad), Err(Error::DeterminantNotOne(_))));
    }

    #[test]
    fn det_and_charpoly() {
        let m = mat(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.det(), BigInt::from(18));
        // x^3 - 9x^2 + 24x - 18
        assert_eq!(m.char_poly(), IntPolynomial::from_i64_descending(&[1, -9, 24, -18]));
        assert_eq!(mat(&[&[0, 1], &[1, 0]]).det(), BigInt::from(-1));
    }

    #[test]
    fn jordan_examples() {
        let j = jordan_data(&mat(&[&[2, 1], &[1, 1]])).unwrap();
        assert!(j.loxodromic);
        let l = ((3.0 + 5f64.sqrt()) / 2.0).ln();
        let lam = j.lambda.unwrap();
        assert!((lam[0] - l).abs() < 1e-12 && (lam[1] + l).abs() < 1e-12);
        assert_eq!(j.signs.unwrap(), vec![1, 1]);
        let id = jordan_data(&IntMatrix::identity(3)).unwrap();
        assert!(!id.loxodromic);
        assert_eq!(id.lambda.unwrap(), vec![0.0; 3]);
        let rot = jordan_data(&mat(&[&[0, -1], &[1, 0]])).unwrap();
        assert!(!rot.loxodromic && rot.lambda.is_none());
    }

    #[test]
    fn cartan_examples() {
        let c = cartan_projection(&IntMatrix::identity(2)).unwrap();
        assert_eq!(c.mu, vec![0.0, 0.0]);
        let c = cartan_projection(&mat(&[&[2, 1], &[1, 1]])).unwrap();
        let e = (7.0 + 3.0 * 5f64.sqrt()) / 2.0;
        assert!((c.mu[0] - 0.5 * e.ln()).abs() < 1e-12);
        assert!((c.mu[0] + c.mu[1]).abs() < 1e-12);
    }

    #[test]
    fn symplectic_examples() {
        let j = IntMatrix::symplectic_form(2);
        assert!(sp_verify(&j).unwrap().symplectic);
        let s = sp_verify(&mat(&[&[2, 1], &[1, 1]])).unwrap();
        assert!(s.symplectic && s.reciprocal_charpoly);
        let d = IntMatrix::diagonal(&[2, 1, 1, 1].map(BigInt::from));
        assert!(!sp_verify(&d).unwrap().symplectic);
        assert!(sp_verify(&mat(&[&[1]])).is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = IntMatrix::from_json(r#"[[2,"1"],[1,"-1"]]"#).unwrap();
        assert_eq!(m.to_json(), r#"[["2","1"],["1","-1"]]"#);
        assert!(IntMatrix::from_json("[[1,2]]").is_err());
    }
}
