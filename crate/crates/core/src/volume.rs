//! Haar volume of tubes around chamber rays, and an exhaustive census of
//! `SL(2, Z)` by entry height.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chamber::{Direction, Group, Norm};
use crate::error::{Error, Result};
use crate::par;

pub const CENSUS_CAP: i64 = 300;
const REPLICATES: usize = 8;

/// Positive roots evaluated at `u`: `u_i - u_j` for `SL`; `u_i - u_j`,
/// `u_i + u_j` and `2 u_i` for `Sp` with `u` the half-vector.
pub fn positive_roots(group: Group, u: &[f64]) -> Vec<f64> {
    let n = u.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(u[i] - u[j]);
            if group == Group::Sp {
                out.push(u[i] + u[j]);
            }
        }
        if group == Group::Sp {
            out.push(2.0 * u[i]);
        }
    }
    out
}

/// `prod sinh(alpha(u))` over positive roots.
pub fn haar_density(group: Group, u: &[f64]) -> f64 {
    positive_roots(group, u).into_iter().map(f64::sinh).product()
}

fn ln_sinh(x: f64) -> f64 {
    if x <= 0.0 {
        f64::NEG_INFINITY
    } else if x > 20.0 {
        x - std::f64::consts::LN_2 + (-(2.0 * x)).exp().ln_1p()
    } else {
        x.sinh().ln()
    }
}

/// `log` of [`haar_density`]; `-inf` on or beyond a wall.
pub fn log_haar_density(group: Group, u: &[f64]) -> f64 {
    positive_roots(group, u).into_iter().map(ln_sinh).sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct TubeSpec {
    pub group: Group,
    pub v: Vec<f64>,
    #[serde(rename = "T")]
    pub t: f64,
    pub eps: f64,
    pub norm: Norm,
}

impl TubeSpec {
    pub fn new(v: &Direction, t: f64, eps: f64, norm: Norm) -> Result<Self> {
        if !(eps > 0.0) || !t.is_finite() || t <= 0.0 {
            return Err(Error::InvalidParameter("tube needs T > 0 and eps > 0".into()));
        }
        let spec = TubeSpec {
            group: v.group(),
            v: v.to_f64(),
            t,
            eps,
            norm,
        };
        let d = spec.wall_distance();
        if d <= eps {
            return Err(Error::WallTouching(format!(
                "distance {d} from T v to the walls is at most eps = {eps}"
            )));
        }
        Ok(spec)
    }

    /// Chamber coordinates: the trace-zero hyperplane for `SL`, the
    /// half-vector for `Sp`.
    pub fn dimension(&self) -> usize {
        match self.group {
            Group::Sl => self.v.len() - 1,
            Group::Sp => self.v.len(),
        }
    }

    /// Distance from `T v` to the nearest wall in the ball norm.
    pub fn wall_distance(&self) -> f64 {
        let n = self.v.len();
        // wall alpha = 0 lies at alpha(Tv) / |alpha|_dual
        let (simple, last_dual) = match self.norm {
            Norm::Euclidean => (std::f64::consts::SQRT_2, 2.0),
            Norm::Max => (2.0, 2.0),
        };
        let mut d = f64::INFINITY;
        for i in 0..n - 1 {
            d = d.min(self.t * (self.v[i] - self.v[i + 1]) / simple);
        }
        if self.group == Group::Sp {
            d = d.min(self.t * 2.0 * self.v[n - 1] / last_dual);
        }
        d
    }

    fn center(&self) -> Vec<f64> {
        self.v.iter().map(|x| x * self.t).collect()
    }

    /// Point `T v + offset`, the offset given in orthonormal chamber
    /// coordinates (Helmert basis for `SL`).
    fn point(&self, z: &[f64]) -> Vec<f64> {
        let mut u = self.center();
        match self.group {
            Group::Sp => {
                for (ui, zi) in u.iter_mut().zip(z) {
                    *ui += zi;
                }
            }
            Group::Sl => {
                for (k, zk) in z.iter().enumerate() {
                    let k1 = (k + 1) as f64;
                    let s = zk / (k1 * (k1 + 1.0)).sqrt();
                    for ui in u.iter_mut().take(k + 1) {
                        *ui += s;
                    }
                    u[k + 1] -= k1 * s;
                }
            }
        }
        u
    }

    fn in_ball(&self, z: &[f64], u: &[f64]) -> bool {
        match self.norm {
            Norm::Euclidean => z.iter().map(|x| x * x).sum::<f64>() < self.eps * self.eps,
            Norm::Max => {
                let c = self.center();
                u.iter().zip(&c).all(|(a, b)| (a - b).abs() < self.eps)
            }
        }
    }

    /// Half-width of a cube holding the ball in chamber coordinates.
    fn half_width(&self) -> f64 {
        match (self.norm, self.group) {
            (Norm::Euclidean, _) => self.eps,
            (Norm::Max, Group::Sp) => self.eps,
            (Norm::Max, Group::Sl) => self.eps * (self.v.len() as f64).sqrt(),
        }
    }
}

fn halton(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[derive(Clone, Debug, Serialize)]
pub struct TubeVolume {
    #[serde(rename = "T")]
    pub t: f64,
    pub samples: u64,
    pub seed: u64,
    /// `log` of the volume estimate.
    pub log_estimate: f64,
    /// Standard error of the estimate relative to the estimate.
    pub relative_std_error: f64,
}

impl TubeVolume {
    pub fn estimate(&self) -> f64 {
        self.log_estimate.exp()
    }

    pub fn std_error(&self) -> f64 {
        self.estimate() * self.relative_std_error
    }
}

/// Haar volume of the tube by randomized quasi Monte Carlo: Halton points
/// under independent Cranley-Patterson shifts, the spread across shifts
/// giving the error.
pub fn tube_volume(spec: &TubeSpec, samples: u64, seed: u64) -> Result<TubeVolume> {
    let d = spec.dimension();
    if d > PRIMES.len() {
        return Err(Error::InvalidParameter("tube dimension too large".into()));
    }
    if samples < REPLICATES as u64 {
        return Err(Error::InvalidParameter(format!("need at least {REPLICATES} samples")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shifts: Vec<Vec<f64>> = (0..REPLICATES)
        .map(|_| (0..d).map(|_| rng.random::<f64>()).collect())
        .collect();
    let per = samples / REPLICATES as u64;
    let log_center = log_haar_density(spec.group, &spec.center());
    let h = spec.half_width();
    let means = par::map(&shifts, |shift| {
        let mut acc = 0.0;
        let mut z = vec![0.0; d];
        for i in 1..=per {
            for (k, zk) in z.iter_mut().enumerate() {
                let x = (halton(i, PRIMES[k]) + shift[k]).fract();
                *zk = (2.0 * x - 1.0) * h;
            }
            let u = spec.point(&z);
            if spec.in_ball(&z, &u) {
                acc += (log_haar_density(spec.group, &u) - log_center).exp();
            }
        }
        acc / per as f64
    });
    let r = REPLICATES as f64;
    let mean = means.iter().sum::<f64>() / r;
    let var = means.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (r - 1.0);
    let cube = (2.0 * h).powi(d as i32);
    Ok(TubeVolume {
        t: spec.t,
        samples: per * REPLICATES as u64,
        seed,
        log_estimate: mean.ln() + log_center + cube.ln(),
        relative_std_error: if mean > 0.0 { (var / r).sqrt() / mean } else { f64::INFINITY },
    })
}

/// Volumes along a grid, each point with its own derived seed.
pub fn volume_curve(
    v: &Direction,
    grid: &[f64],
    eps: f64,
    norm: Norm,
    samples: u64,
    seed: u64,
) -> Result<Vec<TubeVolume>> {
    grid.iter()
        .enumerate()
        .map(|(i, &t)| {
            let spec = TubeSpec::new(v, t, eps, norm)?;
            tube_volume(&spec, samples, seed.wrapping_add(i as u64))
        })
        .collect()
}

/// Least-squares slope of `log volume` against `T`.
pub fn volume_slope(curve: &[TubeVolume]) -> Option<f64> {
    let xs: Vec<f64> = curve.iter().map(|c| c.t).collect();
    let ys: Vec<f64> = curve.iter().map(|c| c.log_estimate).collect();
    ls_slope(&xs, &ys)
}

pub fn ls_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let k = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / k;
    let ym = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - xm).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bin {
    pub left: f64,
    pub right: f64,
    pub count: u64,
}

pub fn histogram(values: &[f64], width: f64) -> Vec<Bin> {
    let max = values.iter().fold(0.0f64, |m, x| m.max(*x));
    let k = ((max / width).floor() as usize) + 1;
    let mut counts = vec![0u64; k];
    for x in values {
        counts[((x / width).floor() as usize).min(k - 1)] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| Bin {
            left: i as f64 * width,
            right: (i + 1) as f64 * width,
            count,
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Sl2Census {
    #[serde(rename = "X")]
    pub x: i64,
    pub matrix_count: u64,
    pub loxodromic_count: u64,
    pub distinct_trace_count: u64,
    pub jordan_histogram: Vec<Bin>,
    pub cartan_histogram: Vec<Bin>,
    /// `lambda_1` per distinct loxodromic trace, increasing.
    #[serde(skip)]
    pub trace_lambdas: Vec<f64>,
    /// `|mu|` per matrix, increasing.
    #[serde(skip)]
    pub mu_norms: Vec<f64>,
}

/// `log((|t| + sqrt(t^2 - 4)) / 2)`.
pub fn lambda_of_trace(t: i64) -> f64 {
    let a = t.unsigned_abs() as f64;
    ((a + (a * a - 4.0).sqrt()) / 2.0).ln()
}

/// `mu_1` of a determinant-one 2x2 matrix: half the log of the larger root
/// of `x^2 - s x + 1`, `s` the squared Frobenius norm.
pub fn sl2_mu(a: i64, b: i64, c: i64, d: i64) -> f64 {
    let s = (a * a + b * b + c * c + d * d) as f64;
    0.5 * ((s + (s * s - 4.0).max(0.0).sqrt()) / 2.0).ln()
}

impl Sl2Census {
    /// Distinct traces with `lambda_1 <= l`.
    pub fn traces_up_to(&self, l: f64) -> u64 {
        self.trace_lambdas.partition_point(|x| *x <= l) as u64
    }

    /// Matrices with `|mu| <= l`.
    pub fn matrices_up_to(&self, l: f64) -> u64 {
        self.mu_norms.partition_point(|x| *x <= l) as u64
    }
}

/// Every `[[a, b], [c, d]]` with entries in `[-x, x]` and `ad - bc = 1`,
/// partitioned by first row. `|mu|` is the max norm `mu_1`.
pub fn sl2_census(x: i64, cap: i64, bin_width: f64) -> Result<Sl2Census> {
    if x < 1 {
        return Err(Error::InvalidParameter("height bound must be positive".into()));
    }
    if x > cap {
        return Err(Error::CapExceeded { count: x.to_string(), cap: cap as u64 });
    }
    if !(bin_width > 0.0) {
        return Err(Error::InvalidParameter("bin width must be positive".into()));
    }
    let rows: Vec<i64> = (-x..=x).collect();
    let parts = par::map(&rows, |&a| {
        let mut mus = Vec::new();
        let mut traces = Vec::new();
        for b in -x..=x {
            // a d - b c = 1
            for c in -x..=x {
                let num = 1 + b * c;
                let d = if a == 0 {
                    if num != 0 {
                        continue;
                    }
                    // every d works
                    for d in -x..=x {
                        mus.push(sl2_mu(a, b, c, d));
                        traces.push(a + d);
                    }
                    continue;
                } else if num % a == 0 {
                    num / a
                } else {
                    continue;
                };
                if d.abs() <= x {
                    mus.push(sl2_mu(a, b, c, d));
                    traces.push(a + d);
                }
            }
        }
        (mus, traces)
    });
    let mut mu_norms = Vec::new();
    let mut traces = Vec::new();
    for (m, t) in parts {
        mu_norms.extend(m);
        traces.extend(t);
    }
    let matrix_count = mu_norms.len() as u64;
    let lox: Vec<i64> = traces.iter().copied().filter(|t| t.abs() > 2).collect();
    let lox_lambdas: Vec<f64> = lox.iter().map(|&t| lambda_of_trace(t)).collect();
    let mut distinct = lox.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let mut trace_lambdas: Vec<f64> = distinct.iter().map(|&t| lambda_of_trace(t)).collect();
    trace_lambdas.sort_by(f64::total_cmp);
    mu_norms.sort_by(f64::total_cmp);
    Ok(Sl2Census {
        x,
        matrix_count,
        loxodromic_count: lox.len() as u64,
        distinct_trace_count: distinct.len() as u64,
        jordan_histogram: histogram(&lox_lambdas, bin_width),
        cartan_histogram: histogram(&mu_norms, bin_width),
        trace_lambdas,
        mu_norms,
    })
}

/// Slopes of `log` cumulative counts on an even grid of thresholds in
/// `[lo, hi]`: distinct traces against `lambda_1`, matrices against `|mu|`.
pub fn census_slopes(c: &Sl2Census, lo: f64, hi: f64, points: usize) -> Option<(f64, f64)> {
    let xs: Vec<f64> = (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect();
    let tr: Vec<f64> = xs.iter().map(|&l| (c.traces_up_to(l) as f64).ln()).collect();
    let mm: Vec<f64> = xs.iter().map(|&l| (c.matrices_up_to(l) as f64).ln()).collect();
    Some((ls_slope(&xs, &tr)?, ls_slope(&xs, &mm)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_examples() {
        let s = |x: f64| x.sinh();
        assert!((haar_density(Group::Sl, &[0.7, -0.7]) - s(1.4)).abs() < 1e-12);
        let d3 = haar_density(Group::Sl, &[1.0, 0.0, -1.0]);
        assert!((d3 - s(1.0) * s(1.0) * s(2.0)).abs() < 1e-12);
        let d4 = haar_density(Group::Sp, &[2.0, 1.0]);
        assert!((d4 - s(1.0) * s(3.0) * s(4.0) * s(2.0)).abs() < 1e-9);
        assert_eq!(haar_density(Group::Sl, &[1.0, 1.0, -2.0]), 0.0);
        assert!((log_haar_density(Group::Sp, &[2.0, 1.0]) - d4.ln()).abs() < 1e-12);
        assert_eq!(log_haar_density(Group::Sl, &[0.0, 0.0]), f64::NEG_INFINITY);
    }

    #[test]
    fn wall_touching_is_refused() {
        let v = Direction::from_ints(Group::Sl, &[1, 0, -1]).unwrap();
        assert!(TubeSpec::new(&v, 0.5, 0.5, Norm::Euclidean).is_err());
        assert!(TubeSpec::new(&v, 5.0, 0.5, Norm::Euclidean).is_ok());
    }

    #[test]
    fn sl2_volume_matches_quadrature() {
        // on (t, -t) the Helmert coordinate is z = sqrt(2) t
        let v = Direction::from_ints(Group::Sl, &[1, -1]).unwrap();
        let spec = TubeSpec::new(&v, 3.0, 0.5, Norm::Euclidean).unwrap();
        let vol = tube_volume(&spec, 80_000, 1).unwrap();
        let c = 3.0 * std::f64::consts::SQRT_2;
        let k = 20_000;
        let h = 1.0 / k as f64;
        let quad: f64 = (0..k)
            .map(|i| {
                let z = c - 0.5 + (i as f64 + 0.5) * h;
                (std::f64::consts::SQRT_2 * z).sinh() * h
            })
            .sum();
        assert!((vol.estimate() / quad - 1.0).abs() < 1e-4, "{} {}", vol.estimate(), quad);
    }

    #[test]
    fn seeds_reproduce() {
        let v = Direction::from_ints(Group::Sp, &[2, 1]).unwrap();
        let spec = TubeSpec::new(&v, 4.0, 0.4, Norm::Max).unwrap();
        let a = tube_volume(&spec, 4000, 9).unwrap();
        let b = tube_volume(&spec, 4000, 9).unwrap();
        assert_eq!(a.log_estimate, b.log_estimate);
    }

    #[test]
    fn tiny_census() {
        let c = sl2_census(1, CENSUS_CAP, 0.5).unwrap();
        // entries in {-1, 0, 1}
        let mut n = 0;
        for a in -1..=1i64 {
            for b in -1..=1i64 {
                for cc in -1..=1i64 {
                    for d in -1..=1i64 {
                        if a * d - b * cc == 1 {
                            n += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(c.matrix_count, n);
        assert_eq!(c.distinct_trace_count, 0);
        assert!(sl2_census(400, CENSUS_CAP, 0.5).is_err());
    }
}
