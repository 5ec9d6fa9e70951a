//! Derived values checked against independent computations.

use num_bigint::BigInt;
use num_rational::BigRational;

use vieta_tubes::boxes::coeff_box;
use vieta_tubes::chamber::{Direction, Group, Norm, SignPattern};
use vieta_tubes::entropy::{fit_entropy, count_curve, unit_log_embedding, Filter, Mode};
use vieta_tubes::factor::{classify, Verdict};
use vieta_tubes::poly::IntPolynomial;
use vieta_tubes::rational::{int, ratio};
use vieta_tubes::realize::{cartan_projection, companion, jordan_data, IntMatrix};
use vieta_tubes::roots::{discriminant, isolate_real_roots};
use vieta_tubes::volume::{sl2_census, tube_volume, TubeSpec, CENSUS_CAP};

fn p(c: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64_descending(c)
}

fn from_roots(r: &[i64]) -> IntPolynomial {
    r.iter().fold(IntPolynomial::one(), |acc, &x| acc.mul(&IntPolynomial::linear(BigInt::from(x))))
}

#[test]
fn box_counts_match_float_windows() {
    let v = Direction::from_ints(Group::Sl, &[1, -1]).unwrap();
    let m = SignPattern::parse("+,+").unwrap();
    for t in 4..=14 {
        let bx = coeff_box(&v, &m, &int(t), &ratio(1, 10)).unwrap();
        let e = (t as f64).exp();
        let oracle = (1.1 * e).floor() - (0.9 * e).ceil() + 1.0;
        assert_eq!(bx.exact_count(), &BigInt::from(oracle as i64), "T={t}");
    }
}

#[test]
fn sp_box_counts_are_products_of_windows() {
    let v = Direction::from_ints(Group::Sp, &[2, 1]).unwrap();
    let m = SignPattern::parse("+,+").unwrap();
    for t in 1..=3 {
        let bx = coeff_box(&v, &m, &int(t), &ratio(1, 10)).unwrap();
        let tf = t as f64;
        // a_1 around e^{2T}, a_2 around e^{3T}
        let w = |x: f64| ((1.1 * x).floor() - (0.9 * x).ceil() + 1.0).max(0.0);
        let oracle = w((2.0 * tf).exp()) * w((3.0 * tf).exp());
        assert_eq!(bx.exact_count(), &BigInt::from(oracle as i64), "T={t}");
    }
}

#[test]
fn discriminant_from_integer_roots() {
    for roots in [vec![1, 2, 3], vec![-4, 0, 5, 9], vec![7, -7, 2, 11, -3]] {
        let q = from_roots(&roots);
        let mut d = BigInt::from(1);
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                d *= BigInt::from(roots[i] - roots[j]).pow(2);
            }
        }
        assert_eq!(discriminant(&q), d);
    }
}

#[test]
fn isolation_brackets_integer_roots() {
    let roots = [-9i64, -2, 1, 4, 30];
    let q = from_roots(&roots);
    let c = isolate_real_roots(&q, &[], 40).unwrap();
    assert!(c.certified());
    let mut by_modulus = roots.to_vec();
    by_modulus.sort_by_key(|r| std::cmp::Reverse(r.abs()));
    for (i, r) in by_modulus.iter().enumerate() {
        assert!((c.values_f64()[i] - *r as f64).abs() < 1e-9);
    }
}

#[test]
fn char_poly_by_evaluation() {
    // det(xI - M) at integer points against the characteristic polynomial
    let m = IntMatrix::from_i64(&[&[3, -1, 4, 1], &[5, 9, -2, 6], &[5, 3, 5, -8], &[9, 7, -9, 3]]).unwrap();
    let cp = m.char_poly();
    for x in -3i64..=3 {
        let rows: Vec<Vec<BigInt>> = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| {
                        let d = if i == j { BigInt::from(x) } else { BigInt::from(0) };
                        d - m.get(i, j)
                    })
                    .collect()
            })
            .collect();
        let det = IntMatrix::new(rows).unwrap().det();
        assert_eq!(cp.eval_int(&BigInt::from(x)), det);
    }
}

#[test]
fn jordan_of_golden_square() {
    let j = jordan_data(&companion(&p(&[1, -3, 1])).unwrap()).unwrap();
    let l = ((3.0 + 5f64.sqrt()) / 2.0).ln();
    let lam = j.lambda.unwrap();
    assert!((lam[0] - l).abs() < 1e-13 && (lam[1] + l).abs() < 1e-13);
}

#[test]
fn cartan_is_half_jordan_of_gram() {
    let m = IntMatrix::from_i64(&[&[1, 2, 0], &[1, 3, 1], &[0, 1, 2]]).unwrap();
    assert_eq!(m.det(), BigInt::from(1));
    let mu = cartan_projection(&m).unwrap().mu;
    let g = m.transpose().mul(&m).unwrap();
    let lam = jordan_data(&g).unwrap().lambda.unwrap();
    for i in 0..3 {
        assert!((2.0 * mu[i] - lam[i]).abs() < 1e-12);
    }
    assert!(mu.iter().sum::<f64>().abs() < 1e-12);
}

#[test]
fn cartan_of_golden_square_by_quadratic_formula() {
    let c = cartan_projection(&IntMatrix::from_i64(&[&[2, 1], &[1, 1]]).unwrap()).unwrap();
    let top = (7.0 + 3.0 * 5f64.sqrt()) / 2.0;
    assert!((c.mu[0] - 0.5 * top.ln()).abs() < 1e-13);
    let j = jordan_data(&IntMatrix::from_i64(&[&[2, 1], &[1, 1]]).unwrap()).unwrap();
    let gap = (j.lambda.unwrap()[0] - c.mu[0]).abs();
    assert!(gap.is_finite() && gap < 0.1);
}

#[test]
fn unit_embedding_by_quadratic_formula() {
    let e = unit_log_embedding(&p(&[1, -5, 1])).unwrap();
    let x = (5.0 + 21f64.sqrt()) / 2.0;
    assert!((e.values[0] - x.ln()).abs() < 1e-13);
}

#[test]
fn products_of_quadratics_are_split() {
    for (a, b) in [(3, 7), (4, 9), (5, 6)] {
        let f = p(&[1, -a, 1]);
        let g = p(&[1, -b, -1]);
        let c = classify(&f.mul(&g), &[]).unwrap();
        assert_eq!(c.verdict, Verdict::Reducible);
        assert_eq!(c.factor.unwrap().mul(&c.cofactor.unwrap()), f.mul(&g));
    }
    // x^4 - 10x^2 + 1 splits modulo every prime yet is irreducible
    let q = p(&[1, 0, -10, 0, 1]);
    assert_eq!(classify(&q, &[]).unwrap().verdict, Verdict::Irreducible);
}

#[test]
fn fit_recovers_synthetic_exponential() {
    let v = Direction::from_ints(Group::Sl, &[1, -1]).unwrap();
    let m = SignPattern::parse("+,+").unwrap();
    let grid: Vec<BigRational> = (20..=30).map(int).collect();
    let mut recs = count_curve(&v, &m, &ratio(1, 10), &grid, Filter::Box, Mode::Exact).unwrap();
    for (k, r) in recs.iter_mut().enumerate() {
        // 3^{T} exactly
        r.count = BigInt::from(3).pow(20 + k as u32);
    }
    let fit = fit_entropy(&recs, 3f64.ln()).unwrap();
    assert!(fit.relative_error < 1e-12);
    assert!(fit.max_residual < 1e-9);
}

#[test]
fn sp4_tube_volume_by_quadrature() {
    let v = Direction::from_ints(Group::Sp, &[2, 1]).unwrap();
    let (t, eps) = (2.0, 0.3);
    let spec = TubeSpec::new(&v, t, eps, Norm::Euclidean).unwrap();
    let mc = tube_volume(&spec, 200_000, 3).unwrap();
    let k = 600;
    let h = 2.0 * eps / k as f64;
    let mut quad = 0.0;
    for i in 0..k {
        for j in 0..k {
            let x = -eps + (i as f64 + 0.5) * h;
            let y = -eps + (j as f64 + 0.5) * h;
            if x * x + y * y < eps * eps {
                let (u1, u2) = (2.0 * t + x, t + y);
                quad += (u1 - u2).sinh() * (u1 + u2).sinh() * (2.0 * u1).sinh() * (2.0 * u2).sinh() * h * h;
            }
        }
    }
    assert!((mc.estimate() / quad - 1.0).abs() < 5e-3, "{} vs {}", mc.estimate(), quad);
}

#[test]
fn census_small_heights_by_brute_force() {
    for x in 1..=4i64 {
        let c = sl2_census(x, CENSUS_CAP, 0.5).unwrap();
        let mut count = 0u64;
        let mut traces = std::collections::BTreeSet::new();
        for a in -x..=x {
            for b in -x..=x {
                for cc in -x..=x {
                    for d in -x..=x {
                        if a * d - b * cc == 1 {
                            count += 1;
                            if (a + d).abs() > 2 {
                                traces.insert(a + d);
                            }
                        }
                    }
                }
            }
        }
        assert_eq!(c.matrix_count, count, "X={x}");
        assert_eq!(c.distinct_trace_count, traces.len() as u64, "X={x}");
    }
}
