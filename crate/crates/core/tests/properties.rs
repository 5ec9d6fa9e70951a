use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use vieta_tubes::boxes::coeff_box;
use vieta_tubes::chamber::{rho_sl, rho_sl_pairwise, Direction, Group, SignPattern};
use vieta_tubes::factor::{classify, Verdict};
use vieta_tubes::poly::IntPolynomial;
use vieta_tubes::rational::{int, ratio};
use vieta_tubes::realize::{companion, jordan_data, sp_verify};
use vieta_tubes::roots::{discriminant, discriminant_from_roots, isolate_real_roots};
use vieta_tubes::volume::{haar_density, log_haar_density};

fn distinct_roots() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::btree_set(-40i64..40, 2..6).prop_map(|s| s.into_iter().collect())
}

fn from_roots(r: &[i64]) -> IntPolynomial {
    r.iter().fold(IntPolynomial::one(), |acc, &x| acc.mul(&IntPolynomial::linear(BigInt::from(x))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vieta_round_trip(a in prop::collection::vec(-1000i64..1000, 1..7)) {
        let a: Vec<BigInt> = a.into_iter().map(BigInt::from).collect();
        prop_assert_eq!(IntPolynomial::from_vieta(&a).vieta(), a);
    }

    #[test]
    fn division_inverts_multiplication(
        f in prop::collection::vec(-20i64..20, 1..5),
        g in prop::collection::vec(-20i64..20, 1..5),
    ) {
        let mut f = f; f.insert(0, 1);
        let mut g = g; g.insert(0, 1);
        let (f, g) = (IntPolynomial::from_i64_descending(&f), IntPolynomial::from_i64_descending(&g));
        prop_assert_eq!(f.mul(&g).exact_div(&g), Some(f));
    }

    #[test]
    fn roots_are_enclosed_and_ordered(r in distinct_roots()) {
        let q = from_roots(&r);
        let c = isolate_real_roots(&q, &[], 30).unwrap();
        prop_assert!(c.certified());
        prop_assert_eq!(c.len(), r.len());
        let vals = c.values_f64();
        for w in vals.windows(2) {
            prop_assert!(w[0].abs() >= w[1].abs() - 1e-9);
        }
        for x in &r {
            prop_assert!(vals.iter().any(|y| (y - *x as f64).abs() < 1e-6));
        }
        let d = discriminant_from_roots(&c);
        prop_assert!(d.contains(&vieta_tubes::dyadic::Dyadic::from_int(discriminant(&q))));
    }

    #[test]
    fn companion_round_trip(a in prop::collection::vec(-500i64..500, 1..4)) {
        let mut a: Vec<BigInt> = a.into_iter().map(BigInt::from).collect();
        a.push(BigInt::from(1));
        let p = IntPolynomial::from_vieta(&a);
        let c = companion(&p).unwrap();
        prop_assert_eq!(c.char_poly(), p);
        prop_assert_eq!(c.det(), BigInt::from(1));
        let j = jordan_data(&c).unwrap();
        if j.loxodromic {
            let s: f64 = j.lambda.unwrap().iter().sum();
            prop_assert!(s.abs() < 1e-9);
        }
    }

    #[test]
    fn reducible_products_are_detected(a in distinct_roots(), k in 2i64..30) {
        // (x - r) times an irreducible quadratic
        let f = IntPolynomial::linear(BigInt::from(a[0]));
        let g = IntPolynomial::from_i64_descending(&[1, -k, -1]);
        let c = classify(&f.mul(&g), &[]).unwrap();
        prop_assert_eq!(c.verdict, Verdict::Reducible);
        prop_assert_eq!(c.factor.unwrap().mul(&c.cofactor.unwrap()), f.mul(&g));
    }

    #[test]
    fn rho_forms_agree(c in prop::collection::btree_set(-60i64..60, 2..7)) {
        let mut c: Vec<BigRational> = c.into_iter().rev().map(int).collect();
        let n = c.len();
        let mean = c.iter().cloned().sum::<BigRational>() / BigInt::from(n);
        for x in &mut c { *x -= &mean; }
        let v = Direction::sl(c.clone()).unwrap();
        prop_assert_eq!(rho_sl(&v), rho_sl_pairwise(&c));
    }

    #[test]
    fn box_members_satisfy_inequalities(t in 4i64..9, seed in 0u64..1000) {
        let v = Direction::from_ints(Group::Sl, &[1, 0, -1]).unwrap();
        let m = SignPattern::parse("+,-,-").unwrap();
        let bx = coeff_box(&v, &m, &int(t), &ratio(1, 10)).unwrap();
        for q in bx.sample(20, seed).unwrap() {
            prop_assert!(bx.contains(&q));
            prop_assert!(bx.satisfies_inequalities(&q).unwrap());
        }
    }

    #[test]
    fn haar_density_vanishes_on_walls(a in 0.1f64..5.0, b in 0.1f64..5.0) {
        prop_assert_eq!(haar_density(Group::Sl, &[a, a, -2.0 * a]), 0.0);
        prop_assert_eq!(haar_density(Group::Sp, &[a + b, 0.0]), 0.0);
        let u = [a + b, b];
        prop_assert!((log_haar_density(Group::Sp, &u) - haar_density(Group::Sp, &u).ln()).abs() < 1e-9);
    }

    #[test]
    fn symplectic_products_stay_symplectic(x in -5i64..5, y in -5i64..5) {
        use vieta_tubes::realize::IntMatrix;
        let a = IntMatrix::from_i64(&[&[1, x], &[0, 1]]).unwrap();
        let b = IntMatrix::from_i64(&[&[1, 0], &[y, 1]]).unwrap();
        let s = sp_verify(&a.mul(&b).unwrap()).unwrap();
        prop_assert!(s.symplectic && s.reciprocal_charpoly);
    }
}
