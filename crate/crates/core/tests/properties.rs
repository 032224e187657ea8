use arcseries::bell::{bell, bell_genfun, bell_rec, BellArgs};
use arcseries::exact::{factorial, int, rat};
use arcseries::numeric::{arccos_fp, arcsin_fp, pi_ref, FixNum};
use arcseries::series::{arccos_ratio_pow, arcsin_pow, deriv_at_one, ratio_pow_alpha, DerivForm};
use arcseries::stirling::{stirling1, stirling_oracle};
use arcseries::verify::{run, Suite};
use arcseries::{Rational, Series};
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn stirling_recurrence_matches_oracle(n in 0usize..40, k in 0usize..40) {
        prop_assume!(k <= n);
        prop_assert_eq!(stirling1(n, k).unwrap(), stirling_oracle(n, k).unwrap());
    }

    #[test]
    fn bell_routes_agree(n in 1usize..12, k in 1usize..12, values in prop::collection::vec(small_rational(), 12)) {
        prop_assume!(k <= n);
        let args = BellArgs::new(values).unwrap();
        let a = bell(n, k, &args).unwrap();
        prop_assert_eq!(&a, &bell_rec(n, k, &args).unwrap());
        prop_assert_eq!(&a, &bell_genfun(n, k, &args).unwrap());
    }

    #[test]
    fn arcsin_powers_multiply(k1 in 1usize..6, k2 in 1usize..6, hyperbolic in any::<bool>()) {
        let a = arcsin_pow(k1, 10, hyperbolic).unwrap();
        let b = arcsin_pow(k2, 10, hyperbolic).unwrap();
        let c = arcsin_pow(k1 + k2, 10, hyperbolic).unwrap();
        prop_assert_eq!(a.mul_truncated(&b).unwrap().coeffs, c.coeffs);
    }

    #[test]
    fn alpha_exponents_add(p in -6i64..6, q in -6i64..6, d in 1i64..5) {
        let (a, b) = (rat(p, d), rat(q, d));
        let sa: Series = ratio_pow_alpha(&a, 8).unwrap();
        let sb = ratio_pow_alpha(&b, 8).unwrap();
        let sum = ratio_pow_alpha(&(a + b), 8).unwrap();
        prop_assert_eq!(sa.mul_truncated(&sb).unwrap().coeffs, sum.coeffs);
    }

    #[test]
    fn derivatives_are_scaled_coefficients(k in 1usize..6, m in 1usize..14) {
        let s = arccos_ratio_pow(k, m, false).unwrap();
        prop_assert_eq!(deriv_at_one(k, m, DerivForm::Ratio).unwrap(), int(factorial(m)) * &s.coeffs[m]);
    }

    #[test]
    fn interval_products_contain_truth(a in small_rational(), b in small_rational(), digits in 5u32..30) {
        let fa = FixNum::from_rational(&a, digits).unwrap();
        let fb = FixNum::from_rational(&b, digits).unwrap();
        prop_assert!(fa.mul(&fb).contains(&(&a * &b)));
        prop_assert!(fa.sub(&fb).contains(&(&a - &b)));
    }

    #[test]
    fn arcsin_is_odd_and_arccos_reflects(n in -99i64..=99) {
        let x = rat(n, 100);
        let s = arcsin_fp(&x, 30).unwrap().add(&arcsin_fp(&-x.clone(), 30).unwrap());
        prop_assert!(s.mantissa().abs() <= BigInt::from(2) + BigInt::from(s.err_ulp().clone()));
        let c = arccos_fp(&x, 30).unwrap().add(&arccos_fp(&-x, 30).unwrap());
        prop_assert!(c.overlaps(&pi_ref(30).unwrap()));
    }
}

#[test]
fn float_series_follow_the_exact_ones() {
    let exact = arcsin_pow(3, 12, false).unwrap();
    let float = exact.to_scalar::<f64>();
    let x = 0.6;
    let e: f64 = num_traits::ToPrimitive::to_f64(&exact.eval(&rat(3, 5))).unwrap();
    assert!((float.eval(&x) - e).abs() < 1e-12);
    let f32s = ratio_pow_alpha(&0.5f32, 6).unwrap();
    let f64s = ratio_pow_alpha(&0.5f64, 6).unwrap();
    for (a, b) in f32s.coeffs.iter().zip(&f64s.coeffs) {
        assert!((*a as f64 - b).abs() < 1e-5);
    }
}

#[test]
fn verify_output_is_reproducible() {
    assert_eq!(run(Suite::All, 4, 9).unwrap(), run(Suite::All, 4, 9).unwrap());
}
