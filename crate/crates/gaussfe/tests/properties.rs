use gaussfe::afe::cutoff_k;
use gaussfe::cf::{self, Depth};
use gaussfe::chowla::{self, FracSeq};
use gaussfe::{series, wilton, BigFloat, ExactReal, Integer, Rational, Real};
use proptest::prelude::*;

fn quotients() -> impl Strategy<Value = Vec<u32>> {
    (prop::collection::vec(1u32..60, 0..14), 2u32..60).prop_map(|(mut v, last)| {
        v.push(last);
        v
    })
}

fn unit_rational() -> impl Strategy<Value = ExactReal> {
    (2i64..2_000_000).prop_flat_map(|q| (1..q).prop_map(move |p| ExactReal::ratio(p, q)))
}

fn quadratic() -> impl Strategy<Value = ExactReal> {
    (prop::sample::select(vec![2i64, 3, 5, 6, 7, 10, 13, 21, 29]), 1i64..4, -30i64..30, 1i64..20, any::<bool>())
        .prop_map(|(d, b, a, c, neg)| ExactReal::quadratic(a, if neg { -b } else { b }, d, c).expect("irrational").frac())
}

fn point() -> impl Strategy<Value = ExactReal> {
    prop_oneof![unit_rational(), quadratic()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn expansion_round_trips(q in quotients()) {
        let ints: Vec<Integer> = q.iter().map(|&a| Integer::from(a)).collect();
        let r = cf::value_of(&ints).unwrap();
        let x = ExactReal::Rational(r);
        prop_assert_eq!(cf::depth(&x).unwrap(), Depth::Finite(q.len()));
        let st = cf::expand(&x, usize::MAX).unwrap();
        prop_assert_eq!(st.quotients(), ints);
    }

    #[test]
    fn convergent_identities(x in point()) {
        let st = cf::expand_reliable(&x, 30).unwrap();
        let top = st.len().saturating_sub(1);
        for k in 0..top {
            prop_assert!(cf::alpha_identity_holds(&st, k).unwrap());
            prop_assert!(cf::beta_reciprocal_holds(&st, k).unwrap());
            prop_assert!(cf::beta_bounds_check(&st, k as isize).unwrap());
            // q_k p_{k−1} − p_k q_{k−1} = (−1)^k
            let det = st.q(k as isize) * st.p(k as isize - 1) - st.p(k as isize) * st.q(k as isize - 1);
            prop_assert_eq!(det, if k % 2 == 0 { 1 } else { -1 });
        }
    }

    #[test]
    fn beta_is_product_of_alphas(x in point()) {
        let st = cf::expand_reliable(&x, 12).unwrap();
        let mut prod = ExactReal::int(1);
        for k in 0..st.len() {
            if st.alpha(k).is_zero() {
                break;
            }
            prod = prod.mul(st.alpha(k)).unwrap();
            prop_assert_eq!(&prod, &st.beta(k as isize));
        }
    }

    #[test]
    fn rational_fast_path_matches_naive(p in 1i64..400, q in 2i64..400, v in 1i64..3000) {
        let x = ExactReal::ratio(p % q, q);
        let v = ExactReal::int(v);
        let fast = chowla::phi1_partial::<BigFloat>(&x, &v, 128).unwrap().sum;
        let naive = chowla::phi1_partial_naive::<BigFloat>(&x, &v, 128).unwrap();
        prop_assert!((fast - naive).abs().to_f64() < 1e-30);
    }

    #[test]
    fn frac_sequence_is_exact_on_rationals(p in 0i64..10_000, q in 1i64..10_000) {
        let r = Rational::from((p, q));
        let seq = FracSeq::<BigFloat>::new(&ExactReal::Rational(r.clone()), 200, 128);
        for (m, t) in (1i64..).zip(seq.take(200)) {
            let exact = Rational::from(&r * m).fract_floor(Integer::new()).0;
            match t {
                None => prop_assert_eq!(exact.cmp0(), std::cmp::Ordering::Equal),
                Some(v) => {
                    let want = BigFloat::from_rational(&exact, 128);
                    prop_assert!((v - want).abs().to_f64() < 1e-36);
                }
            }
        }
    }

    #[test]
    fn frac_sequence_tracks_quadratics(x in quadratic()) {
        let mut seq = FracSeq::<f64>::new(&x, 5000, 53);
        for m in 1..=5000i64 {
            let got = seq.next().unwrap().unwrap();
            let want = x.affine(&Integer::from(m), &Integer::new()).frac().to_f64();
            prop_assert!((got - want).abs() < 1e-15, "m = {}", m);
        }
    }

    #[test]
    fn cutoff_level_is_monotone_in_v(x in point(), v in 1u32..100_000, a in prop::sample::select(vec![1.0, 2.0])) {
        let v1 = ExactReal::int(v as i64);
        let v2 = ExactReal::int(v as i64 * 3 + 1);
        match (cutoff_k(&x, &v1, a), cutoff_k(&x, &v2, a)) {
            (Ok(k1), Ok(k2)) => prop_assert!(k1 <= k2),
            // a shallow rational runs out of levels first at the larger cutoff
            (Ok(_), Err(_)) | (Err(_), Err(_)) => {}
            (Err(e), Ok(_)) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn b1_is_odd(x in point()) {
        let a: f64 = chowla::b1(&x, 53);
        let b: f64 = chowla::b1(&x.neg(), 53);
        prop_assert!((a + b).abs() < 1e-15);
    }

    #[test]
    fn wilton_functional_equation_at_rationals(x in unit_rational()) {
        let p = wilton::wilton_params::<BigFloat>(128);
        let (res, _) = series::exact_fe_residual(&x, &p, usize::MAX, 0.0).unwrap();
        prop_assert!(res.re.abs().to_f64() < 1e-30);
    }
}
