use proptest::prelude::*;
use tpmodal::decompose::{self, SplitKind};
use tpmodal::dompoly::{self, PolySeq};
use tpmodal::rational::{self, int, ints, Rational};
use tpmodal::seqshape;
use tpmodal::tpcheck::{self, Kernel, MinorSign, TransformVerdict, VerdictKind};
use tpmodal::transform;

fn small_seq(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-6i64..=6, 1..=max_len)
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..=3, c), r))
}

fn kernel(rows: &[Vec<i64>]) -> Kernel {
    Kernel::from_ints(rows).unwrap()
}

proptest! {
    #[test]
    fn apply_is_linear(rows in small_matrix(), a in -4i64..=4, b in -4i64..=4, seed in small_seq(4)) {
        let k = kernel(&rows);
        let n = k.cols();
        let u: Vec<Rational> = (0..n).map(|i| int(seed[i % seed.len()])).collect();
        let v: Vec<Rational> = (0..n).map(|i| int(seed[(i + 1) % seed.len()] - i as i64)).collect();
        let combo: Vec<Rational> = u.iter().zip(&v).map(|(x, y)| int(a) * x + int(b) * y).collect();
        let lhs = transform::apply(&k, &combo).unwrap();
        let (ku, kv) = (transform::apply(&k, &u).unwrap(), transform::apply(&k, &v).unwrap());
        let rhs: Vec<Rational> = ku.iter().zip(kv.iter()).map(|(x, y)| int(a) * x + int(b) * y).collect();
        prop_assert_eq!(lhs.terms(), &rhs[..]);
    }

    #[test]
    fn negation_flips_odd_orders(rows in small_matrix()) {
        let k = kernel(&rows);
        let rep = tpcheck::classify_full(&k);
        let neg = tpcheck::classify_full(&k.negated());
        for (order, (s, t)) in rep.eps.iter().zip(&neg.eps).enumerate() {
            prop_assert_eq!(s.under_negation(order + 1), *t);
        }
        prop_assert_eq!(rep.negated().eps, neg.eps);
    }

    #[test]
    fn transpose_keeps_tp_and_tn(rows in small_matrix()) {
        let k = kernel(&rows);
        let (a, b) = (tpcheck::classify_full(&k), tpcheck::classify_full(&k.transposed()));
        prop_assert_eq!(&a.eps, &b.eps);
        prop_assert_eq!(a.is_tp, b.is_tp);
        prop_assert_eq!(a.is_tn, b.is_tn);
    }

    #[test]
    fn tp_means_nonnegative_signature(rows in small_matrix()) {
        let rep = tpcheck::classify_full(&kernel(&rows));
        let r = rep.r_max;
        if rep.is_tp_to(r).unwrap() {
            prop_assert!(rep.eps.iter().all(|s| matches!(s, MinorSign::Positive | MinorSign::ZeroOnly)));
        }
        if rep.is_tn_to(r).unwrap() {
            prop_assert!(rep.eps.iter().all(|s| matches!(s, MinorSign::Negative | MinorSign::ZeroOnly)));
        }
    }

    #[test]
    fn exact_text_round_trips(p in -100_000i64..=100_000, q in 1i64..=9_999) {
        let x = rational::ratio(p, q);
        prop_assert_eq!(rational::parse_rational(&rational::format_exact(&x)).unwrap(), x.clone());
        let fixed = rational::parse_rational(&rational::render_fixed(&x, 4)).unwrap();
        prop_assert!((fixed - &x) * int(20_000) <= int(1));
        let short = rational::parse_rational(&rational::render_shortest(&x, 4)).unwrap();
        prop_assert_eq!(short, rational::parse_rational(&rational::render_fixed(&x, 4)).unwrap());
    }

    #[test]
    fn decompositions_reassemble(v in small_seq(12)) {
        let u = ints(&v);
        let m = seqshape::modality(&u).m;
        for kind in [SplitKind::Partition, SplitKind::Decomposition] {
            let d = decompose::decompose(&u, m, kind).unwrap();
            prop_assert_eq!(d.parts.len(), m);
            prop_assert_eq!(d.reassemble(), u.clone());
            prop_assert!(d.parts.iter().all(|p| seqshape::modality(p).m == 1));
        }
    }

    #[test]
    fn sign_statistics_ignore_positive_scaling(v in small_seq(12), c in 1i64..=9) {
        let u = ints(&v);
        let scaled: Vec<Rational> = u.iter().map(|x| x * int(c)).collect();
        prop_assert_eq!(seqshape::sign_changes(&u).count, seqshape::sign_changes(&scaled).count);
        prop_assert_eq!(seqshape::s_plus(&u).value, seqshape::s_plus(&scaled).value);
        prop_assert_eq!(seqshape::modality(&u).m, seqshape::modality(&scaled).m);
    }

    #[test]
    fn modality_bounded_by_length(v in small_seq(16)) {
        let u = ints(&v);
        let p = seqshape::modality(&u);
        prop_assert!(2 * p.m <= u.len() + 1);
        prop_assert!(p.s_plus.value <= 2 * p.m);
    }

    #[test]
    fn recurrence_keeps_nonnegativity_and_grows_degree(
        seeds in prop::collection::vec(prop::collection::vec(0i64..=4, 1..=4), 1..=3),
        k in 0usize..=2,
    ) {
        prop_assume!(seeds.iter().all(|s| s.iter().any(|&x| x > 0)));
        let m = seeds.len();
        let polys: Vec<PolySeq> = seeds.iter().enumerate().map(|(i, s)| PolySeq::from_ints(i + 1, s)).collect();
        let gens = dompoly::unroll(&polys, m, k, m + 8).unwrap();
        for n in m..gens.len() {
            prop_assert!(gens[n].coeffs().iter().all(|x| *x >= int(0)));
            let prev_max = gens[n - m..n].iter().filter_map(PolySeq::degree).max().unwrap();
            prop_assert_eq!(gens[n].degree(), Some(prev_max + k));
        }
        prop_assert_eq!(dompoly::unroll_via_kernel(&polys, m, k, m + 8).unwrap(), gens);
    }

    #[test]
    fn tp_kernels_never_add_sign_changes(seed in any::<u64>(), v in prop::collection::vec(-5i64..=5, 4)) {
        let cfg = tpmodal::oracle::TrialConfig { seed, ..Default::default() };
        let k = tpmodal::oracle::random_tp_kernel(&mut cfg.rng(0), 4, 3);
        let u = ints(&v);
        prop_assume!(seqshape::sign_changes(&u).count <= 3);
        prop_assert!(transform::vd_check(&k, &u, 4).unwrap());
    }
}

#[test]
fn composition_parity_exhaustive() {
    let up = TransformVerdict::new(VerdictKind::Up, "", vec![]);
    let ur = TransformVerdict::new(VerdictKind::Ur, "", vec![]);
    for len in 2..=3 {
        for mask in 0..1u32 << len {
            let list: Vec<TransformVerdict> = (0..len)
                .map(|i| if mask >> i & 1 == 1 { ur.clone() } else { up.clone() })
                .collect();
            let expected = if mask.count_ones() % 2 == 1 { VerdictKind::Ur } else { VerdictKind::Up };
            assert_eq!(transform::composition_verdict(&list).unwrap().kind, expected);
        }
    }
}
