use itertools::Itertools;
use tpmodal::decompose::{self, SplitKind};
use tpmodal::oracle;
use tpmodal::rational::{self, Rational};
use tpmodal::seqshape;

fn all_sequences(n: usize) -> impl Iterator<Item = Vec<Rational>> {
    (0..n)
        .map(|_| -2i64..=2)
        .multi_cartesian_product()
        .map(|v| rational::ints(&v))
}

#[test]
fn shape_statistics_match_oracles() {
    for n in 1..=6 {
        for u in all_sequences(n) {
            let profile = seqshape::modality(&u);
            assert_eq!(profile.m, oracle::brute_modality(&u).unwrap(), "{u:?}");
            assert_eq!(profile.s_plus.value, oracle::brute_s_plus(&u).unwrap(), "{u:?}");
            assert_eq!(profile.mode_intervals.len(), profile.valley_intervals.len() + 1);
            assert!(2 * profile.m <= n + 1, "{u:?}");
            assert_eq!(profile.m == 1, seqshape::unimodal_by_signs(&u), "{u:?}");
        }
    }
}

#[test]
fn sign_arrangement_test_matches_modality() {
    for n in 1..=6 {
        for u in all_sequences(n) {
            let m = seqshape::modality(&u).m;
            for k in 1..=4 {
                assert_eq!(seqshape::check_mmodal_by_signs(&u, k).unwrap(), k == m, "{u:?} k={k}");
            }
        }
    }
}

#[test]
fn decompositions_and_negation() {
    for n in 1..=6 {
        for u in all_sequences(n) {
            let m = seqshape::modality(&u).m;
            let part = decompose::decompose(&u, m, SplitKind::Partition).unwrap();
            assert_eq!(part.reassemble(), u);
            let dec = decompose::decompose(&u, m, SplitKind::Decomposition).unwrap();
            assert_eq!(dec.reassemble(), u);
            let s_u = seqshape::sign_changes(&u).count;
            let s_dec: usize = dec.parts.iter().map(|p| seqshape::sign_changes(p).count).sum();
            assert_eq!(s_u, s_dec, "{u:?}");
            let s_part: usize = part.parts.iter().map(|p| seqshape::sign_changes(p).count).sum();
            assert!(s_part <= s_u && s_u - s_part <= 2 * m - 2, "{u:?}");
            for p in &dec.parts {
                assert_eq!(seqshape::modality(p).m, 1);
            }
            if seqshape::is_constant(&u) {
                continue;
            }
            let aligned = decompose::mode_align(&dec);
            let sp = seqshape::s_plus(&aligned.flattened()).value;
            let per: usize = aligned.parts.iter().map(|p| seqshape::s_plus(p).value).sum();
            assert_eq!(sp, per, "{u:?}");
            assert!(sp + 2 >= 2 * m && sp <= 2 * m, "{u:?}");
            assert!(seqshape::s_plus(&u).value <= sp, "{u:?}");
            let cells = decompose::sign_cells(&aligned).unwrap();
            assert_eq!(cells.total, sp);
            if m >= 2 {
                assert!(cells.consistent(), "{u:?} {cells:?}");
            }
            decompose::negate_modality(&u).unwrap();
        }
    }
}
