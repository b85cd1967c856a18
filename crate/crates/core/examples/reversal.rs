//! Modality of `-u` predicted from the aligned decomposition, and concatenation shapes.

use tpmodal::decompose::{self, ConcatOutcome};
use tpmodal::rational::ints;
use tpmodal::seqshape::Seq;

fn main() {
    for v in [vec![1, 5, 3, 4, 2], vec![3, 1, 3], vec![0, 2, 1, 3, 1, 4, 0], vec![2, 1, 2, 1, 2]] {
        let u = Seq::from_ints(&v);
        let r = decompose::negate_modality(&u).unwrap();
        println!("{u}: {}-modal, aligned S+ = {}, -u is {}-modal", r.m, r.aligned_s_plus, r.observed);
    }
    for (a, b) in [(vec![1, 3, 2], vec![2, 4, 0]), (vec![3, 2, 1], vec![1, 2, 0]), (vec![1, 2], vec![2, 1])] {
        let outcome = decompose::concat_analyze(&ints(&a), &ints(&b));
        let word = match outcome {
            ConcatOutcome::Unimodal => "unimodal".to_string(),
            ConcatOutcome::Bimodal => "bimodal".to_string(),
            ConcatOutcome::Invalid(why) => format!("not applicable: {why}"),
        };
        println!("{a:?} ++ {b:?}: {word}");
    }
}
