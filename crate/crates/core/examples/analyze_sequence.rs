//! Sign statistics, modality and unimodal pieces of a sequence.
//!
//! `cargo run --example analyze_sequence -- 1,5,3,4,2`

use tpmodal::decompose::{self, SplitKind};
use tpmodal::rational::{format_exact, parse_rational};
use tpmodal::seqshape::{self, Seq};

fn main() {
    let arg = std::env::args().nth(1).unwrap_or_else(|| "1,5,3,4,2".into());
    let terms = arg.split(',').map(|s| parse_rational(s).expect("number")).collect();
    let u = Seq::new(terms).expect("non-empty");
    let profile = seqshape::modality(&u);
    println!("u = {u}");
    println!("S(u) = {}, pattern {}", seqshape::sign_changes(&u).count, seqshape::sign_changes(&u));
    println!("S+(u) = {} at level {}", profile.s_plus.value, format_exact(&profile.s_plus.witness));
    println!("{}-modal, modes {:?}, valleys {:?}", profile.m, profile.mode_intervals, profile.valley_intervals);
    for kind in [SplitKind::Partition, SplitKind::Decomposition] {
        let d = decompose::decompose(&u, profile.m, kind).unwrap();
        let parts: Vec<String> = d.parts.iter().map(ToString::to_string).collect();
        println!("{kind:?}: {}", parts.join(" "));
    }
    if !u.is_constant() {
        let neg = decompose::negate_modality(&u).unwrap();
        println!("aligned S+ = {}, so -u is {}-modal", neg.aligned_s_plus, neg.observed);
    }
}
