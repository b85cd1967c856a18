//! Shift-sum polynomial recurrence, its band kernel, and where unimodality survives.

use tpmodal::dompoly::{self, PolySeq, Shape};

fn main() {
    let seeds = [PolySeq::from_ints(1, &[1, 2, 1])];
    let r = dompoly::shape_propagation(&seeds, 1, 1, 8, Shape::Unimodal).unwrap();
    for g in &r.generations {
        println!("{}  ({}-modal)", g.poly, g.modality);
    }

    let two = [PolySeq::from_ints(1, &[1, 1]), PolySeq::from_ints(2, &[0, 2, 2])];
    let via_kernel = dompoly::unroll_via_kernel(&two, 2, 1, 10).unwrap();
    println!("band kernel reproduces the recurrence: {}", via_kernel == dompoly::unroll(&two, 2, 1, 10).unwrap());
    println!("{}", dompoly::build_band_kernel(2, 6).unwrap());

    let gapped = [PolySeq::from_ints(1, &[2]), PolySeq::from_ints(2, &[3])];
    match dompoly::shape_propagation(&gapped, 2, 2, 6, Shape::Unimodal) {
        Ok(_) => println!("gapped seeds stay unimodal"),
        Err(e) => println!("gapped seeds: {e}"),
    }
}
