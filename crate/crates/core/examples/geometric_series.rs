//! Geometric series of a contraction: exact solve against truncated sums and the tail bound.

use tpmodal::dompoly;
use tpmodal::rational::{ints, ratio, render_fixed};
use tpmodal::transform::{self, GeometricForm, SumMode};

fn main() {
    let k = dompoly::build_band_kernel(2, 4).unwrap().scaled(&ratio(1, 4));
    let u = ints(&[1, 3, 2, 1]);
    let cert = transform::norm_certificate(&k).unwrap();
    println!("norm certificate: {:?} = {}", cert.kind, cert.norm);
    for form in [GeometricForm::InvIMinus, GeometricForm::InvIPlus, GeometricForm::InvIMinusSquare] {
        let exact = transform::geometric_transform(&k, form, &u).unwrap();
        println!("{form:?}: {exact}");
        for terms in [1, 2, 4] {
            let partial = transform::geometric_partial_sum(&k, form, &u, terms).unwrap();
            let bound = transform::geometric_tail_bound(&cert, form, &u, terms);
            println!("  {terms} terms: {partial}  (tail bound {})", render_fixed(&bound, 6));
        }
    }
    let sum = transform::sum_transform(&k, SumMode::Range { m: 0, n: 3 }, &u).unwrap();
    println!("I + K + K^2 + K^3 applied to u: {sum}");
}
