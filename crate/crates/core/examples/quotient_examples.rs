//! The three quotient transforms `w = Ku / Kv` with a totally negative kernel.

use tpmodal::rational::{ints, render_fixed};
use tpmodal::seqshape;
use tpmodal::tpcheck::Kernel;
use tpmodal::transform;

fn main() {
    let a = Kernel::from_ints(&[[-1, -2, -3, -4], [-5, -6, -7, -8], [-9, -10, -11, -11], [-13, -14, -15, -11]]).unwrap();
    for (u, v) in [([0, 3, 3, 1], [1, 1, 1, 1]), ([6, 5, 6, 7], [3, 1, 2, 1]), ([4, 2, 1, 2], [1, 1, 2, 2])] {
        let (u, v) = (ints(&u), ints(&v));
        let ratio: Vec<_> = u.iter().zip(&v).map(|(x, y)| x / y).collect();
        let m = seqshape::modality(&ratio).m;
        let q = transform::quotient_transform(&a, &u, &v, m).unwrap();
        let c = transform::quotient_convexity(&a, &u, &v, 2).unwrap();
        let w: Vec<String> = q.w.iter().map(|x| render_fixed(x, 4)).collect();
        println!("u/v is {m}-modal and {:?}; w = ({}) is {}-modal and {:?}", c.input_class.unwrap(), w.join(", "), q.p, c.convexity_class.unwrap());
        println!("  modality claim: {:?} [{}]", q.outcome, q.clause.unwrap_or_default());
    }
}
