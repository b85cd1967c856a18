//! Minor-sign signature of a matrix, checked against cofactor expansion.

use tpmodal::oracle;
use tpmodal::tpcheck::{self, Kernel};

fn main() {
    let kernels = [
        ("matrix A", Kernel::from_ints(&[[-1, -2, -3, -4], [-5, -6, -7, -8], [-9, -10, -11, -11], [-13, -14, -15, -11]]).unwrap()),
        ("identity", Kernel::identity(3)),
        ("pascal", Kernel::from_ints(&[[1, 1, 1], [1, 2, 3], [1, 3, 6]]).unwrap()),
        ("mixed", Kernel::from_ints(&[[1, 2, 0], [2, 1, 0], [0, 1, 1]]).unwrap()),
    ];
    for (name, k) in kernels {
        let rep = tpcheck::classify_full(&k);
        let naive = oracle::naive_classify(&k, rep.r_max).unwrap();
        println!("{name}: eps = {} (oracle agrees: {})", rep.signature(), rep.eps == naive.eps);
        if let Some(w) = &rep.witness {
            println!("  mixed at order {}: {} vs {}", w.order, w.positive, w.negative);
        }
        if rep.r_max >= 3 {
            let v = tpcheck::up_ur_verdict(&rep).unwrap();
            println!("  unimodality verdict {} ({})", v.kind, v.clause);
        }
        let m1 = tpcheck::modality_preserver_verdict(&rep, 1).unwrap();
        println!("  1-modality verdict {}", m1.kind);
    }
}
