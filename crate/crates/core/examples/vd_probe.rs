//! Variation diminishing and unimodality preservation on random totally positive kernels.

use tpmodal::oracle::{self, TrialConfig};
use tpmodal::seqshape;
use tpmodal::tpcheck;
use tpmodal::transform;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0x5eed);
    let cfg = TrialConfig { seed, n_trials: 200, ..TrialConfig::default() };
    let (mut vd_ok, mut vd_total, mut up_ok) = (0, 0, 0);
    for t in 0..cfg.n_trials {
        let mut rng = cfg.rng(t);
        let n = cfg.dim(&mut rng);
        let k = oracle::random_tp_kernel(&mut rng, n, 3);
        let u = oracle::random_ints(&mut rng, n, -cfg.value_range, cfg.value_range);
        if seqshape::sign_changes(&u).count < 3 {
            vd_total += 1;
            vd_ok += usize::from(transform::vd_check(&k, &u, 3).unwrap());
        }
        let stochastic = oracle::row_normalized(&k);
        let verdict = tpcheck::up_ur_verdict(&tpcheck::classify(&stochastic, 3).unwrap()).unwrap();
        let w = oracle::random_unimodal(&mut rng, n, 3);
        let kw = transform::apply(&stochastic, &w).unwrap();
        up_ok += usize::from(seqshape::modality(&kw).m == 1);
        if t == 0 {
            println!("first kernel ({}):\n{k}", verdict.kind);
        }
    }
    println!("S(Ku) <= S(u) in {vd_ok}/{vd_total} trials");
    println!("unimodal stays unimodal in {up_ok}/{} trials", cfg.n_trials);
}
