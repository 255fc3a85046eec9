//! Prints the best foliation-preserving objective for several ansatz
//! shapes. Used to choose the regression floor.

use std::time::Instant;

use qframes::frame_change::nogo::{nogo_search, Ansatz, NoGoConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let iters: usize = args.next().map_or(200, |s| s.parse().unwrap());
    for (a, correlated) in [(1, false), (2, false), (2, true)] {
        let mut cfg = NoGoConfig::new(2);
        cfg.ansatz = Ansatz { d: 2, ancilla_dim: a, correlated };
        cfg.max_iters = iters;
        let t = Instant::now();
        let r = nogo_search(&cfg).unwrap();
        let mut finals = r.finals.clone();
        finals.sort_by(|x, y| x.partial_cmp(y).unwrap());
        println!(
            "ancilla={a} correlated={correlated} best={:.6e} median={:.6e} budget_exceeded={} time={:.1}s",
            r.best_objective,
            finals[finals.len() / 2],
            r.budget_exceeded,
            t.elapsed().as_secs_f64()
        );
    }
}
