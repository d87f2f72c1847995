use std::time::Instant;
fn main() {
    for (name, f) in [
        ("t32 c2", Box::new(|| wllab_core::verify_theorem_1hop(7, 2)) as Box<dyn Fn() -> _>),
        ("t35 k2 c1", Box::new(|| wllab_core::verify_theorem_khop_subgraph(2, 7, 1, false))),
        ("t38 k2 c1", Box::new(|| wllab_core::verify_theorem_khop(2, 7, 1))),
    ] {
        let t0 = Instant::now();
        let r = f().unwrap();
        println!(
            "{name}: graphs={} filtered={} pairs={} violations={} in {:.2?}",
            r.graphs_enumerated, r.hypothesis_filtered, r.pairs_checked, r.violations.len(), t0.elapsed()
        );
    }
}
