//! Minimal-r search against a direct feasibility oracle at a doubled
//! aggregation window: the returned design must pass both probability
//! requirements exactly, and the next-smaller design must fail one.

use chipmark::security::{min_r_search, pfa, pmd_curve};
use chipmark::watermark::WatermarkParams;
use chipmark::RadioModel;

const TARGET: f64 = 2.328_306_436_538_696_3e-10; // 2^-32

#[test]
fn doubled_window_needs_no_more_inversions() {
    let radio = RadioModel::new(2.046e6, 1e-3, 30.0, 1.0).unwrap();
    let w = 2000usize;
    let found = min_r_search(1023, w, &radio, TARGET, 1.0)
        .unwrap()
        .expect("a 2000-code window is feasible at 30 dB-Hz");
    assert!(found <= 21, "doubling W must not raise r, got {found}");

    // the returned design is feasible in both probabilities
    let params = WatermarkParams::new(1023, found, w).unwrap();
    assert!(pfa(&params, &radio, 1.0) < TARGET);
    let curve = pmd_curve(&params, &radio, 1.0).unwrap();
    let (worst_s, worst_pmd) = curve.max();
    assert!(
        worst_pmd < TARGET,
        "r={found} fails at s={worst_s}: {worst_pmd:e}"
    );

    // the next-smaller design fails at least one requirement
    let smaller = WatermarkParams::new(1023, found - 1, w).unwrap();
    let smaller_pfa = pfa(&smaller, &radio, 1.0);
    let smaller_worst = pmd_curve(&smaller, &radio, 1.0).unwrap().max().1;
    assert!(
        smaller_pfa >= TARGET || smaller_worst >= TARGET,
        "r={} also feasible: pfa {smaller_pfa:e}, worst pmd {smaller_worst:e}",
        found - 1
    );
    println!(
        "min r at W=2000 is {found} (worst pmd {worst_pmd:.3e} at s={worst_s}); \
         r={} fails with pfa {smaller_pfa:.3e}, worst pmd {smaller_worst:.3e}",
        found - 1
    );
}
