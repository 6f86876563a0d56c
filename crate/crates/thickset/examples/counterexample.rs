//! Two disjoint compact sets whose thicknesses sum to a large positive
//! number.
//!
//! A positive thickness sum alone cannot force two sets to intersect: the
//! small set fits entirely inside a gap of the big one. The scales `r`, `s`
//! and `t` tune the two thicknesses freely, and the closed forms must match
//! the generic pipeline run on the actual box geometry.

use thickset::certificates::{auto_counterexample, counterexample, counterexample_systems};
use thickset::geometry::DiagonalContraction;
use thickset::thickness::affine_thickness;

fn main() {
    let betas = [0.2, 0.2];
    let inst = counterexample(&betas, 0.01, 0.005, 1e-6).expect("ordered scales");
    println!(
        "explicit scales r = {:.0e}, s = {:.0e}, t = {:.0e}:",
        inst.r, inst.s, inst.t
    );
    println!(
        "  tau1 = {:.9}, tau2 = {:.9}, sum = {:.9} (positive: {})",
        inst.tau1, inst.tau2, inst.sum, inst.sum_positive
    );

    let (c1, c2) = counterexample_systems(inst.n, inst.r, inst.s, inst.t).expect("valid scales");
    let a = DiagonalContraction::new(inst.betas.clone()).expect("contractive scales");
    let g1 = affine_thickness(&c1, &a).expect("thickness").tau;
    let g2 = affine_thickness(&c2, &a).expect("thickness").tau;
    println!(
        "  geometry: tau_A(C1) = {:.9} (difference {:.1e}), tau_A(C2) = {:.9} (difference {:.1e})",
        g1,
        (g1 - inst.tau1).abs(),
        g2,
        (g2 - inst.tau2).abs()
    );

    // The automatic mode halves the scales until both closed forms go
    // positive, whatever the contraction entries are.
    for betas in [vec![0.2, 0.2], vec![0.35, 0.6], vec![0.1, 0.4, 0.7]] {
        let inst = auto_counterexample(&betas).expect("betas in (0, 1)");
        println!(
            "auto for betas {:?}: r = {:.1e}, s = {:.1e}, t = {:.1e}, tau1 + tau2 = {:.6}",
            inst.betas, inst.r, inst.s, inst.t, inst.sum
        );
    }
}
