//! Closed-form carpet thickness against the generic geometric pipeline.
//!
//! For each middle-cut carpet the thickness under its own contraction is
//! `min_j log_{r_j}((r_j - 1)/2) / t`, realized already at depth 1. The
//! expanded gap system has to reproduce that number through the generic
//! size-and-bridge computation, level tie-breaks and all.

use thickset::carpets::CarpetSpec;
use thickset::thickness::affine_thickness;

fn main() {
    let cases = [
        (vec![5, 5], 1.0, 3),
        (vec![5, 7], 0.7, 3),
        (vec![7, 9], 0.3, 3),
        (vec![3, 5], 1.0, 3),
        (vec![3, 3, 3], 0.5, 2),
    ];
    for (r, t, depth) in cases {
        let spec = CarpetSpec::new(r, t, depth).expect("valid carpet");
        let closed = spec.closed_form_thickness();
        let sys = spec.generate().expect("cell budget");
        let a = spec.contraction().expect("contractive scales");
        let report = affine_thickness(&sys, &a).expect("thickness");
        println!(
            "r = {:?}, t = {:.2}, depth {}: {} gaps, closed form {:.12}, geometric {:.12}, \
             difference {:.3e}, alpha = {:.6}",
            spec.r,
            spec.t,
            spec.depth,
            sys.gaps.len(),
            closed,
            report.tau,
            (closed - report.tau).abs(),
            spec.closed_form_alpha()
        );
    }

    // Closed forms keep working where the geometry cannot be expanded: even
    // subdivision counts have no middle cell to cut out.
    let even = CarpetSpec::new(vec![4, 6], 0.9, 2).expect("closed forms only");
    println!(
        "r = {:?}, t = {:.2}: closed form {:.12}, generate() -> {:?}",
        even.r,
        even.t,
        even.closed_form_thickness(),
        even.generate().err().expect("even counts cannot expand").to_string()
    );
}
