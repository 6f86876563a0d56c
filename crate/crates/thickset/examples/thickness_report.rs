//! Measure a hand-built planar system under both thickness definitions.
//!
//! The set is the unit square minus two open gaps: a centered square and a
//! smaller off-center rectangle. With the scalar contraction `0.5 I` the
//! affine and metric answers must satisfy `ln(tau) / ln(beta) = -tau_A`.

use thickset::geometry::{AxisBox, BoxRegion, DiagonalContraction, GapSystem};
use thickset::thickness::{affine_thickness, fy_affine_relation, fy_thickness};

fn bx(lo: [f64; 2], hi: [f64; 2]) -> AxisBox {
    AxisBox::new(lo.to_vec(), hi.to_vec()).expect("ordered bounds")
}

fn main() {
    let sys = GapSystem::new(
        BoxRegion::closed(vec![bx([-1.0, -1.0], [1.0, 1.0])]),
        vec![
            BoxRegion::open(vec![bx([-0.2, -0.2], [0.2, 0.2])]),
            BoxRegion::open(vec![bx([0.5, 0.55], [0.7, 0.9])]),
        ],
    )
    .expect("valid gap system");
    let beta = 0.5;
    let a = DiagonalContraction::new(vec![beta, beta]).expect("contractive scales");

    let affine = affine_thickness(&sys, &a).expect("affine thickness");
    println!("affine thickness tau_A = {:.12} [{:?}]", affine.tau, affine.tag);
    for (rank, g) in affine.per_gap.iter().enumerate() {
        println!(
            "  rank {rank} = gap {}: size exp {:.6}, bridge exp {:.6}, deficiency {:.6}",
            g.original_index, g.size_exponent, g.gap_distance_exponent, g.deficiency
        );
    }

    let metric = fy_thickness(&sys).expect("metric thickness");
    println!("metric thickness tau  = {:.12} [{:?}]", metric.tau, metric.tag);
    for (rank, g) in metric.per_gap.iter().enumerate() {
        println!(
            "  rank {rank} = gap {}: diameter {:.6}, distance {:.6}, ratio {:.6}",
            g.original_index, g.diameter, g.distance, g.ratio
        );
    }

    let rel = fy_affine_relation(&sys, beta).expect("scalar matrix, finite thickness");
    println!(
        "relation: ln(tau)/ln(beta) = {:.12}, -tau_A = {:.12}, discrepancy {:.3e}",
        rel.tau_metric.ln() / beta.ln(),
        -rel.tau_affine,
        rel.discrepancy
    );
}
