//! Exact-arithmetic verdicts on whether two gap systems must intersect.
//!
//! The checker works entirely in rational arithmetic: gaps are compared by
//! region subtraction, contained gaps are refined away, and the sufficient
//! condition (every gap boundary escapes the other system, and boundary
//! containment forces containment) is decided without a single rounding.
//! A positive verdict additionally needs the thickness sum to be positive.

use thickset::carpets::CarpetSpec;
use thickset::gaplemma::{
    exact_intersection_witness, exact_system_from_float, gap_lemma_verdict, ExactBox,
    ExactRegion, ExactSystem, Rat,
};
use thickset::geometry::DiagonalContraction;

fn rq(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

fn main() {
    // Two copies of the same depth-2 carpet trivially intersect; the checker
    // still has to certify it from the hypotheses alone.
    let spec = CarpetSpec::new(vec![5, 5], 0.3, 2).expect("valid carpet");
    let sys = exact_system_from_float(&spec.generate().expect("cell budget"))
        .expect("exactly representable");
    let a = spec.contraction().expect("contractive scales");
    let verdict = gap_lemma_verdict(&sys, &sys, &a).expect("same dimension");
    println!(
        "identical carpets: sufficient condition {}, tau sum {:.6}, verdict {:?}",
        verdict.sufficient.holds, verdict.thickness_sum, verdict.verdict
    );
    let witness = exact_intersection_witness(&sys, &sys).expect("nonempty");
    println!(
        "  witness point: ({})",
        witness.iter().map(Rat::to_string).collect::<Vec<_>>().join(", ")
    );

    // Separated supports break the first bullet: no gap boundary of one
    // system can reach the hull of the other.
    let left = ExactSystem::new(
        ExactRegion::new(vec![
            ExactBox::closed(vec![rq(-1, 1), rq(-1, 1)], vec![rq(-1, 2), rq(1, 1)]).unwrap(),
        ]),
        vec![ExactRegion::new(vec![
            ExactBox::open(vec![rq(-7, 8), rq(-1, 2)], vec![rq(-5, 8), rq(1, 2)]).unwrap(),
        ])],
    )
    .expect("valid system");
    let right = ExactSystem::new(
        ExactRegion::new(vec![
            ExactBox::closed(vec![rq(1, 2), rq(-1, 1)], vec![rq(1, 1), rq(1, 1)]).unwrap(),
        ]),
        vec![ExactRegion::new(vec![
            ExactBox::open(vec![rq(5, 8), rq(-1, 2)], vec![rq(7, 8), rq(1, 2)]).unwrap(),
        ])],
    )
    .expect("valid system");
    let a2 = DiagonalContraction::new(vec![0.5, 0.5]).expect("contractive scales");
    let verdict = gap_lemma_verdict(&left, &right, &a2).expect("same dimension");
    println!(
        "separated supports: bullet 1 {}, verdict {:?}, witness {:?}",
        verdict.sufficient.bullet1,
        verdict.verdict,
        exact_intersection_witness(&left, &right)
    );
}
