//! Seeded playouts of the deletion game on a depth-3 carpet.
//!
//! Player I shrinks a ball by one contraction power per turn; Player II
//! deletes contraction-power balls under the budget `prod beta^q <= alpha
//! prod beta^m`. With `alpha = prod beta^(tau - 1)` the thick-set strategy
//! guarantees the truncated outcome is either already deleted or lands
//! within its own error radius of the surviving set.

use thickset::carpets::CarpetSpec;
use thickset::game::{run_playout, GameParams, GapSeeker, PlayerOne, RandomCenters};
use thickset::thickness::affine_thickness;

fn main() {
    let spec = CarpetSpec::new(vec![5, 5], 1.0, 3).expect("valid carpet");
    let sys = spec.generate().expect("cell budget");
    let a = spec.contraction().expect("contractive scales");
    let report = affine_thickness(&sys, &a).expect("thickness");
    let params = GameParams::thick_set(a, report.tau).expect("finite thickness");
    println!(
        "carpet (5, 5), depth 3: tau_A = {:.12}, alpha = {:.6}, {} gaps",
        report.tau,
        params.alpha,
        sys.gaps.len()
    );

    let mut random = RandomCenters;
    let mut seeker = GapSeeker { target: vec![0.0, 0.0] };
    let policies: [(&str, &mut dyn PlayerOne); 2] =
        [("random", &mut random), ("gap seeker", &mut seeker)];
    for (name, policy) in policies {
        let mut satisfied = 0;
        for seed in 0..10u64 {
            let (rec, state) =
                run_playout(&sys, &report, &params, policy, 30, seed).expect("engine");
            if rec.satisfies_contract() {
                satisfied += 1;
            }
            if seed < 3 {
                let how = if rec.in_deleted {
                    "outcome deleted".to_string()
                } else {
                    format!("distance {:.3e} within radius {:.3e}", rec.distance_to_ce, rec.radius)
                };
                println!(
                    "  {name}, seed {seed}: {how}, {} deletions on the ledger",
                    state.ledger().len()
                );
            }
        }
        println!("  {name}: contract satisfied in {satisfied}/10 playouts");
    }
}
