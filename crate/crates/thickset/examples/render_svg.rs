//! Draw a carpet and one playout of the deletion game as an SVG file.
//!
//! The hull is drawn in gray, gaps in blue, Player II's deletion boxes in
//! red, and the truncated outcome point in black. Planar systems only.

use thickset::carpets::CarpetSpec;
use thickset::game::{run_playout, GameParams, RandomCenters};
use thickset::render::render_svg;
use thickset::thickness::affine_thickness;

fn main() {
    let spec = CarpetSpec::new(vec![5, 5], 1.0, 3).expect("valid carpet");
    let sys = spec.generate().expect("cell budget");
    let a = spec.contraction().expect("contractive scales");
    let report = affine_thickness(&sys, &a).expect("thickness");
    let params = GameParams::thick_set(a, report.tau).expect("finite thickness");
    let (rec, state) =
        run_playout(&sys, &report, &params, &mut RandomCenters, 12, 7).expect("engine");

    let deletions: Vec<_> = state
        .ledger()
        .iter()
        .map(|d| state.deletion_box(d).expect("radius fixed after turn 1"))
        .collect();
    let svg = render_svg(&sys, &deletions, Some(&rec.outcome)).expect("planar system");

    let path = std::env::temp_dir().join("thickset_carpet.svg");
    std::fs::write(&path, &svg).expect("temp dir is writable");
    println!(
        "wrote {} ({} bytes, {} gaps, {} deletions, outcome at ({:.4}, {:.4}))",
        path.display(),
        svg.len(),
        sys.gaps.len(),
        deletions.len(),
        rec.outcome[0],
        rec.outcome[1]
    );
}
