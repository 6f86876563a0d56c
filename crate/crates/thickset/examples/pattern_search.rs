//! Search the certificate grid for the largest pattern size a carpet family
//! supports.
//!
//! The subdivision counts fix an exponent floor `max_j log_{r_j} 5`; below
//! it some contraction entry leaves the admissible range `(0, 1/5)`. The
//! search walks deterministic grids in the exponent, the budget exponent
//! and the separation margin, bisecting the largest valid `M` at every grid
//! point. Same grid, same result, bit for bit.

use thickset::certificates::{search_pattern_certificate, SearchGrid};

fn main() {
    let families: [&[u32]; 4] = [
        &[1 << 22, 1 << 23],
        &[1 << 20, (1 << 21) + (1 << 20)],
        &[1 << 30, 1 << 20],
        &[1 << 30, 1 << 28],
    ];
    let grid = SearchGrid::default();
    for r in families {
        let outcome = search_pattern_certificate(r, &grid).expect("well-formed family");
        match &outcome.best {
            Some(best) => println!(
                "r = {:?}: M = {} (c = {:.6}, delta = {:.3e}, dim bound {:.9}) \
                 after {} evaluations",
                r, best.m, best.c, best.delta, best.dim_bound, outcome.evaluations
            ),
            None => println!(
                "r = {:?}: no certificate (exponent floor {:.6}){}",
                r,
                outcome.exponent_floor,
                outcome.note.as_deref().map(|n| format!(", {n}")).unwrap_or_default()
            ),
        }
    }

    // Small subdivision counts push the exponent floor to 1 or beyond, so no
    // admissible contraction exists and the search reports that immediately.
    let tiny = search_pattern_certificate(&[3, 5], &grid).expect("well-formed family");
    println!(
        "r = [3, 5]: best = {:?}, note = {:?}",
        tiny.best.map(|b| b.m),
        tiny.note
    );
}
