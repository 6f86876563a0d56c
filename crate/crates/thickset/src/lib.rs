//! Tools for measuring how "thick" a compact set with box-shaped gaps is,
//! relative to a diagonal contraction matrix, and for exploiting that
//! thickness.
//!
//! Everything here works in the square metric (sup norm), where balls are
//! axis-aligned boxes. A set is described by a closed hull (a finite union of
//! boxes) minus a finite list of open gaps (each again a union of boxes). The
//! central quantity is the affine thickness: for each gap, compare how small
//! a matrix-power box must be to cover the gap against how small it must be
//! to bridge from the gap back to earlier gaps or the unbounded complement.
//! The worst gap wins.
//!
//! On top of that core sit four consumers:
//!
//! * [`carpets`] builds middle-box fractal carpets, for which the thickness
//!   has a closed form that the generic pipeline must reproduce.
//! * [`game`] plays the nested-box deletion game: Player I shrinks a box by
//!   one matrix power per turn, Player II deletes matrix-power boxes under a
//!   budget. The thick-set strategy wins whenever the thickness report is
//!   finite.
//! * [`certificates`] evaluates and searches the numeric side conditions
//!   under which a pattern of M affine copies (or an intersection of several
//!   thick sets) must appear inside any thick enough set, together with the
//!   dimension bound that falls out.
//! * [`gaplemma`] re-checks the hypotheses of the intersection lemma with
//!   exact rational arithmetic, so a "certified nonempty" verdict never rests
//!   on floating-point rounding.
//!
//! [`cli`] wires the lot to a small command-line front end (see `src/main.rs`
//! and the `examples/` directory for entry points).

pub mod carpets;
pub mod certificates;
pub mod cli;
pub mod config;
pub mod game;
pub mod gaplemma;
pub mod geometry;
pub mod render;
pub mod report;
pub mod thickness;

pub use geometry::{AxisBox, BoxRegion, DiagonalContraction, GapSystem, Openness};
pub use thickness::{affine_thickness, fy_thickness, ThicknessReport, ThicknessTag};


/// Version string embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
