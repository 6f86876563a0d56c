//! Static SVG pictures of planar gap systems.
//!
//! Only two-dimensional systems can be drawn. The hull is light gray, gaps
//! are shaded blue, game deletions overlay in translucent red, and an
//! optional outcome point is marked in black. Output is a plain string with
//! fixed-precision coordinates, so identical inputs give identical bytes.

use thiserror::Error;

use crate::geometry::{AxisBox, GapSystem};

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("can only render 2-d systems, this one has {0} axes")]
    NotPlanar(usize),
    #[error("nothing to draw: the hull is empty")]
    EmptySystem,
}

fn c(v: f64) -> String {
    format!("{v:.6}")
}

fn rect(b: &AxisBox, style: &str) -> String {
    let w = b.hi()[0] - b.lo()[0];
    let h = b.hi()[1] - b.lo()[1];
    format!(
        "  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" {}/>\n",
        c(b.lo()[0]),
        c(b.lo()[1]),
        c(w.max(0.0)),
        c(h.max(0.0)),
        style
    )
}

/// Renders a gap system with optional deletion boxes and an outcome point.
pub fn render_svg(
    sys: &GapSystem,
    deletions: &[AxisBox],
    outcome: Option<&[f64]>,
) -> Result<String, RenderError> {
    let n = sys.hull.n().ok_or(RenderError::EmptySystem)?;
    if n != 2 {
        return Err(RenderError::NotPlanar(n));
    }

    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    let mut grow = |b: &AxisBox| {
        for j in 0..2 {
            lo[j] = lo[j].min(b.lo()[j]);
            hi[j] = hi[j].max(b.hi()[j]);
        }
    };
    sys.hull.boxes.iter().for_each(&mut grow);
    deletions.iter().for_each(&mut grow);
    if let Some(p) = outcome {
        for j in 0..2 {
            lo[j] = lo[j].min(p[j]);
            hi[j] = hi[j].max(p[j]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
    let margin = 0.05 * span;
    let (x0, y0) = (lo[0] - margin, lo[1] - margin);
    let (w, h) = (hi[0] - lo[0] + 2.0 * margin, hi[1] - lo[1] + 2.0 * margin);
    let stroke = 0.004 * span;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" width=\"640\" height=\"{}\">\n",
        c(x0),
        c(y0),
        c(w),
        c(h),
        c(640.0 * h / w),
    ));
    // Flip the vertical axis so larger y draws upward, the usual plot
    // orientation.
    svg.push_str(&format!(
        "<g transform=\"translate(0,{}) scale(1,-1)\">\n",
        c(y0 + (y0 + h)),
    ));

    let hull_style = format!(
        "fill=\"#e9e9e9\" stroke=\"#555555\" stroke-width=\"{}\"",
        c(stroke)
    );
    for b in &sys.hull.boxes {
        svg.push_str(&rect(b, &hull_style));
    }
    let gap_style = "fill=\"#7aa6d8\" fill-opacity=\"0.9\"".to_string();
    for gap in &sys.gaps {
        for b in &gap.boxes {
            svg.push_str(&rect(b, &gap_style));
        }
    }
    let del_style = format!(
        "fill=\"#c0392b\" fill-opacity=\"0.45\" stroke=\"#8c1d12\" stroke-width=\"{}\"",
        c(stroke)
    );
    for b in deletions {
        svg.push_str(&rect(b, &del_style));
    }
    if let Some(p) = outcome {
        svg.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#111111\"/>\n",
            c(p[0]),
            c(p[1]),
            c(0.01 * span),
        ));
    }
    svg.push_str("</g>\n</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carpets::CarpetSpec;
    use crate::geometry::{BoxRegion, GapSystem};

    #[test]
    fn carpet_renders_every_box() {
        let sys = CarpetSpec::new(vec![5, 5], 1.0, 2).unwrap().generate().unwrap();
        let svg = render_svg(&sys, &[], None).unwrap();
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<rect").count(), 1 + 25);
        assert!(svg.contains("scale(1,-1)"));
    }

    #[test]
    fn overlays_appear_when_given() {
        let sys = CarpetSpec::new(vec![5, 5], 1.0, 1).unwrap().generate().unwrap();
        let del = AxisBox::ball(&[0.0, 0.0], 0.2).unwrap();
        let svg = render_svg(&sys, &[del], Some(&[0.5, 0.5])).unwrap();
        assert_eq!(svg.matches("<rect").count(), 3);
        assert_eq!(svg.matches("<circle").count(), 1);
    }

    #[test]
    fn higher_dimensions_are_refused() {
        let hull = BoxRegion::closed(vec![AxisBox::ball(&[0.0; 3], 1.0).unwrap()]);
        let sys = GapSystem::new(hull, vec![]).unwrap();
        assert!(matches!(render_svg(&sys, &[], None), Err(RenderError::NotPlanar(3))));
    }

    #[test]
    fn output_is_deterministic() {
        let sys = CarpetSpec::new(vec![3, 5], 0.7, 2).unwrap().generate().unwrap();
        let a = render_svg(&sys, &[], None).unwrap();
        let b = render_svg(&sys, &[], None).unwrap();
        assert_eq!(a, b);
    }
}
