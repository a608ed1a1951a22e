//! SVG pictures of developments in the Poincare or Klein disk.
//!
//! Geodesic arcs are drawn as sampled polylines (64 points per edge), which
//! renders identically to true circular arcs at figure scale and works in
//! both projections without special cases.

use crate::error::Result;
use crate::develop::Development;
use crate::hyp::{self, HPoint};
use crate::tetra::Surface;

/// Disk model used for the picture. Poincare is conformal, so the equal
/// angles at the crossings survive projection; Klein keeps chords straight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiskProjection {
    #[default]
    Poincare,
    Klein,
}

impl DiskProjection {
    fn project(&self, p: &HPoint) -> (f64, f64) {
        match self {
            DiskProjection::Poincare => p.to_poincare(),
            DiskProjection::Klein => p.to_klein(),
        }
    }
}

const SAMPLES_PER_ARC: usize = 64;

fn sample_arc(a: &HPoint, b: &HPoint, proj: DiskProjection) -> Result<Vec<(f64, f64)>> {
    let len = hyp::hdist(a, b)?;
    if len < 1e-14 {
        return Ok(vec![proj.project(a), proj.project(b)]);
    }
    let d = hyp::direction(a, b)?;
    Ok((0..=SAMPLES_PER_ARC)
        .map(|i| {
            let s = len * i as f64 / SAMPLES_PER_ARC as f64;
            proj.project(&hyp::geodesic_point(a, &d, s))
        })
        .collect())
}

fn polyline(points: &[(f64, f64)], style: &str) -> String {
    let coords: Vec<String> = points
        .iter()
        .map(|(x, y)| format!("{:.6},{:.6}", x, -y))
        .collect();
    format!("<polyline fill=\"none\" {style} points=\"{}\"/>\n", coords.join(" "))
}

/// Renders the development's face outlines with an optional chord overlay
/// (a list of hyperbolic points joined by geodesic arcs, in the same global
/// coordinates as the placements).
pub fn development_svg(
    surface: &Surface,
    dev: &Development,
    chord: &[HPoint],
    proj: DiskProjection,
) -> Result<String> {
    let mut body = String::new();
    body.push_str("<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"0.004\"/>\n");
    for (i, (f, g)) in dev.placements.iter().enumerate() {
        let verts = f.labels();
        for k in 0..3 {
            let a = g.apply(&surface.chart_vertex(*f, verts[k])?);
            let b = g.apply(&surface.chart_vertex(*f, verts[(k + 1) % 3])?);
            body.push_str(&polyline(
                &sample_arc(&a, &b, proj)?,
                "stroke=\"#356ca8\" stroke-width=\"0.005\"",
            ));
        }
        // label the copy at its placed centroid
        let c = g.apply(&HPoint::origin());
        let (cx, cy) = proj.project(&c);
        body.push_str(&format!(
            "<text x=\"{:.4}\" y=\"{:.4}\" font-size=\"0.035\" fill=\"#888888\" text-anchor=\"middle\">{}</text>\n",
            cx,
            -cy,
            i + 1
        ));
    }
    if chord.len() >= 2 {
        for w in chord.windows(2) {
            body.push_str(&polyline(
                &sample_arc(&w[0], &w[1], proj)?,
                "stroke=\"#c03a2b\" stroke-width=\"0.007\"",
            ));
        }
    }
    Ok(format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.05 -1.05 2.1 2.1\" width=\"720\" height=\"720\">\n{body}</svg>\n"
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::develop::develop;
    use crate::hyp::HIsometry;
    use crate::tetra::{FaceId, Surface, TetraParams};
    use std::f64::consts::PI;

    #[test]
    fn svg_contains_faces_and_chord() {
        let s = Surface::build(TetraParams::new(PI / 6.0).unwrap()).unwrap();
        let dev = develop(&s, &[FaceId(0), FaceId(1), FaceId(3)], &HIsometry::identity()).unwrap();
        let a = HPoint::from_klein(-0.3, 0.0).unwrap();
        let b = HPoint::from_klein(0.4, 0.2).unwrap();
        for proj in [DiskProjection::Poincare, DiskProjection::Klein] {
            let svg = development_svg(&s, &dev, &[a, b], proj).unwrap();
            assert!(svg.starts_with("<svg"));
            assert!(svg.matches("<polyline").count() >= 10);
            // all sampled coordinates stay within the closed unit disk
            for cap in svg.split("points=\"").skip(1) {
                let pts = cap.split('"').next().unwrap();
                for pair in pts.split_whitespace() {
                    let (x, y) = pair.split_once(',').unwrap();
                    let (x, y): (f64, f64) = (x.parse().unwrap(), y.parse().unwrap());
                    assert!(x * x + y * y <= 1.0 + 1e-9);
                }
            }
        }
    }
}
