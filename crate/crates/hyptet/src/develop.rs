//! Laying face copies out in the hyperbolic plane along a face sequence
//! (the development of the surface along a geodesic).

use crate::error::{Error, Result};
use crate::hyp::{HIsometry, HPoint};
use crate::tetra::{EdgeId, FaceId, Surface};

/// An ordered placement of face copies in the hyperbolic plane. Consecutive
/// copies are glued along `shared_edges[i]`, whose endpoints coincide in
/// both placements.
#[derive(Debug, Clone)]
pub struct Development {
    pub placements: Vec<(FaceId, HIsometry)>,
    pub shared_edges: Vec<EdgeId>,
}

/// The unique edge shared by two distinct faces of the tetrahedron.
fn shared_edge(a: FaceId, b: FaceId) -> Result<EdgeId> {
    if a == b {
        return Err(Error::NonAdjacentFaces(a.0 as usize, b.0 as usize));
    }
    EdgeId::all()
        .find(|&e| a.contains_edge(e) && b.contains_edge(e))
        .ok_or(Error::NonAdjacentFaces(a.0 as usize, b.0 as usize))
}

/// Develops the faces in order, placing the first copy with `seed`.
/// Deterministic given the seed; consecutive faces must be distinct.
pub fn develop(surface: &Surface, faces: &[FaceId], seed: &HIsometry) -> Result<Development> {
    if faces.is_empty() {
        return Err(Error::BadInput("empty face sequence".into()));
    }
    let mut placements = Vec::with_capacity(faces.len());
    let mut shared_edges = Vec::with_capacity(faces.len().saturating_sub(1));
    let mut g = *seed;
    placements.push((faces[0], g));
    for w in faces.windows(2) {
        let (prev, next) = (w[0], w[1]);
        let e = shared_edge(prev, next)?;
        let tau = surface.transition(prev, e)?;
        g = g * *tau;
        placements.push((next, g));
        shared_edges.push(e);
    }
    Ok(Development {
        placements,
        shared_edges,
    })
}

impl Development {
    /// Placed chart position of global vertex `v` on copy `i`.
    pub fn placed_vertex(&self, surface: &Surface, i: usize, v: crate::tetra::VertexId) -> Result<HPoint> {
        let (f, g) = &self.placements[i];
        Ok(g.apply(&surface.chart_vertex(*f, v)?))
    }

    /// Placed endpoints (in canonical label order) of edge `e` on copy `i`.
    pub fn placed_edge(&self, surface: &Surface, i: usize, e: EdgeId) -> Result<(HPoint, HPoint)> {
        let (f, g) = &self.placements[i];
        let (a, b) = surface.chart_edge(*f, e)?;
        Ok((g.apply(&a), g.apply(&b)))
    }

    /// Interior angles of the development at its boundary vertices: placed
    /// corners are grouped by position and the face angles at each group
    /// summed. Every sum is `k * alpha` for some multiplicity `k`.
    pub fn boundary_angles(&self, surface: &Surface) -> Result<Vec<f64>> {
        let alpha = surface.alpha();
        let mut groups: Vec<(HPoint, f64)> = Vec::new();
        for (f, g) in &self.placements {
            for v in f.labels() {
                let p = g.apply(&surface.chart_vertex(*f, v)?);
                match groups.iter_mut().find(|(q, _)| q.coord_dist(&p) < 1e-8) {
                    Some((_, total)) => *total += alpha,
                    None => groups.push((p, alpha)),
                }
            }
        }
        Ok(groups.into_iter().map(|(_, total)| total).collect())
    }
}
