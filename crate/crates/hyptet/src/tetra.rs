//! The regular hyperbolic tetrahedron as an intrinsic surface.
//!
//! The surface is four congruent regular triangles (all face angles equal to
//! `alpha`) glued along six edges so that every vertex carries a cone angle
//! of `3 alpha`. Faces share one canonical chart: the regular triangle with
//! centroid at the hyperboloid origin and one vertex on the +x1 axis. A face
//! is then just an assignment of the global vertex labels A1..A4 to the
//! chart corners, and crossing an edge is a fixed Lorentz transition between
//! charts.
//!
//! The ambient picture lives in the 3-dimensional Klein ball: with the
//! circumcenter at the model center the tetrahedron is Euclidean-regular,
//! scaled so adjacent vertices sit at hyperbolic distance `edge_length(alpha)`.

use nalgebra::Vector4;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formulas;
use crate::hyp::{self, HDirection, HIsometry, HPoint};

/// Global vertex label, displayed as A1..A4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VertexId(pub u8);

impl std::fmt::Display for VertexId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "A{}", self.0 + 1)
    }
}

/// One of the six edges, stored as the ordered label pair (Ai, Aj), i < j.
/// Crossing parameters t in (0,1) are always measured from Ai.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EdgeId(pub u8);

/// Index of an opposite-edge pair (three pairs in total).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PairId(pub u8);

/// One of the four faces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FaceId(pub u8);

const EDGE_VERTICES: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Cyclic, consistently oriented vertex labels of the four faces. Each edge
/// appears in opposite directions in its two incident faces, which makes
/// the glued surface orientable and every chart transition proper.
const FACE_LABELS: [[u8; 3]; 4] = [[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]];

impl EdgeId {
    pub fn from_vertices(a: VertexId, b: VertexId) -> Result<EdgeId> {
        if a == b {
            return Err(Error::DegenerateInput("edge endpoints coincide"));
        }
        let key = (a.0.min(b.0), a.0.max(b.0));
        Ok(EdgeId(EDGE_VERTICES.iter().position(|&e| e == key).unwrap() as u8))
    }

    pub fn all() -> impl Iterator<Item = EdgeId> {
        (0..6u8).map(EdgeId)
    }

    /// Endpoints in canonical order (Ai, Aj) with i < j.
    pub fn vertices(&self) -> (VertexId, VertexId) {
        let (a, b) = EDGE_VERTICES[self.0 as usize];
        (VertexId(a), VertexId(b))
    }

    pub fn opposite(&self) -> EdgeId {
        EdgeId(5 - self.0)
    }

    pub fn pair(&self) -> PairId {
        PairId(self.0.min(5 - self.0))
    }

    pub fn contains(&self, v: VertexId) -> bool {
        let (a, b) = self.vertices();
        a == v || b == v
    }

    pub fn other_vertex(&self, v: VertexId) -> Option<VertexId> {
        let (a, b) = self.vertices();
        if v == a {
            Some(b)
        } else if v == b {
            Some(a)
        } else {
            None
        }
    }

    /// The common vertex of two distinct edges, if any.
    pub fn shared_vertex(&self, other: &EdgeId) -> Option<VertexId> {
        let (a, b) = self.vertices();
        [a, b].into_iter().find(|&v| other.contains(v))
    }
}

impl std::fmt::Display for EdgeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (a, b) = self.vertices();
        write!(f, "{a}{b}")
    }
}

impl FaceId {
    pub fn all() -> impl Iterator<Item = FaceId> {
        (0..4u8).map(FaceId)
    }

    /// Vertex labels in the face's cyclic (counterclockwise) chart order.
    pub fn labels(&self) -> [VertexId; 3] {
        FACE_LABELS[self.0 as usize].map(VertexId)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.labels().contains(&v)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        let (a, b) = e.vertices();
        self.contains(a) && self.contains(b)
    }

    /// The label of this face not on the given edge.
    pub fn apex(&self, e: EdgeId) -> Option<VertexId> {
        if !self.contains_edge(e) {
            return None;
        }
        self.labels().into_iter().find(|&v| !e.contains(v))
    }
}

/// The unique face containing both edges (two distinct edges of a
/// tetrahedron share a face exactly when they share a vertex).
pub fn common_face(e1: EdgeId, e2: EdgeId) -> Option<FaceId> {
    FaceId::all().find(|f| f.contains_edge(e1) && f.contains_edge(e2) && e1 != e2)
}

/// The two faces glued along an edge, ordered (left, right) by which face
/// traverses the edge Ai -> Aj in its cyclic order.
pub fn faces_of_edge(e: EdgeId) -> (FaceId, FaceId) {
    let (a, b) = e.vertices();
    let mut left = None;
    let mut right = None;
    for f in FaceId::all() {
        let l = f.labels();
        for k in 0..3 {
            if l[k] == a && l[(k + 1) % 3] == b {
                left = Some(f);
            }
            if l[k] == b && l[(k + 1) % 3] == a {
                right = Some(f);
            }
        }
    }
    (left.unwrap(), right.unwrap())
}

/// Face angle of the tetrahedron, constrained to (0, pi/3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetraParams {
    alpha: f64,
}

impl TetraParams {
    pub fn new(alpha: f64) -> Result<Self> {
        formulas::check_alpha(alpha)?;
        Ok(TetraParams { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// The canonical face chart: a regular triangle with interior angles
/// `alpha`, centroid at the origin, vertex 0 on the +x1 axis, corners in
/// counterclockwise order.
#[derive(Debug, Clone)]
pub struct FaceChart {
    vertices: [HPoint; 3],
    side: f64,
}

impl FaceChart {
    pub fn canonical(params: &TetraParams) -> Result<FaceChart> {
        let r = formulas::face_circumradius(params.alpha())?;
        let mut vertices = [HPoint::origin(); 3];
        for (k, v) in vertices.iter_mut().enumerate() {
            let th = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
            *v = HPoint::from_hyperboloid(r.cosh(), r.sinh() * th.cos(), r.sinh() * th.sin())?;
        }
        Ok(FaceChart {
            vertices,
            side: formulas::edge_length(params.alpha())?,
        })
    }

    pub fn vertices(&self) -> &[HPoint; 3] {
        &self.vertices
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    /// True when `p` lies in the closed chart triangle (orientation tests in
    /// Klein coordinates with a small guard; chords are straight there).
    pub fn contains(&self, p: &HPoint) -> bool {
        let q = p.to_klein();
        let v: Vec<(f64, f64)> = self.vertices.iter().map(|x| x.to_klein()).collect();
        (0..3).all(|i| {
            let a = v[i];
            let b = v[(i + 1) % 3];
            (b.0 - a.0) * (q.1 - a.1) - (b.1 - a.1) * (q.0 - a.0) >= -1e-12
        })
    }
}

/// The intrinsic regular tetrahedron: one shared chart, four label
/// assignments, and the twelve cached chart transitions (one per edge and
/// crossing direction). Immutable after construction.
#[derive(Debug, Clone)]
pub struct Surface {
    params: TetraParams,
    chart: FaceChart,
    /// transitions[f][e]: map from the chart of the face across edge `e`
    /// into the chart of face `f` (only defined when `e` is an edge of `f`).
    transitions: [[Option<HIsometry>; 6]; 4],
}

impl Surface {
    /// Builds the surface; the edge/vertex incidence graph is K4 by
    /// construction and the gluing maps are verified to be label-exact.
    pub fn build(params: TetraParams) -> Result<Surface> {
        let chart = FaceChart::canonical(&params)?;
        let mut surf = Surface {
            params,
            chart,
            transitions: [[None; 6]; 4],
        };
        for f in FaceId::all() {
            for e in EdgeId::all() {
                if f.contains_edge(e) {
                    let t = surf.compute_transition(f, e)?;
                    surf.transitions[f.0 as usize][e.0 as usize] = Some(t);
                }
            }
        }
        surf.verify_gluing()?;
        Ok(surf)
    }

    pub fn params(&self) -> &TetraParams {
        &self.params
    }

    pub fn alpha(&self) -> f64 {
        self.params.alpha()
    }

    pub fn edge_length(&self) -> f64 {
        self.chart.side()
    }

    pub fn chart(&self) -> &FaceChart {
        &self.chart
    }

    /// Chart position of the global vertex `v` on face `f`.
    pub fn chart_vertex(&self, f: FaceId, v: VertexId) -> Result<HPoint> {
        let idx = f
            .labels()
            .iter()
            .position(|&l| l == v)
            .ok_or_else(|| Error::BadInput(format!("vertex {v} not on face {}", f.0)))?;
        Ok(self.chart.vertices()[idx])
    }

    /// Chart endpoints of edge `e` on face `f`, in canonical (Ai, Aj) order.
    pub fn chart_edge(&self, f: FaceId, e: EdgeId) -> Result<(HPoint, HPoint)> {
        let (a, b) = e.vertices();
        Ok((self.chart_vertex(f, a)?, self.chart_vertex(f, b)?))
    }

    /// Chart midpoint of edge `e` on face `f`.
    pub fn chart_edge_midpoint(&self, f: FaceId, e: EdgeId) -> Result<HPoint> {
        let (a, b) = self.chart_edge(f, e)?;
        Ok(a.midpoint(&b))
    }

    /// Point on edge `e` of face `f` at arclength fraction `t` from the
    /// edge's first vertex.
    pub fn chart_edge_point(&self, f: FaceId, e: EdgeId, t: f64) -> Result<HPoint> {
        let (a, b) = self.chart_edge(f, e)?;
        let d = hyp::direction(&a, &b)?;
        Ok(hyp::geodesic_point(&a, &d, t * self.chart.side()))
    }

    /// The face on the other side of edge `e` from face `f`.
    pub fn neighbor(&self, f: FaceId, e: EdgeId) -> Result<FaceId> {
        if !f.contains_edge(e) {
            return Err(Error::BadInput(format!("edge {e} not on face {}", f.0)));
        }
        let (l, r) = faces_of_edge(e);
        Ok(if l == f { r } else { l })
    }

    /// Transition isometry mapping the chart of `neighbor(f, e)` into the
    /// chart of `f`, gluing label-exactly across `e` with the neighbor's
    /// interior landing on the far side of the edge.
    pub fn transition(&self, f: FaceId, e: EdgeId) -> Result<&HIsometry> {
        self.transitions[f.0 as usize][e.0 as usize]
            .as_ref()
            .ok_or_else(|| Error::BadInput(format!("edge {e} not on face {}", f.0)))
    }

    fn compute_transition(&self, f_from: FaceId, e: EdgeId) -> Result<HIsometry> {
        let f_to = self.neighbor(f_from, e)?;
        let (a, b) = e.vertices();
        let (p, q) = (self.chart_vertex(f_from, a)?, self.chart_vertex(f_from, b)?);
        let (pp, qp) = (self.chart_vertex(f_to, a)?, self.chart_vertex(f_to, b)?);
        let w = self.chart_vertex(f_from, f_from.apex(e).unwrap())?;
        let wp = self.chart_vertex(f_to, f_to.apex(e).unwrap())?;

        let d = hyp::direction(&p, &q)?;
        let dp = hyp::direction(&pp, &qp)?;
        // interior-pointing edge normals on both charts
        let n = interior_normal(&p, &d, &w);
        let np = interior_normal(&pp, &dp, &wp);
        // map (P', d', n'_int) onto (P, d, -n_int): the neighbor's interior
        // unfolds onto the far side of the edge
        let from_frame = frame_with_normal(&p, &d, &n.reversed());
        let to_frame = frame_with_normal(&pp, &dp, &np);
        Ok(from_frame * to_frame.inverse())
    }

    fn verify_gluing(&self) -> Result<()> {
        for e in EdgeId::all() {
            let (l, r) = faces_of_edge(e);
            let t_lr = self.transition(l, e)?;
            let t_rl = self.transition(r, e)?;
            // round trip across the edge is the identity
            let round = t_lr * t_rl;
            let probe = self.chart.vertices()[0];
            if round.apply(&probe).coord_dist(&probe) > 1e-10 {
                return Err(Error::InvariantViolation(format!(
                    "gluing across {e} is not an involution"
                )));
            }
            // endpoints are matched label-to-label
            let (a, b) = e.vertices();
            for (v, _) in [(a, 0), (b, 1)] {
                let img = t_lr.apply(&self.chart_vertex(r, v)?);
                if img.coord_dist(&self.chart_vertex(l, v)?) > 1e-10 {
                    return Err(Error::InvariantViolation(format!(
                        "gluing across {e} does not match label {v}"
                    )));
                }
            }
            if t_lr.orientation() != 1 {
                return Err(Error::InvariantViolation(format!(
                    "transition across {e} is not orientation-preserving"
                )));
            }
        }
        Ok(())
    }
}

fn interior_normal(p: &HPoint, d: &HDirection, interior_witness: &HPoint) -> HDirection {
    let n = hyp::tangent_normal(p, d);
    if hyp::mink(&interior_witness.0, &n.0) > 0.0 {
        n
    } else {
        n.reversed()
    }
}

fn frame_with_normal(p: &HPoint, d: &HDirection, n: &HDirection) -> HIsometry {
    // columns (p, d, n); orientation tag tracks the handedness of n
    let canonical = hyp::tangent_normal(p, d);
    if hyp::mink(&canonical.0, &n.0) > 0.0 {
        HIsometry::frame(p, d)
    } else {
        HIsometry::frame_flipped(p, d)
    }
}

/// Lower bounds for the vertex-to-geodesic distance together with the face
/// altitude and edge length; `d_log <= d_trig < h < a` throughout the range.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DistanceBounds {
    pub d_trig: f64,
    pub d_log: f64,
    pub h: f64,
    pub a: f64,
}

pub fn distance_bounds(params: &TetraParams) -> Result<DistanceBounds> {
    let alpha = params.alpha();
    Ok(DistanceBounds {
        d_trig: formulas::vertex_clearance_bound(alpha)?,
        d_log: formulas::vertex_clearance_bound_log(alpha)?,
        h: formulas::face_altitude(alpha)?,
        a: formulas::edge_length(alpha)?,
    })
}

/// The tetrahedron embedded in the 3-dimensional Klein ball, circumcenter
/// at the model center.
#[derive(Debug, Clone)]
pub struct KleinTetrahedron {
    pub alpha: f64,
    pub edge_length: f64,
    pub circumradius: f64,
    pub vertices: [[f64; 3]; 4],
}

/// Unit directions of a Euclidean-regular tetrahedron centered at the origin.
const TETRA_DIRECTIONS: [[f64; 3]; 4] = [
    [1.0, 1.0, 1.0],
    [1.0, -1.0, -1.0],
    [-1.0, 1.0, -1.0],
    [-1.0, -1.0, 1.0],
];

/// Hyperbolic distance between two adjacent vertices at Klein radius `r`
/// (the angle between regular-tetrahedron directions has cosine -1/3).
fn klein_edge_for_radius(r: f64) -> f64 {
    ((1.0 + r * r / 3.0) / (1.0 - r * r)).acosh()
}

/// Embeds the tetrahedron. The circumradius is found by bisection on the
/// monotone map r -> hyperbolic edge length, to an interval of 1e-14.
pub fn klein_embedding(params: &TetraParams) -> Result<KleinTetrahedron> {
    let a = formulas::edge_length(params.alpha())?;
    let (mut lo, mut hi) = (0.0f64, 1.0 - 1e-15);
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if klein_edge_for_radius(mid) < a {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = 0.5 * (lo + hi);
    let s = r / 3f64.sqrt();
    let vertices = TETRA_DIRECTIONS.map(|d| [d[0] * s, d[1] * s, d[2] * s]);
    Ok(KleinTetrahedron {
        alpha: params.alpha(),
        edge_length: a,
        circumradius: r,
        vertices,
    })
}

impl KleinTetrahedron {
    /// Hyperbolic distance between Klein-ball points.
    pub fn klein_distance(p: &[f64; 3], q: &[f64; 3]) -> f64 {
        let dot: f64 = p.iter().zip(q).map(|(a, b)| a * b).sum();
        let np: f64 = p.iter().map(|a| a * a).sum();
        let nq: f64 = q.iter().map(|a| a * a).sum();
        ((1.0 - dot) / ((1.0 - np) * (1.0 - nq)).sqrt()).acosh()
    }

    /// JSON with 15-digit decimals, stable field order.
    pub fn to_json_string(&self) -> String {
        let v = |x: f64| format!("{x:.15}");
        let verts: Vec<String> = self
            .vertices
            .iter()
            .map(|p| format!("[{},{},{}]", v(p[0]), v(p[1]), v(p[2])))
            .collect();
        format!(
            "{{\"alpha\":{},\"edge_length\":{},\"circumradius\":{},\"vertices\":[{}]}}",
            v(self.alpha),
            v(self.edge_length),
            v(self.circumradius),
            verts.join(",")
        )
    }
}

/// Maps a point of the face chart of `f` onto the corresponding face of the
/// embedded tetrahedron (Klein-ball coordinates). The map is the hyperbolic
/// isometry sending chart corners to embedded corners label-by-label.
pub fn chart_to_klein(surface: &Surface, f: FaceId, p: &HPoint) -> Result<[f64; 3]> {
    if !surface.chart().contains(p) {
        return Err(Error::BadInput("point outside the face chart".into()));
    }
    let embed = klein_embedding(surface.params())?;
    let labels = f.labels();
    let corners4: Vec<Vector4<f64>> = labels
        .iter()
        .map(|v| lift4(&embed.vertices[v.0 as usize]))
        .collect();

    // orthonormal basis (E0 timelike, E1, E2 spacelike) of the face plane
    let e0 = {
        let s = corners4[0] + corners4[1] + corners4[2];
        s / (-mink4(&s, &s)).sqrt()
    };
    let e1 = {
        let v = corners4[1] + e0 * mink4(&e0, &corners4[1]);
        v / mink4(&v, &v).sqrt()
    };
    let e2 = {
        let v = corners4[2] + e0 * mink4(&e0, &corners4[2]) - e1 * mink4(&e1, &corners4[2]);
        v / mink4(&v, &v).sqrt()
    };
    let intrinsic = |x: &Vector4<f64>| -> Result<HPoint> {
        HPoint::from_hyperboloid(-mink4(x, &e0), mink4(x, &e1), mink4(x, &e2))
    };
    let w: Vec<HPoint> = corners4.iter().map(intrinsic).collect::<Result<_>>()?;

    // 2D isometry aligning the chart triangle with the intrinsic triangle
    let c: Vec<HPoint> = labels
        .iter()
        .map(|v| surface.chart_vertex(f, *v))
        .collect::<Result<_>>()?;
    let tgt = HIsometry::frame(&w[0], &hyp::direction(&w[0], &w[1])?);
    let src = HIsometry::frame(&c[0], &hyp::direction(&c[0], &c[1])?);
    let mut map = tgt * src.inverse();
    if map.apply(&c[2]).coord_dist(&w[2]) > 1e-9 {
        let tgt_f = HIsometry::frame_flipped(&w[0], &hyp::direction(&w[0], &w[1])?);
        map = tgt_f * src.inverse();
    }
    let img = map.apply(&c[2]);
    if img.coord_dist(&w[2]) > 1e-9 {
        return Err(Error::InvariantViolation(
            "chart and embedded face are not isometric".into(),
        ));
    }

    let y = map.apply(p);
    let [y0, y1, y2] = y.coords();
    let x4 = e0 * y0 + e1 * y1 + e2 * y2;
    Ok([x4[1] / x4[0], x4[2] / x4[0], x4[3] / x4[0]])
}

fn lift4(p: &[f64; 3]) -> Vector4<f64> {
    let n2: f64 = p.iter().map(|a| a * a).sum();
    let x0 = 1.0 / (1.0 - n2).sqrt();
    Vector4::new(x0, p[0] * x0, p[1] * x0, p[2] * x0)
}

fn mink4(a: &Vector4<f64>, b: &Vector4<f64>) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn surface(alpha: f64) -> Surface {
        Surface::build(TetraParams::new(alpha).unwrap()).unwrap()
    }

    #[test]
    fn params_range() {
        assert!(TetraParams::new(PI / 3.0).is_err());
        assert!(TetraParams::new(0.0).is_err());
        assert!(TetraParams::new(PI / 6.0).is_ok());
    }

    #[test]
    fn combinatorics_is_k4() {
        // every vertex has exactly 3 incident face corners and 3 edges
        for v in (0..4).map(VertexId) {
            assert_eq!(FaceId::all().filter(|f| f.contains(v)).count(), 3);
            assert_eq!(EdgeId::all().filter(|e| e.contains(v)).count(), 3);
        }
        // gluing covers every face edge exactly once
        for e in EdgeId::all() {
            let (l, r) = faces_of_edge(e);
            assert_ne!(l, r);
            assert!(l.contains_edge(e) && r.contains_edge(e));
        }
        // opposite pairs partition the edges
        for e in EdgeId::all() {
            assert_eq!(e.opposite().opposite(), e);
            assert_eq!(e.pair(), e.opposite().pair());
            assert!(e.shared_vertex(&e.opposite()).is_none());
        }
        assert_eq!(common_face(EdgeId(0), EdgeId(3)), Some(FaceId(0)));
        assert_eq!(common_face(EdgeId(0), EdgeId(5)), None);
    }

    #[test]
    fn face_chart_has_prescribed_angles_and_sides() {
        for &alpha in &[PI / 6.0, PI / 4.0, 0.99 * PI / 3.0, 0.05] {
            let chart = FaceChart::canonical(&TetraParams::new(alpha).unwrap()).unwrap();
            let v = chart.vertices();
            let a = formulas::edge_length(alpha).unwrap();
            for i in 0..3 {
                let s = hyp::hdist(&v[i], &v[(i + 1) % 3]).unwrap();
                assert!((s - a).abs() < 1e-10, "side {s} vs edge {a}");
                let ang = hyp::angle(&v[i], &v[(i + 1) % 3], &v[(i + 2) % 3]).unwrap();
                assert!((ang - alpha).abs() < 1e-12, "angle {ang} vs alpha {alpha}");
            }
        }
    }

    #[test]
    fn cone_angles_are_three_alpha() {
        let s = surface(PI / 6.0);
        for v in (0..4).map(VertexId) {
            let mut total = 0.0;
            for f in FaceId::all().filter(|f| f.contains(v)) {
                let l = f.labels();
                let others: Vec<_> = l.iter().filter(|&&x| x != v).collect();
                let p = s.chart_vertex(f, v).unwrap();
                let q = s.chart_vertex(f, *others[0]).unwrap();
                let r = s.chart_vertex(f, *others[1]).unwrap();
                total += hyp::angle(&p, &q, &r).unwrap();
            }
            assert!((total - 3.0 * PI / 6.0).abs() < 1e-12);
            assert!(total < PI);
        }
    }

    #[test]
    fn gluing_round_trip_returns_chart_points() {
        let s = surface(PI / 4.0);
        for e in EdgeId::all() {
            let (l, r) = faces_of_edge(e);
            let round = s.transition(l, e).unwrap() * s.transition(r, e).unwrap();
            for t in [0.25, 0.5, 0.8] {
                let p = s.chart_edge_point(l, e, t).unwrap();
                assert!(round.apply(&p).coord_dist(&p) < 1e-12);
            }
        }
    }

    #[test]
    fn transition_is_isometric_on_the_shared_edge() {
        let s = surface(PI / 6.0);
        for e in EdgeId::all() {
            let (l, r) = faces_of_edge(e);
            let t = s.transition(l, e).unwrap();
            for tt in [0.15, 0.5, 0.95] {
                let on_r = s.chart_edge_point(r, e, tt).unwrap();
                let on_l = s.chart_edge_point(l, e, tt).unwrap();
                assert!(t.apply(&on_r).coord_dist(&on_l) < 1e-12);
            }
            // the neighbor's apex unfolds to the far side of the edge
            let apex_r = s.chart_vertex(r, r.apex(e).unwrap()).unwrap();
            let apex_l = s.chart_vertex(l, l.apex(e).unwrap()).unwrap();
            let (pa, pb) = s.chart_edge(l, e).unwrap();
            let n = hyp::geodesic_normal(&pa, &pb).unwrap();
            let s_apex = hyp::mink(&apex_l.0, &n);
            let s_img = hyp::mink(&t.apply(&apex_r).0, &n);
            assert!(s_apex * s_img < 0.0, "unfolded face overlaps instead of gluing");
        }
    }

    #[test]
    fn distance_bounds_ordering_on_grid() {
        for i in 1..=50 {
            let alpha = 0.01 + (PI / 3.0 - 0.02) * (i - 1) as f64 / 49.0;
            let b = distance_bounds(&TetraParams::new(alpha).unwrap()).unwrap();
            assert!(b.d_log <= b.d_trig && b.d_trig < b.h && b.h < b.a);
        }
    }

    #[test]
    fn klein_embedding_edges_and_symmetry() {
        for &alpha in &[PI / 6.0, PI / 4.0] {
            let t = klein_embedding(&TetraParams::new(alpha).unwrap()).unwrap();
            let a = formulas::edge_length(alpha).unwrap();
            for i in 0..4 {
                for j in (i + 1)..4 {
                    let d = KleinTetrahedron::klein_distance(&t.vertices[i], &t.vertices[j]);
                    assert!((d - a).abs() < 1e-10);
                }
            }
            // closed-form circumradius as an independent oracle for the bisection
            let r_closed = (3.0 * (a.cosh() - 1.0) / (3.0 * a.cosh() + 1.0)).sqrt();
            assert!((t.circumradius - r_closed).abs() < 1e-12);
            // centered at the origin
            for k in 0..3 {
                let c: f64 = t.vertices.iter().map(|v| v[k]).sum();
                assert!(c.abs() < 1e-12);
            }
        }
        // degenerate end: r -> 0
        let tiny = klein_embedding(&TetraParams::new(PI / 3.0 - 1e-9).unwrap()).unwrap();
        assert!(tiny.circumradius < 1e-3);
        // regression values for the bisection output
        let t6 = klein_embedding(&TetraParams::new(PI / 6.0).unwrap()).unwrap();
        assert!((t6.circumradius - 0.896575472168).abs() < 1e-12);
    }

    #[test]
    fn tetra_json_shape() {
        let t = klein_embedding(&TetraParams::new(PI / 6.0).unwrap()).unwrap();
        let s = t.to_json_string();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert!(v["alpha"].as_f64().is_some());
        assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
        // 15-digit decimals
        assert!(s.contains(&format!("{:.15}", PI / 6.0)));
    }

    #[test]
    fn chart_to_klein_is_isometric() {
        let s = surface(PI / 6.0);
        let f = FaceId(2);
        // chart vertices map to the corresponding embedded vertices
        let embed = klein_embedding(s.params()).unwrap();
        for v in f.labels() {
            let img = chart_to_klein(&s, f, &s.chart_vertex(f, v).unwrap()).unwrap();
            let tgt = embed.vertices[v.0 as usize];
            let err: f64 = img.iter().zip(&tgt).map(|(a, b)| (a - b).abs()).sum();
            assert!(err < 1e-9, "vertex {v} maps off by {err}");
        }
        // edge midpoints map to hyperbolic midpoints of embedded edges
        let e = EdgeId(0);
        assert!(f.contains_edge(e));
        let m = s.chart_edge_midpoint(f, e).unwrap();
        let img = chart_to_klein(&s, f, &m).unwrap();
        let (a, b) = e.vertices();
        let va = embed.vertices[a.0 as usize];
        let vb = embed.vertices[b.0 as usize];
        let d1 = KleinTetrahedron::klein_distance(&va, &img);
        let d2 = KleinTetrahedron::klein_distance(&vb, &img);
        assert!((d1 - d2).abs() < 1e-9);
        assert!((d1 + d2 - embed.edge_length).abs() < 1e-9);

        // distances between random chart point pairs are preserved
        let mut st = 12345u64;
        let mut rnd = move || {
            st = st.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (st >> 11) as f64 / (1u64 << 53) as f64
        };
        let verts = s.chart().vertices().to_vec();
        let mut sample = || {
            // random barycentric point strictly inside
            let (mut u, mut v) = (rnd(), rnd());
            if u + v > 1.0 {
                u = 1.0 - u;
                v = 1.0 - v;
            }
            let w = 1.0 - u - v;
            let k: Vec<(f64, f64)> = verts.iter().map(|x| x.to_klein()).collect();
            HPoint::from_klein(
                0.98 * (u * k[0].0 + v * k[1].0 + w * k[2].0),
                0.98 * (u * k[0].1 + v * k[1].1 + w * k[2].1),
            )
            .unwrap()
        };
        for _ in 0..50 {
            let p = sample();
            let q = sample();
            let ip = chart_to_klein(&s, FaceId(1), &p).unwrap();
            let iq = chart_to_klein(&s, FaceId(1), &q).unwrap();
            let d_chart = hyp::hdist(&p, &q).unwrap();
            let d_emb = KleinTetrahedron::klein_distance(&ip, &iq);
            assert!((d_chart - d_emb).abs() < 1e-9);
        }
        // outside point is rejected
        let outside = HPoint::from_klein(0.99, 0.0).unwrap();
        assert!(chart_to_klein(&s, FaceId(0), &outside).is_err());
    }
}
