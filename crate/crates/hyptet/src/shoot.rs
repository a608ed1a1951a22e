//! Brute-force closed-geodesic finder, independent of the construction
//! pipeline: it knows nothing about crossing sequences or developments and
//! uses only straight-line shooting plus the edge gluings.
//!
//! Shooting forward and testing state closure directly is hopeless on a
//! hyperbolic surface: the return map expands perturbations by a factor of
//! order e^L, so the sublevel set of the closure defect around a closed
//! geodesic is far narrower than any affordable grid. The finder instead
//! uses a point-symmetry reduction: a point reflection about the midpoint
//! of an edge is an isometry of the surface that reverses any geodesic
//! through that midpoint in place. A ray launched from an edge midpoint is
//! therefore part of a closed geodesic exactly when it passes through some
//! other edge midpoint, which turns the search into one parameter (the
//! launch angle) with a midpoint-residual objective that a dense scan plus
//! golden-section refinement minimizes reliably. Every accepted candidate
//! is still verified by an explicit full-loop closure shot, so the
//! symmetry is only used to find, never to certify.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{map_collect, Mode};
use crate::geodesic::{normalized_cycle_key, GeodesicPath, GeodesicType, Segment};
use crate::hyp::{self, HDirection, HPoint};
use crate::tetra::{faces_of_edge, EdgeId, FaceId, Surface};

/// Instantaneous state of a shot: a point strictly inside `face` (or on an
/// open edge of it) with a unit direction and the length traveled so far.
#[derive(Debug, Clone, Copy)]
pub struct ShotState {
    pub face: FaceId,
    pub point: HPoint,
    pub dir: HDirection,
    pub length: f64,
}

/// One crossing of a shot, with the incidence angle measured on the
/// entering side.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ShotCrossing {
    pub edge: EdgeId,
    pub t: f64,
    pub angle: f64,
    /// Face the shot enters through this crossing.
    #[serde(skip)]
    pub into_face: FaceId,
    /// Arclength from the launch point.
    pub at_length: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShotOutcome {
    ReachedLength,
    VertexHit,
}

#[derive(Debug, Clone)]
pub struct ShotLog {
    pub crossings: Vec<ShotCrossing>,
    pub segments: Vec<Segment>,
    pub state: ShotState,
    pub outcome: ShotOutcome,
}

/// How close to an edge endpoint a crossing may come before the shot stops
/// with a vertex hit.
const VERTEX_TOL: f64 = 1e-10;

/// Launches a shot from parameter `t0` on `edge`, entering the edge's left
/// face, at angle `theta` in (0, pi) against the edge direction.
pub fn shoot(
    surface: &Surface,
    edge: EdgeId,
    t0: f64,
    theta: f64,
    l_max: f64,
) -> Result<ShotLog> {
    if !(t0 > 0.0 && t0 < 1.0) {
        return Err(Error::BadInput(format!("t0 = {t0} outside (0,1)")));
    }
    if !(theta > 0.0 && theta < std::f64::consts::PI) {
        return Err(Error::BadInput(format!("theta = {theta} outside (0,pi)")));
    }
    let (face, _) = faces_of_edge(edge);
    let point = surface.chart_edge_point(face, edge, t0)?;
    let (_, eb) = surface.chart_edge(face, edge)?;
    let e_dir = hyp::direction(&point, &eb)?;
    // the face's interior lies to the left of the oriented edge, so a
    // counterclockwise rotation by theta points into it
    let dir = e_dir.rotated_at(&point, theta);
    shoot_from_state(
        surface,
        ShotState {
            face,
            point,
            dir,
            length: 0.0,
        },
        l_max,
    )
}

/// Traces a shot by repeated chord extension and edge gluing until the
/// length budget runs out or the ray grazes a vertex.
pub fn shoot_from_state(surface: &Surface, start: ShotState, l_max: f64) -> Result<ShotLog> {
    let a = surface.edge_length();
    let mut st = start;
    let mut crossings = Vec::new();
    let mut segments = Vec::new();
    let mut outcome = ShotOutcome::ReachedLength;
    let max_steps = 200_000usize;

    'steps: for _ in 0..max_steps {
        if st.length >= l_max {
            break;
        }
        let nvec = hyp::tangent_normal(&st.point, &st.dir);
        let mut exit: Option<(EdgeId, HPoint, f64, f64)> = None; // edge, point, sigma, t
        for e in EdgeId::all().filter(|e| st.face.contains_edge(*e)) {
            let (ea, eb) = surface.chart_edge(st.face, e)?;
            if let Some((c, s_edge)) = hyp::intersect_segment(&nvec.0, &ea, &eb)? {
                let sigma = hyp::arclength_coord(&st.point, &st.dir, &c);
                if sigma > 1e-10 && exit.as_ref().map_or(true, |(_, _, s, _)| sigma < *s) {
                    exit = Some((e, c, sigma, s_edge / a));
                }
            }
        }
        let (e, c, sigma, t) = match exit {
            Some(hit) => hit,
            None => {
                // degenerate ray through (or numerically past) a corner of
                // the face: no transversal exit exists
                if let Some(sigma) = corner_graze(surface, &st)? {
                    outcome = ShotOutcome::VertexHit;
                    st.point = hyp::geodesic_point(&st.point, &st.dir, sigma);
                    st.length += sigma;
                    break 'steps;
                }
                return Err(Error::InvariantViolation(
                    "shot found no forward exit from a face".into(),
                ));
            }
        };
        let at_length = st.length + sigma;
        segments.push(Segment {
            face: st.face,
            start: st.point,
            end: c,
            length: sigma,
        });
        if t * a < VERTEX_TOL || (1.0 - t) * a < VERTEX_TOL {
            outcome = ShotOutcome::VertexHit;
            st = ShotState {
                face: st.face,
                point: c,
                dir: st.dir,
                length: at_length,
            };
            crossings.push(ShotCrossing {
                edge: e,
                t,
                angle: f64::NAN,
                into_face: st.face,
                at_length,
            });
            break 'steps;
        }
        // forward tangent at the crossing point
        let v_at = HDirection::at(
            &c,
            st.point.0 * sigma.sinh() + st.dir.0 * sigma.cosh(),
        )?;
        // glue into the neighbor chart
        let next_face = surface.neighbor(st.face, e)?;
        let tau = surface.transition(next_face, e)?;
        let c_next = tau.apply(&c);
        let v_next = tau.apply_dir(&v_at);
        let (_, eb_next) = surface.chart_edge(next_face, e)?;
        let angle = hyp::angle_between(&v_next, &hyp::direction(&c_next, &eb_next)?);
        crossings.push(ShotCrossing {
            edge: e,
            t,
            angle,
            into_face: next_face,
            at_length,
        });
        st = ShotState {
            face: next_face,
            point: c_next,
            dir: v_next,
            length: at_length,
        };
    }
    Ok(ShotLog {
        crossings,
        segments,
        state: st,
        outcome,
    })
}

/// Forward arclength at which the ray meets a corner of the current face,
/// when it passes within 1e-8 of one.
fn corner_graze(surface: &Surface, st: &ShotState) -> Result<Option<f64>> {
    let nvec = hyp::tangent_normal(&st.point, &st.dir);
    for v in st.face.labels() {
        let corner = surface.chart_vertex(st.face, v)?;
        if hyp::mink(&corner.0, &nvec.0).abs() < 1e-8 {
            let sigma = hyp::arclength_coord(&st.point, &st.dir, &corner);
            if sigma > 1e-12 {
                return Ok(Some(sigma));
            }
        }
    }
    Ok(None)
}

/// Search configuration. `grid` matches the nominal two-dimensional budget:
/// the scan evaluates `grid * grid` launch angles per start edge.
#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    pub l_max: f64,
    pub grid: usize,
    pub refine_tol: f64,
    pub mode: Mode,
}

impl OracleConfig {
    pub fn new(l_max: f64) -> Self {
        OracleConfig {
            l_max,
            grid: 200,
            refine_tol: 1e-9,
            mode: Mode::Auto,
        }
    }
}

/// A closed simple geodesic found by shooting, before any identification
/// against constructed ones.
#[derive(Debug, Clone)]
pub struct FoundGeodesic {
    /// Rotation/reversal-normalized edge cycle.
    pub key: Vec<u8>,
    pub length: f64,
    pub defect_pos: f64,
    pub defect_ang: f64,
    pub crossings: Vec<ShotCrossing>,
    pub start: (EdgeId, f64, f64),
    /// Type read off the per-pair crossing counts, when they have the
    /// (p, q, p+q) coprime shape.
    pub counts_type: Option<GeodesicType>,
}

/// Scans launch angles from the midpoints of one edge per opposite pair,
/// refines every local minimum of the midpoint residual, certifies each
/// candidate with a full-loop closure shot, checks simplicity, and returns
/// the deduplicated finds sorted by length.
pub fn find_closed(surface: &Surface, cfg: &OracleConfig) -> Result<Vec<FoundGeodesic>> {
    let samples = cfg.grid * cfg.grid;
    let mut found: Vec<FoundGeodesic> = Vec::new();
    for edge in [EdgeId(0), EdgeId(1), EdgeId(2)] {
        // dense residual scan, parallel over angle chunks
        let thetas: Vec<f64> = (0..samples)
            .map(|j| std::f64::consts::PI * (j as f64 + 0.5) / samples as f64)
            .collect();
        let residuals: Vec<f64> = map_collect(cfg.mode, &thetas, |&th| {
            midpoint_residual(surface, edge, th, cfg.l_max).map_or(f64::INFINITY, |(r, _)| r)
        });
        // refine strict local minima below a loose gate
        let mut candidates = Vec::new();
        for j in 0..samples {
            let r = residuals[j];
            if !r.is_finite() || r > 0.1 {
                continue;
            }
            let left = if j == 0 { f64::INFINITY } else { residuals[j - 1] };
            let right = if j + 1 == samples {
                f64::INFINITY
            } else {
                residuals[j + 1]
            };
            if r <= left && r <= right {
                candidates.push(thetas[j]);
            }
        }
        let step = std::f64::consts::PI / samples as f64;
        let refined: Vec<Option<FoundGeodesic>> = map_collect(cfg.mode, &candidates, |&th0| {
            refine_candidate(surface, edge, th0, step, cfg).ok().flatten()
        });
        for f in refined.into_iter().flatten() {
            if !found.iter().any(|g| g.key == f.key) {
                found.push(f);
            }
        }
    }
    found.sort_by(|a, b| {
        a.length
            .partial_cmp(&b.length)
            .unwrap()
            .then_with(|| a.key.cmp(&b.key))
    });
    Ok(found)
}

/// Smallest |t - 1/2| over the crossings of a half-budget shot from the
/// midpoint of `edge`, together with the index of the best crossing.
fn midpoint_residual(
    surface: &Surface,
    edge: EdgeId,
    theta: f64,
    l_max: f64,
) -> Result<(f64, usize)> {
    let log = shoot(surface, edge, 0.5, theta, l_max / 2.0)?;
    let mut best = (f64::INFINITY, usize::MAX);
    for (k, c) in log.crossings.iter().enumerate() {
        if c.angle.is_nan() {
            continue;
        }
        let r = (c.t - 0.5).abs();
        if r < best.0 {
            best = (r, k);
        }
    }
    Ok(best)
}

/// Residual of a fixed crossing index, +inf when the itinerary changed.
fn residual_at(
    surface: &Surface,
    edge: EdgeId,
    theta: f64,
    l_max: f64,
    k: usize,
    want_edge: EdgeId,
) -> f64 {
    match shoot(surface, edge, 0.5, theta, l_max / 2.0) {
        Ok(log) => match log.crossings.get(k) {
            Some(c) if c.edge == want_edge && !c.angle.is_nan() => (c.t - 0.5).abs(),
            _ => f64::INFINITY,
        },
        Err(_) => f64::INFINITY,
    }
}

fn refine_candidate(
    surface: &Surface,
    edge: EdgeId,
    theta0: f64,
    step: f64,
    cfg: &OracleConfig,
) -> Result<Option<FoundGeodesic>> {
    let (_, k) = midpoint_residual(surface, edge, theta0, cfg.l_max)?;
    if k == usize::MAX {
        return Ok(None);
    }
    let want_edge = shoot(surface, edge, 0.5, theta0, cfg.l_max / 2.0)?.crossings[k].edge;
    let f = |th: f64| residual_at(surface, edge, th, cfg.l_max, k, want_edge);
    let theta = golden_section(f, theta0 - step, theta0 + step, 200);
    if !f(theta).is_finite() {
        return Ok(None);
    }
    certify(surface, edge, theta, cfg)
}

/// Golden-section minimization on a bracket.
fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let inv_phi = 0.618_033_988_749_894_9_f64;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if hi - lo < 1e-15 {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Full-loop certification: shoot to the length budget, locate the best
/// same-state return, and verify position and angle closure, simplicity,
/// and a clean crossing log.
fn certify(
    surface: &Surface,
    edge: EdgeId,
    theta: f64,
    cfg: &OracleConfig,
) -> Result<Option<FoundGeodesic>> {
    let a = surface.edge_length();
    let (enter_face, _) = faces_of_edge(edge);
    let log = shoot(surface, edge, 0.5, theta, cfg.l_max)?;
    // first same-edge, same-direction return within tolerance; taking the
    // first keeps a doubled cover from shadowing the primitive loop
    let mut ret: Option<(usize, f64, f64)> = None;
    for (k, c) in log.crossings.iter().enumerate() {
        if c.edge != edge || c.into_face != enter_face || c.angle.is_nan() {
            continue;
        }
        let dp = (c.t - 0.5).abs() * a;
        let da = (c.angle - theta).abs();
        if dp <= cfg.refine_tol && da <= cfg.refine_tol {
            ret = Some((k, dp, da));
            break;
        }
    }
    let (k_ret, defect_pos, defect_ang) = match ret {
        Some(r) => r,
        None => return Ok(None),
    };
    if k_ret + 1 < 4 {
        // a closed geodesic on the tetrahedron crosses at least four edges;
        // shorter "returns" are numerical ghosts hugging the launch edge
        return Ok(None);
    }
    let cycle = &log.crossings[..=k_ret];
    let length = cycle[k_ret].at_length;
    // simplicity over the cycle's per-face chords
    if !segments_pairwise_disjoint(&log.segments[..=k_ret]) {
        return Ok(None);
    }
    let mut edges: Vec<EdgeId> = vec![edge];
    edges.extend(cycle[..k_ret].iter().map(|c| c.edge));
    let key = normalized_cycle_key(&edges);
    let counts_type = type_from_counts(&edges);
    let mut crossings = vec![ShotCrossing {
        edge,
        t: 0.5,
        angle: theta,
        into_face: enter_face,
        at_length: 0.0,
    }];
    crossings.extend_from_slice(&cycle[..k_ret]);
    Ok(Some(FoundGeodesic {
        key,
        length,
        defect_pos,
        defect_ang,
        crossings,
        start: (edge, 0.5, theta),
        counts_type,
    }))
}

fn segments_pairwise_disjoint(segments: &[Segment]) -> bool {
    for f in FaceId::all() {
        let chords: Vec<((f64, f64), (f64, f64))> = segments
            .iter()
            .filter(|s| s.face == f)
            .map(|s| (s.start.to_klein(), s.end.to_klein()))
            .collect();
        for i in 0..chords.len() {
            for j in (i + 1)..chords.len() {
                let (a, b) = chords[i];
                let (c, d) = chords[j];
                let o1 = orient2(a, b, c);
                let o2 = orient2(a, b, d);
                let o3 = orient2(c, d, a);
                let o4 = orient2(c, d, b);
                let guard = 1e-12;
                if o1.abs() < guard || o2.abs() < guard || o3.abs() < guard || o4.abs() < guard {
                    return false;
                }
                if (o1 > 0.0) != (o2 > 0.0) && (o3 > 0.0) != (o4 > 0.0) {
                    return false;
                }
            }
        }
    }
    true
}

fn orient2(p: (f64, f64), q: (f64, f64), r: (f64, f64)) -> f64 {
    (q.0 - p.0) * (r.1 - p.1) - (q.1 - p.1) * (r.0 - p.0)
}

/// Reads (p, q) off the per-pair crossing counts when they carry the
/// coprime (p, q, p+q) shape.
fn type_from_counts(edges: &[EdgeId]) -> Option<GeodesicType> {
    let mut per_edge = [0u32; 6];
    for e in edges {
        per_edge[e.0 as usize] += 1;
    }
    let mut pair = [0u32; 3];
    for e in 0..3 {
        if per_edge[e] != per_edge[5 - e] {
            return None;
        }
        pair[e] = per_edge[e];
    }
    pair.sort_unstable();
    let (p, q, s) = (pair[0], pair[1], pair[2]);
    if p + q != s {
        return None;
    }
    GeodesicType::new(p, q).ok()
}

/// Matches a found geodesic against constructed paths (the three copies of
/// each type): equal normalized cycle and length within `len_tol`.
pub fn identify_against(
    found: &FoundGeodesic,
    built: &[GeodesicPath],
    len_tol: f64,
) -> Option<GeodesicType> {
    built
        .iter()
        .find(|b| b.cycle_key() == found.key && (b.length() - found.length).abs() < len_tol)
        .map(|b| b.ty())
}
