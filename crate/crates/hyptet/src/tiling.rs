//! Exact combinatorics of edge-crossing sequences on the regular triangular
//! tiling of the Euclidean plane.
//!
//! A closed geodesic of type (p, q) corresponds to the straight segment
//! from a start point S to S + (q + 2p, q*sqrt(3)). Storing x-coordinates
//! as rationals and y-coordinates as rational multiples of sqrt(3) makes
//! every crossing coordinate rational, so vertex hits are detected exactly
//! and the whole trace involves no floating point at all.
//!
//! Tiling lines come in three families (all coordinates in (x, w) with
//! y = w*sqrt(3)):
//!   horizontal  w = m/2,       m integer
//!   +60 degree  x - w = c,     c integer
//!   -60 degree  x + w = c,     c integer
//! Lattice vertices are the points with 2w integral and x - w integral;
//! even rows carry the labels A1/A2 and odd rows A3/A4, alternating along
//! each row with a parity shift per row (fixed by propagating labels from
//! one seed triangle; verified by the gluing test below).

use num::integer::gcd;
use num::rational::Ratio;
use num::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tetra::{common_face, EdgeId, FaceId, VertexId};

/// Exact rational scalar of the tiling.
pub type Rat = Ratio<i128>;

fn rat(n: i128, d: i128) -> Rat {
    Ratio::new(n, d)
}

/// Formats a rational as `num/den` (or plain integer).
pub fn rat_string(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A point of the tiling plane: Euclidean coordinates (x, w*sqrt(3)).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TilingPoint {
    pub x: Rat,
    pub w: Rat,
}

impl TilingPoint {
    pub fn new(x: Rat, w: Rat) -> Self {
        TilingPoint { x, w }
    }

    /// Point reflection of `self` about `center`.
    pub fn reflect_about(&self, center: &TilingPoint) -> TilingPoint {
        TilingPoint {
            x: center.x + center.x - self.x,
            w: center.w + center.w - self.w,
        }
    }
}

/// Label of the lattice vertex at (x, w), or None when the point is not a
/// vertex. Even rows (w integral, x integral) alternate A1/A2; odd rows
/// (both half-integral) alternate A3/A4, with the phase shifting per row.
pub fn vertex_label(x: &Rat, w: &Rat) -> Option<VertexId> {
    let two_w = *w * rat(2, 1);
    if !two_w.denom().is_one() || !(*x - *w).denom().is_one() {
        return None;
    }
    if w.denom().is_one() {
        let k = w.to_integer();
        let l = x.to_integer();
        Some(VertexId(if (l + k).rem_euclid(2) == 0 { 0 } else { 1 }))
    } else {
        let k = (*w - rat(1, 2)).to_integer();
        let l = (*x - rat(1, 2)).to_integer();
        Some(VertexId(if (l + k).rem_euclid(2) == 0 { 2 } else { 3 }))
    }
}

/// One edge crossing of the trace: which tetrahedron edge, the exact
/// arclength fraction `t` from the edge's first vertex, and the crossing
/// point itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TilingCrossing {
    pub edge: EdgeId,
    pub t: Rat,
    pub point: TilingPoint,
}

/// The full closed crossing cycle of a type-(p, q) trace. `crossings[0]`
/// is the start point on its edge; the cycle closes back onto it after
/// `4(p+q)` crossings.
#[derive(Debug, Clone)]
pub struct CrossingSeq {
    pub p: u32,
    pub q: u32,
    /// Offset of the start point along its edge (1/2 for midpoint traces).
    pub mu: Rat,
    pub crossings: Vec<TilingCrossing>,
}

#[derive(Serialize)]
struct CrossingJson {
    edge: String,
    t: String,
}

#[derive(Serialize)]
struct SeqJson {
    p: u32,
    q: u32,
    mu: String,
    crossings: Vec<CrossingJson>,
}

impl CrossingSeq {
    /// Crossings per edge, indexed by `EdgeId`.
    pub fn edge_counts(&self) -> [u32; 6] {
        let mut c = [0u32; 6];
        for cr in &self.crossings {
            c[cr.edge.0 as usize] += 1;
        }
        c
    }

    /// Crossings per edge within each opposite pair; Lemma-style counts are
    /// `{p, p}`, `{q, q}`, `{p+q, p+q}`.
    pub fn pair_counts(&self) -> [u32; 3] {
        let counts = self.edge_counts();
        let mut out = [0u32; 3];
        for e in EdgeId::all() {
            if e.0 < e.opposite().0 {
                out[e.pair().0 as usize] = counts[e.0 as usize];
            }
        }
        out
    }

    /// Face entered after crossing `i` (shared by edges `i` and `i+1`),
    /// for `i = 0 .. 4(p+q)-1` cyclically.
    pub fn face_sequence(&self) -> Result<Vec<FaceId>> {
        let n = self.crossings.len();
        let mut faces = Vec::with_capacity(n);
        for i in 0..n {
            let e1 = self.crossings[i].edge;
            let e2 = self.crossings[(i + 1) % n].edge;
            let f = common_face(e1, e2).ok_or_else(|| {
                Error::StructureViolation(format!(
                    "consecutive crossings {e1} and {e2} share no face"
                ))
            })?;
            faces.push(f);
        }
        Ok(faces)
    }

    /// JSON with rationals as "num/den" strings.
    pub fn to_json_string(&self) -> String {
        let doc = SeqJson {
            p: self.p,
            q: self.q,
            mu: rat_string(&self.mu),
            crossings: self
                .crossings
                .iter()
                .map(|c| CrossingJson {
                    edge: c.edge.to_string(),
                    t: rat_string(&c.t),
                })
                .collect(),
        };
        serde_json::to_string(&doc).expect("serialization cannot fail")
    }
}

/// Straight-segment length of the (p, q) trace on the unit-edge tiling:
/// `sqrt((q+2p)^2 + 3q^2) = 2 sqrt(p^2 + pq + q^2)`.
pub fn euclid_length(p: u32, q: u32) -> f64 {
    let (p, q) = (p as f64, q as f64);
    2.0 * (p * p + p * q + q * q).sqrt()
}

pub(crate) fn check_canonical(p: u32, q: u32) -> Result<()> {
    if q >= 1 << 20 {
        return Err(Error::BadInput(format!("q = {q} too large for exact trace")));
    }
    if gcd(p as i128, q as i128) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    if p >= q {
        return Err(Error::NotCanonical { p, q });
    }
    Ok(())
}

/// Exact vertex-hit test for the line through the midpoint of a horizontal
/// edge. Substituting an odd-row vertex gives `q(2l - 2k - 1) = 2p(2k+1)`;
/// substituting an even-row vertex gives `q(2l - 2k - 1) = 4pk`. The line
/// hits a vertex exactly when either has an integer solution, which happens
/// exactly for even q (for q = 2 mod 4 through an odd row, for q = 0 mod 4
/// through an even row).
pub fn vertex_hit_predicted(p: u32, q: u32) -> bool {
    let (p, q) = (p as i128, q as i128);
    // rhs(k) values for the two vertex rows; a solution needs q | rhs and
    // an odd quotient 2l - 2k - 1
    for k in 0..=(2 * q) {
        for rhs in [2 * p * (2 * k + 1), 4 * p * k] {
            if rhs % q == 0 && (rhs / q).rem_euclid(2) == 1 {
                return true;
            }
        }
    }
    false
}

/// Exact trace of the segment from `start` to `start + (q + 2p, q)` in
/// (x, w) coordinates. Crossing 0 is the start point, which must lie on a
/// tiling edge strictly inside it.
fn trace_from(p: u32, q: u32, start: TilingPoint) -> Result<Vec<TilingCrossing>> {
    let pi = p as i128;
    let qi = q as i128;
    let (x0, w0) = (start.x, start.w);
    let slope = rat(qi, qi + 2 * pi); // dw/dx
    let x_of_w = |w: Rat| x0 + (w - w0) * (rat(qi + 2 * pi, 1) / rat(qi, 1));
    let w_of_x = |x: Rat| w0 + (x - x0) * slope;

    let mut events: Vec<TilingPoint> = vec![start];
    // horizontal crossings: w = m/2 strictly between w0 and w0 + q
    let mut m = (w0 * rat(2, 1)).floor().to_integer() + 1;
    while rat(m, 2) <= w0 {
        m += 1;
    }
    while rat(m, 2) < w0 + rat(qi, 1) {
        let w = rat(m, 2);
        events.push(TilingPoint::new(x_of_w(w), w));
        m += 1;
    }
    // +60 crossings: x - w = c strictly between (x0-w0) and (x0-w0) + 2p
    let d0 = x0 - w0;
    let mut c = d0.floor().to_integer() + 1;
    while rat(c, 1) <= d0 {
        c += 1;
    }
    while rat(c, 1) < d0 + rat(2 * pi, 1) {
        // x - w(x) = c  =>  x (1 - slope) = c + w0 - x0*slope
        let x = (rat(c, 1) + w0 - x0 * slope) / (Rat::one() - slope);
        events.push(TilingPoint::new(x, w_of_x(x)));
        c += 1;
    }
    // -60 crossings: x + w = c strictly between (x0+w0) and (x0+w0) + 2p + 2q
    let s0 = x0 + w0;
    let mut c = s0.floor().to_integer() + 1;
    while rat(c, 1) <= s0 {
        c += 1;
    }
    while rat(c, 1) < s0 + rat(2 * pi + 2 * qi, 1) {
        let x = (rat(c, 1) - w0 + x0 * slope) / (Rat::one() + slope);
        events.push(TilingPoint::new(x, w_of_x(x)));
        c += 1;
    }

    events.sort_by(|a, b| a.x.cmp(&b.x));

    let mut out = Vec::with_capacity(events.len());
    for pt in events {
        if vertex_label(&pt.x, &pt.w).is_some() {
            return Err(Error::VertexHit {
                x: rat_string(&pt.x),
                w: rat_string(&pt.w),
            });
        }
        out.push(classify_crossing(&pt)?);
    }
    Ok(out)
}

/// Identifies the tiling edge through a non-vertex point that lies on
/// exactly one tiling line, and the exact parameter along it measured from
/// the edge's first (smaller-label) vertex.
fn classify_crossing(pt: &TilingPoint) -> Result<TilingCrossing> {
    let TilingPoint { x, w } = *pt;
    let on_h = (w * rat(2, 1)).denom().is_one();
    let on_p = (x - w).denom().is_one();
    let on_m = (x + w).denom().is_one();
    let families = on_h as u8 + on_p as u8 + on_m as u8;
    if families != 1 {
        // two families meet only at vertices, which were already excluded
        return Err(Error::StructureViolation(format!(
            "crossing at x={}, w={} lies on {families} line families",
            rat_string(&x),
            rat_string(&w)
        )));
    }
    let half = rat(1, 2);
    let (va, vb, t_raw) = if on_h {
        if w.denom().is_one() {
            let l = x.floor();
            (
                vertex_label(&l, &w),
                vertex_label(&(l + Rat::one()), &w),
                x - l,
            )
        } else {
            let l = (x - half).floor() + half;
            (
                vertex_label(&l, &w),
                vertex_label(&(l + Rat::one()), &w),
                x - l,
            )
        }
    } else {
        // diagonal edges run from a row-t0 vertex to a row-(t0+1/2) vertex
        let t0 = (w * rat(2, 1)).floor() / rat(2, 1);
        if on_p {
            let c = x - w;
            (
                vertex_label(&(c + t0), &t0),
                vertex_label(&(c + t0 + half), &(t0 + half)),
                (w - t0) * rat(2, 1),
            )
        } else {
            let c = x + w;
            (
                vertex_label(&(c - t0), &t0),
                vertex_label(&(c - t0 - half), &(t0 + half)),
                (w - t0) * rat(2, 1),
            )
        }
    };
    let (va, vb) = match (va, vb) {
        (Some(a), Some(b)) if a != b => (a, b),
        _ => {
            return Err(Error::StructureViolation(format!(
                "could not label the edge through x={}, w={}",
                rat_string(&x),
                rat_string(&w)
            )))
        }
    };
    if t_raw <= Rat::zero() || t_raw >= Rat::one() {
        return Err(Error::StructureViolation(
            "crossing parameter outside the open edge".into(),
        ));
    }
    let t = if va < vb { t_raw } else { Rat::one() - t_raw };
    Ok(TilingCrossing {
        edge: EdgeId::from_vertices(va, vb)?,
        t,
        point: *pt,
    })
}

/// Exact crossing sequence of the line `y = q sqrt(3)/(q+2p) (x - mu)`
/// starting on the horizontal edge from (0,0) to (1,0).
pub fn tiling_trace(p: u32, q: u32, mu: Rat) -> Result<CrossingSeq> {
    check_canonical(p, q)?;
    if mu <= Rat::zero() || mu >= Rat::one() {
        return Err(Error::BadInput(format!(
            "mu = {} outside the open interval (0,1)",
            rat_string(&mu)
        )));
    }
    let crossings = trace_from(p, q, TilingPoint::new(mu, Rat::zero()))?;
    let seq = CrossingSeq { p, q, mu, crossings };
    verify_counts(&seq)?;
    Ok(seq)
}

fn verify_counts(seq: &CrossingSeq) -> Result<()> {
    let n = seq.crossings.len();
    if n != 4 * (seq.p + seq.q) as usize {
        return Err(Error::StructureViolation(format!(
            "trace has {n} crossings, expected {}",
            4 * (seq.p + seq.q)
        )));
    }
    let counts = seq.edge_counts();
    let mut per_pair: Vec<(u32, u32)> = (0..3)
        .map(|k| {
            let e = EdgeId(k as u8);
            (
                counts[e.0 as usize],
                counts[e.opposite().0 as usize],
            )
        })
        .collect();
    for (a, b) in &per_pair {
        if a != b {
            return Err(Error::StructureViolation(
                "opposite edges crossed unequally".into(),
            ));
        }
    }
    let mut sums: Vec<u32> = per_pair.drain(..).map(|(a, _)| a).collect();
    sums.sort_unstable();
    if sums != vec![seq.p, seq.q, seq.p + seq.q] {
        return Err(Error::StructureViolation(format!(
            "per-pair counts {sums:?} differ from (p, q, p+q)"
        )));
    }
    Ok(())
}

/// Midpoint-through crossing sequence for type (p, q), plus the index of
/// the half-way midpoint crossing X2 (always `2(p+q)`).
///
/// For odd q the trace starts at the midpoint of a horizontal edge
/// (`mu = 1/2`); for even q that line necessarily hits a vertex, so the
/// start is swapped to the midpoint of a -60 edge, whose family carries
/// the odd count `p+q`.
pub fn midpoint_sequence(p: u32, q: u32) -> Result<(CrossingSeq, usize)> {
    check_canonical(p, q)?;
    midpoint_sequence_any(p, q)
}

/// As [`midpoint_sequence`] but admitting the exceptional symmetric pair
/// (1, 1), whose midpoint-through trace is perfectly well defined even
/// though it lies outside the canonical family.
pub(crate) fn midpoint_sequence_any(p: u32, q: u32) -> Result<(CrossingSeq, usize)> {
    if q == 0 || q >= 1 << 20 || p > q || gcd(p as i128, q as i128) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    let start = if q % 2 == 1 {
        TilingPoint::new(rat(1, 2), Rat::zero())
    } else {
        TilingPoint::new(rat(3, 4), rat(1, 4))
    };
    let crossings = trace_from(p, q, start)?;
    let seq = CrossingSeq {
        p,
        q,
        mu: rat(1, 2),
        crossings,
    };
    verify_counts(&seq)?;

    let m2 = 2 * (p + q) as usize;
    let half = rat(1, 2);
    if seq.crossings[0].t != half || seq.crossings[m2].t != half {
        return Err(Error::StructureViolation(
            "start or half-way crossing is not an edge midpoint".into(),
        ));
    }
    // central symmetry about X2: reflected crossing points coincide exactly
    // (the induced label map is a double transposition, so opposite-edge
    // pairs are preserved)
    let center = seq.crossings[m2].point;
    let n = seq.crossings.len();
    for j in 1..m2 {
        let a = &seq.crossings[m2 - j];
        let b = &seq.crossings[(m2 + j) % n];
        if a.point.reflect_about(&center) != b.point || a.edge.pair() != b.edge.pair() {
            return Err(Error::StructureViolation(
                "trace is not centrally symmetric about X2".into(),
            ));
        }
    }
    Ok((seq, m2))
}
