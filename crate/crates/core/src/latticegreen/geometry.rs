// Exact planar geometry on scaled affine coordinates.
//
// A lattice point (x, y) sits at (UNIT*x + HALF*shear*y, UNIT*y), which keeps
// every face center and half-edge integral. The triangular and hexagonal
// vertical scale sqrt3/2 is dropped; it is an affine map, so orientations and
// winding numbers are unchanged.

use super::{Lattice, Pt};

pub(crate) const UNIT: i128 = 1200;
const HALF: i128 = UNIT / 2;

pub(crate) type P = (i128, i128);

pub(crate) fn pos(lat: Lattice, p: Pt) -> P {
    (UNIT * p.0 as i128 + HALF * lat.shear() as i128 * p.1 as i128, UNIT * p.1 as i128)
}

/// Point inside the start face from which the zipper runs straight down.
pub(crate) fn zipper_start(lat: Lattice) -> P {
    match lat {
        Lattice::Square => (UNIT / 2, UNIT / 2),
        Lattice::Triangular => (3 * UNIT / 4, UNIT / 3),
        Lattice::Hexagonal => (UNIT / 2, UNIT),
    }
}

fn orient(a: P, b: P, c: P) -> i128 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn within(a: P, b: P, c: P) -> bool {
    c.0 >= a.0.min(b.0) && c.0 <= a.0.max(b.0) && c.1 >= a.1.min(b.1) && c.1 <= a.1.max(b.1)
}

fn on_segment(a: P, b: P, c: P) -> bool {
    orient(a, b, c) == 0 && within(a, b, c)
}

/// Lattice vertices whose position lies within `pad` units of the box.
pub(crate) fn vertices_near(lat: Lattice, lo: P, hi: P) -> Vec<Pt> {
    let pad = 2 * UNIT;
    let y0 = (lo.1 - pad).div_euclid(UNIT) as i64;
    let y1 = (hi.1 + pad).div_euclid(UNIT) as i64 + 1;
    let mut out = Vec::new();
    for y in y0..=y1 {
        let off = HALF * lat.shear() as i128 * y as i128;
        let x0 = (lo.0 - pad - off).div_euclid(UNIT) as i64;
        let x1 = (hi.0 + pad - off).div_euclid(UNIT) as i64 + 1;
        for x in x0..=x1 {
            if lat.is_vertex((x, y)) {
                out.push((x, y));
            }
        }
    }
    out
}

/// Each undirected edge with an endpoint near the box, once.
pub(crate) fn edges_near(lat: Lattice, lo: P, hi: P) -> Vec<(Pt, Pt)> {
    let mut out = Vec::new();
    for p in vertices_near(lat, lo, hi) {
        for q in lat.neighbors(p) {
            if p < q {
                out.push((p, q));
            }
        }
    }
    out
}

fn bbox(pts: &[P]) -> (P, P) {
    let lo = (pts.iter().map(|p| p.0).min().unwrap(), pts.iter().map(|p| p.1).min().unwrap());
    let hi = (pts.iter().map(|p| p.0).max().unwrap(), pts.iter().map(|p| p.1).max().unwrap());
    (lo, hi)
}

/// No vertex on the polyline and no polyline corner on an edge.
fn generic(lat: Lattice, path: &[P]) -> bool {
    let (lo, hi) = bbox(path);
    for v in vertices_near(lat, lo, hi) {
        let pv = pos(lat, v);
        if path.windows(2).any(|w| on_segment(w[0], w[1], pv)) {
            return false;
        }
    }
    for (p, q) in edges_near(lat, lo, hi) {
        let (a, b) = (pos(lat, p), pos(lat, q));
        if path.iter().any(|&c| on_segment(a, b, c)) {
            return false;
        }
    }
    true
}

/// A polyline from `s` to `e` avoiding vertices: straight if possible,
/// otherwise through a nudged midpoint.
pub(crate) fn route(lat: Lattice, s: P, e: P) -> Vec<P> {
    if s == e {
        return vec![s];
    }
    if generic(lat, &[s, e]) {
        return vec![s, e];
    }
    let mid = ((s.0 + e.0).div_euclid(2), (s.1 + e.1).div_euclid(2));
    for k in 1..200i128 {
        for d in [(k, 3 * k + 1), (-3 * k - 1, k), (2 * k + 1, -k), (-k, -2 * k - 1)] {
            let path = [s, (mid.0 + d.0, mid.1 + d.1), e];
            if generic(lat, &path) {
                return path.to_vec();
            }
        }
    }
    unreachable!("no generic route found")
}

/// Edges crossed by the polyline, as (k, l) with k on the right of travel,
/// in order along the path.
pub(crate) fn crossings(lat: Lattice, path: &[P]) -> Vec<(Pt, Pt)> {
    let mut out = Vec::new();
    for w in path.windows(2) {
        let (s, e) = (w[0], w[1]);
        let (lo, hi) = bbox(w);
        let mut here: Vec<(i128, (Pt, Pt))> = Vec::new();
        for (p, q) in edges_near(lat, lo, hi) {
            let (a, b) = (pos(lat, p), pos(lat, q));
            if let Some(kl) = cross(s, e, p, q, a, b) {
                // position of the intersection along the segment, for ordering
                let (o3, o4) = (orient(a, b, s).abs(), orient(a, b, e).abs());
                here.push(((o3 << 20) / (o3 + o4), kl));
            }
        }
        here.sort();
        out.extend(here.into_iter().map(|x| x.1));
    }
    out
}

/// Counterclockwise winding number of `q` around the closed polygon.
pub(crate) fn winding_ccw(poly: &[P], q: P) -> i64 {
    let mut wn = 0;
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if a.1 <= q.1 {
            if b.1 > q.1 && orient(a, b, q) > 0 {
                wn += 1;
            }
        } else if b.1 <= q.1 && orient(a, b, q) < 0 {
            wn -= 1;
        }
    }
    wn
}

/// The edge is crossed by the zipper ray; returns it as (k, l).
pub(crate) fn zipper_orientation(lat: Lattice, p: Pt, q: Pt) -> Option<(Pt, Pt)> {
    let a = zipper_start(lat);
    let (pa, pb) = (pos(lat, p), pos(lat, q));
    let low = pa.1.min(pb.1) - UNIT;
    cross(a, (a.0, low.min(a.1 - 1)), p, q, pa, pb)
}

fn cross(s: P, e: P, p: Pt, q: Pt, a: P, b: P) -> Option<(Pt, Pt)> {
    let (o1, o2) = (orient(s, e, a), orient(s, e, b));
    if o1.signum() * o2.signum() >= 0 {
        return None;
    }
    let (o3, o4) = (orient(a, b, s), orient(a, b, e));
    if o3.signum() * o4.signum() >= 0 {
        return None;
    }
    Some(if o1 < 0 { (p, q) } else { (q, p) })
}
