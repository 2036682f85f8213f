// Closed-form zipper derivative G'_{u,v} = -sum_Z h(u,v,k,l), with
// h(p,q,k,l) = G_pk G_lq - G_pl G_kq and Z the straight zipper running down
// from the start face.
//
// Half-turn p -> c - p carries the zipper to one running up from the image
// start point; the pieces of the resulting closed loops are a finite path
// sum plus a multiple of G_{u,v} given by winding numbers. Translating by
// t = u + v - c swaps the arguments, and antisymmetry solves for G'_{u,v}.

use super::geometry::{self, crossings, pos, route, winding_ccw, zipper_start, P, UNIT};
use super::kernel::{gbar, potential_kernel_f64, displacement};
use super::{Lattice, Pt};
use crate::error::{Error, Result};
use crate::exactnum::{rat, ExactValue};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermKind {
    /// `winding * G_{u,v}` from sweeping the zipper across a point.
    Winding { contour: &'static str, point: Pt, winding: i64 },
    /// `h(p, q, k, l)` for an edge crossed while moving the start point.
    Crossing { contour: &'static str, p: Pt, q: Pt, k: Pt, l: Pt },
    /// `G'_{u,w}` for a neighbor `w` of `v` (hexagonal same-color pairs).
    Neighbor { w: Pt },
    /// `+-G_{u,x}` for a zipper edge at `v`.
    ZipperEnd { k: Pt, l: Pt },
}

/// One summand of the finite formula, before the final division.
#[derive(Clone, Debug)]
pub struct Term {
    pub kind: TermKind,
    pub value: ExactValue,
}

fn check_vertex(lat: Lattice, p: Pt) -> Result<()> {
    if lat.is_vertex(p) {
        Ok(())
    } else {
        Err(Error::Invalid(format!("({},{}) is not a {} vertex", p.0, p.1, lat)))
    }
}

fn h(lat: Lattice, p: Pt, q: Pt, k: Pt, l: Pt) -> Result<ExactValue> {
    let a = gbar(lat, p, k)?.mul(&gbar(lat, l, q)?);
    let b = gbar(lat, p, l)?.mul(&gbar(lat, k, q)?);
    Ok(a.sub(&b))
}

pub fn gbar_prime(lat: Lattice, u: Pt, v: Pt) -> Result<ExactValue> {
    gbar_prime_logged(lat, u, v).map(|x| x.0)
}

/// `G'_{u,v}` together with the terms it was assembled from.
pub fn gbar_prime_logged(lat: Lattice, u: Pt, v: Pt) -> Result<(ExactValue, Vec<Term>)> {
    check_vertex(lat, u)?;
    check_vertex(lat, v)?;
    if u == v {
        return Ok((ExactValue::from_int(0), Vec::new()));
    }
    if lat == Lattice::Hexagonal && lat.class(u) == lat.class(v) {
        return same_color(lat, u, v);
    }
    half_turn(lat, u, v)
}

fn half_turn(lat: Lattice, u: Pt, v: Pt) -> Result<(ExactValue, Vec<Term>)> {
    let c = lat.half_turn_center();
    let a = (c.0 - u.0, c.1 - u.1);
    let b = (c.0 - v.0, c.1 - v.1);
    let t = (u.0 + v.0 - c.0, u.1 + v.1 - c.1);
    let start = zipper_start(lat);
    let pc = pos(lat, c);
    let rstart = (pc.0 - start.0, pc.1 - start.1);
    let pt = pos(lat, t);
    let tstart = (start.0 + pt.0, start.1 + pt.1);

    let p1 = route(lat, start, rstart);
    let p2 = route(lat, start, tstart);

    let mut far: i128 = 0;
    for q in [u, v, a, b] {
        let pq = pos(lat, q);
        far = far.max(pq.0.abs()).max(pq.1.abs());
    }
    for q in p1.iter().chain(p2.iter()) {
        far = far.max(q.0.abs()).max(q.1.abs());
    }
    let m = far + 10 * UNIT;

    // half-turned zipper plus its return path, closed on the left at infinity
    let mut c1: Vec<P> = p1.clone();
    c1.extend([(rstart.0, m), (-m, m), (-m, -m), (start.0, -m)]);
    // translated zipper against the original one
    let mut c2: Vec<P> = p2.clone();
    c2.extend([(tstart.0, -m), (start.0, -m)]);

    let cw = |poly: &[P], q: Pt| -winding_ccw(poly, pos(lat, q));
    let guv = gbar(lat, u, v)?;
    let mut terms = Vec::new();
    for (contour, poly, q, sign) in [("translate", &c2, u, 1), ("translate", &c2, v, -1), ("half-turn", &c1, b, 1), ("half-turn", &c1, a, -1)] {
        let w = sign * cw(poly, q);
        if w != 0 {
            terms.push(Term {
                kind: TermKind::Winding { contour, point: q, winding: w },
                value: guv.scale(&rat(w, 1)),
            });
        }
    }
    for (k, l) in crossings(lat, &p2) {
        let value = h(lat, v, u, k, l)?;
        terms.push(Term { kind: TermKind::Crossing { contour: "translate", p: v, q: u, k, l }, value });
    }
    for (k, l) in crossings(lat, &p1) {
        let value = h(lat, a, b, k, l)?;
        terms.push(Term { kind: TermKind::Crossing { contour: "half-turn", p: a, q: b, k, l }, value });
    }
    let mut total = ExactValue::from_int(0);
    for x in &terms {
        total = total.add(&x.value);
    }
    Ok((total.scale(&rat(1, 2)), terms))
}

// Harmonicity in the second argument:
// deg G'_{u,v} - sum_{w~v} G'_{u,w} = sum_{(v,l) in Z} G_{u,l} - sum_{(k,v) in Z} G_{u,k}.
fn same_color(lat: Lattice, u: Pt, v: Pt) -> Result<(ExactValue, Vec<Term>)> {
    let mut terms = Vec::new();
    for w in lat.neighbors(v) {
        let value = half_turn(lat, u, w)?.0;
        terms.push(Term { kind: TermKind::Neighbor { w }, value });
    }
    for (k, l) in zipper_edges_at(lat, v) {
        let value = if k == v { gbar(lat, u, l)? } else { gbar(lat, u, k)?.neg() };
        terms.push(Term { kind: TermKind::ZipperEnd { k, l }, value });
    }
    let mut total = ExactValue::from_int(0);
    for x in &terms {
        total = total.add(&x.value);
    }
    Ok((total.scale(&rat(1, lat.degree() as i64)), terms))
}

/// Zipper edges with an endpoint at `v`, as (k, l).
pub(crate) fn zipper_edges_at(lat: Lattice, v: Pt) -> Vec<(Pt, Pt)> {
    lat.neighbors(v)
        .into_iter()
        .filter_map(|w| geometry::zipper_orientation(lat, v, w))
        .collect()
}

/// Zipper edges (k, l) from the start face down to the given depth, top to
/// bottom. Transport `z` runs from `k` to `l`.
pub fn zipper_edges(lat: Lattice, depth: i64) -> Vec<(Pt, Pt)> {
    let s = zipper_start(lat);
    crossings(lat, &[s, (s.0, s.1 - UNIT * depth as i128)])
}

/// Partial sum of `-sum_Z h(u,v,k,l)` over zipper edges within `radius` rows
/// of the start face, in floating point.
pub fn gbar_prime_numeric(lat: Lattice, u: Pt, v: Pt, radius: i64) -> f64 {
    if u == v {
        return 0.0;
    }
    let g = |p: Pt, q: Pt| -potential_kernel_f64(lat, displacement(lat, p, q));
    let mut s = 0.0;
    for (k, l) in zipper_edges(lat, radius).into_iter().rev() {
        s -= g(u, k) * g(l, v) - g(u, l) * g(k, v);
    }
    s
}
