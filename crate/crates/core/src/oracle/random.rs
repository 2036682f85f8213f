use std::collections::HashMap;

use rand::Rng;

use super::FiniteGraph;
use crate::exactnum::{rat, Rational};
use crate::latticegreen::{zipper_edges, Lattice, Pt};

fn conductance<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.gen_range(1..=5), rng.gen_range(1..=4))
}

/// Random graph on a polar grid: `rings` concentric cycles of `angles`
/// vertices each with random subsets of the angular, radial and diagonal
/// edges, an outer vertex joined to part of the outermost ring, and the
/// zipper crossing between angle `angles - 1` and angle 0. Nodes `1..n-1`
/// are vertices of the innermost ring in counterclockwise order and node `n`
/// is the outer vertex, which is also the Dirichlet vertex.
pub fn random_annular_graph<R: Rng>(rng: &mut R, n: usize, max_vertices: usize) -> FiniteGraph {
    assert!(n >= 2);
    loop {
        let angles = rng.gen_range((n - 1).max(3)..=(max_vertices - 1).max(3));
        let max_rings = ((max_vertices - 1) / angles).max(1);
        let rings = rng.gen_range(1..=max_rings.min(3));
        let mut g = FiniteGraph::new();
        let id = |r: usize, a: usize| r * angles + a;
        for r in 0..rings {
            for a in 0..angles {
                g.add_vertex(format!("{}:{}", r, a));
            }
        }
        let inf = g.add_vertex("inf");
        // transport z runs from angle `angles - 1` to angle 0
        let zip = |a: usize, b: usize| -> i64 {
            match (a, b) {
                (x, 0) if x == angles - 1 => 1,
                (0, x) if x == angles - 1 => -1,
                _ => 0,
            }
        };
        for r in 0..rings {
            for a in 0..angles {
                let b = (a + 1) % angles;
                if rng.gen_bool(0.75) {
                    g.add_edge(id(r, a), id(r, b), conductance(rng), zip(a, b));
                }
                if r + 1 < rings {
                    if rng.gen_bool(0.75) {
                        g.add_edge(id(r, a), id(r + 1, a), conductance(rng), 0);
                    }
                    // at most one diagonal per face
                    match rng.gen_range(0..5) {
                        0 => g.add_edge(id(r, a), id(r + 1, b), conductance(rng), zip(a, b)),
                        1 => g.add_edge(id(r + 1, a), id(r, b), conductance(rng), zip(a, b)),
                        _ => {}
                    }
                }
            }
        }
        for a in 0..angles {
            if rng.gen_bool(0.5) {
                g.add_edge(id(rings - 1, a), inf, conductance(rng), 0);
            }
        }
        let mut inner: Vec<usize> = (0..angles).collect();
        for i in (1..inner.len()).rev() {
            let j = rng.gen_range(0..=i);
            inner.swap(i, j);
        }
        inner.truncate(n - 1);
        inner.sort_unstable();
        g.nodes = inner.iter().map(|&a| id(0, a)).chain([inf]).collect();
        g.boundary = Some(inf);
        if g.validate().is_ok() && g.edges.iter().any(|e| e.zip != 0) {
            return g;
        }
    }
}

/// Lattice vertices with `|x|, |y| <= half` plus one wired outer vertex
/// (index 0) for everything outside, with the lattice zipper edges inside
/// the box. Returns the graph and the vertex ids of the lattice points.
pub fn wired_grid(lat: Lattice, half: i64) -> (FiniteGraph, HashMap<Pt, usize>) {
    let mut g = FiniteGraph::new();
    let inf = g.add_vertex("inf");
    let mut ids = HashMap::new();
    for y in (-half..=half).rev() {
        for x in -half..=half {
            if lat.is_vertex((x, y)) {
                ids.insert((x, y), g.add_vertex(format!("{},{}", x, y)));
            }
        }
    }
    let inside = |p: Pt| p.0.abs() <= half && p.1.abs() <= half;
    let zip: HashMap<(Pt, Pt), i64> = zipper_edges(lat, 2 * half + 2)
        .into_iter()
        .flat_map(|(k, l)| [((k, l), 1), ((l, k), -1)])
        .collect();
    let mut pts: Vec<Pt> = ids.keys().copied().collect();
    pts.sort_by_key(|p| ids[p]);
    for p in pts {
        for q in lat.neighbors(p) {
            if inside(q) {
                if ids[&p] < ids[&q] {
                    g.add_edge(ids[&p], ids[&q], Rational::from_integer(1.into()), zip.get(&(p, q)).copied().unwrap_or(0));
                }
            } else {
                g.add_edge(ids[&p], inf, Rational::from_integer(1.into()), 0);
            }
        }
    }
    g.boundary = Some(inf);
    (g, ids)
}
