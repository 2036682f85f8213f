// Lattice-style queries on a finite wired graph.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::{green_at_one, FiniteGraph};
use crate::cutgraph::CutContext;
use crate::error::{Error, Result};
use crate::exactnum::{FracValue, Rational, Ring};
use crate::latticegreen::Pt;

/// Cut context on `window` filled with the exact Green's data of `g`, so the
/// intensity pipeline can run on a finite graph.
pub fn cut_context(g: &FiniteGraph, ids: &HashMap<Pt, usize>, window: &[Pt]) -> Result<CutContext> {
    let id = |p: &Pt| ids.get(p).copied().ok_or_else(|| Error::Invalid(format!("{:?} is not in the graph", p)));
    let wid: Vec<usize> = window.iter().map(id).collect::<Result<_>>()?;
    let (gv, gd) = green_at_one(g)?;
    let fv = |r: &Rational| FracValue::from_rational(r);
    let m = wid.iter().map(|&a| wid.iter().map(|&b| fv(&gv[a][b])).collect()).collect();
    let mp = wid.iter().map(|&a| wid.iter().map(|&b| fv(&gd[a][b])).collect()).collect();
    let mut edges = HashMap::new();
    for e in &g.edges {
        let (p, q) = (wid.iter().position(|&x| x == e.u), wid.iter().position(|&x| x == e.v));
        if let (Some(p), Some(q)) = (p, q) {
            edges.insert((window[p], window[q]), (e.c.clone(), e.zip));
        }
    }
    Ok(CutContext::from_parts(window.to_vec(), m, mp, edges))
}

/// Probability that the tree path from `o` to the boundary of a uniform
/// weighted spanning tree crosses the edge from `v` to `w`, by enumeration.
pub fn path_edge_probability(g: &FiniteGraph, o: usize, v: usize, w: usize) -> Result<Rational> {
    Ok(path_edge_probabilities(g, o, &[(v, w)])?.remove(0))
}

/// Same as [`path_edge_probability`] for several directed edges, counting
/// the spanning trees once.
pub fn path_edge_probabilities(g: &FiniteGraph, o: usize, edges: &[(usize, usize)]) -> Result<Vec<Rational>> {
    let b = g.boundary.ok_or_else(|| Error::Invalid("graph has no boundary".into()))?;
    let trees = forest_weight(g, &[vec![b]])?;
    let mut out = Vec::with_capacity(edges.len());
    for &(v, w) in edges {
        let c = g.conductance(v, w);
        if w == o || c.is_zero() {
            out.push(Rational::zero());
            continue;
        }
        let h = g.without_edge(v, w);
        let near = if o == v { vec![v] } else { vec![o, v] };
        let forests = forest_weight(&h, &[near, vec![w, b]])?;
        out.push(c * forests / &trees);
    }
    Ok(out)
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Frontier {
    comp: Vec<u8>,
    // block held by each component, u8::MAX when it holds no marked vertex
    block: Vec<u8>,
    done: u64,
}

impl Frontier {
    fn canonical(mut self) -> Frontier {
        let mut relabel = vec![u8::MAX; self.block.len()];
        let mut block = Vec::new();
        for c in self.comp.iter_mut() {
            let k = *c as usize;
            if relabel[k] == u8::MAX {
                relabel[k] = block.len() as u8;
                block.push(self.block[k]);
            }
            *c = relabel[k];
        }
        self.block = block;
        self
    }
}

/// Weighted count of spanning forests of `g` (transports ignored) whose
/// trees are in bijection with `blocks`, each tree containing its block.
pub fn forest_weight(g: &FiniteGraph, blocks: &[Vec<usize>]) -> Result<Rational> {
    g.validate()?;
    let n = g.len();
    if blocks.len() > 64 {
        return Err(Error::TooLarge(format!("{} blocks", blocks.len())));
    }
    let mut block_of = vec![u8::MAX; n];
    for (i, bl) in blocks.iter().enumerate() {
        for &x in bl {
            if x >= n || block_of[x] != u8::MAX {
                return Err(Error::Invalid("blocks must be disjoint vertex sets".into()));
            }
            block_of[x] = i as u8;
        }
    }
    let inc = g.incident();
    let mut last = vec![0usize; n];
    for x in 0..n {
        last[x] = x;
        for &e in &inc[x] {
            last[x] = last[x].max(g.edges[e].other(x));
        }
    }
    let mut frontier: Vec<usize> = Vec::new();
    let mut states: HashMap<Frontier, Rational> = HashMap::new();
    states.insert(Frontier { comp: vec![], block: vec![], done: 0 }, Rational::one());
    for x in 0..n {
        let sx = frontier.len();
        frontier.push(x);
        let bx = block_of[x];
        states = states
            .into_iter()
            .filter(|(s, _)| bx == u8::MAX || s.done >> bx & 1 == 0)
            .map(|(mut s, w)| {
                s.comp.push(s.block.len() as u8);
                s.block.push(bx);
                (s, w)
            })
            .collect();
        for &ei in &inc[x] {
            let e = &g.edges[ei];
            let y = e.other(x);
            if y >= x {
                continue;
            }
            let sy = frontier.iter().position(|&f| f == y).expect("neighbor on frontier");
            let mut next: HashMap<Frontier, Rational> = HashMap::with_capacity(states.len() * 2);
            for (s, w) in states {
                let (cx, cy) = (s.comp[sx], s.comp[sy]);
                let (bx, by) = (s.block[cx as usize], s.block[cy as usize]);
                if cx != cy && (bx == u8::MAX || by == u8::MAX || bx == by) {
                    let mut t = s.clone();
                    for c in t.comp.iter_mut() {
                        if *c == cy {
                            *c = cx;
                        }
                    }
                    t.block[cx as usize] = bx.min(by);
                    *next.entry(t.canonical()).or_insert_with(Rational::zero) += &w * &e.c;
                }
                *next.entry(s).or_insert_with(Rational::zero) += w;
            }
            states = next;
        }
        let keep: Vec<bool> = frontier.iter().map(|&f| last[f] > x).collect();
        let mut next: HashMap<Frontier, Rational> = HashMap::with_capacity(states.len());
        'st: for (s, w) in states {
            let mut t = Frontier { comp: Vec::new(), block: s.block.clone(), done: s.done };
            for (i, &c) in s.comp.iter().enumerate() {
                if keep[i] {
                    t.comp.push(c);
                }
            }
            for c in 0..s.block.len() as u8 {
                if s.comp.contains(&c) && !t.comp.contains(&c) {
                    let bl = s.block[c as usize];
                    if bl == u8::MAX || t.done >> bl & 1 == 1 {
                        continue 'st;
                    }
                    t.done |= 1 << bl;
                }
            }
            *next.entry(t.canonical()).or_insert_with(Rational::zero) += w;
        }
        states = next;
        frontier = frontier.into_iter().zip(keep).filter(|p| p.1).map(|p| p.0).collect();
    }
    let all = if blocks.len() == 64 { u64::MAX } else { (1u64 << blocks.len()) - 1 };
    Ok(states.into_iter().filter(|(s, _)| s.done == all).fold(Rational::zero(), |a, (_, w)| a + w))
}
