// Cycle-rooted grove enumeration by a vertex-by-vertex frontier sweep.
// Each frontier vertex carries its component and gauge `phi` (exponent of
// the transport from the component root). A component is either a tree
// holding marks or a mark-free tree with one cycle; the cycle contributes
// 2 - w - 1/w with w its monodromy.

use std::collections::{BTreeMap, HashMap};

use super::{FiniteGraph, LaurentZ};
use crate::combinat::{Partition, PartialPairing};
use crate::error::{Error, Result};
use crate::exactnum::{int, Ring};

const MAX_STATES: usize = 4_000_000;

/// Connection type of a grove: parts of marked vertices, each vertex with
/// the transport exponent from the part's first vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroveType {
    pub parts: Vec<Vec<(usize, i64)>>,
}

pub type GroveTable = BTreeMap<GroveType, LaurentZ>;

type Part = Vec<(usize, i64)>;

#[derive(Clone, PartialEq, Eq, Hash)]
struct State {
    comp: Vec<u8>,
    phi: Vec<i64>,
    cyc: Vec<bool>,
    marks: Vec<Part>,
    closed: Vec<Part>,
}

fn normalize_part(mut p: Part) -> Part {
    p.sort_unstable();
    let base = p[0].1;
    for x in p.iter_mut() {
        x.1 -= base;
    }
    p
}

impl State {
    fn canonical(mut self) -> State {
        let k = self.cyc.len();
        let mut relabel = vec![u8::MAX; k];
        let mut shift = vec![0i64; k];
        let mut next = 0u8;
        for (s, &c) in self.comp.iter().enumerate() {
            let c = c as usize;
            if relabel[c] == u8::MAX {
                relabel[c] = next;
                shift[c] = self.phi[s];
                next += 1;
            }
        }
        let m = next as usize;
        let mut cyc = vec![false; m];
        let mut marks = vec![Vec::new(); m];
        for c in 0..k {
            if relabel[c] == u8::MAX {
                continue;
            }
            let r = relabel[c] as usize;
            cyc[r] = self.cyc[c];
            let mut mk: Part = self.marks[c].iter().map(|&(x, p)| (x, p - shift[c])).collect();
            mk.sort_unstable();
            marks[r] = mk;
        }
        for s in 0..self.comp.len() {
            let c = self.comp[s] as usize;
            self.phi[s] -= shift[c];
            self.comp[s] = relabel[c];
        }
        self.cyc = cyc;
        self.marks = marks;
        self.closed.sort();
        self
    }
}

fn cycle_weight(k: i64) -> LaurentZ {
    LaurentZ::from_rational(&int(2)).sub(&LaurentZ::z_pow(k)).sub(&LaurentZ::z_pow(-k))
}

/// All cycle-rooted groves with the given marked vertices, grouped by
/// connection type. Unmarked vertices are interior.
pub fn enumerate_groves(g: &FiniteGraph, marks: &[usize]) -> Result<GroveTable> {
    g.validate()?;
    let n = g.len();
    let mut mark_of = vec![usize::MAX; n];
    for (i, &m) in marks.iter().enumerate() {
        if m >= n || mark_of[m] != usize::MAX {
            return Err(Error::Invalid("marks must be distinct vertices".into()));
        }
        mark_of[m] = i;
    }
    let mut order: Vec<usize> = Vec::with_capacity(n);
    if let Some(b) = g.boundary {
        order.push(b);
    }
    order.extend((0..n).filter(|&v| Some(v) != g.boundary));
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let inc = g.incident();
    // a vertex leaves the frontier after its last neighbor is added
    let mut last = vec![0usize; n];
    for v in 0..n {
        last[v] = pos[v];
        for &e in &inc[v] {
            last[v] = last[v].max(pos[g.edges[e].other(v)]);
        }
    }

    let mut frontier: Vec<usize> = Vec::new();
    let mut states: HashMap<State, LaurentZ> = HashMap::new();
    states.insert(State { comp: vec![], phi: vec![], cyc: vec![], marks: vec![], closed: vec![] }, LaurentZ::one());

    for (step, &x) in order.iter().enumerate() {
        let sx = frontier.len();
        frontier.push(x);
        if frontier.len() > 250 {
            return Err(Error::TooLarge(format!("frontier of {} vertices", frontier.len())));
        }
        let mut next: HashMap<State, LaurentZ> = HashMap::with_capacity(states.len());
        for (mut s, w) in states {
            let c = s.cyc.len() as u8;
            s.comp.push(c);
            s.phi.push(0);
            s.cyc.push(false);
            s.marks.push(if mark_of[x] != usize::MAX { vec![(mark_of[x], 0)] } else { vec![] });
            next.insert(s, w);
        }
        states = next;
        for &ei in &inc[x] {
            let e = &g.edges[ei];
            let y = e.other(x);
            if pos[y] >= step {
                continue;
            }
            let sy = frontier.iter().position(|&f| f == y).expect("neighbor on frontier");
            let tau = e.zip_from(x);
            let mut next: HashMap<State, LaurentZ> = HashMap::with_capacity(states.len() * 2);
            let mut push = |s: State, w: LaurentZ| {
                let s = s.canonical();
                match next.get_mut(&s) {
                    Some(v) => {
                        *v = v.add(&w);
                        if v.is_zero() {
                            next.remove(&s);
                        }
                    }
                    None => {
                        next.insert(s, w);
                    }
                }
            };
            for (s, w) in states {
                push(s.clone(), w.clone());
                let (cx, cy) = (s.comp[sx] as usize, s.comp[sy] as usize);
                let hol = s.phi[sx] + tau - s.phi[sy];
                if cx == cy {
                    if s.cyc[cx] || !s.marks[cx].is_empty() || hol == 0 {
                        continue;
                    }
                    let mut t = s;
                    t.cyc[cx] = true;
                    push(t, w.mul(&cycle_weight(hol)).scale(&e.c));
                } else {
                    if (s.cyc[cx] && (s.cyc[cy] || !s.marks[cy].is_empty()))
                        || (s.cyc[cy] && !s.marks[cx].is_empty())
                    {
                        continue;
                    }
                    // move y's component into x's gauge
                    let mut t = s;
                    for i in 0..t.comp.len() {
                        if t.comp[i] as usize == cy {
                            t.comp[i] = cx as u8;
                            t.phi[i] += hol;
                        }
                    }
                    let moved: Part = t.marks[cy].drain(..).map(|(m, p)| (m, p + hol)).collect();
                    t.marks[cx].extend(moved);
                    t.cyc[cx] |= t.cyc[cy];
                    t.cyc[cy] = false;
                    push(t, w.scale(&e.c));
                }
            }
            states = next;
            if states.len() > MAX_STATES {
                return Err(Error::TooLarge(format!("{} frontier states", states.len())));
            }
        }
        // retire finished vertices
        let keep: Vec<bool> = frontier.iter().map(|&v| last[v] > step).collect();
        if keep.iter().all(|&k| k) {
            continue;
        }
        let mut next: HashMap<State, LaurentZ> = HashMap::with_capacity(states.len());
        'st: for (s, w) in states {
            let mut t = State { comp: vec![], phi: vec![], cyc: s.cyc.clone(), marks: s.marks.clone(), closed: s.closed.clone() };
            for i in 0..s.comp.len() {
                if keep[i] {
                    t.comp.push(s.comp[i]);
                    t.phi.push(s.phi[i]);
                }
            }
            for c in 0..s.cyc.len() {
                let had = s.comp.contains(&(c as u8));
                if had && !t.comp.contains(&(c as u8)) {
                    if s.marks[c].is_empty() {
                        if !s.cyc[c] {
                            continue 'st;
                        }
                    } else {
                        t.closed.push(normalize_part(s.marks[c].clone()));
                    }
                }
            }
            let t = t.canonical();
            match next.get_mut(&t) {
                Some(v) => *v = v.add(&w),
                None => {
                    next.insert(t, w);
                }
            }
        }
        next.retain(|_, v| !v.is_zero());
        states = next;
        frontier = frontier.into_iter().zip(keep).filter(|x| x.1).map(|x| x.0).collect();
    }
    let mut out = GroveTable::new();
    for (s, w) in states {
        let parts: Vec<Part> = s
            .closed
            .into_iter()
            .map(|p| p.into_iter().map(|(m, e)| (marks[m], e)).collect())
            .map(normalize_part)
            .collect();
        let mut parts = parts;
        parts.sort();
        let key = GroveType { parts };
        let v = out.entry(key).or_insert_with(LaurentZ::zero);
        *v = v.add(&w);
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

fn node(g: &FiniteGraph, i: usize) -> Result<usize> {
    g.nodes.get(i.wrapping_sub(1)).copied().ok_or_else(|| Error::Invalid(format!("node {} out of range", i)))
}

fn same_parts(t: &GroveType, parts: &[Vec<usize>]) -> bool {
    if t.parts.len() != parts.len() {
        return false;
    }
    let mut a: Vec<Vec<usize>> = t.parts.iter().map(|p| p.iter().map(|x| x.0).collect()).collect();
    for p in a.iter_mut() {
        p.sort_unstable();
    }
    a.sort();
    a == parts
}

/// `Z[sigma]`: weighted sum of cycle-rooted groves of type `sigma`, nodes
/// not listed in `sigma` being interior.
pub fn z_partition(g: &FiniteGraph, sigma: &Partition) -> Result<LaurentZ> {
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for p in &sigma.parts {
        let mut q = p.iter().map(|&i| node(g, i)).collect::<Result<Vec<_>>>()?;
        q.sort_unstable();
        parts.push(q);
    }
    parts.sort();
    let marks: Vec<usize> = parts.iter().flatten().copied().collect();
    let table = enumerate_groves(g, &marks)?;
    Ok(table.iter().filter(|(t, _)| same_parts(t, &parts)).fold(LaurentZ::zero(), |a, (_, w)| a.add(w)))
}

/// `Z[sigma]` times the transports to each pair's first node from its
/// second.
pub fn z_pairing(g: &FiniteGraph, sigma: &PartialPairing) -> Result<LaurentZ> {
    let mut parts: Vec<Vec<usize>> = Vec::new();
    let mut pairs = Vec::new();
    for &(r, s) in &sigma.pairs {
        let (r, s) = (node(g, r)?, node(g, s)?);
        pairs.push((r, s));
        let mut q = vec![r, s];
        q.sort_unstable();
        parts.push(q);
    }
    for &t in &sigma.singletons {
        parts.push(vec![node(g, t)?]);
    }
    parts.sort();
    let marks: Vec<usize> = parts.iter().flatten().copied().collect();
    let table = enumerate_groves(g, &marks)?;
    let mut acc = LaurentZ::zero();
    for (t, w) in &table {
        if !same_parts(t, &parts) {
            continue;
        }
        let phi: HashMap<usize, i64> = t.parts.iter().flatten().copied().collect();
        let e: i64 = pairs.iter().map(|&(r, s)| phi[&r] - phi[&s]).sum();
        acc = acc.add(&w.shift(e));
    }
    Ok(acc)
}
