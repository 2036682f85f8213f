//! Green's data of a graph with some edges removed.
//!
//! Removing edge `{s,t}` of conductance `c` is a rank-one change of the
//! Laplacian. With `a_st = G_ss + G_tt - 2 G_st - 1/c`:
//!
//! ```text
//! G~_uv  = G_uv - (G_us - G_ut)(G_sv - G_tv) / a_st
//! G~'_uv = G'_uv - [(G'_us - G'_ut - tau G_ut)(G_sv - G_tv)
//!                  + (G_us - G_ut)(G'_sv - G'_tv + tau G_tv)] / a_st
//! Z~/Z   = 1 - c (G_ss + G_tt - 2 G_st)
//! ```
//!
//! where `tau` is the exponent of the transport from `s` to `t`.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactnum::{FracValue, Rational, Ring};
use crate::latticegreen::{self, geometry, Lattice, Pt};

#[derive(Clone, Debug)]
pub struct CutContext {
    lattice: Option<Lattice>,
    window: Vec<Pt>,
    index: HashMap<Pt, usize>,
    g: Vec<Vec<FracValue>>,
    gp: Vec<Vec<FracValue>>,
    // undirected edges inside the window: conductance and transport exponent
    // from the smaller endpoint to the larger one
    edges: HashMap<(Pt, Pt), (Rational, i64)>,
    cuts: Vec<(Pt, Pt)>,
    zratio: FracValue,
}

fn key(s: Pt, t: Pt) -> (Pt, Pt) {
    if s < t {
        (s, t)
    } else {
        (t, s)
    }
}

/// Context on the window filled from the lattice Green's data.
pub fn fresh_context(lat: Lattice, window: &[Pt]) -> Result<CutContext> {
    let mut w: Vec<Pt> = Vec::new();
    for &p in window {
        if !lat.is_vertex(p) {
            return Err(Error::Invalid(format!("({},{}) is not a {} vertex", p.0, p.1, lat)));
        }
        if !w.contains(&p) {
            w.push(p);
        }
    }
    let n = w.len();
    let mut g = vec![vec![FracValue::zero(); n]; n];
    let mut gp = vec![vec![FracValue::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = FracValue::from(latticegreen::gbar(lat, w[i], w[j])?);
            g[i][j] = v.clone();
            g[j][i] = v;
            if i != j {
                let d = FracValue::from(latticegreen::gbar_prime(lat, w[i], w[j])?);
                gp[j][i] = d.neg();
                gp[i][j] = d;
            }
        }
    }
    let mut edges = HashMap::new();
    for i in 0..n {
        for j in i + 1..n {
            if lat.adjacent(w[i], w[j]) {
                let (s, t) = key(w[i], w[j]);
                let tau = match geometry::zipper_orientation(lat, s, t) {
                    Some((k, _)) if k == s => 1,
                    Some(_) => -1,
                    None => 0,
                };
                edges.insert((s, t), (Rational::from_integer(1.into()), tau));
            }
        }
    }
    let mut ctx = CutContext::from_parts(w, g, gp, edges);
    ctx.lattice = Some(lat);
    Ok(ctx)
}

impl CutContext {
    /// Context from explicit data. `edges` lists the graph edges among the
    /// window vertices with conductance and the exponent of the transport
    /// from the first endpoint to the second.
    pub fn from_parts(
        window: Vec<Pt>,
        g: Vec<Vec<FracValue>>,
        gp: Vec<Vec<FracValue>>,
        edges: HashMap<(Pt, Pt), (Rational, i64)>,
    ) -> CutContext {
        let index = window.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let edges = edges
            .into_iter()
            .map(|((s, t), (c, tau))| if s < t { ((s, t), (c, tau)) } else { ((t, s), (c, -tau)) })
            .collect();
        CutContext { lattice: None, window, index, g, gp, edges, cuts: Vec::new(), zratio: FracValue::one() }
    }

    pub fn lattice(&self) -> Option<Lattice> {
        self.lattice
    }

    pub fn window(&self) -> &[Pt] {
        &self.window
    }

    pub fn cuts(&self) -> &[(Pt, Pt)] {
        &self.cuts
    }

    pub fn contains(&self, p: Pt) -> bool {
        self.index.contains_key(&p)
    }

    fn idx(&self, p: Pt) -> Result<usize> {
        self.index
            .get(&p)
            .copied()
            .ok_or_else(|| Error::Invalid(format!("({},{}) is outside the window", p.0, p.1)))
    }

    pub fn g(&self, u: Pt, v: Pt) -> Result<&FracValue> {
        Ok(&self.g[self.idx(u)?][self.idx(v)?])
    }

    pub fn gp(&self, u: Pt, v: Pt) -> Result<&FracValue> {
        Ok(&self.gp[self.idx(u)?][self.idx(v)?])
    }

    /// Conductance of an uncut window edge.
    pub fn conductance(&self, s: Pt, t: Pt) -> Option<&Rational> {
        self.edges.get(&key(s, t)).map(|(c, _)| c)
    }

    /// Transport exponent from `s` to `t` along a window edge.
    pub fn tau(&self, s: Pt, t: Pt) -> Option<i64> {
        let (a, _) = key(s, t);
        self.edges.get(&key(s, t)).map(|&(_, tau)| if a == s { tau } else { -tau })
    }

    pub fn z_ratio(&self) -> &FracValue {
        &self.zratio
    }

    /// The context for the graph with `{s,t}` removed.
    pub fn cut_edge(&self, s: Pt, t: Pt) -> Result<CutContext> {
        let k = key(s, t);
        let (c, _) = self
            .edges
            .get(&k)
            .cloned()
            .ok_or_else(|| Error::Invalid(format!("{:?}-{:?} is not an edge inside the window", s, t)))?;
        if self.cuts.contains(&k) {
            return Err(Error::Invalid(format!("{:?}-{:?} is already cut", s, t)));
        }
        let mut out = self.clone();
        out.cuts.push(k);
        out.edges.remove(&k);
        if c.is_zero() {
            return Ok(out);
        }
        let tau = self.tau(s, t).unwrap();
        let (is, it) = (self.idx(s)?, self.idx(t)?);
        let (g, gp) = (&self.g, &self.gp);
        let r = g[is][is].add(&g[it][it]).sub(&g[is][it].scale(&Rational::from_integer(2.into())));
        let a = r.sub(&FracValue::from_rational(&c.recip()));
        if a.is_zero() {
            return Err(Error::DegenerateCut(format!("{:?}-{:?}", s, t)));
        }
        let inv = FracValue::one().div(&a).unwrap();
        let dalpha = gp[is][it].add(&gp[it][is]).neg().add(&g[it][is].sub(&g[is][it]).scale(&Rational::from_integer(tau.into())));
        if !dalpha.is_zero() {
            return Err(Error::Mismatch(format!("d/dz a_st = {} at cut {:?}-{:?}", dalpha, s, t)));
        }
        let n = self.window.len();
        let tau_r = Rational::from_integer(tau.into());
        // column vectors (G_us - G_ut) etc., indexed by u
        let x: Vec<FracValue> = (0..n).map(|u| g[u][is].sub(&g[u][it])).collect();
        let y: Vec<FracValue> = (0..n).map(|v| g[is][v].sub(&g[it][v])).collect();
        let xp: Vec<FracValue> =
            (0..n).map(|u| gp[u][is].sub(&gp[u][it]).sub(&g[u][it].scale(&tau_r))).collect();
        let yp: Vec<FracValue> =
            (0..n).map(|v| gp[is][v].sub(&gp[it][v]).add(&g[it][v].scale(&tau_r))).collect();
        for u in 0..n {
            for v in 0..n {
                out.g[u][v] = g[u][v].sub(&x[u].mul(&y[v]).mul(&inv));
                out.gp[u][v] = gp[u][v].sub(&xp[u].mul(&y[v]).add(&x[u].mul(&yp[v])).mul(&inv));
            }
        }
        out.zratio = self.zratio.mul(&FracValue::one().sub(&r.scale(&c)));
        Ok(out)
    }

    /// Applies the cuts in order.
    pub fn cut_all(&self, cuts: &[(Pt, Pt)]) -> Result<CutContext> {
        let mut c = self.clone();
        for &(s, t) in cuts {
            c = c.cut_edge(s, t)?;
        }
        Ok(c)
    }
}

pub fn cut_edge(ctx: &CutContext, s: Pt, t: Pt) -> Result<CutContext> {
    ctx.cut_edge(s, t)
}

pub fn z_ratio(ctx: &CutContext) -> &FracValue {
    ctx.z_ratio()
}
