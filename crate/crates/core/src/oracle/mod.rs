//! Independent ground truth on small finite graphs: exact line-bundle Green's
//! functions and response matrices over `Q(z)`, cycle-rooted grove
//! enumeration, and a Wilson's-algorithm sampler for the lattices.

mod finite;
mod green;
mod groves;
mod laurent;
mod random;
mod theorems;
mod wilson;

pub use green::{
    exact_green, green_at_one, green_first_order, response_first_order, response_matrix, value_and_deriv, GreenMatrix,
};
pub use finite::{cut_context, forest_weight, path_edge_probabilities, path_edge_probability};
pub use groves::{enumerate_groves, z_pairing, z_partition, GroveTable, GroveType};
pub use laurent::LaurentZ;
pub use random::{random_annular_graph, wired_grid};
pub use theorems::{check_response_theorems, Report};
pub use wilson::{wilson_sample, wilson_sample_with, IntensityTable};

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactnum::{int, Rational, Ring};

/// Undirected edge `{u,v}` with transport `z^zip` from `u` to `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub c: Rational,
    pub zip: i64,
}

impl Edge {
    /// Transport exponent from `x` to the other endpoint.
    pub fn zip_from(&self, x: usize) -> i64 {
        if x == self.u {
            self.zip
        } else {
            -self.zip
        }
    }

    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Finite graph with a line bundle given by zipper edges, an optional
/// Dirichlet vertex and an ordered list of nodes `1..=n`.
#[derive(Clone, Debug, Default)]
pub struct FiniteGraph {
    pub names: Vec<String>,
    pub edges: Vec<Edge>,
    pub boundary: Option<usize>,
    pub nodes: Vec<usize>,
}

impl FiniteGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> usize {
        self.names.push(name.into());
        self.names.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize, c: Rational, zip: i64) {
        self.edges.push(Edge { u, v, c, zip });
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn incident(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.len()];
        for (i, e) in self.edges.iter().enumerate() {
            inc[e.u].push(i);
            if e.v != e.u {
                inc[e.v].push(i);
            }
        }
        inc
    }

    /// The graph with every edge joining `u` and `v` removed.
    pub fn without_edge(&self, u: usize, v: usize) -> FiniteGraph {
        let mut g = self.clone();
        g.edges.retain(|e| !((e.u == u && e.v == v) || (e.u == v && e.v == u)));
        g
    }

    pub fn conductance(&self, u: usize, v: usize) -> Rational {
        self.edges
            .iter()
            .filter(|e| (e.u == u && e.v == v) || (e.u == v && e.v == u))
            .fold(Rational::zero(), |a, e| a + &e.c)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        for e in &self.edges {
            if e.u >= n || e.v >= n {
                return Err(Error::Invalid("edge endpoint out of range".into()));
            }
            if e.u == e.v {
                return Err(Error::Invalid(format!("self-loop at {}", self.names[e.u])));
            }
        }
        let mut seen = vec![false; n];
        for &x in &self.nodes {
            if x >= n || seen[x] {
                return Err(Error::Invalid("nodes must be distinct vertices".into()));
            }
            seen[x] = true;
        }
        if let Some(b) = self.boundary {
            if b >= n {
                return Err(Error::Invalid("boundary out of range".into()));
            }
        }
        // connectivity
        let inc = self.incident();
        let mut vis = vec![false; n];
        let mut stack = vec![0];
        if n > 0 {
            vis[0] = true;
        }
        while let Some(x) = stack.pop() {
            for &i in &inc[x] {
                let y = self.edges[i].other(x);
                if !vis[y] {
                    vis[y] = true;
                    stack.push(y);
                }
            }
        }
        if vis.iter().any(|v| !v) {
            return Err(Error::Invalid("graph is not connected".into()));
        }
        Ok(())
    }

    /// Line-bundle Laplacian, `Delta_{v,u} = -c z^zip` for transport `z^zip`
    /// from `u` to `v`.
    pub fn laplacian(&self) -> Vec<Vec<LaurentZ>> {
        let n = self.len();
        let mut d = vec![vec![LaurentZ::zero(); n]; n];
        for e in &self.edges {
            let c = LaurentZ::from_rational(&e.c);
            d[e.u][e.u] = d[e.u][e.u].add(&c);
            d[e.v][e.v] = d[e.v][e.v].add(&c);
            d[e.v][e.u] = d[e.v][e.u].sub(&LaurentZ::monomial(e.zip, e.c.clone()));
            d[e.u][e.v] = d[e.u][e.v].sub(&LaurentZ::monomial(-e.zip, e.c.clone()));
        }
        d
    }

    /// `Delta(1)` and `Delta'(1)`.
    pub fn laplacian_at_one(&self) -> (Vec<Vec<Rational>>, Vec<Vec<Rational>>) {
        let n = self.len();
        let mut d = vec![vec![Rational::zero(); n]; n];
        let mut dp = vec![vec![Rational::zero(); n]; n];
        for e in &self.edges {
            d[e.u][e.u] += &e.c;
            d[e.v][e.v] += &e.c;
            d[e.v][e.u] -= &e.c;
            d[e.u][e.v] -= &e.c;
            let t = &e.c * int(e.zip);
            dp[e.v][e.u] -= &t;
            dp[e.u][e.v] += &t;
        }
        (d, dp)
    }

    pub fn node_index(&self) -> HashMap<usize, usize> {
        self.nodes.iter().enumerate().map(|(i, &x)| (x, i + 1)).collect()
    }
}
